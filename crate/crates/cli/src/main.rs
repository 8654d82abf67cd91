//! `harmgeo`: geodesics, Poincaré sections and Kovacic certificates for
//! spherical-harmonic surfaces.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use harmgeo::algebra::{parse_rational, rational_to_f64, Rational};
use harmgeo::geodesic::{integrate, lemma1_critical_eps, GeodesicState, Trajectory};
use harmgeo::kovacic::{outcome_json, run_kovacic, table1, table1_json, table1_text, SearchResult, Verdict};
use harmgeo::nve::{equatorial_nve, nve_json};
use harmgeo::poincare::{
    find_closed_geodesics, generate_section, write_closed_json, write_section_csv, write_section_svg, FixedPointOptions,
    GeodesicFamily, SectionConfig,
};
use harmgeo::surface::Chart;
use harmgeo::{KFuchsianOde, Surface};
use serde_json::json;

/// Exact ε: "p/q", an integer, or a finite decimal such as 0.25. Numeric
/// commands use the nearest f64.
fn parse_eps(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

#[derive(Debug, Parser)]
#[command(name = "harmgeo", version, about, propagate_version = true)]
struct Cli {
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Output format; each command documents the formats it accepts.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for random initial conditions.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one geodesic; writes trace.csv (default), trace.json (summary) or trace.svg.
    Trace(TraceArgs),
    /// Equatorial Poincaré section of a sectoral surface; writes psection.csv and
    /// psection.svg, or only the one chosen with --format.
    Psection(PsectionArgs),
    /// Locate a closed geodesic on a sectoral surface and classify its
    /// stability; writes closed.json.
    Closed(ClosedArgs),
    /// Largest ε for which Γ^θ_φφ keeps its sign off the equator of the
    /// n-th sectoral surface, so every geodesic keeps returning to the
    /// equator; writes lemma1.json.
    Lemma1 {
        #[arg(long)]
        n: u32,
    },
    /// Normal variational equation along the equator in exact arithmetic; writes nve.json.
    Nve(ExactArgs),
    /// Run the Kovacic algorithm on the equatorial NVE; writes kovacic.json.
    Kovacic(ExactArgs),
    /// Candidate counts per case for n = 2..=12; prints the table and writes
    /// table1.txt (and table1.json with --format json).
    Table1 {
        /// Sample ε; the counts do not depend on it.
        #[arg(long, default_value = "1/4", value_parser = parse_eps)]
        eps: Rational,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SurfaceKind {
    Sphere,
    Zonal,
    Sectoral,
    Tesseral,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[arg(long, value_enum, default_value = "sectoral")]
    surface: SurfaceKind,
    /// Order of a sectoral surface.
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Degree of a zonal or tesseral surface.
    #[arg(long, default_value_t = 2)]
    l: u32,
    /// Order of a tesseral surface.
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value = "0.1", value_parser = parse_eps)]
    eps: Rational,
    #[arg(long, default_value_t = PI / 2.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Initial velocity direction; rescaled to unit speed.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta_dot: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    phi_dot: f64,
    /// Arc length to integrate.
    #[arg(long, default_value_t = 100.0)]
    s_max: f64,
    /// Local error tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct PsectionArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value = "0.1", value_parser = parse_eps)]
    eps: Rational,
    /// Number of trajectories.
    #[arg(long, default_value_t = 40)]
    traj: usize,
    /// Crossings per trajectory.
    #[arg(long, default_value_t = 400)]
    crossings: usize,
    /// Section through a meridian plane instead of the equator.
    #[arg(long)]
    rotated: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Planar,
    Perpendicular,
    Oblique,
    Island,
}

#[derive(Debug, Args)]
struct ClosedArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value = "0.1", value_parser = parse_eps)]
    eps: Rational,
    #[arg(long, value_enum, default_value = "planar")]
    family: FamilyArg,
    /// Section returns per closing.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Initial guess for φ (required for oblique and island orbits).
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Initial guess for φ̇.
    #[arg(long, allow_negative_numbers = true)]
    phi_dot: Option<f64>,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(long)]
    n: u32,
    /// Exact ε in (0, 1), e.g. 1/2 or 0.25.
    #[arg(long, value_parser = parse_eps)]
    eps: Rational,
}

/// Bad input (exit 1) or a failed computation (exit 2).
enum Failure {
    Usage(String),
    Compute(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Compute(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(t) = cli.threads {
        if t == 0 {
            return usage("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    fs::create_dir_all(&cli.out_dir).with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let out = Output { dir: &cli.out_dir };
    match &cli.command {
        Command::Trace(a) => trace(a, cli.format.unwrap_or(Format::Csv), &out),
        Command::Psection(a) => psection(a, cli.format, cli.seed, &out),
        Command::Closed(a) => {
            only_json(cli.format, "closed")?;
            closed(a, &out)
        }
        Command::Lemma1 { n } => {
            only_json(cli.format, "lemma1")?;
            lemma1(*n, &out)
        }
        Command::Nve(a) => {
            only_json(cli.format, "nve")?;
            nve(a, &out)
        }
        Command::Kovacic(a) => {
            only_json(cli.format, "kovacic")?;
            kovacic(a, &out)
        }
        Command::Table1 { eps } => match cli.format {
            None | Some(Format::Json) => table(eps, cli.format.is_some(), &out),
            Some(f) => usage(format!("table1 writes text or json, not {}", f.ext())),
        },
    }
}

fn only_json(format: Option<Format>, cmd: &str) -> Outcome {
    match format {
        None | Some(Format::Json) => Ok(()),
        Some(f) => usage(format!("{cmd} writes json, not {}", f.ext())),
    }
}

struct Output<'a> {
    dir: &'a Path,
}

impl Output<'_> {
    fn write(&self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Outcome {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        body(&mut w).and_then(|()| w.flush()).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    fn json(&self, name: &str, value: &serde_json::Value) -> Outcome {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)
        })
    }
}

fn unit_eps(eps: &Rational) -> Result<f64, Failure> {
    let e = rational_to_f64(eps);
    if !(e > 0.0 && e < 1.0) {
        return usage(format!("--eps must lie in (0, 1), got {eps}"));
    }
    Ok(e)
}

fn sectoral(n: u32, eps: &Rational) -> Result<Surface, Failure> {
    if n == 0 {
        return usage("--n must be at least 1");
    }
    Surface::sectoral(n, unit_eps(eps)?).or_else(|e| usage(e.to_string()))
}

fn trace(a: &TraceArgs, format: Format, out: &Output) -> Outcome {
    let eps = unit_eps(&a.eps)?;
    let surface = match a.surface {
        SurfaceKind::Sphere => Ok(Surface::sphere()),
        SurfaceKind::Zonal => Surface::zonal(a.l, eps),
        SurfaceKind::Sectoral => Surface::sectoral(a.n, eps),
        SurfaceKind::Tesseral => Surface::tesseral(a.l, a.m, eps),
    }
    .or_else(|e| usage(e.to_string()))?;
    if !(a.s_max > 0.0 && a.tol > 0.0) {
        return usage("--s-max and --tol must be positive");
    }
    let start = GeodesicState::normalized(&surface, a.theta, a.phi, a.theta_dot, a.phi_dot).or_else(|e| usage(e.to_string()))?;
    let traj = integrate(&surface, start, a.s_max, a.tol)?;
    let name = format!("trace.{}", format.ext());
    match format {
        Format::Csv => out.write(&name, |w| traj.write_csv(w))?,
        Format::Json => out.json(&name, &trace_summary(&traj))?,
        Format::Svg => out.write(&name, |w| w.write_all(trace_svg(&traj).as_bytes()))?,
    }
    println!(
        "{} steps, {} equatorial crossings, max |2H - 1| = {:.2e}",
        traj.steps,
        traj.crossings.len(),
        traj.max_energy_drift()
    );
    Ok(())
}

fn trace_summary(traj: &Trajectory<f64>) -> serde_json::Value {
    let state = |g: &GeodesicState<f64>| json!({ "s": g.s, "theta": g.theta, "phi": g.phi, "theta_dot": g.theta_dot, "phi_dot": g.phi_dot });
    json!({
        "steps": traj.steps,
        "chart_swaps": traj.chart_swaps,
        "max_energy_drift": traj.max_energy_drift(),
        "end": state(&traj.end),
        "crossings": traj.crossings.iter().map(|c| {
            json!({ "index": c.index, "upward": c.upward, "state": state(&c.state) })
        }).collect::<Vec<_>>(),
    })
}

/// Ground track in the (φ, θ) rectangle, broken where φ wraps.
fn trace_svg(traj: &Trajectory<f64>) -> String {
    let (width, height, pad) = (800.0, 420.0, 30.0);
    let sx = |phi: f64| pad + phi.rem_euclid(TAU) / TAU * (width - 2.0 * pad);
    let sy = |theta: f64| pad + theta / PI * (height - 2.0 * pad);
    let mut paths = Vec::new();
    let mut cur = String::new();
    let mut last: Option<f64> = None;
    for (g, _) in &traj.samples {
        let x = sx(g.phi);
        if last.is_some_and(|l| (x - l).abs() > (width - 2.0 * pad) / 2.0) {
            paths.push(std::mem::take(&mut cur));
        }
        let _ = write!(cur, "{}{x:.2},{:.2}", if cur.is_empty() { "M" } else { " L" }, sy(g.theta));
        last = Some(x);
    }
    paths.push(cur);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <rect x=\"{pad}\" y=\"{pad}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        width - 2.0 * pad,
        height - 2.0 * pad
    );
    for p in paths.iter().filter(|p| !p.is_empty()) {
        let _ = writeln!(s, "<path d=\"{p}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"0.8\"/>");
    }
    s.push_str("</svg>\n");
    s
}

fn psection(a: &PsectionArgs, format: Option<Format>, seed: u64, out: &Output) -> Outcome {
    let mut surface = sectoral(a.n, &a.eps)?;
    if a.rotated {
        surface = surface.with_chart(Chart::Meridian);
    }
    if a.traj == 0 || a.crossings == 0 {
        return usage("--traj and --crossings must be positive");
    }
    let section = generate_section(&surface, &SectionConfig::new(a.traj, a.crossings, seed))?;
    let formats = format.map_or(vec![Format::Csv, Format::Svg], |f| vec![f]);
    for f in formats {
        let name = format!("psection.{}", f.ext());
        match f {
            Format::Csv => out.write(&name, |w| write_section_csv(&section, w))?,
            Format::Svg => out.write(&name, |w| write_section_svg(&section, w))?,
            Format::Json => out.json(
                &name,
                &json!({ "points": section.points, "failures": section.failures, "phi_dot_max": section.phi_dot_max }),
            )?,
        }
    }
    println!(
        "{} points from {} trajectories ({} stopped early)",
        section.points.len(),
        a.traj,
        section.failures.len()
    );
    for f in &section.failures {
        eprintln!("trajectory {} stopped after {} crossings: {}", f.traj_id, f.crossings, f.reason);
    }
    Ok(())
}

fn closed(a: &ClosedArgs, out: &Output) -> Outcome {
    let surface = sectoral(a.n, &a.eps)?;
    if a.k == 0 {
        return usage("--k must be positive");
    }
    let (family, default_phi) = match a.family {
        FamilyArg::Planar => (GeodesicFamily::Planar, Some(0.0)),
        FamilyArg::Perpendicular => (GeodesicFamily::Perpendicular, Some(PI / (2.0 * f64::from(a.n)))),
        FamilyArg::Oblique => (GeodesicFamily::Oblique, None),
        FamilyArg::Island => (GeodesicFamily::Island, None),
    };
    let Some(phi) = a.phi.or(default_phi) else {
        return usage("oblique and island orbits need a --phi guess");
    };
    let opts = FixedPointOptions { period: a.k, ..Default::default() };
    let found = find_closed_geodesics(&surface, family, (phi, a.phi_dot.unwrap_or(0.0)), &opts)?;
    out.write("closed.json", |w| {
        write_closed_json(std::slice::from_ref(&found), &mut *w)?;
        writeln!(w)
    })?;
    let m = &found.monodromy;
    println!(
        "{}: phi = {:.10}, phi_dot = {:.10}, trace = {:.8}, det = {:.8}",
        serde_json::to_value(found.classification)?.as_str().unwrap_or_default(),
        found.phi,
        found.phi_dot,
        m[0][0] + m[1][1],
        found.det()
    );
    Ok(())
}

fn lemma1(n: u32, out: &Output) -> Outcome {
    if n < 2 {
        return usage("lemma1 needs --n of at least 2");
    }
    let eps = lemma1_critical_eps(n);
    out.json("lemma1.json", &json!({ "n": n, "critical_eps": eps }))?;
    println!("n = {n}: critical eps = {eps:.6}");
    Ok(())
}

fn exact_input(a: &ExactArgs) -> Result<(), Failure> {
    if a.n == 0 {
        return usage("--n must be at least 1");
    }
    unit_eps(&a.eps).map(|_| ())
}

fn nve(a: &ExactArgs, out: &Output) -> Outcome {
    exact_input(a)?;
    let data = equatorial_nve(a.n, &a.eps)?;
    out.json("nve.json", &nve_json(&data))?;
    println!("n = {}, eps = {}: r = {}", a.n, a.eps, data.r);
    Ok(())
}

fn kovacic(a: &ExactArgs, out: &Output) -> Outcome {
    exact_input(a)?;
    let ode = KFuchsianOde::from_nve(&equatorial_nve(a.n, &a.eps)?);
    let outcome = run_kovacic(&ode)?;
    let mut report = outcome_json(&ode, &outcome);
    report["input"] = json!({ "n": a.n, "eps": a.eps.to_string() });
    report["scope"] = json!(format!(
        "The verdict is certified for eps = {} only; other values of eps are not covered by this run.",
        a.eps
    ));
    out.json("kovacic.json", &report)?;
    let summary = match &outcome.verdict {
        Verdict::Solvable { case, d, .. } => format!("Solvable (case {case}, d = {d})"),
        Verdict::Unsolvable => {
            let failed = outcome
                .ledger
                .iter()
                .filter(|e| matches!(e.result, SearchResult::NoPolynomial { .. }))
                .count();
            format!("Unsolvable ({failed} of {} candidates without a polynomial)", outcome.ledger.len())
        }
    };
    println!("n = {}, eps = {}: {summary}", a.n, a.eps);
    Ok(())
}

fn table(eps: &Rational, with_json: bool, out: &Output) -> Outcome {
    unit_eps(eps)?;
    let rows = (2..=12).map(|n| Ok((n, table1(n, eps)?))).collect::<anyhow::Result<Vec<_>>>()?;
    let text = table1_text(&rows);
    out.write("table1.txt", |w| w.write_all(text.as_bytes()))?;
    if with_json {
        out.json("table1.json", &table1_json(&rows))?;
    }
    print!("{text}");
    Ok(())
}
