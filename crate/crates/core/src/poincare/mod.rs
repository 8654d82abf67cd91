//! Equatorial Poincaré sections of the geodesic flow, the first-return map,
//! and closed geodesics as its fixed points.
//!
//! The section is always the home-chart equator θ = π/2 of the surface,
//! crossed with θ̇ > 0. Giving the surface [`Chart::Meridian`] turns this
//! into the meridianal section through the original poles.

mod closed;
mod output;

use std::f64::consts::TAU;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::geodesic::{integrate_with, GeodesicError, GeodesicState, IntegrateOptions};
use crate::surface::{Chart, PolarSurface, SurfaceError};
use crate::Real;

pub use closed::{classify, find_closed_geodesics, monodromy, ClosedGeodesic, FixedPointOptions, GeodesicFamily, Stability};
pub use output::{write_closed_json, write_section_csv, write_section_svg};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PoincareError {
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error("(φ, φ̇) = ({phi}, {phi_dot}) lies outside the section ellipse")]
    Infeasible { phi: f64, phi_dot: f64 },
    #[error("no return to the section within arc length {0}")]
    NoReturn(f64),
    #[error("fixed-point iteration failed: {0}")]
    Divergence(String),
}

impl From<SurfaceError> for PoincareError {
    fn from(e: SurfaceError) -> Self {
        PoincareError::Geodesic(e.into())
    }
}

/// Largest φ̇ that is admissible at every φ on the equator of the sectoral
/// surface `r = 1 + ε sinⁿθ cos nφ`, i.e. `1/√max_φ g_φφ`.
///
/// The overall maximum of |φ̇| on the section is larger: `1/(1−ε)`, see
/// [`phi_dot_bound`].
pub fn phi_dot_max<T: Real>(n: u32, eps: T) -> T {
    let k = T::c(f64::from(n * n)) - T::one();
    if n <= 1 || eps * k < T::one() {
        (T::one() + eps).recip()
    } else {
        let n2 = T::c(f64::from(n * n));
        (n2 * (T::one() + eps * eps * k) / k).sqrt().recip()
    }
}

/// Maximum of |φ̇| over the whole section of the sectoral surface, reached
/// at the troughs `cos nφ = −1`.
pub fn phi_dot_bound<T: Real>(n: u32, eps: T) -> T {
    if n == 0 {
        T::one()
    } else {
        (T::one() - eps).recip()
    }
}

/// Largest |φ̇| admissible at the section point with angle `phi`:
/// `√(g_θθ / det g)`.
pub fn phi_dot_limit<T: Real>(surface: &PolarSurface<T>, phi: T) -> Result<T, SurfaceError> {
    let m = surface.metric_at(T::FRAC_PI_2(), phi)?;
    Ok((m.g_tt / m.det).sqrt())
}

/// `(uniform, overall)` φ̇ ranges of the section: closed forms for sectoral
/// surfaces in the standard chart, a dense scan otherwise.
pub fn section_ranges<T: Real>(surface: &PolarSurface<T>) -> Result<(T, T), SurfaceError> {
    if let (Some(n), Chart::Standard) = (surface.sectoral_order(), surface.chart()) {
        return Ok((phi_dot_max(n, surface.eps()), phi_dot_bound(n, surface.eps())));
    }
    let mut lo = T::infinity();
    let mut hi = T::zero();
    let samples = 4096;
    for i in 0..samples {
        let phi = T::c(TAU * i as f64 / samples as f64);
        let v = phi_dot_limit(surface, phi)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Applies the standard-chart rotation about the x-axis: original `(θ, φ)`
/// to meridianal `(ϑ, φ̂)`, with `sin θ = √(1 − sin²ϑ sin²φ̂)`.
pub fn rotate_chart<T: Real>(theta: T, phi: T) -> (T, T) {
    Chart::Meridian.from_standard(theta, phi)
}

/// Inverse of [`rotate_chart`].
pub fn unrotate_chart<T: Real>(vartheta: T, phi_hat: T) -> (T, T) {
    Chart::Meridian.to_standard(vartheta, phi_hat)
}

/// Unit-speed state on the section with θ̇ > 0.
pub fn launch<T: Real>(surface: &PolarSurface<T>, phi: T, phi_dot: T) -> Result<GeodesicState<T>, PoincareError> {
    let theta = T::FRAC_PI_2();
    let m = surface.metric_at(theta, phi)?;
    // g_θθ a² + 2 g_θφ φ̇ a + g_φφ φ̇² − 1 = 0
    let b = m.g_tp * phi_dot;
    let disc = b * b - m.g_tt * (m.g_pp * phi_dot * phi_dot - T::one());
    let infeasible = || PoincareError::Infeasible {
        phi: phi.to_f64().unwrap_or(f64::NAN),
        phi_dot: phi_dot.to_f64().unwrap_or(f64::NAN),
    };
    if !(disc > T::zero()) {
        return Err(infeasible());
    }
    let theta_dot = (disc.sqrt() - b) / m.g_tt;
    if !(theta_dot > T::zero()) {
        return Err(infeasible());
    }
    Ok(GeodesicState::new(theta, phi, theta_dot, phi_dot))
}

#[derive(Debug, Clone)]
pub struct ReturnOptions<T> {
    pub tol: T,
    /// Arc length allowed before giving up on a return.
    pub s_budget: T,
}

impl<T: Real> Default for ReturnOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::c(1e-12),
            s_budget: T::c(200.0),
        }
    }
}

/// Follows `state` to its next equatorial crossing in the given direction.
fn next_crossing<T: Real>(
    surface: &PolarSurface<T>,
    state: GeodesicState<T>,
    upward: bool,
    opts: &ReturnOptions<T>,
) -> Result<GeodesicState<T>, PoincareError> {
    let iopts = IntegrateOptions {
        tol: opts.tol,
        record: false,
        ..Default::default()
    };
    let mut hit = None;
    integrate_with(surface, state, state.s + opts.s_budget, &iopts, |c| {
        if c.upward == upward {
            hit = Some(c.state);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    hit.ok_or(PoincareError::NoReturn(opts.s_budget.to_f64().unwrap_or(f64::NAN)))
}

/// One section hit with φ continued from the starting value (not reduced).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionHit<T> {
    pub phi: T,
    pub phi_dot: T,
    /// Arc length of the return.
    pub s: T,
}

/// First-return map `(φ, φ̇) ↦ (φ′, φ̇′)` with default options.
pub fn return_map<T: Real>(surface: &PolarSurface<T>, phi: T, phi_dot: T) -> Result<(T, T), PoincareError> {
    let h = return_map_with(surface, phi, phi_dot, &ReturnOptions::default())?;
    Ok((h.phi, h.phi_dot))
}

pub fn return_map_with<T: Real>(
    surface: &PolarSurface<T>,
    phi: T,
    phi_dot: T,
    opts: &ReturnOptions<T>,
) -> Result<SectionHit<T>, PoincareError> {
    let st = next_crossing(surface, launch(surface, phi, phi_dot)?, true, opts)?;
    Ok(SectionHit {
        phi: st.phi,
        phi_dot: st.phi_dot,
        s: st.s,
    })
}

/// Previous upward crossing, by running the reversed geodesic to its next
/// downward crossing.
pub fn inverse_return_map_with<T: Real>(
    surface: &PolarSurface<T>,
    phi: T,
    phi_dot: T,
    opts: &ReturnOptions<T>,
) -> Result<SectionHit<T>, PoincareError> {
    let fwd = launch(surface, phi, phi_dot)?;
    let rev = GeodesicState::new(fwd.theta, fwd.phi, -fwd.theta_dot, -fwd.phi_dot);
    let st = next_crossing(surface, rev, false, opts)?;
    Ok(SectionHit {
        phi: st.phi,
        phi_dot: -st.phi_dot,
        s: -st.s,
    })
}

pub fn inverse_return_map<T: Real>(surface: &PolarSurface<T>, phi: T, phi_dot: T) -> Result<(T, T), PoincareError> {
    let h = inverse_return_map_with(surface, phi, phi_dot, &ReturnOptions::default())?;
    Ok((h.phi, h.phi_dot))
}

/// The return map composed `k` times.
pub fn iterate_return_map<T: Real>(
    surface: &PolarSurface<T>,
    phi: T,
    phi_dot: T,
    k: usize,
    opts: &ReturnOptions<T>,
) -> Result<(T, T), PoincareError> {
    (0..k).try_fold((phi, phi_dot), |(p, pd), _| {
        let h = return_map_with(surface, p, pd, opts)?;
        Ok((h.phi, h.phi_dot))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionPoint<T> {
    pub traj_id: usize,
    pub crossing_index: usize,
    pub s: T,
    /// Reduced to [0, 2π).
    pub phi: T,
    pub phi_dot: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryFailure {
    pub traj_id: usize,
    pub crossings: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct SectionConfig<T> {
    pub num_traj: usize,
    pub num_crossings: usize,
    pub seed: u64,
    pub tol: T,
    /// Arc length allowed per requested crossing.
    pub s_per_crossing: T,
}

impl<T: Real> SectionConfig<T> {
    pub fn new(num_traj: usize, num_crossings: usize, seed: u64) -> Self {
        Self {
            num_traj,
            num_crossings,
            seed,
            tol: T::c(1e-10),
            s_per_crossing: T::c(100.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Section<T> {
    /// Ordered by trajectory, then crossing.
    pub points: Vec<SectionPoint<T>>,
    pub failures: Vec<TrajectoryFailure>,
    /// φ̇ range used for launches.
    pub phi_dot_max: T,
    /// Overall |φ̇| bound of the section.
    pub phi_dot_bound: T,
}

impl<T: Real> Section<T> {
    pub fn trajectory(&self, id: usize) -> impl Iterator<Item = &SectionPoint<T>> {
        self.points.iter().filter(move |p| p.traj_id == id)
    }
}

/// Random initial condition for trajectory `traj_id`: uniform φ on
/// [0, 2π), uniform φ̇ on (−range, range), resampled until feasible.
pub fn initial_condition<T: Real>(
    surface: &PolarSurface<T>,
    seed: u64,
    traj_id: usize,
    range: T,
) -> Result<GeodesicState<T>, PoincareError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(traj_id as u64);
    let range = range.to_f64().unwrap_or(1.0);
    let mut last = None;
    for _ in 0..1000 {
        let phi = T::c(rng.gen_range(0.0..TAU));
        let phi_dot = T::c(rng.gen_range(-range..range));
        match launch(surface, phi, phi_dot) {
            Ok(st) => return Ok(st),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn reduce_angle<T: Real>(phi: T) -> T {
    let tau = T::c(TAU);
    let r = phi - tau * (phi / tau).floor();
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// Samples `num_traj` trajectories in parallel and records their first
/// `num_crossings` upward section crossings. Each trajectory draws from its
/// own ChaCha stream, so the output depends only on the seed.
pub fn generate_section<T: Real>(surface: &PolarSurface<T>, cfg: &SectionConfig<T>) -> Result<Section<T>, PoincareError> {
    let (range, bound) = section_ranges(surface)?;
    let runs: Vec<Result<Vec<SectionPoint<T>>, TrajectoryFailure>> = (0..cfg.num_traj)
        .into_par_iter()
        .map(|id| section_trajectory(surface, cfg, id, range))
        .collect();
    let mut points = Vec::with_capacity(cfg.num_traj * cfg.num_crossings);
    let mut failures = Vec::new();
    for r in runs {
        match r {
            Ok(p) => points.extend(p),
            Err(f) => failures.push(f),
        }
    }
    Ok(Section {
        points,
        failures,
        phi_dot_max: range,
        phi_dot_bound: bound,
    })
}

fn section_trajectory<T: Real>(
    surface: &PolarSurface<T>,
    cfg: &SectionConfig<T>,
    id: usize,
    range: T,
) -> Result<Vec<SectionPoint<T>>, TrajectoryFailure> {
    let fail = |crossings: usize, reason: String| TrajectoryFailure {
        traj_id: id,
        crossings,
        reason,
    };
    let st = initial_condition(surface, cfg.seed, id, range).map_err(|e| fail(0, e.to_string()))?;
    let opts = IntegrateOptions {
        tol: cfg.tol,
        record: false,
        ..Default::default()
    };
    let mut pts = Vec::with_capacity(cfg.num_crossings);
    let s_max = cfg.s_per_crossing * T::c(cfg.num_crossings.max(1) as f64);
    let res = integrate_with(surface, st, s_max, &opts, |c| {
        if c.upward {
            pts.push(SectionPoint {
                traj_id: id,
                crossing_index: pts.len(),
                s: c.state.s,
                phi: reduce_angle(c.state.phi),
                phi_dot: c.state.phi_dot,
            });
        }
        if pts.len() >= cfg.num_crossings {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if let Err(e) = res {
        return Err(fail(pts.len(), e.to_string()));
    }
    if pts.len() < cfg.num_crossings {
        let reason = format!("only {} crossings within s = {}", pts.len(), s_max);
        return Err(fail(pts.len(), reason));
    }
    Ok(pts)
}

/// Number of cells of a `bins × bins` grid over `[0, 2π) × [−range, range]`
/// visited by `points`.
pub fn occupancy<'a, T: Real>(points: impl IntoIterator<Item = &'a SectionPoint<T>>, range: T, bins: usize) -> usize {
    let mut grid = vec![false; bins * bins];
    let b = T::c(bins as f64);
    let cell = |v: T| v.to_usize().unwrap_or(0).min(bins - 1);
    for p in points {
        let i = cell(p.phi / T::c(TAU) * b);
        let j = cell((p.phi_dot + range) / (range + range) * b);
        grid[i * bins + j] = true;
    }
    grid.iter().filter(|&&v| v).count()
}

/// Largest single-trajectory occupancy ratio of a section on a
/// `bins × bins` grid spanning the overall φ̇ bound.
pub fn max_occupancy<T: Real>(section: &Section<T>, bins: usize) -> f64 {
    let mut ids: Vec<usize> = section.points.iter().map(|p| p.traj_id).collect();
    ids.dedup();
    ids.into_iter()
        .map(|id| occupancy(section.trajectory(id), section.phi_dot_bound, bins))
        .max()
        .map_or(0.0, |c| c as f64 / (bins * bins) as f64)
}

#[cfg(test)]
mod tests;
