//! Unit-speed geodesics on a [`PolarSurface`]: right-hand side, adaptive
//! integration with pole-chart swaps and equatorial crossing events, and the
//! polynomial behind the no-turning-point lemma.

pub mod dopri;
mod lemma1;

use std::io::Write;
use std::ops::ControlFlow;

use crate::surface::{angles, unit, Chart, PolarSurface, SurfaceError};
use crate::Real;

use dopri::{DenseStep, Dopri5, StepError, Tolerances};

pub use lemma1::{lemma1_critical_eps, lemma1_f, lemma1_poly, Lemma1Error, Lemma1Poly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeodesicError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("step size underflow at s = {0}")]
    StepUnderflow(f64),
    #[error("initial state is not unit speed: 2H = {0}")]
    NotNormalized(f64),
    #[error("no admissible velocity: {0}")]
    Infeasible(String),
}

impl From<StepError<SurfaceError>> for GeodesicError {
    fn from(e: StepError<SurfaceError>) -> Self {
        match e {
            StepError::Underflow(s) => GeodesicError::StepUnderflow(s),
            StepError::Rhs(e) => GeodesicError::Surface(e),
        }
    }
}

/// Position and velocity per unit arc length; φ is unwrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState<T> {
    pub theta: T,
    pub phi: T,
    pub theta_dot: T,
    pub phi_dot: T,
    pub s: T,
}

impl<T: Real> GeodesicState<T> {
    pub fn new(theta: T, phi: T, theta_dot: T, phi_dot: T) -> Self {
        Self {
            theta,
            phi,
            theta_dot,
            phi_dot,
            s: T::zero(),
        }
    }

    /// Rescales the velocity so that `2H = 1`.
    pub fn normalized(surface: &PolarSurface<T>, theta: T, phi: T, theta_dot: T, phi_dot: T) -> Result<Self, GeodesicError> {
        let two_h = surface.metric_at(theta, phi)?.two_h(theta_dot, phi_dot);
        if !(two_h > T::zero()) {
            return Err(GeodesicError::Infeasible("zero velocity".into()));
        }
        let k = two_h.sqrt().recip();
        Ok(Self::new(theta, phi, theta_dot * k, phi_dot * k))
    }

    /// `2H = g_θθ θ̇² + 2g_θφ θ̇φ̇ + g_φφ φ̇²`.
    pub fn two_h(&self, surface: &PolarSurface<T>) -> Result<T, SurfaceError> {
        Ok(surface.metric_at(self.theta, self.phi)?.two_h(self.theta_dot, self.phi_dot))
    }

    fn to_vec(self) -> [T; 4] {
        [self.theta, self.phi, self.theta_dot, self.phi_dot]
    }

    fn from_vec(s: T, y: &[T; 4]) -> Self {
        Self {
            theta: y[0],
            phi: y[1],
            theta_dot: y[2],
            phi_dot: y[3],
            s,
        }
    }
}

/// `(θ̇, φ̇, θ̈, φ̈)` from the geodesic equations.
pub fn geodesic_rhs<T: Real>(surface: &PolarSurface<T>, state: &GeodesicState<T>) -> Result<[T; 4], SurfaceError> {
    rhs_vec(surface, &state.to_vec())
}

fn rhs_vec<T: Real>(surface: &PolarSurface<T>, y: &[T; 4]) -> Result<[T; 4], SurfaceError> {
    let g = surface.metric_at(y[0], y[1])?.gamma;
    let (td, pd) = (y[2], y[3]);
    let two = T::c(2.0);
    Ok([
        td,
        pd,
        -(g.t_tt * td * td + two * g.t_tp * td * pd + g.t_pp * pd * pd),
        -(g.p_tt * td * td + two * g.p_tp * td * pd + g.p_pp * pd * pd),
    ])
}

/// Re-expresses a state given in chart `from` in chart `to`. The returned φ
/// lies in (−π, π].
pub fn transfer_state<T: Real>(from: Chart, to: Chart, st: &GeodesicState<T>) -> GeodesicState<T> {
    if from == to {
        return *st;
    }
    let (s_t, c_t) = st.theta.sin_cos();
    let (s_p, c_p) = st.phi.sin_cos();
    let u = unit(st.theta, st.phi);
    let u_t = [c_t * c_p, c_t * s_p, -s_t];
    let u_p = [-s_t * s_p, s_t * c_p, T::zero()];
    let mut du = [T::zero(); 3];
    for i in 0..3 {
        du[i] = u_t[i] * st.theta_dot + u_p[i] * st.phi_dot;
    }
    let v = to.invert(from.apply(u));
    let dv = to.invert(from.apply(du));
    let (theta, phi) = angles(v);
    let rho2 = v[0] * v[0] + v[1] * v[1];
    GeodesicState {
        theta,
        phi,
        theta_dot: -dv[2] / theta.sin(),
        phi_dot: (v[0] * dv[1] - v[1] * dv[0]) / rho2,
        s: st.s,
    }
}

/// Chart used while the home chart is near one of its poles.
fn alternate(chart: Chart) -> Chart {
    match chart {
        Chart::Standard => Chart::Meridian,
        Chart::Meridian | Chart::Polar => Chart::Standard,
    }
}

/// Representative of `phi` (mod 2π) closest to `reference`.
fn unwrap_near<T: Real>(phi: T, reference: T) -> T {
    let tau = T::c(2.0) * T::PI();
    phi + tau * ((reference - phi) / tau).round()
}

/// Crossing of the home-chart equator θ = π/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing<T> {
    /// Counts all crossings of the trajectory, both directions.
    pub index: usize,
    pub state: GeodesicState<T>,
    /// θ̇ > 0: moving from the northern into the southern hemisphere.
    pub upward: bool,
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions<T> {
    pub tol: T,
    /// Keep every accepted step as a sample.
    pub record: bool,
    /// Swap to the alternate chart when sin θ drops below this.
    pub pole_enter: T,
    /// Swap back once the home-chart sin θ is at least this.
    pub pole_exit: T,
    pub max_steps: usize,
}

impl<T: Real> Default for IntegrateOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::c(1e-12),
            record: true,
            pole_enter: T::c(0.05),
            pole_exit: T::c(0.1),
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    /// Accepted-step endpoints in the home chart (empty unless recorded).
    pub samples: Vec<(GeodesicState<T>, T)>,
    pub crossings: Vec<Crossing<T>>,
    pub end: GeodesicState<T>,
    pub chart_swaps: usize,
    pub steps: usize,
}

impl<T: Real> Trajectory<T> {
    /// CSV with columns `s, theta, phi, theta_dot, phi_dot, H`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "s,theta,phi,theta_dot,phi_dot,H")?;
        for (st, two_h) in &self.samples {
            writeln!(
                w,
                "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
                st.s,
                st.theta,
                st.phi,
                st.theta_dot,
                st.phi_dot,
                *two_h * T::c(0.5)
            )?;
        }
        Ok(())
    }

    /// Largest `|2H − 1|` over the recorded samples.
    pub fn max_energy_drift(&self) -> T {
        self.samples
            .iter()
            .map(|(_, h)| (*h - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Integrates a unit-speed geodesic from `state0` (home chart = the
/// surface's chart) to arc length `s_max`, recording samples and all
/// equatorial crossings.
pub fn integrate<T: Real>(surface: &PolarSurface<T>, state0: GeodesicState<T>, s_max: T, tol: T) -> Result<Trajectory<T>, GeodesicError> {
    let opts = IntegrateOptions {
        tol,
        ..Default::default()
    };
    integrate_with(surface, state0, s_max, &opts, |_| ControlFlow::Continue(()))
}

/// As [`integrate`], calling `on_crossing` at each refined crossing; the
/// callback may stop the integration early.
pub fn integrate_with<T: Real>(
    surface: &PolarSurface<T>,
    state0: GeodesicState<T>,
    s_max: T,
    opts: &IntegrateOptions<T>,
    mut on_crossing: impl FnMut(&Crossing<T>) -> ControlFlow<()>,
) -> Result<Trajectory<T>, GeodesicError> {
    let two_h = state0.two_h(surface)?;
    if (two_h - T::one()).abs() > T::c(1e-6) {
        return Err(GeodesicError::NotNormalized(two_h.to_f64().unwrap_or(f64::NAN)));
    }
    let home_chart = surface.chart();
    let alt_chart = alternate(home_chart);
    let home = surface.clone();
    let alt = surface.with_chart(alt_chart);

    let tol = Tolerances {
        rtol: opts.tol,
        atol: opts.tol,
        h_min: T::c(1e-13),
        h_max: T::c(0.5),
    };
    let near_pole_h = T::c(0.02);

    let mut in_alt = false;
    let mut f_home = |_s: T, y: &[T; 4]| rhs_vec(&home, y);
    let mut f_alt = |_s: T, y: &[T; 4]| rhs_vec(&alt, y);

    let mut stepper = Dopri5::new(&mut f_home, state0.s, state0.to_vec(), T::c(1e-2), tol)?;
    let mut traj = Trajectory {
        samples: Vec::new(),
        crossings: Vec::new(),
        end: state0,
        chart_swaps: 0,
        steps: 0,
    };
    if opts.record {
        traj.samples.push((state0, two_h));
    }
    let mut last_home_phi = state0.phi;
    // a start on the equator counts as being on the side it is heading to
    let g0 = state0.theta.cos();
    let mut prev_g = if g0.abs() < T::c(1e-13) { -state0.theta_dot } else { g0 };

    let home_state = |in_alt: bool, s: T, y: &[T; 4], phi_ref: T| -> GeodesicState<T> {
        let st = GeodesicState::from_vec(s, y);
        if in_alt {
            let mut h = transfer_state(alt_chart, home_chart, &st);
            h.phi = unwrap_near(h.phi, phi_ref);
            h
        } else {
            st
        }
    };

    while stepper.t < s_max {
        if traj.steps >= opts.max_steps {
            return Err(GeodesicError::StepUnderflow(stepper.t.to_f64().unwrap_or(f64::NAN)));
        }
        // keep a single step from reaching the active chart's pole
        let cap = (T::c(0.25) * stepper.y[0].sin()).max(near_pole_h).min(T::c(0.5));
        stepper.set_h_max(cap);
        let step = if in_alt {
            stepper.step(&mut f_alt, s_max)?
        } else {
            stepper.step(&mut f_home, s_max)?
        };
        traj.steps += 1;

        let end_home = home_state(in_alt, step.t1(), &step.y1, last_home_phi);
        last_home_phi = end_home.phi;
        let g1 = end_home.theta.cos();
        if (prev_g > T::zero() && g1 <= T::zero()) || (prev_g < T::zero() && g1 >= T::zero()) {
            let rhs: &mut dyn FnMut(T, &[T; 4]) -> Result<[T; 4], SurfaceError> =
                if in_alt { &mut f_alt } else { &mut f_home };
            let c = refine_crossing(&step, rhs, in_alt, alt_chart, home_chart, last_home_phi)?;
            let crossing = Crossing {
                index: traj.crossings.len(),
                upward: c.theta_dot > T::zero(),
                state: c,
            };
            traj.crossings.push(crossing);
            if g1 != T::zero() {
                prev_g = g1;
            } else {
                prev_g = -c.theta_dot;
            }
            if on_crossing(&crossing).is_break() {
                traj.end = end_home;
                return Ok(traj);
            }
        } else if g1 != T::zero() {
            prev_g = g1;
        }
        if opts.record {
            let active = if in_alt { &alt } else { &home };
            let h = active.metric_at(step.y1[0], step.y1[1])?.two_h(step.y1[2], step.y1[3]);
            traj.samples.push((end_home, h));
        }

        // chart bookkeeping
        let st = GeodesicState::from_vec(stepper.t, &stepper.y);
        if !in_alt && st.theta.sin() < opts.pole_enter {
            let a = transfer_state(home_chart, alt_chart, &st);
            stepper.reset(&mut f_alt, a.s, a.to_vec())?;
            in_alt = true;
            traj.chart_swaps += 1;
        } else if in_alt && end_home.theta.sin() >= opts.pole_exit {
            stepper.reset(&mut f_home, end_home.s, end_home.to_vec())?;
            in_alt = false;
            traj.chart_swaps += 1;
        }
        traj.end = end_home;
    }
    Ok(traj)
}

/// Locates θ = π/2 (home chart) inside `step`: safeguarded secant on the
/// dense output, then Newton corrections on genuine re-steps so the
/// returned state is an integration point, not an interpolant.
fn refine_crossing<T: Real>(
    step: &DenseStep<T, 4>,
    rhs: &mut dyn FnMut(T, &[T; 4]) -> Result<[T; 4], SurfaceError>,
    in_alt: bool,
    alt_chart: Chart,
    home_chart: Chart,
    phi_ref: T,
) -> Result<GeodesicState<T>, GeodesicError> {
    let to_home = |s: T, y: &[T; 4]| {
        let st = GeodesicState::from_vec(s, y);
        let mut h = if in_alt { transfer_state(alt_chart, home_chart, &st) } else { st };
        h.phi = unwrap_near(h.phi, phi_ref);
        h
    };
    let g = |s: T| to_home(s, &step.eval(s)).theta.cos();
    let (mut lo, mut hi) = (step.t0, step.t1());
    let (mut glo, mut ghi) = (to_home(lo, &step.y0).theta.cos(), to_home(hi, &step.y1).theta.cos());
    let mut root = hi;
    if ghi != T::zero() {
        // Illinois variant of regula falsi
        let mut last = 0i8;
        for _ in 0..200 {
            let mut s = hi - ghi * (hi - lo) / (ghi - glo);
            if !(s > lo && s < hi) {
                s = T::c(0.5) * (lo + hi);
            }
            root = s;
            let gs = g(s);
            if gs == T::zero() {
                break;
            }
            if (gs > T::zero()) == (glo > T::zero()) {
                lo = s;
                glo = gs;
                if last == -1 {
                    ghi = ghi * T::c(0.5);
                }
                last = -1;
            } else {
                hi = s;
                ghi = gs;
                if last == 1 {
                    glo = glo * T::c(0.5);
                }
                last = 1;
            }
            if hi - lo <= T::c(4.0) * T::epsilon() * (T::one() + s.abs()) {
                break;
            }
        }
    }
    let mut s = root;
    let mut st = to_home(s, &step.restep(&mut &mut *rhs, s)?);
    for _ in 0..4 {
        let dtheta = T::FRAC_PI_2() - st.theta;
        if dtheta.abs() <= T::c(1e-13) || st.theta_dot == T::zero() {
            break;
        }
        s = s + dtheta / st.theta_dot;
        st = to_home(s, &step.restep(&mut &mut *rhs, s)?);
    }
    Ok(st)
}
