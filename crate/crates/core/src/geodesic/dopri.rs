//! Dormand–Prince 5(4) with step-size control and 4th-order dense output.

use crate::Real;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Tolerances and limits for one integration.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<T> {
    pub rtol: T,
    pub atol: T,
    /// Smallest admissible |h| before giving up.
    pub h_min: T,
    /// Largest admissible |h|.
    pub h_max: T,
}

impl<T: Real> Tolerances<T> {
    pub fn uniform(tol: T) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            h_min: T::c(1e-14),
            h_max: T::c(0.5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StepError<E> {
    #[error("step size underflow at t = {0}")]
    Underflow(f64),
    #[error(transparent)]
    Rhs(E),
}

/// An accepted step `[t0, t0 + h]` with its continuous extension.
#[derive(Debug, Clone)]
pub struct DenseStep<T, const N: usize> {
    pub t0: T,
    pub h: T,
    pub y0: [T; N],
    pub y1: [T; N],
    k1: [T; N],
    rcont: [[T; N]; 4],
}

impl<T: Real, const N: usize> DenseStep<T, N> {
    pub fn t1(&self) -> T {
        self.t0 + self.h
    }

    /// Interpolated state at `t` in the step.
    pub fn eval(&self, t: T) -> [T; N] {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        let mut out = self.y0;
        for i in 0..N {
            out[i] = self.y0[i]
                + th * (self.rcont[0][i]
                    + th1 * (self.rcont[1][i] + th * (self.rcont[2][i] + th1 * self.rcont[3][i])));
        }
        out
    }

    /// A genuine Runge–Kutta step from `t0` to `t` inside the step, as
    /// opposed to the interpolant; used to land exactly on events.
    pub fn restep<E>(&self, f: &mut impl FnMut(T, &[T; N]) -> Result<[T; N], E>, t: T) -> Result<[T; N], E> {
        Ok(rk_step(f, self.t0, &self.y0, &self.k1, t - self.t0)?.0)
    }
}

/// One raw Runge–Kutta step: returns `(y1, k7, error estimate, stages)`.
fn rk_step<T: Real, const N: usize, E>(
    f: &mut impl FnMut(T, &[T; N]) -> Result<[T; N], E>,
    t: T,
    y: &[T; N],
    k1: &[T; N],
    h: T,
) -> Result<([T; N], [T; N], [T; N], [[T; N]; 7]), E> {
    let c = T::c;
    let comb = |terms: &[(f64, &[T; N])]| {
        let mut out = *y;
        for i in 0..N {
            let mut acc = T::zero();
            for (w, k) in terms {
                acc = acc + c(*w) * k[i];
            }
            out[i] = out[i] + h * acc;
        }
        out
    };
    let k2 = f(t + c(C2) * h, &comb(&[(A21, k1)]))?;
    let k3 = f(t + c(C3) * h, &comb(&[(A31, k1), (A32, &k2)]))?;
    let k4 = f(t + c(C4) * h, &comb(&[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(t + c(C5) * h, &comb(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = f(t + h, &comb(&[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
    let y1 = comb(&[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y1)?;
    let mut err = [T::zero(); N];
    for i in 0..N {
        err[i] = h
            * (c(E1) * k1[i] + c(E3) * k3[i] + c(E4) * k4[i] + c(E5) * k5[i] + c(E6) * k6[i] + c(E7) * k7[i]);
    }
    Ok((y1, k7, err, [*k1, k2, k3, k4, k5, k6, k7]))
}

/// Adaptive stepper; `t` may run in either direction (sign of `h`).
pub struct Dopri5<T, const N: usize> {
    pub t: T,
    pub y: [T; N],
    h: T,
    k1: [T; N],
    tol: Tolerances<T>,
    pub accepted: usize,
    pub rejected: usize,
}

impl<T: Real, const N: usize> Dopri5<T, N> {
    pub fn new<E>(
        f: &mut impl FnMut(T, &[T; N]) -> Result<[T; N], E>,
        t0: T,
        y0: [T; N],
        h0: T,
        tol: Tolerances<T>,
    ) -> Result<Self, E> {
        let k1 = f(t0, &y0)?;
        Ok(Self {
            t: t0,
            y: y0,
            h: h0,
            k1,
            tol,
            accepted: 0,
            rejected: 0,
        })
    }

    /// Restarts from a new state (after a discontinuous change of variables).
    pub fn reset<E>(
        &mut self,
        f: &mut impl FnMut(T, &[T; N]) -> Result<[T; N], E>,
        t: T,
        y: [T; N],
    ) -> Result<(), E> {
        self.t = t;
        self.y = y;
        self.k1 = f(t, &y)?;
        Ok(())
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn set_h_max(&mut self, h_max: T) {
        self.tol.h_max = h_max;
    }

    /// Advances by one accepted step, never past `t_end`.
    pub fn step<E>(
        &mut self,
        f: &mut impl FnMut(T, &[T; N]) -> Result<[T; N], E>,
        t_end: T,
    ) -> Result<DenseStep<T, N>, StepError<E>> {
        let dir = if t_end >= self.t { T::one() } else { -T::one() };
        let mut h = dir * self.h.abs().min(self.tol.h_max);
        loop {
            let mut clipped = false;
            if (self.t + h - t_end) * dir > T::zero() {
                h = t_end - self.t;
                clipped = true;
            }
            if h.abs() < self.tol.h_min && (t_end - self.t).abs() > self.tol.h_min {
                return Err(StepError::Underflow(self.t.to_f64().unwrap_or(f64::NAN)));
            }
            let (y1, k7, err, k) = rk_step(f, self.t, &self.y, &self.k1, h).map_err(StepError::Rhs)?;
            let mut sum = T::zero();
            for i in 0..N {
                let sc = self.tol.atol + self.tol.rtol * self.y[i].abs().max(y1[i].abs());
                let e = err[i] / sc;
                sum = sum + e * e;
            }
            let enorm = (sum / T::c(N as f64)).sqrt();
            let fac = if enorm == T::zero() {
                T::c(5.0)
            } else {
                (T::c(0.9) * enorm.powf(T::c(-0.2))).max(T::c(0.2)).min(T::c(5.0))
            };
            if enorm <= T::one() && enorm.is_finite() {
                let step = self.dense(h, y1, &k);
                self.t = self.t + h;
                self.y = y1;
                self.k1 = k7;
                // a step clipped at t_end says little about the next one
                self.h = if clipped { (h.abs() * fac).max(self.h.abs()) } else { h.abs() * fac };
                self.accepted += 1;
                return Ok(step);
            }
            self.rejected += 1;
            h = if enorm.is_finite() { h * fac.min(T::one()) } else { h * T::c(0.25) };
        }
    }

    fn dense(&self, h: T, y1: [T; N], k: &[[T; N]; 7]) -> DenseStep<T, N> {
        let c = T::c;
        let mut rcont = [[T::zero(); N]; 4];
        for i in 0..N {
            let dy = y1[i] - self.y[i];
            let bspl = h * k[0][i] - dy;
            rcont[0][i] = dy;
            rcont[1][i] = bspl;
            rcont[2][i] = dy - h * k[6][i] - bspl;
            rcont[3][i] = h
                * (c(D1) * k[0][i] + c(D3) * k[2][i] + c(D4) * k[3][i] + c(D5) * k[4][i] + c(D6) * k[5][i]
                    + c(D7) * k[6][i]);
        }
        DenseStep {
            t0: self.t,
            h,
            y0: self.y,
            y1,
            k1: k[0],
            rcont,
        }
    }
}

/// Integrates to `t_end` and returns the final state.
pub fn solve_to<T: Real, const N: usize, E>(
    mut f: impl FnMut(T, &[T; N]) -> Result<[T; N], E>,
    t0: T,
    y0: [T; N],
    t_end: T,
    tol: Tolerances<T>,
) -> Result<[T; N], StepError<E>> {
    let h0 = (t_end - t0).abs().min(T::c(1e-3));
    let mut st = Dopri5::new(&mut f, t0, y0, h0, tol).map_err(StepError::Rhs)?;
    while st.t != t_end {
        st.step(&mut f, t_end)?;
    }
    Ok(st.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn osc(_t: f64, y: &[f64; 2]) -> Result<[f64; 2], Infallible> {
        Ok([y[1], -y[0]])
    }

    #[test]
    fn harmonic_oscillator_period() {
        let tol = Tolerances::uniform(1e-12);
        let y = solve_to(osc, 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, tol).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let tol = Tolerances::uniform(1e-12);
        let y = solve_to(osc, 1.0, [1.0f64.cos(), -1.0f64.sin()], 0.0, tol).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn dense_output_accuracy() {
        let mut f = osc;
        let tol = Tolerances::uniform(1e-10);
        let mut st = Dopri5::new(&mut f, 0.0, [1.0, 0.0], 0.1, tol).unwrap();
        let mut worst = 0.0f64;
        while st.t < 10.0 {
            let d = st.step(&mut f, 10.0).unwrap();
            for j in 1..10 {
                let t = d.t0 + d.h * j as f64 / 10.0;
                worst = worst.max((d.eval(t)[0] - t.cos()).abs());
            }
        }
        assert!(worst < 1e-8, "dense error {worst}");
    }

    #[test]
    fn single_precision() {
        let f = |_t: f32, y: &[f32; 1]| Ok::<_, Infallible>([-y[0]]);
        let y = solve_to(f, 0.0f32, [1.0f32], 1.0, Tolerances::uniform(1e-6)).unwrap();
        assert!((y[0] - (-1.0f32).exp()).abs() < 1e-5);
    }
}
