//! Associated Legendre functions without the Condon–Shortley phase.

use crate::Real;

use super::SurfaceError;

/// `P^m_l(x)` by the upward recurrence in `l` starting from
/// `P^m_m = (2m−1)!! (1−x²)^{m/2}`.
pub fn assoc_legendre<T: Real>(l: u32, m: u32, x: T) -> Result<T, SurfaceError> {
    if m > l {
        return Err(SurfaceError::InvalidOrder { l, m });
    }
    if x.abs() > T::one() {
        return Err(SurfaceError::OutOfDomain(x.to_f64().unwrap_or(f64::NAN)));
    }
    let s = ((T::one() - x) * (T::one() + x)).sqrt();
    let mut pmm = T::one();
    for k in 1..=m {
        pmm = pmm * T::c((2 * k - 1) as f64) * s;
    }
    if l == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = x * T::c((2 * m + 1) as f64) * pmm;
    for ll in (m + 2)..=l {
        let next = (x * T::c((2 * ll - 1) as f64) * cur - T::c((ll + m - 1) as f64) * prev)
            / T::c((ll - m) as f64);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Coefficients (lowest degree first) of `d^m P_l / dx^m`, so that
/// `P^m_l(x) = (1−x²)^{m/2} · q(x)`.
pub(crate) fn legendre_derivative_coeffs(l: u32, m: u32) -> Vec<f64> {
    // Bonnet: (k+1) P_{k+1} = (2k+1) x P_k − k P_{k−1}
    let mut p0 = vec![1.0];
    let mut p1 = vec![0.0, 1.0];
    let mut p = if l == 0 { p0.clone() } else { p1.clone() };
    for k in 1..l as usize {
        let mut next = vec![0.0; k + 2];
        for (i, c) in p1.iter().enumerate() {
            next[i + 1] += (2 * k + 1) as f64 * c;
        }
        for (i, c) in p0.iter().enumerate() {
            next[i] -= k as f64 * c;
        }
        for c in next.iter_mut() {
            *c /= (k + 1) as f64;
        }
        p0 = std::mem::replace(&mut p1, next);
        p = p1.clone();
    }
    for _ in 0..m {
        p = p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    }
    if p.is_empty() {
        p.push(0.0);
    }
    p
}
