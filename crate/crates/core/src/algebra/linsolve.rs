//! Exact Gaussian elimination.

use super::field::Field;

/// Solves `A x = b` exactly, processing rows in the given order.
///
/// Returns `None` when the system is inconsistent. Free variables (rank
/// deficiency) are set to zero; callers that need uniqueness check
/// [`Solution::rank`].
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<K: Field> {
    pub x: Vec<K>,
    pub rank: usize,
}

pub fn solve<K: Field>(mut a: Vec<Vec<K>>, mut b: Vec<K>, ncols: usize) -> Option<Solution<K>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].inv();
        for c in col..ncols {
            a[row][c] = a[row][c].mul_ref(&inv);
        }
        b[row] = b[row].mul_ref(&inv);
        for r in 0..nrows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..ncols {
                let v = a[row][c].mul_ref(&f);
                a[r][c] = a[r][c].sub_ref(&v);
            }
            let v = b[row].mul_ref(&f);
            b[r] = b[r].sub_ref(&v);
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![K::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Some(Solution {
        x,
        rank: pivots.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{rat_int, Rational};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat_int(v)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let s = solve(m(&[&[2, 1], &[1, -1]]), vec![rat_int(5), rat_int(1)], 2).unwrap();
        assert_eq!(s.x, vec![rat_int(2), rat_int(1)]);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn inconsistent_system() {
        assert!(solve(m(&[&[1, 1], &[2, 2]]), vec![rat_int(1), rat_int(3)], 2).is_none());
    }

    #[test]
    fn overdetermined_consistent() {
        let s = solve(m(&[&[1], &[2], &[0]]), vec![rat_int(3), rat_int(6), rat_int(0)], 1).unwrap();
        assert_eq!(s.x, vec![rat_int(3)]);
    }
}
