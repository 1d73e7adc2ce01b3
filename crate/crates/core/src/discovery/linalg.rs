//! Exact row reduction over the rationals.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pr = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut c = m.to_vec();
    rref(&mut c).len()
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn nullspace(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut c = m.to_vec();
    let pivots = rref(&mut c);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|k| !pivots.contains(k)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -c[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Whether `v` is a linear combination of `rows`.
pub fn in_span(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(rows) == rank(&with)
}

/// Solve `m x = b`; `None` if inconsistent or not unique.
pub fn solve_unique(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> =
        m.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) || pivots.len() != n {
        return None;
    }
    Some((0..n).map(|r| aug[r][n].clone()).collect())
}

/// Scale to coprime integers with a positive first nonzero entry.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else { return v.to_vec() };
    let lcm = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<_> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if first.is_negative() { -num_bigint::BigInt::one() } else { num_bigint::BigInt::one() };
    ints.into_iter().map(|x| Rational::from_integer(x / &g * &sign)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![rint(1), rint(2), rint(3)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: Rational = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn span_and_solve() {
        let rows = vec![vec![rint(1), rint(0)], vec![rint(1), rint(1)]];
        assert!(in_span(&rows[..1], &[rint(3), rint(0)]));
        assert!(!in_span(&rows[..1], &[rint(0), rint(1)]));
        assert_eq!(solve_unique(&rows, &[rint(2), rint(5)]), Some(vec![rint(2), rint(3)]));
        assert_eq!(primitive(&[rint(-2), rint(4)]), vec![rint(1), rint(-2)]);
    }
}
