//! Naive truncated double sums in `f64`, used only as an independent check
//! on the accelerated evaluators. Each value carries a rigorous bound that
//! covers the truncated tail plus a floating-point rounding allowance.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::CharId;
use crate::error::{domain, Result};
use crate::reductions::witten_convergent;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleTarget {
    Dz(i64, i64),
    Char(CharId, CharId, i64, i64),
    Witten(i64, i64, i64),
}

/// Neumaier compensated sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
    abs: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
        self.abs += x.abs();
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

const EPS: f64 = f64::EPSILON;

/// `sum_{x >= n} x^-alpha (1 + log x)^l` bounded by the integral from `n - 1`
/// for `l` in {0, 1}.
fn power_tail(n: f64, alpha: f64, with_log: bool) -> f64 {
    let a1 = alpha - 1.0;
    let x = n - 1.0;
    if with_log {
        x.powf(-a1) * ((1.0 + x.ln()) / a1 + 1.0 / (a1 * a1))
    } else {
        x.powf(-a1) / a1
    }
}

/// Upper bound on `sum_{m<n} m^-b` valid for every `n`: `(bound, grows_like_log)`.
fn partial_zeta_bound(b: i64) -> (f64, bool) {
    if b >= 2 {
        (1.0 + 1.0 / (b as f64 - 1.0), false)
    } else {
        (1.0, true)
    }
}

pub fn brute_force_oracle(target: OracleTarget, n: usize) -> Result<OracleValue> {
    if n < 16 {
        return domain("oracle needs at least 16 terms");
    }
    match target {
        OracleTarget::Dz(a, b) => char_sum(CharId::One, CharId::One, a, b, n),
        OracleTarget::Char(p, q, s, t) => char_sum(p, q, s, t, n),
        OracleTarget::Witten(r, s, t) => witten(r, s, t, n),
    }
}

fn char_sum(p: CharId, q: CharId, s: i64, t: i64, n: usize) -> Result<OracleValue> {
    if s < 2 || t < 1 {
        return domain(format!("oracle covers s >= 2, t >= 1; got ({s}, {t})"));
    }
    let mut inner = 0.0f64;
    let mut inner_c = 0.0f64;
    let mut acc = Sum::default();
    for k in 1..=n as u64 {
        let pk = p.value(k);
        if pk != 0 {
            acc.add(pk as f64 * (inner + inner_c) * (k as f64).powi(-(s as i32)));
        }
        let qk = q.value(k);
        if qk != 0 {
            let x = qk as f64 * (k as f64).powi(-(t as i32));
            let y = inner + x;
            inner_c += if inner.abs() >= x.abs() { (inner - y) + x } else { (x - y) + inner };
            inner = y;
        }
    }
    let (c, log) = partial_zeta_bound(t);
    let tail = c * power_tail(n as f64 + 1.0, s as f64, log);
    let rounding = 8.0 * n as f64 * EPS * (acc.abs + 1.0);
    Ok(OracleValue { value: acc.value(), bound: tail + rounding })
}

/// Bound on `S_r(k) = sum_{j<=k} j^-r` as `(coefficient, extra power of k, log)`.
fn s_bound(r: i64) -> (f64, f64, bool) {
    match r {
        0 => (1.0, 1.0, false),
        1 => (1.0, 0.0, true),
        _ => (1.0 + 1.0 / (r as f64 - 1.0), 0.0, false),
    }
}

fn witten(r: i64, s: i64, t: i64, n: usize) -> Result<OracleValue> {
    if !witten_convergent(r, s, t) {
        return domain(format!("W({r},{s},{t}) diverges"));
    }
    // conv(k) = sum_{i+j=k} i^-r j^-s for k <= n via FFT
    let size = (2 * n + 2).next_power_of_two();
    let mk = |e: i64| -> Vec<Complex<f64>> {
        let mut v = vec![Complex::new(0.0, 0.0); size];
        for (i, slot) in v.iter_mut().enumerate().take(n + 1).skip(1) {
            *slot = Complex::new((i as f64).powi(-(e as i32)), 0.0);
        }
        v
    };
    let mut a = mk(r);
    let mut b = mk(s);
    let norm = |v: &[Complex<f64>]| v.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
    let (na, nb) = (norm(&a), norm(&b));
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);
    let scale = 1.0 / size as f64;
    let mut acc = Sum::default();
    let mut weight = 0.0f64;
    for (k, z) in a.iter().enumerate().take(n + 1).skip(2) {
        let w = (k as f64).powi(-(t as i32));
        acc.add(z.re * scale * w);
        weight += w;
    }
    // FFT convolution error per entry, carried through the outer weights
    let fft_err = 16.0 * EPS * (size as f64).log2() * na * nb;
    let rounding = fft_err * weight + 8.0 * n as f64 * EPS * (acc.abs + 1.0);

    // conv(k) <= 2^s k^-s S_r(k) + 2^r k^-r S_s(k)
    let mut tail = 0.0;
    for (e1, e2) in [(s, r), (r, s)] {
        let (c, extra, log) = s_bound(e2);
        let alpha = (t + e1) as f64 - extra;
        if alpha <= 1.0 {
            return domain(format!("no tail bound for W({r},{s},{t})"));
        }
        tail += 2f64.powi(e1 as i32) * c * power_tail(n as f64 + 1.0, alpha, log);
    }
    Ok(OracleValue { value: acc.value(), bound: tail + rounding })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_one_is_within_bound() {
        let z3 = 1.202_056_903_159_594_3;
        let v = brute_force_oracle(OracleTarget::Dz(2, 1), 20_000).unwrap();
        assert!((v.value - z3).abs() <= v.bound, "{v:?}");
        assert!(v.bound < 1e-2);
    }

    #[test]
    fn witten_one_one_one() {
        let v = brute_force_oracle(OracleTarget::Witten(1, 1, 1), 1 << 14).unwrap();
        assert!((v.value - 2.0 * 1.202_056_903_159_594_3).abs() <= v.bound, "{v:?}");
    }

    #[test]
    fn rejects_divergent() {
        assert!(brute_force_oracle(OracleTarget::Witten(1, 0, 1), 100).is_err());
        assert!(brute_force_oracle(OracleTarget::Dz(1, 2), 100).is_err());
    }
}
