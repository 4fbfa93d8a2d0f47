//! q-shifted factorials: exact finite products over rationals and truncated
//! infinite products in f64 / Complex64 for quadrature work.

use crate::scalar::{rat_to_f64, Rat};
use num_complex::Complex64;
use num_traits::One;

/// Exact finite product `(a; q)_m = prod_{i=0}^{m-1} (1 - a q^i)`.
pub fn poch_exact(a: &Rat, q: &Rat, m: u64) -> Rat {
    let mut acc = Rat::one();
    let mut aq = a.clone();
    for _ in 0..m {
        acc *= Rat::one() - &aq;
        aq *= q;
    }
    acc
}

/// Finite product in f64, same convention as [`poch_exact`].
pub fn poch_f64(a: f64, q: f64, m: u64) -> f64 {
    let mut acc = 1.0;
    let mut aq = a;
    for _ in 0..m {
        acc *= 1.0 - aq;
        aq *= q;
    }
    acc
}

/// Truncated infinite product `(a; q)_inf ~ prod_{i=0}^{trunc-1} (1 - a q^i)`.
///
/// For |q| < 1 the tail factors converge to 1 geometrically, so `trunc` on the
/// order of `ln(eps) / ln(q)` terms suffices at double precision.
pub fn poch_inf_f64(a: f64, q: f64, trunc: u32) -> f64 {
    let mut acc = 1.0;
    let mut aq = a;
    for _ in 0..trunc {
        acc *= 1.0 - aq;
        aq *= q;
    }
    acc
}

/// Complex version of [`poch_inf_f64`].
pub fn poch_inf_c64(a: Complex64, q: f64, trunc: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..trunc {
        acc *= Complex64::new(1.0, 0.0) - aq;
        aq *= q;
    }
    acc
}

/// Truncation depth giving tail error below ~1e-16 for base `q` in (0, 1).
pub fn auto_truncation(q: &Rat) -> u32 {
    let qf = rat_to_f64(q);
    assert!(qf > 0.0 && qf < 1.0, "truncation depth needs q in (0,1)");
    // After N factors the remaining product differs from 1 by O(q^N / (1-q)).
    let target = 1e-16 * (1.0 - qf);
    let n = (target.ln() / qf.ln()).ceil();
    (n.max(1.0) as u32).max(8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn exact_poch_small_cases() {
        // (a;q)_0 = 1, (a;q)_1 = 1-a, (a;q)_2 = (1-a)(1-aq)
        let a = rat(1, 2);
        let q = rat(1, 3);
        assert_eq!(poch_exact(&a, &q, 0), rat_int(1));
        assert_eq!(poch_exact(&a, &q, 1), rat(1, 2));
        assert_eq!(poch_exact(&a, &q, 2), rat(1, 2) * rat(5, 6));
    }

    #[test]
    fn f64_matches_exact() {
        let a = rat(2, 7);
        let q = rat(1, 4);
        for m in 0..6 {
            let exact = rat_to_f64(&poch_exact(&a, &q, m));
            let approx = poch_f64(rat_to_f64(&a), rat_to_f64(&q), m);
            assert!((exact - approx).abs() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn truncated_product_converges() {
        // Increasing the truncation depth beyond auto_truncation changes nothing
        // at double precision.
        let q = rat(1, 2);
        let n = auto_truncation(&q);
        let v1 = poch_inf_f64(0.3, 0.5, n);
        let v2 = poch_inf_f64(0.3, 0.5, n + 40);
        assert!((v1 - v2).abs() < 1e-15);
    }

    #[test]
    fn complex_truncation_matches_real_on_real_input() {
        let n = 60;
        let re = poch_inf_f64(0.4, 0.25, n);
        let c = poch_inf_c64(Complex64::new(0.4, 0.0), 0.25, n);
        assert!((c.re - re).abs() < 1e-15);
        assert!(c.im.abs() < 1e-15);
    }

    #[test]
    fn telescoping_ratio_identity() {
        // (a q^m; q)_inf / (a; q)_inf = 1 / (a; q)_m, checked numerically.
        let a = 0.37f64;
        let q = 0.45f64;
        let m = 3u64;
        let n = 200;
        let lhs = poch_inf_f64(a * q.powi(m as i32), q, n) / poch_inf_f64(a, q, n);
        let rhs = 1.0 / poch_f64(a, q, m);
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
