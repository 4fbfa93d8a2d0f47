//! Trapezoid quadrature on the torus for numeric orthogonality and norm
//! checks.
//!
//! Points live on the uniform angular grid `theta_k = 2 pi k / M - pi`; the
//! quadrature rule is the plain mean over the full n-fold grid, which for
//! periodic analytic integrands converges geometrically in `M`. The weight is
//! the squared modulus of the ascending half-density on unimodular arguments,
//! so its phase prefactors drop out and only quotients of truncated infinite
//! q-products remain. Sums are reduced pairwise to keep results deterministic
//! and well conditioned.

use crate::linalg::{invert_f64, norm1_f64, solve_f64};
use crate::params::{ParamError, ParameterSet};
use crate::polys::normalization_c;
use crate::qseries::{auto_truncation, poch_inf_c64, poch_inf_f64};
use crate::scalar::{rat_int, rat_to_f64};
use crate::symfunc::{partitions_below, Partition, SymmetricPolynomial};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Deterministic pairwise (recursive halving) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn f64_params(set: &ParameterSet) -> (f64, f64, f64, [f64; 4]) {
    (
        rat_to_f64(&set.q),
        rat_to_f64(&set.sqrt_q),
        rat_to_f64(&set.t),
        [
            rat_to_f64(&set.t_r[0]),
            rat_to_f64(&set.t_r[1]),
            rat_to_f64(&set.t_r[2]),
            rat_to_f64(&set.t_r[3]),
        ],
    )
}

/// Squared modulus of the two-variable coupling half-weight at a unimodular
/// argument: `|(Z; q)_inf / (t Z; q)_inf|^2`. Identically 1 at `t = 1`.
fn coupling_weight(z: Complex64, q: f64, t: f64, trunc: u32) -> f64 {
    if t == 1.0 {
        return 1.0;
    }
    let num = poch_inf_c64(z, q, trunc);
    let den = poch_inf_c64(t * z, q, trunc);
    (num / den).norm_sqr()
}

/// Squared modulus of the one-variable half-weight at a unimodular argument:
/// the four-slot product of `|(Z'; q)_inf / (t_r Z'; q)_inf|^2` with
/// `Z' = +-Z, +-sigma Z`. Slots with `t_r = 1` contribute 1.
fn single_weight(z: Complex64, q: f64, sigma: f64, t_r: &[f64; 4], trunc: u32) -> f64 {
    let args = [z, -z, sigma * z, -(sigma * z)];
    let mut acc = 1.0;
    for (tr, arg) in t_r.iter().zip(args) {
        if *tr == 1.0 {
            continue;
        }
        let num = poch_inf_c64(arg, q, trunc);
        let den = poch_inf_c64(*tr * arg, q, trunc);
        acc *= (num / den).norm_sqr();
    }
    acc
}

/// Precomputed quadrature data: grid points and the weight at each point.
pub struct QuadratureContext {
    params: ParameterSet,
    pub m_per_dim: usize,
    pub trunc: u32,
    points: Vec<Vec<Complex64>>,
    weights: Vec<f64>,
}

impl QuadratureContext {
    /// Builds the grid and evaluates the weight everywhere. `trunc` of `None`
    /// picks a truncation depth matching double precision for this `q`.
    pub fn new(params: &ParameterSet, m_per_dim: usize, trunc: Option<u32>) -> Self {
        assert!(
            m_per_dim >= 8,
            "grid must have at least 8 points per dimension"
        );
        let trunc = trunc.unwrap_or_else(|| auto_truncation(&params.q));
        let n = params.n;
        let (q, sigma, t, t_r) = f64_params(params);
        let circle: Vec<Complex64> = (0..m_per_dim)
            .map(|k| {
                let theta = 2.0 * PI * (k as f64) / (m_per_dim as f64) - PI;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let total = m_per_dim.pow(n as u32);
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for flat in 0..total {
            let mut idx = flat;
            let mut z = Vec::with_capacity(n);
            for _ in 0..n {
                z.push(circle[idx % m_per_dim]);
                idx /= m_per_dim;
            }
            let mut w = 1.0;
            for j in 0..n {
                for k in (j + 1)..n {
                    w *= coupling_weight(z[j] * z[k], q, t, trunc);
                    w *= coupling_weight(z[j] / z[k], q, t, trunc);
                }
                w *= single_weight(z[j], q, sigma, &t_r, trunc);
            }
            points.push(z);
            weights.push(w);
        }
        Self {
            params: params.clone(),
            m_per_dim,
            trunc,
            points,
            weights,
        }
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Values of a polynomial at every grid point. The values are real up to
    /// roundoff because the monomial orbits are closed under inversion.
    pub fn values_of(&self, poly: &SymmetricPolynomial) -> Vec<f64> {
        self.points
            .iter()
            .map(|z| {
                let v = poly.eval_c64(z);
                debug_assert!(
                    v.im.abs() <= 1e-9 * (1.0 + v.re.abs()),
                    "symmetric value should be real, got {v}"
                );
                v.re
            })
            .collect()
    }

    /// Weighted pairwise-summed mean of the elementwise product of two value
    /// vectors: the quadrature inner product.
    pub fn inner_values(&self, a: &[f64], b: &[f64]) -> f64 {
        assert_eq!(a.len(), self.num_points(), "value vector length mismatch");
        assert_eq!(b.len(), self.num_points(), "value vector length mismatch");
        let products: Vec<f64> = a
            .iter()
            .zip(b)
            .zip(&self.weights)
            .map(|((x, y), w)| x * y * w)
            .collect();
        pairwise_sum(&products) / (self.num_points() as f64)
    }

    /// Inner product of two polynomials.
    pub fn inner(&self, a: &SymmetricPolynomial, b: &SymmetricPolynomial) -> f64 {
        self.inner_values(&self.values_of(a), &self.values_of(b))
    }

    /// The mass of the measure: the inner product of 1 with itself.
    pub fn constant_inner(&self) -> f64 {
        pairwise_sum(&self.weights) / (self.num_points() as f64)
    }
}

/// Product of the ascending and descending half-densities of the given
/// parameter set at real multiplicative coordinates `Y_j = q^(y_j)`. The
/// power prefactors of the two halves cancel in the product, so only
/// quotients of infinite q-products remain.
pub fn hat_density(set: &ParameterSet, y: &[f64], trunc: u32) -> f64 {
    let n = set.n;
    assert_eq!(y.len(), n, "coordinate count must equal n");
    let (q, sigma, t, t_r) = f64_params(set);
    // coupling product: (Y; q)_inf (q Y; q)_inf / ((t Y; q)_inf (q Y / t; q)_inf)
    let coupling = |yv: f64| -> f64 {
        if t == 1.0 {
            return 1.0;
        }
        poch_inf_f64(yv, q, trunc) * poch_inf_f64(q * yv, q, trunc)
            / (poch_inf_f64(t * yv, q, trunc) * poch_inf_f64(q * yv / t, q, trunc))
    };
    // single product, four slots of
    // (N Y; q)_inf (D Y; q)_inf / ((t_r N Y; q)_inf (D Y / t_r; q)_inf)
    // with (N, D) = (1, q), (-1, -q), (sigma, sigma), (-sigma, -sigma).
    let single = |yv: f64| -> f64 {
        let mut acc = 1.0;
        let slots = [(1.0, q), (-1.0, -q), (sigma, sigma), (-sigma, -sigma)];
        for (tr, (nfac, dfac)) in t_r.iter().zip(slots) {
            if *tr == 1.0 {
                continue;
            }
            acc *= poch_inf_f64(nfac * yv, q, trunc) * poch_inf_f64(dfac * yv, q, trunc)
                / (poch_inf_f64(tr * nfac * yv, q, trunc) * poch_inf_f64(dfac * yv / tr, q, trunc));
        }
        acc
    };
    let mut acc = 1.0;
    for j in 0..n {
        for k in (j + 1)..n {
            acc *= coupling(y[j] * y[k]);
            acc *= coupling(y[j] / y[k]);
        }
        acc *= single(y[j]);
    }
    acc
}

/// Closed numeric norm of the monic polynomial:
/// `2^n n! * hat density of the dual set at the spectral point of lambda`.
pub fn monic_norm_formula(
    params: &ParameterSet,
    lambda: &Partition,
    trunc: u32,
) -> Result<f64, ParamError> {
    let dual = params.dual()?;
    let y: Vec<f64> = params
        .spectral_point(lambda.parts())
        .iter()
        .map(rat_to_f64)
        .collect();
    let factorial: f64 = (1..=params.n).map(|k| k as f64).product();
    Ok(2f64.powi(params.n as i32) * factorial * hat_density(&dual, &y, trunc))
}

/// Closed numeric norm of the unit-normalized polynomial: the monic norm
/// divided by the square of the evaluation normalization.
pub fn normalized_norm_formula(
    params: &ParameterSet,
    lambda: &Partition,
    trunc: u32,
) -> Result<f64, ParamError> {
    let c = rat_to_f64(&normalization_c(params, lambda)?);
    Ok(monic_norm_formula(params, lambda, trunc)? / (c * c))
}

/// Result of rebuilding a polynomial from the measure alone.
#[derive(Debug, Clone)]
pub struct GramSchmidtResult {
    pub target: Partition,
    pub coeffs: BTreeMap<Partition, f64>,
    /// 1-norm condition estimate of the solved Gram block.
    pub condition: f64,
}

/// Monomial-basis coefficients of the degree-`lambda` orthogonal polynomial
/// recovered purely from quadrature: solve the Gram system that makes
/// `m_lambda + sum c_nu m_nu` orthogonal to every lower monomial.
pub fn gram_schmidt_oracle(ctx: &QuadratureContext, lambda: &Partition) -> GramSchmidtResult {
    let basis = partitions_below(lambda);
    let dim = basis.len();
    let values: Vec<Vec<f64>> = basis
        .iter()
        .map(|mu| ctx.values_of(&SymmetricPolynomial::from_pairs([(mu.clone(), rat_int(1))])))
        .collect();
    let mut coeffs = BTreeMap::new();
    coeffs.insert(lambda.clone(), 1.0);
    if dim == 1 {
        return GramSchmidtResult {
            target: lambda.clone(),
            coeffs,
            condition: 1.0,
        };
    }
    let lower = dim - 1;
    let gram: Vec<Vec<f64>> = (0..lower)
        .map(|i| {
            (0..lower)
                .map(|j| ctx.inner_values(&values[i], &values[j]))
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = (0..lower)
        .map(|i| -ctx.inner_values(&values[i], &values[lower]))
        .collect();
    let solution = solve_f64(&gram, &rhs).expect("Gram block must be nonsingular");
    let condition = match invert_f64(&gram) {
        Some(inv) => norm1_f64(&gram) * norm1_f64(&inv),
        None => f64::INFINITY,
    };
    for (mu, c) in basis.iter().take(lower).zip(solution) {
        coeffs.insert(mu.clone(), c);
    }
    GramSchmidtResult {
        target: lambda.clone(),
        coeffs,
        condition,
    }
}
