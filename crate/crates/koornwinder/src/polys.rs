//! Construction of the polynomial family and its exact verifiers.
//!
//! The polynomial of a partition is the monic simultaneous eigenfunction of
//! the commuting operators on the dominance ideal below that partition. It is
//! computed by back substitution through a triangular operator matrix, then
//! certified against every operator order. Two normalizations appear:
//! `p` is monic in the monomial basis, while `P = p / c` takes the value 1
//! at the base dual spectral point. The verifiers check the difference
//! equations, the parameter duality, the recurrence relations, and the two
//! ways of computing norm ratios, all in exact arithmetic.

use crate::diffops::{
    apply_operator, big_u, big_v, eigenvalue, eigenvalue_at_point, operator_matrix_on_basis,
    DiffOpError, OperatorMatrix, PointSampler,
};
use crate::params::{ParamError, ParameterSet};
use crate::qseries::poch_exact;
use crate::scalar::{fnv1a64, rat_pow, Rat};
use crate::symfunc::{partitions_below, Partition, SymmetricPolynomial};
use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Mutex;

/// Errors from polynomial construction and verification.
#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("no operator combination separates the eigenvalue of {lambda} on its basis")]
    EigenvalueCollision { lambda: Partition },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Lazily computed, cached family of monic polynomials for one parameter set.
pub struct PolynomialFamily {
    params: ParameterSet,
    seed: u64,
    cache: Mutex<BTreeMap<Partition, SymmetricPolynomial>>,
}

impl PolynomialFamily {
    pub fn new(params: ParameterSet, seed: u64) -> Self {
        Self {
            params,
            seed,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    /// The monic polynomial of `lambda` in the monomial basis.
    pub fn polynomial(&self, lambda: &Partition) -> Result<SymmetricPolynomial, PolyError> {
        assert_eq!(lambda.len(), self.params.n, "partition length must equal n");
        if let Some(hit) = self.cache.lock().unwrap().get(lambda) {
            return Ok(hit.clone());
        }
        let computed = self.compute(lambda)?;
        self.cache
            .lock()
            .unwrap()
            .entry(lambda.clone())
            .or_insert_with(|| computed.clone());
        Ok(computed)
    }

    /// `c_lambda`, the value of the monic polynomial at the base dual
    /// spectral point, from the closed product formula.
    pub fn normalization(&self, lambda: &Partition) -> Result<Rat, PolyError> {
        Ok(normalization_c(&self.params, lambda)?)
    }

    /// Evaluates the unit-normalized polynomial `P = p / c` at a point.
    pub fn normalized_eval(&self, lambda: &Partition, z: &[Rat]) -> Result<Rat, PolyError> {
        let p = self.polynomial(lambda)?;
        Ok(p.eval(z) / self.normalization(lambda)?)
    }

    fn compute(&self, lambda: &Partition) -> Result<SymmetricPolynomial, PolyError> {
        let basis = partitions_below(lambda);
        let dim = basis.len();
        let top = dim - 1;
        assert_eq!(&basis[top], lambda, "target must be maximal in its ideal");
        if dim == 1 {
            return Ok(SymmetricPolynomial::from_pairs([(
                lambda.clone(),
                Rat::one(),
            )]));
        }
        let n = self.params.n;
        let matrices: Vec<OperatorMatrix> = (1..=n)
            .map(|r| operator_matrix_on_basis(&self.params, r, &basis, self.seed))
            .collect::<Result<_, _>>()?;
        let eigens: Vec<Rat> = (1..=n)
            .map(|r| eigenvalue(&self.params, r, lambda))
            .collect();

        // A weight vector over the operators yields one combined triangular
        // matrix; extraction works when the combined eigenvalue of lambda
        // differs from every other diagonal entry.
        let extract = |weights: &[Rat]| -> Option<Vec<Rat>> {
            let target: Rat = weights.iter().zip(&eigens).map(|(w, e)| w * e).sum();
            let diag = |i: usize| -> Rat {
                weights
                    .iter()
                    .zip(&matrices)
                    .map(|(w, m)| w * &m.entries[i][i])
                    .sum()
            };
            if (0..top).any(|i| diag(i) == target) {
                return None;
            }
            let entry = |i: usize, k: usize| -> Rat {
                weights
                    .iter()
                    .zip(&matrices)
                    .map(|(w, m)| w * &m.entries[i][k])
                    .sum()
            };
            let mut coeffs = vec![Rat::zero(); dim];
            coeffs[top] = Rat::one();
            for i in (0..top).rev() {
                let acc: Rat = ((i + 1)..dim).map(|k| entry(i, k) * &coeffs[k]).sum();
                coeffs[i] = acc / (&target - diag(i));
            }
            Some(coeffs)
        };

        let mut weight_sets: Vec<Vec<Rat>> = (0..n)
            .map(|r| {
                let mut w = vec![Rat::zero(); n];
                w[r] = Rat::one();
                w
            })
            .collect();
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a64(format!("{lambda}").as_bytes()));
        for _ in 0..40 {
            weight_sets.push(
                (0..n)
                    .map(|_| Rat::from_integer(rng.gen_range(1i64..=20).into()))
                    .collect(),
            );
        }
        let coeffs = weight_sets.iter().find_map(|w| extract(w)).ok_or_else(|| {
            PolyError::EigenvalueCollision {
                lambda: lambda.clone(),
            }
        })?;

        // Certify the vector against every operator, not just the combination
        // used for extraction.
        for (m, e) in matrices.iter().zip(&eigens) {
            let image = m.apply(&coeffs);
            for (im, c) in image.iter().zip(&coeffs) {
                if im != &(e * c) {
                    return Err(PolyError::Inconsistent(format!(
                        "vector for {lambda} is no eigenvector at order {}",
                        m.r
                    )));
                }
            }
        }
        Ok(SymmetricPolynomial::from_pairs(
            basis.into_iter().zip(coeffs.into_iter()),
        ))
    }
}

/// Telescoped step ratio of the ascending half-density coupling:
/// `tau^-m (t Z; q)_m / (Z; q)_m` in the given parameter set.
pub fn vplus_ratio(set: &ParameterSet, z: &Rat, m: u64) -> Rat {
    if set.t.is_one() {
        return Rat::one();
    }
    rat_pow(&set.sqrt_t, -(m as i64)) * poch_exact(&(&set.t * z), &set.q, m)
        / poch_exact(z, &set.q, m)
}

/// Telescoped step ratio of the descending half-density coupling:
/// `tau^m (q t^-1 Z; q)_m / (q Z; q)_m`.
pub fn vminus_ratio(set: &ParameterSet, z: &Rat, m: u64) -> Rat {
    if set.t.is_one() {
        return Rat::one();
    }
    rat_pow(&set.sqrt_t, m as i64) * poch_exact(&(&set.q * z / &set.t), &set.q, m)
        / poch_exact(&(&set.q * z), &set.q, m)
}

/// Telescoped step ratio of the ascending one-variable half-density: the
/// four-slot product of `(c Z; q)_m / (Z'; q)_m` factors over
/// `sqrt(t0 t1 t2 t3)^m`. Slots with `t_r = 1` contribute 1.
pub fn wplus_ratio(set: &ParameterSet, z: &Rat, m: u64) -> Rat {
    let q = &set.q;
    let sigma_z = &set.sqrt_q * z;
    let mut acc = rat_pow(&set.sqrt_t_prod, -(m as i64));
    let slots: [(&Rat, Rat, bool); 4] = [
        (&set.t_r[0], z.clone(), false),
        (&set.t_r[1], z.clone(), true),
        (&set.t_r[2], sigma_z.clone(), false),
        (&set.t_r[3], sigma_z, true),
    ];
    for (t_r, arg, negate) in slots {
        if t_r.is_one() {
            continue;
        }
        let signed = if negate { -arg.clone() } else { arg.clone() };
        acc *= poch_exact(&(t_r * &signed), q, m) / poch_exact(&signed, q, m);
    }
    acc
}

/// Telescoped step ratio of the descending one-variable half-density:
/// slots `(q t_r^-1 Z; q)_m / (q Z; q)_m` for the integer-shift pair and
/// `(sigma t_r^-1 Z; q)_m / (sigma Z; q)_m` for the half-shift pair, times
/// `sqrt(t0 t1 t2 t3)^m`.
pub fn wminus_ratio(set: &ParameterSet, z: &Rat, m: u64) -> Rat {
    let q = &set.q;
    let qz = q * z;
    let sigma_z = &set.sqrt_q * z;
    let mut acc = rat_pow(&set.sqrt_t_prod, m as i64);
    let slots: [(&Rat, Rat, bool); 4] = [
        (&set.t_r[0], qz.clone(), false),
        (&set.t_r[1], qz, true),
        (&set.t_r[2], sigma_z.clone(), false),
        (&set.t_r[3], sigma_z, true),
    ];
    for (t_r, arg, negate) in slots {
        if t_r.is_one() {
            continue;
        }
        let signed = if negate { -arg.clone() } else { arg.clone() };
        acc *= poch_exact(&(&signed / t_r), q, m) / poch_exact(&signed, q, m);
    }
    acc
}

/// `c_lambda`: the evaluation of the monic polynomial at the base dual
/// spectral point, as a closed telescoped product over the dual parameters at
/// the primal spectral data.
pub fn normalization_c(params: &ParameterSet, lambda: &Partition) -> Result<Rat, ParamError> {
    assert_eq!(lambda.len(), params.n, "partition length must equal n");
    let dual = params.dual()?;
    let rho = params.spectral_zeros();
    let lam = lambda.parts();
    let mut c = Rat::one();
    for (j, k) in (0..params.n).tuple_combinations() {
        c *= vplus_ratio(&dual, &(&rho[j] * &rho[k]), lam[j] + lam[k]);
        c *= vplus_ratio(&dual, &(&rho[j] / &rho[k]), lam[j] - lam[k]);
    }
    for (j, r) in rho.iter().enumerate() {
        c *= wplus_ratio(&dual, r, lam[j]);
    }
    Ok(c)
}

/// Norm ratio `|P_lambda|^2 / |P_0|^2` as a closed telescoped product: the
/// descending over ascending half-density ratios at the spectral data.
pub fn norm_ratio_closed(params: &ParameterSet, lambda: &Partition) -> Result<Rat, ParamError> {
    assert_eq!(lambda.len(), params.n, "partition length must equal n");
    let dual = params.dual()?;
    let rho = params.spectral_zeros();
    let lam = lambda.parts();
    let mut out = Rat::one();
    for (j, k) in (0..params.n).tuple_combinations() {
        let zs = &rho[j] * &rho[k];
        let zd = &rho[j] / &rho[k];
        out *= vminus_ratio(&dual, &zs, lam[j] + lam[k]) / vplus_ratio(&dual, &zs, lam[j] + lam[k]);
        out *= vminus_ratio(&dual, &zd, lam[j] - lam[k]) / vplus_ratio(&dual, &zd, lam[j] - lam[k]);
    }
    for (j, r) in rho.iter().enumerate() {
        out *= wminus_ratio(&dual, r, lam[j]) / wplus_ratio(&dual, r, lam[j]);
    }
    Ok(out)
}

/// Norm ratio `|P_lambda|^2 / |P_0|^2` by walking a chain of rectangular
/// moves from the zero partition to `lambda` and taking, at each step, the
/// ratio of the descending to the ascending recurrence coefficient.
pub fn norm_ratio_via_recurrence(
    params: &ParameterSet,
    lambda: &Partition,
) -> Result<Rat, PolyError> {
    assert_eq!(lambda.len(), params.n, "partition length must equal n");
    let dual = params.dual()?;
    let n = params.n;
    let lam = lambda.parts();
    let mut nu = Partition::zero(n);
    let mut ratio = Rat::one();
    for r in (1..=n).rev() {
        let steps = lam[r - 1] - if r == n { 0 } else { lam[r] };
        let ones: Vec<(usize, i8)> = (0..r).map(|j| (j, 1)).collect();
        let minus_ones: Vec<(usize, i8)> = (0..r).map(|j| (j, -1)).collect();
        let spectators: Vec<usize> = (r..n).collect();
        let delta: Vec<i64> = (0..n).map(|j| i64::from(j < r)).collect();
        for _ in 0..steps {
            let ascend = big_v(
                &dual,
                &ones,
                &spectators,
                &params.spectral_point(nu.parts()),
            );
            if ascend.is_zero() {
                return Err(PolyError::Inconsistent(format!(
                    "ascending coefficient vanishes at {nu} (order {r})"
                )));
            }
            nu = nu
                .try_add(&delta)
                .expect("rectangular moves in decreasing order stay partitions");
            let descend = big_v(
                &dual,
                &minus_ones,
                &spectators,
                &params.spectral_point(nu.parts()),
            );
            ratio *= descend / ascend;
        }
    }
    assert_eq!(&nu, lambda, "chain must end at the target");
    Ok(ratio)
}

/// One evaluation of a difference equation: left side applies the operator to
/// the polynomial, right side scales it by the eigenvalue.
#[derive(Debug, Clone)]
pub struct DiffeqWitness {
    pub lambda: Partition,
    pub r: usize,
    pub point: Vec<Rat>,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl DiffeqWitness {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Applies the order-`r` operator to an arbitrary polynomial at `z` and pairs
/// it with the expected eigenvalue action. Exposed separately so tampered
/// polynomials can be driven through the same check.
pub fn check_diffeq_at(
    params: &ParameterSet,
    r: usize,
    poly: &SymmetricPolynomial,
    eigen: &Rat,
    z: &[Rat],
) -> (Rat, Rat) {
    let f = |pt: &[Rat]| poly.eval(pt);
    (apply_operator(params, r, &f, z), eigen * poly.eval(z))
}

/// Checks the order-`r` difference equation for `lambda` at freshly sampled
/// generic points.
pub fn verify_diffeq(
    family: &PolynomialFamily,
    lambda: &Partition,
    r: usize,
    num_points: usize,
    point_seed: u64,
) -> Result<Vec<DiffeqWitness>, PolyError> {
    let poly = family.polynomial(lambda)?;
    let eigen = eigenvalue(family.params(), r, lambda);
    let mut sampler = PointSampler::new(family.params(), point_seed);
    let mut out = Vec::with_capacity(num_points);
    for _ in 0..num_points {
        let z = sampler.next_point()?;
        let (lhs, rhs) = check_diffeq_at(family.params(), r, &poly, &eigen, &z);
        out.push(DiffeqWitness {
            lambda: lambda.clone(),
            r,
            point: z,
            lhs,
            rhs,
        });
    }
    Ok(out)
}

/// One duality comparison: the unit-normalized polynomial of `lambda` at the
/// dual spectral point of `mu` against the dual polynomial of `mu` at the
/// primal spectral point of `lambda`.
#[derive(Debug, Clone)]
pub struct DualityWitness {
    pub lambda: Partition,
    pub mu: Partition,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl DualityWitness {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluates both sides of the duality relation for one pair of partitions.
/// `dual_family` must be built over the dual parameter set of `family`.
pub fn verify_duality(
    family: &PolynomialFamily,
    dual_family: &PolynomialFamily,
    lambda: &Partition,
    mu: &Partition,
) -> Result<DualityWitness, PolyError> {
    assert_eq!(
        &family.params().dual()?.t_r,
        &dual_family.params().t_r,
        "second family must use the dual parameter set"
    );
    let lhs = family.normalized_eval(lambda, &dual_family.params().spectral_point(mu.parts()))?;
    let rhs = dual_family.normalized_eval(mu, &family.params().spectral_point(lambda.parts()))?;
    Ok(DualityWitness {
        lambda: lambda.clone(),
        mu: mu.clone(),
        lhs,
        rhs,
    })
}

/// Exact recurrence data for one partition and operator order: the
/// coefficient attached to each reachable partition, plus the coefficients of
/// out-of-cone moves, each of which must vanish.
#[derive(Debug, Clone)]
pub struct RecurrenceTerms {
    pub lambda: Partition,
    pub r: usize,
    pub terms: BTreeMap<Partition, Rat>,
    pub boundary: Vec<(Vec<i64>, Rat)>,
}

impl RecurrenceTerms {
    /// True when every out-of-cone coefficient is exactly zero.
    pub fn boundary_vanishes(&self) -> bool {
        self.boundary.iter().all(|(_, c)| c.is_zero())
    }
}

/// Expands the order-`r` recurrence of `lambda`: for every signed index
/// subset of size at most `r`, the dual stay-put and shift coefficients at
/// the primal spectral point of `lambda`, keyed by the shifted partition.
pub fn recurrence_terms(
    params: &ParameterSet,
    r: usize,
    lambda: &Partition,
) -> Result<RecurrenceTerms, PolyError> {
    assert_eq!(lambda.len(), params.n, "partition length must equal n");
    let n = params.n;
    assert!(r >= 1 && r <= n, "order must satisfy 1 <= r <= n");
    let dual = params.dual()?;
    let point = params.spectral_point(lambda.parts());
    let all: Vec<usize> = (0..n).collect();
    let mut terms: BTreeMap<Partition, Rat> = BTreeMap::new();
    let mut boundary = Vec::new();
    for j_size in 0..=r {
        for j_set in all.iter().copied().combinations(j_size) {
            let complement: Vec<usize> =
                all.iter().copied().filter(|i| !j_set.contains(i)).collect();
            let u = big_u(&dual, &complement, r - j_size, &point);
            for mask in 0..(1u32 << j_size) {
                let signed: Vec<(usize, i8)> = j_set
                    .iter()
                    .enumerate()
                    .map(|(bit, &idx)| (idx, if mask >> bit & 1 == 1 { -1 } else { 1 }))
                    .collect();
                let v = big_v(&dual, &signed, &complement, &point);
                let mut delta = vec![0i64; n];
                for &(j, s) in &signed {
                    delta[j] = s as i64;
                }
                match lambda.try_add(&delta) {
                    Some(target) => {
                        *terms.entry(target).or_insert_with(Rat::zero) += &u * v;
                    }
                    None => boundary.push((delta, v)),
                }
            }
        }
    }
    Ok(RecurrenceTerms {
        lambda: lambda.clone(),
        r,
        terms,
        boundary,
    })
}

/// One evaluation of a recurrence relation at a point: left side multiplies
/// the unit-normalized polynomial by the dual eigenvalue function, right side
/// sums the recurrence terms.
#[derive(Debug, Clone)]
pub struct RecurrenceWitness {
    pub lambda: Partition,
    pub r: usize,
    pub point: Vec<Rat>,
    pub lhs: Rat,
    pub rhs: Rat,
    pub boundary_ok: bool,
}

impl RecurrenceWitness {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs && self.boundary_ok
    }
}

/// Checks the order-`r` recurrence for `lambda` at freshly sampled points.
pub fn verify_recurrence(
    family: &PolynomialFamily,
    lambda: &Partition,
    r: usize,
    num_points: usize,
    point_seed: u64,
) -> Result<Vec<RecurrenceWitness>, PolyError> {
    let params = family.params();
    let dual = params.dual()?;
    let data = recurrence_terms(params, r, lambda)?;
    let boundary_ok = data.boundary_vanishes();
    let mut sampler = PointSampler::new(params, point_seed);
    let mut out = Vec::with_capacity(num_points);
    for _ in 0..num_points {
        let z = sampler.next_point()?;
        let lhs = eigenvalue_at_point(&dual, r, &z) * family.normalized_eval(lambda, &z)?;
        let mut rhs = Rat::zero();
        for (target, coef) in &data.terms {
            rhs += coef * family.normalized_eval(target, &z)?;
        }
        out.push(RecurrenceWitness {
            lambda: lambda.clone(),
            r,
            point: z,
            lhs,
            rhs,
            boundary_ok,
        });
    }
    Ok(out)
}
