//! The commuting q-difference operators of the Koornwinder family.
//!
//! Everything is written in multiplicative variables: a point is the vector
//! `z_j = q^(x_j)`, a unit shift of `x_j` multiplies `z_j` by `q^(+-1)`, and
//! every coefficient is an exact rational function of the `z_j` and the
//! parameters. The operator of order `r` acts as
//!
//! ```text
//! D_r f = sum over J subset {1..n} with |J| <= r, signs eps on J of
//!         U(J^c, r - |J|) * V(eps J, J^c) * (f shifted by eps on J)
//! ```
//!
//! with `V` a product of one-variable weights `w` and two-variable couplings
//! `v`, and `U` an alternating sum of the same building blocks over the
//! untouched variables. Operator matrices on a monomial basis are recovered
//! by exact interpolation at generic sample points; triangularity is not
//! assumed but checked through residuals at surplus points.

use crate::params::ParameterSet;
use crate::scalar::{rat_pow, Rat};
use crate::symfunc::{eval_monomial, partitions_below, pow_signed, Partition};
use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Errors from operator-matrix construction.
#[derive(Debug, thiserror::Error)]
pub enum DiffOpError {
    #[error("could not sample a generic point after {attempts} attempts")]
    SamplingFailed { attempts: usize },
    #[error("interpolation system stayed singular after {attempts} resamplings")]
    SingularSystem { attempts: usize },
    #[error("operator action on the monomial of {column} leaves the triangular span")]
    TriangularityViolated { column: Partition },
}

/// One-variable coupling `v`: `tau^-1 (1 - t Z) / (1 - Z)`, with the
/// removable singularity at `t = 1` cut out (the function is then 1).
pub fn coef_v(params: &ParameterSet, z: &Rat) -> Rat {
    if params.t.is_one() {
        return Rat::one();
    }
    let num = Rat::one() - &params.t * z;
    let den = Rat::one() - z;
    num / den / &params.sqrt_t
}

/// Product of two `v` factors, the combination the operators always use.
///
/// When a numerator `1 - t Z` vanishes the pair is zero even if the partner
/// degenerates at the same parameter coincidence (as happens at spectral
/// points with repeated parts when `t = q`): the vanishing factor is a
/// monomial identity holding across the whole parameter family, while the
/// partner's pole lives on a proper subvariety, so the pair tends to zero
/// along every deformation inside the family. Short-circuiting on the zero
/// numerator evaluates that limit; a lone vanishing denominator still panics.
pub fn coef_v_pair(params: &ParameterSet, z1: &Rat, z2: &Rat) -> Rat {
    if !params.t.is_one() {
        let one = Rat::one();
        if &params.t * z1 == one || &params.t * z2 == one {
            return Rat::zero();
        }
    }
    coef_v(params, z1) * coef_v(params, z2)
}

/// One-variable weight `w`: the product over the four parameter slots of
/// `(1 -+ t_r Z') / (1 -+ Z')` with `Z' = Z` or `sigma Z`, divided by
/// `sqrt(t0 t1 t2 t3)`. Slots with `t_r = 1` contribute the constant 1.
pub fn coef_w(params: &ParameterSet, z: &Rat) -> Rat {
    let sigma_z = &params.sqrt_q * z;
    let mut acc = params.sqrt_t_prod.recip();
    let slots: [(&Rat, Rat, bool); 4] = [
        (&params.t_r[0], z.clone(), false),
        (&params.t_r[1], z.clone(), true),
        (&params.t_r[2], sigma_z.clone(), false),
        (&params.t_r[3], sigma_z, true),
    ];
    for (t_r, arg, plus) in slots {
        if t_r.is_one() {
            continue;
        }
        let (num, den) = if plus {
            (Rat::one() + t_r * &arg, Rat::one() + &arg)
        } else {
            (Rat::one() - t_r * &arg, Rat::one() - &arg)
        };
        acc *= num / den;
    }
    acc
}

/// The shift-attached coefficient `V(eps J, K)` at the point `z`.
///
/// `signed_j` lists the shifted variables with their signs; `k_set` the
/// spectator variables (disjoint from `signed_j`). Empty products are 1.
pub fn big_v(params: &ParameterSet, signed_j: &[(usize, i8)], k_set: &[usize], z: &[Rat]) -> Rat {
    let mut acc = Rat::one();
    for &(j, s) in signed_j {
        acc *= coef_w(params, &pow_signed(&z[j], s as i64));
    }
    for (a, b) in signed_j.iter().tuple_combinations() {
        let prod = pow_signed(&z[a.0], a.1 as i64) * pow_signed(&z[b.0], b.1 as i64);
        let shifted = &params.q * &prod;
        acc *= coef_v_pair(params, &prod, &shifted);
    }
    for &(j, s) in signed_j {
        let base = pow_signed(&z[j], s as i64);
        for &k in k_set {
            acc *= coef_v_pair(params, &(&base * &z[k]), &(&base / &z[k]));
        }
    }
    acc
}

/// The stay-put coefficient `U(K, p)` at the point `z`: an alternating sum
/// over size-`p` signed subsets of `K`. `U(K, 0) = 1`.
pub fn big_u(params: &ParameterSet, k_set: &[usize], p: usize, z: &[Rat]) -> Rat {
    if p == 0 {
        return Rat::one();
    }
    assert!(p <= k_set.len(), "subset size exceeds index set");
    let mut total = Rat::zero();
    for l_set in k_set.iter().copied().combinations(p) {
        let rest: Vec<usize> = k_set
            .iter()
            .copied()
            .filter(|i| !l_set.contains(i))
            .collect();
        for mask in 0..(1u32 << p) {
            let signed: Vec<(usize, i8)> = l_set
                .iter()
                .enumerate()
                .map(|(bit, &idx)| (idx, if mask >> bit & 1 == 1 { -1 } else { 1 }))
                .collect();
            let mut term = Rat::one();
            for &(l, s) in &signed {
                term *= coef_w(params, &pow_signed(&z[l], s as i64));
            }
            for (a, b) in signed.iter().tuple_combinations() {
                let prod = pow_signed(&z[a.0], a.1 as i64) * pow_signed(&z[b.0], b.1 as i64);
                let reflected = (&params.q * &prod).recip();
                term *= coef_v_pair(params, &prod, &reflected);
            }
            for &(l, s) in &signed {
                let base = pow_signed(&z[l], s as i64);
                for &k in &rest {
                    term *= coef_v_pair(params, &(&base * &z[k]), &(&base / &z[k]));
                }
            }
            total += term;
        }
    }
    if p % 2 == 1 {
        -total
    } else {
        total
    }
}

/// All terms of the order-`r` operator at the point `z`, as pairs of
/// (coefficient, shifted point). Applying the operator to `f` then means
/// summing `coefficient * f(shifted point)`.
pub fn operator_terms(params: &ParameterSet, r: usize, z: &[Rat]) -> Vec<(Rat, Vec<Rat>)> {
    let n = params.n;
    assert_eq!(z.len(), n, "point dimension must equal n");
    assert!(r >= 1 && r <= n, "operator order must satisfy 1 <= r <= n");
    let all: Vec<usize> = (0..n).collect();
    let mut terms = Vec::new();
    for j_size in 0..=r {
        for j_set in all.iter().copied().combinations(j_size) {
            let complement: Vec<usize> =
                all.iter().copied().filter(|i| !j_set.contains(i)).collect();
            let u = big_u(params, &complement, r - j_size, z);
            for mask in 0..(1u32 << j_size) {
                let signed: Vec<(usize, i8)> = j_set
                    .iter()
                    .enumerate()
                    .map(|(bit, &idx)| (idx, if mask >> bit & 1 == 1 { -1 } else { 1 }))
                    .collect();
                let v = big_v(params, &signed, &complement, z);
                let mut shifted = z.to_vec();
                for &(j, s) in &signed {
                    shifted[j] = &shifted[j] * pow_signed(&params.q, s as i64);
                }
                terms.push((&u * v, shifted));
            }
        }
    }
    terms
}

/// Applies the order-`r` operator to a black-box function at the point `z`.
pub fn apply_operator(
    params: &ParameterSet,
    r: usize,
    f: &dyn Fn(&[Rat]) -> Rat,
    z: &[Rat],
) -> Rat {
    operator_terms(params, r, z)
        .into_iter()
        .map(|(coef, shifted)| coef * f(&shifted))
        .sum()
}

fn half_sum(y: &Rat) -> Rat {
    // (Y + 1/Y) / 2, the multiplicative form of a hyperbolic cosine.
    (y + y.recip()) / Rat::from_integer(2.into())
}

/// Eigenvalue function of the order-`r` operator at an arbitrary point given
/// by its coordinates `Y_j = q^(y_j)`.
///
/// The value is `2^r` times an alternating sum over index subsets `J` with
/// `|J| <= r`, each weighted by a complete homogeneous sum of the base
/// spectral values over indices `r..n`.
pub fn eigenvalue_at_point(params: &ParameterSet, r: usize, y: &[Rat]) -> Rat {
    let n = params.n;
    assert_eq!(y.len(), n, "point dimension must equal n");
    assert!(r >= 1 && r <= n, "operator order must satisfy 1 <= r <= n");
    let c_y: Vec<Rat> = y.iter().map(half_sum).collect();
    let c_rho: Vec<Rat> = (0..n).map(|j| half_sum(&params.spectral_zero(j))).collect();
    // Complete homogeneous sums of c_rho over 0-based indices (r-1)..n.
    let tail: Vec<usize> = (r - 1..n).collect();
    let h = |p: usize| -> Rat {
        if p == 0 {
            return Rat::one();
        }
        tail.iter()
            .copied()
            .combinations_with_replacement(p)
            .map(|multi| multi.iter().map(|&l| c_rho[l].clone()).product::<Rat>())
            .sum()
    };
    let all: Vec<usize> = (0..n).collect();
    let mut total = Rat::zero();
    for j_size in 0..=r.min(n) {
        let h_val = h(r - j_size);
        let sign_negative = (r - j_size) % 2 == 1;
        for j_set in all.iter().copied().combinations(j_size) {
            let prod: Rat = j_set.iter().map(|&j| c_y[j].clone()).product();
            let term = prod * &h_val;
            if sign_negative {
                total -= term;
            } else {
                total += term;
            }
        }
    }
    total * rat_pow(&Rat::from_integer(2.into()), r as i64)
}

/// Eigenvalue on the polynomial of `lambda`: the eigenvalue function at the
/// spectral point of `lambda`.
pub fn eigenvalue(params: &ParameterSet, r: usize, lambda: &Partition) -> Rat {
    eigenvalue_at_point(params, r, &params.spectral_point(lambda.parts()))
}

/// Eigenvalue at the base spectral point; the operators annihilate constants,
/// so this is expected to vanish.
pub fn eigenvalue_at_zero(params: &ParameterSet, r: usize) -> Rat {
    eigenvalue_at_point(params, r, &params.spectral_zeros())
}

/// Draws rational points that stay clear of every coefficient pole and of
/// each other's signed-permutation orbits, so interpolation systems are
/// nonsingular. Deterministic for a fixed seed.
pub struct PointSampler {
    rng: ChaCha8Rng,
    sqrt_q: Rat,
    n: usize,
    margin: i64,
    used_keys: BTreeSet<Vec<Rat>>,
}

impl PointSampler {
    const MAX_ATTEMPTS: usize = 500;

    pub fn new(params: &ParameterSet, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sqrt_q: params.sqrt_q.clone(),
            n: params.n,
            // Covers every pole of every coefficient for operator orders up to n.
            margin: (4 * params.n + 8) as i64,
            used_keys: BTreeSet::new(),
        }
    }

    /// Next generic point; error after a bounded number of rejected draws.
    pub fn next_point(&mut self) -> Result<Vec<Rat>, DiffOpError> {
        for _ in 0..Self::MAX_ATTEMPTS {
            let z: Vec<Rat> = (0..self.n)
                .map(|_| {
                    let numer = self.rng.gen_range(3i64..=79);
                    let denom = self.rng.gen_range(81i64..=211);
                    Rat::new(numer.into(), denom.into())
                })
                .collect();
            if !self.is_generic(&z) {
                continue;
            }
            let mut key: Vec<Rat> = z.iter().map(|v| v + v.recip()).collect();
            key.sort();
            if self.used_keys.insert(key) {
                return Ok(z);
            }
        }
        Err(DiffOpError::SamplingFailed {
            attempts: Self::MAX_ATTEMPTS,
        })
    }

    fn is_generic(&self, z: &[Rat]) -> bool {
        // Reject z when some product z_j z_k, ratio z_j / z_k, or single z_j
        // equals a half-integer power of q within the pole margin.
        let one = Rat::one();
        let mut power = rat_pow(&self.sqrt_q, -self.margin);
        for _ in -self.margin..=self.margin {
            for j in 0..self.n {
                if &z[j] * &power == one {
                    return false;
                }
                for k in (j + 1)..self.n {
                    if &z[j] * &z[k] * &power == one {
                        return false;
                    }
                    if &z[j] / &z[k] * &power == one {
                        return false;
                    }
                }
            }
            power *= &self.sqrt_q;
        }
        true
    }
}

/// Exact matrix of an operator on a dominance-closed monomial basis:
/// `entries[i][j]` is the coefficient of the monomial of `basis[i]` in the
/// operator applied to the monomial of `basis[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub r: usize,
    pub basis: Vec<Partition>,
    pub entries: Vec<Vec<Rat>>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, mu: &Partition) -> Option<usize> {
        self.basis.iter().position(|p| p == mu)
    }

    /// True when every nonzero entry sits at a dominance-comparable pair.
    pub fn is_triangular(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, e)| e.is_zero() || self.basis[i].leq_dominance(&self.basis[j]))
        })
    }

    /// Matrix-vector product with a coefficient vector over the same basis.
    pub fn apply(&self, coeffs: &[Rat]) -> Vec<Rat> {
        assert_eq!(coeffs.len(), self.dim(), "vector length must match basis");
        self.entries
            .iter()
            .map(|row| row.iter().zip(coeffs).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Exact commutator test against another matrix over the same basis.
    pub fn commutes_with(&self, other: &OperatorMatrix) -> bool {
        assert_eq!(self.basis, other.basis, "matrices must share a basis");
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let mut ab = Rat::zero();
                let mut ba = Rat::zero();
                for k in 0..n {
                    ab += &self.entries[i][k] * &other.entries[k][j];
                    ba += &other.entries[i][k] * &self.entries[k][j];
                }
                if ab != ba {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds the operator matrix on an explicit basis by interpolation.
///
/// The basis must be closed downward under dominance. Two more sample points
/// are drawn than basis elements; each column is solved on its dominance
/// ideal from the leading points and the solution is checked against every
/// remaining point, which turns triangularity into a verified property.
pub fn operator_matrix_on_basis(
    params: &ParameterSet,
    r: usize,
    basis: &[Partition],
    seed: u64,
) -> Result<OperatorMatrix, DiffOpError> {
    let dim = basis.len();
    assert!(dim > 0, "basis must be nonempty");
    for mu in basis {
        for nu in partitions_below(mu) {
            assert!(
                basis.contains(&nu),
                "basis not dominance-closed: missing {nu} below {mu}"
            );
        }
    }
    let mut sampler = PointSampler::new(params, seed);
    const RESAMPLE_ROUNDS: usize = 6;
    let mut rounds = 0;
    'resample: loop {
        rounds += 1;
        if rounds > RESAMPLE_ROUNDS {
            return Err(DiffOpError::SingularSystem {
                attempts: RESAMPLE_ROUNDS,
            });
        }
        let points: Vec<Vec<Rat>> = (0..dim + 2)
            .map(|_| sampler.next_point())
            .collect::<Result<_, _>>()?;
        // monomial_values[p][b] = value of the basis[b] monomial at points[p]
        let monomial_values: Vec<Vec<Rat>> = points
            .iter()
            .map(|z| basis.iter().map(|mu| eval_monomial(mu, z)).collect())
            .collect();
        // applied[p][b] = value of (operator acting on the basis[b] monomial) at points[p]
        let mut applied = vec![vec![Rat::zero(); dim]; points.len()];
        for (p, z) in points.iter().enumerate() {
            for (coef, shifted) in operator_terms(params, r, z) {
                for (b, mu) in basis.iter().enumerate() {
                    applied[p][b] += &coef * eval_monomial(mu, &shifted);
                }
            }
        }
        let mut entries = vec![vec![Rat::zero(); dim]; dim];
        for (b, mu) in basis.iter().enumerate() {
            let support: Vec<usize> = (0..dim).filter(|&i| basis[i].leq_dominance(mu)).collect();
            let k = support.len();
            let system: Vec<Vec<Rat>> = (0..k)
                .map(|p| {
                    support
                        .iter()
                        .map(|&i| monomial_values[p][i].clone())
                        .collect()
                })
                .collect();
            let rhs: Vec<Rat> = (0..k).map(|p| applied[p][b].clone()).collect();
            let Some(solution) = crate::linalg::solve_exact(&system, &rhs) else {
                continue 'resample;
            };
            // Residuals at every sample point; failure past the solve block
            // means the action genuinely leaves the dominance ideal.
            for (p, row) in monomial_values.iter().enumerate() {
                let predicted: Rat = support
                    .iter()
                    .zip(&solution)
                    .map(|(&i, c)| &row[i] * c)
                    .sum();
                if predicted != applied[p][b] {
                    if p < k {
                        continue 'resample;
                    }
                    return Err(DiffOpError::TriangularityViolated { column: mu.clone() });
                }
            }
            for (&i, c) in support.iter().zip(solution) {
                entries[i][b] = c;
            }
        }
        return Ok(OperatorMatrix {
            r,
            basis: basis.to_vec(),
            entries,
        });
    }
}

/// Operator matrix on the dominance ideal below `lambda`.
pub fn operator_matrix(
    params: &ParameterSet,
    r: usize,
    lambda: &Partition,
    seed: u64,
) -> Result<OperatorMatrix, DiffOpError> {
    operator_matrix_on_basis(params, r, &partitions_below(lambda), seed)
}
