//! Partitions and hyperoctahedral monomial symmetric functions.
//!
//! A partition here always has exactly `n` parts (zeros included), matching
//! the number of variables. The monomial symmetric function attached to a
//! partition is the sum of `z^nu` over the orbit of the parts under signed
//! permutations, written in multiplicative variables `z_j`; it is invariant
//! under permuting variables and under `z_j -> 1/z_j`.

use crate::scalar::Rat;
use num_complex::Complex64;
use num_traits::{Num, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Weakly decreasing nonnegative integer vector of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u64>);

impl Partition {
    /// Wraps a weakly decreasing vector. Panics otherwise.
    pub fn new(parts: Vec<u64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "parts must be weakly decreasing: {parts:?}"
        );
        Self(parts)
    }

    /// The zero partition of the given length.
    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Dominance-type partial order: every leading partial sum of `self` is at
    /// most the corresponding partial sum of `other`. Weights may differ.
    pub fn leq_dominance(&self, other: &Self) -> bool {
        assert_eq!(self.len(), other.len(), "partitions must have equal length");
        let mut sum_self = 0u64;
        let mut sum_other = 0u64;
        for (a, b) in self.0.iter().zip(&other.0) {
            sum_self += a;
            sum_other += b;
            if sum_self > sum_other {
                return false;
            }
        }
        true
    }

    /// Adds a signed displacement; `None` when the result leaves the partition
    /// cone (a negative part or a strict increase somewhere).
    pub fn try_add(&self, delta: &[i64]) -> Option<Self> {
        assert_eq!(delta.len(), self.len(), "displacement length must match");
        let mut parts = Vec::with_capacity(self.len());
        for (&p, &d) in self.0.iter().zip(delta) {
            let v = (p as i64) + d;
            if v < 0 {
                return None;
            }
            parts.push(v as u64);
        }
        if parts.windows(2).all(|w| w[0] >= w[1]) {
            Some(Self(parts))
        } else {
            None
        }
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order: by weight, then lexicographically. This total
/// order refines dominance, so iterating a `BTreeMap<Partition, _>` visits
/// dominance-lower partitions first.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All length-`len` partitions of weight at most `max_weight`, ascending in
/// the graded lexicographic order.
pub fn partitions_with_weight_at_most(len: usize, max_weight: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Partition>, parts: &mut Vec<u64>, len: usize, cap: u64, budget: u64) {
        if parts.len() == len {
            out.push(Partition::new(parts.clone()));
            return;
        }
        for next in 0..=cap.min(budget) {
            parts.push(next);
            rec(out, parts, len, next, budget - next);
            parts.pop();
        }
    }
    rec(&mut out, &mut parts, len, max_weight, max_weight);
    out.sort();
    out
}

/// All partitions dominated by `lambda` (inclusive), ascending in the graded
/// lexicographic order. This is the natural basis for the triangular action
/// of the difference operators.
pub fn partitions_below(lambda: &Partition) -> Vec<Partition> {
    partitions_with_weight_at_most(lambda.len(), lambda.weight())
        .into_iter()
        .filter(|mu| mu.leq_dominance(lambda))
        .collect()
}

/// Distinct signed permutations of the parts.
pub fn weyl_orbit(lambda: &Partition) -> Vec<Vec<i64>> {
    let n = lambda.len();
    let mut perms: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut current: Vec<u64> = lambda.parts().to_vec();
    // Generate distinct permutations of the multiset via sorted start + next_permutation.
    current.sort_unstable();
    loop {
        perms.insert(current.clone());
        // next_permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        else {
            break;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| current[j] > current[i])
            .expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    let mut orbit: BTreeSet<Vec<i64>> = BTreeSet::new();
    for perm in perms {
        let nonzero: Vec<usize> = (0..n).filter(|&j| perm[j] != 0).collect();
        for mask in 0..(1u32 << nonzero.len()) {
            let mut signed: Vec<i64> = perm.iter().map(|&p| p as i64).collect();
            for (bit, &j) in nonzero.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    signed[j] = -signed[j];
                }
            }
            orbit.insert(signed);
        }
    }
    orbit.into_iter().collect()
}

/// `base^exp` for any field-like scalar, with negative exponents via division.
pub fn pow_signed<S: Clone + Num>(base: &S, exp: i64) -> S {
    let mut acc = S::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * base.clone();
    }
    if exp < 0 {
        S::one() / acc
    } else {
        acc
    }
}

/// Evaluates the monomial symmetric function of `lambda` at the point `z`:
/// the sum of `prod_j z_j^(nu_j)` over the signed-permutation orbit.
pub fn eval_monomial<S: Clone + Num>(lambda: &Partition, z: &[S]) -> S {
    assert_eq!(
        z.len(),
        lambda.len(),
        "point dimension must match partition length"
    );
    let mut total = S::zero();
    for nu in weyl_orbit(lambda) {
        let mut term = S::one();
        for (zj, &e) in z.iter().zip(&nu) {
            term = term * pow_signed(zj, e);
        }
        total = total + term;
    }
    total
}

/// A symmetric function stored by its coefficients in the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPolynomial {
    coeffs: BTreeMap<Partition, Rat>,
}

impl SymmetricPolynomial {
    pub fn new() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Partition, Rat)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (p, c) in pairs {
            if !c.is_zero() {
                coeffs.insert(p, c);
            }
        }
        Self { coeffs }
    }

    /// Coefficient of the monomial symmetric function of `mu` (zero if absent).
    pub fn coeff(&self, mu: &Partition) -> Rat {
        self.coeffs.get(mu).cloned().unwrap_or_else(Rat::zero)
    }

    /// Support and coefficients in ascending graded lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `delta` to one coefficient, dropping it if it cancels to zero.
    pub fn add_assign_coeff(&mut self, mu: &Partition, delta: &Rat) {
        let entry = self.coeffs.entry(mu.clone()).or_insert_with(Rat::zero);
        *entry += delta;
        if entry.is_zero() {
            self.coeffs.remove(mu);
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, z: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (mu, c) in &self.coeffs {
            total += c * eval_monomial(mu, z);
        }
        total
    }

    /// Numeric evaluation at a complex point (coefficients rounded to f64).
    pub fn eval_c64(&self, z: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (mu, c) in &self.coeffs {
            total += crate::scalar::rat_to_f64(c) * eval_monomial(mu, z);
        }
        total
    }
}

impl Default for SymmetricPolynomial {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn part(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    #[should_panic(expected = "weakly decreasing")]
    fn rejects_increasing_parts() {
        Partition::new(vec![1, 2]);
    }

    #[test]
    fn graded_lex_order() {
        let mut ps = vec![part(&[2, 0]), part(&[0, 0]), part(&[1, 1]), part(&[1, 0])];
        ps.sort();
        assert_eq!(
            ps,
            vec![part(&[0, 0]), part(&[1, 0]), part(&[1, 1]), part(&[2, 0])]
        );
    }

    #[test]
    fn dominance_examples() {
        assert!(part(&[1, 1]).leq_dominance(&part(&[2, 0])));
        assert!(!part(&[2, 0]).leq_dominance(&part(&[1, 1])));
        assert!(part(&[1, 0]).leq_dominance(&part(&[2, 0])));
        // incomparable pair: partial sums 3,3,3 vs 2,4,4
        assert!(!part(&[3, 0, 0]).leq_dominance(&part(&[2, 2, 0])));
        assert!(!part(&[2, 2, 0]).leq_dominance(&part(&[3, 0, 0])));
        assert!(part(&[0, 0]).leq_dominance(&part(&[0, 0])));
    }

    #[test]
    fn partitions_below_examples() {
        let below = partitions_below(&part(&[2, 0]));
        assert_eq!(
            below,
            vec![part(&[0, 0]), part(&[1, 0]), part(&[1, 1]), part(&[2, 0])]
        );
        assert_eq!(partitions_below(&part(&[0, 0, 0])), vec![part(&[0, 0, 0])]);
    }

    #[test]
    fn weight_bounded_enumeration() {
        let all = partitions_with_weight_at_most(2, 2);
        assert_eq!(
            all,
            vec![part(&[0, 0]), part(&[1, 0]), part(&[1, 1]), part(&[2, 0])]
        );
        assert_eq!(partitions_with_weight_at_most(3, 0), vec![part(&[0, 0, 0])]);
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(weyl_orbit(&part(&[0, 0])).len(), 1);
        assert_eq!(weyl_orbit(&part(&[1, 0])).len(), 4);
        assert_eq!(weyl_orbit(&part(&[1, 1])).len(), 4);
        assert_eq!(weyl_orbit(&part(&[2, 1])).len(), 8);
        assert_eq!(weyl_orbit(&part(&[2, 2])).len(), 4);
        assert_eq!(weyl_orbit(&part(&[1, 1, 0])).len(), 12);
    }

    #[test]
    fn monomial_known_values() {
        // z^1 + z^-1 at z = 1/4
        assert_eq!(eval_monomial(&part(&[1]), &[rat(1, 4)]), rat(17, 4));
        // sum over (+-1, 0) and (0, +-1) at (1/2, 1/3)
        assert_eq!(
            eval_monomial(&part(&[1, 0]), &[rat(1, 2), rat(1, 3)]),
            rat(35, 6)
        );
        assert_eq!(
            eval_monomial(&part(&[0, 0]), &[rat(1, 2), rat(1, 3)]),
            rat_int(1)
        );
    }

    #[test]
    fn polynomial_eval_and_mutation() {
        let mut f = SymmetricPolynomial::from_pairs([
            (part(&[1, 0]), rat_int(2)),
            (part(&[0, 0]), rat(1, 3)),
        ]);
        let z = [rat(1, 2), rat(1, 3)];
        assert_eq!(f.eval(&z), rat_int(2) * rat(35, 6) + rat(1, 3));
        f.add_assign_coeff(&part(&[0, 0]), &rat(-1, 3));
        assert_eq!(f.coeff(&part(&[0, 0])), rat_int(0));
        assert_eq!(f.iter().count(), 1);
    }

    #[test]
    fn complex_eval_matches_exact() {
        use num_complex::Complex64;
        let f = SymmetricPolynomial::from_pairs([
            (part(&[2, 0]), rat(3, 7)),
            (part(&[1, 1]), rat_int(1)),
        ]);
        let z = [rat(1, 2), rat(2, 5)];
        let zc: Vec<Complex64> = z
            .iter()
            .map(|v| Complex64::new(crate::scalar::rat_to_f64(v), 0.0))
            .collect();
        let exact = crate::scalar::rat_to_f64(&f.eval(&z));
        let approx = f.eval_c64(&zc);
        assert!((approx.re - exact).abs() < 1e-12);
        assert!(approx.im.abs() < 1e-15);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_partition(len: usize, max_part: u64) -> impl Strategy<Value = Partition> {
            proptest::collection::vec(0..=max_part, len).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                Partition::new(v)
            })
        }

        proptest! {
            #[test]
            fn graded_lex_refines_dominance(
                a in arb_partition(3, 4),
                b in arb_partition(3, 4),
            ) {
                if a.leq_dominance(&b) {
                    prop_assert!(a <= b);
                }
            }

            #[test]
            fn orbit_size_divides_group_order(lam in arb_partition(3, 3)) {
                let group_order = 48u64; // 2^3 * 3!
                let orbit = weyl_orbit(&lam).len() as u64;
                prop_assert_eq!(group_order % orbit, 0);
            }

            #[test]
            fn monomial_invariance(lam in arb_partition(2, 3)) {
                let z = [rat(2, 3), rat(1, 5)];
                let swapped = [rat(1, 5), rat(2, 3)];
                let inverted = [rat(3, 2), rat(1, 5)];
                let v = eval_monomial(&lam, &z);
                prop_assert_eq!(&v, &eval_monomial(&lam, &swapped));
                prop_assert_eq!(&v, &eval_monomial(&lam, &inverted));
            }
        }
    }
}
