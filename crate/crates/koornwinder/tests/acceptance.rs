//! Acceptance checks for the whole verification stack. Each test covers one
//! numbered criterion and prints a single PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`). Tolerances for the
//! numeric criteria are pinned here and nowhere else.

use koornwinder::diffops::{
    apply_operator, eigenvalue, eigenvalue_at_point, eigenvalue_at_zero, operator_matrix_on_basis,
    PointSampler,
};
use koornwinder::params::ParameterSet;
use koornwinder::polys::{
    check_diffeq_at, norm_ratio_closed, norm_ratio_via_recurrence, recurrence_terms, verify_diffeq,
    verify_duality, verify_recurrence, PolynomialFamily,
};
use koornwinder::quadrature::{gram_schmidt_oracle, monic_norm_formula, QuadratureContext};
use koornwinder::scalar::{rat, rat_to_f64, Rat};
use koornwinder::symfunc::{partitions_with_weight_at_most, Partition};

const FAMILY_SEED: u64 = 0x5eed_0001;

fn finish(num: u32, description: &str, ok: bool) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {num:02}: {verdict} - {description}");
    assert!(ok, "criterion {num:02} failed: {description}");
}

#[test]
fn criterion_01_difference_equations() {
    let params = ParameterSet::standard_example(2);
    let family = PolynomialFamily::new(params, FAMILY_SEED);
    let mut ok = true;
    for lambda in partitions_with_weight_at_most(2, 4) {
        for r in 1..=2 {
            let witnesses = verify_diffeq(&family, &lambda, r, 3, 0xac01).unwrap();
            ok &= witnesses.iter().all(|w| w.pass());
        }
    }
    finish(
        1,
        "difference equations hold exactly (n = 2, weight <= 4, r = 1, 2, 3 points each)",
        ok,
    );
}

#[test]
fn criterion_02_commutativity() {
    let params2 = ParameterSet::standard_example(2);
    let basis2 = partitions_with_weight_at_most(2, 4);
    let m1 = operator_matrix_on_basis(&params2, 1, &basis2, 0xac02).unwrap();
    let m2 = operator_matrix_on_basis(&params2, 2, &basis2, 0xac02).unwrap();
    let mut ok = m1.commutes_with(&m2);

    let params3 = ParameterSet::standard_example(3);
    let basis3 = partitions_with_weight_at_most(3, 2);
    let mats: Vec<_> = (1..=3)
        .map(|r| operator_matrix_on_basis(&params3, r, &basis3, 0xac02).unwrap())
        .collect();
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            ok &= mats[i].commutes_with(&mats[j]);
        }
    }
    finish(
        2,
        "operator matrices commute exactly (n = 2 weight <= 4; n = 3 weight <= 2)",
        ok,
    );
}

#[test]
fn criterion_03_triangularity_and_spectrum() {
    let mut ok = true;
    for (n, max_weight) in [(2usize, 4u64), (3, 2)] {
        let params = ParameterSet::standard_example(n);
        let basis = partitions_with_weight_at_most(n, max_weight);
        for r in 1..=n {
            let m = operator_matrix_on_basis(&params, r, &basis, 0xac03).unwrap();
            ok &= m.is_triangular();
            for (i, mu) in m.basis.iter().enumerate() {
                ok &= m.entries[i][i] == eigenvalue(&params, r, mu);
            }
        }
    }
    finish(
        3,
        "matrices are dominance triangular with the predicted spectrum on the diagonal",
        ok,
    );
}

#[test]
fn criterion_04_action_on_constants() {
    let mut ok = true;
    let one = |_: &[Rat]| rat(1, 1);
    for n in 1..=3usize {
        let params = ParameterSet::standard_example(n);
        let mut sampler = PointSampler::new(&params, 0xac04);
        for _ in 0..2 {
            let z = sampler.next_point().unwrap();
            for r in 1..=n {
                ok &= apply_operator(&params, r, &one, &z) == eigenvalue_at_zero(&params, r);
            }
        }
        ok &= eigenvalue_at_zero(&params, 1) == rat(0, 1);
    }
    finish(
        4,
        "operators act on constants by the zero-partition eigenvalue, which vanishes (n <= 3)",
        ok,
    );
}

#[test]
fn criterion_05_duality_self_dual() {
    let params = ParameterSet::self_dual_example(2);
    assert!(params.is_self_dual());
    let family = PolynomialFamily::new(params.clone(), FAMILY_SEED);
    let mut ok = true;
    let parts = partitions_with_weight_at_most(2, 3);
    for lambda in &parts {
        for mu in &parts {
            ok &= verify_duality(&family, &family, lambda, mu).unwrap().pass();
        }
        let base = family
            .normalized_eval(lambda, &params.spectral_zeros())
            .unwrap();
        ok &= base == rat(1, 1);
    }
    finish(
        5,
        "self-dual duality holds exactly and normalized polynomials are 1 at the base point",
        ok,
    );
}

#[test]
fn criterion_06_duality_general_regime() {
    let params = ParameterSet::standard_example(2);
    let dual = params.dual().unwrap();
    assert!(!params.is_self_dual());
    assert!(dual.nonstandard_range);
    let family = PolynomialFamily::new(params, FAMILY_SEED);
    let dual_family = PolynomialFamily::new(dual, FAMILY_SEED);
    let parts = partitions_with_weight_at_most(2, 2);
    let mut mismatches = 0usize;
    let mut total = 0usize;
    for lambda in &parts {
        for mu in &parts {
            total += 1;
            if !verify_duality(&family, &dual_family, lambda, mu)
                .unwrap()
                .pass()
            {
                mismatches += 1;
            }
        }
    }
    // This regime sits outside the self-dual hypothesis of the exact
    // development, so mismatches are reported rather than fatal.
    let line =
        format!("general-regime duality reported: {mismatches}/{total} mismatches (warning only)");
    finish(6, &line, true);
}

#[test]
fn criterion_07_recurrences() {
    let params = ParameterSet::standard_example(2);
    let family = PolynomialFamily::new(params.clone(), FAMILY_SEED);
    let mut ok = true;
    for lambda in partitions_with_weight_at_most(2, 3) {
        for r in 1..=2 {
            let witnesses = verify_recurrence(&family, &lambda, r, 3, 0xac07).unwrap();
            ok &= witnesses.iter().all(|w| w.pass());
        }
    }
    // Out-of-cone moves from the zero partition exist and must carry a zero
    // coefficient.
    let zero = Partition::zero(2);
    for r in 1..=2 {
        let data = recurrence_terms(&params, r, &zero).unwrap();
        ok &= !data.boundary.is_empty() && data.boundary_vanishes();
    }
    finish(
        7,
        "recurrences hold exactly with vanishing out-of-cone coefficients (n = 2, weight <= 3)",
        ok,
    );
}

#[test]
fn criterion_08_norm_ratio_closed_equals_chain() {
    let mut ok = true;
    for n in 1..=2usize {
        let params = ParameterSet::standard_example(n);
        for lambda in partitions_with_weight_at_most(n, 4) {
            let closed = norm_ratio_closed(&params, &lambda).unwrap();
            let chain = norm_ratio_via_recurrence(&params, &lambda).unwrap();
            ok &= closed == chain;
        }
    }
    finish(
        8,
        "closed norm ratios equal the recurrence chain products exactly (n <= 2, weight <= 4)",
        ok,
    );
}

#[test]
fn criterion_09_numeric_norms() {
    let mut ok = true;

    let params1 = ParameterSet::standard_example(1);
    let family1 = PolynomialFamily::new(params1.clone(), FAMILY_SEED);
    let ctx1 = QuadratureContext::new(&params1, 256, Some(64));
    let mass1 = ctx1.constant_inner();
    let formula_mass1 = monic_norm_formula(&params1, &Partition::zero(1), 64).unwrap();
    ok &= (mass1 - formula_mass1).abs() <= 1e-6 * formula_mass1.abs();
    for lambda in partitions_with_weight_at_most(1, 4) {
        let p = family1.polynomial(&lambda).unwrap();
        let quad = ctx1.inner(&p, &p);
        let formula = monic_norm_formula(&params1, &lambda, 64).unwrap();
        ok &= (quad - formula).abs() <= 1e-8 * formula.abs();
    }

    let params2 = ParameterSet::standard_example(2);
    let family2 = PolynomialFamily::new(params2.clone(), FAMILY_SEED);
    let ctx2 = QuadratureContext::new(&params2, 128, None);
    let mass2 = ctx2.constant_inner();
    let formula_mass2 = monic_norm_formula(&params2, &Partition::zero(2), ctx2.trunc).unwrap();
    ok &= (mass2 - formula_mass2).abs() <= 1e-6 * formula_mass2.abs();
    for lambda in partitions_with_weight_at_most(2, 2) {
        let p = family2.polynomial(&lambda).unwrap();
        let quad = ctx2.inner(&p, &p);
        let formula = monic_norm_formula(&params2, &lambda, ctx2.trunc).unwrap();
        ok &= (quad - formula).abs() <= 1e-5 * formula.abs();
    }
    finish(
        9,
        "quadrature norms match the closed formula (n = 1 to 1e-8, n = 2 to 1e-5, mass to 1e-6)",
        ok,
    );
}

#[test]
fn criterion_10_gram_schmidt_oracle() {
    let mut ok = true;
    for (n, m_per_dim) in [(1usize, 256usize), (2, 128)] {
        let params = ParameterSet::standard_example(n);
        let family = PolynomialFamily::new(params.clone(), FAMILY_SEED);
        let ctx = QuadratureContext::new(&params, m_per_dim, Some(64));
        for lambda in partitions_with_weight_at_most(n, 2) {
            if lambda.weight() == 0 {
                continue;
            }
            let exact = family.polynomial(&lambda).unwrap();
            let oracle = gram_schmidt_oracle(&ctx, &lambda);
            ok &= oracle.condition.is_finite();
            for (mu, approx) in &oracle.coeffs {
                ok &= (approx - rat_to_f64(&exact.coeff(mu))).abs() <= 1e-7;
            }
        }
    }
    finish(
        10,
        "orthogonalizing against the measure recovers the exact coefficients to 1e-7",
        ok,
    );
}

#[test]
fn criterion_11_orthogonality() {
    let params = ParameterSet::standard_example(2);
    let family = PolynomialFamily::new(params.clone(), FAMILY_SEED);
    let ctx = QuadratureContext::new(&params, 128, None);
    let parts = partitions_with_weight_at_most(2, 2);
    let values: Vec<Vec<f64>> = parts
        .iter()
        .map(|p| ctx.values_of(&family.polynomial(p).unwrap()))
        .collect();
    let norms: Vec<f64> = values.iter().map(|v| ctx.inner_values(v, v)).collect();
    let mut ok = norms.iter().all(|x| *x > 0.0);
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let cross = ctx.inner_values(&values[i], &values[j]);
            ok &= cross.abs() <= 1e-8 * (norms[i] * norms[j]).sqrt();
        }
    }
    finish(
        11,
        "distinct polynomials are numerically orthogonal to 1e-8 (n = 2, weight <= 2)",
        ok,
    );
}

#[test]
fn criterion_12_mutation_sensitivity() {
    let params = ParameterSet::standard_example(2);
    let family = PolynomialFamily::new(params.clone(), FAMILY_SEED);
    let lambda = Partition::new(vec![1, 1]);
    let mut tampered = family.polynomial(&lambda).unwrap();
    tampered.add_assign_coeff(&Partition::zero(2), &rat(1, 1000));

    // The tampered polynomial must break the difference equation...
    let mut sampler = PointSampler::new(&params, 0xac0c);
    let z = sampler.next_point().unwrap();
    let eigen = eigenvalue(&params, 1, &lambda);
    let (lhs, rhs) = check_diffeq_at(&params, 1, &tampered, &eigen, &z);
    let diffeq_detected = lhs != rhs;

    // ...the recurrence relation...
    let dual = params.dual().unwrap();
    let c = family.normalization(&lambda).unwrap();
    let data = recurrence_terms(&params, 1, &lambda).unwrap();
    let lhs = eigenvalue_at_point(&dual, 1, &z) * tampered.eval(&z) / &c;
    let mut rhs = rat(0, 1);
    for (target, coef) in &data.terms {
        rhs += coef * family.normalized_eval(target, &z).unwrap();
    }
    let recurrence_detected = lhs != rhs;

    // ...and numeric orthogonality against the constant polynomial.
    let ctx = QuadratureContext::new(&params, 128, None);
    let one = family.polynomial(&Partition::zero(2)).unwrap();
    let v_one = ctx.values_of(&one);
    let v_tampered = ctx.values_of(&tampered);
    let n_one = ctx.inner_values(&v_one, &v_one);
    let n_tampered = ctx.inner_values(&v_tampered, &v_tampered);
    let cross = ctx.inner_values(&v_tampered, &v_one);
    let orthogonality_detected = cross.abs() > 1e-8 * (n_one * n_tampered).sqrt();

    finish(
        12,
        "a 1/1000 coefficient perturbation trips the equation, recurrence, and orthogonality checks",
        diffeq_detected && recurrence_detected && orthogonality_detected,
    );
}
