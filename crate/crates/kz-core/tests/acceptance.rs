//! End-to-end acceptance suite: one test per certification criterion, each
//! printing a single `criterion N (...): PASS/FAIL` line (visible with
//! `--nocapture`) and enforcing both its numeric tolerance and its runtime
//! budget. Tolerances are pinned here, in code, on purpose.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kz_core::connect::{
    check_connection1, check_decomposition, check_five_term, check_ghpr, check_gif,
    check_landen_2d, connection_constant, landen_defects,
};
use kz_core::m05::alg::{
    dim_degree, normal_form_word_with, pentagon_check, pick_leftmost, pick_rightmost,
};
use kz_core::m05::bar::{cic_kernel, hpr_phi};
use kz_core::mzv::{check_duality, zeta_comp, zeta_em_cached, zeta_holder, ZetaRoute};
use kz_core::ncalg::TruncatedSeries;
use kz_core::polylog::EvalConfig;
use kz_core::shuffle::{
    assemble_xi0, is_admissible, reg0, reg10, word_to_composition, words_of_weight,
    xi0_components, ShufflePoly, Word, Xi01,
};
use kz_core::transport::{
    hat_series, integrate_between, seed_series, transport, TransportSpec,
};

/// Print the canonical result line and enforce tolerance + runtime budget.
fn finish(n: u32, name: &str, max_residual: f64, tol: f64, started: Instant, budget_s: f64) {
    let ok = max_residual.is_finite() && max_residual <= tol;
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion {n} ({name}): {} max_residual={max_residual:.3e} tol={tol:.1e} elapsed={elapsed:.2}s budget={budget_s}s",
        if ok { "PASS" } else { "FAIL" },
    );
    assert!(
        ok,
        "criterion {n} ({name}): max_residual={max_residual:e} exceeds tol={tol:e}"
    );
    assert!(
        elapsed < budget_s,
        "criterion {n} ({name}): runtime {elapsed:.2}s exceeds budget {budget_s}s"
    );
}

fn random_word(rng: &mut ChaCha8Rng, max_weight: usize) -> Word<Xi01> {
    let len = rng.gen_range(0..=max_weight);
    (0..len)
        .map(|_| *[Xi01::Xi0, Xi01::Xi1].choose(rng).unwrap())
        .collect()
}

#[test]
fn criterion_01_regularization() {
    let started = Instant::now();
    let mut mismatches = 0usize;

    // Exact round-trip of the trailing-letter decomposition for every word
    // of weight ≤ 6.
    for s in 0..=6usize {
        for w in words_of_weight(s) {
            let p = ShufflePoly::word(w);
            if assemble_xi0(&xi0_components(&p)) != p {
                mismatches += 1;
            }
        }
    }

    // Both regularization maps are shuffle homomorphisms: 200 random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(0x2026_0401);
    for _ in 0..200 {
        let u = ShufflePoly::word(random_word(&mut rng, 4));
        let v = ShufflePoly::word(random_word(&mut rng, 4));
        let prod = u.shuffle(&v);
        if reg0(&prod) != reg0(&u).shuffle(&reg0(&v)) {
            mismatches += 1;
        }
        if reg10(&prod) != reg10(&u).shuffle(&reg10(&v)) {
            mismatches += 1;
        }
    }

    finish(1, "regularization", mismatches as f64, 0.0, started, 5.0);
}

#[test]
fn criterion_02_mzv_engine() {
    let started = Instant::now();
    let cfg = EvalConfig::default();
    let pi = std::f64::consts::PI;
    let mut worst = 0.0f64;

    // Classical values by both routes.
    for route in [ZetaRoute::Holder, ZetaRoute::DirectSummation] {
        let z2 = zeta_comp(&[2], route, &cfg).unwrap();
        let z4 = zeta_comp(&[4], route, &cfg).unwrap();
        worst = worst.max((z2 - pi * pi / 6.0).abs() / 1e-11);
        worst = worst.max((z4 - pi.powi(4) / 90.0).abs() / 1e-11);
    }

    // ζ(3) = ζ(2,1) with the two sides on independent routes.
    let z3 = zeta_em_cached(&[3]);
    let z21 = zeta_comp(&[2, 1], ZetaRoute::Holder, &cfg).unwrap();
    worst = worst.max((z3 - z21).abs() / 1e-12);

    // Hölder convolution vs direct summation on every admissible word of
    // weight ≤ 5.
    for s in 2..=5usize {
        for w in words_of_weight(s) {
            if !is_admissible(&w) {
                continue;
            }
            let comp = word_to_composition(&w).unwrap();
            let a = zeta_holder(&w, &cfg).unwrap();
            let b = zeta_em_cached(&comp);
            worst = worst.max((a - b).abs() / 1e-11);
        }
    }

    // `worst` is the largest residual in units of its own tolerance.
    finish(2, "mzv engine", worst, 1.0, started, 30.0);
}

#[test]
fn criterion_03_duality() {
    let started = Instant::now();
    let rep = check_duality(6, 1e-10);
    finish(3, "duality", rep.max_residual, 1e-10, started, 60.0);
}

#[test]
fn criterion_04_generalized_inversion() {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for z in [0.3, 0.7] {
        let rep = check_gif(z, 5, 1e-10).unwrap();
        worst = worst.max(rep.max_residual);
    }
    finish(4, "generalized inversion", worst, 1e-10, started, 60.0);
}

#[test]
fn criterion_05_connection() {
    let started = Instant::now();
    let points = [0.2, 0.4, 0.6];
    let mut worst = 0.0f64;
    for z in points {
        let rep = check_connection1(z, 4, 1e-9).unwrap();
        worst = worst.max(rep.max_residual / 1e-9);
    }
    // Constancy of the connecting factor across the three points.
    let cfg = EvalConfig::default();
    let constants: Vec<TruncatedSeries<f64>> = points
        .iter()
        .map(|&z| connection_constant(z, 4, &cfg).unwrap())
        .collect();
    for i in 0..constants.len() {
        for j in i + 1..constants.len() {
            worst = worst.max(constants[i].max_diff(&constants[j]) / 5e-10);
        }
    }
    finish(5, "connection relation", worst, 1.0, started, 30.0);
}

#[test]
fn criterion_06_quotient_structure() {
    let started = Instant::now();
    let mut mismatches = 0usize;

    // Graded dimensions of the integrable-word spaces match the quotient
    // algebra's monomial count.
    for (s, expect) in [(1usize, 5usize), (2, 19), (3, 65)] {
        if dim_degree(s) != expect as u64 || cic_kernel(s, false).len() != expect {
            mismatches += 1;
        }
    }

    // Normal-form confluence: leftmost vs rightmost reduction strategies
    // agree on every word of length ≤ 4 over the five letters.
    for len in 0..=4u32 {
        for code in 0..5usize.pow(len) {
            let mut c = code;
            let w: Vec<u8> = (0..len)
                .map(|_| {
                    let l = (c % 5) as u8;
                    c /= 5;
                    l
                })
                .collect();
            let a = normal_form_word_with::<f64>(&w, &pick_leftmost);
            let b = normal_form_word_with::<f64>(&w, &pick_rightmost);
            if a != b {
                mismatches += 1;
            }
        }
    }

    // The defining commutator relations hold exactly in normal form:
    // [X₁₁,X₂₂] = −[X₁₁,X₁₂] = [X₂₂,X₁₂] = [X₂−X₁, X₁₂].
    let bracket = |x: &[(f64, u8)], y: &[(f64, u8)]| {
        let mut acc = std::collections::BTreeMap::<Vec<u8>, f64>::new();
        for &(cx, lx) in x {
            for &(cy, ly) in y {
                for (word, sign) in [(vec![lx, ly], cx * cy), (vec![ly, lx], -cx * cy)] {
                    for (k, v) in normal_form_word_with::<f64>(&word, &pick_leftmost) {
                        let e = acc.entry(k).or_insert(0.0);
                        *e += sign * v;
                    }
                }
            }
        }
        acc.retain(|_, v| *v != 0.0);
        acc
    };
    // Letters: 0 = X₁, 1 = X₁₁, 2 = X₂, 3 = X₂₂, 4 = X₁₂.
    let b_11_22 = bracket(&[(1.0, 1)], &[(1.0, 3)]);
    let b_11_12 = bracket(&[(-1.0, 1)], &[(1.0, 4)]);
    let b_22_12 = bracket(&[(1.0, 3)], &[(1.0, 4)]);
    let b_lin_12 = bracket(&[(1.0, 2), (-1.0, 0)], &[(1.0, 4)]);
    if b_11_22 != b_11_12 || b_11_22 != b_22_12 || b_11_22 != b_lin_12 {
        mismatches += 1;
    }

    finish(6, "quotient structure", mismatches as f64, 0.0, started, 60.0);
}

#[test]
fn criterion_07_pentagon() {
    let started = Instant::now();
    let rep = pentagon_check(4, 1e-8);
    finish(7, "pentagon relation", rep.max_residual, 1e-8, started, 300.0);
}

#[test]
fn criterion_08_decomposition() {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for (z1, z2) in [(0.3, 0.4), (0.5, 0.2)] {
        let rep = check_decomposition(z1, z2, 3, 1e-9).unwrap();
        worst = worst.max(rep.max_residual / 1e-9);
        // The route-agreement residual carries a tighter tolerance.
        worst = worst.max(rep.residuals[0] / 1e-10);
    }
    finish(8, "decomposition theorem", worst, 1.0, started, 120.0);
}

#[test]
fn criterion_09_harmonic_product() {
    let started = Instant::now();
    let phi = hpr_phi();
    let mut worst = 0.0f64;
    for (z1, z2) in [(0.3, 0.4), (0.6, 0.25)] {
        let rep = check_ghpr(&phi, z1, z2, 1e-10).unwrap();
        worst = worst.max(rep.max_residual);
    }
    for e in cic_kernel(2, true) {
        let rep = check_ghpr(&e, 0.3, 0.4, 1e-10).unwrap();
        worst = worst.max(rep.max_residual);
    }
    finish(9, "harmonic product relation", worst, 1e-10, started, 60.0);
}

#[test]
fn criterion_10_landen_five_term() {
    let started = Instant::now();
    let cfg = EvalConfig::default();
    let mut worst = 0.0f64;
    let grid: Vec<f64> = (0..5).map(|i| 0.1 + 0.125 * i as f64).collect();
    for &z1 in &grid {
        for &z2 in &grid {
            let rep = check_landen_2d(z1, z2, 1e-10).unwrap();
            worst = worst.max(rep.max_residual / 1e-10);
            let rep5 = check_five_term(z1, z2, 1e-12);
            worst = worst.max(rep5.max_residual / 1e-12);
        }
    }
    // Degenerate edge: the first identity at z₂ = 0 is the classical Landen
    // transformation.
    for &z in &grid {
        let (d1, d2) = landen_defects(z, 0.0, &cfg).unwrap();
        worst = worst.max(d1.abs() / 1e-12).max(d2.abs() / 1e-12);
    }
    finish(10, "landen and five-term", worst, 1.0, started, 30.0);
}

#[test]
fn criterion_11_transport() {
    let started = Instant::now();
    let cfg = EvalConfig::default();
    let mut worst = 0.0f64;

    // ODE transport matches the direct series at z = 0.5, degree 3.
    let spec = TransportSpec::kze1(0.5, 3);
    let transported = transport(&spec).unwrap();
    let gens = spec.kind.gens();
    let hat = hat_series(&spec.kind, 0.5, 3, &cfg).unwrap();
    let sing = TruncatedSeries::<f64>::generator(&gens, 3, 0)
        .scale(&0.5f64.ln())
        .exp();
    worst = worst.max(transported.max_diff(&hat.mul(&sing)) / 1e-8);

    // Flow composition: integrating in two legs equals one leg.
    let seed = seed_series(&spec.kind, spec.eps, 3, &cfg).unwrap();
    let direct = integrate_between(&spec.kind, &seed, spec.eps, 0.5, 4000).unwrap();
    let half = integrate_between(&spec.kind, &seed, spec.eps, 0.25, 2000).unwrap();
    let two_leg = integrate_between(&spec.kind, &half, 0.25, 0.5, 2000).unwrap();
    worst = worst.max(direct.max_diff(&two_leg) / 1e-10);

    finish(11, "transport oracle", worst, 1.0, started, 30.0);
}
