mod common;

use common::*;
use tclgen_core::bath::{pauli_x, pauli_z, BathSpec, ExactBath, GaussianBath};
use tclgen_core::linalg::{self, c, unvectorize, vectorize, CMat};
use tclgen_core::numerics::{Evaluator, GeneratorPath, ModelSpec, QuadratureConfig, TimeGrid};
use tclgen_core::terms::{ClusteredTerm, Clustering, Kind, SignPattern};

fn quad(t: f64, m: usize, n: usize) -> QuadratureConfig {
    QuadratureConfig::new(TimeGrid::new(t, m).unwrap(), n).unwrap()
}

fn term(signs: &str, parts: &[usize], coeff: i64, pinned: bool, kind: Kind) -> ClusteredTerm {
    ClusteredTerm::new(
        SignPattern::parse(signs).unwrap(),
        Clustering::new(parts.to_vec()).unwrap(),
        coeff,
        pinned,
        kind,
    )
    .unwrap()
}

#[test]
fn first_order_vanishes_for_zero_mean_bath() {
    let bath = BathSpec::Exact(ExactBath::boson_mode(1.0, Some(1.0), 5).unwrap());
    let model = ModelSpec::new(pauli_x(), pauli_z(), 0.3, bath).unwrap();
    let ev = Evaluator::new(&model, &quad(2.0, 20, 2), Kind::Schrodinger).unwrap();
    let v = ev
        .evaluate_term(&term("-", &[1], 1, true, Kind::Schrodinger), 10)
        .unwrap();
    assert!(linalg::max_abs(&v) < 1e-15);
    assert!(
        linalg::max_abs(
            &ev.assemble_generator(1, 10, GeneratorPath::MatrixRecursion)
                .unwrap()
        ) < 1e-15
    );
}

#[test]
fn disconnected_term_factorizes() {
    let mut r = rng(1);
    let model = random_qubit_model(&mut r, false);
    let ev = Evaluator::new(&model, &quad(1.5, 30, 3), Kind::Schrodinger).unwrap();
    for i in [0, 7, 30] {
        let two = ev
            .evaluate_term(&term("--", &[1, 1], -1, true, Kind::Schrodinger), i)
            .unwrap();
        let left = ev
            .evaluate_term(&term("-", &[1], 1, true, Kind::Schrodinger), i)
            .unwrap();
        let right = ev
            .evaluate_term(&term("-", &[1], 1, false, Kind::Schrodinger), i)
            .unwrap();
        let oracle = -(left * right);
        assert!((&two - &oracle).norm() <= 1e-13 * (1.0 + oracle.norm()));
    }
}

#[test]
fn zero_coupling_gives_zero_momenta() {
    let mut r = rng(2);
    let model = random_qubit_model(&mut r, false).with_coupling(0.0);
    let ev = Evaluator::new(&model, &quad(1.0, 12, 3), Kind::Schrodinger).unwrap();
    for n in 1..=3 {
        assert!(linalg::max_abs(&ev.evaluate_mu(n, 12).unwrap()) == 0.0);
    }
}

#[test]
fn derivative_of_mu_matches_mu_dot() {
    let mut r = rng(3);
    let model = random_qubit_model(&mut r, false);
    // central differences with step 2h, against mu_dot on the same grid
    let mut errs = Vec::new();
    for m in [40, 80] {
        let ev = Evaluator::new(&model, &quad(1.0, m, 2), Kind::Schrodinger).unwrap();
        let h = 1.0 / m as f64;
        let i = m / 2;
        let fd = (ev.evaluate_mu(2, i + 1).unwrap() - ev.evaluate_mu(2, i - 1).unwrap())
            / c(2.0 * h, 0.0);
        errs.push((fd - ev.evaluate_mu_dot(2, i).unwrap()).norm());
    }
    assert!(errs[1] < 1e-2, "{errs:?}");
    let ratio = errs[0] / errs[1];
    assert!(ratio > 3.0, "{errs:?}");
}

#[test]
fn second_order_self_convergence() {
    let bath = BathSpec::Exact(ExactBath::boson_mode(1.0, None, 4).unwrap());
    let model = ModelSpec::new(pauli_x() * c(0.4, 0.0), pauli_z(), 0.5, bath).unwrap();
    let t = term("--", &[2], 1, false, Kind::Schrodinger);
    let vals: Vec<CMat> = [50, 100, 200]
        .iter()
        .map(|&m| {
            Evaluator::new(&model, &quad(2.0, m, 2), Kind::Schrodinger)
                .unwrap()
                .evaluate_term(&t, m)
                .unwrap()
        })
        .collect();
    let e1 = (&vals[0] - &vals[1]).norm();
    let e2 = (&vals[1] - &vals[2]).norm();
    assert!((e1 / e2 - 4.0).abs() < 0.6, "ratio {}", e1 / e2);
}

#[test]
fn paths_agree_at_third_order() {
    let mut r = rng(4);
    for _ in 0..2 {
        let model = random_qubit_model(&mut r, false);
        let ev = Evaluator::new(&model, &quad(1.0, 40, 3), Kind::Schrodinger).unwrap();
        for i in [1, 17, 40] {
            let a = ev
                .generator_orders(3, i, GeneratorPath::TermExpansion)
                .unwrap();
            let b = ev
                .generator_orders(3, i, GeneratorPath::MatrixRecursion)
                .unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!(rel_diff(x, y) < 1e-12, "{}", rel_diff(x, y));
            }
        }
    }
}

#[test]
fn adjoint_paths_agree() {
    let mut r = rng(5);
    let model = random_qubit_model(&mut r, true);
    let ev = Evaluator::new(&model, &quad(1.0, 30, 3), Kind::Adjoint).unwrap();
    for i in [3, 30] {
        let a = ev
            .assemble_generator(3, i, GeneratorPath::TermExpansion)
            .unwrap();
        let b = ev
            .assemble_generator(3, i, GeneratorPath::MatrixRecursion)
            .unwrap();
        assert!(rel_diff(&a, &b) < 1e-12);
    }
}

#[test]
fn vankampen_third_order_matches_recursion() {
    let mut r = rng(6);
    let model = random_qubit_model(&mut r, false);
    let ev = Evaluator::new(&model, &quad(1.2, 30, 3), Kind::Schrodinger).unwrap();
    for n in 1..=3 {
        for i in [0, 5, 30] {
            let vk = ev.evaluate_vankampen(n, i).unwrap();
            let rec = ev
                .generator_order(n, i, GeneratorPath::MatrixRecursion)
                .unwrap();
            assert!(
                (&vk - &rec).norm() <= 1e-12 * (1.0 + rec.norm()),
                "n = {n}, i = {i}"
            );
        }
    }
}

#[test]
fn trace_and_hermiticity_preserved() {
    let mut r = rng(7);
    let model = random_qubit_model(&mut r, false);
    let ev = Evaluator::new(&model, &quad(1.0, 24, 3), Kind::Schrodinger).unwrap();
    let rho = random_density(&mut r, 2);
    for i in [4, 24] {
        for (k, l) in ev
            .generator_orders(3, i, GeneratorPath::MatrixRecursion)
            .unwrap()
            .iter()
            .enumerate()
        {
            let out = unvectorize(&(l * c(0.0, -1.0).powi(k as i32 + 1) * vectorize(&rho)), 2);
            assert!(out.trace().norm() <= 1e-12 * (1.0 + linalg::trace_norm(&out)));
            assert!(linalg::hermiticity_residual(&out) < 1e-12);
        }
    }
}

#[test]
fn coupling_scaling_is_exact() {
    let mut r = rng(8);
    let model = random_qubit_model(&mut r, false);
    let q = quad(1.0, 16, 3);
    let base = Evaluator::new(&model.with_coupling(1.0), &q, Kind::Schrodinger).unwrap();
    let scaled = Evaluator::new(&model.with_coupling(0.3), &q, Kind::Schrodinger).unwrap();
    let a = base
        .generator_orders(3, 16, GeneratorPath::MatrixRecursion)
        .unwrap();
    let b = scaled
        .generator_orders(3, 16, GeneratorPath::MatrixRecursion)
        .unwrap();
    for (n, (x, y)) in a.iter().zip(&b).enumerate() {
        let expected = x * c(0.3f64.powi(n as i32 + 1), 0.0);
        assert!(rel_diff(&expected, y) < 1e-13);
    }
}

#[test]
fn dephasing_generator_keeps_populations() {
    let bath = BathSpec::Gaussian(GaussianBath::single_mode_thermal(1.0, Some(2.0)).unwrap());
    let model = ModelSpec::new(pauli_z() * c(0.5, 0.0), pauli_z(), 0.2, bath).unwrap();
    let ev = Evaluator::new(&model, &quad(3.0, 30, 2), Kind::Schrodinger).unwrap();
    let l = ev
        .assemble_generator(2, 30, GeneratorPath::MatrixRecursion)
        .unwrap();
    // vec index 0 = (0,0), 3 = (1,1): population rows must vanish
    for col in 0..4 {
        assert!(l[(0, col)].norm() < 1e-15 && l[(3, col)].norm() < 1e-15);
    }
    assert!(l[(1, 1)].re < 0.0);
}

#[test]
fn term_order_and_kind_checked() {
    let mut r = rng(9);
    let model = random_qubit_model(&mut r, true);
    let ev = Evaluator::new(&model, &quad(1.0, 10, 2), Kind::Schrodinger).unwrap();
    assert!(ev
        .evaluate_term(&term("---", &[3], 1, true, Kind::Schrodinger), 3)
        .is_err());
    assert!(ev
        .evaluate_term(&term("-", &[1], 1, true, Kind::Adjoint), 3)
        .is_err());
    assert!(ev.evaluate_mu(1, 11).is_err());
    assert!(ev.evaluate_vankampen(5, 3).is_err());
}

#[test]
fn adjoint_momenta_are_hilbert_schmidt_adjoints() {
    let mut r = rng(10);
    let model = random_qubit_model(&mut r, true);
    let q = quad(1.0, 20, 3);
    let s = Evaluator::new(&model, &q, Kind::Schrodinger).unwrap();
    let a = Evaluator::new(&model, &q, Kind::Adjoint).unwrap();
    for n in 1..=3 {
        for i in [2, 20] {
            let mu = s.evaluate_mu(n, i).unwrap();
            let mu_adj = a.evaluate_mu(n, i).unwrap();
            assert!(rel_diff(&mu.adjoint(), &mu_adj) < 1e-13, "n = {n}");
        }
    }
}
