mod common;

use common::*;
use rand::Rng;
use tclgen_core::bath::*;
use tclgen_core::linalg::c;
use tclgen_core::terms::{Sign, SignPattern};

fn random_signs(r: &mut impl Rng, n: usize) -> SignPattern {
    SignPattern::new(
        (0..n)
            .map(|_| {
                if r.random::<bool>() {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect(),
    )
    .unwrap()
}

fn descending(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|_| r.random_range(0.0..3.0)).collect();
    t.sort_by(|a, b| b.partial_cmp(a).unwrap());
    t
}

fn corr(
    bath: &BathSpec,
    signs: &SignPattern,
    times: &[f64],
    kind: CorrelationKind,
) -> num_complex::Complex64 {
    ordered_correlation(
        bath,
        &CorrelationQuery {
            bath_signs: signs.clone(),
            times: times.to_vec(),
            kind,
        },
    )
    .unwrap()
}

#[test]
fn isserlis_matches_truncated_thermal_mode() {
    let (omega, beta) = (1.0, 1.0);
    let exact = BathSpec::Exact(ExactBath::boson_mode(omega, Some(beta), 40).unwrap());
    let gauss = BathSpec::Gaussian(GaussianBath::single_mode_thermal(omega, Some(beta)).unwrap());
    let mut r = rng(11);
    for n in [2, 4, 6] {
        for _ in 0..6 {
            let signs = random_signs(&mut r, n);
            let mut times = descending(&mut r, n);
            let a = corr(&exact, &signs, &times, CorrelationKind::Standard);
            let b = corr(&gauss, &signs, &times, CorrelationKind::Standard);
            assert!((a - b).norm() < 1e-10, "{n}: {a} vs {b}");
            times.reverse();
            let a = corr(&exact, &signs, &times, CorrelationKind::Adjoint);
            let b = corr(&gauss, &signs, &times, CorrelationKind::Adjoint);
            assert!((a - b).norm() < 1e-10, "{n} adjoint: {a} vs {b}");
        }
    }
}

#[test]
fn plain_moments_match_exact_traces() {
    let exact = ExactBath::boson_mode(1.3, Some(0.7), 40).unwrap();
    let gauss = GaussianBath::single_mode_thermal(1.3, Some(0.7)).unwrap();
    let mut r = rng(12);
    for n in [2, 4, 6] {
        let times: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let mut prod = exact.state().clone();
        for &t in times.iter().rev() {
            prod = exact.heisenberg_phi(t) * prod;
        }
        let (a, b) = (prod.trace(), gauss.moment(&times));
        assert!(
            (a - b).norm() <= 1e-11 * a.norm().max(1.0),
            "{n}: {a} vs {b}"
        );
    }
}

#[test]
fn coherent_mean_enters_odd_moments() {
    let b = ExactBath::boson_mode(1.0, None, 30).unwrap();
    let alpha = c(0.4, 0.2);
    let rho = coherent_state(31, alpha);
    let exact = ExactBath::new(b.hamiltonian().clone(), b.phi().clone(), rho).unwrap();
    let mean = move |t: f64| 2.0 * (alpha * c(0.0, -t).exp()).re;
    let gauss = GaussianBath::new(
        TwoPoint::SingleModeThermal {
            omega: 1.0,
            beta: None,
        },
        Mean::Function(std::sync::Arc::new(mean)),
    )
    .unwrap();
    let (exact, gauss) = (BathSpec::Exact(exact), BathSpec::Gaussian(gauss));
    let mut r = rng(13);
    for n in 1..=4 {
        let signs = random_signs(&mut r, n);
        let times = descending(&mut r, n);
        let a = corr(&exact, &signs, &times, CorrelationKind::Standard);
        let b = corr(&gauss, &signs, &times, CorrelationKind::Standard);
        assert!((a - b).norm() < 1e-9, "{n}: {a} vs {b}");
    }
}

#[test]
fn null_rules_for_random_baths() {
    let mut r = rng(14);
    for _ in 0..5 {
        let bath = random_stationary_bath(&mut r, 3);
        for n in 1..=4 {
            let mut signs: Vec<Sign> = random_signs(&mut r, n).signs().to_vec();
            signs[0] = Sign::Minus;
            let times = descending(&mut r, n);
            let std = corr(
                &bath,
                &SignPattern::new(signs.clone()).unwrap(),
                &times,
                CorrelationKind::Standard,
            );
            assert!(std.norm() < 1e-13);
            signs[0] = Sign::Plus;
            signs[n - 1] = Sign::Minus;
            let asc: Vec<f64> = times.iter().rev().copied().collect();
            let adj = corr(
                &bath,
                &SignPattern::new(signs).unwrap(),
                &asc,
                CorrelationKind::Adjoint,
            );
            assert!(adj.norm() < 1e-13);
        }
    }
}

#[test]
fn stationary_correlators_depend_on_differences() {
    let mut r = rng(15);
    let bath = random_stationary_bath(&mut r, 3);
    for n in 1..=4 {
        let signs = random_signs(&mut r, n);
        let times = descending(&mut r, n);
        let shift = r.random_range(-5.0..5.0);
        let shifted: Vec<f64> = times.iter().map(|t| t + shift).collect();
        let a = corr(&bath, &signs, &times, CorrelationKind::Standard);
        let b = corr(&bath, &signs, &shifted, CorrelationKind::Standard);
        assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn standard_and_adjoint_are_dual() {
    let mut r = rng(16);
    let bath = random_stationary_bath(&mut r, 3);
    for n in 1..=3 {
        for _ in 0..4 {
            let signs = random_signs(&mut r, n);
            let times = descending(&mut r, n);
            let rev_signs =
                SignPattern::new(signs.signs().iter().rev().copied().collect()).unwrap();
            let rev_times: Vec<f64> = times.iter().rev().copied().collect();
            let minus = signs.signs().iter().filter(|&&s| s == Sign::Minus).count();
            let std = corr(&bath, &signs, &times, CorrelationKind::Standard);
            let adj = corr(&bath, &rev_signs, &rev_times, CorrelationKind::Adjoint);
            assert!((std - adj * (-1f64).powi(minus as i32)).norm() < 1e-12);
        }
    }
}

#[test]
fn correlators_scale_with_coupling() {
    let mut r = rng(17);
    let bath = random_bath(&mut r, 3);
    let g = 0.37;
    let scaled = bath.with_coupling(g);
    for n in 1..=4 {
        let signs = random_signs(&mut r, n);
        let times = descending(&mut r, n);
        let a = corr(&bath, &signs, &times, CorrelationKind::Standard) * g.powi(n as i32);
        let b = corr(&scaled, &signs, &times, CorrelationKind::Standard);
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn adjoint_queries_need_stationary_bath() {
    let mut r = rng(18);
    let bath = random_bath(&mut r, 3);
    let q = CorrelationQuery {
        bath_signs: SignPattern::parse("+-").unwrap(),
        times: vec![0.1, 0.5],
        kind: CorrelationKind::Adjoint,
    };
    assert!(ordered_correlation(&bath, &q).is_err());
    let bad = CorrelationQuery {
        bath_signs: SignPattern::parse("+-").unwrap(),
        times: vec![0.1, 0.5],
        kind: CorrelationKind::Standard,
    };
    assert!(ordered_correlation(&bath, &bad).is_err());
}
