mod common;

use common::*;
use tclgen_core::bath::{
    coherent_state, pauli_x, pauli_y, pauli_z, BathSpec, ExactBath, GaussianBath,
};
use tclgen_core::linalg::{self, c, CMat};
use tclgen_core::numerics::{ModelSpec, QuadratureConfig, TimeGrid};
use tclgen_core::oracle::{duality_check, exact_reduced_trajectory, scaling_probe, FullModel};
use tclgen_core::propagate::{propagate_observable, propagate_state};

fn quad(t: f64, m: usize, n: usize) -> QuadratureConfig {
    QuadratureConfig::new(TimeGrid::new(t, m).unwrap(), n).unwrap()
}

fn ground() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}

fn plus() -> CMat {
    CMat::from_element(2, 2, c(0.5, 0.0))
}

#[test]
fn exact_dephasing_matches_closed_form() {
    let (g, omega) = (0.3, 1.5);
    let bath = BathSpec::Exact(ExactBath::boson_mode(omega, None, 30).unwrap());
    let model = ModelSpec::new(pauli_z() * c(0.8, 0.0), pauli_z(), g, bath).unwrap();
    let grid = TimeGrid::new(6.0, 30).unwrap();
    let traj = exact_reduced_trajectory(&FullModel::new(&model, &plus()).unwrap(), &grid).unwrap();
    for (t, rho) in traj.times.iter().zip(&traj.payload) {
        let decay = (-4.0 * g * g * (1.0 - (omega * t).cos()) / (omega * omega)).exp();
        assert!((rho[(0, 1)].norm() - 0.5 * decay).abs() < 1e-12);
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-12);
    }
}

#[test]
fn second_order_captures_gaussian_dephasing() {
    let g = 0.3;
    let bath = BathSpec::Gaussian(GaussianBath::single_mode_thermal(1.0, Some(2.0)).unwrap());
    let model = ModelSpec::new(pauli_z() * c(0.5, 0.0), pauli_z(), g, bath).unwrap();
    let exact_bath = BathSpec::Exact(ExactBath::boson_mode(1.0, Some(2.0), 40).unwrap());
    let exact_model = ModelSpec::new(pauli_z() * c(0.5, 0.0), pauli_z(), g, exact_bath).unwrap();
    let q = quad(5.0, 200, 2);
    let tcl = propagate_state(&model, &plus(), &q, 2).unwrap();
    let exact =
        exact_reduced_trajectory(&FullModel::new(&exact_model, &plus()).unwrap(), &q.grid).unwrap();
    let err = tcl
        .trace_distances(&exact)
        .unwrap()
        .into_iter()
        .fold(0.0, f64::max);
    assert!(err < 1e-4, "{err}");
}

#[test]
fn first_order_error_scales_quadratically() {
    let bath = BathSpec::Exact(ExactBath::boson_mode(1.0, None, 8).unwrap());
    let model = ModelSpec::new(pauli_x() * c(0.5, 0.0), pauli_z(), 0.1, bath).unwrap();
    let rows = scaling_probe(&model, &ground(), &quad(3.0, 60, 1), 1, &[0.1, 0.05, 0.025]).unwrap();
    for row in &rows[1..] {
        let ratio = row.ratio.unwrap();
        assert!((ratio - 4.0).abs() < 0.4, "{rows:?}");
    }
    assert!(rows.windows(2).all(|w| w[1].err < w[0].err));
}

#[test]
fn orders_differ_by_a_power_of_g() {
    let b = ExactBath::boson_mode(1.0, None, 6).unwrap();
    let bath = BathSpec::Exact(
        ExactBath::new(
            b.hamiltonian().clone(),
            b.phi().clone(),
            coherent_state(7, c(0.5, 0.0)),
        )
        .unwrap(),
    );
    let base = ModelSpec::new(pauli_x() * c(0.5, 0.0), pauli_z(), 1.0, bath).unwrap();
    let q = quad(2.0, 80, 2);
    let diff = |g: f64| {
        let m = base.with_coupling(g);
        let a = propagate_state(&m, &ground(), &q, 2).unwrap();
        let b = propagate_state(&m, &ground(), &q, 1).unwrap();
        a.trace_distances(&b)
            .unwrap()
            .into_iter()
            .fold(0.0, f64::max)
    };
    let ratio = diff(0.1) / diff(0.05);
    assert!((ratio - 4.0).abs() < 0.8, "{ratio}");
}

#[test]
fn state_trajectories_stay_healthy() {
    let mut r = rng(21);
    let model = random_qubit_model(&mut r, false).with_coupling(0.3);
    let traj = propagate_state(&model, &random_density(&mut r, 2), &quad(2.0, 400, 3), 3).unwrap();
    for m in &traj.monitors {
        assert!(m.trace_dev < 1e-6 && m.herm_residual < 1e-8, "{m:?}");
        assert!(m.min_eig.is_some());
    }
}

#[test]
fn duality_holds_order_by_order() {
    let mut r = rng(22);
    for _ in 0..3 {
        let model = random_qubit_model(&mut r, true);
        let o = random_hermitian(&mut r, 2);
        let rho = random_density(&mut r, 2);
        let q = quad(1.0, 20, 3);
        for i in [5, 20] {
            let res = duality_check(&model, &o, &rho, &q, i, 3).unwrap();
            assert!(res.iter().all(|&x| x < 1e-12), "{res:?}");
        }
    }
}

#[test]
fn duality_rejects_non_stationary_bath() {
    let mut r = rng(23);
    let model = random_qubit_model(&mut r, false);
    assert!(duality_check(&model, &pauli_x(), &plus(), &quad(1.0, 10, 2), 10, 2).is_err());
}

/// Largest `|Tr[O rho(t)] - Tr[O(t) rho]|` over Pauli observables.
fn picture_mismatch(model: &ModelSpec, rho: &CMat, q: &QuadratureConfig) -> f64 {
    let states = propagate_state(model, rho, q, 2).unwrap();
    let mut e: f64 = 0.0;
    for o in [pauli_x(), pauli_y(), pauli_z()] {
        let obs = propagate_observable(model, &o, q, 2).unwrap();
        for (x, y) in states.payload.iter().zip(&obs.payload) {
            e = e.max(((&o * x).trace() - (y * rho).trace()).norm());
        }
    }
    e
}

#[test]
fn observable_and_state_pictures_agree_to_truncation_order() {
    let mut r = rng(24);
    let q = quad(2.0, 100, 2);
    // nonzero bath mean: the pictures differ at third order
    let base = random_qubit_model(&mut r, true);
    let rho = random_density(&mut r, 2);
    let ratio = picture_mismatch(&base.with_coupling(0.05), &rho, &q)
        / picture_mismatch(&base.with_coupling(0.025), &rho, &q);
    assert!((ratio - 8.0).abs() < 1.6, "{ratio}");
    // zero mean: fourth order
    let thermal = BathSpec::Exact(ExactBath::boson_mode(1.0, Some(1.0), 20).unwrap());
    let model = ModelSpec::new(
        random_hermitian(&mut r, 2),
        random_hermitian(&mut r, 2),
        0.1,
        thermal,
    )
    .unwrap();
    let ratio =
        picture_mismatch(&model, &rho, &q) / picture_mismatch(&model.with_coupling(0.05), &rho, &q);
    assert!((ratio - 16.0).abs() < 3.2, "{ratio}");
    let id = propagate_observable(&model, &CMat::identity(2, 2), &q, 2).unwrap();
    assert!(linalg::max_abs(&(id.payload.last().unwrap() - CMat::identity(2, 2))) < 1e-12);
}
