#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tclgen_core::bath::{thermal_state, BathSpec, ExactBath};
use tclgen_core::linalg::{c, CMat};
use tclgen_core::numerics::ModelSpec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    CMat::from_fn(d, d, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    let m = random_matrix(rng, d);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

pub fn random_density(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    let m = random_matrix(rng, d);
    let p = &m * m.adjoint();
    let tr = p.trace();
    let rho = p / tr;
    (&rho + rho.adjoint()) * c(0.5, 0.0)
}

/// Random bath of dimension `d_e` in a thermal state of its own Hamiltonian.
pub fn random_stationary_bath(rng: &mut ChaCha8Rng, d_e: usize) -> BathSpec {
    let h = random_hermitian(rng, d_e);
    let phi = random_hermitian(rng, d_e);
    let beta = rng.random_range(0.3..2.0);
    BathSpec::Exact(ExactBath::new(h.clone(), phi, thermal_state(&h, beta).unwrap()).unwrap())
}

/// Random bath with a random (generally non-stationary) initial state.
pub fn random_bath(rng: &mut ChaCha8Rng, d_e: usize) -> BathSpec {
    let h = random_hermitian(rng, d_e);
    let phi = random_hermitian(rng, d_e);
    BathSpec::Exact(ExactBath::new(h, phi, random_density(rng, d_e)).unwrap())
}

pub fn random_qubit_model(rng: &mut ChaCha8Rng, stationary: bool) -> ModelSpec {
    let h = random_hermitian(rng, 2);
    let a = random_hermitian(rng, 2);
    let bath = if stationary {
        random_stationary_bath(rng, 2)
    } else {
        random_bath(rng, 2)
    };
    ModelSpec::new(h, a, 0.7, bath).unwrap()
}

pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    let scale = a.norm().max(b.norm()).max(1e-300);
    (a - b).norm() / scale
}
