//! Shared fixtures for the benchmarks.

use tclgen_core::bath::{pauli_x, pauli_z, BathSpec, ExactBath, GaussianBath};
use tclgen_core::linalg::{c, CMat};
use tclgen_core::numerics::{ModelSpec, QuadratureConfig, TimeGrid};

/// Qubit coupled through `sigma_z` to one thermal mode truncated at `n_max`.
pub fn spin_boson(g: f64, n_max: usize) -> ModelSpec {
    let bath = BathSpec::Exact(ExactBath::boson_mode(1.0, Some(1.0), n_max).expect("valid mode"));
    ModelSpec::new(pauli_x() * c(0.5, 0.0), pauli_z(), g, bath).expect("valid model")
}

/// Same qubit with the mode replaced by its Gaussian description.
pub fn spin_boson_gaussian(g: f64) -> ModelSpec {
    let bath =
        BathSpec::Gaussian(GaussianBath::single_mode_thermal(1.0, Some(1.0)).expect("valid bath"));
    ModelSpec::new(pauli_x() * c(0.5, 0.0), pauli_z(), g, bath).expect("valid model")
}

pub fn quadrature(t: f64, m: usize, n: usize) -> QuadratureConfig {
    QuadratureConfig::new(TimeGrid::new(t, m).expect("valid grid"), n).expect("valid quadrature")
}

pub fn ground_state() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}
