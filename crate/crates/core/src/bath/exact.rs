use num_complex::Complex64;

use crate::error::{Result, TclError};
use crate::linalg::{self, c, CMat};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Finite-dimensional bath: Hamiltonian, coupling operator and initial state.
#[derive(Clone, Debug)]
pub struct ExactBath {
    h_e: CMat,
    phi: CMat,
    rho: CMat,
    energies: Vec<f64>,
    basis: CMat,
    /// `phi` in the eigenbasis of `h_e`.
    phi_eigen: CMat,
}

impl ExactBath {
    pub fn new(h_e: CMat, phi: CMat, rho: CMat) -> Result<Self> {
        let d = h_e.nrows();
        if d == 0 || !h_e.is_square() || phi.shape() != (d, d) || rho.shape() != (d, d) {
            return Err(TclError::Bath(
                "H_E, phi and rho_E must be square matrices of one dimension".into(),
            ));
        }
        for (name, m) in [("H_E", &h_e), ("phi", &phi), ("rho_E", &rho)] {
            let r = linalg::hermiticity_residual(m);
            if r > HERMITIAN_TOL {
                return Err(TclError::Bath(format!(
                    "{name} is not Hermitian (residual {r:.3e})"
                )));
            }
        }
        let tr = rho.trace();
        if (tr - c(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(TclError::Bath(format!("Tr rho_E = {tr} is not 1")));
        }
        let min = linalg::min_eigenvalue(&rho);
        if min < -PSD_TOL {
            return Err(TclError::Bath(format!(
                "rho_E has a negative eigenvalue {min:.3e}"
            )));
        }
        let (energies, basis) = linalg::hermitian_eigen(&h_e);
        let phi_eigen = basis.adjoint() * &phi * &basis;
        Ok(ExactBath {
            h_e,
            phi,
            rho,
            energies,
            basis,
            phi_eigen,
        })
    }

    /// Single bosonic mode truncated to `n_max` quanta: `H_E = omega a^dag a`,
    /// `phi = a + a^dag`, thermal state at inverse temperature `beta`
    /// (vacuum when `beta` is `None`).
    pub fn boson_mode(omega: f64, beta: Option<f64>, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(TclError::Bath("n_max must be at least 1".into()));
        }
        let d = n_max + 1;
        let a = annihilation(d);
        let h = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            (0..d).map(|k| c(omega * k as f64, 0.0)),
        ));
        let phi = &a + a.adjoint();
        let rho = match beta {
            Some(b) => thermal_state(&h, b)?,
            None => projector(d, 0),
        };
        ExactBath::new(h, phi, rho)
    }

    /// Bath spin: `H_E = omega sigma_z / 2`, `phi = sigma_x`, thermal state.
    pub fn dephasing_qubit(omega: f64, beta: Option<f64>) -> Result<Self> {
        let h = pauli_z() * c(omega / 2.0, 0.0);
        let rho = match beta {
            Some(b) => thermal_state(&h, b)?,
            None => projector(2, if omega >= 0.0 { 1 } else { 0 }),
        };
        ExactBath::new(h, pauli_x(), rho)
    }

    pub fn dim(&self) -> usize {
        self.h_e.nrows()
    }

    pub fn hamiltonian(&self) -> &CMat {
        &self.h_e
    }

    pub fn phi(&self) -> &CMat {
        &self.phi
    }

    pub fn state(&self) -> &CMat {
        &self.rho
    }

    /// `phi -> g phi`.
    pub fn with_coupling(&self, g: f64) -> ExactBath {
        let mut b = self.clone();
        b.phi *= c(g, 0.0);
        b.phi_eigen *= c(g, 0.0);
        b
    }

    /// `e^{i H_E tau} phi e^{-i H_E tau}`.
    pub fn heisenberg_phi(&self, tau: f64) -> CMat {
        let mut rotated = self.phi_eigen.clone();
        for ((k, l), z) in rotated
            .iter_mut()
            .enumerate()
            .map(|(idx, z)| ((idx % self.dim(), idx / self.dim()), z))
        {
            *z *= Complex64::from_polar(1.0, (self.energies[k] - self.energies[l]) * tau);
        }
        &self.basis * rotated * self.basis.adjoint()
    }

    /// Largest entry of `[H_E, rho_E]`.
    pub fn stationarity_residual(&self) -> f64 {
        linalg::max_abs(&(&self.h_e * &self.rho - &self.rho * &self.h_e))
    }

    /// Expectation value of the coupling operator.
    pub fn mean_phi(&self) -> f64 {
        (&self.phi * &self.rho).trace().re
    }
}

pub fn annihilation(d: usize) -> CMat {
    CMat::from_fn(d, d, |r, col| {
        if col == r + 1 {
            c((col as f64).sqrt(), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

fn projector(d: usize, k: usize) -> CMat {
    CMat::from_fn(d, d, |r, col| {
        if r == k && col == k {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// `exp(-beta H) / Z`, shifted by the ground energy for stability.
pub fn thermal_state(h: &CMat, beta: f64) -> Result<CMat> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(TclError::Bath(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    let (energies, basis) = linalg::hermitian_eigen(h);
    let e0 = energies[0];
    let shifted: Vec<f64> = energies.iter().map(|e| e - e0).collect();
    let z: f64 = shifted.iter().map(|e| (-beta * e).exp()).sum();
    let mut rho = linalg::hermitian_exp(&shifted, &basis, c(-beta, 0.0));
    rho /= c(z, 0.0);
    Ok((&rho + rho.adjoint()) * c(0.5, 0.0))
}

/// Coherent state `|alpha>` of a mode truncated to `d` levels, renormalized.
pub fn coherent_state(d: usize, alpha: Complex64) -> CMat {
    let mut amp = Vec::with_capacity(d);
    let mut a = c(1.0, 0.0);
    for k in 0..d {
        if k > 0 {
            a *= alpha / (k as f64).sqrt();
        }
        amp.push(a);
    }
    let norm: f64 = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v = nalgebra::DVector::from_iterator(d, amp.into_iter().map(|z| z / norm));
    &v * v.adjoint()
}
