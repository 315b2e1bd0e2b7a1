//! Exact reduced dynamics of the full system plus bath, and the probes built
//! on it.

use rayon::prelude::*;

use crate::bath::BathSpec;
use crate::error::{Result, TclError};
use crate::linalg::{self, c, unvectorize, vectorize, CMat};
use crate::numerics::{
    order_weight, Evaluator, InteractionFrame, ModelSpec, QuadratureConfig, TimeGrid,
};
use crate::propagate::{propagate_state, Payload, Trajectory};
use crate::terms::Kind;

/// Largest composite dimension the oracle diagonalizes.
pub const MAX_FULL_DIM: usize = 4096;

/// `H = H_S x 1 + 1 x H_E + g A x phi` with the system index major, and the
/// product initial state.
#[derive(Clone, Debug)]
pub struct FullModel {
    d_s: usize,
    d_e: usize,
    energies: Vec<f64>,
    basis: CMat,
    rho0: CMat,
    frame: InteractionFrame,
}

impl FullModel {
    pub fn new(model: &ModelSpec, rho_s: &CMat) -> Result<Self> {
        let BathSpec::Exact(bath) = model.bath() else {
            return Err(TclError::Bath(
                "the exact oracle needs a finite-dimensional bath".into(),
            ));
        };
        let (d_s, d_e) = (model.dim(), bath.dim());
        check_full_dim(d_s, d_e)?;
        if rho_s.shape() != (d_s, d_s) {
            return Err(TclError::Model(format!(
                "system state is {:?}, expected {d_s}x{d_s}",
                rho_s.shape()
            )));
        }
        let id_s = CMat::identity(d_s, d_s);
        let id_e = CMat::identity(d_e, d_e);
        let h = model.h_s().kronecker(&id_e)
            + id_s.kronecker(bath.hamiltonian())
            + model.a().kronecker(bath.phi()) * c(model.g(), 0.0);
        let (energies, basis) = linalg::hermitian_eigen(&h);
        Ok(FullModel {
            d_s,
            d_e,
            energies,
            basis,
            rho0: rho_s.kronecker(bath.state()),
            frame: InteractionFrame::new(model.h_s()),
        })
    }

    pub fn dim(&self) -> usize {
        self.d_s * self.d_e
    }

    /// Full state `U(t) rho_0 U(t)^dagger` in the Schrodinger picture.
    pub fn evolve(&self, t: f64) -> CMat {
        let u = linalg::hermitian_exp(&self.energies, &self.basis, c(0.0, -t));
        &u * &self.rho0 * u.adjoint()
    }

    /// Reduced state in the interaction picture of `H_S`.
    pub fn reduced_state(&self, t: f64) -> CMat {
        let rho_s = partial_trace_bath(&self.evolve(t), self.d_s, self.d_e);
        self.frame.to_interaction(&rho_s, t)
    }
}

pub fn check_full_dim(d_s: usize, d_e: usize) -> Result<usize> {
    let dim = d_s * d_e;
    if dim > MAX_FULL_DIM {
        return Err(TclError::Dimension {
            dim,
            bound: MAX_FULL_DIM,
        });
    }
    Ok(dim)
}

/// `Tr_E` of an operator on `C^{d_s} x C^{d_e}` (system index major).
pub fn partial_trace_bath(x: &CMat, d_s: usize, d_e: usize) -> CMat {
    CMat::from_fn(d_s, d_s, |i, j| {
        (0..d_e).map(|k| x[(i * d_e + k, j * d_e + k)]).sum()
    })
}

pub fn exact_reduced_trajectory(full: &FullModel, grid: &TimeGrid) -> Result<Trajectory> {
    let times = grid.times();
    let states: Vec<CMat> = times.par_iter().map(|&t| full.reduced_state(t)).collect();
    Trajectory::new(Payload::State, times, states)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRow {
    pub g: f64,
    /// `max_t ||rho_TCL(t) - rho_exact(t)||_1`.
    pub err: f64,
    /// `err(previous g) / err(g)`.
    pub ratio: Option<f64>,
    /// `ln(ratio) / ln(previous g / g)`: the observed power of `g`.
    pub order: Option<f64>,
}

/// Truncation error of the order-`n` equation against the exact dynamics for
/// each coupling in turn.
pub fn scaling_probe(
    model: &ModelSpec,
    rho_s: &CMat,
    quad: &QuadratureConfig,
    n: usize,
    couplings: &[f64],
) -> Result<Vec<ScalingRow>> {
    if couplings.len() < 2 {
        return Err(TclError::Domain(
            "the scaling probe needs at least two couplings".into(),
        ));
    }
    let mut rows: Vec<ScalingRow> = Vec::with_capacity(couplings.len());
    for &g in couplings {
        let m = model.with_coupling(g);
        let tcl = propagate_state(&m, rho_s, quad, n)?;
        let exact = exact_reduced_trajectory(&FullModel::new(&m, rho_s)?, &quad.grid)?;
        let err = tcl.trace_distances(&exact)?.into_iter().fold(0.0, f64::max);
        let (ratio, order) = match rows.last() {
            Some(prev) => {
                let ratio = prev.err / err;
                (Some(ratio), Some(ratio.ln() / (prev.g / g).ln()))
            }
            None => (None, None),
        };
        rows.push(ScalingRow {
            g,
            err,
            ratio,
            order,
        });
    }
    Ok(rows)
}

/// `|Tr[O (-i)^n mu_n(rho)] - Tr[(i^n mu~_n(O)) rho]|` at grid node `i` for
/// `n = 1..=max_n`.
pub fn duality_check(
    model: &ModelSpec,
    o0: &CMat,
    rho_s: &CMat,
    quad: &QuadratureConfig,
    i: usize,
    max_n: usize,
) -> Result<Vec<f64>> {
    if max_n > 3 {
        return Err(TclError::Order {
            order: max_n,
            reason: "above the duality check range 1..=3",
        });
    }
    let forward = Evaluator::new(model, quad, Kind::Schrodinger)?;
    let backward = Evaluator::new(model, quad, Kind::Adjoint)?;
    let d = model.dim();
    (1..=max_n)
        .map(|n| {
            let rho_n = unvectorize(
                &(forward.evaluate_mu(n, i)?
                    * order_weight(n, Kind::Schrodinger)
                    * vectorize(rho_s)),
                d,
            );
            let o_n = unvectorize(
                &(backward.evaluate_mu(n, i)? * order_weight(n, Kind::Adjoint) * vectorize(o0)),
                d,
            );
            Ok(((o0 * rho_n).trace() - (o_n * rho_s).trace()).norm())
        })
        .collect()
}
