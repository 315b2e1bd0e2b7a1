//! Numerical evaluation of the symbolic terms on a finite model.

mod evaluate;
mod superops;

pub use evaluate::{Evaluator, GeneratorPath};
pub use superops::{build_system_superops, SystemSuperops};

use num_complex::Complex64;

use crate::bath::BathSpec;
use crate::error::{Result, TclError};
use crate::linalg::{self, c, CMat};

const HERMITIAN_TOL: f64 = 1e-12;

/// Highest order the numerical layers evaluate.
pub const MAX_NUMERIC_ORDER: usize = 4;

/// System matrices, coupling and bath of `H = H_S + H_E + g A phi`.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    h_s: CMat,
    a: CMat,
    g: f64,
    bath: BathSpec,
}

impl ModelSpec {
    pub fn new(h_s: CMat, a: CMat, g: f64, bath: BathSpec) -> Result<Self> {
        let d = h_s.nrows();
        if d < 2 || !h_s.is_square() || a.shape() != (d, d) {
            return Err(TclError::Model(format!(
                "H_S and A must be square of one dimension >= 2, got {d}"
            )));
        }
        for (name, m) in [("H_S", &h_s), ("A", &a)] {
            let r = linalg::hermiticity_residual(m);
            if r > HERMITIAN_TOL {
                return Err(TclError::Model(format!(
                    "{name} is not Hermitian (residual {r:.3e})"
                )));
            }
        }
        if !g.is_finite() {
            return Err(TclError::Model(format!("coupling {g} is not finite")));
        }
        Ok(ModelSpec { h_s, a, g, bath })
    }

    pub fn dim(&self) -> usize {
        self.h_s.nrows()
    }

    pub fn h_s(&self) -> &CMat {
        &self.h_s
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Bath without the coupling.
    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    /// Bath with `g` folded into `phi`.
    pub fn coupled_bath(&self) -> BathSpec {
        self.bath.with_coupling(self.g)
    }

    pub fn with_coupling(&self, g: f64) -> ModelSpec {
        ModelSpec { g, ..self.clone() }
    }
}

/// Uniform grid `t_i = i T / M`, `i = 0..=M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    m: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, m: usize) -> Result<Self> {
        if t_max.is_nan() || t_max <= 0.0 || !t_max.is_finite() || m == 0 {
            return Err(TclError::Grid(format!(
                "need T > 0 and M >= 1, got T = {t_max}, M = {m}"
            )));
        }
        Ok(TimeGrid { t_max, m })
    }

    pub fn steps(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.t_max / self.m as f64
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.m).map(|i| self.time(i)).collect()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i > self.m {
            return Err(TclError::Grid(format!(
                "time index {i} outside 0..={}",
                self.m
            )));
        }
        Ok(())
    }

    /// Trapezoid weight of node `j` for integrals over `[0, t_i]`.
    pub fn trapezoid_weight(&self, j: usize, i: usize) -> f64 {
        if i == 0 || j > i {
            0.0
        } else if j == 0 || j == i {
            0.5 * self.h()
        } else {
            self.h()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub grid: TimeGrid,
    pub max_order: usize,
}

impl QuadratureConfig {
    pub fn new(grid: TimeGrid, max_order: usize) -> Result<Self> {
        if max_order == 0 || max_order > MAX_NUMERIC_ORDER {
            return Err(TclError::Order {
                order: max_order,
                reason: "outside the numerical range 1..=4",
            });
        }
        if grid.steps() < 2 * max_order {
            return Err(TclError::Grid(format!(
                "M = {} is below 2N = {}",
                grid.steps(),
                2 * max_order
            )));
        }
        Ok(QuadratureConfig { grid, max_order })
    }

    /// Order 3 on the given grid.
    pub fn with_default_order(grid: TimeGrid) -> Result<Self> {
        QuadratureConfig::new(grid, 3)
    }
}

/// Sign of the exponent in the interaction-picture rotation
/// `X(t) = e^{s i H_S t} X e^{-s i H_S t}`. The superoperator tables and the
/// exact reduced states both go through [`InteractionFrame`], which reads it.
pub const INTERACTION_SIGN: f64 = 1.0;

/// Eigenbasis of `H_S`, used to move operators to the interaction picture.
#[derive(Clone, Debug)]
pub struct InteractionFrame {
    energies: Vec<f64>,
    basis: CMat,
}

impl InteractionFrame {
    pub fn new(h_s: &CMat) -> Self {
        let (energies, basis) = linalg::hermitian_eigen(h_s);
        InteractionFrame { energies, basis }
    }

    fn rotation(&self, t: f64) -> CMat {
        linalg::hermitian_exp(
            &self.energies,
            &self.basis,
            Complex64::new(0.0, INTERACTION_SIGN * t),
        )
    }

    /// `e^{i H_S t} X e^{-i H_S t}`.
    pub fn to_interaction(&self, x: &CMat, t: f64) -> CMat {
        let u = self.rotation(t);
        &u * x * u.adjoint()
    }

    /// Inverse of [`Self::to_interaction`].
    pub fn to_schrodinger(&self, x: &CMat, t: f64) -> CMat {
        let u = self.rotation(t);
        u.adjoint() * x * &u
    }
}

/// Caps the global rayon pool at `TCLGEN_THREADS` when set. Returns the
/// requested count, if any. Only the first call has an effect.
pub fn init_thread_pool() -> Option<usize> {
    let n = std::env::var("TCLGEN_THREADS")
        .ok()?
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .ok();
    Some(n)
}

/// `(-i)^n` for states, `i^n` for observables.
pub fn order_weight(n: usize, kind: crate::terms::Kind) -> Complex64 {
    let base = match kind {
        crate::terms::Kind::Schrodinger => c(0.0, -1.0),
        crate::terms::Kind::Adjoint => c(0.0, 1.0),
    };
    base.powi(n as i32)
}
