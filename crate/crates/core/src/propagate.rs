//! Fixed-step integration of the truncated master equation and of its
//! adjoint, with health monitors.

use std::io::Write;

use crate::error::{Result, TclError};
use crate::linalg::{self, c, fmt_e12, unvectorize, vectorize, CMat, CVec};
use crate::numerics::{Evaluator, GeneratorPath, ModelSpec, QuadratureConfig, TimeGrid};
use crate::terms::Kind;

const INPUT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Payload {
    State,
    Observable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monitor {
    /// `|Tr X - 1|` for states, `|Tr X - Tr X_0|` for observables.
    pub trace_dev: f64,
    /// Frobenius norm of `X - X^dagger`.
    pub herm_residual: f64,
    /// Smallest eigenvalue of the Hermitian part; states only.
    pub min_eig: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub payload_kind: Payload,
    pub times: Vec<f64>,
    pub payload: Vec<CMat>,
    pub monitors: Vec<Monitor>,
}

impl Trajectory {
    /// Builds a trajectory and fills its monitors.
    pub fn new(payload_kind: Payload, times: Vec<f64>, payload: Vec<CMat>) -> Result<Self> {
        if times.len() != payload.len() || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TclError::Grid(
                "trajectory times must increase and match the payload".into(),
            ));
        }
        let reference = match payload_kind {
            Payload::State => c(1.0, 0.0),
            Payload::Observable => payload.first().map_or(c(0.0, 0.0), |x| x.trace()),
        };
        let monitors = payload
            .iter()
            .map(|x| Monitor {
                trace_dev: (x.trace() - reference).norm(),
                herm_residual: (x - x.adjoint()).norm(),
                min_eig: (payload_kind == Payload::State).then(|| linalg::min_eigenvalue(x)),
            })
            .collect();
        Ok(Trajectory {
            payload_kind,
            times,
            payload,
            monitors,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.payload.first().map_or(0, |x| x.nrows())
    }

    /// Trace distance `||X(t) - Y(t)||_1` per time.
    pub fn trace_distances(&self, other: &Trajectory) -> Result<Vec<f64>> {
        if self.len() != other.len()
            || self
                .times
                .iter()
                .zip(&other.times)
                .any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(TclError::Grid("trajectories are on different grids".into()));
        }
        Ok(self
            .payload
            .iter()
            .zip(&other.payload)
            .map(|(x, y)| linalg::trace_norm(&(x - y)))
            .collect())
    }

    pub fn csv_header(&self) -> Vec<String> {
        let d = self.dim();
        let mut cols = vec!["t".to_string()];
        for i in 0..d {
            for j in i..d {
                cols.push(format!("re_{i}_{j}"));
                cols.push(format!("im_{i}_{j}"));
            }
        }
        cols.extend(["trace_dev", "herm_residual", "min_eig"].map(String::from));
        cols
    }

    /// Columns `t, re_i_j, im_i_j (i <= j), trace_dev, herm_residual,
    /// min_eig`, floats as `%.12e`, `nan` for `min_eig` of observables.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.csv_header())?;
        let d = self.dim();
        for ((t, x), m) in self.times.iter().zip(&self.payload).zip(&self.monitors) {
            let mut row = vec![fmt_e12(*t)];
            for i in 0..d {
                for j in i..d {
                    row.push(fmt_e12(x[(i, j)].re));
                    row.push(fmt_e12(x[(i, j)].im));
                }
            }
            row.push(fmt_e12(m.trace_dev));
            row.push(fmt_e12(m.herm_residual));
            row.push(fmt_e12(m.min_eig.unwrap_or(f64::NAN)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Classical RK4 on `dx/dt = G(t) x` with `G` linear between grid nodes.
pub fn integrate(table: &[CMat], grid: &TimeGrid, x0: &CMat) -> Result<Vec<CMat>> {
    if table.len() != grid.len() {
        return Err(TclError::Grid(format!(
            "{} generator nodes for a grid of {}",
            table.len(),
            grid.len()
        )));
    }
    let d = x0.nrows();
    if table[0].nrows() != d * d {
        return Err(TclError::Grid(
            "generator does not match the operator dimension".into(),
        ));
    }
    let h = c(grid.h(), 0.0);
    let mut x: CVec = vectorize(x0);
    let mut out = Vec::with_capacity(grid.len());
    out.push(x0.clone());
    for i in 0..grid.steps() {
        let g0 = &table[i];
        let g1 = &table[i + 1];
        let gm = (g0 + g1) * c(0.5, 0.0);
        let k1 = g0 * &x;
        let k2 = &gm * (&x + &k1 * (h * 0.5));
        let k3 = &gm * (&x + &k2 * (h * 0.5));
        let k4 = g1 * (&x + &k3 * h);
        x += (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * (h / 6.0);
        out.push(unvectorize(&x, d));
    }
    Ok(out)
}

fn check_density(rho: &CMat) -> Result<()> {
    let r = linalg::hermiticity_residual(rho);
    if r > INPUT_TOL {
        return Err(TclError::Numerical(format!(
            "initial state is not Hermitian (residual {r:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr - c(1.0, 0.0)).norm() > INPUT_TOL {
        return Err(TclError::Numerical(format!("initial state has trace {tr}")));
    }
    let e = linalg::min_eigenvalue(rho);
    if e < -INPUT_TOL {
        return Err(TclError::Numerical(format!(
            "initial state has a negative eigenvalue {e:.3e}"
        )));
    }
    Ok(())
}

fn check_dims(model: &ModelSpec, x: &CMat) -> Result<()> {
    if x.shape() != (model.dim(), model.dim()) {
        return Err(TclError::Model(format!(
            "initial operator is {:?}, model dimension {}",
            x.shape(),
            model.dim()
        )));
    }
    Ok(())
}

/// `d rho / dt = L^{(N)}_t rho` in the interaction picture.
pub fn propagate_state(
    model: &ModelSpec,
    rho0: &CMat,
    quad: &QuadratureConfig,
    n: usize,
) -> Result<Trajectory> {
    check_dims(model, rho0)?;
    check_density(rho0)?;
    let ev = Evaluator::new(model, quad, Kind::Schrodinger)?;
    let table = ev.generator_table(n, GeneratorPath::MatrixRecursion)?;
    Trajectory::new(
        Payload::State,
        quad.grid.times(),
        integrate(&table, &quad.grid, rho0)?,
    )
}

/// `d O / dt = L*^{(N)}_t O`; needs a stationary bath.
pub fn propagate_observable(
    model: &ModelSpec,
    o0: &CMat,
    quad: &QuadratureConfig,
    n: usize,
) -> Result<Trajectory> {
    check_dims(model, o0)?;
    let r = linalg::hermiticity_residual(o0);
    if r > INPUT_TOL {
        return Err(TclError::Numerical(format!(
            "observable is not Hermitian (residual {r:.3e})"
        )));
    }
    let ev = Evaluator::new(model, quad, Kind::Adjoint)?;
    let table = ev.generator_table(n, GeneratorPath::MatrixRecursion)?;
    Trajectory::new(
        Payload::Observable,
        quad.grid.times(),
        integrate(&table, &quad.grid, o0)?,
    )
}
