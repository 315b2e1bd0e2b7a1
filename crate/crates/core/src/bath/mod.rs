//! Ordered bath correlation functions.
//!
//! With `Phi^{+-}(X) = (phi X +- X phi) / 2` (the `1/2` per slot is folded
//! in here), the standard correlator of bath signs `b_1..b_n` at times
//! `t_1 > .. > t_n` is
//!
//! ```text
//! D = Tr[ Phi^{b_1}(t_1) Phi^{b_2}(t_2) .. Phi^{b_n}(t_n) (rho_E) ]
//! ```
//!
//! and the adjoint correlator at ascending times `u_1 < .. < u_n` is
//!
//! ```text
//! D~ = Tr[ rho_E Phi^{b_1}(u_1) .. Phi^{b_n}(u_n) (1) ]
//! ```
//!
//! In both cases the signs and times are listed in slot order, so a leading
//! `-` kills a standard correlator and a trailing `-` kills an adjoint one.

mod exact;
mod gaussian;

use dashmap::DashMap;
use num_complex::Complex64;

pub use exact::{
    annihilation, coherent_state, pauli_x, pauli_y, pauli_z, thermal_state, ExactBath,
};
pub use gaussian::{isserlis_correlation, GaussianBath, Mean, SampledTwoPoint, TwoPoint};

use crate::error::{Result, TclError};
use crate::linalg::{c, CMat};
use crate::terms::{Kind, Sign, SignPattern};

/// Largest `[H_E, rho_E]` entry still treated as stationary.
pub const STATIONARITY_TOL: f64 = 1e-10;

/// Entries kept by the Gaussian grid memo; later paths are recomputed.
const GAUSSIAN_MEMO_CAP: usize = 1 << 20;

#[derive(Clone, Debug)]
pub enum BathSpec {
    Exact(ExactBath),
    Gaussian(GaussianBath),
}

impl BathSpec {
    /// Folds the coupling into the bath operator.
    pub fn with_coupling(&self, g: f64) -> BathSpec {
        match self {
            BathSpec::Exact(b) => BathSpec::Exact(b.with_coupling(g)),
            BathSpec::Gaussian(b) => BathSpec::Gaussian(b.with_coupling(g)),
        }
    }

    pub fn stationarity_residual(&self) -> f64 {
        match self {
            BathSpec::Exact(b) => b.stationarity_residual(),
            BathSpec::Gaussian(b) => b.stationarity_residual(),
        }
    }

    pub fn require_stationary(&self) -> Result<()> {
        let r = self.stationarity_residual();
        if r > STATIONARITY_TOL {
            return Err(TclError::NonStationary(r));
        }
        Ok(())
    }

    pub fn as_exact(&self) -> Option<&ExactBath> {
        match self {
            BathSpec::Exact(b) => Some(b),
            BathSpec::Gaussian(_) => None,
        }
    }

    /// `e^{i H_E tau} phi e^{-i H_E tau}`; Gaussian baths have no matrices.
    pub fn heisenberg_phi(&self, tau: f64) -> Result<CMat> {
        match self {
            BathSpec::Exact(b) => Ok(b.heisenberg_phi(tau)),
            BathSpec::Gaussian(_) => Err(TclError::Bath(
                "Gaussian baths have no operator representation".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorrelationKind {
    Standard,
    Adjoint,
}

impl From<Kind> for CorrelationKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Schrodinger => CorrelationKind::Standard,
            Kind::Adjoint => CorrelationKind::Adjoint,
        }
    }
}

/// Bath signs and times in slot order: strictly descending times for the
/// standard kind, strictly ascending for the adjoint kind.
#[derive(Clone, Debug)]
pub struct CorrelationQuery {
    pub bath_signs: SignPattern,
    pub times: Vec<f64>,
    pub kind: CorrelationKind,
}

impl CorrelationQuery {
    fn validate(&self) -> Result<()> {
        if self.times.len() != self.bath_signs.len() {
            return Err(TclError::Query(format!(
                "{} times for {} signs",
                self.times.len(),
                self.bath_signs.len()
            )));
        }
        let ordered = match self.kind {
            CorrelationKind::Standard => self.times.windows(2).all(|w| w[0] > w[1]),
            CorrelationKind::Adjoint => self.times.windows(2).all(|w| w[0] < w[1]),
        };
        if !ordered {
            let want = if self.kind == CorrelationKind::Standard {
                "descending"
            } else {
                "ascending"
            };
            return Err(TclError::Query(format!(
                "times {:?} are not strictly {want}",
                self.times
            )));
        }
        Ok(())
    }
}

pub fn ordered_correlation(bath: &BathSpec, q: &CorrelationQuery) -> Result<Complex64> {
    q.validate()?;
    if q.kind == CorrelationKind::Adjoint {
        bath.require_stationary()?;
    }
    let signs = q.bath_signs.signs();
    Ok(match bath {
        BathSpec::Exact(b) => {
            let phis: Vec<CMat> = q.times.iter().map(|&t| b.heisenberg_phi(t)).collect();
            let mut x = chain_start(q.kind, b.state());
            for (s, phi) in signs.iter().zip(&phis) {
                x = chain_step(&x, *s, phi);
            }
            chain_close(q.kind, &x, b.state())
        }
        BathSpec::Gaussian(b) => gaussian_chain(b, signs, &q.times, q.kind),
    })
}

fn chain_start(kind: CorrelationKind, rho: &CMat) -> CMat {
    match kind {
        CorrelationKind::Standard => CMat::identity(rho.nrows(), rho.ncols()),
        CorrelationKind::Adjoint => rho.clone(),
    }
}

/// Dual action under the trace: `Tr[X Phi^b(Y)] = Tr[step(X) Y]`.
fn chain_step(x: &CMat, sign: Sign, phi: &CMat) -> CMat {
    let xp = x * phi;
    let px = phi * x;
    match sign {
        Sign::Plus => (xp + px) * c(0.5, 0.0),
        Sign::Minus => (xp - px) * c(0.5, 0.0),
    }
}

fn chain_close(kind: CorrelationKind, x: &CMat, rho: &CMat) -> Complex64 {
    match kind {
        CorrelationKind::Standard => x.component_mul(&rho.transpose()).sum(),
        CorrelationKind::Adjoint => x.trace(),
    }
}

/// Expands every `Phi^b` into its left and right placements and evaluates the
/// resulting plain moments.
fn gaussian_chain(
    bath: &GaussianBath,
    signs: &[Sign],
    times: &[f64],
    kind: CorrelationKind,
) -> Complex64 {
    let n = signs.len();
    if !bath.has_mean() && n % 2 == 1 {
        return c(0.0, 0.0);
    }
    let mut total = c(0.0, 0.0);
    let mut ops = Vec::with_capacity(n);
    for right_mask in 0u32..1 << n {
        let is_right = |k: usize| right_mask >> k & 1 == 1;
        let mut coeff = 1.0;
        for k in (0..n).filter(|&k| is_right(k)) {
            coeff *= signs[k].factor();
        }
        ops.clear();
        let lefts = (0..n).filter(|&k| !is_right(k)).map(|k| times[k]);
        let rights = (0..n).rev().filter(|&k| is_right(k)).map(|k| times[k]);
        match kind {
            CorrelationKind::Standard => ops.extend(rights.chain(lefts)),
            CorrelationKind::Adjoint => ops.extend(lefts.chain(rights)),
        }
        total += bath.moment(&ops) * coeff;
    }
    total * 0.5f64.powi(n as i32)
}

/// Bath chain on a fixed time grid, stepped slot by slot so that nested
/// quadrature loops can share prefixes.
pub struct GridCorrelator {
    kind: CorrelationKind,
    backend: GridBackend,
}

enum GridBackend {
    /// `closers[sign][j]` is the transpose of `C` with
    /// `close(step(X, sign, j)) = Tr[X C]`.
    Exact {
        phis: Vec<CMat>,
        rho: CMat,
        closers: [Vec<CMat>; 2],
    },
    Gaussian {
        bath: GaussianBath,
        times: Vec<f64>,
        memo: DashMap<Vec<(Sign, u32)>, Complex64>,
    },
}

/// Partial chain after some slots.
#[derive(Clone, Debug)]
pub enum ChainState {
    Operator(CMat),
    Path(Vec<(Sign, u32)>),
}

impl GridCorrelator {
    /// `bath` must already carry the coupling.
    pub fn new(bath: &BathSpec, times: &[f64], kind: CorrelationKind) -> Result<Self> {
        if kind == CorrelationKind::Adjoint {
            bath.require_stationary()?;
        }
        let backend = match bath {
            BathSpec::Exact(b) => {
                let phis: Vec<CMat> = times.iter().map(|&t| b.heisenberg_phi(t)).collect();
                let rho = b.state().clone();
                let closer = |sign: Sign| -> Vec<CMat> {
                    phis.iter()
                        .map(|phi| {
                            let m = match (kind, sign) {
                                (CorrelationKind::Standard, s) => {
                                    (phi * &rho + (&rho * phi) * c(s.factor(), 0.0)) * c(0.5, 0.0)
                                }
                                (CorrelationKind::Adjoint, Sign::Plus) => phi.clone(),
                                (CorrelationKind::Adjoint, Sign::Minus) => {
                                    CMat::zeros(rho.nrows(), rho.ncols())
                                }
                            };
                            m.transpose()
                        })
                        .collect()
                };
                let closers = [closer(Sign::Minus), closer(Sign::Plus)];
                GridBackend::Exact { phis, rho, closers }
            }
            BathSpec::Gaussian(b) => {
                let (lo, hi) = (
                    times.first().copied().unwrap_or(0.0),
                    times.last().copied().unwrap_or(0.0),
                );
                if !b.covers(lo, hi) {
                    return Err(TclError::Bath(format!(
                        "sampled correlation does not cover [{lo}, {hi}]"
                    )));
                }
                GridBackend::Gaussian {
                    bath: b.clone(),
                    times: times.to_vec(),
                    memo: DashMap::new(),
                }
            }
        };
        Ok(GridCorrelator { kind, backend })
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    pub fn start(&self) -> ChainState {
        match &self.backend {
            GridBackend::Exact { rho, .. } => ChainState::Operator(chain_start(self.kind, rho)),
            GridBackend::Gaussian { .. } => ChainState::Path(Vec::new()),
        }
    }

    pub fn step(&self, state: &ChainState, sign: Sign, index: usize) -> ChainState {
        match (&self.backend, state) {
            (GridBackend::Exact { phis, .. }, ChainState::Operator(x)) => {
                ChainState::Operator(chain_step(x, sign, &phis[index]))
            }
            (GridBackend::Gaussian { .. }, ChainState::Path(p)) => {
                let mut p = p.clone();
                p.push((sign, index as u32));
                ChainState::Path(p)
            }
            _ => unreachable!("chain state from a different backend"),
        }
    }

    /// `close(step(state, sign, index))` without forming the stepped state.
    pub fn close_with(&self, state: &ChainState, sign: Sign, index: usize) -> Complex64 {
        match (&self.backend, state) {
            (GridBackend::Exact { closers, .. }, ChainState::Operator(x)) => {
                let ct = &closers[(sign == Sign::Plus) as usize][index];
                x.iter().zip(ct.iter()).map(|(a, b)| a * b).sum()
            }
            _ => self.close(&self.step(state, sign, index)),
        }
    }

    pub fn close(&self, state: &ChainState) -> Complex64 {
        match (&self.backend, state) {
            (GridBackend::Exact { rho, .. }, ChainState::Operator(x)) => {
                chain_close(self.kind, x, rho)
            }
            (GridBackend::Gaussian { bath, times, memo }, ChainState::Path(p)) => {
                if p.len() % 2 == 1 && !bath.has_mean() {
                    return c(0.0, 0.0);
                }
                if let Some(v) = memo.get(p) {
                    return *v;
                }
                let signs: Vec<Sign> = p.iter().map(|e| e.0).collect();
                let ts: Vec<f64> = p.iter().map(|e| times[e.1 as usize]).collect();
                let v = gaussian_chain(bath, &signs, &ts, self.kind);
                if memo.len() < GAUSSIAN_MEMO_CAP {
                    memo.insert(p.clone(), v);
                }
                v
            }
            _ => unreachable!("chain state from a different backend"),
        }
    }

    /// Correlator of a whole index path in slot order.
    pub fn value(&self, path: &[(Sign, usize)]) -> Complex64 {
        let Some((&(last_sign, last_idx), head)) = path.split_last() else {
            return c(1.0, 0.0);
        };
        let mut s = self.start();
        for &(sign, idx) in head {
            s = self.step(&s, sign, idx);
        }
        self.close_with(&s, last_sign, last_idx)
    }
}
