//! JSON run configuration. Unknown keys are rejected everywhere.
//!
//! Matrices are flat row-major lists of `[re, im]` pairs.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tclgen_core::bath::{BathSpec, ExactBath, GaussianBath, Mean, SampledTwoPoint, TwoPoint};
use tclgen_core::linalg::{self, from_row_major_pairs, CMat};
use tclgen_core::numerics::{ModelSpec, QuadratureConfig, TimeGrid};

use crate::CliError;

const INPUT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub bath: BathConfig,
    pub grid: GridConfig,
    pub order: usize,
    #[serde(default)]
    pub observable: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub compare: Option<CompareConfig>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub d_s: usize,
    pub h_s: Vec<[f64; 2]>,
    pub a: Vec<[f64; 2]>,
    pub g: f64,
    #[serde(default)]
    pub rho0: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BathConfig {
    Exact {
        d_e: usize,
        h_e: Vec<[f64; 2]>,
        phi: Vec<[f64; 2]>,
        rho_e: Vec<[f64; 2]>,
    },
    Gaussian {
        correlation: CorrelationConfig,
        #[serde(default)]
        mean: f64,
    },
    BosonMode {
        omega: f64,
        #[serde(default)]
        beta: Option<f64>,
        n_max: usize,
    },
    DephasingQubit {
        omega: f64,
        #[serde(default)]
        beta: Option<f64>,
    },
}

/// Two-point function of a Gaussian bath: a builtin, or samples on a full
/// `(tau, s)` grid read from CSV with header `tau,s,re,im`.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CorrelationConfig {
    SingleModeThermal {
        omega: f64,
        #[serde(default)]
        beta: Option<f64>,
    },
    Csv {
        path: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t: f64,
    pub m: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub couplings: Vec<f64>,
}

/// Everything a command needs, validated.
#[derive(Clone, Debug)]
pub struct Setup {
    pub model: ModelSpec,
    pub quad: QuadratureConfig,
    pub order: usize,
    pub rho0: Option<CMat>,
    pub observable: Option<CMat>,
    pub couplings: Vec<f64>,
}

fn matrix(name: &str, d: usize, pairs: &[[f64; 2]]) -> Result<CMat, CliError> {
    let m = from_row_major_pairs(d, pairs).ok_or_else(|| {
        CliError::Config(format!(
            "{name} has {} entries, expected {}",
            pairs.len(),
            d * d
        ))
    })?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::Numerical(format!(
            "{name} has non-finite entries"
        )));
    }
    Ok(m)
}

fn hermitian(name: &str, d: usize, pairs: &[[f64; 2]]) -> Result<CMat, CliError> {
    let m = matrix(name, d, pairs)?;
    let r = linalg::hermiticity_residual(&m);
    if r > INPUT_TOL {
        return Err(CliError::Numerical(format!(
            "{name} is not Hermitian (residual {r:.3e})"
        )));
    }
    Ok(m)
}

fn density(name: &str, d: usize, pairs: &[[f64; 2]]) -> Result<CMat, CliError> {
    let m = hermitian(name, d, pairs)?;
    let tr = m.trace();
    if (tr.re - 1.0).abs() > INPUT_TOL || tr.im.abs() > INPUT_TOL {
        return Err(CliError::Numerical(format!("{name} has trace {tr}")));
    }
    let e = linalg::min_eigenvalue(&m);
    if e < -INPUT_TOL {
        return Err(CliError::Numerical(format!(
            "{name} has a negative eigenvalue {e:.3e}"
        )));
    }
    Ok(m)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Builds the bath; relative CSV paths resolve against `base`.
    pub fn bath(&self, base: &Path) -> Result<BathSpec, CliError> {
        Ok(match &self.bath {
            BathConfig::Exact {
                d_e,
                h_e,
                phi,
                rho_e,
            } => BathSpec::Exact(ExactBath::new(
                hermitian("bath.h_e", *d_e, h_e)?,
                hermitian("bath.phi", *d_e, phi)?,
                density("bath.rho_e", *d_e, rho_e)?,
            )?),
            BathConfig::Gaussian { correlation, mean } => {
                let two_point = match correlation {
                    CorrelationConfig::SingleModeThermal { omega, beta } => {
                        TwoPoint::SingleModeThermal {
                            omega: *omega,
                            beta: *beta,
                        }
                    }
                    CorrelationConfig::Csv { path } => {
                        TwoPoint::Sampled(SampledTwoPoint::from_csv(&base.join(path))?)
                    }
                };
                let mean = if *mean == 0.0 {
                    Mean::Zero
                } else {
                    Mean::Constant(*mean)
                };
                BathSpec::Gaussian(GaussianBath::new(two_point, mean)?)
            }
            BathConfig::BosonMode { omega, beta, n_max } => {
                BathSpec::Exact(ExactBath::boson_mode(*omega, *beta, *n_max)?)
            }
            BathConfig::DephasingQubit { omega, beta } => {
                BathSpec::Exact(ExactBath::dephasing_qubit(*omega, *beta)?)
            }
        })
    }

    /// Validates the whole configuration. `order` overrides the file value.
    pub fn setup(&self, base: &Path, order: Option<usize>) -> Result<Setup, CliError> {
        let d = self.model.d_s;
        let h_s = hermitian("model.h_s", d, &self.model.h_s)?;
        let a = hermitian("model.a", d, &self.model.a)?;
        let model = ModelSpec::new(h_s, a, self.model.g, self.bath(base)?)?;
        let order = order.unwrap_or(self.order);
        let quad = QuadratureConfig::new(TimeGrid::new(self.grid.t, self.grid.m)?, order)?;
        let rho0 = self
            .model
            .rho0
            .as_deref()
            .map(|p| density("model.rho0", d, p))
            .transpose()?;
        let observable = self
            .observable
            .as_deref()
            .map(|p| hermitian("observable", d, p))
            .transpose()?;
        let couplings = self
            .compare
            .as_ref()
            .map(|c| c.couplings.clone())
            .unwrap_or_default();
        Ok(Setup {
            model,
            quad,
            order,
            rho0,
            observable,
            couplings,
        })
    }
}
