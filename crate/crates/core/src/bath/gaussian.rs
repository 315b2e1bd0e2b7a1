use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, TclError};
use crate::linalg::c;

type PairFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;
type MeanFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Connected two-point function `C(tau, s) = <dphi(tau) dphi(s)>` of a
/// Gaussian bath, with `dphi = phi - <phi>`.
#[derive(Clone)]
pub enum TwoPoint {
    /// `phi = a + a^dag` of one mode at frequency `omega`, thermal at `beta`
    /// (vacuum when `None`).
    SingleModeThermal {
        omega: f64,
        beta: Option<f64>,
    },
    Sampled(SampledTwoPoint),
    Function(PairFn),
}

impl fmt::Debug for TwoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoPoint::SingleModeThermal { omega, beta } => {
                write!(f, "SingleModeThermal {{ omega: {omega}, beta: {beta:?} }}")
            }
            TwoPoint::Sampled(s) => write!(f, "Sampled({}x{})", s.taus.len(), s.ss.len()),
            TwoPoint::Function(_) => write!(f, "Function"),
        }
    }
}

impl TwoPoint {
    pub fn eval(&self, tau: f64, s: f64) -> Complex64 {
        match self {
            TwoPoint::SingleModeThermal { omega, beta } => {
                let nbar = beta.map_or(0.0, |b| 1.0 / (b * omega).exp_m1());
                let phase = Complex64::from_polar(1.0, -omega * (tau - s));
                phase * (nbar + 1.0) + phase.conj() * nbar
            }
            TwoPoint::Sampled(grid) => grid.eval(tau, s),
            TwoPoint::Function(f) => f(tau, s),
        }
    }

    /// Largest time the function is defined at, if bounded.
    pub fn horizon(&self) -> Option<f64> {
        match self {
            TwoPoint::Sampled(grid) => Some(grid.horizon()),
            _ => None,
        }
    }
}

/// Two-point function sampled on a rectangular `(tau, s)` grid, bilinearly
/// interpolated.
#[derive(Clone, Debug)]
pub struct SampledTwoPoint {
    taus: Vec<f64>,
    ss: Vec<f64>,
    /// Row-major over `(tau, s)`.
    values: Vec<Complex64>,
}

impl SampledTwoPoint {
    pub fn new(taus: Vec<f64>, ss: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        for (name, axis) in [("tau", &taus), ("s", &ss)] {
            if axis.len() < 2 || axis.windows(2).any(|w| w[1] <= w[0]) {
                return Err(TclError::Bath(format!(
                    "{name} axis needs at least two strictly increasing values"
                )));
            }
        }
        if values.len() != taus.len() * ss.len() {
            return Err(TclError::Bath(
                "sample count does not match the grid".into(),
            ));
        }
        Ok(SampledTwoPoint { taus, ss, values })
    }

    /// Reads `tau,s,re,im` rows (header required) covering a full grid.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)?;
        let headers = reader.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["tau", "s", "re", "im"] {
            return Err(TclError::Bath(format!(
                "expected header tau,s,re,im in {}",
                path.display()
            )));
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let parse = |k: usize| -> Result<f64> {
                rec[k].parse().map_err(|_| {
                    TclError::Bath(format!("bad number '{}' in {}", &rec[k], path.display()))
                })
            };
            rows.push((parse(0)?, parse(1)?, c(parse(2)?, parse(3)?)));
        }
        let mut taus: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let mut ss: Vec<f64> = rows.iter().map(|r| r.1).collect();
        for axis in [&mut taus, &mut ss] {
            axis.sort_by(f64::total_cmp);
            axis.dedup();
        }
        let mut values = vec![None; taus.len() * ss.len()];
        for (tau, s, v) in rows {
            let i = taus
                .binary_search_by(|x| x.total_cmp(&tau))
                .expect("present");
            let j = ss.binary_search_by(|x| x.total_cmp(&s)).expect("present");
            if values[i * ss.len() + j].replace(v).is_some() {
                return Err(TclError::Bath(format!("duplicate sample at ({tau}, {s})")));
            }
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| TclError::Bath("samples do not cover a full rectangular grid".into()))?;
        SampledTwoPoint::new(taus, ss, values)
    }

    fn horizon(&self) -> f64 {
        self.taus.last().unwrap().min(*self.ss.last().unwrap())
    }

    fn covers(&self, t0: f64, t1: f64) -> bool {
        let lo = self.taus[0].max(self.ss[0]);
        t0 >= lo - 1e-12 && t1 <= self.horizon() + 1e-12
    }

    fn locate(axis: &[f64], x: f64) -> (usize, f64) {
        let k = axis.partition_point(|&a| a <= x).clamp(1, axis.len() - 1) - 1;
        let frac = ((x - axis[k]) / (axis[k + 1] - axis[k])).clamp(0.0, 1.0);
        (k, frac)
    }

    fn eval(&self, tau: f64, s: f64) -> Complex64 {
        let (i, fx) = Self::locate(&self.taus, tau);
        let (j, fy) = Self::locate(&self.ss, s);
        let n = self.ss.len();
        let v = |a: usize, b: usize| self.values[a * n + b];
        v(i, j) * (1.0 - fx) * (1.0 - fy)
            + v(i + 1, j) * fx * (1.0 - fy)
            + v(i, j + 1) * (1.0 - fx) * fy
            + v(i + 1, j + 1) * fx * fy
    }
}

/// Mean `<phi(tau)>` of a Gaussian bath.
#[derive(Clone)]
pub enum Mean {
    Zero,
    Constant(f64),
    Function(MeanFn),
}

impl fmt::Debug for Mean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mean::Zero => write!(f, "Zero"),
            Mean::Constant(m) => write!(f, "Constant({m})"),
            Mean::Function(_) => write!(f, "Function"),
        }
    }
}

impl Mean {
    pub fn eval(&self, tau: f64) -> f64 {
        match self {
            Mean::Zero => 0.0,
            Mean::Constant(m) => *m,
            Mean::Function(f) => f(tau),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Mean::Zero) || matches!(self, Mean::Constant(m) if *m == 0.0)
    }
}

/// Gaussian bath described by its connected two-point function and mean.
/// The coupling is kept as a separate factor: `C -> g^2 C`, `m -> g m`.
#[derive(Clone, Debug)]
pub struct GaussianBath {
    two_point: TwoPoint,
    mean: Mean,
    coupling: f64,
}

/// Sample points for the hermiticity and stationarity checks.
const PROBES: [f64; 5] = [0.0, 0.37, 1.1, 2.3, 4.9];

impl GaussianBath {
    pub fn new(two_point: TwoPoint, mean: Mean) -> Result<Self> {
        let b = GaussianBath {
            two_point,
            mean,
            coupling: 1.0,
        };
        let probes: Vec<f64> = match b.two_point.horizon() {
            Some(h) => PROBES.iter().map(|p| p / 4.9 * h).collect(),
            None => PROBES.to_vec(),
        };
        for &x in &probes {
            for &y in &probes {
                let r = (b.two_point.eval(x, y) - b.two_point.eval(y, x).conj()).norm();
                if r > 1e-10 {
                    return Err(TclError::Bath(format!(
                        "C({x}, {y}) != conj C({y}, {x}) (residual {r:.3e})"
                    )));
                }
            }
        }
        Ok(b)
    }

    pub fn single_mode_thermal(omega: f64, beta: Option<f64>) -> Result<Self> {
        if beta.is_some_and(|b| b.is_nan() || b <= 0.0) {
            return Err(TclError::Bath(
                "inverse temperature must be positive".into(),
            ));
        }
        GaussianBath::new(TwoPoint::SingleModeThermal { omega, beta }, Mean::Zero)
    }

    pub fn with_coupling(&self, g: f64) -> GaussianBath {
        GaussianBath {
            coupling: self.coupling * g,
            ..self.clone()
        }
    }

    /// Scaled connected two-point function.
    pub fn correlation(&self, tau: f64, s: f64) -> Complex64 {
        self.two_point.eval(tau, s) * (self.coupling * self.coupling)
    }

    /// Scaled mean.
    pub fn mean(&self, tau: f64) -> f64 {
        self.mean.eval(tau) * self.coupling
    }

    pub fn has_mean(&self) -> bool {
        !self.mean.is_zero()
    }

    pub fn covers(&self, t0: f64, t1: f64) -> bool {
        match &self.two_point {
            TwoPoint::Sampled(s) => s.covers(t0, t1),
            _ => true,
        }
    }

    /// Largest deviation from time-translation invariance over the probes.
    pub fn stationarity_residual(&self) -> f64 {
        let shift = match self.two_point.horizon() {
            Some(h) => h / 7.0,
            None => 0.83,
        };
        let scale = self.two_point.horizon().map_or(1.0, |h| h / 4.9 * 0.5);
        let mut r: f64 = 0.0;
        for &x in &PROBES {
            for &y in &PROBES {
                let (x, y) = (x * scale, y * scale);
                r = r.max((self.correlation(x + shift, y + shift) - self.correlation(x, y)).norm());
            }
            r = r.max((self.mean(x * scale + shift) - self.mean(x * scale)).abs());
        }
        r
    }

    /// `<phi(t_1) ... phi(t_n)>` for times listed in operator order,
    /// expanding the mean over subsets of centred operators.
    pub fn moment(&self, times: &[f64]) -> Complex64 {
        let corr = |a: f64, b: f64| self.correlation(a, b);
        if !self.has_mean() {
            return isserlis(&corr, times);
        }
        let n = times.len();
        let means: Vec<f64> = times.iter().map(|&t| self.mean(t)).collect();
        let mut total = c(0.0, 0.0);
        let mut centred = Vec::with_capacity(n);
        for mask in 0u32..1 << n {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            centred.clear();
            let mut weight = 1.0;
            for k in 0..n {
                if mask >> k & 1 == 1 {
                    centred.push(times[k]);
                } else {
                    weight *= means[k];
                }
            }
            if weight != 0.0 {
                total += isserlis(&corr, &centred) * weight;
            }
        }
        total
    }
}

/// Sum over perfect matchings of `prod C(t_a, t_b)`, each pair taken in
/// operator order. Odd lengths give zero; the empty product is one.
pub fn isserlis_correlation<F: Fn(f64, f64) -> Complex64>(
    two_point: F,
    ordered_ops: &[f64],
) -> Complex64 {
    isserlis(&two_point, ordered_ops)
}

fn isserlis<F: Fn(f64, f64) -> Complex64>(corr: &F, times: &[f64]) -> Complex64 {
    if times.len() % 2 == 1 {
        return c(0.0, 0.0);
    }
    let mut idx: Vec<usize> = (0..times.len()).collect();
    matchings(corr, times, &mut idx)
}

fn matchings<F: Fn(f64, f64) -> Complex64>(
    corr: &F,
    times: &[f64],
    rest: &mut Vec<usize>,
) -> Complex64 {
    if rest.is_empty() {
        return c(1.0, 0.0);
    }
    let first = rest.remove(0);
    let mut total = c(0.0, 0.0);
    for k in 0..rest.len() {
        let partner = rest.remove(k);
        total += corr(times[first], times[partner]) * matchings(corr, times, rest);
        rest.insert(k, partner);
    }
    rest.insert(0, first);
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c12(a: f64, b: f64) -> Complex64 {
        c(a * 10.0 + b, a - b)
    }

    #[test]
    fn pair_and_quartet() {
        assert_eq!(isserlis_correlation(c12, &[1.0, 2.0]), c12(1.0, 2.0));
        let t = [1.0, 2.0, 3.0, 4.0];
        let expected = c12(1.0, 2.0) * c12(3.0, 4.0)
            + c12(1.0, 3.0) * c12(2.0, 4.0)
            + c12(1.0, 4.0) * c12(2.0, 3.0);
        assert_eq!(isserlis_correlation(c12, &t), expected);
        assert_eq!(isserlis_correlation(c12, &[1.0, 2.0, 3.0]), c(0.0, 0.0));
        assert_eq!(isserlis_correlation(c12, &[]), c(1.0, 0.0));
    }

    #[test]
    fn matching_count() {
        let ones = |_: f64, _: f64| c(1.0, 0.0);
        assert_eq!(isserlis_correlation(ones, &[0.0; 6]).re, 15.0);
        assert_eq!(isserlis_correlation(ones, &[0.0; 8]).re, 105.0);
    }

    #[test]
    fn thermal_mode_correlator() {
        let b = GaussianBath::single_mode_thermal(1.0, Some(2.0)).unwrap();
        let nbar = 1.0 / (2.0f64.exp() - 1.0);
        assert!((b.correlation(0.0, 0.0).re - (2.0 * nbar + 1.0)).abs() < 1e-14);
        assert!(b.stationarity_residual() < 1e-12);
        let g = b.with_coupling(0.5);
        assert!((g.correlation(0.3, 0.1) - b.correlation(0.3, 0.1) * 0.25).norm() < 1e-15);
    }

    #[test]
    fn non_hermitian_two_point_rejected() {
        let f: PairFn = Arc::new(|a, b| c(a + b, 1.0));
        assert!(GaussianBath::new(TwoPoint::Function(f), Mean::Zero).is_err());
    }

    #[test]
    fn mean_expansion_on_constant_shift() {
        // phi = m + dphi with deterministic dphi = 0: moments are m^n.
        let zero: PairFn = Arc::new(|_, _| c(0.0, 0.0));
        let b = GaussianBath::new(TwoPoint::Function(zero), Mean::Constant(0.7)).unwrap();
        assert!((b.moment(&[0.1, 0.2, 0.3]).re - 0.343).abs() < 1e-15);
    }

    #[test]
    fn sampled_bilinear() {
        let taus = vec![0.0, 1.0, 2.0];
        let ss = vec![0.0, 1.0, 2.0];
        let values: Vec<Complex64> = taus
            .iter()
            .flat_map(|&t| ss.iter().map(move |&s| c(t + 2.0 * s, t - s)))
            .collect();
        let grid = SampledTwoPoint::new(taus, ss, values).unwrap();
        let z = grid.eval(0.25, 1.5);
        assert!((z - c(3.25, -1.25)).norm() < 1e-14);
        assert!(grid.covers(0.0, 2.0));
        assert!(!grid.covers(0.0, 2.5));
    }

    #[test]
    fn sampled_from_csv() {
        let dir = std::env::temp_dir().join(format!("tclgen-sampled-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.csv");
        let mut text = String::from("tau,s,re,im\n");
        for t in [0.0_f64, 1.0] {
            for s in [0.0, 1.0] {
                text.push_str(&format!("{t},{s},{},{}\n", (t - s).cos(), -(t - s).sin()));
            }
        }
        std::fs::write(&path, text).unwrap();
        let grid = SampledTwoPoint::from_csv(&path).unwrap();
        assert!((grid.eval(1.0, 0.0) - c(1f64.cos(), -1f64.sin())).norm() < 1e-15);
        std::fs::write(&path, "tau,s,re,im\n0,0,1,0\n1,1,1,0\n").unwrap();
        assert!(SampledTwoPoint::from_csv(&path).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
