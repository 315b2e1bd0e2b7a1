//! Nested ordered quadrature of clustered terms.
//!
//! Every slot variable runs over the grid nodes of `[0, t_i]` with the
//! trapezoid weights of that interval. Consecutive slots of one cluster are
//! ordered (descending times for states, ascending for observables) with a
//! factor `1/2` when two free variables share a node. The slot frozen at
//! `t_i` carries weight one and no tie factor against its neighbour. With this
//! rule a product of independent cluster integrals splits exactly into the
//! ordered pieces of the cumulant forms, so different assemblies of the same
//! generator agree to round-off rather than to quadrature accuracy.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{build_system_superops, order_weight, ModelSpec, QuadratureConfig, SystemSuperops};
use crate::bath::{ChainState, CorrelationKind, GridCorrelator};
use crate::error::{Result, TclError};
use crate::linalg::{c, CMat};
use crate::terms::{
    generator_terms, momentum_derivative_terms, momentum_terms, vankampen_terms, ClusteredTerm,
    Kind, Sign, MAX_VANKAMPEN_ORDER,
};

/// How the generator orders are assembled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorPath {
    /// Every term of `L_n` integrated on its own.
    TermExpansion,
    /// Only `mu_k` and `d mu_k / dt` are integrated; `L_n` follows from
    /// `L_n = d mu_n / dt - sum_k L_{n-k} mu_k` as matrix products.
    #[default]
    MatrixRecursion,
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    sign: Sign,
    pinned: bool,
    cluster_end: bool,
}

/// Evaluates terms of one kind for one model on one grid.
pub struct Evaluator {
    kind: Kind,
    quad: QuadratureConfig,
    ops: SystemSuperops,
    corr: GridCorrelator,
    d2: usize,
}

impl Evaluator {
    pub fn new(model: &ModelSpec, quad: &QuadratureConfig, kind: Kind) -> Result<Self> {
        let ops = build_system_superops(model, &quad.grid);
        let corr = GridCorrelator::new(
            &model.coupled_bath(),
            &quad.grid.times(),
            CorrelationKind::from(kind),
        )?;
        let d = model.dim();
        Ok(Evaluator {
            kind,
            quad: *quad,
            ops,
            corr,
            d2: d * d,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn superops(&self) -> &SystemSuperops {
        &self.ops
    }

    fn check(&self, n: usize, i: usize) -> Result<()> {
        if n > self.quad.max_order {
            return Err(TclError::Order {
                order: n,
                reason: "above the quadrature max_order",
            });
        }
        self.quad.grid.check_index(i)
    }

    fn identity(&self) -> CMat {
        CMat::identity(self.d2, self.d2)
    }

    fn zeros(&self) -> CMat {
        CMat::zeros(self.d2, self.d2)
    }

    /// `coeff * integral of A^{s_1} .. A^{s_n} prod D` at `t_i`.
    pub fn evaluate_term(&self, term: &ClusteredTerm, i: usize) -> Result<CMat> {
        self.check(term.order(), i)?;
        if term.kind() != self.kind {
            return Err(TclError::InvalidTerm(format!(
                "{} term given to a {} evaluator",
                term.kind().name(),
                self.kind.name()
            )));
        }
        if term.order() == 0 {
            return Ok(self.identity() * c(term.coefficient() as f64, 0.0));
        }
        if term.is_null() {
            return Err(TclError::InvalidTerm(format!(
                "{} {} is a null term",
                term.pattern(),
                term.clustering()
            )));
        }
        let pinned = term.pinned_slot();
        let mut plan: Vec<Slot> = term
            .pattern()
            .signs()
            .iter()
            .enumerate()
            .map(|(k, &sign)| Slot {
                sign,
                pinned: pinned == Some(k),
                cluster_end: false,
            })
            .collect();
        for r in term.clustering().ranges() {
            plan[r.end - 1].cluster_end = true;
        }
        let mut acc = self.zeros();
        self.walk(
            &plan,
            0,
            i,
            None,
            1.0,
            c(1.0, 0.0),
            &self.identity(),
            &self.corr.start(),
            &mut acc,
        );
        Ok(acc * c(term.coefficient() as f64, 0.0))
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        plan: &[Slot],
        p: usize,
        i: usize,
        prev: Option<(usize, bool)>,
        weight: f64,
        dprod: Complex64,
        prefix: &CMat,
        chain: &ChainState,
        acc: &mut CMat,
    ) {
        let slot = plan[p];
        let bath = slot.sign.flip();
        let (lo, hi) = if slot.pinned {
            (i, i)
        } else {
            match (self.kind, prev) {
                (Kind::Schrodinger, Some((j, _))) => (0, j),
                (Kind::Adjoint, Some((j, _))) => (j, i),
                (_, None) => (0, i),
            }
        };
        let last = p + 1 == plan.len();
        let mut tail = if last { Some(self.zeros()) } else { None };
        for j in lo..=hi {
            let wj = if slot.pinned {
                1.0
            } else {
                self.quad.grid.trapezoid_weight(j, i)
            };
            let tie = match prev {
                Some((pj, prev_pinned)) if pj == j && !prev_pinned && !slot.pinned => 0.5,
                _ => 1.0,
            };
            let w = weight * wj * tie;
            if w == 0.0 {
                continue;
            }
            let a = self.ops.get(slot.sign, j);
            if let Some(tail) = tail.as_mut() {
                let coef = dprod * self.corr.close_with(chain, bath, j) * w;
                if coef != c(0.0, 0.0) {
                    tail.zip_apply(a, |t, x| *t += coef * x);
                }
            } else if slot.cluster_end {
                let d = dprod * self.corr.close_with(chain, bath, j);
                if d == c(0.0, 0.0) {
                    continue;
                }
                self.walk(
                    plan,
                    p + 1,
                    i,
                    None,
                    w,
                    d,
                    &(prefix * a),
                    &self.corr.start(),
                    acc,
                );
            } else {
                let next = self.corr.step(chain, bath, j);
                self.walk(
                    plan,
                    p + 1,
                    i,
                    Some((j, slot.pinned)),
                    w,
                    dprod,
                    &(prefix * a),
                    &next,
                    acc,
                );
            }
        }
        if let Some(tail) = tail {
            acc.gemm(c(1.0, 0.0), prefix, &tail, c(1.0, 0.0));
        }
    }

    fn sum_terms(&self, terms: impl Iterator<Item = ClusteredTerm>, i: usize) -> Result<CMat> {
        let mut acc = self.zeros();
        for t in terms {
            acc += self.evaluate_term(&t, i)?;
        }
        Ok(acc)
    }

    /// Integrated momentum `mu_n(t_i)`.
    pub fn evaluate_mu(&self, n: usize, i: usize) -> Result<CMat> {
        self.check(n, i)?;
        self.sum_terms(momentum_terms(n, self.kind)?.iter(), i)
    }

    /// `d mu_n / dt` at `t_i`.
    pub fn evaluate_mu_dot(&self, n: usize, i: usize) -> Result<CMat> {
        self.check(n, i)?;
        self.sum_terms(momentum_derivative_terms(n, self.kind)?.iter(), i)
    }

    /// `L_1(t_i) .. L_n(t_i)`, without the `(-+i)^n` weights.
    pub fn generator_orders(&self, n: usize, i: usize, path: GeneratorPath) -> Result<Vec<CMat>> {
        if n == 0 {
            return Err(TclError::Order {
                order: 0,
                reason: "not positive",
            });
        }
        self.check(n, i)?;
        match path {
            GeneratorPath::TermExpansion => (1..=n)
                .map(|k| self.sum_terms(generator_terms(k, self.kind)?.iter(), i))
                .collect(),
            GeneratorPath::MatrixRecursion => {
                let mus: Vec<CMat> = (1..n)
                    .map(|k| self.evaluate_mu(k, i))
                    .collect::<Result<_>>()?;
                let mut orders: Vec<CMat> = Vec::with_capacity(n);
                for k in 1..=n {
                    let mut l = self.evaluate_mu_dot(k, i)?;
                    for j in 1..k {
                        l.gemm(c(-1.0, 0.0), &orders[k - j - 1], &mus[j - 1], c(1.0, 0.0));
                    }
                    orders.push(l);
                }
                Ok(orders)
            }
        }
    }

    /// `L_n(t_i)` alone.
    pub fn generator_order(&self, n: usize, i: usize, path: GeneratorPath) -> Result<CMat> {
        Ok(self.generator_orders(n, i, path)?.pop().expect("n >= 1"))
    }

    /// Truncated generator `sum_{n <= N} (-i)^n L_n(t_i)` (states) or
    /// `sum_{n <= N} i^n L~_n(t_i)` (observables).
    pub fn assemble_generator(&self, n: usize, i: usize, path: GeneratorPath) -> Result<CMat> {
        let orders = self.generator_orders(n, i, path)?;
        let mut acc = self.zeros();
        for (k, l) in orders.iter().enumerate() {
            acc += l * order_weight(k + 1, self.kind);
        }
        Ok(acc)
    }

    /// Truncated generator on every grid node, computed in parallel.
    pub fn generator_table(&self, n: usize, path: GeneratorPath) -> Result<Vec<CMat>> {
        (0..self.quad.grid.len())
            .into_par_iter()
            .map(|i| self.assemble_generator(n, i, path))
            .collect()
    }

    /// The tabulated ordered-cumulant form of `L_n(t_i)` (states only).
    pub fn evaluate_vankampen(&self, n: usize, i: usize) -> Result<CMat> {
        if self.kind != Kind::Schrodinger {
            return Err(TclError::Domain(
                "the cumulant tables describe the state generator only".into(),
            ));
        }
        if n > MAX_VANKAMPEN_ORDER {
            return Err(TclError::Order {
                order: n,
                reason: "Van Kampen lists are tabulated up to order 4 only",
            });
        }
        self.check(n, i)?;
        let terms = vankampen_terms(n)?;
        let grid = &self.quad.grid;
        let mut acc = self.zeros();
        // labels[0] = t_i, labels[k] = tau_k with tau_1 >= tau_2 >= ..
        let mut labels = vec![i; n];
        let visit = |labels: &[usize], weight: f64, acc: &mut CMat| {
            for term in &terms {
                let mut prod = self.identity();
                for block in &term.blocks {
                    let idx: Vec<usize> = block.iter().map(|&l| labels[l]).collect();
                    prod *= self.block_superop(&idx);
                }
                *acc += prod * c(weight * term.coefficient as f64, 0.0);
            }
        };
        enumerate_simplex(n - 1, i, grid, &mut labels, 1, 1.0, &mut |l, w| {
            visit(l, w, &mut acc)
        });
        Ok(acc)
    }

    /// `sum over signs of A^{s_1}(j_1) .. A^{s_k}(j_k) D(-s; j)` for one block.
    fn block_superop(&self, idx: &[usize]) -> CMat {
        let k = idx.len();
        let mut acc = self.zeros();
        for mask in 0u32..1 << k {
            let signs: Vec<Sign> = (0..k)
                .map(|b| {
                    if mask >> b & 1 == 1 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            let path: Vec<(Sign, usize)> =
                signs.iter().zip(idx).map(|(s, &j)| (s.flip(), j)).collect();
            let d = self.corr.value(&path);
            if d == c(0.0, 0.0) {
                continue;
            }
            let mut prod = self.identity();
            for (s, &j) in signs.iter().zip(idx) {
                prod *= self.ops.get(*s, j);
            }
            acc += prod * d;
        }
        acc
    }
}

/// Visits `labels[k..=vars]` over `t_i >= tau_1 >= .. >= tau_vars` with
/// trapezoid weights and `1/2` per tie between free variables.
fn enumerate_simplex(
    vars: usize,
    i: usize,
    grid: &super::TimeGrid,
    labels: &mut Vec<usize>,
    k: usize,
    weight: f64,
    f: &mut dyn FnMut(&[usize], f64),
) {
    if k > vars {
        f(labels, weight);
        return;
    }
    let hi = labels[k - 1];
    for j in 0..=hi {
        let tie = if k > 1 && j == labels[k - 1] {
            0.5
        } else {
            1.0
        };
        let w = weight * grid.trapezoid_weight(j, i) * tie;
        if w == 0.0 {
            continue;
        }
        labels[k] = j;
        enumerate_simplex(vars, i, grid, labels, k + 1, w, f);
    }
}
