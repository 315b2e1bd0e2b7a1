//! Generation of momenta, inverse-map terms and generator terms, both by the
//! recursions and by the constructive diagram procedure.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use super::term::{ClusteredTerm, Clustering, Kind, Sign, SignPattern, TermPolynomial};
use crate::error::{Result, TclError};

/// Orders above this would overflow the bit masks used for enumeration.
pub const MAX_SYMBOLIC_ORDER: usize = 24;

type Memo = LazyLock<RwLock<HashMap<(Kind, usize), TermPolynomial>>>;

static INVERSE_MEMO: Memo = LazyLock::new(|| RwLock::new(HashMap::new()));
static GENERATOR_MEMO: Memo = LazyLock::new(|| RwLock::new(HashMap::new()));

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(TclError::Order {
            order: 0,
            reason: "not positive",
        });
    }
    if n > MAX_SYMBOLIC_ORDER {
        return Err(TclError::Order {
            order: n,
            reason: "above the supported symbolic range",
        });
    }
    Ok(())
}

/// Every sign pattern of length `n` allowed in a single cluster of `kind`:
/// the guarded end (first slot for states, last for observables) is
/// `Minus`, the other `n - 1` slots are free.
fn single_cluster_patterns(n: usize, kind: Kind) -> Vec<SignPattern> {
    let guarded = match kind {
        Kind::Schrodinger => 0,
        Kind::Adjoint => n - 1,
    };
    (0..1u64 << (n - 1))
        .map(|bits| {
            let mut free = 0;
            let signs = (0..n)
                .map(|slot| {
                    if slot == guarded {
                        Sign::Minus
                    } else {
                        let s = if bits >> free & 1 == 1 {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        };
                        free += 1;
                        s
                    }
                })
                .collect();
            SignPattern::new(signs).expect("n >= 1")
        })
        .collect()
}

fn single_cluster(n: usize, kind: Kind, pinned: bool) -> TermPolynomial {
    let mut p = TermPolynomial::new(n, kind);
    for pattern in single_cluster_patterns(n, kind) {
        let t = ClusteredTerm::new(pattern, Clustering::connected(n), 1, pinned, kind)
            .expect("consistent single cluster");
        let kept = p.insert(t).expect("same order and kind");
        debug_assert!(kept);
    }
    p
}

/// Single-cluster terms of the n-th integrated momentum: `2^(n-1)` sign
/// patterns, coefficient `+1`.
pub fn momentum_terms(n: usize, kind: Kind) -> Result<TermPolynomial> {
    check_order(n)?;
    Ok(single_cluster(n, kind, false))
}

/// Same terms as [`momentum_terms`], with the latest time frozen at `t`.
pub fn momentum_derivative_terms(n: usize, kind: Kind) -> Result<TermPolynomial> {
    check_order(n)?;
    Ok(single_cluster(n, kind, true))
}

/// Inserts every term of `src`, failing if the null rule would discard one.
/// The recursions can never produce a vanishing term; this guards that.
fn insert_all_guarded(dst: &mut TermPolynomial, src: &TermPolynomial) -> Result<()> {
    for t in src.iter() {
        if !dst.insert(t.clone())? {
            return Err(TclError::InvalidTerm(format!(
                "recursion produced a null term {} {}",
                t.pattern(),
                t.clustering()
            )));
        }
    }
    Ok(())
}

/// Terms of the order-n contribution to the inverse map:
/// `M_0 = 1`, `M_n = -sum_{k=1..n} mu_k M_{n-k}`.
pub fn inverse_map_terms(n: usize, kind: Kind) -> Result<TermPolynomial> {
    if n == 0 {
        return Ok(TermPolynomial::identity(kind));
    }
    check_order(n)?;
    if let Some(p) = INVERSE_MEMO.read().expect("memo lock").get(&(kind, n)) {
        return Ok(p.clone());
    }
    let mut out = TermPolynomial::new(n, kind);
    for k in 1..=n {
        let mu = momentum_terms(k, kind)?;
        let rest = inverse_map_terms(n - k, kind)?;
        insert_all_guarded(&mut out, &mu.product(&rest)?.scaled(-1))?;
    }
    INVERSE_MEMO
        .write()
        .expect("memo lock")
        .insert((kind, n), out.clone());
    Ok(out)
}

/// Terms of the n-th generator order:
/// `L_n = d/dt mu_n - sum_{k=1..n-1} L_{n-k} mu_k`.
pub fn generator_terms(n: usize, kind: Kind) -> Result<TermPolynomial> {
    check_order(n)?;
    if let Some(p) = GENERATOR_MEMO.read().expect("memo lock").get(&(kind, n)) {
        return Ok(p.clone());
    }
    let mut out = TermPolynomial::new(n, kind);
    insert_all_guarded(&mut out, &momentum_derivative_terms(n, kind)?)?;
    for k in 1..n {
        let lower = generator_terms(n - k, kind)?;
        let mu = momentum_terms(k, kind)?;
        insert_all_guarded(&mut out, &lower.product(&mu)?.scaled(-1))?;
    }
    GENERATOR_MEMO
        .write()
        .expect("memo lock")
        .insert((kind, n), out.clone());
    Ok(out)
}

/// The n-th generator order built by the diagram procedure instead of the
/// recursion:
///
/// 1. start from the pinned, fully connected chain of `n` black circles;
/// 2. remove `p` of the `n - 1` links in every possible way, with a factor
///    `(-1)^p`;
/// 3. turn any subset of circles `2..n` white;
///
/// and let the canonical container drop diagrams with a white circle leading
/// a cluster.
pub fn diagram_generator_terms(n: usize) -> Result<TermPolynomial> {
    check_order(n)?;
    let kind = Kind::Schrodinger;
    let mut out = TermPolynomial::new(n, kind);
    let links = n - 1;
    for cuts in 0..1u64 << links {
        let removed = cuts.count_ones();
        let coefficient = if removed % 2 == 0 { 1 } else { -1 };
        let clustering = Clustering::from_cuts(n, cuts);
        for flips in 0..1u64 << links {
            let signs = (0..n)
                .map(|slot| {
                    if slot > 0 && flips >> (slot - 1) & 1 == 1 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            let term = ClusteredTerm::new(
                SignPattern::new(signs)?,
                clustering.clone(),
                coefficient,
                true,
                kind,
            )?;
            out.insert(term)?;
        }
    }
    Ok(out)
}

/// Brute-force expansion of the inverse map as a signed sum over
/// compositions: `M_n = sum_q (-1)^q sum_{k_1+..+k_q=n} mu_{k_1} .. mu_{k_q}`.
/// Used to cross-check the recursion.
pub fn inverse_map_terms_by_compositions(n: usize, kind: Kind) -> Result<TermPolynomial> {
    if n == 0 {
        return Ok(TermPolynomial::identity(kind));
    }
    check_order(n)?;
    let mut out = TermPolynomial::new(n, kind);
    for cuts in 0..1u64 << (n - 1) {
        let clustering = Clustering::from_cuts(n, cuts);
        let sign = if clustering.len() % 2 == 0 { 1 } else { -1 };
        let mut acc = TermPolynomial::identity(kind);
        for &k in clustering.parts() {
            acc = acc.product(&momentum_terms(k, kind)?)?;
        }
        out.add_assign(&acc.scaled(sign))?;
    }
    Ok(out)
}
