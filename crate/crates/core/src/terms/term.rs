//! Term data model: sign patterns, clusterings, single terms and the
//! canonical polynomial container.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use crate::error::{Result, TclError};

/// Sign of a system superoperator slot: `Minus` is the commutator `A^-`,
/// `Plus` the anticommutator `A^+`. The bath index of the same slot always
/// carries the opposite sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Minus),
            '+' => Some(Sign::Plus),
            _ => None,
        }
    }

    /// `+1.0` for `Plus`, `-1.0` for `Minus`.
    pub fn factor(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Which expansion a term belongs to: the master equation for states or the
/// adjoint equation for observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Schrodinger,
    Adjoint,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Schrodinger => "schrodinger",
            Kind::Adjoint => "adjoint",
        }
    }
}

/// System signs of the slots of a term, left to right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignPattern(Vec<Sign>);

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(TclError::InvalidTerm(
                "sign pattern must have at least one slot".into(),
            ));
        }
        Ok(SignPattern(signs))
    }

    /// The zero-length pattern of the identity term.
    pub(crate) fn empty() -> Self {
        SignPattern(Vec::new())
    }

    /// Parses a string such as `"-+-"`.
    pub fn parse(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| Sign::from_symbol(c).ok_or_else(|| TclError::Parse(format!("bad sign '{c}'"))))
            .collect::<Result<Vec<_>>>()?;
        SignPattern::new(signs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    /// Bath indices, each the opposite of the system index.
    pub fn bath_signs(&self) -> Vec<Sign> {
        self.0.iter().map(|s| s.flip()).collect()
    }

    pub fn concat(&self, other: &SignPattern) -> SignPattern {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SignPattern(v)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// A composition of the term order: contiguous cluster sizes laid left to
/// right over the slots.
///
/// Ordered by number of clusters first, then lexicographically, so that
/// `[3] < [1,2] < [2,1] < [1,1,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clustering(Vec<usize>);

impl Clustering {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(TclError::InvalidTerm(format!(
                "cluster sizes must be positive: {parts:?}"
            )));
        }
        Ok(Clustering(parts))
    }

    pub(crate) fn empty() -> Self {
        Clustering(Vec::new())
    }

    /// One cluster spanning all `n` slots.
    pub fn connected(n: usize) -> Self {
        Clustering(vec![n])
    }

    /// Builds the composition induced by removing connections from a chain
    /// of `n` slots. Bit `k` of `cuts` set means the link between slot `k`
    /// and slot `k + 1` is removed.
    pub fn from_cuts(n: usize, cuts: u64) -> Self {
        let mut parts = Vec::new();
        let mut size = 1;
        for k in 0..n.saturating_sub(1) {
            if cuts >> k & 1 == 1 {
                parts.push(size);
                size = 1;
            } else {
                size += 1;
            }
        }
        if n > 0 {
            parts.push(size);
        }
        Clustering(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Total number of slots covered.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of clusters.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Slot ranges of the clusters.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.0
            .iter()
            .map(|&size| {
                let r = start..start + size;
                start += size;
                r
            })
            .collect()
    }

    pub fn concat(&self, other: &Clustering) -> Clustering {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Clustering(v)
    }

    pub fn reversed(&self) -> Clustering {
        Clustering(self.0.iter().rev().copied().collect())
    }
}

impl Ord for Clustering {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Clustering {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Clustering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Canonical identity of a term, coefficient excluded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub order: usize,
    pub kind: Kind,
    pub pinned: bool,
    pub pattern: SignPattern,
    pub clustering: Clustering,
}

/// One summand of a momentum, of the inverse map or of a generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusteredTerm {
    key: TermKey,
    coefficient: i64,
}

impl ClusteredTerm {
    /// Builds a term, checking the structural invariants. Terms that vanish
    /// by the null rule are constructible; see [`ClusteredTerm::is_null`].
    pub fn new(
        pattern: SignPattern,
        clustering: Clustering,
        coefficient: i64,
        pinned: bool,
        kind: Kind,
    ) -> Result<Self> {
        if clustering.order() != pattern.len() {
            return Err(TclError::InvalidTerm(format!(
                "clustering {clustering} does not cover {} slots",
                pattern.len()
            )));
        }
        if pattern.is_empty() && pinned {
            return Err(TclError::InvalidTerm(
                "identity term cannot be pinned".into(),
            ));
        }
        Ok(ClusteredTerm {
            key: TermKey {
                order: pattern.len(),
                kind,
                pinned,
                pattern,
                clustering,
            },
            coefficient,
        })
    }

    /// The order-zero unit term.
    pub fn identity(kind: Kind) -> Self {
        ClusteredTerm {
            key: TermKey {
                order: 0,
                kind,
                pinned: false,
                pattern: SignPattern::empty(),
                clustering: Clustering::empty(),
            },
            coefficient: 1,
        }
    }

    pub(crate) fn from_key(key: TermKey, coefficient: i64) -> Self {
        ClusteredTerm { key, coefficient }
    }

    pub fn key(&self) -> &TermKey {
        &self.key
    }

    pub fn order(&self) -> usize {
        self.key.order
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.key.pattern
    }

    pub fn clustering(&self) -> &Clustering {
        &self.key.clustering
    }

    pub fn coefficient(&self) -> i64 {
        self.coefficient
    }

    pub fn pinned(&self) -> bool {
        self.key.pinned
    }

    pub fn kind(&self) -> Kind {
        self.key.kind
    }

    pub fn cluster_count(&self) -> usize {
        self.key.clustering.len()
    }

    pub fn with_coefficient(&self, coefficient: i64) -> Self {
        ClusteredTerm {
            key: self.key.clone(),
            coefficient,
        }
    }

    /// Slot that carries the fixed time `t`, if any. For the master equation
    /// it is the first slot; for the adjoint equation it is the last slot of
    /// the first cluster, the latest time of an anti-chronological chain.
    pub fn pinned_slot(&self) -> Option<usize> {
        if !self.key.pinned {
            return None;
        }
        match self.key.kind {
            Kind::Schrodinger => Some(0),
            Kind::Adjoint => Some(self.key.clustering.parts()[0] - 1),
        }
    }

    /// True when some cluster has a `Plus` at the position the null rule
    /// requires to be `Minus` (first slot of a cluster for states, last slot
    /// for observables). Such terms vanish identically.
    pub fn is_null(&self) -> bool {
        let signs = self.key.pattern.signs();
        self.key.clustering.ranges().into_iter().any(|r| {
            let guarded = match self.key.kind {
                Kind::Schrodinger => r.start,
                Kind::Adjoint => r.end - 1,
            };
            signs[guarded] == Sign::Plus
        })
    }

    /// Concatenation: `self`'s slots first, then `other`'s; clusterings
    /// concatenate and coefficients multiply.
    pub fn product(&self, other: &ClusteredTerm) -> Result<ClusteredTerm> {
        if self.kind() != other.kind() {
            return Err(TclError::InvalidTerm(
                "cannot multiply terms of different kinds".into(),
            ));
        }
        if other.pinned() && self.order() > 0 {
            return Err(TclError::InvalidTerm(
                "a pinned factor must stand leftmost in a product".into(),
            ));
        }
        Ok(ClusteredTerm {
            key: TermKey {
                order: self.order() + other.order(),
                kind: self.kind(),
                pinned: self.pinned() || other.pinned(),
                pattern: self.key.pattern.concat(&other.key.pattern),
                clustering: self.key.clustering.concat(&other.key.clustering),
            },
            coefficient: self.coefficient * other.coefficient,
        })
    }
}

/// A canonical sum of terms sharing one order and kind.
///
/// Null terms are discarded on insertion and coefficients that cancel to
/// zero are purged, so equality of polynomials is map equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermPolynomial {
    order: usize,
    kind: Kind,
    terms: BTreeMap<TermKey, i64>,
}

impl TermPolynomial {
    pub fn new(order: usize, kind: Kind) -> Self {
        TermPolynomial {
            order,
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// `{ identity : 1 }`.
    pub fn identity(kind: Kind) -> Self {
        let mut p = TermPolynomial::new(0, kind);
        p.terms.insert(ClusteredTerm::identity(kind).key, 1);
        p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Adds a term. Returns `Ok(false)` if it was dropped by the null rule.
    pub fn insert(&mut self, term: ClusteredTerm) -> Result<bool> {
        if term.order() != self.order || term.kind() != self.kind {
            return Err(TclError::InvalidTerm(format!(
                "term of order {} ({}) inserted into polynomial of order {} ({})",
                term.order(),
                term.kind().name(),
                self.order,
                self.kind.name()
            )));
        }
        if term.order() > 0 && term.is_null() {
            return Ok(false);
        }
        match self.terms.entry(term.key) {
            Entry::Vacant(v) => {
                if term.coefficient != 0 {
                    v.insert(term.coefficient);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += term.coefficient;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
        Ok(true)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = ClusteredTerm> + '_ {
        self.terms
            .iter()
            .map(|(k, &c)| ClusteredTerm::from_key(k.clone(), c))
    }

    pub fn coefficient_of(&self, key: &TermKey) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn add_assign(&mut self, other: &TermPolynomial) -> Result<()> {
        for t in other.iter() {
            self.insert(t)?;
        }
        Ok(())
    }

    pub fn scaled(&self, factor: i64) -> TermPolynomial {
        let mut p = TermPolynomial::new(self.order, self.kind);
        if factor != 0 {
            p.terms = self
                .terms
                .iter()
                .map(|(k, &c)| (k.clone(), c * factor))
                .collect();
        }
        p
    }

    /// Concatenation product of every pair of terms.
    pub fn product(&self, other: &TermPolynomial) -> Result<TermPolynomial> {
        let mut out = TermPolynomial::new(self.order + other.order, self.kind);
        for a in self.iter() {
            for b in other.iter() {
                out.insert(a.product(&b)?)?;
            }
        }
        Ok(out)
    }

    /// Distinct clusterings, with signs erased.
    pub fn clusterings(&self) -> BTreeSet<Clustering> {
        self.terms.keys().map(|k| k.clustering.clone()).collect()
    }
}
