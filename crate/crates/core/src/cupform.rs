//! Alternating integer 3-forms and the link-level bookkeeping around them:
//! complexity, connected-sum additivity and component splitting.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing 1-based index triple.
pub type Triple = [usize; 3];

/// Alternating trilinear form on Z^ℓ, stored by its values on increasing
/// triples. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ThreeFormWire", into = "ThreeFormWire")]
pub struct ThreeForm {
    ell: usize,
    triples: BTreeMap<Triple, i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThreeFormWire {
    ell: usize,
    triples: Vec<[i64; 4]>,
}

impl TryFrom<ThreeFormWire> for ThreeForm {
    type Error = Error;

    fn try_from(w: ThreeFormWire) -> Result<Self> {
        let mut entries = Vec::with_capacity(w.triples.len());
        for [i, j, k, c] in w.triples {
            let idx = |x: i64| {
                usize::try_from(x).map_err(|_| Error::InvalidForm(format!("negative index {x}")))
            };
            entries.push(([idx(i)?, idx(j)?, idx(k)?], c));
        }
        ThreeForm::from_triples(w.ell, entries)
    }
}

impl From<ThreeForm> for ThreeFormWire {
    fn from(f: ThreeForm) -> Self {
        ThreeFormWire {
            ell: f.ell,
            triples: f
                .triples
                .iter()
                .map(|(t, &c)| [t[0] as i64, t[1] as i64, t[2] as i64, c])
                .collect(),
        }
    }
}

impl ThreeForm {
    /// Largest supported number of generators; exterior bases are `u32` masks.
    pub const MAX_ELL: usize = 31;

    pub fn zero(ell: usize) -> Self {
        assert!(ell <= Self::MAX_ELL, "ell = {ell} exceeds {}", Self::MAX_ELL);
        Self {
            ell,
            triples: BTreeMap::new(),
        }
    }

    /// Builds a form from increasing triples. Duplicate triples, indices out of
    /// `1..=ell` and non-increasing triples are rejected; zero coefficients
    /// are dropped.
    pub fn from_triples(ell: usize, entries: impl IntoIterator<Item = (Triple, i64)>) -> Result<Self> {
        if ell > Self::MAX_ELL {
            return Err(Error::InvalidForm(format!("ell = {ell} exceeds {}", Self::MAX_ELL)));
        }
        let mut triples = BTreeMap::new();
        for (t, c) in entries {
            if !(1 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] <= ell) {
                return Err(Error::InvalidForm(format!(
                    "triple ({}, {}, {}) is not strictly increasing within 1..={ell}",
                    t[0], t[1], t[2]
                )));
            }
            if triples.insert(t, c).is_some() {
                return Err(Error::InvalidForm(format!(
                    "duplicate triple ({}, {}, {})",
                    t[0], t[1], t[2]
                )));
            }
        }
        triples.retain(|_, c| *c != 0);
        Ok(Self { ell, triples })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn triples(&self) -> impl Iterator<Item = (Triple, i64)> + '_ {
        self.triples.iter().map(|(t, &c)| (*t, c))
    }

    pub fn is_zero(&self) -> bool {
        self.triples.is_empty()
    }

    /// Value on an increasing triple.
    pub fn coeff(&self, t: Triple) -> i64 {
        self.triples.get(&t).copied().unwrap_or(0)
    }

    /// Value on an arbitrary ordered triple, with the alternating sign.
    pub fn eval(&self, a: usize, b: usize, c: usize) -> i64 {
        if a == b || b == c || a == c {
            return 0;
        }
        let mut t = [a, b, c];
        let mut sign = 1;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        sign * self.coeff(t)
    }

    /// Sets the value on an increasing triple (0 removes it).
    pub fn set(&mut self, t: Triple, c: i64) {
        assert!(1 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] <= self.ell, "bad triple {t:?}");
        if c == 0 {
            self.triples.remove(&t);
        } else {
            self.triples.insert(t, c);
        }
    }

    /// Bit mask of a triple; generator `i` is bit `i − 1`.
    pub fn mask(t: Triple) -> u32 {
        t.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    /// `(mask, coefficient)` pairs for every stored triple.
    pub fn masked(&self) -> Vec<(u32, i64)> {
        self.triples().map(|(t, c)| (Self::mask(t), c)).collect()
    }

    /// Form with every coefficient reduced into {0, 1}.
    pub fn mod2(&self) -> ThreeForm {
        let mut out = self.clone();
        out.triples = self
            .triples
            .iter()
            .filter(|(_, c)| *c % 2 != 0)
            .map(|(t, _)| (*t, 1))
            .collect();
        out
    }

    /// Form divided by the gcd of its coefficients.
    pub fn primitive(&self) -> ThreeForm {
        let g = self.triples.values().fold(0i64, |g, &c| num_integer::gcd(g, c));
        let mut out = self.clone();
        if g > 1 {
            for c in out.triples.values_mut() {
                *c /= g;
            }
        }
        out
    }

    pub fn negate(&self) -> ThreeForm {
        let mut out = self.clone();
        for c in out.triples.values_mut() {
            *c = -*c;
        }
        out
    }

    /// Triples containing index `r`.
    pub fn triples_containing(&self, r: usize) -> impl Iterator<Item = (Triple, i64)> + '_ {
        self.triples().filter(move |(t, _)| t.contains(&r))
    }

    /// Form on `self.ell + other.ell` generators with `other` placed on the
    /// last block of indices.
    pub fn disjoint_sum(&self, other: &ThreeForm) -> ThreeForm {
        let shift = self.ell;
        let mut out = ThreeForm::zero(self.ell + other.ell);
        out.triples.extend(self.triples.iter().map(|(t, &c)| (*t, c)));
        out.triples
            .extend(other.triples().map(|(t, c)| ([t[0] + shift, t[1] + shift, t[2] + shift], c)));
        out
    }

    /// Same triples viewed on a larger generator set.
    pub fn extended(&self, ell: usize) -> Result<ThreeForm> {
        if ell < self.ell {
            return Err(Error::InvalidForm(format!("cannot shrink ell from {} to {ell}", self.ell)));
        }
        let mut out = self.clone();
        out.ell = ell;
        Ok(out)
    }

    fn check_same_ell(&self, other: &ThreeForm) -> Result<()> {
        if self.ell != other.ell {
            return Err(Error::Mismatch(format!("ell {} vs {}", self.ell, other.ell)));
        }
        Ok(())
    }

    pub fn add(&self, other: &ThreeForm) -> Result<ThreeForm> {
        self.check_same_ell(other)?;
        let mut out = self.clone();
        for (t, c) in other.triples() {
            let v = out.coeff(t) + c;
            out.set(t, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ThreeForm) -> Result<ThreeForm> {
        self.add(&other.negate())
    }
}

impl fmt::Debug for ThreeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThreeForm(ell={}, {{", self.ell)?;
        for (n, (t, c)) in self.triples().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{},{}):{c}", t[0], t[1], t[2])?;
        }
        write!(f, "}})")
    }
}

/// Number of index triples with nonzero value.
pub fn complexity(mu: &ThreeForm) -> usize {
    mu.triples.len()
}

/// Coefficientwise sum: triple linking numbers add under connected sum.
pub fn connect_sum(a: &ThreeForm, b: &ThreeForm) -> Result<ThreeForm> {
    a.add(b)
}

/// Restriction to the triples that contain `r`.
pub fn component_part(mu: &ThreeForm, r: usize) -> ThreeForm {
    let mut out = ThreeForm::zero(mu.ell);
    out.triples.extend(mu.triples_containing(r));
    out
}

/// Restriction to the triples that avoid `r`.
pub fn complement_part(mu: &ThreeForm, r: usize) -> ThreeForm {
    let mut out = ThreeForm::zero(mu.ell);
    out.triples.extend(mu.triples().filter(|(t, _)| !t.contains(&r)));
    out
}

/// Splits off the lexicographically last triple containing `r`.
///
/// Returns `(rest, single)` with `rest + single = mu`; both have strictly
/// smaller complexity than `mu`.
pub fn split_component(mu: &ThreeForm, r: usize) -> Result<(ThreeForm, ThreeForm)> {
    if r == 0 || r > mu.ell {
        return Err(Error::InvalidForm(format!("index {r} outside 1..={}", mu.ell)));
    }
    let with_r: Vec<_> = mu.triples_containing(r).collect();
    if with_r.len() < 2 {
        return Err(Error::NoReduction(format!(
            "index {r} lies in {} nonzero triple(s); at least 2 are needed",
            with_r.len()
        )));
    }
    let (t, c) = *with_r.last().expect("nonempty");
    let mut single = ThreeForm::zero(mu.ell);
    single.set(t, c);
    let mut rest = mu.clone();
    rest.set(t, 0);
    Ok((rest, single))
}

/// One node of a complexity-reduction tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionNode {
    /// Complexity at most one; nothing left to reduce.
    Leaf { form: ThreeForm },
    /// Connected-sum splitting along component `r`.
    Split {
        form: ThreeForm,
        r: usize,
        rest: Box<ReductionNode>,
        single: Box<ReductionNode>,
    },
    /// Pairwise index-disjoint triples; the form is a disjoint sum of its
    /// single-triple parts.
    Disjoint { form: ThreeForm, parts: Vec<ReductionNode> },
}

impl ReductionNode {
    pub fn form(&self) -> &ThreeForm {
        match self {
            Self::Leaf { form } | Self::Split { form, .. } | Self::Disjoint { form, .. } => form,
        }
    }

    pub fn children(&self) -> Vec<&ReductionNode> {
        match self {
            Self::Leaf { .. } => vec![],
            Self::Split { rest, single, .. } => vec![rest, single],
            Self::Disjoint { parts, .. } => parts.iter().collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    pub fn leaves(&self) -> Vec<&ThreeForm> {
        match self {
            Self::Leaf { form } => vec![form],
            _ => self.children().into_iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// Every (node, child) pair in pre-order.
    pub fn edges(&self) -> Vec<(&ReductionNode, &ReductionNode)> {
        let mut out = Vec::new();
        for c in self.children() {
            out.push((self, c));
            out.extend(c.edges());
        }
        out
    }
}

/// Index to split on: the smallest one lying in at least two triples.
pub fn split_index(mu: &ThreeForm) -> Option<usize> {
    (1..=mu.ell).find(|&r| mu.triples_containing(r).nth(1).is_some())
}

/// Recursively reduces `mu` until every leaf has complexity ≤ 1.
pub fn reduction_trace(mu: &ThreeForm) -> ReductionNode {
    if complexity(mu) <= 1 {
        return ReductionNode::Leaf { form: mu.clone() };
    }
    match split_index(mu) {
        Some(r) => {
            let (rest, single) = split_component(mu, r).expect("split index has two triples");
            ReductionNode::Split {
                form: mu.clone(),
                r,
                rest: Box::new(reduction_trace(&rest)),
                single: Box::new(reduction_trace(&single)),
            }
        }
        None => {
            let parts = mu
                .triples()
                .map(|(t, c)| {
                    let mut f = ThreeForm::zero(mu.ell);
                    f.set(t, c);
                    ReductionNode::Leaf { form: f }
                })
                .collect();
            ReductionNode::Disjoint {
                form: mu.clone(),
                parts,
            }
        }
    }
}

/// Framed-link data needed to decide whether the cup complex applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkModel {
    linking: Vec<Vec<i64>>,
    milnor: ThreeForm,
}

impl LinkModel {
    /// `linking` must be symmetric with zero diagonal and match `milnor.ell()`.
    pub fn new(linking: Vec<Vec<i64>>, milnor: ThreeForm) -> Result<Self> {
        let ell = milnor.ell();
        if linking.len() != ell || linking.iter().any(|r| r.len() != ell) {
            return Err(Error::Mismatch(format!("linking matrix must be {ell}x{ell}")));
        }
        for i in 0..ell {
            if linking[i][i] != 0 {
                return Err(Error::Mismatch(format!("linking diagonal entry {} is nonzero", i + 1)));
            }
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(Error::Mismatch(format!("linking matrix not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { linking, milnor })
    }

    pub fn split(milnor: ThreeForm) -> Self {
        let ell = milnor.ell();
        Self {
            linking: vec![vec![0; ell]; ell],
            milnor,
        }
    }

    pub fn ell(&self) -> usize {
        self.milnor.ell()
    }

    pub fn milnor(&self) -> &ThreeForm {
        &self.milnor
    }

    pub fn linking(&self) -> &[Vec<i64>] {
        &self.linking
    }

    /// First pair with nonzero linking number, if any.
    pub fn linking_obstruction(&self) -> Option<(usize, usize, i64)> {
        (0..self.ell())
            .flat_map(|i| (i + 1..self.ell()).map(move |j| (i, j)))
            .find(|&(i, j)| self.linking[i][j] != 0)
            .map(|(i, j)| (i + 1, j + 1, self.linking[i][j]))
    }

    pub fn is_homologically_split(&self) -> bool {
        self.linking_obstruction().is_none()
    }

    /// The Milnor form, provided all pairwise linking numbers vanish.
    pub fn cup_form(&self) -> Result<&ThreeForm> {
        match self.linking_obstruction() {
            Some((i, j, v)) => Err(Error::NotSplit(i, j, v)),
            None => Ok(&self.milnor),
        }
    }
}
