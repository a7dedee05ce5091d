//! Model surgery computations: Spin^c lattices of framed links, the knot
//! surgery mapping cone built from model knot complexes, and the cup-model
//! hypercube.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cupform::ThreeForm;
use crate::error::{Error, Result};
use crate::hypercube::HyperboxComplex;
use crate::linalg::{smith_normal_form, F2Matrix, IntMatrix, LaurentMatrix};

/// Element of `½Z`, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Parses `"3"`, `"-1/2"` or `"0.5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Mismatch(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            return Ok(HalfInt(n));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(HalfInt::from_int(n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let t = 2.0 * x;
        if t.fract() != 0.0 || !t.is_finite() {
            return Err(bad());
        }
        Ok(HalfInt(t as i64))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Coordinate of a lattice point; infinite values pass through unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    Finite(HalfInt),
    PlusInf,
    MinusInf,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Finite(h) => write!(f, "{h}"),
            Coord::PlusInf => write!(f, "+inf"),
            Coord::MinusInf => write!(f, "-inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Plus,
    Minus,
}

impl Orientation {
    fn sign(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }
}

/// `ψ^M(s)`: drops the components of `M` and shifts the rest by
/// `−Σ_{j∈M} ±lk(K_i, K_j)/2`.
pub fn psi_map_lattice(s: &[Coord], sublink: &[(usize, Orientation)], linking: &[Vec<i64>]) -> Result<Vec<Coord>> {
    let ell = s.len();
    if linking.len() != ell || linking.iter().any(|r| r.len() != ell) {
        return Err(Error::DimensionMismatch(format!("linking data must be {ell}x{ell}")));
    }
    let dropped: BTreeSet<usize> = sublink.iter().map(|&(j, _)| j).collect();
    if dropped.len() != sublink.len() || dropped.iter().any(|&j| j >= ell) {
        return Err(Error::Mismatch("sublink components must be distinct indices below ell".into()));
    }
    Ok((0..ell)
        .filter(|i| !dropped.contains(i))
        .map(|i| match s[i] {
            Coord::Finite(h) => {
                let shift: i64 = sublink.iter().map(|&(j, o)| o.sign() * linking[i][j]).sum();
                Coord::Finite(HalfInt(h.0 - shift))
            }
            inf => inf,
        })
        .collect())
}

/// `H(L)` together with the framing matrix `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedLinkLattice {
    lambda: Vec<Vec<i64>>,
}

/// One torsion class of `H(L)/Λ`.
#[derive(Clone, Debug, Serialize)]
pub struct SpincClass {
    pub representative: Vec<HalfInt>,
    /// Coordinates in the Smith basis, reduced modulo `2d_i`.
    pub key: Vec<i64>,
    pub torsion: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpincReport {
    pub b1: usize,
    pub invariant_factors: Vec<i64>,
    /// Torsion classes; every class is torsion when `b1 = 0`.
    pub classes: Vec<SpincClass>,
}

impl FramedLinkLattice {
    pub fn new(lambda: Vec<Vec<i64>>) -> Result<Self> {
        let ell = lambda.len();
        if lambda.iter().any(|r| r.len() != ell) {
            return Err(Error::DimensionMismatch(format!("framing matrix must be {ell}x{ell}")));
        }
        for i in 0..ell {
            for j in 0..i {
                if lambda[i][j] != lambda[j][i] {
                    return Err(Error::Mismatch(format!("framing matrix not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { lambda })
    }

    pub fn ell(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Vec<i64>] {
        &self.lambda
    }

    /// `true` at `i` when `H(L)_i` is `½ + Z`.
    pub fn offsets(&self) -> Vec<bool> {
        (0..self.ell())
            .map(|i| (0..self.ell()).filter(|&j| j != i).map(|j| self.lambda[i][j]).sum::<i64>().rem_euclid(2) == 1)
            .collect()
    }

    pub fn contains(&self, s: &[HalfInt]) -> bool {
        s.len() == self.ell() && s.iter().zip(self.offsets()).all(|(h, o)| !h.is_integer() == o)
    }

    fn smith(&self) -> (Vec<i64>, IntMatrix) {
        let m = IntMatrix::from_i64(&self.lambda.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
        let snf = smith_normal_form(&m);
        let mut d: Vec<i64> = snf.diagonal.iter().map(|x| x.to_i64().expect("invariant factor fits i64")).collect();
        d.resize(self.ell(), 0);
        (d, snf.left)
    }

    fn reduced_key(&self, d: &[i64], left: &IntMatrix, twice: &[i64]) -> Vec<i64> {
        (0..self.ell())
            .map(|i| {
                let mut y = BigInt::zero();
                for (j, &t) in twice.iter().enumerate() {
                    y += left.get(i, j) * BigInt::from(t);
                }
                let y = y.to_i64().expect("lattice coordinate fits i64");
                if d[i] == 0 {
                    y
                } else {
                    y.rem_euclid(2 * d[i])
                }
            })
            .collect()
    }

    /// Invariant of the class of `s` in `H(L)/Λ`; equal keys mean equal classes.
    pub fn class_key(&self, s: &[HalfInt]) -> Result<Vec<i64>> {
        if !self.contains(s) {
            return Err(Error::Mismatch("point is not in H(L)".into()));
        }
        let (d, left) = self.smith();
        let twice: Vec<i64> = s.iter().map(|h| h.0).collect();
        Ok(self.reduced_key(&d, &left, &twice))
    }

    pub fn is_torsion(&self, s: &[HalfInt]) -> Result<bool> {
        let key = self.class_key(s)?;
        let (d, _) = self.smith();
        Ok(d.iter().zip(&key).all(|(&di, &y)| di != 0 || y == 0))
    }
}

/// Inverse of a unimodular integer matrix.
fn unimodular_inverse(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m.get(i, j).clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let v = &a[c][j] * &f;
                    a[r][j] -= v;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    if !x.is_integer() {
                        return Err(Error::Inconsistent("Smith transform is not unimodular".into()));
                    }
                    x.to_integer().to_i64().ok_or_else(|| Error::Inconsistent("entry overflow".into()))
                })
                .collect()
        })
        .collect()
}

/// Torsion classes of `H(L)/Λ` via the Smith form `UΛV = D`: a point `s`
/// maps to `y = U·2s`, classes are `y_i mod 2d_i`, and a class is torsion
/// when `y_i = 0` on every free direction `d_i = 0`.
pub fn spinc_classes(l: &FramedLinkLattice) -> Result<SpincReport> {
    let ell = l.ell();
    let (d, left) = l.smith();
    let inv = unimodular_inverse(&left)?;
    let offsets = l.offsets();
    let ranges: Vec<i64> = d.iter().map(|&di| if di == 0 { 1 } else { 2 * di.abs() }).collect();
    let total: i64 = ranges.iter().product();
    let mut classes = Vec::new();
    for idx in 0..total {
        let mut y = vec![0i64; ell];
        let mut r = idx;
        for i in (0..ell).rev() {
            y[i] = r % ranges[i];
            r /= ranges[i];
        }
        let t: Vec<i64> = (0..ell).map(|i| (0..ell).map(|j| inv[i][j] * y[j]).sum()).collect();
        if t.iter().zip(&offsets).all(|(&ti, &o)| (ti.rem_euclid(2) == 1) == o) {
            classes.push(SpincClass {
                representative: t.into_iter().map(HalfInt).collect(),
                key: y,
                torsion: true,
            });
        }
    }
    Ok(SpincReport {
        b1: d.iter().filter(|&&x| x == 0).count(),
        invariant_factors: d,
        classes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotGenerator {
    pub name: String,
    #[serde(rename = "A")]
    pub alexander: i64,
    #[serde(rename = "M")]
    pub maslov: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotEntry {
    pub from: String,
    pub to: String,
    pub nz: i64,
    pub nw: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotWire {
    generators: Vec<KnotGenerator>,
    differential: Vec<KnotEntry>,
}

/// Finite model of a doubly pointed knot complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelKnotComplex {
    generators: Vec<KnotGenerator>,
    entries: Vec<(usize, usize, i64, i64)>,
}

/// Value of the Spin^c parameter of `A^∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SValue {
    Finite(i64),
    PlusInf,
    MinusInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl ModelKnotComplex {
    pub fn new(generators: Vec<KnotGenerator>, differential: Vec<KnotEntry>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidKnot("no generators".into()));
        }
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidKnot(format!("duplicate generator {:?}", g.name)));
            }
        }
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for e in &differential {
            let label = format!("{} -> {}", e.from, e.to);
            let x = *index.get(&e.from).ok_or_else(|| Error::InvalidKnot(format!("entry {label}: unknown generator {:?}", e.from)))?;
            let y = *index.get(&e.to).ok_or_else(|| Error::InvalidKnot(format!("entry {label}: unknown generator {:?}", e.to)))?;
            if e.nz < 0 || e.nw < 0 {
                return Err(Error::InvalidKnot(format!("entry {label}: negative basepoint count")));
            }
            if !seen.insert((x, y)) {
                return Err(Error::InvalidKnot(format!("entry {label} listed twice")));
            }
            let (gx, gy) = (&generators[x], &generators[y]);
            if gx.alexander - gy.alexander != e.nz - e.nw {
                return Err(Error::InvalidKnot(format!(
                    "entry {label}: A({}) - A({}) = {} but nz - nw = {}",
                    gx.name,
                    gy.name,
                    gx.alexander - gy.alexander,
                    e.nz - e.nw
                )));
            }
            if gx.maslov - gy.maslov != 1 - 2 * e.nw {
                return Err(Error::InvalidKnot(format!(
                    "entry {label}: M({}) - M({}) = {} but 1 - 2nw = {}",
                    gx.name,
                    gy.name,
                    gx.maslov - gy.maslov,
                    1 - 2 * e.nw
                )));
            }
            entries.push((x, y, e.nz, e.nw));
        }
        let mut a: Vec<i64> = generators.iter().map(|g| g.alexander).collect();
        let mut neg: Vec<i64> = a.iter().map(|x| -x).collect();
        a.sort_unstable();
        neg.sort_unstable();
        if a != neg {
            return Err(Error::InvalidKnot("Alexander gradings are not symmetric about 0".into()));
        }
        let k = Self { generators, entries };
        if !k.a_infinity(SValue::Finite(0)).at_one().mul(&k.a_infinity(SValue::Finite(0)).at_one()).is_zero() {
            return Err(Error::InvalidKnot("differential does not square to zero at U = 1".into()));
        }
        let d = k.a_infinity(SValue::PlusInf);
        if !d.mul(&d).is_zero() {
            return Err(Error::InvalidKnot("differential does not square to zero".into()));
        }
        Ok(k)
    }

    pub fn from_json(s: &str) -> std::result::Result<KnotJson, serde_json::Error> {
        serde_json::from_str::<KnotWire>(s).map(|w| KnotJson {
            generators: w.generators,
            differential: w.differential,
        })
    }

    pub fn to_json(&self) -> String {
        let w = KnotWire {
            generators: self.generators.clone(),
            differential: self
                .entries
                .iter()
                .map(|&(x, y, nz, nw)| KnotEntry {
                    from: self.generators[x].name.clone(),
                    to: self.generators[y].name.clone(),
                    nz,
                    nw,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&w).expect("serializable")
    }

    /// Single generator with `A = M = 0`.
    pub fn unknot() -> Self {
        Self::new(
            vec![KnotGenerator {
                name: "x".into(),
                alexander: 0,
                maslov: 0,
            }],
            vec![],
        )
        .expect("valid model")
    }

    /// Staircase model of the right-handed trefoil.
    pub fn trefoil() -> Self {
        let g = |name: &str, a, m| KnotGenerator {
            name: name.into(),
            alexander: a,
            maslov: m,
        };
        let e = |from: &str, to: &str, nz, nw| KnotEntry {
            from: from.into(),
            to: to.into(),
            nz,
            nw,
        };
        Self::new(
            vec![g("a", 1, 0), g("b", 0, -1), g("c", -1, -2)],
            vec![e("b", "a", 0, 1), e("b", "c", 1, 0)],
        )
        .expect("valid model")
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[KnotGenerator] {
        &self.generators
    }

    pub fn max_abs_alexander(&self) -> i64 {
        self.generators.iter().map(|g| g.alexander.abs()).max().unwrap_or(0)
    }

    /// Differential of `A^∞(s)`; the entry from `x` to `y` carries `U^{E_s}`.
    pub fn a_infinity(&self, s: SValue) -> LaurentMatrix {
        let n = self.len();
        let mut d = LaurentMatrix::zeros(n, n);
        for &(x, y, nz, nw) in &self.entries {
            let e = match s {
                SValue::PlusInf => nw,
                SValue::MinusInf => nz,
                SValue::Finite(s) => {
                    let (ax, ay) = (self.generators[x].alexander, self.generators[y].alexander);
                    (ax - s).max(0) - (ay - s).max(0) + nw
                }
            };
            d.add_monomial(y, x, e);
        }
        d
    }

    /// `I^±_s(x) = U^{(±(A(x)−s)) ∨ 0} x`.
    pub fn inclusion_map(&self, s: i64, sign: Sign) -> LaurentMatrix {
        let n = self.len();
        let mut m = LaurentMatrix::zeros(n, n);
        for (i, g) in self.generators.iter().enumerate() {
            let e = match sign {
                Sign::Plus => (g.alexander - s).max(0),
                Sign::Minus => (s - g.alexander).max(0),
            };
            m.add_monomial(i, i, e);
        }
        m
    }

    /// Default destabilizations `A^∞(±∞) → B`: the identity on generators,
    /// shifted by `U^{A(x)}` on the `−` side so that it is homogeneous.
    pub fn default_destabilizations(&self) -> Destabilizations {
        let n = self.len();
        let mut plus = LaurentMatrix::zeros(n, n);
        let mut minus = LaurentMatrix::zeros(n, n);
        for (i, g) in self.generators.iter().enumerate() {
            plus.add_monomial(i, i, 0);
            minus.add_monomial(i, i, g.alexander);
        }
        Destabilizations { plus, minus }
    }
}

/// Parsed but unvalidated knot JSON.
#[derive(Clone, Debug)]
pub struct KnotJson {
    pub generators: Vec<KnotGenerator>,
    pub differential: Vec<KnotEntry>,
}

impl KnotJson {
    pub fn validate(self) -> Result<ModelKnotComplex> {
        ModelKnotComplex::new(self.generators, self.differential)
    }
}

/// `D^+ : A^∞(+∞) → B` and `D^- : A^∞(−∞) → B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destabilizations {
    pub plus: LaurentMatrix,
    pub minus: LaurentMatrix,
}

fn place(target: &mut LaurentMatrix, r0: usize, c0: usize, block: &LaurentMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            for e in block.entry(i, j) {
                target.add_monomial(r0 + i, c0 + j, e);
            }
        }
    }
}

/// True when `f` is a chain map `(C, src) → (C, dst)` whose cone is acyclic
/// over `F₂(U)`.
fn is_quasi_iso(f: &LaurentMatrix, src: &LaurentMatrix, dst: &LaurentMatrix) -> bool {
    let n = src.rows();
    if f.rows() != n || f.cols() != n || f.mul(src) != dst.mul(f) {
        return false;
    }
    let mut cone = LaurentMatrix::zeros(2 * n, 2 * n);
    place(&mut cone, 0, 0, src);
    place(&mut cone, n, n, dst);
    place(&mut cone, n, 0, f);
    cone.rank() == n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SliceBlock {
    pub kind: BlockKind,
    pub s: i64,
    pub offset: usize,
}

/// Truncation of the surgery cone to `A^∞(s)`, `s ∈ [−S, S]`, and the
/// `B(t)` they reach inside the window.
#[derive(Clone, Debug)]
pub struct SurgeryComplexSlice {
    framing: i64,
    truncation: i64,
    width: usize,
    blocks: Vec<SliceBlock>,
    differential: LaurentMatrix,
}

impl SurgeryComplexSlice {
    pub fn build(k: &ModelKnotComplex, n: i64, dest: &Destabilizations, truncation: i64) -> Result<Self> {
        let m = k.len();
        let d_b = k.a_infinity(SValue::PlusInf);
        if !is_quasi_iso(&dest.plus, &k.a_infinity(SValue::PlusInf), &d_b) {
            return Err(Error::NotQuasiIso("D+ is not a quasi-isomorphism A(+inf) -> B".into()));
        }
        if !is_quasi_iso(&dest.minus, &k.a_infinity(SValue::MinusInf), &d_b) {
            return Err(Error::NotQuasiIso("D- is not a quasi-isomorphism A(-inf) -> B".into()));
        }
        let s_max = truncation;
        let (b_lo, b_hi) = if n == 0 { (-s_max, s_max) } else { (-s_max + n.max(0), s_max + n.min(0)) };
        let mut blocks = Vec::new();
        for s in -s_max..=s_max {
            blocks.push(SliceBlock {
                kind: BlockKind::A,
                s,
                offset: blocks.len() * m,
            });
        }
        let mut b_index = BTreeMap::new();
        for t in b_lo..=b_hi {
            b_index.insert(t, blocks.len());
            blocks.push(SliceBlock {
                kind: BlockKind::B,
                s: t,
                offset: blocks.len() * m,
            });
        }
        let dim = blocks.len() * m;
        let mut d = LaurentMatrix::zeros(dim, dim);
        for b in &blocks {
            match b.kind {
                BlockKind::A => {
                    place(&mut d, b.offset, b.offset, &k.a_infinity(SValue::Finite(b.s)));
                    let plus = dest.plus.mul(&k.inclusion_map(b.s, Sign::Plus));
                    let minus = dest.minus.mul(&k.inclusion_map(b.s, Sign::Minus));
                    if let Some(&t) = b_index.get(&b.s) {
                        place(&mut d, blocks[t].offset, b.offset, &plus);
                    }
                    if let Some(&t) = b_index.get(&(b.s + n)) {
                        place(&mut d, blocks[t].offset, b.offset, &minus);
                    }
                }
                BlockKind::B => place(&mut d, b.offset, b.offset, &d_b),
            }
        }
        if !d.mul(&d).is_zero() {
            return Err(Error::Inconsistent("surgery differential does not square to zero".into()));
        }
        Ok(Self {
            framing: n,
            truncation,
            width: m,
            blocks,
            differential: d,
        })
    }

    pub fn framing(&self) -> i64 {
        self.framing
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn blocks(&self) -> &[SliceBlock] {
        &self.blocks
    }

    pub fn differential(&self) -> &LaurentMatrix {
        &self.differential
    }

    fn class_of(&self, s: i64) -> i64 {
        if self.framing == 0 {
            s
        } else {
            s.rem_euclid(self.framing.abs())
        }
    }

    /// Homology rank over `F₂(U)` of the summand of class `c`.
    pub fn class_rank(&self, c: i64) -> usize {
        let idx: Vec<usize> = self
            .blocks
            .iter()
            .filter(|b| self.class_of(b.s) == c)
            .flat_map(|b| b.offset..b.offset + self.width)
            .collect();
        let mut sub = LaurentMatrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                for e in self.differential.entry(i, j) {
                    sub.add_monomial(a, b, e);
                }
            }
        }
        idx.len() - 2 * sub.rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurgeryReport {
    pub framing: i64,
    pub truncation: i64,
    /// Rank per Spin^c class, keyed by `s mod |n|` (or by `s` when `n = 0`).
    pub ranks: BTreeMap<i64, usize>,
    pub total_rank: usize,
    /// Ranks recomputed at `S + 3` agree.
    pub stable: bool,
}

pub fn default_truncation(k: &ModelKnotComplex, n: i64) -> i64 {
    k.max_abs_alexander() + n.abs() + 2
}

/// Homology ranks of `n`-surgery on the model knot, per Spin^c class.
pub fn knot_surgery_complex(
    k: &ModelKnotComplex,
    n: i64,
    dest: Option<&Destabilizations>,
    truncation: Option<i64>,
) -> Result<SurgeryReport> {
    let s = truncation.unwrap_or_else(|| default_truncation(k, n));
    let bound = k.max_abs_alexander() + n.abs();
    if s <= bound {
        return Err(Error::Mismatch(format!("truncation {s} must exceed max|A| + |n| = {bound}")));
    }
    let default;
    let dest = match dest {
        Some(d) => d,
        None => {
            default = k.default_destabilizations();
            &default
        }
    };
    let classes: Vec<i64> = if n == 0 {
        let r = k.max_abs_alexander() + 1;
        (-r..=r).collect()
    } else {
        (0..n.abs()).collect()
    };
    let ranks_at = |t: i64| -> Result<BTreeMap<i64, usize>> {
        let slice = SurgeryComplexSlice::build(k, n, dest, t)?;
        Ok(classes.iter().map(|&c| (c, slice.class_rank(c))).collect())
    };
    let ranks = ranks_at(s)?;
    let again = ranks_at(s + 3)?;
    if ranks != again {
        return Err(Error::Inconsistent(format!("ranks change between truncation {s} and {}", s + 3)));
    }
    Ok(SurgeryReport {
        framing: n,
        truncation: s,
        total_rank: ranks.values().sum(),
        ranks,
        stable: true,
    })
}

/// Hypercube with one generator per vertex and `D^{ε′} = μ(i,j,k) mod 2`
/// on the length-3 diagonals along axes `{i,j,k}`.
pub fn build_cup_model_cube(mu: &ThreeForm) -> Result<HyperboxComplex> {
    let ell = mu.ell();
    let mut h = HyperboxComplex::hypercube(ell, |_| 1)?;
    let vertices: Vec<Vec<usize>> = h.vertices().collect();
    for v in &vertices {
        let ones = v.iter().filter(|&&c| c == 1).count() as i64;
        h.set_gradings(v, vec![ell as i64 - ones])?;
    }
    let one = F2Matrix::identity(1);
    for (t, c) in mu.triples() {
        if c.rem_euclid(2) == 0 {
            continue;
        }
        let mask = ThreeForm::mask(t);
        for v in &vertices {
            if h.shift(v, mask).is_some() {
                h.set_map(v, mask, one.clone())?;
            }
        }
    }
    Ok(h)
}

/// Adds higher diagonals (length at least 4) to a hypercube and rejects the
/// result if a hyperbox relation fails.
pub fn perturb_model(h: &HyperboxComplex, extra: &[(Vec<usize>, u32, F2Matrix)]) -> Result<HyperboxComplex> {
    let mut out = h.clone();
    for (v, mask, m) in extra {
        if mask.count_ones() < 4 {
            return Err(Error::Mismatch(format!("perturbation along {mask:#b} has length below 4")));
        }
        out.add_to_map(v, *mask, m)?;
    }
    out.ensure_relations()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfInt {
        HalfInt::parse(s).unwrap()
    }

    #[test]
    fn half_int_parsing() {
        assert_eq!(h("1/2"), HalfInt(1));
        assert_eq!(h("-3/2"), HalfInt(-3));
        assert_eq!(h("2"), HalfInt(4));
        assert_eq!(h("0.5"), HalfInt(1));
        assert!(HalfInt::parse("1/3").is_err());
        assert_eq!(HalfInt(-3).to_string(), "-3/2");
    }

    #[test]
    fn lens_space_classes() {
        let l = FramedLinkLattice::new(vec![vec![3]]).unwrap();
        let r = spinc_classes(&l).unwrap();
        assert_eq!(r.b1, 0);
        assert_eq!(r.classes.len(), 3);
    }

    #[test]
    fn zero_framed_split_link_has_one_torsion_class() {
        for ell in 1..=4 {
            let l = FramedLinkLattice::new(vec![vec![0; ell]; ell]).unwrap();
            let r = spinc_classes(&l).unwrap();
            assert_eq!(r.b1, ell);
            assert_eq!(r.classes.len(), 1);
            assert!(r.classes[0].representative.iter().all(|x| x.0 == 0));
        }
    }

    #[test]
    fn connect_sum_lattice_torsion_class() {
        let lambda = vec![vec![0, 0, 1, 0], vec![0, 0, 1, 0], vec![1, 1, 0, 0], vec![0, 0, 0, 0]];
        let l = FramedLinkLattice::new(lambda).unwrap();
        let r = spinc_classes(&l).unwrap();
        assert_eq!(r.classes.len(), 1);
        let s0 = [h("1/2"), h("1/2"), h("1"), h("0")];
        assert!(l.is_torsion(&s0).unwrap());
        assert_eq!(l.class_key(&s0).unwrap(), r.classes[0].key);
        assert!(!l.is_torsion(&[h("1/2"), h("1/2"), h("1"), h("1")]).unwrap());
    }

    #[test]
    fn psi_shifts_by_half_linking() {
        let lk = vec![vec![0, 1], vec![1, 0]];
        let s = [Coord::Finite(h("1/2")), Coord::Finite(h("1/2"))];
        assert_eq!(psi_map_lattice(&s, &[(1, Orientation::Plus)], &lk).unwrap(), vec![Coord::Finite(h("0"))]);
        assert_eq!(psi_map_lattice(&s, &[(1, Orientation::Minus)], &lk).unwrap(), vec![Coord::Finite(h("1"))]);
        let inf = [Coord::PlusInf, Coord::Finite(h("1/2"))];
        assert_eq!(psi_map_lattice(&inf, &[(1, Orientation::Plus)], &lk).unwrap(), vec![Coord::PlusInf]);
    }

    #[test]
    fn trefoil_exponents_and_inclusions() {
        let k = ModelKnotComplex::trefoil();
        let d = k.a_infinity(SValue::Finite(0));
        // b -> a: max(0,0) - max(1,0) + 1 = 0; b -> c: 0 - 0 + 0 = 0
        assert_eq!(d.entry(0, 1), vec![0]);
        assert_eq!(d.entry(2, 1), vec![0]);
        assert!(d.mul(&d).is_zero());
        assert_eq!(k.a_infinity(SValue::MinusInf).entry(2, 1), vec![1]);
        for s in -3..=3 {
            for (sign, inf) in [(Sign::Plus, SValue::PlusInf), (Sign::Minus, SValue::MinusInf)] {
                let i = k.inclusion_map(s, sign);
                assert_eq!(i.mul(&k.a_infinity(SValue::Finite(s))), k.a_infinity(inf).mul(&i));
            }
        }
        let i = k.inclusion_map(1, Sign::Minus);
        assert_eq!((i.entry(0, 0), i.entry(1, 1), i.entry(2, 2)), (vec![0], vec![1], vec![2]));
    }

    #[test]
    fn rejects_inconsistent_entry() {
        let json = r#"{"generators":[{"name":"a","A":1,"M":0},{"name":"b","A":-1,"M":-1}],
            "differential":[{"from":"b","to":"a","nz":0,"nw":1}]}"#;
        let err = ModelKnotComplex::from_json(json).unwrap().validate().unwrap_err();
        assert!(err.to_string().contains("b -> a"));
        assert!(ModelKnotComplex::from_json(r#"{"generators":[],"differential":[],"x":1}"#).is_err());
    }

    #[test]
    fn surgery_ranks() {
        let u = ModelKnotComplex::unknot();
        let r0 = knot_surgery_complex(&u, 0, None, None).unwrap();
        assert_eq!(r0.ranks[&0], 2);
        assert_eq!(r0.total_rank, 2);
        for n in [1, 5, -3] {
            let r = knot_surgery_complex(&u, n, None, None).unwrap();
            assert_eq!(r.ranks.len(), n.unsigned_abs() as usize);
            assert!(r.ranks.values().all(|&x| x == 1));
        }
        let t = ModelKnotComplex::trefoil();
        for n in [1, -1] {
            assert_eq!(knot_surgery_complex(&t, n, None, None).unwrap().total_rank, 1);
        }
        assert!(knot_surgery_complex(&t, 1, None, Some(2)).is_err());
    }

    #[test]
    fn non_quasi_iso_destabilization_rejected() {
        let u = ModelKnotComplex::unknot();
        let bad = Destabilizations {
            plus: LaurentMatrix::zeros(1, 1),
            minus: u.default_destabilizations().minus,
        };
        assert!(matches!(knot_surgery_complex(&u, 1, Some(&bad), None), Err(Error::NotQuasiIso(_))));
    }

    #[test]
    fn cup_model_cube_relations() {
        let mu = ThreeForm::from_triples(3, [([1, 2, 3], 1)]).unwrap();
        let c = build_cup_model_cube(&mu).unwrap();
        assert!(c.check_relations().is_empty());
        assert_eq!(c.total_complex().unwrap().homology_dim(), 6);
        let mu6 = ThreeForm::from_triples(6, [([1, 2, 3], 1), ([4, 5, 6], 1)]).unwrap();
        let c6 = build_cup_model_cube(&mu6).unwrap();
        assert!(c6.check_relations().is_empty());
        assert_eq!(c6.total_complex().unwrap().homology_dim(), 36);
    }

    #[test]
    fn perturbations() {
        let zero4 = build_cup_model_cube(&ThreeForm::zero(4)).unwrap();
        assert_eq!(perturb_model(&zero4, &[]).unwrap().maps().count(), 0);
        let one = F2Matrix::identity(1);
        assert!(perturb_model(&zero4, &[(vec![0; 4], 0b1111, one.clone())]).is_ok());
        let mu = ThreeForm::from_triples(7, [([1, 2, 3], 1)]).unwrap();
        let c = build_cup_model_cube(&mu).unwrap();
        let err = perturb_model(&c, &[(vec![0; 7], 0b1111000, one.clone())]).unwrap_err();
        assert!(matches!(err, Error::RelationFailure(_)));
        assert!(perturb_model(&c, &[(vec![0; 7], 0b111, one)]).is_err());
    }
}
