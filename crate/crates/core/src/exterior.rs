//! Exterior algebra Λ*(R^ℓ) over F₂, Z or Q with wedge and interior
//! products.
//!
//! Basis elements are subsets of {1, …, ℓ} encoded as `u32` masks, with
//! generator `i` at bit `i − 1`. Within each degree the basis is ordered by
//! increasing mask value.
//!
//! Over Z the interior product of a `k`-form φ supported on the subset `T`
//! acts by `ι_φ(e_S) = sign(T, S)·φ(T)·e_{S∖T}` where `sign(T, S)` is the
//! parity of the shuffle that moves the slots of `T` to the front of `S`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cupform::ThreeForm;
use crate::error::{Error, Result};
use crate::linalg::{F2Matrix, IntMatrix};

/// Coefficient ring of a multivector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    F2,
    Z,
    Q,
}

/// Sign of the shuffle moving the elements of `t` to the front of `s`
/// (`t ⊆ s`): the parity of pairs `(x, y)` with `x ∈ t`, `y ∈ s ∖ t`, `y < x`.
pub fn shuffle_sign(t: u32, s: u32) -> i64 {
    debug_assert_eq!(t & s, t);
    let rest = s & !t;
    let mut inversions = 0;
    let mut bits = t;
    while bits != 0 {
        let x = bits.trailing_zeros();
        inversions += (rest & ((1u32 << x) - 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Element of Λ*(R^ℓ). Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector {
    ell: usize,
    ring: Coefficients,
    coeffs: BTreeMap<u32, BigRational>,
}

impl Multivector {
    pub fn zero(ell: usize, ring: Coefficients) -> Self {
        assert!(ell <= ThreeForm::MAX_ELL);
        Self {
            ell,
            ring,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c · e_S` for the subset with the given 1-based indices.
    pub fn basis(ell: usize, ring: Coefficients, indices: &[usize], c: i64) -> Self {
        let mut m = Self::zero(ell, ring);
        let mut mask = 0u32;
        for &i in indices {
            assert!((1..=ell).contains(&i), "index {i} outside 1..={ell}");
            mask |= 1 << (i - 1);
        }
        m.add_term(mask, BigRational::from_integer(c.into()));
        m
    }

    pub fn from_terms(ell: usize, ring: Coefficients, terms: impl IntoIterator<Item = (u32, BigRational)>) -> Result<Self> {
        let mut m = Self::zero(ell, ring);
        let limit = if ell == 32 { u32::MAX } else { (1u32 << ell) - 1 };
        for (mask, c) in terms {
            if mask & !limit != 0 {
                return Err(Error::Mismatch(format!("subset mask {mask:#b} uses bits beyond ell = {ell}")));
            }
            if ring != Coefficients::Q && !c.is_integer() {
                return Err(Error::Mismatch(format!("non-integer coefficient {c} in {ring:?}")));
            }
            m.add_term(mask, c);
        }
        Ok(m)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn ring(&self) -> Coefficients {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> BigRational {
        self.coeffs.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    fn normalize(&self, c: BigRational) -> BigRational {
        match self.ring {
            Coefficients::F2 => {
                debug_assert!(c.is_integer());
                BigRational::from_integer(c.to_integer().mod_floor(&BigInt::from(2)))
            }
            _ => c,
        }
    }

    fn add_term(&mut self, mask: u32, c: BigRational) {
        let entry = self.coeffs.entry(mask).or_insert_with(BigRational::zero);
        let sum = std::mem::take(entry) + c;
        let sum = self.normalize(sum);
        if sum.is_zero() {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, sum);
        }
    }

    fn check_compatible(&self, other: &Multivector) -> Result<()> {
        if self.ell != other.ell || self.ring != other.ring {
            return Err(Error::Mismatch(format!(
                "Λ*(R^{}) over {:?} vs Λ*(R^{}) over {:?}",
                self.ell, self.ring, other.ell, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Multivector {
        let mut out = Multivector::zero(self.ell, self.ring);
        for (m, c) in self.terms() {
            out.add_term(m, c * BigRational::from_integer(k.into()));
        }
        out
    }

    /// Reduction of an integral multivector to F₂.
    pub fn mod2(&self) -> Multivector {
        let mut out = Multivector::zero(self.ell, Coefficients::F2);
        for (m, c) in self.terms() {
            assert!(c.is_integer(), "mod 2 reduction of a non-integral coefficient");
            out.add_term(m, c.clone());
        }
        out
    }

    /// Restriction to exterior degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Multivector {
        let mut out = Multivector::zero(self.ell, self.ring);
        out.coeffs = self
            .coeffs
            .iter()
            .filter(|(m, _)| m.count_ones() == k)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        out
    }
}

/// Wedge product. Bilinear and associative; `e_S ∧ e_T = 0` when the
/// subsets meet.
pub fn wedge(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.check_compatible(b)?;
    let mut out = Multivector::zero(a.ell, a.ring);
    for (s, cs) in a.terms() {
        for (t, ct) in b.terms() {
            if s & t != 0 {
                continue;
            }
            // e_S ∧ e_T = sign(S, S∪T) · e_{S∪T}
            let sign = BigRational::from_integer(shuffle_sign(s, s | t).into());
            out.add_term(s | t, sign * cs * ct);
        }
    }
    Ok(out)
}

/// Interior product by an alternating form given as `(support mask, value)`
/// pairs.
pub fn contract_terms(form: &[(u32, i64)], x: &Multivector) -> Multivector {
    let mut out = Multivector::zero(x.ell, x.ring);
    for (s, c) in x.terms() {
        for &(t, v) in form {
            if t & s == t {
                let k = shuffle_sign(t, s) * v;
                out.add_term(s & !t, c * BigRational::from_integer(k.into()));
            }
        }
    }
    out
}

/// `ι_μ(x)`: lowers exterior degree by exactly three.
pub fn contract(mu: &ThreeForm, x: &Multivector) -> Result<Multivector> {
    if mu.ell() != x.ell {
        return Err(Error::Mismatch(format!("form on ℓ = {} vs multivector on ℓ = {}", mu.ell(), x.ell)));
    }
    Ok(contract_terms(&mu.masked(), x))
}

/// Alternating 6-form, stored by its values on increasing 6-subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixForm {
    ell: usize,
    coeffs: BTreeMap<u32, i64>,
}

impl SixForm {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value on the subset with the given 1-based indices (any order is
    /// treated as increasing).
    pub fn coeff(&self, indices: &[usize; 6]) -> i64 {
        let mask = indices.iter().fold(0u32, |m, &i| m | 1 << (i - 1));
        self.coeffs.get(&mask).copied().unwrap_or(0)
    }

    pub fn masked(&self) -> Vec<(u32, i64)> {
        self.coeffs.iter().map(|(m, c)| (*m, *c)).collect()
    }

    pub fn mod2(&self) -> SixForm {
        SixForm {
            ell: self.ell,
            coeffs: self.coeffs.iter().filter(|(_, c)| *c % 2 != 0).map(|(m, _)| (*m, 1)).collect(),
        }
    }
}

/// `a ∧ b` over Z: on each 6-subset, the signed sum over its splittings
/// into two triples.
pub fn form_wedge(a: &ThreeForm, b: &ThreeForm) -> Result<SixForm> {
    if a.ell() != b.ell() {
        return Err(Error::Mismatch(format!("ell {} vs {}", a.ell(), b.ell())));
    }
    let mut coeffs: BTreeMap<u32, i64> = BTreeMap::new();
    for (ta, ca) in a.masked() {
        for (tb, cb) in b.masked() {
            if ta & tb == 0 {
                *coeffs.entry(ta | tb).or_insert(0) += shuffle_sign(ta, ta | tb) * ca * cb;
            }
        }
    }
    coeffs.retain(|_, c| *c != 0);
    Ok(SixForm { ell: a.ell(), coeffs })
}

/// Basis of Λ^k(R^ℓ) in increasing mask order.
pub fn graded_basis(ell: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k > ell {
        return out;
    }
    // Gosper's hack enumerates k-subsets in increasing order.
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << ell;
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(v as u32);
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// One exterior degree with its basis and a reverse index.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: usize,
    pub basis: Vec<u32>,
    index: std::collections::HashMap<u32, usize>,
}

impl GradedPiece {
    pub fn new(ell: usize, degree: usize) -> Self {
        let basis = graded_basis(ell, degree);
        let index = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Self { degree, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.index.get(&mask).copied()
    }
}

/// Matrix of `ι_μ : Λ^k → Λ^{k−3}` over Z.
pub fn contraction_matrix_int(mu: &ThreeForm, k: usize) -> IntMatrix {
    let ell = mu.ell();
    let src = GradedPiece::new(ell, k);
    if k < 3 {
        return IntMatrix::zeros(0, src.dim());
    }
    let tgt = GradedPiece::new(ell, k - 3);
    let form = mu.masked();
    let mut m = IntMatrix::zeros(tgt.dim(), src.dim());
    for (j, &s) in src.basis.iter().enumerate() {
        for &(t, v) in &form {
            if t & s == t {
                let i = tgt.index_of(s & !t).expect("degree drops by three");
                m.add_to(i, j, &BigInt::from(shuffle_sign(t, s) * v));
            }
        }
    }
    m
}

/// Matrix of `ι_μ : Λ^k → Λ^{k−3}` reduced mod 2.
pub fn contraction_matrix_f2(mu: &ThreeForm, k: usize) -> F2Matrix {
    let ell = mu.ell();
    let src = GradedPiece::new(ell, k);
    if k < 3 {
        return F2Matrix::zeros(0, src.dim());
    }
    let tgt = GradedPiece::new(ell, k - 3);
    let odd: Vec<u32> = mu.masked().into_iter().filter(|(_, v)| v % 2 != 0).map(|(t, _)| t).collect();
    let mut m = F2Matrix::zeros(tgt.dim(), src.dim());
    for (j, &s) in src.basis.iter().enumerate() {
        for &t in &odd {
            if t & s == t {
                m.flip(tgt.index_of(s & !t).expect("degree drops by three"), j);
            }
        }
    }
    m
}

/// Convenience: the integer value of a coefficient, if integral.
pub fn integer_coeff(c: &BigRational) -> Option<BigInt> {
    c.is_integer().then(|| c.to_integer())
}

/// True when every coefficient is ±1 or 0 (useful in tests over Z).
pub fn is_unimodular(x: &Multivector) -> bool {
    x.terms().all(|(_, c)| c.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Coefficients = Coefficients::F2;
    const Z: Coefficients = Coefficients::Z;

    fn mu(ell: usize, ts: &[([usize; 3], i64)]) -> ThreeForm {
        ThreeForm::from_triples(ell, ts.iter().copied()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let e1 = Multivector::basis(3, Z, &[1], 1);
        let e2 = Multivector::basis(3, Z, &[2], 1);
        assert_eq!(wedge(&e1, &e2).unwrap(), Multivector::basis(3, Z, &[1, 2], 1));
        assert!(wedge(&e1, &e1).unwrap().is_zero());
        assert_eq!(wedge(&e2, &e1).unwrap(), Multivector::basis(3, Z, &[1, 2], -1));
        let e2f = Multivector::basis(3, F2, &[2], 1);
        assert!(wedge(&e1, &e2f).is_err());
        assert!(wedge(&e1, &Multivector::basis(4, Z, &[2], 1)).is_err());
    }

    #[test]
    fn contract_examples() {
        let m = mu(3, &[([1, 2, 3], 1)]);
        let top = Multivector::basis(3, Z, &[1, 2, 3], 1);
        assert_eq!(contract(&m, &top).unwrap(), Multivector::basis(3, Z, &[], 1));
        let low = Multivector::basis(3, Z, &[1, 2], 1);
        assert!(contract(&m, &low).unwrap().is_zero());
        let m4 = mu(4, &[([1, 2, 3], 1)]);
        let x = Multivector::basis(4, F2, &[1, 2, 3, 4], 1);
        assert_eq!(contract(&m4, &x).unwrap(), Multivector::basis(4, F2, &[4], 1));
    }

    #[test]
    fn form_wedge_examples() {
        let m = mu(6, &[([1, 2, 3], 1), ([1, 4, 5], 1), ([4, 5, 6], 3), ([2, 3, 6], 1)]);
        assert!(form_wedge(&m, &m).unwrap().mod2().is_zero());
        assert!(form_wedge(&m, &m).unwrap().is_zero());
        let a = mu(6, &[([1, 2, 3], 1)]);
        let b = mu(6, &[([4, 5, 6], 1)]);
        assert_eq!(form_wedge(&a, &b).unwrap().coeff(&[1, 2, 3, 4, 5, 6]), 1);
        let c = mu(6, &[([1, 4, 5], 1)]);
        assert!(form_wedge(&a, &c).unwrap().is_zero());
    }

    #[test]
    fn graded_basis_counts() {
        assert_eq!(graded_basis(5, 0), vec![0]);
        assert_eq!(graded_basis(5, 2).len(), 10);
        assert_eq!(graded_basis(14, 7).len(), 3432);
        let b = graded_basis(4, 2);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert!(graded_basis(3, 4).is_empty());
    }

    #[test]
    fn contraction_matrix_matches_contract() {
        let m = mu(5, &[([1, 2, 3], 2), ([2, 4, 5], -1), ([1, 3, 5], 1)]);
        for k in 0..=5 {
            let mat = contraction_matrix_int(&m, k);
            let src = GradedPiece::new(5, k);
            for (j, &s) in src.basis.iter().enumerate() {
                let x = Multivector::from_terms(5, Z, [(s, BigRational::one())]).unwrap();
                let y = contract(&m, &x).unwrap();
                if k < 3 {
                    assert!(y.is_zero());
                    continue;
                }
                let tgt = GradedPiece::new(5, k - 3);
                for (i, &t) in tgt.basis.iter().enumerate() {
                    assert_eq!(BigRational::from_integer(mat.get(i, j).clone()), y.coeff(t));
                }
            }
            assert_eq!(contraction_matrix_f2(&m, k), mat.mod2());
        }
    }

    #[test]
    fn shuffle_sign_small_cases() {
        // moving {2} in front of {1,2}: one transposition
        assert_eq!(shuffle_sign(0b10, 0b11), -1);
        assert_eq!(shuffle_sign(0b01, 0b11), 1);
        assert_eq!(shuffle_sign(0b111, 0b111), 1);
    }
}
