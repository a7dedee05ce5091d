//! The cup homology complex `(Λ*, ι_μ)`, its ranks over F₂ and Q, and the
//! homology-level maps attached to a split of μ along one generator.

use serde::{Deserialize, Serialize};

use crate::cupform::{complement_part, component_part, split_component, ThreeForm};
use crate::error::{Error, Result};
use crate::exterior::{contraction_matrix_f2, contraction_matrix_int, shuffle_sign, GradedPiece};
use crate::linalg::{induced_map, sparse_rank_mod_p, sparse_rank_q, BitVec, F2Matrix, HomologyBasis, IntMatrix, Ring};

/// Degree bookkeeping for the suppressed Laurent variable: `U` has
/// homological degree −2 and `d₃` carries one factor of `U⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UConvention {
    pub u_degree: i32,
    pub d3_u_power: i32,
}

impl Default for UConvention {
    fn default() -> Self {
        Self {
            u_degree: -2,
            d3_u_power: -1,
        }
    }
}

/// Differential matrix in one of the two coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DifferentialMatrix {
    F2(F2Matrix),
    Q(IntMatrix),
}

impl DifferentialMatrix {
    pub fn rows(&self) -> usize {
        match self {
            DifferentialMatrix::F2(m) => m.rows(),
            DifferentialMatrix::Q(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            DifferentialMatrix::F2(m) => m.cols(),
            DifferentialMatrix::Q(m) => m.cols(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DifferentialMatrix::F2(m) => m.is_zero(),
            DifferentialMatrix::Q(m) => m.is_zero(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            DifferentialMatrix::F2(m) => m.rank(),
            DifferentialMatrix::Q(m) => m.rank_q(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupComplex {
    mu: ThreeForm,
    ring: Ring,
    u_convention: UConvention,
}

/// Homology ranks of a cup complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank_f2: usize,
    pub rank_q: usize,
    /// F₂ homology dimension in each exterior degree `0..=ℓ`.
    pub by_degree: Vec<usize>,
    pub two_torsion: bool,
}

impl CupComplex {
    pub fn new(mu: ThreeForm, ring: Ring) -> Self {
        Self {
            mu,
            ring,
            u_convention: UConvention::default(),
        }
    }

    pub fn mu(&self) -> &ThreeForm {
        &self.mu
    }

    pub fn ell(&self) -> usize {
        self.mu.ell()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn u_convention(&self) -> UConvention {
        self.u_convention
    }

    /// `ι_μ : Λ^i → Λ^{i−3}` in the complex's ring.
    pub fn differential_matrix(&self, degree: usize) -> Result<DifferentialMatrix> {
        if degree > self.ell() {
            return Err(Error::DimensionMismatch(format!("degree {degree} exceeds ell = {}", self.ell())));
        }
        Ok(match self.ring {
            Ring::F2 => DifferentialMatrix::F2(contraction_matrix_f2(&self.mu, degree)),
            Ring::Q => DifferentialMatrix::Q(contraction_matrix_int(&self.mu, degree)),
        })
    }

    /// Full `2^ℓ × 2^ℓ` differential over F₂, indexed by subset mask.
    pub fn full_differential_f2(&self) -> F2Matrix {
        contraction_by_masks(&self.mu, self.ell())
    }

    /// Checks `d∘d = 0` degree by degree in the complex's ring.
    pub fn is_complex(&self) -> bool {
        (6..=self.ell()).all(|i| match self.ring {
            Ring::F2 => contraction_matrix_f2(&self.mu, i - 3).mul(&contraction_matrix_f2(&self.mu, i)).is_zero(),
            Ring::Q => contraction_matrix_int(&self.mu, i - 3).mul(&contraction_matrix_int(&self.mu, i)).is_zero(),
        })
    }

    /// Ranks of `ι_μ` on each `Λ^i` over F₂ (index `i`, zero for `i < 3`).
    pub fn ranks_f2(&self) -> Vec<usize> {
        let ell = self.ell();
        (0..=ell)
            .map(|i| if i < 3 { 0 } else { contraction_matrix_f2(&self.mu, i).rank() })
            .collect()
    }

    /// Ranks of `ι_μ` on each `Λ^i` over Q.
    pub fn ranks_q(&self) -> Vec<usize> {
        self.ranks_q_from(self.ranks_f2())
    }

    /// Exact Q-ranks starting from known lower bounds (F₂ ranks qualify).
    ///
    /// `d∘d = 0` bounds each rank from above by the neighbouring kernel
    /// dimensions. Uncertified degrees are first raised by a rank mod a
    /// large prime, then settled by exact integer elimination.
    pub fn ranks_q_from(&self, mut lower: Vec<usize>) -> Vec<usize> {
        let ell = self.ell();
        let primitive = self.mu.primitive();
        let mu = &primitive;
        if primitive != self.mu {
            let reduced = CupComplex::new(primitive.clone(), Ring::F2).ranks_f2();
            for (l, r) in lower.iter_mut().zip(reduced) {
                *l = (*l).max(r);
            }
        }
        let open = |lower: &[usize]| -> Vec<usize> {
            (3..=ell)
                .filter(|&i| {
                    let into_kernel = binomial(ell, i - 3) - if i >= 6 { lower[i - 3] } else { 0 };
                    let from_cokernel = binomial(ell, i) - lower.get(i + 3).copied().unwrap_or(0);
                    lower[i] < into_kernel.min(from_cokernel)
                })
                .collect()
        };
        let pending = open(&lower);
        if pending.is_empty() {
            return lower;
        }
        let modular: Vec<(usize, usize)> = std::thread::scope(|scope| {
            let handles: Vec<_> = pending
                .iter()
                .map(|&i| scope.spawn(move || (i, sparse_rank_mod_p(&degree_columns(mu, i), binomial(ell, i - 3)))))
                .collect();
            handles.into_iter().map(|h| h.join().expect("rank worker panicked")).collect()
        });
        for (i, r) in modular {
            lower[i] = lower[i].max(r);
        }
        for i in open(&lower) {
            lower[i] = sparse_rank_q(degree_columns(mu, i), binomial(ell, i - 3));
        }
        lower
    }

    /// Homology ranks over both rings.
    pub fn homology_rank(&self) -> RankReport {
        let f2 = self.ranks_f2();
        let q = self.ranks_q_from(f2.clone());
        report_from_ranks(self.ell(), &f2, &q)
    }

    /// Total homology rank in the complex's own ring.
    pub fn rank(&self) -> usize {
        let ranks = match self.ring {
            Ring::F2 => self.ranks_f2(),
            Ring::Q => self.ranks_q(),
        };
        (1usize << self.ell()) - 2 * ranks.iter().sum::<usize>()
    }
}

fn report_from_ranks(ell: usize, f2: &[usize], q: &[usize]) -> RankReport {
    let total = 1usize << ell;
    let rank_f2 = total - 2 * f2.iter().sum::<usize>();
    let rank_q = total - 2 * q.iter().sum::<usize>();
    let by_degree = (0..=ell)
        .map(|i| binomial(ell, i) - f2[i] - f2.get(i + 3).copied().unwrap_or(0))
        .collect();
    RankReport {
        rank_f2,
        rank_q,
        by_degree,
        two_torsion: rank_f2 > rank_q,
    }
}

/// Images of the `Λ^i` basis under `ι_μ` over Z, as sorted sparse vectors
/// in the `Λ^{i−3}` basis.
fn degree_columns(mu: &ThreeForm, i: usize) -> Vec<Vec<(u32, i64)>> {
    let ell = mu.ell();
    let src = GradedPiece::new(ell, i);
    let tgt = GradedPiece::new(ell, i - 3);
    let form = mu.masked();
    src.basis
        .iter()
        .map(|&s| {
            let mut col: Vec<(u32, i64)> = form
                .iter()
                .filter(|(t, _)| t & s == *t)
                .map(|&(t, v)| (tgt.index_of(s & !t).expect("degree drops by three") as u32, shuffle_sign(t, s) * v))
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            col
        })
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

/// `ι_μ` mod 2 on the whole exterior algebra, basis indexed by mask value.
fn contraction_by_masks(mu: &ThreeForm, ell: usize) -> F2Matrix {
    let n = 1usize << ell;
    let odd: Vec<u32> = mu.masked().into_iter().filter(|(_, v)| v % 2 != 0).map(|(t, _)| t).collect();
    let mut m = F2Matrix::zeros(n, n);
    for s in 0..n as u32 {
        for &t in &odd {
            if t & s == t {
                m.flip((s & !t) as usize, s as usize);
            }
        }
    }
    m
}

/// Homology ranks of `a ⊕ b` on `ℓ₁ + ℓ₂` generators, checked against the
/// product of the two ranks in both rings.
pub fn kunneth_rank(a: &ThreeForm, b: &ThreeForm) -> Result<usize> {
    let ra = CupComplex::new(a.clone(), Ring::F2).homology_rank();
    let rb = CupComplex::new(b.clone(), Ring::F2).homology_rank();
    let rab = CupComplex::new(a.disjoint_sum(b), Ring::F2).homology_rank();
    if rab.rank_f2 != ra.rank_f2 * rb.rank_f2 {
        return Err(Error::Inconsistent(format!(
            "F2 rank {} of the sum differs from {} · {}",
            rab.rank_f2, ra.rank_f2, rb.rank_f2
        )));
    }
    if rab.rank_q != ra.rank_q * rb.rank_q {
        return Err(Error::Inconsistent(format!(
            "Q rank {} of the sum differs from {} · {}",
            rab.rank_q, ra.rank_q, rb.rank_q
        )));
    }
    Ok(rab.rank_f2)
}

/// The r-free half `V = span{e_S : r ∉ S}` with differential `ι_ν`, and the
/// maps `D_i(α) = ι_{κ_i}(e_r ∧ α)` induced by the r-parts `κ_i`.
#[derive(Clone, Debug)]
pub struct SplitData {
    pub r: usize,
    /// Masks of the basis of `V` in increasing order.
    pub basis: Vec<u32>,
    pub nu: ThreeForm,
    pub d_nu: F2Matrix,
    pub d1: F2Matrix,
    pub d2: F2Matrix,
}

impl SplitData {
    pub fn new(mu1: &ThreeForm, mu2: &ThreeForm, r: usize) -> Result<Self> {
        if mu1.ell() != mu2.ell() {
            return Err(Error::Mismatch(format!("ell {} vs {}", mu1.ell(), mu2.ell())));
        }
        let ell = mu1.ell();
        if !(1..=ell).contains(&r) {
            return Err(Error::DimensionMismatch(format!("index {r} outside 1..={ell}")));
        }
        let nu = complement_part(mu1, r);
        if nu != complement_part(mu2, r) {
            return Err(Error::Mismatch(format!("forms disagree on triples avoiding {r}")));
        }
        let rbit = 1u32 << (r - 1);
        let basis: Vec<u32> = (0..1u32 << ell).filter(|s| s & rbit == 0).collect();
        let index = |m: u32| basis.binary_search(&m).expect("r-free mask");
        let n = basis.len();

        let odd = |f: &ThreeForm| -> Vec<u32> { f.masked().into_iter().filter(|(_, v)| v % 2 != 0).map(|(t, _)| t).collect() };
        let nu_t = odd(&nu);
        let k1 = odd(&component_part(mu1, r));
        let k2 = odd(&component_part(mu2, r));

        let mut d_nu = F2Matrix::zeros(n, n);
        let mut d1 = F2Matrix::zeros(n, n);
        let mut d2 = F2Matrix::zeros(n, n);
        for (j, &s) in basis.iter().enumerate() {
            for &t in &nu_t {
                if t & s == t {
                    d_nu.flip(index(s & !t), j);
                }
            }
            let sr = s | rbit;
            for (d, kappa) in [(&mut d1, &k1), (&mut d2, &k2)] {
                for &t in kappa.iter() {
                    if t & sr == t {
                        d.flip(index(sr & !t), j);
                    }
                }
            }
        }
        Ok(Self { r, basis, nu, d_nu, d1, d2 })
    }

    pub fn homology(&self) -> Result<HomologyBasis> {
        HomologyBasis::of_differential(&self.d_nu)
    }
}

/// Homology-level data of a split, all over F₂.
#[derive(Clone, Debug)]
pub struct PsiMaps {
    pub homology_dim: usize,
    pub d1: F2Matrix,
    pub d2: F2Matrix,
    /// `(D₁ + D₂)_*`
    pub dk: F2Matrix,
    /// `(D₁ + D₂)_* + (D₁)_*(D₂)_*`
    pub psi: F2Matrix,
}

pub fn psi_maps(mu1: &ThreeForm, mu2: &ThreeForm, r: usize) -> Result<PsiMaps> {
    let data = SplitData::new(mu1, mu2, r)?;
    let h = data.homology()?;
    let d1 = induced_map(&h, &h, &data.d1)?;
    let d2 = induced_map(&h, &h, &data.d2)?;
    let dk = d1.add(&d2);
    let psi = dk.add(&d1.mul(&d2));
    Ok(PsiMaps {
        homology_dim: h.dim(),
        d1,
        d2,
        dk,
        psi,
    })
}

/// `Ψ = (ι_{κ₁} + ι_{κ₂})_* + (ι_{κ₁})_*(ι_{κ₂})_*` on `H(V, ι_ν)`, where the
/// `κ_i` are the parts of `mu_i` containing `r` (each precomposed with
/// `e_r ∧ ·`).
pub fn psi_map(mu1: &ThreeForm, mu2: &ThreeForm, r: usize) -> Result<F2Matrix> {
    Ok(psi_maps(mu1, mu2, r)?.psi)
}

/// Outcome of comparing `ker (D_K)_*` with `ker Ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelContainment {
    pub holds: bool,
    /// Homology coordinates of a class in `ker (D_K)_*` not killed by `Ψ`.
    pub witness: Option<Vec<usize>>,
}

pub fn kernel_containment_check(mu1: &ThreeForm, mu2: &ThreeForm, r: usize) -> Result<KernelContainment> {
    let maps = psi_maps(mu1, mu2, r)?;
    Ok(containment(&maps))
}

fn containment(maps: &PsiMaps) -> KernelContainment {
    for v in maps.dk.kernel_basis() {
        if !maps.psi.mul_vec(&v).is_zero() {
            return KernelContainment {
                holds: false,
                witness: Some(v.ones().collect()),
            };
        }
    }
    KernelContainment { holds: true, witness: None }
}

/// Every check attached to one split, with the ranks involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiReport {
    pub r: usize,
    pub homology_dim: usize,
    pub rank_dk: usize,
    pub rank_psi: usize,
    /// `(Id + D_i)_*² = Id` for both pieces.
    pub involutions: bool,
    /// `Ψ = Id + (Id + D₁)_* (Id + D₂)_*⁻¹`.
    pub product_identity: bool,
    pub kernel: KernelContainment,
    /// Rank of the cup homology of the recombined form.
    pub hc_rank: usize,
    /// `2 dim H − 2 rk (D_K)_*`, which must equal `hc_rank`.
    pub cone_dk_rank: usize,
    /// `2 dim H − 2 rk Ψ`.
    pub cone_psi_rank: usize,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.involutions
            && self.product_identity
            && self.kernel.holds
            && self.hc_rank == self.cone_dk_rank
            && self.cone_psi_rank >= self.hc_rank
    }
}

pub fn psi_report(mu1: &ThreeForm, mu2: &ThreeForm, r: usize) -> Result<PsiReport> {
    let maps = psi_maps(mu1, mu2, r)?;
    let n = maps.homology_dim;
    let id = F2Matrix::identity(n);
    let a = id.add(&maps.d1);
    let b = id.add(&maps.d2);
    let involutions = a.mul(&a) == id && b.mul(&b) == id;
    let product_identity = match b.inverse() {
        Ok(b_inv) => id.add(&a.mul(&b_inv)) == maps.psi,
        Err(_) => false,
    };
    let recombined = complement_part(mu1, r)
        .add(&component_part(mu1, r))?
        .add(&component_part(mu2, r))?;
    let hc_rank = CupComplex::new(recombined, Ring::F2).rank();
    let rank_dk = maps.dk.rank();
    let rank_psi = maps.psi.rank();
    Ok(PsiReport {
        r,
        homology_dim: n,
        rank_dk,
        rank_psi,
        involutions,
        product_identity,
        kernel: containment(&maps),
        hc_rank,
        cone_dk_rank: 2 * n - 2 * rank_dk,
        cone_psi_rank: 2 * n - 2 * rank_psi,
    })
}

/// The pair `(μ′, ν + μ″)` fed to the Ψ calculus for the split of `mu` at
/// `r`, where `ν` is the part of `mu` avoiding `r`.
pub fn split_pair(mu: &ThreeForm, r: usize) -> Result<(ThreeForm, ThreeForm)> {
    let (first, single) = split_component(mu, r)?;
    let second = complement_part(mu, r).add(&single)?;
    Ok((first, second))
}

/// Homology classes of `(Λ*, ι_μ)` over F₂ (used by the Ψ tests).
pub fn cup_homology_basis(mu: &ThreeForm) -> Result<HomologyBasis> {
    HomologyBasis::of_differential(&contraction_by_masks(mu, mu.ell()))
}

/// Coordinates of a subset mask in the full mask-indexed basis.
pub fn mask_vector(ell: usize, mask: u32) -> BitVec {
    BitVec::unit(1 << ell, mask as usize)
}
