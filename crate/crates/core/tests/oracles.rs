//! Tabulated values checked against brute-force computations written
//! independently of the library.

use hfcup::cupcomplex::{psi_map, psi_report, CupComplex};
use hfcup::cupform::{complexity, reduction_trace, split_component, ThreeForm};
use hfcup::exterior::{contract, form_wedge, wedge, Coefficients, Multivector};
use hfcup::hypercube::{cone_homology_dim, cone_rank, face_complex, gluing_reduce, glued_ranks, Face, HyperboxComplex, MappingCone};
use hfcup::linalg::{homology_rank, smith_normal_form, ChainComplex, F2Matrix, IntMatrix, Ring};
use hfcup::specseq::{collapse_check, identify_e3_with_exterior, page, FilteredComplex};
use hfcup::surgery::{
    build_cup_model_cube, knot_surgery_complex, perturb_model, spinc_classes, FramedLinkLattice, HalfInt, ModelKnotComplex,
    SValue, Sign,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn form(ell: usize, triples: &[([usize; 3], i64)]) -> ThreeForm {
    ThreeForm::from_triples(ell, triples.iter().copied()).unwrap()
}

/// Rank over Q of a dense integer matrix by rational elimination.
fn rank_q(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone() / m[rank][c].clone();
                for j in c..cols {
                    let sub = f.clone() * m[rank][j].clone();
                    m[i][j] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_f2(mut m: Vec<Vec<bool>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c] {
                for j in c..cols {
                    m[i][j] ^= m[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Interior product on all of Λ*, as a 2^ℓ × 2^ℓ integer matrix indexed by
/// subsets; the sign counts elements of `S ∖ T` preceding each element of `T`.
fn brute_contraction(mu: &ThreeForm) -> Vec<Vec<i64>> {
    let ell = mu.ell();
    let n = 1usize << ell;
    let mut m = vec![vec![0i64; n]; n];
    for s in 0..n {
        for i in 1..=ell {
            for j in i + 1..=ell {
                for k in j + 1..=ell {
                    let c = mu.coeff([i, j, k]);
                    let t = (1 << (i - 1)) | (1 << (j - 1)) | (1 << (k - 1));
                    if c == 0 || s & t != t {
                        continue;
                    }
                    let rest = s & !t;
                    let inversions: u32 = [i, j, k].iter().map(|&x| (rest & ((1 << (x - 1)) - 1)).count_ones()).sum();
                    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
                    m[rest][s] += sign * c;
                }
            }
        }
    }
    m
}

fn brute_ranks(mu: &ThreeForm) -> (usize, usize) {
    let m = brute_contraction(mu);
    let n = m.len();
    let f2 = rank_f2(m.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) == 1).collect()).collect());
    let q = rank_q(m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect());
    (n - 2 * f2, n - 2 * q)
}

fn brute_homology(d: &F2Matrix) -> usize {
    let rows: Vec<Vec<bool>> = (0..d.rows()).map(|i| (0..d.cols()).map(|j| d.get(i, j)).collect()).collect();
    d.rows() - 2 * rank_f2(rows)
}

fn mv(ell: usize, ring: Coefficients, indices: &[usize], c: i64) -> Multivector {
    Multivector::basis(ell, ring, indices, c)
}

#[test]
fn small_linear_algebra_values() {
    let m = F2Matrix::from_dense(&[&[1, 1, 0], &[0, 1, 1]]);
    assert_eq!(m.rank(), 2);
    let k = F2Matrix::from_dense(&[&[1, 1]]).kernel_basis();
    assert_eq!(k.len(), 1);
    assert!(k[0].get(0) && k[0].get(1));
    let s = smith_normal_form(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
    assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
    let zero4 = IntMatrix::zeros(4, 4);
    let mut one = IntMatrix::zeros(4, 1);
    one.set(0, 0, BigInt::from(1));
    assert_eq!(homology_rank(&one, &zero4, Ring::F2).unwrap(), 3);
    assert_eq!(homology_rank(&one, &zero4, Ring::Q).unwrap(), 3);
}

#[test]
fn exterior_values() {
    let e21 = wedge(&mv(2, Coefficients::Z, &[2], 1), &mv(2, Coefficients::Z, &[1], 1)).unwrap();
    assert_eq!(e21, mv(2, Coefficients::Z, &[1, 2], -1));
    let mu3 = form(3, &[([1, 2, 3], 1)]);
    assert_eq!(contract(&mu3, &mv(3, Coefficients::Z, &[1, 2, 3], 1)).unwrap(), mv(3, Coefficients::Z, &[], 1));
    let mu4 = form(4, &[([1, 2, 3], 1)]);
    assert_eq!(contract(&mu4, &mv(4, Coefficients::F2, &[1, 2, 3, 4], 1)).unwrap(), mv(4, Coefficients::F2, &[4], 1));
    let a = form(6, &[([1, 2, 3], 1)]);
    let b = form(6, &[([4, 5, 6], 1)]);
    assert_eq!(form_wedge(&a, &b).unwrap().coeff(&[1, 2, 3, 4, 5, 6]), 1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let mut mu = ThreeForm::zero(7);
        for _ in 0..8 {
            let mut t = [rng.gen_range(1..=7), rng.gen_range(1..=7), rng.gen_range(1..=7)];
            t.sort_unstable();
            if t[0] < t[1] && t[1] < t[2] {
                mu.set(t, rng.gen_range(1..=3));
            }
        }
        assert!(form_wedge(&mu, &mu).unwrap().mod2().is_zero());
    }
}

#[test]
fn form_bookkeeping_values() {
    assert_eq!(complexity(&form(3, &[([1, 2, 3], 1)])), 1);
    let one = form(3, &[([1, 2, 3], 1)]);
    let two = one.add(&one).unwrap();
    assert_eq!(two, form(3, &[([1, 2, 3], 2)]));
    assert!(two.mod2().is_zero());
    let (rest, single) = split_component(&form(5, &[([1, 2, 3], 1), ([1, 4, 5], 1)]), 1).unwrap();
    assert_eq!((rest, single), (form(5, &[([1, 2, 3], 1)]), form(5, &[([1, 4, 5], 1)])));
    let three = form(4, &[([1, 2, 3], 1), ([1, 2, 4], 1), ([1, 3, 4], 1)]);
    let (rest, single) = split_component(&three, 1).unwrap();
    assert_eq!((complexity(&rest), complexity(&single)), (2, 1));
    let mixed = form(6, &[([1, 2, 3], 1), ([1, 4, 5], 1), ([2, 4, 6], 1)]);
    let (rest, single) = split_component(&mixed, 1).unwrap();
    assert_eq!((complexity(&rest), complexity(&single)), (2, 1));
    let tree = reduction_trace(&form(5, &[([1, 2, 3], 1), ([1, 4, 5], 1)]));
    assert_eq!(tree.depth(), 1);
    assert_eq!(tree.leaves().len(), 2);
}

#[test]
fn cup_ranks_match_brute_force() {
    let cases: Vec<(ThreeForm, usize, usize)> = vec![
        (ThreeForm::zero(1), 2, 2),
        (ThreeForm::zero(2), 4, 4),
        (form(3, &[([1, 2, 3], 1)]), 6, 6),
        (form(3, &[([1, 2, 3], 2)]), 8, 6),
        (form(6, &[([1, 2, 3], 1), ([4, 5, 6], 1)]), 36, 36),
        (form(4, &[([1, 2, 3], 1)]), 12, 12),
    ];
    for (mu, f2, q) in cases {
        let r = CupComplex::new(mu.clone(), Ring::F2).homology_rank();
        assert_eq!((r.rank_f2, r.rank_q), (f2, q), "{mu:?}");
        assert_eq!(brute_ranks(&mu), (f2, q), "{mu:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let ell = rng.gen_range(3..=7);
        let mut mu = ThreeForm::zero(ell);
        for _ in 0..rng.gen_range(0..8) {
            let mut t = [rng.gen_range(1..=ell), rng.gen_range(1..=ell), rng.gen_range(1..=ell)];
            t.sort_unstable();
            if t[0] < t[1] && t[1] < t[2] {
                mu.set(t, rng.gen_range(-4..=4));
            }
        }
        let r = CupComplex::new(mu.clone(), Ring::F2).homology_rank();
        assert_eq!((r.rank_f2, r.rank_q), brute_ranks(&mu), "{mu:?}");
    }
}

#[test]
fn psi_values() {
    let mu = form(5, &[([1, 2, 3], 1), ([1, 4, 5], 1)]);
    assert!(psi_map(&mu, &mu, 1).unwrap().is_zero());
    let (a, b) = (form(5, &[([1, 2, 3], 1)]), form(5, &[([1, 4, 5], 1)]));
    let p = psi_report(&a, &b, 1).unwrap();
    assert!(p.passed());
    assert_eq!(p.rank_psi, p.rank_dk);
    assert_eq!(p.hc_rank, brute_ranks(&mu).0);
}

#[test]
fn hypercube_values() {
    let mut h = HyperboxComplex::hypercube(2, |_| 1).unwrap();
    let one = F2Matrix::identity(1);
    h.set_map(&[0, 0], 0b01, one.clone()).unwrap();
    h.set_map(&[1, 0], 0b10, one.clone()).unwrap();
    let v = h.check_relations();
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].vertex.clone(), v[0].direction.clone()), (vec![0, 0], vec![1, 1]));

    let cube = build_cup_model_cube(&form(3, &[([1, 2, 3], 1)])).unwrap();
    let t = cube.total_complex().unwrap();
    assert_eq!(t.homology_dim(), 6);
    assert_eq!(brute_homology(t.differential()), 6);
    let top = face_complex(&t, &Face::parse("**1").unwrap()).unwrap().homology_dim(&t).unwrap();
    let bottom = face_complex(&t, &Face::parse("**0").unwrap()).unwrap().homology_dim(&t).unwrap();
    assert_eq!((top, bottom), (4, 4));

    let v4 = ChainComplex::new(F2Matrix::zeros(4, 4)).unwrap();
    let mut f = F2Matrix::zeros(4, 4);
    f.set(2, 1, true);
    let cone = MappingCone::new(v4.clone(), v4, f).unwrap();
    assert_eq!(cone_rank(&cone).unwrap(), 6);
    assert_eq!(cone_homology_dim(&cone), 6);

    let (zero, id) = (F2Matrix::zeros(3, 3), F2Matrix::identity(3));
    assert_eq!(gluing_reduce(&zero, &id, &id, &id).unwrap(), id);
    assert_eq!(glued_ranks(&zero, &id, &id, &id).unwrap(), (0, 0));

    let cube6 = build_cup_model_cube(&form(6, &[([1, 2, 3], 1), ([4, 5, 6], 1)])).unwrap();
    assert!(cube6.check_relations().is_empty());
    assert_eq!(cube6.total_complex().unwrap().homology_dim(), 36);
}

#[test]
fn spectral_values() {
    let mu = form(3, &[([1, 2, 3], 1)]);
    let fc = FilteredComplex::from_hypercube(&build_cup_model_cube(&mu).unwrap().total_complex().unwrap()).unwrap();
    let e1 = page(&fc, 1).unwrap();
    for p in 0..=3 {
        assert_eq!(e1.dim_at(p), [1, 3, 3, 1][p as usize]);
    }
    assert_eq!(e1.total_dim(), 8);
    let c = collapse_check(&fc, 4).unwrap();
    assert_eq!(c.d_ranks, vec![0, 0, 1]);
    assert!(c.collapses);
    assert_eq!(c.e_infinity, 6);
    assert!(identify_e3_with_exterior(&fc, &mu).unwrap().matches);

    let mu4 = form(4, &[([1, 2, 3], 1)]);
    let fc4 = FilteredComplex::from_hypercube(&build_cup_model_cube(&mu4).unwrap().total_complex().unwrap()).unwrap();
    let id = identify_e3_with_exterior(&fc4, &mu4).unwrap();
    assert!(id.matches);
    assert_eq!(id.d3_rank, 2);

    let mut d = F2Matrix::zeros(6, 6);
    d.set(4, 0, true);
    d.set(5, 0, true);
    d.set(5, 1, true);
    let cone = FilteredComplex::new(d, vec![1, 1, 1, 0, 0, 0], vec![1, 1, 1, 0, 0, 0]).unwrap();
    let e1 = page(&cone, 1).unwrap();
    assert_eq!(e1.d_rank(), 2);
    let c = collapse_check(&cone, 2).unwrap();
    assert!(c.collapses);
    assert_eq!(c.e_infinity, 2);
}

#[test]
fn perturbations() {
    let flat = build_cup_model_cube(&ThreeForm::zero(4)).unwrap();
    assert!(perturb_model(&flat, &[(vec![0; 4], 0b1111, F2Matrix::identity(1))]).is_ok());
    let cube = build_cup_model_cube(&form(7, &[([1, 2, 3], 1)])).unwrap();
    assert!(perturb_model(&cube, &[(vec![0; 7], 0b1111000, F2Matrix::identity(1))]).is_err());
    assert!(perturb_model(&flat, &[(vec![0; 4], 0b0111, F2Matrix::identity(1))]).is_err());
}

#[test]
fn spinc_values() {
    let zero = FramedLinkLattice::new(vec![vec![0; 3]; 3]).unwrap();
    let r = spinc_classes(&zero).unwrap();
    assert_eq!(r.b1, 3);
    assert_eq!(r.classes.len(), 1);
    assert_eq!(r.classes[0].representative, vec![HalfInt(0); 3]);

    let lambda = vec![vec![0, 0, 1, 0], vec![0, 0, 1, 0], vec![1, 1, 0, 0], vec![0, 0, 0, 0]];
    let l = FramedLinkLattice::new(lambda).unwrap();
    let s0 = vec![HalfInt(1), HalfInt(1), HalfInt(2), HalfInt(0)];
    assert!(l.contains(&s0));
    assert!(l.is_torsion(&s0).unwrap());
    let r = spinc_classes(&l).unwrap();
    let key = l.class_key(&s0).unwrap();
    assert!(r.classes.iter().any(|c| c.key == key && c.torsion));
}

#[test]
fn knot_values() {
    let t = ModelKnotComplex::trefoil();
    let plus = t.a_infinity(SValue::PlusInf);
    let zero = t.a_infinity(SValue::Finite(0));
    let (a, b, c) = (0, 1, 2);
    assert_eq!((plus.entry(a, b), plus.entry(c, b)), (vec![1], vec![0]));
    assert_eq!((zero.entry(a, b), zero.entry(c, b)), (vec![0], vec![0]));
    assert!(zero.mul(&zero).is_zero());
    let i = t.inclusion_map(1, Sign::Minus);
    assert_eq!((i.entry(a, a), i.entry(b, b), i.entry(c, c)), (vec![0], vec![1], vec![2]));
    let minus = t.a_infinity(SValue::MinusInf);
    assert_eq!(minus.mul(&i), i.mul(&t.a_infinity(SValue::Finite(1))));

    let u = ModelKnotComplex::unknot();
    assert_eq!(knot_surgery_complex(&u, 0, None, None).unwrap().ranks.get(&0), Some(&2));
    assert_eq!(knot_surgery_complex(&u, 1, None, None).unwrap().total_rank, 1);
    let five = knot_surgery_complex(&u, 5, None, None).unwrap();
    assert_eq!(five.ranks.len(), 5);
    assert!(five.ranks.values().all(|&r| r == 1));
    assert_eq!(knot_surgery_complex(&t, 1, None, None).unwrap().total_rank, 1);
}
