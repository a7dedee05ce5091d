//! Random hyperboxes that satisfy the relations by construction.
//!
//! Start from one complex repeated at every vertex with edges `0` or `Id`
//! chosen so squares commute, then apply moves that preserve the relations:
//! perturb an edge by `∂h + h∂` while correcting the adjacent diagonals,
//! add `∂k + k∂` to a diagonal, add acyclic summands, and change basis at
//! each vertex.

use rand::Rng;

use super::HyperboxComplex;
use crate::error::{Error, Result};
use crate::linalg::F2Matrix;

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> F2Matrix {
    let mut m = F2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen::<bool>() {
                m.set(i, j, true);
            }
        }
    }
    m
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> F2Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// A random differential of rank `k` with `d² = 0`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, k: usize) -> F2Matrix {
    let pairs = rng.gen_range(0..=k / 2);
    let mut n = F2Matrix::zeros(k, k);
    for p in 0..pairs {
        n.set(2 * p + 1, 2 * p, true);
    }
    let p = random_invertible(rng, k);
    p.mul(&n).mul(&p.inverse().expect("invertible"))
}

/// A random hyperbox of the given size (at most two axes) with vertex
/// ranks at most 6.
pub fn random_hyperbox<R: Rng + ?Sized>(rng: &mut R, size: &[usize]) -> Result<HyperboxComplex> {
    let n = size.len();
    if n == 0 || n > 2 {
        return Err(Error::OutOfScope(format!("random fillings support 1 or 2 axes, got {n}")));
    }
    let k = rng.gen_range(1..=4);
    let d = random_complex(rng, k);
    let mut h = HyperboxComplex::new(size.to_vec(), |_| k)?;
    let edge_on: Vec<Vec<bool>> = size.iter().map(|&s| (0..s).map(|_| rng.gen_bool(0.7)).collect()).collect();
    let vertices: Vec<Vec<usize>> = h.vertices().collect();
    for v in &vertices {
        h.set_map(v, 0, d.clone())?;
        for a in 0..n {
            if v[a] < size[a] && edge_on[a][v[a]] {
                h.set_map(v, 1 << a, F2Matrix::identity(k))?;
            }
        }
    }

    if n == 2 {
        for v in &vertices {
            for a in 0..2 {
                if v[a] == size[a] || !rng.gen_bool(0.5) {
                    continue;
                }
                gauge_edge(rng, &mut h, v, a)?;
            }
            if h.shift(v, 0b11).is_some() && rng.gen_bool(0.5) {
                let kk = random_matrix(rng, k, k);
                h.add_to_map(v, 0b11, &d.mul(&kk).add(&kk.mul(&d)))?;
            }
        }
    } else {
        for v in &vertices {
            if v[0] < size[0] && rng.gen_bool(0.5) {
                let hh = random_matrix(rng, k, k);
                h.add_to_map(v, 1, &d.mul(&hh).add(&hh.mul(&d)))?;
            }
        }
    }

    let h = add_acyclic_summands(rng, &h)?;
    let h = conjugate(rng, &h)?;
    debug_assert!(h.check_relations().is_empty());
    Ok(h)
}

/// Adds `∂h + h∂` to the edge at `v` along axis `a`, with the diagonal
/// corrections `g∘h` (square at `v`) and `h∘f` (square below).
fn gauge_edge<R: Rng + ?Sized>(rng: &mut R, h: &mut HyperboxComplex, v: &[usize], a: usize) -> Result<()> {
    let o = 1 - a;
    let (ba, bo) = (1u32 << a, 1u32 << o);
    let up = h.shift(v, ba).expect("edge in box");
    let d_src = h.map_or_zero(v, 0);
    let d_tgt = h.map_or_zero(&up, 0);
    let hh = random_matrix(rng, d_tgt.rows(), d_src.cols());
    let delta = d_tgt.mul(&hh).add(&hh.mul(&d_src));
    if h.shift(v, ba | bo).is_some() {
        let g = h.map_or_zero(&up, bo);
        h.add_to_map(v, ba | bo, &g.mul(&hh))?;
    }
    if v[o] > 0 {
        let mut below = v.to_vec();
        below[o] -= 1;
        let f = h.map_or_zero(&below, bo);
        h.add_to_map(&below, ba | bo, &hh.mul(&f))?;
    }
    h.add_to_map(v, ba, &delta)
}

fn add_acyclic_summands<R: Rng + ?Sized>(rng: &mut R, h: &HyperboxComplex) -> Result<HyperboxComplex> {
    let extra: Vec<usize> = h.vertices().map(|_| if rng.gen_bool(0.3) { 2 } else { 0 }).collect();
    let index = |v: &[usize]| h.vertex_index(v).expect("in box");
    let mut out = HyperboxComplex::new(h.size().to_vec(), |v| h.dim(v) + extra[index(v)])?;
    for v in h.vertices() {
        let k = h.dim(&v);
        let mut d0 = F2Matrix::zeros(out.dim(&v), out.dim(&v));
        d0.add_block(0, 0, &h.map_or_zero(&v, 0));
        if extra[index(&v)] == 2 {
            d0.set(k + 1, k, true);
        }
        out.set_map(&v, 0, d0)?;
    }
    for (v, mask, m) in h.maps() {
        if mask == 0 {
            continue;
        }
        let w = h.shift(&v, mask).expect("in box");
        let mut big = F2Matrix::zeros(out.dim(&w), out.dim(&v));
        big.add_block(0, 0, m);
        out.set_map(&v, mask, big)?;
    }
    Ok(out)
}

fn conjugate<R: Rng + ?Sized>(rng: &mut R, h: &HyperboxComplex) -> Result<HyperboxComplex> {
    let ps: Vec<F2Matrix> = h.vertices().map(|v| random_invertible(rng, h.dim(&v))).collect();
    let inv: Vec<F2Matrix> = ps.iter().map(|p| p.inverse().expect("invertible")).collect();
    let index = |v: &[usize]| h.vertex_index(v).expect("in box");
    let mut out = HyperboxComplex::new(h.size().to_vec(), |v| h.dim(v))?;
    for (v, mask, m) in h.maps() {
        let w = h.shift(&v, mask).expect("in box");
        out.set_map(&v, mask, ps[index(&w)].mul(m).mul(&inv[index(&v)]))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_square_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..7 {
            let d = random_complex(&mut rng, k);
            assert!(d.mul(&d).is_zero());
        }
    }

    #[test]
    fn random_boxes_satisfy_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for size in [vec![1], vec![3], vec![1, 1], vec![2, 1], vec![3, 1], vec![2, 2], vec![1, 3]] {
            for _ in 0..10 {
                let h = random_hyperbox(&mut rng, &size).unwrap();
                assert!(h.check_relations().is_empty(), "{size:?}");
                assert!(h.vertices().all(|v| h.dim(&v) <= 6));
            }
        }
        assert!(random_hyperbox(&mut rng, &[1, 1, 1]).is_err());
    }
}
