//! Cancelling acyclic pieces of a lattice complex down to the triangle
//! shape, whose rank is 2·dim H − 2·rank Ψ.

use hfcup::cupcomplex::{psi_maps, split_pair};
use hfcup::cupform::ThreeForm;
use hfcup::hypercube::{cancel_acyclic_edge, TotalComplex};
use hfcup::linalg::F2Matrix;

fn main() -> hfcup::error::Result<()> {
    let mu = ThreeForm::from_triples(5, [([1, 2, 3], 1), ([1, 4, 5], 1)])?;
    let (a, b) = split_pair(&mu, 1)?;
    let maps = psi_maps(&a, &b, 1)?;
    let n = maps.homology_dim;
    let id = F2Matrix::identity(n);
    let gamma1 = id.add(&maps.d1);
    let gamma2 = id.add(&maps.d2);

    // blocks: Z, W | A, B | A', C | X, Y  (positions -1, 0, 1, 2)
    let spec: Vec<(Vec<i64>, Vec<u8>, usize)> = [(-1, 0), (-1, 1), (0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
        .iter()
        .map(|&(p, v)| (vec![p], vec![v], n))
        .collect();
    let at = |k: usize| k * n;
    let mut d = F2Matrix::zeros(8 * n, 8 * n);
    d.add_block(at(1), at(0), &id); // Z -> W
    d.add_block(at(3), at(0), &id); // Z -> B
    d.add_block(at(3), at(2), &id); // A -> B
    d.add_block(at(5), at(2), &id); // A -> C
    d.add_block(at(3), at(4), &gamma1); // A' -> B
    d.add_block(at(5), at(4), &gamma2); // A' -> C
    d.add_block(at(7), at(6), &id); // X -> Y
    d.add_block(at(7), at(4), &maps.d1); // A' -> Y
    let t = TotalComplex::new(spec, d, vec![0; 8 * n])?;

    let top = cancel_acyclic_edge(&t, 0, |b| b.position == [2])?;
    println!("removed position 2 as a {:?} piece, homology {}", top.kind, top.homology_dim);
    let bottom = cancel_acyclic_edge(&top.complex, 0, |b| b.position == [-1])?;
    println!("removed position -1 as a {:?} piece, homology {}", bottom.kind, bottom.homology_dim);
    println!(
        "triangle: dim H = {n}, rank Psi = {}, 2n - 2 rank Psi = {}",
        maps.psi.rank(),
        2 * n - 2 * maps.psi.rank()
    );
    Ok(())
}
