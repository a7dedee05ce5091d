//! Dense rank modulo the Mersenne prime `2³¹ − 1`.
//!
//! For an integer matrix this is a lower bound on the rank over Q.

pub const MODULUS: u64 = (1 << 31) - 1;

#[inline]
fn reduce(x: u64) -> u64 {
    let x = (x & MODULUS) + (x >> 31);
    let x = (x & MODULUS) + (x >> 31);
    if x >= MODULUS {
        x - MODULUS
    } else {
        x
    }
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = reduce(acc * b);
        }
        b = reduce(b * b);
        e >>= 1;
    }
    acc
}

fn inverse(a: u64) -> u64 {
    pow_mod(a, MODULUS - 2)
}

pub fn to_residue(v: i64) -> u64 {
    v.rem_euclid(MODULUS as i64) as u64
}

/// Rank mod p of the vectors given sparsely as `(index, value)` lists of
/// length `len`.
pub fn sparse_rank_mod_p(vectors: &[Vec<(u32, i64)>], len: usize) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![0u64; len];
            for &(j, x) in v {
                row[j as usize] = reduce(row[j as usize] + to_residue(x));
            }
            row
        })
        .collect();
    rank_dense(&mut rows, len)
}

/// Rank mod p of dense residue rows; destroys the input.
pub fn rank_dense(rows: &mut [Vec<u64>], len: usize) -> usize {
    let mut rank = 0;
    for c in 0..len {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        let inv = inverse(pivot[c]);
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = MODULUS - reduce(row[c] * inv);
            row[c] = 0;
            for (a, &b) in row[c + 1..].iter_mut().zip(&pivot[c + 1..]) {
                *a = reduce(*a + f * b);
            }
        }
        rank += 1;
    }
    rank
}
