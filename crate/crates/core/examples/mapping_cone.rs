//! Mapping-cone rank formula and the gluing reduction on random data.

use hfcup::hypercube::{cone_homology_dim, cone_rank, glued_ranks, gluing_reduce, random_invertible, random_matrix, MappingCone};
use hfcup::linalg::{ChainComplex, F2Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hfcup::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v = ChainComplex::trivial(4);
    let f = random_matrix(&mut rng, 4, 4);
    let cone = MappingCone::new(v.clone(), v, f.clone())?;
    println!("f has rank {}; cone rank {} (direct {})", f.rank(), cone_rank(&cone)?, cone_homology_dim(&cone));

    let f = random_matrix(&mut rng, 3, 3);
    let g = random_matrix(&mut rng, 3, 2);
    let j = random_invertible(&mut rng, 2);
    let k = random_matrix(&mut rng, 2, 3);
    let reduced: F2Matrix = gluing_reduce(&f, &g, &j, &k)?;
    let (full, small) = glued_ranks(&f, &g, &j, &k)?;
    println!("F + G J^-1 K has rank {}; cone homology {full} (Theta) vs {small} (reduced)", reduced.rank());
    Ok(())
}
