//! Compressing a random (2,1) hyperbox to a square and checking the result.

use hfcup::hypercube::{cone_homology_dim, random_hyperbox};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hfcup::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = random_hyperbox(&mut rng, &[2, 1])?;
    for v in h.vertices() {
        println!("vertex {:?}: rank {}", v, h.dim(&v));
    }
    let c = h.compress()?;
    let expected = h.map_or_zero(&[1, 1], 0b01).mul(&h.map_or_zero(&[0, 0], 0b11))
        .add(&h.map_or_zero(&[1, 0], 0b11).mul(&h.map_or_zero(&[0, 0], 0b01)));
    println!("compressed size {:?}, relations hold: {}", c.size(), c.check_relations().is_empty());
    println!("diagonal matches D10∘D11 + D11∘D10: {}", c.map_or_zero(&[0, 0], 0b11) == expected);
    let direct = cone_homology_dim(&h.composite_cone()?);
    let compressed = c.total_complex()?.homology_dim();
    println!("homology: composite cone {direct}, compressed cube {compressed}");
    Ok(())
}
