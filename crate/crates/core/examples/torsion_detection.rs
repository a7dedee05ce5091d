//! Comparing ranks over F₂ and Q exposes 2-torsion in the cup homology.

use hfcup::cupcomplex::CupComplex;
use hfcup::cupform::ThreeForm;
use hfcup::linalg::Ring;

fn main() -> hfcup::error::Result<()> {
    for m in 0..=4 {
        let mu = ThreeForm::from_triples(3, [([1, 2, 3], m)])?;
        let r = CupComplex::new(mu, Ring::F2).homology_rank();
        println!(
            "mu(1,2,3) = {m}: rank_f2 = {}, rank_q = {}, two-torsion = {}",
            r.rank_f2, r.rank_q, r.two_torsion
        );
    }
    Ok(())
}
