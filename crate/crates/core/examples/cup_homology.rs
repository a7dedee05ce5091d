//! Ranks of the cup complex (Λ*H¹, ι_μ) for a few triple cup product forms.

use hfcup::cupcomplex::CupComplex;
use hfcup::cupform::ThreeForm;
use hfcup::linalg::Ring;

fn main() -> hfcup::error::Result<()> {
    let forms = [
        ("two-component unlink", ThreeForm::zero(2)),
        ("Borromean rings", ThreeForm::from_triples(3, [([1, 2, 3], 1)])?),
        ("two Borromean blocks", ThreeForm::from_triples(6, [([1, 2, 3], 1), ([4, 5, 6], 1)])?),
        ("shared component", ThreeForm::from_triples(5, [([1, 2, 3], 1), ([1, 4, 5], 1)])?),
    ];
    println!("{:<22} {:>4} {:>8} {:>8}  by degree", "form", "ell", "rank F2", "rank Q");
    for (name, mu) in forms {
        let r = CupComplex::new(mu.clone(), Ring::F2).homology_rank();
        println!("{:<22} {:>4} {:>8} {:>8}  {:?}", name, mu.ell(), r.rank_f2, r.rank_q, r.by_degree);
    }
    Ok(())
}
