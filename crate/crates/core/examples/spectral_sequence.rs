//! Spectral sequence of the cup-model cube, and of a perturbed cube whose
//! sequence does not collapse at E₄.

use hfcup::cupform::ThreeForm;
use hfcup::linalg::F2Matrix;
use hfcup::specseq::{collapse_check, identify_e3_with_exterior, pages, FilteredComplex};
use hfcup::surgery::{build_cup_model_cube, perturb_model};

fn main() -> hfcup::error::Result<()> {
    let mu = ThreeForm::from_triples(4, [([1, 2, 3], 1), ([2, 3, 4], 1)])?;
    let fc = FilteredComplex::from_hypercube(&build_cup_model_cube(&mu)?.total_complex()?)?;
    for p in pages(&fc, fc.depth() + 1)? {
        println!("E{}: dims {:?}, rank d{} = {}", p.r, p.dims(), p.r, p.d_rank());
    }
    let id = identify_e3_with_exterior(&fc, &mu)?;
    println!("d1 = 0: {}, d2 = 0: {}, d3 = contraction: {}", id.d1_zero, id.d2_zero, id.matches);
    let c = collapse_check(&fc, 4)?;
    println!("collapse page {}, E_inf {} = homology {}", c.collapse_page, c.e_infinity, c.total_homology);

    let cube = build_cup_model_cube(&ThreeForm::zero(5))?;
    let perturbed = perturb_model(&cube, &[(vec![0; 5], 0b11111, F2Matrix::identity(1))])?;
    let fc = FilteredComplex::from_hypercube(&perturbed.total_complex()?)?;
    let c = collapse_check(&fc, 4)?;
    println!(
        "perturbed: collapses at E4: {}, collapse page {}, d ranks {:?}, E_inf {} = homology {}",
        c.collapses, c.collapse_page, c.d_ranks, c.e_infinity, c.total_homology
    );
    Ok(())
}
