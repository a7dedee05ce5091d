//! Rank tables of integer surgeries on model knot complexes.

use hfcup::surgery::{knot_surgery_complex, ModelKnotComplex};

fn main() -> hfcup::error::Result<()> {
    for (name, k) in [("unknot", ModelKnotComplex::unknot()), ("trefoil", ModelKnotComplex::trefoil())] {
        for n in [-2, -1, 0, 1, 3] {
            let r = knot_surgery_complex(&k, n, None, None)?;
            println!(
                "{name} n = {n:>2}: ranks {:?}, total {}, truncation {} (stable: {})",
                r.ranks, r.total_rank, r.truncation, r.stable
            );
        }
    }
    Ok(())
}
