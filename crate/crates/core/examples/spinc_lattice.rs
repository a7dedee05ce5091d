//! Spin^c classes H(L)/Λ of framed links and the maps ψ^M.

use hfcup::surgery::{psi_map_lattice, spinc_classes, Coord, FramedLinkLattice, HalfInt, Orientation};

fn show(name: &str, lambda: Vec<Vec<i64>>) -> hfcup::error::Result<()> {
    let l = FramedLinkLattice::new(lambda)?;
    let r = spinc_classes(&l)?;
    let reps: Vec<String> = r
        .classes
        .iter()
        .map(|c| format!("({})", c.representative.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    println!("{name}: b1 = {}, invariant factors {:?}, torsion classes {}", r.b1, r.invariant_factors, reps.join(" "));
    Ok(())
}

fn main() -> hfcup::error::Result<()> {
    show("+3 surgery on a knot", vec![vec![3]])?;
    show("0-framed split 3-link", vec![vec![0; 3]; 3])?;
    show("connected-sum lattice", vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]])?;

    let lk = vec![vec![0, 1], vec![1, 0]];
    let s = [Coord::Finite(HalfInt(1)), Coord::Finite(HalfInt(1))];
    for o in [Orientation::Plus, Orientation::Minus] {
        let out = psi_map_lattice(&s, &[(1, o)], &lk)?;
        println!("psi dropping {o:?}K2 from (1/2, 1/2): {}", out[0]);
    }
    Ok(())
}
