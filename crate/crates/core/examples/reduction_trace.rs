//! Complexity reduction of a 3-form with the Ψ checks at every split.

use hfcup::cupcomplex::{psi_report, split_pair};
use hfcup::cupform::{complexity, reduction_trace, ReductionNode, ThreeForm};

fn walk(node: &ReductionNode, depth: usize) -> hfcup::error::Result<()> {
    let form = node.form();
    let triples: Vec<String> = form.triples().map(|(t, c)| format!("{t:?}:{c}")).collect();
    print!("{}c = {} {}", "  ".repeat(depth), complexity(form), triples.join(" "));
    if let ReductionNode::Split { r, .. } = node {
        let (a, b) = split_pair(form, *r)?;
        let p = psi_report(&a, &b, *r)?;
        print!("  split at {r}: rank HC {} <= cone(Psi) {}, checks pass: {}", p.hc_rank, p.cone_psi_rank, p.passed());
    }
    println!();
    for c in node.children() {
        walk(c, depth + 1)?;
    }
    Ok(())
}

fn main() -> hfcup::error::Result<()> {
    let mu = ThreeForm::from_triples(5, [([1, 2, 3], 1), ([1, 2, 4], 1), ([1, 3, 5], 1), ([2, 4, 5], 1)])?;
    let tree = reduction_trace(&mu);
    walk(&tree, 0)?;
    println!("depth {}", tree.depth());
    Ok(())
}
