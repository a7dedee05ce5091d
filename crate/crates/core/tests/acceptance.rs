//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use hfcup::cli::{cmd_cup, Format, RingChoice};
use hfcup::cupcomplex::{psi_maps, psi_report, split_pair, CupComplex};
use hfcup::cupform::{complexity, reduction_trace, split_index, ThreeForm};
use hfcup::hypercube::{cone_homology_dim, cone_rank, glued_ranks, random_hyperbox, random_invertible, random_matrix, MappingCone};
use hfcup::linalg::{ChainComplex, F2Matrix, Ring};
use hfcup::specseq::{collapse_check, identify_e3_with_exterior, FilteredComplex};
use hfcup::surgery::{build_cup_model_cube, knot_surgery_complex, ModelKnotComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn form(ell: usize, triples: &[([usize; 3], i64)]) -> ThreeForm {
    ThreeForm::from_triples(ell, triples.iter().copied()).expect("valid form")
}

fn random_form(rng: &mut ChaCha8Rng, ell: usize, max_triples: usize, lo: i64, hi: i64) -> ThreeForm {
    let mut mu = ThreeForm::zero(ell);
    if ell < 3 {
        return mu;
    }
    for _ in 0..rng.gen_range(0..=max_triples) {
        let mut t = [0usize; 3];
        loop {
            for x in t.iter_mut() {
                *x = rng.gen_range(1..=ell);
            }
            t.sort_unstable();
            if t[0] < t[1] && t[1] < t[2] {
                break;
            }
        }
        mu.set(t, rng.gen_range(lo..=hi));
    }
    mu
}

fn cup_json(mu: &ThreeForm) -> Value {
    let triples: Vec<[i64; 4]> = mu.triples().map(|(t, c)| [t[0] as i64, t[1] as i64, t[2] as i64, c]).collect();
    let input = serde_json::json!({"ell": mu.ell(), "triples": triples}).to_string();
    let out = cmd_cup(&input, RingChoice::Both, Format::Json).expect("cmd_cup succeeds");
    serde_json::from_str(&out).expect("json output")
}

fn rank_law_small() -> Outcome {
    for ell in 0..=2 {
        let v = cup_json(&ThreeForm::zero(ell));
        let expected = 1u64 << ell;
        ensure(v["rank_f2"] == expected && v["rank_q"] == expected, || format!("ell = {ell}: got {v}"))?;
    }
    Ok(())
}

fn rank_law_three() -> Outcome {
    for m in 0..=4i64 {
        let v = cup_json(&form(3, &[([1, 2, 3], m)]));
        let expected = 8 - 2 * (m % 2) as u64;
        ensure(v["rank_f2"] == expected, || format!("m = {m}: rank_f2 {} != {expected}", v["rank_f2"]))?;
    }
    Ok(())
}

fn torsion_witness() -> Outcome {
    let v = cup_json(&form(3, &[([1, 2, 3], 2)]));
    ensure(v["rank_f2"] == 8 && v["rank_q"] == 6 && v["two_torsion"] == true, || format!("got {v}"))
}

fn d_squared_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..200 {
        let ell = rng.gen_range(3..=8);
        let mu = random_form(&mut rng, ell, 10, -3, 3);
        for ring in [Ring::F2, Ring::Q] {
            ensure(CupComplex::new(mu.clone(), ring).is_complex(), || format!("case {case} ({ring:?}): {mu:?}"))?;
        }
    }
    Ok(())
}

fn spectral_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100 {
        let ell = rng.gen_range(3..=6);
        let mu = random_form(&mut rng, ell, 6, -3, 3);
        let t = build_cup_model_cube(&mu).map_err(|e| e.to_string())?.total_complex().map_err(|e| e.to_string())?;
        let fc = FilteredComplex::from_hypercube(&t).map_err(|e| e.to_string())?;
        let id = identify_e3_with_exterior(&fc, &mu).map_err(|e| e.to_string())?;
        ensure(id.d1_zero && id.d2_zero, || format!("case {case}: d1 or d2 nonzero for {mu:?}"))?;
        ensure(id.bijective && id.matches, || format!("case {case}: d3 differs from contraction at {:?}", id.mismatched_levels))?;
        let c = collapse_check(&fc, 4).map_err(|e| e.to_string())?;
        ensure(c.collapses, || format!("case {case}: collapse page {}", c.collapse_page))?;
        let cup = CupComplex::new(mu.clone(), Ring::F2).rank();
        ensure(c.e_infinity == c.total_homology && c.e_infinity == cup, || {
            format!("case {case}: E_inf {} homology {} cup rank {cup}", c.e_infinity, c.total_homology)
        })?;
    }
    Ok(())
}

/// Complex `H ⊕ (pairs)` in normal form, conjugated by a random basis change.
fn normal_form(rng: &mut ChaCha8Rng, h: usize, pairs: usize) -> (F2Matrix, F2Matrix) {
    let n = h + 2 * pairs;
    let mut d = F2Matrix::zeros(n, n);
    for p in 0..pairs {
        d.set(h + 2 * p + 1, h + 2 * p, true);
    }
    let p = random_invertible(rng, n);
    (d, p)
}

fn block_rank_cone(dv: &F2Matrix, dw: &F2Matrix, f: &F2Matrix) -> usize {
    let (n, m) = (dv.rows(), dw.rows());
    let mut d = F2Matrix::zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, dv.get(i, j));
        }
    }
    for i in 0..m {
        for j in 0..n {
            d.set(n + i, j, f.get(i, j));
        }
        for j in 0..m {
            d.set(n + i, n + j, dw.get(i, j));
        }
    }
    n + m - 2 * d.rank()
}

fn cone_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..500 {
        let h = rng.gen_range(0..=8);
        let (kv, kw) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let (dv0, p) = normal_form(&mut rng, h, kv);
        let (dw0, q) = normal_form(&mut rng, h, kw);
        let a = random_matrix(&mut rng, h, h);
        let s = random_matrix(&mut rng, dw0.rows(), dv0.rows());
        let mut f0 = dw0.mul(&s).add(&s.mul(&dv0));
        for i in 0..h {
            for j in 0..h {
                if a.get(i, j) {
                    f0.flip(i, j);
                }
            }
        }
        let (pi, qi) = (p.inverse().expect("invertible"), q.inverse().expect("invertible"));
        let dv = p.mul(&dv0).mul(&pi);
        let dw = q.mul(&dw0).mul(&qi);
        let f = q.mul(&f0).mul(&pi);
        let cone = MappingCone::new(ChainComplex::new(dv.clone()).unwrap(), ChainComplex::new(dw.clone()).unwrap(), f.clone())
            .map_err(|e| format!("case {case}: {e}"))?;
        let rk = cone.induced_rank();
        let brute = block_rank_cone(&dv, &dw, &f);
        ensure(rk == a.rank(), || format!("case {case}: induced rank {rk} != {}", a.rank()))?;
        ensure(2 * h - 2 * rk == brute, || format!("case {case}: formula {} != brute {brute}", 2 * h - 2 * rk))?;
        ensure(cone_rank(&cone).ok() == Some(brute), || format!("case {case}: cone_rank disagrees"))?;
    }
    Ok(())
}

fn gluing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let (a, b) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let f = random_matrix(&mut rng, a, a);
        let g = random_matrix(&mut rng, a, b);
        let j = random_invertible(&mut rng, b);
        let k = random_matrix(&mut rng, b, a);
        let mut theta = F2Matrix::zeros(a + b, a + b);
        for (r0, c0, m) in [(0, 0, &f), (0, a, &g), (a, 0, &k), (a, a, &j)] {
            for i in 0..m.rows() {
                for jj in 0..m.cols() {
                    theta.set(r0 + i, c0 + jj, m.get(i, jj));
                }
            }
        }
        let full = block_rank_cone(&F2Matrix::zeros(a + b, a + b), &F2Matrix::zeros(a + b, a + b), &theta);
        let reduced = f.add(&g.mul(&j.inverse().unwrap()).mul(&k));
        let small = block_rank_cone(&F2Matrix::zeros(a, a), &F2Matrix::zeros(a, a), &reduced);
        ensure(full == small, || format!("case {case}: {full} != {small}"))?;
        ensure(glued_ranks(&f, &g, &j, &k).ok() == Some((full, small)), || format!("case {case}: library disagrees"))?;
    }
    Ok(())
}

fn psi_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    while done < 50 {
        let ell = rng.gen_range(4..=6);
        let mut mu = random_form(&mut rng, ell, 5, 1, 3);
        if rng.gen_bool(0.5) {
            mu = mu.negate();
        }
        let Some(r) = split_index(&mu) else { continue };
        let (a, b) = split_pair(&mu, r).map_err(|e| e.to_string())?;
        let p = psi_report(&a, &b, r).map_err(|e| e.to_string())?;
        ensure(p.involutions, || format!("{mu:?}: (Id + D_i)^2 != Id"))?;
        ensure(p.product_identity, || format!("{mu:?}: product formula fails"))?;
        let m = psi_maps(&a, &b, r).map_err(|e| e.to_string())?;
        ensure(m.dk == m.d1.add(&m.d2) && m.psi == m.dk.add(&m.d1.mul(&m.d2)), || format!("{mu:?}: Psi differs from dK + D1 D2"))?;
        ensure(p.kernel.holds, || format!("{mu:?}: kernel containment fails, witness {:?}", p.kernel.witness))?;
        ensure(p.cone_psi_rank >= p.hc_rank && p.cone_dk_rank == p.hc_rank, || {
            format!("{mu:?}: cone(Psi) {} HC {} cone(dK) {}", p.cone_psi_rank, p.hc_rank, p.cone_dk_rank)
        })?;
        done += 1;
    }
    Ok(())
}

fn kunneth() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..30 {
        let (la, lb) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_form(&mut rng, la, 4, -3, 3);
        let b = random_form(&mut rng, lb, 4, -3, 3);
        let ra = CupComplex::new(a.clone(), Ring::F2).homology_rank();
        let rb = CupComplex::new(b.clone(), Ring::F2).homology_rank();
        let rab = CupComplex::new(a.disjoint_sum(&b), Ring::F2).homology_rank();
        ensure(rab.rank_f2 == ra.rank_f2 * rb.rank_f2, || format!("case {case}: F2 {} != {}·{}", rab.rank_f2, ra.rank_f2, rb.rank_f2))?;
        ensure(rab.rank_q == ra.rank_q * rb.rank_q, || format!("case {case}: Q {} != {}·{}", rab.rank_q, ra.rank_q, rb.rank_q))?;
    }
    Ok(())
}

fn knot_surgery() -> Outcome {
    let unknot = ModelKnotComplex::unknot();
    let trefoil = ModelKnotComplex::trefoil();
    let at = |k: &ModelKnotComplex, n: i64, s: Option<i64>| knot_surgery_complex(k, n, None, s).map_err(|e| e.to_string());
    let r0 = at(&unknot, 0, None)?;
    ensure(r0.ranks.get(&0) == Some(&2), || format!("unknot n = 0: {:?}", r0.ranks))?;
    for n in [-5, -3, -2, -1, 1, 2, 3, 5] {
        let r = at(&unknot, n, None)?;
        ensure(r.ranks.len() == n.unsigned_abs() as usize && r.ranks.values().all(|&x| x == 1), || {
            format!("unknot n = {n}: {:?}", r.ranks)
        })?;
    }
    for n in [-1, 1] {
        let r = at(&trefoil, n, None)?;
        ensure(r.total_rank == 1, || format!("trefoil n = {n}: {:?}", r.ranks))?;
    }
    for k in [&unknot, &trefoil] {
        for n in -3..=3 {
            let base = at(k, n, None)?;
            let wider = at(k, n, Some(base.truncation + 3))?;
            ensure(base.ranks == wider.ranks, || format!("n = {n}: {:?} vs {:?}", base.ranks, wider.ranks))?;
        }
    }
    Ok(())
}

fn compression() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for size in [vec![2, 1], vec![3, 1], vec![2, 2]] {
        for case in 0..60 {
            let h = random_hyperbox(&mut rng, &size).map_err(|e| e.to_string())?;
            let c = h.compress().map_err(|e| e.to_string())?;
            ensure(c.check_relations().is_empty(), || format!("{size:?} case {case}: relations fail"))?;
            let after = c.total_complex().map_err(|e| e.to_string())?.homology_dim();
            let before = if size[1] == 1 {
                cone_homology_dim(&h.composite_cone().map_err(|e| e.to_string())?)
            } else {
                let other = h.swap_axes(0, 1).compress().map_err(|e| e.to_string())?;
                other.total_complex().map_err(|e| e.to_string())?.homology_dim()
            };
            ensure(before == after, || format!("{size:?} case {case}: homology {before} -> {after}"))?;
            if size == [2, 1] {
                let expected = h
                    .map_or_zero(&[1, 1], 0b01)
                    .mul(&h.map_or_zero(&[0, 0], 0b11))
                    .add(&h.map_or_zero(&[1, 0], 0b11).mul(&h.map_or_zero(&[0, 0], 0b01)));
                ensure(c.map_or_zero(&[0, 0], 0b11) == expected, || format!("(2,1) case {case}: diagonal differs"))?;
            }
        }
    }
    Ok(())
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    out(cur);
    if cur.len() == k {
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

fn reduction() -> Outcome {
    let mut failure = None;
    let mut count = 0usize;
    for ell in 3..=6 {
        let triples: Vec<[usize; 3]> = (1..=ell)
            .flat_map(|i| (i + 1..=ell).flat_map(move |j| (j + 1..=ell).map(move |k| [i, j, k])))
            .collect();
        subsets(triples.len(), 5, 0, &mut Vec::new(), &mut |idx| {
            if failure.is_some() {
                return;
            }
            count += 1;
            let entries: Vec<([usize; 3], i64)> = idx.iter().enumerate().map(|(n, &i)| (triples[i], 1 + (n as i64 % 3))).collect();
            let mu = ThreeForm::from_triples(ell, entries).expect("valid");
            let tree = reduction_trace(&mu);
            let leaves_ok = tree.leaves().iter().all(|l| complexity(l) <= 1);
            let decreasing = tree.edges().iter().all(|(p, c)| complexity(c.form()) < complexity(p.form()));
            if !(leaves_ok && decreasing && tree.depth() <= complexity(&mu).max(1)) {
                failure = Some(format!("{mu:?}"));
            }
        });
    }
    match failure {
        Some(f) => Err(f),
        None => ensure(count > 20_000, || format!("only {count} forms enumerated")),
    }
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut dense = ThreeForm::zero(14);
    for i in 1..=14 {
        for j in i + 1..=14 {
            for k in j + 1..=14 {
                let c = rng.gen_range(-3..=3);
                if c != 0 {
                    dense.set([i, j, k], c);
                }
            }
        }
    }
    let even = ThreeForm::from_triples(14, dense.triples().map(|(t, c)| (t, 2 * c)).collect::<Vec<_>>()).unwrap();
    for (name, mu) in [("dense", dense), ("all-even", even)] {
        let start = Instant::now();
        let v = cup_json(&mu);
        let took = start.elapsed();
        ensure(took < Duration::from_secs(60), || format!("{name}: {took:?}"))?;
        ensure(v["rank_f2"].as_u64().is_some() && v["rank_q"].as_u64().is_some(), || format!("{name}: {v}"))?;
        println!("      ell = 14 {name}: rank_f2 {} rank_q {} in {:.2} s", v["rank_f2"], v["rank_q"], took.as_secs_f64());
    }
    Ok(())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("rank law b1 <= 2", Duration::from_secs(1), rank_law_small),
        ("b1 = 3 law 8 - 2(m mod 2)", Duration::from_secs(1), rank_law_three),
        ("2-torsion witness", Duration::from_secs(1), torsion_witness),
        ("d^2 = 0 suite", Duration::from_secs(10), d_squared_suite),
        ("spectral-sequence structure", Duration::from_secs(60), spectral_structure),
        ("mapping-cone rank formula", Duration::from_secs(10), cone_formula),
        ("gluing reduction", Duration::from_secs(10), gluing),
        ("Psi calculus", Duration::from_secs(30), psi_calculus),
        ("Kunneth multiplicativity", Duration::from_secs(30), kunneth),
        ("knot surgery engine", Duration::from_secs(5), knot_surgery),
        ("compression correctness", Duration::from_secs(10), compression),
        ("complexity reduction", Duration::from_secs(10), reduction),
        ("performance floor ell = 14", Duration::from_secs(60), performance),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(()) if took < limit => Ok(()),
            Ok(()) => Err(format!("took {:.2} s, limit {} s", took.as_secs_f64(), limit.as_secs())),
            Err(e) => Err(e),
        };
        match verdict {
            Ok(()) => println!("PASS {:>2} {name} ({:.2} s)", i + 1, took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({:.2} s): {e}", i + 1, took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
