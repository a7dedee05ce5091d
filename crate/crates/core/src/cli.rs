//! Command-line front end. Exit codes: 0 success, 2 unreadable or
//! malformed input, 3 semantically invalid input or failed check, 4 hyperbox
//! relation failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cupcomplex::{binomial, psi_report, split_pair, CupComplex, PsiReport};
use crate::cupform::{complexity, reduction_trace, LinkModel, ReductionNode, ThreeForm};
use crate::error::Error;
use crate::hypercube::{cone_homology_dim, cone_rank, glued_ranks, random_complex, random_hyperbox, random_invertible, random_matrix};
use crate::hypercube::{HypercubeFile, MappingCone, Violation};
use crate::linalg::{ChainComplex, Ring};
use crate::specseq::{collapse_check, identify_e3_with_exterior, pages, FilteredComplex};
use crate::surgery::{build_cup_model_cube, knot_surgery_complex, ModelKnotComplex, SurgeryReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_RELATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hfcup", version, about = "Cup homology, hypercubes of chain complexes and model surgery complexes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingChoice {
    F2,
    Q,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology ranks of the cup complex of a 3-form.
    Cup {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RingChoice::Both)]
        ring: RingChoice,
    },
    /// Rank table of n-surgery on a model knot complex.
    SurgeryKnot {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        framing: i64,
        #[arg(long)]
        truncation: Option<i64>,
    },
    /// Relation report and spectral-sequence pages of a hypercube.
    Hypercube {
        input: PathBuf,
        /// Last page to report (default: until E_∞).
        #[arg(long)]
        pages: Option<usize>,
        /// Only check the hyperbox relations.
        #[arg(long)]
        check: bool,
        /// Read a 3-form and use its cup-model cube.
        #[arg(long)]
        model: bool,
    },
    /// Complexity-reduction trace with the rank checks along each split.
    Reduce { input: PathBuf },
    /// Seeded randomized consistency checks.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// Failure carrying its exit code; `output` is still printed.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub output: Option<String>,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            output: None,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RelationFailure(_) => EXIT_RELATION,
            Error::InvalidForm(_) | Error::InvalidHypercube(_) => EXIT_PARSE,
            _ => EXIT_SEMANTIC,
        };
        CliError::new(code, e.to_string())
    }
}

type CliResult = std::result::Result<String, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(s) => {
            let _ = writeln!(out, "{s}");
            EXIT_OK
        }
        Err(e) => {
            if let Some(o) = &e.output {
                let _ = writeln!(out, "{o}");
            }
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Cup { input, ring } => cmd_cup(&read(input)?, *ring, cli.format),
        Command::SurgeryKnot {
            input,
            framing,
            truncation,
        } => cmd_surgery_knot(&read(input)?, *framing, *truncation, cli.format),
        Command::Hypercube {
            input,
            pages,
            check,
            model,
        } => cmd_hypercube(&read(input)?, *pages, *check, *model, cli.format),
        Command::Reduce { input } => cmd_reduce(&read(input)?, cli.format),
        Command::Selfcheck { seed, cases } => cmd_selfcheck(*seed, *cases, cli.format),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn parse_error(e: serde_json::Error) -> CliError {
    CliError::new(EXIT_PARSE, format!("malformed input: {e}"))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Cup-form input: `{"ell": 3, "triples": [[1,2,3,1]], "linking": [[…]]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CupFile {
    ell: usize,
    triples: Vec<[i64; 4]>,
    #[serde(default)]
    linking: Option<Vec<Vec<i64>>>,
}

/// Parses a 3-form file and checks that its linking data is split.
pub fn parse_form(text: &str) -> Result<ThreeForm, CliError> {
    let file: CupFile = serde_json::from_str(text).map_err(parse_error)?;
    let mut entries = Vec::with_capacity(file.triples.len());
    for [i, j, k, c] in file.triples {
        let idx = |x: i64| usize::try_from(x).map_err(|_| CliError::new(EXIT_PARSE, format!("negative index {x}")));
        entries.push(([idx(i)?, idx(j)?, idx(k)?], c));
    }
    let mu = ThreeForm::from_triples(file.ell, entries)?;
    match file.linking {
        None => Ok(mu),
        Some(lk) => {
            let model = LinkModel::new(lk, mu).map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))?;
            Ok(model.cup_form()?.clone())
        }
    }
}

#[derive(Debug, Serialize)]
struct CupOutput {
    ell: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_f2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_q: Option<usize>,
    by_degree: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    two_torsion: Option<bool>,
}

fn profile(ell: usize, ranks: &[usize]) -> Vec<usize> {
    (0..=ell)
        .map(|i| binomial(ell, i) - ranks[i] - ranks.get(i + 3).copied().unwrap_or(0))
        .collect()
}

pub fn cmd_cup(text: &str, ring: RingChoice, format: Format) -> CliResult {
    let mu = parse_form(text)?;
    let ell = mu.ell();
    let c = CupComplex::new(mu, Ring::F2);
    let total = 1usize << ell;
    let rank = |r: &[usize]| total - 2 * r.iter().sum::<usize>();
    let out = match ring {
        RingChoice::F2 => {
            let f2 = c.ranks_f2();
            CupOutput {
                ell,
                rank_f2: Some(rank(&f2)),
                rank_q: None,
                by_degree: profile(ell, &f2),
                two_torsion: None,
            }
        }
        RingChoice::Q => {
            let q = c.ranks_q();
            CupOutput {
                ell,
                rank_f2: None,
                rank_q: Some(rank(&q)),
                by_degree: profile(ell, &q),
                two_torsion: None,
            }
        }
        RingChoice::Both => {
            let r = c.homology_rank();
            CupOutput {
                ell,
                rank_f2: Some(r.rank_f2),
                rank_q: Some(r.rank_q),
                by_degree: r.by_degree,
                two_torsion: Some(r.two_torsion),
            }
        }
    };
    Ok(match format {
        Format::Json => to_json(&out),
        Format::Text => {
            let mut s = format!("ell: {ell}\n");
            if let Some(r) = out.rank_f2 {
                let _ = writeln!(s, "rank_f2: {r}");
            }
            if let Some(r) = out.rank_q {
                let _ = writeln!(s, "rank_q: {r}");
            }
            let degrees: Vec<String> = out.by_degree.iter().map(|d| d.to_string()).collect();
            let _ = write!(s, "by_degree: {}", degrees.join(" "));
            if let Some(t) = out.two_torsion {
                let _ = write!(s, "\ntwo_torsion: {t}");
            }
            s
        }
    })
}

pub fn cmd_surgery_knot(text: &str, framing: i64, truncation: Option<i64>, format: Format) -> CliResult {
    let k = ModelKnotComplex::from_json(text).map_err(parse_error)?.validate()?;
    let report: SurgeryReport = knot_surgery_complex(&k, framing, None, truncation)?;
    Ok(match format {
        Format::Json => to_json(&report),
        Format::Text => {
            let mut s = format!("framing: {}\ntruncation: {}\n", report.framing, report.truncation);
            let _ = writeln!(s, "class  rank");
            for (c, r) in &report.ranks {
                let _ = writeln!(s, "{c:>5}  {r}");
            }
            let _ = write!(
                s,
                "total: {}\nstable under truncation {} -> {}: {}",
                report.total_rank,
                report.truncation,
                report.truncation + 3,
                report.stable
            );
            s
        }
    })
}

#[derive(Debug, Serialize)]
struct PageSummary {
    r: usize,
    dims: BTreeMap<i64, usize>,
    total: usize,
    d_rank: usize,
}

#[derive(Debug, Serialize)]
struct HypercubeOutput {
    dim: usize,
    relations_hold: bool,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pages: Vec<PageSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    collapse_page: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e_infinity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_homology: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e3_matches_contraction: Option<bool>,
}

fn render_hypercube(out: &HypercubeOutput, format: Format) -> String {
    match format {
        Format::Json => to_json(out),
        Format::Text => {
            let mut s = format!("dim: {}\nrelations: {}\n", out.dim, if out.relations_hold { "ok" } else { "FAILED" });
            for v in &out.violations {
                let _ = writeln!(s, "  violated: {v}");
            }
            for p in &out.pages {
                let dims: Vec<String> = p.dims.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                let _ = writeln!(s, "E{}: total {} [{}] d{} rank {}", p.r, p.total, dims.join(" "), p.r, p.d_rank);
            }
            if let Some(c) = out.collapse_page {
                let _ = writeln!(s, "collapse page: {c}");
            }
            if let (Some(e), Some(h)) = (out.e_infinity, out.total_homology) {
                let _ = writeln!(s, "E_inf: {e}, total homology: {h}");
            }
            if let Some(m) = out.e3_matches_contraction {
                let _ = writeln!(s, "d3 matches contraction: {m}");
            }
            s.trim_end().to_string()
        }
    }
}

fn format_violation(v: &Violation) -> String {
    v.to_string()
}

pub fn cmd_hypercube(text: &str, up_to: Option<usize>, check_only: bool, model: bool, format: Format) -> CliResult {
    let (h, mu) = if model {
        let mu = parse_form(text)?;
        (build_cup_model_cube(&mu)?, Some(mu))
    } else {
        let file = HypercubeFile::from_json(text).map_err(parse_error)?;
        (file.to_hypercube()?, None)
    };
    let violations = h.check_relations();
    let mut out = HypercubeOutput {
        dim: h.n(),
        relations_hold: violations.is_empty(),
        violations: violations.iter().map(format_violation).collect(),
        pages: Vec::new(),
        collapse_page: None,
        e_infinity: None,
        total_homology: None,
        e3_matches_contraction: None,
    };
    if !violations.is_empty() {
        let n = violations.len();
        return Err(CliError {
            code: EXIT_RELATION,
            message: format!("hyperbox relations fail at {n} (vertex, direction) pair(s)"),
            output: Some(render_hypercube(&out, format)),
        });
    }
    if check_only {
        return Ok(render_hypercube(&out, format));
    }
    let fc = FilteredComplex::from_hypercube(&h.total_complex()?)?;
    let last = up_to.unwrap_or(fc.depth() + 1).max(1);
    for p in pages(&fc, last)? {
        out.pages.push(PageSummary {
            r: p.r,
            dims: p.dims(),
            total: p.total_dim(),
            d_rank: p.d_rank(),
        });
    }
    let c = collapse_check(&fc, 1)?;
    out.collapse_page = Some(c.collapse_page);
    out.e_infinity = Some(c.e_infinity);
    out.total_homology = Some(c.total_homology);
    if let Some(mu) = mu {
        out.e3_matches_contraction = Some(identify_e3_with_exterior(&fc, &mu)?.matches);
    }
    Ok(render_hypercube(&out, format))
}

#[derive(Debug, Serialize)]
struct TraceNode {
    kind: &'static str,
    triples: Vec<[i64; 4]>,
    complexity: usize,
    rank_f2: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<PsiReport>,
    /// Rank of the node equals the product of the parts' ranks.
    #[serde(skip_serializing_if = "Option::is_none")]
    product_rule: Option<bool>,
    /// Every child has strictly smaller complexity.
    decreasing: bool,
    checks_pass: bool,
    children: Vec<TraceNode>,
}

fn triples_of(mu: &ThreeForm) -> Vec<[i64; 4]> {
    mu.triples().map(|(t, c)| [t[0] as i64, t[1] as i64, t[2] as i64, c]).collect()
}

fn trace_node(node: &ReductionNode) -> Result<TraceNode, CliError> {
    let form = node.form();
    let c = complexity(form);
    let rank_f2 = CupComplex::new(form.clone(), Ring::F2).rank();
    let children: Vec<TraceNode> = node.children().into_iter().map(trace_node).collect::<Result<_, _>>()?;
    let decreasing = children.iter().all(|ch| ch.complexity < c);
    let (kind, r, psi, product_rule) = match node {
        ReductionNode::Leaf { .. } => ("leaf", None, None, None),
        ReductionNode::Split { r, .. } => {
            let (a, b) = split_pair(form, *r)?;
            ("split", Some(*r), Some(psi_report(&a, &b, *r)?), None)
        }
        ReductionNode::Disjoint { .. } => {
            let ell = form.ell();
            let product: usize = children.iter().map(|ch| ch.rank_f2).product::<usize>();
            // each part also carries the free generators; divide them out
            let free = 1usize << ell;
            let parts = children.len() as u32;
            let expected = product / free.pow(parts.saturating_sub(1));
            ("disjoint", None, None, Some(expected == rank_f2))
        }
    };
    let own = match (&psi, product_rule) {
        (Some(p), _) => p.passed(),
        (_, Some(b)) => b,
        _ => c <= 1,
    };
    let checks_pass = own && decreasing && children.iter().all(|ch| ch.checks_pass);
    Ok(TraceNode {
        kind,
        triples: triples_of(form),
        complexity: c,
        rank_f2,
        r,
        psi,
        product_rule,
        decreasing,
        checks_pass,
        children,
    })
}

fn render_trace(n: &TraceNode, depth: usize, s: &mut String) {
    let triples: Vec<String> = n.triples.iter().map(|t| format!("({},{},{}):{}", t[0], t[1], t[2], t[3])).collect();
    let _ = write!(
        s,
        "{}{} c={} rank={} [{}]",
        "  ".repeat(depth),
        n.kind,
        n.complexity,
        n.rank_f2,
        triples.join(" ")
    );
    if let (Some(r), Some(p)) = (n.r, &n.psi) {
        let _ = write!(
            s,
            " r={r} dimH={} rk(dK)={} rk(psi)={} cone(psi)={} >= HC={} psi_checks={}",
            p.homology_dim,
            p.rank_dk,
            p.rank_psi,
            p.cone_psi_rank,
            p.hc_rank,
            if p.passed() { "ok" } else { "FAILED" }
        );
    }
    if let Some(b) = n.product_rule {
        let _ = write!(s, " product_rule={}", if b { "ok" } else { "FAILED" });
    }
    s.push('\n');
    for ch in &n.children {
        render_trace(ch, depth + 1, s);
    }
}

pub fn cmd_reduce(text: &str, format: Format) -> CliResult {
    let mu = parse_form(text)?;
    let tree = reduction_trace(&mu);
    let root = trace_node(&tree)?;
    let leaves_ok = tree.leaves().iter().all(|l| complexity(l) <= 1);
    let body = match format {
        Format::Json => to_json(&json!({
            "depth": tree.depth(),
            "leaves_ok": leaves_ok,
            "checks_pass": root.checks_pass,
            "tree": root,
        })),
        Format::Text => {
            let mut s = String::new();
            render_trace(&root, 0, &mut s);
            let _ = write!(
                s,
                "depth: {}\nleaves have complexity <= 1: {leaves_ok}\nall checks pass: {}",
                tree.depth(),
                root.checks_pass
            );
            s
        }
    };
    if !(leaves_ok && root.checks_pass) {
        return Err(CliError {
            code: EXIT_SEMANTIC,
            message: "a reduction check failed".into(),
            output: Some(body),
        });
    }
    Ok(body)
}

fn random_form(rng: &mut ChaCha8Rng, ell: usize, max_triples: usize, coeff: i64) -> ThreeForm {
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
        mu.set(t, rng.gen_range(-coeff..=coeff));
    }
    mu
}

/// Seeded randomized checks of the core identities.
pub fn cmd_selfcheck(seed: u64, cases: usize, format: Format) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<(&str, bool)> = Vec::new();

    let dd = (0..cases).all(|_| {
        let ell = rng.gen_range(3..=7);
        let mu = random_form(&mut rng, ell, 6, 3);
        CupComplex::new(mu.clone(), Ring::F2).is_complex() && CupComplex::new(mu, Ring::Q).is_complex()
    });
    results.push(("cup differential squares to zero", dd));

    let cones = (0..cases).all(|_| {
        let k = rng.gen_range(1..=6);
        let dv = random_complex(&mut rng, k);
        let v = ChainComplex::new(dv.clone()).expect("complex");
        let f = if rng.gen_bool(0.5) { crate::linalg::F2Matrix::identity(k) } else { random_matrix(&mut rng, k, k) };
        match MappingCone::new(v.clone(), v, f) {
            Ok(c) => cone_rank(&c).is_ok(),
            Err(_) => true,
        }
    });
    results.push(("mapping-cone rank formula", cones));

    let gluing = (0..cases).all(|_| {
        let (a, b) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let f = random_matrix(&mut rng, a, a);
        let g = random_matrix(&mut rng, a, b);
        let j = random_invertible(&mut rng, b);
        let k = random_matrix(&mut rng, b, a);
        matches!(glued_ranks(&f, &g, &j, &k), Ok((x, y)) if x == y)
    });
    results.push(("gluing reduction", gluing));

    let compression = (0..cases).all(|_| {
        let size = [vec![2, 1], vec![3, 1], vec![2, 2]][rng.gen_range(0..3)].clone();
        let Ok(h) = random_hyperbox(&mut rng, &size) else { return false };
        let Ok(c) = h.compress() else { return false };
        let Ok(after) = c.total_complex().map(|t| t.homology_dim()) else { return false };
        let before = if size[1] == 1 {
            h.composite_cone().map(|m| cone_homology_dim(&m))
        } else {
            h.swap_axes(0, 1).compress().and_then(|s| s.total_complex()).map(|t| t.homology_dim())
        };
        c.check_relations().is_empty() && before.ok() == Some(after)
    });
    results.push(("compression preserves homology", compression));

    let failed = results.iter().filter(|(_, ok)| !ok).count();
    let body = match format {
        Format::Json => to_json(&json!({
            "seed": seed,
            "cases": cases,
            "results": results.iter().map(|(n, ok)| json!({"check": n, "pass": ok})).collect::<Vec<_>>(),
        })),
        Format::Text => results
            .iter()
            .map(|(n, ok)| format!("{} {n}", if *ok { "PASS" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    if failed > 0 {
        return Err(CliError {
            code: EXIT_SEMANTIC,
            message: format!("{failed} self-check(s) failed"),
            output: Some(body),
        });
    }
    Ok(body)
}
