use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: &[&str] = &[
    "cup_homology",
    "torsion_detection",
    "hypercube_compression",
    "spectral_sequence",
    "knot_surgery",
    "reduction_trace",
    "mapping_cone",
    "spinc_lattice",
    "acyclic_cancellation",
];

fn example_binary(name: &str) -> Option<PathBuf> {
    let test_exe = std::env::current_exe().ok()?;
    let profile_dir = test_exe.parent()?.parent()?;
    let path = profile_dir.join("examples").join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
    path.is_file().then_some(path)
}

fn run_example(name: &str) -> String {
    let output = match example_binary(name) {
        Some(path) => Command::new(path).output().unwrap(),
        None => Command::new(env!("CARGO"))
            .args(["run", "--quiet", "--example", name])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .output()
            .unwrap(),
    };
    assert!(output.status.success(), "{name}: {}", String::from_utf8_lossy(&output.stderr));
    String::from_utf8(output.stdout).unwrap()
}

#[test]
fn every_example_runs() {
    for name in EXAMPLES {
        let out = run_example(name);
        assert!(!out.trim().is_empty(), "{name} printed nothing");
    }
}
