//! Black-box tests of the binary: generate/check flows, report formats, and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_sepcheck")
}

fn run(args: &[&str]) -> Output {
    Command::new(exe()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_check_entangled_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("bell.json");
    let gen = run(&["gen", "named", "bell:psi-", path_str(&state)]);
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));

    let check = run(&["check", path_str(&state), "--samples", "16", "--dirs", "16"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
    let text = stdout(&check);
    assert!(text.contains("verdict: Entangled"), "{text}");
    assert!(text.contains("VIOLATED"), "{text}");
    assert!(text.contains("ppt:0"), "{text}");
}

#[test]
fn gen_then_check_separable_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("sep.json");
    let gen = run(&[
        "gen",
        "separable",
        "--dims",
        "2,3",
        "-k",
        "3",
        "--seed",
        "5",
        path_str(&state),
    ]);
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));

    let check = run(&["check", path_str(&state), "--samples", "32", "--dirs", "32"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
    let text = stdout(&check);
    assert!(text.contains("verdict: Separable"), "{text}");
    assert!(!text.contains("VIOLATED"), "{text}");
}

#[test]
fn check_outside_definitive_dims_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("sep33.json");
    let gen = run(&[
        "gen",
        "separable",
        "--dims",
        "3,3",
        "--seed",
        "2",
        path_str(&state),
    ]);
    assert_eq!(gen.status.code(), Some(0), "{}", stderr(&gen));

    let check = run(&["check", path_str(&state), "--samples", "16", "--dirs", "16"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
    assert!(
        stdout(&check).contains("verdict: inconclusive (all necessary criteria satisfied)"),
        "{}",
        stdout(&check)
    );
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("rho.json");
    run(&["gen", "named", "spectra-twins-rho", path_str(&state)]);

    let check = run(&[
        "check",
        path_str(&state),
        "--samples",
        "16",
        "--dirs",
        "16",
        "--format",
        "json",
    ]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
    let report: sepcheck::cli::CheckReport =
        serde_json::from_str(&stdout(&check)).unwrap();
    assert_eq!(report.dims, vec![2, 2]);
    assert_eq!(
        report.verdict.conclusion,
        sepcheck::criteria::Conclusion::Entangled
    );
    assert!(!report.verdict.certificates.is_empty());
}

#[test]
fn gen_output_reads_back_as_valid_state() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("named.json", vec!["gen", "named", "phi-mixture:0.25"]),
        (
            "sep.json",
            vec!["gen", "separable", "--dims", "2,2,2", "--seed", "9"],
        ),
        ("rand.json", vec!["gen", "random", "--dim", "5", "--seed", "3"]),
    ] {
        let path = dir.path().join(name);
        let mut full = args.clone();
        full.push(path_str(&path));
        let gen = run(&full);
        assert_eq!(gen.status.code(), Some(0), "{name}: {}", stderr(&gen));
        let file = sepcheck::cli::StateFile::read(&path).unwrap();
        file.to_density().expect("generated file must validate");
    }
}

#[test]
fn diag_reports_interval_and_distances() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("sep.json");
    run(&[
        "gen",
        "separable",
        "--dims",
        "2,2",
        "-k",
        "1",
        "--seed",
        "4",
        path_str(&state),
    ]);
    let diag = run(&["diag", path_str(&state)]);
    assert_eq!(diag.status.code(), Some(0), "{}", stderr(&diag));
    let text = stdout(&diag);
    assert!(text.contains("cross-gram distance"), "{text}");
    assert!(text.contains("mu interval"), "{text}");
    // A single product term keeps the cross-Gram matrices equal up to
    // rounding, and the feasible interval runs to both search bounds.
    let full: f64 = text
        .split("full=")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(full <= 1e-10, "{text}");
    assert!(text.contains("(search bound)"), "{text}");
}

#[test]
fn blocks_prints_coefficients_and_margin() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("phi.json");
    run(&["gen", "named", "phi-mixture:1", path_str(&state)]);
    let blocks = run(&["blocks", path_str(&state)]);
    assert_eq!(blocks.status.code(), Some(0), "{}", stderr(&blocks));
    let text = stdout(&blocks);
    for label in ["M0:", "Mx:", "My:", "Mz:", "trace margin"] {
        assert!(text.contains(label), "missing {label} in {text}");
    }
    assert!(text.contains("-2.5"), "margin -0.25 expected in {text}");
}

#[test]
fn invalid_inputs_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();

    // Single-subsystem file: checkable criteria need at least two parts.
    let single = dir.path().join("single.json");
    run(&["gen", "random", "--dim", "3", "--seed", "1", path_str(&single)]);
    let check = run(&["check", path_str(&single)]);
    assert_eq!(check.status.code(), Some(1));
    assert!(
        stderr(&check).contains("at least 2 subsystems required"),
        "{}",
        stderr(&check)
    );

    // Diagnostics demand a bipartite split.
    let tri = dir.path().join("tri.json");
    run(&["gen", "separable", "--dims", "2,2,2", "--seed", "8", path_str(&tri)]);
    let diag = run(&["diag", path_str(&tri)]);
    assert_eq!(diag.status.code(), Some(1));
    assert!(
        stderr(&diag).contains("bipartite required"),
        "{}",
        stderr(&diag)
    );

    // Block decomposition needs a qubit factor.
    let qutrits = dir.path().join("qutrits.json");
    run(&["gen", "separable", "--dims", "3,3", "--seed", "8", path_str(&qutrits)]);
    let blocks = run(&["blocks", path_str(&qutrits)]);
    assert_eq!(blocks.status.code(), Some(1));
    assert!(
        stderr(&blocks).contains("neither subsystem is a qubit"),
        "{}",
        stderr(&blocks)
    );

    // Malformed state: trace off by far more than the tolerance.
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"dims": [2], "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#,
    )
    .unwrap();
    let check = run(&["check", path_str(&bad)]);
    assert_eq!(check.status.code(), Some(1));
    assert!(stderr(&check).contains("trace"), "{}", stderr(&check));

    // Unreadable file.
    let missing = run(&["check", path_str(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn qubit_second_blocks_note_the_swap() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("sep32.json");
    run(&[
        "gen",
        "separable",
        "--dims",
        "3,2",
        "--seed",
        "6",
        path_str(&state),
    ]);
    let blocks = run(&["blocks", path_str(&state)]);
    assert_eq!(blocks.status.code(), Some(0), "{}", stderr(&blocks));
    assert!(
        stdout(&blocks).contains("subsystems viewed swapped"),
        "{}",
        stdout(&blocks)
    );

    let check = run(&["check", path_str(&state), "--samples", "16", "--dirs", "16"]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));
    assert!(stdout(&check).contains("+swap"), "{}", stdout(&check));
}
