//! End-to-end tests of the `cpmglue` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cpmglue::channel::KrausChannel;
use cpmglue::gluing::GluingMatrix;
use cpmglue::matrix::ComplexMatrix;
use cpmglue::random;
use cpmglue::subspace::BlockSplit;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpmglue"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("cpmglue-cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_split(path: &Path, s1: usize, s2: usize, t1: usize, t2: usize) {
    let text = format!(
        "{{\"s1_dim\": {s1}, \"s2_dim\": {s2}, \"t1_dim\": {t1}, \"t2_dim\": {t2}}}\n"
    );
    std::fs::write(path, text).unwrap();
}

#[test]
fn validate_identity_channel() {
    let dir = workdir("validate");
    let path = dir.join("id.json");
    cpmglue::io::save_channel(&path, &KrausChannel::identity(2), Some("id".into())).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("CP: yes"), "{text}");
    assert!(text.contains("TP: yes"), "{text}");
    assert!(text.contains("K = 1"), "{text}");
}

#[test]
fn validate_with_split_reports_sp_structure() {
    let dir = workdir("validate-split");
    let split = BlockSplit::symmetric(2, 2).unwrap();
    let mut rng = StdRng::seed_from_u64(61);
    let phi1 = random::tp_channel(&mut rng, 2, 2, 2);
    let phi2 = random::tp_channel(&mut rng, 2, 2, 2);
    let rep1 = phi1.linearly_independent().unwrap();
    let rep2 = phi2.linearly_independent().unwrap();
    let g = GluingMatrix {
        c: random::contraction(&mut rng, rep1.kraus().len(), rep2.kraus().len(), 0.8),
        rep1: rep1.kraus().to_vec(),
        rep2: rep2.kraus().to_vec(),
    };
    let glued = cpmglue::gluing::build_gluing(&phi1, &phi2, &g, &split).unwrap();
    let chan_path = dir.join("glued.json");
    let split_path = dir.join("split.json");
    cpmglue::io::save_channel(&chan_path, &glued, None).unwrap();
    write_split(&split_path, 2, 2, 2, 2);
    let out = run(&[
        "validate",
        chan_path.to_str().unwrap(),
        "--split",
        split_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("SP: yes"), "{text}");
    assert!(text.contains("singulars:"), "{text}");
}

#[test]
fn schema_error_exits_one() {
    let dir = workdir("schema");
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"source_dim\": 2}").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("error:"));

    let missing = dir.join("does-not-exist.json");
    let out = run(&["validate", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_arguments_exit_one_and_help_exits_zero() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn glue_extract_round_trip() {
    let dir = workdir("round-trip");
    let split = BlockSplit::symmetric(2, 2).unwrap();
    let mut rng = StdRng::seed_from_u64(62);
    let phi1 = random::tp_channel(&mut rng, 2, 2, 2);
    let phi2 = random::tp_channel(&mut rng, 2, 2, 2);
    let n = phi1.linearly_independent().unwrap().kraus().len();
    let m = phi2.linearly_independent().unwrap().kraus().len();
    let cmat = random::contraction(&mut rng, n, m, 0.85);

    let p1 = dir.join("phi1.json");
    let p2 = dir.join("phi2.json");
    let pc = dir.join("c.json");
    let ps = dir.join("split.json");
    let glued_path = dir.join("glued.json");
    let back_path = dir.join("extracted.json");
    cpmglue::io::save_channel(&p1, &phi1, None).unwrap();
    cpmglue::io::save_channel(&p2, &phi2, None).unwrap();
    cpmglue::io::save_matrix(&pc, &cmat).unwrap();
    write_split(&ps, 2, 2, 2, 2);

    let out = run(&[
        "glue",
        p1.to_str().unwrap(),
        p2.to_str().unwrap(),
        "--matrix",
        pc.to_str().unwrap(),
        "--split",
        ps.to_str().unwrap(),
        "-o",
        glued_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("wrote"));

    let out = run(&[
        "extract",
        glued_path.to_str().unwrap(),
        p1.to_str().unwrap(),
        p2.to_str().unwrap(),
        "--split",
        ps.to_str().unwrap(),
        "-o",
        back_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let back = cpmglue::io::load_gluing_matrix(&back_path).unwrap();
    assert!(
        (&back.c - &cmat).frobenius_norm() < 1e-9,
        "extracted C differs by {}",
        (&back.c - &cmat).frobenius_norm()
    );
}

#[test]
fn extract_rejects_unrelated_channel() {
    let dir = workdir("reject");
    let mut rng = StdRng::seed_from_u64(63);
    let phi1 = random::tp_channel(&mut rng, 2, 2, 2);
    let phi2 = random::tp_channel(&mut rng, 2, 2, 2);
    // A generic TP channel on the full space is not SP for the split.
    let whole = random::tp_channel(&mut rng, 4, 4, 3);
    let p1 = dir.join("phi1.json");
    let p2 = dir.join("phi2.json");
    let pw = dir.join("whole.json");
    let ps = dir.join("split.json");
    cpmglue::io::save_channel(&p1, &phi1, None).unwrap();
    cpmglue::io::save_channel(&p2, &phi2, None).unwrap();
    cpmglue::io::save_channel(&pw, &whole, None).unwrap();
    write_split(&ps, 2, 2, 2, 2);
    let out = run(&[
        "extract",
        pw.to_str().unwrap(),
        p1.to_str().unwrap(),
        p2.to_str().unwrap(),
        "--split",
        ps.to_str().unwrap(),
        "-o",
        dir.join("out.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
}

#[test]
fn decompose_swap_and_invalid_matrix() {
    let dir = workdir("decompose");
    let swap = ComplexMatrix::from_rows_vec(
        2,
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .unwrap();
    let pc = dir.join("swap.json");
    cpmglue::io::save_matrix(&pc, &swap).unwrap();
    let out = run(&["decompose", pc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("valid: yes"), "{text}");
    assert!(text.contains("extreme: yes"), "{text}");
    assert!(text.contains("LSP: no"), "{text}");

    let too_big = ComplexMatrix::identity(1).scale(Complex64::new(1.5, 0.0));
    let pb = dir.join("big.json");
    cpmglue::io::save_matrix(&pb, &too_big).unwrap();
    let out = run(&["decompose", pb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn apply_identity_returns_state() {
    let dir = workdir("apply");
    let pphi = dir.join("id.json");
    let pstate = dir.join("state.json");
    cpmglue::io::save_channel(&pphi, &KrausChannel::identity(2), None).unwrap();
    let state = ComplexMatrix::from_rows_vec(
        2,
        2,
        vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.25),
            Complex64::new(0.0, -0.25),
            Complex64::new(0.5, 0.0),
        ],
    )
    .unwrap();
    cpmglue::io::save_matrix(&pstate, &state).unwrap();
    let out = run(&["apply", pphi.to_str().unwrap(), pstate.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("5.00000000000e-1"), "{text}");
    assert!(text.contains("-2.50000000000e-1"), "{text}");
}

#[test]
fn glue_outputs_are_byte_deterministic() {
    let dir = workdir("determinism");
    let split = BlockSplit::symmetric(1, 2).unwrap();
    let mut rng = StdRng::seed_from_u64(64);
    let phi1 = random::tp_channel(&mut rng, 1, 1, 1);
    let phi2 = random::tp_channel(&mut rng, 2, 2, 2);
    let n = phi1.linearly_independent().unwrap().kraus().len();
    let m = phi2.linearly_independent().unwrap().kraus().len();
    let cmat = random::contraction(&mut rng, n, m, 0.7);
    let p1 = dir.join("phi1.json");
    let p2 = dir.join("phi2.json");
    let pc = dir.join("c.json");
    let ps = dir.join("split.json");
    cpmglue::io::save_channel(&p1, &phi1, None).unwrap();
    cpmglue::io::save_channel(&p2, &phi2, None).unwrap();
    cpmglue::io::save_matrix(&pc, &cmat).unwrap();
    write_split(&ps, 1, 2, 1, 2);
    let out_a = dir.join("a.json");
    let out_b = dir.join("b.json");
    for out_path in [&out_a, &out_b] {
        let out = run(&[
            "glue",
            p1.to_str().unwrap(),
            p2.to_str().unwrap(),
            "--matrix",
            pc.to_str().unwrap(),
            "--split",
            ps.to_str().unwrap(),
            "-o",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
}

#[test]
fn demos_pass_and_unknown_demo_fails() {
    for name in [
        "unitary-family",
        "collapse",
        "swap-mixture",
        "ancilla",
        "sprep",
        "vacuum",
    ] {
        let out = run(&["demo", name]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "demo {name}: stderr {} stdout {}",
            stderr_of(&out),
            stdout_of(&out)
        );
        assert!(stdout_of(&out).contains("[pass]"), "demo {name}");
    }
    let out = run(&["demo", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_env_var_changes_the_verdict() {
    // A slightly over-contractive matrix is invalid at the default
    // tolerance but valid under a loose CPMGLUE_TOL.
    let dir = workdir("tol");
    let c = ComplexMatrix::identity(1).scale(Complex64::new(1.0 + 1e-6, 0.0));
    let pc = dir.join("c.json");
    cpmglue::io::save_matrix(&pc, &c).unwrap();
    let out = run(&["decompose", pc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["decompose", pc.to_str().unwrap()])
        .env("CPMGLUE_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
}
