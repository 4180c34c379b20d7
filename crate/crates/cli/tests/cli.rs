//! End-to-end tests of the `symlat` binary: output strings, JSON schema and
//! determinism, exit-code contract.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn theta_text_outputs() {
    assert_eq!(stdout_of(&["theta", "22", "2"]), "2^22 * 5^2\n");
    assert_eq!(stdout_of(&["theta", "0", "4"]), "105\n");
    assert_eq!(stdout_of(&["theta", "1", "3"]), "2^4 * 3^4\n");
    assert_eq!(stdout_of(&["theta", "7", "0"]), "1\n");
}

#[test]
fn theta_json_is_deterministic() {
    let a = stdout_of(&["theta", "22", "2", "--format", "json"]);
    let b = stdout_of(&["theta", "22", "2", "--format", "json"]);
    assert_eq!(a, b, "identical invocations must be byte-identical");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["theta"], "2^22 * 5^2");
    assert_eq!(v["payload"]["d"], 22);
    assert_eq!(v["payload"]["det_g_exponent"], "24");
}

#[test]
fn verify_passes_and_corruption_hook_fails() {
    let out = run(&["verify", "--dmax", "2", "--kmax", "3", "--samples", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("all equal"), "{text}");

    // rank-one shapes
    assert_eq!(exit_code(&["verify", "--dmax", "0", "--kmax", "6"]), 0);

    // the corruption hook must trip the harness
    assert_eq!(
        exit_code(&["verify", "--dmax", "1", "--kmax", "2", "--samples", "2", "--corrupt"]),
        1
    );
}

#[test]
fn verify_is_seed_deterministic() {
    let args = ["verify", "--dmax", "1", "--kmax", "2", "--samples", "3", "--seed", "99", "--format", "json"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn orthopoly_output() {
    assert_eq!(stdout_of(&["orthopoly", "2", "5"]), "x^2 - 1/3\n");
    assert_eq!(stdout_of(&["orthopoly", "3", "7"]), "x^3 - x\n");
    let json = stdout_of(&["orthopoly", "2", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["payload"]["coeffs"][0], "-1/3");
    assert_eq!(v["payload"]["coeffs"][2], "1");
    // out of the family's domain
    assert_eq!(exit_code(&["orthopoly", "3", "4"]), 2);
}

#[test]
fn hbasis_gram_output() {
    let text = stdout_of(&["hbasis", "1", "2", "--gram"]);
    assert!(text.contains("diagonal: 3, 1, 8/3"), "{text}");
    assert!(text.contains("product: 8"), "{text}");
    assert!(text.contains("matches_theta: true"), "{text}");

    let text = stdout_of(&["hbasis", "1", "2"]);
    assert!(text.contains("h(0,2) = x1^2 - 1/3*x0^2"), "{text}");

    let text = stdout_of(&["hbasis", "1", "2", "--transition"]);
    assert!(text.contains("row (0,2): 1/3, 0, 1"), "{text}");
    assert!(text.contains("lower_triangular: true"), "{text}");
}

#[test]
fn hk_reports() {
    let text = stdout_of(&["hk", "--manifold", "K3_Hilb", "-k", "3"]);
    assert!(text.contains("discriminant: 2^1106 * 3^92"), "{text}");
    assert!(text.contains("rank: 2300"), "{text}");

    let text = stdout_of(&["hk", "--manifold", "K3_Hilb", "-k", "2"]);
    assert!(text.contains("discriminant: 2^46 * 5^2"), "{text}");
    assert!(text.contains("square_root: 2^23 * 5"), "{text}");

    let text = stdout_of(&[
        "hk", "--manifold", "K3_Hilb", "-k", "3", "--torsion", "2^277 * 3^46",
    ]);
    assert!(text.contains("complement_discriminant: 2^552"), "{text}");

    let text = stdout_of(&["hk", "--manifold", "OG6"]);
    assert!(text.contains("prime_set: 2, 3"), "{text}");
    let text = stdout_of(&["hk", "--manifold", "OG10"]);
    assert!(text.contains("prime_set: 2, 3, 5"), "{text}");

    let json = stdout_of(&["hk", "--manifold", "OG10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["payload"]["prime_set"], serde_json::json!([2, 3, 5]));
}

#[test]
fn exit_code_contract() {
    // bad input
    assert_eq!(exit_code(&["hk", "--manifold", "Enriques"]), 2);
    assert_eq!(exit_code(&["hk", "--manifold", "K3_Hilb", "-k", "1"]), 2);
    // clap usage errors
    assert_eq!(exit_code(&["no-such-command"]), 2);
    assert_eq!(exit_code(&["theta", "1"]), 2);
    // size limits
    assert_eq!(exit_code(&["hbasis", "5", "9"]), 3);
    assert_eq!(exit_code(&["theta", "80", "80"]), 3);
}

#[test]
fn sym_gram_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hyperbolic.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"size": 2, "rows": [["0", "1"], ["1", "0"]]}}"#
    )
    .unwrap();
    let text = stdout_of(&["sym-gram", "--gram", path.to_str().unwrap(), "-k", "2", "--det"]);
    assert!(text.contains("basis: (2,0), (1,1), (0,2)"), "{text}");
    assert!(text.contains("det_induced: -8"), "{text}");
    assert!(text.contains("closed_form: -8"), "{text}");
    assert!(text.contains("equal: true"), "{text}");

    // asymmetric input is rejected on load
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"size": 2, "rows": [["0", "1"], ["2", "0"]]}"#).unwrap();
    assert_eq!(
        exit_code(&["sym-gram", "--gram", bad.to_str().unwrap(), "-k", "2"]),
        2
    );
}

#[test]
fn thread_cap_does_not_change_output() {
    let with_env = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_symlat"))
            .env("SYMLAT_THREADS", threads)
            .args(["verify", "--dmax", "2", "--kmax", "3", "--samples", "2", "--seed", "5", "--format", "json"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(with_env("1"), with_env("4"));
}

#[test]
fn lattice_report_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("embedding.json");
    std::fs::write(
        &path,
        r#"{
            "target_gram": {"size": 2, "rows": [["1", "0"], ["0", "1"]]},
            "basis_rows": [[2, 0]]
        }"#,
    )
    .unwrap();
    let text = stdout_of(&["lattice", "--embedding", path.to_str().unwrap()]);
    assert!(text.contains("discriminant: 2^2"), "{text}");
    assert!(text.contains("torsion: 2"), "{text}");
    assert!(text.contains("primitive: false"), "{text}");
    assert!(text.contains("complement_basis: [0, 1]"), "{text}");
    assert!(text.contains("quotient_consistent: true"), "{text}");

    let json = stdout_of(&["lattice", "--embedding", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["payload"]["complement_discriminant"], "1");
    assert_eq!(v["payload"]["saturation_discriminant"], "1");

    assert_eq!(exit_code(&["lattice", "--embedding", "/nonexistent.json"]), 2);
}
