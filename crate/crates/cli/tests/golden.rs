//! Golden-file tests: each case runs the binary inside `tests/golden/` and
//! compares stdout and the exit code with `<name>.out`.
//!
//! Set `BLOWUP_BLESS=1` to rewrite the expected files.

use std::path::PathBuf;
use std::process::Command;

const CASES: &[(&str, &[&str], i32)] = &[
    ("param_space_j2", &["param-space", "--j1", "2", "--j2", "-2", "--k", "1"], 0),
    ("param_space_j4", &["param-space", "--j1", "4", "--j2", "-4"], 0),
    ("param_space_empty", &["param-space", "--j1", "1", "--j2", "0"], 0),
    ("validate_example", &["validate", "split_example.json"], 0),
    ("validate_bad_u", &["validate", "bad_u.json"], 1),
    ("validate_singular", &["validate", "singular.json"], 1),
    ("split_type_example", &["split-type", "split_example.json"], 0),
    ("canonical_j2", &["canonical", "j2_generic.json"], 0),
    ("canonical_scrambled", &["canonical", "scrambled.json"], 0),
    ("iso_scaled", &["iso", "j2_generic.json", "j2_scaled.json"], 0),
    ("iso_distinct", &["iso", "j2_generic.json", "j2_other.json"], 0),
    ("iso_capped", &["--zbound", "0", "iso", "j2_generic.json", "j2_other.json"], 2),
    ("orbit_rank_j2", &["orbit-rank", "j2_generic.json"], 0),
    ("moduli_generic", &["moduli-j2", "--p10", "1", "--p11", "2", "--p21", "0"], 0),
    ("moduli_generic_inf", &["moduli-j2", "--p10", "0", "--p11", "3", "--p21", "1"], 0),
    ("moduli_q1", &["moduli-j2", "--p10", "0", "--p11", "0", "--p21", "1"], 0),
    ("moduli_q2", &["moduli-j2", "--p10", "0", "--p11", "0", "--p21", "0"], 0),
    ("moduli_text", &["--format", "text", "moduli-j2", "--p10", "1/2", "--p11", "0,1", "--p21", "-3"], 0),
    ("glue_validate_identity", &["glue", "validate", "glue_identity.json"], 0),
    ("glue_validate_upper", &["glue", "validate", "glue_upper.json"], 0),
    ("glue_validate_bad", &["glue", "validate", "glue_bad.json"], 1),
    ("glue_certify_identity", &["glue", "certify", "glue_identity.json"], 0),
    ("glue_certify_upper", &["glue", "certify", "glue_upper.json"], 0),
    ("glue_certify_reflection", &["glue", "certify", "glue_reflection.json"], 0),
    ("topo_class_a", &["topo-class", "descriptor_a.json"], 0),
    ("topo_class_b", &["topo-class", "descriptor_b.json"], 0),
    ("is_pullback_true", &["is-pullback", "descriptor_pullback.json"], 0),
    ("is_pullback_false", &["is-pullback", "descriptor_split.json"], 0),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_blowup"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8"), out.status.code().expect("exit code"))
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("BLOWUP_BLESS").is_some();
    let mut failures = Vec::new();
    for &(name, args, code) in CASES {
        let (stdout, status) = run(args);
        let path = golden_dir().join(format!("{name}.out"));
        if bless {
            std::fs::write(&path, &stdout).unwrap();
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_default();
        if status != code || stdout != expected {
            failures.push(format!("{name}: exit {status} (want {code})"));
        }
    }
    assert!(failures.is_empty(), "golden mismatches:\n{}", failures.join("\n"));
}

#[test]
fn descriptors_differing_only_in_phi_share_a_class() {
    let (a, _) = run(&["topo-class", "descriptor_a.json"]);
    let (b, _) = run(&["topo-class", "descriptor_b.json"]);
    assert_eq!(a, b);
}

#[test]
fn discovery_writes_a_usable_family() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.json");
    let fam_arg = fam.to_str().unwrap();
    let (_, code) = run(&["moduli", "discover", "--j", "2", "--samples", "60", "--seed", "3", "--out", fam_arg]);
    assert_eq!(code, 0);
    let (out, code) = run(&["moduli-j2", "--p10", "0", "--p11", "0", "--p21", "4", "--family", fam_arg]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["class"], "q1");
}

#[test]
fn outputs_are_deterministic() {
    for args in [&["canonical", "scrambled.json"][..], &["moduli", "discover", "--samples", "40"][..]] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn missing_file_is_a_validation_error() {
    let (out, code) = run(&["validate", "no_such_file.json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "validation");
}
