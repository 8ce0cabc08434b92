use serde_json::Value;
use std::fs;
use std::path::Path;
use torelli_cli::{run_args, EXIT_BUDGET, EXIT_FALSE, EXIT_INFEASIBLE, EXIT_PASS, EXIT_USAGE};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn torelli(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_args(std::iter::once("torelli").chain(args.iter().copied()), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let s: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, inst: &Value) {
    if let Err(e) = v.validate(inst) {
        panic!("schema violation: {e}\n{inst}");
    }
}

fn rows(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn derive_s_sphere() {
    let o = torelli(&["derive", "s", "--surface", "4hs"]);
    assert_eq!(o.code, EXIT_PASS);
    let got: torelli::polyring::Poly = o.stdout.trim().parse().unwrap();
    let want: torelli::polyring::Poly = "2*t23^2 - t2*t3*t23 - t1*t4*t23 - 2*t13^2 + t1*t3*t13 + t2*t4*t13".parse().unwrap();
    assert_eq!(got, want);
}

#[test]
fn derive_s_json_and_row_variant() {
    let ks = torelli(&["--json", "derive", "s", "--surface", "2ht"]);
    let kp = torelli(&["--json", "derive", "s", "--surface", "2ht", "--row-variant", "kp"]);
    assert_eq!(ks.code, EXIT_PASS);
    let (a, b): (Value, Value) = (serde_json::from_str(&ks.stdout).unwrap(), serde_json::from_str(&kp.stdout).unwrap());
    assert_eq!(a["row_variant"], "ks");
    assert_eq!(b["row_variant"], "kp");
    assert_ne!(a["s"], b["s"]);
}

#[test]
fn verify_relation_passes() {
    let o = torelli(&["verify", "relation", "--surface", "2ht"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_valid(&schema("relation.schema.json"), &v);
    assert_eq!(v["defect"], "0");
}

#[test]
fn verify_transversality_sphere() {
    let o = torelli(&["verify", "transversality", "--surface", "4hs"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_valid(&schema("certificate.schema.json"), &v);
    assert_eq!(v["residue_nonzero"], true);
    assert!(v["witness"].is_array());
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = torelli(&["verify", "transversality", "--surface", "4hs", "--order", "lex", "--budget", "10"]);
    assert_eq!(o.code, EXIT_BUDGET);
    assert!(o.stderr.contains("budget"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(torelli(&["derive", "s"]).code, EXIT_USAGE);
    assert_eq!(torelli(&["derive", "s", "--surface", "3ht"]).code, EXIT_USAGE);
    assert_eq!(torelli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(torelli(&["sample", "--surface", "2ht", "--c", "0.3"]).code, EXIT_USAGE);
    assert_eq!(torelli(&["sample", "--surface", "2ht", "--c", "0.3,-1.1", "--liouville"]).code, EXIT_USAGE);
    assert_eq!(torelli(&["derive", "hamfield", "--surface", "4hs", "--f", "t12 +"]).code, EXIT_USAGE);
    assert_eq!(torelli(&["hist", "/nonexistent/input.jsonl"]).code, EXIT_USAGE);
}

#[test]
fn json_errors_are_objects() {
    let o = torelli(&["--json", "derive", "s"]);
    let v: Value = serde_json::from_str(o.stderr.trim()).unwrap();
    assert_eq!(v["exit_code"], EXIT_USAGE);
}

#[test]
fn infeasible_boundary_exits_4() {
    assert_eq!(torelli(&["sample", "--surface", "4hs", "--c", "2.5,0,0,0"]).code, EXIT_INFEASIBLE);
    assert_eq!(torelli(&["walk", "--surface", "2ht", "--c", "0.3,-3"]).code, EXIT_INFEASIBLE);
}

#[test]
fn walk_emits_one_row_per_step() {
    let o = torelli(&["walk", "--surface", "2ht", "--c", "0.3,-1.1", "--steps", "1000", "--seed", "7"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let rs = rows(&o.stdout);
    assert_eq!(rs.len(), 1000);
    let v = schema("stream_row.schema.json");
    for (i, r) in rs.iter().enumerate() {
        assert_valid(&v, r);
        assert_eq!(r["step"], i + 1);
        assert!((r["x"][0].as_f64().unwrap() - 0.3).abs() < 1e-9);
    }
    // same seed, same walk
    assert_eq!(o.stdout, torelli(&["walk", "--surface", "2ht", "--c", "0.3,-1.1", "--steps", "1000", "--seed", "7"]).stdout);
}

#[test]
fn walk_gens_restricts_moves() {
    let o = torelli(&["walk", "--surface", "2ht", "--c", "0.3,-1.1", "--steps", "200", "--gens", "tau12"]);
    for r in rows(&o.stdout) {
        assert!(r["gen"].as_str().unwrap().starts_with("tau12"));
    }
    assert_eq!(torelli(&["walk", "--surface", "2ht", "--c", "0.3,-1.1", "--gens", "tau99"]).code, EXIT_USAGE);
}

#[test]
fn hist_compare_identical_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let csv = dir.path().join("a.csv");
    let (a_s, b_s, csv_s) = (a.to_str().unwrap(), b.to_str().unwrap(), csv.to_str().unwrap());
    let args = ["sample", "--surface", "4hs", "--c", "0.3,-1.1,0.5,0.2", "--n", "500", "--seed", "2"];
    assert_eq!(torelli(&[&args[..], &["--out", a_s]].concat()).code, EXIT_PASS);
    assert_eq!(torelli(&[&args[..], &["--out", b_s]].concat()).code, EXIT_PASS);
    let o = torelli(&["--json", "hist", a_s, "--bins", "20", "--coords", "t12,t13,t23", "--compare", b_s, "--out", csv_s]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_valid(&schema("hist_report.schema.json"), &v);
    assert_eq!(v["tv"], 0.0);
    assert_eq!(v["total"], 500);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("bin_index,t12_lo,t12_hi,t13_lo,t13_hi,t23_lo,t23_hi,count"));
    // a stream against its own CSV histogram
    let o = torelli(&["--json", "hist", a_s, "--compare", csv_s]);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["tv"], 0.0);
}

#[test]
fn hist_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let csv = dir.path().join("a.csv");
    let (a_s, csv_s) = (a.to_str().unwrap(), csv.to_str().unwrap());
    torelli(&["sample", "--surface", "4hs", "--c", "0.3,-1.1,0.5,0.2", "--n", "50", "--out", a_s]);
    torelli(&["hist", a_s, "--bins", "10", "--out", csv_s]);
    assert_eq!(torelli(&["hist", a_s, "--bins", "20", "--compare", csv_s]).code, EXIT_USAGE);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sphere run\nsurface = 4hs\nc = 0.3,-1.1,0.5,0.2\nn = 5\nseed = 11\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let o = torelli(&["--config", cfg_s, "sample"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    assert_eq!(rows(&o.stdout).len(), 5);
    let o2 = torelli(&["--config", cfg_s, "sample", "--n", "3"]);
    assert_eq!(rows(&o2.stdout).len(), 3);
    assert!(o.stdout.starts_with(o2.stdout.lines().next().unwrap()));
    let o3 = torelli(&["--config", cfg_s, "sample", "--seed", "12"]);
    assert_ne!(o.stdout, o3.stdout);

    fs::write(&cfg, "surface = 4hs\ncolour = blue\n").unwrap();
    assert_eq!(torelli(&["--config", cfg_s, "derive", "s"]).code, EXIT_USAGE);
}

#[test]
fn hamfield_prints_seven_components() {
    let o = torelli(&["derive", "hamfield", "--surface", "4hs", "--f", "t12"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.stdout.lines().count(), 7);
    assert!(o.stdout.contains("d/dt12: 0"));
    let literal = torelli(&["derive", "hamfield", "--surface", "2ht", "--f", "t12", "--bivector", "literal"]);
    assert_eq!(literal.code, EXIT_PASS);
}

#[test]
fn flow_rows_and_conservation() {
    let o = torelli(&[
        "flow", "--surface", "4hs", "--c", "0.3,-1.1,0.5,0.2", "--seed", "3", "--f", "t12", "--T", "0.5", "--dt", "0.01", "--project",
    ]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let rs = rows(&o.stdout);
    assert_eq!(rs.len(), 51);
    let t12 = rs[0]["x"][4].as_f64().unwrap();
    for r in &rs {
        assert!((r["x"][4].as_f64().unwrap() - t12).abs() < 1e-9);
        assert!((r["x"][1].as_f64().unwrap() - 0.3).abs() < 1e-9);
    }
    assert_eq!(torelli(&["flow", "--surface", "4hs", "--start", "1,2,3", "--f", "t12"]).code, EXIT_USAGE);
    // a start point off the variety is rejected up front
    assert_eq!(torelli(&["flow", "--surface", "4hs", "--start", "0,0,0,0,0,0,1.5", "--f", "t12"]).code, EXIT_USAGE);
}

#[test]
fn liouville_rows() {
    let o = torelli(&["sample", "--surface", "4hs", "--c", "0.3,-1.1,0.5,0.2", "--n", "10", "--liouville"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.stderr);
    let rs = rows(&o.stdout);
    assert_eq!(rs.len(), 10);
    assert!(rs.iter().all(|r| r["gen"] == "liouville"));
}

#[test]
fn split_reports() {
    let o = torelli(&["derive", "split", "--surface", "4hs", "--var", "t23"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.stdout.trim(), "no split");
}

#[test]
fn exit_codes_are_distinct() {
    let mut v = vec![EXIT_PASS, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET, EXIT_INFEASIBLE];
    v.dedup();
    assert_eq!(v, [0, 1, 2, 3, 4]);
}
