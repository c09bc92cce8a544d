use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reebspace")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn sphere_homology() {
    let (v, code) = report(&["homology", "--recipe", &path("sphere2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["ranks"], serde_json::json!([1, 0, 1]));
    let bytes = std::fs::read(fixture("sphere2.json")).unwrap();
    assert_eq!(v["recipe_digest"], format!("{:x}", Sha256::digest(&bytes)));
    assert_eq!(v["seed"], 0);
}

#[test]
fn projective_plane_coefficients() {
    let (z, _) = report(&["homology", "--recipe", &path("rp2.json")]);
    assert_eq!(z["groups"][1]["torsion"], serde_json::json!([2]));
    let (z2, _) = report(&["homology", "--coeff", "z2", "--recipe", &path("rp2.json")]);
    assert_eq!(z2["ranks"], serde_json::json!([1, 1, 1]));
    let (red, _) = report(&["homology", "--reduced", "--recipe", &path("sphere2.json")]);
    assert_eq!(red["ranks"], serde_json::json!([0, 0, 1]));
}

#[test]
fn torus_reeb_graph() {
    let (v, code) = report(&["reeb", "--smooth-degree-2", "--recipe", &path("torus.json")]);
    assert_eq!(code, 0);
    let inv = &v["graph"]["invariants"];
    assert_eq!(inv["degrees"], serde_json::json!([1, 1, 3, 3]));
    assert_eq!((inv["edges"].as_u64(), inv["beta1"].as_u64()), (Some(4), Some(1)));
}

#[test]
fn cohomology_ring_of_sphere() {
    let (v, code) = report(&["cohomology", "--recipe", &path("sphere2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["ring"]["degrees"][2]["rank"], 1);
}

#[test]
fn double_attachment_bundle_passes() {
    let (v, code) = report(&["verify-thm5", "--recipe", &path("doubles.json")]);
    assert_eq!(code, 0, "{v}");
    let ids: Vec<&str> = v["claims"].as_array().unwrap().iter().map(|c| c["claim-id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"double.i3.cup.1x1"));
}

#[test]
fn flap_bundle_with_relative_recipe() {
    let (v, code) = report(&["verify-thm3", "--recipe", &path("flaps.json")]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn disc_bundle_rejects_the_torus() {
    let out = std::env::temp_dir().join(format!("reebspace-discs-{}.json", std::process::id()));
    let o = run(&["verify-fact3", "--recipe", &path("discs.json"), "--out", &out.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    std::fs::remove_file(&out).ok();
    let claims = v["claims"].as_array().unwrap();
    let by_id = |id: &str| claims.iter().find(|c| c["claim-id"] == id).unwrap().clone();
    assert_eq!(by_id("disc.two-flaps.collapse")["pass"], true);
    assert!(by_id("disc.torus.collapse")["computed"].get("not-a-candidate").is_some());
}

#[test]
fn collapse_outcomes() {
    let (v, code) = report(&["collapse", "--recipe", &path("flapped_disc.json"), "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], "certificate");
    assert_eq!(v["certificate"]["seed"], 7);
    let (v, code) = report(&["collapse", "--recipe", &path("sphere2.json"), "--restarts", "2"]);
    assert_eq!((code, v["outcome"].as_str()), (1, Some("inconclusive")));
    let (v, code) = report(&["collapse", "--recipe", &path("flapped_disc.json"), "--target", "disc_2"]);
    assert_eq!((code, v["outcome"].as_str()), (0, Some("certificate")));
}

#[test]
fn reports_are_deterministic() {
    let args = ["collapse", "--recipe", &path("flapped_disc.json"), "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["build", "--recipe", &path("i2.json")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn build_round_trips_through_from_facets() {
    let (v, code) = report(&["build", "--recipe", &path("i2.json")]);
    assert_eq!(code, 0);
    let mut step = v["model"].clone();
    step["id"] = "w".into();
    step["op"] = "from_facets".into();
    let recipe = std::env::temp_dir().join(format!("reebspace-roundtrip-{}.json", std::process::id()));
    std::fs::write(&recipe, serde_json::to_string(&serde_json::json!([step])).unwrap()).unwrap();
    let (again, _) = report(&["build", "--recipe", &recipe.to_string_lossy()]);
    let (h1, _) = report(&["homology", "--recipe", &path("i2.json")]);
    let (h2, _) = report(&["homology", "--recipe", &recipe.to_string_lossy()]);
    std::fs::remove_file(&recipe).ok();
    assert_eq!(again["euler_characteristic"], v["euler_characteristic"]);
    assert_eq!(again["f_vector"], v["f_vector"]);
    assert_eq!(h1["groups"], h2["groups"]);
}

#[test]
fn errors_exit_with_status_two() {
    let o = run(&["build", "--recipe", &path("dangling.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("step 0") && err.contains("dangling"), "{err}");
    let o = run(&["homology", "--recipe", &path("missing.json")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["homology"]);
    assert_eq!(o.status.code(), Some(2));
}
