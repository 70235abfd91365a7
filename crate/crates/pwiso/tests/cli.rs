use std::path::Path;
use std::process::{Command, Output};

fn pwiso(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwiso")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = pwiso(&["certify", "--map", "f2", "--n", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NOT-PERIODIC"));
    assert!(stdout(&o).contains("α = 2 − √5"));

    let o = pwiso(&["certify", "--map", "f3", "--n", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("INCONCLUSIVE"));

    let o = pwiso(&["certify", "--map", "f3", "--n", "4", "--json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "pwiso/1");
    assert_eq!(v["verdict"], "NOT-PERIODIC");
    assert_eq!(v["alpha"]["closed_form"], "1 − √2");
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(pwiso(&["construct", "--map", "bogus", "--n", "5", "--out", "x.json"], d).status.code(), Some(1));
    assert_eq!(pwiso(&["certify", "--map", "f2", "--n", "6"], d).status.code(), Some(1));
    assert_eq!(pwiso(&["render", "--map", "missing.json", "--out", "x.svg"], d).status.code(), Some(1));
    std::fs::write(d.join("bad.json"), "{ not json").unwrap();
    assert_eq!(pwiso(&["orbit", "--map", "bad.json", "--seed", "0,0", "--out", "o.json"], d).status.code(), Some(1));
    assert_eq!(pwiso(&["construct", "--map", "f3", "--n", "5", "--out", "f3.json"], d).status.code(), Some(0));
    let o = pwiso(&["orbit", "--map", "f3.json", "--seed", "1/3,1/7", "--budget", "0", "--out", "o.json"], d);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(pwiso(&["return-map", "--map", "f3.json", "--cell", "V0", "--out", "r.json"], d).status.code(), Some(1));
    assert_eq!(pwiso(&["--help"], d).status.code(), Some(0));
}

#[test]
fn construct_and_render_heptagon_pieces() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(pwiso(&["construct", "--map", "f2", "--n", "7", "--out", "f2.json"], d).status.success());
    let first = std::fs::read(d.join("f2.json")).unwrap();
    assert!(pwiso(&["construct", "--map", "f2", "--n", "7", "--out", "f2.json"], d).status.success());
    assert_eq!(std::fs::read(d.join("f2.json")).unwrap(), first);

    assert!(pwiso(&["render", "--map", "f2.json", "--out", "f2.svg"], d).status.success());
    let svg = std::fs::read_to_string(d.join("f2.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains(r#"version="1.1""#));
    assert!(svg.contains(r#"digits="12""#));
    assert_eq!(svg.matches("<polygon id=").count(), 3);
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.matches("<line ").count() >= 3);
}

#[test]
fn orbit_return_map_and_hecke() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(pwiso(&["construct", "--map", "dual", "--n", "4", "--out", "sq.json"], d).status.success());
    assert!(pwiso(&["orbit", "--map", "sq.json", "--seed", "2,0", "--budget", "10", "--out", "o.json"], d).status.success());
    let o: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("o.json")).unwrap()).unwrap();
    // 2 -> -2 - 2i under the square billiard
    assert_eq!(o["iterates"][1]["coeffs"], serde_json::json!(["-2/1", "-2/1"]));
    let o = pwiso(&["orbit", "--map", "sq.json", "--seed", "cyc:4:5/2,1/3", "--out", "o2.json"], d);
    assert!(o.status.success());
    assert!(pwiso(&["render", "--map", "sq.json", "--orbit", "o2.json", "--out", "o.svg", "--digits", "5"], d).status.success());
    assert!(std::fs::read_to_string(d.join("o.svg")).unwrap().contains(r#"digits="5""#));

    assert!(pwiso(&["construct", "--map", "f0", "--n", "5", "--out", "f0.json"], d).status.success());
    let o = pwiso(&["return-map", "--map", "f0.json", "--cell", "V0", "--out", "r.json"], d);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    let times: Vec<u64> = r["map"]["atoms"].as_array().unwrap().iter().map(|a| a["time"].as_u64().unwrap()).collect();
    let mut sorted = times.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec![2, 3, 4, 5, 6]);

    let o = pwiso(&["hecke", "--map", "f3", "--n", "3", "--period", "3", "--json"], d);
    assert_eq!(o.status.code(), Some(0));
    let h: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(h["all_hold"], true);
}
