use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano"))
        .args(args)
        .output()
        .expect("spawn fano")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

const P2: &str = r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,-1]]}"#;
const P2_MOVED: &str = r#"{"dim":2,"vertices":[[2,1],[1,1],[-3,-2]]}"#;
const F1: &str = r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,1],[0,-1]]}"#;
const CUBE4: &str = r#"{"dim":4,"vertices":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[-1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]}"#;

#[test]
fn validate_reports_and_exits() {
    let d = TempDir::new().unwrap();
    let ok = fano(&["validate", &write(&d, "p2.json", P2)]);
    assert!(ok.status.success());
    let v = json_out(&ok);
    assert_eq!(v["valid"], true);
    assert_eq!(v["f_vector"], serde_json::json!([3, 3]));

    let bad = fano(&[
        "validate",
        &write(
            &d,
            "bad.json",
            r#"{"dim":2,"vertices":[[1,0],[0,1],[-1,-1],[2,3]]}"#,
        ),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json_out(&bad)["valid"], false);

    let schema = fano(&[
        "validate",
        &write(&d, "schema.json", r#"{"dim":2,"vertices":[[1,0,0]]}"#),
    ]);
    assert_eq!(schema.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&schema.stderr).contains("error"));
}

#[test]
fn input_flag_and_indices_are_one_based() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "f1.json", F1);
    let rels = json_out(&fano(&["relations", "--input", &f]));
    let texts: Vec<&str> = rels
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["text"].as_str().unwrap())
        .collect();
    assert_eq!(texts.len(), 2);
    assert!(texts.contains(&"v2 + v4 = 0"), "{texts:?}");
    assert!(texts.contains(&"v1 + v3 = v2"), "{texts:?}");
    let cols = json_out(&fano(&["collections", &f]));
    assert!(cols.as_array().unwrap().iter().all(|c| c
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i.as_u64().unwrap() >= 1)));
    let facets = json_out(&fano(&["facets", &f]));
    assert_eq!(facets.as_array().unwrap().len(), 4);
}

#[test]
fn fourfold_subcommands() {
    let d = TempDir::new().unwrap();
    let c = write(&d, "cube.json", CUBE4);
    let inv = json_out(&fano(&["invariants", &c]));
    assert_eq!(inv["c1_pow_d"], 384);
    assert_eq!(inv["aut_dim"], 12);
    assert!(inv["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b["holds"] == true));

    let mori = json_out(&fano(&["mori", &c]));
    assert_eq!(mori["extremal_rays"].as_array().unwrap().len(), 4);
    assert_eq!(mori["lattice"]["rank"], 4);

    let walls = json_out(&fano(&["walls", &c]));
    assert_eq!(walls.as_array().unwrap().len(), 32);

    let proj = json_out(&fano(&["project", &c, "--vertex", "1"]));
    assert_eq!(proj["reflexive"], true);
    assert!(proj["face_types"].is_object());
    assert_eq!(
        fano(&["project", &c, "--vertex", "9"]).status.code(),
        Some(1)
    );
}

#[test]
fn isom_and_canon() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "a.json", P2);
    let b = write(&d, "b.json", P2_MOVED);
    let f = write(&d, "f1.json", F1);
    let yes = fano(&["isom", &a, &b]);
    assert!(yes.status.success());
    assert_eq!(json_out(&yes)["isomorphic"], true);
    let no = fano(&["isom", &a, &f]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&no.stdout).trim(), "not isomorphic");
    let ca = json_out(&fano(&["canon", &a]));
    let cb = json_out(&fano(&["canon", &b]));
    assert_eq!(ca["digest"], cb["digest"]);
    assert_eq!(ca["digest"].as_str().unwrap().len(), 64);
}

#[test]
fn enumerate_lines() {
    let o = fano(&["enumerate", "--dim", "2", "--jobs", "2"]);
    assert!(o.status.success());
    let lines: Vec<Value> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    let last = lines.last().unwrap();
    assert_eq!(last["count"], 5);
    assert_eq!(last["audit_passed"], true);
    assert_eq!(fano(&["enumerate", "--dim", "4"]).status.code(), Some(1));
}

#[test]
fn reconstruct_round_trip() {
    let d = TempDir::new().unwrap();
    let pres = write(
        &d,
        "pres.json",
        r#"{"dim":2,"n":4,"collections":[{"members":[2,4]},{"members":[1,3],"target":{"2":1}}]}"#,
    );
    let o = fano(&["reconstruct", &pres]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let vf = write(&d, "out.json", &String::from_utf8(o.stdout).unwrap());
    let f = write(&d, "f1.json", F1);
    assert!(fano(&["isom", &vf, &f]).status.success());

    let nef = write(
        &d,
        "nef.json",
        r#"{"dim":2,"n":4,"collections":[{"members":[1,3],"target":{"2":2}},{"members":[2,4]}]}"#,
    );
    assert_eq!(fano(&["reconstruct", &nef]).status.code(), Some(1));
}

#[test]
fn catalog_formats_and_exit_codes() {
    let o = fano(&["report", "--dim", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("id,c1_3,b2,h0,a,type,description,status,diffs\n"));
    assert_eq!(text.lines().count(), 19);

    let v = fano(&["catalog-verify", "--dim", "2"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json_out(&v)["entries"].as_array().unwrap().len(), 5);

    let d = TempDir::new().unwrap();
    let cat = write(
        &d,
        "cat.json",
        r#"{"dim":2,"entries":[{"id":1,"name":"P2","construction":{"kind":"vertices","vertices":[[1,0],[0,1],[-1,-1]]},"expected":{"c1_2":10}}]}"#,
    );
    let md = fano(&["catalog-verify", &cat, "--format", "md"]);
    assert_eq!(md.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&md.stdout).contains("c1_2"));

    let broken = write(
        &d,
        "broken.json",
        r#"{"dim":2,"entries":[{"id":1,"name":"X","construction":{"kind":"product","parts":["nowhere:a","b"]}}]}"#,
    );
    assert_eq!(fano(&["catalog-verify", &broken]).status.code(), Some(2));
    assert_eq!(fano(&["report", &broken]).status.code(), Some(2));
}

#[test]
fn table_formats_are_refused_elsewhere() {
    let d = TempDir::new().unwrap();
    let o = fano(&["facets", &write(&d, "p2.json", P2), "--format", "md"]);
    assert_eq!(o.status.code(), Some(1));
}
