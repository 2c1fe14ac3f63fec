use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use flaglab::collapse::{parse_trace, replay};
use flaglab::SimplicialComplex;

fn flaglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flaglab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const OCTAHEDRON_GRAPH: &str = "6 12\n0 2\n0 3\n0 4\n0 5\n1 2\n1 3\n1 4\n1 5\n2 4\n2 5\n3 4\n3 5\n";
const PROJECTIVE_PLANE: &str = "0 1 2\n0 2 3\n0 3 4\n0 4 5\n0 1 5\n1 2 4\n1 3 4\n1 3 5\n2 3 5\n2 4 5\n";

#[test]
fn usage_errors_and_help() {
    assert_eq!(flaglab(&["--help"]).status.code(), Some(0));
    assert_eq!(flaglab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(flaglab(&["sample", "--n", "10"]).status.code(), Some(1));
    assert_eq!(flaglab(&["sample", "--n", "10", "--p", "0.5", "--c", "1"]).status.code(), Some(1));
    assert_eq!(flaglab(&["experiment", "--n", "10", "--p", "0.5", "--trials", "0"]).status.code(), Some(1));
}

#[test]
fn sample_is_seeded() {
    let a = flaglab(&["sample", "--n", "30", "--c", "1.5", "--seed", "4"]);
    let b = flaglab(&["sample", "--n", "30", "--c", "1.5", "--seed", "4"]);
    let c = flaglab(&["sample", "--n", "30", "--c", "1.5", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let edges = flaglab(&["sample", "--n", "30", "--c", "1.5", "--seed", "4", "--edges"]);
    assert!(String::from_utf8(edges.stdout).unwrap().starts_with("30 "));
}

#[test]
fn collapse_trace_replays() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "oct.txt", "7 15\n0 2\n0 3\n0 4\n0 5\n1 2\n1 3\n1 4\n1 5\n2 4\n2 5\n3 4\n3 5\n0 6\n2 6\n4 6\n");
    let trace = dir.path().join("trace.txt");
    let out = json(&flaglab(&["collapse", "--graph", &graph, "--d", "2", "--emit-trace", trace.to_str().unwrap()]));
    assert_eq!(out["status"], "almost_collapsed");
    assert_eq!(out["surviving"], 1);

    let x = flaglab::clique_complex(
        &flaglab::Graph::from_text(&fs::read_to_string(&graph).unwrap()).unwrap(),
        flaglab::DimCap::Unbounded,
    );
    let steps = parse_trace(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(steps.len(), out["steps"].as_u64().unwrap() as usize);
    let residual = replay(&x, &steps).unwrap();
    assert_eq!(serde_json::to_value(residual.f_vector()).unwrap(), out["residual_f"]);
}

#[test]
fn homology_of_the_projective_plane() {
    let dir = tempfile::tempdir().unwrap();
    let rp2 = write(dir.path(), "rp2.txt", PROJECTIVE_PLANE);
    let out = json(&flaglab(&["homology", "--input", &rp2, "--fields", "2,3,q", "--torsion"]));
    let betti = &out["homology"]["betti"];
    assert_eq!(betti[0][1], serde_json::json!([1, 1, 1]));
    assert_eq!(betti[1][1], serde_json::json!([1, 0, 0]));
    assert_eq!(betti[2][1], serde_json::json!([1, 0, 0]));
    assert_eq!(out["homology"]["torsion"][1], serde_json::json!([2]));
    assert_eq!(out["homology"]["euler"], 1);
}

#[test]
fn census_density_and_pi1_on_the_octahedron() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "oct.txt", OCTAHEDRON_GRAPH);
    let census = json(&flaglab(&["census", "--graph", &graph, "--d", "2"]));
    assert_eq!((census["embedded"].as_u64(), census["induced"].as_u64()), (Some(1), Some(1)));
    assert_eq!(census["copies"], serde_json::json!([[[0, 1], [2, 3], [4, 5]]]));

    let density = json(&flaglab(&["density", "--graph", &graph, "--d", "2", "--bound-c", "1"]));
    assert_eq!(density["rho"], "2");
    assert_eq!((density["rho_numer"].as_i64(), density["rho_denom"].as_i64()), (Some(2), Some(1)));
    assert_eq!(density["below_threshold"], true);
    assert_eq!(density["strictly_balanced"], true);
    assert_eq!(density["c_bounded"]["pass"], false);

    let pi1 = json(&flaglab(&["check-pi1", "--graph", &graph]));
    assert_eq!(pi1["predicates"]["dim_at_most_4"], true);
    assert_eq!(pi1["predicates"]["density"], "holds");
    assert_eq!(pi1["spheres"]["sphere_free"], false);
}

#[test]
fn experiment_files_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, name: &str| {
        let path = dir.path().join(name);
        let out = flaglab(&[
            "experiment", "--n", "60", "--d", "2", "--c", "1.3", "--trials", "12", "--seed", "21",
            "--workers", workers, "--torsion-degrees", "1", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (fs::read(&path).unwrap(), fs::read(path.with_extension("summary.json")).unwrap())
    };
    let one = run("1", "a.csv");
    let four = run("4", "b.csv");
    assert_eq!(one, four);
    let csv = String::from_utf8(one.0).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("stream,f0,f1,f2,f3,f4,betti_d_gf2,betti_d_q,cp_count,cp_induced,collapse_status,surviving,max_deg_i1,torsion_max,wall_ms\n"));
    let summary: serde_json::Value = serde_json::from_slice(&one.1).unwrap();
    assert_eq!(summary["config"]["master_seed"], 21);
    assert!(summary["version"].as_str().unwrap().starts_with("flaglab-v"));
}

#[test]
fn scan_and_torsion() {
    let out = flaglab(&["scan", "--n", "40", "--d", "2", "--trials", "2", "--c-grid", "1.0,1.5,2.754", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[3].contains("c_d ≈ 2.754"));
    assert_eq!(flaglab(&["scan", "--n", "40", "--c-grid", "2,1"]).status.code(), Some(1));

    let planted = json(&flaglab(&["torsion", "--n", "20", "--c", "1.2", "--trials", "5", "--plant"]));
    assert_eq!(planted["trials"].as_array().unwrap().len(), 5);
    assert_eq!(planted["largest"][0], 2);
}

#[test]
fn loaded_complexes_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.txt");
    let out = flaglab(&["sample", "--n", "25", "--p", "0.3", "--seed", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let x = SimplicialComplex::from_text(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(x.is_flag());
    let h = json(&flaglab(&["homology", "--input", path.to_str().unwrap(), "--fields", "2"]));
    assert_eq!(h["f"], serde_json::to_value(x.f_vector()).unwrap());
}
