use std::path::PathBuf;
use std::process::{Command, Output};

use planar_cayley::catalog::CatalogFile;
use planar_cayley::decider::FullPresentation;
use planar_cayley::{build_ball, render_svg, solve_edge_length, LabelingScheme, RenderOptions, TypeVector};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn pcayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcayley"))
        .args(args)
        .output()
        .expect("pcayley runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scheme(name: &str) -> LabelingScheme {
    serde_json::from_str(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn enumerate_degree_three() {
    let o = pcayley(&["enumerate", "--degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let c = CatalogFile::from_json_str(&stdout(&o)).unwrap();
    assert_eq!(c.entries.len(), 8);
    assert_eq!(stdout(&o), CatalogFile::build(3, 1).unwrap().to_json_string());
}

#[test]
fn enumerate_writes_file_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d4.json");
    let o = pcayley(&["enumerate", "--degree", "4", "--jobs", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let c = CatalogFile::from_json_str(&text).unwrap();
    assert_eq!(c.counts.classes, 26);
    assert_eq!(c.to_json_string(), text);
    assert!(stderr(&o).contains("26 classes"));
}

#[test]
fn enumerate_reports_reference_count_when_it_differs() {
    let o = pcayley(&["enumerate", "--degree", "6", "--jobs", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert!(err.contains("254 classes"), "{err}");
    assert!(err.contains("253"), "{err}");
}

#[test]
fn wp_snub_involution() {
    let snub = data("snub.json");
    let o = pcayley(&["wp", "--scheme", snub.to_str().unwrap(), "--tv", "4,3,3,3,3", "--word", "a3 a3"]);
    assert_eq!(stdout(&o).trim(), "trivial");
    assert_eq!(o.status.code(), Some(0));
    let o = pcayley(&["wp", "--scheme", snub.to_str().unwrap(), "--tv", "4,3,3,3,3", "--word", "a1 a1"]);
    assert_eq!(stdout(&o).trim(), "nontrivial");
    assert_eq!(o.status.code(), Some(1));
    let o = pcayley(&[
        "wp", "--scheme", snub.to_str().unwrap(), "--tv", "4,3,3,3,3", "--word", "a1 a1", "--equals", "a2 a2",
    ]);
    assert_eq!(stdout(&o).trim(), "equal");
}

#[test]
fn wp_rejects_a_vector_the_numbering_does_not_validate() {
    let snub = data("snub.json");
    let o = pcayley(&["wp", "--scheme", snub.to_str().unwrap(), "--tv", "3,3,3,3,4", "--word", "a3 a3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not valid"));
}

#[test]
fn validate_free_slot() {
    let ch = data("octagonal.json");
    let o = pcayley(&["validate", "--scheme", ch.to_str().unwrap(), "--tv", "3,4,4,5,4,3,4,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
    let o = pcayley(&["validate", "--scheme", ch.to_str().unwrap(), "--tv", "3,4,4,5,4,3,4,5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_name_the_flag() {
    let o = pcayley(&["solve", "--tv", "3,x,4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--tv"));
    let o = pcayley(&["wp", "--scheme", "/nonexistent.json", "--tv", "4,4,4,4", "--word", "a1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--scheme"));
    let o = pcayley(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pcayley(&["build", "--scheme", data("square.json").to_str().unwrap(), "--tv", "4,4,4,4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--radius"));
}

#[test]
fn orbits_match_library() {
    let o = pcayley(&["orbits", "--scheme", data("octagonal.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let s = scheme("octagonal.json");
    assert_eq!(v["orbits"], s.orbits().to_json_value()["orbits"]);
    assert_eq!(v["primitive_vector"], serde_json::json!([3, 4, 4, 1, 4, 3, 4, 3]));
}

#[test]
fn present_matches_library() {
    let ch = data("octagonal.json");
    let o = pcayley(&["present", "--scheme", ch.to_str().unwrap(), "--tv", "3,4,4,3,4,3,4,3"]);
    assert_eq!(o.status.code(), Some(0));
    let tv: TypeVector = "3,4,4,3,4,3,4,3".parse().unwrap();
    let p = scheme("octagonal.json").canonical_presentation(&tv).unwrap();
    assert_eq!(json(&o), p.to_json_value());
}

#[test]
fn solve_matches_library() {
    let o = pcayley(&["solve", "--tv", "3,3,3,3,4"]);
    let v = json(&o);
    let sol = solve_edge_length(&"3,3,3,3,4".parse().unwrap()).unwrap();
    assert_eq!(v["geometry"], "spherical");
    assert_eq!(v["edge_length"].as_f64().unwrap(), sol.edge_length);
    assert_eq!(v["angle_sum_over_pi"], "11/6");
}

#[test]
fn build_matches_library() {
    let sq = data("square.json");
    let o = pcayley(&["build", "--scheme", sq.to_str().unwrap(), "--tv", "4,4,4,4", "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let ball = build_ball(&scheme("square.json"), &"4,4,4,4".parse().unwrap(), 3).unwrap();
    let expected = serde_json::to_string_pretty(&ball.to_json()).unwrap() + "\n";
    assert_eq!(stdout(&o), expected);
    assert_eq!(ball.vertex_count(), 25);

    let o = pcayley(&["build", "--scheme", data("snub.json").to_str().unwrap(), "--tv", "4,3,3,3,3"]);
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 24);
    assert_eq!(v["edges"].as_array().unwrap().len(), 60);
}

#[test]
fn draw_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.svg");
    let ch = data("octagonal.json");
    let o = pcayley(&[
        "draw", "--scheme", ch.to_str().unwrap(), "--tv", "3,4,4,3,4,3,4,3", "--radius", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let ball = build_ball(&scheme("octagonal.json"), &"3,4,4,3,4,3,4,3".parse().unwrap(), 2).unwrap();
    let svg = render_svg(&ball, &RenderOptions::default()).unwrap();
    assert_eq!(std::fs::read_to_string(out).unwrap(), svg);
}

#[test]
fn decide_snub_and_elementary_abelian() {
    let o = pcayley(&["decide", "--presentation", data("snub_presentation.json").to_str().unwrap(), "--complete", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "yes");
    let witness: TypeVector = serde_json::from_value(v["type_vector"].clone()).unwrap();
    assert!((0..5).any(|k| witness.rotated(k).to_string() == "[3,3,3,3,4]"));

    let o = pcayley(&["decide", "--presentation", data("z2_4_presentation.json").to_str().unwrap(), "--complete", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "no");
}

#[test]
fn decide_with_external_oracle() {
    let oracle = format!("python3 {}", data("z2_oracle.py").display());
    let o = pcayley(&[
        "decide", "--presentation", data("z2_presentation.json").to_str().unwrap(), "--complete", "4", "--oracle",
        &oracle,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["type_vector"], serde_json::json!([4, 4, 4, 4]));
}

#[test]
fn decide_reads_the_same_presentation_as_the_library() {
    let text = std::fs::read_to_string(data("snub_presentation.json")).unwrap();
    let p = FullPresentation::from_json(&text).unwrap();
    assert_eq!(p.generators(), 5);
    assert_eq!(p.relators().len(), 6);
}
