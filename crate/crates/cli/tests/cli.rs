use std::process::{Command, Output};

fn bott_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bott-lab"))
        .args(args)
        .env_remove("BOTTLAB_CAP")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn enumerate_b2_reports_ten_classes() {
    let out = bott_lab(&["enumerate", "--list", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["o_count"], 10);
    assert_eq!(v["o_exact"], true);
    assert_eq!(v["ac_count"], 2);
    assert_eq!(v["k"], 2);
}

#[test]
fn bb_bounded_flag_height_three() {
    let out = bott_lab(&["bb", "--family", "bounded-flag", "--height", "3"]);
    let v = stdout_json(&out);
    assert_eq!(
        v,
        serde_json::json!({ "alpha": [1, 1, 0, 0], "beta": [2, 1] })
    );
}

#[test]
fn info_round_trips_canonical_text() {
    let out = bott_lab(&["info", "--list", " 1 ; 0 , 1 "]);
    let v = stdout_json(&out);
    assert_eq!(v["list"], "1;0,1");
    assert_eq!(v["height"], 3);
    assert_eq!(v["parity"], "terminally-odd");
    assert_eq!(v["euler"], "8");

    // The emitted canonical string parses back to the same tower.
    let again = bott_lab(&["info", "--list", v["list"].as_str().unwrap()]);
    assert_eq!(stdout_json(&again), v);
}

#[test]
fn list_file_accepts_json_and_text() {
    let dir = std::env::temp_dir();
    let text_path = dir.join("bott_lab_test_list.txt");
    let json_path = dir.join("bott_lab_test_list.json");
    std::fs::write(&text_path, "2;0,2\n").unwrap();
    std::fs::write(&json_path, "[[2],[0,2]]").unwrap();
    let a = stdout_json(&bott_lab(&["info", "--file", text_path.to_str().unwrap()]));
    let b = stdout_json(&bott_lab(&["info", "--file", json_path.to_str().unwrap()]));
    assert_eq!(a, b);
    assert_eq!(a["parity"], "totally-even");
}

#[test]
fn negative_entries_parse() {
    let out = bott_lab(&["enumerate", "--list", "-1;0,-1"]);
    let v = stdout_json(&out);
    assert_eq!(v["o_count"], 34);
    assert_eq!(v["o_exact"], true);
    assert_eq!(v["b_count"], 14);
}

#[test]
fn invalid_list_exits_two() {
    let out = bott_lab(&["info", "--list", "1;2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bott_lab(&["enumerate", "--list", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bott_lab(&["enumerate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mixed_parity_ko_exits_three() {
    // a(1,2) = 3 odd, a(2,3) = 2 even: mixed.
    let out = bott_lab(&["ko", "--list", "3;0,2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn csv_outside_enumerate_exits_three() {
    let out = bott_lab(&["info", "--list", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cap_exceeded_exits_four() {
    let out = bott_lab(&["enumerate", "--list", "1", "--cap", "1"]);
    assert_eq!(out.status.code(), Some(4));

    let out = Command::new(env!("CARGO_BIN_EXE_bott-lab"))
        .args(["enumerate", "--list", "1"])
        .env("BOTTLAB_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // An explicit flag overrides the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_bott-lab"))
        .args(["enumerate", "--list", "1", "--cap", "16"])
        .env("BOTTLAB_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_identical_across_jobs() {
    let one = bott_lab(&["enumerate", "--list", "1;0,1", "--jobs", "1"]);
    let four = bott_lab(&["enumerate", "--list", "1;0,1", "--jobs", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);

    let csv1 = bott_lab(&[
        "enumerate",
        "--list",
        "1;0,1",
        "--jobs",
        "1",
        "--format",
        "csv",
    ]);
    let csv4 = bott_lab(&[
        "enumerate",
        "--list",
        "1;0,1",
        "--jobs",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(csv1.stdout, csv4.stdout);
}

#[test]
fn enumerate_csv_has_class_rows() {
    let out = bott_lab(&["enumerate", "--list", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "delta,epsilon,almost_complex,bounds,chern[2],chern[1+1]"
    );
    assert_eq!(lines.count(), 10);
}

#[test]
fn chern_flags_bounding_structure() {
    // δ = (1,0): total class 1 + x₁ − 2x₂; all Chern numbers vanish.
    let out = bott_lab(&["chern", "--list", "1", "--omni", "10;00"]);
    let v = stdout_json(&out);
    assert_eq!(v["bounds"], true);
    assert_eq!(v["almost_complex"], false);
    assert_eq!(v["chern_numbers"]["2"], "0");
    assert_eq!(v["chern_numbers"]["1+1"], "0");

    // The canonical structure on the same tower: (c₁², c₂) = (8, 4).
    let out = bott_lab(&["chern", "--list", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["chern_numbers"]["1+1"], "8");
    assert_eq!(v["chern_numbers"]["2"], "4");
    assert_eq!(v["almost_complex"], true);
}

#[test]
fn ktheory_relations_json() {
    let out = bott_lab(&["ktheory", "--list", "2"]);
    let v = stdout_json(&out);
    // g₂² = 2g₁g₂ on the a = 2 two-stage tower.
    assert_eq!(
        v["relations"][1]["square"],
        serde_json::json!([{ "monomial": "g1*g2", "laurent": { "0": "2" } }])
    );
}

#[test]
fn verify_cp1_passes() {
    let out = bott_lab(&["verify", "--family", "cp1-power", "--max-height", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| !l.starts_with("[FAIL]")));
}

#[test]
fn verify_reports_bounded_flag_divergence() {
    // The closed-form bounding count is off at even heights; verify says so
    // honestly and exits nonzero.
    let out = bott_lab(&["verify", "--family", "bounded-flag", "--max-height", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL] bounded-flag k=2 b-count"), "{text}");
    assert!(text.contains("computed 6, expected 4"), "{text}");
}
