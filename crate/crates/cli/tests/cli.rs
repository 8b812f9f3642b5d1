use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuntz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn normal_form_uses_the_relations() {
    let out = run(&["normal", "s1' s1 + s2 s2'"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 + s[2,2]");
}

#[test]
fn eq_reports_through_the_exit_code() {
    let same = run(&["eq", "s1 s1' + s2 s2'", "1"]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(stdout(&same).trim(), "true");
    let differ = run(&["eq", "s1", "s2"]);
    assert_eq!(differ.status.code(), Some(1));
    assert_eq!(json(&["eq", "s2' s2", "1"])["equal"], true);
}

#[test]
fn apply_a_permutative_endomorphism() {
    let out = run(&["apply", "--endo", "142", "s1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "s[11,2] + s[22,1]");
}

#[test]
fn branch_of_the_vacuum_under_the_ternary_example() {
    let out = run(&["--n", "3", "branch", "--rep", "P(1)", "--endo", "nakanishi"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("P(3)⊕P(12)"));
    let v = json(&["--n", "3", "branch", "--rep", "P(1)", "--endo", "nakanishi"]);
    assert_eq!(v["certified"], true);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
}

#[test]
fn branch_json_reports_components() {
    let v = json(&["branch", "--rep", "P(12)", "--endo", "142"]);
    let labels: Vec<&str> = v["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["P(11)", "P(22)"]);
    assert_eq!(v["irreducible"], "P(1)⊕P(1;1/2)⊕P(2)⊕P(2;1/2)");
}

#[test]
fn ternary_map_needs_three_generators() {
    let out = run(&["branch", "--rep", "P(1)", "--endo", "nakanishi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N = 3"));
}

#[test]
fn restriction_and_fermions() {
    assert_eq!(stdout(&run(&["restrict", "--rep", "P(12)"])).trim(), "P[12]⊕P[21]");
    assert_eq!(
        stdout(&run(&["car", "3"])).trim(),
        "s[111,112] - s[121,122] - s[211,212] + s[221,222]"
    );
}

#[test]
fn verify_small_tables() {
    for t in ["table1", "table2", "table4"] {
        let out = run(&["verify", t]);
        assert!(out.status.success(), "{t}");
        assert!(stdout(&out).starts_with(&format!("PASS {t}")), "{t}");
    }
    let out = run(&["--n", "3", "verify", "nakanishi"]);
    assert!(out.status.success());
}

#[test]
fn verify_lists_errata_in_json() {
    let v = json(&["verify", "table8"]);
    assert_eq!(v["passed"], true);
    let errata = v["reports"][0]["errata"].as_array().unwrap();
    assert_eq!(errata.len(), 4);
    assert!(errata.iter().all(|e| e["computed"] == e["corrected"] && e["computed"] != e["expected"]));
}

#[test]
fn classify_a_proper_endomorphism() {
    let out = run(&["classify", "142"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("P(12)∘ψ = P(11)⊕P(22)"));
    assert!(text.contains("irr.end"));
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let out = run(&["normal", "s1 +"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 4"));
}
