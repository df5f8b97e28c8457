use std::process::{Command, Output};

fn dmodp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmodp"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn dim_table_matches_closed_formula() {
    let out = dmodp(&["dim", "--example", "ex2", "--p", "2", "--gens", "s2", "--i", "5..8"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out),
        "i,dim,ratio_num,ratio_den,formula,match\n\
         5,16,16,5,16,true\n\
         6,18,3,1,18,true\n\
         7,20,20,7,20,true\n\
         8,23,23,8,23,true\n"
    );
}

#[test]
fn monomial_generator_dimension_counts() {
    let out = dmodp(&["dim", "--gens", "s1", "--i", "0..3"]);
    assert!(out.status.success());
    let dims: Vec<String> = stdout_of(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_owned())
        .collect();
    assert_eq!(dims, ["1", "2", "3", "4"]);
}

#[test]
fn comma_list_indices_work() {
    let out = dmodp(&["dim", "--p", "2", "--i", "2,4,8"]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout_of(&out).lines().skip(1).map(str::to_owned).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("2,6,"));
    assert!(lines[1].starts_with("4,13,"));
    assert!(lines[2].starts_with("8,23,"));
}

#[test]
fn descending_comma_list_is_rejected() {
    let out = dmodp(&["dim", "--i", "5,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn operator_action_examples() {
    let out = dmodp(&["act", "--example", "ex2", "--p", "2", "--op", "D_2", "--target", "(0,1)"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "(x + x^4, 0)\n");

    let out = dmodp(&["act", "--op", "D_2", "--target", "(0,x)"]);
    assert_eq!(stdout_of(&out), "(x^5, 0)\n");

    let out = dmodp(&["act", "--op", "D_0", "--target", "(x^3, 1 + x)"]);
    assert_eq!(stdout_of(&out), "(x^3, 1 + x)\n");

    let out = dmodp(&["act", "--op", "x^2*D_4 + D_1", "--target", "(0, 1)", "--p", "3"]);
    assert!(out.status.success());
}

#[test]
fn malformed_operator_text_exits_two() {
    let out = dmodp(&["act", "--op", "D_", "--target", "(0,1)"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dmodp(&["act", "--op", "D_1", "--target", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_modulus_exits_two() {
    for p in ["9", "7919", "0", "1"] {
        let out = dmodp(&["dim", "--p", p, "--i", "1..2"]);
        assert_eq!(out.status.code(), Some(2), "p = {p}");
    }
}

#[test]
fn empty_range_yields_empty_table() {
    let out = dmodp(&["dim", "--i", "5..4"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "i,dim,ratio_num,ratio_den,formula,match\n");
}

#[test]
fn growth_appends_slope_bound() {
    let out = dmodp(&["growth", "--p", "2", "--gens", "s2", "--i", "5..8"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.ends_with("# empirical_slope_bound,16,5\n"));
}

#[test]
fn pretty_adds_readable_ratio_column() {
    let out = dmodp(&["dim", "--p", "2", "--gens", "s2", "--i", "5..5", "--pretty"]);
    let text = stdout_of(&out);
    assert!(text.starts_with("i,dim,ratio_num,ratio_den,formula,match,ratio_approx\n"));
    assert!(text.contains("5,16,16,5,16,true,3.20000\n"));
}

#[test]
fn csv_and_json_encode_the_same_records() {
    let args = ["--p", "2", "--gens", "s2", "--i", "4..9"];
    let csv = stdout_of(&dmodp(&[&["dim"], &args[..]].concat()));
    let json = stdout_of(&dmodp(&[&["dim"], &args[..], &["--format", "json"]].concat()));
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    let records = parsed.as_array().unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(records) {
        let cells: Vec<&str> = row.split(',').collect();
        let field = |k: &str| rec.get(k).unwrap();
        assert_eq!(cells[0], field("i").to_string());
        assert_eq!(cells[1], field("dim").to_string());
        let opt = |k: &str| {
            let v = field(k);
            if v.is_null() { String::new() } else { v.to_string() }
        };
        assert_eq!(cells[2], opt("ratio_num"));
        assert_eq!(cells[3], opt("ratio_den"));
        assert_eq!(cells[4], opt("formula"));
        assert_eq!(cells[5], opt("match"));
    }
}

#[test]
fn custom_sequence_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gseq.json");
    std::fs::write(&path, r#"{"p": 2, "g": ["x^2", "x^4", "x^16"]}"#).unwrap();
    let path_str = path.to_str().unwrap();

    let out = dmodp(&["dim", "--gseq-file", path_str, "--i", "1..3"]);
    assert!(out.status.success());
    let dims: Vec<String> = stdout_of(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_owned())
        .collect();
    assert_eq!(dims, ["2", "4", "6"]);

    // the file's own p wins when --p is absent, and conflicts exit 2
    let out = dmodp(&["dim", "--gseq-file", path_str, "--p", "3", "--i", "1..2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dmodp(&["dim", "--gseq-file", path_str, "--example", "ex1", "--i", "1..2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_custom_sequence_is_rejected_before_computing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"p": 2, "g": ["x^3", "x^5"]}"#).unwrap();
    let out = dmodp(&["dim", "--gseq-file", path.to_str().unwrap(), "--i", "1..2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = dmodp(&["dim", "--p", "2", "--i", "5..6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("i,dim,"));
    assert_eq!(written.lines().count(), 3);
}

#[test]
fn verify_csv_carries_summary_and_verdicts() {
    let out = dmodp(&["verify", "lemma41a", "--p", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("# check,lemma41a,p,2\n"));
    assert!(text.contains("inputs,oracle,paper,verdict,note\n"));
    assert!(text.contains("# summary,match,7,suspected,0,out_of_range,0,fail,0\n"));
}

#[test]
fn verify_json_report_is_well_formed() {
    let out = dmodp(&["verify", "thm42", "--p", "3", "--i-min", "7", "--i-max", "30", "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["check"], "thm42");
    assert_eq!(parsed["p"], 3);
    assert_eq!(parsed["summary"]["match"], 24);
    assert_eq!(parsed["summary"]["fail"], 0);
}

#[test]
fn verify_kmax_budget_flags_are_honored() {
    let out = dmodp(&["verify", "lemma31", "--p", "3", "--kmax", "2", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["params"]["kmax"], 2);

    let out = dmodp(&["verify", "lemma41b", "--p", "2", "--budget", "4", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["params"]["budget"], 4);

    // out-of-table requests are config errors
    let out = dmodp(&["verify", "lemma31", "--p", "2", "--kmax", "9"]);
    assert_eq!(out.status.code(), Some(2));
}
