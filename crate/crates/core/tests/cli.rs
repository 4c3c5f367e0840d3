use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use anxbench::features::{Column, FeatureMatrix, FeatureSet, GroupKey, Label};
use ndarray::Array2;
use rand::Rng as _;

fn anxbench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anxbench"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SYNTH: &str = r#"
seed = 7
out = "out"

[[datasets]]
id = "A"
[datasets.synthetic]
participants = 4
duration_s = 62.0
"#;

#[test]
fn synth_then_features_from_raw_files_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let cfg = write(dir, "synth.toml", SYNTH);
    let o = anxbench(dir, &["synth", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.join("out/raw/A/paq.csv").exists());

    let raw = write(
        dir,
        "raw.toml",
        "seed = 7\nout = \"feat\"\n[[datasets]]\nid = \"A\"\nraw_dir = \"out/raw/A\"\n",
    );
    let o = anxbench(dir, &["features", "--config", &raw]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read(dir.join("feat/features/A.csv")).unwrap();
    let m = FeatureMatrix::load_csv(dir.join("feat/features/A.csv")).unwrap();
    // 4 sessions of 62 s: floor((62 − 60) / 0.25) + 1 = 9 windows each.
    assert_eq!(m.n_rows(), 36);
    assert_eq!(m.class_counts(), (18, 18));

    let o = anxbench(dir, &["features", "--config", &raw, "--out", "again"]);
    assert!(o.status.success());
    assert_eq!(first, fs::read(dir.join("again/features/A.csv")).unwrap());
}

#[test]
fn missing_questionnaire_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let cfg = write(dir, "synth.toml", SYNTH);
    assert!(anxbench(dir, &["synth", "--config", &cfg]).status.success());
    fs::remove_file(dir.join("out/raw/A/paq.csv")).unwrap();
    let raw = write(dir, "raw.toml", "seed = 7\n[[datasets]]\nid = \"A\"\nraw_dir = \"out/raw/A\"\n");
    let o = anxbench(dir, &["features", "--config", &raw]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("labels unavailable"));
}

#[test]
fn usage_and_config_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert_eq!(anxbench(dir, &["matrix"]).status.code(), Some(1));
    assert_eq!(anxbench(dir, &["frobnicate"]).status.code(), Some(1));
    let empty = write(dir, "empty.toml", "seed = 1\n");
    assert_eq!(anxbench(dir, &["matrix", "--config", &empty]).status.code(), Some(1));
    let unknown = write(dir, "unknown.toml", "seed = 1\ncolour = \"red\"\n");
    assert_eq!(anxbench(dir, &["features", "--config", &unknown]).status.code(), Some(1));
    assert_eq!(anxbench(dir, &["--help"]).status.code(), Some(0));
}

#[test]
fn similarity_of_a_dataset_with_itself_is_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let cfg = write(
        dir,
        "sim.toml",
        r#"
seed = 3
[similarity]
max_points = 40
[[datasets]]
id = "A"
[datasets.synthetic]
participants = 4
duration_s = 62.0
[[datasets]]
id = "B"
[datasets.synthetic]
participants = 4
duration_s = 62.0
"#,
    );
    let o = anxbench(dir, &["similarity", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(dir.join("out/similarity/otdd.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    // Pairs AA, AB, BB with five feature sets each.
    assert_eq!(rows.len(), 15);
    for row in &rows {
        let Ok(d) = row[3].parse::<f64>() else { continue };
        if row[0] == row[1] {
            assert_eq!(d, 0.0, "{row:?}");
        } else {
            assert!(d > 0.0, "{row:?}");
        }
    }
}

#[test]
fn importance_ranks_the_informative_feature_first() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut rng = anxbench::seed::rng(11);
    let n = 120;
    let labels: Vec<Label> = (0..n).map(|i| Label::from_bool(i % 2 == 0)).collect();
    let cols = vec![
        Column::new(FeatureSet::F1, "MeanNN"),
        Column::new(FeatureSet::F1, "SDNN"),
        Column::new(FeatureSet::F5, "SCR_Peaks_N"),
    ];
    let data = Array2::from_shape_fn((n, 3), |(i, j)| {
        let noise = rng.random::<f64>();
        if j == 1 {
            noise + if labels[i].is_anxious() { 2.0 } else { 0.0 }
        } else {
            noise
        }
    });
    let groups = (0..n).map(|i| GroupKey::new("T", format!("p{}", i % 6), "a")).collect();
    FeatureMatrix::new(cols, data, labels, groups)
        .unwrap()
        .save_csv(dir.join("t.csv"))
        .unwrap();
    let cfg = write(dir, "imp.toml", "seed = 5\n[[datasets]]\nid = \"T\"\nfeatures = \"t.csv\"\n");
    let o = anxbench(dir, &["importance", "--config", &cfg, "--out", "imp"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(dir.join("imp/importance/T.csv")).unwrap();
    let rows: Vec<(String, f64)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].0.ends_with("SDNN"), "{rows:?}");
    let total: f64 = rows.iter().map(|r| r.1).sum();
    assert!((total - 1.0).abs() < 1e-9, "importances sum to {total}");
}

#[test]
fn matrix_command_writes_all_three_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let cfg = write(
        dir,
        "m.toml",
        r#"
seed = 9
[eval]
folds = 3
[[datasets]]
id = "A"
[datasets.synthetic]
participants = 4
duration_s = 62.0
[[datasets]]
id = "B"
[datasets.synthetic]
participants = 4
duration_s = 62.0
[matrix]
classifiers = ["C1", "C3"]
combos = ["F1", "F1+F5"]
[[matrix.configs]]
train = ["A"]
test = "A"
mode = "within_k_fold"
[[matrix.configs]]
train = ["A"]
test = "B"
mode = "cross_dataset"
"#,
    );
    let o = anxbench(dir, &["matrix", "--config", &cfg, "--workers", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("models trained: 8"), "{stdout}");
    for f in ["records.csv", "report.json", "table.txt"] {
        assert!(dir.join("out/matrix").join(f).exists(), "{f}");
    }
    let records = fs::read_to_string(dir.join("out/matrix/records.csv")).unwrap();
    assert_eq!(records.lines().count(), 9);
}
