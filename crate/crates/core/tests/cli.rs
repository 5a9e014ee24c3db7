use std::path::Path;

use tabkit::cli::run;
use tabkit::synthetic::{fraud_set, transactions, FraudConfig};
use tabkit::{write_csv, CsvOptions};

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tabkit(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tabkit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write_fixtures(dir: &Path) -> (String, String) {
    let tx = dir.join("transactions.csv");
    let fraud = dir.join("fraud.csv");
    std::fs::write(
        &tx,
        write_csv(&transactions(300, 5), &CsvOptions::default()),
    )
    .unwrap();
    let small = FraudConfig {
        n_rows: 400,
        ..FraudConfig::default()
    };
    std::fs::write(
        &fraud,
        write_csv(&fraud_set(&small, 5), &CsvOptions::default()),
    )
    .unwrap();
    (tx.display().to_string(), fraud.display().to_string())
}

#[test]
fn describe_formats() {
    let dir = tempfile::tempdir().unwrap();
    let (tx, _) = write_fixtures(dir.path());
    let json = tabkit(&["describe", &tx, "--format", "json"]);
    assert_eq!(json.code, 0, "{}", json.stderr);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["shape"], serde_json::json!([300, 16]));
    assert_eq!(
        v["classes"]["date_candidates"],
        serde_json::json!(["TransactionStartTime"])
    );
    assert_eq!(
        json.stdout,
        tabkit(&["describe", &tx, "--format", "json"]).stdout
    );

    let md = tabkit(&["describe", &tx, "--format", "md"]);
    assert!(md.stdout.contains("| feature |"), "{}", md.stdout);
    let text = tabkit(&["describe", &tx]);
    assert!(text
        .stdout
        .contains("Column 'TransactionStartTime' holds timestamp text"));

    let inferred = tabkit(&["describe", &tx, "--format", "json", "--infer-dates"]);
    let v: serde_json::Value = serde_json::from_str(&inferred.stdout).unwrap();
    assert_eq!(v["dtypes"]["TransactionStartTime"], "DateTime");

    let out = dir.path().join("reports");
    let out = out.to_str().unwrap();
    assert_eq!(tabkit(&["describe", &tx, "--out-dir", out]).code, 0);
    assert!(Path::new(out).join("describe.json").exists());
}

#[test]
fn clean_prints_dropped_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (tx, _) = write_fixtures(dir.path());
    let out = dir.path().join("out");
    let r = tabkit(&[
        "clean",
        &tx,
        "--out-dir",
        out.to_str().unwrap(),
        "--fill",
        "median",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "Dropped ['CurrencyCode', 'CountryCode']\n");
    let cleaned = std::fs::read_to_string(out.join("cleaned.csv")).unwrap();
    let header = cleaned.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 14);
    assert!(!header.contains("CurrencyCode"));

    let again = tabkit(&["clean", &tx, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(again.code, 2);
    assert!(again.stderr.contains("--overwrite"));
    let forced = tabkit(&[
        "clean",
        &tx,
        "--out-dir",
        out.to_str().unwrap(),
        "--overwrite",
    ]);
    assert_eq!(forced.code, 0);
}

#[test]
fn dates_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let (tx, _) = write_fixtures(dir.path());
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    let r = tabkit(&[
        "dates",
        &tx,
        "--cols",
        "TransactionStartTime",
        "--out-dir",
        o,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let header = std::fs::read_to_string(out.join("dates.csv")).unwrap();
    assert!(header.lines().next().unwrap().ends_with(
        "TransactionStartTime_dow,TransactionStartTime_doy,TransactionStartTime_dom,TransactionStartTime_hr,TransactionStartTime_min,TransactionStartTime_is_wkd,TransactionStartTime_yr,TransactionStartTime_qtr,TransactionStartTime_mth"
    ));

    let r = tabkit(&[
        "plot",
        &tx,
        "--kind",
        "count",
        "--cols",
        "ChannelId,ProviderId",
        "--out-dir",
        o,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "count_ChannelId.json\ncount_ChannelId.svg\ncount_ProviderId.json\ncount_ProviderId.svg\n"
    );
    let svg = std::fs::read_to_string(out.join("count_ChannelId.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();

    for args in [
        vec!["--kind", "catbox", "--target", "FraudResult"],
        vec!["--kind", "hist", "--bins", "7"],
        vec!["--kind", "box", "--cols", "Value"],
        vec![
            "--kind",
            "time",
            "--time-col",
            "TransactionStartTime",
            "--cols",
            "Value",
            "--fig-size",
            "8,4",
        ],
    ] {
        let mut full = vec!["plot", tx.as_str(), "--out-dir", o];
        full.extend(args.iter().copied());
        let r = tabkit(&full);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    }
    let time = std::fs::read_to_string(out.join("time_Value.svg")).unwrap();
    assert!(time.contains("width=\"800\" height=\"400\""));

    assert_eq!(
        tabkit(&["plot", &tx, "--kind", "catbox", "--out-dir", o]).code,
        2
    );
    assert_eq!(
        tabkit(&[
            "plot",
            &tx,
            "--kind",
            "hist",
            "--cols",
            "ChannelId",
            "--out-dir",
            o,
            "--overwrite"
        ])
        .code,
        4
    );
}

#[test]
fn train_then_evaluate_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let (_, fraud) = write_fixtures(dir.path());
    for model in ["logistic", "tree", "forest"] {
        let out = dir.path().join(model);
        let o = out.to_str().unwrap();
        let r = tabkit(&[
            "train",
            &fraud,
            "--target",
            "FraudResult",
            "--model",
            model,
            "--seed",
            "2",
            "--trees",
            "20",
            "--out-dir",
            o,
        ]);
        assert_eq!(r.code, 0, "{model}: {}", r.stderr);
        assert!(r.stdout.starts_with("Accuracy is "), "{}", r.stdout);
        let model_file = out.join("model.json");
        let mf = model_file.to_str().unwrap();
        let report = std::fs::read_to_string(out.join("report.json")).unwrap();
        let eval = tabkit(&[
            "evaluate",
            &fraud,
            "--model-file",
            mf,
            "--target",
            "FraudResult",
            "--test-fraction",
            "0.3",
            "--seed",
            "2",
            "--format",
            "json",
        ]);
        assert_eq!(eval.code, 0, "{}", eval.stderr);
        assert_eq!(eval.stdout, report, "{model}");

        let imp = tabkit(&[
            "importance",
            &fraud,
            "--model-file",
            mf,
            "--target",
            "FraudResult",
            "--repeats",
            "2",
            "--format",
            "json",
        ]);
        assert_eq!(imp.code, 0, "{}", imp.stderr);
        let v: serde_json::Value = serde_json::from_str(&imp.stdout).unwrap();
        assert_eq!(v["features"].as_array().unwrap().len(), 5);
    }
    let first = std::fs::read(dir.path().join("forest/model.json")).unwrap();
    let again = dir.path().join("again");
    tabkit(&[
        "train",
        &fraud,
        "--target",
        "FraudResult",
        "--seed",
        "2",
        "--trees",
        "20",
        "--out-dir",
        again.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(again.join("model.json")).unwrap(), first);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (tx, fraud) = write_fixtures(dir.path());
    let o = dir.path().join("o");
    let o = o.to_str().unwrap();
    let missing = tabkit(&["train", &fraud, "--target", "Missing", "--out-dir", o]);
    assert_eq!(missing.code, 4);
    assert_eq!(missing.stderr.lines().count(), 1);
    assert_eq!(tabkit(&["describe", "/definitely/not/here.csv"]).code, 3);
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "a,b\n1\n").unwrap();
    assert_eq!(tabkit(&["describe", ragged.to_str().unwrap()]).code, 3);
    assert_eq!(tabkit(&["frobnicate"]).code, 2);
    assert_eq!(tabkit(&["train", &fraud]).code, 2);
    assert_eq!(
        tabkit(&[
            "evaluate",
            &fraud,
            "--model-file",
            &tx,
            "--target",
            "FraudResult"
        ])
        .code,
        5
    );
    let help = tabkit(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("importance"));
    assert_eq!(
        tabkit(&["dates", &tx, "--cols", "ChannelId", "--out-dir", o]).code,
        4
    );
}
