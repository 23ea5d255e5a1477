mod common;

use common::*;

#[test]
fn one_on_one_odds() {
    let out = stdout(&["odds", "--attack", "1", "--defend", "1"]);
    assert!(out.contains("win       5/12      0.416666666667"), "{out}");
    let v = json(&["odds", "--attack", "1", "--defend", "1"]);
    assert_eq!(v["win"]["num"], "5");
    assert_eq!(v["win"]["den"], "12");
    assert_eq!(v["win"]["approx"], 0.416666666667);
}

#[test]
fn three_on_one_fights_to_the_end() {
    let v = json(&["odds", "--attack", "3", "--defend", "1"]);
    assert_eq!(v["win"]["num"], "342035");
    assert_eq!(v["win"]["den"], "373248");
    assert_eq!(v["win"]["approx"], 0.916374635631);
}

#[test]
fn two_territories_against_ten() {
    let v = json(&["odds", "--attack", "3", "--attack", "3", "--defend", "10"]);
    let p = v["win"]["approx"].as_f64().unwrap();
    assert!((p - 0.12).abs() < 0.01, "{p}");
}

#[test]
fn csv_for_scalar_queries() {
    let out = stdout(&[
        "expect", "--attack", "1", "--defend", "1", "--format", "csv",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("quantity,fraction,decimal"));
    assert_eq!(lines.next(), Some("win,5/12,0.416666666667"));
    assert_eq!(
        lines.next(),
        Some("attacker_losses_mean,7/12,0.583333333333")
    );
}

#[test]
fn domain_errors_name_the_flag() {
    let out = risk_odds(&["odds", "--attack", "3", "--defend", "0"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: --defend:"), "{err}");

    let out = risk_odds(&["odds", "--attack", "0", "--defend", "2"]);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: --attack:"));

    let out = risk_odds(&["threshold", "--attack", "3", "--limit", "0"]);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: --limit:"));

    let out = risk_odds(&[
        "simulate", "--attack", "3", "--defend", "2", "--trials", "0",
    ]);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: --trials:"));
}

#[test]
fn usage_errors() {
    let out = risk_odds(&["conquer", "--attack", "3"]);
    assert!(!out.status.success());
    let out = risk_odds(&["threshold", "--troops", "6", "--attack", "3"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("--troops") && err.contains("--attack"),
        "{err}"
    );
    let out = risk_odds(&["figure", "7"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .starts_with("error: ID:"));
}

#[test]
fn thresholds_from_total_troops() {
    for (troops, survivor, repel) in [("3", 3, 3), ("6", 5, 6), ("9", 7, 8)] {
        let v = json(&["threshold", "--troops", troops]);
        assert_eq!(v["expected_survivor"], survivor, "{troops}");
        assert_eq!(v["repel_half"], repel, "{troops}");
    }
    let v = json(&["threshold", "--attack", "1", "--limit", "1"]);
    assert_eq!(v["expected_survivor"], serde_json::Value::Null);
    assert_eq!(v["repel_half"], 1);
}

#[test]
fn figures_match_goldens_byte_for_byte() {
    for id in 1..=5 {
        let golden = std::fs::read_to_string(format!(
            "{}/tests/golden/figure{id}.csv",
            env!("CARGO_MANIFEST_DIR")
        ))
        .unwrap();
        let first = stdout(&["figure", &id.to_string(), "--format", "csv"]);
        let second = stdout(&["figure", &id.to_string(), "--format", "csv"]);
        assert_eq!(first, second);
        assert_eq!(first, golden, "figure {id}");
    }
}

#[test]
fn figure_three_dominance() {
    let out = stdout(&["figure", "3", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n_d,p_3plus3,p_2plus2plus2"));
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[1] >= cells[2], "{line}");
    }
}

#[test]
fn figure_five_mean_holds_at_five() {
    let v = json(&["figure", "5"]);
    let row = &v["rows"][4];
    assert_eq!(row["n_d"], 5);
    assert!(row["mean"]["approx"].as_f64().unwrap() >= 1.0);
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate", "--attack", "2", "--attack", "1", "--defend", "3", "--trials", "50000",
        "--seed", "7", "--format", "json",
    ];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["report"]["trials"], 50000);
    assert!(v["z_score"].as_f64().unwrap().abs() < 4.0);
}

#[test]
fn printed_decimals_agree_with_fractions() {
    let mut seen = 0;
    for args in [
        &["dist", "--attack", "3", "--attack", "2", "--defend", "6"][..],
        &["expect", "--attack", "3", "--defend", "4"],
        &[
            "survivors",
            "--attack",
            "3",
            "--attack",
            "3",
            "--defend",
            "10",
        ],
        &["figure", "3"],
    ] {
        for_each_exact(&json(args), &mut |r, approx| {
            assert_faithful(&r, approx);
            seen += 1;
        });
    }
    assert!(seen > 30);
}
