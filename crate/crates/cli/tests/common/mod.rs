#![allow(dead_code)]

use std::process::{Command, Output};

use num_bigint::BigInt;
use risk_odds::rational::to_decimal;
use risk_odds::Rational;
use serde_json::Value;

pub fn risk_odds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risk-odds"))
        .args(args)
        .env_remove("RISK_ODDS_PORT")
        .output()
        .expect("binary runs")
}

pub fn stdout(args: &[&str]) -> String {
    let out = risk_odds(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&full)).unwrap()
}

/// Visits every `{num, den, approx}` object inside `value`.
pub fn for_each_exact(value: &Value, visit: &mut impl FnMut(Rational, f64)) {
    match value {
        Value::Object(map) => {
            if let (Some(Value::String(n)), Some(Value::String(d)), Some(a)) =
                (map.get("num"), map.get("den"), map.get("approx"))
            {
                let r = Rational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap());
                visit(r, a.as_f64().unwrap());
            }
            for v in map.values() {
                for_each_exact(v, visit);
            }
        }
        Value::Array(items) => items.iter().for_each(|v| for_each_exact(v, visit)),
        _ => {}
    }
}

/// The decimal is the 12-significant-digit rounding of the fraction.
pub fn assert_faithful(r: &Rational, approx: f64) {
    let expected: f64 = to_decimal(r, 12).parse().unwrap();
    assert_eq!(approx, expected, "{r} rendered as {approx}");
}
