use std::process::Command;

use bifib::cell::{flatten, CellStructure};
use bifib::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn bifib(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bifib").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn gen_examples() {
    assert_eq!(bifib("gen --a 2 --b 3 --n 2"), (EXIT_OK, "01010\n".into(), String::new()));
    assert_eq!(bifib("gen --a 1 --b 1 --n 4 --classical").1, "01001\n");
    assert_eq!(bifib("gen --a 2 --b 3 --n 8 --length-only").1, "2417\n");
    assert_eq!(bifib("gen --a 2 --b 3 --n 2 --word t").1, "01001\n");
    let (code, out, _) = bifib("gen --a 2 --b 3 --n 5 --word i --format structured");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["length"], 212);
}

#[test]
fn gen_errors() {
    let (code, _, err) = bifib("gen --a 2 --b 3 --n 9 --cap 1000");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("exceeds the cap"), "{err}");
    let (code, _, err) = bifib("gen --a 1 --b 3 --n 1 --word t");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("t undefined"), "{err}");
    assert_eq!(bifib("gen --a 2 --b 3 --n 2 --classical").0, EXIT_USAGE);
    assert_eq!(bifib("gen --a 0 --b 3 --n 2").0, EXIT_USAGE);
    assert_eq!(bifib("frobnicate").0, EXIT_USAGE);
}

#[test]
fn decompose_examples() {
    let (code, out, _) = bifib("decompose --a 2 --b 2 --n 7");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["period"], 2);

    let (code, out, _) = bifib("decompose --a 1 --b 1 --n 12 --classical --compose-twice");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["period"], 6);
    assert_eq!(v["self_similar"], true);

    let (code, _, err) = bifib("decompose --a 2 --b 3 --n 5");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("n >= 9"), "{err}");
    let (_, _, err) = bifib("decompose --a 2 --b 3 --n 6");
    assert!(err.contains("n >= 7"), "{err}");
}

#[test]
fn decompose_field_order() {
    let (_, out, _) = bifib("decompose --a 2 --b 2 --n 7");
    let keys = ["\"a\"", "\"b\"", "\"n\"", "\"convention\"", "\"period\"", "\"self_similar\"", "\"cells\""];
    let positions: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{out}");
    assert!(out.contains(r#"{"kind":"F","level":5,"offset":0,"length":"#));
}

#[test]
fn decompose_round_trips_to_gen() {
    for args in [
        "--a 2 --b 3 --n 8",
        "--a 3 --b 5 --n 9 --expand-i",
        "--a 3 --b 2 --n 13 --depth 1",
        "--a 1 --b 1 --n 13 --classical --compose-twice --expand-i",
    ] {
        let (code, out, err) = bifib(&format!("decompose {args}"));
        assert_eq!(code, EXIT_OK, "{err}");
        let structure = CellStructure::from_json(out.trim()).unwrap();
        let flat = flatten(&structure).unwrap();
        let gen_args: String = args
            .split("--")
            .filter(|s| ["a ", "b ", "n ", "classical"].iter().any(|p| s.starts_with(p)))
            .map(|s| format!("--{s}"))
            .collect();
        let (_, word, _) = bifib(&format!("gen {gen_args}"));
        assert_eq!(flat.to_string(), word.trim(), "{args}");
    }
}

#[test]
fn decompose_plain_diagram() {
    let (code, out, _) = bifib("decompose --a 2 --b 3 --n 8 --format plain");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0].contains("2417 symbols, 7 cells, period 2"));
    assert!(lines[4].contains("I(6)") && lines[4].contains("921"));
}

#[test]
fn verify_examples() {
    let (code, out, _) = bifib("verify --a 2..4 --b 2..4 --n-max 12");
    assert_eq!(code, EXIT_OK);
    for line in out.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_ne!(v["status"], "fail", "{line}");
    }

    let (code, out, _) = bifib("verify --ids SWAP_FT --a 2 --b 3 --n-max 4");
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.contains("skipped-precondition")));

    let (code, out, _) = bifib("verify --a 1..1 --b 1..6 --n-max 14");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#""identity":"I_VARIANT_R1","a":1,"b":3,"n":6,"convention":"standard","status":"pass""#));
}

#[test]
fn verify_plain_summary() {
    let (code, out, _) = bifib("verify --a 2 --b 2 --n-max 7 --ids PALINDROME,SWAP_FF --format plain");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().last().unwrap(), "8 passed, 0 failed, 8 skipped");
    assert_eq!(bifib("verify --a 2 --b 2 --ids NOPE").0, EXIT_USAGE);
    assert_eq!(bifib("verify --a 3..2 --b 2").0, EXIT_USAGE);
}

#[test]
fn stats_examples() {
    let (code, out, _) = bifib("stats --a 2 --b 3 --n-max 8");
    assert_eq!(code, EXIT_OK);
    let last = out.lines().last().unwrap();
    assert!(last.split_whitespace().nth(1) == Some("2417"), "{last}");
    assert!(bifib("stats --a 5 --b 5").1.starts_with("a=5 b=5 [standard] period 6"));
    assert!(bifib("stats --a 2 --b 2").1.starts_with("a=2 b=2 [standard] period 2"));
    let (_, out, _) = bifib("stats --a 2 --b 2 --n-max 9 --format structured");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][9]["cells"], 5);
}

#[test]
fn output_is_deterministic() {
    for args in ["verify --a 1..3 --b 2..3 --n-max 10", "decompose --a 4 --b 3 --n 10 --depth 1"] {
        assert_eq!(bifib(args), bifib(args));
    }
}

#[test]
fn binary_exit_codes_and_env_cap() {
    let exe = env!("CARGO_BIN_EXE_bifib");
    let out = Command::new(exe)
        .args(["gen", "--a", "2", "--b", "3", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "01010010100101001\n");

    let out = Command::new(exe)
        .args(["gen", "--a", "2", "--b", "3", "--n", "8"])
        .env("BIFIB_LENGTH_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));

    let out = Command::new(exe).args(["verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert_ne!(EXIT_FAILED, EXIT_OK);
}
