use std::io::Read;
use std::process::{Command, Stdio};

use aperiodic::prng::{Lcg, Prng};
use aperiodic_cli::{parse_count, run};
use serde_json::Value;

fn aprng(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("aprng").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8(err).unwrap(),
    )
}

fn aprng_bytes(args: &[&str]) -> Vec<u8> {
    let mut out = Vec::new();
    let argv = std::iter::once("aprng").chain(args.iter().copied());
    assert_eq!(run(argv, &mut out, &mut Vec::new()), 0, "{args:?}");
    out
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = aprng(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn counts() {
    assert_eq!(parse_count("1e7"), Ok(10_000_000));
    assert_eq!(parse_count("2^20"), Ok(1 << 20));
    assert_eq!(parse_count("10_000"), Ok(10_000));
    assert!(parse_count("1e30").is_err());
    assert!(parse_count("ten").is_err());
}

#[test]
fn word_prefixes() {
    assert_eq!(
        aprng(&["word", "fib"]).1,
        "01001010010010100101001001010010\n"
    );
    assert_eq!(
        aprng(&["word", "trib", "--count", "16"]).1,
        "0102010010201010\n"
    );
    assert_eq!(
        aprng(&["word", "fib", "--start", "3", "--count", "5"]).1,
        "01010\n"
    );
    assert_eq!(
        aprng_bytes(&["word", "tm", "--count", "4", "--raw"]),
        vec![0, 1, 1, 0]
    );
    let rot = aprng(&["word", "rot:(3-sqrt(5))/2:(3-sqrt(5))/2", "--count", "32"]).1;
    assert_eq!(rot, aprng(&["word", "fib"]).1);
}

#[test]
fn convention_flag() {
    let left = aprng(&["word", "rot:(3-sqrt(5))/2:(-1+sqrt(5))/2", "--count", "1"]).1;
    let right = aprng(&[
        "word",
        "rot:(3-sqrt(5))/2:(-1+sqrt(5))/2",
        "--count",
        "1",
        "--convention",
        "right",
    ])
    .1;
    assert_eq!((left.as_str(), right.as_str()), ("1\n", "0\n"));
    let (code, _, err) = aprng(&["word", "fib", "--convention", "right"]);
    assert_eq!(code, 2);
    assert!(err.contains("rot:"));
}

#[test]
fn descriptor_errors_point_at_the_problem() {
    let (code, out, err) = aprng(&["word", "morphism:0->01,1->2"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("^"), "{err}");
    assert!(err.contains("expected"), "{err}");

    let (code, _, err) = aprng(&["gen", "lcg:m=2^31,a=65539,q=0", "--count", "1"]);
    assert_eq!(code, 2, "{err}");

    let (code, _, _) = aprng(&["word"]);
    assert_eq!(code, 2);
    let (code, _, _) = aprng(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = aprng(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("welldoc"));
}

#[test]
fn gen_writes_little_endian_words() {
    let bytes = aprng_bytes(&["gen", "randu", "--count", "3", "--warmup", "0"]);
    let words: Vec<u32> = bytes
        .chunks(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    assert_eq!(words, vec![65539, 393225, 1769499]);
}

#[test]
fn warmup_skips_outputs() {
    let bytes = aprng_bytes(&["gen", "l64_39:seed=5", "--count", "2", "--warmup", "1e9"]);
    let mut g = Lcg::named("l64_39", 5).unwrap();
    g.jump(1_000_000_000);
    let expected: Vec<u8> = (0..2).flat_map(|_| g.next_u32().to_le_bytes()).collect();
    assert_eq!(bytes, expected);
}

#[test]
fn gen_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.bin");
    let spec = "shuffle:fib:randu:seed=1,randu:seed=2";
    let stdout = aprng_bytes(&["gen", spec, "--count", "1000", "--warmup", "1e4"]);
    let (code, _, err) = aprng(&[
        "gen",
        spec,
        "--count",
        "1000",
        "--warmup",
        "1e4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    // the shuffle subcommand adds the prefix itself
    let short = aprng_bytes(&[
        "shuffle",
        "fib:randu:seed=1,randu:seed=2",
        "--count",
        "1000",
        "--warmup",
        "1e4",
    ]);
    assert_eq!(short, stdout);
}

#[test]
fn shuffle_alphabet_must_fit_sources() {
    let (code, _, err) = aprng(&[
        "shuffle",
        "trib:randu,randu",
        "--count",
        "1",
        "--warmup",
        "0",
    ]);
    assert_ne!(code, 0);
    assert!(!err.is_empty());
}

#[test]
fn welldoc_json() {
    let v = json(&[
        "welldoc",
        "fib",
        "--m",
        "3",
        "--factor-len",
        "3",
        "--prefix",
        "1e5",
        "--json",
    ]);
    assert_eq!(v["all_covered"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2 + 3 + 4);
    assert_eq!(v["reports"][0]["verdict"], "COVERED");

    let v = json(&[
        "welldoc", "tm", "--factor", "00", "--prefix", "1e5", "--json",
    ]);
    assert_eq!(v["all_covered"], false);
    assert_eq!(v["reports"][0]["missing"].as_array().unwrap().len(), 2);

    let text = aprng(&[
        "welldoc", "fib", "--factor", "010", "--m", "5", "--prefix", "1e6",
    ])
    .1;
    assert!(text.contains("COVERED") && text.contains("25/25"), "{text}");
}

#[test]
fn lattice_reports() {
    let v = json(&[
        "lattice", "randu", "--sample", "1e5", "--normal", "9,-6,1", "--warmup", "0", "--json",
    ]);
    assert_eq!(v["covering"], true);
    assert!(v["plane_count"].as_u64().unwrap() <= 15);
    assert_eq!(v["comparison"], 16);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let v = json(&[
        "lattice",
        "randu",
        "--sample",
        "2e4",
        "--bound",
        "9",
        "--warmup",
        "0",
        "--json",
        "--dump",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(v["best"]["normal"], serde_json::json!([9, -6, 1]));
    let lines = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(lines, 20_001);
}

#[test]
fn stats_json() {
    let v = json(&["stats", "l64_39", "--n", "1e5", "--bins", "64", "--json"]);
    let p = v["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(v["df"], 63);
    let v = json(&[
        "stats",
        "lcg:m=2^32,a=1,c=0,seed=7",
        "--n",
        "1e4",
        "--bins",
        "16",
        "--warmup",
        "0",
        "--json",
    ]);
    assert!(v["p_value"].as_f64().unwrap() < 1e-6);
    let (code, _, _) = aprng(&["stats", "randu", "--bins", "64", "--n", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn bench_json() {
    let v = json(&["bench", "fib", "--letters", "1e6", "--compare", "--json"]);
    assert_eq!(v["runs"].as_array().unwrap().len(), 2);
    assert_eq!(v["runs"][0]["checksum"], v["runs"][1]["checksum"]);
    assert!(v["speedup"].as_f64().unwrap() > 0.0);
    let (code, _, _) = aprng(&["bench", "rot:sqrt(2)-1:0", "--compare", "--letters", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_deterministic() {
    let a = aprng_bytes(&[
        "gen",
        "shuffle:trib:l64_39,l64_32,l64_28",
        "--count",
        "5000",
        "--warmup",
        "1e5",
    ]);
    let b = aprng_bytes(&[
        "gen",
        "shuffle:trib:l64_39,l64_32,l64_28",
        "--count",
        "5000",
        "--warmup",
        "1e5",
    ]);
    assert_eq!(a, b);
}

#[test]
fn binary_exits_quietly_when_the_reader_leaves() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_aprng"))
        .args(["word", "fib", "--count", "1e10"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut head = [0u8; 64];
    child
        .stdout
        .as_mut()
        .unwrap()
        .read_exact(&mut head)
        .unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    let mut err = String::new();
    child
        .stderr
        .take()
        .unwrap()
        .read_to_string(&mut err)
        .unwrap();
    assert!(status.success(), "{status:?} {err}");
    assert!(err.is_empty(), "{err}");
    assert_eq!(&head[..8], b"01001010");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_aprng");
    let ok = Command::new(bin)
        .args(["word", "tm", "--count", "8"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(ok.stdout, b"01101001\n");
    let usage = Command::new(bin).args(["word", "cycle:"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
