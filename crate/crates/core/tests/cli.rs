use std::process::Command;

use hopfcyclic::algebra::{Gen, HopfElement};
use hopfcyclic::cli::{parse_element, parse_tensor};
use hopfcyclic::cyclic::random_cochain;
use hopfcyclic::hopf::{random_element, TensorCochain};
use hopfcyclic::rational::q;
use hopfcyclic::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopfcyclic")).args(args).env_remove("HOPFCYCLIC_SEED").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap().trim().to_string())
}

fn exit(args: &[&str]) -> i32 {
    hc(args).0
}

#[test]
fn parses_the_named_cochains() {
    let pi = parse_tensor("X ox Y - Y ox X - d1*Y ox Y", 1).unwrap();
    let x = HopfElement::gen(1, Gen::x(1));
    let y = HopfElement::gen(1, Gen::y(1, 1));
    let d1 = HopfElement::gen(1, Gen::d(1));
    let want = TensorCochain::tensor(1, &[x.clone(), y.clone()])
        .sub(&TensorCochain::tensor(1, &[y.clone(), x.clone()]))
        .sub(&TensorCochain::tensor(1, &[d1.mul(&y), y.clone()]));
    assert_eq!(pi, want);
    let s = parse_element("d2 - 1/2 d1^2", 1).unwrap();
    assert_eq!(s, HopfElement::gen(1, Gen::d(2)).sub(&d1.mul(&d1).scale(&(q(1) / q(2)))));
    assert_eq!(parse_element("(X + Y)^2", 1).unwrap(), x.add(&y).mul(&x.add(&y)));
    assert_eq!(parse_element("2*X", 1).unwrap(), parse_element("2 X", 1).unwrap());
    assert_eq!(parse_tensor("d[1;1,2;2] ox X[2]", 2).unwrap().degree, 2);
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_element("X[3]", 1), Err(Error::Parse { line: 1, col: 3, .. })));
    assert!(matches!(parse_element("X[1]", 0), Err(Error::Parse { .. })));
    assert!(matches!(parse_element("X", 2), Err(Error::Parse { .. })));
    assert!(matches!(parse_element("X +\n  ?", 1), Err(Error::Parse { line: 2, col: 3, .. })));
    assert!(parse_tensor("X ox Y + X", 1).is_err());
    assert!(parse_element("X ox Y", 1).is_err());
    assert!(parse_element("Y^", 1).is_err());
    assert!(parse_element("", 1).is_err());
    assert!(parse_element("Z", 1).is_err());
    assert!(parse_element("d0", 1).is_err());
}

#[test]
fn subcommand_examples() {
    assert_eq!(hc(&["b", "d1"]), (0, "0".into()));
    assert_eq!(hc(&["B", "d1 ox X + 1/2 d1^2 ox Y"]), (0, "d2 - 1/2 d1^2".into()));
    assert_eq!(hc(&["B", "Y"]).1, "1");
    assert_eq!(hc(&["tau", "d1"]).1, "-d1");
    assert_eq!(hc(&["tau", "X ox Y - Y ox X - d1*Y ox Y"]).1, "X ox Y - Y ox X - d1*Y ox Y");
    assert_eq!(hc(&["nf", "Y*X"]).1, "X + X*Y");
    assert_eq!(hc(&["cop", "d1"]).1, "1 ox d1 + d1 ox 1");
    assert_eq!(hc(&["antipode", "d2"]).1, "-d2 + d1^2");
    assert_eq!(hc(&["nf", "X[3]"]).0, 2);
    assert_eq!(hc(&["--codim", "0", "nf", "X"]).0, 2);
    assert_eq!(hc(&["frobnicate"]).0, 2);
    assert_eq!(hc(&["--help"]).0, 0);
}

#[test]
fn json_output() {
    let (code, out) = hc(&["--json", "b", "d1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"], "0");
    let (code, out) = hc(&["--json", "verify", "lambda", "--n", "2", "--trials", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["schema"], 1);
    assert!(v["reports"].as_array().unwrap().len() >= 12);
    let (code, out) = hc(&["--json", "nf", "X[2]"]);
    assert_eq!(code, 2);
    assert!(out.contains("\"error\""));
}

#[test]
fn verification_subcommands() {
    assert_eq!(exit(&["classes", "verify"]), 0);
    assert_eq!(exit(&["classes", "verify", "--codim", "2"]), 2);
    assert_eq!(exit(&["verify", "gamma-cocycle", "--trials", "2", "--eps-order", "3"]), 0);
    assert_eq!(exit(&["verify", "action", "--trials", "2", "--eps-order", "3"]), 0);
    assert_eq!(exit(&["gv-pullback", "--diffeo", "cubic"]), 0);
    assert_eq!(exit(&["gv-pullback", "--diffeo", "nonsense"]), 1);
    let pairs = concat!(env!("CARGO_MANIFEST_DIR"), "/pairs/");
    let aff = format!("{pairs}aff1.json");
    let m2 = format!("{pairs}aff1_m2.json");
    assert_eq!(hc(&["rel", &aff, "homology", "--degree", "1"]).1, "H_1 = 1  (all degrees: [0, 1])");
    assert_eq!(hc(&["rel", &m2, "derive-cn", "--degree", "2"]), (0, "1".into()));
    assert_eq!(hc(&["rel", &aff, "derive-cn", "--degree", "1"]), (0, "indeterminate".into()));
    assert_eq!(exit(&["rel", &aff, "verify"]), 0);
    assert_eq!(exit(&["rel", "/nonexistent.json", "verify"]), 1);
}

#[test]
fn seed_from_environment() {
    let a = Command::new(env!("CARGO_BIN_EXE_hopfcyclic"))
        .args(["--json", "verify", "gamma-cocycle", "--trials", "1", "--eps-order", "2"])
        .env("HOPFCYCLIC_SEED", "17")
        .output()
        .unwrap();
    assert!(a.status.success());
    let b = hc(&["--json", "--seed", "17", "verify", "gamma-cocycle", "--trials", "1", "--eps-order", "2"]);
    assert_eq!(String::from_utf8(a.stdout).unwrap().trim(), b.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn parse_format_round_trip(seed in any::<u64>(), codim in 1usize..=2, degree in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_element(&mut rng, codim, 3, 1, 4);
        prop_assert_eq!(parse_element(&h.render(), codim).unwrap(), h.clone());
        let t = random_cochain(&mut rng, codim, degree, 3);
        // "0" carries no degree
        prop_assume!(!t.terms.is_empty());
        prop_assert_eq!(parse_tensor(&t.render(), codim).unwrap(), t);
    }
}
