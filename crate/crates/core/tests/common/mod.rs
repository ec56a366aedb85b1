#![allow(dead_code)]

use std::path::PathBuf;

use blockforge_core::{AlgebraConfig, BasisKey, BracketKernel, Element, Rational};

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"))
}

pub fn load(name: &str) -> AlgebraConfig {
    let text = std::fs::read_to_string(config_path(name)).expect("shipped config exists");
    AlgebraConfig::from_json(&text).expect("shipped config parses")
}

pub fn kernel(name: &str) -> BracketKernel {
    BracketKernel::new(load(name))
}

pub fn inline(json: &str) -> BracketKernel {
    BracketKernel::new(AlgebraConfig::from_json(json).expect("inline config parses"))
}

pub fn key(alpha: &[i64], idx: &[u32]) -> BasisKey {
    BasisKey::new(alpha, idx)
}

pub fn x(alpha: &[i64], idx: &[u32]) -> Element {
    Element::basis(key(alpha, idx))
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub const SHIPPED: &[&str] = &[
    "block0_standard",
    "class1_standard",
    "class1_zero",
    "class1_mixed",
    "class1_witt",
    "class2_zero",
    "class2_mixed",
    "class3_eps0",
    "class3_eps1_flat",
    "class3_eps1_kappa",
    "class3_full",
];
