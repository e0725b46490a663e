#![allow(dead_code)]

use std::collections::BTreeMap;

const SCALAR: &str = include_str!("../data/table_scalar.csv");
const TENSOR: &str = include_str!("../data/table_tensor.csv");

/// Scalar reference values keyed by (n, k), five overtones each.
pub fn scalar_table() -> BTreeMap<(i64, i64), Vec<f64>> {
    let mut out: BTreeMap<(i64, i64), Vec<f64>> = BTreeMap::new();
    for line in SCALAR.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let (n, k, big_n): (i64, i64, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        let v = out.entry((n, k)).or_default();
        assert_eq!(v.len(), big_n, "rows must be ordered by overtone");
        v.push(f[3].parse().unwrap());
    }
    out
}

/// Tensor reference values λ̃_N, N = 0..59.
pub fn tensor_table() -> Vec<f64> {
    TENSOR.lines().skip(1).filter(|l| !l.trim().is_empty()).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
