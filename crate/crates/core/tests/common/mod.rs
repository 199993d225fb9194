#![allow(dead_code)]

use std::path::PathBuf;

use momentum_core::{parse_gains_table, DeltaSystem, GainRecord};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load(name: &str) -> DeltaSystem {
    parse_gains_table(&fixture(name)).unwrap()
}

pub fn system(rows: &[(f64, f64)]) -> DeltaSystem {
    DeltaSystem::build(
        rows.iter()
            .enumerate()
            .map(|(i, &(g, r))| GainRecord::new(format!("e{i}"), None, g, r))
            .collect(),
        "t",
    )
    .unwrap()
}

pub fn scored_system(rows: &[(f64, f64, f64)]) -> DeltaSystem {
    DeltaSystem::build(
        rows.iter()
            .enumerate()
            .map(|(i, &(s, g, r))| GainRecord::new(format!("e{i}"), Some(s), g, r))
            .collect(),
        "t",
    )
    .unwrap()
}

/// Positions (0-based, in the given order) not strictly dominated on both
/// coordinates by any other point. Written directly from the definition.
pub fn naive_maxima(points: &[(f64, f64)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .any(|&(g, r)| g > points[i].0 && r > points[i].1)
        })
        .collect()
}

/// Every maximal interval found by trying all [lo, hi] around `m`.
pub fn brute_interval(points: &[(f64, f64)], m: usize) -> (usize, usize) {
    let below = |j: usize| points[j].0 < points[m].0 && points[j].1 < points[m].1;
    let mut best = (m, m);
    for lo in 0..=m {
        for hi in m..points.len() {
            if (lo..=hi).filter(|&j| j != m).all(below) && hi - lo > best.1 - best.0 {
                best = (lo, hi);
            }
        }
    }
    best
}
