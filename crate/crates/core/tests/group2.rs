//! Types 1 and 2 together cover every Group-2 quadruple exactly once.

use std::collections::HashMap;

use baranyai::planner::quad_input;
use baranyai::quadrupling::{type1_classes, type2_classes};
use baranyai::seeds::SeedStore;
use baranyai::Block;

/// Brute-force count of quadruples of `Z_t x Z_4` with three points on one
/// layer and one on another.
fn group2_population(t: u32) -> u64 {
    let t = u64::from(t);
    4 * 3 * (t * (t - 1) * (t - 2) / 6) * t
}

fn is_group2(b: &Block, t: u32) -> bool {
    let mut occ = [0; 4];
    for &p in b.points() {
        occ[(p / t) as usize] += 1;
    }
    occ.contains(&3)
}

fn check(t: u32) {
    let input = quad_input(t, &SeedStore::embedded_only()).unwrap();
    let mut hits: HashMap<Block, u32> = HashMap::new();
    for c in type1_classes(&input).unwrap() {
        for b in c.blocks().iter().filter(|b| is_group2(b, t)) {
            *hits.entry(*b).or_default() += 1;
        }
    }
    for c in type2_classes(&input).unwrap() {
        for b in c.blocks() {
            assert!(is_group2(b, t), "Type 2 block {b:?} outside Group 2");
            *hits.entry(*b).or_default() += 1;
        }
    }
    assert!(hits.values().all(|&m| m == 1), "t = {t}: a Group-2 quadruple is covered twice");
    assert_eq!(hits.len() as u64, group2_population(t), "t = {t}");
}

#[test]
fn group2_exactly_once_t12() {
    check(12);
}

#[test]
fn group2_exactly_once_t15() {
    check(15);
}
