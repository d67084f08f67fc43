//! The L- and L'-set partitions, checked exhaustively.

use std::collections::HashSet;

use baranyai::lsets::{build_l_sets, build_lprime_sets, pair_frequency, unique_triples, LSets};
use baranyai::quadrupling::{GEN_LAYER_PAIRS, TYPE4_FAMILIES};
use baranyai::quadset::Transversal;
use baranyai::ParallelClass;

fn check_partition(l: &LSets) {
    let t = l.t;
    let mut seen = HashSet::new();
    for (p, part) in l.parts.iter().enumerate() {
        for &y in part {
            assert!(seen.insert(y), "{y:?} in two parts (second: {})", p + 1);
        }
    }
    assert_eq!(seen.len() as u64, u64::from(t).pow(4));
    let half = ((t - 1) * t * t / 2) as usize;
    assert_eq!(l.parts[0].len(), 6 * (t as usize).pow(3));
    assert_eq!(l.parts[1].len(), half);
    assert_eq!(l.parts[2].len(), half);
    assert_eq!(l.parts[3].len(), half);
    // every part is a union of classes X + A
    for part in &l.parts {
        let set: HashSet<Transversal> = part.iter().copied().collect();
        for y in part {
            assert!(set.contains(&y.add(Transversal([1; 4]), t)));
        }
    }
}

fn check_generator_sets(l: &LSets) {
    let t = l.t;
    let h = ((t - 1) / 2) as usize;
    for (c, pairs) in GEN_LAYER_PAIRS.iter().enumerate() {
        for &(a, b) in pairs {
            for oriented in [(a, b), (b, a)] {
                assert_eq!(pair_frequency([&l.parts[c + 1][..]], oriented, t), Some(h), "{}{} on {oriented:?}", l.variant, c + 2);
            }
        }
    }
    for (c, set) in l.h.iter().enumerate() {
        assert_eq!(set.len(), (t as usize).pow(3));
        let [p, q, u, v] = TYPE4_FAMILIES[c].map(|x| x as usize);
        assert!(unique_triples(set, [p, u, v], t), "H{}", c + 1);
        assert!(unique_triples(set, [q, u, v], t), "H{}", c + 1);
    }
}

#[test]
fn plain_partition_at_15_and_21() {
    for t in [15, 21] {
        let l = build_l_sets(t).unwrap();
        check_partition(&l);
        check_generator_sets(&l);
        assert!(l.parts[4].contains(&Transversal::ZERO));
    }
}

#[test]
fn primed_partition_at_21() {
    let t = 21;
    let l = build_lprime_sets(t).unwrap();
    check_partition(&l);
    check_generator_sets(&l);
    assert_eq!(l.part_of(Transversal::ZERO), 4);
    for (i, s) in l.s.iter().enumerate() {
        let class = ParallelClass::new(4 * t, s.iter().map(|y| y.to_block(t)).collect()).unwrap();
        assert_eq!(class.blocks().len() as u32, t);
        assert!(s.iter().all(|y| l.parts[i + 1].contains(y)), "S{} not inside L'{}", i + 2, i + 2);
    }
    let half = t.div_ceil(2);
    assert!(l.s[1].contains(&Transversal([0, half, half, 0])));
}
