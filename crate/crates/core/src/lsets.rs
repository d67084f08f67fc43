//! Partitions of the configuration-(1,1,1,1) quadruples for odd `t`.
//!
//! Every quadruple `y = (y0, y1, y2, y3)` over `Z_t^4` decomposes uniquely as
//! `D(d) + C(c) + B(b) + A(a)` with `a = y3`, `b = y2 - y3`, `c = y1 - y3`,
//! `d = y0 - y1 - y2 + y3`. Membership in every set depends on `(b, c, d)`
//! only, so each set is a union of classes `X + A`.

use std::fmt;

use crate::error::{Error, Result};
use crate::quadset::{translate_a, Transversal};

/// Coordinates `(b, c, d)` of the class `y + A`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey {
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl OrbitKey {
    pub fn of(y: Transversal, t: u32) -> Self {
        let [y0, y1, y2, y3] = y.0;
        let m = |v: i64| v.rem_euclid(i64::from(t)) as u32;
        let (y0, y1, y2, y3) = (i64::from(y0), i64::from(y1), i64::from(y2), i64::from(y3));
        OrbitKey { b: m(y2 - y3), c: m(y1 - y3), d: m(y0 - y1 - y2 + y3) }
    }

    /// The orbit member with `a = 0`.
    pub fn base(self, t: u32) -> Transversal {
        let OrbitKey { b, c, d } = self;
        Transversal::new([i64::from(b) + i64::from(c) + i64::from(d), c.into(), b.into(), 0], t)
    }
}

/// Which of the two partitions is meant.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `L1..L5`, odd `t >= 15`.
    Plain,
    /// `L'1..L'5`, `t = 9 (mod 12)`, `t >= 21`.
    Prime,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "L",
            Variant::Prime => "L'",
        })
    }
}

/// Part index `0..5` of the orbit `key + A`.
pub fn classify(key: OrbitKey, t: u32, variant: Variant) -> usize {
    let h = (t - 1) / 2;
    let OrbitKey { b, c, d } = key;
    match variant {
        Variant::Plain => match d {
            1..=6 => 0,
            0 if (1..=h).contains(&c) => 1,
            0 if c > h => 2,
            _ if (7..=h + 6).contains(&d) && b == 0 => 3,
            _ => 4,
        },
        Variant::Prime => {
            let b_low = (1..=h).contains(&b);
            match d {
                1..=6 => 0,
                0 if (1..=h).contains(&c) => 1,
                _ if d == t - 1 && c > h => 2,
                0 if c == 0 && b_low => 3,
                7 if c != 0 && c != t - 7 && b_low => 3,
                14 if c == t - 7 && b_low => 3,
                _ => 4,
            }
        }
    }
}

/// The five parts with their distinguished subsets. Each list is in colex
/// order of the flat encoding, i.e. sorted by `(y3, y2, y1, y0)`.
#[derive(Clone, Debug)]
pub struct LSets {
    pub t: u32,
    pub variant: Variant,
    pub parts: [Vec<Transversal>; 5],
    /// `H_d`: the members of part 1 with `d`-coordinate `d + 1`.
    pub h: [Vec<Transversal>; 6],
    /// `S2, S3, S4` for the primed variant; empty otherwise.
    pub s: [Vec<Transversal>; 3],
}

impl LSets {
    pub fn part_of(&self, y: Transversal) -> usize {
        classify(OrbitKey::of(y, self.t), self.t, self.variant)
    }

    /// Orbit keys contained in part `p` (`0..5`), ordered by `(d, c, b)`.
    pub fn orbit_keys(&self, p: usize) -> Vec<OrbitKey> {
        all_keys(self.t).filter(|&k| classify(k, self.t, self.variant) == p).collect()
    }
}

/// Orbit keys ordered by `d`, then `c`, then `b`.
pub fn all_keys(t: u32) -> impl Iterator<Item = OrbitKey> {
    (0..t).flat_map(move |d| (0..t).flat_map(move |c| (0..t).map(move |b| OrbitKey { b, c, d })))
}

fn build(t: u32, variant: Variant) -> LSets {
    let mut parts: [Vec<Transversal>; 5] = Default::default();
    let mut h: [Vec<Transversal>; 6] = Default::default();
    for y3 in 0..t {
        for y2 in 0..t {
            for y1 in 0..t {
                for y0 in 0..t {
                    let y = Transversal([y0, y1, y2, y3]);
                    let key = OrbitKey::of(y, t);
                    let p = classify(key, t, variant);
                    parts[p].push(y);
                    if p == 0 {
                        h[key.d as usize - 1].push(y);
                    }
                }
            }
        }
    }
    let s = match variant {
        Variant::Plain => Default::default(),
        Variant::Prime => {
            let half = t.div_ceil(2);
            let mut s = [
                translate_a(Transversal([1, 1, 0, 0]), t),
                translate_a(Transversal([0, half, half, 0]), t),
                translate_a(Transversal([1, 0, 1, 0]), t),
            ];
            for v in &mut s {
                v.sort_unstable_by_key(|y| colex_key(*y));
            }
            s
        }
    };
    LSets { t, variant, parts, h, s }
}

/// Sort key realizing colex order of the flat encoding.
#[inline]
pub fn colex_key(y: Transversal) -> [u32; 4] {
    let [a, b, c, d] = y.0;
    [d, c, b, a]
}

/// `L1..L5` with `H1..H6`.
pub fn build_l_sets(t: u32) -> Result<LSets> {
    if t.is_multiple_of(2) || t < 15 {
        return Err(Error::InvalidParameter(format!("L-sets need odd t >= 15, got {t}")));
    }
    Ok(build(t, Variant::Plain))
}

/// `L'1..L'5` with `H1..H6` and `S2, S3, S4`.
pub fn build_lprime_sets(t: u32) -> Result<LSets> {
    if t % 12 != 9 || t < 21 {
        return Err(Error::InvalidParameter(format!("L'-sets need t = 9 (mod 12), t >= 21, got {t}")));
    }
    Ok(build(t, Variant::Prime))
}

/// The common multiplicity of every pair `(y_l1, y_l2)` over `set`, or
/// `None` if the multiplicities differ.
pub fn pair_frequency<'a>(sets: impl IntoIterator<Item = &'a [Transversal]>, layers: (usize, usize), t: u32) -> Option<usize> {
    let mut count = vec![0usize; (t * t) as usize];
    for set in sets {
        for y in set {
            count[(y.0[layers.0] * t + y.0[layers.1]) as usize] += 1;
        }
    }
    let f = count[0];
    count.iter().all(|&c| c == f).then_some(f)
}

/// Whether every value triple on `layers` occurs exactly once in `set`.
pub fn unique_triples(set: &[Transversal], layers: [usize; 3], t: u32) -> bool {
    let cube = (t as usize).pow(3);
    if set.len() != cube {
        return false;
    }
    let mut seen = vec![false; cube];
    for y in set {
        let [i, j, k] = layers.map(|l| y.0[l] as usize);
        let slot = (i * t as usize + j) * t as usize + k;
        if std::mem::replace(&mut seen[slot], true) {
            return false;
        }
    }
    true
}
