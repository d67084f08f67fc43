//! Layer-occupancy configurations of quadruples over `Z_t x Z_4` and their
//! five groups.

use std::fmt;

use crate::block::Block;
use crate::combin::binomial;
use crate::error::{Error, Result};

/// Occupancy counts `(j0, j1, j2, j3)`, summing to 4.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(pub [u8; 4]);

/// Group 1 through 5.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u8);

impl GroupId {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=5).contains(&id) {
            Ok(GroupId(id))
        } else {
            Err(Error::InvalidParameter(format!("group id {id} not in 1..=5")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based index, handy for `[_; 5]` tallies.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Configuration {
    pub fn new(j: [u8; 4]) -> Result<Self> {
        if j.iter().map(|&x| u32::from(x)).sum::<u32>() != 4 {
            return Err(Error::InvalidParameter(format!("configuration {j:?} does not sum to 4")));
        }
        Ok(Configuration(j))
    }

    /// All 35 configurations in lexicographic order.
    pub fn all() -> Vec<Configuration> {
        let mut out = Vec::with_capacity(35);
        for a in 0..=4u8 {
            for b in 0..=4 - a {
                for c in 0..=4 - a - b {
                    out.push(Configuration([a, b, c, 4 - a - b - c]));
                }
            }
        }
        out
    }

    /// Number of quadruples of `Z_t x Z_4` with this configuration.
    pub fn population(self, t: u32) -> u64 {
        self.0.iter().map(|&j| binomial(t.into(), j.into())).product()
    }

    pub fn group(self) -> GroupId {
        group_of(self)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Configuration of a quadruple over the flat encoding of `Z_t x Z_4`.
pub fn classify_configuration(q: &Block, t: u32) -> Result<Configuration> {
    if q.len() != 4 {
        return Err(Error::InvalidBlock(format!("expected a quadruple, got {} points", q.len())));
    }
    let mut j = [0u8; 4];
    for &p in q.points() {
        if p >= 4 * t {
            return Err(Error::PointOutOfRange { point: p.into(), n: u64::from(4 * t) });
        }
        j[(p / t) as usize] += 1;
    }
    Ok(Configuration(j))
}

/// Group of a configuration; depends only on the sorted occupancy pattern.
pub fn group_of(c: Configuration) -> GroupId {
    let mut s = c.0;
    s.sort_unstable_by(|a, b| b.cmp(a));
    GroupId(match s {
        [4, 0, 0, 0] => 1,
        [3, 1, 0, 0] => 2,
        [2, 2, 0, 0] => 3,
        [2, 1, 1, 0] => 4,
        [1, 1, 1, 1] => 5,
        _ => unreachable!("occupancy {:?} does not sum to 4", c.0),
    })
}

/// Group of a quadruple; `t` as in [`classify_configuration`].
#[inline]
pub fn group_of_block(q: &Block, t: u32) -> GroupId {
    let mut j = [0u8; 4];
    for &p in q.points() {
        j[(p / t) as usize] += 1;
    }
    group_of(Configuration(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::lp;

    fn q(t: u32, pts: [(i64, u32); 4]) -> Block {
        Block::new(&pts.map(|(x, l)| lp(x, l, t))).unwrap()
    }

    #[test]
    fn classify_examples() {
        let t = 4;
        assert_eq!(classify_configuration(&q(t, [(0, 0), (1, 0), (2, 0), (3, 0)]), t).unwrap().0, [4, 0, 0, 0]);
        assert_eq!(classify_configuration(&q(t, [(0, 0), (0, 1), (0, 2), (0, 3)]), t).unwrap().0, [1, 1, 1, 1]);
        assert_eq!(classify_configuration(&q(t, [(0, 0), (1, 0), (0, 1), (1, 1)]), t).unwrap().0, [2, 2, 0, 0]);
    }

    #[test]
    fn classify_errors() {
        assert!(classify_configuration(&Block::new(&[0, 1, 2]).unwrap(), 4).is_err());
        assert!(classify_configuration(&Block::new(&[0, 1, 2, 16]).unwrap(), 4).is_err());
    }

    #[test]
    fn group_examples() {
        assert_eq!(group_of(Configuration([4, 0, 0, 0])).get(), 1);
        assert_eq!(group_of(Configuration([2, 1, 1, 0])).get(), 4);
        assert_eq!(group_of(Configuration([1, 1, 1, 1])).get(), 5);
    }

    #[test]
    fn thirty_five_configurations_with_group_sizes() {
        let all = Configuration::all();
        assert_eq!(all.len(), 35);
        let mut sizes = [0usize; 5];
        for c in &all {
            sizes[c.group().index()] += 1;
        }
        assert_eq!(sizes, [4, 12, 6, 12, 1]);
    }

    #[test]
    fn populations_sum_to_all_quadruples() {
        for t in 1..=40u32 {
            let total: u64 = Configuration::all().iter().map(|c| c.population(t)).sum();
            assert_eq!(total, binomial((4 * t).into(), 4), "t = {t}");
        }
    }
}
