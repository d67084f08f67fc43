//! One-factorizations and near-one-factorizations of complete graphs.
//!
//! For odd `m` the near-one-factor `F_k` holds every pair `{x, y}` with
//! `x + y = 2k (mod m)`, leaving vertex `k` isolated. Adjoining `{k, m}` to
//! each `F_k` yields a one-factorization of `K_{m+1}`.
//!
//! Pair order is fixed, since the quadrupling constructions address pairs as
//! `F_{i,j}`: near-one-factor pairs ascend by smaller element, and the
//! adjoined pair `{k, m}` comes last.

use crate::block::Block;
use crate::error::{Error, Result};

pub type Pair = (u32, u32);

/// Pairs of the near-one-factor `F_k` of `K_m` (`m` odd), in canonical order.
pub fn near_one_factor(m: u32, k: u32) -> Vec<Pair> {
    debug_assert!(m % 2 == 1 && k < m);
    let target = (2 * u64::from(k)) % u64::from(m);
    let mut out = Vec::with_capacity((m / 2) as usize);
    for x in 0..m {
        let y = ((target + u64::from(m) - u64::from(x)) % u64::from(m)) as u32;
        if x < y {
            out.push((x, y));
        }
    }
    out
}

/// Pairs of the one-factor `F'_k` of `K_m` (`m` even).
pub fn one_factor(m: u32, k: u32) -> Vec<Pair> {
    debug_assert!(m.is_multiple_of(2) && m >= 2 && k + 1 < m);
    let mut out = near_one_factor(m - 1, k);
    out.push((k, m - 1));
    out
}

#[derive(Clone, Debug)]
struct Factors {
    m: u32,
    factors: Vec<Vec<Pair>>,
    // (factor, position) per vertex pair, row-major over min(x,y) * m + max(x,y)
    index: Vec<(u32, u32)>,
}

impl Factors {
    fn build(m: u32, factors: Vec<Vec<Pair>>) -> Self {
        let mut index = vec![(u32::MAX, u32::MAX); (m as usize) * (m as usize)];
        for (i, f) in factors.iter().enumerate() {
            for (j, &(x, y)) in f.iter().enumerate() {
                index[(x * m + y) as usize] = (i as u32, j as u32);
            }
        }
        Factors { m, factors, index }
    }

    fn locate(&self, pair: &Block) -> Result<(usize, usize)> {
        if pair.len() != 2 {
            return Err(Error::InvalidBlock(format!("{pair:?} is not a pair")));
        }
        let (x, y) = (pair.points()[0], pair.points()[1]);
        if y >= self.m {
            return Err(Error::PointOutOfRange { point: y.into(), n: self.m.into() });
        }
        let (i, j) = self.index[(x * self.m + y) as usize];
        debug_assert!(i != u32::MAX);
        Ok((i as usize, j as usize))
    }

    fn pair_wrapped(&self, i: usize, j: i64) -> Pair {
        let f = &self.factors[i];
        f[j.rem_euclid(f.len() as i64) as usize]
    }
}

/// Partition of the edges of `K_m` (`m` odd) into `m` near-perfect matchings.
#[derive(Clone, Debug)]
pub struct NearOneFactorization(Factors);

impl NearOneFactorization {
    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn factors(&self) -> &[Vec<Pair>] {
        &self.0.factors
    }

    pub fn factor(&self, i: usize) -> &[Pair] {
        &self.0.factors[i]
    }

    /// `F_{i, j mod (m-1)/2}`.
    #[inline]
    pub fn pair(&self, i: usize, j: i64) -> Pair {
        self.0.pair_wrapped(i, j)
    }

    /// `(i, j)` with `F_{i,j} = pair`.
    pub fn locate_pair(&self, pair: &Block) -> Result<(usize, usize)> {
        self.0.locate(pair)
    }
}

/// Partition of the edges of `K_m` (`m` even) into `m - 1` perfect matchings.
#[derive(Clone, Debug)]
pub struct OneFactorization(Factors);

impl OneFactorization {
    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn factors(&self) -> &[Vec<Pair>] {
        &self.0.factors
    }

    pub fn factor(&self, i: usize) -> &[Pair] {
        &self.0.factors[i]
    }

    /// `F_{i, j mod m/2}`.
    #[inline]
    pub fn pair(&self, i: usize, j: i64) -> Pair {
        self.0.pair_wrapped(i, j)
    }

    pub fn locate_pair(&self, pair: &Block) -> Result<(usize, usize)> {
        self.0.locate(pair)
    }

    /// The factorization as a BP(m, 2)-style design.
    pub fn to_design(&self) -> crate::block::Design {
        use crate::block::{Design, DesignKind, ParallelClass};
        let classes = self
            .factors()
            .iter()
            .map(|f| {
                let blocks = f.iter().map(|&(x, y)| Block::new(&[x, y]).expect("distinct pair")).collect();
                ParallelClass::from_blocks_unchecked(self.m(), blocks)
            })
            .collect();
        Design::new(DesignKind::Of, self.m(), 2, classes, format!("of-cyclic-{}", self.m()))
    }
}

pub fn near_one_factorization(m: u32) -> Result<NearOneFactorization> {
    if m.is_multiple_of(2) || m < 3 {
        return Err(Error::InvalidParameter(format!(
            "near-one-factorization needs odd m >= 3, got {m}"
        )));
    }
    let factors = (0..m).map(|k| near_one_factor(m, k)).collect();
    Ok(NearOneFactorization(Factors::build(m, factors)))
}

pub fn one_factorization(m: u32) -> Result<OneFactorization> {
    if m % 2 == 1 || m < 2 {
        return Err(Error::InvalidParameter(format!("one-factorization needs even m >= 2, got {m}")));
    }
    let factors = (0..m - 1).map(|k| one_factor(m, k)).collect();
    Ok(OneFactorization(Factors::build(m, factors)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_cover_ok(m: u32, factors: &[Vec<Pair>]) -> bool {
        let mut seen = vec![false; (m * m) as usize];
        let mut count = 0;
        for f in factors {
            for &(x, y) in f {
                if x >= y || y >= m || seen[(x * m + y) as usize] {
                    return false;
                }
                seen[(x * m + y) as usize] = true;
                count += 1;
            }
        }
        count == m * (m - 1) / 2
    }

    #[test]
    fn m3_and_m4_listings() {
        let f = near_one_factorization(3).unwrap();
        assert_eq!(f.factors(), &[vec![(1, 2)], vec![(0, 2)], vec![(0, 1)]]);
        let g = one_factorization(4).unwrap();
        assert_eq!(g.factors(), &[vec![(1, 2), (0, 3)], vec![(0, 2), (1, 3)], vec![(0, 1), (2, 3)]]);
        assert_eq!(one_factorization(2).unwrap().factors(), &[vec![(0, 1)]]);
    }

    #[test]
    fn m5_factor_zero() {
        let f = near_one_factorization(5).unwrap();
        assert_eq!(f.factor(0), &[(1, 4), (2, 3)]);
        assert!(edge_cover_ok(5, f.factors()));
    }

    #[test]
    fn locate_examples() {
        let g = one_factorization(4).unwrap();
        assert_eq!(g.locate_pair(&Block::new(&[0, 3]).unwrap()).unwrap(), (0, 1));
        let f = near_one_factorization(3).unwrap();
        assert_eq!(f.locate_pair(&Block::new(&[0, 1]).unwrap()).unwrap(), (2, 0));
        let f5 = near_one_factorization(5).unwrap();
        assert_eq!(f5.locate_pair(&Block::new(&[2, 3]).unwrap()).unwrap(), (0, 1));
        assert!(f5.locate_pair(&Block::new(&[2, 7]).unwrap()).is_err());
        assert!(f5.locate_pair(&Block::new(&[1, 2, 3]).unwrap()).is_err());
    }

    #[test]
    fn parameter_errors() {
        assert!(near_one_factorization(4).is_err());
        assert!(near_one_factorization(1).is_err());
        assert!(one_factorization(5).is_err());
        assert!(one_factorization(0).is_err());
    }

    #[test]
    fn m8_counts() {
        let g = one_factorization(8).unwrap();
        assert_eq!(g.factors().len(), 7);
        assert!(g.factors().iter().all(|f| f.len() == 4));
        assert!(edge_cover_ok(8, g.factors()));
    }

    #[test]
    fn wrapped_positions() {
        let g = one_factorization(8).unwrap();
        assert_eq!(g.pair(2, 4), g.pair(2, 0));
        assert_eq!(g.pair(2, -1), g.pair(2, 3));
    }
}
