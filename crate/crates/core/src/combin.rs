//! Binomial coefficients and colexicographic ranking of k-subsets.
//!
//! The colex rank of a sorted subset `c_0 < c_1 < ... < c_{k-1}` is
//! `C(c_0, 1) + C(c_1, 2) + ... + C(c_{k-1}, k)`. It does not depend on the
//! universe size, which lets one bitset layout serve every `n` up to its
//! capacity.

use crate::block::Block;
use crate::error::{Error, Result};

/// `C(n, k)`, or `None` on `u64` overflow.
pub fn checked_binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n, k)`; panics on overflow, which cannot happen for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    checked_binomial(n, k).unwrap_or_else(|| panic!("C({n},{k}) overflows u64"))
}

/// Precomputed `C(x, j)` for `x < n`, `j <= k`; used on hot ranking paths.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    n: usize,
    k: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let mut table = vec![0u64; (n + 1) * (k + 1)];
        for x in 0..=n {
            for j in 0..=k {
                table[x * (k + 1) + j] = binomial(x as u64, j as u64);
            }
        }
        BinomialTable { n, k, table }
    }

    #[inline]
    pub fn get(&self, x: usize, j: usize) -> u64 {
        debug_assert!(x <= self.n && j <= self.k);
        self.table[x * (self.k + 1) + j]
    }

    /// Colex rank of a block whose points are all `< n`. No range checks.
    #[inline]
    pub fn rank(&self, b: &Block) -> u64 {
        b.points()
            .iter()
            .enumerate()
            .map(|(i, &p)| self.get(p as usize, i + 1))
            .sum()
    }

    pub fn universe(&self) -> usize {
        self.n
    }
}

/// Colex rank of `b` among the `C(n, k)` k-subsets of `[0, n)`.
pub fn rank_block(b: &Block, n: u32) -> Result<u64> {
    if let Some(&p) = b.points().iter().find(|&&p| p >= n) {
        return Err(Error::PointOutOfRange { point: p.into(), n: n.into() });
    }
    Ok(b
        .points()
        .iter()
        .enumerate()
        .map(|(i, &p)| binomial(p.into(), i as u64 + 1))
        .sum())
}

/// Inverse of [`rank_block`].
pub fn unrank_block(rank: u64, n: u32, k: usize) -> Result<Block> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvalidBlock(format!("block size {k} not in 2..=4")));
    }
    let count = binomial(n.into(), k as u64);
    if rank >= count {
        return Err(Error::RankOutOfRange { rank, n: n.into(), k: k as u64, count });
    }
    let mut pts = [0u32; 4];
    let mut r = rank;
    let mut hi = n;
    for j in (1..=k).rev() {
        // largest c < hi with C(c, j) <= r
        let mut c = hi - 1;
        while binomial(c.into(), j as u64) > r {
            c -= 1;
        }
        pts[j - 1] = c;
        r -= binomial(c.into(), j as u64);
        hi = c;
    }
    Block::new(&pts[..k])
}
