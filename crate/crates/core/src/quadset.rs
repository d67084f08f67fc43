//! Sum algebra on configuration-(1,1,1,1) quadruples.
//!
//! A quadruple with one point per layer is a vector of `Z_t^4`; sums are
//! taken coordinatewise modulo `t`.

use std::collections::BTreeSet;

use crate::block::{Block, Point};
use crate::error::{Error, Result};

/// Quadruple `{(x0,0),(x1,1),(x2,2),(x3,3)}` stored as its coordinate vector.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transversal(pub [u32; 4]);

impl Transversal {
    pub const ZERO: Transversal = Transversal([0; 4]);

    /// Reduces every coordinate modulo `t`.
    pub fn new(x: [i64; 4], t: u32) -> Self {
        Transversal(x.map(|v| v.rem_euclid(i64::from(t)) as u32))
    }

    pub fn from_block(b: &Block, t: u32) -> Result<Self> {
        if b.len() != 4 {
            return Err(Error::InvalidBlock(format!("{b:?} is not a quadruple")));
        }
        let mut x = [u32::MAX; 4];
        for &p in b.points() {
            let layer = (p / t) as usize;
            if layer >= 4 || x[layer] != u32::MAX {
                return Err(Error::InvalidBlock(format!(
                    "{b:?} is not a one-point-per-layer quadruple for t = {t}"
                )));
            }
            x[layer] = p % t;
        }
        Ok(Transversal(x))
    }

    #[inline]
    pub fn to_block(self, t: u32) -> Block {
        let [a, b, c, d] = self.0;
        Block::quad([a, t + b, 2 * t + c, 3 * t + d])
    }

    #[inline]
    pub fn flat(self, t: u32) -> [Point; 4] {
        let [a, b, c, d] = self.0;
        [a, t + b, 2 * t + c, 3 * t + d]
    }

    #[inline]
    pub fn add(self, other: Transversal, t: u32) -> Transversal {
        let mut out = [0u32; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.0[i] + other.0[i]) % t;
        }
        Transversal(out)
    }

    /// Canonical representative of the class `self + A`: first coordinate zero.
    #[inline]
    pub fn diagonal_offset(self, t: u32) -> [u32; 3] {
        let [a, b, c, d] = self.0;
        [(b + t - a) % t, (c + t - a) % t, (d + t - a) % t]
    }
}

/// `X + Y`; both must be one-point-per-layer quadruples.
pub fn quad_sum(x: &Block, y: &Block, t: u32) -> Result<Block> {
    let a = Transversal::from_block(x, t)?;
    let b = Transversal::from_block(y, t)?;
    Ok(a.add(b, t).to_block(t))
}

/// All pairwise sums, deduplicated and sorted.
pub fn set_sum(s1: &[Block], s2: &[Block], t: u32) -> Result<Vec<Block>> {
    let a: Vec<Transversal> = s1.iter().map(|b| Transversal::from_block(b, t)).collect::<Result<_>>()?;
    let b: Vec<Transversal> = s2.iter().map(|b| Transversal::from_block(b, t)).collect::<Result<_>>()?;
    Ok(transversal_sum(&a, &b, t).into_iter().map(|x| x.to_block(t)).collect())
}

pub fn transversal_sum(s1: &[Transversal], s2: &[Transversal], t: u32) -> BTreeSet<Transversal> {
    s1.iter().flat_map(|&x| s2.iter().map(move |&y| x.add(y, t))).collect()
}

/// `A = {(i,i,i,i)}`: itself a parallel class.
pub fn family_a(t: u32) -> Vec<Transversal> {
    (0..t).map(|i| Transversal([i, i, i, i])).collect()
}

/// `B = {(i,0,i,0)}`.
pub fn family_b(t: u32) -> Vec<Transversal> {
    (0..t).map(|i| Transversal([i, 0, i, 0])).collect()
}

/// `C = {(i,i,0,0)}`.
pub fn family_c(t: u32) -> Vec<Transversal> {
    (0..t).map(|i| Transversal([i, i, 0, 0])).collect()
}

/// `D = {(i,0,0,0)}`.
pub fn family_d(t: u32) -> Vec<Transversal> {
    (0..t).map(|i| Transversal([i, 0, 0, 0])).collect()
}

/// The parallel class `X + A`.
pub fn translate_a(x: Transversal, t: u32) -> Vec<Transversal> {
    (0..t).map(|i| x.add(Transversal([i, i, i, i]), t)).collect()
}
