//! Points, blocks, parallel classes and designs.

use std::fmt;

use crate::error::{Error, Result};

/// Flat point value in `[0, n)`.
pub type Point = u32;

/// A point `(x, layer)` of `Z_t x Z_L`; flattens to `layer * t + x`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledPoint {
    pub x: u32,
    pub layer: u32,
}

impl LabeledPoint {
    pub fn new(x: u32, layer: u32) -> Self {
        LabeledPoint { x, layer }
    }

    #[inline]
    pub fn flatten(self, t: u32) -> Point {
        self.layer * t + self.x
    }

    /// Inverse of [`LabeledPoint::flatten`]; `layers` is 2 for doubling, 4 for quadrupling.
    pub fn from_point(p: Point, t: u32, layers: u32) -> Result<Self> {
        if t == 0 || p >= t * layers {
            return Err(Error::PointOutOfRange { point: p.into(), n: u64::from(t) * u64::from(layers) });
        }
        Ok(LabeledPoint { x: p % t, layer: p / t })
    }
}

impl fmt::Display for LabeledPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.layer)
    }
}

/// Shorthand used by the constructions: flat value of `(x mod t, layer)`.
#[inline]
pub(crate) fn lp(x: i64, layer: u32, t: u32) -> Point {
    layer * t + x.rem_euclid(i64::from(t)) as u32
}

const UNUSED: u32 = u32::MAX;

/// A strictly increasing k-subset, `k` in `2..=4`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pts: [u32; 4],
    len: u8,
}

impl Block {
    /// Sorts `points`; fails on duplicates or a size outside `2..=4`.
    pub fn new(points: &[Point]) -> Result<Self> {
        let k = points.len();
        if !(2..=4).contains(&k) {
            return Err(Error::InvalidBlock(format!("block size {k} not in 2..=4")));
        }
        let mut pts = [UNUSED; 4];
        pts[..k].copy_from_slice(points);
        pts[..k].sort_unstable();
        if pts[..k].windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock(format!("repeated point in {:?}", &pts[..k])));
        }
        if pts[k - 1] == UNUSED {
            return Err(Error::InvalidBlock("point value u32::MAX is reserved".into()));
        }
        Ok(Block { pts, len: k as u8 })
    }

    /// Four-point block from points the caller knows to be distinct.
    #[inline]
    pub(crate) fn quad(mut pts: [Point; 4]) -> Self {
        pts.sort_unstable();
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]), "degenerate quadruple {pts:?}");
        Block { pts, len: 4 }
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.pts[..self.len as usize]
    }

    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn min_point(&self) -> Point {
        self.pts[0]
    }

    #[inline]
    pub fn max_point(&self) -> Point {
        self.pts[self.len as usize - 1]
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points().binary_search(&p).is_ok()
    }

    pub fn is_disjoint(&self, other: &Block) -> bool {
        self.points().iter().all(|p| !other.contains(*p))
    }

    /// Image under a point map; the result is re-sorted.
    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Block> {
        let mapped: Vec<Point> = self.points().iter().map(|&p| f(p)).collect();
        Block::new(&mapped)
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.points())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Pairwise-disjoint blocks covering `[0, n)`, kept sorted by minimum point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParallelClass {
    n: u32,
    blocks: Vec<Block>,
}

impl ParallelClass {
    /// Validates the partition property and normalizes block order.
    pub fn new(n: u32, blocks: Vec<Block>) -> Result<Self> {
        let class = Self::from_blocks_unchecked(n, blocks);
        class.check()?;
        Ok(class)
    }

    /// Normalizes block order but skips validation; constructions use this and
    /// leave certification to the verifier.
    pub fn from_blocks_unchecked(n: u32, mut blocks: Vec<Block>) -> Self {
        blocks.sort_unstable();
        ParallelClass { n, blocks }
    }

    /// Same result as [`Self::from_blocks_unchecked`], in `O(n)` when the
    /// blocks are pairwise disjoint: each block is bucketed by its minimum.
    /// Falls back to sorting if two blocks share a minimum.
    pub fn from_disjoint_blocks(n: u32, blocks: Vec<Block>) -> Self {
        let mut slots: Vec<Option<Block>> = vec![None; n as usize];
        for b in &blocks {
            match slots.get_mut(b.min_point() as usize) {
                Some(slot @ None) => *slot = Some(*b),
                _ => return Self::from_blocks_unchecked(n, blocks),
            }
        }
        ParallelClass { n, blocks: slots.into_iter().flatten().collect() }
    }

    pub fn check(&self) -> Result<()> {
        crate::verify::verify_class_blocks(&self.blocks, self.n)
            .map_err(|v| Error::NotParallelClass(v.to_string()))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    /// Block size, or 0 for an empty class.
    pub fn k(&self) -> usize {
        self.blocks.first().map_or(0, Block::len)
    }
}

impl fmt::Debug for ParallelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.blocks.iter()).finish()
    }
}

/// Class line of the design text format: blocks joined by `;`.
impl fmt::Display for ParallelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum DesignKind {
    /// Baranyai partition BP(n, k).
    Bp,
    /// Resolved Steiner quadruple system.
    Rsqs,
    /// One-factorization of K_n.
    Of,
    /// Near-one-factorization of K_n (n odd).
    Nof,
}

impl DesignKind {
    pub fn tag(self) -> &'static str {
        match self {
            DesignKind::Bp => "bp",
            DesignKind::Rsqs => "rsqs",
            DesignKind::Of => "of",
            DesignKind::Nof => "nof",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "bp" => Some(DesignKind::Bp),
            "rsqs" => Some(DesignKind::Rsqs),
            "of" => Some(DesignKind::Of),
            "nof" => Some(DesignKind::Nof),
            _ => None,
        }
    }
}

/// A named family of parallel classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub kind: DesignKind,
    pub n: u32,
    pub k: usize,
    pub classes: Vec<ParallelClass>,
    /// Construction trace, free of whitespace so it fits the file header.
    pub provenance: String,
}

impl Design {
    pub fn new(kind: DesignKind, n: u32, k: usize, classes: Vec<ParallelClass>, provenance: impl Into<String>) -> Self {
        let provenance = provenance.into().split_whitespace().collect::<Vec<_>>().join("_");
        Design { kind, n, k, classes, provenance }
    }

    /// Number of classes a complete design of this kind must have.
    pub fn expected_classes(&self) -> Option<u64> {
        let n = u64::from(self.n);
        let k = self.k as u64;
        match self.kind {
            DesignKind::Bp if k > 0 && n % k == 0 => Some(crate::combin::binomial(n - 1, k - 1)),
            DesignKind::Rsqs if n >= 4 => Some((n - 1) * (n - 2) / 6),
            DesignKind::Of if n % 2 == 0 && n >= 2 => Some(n - 1),
            DesignKind::Nof => Some(n),
            _ => None,
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.classes.iter().flat_map(|c| c.blocks().iter())
    }
}
