//! Resolved Steiner quadruple systems, served one parallel class at a time.

use crate::block::{Block, Design, DesignKind, ParallelClass};
use crate::error::{Error, Result};

/// Random access to the classes of a resolved SQS(v).
pub trait RsqsProvider: Send + Sync {
    fn v(&self) -> u32;

    fn class_count(&self) -> usize {
        let v = self.v() as usize;
        (v - 1) * (v - 2) / 6
    }

    /// Class `i`, zero-based, blocks sorted by minimum point.
    fn class(&self, i: usize) -> ParallelClass;

    fn to_design(&self) -> Design {
        let classes = (0..self.class_count()).map(|i| self.class(i)).collect();
        Design::new(DesignKind::Rsqs, self.v(), 4, classes, self.provenance())
    }

    fn provenance(&self) -> String;
}

/// A resolution held in memory.
#[derive(Clone, Debug)]
pub struct MaterializedRsqs {
    design: Design,
}

impl MaterializedRsqs {
    pub fn new(design: Design) -> Result<Self> {
        if design.kind != DesignKind::Rsqs || design.k != 4 {
            return Err(Error::InvalidParameter(format!(
                "expected a resolved SQS, got kind {} with k = {}",
                design.kind.tag(),
                design.k
            )));
        }
        if Some(design.classes.len() as u64) != design.expected_classes() {
            return Err(Error::InvalidParameter(format!(
                "RSQS({}) needs {:?} classes, got {}",
                design.n,
                design.expected_classes(),
                design.classes.len()
            )));
        }
        Ok(MaterializedRsqs { design })
    }

    pub fn design(&self) -> &Design {
        &self.design
    }
}

impl RsqsProvider for MaterializedRsqs {
    fn v(&self) -> u32 {
        self.design.n
    }

    fn class(&self, i: usize) -> ParallelClass {
        self.design.classes[i].clone()
    }

    fn to_design(&self) -> Design {
        self.design.clone()
    }

    fn provenance(&self) -> String {
        self.design.provenance.clone()
    }
}

/// The planes of the affine space AG(m, 2) on `v = 2^m` points, resolved by
/// direction: class `i` is the set of cosets of the `i`-th two-dimensional
/// linear subspace. Four points form a plane iff they XOR to zero, so every
/// triple lies in exactly one block.
///
/// Subspaces are listed by reduced basis `{u, w}` with leading bits
/// `p1 > p2`, where `u` has bit `p2` clear: pivot pairs in increasing
/// `(p1, p2)` order, then the free bits of `u`, then those of `w`.
#[derive(Copy, Clone, Debug)]
pub struct AffineRsqs {
    m: u32,
}

impl AffineRsqs {
    pub fn new(v: u32) -> Result<Self> {
        if v < 4 || !v.is_power_of_two() {
            return Err(Error::Unsupported(format!("affine RSQS needs v = 2^m >= 4, got {v}")));
        }
        Ok(AffineRsqs { m: v.trailing_zeros() })
    }

    /// Reduced basis of subspace `i`.
    pub fn basis(&self, i: usize) -> (u32, u32) {
        let mut rest = i as u64;
        for p1 in 1..self.m {
            for p2 in 0..p1 {
                let w_free = 1u64 << p2;
                let count = (1u64 << (p1 - 1)) * w_free;
                if rest < count {
                    let (uf, wf) = ((rest / w_free) as u32, (rest % w_free) as u32);
                    // spread uf over the bits below p1 other than p2
                    let low = uf & ((1 << p2) - 1);
                    let high = (uf >> p2) << (p2 + 1);
                    let u = (1 << p1) | high | low;
                    let w = (1 << p2) | wf;
                    return (u, w);
                }
                rest -= count;
            }
        }
        panic!("subspace index {i} out of range for m = {}", self.m)
    }
}

impl RsqsProvider for AffineRsqs {
    fn v(&self) -> u32 {
        1 << self.m
    }

    fn class(&self, i: usize) -> ParallelClass {
        let (u, w) = self.basis(i);
        let (p1, p2) = (31 - u.leading_zeros(), 31 - w.leading_zeros());
        let mask = (1u32 << p1) | (1u32 << p2);
        // each coset's minimum is its representative with both pivot bits clear
        let blocks = (0..self.v())
            .filter(|x| x & mask == 0)
            .map(|x| Block::quad([x, x ^ w, x ^ u, x ^ u ^ w]))
            .collect();
        ParallelClass::from_disjoint_blocks(self.v(), blocks)
    }

    fn provenance(&self) -> String {
        format!("rsqs-affine-ag{}-2", self.m)
    }
}
