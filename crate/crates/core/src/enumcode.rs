//! Column and entry queries on the doubling chain without listing.
//!
//! Column `i` (1-based) of BP(2t, 4) is found by interval arithmetic over the
//! doubled listing: the first `8 C(t-1,3)` columns are Type S, eight per
//! column of BP(t, 4); the next `4(t-1)(t-2)` are Type T, twenty-four per
//! class of the resolved SQS(t); the last `t - 1` are Type F, one per
//! one-factor of `K_t`. A query touches one class per level, so it costs
//! `O(n)` point operations plus RSQS class generation.

use std::collections::BTreeMap;

use crate::block::{Block, Design, ParallelClass};
use crate::combin::binomial;
use crate::doubling::{type_f_class, type_s_class, type_t_class, S_PER_CLASS, T_PER_CLASS};
use crate::error::{Error, Result};
use crate::factor::one_factor;
use crate::planner::{construct_bp4, plan, Step};
use crate::rsqs::RsqsProvider;
use crate::seeds::{rsqs_provider, SeedStore};

/// Class counts per type when BP(2t, 4) is doubled from BP(t, 4).
pub fn doubling_intervals(t: u32) -> [u64; 3] {
    let u = u64::from(t);
    [8 * binomial(u - 1, 3), 4 * (u - 1) * (u - 2), u - 1]
}

/// Query engine for one chain `base -> 2 base -> ... -> n`, holding the base
/// listing and one RSQS provider per level.
pub struct ColumnOracle {
    n: u32,
    base: Design,
    rsqs: BTreeMap<u32, Box<dyn RsqsProvider>>,
}

impl ColumnOracle {
    /// Fails unless every step from `n` down is a doubling ending at a base.
    pub fn new(n: u32, store: &SeedStore) -> Result<Self> {
        let mut rsqs = BTreeMap::new();
        let mut m = n;
        loop {
            match plan(m)? {
                Step::Base => break,
                Step::Double => {
                    rsqs.insert(m / 2, rsqs_provider(m / 2, store)?);
                    m /= 2;
                }
                Step::Quadruple(_) => {
                    return Err(Error::Unsupported(format!(
                        "column queries cover the doubling chain only; BP({m},4) is built by quadrupling"
                    )))
                }
            }
        }
        let base = construct_bp4(m, store)?;
        Ok(ColumnOracle { n, base, rsqs })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn column_count(&self) -> u64 {
        binomial(u64::from(self.n) - 1, 3)
    }

    /// Column `i`, `1 <= i <= C(n-1,3)`.
    pub fn column(&self, i: u64) -> Result<ParallelClass> {
        if i == 0 || i > self.column_count() {
            return Err(Error::InvalidParameter(format!("column {i} not in 1..={} for n = {}", self.column_count(), self.n)));
        }
        Ok(self.column_at(self.n, i))
    }

    fn column_at(&self, n: u32, i: u64) -> ParallelClass {
        if n == self.base.n {
            return self.base.classes[(i - 1) as usize].clone();
        }
        let t = n / 2;
        let [s, tt, _] = doubling_intervals(t);
        let (sp, tp) = (S_PER_CLASS as u64, T_PER_CLASS as u64);
        if i <= s {
            let parent = self.column_at(t, i.div_ceil(sp));
            type_s_class(&parent, t, ((i - 1) % sp) as usize)
        } else if i <= s + tt {
            let j = i - s;
            let class = self.rsqs[&t].class((j.div_ceil(tp) - 1) as usize);
            type_t_class(&class, t, ((j - 1) % tp) as usize)
        } else {
            let f = (i - s - tt - 1) as u32;
            type_f_class(&one_factor(t, f), t)
        }
    }

    /// Block `j` (1-based, blocks ordered by minimum point) of column `i`.
    pub fn entry(&self, i: u64, j: u64) -> Result<Block> {
        let blocks = u64::from(self.n / 4);
        if j == 0 || j > blocks {
            return Err(Error::InvalidParameter(format!("entry {j} not in 1..={blocks}")));
        }
        Ok(self.column(i)?.blocks()[(j - 1) as usize])
    }
}

/// Column `i` of BP(n, 4) from embedded seeds.
pub fn column(n: u32, i: u64) -> Result<ParallelClass> {
    ColumnOracle::new(n, &SeedStore::embedded_only())?.column(i)
}

pub fn entry(n: u32, i: u64, j: u64) -> Result<Block> {
    ColumnOracle::new(n, &SeedStore::embedded_only())?.entry(i, j)
}
