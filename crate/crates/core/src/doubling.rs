//! BP(2t, 4) from a BP(t, 4), a resolved SQS(t) and a one-factorization of
//! `K_t`, for `t = 4, 8 (mod 12)`.
//!
//! Points `(x, i)` of `Z_t x Z_2` flatten to `i * t + x`. Classes come in three
//! types by the number of distinct `x` in each block: S (4), T (3) and F (2).
//! The output lists Type S, then T, then F; within a type, classes follow the
//! input class order with the inner index ascending.

use rayon::prelude::*;

use crate::block::{Block, Design, DesignKind, ParallelClass};
use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::factor::{OneFactorization, Pair};

/// Classes per input class of each type.
pub const S_PER_CLASS: usize = 8;
pub const T_PER_CLASS: usize = 24;

pub struct DoublingInput {
    pub bp: Design,
    pub rsqs: Design,
    pub of: OneFactorization,
}

impl DoublingInput {
    pub fn t(&self) -> u32 {
        self.bp.n
    }

    fn validate(&self) -> Result<()> {
        let t = self.bp.n;
        if !matches!(t % 12, 4 | 8) {
            return Err(Error::Unsupported(format!("doubling needs t = 4, 8 (mod 12), got {t}")));
        }
        let bp_ok = self.bp.kind == DesignKind::Bp
            && self.bp.k == 4
            && Some(self.bp.classes.len() as u64) == self.bp.expected_classes();
        if !bp_ok {
            return Err(Error::InvalidParameter(format!("first input is not a BP({t},4) with {} classes", binomial(u64::from(t) - 1, 3))));
        }
        let rsqs_ok = self.rsqs.kind == DesignKind::Rsqs
            && self.rsqs.n == t
            && Some(self.rsqs.classes.len() as u64) == self.rsqs.expected_classes();
        if !rsqs_ok {
            return Err(Error::InvalidParameter(format!("second input is not a resolved SQS({t})")));
        }
        if self.of.m() != t {
            return Err(Error::InvalidParameter(format!("one-factorization is on K_{}, expected K_{t}", self.of.m())));
        }
        Ok(())
    }
}

#[inline]
fn pt(x: u32, layer: u32, t: u32) -> u32 {
    (layer & 1) * t + x
}

fn check_input_class(r: &ParallelClass, t: u32) -> Result<()> {
    if r.n() != t || r.k() != 4 {
        return Err(Error::NotParallelClass(format!("expected a class of quadruples on Z_{t}")));
    }
    r.check()
}

/// Type S class `i` (`0..8`) of input class `r`: with `(j2 j3 j4)` the bits of
/// `i`, block `{x1<x2<x3<x4}` gives `{(x1,0),(x2,j2),(x3,j3),(x4,j4)}` and its
/// layer-swapped twin.
pub fn type_s_class(r: &ParallelClass, t: u32, i: usize) -> ParallelClass {
    debug_assert!(i < S_PER_CLASS);
    let (j2, j3, j4) = ((i >> 2) as u32 & 1, (i >> 1) as u32 & 1, i as u32 & 1);
    let mut blocks = Vec::with_capacity(2 * r.blocks().len());
    for b in r.blocks() {
        let [x1, x2, x3, x4] = quad_points(b);
        blocks.push(Block::quad([pt(x1, 0, t), pt(x2, j2, t), pt(x3, j3, t), pt(x4, j4, t)]));
        blocks.push(Block::quad([pt(x1, 1, t), pt(x2, j2 + 1, t), pt(x3, j3 + 1, t), pt(x4, j4 + 1, t)]));
    }
    ParallelClass::from_disjoint_blocks(2 * t, blocks)
}

pub fn double_type_s(r: &ParallelClass, t: u32) -> Result<Vec<ParallelClass>> {
    check_input_class(r, t)?;
    Ok((0..S_PER_CLASS).map(|i| type_s_class(r, t, i)).collect())
}

/// The two blocks that SQS block `{x1<x2<x3<x4}` contributes to Type T class
/// `(i, j, k)`.
fn type_t_blocks(x: [u32; 4], i: u32, j: u32, k: u32, t: u32) -> [Block; 2] {
    let [x1, x2, x3, x4] = x;
    let p = |x, l| pt(x, l, t);
    let (a, b) = match i {
        0 => ([p(x1, 0), p(x1, 1), p(x2, j), p(x3, k)], [p(x2, j + 1), p(x3, k + 1), p(x4, 0), p(x4, 1)]),
        1 => ([p(x1, 0), p(x1, 1), p(x2, j), p(x4, k)], [p(x2, j + 1), p(x3, 0), p(x3, 1), p(x4, k + 1)]),
        2 => ([p(x1, 0), p(x1, 1), p(x3, j), p(x4, k)], [p(x2, 0), p(x2, 1), p(x3, j + 1), p(x4, k + 1)]),
        3 => ([p(x1, j), p(x2, 0), p(x2, 1), p(x3, k)], [p(x1, j + 1), p(x3, k + 1), p(x4, 0), p(x4, 1)]),
        4 => ([p(x1, j), p(x2, 0), p(x2, 1), p(x4, k)], [p(x1, j + 1), p(x3, 0), p(x3, 1), p(x4, k + 1)]),
        5 => ([p(x1, j), p(x2, k), p(x3, 0), p(x3, 1)], [p(x1, j + 1), p(x2, k + 1), p(x4, 0), p(x4, 1)]),
        _ => unreachable!("template index {i} not in Z_6"),
    };
    [Block::quad(a), Block::quad(b)]
}

/// Type T class with inner index `inner = 4i + 2j + k`, i.e. `(i, j, k)` in
/// `Z_6 x Z_2 x Z_2` taken lexicographically.
pub fn type_t_class(r: &ParallelClass, t: u32, inner: usize) -> ParallelClass {
    debug_assert!(inner < T_PER_CLASS);
    let (i, j, k) = ((inner / 4) as u32, ((inner / 2) % 2) as u32, (inner % 2) as u32);
    let mut blocks = Vec::with_capacity(2 * r.blocks().len());
    for b in r.blocks() {
        blocks.extend(type_t_blocks(quad_points(b), i, j, k, t));
    }
    ParallelClass::from_disjoint_blocks(2 * t, blocks)
}

pub fn double_type_t(r: &ParallelClass, t: u32) -> Result<Vec<ParallelClass>> {
    check_input_class(r, t)?;
    Ok((0..T_PER_CLASS).map(|inner| type_t_class(r, t, inner)).collect())
}

/// `{(x,0),(y,0),(x,1),(y,1)}` for every pair of the one-factor.
pub fn type_f_class(factor: &[Pair], t: u32) -> ParallelClass {
    let blocks = factor.iter().map(|&(x, y)| Block::quad([x, y, t + x, t + y])).collect();
    ParallelClass::from_disjoint_blocks(2 * t, blocks)
}

pub fn double_type_f(factor: &[Pair], t: u32) -> Result<ParallelClass> {
    let blocks: Vec<Block> = factor.iter().map(|&(x, y)| Block::new(&[x, y])).collect::<Result<_>>()?;
    ParallelClass::new(t, blocks)?;
    Ok(type_f_class(factor, t))
}

fn quad_points(b: &Block) -> [u32; 4] {
    let p = b.points();
    [p[0], p[1], p[2], p[3]]
}

/// `8C(t-1,3) + 4(t-1)(t-2) + (t-1) = C(2t-1,3)` classes.
pub fn double(input: &DoublingInput) -> Result<Design> {
    input.validate()?;
    let t = input.t();
    for r in &input.bp.classes {
        check_input_class(r, t)?;
    }
    for r in &input.rsqs.classes {
        check_input_class(r, t)?;
    }
    let s: Vec<Vec<ParallelClass>> = input
        .bp
        .classes
        .par_iter()
        .map(|r| (0..S_PER_CLASS).map(|i| type_s_class(r, t, i)).collect())
        .collect();
    let tt: Vec<Vec<ParallelClass>> = input
        .rsqs
        .classes
        .par_iter()
        .map(|r| (0..T_PER_CLASS).map(|i| type_t_class(r, t, i)).collect())
        .collect();
    let mut classes: Vec<ParallelClass> = s.into_iter().flatten().collect();
    classes.extend(tt.into_iter().flatten());
    classes.extend(input.of.factors().iter().map(|f| type_f_class(f, t)));
    debug_assert_eq!(classes.len() as u64, binomial(2 * u64::from(t) - 1, 3));
    Ok(Design::new(DesignKind::Bp, 2 * t, 4, classes, format!("doubling-t{t}")))
}
