//! BP(4t, 4) from BP(t + δ1, 4) and BP(t + δ2, 3), where `δ1 = -t mod 4`
//! and `δ2 = -t mod 3`.
//!
//! Points `(x, i)` of `Z_t x Z_4` flatten to `i * t + x`. The extension points
//! `Ω1, Ω2, Ω3` of the input designs are `t, t + 1, t + 2`. A quadruple's
//! configuration is its per-layer occupancy; Types 1 to 5 cover the five
//! configuration groups between them and are emitted in that order.

use rayon::prelude::*;

use crate::block::{lp, Block, Design, DesignKind, ParallelClass, Point};
use crate::combin::binomial;
use crate::doubling::{double, DoublingInput};
use crate::error::{Error, Result};
use crate::factor::{near_one_factorization, one_factorization, NearOneFactorization, OneFactorization};
use crate::latin::{predetermined_rows, type2_matrix};
use crate::lsets::{all_keys, build_l_sets, build_lprime_sets, classify, colex_key, pair_frequency, unique_triples, LSets, OrbitKey};
use crate::quadset::{translate_a, Transversal};

/// Inputs of one quadrupling step.
#[derive(Clone, Debug)]
pub struct QuadInput {
    pub t: u32,
    /// BP(t + δ1, 4).
    pub bp4: Design,
    /// BP(t, 3); required when `3 | t`.
    pub bp3: Option<Design>,
    /// Resolved SQS(t) and SQS(2t); required for `t = 4, 8 (mod 12)`, which
    /// goes through two doublings.
    pub rsqs: Option<(Design, Design)>,
}

/// The assembly case, numbered by residue of `t` modulo 12:
/// 1 for 0, 2 for 3, 3 for 4, 4 for 6, 5 for 8, 6 for 9.
pub fn case_of(t: u32) -> Result<u8> {
    let case = match t % 12 {
        0 if t > 0 => 1,
        3 if t >= 15 => 2,
        4 => 3,
        6 => 4,
        8 => 5,
        9 if t >= 21 => 6,
        _ => return Err(Error::Unsupported(format!("no quadrupling step for t = {t}"))),
    };
    Ok(case)
}

pub fn delta1(t: u32) -> u32 {
    (4 - t % 4) % 4
}

impl QuadInput {
    fn validate(&self) -> Result<()> {
        let t = self.t;
        case_of(t)?;
        let want = t + delta1(t);
        let bp4 = &self.bp4;
        if bp4.k != 4 || bp4.n != want || Some(bp4.classes.len() as u64) != bp4.expected_classes() {
            return Err(Error::InvalidParameter(format!(
                "bp4 must be a BP({want},4); got n = {}, k = {}, {} classes",
                bp4.n,
                bp4.k,
                bp4.classes.len()
            )));
        }
        if t.is_multiple_of(3) {
            let bp3 = self.bp3.as_ref().ok_or_else(|| Error::InvalidParameter(format!("t = {t} needs a BP({t},3)")))?;
            if bp3.k != 3 || bp3.n != t || Some(bp3.classes.len() as u64) != bp3.expected_classes() {
                return Err(Error::InvalidParameter(format!("bp3 must be a BP({t},3); got n = {}, k = {}", bp3.n, bp3.k)));
            }
        }
        Ok(())
    }
}

#[inline]
fn pt(x: i64, layer: u32, t: u32) -> Point {
    lp(x, layer, t)
}

// ---------------------------------------------------------------- Type 1

/// Which input points of a block are in `Z_t` and which are `Ω`s (1-based).
fn split_block(b: &Block, t: u32) -> (Vec<u32>, Vec<u32>) {
    let (xs, om): (Vec<u32>, Vec<u32>) = b.points().iter().partition(|&&p| p < t);
    (xs, om.into_iter().map(|p| p - t + 1).collect())
}

/// Offset `σ` for a block `{x0,x1,x2,Ω_w}`: copy `i` takes `x_{(i+σ) mod 3}`
/// onto layer 3.
fn omega_shift(residue: u32, w: u32) -> u32 {
    match residue {
        3 | 2 => w - 1,
        _ => 3 - w,
    }
}

/// Layer pairs for a block `{x0,x1,Ω_a,Ω_b}`.
fn omega_pair_layers(residue: u32, om: &[u32]) -> [(u32, u32); 2] {
    match (residue, om) {
        (1, [1, 3]) => [(0, 3), (1, 2)],
        (1, [1, 2]) => [(0, 2), (1, 3)],
        _ => [(0, 1), (2, 3)],
    }
}

/// The Type 1 class built from one class of BP(t + δ1, 4).
pub fn type1_class(r: &ParallelClass, t: u32) -> Result<ParallelClass> {
    let residue = t % 4;
    let delta = delta1(t);
    if r.n() != t + delta || r.k() != 4 {
        return Err(Error::NotParallelClass(format!("expected a class of quadruples on {} points", t + delta)));
    }
    let mut blocks = Vec::with_capacity(t as usize);
    for b in r.blocks() {
        let (xs, om) = split_block(b, t);
        match (xs.as_slice(), om.as_slice()) {
            (&[a, b, c, d], []) => {
                for i in 0..4 {
                    blocks.push(Block::quad([a + i * t, b + i * t, c + i * t, d + i * t]));
                }
            }
            (&[x0, x1, x2], &[w]) => {
                let x = [x0, x1, x2];
                let sigma = omega_shift(residue, w);
                for i in 0..3u32 {
                    let last = x[((i + sigma) % 3) as usize];
                    blocks.push(Block::quad([x0 + i * t, x1 + i * t, x2 + i * t, last + 3 * t]));
                }
            }
            (&[x0, x1], om) => {
                for (l1, l2) in omega_pair_layers(residue, om) {
                    blocks.push(Block::quad([x0 + l1 * t, x1 + l1 * t, x0 + l2 * t, x1 + l2 * t]));
                }
            }
            (&[x], [_, _, _]) => blocks.push(Block::quad([x, x + t, x + 2 * t, x + 3 * t])),
            _ => {
                return Err(Error::InvalidBlock(format!("block {b:?} has no Type 1 template for t = {t}")));
            }
        }
    }
    let class = ParallelClass::from_blocks_unchecked(4 * t, blocks);
    class.check()?;
    Ok(class)
}

pub fn type1_classes(input: &QuadInput) -> Result<Vec<ParallelClass>> {
    input.validate()?;
    input.bp4.classes.par_iter().map(|r| type1_class(r, input.t)).collect()
}

// ---------------------------------------------------------------- Type 2

/// The `4t - p` Type 2 classes of one class of BP(t, 3), `p` the number of
/// Latin rows fixed by Type 1: `R_{i,j}` for `i` in `Z_t`, `j` in `0..3`,
/// then `R_i` for `i >= p`.
pub fn type2_for_class(r: &ParallelClass, t: u32) -> Result<Vec<ParallelClass>> {
    let m = type2_matrix(r, t, t % 4)?;
    let trips: Vec<[u32; 3]> = r.blocks().iter().map(|b| [b.points()[0], b.points()[1], b.points()[2]]).collect();
    let pre = predetermined_rows(t % 4);
    let mut out = Vec::with_capacity(4 * t as usize - pre);
    for i in 0..t as usize {
        for j in 0..3u32 {
            let mut blocks = Vec::with_capacity(t as usize);
            for (mi, x) in trips.iter().enumerate() {
                for s in (0..4u32).filter(|&s| s != j) {
                    let phi = if s < j { s } else { s - 1 } as usize;
                    let y = m.get(i, 3 * mi + phi);
                    blocks.push(Block::quad([x[0] + s * t, x[1] + s * t, x[2] + s * t, y + j * t]));
                }
            }
            out.push(ParallelClass::from_blocks_unchecked(4 * t, blocks));
        }
    }
    for i in pre..t as usize {
        let mut blocks = Vec::with_capacity(t as usize);
        for (mi, x) in trips.iter().enumerate() {
            for s in 0..3u32 {
                let y = m.get(i, 3 * mi + s as usize);
                blocks.push(Block::quad([x[0] + s * t, x[1] + s * t, x[2] + s * t, y + 3 * t]));
            }
        }
        out.push(ParallelClass::from_blocks_unchecked(4 * t, blocks));
    }
    Ok(out)
}

pub fn type2_classes(input: &QuadInput) -> Result<Vec<ParallelClass>> {
    let t = input.t;
    if !t.is_multiple_of(3) {
        return Err(Error::InvalidParameter(format!("Type 2 needs 3 | t, got t = {t}")));
    }
    input.validate()?;
    let bp3 = input.bp3.as_ref().expect("validated");
    let per: Vec<Vec<ParallelClass>> = bp3.classes.par_iter().map(|r| type2_for_class(r, t)).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

// ---------------------------------------------------------------- Type 3

/// Layer patterns `(a, b, c, d)`: pairs on `a` meet pairs on `b`, and pairs
/// on `c` meet pairs on `d`.
const TYPE3_PATTERNS: [[u32; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// `3(t-1)C(t,2)` classes indexed by pattern, then `i`, `s` in `Z_{t-1}`,
/// then `r` in `0..t/2`. With `skip_t2`, the `t - 1` classes with the first
/// pattern, `i = s` and `r = 0` are left out; Type 1 already covers them.
pub fn type3_even(t: u32, of: &OneFactorization, skip_t2: bool) -> Result<Vec<ParallelClass>> {
    if t % 2 == 1 || of.m() != t {
        return Err(Error::InvalidParameter(format!("type3_even needs even t and a one-factorization of K_{t}, got t = {t}, K_{}", of.m())));
    }
    let f = (t - 1) as usize;
    let half = i64::from(t / 2);
    let mut out = Vec::with_capacity(3 * f * f * half as usize);
    for (pi, &[a, b, c, d]) in TYPE3_PATTERNS.iter().enumerate() {
        for i in 0..f {
            for s in 0..f {
                for r in 0..half {
                    if skip_t2 && pi == 0 && i == s && r == 0 {
                        continue;
                    }
                    let mut blocks = Vec::with_capacity(t as usize);
                    for j in 0..half {
                        let (x, y) = of.pair(i, j);
                        let (z, v) = of.pair(s, j + r);
                        blocks.push(Block::quad([x + a * t, y + a * t, z + b * t, v + b * t]));
                        blocks.push(Block::quad([x + c * t, y + c * t, z + d * t, v + d * t]));
                    }
                    out.push(ParallelClass::from_blocks_unchecked(4 * t, blocks));
                }
            }
        }
    }
    Ok(out)
}

/// Layer pairs served by the generator sets `G1, G2, G3`.
pub const GEN_LAYER_PAIRS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 3), (1, 2)], [(0, 2), (1, 3)]];

/// One class per generator of `g[c]` (`c = 0, 1, 2` in turn): the generator
/// plus, for each of its two layer pairs `(l, l')`, the blocks
/// `F_{y_l, p} x {l}  ∪  F_{y_l', p + r} x {l'}` for `p` in `0..(t-1)/2`, where
/// `r` is the index of this appearance of the pair `(y_l, y_l')` in `g[c]`.
///
/// Members of `skipped[c]` consume appearance indices first (in their own
/// order) but emit no class. Generators are taken in colex order of their
/// flat encoding.
pub fn type3_odd(t: u32, nof: &NearOneFactorization, g: [&[Transversal]; 3], skipped: [&[Transversal]; 3]) -> Result<Vec<ParallelClass>> {
    if t.is_multiple_of(2) || nof.m() != t {
        return Err(Error::InvalidParameter(format!("type3_odd needs odd t and a near-one-factorization of K_{t}, got t = {t}, K_{}", nof.m())));
    }
    let h = (t - 1) / 2;
    let mut jobs: Vec<(Transversal, [usize; 2], usize)> = Vec::new();
    for c in 0..3 {
        for lp in GEN_LAYER_PAIRS[c] {
            match pair_frequency([g[c], skipped[c]], lp, t) {
                Some(f) if f == h as usize => {}
                f => {
                    return Err(Error::InvalidParameter(format!(
                        "generator set G{} has pair frequency {f:?} on layers {lp:?}, expected {h}",
                        c + 1
                    )))
                }
            }
        }
        let mut seen = vec![[0usize; 2]; (t * t) as usize];
        let mut next = |y: Transversal| -> [usize; 2] {
            let mut idx = [0usize; 2];
            for (q, &(l1, l2)) in GEN_LAYER_PAIRS[c].iter().enumerate() {
                let slot = &mut seen[(y.0[l1] * t + y.0[l2]) as usize][q];
                idx[q] = *slot;
                *slot += 1;
            }
            idx
        };
        let mut skip = skipped[c].to_vec();
        skip.sort_unstable_by_key(|&y| colex_key(y));
        for y in skip {
            next(y);
        }
        let mut gens = g[c].to_vec();
        gens.sort_unstable_by_key(|&y| colex_key(y));
        for y in gens {
            jobs.push((y, next(y), c));
        }
    }
    Ok(jobs
        .par_iter()
        .map(|&(y, shift, c)| {
            let mut blocks = Vec::with_capacity(t as usize);
            blocks.push(y.to_block(t));
            for (q, &(l1, l2)) in GEN_LAYER_PAIRS[c].iter().enumerate() {
                let (a, b) = (l1 as u32, l2 as u32);
                for p in 0..i64::from(h) {
                    let (x0, x1) = nof.pair(y.0[l1] as usize, p);
                    let (z0, z1) = nof.pair(y.0[l2] as usize, p + shift[q] as i64);
                    blocks.push(Block::quad([x0 + a * t, x1 + a * t, z0 + b * t, z1 + b * t]));
                }
            }
            ParallelClass::from_blocks_unchecked(4 * t, blocks)
        })
        .collect())
}

// ---------------------------------------------------------------- Type 4

/// Families `M1..M6` as `(P, Q, U, V)`: pairs on `P` or `Q` meet single
/// points on `U` and `V`.
pub const TYPE4_FAMILIES: [[u32; 4]; 6] = [[0, 3, 1, 2], [0, 2, 1, 3], [0, 1, 2, 3], [1, 2, 0, 3], [1, 3, 0, 2], [2, 3, 0, 1]];

/// `6(t-1)t^2` classes, by family, then `(i, j, k)` in `Z_{t-1} x Z_t x Z_t`
/// lexicographically. With `{x, y} = F_{i,r}`, `r` in `0..t/2`, the class has
/// `{(x,P),(y,P),(j+r,U),(k+r,V)}` and `{(x,Q),(y,Q),(j-r-1,U),(k-r-1,V)}`.
pub fn type4_even(t: u32, of: &OneFactorization) -> Result<Vec<ParallelClass>> {
    if t % 2 == 1 || of.m() != t {
        return Err(Error::InvalidParameter(format!("type4_even needs even t and a one-factorization of K_{t}, got t = {t}, K_{}", of.m())));
    }
    let f = i64::from(t - 1);
    let tt = i64::from(t);
    let half = i64::from(t / 2);
    let mut idx = Vec::with_capacity(6 * (f * tt * tt) as usize);
    for fam in TYPE4_FAMILIES {
        for i in 0..f {
            for j in 0..tt {
                for k in 0..tt {
                    idx.push((fam, i, j, k));
                }
            }
        }
    }
    Ok(idx
        .par_iter()
        .map(|&([p, q, u, v], i, j, k)| {
            let mut blocks = Vec::with_capacity(t as usize);
            for r in 0..half {
                let (x, y) = of.pair(i as usize, r);
                blocks.push(Block::quad([x + p * t, y + p * t, pt(j + r, u, t), pt(k + r, v, t)]));
                blocks.push(Block::quad([x + q * t, y + q * t, pt(j - r - 1, u, t), pt(k - r - 1, v, t)]));
            }
            ParallelClass::from_blocks_unchecked(4 * t, blocks)
        })
        .collect())
}

/// One class per generator `X` of `h[c]`, family `M_{c+1}`: `X` plus, for `r`
/// in `0..(t-1)/2`, `F_{x_P,r} x {P} ∪ {(x_U+r+1,U),(x_V+r+1,V)}` and
/// `F_{x_Q,r} x {Q} ∪ {(x_U-r-1,U),(x_V-r-1,V)}`. Generators in colex order.
pub fn type4_odd(t: u32, nof: &NearOneFactorization, h: [&[Transversal]; 6]) -> Result<Vec<ParallelClass>> {
    if t.is_multiple_of(2) || nof.m() != t {
        return Err(Error::InvalidParameter(format!("type4_odd needs odd t and a near-one-factorization of K_{t}, got t = {t}, K_{}", nof.m())));
    }
    let mut jobs = Vec::new();
    for (c, set) in h.iter().enumerate() {
        let [p, q, u, v] = TYPE4_FAMILIES[c].map(|l| l as usize);
        if !unique_triples(set, [p, u, v], t) || !unique_triples(set, [q, u, v], t) {
            return Err(Error::InvalidParameter(format!("H{} lacks the unique-triple property", c + 1)));
        }
        let mut gens = set.to_vec();
        gens.sort_unstable_by_key(|&y| colex_key(y));
        jobs.extend(gens.into_iter().map(|y| (y, TYPE4_FAMILIES[c])));
    }
    let half = i64::from((t - 1) / 2);
    Ok(jobs
        .par_iter()
        .map(|&(y, [p, q, u, v])| {
            let at = |l: u32| i64::from(y.0[l as usize]);
            let mut blocks = Vec::with_capacity(t as usize);
            blocks.push(y.to_block(t));
            for r in 0..half {
                let (a, b) = nof.pair(at(p) as usize, r);
                blocks.push(Block::quad([a + p * t, b + p * t, pt(at(u) + r + 1, u, t), pt(at(v) + r + 1, v, t)]));
                let (a, b) = nof.pair(at(q) as usize, r);
                blocks.push(Block::quad([a + q * t, b + q * t, pt(at(u) - r - 1, u, t), pt(at(v) - r - 1, v, t)]));
            }
            ParallelClass::from_blocks_unchecked(4 * t, blocks)
        })
        .collect())
}

// ---------------------------------------------------------------- Type 5

fn orbit_class(key: OrbitKey, t: u32) -> ParallelClass {
    let blocks = translate_a(key.base(t), t).into_iter().map(|y| y.to_block(t)).collect();
    ParallelClass::from_blocks_unchecked(4 * t, blocks)
}

/// Classes `X + A`, ordered by the `(d, c, b)` coordinates of `X`. Even `t`:
/// all `t^3`. Odd `t`: the orbits in the last part of `sets`, minus `A` itself
/// when `t = 1 (mod 4)`, plus the orbits `S2, S3, S4` of the primed variant.
pub fn type5_classes(t: u32, sets: Option<&LSets>) -> Result<Vec<ParallelClass>> {
    let keys: Vec<OrbitKey> = match (t % 2, sets) {
        (0, _) => all_keys(t).collect(),
        (_, Some(l)) if l.t == t => {
            let s_keys: Vec<OrbitKey> = l.s.iter().filter_map(|s| s.first()).map(|&y| OrbitKey::of(y, t)).collect();
            let zero = OrbitKey { b: 0, c: 0, d: 0 };
            all_keys(t)
                .filter(|&k| {
                    let in_last = classify(k, t, l.variant) == 4 && !(t % 4 == 1 && k == zero);
                    in_last || s_keys.contains(&k)
                })
                .collect()
        }
        _ => return Err(Error::InvalidParameter(format!("odd t = {t} needs its L-sets for Type 5"))),
    };
    Ok(keys.into_par_iter().map(|k| orbit_class(k, t)).collect())
}

// ---------------------------------------------------------------- assembly

/// Per-type class counts emitted by [`quadruple_bp`] for Cases 1, 2, 4 and 6.
pub fn type_counts(t: u32) -> Option<[u64; 5]> {
    let u = u64::from(t);
    let c2 = |x| binomial(x, 2);
    let c3 = |x| binomial(x, 3);
    let v = match case_of(t).ok()? {
        1 => [c3(u - 1), 4 * u * c2(u - 1), 3 * (u - 1) * c2(u), 6 * (u - 1) * u * u, u * u * u],
        2 => [c3(u), (4 * u - 1) * c2(u - 1), 3 * u * c2(u), 6 * u * u * u, u * u * u - 3 * c2(u) - 6 * u * u],
        4 => [c3(u + 1), (4 * u - 2) * c2(u - 1), 3 * (u - 1) * c2(u) - (u - 1), 6 * (u - 1) * u * u, u * u * u],
        6 => [c3(u + 2), (4 * u - 3) * c2(u - 1), 3 * u * c2(u) - 3 * u, 6 * u * u * u, u * u * u - 3 * c2(u) - 6 * u * u + 2],
        _ => return None,
    };
    Some(v)
}

/// BP(4t, 4) in type order 1 to 5. For `t = 4, 8 (mod 12)` the result is
/// the doubling chain BP(t) -> BP(2t) -> BP(4t), returned unchanged.
pub fn quadruple_bp(input: &QuadInput) -> Result<Design> {
    input.validate()?;
    let t = input.t;
    let case = case_of(t)?;
    if matches!(case, 3 | 5) {
        let (r1, r2) = input
            .rsqs
            .clone()
            .ok_or_else(|| Error::InvalidParameter(format!("t = {t} needs RSQS({t}) and RSQS({})", 2 * t)))?;
        let mid = double(&DoublingInput { bp: input.bp4.clone(), rsqs: r1, of: one_factorization(t)? })?;
        return double(&DoublingInput { bp: mid, rsqs: r2, of: one_factorization(2 * t)? });
    }
    let mut classes = type1_classes(input)?;
    classes.extend(type2_classes(input)?);
    match case {
        1 | 4 => {
            let of = one_factorization(t)?;
            classes.extend(type3_even(t, &of, case == 4)?);
            classes.extend(type4_even(t, &of)?);
            classes.extend(type5_classes(t, None)?);
        }
        _ => {
            let nof = near_one_factorization(t)?;
            let l = if case == 2 { build_l_sets(t)? } else { build_lprime_sets(t)? };
            let skipped: [&[Transversal]; 3] = if case == 6 { [&l.s[0], &l.s[1], &l.s[2]] } else { [&[]; 3] };
            let g: Vec<Vec<Transversal>> = (0..3)
                .map(|c| l.parts[c + 1].iter().copied().filter(|y| !skipped[c].contains(y)).collect())
                .collect();
            classes.extend(type3_odd(t, &nof, [&g[0], &g[1], &g[2]], skipped)?);
            let h = [&l.h[0][..], &l.h[1][..], &l.h[2][..], &l.h[3][..], &l.h[4][..], &l.h[5][..]];
            classes.extend(type4_odd(t, &nof, h)?);
            classes.extend(type5_classes(t, Some(&l))?);
        }
    }
    let expected = binomial(4 * u64::from(t) - 1, 3);
    if classes.len() as u64 != expected {
        return Err(Error::Verification(format!("assembled {} classes for t = {t}, expected C({},3) = {expected}", classes.len(), 4 * t - 1)));
    }
    Ok(Design::new(DesignKind::Bp, 4 * t, 4, classes, format!("quadrupling-t{t}-case{case}")))
}
