//! Certification of parallel classes and designs.
//!
//! Coverage is checked with a bitset over colex ranks. Classes are split into
//! chunks that fill private bitsets in parallel; merging ORs them and records
//! every rank set on both sides, so a rank hit twice is always detected. A
//! second pass over the blocks counts multiplicities for the reported ranks.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::block::{Block, Design, DesignKind, ParallelClass, Point};
use crate::combin::{binomial, unrank_block, BinomialTable};
use crate::config::group_of_block;

/// Defect lists in a report are truncated to this many entries; counts are exact.
pub const MAX_LISTED: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassIssue {
    WrongCount { got: usize, expected: usize },
    WrongBlockSize { block: Block, expected: usize },
    PointOutOfRange(Point),
    DuplicatePoint(Point),
    MissingPoint(Point),
}

impl fmt::Display for ClassIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassIssue::WrongCount { got, expected } => write!(f, "block count {got} != {expected}"),
            ClassIssue::WrongBlockSize { block, expected } => write!(f, "block {block:?} has size {} != {expected}", block.len()),
            ClassIssue::PointOutOfRange(p) => write!(f, "point {p} out of range"),
            ClassIssue::DuplicatePoint(p) => write!(f, "point {p} duplicated"),
            ClassIssue::MissingPoint(p) => write!(f, "point {p} missing"),
        }
    }
}

/// Every way a block list fails to be a parallel class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassViolation {
    pub issues: Vec<ClassIssue>,
}

impl fmt::Display for ClassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ClassViolation {}

/// Partition check with the block size taken from the first block.
pub fn verify_class_blocks(blocks: &[Block], n: u32) -> Result<(), ClassViolation> {
    let k = blocks.first().map_or(0, Block::len);
    check_partition(blocks, n, k, 0)
}

/// Confirms `c` is a parallel class of `k`-blocks on `[0, n)`.
pub fn verify_class(c: &ParallelClass, n: u32, k: usize) -> Result<(), ClassViolation> {
    check_partition(c.blocks(), n, k, 0)
}

/// `isolated` points may be left uncovered (1 for near-one-factors).
fn check_partition(blocks: &[Block], n: u32, k: usize, isolated: usize) -> Result<(), ClassViolation> {
    let mut issues = Vec::new();
    let expected = (n as usize - isolated).checked_div(k).unwrap_or(0);
    if blocks.len() != expected || k == 0 {
        issues.push(ClassIssue::WrongCount { got: blocks.len(), expected });
    }
    let mut seen = vec![0u8; n as usize];
    for b in blocks {
        if b.len() != k {
            issues.push(ClassIssue::WrongBlockSize { block: *b, expected: k });
        }
        for &p in b.points() {
            match seen.get_mut(p as usize) {
                None => issues.push(ClassIssue::PointOutOfRange(p)),
                Some(s) => {
                    if *s == 1 {
                        issues.push(ClassIssue::DuplicatePoint(p));
                    }
                    *s = s.saturating_add(1);
                }
            }
        }
    }
    let missing: Vec<Point> = (0..n).filter(|&p| seen[p as usize] == 0).collect();
    if missing.len() != isolated {
        issues.extend(missing.into_iter().map(ClassIssue::MissingPoint));
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(ClassViolation { issues })
    }
}

/// Class tallies by type; `labels`, `counts` and `expected` are parallel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub kind: CensusKind,
    pub counts: Vec<u64>,
    pub expected: Option<Vec<u64>>,
    /// Classes matching no type signature.
    pub unclassified: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CensusKind {
    /// Types 1-5 of a design on `Z_t x Z_4`.
    Quadrupling { t: u32 },
    /// Types S, T, F of a design on `Z_t x Z_2`.
    Doubling { t: u32 },
}

impl Census {
    pub fn labels(&self) -> &'static [&'static str] {
        match self.kind {
            CensusKind::Quadrupling { .. } => &["TYPE1", "TYPE2", "TYPE3", "TYPE4", "TYPE5"],
            CensusKind::Doubling { .. } => &["S", "T", "F"],
        }
    }

    pub fn matches(&self) -> bool {
        self.unclassified == 0 && self.expected.as_ref().is_none_or(|e| *e == self.counts)
    }
}

/// Exactly-once coverage certificate for a design.
#[derive(Clone, Debug, Default)]
pub struct CoverageReport {
    pub n: u32,
    pub k: usize,
    /// Size of the covered subsets: `k` for partitions, 3 for Steiner systems.
    pub strength: usize,
    pub classes: u64,
    pub expected_classes: Option<u64>,
    pub subsets: u64,
    pub covered: u64,
    pub missing_count: u64,
    pub missing: Vec<Block>,
    pub duplicated_count: u64,
    pub duplicated: Vec<(Block, u32)>,
    pub class_errors: Vec<(usize, ClassViolation)>,
    pub census: Option<Census>,
}

impl CoverageReport {
    pub fn ok(&self) -> bool {
        self.class_errors.is_empty()
            && self.missing_count == 0
            && self.duplicated_count == 0
            && self.expected_classes.is_none_or(|e| e == self.classes)
            && self.census.as_ref().is_none_or(Census::matches)
    }

    /// Line-oriented `KEY=VALUE` rendering; defect lines are truncated at
    /// [`MAX_LISTED`] but the counts above them are exact.
    pub fn to_kv(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "OK={}", self.ok());
        let _ = writeln!(s, "N={}", self.n);
        let _ = writeln!(s, "K={}", self.k);
        let _ = writeln!(s, "STRENGTH={}", self.strength);
        let _ = writeln!(s, "CLASSES={}", self.classes);
        if let Some(e) = self.expected_classes {
            let _ = writeln!(s, "EXPECTED_CLASSES={e}");
        }
        let _ = writeln!(s, "SUBSETS={}", self.subsets);
        let _ = writeln!(s, "COVERED={}", self.covered);
        let _ = writeln!(s, "MISSING={}", self.missing_count);
        let _ = writeln!(s, "DUPLICATED={}", self.duplicated_count);
        let _ = writeln!(s, "CLASS_ERRORS={}", self.class_errors.len());
        if let Some(c) = &self.census {
            let kind = match c.kind {
                CensusKind::Quadrupling { t } => format!("quadrupling t={t}"),
                CensusKind::Doubling { t } => format!("doubling t={t}"),
            };
            let _ = writeln!(s, "CENSUS_KIND={kind}");
            for (label, v) in c.labels().iter().zip(&c.counts) {
                let _ = writeln!(s, "CENSUS_{label}={v}");
            }
            if let Some(e) = &c.expected {
                for (label, v) in c.labels().iter().zip(e) {
                    let _ = writeln!(s, "CENSUS_EXPECTED_{label}={v}");
                }
            }
            let _ = writeln!(s, "CENSUS_UNCLASSIFIED={}", c.unclassified);
            let _ = writeln!(s, "CENSUS_OK={}", c.matches());
        }
        for b in &self.missing {
            let _ = writeln!(s, "MISSING_SUBSET={b}");
        }
        for (b, m) in &self.duplicated {
            let _ = writeln!(s, "DUPLICATE_SUBSET={b} x{m}");
        }
        for (i, v) in self.class_errors.iter().take(MAX_LISTED) {
            let _ = writeln!(s, "CLASS_ERROR={i}: {v}");
        }
        s
    }
}

/// Certifies a BP(n, k): every class a partition, every k-subset covered
/// once, `C(n-1, k-1)` classes.
pub fn verify_bp(d: &Design, n: u32, k: usize) -> CoverageReport {
    let expected = if k > 0 && (n as usize).is_multiple_of(k) { Some(binomial(u64::from(n) - 1, k as u64 - 1)) } else { None };
    coverage(&d.classes, n, k, k, 0, expected)
}

/// Certifies a resolved SQS(v): parallel classes of quadruples, every triple
/// in exactly one block, `(v-1)(v-2)/6` classes.
pub fn verify_rsqs(d: &Design) -> CoverageReport {
    let v = u64::from(d.n);
    let expected = if v >= 4 { Some((v - 1) * (v - 2) / 6) } else { None };
    coverage(&d.classes, d.n, 4, 3, 0, expected)
}

/// Dispatches on the design kind.
pub fn verify_design(d: &Design) -> CoverageReport {
    match d.kind {
        DesignKind::Bp => verify_bp(d, d.n, d.k),
        DesignKind::Rsqs => verify_rsqs(d),
        DesignKind::Of => verify_bp(d, d.n, 2),
        DesignKind::Nof => coverage(&d.classes, d.n, 2, 2, 1, Some(u64::from(d.n))),
    }
}

/// The census a construction provenance implies (`doubling-t<T>` or
/// `quadrupling-t<T>-case<C>`), with its expected vector filled in.
pub fn census_from_provenance(d: &Design) -> Option<Census> {
    let p = d.provenance.as_str();
    if let Some(rest) = p.strip_prefix("doubling-t") {
        let t: u32 = rest.parse().ok()?;
        (d.n == 2 * t).then(|| Census { expected: Some(expected_doubling_census(t)), ..doubling_census(d, t) })
    } else if let Some(rest) = p.strip_prefix("quadrupling-t") {
        let t: u32 = rest.split('-').next()?.parse().ok()?;
        (d.n == 4 * t).then(|| Census { expected: expected_type_census(t), ..type_census(d, t) })
    } else {
        None
    }
}

/// [`verify_design`] plus the provenance census; `ok()` then also requires
/// the census to match.
pub fn verify_with_census(d: &Design) -> CoverageReport {
    let mut r = verify_design(d);
    r.census = census_from_provenance(d);
    r
}

fn coverage(
    classes: &[ParallelClass],
    n: u32,
    k: usize,
    strength: usize,
    isolated: usize,
    expected_classes: Option<u64>,
) -> CoverageReport {
    let mut report = CoverageReport {
        n,
        k,
        strength,
        classes: classes.len() as u64,
        expected_classes,
        subsets: binomial(n.into(), strength as u64),
        ..Default::default()
    };

    report.class_errors = classes
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| check_partition(c.blocks(), n, k, isolated).err().map(|v| (i, v)))
        .collect();

    let table = BinomialTable::new(n as usize, strength);
    let words = report.subsets.div_ceil(64) as usize;
    let chunk = classes.len().div_ceil(4 * rayon::current_num_threads()).max(1);
    let (bits, mut dups) = classes
        .par_chunks(chunk)
        .map(|chunk| {
            let mut bits = vec![0u64; words];
            let mut dups = Vec::new();
            for c in chunk {
                for b in c.blocks() {
                    for_each_subset(b, strength, n, |r| {
                        let (w, m) = ((r / 64) as usize, 1u64 << (r % 64));
                        if bits[w] & m != 0 {
                            dups.push(r);
                        }
                        bits[w] |= m;
                    }, &table);
                }
            }
            (bits, dups)
        })
        .reduce(
            || (vec![0u64; words], Vec::new()),
            |(mut a, mut da), (b, db)| {
                da.extend(db);
                for (w, (x, y)) in a.iter_mut().zip(&b).enumerate() {
                    let mut both = *x & *y;
                    while both != 0 {
                        da.push(w as u64 * 64 + u64::from(both.trailing_zeros()));
                        both &= both - 1;
                    }
                    *x |= *y;
                }
                (a, da)
            },
        );

    report.covered = bits.iter().map(|w| u64::from(w.count_ones())).sum();
    report.missing_count = report.subsets - report.covered;
    if report.missing_count > 0 {
        'scan: for (w, &word) in bits.iter().enumerate() {
            let mut free = !word;
            while free != 0 {
                let r = w as u64 * 64 + u64::from(free.trailing_zeros());
                if r >= report.subsets || report.missing.len() >= MAX_LISTED {
                    break 'scan;
                }
                report.missing.push(unrank_block(r, n, strength).expect("rank below C(n, s)"));
                free &= free - 1;
            }
        }
    }

    dups.sort_unstable();
    dups.dedup();
    report.duplicated_count = dups.len() as u64;
    if !dups.is_empty() {
        dups.truncate(MAX_LISTED);
        let mut mult: BTreeMap<u64, u32> = dups.iter().map(|&r| (r, 0)).collect();
        for c in classes {
            for b in c.blocks() {
                for_each_subset(b, strength, n, |r| {
                    if let Some(m) = mult.get_mut(&r) {
                        *m += 1;
                    }
                }, &table);
            }
        }
        report.duplicated = mult
            .into_iter()
            .map(|(r, m)| (unrank_block(r, n, strength).expect("rank below C(n, s)"), m))
            .collect();
    }
    report
}

/// Calls `f` with the colex rank of every `strength`-subset of `b`; blocks of
/// the wrong size or with points outside `[0, n)` are skipped, since the class
/// check already reports them.
#[inline]
fn for_each_subset(b: &Block, strength: usize, n: u32, mut f: impl FnMut(u64), table: &BinomialTable) {
    let pts = b.points();
    if pts.len() < strength || pts.iter().any(|&p| p >= n) {
        return;
    }
    if pts.len() == strength {
        f(table.rank(b));
        return;
    }
    debug_assert!(pts.len() == 4 && strength == 3);
    for skip in 0..4 {
        let mut r = 0;
        let mut j = 1;
        for (i, &p) in pts.iter().enumerate() {
            if i != skip {
                r += table.get(p as usize, j);
                j += 1;
            }
        }
        f(r);
    }
}

/// Group multiset of a class on `Z_t x Z_4`: index `g - 1` counts Group `g`.
pub fn group_multiset(c: &ParallelClass, t: u32) -> [u32; 5] {
    let mut g = [0u32; 5];
    for b in c.blocks() {
        g[group_of_block(b, t).index()] += 1;
    }
    g
}

/// Type of a quadrupling class read off its group multiset: any Group 1
/// means Type 1; otherwise Group 3 means Type 3 and Group 4 means Type 4;
/// pure Group 2 is Type 2 and pure Group 5 is Type 5.
pub fn classify_type(g: [u32; 5]) -> Option<usize> {
    let total: u32 = g.iter().sum();
    if g[0] > 0 {
        Some(1)
    } else if g[2] > 0 && g[3] == 0 && g[1] == 0 {
        Some(3)
    } else if g[3] > 0 && g[2] == 0 && g[1] == 0 {
        Some(4)
    } else if g[1] == total {
        Some(2)
    } else if g[4] == total {
        Some(5)
    } else {
        None
    }
}

/// Per-type class counts of a BP(4t, 4) on `Z_t x Z_4`.
pub fn type_census(d: &Design, t: u32) -> Census {
    let mut counts = vec![0u64; 5];
    let mut unclassified = 0;
    for c in &d.classes {
        match classify_type(group_multiset(c, t)) {
            Some(ty) => counts[ty - 1] += 1,
            None => unclassified += 1,
        }
    }
    Census { kind: CensusKind::Quadrupling { t }, counts, expected: None, unclassified }
}

/// Per-type (S, T, F) class counts of a BP(2t, 4) on `Z_t x Z_2`, by the
/// number of distinct first coordinates in each block.
pub fn doubling_census(d: &Design, t: u32) -> Census {
    let mut counts = vec![0u64; 3];
    let mut unclassified = 0;
    for c in &d.classes {
        let distinct = |b: &Block| {
            let mut xs: Vec<u32> = b.points().iter().map(|p| p % t).collect();
            xs.sort_unstable();
            xs.dedup();
            xs.len()
        };
        let first = c.blocks().first().map_or(0, distinct);
        if (2..=4).contains(&first) && c.blocks().iter().all(|b| distinct(b) == first) {
            counts[4 - first] += 1;
        } else {
            unclassified += 1;
        }
    }
    Census { kind: CensusKind::Doubling { t }, counts, expected: None, unclassified }
}

/// Expected (S, T, F) counts for a doubled design: `8C(t-1,3)`,
/// `4(t-1)(t-2)`, `t-1`.
pub fn expected_doubling_census(t: u32) -> Vec<u64> {
    let t = u64::from(t);
    vec![8 * binomial(t - 1, 3), 4 * (t - 1) * (t - 2), t - 1]
}

/// Expected Type 1-5 counts of the quadrupling output for `t`, as seen by
/// [`classify_type`]. `None` for residues built by doubling or unsupported.
///
/// At `t = 6` the Type 1 classes that hold six Group 2 quadruples and no
/// Group 1 quadruple are indistinguishable from Type 2 by signature, so
/// their `C(t,3)` classes are counted there.
pub fn expected_type_census(t: u32) -> Option<Vec<u64>> {
    let u = u64::from(t);
    let c2 = |x: u64| binomial(x, 2);
    let c3 = |x: u64| binomial(x, 3);
    let mut v = match t % 12 {
        0 => vec![c3(u - 1), 2 * u * (u - 1) * (u - 2), 3 * (u - 1) * c2(u), 6 * (u - 1) * u * u, u * u * u],
        3 if t >= 15 => vec![c3(u), (4 * u - 1) * c2(u - 1), 3 * u * c2(u), 6 * u * u * u, u * u * u - 3 * c2(u) - 6 * u * u],
        6 => vec![c3(u + 1), (2 * u - 1) * (u - 1) * (u - 2), 3 * (u - 1) * c2(u) - (u - 1), 6 * (u - 1) * u * u, u * u * u],
        9 if t >= 21 => vec![
            c3(u + 2),
            (4 * u - 3) * c2(u - 1),
            3 * u * c2(u) - 3 * u,
            6 * u * u * u,
            u * u * u - 1 - 3 * c2(u) + 3 - 6 * u * u,
        ],
        _ => return None,
    };
    if t == 6 {
        v[0] -= c3(u);
        v[1] += c3(u);
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(pts: &[&[u32]]) -> Vec<Block> {
        pts.iter().map(|b| Block::new(b).unwrap()).collect()
    }

    #[test]
    fn class_examples() {
        assert!(verify_class_blocks(&blocks(&[&[0, 1, 2, 3], &[4, 5, 6, 7]]), 8).is_ok());
        let v = verify_class_blocks(&blocks(&[&[0, 1, 2, 3], &[3, 4, 5, 6]]), 8).unwrap_err();
        assert!(v.issues.contains(&ClassIssue::DuplicatePoint(3)));
        assert!(v.issues.contains(&ClassIssue::MissingPoint(7)));
        let v = verify_class_blocks(&blocks(&[&[0, 1, 2, 3]]), 8).unwrap_err();
        assert!(v.issues.contains(&ClassIssue::WrongCount { got: 1, expected: 2 }));
        let v = verify_class_blocks(&blocks(&[&[0, 1, 2, 3], &[4, 5, 6, 9]]), 8).unwrap_err();
        assert!(v.issues.contains(&ClassIssue::PointOutOfRange(9)));
    }

    #[test]
    fn coverage_detects_missing_and_duplicates() {
        // K_4 as a one-factorization, then damaged.
        let of = crate::factor::one_factorization(4).unwrap().to_design();
        let r = verify_bp(&of, 4, 2);
        assert!(r.ok(), "{}", r.to_kv());
        assert_eq!(r.covered, 6);

        let mut short = of.clone();
        short.classes.pop();
        let r = verify_bp(&short, 4, 2);
        assert!(!r.ok());
        assert_eq!(r.missing_count, 2);

        let mut dup = of.clone();
        let first = dup.classes[0].clone();
        dup.classes.push(first);
        let r = verify_bp(&dup, 4, 2);
        assert_eq!(r.duplicated_count, 2);
        assert!(r.duplicated.iter().all(|&(_, m)| m == 2));
        assert!(r.to_kv().contains("DUPLICATED=2"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_type([12, 0, 0, 0, 0]), Some(1));
        assert_eq!(classify_type([0, 12, 0, 0, 0]), Some(2));
        assert_eq!(classify_type([0, 0, 14, 0, 1]), Some(3));
        assert_eq!(classify_type([0, 0, 0, 14, 1]), Some(4));
        assert_eq!(classify_type([0, 0, 0, 0, 15]), Some(5));
        assert_eq!(classify_type([0, 1, 1, 0, 0]), None);
    }

    #[test]
    fn expected_census_sums_to_class_count() {
        for t in [6u32, 12, 15, 21, 24, 27, 33] {
            let v = expected_type_census(t).unwrap();
            assert_eq!(v.iter().sum::<u64>(), binomial(4 * u64::from(t) - 1, 3), "t = {t}");
        }
        for t in [4u32, 8, 16, 32, 64] {
            let v = expected_doubling_census(t);
            assert_eq!(v.iter().sum::<u64>(), binomial(2 * u64::from(t) - 1, 3), "t = {t}");
        }
        assert_eq!(expected_type_census(12).unwrap(), vec![165, 2640, 2178, 9504, 1728]);
        assert_eq!(expected_type_census(15).unwrap(), vec![455, 5369, 4725, 20250, 1710]);
        assert!(expected_type_census(16).is_none());
    }
}
