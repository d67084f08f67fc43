//! Small designs the recursions start from: BP(4,4), BP(8,4), BP(12,4),
//! BP(m,3) and resolved SQS(8), SQS(16).
//!
//! Closed-form seeds (trivial and complement designs) are built on demand.
//! Searched seeds ship in `data/` with a SHA-256 sidecar and are re-verified
//! on every load; anything else comes from the on-disk cache or a fresh
//! exact-cover search whose result is cached.
//!
//! Searched classes are listed in canonical order: ascending colex rank of the
//! block containing point 0.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::block::{Block, Design, DesignKind, ParallelClass};
use crate::combin::{binomial, rank_block, unrank_block};
use crate::dlx::ExactCoverInstance;
use crate::error::{Error, Result};
use crate::factor::one_factorization;
use crate::format::{parse_design, serialize};
use crate::rsqs::{AffineRsqs, RsqsProvider};
use crate::verify::verify_design;

/// Default wall-clock budget for one search instance.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(600);

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "BARANYAI_CACHE";

/// A searched seed compiled into the library.
pub struct Embedded {
    pub kind: DesignKind,
    pub n: u32,
    pub k: usize,
    pub text: &'static str,
    pub sha256: &'static str,
}

macro_rules! embedded {
    ($kind:expr, $n:expr, $k:expr, $file:literal) => {
        Embedded {
            kind: $kind,
            n: $n,
            k: $k,
            text: include_str!(concat!("../data/", $file, ".design")),
            sha256: include_str!(concat!("../data/", $file, ".sha")),
        }
    };
}

pub static EMBEDDED: &[Embedded] = &[
    embedded!(DesignKind::Rsqs, 8, 4, "rsqs_8_4"),
    embedded!(DesignKind::Rsqs, 16, 4, "rsqs_16_4"),
    embedded!(DesignKind::Bp, 12, 4, "bp_12_4"),
    embedded!(DesignKind::Bp, 12, 3, "bp_12_3"),
    embedded!(DesignKind::Bp, 15, 3, "bp_15_3"),
    embedded!(DesignKind::Bp, 21, 3, "bp_21_3"),
];

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Orders classes by the colex rank of their block through point 0.
pub fn canonical_order(classes: &mut [ParallelClass]) {
    classes.sort_by_cached_key(|c| c.blocks().first().map(|b| rank_block(b, c.n()).unwrap_or(u64::MAX)));
}

/// Fails unless `d` is a complete, exactly-once design of its kind.
pub fn certify(d: &Design) -> Result<()> {
    let report = verify_design(d);
    if report.ok() {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "{} design n={} k={} ({}) failed: {} missing, {} duplicated, {} class errors, {} classes of {:?}",
            d.kind.tag(),
            d.n,
            d.k,
            d.provenance,
            report.missing_count,
            report.duplicated_count,
            report.class_errors.len(),
            report.classes,
            report.expected_classes
        )))
    }
}

/// The 35 classes `{X, Z_8 \ X}`.
pub fn bp_8_4() -> Design {
    bp_small_complement(8, 4).expect("8 = 2 * 4")
}

/// BP(n, k) for `n = k` (one class) or `n = 2k` (complement pairs).
pub fn bp_small_complement(n: u32, k: usize) -> Result<Design> {
    let all = (1u32 << n) - 1;
    if n as usize == k {
        let c = ParallelClass::new(n, vec![Block::new(&(0..n).collect::<Vec<_>>())?])?;
        return Ok(Design::new(DesignKind::Bp, n, k, vec![c], format!("bp-{n}-{k}-trivial")));
    }
    if n as usize != 2 * k || !(2..=4).contains(&k) {
        return Err(Error::Unsupported(format!("no closed-form BP({n},{k})")));
    }
    // each block through 0 pairs with its complement; rank order is colex
    let total = binomial(u64::from(n), k as u64);
    let mut classes = Vec::new();
    for r in 0..total {
        let b = unrank_block(r, n, k)?;
        if b.min_point() != 0 {
            continue;
        }
        let mask = b.points().iter().fold(0u32, |m, &p| m | 1 << p);
        let rest: Vec<u32> = (0..n).filter(|p| (all & !mask) >> p & 1 == 1).collect();
        classes.push(ParallelClass::new(n, vec![b, Block::new(&rest)?])?);
    }
    Ok(Design::new(DesignKind::Bp, n, k, classes, format!("bp-{n}-{k}-complement")))
}

fn mask_of(b: &Block) -> u64 {
    b.points().iter().fold(0, |m, &p| m | 1 << p)
}

/// Every parallel class that can be formed from `blocks` on `[0, n)`.
pub fn enumerate_classes(blocks: &[Block], n: u32) -> Result<Vec<Vec<usize>>> {
    if n > 64 {
        return Err(Error::Unsupported(format!("class enumeration limited to n <= 64, got {n}")));
    }
    let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); n as usize];
    for (i, b) in blocks.iter().enumerate() {
        by_min[b.min_point() as usize].push(i);
    }
    let masks: Vec<u64> = blocks.iter().map(mask_of).collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(covered: u64, full: u64, by_min: &[Vec<usize>], masks: &[u64], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if covered == full {
            out.push(chosen.clone());
            return;
        }
        let p = (!covered).trailing_zeros() as usize;
        for &i in &by_min[p] {
            if masks[i] & covered == 0 {
                chosen.push(i);
                rec(covered | masks[i], full, by_min, masks, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(0, full, &by_min, &masks, &mut chosen, &mut out);
    Ok(out)
}

/// Partitions `blocks` into parallel classes: one exact-cover item per block,
/// one candidate per parallel class the blocks admit.
pub fn exact_cover_resolve(blocks: &[Block], n: u32, k: usize, budget: Duration) -> Result<Vec<ParallelClass>> {
    if k == 0 || !(n as usize).is_multiple_of(k) || blocks.iter().any(|b| b.len() != k) {
        return Err(Error::InvalidParameter(format!("blocks must all have size k = {k} dividing n = {n}")));
    }
    let classes = enumerate_classes(blocks, n)?;
    let mut inst = ExactCoverInstance::new(blocks.len());
    for c in &classes {
        inst.push(c.clone());
    }
    let chosen = inst.solve(budget)?;
    let mut out: Vec<ParallelClass> = chosen
        .into_iter()
        .map(|r| ParallelClass::from_blocks_unchecked(n, classes[r].iter().map(|&i| blocks[i]).collect()))
        .collect();
    canonical_order(&mut out);
    Ok(out)
}

/// SQS(8): quadruples of 3-bit labels with zero XOR.
pub fn sqs8_blocks() -> Vec<Block> {
    quads_below(8).filter(|q| q.iter().fold(0, |a, &x| a ^ x) == 0).map(Block::quad).collect()
}

fn quads_below(n: u32) -> impl Iterator<Item = [u32; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
    })
}

/// SQS(16) doubled from SQS(8): each layer carries a copy of SQS(8), and for
/// every one-factor `F` of `K_8` and pairs `{a,b}, {c,d}` of `F` there is a
/// cross block `{a, b, c+8, d+8}`.
pub fn sqs16_doubled_blocks() -> Vec<Block> {
    let base = sqs8_blocks();
    let mut out: Vec<Block> = base.iter().copied().chain(base.iter().map(|b| b.map(|p| p + 8).expect("shift"))).collect();
    let of = one_factorization(8).expect("8 is even");
    for f in of.factors() {
        for &(a, b) in f {
            for &(c, d) in f {
                out.push(Block::quad([a, b, c + 8, d + 8]));
            }
        }
    }
    out
}

/// Resolved SQS(v) for `v` in {4, 8, 16}. SQS(16) falls back to the planes of
/// AG(4,2) if the doubled block set admits no resolution within budget.
pub fn resolvable_sqs(v: u32, budget: Duration) -> Result<Design> {
    let (classes, provenance) = match v {
        4 => (vec![ParallelClass::new(4, vec![Block::quad([0, 1, 2, 3])])?], "rsqs-4-trivial".to_string()),
        8 => (exact_cover_resolve(&sqs8_blocks(), 8, 4, budget)?, "rsqs-8-xor-dlx".to_string()),
        16 => match exact_cover_resolve(&sqs16_doubled_blocks(), 16, 4, budget) {
            Ok(c) => (c, "rsqs-16-doubled-dlx".to_string()),
            Err(Error::Infeasible(_)) | Err(Error::SearchTimeout { .. }) => {
                let mut c = AffineRsqs::new(16)?.to_design().classes;
                canonical_order(&mut c);
                (c, "rsqs-16-affine-fallback".to_string())
            }
            Err(e) => return Err(e),
        },
        _ => return Err(Error::Unsupported(format!("resolvable SQS({v}) is seeded only for v = 4, 8, 16"))),
    };
    let d = Design::new(DesignKind::Rsqs, v, 4, classes, provenance);
    certify(&d)?;
    Ok(d)
}

/// Orbit search for BP(n, k) under translation.
///
/// Points are `Z_m` or `Z_m` plus a fixed point `m` standing for infinity.
/// Short orbits must each form a parallel class on their own; the full orbits
/// are split among base classes ("slots"), and each base class contributes
/// its `m` translates.
#[derive(Clone, Debug)]
pub struct CyclicPlan {
    pub n: u32,
    pub k: usize,
    pub modulus: u32,
    pub infinity: bool,
    full: Vec<Block>,
    fixed: Vec<ParallelClass>,
    slots: usize,
}

impl CyclicPlan {
    /// The plan for BP(n, k): `Z_{n-1}` plus infinity when every orbit there
    /// is full, otherwise `Z_n`. `None` if neither works.
    pub fn for_bp(n: u32, k: usize) -> Option<Self> {
        Self::build(n, k, true).or_else(|| Self::build(n, k, false))
    }

    pub fn build(n: u32, k: usize, infinity: bool) -> Option<Self> {
        if k < 2 || !(n as usize).is_multiple_of(k) || n > 64 || n as usize <= k {
            return None;
        }
        let m = if infinity { n - 1 } else { n };
        let per = n as usize / k;
        let mut full = Vec::new();
        let mut fixed = Vec::new();
        for r in 0..binomial(u64::from(n), k as u64) {
            let b = unrank_block(r, n, k).ok()?;
            let orbit: Vec<Block> = (0..m).map(|tau| translate(&b, tau, m)).collect();
            let min = orbit.iter().map(|x| rank_block(x, n).expect("in range")).min()?;
            if min != r {
                continue;
            }
            let mut distinct = orbit.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() == m as usize {
                full.push(b);
            } else if infinity || distinct.len() != per {
                return None;
            } else {
                fixed.push(ParallelClass::new(n, distinct).ok()?);
            }
        }
        if full.len() % per != 0 {
            return None;
        }
        let slots = full.len() / per;
        let expected = binomial(u64::from(n) - 1, k as u64 - 1);
        (slots as u64 * u64::from(m) + fixed.len() as u64 == expected).then_some(CyclicPlan {
            n,
            k,
            modulus: m,
            infinity,
            full,
            fixed,
            slots,
        })
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn orbit_count(&self) -> usize {
        self.full.len()
    }

    /// Exact cover instance: items are the full orbits then (slot, point);
    /// a candidate puts one translate of an orbit into one slot.
    fn instance(&self) -> (ExactCoverInstance, Vec<(usize, Block)>) {
        let (n, m) = (self.n as usize, self.modulus);
        let orbits = self.full.len();
        let mut inst = ExactCoverInstance::new(orbits + self.slots * n);
        let mut meaning = Vec::new();
        let inf = self.n - 1;
        let inf_orbits: Vec<usize> = if self.infinity {
            (0..orbits).filter(|&o| self.full[o].contains(inf)).collect()
        } else {
            Vec::new()
        };
        for s in 0..self.slots {
            // infinity: slot s holds infinity-orbit s untranslated, which
            // fixes both slot order and translation
            let anchor = inf_orbits.get(s).map(|&o| (o, self.full[o]));
            for (o, rep) in self.full.iter().enumerate() {
                if self.infinity && rep.contains(inf) && anchor.map(|a| a.0) != Some(o) {
                    continue;
                }
                let zero_rep = canonical_zero_translate(rep, m, self.n);
                for tau in 0..m {
                    let b = translate(rep, tau, m);
                    if let Some((ao, ab)) = anchor {
                        if o == ao {
                            if tau != 0 {
                                continue;
                            }
                        } else if !b.is_disjoint(&ab) {
                            continue;
                        }
                    } else if b.contains(0) {
                        // the block through 0 is its orbit's least translate
                        // through 0; slot 0 takes it from orbit 0
                        if Some(b) != zero_rep || (s == 0 && o != 0) {
                            continue;
                        }
                    }
                    let mut items = vec![o];
                    items.extend(b.points().iter().map(|&p| orbits + s * n + p as usize));
                    inst.push(items);
                    meaning.push((s, b));
                }
            }
        }
        (inst, meaning)
    }

    pub fn solve(&self, budget: Duration) -> Result<Design> {
        let (inst, meaning) = self.instance();
        let rows = inst.solve(budget)?;
        let mut base: Vec<Vec<Block>> = vec![Vec::new(); self.slots];
        for r in rows {
            let (s, b) = meaning[r];
            base[s].push(b);
        }
        let mut classes = self.fixed.clone();
        for blocks in &base {
            for tau in 0..self.modulus {
                let moved = blocks.iter().map(|b| translate(b, tau, self.modulus)).collect();
                classes.push(ParallelClass::from_blocks_unchecked(self.n, moved));
            }
        }
        canonical_order(&mut classes);
        let tag = if self.infinity { format!("z{}inf", self.modulus) } else { format!("z{}", self.modulus) };
        let d = Design::new(DesignKind::Bp, self.n, self.k, classes, format!("bp-{}-{}-cyclic-{tag}-dlx", self.n, self.k));
        certify(&d)?;
        Ok(d)
    }
}

/// `b + tau` on `Z_m`, with point `m` (infinity) fixed.
fn translate(b: &Block, tau: u32, m: u32) -> Block {
    b.map(|p| if p == m { p } else { (p + tau) % m }).expect("translation is a bijection")
}

fn canonical_zero_translate(rep: &Block, m: u32, n: u32) -> Option<Block> {
    (0..m)
        .map(|tau| translate(rep, tau, m))
        .filter(|b| b.contains(0))
        .min_by_key(|b| rank_block(b, n).expect("in range"))
}

/// Searches a BP(n, k) with the cyclic plan, or by direct resolution of all
/// k-subsets when no plan applies.
pub fn search_bp(n: u32, k: usize, budget: Duration) -> Result<Design> {
    if let Some(plan) = CyclicPlan::for_bp(n, k) {
        return plan.solve(budget);
    }
    let all: Vec<Block> = (0..binomial(u64::from(n), k as u64)).map(|r| unrank_block(r, n, k)).collect::<Result<_>>()?;
    let classes = exact_cover_resolve(&all, n, k, budget)?;
    let d = Design::new(DesignKind::Bp, n, k, classes, format!("bp-{n}-{k}-direct-dlx"));
    certify(&d)?;
    Ok(d)
}

/// Loads a design from text, checking digest, identity and full coverage.
pub fn load_checked(text: &str, sha256: &str, kind: DesignKind, n: u32, k: usize, origin: &Path) -> Result<Design> {
    let corrupt = |reason: String| Error::CorruptCache { path: origin.to_path_buf(), reason };
    let actual = sha256_hex(text.as_bytes());
    if actual != sha256.trim() {
        return Err(corrupt(format!("digest {actual} does not match recorded {}", sha256.trim())));
    }
    let d = parse_design(text).map_err(|e| corrupt(e.to_string()))?;
    if d.kind != kind || d.n != n || d.k != k {
        return Err(corrupt(format!("holds {} n={} k={}, expected {} n={n} k={k}", d.kind.tag(), d.n, d.k, kind.tag())));
    }
    certify(&d).map_err(|e| corrupt(e.to_string()))?;
    Ok(d)
}

pub fn embedded(kind: DesignKind, n: u32, k: usize) -> Option<&'static Embedded> {
    EMBEDDED.iter().find(|e| e.kind == kind && e.n == n && e.k == k)
}

pub fn load_embedded(e: &Embedded) -> Result<Design> {
    let name = format!("data/{}_{}_{}.design", e.kind.tag(), e.n, e.k);
    load_checked(e.text, e.sha256, e.kind, e.n, e.k, Path::new(&name))
}

/// Directory of `<kind>_<n>_<k>.design` files with `.sha` sidecars.
#[derive(Clone, Debug)]
pub struct SeedCache {
    dir: PathBuf,
}

impl SeedCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SeedCache { dir: dir.into() }
    }

    /// `$BARANYAI_CACHE`, else `$XDG_CACHE_HOME/baranyai`, else
    /// `~/.cache/baranyai`, else `./.baranyai-cache`.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
            return PathBuf::from(d);
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
            return PathBuf::from(d).join("baranyai");
        }
        match std::env::var_os("HOME").filter(|d| !d.is_empty()) {
            Some(h) => PathBuf::from(h).join(".cache").join("baranyai"),
            None => PathBuf::from(".baranyai-cache"),
        }
    }

    pub fn from_env() -> Self {
        Self::new(Self::default_dir())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: DesignKind, n: u32, k: usize) -> PathBuf {
        self.dir.join(format!("{}_{n}_{k}.design", kind.tag()))
    }

    fn sha_path(design: &Path) -> PathBuf {
        design.with_extension("sha")
    }

    /// `Ok(None)` when absent; corrupt entries are errors, never ignored.
    pub fn load(&self, kind: DesignKind, n: u32, k: usize) -> Result<Option<Design>> {
        let path = self.path(kind, n, k);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let sha_path = Self::sha_path(&path);
        let sha = fs::read_to_string(&sha_path).map_err(|e| Error::io(&sha_path, e))?;
        load_checked(&text, &sha, kind, n, k, &path).map(Some)
    }

    /// Writes `d` and its digest atomically under an exclusive lock file.
    pub fn store(&self, d: &Design) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path(d.kind, d.n, d.k);
        let _lock = LockFile::acquire(path.with_extension("lock"), Duration::from_secs(60))?;
        let text = serialize(d);
        write_atomic(&path, text.as_bytes())?;
        write_atomic(&Self::sha_path(&path), format!("{}\n", sha256_hex(text.as_bytes())).as_bytes())?;
        Ok(path)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| Error::io(path, e))
}

struct LockFile(PathBuf);

impl LockFile {
    /// Waits up to `patience` for a competing writer, then treats its lock as
    /// stale.
    fn acquire(path: PathBuf, patience: Duration) -> Result<Self> {
        let start = Instant::now();
        loop {
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(LockFile(path)),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    if start.elapsed() >= patience {
                        fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
                    } else {
                        std::thread::sleep(Duration::from_millis(50));
                    }
                }
                Err(e) => return Err(Error::io(&path, e)),
            }
        }
    }
}

impl Drop for LockFile {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

/// Where seeds come from, in order: closed form, embedded data, cache, search.
#[derive(Clone, Debug)]
pub struct SeedStore {
    pub cache: Option<SeedCache>,
    pub budget: Duration,
    pub search: bool,
}

impl Default for SeedStore {
    fn default() -> Self {
        SeedStore { cache: Some(SeedCache::from_env()), budget: DEFAULT_BUDGET, search: true }
    }
}

impl SeedStore {
    /// Closed forms and embedded data only: no disk access, no search.
    pub fn embedded_only() -> Self {
        SeedStore { cache: None, budget: DEFAULT_BUDGET, search: false }
    }

    pub fn with_cache(dir: impl Into<PathBuf>) -> Self {
        SeedStore { cache: Some(SeedCache::new(dir)), ..Self::default() }
    }

    pub fn bp(&self, n: u32, k: usize) -> Result<Design> {
        if n as usize == k || n as usize == 2 * k {
            return bp_small_complement(n, k);
        }
        self.lookup(DesignKind::Bp, n, k, || search_bp(n, k, self.budget))
    }

    /// BP(m, 3) for `3 | m`.
    pub fn bp3(&self, m: u32) -> Result<Design> {
        if !m.is_multiple_of(3) || m == 0 {
            return Err(Error::InvalidParameter(format!("BP(m,3) needs 3 | m, got {m}")));
        }
        self.bp(m, 3)
    }

    pub fn rsqs(&self, v: u32) -> Result<Design> {
        if v == 4 {
            return resolvable_sqs(4, self.budget);
        }
        if !matches!(v, 8 | 16) {
            return Err(Error::Unsupported(format!("resolvable SQS({v}) is seeded only for v = 4, 8, 16")));
        }
        self.lookup(DesignKind::Rsqs, v, 4, || resolvable_sqs(v, self.budget))
    }

    fn lookup(&self, kind: DesignKind, n: u32, k: usize, search: impl FnOnce() -> Result<Design>) -> Result<Design> {
        if let Some(e) = embedded(kind, n, k) {
            return load_embedded(e);
        }
        if let Some(cache) = &self.cache {
            if let Some(d) = cache.load(kind, n, k)? {
                return Ok(d);
            }
        }
        if !self.search {
            return Err(Error::Unsupported(format!("no stored {} seed for n={n} k={k} and search is disabled", kind.tag())));
        }
        let d = search()?;
        if let Some(cache) = &self.cache {
            cache.store(&d)?;
        }
        Ok(d)
    }
}

/// A resolved SQS(v) provider: seeds for `v <= 16`, affine planes beyond.
pub fn rsqs_provider(v: u32, store: &SeedStore) -> Result<Box<dyn RsqsProvider>> {
    use crate::rsqs::MaterializedRsqs;
    match v {
        4 | 8 | 16 => Ok(Box::new(MaterializedRsqs::new(store.rsqs(v)?)?)),
        _ if v > 16 && v.is_power_of_two() => Ok(Box::new(AffineRsqs::new(v)?)),
        _ => Err(Error::Unsupported(format!("no resolved SQS({v}) provider"))),
    }
}
