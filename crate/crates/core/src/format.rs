//! Line-oriented text format for designs.
//!
//! ```text
//! BARANYAI v1 n=8 k=4 classes=35 provenance=bp-8-4-complement
//! 0 1 2 3;4 5 6 7
//! ...
//! ```
//!
//! One class per line, blocks joined by `;`, points by single spaces, LF
//! endings. The kind is not stored: `k = 2` is a one-factorization (even `n`)
//! or near-one-factorization (odd `n`), and a `k = 4` design with
//! `(n-1)(n-2)/6` classes on `n > 4` points is a resolved SQS.

use std::io::{self, BufRead, Write};

use crate::block::{Block, Design, DesignKind, ParallelClass, Point};
use crate::error::{Error, Result};

pub const MAGIC: &str = "BARANYAI";
pub const VERSION: &str = "v1";

/// Parsed header fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub n: u32,
    pub k: usize,
    pub classes: usize,
    pub provenance: String,
}

impl Header {
    pub fn of(d: &Design) -> Self {
        Header { n: d.n, k: d.k, classes: d.classes.len(), provenance: d.provenance.clone() }
    }

    pub fn kind(&self) -> DesignKind {
        let (n, k, c) = (u64::from(self.n), self.k, self.classes as u64);
        match k {
            2 if n % 2 == 1 => DesignKind::Nof,
            2 => DesignKind::Of,
            4 if n > 4 && c * 6 == (n - 1) * (n - 2) => DesignKind::Rsqs,
            _ => DesignKind::Bp,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{MAGIC} {VERSION} n={} k={} classes={} provenance={}",
            self.n, self.k, self.classes, self.provenance
        )
    }
}

pub fn parse_header(line: &str) -> Result<Header> {
    let perr = |reason: String| Error::Parse { line: 1, reason };
    let mut it = line.split(' ');
    if it.next() != Some(MAGIC) {
        return Err(perr(format!("missing {MAGIC} magic")));
    }
    match it.next() {
        Some(VERSION) => {}
        other => return Err(perr(format!("unsupported version {other:?}"))),
    }
    let mut field = |name: &str| -> Result<String> {
        let tok = it.next().ok_or_else(|| perr(format!("missing field {name}")))?;
        tok.strip_prefix(name)
            .and_then(|r| r.strip_prefix('='))
            .map(str::to_owned)
            .ok_or_else(|| perr(format!("expected {name}=..., got {tok:?}")))
    };
    let num = |s: String, name: &str| s.parse::<u64>().map_err(|e| perr(format!("{name}: {e}")));
    let n = num(field("n")?, "n")?;
    let k = num(field("k")?, "k")?;
    let classes = num(field("classes")?, "classes")?;
    let provenance = field("provenance")?;
    if it.next().is_some() {
        return Err(perr("trailing header fields".into()));
    }
    if !(2..=4).contains(&k) || n == 0 || n > u64::from(u32::MAX) {
        return Err(perr(format!("unsupported n = {n}, k = {k}")));
    }
    Ok(Header { n: n as u32, k: k as usize, classes: classes as usize, provenance })
}

/// Parses one class line (1-based `lineno` for diagnostics).
pub fn parse_class(s: &str, n: u32, k: usize, lineno: usize) -> Result<ParallelClass> {
    let perr = |reason: String| Error::Parse { line: lineno, reason };
    let mut blocks = Vec::with_capacity(n as usize / k.max(1));
    for tok in s.split(';') {
        let pts: Vec<Point> = tok
            .split(' ')
            .map(|p| p.parse::<Point>().map_err(|e| perr(format!("point {p:?}: {e}"))))
            .collect::<Result<_>>()?;
        if pts.len() != k {
            return Err(perr(format!("block {tok:?} has {} points, expected {k}", pts.len())));
        }
        if let Some(&p) = pts.iter().find(|&&p| p >= n) {
            return Err(perr(format!("point {p} out of range for n = {n}")));
        }
        if pts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(perr(format!("block {tok:?} is not strictly increasing")));
        }
        blocks.push(Block::new(&pts).map_err(|e| perr(e.to_string()))?);
    }
    // partition defects are left for the verifier to report
    Ok(ParallelClass::from_blocks_unchecked(n, blocks))
}

pub fn parse_design(text: &str) -> Result<Design> {
    read_design(text.as_bytes())
}

pub fn read_design(r: impl BufRead) -> Result<Design> {
    let mut lines = r.lines();
    let io_err = |e: io::Error, line| Error::Parse { line, reason: e.to_string() };
    let first = lines.next().ok_or(Error::Parse { line: 1, reason: "empty input".into() })?;
    let header = parse_header(&first.map_err(|e| io_err(e, 1))?)?;
    let mut classes = Vec::with_capacity(header.classes);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| io_err(e, i + 2))?;
        if line.is_empty() {
            return Err(Error::Parse { line: i + 2, reason: "empty class line".into() });
        }
        classes.push(parse_class(&line, header.n, header.k, i + 2)?);
    }
    if classes.len() != header.classes {
        return Err(Error::Parse {
            line: classes.len() + 1,
            reason: format!("header promises {} classes, body has {}", header.classes, classes.len()),
        });
    }
    Ok(Design::new(header.kind(), header.n, header.k, classes, header.provenance))
}

pub fn class_line(c: &ParallelClass) -> String {
    c.to_string()
}

/// A class with points shown as `(x,i)` on `Z_t x Z_L`.
pub fn labeled_class_line(c: &ParallelClass, t: u32) -> String {
    c.blocks().iter().map(|b| labeled_block(b, t)).collect::<Vec<_>>().join(";")
}

pub fn labeled_block(b: &Block, t: u32) -> String {
    b.points().iter().map(|&p| format!("({},{})", p % t, p / t)).collect::<Vec<_>>().join(" ")
}

pub fn write_design(d: &Design, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{}", Header::of(d).line())?;
    for c in &d.classes {
        writeln!(w, "{c}")?;
    }
    Ok(())
}

pub fn serialize(d: &Design) -> String {
    let mut out = Vec::new();
    write_design(d, &mut out).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("format is ASCII")
}
