//! Latin-square completion and the matrix driving the Type 2 classes.

use crate::block::ParallelClass;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.cells[row * self.n..(row + 1) * self.n]
    }

    pub fn is_latin(&self) -> bool {
        let n = self.n;
        (0..n).all(|r| is_permutation(n, self.row(r).iter().copied()))
            && (0..n).all(|c| is_permutation(n, (0..n).map(|r| self.get(r, c))))
    }
}

fn is_permutation(n: usize, mut vals: impl Iterator<Item = u32>) -> bool {
    let mut seen = vec![false; n];
    vals.all(|v| (v as usize) < n && !std::mem::replace(&mut seen[v as usize], true))
}

/// The first `k` rows of an `n x n` Latin square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRows {
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl PartialRows {
    /// Checks that every row is a permutation of `[0, n)` and that columns
    /// hold distinct symbols.
    pub fn new(n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.len() > n {
            return Err(Error::InvalidLatinRows { row: n, col: 0, reason: format!("{} rows exceed order {n}", rows.len()) });
        }
        let mut in_col = vec![false; n * n];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidLatinRows { row: r, col: 0, reason: format!("row has {} entries", row.len()) });
            }
            let mut in_row = vec![false; n];
            for (c, &v) in row.iter().enumerate() {
                let v = v as usize;
                if v >= n {
                    return Err(Error::InvalidLatinRows { row: r, col: c, reason: format!("symbol {v} out of range") });
                }
                if std::mem::replace(&mut in_row[v], true) {
                    return Err(Error::InvalidLatinRows { row: r, col: c, reason: format!("symbol {v} repeated in row") });
                }
                if std::mem::replace(&mut in_col[c * n + v], true) {
                    return Err(Error::InvalidLatinRows { row: r, col: c, reason: format!("symbol {v} repeated in column") });
                }
            }
        }
        Ok(PartialRows { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// Completes `p` to a Latin square, one row at a time.
///
/// Each new row is a perfect matching between columns and the symbols still
/// missing from them; after `r` rows that bipartite graph is `(n - r)`-regular,
/// so a perfect matching always exists. Augmenting paths try symbol
/// `(row + col + d) mod n` for `d = 0, 1, ...`, which makes the output
/// deterministic and turns an empty start into the cyclic square.
pub fn complete_latin(p: &PartialRows) -> LatinSquare {
    let n = p.n;
    let mut cells = Vec::with_capacity(n * n);
    let mut used = vec![false; n * n]; // used[col * n + sym]
    for row in &p.rows {
        for (c, &v) in row.iter().enumerate() {
            used[c * n + v as usize] = true;
        }
        cells.extend_from_slice(row);
    }

    let mut sym_owner = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    for r in p.rows.len()..n {
        sym_owner.iter_mut().for_each(|o| *o = usize::MAX);
        for c in 0..n {
            visited.iter_mut().for_each(|v| *v = false);
            let ok = augment(c, r, n, &used, &mut sym_owner, &mut visited);
            assert!(ok, "regular bipartite graph always has a perfect matching");
        }
        let mut row = vec![0u32; n];
        for (s, &c) in sym_owner.iter().enumerate() {
            row[c] = s as u32;
            used[c * n + s] = true;
        }
        cells.extend_from_slice(&row);
    }
    LatinSquare { n, cells }
}

fn augment(c: usize, r: usize, n: usize, used: &[bool], owner: &mut [usize], visited: &mut [bool]) -> bool {
    for d in 0..n {
        let s = (r + c + d) % n;
        if used[c * n + s] || visited[s] {
            continue;
        }
        visited[s] = true;
        if owner[s] == usize::MAX || augment(owner[s], r, n, used, owner, visited) {
            owner[s] = c;
            return true;
        }
    }
    false
}

/// Number of rows of the Type 2 matrix fixed in advance for `t mod 4`.
pub fn predetermined_rows(residue: u32) -> usize {
    match residue % 4 {
        0 => 0,
        3 => 1,
        2 => 2,
        _ => 3,
    }
}

/// The `t x t` Latin square for one parallel class `R` of a BP(t,3).
///
/// With blocks `B_m = {x_{m0} < x_{m1} < x_{m2}}` in class order, row `rho`
/// of the predetermined prefix is `M(rho, 3m + i) = x_{m,(i + rho) mod 3}`.
/// These rows reproduce the Group 2 quadruples already used by the Type 1
/// classes. The rest comes from [`complete_latin`].
pub fn type2_matrix(r: &ParallelClass, t: u32, residue: u32) -> Result<LatinSquare> {
    if !t.is_multiple_of(3) || t == 0 {
        return Err(Error::InvalidParameter(format!("Type 2 matrix needs 3 | t, got t = {t}")));
    }
    if residue != t % 4 {
        return Err(Error::InvalidParameter(format!("residue {residue} inconsistent with t = {t} (t mod 4 = {})", t % 4)));
    }
    if r.n() != t || r.k() != 3 {
        return Err(Error::NotParallelClass(format!("expected a class of triples on Z_{t}")));
    }
    r.check()?;
    let rows = predetermined_rows(residue);
    let prefix: Vec<Vec<u32>> = (0..rows)
        .map(|rho| {
            r.blocks()
                .iter()
                .flat_map(|b| (0..3).map(move |i| b.points()[(i + rho) % 3]))
                .collect()
        })
        .collect();
    let partial = PartialRows::new(t as usize, prefix)?;
    Ok(complete_latin(&partial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::Block;

    fn triples(t: u32, blocks: &[[u32; 3]]) -> ParallelClass {
        ParallelClass::new(t, blocks.iter().map(|b| Block::new(b).unwrap()).collect()).unwrap()
    }

    #[test]
    fn forced_completions() {
        let sq = complete_latin(&PartialRows::new(2, vec![vec![0, 1]]).unwrap());
        assert_eq!(sq.row(1), &[1, 0]);
        let sq = complete_latin(&PartialRows::new(3, vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap());
        assert_eq!(sq.row(2), &[2, 0, 1]);
    }

    #[test]
    fn empty_start_gives_cyclic() {
        let sq = complete_latin(&PartialRows::new(4, vec![]).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(sq.get(i, j) as usize, (i + j) % 4);
            }
        }
    }

    #[test]
    fn invalid_rows_reported() {
        let err = PartialRows::new(3, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidLatinRows { row: 1, col: 0, .. }));
        let err = PartialRows::new(3, vec![vec![0, 0, 2]]).unwrap_err();
        assert!(matches!(err, Error::InvalidLatinRows { row: 0, col: 1, .. }));
        assert!(PartialRows::new(3, vec![vec![0, 1]]).is_err());
        assert!(PartialRows::new(3, vec![vec![0, 1, 3]]).is_err());
    }

    #[test]
    fn type2_residue_zero_is_cyclic() {
        let blocks: Vec<[u32; 3]> = (0..4).map(|m| [3 * m, 3 * m + 1, 3 * m + 2]).collect();
        let sq = type2_matrix(&triples(12, &blocks), 12, 0).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(sq.get(i, j) as usize, (i + j) % 12);
            }
        }
    }

    #[test]
    fn type2_predetermined_rows() {
        let blocks15: Vec<[u32; 3]> = (0..5).map(|m| [3 * m, 3 * m + 1, 3 * m + 2]).collect();
        let sq = type2_matrix(&triples(15, &blocks15), 15, 3).unwrap();
        assert_eq!(&sq.row(0)[..3], &[0, 1, 2]);
        assert!(sq.is_latin());

        let blocks21: Vec<[u32; 3]> = (0..7).map(|m| [3 * m, 3 * m + 1, 3 * m + 2]).collect();
        let sq = type2_matrix(&triples(21, &blocks21), 21, 1).unwrap();
        assert_eq!(&sq.row(1)[..3], &[1, 2, 0]);
        assert_eq!(&sq.row(2)[..3], &[2, 0, 1]);
        assert!(sq.is_latin());
    }

    #[test]
    fn type2_errors() {
        let blocks: Vec<[u32; 3]> = (0..4).map(|m| [3 * m, 3 * m + 1, 3 * m + 2]).collect();
        assert!(type2_matrix(&triples(12, &blocks), 12, 1).is_err());
        let bad = ParallelClass::from_blocks_unchecked(12, vec![Block::new(&[0, 1, 2]).unwrap()]);
        assert!(type2_matrix(&bad, 12, 0).is_err());
    }
}
