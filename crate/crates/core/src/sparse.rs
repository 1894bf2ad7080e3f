//! Sparse integer matrices stored by column, with MatrixMarket I/O.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Column-major sparse matrix over the integers. Each column holds
/// `(row, value)` pairs sorted by row with no zero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

fn merge_sorted(mut v: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    v.sort_by_key(|(i, _)| *i);
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, BigInt::from(1))]).collect();
        SparseIntMatrix { rows: n, cols: n, columns }
    }

    /// Builds a matrix from unsorted columns, summing duplicates and dropping
    /// zeros.
    pub fn from_columns<T: Into<BigInt>>(rows: usize, columns: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for col in columns {
            let col: Vec<(usize, BigInt)> = col.into_iter().map(|(r, v)| (r, v.into())).collect();
            if let Some((r, _)) = col.iter().find(|(r, _)| *r >= rows) {
                return Err(Error::input(format!("row index {r} out of range ({rows} rows)")));
            }
            out.push(merge_sorted(col));
        }
        Ok(SparseIntMatrix { rows, cols, columns: out })
    }

    pub fn from_triplets<T: Into<BigInt>>(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if c >= cols {
                return Err(Error::input(format!("column index {c} out of range ({cols} columns)")));
            }
            columns[c].push((r, v.into()));
        }
        Self::from_columns(rows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(usize, BigInt)>] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        let col = &self.columns[c];
        match col.binary_search_by_key(&r, |(i, _)| *i) {
            Ok(p) => col[p].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.triplets().map(|(_, _, v)| v.abs()).max().unwrap_or_default()
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            columns[r].push((c, v.clone()));
        }
        SparseIntMatrix { rows: self.cols, cols: self.rows, columns }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let columns = rhs
            .columns
            .iter()
            .map(|bcol| {
                let mut acc = Vec::new();
                for (j, b) in bcol {
                    for (i, a) in &self.columns[*j] {
                        acc.push((*i, a * b));
                    }
                }
                merge_sorted(acc)
            })
            .collect();
        Ok(SparseIntMatrix { rows: self.rows, cols: rhs.cols, columns })
    }

    /// Matrix with row `r` moved to `row_perm[r]` and column `c` to `col_perm[c]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triplets() {
            columns[col_perm[c]].push((row_perm[r], v.clone()));
        }
        for col in columns.iter_mut() {
            col.sort_by_key(|(i, _)| *i);
        }
        SparseIntMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn negate_row(&self, row: usize) -> Self {
        let mut out = self.clone();
        for col in out.columns.iter_mut() {
            for (r, v) in col.iter_mut() {
                if *r == row {
                    *v = -v.clone();
                }
            }
        }
        out
    }

    /// Submatrix on the given (sorted or not) row and column index lists.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut row_map = vec![usize::MAX; self.rows];
        for (local, &r) in row_idx.iter().enumerate() {
            row_map[r] = local;
        }
        let columns = col_idx
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, BigInt)> = self.columns[c]
                    .iter()
                    .filter(|(r, _)| row_map[*r] != usize::MAX)
                    .map(|(r, v)| (row_map[*r], v.clone()))
                    .collect();
                col.sort_by_key(|(i, _)| *i);
                col
            })
            .collect();
        SparseIntMatrix { rows: row_idx.len(), cols: col_idx.len(), columns }
    }

    pub fn to_matrix_market(&self) -> String {
        let mut s = String::from("%%MatrixMarket matrix coordinate integer general\n");
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {}", r + 1, c + 1, v);
        }
        s
    }

    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_matrix_market().as_bytes())?;
        Ok(())
    }

    /// Reads a coordinate-format integer MatrixMarket file. Duplicate
    /// coordinates are summed.
    pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::input("empty MatrixMarket input"))??;
        let h = header.to_ascii_lowercase();
        let fields: Vec<&str> = h.split_whitespace().collect();
        if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" || fields[2] != "coordinate" {
            return Err(Error::input(format!("unsupported MatrixMarket header {header:?}")));
        }
        if fields[3] != "integer" || fields[4] != "general" {
            return Err(Error::input("only 'integer general' MatrixMarket matrices are supported"));
        }
        let mut size: Option<(usize, usize, usize)> = None;
        let mut entries = Vec::new();
        for line in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            let bad = || Error::input(format!("malformed MatrixMarket line {t:?}"));
            match size {
                None => {
                    if parts.len() != 3 {
                        return Err(bad());
                    }
                    let p = |s: &str| s.parse::<usize>().map_err(|_| bad());
                    size = Some((p(parts[0])?, p(parts[1])?, p(parts[2])?));
                }
                Some((rows, cols, _)) => {
                    if parts.len() != 3 {
                        return Err(bad());
                    }
                    let r: usize = parts[0].parse().map_err(|_| bad())?;
                    let c: usize = parts[1].parse().map_err(|_| bad())?;
                    let v: BigInt = parts[2].parse().map_err(|_| bad())?;
                    if r == 0 || c == 0 || r > rows || c > cols {
                        return Err(Error::input(format!("entry ({r}, {c}) out of range")));
                    }
                    entries.push((r - 1, c - 1, v));
                }
            }
        }
        let (rows, cols, nnz) = size.ok_or_else(|| Error::input("missing MatrixMarket size line"))?;
        if entries.len() != nnz {
            return Err(Error::input(format!("expected {nnz} entries, found {}", entries.len())));
        }
        Self::from_triplets(rows, cols, entries)
    }
}
