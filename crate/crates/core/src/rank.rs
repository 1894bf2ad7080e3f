//! Exact rank over the rationals, plus a modular rank used as a pre-pass and
//! as an independent cross-check.
//!
//! The exact route is fraction-free sparse elimination on integer rows. A row
//! `r` is reduced against the pivot row `p` (pivot value `a`, entry `b` in
//! the pivot column) as `r ← (a/g)·r − (b/g)·p` with `g = gcd(a, b)`, and the
//! result is divided by the gcd of its entries. Every row therefore stays a
//! primitive integer vector spanning the same rational row space.
//!
//! Pivots are chosen by lowest Markowitz cost `(row_count-1)(col_count-1)`,
//! ties broken by smallest row index and then smallest column index, so the
//! sequence of pivots (and the intermediate coefficient growth) is
//! reproducible.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::sparse::SparseIntMatrix;

type Row = Vec<(usize, BigInt)>;

/// Rank over `Q`. A modular pre-pass settles the full-rank case without
/// elimination (rank mod p never exceeds the rational rank); everything else
/// goes through [`rank_exact`].
pub fn rank(m: &SparseIntMatrix) -> usize {
    let bound = m.rows().min(m.cols());
    if bound == 0 || m.is_zero() {
        return 0;
    }
    if rank_mod_p(m, PREPASS_PRIME) == bound {
        return bound;
    }
    rank_exact(m)
}

/// `cols - rank`.
pub fn kernel_dim(m: &SparseIntMatrix) -> usize {
    m.cols() - rank(m)
}

/// Largest prime below 2^31; products of two residues fit in a `u64`.
pub const PREPASS_PRIME: u64 = 2_147_483_647;

/// Rank over `Q` by fraction-free Markowitz elimination, with no modular
/// shortcut.
pub fn rank_exact(m: &SparseIntMatrix) -> usize {
    let mut rows: Vec<Row> = vec![Vec::new(); m.rows()];
    for (r, c, v) in m.triplets() {
        rows[r].push((c, v.clone()));
    }
    for row in rows.iter_mut() {
        row.sort_by_key(|(c, _)| *c);
        make_primitive(row);
    }
    Eliminator::new(rows, m.cols()).run()
}

struct Eliminator {
    rows: Vec<Row>,
    active: Vec<bool>,
    col_count: Vec<usize>,
    // rows that may hold an entry in each column; stale ids are filtered lazily
    col_rows: Vec<Vec<usize>>,
}

impl Eliminator {
    fn new(rows: Vec<Row>, cols: usize) -> Self {
        let mut col_count = vec![0usize; cols];
        let mut col_rows = vec![Vec::new(); cols];
        let mut active = vec![false; rows.len()];
        for (r, row) in rows.iter().enumerate() {
            active[r] = !row.is_empty();
            for (c, _) in row {
                col_count[*c] += 1;
                col_rows[*c].push(r);
            }
        }
        Eliminator { rows, active, col_count, col_rows }
    }

    fn select_pivot(&mut self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        'rows: for r in 0..self.rows.len() {
            if !self.active[r] {
                continue;
            }
            let row = &self.rows[r];
            if row.is_empty() {
                self.active[r] = false;
                continue;
            }
            let rc = row.len() - 1;
            if let Some((cost, _, _)) = best {
                // every entry of this row costs at least rc * 0
                if cost == 0 {
                    break;
                }
            }
            for (c, _) in row {
                let cost = rc * (self.col_count[*c] - 1);
                if best.is_none_or(|(b, _, _)| cost < b) {
                    best = Some((cost, r, *c));
                    if cost == 0 {
                        break 'rows;
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    fn run(mut self) -> usize {
        let mut rank = 0;
        while let Some((pr, pc)) = self.select_pivot() {
            rank += 1;
            self.active[pr] = false;
            let pivot_row = std::mem::take(&mut self.rows[pr]);
            for (c, _) in &pivot_row {
                self.col_count[*c] -= 1;
            }
            let a = pivot_row
                .binary_search_by_key(&pc, |(c, _)| *c)
                .map(|p| pivot_row[p].1.clone())
                .expect("pivot entry present");
            let mut targets = std::mem::take(&mut self.col_rows[pc]);
            targets.sort_unstable();
            targets.dedup();
            for r in targets {
                if !self.active[r] {
                    continue;
                }
                let Ok(pos) = self.rows[r].binary_search_by_key(&pc, |(c, _)| *c) else {
                    continue;
                };
                let b = self.rows[r][pos].1.clone();
                let old = std::mem::take(&mut self.rows[r]);
                for (c, _) in &old {
                    self.col_count[*c] -= 1;
                }
                let new = combine(&old, &pivot_row, &a, &b);
                for (c, _) in &new {
                    self.col_count[*c] += 1;
                    if old.binary_search_by_key(c, |(x, _)| *x).is_err() {
                        self.col_rows[*c].push(r);
                    }
                }
                if new.is_empty() {
                    self.active[r] = false;
                }
                self.rows[r] = new;
            }
        }
        rank
    }
}

/// `(a/g)·row − (b/g)·pivot`, made primitive.
fn combine(row: &Row, pivot: &Row, a: &BigInt, b: &BigInt) -> Row {
    let g = a.gcd(b);
    let ma = a / &g;
    let mb = b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, &ma * &row[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&mb * &pivot[j].1)));
            j += 1;
        } else {
            let v = &ma * &row[i].1 - &mb * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut Row) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Rank over `Z/p` by plain column-by-column elimination, kept independent of
/// the exact elimination path. `p` must be an odd prime below 2^32.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    assert!(p > 2 && p < (1 << 32), "modulus must be an odd prime below 2^32");
    let pb = BigInt::from(p);
    let reduce = |v: &BigInt| -> u64 { v.mod_floor(&pb).to_u64().unwrap() };
    // pivot row -> normalized reduced column with leading entry at that row
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut rank = 0;
    for col in m.columns() {
        let mut v: HashMap<usize, u64> = col
            .iter()
            .map(|(r, x)| (*r, reduce(x)))
            .filter(|(_, x)| *x != 0)
            .collect();
        loop {
            let Some(&lead) = v.keys().min() else { break };
            match pivots.get(&lead) {
                Some(pv) => {
                    let f = v[&lead];
                    for (r, x) in pv {
                        let e = v.entry(*r).or_insert(0);
                        *e = (*e + p - (f * x) % p) % p;
                        if *e == 0 {
                            v.remove(r);
                        }
                    }
                }
                None => {
                    let inv = pow_mod(v[&lead], p - 2, p);
                    let mut norm: Vec<(usize, u64)> = v.iter().map(|(r, x)| (*r, x * inv % p)).collect();
                    norm.sort_unstable();
                    pivots.insert(lead, norm);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for `n < 2^32`.
pub fn is_prime_u32(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= start`, for `start < 2^32`.
pub fn next_prime(start: u64) -> u64 {
    let mut n = start.max(3) | 1;
    while !is_prime_u32(n) {
        n += 2;
    }
    assert!(n < (1 << 32), "prime search left the u32 range");
    n
}
