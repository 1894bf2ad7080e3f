//! Wedge bases, shuffle sets and the sparse matrices of the k-ary
//! Chevalley–Eilenberg differential
//!
//! `∂_t(x_1∧…∧x_t) = Σ_{σ∈D_{t,k}} sgn(σ) [x_σ(1),…,x_σ(k)] ∧ x_σ(k+1) ∧ … ∧ x_σ(t)`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::KaryAlgebra;
use crate::combinatorics::{binom, insert_front};
use crate::error::{Error, Result};
use crate::sparse::SparseIntMatrix;

/// A basis monomial `b_{i_1} ∧ … ∧ b_{i_t}` with `i_1 < … < i_t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WedgeMonomial(Vec<usize>);

impl WedgeMonomial {
    /// Sorts `indices`; `None` if an index repeats.
    pub fn new(indices: Vec<usize>) -> Option<Self> {
        let mut v = indices;
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(WedgeMonomial(v))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn render(&self, alg: &KaryAlgebra) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&i| alg.label(i)).join("∧")
    }
}

/// Lexicographic ranking of strictly increasing `t`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct SubsetIndexer {
    n: usize,
    t: usize,
    // table[a][b] = C(a, b)
    table: Vec<Vec<usize>>,
}

impl SubsetIndexer {
    pub fn new(n: usize, t: usize) -> Self {
        let table = (0..=n)
            .map(|a| (0..=t).map(|b| binom(a as i64, b as i64) as usize).collect())
            .collect();
        SubsetIndexer { n, t, table }
    }

    pub fn len(&self) -> usize {
        if self.t > self.n {
            0
        } else {
            self.table[self.n][self.t]
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `s` in lexicographic order.
    pub fn rank(&self, s: &[usize]) -> usize {
        debug_assert_eq!(s.len(), self.t);
        // C(n,t) - 1 - Σ C(n-1-s_i, t-i)
        let mut acc = 0;
        for (i, &x) in s.iter().enumerate() {
            acc += self.table[self.n - 1 - x][self.t - i];
        }
        self.len() - 1 - acc
    }
}

/// All strictly increasing `t`-tuples of `0..dim`, in lexicographic order.
pub fn wedge_basis(alg: &KaryAlgebra, t: usize) -> Result<Vec<WedgeMonomial>> {
    if t > alg.dim() {
        return Err(Error::input(format!("degree {t} exceeds dimension {}", alg.dim())));
    }
    Ok((0..alg.dim()).combinations(t).map(WedgeMonomial).collect())
}

/// `D_{t,k}`: permutations with `σ(1)<…<σ(k)` and `σ(k+1)<…<σ(t)`, given by
/// the 0-based positions selected for the bracket, with their signs.
#[derive(Clone, Debug)]
pub struct ShuffleSet {
    t: usize,
    k: usize,
    inner: itertools::Combinations<std::ops::Range<usize>>,
}

impl ShuffleSet {
    pub fn new(t: usize, k: usize) -> Self {
        ShuffleSet { t, k, inner: (0..t).combinations(k) }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Iterator for ShuffleSet {
    type Item = (i64, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        let sel = self.inner.next()?;
        // moving position p_j to slot j takes p_j - j transpositions
        let moves: usize = sel.iter().enumerate().map(|(j, p)| p - j).sum();
        let sign = if moves.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, sel))
    }
}

/// The chain degrees of the complex: the augmentation degree 0 and
/// `t_i = i(k-1)+1` for `t_i <= dim`.
#[derive(Clone, Copy, Debug)]
pub struct ChainLayout<'a> {
    alg: &'a KaryAlgebra,
}

impl<'a> ChainLayout<'a> {
    pub fn new(alg: &'a KaryAlgebra) -> Self {
        ChainLayout { alg }
    }

    pub fn algebra(&self) -> &'a KaryAlgebra {
        self.alg
    }

    /// `[0, 1, k, 2k-1, ...]`, capped at `dim`.
    pub fn degrees(&self) -> Vec<usize> {
        let step = self.alg.arity() - 1;
        let mut out = vec![0];
        out.extend((1..=self.alg.dim()).step_by(step));
        out
    }

    /// Positive chain degrees only.
    pub fn positive_degrees(&self) -> Vec<usize> {
        self.degrees().into_iter().skip(1).collect()
    }

    pub fn contains(&self, t: usize) -> bool {
        t == 0 || (t >= 1 && t <= self.alg.dim() && (t - 1).is_multiple_of(self.alg.arity() - 1))
    }

    /// Degree that `∂_t` lands in.
    pub fn target(&self, t: usize) -> Option<usize> {
        (t >= self.alg.arity()).then(|| t + 1 - self.alg.arity())
    }

    /// Chain-space dimension `C(dim, t)`.
    pub fn chain_dim(&self, t: usize) -> u128 {
        binom(self.alg.dim() as i64, t as i64)
    }

    pub fn basis(&self, t: usize) -> Result<Vec<WedgeMonomial>> {
        wedge_basis(self.alg, t)
    }
}

/// Column of `∂_t` at the monomial `m`, as `(row, coefficient)` pairs over the
/// lexicographic basis of `Λ^{t-k+1}`.
fn differential_column(alg: &KaryAlgebra, m: &[usize], rows: &SubsetIndexer) -> Vec<(usize, i64)> {
    let k = alg.arity();
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    let mut selected = Vec::with_capacity(k);
    let mut rest = Vec::with_capacity(m.len() - k);
    for (sign, pos) in ShuffleSet::new(m.len(), k) {
        selected.clear();
        selected.extend(pos.iter().map(|&p| m[p]));
        let Some(value) = alg.bracket_sorted(&selected) else {
            continue;
        };
        rest.clear();
        let mut it = pos.iter().peekable();
        for (p, &x) in m.iter().enumerate() {
            if it.peek() == Some(&&p) {
                it.next();
            } else {
                rest.push(x);
            }
        }
        for &(o, c) in value {
            if let Some((s, wedge)) = insert_front(o, &rest) {
                *acc.entry(rows.rank(&wedge)).or_insert(0) += sign * s * c;
            }
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Matrix of `∂_t : Λ^t g → Λ^{t-k+1} g` in the lexicographic bases.
pub fn differential_matrix(alg: &KaryAlgebra, t: usize) -> Result<SparseIntMatrix> {
    let k = alg.arity();
    let n = alg.dim();
    if t < k {
        return Err(Error::input(format!("∂_{t} is the zero augmentation; differential needs t >= k = {k}")));
    }
    if t > n {
        return Err(Error::input(format!("degree {t} exceeds dimension {n}")));
    }
    let rows = SubsetIndexer::new(n, t + 1 - k);
    let cols: Vec<Vec<usize>> = (0..n).combinations(t).collect();
    let columns: Vec<Vec<(usize, BigInt)>> = cols
        .par_iter()
        .map(|m| {
            differential_column(alg, m, &rows)
                .into_iter()
                .map(|(r, c)| (r, BigInt::from(c)))
                .collect()
        })
        .collect();
    SparseIntMatrix::from_columns(rows.len(), columns)
}

/// Degrees `t` for which `∂_{t-k+1} ∘ ∂_t` is nonzero, over every composable
/// pair of layout degrees.
pub fn verify_d_squared(alg: &KaryAlgebra) -> Vec<usize> {
    let k = alg.arity();
    let layout = ChainLayout::new(alg);
    layout
        .positive_degrees()
        .into_par_iter()
        .filter(|&t| t >= 2 * k - 1)
        .filter(|&t| {
            let outer = differential_matrix(alg, t).expect("degree in range");
            let inner = differential_matrix(alg, t + 1 - k).expect("degree in range");
            !inner.mul(&outer).expect("composable").is_zero()
        })
        .collect()
}

/// One weight block of `∂_t`: the columns of a fixed total weight and the rows
/// of the same weight.
#[derive(Clone, Debug)]
pub struct WeightBlock {
    pub weight: Vec<i64>,
    pub col_indices: Vec<usize>,
    pub row_indices: Vec<usize>,
    pub matrix: SparseIntMatrix,
}

/// Indices of the lexicographic basis of `Λ^t`, grouped by total weight.
pub fn weight_classes(alg: &KaryAlgebra, t: usize) -> Result<BTreeMap<Vec<i64>, Vec<usize>>> {
    if alg.weights().is_none() {
        return Err(Error::NotGraded);
    }
    let mut classes: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, m) in (0..alg.dim()).combinations(t).enumerate() {
        classes.entry(alg.weight_of(&m).unwrap()).or_default().push(i);
    }
    Ok(classes)
}

/// Splits `∂_t` by weight. Every column weight gets a block, even when no row
/// of that weight exists.
pub fn weight_blocks(alg: &KaryAlgebra, t: usize) -> Result<Vec<WeightBlock>> {
    let full = differential_matrix(alg, t)?;
    let cols = weight_classes(alg, t)?;
    let mut rows = weight_classes(alg, t + 1 - alg.arity())?;
    Ok(cols
        .into_iter()
        .map(|(weight, col_indices)| {
            let row_indices = rows.remove(&weight).unwrap_or_default();
            let matrix = full.submatrix(&row_indices, &col_indices);
            WeightBlock { weight, col_indices, row_indices, matrix }
        })
        .collect())
}
