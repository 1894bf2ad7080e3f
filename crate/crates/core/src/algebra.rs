//! Finite-dimensional k-ary Lie algebras over the rationals.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::sort_with_sign;
use crate::error::{Error, Result};
use crate::subspace::{rat, RatVec, Subspace};

/// Sparse integer vector: `(basis index, coefficient)` pairs sorted by index,
/// with no zero coefficients.
pub type SparseVec = Vec<(usize, i64)>;

/// A k-ary Lie algebra given by integer structure constants.
///
/// Brackets are stored only on strictly increasing argument tuples; any other
/// ordering is reduced to the stored one by antisymmetry. An absent key means
/// the bracket vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaryAlgebra {
    arity: usize,
    dim: usize,
    labels: Vec<String>,
    brackets: BTreeMap<Vec<usize>, SparseVec>,
    weights: Option<Vec<Vec<i64>>>,
}

/// Collects brackets and weights before the invariants are checked once in
/// [`AlgebraBuilder::build`].
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    arity: usize,
    dim: usize,
    labels: Vec<String>,
    brackets: BTreeMap<Vec<usize>, SparseVec>,
    weights: Option<Vec<Vec<i64>>>,
}

fn normalize(mut v: Vec<(usize, i64)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    out
}

impl AlgebraBuilder {
    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    /// Adds `value` to the bracket of `args`, which may be in any order; the
    /// sign of the sorting permutation is applied. A repeated argument is an
    /// error since the bracket is alternating.
    pub fn add_bracket(&mut self, args: &[usize], value: &[(usize, i64)]) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::input(format!(
                "bracket needs {} arguments, got {}",
                self.arity,
                args.len()
            )));
        }
        if let Some(&bad) = args.iter().chain(value.iter().map(|(i, _)| i)).find(|&&i| i >= self.dim) {
            return Err(Error::input(format!("basis index {bad} out of range (dim {})", self.dim)));
        }
        let (sign, key) = sort_with_sign(args)
            .ok_or_else(|| Error::input(format!("repeated argument in bracket {args:?}")))?;
        let entry = self.brackets.entry(key).or_default();
        let mut merged = std::mem::take(entry);
        merged.extend(value.iter().map(|&(i, c)| (i, sign * c)));
        *entry = normalize(merged);
        Ok(())
    }

    pub fn bracket(mut self, args: &[usize], value: &[(usize, i64)]) -> Result<Self> {
        self.add_bracket(args, value)?;
        Ok(self)
    }

    pub fn weights(mut self, weights: Vec<Vec<i64>>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn build(mut self) -> Result<KaryAlgebra> {
        if self.arity < 2 {
            return Err(Error::input("arity must be at least 2"));
        }
        if self.dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if self.labels.is_empty() {
            self.labels = (0..self.dim).map(|i| format!("e{i}")).collect();
        }
        if self.labels.len() != self.dim {
            return Err(Error::input(format!(
                "{} labels for dimension {}",
                self.labels.len(),
                self.dim
            )));
        }
        self.brackets.retain(|_, v| !v.is_empty());
        let alg = KaryAlgebra {
            arity: self.arity,
            dim: self.dim,
            labels: self.labels,
            brackets: self.brackets,
            weights: self.weights,
        };
        if let Some(w) = &alg.weights {
            if w.len() != alg.dim {
                return Err(Error::input("one weight vector per basis element required"));
            }
            let r = w.first().map_or(0, Vec::len);
            if w.iter().any(|x| x.len() != r) {
                return Err(Error::input("weight vectors must share one rank"));
            }
            if let Some((args, _)) = alg.weight_violations().first() {
                return Err(Error::input(format!("bracket {args:?} is not weight-additive")));
            }
        }
        Ok(alg)
    }
}

impl KaryAlgebra {
    pub fn builder(arity: usize, dim: usize) -> AlgebraBuilder {
        AlgebraBuilder {
            arity,
            dim,
            labels: Vec::new(),
            brackets: BTreeMap::new(),
            weights: None,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        self.weights.as_deref()
    }

    pub fn weight_rank(&self) -> Option<usize> {
        self.weights.as_ref().map(|w| w.first().map_or(0, Vec::len))
    }

    /// Stored brackets on strictly increasing argument tuples.
    pub fn brackets(&self) -> impl Iterator<Item = (&[usize], &SparseVec)> {
        self.brackets.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_brackets(&self) -> usize {
        self.brackets.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Stored value for an already strictly increasing tuple.
    pub fn bracket_sorted(&self, sorted: &[usize]) -> Option<&SparseVec> {
        self.brackets.get(sorted)
    }

    /// Bracket of basis elements in arbitrary order.
    pub fn bracket(&self, indices: &[usize]) -> Result<SparseVec> {
        if indices.len() != self.arity {
            return Err(Error::input(format!(
                "bracket needs {} arguments, got {}",
                self.arity,
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(Error::input(format!("basis index {bad} out of range (dim {})", self.dim)));
        }
        Ok(self.bracket_unchecked(indices))
    }

    pub(crate) fn bracket_unchecked(&self, indices: &[usize]) -> SparseVec {
        match sort_with_sign(indices) {
            None => Vec::new(),
            Some((sign, key)) => self
                .brackets
                .get(&key)
                .map(|v| v.iter().map(|&(i, c)| (i, sign * c)).collect())
                .unwrap_or_default(),
        }
    }

    /// Multilinear extension of the bracket to integer vectors.
    pub fn bracket_vectors(&self, args: &[&[(usize, i64)]]) -> SparseVec {
        debug_assert_eq!(args.len(), self.arity);
        let mut acc: Vec<(usize, i64)> = Vec::new();
        for combo in args.iter().map(|v| v.iter()).multi_cartesian_product() {
            let idx: Vec<usize> = combo.iter().map(|(i, _)| *i).collect();
            let coef: i64 = combo.iter().map(|(_, c)| *c).product();
            for (o, c) in self.bracket_unchecked(&idx) {
                acc.push((o, c * coef));
            }
        }
        normalize(acc)
    }

    fn bracket_rational(&self, args: &[&RatVec]) -> RatVec {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for combo in args.iter().map(|v| v.iter()).multi_cartesian_product() {
            let idx: Vec<usize> = combo.iter().map(|(i, _)| *i).collect();
            let out = self.bracket_unchecked(&idx);
            if out.is_empty() {
                continue;
            }
            let coef: BigRational = combo.iter().fold(BigRational::one(), |a, (_, c)| a * c);
            for (o, c) in out {
                *acc.entry(o).or_insert_with(BigRational::zero) += &coef * rat(c);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Total weight of a set of basis elements.
    pub fn weight_of(&self, indices: &[usize]) -> Option<Vec<i64>> {
        let w = self.weights.as_ref()?;
        let r = w.first().map_or(0, Vec::len);
        let mut acc = vec![0i64; r];
        for &i in indices {
            for (a, b) in acc.iter_mut().zip(&w[i]) {
                *a += b;
            }
        }
        Some(acc)
    }

    /// Brackets whose outputs do not carry the sum of the input weights.
    pub fn weight_violations(&self) -> Vec<(Vec<usize>, usize)> {
        let Some(w) = &self.weights else {
            return Vec::new();
        };
        let mut bad = Vec::new();
        for (args, value) in &self.brackets {
            let total = self.weight_of(args).unwrap();
            for (o, _) in value {
                if w[*o] != total {
                    bad.push((args.clone(), *o));
                }
            }
        }
        bad
    }

    /// Generalized Jacobi identity
    /// `[[x1..xk], y2..yk] = Σ_i [x1..[xi, y2..yk]..xk]`
    /// checked on every sorted inner k-tuple and sorted outer (k-1)-tuple of
    /// basis elements. Returns the violating `(2k-1)`-tuples (inner then outer).
    pub fn check_jacobi(&self) -> Vec<Vec<usize>> {
        let k = self.arity;
        let inners: Vec<Vec<usize>> = (0..self.dim).combinations(k).collect();
        inners
            .par_iter()
            .flat_map_iter(|inner| {
                let mut bad = Vec::new();
                let inner_val = self.bracket_sorted(inner).cloned().unwrap_or_default();
                for outer in (0..self.dim).combinations(k - 1) {
                    let partial: Vec<SparseVec> = inner
                        .iter()
                        .map(|&x| {
                            let mut args = Vec::with_capacity(k);
                            args.push(x);
                            args.extend_from_slice(&outer);
                            self.bracket_unchecked(&args)
                        })
                        .collect();
                    if inner_val.is_empty() && partial.iter().all(Vec::is_empty) {
                        continue;
                    }
                    let outer_vecs: Vec<SparseVec> = outer.iter().map(|&y| vec![(y, 1)]).collect();
                    let mut lhs_args: Vec<&[(usize, i64)]> = vec![&inner_val];
                    lhs_args.extend(outer_vecs.iter().map(Vec::as_slice));
                    let mut residual = self.bracket_vectors(&lhs_args);
                    let inner_vecs: Vec<SparseVec> = inner.iter().map(|&x| vec![(x, 1)]).collect();
                    for (i, p) in partial.iter().enumerate() {
                        if p.is_empty() {
                            continue;
                        }
                        let args: Vec<&[(usize, i64)]> = (0..k)
                            .map(|j| if j == i { p.as_slice() } else { inner_vecs[j].as_slice() })
                            .collect();
                        residual.extend(self.bracket_vectors(&args).into_iter().map(|(o, c)| (o, -c)));
                    }
                    if !normalize(residual).is_empty() {
                        let mut t = inner.clone();
                        t.extend_from_slice(&outer);
                        bad.push(t);
                    }
                }
                bad
            })
            .collect()
    }

    /// `C¹ = g`, `C^{i+1} = [C^i, g, ..., g]`, stopping at the first zero
    /// term or the first term equal to its predecessor (which is not repeated
    /// in the output).
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let n = self.dim;
        let mut series = vec![Subspace::full(n)];
        let tails: Vec<Vec<usize>> = (0..n).combinations(self.arity - 1).collect();
        loop {
            let current = series.last().unwrap();
            if current.is_zero() {
                break;
            }
            let mut gens: Vec<RatVec> = Vec::new();
            for c in current.basis() {
                for tail in &tails {
                    let tail_vecs: Vec<RatVec> =
                        tail.iter().map(|&y| vec![(y, BigRational::one())]).collect();
                    let mut args: Vec<&RatVec> = vec![c];
                    args.extend(tail_vecs.iter());
                    let v = self.bracket_rational(&args);
                    if !v.is_empty() {
                        gens.push(v);
                    }
                }
            }
            let next = Subspace::from_spanning(n, gens);
            if &next == current {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn lower_central_dims(&self) -> Vec<usize> {
        self.lower_central_series().iter().map(Subspace::dim).collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(Subspace::is_zero)
    }

    /// Number of nonzero terms of the lower central series of a nilpotent
    /// algebra (1 for abelian, 2 for 2-step); `None` if not nilpotent.
    pub fn nilpotency_step(&self) -> Option<usize> {
        let s = self.lower_central_series();
        s.last().unwrap().is_zero().then(|| s.len() - 1)
    }

    pub fn is_two_step(&self) -> bool {
        self.nilpotency_step() == Some(2)
    }

    /// Kernel of `v ↦ [v, b_T]` stacked over all (k-1)-subsets `T` of the basis.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows: BTreeMap<(Vec<usize>, usize), RatVec> = BTreeMap::new();
        for tail in (0..n).combinations(self.arity - 1) {
            for j in 0..n {
                let mut args = vec![j];
                args.extend_from_slice(&tail);
                for (o, c) in self.bracket_unchecked(&args) {
                    rows.entry((tail.clone(), o)).or_default().push((j, rat(c)));
                }
            }
        }
        Subspace::kernel(n, rows.into_values())
    }

    /// The isomorphic algebra obtained by replacing basis vector `b_i` with
    /// `signs[i] * b_i`.
    pub fn with_basis_signs(&self, signs: &[i64]) -> Result<KaryAlgebra> {
        if signs.len() != self.dim || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::input("need one ±1 sign per basis element"));
        }
        let mut out = self.clone();
        for (args, value) in out.brackets.iter_mut() {
            let s: i64 = args.iter().map(|&i| signs[i]).product();
            for (o, c) in value.iter_mut() {
                *c *= s * signs[*o];
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> AlgebraDoc {
        AlgebraDoc {
            arity: self.arity,
            dim: self.dim,
            labels: self.labels.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(args, value)| BracketDoc {
                    args: args.clone(),
                    value: value.iter().map(|&(i, c)| (Coeff::Int(c), i)).collect(),
                })
                .collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<KaryAlgebra> {
        let doc: AlgebraDoc = serde_json::from_str(s)?;
        doc.into_algebra()
    }
}

/// JSON document for a custom algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub arity: usize,
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketDoc {
    pub args: Vec<usize>,
    pub value: Vec<(Coeff, usize)>,
}

/// Integer coefficient, or a rational written as `"p/q"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            Coeff::Int(c) => Ok(rat(*c)),
            Coeff::Text(s) => {
                let bad = || Error::input(format!("cannot parse coefficient {s:?}"));
                let (p, q) = match s.split_once('/') {
                    Some((p, q)) => (p.trim(), q.trim()),
                    None => (s.trim(), "1"),
                };
                let p: BigInt = p.parse().map_err(|_| bad())?;
                let q: BigInt = q.parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(p, q))
            }
        }
    }
}

impl AlgebraDoc {
    /// Validates the document and clears rational coefficients to integers by
    /// one common denominator for the whole algebra.
    pub fn into_algebra(self) -> Result<KaryAlgebra> {
        let mut parsed = Vec::with_capacity(self.brackets.len());
        let mut lcm = BigInt::one();
        for b in &self.brackets {
            if b.args.len() != self.arity {
                return Err(Error::input(format!("bracket args {:?} do not have length {}", b.args, self.arity)));
            }
            if !b.args.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::input(format!("bracket args {:?} are not strictly increasing", b.args)));
            }
            let mut vals = Vec::with_capacity(b.value.len());
            for (c, i) in &b.value {
                let q = c.to_rational()?;
                lcm = lcm.lcm(q.denom());
                vals.push((*i, q));
            }
            parsed.push((b.args.clone(), vals));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut builder = KaryAlgebra::builder(self.arity, self.dim).labels(self.labels);
        for (args, vals) in parsed {
            if !seen.insert(args.clone()) {
                return Err(Error::input(format!("duplicate bracket for args {args:?}")));
            }
            let ints: Result<Vec<(usize, i64)>> = vals
                .into_iter()
                .map(|(i, q)| {
                    let scaled = q * BigRational::from_integer(lcm.clone());
                    scaled
                        .to_integer()
                        .to_i64()
                        .filter(|_| scaled.is_integer())
                        .map(|c| (i, c))
                        .ok_or_else(|| Error::input("structure constant does not fit in 64 bits"))
                })
                .collect();
            builder.add_bracket(&args, &ints?)?;
        }
        if let Some(w) = self.weights {
            builder = builder.weights(w);
        }
        builder.build()
    }
}
