//! Betti numbers, homology reports and the closed-form validators.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::KaryAlgebra;
use crate::combinatorics::{binom, binom_i, insert_front};
use crate::complex::{differential_matrix, weight_blocks, ChainLayout, ShuffleSet, SubsetIndexer};
use crate::error::{Error, Result};
use crate::families::{acj, current_algebra, free_three_step_small, heisenberg};
use crate::rank::rank;
use crate::sparse::SparseIntMatrix;
use crate::toral::refinement_bound;

/// Guards against chain spaces too large to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub size_cap: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { size_cap: 1_000_000 }
    }
}

impl Limits {
    pub fn check(&self, alg: &KaryAlgebra, t: usize) -> Result<()> {
        let size = binom(alg.dim() as i64, t as i64);
        if size > self.size_cap {
            return Err(Error::Resource { degree: t, size, cap: self.size_cap });
        }
        Ok(())
    }
}

/// Rank of `∂_t`, zero when `t < k` or `t > dim`. Graded algebras are ranked
/// block by block.
pub fn differential_rank(alg: &KaryAlgebra, t: usize, limits: &Limits) -> Result<usize> {
    if t < alg.arity() || t > alg.dim() {
        return Ok(0);
    }
    limits.check(alg, t)?;
    limits.check(alg, t + 1 - alg.arity())?;
    if alg.weights().is_some() {
        let blocks = weight_blocks(alg, t)?;
        Ok(blocks.par_iter().map(|b| rank(&b.matrix)).sum())
    } else {
        Ok(rank(&differential_matrix(alg, t)?))
    }
}

fn ranks_for(alg: &KaryAlgebra, degrees: &[usize], limits: &Limits) -> Result<BTreeMap<usize, usize>> {
    degrees
        .par_iter()
        .map(|&t| differential_rank(alg, t, limits).map(|r| (t, r)))
        .collect()
}

/// `dim ker ∂_t − rank ∂_{t+k−1}` at a layout degree `t`.
pub fn betti(alg: &KaryAlgebra, t: usize) -> Result<u128> {
    betti_with(alg, t, &Limits::default())
}

pub fn betti_with(alg: &KaryAlgebra, t: usize, limits: &Limits) -> Result<u128> {
    let layout = ChainLayout::new(alg);
    if !layout.contains(t) {
        return Err(Error::input(format!("degree {t} is not a chain degree of the complex")));
    }
    if t == 0 {
        return Ok(1);
    }
    limits.check(alg, t)?;
    let r_out = differential_rank(alg, t, limits)? as u128;
    let r_in = differential_rank(alg, t + alg.arity() - 1, limits)? as u128;
    Ok(layout.chain_dim(t) - r_out - r_in)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRecord {
    pub degree: usize,
    pub chain_dim: u128,
    /// `dim ker ∂_t`
    pub kernel: u128,
    /// `rank ∂_{t+k−1}`
    pub image: u128,
    pub betti: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<i128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

/// Homology of one algebra at every chain degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub algebra: String,
    pub arity: usize,
    pub dim: usize,
    pub degrees: Vec<DegreeRecord>,
    /// Including `H⁰ = 1`.
    pub total: u128,
    pub total_without_h0: u128,
    pub euler_chain: i128,
    pub euler_homology: i128,
}

impl HomologyReport {
    pub fn betti(&self, t: usize) -> Option<u128> {
        self.degrees.iter().find(|d| d.degree == t).map(|d| d.betti)
    }

    /// Betti numbers of the positive degrees, in order.
    pub fn positive_betti(&self) -> Vec<u128> {
        self.degrees.iter().filter(|d| d.degree > 0).map(|d| d.betti).collect()
    }

    pub fn betti_map(&self) -> BTreeMap<usize, u128> {
        self.degrees.iter().map(|d| (d.degree, d.betti)).collect()
    }

    pub fn euler_holds(&self) -> bool {
        self.euler_chain == self.euler_homology
    }

    /// `image <= kernel` at every degree.
    pub fn image_in_kernel(&self) -> bool {
        self.degrees.iter().all(|d| d.image <= d.kernel)
    }

    /// Records `formula(t)` next to each degree where it is defined.
    pub fn attach_formula(&mut self, formula: impl Fn(usize) -> Option<i128>) {
        for d in self.degrees.iter_mut() {
            d.formula = formula(d.degree);
            d.matches = d.formula.map(|f| f == d.betti as i128);
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,chain_dim,kernel,image,betti,formula,match\n");
        for d in &self.degrees {
            let f = d.formula.map(|v| v.to_string()).unwrap_or_default();
            let m = d.matches.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{},{},{},{}", d.degree, d.chain_dim, d.kernel, d.image, d.betti, f, m);
        }
        s
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (k={}, dim={})", self.algebra, self.arity, self.dim)?;
        for d in &self.degrees {
            write!(f, "  H^{:<3} = {:>10}   (chain {}, ker {}, im {})", d.degree, d.betti, d.chain_dim, d.kernel, d.image)?;
            if let Some(v) = d.formula {
                write!(f, "   formula {v} {}", if d.matches == Some(true) { "ok" } else { "MISMATCH" })?;
            }
            writeln!(f)?;
        }
        writeln!(f, "  total {} ({} without H^0)", self.total, self.total_without_h0)?;
        write!(f, "  euler {} / {}", self.euler_homology, self.euler_chain)
    }
}

/// Betti numbers at every chain degree, with `H⁰ = 1`.
pub fn betti_all(alg: &KaryAlgebra, limits: &Limits) -> Result<HomologyReport> {
    betti_all_named(alg, &format!("custom(k={}, dim={})", alg.arity(), alg.dim()), limits)
}

pub fn betti_all_named(alg: &KaryAlgebra, name: &str, limits: &Limits) -> Result<HomologyReport> {
    let layout = ChainLayout::new(alg);
    let degrees = layout.degrees();
    for &t in &degrees {
        limits.check(alg, t)?;
    }
    let ranks = ranks_for(alg, &degrees, limits)?;
    let k = alg.arity();
    let mut records = Vec::with_capacity(degrees.len());
    for &t in &degrees {
        let chain_dim = layout.chain_dim(t);
        let (kernel, image) = if t == 0 {
            (1, 0)
        } else {
            let out = ranks[&t] as u128;
            let inc = ranks.get(&(t + k - 1)).copied().unwrap_or(0) as u128;
            (chain_dim - out, inc)
        };
        if image > kernel {
            return Err(Error::Internal(format!("image exceeds kernel at degree {t}")));
        }
        records.push(DegreeRecord { degree: t, chain_dim, kernel, image, betti: kernel - image, formula: None, matches: None });
    }
    let total: u128 = records.iter().map(|d| d.betti).sum();
    let sign = |p: usize| if p.is_multiple_of(2) { 1i128 } else { -1 };
    let euler_chain = records.iter().enumerate().map(|(p, d)| sign(p) * d.chain_dim as i128).sum();
    let euler_homology = records.iter().enumerate().map(|(p, d)| sign(p) * d.betti as i128).sum();
    Ok(HomologyReport {
        algebra: name.to_string(),
        arity: k,
        dim: alg.dim(),
        degrees: records,
        total,
        total_without_h0: total - 1,
        euler_chain,
        euler_homology,
    })
}

/// Total homology when `∂` is applied on every exterior power, not only on the
/// chain degrees: `Σ_t C(n,t) − rank ∂_t − rank ∂_{t+k−1}`.
pub fn exterior_total_homology(alg: &KaryAlgebra, limits: &Limits) -> Result<u128> {
    let n = alg.dim();
    let degrees: Vec<usize> = (0..=n).collect();
    for &t in &degrees {
        limits.check(alg, t)?;
    }
    let ranks = ranks_for(alg, &degrees, limits)?;
    let k = alg.arity();
    Ok(degrees
        .iter()
        .map(|&t| binom(n as i64, t as i64) - ranks[&t] as u128 - ranks.get(&(t + k - 1)).copied().unwrap_or(0) as u128)
        .sum())
}

/// One comparison inside a validation run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub relation: &'static str,
    pub expected: String,
    pub actual: String,
    /// Report-only checks never fail a validation.
    pub asserted: bool,
    pub passed: bool,
}

impl Check {
    pub fn eq<E, A>(name: impl Into<String>, expected: E, actual: A, asserted: bool) -> Self
    where
        E: fmt::Display + PartialEq<A>,
        A: fmt::Display,
    {
        let passed = expected == actual;
        Check { name: name.into(), relation: "=", expected: expected.to_string(), actual: actual.to_string(), asserted, passed }
    }

    /// `actual >= bound`.
    pub fn at_least(name: impl Into<String>, bound: &BigInt, actual: &BigInt) -> Self {
        Check {
            name: name.into(),
            relation: ">=",
            expected: bound.to_string(),
            actual: actual.to_string(),
            asserted: true,
            passed: actual >= bound,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), relation: "holds", expected: "true".into(), actual: ok.to_string(), asserted: true, passed: ok }
    }

    pub fn failed(&self) -> bool {
        self.asserted && !self.passed
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.asserted, self.passed) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, true) => "info",
            (false, false) => "info*",
        };
        write!(f, "[{tag}] {}: expected {} {}, got {}", self.name, self.relation, self.expected, self.actual)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Validation {
    pub fn new(subject: impl Into<String>) -> Self {
        Validation { subject: subject.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn extend(&mut self, other: Validation) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        write!(f, "  => {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Largest `i` for which the Heisenberg formulas are claimed.
pub fn heisenberg_valid_range(k: usize, m: usize) -> usize {
    (k * m).div_ceil(2).saturating_sub(1) / (k - 1)
}

/// `C(km, i(k−1)+1) − C(km, (i−1)(k−1))`.
pub fn heisenberg_betti_formula(k: usize, m: usize, i: usize) -> i128 {
    let km = (k * m) as i64;
    binom_i(km, (i * (k - 1) + 1) as i64) - binom_i(km, ((i - 1) * (k - 1)) as i64)
}

pub fn verify_heisenberg(k: usize, m: usize, limits: &Limits) -> Result<Validation> {
    let alg = heisenberg(k, m)?;
    let report = betti_all_named(&alg, &format!("heisenberg(k={k}, m={m})"), limits)?;
    let range = heisenberg_valid_range(k, m);
    let mut v = Validation::new(report.algebra.clone());
    let mut i = 1;
    while i * (k - 1) < alg.dim() {
        let t = i * (k - 1) + 1;
        let asserted = i <= range;
        let direct = report.betti(t).unwrap() as i128;
        v.push(Check::eq(format!("H^{t} (i={i})"), heisenberg_betti_formula(k, m, i), direct, asserted));
        let r = differential_rank(&alg, t, limits)? as i128;
        let expected = binom_i((k * m) as i64, ((i - 1) * (k - 1)) as i64);
        v.push(Check::eq(format!("rank ∂_{t} (i={i})"), expected, r, asserted));
        i += 1;
    }
    Ok(v)
}

/// The distinguished element `z` of an algebra whose brackets all have the
/// form `[z, a_1, …, a_{k−1}] ∈ a` for the span `a` of the other basis
/// vectors.
pub fn acj_shape(alg: &KaryAlgebra) -> Result<usize> {
    let mut candidates: Vec<usize> = (0..alg.dim()).collect();
    let mut any = false;
    for (args, value) in alg.brackets() {
        any = true;
        candidates.retain(|c| args.contains(c) && value.iter().all(|(o, _)| o != c));
    }
    if !any {
        return Err(Error::NotAcjShaped("no brackets".into()));
    }
    candidates
        .first()
        .copied()
        .ok_or_else(|| Error::NotAcjShaped("no basis vector occurs in every bracket".into()))
}

/// `θ_j : Λ^j a → Λ^{j−k+2} a`, `x_1∧…∧x_j ↦ Σ ± [z, x_S] ∧ x_rest` over the
/// `(k−1)`-subsets `S`.
#[derive(Clone, Debug)]
pub struct ThetaMap {
    pub j: usize,
    pub z: usize,
    pub matrix: SparseIntMatrix,
}

impl ThetaMap {
    pub fn kernel_dim(&self) -> usize {
        self.matrix.cols() - rank(&self.matrix)
    }
}

pub fn theta_matrix(alg: &KaryAlgebra, j: usize) -> Result<ThetaMap> {
    let z = acj_shape(alg)?;
    let k = alg.arity();
    let amb: Vec<usize> = (0..alg.dim()).filter(|&i| i != z).collect();
    let na = amb.len();
    let local = |i: usize| if i < z { i } else { i - 1 };
    let domain: Vec<Vec<usize>> = (0..na).combinations(j).collect();
    if j + 2 < k {
        return Ok(ThetaMap { j, z, matrix: SparseIntMatrix::zeros(0, domain.len()) });
    }
    let target = j + 2 - k;
    let rows = SubsetIndexer::new(na, target);
    let n_rows = if target <= na { rows.len() } else { 0 };
    let columns: Vec<Vec<(usize, i64)>> = domain
        .par_iter()
        .map(|m| {
            let mut col = Vec::new();
            for (sign, pos) in ShuffleSet::new(m.len(), k - 1) {
                let mut args = vec![z];
                args.extend(pos.iter().map(|&p| amb[m[p]]));
                let value = alg.bracket_unchecked(&args);
                if value.is_empty() {
                    continue;
                }
                let rest: Vec<usize> = (0..m.len()).filter(|p| !pos.contains(p)).map(|p| m[p]).collect();
                for (o, c) in value {
                    if let Some((s, w)) = insert_front(local(o), &rest) {
                        col.push((rows.rank(&w), sign * s * c));
                    }
                }
            }
            col
        })
        .collect();
    Ok(ThetaMap { j, z, matrix: SparseIntMatrix::from_columns(n_rows, columns)? })
}

fn theta_kernel(alg: &KaryAlgebra, j: usize) -> Result<i128> {
    if j > alg.dim() - 1 {
        return Ok(0);
    }
    Ok(theta_matrix(alg, j)?.kernel_dim() as i128)
}

/// `C(km,α) − C(km,α+k−2) + dim ker θ_{α−1} + dim ker θ_{α+k−2}`.
pub fn acj_homology_via_theta(alg: &KaryAlgebra, alpha: usize) -> Result<i128> {
    if alpha == 0 {
        return Err(Error::input("θ route needs a positive degree"));
    }
    let k = alg.arity();
    let km = (alg.dim() - 1) as i64;
    Ok(binom_i(km, alpha as i64) - binom_i(km, (alpha + k - 2) as i64)
        + theta_kernel(alg, alpha - 1)?
        + theta_kernel(alg, alpha + k - 2)?)
}

/// `C(km+1,k) − m·C(km−k,k−1) − C(m+1,2)`.
pub fn acj_second_homology_formula(k: usize, m: usize) -> i128 {
    let km = (k * m) as i64;
    let k = k as i64;
    binom_i(km + 1, k) - m as i128 * binom_i(km - k, k - 1) - binom_i(m as i64 + 1, 2)
}

/// `C(m+1,⌊(i+1)/2⌋)·C(m,⌊i/2⌋)`, the Betti numbers for `k = 2`.
pub fn acj_k2_betti_formula(m: usize, i: usize) -> i128 {
    binom_i(m as i64 + 1, i.div_ceil(2) as i64) * binom_i(m as i64, (i / 2) as i64)
}

pub fn verify_acj(k: usize, m: usize, limits: &Limits) -> Result<Validation> {
    let alg = acj(k, m)?;
    let report = betti_all_named(&alg, &format!("acj(k={k}, m={m})"), limits)?;
    let mut v = Validation::new(report.algebra.clone());
    if k == 2 {
        for t in 1..=alg.dim() {
            v.push(Check::eq(format!("H^{t} closed form"), acj_k2_betti_formula(m, t), report.betti(t).unwrap() as i128, true));
        }
    }
    if let Some(h) = report.betti(k) {
        v.push(Check::eq(format!("H^{k} closed form"), acj_second_homology_formula(k, m), h as i128, true));
    }
    for d in report.degrees.iter().filter(|d| d.degree > 0) {
        let via = acj_homology_via_theta(&alg, d.degree)?;
        v.push(Check::eq(format!("H^{} via θ", d.degree), via, d.betti as i128, true));
    }
    Ok(v)
}

/// Expected `(degree, Betti)` pairs for the small free 3-step algebra.
pub fn free3_expected(k: usize) -> Vec<(usize, i128)> {
    if k == 3 {
        return vec![(1, 3), (3, 24), (5, 14), (7, 1)];
    }
    let k_ = k as i64;
    vec![
        (1, k as i128),
        (k, binom_i(2 * k_ + 1, k_) - (3 * k as i128 + 2)),
        (2 * k - 1, (2 * k as i128 + 1) * (k as i128 - 1)),
    ]
}

pub fn verify_free3(k: usize, limits: &Limits) -> Result<Validation> {
    let alg = free_three_step_small(k)?;
    let report = betti_all_named(&alg, &format!("free3small(k={k})"), limits)?;
    let mut v = Validation::new(report.algebra.clone());
    for (t, expected) in free3_expected(k) {
        v.push(Check::eq(format!("H^{t}"), expected, report.betti(t).unwrap_or(0) as i128, true));
    }
    Ok(v)
}

/// Direct totals for a truncated current algebra against `total(g)^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyMReport {
    pub algebra: String,
    pub j: usize,
    pub current_dim: usize,
    pub current_two_step: bool,
    pub current_center_dim: usize,
    /// Chain-degree totals, `H⁰` included.
    pub total: u128,
    pub total_current: u128,
    pub total_power: String,
    /// Totals with `∂` applied on every exterior power.
    pub exterior_total: u128,
    pub exterior_total_current: u128,
    pub exterior_total_power: String,
    /// `refinement_bound(dim, 0, k)`, the whole algebra treated as `v`.
    pub refinement_bound_full: String,
    /// `refinement_bound(dim − dim z, dim z, k)` with `z` the center.
    pub refinement_bound_split: String,
    pub holds: bool,
    pub holds_exterior: bool,
}

pub fn property_m_check(alg: &KaryAlgebra, name: &str, j: usize, limits: &Limits) -> Result<PropertyMReport> {
    let cur = current_algebra(alg, j)?;
    let base = betti_all(alg, limits)?;
    let current = betti_all(&cur, limits)?;
    let ext = exterior_total_homology(alg, limits)?;
    let ext_cur = exterior_total_homology(&cur, limits)?;
    let power = BigInt::from(base.total).pow(j as u32);
    let ext_power = BigInt::from(ext).pow(j as u32);
    let zc = cur.center().dim();
    let k = alg.arity();
    Ok(PropertyMReport {
        algebra: name.to_string(),
        j,
        current_dim: cur.dim(),
        current_two_step: cur.is_two_step(),
        current_center_dim: zc,
        total: base.total,
        total_current: current.total,
        holds: BigInt::from(current.total) == power,
        total_power: power.to_string(),
        exterior_total: ext,
        exterior_total_current: ext_cur,
        holds_exterior: BigInt::from(ext_cur) == ext_power,
        exterior_total_power: ext_power.to_string(),
        refinement_bound_full: refinement_bound(cur.dim(), 0, k).to_string(),
        refinement_bound_split: refinement_bound(cur.dim() - zc, zc, k).to_string(),
    })
}
