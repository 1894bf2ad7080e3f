//! Partitions, Schur characters and GL(V)-decompositions of homology.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::KaryAlgebra;
use crate::combinatorics::{binom_bigint, binom_i};
use crate::complex::{differential_matrix, weight_classes, ChainLayout};
use crate::error::{Error, Result};
use crate::families::free_two_step;
use crate::homology::Limits;
use crate::rank::rank;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Drops trailing zeros; errors if the parts increase.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::input(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    /// From a dominant weight (weakly decreasing, nonnegative).
    pub fn from_weight(w: &[i64]) -> Result<Self> {
        if w.iter().any(|&x| x < 0) {
            return Err(Error::input(format!("weight {w:?} has a negative entry")));
        }
        Partition::new(w.iter().map(|&x| x as u32).collect())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|c| self.0.iter().filter(|&&p| p >= c).count() as u32).collect())
    }

    /// `(2^a, 1^b)`.
    pub fn twos_ones(a: usize, b: usize) -> Partition {
        let mut v = vec![2; a];
        v.extend(std::iter::repeat_n(1, b));
        Partition(v)
    }

    /// The partition padded with zeros to length `n`.
    pub fn weight(&self, n: usize) -> Vec<i64> {
        let mut w: Vec<i64> = self.0.iter().map(|&p| p as i64).collect();
        w.resize(n.max(w.len()), 0);
        w
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// `dim S_λ(C^n) = Π (n + content) / hook`, zero if `λ` has more than `n` rows.
pub fn schur_dim(lambda: &Partition, n: usize) -> u128 {
    if lambda.rows() > n {
        return 0;
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            num *= BigUint::from(n + j - i);
            let arm = row as usize - j - 1;
            let leg = conj.parts()[j] as usize - i - 1;
            den *= BigUint::from(arm + leg + 1);
        }
    }
    (num / den).to_u128().expect("dimension fits in u128")
}

type Character = BTreeMap<Vec<i64>, u64>;

fn character_cache() -> &'static Mutex<HashMap<(Partition, usize), Arc<Character>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Partition, usize), Arc<Character>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Weights of the semistandard tableaux of shape `λ` with entries `1..=n`,
/// with multiplicities (Kostka numbers), cached per `(λ, n)`.
pub fn schur_character(lambda: &Partition, n: usize) -> Arc<Character> {
    let key = (lambda.clone(), n);
    if let Some(c) = character_cache().lock().unwrap().get(&key) {
        return c.clone();
    }
    let c = Arc::new(compute_character(lambda.parts(), n));
    character_cache().lock().unwrap().insert(key, c.clone());
    c
}

// Branching: the entries equal to n form a horizontal strip λ/μ.
fn compute_character(lambda: &[u32], n: usize) -> Character {
    let mut out = Character::new();
    if lambda.len() > n {
        return out;
    }
    if n == 0 {
        out.insert(Vec::new(), 1);
        return out;
    }
    if lambda.is_empty() {
        out.insert(vec![0; n], 1);
        return out;
    }
    let total: u32 = lambda.iter().sum();
    // μ_i ∈ [λ_{i+1}, λ_i], μ has at most n-1 rows
    let ranges: Vec<std::ops::RangeInclusive<u32>> = (0..lambda.len())
        .map(|i| lambda.get(i + 1).copied().unwrap_or(0)..=lambda[i])
        .collect();
    for mu in ranges.into_iter().multi_cartesian_product() {
        let mut mu = mu;
        while mu.last() == Some(&0) {
            mu.pop();
        }
        if mu.len() > n - 1 {
            continue;
        }
        let strip = (total - mu.iter().sum::<u32>()) as i64;
        let sub = schur_character(&Partition(mu), n - 1);
        for (w, m) in sub.iter() {
            let mut w = w.clone();
            w.push(strip);
            *out.entry(w).or_insert(0) += m;
        }
    }
    out
}

/// Multiplicity of each weight of a `GL_n`-module.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub n: usize,
    pub entries: BTreeMap<Vec<i64>, u64>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Self {
        CharacterTable { n, entries: BTreeMap::new() }
    }

    pub fn of_partition(lambda: &Partition, n: usize) -> Self {
        CharacterTable { n, entries: (*schur_character(lambda, n)).clone() }
    }

    pub fn multiplicity(&self, w: &[i64]) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.entries.values().map(|&m| m as u128).sum()
    }

    /// Invariance under every permutation of the weight coordinates.
    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(w, &m)| {
            let mut d = w.clone();
            d.sort_unstable_by(|a, b| b.cmp(a));
            self.multiplicity(&d) == m
                && (0..w.len().saturating_sub(1)).all(|i| {
                    let mut s = w.clone();
                    s.swap(i, i + 1);
                    self.multiplicity(&s) == m
                })
        })
    }

    /// Weakly decreasing weights, in decreasing lexicographic order.
    pub fn dominant_weights(&self) -> Vec<(Vec<i64>, u64)> {
        self.entries
            .iter()
            .rev()
            .filter(|(w, _)| w.windows(2).all(|p| p[0] >= p[1]))
            .map(|(w, &m)| (w.clone(), m))
            .collect()
    }

    fn add_scaled(&mut self, other: &Character, scale: u64) {
        for (w, m) in other {
            *self.entries.entry(w.clone()).or_insert(0) += m * scale;
        }
    }
}

/// Multiplicities of the homology at chain degree `t`, weight by weight:
/// `C_w(t) − rank ∂_t|_w − rank ∂_{t+k−1}|_w`.
pub fn character_by_weights(alg: &KaryAlgebra, t: usize, limits: &Limits) -> Result<CharacterTable> {
    let n = alg.weight_rank().ok_or(Error::NotGraded)?;
    let layout = ChainLayout::new(alg);
    if !layout.contains(t) || t == 0 {
        return Err(Error::input(format!("degree {t} is not a positive chain degree")));
    }
    let k = alg.arity();
    limits.check(alg, t)?;
    let classes = weight_classes(alg, t)?;
    let block_ranks = |deg: usize| -> Result<BTreeMap<Vec<i64>, usize>> {
        if deg < k || deg > alg.dim() {
            return Ok(BTreeMap::new());
        }
        limits.check(alg, deg)?;
        let full = differential_matrix(alg, deg)?;
        let cols = weight_classes(alg, deg)?;
        let rows = weight_classes(alg, deg + 1 - k)?;
        Ok(cols
            .into_par_iter()
            .filter_map(|(w, ci)| {
                let ri = rows.get(&w)?;
                Some((w, rank(&full.submatrix(ri, &ci))))
            })
            .collect())
    };
    let out_ranks = block_ranks(t)?;
    let in_ranks = block_ranks(t + k - 1)?;
    let mut table = CharacterTable::new(n);
    for (w, idx) in classes {
        let m = idx.len() - out_ranks.get(&w).copied().unwrap_or(0) - in_ranks.get(&w).copied().unwrap_or(0);
        if m > 0 {
            table.entries.insert(w, m as u64);
        }
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurSummand {
    pub partition: Partition,
    pub multiplicity: u64,
    pub dimension: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurDecomposition {
    pub n: usize,
    pub summands: Vec<SchurSummand>,
}

impl SchurDecomposition {
    pub fn total_dimension(&self) -> u128 {
        self.summands.iter().map(|s| s.multiplicity as u128 * s.dimension).sum()
    }

    /// Partitions with multiplicity, sorted.
    pub fn partitions(&self) -> BTreeMap<Partition, u64> {
        self.summands.iter().map(|s| (s.partition.clone(), s.multiplicity)).collect()
    }

    pub fn contains(&self, lambda: &Partition) -> bool {
        self.summands.iter().any(|s| &s.partition == lambda)
    }

    /// Sum of the Schur characters of the summands.
    pub fn character(&self) -> CharacterTable {
        let mut t = CharacterTable::new(self.n);
        for s in &self.summands {
            t.add_scaled(&schur_character(&s.partition, self.n), s.multiplicity);
        }
        t
    }
}

impl fmt::Display for SchurDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| if s.multiplicity == 1 { format!("S{}", s.partition) } else { format!("{}·S{}", s.multiplicity, s.partition) })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Peels off the lexicographically greatest dominant weight until the table
/// is empty.
pub fn decompose_character(table: &CharacterTable) -> Result<SchurDecomposition> {
    if !table.is_symmetric() {
        return Err(Error::input("character table is not symmetric under coordinate permutations"));
    }
    let n = table.n;
    let mut rest: BTreeMap<Vec<i64>, i128> = table.entries.iter().map(|(w, &m)| (w.clone(), m as i128)).collect();
    let mut summands = Vec::new();
    loop {
        let top = rest
            .iter()
            .rev()
            .find(|(w, &m)| m > 0 && w.windows(2).all(|p| p[0] >= p[1]))
            .map(|(w, &m)| (w.clone(), m));
        let Some((w, m)) = top else { break };
        let lambda = Partition::from_weight(&w)
            .map_err(|_| Error::Internal(format!("dominant weight {w:?} is not polynomial")))?;
        for (cw, cm) in schur_character(&lambda, n).iter() {
            let e = rest.entry(cw.clone()).or_insert(0);
            *e -= m * *cm as i128;
            if *e < 0 {
                return Err(Error::Internal(format!("negative multiplicity at weight {cw:?} after removing S{lambda}")));
            }
        }
        rest.retain(|_, m| *m != 0);
        summands.push(SchurSummand { dimension: schur_dim(&lambda, n), partition: lambda, multiplicity: m as u64 });
    }
    if let Some((w, m)) = rest.iter().next() {
        return Err(Error::Internal(format!("weight {w:?} left with multiplicity {m} after peeling")));
    }
    Ok(SchurDecomposition { n, summands })
}

/// Decomposition of `H^t(free_two_step(k, n))`.
pub fn decompose_free_two_step(k: usize, n: usize, t: usize, limits: &Limits) -> Result<SchurDecomposition> {
    let alg = free_two_step(k, n)?;
    decompose_character(&character_by_weights(&alg, t, limits)?)
}

/// `C(n,k)C(x,α) − C(n,2k)C(x,α−1) − C(n,0)C(x,α+1)` with `α = (i−1)(k−1)`
/// and `x = C(n,k)`.
pub fn lower_bound_betti(n: usize, k: usize, i: usize) -> BigInt {
    let (n, k) = (n as i64, k as i64);
    let alpha = (i as i64 - 1) * (k - 1);
    let x = binom_bigint(n, k).to_i64().expect("x fits in i64");
    binom_bigint(n, k) * binom_bigint(x, alpha)
        - binom_bigint(n, 2 * k) * binom_bigint(x, alpha - 1)
        - binom_bigint(x, alpha + 1)
}

/// `C(n,k)C(n,k−1) − C(n,2k−1)`.
pub fn second_homology_bound(n: usize, k: usize) -> i128 {
    let (n, k) = (n as i64, k as i64);
    binom_i(n, k) * binom_i(n, k - 1) - binom_i(n, 2 * k - 1)
}

/// Leading-order estimate of [`lower_bound_betti`] for large `n`:
/// `e^{2k} n^{2k} / (2k^{2k}) · (1/(πk) − (α+1)/(√(πk) 2^{2k})) · C(x,α) / ((α+1)(x−α+1))`.
pub fn asymptotic_bound(n: usize, k: usize, i: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let alpha = (i - 1) * (k - 1);
    let x = binom_bigint(n as i64, k as i64);
    let cx = binom_bigint(x.to_i64().unwrap(), alpha as i64).to_f64().unwrap();
    let xf = x.to_f64().unwrap();
    let a1 = alpha as f64 + 1.0;
    let pk = std::f64::consts::PI * kf;
    let lead = (2.0 * kf).exp() * nf.powf(2.0 * kf) / (2.0 * kf.powf(2.0 * kf));
    lead * (1.0 / pk - a1 / (pk.sqrt() * 2f64.powf(2.0 * kf))) * cx / (a1 * (xf - alpha as f64 + 1.0))
}

/// `x·C(x,α) = C(x,α+1) + dim S_{(2,1^{α−1})}(C^x)`.
pub fn pieri_dimension_check(x: usize, alpha: usize) -> bool {
    assert!(x >= 1 && alpha >= 1);
    let lhs = x as i128 * binom_i(x as i64, alpha as i64);
    let hook = schur_dim(&Partition::twos_ones(1, alpha - 1), x) as i128;
    lhs == binom_i(x as i64, alpha as i64 + 1) + hook
}

/// `S_{2^j 1^{2k−2j−1}}` for `j = 1..k−1`, or with exponent `2k−2j+1` when
/// `proof_exponent` is false.
pub fn second_homology_summands(k: usize, proof_exponent: bool) -> Vec<Partition> {
    (1..k)
        .map(|j| {
            let ones = if proof_exponent { 2 * k - 2 * j - 1 } else { 2 * k - 2 * j + 1 };
            Partition::twos_ones(j, ones)
        })
        .collect()
}

/// Summands from [`second_homology_summands`] that fit in `n` rows but are
/// missing from `H^k(free_two_step(k, n))`.
pub fn missing_second_homology_summands(k: usize, n: usize, proof_exponent: bool, limits: &Limits) -> Result<Vec<Partition>> {
    let d = decompose_free_two_step(k, n, k, limits)?;
    Ok(second_homology_summands(k, proof_exponent)
        .into_iter()
        .filter(|p| p.rows() <= n && !d.contains(p))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub k: usize,
    pub t: usize,
    pub decompositions: Vec<SchurDecomposition>,
    /// Smallest `n` from which every decomposition has the same partitions as
    /// the last one.
    pub stable_from: usize,
    /// At least two consecutive values of `n` agree at the tail.
    pub stable: bool,
}

pub fn stability_check(k: usize, t: usize, ns: &[usize], limits: &Limits) -> Result<StabilityReport> {
    if ns.is_empty() {
        return Err(Error::input("need at least one n"));
    }
    let decompositions: Vec<SchurDecomposition> = ns
        .par_iter()
        .map(|&n| decompose_free_two_step(k, n, t, limits))
        .collect::<Result<_>>()?;
    let last = decompositions.last().unwrap().partitions();
    let tail = decompositions.iter().rev().take_while(|d| d.partitions() == last).count();
    let stable_from = ns[ns.len() - tail];
    Ok(StabilityReport { k, t, decompositions, stable_from, stable: tail >= 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::abelian;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(schur_dim(&p(&[2, 2, 1]), 3), 3);
        assert_eq!(schur_dim(&p(&[3, 2, 1, 1]), 4), 20);
        assert_eq!(schur_dim(&p(&[2, 1, 1, 1]), 4), 4);
        assert_eq!(schur_dim(&p(&[2, 2, 1]), 5), 75);
        assert_eq!(schur_dim(&p(&[1, 1, 1]), 6), 20);
        assert_eq!(schur_dim(&p(&[1, 1, 1, 1]), 3), 0);
        assert_eq!(schur_dim(&p(&[]), 3), 1);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
    }

    #[test]
    fn characters_match_dimensions() {
        for lambda in [p(&[2, 1]), p(&[2, 2, 1]), p(&[3, 2, 1, 1])] {
            for n in 1..=5 {
                let c = schur_character(&lambda, n);
                assert_eq!(c.values().map(|&m| m as u128).sum::<u128>(), schur_dim(&lambda, n));
            }
        }
        let c = schur_character(&p(&[2, 1]), 3);
        assert_eq!(c[&vec![1, 1, 1]], 2);
    }

    #[test]
    fn peel_exterior_square() {
        let g = KaryAlgebra::builder(2, 3)
            .weights(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
            .build()
            .unwrap();
        let table = character_by_weights(&g, 2, &Limits::default()).unwrap();
        assert_eq!(table.total(), 3);
        let d = decompose_character(&table).unwrap();
        assert_eq!(d.partitions(), BTreeMap::from([(p(&[1, 1]), 1)]));
        assert_eq!(d.character(), table);
        assert!(character_by_weights(&abelian(2, 3).unwrap(), 2, &Limits::default()).is_err());
    }

    #[test]
    fn free_two_step_h3() {
        let d = decompose_free_two_step(3, 3, 3, &Limits::default()).unwrap();
        assert_eq!(d.partitions(), BTreeMap::from([(p(&[2, 2, 1]), 1)]));
        let d = decompose_free_two_step(3, 4, 3, &Limits::default()).unwrap();
        assert_eq!(d.total_dimension(), 44);
        assert_eq!(d.summands.len(), 3);
    }

    #[test]
    fn asymmetric_table_is_rejected() {
        let mut t = CharacterTable::new(2);
        t.entries.insert(vec![1, 0], 1);
        assert!(decompose_character(&t).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(lower_bound_betti(4, 3, 2), BigInt::from(20));
        assert_eq!(lower_bound_betti(3, 3, 2), BigInt::from(0));
        assert_eq!(lower_bound_betti(4, 2, 2), BigInt::from(20));
        assert_eq!(second_homology_bound(4, 3), 24);
        assert_eq!(second_homology_bound(3, 3), 3);
        assert_eq!(second_homology_bound(2, 2), 2);
        assert!(pieri_dimension_check(3, 1));
        assert!(pieri_dimension_check(4, 2));
        assert!(pieri_dimension_check(5, 5));
        assert!(asymptotic_bound(30, 3, 2) > 0.0);
    }

    #[test]
    fn second_homology_shapes() {
        assert_eq!(second_homology_summands(3, true), vec![p(&[2, 1, 1, 1]), p(&[2, 2, 1])]);
        assert_eq!(second_homology_summands(3, false), vec![p(&[2, 1, 1, 1, 1, 1]), p(&[2, 2, 1, 1, 1])]);
    }
}
