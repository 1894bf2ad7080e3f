//! Constructors for the standard families of nilpotent k-ary Lie algebras.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::algebra::KaryAlgebra;
use crate::error::{Error, Result};

/// CLI-facing description of a family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    Heisenberg { k: usize, m: usize },
    Acj { k: usize, m: usize },
    Free2 { k: usize, n: usize },
    Free3small { k: usize },
    Abelian { k: usize, n: usize },
    Current { inner: Box<FamilySpec>, j: usize },
}

impl FamilySpec {
    pub fn build(&self) -> Result<KaryAlgebra> {
        match self {
            FamilySpec::Heisenberg { k, m } => heisenberg(*k, *m),
            FamilySpec::Acj { k, m } => acj(*k, *m),
            FamilySpec::Free2 { k, n } => free_two_step(*k, *n),
            FamilySpec::Free3small { k } => free_three_step_small(*k),
            FamilySpec::Abelian { k, n } => abelian(*k, *n),
            FamilySpec::Current { inner, j } => current_algebra(&inner.build()?, *j),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::Heisenberg { k, m } => format!("heisenberg(k={k}, m={m})"),
            FamilySpec::Acj { k, m } => format!("acj(k={k}, m={m})"),
            FamilySpec::Free2 { k, n } => format!("free2(k={k}, n={n})"),
            FamilySpec::Free3small { k } => format!("free3small(k={k})"),
            FamilySpec::Abelian { k, n } => format!("abelian(k={k}, n={n})"),
            FamilySpec::Current { inner, j } => format!("current({}, j={j})", inner.describe()),
        }
    }
}

fn check_arity(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::input(format!("arity k={k} must be at least 2")));
    }
    Ok(())
}

/// `km+1`-dimensional algebra with `[x¹_i, ..., x^k_i] = z`.
///
/// Basis order: `x¹_1..x¹_m, x²_1..x²_m, ..., x^k_m, z`.
pub fn heisenberg(k: usize, m: usize) -> Result<KaryAlgebra> {
    check_arity(k)?;
    if m == 0 {
        return Err(Error::input("heisenberg needs m >= 1"));
    }
    let z = k * m;
    let mut labels: Vec<String> = (1..=k)
        .flat_map(|j| (1..=m).map(move |i| format!("x{j}_{i}")))
        .collect();
    labels.push("z".into());
    let mut b = KaryAlgebra::builder(k, k * m + 1).labels(labels);
    for i in 0..m {
        let args: Vec<usize> = (0..k).map(|j| j * m + i).collect();
        b.add_bracket(&args, &[(z, 1)])?;
    }
    b.build()
}

/// `km+1`-dimensional algebra with `[z, x¹_i, ..., x^{k-1}_i] = x^k_i`.
///
/// Basis order: `z, x¹_1..x¹_m, ..., x^k_1..x^k_m`.
pub fn acj(k: usize, m: usize) -> Result<KaryAlgebra> {
    check_arity(k)?;
    if m == 0 {
        return Err(Error::input("acj needs m >= 1"));
    }
    let x = |j: usize, i: usize| 1 + (j - 1) * m + i;
    let mut labels = vec!["z".to_string()];
    labels.extend((1..=k).flat_map(|j| (1..=m).map(move |i| format!("x{j}_{i}"))));
    let mut b = KaryAlgebra::builder(k, k * m + 1).labels(labels);
    for i in 0..m {
        let mut args = vec![0];
        args.extend((1..k).map(|j| x(j, i)));
        b.add_bracket(&args, &[(x(k, i), 1)])?;
    }
    b.build()
}

/// `V ⊕ Λ^k V` with `[e_S] = w_S` on sorted k-subsets `S`; everything touching
/// a `w_S` vanishes. Graded by `e_i ↦ ε_i`, `w_S ↦ Σ_{i∈S} ε_i` in `Z^n`.
pub fn free_two_step(k: usize, n: usize) -> Result<KaryAlgebra> {
    check_arity(k)?;
    if n < k {
        return Err(Error::input(format!("free2 needs n >= k (n={n}, k={k})")));
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let dim = n + subsets.len();
    let mut labels: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    labels.extend(subsets.iter().map(|s| format!("w{}", s.iter().map(|i| i + 1).join("_"))));
    let mut weights: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    weights.extend(subsets.iter().map(|s| (0..n).map(|j| i64::from(s.contains(&j))).collect()));
    let mut b = KaryAlgebra::builder(k, dim).labels(labels).weights(weights);
    for (a, s) in subsets.iter().enumerate() {
        b.add_bracket(s, &[(n + a, 1)])?;
    }
    b.build()
}

/// Free 3-step nilpotent k-ary algebra on `k` generators, `k >= 3`.
///
/// Basis order: `x_1..x_k` (degree 1), `y = [x_1..x_k]` (degree k), then
/// `z_i = [x_1..x̂_i..x_k, y]` (degree 2k-1).
pub fn free_three_step_small(k: usize) -> Result<KaryAlgebra> {
    if k < 3 {
        return Err(Error::input(format!("free3small needs k >= 3, got {k}")));
    }
    let y = k;
    let mut labels: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    labels.push("y".into());
    labels.extend((1..=k).map(|i| format!("z{i}")));
    let mut b = KaryAlgebra::builder(k, 2 * k + 1).labels(labels);
    b.add_bracket(&(0..k).collect::<Vec<_>>(), &[(y, 1)])?;
    for i in 0..k {
        let mut args: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        args.push(y);
        b.add_bracket(&args, &[(k + 1 + i, 1)])?;
    }
    b.build()
}

/// Abelian k-ary algebra of dimension `n`.
pub fn abelian(k: usize, n: usize) -> Result<KaryAlgebra> {
    check_arity(k)?;
    KaryAlgebra::builder(k, n).build()
}

/// Truncated current algebra `g ⊗ C[t]/t^j`. Basis element `b ⊗ t^p` sits at
/// index `p * dim(g) + b`, and
/// `[b_1 t^{p_1}, ..., b_k t^{p_k}] = [b_1..b_k] t^{p_1+...+p_k}`,
/// zero once the exponent reaches `j`.
pub fn current_algebra(alg: &KaryAlgebra, j: usize) -> Result<KaryAlgebra> {
    if j == 0 {
        return Err(Error::input("current algebra needs truncation j >= 1"));
    }
    let n = alg.dim();
    let k = alg.arity();
    let labels: Vec<String> = (0..j)
        .flat_map(|p| alg.labels().iter().map(move |l| format!("{l}*t^{p}")))
        .collect();
    let mut b = KaryAlgebra::builder(k, n * j).labels(labels);
    for (args, value) in alg.brackets() {
        // distribute exponents over the k arguments with total < j
        for exps in (0..k).map(|_| 0..j).multi_cartesian_product() {
            let total: usize = exps.iter().sum();
            if total >= j {
                continue;
            }
            let lifted: Vec<usize> = args.iter().zip(&exps).map(|(&a, &p)| p * n + a).collect();
            let out: Vec<(usize, i64)> = value.iter().map(|&(o, c)| (total * n + o, c)).collect();
            b.add_bracket(&lifted, &out)?;
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(heisenberg(3, 1).unwrap().dim(), 4);
        assert_eq!(heisenberg(5, 1).unwrap().dim(), 6);
        assert_eq!(acj(3, 2).unwrap().dim(), 7);
        assert_eq!(acj(3, 2).unwrap().num_brackets(), 2);
        assert_eq!(free_two_step(3, 3).unwrap().dim(), 4);
        assert_eq!(free_two_step(3, 4).unwrap().dim(), 8);
        assert_eq!(free_three_step_small(3).unwrap().dim(), 7);
        assert_eq!(free_three_step_small(4).unwrap().dim(), 9);
    }

    #[test]
    fn classical_heisenberg() {
        let h = heisenberg(2, 1).unwrap();
        assert_eq!(h.labels(), &["x1_1", "x2_1", "z"]);
        assert_eq!(h.bracket(&[0, 1]).unwrap(), vec![(2, 1)]);
        assert_eq!(h.num_brackets(), 1);
    }

    #[test]
    fn acj_brackets() {
        let a = acj(2, 3).unwrap();
        // [z, x¹_i] = x²_i
        for i in 0..3 {
            assert_eq!(a.bracket(&[0, 1 + i]).unwrap(), vec![(4 + i, 1)]);
        }
        let a = acj(3, 1).unwrap();
        assert_eq!(a.bracket(&[0, 1, 2]).unwrap(), vec![(3, 1)]);
    }

    #[test]
    fn free_two_step_structure() {
        let g = free_two_step(3, 3).unwrap();
        assert_eq!(g.bracket(&[0, 1, 2]).unwrap(), vec![(3, 1)]);
        assert_eq!(g.bracket(&[1, 0, 2]).unwrap(), vec![(3, -1)]);
        assert!(g.weight_violations().is_empty());
        assert_eq!(g.weights().unwrap()[3], vec![1, 1, 1]);
        let g = free_two_step(2, 4).unwrap();
        assert_eq!(g.dim(), 10);
        assert!(g.is_two_step());
        assert!(free_two_step(3, 2).is_err());
    }

    #[test]
    fn free_three_step_signs() {
        let f = free_three_step_small(3).unwrap();
        assert_eq!(f.labels(), &["x1", "x2", "x3", "y", "z1", "z2", "z3"]);
        // [x2, x3, y] = z1, [x1, x3, y] = z2, [x1, x2, y] = z3
        assert_eq!(f.bracket(&[1, 2, 3]).unwrap(), vec![(4, 1)]);
        assert_eq!(f.bracket(&[0, 2, 3]).unwrap(), vec![(5, 1)]);
        assert_eq!(f.bracket(&[3, 0, 1]).unwrap(), vec![(6, 1)]);
        assert!(free_three_step_small(2).is_err());
    }

    #[test]
    fn current_algebras() {
        let h = heisenberg(5, 1).unwrap();
        let c = current_algebra(&h, 2).unwrap();
        assert_eq!(c.dim(), 12);
        assert!(c.is_two_step());
        assert!(c.check_jacobi().is_empty());
        // all-t⁰ bracket plus five single-t¹ lifts
        assert_eq!(c.num_brackets(), 6);

        let c1 = current_algebra(&h, 1).unwrap();
        assert_eq!(c1.dim(), h.dim());
        assert_eq!(c1.brackets().collect::<Vec<_>>(), h.brackets().collect::<Vec<_>>());

        let ab = current_algebra(&abelian(3, 4).unwrap(), 3).unwrap();
        assert_eq!(ab.dim(), 12);
        assert!(ab.is_abelian());
        assert!(current_algebra(&h, 0).is_err());
    }

    #[test]
    fn parameter_errors() {
        assert!(heisenberg(1, 2).is_err());
        assert!(heisenberg(3, 0).is_err());
        assert!(acj(2, 0).is_err());
    }

    #[test]
    fn spec_serde_shape() {
        let s = FamilySpec::Current { inner: Box::new(FamilySpec::Heisenberg { k: 5, m: 1 }), j: 2 };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"family":"current","inner":{"family":"heisenberg","k":5,"m":1},"j":2}"#);
        assert_eq!(s.build().unwrap().dim(), 12);
    }
}
