//! Subspaces of `Q^n` in reduced row echelon form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type RatVec = Vec<(usize, BigRational)>;

/// A subspace of `Q^n` stored by its unique reduced echelon basis: rows are
/// sorted by pivot column, every pivot entry is 1 and every pivot column is
/// zero in all other rows. Equality of two `Subspace`s is therefore equality
/// of the subspaces themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RatVec>,
}

fn to_dense(n: usize, v: &[(usize, BigRational)]) -> Vec<BigRational> {
    let mut d = vec![BigRational::zero(); n];
    for (i, c) in v {
        d[*i] += c;
    }
    d
}

fn to_sparse(d: Vec<BigRational>) -> RatVec {
    d.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| vec![(i, BigRational::one())]).collect();
        Subspace { ambient_dim, basis }
    }

    /// Span of the given vectors.
    pub fn from_spanning<I>(ambient_dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = RatVec>,
    {
        let mut ech = Echelon::new(ambient_dim);
        for v in vectors {
            if ech.rows.len() == ambient_dim {
                break;
            }
            ech.insert(to_dense(ambient_dim, &v));
        }
        ech.into_subspace()
    }

    /// Common kernel of the given linear functionals on `Q^n`.
    pub fn kernel<I>(ambient_dim: usize, functionals: I) -> Self
    where
        I: IntoIterator<Item = RatVec>,
    {
        let mut ech = Echelon::new(ambient_dim);
        for f in functionals {
            if ech.rows.len() == ambient_dim {
                break;
            }
            ech.insert(to_dense(ambient_dim, &f));
        }
        let pivots: Vec<usize> = ech.rows.iter().map(|(p, _)| *p).collect();
        let free = (0..ambient_dim).filter(|c| !pivots.contains(c));
        let vectors: Vec<RatVec> = free
            .map(|f| {
                let mut v = vec![(f, BigRational::one())];
                for (p, row) in &ech.rows {
                    if !row[f].is_zero() {
                        v.push((*p, -row[f].clone()));
                    }
                }
                v.sort_by_key(|(i, _)| *i);
                v
            })
            .collect();
        Subspace::from_spanning(ambient_dim, vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[RatVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r[0].0).collect()
    }

    /// Whether `v` lies in the subspace: reduce by the echelon basis and test
    /// for zero.
    pub fn contains_vector(&self, v: &[(usize, BigRational)]) -> bool {
        let mut d = to_dense(self.ambient_dim, v);
        for row in &self.basis {
            let p = row[0].0;
            if d[p].is_zero() {
                continue;
            }
            let f = d[p].clone();
            for (i, c) in row {
                d[*i] -= &f * c;
            }
        }
        d.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim
            && other.basis.iter().all(|v| self.contains_vector(v))
    }
}

/// Incrementally maintained reduced echelon form.
struct Echelon {
    n: usize,
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<BigRational>) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
    }

    fn into_subspace(self) -> Subspace {
        Subspace {
            ambient_dim: self.n,
            basis: self.rows.into_iter().map(|(_, r)| to_sparse(r)).collect(),
        }
    }
}
