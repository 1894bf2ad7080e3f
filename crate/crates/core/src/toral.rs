//! Toral rank inequality and its refinement for 2-step nilpotent algebras.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::KaryAlgebra;
use crate::combinatorics::binom_bigint;
use crate::error::{Error, Result};
use crate::homology::{betti_all, exterior_total_homology, Check, Limits, Validation};

/// `Σ_{i=0}^{k−1} |Σ_j (−1)^j C(dim_v, kj+i)| · 2^{dim_z}`.
pub fn refinement_bound(dim_v: usize, dim_z: usize, k: usize) -> BigInt {
    assert!(k >= 2, "arity must be at least 2");
    let mut acc = BigInt::zero();
    for i in 0..k {
        let mut inner = BigInt::zero();
        let mut j = 0;
        while k * j + i <= dim_v {
            let c = binom_bigint(dim_v as i64, (k * j + i) as i64);
            if j % 2 == 0 {
                inner += c;
            } else {
                inner -= c;
            }
            j += 1;
        }
        acc += inner.abs();
    }
    acc << dim_z
}

/// `log₂ b` to double precision, for `b > 0`.
pub fn log2_big(b: &BigInt) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    (b >> shift).to_f64().unwrap().log2() + shift as f64
}

/// Ten significant digits, with integral values written as `x.0`.
pub fn format_log2(v: f64) -> String {
    if v.fract() == 0.0 {
        return format!("{v:.1}");
    }
    let int_digits = if v.abs() < 1.0 { 1 } else { v.abs().log10().floor() as usize + 1 };
    format!("{v:.*}", 10usize.saturating_sub(int_digits))
}

/// Half a unit in the last place of a value printed by [`format_log2`]-style
/// text, e.g. `0.5e-9` for `"4.906890596"`.
pub fn display_half_ulp(text: &str) -> f64 {
    let decimals = text.split_once('.').map_or(0, |(_, f)| f.len());
    0.5 * 10f64.powi(-(decimals as i32))
}

fn big_as_number<S: Serializer>(b: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&b.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToralBoundRecord {
    pub dim_v: usize,
    pub dim_z: usize,
    pub k: usize,
    #[serde(serialize_with = "big_as_number")]
    pub bound: BigInt,
    pub log2: f64,
    pub log2_display: String,
}

impl ToralBoundRecord {
    pub fn new(dim_v: usize, dim_z: usize, k: usize) -> Self {
        let bound = refinement_bound(dim_v, dim_z, k);
        let log2 = log2_big(&bound);
        ToralBoundRecord { dim_v, dim_z, k, bound, log2, log2_display: format_log2(log2) }
    }
}

/// Rows `n = 1..=n_max`, one record per `k` in `ks`, all with `dim_z = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToralTable {
    pub ks: Vec<usize>,
    pub rows: Vec<Vec<ToralBoundRecord>>,
}

pub fn toral_table(n_max: usize, ks: &[usize]) -> Result<ToralTable> {
    if n_max == 0 {
        return Err(Error::input("table needs n_max >= 1"));
    }
    if let Some(k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::input(format!("arity {k} must be at least 2")));
    }
    let rows = (1..=n_max)
        .map(|n| ks.iter().map(|&k| ToralBoundRecord::new(n, 0, k)).collect())
        .collect();
    Ok(ToralTable { ks: ks.to_vec(), rows })
}

impl ToralTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n");
        for k in &self.ks {
            let _ = write!(s, ",k={k},log2");
        }
        s.push('\n');
        for (n, row) in self.rows.iter().enumerate() {
            let _ = write!(s, "{}", n + 1);
            for r in row {
                let _ = write!(s, ",{},{}", r.bound, r.log2_display);
            }
            s.push('\n');
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut header = vec!["n".to_string()];
        for k in &self.ks {
            header.push(format!("k={k}"));
            header.push("log2".into());
        }
        let mut lines: Vec<Vec<String>> = vec![header];
        for (n, row) in self.rows.iter().enumerate() {
            let mut line = vec![(n + 1).to_string()];
            for r in row {
                line.push(r.bound.to_string());
                line.push(r.log2_display.clone());
            }
            lines.push(line);
        }
        let widths: Vec<usize> = (0..lines[0].len())
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        let mut s = String::new();
        for l in &lines {
            let cells: Vec<String> = l.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(s, "{}", cells.join("  ").trim_end());
        }
        s
    }
}

/// Totals and verdicts for the toral rank inequality of one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToralReport {
    pub algebra: String,
    pub dim: usize,
    pub center_dim: usize,
    pub two_step: bool,
    /// Chain-degree total, `H⁰` included.
    pub total: u128,
    pub center_bound: String,
    /// Refinement bound and the exterior-power total it is compared with;
    /// present for 2-step algebras only.
    pub refinement_bound: Option<String>,
    pub exterior_total: Option<u128>,
    pub validation: Validation,
}

pub fn verify_toral(alg: &KaryAlgebra, name: &str, limits: &Limits) -> Result<ToralReport> {
    if !alg.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let report = betti_all(alg, limits)?;
    let zc = alg.center().dim();
    let center_bound = BigInt::from(1) << zc;
    let two_step = alg.is_two_step();
    let mut v = Validation::new(format!("toral {name}"));
    v.push(Check::at_least("total >= 2^dim z", &center_bound, &BigInt::from(report.total)));
    let (refinement, exterior) = if two_step {
        let b = refinement_bound(alg.dim() - zc, zc, alg.arity());
        let ext = exterior_total_homology(alg, limits)?;
        v.push(Check::at_least("exterior total >= refinement bound", &b, &BigInt::from(ext)));
        v.push(Check::holds("refinement bound > 2^dim z", b > center_bound));
        (Some(b.to_string()), Some(ext))
    } else {
        (None, None)
    };
    Ok(ToralReport {
        algebra: name.to_string(),
        dim: alg.dim(),
        center_dim: zc,
        two_step,
        total: report.total,
        center_bound: center_bound.to_string(),
        refinement_bound: refinement,
        exterior_total: exterior,
        validation: v,
    })
}
