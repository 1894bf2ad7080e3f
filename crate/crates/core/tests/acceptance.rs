//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use karyhom_core::combinatorics::binom;
use karyhom_core::complex::{differential_matrix, verify_d_squared, weight_blocks, ChainLayout};
use karyhom_core::families::{acj, current_algebra, free_three_step_small, free_two_step, heisenberg, FamilySpec};
use karyhom_core::homology::{
    acj_homology_via_theta, acj_k2_betti_formula, acj_second_homology_formula, betti_all_named, differential_rank,
    free3_expected, heisenberg_betti_formula, heisenberg_valid_range, Limits,
};
use karyhom_core::rank::{next_prime, rank_exact, rank_mod_p};
use karyhom_core::schur::{decompose_free_two_step, lower_bound_betti, second_homology_bound, Partition};
use karyhom_core::toral::{display_half_ulp, refinement_bound, toral_table};
use karyhom_core::{HomologyReport, KaryAlgebra, SparseIntMatrix};

const SEED: u64 = 0x6b61_7279;

// n, then (bound, log2) for k = 2, 3, 4, 5, as printed in the published table
const TORAL_TABLE: &str = "\
1 2 1.0 2 1.0 2 1.0 2 1.0
2 2 1.0 4 2.0 4 2.0 4 2.0
3 4 2.0 6 2.584962500 8 3.0 8 3.0
4 4 2.0 12 3.584962501 14 3.807354922 16 4.0
5 8 3.0 18 4.169925001 28 4.807354922 30 4.906890596
6 8 3.0 36 5.169925000 48 5.584962501 60 5.906890595
7 16 4.0 54 5.754887502 96 6.584962500 110 6.781359713
8 16 4.0 108 6.754887502 164 7.357552004 220 7.781359713
9 32 5.0 162 7.339850002 328 8.357552004 400 8.643856190
10 32 5.0 324 8.339850002 560 9.129283017 800 9.643856190
11 64 6.0 486 8.924812503 1120 10.12928302 1450 10.50183718
12 64 6.0 972 9.924812502 1912 10.90086681 2900 11.50183718
13 128 7.0 1458 10.50977500 3824 11.90086681 5250 12.35810171
14 128 7.0 2916 11.50977500 6528 12.67242534 10500 13.35810171
15 256 8.0 4374 12.09473750 13056 13.67242534 19000 14.21371180
16 256 8.0 8748 13.09473750 22288 14.44397955 38000 15.21371180
17 512 9.0 13122 13.67970001 44576 15.44397955 68750 16.06907210
18 512 9.0 26244 14.67970000 76096 16.21553300 137500 17.06907210
19 1024 10.0 39366 15.26466251 152192 17.21553300 248750 17.92433701
20 1024 10.0 78732 16.26466251 259808 17.98708633 497500 18.92433701";

struct Instance {
    name: String,
    alg: KaryAlgebra,
    report: HomologyReport,
}

#[derive(Default)]
struct Suite {
    limits: Limits,
    instances: Vec<Instance>,
    outcomes: Vec<(usize, String, bool, String, Duration)>,
}

impl Suite {
    fn compute(&mut self, name: &str, alg: KaryAlgebra) -> HomologyReport {
        if let Some(i) = self.instances.iter().find(|i| i.name == name) {
            return i.report.clone();
        }
        let report = betti_all_named(&alg, name, &self.limits).expect("homology within limits");
        self.instances.push(Instance { name: name.to_string(), alg, report: report.clone() });
        report
    }

    fn run(&mut self, id: usize, title: &str, budget: Duration, f: impl FnOnce(&mut Self) -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = f(self);
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let detail = if in_time {
            detail
        } else {
            format!("{detail}; over budget {:.1}s", budget.as_secs_f64())
        };
        let pass = ok && in_time;
        println!(
            "[{}] criterion {id:>2}: {title} ({:.2}s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        self.outcomes.push((id, title.to_string(), pass, detail, elapsed));
    }
}

fn free3(s: &mut Suite, ks: &[usize]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &k in ks {
        let r = s.compute(&format!("free3small({k})"), free_three_step_small(k).unwrap());
        let expected: Vec<u128> = free3_expected(k).iter().map(|&(_, b)| b as u128).collect();
        let got: Vec<u128> = free3_expected(k).iter().map(|&(t, _)| r.betti(t).unwrap_or(0)).collect();
        ok &= got == expected;
        parts.push(format!("k={k}: direct {got:?} vs closed form {expected:?}"));
    }
    (ok, parts.join("; "))
}

fn heisenberg_formulas(s: &mut Suite) -> (bool, String) {
    let mut ok = true;
    let mut asserted = 0;
    let mut failures = Vec::new();
    for k in 2..=4 {
        for m in 1..=3 {
            let alg = heisenberg(k, m).unwrap();
            let r = s.compute(&format!("heisenberg({k},{m})"), alg.clone());
            for i in 1..=heisenberg_valid_range(k, m) {
                let t = i * (k - 1) + 1;
                asserted += 1;
                let direct = r.betti(t).unwrap() as i128;
                let formula = heisenberg_betti_formula(k, m, i);
                let rk = differential_rank(&alg, t, &s.limits).unwrap() as u128;
                let rk_formula = binom((k * m) as i64, ((i - 1) * (k - 1)) as i64);
                if direct != formula {
                    ok = false;
                    failures.push(format!("({k},{m}) H^{t} {direct}≠{formula}"));
                }
                if rk != rk_formula {
                    ok = false;
                    failures.push(format!("({k},{m}) rank ∂_{t} {rk}≠{rk_formula}"));
                }
            }
        }
    }
    let h22 = s.compute("heisenberg(2,2)", heisenberg(2, 2).unwrap()).betti(2).unwrap();
    ok &= h22 == 5;
    let detail = if failures.is_empty() {
        format!("{asserted} in-range degrees agree; H^2(heisenberg(2,2)) = {h22}")
    } else {
        format!("{asserted} in-range degrees, mismatches: {}; H^2(heisenberg(2,2)) = {h22}", failures.join(", "))
    };
    (ok, detail)
}

fn acj_formulas(s: &mut Suite) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for m in 1..=3 {
        let r = s.compute(&format!("acj(2,{m})"), acj(2, m).unwrap());
        let bad: Vec<usize> = (1..=2 * m + 1)
            .filter(|&t| r.betti(t).unwrap() as i128 != acj_k2_betti_formula(m, t))
            .collect();
        ok &= bad.is_empty();
        if !bad.is_empty() {
            notes.push(format!("k=2 m={m} closed form fails at {bad:?}"));
        }
    }
    for m in 1..=2 {
        let r = s.compute(&format!("acj(3,{m})"), acj(3, m).unwrap());
        let direct = r.betti(3).unwrap() as i128;
        let formula = acj_second_homology_formula(3, m);
        ok &= direct == formula;
        notes.push(format!("k=3 m={m} H^3 direct {direct} vs formula {formula}"));
    }
    let mut theta_checked = 0;
    for inst in s.instances.iter().filter(|i| i.name.starts_with("acj(")) {
        for d in inst.report.degrees.iter().filter(|d| d.degree > 0) {
            theta_checked += 1;
            let via = acj_homology_via_theta(&inst.alg, d.degree).unwrap();
            if via != d.betti as i128 {
                ok = false;
                notes.push(format!("{} θ-route H^{} {via}≠{}", inst.name, d.degree, d.betti));
            }
        }
    }
    notes.push(format!("θ-route checked at {theta_checked} degrees"));
    (ok, notes.join("; "))
}

fn toral_table_check() -> (bool, String) {
    let table = toral_table(20, &[2, 3, 4, 5]).unwrap();
    let mut int_bad = Vec::new();
    let mut log_bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (line, row) in TORAL_TABLE.lines().zip(&table.rows) {
        let cells: Vec<&str> = line.split_whitespace().collect();
        let n: usize = cells[0].parse().unwrap();
        for (c, rec) in row.iter().enumerate() {
            let bound: BigInt = cells[1 + 2 * c].parse().unwrap();
            let shown = cells[2 + 2 * c];
            if rec.bound != bound {
                int_bad.push(format!("n={n},k={}", rec.k));
            }
            let published: f64 = shown.parse().unwrap();
            let ulps = (rec.log2 - published).abs() / (2.0 * display_half_ulp(shown));
            worst = worst.max(ulps);
            if ulps > 0.5 {
                log_bad.push(format!("n={n},k={}", rec.k));
            }
        }
    }
    let ok = int_bad.is_empty() && log_bad.is_empty();
    let detail = format!(
        "integers {}/80 match; log2 {}/80 within half a display ulp (worst {:.2} ulp){}",
        80 - int_bad.len(),
        80 - log_bad.len(),
        worst,
        if log_bad.is_empty() { String::new() } else { format!("; off: {}", log_bad.join(" ")) }
    );
    (ok, detail)
}

fn property_m(s: &mut Suite) -> (bool, String) {
    let h = heisenberg(5, 1).unwrap();
    let base = s.compute("heisenberg(5,1)", h.clone()).total;
    let cur = current_algebra(&h, 2).unwrap();
    let two_step = cur.is_two_step();
    let bound = refinement_bound(12, 0, 5);
    let r = s.compute("current(heisenberg(5,1),2)", cur.clone());
    let total = BigInt::from(r.total);
    let power = BigInt::from(base).pow(2);
    let ok = cur.dim() == 12 && two_step && bound == BigInt::from(2900) && total >= bound && bound > power;
    let detail = format!(
        "dim {}, 2-step {two_step}, bound {bound}, direct total {} (Betti {:?}), 11^2 = {power}",
        cur.dim(),
        r.total,
        r.betti_map()
    );
    (ok, detail)
}

fn schur_decompositions(s: &mut Suite) -> (bool, String) {
    let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
    let small = BTreeMap::from([(p(&[2, 2, 1]), 1)]);
    let big = BTreeMap::from([(p(&[2, 2, 1]), 1), (p(&[2, 1, 1, 1]), 1), (p(&[3, 2, 1, 1]), 1)]);
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, expected, dim) in [(3, &small, Some(3)), (4, &big, Some(44)), (5, &big, None)] {
        let d = decompose_free_two_step(3, n, 3, &s.limits).unwrap();
        let h3 = s.compute(&format!("free2(3,{n})"), free_two_step(3, n).unwrap()).betti(3).unwrap();
        ok &= d.total_dimension() == h3;
        let got = d.partitions();
        ok &= &got == expected;
        if let Some(dim) = dim {
            ok &= d.total_dimension() == dim;
        }
        parts.push(format!("n={n}: {d} (dim {})", d.total_dimension()));
    }
    (ok, parts.join("; "))
}

fn free2_bounds(s: &mut Suite) -> (bool, String) {
    let mut ok = true;
    let mut checked = 0;
    let mut notes = Vec::new();
    for (k, n) in [(2, 3), (2, 4), (3, 3), (3, 4)] {
        let r = s.compute(&format!("free2({k},{n})"), free_two_step(k, n).unwrap());
        let second = second_homology_bound(n, k);
        let hk = r.betti(k).unwrap() as i128;
        checked += 1;
        if hk < second {
            ok = false;
            notes.push(format!("free2({k},{n}) H^{k} {hk} < {second}"));
        }
        let mut i = 2;
        while i * (k - 1) < r.dim {
            let t = i * (k - 1) + 1;
            let lb = lower_bound_betti(n, k, i);
            let b = BigInt::from(r.betti(t).unwrap());
            checked += 1;
            if b < lb {
                ok = false;
                notes.push(format!("free2({k},{n}) H^{t} {b} < {lb}"));
            }
            i += 1;
        }
    }
    let h33 = s.compute("free2(3,3)", free_two_step(3, 3).unwrap()).betti(3).unwrap() as i128;
    let tight = second_homology_bound(3, 3);
    ok &= tight == 3 && h33 == tight;
    notes.insert(0, format!("{checked} bounds checked; second-homology bound (3,3) = {tight}, H^3 = {h33}"));
    (ok, notes.join("; "))
}

fn random_family(rng: &mut ChaCha8Rng) -> FamilySpec {
    loop {
        let k = rng.gen_range(2..=5);
        let spec = match rng.gen_range(0..5) {
            0 => FamilySpec::Heisenberg { k, m: rng.gen_range(1..=3) },
            1 => FamilySpec::Acj { k, m: rng.gen_range(1..=3) },
            2 => FamilySpec::Free2 { k, n: k + rng.gen_range(0..=2) },
            3 if k >= 3 => FamilySpec::Free3small { k },
            4 => FamilySpec::Current { inner: Box::new(FamilySpec::Heisenberg { k, m: 1 }), j: 2 },
            _ => continue,
        };
        if spec.build().map(|a| a.dim()).is_ok_and(|d| d <= 13) {
            return spec;
        }
    }
}

fn oracle_matrices(inst: &Instance) -> Vec<SparseIntMatrix> {
    let mut out = Vec::new();
    for t in ChainLayout::new(&inst.alg).positive_degrees() {
        if t < inst.alg.arity() {
            continue;
        }
        if inst.alg.weights().is_some() {
            out.extend(weight_blocks(&inst.alg, t).unwrap().into_iter().map(|b| b.matrix));
        } else {
            out.push(differential_matrix(&inst.alg, t).unwrap());
        }
    }
    out
}

fn properties(s: &mut Suite) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut notes = Vec::new();
    let mut ok = true;

    let mut families = Vec::new();
    for _ in 0..20 {
        let spec = random_family(&mut rng);
        let alg = spec.build().unwrap();
        let jac = alg.check_jacobi();
        let d2 = verify_d_squared(&alg);
        if !jac.is_empty() || !d2.is_empty() {
            ok = false;
            notes.push(format!("{}: jacobi {} violations, ∂² fails at {d2:?}", spec.describe(), jac.len()));
        }
        families.push(spec.describe());
    }
    notes.push(format!("20 random families checked for Jacobi and ∂²=0: {}", families.join(" ")));

    let euler_bad: Vec<&str> = s.instances.iter().filter(|i| !i.report.euler_holds()).map(|i| i.name.as_str()).collect();
    ok &= euler_bad.is_empty();
    notes.push(format!("Euler identity on {} reports, failures {euler_bad:?}", s.instances.len()));

    let mut primes = Vec::new();
    while primes.len() < 3 {
        let p = next_prime(rng.gen_range((1u64 << 30)..(1u64 << 32) - (1 << 20)));
        if !primes.contains(&p) {
            primes.push(p);
        }
    }
    let mut matrices = 0;
    let mut mismatches = Vec::new();
    for inst in &s.instances {
        for m in oracle_matrices(inst) {
            matrices += 1;
            let exact = rank_exact(&m);
            for &p in &primes {
                let rp = rank_mod_p(&m, p);
                if rp != exact {
                    mismatches.push(format!("{} {}x{} Q:{exact} p={p}:{rp}", inst.name, m.rows(), m.cols()));
                }
            }
        }
    }
    ok &= mismatches.is_empty();
    notes.push(format!("modular oracle at primes {primes:?} on {matrices} matrices, mismatches {mismatches:?}"));

    let mut sign_bad = Vec::new();
    for _ in 0..5 {
        let spec = random_family(&mut rng);
        let alg = spec.build().unwrap();
        let signs: Vec<i64> = (0..alg.dim()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let flipped = alg.with_basis_signs(&signs).unwrap();
        let a = betti_all_named(&alg, "", &s.limits).unwrap().betti_map();
        let b = betti_all_named(&flipped, "", &s.limits).unwrap().betti_map();
        if a != b {
            sign_bad.push(spec.describe());
        }
    }
    ok &= sign_bad.is_empty();
    notes.push(format!("5 sign randomizations, changed Betti in {sign_bad:?}"));
    (ok, notes.join("; "))
}

fn toral_inequality(s: &Suite) -> (bool, String) {
    let mut bad = Vec::new();
    for inst in &s.instances {
        let z = inst.alg.center().dim();
        if BigInt::from(inst.report.total) < (BigInt::from(1) << z) {
            bad.push(format!("{} total {} < 2^{z}", inst.name, inst.report.total));
        }
    }
    (bad.is_empty(), format!("{} instances, violations {bad:?}", s.instances.len()))
}

fn main() -> ExitCode {
    let mut s = Suite::default();
    let secs = Duration::from_secs;

    s.run(1, "free 3-step k=3 Betti (3,24,14,1)", secs(1), |s| free3(s, &[3]));
    s.run(2, "free 3-step k=4,5 closed forms", secs(10), |s| free3(s, &[4, 5]));
    s.run(3, "Heisenberg Betti and rank formulas", secs(60), heisenberg_formulas);
    s.run(4, "5-ary Heisenberg total homology 11", secs(1), |s| {
        let r = s.compute("heisenberg(5,1)", heisenberg(5, 1).unwrap());
        (r.total == 11, format!("Betti {:?}, total {}", r.betti_map(), r.total))
    });
    s.run(5, "ACJ closed forms and θ-route", secs(60), acj_formulas);
    s.run(6, "toral table integers and log2 display", secs(1), |_| toral_table_check());
    s.run(7, "property M counterexample", secs(300), property_m);
    s.run(8, "Schur decomposition of H^3 of free 2-step k=3", secs(300), schur_decompositions);
    s.run(9, "free 2-step lower bounds", secs(300), free2_bounds);
    s.run(10, "property suites", secs(600), properties);
    s.run(11, "toral rank inequality", secs(60), |s| toral_inequality(s));

    let failed: Vec<usize> = s.outcomes.iter().filter(|o| !o.2).map(|o| o.0).collect();
    let passed = s.outcomes.len() - failed.len();
    println!("acceptance: {passed}/{} criteria pass; failing {failed:?}", s.outcomes.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
