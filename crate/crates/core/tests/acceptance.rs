//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use wpvol::arith::{rat, Rat};
use wpvol::cache::CacheFile;
use wpvol::intersection::{self, TauTable};
use wpvol::oracle;
use wpvol::recursion::{true_volume, Signature, VolumeTable};
use wpvol::{LPoly, MultiIndex, PiPoly};

const MAX_DIM: u32 = 6;

type Outcome = Result<(), String>;

fn pi(c: Rat, k: u32) -> PiPoly {
    PiPoly::monomial(c, k)
}

fn l1(terms: &[(u32, PiPoly)]) -> LPoly {
    LPoly::from_terms(1, terms.iter().map(|(a, c)| (MultiIndex::new(vec![*a]), c.clone()))).unwrap()
}

/// Product of univariate polynomials in x = L² with π-coefficients.
fn expand(factors: &[Vec<PiPoly>]) -> Vec<PiPoly> {
    let mut acc = vec![PiPoly::one()];
    for f in factors {
        let mut next = vec![PiPoly::zero(); acc.len() + f.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                next[i + j] += &(a * b);
            }
        }
        acc = next;
    }
    acc
}

fn expect_eq<T: PartialEq + std::fmt::Display>(what: &str, got: &T, want: &T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want}"))
    }
}

fn golden_volumes(table: &mut VolumeTable) -> Outcome {
    let e = |x: wpvol::Error| x.to_string();
    for (g, n) in [(0, 3), (1, 1), (0, 4), (2, 1)] {
        table.ensure(Signature::new(g, n).map_err(e)?).map_err(e)?;
    }
    let s03 = Signature::new(0, 3).map_err(e)?;
    expect_eq("V_{0,3}", &true_volume(s03, table).map_err(e)?, &LPoly::one(3))?;

    let s11 = Signature::new(1, 1).map_err(e)?;
    let v11_true = l1(&[(0, pi(rat(1, 6), 1)), (1, pi(rat(1, 24), 0))]);
    let v11_int = l1(&[(0, pi(rat(1, 12), 1)), (1, pi(rat(1, 48), 0))]);
    expect_eq("V_{1,1} true", &true_volume(s11, table).map_err(e)?, &v11_true)?;
    expect_eq("V_{1,1} internal", table.require(s11).map_err(e)?, &v11_int)?;

    let s04 = Signature::new(0, 4).map_err(e)?;
    let mut v04 = LPoly::constant(4, pi(rat(2, 1), 1));
    for i in 0..4 {
        let mut a = vec![0; 4];
        a[i] = 1;
        v04.add_term(MultiIndex::new(a), &pi(rat(1, 2), 0));
    }
    expect_eq("V_{0,4}", &true_volume(s04, table).map_err(e)?, &v04)?;

    let factors = vec![
        vec![pi(rat(4, 1), 1), PiPoly::one()],
        vec![pi(rat(12, 1), 1), PiPoly::one()],
        vec![pi(rat(6960, 1), 2), pi(rat(384, 1), 1), pi(rat(5, 1), 0)],
    ];
    let scale = rat(1, 2211840);
    let terms: Vec<(u32, PiPoly)> = expand(&factors)
        .into_iter()
        .enumerate()
        .map(|(a, c)| (a as u32, c.scale(&scale)))
        .collect();
    let s21 = Signature::new(2, 1).map_err(e)?;
    expect_eq("V_{2,1}", &true_volume(s21, table).map_err(e)?, &l1(&terms))
}

fn compact_volumes(table: &mut VolumeTable) -> Outcome {
    let golden = [
        (2, rat(43, 2160), 3),
        (3, rat(176557, 1209600), 6),
        (4, rat(1959225867017, 493807104000), 9),
        (
            5,
            Rat::new(
                "84374265930915479".parse::<BigInt>().unwrap(),
                "355541114880000".parse::<BigInt>().unwrap(),
            ),
            12,
        ),
    ];
    for (g, c, k) in golden {
        let v = intersection::compact_volume(table, g).map_err(|x| x.to_string())?;
        expect_eq(&format!("V_{{{g},0}}"), &v, &pi(c, k))?;
    }
    Ok(())
}

fn genus0_multinomial(alpha: &[u32]) -> Rat {
    let n = alpha.len() as u32;
    let top: BigInt = (1..=n - 3).map(BigInt::from).product();
    let bottom: BigInt = alpha
        .iter()
        .flat_map(|a| (1..=*a).map(BigInt::from))
        .fold(BigInt::one(), |p, x| p * x);
    Rat::new(top, bottom)
}

fn intersection_goldens(taus: &TauTable) -> Outcome {
    let e = |x: wpvol::Error| x.to_string();
    expect_eq("<tau_0^3>_0", &taus.get(0, &[0, 0, 0]).map_err(e)?, &rat(1, 1))?;
    expect_eq("<tau_1>_1", &taus.get(1, &[1]).map_err(e)?, &rat(1, 24))?;
    expect_eq("<tau_4>_2", &taus.get(2, &[4]).map_err(e)?, &rat(1, 1152))?;
    let mut count = 0;
    for n in 3..=7usize {
        let d = (n - 3) as u32;
        for alpha in MultiIndex::all_of_degree(n, d) {
            let a = alpha.entries();
            expect_eq(&format!("<tau_{a:?}>_0"), &taus.get(0, a).map_err(e)?, &genus0_multinomial(a))?;
            count += 1;
        }
    }
    if count == 0 {
        return Err("no genus-0 symbols enumerated".into());
    }
    Ok(())
}

fn relation_suites(table: &VolumeTable, taus: &TauTable) -> Result<String, String> {
    let e = |x: wpvol::Error| x.to_string();
    let suites = [
        ("string", intersection::string_suite(taus).map_err(e)?),
        ("dilaton", intersection::dilaton_suite(taus).map_err(e)?),
        ("dvv", intersection::dvv_suite(taus).map_err(e)?),
        ("do-string", intersection::do_string_suite(table).map_err(e)?),
        ("do-dilaton", intersection::do_dilaton_suite(table).map_err(e)?),
    ];
    let mut summary = Vec::new();
    for (name, records) in &suites {
        if records.is_empty() {
            return Err(format!("{name}: no instances"));
        }
        if let Some(bad) = records.iter().find(|r| !r.pass) {
            return Err(format!("{name} failed at g={} n={} alpha={:?}", bad.g, bad.n, bad.alpha));
        }
        summary.push(format!("{name}={}", records.len()));
    }
    Ok(summary.join(" "))
}

fn structural_invariants(table: &VolumeTable) -> Outcome {
    for (s, _) in table.iter() {
        let v = true_volume(s, table).map_err(|x| x.to_string())?;
        let d = s.dim();
        if !v.is_symmetric() {
            return Err(format!("V_{{{},{}}} not symmetric", s.g, s.n));
        }
        for (alpha, c) in v.terms() {
            if alpha.degree() > d {
                return Err(format!("V_{{{},{}}} degree bound at {alpha:?}", s.g, s.n));
            }
            match c.as_monomial() {
                Some((k, q)) if k == d - alpha.degree() && *q > Rat::zero() => {}
                _ => return Err(format!("V_{{{},{}}} coefficient {c} at {alpha:?}", s.g, s.n)),
            }
        }
    }
    Ok(())
}

fn kernel_oracle() -> Result<String, String> {
    let records = oracle::full_report().map_err(|x| x.to_string())?;
    let pinned = [
        (oracle::KERNEL_TOLERANCE, 1e-8),
        (oracle::DERIVATIVE_TOLERANCE, 1e-6),
        (oracle::IDENTITY_TOLERANCE, 1e-10),
    ];
    if pinned.iter().any(|(got, want)| got != want) {
        return Err(format!("tolerances drifted: {pinned:?}"));
    }
    if let Some(bad) = records.iter().find(|r| !r.pass) {
        return Err(format!("{} [{}] dev {:.3e} > {:.0e}", bad.check, bad.grid, bad.max_abs_dev, bad.tolerance));
    }
    let worst = records.iter().map(|r| r.max_abs_dev / r.tolerance).fold(0.0, f64::max);
    Ok(format!("{} checks, worst dev/tol {worst:.2e}", records.len()))
}

fn determinism() -> Outcome {
    let e = |x: wpvol::Error| x.to_string();
    let single = CacheFile::from_table(&VolumeTable::build(MAX_DIM, 1).map_err(e)?).to_json().map_err(e)?;
    let multi = CacheFile::from_table(&VolumeTable::build(MAX_DIM, 4).map_err(e)?).to_json().map_err(e)?;
    let mut dfs = VolumeTable::new();
    for s in Signature::all_up_to(MAX_DIM).into_iter().rev() {
        dfs.ensure(s).map_err(e)?;
    }
    let dfs = CacheFile::from_table(&dfs).to_json().map_err(e)?;
    if single != multi {
        return Err("1-thread and 4-thread builds differ".into());
    }
    if single != dfs {
        return Err("wave and depth-first builds differ".into());
    }
    Ok(())
}

fn report(id: u32, name: &str, start: Instant, outcome: Result<String, String>) -> bool {
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) if detail.is_empty() => {
            println!("PASS [{id}] {name} ({secs:.2}s)");
            true
        }
        Ok(detail) => {
            println!("PASS [{id}] {name}: {detail} ({secs:.2}s)");
            true
        }
        Err(why) => {
            println!("FAIL [{id}] {name}: {why} ({secs:.2}s)");
            false
        }
    }
}

fn main() {
    let ok = |o: Outcome| o.map(|_| String::new());
    let mut results = Vec::new();

    let t = Instant::now();
    let mut table = VolumeTable::new();
    results.push(report(1, "golden volumes", t, ok(golden_volumes(&mut table))));

    let t = Instant::now();
    let mut compact = VolumeTable::new();
    results.push(report(2, "compact volumes g=2..5", t, ok(compact_volumes(&mut compact))));

    let t = Instant::now();
    let full = VolumeTable::build(MAX_DIM, 1);
    let (table, taus) = match full.and_then(|tb| TauTable::from_volumes(&tb).map(|tau| (tb, tau))) {
        Ok(pair) => pair,
        Err(e) => {
            println!("FAIL [3-5] table build up to dim {MAX_DIM}: {e}");
            std::process::exit(1);
        }
    };
    results.push(report(3, "intersection goldens", t, ok(intersection_goldens(&taus))));

    let t = Instant::now();
    results.push(report(4, "relation suites dim<=6", t, relation_suites(&table, &taus)));

    let t = Instant::now();
    results.push(report(5, "structural invariants dim<=6", t, ok(structural_invariants(&table))));

    let t = Instant::now();
    results.push(report(6, "kernel oracle", t, kernel_oracle()));

    let t = Instant::now();
    results.push(report(7, "deterministic serialization", t, ok(determinism())));

    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
