//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed here, not configurable.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeta_extremal::bounds::{
    classical_envelope, kernel_sum_check, lowest_zero_bound, mean_gap, sandwich_check, scan_s_bound,
    theorem_envelope,
};
use zeta_extremal::cli::{execute, Command, RunConfig};
use zeta_extremal::critical_line::{
    count_positive, find_zeros, ingest_zeros, Evaluator, ZeroSet, CROSS_CHECK_TOL,
};
use zeta_extremal::explicit_formula::{evaluate_formula_with, gaussian_test, selberg_test, FormulaConfig};
use zeta_extremal::extremal::{property_suite, SelbergSystem, Side};
use zeta_extremal::lfunc::{dirichlet_descriptor, zeta_descriptor, DirichletCharacter};
use zeta_extremal::specfun::riemann_siegel_theta;
use zeta_extremal::{Error, Result};

const SUITE_T: [f64; 3] = [1.0, 10.0, 100.0];
const SUITE_DELTA: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
const SUITE_SAMPLES: usize = 100_000;
const SUITE_TIME: Duration = Duration::from_secs(60);

const FORMULA_HEIGHT: f64 = 500.0;
const GAUSSIAN_CENTERS: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
const GAUSSIAN_TOL: f64 = 1e-6;
const SELBERG_TOL: f64 = 1e-4;
const CHI3_TOL: f64 = 1e-5;
const FORMULA_TIME: Duration = Duration::from_secs(120);

const COUNT_HEIGHT: f64 = 100.0;
const COUNT_EXPECTED: usize = 29;
const FIRST_ZERO: f64 = 14.134725;
const FIRST_ZERO_TOL: f64 = 1e-6;

const TRIANGLE_POINTS: usize = 100;
const TRIANGLE_TOL: f64 = 1e-5;

const KERNEL_HEIGHT: f64 = 1000.0;
const KERNEL_LIMIT: f64 = 2.0;

const ENVELOPE_CHECKS: [(f64, f64); 2] = [(1e12, 0.10), (1e24, 0.03)];

const LOWEST_MODULI: [u64; 2] = [101, 997];

type Check<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn scan_grid() -> Vec<f64> {
    (1..=1000).map(|k| k as f64 * 0.1).collect()
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let rows = property_suite(&SUITE_T, &SUITE_DELTA, SUITE_SAMPLES)?;
    let elapsed = start.elapsed();
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{}(t={}, Δ={}, {})", r.property, r.t, r.delta, r.side.name()))
        .collect();
    let decay = rows
        .iter()
        .filter(|r| r.property == "decay")
        .map(|r| r.value)
        .fold(0.0, f64::max);
    let pass = failed.is_empty() && elapsed <= SUITE_TIME;
    outcome(
        pass,
        format!(
            "{} rows, failures {:?}, decay constant {decay:.6}, {:.1} s",
            rows.len(),
            failed,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(zeta500: &ZeroSet) -> Result<Outcome> {
    let start = Instant::now();
    let d = zeta_descriptor();
    let mut worst_gauss: f64 = 0.0;
    let cfg = FormulaConfig {
        tol: GAUSSIAN_TOL,
        ..FormulaConfig::default()
    };
    for c in GAUSSIAN_CENTERS {
        let r = evaluate_formula_with(&d, zeta500, &gaussian_test(c, 1.0)?, 0.0, &cfg)?;
        worst_gauss = worst_gauss.max(r.residual.norm());
    }
    let cfg = FormulaConfig {
        tol: SELBERG_TOL,
        ..FormulaConfig::default()
    };
    let mut worst_selberg: f64 = 0.0;
    for (t, delta) in [(10.0, 1.0), (20.0, 1.0), (30.0, 2.0)] {
        let sys = SelbergSystem::new(t, delta, Side::Majorant)?;
        let r = evaluate_formula_with(&d, zeta500, &selberg_test(sys), 0.0, &cfg)?;
        worst_selberg = worst_selberg.max(r.residual.norm());
    }
    let chi = dirichlet_descriptor(&DirichletCharacter::default_primitive(3)?)?;
    let chi_zeros = find_zeros(&chi, 100.0)?;
    let cfg = FormulaConfig {
        tol: CHI3_TOL,
        ..FormulaConfig::default()
    };
    let chi_res = evaluate_formula_with(&chi, &chi_zeros, &gaussian_test(20.0, 1.0)?, 0.0, &cfg)?
        .residual
        .norm();
    let elapsed = start.elapsed();
    let pass = worst_gauss <= GAUSSIAN_TOL
        && worst_selberg <= SELBERG_TOL
        && chi_res <= CHI3_TOL
        && elapsed <= FORMULA_TIME;
    outcome(
        pass,
        format!(
            "Gaussian max {worst_gauss:.3e}, Selberg R+ max {worst_selberg:.3e}, chi mod 3 {chi_res:.3e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Result<Outcome> {
    let d = zeta_descriptor();
    let zs = find_zeros(&d, COUNT_HEIGHT)?;
    let first = zs.lowest().unwrap_or(f64::NAN);
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeta_zeros_100.txt");
    let ingested = ingest_zeros(&table, &d)?;
    let max_diff = zs
        .ordinates()
        .iter()
        .zip(ingested.ordinates())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let pass = zs.len() == COUNT_EXPECTED
        && ingested.len() == COUNT_EXPECTED
        && max_diff <= CROSS_CHECK_TOL
        && (first - FIRST_ZERO).abs() <= FIRST_ZERO_TOL;
    outcome(
        pass,
        format!(
            "{} zeros, first {first:.9}, published table max difference {max_diff:.2e}",
            zs.len()
        ),
    )
}

fn criterion_4(zeta500: &ZeroSet) -> Result<Outcome> {
    let ev = Evaluator::new(&zeta_descriptor())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..TRIANGLE_POINTS {
        let t: f64 = 100.0 * (1.0 - rng.gen::<f64>());
        let n = count_positive(zeta500, t)?;
        let s = ev.argument_s(t)?.value;
        worst = worst.max((n - riemann_siegel_theta(t) / std::f64::consts::PI - s - 1.0).abs());
    }
    outcome(worst <= TRIANGLE_TOL, format!("max |N − θ/π − S − 1| = {worst:.3e}"))
}

fn criterion_5(zeta1000: &ZeroSet) -> Result<Outcome> {
    let d = zeta_descriptor();
    let grid = scan_grid();
    let mut gaps = Vec::new();
    for delta in SUITE_DELTA {
        match mean_gap(&d, zeta1000, &grid, delta) {
            Ok(g) => gaps.push(g),
            Err(Error::Config(msg)) => return outcome(false, msg),
            Err(e) => return Err(e),
        }
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let cross = sandwich_check(&d, zeta1000, 50.0, 1.0)?;
    let routes = cross.holds()
        && cross.route_disagreement.is_some_and(|r| r <= 1e-3)
        && cross.formula_upper.is_some_and(|f| (f - cross.upper).abs() <= 1e-3);
    outcome(
        decreasing && routes,
        format!(
            "{} grid points × Δ ∈ {:?} exact; mean gaps {:?}; formula route at t = 50 agrees to {:.2e}",
            grid.len(),
            SUITE_DELTA,
            gaps.iter().map(|g| format!("{g:.4}")).collect::<Vec<_>>(),
            cross.route_disagreement.unwrap_or(f64::NAN)
        ),
    )
}

fn criterion_6(zeta1000: &ZeroSet) -> Result<Outcome> {
    let reports = kernel_sum_check(&zeta_descriptor(), zeta1000, &scan_grid())?;
    let sup = reports.iter().map(|r| r.discrepancy.abs()).fold(0.0, f64::max);
    outcome(
        sup.is_finite() && sup < KERNEL_LIMIT,
        format!("sup |S − (1/π)ΣF| = {sup:.6} (empirical O(1) constant)"),
    )
}

fn criterion_7() -> Result<Outcome> {
    let d = zeta_descriptor();
    let mut pass = true;
    let mut parts = Vec::new();
    for (t, tol) in ENVELOPE_CHECKS {
        let (env, _) = theorem_envelope(&d, t)?;
        let classical = classical_envelope(t);
        let rel = (env - classical).abs() / classical;
        pass &= rel <= tol;
        parts.push(format!("t = {t:e}: {env:.6} vs {classical:.6}, rel {rel:.3} (limit {tol})"));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_8() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for q in LOWEST_MODULI {
        let d = dirichlet_descriptor(&DirichletCharacter::default_primitive(q)?)?;
        let zs = find_zeros(&d, 4.0)?;
        let r = lowest_zero_bound(&d, &zs)?;
        pass &= r.actual <= r.bound + r.slack && Some(r.actual) == zs.lowest();
        parts.push(format!(
            "q = {q}: lowest {:.4}, bound {:.4}, slack {:.4}",
            r.actual, r.bound, r.slack
        ));
    }
    let complex = dirichlet_descriptor(&DirichletCharacter::conrey(5, 2)?)?;
    let zs = find_zeros(&complex, 30.0)?;
    let rejected = matches!(sandwich_check(&complex, &zs, 20.0, 1.0), Err(Error::NotSelfDual));
    let scan = scan_s_bound(&complex, &zs, &[10.0, 20.0])?;
    let routed = rejected && scan.iter().all(|r| r.sandwich_lower.is_none() && r.sandwich_upper.is_none());
    parts.push(format!("complex χ kept off the sandwich path: {routed}"));
    outcome(pass && routed, parts.join("; "))
}

fn criterion_9() -> Result<Outcome> {
    let run = |workers: &str| -> Result<String> {
        let mut cfg = RunConfig::default();
        cfg.set("workers", workers.into());
        Ok(execute(Command::Scan, &cfg)?.csv)
    };
    let one = run("1")?;
    let eight = run("8")?;
    outcome(
        one == eight,
        format!("{} bytes, {} rows, identical: {}", one.len(), one.lines().count() - 1, one == eight),
    )
}

fn main() -> ExitCode {
    let d = zeta_descriptor();
    let zeta1000 = match find_zeros(&d, KERNEL_HEIGHT) {
        Ok(z) => z,
        Err(e) => {
            println!("setup FAIL: zeta zeros to {KERNEL_HEIGHT}: {e}");
            return ExitCode::FAILURE;
        }
    };
    let zeta500 = zeta1000.truncated(FORMULA_HEIGHT);
    let criteria: Vec<(&str, Check)> = vec![
        ("extremal property suite", Box::new(criterion_1)),
        ("explicit-formula residuals", Box::new(|| criterion_2(&zeta500))),
        ("zero counting", Box::new(criterion_3)),
        ("counting identity", Box::new(|| criterion_4(&zeta500))),
        ("exact sandwich", Box::new(|| criterion_5(&zeta1000))),
        ("kernel-sum representation", Box::new(|| criterion_6(&zeta1000))),
        ("envelope arithmetic", Box::new(criterion_7)),
        ("lowest-zero bound", Box::new(criterion_8)),
        ("scan determinism", Box::new(criterion_9)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {} {}: {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
