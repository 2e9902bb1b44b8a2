//! Majorant/minorant sandwich on the zero count, theorem envelopes for
//! `S(t, π)`, kernel-sum representations, and the central-order and
//! lowest-zero bounds.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::critical_line::{count_zeros, Evaluator, ZeroSet, ZERO_SNAP};
use crate::error::{Error, Result};
use crate::explicit_formula::{evaluate_formula_with, selberg_test, FormulaConfig};
use crate::extremal::{kernel_eval, selberg_r, Kernel, SelbergSystem, Side};
use crate::lfunc::LFunctionDescriptor;
use crate::par;
use crate::quad::{integrate_to_infinity, QuadConfig};
use crate::specfun::DEFAULT_SIEVE_CAP;
use crate::table::{num, row};

/// Default `a` in `log log C^{a/m}`.
pub const DEFAULT_CONDUCTOR_EXPONENT: f64 = 3.0;
/// Bound on `|S|` used for the Stieltjes remainder of zero tails.
const S_BOUND: f64 = 2.0;

/// `ℓ1 = (a/m) log C`, `ℓ2 = log ℓ1`, `ℓ3 = log ℓ2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LogTower {
    l1: f64,
    l2: f64,
    l3: f64,
}

/// Requires `a > e`, so that `log log a > 0`.
fn log_tower(log_c: f64, degree: u32, a: f64) -> Result<LogTower> {
    if !(a > std::f64::consts::E) {
        return Err(Error::Config(format!("conductor exponent must exceed e, got {a}")));
    }
    let l1 = a / degree as f64 * log_c;
    let l2 = l1.ln();
    Ok(LogTower { l1, l2, l3: l2.ln() })
}

/// Main term `(¼ + ϑ/2) log C(t,π) / log log C(t,π)^{a/m}` and the tuned
/// `Δ` from `π(1+2ϑ)Δ = ℓ2 − 2ℓ3`.
pub fn theorem_envelope_with(d: &LFunctionDescriptor, t: f64, a: f64) -> Result<(f64, f64)> {
    let log_c = d.analytic_conductor().at_height(t).ln();
    let tw = log_tower(log_c, d.degree(), a)?;
    if !(tw.l3 > 0.0) {
        return Err(Error::Threshold(format!(
            "log log log C(t)^(a/m) = {:.4} at t = {t}",
            tw.l3
        )));
    }
    let theta = d.theta();
    let envelope = (0.25 + 0.5 * theta) * log_c / tw.l2;
    let delta = (tw.l2 - 2.0 * tw.l3) / (PI * (1.0 + 2.0 * theta));
    Ok((envelope, delta))
}

pub fn theorem_envelope(d: &LFunctionDescriptor, t: f64) -> Result<(f64, f64)> {
    theorem_envelope_with(d, t, DEFAULT_CONDUCTOR_EXPONENT)
}

/// `(¼) log t / log log t`.
pub fn classical_envelope(t: f64) -> f64 {
    0.25 * t.ln() / t.ln().ln()
}

/// Both sides of `Σ R⁻(γ) ≤ N(t, π) ≤ Σ R⁺(γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub t: f64,
    pub delta: f64,
    /// `N(t, π)`; `2N(t)` for ζ.
    pub count: f64,
    /// `Σ_{|γ|≤T} R⁻(γ)`.
    pub lower: f64,
    /// `Σ_{|γ|≤T} R⁺(γ)`.
    pub upper: f64,
    /// Bound on `Σ_{|γ|>T} |R⁻(γ)|`; those terms are `≤ 0`, so the full
    /// minorant sum is at least `lower − tail_bound`.
    pub tail_bound: f64,
    /// Right-hand sides of the explicit formula for `R⁻`, `R⁺`.
    pub formula_lower: Option<f64>,
    pub formula_upper: Option<f64>,
    /// Largest explicit-formula residual of the two routes.
    pub route_disagreement: Option<f64>,
}

impl SandwichReport {
    /// `lower − tail ≤ count ≤ upper`, with no further slack.
    pub fn holds(&self) -> bool {
        self.lower - self.tail_bound <= self.count && self.count <= self.upper
    }

    /// `Σ R⁺ − N(t, π)`.
    pub fn gap(&self) -> f64 {
        self.upper - self.count
    }
}

/// Direct and explicit-formula evaluation of the sandwich for a self-dual
/// descriptor. The formula route runs when `e^{2πΔ}` fits the sieve cap.
pub fn sandwich_check(d: &LFunctionDescriptor, zs: &ZeroSet, t: f64, delta: f64) -> Result<SandwichReport> {
    if !d.is_self_dual() {
        return Err(Error::NotSelfDual);
    }
    let mut report = direct_sandwich(d, zs, t, delta)?;
    let upper_sys = SelbergSystem::new(t, delta, Side::Majorant)?;
    let lower_sys = upper_sys.with_side(Side::Minorant);
    let (formula_lower, formula_upper, route_disagreement) =
        if (2.0 * PI * delta).exp() <= DEFAULT_SIEVE_CAP as f64 {
            let cfg = FormulaConfig {
                tol: 1e-3,
                ..FormulaConfig::default()
            };
            let lo = evaluate_formula_with(d, zs, &selberg_test(lower_sys), 0.0, &cfg)?;
            let hi = evaluate_formula_with(d, zs, &selberg_test(upper_sys), 0.0, &cfg)?;
            let side = |r: &crate::explicit_formula::ExplicitFormulaReport| {
                (r.zero_sum - r.residual).re
            };
            (
                Some(side(&lo)),
                Some(side(&hi)),
                Some(lo.residual.norm().max(hi.residual.norm())),
            )
        } else {
            (None, None, None)
        };
    report.formula_lower = formula_lower;
    report.formula_upper = formula_upper;
    report.route_disagreement = route_disagreement;
    Ok(report)
}

fn direct_sandwich(d: &LFunctionDescriptor, zs: &ZeroSet, t: f64, delta: f64) -> Result<SandwichReport> {
    if !d.is_self_dual() {
        return Err(Error::NotSelfDual);
    }
    let count = count_zeros(zs, t)?;
    let upper_sys = SelbergSystem::new(t, delta, Side::Majorant)?;
    let lower_sys = upper_sys.with_side(Side::Minorant);
    let height = zs.complete_to();
    let ords = zs.signed_ordinates();
    let sum = |sys: &SelbergSystem| -> f64 {
        ords.iter()
            .filter(|g| g.abs() <= height)
            .map(|&g| selberg_r(sys, g))
            .sum()
    };
    Ok(SandwichReport {
        t,
        delta,
        count,
        lower: sum(&lower_sys),
        upper: sum(&upper_sys),
        tail_bound: 2.0 * zero_tail_bound(d, &|u| selberg_test(lower_sys).tail_sup(u, 1.0), height)?,
        formula_lower: None,
        formula_upper: None,
        route_disagreement: None,
    })
}

/// Mean of `Σ R⁺(γ) − N(t, π)` over a grid of `t`, all sandwiches exact.
/// Single points need not decrease with `Δ`; the mean follows `~1/Δ`.
pub fn mean_gap(d: &LFunctionDescriptor, zs: &ZeroSet, t_grid: &[f64], delta: f64) -> Result<f64> {
    check_grid(t_grid)?;
    let reports = par::map(t_grid, |&t| direct_sandwich(d, zs, t, delta));
    let mut total = 0.0;
    for r in reports {
        let r = r?;
        if !r.holds() {
            return Err(Error::Config(format!("sandwich violated at t = {}, Δ = {delta}", r.t)));
        }
        total += r.gap();
    }
    Ok(total / t_grid.len() as f64)
}

/// `Σ_{γ>T} f(γ)` for a nonnegative decreasing `f`: `∫_T^∞ f W + 2 sup|S| f(T)`.
fn zero_tail_bound<F: Fn(f64) -> f64>(d: &LFunctionDescriptor, f: &F, height: f64) -> Result<f64> {
    let start = f(height);
    if !start.is_finite() || start >= 2.0 {
        return Err(Error::Completeness {
            requested: height,
            complete_to: height,
        });
    }
    let w = |u: f64| density(d, u);
    let q = integrate_to_infinity(|u| f(u) * w(u), height.max(1.0), QuadConfig::with_abs_tol(1e-12));
    Ok(q.value + q.error + 2.0 * S_BOUND * start)
}

/// `(1/π) Re L∞'/L∞(½+iu)`.
fn density(d: &LFunctionDescriptor, u: f64) -> f64 {
    d.gamma_factor_logderiv(Complex64::new(0.5, u))
        .map_or(f64::NAN, |g| g.re / PI)
}

/// One point of an `S(t)` scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub t: f64,
    pub s_value: f64,
    pub envelope: f64,
    pub delta_used: f64,
    /// Sandwich sides at `delta_used`; `None` for non-self-dual descriptors.
    pub sandwich_lower: Option<f64>,
    pub sandwich_upper: Option<f64>,
    pub count: f64,
    /// `envelope − |s_value|`.
    pub slack: f64,
}

impl BoundReport {
    pub fn csv_header() -> &'static str {
        "t,S,envelope,delta,sandwich_lower,count,sandwich_upper,slack"
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), num);
        row(&[
            num(self.t),
            num(self.s_value),
            num(self.envelope),
            num(self.delta_used),
            opt(self.sandwich_lower),
            num(self.count),
            opt(self.sandwich_upper),
            num(self.slack),
        ])
    }
}

/// Summary of a scan: the envelope's o(1) term as an observed constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSummary {
    pub max_abs_s: f64,
    pub min_slack: f64,
    /// Smallest `c ≥ 0` with `|S| ≤ envelope + c` on the grid.
    pub additive_constant: f64,
    pub sandwich_holds: bool,
}

pub fn summarize(reports: &[BoundReport]) -> ScanSummary {
    let max_abs_s = reports.iter().map(|r| r.s_value.abs()).fold(0.0, f64::max);
    let min_slack = reports.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let sandwich_holds = reports.iter().all(|r| match (r.sandwich_lower, r.sandwich_upper) {
        (Some(lo), Some(hi)) => lo <= r.count && r.count <= hi,
        _ => true,
    });
    ScanSummary {
        max_abs_s,
        min_slack,
        additive_constant: (-min_slack).max(0.0),
        sandwich_holds,
    }
}

/// `S(t)`, envelope and (self-dual only) the direct sandwich at each grid
/// point, in grid order.
pub fn scan_s_bound(d: &LFunctionDescriptor, zs: &ZeroSet, t_grid: &[f64]) -> Result<Vec<BoundReport>> {
    check_grid(t_grid)?;
    let ev = Evaluator::new(d)?;
    let results = par::map(t_grid, |&t| -> Result<BoundReport> {
        let s_value = ev.argument_s(t)?.value;
        let (envelope, delta_used) = theorem_envelope(d, t)?;
        let count = count_zeros(zs, t)?;
        let (sandwich_lower, sandwich_upper) = if d.is_self_dual() {
            let sw = direct_sandwich(d, zs, t, delta_used)?;
            (Some(sw.lower - sw.tail_bound), Some(sw.upper))
        } else {
            (None, None)
        };
        Ok(BoundReport {
            t,
            s_value,
            envelope,
            delta_used,
            sandwich_lower,
            sandwich_upper,
            count,
            slack: envelope - s_value.abs(),
        })
    });
    results.into_iter().collect()
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::Config("empty t grid".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Config("t grid must be finite and strictly ascending".into()));
    }
    Ok(())
}

/// `S(t)` against `(1/π) Σ K(t − γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSumReport {
    pub t: f64,
    pub kernel_sum: f64,
    pub s_value: f64,
    pub discrepancy: f64,
}

impl KernelSumReport {
    pub fn csv_header() -> &'static str {
        "t,S,kernel_sum,discrepancy"
    }

    pub fn csv_row(&self) -> String {
        row(&[num(self.t), num(self.s_value), num(self.kernel_sum), num(self.discrepancy)])
    }
}

/// `F` for ζ, `G` otherwise.
pub fn kernel_for(d: &LFunctionDescriptor) -> Kernel {
    if d.is_zeta() {
        Kernel::F
    } else {
        Kernel::G
    }
}

/// `S(t) − (1/π)[Σ_{|γ|≤T} K(t−γ) + ∫_{|u|>T} K(t−u) W(u) du]` over the
/// grid, in grid order.
pub fn kernel_sum_check(d: &LFunctionDescriptor, zs: &ZeroSet, t_grid: &[f64]) -> Result<Vec<KernelSumReport>> {
    check_grid(t_grid)?;
    let ev = Evaluator::new(d)?;
    let kernel = kernel_for(d);
    let height = zs.complete_to();
    if let Some(&t) = t_grid.iter().find(|t| t.abs() > height) {
        return Err(Error::Completeness {
            requested: t.abs(),
            complete_to: height,
        });
    }
    let ords: Vec<f64> = zs
        .signed_ordinates()
        .into_iter()
        .filter(|g| g.abs() <= height)
        .collect();
    let cfg = QuadConfig::with_abs_tol(1e-12);
    let results = par::map(t_grid, |&t| -> Result<KernelSumReport> {
        let direct: f64 = ords.iter().map(|&g| kernel_eval(kernel, t - g)).sum();
        let w = |u: f64| density(d, u);
        let from = height.max(1.0);
        let up = integrate_to_infinity(|u| kernel_eval(kernel, t - u) * w(u), from, cfg).value;
        let down = integrate_to_infinity(|u| kernel_eval(kernel, t + u) * w(-u), from, cfg).value;
        let kernel_sum = (direct + up + down) / PI;
        let s_value = ev.argument_s(t)?.value;
        Ok(KernelSumReport {
            t,
            kernel_sum,
            s_value,
            discrepancy: s_value - kernel_sum,
        })
    });
    results.into_iter().collect()
}

/// Order-of-vanishing bound at the central point with the observed order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralOrderReport {
    /// `(½ + ϑ) log C(π) / log log C(π)^{a/m}`.
    pub bound: f64,
    /// Observed order when `L(½)` is evaluable and nonzero.
    pub actual: Option<u32>,
}

pub fn central_order_bound_with(d: &LFunctionDescriptor, a: f64) -> Result<CentralOrderReport> {
    let log_c = d.analytic_conductor().base.ln();
    let tw = log_tower(log_c, d.degree(), a)?;
    if !(tw.l2 > 0.0) {
        return Err(Error::Threshold(format!(
            "log log C^(a/m) = {:.4} is not positive",
            tw.l2
        )));
    }
    let bound = (0.5 + d.theta()) * log_c / tw.l2;
    let actual = match Evaluator::new(d) {
        Ok(ev) if ev.l_value(Complex64::new(0.5, 0.0)).norm() > ZERO_SNAP => Some(0),
        _ => None,
    };
    Ok(CentralOrderReport { bound, actual })
}

pub fn central_order_bound(d: &LFunctionDescriptor) -> Result<CentralOrderReport> {
    central_order_bound_with(d, DEFAULT_CONDUCTOR_EXPONENT)
}

/// Lowest-zero bound against the lowest computed ordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowestZeroReport {
    /// `(½ + ϑ) π / log log C(π)^{a/m}`.
    pub bound: f64,
    pub actual: f64,
    /// `max(0, actual − bound)`: the observed size of the error term.
    pub slack: f64,
}

impl LowestZeroReport {
    pub fn csv_header() -> &'static str {
        "descriptor,bound,actual,slack"
    }

    pub fn csv_row(&self, name: &str) -> String {
        row(&[name.to_string(), num(self.bound), num(self.actual), num(self.slack)])
    }
}

/// The argument works for heights in `(0, 1]`; the bound is reported only
/// when the main term plus `π ℓ3/ℓ2²` stays below 1 and `ℓ3 > 0`.
pub fn lowest_zero_bound_with(d: &LFunctionDescriptor, zs: &ZeroSet, a: f64) -> Result<LowestZeroReport> {
    let log_c = d.analytic_conductor().base.ln();
    let tw = log_tower(log_c, d.degree(), a)?;
    let main = (0.5 + d.theta()) * PI / tw.l2;
    let reach = main + PI * tw.l3 / (tw.l2 * tw.l2);
    if !(tw.l3 > 0.0) || !(reach <= 1.0) {
        return Err(Error::Threshold(format!(
            "C(π) = {:.4}: bound with error term {reach:.4} exceeds the unit height range",
            d.analytic_conductor().base
        )));
    }
    let actual = zs
        .lowest()
        .ok_or_else(|| Error::Config("lowest-zero bound needs a nonempty zero set".into()))?;
    Ok(LowestZeroReport {
        bound: main,
        actual,
        slack: (actual - main).max(0.0),
    })
}

pub fn lowest_zero_bound(d: &LFunctionDescriptor, zs: &ZeroSet) -> Result<LowestZeroReport> {
    lowest_zero_bound_with(d, zs, DEFAULT_CONDUCTOR_EXPONENT)
}
