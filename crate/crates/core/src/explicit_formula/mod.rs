//! Both sides of the Guinand-Weil explicit formula
//!
//! `Σ_ρ h((ρ−½)/i) = r{h(1/2i) + h(−1/2i)} + (1/π)∫ h(u) Re L∞'/L∞(½+iu) du
//!   − (1/2π) Σ n^{−½}{Λ_π(n) ĥ(log n/2π) + Λ_π̃(n) ĥ(−log n/2π)} − (low μ terms)`
//!
//! evaluated block by block, with the residual of the identity.

mod test_function;

pub use test_function::{gaussian_test, selberg_test, DecayCertificate, Shape, TestFunction};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::critical_line::{Evaluator, ZeroSet};
use crate::error::{Error, Result};
use crate::lfunc::LFunctionDescriptor;
use crate::par;
use crate::quad::{breakpoints, integrate, integrate_split, QuadConfig};
use crate::specfun::{gamma_r_logderiv, shared_sieve, BudgetSource, ErrorBudget, DEFAULT_SIEVE_CAP};
use crate::table::{num, row};

/// Bound on `|S(t)|` used in the zero-tail remainder.
const S_BOUND: f64 = 2.0;
/// Chebyshev bound `ψ(x) < 1.04 x`.
const PSI_CONSTANT: f64 = 1.04;
/// `Re(½ + μ)` below which the Poisson kernel is split off.
const POISSON_SPLIT: f64 = 0.25;
const POISSON_RADIUS: f64 = 1.0;
const PRIME_CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaConfig {
    /// Largest acceptable total budget.
    pub tol: f64,
    /// Absolute tolerance of each quadrature.
    pub quad_tol: f64,
    /// Target for the truncated prime tail when `ĥ` is not compactly supported.
    pub prime_tail_tol: f64,
    /// Fixed prime cutoff, overriding the automatic choice.
    pub prime_cutoff: Option<u64>,
    pub sieve_cap: u64,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            quad_tol: 1e-10,
            prime_tail_tol: 1e-8,
            prime_cutoff: None,
            sieve_cap: DEFAULT_SIEVE_CAP,
        }
    }
}

/// Itemized sides of the explicit formula.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitFormulaReport {
    pub descriptor: String,
    /// Zeros up to `zero_height` plus the tail estimate.
    pub zero_sum: Complex64,
    pub zero_sum_direct: Complex64,
    pub zero_tail: Complex64,
    pub pole_terms: Complex64,
    pub archimedean: Complex64,
    pub prime_sum: Complex64,
    /// `Σ_{−1<Re μ<−½}[…] + ½ Σ_{Re μ=−½}[…]`.
    pub spectral_corrections: Complex64,
    /// `zero_sum − pole_terms − archimedean + prime_sum + spectral_corrections`.
    pub residual: Complex64,
    pub budget: ErrorBudget,
    pub zero_height: f64,
    pub prime_cutoff: u64,
    pub zeros_used: usize,
}

impl ExplicitFormulaReport {
    pub fn truncation_heights(&self) -> (f64, u64) {
        (self.zero_height, self.prime_cutoff)
    }

    pub fn passes(&self) -> bool {
        self.residual.norm() <= self.budget.absolute
    }

    pub fn csv_header() -> &'static str {
        "descriptor,zero_sum,zero_tail,pole_terms,archimedean,prime_sum,spectral_corrections,residual_re,residual_im,budget,zero_height,prime_cutoff,zeros_used"
    }

    /// Real parts of the blocks (the imaginary parts vanish for real `h`),
    /// and the full residual.
    pub fn csv_row(&self) -> String {
        row(&[
            self.descriptor.clone(),
            num(self.zero_sum.re),
            num(self.zero_tail.re),
            num(self.pole_terms.re),
            num(self.archimedean.re),
            num(self.prime_sum.re),
            num(self.spectral_corrections.re),
            num(self.residual.re),
            num(self.residual.im),
            num(self.budget.absolute),
            num(self.zero_height),
            self.prime_cutoff.to_string(),
            self.zeros_used.to_string(),
        ])
    }

    pub fn to_text(&self) -> String {
        let c = |z: Complex64| format!("{} {:+.14e}i", num(z.re), z.im);
        [
            format!("descriptor            {}", self.descriptor),
            format!("zero sum              {}", c(self.zero_sum)),
            format!("  direct              {}", c(self.zero_sum_direct)),
            format!("  tail                {}", c(self.zero_tail)),
            format!("pole terms            {}", c(self.pole_terms)),
            format!("archimedean           {}", c(self.archimedean)),
            format!("prime sum             {}", c(self.prime_sum)),
            format!("spectral corrections  {}", c(self.spectral_corrections)),
            format!("residual              {}", c(self.residual)),
            format!("budget                {}", num(self.budget.absolute)),
            format!("zero height           {}", num(self.zero_height)),
            format!("prime cutoff          {}", self.prime_cutoff),
            format!("zeros used            {}", self.zeros_used),
        ]
        .join("\n")
    }
}

/// [`evaluate_formula_with`] under the default configuration.
pub fn evaluate_formula(
    d: &LFunctionDescriptor,
    zs: &ZeroSet,
    h: &TestFunction,
    shift: f64,
) -> Result<ExplicitFormulaReport> {
    evaluate_formula_with(d, zs, h, shift, &FormulaConfig::default())
}

/// Evaluates every block for `u ↦ h(u − shift)` against the zeros in `zs`.
pub fn evaluate_formula_with(
    d: &LFunctionDescriptor,
    zs: &ZeroSet,
    h: &TestFunction,
    shift: f64,
    cfg: &FormulaConfig,
) -> Result<ExplicitFormulaReport> {
    if zs.descriptor_id() != d.hash() {
        return Err(Error::Config(format!(
            "zero set belongs to descriptor {}, not {}",
            zs.descriptor_id(),
            d.hash()
        )));
    }
    if !(cfg.tol > 0.0 && cfg.quad_tol > 0.0 && cfg.prime_tail_tol > 0.0) {
        return Err(Error::Config("tolerances must be positive".into()));
    }
    let h = h.shifted(shift);
    let (cutoff, prime_tail) = prime_cutoff(d, &h, cfg)?;

    let ((zeros, arch), primes) = par::join(
        || par::join(|| zero_block(d, zs, &h, cfg), || archimedean(d, &h, shift, cfg)),
        || prime_block(d, &h, cutoff, cfg),
    );
    let zeros = zeros?;
    let (arch, arch_err) = arch;
    let (prime_sum, prime_err) = primes?;

    let r = d.pole_order() as f64;
    let pole_terms = r * (h.eval(Complex64::new(0.0, 0.5)) + h.eval(Complex64::new(0.0, -0.5)));
    let spectral_corrections = spectral_corrections(d, &h);

    let archimedean = Complex64::new(arch, 0.0);
    let zero_sum = zeros.direct + zeros.tail;
    let residual = zero_sum - pole_terms - archimedean + prime_sum + spectral_corrections;

    let scale = zero_sum.norm() + archimedean.norm() + prime_sum.norm() + pole_terms.norm();
    let budget = ErrorBudget::absolute(zeros.direct_err, BudgetSource::TableLookup)
        .add(ErrorBudget::absolute(zeros.tail_err, BudgetSource::TailEstimate))
        .add(ErrorBudget::absolute(arch_err, BudgetSource::Quadrature))
        .add(ErrorBudget::absolute(prime_err + prime_tail, BudgetSource::TailEstimate))
        .add(ErrorBudget::absolute(1e-14 * scale, BudgetSource::SeriesTruncation));
    if budget.absolute > cfg.tol {
        return Err(Error::BudgetInfeasible {
            requested: cfg.tol,
            attainable: budget.absolute,
        });
    }
    Ok(ExplicitFormulaReport {
        descriptor: d.name(),
        zero_sum,
        zero_sum_direct: zeros.direct,
        zero_tail: zeros.tail,
        pole_terms,
        archimedean,
        prime_sum,
        spectral_corrections,
        residual,
        budget,
        zero_height: zs.complete_to(),
        prime_cutoff: cutoff,
        zeros_used: zeros.used,
    })
}

struct ZeroBlock {
    direct: Complex64,
    direct_err: f64,
    tail: Complex64,
    tail_err: f64,
    used: usize,
}

/// Smooth zero density `(1/π) Re L∞'/L∞(½+iu)`; `split` marks the
/// parameters whose Poisson kernel is handled separately.
fn density(d: &LFunctionDescriptor, u: f64, split: bool) -> f64 {
    let mut acc = 0.5 * (d.conductor() as f64).ln();
    for mu in d.spectral_params() {
        let z = Complex64::new(0.5, u) + mu;
        let z = if split && z.re < POISSON_SPLIT { z + 2.0 } else { z };
        acc += gamma_r_logderiv(z).map_or(f64::NAN, |g| g.re);
    }
    acc / PI
}

/// Direct sum over `|γ| ≤ T` and the tail
/// `∫_{|u|>T} h W du − h(T)S(T) + h(−T)S(−T)`, whose remainder
/// `∫ h' S` is bounded by `2 sup|S| sup|h|` on each side.
fn zero_block(d: &LFunctionDescriptor, zs: &ZeroSet, h: &TestFunction, cfg: &FormulaConfig) -> Result<ZeroBlock> {
    let height = zs.complete_to();
    let mut direct = Complex64::new(0.0, 0.0);
    let mut slope = 0.0;
    let mut used = 0;
    let step = 1e-5;
    for g in zs.signed_ordinates() {
        let a = g.abs();
        if a > height {
            continue;
        }
        let w = if a == height { 0.5 } else { 1.0 };
        direct += w * h.eval(Complex64::new(g, 0.0));
        slope += ((h.eval_real(g + step) - h.eval_real(g - step)) / (2.0 * step)).abs();
        used += 1;
    }
    let direct_err = zs.precision() * slope + 1e-16 * used as f64 * h.tail_sup(0.0, 1.0).max(h.tail_sup(0.0, -1.0));

    let sup_up = h.tail_sup(height, 1.0);
    let sup_down = h.tail_sup(height, -1.0);
    if sup_up == 0.0 && sup_down == 0.0 {
        return Ok(ZeroBlock {
            direct,
            direct_err,
            tail: Complex64::new(0.0, 0.0),
            tail_err: 0.0,
            used,
        });
    }
    let w = |u: f64| density(d, u, false);
    let (up, e_up) = h.integrate_against(&w, height.max(f64::MIN_POSITIVE), f64::INFINITY, cfg.quad_tol, &[]);
    let (down, e_down) = h.integrate_against(&w, f64::NEG_INFINITY, -height.max(f64::MIN_POSITIVE), cfg.quad_tol, &[]);
    let ev = Evaluator::new(d)?;
    let s_up = ev.argument_s(height)?;
    let s_down = if d.is_self_dual() {
        crate::critical_line::ArgumentTrace {
            value: -s_up.value,
            ..s_up
        }
    } else {
        ev.argument_s(-height)?
    };
    let tail = up + down - h.eval_real(height) * s_up.value + h.eval_real(-height) * s_down.value;
    let tail_err = e_up
        + e_down
        + 2.0 * S_BOUND * (sup_up + sup_down)
        + sup_up * s_up.budget.absolute
        + sup_down * s_down.budget.absolute;
    Ok(ZeroBlock {
        direct,
        direct_err,
        tail: Complex64::new(tail, 0.0),
        tail_err,
        used,
    })
}

/// `(1/π)∫ h(u) Re L∞'/L∞(½+iu) du`, split at `±2(|shift|+1)(max|μ|+3)`,
/// with near-singular Poisson kernels integrated through their arctan
/// antiderivative.
fn archimedean(d: &LFunctionDescriptor, h: &TestFunction, shift: f64, cfg: &FormulaConfig) -> (f64, f64) {
    let mu_max = d.spectral_params().iter().map(|m| m.norm()).fold(0.0, f64::max);
    let split = 2.0 * (shift.abs() + 1.0) * (mu_max + 3.0);
    let w = |u: f64| density(d, u, true);
    let (mut value, mut error) = h.integrate_against(&w, f64::NEG_INFINITY, f64::INFINITY, cfg.quad_tol, &[-split, split]);
    for mu in d.spectral_params() {
        let a = 0.5 + mu.re;
        if a < POISSON_SPLIT {
            let (v, e) = poisson_integral(h, a, -mu.im, cfg);
            value += v;
            error += e;
        }
    }
    (value, error)
}

/// `∫ h(u)·(−(1/π)) a/(a² + (u−u0)²) du`.
pub(crate) fn poisson_integral(h: &TestFunction, a: f64, u0: f64, cfg: &FormulaConfig) -> (f64, f64) {
    let kernel = move |u: f64| -a / (PI * (a * a + (u - u0) * (u - u0)));
    let (lo, hi) = (u0 - POISSON_RADIUS, u0 + POISSON_RADIUS);
    let h0 = h.eval_real(u0);
    let mass = if a == 0.0 {
        0.0
    } else {
        -(2.0 / PI) * (POISSON_RADIUS / a.abs()).atan() * a.signum()
    };
    let mut pts = h.breakpoints(lo, hi);
    pts.extend(breakpoints(lo, hi, a.abs().max(1e-3)));
    pts.push(u0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let inner = integrate_split(
        |u| (h.eval_real(u) - h0) * kernel(u),
        &pts,
        QuadConfig {
            abs_tol: cfg.quad_tol,
            rel_tol: 1e-14,
            max_intervals: 200_000,
        },
    );
    let (left, e_left) = h.integrate_against(&kernel, f64::NEG_INFINITY, lo, cfg.quad_tol, &[]);
    let (right, e_right) = h.integrate_against(&kernel, hi, f64::INFINITY, cfg.quad_tol, &[]);
    (
        h0 * mass + inner.value + left + right,
        inner.error + e_left + e_right,
    )
}

/// `Σ_{−1<Re μ<−½}[h(i(μ+½)) + h(−i(μ+½))] + ½ Σ_{Re μ=−½}[…]`.
fn spectral_corrections(d: &LFunctionDescriptor, h: &TestFunction) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    d.spectral_params()
        .iter()
        .filter(|mu| mu.re > -1.0 && mu.re <= -0.5)
        .map(|mu| {
            let w = if mu.re == -0.5 { 0.5 } else { 1.0 };
            let z = i * (mu + 0.5);
            w * (h.eval(z) + h.eval(-z))
        })
        .sum()
}

/// Prime cutoff `X` and the bound on the omitted prime tail. For band
/// limit Δ, `X = ⌊e^{2πΔ}⌋` and the tail is empty; otherwise `log X` is the
/// first quarter-step where the partial-summation bound
/// `(m/π)·1.04·[X g(X) + ∫_X^∞ g]`, `g(x) = x^{ϑ−½} env(log x/2π)`,
/// drops below the target.
pub fn prime_cutoff(d: &LFunctionDescriptor, h: &TestFunction, cfg: &FormulaConfig) -> Result<(u64, f64)> {
    if let Some(x) = cfg.prime_cutoff {
        return Ok((x, 0.0));
    }
    if let Some(delta) = h.band_limit() {
        let x = (2.0 * PI * delta).exp().floor();
        if x > cfg.sieve_cap as f64 {
            return Err(Error::SieveCapacity {
                limit: x as u64,
                cap: cfg.sieve_cap,
            });
        }
        return Ok((x as u64, 0.0));
    }
    let m = d.degree() as f64;
    let expo = 0.5 + d.theta();
    let f = |v: f64| (expo * v).exp() * h.fourier_envelope(v / (2.0 * PI));
    let cap = (cfg.sieve_cap as f64).ln();
    let mut v = 1.0;
    while v <= cap {
        let here = f(v);
        if here.is_finite() && f(v + 0.01) < here {
            let tail = integrate(f, v, v + 400.0, QuadConfig::with_abs_tol(1e-3 * cfg.prime_tail_tol));
            let bound = m / PI * PSI_CONSTANT * (here + tail.value + tail.error);
            if bound <= cfg.prime_tail_tol {
                return Ok((v.exp().floor() as u64, bound));
            }
        }
        v += 0.25;
    }
    Err(Error::SieveCapacity {
        limit: v.exp() as u64,
        cap: cfg.sieve_cap,
    })
}

/// `(1/2π) Σ_{n≤X} n^{−½}{Λ_π(n) ĥ(log n/2π) + Λ_π̃(n) ĥ(−log n/2π)}`.
fn prime_block(d: &LFunctionDescriptor, h: &TestFunction, cutoff: u64, cfg: &FormulaConfig) -> Result<(Complex64, f64)> {
    if cutoff < 2 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    if cutoff > cfg.sieve_cap {
        return Err(Error::SieveCapacity {
            limit: cutoff,
            cap: cfg.sieve_cap,
        });
    }
    let table = shared_sieve(cutoff)?;
    let dual = d.dual();
    let term = |n: u64, p: u64| -> Result<(Complex64, f64)> {
        let ln_n = (n as f64).ln();
        let xi = ln_n / (2.0 * PI);
        let weight = (-0.5 * ln_n).exp();
        let a = d.coefficient(n, p)? * h.fourier(xi);
        let b = dual.coefficient(n, p)? * h.fourier(-xi);
        let t = weight * (a + b);
        Ok((t, t.norm()))
    };
    let np = table.primes().partition_point(|&p| p as u64 <= cutoff);
    let primes = &table.primes()[..np];
    let chunks: Vec<&[u32]> = primes.chunks(PRIME_CHUNK).collect();
    let partial = par::map(&chunks, |c| -> Result<(Complex64, f64)> {
        c.iter().try_fold((Complex64::new(0.0, 0.0), 0.0), |(s, m), &p| {
            let (t, a) = term(p as u64, p as u64)?;
            Ok((s + t, m + a))
        })
    });
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for r in partial {
        let (s, m) = r?;
        sum += s;
        mag += m;
    }
    for &(n, p, _) in table.higher_powers().iter().take_while(|(n, _, _)| *n <= cutoff) {
        let (t, a) = term(n, p as u64)?;
        sum += t;
        mag += a;
    }
    Ok((sum / (2.0 * PI), 1e-15 * mag))
}
