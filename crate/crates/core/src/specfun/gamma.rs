use std::f64::consts::PI;

use num_complex::Complex64;

use super::{BudgetSource, Budgeted, ErrorBudget};
use crate::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Asymptotic expansions are used once |w| >= this.
const SHIFT_RADIUS: f64 = 16.0;
const SERIES_TERMS: usize = 8;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn pole_error(z: Complex64) -> Error {
    Error::GammaPole { re: z.re, im: z.im }
}

fn needs_shift(w: Complex64) -> bool {
    w.norm() < SHIFT_RADIUS || (w.re < 0.0 && w.im.abs() < SHIFT_RADIUS)
}

/// Principal-branch-continuous log-gamma for Re z > -50 (or |Im z| >= 16);
/// uses recurrence shifting plus the Stirling series. For Re z > 0 the
/// result is the branch continuous in z with ln Γ real on the positive axis.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(pole_error(z));
    }
    if z.re < -50.0 && z.im.abs() < SHIFT_RADIUS {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z)?);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while needs_shift(w) {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for (k, b) in BERNOULLI.iter().take(SERIES_TERMS).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        series += p * (b / (n * (n - 1.0)));
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift)
}

/// ln Γ_R(z) = -(z/2) ln π + ln Γ(z/2).
pub fn ln_gamma_r(z: Complex64) -> Result<Complex64> {
    Ok(-0.5 * z * PI.ln() + ln_gamma(0.5 * z)?)
}

/// Digamma ψ(z) = Γ'/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    digamma_budgeted(z).map(|b| b.value)
}

/// Digamma with its error budget: recurrence shift to |w| >= 16, then the
/// 8-term asymptotic series.
pub fn digamma_budgeted(z: Complex64) -> Result<Budgeted<Complex64>> {
    if is_pole(z) {
        return Err(pole_error(z));
    }
    if z.re < 0.0 && z.im.abs() < SHIFT_RADIUS {
        // ψ(z) = ψ(1 - z) - π cot(πz)
        let refl = digamma_budgeted(1.0 - z)?;
        let pz = z * PI;
        let cot = pz.cos() / pz.sin();
        let value = refl.value - cot * PI;
        let budget = refl
            .budget
            .add(ErrorBudget::absolute(4.0 * f64::EPSILON * value.norm(), BudgetSource::SeriesTruncation));
        return Ok(Budgeted { value, budget });
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut shifts = 0u32;
    while needs_shift(w) {
        acc -= w.inv();
        w += 1.0;
        shifts += 1;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    let mut last = 0.0;
    for (k, b) in BERNOULLI.iter().take(SERIES_TERMS).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        let term = p * (b / n);
        series += term;
        last = term.norm();
        p *= inv2;
    }
    let value = w.ln() - 0.5 * inv - series + acc;
    let rounding = f64::EPSILON * (value.norm() + acc.norm() + 4.0 + shifts as f64);
    let truncation = last * inv2.norm() * 30.0;
    Ok(Budgeted {
        value,
        budget: ErrorBudget::new(rounding + truncation, 2.0 * f64::EPSILON, BudgetSource::SeriesTruncation),
    })
}

/// Trigamma ψ'(z) = Σ_{k>=0} 1/(z+k)^2, for z away from the poles.
pub fn trigamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(pole_error(z));
    }
    if z.re < 0.0 && z.im.abs() < SHIFT_RADIUS {
        // ψ'(1-z) + ψ'(z) = π^2 / sin^2(πz)
        let s = (z * PI).sin();
        return Ok(PI * PI / (s * s) - trigamma(1.0 - z)?);
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while needs_shift(w) {
        acc += (w * w).inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2 * inv;
    for b in BERNOULLI.iter().take(SERIES_TERMS) {
        series += p * *b;
        p *= inv2;
    }
    Ok(acc + inv + 0.5 * inv2 + series)
}

/// Real trigamma for x > 0 (hot path of the Beurling evaluator).
pub fn trigamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut w = x;
    let mut acc = 0.0;
    while w < SHIFT_RADIUS {
        acc += 1.0 / (w * w);
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv2 * inv;
    for b in BERNOULLI.iter().take(SERIES_TERMS) {
        series += p * b;
        p *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

/// Γ_R'/Γ_R(z) = -(1/2) ln π + (1/2) ψ(z/2).
pub fn gamma_r_logderiv(z: Complex64) -> Result<Complex64> {
    Ok(-0.5 * PI.ln() + 0.5 * digamma(0.5 * z)?)
}

/// Riemann-Siegel theta θ(t) = arg Γ_R(1/2 + it) on the continuous branch
/// with θ(0) = 0.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    riemann_siegel_theta_budgeted(t).value
}

pub fn riemann_siegel_theta_budgeted(t: f64) -> Budgeted<f64> {
    if t == 0.0 {
        return Budgeted {
            value: 0.0,
            budget: ErrorBudget::zero(BudgetSource::SeriesTruncation),
        };
    }
    // 1/4 + it/2 is never a pole
    let lg = ln_gamma(Complex64::new(0.25, 0.5 * t)).expect("no pole off the real axis");
    let value = lg.im - 0.5 * t * PI.ln();
    Budgeted {
        value,
        budget: ErrorBudget::new(
            8.0 * f64::EPSILON * (1.0 + t.abs() * (2.0 + t.abs().ln().abs())),
            0.0,
            BudgetSource::SeriesTruncation,
        ),
    }
}
