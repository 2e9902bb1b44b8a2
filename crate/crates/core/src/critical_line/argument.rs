//! Continuous argument of L along polylines.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::eval::Evaluator;
use crate::error::{Error, Result};
use crate::lfunc::LFunctionDescriptor;
use crate::specfun::{BudgetSource, ErrorBudget};

/// `S(t)` with the number of evaluations spent on the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgumentTrace {
    pub t: f64,
    pub value: f64,
    pub path_points: usize,
    pub budget: ErrorBudget,
}

const MAX_DEPTH: u32 = 48;
const MAX_STEP: f64 = PI / 4.0;
const CONSISTENCY: f64 = 1e-9;
/// `|L(½+it)|` below which `t` is treated as a zero ordinate.
pub const ZERO_SNAP: f64 = 1e-9;
/// Offset used for the symmetric limit at a zero ordinate or at a pole.
pub const SNAP_OFFSET: f64 = 1e-6;

/// Accumulated change of `arg f(x)` for `x` from `a` to `b`, by bisection
/// until each step turns by less than `π/4` and agrees with its two halves.
pub(crate) fn track_phase<F>(f: &F, a: f64, b: f64, pieces: usize, at: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> Complex64,
{
    let mut evals = 1;
    let mut total = 0.0;
    let mut xa = a;
    let mut fa = f(a);
    for i in 1..=pieces {
        let xb = if i == pieces {
            b
        } else {
            a + (b - a) * i as f64 / pieces as f64
        };
        let fb = f(xb);
        evals += 1;
        total += refine(f, xa, fa, xb, fb, 0, &mut evals, at)?;
        xa = xb;
        fa = fb;
    }
    Ok((total, evals))
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    xa: f64,
    fa: Complex64,
    xb: f64,
    fb: Complex64,
    depth: u32,
    evals: &mut usize,
    at: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    let xm = 0.5 * (xa + xb);
    let fm = f(xm);
    *evals += 1;
    let d = (fb / fa).arg();
    let d1 = (fm / fa).arg();
    let d2 = (fb / fm).arg();
    if d1.abs() < MAX_STEP && d2.abs() < MAX_STEP && (d1 + d2 - d).abs() < CONSISTENCY {
        return Ok(d1 + d2);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::StepExhausted { t: at });
    }
    Ok(refine(f, xa, fa, xm, fm, depth + 1, evals, at)?
        + refine(f, xm, fm, xb, fb, depth + 1, evals, at)?)
}

impl Evaluator {
    /// `π S(t)` along `2 → 2+it → ½+it`, without zero handling.
    fn raw_argument(&self, t: f64) -> Result<(f64, usize)> {
        // |L(2+iu) − 1| ≤ ζ(2) − 1 < 1 on the vertical segment
        let start = self.l_value(Complex64::new(2.0, t)).arg();
        let (change, evals) =
            track_phase(&|sigma| self.l_value(Complex64::new(sigma, t)), 2.0, 0.5, 8, t)?;
        Ok((start + change, evals + 1))
    }

    /// `S(t) = (1/π) arg L(½+it)` by continuous variation from 2; the
    /// symmetric limit at zero ordinates and at `t = 0` when L has a pole.
    pub fn argument_s(&self, t: f64) -> Result<ArgumentTrace> {
        let on_line = self.l_value(Complex64::new(0.5, t)).norm();
        let singular = on_line <= ZERO_SNAP || (t == 0.0 && self.descriptor().pole_order() > 0);
        let (value, path_points) = if singular {
            let (up, n1) = self.raw_argument(t + SNAP_OFFSET)?;
            let (down, n2) = self.raw_argument(t - SNAP_OFFSET)?;
            (0.5 * (up + down) / PI, n1 + n2 + 1)
        } else {
            let (arg, n) = self.raw_argument(t)?;
            (arg / PI, n + 1)
        };
        Ok(ArgumentTrace {
            t,
            value,
            path_points,
            budget: ErrorBudget::absolute(
                1e-14 * path_points as f64 + 1e-13,
                BudgetSource::SeriesTruncation,
            ),
        })
    }

    /// Winding number of `Λ` around the rectangle `[−½, 2] × [lo, T]`, with
    /// `lo = ½` when L has a pole (zeros in `(0, T)`) and `lo = −T`
    /// otherwise (zeros with `|γ| < T`).
    pub fn argument_principle_count(&self, height: f64) -> Result<f64> {
        let (left, right) = (-0.5, 2.0);
        let lo = if self.descriptor().pole_order() > 0 { 0.5 } else { -height };
        let phasor = |s: Complex64| -> Complex64 {
            match self.ln_gamma_factor(s) {
                Ok(g) => self.l_value(s) * Complex64::from_polar(1.0, g.im),
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            }
        };
        let pieces = |len: f64| ((4.0 * len) as usize).max(16);
        let mut total = 0.0;
        let legs: [(Complex64, Complex64); 4] = [
            (Complex64::new(right, lo), Complex64::new(right, height)),
            (Complex64::new(right, height), Complex64::new(left, height)),
            (Complex64::new(left, height), Complex64::new(left, lo)),
            (Complex64::new(left, lo), Complex64::new(right, lo)),
        ];
        for (p, q) in legs {
            let f = |x: f64| phasor(p + (q - p) * x);
            let (change, _) = track_phase(&f, 0.0, 1.0, pieces((q - p).norm()), height)?;
            total += change;
        }
        Ok(total / (2.0 * PI))
    }
}

/// `S(t, π)` for ζ or a primitive Dirichlet descriptor.
pub fn argument_s(d: &LFunctionDescriptor, t: f64) -> Result<ArgumentTrace> {
    Evaluator::new(d)?.argument_s(t)
}

/// Zero count inside a rectangle by the argument principle applied to `Λ`.
pub fn argument_principle_count(d: &LFunctionDescriptor, height: f64) -> Result<f64> {
    Evaluator::new(d)?.argument_principle_count(height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunc::{dirichlet_descriptor, zeta_descriptor, DirichletCharacter};
    use crate::specfun::riemann_siegel_theta;

    #[test]
    fn zeta_s_below_first_zero() {
        let ev = Evaluator::new(&zeta_descriptor()).unwrap();
        for t in [1.0, 5.0, 10.0, 14.0] {
            let s = ev.argument_s(t).unwrap().value;
            let expect = -riemann_siegel_theta(t) / PI - 1.0;
            assert!((s - expect).abs() < 1e-10, "t = {t}: {s} vs {expect}");
        }
        assert!((ev.argument_s(10.0).unwrap().value + 0.024).abs() < 0.01);
        assert!(ev.argument_s(0.0).unwrap().value.abs() < 1e-5);
    }

    #[test]
    fn zeta_s_is_odd() {
        let ev = Evaluator::new(&zeta_descriptor()).unwrap();
        for t in [3.3, 21.7, 48.0] {
            let a = ev.argument_s(t).unwrap().value;
            let b = ev.argument_s(-t).unwrap().value;
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_limit_at_first_zero() {
        let ev = Evaluator::new(&zeta_descriptor()).unwrap();
        let g1 = 14.134_725_141_734_693;
        let s = ev.argument_s(g1).unwrap().value;
        let smooth = -riemann_siegel_theta(g1) / PI - 1.0;
        assert!((s - (smooth + 0.5)).abs() < 1e-5, "{s}");
    }

    #[test]
    fn contour_counts() {
        let ev = Evaluator::new(&zeta_descriptor()).unwrap();
        assert!((ev.argument_principle_count(10.0).unwrap()).abs() < 1e-6);
        assert!((ev.argument_principle_count(26.0).unwrap() - 3.0).abs() < 1e-6);
        let d = dirichlet_descriptor(&DirichletCharacter::conrey(3, 2).unwrap()).unwrap();
        let n = Evaluator::new(&d).unwrap().argument_principle_count(9.0).unwrap();
        assert!((n - n.round()).abs() < 1e-6 && n > 0.5);
    }
}
