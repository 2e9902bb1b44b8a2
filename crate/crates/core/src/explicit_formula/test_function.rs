//! Admissible test functions: Gaussians, Selberg majorants/minorants, their
//! translates and real linear combinations.
//!
//! Every shape here is entire and real on the real axis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extremal::{
    quad_cutoff, selberg_r, selberg_r_complex, selberg_r_fourier, selberg_tail_mean,
    SelbergSystem,
};
use crate::quad::{breakpoints, integrate_split, integrate_to_infinity, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `e^{−π((u−c)/w)²}`.
    Gaussian { center: f64, width: f64 },
    /// `R±(u)` of a Selberg system.
    Selberg(SelbergSystem),
}

/// `|h(u)| ≤ amplitude·(1 + |u|)^{−(1+rate)}` on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate {
    pub amplitude: f64,
    pub rate: f64,
}

/// `Σ c_k · shape_k(u − s_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    terms: Vec<(f64, Shape, f64)>,
}

/// Gaussian half-width (in units of the width) beyond which it is zero in
/// double precision.
const GAUSS_REACH: f64 = 12.0;
const GAUSS_PANEL: f64 = 0.25;
/// Panel width for Selberg functions, in units of 1/Δ.
const SELBERG_PANEL: f64 = 0.5;

/// Gaussian test function centred at `center`.
pub fn gaussian_test(center: f64, width: f64) -> Result<TestFunction> {
    if !(width > 0.0 && width.is_finite() && center.is_finite()) {
        return Err(Error::Config(format!("Gaussian width must be positive, got {width}")));
    }
    Ok(TestFunction {
        terms: vec![(1.0, Shape::Gaussian { center, width }, 0.0)],
    })
}

/// `R±` of a Selberg system as a test function with band limit Δ.
pub fn selberg_test(sys: SelbergSystem) -> TestFunction {
    TestFunction {
        terms: vec![(1.0, Shape::Selberg(sys), 0.0)],
    }
}

/// Bound on `|R±(x)|` for `|x| > t + 1/Δ`:
/// `(1/(2π²Δ²))[(|x|+t)⁻² + (|x|−t)⁻²](1 + 1/(Δ(|x|−t)))`.
fn selberg_envelope(sys: &SelbergSystem, x: f64) -> f64 {
    let (t, d) = (sys.half_length, sys.type_param);
    let x = x.abs();
    if x <= t + 1.0 / d {
        return 2.0;
    }
    let (a, b) = (x + t, x - t);
    (1.0 / (a * a) + 1.0 / (b * b)) / (2.0 * PI * PI * d * d) * (1.0 + 1.0 / (d * b))
}

impl Shape {
    fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            Shape::Gaussian { center, width } => {
                let y = (z - center) / width;
                (-PI * y * y).exp()
            }
            Shape::Selberg(sys) => selberg_r_complex(&sys, z),
        }
    }

    fn eval_real(&self, u: f64) -> f64 {
        match *self {
            Shape::Gaussian { center, width } => {
                let y = (u - center) / width;
                (-PI * y * y).exp()
            }
            Shape::Selberg(sys) => selberg_r(&sys, u),
        }
    }

    fn fourier(&self, xi: f64) -> Complex64 {
        match *self {
            Shape::Gaussian { center, width } => {
                let mag = width * (-PI * width * width * xi * xi).exp();
                Complex64::from_polar(mag, -2.0 * PI * center * xi)
            }
            Shape::Selberg(sys) => Complex64::new(selberg_r_fourier(&sys, xi), 0.0),
        }
    }

    /// Upper bound of `|ĥ(ξ)|` for `|ξ| ≥ x`, decreasing in `x`.
    fn fourier_envelope(&self, x: f64) -> f64 {
        match *self {
            Shape::Gaussian { width, .. } => width * (-PI * width * width * x * x).exp(),
            Shape::Selberg(sys) => {
                if x.abs() >= sys.type_param {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `sup |shape(u)|` over `u ≥ from` (`dir = 1`) or `u ≤ −from` (`dir = −1`).
    fn tail_sup(&self, from: f64, dir: f64) -> f64 {
        match *self {
            Shape::Gaussian { center, width } => {
                let c = dir * center;
                if c >= from {
                    1.0
                } else {
                    let y = (from - c) / width;
                    (-PI * y * y).exp()
                }
            }
            Shape::Selberg(sys) => selberg_envelope(&sys, from),
        }
    }

    /// Radius beyond which the shape equals its far-field mean up to the
    /// stated error.
    fn far_radius(&self) -> f64 {
        match *self {
            Shape::Gaussian { center, width } => center.abs() + GAUSS_REACH * width,
            Shape::Selberg(sys) => quad_cutoff(&sys),
        }
    }

    fn far_mean(&self, u: f64) -> f64 {
        match *self {
            Shape::Gaussian { .. } => 0.0,
            Shape::Selberg(sys) => selberg_tail_mean(&sys, u),
        }
    }

    /// Error of replacing the shape by its mean beyond `r` (integrated
    /// against a weight bounded by 1).
    fn far_error(&self, r: f64) -> f64 {
        match *self {
            Shape::Gaussian { center, width } => {
                let y = (r - center.abs()) / width;
                width * (-PI * y * y).exp()
            }
            Shape::Selberg(sys) => {
                let (t, d) = (sys.half_length, sys.type_param);
                let b = r - t;
                // oscillation integrated by parts once, plus the quartic remainder
                2.0 * (1.0 / (2.0 * PI * PI * PI * d * d * d * b * b) + 1.0 / (PI * PI * d.powi(4) * b.powi(3)))
            }
        }
    }

    fn breakpoints(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        let (c, step, reach) = match *self {
            Shape::Gaussian { center, width } => (center, GAUSS_PANEL * width, GAUSS_REACH * width),
            Shape::Selberg(sys) => {
                out.push(sys.half_length);
                out.push(-sys.half_length);
                (0.0, SELBERG_PANEL / sys.type_param, quad_cutoff(&sys))
            }
        };
        let a = (c - reach).max(lo);
        let b = (c + reach).min(hi);
        if a < b {
            out.extend(breakpoints(a, b, step));
        }
    }

    fn amplitude(&self) -> f64 {
        match *self {
            Shape::Gaussian { width, .. } => {
                // max of (1+x)² e^{−πx²/w²}
                let x = 0.5 * (-1.0 + (1.0 + 4.0 * width * width / PI).sqrt());
                (1.0 + x).powi(2) * (-PI * x * x / (width * width)).exp()
            }
            Shape::Selberg(sys) => {
                let r = 20.0 * (sys.half_length + 1.0 / sys.type_param);
                let inner = (0..=4000)
                    .map(|i| {
                        let x = r * i as f64 / 4000.0;
                        (1.0 + x).powi(2) * selberg_envelope(&sys, x)
                    })
                    .fold(0.0, f64::max);
                // (1+x)² env(x) → 1/(π²Δ²) as x → ∞
                inner.max(1.0 / (PI * PI * sys.type_param * sys.type_param) * 1.1)
            }
        }
    }
}

impl TestFunction {
    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &TestFunction, b: f64) -> TestFunction {
        let mut terms: Vec<(f64, Shape, f64)> =
            self.terms.iter().map(|&(c, s, sh)| (a * c, s, sh)).collect();
        terms.extend(other.terms.iter().map(|&(c, s, sh)| (b * c, s, sh)));
        TestFunction { terms }
    }

    pub fn scaled(&self, a: f64) -> TestFunction {
        TestFunction {
            terms: self.terms.iter().map(|&(c, s, sh)| (a * c, s, sh)).collect(),
        }
    }

    /// `u ↦ h(u − shift)`.
    pub fn shifted(&self, shift: f64) -> TestFunction {
        TestFunction {
            terms: self.terms.iter().map(|&(c, s, sh)| (c, s, sh + shift)).collect(),
        }
    }

    pub fn terms(&self) -> &[(f64, Shape, f64)] {
        &self.terms
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|&(c, s, sh)| c * s.eval(z - sh)).sum()
    }

    /// `h(u)` for real `u` (real by construction).
    pub fn eval_real(&self, u: f64) -> f64 {
        self.terms.iter().map(|&(c, s, sh)| c * s.eval_real(u - sh)).sum()
    }

    /// `ĥ(ξ) = ∫ h(u) e^{−2πiuξ} du`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(c, s, sh)| c * s.fourier(xi) * Complex64::from_polar(1.0, -2.0 * PI * sh * xi))
            .sum()
    }

    /// Support bound of `ĥ` when every term is band-limited.
    pub fn band_limit(&self) -> Option<f64> {
        self.terms.iter().try_fold(0.0f64, |m, (_, s, _)| match s {
            Shape::Selberg(sys) => Some(m.max(sys.type_param)),
            Shape::Gaussian { .. } => None,
        })
    }

    /// Bound on `|ĥ(ξ)|` for `|ξ| ≥ x`.
    pub fn fourier_envelope(&self, x: f64) -> f64 {
        self.terms.iter().map(|(c, s, _)| c.abs() * s.fourier_envelope(x)).sum()
    }

    /// Half-width of the analyticity strip (all shapes are entire).
    pub fn strip_width(&self) -> f64 {
        f64::INFINITY
    }

    /// Decay with rate 1; shifting by `s` costs a factor `(1 + |s|)²`.
    pub fn decay(&self) -> DecayCertificate {
        let amplitude = self
            .terms
            .iter()
            .map(|(c, s, sh)| c.abs() * s.amplitude() * (1.0 + sh.abs()).powi(2))
            .sum();
        DecayCertificate {
            amplitude,
            rate: 1.0,
        }
    }

    /// `sup |h(u)|` over `u ≥ from` (`dir = 1`) or `u ≤ −from` (`dir = −1`).
    pub fn tail_sup(&self, from: f64, dir: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, s, sh)| c.abs() * s.tail_sup(from - dir * sh, dir))
            .sum()
    }

    /// `|u|` beyond which `h` is replaced by [`far_mean`](Self::far_mean).
    pub fn far_radius(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, s, sh)| s.far_radius() + sh.abs())
            .fold(0.0, f64::max)
    }

    pub fn far_mean(&self, u: f64) -> f64 {
        self.terms.iter().map(|&(c, s, sh)| c * s.far_mean(u - sh)).sum()
    }

    /// Error of the far-field replacement beyond `r`, per unit weight.
    pub fn far_error(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, s, sh)| c.abs() * s.far_error(r - sh.abs()))
            .sum()
    }

    /// Ascending breakpoints inside `[lo, hi]` resolving every term.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo, hi];
        for &(_, s, sh) in &self.terms {
            let mut local = Vec::new();
            s.breakpoints(lo - sh, hi - sh, &mut local);
            pts.extend(local.into_iter().map(|p| p + sh).filter(|p| *p > lo && *p < hi));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        pts
    }

    /// `∫ h(u) w(u) du` over `[lo, hi]` (either end may be infinite), with
    /// the far field replaced by its mean and `extra` added to the
    /// breakpoints. Returns value and error estimate.
    pub fn integrate_against<W: Fn(f64) -> f64>(
        &self,
        w: &W,
        lo: f64,
        hi: f64,
        abs_tol: f64,
        extra: &[f64],
    ) -> (f64, f64) {
        let r = self.far_radius();
        let cfg = QuadConfig {
            abs_tol,
            rel_tol: 1e-14,
            max_intervals: 4_000_000,
        };
        let mut value = 0.0;
        let mut error = 0.0;
        let (a, b) = (lo.max(-r), hi.min(r));
        if a < b {
            let mut pts = self.breakpoints(a, b);
            pts.extend(extra.iter().copied().filter(|p| *p > a && *p < b));
            pts.sort_by(f64::total_cmp);
            let q = integrate_split(|u| self.eval_real(u) * w(u), &pts, cfg);
            value += q.value;
            error += q.error;
        }
        let w_scale = |u: f64| w(u).abs().max(1.0);
        if hi > r {
            let from = lo.max(r);
            let q = integrate_to_infinity(|u| self.far_mean(u) * w(u), from, cfg);
            value += q.value;
            error += q.error + self.far_error(from) * w_scale(from) * (1.0 + from.ln().max(0.0));
        }
        if lo < -r {
            let from = (-hi).max(r);
            let q = integrate_to_infinity(|u| self.far_mean(-u) * w(-u), from, cfg);
            value += q.value;
            error += q.error + self.far_error(from) * w_scale(-from) * (1.0 + from.ln().max(0.0));
        }
        (value, error)
    }

    /// `max_k |∫ h(u) e^{−2πiuξ_k} du − ĥ(ξ_k)|` over `n` sample frequencies
    /// spread over the effective support of `ĥ`.
    pub fn fourier_consistency(&self, n: usize) -> f64 {
        let reach = self.band_limit().unwrap_or_else(|| {
            let w = self
                .terms
                .iter()
                .filter_map(|(_, s, _)| match s {
                    Shape::Gaussian { width, .. } => Some(*width),
                    _ => None,
                })
                .fold(f64::INFINITY, f64::min);
            2.0 / w
        });
        // beyond r the far-field mean is monotone, so its oscillatory
        // integral is at most 2|mean(r)|/(π|ξ|), far below the tolerance
        let r = self.far_radius();
        (0..n)
            .map(|k| {
                let xi = -1.1 * reach + 2.2 * reach * (k as f64 + 0.5) / n as f64;
                let (re, _) = self.integrate_against(&|u| (2.0 * PI * u * xi).cos(), -r, r, 1e-11, &[]);
                let (im, _) = self.integrate_against(&|u| -(2.0 * PI * u * xi).sin(), -r, r, 1e-11, &[]);
                (Complex64::new(re, im) - self.fourier(xi)).norm()
            })
            .fold(0.0, f64::max)
    }
}
