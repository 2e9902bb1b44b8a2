//! Beurling's signum majorant/minorant, Selberg's interval
//! majorant/minorant, the kernels F and G, and measurements of the
//! extremal-function properties (majorization, L1 defect, decay,
//! exponential type, Fourier support and Fourier deviation).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quad::{breakpoints, integrate_split, QuadConfig};
use crate::specfun::{trigamma, trigamma_real, BudgetSource, Budgeted, ErrorBudget};
use crate::{par, Error, Result};

/// Which side of the target function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Minorant,
    Majorant,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Minorant => -1.0,
            Side::Majorant => 1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Minorant => Side::Majorant,
            Side::Majorant => Side::Minorant,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Minorant => "minorant",
            Side::Majorant => "majorant",
        }
    }
}

/// sin(πx) with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    (PI * r).sin()
}

pub fn cos_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    (PI * r).cos()
}

/// (sin πx / πx)^2.
pub fn sinc2(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let y = PI * x;
        let y2 = y * y;
        1.0 - y2 / 3.0 + 2.0 * y2 * y2 / 45.0
    } else {
        let s = sin_pi(x) / (PI * x);
        s * s
    }
}

fn sinc2_complex(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let y2 = z * z * (PI * PI);
        1.0 - y2 / 3.0 + y2 * y2 * (2.0 / 45.0)
    } else {
        let s = (z * PI).sin() / (z * PI);
        s * s
    }
}

/// Odd part of Beurling's function, for y >= 0:
/// (sin πy/π)^2 {Σ_m sgn(m)/(y-m)^2 + 2/y}. The m-series is summed in
/// closed form, Σ_{m≠0} sgn(m)/(y-m)^2 = π^2/sin^2(πy) - 1/y^2 - 2ψ'(1+y).
fn beurling_odd_nonneg(y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let k = sinc2(y);
    let s = {
        let v = sin_pi(y) / PI;
        v * v
    };
    1.0 - k + 2.0 * y * k - 2.0 * s * trigamma_real(1.0 + y)
}

/// Beurling's H±(x): H⁻(x) <= sgn(x) <= H⁺(x), Fourier support in [-1, 1].
pub fn beurling_h(x: f64, side: Side) -> f64 {
    let odd = if x >= 0.0 {
        beurling_odd_nonneg(x)
    } else {
        -beurling_odd_nonneg(-x)
    };
    odd + side.sign() * sinc2(x)
}

/// H± at complex argument (entire extension).
pub fn beurling_h_complex(z: Complex64, side: Side) -> Complex64 {
    let odd = |w: Complex64| -> Complex64 {
        if w == Complex64::new(0.0, 0.0) {
            return w;
        }
        let k = sinc2_complex(w);
        let sv = (w * PI).sin() / PI;
        let psi1 = trigamma(1.0 + w).expect("1 + w is not a pole for Re w >= 0");
        1.0 - k + 2.0 * w * k - 2.0 * sv * sv * psi1
    };
    let o = if z.re >= 0.0 { odd(z) } else { -odd(-z) };
    o + side.sign() * sinc2_complex(z)
}

/// Closed-form Fourier transform of Beurling's H±; zero for
/// |ξ| >= 1. Undefined (distributional) at ξ = 0, where this returns the
/// finite part ±1.
pub fn beurling_h_fourier(xi: f64, side: Side) -> Complex64 {
    let a = xi.abs();
    if a >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let tri = 1.0 - a;
    if xi == 0.0 {
        return Complex64::new(side.sign(), 0.0);
    }
    let odd = odd_numerator(xi) / (PI * xi);
    Complex64::new(side.sign() * tri, -odd)
}

/// A(τ) = πτ(1-|τ|)cot(πτ) + |τ|, even, A(0) = 1, A(±1) = 0.
fn odd_numerator(tau: f64) -> f64 {
    let a = tau.abs();
    if a >= 1.0 {
        return 0.0;
    }
    if a < 1e-6 {
        let y = PI * a;
        return (1.0 - a) * (1.0 - y * y / 3.0) + a;
    }
    let y = PI * a;
    y * (1.0 - a) * y.cos() / y.sin() + a
}

/// Selberg's majorant/minorant system for χ_[-t, t] with type 2πΔ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelbergSystem {
    pub half_length: f64,
    pub type_param: f64,
    pub side: Side,
}

impl SelbergSystem {
    pub fn new(half_length: f64, type_param: f64, side: Side) -> Result<Self> {
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::Config(format!("half length must be positive, got {half_length}")));
        }
        if !(type_param > 0.0 && type_param.is_finite()) {
            return Err(Error::Config(format!("Δ must be positive, got {type_param}")));
        }
        Ok(Self {
            half_length,
            type_param,
            side,
        })
    }

    pub fn with_side(self, side: Side) -> Self {
        Self { side, ..self }
    }

    /// χ_[-t,t] normalized to 1/2 at the endpoints.
    pub fn indicator(&self, x: f64) -> f64 {
        let a = x.abs();
        if a < self.half_length {
            1.0
        } else if a == self.half_length {
            0.5
        } else {
            0.0
        }
    }
}

/// R±(x) = (H±(Δ(t+x)) + H±(Δ(t-x)))/2.
pub fn selberg_r(sys: &SelbergSystem, x: f64) -> f64 {
    let d = sys.type_param;
    let t = sys.half_length;
    0.5 * (beurling_h(d * (t + x), sys.side) + beurling_h(d * (t - x), sys.side))
}

pub fn selberg_r_complex(sys: &SelbergSystem, z: Complex64) -> Complex64 {
    let d = sys.type_param;
    let t = sys.half_length;
    0.5 * (beurling_h_complex(d * (t + z), sys.side) + beurling_h_complex(d * (t - z), sys.side))
}

/// Closed-form R̂±(ξ) = A(ξ/Δ) sin(2πtξ)/(πξ) ± (1 - |ξ|/Δ) cos(2πtξ)/Δ
/// for |ξ| < Δ, and 0 otherwise.
pub fn selberg_r_fourier(sys: &SelbergSystem, xi: f64) -> f64 {
    let d = sys.type_param;
    let t = sys.half_length;
    let tau = xi / d;
    if tau.abs() >= 1.0 {
        return 0.0;
    }
    let sin_part = if xi == 0.0 {
        2.0 * t
    } else {
        sin_pi(2.0 * t * xi) / (PI * xi)
    };
    odd_numerator(tau) * sin_part + sys.side.sign() * (1.0 - tau.abs()) * cos_pi(2.0 * t * xi) / d
}

/// Mean of R±(x) over an oscillation period for |x| well beyond t
/// (sin² replaced by 1/2):
/// ±(1/(4π²Δ²))[(x+t)⁻² + (x-t)⁻²] + (1/(12π²Δ³))[(x-t)⁻³ - (x+t)⁻³].
pub fn selberg_tail_mean(sys: &SelbergSystem, x: f64) -> f64 {
    let d = sys.type_param;
    let (a, b) = (x.abs() + sys.half_length, x.abs() - sys.half_length);
    let quad = (1.0 / (a * a) + 1.0 / (b * b)) / (4.0 * PI * PI * d * d);
    let cubic = (1.0 / (b * b * b) - 1.0 / (a * a * a)) / (12.0 * PI * PI * d * d * d);
    sys.side.sign() * quad + cubic
}

/// ∫ over |x| > cutoff of [`selberg_tail_mean`].
pub fn tail_mass_model(sys: &SelbergSystem, cutoff: f64) -> f64 {
    let d = sys.type_param;
    let t = sys.half_length;
    let (a, b) = (cutoff + t, cutoff - t);
    let quad = (1.0 / a + 1.0 / b) / (4.0 * PI * PI * d * d);
    let cubic = (1.0 / (b * b) - 1.0 / (a * a)) / (24.0 * PI * PI * d * d * d);
    2.0 * (sys.side.sign() * quad + cubic)
}

/// Height beyond which the averaged tail model replaces quadrature.
pub fn quad_cutoff(sys: &SelbergSystem) -> f64 {
    sys.half_length + 4000.0 / sys.type_param
}

/// Bound on the part of the tail the averaged model misses.
pub fn tail_model_error(sys: &SelbergSystem, cutoff: f64) -> f64 {
    let d = sys.type_param;
    let b = cutoff - sys.half_length;
    2.0 / (PI * PI * PI * d * d * d * b * b) + 1.0 / (PI * PI * d.powi(4) * b.powi(3))
}

/// Quadrature of ∫ R±(x) e^{-2πixξ} dx (R even, so a cosine transform),
/// with a tail correction at ξ = 0. This is the independent check on
/// [`selberg_r_fourier`].
pub fn selberg_r_fourier_quadrature(sys: &SelbergSystem, xi: f64) -> Budgeted<f64> {
    let l = quad_cutoff(sys);
    let width = 0.5 / sys.type_param.max(xi.abs()).max(0.5);
    let mut pts = breakpoints(0.0, l, width);
    pts.push(sys.half_length);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let cfg = QuadConfig {
        abs_tol: 1e-11,
        rel_tol: 1e-14,
        max_intervals: 2_000_000,
    };
    let r = integrate_split(|x| selberg_r(sys, x) * cos_pi(2.0 * xi * x), &pts, cfg);
    let mut value = 2.0 * r.value;
    let tail_err = tail_model_error(sys, l);
    let mut err = 2.0 * r.error + tail_err;
    if xi == 0.0 {
        value += tail_mass_model(sys, l);
    } else {
        // non-oscillatory part of the tail, integrated by parts once
        err += tail_mass_model(sys, l).abs() / (PI * xi.abs() * (l - sys.half_length)).max(1.0);
    }
    Budgeted {
        value,
        budget: ErrorBudget::absolute(err, BudgetSource::Quadrature),
    }
}

/// ∫ |R± - χ_[-t,t]| dx by quadrature with the averaged-tail correction.
pub fn l1_defect(sys: &SelbergSystem) -> Budgeted<f64> {
    let t = sys.half_length;
    let l = quad_cutoff(sys);
    let width = 0.5 / sys.type_param;
    let sign = sys.side.sign();
    let mut pts = breakpoints(0.0, t, width);
    pts.extend(breakpoints(t, l, width).into_iter().skip(1));
    let cfg = QuadConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-14,
        max_intervals: 2_000_000,
    };
    // sign * (R - χ) >= 0 by majorization
    let r = integrate_split(
        |x| {
            let chi = if x < t { 1.0 } else { 0.0 };
            sign * (selberg_r(sys, x) - chi)
        },
        &pts,
        cfg,
    );
    Budgeted {
        value: 2.0 * r.value + sign * tail_mass_model(sys, l),
        budget: ErrorBudget::absolute(2.0 * r.error + tail_model_error(sys, l), BudgetSource::Quadrature),
    }
}

/// Weyl-sequence sample points in [-extent, extent], plus points straddling
/// ±t and the integer lattice of Δ(t ± x).
pub fn sample_points(sys: &SelbergSystem, n: usize) -> Vec<f64> {
    let t = sys.half_length;
    let extent = 2.0 * t + 20.0 / sys.type_param + 5.0;
    let alpha = 0.618_033_988_749_894_8_f64;
    let mut pts: Vec<f64> = (0..n)
        .map(|i| {
            let u = (0.5 + alpha * i as f64).fract();
            -extent + 2.0 * extent * u
        })
        .collect();
    for k in -40i32..=40 {
        let off = k as f64 / (4.0 * sys.type_param);
        for e in [-1e-9, 0.0, 1e-9] {
            pts.push(t + off + e);
            pts.push(-t + off + e);
        }
    }
    pts
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationReport {
    pub samples: usize,
    pub violations: usize,
    /// Largest amount by which the inequality fails (0 if none).
    pub worst: f64,
}

/// Checks side·(R± - χ) >= -slack at quasi-random points.
pub fn check_majorization(sys: &SelbergSystem, n: usize, slack: f64) -> MajorizationReport {
    let pts = sample_points(sys, n);
    let gaps = par::map(&pts, |&x| sys.side.sign() * (selberg_r(sys, x) - sys.indicator(x)));
    let worst = gaps.iter().fold(0.0f64, |w, &g| w.max(-g));
    MajorizationReport {
        samples: pts.len(),
        violations: gaps.iter().filter(|&&g| g < -slack).count(),
        worst,
    }
}

/// max over sampled |x| > t of |R±(x)| / min(1, Δ^{-2}(|x|-t)^{-2}).
pub fn decay_constant(sys: &SelbergSystem, n: usize) -> f64 {
    let t = sys.half_length;
    let d = sys.type_param;
    let pts: Vec<f64> = (1..=n)
        .map(|i| t + 1e-3 + (i as f64 / n as f64).powi(2) * (200.0 / d + 5.0 * t))
        .collect();
    par::map(&pts, |&x| {
        let env = (1.0f64).min(1.0 / (d * d * (x - t) * (x - t)));
        selberg_r(sys, x).abs() / env
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// max over y in [0, 3] of |R±(iy)| e^{-2πΔ|y|}.
pub fn exponential_type_constant(sys: &SelbergSystem, n: usize) -> f64 {
    let ys: Vec<f64> = (0..=n).map(|i| 3.0 * i as f64 / n as f64).collect();
    par::map(&ys, |&y| {
        selberg_r_complex(sys, Complex64::new(0.0, y)).norm() * (-2.0 * PI * sys.type_param * y).exp()
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// max over a grid of |ξ| <= Δ of Δ·|R̂±(ξ) - sin(2πtξ)/(πξ)|.
pub fn fourier_deviation_constant(sys: &SelbergSystem, n: usize) -> f64 {
    let d = sys.type_param;
    let t = sys.half_length;
    (0..=n)
        .map(|i| {
            let xi = -d + 2.0 * d * i as f64 / n as f64;
            let main = if xi == 0.0 {
                2.0 * t
            } else {
                sin_pi(2.0 * t * xi) / (PI * xi)
            };
            d * (selberg_r_fourier(sys, xi) - main).abs()
        })
        .fold(0.0, f64::max)
}

/// One measured property of a Selberg system.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyRow {
    pub property: &'static str,
    pub t: f64,
    pub delta: f64,
    pub side: Side,
    pub value: f64,
    pub pass: bool,
}

/// Relative tolerance on `Δ·∫|R± − χ| = 1` and on its spread across `t`.
pub const L1_REL_TOL: f64 = 1e-4;
/// Frequencies beyond `Δ` (in units of `Δ`) where the quadrature transform
/// must vanish.
const SUPPORT_PROBES: [f64; 3] = [1.05, 1.5, 2.5];
/// Frequencies inside `(−Δ, Δ)` where closed form and quadrature must agree.
const INTERIOR_PROBES: [f64; 4] = [0.0, 0.3, -0.55, 0.9];
const FOURIER_TOL: f64 = 1e-6;

/// Properties (i)-(vi) of the majorant/minorant pair over a grid of
/// `(t, Δ)`: majorization at `samples` points, the L¹ distance `1/Δ` and
/// its independence of `t`, exponential type, decay, Fourier support and
/// closed form, and the Fourier deviation constant.
pub fn property_suite(t_values: &[f64], delta_values: &[f64], samples: usize) -> Result<Vec<PropertyRow>> {
    let mut rows = Vec::new();
    for &delta in delta_values {
        for side in [Side::Majorant, Side::Minorant] {
            let mut scaled = Vec::new();
            for &t in t_values {
                let sys = SelbergSystem::new(t, delta, side)?;
                let push = |rows: &mut Vec<PropertyRow>, property, value: f64, pass| {
                    rows.push(PropertyRow {
                        property,
                        t,
                        delta,
                        side,
                        value,
                        pass,
                    })
                };
                let m = check_majorization(&sys, samples, 0.0);
                push(&mut rows, "majorization", m.violations as f64, m.violations == 0);
                let l1 = l1_defect(&sys);
                let rel = (l1.value * delta - 1.0).abs();
                push(&mut rows, "l1_distance", l1.value, rel <= L1_REL_TOL);
                scaled.push(l1.value * delta);
                let e = exponential_type_constant(&sys, 300);
                push(&mut rows, "exponential_type", e, e.is_finite());
                let c = decay_constant(&sys, 4000);
                push(&mut rows, "decay", c, c.is_finite());
                let support = SUPPORT_PROBES
                    .iter()
                    .map(|k| {
                        let q = selberg_r_fourier_quadrature(&sys, k * delta);
                        (q.value.abs() - q.budget.absolute).max(0.0)
                    })
                    .fold(0.0, f64::max);
                let exact = SUPPORT_PROBES.iter().all(|k| selberg_r_fourier(&sys, k * delta) == 0.0)
                    && selberg_r_fourier(&sys, delta) == 0.0;
                push(&mut rows, "fourier_support", support, exact && support <= FOURIER_TOL);
                let closed = INTERIOR_PROBES
                    .iter()
                    .map(|k| {
                        let xi = k * delta;
                        (selberg_r_fourier_quadrature(&sys, xi).value - selberg_r_fourier(&sys, xi)).abs()
                    })
                    .fold(0.0, f64::max);
                push(&mut rows, "fourier_closed_form", closed, closed <= FOURIER_TOL);
                let dev = fourier_deviation_constant(&sys, 2000);
                push(&mut rows, "fourier_deviation", dev, dev.is_finite());
            }
            let spread = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - scaled.iter().copied().fold(f64::INFINITY, f64::min);
            rows.push(PropertyRow {
                property: "l1_t_independence",
                t: f64::NAN,
                delta,
                side,
                value: spread,
                pass: spread < L1_REL_TOL,
            });
        }
    }
    Ok(rows)
}

/// The two zero-sum kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// F(x) = arctan(1/x) - x/(1+x^2)
    F,
    /// G(x) = arctan(2/x) - 2x/(4+x^2) = F(x/2)
    G,
}

/// Kernel value; at x = 0 the symmetric limit 0 is used.
pub fn kernel_eval(k: Kernel, x: f64) -> f64 {
    match k {
        Kernel::F => kernel_f(x),
        Kernel::G => kernel_f(0.5 * x),
    }
}

fn kernel_f(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x.abs() > 1e3 {
        // 2/(3x^3) - 4/(5x^5) + 6/(7x^7)
        let i2 = 1.0 / (x * x);
        return (2.0 / 3.0 - i2 * (4.0 / 5.0 - i2 * 6.0 / 7.0)) * i2 / x;
    }
    (1.0 / x).atan() - x / (1.0 + x * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beurling_at_integers() {
        assert_eq!(beurling_h(0.0, Side::Majorant), 1.0);
        assert_eq!(beurling_h(0.0, Side::Minorant), -1.0);
        for n in [-5i32, -1, 1, 2, 30] {
            for side in [Side::Minorant, Side::Majorant] {
                let v = beurling_h(n as f64, side);
                assert!((v - (n.signum() as f64)).abs() < 1e-13, "n={n} {side:?} {v}");
            }
        }
    }

    #[test]
    fn beurling_matches_direct_series() {
        for &x in &[0.3, 1.7, -2.25, 12.6] {
            let m = 200_000i64;
            let s: f64 = (-m..=m)
                .filter(|&k| k != 0)
                .map(|k| (k.signum() as f64) / ((x - k as f64) * (x - k as f64)))
                .sum();
            let pref = (sin_pi(x) / PI).powi(2);
            let direct = pref * (s + 2.0 / x) + sinc2(x);
            // truncation error of the signed sum is O(x/m^2)
            assert!((direct - beurling_h(x, Side::Majorant)).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn complex_agrees_with_real() {
        for &x in &[0.0, 0.4, -3.3, 25.1] {
            for side in [Side::Minorant, Side::Majorant] {
                let c = beurling_h_complex(Complex64::new(x, 0.0), side);
                assert!((c.re - beurling_h(x, side)).abs() < 1e-12 && c.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_support() {
        let sys = SelbergSystem::new(1.0, 2.0, Side::Majorant).unwrap();
        assert_eq!(selberg_r_fourier(&sys, 2.1), 0.0);
        assert_eq!(selberg_r_fourier(&sys, -2.0), 0.0);
        assert!((selberg_r_fourier(&sys, 0.0) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn kernels() {
        assert!((kernel_eval(Kernel::F, 1.0) - (PI / 4.0 - 0.5)).abs() < 1e-15);
        assert!((kernel_eval(Kernel::G, 2.0) - (PI / 4.0 - 0.5)).abs() < 1e-15);
        assert_eq!(kernel_eval(Kernel::F, 0.0), 0.0);
        let x = 1e3;
        assert!((x * x * x * kernel_eval(Kernel::F, x) - 2.0 / 3.0).abs() < 1e-3);
        assert!((kernel_eval(Kernel::F, -0.7) + kernel_eval(Kernel::F, 0.7)).abs() < 1e-15);
    }

    #[test]
    fn suite_small_grid() {
        let rows = property_suite(&[1.0, 10.0], &[2.0], 2000).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        assert_eq!(rows.len(), 2 * (2 * 7 + 1));
        assert!(property_suite(&[1.0], &[0.0], 10).is_err());
    }

    #[test]
    fn invalid_system() {
        assert!(SelbergSystem::new(1.0, 0.0, Side::Majorant).is_err());
        assert!(SelbergSystem::new(-1.0, 1.0, Side::Majorant).is_err());
    }
}
