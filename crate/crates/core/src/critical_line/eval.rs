//! Euler-Maclaurin evaluation of ζ and Dirichlet L-functions and the Hardy
//! Z-function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lfunc::{CoefficientOracle, LFunctionDescriptor};
use crate::specfun::{BudgetSource, Budgeted, ErrorBudget};

/// `B_{2j}/(2j)!` for `j = 1..=9`; the last entry only feeds the error estimate.
const EM_COEFFS: [f64; 9] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
];
const EM_TERMS: usize = 8;

/// Leading summation length for `|s|`.
pub fn em_length(s: Complex64) -> u64 {
    (s.norm().ceil() as u64 + 10).max(20)
}

/// `(e^w − 1)/w`.
fn exprel(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Euler-Maclaurin approximation of `Σ_{k≥0} (x+k)^{-s}` with the size of
/// the first omitted correction. With `drop_pole` the integral term loses
/// its `1/(s−1)` part, which cancels in character sums.
fn em_tail(s: Complex64, x: f64, drop_pole: bool) -> (Complex64, f64) {
    let lx = x.ln();
    let xs = (-s * lx).exp();
    let integral = if drop_pole {
        -lx * exprel((1.0 - s) * lx)
    } else {
        xs * x / (s - 1.0)
    };
    let mut acc = integral + 0.5 * xs;
    // rising factorial s(s+1)...(s+2j-2) times x^{-s-2j+1}
    let mut poch = s;
    let mut xpow = xs / x;
    let inv_x2 = 1.0 / (x * x);
    for (j, c) in EM_COEFFS.iter().take(EM_TERMS).enumerate() {
        acc += poch * xpow * *c;
        let k = 2.0 * j as f64;
        poch *= (s + k + 1.0) * (s + k + 2.0);
        xpow *= inv_x2;
    }
    let err = (poch * xpow * EM_COEFFS[EM_TERMS]).norm();
    (acc, err)
}

/// Hurwitz zeta `ζ(s, a)` for `a > 0`, `s ≠ 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Budgeted<Complex64> {
    let n = em_length(s);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (-s * (k as f64 + a).ln()).exp();
    }
    let (tail, err) = em_tail(s, n as f64 + a, false);
    Budgeted {
        value: acc + tail,
        budget: ErrorBudget::new(err + 1e-15 * n as f64 * acc.norm(), 0.0, BudgetSource::SeriesTruncation),
    }
}

/// Riemann zeta function.
pub fn zeta(s: Complex64) -> Complex64 {
    hurwitz_zeta(s, 1.0).value
}

/// Evaluator for a fixed ζ or primitive Dirichlet descriptor.
#[derive(Debug, Clone)]
pub struct Evaluator {
    descriptor: LFunctionDescriptor,
    modulus: u64,
    /// `(a, χ(a))` over residues with `χ(a) ≠ 0`.
    classes: Vec<(u64, Complex64)>,
    /// `κ^{-1/2}`, principal root of `conj(κ)`.
    rotation: Complex64,
}

/// Tolerance for the imaginary residue of the rotated completed function.
pub const Z_RESIDUE_TOL: f64 = 1e-8;

impl Evaluator {
    pub fn new(d: &LFunctionDescriptor) -> Result<Self> {
        let kappa = d.require_root_number()?;
        let (modulus, classes) = match d.coefficient_oracle() {
            CoefficientOracle::Zeta => (1, vec![(1, Complex64::new(1.0, 0.0))]),
            CoefficientOracle::Dirichlet(chi) => {
                let q = chi.modulus();
                let classes = (1..=q)
                    .map(|a| (a, chi.value(a)))
                    .filter(|(_, v)| v.norm_sqr() > 0.0)
                    .collect();
                (q, classes)
            }
            _ => {
                return Err(Error::InvalidDescriptor(format!(
                    "{} has no evaluator",
                    d.name()
                )))
            }
        };
        Ok(Self {
            descriptor: d.clone(),
            modulus,
            classes,
            rotation: kappa.conj().sqrt(),
        })
    }

    pub fn descriptor(&self) -> &LFunctionDescriptor {
        &self.descriptor
    }

    /// `L(s)` with a truncation estimate.
    pub fn l_budgeted(&self, s: Complex64) -> Budgeted<Complex64> {
        let k = em_length(s);
        let q = self.modulus;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        if q == 1 {
            for n in 1..=k {
                let term = (-s * (n as f64).ln()).exp();
                mag += term.norm();
                acc += term;
            }
            let (tail, err) = em_tail(s, (k + 1) as f64, false);
            return Budgeted {
                value: acc + tail,
                budget: ErrorBudget::new(err + 1e-16 * mag, 0.0, BudgetSource::SeriesTruncation),
            };
        }
        let qf = q as f64;
        let q_s = (-s * qf.ln()).exp();
        let mut err = 0.0;
        for &(a, chi_a) in &self.classes {
            let mut class_sum = Complex64::new(0.0, 0.0);
            for j in 0..k {
                let n = (j * q + a) as f64;
                let term = (-s * n.ln()).exp();
                mag += term.norm();
                class_sum += term;
            }
            let (tail, e) = em_tail(s, k as f64 + a as f64 / qf, true);
            acc += chi_a * (class_sum + q_s * tail);
            err += e * q_s.norm();
        }
        Budgeted {
            value: acc,
            budget: ErrorBudget::new(err + 1e-16 * mag, 0.0, BudgetSource::SeriesTruncation),
        }
    }

    pub fn l_value(&self, s: Complex64) -> Complex64 {
        self.l_budgeted(s).value
    }

    /// `log L(s, π_∞)`.
    pub fn ln_gamma_factor(&self, s: Complex64) -> Result<Complex64> {
        self.descriptor.ln_gamma_factor(s)
    }

    /// `κ^{-1/2} e^{i arg L_∞(½+it)} L(½+it)` before discarding the
    /// imaginary part; equals `κ^{-1/2} Λ(½+it)/|L_∞(½+it)|`.
    pub fn hardy_z_complex(&self, t: f64) -> Complex64 {
        let s = Complex64::new(0.5, t);
        // Re(s + μ) > 0 on the critical line, so no pole
        let phase = self.ln_gamma_factor(s).expect("critical line avoids poles").im;
        self.rotation * Complex64::from_polar(1.0, phase) * self.l_value(s)
    }

    /// Real Hardy Z-function with the functional-equation residue check.
    pub fn hardy_z(&self, t: f64) -> Result<f64> {
        let z = self.hardy_z_complex(t);
        let residue = z.im.abs() / z.norm().max(f64::MIN_POSITIVE);
        if residue > Z_RESIDUE_TOL && z.im.abs() > 1e-12 {
            return Err(Error::Precision { t, residue });
        }
        Ok(z.re)
    }

    /// Hardy Z without the residue check (zero scanning).
    pub fn hardy_z_unchecked(&self, t: f64) -> f64 {
        self.hardy_z_complex(t).re
    }

    /// `(1/π) Im[log L_∞(½+it) − log L_∞(½−it)] + 2r`: the smooth part of
    /// the zero count over `[−t, t]`.
    pub fn smooth_count(&self, t: f64) -> f64 {
        let up = self.ln_gamma_factor(Complex64::new(0.5, t)).expect("no pole").im;
        let down = self.ln_gamma_factor(Complex64::new(0.5, -t)).expect("no pole").im;
        (up - down) / PI + 2.0 * self.descriptor.pole_order() as f64
    }
}

/// `L(s)` for ζ or a primitive Dirichlet descriptor.
pub fn l_value(d: &LFunctionDescriptor, s: Complex64) -> Result<Complex64> {
    Ok(Evaluator::new(d)?.l_value(s))
}

/// Hardy Z-function `κ^{-1/2}Λ(½+it)/|L_∞(½+it)|`.
pub fn hardy_z(d: &LFunctionDescriptor, t: f64) -> Result<f64> {
    Evaluator::new(d)?.hardy_z(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunc::{dirichlet_descriptor, zeta_descriptor, DirichletCharacter};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_special_values() {
        assert!((zeta(c(2.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(c(0.5, 0.0)).re + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((zeta(c(0.0, 0.0)).re + 0.5).abs() < 1e-14);
        assert!((zeta(c(-1.0, 0.0)).re + 1.0 / 12.0).abs() < 1e-13);
        // ζ(1/2 + 10i) = 1.5448952202967... − 0.1153364652...i
        let z = zeta(c(0.5, 10.0));
        assert!((z - c(1.544_895_220_296_752, -0.115_336_465_271_273_4)).norm() < 1e-12, "{z}");
    }

    #[test]
    fn hurwitz_against_direct_sum() {
        let s = c(3.0, 2.0);
        let a = 0.3;
        let direct: Complex64 = (0..200_000).map(|k| (-s * (k as f64 + a).ln()).exp()).sum::<Complex64>()
            + (-s * (200_000.0 + a).ln()).exp() * (200_000.0 + a) / (s - 1.0);
        assert!((hurwitz_zeta(s, a).value - direct).norm() < 1e-10);
    }

    #[test]
    fn dirichlet_against_series() {
        let chi = DirichletCharacter::conrey(5, 2).unwrap();
        let d = dirichlet_descriptor(&chi).unwrap();
        let ev = Evaluator::new(&d).unwrap();
        let s = c(2.5, 7.0);
        let direct: Complex64 = (1..400_000u64).map(|n| chi.value(n) * (-s * (n as f64).ln()).exp()).sum();
        assert!((ev.l_value(s) - direct).norm() < 1e-10);
        // L(1, χ_4) = π/4
        let d4 = dirichlet_descriptor(&DirichletCharacter::conrey(4, 3).unwrap()).unwrap();
        assert!((l_value(&d4, c(1.0, 0.0)).unwrap().re - PI / 4.0).abs() < 1e-13);
    }

    #[test]
    fn hardy_z_is_real_and_signed() {
        let z = Evaluator::new(&zeta_descriptor()).unwrap();
        assert!(z.hardy_z(14.0).unwrap() * z.hardy_z(14.2).unwrap() < 0.0);
        assert!((z.hardy_z(0.0).unwrap().abs() - 1.460_354_508_809_586_8).abs() < 1e-12);
        let d = dirichlet_descriptor(&DirichletCharacter::conrey(7, 3).unwrap()).unwrap();
        let ev = Evaluator::new(&d).unwrap();
        for t in [-13.1, -2.0, 0.5, 9.7, 30.0] {
            let w = ev.hardy_z_complex(t);
            assert!(w.im.abs() <= 1e-10 * w.norm().max(1e-3), "t = {t}: {w}");
            let l = ev.l_value(c(0.5, t)).norm();
            assert!((w.norm() - l).abs() < 1e-12 * (1.0 + l));
        }
    }

    #[test]
    fn smooth_count_for_zeta_is_theta() {
        let z = Evaluator::new(&zeta_descriptor()).unwrap();
        for t in [1.0, 14.0, 77.7] {
            let expect = 2.0 * crate::specfun::riemann_siegel_theta(t) / PI + 2.0;
            assert!((z.smooth_count(t) - expect).abs() < 1e-12);
        }
    }
}
