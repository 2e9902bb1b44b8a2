//! Property tests over the public API.

use num_complex::Complex64;
use proptest::prelude::*;

use zeta_extremal::cli::RunConfig;
use zeta_extremal::critical_line::{parse_zero_table, Evaluator};
use zeta_extremal::extremal::{beurling_h, selberg_r, selberg_r_fourier, SelbergSystem, Side};
use zeta_extremal::lfunc::{dirichlet_descriptor, DirichletCharacter, LFunctionDescriptor};
use zeta_extremal::specfun::{digamma, ln_gamma, ln_gamma_r, mangoldt_sieve};
use zeta_extremal::table::num;

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn beurling_brackets_sign(x in -50.0f64..50.0) {
        prop_assert!(beurling_h(x, Side::Minorant) <= sign(x) + 1e-12);
        prop_assert!(beurling_h(x, Side::Majorant) >= sign(x) - 1e-12);
    }

    #[test]
    fn selberg_brackets_indicator(t in 0.5f64..100.0, delta in 0.5f64..8.0, u in -3.0f64..3.0) {
        let plus = SelbergSystem::new(t, delta, Side::Majorant).unwrap();
        let minus = plus.with_side(Side::Minorant);
        let x = u * t;
        let chi = plus.indicator(x);
        prop_assert!(selberg_r(&minus, x) <= chi + 1e-12);
        prop_assert!(selberg_r(&plus, x) >= chi - 1e-12);
    }

    #[test]
    fn selberg_fourier_support(t in 0.5f64..100.0, delta in 0.5f64..8.0, k in 1.0f64..5.0, major in any::<bool>()) {
        let side = if major { Side::Majorant } else { Side::Minorant };
        let sys = SelbergSystem::new(t, delta, side).unwrap();
        prop_assert_eq!(selberg_r_fourier(&sys, k * delta), 0.0);
        prop_assert_eq!(selberg_r_fourier(&sys, -k * delta), 0.0);
    }

    #[test]
    fn ln_gamma_recurrence(re in 0.1f64..30.0, im in -40.0f64..40.0) {
        let z = Complex64::new(re, im);
        let lhs = ln_gamma(z + 1.0).unwrap();
        let rhs = ln_gamma(z).unwrap() + z.ln();
        let d = lhs - rhs;
        let k = (d.im / (2.0 * std::f64::consts::PI)).round();
        prop_assert!(d.re.abs() < 1e-11 * (1.0 + lhs.norm()));
        prop_assert!((d.im - 2.0 * std::f64::consts::PI * k).abs() < 1e-11 * (1.0 + lhs.norm()));
    }

    #[test]
    fn digamma_recurrence(re in 0.1f64..30.0, im in -40.0f64..40.0) {
        let z = Complex64::new(re, im);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - 1.0 / z;
        prop_assert!(d.norm() < 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn mangoldt_matches_trial_division(n in 2u64..200_000) {
        let table = mangoldt_sieve(200_000).unwrap();
        let mut m = n;
        let mut p = 2;
        while p * p <= m && m % p != 0 {
            p += 1;
        }
        if m % p != 0 {
            p = m;
        }
        while m % p == 0 {
            m /= p;
        }
        let expected = if m == 1 { (p as f64).ln() } else { 0.0 };
        prop_assert_eq!(table.lambda(n), expected);
    }

    #[test]
    fn zero_table_roundtrip(mut xs in prop::collection::vec(0.1f64..1e4, 1..40)) {
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let text: String = xs.iter().map(|x| format!("{}\n", num(*x))).collect();
        let (parsed, precision) = parse_zero_table(&text).unwrap();
        prop_assert_eq!(parsed.len(), xs.len());
        for (a, b) in parsed.iter().zip(&xs) {
            prop_assert!((a - b).abs() <= precision * b.abs().max(1.0) * 10.0);
        }
    }

    #[test]
    fn zero_table_rejects_descent(a in 1.0f64..100.0, b in 0.0f64..1.0) {
        let text = format!("{a}\n{}\n", a - b);
        prop_assert!(parse_zero_table(&text).is_err());
    }

    #[test]
    fn config_last_assignment_wins(v1 in -1e6f64..1e6, v2 in -1e6f64..1e6) {
        let cfg = RunConfig::parse(&format!("# header\nx = {v1}\nx = {v2} # trailing\n")).unwrap();
        prop_assert_eq!(cfg.f64_or("x", 0.0).unwrap(), v2);
    }

    #[test]
    fn csv_numbers_roundtrip(x in prop::num::f64::NORMAL) {
        let y: f64 = num(x).parse().unwrap();
        prop_assert!((x - y).abs() <= 1e-14 * x.abs());
    }
}

fn complex_descriptor() -> LFunctionDescriptor {
    dirichlet_descriptor(&DirichletCharacter::conrey(5, 2).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `|q^{s/2} Γ_R(s + 1) L(s, χ)| = |q^{(1−s)/2} Γ_R(2 − s) L(1 − s, χ̄)|`
    /// for the odd character mod 5 with Conrey label 2.
    #[test]
    fn functional_equation_off_line(sigma in 0.05f64..0.45, t in 1.0f64..60.0) {
        let d = complex_descriptor();
        let ev = Evaluator::new(&d).unwrap();
        let dual = Evaluator::new(&d.dual()).unwrap();
        let s = Complex64::new(sigma, t);
        let one = Complex64::new(1.0, 0.0);
        let lam = |e: &Evaluator, z: Complex64| {
            (z * 0.5 * 5f64.ln() + ln_gamma_r(z + one).unwrap()).exp() * e.l_value(z)
        };
        let a = lam(&ev, s).norm();
        let b = lam(&dual, one - s).norm();
        prop_assert!((a - b).abs() < 1e-8 * (a + b), "{a} vs {b}");
    }
}
