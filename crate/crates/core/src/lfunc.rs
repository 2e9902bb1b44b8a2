//! L-function descriptors.
//!
//! A descriptor carries the data of a completed L-function
//! `Λ(s) = N^{s/2} ∏ Γ_R(s + μ_j) L(s)`: degree, conductor, spectral
//! parameters, pole order, the coefficient-growth exponent ϑ, the root
//! number and a coefficient oracle `n ↦ Λ_π(n)` on prime powers.
//!
//! Two families are numerically evaluable: the Riemann zeta function and
//! L-functions of primitive Dirichlet characters. Other descriptors can be
//! built from raw data for envelope arithmetic.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::specfun::{gamma_r_logderiv, ln_gamma_r};

/// Largest modulus for which a character table is built.
pub const MAX_MODULUS: u64 = 1_000_000;

const ROOT_NUMBER_TOL: f64 = 1e-12;

/// Prime factorization by trial division, `(p, e)` ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Smallest generator of `(ℤ/p^e ℤ)*` for an odd prime `p`.
fn primitive_root(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let factors = factorize(phi_p);
    let is_root_mod_p = |g: u64| factors.iter().all(|&(f, _)| pow_mod(g, phi_p / f, p) != 1);
    let mut g = 2;
    loop {
        if is_root_mod_p(g) && (e == 1 || pow_mod(g, phi_p, p * p) != 1) {
            return g;
        }
        g += 1;
    }
}

/// Discrete logarithm table on `ℤ/p^e ℤ` for odd `p` (`u32::MAX` off units).
fn discrete_logs(p: u64, e: u32) -> Vec<u32> {
    let pe = p.pow(e);
    let phi = pe / p * (p - 1);
    let g = primitive_root(p, e);
    let mut logs = vec![u32::MAX; pe as usize];
    let mut x = 1u64;
    for k in 0..phi {
        logs[x as usize] = k as u32;
        x = x * g % pe;
    }
    logs
}

/// Decomposition `n ≡ ε·5^b (mod 2^e)` with `ε = ±1`, returned as `(ε < 0, b)`.
fn two_adic_logs(e: u32) -> Vec<Option<(bool, u64)>> {
    let m = 1u64 << e;
    let mut out = vec![None; m as usize];
    let order = if e >= 2 { m >> 2 } else { 1 };
    let mut x = 1u64;
    for b in 0..order {
        out[x as usize] = Some((false, b));
        out[((m - x) % m) as usize].get_or_insert((true, b));
        x = x * 5 % m;
    }
    out
}

/// A Dirichlet character in Conrey labelling, stored as a full value table.
#[derive(Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    label: u64,
    values: Arc<Vec<Complex64>>,
    parity: u8,
    primitive: bool,
    real: bool,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus)
            .field("label", &self.label)
            .field("parity", &self.parity)
            .field("primitive", &self.primitive)
            .field("real", &self.real)
            .finish()
    }
}

impl DirichletCharacter {
    /// The character `χ_q(label, ·)`.
    pub fn conrey(modulus: u64, label: u64) -> Result<Self> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::InvalidDescriptor(format!(
                "modulus {modulus} outside [1, {MAX_MODULUS}]"
            )));
        }
        let label = label % modulus;
        if gcd(label, modulus) != 1 && modulus > 1 {
            return Err(Error::InvalidDescriptor(format!(
                "label {label} not coprime to {modulus}"
            )));
        }
        let q = modulus as usize;
        // phases in turns, accumulated per prime-power component
        let mut phase = vec![0.0f64; q];
        let mut unit = vec![modulus == 1; q];
        if modulus == 1 {
            unit[0] = true;
        } else {
            for (n, u) in unit.iter_mut().enumerate() {
                *u = gcd(n as u64, modulus) == 1;
            }
        }
        for (p, e) in factorize(modulus) {
            let pe = p.pow(e);
            let lm = label % pe;
            if p == 2 {
                let logs = two_adic_logs(e);
                let (em, bm) = logs[lm as usize].expect("unit label");
                let order = if e >= 2 { (pe >> 2) as f64 } else { 1.0 };
                for (n, ph) in phase.iter_mut().enumerate() {
                    if let Some((en, bn)) = logs[n % pe as usize] {
                        let mut turns = (bm * bn) as f64 / order;
                        if em && en {
                            turns += 0.5;
                        }
                        *ph += turns;
                    }
                }
            } else {
                let logs = discrete_logs(p, e);
                let phi = (pe / p * (p - 1)) as f64;
                let am = logs[lm as usize] as u64;
                for (n, ph) in phase.iter_mut().enumerate() {
                    let an = logs[n % pe as usize];
                    if an != u32::MAX {
                        *ph += ((am * an as u64) as f64 / phi).fract();
                    }
                }
            }
        }
        let values: Vec<Complex64> = phase
            .iter()
            .zip(&unit)
            .map(|(&ph, &u)| {
                if !u {
                    return Complex64::new(0.0, 0.0);
                }
                let ph = ph.fract();
                // exact values at quarter turns keep real characters real
                let quarter = ph * 4.0;
                if (quarter - quarter.round()).abs() < 1e-12 {
                    match (quarter.round() as i64).rem_euclid(4) {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    }
                } else {
                    Complex64::from_polar(1.0, 2.0 * PI * ph)
                }
            })
            .collect();
        let minus_one = values[(modulus - 1) as usize % q];
        let parity = if modulus > 2 && minus_one.re < 0.0 { 1 } else { 0 };
        let real = values.iter().all(|v| v.im == 0.0);
        let primitive = is_primitive(modulus, &values);
        Ok(Self {
            modulus,
            label,
            values: Arc::new(values),
            parity,
            primitive,
            real,
        })
    }

    /// A fixed primitive character mod `q`: label 2 when it is primitive,
    /// otherwise the smallest primitive label (`q = 4` gives label 3).
    pub fn default_primitive(modulus: u64) -> Result<Self> {
        for label in 2..modulus.max(2) {
            if gcd(label, modulus) != 1 {
                continue;
            }
            let chi = Self::conrey(modulus, label)?;
            if chi.primitive {
                return Ok(chi);
            }
        }
        Err(Error::NonPrimitive(format!(
            "no primitive character modulo {modulus}"
        )))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Complex conjugate character, `χ_q(label⁻¹, ·)`.
    pub fn conjugate(&self) -> Self {
        if self.real {
            return self.clone();
        }
        let inv = (1..self.modulus)
            .find(|&x| self.label * x % self.modulus == 1)
            .expect("unit label");
        Self {
            modulus: self.modulus,
            label: inv,
            values: Arc::new(self.values.iter().map(|v| v.conj()).collect()),
            parity: self.parity,
            primitive: self.primitive,
            real: false,
        }
    }

    /// `τ(χ) = Σ χ(n) e^{2πin/q}`.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus as f64;
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm_sqr() > 0.0)
            .map(|(n, v)| v * Complex64::from_polar(1.0, 2.0 * PI * n as f64 / q))
            .sum()
    }
}

/// Not induced from any modulus `q/p`, `p | q`.
fn is_primitive(modulus: u64, values: &[Complex64]) -> bool {
    if modulus == 1 {
        return true;
    }
    factorize(modulus).iter().all(|&(p, _)| {
        let d = modulus / p;
        (0..modulus / d).any(|k| {
            let n = 1 + k * d;
            gcd(n, modulus) == 1 && (values[(n % modulus) as usize] - 1.0).norm() > 1e-9
        })
    })
}

/// Source of the coefficients `Λ_π(n)` on prime powers.
#[derive(Clone)]
pub enum CoefficientOracle {
    /// `Λ(n)`.
    Zeta,
    /// `χ(n)Λ(n)`.
    Dirichlet(DirichletCharacter),
    /// A pure function of `(n, p)` for `n = p^k`.
    Custom(Arc<dyn Fn(u64, u64) -> Complex64 + Send + Sync>),
    /// No coefficient data.
    Unavailable,
}

impl fmt::Debug for CoefficientOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zeta => write!(f, "Zeta"),
            Self::Dirichlet(chi) => write!(f, "Dirichlet({}, {})", chi.modulus, chi.label),
            Self::Custom(_) => write!(f, "Custom"),
            Self::Unavailable => write!(f, "Unavailable"),
        }
    }
}

/// `C(π)` and its height dependence `C(t, π) = C(π)(|t| + 1)^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticConductor {
    pub base: f64,
    pub degree: u32,
}

impl AnalyticConductor {
    pub fn at_height(&self, t: f64) -> f64 {
        self.base * (t.abs() + 1.0).powi(self.degree as i32)
    }
}

#[derive(Debug, Clone)]
pub struct LFunctionDescriptor {
    degree: u32,
    conductor: u64,
    spectral_params: Vec<Complex64>,
    pole_order: u32,
    theta: f64,
    root_number: Option<Complex64>,
    self_dual: bool,
    coefficients: CoefficientOracle,
}

/// Raw data for [`LFunctionDescriptor::from_parts`].
#[derive(Debug, Clone)]
pub struct DescriptorParts {
    pub degree: u32,
    pub conductor: u64,
    pub spectral_params: Vec<Complex64>,
    pub pole_order: u32,
    pub theta: f64,
    pub root_number: Option<Complex64>,
    pub self_dual: bool,
}

impl LFunctionDescriptor {
    /// Validates the axioms and attaches a coefficient oracle.
    pub fn from_parts(parts: DescriptorParts, coefficients: CoefficientOracle) -> Result<Self> {
        let DescriptorParts {
            degree,
            conductor,
            spectral_params,
            pole_order,
            theta,
            root_number,
            self_dual,
        } = parts;
        let bad = |msg: String| Err(Error::InvalidDescriptor(msg));
        if degree == 0 {
            return bad("degree must be at least 1".into());
        }
        if conductor == 0 {
            return bad("conductor must be at least 1".into());
        }
        if spectral_params.len() != degree as usize {
            return bad(format!(
                "{} spectral parameters for degree {degree}",
                spectral_params.len()
            ));
        }
        if pole_order > degree {
            return bad(format!("pole order {pole_order} exceeds degree {degree}"));
        }
        if !(0.0..=1.0).contains(&theta) {
            return bad(format!("theta {theta} outside [0, 1]"));
        }
        for (j, mu) in spectral_params.iter().enumerate() {
            if !(mu.re > -1.0) || !mu.im.is_finite() {
                return bad(format!("spectral parameter {j} has Re mu <= -1"));
            }
        }
        if !conjugation_closed(&spectral_params) {
            return bad("spectral parameters are not closed under conjugation".into());
        }
        if let Some(k) = root_number {
            if (k.norm() - 1.0).abs() > ROOT_NUMBER_TOL {
                return bad(format!("root number has modulus {}", k.norm()));
            }
        }
        Ok(Self {
            degree,
            conductor,
            spectral_params,
            pole_order,
            theta,
            root_number,
            self_dual,
            coefficients,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn spectral_params(&self) -> &[Complex64] {
        &self.spectral_params
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn root_number(&self) -> Option<Complex64> {
        self.root_number
    }

    pub fn require_root_number(&self) -> Result<Complex64> {
        self.root_number.ok_or(Error::UnknownRootNumber)
    }

    pub fn is_self_dual(&self) -> bool {
        self.self_dual
    }

    pub fn coefficient_oracle(&self) -> &CoefficientOracle {
        &self.coefficients
    }

    pub fn character(&self) -> Option<&DirichletCharacter> {
        match &self.coefficients {
            CoefficientOracle::Dirichlet(chi) => Some(chi),
            _ => None,
        }
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self.coefficients, CoefficientOracle::Zeta)
    }

    /// True for ζ and primitive Dirichlet L-functions.
    pub fn is_evaluable(&self) -> bool {
        matches!(
            self.coefficients,
            CoefficientOracle::Zeta | CoefficientOracle::Dirichlet(_)
        )
    }

    /// `Λ_π(n)` for `n = p^k`, checked against `|Λ_π(n)| ≤ m Λ(n) n^ϑ`.
    pub fn coefficient(&self, n: u64, p: u64) -> Result<Complex64> {
        let log_p = (p as f64).ln();
        let value = match &self.coefficients {
            CoefficientOracle::Zeta => Complex64::new(log_p, 0.0),
            CoefficientOracle::Dirichlet(chi) => chi.value(n) * log_p,
            CoefficientOracle::Custom(f) => f(n, p),
            CoefficientOracle::Unavailable => {
                return Err(Error::InvalidDescriptor(
                    "descriptor has no coefficient oracle".into(),
                ))
            }
        };
        let bound = self.degree as f64 * log_p * (n as f64).powf(self.theta);
        if value.norm() > bound * (1.0 + 1e-12) {
            return Err(Error::InvalidDescriptor(format!(
                "coefficient bound violated at n = {n}: |{value}| > {bound}"
            )));
        }
        Ok(value)
    }

    /// Descriptor of the contragredient `π̃`.
    pub fn dual(&self) -> Self {
        if self.self_dual {
            return self.clone();
        }
        let coefficients = match &self.coefficients {
            CoefficientOracle::Dirichlet(chi) => CoefficientOracle::Dirichlet(chi.conjugate()),
            CoefficientOracle::Custom(f) => {
                let f = Arc::clone(f);
                CoefficientOracle::Custom(Arc::new(move |n, p| f(n, p).conj()))
            }
            other => other.clone(),
        };
        Self {
            spectral_params: self.spectral_params.iter().map(|m| m.conj()).collect(),
            root_number: self.root_number.map(|k| k.conj()),
            coefficients,
            ..self.clone()
        }
    }

    pub fn analytic_conductor(&self) -> AnalyticConductor {
        let base = self.conductor as f64
            * self
                .spectral_params
                .iter()
                .map(|mu| mu.norm() + 3.0)
                .product::<f64>();
        AnalyticConductor {
            base,
            degree: self.degree,
        }
    }

    /// Indices `j` with `Re μ_j ∈ (−1, −½]`.
    pub fn low_spectral_indices(&self) -> Vec<usize> {
        self.spectral_params
            .iter()
            .enumerate()
            .filter(|(_, mu)| mu.re <= -0.5)
            .map(|(j, _)| j)
            .collect()
    }

    /// Integer offset in the counting formula contributed by spectral
    /// parameters with `Re μ_j ∈ (−1, −½]`. Only the degree-one value (zero)
    /// is established here.
    pub fn counting_offset(&self) -> Result<i64> {
        if self.degree == 1 && self.low_spectral_indices().is_empty() {
            Ok(0)
        } else {
            Err(Error::InvalidDescriptor(
                "counting offset only known for degree-one descriptors".into(),
            ))
        }
    }

    /// `log(N^{s/2} ∏ Γ_R(s + μ_j))`, summed branch of log Γ.
    pub fn ln_gamma_factor(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = 0.5 * s * (self.conductor as f64).ln();
        for (j, mu) in self.spectral_params.iter().enumerate() {
            acc += ln_gamma_r(s + mu).map_err(|_| Error::GammaFactorPole { index: j })?;
        }
        Ok(acc)
    }

    /// `L'(s, π_∞)/L(s, π_∞) = ½ log N + Σ Γ_R'/Γ_R(s + μ_j)`.
    pub fn gamma_factor_logderiv(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.5 * (self.conductor as f64).ln(), 0.0);
        for (j, mu) in self.spectral_params.iter().enumerate() {
            acc += gamma_r_logderiv(s + mu).map_err(|_| Error::GammaFactorPole { index: j })?;
        }
        Ok(acc)
    }

    /// Key-value text form.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let kind = match &self.coefficients {
            CoefficientOracle::Zeta => "zeta",
            CoefficientOracle::Dirichlet(_) => "dirichlet",
            CoefficientOracle::Custom(_) => "custom",
            CoefficientOracle::Unavailable => "abstract",
        };
        out.push_str(&format!("kind = {kind}\n"));
        out.push_str(&format!("degree = {}\n", self.degree));
        out.push_str(&format!("conductor = {}\n", self.conductor));
        let mus: Vec<String> = self
            .spectral_params
            .iter()
            .map(|m| format!("{:e}:{:e}", m.re, m.im))
            .collect();
        out.push_str(&format!("spectral_params = {}\n", mus.join(",")));
        out.push_str(&format!("pole_order = {}\n", self.pole_order));
        out.push_str(&format!("theta = {:e}\n", self.theta));
        match self.root_number {
            Some(k) => out.push_str(&format!("root_number = {:e}:{:e}\n", k.re, k.im)),
            None => out.push_str("root_number = unknown\n"),
        }
        out.push_str(&format!("self_dual = {}\n", self.self_dual));
        if let CoefficientOracle::Dirichlet(chi) = &self.coefficients {
            out.push_str(&format!("parity = {}\n", chi.parity));
            out.push_str(&format!("character = {}.{}\n", chi.modulus, chi.label));
        }
        out
    }

    /// Parses [`to_kv`](Self::to_kv) output. Zeta and Dirichlet entries are
    /// rebuilt from scratch and compared with the stored fields.
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected key = value".into(),
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            map.get(k)
                .cloned()
                .ok_or_else(|| Error::InvalidDescriptor(format!("missing key {k}")))
        };
        let bad = |k: &str| Error::InvalidDescriptor(format!("malformed value for {k}"));
        let parse_c = |s: &str| -> Option<Complex64> {
            let (a, b) = s.split_once(':')?;
            Some(Complex64::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
        };
        let kind = get("kind")?;
        let degree: u32 = get("degree")?.parse().map_err(|_| bad("degree"))?;
        let conductor: u64 = get("conductor")?.parse().map_err(|_| bad("conductor"))?;
        let spectral_params = get("spectral_params")?
            .split(',')
            .map(|s| parse_c(s).ok_or_else(|| bad("spectral_params")))
            .collect::<Result<Vec<_>>>()?;
        let pole_order: u32 = get("pole_order")?.parse().map_err(|_| bad("pole_order"))?;
        let theta: f64 = get("theta")?.parse().map_err(|_| bad("theta"))?;
        let root = get("root_number")?;
        let root_number = if root == "unknown" {
            None
        } else {
            Some(parse_c(&root).ok_or_else(|| bad("root_number"))?)
        };
        let self_dual: bool = get("self_dual")?.parse().map_err(|_| bad("self_dual"))?;
        let parts = DescriptorParts {
            degree,
            conductor,
            spectral_params,
            pole_order,
            theta,
            root_number,
            self_dual,
        };
        let built = match kind.as_str() {
            "zeta" => zeta_descriptor(),
            "dirichlet" => {
                let c = get("character")?;
                let (q, l) = c.split_once('.').ok_or_else(|| bad("character"))?;
                let q: u64 = q.parse().map_err(|_| bad("character"))?;
                let l: u64 = l.parse().map_err(|_| bad("character"))?;
                dirichlet_descriptor(&DirichletCharacter::conrey(q, l)?)?
            }
            "abstract" => return Self::from_parts(parts, CoefficientOracle::Unavailable),
            _ => {
                return Err(Error::InvalidDescriptor(format!(
                    "kind {kind} cannot be reconstructed from text"
                )))
            }
        };
        let consistent = built.degree == parts.degree
            && built.conductor == parts.conductor
            && built.pole_order == parts.pole_order
            && built.self_dual == parts.self_dual
            && (built.theta - parts.theta).abs() < 1e-12
            && built
                .spectral_params
                .iter()
                .zip(&parts.spectral_params)
                .all(|(a, b)| (a - b).norm() < 1e-12)
            && match (built.root_number, parts.root_number) {
                (Some(a), Some(b)) => (a - b).norm() < 1e-9,
                (None, None) => true,
                _ => false,
            };
        if !consistent {
            return Err(Error::InvalidDescriptor(
                "stored fields disagree with the reconstructed descriptor".into(),
            ));
        }
        Ok(built)
    }

    /// SHA-256 of the key-value form, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_kv().as_bytes()))
    }

    /// Short human label: `zeta`, `chi_q.label`, or `L(m=.., N=..)`.
    pub fn name(&self) -> String {
        match &self.coefficients {
            CoefficientOracle::Zeta => "zeta".into(),
            CoefficientOracle::Dirichlet(chi) => format!("chi_{}.{}", chi.modulus, chi.label),
            _ => format!("L(m={}, N={})", self.degree, self.conductor),
        }
    }
}

fn conjugation_closed(mus: &[Complex64]) -> bool {
    let mut used = vec![false; mus.len()];
    for i in 0..mus.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if mus[i].im.abs() <= 1e-12 {
            continue;
        }
        let target = mus[i].conj();
        match (0..mus.len()).find(|&j| !used[j] && (mus[j] - target).norm() <= 1e-12) {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

pub fn zeta_descriptor() -> LFunctionDescriptor {
    LFunctionDescriptor {
        degree: 1,
        conductor: 1,
        spectral_params: vec![Complex64::new(0.0, 0.0)],
        pole_order: 1,
        theta: 0.0,
        root_number: Some(Complex64::new(1.0, 0.0)),
        self_dual: true,
        coefficients: CoefficientOracle::Zeta,
    }
}

/// Descriptor of `L(s, χ)` for a primitive character with `q > 1`; the root
/// number is `τ(χ)/(i^a √q)`.
pub fn dirichlet_descriptor(chi: &DirichletCharacter) -> Result<LFunctionDescriptor> {
    if chi.modulus <= 1 {
        return Err(Error::NonPrimitive("modulus must exceed 1".into()));
    }
    if !chi.primitive {
        return Err(Error::NonPrimitive(format!(
            "chi_{}.{} is induced from a smaller modulus",
            chi.modulus, chi.label
        )));
    }
    let i_a = if chi.parity == 1 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let kappa = chi.gauss_sum() / (i_a * (chi.modulus as f64).sqrt());
    let kappa = kappa / kappa.norm();
    LFunctionDescriptor::from_parts(
        DescriptorParts {
            degree: 1,
            conductor: chi.modulus,
            spectral_params: vec![Complex64::new(chi.parity as f64, 0.0)],
            pole_order: 0,
            theta: 0.0,
            root_number: Some(kappa),
            self_dual: chi.real,
        },
        CoefficientOracle::Dirichlet(chi.clone()),
    )
}

/// `C(t, π)`.
pub fn analytic_conductor(d: &LFunctionDescriptor, t: f64) -> f64 {
    d.analytic_conductor().at_height(t)
}

/// `N^{s/2} ∏ Γ_R(s + μ_j)`. Use [`LFunctionDescriptor::ln_gamma_factor`]
/// where the value may overflow.
pub fn completed_gamma_factor(d: &LFunctionDescriptor, s: Complex64) -> Result<Complex64> {
    Ok(d.ln_gamma_factor(s)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Number of primitive characters mod q, from the multiplicative formula.
    fn primitive_count(q: u64) -> usize {
        factorize(q)
            .iter()
            .map(|&(p, e)| {
                if p == 2 {
                    match e {
                        1 => 0,
                        2 => 1,
                        _ => 1 << (e - 2),
                    }
                } else if e == 1 {
                    (p - 2) as usize
                } else {
                    (p.pow(e - 2) * (p - 1) * (p - 1)) as usize
                }
            })
            .product()
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(997), vec![(997, 1)]);
        assert!(factorize(1).is_empty());
    }

    #[test]
    fn small_characters() {
        let chi3 = DirichletCharacter::conrey(3, 2).unwrap();
        assert_eq!(chi3.value(1), c(1.0, 0.0));
        assert_eq!(chi3.value(2), c(-1.0, 0.0));
        assert_eq!(chi3.value(3), c(0.0, 0.0));
        assert_eq!(chi3.parity(), 1);
        assert!(chi3.is_primitive() && chi3.is_real());

        let chi4 = DirichletCharacter::default_primitive(4).unwrap();
        assert_eq!(chi4.label(), 3);
        assert_eq!(chi4.value(3), c(-1.0, 0.0));
        assert_eq!(chi4.parity(), 1);
    }

    #[test]
    fn multiplicative_and_zero_off_units() {
        for q in [5u64, 8, 12, 16, 27, 45, 101] {
            for label in (1..q).filter(|&l| gcd(l, q) == 1) {
                let chi = DirichletCharacter::conrey(q, label).unwrap();
                for m in 0..q {
                    assert_eq!(chi.value(m).norm() == 0.0, gcd(m, q) != 1 || q == 1);
                    for n in 0..q {
                        let lhs = chi.value(m * n);
                        let rhs = chi.value(m) * chi.value(n);
                        assert!((lhs - rhs).norm() < 1e-12, "q={q} label={label}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        let q = 20u64;
        let chars: Vec<_> = (1..q)
            .filter(|&l| gcd(l, q) == 1)
            .map(|l| DirichletCharacter::conrey(q, l).unwrap())
            .collect();
        for a in &chars {
            for b in &chars {
                let s: Complex64 = (0..q).map(|n| a.value(n) * b.value(n).conj()).sum();
                let expect = if a.label() == b.label() { 8.0 } else { 0.0 };
                assert!((s - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn primitive_counts_match_formula() {
        for q in [3u64, 4, 5, 8, 9, 12, 15, 16, 25, 27, 32, 36, 101] {
            let count = (1..q)
                .filter(|&l| gcd(l, q) == 1)
                .filter(|&l| DirichletCharacter::conrey(q, l).unwrap().is_primitive())
                .count();
            assert_eq!(count, primitive_count(q), "q = {q}");
        }
    }

    #[test]
    fn gauss_sum_modulus_and_root_numbers() {
        for q in [3u64, 4, 5, 7, 8, 101, 997] {
            let chi = DirichletCharacter::default_primitive(q).unwrap();
            assert!((chi.gauss_sum().norm() - (q as f64).sqrt()).abs() < 1e-9);
            let d = dirichlet_descriptor(&chi).unwrap();
            let k = d.root_number().unwrap();
            assert!((k.norm() - 1.0).abs() < 1e-12);
            if chi.is_real() {
                assert!((k - 1.0).norm() < 1e-10, "q = {q}");
            }
        }
    }

    #[test]
    fn conductor_examples() {
        let z = zeta_descriptor();
        assert_eq!(analytic_conductor(&z, 0.0), 3.0);
        assert_eq!(analytic_conductor(&z, 9.0), 30.0);
        let d3 = dirichlet_descriptor(&DirichletCharacter::conrey(3, 2).unwrap()).unwrap();
        assert_eq!(d3.analytic_conductor().base, 12.0);
        assert_eq!(analytic_conductor(&d3, 1.0), 24.0);
        let d4 = dirichlet_descriptor(&DirichletCharacter::default_primitive(4).unwrap()).unwrap();
        assert_eq!(d4.conductor(), 4);
        assert!(d4.is_self_dual());
    }

    #[test]
    fn rejects_bad_descriptors() {
        let chi = DirichletCharacter::conrey(8, 7).unwrap();
        assert!(matches!(dirichlet_descriptor(&chi), Err(Error::NonPrimitive(_))));
        let parts = DescriptorParts {
            degree: 2,
            conductor: 1,
            spectral_params: vec![c(0.0, 1.0), c(0.0, 2.0)],
            pole_order: 0,
            theta: 0.0,
            root_number: None,
            self_dual: true,
        };
        assert!(LFunctionDescriptor::from_parts(parts.clone(), CoefficientOracle::Unavailable).is_err());
        let ok = DescriptorParts {
            spectral_params: vec![c(0.5, 1.0), c(0.5, -1.0)],
            ..parts.clone()
        };
        assert!(LFunctionDescriptor::from_parts(ok, CoefficientOracle::Unavailable).is_ok());
        let low = DescriptorParts {
            spectral_params: vec![c(-1.0, 0.0), c(0.0, 0.0)],
            ..parts
        };
        assert!(LFunctionDescriptor::from_parts(low, CoefficientOracle::Unavailable).is_err());
    }

    #[test]
    fn coefficient_guard() {
        let z = zeta_descriptor();
        assert!((z.coefficient(8, 2).unwrap().re - 2f64.ln()).abs() < 1e-15);
        let bad = LFunctionDescriptor::from_parts(
            DescriptorParts {
                degree: 1,
                conductor: 1,
                spectral_params: vec![c(0.0, 0.0)],
                pole_order: 0,
                theta: 0.0,
                root_number: None,
                self_dual: true,
            },
            CoefficientOracle::Custom(Arc::new(|_, p| c(2.0 * (p as f64).ln(), 0.0))),
        )
        .unwrap();
        assert!(bad.coefficient(3, 3).is_err());
    }

    #[test]
    fn gamma_factor_at_half() {
        let z = zeta_descriptor();
        let g = completed_gamma_factor(&z, c(0.5, 0.0)).unwrap();
        // Γ(1/4) = 3.625609908221908...
        let expect = PI.powf(-0.25) * 3.625_609_908_221_908;
        assert!((g.re - expect).abs() < 1e-13 && g.im.abs() < 1e-15);
        assert!(matches!(
            completed_gamma_factor(&z, c(-2.0, 0.0)),
            Err(Error::GammaFactorPole { index: 0 })
        ));
    }

    #[test]
    fn gamma_factor_symmetry_for_dual() {
        let d = dirichlet_descriptor(&DirichletCharacter::conrey(5, 2).unwrap()).unwrap();
        let dual = d.dual();
        for t in [0.3, 4.0, 17.5] {
            let a = d.ln_gamma_factor(c(0.5, t)).unwrap().re;
            let b = dual.ln_gamma_factor(c(0.5, -t)).unwrap().re;
            assert!((a - b).abs() < 1e-12);
        }
        assert!((dual.root_number().unwrap() - d.root_number().unwrap().conj()).norm() < 1e-15);
    }

    #[test]
    fn logderiv_matches_specfun() {
        let z = zeta_descriptor();
        for u in [0.0, 3.0, 40.0] {
            let s = c(0.5, u);
            let a = z.gamma_factor_logderiv(s).unwrap();
            let b = gamma_r_logderiv(s).unwrap();
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn kv_round_trip_and_hash() {
        for d in [
            zeta_descriptor(),
            dirichlet_descriptor(&DirichletCharacter::default_primitive(101).unwrap()).unwrap(),
        ] {
            let back = LFunctionDescriptor::from_kv(&d.to_kv()).unwrap();
            assert_eq!(back.to_kv(), d.to_kv());
            assert_eq!(back.hash(), d.hash());
            assert_eq!(d.hash().len(), 64);
        }
        let tampered = zeta_descriptor().to_kv().replace("pole_order = 1", "pole_order = 0");
        assert!(LFunctionDescriptor::from_kv(&tampered).is_err());
    }
}
