//! Critical-line evaluation, zero location and zero counting.
//!
//! Counting uses the normalization `N(t, π)` = number of zeros with
//! `|γ| ≤ t`, endpoint weight ½; for ζ this is `2N(t)`. Self-dual zero sets
//! store positive ordinates only.

mod argument;
mod eval;
mod io;
mod zeros;

pub use argument::{argument_principle_count, argument_s, ArgumentTrace, SNAP_OFFSET, ZERO_SNAP};
pub use eval::{em_length, hardy_z, hurwitz_zeta, l_value, zeta, Evaluator, Z_RESIDUE_TOL};
pub use io::{
    cache_file, ingest_zeros, load_or_find, parse_zero_table, read_zero_cache, write_zero_cache,
    CROSS_CHECK_COUNT, CROSS_CHECK_TOL,
};
pub use zeros::{find_zeros, ZeroSearch, DIRICHLET_HEIGHT_CAP, ZETA_HEIGHT_CAP};

use crate::error::{Error, Result};
use crate::lfunc::LFunctionDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Ingested,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::Ingested => "ingested",
        }
    }
}

/// Zero ordinates of one L-function, complete up to a height.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    descriptor_id: String,
    ordinates: Vec<f64>,
    symmetric: bool,
    complete_to: f64,
    provenance: Provenance,
    precision: f64,
}

impl ZeroSet {
    /// Validates ordering (repetition encodes multiplicity) and, for
    /// symmetric sets, positivity.
    pub fn new(
        d: &LFunctionDescriptor,
        ordinates: Vec<f64>,
        symmetric: bool,
        complete_to: f64,
        provenance: Provenance,
        precision: f64,
    ) -> Result<Self> {
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] >= w[0]) {
                return Err(Error::Ordering {
                    line: i + 2,
                    value: w[1],
                });
            }
        }
        if symmetric && ordinates.first().is_some_and(|&g| g <= 0.0) {
            return Err(Error::InvalidDescriptor(
                "symmetric zero sets hold positive ordinates".into(),
            ));
        }
        Ok(Self {
            descriptor_id: d.hash(),
            ordinates,
            symmetric,
            complete_to,
            provenance,
            precision,
        })
    }

    pub fn descriptor_id(&self) -> &str {
        &self.descriptor_id
    }

    /// Stored ordinates (positive only for symmetric sets).
    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// True when zeros come in pairs `±γ` and only `γ > 0` is stored.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// All ordinates on the full line, ascending.
    pub fn signed_ordinates(&self) -> Vec<f64> {
        if !self.symmetric {
            return self.ordinates.clone();
        }
        let mut out: Vec<f64> = self.ordinates.iter().rev().map(|g| -g).collect();
        out.extend_from_slice(&self.ordinates);
        out
    }

    /// Smallest `|γ|`.
    pub fn lowest(&self) -> Option<f64> {
        self.ordinates
            .iter()
            .map(|g| g.abs())
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Same zeros with a smaller completeness height.
    pub fn truncated(&self, height: f64) -> Self {
        let ordinates = self
            .ordinates
            .iter()
            .copied()
            .filter(|g| g.abs() <= height)
            .collect();
        Self {
            ordinates,
            complete_to: height.min(self.complete_to),
            ..self.clone()
        }
    }

    fn check_height(&self, t: f64) -> Result<()> {
        if t.abs() > self.complete_to {
            return Err(Error::Completeness {
                requested: t.abs(),
                complete_to: self.complete_to,
            });
        }
        Ok(())
    }
}

pub(crate) fn count_over_line(ordinates: &[f64], symmetric: bool, t: f64) -> f64 {
    let t = t.abs();
    let w = if symmetric { 2.0 } else { 1.0 };
    ordinates
        .iter()
        .map(|g| {
            let a = g.abs();
            if a < t {
                w
            } else if a == t {
                0.5 * w
            } else {
                0.0
            }
        })
        .sum()
}

/// `N(t, π)`: zeros with `|γ| ≤ t`, weight ½ at `|γ| = t`.
pub fn count_zeros(zs: &ZeroSet, t: f64) -> Result<f64> {
    zs.check_height(t)?;
    Ok(count_over_line(&zs.ordinates, zs.symmetric, t))
}

/// Zeros with `0 < γ ≤ t`, weight ½ at `γ = t`.
pub fn count_positive(zs: &ZeroSet, t: f64) -> Result<f64> {
    zs.check_height(t)?;
    Ok(zs
        .ordinates
        .iter()
        .map(|&g| {
            if g > 0.0 && g < t {
                1.0
            } else if g == t {
                0.5
            } else {
                0.0
            }
        })
        .sum())
}

/// `N(t, π) − [smooth(t) + S(t) − S(−t) + offset]`; zero for a complete
/// zero set.
pub fn counting_residual(ev: &Evaluator, zs: &ZeroSet, t: f64) -> Result<f64> {
    let t = t.abs();
    let count = count_zeros(zs, t)?;
    let up = ev.argument_s(t)?.value;
    let down = if ev.descriptor().is_self_dual() {
        -up
    } else {
        ev.argument_s(-t)?.value
    };
    let offset = ev.descriptor().counting_offset()? as f64;
    Ok(count - (ev.smooth_count(t) + up - down + offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunc::zeta_descriptor;

    fn set(ordinates: Vec<f64>, symmetric: bool) -> ZeroSet {
        ZeroSet::new(&zeta_descriptor(), ordinates, symmetric, 50.0, Provenance::Computed, 1e-9).unwrap()
    }

    #[test]
    fn endpoint_weights() {
        let zs = set(vec![14.5, 21.0, 25.0], true);
        assert_eq!(count_zeros(&zs, 10.0).unwrap(), 0.0);
        assert_eq!(count_zeros(&zs, 14.5).unwrap(), 1.0);
        assert_eq!(count_zeros(&zs, 22.0).unwrap(), 4.0);
        assert_eq!(count_positive(&zs, 21.0).unwrap(), 1.5);
        assert!(matches!(count_zeros(&zs, 60.0), Err(Error::Completeness { .. })));
        let full = set(vec![-3.0, 2.0, 3.0], false);
        assert_eq!(count_zeros(&full, 3.0).unwrap(), 2.0);
        assert_eq!(full.lowest(), Some(2.0));
    }

    #[test]
    fn ordering_and_reflection() {
        assert!(ZeroSet::new(&zeta_descriptor(), vec![2.0, 1.0], true, 3.0, Provenance::Computed, 0.0).is_err());
        let zs = set(vec![1.0, 2.0], true);
        assert_eq!(zs.signed_ordinates(), vec![-2.0, -1.0, 1.0, 2.0]);
        assert_eq!(zs.truncated(1.5).ordinates(), &[1.0]);
    }
}
