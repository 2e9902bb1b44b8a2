//! Scalar special functions and arithmetic kernels.

mod gamma;
mod sieve;

pub use gamma::{
    digamma, digamma_budgeted, gamma_r_logderiv, ln_gamma, ln_gamma_r, riemann_siegel_theta,
    riemann_siegel_theta_budgeted, trigamma, trigamma_real,
};
pub use sieve::{
    mangoldt_sieve, mangoldt_sieve_with_cap, prime_sum_bound, shared_sieve, MangoldtTable,
    DEFAULT_SIEVE_CAP,
};

/// Where an error estimate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BudgetSource {
    SeriesTruncation,
    Quadrature,
    TailEstimate,
    TableLookup,
}

/// Absolute/relative error estimate attached to a computed quantity.
/// Budgets combine linearly (worst case).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    pub absolute: f64,
    pub relative: f64,
    pub source: BudgetSource,
}

impl ErrorBudget {
    pub fn new(absolute: f64, relative: f64, source: BudgetSource) -> Self {
        debug_assert!(absolute >= 0.0 && relative >= 0.0);
        Self {
            absolute: absolute.max(0.0),
            relative: relative.max(0.0),
            source,
        }
    }

    pub fn absolute(absolute: f64, source: BudgetSource) -> Self {
        Self::new(absolute, 0.0, source)
    }

    pub fn zero(source: BudgetSource) -> Self {
        Self::new(0.0, 0.0, source)
    }

    /// Worst-case sum. The source of the larger absolute term is kept.
    pub fn add(self, other: ErrorBudget) -> ErrorBudget {
        let source = if other.absolute > self.absolute {
            other.source
        } else {
            self.source
        };
        ErrorBudget::new(
            self.absolute + other.absolute,
            self.relative + other.relative,
            source,
        )
    }

    pub fn scale(self, factor: f64) -> ErrorBudget {
        ErrorBudget::new(self.absolute * factor.abs(), self.relative, self.source)
    }
}

/// A value together with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budgeted<T> {
    pub value: T,
    pub budget: ErrorBudget,
}
