//! Zero location by sign changes of the Hardy Z-function.

use std::f64::consts::PI;

use super::eval::Evaluator;
use super::{count_over_line, Provenance, ZeroSet};
use crate::error::{Error, Result};
use crate::lfunc::LFunctionDescriptor;
use crate::par;

/// Default height caps.
pub const ZETA_HEIGHT_CAP: f64 = 1e4;
pub const DIRICHLET_HEIGHT_CAP: f64 = 1e3;

/// Parameters of the zero search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSearch {
    /// Overrides the per-family height cap.
    pub height_cap: Option<f64>,
    /// Base step as a fraction of the mean zero spacing `2π/log C(t)`.
    pub step_fraction: f64,
    /// Grid halvings allowed beyond the first.
    pub max_halvings: u32,
    /// Distance between completeness checkpoints.
    pub checkpoint_spacing: f64,
    /// Bracket width at which bisection stops.
    pub tolerance: f64,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        Self {
            height_cap: None,
            step_fraction: 0.05,
            max_halvings: 6,
            checkpoint_spacing: 25.0,
            tolerance: 1e-9,
        }
    }
}

/// Mismatch tolerated between the zero count and the counting identity.
const CERTIFY_TOL: f64 = 0.25;

impl ZeroSearch {
    pub fn cap_for(&self, d: &LFunctionDescriptor) -> f64 {
        self.height_cap.unwrap_or(if d.is_zeta() {
            ZETA_HEIGHT_CAP
        } else {
            DIRICHLET_HEIGHT_CAP
        })
    }

    /// All zeros with `|γ| ≤ height`. Self-dual descriptors are scanned on
    /// `[0, height]` and stored as positive ordinates.
    pub fn run(&self, d: &LFunctionDescriptor, height: f64) -> Result<ZeroSet> {
        let ev = Evaluator::new(d)?;
        let cap = self.cap_for(d);
        if !(height >= 0.0) || height > cap {
            return Err(Error::HeightCap {
                requested: height,
                cap,
            });
        }
        let symmetric = d.is_self_dual();
        let lo = if symmetric { 0.0 } else { -height };
        let conductor = d.analytic_conductor();
        let step = |t: f64| self.step_fraction * 2.0 * PI / conductor.at_height(t).ln();

        let mut grid = vec![lo];
        while let Some(&last) = grid.last() {
            if last >= height {
                break;
            }
            let next = (last + step(last)).min(height);
            grid.push(next);
        }
        let mut values = par::map(&grid, |&t| ev.hardy_z_unchecked(t));
        let mut count = sign_changes(&values);
        let mut halvings = 0;
        loop {
            let (g, v) = halve(&ev, &grid, &values);
            let refined = sign_changes(&v);
            grid = g;
            values = v;
            halvings += 1;
            let stable = refined == count;
            count = refined;
            if stable || halvings > self.max_halvings {
                break;
            }
        }

        loop {
            let ordinates = self.refine_all(&ev, &grid, &values);
            match self.certify(&ev, &ordinates, symmetric, height) {
                Ok(()) => {
                    return ZeroSet::new(
                        d,
                        ordinates,
                        symmetric,
                        height,
                        Provenance::Computed,
                        self.tolerance,
                    )
                }
                Err(e) if halvings > self.max_halvings => return Err(e),
                Err(_) => {
                    let (g, v) = halve(&ev, &grid, &values);
                    grid = g;
                    values = v;
                    halvings += 1;
                }
            }
        }
    }

    fn refine_all(&self, ev: &Evaluator, grid: &[f64], values: &[f64]) -> Vec<f64> {
        let brackets: Vec<(f64, f64, f64)> = grid
            .windows(2)
            .zip(values.windows(2))
            .filter(|(_, v)| differ(v[0], v[1]))
            .map(|(g, v)| (g[0], g[1], v[0]))
            .collect();
        par::map(&brackets, |&(a, b, za)| bisect(ev, a, b, za, self.tolerance))
    }

    /// Compares the located zeros with the counting identity at checkpoints.
    fn certify(&self, ev: &Evaluator, ordinates: &[f64], symmetric: bool, height: f64) -> Result<()> {
        if height == 0.0 {
            return Ok(());
        }
        let n = (height / self.checkpoint_spacing).ceil().max(1.0) as usize;
        let checkpoints: Vec<f64> = (1..=n)
            .map(|k| {
                let c = height * k as f64 / n as f64;
                // keep clear of the symmetric-limit window around an ordinate
                if ordinates.iter().any(|g| (g.abs() - c).abs() < 1e-6) {
                    c - 2e-6
                } else {
                    c
                }
            })
            .collect();
        let offset = ev.descriptor().counting_offset()? as f64;
        let results = par::map(&checkpoints, |&c| -> Result<(f64, f64, f64)> {
            let up = ev.argument_s(c)?.value;
            let down = if symmetric { -up } else { ev.argument_s(-c)?.value };
            let expected = ev.smooth_count(c) + up - down + offset;
            let found = count_over_line(ordinates, symmetric, c);
            Ok((c, found, expected))
        });
        for r in results {
            let (c, found, expected) = r?;
            if (found - expected).abs() > CERTIFY_TOL {
                return Err(Error::CompletenessUncertain {
                    height: c,
                    found: found.round() as usize,
                    expected: expected.round() as i64,
                });
            }
        }
        Ok(())
    }
}

fn differ(a: f64, b: f64) -> bool {
    (a < 0.0) != (b < 0.0)
}

fn sign_changes(values: &[f64]) -> usize {
    values.windows(2).filter(|v| differ(v[0], v[1])).count()
}

/// Inserts midpoints and evaluates them in parallel.
fn halve(ev: &Evaluator, grid: &[f64], values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mids: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mid_values = par::map(&mids, |&t| ev.hardy_z_unchecked(t));
    let mut g = Vec::with_capacity(grid.len() + mids.len());
    let mut v = Vec::with_capacity(grid.len() + mids.len());
    for i in 0..mids.len() {
        g.push(grid[i]);
        v.push(values[i]);
        g.push(mids[i]);
        v.push(mid_values[i]);
    }
    g.push(*grid.last().expect("nonempty grid"));
    v.push(*values.last().expect("nonempty grid"));
    (g, v)
}

fn bisect(ev: &Evaluator, mut a: f64, mut b: f64, mut za: f64, tol: f64) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let zm = ev.hardy_z_unchecked(m);
        if zm == 0.0 {
            return m;
        }
        if differ(za, zm) {
            b = m;
        } else {
            a = m;
            za = zm;
        }
    }
    0.5 * (a + b)
}

/// Zeros up to `height` with the default search parameters.
pub fn find_zeros(d: &LFunctionDescriptor, height: f64) -> Result<ZeroSet> {
    ZeroSearch::default().run(d, height)
}
