//! Special functions and generic numerical primitives shared by the other modules.

mod diff;
mod quadrature;
mod search;
mod special;

pub use diff::{finite_diff_gradient, DEFAULT_FD_STEP};
pub use quadrature::{adaptive_quadrature, adaptive_quadrature_vec, Domain, MAX_SUBDIVISIONS};
pub use search::{golden_section_max, GOLDEN_MAX_ITER};
pub use special::{digamma, inverse_digamma, log_gamma, trigamma, EULER_GAMMA};

pub(crate) use special::{digamma_unchecked, ln_gamma_unchecked};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finite, non-degenerate closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("interval bounds must be finite, got [{lo}, {hi}]")));
        }
        if lo >= hi {
            return Err(Error::Domain(format!("interval requires lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// Intersection with another interval, `None` when they do not overlap in
    /// more than a point.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi)).ok()
    }
}
