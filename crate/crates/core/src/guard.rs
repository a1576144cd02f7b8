//! Guard-band projections that keep verification away from the truncation
//! edge.

use crate::error::{OpError, Result};
use crate::operator::{Operator, State};
use crate::space::CompositeSpace;

/// Margin `g`: the guarded subspace is `span{|s, n⟩ : n <= n_max − g}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuardBand {
    g: usize,
    n_max: usize,
}

impl GuardBand {
    pub fn new(g: usize, n_max: usize) -> Result<Self> {
        if g >= n_max {
            return Err(OpError::GuardOutOfRange { g, n_max });
        }
        Ok(Self { g, n_max })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Largest occupation number inside the band.
    pub fn limit(&self) -> usize {
        self.n_max - self.g
    }

    pub fn contains(&self, n: usize) -> bool {
        n <= self.limit()
    }

    pub fn projector(&self, space: CompositeSpace) -> Result<Operator> {
        guard_projector(space, self.g)
    }
}

pub fn guard_projector(space: CompositeSpace, g: usize) -> Result<Operator> {
    let band = GuardBand::new(g, space.n_max())?;
    let entries: Vec<f64> = (0..space.dim())
        .map(|i| {
            let (_, n) = space.spin_and_n(i);
            if band.contains(n) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Operator::diagonal_from(space.space(), &entries, format!("P_{g}"))
}

/// ‖P (A − target) P‖_F.
pub fn restricted_residual(a: &Operator, target: &Operator, p: &Operator) -> Result<f64> {
    let diff = a.sub(target)?;
    Ok(p.mul(&diff)?.mul(p)?.frobenius_norm())
}

/// ‖P v‖ for a diagonal 0/1 projector `P`.
pub fn restricted_norm(p: &Operator, v: &State) -> Result<f64> {
    Ok(p.apply(v)?.norm())
}
