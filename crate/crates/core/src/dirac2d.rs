//! Deformed angular momentum on a spin ⊗ angular-index lattice.
//!
//! The phase of the 2D momentum lowers the angular quantum number by one,
//! modeled by the unit shift `S|l⟩ = |l−1⟩`. With `U = diag(1, S)` the
//! pulled-back angular momentum `U†(l⊗1)U` is `diag(l, l−1)` except at
//! `l_min`, where `S` has its kernel.

use crate::algebra::CommutatorReport;
use crate::blocks::{block2, block_diag};
use crate::defect::analyze_defect;
use crate::error::{OpError, Result};
use crate::operator::{Matrix, Operator, ONE};
use crate::space::{AngularLattice, Space};
use crate::states::{lattice_basis, StateKind};

/// Residual tolerance for the interior identity.
pub const LATTICE_TOL: f64 = 1e-12;

/// `S|l⟩ = |l−1⟩`, `S|l_min⟩ = 0`.
pub fn angular_shift(lattice: AngularLattice) -> Operator {
    let d = lattice.dim();
    let mut m = Matrix::zeros(d, d);
    for k in 1..d {
        m[(k - 1, k)] = ONE;
    }
    Operator::new(Space::lattice(lattice), m, "S").expect("lattice dimension")
}

/// Diagonal `l` on the lattice.
pub fn angular_momentum(lattice: AngularLattice) -> Operator {
    let values: Vec<f64> = (0..lattice.dim()).map(|k| lattice.value_at(k) as f64).collect();
    Operator::diagonal_from(Space::lattice(lattice), &values, "l").expect("lattice dimension")
}

/// `U = diag(1, S)` on spin ⊗ lattice.
pub fn deformation_unitary(lattice: AngularLattice) -> Operator {
    let one = Operator::identity(Space::lattice(lattice));
    let zero = Operator::zero(Space::lattice(lattice));
    block2(&one, &zero, &zero, &angular_shift(lattice))
        .expect("same lattice")
        .with_label("U")
}

/// Projector onto `|s, l⟩` with `l_min + g <= l <= l_max`.
pub fn interior_projector(lattice: AngularLattice, g: usize) -> Operator {
    let values: Vec<f64> = (0..lattice.dim())
        .map(|k| if lattice.value_at(k) >= lattice.l_min() + g as i64 { 1.0 } else { 0.0 })
        .collect();
    let p = Operator::diagonal_from(Space::lattice(lattice), &values, "P").expect("lattice dimension");
    block_diag(&p, &p).expect("same lattice")
}

#[derive(Clone, Debug)]
pub struct DeformedLReport {
    pub report: CommutatorReport,
    /// `U†(l⊗1)U`.
    pub deformed: Operator,
    /// `U(l⊗1)U†`, which shifts the lower block the other way.
    pub forward: Operator,
    /// Lower-block diagonal of `deformed − l⊗1` on the interior (expected −1).
    pub lower_offset: f64,
    /// Lower-block diagonal of `forward − l⊗1` on its own interior (+1).
    pub forward_lower_offset: f64,
}

impl DeformedLReport {
    /// `(upper, lower)` diagonal entries of the deformed operator at `l`.
    pub fn diagonal_at(&self, lattice: AngularLattice, l: i64) -> Option<(f64, f64)> {
        let k = lattice.index_of(l)?;
        let d = lattice.dim();
        Some((self.deformed.entry(k, k).re, self.deformed.entry(d + k, d + k).re))
    }
}

/// Check `U†(l⊗1)U = diag(l, l−1)` on the interior of the lattice.
pub fn check_deformed_l(lattice: AngularLattice, g: usize) -> Result<DeformedLReport> {
    if g < 1 || g as i64 > lattice.l_max() - lattice.l_min() {
        return Err(OpError::InvalidParams(format!(
            "guard {g} must satisfy 1 <= g <= l_max - l_min"
        )));
    }
    let u = deformation_unitary(lattice);
    let l = angular_momentum(lattice);
    let l_full = block_diag(&l, &l)?;
    let deformed = u.adjoint().mul(&l_full)?.mul(&u)?.with_label("L");
    let forward = u.mul(&l_full)?.mul(&u.adjoint())?.with_label("L_fwd");

    let l_lower = l.shift(-1.0);
    let target = block_diag(&l, &l_lower)?;
    let residual = deformed.sub(&target)?;

    let p = interior_projector(lattice, g);
    let interior = p.mul(&residual)?.mul(&p)?.frobenius_norm();
    let whole = Operator::identity(residual.space());
    let basis = lattice_basis(lattice);
    let analysis = analyze_defect(&residual, &whole, &basis, LATTICE_TOL)?;
    let interior_start = lattice.l_min() + g as i64;
    let support_inside = analysis
        .support
        .iter()
        .any(|s| matches!(basis[s.state].kind, StateKind::Bare { index, .. } if index >= interior_start));

    let d = lattice.dim();
    let k_mid = d / 2;
    let lower_offset = deformed.entry(d + k_mid, d + k_mid).re - l.entry(k_mid, k_mid).re;
    let forward_lower_offset = forward.entry(d + k_mid, d + k_mid).re - l.entry(k_mid, k_mid).re;

    let report = CommutatorReport {
        relation: "U^dag (l x 1) U = diag(l, l-1)".to_string(),
        residual: interior,
        band_residual: interior,
        full_residual: analysis.full_residual,
        full_rank: analysis.full_rank,
        defect_rank: analysis.full_rank,
        defect_support: analysis.support,
        tolerance: LATTICE_TOL,
        pass: interior <= LATTICE_TOL && !support_inside,
    };
    Ok(DeformedLReport {
        report,
        deformed,
        forward,
        lower_offset,
        forward_lower_offset,
    })
}
