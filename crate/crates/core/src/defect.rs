//! Low-rank defect detection for operator identities that hold everywhere
//! except on a few states.
//!
//! Given a residual `D = lhs − rhs` and a band projector `P`, the singular
//! values of `PDP` above tolerance count the defect rank; the union of the
//! corresponding left and right singular vectors is the defect support `Q`.
//! The identity is then judged on `P − Q`.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::operator::{Matrix, Operator};
use crate::spectral::eigh;
use crate::states::LabeledState;

/// Labeled states with weight `⟨e|Q|e⟩` above this are listed as support.
pub const SUPPORT_WEIGHT_MIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SupportEntry {
    pub label: String,
    /// Index into the basis the analysis was labeled with.
    pub state: usize,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct DefectAnalysis {
    /// ‖D‖_F on the whole space.
    pub full_residual: f64,
    /// Number of singular values of `D` above tolerance.
    pub full_rank: usize,
    /// ‖PDP‖_F.
    pub band_residual: f64,
    /// Number of singular values of `PDP` above tolerance.
    pub rank: usize,
    /// ‖(P−Q)D(P−Q)‖_F.
    pub residual: f64,
    pub support: Vec<SupportEntry>,
    /// Projector onto the defect support.
    pub support_projector: Matrix,
}

impl DefectAnalysis {
    pub fn support_labels(&self) -> Vec<String> {
        self.support.iter().map(|s| s.label.clone()).collect()
    }

    /// `tr Q`, the dimension of the support.
    pub fn support_dim(&self) -> f64 {
        self.support_projector.trace().re
    }

    /// Fraction of the support lying in the span of the basis states that
    /// satisfy `allowed` (1 when the support is entirely allowed).
    pub fn allowed_fraction(&self, basis: &[LabeledState], allowed: impl Fn(&LabeledState) -> bool) -> f64 {
        let dim = self.support_dim();
        if dim < 0.5 {
            return 1.0;
        }
        let inside: f64 = basis
            .iter()
            .filter(|s| allowed(s))
            .map(|s| s.vector.dotc(&(&self.support_projector * &s.vector)).re)
            .sum();
        inside / dim
    }
}

/// Left/right singular vector pairs of `m` with singular value above `tol`.
///
/// Read off the Hermitian dilation `[[0, M], [M†, 0]]`, whose eigenvalues are
/// `±σ` with eigenvectors `(u, ±v)/√2`. nalgebra's complex SVD loses accuracy
/// on the sparse, nearly-zero residuals met here; the dilation goes through
/// the shifted Hermitian solver instead.
fn singular_pairs(m: &Matrix, tol: f64) -> Vec<(DVector<C64>, DVector<C64>)> {
    // σ_max ≤ ‖M‖_F
    if m.norm() <= tol {
        return Vec::new();
    }
    let (r, c) = m.shape();
    let mut dilation = Matrix::zeros(r + c, r + c);
    dilation.view_mut((0, r), (r, c)).copy_from(m);
    dilation.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    eigh(&dilation)
        .into_iter()
        .filter(|p| p.value > tol)
        .map(|p| {
            let left = p.vector.rows(0, r).into_owned();
            let right = p.vector.rows(r, c).into_owned();
            (left.normalize(), right.normalize())
        })
        .collect()
}

pub fn analyze_defect(
    residual: &Operator,
    band: &Operator,
    basis: &[LabeledState],
    tol: f64,
) -> Result<DefectAnalysis> {
    let d = residual.matrix();
    let p = band.matrix();
    // spaces are checked by the multiplication helpers
    let banded = band.mul(residual)?.mul(band)?;
    let dg = banded.matrix();
    let dim = d.nrows();

    let full_rank = singular_pairs(d, tol).len();

    let pairs = singular_pairs(dg, tol);
    let mut q = Matrix::zeros(dim, dim);
    if !pairs.is_empty() {
        // union of left and right singular subspaces
        let mut span = Matrix::zeros(dim, 2 * pairs.len());
        for (c, (left, right)) in pairs.iter().enumerate() {
            span.set_column(2 * c, left);
            span.set_column(2 * c + 1, right);
        }
        let gram = &span * span.adjoint();
        for pair in eigh(&gram) {
            if pair.value > 1e-8 {
                q += &pair.vector * pair.vector.adjoint();
            }
        }
    }
    let complement = p - &q;
    let kept = &complement * d * &complement;

    let mut support: Vec<SupportEntry> = basis
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let w = s.vector.dotc(&(&q * &s.vector)).re;
            (w > SUPPORT_WEIGHT_MIN).then(|| SupportEntry {
                label: s.label.clone(),
                state: i,
                weight: w,
            })
        })
        .collect();
    support.sort_by(|a, b| b.weight.total_cmp(&a.weight).then(a.state.cmp(&b.state)));

    Ok(DefectAnalysis {
        full_residual: d.norm(),
        full_rank,
        band_residual: dg.norm(),
        rank: pairs.len(),
        residual: kept.norm(),
        support,
        support_projector: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guard::guard_projector;
    use crate::operator::{basis_state, outer, Operator};
    use crate::space::{CompositeSpace, Spin};
    use crate::states::bare_basis;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_residual_has_no_defect() {
        let c = CompositeSpace::with_n_max(5).unwrap();
        let r = Operator::zero(c.space());
        let p = guard_projector(c, 1).unwrap();
        let a = analyze_defect(&r, &p, &bare_basis(c), 1e-9).unwrap();
        assert_eq!(a.rank, 0);
        assert_eq!(a.residual, 0.0);
        assert!(a.support.is_empty());
    }

    #[test]
    fn rank_one_defect_found_and_excluded() {
        let c = CompositeSpace::with_n_max(6).unwrap();
        let k = c.index(Spin::Down, 0);
        let r = outer(c.space(), &basis_state(c.dim(), k), "d").unwrap().scale_re(-1.0);
        let p = guard_projector(c, 2).unwrap();
        let basis = bare_basis(c);
        let a = analyze_defect(&r, &p, &basis, 1e-9).unwrap();
        assert_eq!(a.rank, 1);
        assert_eq!(a.support_labels(), vec!["|dn,0>".to_string()]);
        assert_abs_diff_eq!(a.residual, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a.band_residual, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a.allowed_fraction(&basis, |s| s.label == "|dn,0>"), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn off_diagonal_defect_reports_both_ends() {
        let c = CompositeSpace::with_n_max(6).unwrap();
        let x = basis_state(c.dim(), c.index(Spin::Up, 0));
        let y = basis_state(c.dim(), c.index(Spin::Down, 1));
        let m = &x * y.adjoint();
        let r = Operator::new(c.space(), m, "xy").unwrap();
        let p = guard_projector(c, 1).unwrap();
        let a = analyze_defect(&r, &p, &bare_basis(c), 1e-9).unwrap();
        assert_eq!(a.rank, 1);
        assert_eq!(a.support.len(), 2);
        assert_abs_diff_eq!(a.support_dim(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn edge_defect_invisible_in_band() {
        let c = CompositeSpace::with_n_max(6).unwrap();
        let k = c.index(Spin::Up, 6);
        let r = outer(c.space(), &basis_state(c.dim(), k), "edge").unwrap();
        let p = guard_projector(c, 1).unwrap();
        let a = analyze_defect(&r, &p, &bare_basis(c), 1e-9).unwrap();
        assert_eq!(a.rank, 0);
        assert_eq!(a.full_rank, 1);
    }

    #[test]
    fn singular_pairs_satisfy_svd_relations() {
        let m = Matrix::from_fn(5, 5, |i, j| C64::new((i * j) as f64 * 1e-3, if i == 4 && j == 0 { 2.0 } else { 0.0 }));
        let pairs = singular_pairs(&m, 1e-9);
        assert_eq!(pairs.len(), 2);
        for (u, v) in &pairs {
            let sigma = (&m * v).norm();
            assert_abs_diff_eq!((&m * v - u * C64::new(sigma, 0.0)).norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!((m.adjoint() * u - v * C64::new(sigma, 0.0)).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
