//! Ladder, number, position and momentum operators on a truncated mode.
//!
//! Matrices are truncated entrywise at `n_max`; nothing is renormalized at
//! the edge, so `[a, a†] = 1` fails only in the `(n_max, n_max)` entry.

use num_complex::Complex64 as C64;

use crate::error::{OpError, Result};
use crate::operator::{Matrix, Operator, I};
use crate::space::{FockSpace, Space};

/// `a` with ⟨n−1|a|n⟩ = √n.
pub fn ladder_lowering(space: FockSpace) -> Operator {
    let d = space.dim();
    let mut m = Matrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::from_parts(Space::fock(space), m, "a")
}

pub fn ladder_raising(space: FockSpace) -> Operator {
    ladder_lowering(space).adjoint().with_label("a†")
}

/// `N = diag(0, 1, …, n_max)`.
pub fn number(space: FockSpace) -> Operator {
    let entries: Vec<f64> = (0..space.dim()).map(|n| n as f64).collect();
    Operator::diagonal_from(Space::fock(space), &entries, "N").expect("dimension matches")
}

/// Position and momentum of an oscillator with mass `m` and frequency
/// `omega`: `x = (a + a†)/√(2mω)`, `p = i√(mω/2)(a† − a)`.
pub fn position_momentum(space: FockSpace, m: f64, omega: f64) -> Result<(Operator, Operator)> {
    if !(m > 0.0 && omega > 0.0 && m.is_finite() && omega.is_finite()) {
        return Err(OpError::InvalidParams(format!(
            "position/momentum need m > 0 and ω > 0, got m = {m}, ω = {omega}"
        )));
    }
    let a = ladder_lowering(space);
    let ad = a.adjoint();
    let x = a.add(&ad)?.scale_re(1.0 / (2.0 * m * omega).sqrt()).with_label("x");
    let p = ad
        .sub(&a)?
        .scale(I * (m * omega / 2.0).sqrt())
        .with_label("p");
    Ok((x, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{basis_state, commutator};
    use approx::assert_abs_diff_eq;

    fn space(n: usize) -> FockSpace {
        FockSpace::new(n).unwrap()
    }

    #[test]
    fn lowering_entries() {
        let a = ladder_lowering(space(5));
        assert_abs_diff_eq!(a.entry(0, 1).re, 1.0);
        assert_abs_diff_eq!(a.entry(1, 2).re, 2f64.sqrt(), epsilon = 1e-15);
        let vac = a.apply(&basis_state(6, 0)).unwrap();
        assert_eq!(vac.norm(), 0.0);
        let ad = ladder_raising(space(5));
        assert_abs_diff_eq!(ad.entry(2, 1).re, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn number_is_a_dagger_a() {
        let s = space(7);
        let a = ladder_lowering(s);
        let n = number(s);
        let ada = a.adjoint().mul(&a).unwrap();
        assert!(n.sub(&ada).unwrap().frobenius_norm() < 1e-12);
        assert_eq!(n.entry(3, 3).re, 3.0);
        assert_eq!(n.entry(2, 3).norm(), 0.0);
    }

    #[test]
    fn canonical_commutator_fails_only_at_edge() {
        let s = space(9);
        let a = ladder_lowering(s);
        let c = commutator(&a, &a.adjoint()).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let expected = match (i == j, i) {
                    (true, 9) => -9.0,
                    (true, _) => 1.0,
                    _ => 0.0,
                };
                assert_abs_diff_eq!(c.entry(i, j).re, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(c.entry(i, j).im, 0.0);
            }
        }
    }

    #[test]
    fn position_momentum_entries_and_hermiticity() {
        let (x, p) = position_momentum(space(6), 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(x.entry(0, 1).re, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.entry(1, 0).im, 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(x.is_hermitian(1e-15));
        assert!(p.is_hermitian(1e-15));
    }

    #[test]
    fn canonical_xp_on_interior() {
        let s = space(8);
        let (x, p) = position_momentum(s, 1.3, 0.7).unwrap();
        let c = commutator(&x, &p).unwrap();
        for n in 0..8 {
            assert_abs_diff_eq!(c.entry(n, n).re, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(c.entry(n, n).im, 1.0, epsilon = 1e-12);
        }
        assert!((c.entry(8, 8).im - 1.0).abs() > 1.0);
    }

    #[test]
    fn position_momentum_rejects_nonpositive() {
        assert!(position_momentum(space(3), 1.0, 0.0).is_err());
        assert!(position_momentum(space(3), -1.0, 1.0).is_err());
    }
}
