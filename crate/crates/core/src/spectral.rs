//! Functions of diagonal operators and the dense Hermitian eigensolver.

use num_complex::Complex64 as C64;

use crate::error::{OpError, Result};
use crate::operator::{Matrix, Operator, State};

/// Off-diagonal magnitude tolerated by [`diag_function`].
pub const DIAGONAL_TOL: f64 = 1e-12;

/// Hermiticity tolerance of [`hermitian_eigensystem`].
pub const HERMITIAN_TOL: f64 = 1e-12;

fn real_diagonal(d: &Operator) -> Result<Vec<f64>> {
    let off = d.max_off_diagonal();
    if off > DIAGONAL_TOL {
        return Err(OpError::NotDiagonal {
            label: d.label().to_string(),
            max_off: off,
        });
    }
    d.diagonal()
        .into_iter()
        .enumerate()
        .map(|(i, z)| {
            if z.im.abs() > DIAGONAL_TOL {
                Err(OpError::DomainError { index: i, value: z.im })
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

/// `f(D)` for a diagonal `D`, applied entrywise to the (real) diagonal.
pub fn diag_function(d: &Operator, f: impl Fn(f64) -> f64) -> Result<Operator> {
    let entries = real_diagonal(d)?
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let y = f(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(OpError::DomainError { index: i, value: x })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Operator::diagonal_from(d.space(), &entries, format!("f({})", d.label()))
}

/// Moore–Penrose `D^{-1/2}`: `1/√d` on the support, `0` on the kernel.
pub fn pinv_sqrt_inverse(d: &Operator) -> Result<Operator> {
    let diag = real_diagonal(d)?;
    if let Some((i, &v)) = diag.iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(OpError::NegativeEntry { index: i, value: v });
    }
    let entries: Vec<f64> = diag
        .iter()
        .map(|&v| if v > 0.0 { 1.0 / v.sqrt() } else { 0.0 })
        .collect();
    Operator::diagonal_from(d.space(), &entries, format!("{}^(-1/2)", d.label()))
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: State,
}

/// Full eigendecomposition of a Hermitian operator, eigenvalues ascending.
pub fn hermitian_eigensystem(a: &Operator) -> Result<Vec<Eigenpair>> {
    let dev = a.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(OpError::NotHermitian {
            label: a.label().to_string(),
            deviation: dev,
        });
    }
    Ok(eigh(a.matrix()))
}

/// Eigendecomposition without the Hermiticity gate; the input is
/// symmetrized first.
///
/// The QR iteration deflates relative to the diagonal, so a matrix with a
/// (near-)zero diagonal can drive tiny off-diagonal entries into underflow
/// and return NaN. Solving the positive definite `A + c·1` with
/// `c = 2‖A‖_F + 1` keeps every diagonal entry of order `c`.
pub(crate) fn eigh(m: &Matrix) -> Vec<Eigenpair> {
    let sym: Matrix = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let shift = 2.0 * sym.norm() + 1.0;
    let mut shifted = sym;
    for k in 0..shifted.nrows() {
        shifted[(k, k)] += shift;
    }
    let eig = shifted.symmetric_eigen();
    let mut pairs: Vec<Eigenpair> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(&value, v)| Eigenpair {
            value: value - shift,
            vector: v.clone_owned(),
        })
        .collect();
    pairs.sort_by(|x, y| x.value.total_cmp(&y.value));
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder_lowering, number};
    use crate::operator::basis_state;
    use crate::pauli::{pauli, PauliAxis};
    use crate::space::{FockSpace, Space};
    use approx::assert_abs_diff_eq;

    fn fock(n: usize) -> FockSpace {
        FockSpace::new(n).unwrap()
    }

    #[test]
    fn sqrt_and_identity_of_number() {
        let n = number(fock(6));
        assert_abs_diff_eq!(diag_function(&n, f64::sqrt).unwrap().entry(4, 4).re, 2.0);
        assert_eq!(diag_function(&n, |x| x).unwrap().matrix(), n.matrix());
        let t = diag_function(&n, |x| (2.0 * x).sqrt().atan()).unwrap();
        assert_abs_diff_eq!(t.entry(1, 1).re, 0.955_316_618_124_509_3, epsilon = 1e-12);
    }

    #[test]
    fn non_diagonal_and_domain_errors() {
        let a = ladder_lowering(fock(3));
        assert!(matches!(diag_function(&a, |x| x), Err(OpError::NotDiagonal { .. })));
        let n = number(fock(3));
        assert!(matches!(diag_function(&n, |x| 1.0 / x), Err(OpError::DomainError { index: 0, .. })));
        let neg = n.scale_re(-1.0);
        assert!(matches!(pinv_sqrt_inverse(&neg), Err(OpError::NegativeEntry { .. })));
    }

    #[test]
    fn pinv_sqrt_kernel_convention() {
        let s = fock(6);
        let n = number(s);
        let p = pinv_sqrt_inverse(&n).unwrap();
        assert_abs_diff_eq!(p.entry(4, 4).re, 0.5);
        assert_eq!(p.entry(0, 0).re, 0.0);
        // a·N^{-1/2} is a unit shift down
        let shift = ladder_lowering(s).mul(&p).unwrap();
        for k in 1..=6 {
            let out = shift.apply(&basis_state(7, k)).unwrap();
            assert_abs_diff_eq!((out - basis_state(7, k - 1)).norm(), 0.0, epsilon = 1e-14);
        }
        // D·f(D)² = projector onto the support
        let proj = n.mul(&p).unwrap().mul(&p).unwrap();
        let mut expect = vec![1.0; 7];
        expect[0] = 0.0;
        let expect = Operator::diagonal_from(Space::fock(s), &expect, "P").unwrap();
        assert_abs_diff_eq!(proj.sub(&expect).unwrap().frobenius_norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn eigensystem_of_simple_operators() {
        let z = hermitian_eigensystem(&pauli(PauliAxis::Z)).unwrap();
        assert_abs_diff_eq!(z[0].value, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z[1].value, 1.0, epsilon = 1e-14);
        let n = hermitian_eigensystem(&number(fock(5))).unwrap();
        for (k, e) in n.iter().enumerate() {
            assert_abs_diff_eq!(e.value, k as f64, epsilon = 1e-12);
        }
        let a = ladder_lowering(fock(3));
        assert!(matches!(hermitian_eigensystem(&a), Err(OpError::NotHermitian { .. })));
    }
}
