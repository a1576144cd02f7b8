//! Assembly of spin ⊗ mode operators, either from four mode blocks or as a
//! Kronecker product.

use crate::error::{OpError, Result};
use crate::operator::{Matrix, Operator};
use crate::space::{ModeSpace, Space};

fn mode_of(op: &Operator) -> Result<ModeSpace> {
    match op.space() {
        Space::Mode(m) => Ok(m),
        other => Err(OpError::WrongSpace {
            label: op.label().to_string(),
            expected: "a mode (Fock or lattice) space",
            found: other,
        }),
    }
}

/// `[[A, B], [C, D]]` with `A` acting within the spin-up block.
pub fn block2(a: &Operator, b: &Operator, c: &Operator, d: &Operator) -> Result<Operator> {
    let mode = mode_of(a)?;
    for op in [b, c, d] {
        let m = mode_of(op)?;
        if m != mode {
            return Err(OpError::SpaceMismatch {
                left: a.space(),
                right: op.space(),
            });
        }
    }
    let n = mode.dim();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a.matrix());
    m.view_mut((0, n), (n, n)).copy_from(b.matrix());
    m.view_mut((n, 0), (n, n)).copy_from(c.matrix());
    m.view_mut((n, n), (n, n)).copy_from(d.matrix());
    Ok(Operator::from_parts(
        Space::Composite(mode),
        m,
        format!("[[{}, {}], [{}, {}]]", a.label(), b.label(), c.label(), d.label()),
    ))
}

/// Diagonal blocks only.
pub fn block_diag(upper: &Operator, lower: &Operator) -> Result<Operator> {
    let zero = Operator::zero(upper.space());
    block2(upper, &zero, &zero, lower)
}

/// Kronecker product `spin_op ⊗ mode_op`, spin index major.
pub fn tensor(spin_op: &Operator, mode_op: &Operator) -> Result<Operator> {
    if spin_op.space() != Space::Spin {
        return Err(OpError::WrongSpace {
            label: spin_op.label().to_string(),
            expected: "the spin space",
            found: spin_op.space(),
        });
    }
    let mode = mode_of(mode_op)?;
    Ok(Operator::from_parts(
        Space::Composite(mode),
        spin_op.matrix().kronecker(mode_op.matrix()),
        format!("{}⊗{}", spin_op.label(), mode_op.label()),
    ))
}

/// Extract the `(row_spin, col_spin)` block of a composite operator.
pub fn block_of(op: &Operator, row: usize, col: usize) -> Result<Operator> {
    let mode = match op.space() {
        Space::Composite(m) => m,
        other => {
            return Err(OpError::WrongSpace {
                label: op.label().to_string(),
                expected: "a composite space",
                found: other,
            })
        }
    };
    let n = mode.dim();
    let m = op.matrix().view((row * n, col * n), (n, n)).clone_owned();
    Ok(Operator::from_parts(
        Space::Mode(mode),
        m,
        format!("{}[{row}{col}]", op.label()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ladder_lowering, number};
    use crate::operator::ONE;
    use crate::pauli::{pauli, PauliAxis};
    use crate::space::FockSpace;
    use approx::assert_abs_diff_eq;

    fn fock(n: usize) -> FockSpace {
        FockSpace::new(n).unwrap()
    }

    #[test]
    fn identity_blocks_give_identity() {
        let s = Space::fock(fock(4));
        let one = Operator::identity(s);
        let zero = Operator::zero(s);
        let id = block2(&one, &zero, &zero, &one).unwrap();
        assert_eq!(id.matrix(), Operator::identity(id.space()).matrix());
    }

    #[test]
    fn raising_block_matches_tensor() {
        let f = fock(4);
        let a = ladder_lowering(f);
        let zero = Operator::zero(a.space());
        let b = block2(&zero, &a, &zero, &zero).unwrap();
        let t = tensor(&pauli(PauliAxis::Plus), &a).unwrap();
        assert_eq!(b.matrix(), t.matrix());
    }

    #[test]
    fn sigma_z_tensor_identity() {
        let f = fock(3);
        let t = tensor(&pauli(PauliAxis::Z), &Operator::identity(Space::fock(f))).unwrap();
        let d: Vec<f64> = t.diagonal().iter().map(|c| c.re).collect();
        assert_eq!(d, vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
        let tn = tensor(&Operator::identity(Space::Spin), &number(f)).unwrap();
        let bn = block_diag(&number(f), &number(f)).unwrap();
        assert_eq!(tn.matrix(), bn.matrix());
    }

    #[test]
    fn block_entry_convention() {
        // lower-left block √2·a: ⟨↓,0| · |↑,1⟩ = √2
        let f = fock(3);
        let a = ladder_lowering(f);
        let m = Operator::identity(a.space());
        let h = block2(&m, &a.adjoint().scale_re(2f64.sqrt()), &a.scale_re(2f64.sqrt()), &m.scale_re(-1.0)).unwrap();
        assert_abs_diff_eq!(h.entry(4, 1).re, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn wrong_tags_rejected() {
        let f = fock(3);
        let a = ladder_lowering(f);
        assert!(tensor(&a, &a).is_err());
        assert!(tensor(&pauli(PauliAxis::X), &pauli(PauliAxis::X)).is_err());
        let other = ladder_lowering(fock(4));
        assert!(block2(&a, &a, &a, &other).is_err());
    }

    #[test]
    fn block_extraction_roundtrip() {
        let f = fock(2);
        let a = ladder_lowering(f);
        let n = number(f);
        let h = block2(&n, &a, &a.adjoint(), &n.scale(ONE * 2.0)).unwrap();
        assert_eq!(block_of(&h, 0, 1).unwrap().matrix(), a.matrix());
        assert_eq!(block_of(&h, 1, 1).unwrap().matrix(), n.scale_re(2.0).matrix());
    }
}
