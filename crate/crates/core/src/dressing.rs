//! Operator-valued spin rotations and the dressed operator family
//! `W·A·W†` built from a dressing `W = (isometry)·e^{−iσ₂Θ/2}`.

use crate::blocks::{block2, tensor};
use crate::error::{OpError, Result};
use crate::fock::{ladder_lowering, number};
use crate::operator::{dress, Operator};
use crate::pauli::{pauli, PauliAxis};
use crate::spectral::diag_function;
use crate::space::{CompositeSpace, Space};
use crate::states::LabeledState;

/// `e^{−iσ₂⊗Θ/2} = [[cos Θ/2, −sin Θ/2], [sin Θ/2, cos Θ/2]]` for a
/// diagonal angle operator Θ on a mode space.
pub fn spin_rotation(angle: &Operator) -> Result<Operator> {
    if !matches!(angle.space(), Space::Mode(_)) {
        return Err(OpError::WrongSpace {
            label: angle.label().to_string(),
            expected: "a mode space",
            found: angle.space(),
        });
    }
    let c = diag_function(angle, |t| (t / 2.0).cos())?;
    let s = diag_function(angle, |t| (t / 2.0).sin())?;
    Ok(block2(&c, &s.scale_re(-1.0), &s, &c)?.with_label(format!("R({})", angle.label())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    DiracOscillator,
    JaynesCummings,
}

/// Conserved quantities and shift operators obtained by dressing the bare
/// `N`, `σ₃`, `a`, `a†`, `σ±` with one `W`, together with a complete
/// labeled eigenbasis of the model Hamiltonian.
#[derive(Clone, Debug)]
pub struct DressedFamily {
    pub model: Model,
    pub space: CompositeSpace,
    pub dressing: Operator,
    pub number: Operator,
    pub sigma3: Operator,
    pub lower: Operator,
    pub raise: Operator,
    pub sigma_plus: Operator,
    pub sigma_minus: Operator,
    pub states: Vec<LabeledState>,
}

/// Bare operators on the composite space: `(1⊗N, σ₃⊗1, 1⊗a, 1⊗a†, σ₊⊗1, σ₋⊗1)`.
pub fn bare_set(space: CompositeSpace) -> Result<[Operator; 6]> {
    let f = space.fock();
    let one_f = Operator::identity(Space::fock(f));
    let one_s = Operator::identity(Space::Spin);
    let a = ladder_lowering(f);
    Ok([
        tensor(&one_s, &number(f))?.with_label("N"),
        tensor(&pauli(PauliAxis::Z), &one_f)?.with_label("σ₃"),
        tensor(&one_s, &a)?.with_label("a"),
        tensor(&one_s, &a.adjoint())?.with_label("a†"),
        tensor(&pauli(PauliAxis::Plus), &one_f)?.with_label("σ₊"),
        tensor(&pauli(PauliAxis::Minus), &one_f)?.with_label("σ₋"),
    ])
}

impl DressedFamily {
    pub fn from_dressing(
        model: Model,
        space: CompositeSpace,
        dressing: Operator,
        states: Vec<LabeledState>,
    ) -> Result<Self> {
        let [n, s3, a, ad, sp, sm] = bare_set(space)?;
        let d = |op: &Operator, label: &str| dress(&dressing, op).map(|o| o.with_label(label));
        Ok(Self {
            model,
            space,
            number: d(&n, "𝒩")?,
            sigma3: d(&s3, "Σ₃")?,
            lower: d(&a, "b")?,
            raise: d(&ad, "b†")?,
            sigma_plus: d(&sp, "Σ₊")?,
            sigma_minus: d(&sm, "Σ₋")?,
            dressing,
            states,
        })
    }

    /// Eigenstate `(branch, n)` of the analytic family, if present.
    pub fn eigenstate(&self, branch: crate::states::Branch, n: usize) -> Option<&LabeledState> {
        self.states.iter().find(|s| s.eigen_n() == Some((branch, n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::number;
    use crate::space::FockSpace;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_angle_is_identity() {
        let f = FockSpace::new(4).unwrap();
        let zero = Operator::zero(Space::fock(f));
        let r = spin_rotation(&zero).unwrap();
        assert_eq!(r.matrix(), Operator::identity(r.space()).matrix());
    }

    #[test]
    fn rotation_is_unitary() {
        let f = FockSpace::new(6).unwrap();
        let theta = diag_function(&number(f), |n| (0.7 * n).sqrt().atan()).unwrap();
        let r = spin_rotation(&theta).unwrap();
        let rr = r.mul(&r.adjoint()).unwrap();
        let dev = rr.sub(&Operator::identity(r.space())).unwrap().frobenius_norm();
        assert_abs_diff_eq!(dev, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_non_diagonal_angle() {
        let f = FockSpace::new(3).unwrap();
        let a = ladder_lowering(f);
        assert!(matches!(spin_rotation(&a), Err(OpError::NotDiagonal { .. })));
        assert!(spin_rotation(&pauli(PauliAxis::Z)).is_err());
    }
}
