use num_complex::Complex64 as C64;

use crate::operator::{Matrix, Operator, I, ONE, ZERO};
use crate::space::Space;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    /// σ₊ = (σ₁ + iσ₂)/2, maps |↓⟩ to |↑⟩.
    Plus,
    /// σ₋ = (σ₁ − iσ₂)/2.
    Minus,
}

pub fn pauli(axis: PauliAxis) -> Operator {
    let (m, label): ([C64; 4], &str) = match axis {
        PauliAxis::X => ([ZERO, ONE, ONE, ZERO], "σ₁"),
        PauliAxis::Y => ([ZERO, -I, I, ZERO], "σ₂"),
        PauliAxis::Z => ([ONE, ZERO, ZERO, -ONE], "σ₃"),
        PauliAxis::Plus => ([ZERO, ONE, ZERO, ZERO], "σ₊"),
        PauliAxis::Minus => ([ZERO, ZERO, ONE, ZERO], "σ₋"),
    };
    Operator::from_parts(Space::Spin, Matrix::from_row_slice(2, 2, &m), label)
}
