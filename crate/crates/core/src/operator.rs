//! Dense complex operators tagged with the space they act on.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{OpError, Result};
use crate::space::Space;

pub type Matrix = DMatrix<C64>;
pub type State = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A dense matrix on a tagged space. Immutable once built; every
/// combinator returns a new operator.
#[derive(Clone, PartialEq)]
pub struct Operator {
    space: Space,
    matrix: Matrix,
    label: String,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("label", &self.label)
            .field("space", &self.space)
            .finish_non_exhaustive()
    }
}

impl Operator {
    pub fn new(space: Space, matrix: Matrix, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(OpError::InvalidSpace(format!(
                "`{label}` is {}x{}, {space} has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            space,
            matrix,
            label,
        })
    }

    pub(crate) fn from_parts(space: Space, matrix: Matrix, label: impl Into<String>) -> Self {
        debug_assert_eq!(matrix.nrows(), space.dim());
        Self {
            space,
            matrix,
            label: label.into(),
        }
    }

    pub fn identity(space: Space) -> Self {
        let d = space.dim();
        Self::from_parts(space, Matrix::identity(d, d), "1")
    }

    pub fn zero(space: Space) -> Self {
        let d = space.dim();
        Self::from_parts(space, Matrix::zeros(d, d), "0")
    }

    /// Diagonal operator from real entries.
    pub fn diagonal_from(space: Space, entries: &[f64], label: impl Into<String>) -> Result<Self> {
        if entries.len() != space.dim() {
            return Err(OpError::InvalidSpace(format!(
                "{} diagonal entries for {space}",
                entries.len()
            )));
        }
        let diag = State::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)));
        Ok(Self::from_parts(space, Matrix::from_diagonal(&diag), label))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    fn check_same(&self, other: &Operator) -> Result<()> {
        if self.space != other.space {
            return Err(OpError::SpaceMismatch {
                left: self.space,
                right: other.space,
            });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Operator {
        Self::from_parts(self.space, self.matrix.adjoint(), format!("{}†", self.label))
    }

    pub fn mul(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same(rhs)?;
        Ok(Self::from_parts(
            self.space,
            &self.matrix * &rhs.matrix,
            format!("{}·{}", self.label, rhs.label),
        ))
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same(rhs)?;
        Ok(Self::from_parts(
            self.space,
            &self.matrix + &rhs.matrix,
            format!("{} + {}", self.label, rhs.label),
        ))
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same(rhs)?;
        Ok(Self::from_parts(
            self.space,
            &self.matrix - &rhs.matrix,
            format!("{} − {}", self.label, rhs.label),
        ))
    }

    pub fn scale(&self, c: C64) -> Operator {
        Self::from_parts(self.space, &self.matrix * c, format!("({c})·{}", self.label))
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(C64::new(c, 0.0))
    }

    /// `self + c·1`.
    pub fn shift(&self, c: f64) -> Operator {
        let mut m = self.matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += c;
        }
        Self::from_parts(self.space, m, format!("{} + {c}", self.label))
    }

    pub fn apply(&self, state: &State) -> Result<State> {
        if state.len() != self.dim() {
            return Err(OpError::InvalidSpace(format!(
                "state of length {} for `{}` on {}",
                state.len(),
                self.label,
                self.space
            )));
        }
        Ok(&self.matrix * state)
    }

    /// ⟨bra|A|ket⟩.
    pub fn element(&self, bra: &State, ket: &State) -> Result<C64> {
        Ok(bra.dotc(&self.apply(ket)?))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Largest magnitude of an entry of A − A†.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

/// AB − BA.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    let ab = a.mul(b)?;
    let ba = b.mul(a)?;
    Ok(ab.sub(&ba)?.with_label(format!("[{}, {}]", a.label, b.label)))
}

/// W·A·W†.
pub fn dress(w: &Operator, a: &Operator) -> Result<Operator> {
    let wa = w.mul(a)?;
    Ok(wa
        .mul(&w.adjoint())?
        .with_label(format!("{}·{}·{}†", w.label, a.label, w.label)))
}

/// Basis vector `e_index` of length `dim`.
pub fn basis_state(dim: usize, index: usize) -> State {
    let mut v = State::zeros(dim);
    v[index] = ONE;
    v
}

/// |v⟩⟨v| for a state v.
pub fn outer(space: Space, v: &State, label: impl Into<String>) -> Result<Operator> {
    Operator::new(space, v * v.adjoint(), label)
}
