//! Labeled basis states used to name defect supports and matrix elements.

use std::fmt;

use crate::operator::{basis_state, State};
use crate::space::{AngularLattice, CompositeSpace, Spin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    /// Spin factor `|±⟩` the branch is built from.
    pub fn spin(self) -> Spin {
        match self {
            Branch::Plus => Spin::Up,
            Branch::Minus => Spin::Down,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    /// Member of the analytic eigenstate family.
    Eigen { branch: Branch, n: usize },
    /// Eigenstate outside the range of the dressing (JC `|↓,0⟩`).
    Detached,
    /// Eigenstate produced only by truncation.
    Edge,
    /// Plain product basis vector `|s, n⟩` (or `|s, l⟩` on a lattice).
    Bare { spin: Spin, index: i64 },
}

#[derive(Clone, Debug)]
pub struct LabeledState {
    pub label: String,
    pub kind: StateKind,
    pub vector: State,
    pub energy: Option<f64>,
}

impl LabeledState {
    pub fn eigen_n(&self) -> Option<(Branch, usize)> {
        match self.kind {
            StateKind::Eigen { branch, n } => Some((branch, n)),
            _ => None,
        }
    }
}

pub fn eigen_label(prefix: &str, branch: Branch, n: usize) -> String {
    format!("{prefix}{branch}[{n}]")
}

pub fn bare_label(spin: Spin, n: i64) -> String {
    let s = match spin {
        Spin::Up => "up",
        Spin::Down => "dn",
    };
    format!("|{s},{n}>")
}

/// Product basis of a composite Fock space, in storage order.
pub fn bare_basis(space: CompositeSpace) -> Vec<LabeledState> {
    (0..space.dim())
        .map(|i| {
            let (spin, n) = space.spin_and_n(i);
            LabeledState {
                label: bare_label(spin, n as i64),
                kind: StateKind::Bare {
                    spin,
                    index: n as i64,
                },
                vector: basis_state(space.dim(), i),
                energy: None,
            }
        })
        .collect()
}

/// Product basis of spin ⊗ lattice, in storage order.
pub fn lattice_basis(lattice: AngularLattice) -> Vec<LabeledState> {
    let d = lattice.dim();
    (0..2 * d)
        .map(|i| {
            let spin = if i < d { Spin::Up } else { Spin::Down };
            let l = lattice.value_at(i % d);
            LabeledState {
                label: bare_label(spin, l),
                kind: StateKind::Bare { spin, index: l },
                vector: basis_state(2 * d, i),
                energy: None,
            }
        })
        .collect()
}
