//! Truncated Hilbert spaces and the fixed basis ordering used everywhere.
//!
//! Composite (spin ⊗ mode) states are indexed spin-major with the spin-up
//! block first: `index = s * mode_dim + n`, `s = 0` for `|↑⟩` (the `+`
//! eigenstate of σ₃) and `s = 1` for `|↓⟩`. A 2×2 block matrix written with
//! operator-valued entries reads off directly in this ordering.

use std::fmt;

use crate::error::{OpError, Result};

/// Bosonic mode truncated at occupation `n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockSpace {
    n_max: usize,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(OpError::InvalidSpace(format!(
                "Fock space needs n_max >= 1, got {n_max}"
            )));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Finite window `l_min..=l_max` of angular-momentum quantum numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AngularLattice {
    l_min: i64,
    l_max: i64,
}

impl AngularLattice {
    pub fn new(l_min: i64, l_max: i64) -> Result<Self> {
        if l_max <= l_min {
            return Err(OpError::InvalidSpace(format!(
                "angular lattice needs l_max > l_min, got [{l_min}, {l_max}]"
            )));
        }
        Ok(Self { l_min, l_max })
    }

    pub fn l_min(&self) -> i64 {
        self.l_min
    }

    pub fn l_max(&self) -> i64 {
        self.l_max
    }

    pub fn dim(&self) -> usize {
        (self.l_max - self.l_min + 1) as usize
    }

    /// Position of `l` in the lattice basis.
    pub fn index_of(&self, l: i64) -> Option<usize> {
        (self.l_min..=self.l_max)
            .contains(&l)
            .then(|| (l - self.l_min) as usize)
    }

    pub fn value_at(&self, index: usize) -> i64 {
        self.l_min + index as i64
    }
}

/// The orbital factor of a composite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeSpace {
    Fock(FockSpace),
    Lattice(AngularLattice),
}

impl ModeSpace {
    pub fn dim(&self) -> usize {
        match self {
            ModeSpace::Fock(f) => f.dim(),
            ModeSpace::Lattice(l) => l.dim(),
        }
    }
}

/// Spin-½ ⊗ truncated bosonic mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CompositeSpace {
    fock: FockSpace,
}

impl CompositeSpace {
    pub fn new(fock: FockSpace) -> Self {
        Self { fock }
    }

    pub fn with_n_max(n_max: usize) -> Result<Self> {
        FockSpace::new(n_max).map(Self::new)
    }

    pub fn fock(&self) -> FockSpace {
        self.fock
    }

    pub fn n_max(&self) -> usize {
        self.fock.n_max()
    }

    pub fn dim(&self) -> usize {
        2 * self.fock.dim()
    }

    pub fn index(&self, spin: Spin, n: usize) -> usize {
        debug_assert!(n <= self.n_max());
        spin.block() * self.fock.dim() + n
    }

    /// Inverse of [`CompositeSpace::index`].
    pub fn spin_and_n(&self, index: usize) -> (Spin, usize) {
        let d = self.fock.dim();
        let spin = if index < d { Spin::Up } else { Spin::Down };
        (spin, index % d)
    }

    pub fn space(&self) -> Space {
        Space::Composite(ModeSpace::Fock(self.fock))
    }
}

/// Spin projection; `Up` is the `+1` eigenstate of σ₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn block(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "↑",
            Spin::Down => "↓",
        })
    }
}

/// Tag carried by every operator; binary operations require equal tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Spin,
    Mode(ModeSpace),
    Composite(ModeSpace),
}

impl Space {
    pub fn fock(fock: FockSpace) -> Self {
        Space::Mode(ModeSpace::Fock(fock))
    }

    pub fn lattice(lattice: AngularLattice) -> Self {
        Space::Mode(ModeSpace::Lattice(lattice))
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Spin => 2,
            Space::Mode(m) => m.dim(),
            Space::Composite(m) => 2 * m.dim(),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Spin => write!(f, "spin"),
            Space::Mode(ModeSpace::Fock(s)) => write!(f, "fock(n_max={})", s.n_max()),
            Space::Mode(ModeSpace::Lattice(l)) => {
                write!(f, "lattice[{}, {}]", l.l_min(), l.l_max())
            }
            Space::Composite(ModeSpace::Fock(s)) => {
                write!(f, "spin⊗fock(n_max={})", s.n_max())
            }
            Space::Composite(ModeSpace::Lattice(l)) => {
                write!(f, "spin⊗lattice[{}, {}]", l.l_min(), l.l_max())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_level_fock_space_rejected() {
        assert!(FockSpace::new(0).is_err());
        assert_eq!(FockSpace::new(1).unwrap().dim(), 2);
    }

    #[test]
    fn composite_ordering_is_spin_major() {
        let c = CompositeSpace::with_n_max(4).unwrap();
        assert_eq!(c.dim(), 10);
        assert_eq!(c.index(Spin::Up, 3), 3);
        assert_eq!(c.index(Spin::Down, 0), 5);
        for i in 0..c.dim() {
            let (s, n) = c.spin_and_n(i);
            assert_eq!(c.index(s, n), i);
        }
    }

    #[test]
    fn lattice_indexing() {
        let l = AngularLattice::new(-3, 2).unwrap();
        assert_eq!(l.dim(), 6);
        assert_eq!(l.index_of(-3), Some(0));
        assert_eq!(l.index_of(3), None);
        assert_eq!(l.value_at(5), 2);
        assert!(AngularLattice::new(1, 1).is_err());
    }
}
