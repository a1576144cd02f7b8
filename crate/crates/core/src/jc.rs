//! Jaynes–Cummings model: Hamiltonian, the isometric dressing `𝒱`, mixing
//! angle `φ_N`, closed-form spectrum, and the detached ground state.
//!
//! `𝒱 = diag(1, N^{-1/2}·a†)` raises the lower block by one quantum, so
//! `|↓,0⟩` lies outside its range. That state is an exact eigenstate with
//! energy `−Ω/2` and is carried as a separate `detached` entry.

use num_complex::Complex64 as C64;

use crate::blocks::block2;
use crate::dressing::{spin_rotation, DressedFamily, Model};
use crate::error::{OpError, Result};
use crate::fock::{ladder_lowering, number};
use crate::guard::GuardBand;
use crate::operator::{basis_state, Operator, State};
use crate::spectral::{hermitian_eigensystem, pinv_sqrt_inverse};
use crate::spectrum::{compare_spectra, AnalyticLevel, RowKind, SpectrumCheck};
use crate::space::{CompositeSpace, FockSpace, Space, Spin};
use crate::states::{bare_label, eigen_label, Branch, LabeledState, StateKind};

/// Tolerance for locating the detached level in the dense spectrum.
pub const DETACHED_TOL: f64 = 1e-10;

/// Field frequency ω, level splitting Ω and coupling J.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JCParams {
    omega: f64,
    splitting: f64,
    coupling: f64,
}

impl JCParams {
    pub fn new(omega: f64, splitting: f64, coupling: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(OpError::InvalidParams(format!(
                "field frequency must be positive, got {omega}"
            )));
        }
        if !splitting.is_finite() || !coupling.is_finite() {
            return Err(OpError::InvalidParams(
                "splitting and coupling must be finite".into(),
            ));
        }
        Ok(Self {
            omega,
            splitting,
            coupling,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn splitting(&self) -> f64 {
        self.splitting
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn detuning(&self) -> f64 {
        self.splitting - self.omega
    }
}

#[derive(Clone, Debug)]
pub struct JCSpectrumEntry {
    pub branch: Branch,
    pub n: usize,
    pub energy: f64,
    pub vector: State,
    pub detached: bool,
}

/// `[[ωN + Ω/2, J·a], [J·a†, ωN − Ω/2]]`.
pub fn jc_hamiltonian(params: JCParams, space: CompositeSpace) -> Operator {
    let f = space.fock();
    let a = ladder_lowering(f);
    let wn = number(f).scale_re(params.omega);
    let half = params.splitting / 2.0;
    block2(
        &wn.shift(half),
        &a.scale_re(params.coupling),
        &a.adjoint().scale_re(params.coupling),
        &wn.shift(-half),
    )
    .expect("blocks share one Fock space")
    .with_label("H_JC")
}

/// `𝒱 = [[1, 0], [0, N^{-1/2}·a†]]`.
pub fn jc_unitary(space: CompositeSpace) -> Operator {
    let f = space.fock();
    let one = Operator::identity(Space::fock(f));
    let zero = Operator::zero(Space::fock(f));
    let shift = pinv_sqrt_inverse(&number(f))
        .expect("N is diagonal and nonnegative")
        .mul(&ladder_lowering(f).adjoint())
        .expect("same space");
    block2(&one, &zero, &zero, &shift)
        .expect("blocks share one Fock space")
        .with_label("𝒱")
}

fn phi_n(params: JCParams, n: usize) -> f64 {
    // +0.0 keeps atan2 on the (0, π] side when J = 0
    let y = 2.0 * params.coupling * ((n + 1) as f64).sqrt() + 0.0;
    y.atan2(params.detuning())
}

/// φ_N with `φₙ = atan2(2J√(n+1), Ω − ω)`: in (0, π) for J > 0 and in
/// (−π, 0) for J < 0, continuous through resonance.
pub fn jc_phi(params: JCParams, space: FockSpace) -> Result<Operator> {
    if params.coupling == 0.0 && params.detuning() == 0.0 {
        return Err(OpError::ZeroCoupling);
    }
    let entries: Vec<f64> = (0..space.dim()).map(|n| phi_n(params, n)).collect();
    Ok(Operator::diagonal_from(Space::fock(space), &entries, "φ_N")?)
}

/// `ω(n + 1/2) ± √(J²(n+1) + (Ω−ω)²/4)`.
pub fn jc_spectrum_analytic(params: JCParams, n: usize, branch: Branch) -> f64 {
    let j = params.coupling;
    let half_detuning = params.detuning() / 2.0;
    params.omega * (n as f64 + 0.5)
        + branch.sign() * (j * j * (n + 1) as f64 + half_detuning * half_detuning).sqrt()
}

/// `W_JC = 𝒱·e^{−iσ₂φ_N/2}`.
pub fn jc_dressing(params: JCParams, space: CompositeSpace) -> Result<Operator> {
    let r = spin_rotation(&jc_phi(params, space.fock())?)?;
    Ok(jc_unitary(space).mul(&r)?.with_label("W_JC"))
}

fn psi(params: JCParams, space: CompositeSpace, n: usize, branch: Branch) -> State {
    let half = phi_n(params, n) / 2.0;
    let (c, s) = (half.cos(), half.sin());
    let (up, down) = match branch {
        Branch::Plus => (c, s),
        Branch::Minus => (-s, c),
    };
    let mut v = basis_state(space.dim(), space.index(Spin::Up, n)) * C64::new(up, 0.0);
    v[space.index(Spin::Down, n + 1)] += down;
    v
}

/// `|ψ±ₙ⟩ = cos/sin(φₙ/2)` combinations of `|↑,n⟩` and `|↓,n+1⟩` for
/// `n <= n_max − g`, followed by the detached state `|↓,0⟩`.
pub fn jc_eigenstates(
    params: JCParams,
    space: CompositeSpace,
    guard: GuardBand,
) -> Result<Vec<JCSpectrumEntry>> {
    if params.coupling == 0.0 && params.detuning() == 0.0 {
        return Err(OpError::ZeroCoupling);
    }
    // ψₙ reaches |↓,n+1⟩, so the last usable n is n_max − 1
    let top = guard.limit().min(space.n_max() - 1);
    let mut out = Vec::with_capacity(2 * top + 3);
    for n in 0..=top {
        for branch in [Branch::Plus, Branch::Minus] {
            out.push(JCSpectrumEntry {
                branch,
                n,
                energy: jc_spectrum_analytic(params, n, branch),
                vector: psi(params, space, n, branch),
                detached: false,
            });
        }
    }
    out.push(JCSpectrumEntry {
        branch: Branch::Minus,
        n: 0,
        energy: -params.splitting / 2.0,
        vector: basis_state(space.dim(), space.index(Spin::Down, 0)),
        detached: true,
    });
    Ok(out)
}

/// Complete orthonormal eigenbasis of the truncated Hamiltonian:
/// `ψ±ₙ` (n = 0..n_max), the detached `|↓,0⟩`, and the edge state
/// `|↑,n_max⟩` (energy `ω·n_max + Ω/2`).
pub fn jc_labeled_basis(params: JCParams, space: CompositeSpace) -> Vec<LabeledState> {
    let mut out = Vec::with_capacity(space.dim());
    for n in 0..space.n_max() {
        for branch in [Branch::Plus, Branch::Minus] {
            out.push(LabeledState {
                label: eigen_label("psi", branch, n),
                kind: StateKind::Eigen { branch, n },
                vector: psi(params, space, n, branch),
                energy: Some(jc_spectrum_analytic(params, n, branch)),
            });
        }
    }
    out.push(LabeledState {
        label: bare_label(Spin::Down, 0),
        kind: StateKind::Detached,
        vector: basis_state(space.dim(), space.index(Spin::Down, 0)),
        energy: Some(-params.splitting / 2.0),
    });
    let n_max = space.n_max();
    out.push(LabeledState {
        label: bare_label(Spin::Up, n_max as i64),
        kind: StateKind::Edge,
        vector: basis_state(space.dim(), space.index(Spin::Up, n_max)),
        energy: Some(params.omega * n_max as f64 + params.splitting / 2.0),
    });
    out
}

/// `{𝒩_JC, Σ₃, b, b†, Σ₊, Σ₋}` dressed by `W_JC`.
pub fn jc_conserved_set(params: JCParams, space: CompositeSpace) -> Result<DressedFamily> {
    DressedFamily::from_dressing(
        Model::JaynesCummings,
        space,
        jc_dressing(params, space)?,
        jc_labeled_basis(params, space),
    )
}

/// `ε±ₙ` for `n <= n_max − g` plus the detached `−Ω/2`, against the dense
/// spectrum.
pub fn jc_dense_check(
    params: JCParams,
    space: CompositeSpace,
    guard: GuardBand,
    tolerance: f64,
) -> Result<SpectrumCheck> {
    let h = jc_hamiltonian(params, space);
    let dense: Vec<f64> = hermitian_eigensystem(&h)?.iter().map(|e| e.value).collect();
    let mut checked = Vec::new();
    let mut beyond = Vec::new();
    for n in 0..=space.n_max() {
        for branch in [Branch::Plus, Branch::Minus] {
            let energy = jc_spectrum_analytic(params, n, branch);
            if guard.contains(n) {
                checked.push(AnalyticLevel {
                    kind: RowKind::Branch(branch),
                    n,
                    energy,
                    tolerance,
                });
            } else {
                beyond.push(energy);
            }
        }
    }
    checked.push(AnalyticLevel {
        kind: RowKind::Detached,
        n: 0,
        energy: -params.splitting / 2.0,
        tolerance: DETACHED_TOL.min(tolerance),
    });
    Ok(compare_spectra(&checked, &beyond, tolerance, &dense))
}
