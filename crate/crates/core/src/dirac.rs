//! The 1+1 Dirac oscillator: Hamiltonian, the co-isometric dressing `𝒰`,
//! the mixing angle `θ_N`, closed-form spectrum and eigenstates.
//!
//! `𝒰 = diag(1, a·N^{-1/2})` uses the Moore–Penrose inverse, so its lower
//! block is a unit shift `|n⟩ → |n−1⟩` that annihilates `|0⟩`. On the
//! truncated space this gives `𝒰†𝒰 = 1 − |↓,0⟩⟨↓,0|` exactly and
//! `𝒰𝒰† = 1 − |↓,n_max⟩⟨↓,n_max|`; the second defect sits on the edge.

use num_complex::Complex64 as C64;

use crate::blocks::{block2, tensor};
use crate::dressing::{spin_rotation, DressedFamily, Model};
use crate::error::{OpError, Result};
use crate::fock::{ladder_lowering, number, position_momentum};
use crate::guard::GuardBand;
use crate::operator::{basis_state, Operator, State};
use crate::pauli::{pauli, PauliAxis};
use crate::spectral::{diag_function, hermitian_eigensystem, pinv_sqrt_inverse};
use crate::spectrum::{compare_spectra, AnalyticLevel, RowKind, SpectrumCheck};
use crate::space::{CompositeSpace, FockSpace, Space, Spin};
use crate::states::{eigen_label, bare_label, Branch, LabeledState, StateKind};

/// Mass and oscillator frequency in units with ħ = c = 1.
///
/// `omega = 0` is accepted and gives the free-spin limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DOParams {
    m: f64,
    omega: f64,
}

impl DOParams {
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(OpError::InvalidParams(format!("mass must be positive, got {m}")));
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(OpError::InvalidParams(format!(
                "frequency must be nonnegative, got {omega}"
            )));
        }
        Ok(Self { m, omega })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Off-diagonal coupling √(2mω).
    pub fn coupling(&self) -> f64 {
        (2.0 * self.m * self.omega).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub branch: Branch,
    pub n: usize,
    pub energy: f64,
    pub vector: State,
}

/// `[[m, √(2mω)a†], [√(2mω)a, −m]]`.
pub fn do_hamiltonian(params: DOParams, space: CompositeSpace) -> Operator {
    let f = space.fock();
    let a = ladder_lowering(f);
    let one = Operator::identity(Space::fock(f));
    let g = params.coupling();
    block2(
        &one.scale_re(params.m),
        &a.adjoint().scale_re(g),
        &a.scale_re(g),
        &one.scale_re(-params.m),
    )
    .expect("blocks share one Fock space")
    .with_label("H_DO")
}

/// `α(p − iβmωx) + βm` with `α = σ₂`, `β = σ₃`, assembled from the
/// position and momentum matrices. Requires `ω > 0`.
pub fn do_hamiltonian_from_xp(params: DOParams, space: CompositeSpace) -> Result<Operator> {
    let f = space.fock();
    let (x, p) = position_momentum(f, params.m, params.omega)?;
    let s2 = pauli(PauliAxis::Y);
    let s3 = pauli(PauliAxis::Z);
    let one = Operator::identity(Space::fock(f));
    // α·(−iβ) = −iσ₂σ₃, which equals σ₁
    let minus_i_s2s3 = s2.mul(&s3)?.scale(-crate::operator::I);
    let h = tensor(&s2, &p)?
        .add(&tensor(&minus_i_s2s3, &x)?.scale_re(params.m * params.omega))?
        .add(&tensor(&s3, &one)?.scale_re(params.m))?;
    Ok(h.with_label("H_DO(x,p)"))
}

/// `𝒰 = [[1, 0], [0, a·N^{-1/2}]]`.
pub fn do_unitary(space: CompositeSpace) -> Operator {
    let f = space.fock();
    let one = Operator::identity(Space::fock(f));
    let zero = Operator::zero(Space::fock(f));
    let shift = ladder_lowering(f)
        .mul(&pinv_sqrt_inverse(&number(f)).expect("N is diagonal and nonnegative"))
        .expect("same space");
    block2(&one, &zero, &zero, &shift)
        .expect("blocks share one Fock space")
        .with_label("𝒰")
}

/// θ_N with `tan θ_n = √(2ωn/m)`, θ_n ∈ [0, π/2).
pub fn do_theta(params: DOParams, space: FockSpace) -> Operator {
    let ratio = 2.0 * params.omega / params.m;
    diag_function(&number(space), |n| (ratio * n).sqrt().atan())
        .expect("N is diagonal")
        .with_label("θ_N")
}

fn theta_n(params: DOParams, n: usize) -> f64 {
    (2.0 * params.omega * n as f64 / params.m).sqrt().atan()
}

/// `±√(2mωn + m²)`.
pub fn do_spectrum_analytic(params: DOParams, n: usize, branch: Branch) -> Result<f64> {
    if branch == Branch::Minus && n == 0 {
        return Err(OpError::InvalidBranch { n });
    }
    Ok(branch.sign() * (2.0 * params.m * params.omega * n as f64 + params.m * params.m).sqrt())
}

/// Closed-form `|φ±ₙ⟩`:
/// `|φ⁺ₙ⟩ = cos(θₙ/2)|↑,n⟩ + sin(θₙ/2)|↓,n−1⟩`,
/// `|φ⁻ₙ⟩ = −sin(θₙ/2)|↑,n⟩ + cos(θₙ/2)|↓,n−1⟩`.
pub fn do_eigenstate(
    params: DOParams,
    space: CompositeSpace,
    n: usize,
    branch: Branch,
) -> Result<SpectrumEntry> {
    let energy = do_spectrum_analytic(params, n, branch)?;
    if n > space.n_max() {
        return Err(OpError::StateOutOfRange {
            n,
            n_max: space.n_max(),
        });
    }
    let half = theta_n(params, n) / 2.0;
    let (c, s) = (half.cos(), half.sin());
    let (up, down) = match branch {
        Branch::Plus => (c, s),
        Branch::Minus => (-s, c),
    };
    let mut v = basis_state(space.dim(), space.index(Spin::Up, n)) * C64::new(up, 0.0);
    if n >= 1 {
        v[space.index(Spin::Down, n - 1)] += down;
    }
    Ok(SpectrumEntry {
        branch,
        n,
        energy,
        vector: v,
    })
}

/// `W = 𝒰·e^{−iσ₂θ_N/2}`.
pub fn do_dressing(params: DOParams, space: CompositeSpace) -> Operator {
    let r = spin_rotation(&do_theta(params, space.fock())).expect("θ_N is diagonal");
    do_unitary(space).mul(&r).expect("same space").with_label("W_DO")
}

/// Complete orthonormal eigenbasis of the truncated Hamiltonian:
/// `φ⁺ₙ` (n = 0..=n_max), `φ⁻ₙ` (n = 1..=n_max) and the decoupled edge
/// state `|↓,n_max⟩` with energy `−m`.
pub fn do_labeled_basis(params: DOParams, space: CompositeSpace) -> Vec<LabeledState> {
    let mut out = Vec::with_capacity(space.dim());
    for n in 0..=space.n_max() {
        for branch in [Branch::Plus, Branch::Minus] {
            if let Ok(e) = do_eigenstate(params, space, n, branch) {
                out.push(LabeledState {
                    label: eigen_label("phi", branch, n),
                    kind: StateKind::Eigen { branch, n },
                    vector: e.vector,
                    energy: Some(e.energy),
                });
            }
        }
    }
    out.push(LabeledState {
        label: bare_label(Spin::Down, space.n_max() as i64),
        kind: StateKind::Edge,
        vector: basis_state(space.dim(), space.index(Spin::Down, space.n_max())),
        energy: Some(-params.m),
    });
    out
}

/// `{𝒩, Σ₃, b, b†, Σ₊, Σ₋}` dressed by `W_DO`.
pub fn do_conserved_set(params: DOParams, space: CompositeSpace) -> Result<DressedFamily> {
    DressedFamily::from_dressing(
        Model::DiracOscillator,
        space,
        do_dressing(params, space),
        do_labeled_basis(params, space),
    )
}

/// Closed-form levels with `n <= n_max − g` against the dense spectrum.
pub fn do_dense_check(
    params: DOParams,
    space: CompositeSpace,
    guard: GuardBand,
    tolerance: f64,
) -> Result<SpectrumCheck> {
    let h = do_hamiltonian(params, space);
    let dense: Vec<f64> = hermitian_eigensystem(&h)?.iter().map(|e| e.value).collect();
    let mut checked = Vec::new();
    let mut beyond = Vec::new();
    for n in 0..=space.n_max() {
        for branch in [Branch::Plus, Branch::Minus] {
            let Ok(energy) = do_spectrum_analytic(params, n, branch) else {
                continue;
            };
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
    Ok(compare_spectra(&checked, &beyond, tolerance, &dense))
}
