//! SU(1,1), SU(2) and SO(4) generators built from a dressed operator
//! family, the table of commutation relations they should obey, and the
//! matrix elements of the SO(4) generators in the model eigenbasis.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::defect::{analyze_defect, SupportEntry};
use crate::dressing::DressedFamily;
use crate::error::{OpError, Result};
use crate::guard::GuardBand;
use crate::operator::{commutator, Operator, I, ONE};
use crate::spectral::diag_function;
use crate::states::Branch;

/// Default absolute tolerance for relation residuals.
pub const RELATION_TOL: f64 = 1e-9;

/// Largest defect rank a relation may carry and still pass.
pub const MAX_DEFECT_RANK: usize = 2;

#[derive(Clone, Debug)]
pub struct Su11Sector {
    pub k3: Operator,
    pub k_plus: Operator,
    pub k_minus: Operator,
    pub k1: Operator,
    pub k2: Operator,
}

#[derive(Clone, Debug)]
pub struct Su2Sector {
    pub s3: Operator,
    pub s_plus: Operator,
    pub s_minus: Operator,
    pub s1: Operator,
    pub s2: Operator,
}

/// `(X₊ + X₋)/2` and `(X₊ − X₋)/(2i)`.
fn cartesian(plus: &Operator, minus: &Operator) -> Result<(Operator, Operator)> {
    let x1 = plus.add(minus)?.scale_re(0.5);
    let x2 = plus.sub(minus)?.scale(C64::new(0.0, -0.5));
    Ok((x1, x2))
}

/// `K₃ = 𝒩 + 1/2`, `K₊ = b†ξ`, `K₋ = ξb` with `ξ = √(𝒩 + 1)` taken as a
/// spectral function of the (diagonal) dressed number operator.
pub fn build_su11(number: &Operator, lower: &Operator, raise: &Operator) -> Result<Su11Sector> {
    let k3 = number.shift(0.5).with_label("K3");
    let xi = diag_function(number, |n| (n + 1.0).sqrt())?;
    let k_plus = raise.mul(&xi)?.with_label("K+");
    let k_minus = xi.mul(lower)?.with_label("K-");
    let (k1, k2) = cartesian(&k_plus, &k_minus)?;
    Ok(Su11Sector {
        k3,
        k1: k1.with_label("K1"),
        k2: k2.with_label("K2"),
        k_plus,
        k_minus,
    })
}

/// `S₃ = Σ₃/2`, `S± = Σ±`.
pub fn build_su2(sigma3: &Operator, sigma_plus: &Operator, sigma_minus: &Operator) -> Result<Su2Sector> {
    let s3 = sigma3.scale_re(0.5).with_label("S3");
    let s_plus = sigma_plus.clone().with_label("S+");
    let s_minus = sigma_minus.clone().with_label("S-");
    // same-space check
    s_plus.sub(&s3)?;
    s_minus.sub(&s3)?;
    let (s1, s2) = cartesian(&s_plus, &s_minus)?;
    Ok(Su2Sector {
        s3,
        s_plus,
        s_minus,
        s1: s1.with_label("S1"),
        s2: s2.with_label("S2"),
    })
}

/// `Iᵢ = K̃ᵢ + Sᵢ`, `Rᵢ = K̃ᵢ − Sᵢ` with `K̃₁,₂ = iK₁,₂`, `K̃₃ = K₃`.
/// `I₁, I₂, R₁, R₂` come out anti-Hermitian-plus-Hermitian and are kept
/// as they are.
pub fn build_so4(k: &Su11Sector, s: &Su2Sector) -> Result<([Operator; 3], [Operator; 3])> {
    let kt = [k.k1.scale(I), k.k2.scale(I), k.k3.clone()];
    let ss = [&s.s1, &s.s2, &s.s3];
    let mut i_gen = Vec::with_capacity(3);
    let mut r_gen = Vec::with_capacity(3);
    for (idx, (kti, si)) in kt.iter().zip(ss).enumerate() {
        i_gen.push(kti.add(si)?.with_label(format!("I{}", idx + 1)));
        r_gen.push(kti.sub(si)?.with_label(format!("R{}", idx + 1)));
    }
    let to_arr = |v: Vec<Operator>| -> [Operator; 3] { v.try_into().expect("three generators") };
    Ok((to_arr(i_gen), to_arr(r_gen)))
}

/// Every operator taking part in the relation table.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub family: DressedFamily,
    pub su11: Su11Sector,
    pub su2: Su2Sector,
    pub i: [Operator; 3],
    pub r: [Operator; 3],
    identity: Operator,
}

impl GeneratorSet {
    pub fn from_family(family: DressedFamily) -> Result<Self> {
        let su11 = build_su11(&family.number, &family.lower, &family.raise)?;
        let su2 = build_su2(&family.sigma3, &family.sigma_plus, &family.sigma_minus)?;
        let (i, r) = build_so4(&su11, &su2)?;
        let identity = Operator::identity(family.space.space());
        Ok(Self {
            family,
            su11,
            su2,
            i,
            r,
            identity,
        })
    }

    /// Look up an operator by its table name.
    pub fn get(&self, name: &str) -> Option<&Operator> {
        let f = &self.family;
        Some(match name {
            "1" => &self.identity,
            "N" => &f.number,
            "b" => &f.lower,
            "bd" => &f.raise,
            "Sig3" => &f.sigma3,
            "Sig+" => &f.sigma_plus,
            "Sig-" => &f.sigma_minus,
            "K3" => &self.su11.k3,
            "K+" => &self.su11.k_plus,
            "K-" => &self.su11.k_minus,
            "K1" => &self.su11.k1,
            "K2" => &self.su11.k2,
            "S3" => &self.su2.s3,
            "S+" => &self.su2.s_plus,
            "S-" => &self.su2.s_minus,
            "S1" => &self.su2.s1,
            "S2" => &self.su2.s2,
            "I1" => &self.i[0],
            "I2" => &self.i[1],
            "I3" => &self.i[2],
            "R1" => &self.r[0],
            "R2" => &self.r[1],
            "R3" => &self.r[2],
            _ => return None,
        })
    }

    /// Generators that should be Hermitian, with their deviation.
    pub fn hermiticity(&self) -> Vec<(&'static str, f64)> {
        ["K1", "K2", "K3", "S1", "S2", "S3", "I3", "R3"]
            .into_iter()
            .map(|n| (n, self.get(n).expect("known name").hermiticity_deviation()))
            .collect()
    }
}

/// `[lhs.0, lhs.1] = Σ c·rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: String,
    pub lhs: (String, String),
    pub rhs: Vec<(C64, String)>,
}

impl Relation {
    fn new(lhs: (&str, &str), rhs: &[(C64, &str)]) -> Self {
        let rhs_text = if rhs.is_empty() {
            "0".to_string()
        } else {
            rhs.iter()
                .map(|(c, n)| format!("{}{n}", coefficient_text(*c)))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        Self {
            name: format!("[{}, {}] = {rhs_text}", lhs.0, lhs.1),
            lhs: (lhs.0.to_string(), lhs.1.to_string()),
            rhs: rhs.iter().map(|(c, n)| (*c, n.to_string())).collect(),
        }
    }
}

fn coefficient_text(c: C64) -> String {
    match (c.re, c.im) {
        (re, im) if im == 0.0 && re == 1.0 => String::new(),
        (re, im) if im == 0.0 && re == -1.0 => "-".into(),
        (re, im) if im == 0.0 => format!("{re}·"),
        (re, im) if re == 0.0 && im == 1.0 => "i·".into(),
        (re, im) if re == 0.0 && im == -1.0 => "-i·".into(),
        (re, im) if re == 0.0 => format!("{im}i·"),
        _ => format!("({c})·"),
    }
}

fn levi_civita(i: usize, j: usize) -> Option<(usize, f64)> {
    if i == j {
        return None;
    }
    let k = 6 - i - j;
    let sign = if (i, j) == (1, 2) || (i, j) == (2, 3) || (i, j) == (3, 1) {
        1.0
    } else {
        -1.0
    };
    Some((k, sign))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationTable {
    pub relations: Vec<Relation>,
}

impl RelationTable {
    /// Oscillator/Pauli relations of the dressed family, SU(1,1), SU(2),
    /// their decoupling, and the SO(4) table including the Cartan pair.
    pub fn standard() -> Self {
        let one = ONE;
        let mut rel = vec![
            Relation::new(("N", "b"), &[(-one, "b")]),
            Relation::new(("N", "bd"), &[(one, "bd")]),
            Relation::new(("b", "bd"), &[(one, "1")]),
            Relation::new(("Sig3", "Sig+"), &[(2.0 * one, "Sig+")]),
            Relation::new(("Sig3", "Sig-"), &[(-2.0 * one, "Sig-")]),
            Relation::new(("Sig+", "Sig-"), &[(one, "Sig3")]),
            Relation::new(("K3", "K+"), &[(one, "K+")]),
            Relation::new(("K3", "K-"), &[(-one, "K-")]),
            Relation::new(("K+", "K-"), &[(-2.0 * one, "K3")]),
            Relation::new(("S3", "S+"), &[(one, "S+")]),
            Relation::new(("S3", "S-"), &[(-one, "S-")]),
            Relation::new(("S+", "S-"), &[(2.0 * one, "S3")]),
        ];
        for i in 1..=3 {
            for j in 1..=3 {
                rel.push(Relation::new((&format!("S{i}"), &format!("K{j}")), &[]));
            }
        }
        for (i, j) in [(1, 2), (2, 3), (3, 1)] {
            let (k, _) = levi_civita(i, j).expect("distinct");
            rel.push(Relation::new((&format!("I{i}"), &format!("I{j}")), &[(I, &format!("I{k}"))]));
        }
        for i in 1..=3 {
            for j in 1..=3 {
                let rhs = levi_civita(i, j)
                    .map(|(k, s)| vec![(I * s, format!("R{k}"))])
                    .unwrap_or_default();
                let rhs: Vec<(C64, &str)> = rhs.iter().map(|(c, n)| (*c, n.as_str())).collect();
                rel.push(Relation::new((&format!("I{i}"), &format!("R{j}")), &rhs));
            }
        }
        for (i, j) in [(1, 2), (2, 3), (3, 1)] {
            let (k, _) = levi_civita(i, j).expect("distinct");
            rel.push(Relation::new((&format!("R{i}"), &format!("R{j}")), &[(I, &format!("I{k}"))]));
        }
        Self { relations: rel }
    }

    /// Names referenced by the table that `gens` cannot resolve.
    pub fn unresolved(&self, gens: &GeneratorSet) -> Vec<String> {
        let mut missing = Vec::new();
        for r in &self.relations {
            let names = [&r.lhs.0, &r.lhs.1].into_iter().chain(r.rhs.iter().map(|(_, n)| n));
            for n in names {
                if gens.get(n).is_none() && !missing.contains(n) {
                    missing.push(n.clone());
                }
            }
        }
        missing
    }
}

#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub relation: String,
    /// Residual on the guard band with the defect support removed.
    pub residual: f64,
    /// Residual on the guard band before removing the support.
    pub band_residual: f64,
    pub full_residual: f64,
    /// Defect rank counted over the whole space, edge included.
    pub full_rank: usize,
    pub defect_rank: usize,
    pub defect_support: Vec<SupportEntry>,
    pub tolerance: f64,
    pub pass: bool,
}

impl CommutatorReport {
    pub fn support_labels(&self) -> Vec<String> {
        self.defect_support.iter().map(|s| s.label.clone()).collect()
    }
}

fn lookup<'a>(gens: &'a GeneratorSet, name: &str) -> Result<&'a Operator> {
    gens.get(name).ok_or_else(|| OpError::UnknownGenerator(name.to_string()))
}

/// Check one relation; see [`crate::defect`] for how defects are isolated.
pub fn verify_relation(
    gens: &GeneratorSet,
    relation: &Relation,
    band: &Operator,
    tolerance: f64,
) -> Result<CommutatorReport> {
    let a = lookup(gens, &relation.lhs.0)?;
    let b = lookup(gens, &relation.lhs.1)?;
    let lhs = commutator(a, b)?;
    let mut rhs = Operator::zero(lhs.space());
    for (c, name) in &relation.rhs {
        rhs = rhs.add(&lookup(gens, name)?.scale(*c))?;
    }
    let residual = lhs.sub(&rhs)?;
    let analysis = analyze_defect(&residual, band, &gens.family.states, tolerance)?;
    let pass = analysis.residual <= tolerance && analysis.rank <= MAX_DEFECT_RANK;
    Ok(CommutatorReport {
        relation: relation.name.clone(),
        residual: analysis.residual,
        band_residual: analysis.band_residual,
        full_residual: analysis.full_residual,
        full_rank: analysis.full_rank,
        defect_rank: analysis.rank,
        defect_support: analysis.support,
        tolerance,
        pass,
    })
}

pub fn verify_relations_with_tol(
    gens: &GeneratorSet,
    table: &RelationTable,
    guard: GuardBand,
    tolerance: f64,
) -> Result<Vec<CommutatorReport>> {
    if let Some(name) = table.unresolved(gens).into_iter().next() {
        return Err(OpError::UnknownGenerator(name));
    }
    let band = guard.projector(gens.family.space)?;
    table
        .relations
        .iter()
        .map(|r| verify_relation(gens, r, &band, tolerance))
        .collect()
}

pub fn verify_relations(
    gens: &GeneratorSet,
    table: &RelationTable,
    guard: GuardBand,
) -> Result<Vec<CommutatorReport>> {
    verify_relations_with_tol(gens, table, guard, RELATION_TOL)
}

/// One off-diagonal coefficient `⟨target|A|source⟩` next to its closed form.
#[derive(Clone, Debug)]
pub struct MatrixElementRow {
    pub operator: String,
    pub source: String,
    pub target: String,
    pub computed: C64,
    pub expected: C64,
    pub abs_diff: f64,
}

/// Diagonal value of `I₃` or `R₃` on one eigenstate, with the closed form
/// `n + 1 ± (−1)^α/2` it is compared against.
#[derive(Clone, Debug)]
pub struct DiagonalRow {
    pub operator: String,
    pub branch: Branch,
    pub n: usize,
    pub computed: f64,
    pub closed_form: f64,
    /// `closed_form − computed`.
    pub offset: f64,
}

/// Least-squares line through one diagonal series.
#[derive(Clone, Debug)]
pub struct DiagonalFit {
    pub operator: String,
    pub branch: Branch,
    pub slope: f64,
    pub intercept: f64,
    pub max_fit_residual: f64,
}

#[derive(Clone, Debug)]
pub struct MatrixElementTable {
    pub rows: Vec<MatrixElementRow>,
    pub diagonal: Vec<DiagonalRow>,
    pub fits: Vec<DiagonalFit>,
    /// Largest |computed − closed form| over `rows`.
    pub max_coefficient_diff: f64,
    /// Largest matrix element of `I₁, I₂, R₁, R₂` outside the ladder pattern.
    pub max_off_pattern: f64,
    /// Largest off-diagonal element of `I₃, R₃` between eigenstates.
    pub max_cartan_off_diagonal: f64,
    pub offset_min: f64,
    pub offset_max: f64,
}

fn fit_line(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let worst = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    (slope, intercept, worst)
}

/// Matrix elements of the SO(4) generators between eigenstates with
/// `n_lo <= n <= n_hi`; the targets at `n + 1` must stay inside the band.
pub fn matrix_element_table(
    gens: &GeneratorSet,
    n_lo: usize,
    n_hi: usize,
    guard: GuardBand,
) -> Result<MatrixElementTable> {
    if n_hi + 1 > guard.limit() || n_lo > n_hi {
        return Err(OpError::RangeOutsideGuard {
            lo: n_lo,
            hi: n_hi,
            limit: guard.limit(),
        });
    }
    let fam = &gens.family;
    let state = |b: Branch, n: usize| fam.eigenstate(b, n);
    let mut rows = Vec::new();
    let mut diagonal = Vec::new();
    let mut max_off_pattern = 0.0f64;
    let mut max_cartan = 0.0f64;

    for (alpha, (sector, ops)) in [("I", &gens.i), ("R", &gens.r)].into_iter().enumerate() {
        let parity = if alpha == 0 { 1.0 } else { -1.0 };
        for n in n_lo..=n_hi {
            for branch in [Branch::Plus, Branch::Minus] {
                let Some(src) = state(branch, n) else { continue };
                let nf = n as f64;
                // (target, A1 coefficient, A2 coefficient)
                let mut pattern: Vec<(&crate::states::LabeledState, C64, C64)> = Vec::new();
                if let Some(t) = state(branch, n + 1) {
                    pattern.push((t, I * ((nf + 1.0) / 2.0), C64::new((nf + 1.0) / 2.0, 0.0)));
                }
                if n >= 1 {
                    if let Some(t) = state(branch, n - 1) {
                        pattern.push((t, I * (nf / 2.0), C64::new(-nf / 2.0, 0.0)));
                    }
                }
                if let Some(t) = state(branch.flip(), n) {
                    pattern.push((
                        t,
                        C64::new(parity / 2.0, 0.0),
                        I * (branch.sign() * parity / 2.0),
                    ));
                }
                for (which, op) in ops[..2].iter().enumerate() {
                    let image = op.apply(&src.vector)?;
                    for (t, c1, c2) in &pattern {
                        let computed = t.vector.dotc(&image);
                        let expected = if which == 0 { *c1 } else { *c2 };
                        rows.push(MatrixElementRow {
                            operator: format!("{sector}{}", which + 1),
                            source: src.label.clone(),
                            target: t.label.clone(),
                            computed,
                            expected,
                            abs_diff: (computed - expected).norm(),
                        });
                    }
                    for other in &fam.states {
                        if pattern.iter().any(|(t, _, _)| t.label == other.label) {
                            continue;
                        }
                        max_off_pattern = max_off_pattern.max(other.vector.dotc(&image).norm());
                    }
                }
                let image3 = ops[2].apply(&src.vector)?;
                let diag = src.vector.dotc(&image3);
                for other in &fam.states {
                    if other.label != src.label {
                        max_cartan = max_cartan.max(other.vector.dotc(&image3).norm());
                    }
                }
                max_cartan = max_cartan.max(diag.im.abs());
                let closed_form = nf + 1.0 + branch.sign() * parity * 0.5;
                diagonal.push(DiagonalRow {
                    operator: format!("{sector}3"),
                    branch,
                    n,
                    computed: diag.re,
                    closed_form,
                    offset: closed_form - diag.re,
                });
            }
        }
    }

    let mut series: BTreeMap<(String, Branch), Vec<(f64, f64)>> = BTreeMap::new();
    for d in &diagonal {
        series
            .entry((d.operator.clone(), d.branch))
            .or_default()
            .push((d.n as f64, d.computed));
    }
    let fits = series
        .into_iter()
        .map(|((operator, branch), pts)| {
            let (slope, intercept, max_fit_residual) = fit_line(&pts);
            DiagonalFit {
                operator,
                branch,
                slope,
                intercept,
                max_fit_residual,
            }
        })
        .collect();

    let max_coefficient_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let offset_min = diagonal.iter().map(|d| d.offset).fold(f64::INFINITY, f64::min);
    let offset_max = diagonal.iter().map(|d| d.offset).fold(f64::NEG_INFINITY, f64::max);
    Ok(MatrixElementTable {
        rows,
        diagonal,
        fits,
        max_coefficient_diff,
        max_off_pattern,
        max_cartan_off_diagonal: max_cartan,
        offset_min,
        offset_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_size_and_names() {
        let t = RelationTable::standard();
        assert_eq!(t.relations.len(), 36);
        assert!(t.relations.iter().any(|r| r.name == "[K+, K-] = -2·K3"));
        assert!(t.relations.iter().any(|r| r.name == "[I3, R3] = 0"));
        assert!(t.relations.iter().any(|r| r.name == "[I1, R2] = i·R3"));
        assert!(t.relations.iter().any(|r| r.name == "[I2, R1] = -i·R3"));
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita(1, 2), Some((3, 1.0)));
        assert_eq!(levi_civita(3, 2), Some((1, -1.0)));
        assert_eq!(levi_civita(2, 2), None);
    }

    #[test]
    fn line_fit_exact() {
        let (s, c, r) = fit_line(&[(1.0, 2.0), (2.0, 3.0), (3.0, 4.0)]);
        assert!((s - 1.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15 && r < 1e-15);
    }

    #[test]
    fn small_space_defect_is_finite() {
        // the support Gram matrix here once sent the eigensolver to NaN
        use crate::dirac::{do_conserved_set, DOParams};
        use crate::space::CompositeSpace;
        let space = CompositeSpace::with_n_max(12).unwrap();
        let fam = do_conserved_set(DOParams::new(1.0, 1.0).unwrap(), space).unwrap();
        let gens = GeneratorSet::from_family(fam).unwrap();
        let table = RelationTable {
            relations: vec![Relation::new(("b", "bd"), &[(ONE, "1")])],
        };
        let r = verify_relations(&gens, &table, GuardBand::new(3, 12).unwrap()).unwrap();
        assert!(r[0].residual.is_finite() && r[0].residual < 1e-12);
        assert_eq!(r[0].support_labels(), vec!["phi-[1]".to_string()]);
    }

    #[test]
    fn rank_one_defect_support_is_exact() {
        // off-resonant frequencies once produced a spurious second support state
        use crate::dirac::{do_conserved_set, DOParams};
        use crate::space::CompositeSpace;
        let space = CompositeSpace::with_n_max(24).unwrap();
        let fam = do_conserved_set(DOParams::new(1.0, 0.5).unwrap(), space).unwrap();
        let gens = GeneratorSet::from_family(fam).unwrap();
        let table = RelationTable {
            relations: vec![Relation::new(("K+", "K-"), &[(C64::new(-2.0, 0.0), "K3")])],
        };
        let r = verify_relations(&gens, &table, GuardBand::new(3, 24).unwrap()).unwrap();
        assert_eq!(r[0].defect_rank, 1);
        assert_eq!(r[0].support_labels(), vec!["phi-[1]".to_string()]);
    }
}
