//! Comparison of closed-form spectra against a dense diagonalization.

use crate::states::Branch;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Branch(Branch),
    Detached,
}

impl RowKind {
    pub fn label(&self) -> &'static str {
        match self {
            RowKind::Branch(b) => b.symbol(),
            RowKind::Detached => "detached",
        }
    }
}

/// One closed-form level to be located in the dense spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticLevel {
    pub kind: RowKind,
    pub n: usize,
    pub energy: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub kind: RowKind,
    pub n: usize,
    pub analytic: f64,
    pub dense: Option<f64>,
    pub abs_diff: f64,
    pub tolerance: f64,
}

impl SpectrumRow {
    pub fn matched(&self) -> bool {
        self.dense.is_some() && self.abs_diff <= self.tolerance
    }

    pub fn detached(&self) -> bool {
        self.kind == RowKind::Detached
    }
}

/// Dense eigenvalue not accounted for by any checked level.
#[derive(Clone, Debug, PartialEq)]
pub struct UnmatchedEigenvalue {
    pub value: f64,
    /// `true` when it coincides with a closed-form level outside the guard
    /// band; `false` for a pure truncation artifact.
    pub beyond_guard: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumCheck {
    pub rows: Vec<SpectrumRow>,
    pub unmatched: Vec<UnmatchedEigenvalue>,
    pub dense_count: usize,
    pub pass: bool,
}

impl SpectrumCheck {
    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max)
    }

    pub fn artifacts(&self) -> impl Iterator<Item = &UnmatchedEigenvalue> {
        self.unmatched.iter().filter(|u| !u.beyond_guard)
    }

    /// Every dense eigenvalue is either a checked row, a level beyond the
    /// guard band, or a reported artifact.
    pub fn reconciles(&self) -> bool {
        self.rows.iter().filter(|r| r.dense.is_some()).count() + self.unmatched.len()
            == self.dense_count
    }
}

/// Minimum-total-distance assignment of each target to a distinct dense
/// value. Both inputs sorted ascending; `dense.len() >= targets.len()`.
/// Returns, for each target, the index into `dense`.
fn monotone_assignment(targets: &[f64], dense: &[f64]) -> Vec<usize> {
    let (t, d) = (targets.len(), dense.len());
    assert!(d >= t);
    if t == 0 {
        return Vec::new();
    }
    // cost[i][j]: best cost matching targets[..i] into dense[..j]
    let mut cost = vec![vec![f64::INFINITY; d + 1]; t + 1];
    let mut take = vec![vec![false; d + 1]; t + 1];
    cost[0].iter_mut().for_each(|c| *c = 0.0);
    for i in 1..=t {
        for j in i..=d {
            let skip = cost[i][j - 1];
            let pair = cost[i - 1][j - 1] + (targets[i - 1] - dense[j - 1]).abs();
            if pair <= skip {
                cost[i][j] = pair;
                take[i][j] = true;
            } else {
                cost[i][j] = skip;
            }
        }
    }
    let mut out = vec![0; t];
    let (mut i, mut j) = (t, d);
    while i > 0 {
        if take[i][j] {
            out[i - 1] = j - 1;
            i -= 1;
        }
        j -= 1;
    }
    out
}

fn sorted_indices(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Locate `checked` levels in `dense`, then try to explain the leftovers
/// with `beyond` (levels outside the guard band, matched at `beyond_tol`).
pub fn compare_spectra(
    checked: &[AnalyticLevel],
    beyond: &[f64],
    beyond_tol: f64,
    dense: &[f64],
) -> SpectrumCheck {
    let mut dense_sorted = dense.to_vec();
    dense_sorted.sort_by(f64::total_cmp);

    let order = sorted_indices(&checked.iter().map(|l| l.energy).collect::<Vec<_>>());
    let targets: Vec<f64> = order.iter().map(|&k| checked[k].energy).collect();
    let mut used = vec![false; dense_sorted.len()];
    let mut rows: Vec<Option<SpectrumRow>> = vec![None; checked.len()];

    if targets.len() <= dense_sorted.len() {
        for (pos, j) in monotone_assignment(&targets, &dense_sorted).into_iter().enumerate() {
            let level = checked[order[pos]];
            used[j] = true;
            rows[order[pos]] = Some(SpectrumRow {
                kind: level.kind,
                n: level.n,
                analytic: level.energy,
                dense: Some(dense_sorted[j]),
                abs_diff: (level.energy - dense_sorted[j]).abs(),
                tolerance: level.tolerance,
            });
        }
    }
    let rows: Vec<SpectrumRow> = rows
        .into_iter()
        .zip(checked)
        .map(|(r, level)| {
            r.unwrap_or(SpectrumRow {
                kind: level.kind,
                n: level.n,
                analytic: level.energy,
                dense: None,
                abs_diff: f64::INFINITY,
                tolerance: level.tolerance,
            })
        })
        .collect();

    let rest: Vec<f64> = dense_sorted
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(&v, _)| v)
        .collect();
    let mut beyond_sorted = beyond.to_vec();
    beyond_sorted.sort_by(f64::total_cmp);
    let mut explained = vec![false; rest.len()];
    // leftovers are few; greedy nearest is enough to classify them
    let mut taken = vec![false; beyond_sorted.len()];
    for (k, &v) in rest.iter().enumerate() {
        let best = beyond_sorted
            .iter()
            .enumerate()
            .filter(|(i, _)| !taken[*i])
            .min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs()));
        if let Some((i, &e)) = best {
            if (e - v).abs() <= beyond_tol {
                taken[i] = true;
                explained[k] = true;
            }
        }
    }
    let unmatched = rest
        .into_iter()
        .zip(explained)
        .map(|(value, beyond_guard)| UnmatchedEigenvalue {
            value,
            beyond_guard,
        })
        .collect();

    let pass = rows.iter().all(SpectrumRow::matched);
    SpectrumCheck {
        rows,
        unmatched,
        dense_count: dense.len(),
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(e: f64) -> AnalyticLevel {
        AnalyticLevel {
            kind: RowKind::Branch(Branch::Plus),
            n: 0,
            energy: e,
            tolerance: 1e-9,
        }
    }

    #[test]
    fn assignment_handles_extra_dense_values() {
        let dense = [-5.0, 0.0, 1.0, 1.0 + 1e-12, 3.0];
        let chk = compare_spectra(&[level(1.0), level(1.0), level(3.0)], &[], 1e-9, &dense);
        assert!(chk.pass);
        assert_eq!(chk.unmatched.len(), 2);
        assert!(chk.reconciles());
    }

    #[test]
    fn nearly_degenerate_pairs_stay_paired() {
        let dense = [1.0, 1.0 + 1e-6, 2.0];
        let levels = [level(1.0 + 1e-6), level(1.0)];
        let chk = compare_spectra(&levels, &[], 1e-9, &dense);
        assert!(chk.pass);
        assert_eq!(chk.rows[0].dense, Some(1.0 + 1e-6));
    }

    #[test]
    fn missing_level_fails() {
        let chk = compare_spectra(&[level(0.5)], &[], 1e-9, &[0.0, 1.0]);
        assert!(!chk.pass);
    }

    #[test]
    fn leftovers_classified() {
        let chk = compare_spectra(&[level(0.0)], &[7.0], 1e-9, &[0.0, 7.0, -1.0]);
        assert_eq!(chk.artifacts().count(), 1);
        assert_eq!(chk.artifacts().next().unwrap().value, -1.0);
    }
}
