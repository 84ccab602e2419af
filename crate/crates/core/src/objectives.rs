//! Objective evaluators for the diversity models.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// A selected subset, stored as strictly increasing node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    selected: Vec<usize>,
}

impl Solution {
    /// Validates `indices` against `inst` and sorts them.
    pub fn new(inst: &Instance, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex(w[0]));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= inst.n() {
                return Err(Error::IndexOutOfRange { index: last, n: inst.n() });
            }
        }
        Ok(Solution { selected: indices })
    }

    /// Caller guarantees `sorted` is strictly increasing and in range.
    pub(crate) fn from_sorted(sorted: Vec<usize>) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        Solution { selected: sorted }
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn m(&self) -> usize {
        self.selected.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.selected.binary_search(&i).is_ok()
    }

    /// Pairwise distances among the selected nodes, `(i, j)` row-major.
    pub fn pairwise<'a>(&'a self, inst: &'a Instance) -> impl Iterator<Item = f64> + 'a {
        let s = &self.selected;
        (0..s.len()).flat_map(move |a| ((a + 1)..s.len()).map(move |b| inst.d(s[a], s[b])))
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.selected.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveKind {
    MaxSum,
    MaxMin,
    MaxMinSum,
    MinDiff,
    MaxMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl ObjectiveKind {
    pub const PAIRWISE: [ObjectiveKind; 4] = [
        ObjectiveKind::MaxSum,
        ObjectiveKind::MaxMin,
        ObjectiveKind::MaxMinSum,
        ObjectiveKind::MinDiff,
    ];

    pub fn sense(self) -> Sense {
        match self {
            ObjectiveKind::MinDiff => Sense::Minimize,
            _ => Sense::Maximize,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::MaxSum => "maxsum",
            ObjectiveKind::MaxMin => "maxmin",
            ObjectiveKind::MaxMinSum => "maxminsum",
            ObjectiveKind::MinDiff => "mindiff",
            ObjectiveKind::MaxMean => "maxmean",
        }
    }

    /// `true` when `a` is strictly better than `b` in this kind's sense.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self.sense() {
            Sense::Maximize => a > b,
            Sense::Minimize => a < b,
        }
    }

    /// Equality used for alternate optima: exact for MaxMin (its value is
    /// always a stored entry), relative `tol` for the sum-type kinds.
    pub fn same_value(self, a: f64, b: f64, tol: f64) -> bool {
        match self {
            ObjectiveKind::MaxMin => a == b,
            _ => (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0),
        }
    }

    pub fn evaluate(self, inst: &Instance, sol: &Solution) -> Result<f64> {
        match self {
            ObjectiveKind::MaxSum => eval_maxsum(inst, sol),
            ObjectiveKind::MaxMin => eval_maxmin(inst, sol),
            ObjectiveKind::MaxMinSum => eval_maxminsum(inst, sol),
            ObjectiveKind::MinDiff => eval_mindiff(inst, sol),
            ObjectiveKind::MaxMean => eval_maxmean(inst, sol),
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maxsum" => Ok(ObjectiveKind::MaxSum),
            "maxmin" => Ok(ObjectiveKind::MaxMin),
            "maxminsum" => Ok(ObjectiveKind::MaxMinSum),
            "mindiff" => Ok(ObjectiveKind::MinDiff),
            "maxmean" => Ok(ObjectiveKind::MaxMean),
            other => Err(Error::InvalidSpec(format!("unknown objective {other:?}"))),
        }
    }
}

fn require_pairs(sol: &Solution) -> Result<()> {
    if sol.m() < 2 {
        return Err(Error::SelectionTooSmall { needed: 2, found: sol.m() });
    }
    Ok(())
}

pub fn eval_maxsum(inst: &Instance, sol: &Solution) -> Result<f64> {
    require_pairs(sol)?;
    Ok(sol.pairwise(inst).sum())
}

pub fn eval_maxmin(inst: &Instance, sol: &Solution) -> Result<f64> {
    require_pairs(sol)?;
    Ok(sol.pairwise(inst).fold(f64::INFINITY, f64::min))
}

/// `c(M, i)` for every selected `i`, in index order.
pub fn contribution_vector(inst: &Instance, sol: &Solution) -> Result<Vec<(usize, f64)>> {
    require_pairs(sol)?;
    Ok(sol
        .selected()
        .iter()
        .map(|&i| {
            let c = sol.selected().iter().filter(|&&j| j != i).map(|&j| inst.d(i, j)).sum();
            (i, c)
        })
        .collect())
}

pub fn eval_maxminsum(inst: &Instance, sol: &Solution) -> Result<f64> {
    Ok(contribution_vector(inst, sol)?
        .into_iter()
        .map(|(_, c)| c)
        .fold(f64::INFINITY, f64::min))
}

pub fn eval_mindiff(inst: &Instance, sol: &Solution) -> Result<f64> {
    let c = contribution_vector(inst, sol)?;
    let (lo, hi) = c
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
    Ok(hi - lo)
}

/// Average dispersion `sum / |M|`; defined for any nonempty selection.
pub fn eval_maxmean(inst: &Instance, sol: &Solution) -> Result<f64> {
    match sol.m() {
        0 => Err(Error::SelectionTooSmall { needed: 1, found: 0 }),
        1 => Ok(0.0),
        m => Ok(sol.pairwise(inst).sum::<f64>() / m as f64),
    }
}
