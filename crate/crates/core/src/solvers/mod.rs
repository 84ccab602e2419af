//! Exact solvers.
//!
//! Every solver is single-threaded and deterministic for a given budget.
//! Running out of budget never errors: the result carries
//! [`Status::BudgetExceeded`] together with the best incumbent found.

mod bilevel;
mod bitset;
mod brute;
mod maxmin;
mod subset_bnb;
mod threshold;

use std::fmt;
use std::time::{Duration, Instant};

pub use bilevel::{solve_bilevel, BiLevelMode, BiLevelResult};
pub use bitset::Bitset;
pub use brute::{brute_force, enumerate_optima, Optima};
pub use maxmin::{enumerate_maxmin_optima, solve_maxmin_improved, solve_maxmin_original, Probe};
pub use subset_bnb::{solve_maxminsum_bnb, solve_maxsum_bnb};
pub use threshold::{build_threshold_graph, feasible_subset, max_packing, ThresholdGraph};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::{ObjectiveKind, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    BudgetExceeded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "Optimal",
            Status::Feasible => "Feasible",
            Status::Infeasible => "Infeasible",
            Status::BudgetExceeded => "BudgetExceeded",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    /// Subsets enumerated (oracle) or search nodes expanded (B&B, backtracking).
    pub nodes: u64,
    /// Feasibility or packing calls; 0 for non-MaxMin solvers.
    pub decision_solves: u32,
    pub wall_time: Duration,
    /// Thresholds probed by the MaxMin searches, in call order.
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub kind: ObjectiveKind,
    pub solution: Option<Solution>,
    pub value: Option<f64>,
    pub status: Status,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn new(kind: ObjectiveKind, status: Status, solution: Option<Solution>, value: Option<f64>) -> Self {
        SolveResult { kind, solution, value, status, stats: SolveStats::default() }
    }
}

/// Work limits shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverBudget {
    /// Upper bound on subsets the brute-force oracle may enumerate.
    pub max_subsets: u64,
    /// Search nodes per backtracking or branch-and-bound call.
    pub max_nodes: u64,
    pub time_limit: Duration,
    /// Subinterval exponent for the original MaxMin method.
    pub q: Option<u32>,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_subsets: 50_000_000,
            max_nodes: 200_000_000,
            time_limit: Duration::from_secs(60),
            q: None,
        }
    }
}

impl SolverBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_subsets == 0 || self.max_nodes == 0 || self.time_limit.is_zero() || self.q == Some(0) {
            return Err(Error::InvalidSpec("budget fields must be positive".into()));
        }
        Ok(())
    }
}

/// Node counter plus wall-clock deadline for one solver call.
#[derive(Debug)]
pub(crate) struct Work {
    pub nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    exhausted: bool,
}

impl Work {
    pub fn new(budget: &SolverBudget, start: Instant) -> Self {
        Work {
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: start + budget.time_limit,
            exhausted: false,
        }
    }

    /// Counts one node; `false` once the budget is gone.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes & 0x3ff == 0 && Instant::now() >= self.deadline) {
            self.exhausted = true;
        }
        !self.exhausted
    }

    /// Fresh node allowance for a nested call, keeping the deadline.
    pub fn child(&self) -> Work {
        Work { nodes: 0, max_nodes: self.max_nodes, deadline: self.deadline, exhausted: false }
    }
}

pub(crate) fn check_m(inst: &Instance, m: usize) -> Result<()> {
    if m < 2 || m > inst.n() {
        return Err(Error::InvalidM { m, n: inst.n() });
    }
    Ok(())
}

/// Relative slack used when comparing sum-type objective values.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// `true` when `cand` should replace `best` given lexicographic visiting
/// order: strictly better, beyond float noise for sum-type kinds.
pub(crate) fn improves(kind: ObjectiveKind, cand: f64, best: Option<f64>) -> bool {
    let Some(best) = best else { return true };
    match kind {
        ObjectiveKind::MaxMin => cand > best,
        _ => {
            let slack = 1e-12 * best.abs().max(cand.abs()).max(1.0);
            match kind.sense() {
                crate::objectives::Sense::Maximize => cand > best + slack,
                crate::objectives::Sense::Minimize => cand < best - slack,
            }
        }
    }
}

/// Native exact solver for `kind`: threshold search for MaxMin, branch and
/// bound for MaxSum and MaxMinSum, enumeration for MinDiff and MaxMean.
pub fn solve(inst: &Instance, m: usize, kind: ObjectiveKind, budget: &SolverBudget) -> Result<SolveResult> {
    match kind {
        ObjectiveKind::MaxMin => solve_maxmin_improved(inst, m, budget),
        ObjectiveKind::MaxSum => solve_maxsum_bnb(inst, m, budget),
        ObjectiveKind::MaxMinSum => solve_maxminsum_bnb(inst, m, budget),
        ObjectiveKind::MinDiff | ObjectiveKind::MaxMean => brute_force(inst, m, kind, budget),
    }
}
