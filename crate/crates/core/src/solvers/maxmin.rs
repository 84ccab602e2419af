//! MaxMin by threshold search.
//!
//! Both methods rely on monotonicity: if an `m`-subset with all pairwise
//! distances `>= l` exists, one exists for every `l' <= l`. The optimum `z*`
//! is the largest such `l`, and it is always one of the stored distances.

use std::time::Instant;

use super::threshold::{build_threshold_graph, decide_at, packing_in, Decision};
use super::{check_m, Bitset, SolveResult, SolverBudget, Status, Work};
use crate::error::Result;
use crate::instance::{spectrum_stats, Instance};
use crate::objectives::{eval_maxmin, ObjectiveKind, Solution};

/// One threshold evaluated during a search. `feasible` is `None` when the
/// call ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub l: f64,
    pub feasible: Option<bool>,
    /// Packing size for the original method; `None` for decision calls.
    pub packing: Option<usize>,
}

fn first_m(m: usize) -> Solution {
    Solution::from_sorted((0..m).collect())
}

fn finish(mut r: SolveResult, work_nodes: u64, start: Instant) -> SolveResult {
    r.stats.nodes = work_nodes;
    r.stats.wall_time = start.elapsed();
    r
}

/// Binary search over the sorted distinct distances, one feasibility
/// decision (size-constrained packing) per probe, starting at the median.
///
/// Invariant: `distinct[lo]` is feasible and `hi` is either the sentinel
/// past the end or an infeasible index, so `distinct[lo] <= z* < distinct[hi]`.
pub fn solve_maxmin_improved(inst: &Instance, m: usize, budget: &SolverBudget) -> Result<SolveResult> {
    check_m(inst, m)?;
    let start = Instant::now();
    let distinct = inst.distinct_distances();
    let mut work = Work::new(budget, start);
    let mut total_nodes = 0;
    let (mut lo, mut hi) = (0usize, distinct.len());
    // At l = d_min the conflict graph is empty and any m nodes qualify.
    let mut witness = first_m(m);
    let mut probes = Vec::new();
    let mut status = Status::Optimal;

    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let l = distinct[mid];
        let g = build_threshold_graph(inst, l);
        let mut call = work.child();
        let (d, wit) = decide_at(inst, &g, m, &mut call);
        total_nodes += call.nodes;
        match d {
            Decision::Found => {
                lo = mid;
                witness = wit.expect("witness on success");
            }
            Decision::NotFound => hi = mid,
            Decision::OutOfBudget => {
                probes.push(Probe { l, feasible: None, packing: None });
                status = Status::BudgetExceeded;
                break;
            }
        }
        probes.push(Probe { l, feasible: Some(d == Decision::Found), packing: None });
        work.nodes = total_nodes;
    }

    let value = eval_maxmin(inst, &witness)?;
    debug_assert!(status != Status::Optimal || value == distinct[lo]);
    let mut r = SolveResult::new(ObjectiveKind::MaxMin, status, Some(witness), Some(value));
    r.stats.decision_solves = probes.len() as u32;
    r.stats.probes = probes;
    Ok(finish(r, total_nodes, start))
}

/// Largest subinterval exponent accepted for the original method.
pub const MAX_Q: u32 = 60;

/// Subinterval search over `[d_min, d_max]` with maximum node packings.
///
/// The range is cut into `2^q` equal pieces, `q = ceil(log2(range / gap))`
/// with `gap` the smallest spacing of consecutive distinct distances, so each
/// piece holds at most one distinct value. A binary search over the piece
/// boundaries keeps `v(a) >= m > v(b)`; `z*` is then the distinct value in
/// `[a, b)`.
pub fn solve_maxmin_original(inst: &Instance, m: usize, budget: &SolverBudget) -> Result<SolveResult> {
    check_m(inst, m)?;
    let start = Instant::now();
    let stats = spectrum_stats(inst);
    let Some(gap) = stats.min_positive_gap else {
        let w = first_m(m);
        let v = eval_maxmin(inst, &w)?;
        return Ok(finish(SolveResult::new(ObjectiveKind::MaxMin, Status::Optimal, Some(w), Some(v)), 0, start));
    };
    let (d_min, d_max) = (stats.d_min, stats.d_max);
    let range = d_max - d_min;
    let q = budget
        .q
        .unwrap_or_else(|| (range / gap).log2().ceil().max(1.0) as u32)
        .clamp(1, MAX_Q);
    let pieces = 1u64 << q;
    let width = range / pieces as f64;
    let boundary = |k: u64| if k == pieces { d_max } else { d_min + k as f64 * width };

    let mut work = Work::new(budget, start);
    let mut total_nodes = 0;
    let mut probes = Vec::new();
    let mut status = Status::Optimal;
    let mut best_packing: Option<Vec<usize>> = None;

    // Boundary index `pieces + 1` stands for a threshold above d_max, where
    // the conflict graph is complete and v = 1 < m.
    let (mut lo, mut hi) = (0u64, pieces + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let l = boundary(mid);
        let g = build_threshold_graph(inst, l);
        let mut call = work.child();
        let (exact, packing) = packing_in(&g, &mut call);
        total_nodes += call.nodes;
        let v = packing.len();
        if v >= m {
            // A lower bound of m already decides the comparison.
            lo = mid;
            probes.push(Probe { l, feasible: Some(true), packing: Some(v) });
            best_packing = Some(packing);
        } else if exact {
            hi = mid;
            probes.push(Probe { l, feasible: Some(false), packing: Some(v) });
        } else {
            probes.push(Probe { l, feasible: None, packing: Some(v) });
            status = Status::BudgetExceeded;
            break;
        }
        work.nodes = total_nodes;
    }

    let a = boundary(lo);
    let b = if hi == pieces + 1 { f64::INFINITY } else { boundary(hi) };
    let mut candidates: Vec<f64> = inst.distinct_distances().into_iter().filter(|&d| d >= a && d < b).collect();

    let witness = if status == Status::Optimal && candidates.len() > 1 {
        // Rounding in the piece width (or a capped q) left several values in
        // the bracket; settle it with decisions from the top.
        candidates.reverse();
        let mut found = None;
        for &l in &candidates {
            let g = build_threshold_graph(inst, l);
            let mut call = work.child();
            let (d, wit) = decide_at(inst, &g, m, &mut call);
            total_nodes += call.nodes;
            probes.push(Probe { l, feasible: (d != Decision::OutOfBudget).then_some(d == Decision::Found), packing: None });
            match d {
                Decision::Found => {
                    found = wit;
                    break;
                }
                Decision::NotFound => {}
                Decision::OutOfBudget => {
                    status = Status::BudgetExceeded;
                    break;
                }
            }
        }
        found
    } else {
        None
    };
    let witness = witness.unwrap_or_else(|| match best_packing {
        Some(mut p) => {
            p.truncate(m);
            Solution::from_sorted(p)
        }
        None => first_m(m),
    });
    let value = eval_maxmin(inst, &witness)?;
    let mut r = SolveResult::new(ObjectiveKind::MaxMin, status, Some(witness), Some(value));
    r.stats.decision_solves = probes.len() as u32;
    r.stats.probes = probes;
    Ok(finish(r, total_nodes, start))
}

/// Lexicographic enumeration of `m`-subsets with all pairwise distances
/// `>= l`. Visits at most `limit` solutions. Returns `false` on budget loss.
pub(crate) fn enumerate_packings(
    inst: &Instance,
    l: f64,
    m: usize,
    limit: usize,
    work: &mut Work,
    mut emit: impl FnMut(&[usize]),
) -> bool {
    struct Walk<'a, F> {
        g: super::ThresholdGraph,
        chosen: Vec<usize>,
        count: usize,
        limit: usize,
        work: &'a mut Work,
        emit: F,
    }

    impl<F: FnMut(&[usize])> Walk<'_, F> {
        fn rec(&mut self, mut p: Bitset, need: usize) -> bool {
            if need == 0 {
                (self.emit)(&self.chosen);
                self.count += 1;
                return true;
            }
            if !self.work.tick() {
                return false;
            }
            while let Some(v) = p.first() {
                if self.count >= self.limit || self.g.packing_bound(&p, need) < need {
                    break;
                }
                p.remove(v);
                let mut next = p.clone();
                next.difference_with(self.g.neighbors(v));
                self.chosen.push(v);
                let ok = self.rec(next, need - 1);
                self.chosen.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let mut walk = Walk {
        g: build_threshold_graph(inst, l),
        chosen: Vec::with_capacity(m),
        count: 0,
        limit,
        work,
        emit: &mut emit,
    };
    walk.rec(Bitset::full(inst.n()), m)
}

/// All MaxMin optima in lexicographic order, up to `cap`. `truncated` is
/// set when more than `cap` optima exist or the budget ran out first.
pub fn enumerate_maxmin_optima(
    inst: &Instance,
    m: usize,
    cap: usize,
    budget: &SolverBudget,
) -> Result<super::Optima> {
    check_m(inst, m)?;
    let start = Instant::now();
    let base = solve_maxmin_improved(inst, m, budget)?;
    let z = base.value.expect("maxmin always has a witness");
    if base.status != Status::Optimal {
        return Ok(super::Optima {
            value: z,
            solutions: base.solution.into_iter().collect(),
            truncated: true,
            status: Status::BudgetExceeded,
        });
    }
    let mut work = Work::new(budget, start);
    let mut solutions = Vec::new();
    let ok = enumerate_packings(inst, z, m, cap.saturating_add(1), &mut work, |s| {
        solutions.push(Solution::from_sorted(s.to_vec()));
    });
    let truncated = solutions.len() > cap;
    solutions.truncate(cap);
    Ok(super::Optima {
        value: z,
        solutions,
        truncated: truncated || !ok,
        status: if ok { Status::Optimal } else { Status::BudgetExceeded },
    })
}
