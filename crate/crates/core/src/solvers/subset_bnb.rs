//! Depth-first branch and bound over `m`-subsets for the sum-type
//! objectives, optionally restricted to subsets whose pairwise distances
//! all reach a threshold (the bi-level feasible region).
//!
//! Nodes are visited in lexicographic order of the selected index list and
//! only strict improvements replace the incumbent, so ties resolve to the
//! lexicographically smallest optimum.

use std::time::Instant;

use super::threshold::build_threshold_graph;
use super::{check_m, improves, Bitset, SolveResult, SolverBudget, Status, ThresholdGraph, Work};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::{ObjectiveKind, Solution};

/// Sum of the `k` largest entries of `buf` (reorders `buf`).
fn top_sum(buf: &mut [f64], k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k >= buf.len() {
        return buf.iter().sum();
    }
    buf.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    buf[..k].iter().sum()
}

struct Search<'a> {
    inst: &'a Instance,
    kind: ObjectiveKind,
    graph: Option<ThresholdGraph>,
    chosen: Vec<usize>,
    /// `gain[r] = sum of d(r, s)` over chosen `s`.
    gain: Vec<f64>,
    internal: f64,
    best: Option<(f64, Vec<usize>)>,
    work: Work,
    scratch: Vec<f64>,
    scores: Vec<f64>,
}

impl Search<'_> {
    fn value(&self) -> f64 {
        let sol = Solution::from_sorted(self.chosen.clone());
        self.kind.evaluate(self.inst, &sol).expect("m >= 2")
    }

    /// `(a_r + top_{p-1} d(r, P \ r))` per candidate, into `self.scores`.
    fn fill_scores(&mut self, cands: &[usize], p: usize, half: bool) {
        self.scores.clear();
        for &r in cands {
            self.scratch.clear();
            let row = self.inst.row(r);
            self.scratch.extend(cands.iter().filter(|&&t| t != r).map(|&t| row[t]));
            let pair = top_sum(&mut self.scratch, p - 1);
            self.scores.push(self.gain[r] + if half { 0.5 * pair } else { pair });
        }
    }

    fn bound(&mut self, cands: &[usize], p: usize) -> f64 {
        match self.kind {
            ObjectiveKind::MaxSum => {
                self.fill_scores(cands, p, true);
                let mut s = std::mem::take(&mut self.scores);
                let b = self.internal + top_sum(&mut s, p);
                self.scores = s;
                b
            }
            ObjectiveKind::MaxMinSum => {
                // Each chosen i ends at c_S(i) plus at most its p largest
                // links into the candidates.
                let mut b1 = f64::INFINITY;
                for k in 0..self.chosen.len() {
                    let i = self.chosen[k];
                    self.scratch.clear();
                    let row = self.inst.row(i);
                    self.scratch.extend(cands.iter().map(|&t| row[t]));
                    let v = self.gain[i] + top_sum(&mut self.scratch, p);
                    b1 = b1.min(v);
                }
                // The weakest of the p added nodes scores at most the p-th
                // largest candidate score.
                self.fill_scores(cands, p, false);
                let mut s = std::mem::take(&mut self.scores);
                s.select_nth_unstable_by(p - 1, |a, b| b.total_cmp(a));
                let b2 = s[p - 1];
                self.scores = s;
                b1.min(b2)
            }
            _ => unreachable!("bnb handles sum-type kinds only"),
        }
    }

    fn pruned_by_incumbent(&self, bound: f64) -> bool {
        match &self.best {
            Some((best, _)) => bound <= best + 1e-12 * best.abs().max(1.0),
            None => false,
        }
    }

    fn push(&mut self, v: usize) {
        self.internal += self.gain[v];
        self.chosen.push(v);
        let row = self.inst.row(v);
        for (g, &d) in self.gain.iter_mut().zip(row) {
            *g += d;
        }
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().expect("nonempty");
        let row = self.inst.row(v);
        for (g, &d) in self.gain.iter_mut().zip(row) {
            *g -= d;
        }
        self.internal -= self.gain[v];
    }

    /// Returns `false` when the budget runs out.
    fn rec(&mut self, mut p: Bitset, need: usize) -> bool {
        if need == 0 {
            let v = self.value();
            if improves(self.kind, v, self.best.as_ref().map(|b| b.0)) {
                self.best = Some((v, self.chosen.clone()));
            }
            return true;
        }
        if !self.work.tick() {
            return false;
        }
        if p.count() < need {
            return true;
        }
        if let Some(g) = &self.graph {
            if g.packing_bound(&p, need) < need {
                return true;
            }
        }
        let cands: Vec<usize> = p.iter().collect();
        let bound = self.bound(&cands, need);
        if self.pruned_by_incumbent(bound) {
            return true;
        }
        for v in cands {
            p.remove(v);
            if p.count() + 1 < need {
                break;
            }
            let mut next = p.clone();
            if let Some(g) = &self.graph {
                next.difference_with(g.neighbors(v));
            }
            self.push(v);
            let ok = self.rec(next, need - 1);
            self.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Branch and bound for MaxSum or MaxMinSum. With `threshold = Some(t)` only
/// subsets whose pairwise distances are all `>= t` are feasible.
pub(crate) fn bnb(
    inst: &Instance,
    m: usize,
    kind: ObjectiveKind,
    threshold: Option<f64>,
    budget: &SolverBudget,
) -> Result<SolveResult> {
    check_m(inst, m)?;
    if !matches!(kind, ObjectiveKind::MaxSum | ObjectiveKind::MaxMinSum) {
        return Err(Error::InvalidSpec(format!("branch and bound does not handle {kind}")));
    }
    let start = Instant::now();
    let mut s = Search {
        inst,
        kind,
        graph: threshold.map(|t| build_threshold_graph(inst, t)),
        chosen: Vec::with_capacity(m),
        gain: vec![0.0; inst.n()],
        internal: 0.0,
        best: None,
        work: Work::new(budget, start),
        scratch: Vec::with_capacity(inst.n()),
        scores: Vec::with_capacity(inst.n()),
    };
    let complete = s.rec(Bitset::full(inst.n()), m);
    let status = match (&s.best, complete) {
        (Some(_), true) => Status::Optimal,
        (None, true) => Status::Infeasible,
        (_, false) => Status::BudgetExceeded,
    };
    let (value, solution) = match s.best.take() {
        Some((v, idx)) => (Some(v), Some(Solution::from_sorted(idx))),
        None => (None, None),
    };
    let mut r = SolveResult::new(kind, status, solution, value);
    r.stats.nodes = s.work.nodes;
    r.stats.wall_time = start.elapsed();
    Ok(r)
}

pub fn solve_maxsum_bnb(inst: &Instance, m: usize, budget: &SolverBudget) -> Result<SolveResult> {
    bnb(inst, m, ObjectiveKind::MaxSum, None, budget)
}

pub fn solve_maxminsum_bnb(inst: &Instance, m: usize, budget: &SolverBudget) -> Result<SolveResult> {
    bnb(inst, m, ObjectiveKind::MaxMinSum, None, budget)
}
