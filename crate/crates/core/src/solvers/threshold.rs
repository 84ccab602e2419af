//! Threshold conflict graphs and the independent-set kernels behind the
//! MaxMin searches.

use std::time::Instant;

use super::{check_m, Bitset, SolveResult, SolverBudget, Status, Work};
use crate::error::Result;
use crate::instance::Instance;
use crate::objectives::{eval_maxmin, ObjectiveKind, Solution};

/// `G(l)`: an edge joins `i != j` iff `d_ij < l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGraph {
    pub l: f64,
    adj: Vec<Bitset>,
}

pub fn build_threshold_graph(inst: &Instance, l: f64) -> ThresholdGraph {
    let n = inst.n();
    let adj = (0..n)
        .map(|i| {
            let mut row = Bitset::new(n);
            for (j, &d) in inst.row(i).iter().enumerate() {
                if j != i && d < l {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    ThresholdGraph { l, adj }
}

impl ThresholdGraph {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, i: usize) -> &Bitset {
        &self.adj[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    /// Edges `(i, j)` with `i < j`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|i| self.adj[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn is_independent(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(a, &i)| nodes[a + 1..].iter().all(|&j| !self.adjacent(i, j)))
    }

    fn degree_in(&self, v: usize, p: &Bitset) -> usize {
        self.adj[v].intersection_count(p)
    }

    /// Removes `v` and its neighbors from `p`.
    pub(crate) fn take(&self, p: &mut Bitset, v: usize) {
        p.remove(v);
        p.difference_with(&self.adj[v]);
    }

    /// Greedy partition of `p` into cliques; stops counting at `stop`.
    /// Any independent set inside `p` uses at most one node per clique.
    pub(crate) fn clique_cover(&self, p: &Bitset, stop: usize) -> usize {
        let mut rest = p.clone();
        let mut cliques = 0;
        while let Some(u) = rest.first() {
            cliques += 1;
            if cliques >= stop {
                return cliques;
            }
            rest.remove(u);
            let mut cand = rest.clone();
            cand.intersect_with(&self.adj[u]);
            while let Some(w) = cand.first() {
                rest.remove(w);
                cand.remove(w);
                cand.intersect_with(&self.adj[w]);
            }
        }
        cliques
    }

    /// Upper bound on the independence number of `G[p]`, capped at `stop`.
    pub(crate) fn packing_bound(&self, p: &Bitset, stop: usize) -> usize {
        let c = p.count();
        if c < stop {
            return c;
        }
        self.clique_cover(p, stop)
    }

    /// Moves every node of degree <= 1 in `G[p]` into `chosen`; such a node
    /// belongs to some maximum independent set. Stops once `chosen` reaches
    /// `limit`.
    fn reduce(&self, p: &mut Bitset, chosen: &mut Vec<usize>, limit: usize) {
        'outer: while chosen.len() < limit {
            let found = p.iter().find(|&v| self.degree_in(v, p) <= 1);
            match found {
                Some(v) => {
                    chosen.push(v);
                    self.take(p, v);
                    continue 'outer;
                }
                None => break,
            }
        }
    }

    /// Candidate of maximum degree in `G[p]`, lowest index on ties.
    fn branch_vertex(&self, p: &Bitset) -> usize {
        let mut best = (0, usize::MAX);
        for v in p.iter() {
            let d = self.degree_in(v, p);
            if best.1 == usize::MAX || d > best.0 {
                best = (d, v);
            }
        }
        best.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Decision {
    Found,
    NotFound,
    OutOfBudget,
}

/// Backtracking search for `need` more pairwise non-adjacent nodes inside
/// `p`. On `Found`, `chosen` holds the witness (unsorted).
pub(crate) fn decide(g: &ThresholdGraph, mut p: Bitset, need: usize, chosen: &mut Vec<usize>, work: &mut Work) -> Decision {
    let mark = chosen.len();
    let target = mark + need;
    if !work.tick() {
        return Decision::OutOfBudget;
    }
    g.reduce(&mut p, chosen, target);
    if chosen.len() == target {
        return Decision::Found;
    }
    let need = target - chosen.len();
    if g.packing_bound(&p, need) < need {
        chosen.truncate(mark);
        return Decision::NotFound;
    }
    let v = g.branch_vertex(&p);
    let mut without = p.clone();
    without.remove(v);
    match decide(g, without, need, chosen, work) {
        Decision::NotFound => {}
        other => return other,
    }
    g.take(&mut p, v);
    chosen.push(v);
    match decide(g, p, need - 1, chosen, work) {
        Decision::NotFound => {
            chosen.truncate(mark);
            Decision::NotFound
        }
        other => other,
    }
}

/// Maximum independent set of `G[p]` by branch and bound on the clique
/// cover bound. Returns `false` if the budget ran out (best is then a lower
/// bound).
fn mis(g: &ThresholdGraph, mut p: Bitset, chosen: &mut Vec<usize>, best: &mut Vec<usize>, work: &mut Work) -> bool {
    if !work.tick() {
        return false;
    }
    let mark = chosen.len();
    g.reduce(&mut p, chosen, usize::MAX);
    let ok = 'body: {
        if p.is_empty() {
            if chosen.len() > best.len() {
                best.clone_from(chosen);
            }
            break 'body true;
        }
        let room = best.len() + 1 - chosen.len().min(best.len() + 1);
        if room > 0 && g.packing_bound(&p, room) < room {
            break 'body true;
        }
        let v = g.branch_vertex(&p);
        let mut with = p.clone();
        g.take(&mut with, v);
        chosen.push(v);
        let ok = mis(g, with, chosen, best, work);
        chosen.pop();
        if !ok {
            break 'body false;
        }
        p.remove(v);
        mis(g, p, chosen, best, work)
    };
    chosen.truncate(mark);
    ok
}

fn sorted_solution(mut nodes: Vec<usize>) -> Solution {
    nodes.sort_unstable();
    Solution::from_sorted(nodes)
}

pub(crate) fn decide_at(inst: &Instance, g: &ThresholdGraph, m: usize, work: &mut Work) -> (Decision, Option<Solution>) {
    let mut chosen = Vec::with_capacity(m);
    let d = decide(g, Bitset::full(inst.n()), m, &mut chosen, work);
    let wit = (d == Decision::Found).then(|| sorted_solution(chosen));
    (d, wit)
}

/// Is there an `m`-subset whose pairwise distances are all `>= l`?
pub fn feasible_subset(inst: &Instance, l: f64, m: usize, budget: &SolverBudget) -> Result<SolveResult> {
    check_m(inst, m)?;
    let start = Instant::now();
    let mut work = Work::new(budget, start);
    let g = build_threshold_graph(inst, l);
    let (d, wit) = decide_at(inst, &g, m, &mut work);
    let status = match d {
        Decision::Found => Status::Feasible,
        Decision::NotFound => Status::Infeasible,
        Decision::OutOfBudget => Status::BudgetExceeded,
    };
    let value = wit.as_ref().map(|w| eval_maxmin(inst, w)).transpose()?;
    let mut r = SolveResult::new(ObjectiveKind::MaxMin, status, wit, value);
    r.stats.nodes = work.nodes;
    r.stats.decision_solves = 1;
    r.stats.wall_time = start.elapsed();
    Ok(r)
}

pub(crate) fn packing_in(g: &ThresholdGraph, work: &mut Work) -> (bool, Vec<usize>) {
    let n = g.n();
    // Greedy minimum-degree start.
    let mut best = Vec::new();
    let mut p = Bitset::full(n);
    while !p.is_empty() {
        let v = p.iter().min_by_key(|&v| (g.degree_in(v, &p), v)).unwrap();
        best.push(v);
        g.take(&mut p, v);
    }
    let mut chosen = Vec::new();
    let exact = mis(g, Bitset::full(n), &mut chosen, &mut best, work);
    best.sort_unstable();
    (exact, best)
}

/// Maximum node packing `v(l)` in `G(l)`; `value` is the packing size.
pub fn max_packing(inst: &Instance, l: f64, budget: &SolverBudget) -> Result<SolveResult> {
    let start = Instant::now();
    let mut work = Work::new(budget, start);
    let g = build_threshold_graph(inst, l);
    let (exact, best) = packing_in(&g, &mut work);
    let status = if exact { Status::Optimal } else { Status::BudgetExceeded };
    let v = best.len() as f64;
    let mut r = SolveResult::new(ObjectiveKind::MaxMin, status, Some(Solution::from_sorted(best)), Some(v));
    r.stats.nodes = work.nodes;
    r.stats.decision_solves = 1;
    r.stats.wall_time = start.elapsed();
    Ok(r)
}
