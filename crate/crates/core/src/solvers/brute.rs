//! Exhaustive enumeration. This is the reference oracle the other solvers
//! are tested against, so it deliberately shares no search code with them.

use std::time::Instant;

use super::{check_m, improves, maxmin, SolveResult, SolverBudget, Status, SUM_TOLERANCE};
use crate::error::Result;
use crate::instance::Instance;
use crate::objectives::{eval_maxmean, ObjectiveKind, Solution};

/// Alternate optima of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct Optima {
    pub value: f64,
    pub solutions: Vec<Solution>,
    /// More optima exist than were returned (or the search was cut short).
    pub truncated: bool,
    pub status: Status,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `f` on every `m`-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        f(&idx);
        let Some(k) = (0..m).rev().find(|&k| idx[k] < n - m + k) else { return };
        idx[k] += 1;
        for t in k + 1..m {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

fn too_many(kind: ObjectiveKind, elapsed: Instant) -> SolveResult {
    let mut r = SolveResult::new(kind, Status::BudgetExceeded, None, None);
    r.stats.wall_time = elapsed.elapsed();
    r
}

/// Exhaustive optimum; ties go to the lexicographically smallest subset.
/// For MaxMean, `m` is ignored and every nonempty subset is examined.
pub fn brute_force(inst: &Instance, m: usize, kind: ObjectiveKind, budget: &SolverBudget) -> Result<SolveResult> {
    let start = Instant::now();
    let n = inst.n();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut visited = 0u64;

    if kind == ObjectiveKind::MaxMean {
        if n >= 64 || (1u128 << n) > budget.max_subsets as u128 {
            return Ok(too_many(kind, start));
        }
        // Walk sizes then combinations so lexicographic order within a size
        // is preserved; ties across sizes compare index lists.
        for size in 1..=n {
            for_each_combination(n, size, |idx| {
                visited += 1;
                let v = eval_maxmean(inst, &Solution::from_sorted(idx.to_vec())).expect("nonempty");
                let take = match &best {
                    None => true,
                    Some((bv, bi)) => improves(kind, v, Some(*bv)) || (!improves(kind, *bv, Some(v)) && idx < bi.as_slice()),
                };
                if take {
                    best = Some((v, idx.to_vec()));
                }
            });
        }
    } else {
        check_m(inst, m)?;
        if binomial(n, m) > budget.max_subsets as u128 {
            return Ok(too_many(kind, start));
        }
        for_each_combination(n, m, |idx| {
            visited += 1;
            let sol = Solution::from_sorted(idx.to_vec());
            let v = kind.evaluate(inst, &sol).expect("m >= 2");
            if improves(kind, v, best.as_ref().map(|b| b.0)) {
                best = Some((v, idx.to_vec()));
            }
        });
    }

    let (value, idx) = best.expect("at least one subset");
    let mut r = SolveResult::new(kind, Status::Optimal, Some(Solution::from_sorted(idx)), Some(value));
    r.stats.nodes = visited;
    r.stats.wall_time = start.elapsed();
    Ok(r)
}

/// Every `m`-subset attaining the optimum (relative `tolerance` for sum-type
/// kinds, exact for MaxMin), lexicographic, at most `cap` of them.
///
/// MaxMin delegates to the threshold enumeration, which scales past the
/// brute-force range.
pub fn enumerate_optima(
    inst: &Instance,
    m: usize,
    kind: ObjectiveKind,
    cap: usize,
    tolerance: f64,
    budget: &SolverBudget,
) -> Result<Optima> {
    if kind == ObjectiveKind::MaxMin {
        return maxmin::enumerate_maxmin_optima(inst, m, cap, budget);
    }
    let best = brute_force(inst, m, kind, budget)?;
    let Some(value) = best.value else {
        return Ok(Optima { value: f64::NAN, solutions: Vec::new(), truncated: true, status: Status::BudgetExceeded });
    };
    let tol = if tolerance > 0.0 { tolerance } else { SUM_TOLERANCE };
    let mut solutions = Vec::new();
    let mut found = 0usize;
    for_each_combination(inst.n(), m, |idx| {
        let sol = Solution::from_sorted(idx.to_vec());
        let v = kind.evaluate(inst, &sol).expect("m >= 2");
        if kind.same_value(v, value, tol) {
            found += 1;
            if solutions.len() < cap {
                solutions.push(sol);
            }
        }
    });
    Ok(Optima { value, solutions, truncated: found > cap, status: Status::Optimal })
}
