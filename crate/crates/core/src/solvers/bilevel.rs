//! Bi-level MaxSum / MaxMinSum: optimize the upper objective over subsets
//! whose pairwise distances all reach the MaxMin optimum `d*`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::maxmin::{enumerate_packings, solve_maxmin_improved};
use super::subset_bnb::bnb;
use super::{check_m, improves, SolverBudget, Status, Work};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::{ObjectiveKind, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiLevelMode {
    /// Enumerate MaxMin optima up to the cap and keep the best one.
    Enumerate,
    /// Branch and bound over every subset feasible at `d*`.
    Exact,
}

impl FromStr for BiLevelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "enumerate" => Ok(BiLevelMode::Enumerate),
            "exact" => Ok(BiLevelMode::Exact),
            other => Err(Error::InvalidSpec(format!("unknown bi-level mode {other:?}"))),
        }
    }
}

impl fmt::Display for BiLevelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BiLevelMode::Enumerate => "enumerate",
            BiLevelMode::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiLevelResult {
    pub d_star: f64,
    /// MaxMin optima examined (enumerate mode); 0 in exact mode.
    pub optima_enumerated: usize,
    pub cap: usize,
    /// The cap was hit before the optima were exhausted; `chosen` is then
    /// only the best among those seen.
    pub truncated: bool,
    pub upper_kind: ObjectiveKind,
    pub chosen: Solution,
    pub upper_value: f64,
    pub mode: BiLevelMode,
    pub status: Status,
}

pub fn solve_bilevel(
    inst: &Instance,
    m: usize,
    upper_kind: ObjectiveKind,
    cap: usize,
    budget: &SolverBudget,
    mode: BiLevelMode,
) -> Result<BiLevelResult> {
    check_m(inst, m)?;
    if !matches!(upper_kind, ObjectiveKind::MaxSum | ObjectiveKind::MaxMinSum) {
        return Err(Error::InvalidSpec(format!("bi-level upper objective must be maxsum or maxminsum, got {upper_kind}")));
    }
    if cap == 0 {
        return Err(Error::InvalidSpec("cap must be positive".into()));
    }
    let lower = solve_maxmin_improved(inst, m, budget)?;
    let d_star = lower.value.expect("maxmin witness");
    let lower_witness = lower.solution.clone().expect("maxmin witness");
    let lower_value = upper_kind.evaluate(inst, &lower_witness)?;
    if lower.status != Status::Optimal {
        return Ok(BiLevelResult {
            d_star,
            optima_enumerated: 0,
            cap,
            truncated: true,
            upper_kind,
            chosen: lower_witness,
            upper_value: lower_value,
            mode,
            status: Status::BudgetExceeded,
        });
    }

    match mode {
        BiLevelMode::Enumerate => {
            let mut work = Work::new(budget, Instant::now());
            let mut best: Option<(f64, Vec<usize>)> = None;
            let mut seen = 0usize;
            let mut more = false;
            let ok = enumerate_packings(inst, d_star, m, cap.saturating_add(1), &mut work, |s| {
                if seen == cap {
                    more = true;
                    return;
                }
                seen += 1;
                let v = upper_kind.evaluate(inst, &Solution::from_sorted(s.to_vec())).expect("m >= 2");
                if improves(upper_kind, v, best.as_ref().map(|b| b.0)) {
                    best = Some((v, s.to_vec()));
                }
            });
            let (upper_value, idx) = best.expect("the MaxMin witness itself is an optimum");
            Ok(BiLevelResult {
                d_star,
                optima_enumerated: seen,
                cap,
                truncated: more || !ok,
                upper_kind,
                chosen: Solution::from_sorted(idx),
                upper_value,
                mode,
                status: if ok { Status::Optimal } else { Status::BudgetExceeded },
            })
        }
        BiLevelMode::Exact => {
            let r = bnb(inst, m, upper_kind, Some(d_star), budget)?;
            let (chosen, upper_value) = match (r.solution, r.value) {
                (Some(s), Some(v)) => (s, v),
                _ => (lower_witness, lower_value),
            };
            Ok(BiLevelResult {
                d_star,
                optima_enumerated: 0,
                cap,
                truncated: false,
                upper_kind,
                chosen,
                upper_value,
                mode,
                status: if r.status == Status::Optimal { Status::Optimal } else { Status::BudgetExceeded },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::{t4, unit_square};
    use crate::instance::{generate, Family, GeneratorSpec};
    use crate::objectives::eval_maxmin;
    use crate::solvers::{solve_maxsum_bnb, SolverBudget};

    fn b() -> SolverBudget {
        SolverBudget::default()
    }

    #[test]
    fn t4_bilevel() {
        for mode in [BiLevelMode::Enumerate, BiLevelMode::Exact] {
            let r = solve_bilevel(&t4(), 3, ObjectiveKind::MaxSum, 100_000, &b(), mode).unwrap();
            assert_eq!(r.d_star, 4.0);
            assert_eq!(r.chosen.selected(), &[1, 2, 3]);
            assert_eq!(r.upper_value, 15.0);
            assert_eq!(r.status, Status::Optimal);
        }
        let r = solve_bilevel(&t4(), 3, ObjectiveKind::MaxSum, 100_000, &b(), BiLevelMode::Enumerate).unwrap();
        assert_eq!(r.optima_enumerated, 1);
        assert!(!r.truncated);
    }

    #[test]
    fn unit_square_tie_is_lexicographic() {
        let r = solve_bilevel(&unit_square(), 2, ObjectiveKind::MaxSum, 100_000, &b(), BiLevelMode::Enumerate).unwrap();
        assert_eq!(r.d_star, 2f64.sqrt());
        assert_eq!(r.optima_enumerated, 2);
        assert_eq!(r.upper_value, 2f64.sqrt());
        assert_eq!(r.chosen.selected(), &[0, 2]);
        let capped = solve_bilevel(&unit_square(), 2, ObjectiveKind::MaxSum, 1, &b(), BiLevelMode::Enumerate).unwrap();
        assert!(capped.truncated);
        assert_eq!(capped.optima_enumerated, 1);
    }

    #[test]
    fn sandwich_on_random_instances() {
        for seed in 0..10 {
            let inst = generate(&GeneratorSpec::new(Family::GkdD, 12, 4, seed)).unwrap();
            let r = solve_bilevel(&inst, 4, ObjectiveKind::MaxSum, 100_000, &b(), BiLevelMode::Exact).unwrap();
            assert_eq!(eval_maxmin(&inst, &r.chosen).unwrap(), r.d_star);
            let unconstrained = solve_maxsum_bnb(&inst, 4, &b()).unwrap().value.unwrap();
            assert!(r.upper_value <= unconstrained + 1e-9);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(solve_bilevel(&t4(), 3, ObjectiveKind::MinDiff, 10, &b(), BiLevelMode::Exact).is_err());
        assert!(solve_bilevel(&t4(), 3, ObjectiveKind::MaxSum, 0, &b(), BiLevelMode::Exact).is_err());
        assert_eq!("exact".parse::<BiLevelMode>().unwrap(), BiLevelMode::Exact);
    }
}
