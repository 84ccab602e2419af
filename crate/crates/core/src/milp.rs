//! MILP formulations written as CPLEX-LP text, plus a checker for
//! externally produced solutions.
//!
//! Variable scheme (node indices are 0-based, as in the instance file):
//!
//! | name      | meaning                                          |
//! |-----------|--------------------------------------------------|
//! | `x_i`     | binary, node `i` is selected                     |
//! | `y_i_j`   | continuous >= 0, stands for `x_i x_j` (`i < j`)  |
//! | `w_i`     | free, row contribution in the w-decomposition    |
//! | `w`       | free, minimum pairwise distance                  |
//! | `s`, `r`  | free, minimum and maximum contribution           |
//! | `t`       | free, contribution spread                        |

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::{ObjectiveKind, Solution};
use crate::solvers::build_threshold_graph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormulationKind {
    /// MaxSum with `y_ij` product linearization.
    MaxSumKuo,
    /// MaxSum with the per-row `w_i` decomposition.
    MaxSumW,
    MaxMinKuo,
    MaxMinSumTight,
    MinDiffTight,
    /// Maximum node packing in `G(l)`.
    NodePacking(f64),
    /// Size-`m` packing in `G(l)` as a pure feasibility model.
    PackingFeasibility(f64),
}

impl FormulationKind {
    pub fn name(&self) -> &'static str {
        match self {
            FormulationKind::MaxSumKuo => "maxsum-kuo",
            FormulationKind::MaxSumW => "maxsum-w",
            FormulationKind::MaxMinKuo => "maxmin-kuo",
            FormulationKind::MaxMinSumTight => "maxminsum-tight",
            FormulationKind::MinDiffTight => "mindiff-tight",
            FormulationKind::NodePacking(_) => "node-packing",
            FormulationKind::PackingFeasibility(_) => "packing-feasibility",
        }
    }

    /// Native objective whose optimum the formulation's optimum equals.
    pub fn objective(&self) -> Option<ObjectiveKind> {
        match self {
            FormulationKind::MaxSumKuo | FormulationKind::MaxSumW => Some(ObjectiveKind::MaxSum),
            FormulationKind::MaxMinKuo => Some(ObjectiveKind::MaxMin),
            FormulationKind::MaxMinSumTight => Some(ObjectiveKind::MaxMinSum),
            FormulationKind::MinDiffTight => Some(ObjectiveKind::MinDiff),
            FormulationKind::NodePacking(_) | FormulationKind::PackingFeasibility(_) => None,
        }
    }

    fn threshold(&self) -> Option<f64> {
        match *self {
            FormulationKind::NodePacking(l) | FormulationKind::PackingFeasibility(l) => Some(l),
            _ => None,
        }
    }

    fn has_cardinality(&self) -> bool {
        !matches!(self, FormulationKind::NodePacking(_))
    }

    /// Parses a kind name; threshold kinds take `l`.
    pub fn parse(name: &str, l: Option<f64>) -> Result<Self> {
        let need_l = || l.filter(|v| v.is_finite()).ok_or(Error::MissingThreshold);
        Ok(match name.to_ascii_lowercase().as_str() {
            "maxsum-kuo" => FormulationKind::MaxSumKuo,
            "maxsum" | "maxsum-w" => FormulationKind::MaxSumW,
            "maxmin" | "maxmin-kuo" => FormulationKind::MaxMinKuo,
            "maxminsum" | "maxminsum-tight" => FormulationKind::MaxMinSumTight,
            "mindiff" | "mindiff-tight" => FormulationKind::MinDiffTight,
            "node-packing" | "packing" => FormulationKind::NodePacking(need_l()?),
            "packing-feasibility" | "feasibility" => FormulationKind::PackingFeasibility(need_l()?),
            other => return Err(Error::InvalidSpec(format!("unknown formulation {other:?}"))),
        })
    }
}

impl fmt::Display for FormulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.threshold() {
            Some(l) => write!(f, "{}(l={l})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for FormulationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulationKind::parse(s, None)
    }
}

/// Big-M and bound constants of the formulations.
#[derive(Debug, Clone, PartialEq)]
pub struct TighteningConstants {
    pub c: f64,
    pub d_bar: Vec<f64>,
    pub d_dbar: Vec<f64>,
    pub u_plus: f64,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
    pub l_minus: f64,
}

pub fn compute_constants(inst: &Instance) -> TighteningConstants {
    let n = inst.n();
    let mut d_bar = vec![0.0; n];
    let mut d_dbar = vec![0.0; n];
    let mut l = vec![0.0; n];
    let mut u = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = inst.d(i, j);
            if j > i {
                d_bar[i] += d.max(0.0);
                d_dbar[i] += d.min(0.0);
            }
            l[i] += d.min(0.0);
            u[i] += d.max(0.0);
        }
    }
    let u_plus = 1.0 + u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l_minus = l.iter().copied().fold(f64::INFINITY, f64::min);
    TighteningConstants {
        c: inst.d_max() + 1.0,
        d_bar,
        d_dbar,
        u_plus,
        l,
        u,
        l_minus,
    }
}

/// Linear expression builder with deterministic term order.
#[derive(Default)]
struct Expr(Vec<(f64, String)>);

impl Expr {
    fn add(mut self, coef: f64, var: impl Into<String>) -> Self {
        if coef != 0.0 {
            self.0.push((coef, var.into()));
        }
        self
    }

    /// Keeps the term even when `coef` is zero.
    fn add_always(mut self, coef: f64, var: impl Into<String>) -> Self {
        self.0.push((coef, var.into()));
        self
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, (c, v)) in self.0.iter().enumerate() {
            let neg = c.is_sign_negative() && *c != 0.0;
            let mag = c.abs();
            match (k, neg) {
                (0, true) => s.push_str("- "),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if mag != 1.0 {
                let _ = write!(s, "{mag} ");
            }
            s.push_str(v);
        }
        s
    }
}

fn x(i: usize) -> String {
    format!("x_{i}")
}

fn y(i: usize, j: usize) -> String {
    format!("y_{i}_{j}")
}

struct Lp {
    head: String,
    objective: String,
    rows: Vec<String>,
    bounds: Vec<String>,
    binaries: Vec<String>,
}

impl Lp {
    fn row(&mut self, name: String, e: Expr, op: &str, rhs: f64) {
        self.rows.push(format!(" {name}: {} {op} {rhs}", e.render()));
    }

    fn finish(self) -> String {
        let mut s = self.head;
        s.push_str(&self.objective);
        s.push_str("Subject To\n");
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s.push_str("Bounds\n");
        for b in &self.bounds {
            let _ = writeln!(s, " {b}");
        }
        s.push_str("Binaries\n");
        for chunk in self.binaries.chunks(10) {
            let _ = writeln!(s, " {}", chunk.join(" "));
        }
        s.push_str("End\n");
        s
    }
}

fn join_vals(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Emits `kind` for `inst` as LP text. `m` is the subset size (ignored by
/// [`FormulationKind::NodePacking`]).
pub fn emit(inst: &Instance, m: usize, kind: FormulationKind) -> Result<String> {
    let n = inst.n();
    if let Some(l) = kind.threshold() {
        if !l.is_finite() {
            return Err(Error::MissingThreshold);
        }
    }
    let m_ok = match kind {
        FormulationKind::NodePacking(_) => true,
        FormulationKind::PackingFeasibility(_) => (1..=n).contains(&m),
        _ => (2..=n).contains(&m),
    };
    if !m_ok {
        return Err(Error::InvalidM { m, n });
    }
    let k = compute_constants(inst);

    let mut head = String::new();
    let _ = writeln!(head, "\\ instance: {}", if inst.name.is_empty() { "(unnamed)" } else { &inst.name });
    let _ = writeln!(head, "\\ formulation: {kind}");
    if kind.has_cardinality() {
        let _ = writeln!(head, "\\ n = {n}, m = {m}");
    } else {
        let _ = writeln!(head, "\\ n = {n}");
    }
    let _ = writeln!(head, "\\ C = {}, U+ = {}, L- = {}", k.c, k.u_plus, k.l_minus);
    let _ = writeln!(head, "\\ U_i = {}", join_vals(&k.u));
    let _ = writeln!(head, "\\ L_i = {}", join_vals(&k.l));
    let _ = writeln!(head, "\\ Dbar_i = {}", join_vals(&k.d_bar));
    let _ = writeln!(head, "\\ Ddbar_i = {}", join_vals(&k.d_dbar));
    head.push_str("\\ variables: x_i select node i (0-based); y_i_j product x_i x_j; w_i, w, s, r, t auxiliaries\n");

    let mut lp = Lp {
        head,
        objective: String::new(),
        rows: Vec::new(),
        bounds: Vec::new(),
        binaries: (0..n).map(x).collect(),
    };
    let card = |lp: &mut Lp| {
        let e = (0..n).fold(Expr::default(), |e, i| e.add_always(1.0, x(i)));
        lp.row("card".into(), e, "=", m as f64);
    };
    let linking = |lp: &mut Lp| {
        for (i, j, _) in inst.pairs() {
            lp.row(format!("link_{i}_{j}_a"), Expr::default().add(1.0, x(i)).add(1.0, x(j)).add(-1.0, y(i, j)), "<=", 1.0);
            lp.row(format!("link_{i}_{j}_b"), Expr::default().add(-1.0, x(i)).add(1.0, y(i, j)), "<=", 0.0);
            lp.row(format!("link_{i}_{j}_c"), Expr::default().add(-1.0, x(j)).add(1.0, y(i, j)), "<=", 0.0);
        }
    };
    let y_bounds = |lp: &mut Lp| {
        for (i, j, _) in inst.pairs() {
            lp.bounds.push(format!("{} >= 0", y(i, j)));
        }
    };
    // sum_{j != i} d_ij x_j with negated coefficients, as moved to the left side.
    let minus_contrib = |i: usize, e: Expr| (0..n).filter(|&j| j != i).fold(e, |e, j| e.add(-inst.d(i, j), x(j)));

    match kind {
        FormulationKind::MaxSumKuo => {
            let obj = inst.pairs().fold(Expr::default(), |e, (i, j, d)| e.add(d, y(i, j)));
            lp.objective = format!("Maximize\n obj: {}\n", nonempty(obj, x(0)));
            card(&mut lp);
            linking(&mut lp);
            y_bounds(&mut lp);
        }
        FormulationKind::MaxSumW => {
            let obj = (0..n - 1).fold(Expr::default(), |e, i| e.add(1.0, format!("w_{i}")));
            lp.objective = format!("Maximize\n obj: {}\n", obj.render());
            card(&mut lp);
            for i in 0..n - 1 {
                let w = format!("w_{i}");
                lp.row(format!("wcap_{i}"), Expr::default().add(-k.d_bar[i], x(i)).add(1.0, w.clone()), "<=", 0.0);
                let e = ((i + 1)..n).fold(Expr::default(), |e, j| e.add(-inst.d(i, j), x(j)));
                let e = e.add(-k.d_dbar[i], x(i)).add(1.0, w.clone());
                lp.row(format!("wsum_{i}"), e, "<=", -k.d_dbar[i]);
                lp.bounds.push(format!("{w} free"));
            }
        }
        FormulationKind::MaxMinKuo => {
            lp.objective = "Maximize\n obj: w\n".into();
            card(&mut lp);
            for (i, j, d) in inst.pairs() {
                lp.row(format!("min_{i}_{j}"), Expr::default().add(k.c - d, y(i, j)).add(1.0, "w"), "<=", k.c);
            }
            linking(&mut lp);
            y_bounds(&mut lp);
            lp.bounds.push("w free".into());
        }
        FormulationKind::MaxMinSumTight => {
            lp.objective = "Maximize\n obj: s\n".into();
            for i in 0..n {
                let big = k.u_plus - k.l[i];
                let e = minus_contrib(i, Expr::default().add(1.0, "s")).add(big, x(i));
                lp.row(format!("minsum_{i}"), e, "<=", big);
            }
            card(&mut lp);
            lp.bounds.push("s free".into());
        }
        FormulationKind::MinDiffTight => {
            lp.objective = "Minimize\n obj: t\n".into();
            lp.row("spread".into(), Expr::default().add(1.0, "t").add(-1.0, "r").add(1.0, "s"), ">=", 0.0);
            for i in 0..n {
                let low = k.l_minus - k.u[i];
                let e = minus_contrib(i, Expr::default().add(1.0, "r")).add(low, x(i));
                lp.row(format!("maxsum_{i}"), e, ">=", low);
            }
            for i in 0..n {
                let big = k.u_plus - k.l[i];
                let e = minus_contrib(i, Expr::default().add(1.0, "s")).add(big, x(i));
                lp.row(format!("minsum_{i}"), e, "<=", big);
            }
            card(&mut lp);
            for v in ["r", "s", "t"] {
                lp.bounds.push(format!("{v} free"));
            }
        }
        FormulationKind::NodePacking(l) | FormulationKind::PackingFeasibility(l) => {
            let feas = matches!(kind, FormulationKind::PackingFeasibility(_));
            lp.objective = if feas {
                format!("Maximize\n obj: 0 {}\n", x(0))
            } else {
                let obj = (0..n).fold(Expr::default(), |e, i| e.add(1.0, x(i)));
                format!("Maximize\n obj: {}\n", obj.render())
            };
            for (i, j) in build_threshold_graph(inst, l).edges() {
                lp.row(format!("conflict_{i}_{j}"), Expr::default().add(1.0, x(i)).add(1.0, x(j)), "<=", 1.0);
            }
            if feas {
                card(&mut lp);
            }
        }
    }
    Ok(lp.finish())
}

fn nonempty(e: Expr, fallback: String) -> String {
    if e.0.is_empty() {
        format!("0 {fallback}")
    } else {
        e.render()
    }
}

// ---------------------------------------------------------------------------
// Structural check of emitted text

/// What a structural pass over LP text found.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSummary {
    pub maximize: bool,
    pub rows: Vec<String>,
    pub variables: BTreeSet<String>,
    pub binaries: BTreeSet<String>,
    pub bounded: BTreeSet<String>,
}

fn lp_err(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, msg: msg.into() }
}

fn is_var_name(t: &str) -> bool {
    t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Collects variables from `coef var` / `var` sequences separated by signs.
fn expr_vars(expr: &str, out: &mut BTreeSet<String>) -> Result<()> {
    let mut expect_var = true;
    for tok in expr.split_whitespace() {
        match tok {
            "+" | "-" => expect_var = true,
            t if t.parse::<f64>().is_ok() => {}
            t if is_var_name(t) && expect_var => {
                out.insert(t.to_string());
                expect_var = false;
            }
            t => return Err(lp_err(format!("unexpected token {t:?}"))),
        }
    }
    Ok(())
}

/// Checks section order, row syntax, and that every binary and every
/// bounded variable is used by the model while every used continuous
/// variable has a bound entry.
pub fn check_lp(text: &str) -> Result<LpSummary> {
    #[derive(PartialEq, PartialOrd, Clone, Copy)]
    enum Sec {
        Head,
        Obj,
        Rows,
        Bounds,
        Bin,
        End,
    }
    let mut sec = Sec::Head;
    let mut maximize = None;
    let mut rows = Vec::new();
    let mut variables = BTreeSet::new();
    let mut binaries = BTreeSet::new();
    let mut bounded = BTreeSet::new();
    let mut names = BTreeSet::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        let next = match line {
            "Maximize" | "Minimize" => Some(Sec::Obj),
            "Subject To" => Some(Sec::Rows),
            "Bounds" => Some(Sec::Bounds),
            "Binaries" => Some(Sec::Bin),
            "End" => Some(Sec::End),
            _ => None,
        };
        if let Some(s) = next {
            if s <= sec {
                return Err(lp_err(format!("section {line:?} out of order")));
            }
            if s == Sec::Obj {
                maximize = Some(line == "Maximize");
            }
            sec = s;
            continue;
        }
        match sec {
            Sec::Head => return Err(lp_err(format!("content before objective: {line:?}"))),
            Sec::Obj => {
                let body = line.split_once(':').map_or(line, |(_, b)| b);
                expr_vars(body, &mut variables)?;
            }
            Sec::Rows => {
                let (name, body) = line.split_once(':').ok_or_else(|| lp_err(format!("unnamed row {line:?}")))?;
                if !names.insert(name.trim().to_string()) {
                    return Err(lp_err(format!("duplicate row {name:?}")));
                }
                let (lhs, rhs) = ["<=", ">=", "="]
                    .iter()
                    .find_map(|op| body.split_once(op))
                    .ok_or_else(|| lp_err(format!("row without relation {line:?}")))?;
                rhs.trim().parse::<f64>().map_err(|_| lp_err(format!("bad rhs in {line:?}")))?;
                expr_vars(lhs, &mut variables)?;
                rows.push(name.trim().to_string());
            }
            Sec::Bounds => {
                let t: Vec<&str> = line.split_whitespace().collect();
                match t.as_slice() {
                    [v, "free"] | [v, ">=", _] | [v, "<=", _] => {
                        bounded.insert(v.to_string());
                    }
                    _ => return Err(lp_err(format!("bad bound {line:?}"))),
                }
            }
            Sec::Bin => {
                binaries.extend(line.split_whitespace().map(str::to_string));
            }
            Sec::End => return Err(lp_err("content after End")),
        }
    }
    if sec != Sec::End {
        return Err(lp_err("missing End"));
    }
    for v in binaries.iter().chain(&bounded) {
        if !variables.contains(v) {
            return Err(lp_err(format!("declared variable {v} is never used")));
        }
    }
    for v in &variables {
        if !binaries.contains(v) && !bounded.contains(v) {
            return Err(lp_err(format!("continuous variable {v} has no bound entry")));
        }
    }
    Ok(LpSummary {
        maximize: maximize.ok_or_else(|| lp_err("missing objective"))?,
        rows,
        variables,
        binaries,
        bounded,
    })
}

// ---------------------------------------------------------------------------
// External solutions

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub kind: FormulationKind,
    pub solution: Solution,
    /// Native objective value, or the packing size for packing kinds.
    pub value: f64,
    /// Conflict rows `x_i + x_j <= 1` the solution violates (packing kinds).
    pub violated_conflicts: Vec<(usize, usize)>,
    pub valid: bool,
}

/// Reads `x_<i> <value>` lines (other variables are ignored, unlisted
/// `x_i` default to 0) and re-evaluates the selection natively.
pub fn verify_external(inst: &Instance, kind: FormulationKind, m: usize, solution_text: &str) -> Result<VerifyReport> {
    let n = inst.n();
    let mut chosen = Vec::new();
    for (k, raw) in solution_text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(name), Some(val), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse { line: k + 1, msg: format!("expected `name value`, got {line:?}") });
        };
        let Some(idx) = name.strip_prefix("x_") else { continue };
        let i: usize = idx
            .parse()
            .map_err(|_| Error::Parse { line: k + 1, msg: format!("bad variable {name:?}") })?;
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let v: f64 = val
            .parse()
            .map_err(|_| Error::Parse { line: k + 1, msg: format!("bad value {val:?}") })?;
        let r = v.round();
        if (v - r).abs() > 1e-6 || !(r == 0.0 || r == 1.0) {
            return Err(Error::NonBinary { var: name.to_string(), value: v });
        }
        if r == 1.0 {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    if kind.has_cardinality() && chosen.len() != m {
        return Err(Error::Cardinality { expected: m, found: chosen.len() });
    }
    let solution = Solution::new(inst, chosen)?;
    let (value, violated) = match kind.threshold() {
        Some(l) => {
            let g = build_threshold_graph(inst, l);
            let s = solution.selected();
            let bad: Vec<(usize, usize)> = s
                .iter()
                .enumerate()
                .flat_map(|(a, &i)| s[a + 1..].iter().map(move |&j| (i, j)))
                .filter(|&(i, j)| g.adjacent(i, j))
                .collect();
            (solution.m() as f64, bad)
        }
        None => (kind.objective().expect("objective kind").evaluate(inst, &solution)?, Vec::new()),
    };
    Ok(VerifyReport { kind, value, valid: violated.is_empty(), violated_conflicts: violated, solution })
}
