//! Solution-structure measurements and CSV reports.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::objectives::{Sense, Solution};
use crate::solvers::{enumerate_maxmin_optima, SolverBudget, Status};

/// `100 * (reference - other) / reference`.
pub fn deviation_pct(reference: f64, other: f64) -> Result<f64> {
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(100.0 * (reference - other) / reference)
}

/// Sample Pearson correlation; `None` when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Option<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::TooFewValues { needed: 2, found: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0f64, 0.0f64, 0.0f64);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)))
}

/// Per-instance values feeding [`cross_model_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairedResult {
    pub instance: String,
    /// MaxSum value of the MaxSum optimum.
    pub maxsum_opt: f64,
    /// MaxSum value of the MaxMinSum optimum.
    pub maxsum_of_mms: f64,
    /// MaxMinSum value of the MaxMinSum optimum.
    pub maxminsum_opt: f64,
    /// Both optima were proven; otherwise they are best-found values.
    pub proven: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossModelRow {
    pub set_name: String,
    pub instance_count: usize,
    pub correlation: Option<f64>,
    pub min_dev: f64,
    pub max_dev: f64,
    pub avg_dev: f64,
    /// Some deviation is negative, which only happens with unproven references.
    pub negative_dev: bool,
}

pub fn cross_model_report(set_name: &str, results: &[PairedResult]) -> Result<CrossModelRow> {
    if results.is_empty() {
        return Err(Error::Empty("cross-model result set"));
    }
    let devs = results
        .iter()
        .map(|r| deviation_pct(r.maxsum_opt, r.maxsum_of_mms))
        .collect::<Result<Vec<f64>>>()?;
    let correlation = if results.len() < 2 {
        None
    } else {
        let xs: Vec<f64> = results.iter().map(|r| r.maxsum_opt).collect();
        let ys: Vec<f64> = results.iter().map(|r| r.maxminsum_opt).collect();
        pearson(&xs, &ys)?
    };
    let min_dev = devs.iter().copied().fold(f64::INFINITY, f64::min);
    let max_dev = devs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg_dev = (devs.iter().sum::<f64>() / devs.len() as f64).clamp(min_dev, max_dev);
    Ok(CrossModelRow {
        set_name: set_name.to_string(),
        instance_count: results.len(),
        correlation,
        min_dev,
        max_dev,
        avg_dev,
        negative_dev: min_dev < 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramMode {
    /// Ten classes of width 0.1 on `d / d_max`, last class closed at 1.
    Normalized10,
    /// One bar per integer value 0..=9.
    IntegerBars,
}

impl HistogramMode {
    pub fn as_str(self) -> &'static str {
        match self {
            HistogramMode::Normalized10 => "normalized10",
            HistogramMode::IntegerBars => "integer",
        }
    }
}

impl fmt::Display for HistogramMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HistogramMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normalized10" | "normalized" => Ok(HistogramMode::Normalized10),
            "integer" | "integer-bars" => Ok(HistogramMode::IntegerBars),
            other => Err(Error::InvalidSpec(format!("unknown histogram mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceHistogram {
    pub mode: HistogramMode,
    pub counts: Vec<u64>,
    pub relative: Vec<f64>,
    pub sample_size: u64,
    /// Largest `d_max` among the pooled instances (Normalized10 only).
    pub d_max_used: Option<f64>,
}

/// Class of `d` in the Normalized10 histogram of an instance with `d_max`.
pub fn normalized_class(d: f64, d_max: f64) -> usize {
    ((d * 10.0 / d_max).floor() as usize).min(9)
}

/// Pools the pairwise distances of every solution. Each distance is
/// normalized by the `d_max` of its own instance.
pub fn histogram(solutions: &[(&Instance, &Solution)], mode: HistogramMode) -> Result<DistanceHistogram> {
    let mut counts = vec![0u64; 10];
    let mut d_max_used: Option<f64> = None;
    for (inst, sol) in solutions {
        match mode {
            HistogramMode::Normalized10 => {
                let d_max = inst.d_max();
                if d_max <= 0.0 {
                    return Err(Error::HistogramMode {
                        mode: mode.as_str(),
                        reason: format!("instance {:?} has d_max = 0", inst.name),
                    });
                }
                d_max_used = Some(d_max_used.map_or(d_max, |v| v.max(d_max)));
                for d in sol.pairwise(inst) {
                    counts[normalized_class(d, d_max)] += 1;
                }
            }
            HistogramMode::IntegerBars => {
                for d in sol.pairwise(inst) {
                    if d.fract() != 0.0 || !(0.0..=9.0).contains(&d) {
                        return Err(Error::HistogramMode {
                            mode: mode.as_str(),
                            reason: format!("distance {d} is not an integer in 0..=9"),
                        });
                    }
                    counts[d as usize] += 1;
                }
            }
        }
    }
    let sample_size: u64 = counts.iter().sum();
    let relative = counts
        .iter()
        .map(|&c| if sample_size == 0 { 0.0 } else { c as f64 / sample_size as f64 })
        .collect();
    Ok(DistanceHistogram { mode, counts, relative, sample_size, d_max_used })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryStats {
    pub avg_pairwise: f64,
    pub min_pairwise: f64,
    pub max_pairwise: f64,
    /// Mean over selected x non-selected pairs; `None` when nothing is left out.
    pub avg_to_nonselected: Option<f64>,
}

pub fn geometry_stats(inst: &Instance, sol: &Solution) -> Result<GeometryStats> {
    if sol.m() < 2 {
        return Err(Error::SelectionTooSmall { needed: 2, found: sol.m() });
    }
    let (mut sum, mut lo, mut hi, mut k) = (0.0, f64::INFINITY, f64::NEG_INFINITY, 0usize);
    for d in sol.pairwise(inst) {
        sum += d;
        lo = lo.min(d);
        hi = hi.max(d);
        k += 1;
    }
    let mut cross = 0.0;
    let mut cross_k = 0usize;
    for &i in sol.selected() {
        for j in (0..inst.n()).filter(|&j| !sol.contains(j)) {
            cross += inst.d(i, j);
            cross_k += 1;
        }
    }
    Ok(GeometryStats {
        avg_pairwise: (sum / k as f64).clamp(lo, hi),
        min_pairwise: lo,
        max_pairwise: hi,
        avg_to_nonselected: (cross_k > 0).then(|| cross / cross_k as f64),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityRow {
    pub set_name: String,
    pub instance_count: usize,
    /// Optima found per instance, capped at `cap`.
    pub counts: Vec<usize>,
    pub avg_count: f64,
    pub max_count: usize,
    /// Instances whose count hit the cap (or the budget), so the true count is larger.
    pub truncated: usize,
}

pub fn multiplicity_report(
    set_name: &str,
    instances: &[Instance],
    m: usize,
    cap: usize,
    budget: &SolverBudget,
) -> Result<MultiplicityRow> {
    if instances.is_empty() {
        return Err(Error::Empty("instance set"));
    }
    let optima = instances
        .par_iter()
        .map(|inst| enumerate_maxmin_optima(inst, m, cap, budget))
        .collect::<Result<Vec<_>>>()?;
    let counts: Vec<usize> = optima.iter().map(|o| o.solutions.len()).collect();
    Ok(MultiplicityRow {
        set_name: set_name.to_string(),
        instance_count: instances.len(),
        avg_count: counts.iter().sum::<usize>() as f64 / counts.len() as f64,
        max_count: counts.iter().copied().max().unwrap_or(0),
        truncated: optima.iter().filter(|o| o.truncated || o.status != Status::Optimal).count(),
        counts,
    })
}

/// `(max - min) / max`.
pub fn relative_range(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("value list"));
    }
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if hi == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((hi - lo) / hi)
}

/// One solver run inside a benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchJob {
    pub set: String,
    pub instance: String,
    pub model: String,
    pub sense: Sense,
    pub status: Status,
    pub value: Option<f64>,
    /// Best value known for this instance and model over all sources.
    pub best_known: Option<f64>,
}

impl BenchJob {
    /// Percentage gap between the job's value and the best known one;
    /// 0 for proven optima.
    pub fn deviation(&self) -> Result<Option<f64>> {
        if self.status == Status::Optimal {
            return Ok(Some(0.0));
        }
        let (Some(v), Some(best)) = (self.value, self.best_known) else {
            return Ok(None);
        };
        if v == best {
            return Ok(Some(0.0));
        }
        match self.sense {
            Sense::Maximize => deviation_pct(best, v).map(Some),
            Sense::Minimize => deviation_pct(v, best).map(Some),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub set: String,
    pub model: String,
    pub count: usize,
    pub solved_count: usize,
    /// Mean over jobs that reported a value; `None` when none did.
    pub avg_dev_from_best: Option<f64>,
}

/// Groups jobs by `(set, model)` in sorted order.
pub fn benchmark_summary(jobs: &[BenchJob]) -> Result<Vec<BenchRow>> {
    let mut groups: BTreeMap<(&str, &str), Vec<&BenchJob>> = BTreeMap::new();
    for j in jobs {
        groups.entry((&j.set, &j.model)).or_default().push(j);
    }
    groups
        .into_iter()
        .map(|((set, model), js)| {
            let devs = js.iter().map(|j| j.deviation()).collect::<Result<Vec<_>>>()?;
            let devs: Vec<f64> = devs.into_iter().flatten().collect();
            Ok(BenchRow {
                set: set.to_string(),
                model: model.to_string(),
                count: js.len(),
                solved_count: js.iter().filter(|j| j.status == Status::Optimal).count(),
                avg_dev_from_best: (!devs.is_empty()).then(|| devs.iter().sum::<f64>() / devs.len() as f64),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// CSV

/// Six significant digits, shortest form.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("float round trip");
    rounded.to_string()
}

fn opt6(x: Option<f64>, missing: &str) -> String {
    x.map_or_else(|| missing.to_string(), sig6)
}

/// A report row that serializes to CSV.
pub trait CsvRecord {
    fn header() -> &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

pub fn write_csv<T: CsvRecord, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::header())?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string<T: CsvRecord>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

impl CsvRecord for CrossModelRow {
    fn header() -> &'static [&'static str] {
        &["set", "instances", "correlation", "min_dev", "max_dev", "avg_dev", "negative_dev"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.set_name.clone(),
            self.instance_count.to_string(),
            opt6(self.correlation, "undefined"),
            sig6(self.min_dev),
            sig6(self.max_dev),
            sig6(self.avg_dev),
            self.negative_dev.to_string(),
        ]
    }
}

/// One CSV row per histogram class.
pub struct HistogramClass<'a> {
    pub hist: &'a DistanceHistogram,
    pub class: usize,
}

impl DistanceHistogram {
    pub fn classes(&self) -> Vec<HistogramClass<'_>> {
        (0..self.counts.len()).map(|class| HistogramClass { hist: self, class }).collect()
    }

    /// `[lo, hi)` of a class, in normalized units or distance values.
    pub fn class_bounds(&self, class: usize) -> (f64, f64) {
        match self.mode {
            HistogramMode::Normalized10 => (class as f64 / 10.0, (class + 1) as f64 / 10.0),
            HistogramMode::IntegerBars => (class as f64, (class + 1) as f64),
        }
    }
}

impl CsvRecord for HistogramClass<'_> {
    fn header() -> &'static [&'static str] {
        &["mode", "class", "lower", "upper", "count", "relative", "sample_size", "d_max_used"]
    }

    fn record(&self) -> Vec<String> {
        let (lo, hi) = self.hist.class_bounds(self.class);
        vec![
            self.hist.mode.to_string(),
            self.class.to_string(),
            sig6(lo),
            sig6(hi),
            self.hist.counts[self.class].to_string(),
            sig6(self.hist.relative[self.class]),
            self.hist.sample_size.to_string(),
            opt6(self.hist.d_max_used, ""),
        ]
    }
}

/// Geometry statistics tagged with the model and instance they describe.
pub struct GeometryRow {
    pub instance: String,
    pub model: String,
    pub stats: GeometryStats,
}

impl CsvRecord for GeometryRow {
    fn header() -> &'static [&'static str] {
        &["instance", "model", "avg_pairwise", "min_pairwise", "max_pairwise", "avg_to_nonselected"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.model.clone(),
            sig6(self.stats.avg_pairwise),
            sig6(self.stats.min_pairwise),
            sig6(self.stats.max_pairwise),
            opt6(self.stats.avg_to_nonselected, ""),
        ]
    }
}

impl CsvRecord for MultiplicityRow {
    fn header() -> &'static [&'static str] {
        &["set", "instances", "avg_count", "max_count", "truncated"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.set_name.clone(),
            self.instance_count.to_string(),
            sig6(self.avg_count),
            self.max_count.to_string(),
            self.truncated.to_string(),
        ]
    }
}

impl CsvRecord for BenchRow {
    fn header() -> &'static [&'static str] {
        &["set", "model", "count", "solved_count", "avg_dev_from_best"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.set.clone(),
            self.model.clone(),
            self.count.to_string(),
            self.solved_count.to_string(),
            opt6(self.avg_dev_from_best, ""),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::{t4, unit_square};
    use proptest::prelude::*;

    fn sol(inst: &Instance, idx: &[usize]) -> Solution {
        Solution::new(inst, idx.to_vec()).unwrap()
    }

    #[test]
    fn deviation_examples() {
        assert!((deviation_pct(284.3, 278.88).unwrap() - 1.906).abs() < 0.01);
        assert!((deviation_pct(3429.88, 3426.25).unwrap() - 0.1058).abs() < 0.001);
        assert_eq!(deviation_pct(7.5, 7.5).unwrap(), 0.0);
        assert_eq!(deviation_pct(0.0, 1.0), Err(Error::ZeroReference));
    }

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap().unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap().unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap(), None);
        assert_eq!(pearson(&[1.0, 2.0], &[1.0]), Err(Error::LengthMismatch(2, 1)));
        assert!(pearson(&[1.0], &[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(
            xs in prop::collection::vec(-100.0f64..100.0, 3..20),
            a in 0.1f64..10.0,
            b in -50.0f64..50.0,
        ) {
            let ys: Vec<f64> = xs.iter().enumerate().map(|(k, x)| x * x + k as f64).collect();
            let base = pearson(&xs, &ys).unwrap();
            let moved: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            let shifted = pearson(&moved, &ys).unwrap();
            if let (Some(p), Some(q)) = (base, shifted) {
                prop_assert!((p - q).abs() < 1e-6);
            }
        }
    }

    fn paired(instance: &str, ms: f64, ms_mms: f64, mms: f64) -> PairedResult {
        PairedResult { instance: instance.into(), maxsum_opt: ms, maxsum_of_mms: ms_mms, maxminsum_opt: mms, proven: true }
    }

    #[test]
    fn cross_model_examples() {
        let r = cross_model_report("pair", &[paired("a", 10.0, 9.0, 3.0), paired("b", 20.0, 16.0, 6.0)]).unwrap();
        assert_eq!((r.min_dev, r.max_dev, r.avg_dev), (10.0, 20.0, 15.0));
        assert!((r.correlation.unwrap() - 1.0).abs() < 1e-12);
        assert!(!r.negative_dev);
        let t = cross_model_report("t4", &[paired("t4", 15.0, 15.0, 9.0)]).unwrap();
        assert_eq!(t.avg_dev, 0.0);
        assert_eq!(t.correlation, None);
        assert!(cross_model_report("none", &[]).is_err());
        let neg = cross_model_report("neg", &[paired("a", 10.0, 11.0, 3.0), paired("b", 10.0, 9.0, 3.0)]).unwrap();
        assert!(neg.negative_dev);
        assert_eq!(neg.correlation, None);
    }

    #[test]
    fn normalized_binning() {
        let inst = Instance::from_fn("line", crate::instance::Family::Custom, 4, |i, j| {
            let v = [0.0f64, 10.0, 55.0, 100.0];
            (v[i] - v[j]).abs()
        })
        .unwrap();
        let h = histogram(&[(&inst, &sol(&inst, &[0, 1])), (&inst, &sol(&inst, &[0, 2])), (&inst, &sol(&inst, &[0, 3]))], HistogramMode::Normalized10).unwrap();
        let mut expected = vec![0; 10];
        expected[1] = 1;
        expected[5] = 1;
        expected[9] = 1;
        assert_eq!(h.counts, expected);
        assert_eq!(h.sample_size, 3);
        assert_eq!(h.d_max_used, Some(100.0));
        assert!((h.relative.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integer_bars() {
        let inst = Instance::from_fn("som", crate::instance::Family::Som, 3, |i, j| [[0.0, 0.0, 3.0], [0.0, 0.0, 9.0], [3.0, 9.0, 0.0]][i][j]).unwrap();
        let h = histogram(&[(&inst, &sol(&inst, &[0, 1, 2]))], HistogramMode::IntegerBars).unwrap();
        assert_eq!(h.counts, vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(h.d_max_used, None);
        let sq = unit_square();
        assert!(matches!(
            histogram(&[(&sq, &sol(&sq, &[0, 2]))], HistogramMode::IntegerBars),
            Err(Error::HistogramMode { .. })
        ));
        let zero = Instance::from_fn("z", crate::instance::Family::Custom, 2, |_, _| 0.0).unwrap();
        assert!(histogram(&[(&zero, &sol(&zero, &[0, 1]))], HistogramMode::Normalized10).is_err());
    }

    #[test]
    fn geometry_examples() {
        let t = t4();
        let g = geometry_stats(&t, &sol(&t, &[1, 2, 3])).unwrap();
        assert_eq!((g.avg_pairwise, g.min_pairwise, g.max_pairwise), (5.0, 4.0, 6.0));
        assert_eq!(g.avg_to_nonselected, Some(2.0));
        let pair = geometry_stats(&t, &sol(&t, &[0, 3])).unwrap();
        assert_eq!((pair.avg_pairwise, pair.min_pairwise, pair.max_pairwise), (3.0, 3.0, 3.0));
        assert_eq!(geometry_stats(&t, &sol(&t, &[0, 1, 2, 3])).unwrap().avg_to_nonselected, None);
        assert!(geometry_stats(&t, &sol(&t, &[0])).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let b = SolverBudget::default();
        let sq = multiplicity_report("square", &[unit_square()], 2, 100, &b).unwrap();
        assert_eq!((sq.avg_count, sq.max_count, sq.truncated), (2.0, 2, 0));
        let t = multiplicity_report("t4", &[t4()], 3, 100, &b).unwrap();
        assert_eq!((t.avg_count, t.max_count), (1.0, 1));
        let capped = multiplicity_report("square", &[unit_square()], 2, 1, &b).unwrap();
        assert_eq!((capped.max_count, capped.truncated), (1, 1));
    }

    #[test]
    fn relative_range_examples() {
        assert!((relative_range(&[8.0, 10.0]).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(relative_range(&[3.0, 3.0]).unwrap(), 0.0);
        assert_eq!(relative_range(&[50.0, 100.0]).unwrap(), 0.5);
        assert!(relative_range(&[]).is_err());
        assert_eq!(relative_range(&[0.0, 0.0]), Err(Error::ZeroReference));
    }

    fn job(status: Status, value: f64, best: f64, sense: Sense) -> BenchJob {
        BenchJob {
            set: "s".into(),
            instance: "i".into(),
            model: "maxsum".into(),
            sense,
            status,
            value: Some(value),
            best_known: Some(best),
        }
    }

    #[test]
    fn benchmark_examples() {
        let all = benchmark_summary(&vec![job(Status::Optimal, 10.0, 10.0, Sense::Maximize); 3]).unwrap();
        assert_eq!((all[0].count, all[0].solved_count, all[0].avg_dev_from_best), (3, 3, Some(0.0)));
        let one = benchmark_summary(&[job(Status::BudgetExceeded, 9.0, 10.0, Sense::Maximize)]).unwrap();
        assert_eq!(one[0].solved_count, 0);
        assert!((one[0].avg_dev_from_best.unwrap() - 10.0).abs() < 1e-12);
        let mixed = benchmark_summary(&[
            job(Status::Optimal, 10.0, 10.0, Sense::Maximize),
            job(Status::BudgetExceeded, 9.0, 10.0, Sense::Maximize),
        ])
        .unwrap();
        assert_eq!((mixed[0].count, mixed[0].solved_count), (2, 1));
        assert!((mixed[0].avg_dev_from_best.unwrap() - 5.0).abs() < 1e-12);
        let min = job(Status::BudgetExceeded, 4.0, 2.0, Sense::Minimize);
        assert_eq!(min.deviation().unwrap(), Some(50.0));
    }

    #[test]
    fn csv_output() {
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(1234567.0), "1234570");
        assert_eq!(sig6(15.0), "15");
        let row = cross_model_report("t4", &[paired("t4", 15.0, 15.0, 9.0)]).unwrap();
        let text = csv_string(&[row]).unwrap();
        assert_eq!(text, "set,instances,correlation,min_dev,max_dev,avg_dev,negative_dev\nt4,1,undefined,0,0,0,false\n");
        let t = t4();
        let h = histogram(&[(&t, &sol(&t, &[1, 2, 3]))], HistogramMode::Normalized10).unwrap();
        let text = csv_string(&h.classes()).unwrap();
        assert_eq!(text.lines().count(), 11);
        assert!(text.contains("\nnormalized10,6,0.6,0.7,1,0.333333,3,6\n"), "{text}");
    }
}
