//! Instances: distance matrices, the on-disk text format, the benchmark
//! family generators and distance-spectrum statistics.
//!
//! File layout (whitespace separated, LF line endings):
//!
//! ```text
//! # name <label>          optional metadata, before the header
//! # family <FAMILY>       optional metadata, before the header
//! n m                     m = 0 when no default subset size is recorded
//! i j d                   n(n-1)/2 lines, 0 <= i < j < n
//! # coords                optional section
//! x1 ... xk               n lines
//! ```

use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// Benchmark family an instance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Som,
    Gkd,
    GkdD,
    Mdg,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Som => "SOM",
            Family::Gkd => "GKD",
            Family::GkdD => "GKD_D",
            Family::Mdg => "MDG",
            Family::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "SOM" => Ok(Family::Som),
            "GKD" => Ok(Family::Gkd),
            "GKD_D" | "GKDD" => Ok(Family::GkdD),
            "MDG" => Ok(Family::Mdg),
            "CUSTOM" => Ok(Family::Custom),
            other => Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

/// A symmetric, nonnegative distance matrix over `n` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub family: Family,
    n: usize,
    dist: Vec<f64>,
    coords: Option<Vec<Vec<f64>>>,
    pub default_m: Option<usize>,
}

fn round_5dp(x: f64) -> f64 {
    (x * 1e5).round() / 1e5
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl Instance {
    /// Builds an instance from a full row-major `n x n` matrix, checking the
    /// zero-diagonal, symmetry and nonnegativity invariants.
    pub fn from_matrix(name: impl Into<String>, family: Family, n: usize, dist: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                dist.len()
            )));
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if !a.is_finite() || a < 0.0 {
                    return Err(Error::InvalidDistance { i, j, value: a });
                }
                if a.to_bits() != b.to_bits() {
                    return Err(Error::SymmetryConflict { i, j, first: a, second: b });
                }
            }
        }
        Ok(Instance {
            name: name.into(),
            family,
            n,
            dist,
            coords: None,
            default_m: None,
        })
    }

    /// Builds an instance from upper-triangle entries `d(i, j)` for `i < j`.
    pub fn from_fn(name: impl Into<String>, family: Family, n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::from_matrix(name, family, n, dist)
    }

    pub fn with_default_m(mut self, m: Option<usize>) -> Self {
        self.default_m = m;
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Row `i` of the matrix.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Iterator over all pairs `(i, j, d_ij)` with `i < j`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.d(i, j))))
    }

    pub fn d_max(&self) -> f64 {
        self.pairs().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn d_min(&self) -> f64 {
        self.pairs().map(|p| p.2).fold(f64::INFINITY, f64::min)
    }

    /// Sorted distinct values among the `n(n-1)/2` stored off-diagonal entries.
    pub fn distinct_distances(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pairs().map(|p| p.2).collect();
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| a.to_bits() == b.to_bits());
        v
    }

    fn check_coords(&self, coords: &[Vec<f64>]) -> Result<()> {
        if coords.len() != self.n {
            return Err(Error::InvalidMatrix(format!(
                "{} coordinate rows for n = {}",
                coords.len(),
                self.n
            )));
        }
        let k = coords[0].len();
        if let Some((index, c)) = coords.iter().enumerate().find(|(_, c)| c.len() != k) {
            return Err(Error::DimensionMismatch { index, expected: k, found: c.len() });
        }
        for (i, j, d) in self.pairs() {
            let e = euclid(&coords[i], &coords[j]);
            let close = (d - e).abs() <= 1e-9 * e.max(1.0);
            if !close && d != round_5dp(e) {
                return Err(Error::InvalidMatrix(format!(
                    "distance ({i}, {j}) = {d} disagrees with coordinates ({e})"
                )));
            }
        }
        Ok(())
    }
}

/// Full Euclidean instance over `points`, optionally rounding every distance
/// to five decimal places.
pub fn euclidean_instance(points: &[Vec<f64>], round: bool) -> Result<Instance> {
    if points.len() < 2 {
        return Err(Error::TooFewNodes(points.len()));
    }
    let k = points[0].len();
    if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != k) {
        return Err(Error::DimensionMismatch { index, expected: k, found: p.len() });
    }
    let mut inst = Instance::from_fn("euclidean", Family::Custom, points.len(), |i, j| {
        let d = euclid(&points[i], &points[j]);
        if round {
            round_5dp(d)
        } else {
            d
        }
    })?;
    inst.coords = Some(points.to_vec());
    Ok(inst)
}

/// Leading principal `k x k` sub-instance (the MDG-a2/b2 construction).
pub fn truncate(inst: &Instance, k: usize) -> Result<Instance> {
    if k < 2 || k > inst.n {
        return Err(Error::TruncateRange { k, n: inst.n });
    }
    let mut out = Instance::from_fn(inst.name.clone(), inst.family, k, |i, j| inst.d(i, j))?;
    out.coords = inst.coords.as_ref().map(|c| c[..k].to_vec());
    out.default_m = inst.default_m.filter(|&m| m < k);
    if k < inst.n {
        out.name = format!("{}_first{k}", inst.name);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Generation

/// Parameters of one generated instance. `seed` fully determines the output.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    /// Fixed coordinate dimension. `None` draws it in 2..=21 for GKD.
    pub dim: Option<usize>,
    pub coord_range: (f64, f64),
    pub value_range: (f64, f64),
    pub seed: u64,
    pub round_5dp: bool,
}

impl GeneratorSpec {
    /// Parameters with the family's default ranges.
    pub fn new(family: Family, n: usize, m: usize, seed: u64) -> Self {
        let (dim, coord_range, value_range, round) = match family {
            Family::Gkd => (None, (0.0, 10.0), (0.0, 0.0), true),
            Family::GkdD => (Some(2), (0.0, 100.0), (0.0, 0.0), false),
            Family::Som => (None, (0.0, 0.0), (0.0, 9.0), false),
            Family::Mdg => (None, (0.0, 0.0), (0.0, 10.0), false),
            Family::Custom => (Some(2), (0.0, 1.0), (0.0, 1.0), false),
        };
        GeneratorSpec {
            family,
            n,
            m,
            dim,
            coord_range,
            value_range,
            seed,
            round_5dp: round,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!("n = {} < 2", self.n)));
        }
        if self.m < 2 || self.m >= self.n {
            return Err(Error::InvalidSpec(format!("need 2 <= m < n, got m = {}, n = {}", self.m, self.n)));
        }
        if let Some(0) = self.dim {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        if !ok(self.coord_range) || !ok(self.value_range) {
            return Err(Error::InvalidSpec("ranges must be finite with lo <= hi".into()));
        }
        if self.family == Family::Som && (self.value_range.0 < 0.0 || self.value_range.0.fract() != 0.0 || self.value_range.1.fract() != 0.0) {
            return Err(Error::InvalidSpec("SOM value range must be nonnegative integers".into()));
        }
        if self.family == Family::Mdg && self.value_range.0 < 0.0 {
            return Err(Error::InvalidSpec("MDG values must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn instance_name(&self) -> String {
        format!("{}_n{}_m{}_s{}", self.family, self.n, self.m, self.seed)
    }
}

/// Uniform real in `[0, 1)` from the top 53 bits of one 64-bit draw.
fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn uniform(rng: &mut impl RngCore, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Generates an instance; a pure function of `spec`.
///
/// The stream is ChaCha20 seeded from `spec.seed`. SOM and MDG fill the upper
/// triangle row-major; GKD families draw the dimension (GKD only), then the
/// coordinates point by point.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut inst = match spec.family {
        Family::Som => {
            let (lo, hi) = (spec.value_range.0 as u32, spec.value_range.1 as u32);
            Instance::from_fn(spec.instance_name(), Family::Som, n, |_, _| rng.gen_range(lo..=hi) as f64)?
        }
        Family::Mdg => Instance::from_fn(spec.instance_name(), Family::Mdg, n, |_, _| uniform(&mut rng, spec.value_range))?,
        Family::Gkd | Family::GkdD | Family::Custom => {
            let dim = spec.dim.unwrap_or_else(|| rng.gen_range(2..=21usize));
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dim).map(|_| uniform(&mut rng, spec.coord_range)).collect())
                .collect();
            let mut inst = euclidean_instance(&points, spec.round_5dp)?;
            inst.name = spec.instance_name();
            inst.family = spec.family;
            inst
        }
    };
    inst.default_m = Some(spec.m);
    Ok(inst)
}

/// Subset sizes used for GKD-d batches: `ceil(n/10)` and `2 ceil(n/10)`.
pub fn gkd_d_preset_ms(n: usize) -> [usize; 2] {
    let base = n.div_ceil(10);
    [base, 2 * base]
}

/// One row of a batch-generation manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub filename: String,
}

pub fn write_manifest<W: std::io::Write>(entries: &[ManifestEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "n", "m", "seed", "filename"])?;
    for e in entries {
        w.write_record([
            e.family.to_string(),
            e.n.to_string(),
            e.m.to_string(),
            e.seed.to_string(),
            e.filename.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Text format

/// Serializes to the canonical text format. Floats use the shortest
/// representation that parses back to the same bits.
pub fn write_instance(inst: &Instance) -> String {
    let mut s = String::with_capacity(inst.n * inst.n * 12);
    if !inst.name.is_empty() {
        let _ = writeln!(s, "# name {}", inst.name);
    }
    let _ = writeln!(s, "# family {}", inst.family);
    let _ = writeln!(s, "{} {}", inst.n, inst.default_m.unwrap_or(0));
    for (i, j, d) in inst.pairs() {
        let _ = writeln!(s, "{i} {j} {d}");
    }
    if let Some(coords) = &inst.coords {
        s.push_str("# coords\n");
        for p in coords {
            let line: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
    }
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &std::path::Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => std::path::Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut name = String::new();
    let mut family = Family::Custom;
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));

    let (n, m) = loop {
        let Some((_, line)) = lines.next() else {
            return Err(Error::BadHeader("empty input".into()));
        };
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            if let Some(v) = meta.strip_prefix("name ") {
                name = v.trim().to_string();
            } else if let Some(v) = meta.strip_prefix("family ") {
                family = v.trim().parse()?;
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::BadHeader(format!("expected `n m`, got {line:?}")));
        }
        let n: usize = fields[0].parse().map_err(|_| Error::BadHeader(format!("bad n {:?}", fields[0])))?;
        let m: usize = fields[1].parse().map_err(|_| Error::BadHeader(format!("bad m {:?}", fields[1])))?;
        break (n, m);
    };
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }

    let mut dist = vec![f64::NAN; n * n];
    for i in 0..n {
        dist[i * n + i] = 0.0;
    }
    let mut coords: Option<Vec<Vec<f64>>> = None;
    for (lineno, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if rest.trim() == "coords" {
                coords = Some(Vec::with_capacity(n));
                break;
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line: lineno, msg: format!("expected `i j d`, got {line:?}") });
        }
        let idx = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad index {s:?}") })?;
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            Ok(v)
        };
        let (i, j) = (idx(fields[0])?, idx(fields[1])?);
        let d: f64 = fields[2]
            .parse()
            .map_err(|_| Error::Parse { line: lineno, msg: format!("bad distance {:?}", fields[2]) })?;
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidDistance { i, j, value: d });
        }
        if i == j {
            if d != 0.0 {
                return Err(Error::InvalidDistance { i, j, value: d });
            }
            continue;
        }
        let (a, b) = (i.min(j), i.max(j));
        let slot = &mut dist[a * n + b];
        if !slot.is_nan() && slot.to_bits() != d.to_bits() {
            return Err(Error::SymmetryConflict { i: a, j: b, first: *slot, second: d });
        }
        *slot = d;
        dist[b * n + a] = d;
    }
    if let Some(c) = coords.as_mut() {
        for (lineno, line) in lines {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| Error::Parse { line: lineno, msg: format!("bad coordinate {t:?}") }))
                .collect::<Result<Vec<f64>>>()?;
            c.push(p);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if dist[i * n + j].is_nan() {
                return Err(Error::MissingEntry(i, j));
            }
        }
    }
    let mut inst = Instance::from_matrix(name, family, n, dist)?;
    inst.default_m = (m > 0).then_some(m);
    if let Some(c) = coords {
        inst.check_coords(&c)?;
        inst.coords = Some(c);
    }
    Ok(inst)
}

// ---------------------------------------------------------------------------
// Spectrum

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumStats {
    pub d_min: f64,
    pub d_max: f64,
    pub distinct_count: usize,
    pub pair_count: usize,
    pub repetition_rate: f64,
    /// Smallest difference between consecutive distinct values; `None` when
    /// all pairs share one value.
    pub min_positive_gap: Option<f64>,
}

pub fn spectrum_stats(inst: &Instance) -> SpectrumStats {
    let distinct = inst.distinct_distances();
    let pair_count = inst.n * (inst.n - 1) / 2;
    let min_positive_gap = distinct
        .windows(2)
        .map(|w| w[1] - w[0])
        .min_by(f64::total_cmp);
    SpectrumStats {
        d_min: distinct[0],
        d_max: distinct[distinct.len() - 1],
        distinct_count: distinct.len(),
        pair_count,
        repetition_rate: 1.0 - distinct.len() as f64 / pair_count as f64,
        min_positive_gap,
    }
}
