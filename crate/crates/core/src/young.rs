//! Young functions: evaluation, numerical Legendre conjugation, generalized
//! inverse and a finite-window certificate for the doubling (Δ2) condition.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::{golden_max, log_grid};

/// Values above this are reported as `f64::INFINITY`.
pub const OVERFLOW_CAP: f64 = 1e300;

/// Default evaluation-domain cap for the analytic families.
pub const DEFAULT_XMAX: f64 = 1e12;

/// Largest argument accepted by `e^x - 1` before the overflow cap.
const EXPM1_XMAX: f64 = 690.0;

const LEGENDRE_GRID_POINTS: usize = 64;
const LEGENDRE_ROUNDS: usize = 3;
const GOLDEN_ITERS: usize = 80;

const QUERY_GRID_LO: f64 = 1e-8;
const QUERY_GRID_HI: f64 = 1e8;
const QUERY_GRID_POINTS: usize = 321;

/// Largest Φ(2x)/Φ(x) accepted by [`YoungFunction::check_delta2`].
pub const DELTA2_K_CAP: f64 = 1e6;

type Evaluator = dyn Fn(f64) -> f64 + Send + Sync;

/// A convex `Φ: [0, Xmax] -> [0, ∞]` with `Φ(0) = 0`.
#[derive(Clone)]
pub struct YoungFunction {
    kind: Kind,
    xmax: f64,
    label: String,
}

#[derive(Clone)]
enum Kind {
    /// `scale * x^exponent`
    Power {
        scale: f64,
        exponent: f64,
    },
    Linear,
    ExpMinusOne,
    Table(Arc<PiecewiseLinear>),
    Conjugate(Arc<ConjugateCache>),
    Custom(Arc<Evaluator>),
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction")
            .field("label", &self.label)
            .field("xmax", &self.xmax)
            .finish()
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Debug)]
struct PiecewiseLinear {
    xs: Vec<f64>,
    vs: Vec<f64>,
}

impl PiecewiseLinear {
    fn segment(&self, x: f64) -> usize {
        match self.xs.partition_point(|&t| t <= x) {
            0 => 0,
            i => (i - 1).min(self.xs.len() - 2),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let t = (x - x0) / (x1 - x0);
        self.vs[i] + t * (self.vs[i + 1] - self.vs[i])
    }

    fn slope(&self, x: f64) -> f64 {
        let i = self.segment(x);
        (self.vs[i + 1] - self.vs[i]) / (self.xs[i + 1] - self.xs[i])
    }
}

/// Tabulated Legendre transform: `(y, Ψ(y), argmax x)` on a log grid.
struct ConjugateCache {
    primal: YoungFunction,
    points: Vec<(f64, f64, f64)>,
}

impl ConjugateCache {
    /// Ψ(y) and a maximizer. The maximizer of `xy - Φ(x)` is nondecreasing
    /// in `y`, so between two cached nodes the search is confined to the
    /// bracket spanned by their maximizers.
    fn eval(&self, y: f64) -> (f64, f64) {
        if y <= 0.0 {
            return (0.0, 0.0);
        }
        let pts = &self.points;
        let j = pts.partition_point(|p| p.0 <= y);
        if j == 0 || j == pts.len() {
            return legendre_sup(&self.primal, y);
        }
        let (ya, va, xa) = pts[j - 1];
        let (_, vb, xb) = pts[j];
        if ya == y {
            return (va, xa);
        }
        if !va.is_finite() || !vb.is_finite() {
            return legendre_sup(&self.primal, y);
        }
        let phi = &self.primal;
        let (x, v) = golden_max(|x| x * y - phi.value(x), xa, xb, GOLDEN_ITERS);
        (cap(v.max(0.0)), x)
    }
}

fn cap(v: f64) -> f64 {
    if v > OVERFLOW_CAP {
        f64::INFINITY
    } else {
        v
    }
}

/// `sup { xy - Φ(x) : 0 <= x <= Xmax }` by a 64-point log grid followed by
/// three rounds of golden-section refinement around the grid argmax.
///
/// A supremum attained at the domain cap is reported as `+∞`: the objective
/// is still increasing there, so the true supremum over the half-line is not
/// resolved by the tabulated domain.
fn legendre_sup(phi: &YoungFunction, y: f64) -> (f64, f64) {
    if y <= 0.0 {
        return (0.0, 0.0);
    }
    let xmax = phi.xmax;
    let mut grid = Vec::with_capacity(LEGENDRE_GRID_POINTS);
    grid.push(0.0);
    grid.extend(log_grid(xmax * 1e-20, xmax, LEGENDRE_GRID_POINTS - 1));
    let objective = |x: f64| {
        let v = phi.value(x);
        if v.is_finite() {
            x * y - v
        } else {
            f64::NEG_INFINITY
        }
    };
    let values: Vec<f64> = grid.iter().map(|&x| objective(x)).collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    let last = grid.len() - 1;
    if best == last && values[last] > values[last - 1] {
        return (f64::INFINITY, xmax);
    }
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(last)];
    let mut arg = (grid[best], values[best]);
    for _ in 0..LEGENDRE_ROUNDS {
        let cand = golden_max(objective, lo, hi, GOLDEN_ITERS);
        if cand.1 >= arg.1 {
            arg = cand;
        }
        let width = (hi - lo) * 1e-3;
        lo = (arg.0 - width).max(0.0);
        hi = (arg.0 + width).min(xmax);
        if hi <= lo {
            break;
        }
    }
    (cap(arg.1.max(0.0)), arg.0)
}

/// Finite-window certificate of `Φ(2x) <= K Φ(x)` for `x >= x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Report {
    pub holds: bool,
    /// `1.01 * worst_ratio` when the condition holds, `+∞` otherwise.
    pub k: f64,
    pub x0: f64,
    pub grid: Vec<f64>,
    pub worst_ratio: f64,
}

impl YoungFunction {
    /// `x^p`.
    pub fn power(p: f64) -> Result<Self> {
        Self::scaled_power(1.0, p).map(|f| f.with_label(format!("power:{}", fmt_num(p))))
    }

    /// `x^p / p`.
    pub fn normalized_power(p: f64) -> Result<Self> {
        Self::scaled_power(1.0 / p, p).map(|f| f.with_label(format!("npower:{}", fmt_num(p))))
    }

    /// `c * x^p` with `c > 0`, `p > 1`.
    pub fn scaled_power(c: f64, p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidYoung(format!(
                "exponent must exceed 1, got {p}"
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidYoung(format!(
                "scale must be positive, got {c}"
            )));
        }
        Ok(Self {
            kind: Kind::Power {
                scale: c,
                exponent: p,
            },
            xmax: DEFAULT_XMAX,
            label: format!("{}*x^{}", fmt_num(c), fmt_num(p)),
        })
    }

    pub fn linear() -> Self {
        Self {
            kind: Kind::Linear,
            xmax: DEFAULT_XMAX,
            label: "linear".into(),
        }
    }

    /// `e^x - 1`; fails the doubling condition.
    pub fn exp_minus_one() -> Self {
        Self {
            kind: Kind::ExpMinusOne,
            xmax: EXPM1_XMAX,
            label: "expm1".into(),
        }
    }

    /// Piecewise-linear Young function through `(x, Φ(x))` nodes.
    ///
    /// `(0, 0)` is prepended when absent. Nodes must have strictly increasing
    /// `x` and nondecreasing slopes; non-convex tables are rejected.
    pub fn table(points: &[(f64, f64)]) -> Result<Self> {
        let mut xs = Vec::with_capacity(points.len() + 1);
        let mut vs = Vec::with_capacity(points.len() + 1);
        if points.first().is_none_or(|p| p.0 > 0.0) {
            xs.push(0.0);
            vs.push(0.0);
        }
        for &(x, v) in points {
            if !(x.is_finite() && v.is_finite()) || x < 0.0 || v < 0.0 {
                return Err(Error::InvalidYoung(format!(
                    "invalid table node ({x}, {v})"
                )));
            }
            if let Some(&last) = xs.last() {
                if x <= last {
                    return Err(Error::InvalidYoung(format!(
                        "table abscissae must be strictly increasing ({last} then {x})"
                    )));
                }
            }
            xs.push(x);
            vs.push(v);
        }
        if xs.len() < 2 {
            return Err(Error::InvalidYoung(
                "table needs at least one positive node".into(),
            ));
        }
        if vs[0] != 0.0 {
            return Err(Error::InvalidYoung("table must satisfy Φ(0) = 0".into()));
        }
        let mut prev: f64 = 0.0;
        for i in 0..xs.len() - 1 {
            let s = (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]);
            if s < 0.0 {
                return Err(Error::InvalidYoung(format!(
                    "table decreases after x = {}",
                    xs[i]
                )));
            }
            if s < prev - 1e-12 * prev.max(1.0) {
                return Err(Error::InvalidYoung(format!(
                    "table is not convex at x = {} (slope {prev} then {s})",
                    xs[i]
                )));
            }
            prev = s;
        }
        let xmax = *xs.last().unwrap();
        if *vs.last().unwrap() <= 0.0 {
            return Err(Error::Degenerate(
                "table vanishes on its whole domain".into(),
            ));
        }
        Ok(Self {
            kind: Kind::Table(Arc::new(PiecewiseLinear { xs, vs })),
            xmax,
            label: "table".into(),
        })
    }

    /// Reads a table from CSV rows `x,Φ(x)`. Blank lines, `#` comments and a
    /// non-numeric header row are skipped.
    pub fn table_from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = (cols.next().unwrap_or(""), cols.next().unwrap_or(""));
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => points.push((x, v)),
                _ if points.is_empty() && lineno == 0 => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "{}:{}: expected `x,value`",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Self::table(&points).map(|f| f.with_label(format!("table:{}", path.display())))
    }

    /// Wraps an arbitrary evaluator. Convexity is the caller's contract;
    /// [`YoungFunction::validate`] checks it on a grid.
    pub fn custom<F>(label: impl Into<String>, xmax: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Custom(Arc::new(f)),
            xmax,
            label: label.into(),
        }
    }

    /// Parses `power:p`, `npower:p`, `linear`, `expm1` or `table:<path>`.
    /// Exponents may be written as decimals or fractions (`3/2`).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        match (head, arg) {
            ("power", Some(p)) => Self::power(parse_real(p)?),
            ("npower", Some(p)) => Self::normalized_power(parse_real(p)?),
            ("linear", None) => Ok(Self::linear()),
            ("expm1", None) => Ok(Self::exp_minus_one()),
            ("table", Some(path)) => Self::table_from_csv(Path::new(path)),
            _ => Err(Error::Parse(format!(
                "unknown Young function spec `{spec}`"
            ))),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    /// `(scale, exponent)` for members of the power family.
    pub fn power_params(&self) -> Option<(f64, f64)> {
        match self.kind {
            Kind::Power { scale, exponent } => Some((scale, exponent)),
            _ => None,
        }
    }

    /// Φ(x) for `0 <= x <= Xmax`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0 && x <= self.xmax) {
            return Err(Error::Domain {
                value: x,
                cap: self.xmax,
            });
        }
        Ok(self.value(x))
    }

    /// Extended evaluation used by the norm engines: `+∞` beyond the domain
    /// cap and above the overflow cap, `0` for nonpositive arguments.
    pub fn value(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= 0.0 {
            return 0.0;
        }
        if x > self.xmax {
            return f64::INFINITY;
        }
        let v = match &self.kind {
            Kind::Power { scale, exponent } => scale * x.powf(*exponent),
            Kind::Linear => x,
            Kind::ExpMinusOne => x.exp_m1(),
            Kind::Table(t) => t.eval(x),
            Kind::Conjugate(c) => c.eval(x).0,
            Kind::Custom(f) => f(x),
        };
        cap(v)
    }

    /// Right derivative of Φ at `x`.
    pub fn derivative(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        match &self.kind {
            Kind::Power { scale, exponent } => scale * exponent * x.powf(exponent - 1.0),
            Kind::Linear => 1.0,
            Kind::ExpMinusOne => x.exp(),
            Kind::Table(t) => t.slope(x.min(self.xmax)),
            Kind::Conjugate(c) => c.eval(x).1,
            Kind::Custom(_) => {
                let h = 1e-6 * x.max(1e-6);
                let lo = (x - h).max(0.0);
                (self.value(x + h) - self.value(lo)) / (x + h - lo)
            }
        }
    }

    /// Numerical Legendre conjugate `Ψ(y) = sup { xy - Φ(x) : x >= 0 }`.
    ///
    /// The supremum is located on a log grid and refined by golden section;
    /// values and maximizers are tabulated on a query grid whose brackets
    /// confine later evaluations.
    pub fn conjugate(&self) -> YoungFunction {
        let points = log_grid(QUERY_GRID_LO, QUERY_GRID_HI, QUERY_GRID_POINTS)
            .into_iter()
            .map(|y| {
                let (v, x) = legendre_sup(self, y);
                (y, v, x)
            })
            .collect();
        YoungFunction {
            kind: Kind::Conjugate(Arc::new(ConjugateCache {
                primal: self.clone(),
                points,
            })),
            xmax: DEFAULT_XMAX,
            label: format!("conj({})", self.label),
        }
    }

    /// Closed-form conjugate where one is known (the power family).
    pub fn closed_form_conjugate(&self) -> Option<YoungFunction> {
        let (c, p) = self.power_params()?;
        let q = p / (p - 1.0);
        let scale = (p - 1.0) * c * (c * p).powf(-q);
        let f = YoungFunction::scaled_power(scale, q).ok()?;
        let label = if (c * p - 1.0).abs() < 1e-15 {
            format!("npower:{}", fmt_num(q))
        } else {
            format!("{}*x^{}", fmt_num(scale), fmt_num(q))
        };
        Some(f.with_label(label))
    }

    /// Complementary function: closed form when available, numerical
    /// conjugate otherwise.
    pub fn complementary(&self) -> YoungFunction {
        self.closed_form_conjugate()
            .unwrap_or_else(|| self.conjugate())
    }

    /// Smallest `x` with `Φ(x) >= y`, by bisection to relative tolerance
    /// 1e-12 within 200 iterations.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let top = self.value(self.xmax);
        if !(y >= 0.0) || y > top {
            return Err(Error::Range { value: y, max: top });
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let mut hi = self.xmax.min(1.0);
        let mut lo = 0.0;
        while self.value(hi) < y {
            lo = hi;
            hi = (hi * 2.0).min(self.xmax);
        }
        for _ in 0..200 {
            if hi - lo <= 1e-12 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value(mid) >= y {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Certifies `Φ(2x) <= K Φ(x)` on a log grid over `[x0, xmax]`.
    pub fn check_delta2(&self, x0: f64, xmax: f64, samples: usize) -> Result<Delta2Report> {
        if !(x0 > 0.0 && x0 < xmax && xmax <= self.xmax / 2.0) {
            return Err(Error::Precondition(format!(
                "need 0 < x0 < xmax <= Xmax/2, got x0 = {x0}, xmax = {xmax}"
            )));
        }
        if samples < 100 {
            return Err(Error::Precondition(format!(
                "need at least 100 samples, got {samples}"
            )));
        }
        let grid = log_grid(x0, xmax, samples);
        let mut worst: f64 = 0.0;
        for &x in &grid {
            let base = self.value(x);
            if base <= 0.0 {
                return Err(Error::Degenerate(format!("Φ({x}) = 0")));
            }
            let r = self.value(2.0 * x) / base;
            if r.is_nan() || r > worst {
                worst = if r.is_nan() { f64::INFINITY } else { r };
            }
        }
        let holds = worst.is_finite() && worst <= DELTA2_K_CAP;
        Ok(Delta2Report {
            holds,
            k: if holds { 1.01 * worst } else { f64::INFINITY },
            x0,
            grid,
            worst_ratio: worst,
        })
    }

    /// Checks the Young-function axioms on a sampled grid: `Φ(0) = 0`,
    /// monotonicity, midpoint convexity (tolerance 1e-12, relative to the
    /// values involved) and `Φ(Xmax) > 0`.
    pub fn validate(&self) -> Result<()> {
        if self.value(0.0) != 0.0 {
            return Err(Error::InvalidYoung("Φ(0) != 0".into()));
        }
        if !(self.value(self.xmax) > 0.0) {
            return Err(Error::Degenerate(format!(
                "Φ(Xmax) = {}",
                self.value(self.xmax)
            )));
        }
        let mut grid = vec![0.0];
        grid.extend(log_grid(self.xmax * 1e-9, self.xmax, 200));
        let vals: Vec<f64> = grid.iter().map(|&x| self.value(x)).collect();
        for w in vals.windows(2) {
            if w[1] < w[0] - 1e-12 * w[0].abs().max(1.0) {
                return Err(Error::InvalidYoung(format!(
                    "Φ decreases ({} -> {})",
                    w[0], w[1]
                )));
            }
        }
        for i in 0..grid.len() {
            for j in (i + 1)..grid.len().min(i + 12) {
                let (a, b) = (grid[i], grid[j]);
                let (fa, fb) = (vals[i], vals[j]);
                if !(fa.is_finite() && fb.is_finite()) {
                    continue;
                }
                let mid = self.value(0.5 * (a + b));
                let chord = 0.5 * (fa + fb);
                if mid > chord + 1e-12 * chord.max(1.0) {
                    return Err(Error::InvalidYoung(format!(
                        "midpoint convexity fails between {a} and {b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
            let b: f64 = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
            a / b
        }
        None => s
            .parse()
            .map_err(|_| Error::Parse(format!("bad number `{s}`")))?,
    };
    Ok(v)
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v}");
    if s.len() > 12 {
        format!("{v:.10}").trim_end_matches('0').to_string()
    } else {
        s
    }
}

/// A complementary pair `(Φ, Ψ)`.
#[derive(Debug, Clone)]
pub struct OrliczPair {
    pub phi: YoungFunction,
    pub psi: YoungFunction,
    pub normalized: bool,
    /// Doubling certificates for `Φ` and `Ψ`, in that order.
    pub delta2: [Delta2Report; 2],
}

/// Window on which pairs certify the doubling condition.
const PAIR_DELTA2_WINDOW: (f64, f64) = (1.0, 1e3);
const PAIR_DELTA2_SAMPLES: usize = 200;

impl OrliczPair {
    /// Pairs `phi` with its complementary function.
    pub fn complementary(phi: YoungFunction) -> Result<Self> {
        let psi = phi.complementary();
        Self::new(phi, psi)
    }

    /// Parses a Young spec and pairs it with its complement.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::complementary(YoungFunction::parse(spec)?)
    }

    /// Builds a pair after checking Young's inequality `xy <= Φ(x) + Ψ(y)`
    /// on a 60x60 log grid over `[1e-3, 1e3]^2`.
    pub fn new(phi: YoungFunction, psi: YoungFunction) -> Result<Self> {
        let worst = young_inequality_slack(&phi, &psi, &log_grid(1e-3, 1e3, 60));
        if worst < -1e-10 {
            return Err(Error::InvalidYoung(format!(
                "({phi}, {psi}) violate Young's inequality (slack {worst:e})"
            )));
        }
        let normalized = (phi.value(1.0) + psi.value(1.0) - 1.0).abs() <= 1e-12;
        let delta2 = [pair_delta2(&phi), pair_delta2(&psi)];
        Ok(Self {
            phi,
            psi,
            normalized,
            delta2,
        })
    }

    /// `(Ψ, Φ)`.
    pub fn swapped(&self) -> Self {
        Self {
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            normalized: self.normalized,
            delta2: [self.delta2[1].clone(), self.delta2[0].clone()],
        }
    }

    pub fn label(&self) -> String {
        format!("{}|{}", self.phi, self.psi)
    }
}

fn pair_delta2(f: &YoungFunction) -> Delta2Report {
    let (x0, x1) = PAIR_DELTA2_WINDOW;
    match f.check_delta2(x0, x1.min(f.xmax() / 2.0), PAIR_DELTA2_SAMPLES) {
        Ok(r) => r,
        Err(_) => Delta2Report {
            holds: false,
            k: f64::INFINITY,
            x0,
            grid: Vec::new(),
            worst_ratio: f64::INFINITY,
        },
    }
}

/// Minimum over the grid of `(Φ(x) + Ψ(y) - xy) / max(1, xy)`.
pub fn young_inequality_slack(phi: &YoungFunction, psi: &YoungFunction, grid: &[f64]) -> f64 {
    let psi_vals: Vec<f64> = grid.iter().map(|&y| psi.value(y)).collect();
    let mut worst = f64::INFINITY;
    for &x in grid {
        let fx = phi.value(x);
        for (&y, &gy) in grid.iter().zip(&psi_vals) {
            let slack = (fx + gy - x * y) / (x * y).max(1.0);
            if slack < worst {
                worst = slack;
            }
        }
    }
    worst
}
