//! Orlicz function-space norms over a finite group with normalized counting
//! measure: modular, Luxemburg norm, Orlicz norm and Hölder's inequality.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::numeric::{bisect_threshold, golden_max, golden_min, log_grid};
use crate::young::{OrliczPair, YoungFunction};

/// Relative tolerance of the Luxemburg bisection.
pub const BISECTION_RTOL: f64 = 1e-10;
/// Agreement required between the two Orlicz-norm algorithms.
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Disagreement that is reported as an error.
pub const CROSS_CHECK_FAIL: f64 = 1e-5;
/// Slack for asserted inequalities.
pub const ASSERT_SLACK: f64 = 1e-9;

const GOLDEN_ITERS: usize = 100;

/// A complex-valued function on a finite group, indexed by element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::new(vec![c; n])
    }

    /// `n·χ_{t}`, the extreme points of the unit ball of `L¹`.
    pub fn point_mass(n: usize, t: usize) -> Self {
        let mut f = Self::zeros(n);
        f.values[t] = Complex64::new(n as f64, 0.0);
        f
    }

    /// Independent standard-normal real and imaginary parts.
    pub fn random_complex<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::new(
            (0..n)
                .map(|_| Complex64::new(normal(rng), normal(rng)))
                .collect(),
        )
    }

    /// Standard-normal real values.
    pub fn random_real<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::new((0..n).map(|_| Complex64::new(normal(rng), 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// `∫ f dm_G`
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    /// `‖f‖₁ = ∫ |f| dm_G`
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() / self.len() as f64
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.len() as f64).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// Pointwise product.
    pub fn pointwise(&self, other: &Self) -> Self {
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    /// `τ_t f(s) = f(st)`
    pub fn right_translate(&self, group: &FiniteGroup, t: usize) -> Self {
        Self::new(
            (0..self.len())
                .map(|s| self.values[group.mul(s, t)])
                .collect(),
        )
    }

    /// `s ↦ f(t⁻¹s)`
    pub fn left_translate(&self, group: &FiniteGroup, t: usize) -> Self {
        let ti = group.inv(t);
        Self::new(
            (0..self.len())
                .map(|s| self.values[group.mul(ti, s)])
                .collect(),
        )
    }

    /// Bilinear pairing `∫ f g dm_G` (no conjugation).
    pub fn pair(&self, other: &Self) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<Complex64>()
            / self.len() as f64
    }
}

pub(crate) fn normal<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; avoids pulling in a distributions crate for one sampler
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

impl Add for &GroupFunction {
    type Output = GroupFunction;
    fn add(self, rhs: Self) -> GroupFunction {
        GroupFunction::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &GroupFunction {
    type Output = GroupFunction;
    fn sub(self, rhs: Self) -> GroupFunction {
        GroupFunction::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Mul<f64> for &GroupFunction {
    type Output = GroupFunction;
    fn mul(self, rhs: f64) -> GroupFunction {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    Bisection,
    Amemiya,
    DualAscent,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub method: NormMethod,
    pub residual: f64,
    /// Certified `[lower, upper]` enclosure when the method provides one.
    pub bracket: Option<(f64, f64)>,
}

impl NormResult {
    pub(crate) fn exact(value: f64, method: NormMethod) -> Self {
        Self {
            value,
            method,
            residual: 0.0,
            bracket: None,
        }
    }
}

/// `(1/n) Σ Φ(a_i / k)`, with `+∞` on overflow.
fn modular_scaled(moduli: &[f64], phi: &YoungFunction, k: f64) -> f64 {
    let mut s = 0.0;
    for &a in moduli {
        if a > 0.0 {
            s += phi.value(a / k);
            if s.is_infinite() {
                return f64::INFINITY;
            }
        }
    }
    s / moduli.len() as f64
}

/// `∫ Φ(|f|) dm_G`. An infinite result flags overflow of some `Φ(|f(t)|)`.
pub fn modular(f: &GroupFunction, phi: &YoungFunction) -> f64 {
    modular_scaled(&f.moduli(), phi, 1.0)
}

/// Luxemburg norm `inf { k > 0 : ∫ Φ(|f|/k) dm_G <= 1 }` by bisection on `k`.
pub fn luxemburg_norm(f: &GroupFunction, phi: &YoungFunction) -> NormResult {
    luxemburg_of_moduli(&f.moduli(), phi)
}

pub(crate) fn luxemburg_of_moduli(moduli: &[f64], phi: &YoungFunction) -> NormResult {
    let top = moduli.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return NormResult::exact(0.0, NormMethod::Bisection);
    }
    let t = bisect_threshold(
        |k| modular_scaled(moduli, phi, k) <= 1.0,
        top * 1e-3,
        top * 1e3,
        BISECTION_RTOL * 1e-3,
        400,
    );
    NormResult {
        value: t.upper,
        method: NormMethod::Bisection,
        residual: t.relative_width(),
        bracket: Some((t.lower, t.upper)),
    }
}

/// `‖χ_A‖_Φ = 1 / Φ⁻¹(1 / m_G(A))` for a set of Haar measure `m`.
pub fn indicator_luxemburg(phi: &YoungFunction, m: f64) -> Result<f64> {
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / phi.inverse(1.0 / m)?)
}

/// Amemiya form `inf_{k>0} (1 + ∫ Φ(k|f|) dm_G) / k`, minimized by a log
/// scan followed by golden section in `ln k`.
pub fn amemiya_norm(moduli: &[f64], phi: &YoungFunction) -> f64 {
    let top = moduli.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let objective = |ln_k: f64| {
        let k = ln_k.exp();
        (1.0 + modular_scaled(moduli, phi, 1.0 / k)) / k
    };
    let grid: Vec<f64> = log_grid(1e-9 / top, 1e9 / top, 73)
        .into_iter()
        .map(f64::ln)
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&s| objective(s)).collect();
    let best = (0..grid.len())
        .min_by(|&i, &j| {
            vals[i]
                .partial_cmp(&vals[j])
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (_, v) = golden_min(objective, lo, hi, 200);
    v.min(vals[best])
}

/// Supremum of `∫ a g dm_G` over `{ g >= 0 : ∫ Ψ(g) dm_G <= 1 }`.
///
/// The constraint is dualized with a multiplier `λ`; for fixed `λ` each
/// coordinate maximizes `a_i g - λ Ψ(g)` by golden section, and `λ` is found
/// by bisection on the constraint. Returns `(value, duality gap)`.
pub fn lagrangian_dual_sup(moduli: &[f64], psi: &YoungFunction) -> (f64, f64) {
    let n = moduli.len();
    if moduli.iter().all(|&a| a == 0.0) {
        return (0.0, 0.0);
    }
    // feasible points satisfy Ψ(g_i) <= n
    let gmax = psi.inverse(n as f64).unwrap_or_else(|_| psi.xmax());
    let coordinate = |a: f64, lambda: f64| -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        golden_max(|g| a * g - lambda * psi.value(g), 0.0, gmax, GOLDEN_ITERS).0
    };
    let solve = |lambda: f64| -> (f64, f64) {
        let mut primal = 0.0;
        let mut constraint = 0.0;
        for &a in moduli {
            let g = coordinate(a, lambda);
            primal += a * g;
            constraint += psi.value(g);
        }
        (primal / n as f64, constraint / n as f64)
    };
    let top = moduli.iter().copied().fold(0.0, f64::max);
    let t = bisect_threshold(
        |lambda| solve(lambda).1 <= 1.0,
        top * 1e-3,
        top * 1e3,
        1e-13,
        400,
    );
    let (primal, c_up) = solve(t.upper);
    let dual_up = t.upper * (1.0 - c_up) + primal;
    let (p_lo, c_lo) = solve(t.lower);
    let dual_lo = t.lower * (1.0 - c_lo) + p_lo;
    let dual = if dual_lo.is_finite() && dual_lo >= primal {
        dual_up.min(dual_lo)
    } else {
        dual_up
    };
    let gap = (dual - primal).max(0.0);
    (0.5 * (primal + dual), gap)
}

/// Orlicz norm `sup { ∫ |f g| dm_G : ∫ Ψ(|g|) dm_G <= 1 }`, computed by the
/// Lagrangian dual-ball maximization and by the Amemiya formula, and
/// cross-checked.
pub fn orlicz_norm(f: &GroupFunction, pair: &OrliczPair) -> Result<NormResult> {
    orlicz_of_moduli(&f.moduli(), pair)
}

pub(crate) fn orlicz_of_moduli(moduli: &[f64], pair: &OrliczPair) -> Result<NormResult> {
    if moduli.iter().all(|&a| a == 0.0) {
        return Ok(NormResult::exact(0.0, NormMethod::Amemiya));
    }
    let amemiya = amemiya_norm(moduli, &pair.phi);
    let (lagrange, gap) = lagrangian_dual_sup(moduli, &pair.psi);
    let diff = (amemiya - lagrange).abs();
    if diff > CROSS_CHECK_FAIL * amemiya.max(1.0) {
        return Err(Error::Numerical(format!(
            "Orlicz norm paths disagree: amemiya {amemiya}, lagrangian {lagrange} (gap {gap:e})"
        )));
    }
    Ok(NormResult {
        value: amemiya,
        method: NormMethod::Amemiya,
        residual: diff,
        bracket: None,
    })
}

/// `‖χ_G‖^o_Ψ`, the norm of the constant one in the dual space under the
/// Orlicz norm. Bound checks use this in place of `Ψ⁻¹(1)`.
pub fn dual_unit_constant(n: usize, pair: &OrliczPair) -> Result<f64> {
    Ok(orlicz_of_moduli(&vec![1.0; n], &pair.swapped())?.value)
}

/// Hölder's inequality `∫|fg| <= ‖f‖_Φ ‖g‖^o_Ψ`; returns `(lhs, rhs)`.
pub fn holder_pairing(
    f: &GroupFunction,
    g: &GroupFunction,
    pair: &OrliczPair,
) -> Result<(f64, f64)> {
    if f.len() != g.len() {
        return Err(Error::Shape {
            expected: f.len(),
            found: g.len(),
        });
    }
    let lhs = f.pointwise(g).l1_norm();
    let rhs = luxemburg_norm(f, &pair.phi).value * orlicz_norm(g, &pair.swapped())?.value;
    if lhs > rhs + ASSERT_SLACK {
        return Err(Error::Numerical(format!("Hölder violated: {lhs} > {rhs}")));
    }
    Ok((lhs, rhs))
}

/// A norming functional for `h` in `(L^Φ, Luxemburg)`: `g` with
/// `∫ h g dm_G = ‖h‖_Φ` and `‖g‖^o_Ψ = 1`.
///
/// With `k = ‖h‖_Φ` and `u = |h|/k`, `g = sgn(h)̄ · Φ'(u) / ∫ u Φ'(u)`.
pub fn norming_functional(h: &GroupFunction, phi: &YoungFunction) -> GroupFunction {
    let k = luxemburg_norm(h, phi).value;
    if k == 0.0 {
        return GroupFunction::zeros(h.len());
    }
    let slopes: Vec<(Complex64, f64, f64)> = h
        .values()
        .iter()
        .map(|&v| {
            let u = v.norm() / k;
            let phase = if v.norm() > 0.0 {
                (v / v.norm()).conj()
            } else {
                Complex64::new(0.0, 0.0)
            };
            (phase, u, phi.derivative(u))
        })
        .collect();
    let denom = slopes.iter().map(|&(_, u, d)| u * d).sum::<f64>() / h.len() as f64;
    GroupFunction::new(slopes.iter().map(|&(p, _, d)| p * (d / denom)).collect())
}
