//! Vector measures induced by operators on functions over a finite group:
//! atoms, variation, semivariation, the optimal-domain norm and integration.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{BorelSet, CMatrix, FiniteGroup, UnitaryDual};
use crate::orlicz::{
    luxemburg_norm, luxemburg_of_moduli, normal, norming_functional, GroupFunction, NormMethod,
    NormResult,
};
use crate::spectral::{block_norm, fourier, hy_exponent, BlockNormKind, BlockVector};
use crate::young::{OrliczPair, YoungFunction};

/// Largest group order accepted by the sign-pattern oracle.
pub const ORACLE_MAX_ORDER: usize = 12;
/// Cap on the number of enumerated phase patterns.
const PHASE_PATTERN_CAP: usize = 1 << 21;
pub const DEFAULT_STARTS: usize = 32;
const ASCENT_MAX_ROUNDS: usize = 200;
/// Residual above which atoms are not explained by a single measure.
pub const DENSITY_RESIDUAL_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex measure on a finite group, stored by its atoms `μ({t})`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Complex64>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Complex64>) -> Self {
        Self { atoms }
    }

    pub fn from_real(atoms: &[f64]) -> Self {
        Self::new(atoms.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![ZERO; n])
    }

    pub fn dirac(n: usize, t: usize) -> Self {
        let mut atoms = vec![ZERO; n];
        atoms[t] = ONE;
        Self::new(atoms)
    }

    /// Haar measure `m_G`.
    pub fn uniform(n: usize) -> Self {
        Self::new(vec![Complex64::new(1.0 / n as f64, 0.0); n])
    }

    /// `dμ = f dm_G`, atoms `f(t)/n`.
    pub fn from_density(f: &GroupFunction) -> Self {
        let n = f.len() as f64;
        Self::new(f.values().iter().map(|v| v / n).collect())
    }

    pub fn random_real<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::new((0..n).map(|_| Complex64::new(normal(rng), 0.0)).collect())
    }

    pub fn random_complex<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::new(
            (0..n)
                .map(|_| Complex64::new(normal(rng), normal(rng)))
                .collect(),
        )
    }

    /// Parses `dirac:t`, `uniform`, `density:<path>` or `random:<seed>`.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let spec = spec.trim();
        let (head, arg) = spec.split_once(':').unwrap_or((spec, ""));
        match head {
            "dirac" => {
                let t: usize = arg
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element in `{spec}`")))?;
                if t >= n {
                    return Err(Error::Parse(format!(
                        "element {t} out of range for order {n}"
                    )));
                }
                Ok(Self::dirac(n, t))
            }
            "uniform" if arg.is_empty() => Ok(Self::uniform(n)),
            "random" => {
                let seed: u64 = arg
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad seed in `{spec}`")))?;
                Ok(Self::random_real(n, &mut ChaCha8Rng::seed_from_u64(seed)))
            }
            "density" if !arg.is_empty() => Self::from_csv(Path::new(arg), n),
            _ => Err(Error::Parse(format!("unknown measure spec `{spec}`"))),
        }
    }

    /// One atom per line, `re` or `re,im`.
    pub fn from_csv(path: &Path, n: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut atoms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("{}:{}: bad number `{s}`", path.display(), i + 1))
                })
            };
            let mut cols = line.split(',');
            let re = parse(cols.next().unwrap_or(""))?;
            let im = match cols.next() {
                Some(s) => parse(s)?,
                None => 0.0,
            };
            atoms.push(Complex64::new(re, im));
        }
        if atoms.len() != n {
            return Err(Error::Shape {
                expected: n,
                found: atoms.len(),
            });
        }
        Ok(Self::new(atoms))
    }

    pub fn atoms(&self) -> &[Complex64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.atoms.iter().all(|a| a.im == 0.0)
    }

    /// `μ(G)`
    pub fn total_mass(&self) -> Complex64 {
        self.atoms.iter().sum()
    }

    /// `‖μ‖ = Σ |μ({t})|`
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.norm()).sum()
    }

    /// `n·μ({t})`, the density with respect to `m_G`.
    pub fn density(&self) -> GroupFunction {
        let n = self.len() as f64;
        GroupFunction::new(self.atoms.iter().map(|a| a * n).collect())
    }

    fn check_order(&self, group: &FiniteGroup) -> Result<()> {
        if self.len() != group.order() {
            return Err(Error::Shape {
                expected: group.order(),
                found: self.len(),
            });
        }
        Ok(())
    }

    /// `(μ*f)(t) = Σ_s μ({s}) f(s⁻¹t)`
    pub fn convolve(&self, group: &FiniteGroup, f: &GroupFunction) -> Result<GroupFunction> {
        self.check_order(group)?;
        if f.len() != group.order() {
            return Err(Error::Shape {
                expected: group.order(),
                found: f.len(),
            });
        }
        let n = group.order();
        let mut out = vec![ZERO; n];
        for (s, &m) in self.atoms.iter().enumerate() {
            if m == ZERO {
                continue;
            }
            let si = group.inv(s);
            for (t, o) in out.iter_mut().enumerate() {
                *o += m * f.values()[group.mul(si, t)];
            }
        }
        Ok(GroupFunction::new(out))
    }

    /// `μ̃({t}) = μ({t⁻¹})`
    pub fn reflect(&self, group: &FiniteGroup) -> Self {
        Self::new((0..self.len()).map(|t| self.atoms[group.inv(t)]).collect())
    }
}

/// A normed space receiving the values of a vector measure.
pub trait Codomain {
    type Value: Clone;
    fn zero(&self) -> Self::Value;
    /// `acc += c · x`
    fn axpy(&self, c: Complex64, x: &Self::Value, acc: &mut Self::Value);
    fn norm(&self, v: &Self::Value) -> Result<f64>;
}

/// `L^Φ(G)` with the Luxemburg norm.
#[derive(Debug, Clone)]
pub struct OrliczSpace {
    pub pair: OrliczPair,
    pub order: usize,
}

impl Codomain for OrliczSpace {
    type Value = GroupFunction;

    fn zero(&self) -> GroupFunction {
        GroupFunction::zeros(self.order)
    }

    fn axpy(&self, c: Complex64, x: &GroupFunction, acc: &mut GroupFunction) {
        for (a, v) in acc.values_mut().iter_mut().zip(x.values()) {
            *a += c * v;
        }
    }

    fn norm(&self, v: &GroupFunction) -> Result<f64> {
        Ok(luxemburg_norm(v, &self.pair.phi).value)
    }
}

/// A block sequence space over the unitary dual.
#[derive(Debug, Clone)]
pub struct BlockSpace {
    pub dual: UnitaryDual,
    pub kind: BlockNormKind,
}

impl Codomain for BlockSpace {
    type Value = BlockVector;

    fn zero(&self) -> BlockVector {
        BlockVector::zeros(&self.dual)
    }

    fn axpy(&self, c: Complex64, x: &BlockVector, acc: &mut BlockVector) {
        acc.axpy(c, x);
    }

    fn norm(&self, v: &BlockVector) -> Result<f64> {
        block_norm(v, &self.kind)
    }
}

/// A finitely additive vector measure given by its atoms `ν({t})`.
#[derive(Debug, Clone)]
pub struct VectorMeasure<C: Codomain> {
    codomain: C,
    atoms: Vec<C::Value>,
}

impl<C: Codomain> VectorMeasure<C> {
    pub fn from_atoms(codomain: C, atoms: Vec<C::Value>) -> Self {
        Self { codomain, atoms }
    }

    /// `ν_T({t}) = T(χ_{t})`
    pub fn from_operator<T: FnMut(&GroupFunction) -> C::Value>(
        codomain: C,
        order: usize,
        mut op: T,
    ) -> Self {
        let atoms = (0..order)
            .map(|t| {
                let mut chi = GroupFunction::zeros(order);
                chi.values_mut()[t] = ONE;
                op(&chi)
            })
            .collect();
        Self { codomain, atoms }
    }

    pub fn codomain(&self) -> &C {
        &self.codomain
    }

    pub fn order(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, t: usize) -> &C::Value {
        &self.atoms[t]
    }

    pub fn atoms(&self) -> &[C::Value] {
        &self.atoms
    }

    /// `ν(A) = Σ_{t∈A} ν({t})`
    pub fn measure(&self, set: &BorelSet) -> C::Value {
        let mut acc = self.codomain.zero();
        for &t in set.indices() {
            self.codomain.axpy(ONE, &self.atoms[t], &mut acc);
        }
        acc
    }

    /// `|ν|(A)`; the singleton partition is the finest, hence maximal.
    pub fn variation(&self, set: &BorelSet) -> Result<f64> {
        let mut s = 0.0;
        for &t in set.indices() {
            s += self.codomain.norm(&self.atoms[t])?;
        }
        Ok(s)
    }

    /// `Σ_{E∈ρ} ‖ν(E)‖` for a partition `ρ`.
    pub fn partition_sum(&self, partition: &[BorelSet]) -> Result<f64> {
        let mut s = 0.0;
        for e in partition {
            s += self.codomain.norm(&self.measure(e))?;
        }
        Ok(s)
    }

    /// `I_ν(f) = Σ_t f(t) ν({t})`
    pub fn integrate(&self, f: &GroupFunction) -> Result<C::Value> {
        if f.len() != self.order() {
            return Err(Error::Shape {
                expected: self.order(),
                found: f.len(),
            });
        }
        let mut acc = self.codomain.zero();
        for (v, atom) in f.values().iter().zip(&self.atoms) {
            if *v != ZERO {
                self.codomain.axpy(*v, atom, &mut acc);
            }
        }
        Ok(acc)
    }
}

/// `ν({t}) = T χ_{t}`, the columns of an `n × n` matrix acting on `L^Φ(G)`.
pub fn measure_from_matrix(t: &CMatrix, pair: &OrliczPair) -> Result<VectorMeasure<OrliczSpace>> {
    let n = t.nrows();
    if t.ncols() != n {
        return Err(Error::Shape {
            expected: n,
            found: t.ncols(),
        });
    }
    let space = OrliczSpace {
        pair: pair.clone(),
        order: n,
    };
    Ok(VectorMeasure::from_operator(space, n, |chi| {
        GroupFunction::new(
            (t * nalgebra::DVector::from_column_slice(chi.values()))
                .iter()
                .copied()
                .collect(),
        )
    }))
}

/// `ν_{Φ,μ}(A) = μ * χ_A` with values in `L^Φ(G)`.
pub fn convolution_measure(
    group: &FiniteGroup,
    mu: &AtomicMeasure,
    pair: &OrliczPair,
) -> Result<VectorMeasure<OrliczSpace>> {
    mu.check_order(group)?;
    let n = group.order();
    // (μ*χ_t)(r) = μ({r t⁻¹})
    let atoms = (0..n)
        .map(|t| {
            let ti = group.inv(t);
            GroupFunction::new((0..n).map(|r| mu.atoms[group.mul(r, ti)]).collect())
        })
        .collect();
    Ok(VectorMeasure::from_atoms(
        OrliczSpace {
            pair: pair.clone(),
            order: n,
        },
        atoms,
    ))
}

/// `ν(A) = χ̂_A` in a block space; with a sup kind this is `ν_{Φ,0}`.
pub fn fourier_measure(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    kind: BlockNormKind,
) -> VectorMeasure<BlockSpace> {
    let space = BlockSpace {
        dual: dual.clone(),
        kind,
    };
    VectorMeasure::from_operator(space, group.order(), |chi| fourier(group, dual, chi))
}

/// `ν_{Φ,Ψ}(A) = χ̂_A` in the `ℓ^Ψ` block space of a conjugate power pair.
pub fn hy_measure(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    pair: &OrliczPair,
) -> Result<VectorMeasure<BlockSpace>> {
    hy_exponent(pair)?;
    Ok(fourier_measure(
        group,
        dual,
        BlockNormKind::LPhi(pair.swapped()),
    ))
}

/// Density `f` with `ν = ν_{Φ, f dm_G}`, read off `f(t) = n·ν({e})(t)`.
pub fn recover_density(
    nu: &VectorMeasure<OrliczSpace>,
    group: &FiniteGroup,
) -> Result<GroupFunction> {
    let n = group.order();
    if nu.order() != n {
        return Err(Error::Shape {
            expected: n,
            found: nu.order(),
        });
    }
    let f = nu
        .atom(group.identity())
        .scale(Complex64::new(n as f64, 0.0));
    let rebuilt =
        convolution_measure(group, &AtomicMeasure::from_density(&f), &nu.codomain().pair)?;
    let residual = (0..n)
        .map(|t| rebuilt.atom(t).max_abs_diff(nu.atom(t)))
        .fold(0.0, f64::max);
    if residual > DENSITY_RESIDUAL_TOL {
        return Err(Error::NotConvolution(residual));
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitConvention {
    /// `F(u)(s) = g(s u⁻¹)`, under which `g*f = ∫ f F dm_G`.
    InverseRight,
    /// `F(u)(s) = g(s u)`, the plain right translate.
    Right,
}

/// `u ↦ F(u)`, a family of translates of one function.
#[derive(Debug, Clone)]
pub struct OrbitMap {
    values: Vec<GroupFunction>,
}

impl OrbitMap {
    pub fn at(&self, u: usize) -> &GroupFunction {
        &self.values[u]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫ f F dm_G = (1/n) Σ_u f(u) F(u)`
    pub fn integrate(&self, f: &GroupFunction) -> GroupFunction {
        let n = self.values.len();
        let mut acc = GroupFunction::zeros(n);
        for (u, fu) in f.values().iter().enumerate() {
            for (a, v) in acc.values_mut().iter_mut().zip(self.values[u].values()) {
                *a += fu * v;
            }
        }
        acc.scale(Complex64::new(1.0 / n as f64, 0.0))
    }
}

pub fn orbit_map(group: &FiniteGroup, g: &GroupFunction, convention: OrbitConvention) -> OrbitMap {
    let n = group.order();
    let values = (0..n)
        .map(|u| {
            let k = match convention {
                OrbitConvention::InverseRight => group.inv(u),
                OrbitConvention::Right => u,
            };
            GroupFunction::new((0..n).map(|s| g.values()[group.mul(s, k)]).collect())
        })
        .collect();
    OrbitMap { values }
}

/// `max_t |(g*f)(t) − (∫ f F dm_G)(t)|` where `g*f` convolves `g dm_G` with `f`.
pub fn orbit_identity_residual(
    group: &FiniteGroup,
    g: &GroupFunction,
    f: &GroupFunction,
    convention: OrbitConvention,
) -> Result<f64> {
    let lhs = AtomicMeasure::from_density(g).convolve(group, f)?;
    Ok(orbit_map(group, g, convention)
        .integrate(f)
        .max_abs_diff(&lhs))
}

/// `sup{‖μ*f‖_Φ : ‖f‖₁ <= 1} = max_t ‖μ*(n χ_{t})‖_Φ`.
pub fn l1_ball_sup(group: &FiniteGroup, mu: &AtomicMeasure, phi: &YoungFunction) -> Result<f64> {
    let n = group.order();
    let mut best: f64 = 0.0;
    for t in 0..n {
        let h = mu.convolve(group, &GroupFunction::point_mass(n, t))?;
        best = best.max(luxemburg_norm(&h, phi).value);
    }
    Ok(best)
}

/// How the supremum over the dual unit ball is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormPath {
    /// Exhaustive enumeration of real sign patterns; real `μ`, order <= 12.
    Oracle,
    /// Enumeration of `m`-th roots of unity as phases (diagnostic).
    PhaseOracle(usize),
    /// Multi-start alternating ascent from seeded random phases.
    Ascent { starts: usize, seed: u64 },
}

impl NormPath {
    pub fn ascent(seed: u64) -> Self {
        NormPath::Ascent {
            starts: DEFAULT_STARTS,
            seed,
        }
    }
}

/// Maximizer of `ε ↦ ‖μ*(ε w)‖_Φ` over unimodular `ε` on the support of `w`.
#[derive(Debug, Clone)]
pub struct PhaseSup {
    pub result: NormResult,
    /// `ε w` at the best pattern found.
    pub argmax: GroupFunction,
}

/// `sup_{g ∈ B_{L^Ψ}} ∫ w |μ̃*g| dm_G` for a weight `w >= 0`.
///
/// For a fixed phase pattern `ε` the inner supremum over the Orlicz-norm
/// unit ball is `‖μ*(ε w)‖_Φ`, so the problem reduces to maximizing a convex
/// function of `ε`.
pub fn weighted_semivariation(
    group: &FiniteGroup,
    mu: &AtomicMeasure,
    weight: &[f64],
    phi: &YoungFunction,
    path: NormPath,
) -> Result<PhaseSup> {
    mu.check_order(group)?;
    let n = group.order();
    if weight.len() != n {
        return Err(Error::Shape {
            expected: n,
            found: weight.len(),
        });
    }
    let support: Vec<usize> = (0..n).filter(|&s| weight[s] > 0.0).collect();
    // column s of the operator, scaled by the weight: w_s (μ*χ_s)
    let cols: Vec<Vec<Complex64>> = support
        .iter()
        .map(|&s| {
            let si = group.inv(s);
            (0..n)
                .map(|r| mu.atoms[group.mul(r, si)] * weight[s])
                .collect()
        })
        .collect();
    let upper = mu.total_variation() * luxemburg_of_moduli(weight, phi).value;
    let finish = |value: f64, phases: &[Complex64], method: NormMethod, lower: f64| {
        let mut argmax = GroupFunction::zeros(n);
        for (k, &s) in support.iter().enumerate() {
            argmax.values_mut()[s] = phases[k] * weight[s];
        }
        PhaseSup {
            result: NormResult {
                value,
                method,
                residual: (upper - lower).max(0.0),
                bracket: Some((lower, upper)),
            },
            argmax,
        }
    };
    if support.is_empty() || mu.atoms.iter().all(|a| *a == ZERO) {
        return Ok(finish(
            0.0,
            &vec![ONE; support.len()],
            NormMethod::Oracle,
            0.0,
        ));
    }
    match path {
        NormPath::Oracle => {
            if n > ORACLE_MAX_ORDER {
                return Err(Error::OracleSize {
                    order: n,
                    limit: ORACLE_MAX_ORDER,
                });
            }
            if !mu.is_real() {
                return Err(Error::Precondition(
                    "sign-pattern oracle needs a real measure".into(),
                ));
            }
            let (value, phases) = sign_oracle(&cols, n, phi);
            Ok(finish(value, &phases, NormMethod::Oracle, value))
        }
        NormPath::PhaseOracle(m) => {
            let m = m.max(2);
            let count = (m as f64).powi(support.len() as i32 - 1);
            if count > PHASE_PATTERN_CAP as f64 {
                return Err(Error::OracleSize {
                    order: n,
                    limit: ORACLE_MAX_ORDER,
                });
            }
            let (value, phases) = phase_oracle(&cols, n, phi, m);
            Ok(finish(value, &phases, NormMethod::Oracle, value))
        }
        NormPath::Ascent { starts, seed } => {
            let real = mu.is_real();
            let reflected = mu.reflect(group);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = (f64::NEG_INFINITY, vec![ONE; support.len()]);
            for start in 0..starts.max(1) {
                let init: Vec<Complex64> = if start == 0 {
                    vec![ONE; support.len()]
                } else if real {
                    (0..support.len())
                        .map(|_| if rng.gen::<bool>() { ONE } else { -ONE })
                        .collect()
                } else {
                    (0..support.len())
                        .map(|_| {
                            Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
                        })
                        .collect()
                };
                let (v, phases) = ascend(group, &reflected, &cols, &support, n, phi, init, real);
                if v > best.0 {
                    best = (v, phases);
                }
            }
            Ok(finish(best.0, &best.1, NormMethod::DualAscent, best.0))
        }
    }
}

fn combine(cols: &[Vec<Complex64>], phases: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut h = vec![ZERO; n];
    for (c, e) in cols.iter().zip(phases) {
        for (a, v) in h.iter_mut().zip(c) {
            *a += e * v;
        }
    }
    h
}

fn lux(h: &[Complex64], phi: &YoungFunction) -> f64 {
    let moduli: Vec<f64> = h.iter().map(|v| v.norm()).collect();
    luxemburg_of_moduli(&moduli, phi).value
}

/// Gray-code enumeration of `{±1}^m` with the first sign fixed.
fn sign_oracle(cols: &[Vec<Complex64>], n: usize, phi: &YoungFunction) -> (f64, Vec<Complex64>) {
    let m = cols.len();
    let mut signs = vec![ONE; m];
    let mut h = combine(cols, &signs, n);
    let mut best = (lux(&h, phi), signs.clone());
    for k in 1..(1usize << (m - 1)) {
        let j = k.trailing_zeros() as usize + 1;
        signs[j] = -signs[j];
        for (a, v) in h.iter_mut().zip(&cols[j]) {
            *a += signs[j] * v * 2.0;
        }
        let v = lux(&h, phi);
        if v > best.0 {
            best = (v, signs.clone());
        }
    }
    // recompute the winner without accumulated rounding
    let v = lux(&combine(cols, &best.1, n), phi);
    (v, best.1)
}

fn phase_oracle(
    cols: &[Vec<Complex64>],
    n: usize,
    phi: &YoungFunction,
    m: usize,
) -> (f64, Vec<Complex64>) {
    let roots: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64))
        .collect();
    let len = cols.len();
    let mut digits = vec![0usize; len];
    let mut best = (f64::NEG_INFINITY, vec![ONE; len]);
    loop {
        let phases: Vec<Complex64> = digits.iter().map(|&d| roots[d]).collect();
        let v = lux(&combine(cols, &phases, n), phi);
        if v > best.0 {
            best = (v, phases);
        }
        let mut i = 1;
        while i < len {
            digits[i] += 1;
            if digits[i] < m {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i >= len {
            break;
        }
    }
    best
}

/// Alternates `g ← norming functional of μ*(εw)` and `ε ← phase of μ̃*g`,
/// then, for real data, polishes with single sign flips.
#[allow(clippy::too_many_arguments)]
fn ascend(
    group: &FiniteGroup,
    reflected: &AtomicMeasure,
    cols: &[Vec<Complex64>],
    support: &[usize],
    n: usize,
    phi: &YoungFunction,
    mut phases: Vec<Complex64>,
    real: bool,
) -> (f64, Vec<Complex64>) {
    let mut value = lux(&combine(cols, &phases, n), phi);
    loop {
        for _ in 0..ASCENT_MAX_ROUNDS {
            let h = GroupFunction::new(combine(cols, &phases, n));
            let g = norming_functional(&h, phi);
            let Ok(a) = reflected.convolve(group, &g) else {
                break;
            };
            let next: Vec<Complex64> = support
                .iter()
                .zip(&phases)
                .map(|(&s, &old)| {
                    let z = a.values()[s];
                    if real {
                        if z.re > 0.0 {
                            ONE
                        } else if z.re < 0.0 {
                            -ONE
                        } else {
                            old
                        }
                    } else if z.norm() > 0.0 {
                        (z / z.norm()).conj()
                    } else {
                        old
                    }
                })
                .collect();
            let v = lux(&combine(cols, &next, n), phi);
            if v <= value * (1.0 + 1e-15) {
                break;
            }
            value = v;
            phases = next;
        }
        if !real {
            return (value, phases);
        }
        let mut improved = false;
        for j in 1..phases.len() {
            phases[j] = -phases[j];
            let v = lux(&combine(cols, &phases, n), phi);
            if v > value * (1.0 + 1e-13) {
                value = v;
                improved = true;
            } else {
                phases[j] = -phases[j];
            }
        }
        if !improved {
            return (value, phases);
        }
    }
}

/// Semivariation `‖ν_{Φ,μ}‖(A) = sup_{g ∈ B_{L^Ψ}} ∫_A |μ̃*g| dm_G`.
pub fn semivariation(
    group: &FiniteGroup,
    mu: &AtomicMeasure,
    set: &BorelSet,
    pair: &OrliczPair,
    path: NormPath,
) -> Result<NormResult> {
    let w: Vec<f64> = (0..group.order())
        .map(|t| if set.contains(t) { 1.0 } else { 0.0 })
        .collect();
    Ok(weighted_semivariation(group, mu, &w, &pair.phi, path)?.result)
}

/// `‖f‖_{ν_{Φ,μ}} = sup_{g ∈ B_{L^Ψ}} ∫ |f| |μ̃*g| dm_G`.
pub fn l1nu_norm(
    group: &FiniteGroup,
    mu: &AtomicMeasure,
    f: &GroupFunction,
    pair: &OrliczPair,
    path: NormPath,
) -> Result<NormResult> {
    Ok(weighted_semivariation(group, mu, &f.moduli(), &pair.phi, path)?.result)
}

/// `‖f‖_ν` for a Fourier measure with values in a block space: the maximum of
/// `‖(ε|f|)^‖` over real sign patterns `ε`.
pub fn block_l1nu_norm(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    f: &GroupFunction,
    kind: &BlockNormKind,
) -> Result<f64> {
    let n = group.order();
    if n > ORACLE_MAX_ORDER {
        return Err(Error::OracleSize {
            order: n,
            limit: ORACLE_MAX_ORDER,
        });
    }
    let w = f.moduli();
    let support: Vec<usize> = (0..n).filter(|&t| w[t] > 0.0).collect();
    if support.is_empty() {
        return Ok(0.0);
    }
    let mut best: f64 = 0.0;
    for k in 0..(1usize << (support.len() - 1)) {
        let mut h = GroupFunction::zeros(n);
        for (j, &t) in support.iter().enumerate() {
            let sign = if j > 0 && (k >> (j - 1)) & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            h.values_mut()[t] = Complex64::new(sign * w[t], 0.0);
        }
        best = best.max(block_norm(&fourier(group, dual, &h), kind)?);
    }
    Ok(best)
}

/// Estimate of `‖ι‖ = sup ‖f‖_ν / ‖f‖_Φ` for the inclusion `L^Φ ⊂ L¹(ν_{Φ,μ})`:
/// random nonnegative samples plus `χ_G`, refined by a multiplicative
/// random-coordinate ascent from the best sample.
pub fn inclusion_norm_estimate(
    group: &FiniteGroup,
    mu: &AtomicMeasure,
    pair: &OrliczPair,
    samples: usize,
    refine_steps: usize,
    seed: u64,
) -> Result<(f64, GroupFunction)> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratio = |w: &[f64]| -> Result<f64> {
        let f = GroupFunction::from_real(w);
        let nu = l1nu_norm(group, mu, &f, pair, NormPath::Oracle)?.value;
        Ok(nu / luxemburg_norm(&f, &pair.phi).value)
    };
    let mut best_w = vec![1.0; n];
    let mut best = ratio(&best_w)?;
    for _ in 0..samples {
        let w: Vec<f64> = (0..n).map(|_| normal(&mut rng).abs()).collect();
        let r = ratio(&w)?;
        if r > best {
            best = r;
            best_w = w;
        }
    }
    let mut step = 0.5;
    for _ in 0..refine_steps {
        let mut w = best_w.clone();
        let j = rng.gen_range(0..n);
        w[j] = (w[j] * (1.0 + step * normal(&mut rng))).abs();
        if w.iter().all(|&x| x == 0.0) {
            continue;
        }
        let r = ratio(&w)?;
        if r > best {
            best = r;
            best_w = w;
        } else {
            step = (step * 0.97).max(1e-3);
        }
    }
    Ok((best, GroupFunction::from_real(&best_w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_dual;
    use crate::orlicz::{dual_unit_constant, indicator_luxemburg, ASSERT_SLACK};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::parse(spec).unwrap()
    }

    #[test]
    fn convolution_examples() {
        let g = group("cyclic:2");
        let f = GroupFunction::from_real(&[3.0, -1.0]);
        assert_eq!(AtomicMeasure::dirac(2, 0).convolve(&g, &f).unwrap(), f);
        assert_eq!(
            AtomicMeasure::dirac(2, 1).convolve(&g, &f).unwrap(),
            GroupFunction::from_real(&[-1.0, 3.0])
        );
        let g = group("dihedral:3");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = GroupFunction::random_complex(6, &mut rng);
        let h = AtomicMeasure::uniform(6).convolve(&g, &f).unwrap();
        assert!(h.max_abs_diff(&GroupFunction::constant(6, f.mean())) < 1e-14);
        assert!(AtomicMeasure::zero(3).convolve(&g, &f).is_err());
    }

    #[test]
    fn reflection_and_adjoint_identity() {
        let g = group("cyclic:4");
        assert_eq!(
            AtomicMeasure::dirac(4, 1).reflect(&g),
            AtomicMeasure::dirac(4, 3)
        );
        let sym = AtomicMeasure::from_real(&[1.0, 2.0, 5.0, 2.0]);
        assert_eq!(sym.reflect(&g), sym);
        let g = group("dihedral:4");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let mu = AtomicMeasure::random_complex(8, &mut rng);
            let f = GroupFunction::random_complex(8, &mut rng);
            let h = GroupFunction::random_complex(8, &mut rng);
            let lhs = mu.convolve(&g, &f).unwrap().pair(&h);
            let rhs = f.pair(&mu.reflect(&g).convolve(&g, &h).unwrap());
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn measure_from_operator_examples() {
        let pair = OrliczPair::parse("power:2").unwrap();
        let id = measure_from_matrix(&CMatrix::identity(4, 4), &pair).unwrap();
        for t in 0..4 {
            assert_eq!(*id.atom(t), BorelSet::singleton(t).indicator(4));
        }
        let g = group("symmetric:3");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = AtomicMeasure::random_real(6, &mut rng);
        let nu = convolution_measure(&g, &mu, &pair).unwrap();
        assert_eq!(nu.atom(g.identity()).values(), mu.atoms());
        let generic = VectorMeasure::from_operator(nu.codomain().clone(), 6, |chi| {
            mu.convolve(&g, chi).unwrap()
        });
        for t in 0..6 {
            assert!(generic.atom(t).max_abs_diff(nu.atom(t)) < 1e-15);
        }
        let dual = build_dual(&g).unwrap();
        let ft = fourier_measure(&g, &dual, BlockNormKind::SupOp);
        for t in 0..6 {
            for (b, irrep) in ft.atom(t).blocks().iter().zip(&dual.irreps) {
                assert!((b - irrep.matrices[t].adjoint() / c(6.0)).camax() < 1e-15);
            }
        }
    }

    #[test]
    fn additivity_and_partitions() {
        let g = group("dihedral:4");
        let pair = OrliczPair::parse("npower:3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mu = AtomicMeasure::random_real(8, &mut rng);
        let nu = convolution_measure(&g, &mu, &pair).unwrap();
        assert!(nu.measure(&BorelSet::empty()).is_zero());
        for _ in 0..50 {
            let a = BorelSet::random(8, &mut rng);
            let direct = mu.convolve(&g, &a.indicator(8)).unwrap();
            assert!(nu.measure(&a).max_abs_diff(&direct) < 1e-14);
            let var = nu.variation(&a).unwrap();
            let idx = a.indices().to_vec();
            let mut parts: Vec<Vec<usize>> = vec![Vec::new(); 3];
            for t in idx {
                parts[rng.gen_range(0..3)].push(t);
            }
            let parts: Vec<BorelSet> = parts
                .into_iter()
                .map(|p| BorelSet::new(8, p).unwrap())
                .collect();
            assert!(nu.partition_sum(&parts).unwrap() <= var + 1e-12);
        }
    }

    #[test]
    fn fourier_measure_variation_is_haar() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for spec in ["cyclic:6", "dihedral:4", "quaternion8", "symmetric:3"] {
            let g = group(spec);
            let dual = build_dual(&g).unwrap();
            let op = fourier_measure(&g, &dual, BlockNormKind::SupOp);
            let hs = fourier_measure(&g, &dual, BlockNormKind::SupHs);
            let scale = (dual.max_dim() as f64).sqrt();
            for _ in 0..10 {
                let a = BorelSet::random(g.order(), &mut rng);
                let m = g.haar(&a);
                assert!((op.variation(&a).unwrap() - m).abs() <= 1e-10);
                assert!((hs.variation(&a).unwrap() - scale * m).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn density_variation_and_round_trip() {
        let g = group("quaternion8");
        let pair = OrliczPair::parse("npower:1.5").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = GroupFunction::random_complex(8, &mut rng);
        let nu = convolution_measure(&g, &AtomicMeasure::from_density(&f), &pair).unwrap();
        let back = recover_density(&nu, &g).unwrap();
        assert!(back.max_abs_diff(&f) <= 1e-12);
        let norm = luxemburg_norm(&f, &pair.phi).value;
        let a = BorelSet::random(8, &mut rng);
        assert!((nu.variation(&a).unwrap() - norm * g.haar(&a)).abs() <= 1e-8);

        let dirac = convolution_measure(&g, &AtomicMeasure::dirac(8, 0), &pair).unwrap();
        assert_eq!(
            recover_density(&dirac, &g).unwrap(),
            GroupFunction::point_mass(8, 0)
        );
        let zero = convolution_measure(&g, &AtomicMeasure::zero(8), &pair).unwrap();
        assert!(recover_density(&zero, &g).unwrap().is_zero());

        let bogus = measure_from_matrix(&CMatrix::identity(8, 8).scale(2.0), &pair).unwrap();
        let mut atoms = bogus.atoms().to_vec();
        atoms[3] = GroupFunction::constant(8, c(1.0));
        let bogus = VectorMeasure::from_atoms(bogus.codomain().clone(), atoms);
        assert!(matches!(
            recover_density(&bogus, &g),
            Err(Error::NotConvolution(_))
        ));
    }

    #[test]
    fn integration_matches_operators() {
        let g = group("dihedral:4");
        let dual = build_dual(&g).unwrap();
        let pair = OrliczPair::parse("npower:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mu = AtomicMeasure::random_complex(8, &mut rng);
        let nu = convolution_measure(&g, &mu, &pair).unwrap();
        let ft = hy_measure(&g, &dual, &pair).unwrap();
        for _ in 0..10 {
            let f = GroupFunction::random_complex(8, &mut rng);
            assert!(
                nu.integrate(&f)
                    .unwrap()
                    .max_abs_diff(&mu.convolve(&g, &f).unwrap())
                    <= 1e-12
            );
            assert!(
                ft.integrate(&f)
                    .unwrap()
                    .max_abs_diff(&fourier(&g, &dual, &f))
                    <= 1e-12
            );
        }
        let a = BorelSet::new(8, [0, 5, 6]).unwrap();
        assert!(
            nu.integrate(&a.indicator(8))
                .unwrap()
                .max_abs_diff(&nu.measure(&a))
                < 1e-15
        );
    }

    #[test]
    fn orbit_map_examples() {
        let g = group("cyclic:2");
        let h = GroupFunction::from_real(&[2.0, 7.0]);
        let orbit = orbit_map(&g, &h, OrbitConvention::InverseRight);
        assert_eq!(orbit.at(0), &h);
        assert_eq!(orbit.at(1), &GroupFunction::from_real(&[7.0, 2.0]));

        let g = group("symmetric:3");
        let ones = GroupFunction::constant(6, c(1.0));
        let orbit = orbit_map(&g, &ones, OrbitConvention::InverseRight);
        assert!((0..6).all(|u| orbit.at(u) == &ones));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pair = OrliczPair::parse("npower:3").unwrap();
        let mut plain_fails = false;
        for _ in 0..10 {
            let h = GroupFunction::random_complex(6, &mut rng);
            let f = GroupFunction::random_complex(6, &mut rng);
            assert!(
                orbit_identity_residual(&g, &h, &f, OrbitConvention::InverseRight).unwrap()
                    <= 1e-12
            );
            plain_fails |=
                orbit_identity_residual(&g, &h, &f, OrbitConvention::Right).unwrap() > 1e-6;
            let orbit = orbit_map(&g, &h, OrbitConvention::InverseRight);
            let nu = convolution_measure(&g, &AtomicMeasure::from_density(&h), &pair).unwrap();
            let base = luxemburg_norm(&h, &pair.phi).value;
            for t in 0..6 {
                assert!(nu.atom(t).max_abs_diff(&orbit.at(t).scale(c(1.0 / 6.0))) < 1e-15);
                assert!(
                    (luxemburg_norm(orbit.at(t), &pair.phi).value - base).abs() <= 1e-12 * base
                );
            }
        }
        assert!(plain_fails);
    }

    #[test]
    fn l1_ball_sup_examples() {
        let g = group("dihedral:3");
        let phi = YoungFunction::normalized_power(3.0).unwrap();
        let n = 6.0;
        let v = l1_ball_sup(&g, &AtomicMeasure::dirac(6, 0), &phi).unwrap();
        assert!((v - n / phi.inverse(n).unwrap()).abs() < 1e-9);
        let v = l1_ball_sup(&g, &AtomicMeasure::uniform(6), &phi).unwrap();
        assert!((v - 1.0 / phi.inverse(1.0).unwrap()).abs() < 1e-9);
        assert_eq!(l1_ball_sup(&g, &AtomicMeasure::zero(6), &phi).unwrap(), 0.0);
    }

    #[test]
    fn semivariation_examples() {
        let pair = OrliczPair::parse("power:2").unwrap();
        let g = group("cyclic:6");
        let dirac = AtomicMeasure::dirac(6, 0);
        assert_eq!(
            semivariation(&g, &dirac, &BorelSet::empty(), &pair, NormPath::Oracle)
                .unwrap()
                .value,
            0.0
        );
        let full = BorelSet::full(6);
        let o = semivariation(&g, &dirac, &full, &pair, NormPath::Oracle)
            .unwrap()
            .value;
        let a = semivariation(&g, &dirac, &full, &pair, NormPath::ascent(1))
            .unwrap()
            .value;
        assert!((o - 1.0).abs() < 1e-9 && (a - o).abs() < 1e-6);

        let c0 = dual_unit_constant(6, &pair).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mu = AtomicMeasure::random_real(6, &mut rng);
            let set = BorelSet::random(6, &mut rng);
            if set.is_empty() {
                continue;
            }
            let m = g.haar(&set);
            let o = semivariation(&g, &mu, &set, &pair, NormPath::Oracle)
                .unwrap()
                .value;
            let lower = mu.total_mass().norm() * m / c0;
            let upper = mu.total_variation() * indicator_luxemburg(&pair.phi, m).unwrap();
            assert!(lower - 1e-8 <= o && o <= upper + 1e-8);
            let s = semivariation(&g, &mu, &set, &pair, NormPath::ascent(3)).unwrap();
            assert!((s.value - o).abs() <= 1e-6, "{} vs {o}", s.value);
        }
        let big = group("cyclic:13");
        assert!(matches!(
            semivariation(
                &big,
                &AtomicMeasure::dirac(13, 0),
                &BorelSet::full(13),
                &pair,
                NormPath::Oracle
            ),
            Err(Error::OracleSize { .. })
        ));
    }

    #[test]
    fn complex_measures_use_the_solver() {
        let g = group("cyclic:5");
        let pair = OrliczPair::parse("npower:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mu = AtomicMeasure::random_complex(5, &mut rng);
        let set = BorelSet::full(5);
        assert!(semivariation(&g, &mu, &set, &pair, NormPath::Oracle).is_err());
        let asc = semivariation(&g, &mu, &set, &pair, NormPath::ascent(0)).unwrap();
        let ph = semivariation(&g, &mu, &set, &pair, NormPath::PhaseOracle(8)).unwrap();
        // the ascent works over continuous phases, the diagnostic over a grid
        assert!(asc.value >= ph.value - 1e-9);
        let (lo, hi) = asc.bracket.unwrap();
        assert!(lo <= asc.value && asc.value <= hi);
    }

    #[test]
    fn l1nu_examples() {
        let g = group("dihedral:3");
        let pair = OrliczPair::parse("npower:1.5").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dirac = AtomicMeasure::dirac(6, 0);
        for _ in 0..10 {
            let f = GroupFunction::random_complex(6, &mut rng);
            let lux = luxemburg_norm(&f, &pair.phi).value;
            let o = l1nu_norm(&g, &dirac, &f, &pair, NormPath::Oracle)
                .unwrap()
                .value;
            let a = l1nu_norm(&g, &dirac, &f, &pair, NormPath::ascent(2))
                .unwrap()
                .value;
            assert!((o - lux).abs() <= 1e-8 && (a - lux).abs() <= 1e-6);

            let mu = AtomicMeasure::random_real(6, &mut rng);
            let v = l1nu_norm(&g, &mu, &f, &pair, NormPath::Oracle)
                .unwrap()
                .value;
            assert!(v <= lux * mu.total_variation() + ASSERT_SLACK);
            let set = BorelSet::random(6, &mut rng);
            let s = semivariation(&g, &mu, &set, &pair, NormPath::Oracle)
                .unwrap()
                .value;
            let chi = l1nu_norm(&g, &mu, &set.indicator(6), &pair, NormPath::Oracle)
                .unwrap()
                .value;
            assert!((s - chi).abs() <= 1e-12);
        }
        assert_eq!(
            l1nu_norm(
                &g,
                &dirac,
                &GroupFunction::zeros(6),
                &pair,
                NormPath::Oracle
            )
            .unwrap()
            .value,
            0.0
        );
    }

    #[test]
    fn block_l1nu_dominates_l1() {
        let pair = OrliczPair::parse("npower:1.5").unwrap();
        let kind = BlockNormKind::LPhi(pair.swapped());
        let g = group("cyclic:6");
        let dual = build_dual(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let f = GroupFunction::random_complex(6, &mut rng);
            assert!(f.l1_norm() <= block_l1nu_norm(&g, &dual, &f, &kind).unwrap() + 1e-8);
        }
    }

    #[test]
    fn inclusion_estimate_inside_bracket() {
        let g = group("cyclic:4");
        let pair = OrliczPair::parse("npower:3").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mu = AtomicMeasure::random_real(4, &mut rng);
        let (est, _) = inclusion_norm_estimate(&g, &mu, &pair, 64, 64, 1).unwrap();
        assert!(est >= mu.total_mass().norm() - 1e-6);
        assert!(est <= mu.total_variation() + 1e-9);
    }

    #[test]
    fn measure_specs() {
        assert_eq!(
            AtomicMeasure::parse("dirac:2", 4).unwrap(),
            AtomicMeasure::dirac(4, 2)
        );
        assert_eq!(
            AtomicMeasure::parse("uniform", 4).unwrap(),
            AtomicMeasure::uniform(4)
        );
        assert_eq!(
            AtomicMeasure::parse("random:5", 4).unwrap(),
            AtomicMeasure::parse("random:5", 4).unwrap()
        );
        assert!(AtomicMeasure::parse("dirac:9", 4).is_err());
        assert!(AtomicMeasure::parse("gauss", 4).is_err());
        let dir = std::env::temp_dir().join(format!("oh-measure-{}.csv", std::process::id()));
        std::fs::write(&dir, "0.5,0\n0.25, -1\n# tail\n0.25\n").unwrap();
        let mu = AtomicMeasure::parse(&format!("density:{}", dir.display()), 3).unwrap();
        assert_eq!(mu.atoms()[1], Complex64::new(0.25, -1.0));
        assert!(AtomicMeasure::parse(&format!("density:{}", dir.display()), 4).is_err());
        std::fs::remove_file(dir).ok();
    }
}
