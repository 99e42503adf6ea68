//! The check catalog. Each check evaluates one identity or inequality over
//! seeded random inputs and reports the worst case.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oh_core::groups::{build_dual, validate_dual};
use oh_core::orlicz::{
    dual_unit_constant, holder_pairing, indicator_luxemburg, luxemburg_norm, orlicz_norm,
};
use oh_core::spectral::{
    block_norm, convolution_spectrum_check, fourier, hy_exponent, hy_ratio, inverse_fourier,
    BlockNormKind, BlockVector,
};
use oh_core::vecmeas::{
    block_l1nu_norm, convolution_measure, fourier_measure, hy_measure, inclusion_norm_estimate,
    l1_ball_sup, l1nu_norm, orbit_identity_residual, orbit_map, recover_density, semivariation,
    weighted_semivariation, OrbitConvention, VectorMeasure, ORACLE_MAX_ORDER,
};
use oh_core::young::{young_inequality_slack, DELTA2_K_CAP};
use oh_core::{
    AtomicMeasure, BorelSet, Error, FiniteGroup, GroupFunction, NormPath, OrliczPair, UnitaryDual,
    YoungFunction,
};

use crate::spec::{CheckResult, CheckSpec, Constants, Status, VResult, VerifyError};

pub const TOL_EXACT: f64 = 1e-10;
pub const TOL_MACHINE: f64 = 1e-12;
pub const TOL_PATHS: f64 = 1e-6;
pub const TOL_SLACK: f64 = 1e-8;
pub const TOL_NORM_BOUND: f64 = 1e-9;

/// Relative spread allowed between two independent Hausdorff-Young maxima.
pub const HY_SPREAD_TOL: f64 = 0.01;

/// Largest order for which the inclusion-norm estimate runs.
pub const INCLUSION_MAX_ORDER: usize = 8;
const INCLUSION_SAMPLES: usize = 64;
const INCLUSION_REFINE: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub id: &'static str,
    pub summary: &'static str,
    pub tol: f64,
    /// Whether the result depends on the group spec.
    pub uses_group: bool,
    /// Whether the result depends on the Young spec.
    pub uses_young: bool,
}

const fn info(
    id: &'static str,
    summary: &'static str,
    tol: f64,
    uses_group: bool,
    uses_young: bool,
) -> CheckInfo {
    CheckInfo {
        id,
        summary,
        tol,
        uses_group,
        uses_young,
    }
}

pub const CATALOG: &[CheckInfo] = &[
    info(
        "C-ADJOINT",
        "bilinear adjoint identity for convolution with the reflected measure",
        TOL_MACHINE,
        true,
        false,
    ),
    info(
        "C-CONV-THM",
        "transform of mu*f equals f-hat times mu-hat blockwise",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-DELTA2",
        "doubling-condition verdicts for power and exponential families",
        0.0,
        false,
        true,
    ),
    info(
        "C-DENSITY-RT",
        "density recovered from a convolution measure round-trips exactly",
        TOL_MACHINE,
        true,
        true,
    ),
    info(
        "C-DUAL-VALID",
        "unitary dual: homomorphism, unitarity, orthogonality, completeness",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-EO",
        "integration against nu_{Phi,mu} equals convolution with mu",
        TOL_MACHINE,
        true,
        true,
    ),
    info(
        "C-FOURIER-RT",
        "Peter-Weyl inversion round trip in both directions",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-FT-EXT",
        "integration against Fourier measures equals the Fourier transform",
        TOL_MACHINE,
        true,
        true,
    ),
    info(
        "C-FT-L1",
        "optimal-domain norm of the Fourier measure equals the L1 norm",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-HY-L1",
        "L1 norm is dominated by the Hausdorff-Young optimal-domain norm",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-HY-RATIO",
        "Hausdorff-Young ratio: sqrt(2) at p = 2, finite and stable otherwise",
        TOL_NORM_BOUND,
        true,
        true,
    ),
    info(
        "C-INCL-BRACKET",
        "inclusion norm of L^Phi into L1(nu) lies in [|mu(G)|, ||mu||]",
        TOL_NORM_BOUND,
        true,
        true,
    ),
    info(
        "C-INCL-L1",
        "||f||_1 <= (C0/|mu(G)|) ||f||_nu",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-INTEGRATION-NORM",
        "integration operator of nu_{Phi,mu} has norm one",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-L1NU-EQ",
        "optimal-domain norm for the Dirac measure equals the Luxemburg norm",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-L1NU-IND",
        "optimal-domain norm of an indicator equals the semivariation",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-L1NU-UPPER",
        "||f||_nu <= ||f||_Phi ||mu||",
        TOL_NORM_BOUND,
        true,
        true,
    ),
    info(
        "C-L1SUP",
        "sup of ||mu*f||_Phi over the L1 unit ball equals the max-translate formula",
        TOL_NORM_BOUND,
        true,
        true,
    ),
    info(
        "C-NULLSETS",
        "convolution and Fourier measures have the null sets of Haar measure",
        0.0,
        true,
        true,
    ),
    info(
        "C-ORBIT",
        "orbit map reproduces convolution and the atoms of nu_{Phi,g}",
        TOL_MACHINE,
        true,
        true,
    ),
    info(
        "C-ORLICZ-DUALITY",
        "Luxemburg <= Orlicz <= 2 Luxemburg, and Hoelder's inequality",
        TOL_NORM_BOUND,
        true,
        true,
    ),
    info(
        "C-PARSEVAL",
        "Parseval identity with dimension weights",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-SANDWICH",
        "(|mu(G)|/C0)||f||_1 <= ||f||_nu <= ||density||_Phi ||f||_1",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-SEMIVAR-PATHS",
        "semivariation: sign-pattern oracle agrees with the ascent solver",
        TOL_PATHS,
        true,
        true,
    ),
    info(
        "C-SEMIVAR-SANDWICH",
        "semivariation lies between |mu(G)|m(A)/C0 and ||mu||/Phi^{-1}(1/m(A))",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-VAR-FT",
        "variation of the Fourier measure (operator norm) equals Haar measure",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-VAR-FT-HS",
        "variation of the Fourier measure (Hilbert-Schmidt) equals sqrt(max d) Haar",
        TOL_EXACT,
        true,
        false,
    ),
    info(
        "C-VARIATION-DENSITY",
        "variation of nu_{Phi,f} equals ||f||_Phi m_G",
        TOL_SLACK,
        true,
        true,
    ),
    info(
        "C-YOUNG",
        "numerical conjugate matches closed forms; Young's inequality",
        TOL_SLACK,
        false,
        true,
    ),
];

pub fn lookup(id: &str) -> VResult<&'static CheckInfo> {
    CATALOG
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| VerifyError::UnknownId(id.to_string()))
}

struct Outcome {
    /// Replaces the catalog tolerance when the check fixes its own.
    tol: Option<f64>,
    lhs: f64,
    rhs: f64,
    residual: f64,
    witnesses: Vec<String>,
    note: Option<String>,
}

enum Verdict {
    Done(Outcome),
    Skip(String),
}

/// Tracks the trial with the largest residual.
struct Worst {
    residual: f64,
    lhs: f64,
    rhs: f64,
    witness: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Self {
            residual: f64::NEG_INFINITY,
            lhs: 0.0,
            rhs: 0.0,
            witness: None,
        }
    }

    fn offer(&mut self, residual: f64, lhs: f64, rhs: f64, witness: impl FnOnce() -> String) {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if residual > self.residual {
            self.residual = residual;
            self.lhs = lhs;
            self.rhs = rhs;
            self.witness = Some(witness());
        }
    }

    fn finish(self, note: Option<String>) -> Verdict {
        Verdict::Done(Outcome {
            tol: None,
            lhs: self.lhs,
            rhs: self.rhs,
            residual: self.residual.max(0.0),
            witnesses: self.witness.into_iter().collect(),
            note,
        })
    }
}

struct Ctx<'a> {
    spec: &'a CheckSpec,
    group: FiniteGroup,
    pair: OrliczPair,
    rng: ChaCha8Rng,
    dual: Option<UnitaryDual>,
    constants: Constants,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.group.order()
    }

    fn dual(&mut self) -> VResult<UnitaryDual> {
        if self.dual.is_none() {
            self.dual = Some(build_dual(&self.group)?);
        }
        Ok(self.dual.clone().unwrap())
    }

    /// `C₀ = ‖χ_G‖^o_Ψ`, computed once per check.
    fn c0(&mut self) -> VResult<f64> {
        if let Some(c) = self.constants.c0 {
            return Ok(c);
        }
        let c = dual_unit_constant(self.n(), &self.pair)?;
        self.constants.c0 = Some(c);
        Ok(c)
    }

    fn measure(&mut self) -> VResult<AtomicMeasure> {
        let n = self.n();
        if self.spec.measure == "random" {
            Ok(AtomicMeasure::random_real(n, &mut self.rng))
        } else {
            Ok(AtomicMeasure::parse(&self.spec.measure, n)?)
        }
    }

    /// A measure with `|μ(G)|` bounded away from zero, or `None` when a
    /// fixed measure has zero total mass.
    fn massive_measure(&mut self) -> VResult<Option<AtomicMeasure>> {
        for _ in 0..100 {
            let mu = self.measure()?;
            if mu.total_mass().norm() > 1e-3 {
                return Ok(Some(mu));
            }
            if self.spec.measure != "random" {
                return Ok(None);
            }
        }
        Ok(None)
    }

    fn function(&mut self) -> GroupFunction {
        GroupFunction::random_complex(self.n(), &mut self.rng)
    }

    fn nonempty_set(&mut self) -> BorelSet {
        loop {
            let a = BorelSet::random(self.n(), &mut self.rng);
            if !a.is_empty() {
                return a;
            }
        }
    }

    fn oracle_fits(&self) -> Option<String> {
        (self.n() > ORACLE_MAX_ORDER)
            .then(|| format!("sign-pattern oracle limited to order <= {ORACLE_MAX_ORDER}"))
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn parse_group(spec: &str) -> oh_core::Result<FiniteGroup> {
    match spec.strip_prefix("json:") {
        Some(path) => FiniteGroup::from_json(&std::fs::read_to_string(path)?),
        None => FiniteGroup::parse(spec),
    }
}

fn fmt_set(a: &BorelSet) -> String {
    format!("A={:?}", a.indices())
}

fn fmt_vec(v: &[Complex64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        })
        .collect();
    format!("[{}]", parts.join(","))
}

/// Runs one check. Unsupported combinations are reported as skips.
pub fn run_check(spec: &CheckSpec) -> VResult<CheckResult> {
    let info = lookup(&spec.id)?;
    if spec.trials == 0 {
        return Err(VerifyError::InvalidSpec("trials must be at least 1".into()));
    }
    let tol = spec.tol.unwrap_or(info.tol);
    let started = Instant::now();
    let group = parse_group(&spec.group)?;
    let pair = OrliczPair::parse(&spec.young)?;
    let constants = Constants {
        c0: None,
        phi_inv_one: pair.phi.inverse(1.0).ok(),
        psi_inv_one: pair.psi.inverse(1.0).ok(),
    };
    let mut ctx = Ctx {
        spec,
        group,
        pair,
        rng: ChaCha8Rng::seed_from_u64(spec.seed ^ fnv1a(&spec.id)),
        dual: None,
        constants,
    };
    let needs_dual = matches!(
        info.id,
        "C-CONV-THM"
            | "C-DUAL-VALID"
            | "C-FOURIER-RT"
            | "C-FT-EXT"
            | "C-FT-L1"
            | "C-HY-L1"
            | "C-HY-RATIO"
            | "C-NULLSETS"
            | "C-PARSEVAL"
            | "C-VAR-FT"
            | "C-VAR-FT-HS"
    );
    let verdict = if needs_dual && !ctx.group.has_catalog_dual() {
        Verdict::Skip(format!("no unitary dual available for {}", spec.group))
    } else {
        dispatch(info.id, &mut ctx)?
    };
    let runtime_ms = started.elapsed().as_millis() as u64;
    let mut result = CheckResult {
        id: spec.id.clone(),
        group: spec.group.clone(),
        young: spec.young.clone(),
        measure: spec.measure.clone(),
        status: Status::Skip,
        lhs: 0.0,
        rhs: 0.0,
        residual: 0.0,
        tol,
        witnesses: Vec::new(),
        runtime_ms,
        constants: ctx.constants,
        note: None,
    };
    match verdict {
        Verdict::Skip(reason) => result.note = Some(reason),
        Verdict::Done(o) => {
            if spec.tol.is_none() {
                if let Some(t) = o.tol {
                    result.tol = t;
                }
            }
            let tol = result.tol;
            result.status = if o.residual <= tol {
                Status::Pass
            } else {
                Status::Fail
            };
            result.lhs = clamp_finite(o.lhs);
            result.rhs = clamp_finite(o.rhs);
            result.residual = clamp_finite(o.residual);
            result.witnesses = o.witnesses;
            result.note = o.note;
        }
    }
    Ok(result)
}

/// Infinities become `±f64::MAX` and NaN becomes `f64::MAX`, so reports
/// stay valid JSON.
fn clamp_finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(f64::MIN, f64::MAX)
    }
}

fn dispatch(id: &str, ctx: &mut Ctx) -> VResult<Verdict> {
    match id {
        "C-ADJOINT" => adjoint(ctx),
        "C-CONV-THM" => conv_thm(ctx),
        "C-DELTA2" => delta2(ctx),
        "C-DENSITY-RT" => density_rt(ctx),
        "C-DUAL-VALID" => dual_valid(ctx),
        "C-EO" => eo(ctx),
        "C-FOURIER-RT" => fourier_rt(ctx),
        "C-FT-EXT" => ft_ext(ctx),
        "C-FT-L1" => ft_l1(ctx),
        "C-HY-L1" => hy_l1(ctx),
        "C-HY-RATIO" => hy_ratio_check(ctx),
        "C-INCL-BRACKET" => incl_bracket(ctx),
        "C-INCL-L1" => incl_l1(ctx),
        "C-INTEGRATION-NORM" => integration_norm(ctx),
        "C-L1NU-EQ" => l1nu_eq(ctx),
        "C-L1NU-IND" => l1nu_ind(ctx),
        "C-L1NU-UPPER" => l1nu_upper(ctx),
        "C-L1SUP" => l1sup(ctx),
        "C-NULLSETS" => nullsets(ctx),
        "C-ORBIT" => orbit(ctx),
        "C-ORLICZ-DUALITY" => orlicz_duality(ctx),
        "C-PARSEVAL" => parseval(ctx),
        "C-SANDWICH" => sandwich(ctx),
        "C-SEMIVAR-PATHS" => semivar_paths(ctx),
        "C-SEMIVAR-SANDWICH" => semivar_sandwich(ctx),
        "C-VAR-FT" => var_ft(ctx, BlockNormKind::SupOp),
        "C-VAR-FT-HS" => var_ft(ctx, BlockNormKind::SupHs),
        "C-VARIATION-DENSITY" => variation_density(ctx),
        "C-YOUNG" => young(ctx),
        other => Err(VerifyError::UnknownId(other.to_string())),
    }
}

fn var_ft(ctx: &mut Ctx, kind: BlockNormKind) -> VResult<Verdict> {
    let dual = ctx.dual()?;
    let hs = matches!(kind, BlockNormKind::SupHs);
    let factor = if hs {
        (dual.max_dim() as f64).sqrt()
    } else {
        1.0
    };
    let nu = fourier_measure(&ctx.group, &dual, kind);
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let a = BorelSet::random(ctx.n(), &mut ctx.rng);
        let m = ctx.group.haar(&a);
        let v = nu.variation(&a)?;
        worst.offer((v - factor * m).abs(), v, factor * m, || fmt_set(&a));
    }
    let note = hs.then(|| {
        format!(
            "Hilbert-Schmidt atoms have norm sqrt(d)/n; expected factor sqrt(max d) = {factor:.12} ({})",
            if ctx.group.is_abelian() { "abelian" } else { "nonabelian" }
        )
    });
    Ok(worst.finish(note))
}

fn fourier_rt(ctx: &mut Ctx) -> VResult<Verdict> {
    let dual = ctx.dual()?;
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let back = inverse_fourier(&dual, &fourier(&ctx.group, &dual, &f));
        let y = BlockVector::random(&dual, &mut ctx.rng);
        let fwd = fourier(&ctx.group, &dual, &inverse_fourier(&dual, &y));
        let r = back.max_abs_diff(&f).max(fwd.max_abs_diff(&y));
        worst.offer(r, r, 0.0, || format!("f={}", fmt_vec(f.values())));
    }
    Ok(worst.finish(None))
}

fn parseval(ctx: &mut Ctx) -> VResult<Verdict> {
    let dual = ctx.dual()?;
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let x = fourier(&ctx.group, &dual, &f);
        let energy: f64 = x
            .blocks()
            .iter()
            .zip(dual.dims())
            .map(|(b, d)| d as f64 * b.norm_squared())
            .sum();
        let l2 = f.l2_norm().powi(2);
        worst.offer((energy - l2).abs(), l2, energy, || {
            format!("f={}", fmt_vec(f.values()))
        });
    }
    Ok(worst.finish(None))
}

fn conv_thm(ctx: &mut Ctx) -> VResult<Verdict> {
    let dual = ctx.dual()?;
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        let f = ctx.function();
        let r = convolution_spectrum_check(&ctx.group, &dual, &mu, &f)?;
        worst.offer(r, r, 0.0, || {
            format!("mu={} f={}", fmt_vec(mu.atoms()), fmt_vec(f.values()))
        });
    }
    Ok(worst.finish(None))
}

fn dual_valid(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut dual = ctx.dual()?;
    if let Some(fault) = ctx.spec.fault {
        if fault.irrep >= dual.len() || fault.element >= ctx.n() {
            return Err(VerifyError::InvalidSpec(format!(
                "fault targets irrep {} / element {} outside the dual",
                fault.irrep, fault.element
            )));
        }
        dual.perturb(fault.irrep, fault.element, fault.eps);
    }
    let report = validate_dual(&ctx.group, &dual);
    let mut residual = report.max_residual();
    if !report.complete() {
        residual = residual.max(1.0);
    }
    Ok(Verdict::Done(Outcome {
        tol: None,
        lhs: report.dimension_sum as f64,
        rhs: report.order as f64,
        residual,
        witnesses: vec![format!(
            "homomorphism={:e} unitarity={:e} irreducibility={:e} orthogonality={:e}",
            report.homomorphism, report.unitarity, report.irreducibility, report.orthogonality
        )],
        note: ctx.spec.fault.map(|f| {
            format!(
                "fault injected: irrep {} element {} eps {}",
                f.irrep, f.element, f.eps
            )
        }),
    }))
}

fn adjoint(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        let f = ctx.function();
        let g = ctx.function();
        let lhs = mu.convolve(&ctx.group, &f)?.pair(&g);
        let rhs = f.pair(&mu.reflect(&ctx.group).convolve(&ctx.group, &g)?);
        worst.offer((lhs - rhs).norm(), lhs.norm(), rhs.norm(), || {
            format!("mu={}", fmt_vec(mu.atoms()))
        });
    }
    Ok(worst.finish(None))
}

/// Lower and upper semivariation bounds, with the constant
/// `Ψ⁻¹(1)` reported alongside `C₀`.
fn semivar_sandwich(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let c0 = ctx.c0()?;
    let psi_inv = ctx.constants.psi_inv_one;
    let mut worst = Worst::new();
    let mut psi_violations = 0;
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let a = ctx.nonempty_set();
        let m = ctx.group.haar(&a);
        let v = semivariation(&ctx.group, &mu, &a, &ctx.pair, NormPath::Oracle)?.value;
        let lower = mu.total_mass().norm() * m / c0;
        let upper = mu.total_variation() * indicator_luxemburg(&ctx.pair.phi, m)?;
        if let Some(p) = psi_inv {
            if v < mu.total_mass().norm() * m / p - TOL_SLACK {
                psi_violations += 1;
            }
        }
        let r = (lower - v).max(v - upper);
        worst.offer(
            r,
            v,
            if lower - v > v - upper { lower } else { upper },
            || format!("{} mu={}", fmt_set(&a), fmt_vec(mu.atoms())),
        );
    }
    let note = format!(
        "lower bound with Psi^-1(1) in place of C0 violated in {psi_violations}/{} trials",
        ctx.spec.trials
    );
    Ok(worst.finish(Some(note)))
}

fn semivar_paths(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let mut worst = Worst::new();
    for trial in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let a = ctx.nonempty_set();
        let o = semivariation(&ctx.group, &mu, &a, &ctx.pair, NormPath::Oracle)?.value;
        let s = semivariation(
            &ctx.group,
            &mu,
            &a,
            &ctx.pair,
            NormPath::ascent(ctx.spec.seed + trial as u64),
        )?;
        let (_, upper) = s.bracket.unwrap_or((s.value, s.value));
        let r = (o - s.value).abs().max(s.value - upper);
        worst.offer(r, o, s.value, || {
            format!("{} mu={}", fmt_set(&a), fmt_vec(mu.atoms()))
        });
    }
    Ok(worst.finish(None))
}

fn l1nu_eq(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let dirac = AtomicMeasure::dirac(ctx.n(), ctx.group.identity());
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let v = l1nu_norm(&ctx.group, &dirac, &f, &ctx.pair, NormPath::Oracle)?.value;
        let lux = luxemburg_norm(&f, &ctx.pair.phi).value;
        worst.offer((v - lux).abs(), v, lux, || {
            format!("f={}", fmt_vec(f.values()))
        });
    }
    Ok(worst.finish(None))
}

/// `max_ε ‖μ*(εχ_A)‖_Φ` by direct enumeration: convolution through
/// [`AtomicMeasure::convolve`] and one Luxemburg bisection per pattern.
fn brute_semivariation(
    group: &FiniteGroup,
    mu: &AtomicMeasure,
    a: &BorelSet,
    phi: &YoungFunction,
) -> VResult<f64> {
    let n = group.order();
    let idx = a.indices();
    let mut best: f64 = 0.0;
    for mask in 0..(1usize << idx.len()) {
        let mut h = GroupFunction::zeros(n);
        for (j, &t) in idx.iter().enumerate() {
            h.values_mut()[t] = Complex64::new(if mask >> j & 1 == 1 { -1.0 } else { 1.0 }, 0.0);
        }
        best = best.max(luxemburg_norm(&mu.convolve(group, &h)?, phi).value);
    }
    Ok(best)
}

fn l1nu_ind(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let a = BorelSet::random(ctx.n(), &mut ctx.rng);
        let v = l1nu_norm(
            &ctx.group,
            &mu,
            &a.indicator(ctx.n()),
            &ctx.pair,
            NormPath::Oracle,
        )?
        .value;
        let s = semivariation(&ctx.group, &mu, &a, &ctx.pair, NormPath::Oracle)?.value;
        let b = brute_semivariation(&ctx.group, &mu, &a, &ctx.pair.phi)?;
        let r = (v - b).abs().max((s - b).abs());
        worst.offer(r, v, b, || {
            format!("{} mu={}", fmt_set(&a), fmt_vec(mu.atoms()))
        });
    }
    Ok(worst.finish(None))
}

fn l1nu_upper(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let f = ctx.function();
        let v = l1nu_norm(&ctx.group, &mu, &f, &ctx.pair, NormPath::Oracle)?.value;
        let bound = luxemburg_norm(&f, &ctx.pair.phi).value * mu.total_variation();
        worst.offer(v - bound, v, bound, || {
            format!("f={} mu={}", fmt_vec(f.values()), fmt_vec(mu.atoms()))
        });
    }
    Ok(worst.finish(None))
}

fn incl_bracket(ctx: &mut Ctx) -> VResult<Verdict> {
    if ctx.n() > INCLUSION_MAX_ORDER {
        return Ok(Verdict::Skip(format!(
            "inclusion estimate limited to order <= {INCLUSION_MAX_ORDER}"
        )));
    }
    let mut worst = Worst::new();
    for trial in 0..ctx.spec.trials {
        let Some(mu) = ctx.massive_measure()? else {
            return Ok(Verdict::Skip("measure has zero total mass".into()));
        };
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let seed = ctx.spec.seed.wrapping_add(trial as u64);
        let (est, arg) = inclusion_norm_estimate(
            &ctx.group,
            &mu,
            &ctx.pair,
            INCLUSION_SAMPLES,
            INCLUSION_REFINE,
            seed,
        )?;
        let lo = mu.total_mass().norm();
        let hi = mu.total_variation();
        // the lower side carries the ascent slack TOL_PATHS, the upper side the check tolerance
        let r = ((lo - TOL_PATHS + TOL_NORM_BOUND) - est).max(est - hi);
        worst.offer(r, est, if est < lo { lo } else { hi }, || {
            format!("mu={} f={}", fmt_vec(mu.atoms()), fmt_vec(arg.values()))
        });
    }
    Ok(worst.finish(None))
}

fn incl_l1(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let c0 = ctx.c0()?;
    let psi_inv = ctx.constants.psi_inv_one;
    let mut worst = Worst::new();
    let mut psi_violations = 0;
    for _ in 0..ctx.spec.trials {
        let Some(mu) = ctx.massive_measure()? else {
            return Ok(Verdict::Skip("measure has zero total mass".into()));
        };
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let f = ctx.function();
        let nu = l1nu_norm(&ctx.group, &mu, &f, &ctx.pair, NormPath::Oracle)?.value;
        let mass = mu.total_mass().norm();
        let l1 = f.l1_norm();
        let rhs = c0 / mass * nu;
        if let Some(p) = psi_inv {
            if l1 > p / mass * nu + TOL_SLACK {
                psi_violations += 1;
            }
        }
        worst.offer(l1 - rhs, l1, rhs, || {
            format!("f={} mu={}", fmt_vec(f.values()), fmt_vec(mu.atoms()))
        });
    }
    let note = format!(
        "bound with Psi^-1(1) in place of C0 violated in {psi_violations}/{} trials",
        ctx.spec.trials
    );
    Ok(worst.finish(Some(note)))
}

fn sandwich(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let c0 = ctx.c0()?;
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        let f = ctx.function();
        let nu = l1nu_norm(&ctx.group, &mu, &f, &ctx.pair, NormPath::Oracle)?.value;
        let l1 = f.l1_norm();
        let lower = mu.total_mass().norm() / c0 * l1;
        let upper = luxemburg_norm(&mu.density(), &ctx.pair.phi).value * l1;
        let r = (lower - nu).max(nu - upper);
        worst.offer(
            r,
            nu,
            if lower - nu > nu - upper {
                lower
            } else {
                upper
            },
            || format!("f={} mu={}", fmt_vec(f.values()), fmt_vec(mu.atoms())),
        );
    }
    Ok(worst.finish(None))
}

fn eo(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        let nu = convolution_measure(&ctx.group, &mu, &ctx.pair)?;
        let f = ctx.function();
        let r = nu
            .integrate(&f)?
            .max_abs_diff(&mu.convolve(&ctx.group, &f)?);
        worst.offer(r, r, 0.0, || {
            format!("f={} mu={}", fmt_vec(f.values()), fmt_vec(mu.atoms()))
        });
    }
    Ok(worst.finish(None))
}

fn ft_ext(ctx: &mut Ctx) -> VResult<Verdict> {
    let dual = ctx.dual()?;
    let mut measures = vec![fourier_measure(&ctx.group, &dual, BlockNormKind::SupOp)];
    let note = match hy_measure(&ctx.group, &dual, &ctx.pair) {
        Ok(nu) => {
            measures.push(nu);
            None
        }
        Err(_) => Some(
            "pair is not a conjugate power pair with p <= 2; Hausdorff-Young measure omitted"
                .to_string(),
        ),
    };
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let fh = fourier(&ctx.group, &dual, &f);
        for nu in &measures {
            let r = nu.integrate(&f)?.max_abs_diff(&fh);
            worst.offer(r, r, 0.0, || {
                format!("{} f={}", nu.codomain().kind.name(), fmt_vec(f.values()))
            });
        }
    }
    Ok(worst.finish(note))
}

fn ft_l1(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let dual = ctx.dual()?;
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let v = block_l1nu_norm(&ctx.group, &dual, &f, &BlockNormKind::SupOp)?;
        let l1 = f.l1_norm();
        worst.offer((v - l1).abs(), v, l1, || {
            format!("f={}", fmt_vec(f.values()))
        });
    }
    Ok(worst.finish(None))
}

/// Random complex function on a random support: the support size is uniform
/// in `1..=n`, the values standard complex Gaussians.
pub fn random_sparse_function(n: usize, rng: &mut ChaCha8Rng) -> GroupFunction {
    let k = rng.gen_range(1..=n);
    let dense = GroupFunction::random_complex(n, rng);
    let mut f = GroupFunction::zeros(n);
    for t in rand::seq::index::sample(rng, n, k) {
        f.values_mut()[t] = dense.values()[t];
    }
    f
}

/// Empirical maximum of the Hausdorff–Young ratio over random sparse functions.
pub fn hy_max_ratio(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    pair: &OrliczPair,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> VResult<(f64, GroupFunction)> {
    let mut best = (0.0, GroupFunction::zeros(group.order()));
    for _ in 0..samples {
        let f = random_sparse_function(group.order(), rng);
        let r = hy_ratio(group, dual, &f, pair)?;
        if r > best.0 {
            best = (r, f);
        }
    }
    Ok(best)
}

fn hy_ratio_check(ctx: &mut Ctx) -> VResult<Verdict> {
    let p = match hy_exponent(&ctx.pair) {
        Ok(p) => p,
        Err(_) => {
            return Ok(Verdict::Skip(
                "needs a conjugate power pair x^p/p with 1 < p <= 2".into(),
            ))
        }
    };
    let dual = ctx.dual()?;
    if (p - 2.0).abs() < 1e-12 {
        let target = 2f64.sqrt();
        let mut worst = Worst::new();
        for _ in 0..ctx.spec.trials {
            let f = ctx.function();
            let r = hy_ratio(&ctx.group, &dual, &f, &ctx.pair)?;
            worst.offer((r - target).abs(), r, target, || {
                format!("f={}", fmt_vec(f.values()))
            });
        }
        return Ok(worst.finish(None));
    }
    // two disjoint streams of the same seed
    let mut a = ChaCha8Rng::seed_from_u64(ctx.spec.seed);
    a.set_stream(1);
    let mut b = ChaCha8Rng::seed_from_u64(ctx.spec.seed);
    b.set_stream(2);
    let (ra, fa) = hy_max_ratio(&ctx.group, &dual, &ctx.pair, ctx.spec.trials, &mut a)?;
    let (rb, _) = hy_max_ratio(&ctx.group, &dual, &ctx.pair, ctx.spec.trials, &mut b)?;
    let spread = (ra - rb).abs() / ra.max(rb);
    let finite = ra.is_finite() && rb.is_finite();
    Ok(Verdict::Done(Outcome {
        tol: Some(HY_SPREAD_TOL),
        lhs: ra,
        rhs: rb,
        residual: if finite { spread } else { f64::INFINITY },
        witnesses: vec![format!("f={}", fmt_vec(fa.values()))],
        note: Some(format!(
            "p = {p}; residual is the relative spread of the maxima over two independent streams"
        )),
    }))
}

fn hy_l1(ctx: &mut Ctx) -> VResult<Verdict> {
    if hy_exponent(&ctx.pair).is_err() {
        return Ok(Verdict::Skip(
            "needs a conjugate power pair x^p/p with 1 < p <= 2".into(),
        ));
    }
    if !ctx.group.is_abelian() {
        return Ok(Verdict::Skip(
            "block-dual oracle covers abelian groups".into(),
        ));
    }
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let dual = ctx.dual()?;
    let kind = BlockNormKind::LPhi(ctx.pair.swapped());
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let nu = block_l1nu_norm(&ctx.group, &dual, &f, &kind)?;
        let l1 = f.l1_norm();
        worst.offer(l1 - nu, l1, nu, || format!("f={}", fmt_vec(f.values())));
    }
    Ok(worst.finish(None))
}

fn density_rt(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut worst = Worst::new();
    let n = ctx.n();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let nu = convolution_measure(&ctx.group, &AtomicMeasure::from_density(&f), &ctx.pair)?;
        let back = recover_density(&nu, &ctx.group)?;
        worst.offer(back.max_abs_diff(&f), back.l1_norm(), f.l1_norm(), || {
            format!("f={}", fmt_vec(f.values()))
        });
        if n > 1 {
            // a measure with one corrupted atom must be rejected
            let mut atoms = nu.atoms().to_vec();
            let t = ctx.rng.gen_range(0..n);
            let s = ctx.rng.gen_range(0..n);
            atoms[t].values_mut()[s] += Complex64::new(1e-3, 0.0);
            let bad = VectorMeasure::from_atoms(nu.codomain().clone(), atoms);
            let rejected = matches!(
                recover_density(&bad, &ctx.group),
                Err(Error::NotConvolution(_))
            );
            if !rejected {
                worst.offer(1.0, 0.0, 0.0, || format!("corrupted atom {t} accepted"));
            }
        }
    }
    Ok(worst.finish(None))
}

fn variation_density(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let nu = convolution_measure(&ctx.group, &AtomicMeasure::from_density(&f), &ctx.pair)?;
        let a = BorelSet::random(ctx.n(), &mut ctx.rng);
        let v = nu.variation(&a)?;
        let expect = luxemburg_norm(&f, &ctx.pair.phi).value * ctx.group.haar(&a);
        worst.offer((v - expect).abs(), v, expect, || {
            format!("{} f={}", fmt_set(&a), fmt_vec(f.values()))
        });
    }
    Ok(worst.finish(None))
}

fn l1sup(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        let sup = l1_ball_sup(&ctx.group, &mu, &ctx.pair.phi)?;
        // max_t ‖μ*(nχ_t)‖_Φ: every term is a right translate of the density
        let formula = luxemburg_norm(&mu.density(), &ctx.pair.phi).value;
        let mut r = (sup - formula).abs();
        for _ in 0..8 {
            let f = ctx.function();
            let ratio =
                luxemburg_norm(&mu.convolve(&ctx.group, &f)?, &ctx.pair.phi).value / f.l1_norm();
            r = r.max(ratio - sup);
        }
        worst.offer(r, sup, formula, || format!("mu={}", fmt_vec(mu.atoms())));
    }
    let note = sup_is_finite_note(worst.lhs);
    Ok(worst.finish(note))
}

fn sup_is_finite_note(v: f64) -> Option<String> {
    (!v.is_finite()).then(|| "supremum is not finite".to_string())
}

fn orbit(ctx: &mut Ctx) -> VResult<Verdict> {
    let n = ctx.n();
    let mut worst = Worst::new();
    let mut plain: f64 = 0.0;
    for _ in 0..ctx.spec.trials {
        let g = ctx.function();
        let f = ctx.function();
        let conv = orbit_identity_residual(&ctx.group, &g, &f, OrbitConvention::InverseRight)?;
        plain = plain.max(orbit_identity_residual(
            &ctx.group,
            &g,
            &f,
            OrbitConvention::Right,
        )?);
        let map = orbit_map(&ctx.group, &g, OrbitConvention::InverseRight);
        let nu = convolution_measure(&ctx.group, &AtomicMeasure::from_density(&g), &ctx.pair)?;
        let base = luxemburg_norm(&g, &ctx.pair.phi).value;
        let mut atoms: f64 = 0.0;
        let mut norms: f64 = 0.0;
        for t in 0..n {
            atoms = atoms.max(
                nu.atom(t)
                    .max_abs_diff(&map.at(t).scale(Complex64::new(1.0 / n as f64, 0.0))),
            );
            norms = norms.max((luxemburg_norm(map.at(t), &ctx.pair.phi).value - base).abs());
        }
        let r = conv.max(atoms).max(norms);
        worst.offer(r, conv, norms, || {
            format!("g={} f={}", fmt_vec(g.values()), fmt_vec(f.values()))
        });
    }
    let note = format!("identity residual under F(u)(s) = g(su) instead: {plain:.3e}");
    Ok(worst.finish(Some(note)))
}

fn nullsets(ctx: &mut Ctx) -> VResult<Verdict> {
    let dual = ctx.dual()?;
    let ft = fourier_measure(&ctx.group, &dual, BlockNormKind::SupOp);
    let hy = hy_measure(&ctx.group, &dual, &ctx.pair).ok();
    let mut violations = 0usize;
    let mut witnesses = Vec::new();
    let empty = BorelSet::empty();
    let mut check = |label: &str, value: f64, should_vanish: bool, a: &BorelSet| {
        let ok = if should_vanish {
            value == 0.0
        } else {
            value > 0.0
        };
        if !ok {
            violations += 1;
            if witnesses.len() < 4 {
                witnesses.push(format!("{label} {} norm={value:e}", fmt_set(a)));
            }
        }
    };
    for _ in 0..ctx.spec.trials {
        let a = ctx.nonempty_set();
        let Some(mu) = ctx.massive_measure()? else {
            return Ok(Verdict::Skip("measure has zero total mass".into()));
        };
        let conv = convolution_measure(&ctx.group, &mu, &ctx.pair)?;
        check(
            "nu_ft",
            block_norm(&ft.measure(&a), &ft.codomain().kind)?,
            false,
            &a,
        );
        check(
            "nu_ft",
            block_norm(&ft.measure(&empty), &ft.codomain().kind)?,
            true,
            &empty,
        );
        check(
            "nu_mu",
            luxemburg_norm(&conv.measure(&a), &ctx.pair.phi).value,
            false,
            &a,
        );
        check(
            "nu_mu",
            luxemburg_norm(&conv.measure(&empty), &ctx.pair.phi).value,
            true,
            &empty,
        );
        if let Some(hy) = &hy {
            check(
                "nu_hy",
                block_norm(&hy.measure(&a), &hy.codomain().kind)?,
                false,
                &a,
            );
            check(
                "nu_hy",
                block_norm(&hy.measure(&empty), &hy.codomain().kind)?,
                true,
                &empty,
            );
        }
    }
    Ok(Verdict::Done(Outcome {
        tol: None,
        lhs: violations as f64,
        rhs: 0.0,
        residual: violations as f64,
        witnesses,
        note: hy
            .is_none()
            .then(|| "Hausdorff-Young measure omitted for this pair".to_string()),
    }))
}

fn orlicz_duality(ctx: &mut Ctx) -> VResult<Verdict> {
    let mut worst = Worst::new();
    for _ in 0..ctx.spec.trials {
        let f = ctx.function();
        let g = ctx.function();
        let lux = luxemburg_norm(&f, &ctx.pair.phi).value;
        let orl = orlicz_norm(&f, &ctx.pair)?.value;
        let (lhs, rhs) = holder_pairing(&f, &g, &ctx.pair)?;
        let r = (lux - orl).max(orl - 2.0 * lux).max(lhs - rhs);
        worst.offer(r, lux, orl, || format!("f={}", fmt_vec(f.values())));
    }
    let n = ctx.n();
    let c0 = ctx.c0()?;
    let note = ctx.constants.psi_inv_one.map(|p| {
        format!(
            "||chi_G / Psi^-1(1)||^o_Psi = {:.12} (C0 = {c0:.12}, order {n})",
            c0 / p
        )
    });
    Ok(worst.finish(note))
}

fn integration_norm(ctx: &mut Ctx) -> VResult<Verdict> {
    if let Some(reason) = ctx.oracle_fits() {
        return Ok(Verdict::Skip(reason));
    }
    let mut sup: f64 = 0.0;
    let mut witness = String::new();
    for _ in 0..ctx.spec.trials {
        let mu = ctx.measure()?;
        if !mu.is_real() {
            return Ok(Verdict::Skip(
                "sign-pattern oracle needs a real measure".into(),
            ));
        }
        if mu.total_variation() == 0.0 {
            return Ok(Verdict::Skip("zero measure".into()));
        }
        // the sign-pattern oracle is the real-scalar norm, so f is real
        let f = GroupFunction::random_real(ctx.n(), &mut ctx.rng);
        let best = weighted_semivariation(
            &ctx.group,
            &mu,
            &f.moduli(),
            &ctx.pair.phi,
            NormPath::Oracle,
        )?;
        for h in [f, best.argmax] {
            let nu = l1nu_norm(&ctx.group, &mu, &h, &ctx.pair, NormPath::Oracle)?.value;
            let ratio = luxemburg_norm(&mu.convolve(&ctx.group, &h)?, &ctx.pair.phi).value / nu;
            if ratio > sup {
                sup = ratio;
                witness = format!("f={} mu={}", fmt_vec(h.values()), fmt_vec(mu.atoms()));
            }
        }
    }
    // the lower side is allowed 1e-4, the upper side the check tolerance
    let lower = 1.0 - 1e-4 + TOL_SLACK;
    let residual = (lower - sup).max(sup - 1.0).max(0.0);
    Ok(Verdict::Done(Outcome {
        tol: None,
        lhs: sup,
        rhs: 1.0,
        residual,
        witnesses: vec![witness],
        note: None,
    }))
}

/// `Ψ(y) = y ln y − y + 1` for `y >= 1`, else `0`: the conjugate of `e^x − 1`.
fn expm1_conjugate(y: f64) -> f64 {
    if y <= 1.0 {
        0.0
    } else {
        y * y.ln() - y + 1.0
    }
}

fn young(ctx: &mut Ctx) -> VResult<Verdict> {
    let phi = ctx.pair.phi.clone();
    let numeric = phi.conjugate();
    let grid = oh_core::numeric::log_grid(1e-2, 1e2, 200);
    let closed: Box<dyn Fn(f64) -> f64> = if let Some(cf) = phi.closed_form_conjugate() {
        Box::new(move |y| cf.value(y))
    } else if phi.label() == "expm1" {
        Box::new(expm1_conjugate)
    } else {
        return Ok(Verdict::Skip(format!(
            "no closed-form conjugate for {}",
            phi.label()
        )));
    };
    let mut worst = Worst::new();
    for &y in &grid {
        let a = numeric.value(y);
        let b = closed(y);
        worst.offer((a - b).abs() / b.abs().max(1.0), a, b, || {
            format!("y={y:e}")
        });
    }
    let slack = young_inequality_slack(
        &ctx.pair.phi,
        &ctx.pair.psi,
        &oh_core::numeric::log_grid(1e-3, 1e3, 60),
    );
    worst.offer(-slack - 1e-10, slack, 0.0, || {
        "Young inequality".to_string()
    });
    Ok(worst.finish(None))
}

fn delta2(ctx: &mut Ctx) -> VResult<Verdict> {
    let phi = &ctx.pair.phi;
    let expected = if phi.power_params().is_some() {
        true
    } else if phi.label() == "expm1" {
        false
    } else {
        return Ok(Verdict::Skip(format!(
            "no reference verdict for {}",
            phi.label()
        )));
    };
    let report = phi.check_delta2(1.0, 50.0, 200)?;
    let mismatch = if report.holds == expected { 0.0 } else { 1.0 };
    Ok(Verdict::Done(Outcome {
        tol: None,
        lhs: report.worst_ratio,
        rhs: if report.holds { report.k } else { DELTA2_K_CAP },
        residual: mismatch,
        witnesses: vec![format!(
            "holds={} expected={expected} on [1, 50]",
            report.holds
        )],
        note: None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_are_unique_and_sorted() {
        let ids: Vec<&str> = CATALOG.iter().map(|c| c.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn every_catalog_id_dispatches() {
        for c in CATALOG {
            let spec = CheckSpec::new(c.id, "cyclic:3", "npower:2").trials(1);
            let r = run_check(&spec).unwrap();
            assert_ne!(r.status, Status::Fail, "{}: {:?}", c.id, r);
        }
    }

    #[test]
    fn unknown_id_is_an_error() {
        let spec = CheckSpec::new("C-NOPE", "cyclic:3", "power:2");
        assert!(matches!(run_check(&spec), Err(VerifyError::UnknownId(_))));
    }

    #[test]
    fn zero_trials_rejected() {
        let spec = CheckSpec::new("C-EO", "cyclic:3", "power:2").trials(0);
        assert!(matches!(run_check(&spec), Err(VerifyError::InvalidSpec(_))));
    }

    #[test]
    fn oracle_cap_skips() {
        let r = run_check(&CheckSpec::new("C-SEMIVAR-SANDWICH", "dihedral:7", "power:2").trials(1))
            .unwrap();
        assert_eq!(r.status, Status::Skip);
        assert!(r.note.unwrap().contains("12"));
    }

    #[test]
    fn runs_are_reproducible() {
        let spec = CheckSpec::new("C-SEMIVAR-PATHS", "dihedral:3", "npower:3")
            .trials(3)
            .seed(9);
        let mut a = run_check(&spec).unwrap();
        let mut b = run_check(&spec).unwrap();
        a.runtime_ms = 0;
        b.runtime_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn expm1_conjugate_reference() {
        assert_eq!(expm1_conjugate(0.5), 0.0);
        assert!((expm1_conjugate(std::f64::consts::E) - 1.0).abs() < 1e-15);
    }
}
