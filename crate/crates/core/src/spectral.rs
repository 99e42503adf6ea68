//! Matrix-valued Fourier transform on a finite group, Peter–Weyl inversion and
//! norms on block sequence spaces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{CMatrix, FiniteGroup, UnitaryDual};
use crate::numeric::bisect_threshold;
use crate::orlicz::{luxemburg_norm, GroupFunction};
use crate::vecmeas::AtomicMeasure;
use crate::young::OrliczPair;

/// One `d_π × d_π` complex matrix per irrep class.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    blocks: Vec<CMatrix>,
}

#[derive(Debug, Clone)]
pub enum BlockNormKind {
    /// `max_π ‖x_π‖_HS`
    SupHs,
    /// `max_π ‖x_π‖_op`
    SupOp,
    /// `Σ_π ‖x_π‖_HS`
    L1Hs,
    /// `inf{k : Σ d_π² Φ(‖x_π‖_HS / (k√d_π)) <= Φ(1)}` with `Φ = pair.phi`.
    LPhi(OrliczPair),
}

impl BlockNormKind {
    pub fn name(&self) -> String {
        match self {
            BlockNormKind::SupHs => "sup_hs".into(),
            BlockNormKind::SupOp => "sup_op".into(),
            BlockNormKind::L1Hs => "l1_hs".into(),
            BlockNormKind::LPhi(p) => format!("lphi({})", p.phi),
        }
    }
}

impl BlockVector {
    pub fn new(dual: &UnitaryDual, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != dual.len() {
            return Err(Error::Shape {
                expected: dual.len(),
                found: blocks.len(),
            });
        }
        for (b, d) in blocks.iter().zip(dual.dims()) {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Shape {
                    expected: d,
                    found: b.nrows().max(b.ncols()),
                });
            }
        }
        Ok(Self { blocks })
    }

    pub fn zeros(dual: &UnitaryDual) -> Self {
        Self {
            blocks: dual
                .dims()
                .into_iter()
                .map(|d| CMatrix::zeros(d, d))
                .collect(),
        }
    }

    /// Identity in the trivial block, zero elsewhere.
    pub fn trivial_unit(dual: &UnitaryDual) -> Self {
        let mut x = Self::zeros(dual);
        x.blocks[0][(0, 0)] = Complex64::new(1.0, 0.0);
        x
    }

    /// Identity matrix in every block.
    pub fn identities(dual: &UnitaryDual) -> Self {
        Self {
            blocks: dual
                .dims()
                .into_iter()
                .map(|d| CMatrix::identity(d, d))
                .collect(),
        }
    }

    /// Independent standard-normal entries.
    pub fn random<R: rand::Rng>(dual: &UnitaryDual, rng: &mut R) -> Self {
        Self {
            blocks: dual
                .dims()
                .into_iter()
                .map(|d| {
                    CMatrix::from_fn(d, d, |_, _| {
                        Complex64::new(crate::orlicz::normal(rng), crate::orlicz::normal(rng))
                    })
                })
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn hs_norms(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.norm()).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self += c · other`
    pub fn axpy(&mut self, c: Complex64, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a += b * c;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).camax())
            .fold(0.0, f64::max)
    }
}

/// `f̂(π) = (1/n) Σ_t f(t) π(t)*`
pub fn fourier(group: &FiniteGroup, dual: &UnitaryDual, f: &GroupFunction) -> BlockVector {
    let n = group.order();
    let blocks = dual
        .irreps
        .iter()
        .map(|irrep| {
            let mut acc = CMatrix::zeros(irrep.dim, irrep.dim);
            for (t, m) in irrep.matrices.iter().enumerate() {
                let v = f.values()[t];
                if v != Complex64::new(0.0, 0.0) {
                    acc += m.adjoint() * v;
                }
            }
            acc / Complex64::new(n as f64, 0.0)
        })
        .collect();
    BlockVector { blocks }
}

/// `f(t) = Σ_π d_π tr(π(t) x_π)`
pub fn inverse_fourier(dual: &UnitaryDual, x: &BlockVector) -> GroupFunction {
    let n = dual.irreps[0].matrices.len();
    let values = (0..n)
        .map(|t| {
            dual.irreps
                .iter()
                .zip(&x.blocks)
                .map(|(irrep, b)| (&irrep.matrices[t] * b).trace() * irrep.dim as f64)
                .sum()
        })
        .collect();
    GroupFunction::new(values)
}

/// `Σ_π tr(x_π y_π)`
pub fn pairing(x: &BlockVector, y: &BlockVector) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::Shape {
            expected: x.len(),
            found: y.len(),
        });
    }
    let mut s = Complex64::new(0.0, 0.0);
    for (a, b) in x.blocks.iter().zip(&y.blocks) {
        if a.shape() != b.shape() {
            return Err(Error::Shape {
                expected: a.nrows(),
                found: b.nrows(),
            });
        }
        s += (a * b).trace();
    }
    Ok(s)
}

fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone().singular_values().max()
}

pub fn block_norm(x: &BlockVector, kind: &BlockNormKind) -> Result<f64> {
    Ok(match kind {
        BlockNormKind::SupHs => x.hs_norms().into_iter().fold(0.0, f64::max),
        BlockNormKind::SupOp => x.blocks.iter().map(operator_norm).fold(0.0, f64::max),
        BlockNormKind::L1Hs => x.hs_norms().into_iter().sum(),
        BlockNormKind::LPhi(pair) => lphi_norm(x, pair)?,
    })
}

fn lphi_norm(x: &BlockVector, pair: &OrliczPair) -> Result<f64> {
    if !pair.normalized {
        return Err(Error::Precondition(format!(
            "block norm needs Φ(1) + Ψ(1) = 1, pair {} is not normalized",
            pair.label()
        )));
    }
    let phi = &pair.phi;
    let level = phi.value(1.0);
    let terms: Vec<(f64, f64)> = x
        .blocks
        .iter()
        .map(|b| (b.nrows() as f64, b.norm()))
        .filter(|&(_, h)| h > 0.0)
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let modular = |k: f64| -> f64 {
        terms
            .iter()
            .map(|&(d, h)| d * d * phi.value(h / (k * d.sqrt())))
            .sum()
    };
    let top = terms.iter().map(|t| t.1).fold(0.0, f64::max);
    let t = bisect_threshold(
        |k| modular(k) <= level,
        1e-12,
        top.max(1e-12) * 2.0,
        1e-14,
        600,
    );
    Ok(t.upper)
}

/// `max_π ‖(μ*f)^(π) − f̂(π) μ̂(π)‖_HS` with `μ̂(π) = Σ_s μ({s}) π(s)*`.
pub fn convolution_spectrum_check(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    mu: &AtomicMeasure,
    f: &GroupFunction,
) -> Result<f64> {
    let lhs = fourier(group, dual, &mu.convolve(group, f)?);
    let fh = fourier(group, dual, f);
    let muh = measure_transform(dual, mu);
    Ok(lhs
        .blocks
        .iter()
        .zip(fh.blocks.iter().zip(&muh.blocks))
        .map(|(l, (a, b))| (l - a * b).norm())
        .fold(0.0, f64::max))
}

/// `μ̂(π) = Σ_s μ({s}) π(s)*`
pub fn measure_transform(dual: &UnitaryDual, mu: &AtomicMeasure) -> BlockVector {
    let blocks = dual
        .irreps
        .iter()
        .map(|irrep| {
            let mut acc = CMatrix::zeros(irrep.dim, irrep.dim);
            for (s, m) in irrep.matrices.iter().enumerate() {
                acc += m.adjoint() * mu.atoms()[s];
            }
            acc
        })
        .collect();
    BlockVector { blocks }
}

/// Exponent `p` of a normalized conjugate power pair `x^p/p`, `y^q/q` with
/// `1 < p <= 2`.
pub fn hy_exponent(pair: &OrliczPair) -> Result<f64> {
    let bad = || {
        Error::Precondition(format!(
            "{} is not a conjugate power pair x^p/p with 1 < p <= 2",
            pair.label()
        ))
    };
    let (c, p) = pair.phi.power_params().ok_or_else(bad)?;
    let (cq, q) = pair.psi.power_params().ok_or_else(bad)?;
    let conj = (1.0 / p + 1.0 / q - 1.0).abs() < 1e-12;
    if !(p > 1.0 && p <= 2.0 + 1e-12)
        || !conj
        || (c * p - 1.0).abs() > 1e-12
        || (cq * q - 1.0).abs() > 1e-12
    {
        return Err(bad());
    }
    Ok(p)
}

/// `‖f̂‖_{ℓ^Ψ} / ‖f‖_Φ` for a conjugate power pair.
pub fn hy_ratio(
    group: &FiniteGroup,
    dual: &UnitaryDual,
    f: &GroupFunction,
    pair: &OrliczPair,
) -> Result<f64> {
    hy_exponent(pair)?;
    if f.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    let num = block_norm(
        &fourier(group, dual, f),
        &BlockNormKind::LPhi(pair.swapped()),
    )?;
    Ok(num / luxemburg_norm(f, &pair.phi).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_dual, catalog};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn setup(spec: &str) -> (FiniteGroup, UnitaryDual) {
        let g = FiniteGroup::parse(spec).unwrap();
        let d = build_dual(&g).unwrap();
        (g, d)
    }

    fn scalars(x: &BlockVector) -> Vec<Complex64> {
        x.blocks().iter().map(|b| b[(0, 0)]).collect()
    }

    #[test]
    fn fourier_on_z2() {
        let (g, d) = setup("cyclic:2");
        let x = fourier(&g, &d, &GroupFunction::from_real(&[1.0, 1.0]));
        assert!((scalars(&x)[0] - c(1.0)).norm() < 1e-15 && scalars(&x)[1].norm() < 1e-15);
        let x = fourier(&g, &d, &GroupFunction::from_real(&[2.0, 0.0]));
        assert_eq!(scalars(&x), vec![c(1.0), c(1.0)]);
    }

    #[test]
    fn point_mass_transforms_to_identities() {
        for spec in catalog(24) {
            let (g, d) = setup(spec);
            let f = GroupFunction::point_mass(g.order(), g.identity());
            assert!(fourier(&g, &d, &f).max_abs_diff(&BlockVector::identities(&d)) < 1e-13);
        }
    }

    #[test]
    fn single_character_reconstruction() {
        let (_, d) = setup("cyclic:3");
        assert!(inverse_fourier(&d, &BlockVector::zeros(&d)).is_zero());
        let mut blocks: Vec<CMatrix> = vec![CMatrix::zeros(1, 1); 3];
        blocks[1][(0, 0)] = c(1.0);
        let x = BlockVector::new(&d, blocks).unwrap();
        let f = inverse_fourier(&d, &x);
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        for t in 0..3 {
            assert!((f.values()[t] - w.powu(t as u32)).norm() < 1e-14);
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for spec in catalog(24) {
            let (g, d) = setup(spec);
            for _ in 0..20 {
                let f = GroupFunction::random_complex(g.order(), &mut rng);
                let x = fourier(&g, &d, &f);
                assert!(inverse_fourier(&d, &x).max_abs_diff(&f) <= 1e-10);
                let energy: f64 = x
                    .blocks()
                    .iter()
                    .zip(d.dims())
                    .map(|(b, dim)| dim as f64 * b.norm_squared())
                    .sum();
                assert!((energy - f.l2_norm().powi(2)).abs() <= 1e-10);
                let y = BlockVector::random(&d, &mut rng);
                assert!(fourier(&g, &d, &inverse_fourier(&d, &y)).max_abs_diff(&y) <= 1e-10);
            }
        }
    }

    #[test]
    fn translation_multiplies_by_representation() {
        let (g, d) = setup("dihedral:4");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = GroupFunction::random_complex(8, &mut rng);
        let fh = fourier(&g, &d, &f);
        for t in 0..8 {
            let th = fourier(&g, &d, &f.right_translate(&g, t));
            for (i, irrep) in d.irreps.iter().enumerate() {
                assert!((&th.blocks()[i] - &irrep.matrices[t] * &fh.blocks()[i]).camax() < 1e-13);
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let (g, d) = setup("dihedral:3");
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = GroupFunction::random_complex(6, &mut rng);
        let p = pairing(&fourier(&g, &d, &f), &BlockVector::trivial_unit(&d)).unwrap();
        assert!((p - f.mean()).norm() < 1e-14);
        assert_eq!(
            pairing(&BlockVector::zeros(&d), &BlockVector::identities(&d)).unwrap(),
            c(0.0)
        );
        let (_, d2) = setup("cyclic:2");
        let i = BlockVector::identities(&d2);
        assert_eq!(pairing(&i, &i).unwrap(), c(2.0));
        assert!(pairing(&i, &BlockVector::zeros(&d)).is_err());
    }

    #[test]
    fn block_norm_examples() {
        let half = OrliczPair::parse("npower:2").unwrap();
        let (_, d2) = setup("cyclic:2");
        let ones = BlockVector::identities(&d2);
        let v = block_norm(&ones, &BlockNormKind::LPhi(half.clone())).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-9);

        let (_, d) = setup("symmetric:3");
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let x = BlockVector::random(&d, &mut rng);
            let closed: f64 = x
                .blocks()
                .iter()
                .zip(d.dims())
                .map(|(b, dim)| dim as f64 * b.norm_squared())
                .sum::<f64>()
                .sqrt();
            let v = block_norm(&x, &BlockNormKind::LPhi(half.clone())).unwrap();
            assert!((v - closed).abs() <= 1e-9 * closed);
        }

        let x = BlockVector::trivial_unit(&d).scale(Complex64::new(0.0, -3.0));
        for kind in [
            BlockNormKind::SupHs,
            BlockNormKind::SupOp,
            BlockNormKind::L1Hs,
            BlockNormKind::LPhi(half.clone()),
            BlockNormKind::LPhi(OrliczPair::parse("npower:3").unwrap()),
        ] {
            assert!(
                (block_norm(&x, &kind).unwrap() - 3.0).abs() < 1e-9,
                "{}",
                kind.name()
            );
        }
        let unnormalized = OrliczPair::parse("power:2").unwrap();
        assert!(matches!(
            block_norm(&x, &BlockNormKind::LPhi(unnormalized)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lphi_is_a_norm() {
        let (_, d) = setup("quaternion8");
        let kind = BlockNormKind::LPhi(OrliczPair::parse("npower:1.5").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let x = BlockVector::random(&d, &mut rng);
            let y = BlockVector::random(&d, &mut rng);
            let nx = block_norm(&x, &kind).unwrap();
            let ny = block_norm(&y, &kind).unwrap();
            assert!(block_norm(&x.add(&y), &kind).unwrap() <= nx + ny + 1e-9);
            let s = block_norm(&x.scale(Complex64::new(-2.5, 1.0)), &kind).unwrap();
            assert!((s - nx * 7.25f64.sqrt()).abs() <= 1e-9 * s);
        }
    }

    #[test]
    fn convolution_theorem() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for spec in ["dihedral:4", "symmetric:3", "quaternion8", "cyclic:5"] {
            let (g, d) = setup(spec);
            let n = g.order();
            let f = GroupFunction::random_complex(n, &mut rng);
            let dirac = AtomicMeasure::dirac(n, g.identity());
            assert!(convolution_spectrum_check(&g, &d, &dirac, &f).unwrap() < 1e-14);
            let mu = AtomicMeasure::random_real(n, &mut rng);
            assert!(convolution_spectrum_check(&g, &d, &mu, &f).unwrap() <= 1e-10);
            let ones = GroupFunction::constant(n, c(1.0));
            let x = fourier(&g, &d, &mu.convolve(&g, &ones).unwrap());
            assert!((x.blocks()[0][(0, 0)] - mu.total_mass()).norm() < 1e-12);
            assert!(x.blocks()[1..].iter().all(|b| b.camax() < 1e-12));
        }
    }

    #[test]
    fn hy_ratio_quadratic_is_root_two() {
        let pair = OrliczPair::parse("npower:2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in catalog(24) {
            let (g, d) = setup(spec);
            let f = GroupFunction::random_complex(g.order(), &mut rng);
            let r = hy_ratio(&g, &d, &f, &pair).unwrap();
            assert!((r - 2f64.sqrt()).abs() <= 1e-9, "{spec}: {r}");
        }
        let (g, d) = setup("cyclic:4");
        assert_eq!(
            hy_ratio(&g, &d, &GroupFunction::zeros(4), &pair),
            Err(Error::UndefinedRatio)
        );
        let bad = OrliczPair::parse("npower:3").unwrap();
        assert!(hy_ratio(&g, &d, &GroupFunction::zeros(4), &bad).is_err());
    }

    #[test]
    fn hy_ratio_of_constant_is_group_independent() {
        let pair = OrliczPair::parse("npower:1.5").unwrap();
        let mut seen = Vec::new();
        for spec in ["cyclic:3", "dihedral:4", "quaternion8", "symmetric:3"] {
            let (g, d) = setup(spec);
            let f = GroupFunction::constant(g.order(), c(1.0));
            seen.push(hy_ratio(&g, &d, &f, &pair).unwrap());
        }
        assert!(seen.iter().all(|r| (r - seen[0]).abs() < 1e-10), "{seen:?}");
    }
}
