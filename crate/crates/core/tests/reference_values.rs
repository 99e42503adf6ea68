//! Library values against closed forms and brute-force references computed
//! here without the library's solvers.

use num_complex::Complex64;
use oh_core::groups::{build_dual, catalog};
use oh_core::orlicz::{dual_unit_constant, luxemburg_norm, orlicz_norm};
use oh_core::spectral::{fourier, BlockNormKind};
use oh_core::vecmeas::{fourier_measure, l1nu_norm, semivariation};
use oh_core::{AtomicMeasure, BorelSet, FiniteGroup, GroupFunction, NormPath, OrliczPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mean_pow(v: &[Complex64], p: f64) -> f64 {
    v.iter().map(|z| z.norm().powf(p)).sum::<f64>() / v.len() as f64
}

/// `‖h‖` for `Φ(x) = x^p / c`: `(mean|h|^p / c)^{1/p}`.
fn power_luxemburg(v: &[Complex64], p: f64, c: f64) -> f64 {
    (mean_pow(v, p) / c).powf(1.0 / p)
}

/// `(μ*h)(r) = Σ_s μ({s}) h(s⁻¹ r)`, straight from the definition.
fn convolve(g: &FiniteGroup, mu: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let n = g.order();
    (0..n)
        .map(|r| (0..n).map(|s| mu[s] * h[g.mul(g.inv(s), r)]).sum())
        .collect()
}

/// `max_ε ‖μ*(ε w)‖` over all `2^|supp w|` real sign patterns, for `Φ = x^p/c`.
fn brute_l1nu(g: &FiniteGroup, mu: &[Complex64], w: &[f64], p: f64, c: f64) -> f64 {
    let n = g.order();
    let support: Vec<usize> = (0..n).filter(|&t| w[t] > 0.0).collect();
    let mut best: f64 = 0.0;
    for mask in 0..(1usize << support.len()) {
        let mut h = vec![Complex64::new(0.0, 0.0); n];
        for (j, &t) in support.iter().enumerate() {
            let s = if mask >> j & 1 == 1 { -1.0 } else { 1.0 };
            h[t] = Complex64::new(s * w[t], 0.0);
        }
        best = best.max(power_luxemburg(&convolve(g, mu, &h), p, c));
    }
    best
}

#[test]
fn luxemburg_matches_power_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (spec, p, c) in [
        ("power:2", 2.0, 1.0),
        ("npower:3", 3.0, 3.0),
        ("npower:1.5", 1.5, 1.5),
    ] {
        let pair = OrliczPair::parse(spec).unwrap();
        for n in [1, 4, 9] {
            let f = GroupFunction::random_complex(n, &mut rng);
            let got = luxemburg_norm(&f, &pair.phi).value;
            let want = power_luxemburg(f.values(), p, c);
            assert!(
                (got - want).abs() <= 1e-9 * want,
                "{spec} n={n}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn quadratic_orlicz_norm_is_scaled_l2() {
    // Ψ(y) = y²/4 for Φ = x², so the dual ball is ‖g‖₂ <= 2
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x2 = OrliczPair::parse("power:2").unwrap();
    let half = OrliczPair::parse("npower:2").unwrap();
    for _ in 0..10 {
        let f = GroupFunction::random_complex(6, &mut rng);
        let l2 = mean_pow(f.values(), 2.0).sqrt();
        assert!((orlicz_norm(&f, &x2).unwrap().value - 2.0 * l2).abs() < 1e-6 * l2);
        assert!((orlicz_norm(&f, &half).unwrap().value - 2f64.sqrt() * l2).abs() < 1e-6 * l2);
    }
}

#[test]
fn cyclic_transform_matches_naive_dft() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [3, 5, 8, 12] {
        let g = FiniteGroup::parse(&format!("cyclic:{n}")).unwrap();
        let dual = build_dual(&g).unwrap();
        let f = GroupFunction::random_complex(n, &mut rng);
        let mut got: Vec<f64> = fourier(&g, &dual, &f)
            .blocks()
            .iter()
            .map(|b| b[(0, 0)].norm())
            .collect();
        let mut want: Vec<f64> = (0..n)
            .map(|k| {
                let s: Complex64 = (0..n)
                    .map(|t| {
                        let ang = -2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
                        f.values()[t] * Complex64::from_polar(1.0, ang)
                    })
                    .sum();
                s.norm() / n as f64
            })
            .collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "cyclic:{n}");
        }
    }
}

#[test]
fn optimal_domain_norm_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for spec in ["cyclic:5", "dihedral:3", "quaternion8"] {
        let g = FiniteGroup::parse(spec).unwrap();
        let n = g.order();
        for (young, p, c) in [("power:2", 2.0, 1.0), ("npower:3", 3.0, 3.0)] {
            let pair = OrliczPair::parse(young).unwrap();
            for _ in 0..4 {
                let mu = AtomicMeasure::random_real(n, &mut rng);
                let f = GroupFunction::random_complex(n, &mut rng);
                let got = l1nu_norm(&g, &mu, &f, &pair, NormPath::Oracle)
                    .unwrap()
                    .value;
                let want = brute_l1nu(&g, mu.atoms(), &f.moduli(), p, c);
                assert!(
                    (got - want).abs() < 1e-9 * want.max(1.0),
                    "{spec} {young}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn ascent_reaches_the_oracle_on_small_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pair = OrliczPair::parse("npower:3").unwrap();
    for spec in ["cyclic:6", "dihedral:4", "symmetric:3"] {
        let g = FiniteGroup::parse(spec).unwrap();
        for k in 0..5 {
            let mu = AtomicMeasure::random_real(g.order(), &mut rng);
            let a = BorelSet::new(g.order(), (0..g.order()).filter(|_| rng.gen_bool(0.6))).unwrap();
            let o = semivariation(&g, &mu, &a, &pair, NormPath::Oracle)
                .unwrap()
                .value;
            let s = semivariation(&g, &mu, &a, &pair, NormPath::ascent(k))
                .unwrap()
                .value;
            assert!((o - s).abs() <= 1e-6, "{spec}: {o} vs {s}");
        }
    }
}

#[test]
fn unit_constant_is_phi_inverse_at_one() {
    for (spec, p) in [("npower:2", 2.0f64), ("npower:3", 3.0), ("npower:1.5", 1.5)] {
        let pair = OrliczPair::parse(spec).unwrap();
        let want = p.powf(1.0 / p);
        for n in [1, 6] {
            let c0 = dual_unit_constant(n, &pair).unwrap();
            assert!((c0 - want).abs() < 1e-6, "{spec}: {c0} vs {want}");
        }
    }
}

#[test]
fn psi_inverse_constant_violates_lower_bound_for_cubic() {
    // Φ = x³/3, μ = δ_e, A = G: the semivariation is ‖χ_G‖_Φ = 3^{-1/3},
    // below |μ(G)| m(A) / Ψ⁻¹(1) = (3/2)^{-2/3}
    let g = FiniteGroup::parse("cyclic:4").unwrap();
    let pair = OrliczPair::parse("npower:3").unwrap();
    let mu = AtomicMeasure::dirac(4, g.identity());
    let v = semivariation(&g, &mu, &BorelSet::full(4), &pair, NormPath::Oracle)
        .unwrap()
        .value;
    assert!((v - 3f64.powf(-1.0 / 3.0)).abs() < 1e-9);
    let psi_bound = 1.0 / pair.psi.inverse(1.0).unwrap();
    assert!((psi_bound - 1.5f64.powf(-2.0 / 3.0)).abs() < 1e-9);
    assert!(v < psi_bound - 0.05);
    let c0 = dual_unit_constant(4, &pair).unwrap();
    assert!(v >= 1.0 / c0 - 1e-9);
}

#[test]
fn fourier_variation_equals_haar_on_every_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for spec in catalog(12) {
        let g = FiniteGroup::parse(spec).unwrap();
        let dual = build_dual(&g).unwrap();
        let nu = fourier_measure(&g, &dual, BlockNormKind::SupOp);
        for _ in 0..5 {
            let a = BorelSet::random(g.order(), &mut rng);
            let want = a.len() as f64 / g.order() as f64;
            assert!((nu.variation(&a).unwrap() - want).abs() < 1e-12, "{spec}");
        }
    }
}
