//! Finite groups with complete unitary duals and normalized counting Haar
//! measure.
//!
//! Catalog groups are built from explicit formulas; each ships its dual in a
//! fixed basis. Groups imported from a multiplication table are validated but
//! carry no dual.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::orlicz::GroupFunction;

pub type CMatrix = DMatrix<Complex64>;

/// Largest order with exhaustive associativity checking.
const FULL_ASSOCIATIVITY_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion,
    Symmetric(usize),
    Product(Box<Family>, Box<Family>),
}

impl Family {
    fn order(&self) -> usize {
        match self {
            Family::Cyclic(n) => *n,
            Family::Dihedral(n) => 2 * n,
            Family::Quaternion => 8,
            Family::Symmetric(n) => (1..=*n).product(),
            Family::Product(a, b) => a.order() * b.order(),
        }
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    label: String,
    element_labels: Vec<String>,
    family: Option<Family>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult && self.label == other.label
    }
}

#[derive(Deserialize)]
struct GroupJson {
    order: usize,
    mult_table: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    label: Option<String>,
}

impl FiniteGroup {
    /// Parses a catalog spec: `cyclic:n`, `dihedral:n`, `quaternion8`,
    /// `symmetric:n` (n <= 4) or `product:<spec>×<spec>` (ASCII `x` is
    /// accepted for `×`; the split happens at the first separator, so nested
    /// products associate to the right).
    pub fn parse(spec: &str) -> Result<Self> {
        let family = parse_family(spec.trim())?;
        Ok(Self::from_family(family))
    }

    /// Builds the group of a catalog spec.
    pub fn build(spec: &str) -> Result<Self> {
        Self::parse(spec)
    }

    fn from_family(family: Family) -> Self {
        let (mult, element_labels) = family_table(&family);
        let order = family.order();
        let label = family_label(&family);
        let mut g =
            Self::assemble(label, order, mult, element_labels).expect("catalog tables are groups");
        g.family = Some(family);
        g
    }

    fn assemble(
        label: String,
        order: usize,
        mult: Vec<usize>,
        element_labels: Vec<String>,
    ) -> Result<Self> {
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mult[e * order + x] == x && mult[x * order + e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mult[a * order + b] == identity && mult[b * order + a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        Ok(Self {
            order,
            mult,
            identity,
            inv,
            label,
            element_labels,
            family: None,
        })
    }

    /// Validates and wraps an external multiplication table.
    pub fn from_table(
        label: impl Into<String>,
        table: &[Vec<usize>],
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidGroup(format!(
                    "entry {bad} in row {i} out of range"
                )));
            }
            mult.extend_from_slice(row);
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                row_seen[mult[i * n + j]] = true;
                col_seen[mult[j * n + i]] = true;
            }
            if row_seen.contains(&false) || col_seen.contains(&false) {
                return Err(Error::InvalidGroup(format!(
                    "row or column {i} is not a permutation"
                )));
            }
        }
        let labels = if labels.is_empty() {
            (0..n).map(|i| i.to_string()).collect()
        } else if labels.len() == n {
            labels
        } else {
            return Err(Error::InvalidGroup(format!(
                "{} labels for order {n}",
                labels.len()
            )));
        };
        let g = Self::assemble(label.into(), n, mult, labels)?;
        g.check_associativity()?;
        Ok(g)
    }

    /// Loads `{order, mult_table, labels}` JSON.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GroupJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.order != raw.mult_table.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} does not match table with {} rows",
                raw.order,
                raw.mult_table.len()
            )));
        }
        let label = raw
            .label
            .unwrap_or_else(|| format!("imported:{}", raw.order));
        Self::from_table(label, &raw.mult_table, raw.labels)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidGroup(format!(
                    "associativity fails on ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..20_000 {
                check(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn element_label(&self, t: usize) -> &str {
        &self.element_labels[t]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Normalized counting measure `|A| / n`.
    pub fn haar(&self, set: &BorelSet) -> f64 {
        set.len() as f64 / self.order as f64
    }

    /// `true` when a dual can be constructed.
    pub fn has_catalog_dual(&self) -> bool {
        self.family.is_some()
    }
}

fn parse_family(spec: &str) -> Result<Family> {
    let unknown = || Error::UnknownGroup(spec.to_string());
    if spec == "quaternion8" {
        return Ok(Family::Quaternion);
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let (a, b) = rest
            .split_once('×')
            .or_else(|| rest.split_once('x'))
            .ok_or_else(unknown)?;
        return Ok(Family::Product(
            Box::new(parse_family(a.trim())?),
            Box::new(parse_family(b.trim())?),
        ));
    }
    let (head, arg) = spec.split_once(':').ok_or_else(unknown)?;
    let n: usize = arg.trim().parse().map_err(|_| unknown())?;
    match head {
        "cyclic" if (1..=64).contains(&n) => Ok(Family::Cyclic(n)),
        "dihedral" if (1..=32).contains(&n) => Ok(Family::Dihedral(n)),
        "symmetric" if (1..=4).contains(&n) => Ok(Family::Symmetric(n)),
        _ => Err(unknown()),
    }
}

fn family_label(f: &Family) -> String {
    match f {
        Family::Cyclic(n) => format!("cyclic:{n}"),
        Family::Dihedral(n) => format!("dihedral:{n}"),
        Family::Quaternion => "quaternion8".into(),
        Family::Symmetric(n) => format!("symmetric:{n}"),
        Family::Product(a, b) => format!("product:{}×{}", family_label(a), family_label(b)),
    }
}

/// Quaternion units as 2x2 complex matrices, in element order
/// `1, i, j, k, -1, -i, -j, -k`.
fn quaternion_matrices() -> Vec<CMatrix> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let one = CMatrix::identity(2, 2);
    let qi = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
    let qj = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    let qk = &qi * &qj;
    let pos = vec![one, qi, qj, qk];
    let neg: Vec<CMatrix> = pos.iter().map(|m| -m.clone()).collect();
    pos.into_iter().chain(neg).collect()
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

fn family_table(f: &Family) -> (Vec<usize>, Vec<String>) {
    let n = f.order();
    let mut mult = vec![0; n * n];
    let labels: Vec<String>;
    match f {
        Family::Cyclic(m) => {
            for a in 0..n {
                for b in 0..n {
                    mult[a * n + b] = (a + b) % m;
                }
            }
            labels = (0..n).map(|k| k.to_string()).collect();
        }
        Family::Dihedral(m) => {
            let m = *m;
            // index k + m*j is r^k s^j; s r^b = r^{-b} s
            for a in 0..n {
                for b in 0..n {
                    let (ka, ja) = (a % m, a / m);
                    let (kb, jb) = (b % m, b / m);
                    let k = if ja == 0 {
                        (ka + kb) % m
                    } else {
                        (ka + m - kb) % m
                    };
                    mult[a * n + b] = k + m * ((ja + jb) % 2);
                }
            }
            labels = (0..n)
                .map(|t| {
                    if t < m {
                        format!("r{}", t)
                    } else {
                        format!("r{}s", t - m)
                    }
                })
                .collect();
        }
        Family::Quaternion => {
            let mats = quaternion_matrices();
            for a in 0..n {
                for b in 0..n {
                    let p = &mats[a] * &mats[b];
                    mult[a * n + b] = mats
                        .iter()
                        .position(|m| (m - &p).camax() < 1e-12)
                        .expect("closed under multiplication");
                }
            }
            labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        }
        Family::Symmetric(m) => {
            let perms = permutations(*m);
            for a in 0..n {
                for b in 0..n {
                    // (ab)(x) = a(b(x))
                    let c: Vec<usize> = (0..*m).map(|x| perms[a][perms[b][x]]).collect();
                    mult[a * n + b] = perms.iter().position(|p| *p == c).unwrap();
                }
            }
            labels = perms
                .iter()
                .map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""))
                .collect();
        }
        Family::Product(x, y) => {
            let (mx, lx) = family_table(x);
            let (my, ly) = family_table(y);
            let (nx, ny) = (x.order(), y.order());
            for a in 0..n {
                for b in 0..n {
                    let (a1, a2) = (a / ny, a % ny);
                    let (b1, b2) = (b / ny, b % ny);
                    mult[a * n + b] = mx[a1 * nx + b1] * ny + my[a2 * ny + b2];
                }
            }
            labels = (0..n)
                .map(|a| format!("({},{})", lx[a / ny], ly[a % ny]))
                .collect();
        }
    }
    (mult, labels)
}

/// An irreducible unitary representation, one matrix per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    pub id: String,
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

impl Irrep {
    fn scalar(id: impl Into<String>, values: Vec<Complex64>) -> Self {
        Self {
            id: id.into(),
            dim: 1,
            matrices: values
                .into_iter()
                .map(|v| CMatrix::from_element(1, 1, v))
                .collect(),
        }
    }

    pub fn character(&self, t: usize) -> Complex64 {
        self.matrices[t].trace()
    }
}

/// The unitary dual; the trivial representation comes first.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryDual {
    pub irreps: Vec<Irrep>,
}

impl UnitaryDual {
    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.irreps.iter().map(|r| r.dim).max().unwrap_or(0)
    }

    /// Adds `eps` to the (0,0) entry of one representation matrix.
    pub fn perturb(&mut self, irrep: usize, element: usize, eps: f64) {
        self.irreps[irrep].matrices[element][(0, 0)] += Complex64::new(eps, 0.0);
    }
}

fn real_matrix(d: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_iterator(d, d, entries.iter().map(|&v| Complex64::new(v, 0.0))).transpose()
}

fn rotation(theta: f64) -> CMatrix {
    real_matrix(2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

/// Orthonormal basis (columns) of the sum-zero subspace of `R^m`.
fn helmert_basis(m: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(m, m - 1);
    for k in 1..m {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            b[(i, k - 1)] = 1.0 / norm;
        }
        b[(k, k - 1)] = -(k as f64) / norm;
    }
    b
}

fn standard_rep(perms: &[Vec<usize>]) -> Vec<CMatrix> {
    let m = perms[0].len();
    let basis = helmert_basis(m);
    perms
        .iter()
        .map(|p| {
            let mut pm = DMatrix::<f64>::zeros(m, m);
            for (x, &px) in p.iter().enumerate() {
                pm[(px, x)] = 1.0;
            }
            (basis.transpose() * pm * &basis).map(|v| Complex64::new(v, 0.0))
        })
        .collect()
}

fn parity(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn family_dual(f: &Family) -> Vec<Irrep> {
    let n = f.order();
    let one = Complex64::new(1.0, 0.0);
    match f {
        Family::Cyclic(m) => (0..*m)
            .map(|k| {
                let vals = (0..n)
                    .map(|t| {
                        Complex64::from_polar(1.0, 2.0 * PI * ((k * t) % m) as f64 / *m as f64)
                    })
                    .collect();
                Irrep::scalar(
                    if k == 0 {
                        "trivial".to_string()
                    } else {
                        format!("chi{k}")
                    },
                    vals,
                )
            })
            .collect(),
        Family::Dihedral(m) => {
            let m = *m;
            let split = |t: usize| (t % m, t / m);
            let mut out = vec![
                Irrep::scalar("trivial", vec![one; n]),
                Irrep::scalar(
                    "sign",
                    (0..n)
                        .map(|t| if split(t).1 == 1 { -one } else { one })
                        .collect(),
                ),
            ];
            if m % 2 == 0 {
                for (name, s) in [("alt+", 1.0), ("alt-", -1.0)] {
                    out.push(Irrep::scalar(
                        name,
                        (0..n)
                            .map(|t| {
                                let (k, j) = split(t);
                                let r = if k % 2 == 0 { 1.0 } else { -1.0 };
                                Complex64::new(r * if j == 1 { s } else { 1.0 }, 0.0)
                            })
                            .collect(),
                    ));
                }
            }
            let refl = real_matrix(2, &[1.0, 0.0, 0.0, -1.0]);
            for h in 1..=((m - 1) / 2) {
                let matrices = (0..n)
                    .map(|t| {
                        let (k, j) = split(t);
                        let r = rotation(2.0 * PI * (h * k) as f64 / m as f64);
                        if j == 1 {
                            r * &refl
                        } else {
                            r
                        }
                    })
                    .collect();
                out.push(Irrep {
                    id: format!("rho{h}"),
                    dim: 2,
                    matrices,
                });
            }
            out
        }
        Family::Quaternion => {
            let mut out = Vec::new();
            for (name, a, b) in [
                ("trivial", 1.0, 1.0),
                ("chi_i", 1.0, -1.0),
                ("chi_j", -1.0, 1.0),
                ("chi_k", -1.0, -1.0),
            ] {
                // element order 1, i, j, k repeated with sign flips
                let base = [1.0, a, b, a * b];
                out.push(Irrep::scalar(
                    name,
                    (0..8).map(|t| Complex64::new(base[t % 4], 0.0)).collect(),
                ));
            }
            out.push(Irrep {
                id: "spin".into(),
                dim: 2,
                matrices: quaternion_matrices(),
            });
            out
        }
        Family::Symmetric(m) => {
            let perms = permutations(*m);
            let mut out = vec![Irrep::scalar("trivial", vec![one; n])];
            if *m >= 2 {
                out.push(Irrep::scalar(
                    "sign",
                    perms
                        .iter()
                        .map(|p| Complex64::new(parity(p), 0.0))
                        .collect(),
                ));
            }
            if *m == 3 {
                out.push(Irrep {
                    id: "standard".into(),
                    dim: 2,
                    matrices: standard_rep(&perms),
                });
            }
            if *m == 4 {
                // S4 acts on the three pairings {01|23, 02|13, 03|12}
                let pairings = [[0usize, 1], [0, 2], [0, 3]];
                let pairing_of = |a: usize, b: usize| -> usize {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    let partner =
                        |x: usize| -> usize { pairings.iter().position(|p| p[1] == x).unwrap() };
                    if lo == 0 {
                        partner(hi)
                    } else {
                        // the complementary pair contains 0
                        let other: Vec<usize> = (1..4).filter(|&x| x != lo && x != hi).collect();
                        partner(other[0])
                    }
                };
                let quotient: Vec<Vec<usize>> = perms
                    .iter()
                    .map(|p| {
                        (0..3)
                            .map(|i| {
                                let [a, b] = pairings[i];
                                pairing_of(p[a], p[b])
                            })
                            .collect()
                    })
                    .collect();
                out.push(Irrep {
                    id: "standard-s3".into(),
                    dim: 2,
                    matrices: standard_rep(&quotient),
                });
                let std = standard_rep(&perms);
                let twisted = std
                    .iter()
                    .zip(&perms)
                    .map(|(mat, p)| mat * Complex64::new(parity(p), 0.0))
                    .collect();
                out.push(Irrep {
                    id: "standard".into(),
                    dim: 3,
                    matrices: std,
                });
                out.push(Irrep {
                    id: "standard-sign".into(),
                    dim: 3,
                    matrices: twisted,
                });
            }
            out
        }
        Family::Product(x, y) => {
            let (dx, dy) = (family_dual(x), family_dual(y));
            let ny = y.order();
            let mut out = Vec::new();
            for a in &dx {
                for b in &dy {
                    let matrices = (0..n)
                        .map(|t| a.matrices[t / ny].kronecker(&b.matrices[t % ny]))
                        .collect();
                    let id = if a.id == "trivial" && b.id == "trivial" {
                        "trivial".to_string()
                    } else {
                        format!("{}⊗{}", a.id, b.id)
                    };
                    out.push(Irrep {
                        id,
                        dim: a.dim * b.dim,
                        matrices,
                    });
                }
            }
            out
        }
    }
}

/// Builds the complete unitary dual of a catalog group.
pub fn build_dual(group: &FiniteGroup) -> Result<UnitaryDual> {
    let family = group.family.as_ref().ok_or_else(|| {
        Error::Construction(format!(
            "{} is not a catalog group; no dual available",
            group.label
        ))
    })?;
    let dual = UnitaryDual {
        irreps: family_dual(family),
    };
    let total: usize = dual.irreps.iter().map(|r| r.dim * r.dim).sum();
    if total != group.order() {
        return Err(Error::Construction(format!(
            "sum of squared dimensions {total} != order {}",
            group.order()
        )));
    }
    Ok(dual)
}

/// Maximum residuals of the representation axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct DualReport {
    pub homomorphism: f64,
    pub unitarity: f64,
    pub irreducibility: f64,
    pub orthogonality: f64,
    pub dimension_sum: usize,
    pub order: usize,
}

impl DualReport {
    pub fn complete(&self) -> bool {
        self.dimension_sum == self.order
    }

    pub fn max_residual(&self) -> f64 {
        self.homomorphism
            .max(self.unitarity)
            .max(self.irreducibility)
            .max(self.orthogonality)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.complete() && self.max_residual() <= tol
    }
}

/// Runs every representation-theoretic invariant and reports the worst
/// residual of each.
pub fn validate_dual(group: &FiniteGroup, dual: &UnitaryDual) -> DualReport {
    let n = group.order();
    let mut report = DualReport {
        homomorphism: 0.0,
        unitarity: 0.0,
        irreducibility: 0.0,
        orthogonality: 0.0,
        dimension_sum: dual.irreps.iter().map(|r| r.dim * r.dim).sum(),
        order: n,
    };
    for rep in &dual.irreps {
        if rep.matrices.len() != n
            || rep
                .matrices
                .iter()
                .any(|m| m.nrows() != rep.dim || m.ncols() != rep.dim)
        {
            report.homomorphism = f64::INFINITY;
            continue;
        }
        let eye = CMatrix::identity(rep.dim, rep.dim);
        for s in 0..n {
            let ms = &rep.matrices[s];
            report.unitarity = report.unitarity.max((ms * ms.adjoint() - &eye).camax());
            for t in 0..n {
                let lhs = &rep.matrices[group.mul(s, t)];
                let rhs = ms * &rep.matrices[t];
                report.homomorphism = report.homomorphism.max((lhs - rhs).camax());
            }
        }
        let norm: f64 = (0..n).map(|t| rep.character(t).norm_sqr()).sum::<f64>() / n as f64;
        report.irreducibility = report.irreducibility.max((norm - 1.0).abs());
    }
    if report.homomorphism.is_finite() {
        // (d_π / n) Σ_t π_ij(t) conj(σ_kl(t)) = δ_πσ δ_ik δ_jl
        let coeffs: Vec<(usize, usize, usize, usize)> = dual
            .irreps
            .iter()
            .enumerate()
            .flat_map(|(r, rep)| {
                (0..rep.dim).flat_map(move |i| (0..rep.dim).map(move |j| (r, rep.dim, i, j)))
            })
            .collect();
        for &(r1, d1, i, j) in &coeffs {
            for &(r2, _, k, l) in &coeffs {
                let s: Complex64 = (0..n)
                    .map(|t| {
                        dual.irreps[r1].matrices[t][(i, j)]
                            * dual.irreps[r2].matrices[t][(k, l)].conj()
                    })
                    .sum();
                let value = s * (d1 as f64 / n as f64);
                let expected = if (r1, i, j) == (r2, k, l) { 1.0 } else { 0.0 };
                report.orthogonality = report.orthogonality.max((value - expected).norm());
            }
        }
    }
    report
}

/// A subset of group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BorelSet {
    indices: Vec<usize>,
}

impl BorelSet {
    /// Validates indices against the group order; duplicates are rejected.
    pub fn new(order: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        if let Some(&bad) = idx.iter().find(|&&i| i >= order) {
            return Err(Error::Precondition(format!(
                "index {bad} out of range for order {order}"
            )));
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("duplicate index in set".into()));
        }
        Ok(Self { indices: idx })
    }

    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
        }
    }

    pub fn full(order: usize) -> Self {
        Self {
            indices: (0..order).collect(),
        }
    }

    pub fn singleton(t: usize) -> Self {
        Self { indices: vec![t] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, t: usize) -> bool {
        self.indices.binary_search(&t).is_ok()
    }

    /// `tA`
    pub fn left_translate(&self, group: &FiniteGroup, t: usize) -> Self {
        Self::new(group.order(), self.indices.iter().map(|&a| group.mul(t, a)))
            .expect("translate of a set")
    }

    /// `At`
    pub fn right_translate(&self, group: &FiniteGroup, t: usize) -> Self {
        Self::new(group.order(), self.indices.iter().map(|&a| group.mul(a, t)))
            .expect("translate of a set")
    }

    /// `χ_A` as a function on a group of the given order.
    pub fn indicator(&self, order: usize) -> GroupFunction {
        let mut v = vec![Complex64::new(0.0, 0.0); order];
        for &i in &self.indices {
            v[i] = Complex64::new(1.0, 0.0);
        }
        GroupFunction::new(v)
    }

    /// Random subset, each element kept with probability 1/2; resampled
    /// until nonempty.
    pub fn random<R: Rng>(order: usize, rng: &mut R) -> Self {
        loop {
            let indices: Vec<usize> = (0..order).filter(|_| rng.gen_bool(0.5)).collect();
            if !indices.is_empty() {
                return Self { indices };
            }
        }
    }
}

/// Catalog groups of order at most `max_order`, in a fixed order.
pub fn catalog(max_order: usize) -> Vec<&'static str> {
    const ALL: &[&str] = &[
        "cyclic:1",
        "cyclic:2",
        "cyclic:3",
        "cyclic:4",
        "cyclic:5",
        "cyclic:6",
        "cyclic:8",
        "cyclic:12",
        "product:cyclic:2×cyclic:2",
        "product:cyclic:2×cyclic:4",
        "dihedral:3",
        "dihedral:4",
        "dihedral:5",
        "dihedral:6",
        "quaternion8",
        "symmetric:3",
        "product:cyclic:2×symmetric:3",
        "symmetric:4",
    ];
    ALL.iter()
        .copied()
        .filter(|s| FiniteGroup::parse(s).is_ok_and(|g| g.order() <= max_order))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims_sorted(spec: &str) -> Vec<usize> {
        let g = FiniteGroup::parse(spec).unwrap();
        let mut d = build_dual(&g).unwrap().dims();
        d.sort_unstable();
        d
    }

    #[test]
    fn build_examples() {
        let c4 = FiniteGroup::parse("cyclic:4").unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        assert_eq!(FiniteGroup::parse("dihedral:4").unwrap().order(), 8);
        let v4 = FiniteGroup::parse("product:cyclic:2×cyclic:2").unwrap();
        assert_eq!(v4.order(), 4);
        assert!((0..4).all(|t| v4.inv(t) == t));
        assert_eq!(
            FiniteGroup::parse("product:cyclic:2xcyclic:2")
                .unwrap()
                .order(),
            4
        );
    }

    #[test]
    fn build_rejects_unknown_specs() {
        for bad in [
            "cyclic:0",
            "symmetric:5",
            "tetrahedral:12",
            "cyclic",
            "product:cyclic:2",
        ] {
            assert!(
                matches!(FiniteGroup::parse(bad), Err(Error::UnknownGroup(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn nonabelian_catalog() {
        for spec in [
            "dihedral:3",
            "dihedral:4",
            "quaternion8",
            "symmetric:3",
            "symmetric:4",
        ] {
            assert!(!FiniteGroup::parse(spec).unwrap().is_abelian(), "{spec}");
        }
    }

    #[test]
    fn dual_dimensions() {
        assert_eq!(dims_sorted("cyclic:5"), vec![1; 5]);
        assert_eq!(dims_sorted("dihedral:4"), vec![1, 1, 1, 1, 2]);
        assert_eq!(dims_sorted("quaternion8"), vec![1, 1, 1, 1, 2]);
        assert_eq!(dims_sorted("symmetric:3"), vec![1, 1, 2]);
        assert_eq!(dims_sorted("symmetric:4"), vec![1, 1, 2, 3, 3]);
        assert_eq!(dims_sorted("dihedral:5"), vec![1, 1, 2, 2]);
    }

    #[test]
    fn cyclic_characters() {
        let g = FiniteGroup::parse("cyclic:6").unwrap();
        let dual = build_dual(&g).unwrap();
        for (k, rep) in dual.irreps.iter().enumerate() {
            for t in 0..6 {
                let expected = Complex64::from_polar(1.0, 2.0 * PI * (k * t) as f64 / 6.0);
                assert!((rep.matrices[t][(0, 0)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn every_catalog_dual_validates() {
        for spec in catalog(24) {
            let g = FiniteGroup::parse(spec).unwrap();
            let dual = build_dual(&g).unwrap();
            assert_eq!(dual.irreps[0].id, "trivial");
            let r = validate_dual(&g, &dual);
            assert!(r.passed(1e-10), "{spec}: {r:?}");
        }
    }

    #[test]
    fn trivial_group_validates_exactly() {
        let g = FiniteGroup::parse("cyclic:1").unwrap();
        let r = validate_dual(&g, &build_dual(&g).unwrap());
        assert_eq!(r.max_residual(), 0.0);
        assert!(r.passed(0.0));
    }

    #[test]
    fn perturbed_dual_fails_unitarity() {
        let g = FiniteGroup::parse("dihedral:4").unwrap();
        let mut dual = build_dual(&g).unwrap();
        dual.perturb(4, 3, 1e-3);
        let r = validate_dual(&g, &dual);
        assert!(r.unitarity > 1e-4);
        assert!(!r.passed(1e-10));
    }

    #[test]
    fn haar_examples_and_translation_invariance() {
        let g = FiniteGroup::parse("cyclic:4").unwrap();
        assert_eq!(g.haar(&BorelSet::empty()), 0.0);
        assert_eq!(g.haar(&BorelSet::full(4)), 1.0);
        assert_eq!(g.haar(&BorelSet::new(4, [0, 1]).unwrap()), 0.5);
        let s4 = FiniteGroup::parse("symmetric:4").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = BorelSet::random(24, &mut rng);
            for t in 0..24 {
                assert_eq!(s4.haar(&a), s4.haar(&a.left_translate(&s4, t)));
                assert_eq!(s4.haar(&a), s4.haar(&a.right_translate(&s4, t)));
            }
            let inverted = BorelSet::new(24, a.indices().iter().map(|&x| s4.inv(x))).unwrap();
            assert_eq!(s4.haar(&a), s4.haar(&inverted));
        }
    }

    #[test]
    fn borel_set_rejects_bad_indices() {
        assert!(BorelSet::new(3, [0, 3]).is_err());
        assert!(BorelSet::new(3, [1, 1]).is_err());
    }

    #[test]
    fn json_import_round_trip() {
        let text =
            r#"{"order": 3, "mult_table": [[0,1,2],[1,2,0],[2,0,1]], "labels": ["e","a","b"]}"#;
        let g = FiniteGroup::from_json(text).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.inv(1), 2);
        assert!(!g.has_catalog_dual());
        assert!(build_dual(&g).is_err());
        let bad = r#"{"order": 3, "mult_table": [[0,1,2],[1,0,2],[2,1,0]]}"#;
        assert!(FiniteGroup::from_json(bad).is_err());
        let non_assoc = r#"{"order": 5, "mult_table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}"#;
        assert!(FiniteGroup::from_json(non_assoc).is_err());
    }
}
