//! Scalar search primitives shared by the norm engines.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal function on `[a, b]` by golden-section search.
///
/// Non-finite values (NaN, -inf) are treated as -inf, so an objective may
/// signal infeasibility by returning `f64::NEG_INFINITY`. The endpoints are
/// compared against the interior optimum, which keeps boundary maxima exact.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..iters {
        if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let v = eval(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Golden-section minimization, mirror of [`golden_max`].
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let (x, v) = golden_max(
        |x| {
            let y = f(x);
            if y.is_nan() {
                f64::NEG_INFINITY
            } else {
                -y
            }
        },
        a,
        b,
        iters,
    );
    (x, -v)
}

/// Outcome of a monotone threshold search.
#[derive(Debug, Clone, Copy)]
pub struct Threshold {
    /// Smallest point found where the predicate holds.
    pub upper: f64,
    /// Largest point found where it fails.
    pub lower: f64,
    pub iterations: usize,
}

impl Threshold {
    pub fn relative_width(&self) -> f64 {
        if self.upper == 0.0 {
            0.0
        } else {
            (self.upper - self.lower) / self.upper
        }
    }
}

/// Finds the threshold of a predicate that is false below some point and
/// true above it, on the positive half-line.
///
/// `lower` must fail and `upper` must hold; if either is wrong the bracket is
/// grown geometrically first. The search is geometric while the bracket spans
/// more than a factor of two and arithmetic afterwards.
pub fn bisect_threshold<P: FnMut(f64) -> bool>(
    mut holds: P,
    mut lower: f64,
    mut upper: f64,
    rtol: f64,
    max_iter: usize,
) -> Threshold {
    let mut iterations = 0;
    while holds(lower) && lower > f64::MIN_POSITIVE * 4.0 {
        upper = lower;
        lower /= 16.0;
        iterations += 1;
    }
    while !holds(upper) && upper < f64::MAX / 16.0 {
        lower = upper;
        upper *= 16.0;
        iterations += 1;
    }
    while iterations < max_iter && upper - lower > rtol * upper {
        let mid = if lower > 0.0 && upper / lower > 2.0 {
            (lower * upper).sqrt()
        } else {
            0.5 * (lower + upper)
        };
        if mid <= lower || mid >= upper {
            break;
        }
        if holds(mid) {
            upper = mid;
        } else {
            lower = mid;
        }
        iterations += 1;
    }
    Threshold {
        upper,
        lower,
        iterations,
    }
}

/// `n` points spaced geometrically from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect()
}
