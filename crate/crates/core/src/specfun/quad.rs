//! Numerical integration: adaptive Gauss-Kronrod for smooth integrands,
//! tanh-sinh for endpoint singularities and semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Endpoint behaviour of an integrand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Singularity {
    #[default]
    None,
    LeftLog,
    /// `(x - a)^p` with `p > -1`.
    LeftPower(f64),
    RightLog,
    RightPower(f64),
    /// Any integrable behaviour at both ends.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub singularity: Singularity,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            singularity: Singularity::None,
        }
    }
}

impl QuadSpec {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn singular(mut self, s: Singularity) -> Self {
        self.singularity = s;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Integrate `f` over `[a, b]`; `b` may be `f64::INFINITY`.
///
/// Semi-infinite ranges use `x = a + t/(1-t)` followed by tanh-sinh.
/// Finite ranges use adaptive Gauss-Kronrod (21 points) unless `spec`
/// declares an endpoint singularity, in which case tanh-sinh is used.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if a.is_nan() || b.is_nan() || a.is_infinite() {
        return Err(Error::domain(format!("integration range [{a}, {b}]")));
    }
    if b == f64::INFINITY {
        return semi_infinite(f, a, 1.0, spec);
    }
    if b.is_infinite() {
        return Err(Error::domain("lower limit must be finite".to_string()));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if b < a {
        let r = integrate(f, b, a, spec)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    match spec.singularity {
        Singularity::None => gauss_kronrod(f, a, b, spec),
        _ => tanh_sinh(f, a, b, spec),
    }
}

/// `int_a^inf f` through `x = a + scale * t/(1-t)`.
pub fn semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if !(scale > 0.0) {
        return Err(Error::domain(format!("scale {scale}")));
    }
    let g = |t: f64, one_minus_t: f64| {
        if one_minus_t <= 0.0 {
            return 0.0;
        }
        let x = a + scale * t / one_minus_t;
        if !x.is_finite() {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            // divide twice: (1-t)^2 underflows long before the quotient overflows
            v * scale / one_minus_t / one_minus_t
        }
    };
    tanh_sinh_unit(g, spec, "semi-infinite integral")
}

// --- Gauss-Kronrod 10/21 ---------------------------------------------------

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * h;
    let err = ((kronrod - gauss) * h).abs();
    // QUADPACK-style sharpening of the raw difference
    let sharpened = if err > 0.0 {
        let scaled = (200.0 * err / value.abs().max(f64::MIN_POSITIVE)).powf(1.5);
        (err * scaled.min(1.0)).max(50.0 * f64::EPSILON * value.abs())
    } else {
        0.0
    };
    (value, sharpened)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss-Kronrod 21 on a finite interval.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    let (v0, e0) = gk21(&f, a, b);
    if !v0.is_finite() {
        return Err(Error::domain(format!("non-finite integrand on [{a}, {b}]")));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        err: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut evals = 21;
    let mut pieces = 1;
    while total_err > spec.target(total) {
        if pieces >= spec.max_subdivisions {
            return Err(Error::convergence("Gauss-Kronrod", total, total_err));
        }
        let seg = heap.pop().expect("heap is never empty");
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // interval cannot be split further in floating point
            heap.push(seg);
            return Err(Error::convergence("Gauss-Kronrod (roundoff)", total, total_err));
        }
        let (v1, e1) = gk21(&f, seg.a, m);
        let (v2, e2) = gk21(&f, m, seg.b);
        evals += 42;
        pieces += 1;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        if !total.is_finite() {
            return Err(Error::domain("non-finite integrand".to_string()));
        }
        heap.push(Segment {
            a: seg.a,
            b: m,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: m,
            b: seg.b,
            value: v2,
            err: e2,
        });
    }
    // recompute the sums to shed accumulated drift
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let err: f64 = heap.iter().map(|s| s.err).sum();
    Ok(QuadResult {
        value,
        error_estimate: err,
        evaluations: evals,
    })
}

// --- tanh-sinh -------------------------------------------------------------

const TS_TMAX: f64 = 6.1;
const TS_MAX_LEVEL: u32 = 12;

/// Abscissa on the unit interval and its complement for node `t`, plus the
/// derivative ds/dt. Both halves are computed without cancellation.
fn ts_node(t: f64) -> (f64, f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let small = e / (1.0 + e);
    let large = 1.0 / (1.0 + e);
    // ds/dt = (1/2) sech^2(u) * (pi/2) cosh(t), sech^2 = 4e/(1+e)^2
    let w = FRAC_PI_2 * t.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e));
    if t < 0.0 {
        (small, large, w)
    } else {
        (large, small, w)
    }
}

/// tanh-sinh over (0, 1); `g(s, 1 - s)` receives both the node and its complement.
fn tanh_sinh_unit<G: Fn(f64, f64) -> f64>(g: G, spec: &QuadSpec, context: &str) -> Result<QuadResult> {
    let eval = |t: f64| -> f64 {
        let (s, sc, w) = ts_node(t);
        if s <= 0.0 || sc <= 0.0 || w == 0.0 {
            return 0.0;
        }
        let v = g(s, sc);
        if v == 0.0 {
            0.0
        } else {
            v * w
        }
    };
    let mut h = 1.0;
    let kmax = (TS_TMAX / h) as i64;
    let mut sum = eval(0.0);
    let mut evals = 1;
    for k in 1..=kmax {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        evals += 2;
    }
    let mut estimate = sum * h;
    let mut prev_diff = f64::INFINITY;
    for _level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let kmax = (TS_TMAX / h) as i64;
        let mut k = 1;
        while k <= kmax {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            evals += 2;
            k += 2;
        }
        if !sum.is_finite() {
            return Err(Error::domain(format!("non-finite integrand in {context}")));
        }
        let next = sum * h;
        let diff = (next - estimate).abs();
        estimate = next;
        // convergence is roughly quadratic in the level, so the last
        // difference overstates the remaining error
        let err = if prev_diff.is_finite() && prev_diff > 0.0 {
            diff.min(diff * diff / prev_diff).max(4.0 * f64::EPSILON * estimate.abs())
        } else {
            diff
        };
        if err <= spec.target(estimate) && diff <= spec.target(estimate).max(1e-3 * estimate.abs()) {
            return Ok(QuadResult {
                value: estimate,
                error_estimate: err,
                evaluations: evals,
            });
        }
        prev_diff = diff;
    }
    Err(Error::convergence(context.to_string(), estimate, prev_diff))
}

/// tanh-sinh on a finite interval.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    let len = b - a;
    let g = |s: f64, sc: f64| {
        let x = if s <= 0.5 { a + len * s } else { b - len * sc };
        if x <= a || x >= b {
            return 0.0;
        }
        f(x) * len
    };
    tanh_sinh_unit(g, spec, "tanh-sinh")
}

/// Fixed Gauss-Legendre rule (nodes and weights on [-1, 1]) by Newton on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
/// Returns the latest extrapolated value and the change from the previous one.
pub fn wynn_epsilon(sums: &[f64]) -> Option<(f64, f64)> {
    let n = sums.len();
    if n < 3 {
        return None;
    }
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    table.push(vec![0.0; n + 1]);
    table.push(sums.to_vec());
    let mut best = (sums[n - 1], (sums[n - 1] - sums[n - 2]).abs());
    for k in 2..=n {
        let prev2 = &table[k - 2];
        let prev = &table[k - 1];
        let len = prev.len() - 1;
        if len == 0 {
            break;
        }
        let mut col = Vec::with_capacity(len);
        let mut broken = false;
        for i in 0..len {
            let d = prev[i + 1] - prev[i];
            if d == 0.0 || !d.is_finite() {
                broken = true;
                break;
            }
            col.push(prev2[i + 1] + 1.0 / d);
        }
        if broken {
            break;
        }
        // odd k columns hold the extrapolants
        if k % 2 == 1 && col.len() >= 2 {
            let l = col.len();
            best = (col[l - 1], (col[l - 1] - col[l - 2]).abs());
        }
        table.push(col);
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_finite() {
        let r = integrate(|x| x.sin(), 0.0, PI, &QuadSpec::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn sqrt_singularity_left() {
        let spec = QuadSpec::default().singular(Singularity::LeftPower(-0.5));
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn log_singularity() {
        let spec = QuadSpec::default().singular(Singularity::LeftLog);
        let r = integrate(|x| x.ln(), 0.0, 1.0, &spec).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, &QuadSpec::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_algebraic() {
        let r = integrate(
            |x| x.sqrt() / (1.0 + x * x),
            0.0,
            f64::INFINITY,
            &QuadSpec::default(),
        )
        .unwrap();
        // pi / (2 cos(pi/4))
        let want = PI / (2.0 * (PI / 4.0).cos());
        assert!((r.value - want).abs() < 1e-10, "{} vs {want}", r.value);
    }

    #[test]
    fn strong_power_singularity() {
        let spec = QuadSpec::default().singular(Singularity::LeftPower(-0.75));
        let r = integrate(|x| x.powf(-0.75), 0.0, 1.0, &spec).unwrap();
        assert!((r.value - 4.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let spec = QuadSpec {
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            max_subdivisions: 3,
            singularity: Singularity::None,
        };
        let r = integrate(|x| (50.0 * x).sin() / (1e-3 + x), 0.0, 10.0, &spec);
        assert!(matches!(r, Err(Error::ConvergenceFailure { .. })));
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        let mut sums = Vec::new();
        let mut s = 0.0;
        for k in 0..20 {
            s += (-1f64).powi(k) / (2 * k + 1) as f64;
            sums.push(s);
        }
        let (v, _) = wynn_epsilon(&sums).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-12);
    }
}
