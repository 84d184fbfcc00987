//! Positive zeros of J_n.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use super::bessel::bessel_j_nonneg;
use crate::error::{Error, Result};

type ZeroTable = HashMap<u32, Arc<Vec<f64>>>;

fn cache() -> &'static RwLock<ZeroTable> {
    static CACHE: OnceLock<RwLock<ZeroTable>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// McMahon's large-k expansion of the k-th zero of J_n.
pub fn mcmahon(n: u32, k: usize) -> f64 {
    let mu = 4.0 * (n as f64) * (n as f64);
    let beta = (k as f64 + 0.5 * n as f64 - 0.25) * PI;
    let e = 8.0 * beta;
    let e2 = e * e;
    beta - (mu - 1.0) / e
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e2)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e * e2 * e2)
}

fn jn(n: u32, x: f64) -> f64 {
    bessel_j_nonneg(n, x)
}

fn jn_prime(n: u32, x: f64) -> f64 {
    if n == 0 {
        -jn(1, x)
    } else {
        0.5 * (jn(n - 1, x) - jn(n + 1, x))
    }
}

/// Newton iteration safeguarded by the bracket [lo, hi].
fn refine(n: u32, mut lo: f64, mut hi: f64, guess: f64) -> f64 {
    let mut flo = jn(n, lo);
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..100 {
        let fx = jn(n, x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = jn_prime(n, x);
        let mut next = x - fx / d;
        if !(next > lo && next < hi) || d == 0.0 {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 2e-16 * x {
            return next;
        }
        x = next;
        if hi - lo <= 4e-16 * x {
            return x;
        }
    }
    x
}

fn next_zero(n: u32, prev: Option<f64>, k: usize) -> f64 {
    let start = match prev {
        Some(p) => p + 1.0,
        None => (n as f64).max(0.5),
    };
    // try the McMahon guess first; consecutive zeros are more than 3 apart,
    // so a sign change in [g - 0.5, g + 0.5] with g - 0.5 < prev + 3 is the next zero
    let g = mcmahon(n, k);
    if let Some(p) = prev {
        let lo = (g - 0.5).max(start);
        let hi = g + 0.5;
        if lo < p + 3.0 && hi > lo && (jn(n, lo) > 0.0) != (jn(n, hi) > 0.0) {
            return refine(n, lo, hi, g);
        }
    }
    let mut a = start;
    let mut fa = jn(n, a);
    loop {
        let b = a + 1.0;
        let fb = jn(n, b);
        if fb == 0.0 {
            return b;
        }
        if (fa > 0.0) != (fb > 0.0) {
            return refine(n, a, b, g);
        }
        a = b;
        fa = fb;
    }
}

/// The first `count` positive zeros of J_n, increasing.
pub fn bessel_j_zeros(n: u32, count: usize) -> Result<Vec<f64>> {
    Ok(bessel_j_zeros_shared(n, count)?[..count].to_vec())
}

/// Shared view of a cached table holding at least `count` zeros.
pub fn bessel_j_zeros_shared(n: u32, count: usize) -> Result<Arc<Vec<f64>>> {
    if count == 0 {
        return Err(Error::domain("zero count must be positive".to_string()));
    }
    if let Some(t) = cache().read().expect("zero cache poisoned").get(&n) {
        if t.len() >= count {
            return Ok(t.clone());
        }
    }
    let mut table: Vec<f64> = cache()
        .read()
        .expect("zero cache poisoned")
        .get(&n)
        .map(|t| t.as_ref().clone())
        .unwrap_or_default();
    while table.len() < count {
        let k = table.len() + 1;
        let z = next_zero(n, table.last().copied(), k);
        table.push(z);
    }
    let arc = Arc::new(table);
    let mut w = cache().write().expect("zero cache poisoned");
    let keep = match w.get(&n) {
        Some(existing) if existing.len() >= arc.len() => existing.clone(),
        _ => {
            w.insert(n, arc.clone());
            arc
        }
    };
    Ok(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_zeros() {
        let cases: [(u32, usize, f64); 7] = [
            (0, 1, 2.404_825_557_695_772_768_6),
            (1, 1, 3.831_705_970_207_512_315_6),
            (5, 3, 15.700_174_079_711_671_038),
            (64, 1, 71.681_167_819_458_038_968),
            (0, 200, 627.533_331_746_904_225_46),
            (8, 200, 640.049_701_763_852_911_01),
            (3, 17, 57.257_651_604_499_014_081),
        ];
        for (n, k, want) in cases {
            let z = bessel_j_zeros(n, k).unwrap();
            assert!(((z[k - 1] - want) / want).abs() < 1e-12, "j_{n},{k} = {}", z[k - 1]);
        }
    }

    #[test]
    fn zeros_are_roots_and_spaced() {
        let z = bessel_j_zeros(2, 60).unwrap();
        for w in z.windows(2) {
            assert!(w[1] - w[0] > 1.0);
        }
        for &x in &z {
            assert!(jn(2, x).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_count_must_be_positive() {
        assert!(bessel_j_zeros(0, 0).is_err());
    }
}
