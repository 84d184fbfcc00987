use std::sync::{Mutex, OnceLock};

use super::eval::phi_value;
use super::psi::psi_f64;
use crate::error::{Error, Result};

/// Exponent of x in the remainder envelope.
pub const REMAINDER_DELTA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: f64,
    /// Size of the first omitted term, |Psi_{N+1}(x/n)| / n^{2N+3}.
    pub next_term: f64,
    /// C_N n^{-(2N+5/3)} x^delta / (1 + x/n) with C_N fitted on a sample grid.
    pub remainder_bound: f64,
}

fn partial_sum(n: u32, x: f64, order: usize) -> Result<f64> {
    let nf = n as f64;
    let mut s = 0.0;
    for k in 0..=order {
        s += psi_f64(k)?.value.eval_f64(x / nf) / nf.powi(2 * k as i32 + 1);
    }
    Ok(s)
}

fn envelope(n: u32, x: f64, order: usize) -> f64 {
    let nf = n as f64;
    nf.powf(-(2.0 * order as f64 + 5.0 / 3.0)) * x.powf(REMAINDER_DELTA) / (1.0 + x / nf)
}

/// Sum_{k <= N} Psi_k(x/n) / n^{2k+1}.
pub fn phi_asymptotic(n: u32, x: f64, order: usize) -> Result<AsymptoticValue> {
    if n == 0 || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("phi_asymptotic(n={n}, x={x})")));
    }
    let value = partial_sum(n, x, order)?;
    let next = psi_f64(order + 1)?.value;
    let nf = n as f64;
    let next_term = (next.eval_f64(x / nf) / nf.powi(2 * order as i32 + 3)).abs();
    let c = fit_remainder_constant(order)?;
    Ok(AsymptoticValue {
        value,
        next_term,
        remainder_bound: c * envelope(n, x, order),
    })
}

/// Empirical C_N: the largest ratio |phi_n - partial sum| / envelope over
/// n in [2, 64] and a log grid of x in [1e-2, 1e3]. Cached per order.
pub fn fit_remainder_constant(order: usize) -> Result<f64> {
    static CACHE: OnceLock<Mutex<Vec<Option<f64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(Some(c)) = cache.lock().expect("cache poisoned").get(order) {
        return Ok(*c);
    }
    let mut c: f64 = 0.0;
    for &n in &[2u32, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64] {
        for i in 0..=40 {
            let x = 10f64.powf(-2.0 + 5.0 * i as f64 / 40.0);
            let r = (phi_value(n, x)? - partial_sum(n, x, order)?).abs();
            c = c.max(r / envelope(n, x, order));
        }
    }
    let mut g = cache.lock().expect("cache poisoned");
    if g.len() <= order {
        g.resize(order + 1, None);
    }
    g[order] = Some(c);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sums_improve_with_order() {
        let n = 20;
        let x = 15.0;
        let exact = phi_value(n, x).unwrap();
        let e0 = (phi_asymptotic(n, x, 0).unwrap().value - exact).abs();
        let e1 = (phi_asymptotic(n, x, 1).unwrap().value - exact).abs();
        let e2 = (phi_asymptotic(n, x, 2).unwrap().value - exact).abs();
        assert!(e1 < e0 && e2 < e1, "{e0} {e1} {e2}");
    }

    #[test]
    fn bound_holds_off_the_fitting_grid() {
        for &(n, x) in &[(5u32, 0.37), (40, 7.7), (100, 250.0)] {
            for order in 0..=1 {
                let a = phi_asymptotic(n, x, order).unwrap();
                let err = (a.value - phi_value(n, x).unwrap()).abs();
                assert!(err <= 2.0 * a.remainder_bound, "n={n} x={x} N={order}");
            }
        }
    }
}
