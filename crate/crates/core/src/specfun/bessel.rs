//! Integer-order Bessel functions J_n, I_n, K_n of real argument.

use std::f64::consts::{FRAC_PI_4, PI};

use super::gamma::{ln_gamma, EULER_GAMMA};
use crate::error::{Error, Result};

const RESCALE_LIMIT: f64 = 1e250;

fn check_arg(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name}: argument {x}")))
    }
}

/// J_n(x). Power series for small x, Hankel asymptotics for x >> n^2,
/// Miller backward recurrence with Neumann-sum normalization otherwise.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check_arg("bessel_j", x)?;
    if x < 0.0 {
        let v = bessel_j(n, -x)?;
        return Ok(if n % 2 == 1 { -v } else { v });
    }
    Ok(bessel_j_nonneg(n, x))
}

pub(crate) fn bessel_j_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if x * x < 2.0 * (nf + 1.0) {
        return j_series(n, x);
    }
    if x >= 20.0f64.max(0.25 * nf * nf) {
        if let Some(v) = j_hankel(n, x) {
            return v;
        }
    }
    j_miller(n, x)
}

fn j_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut pre = 1.0;
    for k in 1..=n {
        pre *= half / k as f64;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    pre * sum
}

/// Hankel asymptotic expansion; `None` when the series does not reach
/// full precision before its terms start growing.
fn j_hankel(n: u32, x: f64) -> Option<f64> {
    let mu = 4.0 * (n as f64) * (n as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag < 1e-17 {
            converged = true;
            break;
        }
        if mag > last && k > 2 * n as usize + 2 {
            break;
        }
        last = mag;
        // P = t0 - t2 + t4 ..., Q = t1 - t3 + t5 ...
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
    }
    if !converged {
        return None;
    }
    // chi = x - (2n + 1) pi / 4, with the phase reduced exactly mod 2 pi
    let (sx, cx) = x.sin_cos();
    let octant = ((2 * n as u64 + 1) % 8) as f64;
    let (sp, cp) = (octant * FRAC_PI_4).sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    Some((2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi))
}

fn j_miller(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let top = (nf + (40.0 * nf).sqrt()).max(x + 12.0 * x.cbrt()) + 20.0;
    let mut m = top.ceil() as u32;
    if m % 2 == 1 {
        m += 1;
    }
    let two_over_x = 2.0 / x;
    let mut jp = 0.0; // J_{k+1}
    let mut j = 1e-300; // J_k
    let mut ans = 0.0;
    let mut even_sum = 0.0;
    for k in (1..=m).rev() {
        let jm = k as f64 * two_over_x * j - jp;
        jp = j;
        j = jm;
        // j now holds J_{k-1}
        if k - 1 == n {
            ans = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            even_sum += j;
        }
        if j.abs() > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            j *= s;
            jp *= s;
            ans *= s;
            even_sum *= s;
        }
    }
    let norm = j + 2.0 * even_sum;
    ans / norm
}

/// d/dx J_n(x).
pub fn bessel_j_prime(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(-bessel_j(1, x)?);
    }
    Ok(0.5 * (bessel_j(n - 1, x)? - bessel_j(n + 1, x)?))
}

/// I_n(x) for x >= 0.
pub fn bessel_i(n: u32, x: f64) -> Result<f64> {
    check_arg("bessel_i", x)?;
    if x < 0.0 {
        let v = bessel_i(n, -x)?;
        return Ok(if n % 2 == 1 { -v } else { v });
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = n as f64;
    if x <= 30.0 || x * x < 32.0 * (nf + 1.0) {
        return Ok(i_series(n, x));
    }
    Ok(i_miller(n, x))
}

fn i_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut pre = 1.0;
    for k in 1..=n {
        pre *= half / k as f64;
    }
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..1000 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    pre * sum
}

fn i_miller(n: u32, x: f64) -> f64 {
    let m = n + (80.0 * x + 100.0).sqrt().ceil() as u32 + 30;
    let two_over_x = 2.0 / x;
    let mut ip = 0.0;
    let mut i = 1e-300;
    let mut ans = 0.0;
    let mut sum = 0.0;
    for k in (1..=m).rev() {
        let im = k as f64 * two_over_x * i + ip;
        ip = i;
        i = im;
        if k - 1 == n {
            ans = i;
        }
        if k - 1 > 0 {
            sum += i;
        }
        if i > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            i *= s;
            ip *= s;
            ans *= s;
            sum *= s;
        }
    }
    let norm = i + 2.0 * sum; // = e^x in these units
    if x < 700.0 {
        x.exp() * (ans / norm)
    } else {
        (x + (ans / norm).ln()).exp()
    }
}

/// (K_0(x), K_1(x)) for x > 0.
pub fn bessel_k01(x: f64) -> Result<(f64, f64)> {
    check_arg("bessel_k", x)?;
    if !(x > 0.0) {
        return Err(Error::domain(format!("bessel_k requires x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(k01_series(x))
    } else {
        let (k0, k1) = k01_scaled_trapezoid(x);
        let e = (-x).exp();
        Ok((k0 * e, k1 * e))
    }
}

fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let l = (0.5 * x).ln();
    // I_0, I_1 and the harmonic-weighted companions
    let mut t0 = 1.0; // q^k / (k!)^2
    let mut i0 = 1.0;
    let mut s0 = 0.0; // sum t0 * H_k
    let mut t1 = 1.0; // q^k / (k! (k+1)!)
    let mut i1 = 1.0;
    let mut s1 = 2.0 * (-EULER_GAMMA) + 1.0; // psi(1) + psi(2)
    let mut h = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        h += 1.0 / kf;
        t0 *= q / (kf * kf);
        i0 += t0;
        s0 += t0 * h;
        t1 *= q / (kf * (kf + 1.0));
        i1 += t1;
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        s1 += t1 * (-2.0 * EULER_GAMMA + 2.0 * h + 1.0 / (kf + 1.0));
        if t0 < 1e-18 * i0 && t1 < 1e-18 * i1 {
            break;
        }
    }
    let k0 = -(l + EULER_GAMMA) * i0 + s0;
    let i1 = 0.5 * x * i1;
    let k1 = 1.0 / x + l * i1 - 0.25 * x * s1;
    (k0, k1)
}

/// e^x K_nu(x) for nu = 0, 1 from the trapezoid rule on
/// int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt, exponentially convergent.
fn k01_scaled_trapezoid(x: f64) -> (f64, f64) {
    let h = (0.6 / x.sqrt()).min(0.25);
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let sh = (0.5 * t).sinh();
        let arg = 2.0 * x * sh * sh;
        if arg > 45.0 {
            break;
        }
        let e = (-arg).exp();
        s0 += e;
        s1 += e * t.cosh();
        k += 1;
    }
    (s0 * h, s1 * h)
}

/// K_n(x) for x > 0 by forward recurrence from K_0, K_1.
pub fn bessel_k(n: u32, x: f64) -> Result<f64> {
    let (k0, k1) = bessel_k01(x)?;
    if n == 0 {
        return Ok(k0);
    }
    let mut km = k0;
    let mut k = k1;
    for j in 1..n {
        let kp = km + 2.0 * j as f64 / x * k;
        km = k;
        k = kp;
        if !k.is_finite() {
            return Ok(f64::INFINITY);
        }
    }
    Ok(k)
}

/// ln K_n(x), robust against overflow for large n.
pub fn ln_bessel_k(n: u32, x: f64) -> Result<f64> {
    let (k0, k1) = if x > 700.0 {
        let (a, b) = k01_scaled_trapezoid(x);
        (a.ln() - x, b.ln() - x)
    } else {
        let (a, b) = bessel_k01(x)?;
        (a.ln(), b.ln())
    };
    if n == 0 {
        return Ok(k0);
    }
    // ratio r_j = K_{j+1}/K_j satisfies r_j = 1/r_{j-1} + 2j/x
    let mut ln_k = k1;
    let mut r = (k1 - k0).exp();
    for j in 1..n {
        r = 1.0 / r + 2.0 * j as f64 / x;
        ln_k += r.ln();
    }
    Ok(ln_k)
}

/// ln I_n(x) for x > 0.
pub fn ln_bessel_i(n: u32, x: f64) -> Result<f64> {
    check_arg("bessel_i", x)?;
    if !(x > 0.0) {
        return Err(Error::domain(format!("ln_bessel_i requires x > 0, got {x}")));
    }
    let nf = n as f64;
    if x <= 30.0 || x * x < 32.0 * (nf + 1.0) {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..1000 {
            term *= q / (k as f64 * (n + k) as f64);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        return Ok(nf * (0.5 * x).ln() - ln_gamma(nf + 1.0)? + sum.ln());
    }
    let v = i_miller(n, x);
    if v.is_finite() && v > 0.0 {
        Ok(v.ln())
    } else {
        Err(Error::domain(format!("ln_bessel_i({n}, {x}) out of range")))
    }
}

/// I_n(x) K_n(x), evaluated through logarithms when either factor
/// leaves the floating-point range.
pub fn bessel_ik_product(n: u32, x: f64) -> Result<f64> {
    let i = bessel_i(n, x)?;
    let k = bessel_k(n, x)?;
    let p = i * k;
    if i > 1e-280 && k.is_finite() && k < 1e280 && p.is_finite() && p > 0.0 {
        return Ok(p);
    }
    Ok((ln_bessel_i(n, x)? + ln_bessel_k(n, x)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: f64, want: f64, tol: f64) -> bool {
        (got - want).abs() <= tol * want.abs().max(1e-300)
    }

    #[test]
    fn j_reference_values() {
        let cases: [(u32, f64, f64); 11] = [
            (0, 1.0, 0.765_197_686_557_966_551_45),
            (1, 2.5, 0.497_094_102_464_274_038_01),
            (5, 10.0, -0.234_061_528_186_793_640_44),
            (10, 30.0, -0.129_876_893_998_588_768_19),
            (0, 100.0, 0.019_985_850_304_223_122_424),
            (3, 500.0, -0.010_199_473_891_695_384_945),
            (64, 70.0, 0.099_019_233_739_506_266_453),
            (2, 25.0, -0.106_294_803_242_381_308_55),
            (7, 0.3, 3.380_544_310_218_747_216_3e-10),
            (40, 20.0, 9.902_389_413_744_686_136_4e-10),
            (100, 150.0, -0.015_359_526_118_405_390_629),
        ];
        for (n, x, want) in cases {
            let got = bessel_j(n, x).unwrap();
            // absolute accuracy for the oscillatory regime, relative otherwise
            let ok = (got - want).abs() < 1e-12 || close(got, want, 1e-11);
            assert!(ok, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn ik_reference_values() {
        let cases: [(u32, f64, f64, f64); 11] = [
            (0, 1.0, 1.266_065_877_752_008_335_6, 0.421_024_438_240_708_333_34),
            (1, 0.5, 0.257_894_305_390_896_316_36, 1.656_441_120_003_300_893_7),
            (5, 3.0, 0.091_206_477_661_513_348_526, 0.937_773_602_386_808_030_57),
            (0, 50.0, 2.932_553_783_849_336_326_7e20, 3.410_167_749_789_495_513_9e-23),
            (2, 1e-3, 1.250_000_104_166_669_973_9e-7, 1_999_999.500_000_971_627_7),
            (20, 7.0, 5.563_200_120_475_373_614e-8, 424_108.104_824_594_361_78),
            (1, 100.0, 1.068_369_390_338_162_481_2e42, 4.679_853_735_636_909_286_6e-45),
            (128, 100.0, 5_875_928_261.900_161_239_4, 5.238_676_236_618_439_187_9e-13),
            (0, 2.0, 2.279_585_302_336_067_267_4, 0.113_893_872_749_533_435_65),
            (1, 2.0, 1.590_636_854_637_329_063_4, 0.139_865_881_816_522_427_28),
            (3, 0.01, 2.083_346_354_199_218_925_3e-8, 7_999_900.001_249_882_046_1),
        ];
        for (n, x, wi, wk) in cases {
            let i = bessel_i(n, x).unwrap();
            let k = bessel_k(n, x).unwrap();
            assert!(close(i, wi, 1e-11), "I_{n}({x}) = {i}, want {wi}");
            assert!(close(k, wk, 1e-11), "K_{n}({x}) = {k}, want {wk}");
        }
    }

    #[test]
    fn ik_product_large_order() {
        let cases = [
            (64, 1.0, 0.007_811_546_267_596_815_912_7),
            (128, 0.5, 0.003_906_220_196_199_672_154_9),
            (32, 2.0, 0.015_594_542_141_704_926_307),
        ];
        for (n, x, want) in cases {
            let got = bessel_ik_product(n, x).unwrap();
            assert!(close(got, want, 1e-11), "I_{n}K_{n}({x}) = {got}");
        }
    }

    #[test]
    fn k_small_argument_limit() {
        let x = 1e-6;
        assert!(close(bessel_k(2, x).unwrap() * x * x, 2.0, 1e-9));
    }

    #[test]
    fn k_rejects_nonpositive() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
    }

    #[test]
    fn wronskian() {
        // I_n K_{n+1} + I_{n+1} K_n = 1/x
        for &x in &[0.1, 1.0, 3.5, 20.0, 80.0] {
            for n in [0u32, 1, 5, 30] {
                let w = bessel_i(n, x).unwrap() * bessel_k(n + 1, x).unwrap()
                    + bessel_i(n + 1, x).unwrap() * bessel_k(n, x).unwrap();
                assert!(close(w * x, 1.0, 1e-12), "n={n} x={x} w*x={}", w * x);
            }
        }
    }
}
