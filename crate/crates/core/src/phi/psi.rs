//! The rational functions Psi_k behind the large-n expansion of phi_n.

use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;

use super::poly::{Field, Polynomial, RationalFn};
use crate::error::{Error, Result};

/// Exact rational function with rational coefficients.
pub type Psi = RationalFn<BigRational>;

/// Largest k accepted by [`psi`]; coefficients grow quickly beyond this.
pub const PSI_MAX_ORDER: usize = 16;

fn table() -> &'static Mutex<Vec<Psi>> {
    static T: OnceLock<Mutex<Vec<Psi>>> = OnceLock::new();
    T.get_or_init(|| {
        let q = |v: i64| <BigRational as Field>::from_i64(v);
        let psi0 = RationalFn::new(
            Polynomial::new(vec![q(0), q(1)]),
            Polynomial::new(vec![q(1), q(0), q(1)]),
        );
        Mutex::new(vec![psi0])
    })
}

/// One recursion step on Psi = P / D^a with D = 1 + x^2. D is irreducible
/// over Q, so peeling off common factors of D leaves lowest terms.
fn step(p: &Psi) -> Psi {
    let q = |v: i64| <BigRational as Field>::from_i64(v);
    let x = Polynomial::<BigRational>::x();
    let d = Polynomial::<BigRational>::from_ints(&[1, 0, 1]);
    let two_x = Polynomial::new(vec![q(0), q(2)]);
    let a = p.den().degree() as i64 / 2;
    let num = p.num();
    // Psi' = Q / D^{a+1}
    let qn = num.derivative().mul(&d).sub(&two_x.mul(num).scale(&q(a)));
    // Psi'' = S / D^{a+2}
    let sn = qn.derivative().mul(&d).sub(&two_x.mul(&qn).scale(&q(a + 1)));
    // (x^2 Psi'' + x Psi') / (4 D) = T / D^{a+3}
    let mut t = x.mul(&x).mul(&sn).add(&x.mul(&qn).mul(&d)).scale(&(q(1) / q(4)));
    let mut power = a + 3;
    loop {
        let (quo, rem) = t.div_rem(&d);
        if !rem.is_zero() || t.is_zero() {
            break;
        }
        t = quo;
        power -= 1;
    }
    RationalFn::new(t, d.pow(power as u32))
}

/// Psi_0 = x/(1+x^2), Psi_{k+1} = x^2/(4(1+x^2)) (Psi_k'' + Psi_k'/x), in lowest terms.
pub fn psi(k: usize) -> Result<Psi> {
    if k > PSI_MAX_ORDER {
        return Err(Error::domain(format!(
            "psi order {k} exceeds {PSI_MAX_ORDER}"
        )));
    }
    let mut t = table().lock().expect("psi table poisoned");
    while t.len() <= k {
        let next = step(t.last().unwrap());
        t.push(next);
    }
    Ok(t[k].clone())
}

/// Psi_k with its first two derivatives, converted to f64 coefficients.
#[derive(Clone, Debug)]
pub struct PsiF64 {
    pub value: RationalFn<f64>,
    pub d1: RationalFn<f64>,
    pub d2: RationalFn<f64>,
}

pub fn psi_f64(k: usize) -> Result<PsiF64> {
    static CACHE: OnceLock<Mutex<Vec<PsiF64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(p) = cache.lock().expect("psi cache poisoned").get(k) {
        return Ok(p.clone());
    }
    psi(k)?;
    let mut c = cache.lock().expect("psi cache poisoned");
    while c.len() <= k {
        let p = psi(c.len())?;
        let d1 = p.derivative().reduced();
        let d2 = d1.derivative().reduced();
        c.push(PsiF64 {
            value: p.to_f64(),
            d1: d1.to_f64(),
            d2: d2.to_f64(),
        });
    }
    Ok(c[k].clone())
}
