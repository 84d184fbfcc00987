//! Dense univariate polynomials and rational functions over a field.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Coefficient field for [`Polynomial`] and [`RationalFn`].
pub trait Field: Clone + PartialEq + Num + Neg<Output = Self> + fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
}

/// Fields with exact arithmetic, where Euclid's algorithm is meaningful.
pub trait ExactField: Field {}

impl Field for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl ExactField for BigRational {}

/// Coefficients in ascending order; trailing zeros are trimmed.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<T: Field> {
    coeffs: Vec<T>,
}

impl<T: Field> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| T::from_i64(v)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            c.push(a + b);
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(T::one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.last().unwrap().clone();
        let dd = d.degree();
        if r.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = r[i + dd].clone() / dl.clone();
            if !coef.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - coef.clone() * dc.clone();
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map(|c| c.to_f64())
    }
}

impl<T: ExactField> Polynomial<T> {
    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

/// num / den with den nonzero.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFn<T: Field> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Field> RationalFn<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RationalFn { num, den }
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        Self::new(p, Polynomial::constant(T::one()))
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn mul_poly(&self, p: &Polynomial<T>) -> Self {
        Self::new(self.num.mul(p), self.den.clone())
    }

    pub fn div_poly(&self, p: &Polynomial<T>) -> Self {
        Self::new(self.num.clone(), self.den.mul(p))
    }

    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den))
    }

    pub fn eval(&self, x: &T) -> T {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn to_f64(&self) -> RationalFn<f64> {
        RationalFn::new(self.num.to_f64(), self.den.to_f64())
    }

    /// Same function, compared by cross-multiplication.
    pub fn same_function(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl<T: ExactField> RationalFn<T> {
    /// Lowest terms with a monic denominator.
    pub fn reduced(&self) -> Self {
        let g = self.num.gcd(&self.den);
        let (n, _) = self.num.div_rem(&g);
        let (d, _) = self.den.div_rem(&g);
        let l = d.leading().cloned().unwrap_or_else(T::one);
        let inv = T::one() / l;
        Self::new(n.scale(&inv), d.scale(&inv))
    }
}

impl RationalFn<f64> {
    /// Value at x; for |x| > 1 both polynomials are evaluated in 1/x.
    pub fn eval_f64(&self, x: f64) -> f64 {
        if x.abs() <= 1.0 {
            return self.num.eval(&x) / self.den.eval(&x);
        }
        let y = 1.0 / x;
        let rev = |p: &Polynomial<f64>| {
            let mut acc = 0.0;
            for c in p.coeffs().iter() {
                acc = acc * y + c;
            }
            acc
        };
        let dn = self.num.degree() as i32;
        let dd = self.den.degree() as i32;
        if self.num.is_zero() {
            return 0.0;
        }
        rev(&self.num) / rev(&self.den) * x.powi(dn - dd)
    }
}

impl<T: Field + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Field + fmt::Display> fmt::Display for RationalFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}
