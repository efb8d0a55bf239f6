//! Truncated Laurent series in one local variable.
//!
//! A [`Jet`] stores `Σ_j c[j] t^(val + j)` for `0 ≤ j < c.len()`, known modulo
//! `O(t^(val + c.len()))`. Arithmetic tracks the truncation order so that a
//! coefficient is only ever read when it is actually determined.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

type C = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub val: i32,
    pub c: Vec<C>,
}

impl Jet {
    pub fn new(val: i32, c: Vec<C>) -> Self {
        Jet { val, c }
    }

    /// Constant `a + O(t^len)`.
    pub fn constant(a: C, len: usize) -> Self {
        let mut c = vec![C::zero(); len];
        if len > 0 {
            c[0] = a;
        }
        Jet { val: 0, c }
    }

    pub fn zero(val: i32, len: usize) -> Self {
        Jet { val, c: vec![C::zero(); len] }
    }

    /// The local variable `t` itself, known to `O(t^(len+1))`.
    pub fn t(len: usize) -> Self {
        let mut c = vec![C::zero(); len];
        if len > 0 {
            c[0] = C::new(1.0, 0.0);
        }
        Jet { val: 1, c }
    }

    /// `t^n`, known to `O(t^(n+len))`.
    pub fn monomial(n: i32, len: usize) -> Self {
        let mut j = Jet::t(len);
        j.val = n;
        j
    }

    /// Exponent at which the truncation error starts.
    pub fn order(&self) -> i32 {
        self.val + self.c.len() as i32
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i32) -> Result<C> {
        if e >= self.order() {
            return Err(Error::TruncationInsufficient(format!(
                "coefficient of t^{e} requested from a jet known to order {}",
                self.order()
            )));
        }
        if e < self.val {
            return Ok(C::zero());
        }
        Ok(self.c[(e - self.val) as usize])
    }

    pub fn residue(&self) -> Result<C> {
        self.coeff(-1)
    }

    /// Value at `t = 0` of a jet with no pole part.
    pub fn value(&self) -> Result<C> {
        for e in self.val..0.min(self.order()) {
            if self.coeff(e)? != C::zero() {
                return Err(Error::PoleHit("jet has a pole part".into()));
            }
        }
        self.coeff(0)
    }

    /// Rewrite with valuation `v` (may pad with zeros or drop known zeros).
    pub fn with_val(&self, v: i32) -> Self {
        let order = self.order();
        let len = (order - v).max(0) as usize;
        let c = (0..len).map(|j| self.coeff(v + j as i32).unwrap_or_default()).collect();
        Jet { val: v, c }
    }

    /// Keep at most `len` coefficients.
    pub fn truncate(mut self, len: usize) -> Self {
        self.c.truncate(len);
        self
    }

    /// Drop leading coefficients below `tol` times the largest coefficient.
    pub fn normalized(&self, tol: f64) -> Self {
        let scale = self.c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let skip = self.c.iter().take_while(|z| z.norm() <= tol * scale).count();
        Jet { val: self.val + skip as i32, c: self.c[skip..].to_vec() }
    }

    /// Like [`Self::normalized`] but measured against the first `window` coefficients,
    /// for jets whose tail grows geometrically.
    pub fn normalized_head(&self, tol: f64, window: usize) -> Self {
        let scale = self.c.iter().take(window).map(|z| z.norm()).fold(0.0, f64::max);
        let skip = self.c.iter().take_while(|z| z.norm() <= tol * scale).count();
        Jet { val: self.val + skip as i32, c: self.c[skip..].to_vec() }
    }

    pub fn scale(&self, a: C) -> Self {
        Jet { val: self.val, c: self.c.iter().map(|z| z * a).collect() }
    }

    pub fn add_const(&self, a: C) -> Self {
        self + &Jet::constant(a, (self.order().max(1)) as usize)
    }

    /// Multiplicative inverse. Leading coefficient must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let n = self.c.len();
        if n == 0 || self.c[0] == C::zero() {
            return Err(Error::PoleHit("inverse of a jet with vanishing leading term".into()));
        }
        let a0 = self.c[0];
        let mut out = vec![C::zero(); n];
        out[0] = a0.inv();
        for k in 1..n {
            let mut s = C::zero();
            for j in 1..=k {
                s += self.c[j] * out[k - j];
            }
            out[k] = -s * out[0];
        }
        Ok(Jet { val: -self.val, c: out })
    }

    pub fn div(&self, other: &Jet) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.inv()?.powi(-n);
        }
        let mut out = Jet::constant(C::new(1.0, 0.0), self.c.len());
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(out)
    }

    /// `d/dt`.
    pub fn deriv(&self) -> Self {
        let c = self.c.iter().enumerate().map(|(j, z)| z * (self.val + j as i32) as f64).collect();
        Jet { val: self.val - 1, c }
    }

    /// Primitive with zero constant term. Fails if a `t^{-1}` term is present.
    pub fn integrate(&self) -> Result<Self> {
        if self.val <= -1 && self.order() > -1 && self.coeff(-1)?.norm() > 0.0 {
            return Err(Error::Unsupported("primitive of a jet with a residue".into()));
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let e = self.val + j as i32;
                if e == -1 {
                    C::zero()
                } else {
                    z / (e + 1) as f64
                }
            })
            .collect();
        Ok(Jet { val: self.val + 1, c })
    }

    /// Evaluate the truncated series at a numeric `t`.
    pub fn eval(&self, t: C) -> C {
        let mut s = C::zero();
        for z in self.c.iter().rev() {
            s = s * t + z;
        }
        s * t.powi(self.val)
    }

    /// Horner evaluation of a polynomial `Σ p[i] X^i` at this jet.
    pub fn poly_eval(&self, p: &[C]) -> Self {
        let len = self.c.len().max(1);
        let mut acc = Jet::constant(C::zero(), len);
        for a in p.iter().rev() {
            acc = (&acc * self).add_const(*a);
        }
        acc
    }
}

fn sum(a: &Jet, b: &Jet, sign: f64) -> Jet {
    let val = a.val.min(b.val);
    let order = a.order().min(b.order());
    let len = (order - val).max(0) as usize;
    let c = (0..len)
        .map(|j| {
            let e = val + j as i32;
            let x = if e >= a.val { a.c[(e - a.val) as usize] } else { C::zero() };
            let y = if e >= b.val { b.c[(e - b.val) as usize] } else { C::zero() };
            x + y * sign
        })
        .collect();
    Jet { val, c }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        sum(self, o, 1.0)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        sum(self, o, -1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let len = self.c.len().min(o.c.len());
        let mut c = vec![C::zero(); len];
        for (i, a) in self.c.iter().take(len).enumerate() {
            if *a == C::zero() {
                continue;
            }
            for (j, b) in o.c.iter().take(len - i).enumerate() {
                c[i + j] += a * b;
            }
        }
        Jet { val: self.val + o.val, c }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(C::new(-1.0, 0.0))
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $f(self, o: Jet) -> Jet {
                (&self).$f(&o)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $f(self, o: &Jet) -> Jet {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_t = &Jet::constant(c(1.0), 8) - &Jet::t(8);
        let inv = one_minus_t.inv().unwrap();
        for e in 0..8 {
            assert!((inv.coeff(e).unwrap() - c(1.0)).norm() < 1e-15);
        }
        assert!(inv.coeff(8).is_err());
    }

    #[test]
    fn laurent_product_and_residue() {
        // (1/t^2)·(1 + 2t + 3t^2) has residue 2.
        let a = Jet::monomial(-2, 6);
        let b = Jet::new(0, vec![c(1.0), c(2.0), c(3.0), c(0.0), c(0.0), c(0.0)]);
        let p = &a * &b;
        assert_eq!(p.residue().unwrap(), c(2.0));
        assert_eq!(p.coeff(0).unwrap(), c(3.0));
    }

    #[test]
    fn derivative_and_primitive_round_trip() {
        let f = Jet::new(-3, (0..10).map(|k| C::new(k as f64 + 1.0, 0.5)).collect());
        let mut g = f.clone();
        g.c[2] = C::zero(); // no residue
        let back = g.integrate().unwrap().deriv();
        for e in -3..6 {
            assert!((back.coeff(e).unwrap() - g.coeff(e).unwrap()).norm() < 1e-13);
        }
        assert!(f.integrate().is_err());
    }

    #[test]
    fn power_matches_repeated_product() {
        let f = Jet::new(1, vec![c(2.0), c(-1.0), c(0.5), c(0.25), c(1.0)]);
        let p3 = f.powi(3).unwrap();
        let q3 = &(&f * &f) * &f;
        assert_eq!(p3.val, 3);
        for e in 3..8 {
            assert!((p3.coeff(e).unwrap() - q3.coeff(e).unwrap()).norm() < 1e-13);
        }
        let m2 = f.powi(-2).unwrap();
        let id = &m2 * &(&f * &f);
        assert!((id.coeff(0).unwrap() - c(1.0)).norm() < 1e-13);
        assert!(id.coeff(1).unwrap().norm() < 1e-13);
    }

    #[test]
    fn eval_matches_closed_form() {
        let t0 = C::new(0.1, 0.05);
        let f = (&Jet::constant(c(1.0), 20) - &Jet::t(20)).inv().unwrap();
        assert!((f.eval(t0) - (c(1.0) - t0).inv()).norm() < 1e-15);
    }
}
