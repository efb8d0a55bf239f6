//! Bernoulli polynomials, log-gamma, and the gamma-type functions
//! `Λ(w, η)`, Barnes `G` and `Υ(w, η)`.
//!
//! Every function returns a logarithm on the principal branch, analytic on
//! `ℂ ∖ ℝ≤0` in `w`. Exponentiation is left to the caller.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest Bernoulli index served by the public API.
pub const K_MAX: usize = 64;

/// `ζ'(−1) = 1/12 − log A` with `A` the Glaisher-Kinkelin constant.
pub const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_94;

const LN_2PI: f64 = 1.837_877_066_409_345_483_560_659_472_811_2;

const STIRLING_SHIFT: f64 = 15.0;
const LAMBDA_ASYM_RADIUS: f64 = 40.0;

struct Tables {
    numbers: Vec<BigRational>,
    poly_rational: Vec<Vec<BigRational>>,
    poly_f64: Vec<Vec<f64>>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let n_max = K_MAX + 2;
        let mut binom: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=n_max + 1 {
            let prev = &binom[n - 1];
            let mut row = vec![BigInt::one(); n + 1];
            for j in 1..n {
                row[j] = &prev[j - 1] + &prev[j];
            }
            binom.push(row);
        }
        let mut numbers: Vec<BigRational> = vec![BigRational::one()];
        for n in 1..=n_max {
            let mut s = BigRational::zero();
            for (j, b) in numbers.iter().enumerate() {
                s += BigRational::from_integer(binom[n + 1][j].clone()) * b;
            }
            numbers.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
        }
        // Coefficient of t^i in B_k(t) is C(k, i) B_{k−i}.
        let poly_rational: Vec<Vec<BigRational>> = (0..=n_max)
            .map(|k| (0..=k).map(|i| BigRational::from_integer(binom[k][i].clone()) * &numbers[k - i]).collect())
            .collect();
        let poly_f64 =
            poly_rational.iter().map(|c| c.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        Tables { numbers, poly_rational, poly_f64 }
    })
}

/// Exact Bernoulli number `B_n` with `B_1 = −1/2`.
pub fn bernoulli_number(n: usize) -> Result<BigRational> {
    check_order(n)?;
    Ok(tables().numbers[n].clone())
}

/// Exact coefficients of `B_k(t)`, lowest degree first.
pub fn bernoulli_poly_coeffs(k: usize) -> Result<Vec<BigRational>> {
    check_order(k)?;
    Ok(tables().poly_rational[k].clone())
}

/// `B_k(t)` for complex `t`, from the generating series `w e^{wt}/(e^w − 1)`.
pub fn bernoulli_poly(k: usize, t: Complex64) -> Result<Complex64> {
    check_order(k)?;
    Ok(bpoly(k, t))
}

pub(crate) fn bpoly(k: usize, t: Complex64) -> Complex64 {
    let c = &tables().poly_f64[k];
    let mut acc = Complex64::zero();
    for &a in c.iter().rev() {
        acc = acc * t + a;
    }
    acc
}

pub(crate) fn bnum(n: usize) -> f64 {
    tables().poly_f64[n][0]
}

fn check_order(k: usize) -> Result<()> {
    if k > K_MAX + 2 {
        Err(Error::OrderTooLarge { k, max: K_MAX })
    } else {
        Ok(())
    }
}

fn on_cut(w: Complex64) -> bool {
    w.im == 0.0 && w.re <= 0.0
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-13 && z.re < 0.5 && (z.re - z.re.round()).abs() < 1e-13
}

/// Principal `log Γ(z)`, analytic on `ℂ ∖ ℝ≤0`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleHit(format!("Γ pole at {z}")));
    }
    Ok(lgamma(z))
}

pub(crate) fn lgamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::zero();
    let mut zz = z;
    if zz.re < STIRLING_SHIFT {
        let n = (STIRLING_SHIFT - zz.re).ceil() as usize;
        for j in 0..n {
            shift += (z + j as f64).ln();
        }
        zz = z + n as f64;
    }
    stirling(zz) - shift
}

fn stirling(z: Complex64) -> Complex64 {
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * LN_2PI;
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut p = inv;
    for k in 1..=15 {
        s += p * (bnum(2 * k) / ((2 * k) * (2 * k - 1)) as f64);
        p *= inv2;
    }
    s
}

/// `log Λ(w, η)` where `Λ(w, η) = e^w Γ(w + η) / (√(2π) w^{w+η−1/2})`.
pub fn log_lambda(w: Complex64, eta: Complex64) -> Result<Complex64> {
    if on_cut(w) {
        return Err(Error::BranchCut(format!("Λ at w = {w}")));
    }
    if is_nonpositive_integer(w + eta) {
        return Err(Error::PoleHit(format!("Λ at w + η = {}", w + eta)));
    }
    Ok(llambda(w, eta))
}

pub(crate) fn llambda(w: Complex64, eta: Complex64) -> Complex64 {
    if w.norm() >= LAMBDA_ASYM_RADIUS && w.arg().abs() <= 0.75 * PI && eta.norm() <= 0.1 * w.norm() {
        let t = Complex64::new(1.0, 0.0) - eta;
        let inv = w.inv();
        let mut p = inv;
        let mut s = Complex64::zero();
        for k in 1..=K_MAX {
            let term = p * bpoly(k + 1, t) / ((k * (k + 1)) as f64);
            s += term;
            if term.norm() < 1e-18 * s.norm().max(1e-300) {
                break;
            }
            p *= inv;
        }
        s
    } else {
        w + lgamma(w + eta) - 0.5 * LN_2PI - (w + eta - 0.5) * w.ln()
    }
}

/// Principal `log G(w)` for the Barnes G-function, `G(w + 1) = Γ(w) G(w)`.
pub fn log_barnes_g(w: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(w) {
        return Err(Error::PoleHit(format!("G zero at {w}")));
    }
    Ok(lbarnes(w))
}

pub(crate) fn lbarnes(w: Complex64) -> Complex64 {
    let mut shift = Complex64::zero();
    let mut ww = w;
    if ww.re < STIRLING_SHIFT + 1.0 {
        let n = (STIRLING_SHIFT + 1.0 - ww.re).ceil() as usize;
        for j in 0..n {
            shift += lgamma(w + j as f64);
        }
        ww = w + n as f64;
    }
    let z = ww - 1.0;
    let lz = z.ln();
    let mut s = 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * LN_2PI - lz / 12.0 + ZETA_PRIME_MINUS_ONE;
    let inv2 = (z * z).inv();
    let mut p = inv2;
    for k in 1..=14 {
        s += p * (bnum(2 * k + 2) / (4 * k * (k + 1)) as f64);
        p *= inv2;
    }
    s - shift
}

/// `log Υ(w, η)` where
/// `Υ(w, η) = e^{−ζ'(−1)} e^{3w²/4} G(w + η + 1) / ((2π)^{w/2} w^{w²/2} Γ(w + η)^η)`.
pub fn log_upsilon(w: Complex64, eta: Complex64) -> Result<Complex64> {
    if on_cut(w) {
        return Err(Error::BranchCut(format!("Υ at w = {w}")));
    }
    if is_nonpositive_integer(w + eta + 1.0) {
        return Err(Error::PoleHit(format!("Υ at w + η + 1 = {}", w + eta + 1.0)));
    }
    Ok(lupsilon(w, eta))
}

pub(crate) fn lupsilon(w: Complex64, eta: Complex64) -> Complex64 {
    let gamma_part = if eta == Complex64::zero() { Complex64::zero() } else { eta * lgamma(w + eta) };
    -ZETA_PRIME_MINUS_ONE + 0.75 * w * w + lbarnes(w + eta + 1.0) - 0.5 * w * LN_2PI - 0.5 * w * w * w.ln() - gamma_part
}

/// Truncated asymptotic series `c_log log w + Σ_k c_k w^{−k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    pub log_coeff: Complex64,
    /// `coeffs[j]` multiplies `w^{−(j + 1)}`.
    pub coeffs: Vec<Complex64>,
}

impl AsymptoticSeries {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let mut s = if self.log_coeff == Complex64::zero() { Complex64::zero() } else { self.log_coeff * w.ln() };
        for (j, c) in self.coeffs.iter().enumerate() {
            s += c * w.powi(-(j as i32 + 1));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

/// Asymptotic series of `log Λ(w, η)` to order `K`.
pub fn lambda_series(eta: Complex64, k_max: usize) -> Result<AsymptoticSeries> {
    check_order(k_max + 1)?;
    let t = Complex64::new(1.0, 0.0) - eta;
    let coeffs = (1..=k_max).map(|k| bpoly(k + 1, t) / ((k * (k + 1)) as f64)).collect();
    Ok(AsymptoticSeries { log_coeff: Complex64::zero(), coeffs })
}

/// Asymptotic series of `log Υ(w, η)`; the power sum runs over `k = 2..=K`.
pub fn upsilon_series(eta: Complex64, k_max: usize) -> Result<AsymptoticSeries> {
    check_order(k_max + 1)?;
    let t = Complex64::new(1.0, 0.0) - eta;
    let coeffs =
        (2..=k_max.max(1)).filter(|_| k_max >= 2).map(|k| bpoly(k + 1, t) / (((k - 1) * (k + 1)) as f64)).collect();
    Ok(AsymptoticSeries { log_coeff: -0.5 * bpoly(2, eta), coeffs })
}

/// Partial sum `Σ_{k=1}^{K} B_{k+1}(1−η)/(k(k+1)) w^{−k}`.
pub fn lambda_asym(w: Complex64, eta: Complex64, k_max: usize) -> Result<Complex64> {
    Ok(lambda_series(eta, k_max)?.eval(w))
}

/// Partial sum `−B_2(η)/2 log w + Σ_{k=2}^{K} B_{k+1}(1−η)/((k−1)(k+1)) w^{1−k}`.
pub fn upsilon_asym(w: Complex64, eta: Complex64, k_max: usize) -> Result<Complex64> {
    Ok(upsilon_series(eta, k_max)?.eval(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bernoulli_small_values() {
        assert!((bernoulli_poly(2, c(0.5, 0.0)).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-16);
        assert!(bernoulli_poly(3, c(0.5, 0.0)).unwrap().norm() < 1e-16);
        assert_eq!(bernoulli_poly(0, c(3.0, 1.0)).unwrap(), c(1.0, 0.0));
        let b12 = bernoulli_number(12).unwrap();
        assert_eq!(b12, BigRational::new(BigInt::from(-691), BigInt::from(2730)));
        assert!(bernoulli_poly(K_MAX + 3, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn bernoulli_reflection_and_difference() {
        // B_k(1 − t) = (−1)^k B_k(t) and B_k(t + 1) − B_k(t) = k t^{k−1}.
        let t = c(0.3, -0.7);
        for k in 1..30 {
            let a = bpoly(k, c(1.0, 0.0) - t);
            let b = bpoly(k, t) * if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()), "k={k}");
            let d = bpoly(k, t + 1.0) - bpoly(k, t) - (k as f64) * t.powi(k as i32 - 1);
            assert!(d.norm() < 1e-9 * (1.0 + bpoly(k, t).norm()), "k={k}");
        }
    }

    #[test]
    fn gamma_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((log_gamma(c(5.0, 0.0)).unwrap() - c(24f64.ln(), 0.0)).norm() < 1e-14);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(log_gamma(c(-2.0, 0.0)).is_err());
    }

    #[test]
    fn gamma_reflection() {
        let mut z = c(0.13, 0.41);
        for _ in 0..100 {
            let lhs = lgamma(z) + lgamma(c(1.0, 0.0) - z);
            let rhs = (c(PI, 0.0) / (PI * z).sin()).ln();
            let d = lhs - rhs;
            let k = (d.im / (2.0 * PI)).round();
            assert!(d.re.abs() < 1e-11 && (d.im - 2.0 * PI * k).abs() < 1e-11, "z={z}");
            z = c((z.re * 7.3 + 0.31) % 6.0 - 3.0, (z.im * 3.1 + 0.77) % 8.0 - 4.0);
        }
    }

    #[test]
    fn lambda_identities() {
        let w = c(2.3, 0.7);
        let a = log_lambda(w, c(0.0, 0.0)).unwrap();
        let b = log_lambda(w, c(1.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-14);
        let eta = c(0.3, 0.2);
        let lhs = llambda(w, eta + 1.0);
        let rhs = llambda(w, eta) + (c(1.0, 0.0) + eta / w).ln();
        assert!((lhs - rhs).norm() < 1e-13);
        assert!((llambda(c(10.0, 0.0), c(0.0, 0.0)).re - 1.0 / 120.0).abs() < 1e-4);
        assert!(llambda(c(1e6, 0.0), c(0.0, 0.0)).norm() < 1e-6);
        assert!(log_lambda(c(-1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(log_lambda(c(-1.5, 1.0), c(-0.5, -1.0)).is_err());
    }

    #[test]
    fn lambda_regimes_agree() {
        // Direct formula versus asymptotic sum on both sides of the switch radius.
        for &(r, a) in &[(41.0, 0.3), (45.0, 2.0), (60.0, -2.2)] {
            let w = Complex64::from_polar(r, a);
            let eta = c(0.35, 0.1);
            let direct = w + lgamma(w + eta) - 0.5 * LN_2PI - (w + eta - 0.5) * w.ln();
            assert!((direct - llambda(w, eta)).norm() < 1e-12);
        }
    }

    #[test]
    fn barnes_g_values() {
        assert!(log_barnes_g(c(1.0, 0.0)).unwrap().norm() < 1e-13);
        assert!(log_barnes_g(c(2.0, 0.0)).unwrap().norm() < 1e-13);
        assert!(log_barnes_g(c(3.0, 0.0)).unwrap().norm() < 1e-13);
        assert!((log_barnes_g(c(4.0, 0.0)).unwrap() - c(2f64.ln(), 0.0)).norm() < 1e-13);
        assert!((lbarnes(c(7.0, 0.0)) - c(34560f64.ln(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn barnes_g_recursion() {
        for i in 0..20 {
            let w = c(-3.0 + 0.7 * i as f64, 0.5 + 0.3 * (i % 5) as f64);
            let d = lbarnes(w + 1.0) - lgamma(w) - lbarnes(w);
            let k = (d.im / (2.0 * PI)).round();
            assert!(d.re.abs() < 1e-11 && (d.im - 2.0 * PI * k).abs() < 1e-11, "w={w}");
        }
    }

    #[test]
    fn upsilon_derivative_relation() {
        let w = c(3.0, 1.0);
        let eta = c(0.2, 0.0);
        let h = 1e-5;
        let du = (lupsilon(w + h, eta) - lupsilon(w - h, eta)) / (2.0 * h);
        let dl = (llambda(w + h, eta) - llambda(w - h, eta)) / (2.0 * h);
        assert!((du - w * dl).norm() < 1e-8);
    }

    #[test]
    fn upsilon_asymptotics() {
        let w = c(50.0, 0.0);
        let eta = c(0.3, 0.0);
        let d = lupsilon(w, eta) - upsilon_asym(w, eta, 6).unwrap();
        assert!(d.norm() < 1e-9, "{d}");
        assert_eq!(upsilon_asym(w, eta, 1).unwrap(), -0.5 * bpoly(2, eta) * w.ln());
    }

    #[test]
    fn lambda_asym_remainder() {
        assert_eq!(lambda_asym(c(3.0, 0.0), c(0.2, 0.0), 0).unwrap(), Complex64::zero());
        let w = c(20.0, 0.0);
        let eta = c(0.3, 0.0);
        let exact = w + lgamma(w + eta) - 0.5 * LN_2PI - (w + eta - 0.5) * w.ln();
        let term9 = bpoly(10, c(0.7, 0.0)) / 90.0 * w.powi(-9);
        assert!((exact - lambda_asym(w, eta, 8).unwrap()).norm() < term9.norm());
        let s = lambda_asym(w, c(0.5, 0.0), 9).unwrap();
        assert!(s.im.abs() < 1e-18);
    }

    #[test]
    fn lambda_arc_matching() {
        for i in 0..=30 {
            let a = -0.75 * PI + 1.5 * PI * i as f64 / 30.0;
            let w = Complex64::from_polar(30.0, a);
            let eta = c(0.25, 0.0);
            let exact = w + lgamma(w + eta) - 0.5 * LN_2PI - (w + eta - 0.5) * w.ln();
            let t11 = bpoly(12, c(0.75, 0.0)) / 132.0 * w.powi(-11);
            let d = exact - lambda_asym(w, eta, 10).unwrap();
            // 1e-13 is the double-precision floor of the direct formula at |w| = 30.
            assert!(d.norm() <= 2.0 * t11.norm() + 1e-13, "a={a} d={d}");
        }
    }
}
