//! Formal series in `ħ`: Voros coefficients, free energies and the Voros potential.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::bps::{bps_spectrum, ActiveClass, BpsStructure};
use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};
use crate::lattice::{central_charge, nu_functional, pairing, LatticeElement};
use crate::special::{bernoulli_poly, bnum, K_MAX};

type C = Complex64;

const TWO_PI_I: C = C::new(0.0, 2.0 * PI);

/// `Σ_{k=k_min}^{k_max} c_k ħ^k + O(ħ^{k_max+1})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalSeries {
    pub k_min: i32,
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: Vec<C>,
}

fn ser_coeffs<S: serde::Serializer>(c: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for z in c {
        seq.serialize_element(&crate::json::CJson::from(*z))?;
    }
    seq.end()
}

impl FormalSeries {
    pub fn new(k_min: i32, coeffs: Vec<C>) -> Self {
        FormalSeries { k_min, coeffs }
    }

    pub fn zero(k_min: i32, k_max: i32) -> Self {
        FormalSeries { k_min, coeffs: vec![C::default(); (k_max - k_min + 1).max(0) as usize] }
    }

    pub fn constant(a: C, k_max: i32) -> Self {
        let mut s = Self::zero(0, k_max);
        if let Some(c) = s.coeffs.first_mut() {
            *c = a;
        }
        s
    }

    pub fn from_fn(k_min: i32, k_max: i32, f: impl Fn(i32) -> C) -> Self {
        FormalSeries { k_min, coeffs: (k_min..=k_max).map(f).collect() }
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.coeffs.len() as i32 - 1
    }

    /// Coefficient of `ħ^k`; zero below `k_min`, `TruncationInsufficient` above `k_max`.
    pub fn coeff(&self, k: i32) -> Result<C> {
        if k > self.k_max() {
            return Err(Error::TruncationInsufficient(format!("ħ^{k} beyond order {}", self.k_max())));
        }
        Ok(if k < self.k_min { C::default() } else { self.coeffs[(k - self.k_min) as usize] })
    }

    fn get(&self, k: i32) -> C {
        self.coeff(k).unwrap_or_default()
    }

    pub fn scale(&self, a: C) -> Self {
        FormalSeries { k_min: self.k_min, coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// `∂_ħ`.
    pub fn deriv(&self) -> Self {
        FormalSeries::from_fn(self.k_min - 1, self.k_max() - 1, |k| self.get(k + 1) * (k + 1) as f64)
    }

    /// `exp` of a series without negative powers.
    pub fn exp(&self) -> Result<Self> {
        if self.k_min < 0 && self.coeffs.iter().take((-self.k_min) as usize).any(|c| c.norm() > 0.0) {
            return Err(Error::Unsupported("exp of a series with a pole in ħ".into()));
        }
        let n = self.k_max();
        if n < 0 {
            return Ok(FormalSeries::zero(0, -1));
        }
        // e' = a' e with e_0 = exp(a_0).
        let a = |k: i32| self.get(k);
        let mut e = vec![C::default(); n as usize + 1];
        e[0] = a(0).exp();
        for j in 1..=n as usize {
            let mut s = C::default();
            for i in 1..=j {
                s += a(i as i32) * i as f64 * e[j - i];
            }
            e[j] = s / j as f64;
        }
        Ok(FormalSeries { k_min: 0, coeffs: e })
    }

    /// Partial sum at a numeric `ħ`.
    pub fn eval(&self, hbar: C) -> C {
        self.coeffs.iter().enumerate().map(|(j, c)| c * hbar.powi(self.k_min + j as i32)).sum()
    }

    pub fn truncate(&self, k_max: i32) -> Self {
        FormalSeries::from_fn(self.k_min, k_max.min(self.k_max()), |k| self.get(k))
    }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, o: &FormalSeries) -> FormalSeries {
        let k_max = self.k_max().min(o.k_max());
        FormalSeries::from_fn(self.k_min.min(o.k_min), k_max, |k| self.get(k) + o.get(k))
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, o: &FormalSeries) -> FormalSeries {
        self + &-o
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        self.scale(C::new(-1.0, 0.0))
    }
}

impl Mul for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, o: &FormalSeries) -> FormalSeries {
        let k_min = self.k_min + o.k_min;
        let k_max = (self.k_min + o.k_max()).min(o.k_min + self.k_max());
        FormalSeries::from_fn(k_min, k_max, |k| (self.k_min..=self.k_max()).map(|i| self.get(i) * o.get(k - i)).sum())
    }
}

/// `𝓑_k(γ)`: `B_k((1+ν)/2)` for `Ω ≠ −1`, the average of `B_k(ν/2)` and `B_k(1+ν/2)` for `Ω = −1`.
pub fn calb(k: usize, nu: C, omega: i64) -> Result<C> {
    if omega == -1 {
        Ok(0.5 * (bernoulli_poly(k, 0.5 * nu)? + bernoulli_poly(k, 1.0 + 0.5 * nu)?))
    } else {
        bernoulli_poly(k, 0.5 * (1.0 + nu))
    }
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Unsupported("Voros coefficients start at order 1".into()));
    }
    if k > K_MAX {
        return Err(Error::OrderTooLarge { k, max: K_MAX });
    }
    Ok(())
}

fn require_voros(curve: &SpectralCurve) -> Result<()> {
    if matches!(curve.label, CurveLabel::Ai | CurveLabel::DBes) {
        return Err(Error::Unsupported(format!("no Voros coefficients for {}", curve.label)));
    }
    Ok(())
}

/// `V_γ = Z(γ)/ħ − πi ν(γ)` for a cycle.
pub fn voros_cycle(curve: &SpectralCurve, g: &LatticeElement) -> Result<FormalSeries> {
    let z = central_charge(curve, g)?;
    let nu = nu_functional(curve, g)?;
    Ok(FormalSeries::new(-1, vec![z, C::new(0.0, -PI) * nu]))
}

fn path_coeff(s: &BpsStructure, half: &[ActiveClass], beta: &LatticeElement, k: usize) -> Result<C> {
    check_order(k)?;
    let mut sum = C::default();
    for a in half {
        let p = pairing(beta, &a.gamma);
        if p == 0 {
            continue;
        }
        let nu = nu_functional(&s.curve, &a.gamma)?;
        let b = calb(k + 1, nu, a.omega)?;
        sum += (a.omega * p) as f64 * b / (k * (k + 1)) as f64 * (TWO_PI_I / a.z).powi(k as i32);
    }
    Ok(sum)
}

/// `V_{β,k}` for a path class `β`, summed over the default half-plane.
pub fn voros_path_coeff(curve: &SpectralCurve, beta: &LatticeElement, k: usize) -> Result<C> {
    require_voros(curve)?;
    if !beta.is_path() {
        return Err(Error::UnsupportedClass(format!("{beta} is not a path class")));
    }
    beta.supported_by(curve.label)?;
    let s = bps_spectrum(curve);
    path_coeff(&s, &s.default_half(), beta, k)
}

/// As [`voros_path_coeff`] with the half-plane to the left of `ϑ`.
pub fn voros_path_coeff_at(curve: &SpectralCurve, beta: &LatticeElement, k: usize, theta: f64) -> Result<C> {
    require_voros(curve)?;
    let s = bps_spectrum(curve);
    let half = s.left_of(theta).map_err(|_| Error::BoundaryIsBps(theta))?;
    path_coeff(&s, &half, beta, k)
}

/// `V_μ` to order `k_max` for any `μ ∈ Γ ⊕ Γ*`.
pub fn voros_series(curve: &SpectralCurve, mu: &LatticeElement, k_max: usize) -> Result<FormalSeries> {
    require_voros(curve)?;
    mu.supported_by(curve.label)?;
    let cyc = voros_cycle(curve, &mu.cycle_part())?;
    let s = bps_spectrum(curve);
    let half = s.default_half();
    let path = mu.path_part();
    let mut coeffs = vec![cyc.coeffs[0], cyc.coeffs[1]];
    for k in 1..=k_max {
        coeffs.push(path_coeff(&s, &half, &path, k)?);
    }
    Ok(FormalSeries::new(-1, coeffs))
}

fn half_at(s: &BpsStructure, theta: f64) -> Result<Vec<ActiveClass>> {
    s.left_of(theta).map_err(|_| Error::BoundaryIsBps(theta))
}

/// `F_g`. For `g ≥ 2` the result does not depend on `ϑ`; for `g = 0` it is fixed up to a
/// quadratic polynomial in the masses and for `g = 1` up to a constant, both on the
/// principal branch of `log(Z/2πi)` over the half-plane left of `ϑ`.
pub fn free_energy(curve: &SpectralCurve, g: usize, theta: f64) -> Result<C> {
    let s = bps_spectrum(curve);
    let half = half_at(&s, theta)?;
    let mut sum = C::default();
    for a in &half {
        let w = a.z / TWO_PI_I;
        let om = a.omega as f64;
        sum += match g {
            0 => om * 0.5 * w * w * w.ln(),
            1 => -om / 12.0 * w.ln(),
            _ => {
                if 2 * g > K_MAX {
                    return Err(Error::OrderTooLarge { k: 2 * g, max: K_MAX });
                }
                om * bnum(2 * g) / (2 * g * (2 * g - 2)) as f64 * w.powi(2 - 2 * g as i32)
            }
        };
    }
    Ok(sum)
}

/// `F_1 = −1/12 Σ Ω log(Z/(2πiħ))` over `Z ∈ iℍ_ℓ`, `ℓ` the ray through `ħ`.
pub fn free_energy_1_hbar(curve: &SpectralCurve, hbar: C) -> Result<C> {
    let s = bps_spectrum(curve);
    let half = s.left_of(hbar.arg())?;
    Ok(half.iter().map(|a| -(a.omega as f64) / 12.0 * (a.z / (TWO_PI_I * hbar)).ln()).sum())
}

/// `Σ_{g=1}^{g_max} ħ^{2g−2} F_g` with the ħ-normalized `F_1`.
pub fn log_tau_tr_partial(curve: &SpectralCurve, hbar: C, g_max: usize) -> Result<C> {
    let mut s = free_energy_1_hbar(curve, hbar)?;
    for g in 2..=g_max {
        s += hbar.powi(2 * g as i32 - 2) * free_energy(curve, g, hbar.arg())?;
    }
    Ok(s)
}

/// Voros potential coefficient `φ_k` over the half-plane left of `ϑ`. Only `φ_1`
/// depends on the choice.
pub fn voros_potential_coeff_at(curve: &SpectralCurve, k: usize, theta: f64) -> Result<C> {
    check_order(k)?;
    let s = bps_spectrum(curve);
    let half = half_at(&s, theta)?;
    let mut sum = C::default();
    for a in &half {
        let nu = nu_functional(curve, &a.gamma)?;
        let b = calb(k + 1, nu, a.omega)?;
        let om = a.omega as f64;
        sum += if k == 1 {
            0.5 * b * om * (a.z / TWO_PI_I).ln()
        } else {
            -b * om / ((k - 1) * k * (k + 1)) as f64 * (TWO_PI_I / a.z).powi(k as i32 - 1)
        };
    }
    Ok(sum)
}

pub fn voros_potential_coeff(curve: &SpectralCurve, k: usize) -> Result<C> {
    voros_potential_coeff_at(curve, k, bps_spectrum(curve).default_theta())
}

/// `ħ^k` coefficient of `F(m + (1−ν)ħ/2) − F(m − (1+ν)ħ/2)` for the Weber free energy
/// `F_0 = ½m² log m`, `F_1 = −1/12 log m`, `F_g = B_{2g}/(2g(2g−2)) m^{2−2g}`.
pub fn weber_difference_oracle(k: usize, m: C, nu: C) -> Result<C> {
    check_order(k)?;
    let ap = 0.5 * (1.0 - nu);
    let am = 0.5 * (-1.0 - nu);
    // j-th derivative of F_g at m, divided by j!.
    let taylor = |g: usize, j: usize| -> C {
        match g {
            0 => {
                // F_0^{(j)} = (−1)^{j−1} (j−3)! m^{2−j} for j ≥ 3.
                let sign = if (j - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * fact(j - 3) / fact(j) * m.powi(2 - j as i32)
            }
            1 => {
                let sign = if (j - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                -sign / 12.0 * fact(j - 1) / fact(j) * m.powi(-(j as i32))
            }
            _ => {
                let p = 2 - 2 * g as i32;
                let falling: f64 = (0..j as i32).map(|i| (p - i) as f64).product();
                bnum(2 * g) / (2 * g * (2 * g - 2)) as f64 * falling / fact(j) * m.powi(p - j as i32)
            }
        }
    };
    let mut sum = C::default();
    for g in 0..=(k + 2) / 2 {
        let j = k as i64 + 2 - 2 * g as i64;
        if j <= 0 {
            continue;
        }
        let j = j as usize;
        sum += taylor(g, j) * (ap.powi(j as i32) - am.powi(j as i32));
    }
    Ok(sum)
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Coefficients `V_{β_s,1..=k_max}` for every even pole, keyed by pole.
pub fn voros_table(curve: &SpectralCurve, k_max: usize) -> Result<Vec<(Pole, Vec<C>)>> {
    curve
        .label
        .even_poles()
        .iter()
        .map(|&p| {
            let b = LatticeElement::beta(p);
            Ok((p, (1..=k_max).map(|k| voros_path_coeff(curve, &b, k)).collect::<Result<Vec<_>>>()?))
        })
        .collect()
}
