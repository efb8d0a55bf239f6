//! Borel sums of path Voros symbols: the closed form as a product of `Λ` factors,
//! and a Laplace-integral route for the Weber and Bessel transforms.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::bps::{angle_diff, bps_spectrum, ActiveClass, BpsStructure};
use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};
use crate::lattice::{nu_functional, pairing, LatticeElement};
use crate::quad::{integrate, QuadOptions};
use crate::special::{bpoly, log_lambda};

type C = Complex64;

const TWO_PI_I: C = C::new(0.0, 2.0 * PI);

/// A non-BPS ray together with the BPS structure it is measured against.
#[derive(Clone, Debug)]
pub struct BorelContext {
    pub theta: f64,
    pub structure: BpsStructure,
}

impl BorelContext {
    pub fn new(curve: &SpectralCurve, theta: f64) -> Result<Self> {
        let structure = bps_spectrum(curve);
        structure.check_non_bps(theta)?;
        structure.check_non_bps(theta + PI)?;
        Ok(BorelContext { theta, structure })
    }

    /// Fails unless `|arg ħ − ϑ| < π/2`.
    pub fn check_hbar(&self, hbar: C) -> Result<()> {
        if hbar.norm() == 0.0 || angle_diff(hbar.arg(), self.theta).abs() >= FRAC_PI_2 {
            return Err(Error::Config(format!("ħ = {hbar} is outside the half-plane of ϑ = {}", self.theta)));
        }
        Ok(())
    }

    /// `Σ Ω⟨μ,γ⟩·c·log Λ(w, η)` over active `γ` with `Z(γ) ∈ iℍ_ℓ`, `w = Z(γ)/(2πiħ)`,
    /// where `etas(γ, ν(γ))` lists the pairs `(η, c)`.
    #[allow(clippy::type_complexity)]
    pub fn log_lambda_product(
        &self,
        mu: &LatticeElement,
        hbar: C,
        etas: &dyn Fn(&ActiveClass, C) -> Vec<(C, f64)>,
    ) -> Result<C> {
        self.check_hbar(hbar)?;
        let mut s = C::default();
        for a in self.structure.left_of(self.theta)? {
            let p = pairing(mu, &a.gamma);
            if p == 0 {
                continue;
            }
            let w = a.z / (TWO_PI_I * hbar);
            let nu = nu_functional(&self.structure.curve, &a.gamma)?;
            for (eta, c) in etas(&a, nu) {
                s += (a.omega * p) as f64 * c * log_lambda(w, eta)?;
            }
        }
        Ok(s)
    }

    /// `log 𝒮_ℓ e^{V_μ}` restricted to the path part of `μ`.
    pub fn log_borel_sum(&self, mu: &LatticeElement, hbar: C) -> Result<C> {
        self.log_lambda_product(mu, hbar, &|a, nu| voros_etas(nu, a.omega))
    }
}

/// `Λ` factors of the Voros product: `Λ(w, (1−ν)/2)` for `Ω ≠ −1`, and
/// `[Λ(w, 1−ν/2) Λ(w, −ν/2)]^{1/2}` for `Ω = −1`.
pub fn voros_etas(nu: C, omega: i64) -> Vec<(C, f64)> {
    if omega == -1 {
        vec![(1.0 - 0.5 * nu, 0.5), (-0.5 * nu, 0.5)]
    } else {
        vec![(0.5 * (1.0 - nu), 1.0)]
    }
}

/// `𝒮_ℓ e^{V_β}(ħ)` as a product of `Λ` factors.
pub fn borel_sum_path_symbol(curve: &SpectralCurve, beta: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    if !beta.is_path() {
        return Err(Error::UnsupportedClass(format!("{beta} is not a path class")));
    }
    beta.supported_by(curve.label)?;
    let ctx = BorelContext::new(curve, theta)?;
    Ok(ctx.log_borel_sum(beta, hbar)?.exp())
}

/// `log 𝒮_ℓ e^{V_β}(ħ)`, the analytic continuation of the Borel sum `𝒮_ℓ V_β`.
pub fn log_borel_sum_path(curve: &SpectralCurve, beta: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    beta.supported_by(curve.label)?;
    BorelContext::new(curve, theta)?.log_borel_sum(beta, hbar)
}

/// `G(w, t)/w` with `G = e^{tw}/(e^w − 1) − 1/w − t + 1/2`, summed as a Bernoulli
/// series near `w = 0` and evaluated in overflow-safe form elsewhere.
fn binet_kernel(w: C, t: C) -> Result<C> {
    if w.norm() < 0.5 {
        let mut s = C::default();
        let mut p = C::new(1.0, 0.0);
        let mut fact = 2.0;
        for n in 2..40 {
            s += bpoly(n, t) * p / fact;
            p *= w;
            fact *= (n + 1) as f64;
        }
        return Ok(s);
    }
    let denom = if w.re >= 0.0 { C::new(1.0, 0.0) - (-w).exp() } else { w.exp() - 1.0 };
    if denom.norm() < 1e-12 {
        return Err(Error::PoleHit(format!("Borel transform pole at w = {w}")));
    }
    let main = if w.re >= 0.0 { ((t - 1.0) * w).exp() / denom } else { (t * w).exp() / denom };
    Ok((main - w.inv() - t + 0.5) / w)
}

/// Closed-form Borel transform `V̂_β(ζ) = Σ V_{β,k} ζ^{k−1}/(k−1)!` for Weber `β_∞`
/// and Bessel `β_0` (and their integer multiples).
pub fn borel_transform(curve: &SpectralCurve, beta: &LatticeElement, zeta: C) -> Result<C> {
    let (pole, scale) = match curve.label {
        CurveLabel::Web => (Pole::Inf, beta.path[2]),
        CurveLabel::Bes => (Pole::Zero, beta.path[0]),
        _ => return Err(Error::Unsupported(format!("no closed Borel transform for {}", curve.label))),
    };
    if !beta.is_path() || *beta != LatticeElement::beta(pole) * scale {
        return Err(Error::UnsupportedClass(format!("{beta}")));
    }
    let m = curve.mass(pole);
    let nu = curve.nu(pole);
    let v = match curve.label {
        CurveLabel::Web => {
            // V̂ = G(ζ/m, (1+ν)/2)/ζ, where G(w)/ζ = (G(w)/w)/m.
            let w = zeta / m;
            binet_kernel(w, 0.5 * (1.0 + nu))? / m
        }
        _ => {
            let w = zeta / (2.0 * m);
            -(binet_kernel(w, nu)? + binet_kernel(w, 1.0 + nu)?) / (2.0 * m)
        }
    };
    Ok(v * scale as f64)
}

/// Numerical `∫_0^{∞e^{iϑ}} f(ζ) e^{−ζ/ħ} dζ`, targeting 1e-11 absolute.
pub fn laplace_quadrature(f: &dyn Fn(C) -> Result<C>, theta: f64, hbar: C) -> Result<C> {
    let dir = C::from_polar(1.0, theta);
    let rate = (dir / hbar).re;
    if rate <= 0.0 {
        return Err(Error::Config(format!("Laplace integral diverges for ϑ = {theta}, ħ = {hbar}")));
    }
    // e^{−rate·T} < 1e-20 with room for algebraic growth of f.
    let t_max = 50.0 / rate;
    let mut failure = None;
    let integrand = |t: f64| -> C {
        match f(dir * t) {
            Ok(v) => v * (-(dir * t) / hbar).exp() * dir,
            Err(e) => {
                failure.get_or_insert(e);
                C::new(f64::NAN, 0.0)
            }
        }
    };
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_panels: 20_000, initial: 32 };
    let res = integrate(integrand, 0.0, t_max, opts);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(res?.0)
}

/// `𝒮_ℓ V_β(ħ)` by numerical Laplace integration of the closed transform (Weber/Bessel).
pub fn borel_sum_quadrature(curve: &SpectralCurve, beta: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    let ctx = BorelContext::new(curve, theta)?;
    ctx.check_hbar(hbar)?;
    laplace_quadrature(&|z| borel_transform(curve, beta, z), theta, hbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::voros_path_coeff;
    use crate::special::log_lambda;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    fn web(m: C, nu: C) -> SpectralCurve {
        SpectralCurve::new(CurveLabel::Web, &[m], &[nu]).unwrap()
    }

    #[test]
    fn weber_closed_form_sectors() {
        let m = C::new(1.0, 0.3);
        let nu = C::new(0.2, -0.1);
        let c = web(m, nu);
        let b = LatticeElement::beta(Pole::Inf);
        let bps = (TWO_PI_I * m).arg();
        let hbar_below = C::from_polar(0.3, bps - 0.4);
        let got = borel_sum_path_symbol(&c, &b, bps - 0.4, hbar_below).unwrap();
        let want = log_lambda(m / hbar_below, 0.5 * (1.0 - nu)).unwrap().exp();
        assert!((got - want).norm() < 1e-13 * want.norm());
        let hbar_above = C::from_polar(0.3, bps + 0.4);
        let got = borel_sum_path_symbol(&c, &b, bps + 0.4, hbar_above).unwrap();
        let want = (-log_lambda(-m / hbar_above, 0.5 * (1.0 + nu)).unwrap()).exp();
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn bessel_closed_form_lower() {
        let m = C::new(0.7, 0.2);
        let nu = r(0.15);
        let c = SpectralCurve::new(CurveLabel::Bes, &[m], &[nu]).unwrap();
        let theta = (TWO_PI_I * m).arg() - 0.6;
        let hbar = C::from_polar(0.2, theta + 0.1);
        let got = borel_sum_path_symbol(&c, &LatticeElement::beta(Pole::Zero), theta, hbar).unwrap();
        let w = 2.0 * m / hbar;
        let want = (-log_lambda(w, 1.0 - nu).unwrap() - log_lambda(w, -nu).unwrap()).exp();
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn transform_small_zeta_and_taylor() {
        let c = web(r(1.0), r(0.0));
        let b = LatticeElement::beta(Pole::Inf);
        let v0 = borel_transform(&c, &b, C::new(1e-9, 0.0)).unwrap();
        assert!((v0 - r(-1.0 / 24.0)).norm() < 1e-9);
        assert!(matches!(borel_transform(&c, &b, C::new(0.0, 2.0 * PI)), Err(Error::PoleHit(_))));
        for c in [
            web(C::new(0.8, 0.4), C::new(0.3, 0.1)),
            SpectralCurve::new(CurveLabel::Bes, &[C::new(1.1, -0.2)], &[r(0.4)]).unwrap(),
        ] {
            let beta = LatticeElement::beta(c.label.even_poles()[0]);
            // Taylor coefficients at ζ = 0 from a contour integral of radius 0.3.
            let n = 256;
            for k in 0..8 {
                let mut s = C::default();
                for j in 0..n {
                    let z = C::from_polar(0.3, 2.0 * PI * j as f64 / n as f64);
                    s += borel_transform(&c, &beta, z).unwrap() / z.powi(k as i32);
                }
                let coeff = s / n as f64;
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let want = voros_path_coeff(&c, &beta, k + 1).unwrap() / fact;
                assert!((coeff - want).norm() < 1e-13 * 0.3f64.powi(-(k as i32)), "k={k}: {coeff} vs {want}");
            }
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let c = web(r(1.0), r(0.0));
        let b = LatticeElement::beta(Pole::Inf);
        let q = borel_sum_quadrature(&c, &b, 0.0, r(0.1)).unwrap();
        let want = log_lambda(r(10.0), r(0.5)).unwrap();
        assert!((q - want).norm() < 1e-10);

        let cases = [
            web(C::new(0.9, 0.2), C::new(0.3, -0.2)),
            SpectralCurve::new(CurveLabel::Bes, &[C::new(1.2, -0.3)], &[C::new(-0.2, 0.1)]).unwrap(),
        ];
        for c in cases {
            let beta = LatticeElement::beta(c.label.even_poles()[0]);
            let bps = bps_spectrum(&c).rays();
            for ray in &bps {
                for dt in [-0.9, -0.3, 0.3, 0.9] {
                    let theta = ray.angle + dt;
                    for (rad, off) in [(0.05, 0.0), (0.2, 0.5), (0.5, -0.7)] {
                        let hbar = C::from_polar(rad, theta + off);
                        let q = borel_sum_quadrature(&c, &beta, theta, hbar).unwrap();
                        let cf = log_borel_sum_path(&c, &beta, theta, hbar).unwrap();
                        assert!((q - cf).norm() < 1e-9, "{} θ={theta} ħ={hbar}: {q} vs {cf}", c.label);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_transform_and_watson() {
        let z = laplace_quadrature(&|_| Ok(C::default()), 0.3, C::from_polar(0.5, 0.2)).unwrap();
        assert_eq!(z, C::default());
        let c = web(r(1.0), r(0.2));
        let b = LatticeElement::beta(Pole::Inf);
        let v1 = voros_path_coeff(&c, &b, 1).unwrap();
        let mut prev = None;
        for h in [0.08, 0.04, 0.02] {
            let s = log_borel_sum_path(&c, &b, 0.0, r(h)).unwrap();
            let rem = (s - v1 * h).norm();
            if let Some(p) = prev {
                let ratio: f64 = rem / p;
                assert!(ratio < 0.3, "ratio {ratio}");
            }
            prev = Some(rem);
        }
    }

    #[test]
    fn same_chamber_same_sum() {
        let c =
            SpectralCurve::new(CurveLabel::Kum, &[C::new(1.0, 0.2), C::new(0.4, -0.5)], &[r(0.1), r(-0.3)]).unwrap();
        let s = bps_spectrum(&c);
        let rays = s.rays();
        let (a, b) = (rays[0].angle, rays[1].angle);
        let t1 = a + 0.3 * (b - a);
        let t2 = a + 0.7 * (b - a);
        let hbar = C::from_polar(0.3, 0.5 * (t1 + t2));
        for &p in c.label.even_poles() {
            let beta = LatticeElement::beta(p);
            let x = log_borel_sum_path(&c, &beta, t1, hbar).unwrap();
            let y = log_borel_sum_path(&c, &beta, t2, hbar).unwrap();
            assert!((x - y).norm() < 1e-12);
        }
    }
}
