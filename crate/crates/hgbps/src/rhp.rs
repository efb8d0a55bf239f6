//! Solutions of the BPS Riemann-Hilbert problem (Voros, minimal, holomorphic), their
//! jumps, the factors relating them, and the associated τ-functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::borel::{voros_etas, BorelContext};
use crate::bps::{bps_automorphism, bps_spectrum, ActiveClass, BpsStructure};
use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};
use crate::lattice::{central_charge_doubled, nu_functional, pairing, xi_nu, LatticeElement, TwistedValue};
use crate::series::{calb, log_tau_tr_partial, voros_potential_coeff_at};
use crate::special::log_upsilon;

type C = Complex64;

const TWO_PI_I: C = C::new(0.0, 2.0 * PI);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Vor,
    Min,
    Hol,
}

impl std::str::FromStr for SolutionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vor" | "voros" => Ok(SolutionKind::Vor),
            "min" | "minimal" => Ok(SolutionKind::Min),
            "hol" | "holomorphic" => Ok(SolutionKind::Hol),
            _ => Err(Error::Config(format!("unknown solution kind {s:?}"))),
        }
    }
}

/// A solution `X_ℓ` of the BPS Riemann-Hilbert problem with constant term `ξ`.
#[derive(Clone, Debug)]
pub struct RhpSolution {
    pub kind: SolutionKind,
    pub structure: BpsStructure,
    pub xi: TwistedValue,
}

impl RhpSolution {
    /// Borel-resummed Voros symbols, with `ξ = ξ_{Đ,ν}`.
    pub fn voros(curve: &SpectralCurve) -> Result<Self> {
        let structure = bps_spectrum(curve);
        let xi = xi_nu(curve, &structure.refinement()?);
        Ok(RhpSolution { kind: SolutionKind::Vor, structure, xi })
    }

    pub fn minimal(curve: &SpectralCurve, xi: TwistedValue) -> Self {
        RhpSolution { kind: SolutionKind::Min, structure: bps_spectrum(curve), xi }
    }

    /// The solution holomorphic in `ħ`, with `ξ = ξ_{Đ,ν*}` (equal to 1 on active classes).
    pub fn holomorphic(curve: &SpectralCurve, chosen: Option<Pole>) -> Result<Self> {
        let star = at_nu_star(curve, chosen)?;
        let structure = bps_spectrum(&star);
        let xi = xi_nu(&star, &structure.refinement()?);
        Ok(RhpSolution { kind: SolutionKind::Hol, structure, xi })
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.structure.curve
    }

    fn context(&self, theta: f64) -> Result<BorelContext> {
        self.structure.check_non_bps(theta)?;
        self.structure.check_non_bps(theta + PI)?;
        Ok(BorelContext { theta, structure: self.structure.clone() })
    }

    /// `log X_{ℓ,μ}(ħ)`.
    pub fn log_eval(&self, mu: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
        mu.supported_by(self.structure.label())?;
        let ctx = self.context(theta)?;
        let head = -central_charge_doubled(self.curve(), mu)? / hbar + self.xi.log(mu);
        let tail = match self.kind {
            SolutionKind::Vor => ctx.log_borel_sum(mu, hbar)?,
            SolutionKind::Min => {
                let xi = &self.xi;
                ctx.log_lambda_product(mu, hbar, &|a, _| vec![(xi.log(&-a.gamma) / TWO_PI_I, 1.0)])?
            }
            SolutionKind::Hol => ctx.log_lambda_product(mu, hbar, &|_, _| vec![(C::default(), 1.0)])?,
        };
        Ok(head + tail)
    }

    pub fn eval(&self, mu: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
        Ok(self.log_eval(mu, theta, hbar)?.exp())
    }
}

pub fn x_voros(curve: &SpectralCurve, mu: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    RhpSolution::voros(curve)?.eval(mu, theta, hbar)
}

pub fn x_min(curve: &SpectralCurve, mu: &LatticeElement, xi: &TwistedValue, theta: f64, hbar: C) -> Result<C> {
    RhpSolution::minimal(curve, xi.clone()).eval(mu, theta, hbar)
}

pub fn x_hol(curve: &SpectralCurve, mu: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    RhpSolution::holomorphic(curve, None)?.eval(mu, theta, hbar)
}

/// `ν*` making the Voros solution agree with the holomorphic one up to `ϱ`:
/// `ν_∞ = 1` for Weber, Whittaker, Legendre and the (1,4) curve, `ν_0 = 0` for Bessel,
/// `(ν_0, ν_∞) = (0, 1)` for Kummer, and for HG/dHG `ν = 1` at `chosen` (default: first
/// even pole) and `0` elsewhere. Curves with empty spectrum keep their `ν`.
pub fn nu_star(curve: &SpectralCurve, chosen: Option<Pole>) -> Result<Vec<C>> {
    let poles = curve.label.even_poles();
    let one = C::new(1.0, 0.0);
    let zero = C::default();
    Ok(match curve.label {
        CurveLabel::Web | CurveLabel::Whi | CurveLabel::Leg | CurveLabel::Deg3_14 => vec![one],
        CurveLabel::Bes => vec![zero],
        CurveLabel::Kum => vec![zero, one],
        CurveLabel::HG | CurveLabel::DHG => {
            let pick = chosen.unwrap_or(poles[0]);
            if !poles.contains(&pick) {
                return Err(Error::Config(format!("{} has no even pole {pick}", curve.label)));
            }
            poles.iter().map(|&p| if p == pick { one } else { zero }).collect()
        }
        CurveLabel::Deg3_23 | CurveLabel::Ai | CurveLabel::DBes => curve.nus(),
    })
}

pub fn at_nu_star(curve: &SpectralCurve, chosen: Option<Pole>) -> Result<SpectralCurve> {
    curve.with_nu(&nu_star(curve, chosen)?)
}

/// Fails unless `Re ν(γ)` lies in `(−1, 1]` (`Ω ≠ −1`) or `(−2, 0]` (`Ω = −1`) for every
/// active class in the half-plane left of `ϑ`.
pub fn check_strip(curve: &SpectralCurve, theta: f64) -> Result<()> {
    for a in bps_spectrum(curve).left_of(theta)? {
        let nu = nu_functional(curve, &a.gamma)?.re;
        let (lo, hi) = if a.omega == -1 { (-2.0, 0.0) } else { (-1.0, 1.0) };
        if !(nu > lo && nu <= hi) {
            return Err(Error::NuOutOfStrip(format!("Re ν({}) = {nu} not in ({lo}, {hi}]", a.gamma)));
        }
    }
    Ok(())
}

/// `X^min_ℓ` at `ξ = ξ_{Đ,ν}`, the solution the Voros one is compared against.
pub fn minimal_at_nu(curve: &SpectralCurve) -> Result<RhpSolution> {
    let v = RhpSolution::voros(curve)?;
    Ok(RhpSolution::minimal(curve, v.xi))
}

fn half(curve: &SpectralCurve, theta: f64, hbar: C) -> Result<Vec<(ActiveClass, C, C)>> {
    BorelContext::new(curve, theta)?.check_hbar(hbar)?;
    bps_spectrum(curve)
        .left_of(theta)?
        .into_iter()
        .map(|a| Ok((a, a.z / (TWO_PI_I * hbar), nu_functional(curve, &a.gamma)?)))
        .collect()
}

/// The comparison factors at one `(μ, ϑ, ħ)`. Entries are `None` where the
/// hypothesis (`ν` in the strip, resp. a `ν*` table) does not apply.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonFactors {
    #[serde(with = "crate::json::option_complex")]
    pub rho: Option<C>,
    #[serde(with = "crate::json::option_complex")]
    pub varrho: Option<C>,
    #[serde(with = "crate::json::option_complex")]
    pub kappa: Option<C>,
    #[serde(with = "crate::json::option_complex")]
    pub varkappa: Option<C>,
}

/// `ρ_μ = Π_{Ω=−1} (1 − πiνħ/Z)^{Ω⟨μ,γ⟩/2}` over `Z ∈ iℍ_ℓ`, so that `X^Vor = ρ·X^min` at `ξ_{Đ,ν}`.
pub fn rho(curve: &SpectralCurve, mu: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    check_strip(curve, theta)?;
    let mut log = C::default();
    for (a, w, nu) in half(curve, theta, hbar)? {
        if a.omega == -1 {
            let e = 0.5 * (a.omega * pairing(mu, &a.gamma)) as f64;
            log += e * (1.0 - 0.5 * nu / w).ln();
        }
    }
    Ok(log.exp())
}

/// `ϱ_μ = Π_{Ω=−1} (1 − ν*/(2w))^{−Ων*⟨μ,γ⟩/4}`, so that `X^Vor|_{ν*} = ϱ·X^hol`.
/// `curve` must already carry `ν = ν*`.
pub fn varrho(curve: &SpectralCurve, mu: &LatticeElement, theta: f64, hbar: C) -> Result<C> {
    let mut log = C::default();
    for (a, w, nu) in half(curve, theta, hbar)? {
        if a.omega == -1 && nu.norm() > 1e-12 {
            let e = -(nu * (a.omega * pairing(mu, &a.gamma)) as f64) / 4.0;
            log += e * (1.0 - 0.5 * nu / w).ln();
        }
    }
    Ok(log.exp())
}

/// `log κ_ℓ = Σ_{Ω=−1} (νΩ/4) log(w − ν/2)` over `Z ∈ iℍ_ℓ`.
pub fn log_kappa(curve: &SpectralCurve, theta: f64, hbar: C) -> Result<C> {
    check_strip(curve, theta)?;
    let mut log = C::default();
    for (a, w, nu) in half(curve, theta, hbar)? {
        if a.omega == -1 {
            log += nu * a.omega as f64 / 4.0 * (w - 0.5 * nu).ln();
        }
    }
    Ok(log)
}

/// `log ϰ = Σ_{Ω=−1, ν*=±2} ½ log(w − ν*/2)`, so that `τ^Vor|_{ν*} = ϰ·τ^hol`.
/// `curve` must already carry `ν = ν*`.
pub fn log_varkappa(curve: &SpectralCurve, theta: f64, hbar: C) -> Result<C> {
    let mut log = C::default();
    for (a, w, nu) in half(curve, theta, hbar)? {
        if a.omega == -1 && nu.norm() > 1e-12 {
            log += -(a.omega as f64) * nu * nu / 8.0 * (w - 0.5 * nu).ln();
        }
    }
    Ok(log)
}

/// All four factors at `(μ, ϑ, ħ)`; `ϱ` and `ϰ` are taken at `ν*` and `ρ`, `κ` at the curve's own `ν`.
pub fn comparison_factors(
    curve: &SpectralCurve,
    mu: &LatticeElement,
    theta: f64,
    hbar: C,
    chosen: Option<Pole>,
) -> Result<ComparisonFactors> {
    let in_strip = match check_strip(curve, theta) {
        Ok(()) => true,
        Err(Error::NuOutOfStrip(_)) => false,
        Err(e) => return Err(e),
    };
    let (rho_v, kappa_v) = if in_strip {
        (Some(rho(curve, mu, theta, hbar)?), Some(log_kappa(curve, theta, hbar)?.exp()))
    } else {
        (None, None)
    };
    let has_star = !matches!(curve.label, CurveLabel::Deg3_23 | CurveLabel::Ai | CurveLabel::DBes);
    let (varrho_v, varkappa_v) = if has_star {
        let star = at_nu_star(curve, chosen)?;
        (Some(varrho(&star, mu, theta, hbar)?), Some(log_varkappa(&star, theta, hbar)?.exp()))
    } else {
        (None, None)
    };
    Ok(ComparisonFactors { rho: rho_v, varrho: varrho_v, kappa: kappa_v, varkappa: varkappa_v })
}

/// `|X_{ℓ₂,μ} / (X_{ℓ₁,μ} Π (1 − X_{ℓ₁,γ})^{Ω⟨γ,μ⟩}) − 1|` over the BPS rays strictly
/// between `ϑ₁` and `ϑ₂` (clockwise).
pub fn jump_residual(sol: &RhpSolution, mu: &LatticeElement, theta1: f64, theta2: f64, hbar: C) -> Result<f64> {
    let t = bps_automorphism(&sol.structure, theta1, theta2)?;
    let mut log_image = sol.log_eval(mu, theta1, hbar)?;
    for (g, om) in &t.factors {
        let e = om * pairing(g, mu);
        if e != 0 {
            log_image += e as f64 * (1.0 - sol.eval(g, theta1, hbar)?).ln();
        }
    }
    let r = (sol.log_eval(mu, theta2, hbar)? - log_image).exp() - 1.0;
    Ok(r.norm())
}

pub fn jump_check(curve: &SpectralCurve, mu: &LatticeElement, theta1: f64, theta2: f64, hbar: C) -> Result<f64> {
    jump_residual(&RhpSolution::voros(curve)?, mu, theta1, theta2, hbar)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauKind {
    Min,
    Hol,
    Vor,
}

impl std::str::FromStr for TauKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(TauKind::Min),
            "hol" => Ok(TauKind::Hol),
            "vor" => Ok(TauKind::Vor),
            _ => Err(Error::Config(format!("unknown τ kind {s:?}"))),
        }
    }
}

/// `log τ^min = Σ Ω log Υ(w, log ξ(−γ)/2πi)` over `Z ∈ iℍ_ℓ`.
pub fn log_tau_min(curve: &SpectralCurve, xi: &TwistedValue, theta: f64, hbar: C) -> Result<C> {
    let mut s = C::default();
    for (a, w, _) in half(curve, theta, hbar)? {
        s += a.omega as f64 * log_upsilon(w, xi.log(&-a.gamma) / TWO_PI_I)?;
    }
    Ok(s)
}

/// `log τ^hol = Σ Ω log Υ(w)`.
pub fn log_tau_hol(curve: &SpectralCurve, theta: f64, hbar: C) -> Result<C> {
    let mut s = C::default();
    for (a, w, _) in half(curve, theta, hbar)? {
        s += a.omega as f64 * log_upsilon(w, C::default())?;
    }
    Ok(s)
}

/// `log τ^Vor`, the Borel-resummed Voros potential normalized by `c_ℓ`, as the
/// Υ-product `Υ(w, (1−ν)/2)^Ω` for `Ω ≠ −1` and `[Υ(w, 1−ν/2) Υ(w, −ν/2)]^{Ω/2}` for `Ω = −1`.
pub fn log_tau_vor(curve: &SpectralCurve, theta: f64, hbar: C) -> Result<C> {
    let mut s = C::default();
    for (a, w, nu) in half(curve, theta, hbar)? {
        for (eta, c) in voros_etas(nu, a.omega) {
            s += a.omega as f64 * c * log_upsilon(w, eta)?;
        }
    }
    Ok(s)
}

/// `log κ_ℓ + log τ^min` at `ξ = ξ_{Đ,ν}`; requires `ν` in the strip.
pub fn log_tau_vor_via_kappa(curve: &SpectralCurve, theta: f64, hbar: C) -> Result<C> {
    let xi = RhpSolution::voros(curve)?.xi;
    Ok(log_kappa(curve, theta, hbar)? + log_tau_min(curve, &xi, theta, hbar)?)
}

/// Truncated asymptotic series of `log τ^Vor`: `log c_ℓ − Σ_{k=1}^{k_max} k φ_k ħ^{k−1}`.
pub fn log_tau_vor_series(curve: &SpectralCurve, theta: f64, hbar: C, k_max: usize) -> Result<C> {
    let mut s = C::default();
    for (a, w, nu) in half(curve, theta, hbar)? {
        s -= 0.5 * calb(2, nu, a.omega)? * a.omega as f64 * w.ln();
    }
    for k in 2..=k_max {
        s -= k as f64 * voros_potential_coeff_at(curve, k, theta)? * hbar.powi(k as i32 - 1);
    }
    Ok(s)
}

/// `τ` of the requested kind. `xi` is used only by `Min` and defaults to `ξ_{Đ,ν}`.
pub fn tau(kind: TauKind, curve: &SpectralCurve, xi: Option<&TwistedValue>, theta: f64, hbar: C) -> Result<C> {
    let log = match kind {
        TauKind::Hol => log_tau_hol(curve, theta, hbar)?,
        TauKind::Vor => log_tau_vor(curve, theta, hbar)?,
        TauKind::Min => match xi {
            Some(x) => log_tau_min(curve, x, theta, hbar)?,
            None => log_tau_min(curve, &RhpSolution::voros(curve)?.xi, theta, hbar)?,
        },
    };
    Ok(log.exp())
}

/// `|log τ^hol − Σ_{g=1}^{G} ħ^{2g−2} F_g|` with `ħ` on the ray `ϑ`.
pub fn tau_tr_check(curve: &SpectralCurve, theta: f64, hbar_abs: f64, g_max: usize) -> Result<f64> {
    let hbar = C::from_polar(hbar_abs, theta);
    let lhs = log_tau_hol(curve, theta, hbar)?;
    let rhs = log_tau_tr_partial(curve, hbar, g_max)?;
    Ok((lhs - rhs).norm())
}
