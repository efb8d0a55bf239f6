//! BPS spectra of the catalog curves, ray geometry and the BPS automorphism.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};
use crate::lattice::{central_charge, make_refinement, pairing, LatticeElement, QuadraticRefinement};

type C = Complex64;

/// Angle tolerance for ray classification.
pub const TOL_ANGLE: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct ActiveClass {
    pub gamma: LatticeElement,
    pub omega: i64,
    #[serde(with = "crate::json::complex")]
    pub z: C,
}

/// Finite uncoupled BPS structure attached to a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BpsStructure {
    pub curve: SpectralCurve,
    pub active: Vec<ActiveClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ray {
    pub angle: f64,
    pub bps: Vec<LatticeElement>,
}

impl Ray {
    pub fn is_bps(&self) -> bool {
        !self.bps.is_empty()
    }
}

/// Angle in `[0, 2π)`.
pub fn normalize_angle(t: f64) -> f64 {
    let a = t.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed distance between two angles, in `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

pub fn arg_angle(z: C) -> f64 {
    normalize_angle(z.arg())
}

fn gp(p: Pole) -> LatticeElement {
    LatticeElement::gamma_plus(p)
}

fn gm(p: Pole) -> LatticeElement {
    LatticeElement::gamma_minus(p)
}

fn table_rows(label: CurveLabel) -> Vec<(LatticeElement, i64)> {
    use Pole::*;
    let loops = |poles: &[Pole]| poles.iter().map(|&s| (LatticeElement::loop_class(s), -1)).collect::<Vec<_>>();
    let mut rows = Vec::new();
    match label {
        CurveLabel::HG => {
            for a in [gp(One), gm(One)] {
                for b in [gp(Inf), gm(Inf)] {
                    rows.push((gp(Zero) + a + b, 1));
                }
            }
            rows.extend(loops(&[Zero, One, Inf]));
        }
        CurveLabel::DHG => {
            rows.push((gp(One) + gp(Inf), 2));
            rows.push((gp(One) + gm(Inf), 2));
            rows.extend(loops(&[One, Inf]));
        }
        CurveLabel::Kum => {
            rows.push((gp(Zero) + gp(Inf), 1));
            rows.push((gp(Zero) + gm(Inf), 1));
            rows.extend(loops(&[Zero]));
        }
        CurveLabel::Leg => {
            rows.push((gp(Inf), 4));
            rows.extend(loops(&[Inf]));
        }
        CurveLabel::Bes => rows.extend(loops(&[Zero])),
        CurveLabel::Whi => rows.push((gp(Inf), 2)),
        CurveLabel::Web | CurveLabel::Deg3_14 => rows.push((gp(Inf), 1)),
        CurveLabel::Deg3_23 | CurveLabel::Ai | CurveLabel::DBes => {}
    }
    rows
}

/// The BPS structure of a catalog curve, listing both orientations of every class.
pub fn bps_spectrum(curve: &SpectralCurve) -> BpsStructure {
    let mut active = Vec::new();
    for (g, omega) in table_rows(curve.label) {
        for gamma in [g, -g] {
            let z = central_charge(curve, &gamma).expect("table rows are supported cycles");
            active.push(ActiveClass { gamma, omega, z });
        }
    }
    BpsStructure { curve: curve.clone(), active }
}

impl BpsStructure {
    pub fn label(&self) -> CurveLabel {
        self.curve.label
    }

    pub fn omega(&self, g: &LatticeElement) -> i64 {
        self.active.iter().find(|a| a.gamma.equiv(g, self.label())).map_or(0, |a| a.omega)
    }

    /// Distinct BPS ray angles in increasing order.
    pub fn rays(&self) -> Vec<Ray> {
        let mut angles: Vec<f64> = self.active.iter().map(|a| arg_angle(a.z)).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| angle_diff(*a, *b).abs() < TOL_ANGLE);
        if angles.len() > 1 && angle_diff(angles[0], *angles.last().unwrap()).abs() < TOL_ANGLE {
            angles.pop();
        }
        angles.into_iter().map(|t| self.classify_ray(t)).collect()
    }

    pub fn classify_ray(&self, theta: f64) -> Ray {
        let bps = self
            .active
            .iter()
            .filter(|a| angle_diff(arg_angle(a.z), theta).abs() < TOL_ANGLE)
            .map(|a| a.gamma)
            .collect();
        Ray { angle: normalize_angle(theta), bps }
    }

    pub fn check_non_bps(&self, theta: f64) -> Result<()> {
        if self.classify_ray(theta).is_bps() {
            Err(Error::RayIsBps(theta))
        } else {
            Ok(())
        }
    }

    /// Active classes with `arg Z ∈ (ϑ, ϑ + π)`, i.e. in the half-plane to the left of `ℓ = e^{iϑ}ℝ_{>0}`.
    /// Fails if `ℓ` or `−ℓ` is a BPS ray.
    pub fn left_of(&self, theta: f64) -> Result<Vec<ActiveClass>> {
        self.check_non_bps(theta)?;
        self.check_non_bps(theta + PI)?;
        let rot = C::from_polar(1.0, -theta);
        Ok(self.active.iter().filter(|a| (a.z * rot).im > 0.0).copied().collect())
    }

    /// A ray `ϑ` with neither `ℓ` nor `−ℓ` BPS: `0` when possible, otherwise the
    /// midpoint of the widest gap between BPS directions taken modulo `π`.
    pub fn default_theta(&self) -> f64 {
        let mut dirs: Vec<f64> = self.active.iter().map(|a| arg_angle(a.z).rem_euclid(PI)).collect();
        if dirs.iter().all(|&d| d.min(PI - d) > 1e-3) {
            return 0.0;
        }
        dirs.sort_by(f64::total_cmp);
        let mut best = (0.0, -1.0);
        for (i, &d) in dirs.iter().enumerate() {
            let next = if i + 1 < dirs.len() { dirs[i + 1] } else { dirs[0] + PI };
            if next - d > best.1 {
                best = (0.5 * (d + next), next - d);
            }
        }
        normalize_angle(best.0)
    }

    /// Classes in the half-plane to the left of [`Self::default_theta`].
    pub fn default_half(&self) -> Vec<ActiveClass> {
        self.left_of(self.default_theta()).expect("default ray is non-BPS")
    }

    /// `(generic, witness)`: a witness is a pair of classes with non-parallel charges
    /// whose central charges have a positive real ratio.
    pub fn is_generic(&self) -> (bool, Option<(LatticeElement, LatticeElement, C)>) {
        let poles = self.label().even_poles();
        let charge = |g: &LatticeElement| poles.iter().map(|&p| g.charge(p)).collect::<Vec<_>>();
        for (i, a) in self.active.iter().enumerate() {
            for b in &self.active[i + 1..] {
                let (ca, cb) = (charge(&a.gamma), charge(&b.gamma));
                let parallel = (0..ca.len()).all(|i| (0..cb.len()).all(|j| ca[i] * cb[j] == ca[j] * cb[i]));
                if parallel {
                    continue;
                }
                let ratio = b.z / a.z;
                if ratio.re > 0.0 && ratio.im.abs() <= TOL_ANGLE * ratio.norm() {
                    return (false, Some((a.gamma, b.gamma, ratio)));
                }
            }
        }
        (true, None)
    }

    /// `min |Z(γ)| / ‖γ‖₁` over active classes, with the norm taken on charges.
    pub fn support_constant(&self) -> Option<f64> {
        self.active
            .iter()
            .map(|a| {
                let n: i64 = Pole::ALL.iter().map(|&p| a.gamma.charge(p).abs()).sum();
                a.z.norm() / n as f64
            })
            .reduce(f64::min)
    }

    pub fn is_uncoupled(&self) -> bool {
        self.active.iter().all(|a| self.active.iter().all(|b| pairing(&a.gamma, &b.gamma) == 0))
    }

    pub fn refinement(&self) -> Result<QuadraticRefinement> {
        let rows: Vec<_> = self.active.iter().map(|a| (a.gamma, a.omega)).collect();
        make_refinement(self.label(), &rows)
    }
}

/// The automorphism `𝕊(Δ)` for the acute sector from `ϑ₁` clockwise to `ϑ₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct BpsTransform {
    pub theta1: f64,
    pub theta2: f64,
    pub factors: Vec<(LatticeElement, i64)>,
}

/// Is `arg z` strictly inside the sector running clockwise from `theta1` to `theta2`?
pub fn in_sector(z: C, theta1: f64, theta2: f64) -> bool {
    let width = (theta1 - theta2).rem_euclid(TAU);
    let d = (theta1 - z.arg()).rem_euclid(TAU);
    d > 0.0 && d < width
}

pub fn bps_automorphism(s: &BpsStructure, theta1: f64, theta2: f64) -> Result<BpsTransform> {
    for t in [theta1, theta2] {
        if s.classify_ray(t).is_bps() {
            return Err(Error::BoundaryIsBps(t));
        }
    }
    let factors = s.active.iter().filter(|a| in_sector(a.z, theta1, theta2)).map(|a| (a.gamma, a.omega)).collect();
    Ok(BpsTransform { theta1, theta2, factors })
}

impl BpsTransform {
    pub fn identity(theta: f64) -> Self {
        BpsTransform { theta1: theta, theta2: theta, factors: vec![] }
    }

    /// Exponent of `(1 − x_γ)` in the image of `x_μ`.
    pub fn exponent(&self, gamma: &LatticeElement, mu: &LatticeElement) -> i64 {
        self.factors.iter().filter(|(g, _)| g == gamma).map(|(g, om)| om * pairing(g, mu)).sum()
    }

    /// `x_μ ↦ x_μ Π (1 − x_γ)^{Ω(γ)⟨γ,μ⟩}` evaluated on a point `X` of the torus.
    pub fn apply(&self, x: &dyn Fn(&LatticeElement) -> C, mu: &LatticeElement) -> C {
        let mut out = x(mu);
        for (g, om) in &self.factors {
            let e = om * pairing(g, mu);
            if e != 0 {
                out *= (C::new(1.0, 0.0) - x(g)).powi(e as i32);
            }
        }
        out
    }

    /// Product with an adjacent transform whose first ray is this one's second ray.
    pub fn then(&self, next: &BpsTransform) -> BpsTransform {
        let mut factors = self.factors.clone();
        factors.extend(next.factors.iter().copied());
        BpsTransform { theta1: self.theta1, theta2: next.theta2, factors }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn table_sizes() {
        let mut rng = rand::rng();
        for (label, n) in [
            (CurveLabel::HG, 14),
            (CurveLabel::DHG, 8),
            (CurveLabel::Kum, 6),
            (CurveLabel::Leg, 4),
            (CurveLabel::Bes, 2),
            (CurveLabel::Whi, 2),
            (CurveLabel::Web, 2),
            (CurveLabel::Ai, 0),
            (CurveLabel::DBes, 0),
        ] {
            let s = bps_spectrum(&SpectralCurve::random(label, &mut rng));
            assert_eq!(s.active.len(), n, "{label}");
            assert!(s.is_uncoupled());
            for a in &s.active {
                assert_eq!(s.omega(&-a.gamma), a.omega);
            }
        }
    }

    #[test]
    fn leg_rows() {
        let c = SpectralCurve::with_masses(CurveLabel::Leg, &[r(1.0)]).unwrap();
        let s = bps_spectrum(&c);
        assert_eq!(s.omega(&LatticeElement::gamma_plus(Pole::Inf)), 4);
        assert_eq!(s.omega(&LatticeElement::loop_class(Pole::Inf)), -1);
        assert!(s.is_generic().0);
    }

    #[test]
    fn weber_rays() {
        let c = SpectralCurve::with_masses(CurveLabel::Web, &[r(1.0)]).unwrap();
        let s = bps_spectrum(&c);
        assert!(!s.classify_ray(0.0).is_bps());
        assert_eq!(s.classify_ray(PI / 2.0).bps, vec![LatticeElement::gamma_plus(Pole::Inf)]);
        let rays = s.rays();
        assert_eq!(rays.len(), 2);
        assert!((rays[0].angle - PI / 2.0).abs() < 1e-15);
        assert!((rays[1].angle - 3.0 * PI / 2.0).abs() < 1e-15);
        assert!(matches!(s.left_of(PI / 2.0), Err(Error::RayIsBps(_))));
        let c = SpectralCurve::with_masses(CurveLabel::Web, &[C::new(0.0, 1.0)]).unwrap();
        let s = bps_spectrum(&c);
        let t = s.default_theta();
        assert!((t - PI / 2.0).abs() < 1e-12);
        assert_eq!(s.default_half().len(), 1);
    }

    #[test]
    fn kummer_genericity() {
        let c = SpectralCurve::with_masses(CurveLabel::Kum, &[r(2.0), r(1.0)]).unwrap();
        assert!(!bps_spectrum(&c).is_generic().0);
        let c = SpectralCurve::with_masses(CurveLabel::Kum, &[r(1.0), C::new(0.0, 1.0)]).unwrap();
        assert!(bps_spectrum(&c).is_generic().0);
    }

    #[test]
    fn airy_trivial() {
        let c = SpectralCurve::with_masses(CurveLabel::Ai, &[]).unwrap();
        let s = bps_spectrum(&c);
        assert!(!s.classify_ray(1.234).is_bps());
        assert!(s.rays().is_empty());
        assert!(s.support_constant().is_none());
    }

    #[test]
    fn weber_automorphism_exponent() {
        let c = SpectralCurve::with_masses(CurveLabel::Web, &[r(1.0)]).unwrap();
        let s = bps_spectrum(&c);
        let t = bps_automorphism(&s, PI / 2.0 + 0.1, PI / 2.0 - 0.1).unwrap();
        let g = LatticeElement::gamma_plus(Pole::Inf);
        assert_eq!(t.exponent(&g, &LatticeElement::beta(Pole::Inf)), -1);
        assert!(matches!(bps_automorphism(&s, PI / 2.0, 0.0), Err(Error::BoundaryIsBps(_))));
        let x = |m: &LatticeElement| C::new(0.3 + m.plus[2] as f64, 0.1 * m.path[2] as f64 + 0.2);
        assert_eq!(t.apply(&x, &g), x(&g));
        let empty = bps_automorphism(&s, 0.2, 0.1).unwrap();
        let b = LatticeElement::beta(Pole::Inf);
        assert_eq!(empty.apply(&x, &b), x(&b));
    }

    #[test]
    fn adjacent_sectors_compose() {
        let mut rng = rand::rng();
        for label in CurveLabel::QUADRATIC {
            let s = bps_spectrum(&SpectralCurve::random(label, &mut rng));
            let x = |m: &LatticeElement| {
                let c = m.coords();
                C::from_polar(0.7, c.iter().enumerate().map(|(i, k)| (i as f64 + 0.3) * *k as f64).sum::<f64>())
            };
            let (t1, t2, t3) = (2.9, 1.7, 0.4);
            let (Ok(a), Ok(b), Ok(u)) =
                (bps_automorphism(&s, t1, t2), bps_automorphism(&s, t2, t3), bps_automorphism(&s, t1, t3))
            else {
                continue;
            };
            let ab = a.then(&b);
            for mu in LatticeElement::basis() {
                let lhs = ab.apply(&x, &mu);
                let rhs = u.apply(&x, &mu);
                assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn refinements_exist() {
        let mut rng = rand::rng();
        for label in CurveLabel::ALL {
            let s = bps_spectrum(&SpectralCurve::random(label, &mut rng));
            let q = s.refinement().unwrap();
            for a in &s.active {
                assert_eq!(q.eval(&a.gamma), if a.omega == -1 { 1 } else { -1 });
            }
        }
    }
}
