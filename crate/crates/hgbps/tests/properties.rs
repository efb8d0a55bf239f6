//! Randomized invariants across curves and parameters.

use std::f64::consts::PI;

use hgbps::bps::bps_spectrum;
use hgbps::json::parse_complex;
use hgbps::lattice::{pairing, LatticeElement};
use hgbps::param::build_parametrization;
use hgbps::rhp::{jump_residual, RhpSolution};
use hgbps::series::free_energy;
use hgbps::special::{log_barnes_g, log_gamma};
use hgbps::verify::{basis, window};
use hgbps::{Complex64 as C, CurveLabel, SpectralCurve};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NONTRIVIAL: [CurveLabel; 7] = [
    CurveLabel::HG,
    CurveLabel::DHG,
    CurveLabel::Kum,
    CurveLabel::Leg,
    CurveLabel::Bes,
    CurveLabel::Whi,
    CurveLabel::Web,
];

fn curve(label: CurveLabel, seed: u64) -> SpectralCurve {
    SpectralCurve::random(label, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Distance of `z` from `2πiℤ`.
fn off_lattice(z: C) -> f64 {
    let k = (z.im / (2.0 * PI)).round();
    (z - C::new(0.0, 2.0 * PI * k)).norm()
}

fn small_class(label: CurveLabel, coeffs: &[i64]) -> LatticeElement {
    basis(label).iter().zip(coeffs).fold(LatticeElement::zero(), |acc, (b, &n)| acc + *b * n)
}

/// A non-BPS angle: the midpoint between two consecutive rays, or an arbitrary one.
fn chamber_angle(c: &SpectralCurve, pick: usize, frac: f64) -> f64 {
    let mut rays: Vec<f64> = bps_spectrum(c).rays().iter().map(|r| r.angle).collect();
    if rays.is_empty() {
        return frac * 2.0 * PI;
    }
    rays.sort_by(f64::total_cmp);
    let i = pick % rays.len();
    let a = rays[i];
    let b = if i + 1 < rays.len() { rays[i + 1] } else { rays[0] + 2.0 * PI };
    a + (0.1 + 0.8 * frac) * (b - a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_symmetric_and_uncoupled(i in 0usize..11, seed in any::<u64>()) {
        let label = CurveLabel::ALL[i];
        let s = bps_spectrum(&curve(label, seed));
        for a in &s.active {
            let neg = s.active.iter().find(|b| b.gamma.equiv(&-a.gamma, label));
            prop_assert!(neg.is_some(), "{label}: -{} missing", a.gamma);
            let neg = neg.unwrap();
            prop_assert_eq!(neg.omega, a.omega);
            prop_assert!((neg.z + a.z).norm() <= 1e-12 * a.z.norm());
            for b in &s.active {
                prop_assert_eq!(pairing(&a.gamma, &b.gamma), 0);
            }
        }
        prop_assert!(s.is_uncoupled());
        if !s.active.is_empty() {
            prop_assert!(s.support_constant().unwrap() > 0.0);
        }
    }

    #[test]
    fn parametrization_solves_the_curve(i in 0usize..9, seed in any::<u64>(), r in 0.3f64..3.0, t in -PI..PI) {
        let label = CurveLabel::QUADRATIC[i];
        let c = curve(label, seed);
        let p = build_parametrization(&c).unwrap();
        let z = C::from_polar(r, t);
        let (y, q) = (p.y.eval(z), c.q(p.x.eval(z)).unwrap());
        prop_assert!((y * y - q).norm() <= 1e-10 * q.norm().max(1.0), "{label}: y² = {}, Q = {q}", y * y);
    }

    #[test]
    fn lattice_text_round_trip(plus in prop::array::uniform3(-3i64..4), minus in prop::array::uniform3(-3i64..4), path in prop::array::uniform3(-3i64..4)) {
        let e = LatticeElement { plus, minus, path };
        let back: LatticeElement = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn complex_text_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = parse_complex(&format!("{re:e}{im:+e}i")).unwrap();
        prop_assert_eq!(z, C::new(re, im));
    }

    #[test]
    fn gamma_reflection(re in -4.0f64..5.0, im in 0.05f64..6.0, flip in any::<bool>()) {
        let w = C::new(re, if flip { -im } else { im });
        let one = C::new(1.0, 0.0);
        let lhs = log_gamma(w).unwrap() + log_gamma(one - w).unwrap();
        let rhs = (C::new(PI, 0.0) / (w * PI).sin()).ln();
        prop_assert!(off_lattice(lhs - rhs) < 1e-10, "w = {w}");
    }

    #[test]
    fn barnes_g_recursion(re in -3.0f64..12.0, im in 0.05f64..10.0, flip in any::<bool>()) {
        let w = C::new(re, if flip { -im } else { im });
        let d = log_barnes_g(w + 1.0).unwrap() - log_barnes_g(w).unwrap() - log_gamma(w).unwrap();
        prop_assert!(off_lattice(d) < 1e-10 * (1.0 + w.norm().powi(2)), "w = {w}");
    }

    #[test]
    fn free_energies_ignore_the_half_plane(i in 0usize..7, seed in any::<u64>(), g in 2usize..5, p1 in 0usize..8, p2 in 0usize..8, f in 0.0f64..1.0) {
        let c = curve(NONTRIVIAL[i], seed);
        let a = free_energy(&c, g, chamber_angle(&c, p1, f)).unwrap();
        let b = free_energy(&c, g, chamber_angle(&c, p2, 1.0 - f)).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn voros_solution_is_a_twisted_character(
        i in 0usize..7,
        seed in any::<u64>(),
        a in prop::collection::vec(-2i64..3, 9),
        b in prop::collection::vec(-2i64..3, 9),
        rad in 0.3f64..1.5,
        f in 0.0f64..1.0,
    ) {
        let label = NONTRIVIAL[i];
        let c = curve(label, seed);
        let sol = RhpSolution::voros(&c).unwrap();
        let theta = chamber_angle(&c, 0, f);
        let h = C::from_polar(rad, theta);
        let (x, y) = (small_class(label, &a), small_class(label, &b));
        let lx = sol.log_eval(&x, theta, h).unwrap();
        let ly = sol.log_eval(&y, theta, h).unwrap();
        let lxy = sol.log_eval(&(x + y), theta, h).unwrap();
        let d = lxy - lx - ly - C::new(0.0, PI * pairing(&x, &y) as f64);
        prop_assert!(off_lattice(d) < 1e-9 * (1.0 + lx.norm() + ly.norm()), "{label}: {d}");
    }

    #[test]
    fn jumps_match_the_bps_automorphism(i in 0usize..7, seed in any::<u64>(), pick in 0usize..8, rad in 0.05f64..0.7, kind in 0usize..3) {
        let label = NONTRIVIAL[i];
        let c = curve(label, seed);
        let sol = match kind {
            0 => RhpSolution::voros(&c).unwrap(),
            1 => hgbps::rhp::minimal_at_nu(&c).unwrap(),
            _ => RhpSolution::holomorphic(&c, None).unwrap(),
        };
        let s = bps_spectrum(&c);
        let rays = s.rays();
        let ray = rays[pick % rays.len()].angle;
        let d = window(&s, ray);
        for mu in basis(label) {
            let r = jump_residual(&sol, &mu, ray + d, ray - d, C::from_polar(rad, ray)).unwrap();
            prop_assert!(r < 1e-11, "{label} {:?} μ={mu}: {r:e}", sol.kind);
        }
    }
}
