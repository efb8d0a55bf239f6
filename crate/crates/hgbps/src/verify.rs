//! The acceptance matrix: each check pits a closed form against an independent route
//! (tabulated data, a numerical oracle or a defining relation) over random parameters.
//!
//! A [`Scope`] restricts the matrix to one curve; checks with no applicable curve pass
//! with zero cases.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::borel::{borel_sum_quadrature, log_borel_sum_path, BorelContext};
use crate::bps::{arg_angle, bps_spectrum, BpsStructure};
use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::Result;
use crate::lattice::{central_charge_doubled, LatticeElement};
use crate::rhp::{
    at_nu_star, check_strip, jump_residual, log_tau_vor, log_tau_vor_via_kappa, log_varkappa, minimal_at_nu, rho, tau,
    tau_tr_check, varrho, x_voros, RhpSolution, TauKind,
};
use crate::series::{voros_path_coeff, weber_difference_oracle};
use crate::special::bpoly;
use crate::tr::tr_compare;
use crate::wkb::WkbOracle;

type C = Complex64;

const TWO_PI_I: C = C::new(0.0, 2.0 * PI);

/// Curves with a non-empty spectrum.
const NONTRIVIAL: [CurveLabel; 7] = [
    CurveLabel::HG,
    CurveLabel::DHG,
    CurveLabel::Kum,
    CurveLabel::Leg,
    CurveLabel::Bes,
    CurveLabel::Whi,
    CurveLabel::Web,
];

#[derive(Copy, Clone, Debug)]
pub struct Scope {
    pub only: Option<CurveLabel>,
    pub seed: u64,
}

impl Default for Scope {
    fn default() -> Self {
        Scope { only: None, seed: 2024 }
    }
}

impl Scope {
    fn curves(&self, from: &[CurveLabel]) -> Vec<CurveLabel> {
        from.iter().copied().filter(|l| self.only.is_none_or(|o| o == *l)).collect()
    }

    fn rng(&self, id: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(1000).wrapping_add(id as u64))
    }
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Largest error seen, as a multiple of the tolerance it was held to.
    pub worst_ratio: f64,
    pub tolerance: f64,
    pub runtime_s: f64,
    pub runtime_limit_s: Option<f64>,
    pub failures: Vec<String>,
}

struct Tally {
    id: u32,
    name: &'static str,
    tolerance: f64,
    limit: Option<f64>,
    start: Instant,
    cases: usize,
    worst_ratio: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new(id: u32, name: &'static str, tolerance: f64, limit: Option<f64>) -> Self {
        Tally { id, name, tolerance, limit, start: Instant::now(), cases: 0, worst_ratio: 0.0, failures: Vec::new() }
    }

    /// Record an error measurement against the default tolerance.
    fn err(&mut self, what: impl FnOnce() -> String, e: f64) {
        self.err_tol(what, e, self.tolerance);
    }

    fn err_tol(&mut self, what: impl FnOnce() -> String, e: f64, tol: f64) {
        self.cases += 1;
        let ratio = if e.is_nan() { f64::INFINITY } else { e / tol };
        self.worst_ratio = self.worst_ratio.max(ratio);
        if e.is_nan() || e >= tol {
            self.fail(format!("{}: {e:.3e} (tolerance {tol:.0e})", what()));
        }
    }

    /// Record a pass/fail fact.
    fn check(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.cases += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn result<T>(&mut self, what: impl FnOnce() -> String, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }

    fn fail(&mut self, msg: String) {
        // Keep the report readable when a check fails wholesale.
        if self.failures.len() < 50 {
            self.failures.push(msg);
        }
    }

    fn finish(self) -> CheckReport {
        let runtime = self.start.elapsed().as_secs_f64();
        let mut failures = self.failures;
        if let Some(l) = self.limit {
            if runtime > l {
                failures.push(format!("runtime {runtime:.1} s exceeds {l} s"));
            }
        }
        CheckReport {
            id: self.id,
            name: self.name.to_string(),
            passed: failures.is_empty(),
            cases: self.cases,
            worst_ratio: self.worst_ratio,
            tolerance: self.tolerance,
            runtime_s: runtime,
            runtime_limit_s: self.limit,
            failures,
        }
    }
}

fn attempt<T>(f: impl FnOnce() -> Result<T>) -> Result<T> {
    f()
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Basis classes supported by the curve.
pub fn basis(label: CurveLabel) -> Vec<LatticeElement> {
    LatticeElement::basis().into_iter().filter(|b| b.supported_by(label).is_ok()).collect()
}

/// Half-width of a window around `ray` free of other BPS directions modulo `π`.
pub fn window(s: &BpsStructure, ray: f64) -> f64 {
    let mut d = 0.2f64;
    for a in &s.active {
        let t = (arg_angle(a.z) - ray).rem_euclid(PI);
        let gap = t.min(PI - t);
        if gap > 1e-6 {
            d = d.min(0.4 * gap);
        }
    }
    d
}

fn full(curve: &SpectralCurve) -> ([C; 3], [C; 3]) {
    let mut m = [C::default(); 3];
    let mut nu = [C::default(); 3];
    for p in Pole::ALL {
        m[p.index()] = curve.mass(p);
        nu[p.index()] = curve.nu(p);
    }
    (m, nu)
}

// ---------------------------------------------------------------------------------------
// Reference data

/// One row of the tabulated spectrum: a class, `Z/2πi` as integer coefficients of
/// `(m_0, m_1, m_∞)`, and `Ω`. Each row stands for the class and its negative.
pub struct SpectrumRow {
    pub gamma: LatticeElement,
    pub z_coeffs: [i64; 3],
    pub omega: i64,
}

/// The tabulated BPS spectra.
pub fn reference_spectrum(label: CurveLabel) -> Vec<SpectrumRow> {
    use Pole::*;
    let g = |p: Pole, plus: bool| LatticeElement::gamma(p, plus);
    let row = |gamma: LatticeElement, z_coeffs: [i64; 3], omega: i64| SpectrumRow { gamma, z_coeffs, omega };
    let loop_row = |p: Pole| {
        let mut z = [0; 3];
        z[p.index()] = 2;
        row(g(p, true) - g(p, false), z, -1)
    };
    let sgn = |plus: bool| if plus { 1 } else { -1 };
    match label {
        CurveLabel::HG => {
            let mut rows = Vec::new();
            for e in [true, false] {
                for e2 in [true, false] {
                    rows.push(row(g(Zero, true) + g(One, e) + g(Inf, e2), [1, sgn(e), sgn(e2)], 1));
                }
            }
            rows.extend([Zero, One, Inf].map(loop_row));
            rows
        }
        CurveLabel::DHG => {
            let mut rows: Vec<SpectrumRow> =
                [true, false].iter().map(|&e| row(g(One, true) + g(Inf, e), [0, 1, sgn(e)], 2)).collect();
            rows.extend([One, Inf].map(loop_row));
            rows
        }
        CurveLabel::Kum => {
            let mut rows: Vec<SpectrumRow> =
                [true, false].iter().map(|&e| row(g(Zero, true) + g(Inf, e), [1, 0, sgn(e)], 1)).collect();
            rows.push(loop_row(Zero));
            rows
        }
        CurveLabel::Leg => vec![row(g(Inf, true), [0, 0, 1], 4), loop_row(Inf)],
        CurveLabel::Bes => vec![loop_row(Zero)],
        CurveLabel::Whi => vec![row(g(Inf, true), [0, 0, 1], 2)],
        CurveLabel::Web => vec![row(g(Inf, true), [0, 0, 1], 1)],
        _ => Vec::new(),
    }
}

/// Closed forms of the path Voros coefficients `V_{β_s,k}`, written curve by curve.
pub fn tabulated_path_coeff(label: CurveLabel, pole: Pole, k: usize, m: &[C; 3], nu: &[C; 3]) -> Option<C> {
    let kk = (k * (k + 1)) as f64;
    let b = |t: C| bpoly(k + 1, t);
    let h = |t: C| b(0.5 * (1.0 + t));
    let lp = |n: C, mm: C| (b(n) + b(1.0 + n)) / (2.0 * mm).powi(k as i32);
    let pw = |x: C| x.powi(k as i32);
    let [m0, m1, mi] = *m;
    let [n0, n1, ni] = *nu;
    Some(match (label, pole) {
        (CurveLabel::HG, Pole::Zero) => {
            (h(n0 + n1 + ni) / pw(m0 + m1 + mi)
                + h(n0 - n1 + ni) / pw(m0 - m1 + mi)
                + h(n0 + n1 - ni) / pw(m0 + m1 - mi)
                + h(n0 - n1 - ni) / pw(m0 - m1 - mi)
                - lp(n0, m0))
                / kk
        }
        (CurveLabel::HG, Pole::One) => {
            (h(n0 + n1 + ni) / pw(m0 + m1 + mi) - h(n0 - n1 + ni) / pw(m0 - m1 + mi)
                + h(n0 + n1 - ni) / pw(m0 + m1 - mi)
                - h(n0 - n1 - ni) / pw(m0 - m1 - mi)
                - lp(n1, m1))
                / kk
        }
        (CurveLabel::HG, Pole::Inf) => {
            (h(n0 + n1 + ni) / pw(m0 + m1 + mi) + h(n0 - n1 + ni) / pw(m0 - m1 + mi)
                - h(n0 + n1 - ni) / pw(m0 + m1 - mi)
                - h(n0 - n1 - ni) / pw(m0 - m1 - mi)
                - lp(ni, mi))
                / kk
        }
        (CurveLabel::DHG, Pole::One) => {
            (2.0 * h(n1 + ni) / pw(m1 + mi) + 2.0 * h(n1 - ni) / pw(m1 - mi) - lp(n1, m1)) / kk
        }
        (CurveLabel::DHG, Pole::Inf) => {
            (2.0 * h(n1 + ni) / pw(m1 + mi) - 2.0 * h(n1 - ni) / pw(m1 - mi) - lp(ni, mi)) / kk
        }
        (CurveLabel::Kum, Pole::Zero) => (h(n0 + ni) / pw(m0 + mi) + h(n0 - ni) / pw(m0 - mi) - lp(n0, m0)) / kk,
        (CurveLabel::Kum, Pole::Inf) => (h(n0 + ni) / pw(m0 + mi) - h(n0 - ni) / pw(m0 - mi)) / kk,
        (CurveLabel::Leg, Pole::Inf) => (4.0 * h(ni) / pw(mi) - lp(ni, mi)) / kk,
        (CurveLabel::Bes, Pole::Zero) => -lp(n0, m0) / kk,
        (CurveLabel::Whi, Pole::Inf) => 2.0 * h(ni) / (kk * pw(mi)),
        (CurveLabel::Web, Pole::Inf) => h(ni) / (kk * pw(mi)),
        (CurveLabel::Deg3_14, Pole::Inf) => b(ni) / (kk * pw(mi)),
        (CurveLabel::Deg3_23, Pole::Inf) => C::default(),
        _ => return None,
    })
}

// ---------------------------------------------------------------------------------------
// Plot data

#[derive(Clone, Debug, Serialize)]
pub struct RayRow {
    pub curve: String,
    pub gamma: String,
    pub omega: i64,
    pub angle: f64,
    pub abs_z: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelRow {
    pub curve: String,
    pub theta: f64,
    pub hbar_abs: f64,
    pub hbar_arg: f64,
    pub quadrature_re: f64,
    pub quadrature_im: f64,
    pub closed_re: f64,
    pub closed_im: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauFitRow {
    pub curve: String,
    pub genus_cutoff: usize,
    pub hbar_abs: f64,
    pub residual: f64,
    pub fitted_exponent: f64,
}

/// Everything `report` writes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub seed: u64,
    pub curve: Option<String>,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    #[serde(skip)]
    pub rays: Vec<RayRow>,
    #[serde(skip)]
    pub borel: Vec<BorelRow>,
    #[serde(skip)]
    pub tau_fits: Vec<TauFitRow>,
}

// ---------------------------------------------------------------------------------------
// Criteria

/// Spectra agree with the table: classes and `Ω` exactly, `Z/2πi` as the tabulated
/// integer combination of masses.
pub fn spectrum_fidelity(scope: &Scope, rays: &mut Vec<RayRow>) -> CheckReport {
    let mut t = Tally::new(1, "spectrum fidelity", 1e-12, Some(1.0));
    let mut rng = scope.rng(1);
    for label in scope.curves(&CurveLabel::ALL) {
        if label.is_experimental() {
            continue;
        }
        let rows = reference_spectrum(label);
        for draw in 0..3 {
            let c = SpectralCurve::random(label, &mut rng);
            let (m, _) = full(&c);
            let s = bps_spectrum(&c);
            t.check(
                || format!("{label}: {} active classes, expected {}", s.active.len(), 2 * rows.len()),
                s.active.len() == 2 * rows.len(),
            );
            for row in &rows {
                let want = C::new(row.z_coeffs[0] as f64, 0.0) * m[0]
                    + C::new(row.z_coeffs[1] as f64, 0.0) * m[1]
                    + C::new(row.z_coeffs[2] as f64, 0.0) * m[2];
                for sign in [1i64, -1] {
                    let gamma = row.gamma * sign;
                    match s.active.iter().find(|a| a.gamma.equiv(&gamma, label)) {
                        None => t.check(|| format!("{label}: class {gamma} missing"), false),
                        Some(a) => {
                            t.check(
                                || format!("{label} {gamma}: Ω = {}, expected {}", a.omega, row.omega),
                                a.omega == row.omega,
                            );
                            let w = want * sign as f64;
                            t.err(
                                || format!("{label} {gamma}: Z/2πi"),
                                (a.z / TWO_PI_I - w).norm() / w.norm().max(1.0),
                            );
                        }
                    }
                }
            }
            if draw == 0 {
                for a in &s.active {
                    rays.push(RayRow {
                        curve: label.name().into(),
                        gamma: a.gamma.to_string(),
                        omega: a.omega,
                        angle: arg_angle(a.z),
                        abs_z: a.z.norm(),
                    });
                }
            }
        }
    }
    t.finish()
}

/// The general path-Voros formula against the curve-by-curve closed forms.
pub fn closed_form_equivalence(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(2, "closed-form Voros coefficients", 1e-12, Some(5.0));
    let mut rng = scope.rng(2);
    for label in scope.curves(&CurveLabel::ALL) {
        if label.is_experimental() || label.even_poles().is_empty() {
            continue;
        }
        for _ in 0..20 {
            let c = SpectralCurve::random(label, &mut rng);
            let (m, nu) = full(&c);
            for &p in label.even_poles() {
                for k in 1..=12 {
                    let Some(got) =
                        t.result(|| format!("{label} {p} k={k}"), voros_path_coeff(&c, &LatticeElement::beta(p), k))
                    else {
                        continue;
                    };
                    let want = tabulated_path_coeff(label, p, k, &m, &nu).expect("even pole");
                    t.err(|| format!("{label} {p} k={k}"), rel(got, want));
                }
            }
        }
    }
    t.finish()
}

/// `F_2` and `F_3` from the Eynard-Orantin recursion against the closed forms.
pub fn tr_oracle(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(3, "topological recursion F_2, F_3", 1e-8, Some(60.0));
    let mut rng = scope.rng(3);
    for label in scope.curves(&[CurveLabel::Web, CurveLabel::Bes, CurveLabel::Whi, CurveLabel::Kum]) {
        for _ in 0..3 {
            let c = SpectralCurve::random(label, &mut rng);
            for g in [2, 3] {
                if let Some(cmp) = t.result(|| format!("{label} F_{g}"), tr_compare(&c, g)) {
                    t.err(|| format!("{label} F_{g}"), rel(cmp.oracle, cmp.closed));
                }
            }
        }
    }
    t.finish()
}

/// Numerical integrals of the WKB odd forms against the closed path coefficients.
pub fn wkb_oracle(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(4, "WKB path integrals", 1e-7, Some(120.0));
    let mut rng = scope.rng(4);
    for label in scope.curves(&[CurveLabel::Web, CurveLabel::Bes, CurveLabel::HG]) {
        for _ in 0..5 {
            let c = SpectralCurve::random(label, &mut rng);
            let (m, nu) = full(&c);
            let Some(o) = t.result(|| format!("{label}"), WkbOracle::new(&c)) else { continue };
            for &p in label.even_poles() {
                let Some(v) = t.result(|| format!("{label} {p}"), o.path_voros_numeric(p, 8)) else { continue };
                for k in 1..=8 {
                    let want = tabulated_path_coeff(label, p, k, &m, &nu).expect("even pole");
                    t.err(|| format!("{label} {p} k={k}"), rel(v[k - 1], want));
                }
            }
        }
    }
    t.finish()
}

/// Laplace quadrature of the closed Borel transform against the Λ-product closed form.
pub fn borel_consistency(scope: &Scope, rows: &mut Vec<BorelRow>) -> CheckReport {
    let mut t = Tally::new(5, "Borel sums", 1e-8, Some(30.0));
    let mut rng = scope.rng(5);
    for label in scope.curves(&[CurveLabel::Web, CurveLabel::Bes]) {
        for _ in 0..2 {
            let c = SpectralCurve::random(label, &mut rng);
            let beta = LatticeElement::beta(label.even_poles()[0]);
            for ray in bps_spectrum(&c).rays() {
                for dt in [-0.9, -0.3, 0.3, 0.9] {
                    let theta = ray.angle + dt;
                    for (rad, off) in [(0.05, 0.0), (0.2, 0.5), (0.5, -0.7)] {
                        let hbar = C::from_polar(rad, theta + off);
                        let what = || format!("{label} ϑ={theta:.3} ħ={hbar:.3}");
                        let (Some(q), Some(cf)) = (
                            t.result(what, borel_sum_quadrature(&c, &beta, theta, hbar)),
                            t.result(what, log_borel_sum_path(&c, &beta, theta, hbar)),
                        ) else {
                            continue;
                        };
                        let e = (q - cf).norm();
                        t.err(what, e);
                        rows.push(BorelRow {
                            curve: label.name().into(),
                            theta,
                            hbar_abs: rad,
                            hbar_arg: hbar.arg(),
                            quadrature_re: q.re,
                            quadrature_im: q.im,
                            closed_re: cf.re,
                            closed_im: cf.im,
                            abs_err: e,
                        });
                    }
                }
            }
        }
    }
    t.finish()
}

/// Jump residuals of the Voros, minimal and holomorphic solutions across every BPS ray.
pub fn rh1_jumps(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(6, "RH1 jumps", 1e-11, Some(30.0));
    let mut rng = scope.rng(6);
    for label in scope.curves(&NONTRIVIAL) {
        for _ in 0..10 {
            let c = SpectralCurve::random(label, &mut rng);
            let s = bps_spectrum(&c);
            let sols = [RhpSolution::voros(&c), minimal_at_nu(&c), RhpSolution::holomorphic(&c, None)];
            for sol in sols {
                let Some(sol) = t.result(|| format!("{label} solution"), sol) else { continue };
                for ray in s.rays() {
                    let d = window(&s, ray.angle);
                    for rad in [0.05, 0.1, 0.2, 0.4, 0.7] {
                        let h = C::from_polar(rad, ray.angle);
                        for mu in basis(label) {
                            let what = || format!("{label} {:?} ray {:.4} μ={mu} |ħ|={rad}", sol.kind, ray.angle);
                            if let Some(res) = t.result(what, jump_residual(&sol, &mu, ray.angle + d, ray.angle - d, h))
                            {
                                t.err(what, res);
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// `|X_{ℓ,μ} e^{Z(μ)/ħ}/ξ(μ) − 1|` decreases along `ħ → 0` and ends below the tolerance.
pub fn rh2_asymptotics(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(7, "RH2 asymptotics", 1e-6, None);
    let mut rng = scope.rng(7);
    let radii = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7];
    for label in scope.curves(&NONTRIVIAL) {
        for _ in 0..2 {
            let c = SpectralCurve::random(label, &mut rng);
            let Some(sol) = t.result(|| format!("{label}"), RhpSolution::voros(&c)) else { continue };
            let th = sol.structure.default_theta();
            for mu in basis(label) {
                let Some(z) = t.result(|| format!("{label} μ={mu}"), central_charge_doubled(&c, &mu)) else {
                    continue;
                };
                let dev = |rad: f64| -> Result<f64> {
                    let h = C::from_polar(rad, th);
                    let l = sol.log_eval(&mu, th, h)? + z / h - sol.xi.log(&mu);
                    Ok((l.exp() - 1.0).norm())
                };
                let Some(devs) =
                    t.result(|| format!("{label} μ={mu}"), radii.iter().map(|&r| dev(r)).collect::<Result<Vec<f64>>>())
                else {
                    continue;
                };
                // Cancelling e^{Z/ħ} leaves rounding of relative size ε|Z/ħ|; below that
                // floor (always, for cycle classes) there is nothing to decrease.
                let floor = |rad: f64| 8.0 * f64::EPSILON * (1.0 + z.norm() / rad);
                let monotone = devs.windows(2).zip(radii.windows(2)).all(|(w, r)| w[1] <= w[0] || w[1] < floor(r[1]));
                t.check(|| format!("{label} μ={mu}: not decreasing {devs:?}"), monotone);
                t.err(|| format!("{label} μ={mu}: final deviation"), *devs.last().unwrap());
            }
        }
    }
    t.finish()
}

/// `X^Vor = ρ·X^min`, `X^Vor|_{ν*} = ϱ·X^hol`, and `ρ ≡ 1` at `ν ≡ 0`.
pub fn solution_comparisons(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(8, "solution comparisons", 1e-12, None);
    let mut rng = scope.rng(8);
    for label in scope.curves(&NONTRIVIAL) {
        for _ in 0..4 {
            let c = SpectralCurve::random(label, &mut rng);
            let th = bps_spectrum(&c).default_theta();
            let h = C::from_polar(0.3, th + 0.2);
            let zero = c.with_nu(&vec![C::default(); c.nus().len()]).expect("ν = 0 is admissible");
            let in_strip = check_strip(&c, th).is_ok();
            let star = t.result(|| format!("{label} ν*"), at_nu_star(&c, None));
            let hol =
                star.as_ref().and_then(|s| t.result(|| format!("{label} X^hol"), RhpSolution::holomorphic(s, None)));
            let min0 = t.result(|| format!("{label} X^min at ν = 0"), minimal_at_nu(&zero));
            let min = if in_strip { t.result(|| format!("{label} X^min"), minimal_at_nu(&c)) } else { None };
            for mu in basis(label) {
                let what = || format!("{label} μ={mu}");
                if let Some(min0) = &min0 {
                    let r =
                        attempt(|| Ok((x_voros(&zero, &mu, th, h)? / min0.eval(&mu, th, h)?, rho(&zero, &mu, th, h)?)));
                    if let Some((q, p)) = t.result(what, r) {
                        t.err(|| format!("{label} μ={mu}: X^Vor/X^min at ν = 0"), (q - 1.0).norm());
                        t.err(|| format!("{label} μ={mu}: ρ at ν = 0"), (p - 1.0).norm());
                    }
                }
                if let Some(min) = &min {
                    let r = attempt(|| Ok(x_voros(&c, &mu, th, h)? / (rho(&c, &mu, th, h)? * min.eval(&mu, th, h)?)));
                    if let Some(q) = t.result(what, r) {
                        t.err(|| format!("{label} μ={mu}: X^Vor/(ρ X^min)"), (q - 1.0).norm());
                    }
                }
                if let (Some(star), Some(hol)) = (&star, &hol) {
                    for th2 in [th, th + PI] {
                        let h2 = C::from_polar(0.25, th2 - 0.1);
                        let r = attempt(|| {
                            Ok(x_voros(star, &mu, th2, h2)? / (varrho(star, &mu, th2, h2)? * hol.eval(&mu, th2, h2)?))
                        });
                        if let Some(q) = t.result(what, r) {
                            t.err(|| format!("{label} μ={mu} ϑ={th2:.3}: X^Vor/(ϱ X^hol)"), (q - 1.0).norm());
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// τ identities: the κ and ϰ factors, the defining finite-difference relation and scale
/// invariance.
pub fn tau_identities(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(9, "τ identities", 1e-10, None);
    let mut rng = scope.rng(9);
    for label in scope.curves(&NONTRIVIAL) {
        for _ in 0..3 {
            let c = SpectralCurve::random(label, &mut rng);
            let th = bps_spectrum(&c).default_theta();
            let h = C::from_polar(0.3, th - 0.2);
            let Some(vor) = t.result(|| format!("{label} τ^Vor"), log_tau_vor(&c, th, h)) else { continue };
            if check_strip(&c, th).is_ok() {
                if let Some(via) = t.result(|| format!("{label} κ route"), log_tau_vor_via_kappa(&c, th, h)) {
                    t.err(|| format!("{label}: τ^Vor/(κ τ^min)"), ((vor - via).exp() - 1.0).norm());
                }
            }
            let r = attempt(|| {
                let star = at_nu_star(&c, None)?;
                let lhs = tau(TauKind::Vor, &star, None, th, h)?;
                Ok(lhs / (log_varkappa(&star, th, h)?.exp() * tau(TauKind::Hol, &star, None, th, h)?))
            });
            if let Some(q) = t.result(|| format!("{label} ϰ"), r) {
                t.err(|| format!("{label}: τ^Vor/(ϰ τ^hol) at ν*"), (q - 1.0).norm());
            }
            for lam in [C::new(2.0, 0.0), C::new(1.0, 1.0)] {
                let m: Vec<C> = c.masses().iter().map(|m| m * lam).collect();
                let r = attempt(|| log_tau_vor(&c.with_mass_values(&m)?, th + lam.arg(), h * lam));
                if let Some(v) = t.result(|| format!("{label} scaling"), r) {
                    t.err(|| format!("{label}: scale invariance λ={lam}"), ((v - vor).exp() - 1.0).norm());
                }
            }
            // ∂_{m_s} log τ = −∂_ħ log 𝒮 e^{V_{β_s}}, by central differences.
            let Some(sol) = t.result(|| format!("{label}"), RhpSolution::voros(&c)) else { continue };
            let h = C::from_polar(0.4, th + 0.1);
            let eps = 1e-5;
            for (i, &p) in label.even_poles().iter().enumerate() {
                let r = attempt(|| {
                    let shifted = |d: f64| {
                        let mut m = c.masses();
                        m[i] += d;
                        log_tau_vor(&c.with_mass_values(&m)?, th, h)
                    };
                    let lhs = (shifted(eps)? - shifted(-eps)?) / (2.0 * eps);
                    let ctx = BorelContext { theta: th, structure: sol.structure.clone() };
                    let b = LatticeElement::beta(p);
                    let rhs = -(ctx.log_borel_sum(&b, h + eps)? - ctx.log_borel_sum(&b, h - eps)?) / (2.0 * eps);
                    Ok((lhs, rhs))
                });
                if let Some((lhs, rhs)) = t.result(|| format!("{label} {p} relation"), r) {
                    let e = (lhs - rhs).norm() / (1.0 + lhs.norm());
                    t.err_tol(|| format!("{label} {p}: defining relation"), e, 1e-6);
                }
            }
        }
    }
    t.finish()
}

/// `log τ^hol − Σ_{g≤G} ħ^{2g−2} F_g = O(ħ^{2G})`, by a log-log fit over three `|ħ|`.
pub fn tau_tr_asymptotics(scope: &Scope, rows: &mut Vec<TauFitRow>) -> CheckReport {
    let mut t = Tally::new(10, "τ^hol against TR free energies", 0.2, None);
    let mut rng = scope.rng(10);
    for label in scope.curves(&[CurveLabel::Web, CurveLabel::Bes, CurveLabel::Leg]) {
        let c = SpectralCurve::random(label, &mut rng);
        let th = bps_spectrum(&c).default_theta();
        for g_max in [2usize, 3] {
            let hs = [0.2, 0.1, 0.05];
            let Some(res) = t.result(
                || format!("{label} G={g_max}"),
                hs.iter().map(|&h| tau_tr_check(&c, th, h, g_max)).collect::<Result<Vec<f64>>>(),
            ) else {
                continue;
            };
            let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
            let ys: Vec<f64> = res.iter().map(|r| r.ln()).collect();
            let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
            let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
                / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
            t.err(
                || format!("{label} G={g_max}: fitted exponent {slope:.3}, expected {}", 2 * g_max),
                (slope - (2 * g_max) as f64).abs(),
            );
            for (h, r) in hs.iter().zip(&res) {
                rows.push(TauFitRow {
                    curve: label.name().into(),
                    genus_cutoff: g_max,
                    hbar_abs: *h,
                    residual: *r,
                    fitted_exponent: slope,
                });
            }
        }
    }
    t.finish()
}

/// The Weber difference-equation recursion against the path coefficients.
pub fn difference_equation(scope: &Scope) -> CheckReport {
    let mut t = Tally::new(11, "Weber difference equation", 1e-12, None);
    let mut rng = scope.rng(11);
    if scope.curves(&[CurveLabel::Web]).is_empty() {
        return t.finish();
    }
    for _ in 0..10 {
        let c = SpectralCurve::random(CurveLabel::Web, &mut rng);
        let (m, nu) = (c.mass(Pole::Inf), c.nu(Pole::Inf));
        for k in 1..=10 {
            let r = attempt(|| {
                Ok((weber_difference_oracle(k, m, nu)?, voros_path_coeff(&c, &LatticeElement::beta(Pole::Inf), k)?))
            });
            if let Some((got, want)) = t.result(|| format!("k={k}"), r) {
                t.err(|| format!("m={m:.3} ν={nu:.3} k={k}"), rel(got, want));
            }
        }
    }
    t.finish()
}

/// Runs every criterion in order.
pub fn run_all(scope: &Scope) -> Report {
    let mut rep = Report { seed: scope.seed, curve: scope.only.map(|l| l.name().to_string()), ..Default::default() };
    rep.checks.push(spectrum_fidelity(scope, &mut rep.rays));
    rep.checks.push(closed_form_equivalence(scope));
    rep.checks.push(tr_oracle(scope));
    rep.checks.push(wkb_oracle(scope));
    rep.checks.push(borel_consistency(scope, &mut rep.borel));
    rep.checks.push(rh1_jumps(scope));
    rep.checks.push(rh2_asymptotics(scope));
    rep.checks.push(solution_comparisons(scope));
    rep.checks.push(tau_identities(scope));
    rep.checks.push(tau_tr_asymptotics(scope, &mut rep.tau_fits));
    rep.checks.push(difference_equation(scope));
    rep.passed = rep.checks.iter().all(|c| c.passed);
    rep
}
