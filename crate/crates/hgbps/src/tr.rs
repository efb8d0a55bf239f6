//! Eynard-Orantin topological recursion on the genus-zero parametrized curves.
//!
//! Each ramification point `a_r` is a fixed point of the global involution `σ`, and
//! gets the Möbius coordinate `u_r = (z − a_r)/(z − a'_r)`, `a'_r` the other fixed
//! point, in which `σ` is `u ↦ −u`. For `2g − 2 + n > 0` every correlator is a finite
//! combination of `e_{r,j} = du_r/u_r^{j+1}`, `j ≥ 1`, so `W_{g,n}` is stored by its
//! coefficients on products of these. Residues are taken on Laurent jets in `u_r`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::SpectralCurve;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::param::{build_parametrization, Mobius, Parametrization, Rational};
use crate::series::free_energy;

type C = Complex64;

/// `(ramification index r, order j)` of `e_{r,j}`.
pub type Idx = (usize, usize);

/// `W_{g,n} = Σ coeff[(i_1..i_n)] Π e_{i_k}(z_k)`.
#[derive(Clone, Debug, Default)]
pub struct Correlator {
    pub g: usize,
    pub n: usize,
    pub coeffs: HashMap<Vec<Idx>, C>,
}

impl Correlator {
    /// Coefficient of `dz_1 ⋯ dz_n` at the points `zs`, with `coords[r]` the map `z ↦ u_r`.
    pub fn eval(&self, coords: &[Mobius], zs: &[C]) -> C {
        self.coeffs
            .iter()
            .map(|(key, c)| {
                key.iter().zip(zs).fold(*c, |acc, (&(r, j), &z)| {
                    let m = coords[r];
                    let du = (m.a * m.d - m.b * m.c) / (m.c * z + m.d).powi(2);
                    acc * du * m.apply(z).powi(-(j as i32) - 1)
                })
            })
            .sum()
    }

    /// Highest pole order in the first variable at ramification point `r`.
    pub fn pole_order(&self, r: usize, tol: f64) -> usize {
        self.coeffs.iter().filter(|(k, c)| k[0].0 == r && c.norm() > tol).map(|(k, _)| k[0].1 + 1).max().unwrap_or(0)
    }
}

/// `j ≤ 6g − 5 + 2n`: pole orders of `W_{g,n}` are at most `6g − 4 + 2n`.
fn jmax(g: usize, n: usize) -> usize {
    6 * g + 2 * n - 5
}

fn mobius_inverse(m: &Mobius) -> Mobius {
    Mobius { a: m.d, b: -m.b, c: -m.c, d: m.a }
}

/// `f ∘ g`.
fn mobius_compose(f: &Mobius, g: &Mobius) -> Mobius {
    Mobius { a: f.a * g.a + f.b * g.c, b: f.a * g.b + f.b * g.d, c: f.c * g.a + f.d * g.c, d: f.c * g.b + f.d * g.d }
}

/// Coordinate `z ↦ (z − p)/(z − q)` (or `z − p` when `q = ∞`) for the fixed points of `σ`.
fn local_coordinate(sigma: &Mobius, p: C) -> Result<Mobius> {
    let one = C::new(1.0, 0.0);
    // Fixed points solve c z² + (d − a) z − b = 0.
    let q = if sigma.c.norm() < 1e-14 {
        None
    } else {
        let sum = -(sigma.d - sigma.a) / sigma.c;
        Some(sum - p)
    };
    match q {
        None => Ok(Mobius { a: one, b: -p, c: C::default(), d: one }),
        Some(q) if (q - p).norm() > 1e-12 => Ok(Mobius { a: one, b: -p, c: one, d: -q }),
        Some(_) => Err(Error::Unsupported("involution with a single fixed point".into())),
    }
}

/// `f(u) du ↦ σ*(f du) = −f(−u) du`.
fn pullback_sigma(f: &Jet) -> Jet {
    let c = f.c.iter().enumerate().map(|(k, z)| if (f.val + k as i32).rem_euclid(2) == 1 { *z } else { -z }).collect();
    Jet::new(f.val, c)
}

struct Local {
    /// `u ↦ z`.
    to_z: Mobius,
    /// `k_j = u^j/ω` for odd `j` (zero for even `j`), `ω = (y(u) − y(−u)) dx/du`.
    kernel: Vec<Jet>,
    /// Primitive of `y dx` in `u`.
    phi: Jet,
}

/// A recursion session on one curve with memoized correlators.
pub struct TrEngine {
    pub param: Parametrization,
    /// `z ↦ u_r` for each ramification point.
    pub coords: Vec<Mobius>,
    len: usize,
    locals: Vec<Local>,
    basis: HashMap<(usize, Idx, bool), Jet>,
    memo: HashMap<(usize, usize), Correlator>,
}

impl TrEngine {
    /// `len` is the jet depth; `None` picks `6 g_max + 10`.
    pub fn new(curve: &SpectralCurve, g_max: usize, len: Option<usize>) -> Result<Self> {
        let param = build_parametrization(curve)?;
        TrEngine::with_param(param, len.unwrap_or(6 * g_max + 10))
    }

    pub fn with_param(param: Parametrization, len: usize) -> Result<Self> {
        let mut locals = Vec::new();
        let mut coords = Vec::new();
        for &a in &param.ramification {
            let coord = local_coordinate(&param.involution, a)?;
            let to_z = mobius_inverse(&coord);
            let z = to_z.jet(C::default(), len)?;
            let y = compose_rational(&param.y, &z)?;
            let dx = &compose_rational(&param.dx(), &z)? * &z.deriv();
            let omega = (&(&y + &pullback_sigma(&y)) * &dx).normalized_head(1e-12, 4);
            let inv = omega.inv()?;
            let mut kernel = vec![Jet::zero(0, len)];
            for j in 1..=jmax(6, 1) + 2 {
                kernel.push(if j % 2 == 1 { &Jet::monomial(j as i32, len) * &inv } else { Jet::zero(j as i32, len) });
            }
            let phi = (&y * &dx).integrate()?;
            locals.push(Local { to_z, kernel, phi });
            coords.push(coord);
        }
        Ok(TrEngine { param, coords, len, locals, basis: HashMap::new(), memo: HashMap::new() })
    }

    pub fn jet_len(&self) -> usize {
        self.len
    }

    /// Jet in `u_r` of `e_i` (or of `σ*e_i`), as the coefficient of `du_r`.
    fn basis_jet(&mut self, r: usize, i: Idx, sigma: bool) -> Result<Jet> {
        if let Some(j) = self.basis.get(&(r, i, sigma)) {
            return Ok(j.clone());
        }
        let (rp, j) = i;
        let p = -(j as i32) - 1;
        let plain = if rp == r {
            Jet::monomial(p, self.len)
        } else {
            let psi = mobius_compose(&self.coords[rp], &self.locals[r].to_z).jet(C::default(), self.len)?;
            &psi.deriv() * &psi.normalized_head(1e-12, 4).powi(p)?
        };
        let out = if sigma { pullback_sigma(&plain) } else { plain };
        self.basis.insert((r, i, sigma), out.clone());
        Ok(out)
    }

    /// `W_{g,n}(z, ·)` with `z` (or `σz`) at `u_r`, as jets indexed by the basis labels
    /// of the remaining `n − 1` variables. `W_{0,2}` is expanded in `e_{r,j}`, `j ≤ j_cap`.
    fn slot_jets(&mut self, g: usize, n: usize, r: usize, sigma: bool, j_cap: usize) -> Result<HashMap<Vec<Idx>, Jet>> {
        let mut out: HashMap<Vec<Idx>, Jet> = HashMap::new();
        if (g, n) == (0, 2) {
            for j in 1..=j_cap {
                // du du'/(u' − u)² = Σ j u^{j−1} du · e_{r,j}(u')
                let term = Jet::monomial(j as i32 - 1, self.len).scale(C::new(j as f64, 0.0));
                out.insert(vec![(r, j)], if sigma { pullback_sigma(&term) } else { term });
            }
            return Ok(out);
        }
        let w = self.correlator(g, n)?.clone();
        for (key, c) in &w.coeffs {
            let e = self.basis_jet(r, key[0], sigma)?.scale(*c);
            let rest = key[1..].to_vec();
            match out.get_mut(&rest) {
                Some(acc) => *acc = &*acc + &e,
                None => {
                    out.insert(rest, e);
                }
            }
        }
        Ok(out)
    }

    /// `W_{g,n}` for `2g − 2 + n > 0`.
    pub fn correlator(&mut self, g: usize, n: usize) -> Result<&Correlator> {
        if 2 * g + n <= 2 || n == 0 {
            return Err(Error::Unsupported(format!("W_{{{g},{n}}} is not produced by the recursion")));
        }
        if !self.memo.contains_key(&(g, n)) {
            let w = self.recurse(g, n)?;
            self.memo.insert((g, n), w);
        }
        Ok(&self.memo[&(g, n)])
    }

    fn recurse(&mut self, g: usize, n_total: usize) -> Result<Correlator> {
        let n = n_total - 1;
        let cap = jmax(g, n_total);
        let nr = self.param.ramification.len();
        let mut out = Correlator { g, n: n_total, coeffs: HashMap::new() };
        for r in 0..nr {
            let mut integrand: HashMap<Vec<Idx>, Jet> = HashMap::new();
            let mut add = |key: Vec<Idx>, j: Jet| match integrand.get_mut(&key) {
                Some(acc) => *acc = &*acc + &j,
                None => {
                    integrand.insert(key, j);
                }
            };
            if g >= 1 {
                if (g, n) == (1, 0) {
                    // B(u, −u) = −du²/(4u²)
                    add(vec![], Jet::monomial(-2, self.len).scale(C::new(-0.25, 0.0)));
                } else {
                    let w = self.correlator(g - 1, n + 2)?.clone();
                    let mut partial: HashMap<(Idx, Vec<Idx>), Jet> = HashMap::new();
                    for (key, c) in &w.coeffs {
                        let e = self.basis_jet(r, key[0], false)?.scale(*c);
                        let k = (key[1], key[2..].to_vec());
                        match partial.get_mut(&k) {
                            Some(acc) => *acc = &*acc + &e,
                            None => {
                                partial.insert(k, e);
                            }
                        }
                    }
                    for ((i1, rest), jet) in partial {
                        let es = self.basis_jet(r, i1, true)?;
                        add(rest, &jet * &es);
                    }
                }
            }
            for mask in 0u32..(1 << n) {
                let i1: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
                let i2: Vec<usize> = (0..n).filter(|k| mask & (1 << k) == 0).collect();
                for g1 in 0..=g {
                    let g2 = g - g1;
                    if (g1 == 0 && i1.is_empty()) || (g2 == 0 && i2.is_empty()) {
                        continue;
                    }
                    let a = self.slot_jets(g1, i1.len() + 1, r, false, cap)?;
                    let b = self.slot_jets(g2, i2.len() + 1, r, true, cap)?;
                    for (ka, ja) in &a {
                        for (kb, jb) in &b {
                            let mut key = vec![(0, 0); n];
                            for (p, &v) in i1.iter().zip(ka) {
                                key[*p] = v;
                            }
                            for (p, &v) in i2.iter().zip(kb) {
                                key[*p] = v;
                            }
                            add(key, ja * jb);
                        }
                    }
                }
            }
            for (rest, jet) in integrand {
                for j in (1..=cap).step_by(2) {
                    let res = (&self.locals[r].kernel[j] * &jet).residue()?;
                    if res != C::default() {
                        let mut key = vec![(r, j)];
                        key.extend(rest.iter().copied());
                        *out.coeffs.entry(key).or_default() += res;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `F_g = (2 − 2g)^{-1} Σ_r Res_{a_r} Φ W_{g,1}` for `g ≥ 2`, with `dΦ = y dx`
    /// and `Φ(a_r) = shift`.
    pub fn free_energy(&mut self, g: usize, shift: C) -> Result<C> {
        if g < 2 {
            return Err(Error::Unsupported("F_g from the recursion needs g ≥ 2".into()));
        }
        let w = self.correlator(g, 1)?.clone();
        let mut total = C::default();
        for r in 0..self.locals.len() {
            let mut acc = Jet::zero(-(jmax(g, 1) as i32) - 1, self.len);
            for (key, c) in &w.coeffs {
                acc = &acc + &self.basis_jet(r, key[0], false)?.scale(*c);
            }
            let phi = self.locals[r].phi.add_const(shift);
            total += (&phi * &acc).residue()?;
        }
        Ok(total / (2.0 - 2.0 * g as f64))
    }
}

/// `f(z(u))` for a rational `f` and a jet `z(u)` at which `f` is finite or has a pole.
fn compose_rational(f: &Rational, z: &Jet) -> Result<Jet> {
    let num = z.poly_eval(&f.num.0).normalized_head(1e-13, 4);
    let den = z.poly_eval(&f.den.0).normalized_head(1e-13, 4);
    num.div(&den)
}

#[derive(Clone, Debug, Serialize)]
pub struct TrComparison {
    pub g: usize,
    #[serde(rename = "F_g_oracle", with = "crate::json::complex")]
    pub oracle: C,
    #[serde(rename = "F_g_closed", with = "crate::json::complex")]
    pub closed: C,
    pub abs_diff: f64,
}

/// `F_g` from the recursion, retrying with deeper jets when truncation bites.
pub fn tr_free_energy(curve: &SpectralCurve, g: usize) -> Result<C> {
    let mut len = None;
    for _ in 0..3 {
        let mut eng = TrEngine::new(curve, g, len)?;
        match eng.free_energy(g, C::default()) {
            Err(Error::TruncationInsufficient(_)) => len = Some(2 * eng.len),
            other => return other,
        }
    }
    Err(Error::TruncationInsufficient(format!("F_{g} after deepening jets")))
}

pub fn tr_compare(curve: &SpectralCurve, g: usize) -> Result<TrComparison> {
    let oracle = tr_free_energy(curve, g)?;
    let closed = free_energy(curve, g, crate::bps::bps_spectrum(curve).default_theta())?;
    Ok(TrComparison { g, oracle, closed, abs_diff: (oracle - closed).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveLabel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn weber_values() {
        let c = SpectralCurve::with_masses(CurveLabel::Web, &[r(1.0)]).unwrap();
        assert!((tr_free_energy(&c, 2).unwrap() - r(-1.0 / 240.0)).norm() < 1e-10);
        assert!((tr_free_energy(&c, 3).unwrap() - r(1.0 / 1008.0)).norm() < 1e-9);
    }

    #[test]
    fn matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for label in [
            CurveLabel::Web,
            CurveLabel::Bes,
            CurveLabel::Whi,
            CurveLabel::Kum,
            CurveLabel::Leg,
            CurveLabel::DHG,
            CurveLabel::HG,
        ] {
            for _ in 0..5 {
                let c = SpectralCurve::random(label, &mut rng);
                for g in [2, 3] {
                    let cmp = tr_compare(&c, g).unwrap();
                    assert!(cmp.abs_diff < 1e-8 * cmp.closed.norm().max(1e-3), "{label} g={g}: {:?}", cmp);
                }
            }
        }
    }

    #[test]
    fn trivial_spectrum_curves_vanish() {
        for label in [CurveLabel::Ai, CurveLabel::DBes] {
            let c = SpectralCurve::with_masses(label, &[]).unwrap();
            for g in [2, 3] {
                assert!(tr_free_energy(&c, g).unwrap().norm() < 1e-12, "{label} {g}");
            }
        }
    }

    #[test]
    fn primitive_constant_and_depth_do_not_matter() {
        let c = SpectralCurve::with_masses(CurveLabel::Kum, &[C::new(0.7, 0.2), C::new(-1.1, 0.5)]).unwrap();
        let mut e = TrEngine::new(&c, 3, None).unwrap();
        let base = e.free_energy(3, C::default()).unwrap();
        let moved = e.free_energy(3, C::new(2.5, -1.0)).unwrap();
        assert!((base - moved).norm() < 1e-12 * base.norm().max(1.0));
        let mut deeper = TrEngine::new(&c, 3, Some(e.jet_len() + 8)).unwrap();
        assert!((deeper.free_energy(3, C::default()).unwrap() - base).norm() < 1e-12 * base.norm().max(1.0));
    }

    #[test]
    fn correlators_are_symmetric() {
        let c = SpectralCurve::with_masses(CurveLabel::Whi, &[C::new(0.9, -0.3)]).unwrap();
        let mut e = TrEngine::new(&c, 2, None).unwrap();
        let coords = e.coords.clone();
        let pts = [C::new(0.3, 0.7), C::new(-1.4, 0.2), C::new(2.1, -0.9)];
        for (g, n) in [(0, 3), (1, 2), (0, 4)] {
            let w = e.correlator(g, n).unwrap().clone();
            let mut zs: Vec<C> = pts.iter().copied().cycle().take(n).collect();
            if n == 4 {
                zs[3] = C::new(0.1, -0.4);
            }
            let base = w.eval(&coords, &zs);
            assert!(base.norm() > 1e-8);
            for (a, b) in [(0, 1), (1, n - 1), (0, n - 1)] {
                let mut sw = zs.clone();
                sw.swap(a, b);
                assert!((w.eval(&coords, &sw) - base).norm() < 1e-10 * base.norm(), "W_{{{g},{n}}}");
            }
        }
    }

    #[test]
    fn weber_w11_pole_orders() {
        let c = SpectralCurve::with_masses(CurveLabel::Web, &[r(1.0)]).unwrap();
        let mut e = TrEngine::new(&c, 1, None).unwrap();
        let w = e.correlator(1, 1).unwrap().clone();
        for rr in 0..2 {
            let ord = w.pole_order(rr, 1e-12);
            assert!((2..=4).contains(&ord), "{ord}");
        }
    }
}
