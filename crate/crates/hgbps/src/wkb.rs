//! WKB cross-check of the Voros coefficients.
//!
//! For the quantum curve `ħ²ψ'' + qħψ' + rψ = 0` the logarithmic derivative
//! `S = Σ_{k≥−1} ħ^k s_k` obeys a Riccati recursion. The coefficients are computed
//! pointwise from Taylor jets of the rational parametrization `z ↦ (x, y)`, and the
//! odd parts are integrated numerically between the two preimages of a pole.

use std::ops::Neg;

use num_complex::{Complex, Complex64};
use num_traits::{Num, Zero};
use twofloat::TwoFloat;

use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};
use crate::param::{build_parametrization, Parametrization, Poly, Rational, ZPoint};
use crate::quad::integrate_fixed_vec;

type C = Complex64;
/// Double-double complex numbers.
type Dd = Complex<TwoFloat>;

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

/// Field the Riccati recursion is evaluated in.
trait Scalar: Copy + Num + Neg<Output = Self> {
    fn lift(c: C) -> Self;
    fn lower(self) -> C;
}

impl Scalar for C {
    fn lift(c: C) -> Self {
        c
    }
    fn lower(self) -> C {
        self
    }
}

impl Scalar for Dd {
    fn lift(c: C) -> Self {
        Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
    }
    fn lower(self) -> C {
        C::new(self.re.hi() + self.re.lo(), self.im.hi() + self.im.lo())
    }
}

/// Truncated Taylor series `Σ c[j] t^j` at a regular point.
#[derive(Clone, Debug)]
struct Ser<T>(Vec<T>);

impl<T: Scalar> Ser<T> {
    fn constant(a: T, len: usize) -> Self {
        let mut c = vec![T::zero(); len];
        c[0] = a;
        Ser(c)
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn value(&self) -> T {
        self.0[0]
    }

    fn add(&self, o: &Self) -> Self {
        Ser(self.0.iter().zip(&o.0).map(|(a, b)| *a + *b).collect())
    }

    fn add_const(&self, a: T) -> Self {
        let mut c = self.0.clone();
        c[0] = c[0] + a;
        Ser(c)
    }

    fn scale(&self, a: T) -> Self {
        Ser(self.0.iter().map(|z| *z * a).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        let mut c = vec![T::zero(); len];
        for i in 0..len {
            for j in 0..len - i {
                c[i + j] = c[i + j] + self.0[i] * o.0[j];
            }
        }
        Ser(c)
    }

    fn inv(&self) -> Result<Self> {
        let n = self.len();
        if self.0[0].lower().norm() == 0.0 {
            return Err(Error::PoleHit("inverse of a series vanishing at the base point".into()));
        }
        let mut out = vec![T::zero(); n];
        out[0] = T::one() / self.0[0];
        for k in 1..n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + self.0[j] * out[k - j];
            }
            out[k] = -(s * out[0]);
        }
        Ok(Ser(out))
    }

    /// `d/dt`, one coefficient shorter.
    fn deriv(&self) -> Self {
        Ser(self.0.iter().enumerate().skip(1).map(|(j, z)| *z * T::lift(r(j as f64))).collect())
    }

    /// Horner evaluation of `Σ p[i] X^i` at this series.
    fn poly_eval(&self, p: &[T]) -> Self {
        let mut acc = Ser::constant(T::zero(), self.len());
        for a in p.iter().rev() {
            acc = acc.mul(self).add_const(*a);
        }
        acc
    }

    fn of_poly(p: &Poly, z0: T, len: usize) -> Self {
        let t = Ser({
            let mut c = vec![T::zero(); len];
            c[0] = z0;
            if len > 1 {
                c[1] = T::one();
            }
            c
        });
        let coeffs: Vec<T> = p.0.iter().map(|c| T::lift(*c)).collect();
        t.poly_eval(&coeffs)
    }

    fn of_rational(f: &Rational, z0: T, len: usize) -> Result<Self> {
        Ok(Ser::of_poly(&f.num, z0, len).mul(&Ser::of_poly(&f.den, z0, len).inv()?))
    }
}

/// `q1` (absent when `q = 0`) and `(r0, r1, r2)`.
type CurveSeries<T> = (Option<Ser<T>>, [Ser<T>; 3]);

/// The ħ-expansion of `q` and `r` for one of the supported quantum curves.
#[derive(Clone, Debug)]
enum Coefficients {
    /// `ψ'' = (x²/4 − m + ħν/2) ψ`.
    Weber { m: C, nu: C },
    /// `ħ²ψ'' = ((x + 4m²)/(4x²) − ħ mν/x² − ħ²(1 − ν²)/(4x²)) ψ`.
    Bessel { m: C, nu: C },
    /// The Gauss equation with exponents `ν_{s±}` at `x = 0, 1, ∞`, indexed as [0, 1, ∞].
    Gauss { m: [C; 3], nu_plus: [C; 3], nu_minus: [C; 3] },
}

impl Coefficients {
    /// Series of `q1` and `(r0, r1, r2)` in `z`, given the series of `x(z)`.
    fn at<T: Scalar>(&self, x: &Ser<T>) -> Result<CurveSeries<T>> {
        let len = x.len();
        let l = T::lift;
        let cst = |a: C| Ser::constant(l(a), len);
        match self {
            Coefficients::Weber { m, nu } => {
                let r0 = x.mul(x).scale(l(r(-0.25))).add_const(l(*m));
                Ok((None, [r0, cst(-nu / 2.0), cst(C::zero())]))
            }
            Coefficients::Bessel { m, nu } => {
                let inv_x2 = x.mul(x).inv()?;
                let r0 = x.add_const(l(4.0 * m * m)).mul(&inv_x2).scale(l(r(-0.25)));
                Ok((None, [r0, inv_x2.scale(l(m * nu)), inv_x2.scale(l((1.0 - nu * nu) / 4.0))]))
            }
            Coefficients::Gauss { m, nu_plus, nu_minus } => {
                let [m0, m1, mi] = *m;
                let ix = x.inv()?;
                let ixm1 = x.add_const(l(r(-1.0))).inv()?;
                let a = |i: usize| l(r(1.0) - nu_plus[i] - nu_minus[i]);
                let q1 = ix.scale(a(0)).add(&ixm1.scale(a(1)));
                // 1/(x²(x−1)²)
                let den = ix.mul(&ix).mul(&ixm1.mul(&ixm1));
                let r0num = x.poly_eval(&[m0 * m0, -(mi * mi + m0 * m0 - m1 * m1), mi * mi].map(l));
                let r0 = r0num.mul(&den).scale(l(r(-1.0)));
                // −A(x−1) + Bx + Cx(x−1) over x²(x−1)²
                let combo = |a: C, b: C, c: C| x.poly_eval(&[a, b - a - c, c].map(l)).mul(&den);
                let d = |i: usize| nu_plus[i] - nu_minus[i];
                let r1 = combo(d(0) * m0, d(1) * m1, d(2) * mi);
                let p = |i: usize| nu_plus[i] * nu_minus[i];
                let r2 = combo(p(0), p(1), p(2));
                Ok((Some(q1), [r0, r1, r2]))
            }
        }
    }
}

/// Riccati data for one curve: the parametrization plus the quantum-curve coefficients.
#[derive(Clone, Debug)]
pub struct WkbOracle {
    pub param: Parametrization,
    coeffs: Coefficients,
}

impl WkbOracle {
    /// Quantum curve for Web, Bes or HG. For HG the exponents are split as
    /// `ν_{s±} = (c_s ± ν_s)/2` with `c = (1/3, 1/3, 1/3)`.
    pub fn new(curve: &SpectralCurve) -> Result<Self> {
        Self::with_split(curve, [r(1.0 / 3.0); 3])
    }

    /// As [`Self::new`] with explicit HG weights `c_s`, which must sum to 1.
    pub fn with_split(curve: &SpectralCurve, c: [C; 3]) -> Result<Self> {
        let coeffs = match curve.label {
            CurveLabel::Web => Coefficients::Weber { m: curve.mass(Pole::Inf), nu: curve.nu(Pole::Inf) },
            CurveLabel::Bes => Coefficients::Bessel { m: curve.mass(Pole::Zero), nu: curve.nu(Pole::Zero) },
            CurveLabel::HG => {
                if (c[0] + c[1] + c[2] - 1.0).norm() > 1e-12 {
                    return Err(Error::Config("HG exponent weights must sum to 1".into()));
                }
                let poles = [Pole::Zero, Pole::One, Pole::Inf];
                let nu = poles.map(|p| curve.nu(p));
                Coefficients::Gauss {
                    m: poles.map(|p| curve.mass(p)),
                    nu_plus: [0, 1, 2].map(|i| (c[i] + nu[i]) / 2.0),
                    nu_minus: [0, 1, 2].map(|i| (c[i] - nu[i]) / 2.0),
                }
            }
            other => return Err(Error::Unsupported(format!("no quantum curve for {}", other.name()))),
        };
        Ok(WkbOracle { param: build_parametrization(curve)?, coeffs })
    }

    /// Series in `t = z − z0` of `s_{−1}, …, s_{k_max}` on the branch with `s_{−1} = sign·y`,
    /// together with the series of `x'(z)`. The series for `s_n` has `k_max + 3 − n` terms.
    fn riccati<T: Scalar>(&self, z0: C, k_max: usize, sign: f64) -> Result<(Vec<Ser<T>>, Ser<T>)> {
        let len = k_max + 3;
        let z0 = T::lift(z0);
        let x = Ser::of_rational(&self.param.x, z0, len + 1)?;
        let xp = x.deriv();
        let inv_xp = xp.inv()?;
        let x = Ser(x.0[..len].to_vec());
        let y = Ser::of_rational(&self.param.y, z0, len)?.scale(T::lift(r(sign)));
        let (q1, rr) = self.coeffs.at(&x)?;
        let inv_2y = y.scale(T::lift(r(2.0))).inv()?;
        let minus_one = T::lift(r(-1.0));
        // s[0] is s_{−1}
        let mut s = vec![y];
        for n in 1..=k_max + 1 {
            let prev = &s[n - 1];
            let mut acc = prev.deriv().mul(&inv_xp);
            if let Some(q1) = &q1 {
                acc = acc.add(&q1.mul(prev));
            }
            for k in 1..n {
                acc = acc.add(&s[k].mul(&s[n - k]));
            }
            if n <= 2 {
                acc = acc.add(&rr[n]);
            }
            s.push(acc.mul(&inv_2y).scale(minus_one));
        }
        Ok((s, xp))
    }

    fn odd_forms_in<T: Scalar>(&self, z: C, k_max: usize) -> Result<Vec<C>> {
        let (plus, xp) = self.riccati::<T>(z, k_max, 1.0)?;
        let (minus, _) = self.riccati::<T>(z, k_max, -1.0)?;
        let half_xp = xp.value() * T::lift(r(0.5));
        Ok(plus.iter().zip(&minus).map(|(a, b)| ((a.value() - b.value()) * half_xp).lower()).collect())
    }

    /// Coefficients of `dz` in the odd forms `dS^odd_k`, `k = −1, …, k_max`, at `z`.
    pub fn odd_forms(&self, z: C, k_max: usize) -> Result<Vec<C>> {
        self.odd_forms_in::<C>(z, k_max)
    }

    /// As [`Self::odd_forms`], with the recursion run in double-double arithmetic.
    pub fn odd_forms_precise(&self, z: C, k_max: usize) -> Result<Vec<C>> {
        self.odd_forms_in::<Dd>(z, k_max)
    }

    /// Residual `ħ²(S' + S²) + qħS + r` of the truncated solution, `S = Σ_{k≤k_max} ħ^k s_k`
    /// written as a function of `x`, at the point over `z`.
    pub fn riccati_residual(&self, z: C, k_max: usize, hbar: C) -> Result<C> {
        let (s, xp) = self.riccati::<C>(z, k_max, 1.0)?;
        let mut sv = C::zero();
        let mut ds = C::zero();
        for (i, sk) in s.iter().enumerate().take(k_max + 2) {
            let h = hbar.powi(i as i32 - 1);
            sv += sk.value() * h;
            ds += sk.0[1] * h;
        }
        ds /= xp.value();
        let x = Ser::of_rational(&self.param.x, z, 1)?;
        let (q1, rr) = self.coeffs.at(&x)?;
        let q = q1.map(|q| q.value()).unwrap_or_default() * hbar;
        let rv = rr[0].value() + hbar * rr[1].value() + hbar * hbar * rr[2].value();
        Ok(hbar * hbar * (ds + sv * sv) + q * hbar * sv + rv)
    }

    /// Points where the forms of order `k ≥ 1` may be singular.
    fn singular_points(&self) -> Vec<ZPoint> {
        let mut out: Vec<ZPoint> = self.param.ramification.iter().map(|&z| ZPoint::Finite(z)).collect();
        out.extend(self.param.odd_points.iter().copied());
        out
    }

    /// Residues of `dS^odd_k`, `k = −1, …, k_max`, at `p`, from the trapezoid rule on a
    /// circle that separates `p` from the other singular points.
    pub fn residues(&self, p: ZPoint, k_max: usize) -> Result<Vec<C>> {
        Ok(self.residues_with_scale(p, k_max)?.0)
    }

    /// As [`Self::residues`], together with the mean modulus of each summand, which sets
    /// the rounding error.
    pub fn residues_with_scale(&self, p: ZPoint, k_max: usize) -> Result<(Vec<C>, Vec<f64>)> {
        const N: usize = 128;
        let others: Vec<C> = self
            .singular_points()
            .into_iter()
            .chain(self.param.pole_points.iter().map(|(_, z)| *z))
            .filter(|q| *q != p)
            .filter_map(ZPoint::finite)
            .collect();
        // At infinity the circle is traversed in the `1/z` orientation, hence the sign.
        let (centre, rad, sign) = match p {
            ZPoint::Finite(c) => (c, others.iter().map(|q| (q - c).norm()).fold(1.0, f64::min) / 2.0, 1.0),
            ZPoint::Infinity => (C::zero(), 2.0 * others.iter().map(|q| q.norm()).fold(1.0, f64::max), -1.0),
        };
        let mut out = vec![C::zero(); k_max + 2];
        let mut scale = vec![0.0; k_max + 2];
        for j in 0..N {
            let u = C::from_polar(rad, std::f64::consts::TAU * j as f64 / N as f64);
            for (k, v) in self.odd_forms_precise(centre + u, k_max)?.into_iter().enumerate() {
                let term = v * u * sign / N as f64;
                out[k] += term;
                scale[k] += term.norm();
            }
        }
        Ok((out, scale))
    }

    /// `∫ dS^odd_k` from `p_{s−}` to `p_{s+}` for `k = 1, …, k_max`, along the contour
    /// chosen by [`Contour::Auto`].
    pub fn path_voros_numeric(&self, pole: Pole, k_max: usize) -> Result<Vec<C>> {
        self.path_voros_along(pole, k_max, Contour::Auto)
    }

    /// As [`Self::path_voros_numeric`] along a chosen contour.
    ///
    /// Near each endpoint the forms are evaluated through `x`, which has a pole or a
    /// critical value there, so the last stretch is integrated termwise from a Taylor
    /// expansion sampled on a circle around the endpoint instead. The integrand is
    /// evaluated in double-double arithmetic; the contour choice uses plain `f64`.
    pub fn path_voros_along(&self, pole: Pole, k_max: usize, contour: Contour) -> Result<Vec<C>> {
        let from = self.param.point(pole, false);
        let to = self.param.point(pole, true);
        let (Some(from), Some(to)) = (from, to) else {
            return Err(Error::Unsupported(format!("no pole points over {}", pole.key())));
        };
        let base = Chart::new(from, to);
        let form = |chart: &Chart, w: C| -> Result<Vec<C>> {
            let (z, dz) = chart.map(w);
            Ok(self.odd_forms(z, k_max)?[2..].iter().map(|c| c * dz).collect())
        };
        let form_precise = |chart: &Chart, w: C| -> Result<Vec<C>> {
            let (z, dz) = chart.map(w);
            Ok(self.odd_forms_precise(z, k_max)?[2..].iter().map(|c| c * dz).collect())
        };
        let best_of = |side: Option<f64>| -> Chart {
            let l1 = |ch: &Chart| -> f64 {
                let n = 48;
                (0..n)
                    .map(|j| form(ch, r((j as f64 + 0.5) / n as f64)).map_or(f64::INFINITY, |v| v[k_max - 1].norm()))
                    .sum()
            };
            let mut best = base.clone();
            let mut score = if side.is_none() { l1(&best) } else { f64::INFINITY };
            for j in 0..64 {
                let theta = std::f64::consts::PI * ((j as f64 + 0.5) / 64.0 - 0.5);
                if side.is_some_and(|sd| sd * theta < 0.0) {
                    continue;
                }
                let cand = base.bulged(theta.tan());
                let sc = l1(&cand);
                if sc < score {
                    best = cand;
                    score = sc;
                }
            }
            best
        };
        let chart = match contour {
            Contour::Auto => best_of(None),
            Contour::Side(sd) => best_of(Some(sd)),
            Contour::Segment => base,
            Contour::Bulge(s) => base.bulged(s),
        };
        let avoid: Vec<C> = self.singular_points().into_iter().filter_map(|p| chart.preimage(p)).collect();
        for s in &avoid {
            if s.re > 0.0 && s.re < 1.0 && s.im.abs() < 1e-9 {
                return Err(Error::ContourHitsPole(format!("turning point on the contour at w = {s}")));
            }
        }
        let reach = |e: C| avoid.iter().map(|s| (s - e).norm()).fold(0.5, f64::min);
        let (r0, r1) = (reach(r(0.0)), reach(r(1.0)));
        let g = |w: C| form_precise(&chart, w);
        let (rho0, rho1) = (r0 / TAYLOR_SHRINK, r1 / TAYLOR_SHRINK);
        let (t0, t1) = (rho0 / 4.0, 1.0 - rho1 / 4.0);
        let head = taylor_primitive(&g, r(0.0), rho0, r(t0), k_max)?;
        let tail = taylor_primitive(&g, r(1.0), rho1, r(t1), k_max)?;
        let f = |t: f64| g(r(t)).unwrap_or_else(|_| vec![C::new(f64::NAN, 0.0); k_max]);
        // The integrand is analytic on the contour, so a fixed composite rule converges
        // geometrically.
        let (mid, _) = integrate_fixed_vec(f, t0, t1, 96);
        let v: Vec<C> = (0..k_max).map(|k| head[k] + mid[k] - tail[k]).collect();
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::QuadratureFail("non-finite odd form on the contour".into()));
        }
        Ok(v)
    }
}

/// Ratio between the distance to the nearest singular point and the radius of the
/// sampling circle used for the end pieces.
const TAYLOR_SHRINK: f64 = 12.0;

/// `∫_e^w g` for a vector of forms `g` analytic well beyond the circle of radius `rho` about `e`,
/// from their Taylor coefficients sampled on the circle of radius `rho`.
fn taylor_primitive(g: &dyn Fn(C) -> Result<Vec<C>>, e: C, rho: f64, w: C, dim: usize) -> Result<Vec<C>> {
    const M: usize = 64;
    let samples: Vec<(C, Vec<C>)> = (0..M)
        .map(|j| {
            let u = C::from_polar(1.0, std::f64::consts::TAU * j as f64 / M as f64);
            g(e + u * rho).map(|v| (u, v))
        })
        .collect::<Result<_>>()?;
    let h = (w - e) / rho;
    let mut out = vec![C::zero(); dim];
    for n in 0..M / 2 {
        // a_n ρ^n, then ∫ a_n (w−e)^n = a_n ρ^n · ρ h^{n+1}/(n+1)
        let weight = h.powi(n as i32 + 1) * rho / (n + 1) as f64 / M as f64;
        for (u, v) in &samples {
            let un = u.powi(-(n as i32));
            for k in 0..dim {
                out[k] += v[k] * un * weight;
            }
        }
    }
    Ok(out)
}

/// Contour from `p_{s−}` to `p_{s+}`, always an arc of a circle through both.
#[derive(Copy, Clone, Debug)]
pub enum Contour {
    /// The candidate on which the top-order form has the least L1 mass, which bounds the
    /// cancellation in the integral.
    Auto,
    /// As `Auto`, restricted to the arcs `Bulge(s)` with `s` of the given sign.
    Side(f64),
    /// The straight segment (in `z`, or in `1/z` when an endpoint is at infinity).
    Segment,
    /// The arc that avoids the point `1/2 + i·s` of the straight chart. Large `|s|` is close
    /// to the segment, `s = 0` goes the long way round, and the sign picks the side.
    Bulge(f64),
}

/// Möbius chart `w ↦ z = (aw + b)/(cw + d)` with `0 ↦ p_{s−}` and `1 ↦ p_{s+}`; the
/// contour is the segment `[0, 1]`.
#[derive(Clone, Debug)]
struct Chart {
    a: C,
    b: C,
    c: C,
    d: C,
}

impl Chart {
    fn new(from: ZPoint, to: ZPoint) -> Self {
        let one = r(1.0);
        match (from, to) {
            (ZPoint::Finite(p), ZPoint::Finite(q)) => Chart { a: q - p, b: p, c: C::zero(), d: one },
            // (p + w)/(1 − w)
            (ZPoint::Finite(p), ZPoint::Infinity) => Chart { a: one, b: p, c: -one, d: one },
            // ((q − 1)w + 1)/w
            (ZPoint::Infinity, ZPoint::Finite(q)) => Chart { a: q - one, b: one, c: one, d: C::zero() },
            (ZPoint::Infinity, ZPoint::Infinity) => unreachable!("distinct pole points"),
        }
    }

    /// Precompose with `w ↦ uw/(w + u − 1)`, which fixes 0 and 1 and sends ∞ to
    /// `u = 1/2 + i·s`, so the new segment `[0, 1]` is the arc avoiding `u`.
    fn bulged(&self, s: f64) -> Self {
        let u = C::new(0.5, s);
        Chart { a: self.a * u + self.b, b: self.b * (u - 1.0), c: self.c * u + self.d, d: self.d * (u - 1.0) }
    }

    /// `z(w)` and `dz/dw`.
    fn map(&self, w: C) -> (C, C) {
        let den = self.c * w + self.d;
        ((self.a * w + self.b) / den, (self.a * self.d - self.b * self.c) / (den * den))
    }

    fn preimage(&self, p: ZPoint) -> Option<C> {
        match p {
            ZPoint::Finite(z) => {
                let den = self.a - self.c * z;
                (den.norm() > 1e-300).then(|| (self.d * z - self.b) / den)
            }
            ZPoint::Infinity => (self.c.norm() > 0.0).then(|| -self.d / self.c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeElement;
    use crate::series::voros_path_coeff;
    use rand::{rngs::StdRng, SeedableRng};

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm().max(1e-12)
    }

    #[test]
    fn weber_values() {
        let c = SpectralCurve::new(CurveLabel::Web, &[r(1.0)], &[r(0.0)]).unwrap();
        let v = WkbOracle::new(&c).unwrap().path_voros_numeric(Pole::Inf, 2).unwrap();
        assert!(rel(v[0], r(-1.0 / 24.0)) < 1e-9, "{}", v[0]);
        assert!(v[1].norm() < 1e-10, "{}", v[1]);
        let c = SpectralCurve::new(CurveLabel::Bes, &[r(1.0)], &[r(0.0)]).unwrap();
        let v = WkbOracle::new(&c).unwrap().path_voros_numeric(Pole::Zero, 1).unwrap();
        assert!(rel(v[0], r(-1.0 / 12.0)) < 1e-9, "{}", v[0]);
    }

    fn curves(seed: u64) -> Vec<SpectralCurve> {
        let mut rng = StdRng::seed_from_u64(seed);
        [CurveLabel::Web, CurveLabel::Bes, CurveLabel::HG].iter().map(|&l| SpectralCurve::random(l, &mut rng)).collect()
    }

    #[test]
    fn weber_cycle_residues() {
        for c in curves(3).into_iter().filter(|c| c.label == CurveLabel::Web) {
            let o = WkbOracle::new(&c).unwrap();
            let res = o.residues(o.param.point(Pole::Inf, true).unwrap(), 2).unwrap();
            let (m, nu) = (c.mass(Pole::Inf), c.nu(Pole::Inf));
            assert!(rel(res[0], m) < 1e-12, "{} vs {m}", res[0]);
            assert!(rel(res[1], -nu / 2.0) < 1e-12, "{} vs {}", res[1], -nu / 2.0);
        }
    }

    #[test]
    fn higher_residues_vanish_at_pole_points() {
        for seed in [5, 6] {
            for c in curves(seed) {
                let o = WkbOracle::new(&c).unwrap();
                for (pp, z) in &o.param.pole_points {
                    let (res, scale) = o.residues_with_scale(*z, 6).unwrap();
                    for (k, v) in res.iter().enumerate().skip(2) {
                        let tol = 1e-12 * scale[k].max(1.0);
                        assert!(v.norm() < tol, "{} {:?} k={}: {v}", c.label.name(), pp, k as i32 - 1);
                    }
                }
            }
        }
    }

    #[test]
    fn odd_forms_are_anti_invariant() {
        for c in curves(9) {
            let o = WkbOracle::new(&c).unwrap();
            let sigma = o.param.involution;
            for z in [C::new(0.3, 0.7), C::new(-1.1, 0.4), C::new(0.8, -1.9)] {
                let sz = sigma.apply(z);
                let dsigma = (sigma.a * sigma.d - sigma.b * sigma.c) / (sigma.c * z + sigma.d).powi(2);
                let a = o.odd_forms(z, 6).unwrap();
                let b = o.odd_forms(sz, 6).unwrap();
                for k in 0..a.len() {
                    assert!(rel(b[k] * dsigma, -a[k]) < 1e-9, "{} k={}", c.label.name(), k as i32 - 1);
                }
            }
        }
    }

    #[test]
    fn riccati_residual_has_the_expected_order() {
        for c in curves(11) {
            let o = WkbOracle::new(&c).unwrap();
            let z = C::new(0.45, 0.6);
            for kk in [2usize, 4] {
                let h = 0.1;
                let a = o.riccati_residual(z, kk, r(h)).unwrap().norm();
                let b = o.riccati_residual(z, kk, r(h / 2.0)).unwrap().norm();
                let slope = (a / b).log2();
                assert!((slope - (kk + 2) as f64).abs() < 0.2, "{} K={kk}: slope {slope}", c.label.name());
            }
        }
    }

    #[test]
    fn opposite_arcs_agree() {
        for c in curves(13).into_iter().chain(curves(14)) {
            let o = WkbOracle::new(&c).unwrap();
            for &p in c.label.even_poles() {
                // Arcs on both sides of the segment; the two sides are not homotopic.
                let vals: Vec<Vec<C>> = [Contour::Side(-1.0), Contour::Side(1.0)]
                    .into_iter()
                    .map(|ct| o.path_voros_along(p, 4, ct).unwrap())
                    .collect();
                let auto = o.path_voros_numeric(p, 4).unwrap();
                for v in &vals {
                    for k in 0..4 {
                        assert!(
                            rel(v[k], auto[k]) < 1e-10,
                            "{} {} k={}: {} vs {}",
                            c.label.name(),
                            p.key(),
                            k + 1,
                            v[k],
                            auto[k]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_split_does_not_matter() {
        let c = &curves(21)[2];
        let a = WkbOracle::new(c).unwrap();
        let b = WkbOracle::with_split(c, [r(0.5), r(-0.25), r(0.75)]).unwrap();
        for &p in c.label.even_poles() {
            let (va, vb) = (a.path_voros_numeric(p, 4).unwrap(), b.path_voros_numeric(p, 4).unwrap());
            for k in 0..4 {
                assert!(rel(va[k], vb[k]) < 1e-10, "{} k={}", p.key(), k + 1);
            }
        }
        assert!(WkbOracle::with_split(c, [r(1.0); 3]).is_err());
    }

    #[test]
    fn unsupported_curves() {
        let c = SpectralCurve::random(CurveLabel::Leg, &mut StdRng::seed_from_u64(1));
        assert!(matches!(WkbOracle::new(&c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn matches_series_coefficients() {
        let mut rng = StdRng::seed_from_u64(17);
        for label in [CurveLabel::Web, CurveLabel::Bes, CurveLabel::HG] {
            for _ in 0..5 {
                let c = SpectralCurve::random(label, &mut rng);
                let o = WkbOracle::new(&c).unwrap();
                for &p in label.even_poles() {
                    let v = o.path_voros_numeric(p, 8).unwrap();
                    for k in 1..=8 {
                        let want = voros_path_coeff(&c, &LatticeElement::beta(p), k).unwrap();
                        assert!(
                            rel(v[k - 1], want) < 1e-7,
                            "{} {} k={k}: {} vs {}",
                            label.name(),
                            p.key(),
                            v[k - 1],
                            want
                        );
                    }
                }
            }
        }
    }
}
