//! Genus-zero rational parametrizations `z ↦ (x(z), y(z))` of the catalog curves.

use num_complex::Complex64;
use num_traits::Zero;

use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};
use crate::jet::Jet;

type C = Complex64;

const I: C = C::new(0.0, 1.0);

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

/// Polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<C>);

impl Poly {
    pub fn new(c: Vec<C>) -> Self {
        Poly(c).trimmed()
    }

    pub fn constant(a: C) -> Self {
        Poly(vec![a])
    }

    /// `Π (z − root)` times `lead`.
    pub fn from_roots(lead: C, roots: &[C]) -> Self {
        roots.iter().fold(Poly::constant(lead), |p, &a| p.mul(&Poly(vec![-a, r(1.0)])))
    }

    fn trimmed(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(C::zero());
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn eval(&self, z: C) -> C {
        self.0.iter().rev().fold(C::zero(), |acc, c| acc * z + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or_default() + o.0.get(i).copied().unwrap_or_default())
                .collect(),
        )
    }

    pub fn scale(&self, a: C) -> Poly {
        Poly::new(self.0.iter().map(|c| c * a).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut c = vec![C::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn deriv(&self) -> Poly {
        if self.0.len() == 1 {
            return Poly::constant(C::zero());
        }
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect())
    }

    /// Taylor coefficients at `z0`, as a jet of length `len`.
    pub fn jet(&self, z0: C, len: usize) -> Jet {
        let mut p = self.0.clone();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            // Synthetic division by (z − z0): remainder is the next Taylor coefficient.
            let n = p.len();
            if n == 0 {
                out.push(C::zero());
                continue;
            }
            let mut q = vec![C::zero(); n.saturating_sub(1)];
            let mut acc = C::zero();
            for i in (0..n).rev() {
                acc = acc * z0 + p[i];
                if i > 0 {
                    q[i - 1] = acc;
                }
            }
            out.push(acc);
            p = q;
        }
        Jet::new(0, out)
    }

    /// Coefficients reversed to degree `d`: `z^d p(1/z)`.
    fn reversed(&self, d: usize) -> Poly {
        let mut c = vec![C::zero(); d + 1];
        for (i, a) in self.0.iter().enumerate() {
            c[d - i] = *a;
        }
        Poly::new(c)
    }
}

/// Quotient of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Self {
        Rational { num, den }
    }

    pub fn poly(p: Poly) -> Self {
        Rational { num: p, den: Poly::constant(r(1.0)) }
    }

    pub fn eval(&self, z: C) -> C {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn deriv(&self) -> Rational {
        let num = self.num.deriv().mul(&self.den).add(&self.num.mul(&self.den.deriv()).scale(r(-1.0)));
        Rational { num, den: self.den.mul(&self.den) }
    }

    pub fn mul(&self, o: &Rational) -> Rational {
        Rational { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    /// Laurent jet at `z0` with `len` coefficients.
    pub fn jet(&self, z0: C, len: usize) -> Result<Jet> {
        let extra = self.den.degree() + 2;
        let n = self.num.jet(z0, len + extra).normalized(1e-13);
        let d = self.den.jet(z0, len + extra).normalized(1e-13);
        if d.is_empty() {
            return Err(Error::PoleHit("vanishing denominator".into()));
        }
        if n.is_empty() {
            return Ok(Jet::zero(d.val, len));
        }
        Ok(n.div(&d)?.truncate(len))
    }

    /// `f(1/u)` as a rational function of `u`.
    pub fn at_inverse(&self) -> Rational {
        let d = self.num.degree().max(self.den.degree());
        Rational { num: self.num.reversed(d), den: self.den.reversed(d) }
    }
}

/// Möbius map `z ↦ (a z + b)/(c z + d)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Mobius {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mobius {
    pub fn inversion() -> Self {
        Mobius { a: r(0.0), b: r(1.0), c: r(1.0), d: r(0.0) }
    }

    pub fn negation() -> Self {
        Mobius { a: r(-1.0), b: r(0.0), c: r(0.0), d: r(1.0) }
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Jet of `σ(z0 + t)` in `t`.
    pub fn jet(&self, z0: C, len: usize) -> Result<Jet> {
        let z = Jet::t(len).add_const(z0).with_val(0).truncate(len);
        let num = z.scale(self.a).add_const(self.b);
        let den = z.scale(self.c).add_const(self.d);
        num.div(&den.normalized(1e-14))
    }
}

/// A point of the `z`-sphere.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum ZPoint {
    Finite(C),
    Infinity,
}

impl ZPoint {
    pub fn finite(self) -> Option<C> {
        match self {
            ZPoint::Finite(z) => Some(z),
            ZPoint::Infinity => None,
        }
    }
}

/// One of the two preimages `s_±` of an even pole `s`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolePoint {
    pub pole: Pole,
    pub plus: bool,
}

impl PolePoint {
    pub fn sign(&self) -> f64 {
        if self.plus {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct Parametrization {
    pub label: CurveLabel,
    pub x: Rational,
    pub y: Rational,
    pub pole_points: Vec<(PolePoint, ZPoint)>,
    /// Preimages of odd-order poles of `Q dx²`.
    pub odd_points: Vec<ZPoint>,
    /// Simple zeros of `dx`.
    pub ramification: Vec<C>,
    pub involution: Mobius,
}

impl Parametrization {
    pub fn point(&self, pole: Pole, plus: bool) -> Option<ZPoint> {
        self.pole_points.iter().find(|(p, _)| p.pole == pole && p.plus == plus).map(|(_, z)| *z)
    }

    pub fn dx(&self) -> Rational {
        self.x.deriv()
    }

    /// `y(z) x'(z)`, the coefficient of `y dx` in `dz`.
    pub fn ydx(&self) -> Rational {
        self.y.mul(&self.dx())
    }

    /// Jet of the one-form `y dx` in the local coordinate at `p` (`1/z` at infinity).
    pub fn ydx_jet(&self, p: ZPoint, len: usize) -> Result<Jet> {
        match p {
            ZPoint::Finite(z0) => self.ydx().jet(z0, len),
            ZPoint::Infinity => {
                let f = self.ydx().at_inverse().jet(C::zero(), len)?;
                // dz = −du/u²
                Ok(&f * &Jet::monomial(-2, len).scale(r(-1.0)))
            }
        }
    }

    pub fn residue_ydx(&self, p: ZPoint) -> Result<C> {
        self.ydx_jet(p, 8)?.residue()
    }
}

/// Rational parametrization for each of the nine quadratic curves.
pub fn build_parametrization(curve: &SpectralCurve) -> Result<Parametrization> {
    use CurveLabel::*;
    let one = r(1.0);
    let m0 = curve.mass(Pole::Zero);
    let m1 = curve.mass(Pole::One);
    let mi = curve.mass(Pole::Inf);
    let pp = |pole, plus| PolePoint { pole, plus };
    let fin = ZPoint::Finite;
    // (z² + 1)
    let zsq1 = Poly(vec![one, r(0.0), one]);
    let zsq_m1 = Poly(vec![-one, r(0.0), one]);
    let pm_i = |pole| vec![(pp(pole, true), fin(-I)), (pp(pole, false), fin(I))];
    let param = match curve.label {
        HG => {
            let sd = curve.delta_hg().sqrt();
            let c = sd / (4.0 * mi * mi);
            let d = (mi * mi + m0 * m0 - m1 * m1) / (2.0 * mi * mi);
            let p0p = -((m0 + mi) * (m0 + mi) - m1 * m1) / sd;
            let p0m = -((m0 - mi) * (m0 - mi) - m1 * m1) / sd;
            let p1p = ((m1 + mi) * (m1 + mi) - m0 * m0) / sd;
            let p1m = ((m1 - mi) * (m1 - mi) - m0 * m0) / sd;
            let x = Rational::new(Poly::new(vec![c, d, c]), Poly(vec![r(0.0), one]));
            let y = Rational::new(
                Poly(vec![r(0.0), one]).mul(&zsq_m1).scale(4.0 * mi * mi * mi),
                Poly::from_roots(sd, &[p0p, p0m, p1p, p1m]),
            );
            Parametrization {
                label: HG,
                x,
                y,
                pole_points: vec![
                    (pp(Pole::Zero, true), fin(p0p)),
                    (pp(Pole::Zero, false), fin(p0m)),
                    (pp(Pole::One, true), fin(p1p)),
                    (pp(Pole::One, false), fin(p1m)),
                    (pp(Pole::Inf, true), fin(r(0.0))),
                    (pp(Pole::Inf, false), ZPoint::Infinity),
                ],
                odd_points: vec![],
                ramification: vec![one, -one],
                involution: Mobius::inversion(),
            }
        }
        DHG => {
            let b = (mi * mi - m1 * m1) / (mi * mi);
            // (z − 1)²
            let zm1sq = Poly(vec![one, r(-2.0), one]);
            let x = Rational::new(zm1sq.scale(b / 2.0), zsq1.clone());
            // x − 1 = ((b/2)(z−1)² − (z²+1)) / (z²+1)
            let xm1_num = zm1sq.scale(b / 2.0).add(&zsq1.scale(-one));
            let y = Rational::new(Poly(vec![one, one]).mul(&zsq1).scale(I * mi), Poly(vec![-one, one]).mul(&xm1_num));
            let p1p = (b - 2.0 * I * m1 / mi) / (b - 2.0);
            let p1m = (b + 2.0 * I * m1 / mi) / (b - 2.0);
            let mut pts = vec![(pp(Pole::One, true), fin(p1p)), (pp(Pole::One, false), fin(p1m))];
            pts.extend(pm_i(Pole::Inf));
            Parametrization {
                label: DHG,
                x,
                y,
                pole_points: pts,
                odd_points: vec![fin(one)],
                ramification: vec![one, -one],
                involution: Mobius::inversion(),
            }
        }
        Kum => {
            let s = (mi * mi - m0 * m0).sqrt();
            let xnum = zsq1.scale(-2.0 * mi).add(&Poly(vec![r(0.0), 4.0 * s]));
            let x = Rational::new(xnum.clone(), zsq1.clone());
            let y = Rational::new(zsq_m1.scale(I * s), xnum);
            Parametrization {
                label: Kum,
                x,
                y,
                pole_points: vec![
                    (pp(Pole::Zero, true), fin((s - I * m0) / mi)),
                    (pp(Pole::Zero, false), fin((s + I * m0) / mi)),
                    (pp(Pole::Inf, true), fin(I)),
                    (pp(Pole::Inf, false), fin(-I)),
                ],
                odd_points: vec![],
                ramification: vec![one, -one],
                involution: Mobius::inversion(),
            }
        }
        Leg => Parametrization {
            label: Leg,
            x: Rational::new(Poly(vec![r(0.0), r(2.0)]), zsq1.clone()),
            y: Rational::new(zsq1.scale(I * mi), zsq_m1.clone()),
            pole_points: pm_i(Pole::Inf),
            odd_points: vec![fin(one), fin(-one)],
            ramification: vec![one, -one],
            involution: Mobius::inversion(),
        },
        Bes => Parametrization {
            label: Bes,
            x: Rational::new(zsq1.scale(-8.0 * m0 * m0), Poly(vec![one, r(-2.0), one])),
            y: Rational::new(zsq_m1.scale(I), zsq1.scale(8.0 * m0)),
            pole_points: pm_i(Pole::Zero),
            odd_points: vec![fin(one)],
            ramification: vec![-one],
            involution: Mobius::inversion(),
        },
        Whi => Parametrization {
            label: Whi,
            x: Rational::new(Poly(vec![one, r(2.0), one]).scale(2.0 * mi), zsq1.clone()),
            y: Rational::new(Poly(vec![-one, one]).scale(I / 2.0), Poly(vec![one, one])),
            pole_points: pm_i(Pole::Inf),
            odd_points: vec![fin(-one)],
            ramification: vec![one, -one],
            involution: Mobius::inversion(),
        },
        Web => {
            let sm = mi.sqrt();
            Parametrization {
                label: Web,
                x: Rational::new(Poly(vec![r(0.0), 4.0 * sm]), zsq1.clone()),
                y: Rational::new(zsq_m1.scale(I * sm), zsq1.clone()),
                pole_points: pm_i(Pole::Inf),
                odd_points: vec![],
                ramification: vec![one, -one],
                involution: Mobius::inversion(),
            }
        }
        DBes => Parametrization {
            label: DBes,
            x: Rational::poly(Poly(vec![r(0.0), r(0.0), one])),
            y: Rational::new(Poly(vec![one]), Poly(vec![r(0.0), one])),
            pole_points: vec![],
            odd_points: vec![fin(r(0.0)), ZPoint::Infinity],
            ramification: vec![r(0.0)],
            involution: Mobius::negation(),
        },
        Ai => Parametrization {
            label: Ai,
            x: Rational::poly(Poly(vec![r(0.0), r(0.0), one])),
            y: Rational::poly(Poly(vec![r(0.0), one])),
            pole_points: vec![],
            odd_points: vec![ZPoint::Infinity],
            ramification: vec![r(0.0)],
            involution: Mobius::negation(),
        },
        Deg3_14 | Deg3_23 => {
            return Err(Error::Unsupported(format!("no parametrization for {}", curve.label)));
        }
    };
    Ok(param)
}
