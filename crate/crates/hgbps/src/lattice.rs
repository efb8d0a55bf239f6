//! The almost-doubled lattice `Γ ⊕ Γ*` spanned by residue cycles `γ_{s±}` and
//! paths `β_s`, its pairing, the central charge, the `ν`-functional and
//! twisted characters.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveLabel, Pole, SpectralCurve};
use crate::error::{Error, Result};

type C = Complex64;

/// Integer combination `Σ a⁺_s γ_{s+} + a⁻_s γ_{s−} + b_s β_s`, indexed by [`Pole::index`].
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct LatticeElement {
    pub plus: [i64; 3],
    pub minus: [i64; 3],
    pub path: [i64; 3],
}

impl LatticeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn gamma(p: Pole, plus: bool) -> Self {
        let mut e = Self::default();
        if plus {
            e.plus[p.index()] = 1;
        } else {
            e.minus[p.index()] = 1;
        }
        e
    }

    pub fn gamma_plus(p: Pole) -> Self {
        Self::gamma(p, true)
    }

    pub fn gamma_minus(p: Pole) -> Self {
        Self::gamma(p, false)
    }

    /// `γ_{s+} − γ_{s−}`.
    pub fn loop_class(p: Pole) -> Self {
        Self::gamma_plus(p) - Self::gamma_minus(p)
    }

    pub fn beta(p: Pole) -> Self {
        let mut e = Self::default();
        e.path[p.index()] = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::default()
    }

    pub fn is_cycle(&self) -> bool {
        self.path == [0; 3]
    }

    pub fn is_path(&self) -> bool {
        self.plus == [0; 3] && self.minus == [0; 3]
    }

    pub fn cycle_part(&self) -> Self {
        LatticeElement { path: [0; 3], ..*self }
    }

    pub fn path_part(&self) -> Self {
        LatticeElement { path: self.path, ..Self::default() }
    }

    /// `a⁺_s − a⁻_s`, the coefficient that `Z`, `ν` and the pairing see.
    pub fn charge(&self, p: Pole) -> i64 {
        self.plus[p.index()] - self.minus[p.index()]
    }

    /// The relation `Σ_{s ∈ P_ev} (γ_{s+} + γ_{s−})` for a label.
    pub fn relation(label: CurveLabel) -> Self {
        let mut e = Self::default();
        for p in label.even_poles() {
            e.plus[p.index()] = 1;
            e.minus[p.index()] = 1;
        }
        e
    }

    /// Representative with the coefficient of `γ_{last,−}` eliminated.
    pub fn reduce(&self, label: CurveLabel) -> Self {
        match label.even_poles().last() {
            None => *self,
            Some(last) => {
                let k = self.minus[last.index()];
                *self - Self::relation(label) * k
            }
        }
    }

    /// Equality modulo the cycle relation.
    pub fn equiv(&self, other: &Self, label: CurveLabel) -> bool {
        self.reduce(label) == other.reduce(label)
    }

    /// Check that only generators attached to `label`'s even poles appear.
    pub fn supported_by(&self, label: CurveLabel) -> Result<()> {
        for p in Pole::ALL {
            if !label.has_pole(p) {
                let i = p.index();
                if self.plus[i] != 0 || self.minus[i] != 0 || self.path[i] != 0 {
                    return Err(Error::UnsupportedClass(format!("{self} uses pole {p} absent from {label}")));
                }
            }
        }
        Ok(())
    }

    /// Coordinates on the ordered basis `γ0+, γ0−, γ1+, γ1−, γ∞+, γ∞−, β0, β1, β∞`.
    pub fn coords(&self) -> [i64; 9] {
        [
            self.plus[0],
            self.minus[0],
            self.plus[1],
            self.minus[1],
            self.plus[2],
            self.minus[2],
            self.path[0],
            self.path[1],
            self.path[2],
        ]
    }

    pub fn basis() -> [LatticeElement; 9] {
        let mut out = [Self::default(); 9];
        for (k, p) in Pole::ALL.iter().enumerate() {
            out[2 * k] = Self::gamma_plus(*p);
            out[2 * k + 1] = Self::gamma_minus(*p);
            out[6 + k] = Self::beta(*p);
        }
        out
    }
}

impl Add for LatticeElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut e = self;
        for i in 0..3 {
            e.plus[i] += o.plus[i];
            e.minus[i] += o.minus[i];
            e.path[i] += o.path[i];
        }
        e
    }
}

impl Sub for LatticeElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for LatticeElement {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1
    }
}

impl Mul<i64> for LatticeElement {
    type Output = Self;
    fn mul(self, k: i64) -> Self {
        LatticeElement {
            plus: self.plus.map(|a| a * k),
            minus: self.minus.map(|a| a * k),
            path: self.path.map(|a| a * k),
        }
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for p in Pole::ALL {
            let i = p.index();
            for (n, name) in [(self.plus[i], format!("g{p}+")), (self.minus[i], format!("g{p}-"))] {
                if n != 0 {
                    terms.push((n, name));
                }
            }
        }
        for p in Pole::ALL {
            if self.path[p.index()] != 0 {
                terms.push((self.path[p.index()], format!("b{p}")));
            }
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (n, name)) in terms.iter().enumerate() {
            let sign = match (k, *n < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = if n.abs() == 1 { String::new() } else { n.abs().to_string() };
            write!(f, "{sign}{mag}{name}")?;
        }
        Ok(())
    }
}

/// Parses the [`fmt::Display`] form, e.g. `g0+ - 2ginf- + b1`; `0` is the zero class.
impl std::str::FromStr for LatticeElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse lattice class `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut e = LatticeElement::default();
        if compact == "0" {
            return Ok(e);
        }
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let sign = match rest.as_bytes()[0] {
                b'+' => 1,
                b'-' => -1,
                _ if first => 1,
                _ => return Err(bad()),
            };
            rest = rest.trim_start_matches(['+', '-']);
            let digits = rest.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
            let n: i64 = if digits == 0 { 1 } else { rest[..digits].parse().map_err(|_| bad())? };
            rest = &rest[digits..];
            let kind = rest.chars().next().ok_or_else(bad)?;
            rest = &rest[1..];
            let pole = ["inf", "0", "1"].into_iter().find(|k| rest.starts_with(k)).ok_or_else(bad)?;
            let p: Pole = pole.parse()?;
            rest = &rest[pole.len()..];
            match kind {
                'b' => e.path[p.index()] += sign * n,
                'g' => {
                    match rest.chars().next() {
                        Some('+') => e.plus[p.index()] += sign * n,
                        Some('-') => e.minus[p.index()] += sign * n,
                        _ => return Err(bad()),
                    }
                    rest = &rest[1..];
                }
                _ => return Err(bad()),
            }
            first = false;
        }
        Ok(e)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    #[serde(default)]
    cycles: BTreeMap<String, i64>,
    #[serde(default)]
    paths: BTreeMap<String, i64>,
}

impl TryFrom<LatticeJson> for LatticeElement {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Self> {
        let mut e = LatticeElement::default();
        for (k, n) in j.cycles {
            let (pole, sign) = k.split_at(k.len().saturating_sub(1));
            let p: Pole = pole.parse()?;
            match sign {
                "+" => e.plus[p.index()] += n,
                "-" => e.minus[p.index()] += n,
                _ => return Err(Error::Config(format!("bad cycle key `{k}`"))),
            }
        }
        for (k, n) in j.paths {
            let p: Pole = k.parse()?;
            e.path[p.index()] += n;
        }
        Ok(e)
    }
}

impl From<LatticeElement> for LatticeJson {
    fn from(e: LatticeElement) -> Self {
        let mut cycles = BTreeMap::new();
        let mut paths = BTreeMap::new();
        for p in Pole::ALL {
            let i = p.index();
            if e.plus[i] != 0 {
                cycles.insert(format!("{p}+"), e.plus[i]);
            }
            if e.minus[i] != 0 {
                cycles.insert(format!("{p}-"), e.minus[i]);
            }
            if e.path[i] != 0 {
                paths.insert(p.key().to_string(), e.path[i]);
            }
        }
        LatticeJson { cycles, paths }
    }
}

/// The antisymmetric pairing with `⟨γ_{s±}, β_s⟩ = ∓1` and trivial cycle-cycle part.
pub fn pairing(a: &LatticeElement, b: &LatticeElement) -> i64 {
    Pole::ALL.iter().map(|&p| -a.charge(p) * b.path[p.index()] + b.charge(p) * a.path[p.index()]).sum()
}

/// `Z(γ)` with `Z(γ_{s±}) = ±2πi m_s`; requires a cycle.
pub fn central_charge(curve: &SpectralCurve, g: &LatticeElement) -> Result<C> {
    if !g.is_cycle() {
        return Err(Error::UnsupportedClass(format!("central charge of non-cycle {g}")));
    }
    central_charge_doubled(curve, g)
}

/// `Z_Đ(μ) = Z(cycle part)`, the dual charge `Z^∨` being zero.
pub fn central_charge_doubled(curve: &SpectralCurve, g: &LatticeElement) -> Result<C> {
    g.supported_by(curve.label)?;
    let s: C = Pole::ALL.iter().map(|&p| curve.mass(p) * g.charge(p) as f64).sum();
    Ok(C::new(0.0, 2.0 * PI) * s)
}

/// Value of `ν` on `γ_{s+}`. For the (1,4) curve this is `2ν_∞ − 1`, which turns
/// its Voros series into the Weber form.
pub fn nu_generator(curve: &SpectralCurve, p: Pole) -> C {
    match curve.label {
        CurveLabel::Deg3_14 => 2.0 * curve.nu(p) - 1.0,
        _ => curve.nu(p),
    }
}

/// `ν(γ_{s±}) = ±ν_s`, extended by zero on paths.
pub fn nu_functional(curve: &SpectralCurve, g: &LatticeElement) -> Result<C> {
    g.supported_by(curve.label)?;
    Ok(Pole::ALL.iter().map(|&p| nu_generator(curve, p) * g.charge(p) as f64).sum())
}

/// Twisted character `ξ(μ₁+μ₂) = (−1)^⟨μ₁,μ₂⟩ ξ(μ₁) ξ(μ₂)`, stored by its logarithms on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedValue {
    pub logs: [C; 9],
}

impl TwistedValue {
    pub fn trivial() -> Self {
        TwistedValue { logs: [C::default(); 9] }
    }

    pub fn from_values(values: [C; 9]) -> Self {
        TwistedValue { logs: values.map(|v| v.ln()) }
    }

    /// `log ξ(μ)` with `Im ∈ [0, 2π)`.
    pub fn log(&self, mu: &LatticeElement) -> C {
        let n = mu.coords();
        let basis = LatticeElement::basis();
        let mut s: C = n.iter().zip(self.logs.iter()).map(|(k, l)| l * *k as f64).sum();
        let mut twist = 0i64;
        for i in 0..9 {
            for j in (i + 1)..9 {
                if n[i] != 0 && n[j] != 0 {
                    twist += n[i] * n[j] * pairing(&basis[i], &basis[j]);
                }
            }
        }
        if twist.rem_euclid(2) == 1 {
            s += C::new(0.0, PI);
        }
        normalize_log(s)
    }

    pub fn eval(&self, mu: &LatticeElement) -> C {
        self.log(mu).exp()
    }

    /// Pointwise product with a homomorphism given by its logs.
    pub fn times_character(&self, logs: [C; 9]) -> Self {
        let mut out = self.clone();
        for (a, b) in out.logs.iter_mut().zip(logs) {
            *a += b;
        }
        out
    }
}

/// Shift the imaginary part into `[0, 2π)`, snapping values within 1e-12 of `2π` to 0.
pub fn normalize_log(z: C) -> C {
    let two_pi = 2.0 * PI;
    let mut im = z.im.rem_euclid(two_pi);
    if two_pi - im < 1e-12 {
        im = 0.0;
    }
    C::new(z.re, im)
}

/// Sign-valued quadratic refinement as a twisted character.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRefinement {
    pub signs: [i8; 9],
}

impl QuadraticRefinement {
    pub fn as_twisted(&self) -> TwistedValue {
        TwistedValue { logs: self.signs.map(|s| if s < 0 { C::new(0.0, PI) } else { C::default() }) }
    }

    pub fn eval(&self, mu: &LatticeElement) -> i8 {
        if self.as_twisted().log(mu).im.abs() < 1e-9 {
            1
        } else {
            -1
        }
    }
}

/// Find `σ` with `σ(γ) = −1` for `Ω(γ) ≠ −1`, `σ(γ) = +1` for `Ω(γ) = −1`, `σ(β_s) = +1`
/// and `σ(relation) = 1`. The first solution in sign-bit order is returned.
pub fn make_refinement(label: CurveLabel, active: &[(LatticeElement, i64)]) -> Result<QuadraticRefinement> {
    let poles = label.even_poles();
    let free: Vec<usize> = poles.iter().flat_map(|p| [2 * p.index(), 2 * p.index() + 1]).collect();
    let relation = LatticeElement::relation(label);
    for bits in 0u32..(1 << free.len()) {
        let mut signs = [1i8; 9];
        for (k, &i) in free.iter().enumerate() {
            if bits & (1 << k) != 0 {
                signs[i] = -1;
            }
        }
        let q = QuadraticRefinement { signs };
        let ok =
            q.eval(&relation) == 1 && active.iter().all(|(g, omega)| q.eval(g) == if *omega == -1 { 1 } else { -1 });
        if ok {
            return Ok(q);
        }
    }
    Err(Error::Inconsistent(format!("no sign assignment for {label}")))
}

/// `ξ_{Đ,ν}(μ) = σ(μ) e^{πi ν(μ)}`.
pub fn xi_nu(curve: &SpectralCurve, sigma: &QuadraticRefinement) -> TwistedValue {
    let mut logs = [C::default(); 9];
    for p in Pole::ALL {
        if curve.label.has_pole(p) {
            let v = C::new(0.0, PI) * nu_generator(curve, p);
            logs[2 * p.index()] = v;
            logs[2 * p.index() + 1] = -v;
        }
    }
    sigma.as_twisted().times_character(logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn pairing_rows() {
        let g0p = LatticeElement::gamma_plus(Pole::Zero);
        let g0m = LatticeElement::gamma_minus(Pole::Zero);
        let b0 = LatticeElement::beta(Pole::Zero);
        assert_eq!(pairing(&g0p, &b0), -1);
        assert_eq!(pairing(&g0m, &b0), 1);
        assert_eq!(pairing(&(g0p - g0m), &b0), -2);
        assert_eq!(pairing(&b0, &(g0p - g0m)), 2);
        assert_eq!(pairing(&g0p, &LatticeElement::gamma_plus(Pole::Inf)), 0);
        assert_eq!(pairing(&g0p, &LatticeElement::beta(Pole::One)), 0);
    }

    #[test]
    fn central_charge_examples() {
        let hg = SpectralCurve::with_masses(CurveLabel::HG, &[r(1.0), r(2.0), r(4.0)]).unwrap();
        let g = LatticeElement::gamma_plus(Pole::Zero)
            + LatticeElement::gamma_plus(Pole::One)
            + LatticeElement::gamma_plus(Pole::Inf);
        let z = central_charge(&hg, &g).unwrap();
        assert!((z - C::new(0.0, 2.0 * PI * 7.0)).norm() < 1e-12);
        assert_eq!(central_charge(&hg, &LatticeElement::zero()).unwrap(), C::default());
        let z0 = central_charge(&hg, &LatticeElement::gamma_plus(Pole::Zero)).unwrap();
        assert!((z0 - C::new(0.0, 2.0 * PI)).norm() < 1e-14);
        let web = SpectralCurve::with_masses(CurveLabel::Web, &[r(1.0)]).unwrap();
        assert!(matches!(
            central_charge(&web, &LatticeElement::gamma_plus(Pole::Zero)),
            Err(Error::UnsupportedClass(_))
        ));
        assert!(central_charge(&web, &LatticeElement::beta(Pole::Inf)).is_err());
    }

    #[test]
    fn nu_examples() {
        let web = SpectralCurve::new(CurveLabel::Web, &[r(1.0)], &[r(1.0)]).unwrap();
        assert_eq!(nu_functional(&web, &LatticeElement::gamma_plus(Pole::Inf)).unwrap(), r(1.0));
        assert_eq!(nu_functional(&web, &LatticeElement::beta(Pole::Inf)).unwrap(), r(0.0));
        let bes = SpectralCurve::new(CurveLabel::Bes, &[r(1.0)], &[r(0.3)]).unwrap();
        let v = nu_functional(&bes, &LatticeElement::loop_class(Pole::Zero)).unwrap();
        assert!((v - r(0.6)).norm() < 1e-15);
    }

    #[test]
    fn relation_is_null() {
        for label in CurveLabel::QUADRATIC {
            let mut rng = rand::rng();
            let c = SpectralCurve::random(label, &mut rng);
            let rel = LatticeElement::relation(label);
            assert_eq!(central_charge(&c, &rel).unwrap(), C::default());
            assert_eq!(nu_functional(&c, &rel).unwrap(), C::default());
            assert!(rel.equiv(&LatticeElement::zero(), label));
        }
    }

    #[test]
    fn reduction_eliminates_last_minus() {
        let e = LatticeElement::gamma_minus(Pole::Inf) * 3 + LatticeElement::gamma_plus(Pole::Zero);
        let red = e.reduce(CurveLabel::HG);
        assert_eq!(red.minus[2], 0);
        assert!(e.equiv(&red, CurveLabel::HG));
    }

    #[test]
    fn json_format() {
        let e = LatticeElement::gamma_plus(Pole::Zero) - LatticeElement::gamma_minus(Pole::Zero)
            + LatticeElement::beta(Pole::Inf) * 2;
        let v = serde_json::to_value(e).unwrap();
        assert_eq!(v, serde_json::json!({"cycles": {"0+": 1, "0-": -1}, "paths": {"inf": 2}}));
        let back: LatticeElement = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
        let alt: LatticeElement = serde_json::from_str(r#"{"cycles": {"∞+": 1}}"#).unwrap();
        assert_eq!(alt, LatticeElement::gamma_plus(Pole::Inf));
    }

    #[test]
    fn display() {
        let e = LatticeElement::gamma_plus(Pole::Zero) - LatticeElement::gamma_minus(Pole::Inf) * 2
            + LatticeElement::beta(Pole::One);
        assert_eq!(e.to_string(), "g0+ - 2ginf- + b1");
        assert_eq!(LatticeElement::zero().to_string(), "0");
        assert_eq!("g0+ - 2ginf- + b1".parse::<LatticeElement>().unwrap(), e);
        assert_eq!(
            "g1- + g1+".parse::<LatticeElement>().unwrap(),
            LatticeElement::loop_class(Pole::One) + LatticeElement::gamma_minus(Pole::One) * 2
        );
        assert!("g2+".parse::<LatticeElement>().is_err());
    }

    #[test]
    fn twisted_zero_and_inverse() {
        let xi = TwistedValue { logs: std::array::from_fn(|i| C::new(0.1 * i as f64, 0.3 * i as f64)) };
        assert!((xi.eval(&LatticeElement::zero()) - r(1.0)).norm() < 1e-15);
        let mu = LatticeElement::gamma_plus(Pole::One) + LatticeElement::beta(Pole::One) * 3;
        assert!((xi.eval(&mu) * xi.eval(&-mu) - r(1.0)).norm() < 1e-12);
    }

    #[test]
    fn weber_refinement_and_xi() {
        let g = LatticeElement::gamma_plus(Pole::Inf);
        let q = make_refinement(CurveLabel::Web, &[(g, 1), (-g, 1)]).unwrap();
        assert_eq!(q.eval(&g), -1);
        assert_eq!(q.eval(&LatticeElement::beta(Pole::Inf)), 1);
        let web = SpectralCurve::new(CurveLabel::Web, &[r(1.0)], &[r(1.0)]).unwrap();
        let xi = xi_nu(&web, &q);
        assert!((xi.eval(&g) - r(1.0)).norm() < 1e-14);
    }

    fn arb_element() -> impl Strategy<Value = LatticeElement> {
        (prop::array::uniform3(-4i64..5), prop::array::uniform3(-4i64..5), prop::array::uniform3(-4i64..5))
            .prop_map(|(plus, minus, path)| LatticeElement { plus, minus, path })
    }

    proptest! {
        #[test]
        fn pairing_antisymmetric_bilinear(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(pairing(&a, &b), -pairing(&b, &a));
            prop_assert_eq!(pairing(&(a + b), &c), pairing(&a, &c) + pairing(&b, &c));
            prop_assert_eq!(pairing(&a.cycle_part(), &b.cycle_part()), 0);
        }

        #[test]
        fn twisted_law(
            logs in prop::array::uniform9((-1.0f64..1.0, -3.0f64..3.0)),
            a in arb_element(),
            b in arb_element(),
        ) {
            let xi = TwistedValue { logs: logs.map(|(x, y)| C::new(x, y)) };
            let lhs = xi.eval(&(a + b));
            let sign = if pairing(&a, &b).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let rhs = xi.eval(&a) * xi.eval(&b) * sign;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }

        #[test]
        fn loop_pairings_even(a in arb_element(), s in 0usize..3) {
            let l = LatticeElement::loop_class(Pole::ALL[s]);
            prop_assert_eq!(pairing(&l, &a.path_part()).rem_euclid(2), 0);
        }
    }
}
