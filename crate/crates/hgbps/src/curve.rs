//! The catalog of hypergeometric-type spectral curves `y² = Q(x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::CJson;

type C = Complex64;

/// Possible locations of an even-order pole of `Q(x) dx²`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pole {
    Zero,
    One,
    Inf,
}

impl Pole {
    pub const ALL: [Pole; 3] = [Pole::Zero, Pole::One, Pole::Inf];

    pub fn index(self) -> usize {
        match self {
            Pole::Zero => 0,
            Pole::One => 1,
            Pole::Inf => 2,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Pole::Zero => "0",
            Pole::One => "1",
            Pole::Inf => "inf",
        }
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Pole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Pole::Zero),
            "1" => Ok(Pole::One),
            "inf" | "∞" | "infinity" => Ok(Pole::Inf),
            _ => Err(Error::Config(format!("unknown pole `{s}`"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveLabel {
    HG,
    DHG,
    Kum,
    Leg,
    Bes,
    Whi,
    Web,
    DBes,
    Ai,
    Deg3_14,
    Deg3_23,
}

impl CurveLabel {
    pub const ALL: [CurveLabel; 11] = [
        CurveLabel::HG,
        CurveLabel::DHG,
        CurveLabel::Kum,
        CurveLabel::Leg,
        CurveLabel::Bes,
        CurveLabel::Whi,
        CurveLabel::Web,
        CurveLabel::DBes,
        CurveLabel::Ai,
        CurveLabel::Deg3_14,
        CurveLabel::Deg3_23,
    ];

    /// The nine curves with a quadratic spectral curve `y² = Q(x)`.
    pub const QUADRATIC: [CurveLabel; 9] = [
        CurveLabel::HG,
        CurveLabel::DHG,
        CurveLabel::Kum,
        CurveLabel::Leg,
        CurveLabel::Bes,
        CurveLabel::Whi,
        CurveLabel::Web,
        CurveLabel::DBes,
        CurveLabel::Ai,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveLabel::HG => "HG",
            CurveLabel::DHG => "dHG",
            CurveLabel::Kum => "Kum",
            CurveLabel::Leg => "Leg",
            CurveLabel::Bes => "Bes",
            CurveLabel::Whi => "Whi",
            CurveLabel::Web => "Web",
            CurveLabel::DBes => "dBes",
            CurveLabel::Ai => "Ai",
            CurveLabel::Deg3_14 => "Deg3_14",
            CurveLabel::Deg3_23 => "Deg3_23",
        }
    }

    /// Even-order poles carrying a mass parameter, in canonical order.
    pub fn even_poles(self) -> &'static [Pole] {
        match self {
            CurveLabel::HG => &[Pole::Zero, Pole::One, Pole::Inf],
            CurveLabel::DHG => &[Pole::One, Pole::Inf],
            CurveLabel::Kum => &[Pole::Zero, Pole::Inf],
            CurveLabel::Bes => &[Pole::Zero],
            CurveLabel::Leg | CurveLabel::Whi | CurveLabel::Web => &[Pole::Inf],
            CurveLabel::Deg3_14 | CurveLabel::Deg3_23 => &[Pole::Inf],
            CurveLabel::DBes | CurveLabel::Ai => &[],
        }
    }

    pub fn is_experimental(self) -> bool {
        matches!(self, CurveLabel::Deg3_14 | CurveLabel::Deg3_23)
    }

    pub fn has_pole(self, p: Pole) -> bool {
        self.even_poles().contains(&p)
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CurveLabel::ALL
            .iter()
            .copied()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown curve label `{s}`")))
    }
}

/// A validated curve: label, masses `m_s` and quantization parameters `ν_s`.
///
/// Entries for poles the label does not carry are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveJson", into = "CurveJson")]
pub struct SpectralCurve {
    pub label: CurveLabel,
    m: [C; 3],
    nu: [C; 3],
}

impl SpectralCurve {
    /// Build and validate a curve. `m` and `nu` follow [`CurveLabel::even_poles`].
    pub fn new(label: CurveLabel, m: &[C], nu: &[C]) -> Result<Self> {
        let poles = label.even_poles();
        if m.len() != poles.len() {
            return Err(Error::DimensionMismatch { what: "masses", expected: poles.len(), got: m.len() });
        }
        if nu.len() != poles.len() {
            return Err(Error::DimensionMismatch { what: "nu values", expected: poles.len(), got: nu.len() });
        }
        let mut mm = [C::default(); 3];
        let mut nn = [C::default(); 3];
        for (i, p) in poles.iter().enumerate() {
            mm[p.index()] = m[i];
            nn[p.index()] = nu[i];
        }
        let curve = SpectralCurve { label, m: mm, nu: nn };
        curve.validate()?;
        Ok(curve)
    }

    /// Curve with all `ν_s = 0`.
    pub fn with_masses(label: CurveLabel, m: &[C]) -> Result<Self> {
        SpectralCurve::new(label, m, &vec![C::default(); m.len()])
    }

    pub fn mass(&self, p: Pole) -> C {
        self.m[p.index()]
    }

    pub fn nu(&self, p: Pole) -> C {
        self.nu[p.index()]
    }

    pub fn masses(&self) -> Vec<C> {
        self.label.even_poles().iter().map(|p| self.mass(*p)).collect()
    }

    pub fn nus(&self) -> Vec<C> {
        self.label.even_poles().iter().map(|p| self.nu(*p)).collect()
    }

    pub fn with_nu(&self, nu: &[C]) -> Result<Self> {
        SpectralCurve::new(self.label, &self.masses(), nu)
    }

    pub fn with_mass_values(&self, m: &[C]) -> Result<Self> {
        SpectralCurve::new(self.label, m, &self.nus())
    }

    /// Factors that must be nonzero for the masses to be admissible.
    pub fn genericity_factors(&self) -> Vec<(&'static str, C)> {
        let (m0, m1, mi) = (self.m[0], self.m[1], self.m[2]);
        match self.label {
            CurveLabel::HG => vec![
                ("m_0", m0),
                ("m_1", m1),
                ("m_inf", mi),
                ("m_0+m_1+m_inf", m0 + m1 + mi),
                ("m_0+m_1-m_inf", m0 + m1 - mi),
                ("m_0-m_1+m_inf", m0 - m1 + mi),
                ("m_0-m_1-m_inf", m0 - m1 - mi),
            ],
            CurveLabel::DHG => vec![("m_1", m1), ("m_inf", mi), ("m_1+m_inf", m1 + mi), ("m_1-m_inf", m1 - mi)],
            CurveLabel::Kum => vec![("m_0", m0), ("m_0+m_inf", m0 + mi), ("m_0-m_inf", m0 - mi)],
            CurveLabel::Bes => vec![("m_0", m0)],
            CurveLabel::Leg | CurveLabel::Whi | CurveLabel::Web | CurveLabel::Deg3_14 | CurveLabel::Deg3_23 => {
                vec![("m_inf", mi)]
            }
            CurveLabel::DBes | CurveLabel::Ai => vec![],
        }
    }

    fn validate(&self) -> Result<()> {
        let scale = self.m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (name, v) in self.genericity_factors() {
            if !v.re.is_finite() || !v.im.is_finite() || v.norm() <= 1e-14 * scale {
                return Err(Error::InvalidMass(format!("{} {name} vanishes", self.label)));
            }
        }
        if self.nu.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Config("non-finite nu".into()));
        }
        Ok(())
    }

    /// `Δ_HG = (m0+m1+m∞)(m0+m1−m∞)(m0−m1+m∞)(m0−m1−m∞)`.
    pub fn delta_hg(&self) -> C {
        let (m0, m1, mi) = (self.m[0], self.m[1], self.m[2]);
        (m0 + m1 + mi) * (m0 + m1 - mi) * (m0 - m1 + mi) * (m0 - m1 - mi)
    }

    /// `Q(x)`; unavailable for the cubic experimental curves.
    pub fn q(&self, x: C) -> Result<C> {
        let (m0, m1, mi) = (self.m[0], self.m[1], self.m[2]);
        let one = C::new(1.0, 0.0);
        Ok(match self.label {
            CurveLabel::HG => {
                (mi * mi * x * x - (mi * mi + m0 * m0 - m1 * m1) * x + m0 * m0) / (x * x * (x - one) * (x - one))
            }
            CurveLabel::DHG => (mi * mi * x + m1 * m1 - mi * mi) / (x * (x - one) * (x - one)),
            CurveLabel::Kum => (x * x + 4.0 * mi * x + 4.0 * m0 * m0) / (4.0 * x * x),
            CurveLabel::Leg => mi * mi / (x * x - one),
            CurveLabel::Bes => (x + 4.0 * m0 * m0) / (4.0 * x * x),
            CurveLabel::Whi => (x - 4.0 * mi) / (4.0 * x),
            CurveLabel::Web => x * x / 4.0 - mi,
            CurveLabel::DBes => one / x,
            CurveLabel::Ai => x,
            CurveLabel::Deg3_14 | CurveLabel::Deg3_23 => {
                return Err(Error::Unsupported(format!("{} is not of the form y² = Q(x)", self.label)))
            }
        })
    }

    /// Random admissible masses (and `ν` in `(−½, ½)`) from `rng`.
    pub fn random<R: Rng>(label: CurveLabel, rng: &mut R) -> Self {
        loop {
            let n = label.even_poles().len();
            let m: Vec<C> = (0..n)
                .map(|_| {
                    let r = rng.random_range(0.5..2.0);
                    let th = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                    C::from_polar(r, th)
                })
                .collect();
            let nu: Vec<C> = (0..n).map(|_| C::new(rng.random_range(-0.5..0.5), rng.random_range(-0.3..0.3))).collect();
            if let Ok(c) = SpectralCurve::new(label, &m, &nu) {
                if c.genericity_factors().iter().all(|(_, v)| v.norm() > 0.2) {
                    return c;
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    label: String,
    #[serde(default)]
    m: BTreeMap<String, CJson>,
    #[serde(default)]
    nu: BTreeMap<String, CJson>,
}

impl TryFrom<CurveJson> for SpectralCurve {
    type Error = Error;
    fn try_from(j: CurveJson) -> Result<Self> {
        let label: CurveLabel = j.label.parse()?;
        let poles = label.even_poles();
        let pick = |map: &BTreeMap<String, CJson>, what: &'static str, required: bool| -> Result<Vec<C>> {
            let mut parsed = BTreeMap::new();
            for (k, v) in map {
                let p: Pole = k.parse()?;
                if !label.has_pole(p) {
                    return Err(Error::Config(format!("{label} has no even pole `{k}` ({what})")));
                }
                parsed.insert(p, C::from(*v));
            }
            poles
                .iter()
                .map(|p| match parsed.get(p) {
                    Some(v) => Ok(*v),
                    None if !required => Ok(C::default()),
                    None => Err(Error::DimensionMismatch { what, expected: poles.len(), got: parsed.len() }),
                })
                .collect()
        };
        let m = pick(&j.m, "masses", true)?;
        let nu = pick(&j.nu, "nu values", false)?;
        SpectralCurve::new(label, &m, &nu)
    }
}

impl From<SpectralCurve> for CurveJson {
    fn from(c: SpectralCurve) -> Self {
        let poles = c.label.even_poles();
        CurveJson {
            label: c.label.name().to_string(),
            m: poles.iter().map(|p| (p.key().to_string(), CJson::from(c.mass(*p)))).collect(),
            nu: poles.iter().map(|p| (p.key().to_string(), CJson::from(c.nu(*p)))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn weber_q() {
        let c = SpectralCurve::new(CurveLabel::Web, &[r(1.0)], &[r(0.0)]).unwrap();
        let x = C::new(0.3, -1.2);
        assert!((c.q(x).unwrap() - (x * x / 4.0 - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn hg_mass_validity() {
        assert!(SpectralCurve::with_masses(CurveLabel::HG, &[r(1.0), r(1.0), r(1.0)]).is_ok());
        assert!(matches!(
            SpectralCurve::with_masses(CurveLabel::HG, &[r(1.0), r(1.0), r(2.0)]),
            Err(Error::InvalidMass(_))
        ));
        let c = SpectralCurve::with_masses(CurveLabel::HG, &[r(1.0), r(1.0), r(1.0)]).unwrap();
        assert!((c.delta_hg() - r(-3.0)).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            SpectralCurve::with_masses(CurveLabel::Kum, &[r(1.0)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1, .. })
        ));
        assert!(SpectralCurve::with_masses(CurveLabel::Ai, &[]).is_ok());
    }

    #[test]
    fn label_round_trip() {
        for l in CurveLabel::ALL {
            assert_eq!(l.name().parse::<CurveLabel>().unwrap(), l);
        }
        assert!("Foo".parse::<CurveLabel>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = SpectralCurve::new(CurveLabel::Kum, &[C::new(1.0, 0.5), r(2.0)], &[r(0.1), C::new(0.0, 0.2)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: SpectralCurve = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let plain: SpectralCurve = serde_json::from_str(r#"{"label":"Web","m":{"inf":1}}"#).unwrap();
        assert_eq!(plain.mass(Pole::Inf), r(1.0));
        assert_eq!(plain.nu(Pole::Inf), r(0.0));
        assert!(serde_json::from_str::<SpectralCurve>(r#"{"label":"Web","m":{"0":1}}"#).is_err());
    }
}
