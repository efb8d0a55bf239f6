//! JSON encoding of complex numbers as `{"re": .., "im": ..}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Accepts a bare number, `[re, im]` or `{"re", "im"}`; always writes the object form.
#[derive(Copy, Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CJson {
    Real(f64),
    Pair([f64; 2]),
    Obj {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl Serialize for CJson {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let z = Complex64::from(*self);
        ReIm { re: z.re, im: z.im }.serialize(s)
    }
}

#[derive(Serialize)]
struct ReIm {
    re: f64,
    im: f64,
}

impl From<CJson> for Complex64 {
    fn from(c: CJson) -> Self {
        match c {
            CJson::Real(x) => Complex64::new(x, 0.0),
            CJson::Pair([a, b]) => Complex64::new(a, b),
            CJson::Obj { re, im } => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for CJson {
    fn from(z: Complex64) -> Self {
        CJson::Obj { re: z.re, im: z.im }
    }
}

/// `serde_json::Value` for a complex number.
pub fn cval(z: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}

/// Parses `2.5`, `-1e-3`, `0.5+2i`, `1-i` or `-3.5j`.
pub fn parse_complex(s: &str) -> crate::Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || crate::Error::Config(format!("cannot parse complex number `{s}`"));
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    let b = body.as_bytes();
    let split = (1..b.len()).rev().find(|&i| matches!(b[i], b'+' | b'-') && !matches!(b[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse().map_err(|_| bad())?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Serde adapter for `Complex64` fields: `#[serde(with = "crate::json::complex")]`.
pub mod complex {
    use super::CJson;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        CJson::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(CJson::deserialize(d)?.into())
    }
}

/// Serde adapter for `Option<Complex64>`, `null` when absent.
pub mod option_complex {
    use super::CJson;
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(CJson::from).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_three_shapes() {
        for (s, z) in [
            ("2.5", Complex64::new(2.5, 0.0)),
            ("[1, -2]", Complex64::new(1.0, -2.0)),
            (r#"{"re": 0.5, "im": 3}"#, Complex64::new(0.5, 3.0)),
            (r#"{"re": 0.5}"#, Complex64::new(0.5, 0.0)),
        ] {
            let c: CJson = serde_json::from_str(s).unwrap();
            assert_eq!(Complex64::from(c), z);
        }
        let out = serde_json::to_value(CJson::Real(1.0)).unwrap();
        assert_eq!(out, serde_json::json!({"re": 1.0, "im": 0.0}));
    }

    #[test]
    fn parses_text() {
        for (s, re, im) in [
            ("2.5", 2.5, 0.0),
            ("-1e-3", -1e-3, 0.0),
            ("0.5+2i", 0.5, 2.0),
            ("1 - i", 1.0, -1.0),
            ("-3.5j", 0.0, -3.5),
            ("i", 0.0, 1.0),
            ("-i", 0.0, -1.0),
            ("1e-2-2E+1i", 1e-2, -20.0),
        ] {
            assert_eq!(parse_complex(s).unwrap(), Complex64::new(re, im), "{s}");
        }
        for s in ["", "abc", "1+2", "2ii", "+-i"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }
}
