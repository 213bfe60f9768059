use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{MPoly, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// Wire form: `{"vars": [...], "terms": [{"exp": [...], "num": "..", "den": ".."}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl From<&MPoly> for PolyJson {
    fn from(p: &MPoly) -> Self {
        PolyJson {
            vars: p.vars().to_vec(),
            terms: p
                .grlex_terms()
                .into_iter()
                .map(|(e, c)| TermJson {
                    exp: e.to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<MPoly> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator `{}`", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator `{}`", t.den)))?;
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            terms.push((t.exp, Rational::new(num, den)));
        }
        MPoly::from_terms(&j.vars, terms)
    }
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        MPoly::try_from(j).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Accepts `"num/den"` strings and JSON integers.
pub(crate) fn de_rational<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Rational, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Str(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(i) => Ok(Rational::from_integer(i.into())),
        Raw::Str(s) => super::parse_rational(&s).map_err(serde::de::Error::custom),
    }
}
