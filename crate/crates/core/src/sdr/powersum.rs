use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::expand::{
    expand_sdr_limited, substitute_affine, ProductSub, Shifts, SquareSub, DEFAULT_SIZE_LIMIT,
};
use super::schedule::{substitution_schedule, SimpleSubstitution};
use super::{AnyPencil, SymPencil};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::poly::{MPoly, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSumTerm {
    #[serde(
        serialize_with = "crate::poly::ser_rational",
        deserialize_with = "crate::poly::de_rational"
    )]
    pub lambda: Rational,
    #[serde(deserialize_with = "de_form")]
    pub form: MPoly,
}

/// `p = sum_i lambda_i f_i^d` with affine `f_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSumForm {
    pub d: u32,
    pub terms: Vec<PowerSumTerm>,
}

/// Forms are read from polynomial JSON or from an expression string.
fn de_form<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<MPoly, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Poly(MPoly),
    }
    match Raw::deserialize(d)? {
        Raw::Text(s) => MPoly::parse(&s).map_err(serde::de::Error::custom),
        Raw::Poly(p) => Ok(p),
    }
}

impl PowerSumForm {
    pub fn new(d: u32, terms: Vec<(Rational, MPoly)>) -> Result<Self> {
        let p = Self {
            d,
            terms: terms
                .into_iter()
                .map(|(lambda, form)| PowerSumTerm { lambda, form })
                .collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::DomainError(
                "power-sum degree must be at least 1".into(),
            ));
        }
        if self.terms.is_empty() {
            return Err(Error::DomainError("power-sum form without terms".into()));
        }
        for t in &self.terms {
            if t.lambda.is_zero() {
                return Err(Error::DomainError("power-sum coefficient is zero".into()));
            }
            if t.form.total_degree().is_some_and(|d| d > 1) {
                return Err(Error::DomainError(format!(
                    "form `{}` is not affine",
                    t.form
                )));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn expand(&self) -> MPoly {
        self.terms.iter().fold(MPoly::zero(), |acc, t| {
            &acc + &t.form.pow(self.d).scale(&t.lambda)
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let v = match v.get("form") {
            Some(inner) if v.get("terms").is_none() => inner.clone(),
            _ => v,
        };
        let p: Self = serde_json::from_value(v)?;
        p.validate()?;
        Ok(p)
    }
}

fn leaf(term: usize, j: usize) -> String {
    format!("u{term}_{j}")
}

/// Runs the substitution schedule for `y^d` on every term of
/// `sum_i lambda_i u_i` at once, then replaces each term's leaf variables
/// by its affine form.
pub fn power_sum_sdr(p: &PowerSumForm) -> Result<SymPencil<Rational>> {
    power_sum_sdr_limited(p, DEFAULT_SIZE_LIMIT)
}

pub fn power_sum_sdr_limited(p: &PowerSumForm, size_limit: usize) -> Result<SymPencil<Rational>> {
    p.validate()?;
    let schedule = substitution_schedule(p.d as u64);
    let mut coeffs = BTreeMap::new();
    for (i, t) in p.terms.iter().enumerate() {
        coeffs.insert(
            leaf(i, 1),
            Matrix::diagonal(std::slice::from_ref(&t.lambda)),
        );
    }
    let mut pencil = SymPencil::new(Matrix::zeros(1, 1), coeffs)?;
    for round in &schedule.rounds {
        let mut squares = Vec::new();
        let mut products = Vec::new();
        for i in 0..p.rank() {
            for s in round {
                match *s {
                    SimpleSubstitution::Square { var } => {
                        squares.push(SquareSub {
                            from: leaf(i, var),
                            to: leaf(i, var),
                        });
                    }
                    SimpleSubstitution::Product { var, new } => products.push(ProductSub {
                        from: leaf(i, var),
                        left: leaf(i, var),
                        right: leaf(i, new),
                    }),
                }
            }
        }
        pencil = expand_sdr_limited(&pencil, &squares, &products, &Shifts::Auto, size_limit)?;
    }
    let mut images = BTreeMap::new();
    for (i, t) in p.terms.iter().enumerate() {
        for j in 1..=schedule.num_vars() {
            images.insert(leaf(i, j), t.form.clone());
        }
    }
    substitute_affine(&pencil, &images)
}

/// Block-diagonal pencil `diag(a, b)` for pencils in disjoint variables.
pub fn product_sdr<T: Field>(a: &SymPencil<T>, b: &SymPencil<T>) -> Result<SymPencil<T>> {
    let bv = b.vars();
    if let Some(v) = a.vars().into_iter().find(|v| bv.contains(v)) {
        return Err(Error::VariableCollision(v));
    }
    Ok(a.direct_sum(b))
}

/// As [`product_sdr`]; a float operand makes the result float.
pub fn product_sdr_any(a: &AnyPencil, b: &AnyPencil) -> Result<AnyPencil> {
    match (a, b) {
        (AnyPencil::Exact(x), AnyPencil::Exact(y)) => product_sdr(x, y).map(AnyPencil::Exact),
        _ => product_sdr(&a.to_float(), &b.to_float()).map(AnyPencil::Float),
    }
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn ser_big_opt<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_big(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeBound {
    pub d: u64,
    pub r: u64,
    pub m: u32,
    /// `2^(m-1) r^m (m+2)!`
    #[serde(serialize_with = "ser_big")]
    pub general: BigUint,
    /// `(2r+2)^(m-1)`, only when `d = 2^(m-1)`.
    #[serde(serialize_with = "ser_big_opt")]
    pub power_of_two: Option<BigUint>,
}

impl SizeBound {
    /// The sharper of the bounds that apply.
    pub fn applicable(&self) -> &BigUint {
        match &self.power_of_two {
            Some(p) if p < &self.general => p,
            _ => &self.general,
        }
    }
}

pub fn size_bound(d: u64, r: u64) -> SizeBound {
    assert!(d >= 1 && r >= 1, "size bound needs d, r >= 1");
    let m = 64 - d.leading_zeros();
    let fact: BigUint = (1..=m as u64 + 2).map(BigUint::from).product();
    let general = (BigUint::from(1u32) << (m - 1)) * BigUint::from(r).pow(m) * fact;
    let power_of_two = d
        .is_power_of_two()
        .then(|| BigUint::from(2 * r + 2).pow(m - 1));
    SizeBound {
        d,
        r,
        m,
        general,
        power_of_two,
    }
}
