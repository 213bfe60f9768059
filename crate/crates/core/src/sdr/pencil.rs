use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{rational_to_f64, sparse_det, Field, Matrix};
use crate::poly::{parse_rational, var_cmp, MPoly, Rational};

/// Pencils larger than this are evaluated with the sparse determinant.
const DENSE_DET_LIMIT: usize = 12;

/// Affine symmetric pencil `A0 + sum_i x_i A_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPencil<T> {
    size: usize,
    constant: Matrix<T>,
    coeffs: BTreeMap<String, Matrix<T>>,
}

impl<T: Field> SymPencil<T> {
    pub fn new(constant: Matrix<T>, coeffs: BTreeMap<String, Matrix<T>>) -> Result<Self> {
        let size = constant.rows();
        for (name, m) in
            std::iter::once(("A0", &constant)).chain(coeffs.iter().map(|(k, v)| (k.as_str(), v)))
        {
            if m.rows() != size || m.cols() != size {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient `{name}` is {}x{}, expected {size}x{size}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
        }
        let coeffs = coeffs
            .into_iter()
            .filter(|(_, m)| m.data().iter().any(|v| !v.is_zero()))
            .collect();
        Ok(Self {
            size,
            constant,
            coeffs,
        })
    }

    /// The `1x1` pencil `[c]`.
    pub fn scalar(c: T) -> Self {
        Self {
            size: 1,
            constant: Matrix::diagonal(&[c]),
            coeffs: BTreeMap::new(),
        }
    }

    /// Diagonal pencil `diag(x_1, ..., x_m)`.
    pub fn diagonal_vars<S: AsRef<str>>(vars: &[S]) -> Self {
        let m = vars.len();
        let mut coeffs = BTreeMap::new();
        for (i, v) in vars.iter().enumerate() {
            let mut a = Matrix::zeros(m, m);
            a[(i, i)] = T::one();
            coeffs.insert(v.as_ref().to_string(), a);
        }
        Self {
            size: m,
            constant: Matrix::zeros(m, m),
            coeffs,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn constant(&self) -> &Matrix<T> {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Matrix<T>> {
        &self.coeffs
    }

    pub fn coeff(&self, var: &str) -> Option<&Matrix<T>> {
        self.coeffs.get(var)
    }

    /// Variables with a nonzero coefficient, in natural order.
    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.coeffs.keys().cloned().collect();
        v.sort_by(|a, b| var_cmp(a, b));
        v
    }

    pub fn eval(&self, pt: &BTreeMap<String, T>) -> Result<Matrix<T>> {
        let mut m = self.constant.clone();
        for (name, a) in &self.coeffs {
            let x = pt
                .get(name)
                .ok_or_else(|| Error::MissingVariable(name.clone()))?;
            if x.is_zero() {
                continue;
            }
            m = m.add_matrix(&a.scaled(x));
        }
        Ok(m)
    }

    pub fn det_at(&self, pt: &BTreeMap<String, T>) -> Result<T> {
        let m = self.eval(pt)?;
        Ok(if self.size > DENSE_DET_LIMIT {
            sparse_det(&m)
        } else {
            m.det()
        })
    }

    /// Block-diagonal sum `diag(self, other)`; the caller is responsible for
    /// the variable sets.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let size = self.size + other.size;
        let embed = |a: Option<&Matrix<T>>, b: Option<&Matrix<T>>| {
            let mut m = Matrix::zeros(size, size);
            if let Some(a) = a {
                for i in 0..self.size {
                    for j in 0..self.size {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
            }
            if let Some(b) = b {
                for i in 0..other.size {
                    for j in 0..other.size {
                        m[(self.size + i, self.size + j)] = b[(i, j)].clone();
                    }
                }
            }
            m
        };
        let mut coeffs = BTreeMap::new();
        for v in self.coeffs.keys().chain(other.coeffs.keys()) {
            coeffs
                .entry(v.clone())
                .or_insert_with(|| embed(self.coeffs.get(v), other.coeffs.get(v)));
        }
        Self {
            size,
            constant: embed(Some(&self.constant), Some(&other.constant)),
            coeffs,
        }
    }

    /// All coefficient matrices (constant first) are symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.constant.is_symmetric() && self.coeffs.values().all(Matrix::is_symmetric)
    }

    pub(crate) fn from_parts_unchecked(
        size: usize,
        constant: Matrix<T>,
        coeffs: BTreeMap<String, Matrix<T>>,
    ) -> Self {
        Self {
            size,
            constant,
            coeffs,
        }
    }

    pub fn map_scalars<U: Field>(&self, f: impl Fn(&T) -> U) -> SymPencil<U> {
        SymPencil {
            size: self.size,
            constant: self.constant.map(&f),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, m)| (k.clone(), m.map(&f)))
                .collect(),
        }
    }
}

impl SymPencil<Rational> {
    /// Entry `(r, c)` as an affine polynomial.
    pub fn entry_poly(&self, r: usize, c: usize) -> MPoly {
        let mut p = MPoly::constant(self.constant[(r, c)].clone());
        for (name, a) in &self.coeffs {
            if !a[(r, c)].is_zero() {
                p = p + MPoly::var(name).scale(&a[(r, c)]);
            }
        }
        p
    }

    pub fn poly_matrix(&self) -> Matrix<MPoly> {
        let mut m = Matrix::zeros(self.size, self.size);
        for r in 0..self.size {
            for c in 0..self.size {
                m[(r, c)] = self.entry_poly(r, c);
            }
        }
        m
    }

    /// The determinant as a polynomial, by memoized Laplace expansion.
    /// Cost grows like `2^size`; meant for small pencils.
    pub fn det_poly(&self) -> MPoly {
        let d = self.poly_matrix().laplace_det();
        if d.is_zero() {
            MPoly::zero()
        } else {
            d.trimmed()
        }
    }

    pub fn to_f64(&self) -> SymPencil<f64> {
        self.map_scalars(rational_to_f64)
    }
}

/// A pencil in either scalar mode, as read from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPencil {
    Exact(SymPencil<Rational>),
    Float(SymPencil<f64>),
}

impl AnyPencil {
    pub fn size(&self) -> usize {
        match self {
            AnyPencil::Exact(p) => p.size(),
            AnyPencil::Float(p) => p.size(),
        }
    }

    pub fn vars(&self) -> Vec<String> {
        match self {
            AnyPencil::Exact(p) => p.vars(),
            AnyPencil::Float(p) => p.vars(),
        }
    }

    pub fn to_float(&self) -> SymPencil<f64> {
        match self {
            AnyPencil::Exact(p) => p.to_f64(),
            AnyPencil::Float(p) => p.clone(),
        }
    }

    /// Wire form `{"size", "mode", "A0", "coeffs"}`; exact scalars are
    /// `"num/den"` strings.
    pub fn to_json(&self) -> Value {
        fn rows<T: Clone>(m: &Matrix<T>, f: &dyn Fn(&T) -> Value) -> Value {
            Value::Array(
                (0..m.rows())
                    .map(|r| Value::Array(m.row(r).iter().map(f).collect()))
                    .collect(),
            )
        }
        fn encode<T: Field>(p: &SymPencil<T>, mode: &str, f: &dyn Fn(&T) -> Value) -> Value {
            let mut coeffs = serde_json::Map::new();
            for v in p.vars() {
                coeffs.insert(v.clone(), rows(&p.coeffs[&v], f));
            }
            json!({"size": p.size, "mode": mode, "A0": rows(&p.constant, f), "coeffs": coeffs})
        }
        match self {
            AnyPencil::Exact(p) => encode(p, "exact", &|q: &Rational| Value::String(q.to_string())),
            AnyPencil::Float(p) => encode(p, "float", &|x: &f64| json!(x)),
        }
    }

    /// Reads the wire form. Also accepts an object whose `pencil` field
    /// holds it, so reports can be fed back in.
    pub fn from_json(v: &Value) -> Result<Self> {
        let v = match v.get("pencil") {
            Some(inner) if v.get("A0").is_none() => inner,
            _ => v,
        };
        let mode = v.get("mode").and_then(Value::as_str).unwrap_or("exact");
        let a0 = v
            .get("A0")
            .ok_or_else(|| Error::Parse("pencil without `A0`".into()))?;
        let empty = serde_json::Map::new();
        let coeffs = match v.get("coeffs") {
            None => &empty,
            Some(c) => c
                .as_object()
                .ok_or_else(|| Error::Parse("`coeffs` must be an object".into()))?,
        };
        let pencil = match mode {
            "exact" => AnyPencil::Exact(decode(a0, coeffs, exact_scalar)?),
            "float" => AnyPencil::Float(decode(a0, coeffs, float_scalar)?),
            other => return Err(Error::Parse(format!("unknown pencil mode `{other}`"))),
        };
        if let Some(size) = v.get("size").and_then(Value::as_u64) {
            if size as usize != pencil.size() {
                return Err(Error::DimensionMismatch(format!(
                    "declared size {size}, matrices are {}x{}",
                    pencil.size(),
                    pencil.size()
                )));
            }
        }
        Ok(pencil)
    }
}

fn exact_scalar(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(Error::Parse(format!(
                "exact pencil entry `{n}` is not an integer or \"num/den\""
            ))),
        },
        _ => Err(Error::Parse(format!("bad pencil entry `{v}`"))),
    }
}

fn float_scalar(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("bad number `{n}`"))),
        Value::String(s) => parse_rational(s).map(|q| rational_to_f64(&q)),
        _ => Err(Error::Parse(format!("bad pencil entry `{v}`"))),
    }
}

fn decode<T: Field>(
    a0: &Value,
    coeffs: &serde_json::Map<String, Value>,
    scalar: fn(&Value) -> Result<T>,
) -> Result<SymPencil<T>> {
    let matrix = |v: &Value| -> Result<Matrix<T>> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(scalar)
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    };
    let constant = matrix(a0)?;
    let mut cs = BTreeMap::new();
    for (name, m) in coeffs {
        cs.insert(name.clone(), matrix(m)?);
    }
    SymPencil::new(constant, cs)
}
