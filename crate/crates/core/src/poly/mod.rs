//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! An [`MPoly`] owns its variable universe: a list of names kept in natural
//! order (`x2` sorts before `x10`). Binary operations merge the two universes
//! by name, so polynomials built independently can be combined freely.
//! Terms are stored as dense exponent vectors over that universe and zero
//! coefficients are never stored.

mod json;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use json::PolyJson;
pub(crate) use json::{de_rational, ser_rational};
pub use num_rational::BigRational as Rational;

/// Evaluation point: variable name to exact value.
pub type QPoint = BTreeMap<String, Rational>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Natural ordering of variable names: digit runs compare numerically.
pub fn var_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(cb.iter()) {
        let ord = if *da && *db {
            let ta = sa.trim_start_matches('0');
            let tb = sb.trim_start_matches('0');
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

fn sorted_universe<I: IntoIterator<Item = String>>(names: I) -> Vec<String> {
    let mut v: Vec<String> = names
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    v.sort_by(|a, b| var_cmp(a, b));
    v
}

#[derive(Clone, Debug, Default)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rational::one());
        Self {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs over `vars`.
    /// Duplicate exponent vectors are summed and zero coefficients dropped.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let universe = sorted_universe(vars.iter().cloned());
        if universe.len() != vars.len() {
            return Err(Error::Parse("duplicate variable names".into()));
        }
        let perm: Vec<usize> = vars
            .iter()
            .map(|v| universe.iter().position(|u| u == v).unwrap())
            .collect();
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != vars.len() {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    exp.len(),
                    vars.len()
                )));
            }
            let mut e = vec![0; universe.len()];
            for (i, &p) in perm.iter().enumerate() {
                e[p] = exp[i];
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self {
            vars: universe,
            terms: map,
        })
    }

    /// Variable universe in natural order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Variables that occur with a nonzero exponent in some term.
    pub fn support_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Terms in graded lexicographic order (highest degree first).
    pub fn grlex_terms(&self) -> Vec<(&[u32], &Rational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Every exponent is at most one.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x <= 1))
    }

    /// Coefficient of the monomial given as `(variable, exponent)` pairs.
    pub fn coefficient(&self, monomial: &[(&str, u32)]) -> Rational {
        let mut e = vec![0; self.vars.len()];
        for (name, p) in monomial {
            match self.vars.iter().position(|v| v == name) {
                Some(i) => e[i] += p,
                None if *p == 0 => {}
                None => return Rational::zero(),
            }
        }
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Re-expresses `self` over a superset universe (must be sorted).
    fn embed(&self, universe: &[String]) -> Self {
        if universe == self.vars.as_slice() {
            return self.clone();
        }
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                universe
                    .iter()
                    .position(|u| u == v)
                    .expect("universe is a superset")
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; universe.len()];
                for (i, &j) in idx.iter().enumerate() {
                    ne[j] = e[i];
                }
                (ne, c.clone())
            })
            .collect();
        Self {
            vars: universe.to_vec(),
            terms,
        }
    }

    fn merged_universe(&self, other: &Self) -> Vec<String> {
        if self.vars == other.vars {
            return self.vars.clone();
        }
        sorted_universe(self.vars.iter().chain(other.vars.iter()).cloned())
    }

    /// Extends the universe with extra variable names.
    pub fn with_vars<S: AsRef<str>>(&self, extra: &[S]) -> Self {
        let universe = sorted_universe(
            self.vars
                .iter()
                .cloned()
                .chain(extra.iter().map(|s| s.as_ref().to_string())),
        );
        self.embed(&universe)
    }

    /// Drops variables that do not occur in any term.
    pub fn trimmed(&self) -> Self {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        if keep.len() == self.vars.len() {
            return self.clone();
        }
        Self {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative; zero if `v` is not in the universe.
    pub fn diff(&self, v: &str) -> Self {
        let Some(i) = self.vars.iter().position(|x| x == v) else {
            return Self {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            terms.insert(ne, c * Rational::from_integer(BigInt::from(e[i])));
        }
        Self {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Partial derivatives in universe order.
    pub fn gradient(&self) -> Vec<MPoly> {
        self.vars.iter().map(|v| self.diff(v)).collect()
    }

    /// Partial derivatives with respect to an explicit variable list.
    pub fn gradient_wrt<S: AsRef<str>>(&self, vars: &[S]) -> Vec<MPoly> {
        vars.iter().map(|v| self.diff(v.as_ref())).collect()
    }

    /// Exact evaluation. Uses a common denominator so the inner loop runs
    /// over integers only.
    pub fn eval(&self, pt: &QPoint) -> Result<Rational> {
        if self.terms.is_empty() {
            return Ok(Rational::zero());
        }
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        let mut values = Vec::with_capacity(used.len());
        for &i in &used {
            let v = pt
                .get(&self.vars[i])
                .ok_or_else(|| Error::MissingVariable(self.vars[i].clone()))?;
            values.push(v);
        }
        let denom = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let coeff_den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let max_deg = self.total_degree().unwrap_or(0);

        // powers[j][p] = (numerator scaled to `denom`)^p
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(used.len());
        for (j, &i) in used.iter().enumerate() {
            let top = self.terms.keys().map(|e| e[i]).max().unwrap_or(0) as usize;
            let a = values[j].numer() * (&denom / values[j].denom());
            let mut row = vec![BigInt::one()];
            for p in 1..=top {
                let next = &row[p - 1] * &a;
                row.push(next);
            }
            powers.push(row);
        }
        let mut denom_pows = vec![BigInt::one()];
        for p in 1..=max_deg as usize {
            let next = &denom_pows[p - 1] * &denom;
            denom_pows.push(next);
        }

        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            let mut acc = c.numer() * (&coeff_den / c.denom());
            let mut deg = 0;
            for (j, &i) in used.iter().enumerate() {
                if e[i] > 0 {
                    acc *= &powers[j][e[i] as usize];
                    deg += e[i];
                }
            }
            acc *= &denom_pows[(max_deg - deg) as usize];
            total += acc;
        }
        Ok(Rational::new(
            total,
            coeff_den * &denom_pows[max_deg as usize],
        ))
    }

    /// Substitutes polynomials for variables. Unmapped variables pass through.
    pub fn subst(&self, map: &HashMap<String, MPoly>) -> Self {
        let mut universe: Vec<String> = self
            .vars
            .iter()
            .filter(|v| !map.contains_key(*v))
            .cloned()
            .collect();
        for v in &self.vars {
            if let Some(p) = map.get(v) {
                universe.extend(p.vars.iter().cloned());
            }
        }
        let universe = sorted_universe(universe);

        let images: Vec<MPoly> = self
            .vars
            .iter()
            .map(|v| match map.get(v) {
                Some(p) => p.embed(&universe),
                None => MPoly::var(v).embed(&universe),
            })
            .collect();
        let mut power_cache: Vec<Vec<MPoly>> = images
            .iter()
            .map(|p| vec![MPoly::one().embed(&universe), p.clone()])
            .collect();

        let mut result = MPoly {
            vars: universe.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(c.clone()).embed(&universe);
            for (i, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                while power_cache[i].len() <= p as usize {
                    let next = &power_cache[i][power_cache[i].len() - 1] * &images[i];
                    power_cache[i].push(next);
                }
                term = &term * &power_cache[i][p as usize];
            }
            result = &result + &term;
        }
        result
    }

    /// Renames variables; names mapping to the same target are identified.
    pub fn rename(&self, map: &HashMap<String, String>) -> Self {
        let m: HashMap<String, MPoly> = map
            .iter()
            .map(|(k, v)| (k.clone(), MPoly::var(v)))
            .collect();
        self.subst(&m)
    }

    /// Hessian evaluated at `pt`, rows and columns in universe order.
    pub fn hessian_at(&self, pt: &QPoint) -> Result<Matrix<Rational>> {
        let n = self.vars.len();
        let mut h = Matrix::zeros(n, n);
        let grad = self.gradient();
        for i in 0..n {
            for j in i..n {
                let v = grad[i].diff(&self.vars[j]).eval(pt)?;
                h[(i, j)] = v.clone();
                h[(j, i)] = v;
            }
        }
        Ok(h)
    }

    /// Floating-point evaluation, for plotting-grade checks only.
    pub fn eval_f64(&self, pt: &BTreeMap<String, f64>) -> Result<f64> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            if self.terms.keys().any(|e| e[i] > 0) {
                vals.push(*pt.get(v).ok_or_else(|| Error::MissingVariable(v.clone()))?);
            } else {
                vals.push(0.0);
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut t = crate::linalg::rational_to_f64(c);
                for (i, &p) in e.iter().enumerate() {
                    if p > 0 {
                        t *= vals[i].powi(p as i32);
                    }
                }
                t
            })
            .sum())
    }

    pub fn parse(src: &str) -> Result<Self> {
        parse::parse(src)
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let u = self.merged_universe(other);
        self.embed(&u).terms == other.embed(&u).terms
    }
}

impl Eq for MPoly {}

impl Zero for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        MPoly::constant(Rational::one())
    }
}

impl From<Rational> for MPoly {
    fn from(c: Rational) -> Self {
        MPoly::constant(c)
    }
}

impl From<i64> for MPoly {
    fn from(c: i64) -> Self {
        MPoly::constant(int(c))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let u = self.merged_universe(rhs);
        let mut a = self.embed(&u);
        for (e, c) in rhs.embed(&u).terms {
            *a.terms.entry(e).or_insert_with(Rational::zero) += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let u = self.merged_universe(rhs);
        let a = self.embed(&u);
        let b = rhs.embed(&u);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { vars: u, terms }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly { (&self).$m(&rhs) }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.grlex_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], p)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
