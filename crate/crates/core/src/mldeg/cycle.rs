use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{int, MPoly, QPoint, Rational};

/// `2^(n-1) - n`: the number of subsets of `{1..n-1}` with at least two
/// elements.
pub fn eulerian(n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::DomainError(format!(
            "Eulerian count needs n >= 3, got {n}"
        )));
    }
    if n > 64 {
        return Err(Error::DomainError(format!(
            "n = {n} overflows a 64-bit count"
        )));
    }
    Ok((1u64 << (n - 1)) - n as u64)
}

pub fn cycle_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `P_{C_n} = sum_i prod_{j != i} x_j` in the variables `x1..xn`.
pub fn cycle_poly(n: usize) -> MPoly {
    let vars = cycle_vars(n);
    let terms = (0..n).map(|i| {
        let exp: Vec<u32> = (0..n).map(|j| u32::from(j != i)).collect();
        (exp, Rational::one())
    });
    MPoly::from_terms(&vars, terms).expect("exponent vectors match the variables")
}

/// The point `a * 1_I + b * 1_J`, where `I` is the complement of `J` in
/// `{1..n}` and always contains `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberPoint {
    pub n: usize,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    #[serde(serialize_with = "crate::poly::ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::poly::ser_rational")]
    pub b: Rational,
}

impl FiberPoint {
    pub fn i_set(&self) -> Vec<usize> {
        (1..=self.n).filter(|v| !self.j.contains(v)).collect()
    }

    pub fn coords(&self) -> Vec<Rational> {
        (1..=self.n)
            .map(|v| {
                if self.j.contains(&v) {
                    self.b.clone()
                } else {
                    self.a.clone()
                }
            })
            .collect()
    }

    pub fn qpoint(&self) -> QPoint {
        cycle_vars(self.n).into_iter().zip(self.coords()).collect()
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n + 1 - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// The preimage of the all-ones direction under the gradient map of
/// `P_{C_n}`: `J = {}` gives `1_n`; every `J` in `{1..n-1}` with
/// `2 <= |J| <= n-2` gives `b = 1`, `a = (|I|-1)/(1-n+|I|)`.
pub fn cycle_fiber(n: usize) -> Result<Vec<FiberPoint>> {
    eulerian(n)?;
    let mut out = vec![FiberPoint {
        n,
        j: Vec::new(),
        a: Rational::one(),
        b: Rational::one(),
    }];
    for size in 2..=n - 2 {
        let i_len = (n - size) as i64;
        let a = Rational::new(BigInt::from(i_len - 1), BigInt::from(1 - n as i64 + i_len));
        for j in subsets_of_size(n - 1, size) {
            out.push(FiberPoint {
                n,
                j,
                a: a.clone(),
                b: Rational::one(),
            });
        }
    }
    Ok(out)
}

pub fn gradient_at(p: &FiberPoint) -> Vec<Rational> {
    let pt = p.qpoint();
    cycle_poly(p.n)
        .gradient_wrt(&cycle_vars(p.n))
        .iter()
        .map(|g| {
            g.eval(&pt)
                .expect("fiber point assigns every cycle variable")
        })
        .collect()
}

/// All coordinates of the gradient at `p` are equal and nonzero.
pub fn verify_fiber_point(n: usize, p: &FiberPoint) -> bool {
    if p.n != n || p.a.is_zero() || p.b.is_zero() {
        return false;
    }
    let g = gradient_at(p);
    !g[0].is_zero() && g.iter().all(|v| v == &g[0])
}

pub fn hessian_det(p: &FiberPoint) -> Rational {
    cycle_poly(p.n)
        .hessian_at(&p.qpoint())
        .expect("fiber point assigns every cycle variable")
        .det()
}

fn powi(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// Determinant of `c (ones - id)` of size `m`: `(-1)^(m-1) (m-1) c^m`.
fn ones_minus_id_det(m: usize, c: &Rational) -> Rational {
    let sign = if m % 2 == 1 { int(1) } else { int(-1) };
    sign * int(m as i64 - 1) * num_traits::pow(c.clone(), m)
}

/// Hessian determinant at a fiber point from its two-block form. The
/// Hessian is `c (ones - id)` on `I x I`, `d (ones - id)` on `J x J` and
/// zero across.
pub fn hessian_block_det(p: &FiberPoint) -> Rational {
    let i_len = (p.n - p.j.len()) as i64;
    let j_len = p.j.len() as i64;
    let (a, b) = (&p.a, &p.b);
    let c = int(i_len - 2) * powi(a, i_len - 3) * powi(b, j_len)
        + int(j_len) * powi(a, i_len - 2) * powi(b, j_len - 1);
    let mut det = ones_minus_id_det(i_len as usize, &c);
    if j_len > 0 {
        let d = int(i_len) * powi(a, i_len - 1) * powi(b, j_len - 2)
            + int(j_len - 2) * powi(a, i_len) * powi(b, j_len - 3);
        det *= ones_minus_id_det(j_len as usize, &d);
    }
    det
}

/// The Hessian of `P_{C_n}` at `p` is invertible, and its determinant
/// agrees with the block formula.
pub fn verify_regular_value(n: usize, p: &FiberPoint) -> bool {
    if p.n != n {
        return false;
    }
    let det = hessian_det(p);
    !det.is_zero() && det == hessian_block_det(p)
}

/// Two fiber points are the same projective point.
pub fn projectively_equal(p: &FiberPoint, q: &FiberPoint) -> bool {
    let (u, v) = (p.coords(), q.coords());
    let Some(k) = u.iter().position(|x| !x.is_zero()) else {
        return v.iter().all(Zero::is_zero);
    };
    if v[k].is_zero() {
        return false;
    }
    let s = &v[k] / &u[k];
    u.iter().zip(&v).all(|(x, y)| &(x * &s) == y)
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub n: usize,
    pub ml_degree: u64,
    pub fiber: Vec<FiberPoint>,
    pub all_verified: bool,
}

/// Builds the fiber and, when `verify` is set, checks every point; the
/// degree is the number of points.
pub fn cycle_report(n: usize, verify: bool) -> Result<CycleReport> {
    let fiber = cycle_fiber(n)?;
    let all_verified = verify
        && fiber
            .iter()
            .all(|p| verify_fiber_point(n, p) && verify_regular_value(n, p))
        && fiber
            .iter()
            .enumerate()
            .all(|(i, p)| fiber[i + 1..].iter().all(|q| !projectively_equal(p, q)));
    Ok(CycleReport {
        n,
        ml_degree: fiber.len() as u64,
        fiber,
        all_verified,
    })
}

/// ML degree of the cycle models, recomputed as the size of the verified
/// fiber over the all-ones vector.
pub fn ml_degree_cycle(n: usize) -> Result<u64> {
    let report = cycle_report(n, true)?;
    if !report.all_verified {
        return Err(Error::VerificationFailed(format!(
            "a fiber point of C_{n} failed its checks"
        )));
    }
    Ok(report.ml_degree)
}
