use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AnyPencil, SymPencil};
use crate::error::Result;
use crate::linalg::rational_to_f64;
use crate::poly::{rat, var_cmp, MPoly, QPoint, Rational};

/// Relative tolerance for float pencils.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-8;
/// Pencils up to this size also get a symbolic determinant comparison.
pub const SYMBOLIC_SIZE_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdrReport {
    pub mode: &'static str,
    pub size: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Largest `|det - p| / max(1, |p|)` over the trials.
    pub max_deviation: f64,
    /// Outcome of the full symbolic comparison, when it was run.
    pub symbolic: Option<bool>,
    /// First failing point, coordinates as rational strings.
    pub counterexample: Option<BTreeMap<String, String>>,
    pub pass: bool,
}

/// Random rational point: numerators in `[-20, 20]`, denominators in `[1, 10]`.
pub fn random_point(vars: &[String], rng: &mut ChaCha8Rng) -> QPoint {
    vars.iter()
        .map(|v| {
            (
                v.clone(),
                rat(rng.gen_range(-20..=20), rng.gen_range(1..=10)),
            )
        })
        .collect()
}

fn union_vars(pencil: &AnyPencil, p: &MPoly) -> Vec<String> {
    let mut vars = pencil.vars();
    for v in p.support_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort_by(|a, b| var_cmp(a, b));
    vars
}

fn deviation(det: f64, p: f64) -> f64 {
    (det - p).abs() / p.abs().max(1.0)
}

fn point_strings(pt: &QPoint) -> BTreeMap<String, String> {
    pt.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

fn verify_exact(
    pencil: &SymPencil<Rational>,
    p: &MPoly,
    trials: usize,
    rng: &mut ChaCha8Rng,
    vars: &[String],
    r: &mut SdrReport,
) -> Result<()> {
    for _ in 0..trials {
        let pt = random_point(vars, rng);
        let det = pencil.det_at(&pt)?;
        let want = p.eval(&pt)?;
        if det != want {
            let dev = (&det - &want).abs() / want.abs().max(Rational::from_integer(1.into()));
            r.max_deviation = r.max_deviation.max(rational_to_f64(&dev));
            if r.counterexample.is_none() {
                r.counterexample = Some(point_strings(&pt));
            }
        }
    }
    if pencil.size() <= SYMBOLIC_SIZE_LIMIT {
        let d = pencil.det_poly();
        r.symbolic = Some(if p.is_zero() {
            d.is_zero()
        } else {
            d == p.trimmed()
        });
    }
    r.pass = r.counterexample.is_none() && r.symbolic != Some(false);
    Ok(())
}

fn verify_float(
    pencil: &SymPencil<f64>,
    p: &MPoly,
    trials: usize,
    rng: &mut ChaCha8Rng,
    vars: &[String],
    r: &mut SdrReport,
) -> Result<()> {
    for _ in 0..trials {
        let pt = random_point(vars, rng);
        let fpt: BTreeMap<String, f64> = pt
            .iter()
            .map(|(k, v)| (k.clone(), rational_to_f64(v)))
            .collect();
        let det = pencil.det_at(&fpt)?;
        let want = rational_to_f64(&p.eval(&pt)?);
        let dev = deviation(det, want);
        r.max_deviation = r.max_deviation.max(dev);
        if (dev.is_nan() || dev > r.tol) && r.counterexample.is_none() {
            r.counterexample = Some(point_strings(&pt));
        }
    }
    r.pass = r.counterexample.is_none();
    Ok(())
}

/// Compares `det(pencil)` with `p` at `trials` random rational points.
/// Exact pencils must agree exactly, and small ones are also compared
/// symbolically; float pencils must agree to relative error `tol`.
pub fn verify_sdr(
    pencil: &AnyPencil,
    p: &MPoly,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<SdrReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = union_vars(pencil, p);
    let mut r = SdrReport {
        mode: match pencil {
            AnyPencil::Exact(_) => "exact",
            AnyPencil::Float(_) => "float",
        },
        size: pencil.size(),
        trials,
        seed,
        tol,
        max_deviation: 0.0,
        symbolic: None,
        counterexample: None,
        pass: false,
    };
    match pencil {
        AnyPencil::Exact(m) => verify_exact(m, p, trials, &mut rng, &vars, &mut r)?,
        AnyPencil::Float(m) => verify_float(m, p, trials, &mut rng, &vars, &mut r)?,
    }
    Ok(r)
}
