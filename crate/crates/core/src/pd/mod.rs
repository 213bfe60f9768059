//! Positive definiteness of pencils: Sylvester's criterion, constant
//! diagonal obstructions and a seeded search for positive definite points.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rational_to_f64, Field, Matrix};
use crate::poly::{QPoint, Rational};
use crate::sdr::{AnyPencil, SymPencil};

/// Leading minors of float matrices must exceed this to count as positive.
pub const FLOAT_MINOR_TOL: f64 = 1e-12;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_BOX: i64 = 10;
/// Sample coordinates are multiples of `1 / GRID`.
const GRID: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Some constant diagonal entry is negative: the pencil is neither
    /// positive definite nor positive semidefinite anywhere.
    NeverPd,
    /// A diagonal obstruction rules out positive definiteness but leaves
    /// semidefinite points possible: a zero constant, or two diagonal
    /// entries that are negatives of each other.
    ObstructionFound,
    FeasiblePointFound,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdReport {
    pub verdict: Verdict,
    /// Coordinates as rational strings.
    pub witness: Option<BTreeMap<String, String>>,
    pub obstruction: Option<String>,
    pub samples: usize,
    pub seed: Option<u64>,
    /// Samples at which the determinant was negative.
    pub negative_det_samples: usize,
}

impl PdReport {
    fn diagonal(verdict: Verdict, obstruction: Option<String>) -> Self {
        Self {
            verdict,
            witness: None,
            obstruction,
            samples: 0,
            seed: None,
            negative_det_samples: 0,
        }
    }
}

/// Sylvester's criterion: every leading principal minor is positive
/// (exactly, or above [`FLOAT_MINOR_TOL`] for floats).
pub fn sylvester_pd<T: Field>(m: &Matrix<T>) -> Result<bool> {
    if !m.is_square() || !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let pivots = m.unpivoted_pivots();
    if pivots.len() < m.rows() {
        return Ok(false);
    }
    let mut minor = T::one();
    for p in pivots {
        minor = minor * p;
        let positive = if T::EXACT {
            minor.is_positive()
        } else {
            minor.to_f64() > FLOAT_MINOR_TOL
        };
        if !positive {
            return Ok(false);
        }
    }
    Ok(true)
}

fn constant_diagonal<T: Field>(p: &SymPencil<T>, i: usize) -> Option<T> {
    p.coeffs()
        .values()
        .all(|a| a[(i, i)].is_zero())
        .then(|| p.constant()[(i, i)].clone())
}

/// Diagonal entry `i` as (constant, coefficient per variable).
fn diagonal_form<T: Field>(p: &SymPencil<T>, i: usize) -> (T, Vec<(String, T)>) {
    let coeffs = p
        .coeffs()
        .iter()
        .filter(|(_, a)| !a[(i, i)].is_zero())
        .map(|(v, a)| (v.clone(), a[(i, i)].clone()))
        .collect();
    (p.constant()[(i, i)].clone(), coeffs)
}

fn negatives<T: Field>(a: &(T, Vec<(String, T)>), b: &(T, Vec<(String, T)>)) -> bool {
    let close = |x: &T, y: &T| {
        (x.clone() + y.clone()).is_negligible(x.to_f64().abs().max(y.to_f64().abs()))
    };
    close(&a.0, &b.0)
        && a.1.len() == b.1.len()
        && a.1
            .iter()
            .zip(&b.1)
            .all(|((u, x), (v, y))| u == v && close(x, y))
}

fn scan<T: Field>(p: &SymPencil<T>) -> PdReport {
    let k = p.size();
    let consts: Vec<Option<T>> = (0..k).map(|i| constant_diagonal(p, i)).collect();
    if let Some(i) = consts.iter().position(|c| {
        c.as_ref()
            .is_some_and(|c| !c.is_positive() && !c.is_negligible(1.0))
    }) {
        let c = consts[i].clone().expect("constant entry");
        let partner = consts.iter().position(|d| {
            d.as_ref()
                .is_some_and(|d| (d.clone() + c.clone()).is_negligible(c.to_f64().abs()))
        });
        let text = match partner {
            Some(j) => format!(
                "constant diagonal entries {} at {} and {} at {}",
                c.to_f64(),
                i + 1,
                -c.to_f64(),
                j + 1
            ),
            None => format!("constant diagonal entry {} at {}", c.to_f64(), i + 1),
        };
        return PdReport::diagonal(Verdict::NeverPd, Some(text));
    }
    if let Some(i) = consts
        .iter()
        .position(|c| c.as_ref().is_some_and(|c| c.is_negligible(1.0)))
    {
        return PdReport::diagonal(
            Verdict::ObstructionFound,
            Some(format!("zero diagonal entry at {}", i + 1)),
        );
    }
    let forms: Vec<_> = (0..k).map(|i| diagonal_form(p, i)).collect();
    for i in 0..k {
        for j in i + 1..k {
            if !forms[i].1.is_empty() && negatives(&forms[i], &forms[j]) {
                return PdReport::diagonal(
                    Verdict::ObstructionFound,
                    Some(format!(
                        "diagonal entries at {} and {} are negatives of each other",
                        i + 1,
                        j + 1
                    )),
                );
            }
        }
    }
    PdReport::diagonal(Verdict::Inconclusive, None)
}

/// Looks for diagonal entries that cannot all be positive at once.
pub fn diagonal_obstruction(pencil: &AnyPencil) -> PdReport {
    match pencil {
        AnyPencil::Exact(p) => scan(p),
        AnyPencil::Float(p) => scan(p),
    }
}

fn draw(vars: &[String], half_width: i64, rng: &mut ChaCha8Rng) -> QPoint {
    vars.iter()
        .map(|v| {
            (
                v.clone(),
                Rational::new(rng.gen_range(-half_width..=half_width).into(), GRID.into()),
            )
        })
        .collect()
}

/// Draws `samples` points uniformly from the grid of `[-box, box]^n` with
/// spacing `1/1000` and returns the first one at which the pencil is
/// positive definite. Without a witness, a diagonal obstruction decides
/// the verdict.
pub fn pd_feasibility_sample(
    pencil: &AnyPencil,
    samples: usize,
    seed: u64,
    box_: &Rational,
) -> Result<PdReport> {
    if samples == 0 {
        return Err(Error::DomainError("at least one sample is needed".into()));
    }
    let half_width = (box_ * Rational::from_integer(GRID.into()))
        .floor()
        .to_integer();
    let half_width: i64 = half_width
        .try_into()
        .map_err(|_| Error::DomainError(format!("box {box_} is too large")))?;
    if half_width < 0 {
        return Err(Error::DomainError(format!("box {box_} is negative")));
    }
    let obstruction = diagonal_obstruction(pencil);
    let vars = pencil.vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut negative = 0;
    for _ in 0..samples {
        let pt = draw(&vars, half_width, &mut rng);
        let (pd, det_negative) = match pencil {
            AnyPencil::Exact(p) => {
                let m = p.eval(&pt)?;
                (sylvester_pd(&m)?, m.det() < Rational::zero())
            }
            AnyPencil::Float(p) => {
                let fpt = pt
                    .iter()
                    .map(|(k, v)| (k.clone(), rational_to_f64(v)))
                    .collect();
                let m = p.eval(&fpt)?;
                (sylvester_pd(&m)?, m.det() < 0.0)
            }
        };
        negative += det_negative as usize;
        if pd {
            return Ok(PdReport {
                verdict: Verdict::FeasiblePointFound,
                witness: Some(pt.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()),
                obstruction: None,
                samples,
                seed: Some(seed),
                negative_det_samples: negative,
            });
        }
    }
    Ok(PdReport {
        samples,
        seed: Some(seed),
        negative_det_samples: negative,
        ..obstruction
    })
}
