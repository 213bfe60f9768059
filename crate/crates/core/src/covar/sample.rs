use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Generator, SigmaRing};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::mldeg::spanning_tree_pencil;
use crate::poly::{int, MPoly, QPoint, Rational};
use crate::sdr::SymPencil;

/// Draws before giving up on an invertible Laplacian minor.
pub const MAX_SAMPLE_ATTEMPTS: usize = 100;
/// Edge weights are drawn uniformly from `1..=WEIGHT_MAX`.
pub const WEIGHT_MAX: i64 = 1000;

/// A point of `M(G, k)^{-1}`: edge weights and the exact inverse of the
/// Laplacian minor they define.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSample {
    pub x: QPoint,
    pub sigma: Matrix<Rational>,
    pub ring: SigmaRing,
}

impl ModelSample {
    pub fn point(&self) -> QPoint {
        self.ring.point(&self.sigma)
    }
}

fn draw(
    pencil: &SymPencil<Rational>,
    ring: &SigmaRing,
    vars: &[String],
    rng: &mut ChaCha8Rng,
) -> Result<ModelSample> {
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let x: QPoint = vars
            .iter()
            .map(|v| (v.clone(), int(rng.gen_range(1..=WEIGHT_MAX))))
            .collect();
        if let Some(sigma) = pencil.eval(&x)?.inverse() {
            return Ok(ModelSample {
                x,
                sigma,
                ring: ring.clone(),
            });
        }
    }
    Err(Error::SingularAfterRetries(MAX_SAMPLE_ATTEMPTS))
}

pub fn sample_model_point(g: &Graph, k: usize, seed: u64) -> Result<ModelSample> {
    let pencil = spanning_tree_pencil(g, k)?;
    let ring = SigmaRing::new(g, k)?;
    draw(
        &pencil,
        &ring,
        &g.edge_vars(),
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

/// `count` samples; sample `i` uses stream `i` of the generator seeded with
/// `seed`, so each sample is reproducible on its own.
pub fn sample_model_points(
    g: &Graph,
    k: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ModelSample>> {
    let pencil = spanning_tree_pencil(g, k)?;
    let ring = SigmaRing::new(g, k)?;
    let vars = g.edge_vars();
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            draw(&pencil, &ring, &vars, &mut rng)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub poly: usize,
    pub sample: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingReport {
    pub polys: usize,
    pub samples: usize,
    /// Largest `|value|` seen, as an exact rational string.
    pub max_abs: String,
    pub all_zero: bool,
    pub violations: Vec<Violation>,
    /// What a passing report does and does not establish.
    pub scope: &'static str,
}

/// Evaluates every polynomial at every sample exactly.
pub fn verify_vanishing(polys: &[MPoly], samples: &[ModelSample]) -> Result<VanishingReport> {
    let mut max_abs = Rational::zero();
    let mut violations = Vec::new();
    for (si, s) in samples.iter().enumerate() {
        let pt = s.point();
        for (pi, p) in polys.iter().enumerate() {
            let v = p.eval(&pt)?;
            if !v.is_zero() {
                if v.abs() > max_abs {
                    max_abs = v.abs();
                }
                violations.push(Violation {
                    poly: pi,
                    sample: si,
                    value: v.to_string(),
                });
            }
        }
    }
    Ok(VanishingReport {
        polys: polys.len(),
        samples: samples.len(),
        max_abs: max_abs.to_string(),
        all_zero: violations.is_empty(),
        violations,
        scope: "vanishing on sampled model points (containment in the vanishing ideal); saturation not computed",
    })
}

pub fn generator_polys(gens: &[Generator]) -> Vec<MPoly> {
    gens.iter().map(|g| g.poly.clone()).collect()
}
