use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::SymPencil;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{int, rat, MPoly, Rational};

/// Default cap on the size of an expanded pencil.
pub const DEFAULT_SIZE_LIMIT: usize = 4096;

/// `from -> to^2`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareSub {
    pub from: String,
    pub to: String,
}

/// `from -> left * right`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSub {
    pub from: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shifts {
    /// Zero when the coefficient is invertible, otherwise the first of
    /// `1, 2, 3, ...` that is not one of its eigenvalues.
    Auto,
    /// One shift per square and per product substitution. A zero shift
    /// drops the extra blocks and needs an invertible coefficient.
    Given {
        squares: Vec<Rational>,
        products: Vec<Rational>,
    },
}

/// A diagonal block of `M~` together with its coupling to the top-left
/// block: the off-diagonal block is `sum c * var * I`.
struct Block {
    diag: Matrix<Rational>,
    det: Rational,
    coupling: Vec<(String, Rational)>,
}

fn shifted(b: &Matrix<Rational>, shift: &Rational) -> Matrix<Rational> {
    b.add_matrix(&Matrix::<Rational>::identity(b.rows()).scaled(&-shift))
}

fn pick_shift(
    var: &str,
    b: &Matrix<Rational>,
    given: Option<&Rational>,
) -> Result<(Rational, Matrix<Rational>)> {
    let bad = |s: &Rational| Error::BadShift {
        var: var.to_string(),
        shift: s.to_string(),
    };
    match given {
        Some(s) => {
            let inv = shifted(b, s).inverse().ok_or_else(|| bad(s))?;
            Ok((s.clone(), inv))
        }
        None => {
            if let Some(inv) = b.inverse() {
                return Ok((Rational::zero(), inv));
            }
            // at most k eigenvalues, so one of 1..=k+1 works
            for s in 1..=b.rows() as i64 + 1 {
                if let Some(inv) = shifted(b, &int(s)).inverse() {
                    return Ok((int(s), inv));
                }
            }
            unreachable!("a k x k matrix has at most k eigenvalues")
        }
    }
}

fn scalar_block(k: usize, c: &Rational) -> Matrix<Rational> {
    Matrix::identity(k).scaled(c)
}

/// The blocks contributed by one square substitution.
fn square_blocks(
    sub: &SquareSub,
    b: &Matrix<Rational>,
    shift: Option<&Rational>,
) -> Result<Vec<Block>> {
    let k = b.rows();
    let (lambda, inv) = pick_shift(&sub.from, b, shift)?;
    let d = inv.scaled(&int(-1));
    let mut out = vec![Block {
        det: d.det(),
        diag: d,
        coupling: vec![(sub.to.clone(), int(1))],
    }];
    if !lambda.is_zero() {
        let c = -lambda.recip();
        out.push(Block {
            diag: scalar_block(k, &c),
            det: c.pow(k as i32),
            coupling: vec![(sub.to.clone(), int(1))],
        });
    }
    Ok(out)
}

/// The blocks contributed by one product substitution, in the order
/// `-(C - g)^-1, (C - g)^-1, -1/g, 1/g` with couplings alternating between
/// `(v + w) / 2` and `(v - w) / 2`.
fn product_blocks(
    sub: &ProductSub,
    c: &Matrix<Rational>,
    shift: Option<&Rational>,
) -> Result<Vec<Block>> {
    let k = c.rows();
    let (gamma, inv) = pick_shift(&sub.from, c, shift)?;
    let half = rat(1, 2);
    let plus = vec![
        (sub.left.clone(), half.clone()),
        (sub.right.clone(), half.clone()),
    ];
    let minus = vec![(sub.left.clone(), half.clone()), (sub.right.clone(), -half)];
    let neg = inv.scaled(&int(-1));
    let mut out = vec![
        Block {
            det: neg.det(),
            diag: neg,
            coupling: plus.clone(),
        },
        Block {
            det: inv.det(),
            diag: inv,
            coupling: minus.clone(),
        },
    ];
    if !gamma.is_zero() {
        let g = gamma.recip();
        out.push(Block {
            diag: scalar_block(k, &-&g),
            det: (-&g).pow(k as i32),
            coupling: plus,
        });
        out.push(Block {
            diag: scalar_block(k, &g),
            det: g.pow(k as i32),
            coupling: minus,
        });
    }
    Ok(out)
}

fn check_names(
    base: &SymPencil<Rational>,
    squares: &[SquareSub],
    products: &[ProductSub],
) -> Result<()> {
    let mut from = BTreeSet::new();
    for f in squares
        .iter()
        .map(|s| &s.from)
        .chain(products.iter().map(|p| &p.from))
    {
        if !from.insert(f.clone()) {
            return Err(Error::DomainError(format!(
                "variable `{f}` is substituted twice"
            )));
        }
    }
    let carried: BTreeSet<String> = base
        .vars()
        .into_iter()
        .filter(|v| !from.contains(v))
        .collect();
    for p in products {
        if p.left == p.right {
            return Err(Error::DomainError(format!(
                "product substitution `{} -> {}^2` is a square",
                p.from, p.left
            )));
        }
    }
    let new = squares
        .iter()
        .map(|s| &s.to)
        .chain(products.iter().flat_map(|p| [&p.left, &p.right]));
    for v in new {
        if carried.contains(v) {
            return Err(Error::VariableCollision(v.clone()));
        }
    }
    Ok(())
}

/// Pencil whose determinant is the base determinant after the square and
/// product substitutions, built as
///
/// ```text
/// [ A0 + sum x A   X^T      Y^T      0          ]
/// [ X              diag D1  0        0          ]
/// [ Y              0        diag D2  0          ]
/// [ 0              0        0        1/det(M~)  ]
/// ```
///
/// so that the Schur complement of `M~ = diag(D1, D2)` is the substituted
/// base pencil.
pub fn expand_sdr(
    base: &SymPencil<Rational>,
    squares: &[SquareSub],
    products: &[ProductSub],
    shifts: &Shifts,
) -> Result<SymPencil<Rational>> {
    expand_sdr_limited(base, squares, products, shifts, DEFAULT_SIZE_LIMIT)
}

pub fn expand_sdr_limited(
    base: &SymPencil<Rational>,
    squares: &[SquareSub],
    products: &[ProductSub],
    shifts: &Shifts,
    size_limit: usize,
) -> Result<SymPencil<Rational>> {
    check_names(base, squares, products)?;
    let (sq_shifts, pr_shifts) = match shifts {
        Shifts::Auto => (None, None),
        Shifts::Given {
            squares: s,
            products: p,
        } => {
            if s.len() != squares.len() || p.len() != products.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} square and {} product shifts for {} squares and {} products",
                    s.len(),
                    p.len(),
                    squares.len(),
                    products.len()
                )));
            }
            (Some(s), Some(p))
        }
    };

    let k = base.size();
    let zero = Matrix::zeros(k, k);
    let coeff = |v: &str| base.coeff(v).unwrap_or(&zero);

    // block counts are known before any inversion, so check the size first
    let count =
        |zero_shift: bool, full: usize, reduced: usize| if zero_shift { reduced } else { full };
    let mut nblocks = 0;
    for (i, s) in squares.iter().enumerate() {
        let z = match sq_shifts {
            Some(v) => v[i].is_zero(),
            None => coeff(&s.from).is_invertible(),
        };
        nblocks += count(z, 2, 1);
    }
    for (i, p) in products.iter().enumerate() {
        let z = match pr_shifts {
            Some(v) => v[i].is_zero(),
            None => coeff(&p.from).is_invertible(),
        };
        nblocks += count(z, 4, 2);
    }
    let size = k * (1 + nblocks) + 1;
    if size > size_limit {
        return Err(Error::SizeOverflow {
            size,
            limit: size_limit,
        });
    }

    let mut blocks = Vec::with_capacity(nblocks);
    for (i, s) in squares.iter().enumerate() {
        blocks.extend(square_blocks(s, coeff(&s.from), sq_shifts.map(|v| &v[i]))?);
    }
    for (i, p) in products.iter().enumerate() {
        blocks.extend(product_blocks(p, coeff(&p.from), pr_shifts.map(|v| &v[i]))?);
    }
    debug_assert_eq!(blocks.len(), nblocks);

    let substituted: BTreeSet<&str> = squares
        .iter()
        .map(|s| s.from.as_str())
        .chain(products.iter().map(|p| p.from.as_str()))
        .collect();

    let mut constant = Matrix::zeros(size, size);
    let mut coeffs: BTreeMap<String, Matrix<Rational>> = BTreeMap::new();
    let place = |m: &mut Matrix<Rational>, src: &Matrix<Rational>, off: usize| {
        for i in 0..k {
            for j in 0..k {
                m[(off + i, off + j)] = src[(i, j)].clone();
            }
        }
    };
    place(&mut constant, base.constant(), 0);
    for (v, a) in base.coeffs() {
        if !substituted.contains(v.as_str()) {
            let mut m = Matrix::zeros(size, size);
            place(&mut m, a, 0);
            coeffs.insert(v.clone(), m);
        }
    }

    let mut det_tilde = Rational::one();
    for (b, block) in blocks.iter().enumerate() {
        let off = k * (b + 1);
        place(&mut constant, &block.diag, off);
        det_tilde *= &block.det;
        for (v, c) in &block.coupling {
            let m = coeffs
                .entry(v.clone())
                .or_insert_with(|| Matrix::zeros(size, size));
            for i in 0..k {
                m[(off + i, i)] = &m[(off + i, i)] + c;
                m[(i, off + i)] = &m[(i, off + i)] + c;
            }
        }
    }
    constant[(size - 1, size - 1)] = det_tilde.recip();
    coeffs.retain(|_, m| m.data().iter().any(|x| !x.is_zero()));
    Ok(SymPencil::from_parts_unchecked(size, constant, coeffs))
}

/// Replaces variables by affine polynomials. Variables without an image
/// are kept.
pub fn substitute_affine(
    p: &SymPencil<Rational>,
    map: &BTreeMap<String, MPoly>,
) -> Result<SymPencil<Rational>> {
    let size = p.size();
    let mut constant = p.constant().clone();
    let mut coeffs: BTreeMap<String, Matrix<Rational>> = BTreeMap::new();
    let add = |coeffs: &mut BTreeMap<String, Matrix<Rational>>,
               v: &str,
               a: &Matrix<Rational>,
               c: &Rational| {
        let e = coeffs
            .entry(v.to_string())
            .or_insert_with(|| Matrix::zeros(size, size));
        *e = e.add_matrix(&a.scaled(c));
    };
    for (v, a) in p.coeffs() {
        match map.get(v) {
            None => add(&mut coeffs, v, a, &int(1)),
            Some(f) => {
                if f.total_degree().is_some_and(|d| d > 1) {
                    return Err(Error::DomainError(format!(
                        "image of `{v}` is not affine: {f}"
                    )));
                }
                for (e, c) in f.terms() {
                    match e.iter().position(|&x| x > 0) {
                        None => constant = constant.add_matrix(&a.scaled(c)),
                        Some(i) => add(&mut coeffs, &f.vars()[i], a, c),
                    }
                }
            }
        }
    }
    SymPencil::new(constant, coeffs)
}
