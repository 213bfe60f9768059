use std::collections::{BTreeMap, HashMap};

use homaloidal_core::linalg::{symmetric_eigen, Matrix};
use homaloidal_core::poly::{int, rat, MPoly, QPoint, Rational};
use homaloidal_core::sdr::{
    expand_sdr, power_sum_sdr, product_sdr, product_sdr_any, quadratic_sdr, random_point,
    size_bound, substitution_schedule, verify_sdr, AnyPencil, PowerSumForm, ProductSub, Shifts,
    SimpleSubstitution, SquareSub, SymPencil, DEFAULT_FLOAT_TOL,
};
use homaloidal_core::Error;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> MPoly {
    MPoly::parse(s).unwrap()
}

fn smooth_quadric() -> MPoly {
    p("7/25*x^2 - y^2 - 48/25*x*z - 7/25*z^2")
}

/// The displayed 5x5 matrix for `f`, entry by entry.
fn displayed_quadric_pencil() -> SymPencil<Rational> {
    let forms = [
        [rat(9, 25), rat(-20, 25), rat(12, 25)],
        [rat(12, 25), rat(15, 25), rat(16, 25)],
        [rat(-20, 25), int(0), rat(15, 25)],
    ];
    let constant = Matrix::diagonal(&[int(0), int(1), int(1), int(-1), int(-1)]);
    let mut coeffs = BTreeMap::new();
    for (j, v) in ["x", "y", "z"].iter().enumerate() {
        let mut a = Matrix::zeros(5, 5);
        for (i, f) in forms.iter().enumerate() {
            a[(0, i + 1)] = f[j].clone();
            a[(i + 1, 0)] = f[j].clone();
        }
        coeffs.insert(v.to_string(), a);
    }
    SymPencil::new(constant, coeffs).unwrap()
}

#[test]
fn schedules_replay_to_powers() {
    for d in 1..=64u64 {
        let s = substitution_schedule(d);
        assert_eq!(s.m, (d as f64).log2().floor() as u32 + 1);
        assert!(s.respects_round_limits(), "d={d}");
        assert!(s.rounds.len() <= s.m as usize);
        let rename: HashMap<String, String> = (1..=s.num_vars())
            .map(|j| (format!("u{j}"), "y".into()))
            .collect();
        assert_eq!(s.replay().rename(&rename), p(&format!("y^{d}")), "d={d}");
        if d.is_power_of_two() {
            assert_eq!(s.rounds.len(), s.m as usize - 1);
            assert!(s
                .rounds
                .iter()
                .all(|r| matches!(r[..], [SimpleSubstitution::Square { var: 1 }])));
        }
    }
    assert!(substitution_schedule(1).rounds.is_empty());
}

#[test]
fn displayed_quadric_matrix_is_exact() {
    let m = displayed_quadric_pencil();
    assert_eq!(m.det_poly(), smooth_quadric());
    let e1: QPoint = [
        ("x".into(), int(1)),
        ("y".into(), int(0)),
        ("z".into(), int(0)),
    ]
    .into();
    assert_eq!(m.det_at(&e1).unwrap(), rat(7, 25));
    let r = verify_sdr(
        &AnyPencil::Exact(m),
        &smooth_quadric(),
        50,
        1,
        DEFAULT_FLOAT_TOL,
    )
    .unwrap();
    assert!(r.pass && r.max_deviation == 0.0 && r.symbolic == Some(true));
}

#[test]
fn displayed_decomposition_reproduces_f() {
    let f1 = p("1/25*(9*x - 20*y + 12*z)");
    let f2 = p("1/25*(12*x + 15*y + 16*z)");
    let f3 = p("1/25*(-20*x + 15*z)");
    let sum = &(&f3.pow(2) - &f1.pow(2)) - &f2.pow(2);
    assert_eq!(sum, smooth_quadric());
}

#[test]
fn quadratic_sdr_of_the_smooth_quadric() {
    let s = quadratic_sdr(&smooth_quadric()).unwrap();
    assert_eq!(s.rank, 3);
    assert_eq!(s.pencil.size(), 5);
    assert!(s.corner.is_zero());
    let mut l = s.lambdas.clone();
    l.sort_by(f64::total_cmp);
    for (a, b) in l.iter().zip([-1.0, -1.0, 1.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    // the eigenvalue 1 form is +-(-20x + 15z)/25; the -1 forms span the
    // same plane as the displayed ones
    let i = s.lambdas.iter().position(|&v| v > 0.0).unwrap();
    let w = &s.forms[i];
    let sign = if w[0] < 0.0 { 1.0 } else { -1.0 };
    for (a, b) in w.iter().zip([-0.8, 0.0, 0.6, 0.0]) {
        assert!((sign * a - b).abs() < 1e-12);
    }
    let displayed = [[9.0, -20.0, 12.0], [12.0, 15.0, 16.0]];
    for (j, w) in s.forms.iter().enumerate().filter(|(j, _)| *j != i) {
        assert!(w[3].abs() < 1e-12, "form {j} has a constant");
        let proj: f64 = displayed
            .iter()
            .map(|d| {
                let dot: f64 = d.iter().zip(w).map(|(a, b)| a / 25.0 * b).sum();
                dot * dot
            })
            .sum();
        assert!((proj - 1.0).abs() < 1e-12);
    }
    let r = verify_sdr(
        &AnyPencil::Float(s.pencil.clone()),
        &smooth_quadric(),
        50,
        7,
        DEFAULT_FLOAT_TOL,
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
    assert!(s.pencil.is_symmetric());
}

#[test]
fn quadratic_sdr_matches_eigen_oracle_on_random_quadrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let vars = ["a", "b", "c"];
        let mut q = MPoly::constant(rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
        for (i, u) in vars.iter().enumerate() {
            q = &q + &p(u).scale(&rat(rng.gen_range(-5..=5), 2));
            for v in &vars[i..] {
                q = &q + &(&p(u) * &p(v)).scale(&rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
            }
        }
        let s = quadratic_sdr(&q).unwrap();
        assert_eq!(s.pencil.size(), s.rank + 2);
        assert!(s.rank <= q.support_vars().len() + 1);
        let r = verify_sdr(
            &AnyPencil::Float(s.pencil.clone()),
            &q,
            20,
            3,
            DEFAULT_FLOAT_TOL,
        )
        .unwrap();
        assert!(r.pass, "{q}: {r:?}");
        let pt = random_point(&q.support_vars(), &mut rng);
        let fpt: BTreeMap<String, f64> = pt
            .iter()
            .map(|(k, v)| (k.clone(), homaloidal_core::linalg::rational_to_f64(v)))
            .collect();
        let want = homaloidal_core::linalg::rational_to_f64(&q.eval(&pt).unwrap());
        assert!((s.eval_decomposition(&fpt).unwrap() - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
}

#[test]
fn nonpositive_quadric_plus_constant_has_positive_diagonal() {
    let q = p("-x^2 - 2*y^2 + x*y + 3");
    let s = quadratic_sdr(&q).unwrap();
    assert_eq!(s.corner, int(3));
    assert!(s.lambdas.iter().all(|&l| l < 0.0));
    let c = s.pencil.constant();
    assert!((0..s.pencil.size()).all(|i| c[(i, i)] > 0.0));
}

#[test]
fn bordered_pattern_from_one_square() {
    let lambda = rat(-5, 2);
    let base = SymPencil::new(
        Matrix::zeros(1, 1),
        [(
            "y".to_string(),
            Matrix::diagonal(std::slice::from_ref(&lambda)),
        )]
        .into(),
    )
    .unwrap();
    let e = expand_sdr(
        &base,
        &[SquareSub {
            from: "y".into(),
            to: "u".into(),
        }],
        &[],
        &Shifts::Auto,
    )
    .unwrap();
    assert_eq!(e.size(), 3);
    assert_eq!(e.constant()[(1, 1)], -lambda.recip());
    assert_eq!(e.constant()[(2, 2)], -&lambda);
    assert_eq!(e.entry_poly(0, 1), p("u"));
    assert_eq!(e.det_poly(), p("-5/2*u^2"));
}

#[test]
fn product_substitution_from_a_scalar() {
    let base = SymPencil::<Rational>::diagonal_vars(&["z"]);
    let sub = [ProductSub {
        from: "z".into(),
        left: "v".into(),
        right: "w".into(),
    }];
    let reduced = expand_sdr(&base, &[], &sub, &Shifts::Auto).unwrap();
    assert_eq!(reduced.size(), 4);
    assert_eq!(reduced.det_poly(), p("v*w"));
    let shifts = Shifts::Given {
        squares: vec![],
        products: vec![int(2)],
    };
    let full = expand_sdr(&base, &[], &sub, &shifts).unwrap();
    assert_eq!(full.size(), 6);
    assert_eq!(full.det_poly(), p("v*w"));
    let bad = Shifts::Given {
        squares: vec![],
        products: vec![int(1)],
    };
    assert!(matches!(
        expand_sdr(&base, &[], &sub, &bad),
        Err(Error::BadShift { .. })
    ));
}

#[test]
fn expansion_with_carried_variables() {
    // det [[x, y], [y, 1]] = x - y^2; square x, take the product y -> v w
    let mut coeffs = BTreeMap::new();
    coeffs.insert("x".to_string(), Matrix::diagonal(&[int(1), int(0)]));
    let mut b = Matrix::zeros(2, 2);
    b[(0, 1)] = int(1);
    b[(1, 0)] = int(1);
    coeffs.insert("y".to_string(), b);
    let base = SymPencil::new(Matrix::diagonal(&[int(0), int(1)]), coeffs).unwrap();
    assert_eq!(base.det_poly(), p("x - y^2"));
    let e = expand_sdr(
        &base,
        &[SquareSub {
            from: "x".into(),
            to: "s".into(),
        }],
        &[ProductSub {
            from: "y".into(),
            left: "v".into(),
            right: "w".into(),
        }],
        &Shifts::Auto,
    )
    .unwrap();
    // x's coefficient is singular, y's is invertible: 2 (1 + 2 + 2) + 1
    assert_eq!(e.size(), 11);
    assert!(e.is_symmetric());
    let r = verify_sdr(&AnyPencil::Exact(e), &p("s^2 - v^2*w^2"), 20, 2, 0.0).unwrap();
    assert!(r.pass, "{r:?}");
}

fn random_affine(vars: &[&str], rng: &mut ChaCha8Rng) -> MPoly {
    let mut f = MPoly::constant(rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)));
    for v in vars {
        f = &f + &p(v).scale(&rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
    }
    f
}

fn random_power_sum(d: u32, r: usize, rng: &mut ChaCha8Rng) -> PowerSumForm {
    let terms = (0..r)
        .map(|_| {
            let mut l = rat(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            if l.is_zero() {
                l = int(1);
            }
            (l, random_affine(&["x", "y"], rng))
        })
        .collect();
    PowerSumForm::new(d, terms).unwrap()
}

#[test]
fn power_sum_pipeline_on_small_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (d, r) in [
        (1, 1),
        (1, 3),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
        (4, 1),
        (4, 2),
        (5, 1),
        (6, 1),
        (8, 1),
    ] {
        let form = random_power_sum(d, r, &mut rng);
        let pencil = power_sum_sdr(&form).unwrap();
        assert!(pencil.is_symmetric());
        let bound = size_bound(d as u64, r as u64);
        assert!(
            BigUint::from(pencil.size()) <= *bound.applicable(),
            "d={d} r={r} size={}",
            pencil.size()
        );
        assert!(BigUint::from(pencil.size()) <= bound.general);
        let report =
            verify_sdr(&AnyPencil::Exact(pencil), &form.expand(), 20, d as u64, 0.0).unwrap();
        assert!(report.pass, "d={d} r={r}: {report:?}");
    }
}

#[test]
fn powers_of_two_sizes() {
    // d = 2: the bordered r + 2 matrix; y^4 stays within (2r + 2)^2
    let y = MPoly::var("y");
    let s2 = power_sum_sdr(&PowerSumForm::new(2, vec![(int(1), y.clone())]).unwrap()).unwrap();
    assert_eq!(s2.size(), 3);
    let s4 = power_sum_sdr(&PowerSumForm::new(4, vec![(int(1), y.clone())]).unwrap()).unwrap();
    assert!(s4.size() <= 16);
    assert_eq!(s4.det_poly(), p("y^4"));
    let f = p("x + 2*y - 1");
    let g = p("1/2*x - y + 3");
    let two = PowerSumForm::new(2, vec![(int(1), f.clone()), (int(1), g.clone())]).unwrap();
    let s = power_sum_sdr(&two).unwrap();
    assert_eq!(s.size(), 4);
    assert_eq!(s.det_poly(), &f.pow(2) + &g.pow(2));
}

fn random_pencil(vars: &[&str], size: usize, rng: &mut ChaCha8Rng) -> SymPencil<Rational> {
    let mut sym = || {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            for j in i..size {
                let v = int(rng.gen_range(-3..=3));
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        m
    };
    let constant = sym();
    let coeffs = vars.iter().map(|v| (v.to_string(), sym())).collect();
    SymPencil::new(constant, coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn product_multiplies_determinants(seed in any::<u64>(), ka in 1usize..4, kb in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_pencil(&["x1", "x2"], ka, &mut rng);
        let b = random_pencil(&["y1", "y2"], kb, &mut rng);
        let c = product_sdr(&a, &b).unwrap();
        prop_assert_eq!(c.size(), ka + kb);
        prop_assert!(c.is_symmetric());
        prop_assert_eq!(c.det_poly(), &a.det_poly() * &b.det_poly());
    }
}

#[test]
fn product_of_quadric_representations() {
    let g = p("7/25*a^2 - b^2 - 48/25*a*c - 7/25*c^2");
    let fa = AnyPencil::Float(quadratic_sdr(&smooth_quadric()).unwrap().pencil);
    let ga = AnyPencil::Float(quadratic_sdr(&g).unwrap().pencil);
    let fg = product_sdr_any(&fa, &ga).unwrap();
    assert_eq!(fg.size(), 10);
    let r = verify_sdr(&fg, &(&smooth_quadric() * &g), 30, 4, DEFAULT_FLOAT_TOL).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(matches!(
        product_sdr_any(&fa, &fa),
        Err(Error::VariableCollision(_))
    ));

    let a = AnyPencil::Exact(displayed_quadric_pencil());
    let with_one =
        product_sdr_any(&a, &AnyPencil::Exact(SymPencil::scalar(Rational::one()))).unwrap();
    assert_eq!(with_one.size(), 6);
    assert!(
        verify_sdr(&with_one, &smooth_quadric(), 10, 1, 0.0)
            .unwrap()
            .pass
    );
}

#[test]
fn pencil_json_roundtrip_of_constructions() {
    let s =
        power_sum_sdr(&PowerSumForm::new(3, vec![(rat(-2, 3), p("x - 1/2"))]).unwrap()).unwrap();
    let any = AnyPencil::Exact(s);
    assert_eq!(AnyPencil::from_json(&any.to_json()).unwrap(), any);
    let q = AnyPencil::Float(quadratic_sdr(&smooth_quadric()).unwrap().pencil);
    assert_eq!(AnyPencil::from_json(&q.to_json()).unwrap(), q);
}

#[test]
fn jacobi_eigenvalues_of_the_quadric_matrix() {
    let t = homaloidal_core::sdr::coefficient_matrix(
        &smooth_quadric(),
        &["x".into(), "y".into(), "z".into()],
    )
    .unwrap();
    let e = symmetric_eigen(&t.to_f64());
    assert!(e.converged);
    let want = [-1.0, -1.0, 0.0, 1.0];
    for (a, b) in e.values.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
}
