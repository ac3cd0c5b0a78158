mod common;

use common::{e3, e6, ex, plane, probe, regauge2};
use hamalg_core::algebroid::{zero_cube, LieAlgebroid};
use hamalg_core::connection::{
    basic_curvature, basic_curvature_consistency, basic_on_one_forms, basic_on_vector_fields, curvature,
    dual_covariant_derivative, flatten4, torsion, Connection,
};
use hamalg_core::courant::random_polynomial;
use hamalg_core::geometry::{apply, pair};
use hamalg_core::{Chart, Expr};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_cube(r: usize, s: usize, t: usize, deg: u32, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Vec<Expr>>> {
    let mut c = zero_cube(r, s, t);
    for plane in c.iter_mut() {
        for line in plane.iter_mut() {
            for e in line.iter_mut() {
                *e = random_polynomial(n, deg, rng);
            }
        }
    }
    c
}

/// Arbitrary anchor, structure functions and connection; no axioms hold.
fn random_data(rng: &mut ChaCha8Rng, r: usize, chart: &Chart) -> (LieAlgebroid, Connection) {
    let n = chart.dim();
    let rho = (0..r).map(|_| (0..n).map(|_| random_polynomial(n, 2, rng)).collect()).collect();
    let c = random_cube(r, r, r, 1, n, rng);
    let alg = LieAlgebroid::new(chart.clone(), rho, c).unwrap();
    (alg, Connection { omega: random_cube(r, r, n, 1, n, rng) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn curvature_forms_agree_on_arbitrary_data(seed in any::<u64>(), r in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = plane();
        let (alg, conn) = random_data(&mut rng, r, &chart);
        prop_assert!(probe(&chart).check("forms", &basic_curvature_consistency(&alg, &conn)).unwrap().pass);
    }

    #[test]
    fn basic_connections_are_dual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = plane();
        let (alg, conn) = random_data(&mut rng, 2, &chart);
        let e: Vec<Expr> = (0..2).map(|_| random_polynomial(2, 2, &mut rng)).collect();
        let v: Vec<Expr> = (0..2).map(|_| random_polynomial(2, 2, &mut rng)).collect();
        let a: Vec<Expr> = (0..2).map(|_| random_polynomial(2, 2, &mut rng)).collect();
        let lhs = pair(&basic_on_vector_fields(&alg, &conn, &e, &v), &a) + pair(&v, &basic_on_one_forms(&alg, &conn, &e, &a));
        let rhs = apply(&alg.anchor(&e), &pair(&v, &a));
        prop_assert!(probe(&chart).check("dual", &[lhs - rhs]).unwrap().pass);
    }

    #[test]
    fn covariant_derivatives_are_dual(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = plane();
        let (_, conn) = random_data(&mut rng, 3, &chart);
        let e: Vec<Expr> = (0..3).map(|_| random_polynomial(2, 2, &mut rng)).collect();
        let mu: Vec<Expr> = (0..3).map(|_| random_polynomial(2, 2, &mut rng)).collect();
        let ne = conn.covariant_section(&e, 2);
        let nm = dual_covariant_derivative(&conn, &mu, 2);
        let fields: Vec<Expr> = (0..2).map(|j| pair(&ne[j], &mu) + pair(&e, &nm[j]) - pair(&e, &mu).diff(j)).collect();
        prop_assert!(probe(&chart).check("dual", &fields).unwrap().pass);
    }
}

#[test]
fn trivial_connection_torsion_is_minus_structure() {
    let alg = e3(1.0);
    let t = torsion(&alg, &Connection::trivial(2, 2));
    assert_eq!(t[0][1][0].as_num(), Some(-1.0));
    assert_eq!(t[1][0][0].as_num(), Some(1.0));
}

#[test]
fn gauge_connections_are_flat_with_vanishing_basic_curvature() {
    let f = e6();
    let c = f.alg.chart().clone();
    let g = [[ex(&c, "1 + x^2"), ex(&c, "y")], [ex(&c, "0"), ex(&c, "1")]];
    let (alg, conn, _) = regauge2(&f.alg, &f.mu, g);
    assert!(!conn.is_trivial());
    let pr = probe(&c);
    assert!(pr.check("flat", &flatten4(&curvature(&conn, 2))).unwrap().pass);
    assert!(pr.check("basic", &flatten4(&basic_curvature(&alg, &conn))).unwrap().pass);
}

#[test]
fn connection_shape_is_checked() {
    assert!(Connection::new(zero_cube(2, 2, 3), 2, 3).is_ok());
    assert!(Connection::new(zero_cube(2, 2, 2), 2, 3).is_err());
    let c = plane();
    let mut w = zero_cube(1, 1, 2);
    w[0][0][0] = ex(&c, "x");
    let r = curvature(&Connection { omega: w }, 2);
    assert!(r[0][0][0][1].eval(&[0.3, 0.1]).unwrap() == 0.0);
}
