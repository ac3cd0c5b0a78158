mod common;

use common::{ex, plane};
use hamalg_core::courant::random_polynomial;
use hamalg_core::geometry::{
    check_closed, check_poisson, exterior_derivative, gradient, lie_bracket, skew_from_upper, sub, zeros,
    PoissonBivector, PreSymplectic,
};
use hamalg_core::{Chart, Expr, Probe, SamplePlan};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space() -> Chart {
    Chart::cube(&["x", "y", "z"], 1.0).unwrap()
}

fn probe(c: &Chart) -> Probe {
    Probe::new(c, &SamplePlan::default(), 1e-9)
}

fn upper(c: &Chart, entries: &[(usize, usize, &str)]) -> Vec<Vec<Expr>> {
    let mut m = zeros(c.dim());
    for &(i, j, s) in entries {
        m[i][j] = ex(c, s);
    }
    skew_from_upper(&m)
}

#[test]
fn poisson_examples() {
    let c = space();
    let lie = PoissonBivector::new(upper(&c, &[(0, 1, "z"), (1, 2, "x"), (0, 2, "-y")]));
    assert!(check_poisson(&lie, &probe(&c)).unwrap().pass);
    let bad = PoissonBivector::new(upper(&c, &[(0, 1, "z"), (1, 2, "y")]));
    assert!(!check_poisson(&bad, &probe(&c)).unwrap().pass);
}

#[test]
fn closedness_examples() {
    let c = space();
    let exact = PreSymplectic::new(exterior_derivative(&[ex(&c, "y*z"), ex(&c, "x^2"), ex(&c, "sin(x*y)")]));
    assert!(check_closed(&exact, &probe(&c)).unwrap().pass);
    let bad = PreSymplectic::new(upper(&c, &[(0, 1, "z")]));
    assert!(!check_closed(&bad, &probe(&c)).unwrap().pass);
}

#[test]
fn sharp_and_flat_conventions() {
    let c = plane();
    let p = PoissonBivector::new(upper(&c, &[(0, 1, "1")]));
    let dy = vec![Expr::zero(), Expr::one()];
    assert_eq!(p.sharp(&dy)[0].as_num(), Some(1.0));
    let w = PreSymplectic::new(upper(&c, &[(0, 1, "1")]));
    let dx = vec![Expr::one(), Expr::zero()];
    assert_eq!(w.flat(&dx)[1].as_num(), Some(1.0));
    assert_eq!(p.bracket(&ex(&c, "x"), &ex(&c, "y")).as_num(), Some(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn koszul_of_exact_forms(seed in any::<u64>()) {
        let c = space();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = PoissonBivector::new(upper(&c, &[(0, 1, "z"), (1, 2, "x"), (0, 2, "-y")]));
        let (f, g) = (random_polynomial(3, 2, &mut rng), random_polynomial(3, 2, &mut rng));
        let k = p.koszul(&gradient(&f, 3), &gradient(&g, 3));
        let fields = sub(&k, &gradient(&p.bracket(&f, &g), 3));
        prop_assert!(probe(&c).check("koszul", &fields).unwrap().pass);
    }

    #[test]
    fn vector_field_jacobi(seed in any::<u64>()) {
        let c = space();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut field = || (0..3).map(|_| random_polynomial(3, 2, &mut rng)).collect::<Vec<_>>();
        let (u, v, w) = (field(), field(), field());
        let a = lie_bracket(&u, &lie_bracket(&v, &w));
        let b = lie_bracket(&v, &lie_bracket(&w, &u));
        let d = lie_bracket(&w, &lie_bracket(&u, &v));
        let fields: Vec<Expr> = (0..3).map(|i| &a[i] + &b[i] + &d[i]).collect();
        prop_assert!(probe(&c).check("jacobi", &fields).unwrap().pass);
    }

    #[test]
    fn exact_two_forms_are_closed(seed in any::<u64>()) {
        let c = space();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Expr> = (0..3).map(|_| random_polynomial(3, 3, &mut rng)).collect();
        let w = PreSymplectic::new(exterior_derivative(&a));
        prop_assert!(check_closed(&w, &probe(&c)).unwrap().pass);
        let df = exterior_derivative(&gradient(&a[0], 3));
        prop_assert!(df.iter().flatten().all(|e| e.is_zero() || probe(&c).check("dd", std::slice::from_ref(e)).unwrap().pass));
    }
}
