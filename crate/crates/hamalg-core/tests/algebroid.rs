mod common;

use common::{e2, e3, e4, e5, e6, ex, plane, probe, row};
use hamalg_core::algebroid::{zero_cube, AlgebroidError, AltForm, LieAlgebroid};
use hamalg_core::courant::random_polynomial;
use hamalg_core::geometry::{apply, lie_bracket, skew_from_upper, sub, zeros, PoissonBivector};
use hamalg_core::{Chart, Expr};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lie_poisson() -> LieAlgebroid {
    let c = Chart::cube(&["x", "y", "z"], 1.0).unwrap();
    let mut m = zeros(3);
    m[0][1] = ex(&c, "z");
    m[1][2] = ex(&c, "x");
    m[0][2] = ex(&c, "-y");
    LieAlgebroid::cotangent_unchecked(c, &PoissonBivector::new(skew_from_upper(&m)))
}

fn valid() -> Vec<LieAlgebroid> {
    vec![e2().alg, e3(1.0), e4(), e5().alg, e6().alg, lie_poisson()]
}

fn section(alg: &LieAlgebroid, rng: &mut ChaCha8Rng) -> Vec<Expr> {
    (0..alg.rank()).map(|_| random_polynomial(alg.dim(), 2, rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alg in valid() {
            for degree in 0..alg.rank() {
                let eta = AltForm::from_fn(alg.rank(), degree, |_| random_polynomial(alg.dim(), 2, &mut rng));
                let dd = alg.differential(&alg.differential(&eta));
                prop_assert!(probe(alg.chart()).check("dd", dd.coefficients()).unwrap().pass);
            }
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alg in valid() {
            let (e, f) = (section(&alg, &mut rng), section(&alg, &mut rng));
            let g = random_polynomial(alg.dim(), 2, &mut rng);
            let gf: Vec<Expr> = f.iter().map(|x| &g * x).collect();
            let lhs = alg.bracket(&e, &gf);
            let re = alg.anchor(&e);
            let rhs: Vec<Expr> =
                alg.bracket(&e, &f).iter().zip(&f).map(|(b, x)| &g * b + apply(&re, &g) * x).collect();
            prop_assert!(probe(alg.chart()).check("leibniz", &sub(&lhs, &rhs)).unwrap().pass);
        }
    }

    #[test]
    fn anchor_preserves_brackets(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for alg in valid() {
            let (e, f) = (section(&alg, &mut rng), section(&alg, &mut rng));
            let lhs = alg.anchor(&alg.bracket(&e, &f));
            let rhs = lie_bracket(&alg.anchor(&e), &alg.anchor(&f));
            prop_assert!(probe(alg.chart()).check("anchor", &sub(&lhs, &rhs)).unwrap().pass);
            let anti: Vec<Expr> = alg.bracket(&e, &f).iter().zip(alg.bracket(&f, &e)).map(|(a, b)| a + b).collect();
            prop_assert!(probe(alg.chart()).check("antisymmetry", &anti).unwrap().pass);
        }
    }
}

#[test]
fn axioms_on_examples() {
    for alg in valid() {
        assert!(alg.check_axioms(&probe(alg.chart())).unwrap().iter().all(|r| r.pass));
    }
    let [anchor, jacobi] = e3(2.0).check_axioms(&probe(&plane())).unwrap();
    assert!(!anchor.pass && jacobi.pass);
}

#[test]
fn differential_detects_broken_anchor_identity() {
    let alg = e3(2.0);
    let f = AltForm::function(2, ex(alg.chart(), "x^2"));
    let dd = alg.differential(&alg.differential(&f));
    assert!(!probe(alg.chart()).check("dd", dd.coefficients()).unwrap().pass);
}

#[test]
fn constructors_validate() {
    let c = plane();
    let bad = LieAlgebroid::new(c.clone(), vec![row(&c, &["1"])], zero_cube(1, 1, 1));
    assert!(matches!(bad, Err(AlgebroidError::Shape(_))));
    let mut cube = zero_cube(2, 2, 2);
    cube[0][1][0] = ex(&c, "x");
    let nonconst = LieAlgebroid::action(c.clone(), vec![row(&c, &["1", "0"]), row(&c, &["x", "0"])], cube, &probe(&c));
    assert!(matches!(nonconst, Err(AlgebroidError::NonConstantStructure)));
    let mut cube = zero_cube(2, 2, 2);
    cube[0][1][0] = Expr::num(2.0);
    let broken = LieAlgebroid::action(c.clone(), vec![row(&c, &["1", "0"]), row(&c, &["x", "0"])], cube, &probe(&c));
    assert!(matches!(broken, Err(AlgebroidError::Precondition(_))));

    let c3 = Chart::cube(&["x", "y", "z"], 1.0).unwrap();
    let mut m = zeros(3);
    m[0][1] = ex(&c3, "z");
    m[1][2] = ex(&c3, "y");
    let not_poisson = PoissonBivector::new(skew_from_upper(&m));
    assert!(LieAlgebroid::cotangent(c3.clone(), &not_poisson, &probe(&c3)).is_err());
}

#[test]
fn tangent_bracket_is_the_lie_bracket() {
    let c = plane();
    let tm = LieAlgebroid::tangent(c.clone());
    let (u, v) = (row(&c, &["y^2", "x"]), row(&c, &["sin(x)", "x*y"]));
    let fields = sub(&tm.bracket(&u, &v), &lie_bracket(&u, &v));
    assert!(probe(&c).check("tm", &fields).unwrap().pass);
}
