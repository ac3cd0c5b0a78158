use hamalg_core::expr::{central_difference, Func};
use hamalg_core::{parse, Expr};
use proptest::prelude::*;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["x", "y", "z"];

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Smooth on the cube `[-1, 1]^3`.
fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let pick = rng.next_u64() % if depth == 0 { 2 } else { 9 };
    match pick {
        0 => Expr::var((rng.next_u64() % 3) as usize),
        1 => Expr::num((unit(rng) * 6.0 - 3.0).round() / 2.0),
        2 => random_expr(rng, depth - 1) + random_expr(rng, depth - 1),
        3 => random_expr(rng, depth - 1) - random_expr(rng, depth - 1),
        4 => random_expr(rng, depth - 1) * random_expr(rng, depth - 1),
        5 => random_expr(rng, depth - 1).pow(2),
        6 => {
            let f = [Func::Sin, Func::Cos, Func::Exp][(rng.next_u64() % 3) as usize];
            Expr::call(f, random_expr(rng, depth - 1).scale(0.5))
        }
        7 => random_expr(rng, depth - 1) / (Expr::num(2.0) + random_expr(rng, depth - 1).pow(2)),
        _ => (Expr::num(3.0) + random_expr(rng, depth - 1).sin()).sqrt(),
    }
}

fn point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..3).map(|_| unit(rng) * 1.8 - 0.9).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_matches_finite_difference(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 4);
        let p = point(&mut rng);
        for v in 0..3 {
            let exact = e.diff(v).eval(&p).unwrap();
            let fd = central_difference(&e, v, &p, 1e-5).unwrap();
            prop_assert!(close(exact, fd, 1e-6), "{} d{}: {} vs {}", e.to_string_with(&NAMES), v, exact, fd);
        }
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 3);
        let p = point(&mut rng);
        for i in 0..3 {
            for j in i + 1..3 {
                let a = e.diff(i).diff(j).eval(&p).unwrap();
                let b = e.diff(j).diff(i).eval(&p).unwrap();
                prop_assert!(close(a, b, 1e-10), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn display_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 4);
        let text = e.to_string_with(&NAMES);
        let back = parse(&text, &NAMES).unwrap();
        let p = point(&mut rng);
        prop_assert!(close(e.eval(&p).unwrap(), back.eval(&p).unwrap(), 1e-12), "{}", text);
    }

    #[test]
    fn product_rule(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_expr(&mut rng, 3), random_expr(&mut rng, 3));
        let p = point(&mut rng);
        let lhs = (&f * &g).diff(0).eval(&p).unwrap();
        let rhs = (f.diff(0) * &g + &f * g.diff(0)).eval(&p).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn substitution_composes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 3);
        let args: Vec<Expr> = (0..3).map(|_| random_expr(&mut rng, 2).scale(0.3)).collect();
        let p = point(&mut rng);
        let inner: Vec<f64> = args.iter().map(|a| a.eval(&p).unwrap()).collect();
        let composed = e.substitute(&args).eval(&p).unwrap();
        prop_assert!(close(composed, e.eval(&inner).unwrap(), 1e-12));
    }
}

#[test]
fn precedence_and_errors() {
    let e = parse("-x^2 + 2*y/4", &NAMES).unwrap();
    assert_eq!(e.eval(&[3.0, 2.0, 0.0]).unwrap(), -8.0);
    let err = parse("x + * y", &NAMES).unwrap_err();
    assert!(err.to_string().contains("byte 4"), "{}", err);
    assert!(parse("w", &NAMES).is_err());
    assert!(parse("ln(x)", &NAMES).unwrap().eval(&[-1.0, 0.0, 0.0]).is_err());
}
