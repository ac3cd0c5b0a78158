mod common;

use common::*;
use hamalg_core::courant::*;
use hamalg_core::geometry::{zeros, PoissonBivector, PreSymplectic};
use hamalg_core::{Chart, Expr, Probe, SamplePlan};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cube(n: usize) -> (Chart, Probe) {
    let names = ["x1", "x2", "x3", "x4"];
    let ch = Chart::cube(&names[..n], 1.0).unwrap();
    let pr = Probe::new(&ch, &SamplePlan::new(0, 16), 1e-9);
    (ch, pr)
}

#[test]
fn untwisted_axioms_hold_in_three_dimensions() {
    let (_, pr) = cube(3);
    let reports = check_courant_axioms(&StandardCourant::new(3), &SectionSamples::random(3, 2, 7), &pr).unwrap();
    for r in reports {
        assert!(r.pass, "{:?}", r);
    }
}

#[test]
fn exact_twist_passes_and_nonclosed_twist_breaks_jacobi() {
    let (ch, pr) = cube(4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = random_two_form(4, 2, &mut rng);
    let h = exterior_derivative_2(&b);
    let samples = SectionSamples::random(4, 2, 3);
    for r in check_courant_axioms(&StandardCourant::twisted(h), &samples, &pr).unwrap() {
        assert!(r.pass, "{:?}", r);
    }
    let mut h = vec![vec![vec![Expr::zero(); 4]; 4]; 4];
    h[0][1][2] = ex(&ch, "x4");
    let reports = check_courant_axioms(&StandardCourant::twisted(h), &samples, &pr).unwrap();
    assert!(!reports[0].pass);
    assert!(reports[0].max_residual >= 1e-3);
    assert!(reports[1..].iter().all(|r| r.pass));
}

#[test]
fn graph_frames() {
    let ch = plane();
    let pr = probe(&ch);
    let e = StandardCourant::new(2);
    let w = PreSymplectic::new(skew2(&ch, "1"));
    for r in check_dirac(&e, &DiracFrame::graph_omega(&w), &pr).unwrap() {
        assert!(r.pass, "{:?}", r);
    }
    let p = PoissonBivector::new(skew2(&ch, "1 + x^2*y"));
    for r in check_dirac(&e, &DiracFrame::graph_pi(&p), &pr).unwrap() {
        assert!(r.pass, "{:?}", r);
    }
}

#[test]
fn non_poisson_graph_is_not_involutive() {
    let (ch, pr) = cube(3);
    let mut m = zeros(3);
    m[0][1] = ex(&ch, "1");
    m[1][2] = ex(&ch, "x2");
    let p = PoissonBivector::new(m);
    let [iso, inv] = check_dirac(&StandardCourant::new(3), &DiracFrame::graph_pi(&p), &pr).unwrap();
    assert!(iso.pass);
    assert!(!inv.pass, "{:?}", inv);
}

#[test]
fn identity_is_a_dirac_morphism() {
    let ch = plane();
    let pr = probe(&ch);
    let p = PoissonBivector::new(skew2(&ch, "1 + x*y"));
    let f = DiracFrame::graph_pi(&p);
    let r = dirac_morphism_check(&ch.coordinates(), &ch, &f, &f, &pr).unwrap();
    assert!(r.pass, "{:?}", r);
    assert_eq!(r.uniqueness, Uniqueness::Unique);
}
