#![allow(dead_code)]

use hamalg_core::algebroid::{zero_cube, Cube, LieAlgebroid};
use hamalg_core::connection::Connection;
use hamalg_core::geometry::{zeros, Matrix, PoissonBivector, PreSymplectic};
use hamalg_core::{Chart, Expr, Probe, SamplePlan};

pub fn plane() -> Chart {
    Chart::cube(&["x", "y"], 1.0).unwrap()
}

pub fn probe(chart: &Chart) -> Probe {
    Probe::new(chart, &SamplePlan::default(), 1e-9)
}

pub fn ex(chart: &Chart, s: &str) -> Expr {
    chart.parse(s).unwrap()
}

pub fn row(chart: &Chart, items: &[&str]) -> Vec<Expr> {
    items.iter().map(|s| ex(chart, s)).collect()
}

pub fn skew2(chart: &Chart, upper: &str) -> Matrix {
    let mut m = zeros(2);
    m[0][1] = ex(chart, upper);
    m
}

pub fn structure(r: usize, entries: &[(usize, usize, usize, Expr)]) -> Cube {
    let mut c = zero_cube(r, r, r);
    for (a, b, k, e) in entries {
        c[*a][*b][*k] = e.clone();
    }
    c
}

pub struct Symplectic {
    pub alg: LieAlgebroid,
    pub conn: Connection,
    pub w: PreSymplectic,
    pub mu: Vec<Expr>,
}

pub struct Poisson {
    pub alg: LieAlgebroid,
    pub conn: Connection,
    pub p: PoissonBivector,
    pub mu: Vec<Expr>,
}

/// Rotation action on the plane with the standard symplectic form.
pub fn e1() -> Symplectic {
    let ch = plane();
    let alg = LieAlgebroid::new(ch.clone(), vec![row(&ch, &["-y", "x"])], zero_cube(1, 1, 1)).unwrap();
    Symplectic {
        conn: Connection::trivial(1, 2),
        w: PreSymplectic::new(skew2(&ch, "1")),
        mu: row(&ch, &["(x^2 + y^2)/2"]),
        alg,
    }
}

/// Rotation action on the plane with the standard Poisson bivector.
pub fn e2() -> Poisson {
    let ch = plane();
    let alg = LieAlgebroid::new(ch.clone(), vec![row(&ch, &["y", "-x"])], zero_cube(1, 1, 1)).unwrap();
    Poisson {
        conn: Connection::trivial(1, 2),
        p: PoissonBivector::new(skew2(&ch, "1")),
        mu: row(&ch, &["(x^2 + y^2)/2"]),
        alg,
    }
}

/// Affine algebra acting on the line, pulled back to the plane.
pub fn e3(c112: f64) -> LieAlgebroid {
    let ch = plane();
    let rho = vec![row(&ch, &["1", "0"]), row(&ch, &["x", "0"])];
    LieAlgebroid::new(ch, rho, structure(2, &[(0, 1, 0, Expr::num(c112))])).unwrap()
}

/// Cotangent algebroid of `pi^{12} = x`.
pub fn e4() -> LieAlgebroid {
    let ch = plane();
    LieAlgebroid::cotangent_unchecked(ch.clone(), &PoissonBivector::new(skew2(&ch, "x")))
}

/// Nonabelian affine action with the standard symplectic form.
pub fn e5() -> Symplectic {
    let ch = plane();
    let rho = vec![row(&ch, &["0", "1"]), row(&ch, &["-x", "y"])];
    let alg = LieAlgebroid::new(ch.clone(), rho, structure(2, &[(0, 1, 0, Expr::one())])).unwrap();
    Symplectic {
        conn: Connection::trivial(2, 2),
        w: PreSymplectic::new(skew2(&ch, "1")),
        mu: row(&ch, &["x", "x*y"]),
        alg,
    }
}

/// Rank-two abelian Poisson example.
pub fn e6() -> Poisson {
    let ch = plane();
    let rho = vec![row(&ch, &["0", "-1"]), row(&ch, &["0", "-x"])];
    let alg = LieAlgebroid::new(ch.clone(), rho, zero_cube(2, 2, 2)).unwrap();
    Poisson {
        conn: Connection::trivial(2, 2),
        p: PoissonBivector::new(skew2(&ch, "1")),
        mu: row(&ch, &["x", "x^2/2"]),
        alg,
    }
}

/// Change of frame `e'_a = g^b_a e_b` for a 2x2 `g[b][a]`, starting from a
/// trivial connection. Every tensorial condition is preserved.
pub fn regauge2(alg: &LieAlgebroid, mu: &[Expr], g: [[Expr; 2]; 2]) -> (LieAlgebroid, Connection, Vec<Expr>) {
    let n = alg.dim();
    let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    let inv = [[&g[1][1] / &det, -&g[0][1] / &det], [-&g[1][0] / &det, &g[0][0] / &det]];
    let frame = |a: usize| -> Vec<Expr> { vec![g[0][a].clone(), g[1][a].clone()] };
    let rho: Vec<Vec<Expr>> = (0..2).map(|a| alg.anchor(&frame(a))).collect();
    let mut c = zero_cube(2, 2, 2);
    for a in 0..2 {
        for b in 0..2 {
            let br = alg.bracket(&frame(a), &frame(b));
            for k in 0..2 {
                c[a][b][k] = &inv[k][0] * &br[0] + &inv[k][1] * &br[1];
            }
        }
    }
    let mut w = zero_cube(2, 2, n);
    for a in 0..2 {
        for k in 0..2 {
            for i in 0..n {
                w[a][k][i] = &inv[k][0] * g[0][a].diff(i) + &inv[k][1] * g[1][a].diff(i);
            }
        }
    }
    let mu2 = (0..2).map(|a| &g[0][a] * &mu[0] + &g[1][a] * &mu[1]).collect();
    let alg2 = LieAlgebroid::new(alg.chart().clone(), rho, c).unwrap();
    (alg2, Connection { omega: w }, mu2)
}
