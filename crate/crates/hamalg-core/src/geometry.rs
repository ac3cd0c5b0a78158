//! Pre-symplectic forms, Poisson bivectors and coordinate calculus on `M`.
//!
//! Conventions: `(pi# a)^i = pi^{ij} a_j`, `(w_flat v)_j = v^i w_{ij}`,
//! `pi(a, b) = pi^{ij} a_i b_j`, `w(u, v) = u^i v^j w_{ij}`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::expr::{EvalError, Expr};
use crate::manifold::{CheckError, Probe, ResidualReport};

pub type VectorField = Vec<Expr>;
pub type OneForm = Vec<Expr>;
pub type Matrix = Vec<Vec<Expr>>;

/// Square matrix of zeros.
pub fn zeros(n: usize) -> Matrix {
    vec![vec![Expr::zero(); n]; n]
}

/// Antisymmetric matrix built from its strict upper triangle.
pub fn skew_from_upper(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            out[i][j] = m[i][j].clone();
            out[j][i] = -&m[i][j];
        }
    }
    out
}

pub fn gradient(f: &Expr, n: usize) -> OneForm {
    (0..n).map(|i| f.diff(i)).collect()
}

/// `X(f) = X^i d_i f`.
pub fn apply(x: &[Expr], f: &Expr) -> Expr {
    x.iter().enumerate().map(|(i, xi)| xi * f.diff(i)).sum()
}

pub fn pair(v: &[Expr], a: &[Expr]) -> Expr {
    v.iter().zip(a).map(|(x, y)| x * y).sum()
}

pub fn add(u: &[Expr], v: &[Expr]) -> Vec<Expr> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[Expr], v: &[Expr]) -> Vec<Expr> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale(f: &Expr, v: &[Expr]) -> Vec<Expr> {
    v.iter().map(|x| f * x).collect()
}

/// Vector field bracket `[u, v]^i = u^j d_j v^i - v^j d_j u^i`.
pub fn lie_bracket(u: &[Expr], v: &[Expr]) -> VectorField {
    (0..u.len()).map(|i| apply(u, &v[i]) - apply(v, &u[i])).collect()
}

/// `(L_X a)_j = X^i d_i a_j + a_i d_j X^i`.
pub fn lie_derivative_form(x: &[Expr], a: &[Expr]) -> OneForm {
    let n = x.len();
    (0..n).map(|j| apply(x, &a[j]) + (0..n).map(|i| &a[i] * x[i].diff(j)).sum::<Expr>()).collect()
}

/// `(da)_{ij} = d_i a_j - d_j a_i`.
pub fn exterior_derivative(a: &[Expr]) -> Matrix {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[i][j] = a[j].diff(i) - a[i].diff(j);
            }
        }
    }
    out
}

/// `(i_v w)_j = v^i w_{ij}`.
pub fn contract_first(v: &[Expr], w: &Matrix) -> OneForm {
    let n = v.len();
    (0..n).map(|j| (0..n).map(|i| &v[i] * &w[i][j]).sum()).collect()
}

pub fn bilinear(w: &Matrix, u: &[Expr], v: &[Expr]) -> Expr {
    let n = u.len();
    let mut acc = Expr::zero();
    for i in 0..n {
        for j in 0..n {
            acc = acc + &u[i] * &v[j] * &w[i][j];
        }
    }
    acc
}

/// Closed-or-not antisymmetric 2-form `w_{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreSymplectic {
    pub omega: Matrix,
}

impl PreSymplectic {
    /// Canonicalise from the strict upper triangle.
    pub fn new(omega: Matrix) -> PreSymplectic {
        PreSymplectic { omega: skew_from_upper(&omega) }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn scaled(&self, f: &Expr) -> PreSymplectic {
        PreSymplectic { omega: self.omega.iter().map(|row| row.iter().map(|w| f * w).collect()).collect() }
    }

    /// `d_i w_{jk} + d_j w_{ki} + d_k w_{ij}` over `i < j < k`.
    pub fn closed_residuals(&self) -> Vec<Expr> {
        let w = &self.omega;
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push(w[j][k].diff(i) + w[k][i].diff(j) + w[i][j].diff(k));
                }
            }
        }
        out
    }

    pub fn flat(&self, v: &[Expr]) -> OneForm {
        contract_first(v, &self.omega)
    }

    pub fn eval(&self, u: &[Expr], v: &[Expr]) -> Expr {
        bilinear(&self.omega, u, v)
    }
}

pub fn check_closed(w: &PreSymplectic, probe: &Probe) -> Result<ResidualReport, CheckError> {
    probe.check("closedness", &w.closed_residuals())
}

/// Antisymmetric bivector `pi^{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonBivector {
    pub pi: Matrix,
}

impl PoissonBivector {
    pub fn new(pi: Matrix) -> PoissonBivector {
        PoissonBivector { pi: skew_from_upper(&pi) }
    }

    pub fn dim(&self) -> usize {
        self.pi.len()
    }

    pub fn scaled(&self, f: &Expr) -> PoissonBivector {
        PoissonBivector { pi: self.pi.iter().map(|row| row.iter().map(|w| f * w).collect()).collect() }
    }

    /// `pi^{il} d_l pi^{jk} + cyclic(ijk)` over `i < j < k`.
    pub fn poisson_residuals(&self) -> Vec<Expr> {
        let p = &self.pi;
        let n = self.dim();
        let term = |i: usize, j: usize, k: usize| -> Expr { (0..n).map(|l| &p[i][l] * p[j][k].diff(l)).sum() };
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push(term(i, j, k) + term(j, k, i) + term(k, i, j));
                }
            }
        }
        out
    }

    pub fn sharp(&self, a: &[Expr]) -> VectorField {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| &self.pi[i][j] * &a[j]).sum()).collect()
    }

    pub fn eval(&self, a: &[Expr], b: &[Expr]) -> Expr {
        bilinear(&self.pi, a, b)
    }

    /// `{f, g} = pi^{ij} d_i f d_j g`.
    pub fn bracket(&self, f: &Expr, g: &Expr) -> Expr {
        let n = self.dim();
        self.eval(&gradient(f, n), &gradient(g, n))
    }

    /// Local Koszul bracket
    /// `pi^{kl} d_k a_j b_l + pi^{kl} a_k d_l b_j + d_j pi^{kl} a_k b_l`.
    pub fn koszul(&self, a: &[Expr], b: &[Expr]) -> OneForm {
        let n = self.dim();
        let p = &self.pi;
        (0..n)
            .map(|j| {
                let mut acc = Expr::zero();
                for k in 0..n {
                    for l in 0..n {
                        if p[k][l].is_zero() {
                            continue;
                        }
                        acc = acc
                            + &p[k][l] * a[j].diff(k) * &b[l]
                            + &p[k][l] * &a[k] * b[j].diff(l)
                            + p[k][l].diff(j) * &a[k] * &b[l];
                    }
                }
                acc
            })
            .collect()
    }
}

pub fn check_poisson(p: &PoissonBivector, probe: &Probe) -> Result<ResidualReport, CheckError> {
    probe.check("poisson", &p.poisson_residuals())
}

/// Minimum and maximum numerical rank of a bivector over the sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub min_rank: usize,
    pub max_rank: usize,
    pub samples: usize,
}

/// Singular values at or below `1e-9 * max(1, largest)` count as zero.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    let cut = 1e-9 * top.max(1.0);
    sv.iter().filter(|&&s| s > cut).count()
}

pub fn evaluate_matrix(m: &Matrix, point: &[f64]) -> Result<DMatrix<f64>, EvalError> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = m[i][j].eval(point)?;
        }
    }
    Ok(out)
}

pub fn kernel_diagnostic(p: &PoissonBivector, probe: &Probe) -> Result<RankReport, CheckError> {
    let mut min_rank = usize::MAX;
    let mut max_rank = 0;
    for pt in &probe.points {
        let m = evaluate_matrix(&p.pi, pt).map_err(|error| CheckError {
            check: "rank".into(),
            point: pt.clone(),
            field: 0,
            error,
        })?;
        let r = numerical_rank(&m);
        min_rank = min_rank.min(r);
        max_rank = max_rank.max(r);
    }
    if probe.points.is_empty() {
        min_rank = 0;
    }
    Ok(RankReport { min_rank, max_rank, samples: probe.points.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{Chart, SamplePlan};

    fn probe(chart: &Chart) -> Probe {
        Probe::new(chart, &SamplePlan::default(), 1e-9)
    }

    #[test]
    fn z_dx_dy_not_closed() {
        let chart = Chart::cube(&["x", "y", "z"], 1.0).unwrap();
        let mut w = zeros(3);
        w[0][1] = chart.parse("z").unwrap();
        let r = check_closed(&PreSymplectic::new(w), &probe(&chart)).unwrap();
        assert!(!r.pass);
        assert!((r.max_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_convention() {
        let mut p = zeros(2);
        p[0][1] = Expr::one();
        let p = PoissonBivector::new(p);
        let v = p.sharp(&[Expr::one(), Expr::zero()]);
        assert_eq!(v[1].as_num(), Some(-1.0));
        assert!(v[0].is_zero());
    }

    #[test]
    fn rank_of_degenerate_bivector() {
        let chart = Chart::new(&["x", "y"], &[(0.5, 1.0), (-1.0, 1.0)]).unwrap();
        let mut p = zeros(2);
        p[0][1] = chart.parse("x").unwrap();
        let r = kernel_diagnostic(&PoissonBivector::new(p), &probe(&chart)).unwrap();
        assert_eq!((r.min_rank, r.max_rank), (2, 2));
        let r = kernel_diagnostic(&PoissonBivector::new(zeros(2)), &probe(&chart)).unwrap();
        assert_eq!((r.min_rank, r.max_rank), (0, 0));
    }
}
