//! Lie algebroid data `(rho, C)` over a chart.
//!
//! Index layout: `rho[a][i]` is `rho^i_a`, `c[a][b][c]` is `C^c_{ab}`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::Expr;
use crate::geometry::{apply, Matrix, PoissonBivector, VectorField};
use crate::manifold::{Chart, CheckError, Probe, ResidualReport};

pub type SectionA = Vec<Expr>;
pub type Cube = Vec<Vec<Vec<Expr>>>;

pub fn zero_cube(r: usize, s: usize, t: usize) -> Cube {
    vec![vec![vec![Expr::zero(); t]; s]; r]
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebroidError {
    Shape(String),
    NonConstantStructure,
    /// A precondition check failed; carries its report.
    Precondition(ResidualReport),
    Evaluation(CheckError),
}

impl fmt::Display for AlgebroidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebroidError::Shape(s) => write!(f, "shape mismatch: {}", s),
            AlgebroidError::NonConstantStructure => {
                write!(f, "action algebroid needs constant structure constants")
            }
            AlgebroidError::Precondition(r) => {
                write!(f, "precondition '{}' failed with residual {:e}", r.name, r.max_residual)
            }
            AlgebroidError::Evaluation(e) => write!(f, "{}", e),
        }
    }
}

impl From<CheckError> for AlgebroidError {
    fn from(e: CheckError) -> Self {
        AlgebroidError::Evaluation(e)
    }
}

/// Totally antisymmetric coefficients stored on strictly increasing index
/// tuples in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct AltForm {
    degree: usize,
    size: usize,
    index: Vec<Vec<usize>>,
    coeffs: Vec<Expr>,
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Sort `idx`, returning the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl AltForm {
    pub fn zero(size: usize, degree: usize) -> AltForm {
        let index = combinations(size, degree);
        let coeffs = vec![Expr::zero(); index.len()];
        AltForm { degree, size, index, coeffs }
    }

    /// Build from a function evaluated on increasing index tuples.
    pub fn from_fn<F: FnMut(&[usize]) -> Expr>(size: usize, degree: usize, mut f: F) -> AltForm {
        let index = combinations(size, degree);
        let coeffs = index.iter().map(|i| f(i)).collect();
        AltForm { degree, size, index, coeffs }
    }

    pub fn function(size: usize, f: Expr) -> AltForm {
        AltForm::from_fn(size, 0, |_| f.clone())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, idx: &[usize]) -> Expr {
        match sort_with_sign(idx) {
            None => Expr::zero(),
            Some((sorted, sign)) => match self.index.binary_search(&sorted) {
                Ok(k) if sign > 0.0 => self.coeffs[k].clone(),
                Ok(k) => -&self.coeffs[k],
                Err(_) => Expr::zero(),
            },
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.index.iter().map(|v| v.as_slice()).zip(&self.coeffs)
    }

    pub fn coefficients(&self) -> &[Expr] {
        &self.coeffs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebroid {
    chart: Chart,
    rho: Matrix,
    c: Cube,
}

impl LieAlgebroid {
    /// `c` is canonicalised from its `a < b` entries; diagonal and lower
    /// entries are overwritten.
    pub fn new(chart: Chart, rho: Matrix, c: Cube) -> Result<LieAlgebroid, AlgebroidError> {
        let r = rho.len();
        let n = chart.dim();
        if rho.iter().any(|row| row.len() != n) {
            return Err(AlgebroidError::Shape(alloc::format!("anchor rows must have {} entries", n)));
        }
        if c.len() != r || c.iter().any(|m| m.len() != r || m.iter().any(|v| v.len() != r)) {
            return Err(AlgebroidError::Shape(alloc::format!("structure functions must be {0}x{0}x{0}", r)));
        }
        let mut canon = zero_cube(r, r, r);
        for a in 0..r {
            for b in a + 1..r {
                for k in 0..r {
                    canon[a][b][k] = c[a][b][k].clone();
                    canon[b][a][k] = -&c[a][b][k];
                }
            }
        }
        Ok(LieAlgebroid { chart, rho, c: canon })
    }

    /// `TM` itself: identity anchor, zero structure functions.
    pub fn tangent(chart: Chart) -> LieAlgebroid {
        let n = chart.dim();
        let rho = (0..n).map(|a| (0..n).map(|i| if a == i { Expr::one() } else { Expr::zero() }).collect()).collect();
        LieAlgebroid { chart, rho, c: zero_cube(n, n, n) }
    }

    /// Trivial bundle with constant structure constants.
    pub fn action(chart: Chart, rho: Matrix, c: Cube, probe: &Probe) -> Result<LieAlgebroid, AlgebroidError> {
        let alg = LieAlgebroid::new(chart, rho, c)?;
        if alg.c.iter().flatten().flatten().any(|e| !e.is_constant()) {
            return Err(AlgebroidError::NonConstantStructure);
        }
        let [anchor, jacobi] = alg.check_axioms(probe)?;
        for r in [anchor, jacobi] {
            if !r.pass {
                return Err(AlgebroidError::Precondition(r));
            }
        }
        Ok(alg)
    }

    /// Cotangent algebroid of a bivector without checking it is Poisson:
    /// `rho[a][i] = -pi^{ia}`, `C^c_{ab} = d_c pi^{ab}` (Koszul bracket of
    /// coordinate differentials).
    pub fn cotangent_unchecked(chart: Chart, pi: &PoissonBivector) -> LieAlgebroid {
        let n = chart.dim();
        let p = &pi.pi;
        let rho = (0..n).map(|a| (0..n).map(|i| -&p[i][a]).collect()).collect();
        let mut c = zero_cube(n, n, n);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    c[a][b][k] = p[a][b].diff(k);
                }
            }
        }
        LieAlgebroid { chart, rho, c }
    }

    pub fn cotangent(chart: Chart, pi: &PoissonBivector, probe: &Probe) -> Result<LieAlgebroid, AlgebroidError> {
        if pi.dim() != chart.dim() {
            return Err(AlgebroidError::Shape("bivector dimension differs from chart".into()));
        }
        let r = crate::geometry::check_poisson(pi, probe)?;
        if !r.pass {
            return Err(AlgebroidError::Precondition(r));
        }
        Ok(LieAlgebroid::cotangent_unchecked(chart, pi))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.rho.len()
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn rho(&self) -> &Matrix {
        &self.rho
    }

    pub fn c(&self) -> &Cube {
        &self.c
    }

    /// Replace the structure functions (canonicalised from `a < b`).
    pub fn with_structure(&self, c: Cube) -> Result<LieAlgebroid, AlgebroidError> {
        LieAlgebroid::new(self.chart.clone(), self.rho.clone(), c)
    }

    pub fn with_anchor(&self, rho: Matrix) -> Result<LieAlgebroid, AlgebroidError> {
        LieAlgebroid::new(self.chart.clone(), rho, self.c.clone())
    }

    /// `rho(e)^i = e^a rho^i_a`.
    pub fn anchor(&self, e: &[Expr]) -> VectorField {
        (0..self.dim()).map(|i| (0..self.rank()).map(|a| &e[a] * &self.rho[a][i]).sum()).collect()
    }

    /// `rho_a(f) = rho^i_a d_i f`.
    pub fn act(&self, a: usize, f: &Expr) -> Expr {
        apply(&self.rho[a], f)
    }

    pub fn frame(&self, a: usize) -> SectionA {
        (0..self.rank()).map(|b| if a == b { Expr::one() } else { Expr::zero() }).collect()
    }

    /// `C^c_{ab} e^a f^b + rho(e)(f^c) - rho(f)(e^c)`.
    pub fn bracket(&self, e: &[Expr], f: &[Expr]) -> SectionA {
        let r = self.rank();
        let re = self.anchor(e);
        let rf = self.anchor(f);
        (0..r)
            .map(|k| {
                let mut acc = apply(&re, &f[k]) - apply(&rf, &e[k]);
                for a in 0..r {
                    for b in 0..r {
                        if !self.c[a][b][k].is_zero() {
                            acc = acc + &self.c[a][b][k] * &e[a] * &f[b];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `rho_a^j d_j rho_b^i - rho_b^j d_j rho_a^i - C^c_{ab} rho_c^i`, `a < b`.
    pub fn anchor_residuals(&self) -> Vec<Expr> {
        let (r, n) = (self.rank(), self.dim());
        let mut out = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                for i in 0..n {
                    let mut acc = self.act(a, &self.rho[b][i]) - self.act(b, &self.rho[a][i]);
                    for k in 0..r {
                        acc = acc - &self.c[a][b][k] * &self.rho[k][i];
                    }
                    out.push(acc);
                }
            }
        }
        out
    }

    /// `C^e_{ad} C^d_{bc} + rho_a(C^e_{bc}) + cyclic(abc)`, `a < b < c`.
    pub fn jacobi_residuals(&self) -> Vec<Expr> {
        let r = self.rank();
        let c = &self.c;
        let term = |a: usize, b: usize, k: usize, e: usize| -> Expr {
            let quad: Expr = (0..r).map(|d| &c[a][d][e] * &c[b][k][d]).sum();
            quad + self.act(a, &c[b][k][e])
        };
        let mut out = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                for k in b + 1..r {
                    for e in 0..r {
                        out.push(term(a, b, k, e) + term(b, k, a, e) + term(k, a, b, e));
                    }
                }
            }
        }
        out
    }

    /// Reports named `anchor-identity` and `jacobi-identity`.
    pub fn check_axioms(&self, probe: &Probe) -> Result<[ResidualReport; 2], CheckError> {
        Ok([
            probe.check("anchor-identity", &self.anchor_residuals())?,
            probe.check("jacobi-identity", &self.jacobi_residuals())?,
        ])
    }

    /// Algebroid differential of an `A`-form.
    pub fn differential(&self, eta: &AltForm) -> AltForm {
        let r = self.rank();
        let m = eta.degree();
        AltForm::from_fn(r, m + 1, |idx| {
            let mut acc = Expr::zero();
            for i in 0..=m {
                let rest: Vec<usize> = idx.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &a)| a).collect();
                let t = self.act(idx[i], &eta.get(&rest));
                acc = if i % 2 == 0 { acc + t } else { acc - t };
            }
            for i in 0..=m {
                for j in i + 1..=m {
                    let rest: Vec<usize> =
                        idx.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &a)| a).collect();
                    let mut t = Expr::zero();
                    for k in 0..r {
                        let ck = &self.c[idx[i]][idx[j]][k];
                        if ck.is_zero() {
                            continue;
                        }
                        let mut args = vec![k];
                        args.extend_from_slice(&rest);
                        t = t + ck * eta.get(&args);
                    }
                    acc = if (i + j) % 2 == 0 { acc + t } else { acc - t };
                }
            }
            acc
        })
    }
}
