//! Connections on `A` and the objects they induce.
//!
//! `omega[a][b][i]` is `omega^b_{ai}`, so `nabla_i e_a = omega^b_{ai} e_b`.
//! Torsion `t[a][b][c] = T^c_{ab}`, curvature `r[a][b][i][j]` maps the input
//! frame `e_a` to the `e_b` component of `R(d_i, d_j) e_a`, basic curvature
//! `s[i][a][b][c] = S^c_{iab}`, and `nabla mu` is stored as `[j][a]`.
//!
//! The basic `A`-connection on `TM` is `[rho(e), v] + rho(nabla_v e)`; on
//! one-forms it is the dual connection, so that the pairing is preserved.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebroid::{zero_cube, AltForm, Cube, LieAlgebroid};
use crate::expr::Expr;
use crate::geometry::{apply, lie_bracket, Matrix, OneForm, VectorField};
use crate::manifold::{CheckError, Probe, ResidualReport};

pub type Quartic = Vec<Vec<Vec<Vec<Expr>>>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    pub omega: Cube,
}

impl Connection {
    pub fn trivial(rank: usize, dim: usize) -> Connection {
        Connection { omega: zero_cube(rank, rank, dim) }
    }

    pub fn new(omega: Cube, rank: usize, dim: usize) -> Result<Connection, String> {
        let ok = omega.len() == rank && omega.iter().all(|m| m.len() == rank && m.iter().all(|v| v.len() == dim));
        if ok {
            Ok(Connection { omega })
        } else {
            Err(alloc::format!("connection must be {0}x{0}x{1}", rank, dim))
        }
    }

    pub fn rank(&self) -> usize {
        self.omega.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.omega.iter().flatten().flatten().all(Expr::is_zero)
    }

    /// `(nabla_j e)^b = d_j e^b + e^a omega^b_{aj}`.
    pub fn covariant_section(&self, e: &[Expr], n: usize) -> Matrix {
        let r = self.rank();
        (0..n)
            .map(|j| {
                (0..r).map(|b| e[b].diff(j) + (0..r).map(|a| &e[a] * &self.omega[a][b][j]).sum::<Expr>()).collect()
            })
            .collect()
    }
}

/// `nabla_j mu_a = d_j mu_a - omega^b_{aj} mu_b`, stored `[j][a]`.
pub fn dual_covariant_derivative(conn: &Connection, mu: &[Expr], n: usize) -> Matrix {
    let r = conn.rank();
    (0..n)
        .map(|j| (0..r).map(|a| mu[a].diff(j) - (0..r).map(|b| &conn.omega[a][b][j] * &mu[b]).sum::<Expr>()).collect())
        .collect()
}

/// `M[a][k][i] = -d_i rho^k_a + rho^k_b omega^b_{ai}`: the basic connection
/// along `e_a` applied to `d_i` has components `M[a][k][i]`.
pub fn basic_frame_coefficients(alg: &LieAlgebroid, conn: &Connection) -> Cube {
    let (r, n) = (alg.rank(), alg.dim());
    let rho = alg.rho();
    let mut m = zero_cube(r, n, n);
    for a in 0..r {
        for k in 0..n {
            for i in 0..n {
                let mut acc = -rho[a][k].diff(i);
                for b in 0..r {
                    acc = acc + &rho[b][k] * &conn.omega[a][b][i];
                }
                m[a][k][i] = acc;
            }
        }
    }
    m
}

pub fn basic_on_vector_fields(alg: &LieAlgebroid, conn: &Connection, e: &[Expr], v: &[Expr]) -> VectorField {
    let n = alg.dim();
    let re = alg.anchor(e);
    let ne = conn.covariant_section(e, n);
    let nve: Vec<Expr> = (0..alg.rank()).map(|b| (0..n).map(|j| &v[j] * &ne[j][b]).sum()).collect();
    let corr = alg.anchor(&nve);
    lie_bracket(&re, v).iter().zip(&corr).map(|(a, b)| a + b).collect()
}

/// `(L_{rho(e)} a)_j - a_i rho^i_b (nabla_j e)^b`.
pub fn basic_on_one_forms(alg: &LieAlgebroid, conn: &Connection, e: &[Expr], a: &[Expr]) -> OneForm {
    let (r, n) = (alg.rank(), alg.dim());
    let re = alg.anchor(e);
    let ne = conn.covariant_section(e, n);
    let lie = crate::geometry::lie_derivative_form(&re, a);
    (0..n)
        .map(|j| {
            let mut acc = lie[j].clone();
            for b in 0..r {
                if ne[j][b].is_zero() {
                    continue;
                }
                let rho_a: Expr = (0..n).map(|i| &a[i] * &alg.rho()[b][i]).sum();
                acc = acc - rho_a * &ne[j][b];
            }
            acc
        })
        .collect()
}

/// Basic connection along the frame `e_a` on a `k`-form on `M`, extended as
/// a derivation: `rho_a^l d_l phi_{I} - sum_s M[a][l][i_s] phi_{..l..}`.
pub fn basic_on_form(alg: &LieAlgebroid, m: &Cube, a: usize, phi: &AltForm) -> AltForm {
    let n = alg.dim();
    AltForm::from_fn(n, phi.degree(), |idx| {
        let mut acc = alg.act(a, &phi.get(idx));
        for s in 0..idx.len() {
            for l in 0..n {
                let coef = &m[a][l][idx[s]];
                if coef.is_zero() {
                    continue;
                }
                let mut swapped = idx.to_vec();
                swapped[s] = l;
                acc = acc - coef * phi.get(&swapped);
            }
        }
        acc
    })
}

/// Basic connection along `e_a` on a bivector:
/// `rho_a^k d_k pi^{ij} + M[a][i][k] pi^{kj} + M[a][j][k] pi^{ik}`.
pub fn basic_on_bivector(alg: &LieAlgebroid, m: &Cube, a: usize, pi: &Matrix) -> Matrix {
    let n = alg.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = alg.act(a, &pi[i][j]);
                    for k in 0..n {
                        acc = acc + &m[a][i][k] * &pi[k][j] + &m[a][j][k] * &pi[i][k];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// An `A`-form of degree `m` with values in `k`-forms on `M`, stored on
/// increasing `A`-index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValued {
    pub a_degree: usize,
    pub forms: Vec<(Vec<usize>, AltForm)>,
}

impl FormValued {
    pub fn get(&self, idx: &[usize], n: usize, k: usize) -> AltForm {
        match crate::algebroid::sort_with_sign(idx) {
            None => AltForm::zero(n, k),
            Some((sorted, sign)) => match self.forms.iter().find(|(i, _)| *i == sorted) {
                Some((_, f)) if sign > 0.0 => f.clone(),
                Some((_, f)) => AltForm::from_fn(n, k, |i| -f.get(i)),
                None => AltForm::zero(n, k),
            },
        }
    }

    pub fn coefficients(&self) -> Vec<Expr> {
        self.forms.iter().flat_map(|(_, f)| f.coefficients().iter().cloned()).collect()
    }
}

/// Exterior covariant derivative for the basic `A`-connection on `k`-forms.
pub fn exterior_covariant_derivative(alg: &LieAlgebroid, conn: &Connection, phi: &FormValued, k: usize) -> FormValued {
    let (r, n) = (alg.rank(), alg.dim());
    let m = basic_frame_coefficients(alg, conn);
    let deg = phi.a_degree;
    let forms = crate::algebroid::combinations(r, deg + 1)
        .into_iter()
        .map(|idx| {
            let mut acc: Vec<Expr> = vec![Expr::zero(); crate::algebroid::combinations(n, k).len()];
            let mut add = |f: &AltForm, sign: f64| {
                for (slot, c) in acc.iter_mut().zip(f.coefficients()) {
                    *slot = if sign > 0.0 { &*slot + c } else { &*slot - c };
                }
            };
            for i in 0..=deg {
                let rest: Vec<usize> = idx.iter().enumerate().filter(|&(s, _)| s != i).map(|(_, &a)| a).collect();
                let f = basic_on_form(alg, &m, idx[i], &phi.get(&rest, n, k));
                add(&f, if i % 2 == 0 { 1.0 } else { -1.0 });
            }
            for i in 0..=deg {
                for j in i + 1..=deg {
                    let rest: Vec<usize> =
                        idx.iter().enumerate().filter(|&(s, _)| s != i && s != j).map(|(_, &a)| a).collect();
                    for c in 0..r {
                        let coef = &alg.c()[idx[i]][idx[j]][c];
                        if coef.is_zero() {
                            continue;
                        }
                        let mut args = vec![c];
                        args.extend_from_slice(&rest);
                        let f = phi.get(&args, n, k);
                        let f = AltForm::from_fn(n, k, |ix| coef * f.get(ix));
                        add(&f, if (i + j) % 2 == 0 { 1.0 } else { -1.0 });
                    }
                }
            }
            let mut it = acc.into_iter();
            let form = AltForm::from_fn(n, k, |_| it.next().unwrap_or_else(Expr::zero));
            (idx, form)
        })
        .collect();
    FormValued { a_degree: deg + 1, forms }
}

/// `T^c_{ab} = -C^c_{ab} + rho_a^i omega^c_{bi} - rho_b^i omega^c_{ai}`.
pub fn torsion(alg: &LieAlgebroid, conn: &Connection) -> Cube {
    let (r, n) = (alg.rank(), alg.dim());
    let rho = alg.rho();
    let w = &conn.omega;
    let mut t = zero_cube(r, r, r);
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let mut acc = -&alg.c()[a][b][c];
                for i in 0..n {
                    acc = acc + &rho[a][i] * &w[b][c][i] - &rho[b][i] * &w[a][c][i];
                }
                t[a][b][c] = acc;
            }
        }
    }
    t
}

/// `R[a][b][i][j] = d_i omega^b_{aj} - d_j omega^b_{ai}
///   + omega^c_{aj} omega^b_{ci} - omega^c_{ai} omega^b_{cj}`.
pub fn curvature(conn: &Connection, n: usize) -> Quartic {
    let r = conn.rank();
    let w = &conn.omega;
    let mut out = vec![vec![vec![vec![Expr::zero(); n]; n]; r]; r];
    for a in 0..r {
        for b in 0..r {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let mut acc = w[a][b][j].diff(i) - w[a][b][i].diff(j);
                    for c in 0..r {
                        acc = acc + &w[a][c][j] * &w[c][b][i] - &w[a][c][i] * &w[c][b][j];
                    }
                    out[a][b][i][j] = acc;
                }
            }
        }
    }
    out
}

/// `nabla_i T^c_{ab}`, stored `[i][a][b][c]`.
pub fn torsion_derivative(alg: &LieAlgebroid, conn: &Connection, t: &Cube) -> Quartic {
    let (r, n) = (alg.rank(), alg.dim());
    let w = &conn.omega;
    let mut out = vec![vec![vec![vec![Expr::zero(); r]; r]; r]; n];
    for i in 0..n {
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let mut acc = t[a][b][c].diff(i);
                    for d in 0..r {
                        acc = acc + &w[d][c][i] * &t[a][b][d] - &w[a][d][i] * &t[d][b][c] - &w[b][d][i] * &t[a][d][c];
                    }
                    out[i][a][b][c] = acc;
                }
            }
        }
    }
    out
}

/// Basic curvature from the expanded local formula, `s[i][a][b][c]`.
pub fn basic_curvature(alg: &LieAlgebroid, conn: &Connection) -> Quartic {
    let (r, n) = (alg.rank(), alg.dim());
    let rho = alg.rho();
    let c = alg.c();
    let w = &conn.omega;
    let mut out = vec![vec![vec![vec![Expr::zero(); r]; r]; r]; n];
    for i in 0..n {
        for a in 0..r {
            for b in 0..r {
                if a == b {
                    continue;
                }
                for k in 0..r {
                    let mut acc = -c[a][b][k].diff(i);
                    for d in 0..r {
                        acc = acc - &w[d][k][i] * &c[a][b][d] + &w[a][d][i] * &c[d][b][k] + &w[b][d][i] * &c[a][d][k];
                    }
                    for j in 0..n {
                        acc = acc + &rho[a][j] * w[b][k][i].diff(j) - &rho[b][j] * w[a][k][i].diff(j)
                            + rho[a][j].diff(i) * &w[b][k][j]
                            - rho[b][j].diff(i) * &w[a][k][j];
                        for d in 0..r {
                            acc = acc - &w[a][d][i] * &rho[d][j] * &w[b][k][j] + &w[b][d][i] * &rho[d][j] * &w[a][k][j];
                        }
                    }
                    out[i][a][b][k] = acc;
                }
            }
        }
    }
    out
}

/// Basic curvature as `nabla_i T^c_{ab} + rho_b^j R^c_{a,ij} - rho_a^j R^c_{b,ij}`.
pub fn basic_curvature_from_torsion(alg: &LieAlgebroid, conn: &Connection) -> Quartic {
    let (r, n) = (alg.rank(), alg.dim());
    let rho = alg.rho();
    let t = torsion(alg, conn);
    let mut s = torsion_derivative(alg, conn, &t);
    let curv = curvature(conn, n);
    for (i, si) in s.iter_mut().enumerate() {
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let mut acc = si[a][b][c].clone();
                    for j in 0..n {
                        acc = acc + &rho[b][j] * &curv[a][c][i][j] - &rho[a][j] * &curv[b][c][i][j];
                    }
                    si[a][b][c] = acc;
                }
            }
        }
    }
    s
}

pub fn flatten4(q: &Quartic) -> Vec<Expr> {
    q.iter().flatten().flatten().flatten().cloned().collect()
}

/// Differences between the two basic-curvature formulas.
pub fn basic_curvature_consistency(alg: &LieAlgebroid, conn: &Connection) -> Vec<Expr> {
    let s1 = flatten4(&basic_curvature(alg, conn));
    let s2 = flatten4(&basic_curvature_from_torsion(alg, conn));
    s1.iter().zip(&s2).map(|(a, b)| a - b).collect()
}

/// `(nabla_{rho_a} rho)(e_b) - (nabla_{rho_b} rho)(e_a) + rho(T(e_a, e_b))`.
pub fn anchor_covariant_residuals(alg: &LieAlgebroid, conn: &Connection) -> Vec<Expr> {
    let (r, n) = (alg.rank(), alg.dim());
    let rho = alg.rho();
    let t = torsion(alg, conn);
    let w = &conn.omega;
    // (nabla_v rho)(e_b)^i = v(rho_b^i) - rho_c^i omega^c_{bj} v^j
    let nab = |a: usize, b: usize, i: usize| -> Expr {
        let mut acc = apply(&rho[a], &rho[b][i]);
        for c in 0..r {
            for j in 0..n {
                acc = acc - &rho[c][i] * &w[b][c][j] * &rho[a][j];
            }
        }
        acc
    };
    let mut out = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            for i in 0..n {
                let tor: Expr = (0..r).map(|c| &rho[c][i] * &t[a][b][c]).sum();
                out.push(nab(a, b, i) - nab(b, a, i) + tor);
            }
        }
    }
    out
}

/// Cyclic sum over `(a, b, c)` of
/// `(nabla_{rho_a} T)(e_b, e_c) - T(e_a, T(e_b, e_c)) - R(rho_a, rho_b) e_c`.
pub fn jacobi_covariant_residuals(alg: &LieAlgebroid, conn: &Connection) -> Vec<Expr> {
    let (r, n) = (alg.rank(), alg.dim());
    let rho = alg.rho();
    let t = torsion(alg, conn);
    let nt = torsion_derivative(alg, conn, &t);
    let curv = curvature(conn, n);
    let term = |a: usize, b: usize, c: usize, d: usize| -> Expr {
        let mut acc = Expr::zero();
        for i in 0..n {
            acc = acc + &rho[a][i] * &nt[i][b][c][d];
        }
        for e in 0..r {
            acc = acc - &t[b][c][e] * &t[a][e][d];
        }
        for i in 0..n {
            for j in 0..n {
                acc = acc - &rho[a][i] * &rho[b][j] * &curv[c][d][i][j];
            }
        }
        acc
    };
    let mut out = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            for c in b + 1..r {
                for d in 0..r {
                    out.push(term(a, b, c, d) + term(b, c, a, d) + term(c, a, b, d));
                }
            }
        }
    }
    out
}

pub fn check_basic_curvature_consistency(
    alg: &LieAlgebroid,
    conn: &Connection,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("basic-curvature-forms", &basic_curvature_consistency(alg, conn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{Chart, SamplePlan};

    #[test]
    fn rank_one_curvature() {
        let chart = Chart::cube(&["x", "y"], 1.0).unwrap();
        let mut w = zero_cube(1, 1, 2);
        w[0][0][1] = chart.parse("x").unwrap();
        let r = curvature(&Connection { omega: w }, 2);
        assert_eq!(r[0][0][0][1].eval(&[0.2, 0.3]).unwrap(), 1.0);
    }

    #[test]
    fn constant_mu_dual_derivative() {
        let mut w = zero_cube(1, 1, 1);
        w[0][0][0] = Expr::one();
        let nm = dual_covariant_derivative(&Connection { omega: w }, &[Expr::num(3.0)], 1);
        assert_eq!(nm[0][0].as_num(), Some(-3.0));
    }

    #[test]
    fn affine_torsion_with_connection() {
        let chart = Chart::cube(&["x"], 1.0).unwrap();
        let x = chart.parse("x").unwrap();
        let mut c = zero_cube(2, 2, 2);
        c[0][1][0] = Expr::one();
        let alg = LieAlgebroid::new(chart.clone(), vec![vec![Expr::one()], vec![x]], c).unwrap();
        let mut w = zero_cube(2, 2, 1);
        w[1][0][0] = Expr::one();
        let t = torsion(&alg, &Connection { omega: w });
        let probe = Probe::new(&chart, &SamplePlan::default(), 1e-12);
        assert!(probe.check("t", &[t[0][1][0].clone()]).unwrap().pass);
    }
}
