//! Momentum-section conditions over pre-symplectic and Poisson bases, and
//! the local identities they imply.
//!
//! Symplectic conditions (residuals that must vanish):
//! - `presymplectic-anchored`: basic connection of `w` along every frame.
//! - `momentum-symplectic`: `nabla_i mu_a + rho_a^j w_{ji}`.
//! - `bracket-compatible-symplectic`: `Ad mu(e_a, e_b) - w(rho_a, rho_b)`.
//!
//! Poisson conditions:
//! - `poisson-anchored`: basic connection of `pi` along every frame.
//! - `momentum-poisson`: `rho^i_a - pi^{ij} nabla_j mu_a`.
//! - `bracket-compatible-poisson`: `Ad mu(e_a, e_b) + pi^{ij} nabla_i mu_a nabla_j mu_b`.
//!
//! Here `Ad mu(e_a, e_b) = rho_a(mu_b) - rho_b(mu_a) - C^c_{ab} mu_c`.

use alloc::vec::Vec;

use crate::algebroid::AltForm;
use crate::algebroid::{Cube, LieAlgebroid};
use crate::connection::{
    basic_curvature, basic_frame_coefficients, basic_on_bivector, basic_on_form, dual_covariant_derivative, torsion,
    Connection,
};
use crate::expr::Expr;
use crate::geometry::{Matrix, PoissonBivector, PreSymplectic};
use crate::manifold::{CheckError, Probe, ResidualReport};

/// `Ad mu(e_a, e_b)` for all `a, b`.
pub fn a_differential_of_mu(alg: &LieAlgebroid, mu: &[Expr]) -> Matrix {
    let r = alg.rank();
    (0..r)
        .map(|a| {
            (0..r)
                .map(|b| {
                    let mut acc = alg.act(a, &mu[b]) - alg.act(b, &mu[a]);
                    for c in 0..r {
                        acc = acc - &alg.c()[a][b][c] * &mu[c];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn presymplectic_anchored_residuals(alg: &LieAlgebroid, conn: &Connection, w: &PreSymplectic) -> Vec<Expr> {
    let n = alg.dim();
    let m = basic_frame_coefficients(alg, conn);
    let form = AltForm::from_fn(n, 2, |ix| w.omega[ix[0]][ix[1]].clone());
    (0..alg.rank()).flat_map(|a| basic_on_form(alg, &m, a, &form).coefficients().to_vec()).collect()
}

pub fn momentum_symplectic_residuals(
    alg: &LieAlgebroid,
    conn: &Connection,
    w: &PreSymplectic,
    mu: &[Expr],
) -> Vec<Expr> {
    let (r, n) = (alg.rank(), alg.dim());
    let nm = dual_covariant_derivative(conn, mu, n);
    let mut out = Vec::new();
    for a in 0..r {
        for i in 0..n {
            let contr: Expr = (0..n).map(|j| &alg.rho()[a][j] * &w.omega[j][i]).sum();
            out.push(&nm[i][a] + contr);
        }
    }
    out
}

pub fn bracket_compatible_symplectic_residuals(alg: &LieAlgebroid, w: &PreSymplectic, mu: &[Expr]) -> Vec<Expr> {
    let r = alg.rank();
    let dmu = a_differential_of_mu(alg, mu);
    let mut out = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            out.push(&dmu[a][b] - w.eval(&alg.rho()[a], &alg.rho()[b]));
        }
    }
    out
}

pub fn poisson_anchored_residuals(alg: &LieAlgebroid, conn: &Connection, p: &PoissonBivector) -> Vec<Expr> {
    let n = alg.dim();
    let m = basic_frame_coefficients(alg, conn);
    let mut out = Vec::new();
    for a in 0..alg.rank() {
        let t = basic_on_bivector(alg, &m, a, &p.pi);
        for i in 0..n {
            for j in i + 1..n {
                out.push(t[i][j].clone());
            }
        }
    }
    out
}

pub fn momentum_poisson_residuals(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
) -> Vec<Expr> {
    let (r, n) = (alg.rank(), alg.dim());
    let nm = dual_covariant_derivative(conn, mu, n);
    let mut out = Vec::new();
    for a in 0..r {
        let col: Vec<Expr> = (0..n).map(|j| nm[j][a].clone()).collect();
        let sharp = p.sharp(&col);
        for i in 0..n {
            out.push(&alg.rho()[a][i] - &sharp[i]);
        }
    }
    out
}

/// `pi(nabla mu_a, nabla mu_b)` for all `a, b`.
pub fn pi_of_nabla_mu(conn: &Connection, p: &PoissonBivector, mu: &[Expr], n: usize) -> Matrix {
    let r = conn.rank();
    let nm = dual_covariant_derivative(conn, mu, n);
    let col = |a: usize| -> Vec<Expr> { (0..n).map(|j| nm[j][a].clone()).collect() };
    (0..r).map(|a| (0..r).map(|b| p.eval(&col(a), &col(b))).collect()).collect()
}

pub fn bracket_compatible_poisson_residuals(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
) -> Vec<Expr> {
    let r = alg.rank();
    let dmu = a_differential_of_mu(alg, mu);
    let pp = pi_of_nabla_mu(conn, p, mu, alg.dim());
    let mut out = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            out.push(&dmu[a][b] + &pp[a][b]);
        }
    }
    out
}

/// `S^c_{jab} mu_c`, stored `[j][a][b]`.
pub fn basic_curvature_pairing(alg: &LieAlgebroid, conn: &Connection, mu: &[Expr]) -> Cube {
    let s = basic_curvature(alg, conn);
    let r = alg.rank();
    s.iter()
        .map(|sj| (0..r).map(|a| (0..r).map(|b| (0..r).map(|c| &sj[a][b][c] * &mu[c]).sum()).collect()).collect())
        .collect()
}

/// `pi^{ij} S^c_{jab} mu_c` for `a < b`.
pub fn basic_curvature_sharp_residuals(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
) -> Vec<Expr> {
    let (r, n) = (alg.rank(), alg.dim());
    let sm = basic_curvature_pairing(alg, conn, mu);
    let mut out = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            let col: Vec<Expr> = (0..n).map(|j| sm[j][a][b].clone()).collect();
            out.extend(p.sharp(&col));
        }
    }
    out
}

pub fn basic_curvature_pairing_residuals(alg: &LieAlgebroid, conn: &Connection, mu: &[Expr]) -> Vec<Expr> {
    let r = alg.rank();
    let sm = basic_curvature_pairing(alg, conn, mu);
    let mut out = Vec::new();
    for sj in &sm {
        for a in 0..r {
            for b in a + 1..r {
                out.push(sj[a][b].clone());
            }
        }
    }
    out
}

pub fn check_presymplectic_anchored(
    alg: &LieAlgebroid,
    conn: &Connection,
    w: &PreSymplectic,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("presymplectic-anchored", &presymplectic_anchored_residuals(alg, conn, w))
}

pub fn check_momentum_symplectic(
    alg: &LieAlgebroid,
    conn: &Connection,
    w: &PreSymplectic,
    mu: &[Expr],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("momentum-symplectic", &momentum_symplectic_residuals(alg, conn, w, mu))
}

pub fn check_bracket_compatible_symplectic(
    alg: &LieAlgebroid,
    w: &PreSymplectic,
    mu: &[Expr],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("bracket-compatible-symplectic", &bracket_compatible_symplectic_residuals(alg, w, mu))
}

pub fn check_poisson_anchored(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("poisson-anchored", &poisson_anchored_residuals(alg, conn, p))
}

pub fn check_momentum_poisson(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("momentum-poisson", &momentum_poisson_residuals(alg, conn, p, mu))
}

pub fn check_bracket_compatible_poisson(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("bracket-compatible-poisson", &bracket_compatible_poisson_residuals(alg, conn, p, mu))
}

pub fn check_basic_curvature_sharp(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("basic-curvature-sharp", &basic_curvature_sharp_residuals(alg, conn, p, mu))
}

pub fn check_basic_curvature_pairing(
    alg: &LieAlgebroid,
    conn: &Connection,
    mu: &[Expr],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check("basic-curvature-pairing", &basic_curvature_pairing_residuals(alg, conn, mu))
}

/// Per-condition reports plus their conjunction.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianVerdict {
    pub conditions: Vec<ResidualReport>,
    /// Poisson case only: the sharpened basic-curvature pairing.
    pub basic_curvature_sharp: Option<ResidualReport>,
    pub pass: bool,
}

pub fn hamiltonian_symplectic(
    alg: &LieAlgebroid,
    conn: &Connection,
    w: &PreSymplectic,
    mu: &[Expr],
    probe: &Probe,
) -> Result<HamiltonianVerdict, CheckError> {
    let conditions = alloc::vec![
        check_presymplectic_anchored(alg, conn, w, probe)?,
        check_momentum_symplectic(alg, conn, w, mu, probe)?,
        check_bracket_compatible_symplectic(alg, w, mu, probe)?,
    ];
    let pass = conditions.iter().all(|r| r.pass);
    Ok(HamiltonianVerdict { conditions, basic_curvature_sharp: None, pass })
}

pub fn hamiltonian_poisson(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<HamiltonianVerdict, CheckError> {
    let conditions = alloc::vec![
        check_poisson_anchored(alg, conn, p, probe)?,
        check_momentum_poisson(alg, conn, p, mu, probe)?,
        check_bracket_compatible_poisson(alg, conn, p, mu, probe)?,
    ];
    let pass = conditions.iter().all(|r| r.pass);
    let sharp = check_basic_curvature_sharp(alg, conn, p, mu, probe)?;
    Ok(HamiltonianVerdict { conditions, basic_curvature_sharp: Some(sharp), pass })
}

/// Residual families of the local identity chain on a Poisson base.
///
/// With `N_{ja} = nabla_j mu_a` and `DN_{kja} = d_k N_{ja} - omega^b_{ak} N_{jb}`:
/// - `anchor-identity-substituted`:
///   `pi^{ij}(-pi^{kl} d_k N_{ja} N_{lb} - pi^{kl} N_{ka} d_l N_{jb} - d_j pi^{kl} N_{ka} N_{lb} - C^c_{ab} N_{jc})`
/// - `anchor-identity-covariant`:
///   `pi^{ij}(pi^{kl} DN_{kja} N_{lb} + pi^{kl} N_{ka} DN_{ljb} + d_j pi^{kl} N_{ka} N_{lb} - T^c_{ab} N_{jc})`
/// - `bracket-compatible-covariant`: `pi^{kl} N_{ka} N_{lb} - T^c_{ab} mu_c`
/// - `bracket-compatible-derivative`: the covariant derivative of the previous
///   line, `Q_{jab} - S^c_{jab} mu_c` where `Q_{jab}` is the bracket inside the
///   covariant anchor identity
/// - `bracket-compatible-derivative-sharp`: `pi^{ij}` times the previous line
/// - `covariant-koszul-identity`: `Q_{jab}` alone (needs `S mu = 0`)
/// - `koszul-morphism`: `[N_a, N_b]_pi + C^c_{ab} N_c` (needs `S mu = 0`)
pub struct IdentityChain {
    pub anchor_substituted: Vec<Expr>,
    pub anchor_covariant: Vec<Expr>,
    pub bracket_covariant: Vec<Expr>,
    pub bracket_derivative: Vec<Expr>,
    pub bracket_derivative_sharp: Vec<Expr>,
    pub covariant_koszul: Vec<Expr>,
    pub koszul_morphism: Vec<Expr>,
}

pub const IDENTITY_NAMES: [&str; 7] = [
    "anchor-identity-substituted",
    "anchor-identity-covariant",
    "bracket-compatible-covariant",
    "bracket-compatible-derivative",
    "bracket-compatible-derivative-sharp",
    "covariant-koszul-identity",
    "koszul-morphism",
];

/// Whether the identity is only expected once `S mu = 0`.
pub fn identity_needs_pairing(name: &str) -> bool {
    matches!(name, "covariant-koszul-identity" | "koszul-morphism")
}

impl IdentityChain {
    pub fn new(alg: &LieAlgebroid, conn: &Connection, p: &PoissonBivector, mu: &[Expr]) -> IdentityChain {
        let (r, n) = (alg.rank(), alg.dim());
        let pi = &p.pi;
        let w = &conn.omega;
        let c = alg.c();
        let nm = dual_covariant_derivative(conn, mu, n);
        let t = torsion(alg, conn);
        let sm = basic_curvature_pairing(alg, conn, mu);
        // dn[k][j][a] = d_k N_{ja} - omega^b_{ak} N_{jb}
        let dn: Vec<Vec<Vec<Expr>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        (0..r)
                            .map(|a| nm[j][a].diff(k) - (0..r).map(|b| &w[a][b][k] * &nm[j][b]).sum::<Expr>())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let col = |a: usize| -> Vec<Expr> { (0..n).map(|j| nm[j][a].clone()).collect() };
        let sharp_j = |v: &[Expr]| -> Vec<Expr> { p.sharp(v) };

        let mut out = IdentityChain {
            anchor_substituted: Vec::new(),
            anchor_covariant: Vec::new(),
            bracket_covariant: Vec::new(),
            bracket_derivative: Vec::new(),
            bracket_derivative_sharp: Vec::new(),
            covariant_koszul: Vec::new(),
            koszul_morphism: Vec::new(),
        };
        for a in 0..r {
            for b in a + 1..r {
                let mut subst = Vec::with_capacity(n);
                let mut q = Vec::with_capacity(n);
                for j in 0..n {
                    let mut s = Expr::zero();
                    let mut cov = Expr::zero();
                    for k in 0..n {
                        for l in 0..n {
                            if pi[k][l].is_zero() && pi[k][l].diff(j).is_zero() {
                                continue;
                            }
                            let both = &nm[k][a] * &nm[l][b];
                            s = s
                                - &pi[k][l] * nm[j][a].diff(k) * &nm[l][b]
                                - &pi[k][l] * &nm[k][a] * nm[j][b].diff(l)
                                - pi[k][l].diff(j) * &both;
                            cov = cov
                                + &pi[k][l] * &dn[k][j][a] * &nm[l][b]
                                + &pi[k][l] * &nm[k][a] * &dn[l][j][b]
                                + pi[k][l].diff(j) * &both;
                        }
                    }
                    for d in 0..r {
                        s = s - &c[a][b][d] * &nm[j][d];
                        cov = cov - &t[a][b][d] * &nm[j][d];
                    }
                    subst.push(s);
                    q.push(cov);
                }
                out.anchor_substituted.extend(sharp_j(&subst));
                out.anchor_covariant.extend(sharp_j(&q));
                let deriv: Vec<Expr> = (0..n).map(|j| &q[j] - &sm[j][a][b]).collect();
                out.bracket_derivative_sharp.extend(sharp_j(&deriv));
                out.bracket_derivative.extend(deriv);
                out.covariant_koszul.extend(q);

                let pp = p.eval(&col(a), &col(b));
                let tm: Expr = (0..r).map(|d| &t[a][b][d] * &mu[d]).sum();
                out.bracket_covariant.push(pp - tm);

                let kz = p.koszul(&col(a), &col(b));
                for j in 0..n {
                    let cn: Expr = (0..r).map(|d| &c[a][b][d] * &nm[j][d]).sum();
                    out.koszul_morphism.push(&kz[j] + cn);
                }
            }
        }
        out
    }

    pub fn families(&self) -> [(&'static str, &[Expr]); 7] {
        [
            (IDENTITY_NAMES[0], &self.anchor_substituted),
            (IDENTITY_NAMES[1], &self.anchor_covariant),
            (IDENTITY_NAMES[2], &self.bracket_covariant),
            (IDENTITY_NAMES[3], &self.bracket_derivative),
            (IDENTITY_NAMES[4], &self.bracket_derivative_sharp),
            (IDENTITY_NAMES[5], &self.covariant_koszul),
            (IDENTITY_NAMES[6], &self.koszul_morphism),
        ]
    }
}

pub fn identity_suite(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<Vec<ResidualReport>, CheckError> {
    let chain = IdentityChain::new(alg, conn, p, mu);
    chain.families().iter().map(|(name, fields)| probe.check(name, fields)).collect()
}

/// Trivial-bundle momentum map: `d mu_a + i_{rho_a} w` and equivariance
/// `rho_a(mu_b) - C^c_{ab} mu_c` over all `a, b`.
pub fn trivial_bundle_reduction(
    alg: &LieAlgebroid,
    w: &PreSymplectic,
    mu: &[Expr],
    probe: &Probe,
) -> Result<[ResidualReport; 2], CheckError> {
    let (r, n) = (alg.rank(), alg.dim());
    let trivial = Connection::trivial(r, n);
    let moment = probe.check("momentum-map", &momentum_symplectic_residuals(alg, &trivial, w, mu))?;
    let mut eq = Vec::new();
    for a in 0..r {
        for b in 0..r {
            let mut acc = alg.act(a, &mu[b]);
            for c in 0..r {
                acc = acc - &alg.c()[a][b][c] * &mu[c];
            }
            eq.push(acc);
        }
    }
    let equiv = probe.check("equivariance", &eq)?;
    Ok([moment, equiv])
}
