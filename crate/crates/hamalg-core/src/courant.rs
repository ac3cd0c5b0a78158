//! Standard Courant algebroid `TM + T*M`, optionally twisted by a 3-form,
//! with Dirac structures represented by pointwise frames.
//!
//! Pairing `<u + a, v + b> = b(u) + a(v)`; Dorfman bracket
//! `[u, v] + L_u b - i_v da + H(u, v, .)`; `D f = df`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{EvalError, Expr};
use crate::geometry::{
    self, apply, exterior_derivative, gradient, lie_bracket, lie_derivative_form, OneForm, PoissonBivector,
    PreSymplectic, VectorField,
};
use crate::manifold::{Chart, CheckError, Probe, ResidualReport};

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSection {
    pub u: VectorField,
    pub alpha: OneForm,
}

impl GeneralizedSection {
    pub fn new(u: VectorField, alpha: OneForm) -> GeneralizedSection {
        GeneralizedSection { u, alpha }
    }

    pub fn zero(n: usize) -> GeneralizedSection {
        GeneralizedSection { u: vec![Expr::zero(); n], alpha: vec![Expr::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn scale(&self, f: &Expr) -> GeneralizedSection {
        GeneralizedSection { u: geometry::scale(f, &self.u), alpha: geometry::scale(f, &self.alpha) }
    }

    pub fn add(&self, o: &GeneralizedSection) -> GeneralizedSection {
        GeneralizedSection { u: geometry::add(&self.u, &o.u), alpha: geometry::add(&self.alpha, &o.alpha) }
    }

    pub fn sub(&self, o: &GeneralizedSection) -> GeneralizedSection {
        GeneralizedSection { u: geometry::sub(&self.u, &o.u), alpha: geometry::sub(&self.alpha, &o.alpha) }
    }

    /// Vector part followed by covector part.
    pub fn components(&self) -> Vec<Expr> {
        self.u.iter().chain(&self.alpha).cloned().collect()
    }
}

pub type ThreeForm = Vec<Vec<Vec<Expr>>>;

#[derive(Clone, Debug, PartialEq)]
pub struct StandardCourant {
    dim: usize,
    h: Option<ThreeForm>,
}

/// Totally antisymmetric 3-form from its `i < j < k` entries.
pub fn skew3_from_upper(h: &ThreeForm) -> ThreeForm {
    let n = h.len();
    let mut out = vec![vec![vec![Expr::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = &h[i][j][k];
                for (p, s) in [
                    ([i, j, k], 1.0),
                    ([j, k, i], 1.0),
                    ([k, i, j], 1.0),
                    ([j, i, k], -1.0),
                    ([i, k, j], -1.0),
                    ([k, j, i], -1.0),
                ] {
                    out[p[0]][p[1]][p[2]] = v.scale(s);
                }
            }
        }
    }
    out
}

/// `(dB)_{ijk} = d_i B_{jk} + d_j B_{ki} + d_k B_{ij}`.
pub fn exterior_derivative_2(b: &[Vec<Expr>]) -> ThreeForm {
    let n = b.len();
    let mut out = vec![vec![vec![Expr::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k {
                    out[i][j][k] = b[j][k].diff(i) + b[k][i].diff(j) + b[i][j].diff(k);
                }
            }
        }
    }
    out
}

/// `d H` components over `i < j < k < l`.
pub fn three_form_closed_residuals(h: &ThreeForm) -> Vec<Expr> {
    let n = h.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    out.push(h[j][k][l].diff(i) - h[i][k][l].diff(j) + h[i][j][l].diff(k) - h[i][j][k].diff(l));
                }
            }
        }
    }
    out
}

impl StandardCourant {
    pub fn new(dim: usize) -> StandardCourant {
        StandardCourant { dim, h: None }
    }

    /// Twist by `h`, canonicalised from its `i < j < k` entries.
    pub fn twisted(h: ThreeForm) -> StandardCourant {
        let dim = h.len();
        StandardCourant { dim, h: Some(skew3_from_upper(&h)) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> Option<&ThreeForm> {
        self.h.as_ref()
    }

    pub fn pairing(&self, s1: &GeneralizedSection, s2: &GeneralizedSection) -> Expr {
        geometry::pair(&s1.u, &s2.alpha) + geometry::pair(&s2.u, &s1.alpha)
    }

    pub fn anchor<'a>(&self, s: &'a GeneralizedSection) -> &'a VectorField {
        &s.u
    }

    pub fn d_map(&self, f: &Expr) -> GeneralizedSection {
        GeneralizedSection { u: vec![Expr::zero(); self.dim], alpha: gradient(f, self.dim) }
    }

    pub fn dorfman(&self, s1: &GeneralizedSection, s2: &GeneralizedSection) -> GeneralizedSection {
        let n = self.dim;
        let u = lie_bracket(&s1.u, &s2.u);
        let lie = lie_derivative_form(&s1.u, &s2.alpha);
        let da = exterior_derivative(&s1.alpha);
        let mut alpha: Vec<Expr> =
            (0..n).map(|j| &lie[j] - (0..n).map(|i| &s2.u[i] * &da[i][j]).sum::<Expr>()).collect();
        if let Some(h) = &self.h {
            for (k, a) in alpha.iter_mut().enumerate() {
                let mut t = Expr::zero();
                for i in 0..n {
                    for j in 0..n {
                        if !h[i][j][k].is_zero() {
                            t = t + &s1.u[i] * &s2.u[j] * &h[i][j][k];
                        }
                    }
                }
                *a = &*a + t;
            }
        }
        GeneralizedSection { u, alpha }
    }
}

/// Random polynomial of total degree at most `degree` with coefficients in `[-1, 1]`.
pub fn random_polynomial(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> Expr {
    let mut monomials: Vec<Vec<u32>> = vec![vec![0; n]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &monomials {
            for i in 0..n {
                let mut m2 = m.clone();
                m2[i] += 1;
                if !monomials.contains(&m2) && !next.contains(&m2) {
                    next.push(m2);
                }
            }
        }
        monomials.extend(next);
    }
    let mut acc = Expr::zero();
    for m in monomials {
        let c = ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
        let mut term = Expr::num(c);
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                term = term * Expr::var(i).pow(e as i32);
            }
        }
        acc = acc + term;
    }
    acc
}

pub fn random_section(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> GeneralizedSection {
    GeneralizedSection {
        u: (0..n).map(|_| random_polynomial(n, degree, rng)).collect(),
        alpha: (0..n).map(|_| random_polynomial(n, degree, rng)).collect(),
    }
}

/// Random polynomial 2-form, antisymmetric.
pub fn random_two_form(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> Vec<Vec<Expr>> {
    let mut b = geometry::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let p = random_polynomial(n, degree, rng);
            b[j][i] = -&p;
            b[i][j] = p;
        }
    }
    b
}

/// Sections used by [`check_courant_axioms`].
#[derive(Clone, Debug)]
pub struct SectionSamples {
    pub triples: Vec<[GeneralizedSection; 3]>,
    pub functions: Vec<Expr>,
}

impl SectionSamples {
    pub fn random(n: usize, triples: usize, seed: u64) -> SectionSamples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples = (0..triples)
            .map(|_| [random_section(n, 2, &mut rng), random_section(n, 2, &mut rng), random_section(n, 2, &mut rng)])
            .collect::<Vec<_>>();
        let functions = (0..triples.len()).map(|_| random_polynomial(n, 2, &mut rng)).collect();
        SectionSamples { triples, functions }
    }
}

pub const COURANT_AXIOMS: [&str; 5] =
    ["courant-jacobi", "courant-anchor", "courant-leibniz", "courant-symmetric-part", "courant-invariance"];

/// One report per axiom, in the order of [`COURANT_AXIOMS`].
pub fn check_courant_axioms(
    e: &StandardCourant,
    samples: &SectionSamples,
    probe: &Probe,
) -> Result<Vec<ResidualReport>, CheckError> {
    let mut fields: [Vec<Expr>; 5] = Default::default();
    for (t, f) in samples.triples.iter().zip(&samples.functions) {
        let [e1, e2, e3] = t;
        let b12 = e.dorfman(e1, e2);
        let b13 = e.dorfman(e1, e3);
        let b23 = e.dorfman(e2, e3);
        let lhs = e.dorfman(e1, &b23);
        let rhs = e.dorfman(&b12, e3).add(&e.dorfman(e2, &b13));
        fields[0].extend(lhs.sub(&rhs).components());

        fields[1].extend(geometry::sub(&b12.u, &lie_bracket(&e1.u, &e2.u)));

        let left = e.dorfman(e1, &e2.scale(f));
        let right = b12.scale(f).add(&e2.scale(&apply(&e1.u, f)));
        fields[2].extend(left.sub(&right).components());

        let ee = e.dorfman(e1, e1);
        let half = e.d_map(&e.pairing(e1, e1)).scale(&Expr::num(0.5));
        fields[3].extend(ee.sub(&half).components());

        let inv = apply(&e1.u, &e.pairing(e2, e3)) - e.pairing(&b12, e3) - e.pairing(e2, &b13);
        fields[4].push(inv);
    }
    COURANT_AXIOMS.iter().zip(fields.iter()).map(|(name, f)| probe.check(name, f)).collect()
}

/// A frame of `n` generalized sections spanning a candidate Dirac structure.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracFrame {
    pub sections: Vec<GeneralizedSection>,
}

impl DiracFrame {
    /// `d_i + w_flat(d_i)`.
    pub fn graph_omega(w: &PreSymplectic) -> DiracFrame {
        let n = w.dim();
        let sections = (0..n)
            .map(|i| {
                let u: Vec<Expr> = (0..n).map(|k| if k == i { Expr::one() } else { Expr::zero() }).collect();
                let alpha = w.flat(&u);
                GeneralizedSection { u, alpha }
            })
            .collect();
        DiracFrame { sections }
    }

    /// `-pi#(dx^k) + dx^k`.
    pub fn graph_pi(p: &PoissonBivector) -> DiracFrame {
        let n = p.dim();
        let sections = (0..n)
            .map(|k| {
                let alpha: Vec<Expr> = (0..n).map(|j| if j == k { Expr::one() } else { Expr::zero() }).collect();
                let u = p.sharp(&alpha).iter().map(|x| -x).collect();
                GeneralizedSection { u, alpha }
            })
            .collect();
        DiracFrame { sections }
    }

    pub fn dim(&self) -> usize {
        self.sections.first().map_or(0, |s| s.dim())
    }

    /// Columns are the frame sections, rows are `(u, alpha)` components.
    pub fn matrix_at(&self, point: &[f64]) -> Result<DMatrix<f64>, EvalError> {
        let n = self.dim();
        let mut m = DMatrix::zeros(2 * n, self.sections.len());
        for (c, s) in self.sections.iter().enumerate() {
            for (r, e) in s.components().iter().enumerate() {
                m[(r, c)] = e.eval(point)?;
            }
        }
        Ok(m)
    }
}

/// Least-squares solve; returns `(solution, residual norm, singular values)`.
pub fn least_squares(m: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64, Vec<f64>) {
    let svd = m.clone().svd(true, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    let x = svd.solve(b, 1e-12 * top.max(1.0)).unwrap_or_else(|_| DVector::zeros(m.ncols()));
    let res = (m * &x - b).norm();
    (x, res, sv)
}

fn eval_vec(es: &[Expr], p: &[f64]) -> Result<DVector<f64>, EvalError> {
    let mut v = DVector::zeros(es.len());
    for (i, e) in es.iter().enumerate() {
        v[i] = e.eval(p)?;
    }
    Ok(v)
}

/// Pointwise isotropy and bracket closure of a frame.
pub fn check_dirac(e: &StandardCourant, frame: &DiracFrame, probe: &Probe) -> Result<[ResidualReport; 2], CheckError> {
    let k = frame.sections.len();
    let mut iso = Vec::new();
    let mut brackets = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if j >= i {
                iso.push(e.pairing(&frame.sections[i], &frame.sections[j]));
            }
            brackets.push(e.dorfman(&frame.sections[i], &frame.sections[j]).components());
        }
    }
    let isotropy = probe.check("isotropy", &iso)?;
    let involutive = probe.check_with("involutivity", |p| {
        let m = frame.matrix_at(p).map_err(|err| (0, err))?;
        let mut best = (0.0, 0);
        for (idx, b) in brackets.iter().enumerate() {
            let bv = eval_vec(b, p).map_err(|err| (idx, err))?;
            let (_, res, _) = least_squares(&m, &bv);
            if res > best.0 {
                best = (res, idx);
            }
        }
        Ok(best)
    })?;
    Ok([isotropy, involutive])
}

/// Outcome of the pointwise Dirac-morphism test.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracMorphismReport {
    /// Largest least-squares residual of the defining linear system.
    pub existence: ResidualReport,
    /// Smallest singular value of the system over all samples.
    pub min_singular_value: f64,
    pub uniqueness: Uniqueness,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    Unique,
    NotUnique,
    Indeterminate,
}

pub const EXISTENCE_TOL: f64 = 1e-8;
pub const UNIQUE_CUTOFF: f64 = 1e-8;
pub const DEGENERATE_CUTOFF: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum DiracMorphismError {
    Eval(CheckError),
    OutsideTarget { point: Vec<f64>, image: Vec<f64> },
    Shape(String),
}

impl From<CheckError> for DiracMorphismError {
    fn from(e: CheckError) -> Self {
        DiracMorphismError::Eval(e)
    }
}

/// For every sample `m` and frame vector `v + b` of the target structure at
/// `phi(m)`, solve for `u + a` in the source structure with `dphi(u) = v`
/// and `a = dphi^T b`.
pub fn dirac_morphism_check(
    phi: &[Expr],
    target: &Chart,
    source_frame: &DiracFrame,
    target_frame: &DiracFrame,
    probe: &Probe,
) -> Result<DiracMorphismReport, DiracMorphismError> {
    let n = source_frame.dim();
    let nt = target.dim();
    if phi.len() != nt || target_frame.dim() != nt {
        return Err(DiracMorphismError::Shape("map components must match the target chart".into()));
    }
    let jac: Vec<Vec<Expr>> = phi.iter().map(|f| gradient(f, n)).collect();
    let mut min_sv = f64::INFINITY;
    for p in &probe.points {
        let image = eval_vec(phi, p).map_err(|error| CheckError {
            check: "dirac-morphism".into(),
            point: p.clone(),
            field: 0,
            error,
        })?;
        if !target.contains(image.as_slice()) {
            return Err(DiracMorphismError::OutsideTarget { point: p.clone(), image: image.as_slice().to_vec() });
        }
    }
    let existence = probe.check_with("dirac-morphism-existence", |p| {
        let image: Vec<f64> = eval_vec(phi, p).map_err(|e| (0, e))?.as_slice().to_vec();
        let mut d = DMatrix::zeros(nt, n);
        for k in 0..nt {
            for i in 0..n {
                d[(k, i)] = jac[k][i].eval(p).map_err(|e| (0, e))?;
            }
        }
        let src = source_frame.matrix_at(p).map_err(|e| (0, e))?;
        let fu = src.rows(0, n).into_owned();
        let fa = src.rows(n, n).into_owned();
        let mut sys = DMatrix::zeros(n + nt, src.ncols());
        sys.rows_mut(0, n).copy_from(&fa);
        sys.rows_mut(n, nt).copy_from(&(&d * &fu));
        let tgt = target_frame.matrix_at(&image).map_err(|e| (0, e))?;
        let mut best = (0.0, 0);
        for c in 0..tgt.ncols() {
            let v = tgt.column(c).rows(0, nt).into_owned();
            let beta = tgt.column(c).rows(nt, nt).into_owned();
            let mut rhs = DVector::zeros(n + nt);
            rhs.rows_mut(0, n).copy_from(&(d.transpose() * beta));
            rhs.rows_mut(n, nt).copy_from(&v);
            let (_, res, sv) = least_squares(&sys, &rhs);
            let smallest =
                if sys.nrows() >= sys.ncols() { sv.iter().cloned().fold(f64::INFINITY, f64::min) } else { 0.0 };
            min_sv = min_sv.min(smallest);
            if res > best.0 {
                best = (res, c);
            }
        }
        Ok(best)
    });
    let mut existence = existence?;
    existence.tol = EXISTENCE_TOL;
    existence.pass = existence.max_residual <= EXISTENCE_TOL;
    let uniqueness = if min_sv >= UNIQUE_CUTOFF {
        Uniqueness::Unique
    } else if min_sv <= DEGENERATE_CUTOFF {
        Uniqueness::NotUnique
    } else {
        Uniqueness::Indeterminate
    };
    let pass = existence.pass && uniqueness == Uniqueness::Unique;
    Ok(DiracMorphismReport { existence, min_singular_value: min_sv, uniqueness, pass })
}
