//! Supercommutative polynomials over graded coordinates, the canonical
//! degree -2 brackets on the two phase spaces, their homological functions,
//! derived brackets and the graded form of the momentum Poisson map.
//!
//! Base coordinates `x^i` have degree 0 and live inside the `Expr`
//! coefficients. Every other generator is indexed by the space. A monomial is
//! the ordered product of generators in index order; odd generators appear at
//! most once. The bracket is `sum F d<_a W^{ab} d>_b G` with right and left
//! derivatives and `W^{ab} = {z^a, z^b}` read off the pair table.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::LieAlgebroid;
use crate::connection::{dual_covariant_derivative, Connection};
use crate::courant::random_polynomial;
use crate::expr::Expr;
use crate::geometry::{apply, PoissonBivector};
use crate::manifold::{Chart, CheckError, Probe, ResidualReport};
use crate::morphism::CotangentLine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCoordinate {
    pub name: String,
    pub degree: u32,
}

impl GradedCoordinate {
    pub fn odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Either a base coordinate or a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    Base(usize),
    Gen(usize),
}

/// `{first, second} = sign`; the reverse bracket follows from graded antisymmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjugatePair {
    pub first: Slot,
    pub second: Slot,
    pub sign: f64,
}

/// Powers of the generators, in index order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GradedPolynomial {
    terms: BTreeMap<Monomial, Expr>,
}

impl GradedPolynomial {
    pub fn zero() -> GradedPolynomial {
        GradedPolynomial { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Expr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Structurally zero; use a probe for numerical vanishing.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Expr {
        self.terms.get(m).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn coefficients(&self) -> Vec<Expr> {
        self.terms.values().cloned().collect()
    }

    fn push(&mut self, m: Monomial, c: Expr) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(m, merged);
        }
    }

    pub fn add(&self, o: &GradedPolynomial) -> GradedPolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &GradedPolynomial) -> GradedPolynomial {
        self.add(&o.scale(&Expr::num(-1.0)))
    }

    pub fn scale(&self, f: &Expr) -> GradedPolynomial {
        let mut out = GradedPolynomial::zero();
        for (m, c) in &self.terms {
            out.push(m.clone(), f * c);
        }
        out
    }

    pub fn neg(&self) -> GradedPolynomial {
        self.scale(&Expr::num(-1.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedSpace {
    base: Chart,
    gens: Vec<GradedCoordinate>,
    pairs: Vec<ConjugatePair>,
}

impl GradedSpace {
    pub fn new(base: Chart, gens: Vec<GradedCoordinate>, pairs: Vec<ConjugatePair>) -> GradedSpace {
        GradedSpace { base, gens, pairs }
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn generators(&self) -> &[GradedCoordinate] {
        &self.gens
    }

    pub fn pairs(&self) -> &[ConjugatePair] {
        &self.pairs
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    fn slot_degree(&self, s: Slot) -> u32 {
        match s {
            Slot::Base(_) => 0,
            Slot::Gen(k) => self.gens[k].degree,
        }
    }

    pub fn with_pair_signs(&self, signs: &[f64]) -> GradedSpace {
        let mut out = self.clone();
        for (p, s) in out.pairs.iter_mut().zip(signs) {
            p.sign = *s;
        }
        out
    }

    /// Nonzero entries `W^{ab}`.
    fn table(&self) -> Vec<(Slot, Slot, f64)> {
        let mut t = Vec::new();
        for p in &self.pairs {
            t.push((p.first, p.second, p.sign));
            let (a, b) = (self.slot_degree(p.first), self.slot_degree(p.second));
            let rev = if (a * b) % 2 == 0 { -p.sign } else { p.sign };
            t.push((p.second, p.first, rev));
        }
        t
    }

    pub fn constant(&self, c: Expr) -> GradedPolynomial {
        let mut p = GradedPolynomial::zero();
        p.push(Monomial(vec![0; self.gens.len()]), c);
        p
    }

    pub fn generator(&self, k: usize) -> GradedPolynomial {
        let mut m = vec![0; self.gens.len()];
        m[k] = 1;
        let mut p = GradedPolynomial::zero();
        p.push(Monomial(m), Expr::one());
        p
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.gens).map(|(p, g)| p * g.degree).sum()
    }

    /// `Some(d)` when every term has degree `d`; zero is homogeneous of degree 0.
    pub fn degree(&self, f: &GradedPolynomial) -> Option<u32> {
        let mut it = f.terms.keys().map(|m| self.monomial_degree(m));
        let first = it.next().unwrap_or(0);
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, f64)> {
        let mut inversions = 0usize;
        for (j, &pb) in b.0.iter().enumerate() {
            if pb == 0 || !self.gens[j].odd() {
                continue;
            }
            if a.0[j] > 0 {
                return None;
            }
            inversions += (j + 1..a.0.len()).filter(|&i| a.0[i] > 0 && self.gens[i].odd()).count();
        }
        let m = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        Some((m, if inversions.is_multiple_of(2) { 1.0 } else { -1.0 }))
    }

    pub fn multiply(&self, f: &GradedPolynomial, g: &GradedPolynomial) -> GradedPolynomial {
        let mut out = GradedPolynomial::zero();
        for (ma, ca) in &f.terms {
            for (mb, cb) in &g.terms {
                if let Some((m, s)) = self.multiply_monomials(ma, mb) {
                    out.push(m, (ca * cb).scale(s));
                }
            }
        }
        out
    }

    pub fn product(&self, factors: &[GradedPolynomial]) -> GradedPolynomial {
        factors.iter().fold(self.constant(Expr::one()), |acc, f| self.multiply(&acc, f))
    }

    fn odd_before(&self, m: &Monomial, k: usize) -> usize {
        (0..k).filter(|&i| m.0[i] > 0 && self.gens[i].odd()).count()
    }

    fn odd_after(&self, m: &Monomial, k: usize) -> usize {
        (k + 1..m.0.len()).filter(|&i| m.0[i] > 0 && self.gens[i].odd()).count()
    }

    fn derivative(&self, f: &GradedPolynomial, s: Slot, left: bool) -> GradedPolynomial {
        let mut out = GradedPolynomial::zero();
        for (m, c) in &f.terms {
            match s {
                Slot::Base(i) => out.push(m.clone(), c.diff(i)),
                Slot::Gen(k) => {
                    let p = m.0[k];
                    if p == 0 {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2.0[k] -= 1;
                    let factor = if self.gens[k].odd() {
                        let passes = if left { self.odd_before(m, k) } else { self.odd_after(m, k) };
                        if passes % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    } else {
                        p as f64
                    };
                    out.push(m2, c.scale(factor));
                }
            }
        }
        out
    }

    pub fn left_derivative(&self, f: &GradedPolynomial, s: Slot) -> GradedPolynomial {
        self.derivative(f, s, true)
    }

    pub fn right_derivative(&self, f: &GradedPolynomial, s: Slot) -> GradedPolynomial {
        self.derivative(f, s, false)
    }

    pub fn bracket(&self, f: &GradedPolynomial, g: &GradedPolynomial) -> GradedPolynomial {
        let mut out = GradedPolynomial::zero();
        for (a, b, w) in self.table() {
            let fa = self.right_derivative(f, a);
            if fa.is_zero() {
                continue;
            }
            let gb = self.left_derivative(g, b);
            if gb.is_zero() {
                continue;
            }
            out = out.add(&self.multiply(&fa, &gb).scale(&Expr::num(w)));
        }
        out
    }

    /// Applies a degree-one vector field given by its values on base
    /// coordinates followed by generators: `Q(F) = sum Q^a d>_a F`.
    pub fn apply_field(&self, q: &[GradedPolynomial], f: &GradedPolynomial) -> GradedPolynomial {
        let n = self.base.dim();
        let mut out = GradedPolynomial::zero();
        for (idx, qa) in q.iter().enumerate() {
            if qa.is_zero() {
                continue;
            }
            let s = if idx < n { Slot::Base(idx) } else { Slot::Gen(idx - n) };
            let d = self.left_derivative(f, s);
            if !d.is_zero() {
                out = out.add(&self.multiply(qa, &d));
            }
        }
        out
    }

    /// Coefficients of `Q(Q(z))` for every coordinate `z`.
    pub fn square_residuals(&self, q: &[GradedPolynomial]) -> Vec<Expr> {
        q.iter().flat_map(|qa| self.apply_field(q, qa).coefficients()).collect()
    }

    pub fn display(&self, f: &GradedPolynomial) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let names = self.base.names();
        let mut parts = Vec::new();
        for (m, c) in &f.terms {
            let mut s = alloc::format!("({})", c.display(names));
            for (k, &p) in m.0.iter().enumerate() {
                for _ in 0..p {
                    s.push('*');
                    s.push_str(&self.gens[k].name);
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

fn coord(name: String, degree: u32) -> GradedCoordinate {
    GradedCoordinate { name, degree }
}

fn base_suffix(base: &Chart, i: usize) -> String {
    base.names()[i].clone()
}

/// `(x, xi) : (0, 2)`, `(eta, y) : (1, 1)`, `(s, t) : (1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPhaseSpace {
    pub space: GradedSpace,
    n: usize,
}

impl TangentPhaseSpace {
    pub fn new(base: &Chart) -> TangentPhaseSpace {
        let n = base.dim();
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(coord(alloc::format!("xi_{}", base_suffix(base, i)), 2));
        }
        for i in 0..n {
            gens.push(coord(alloc::format!("eta_{}", base_suffix(base, i)), 1));
        }
        for i in 0..n {
            gens.push(coord(alloc::format!("y_{}", base_suffix(base, i)), 1));
        }
        gens.push(coord("s".into(), 1));
        gens.push(coord("t".into(), 1));
        let mut pairs = Vec::new();
        for i in 0..n {
            pairs.push(ConjugatePair { first: Slot::Base(i), second: Slot::Gen(i), sign: 1.0 });
        }
        for i in 0..n {
            pairs.push(ConjugatePair { first: Slot::Gen(n + i), second: Slot::Gen(2 * n + i), sign: 1.0 });
        }
        pairs.push(ConjugatePair { first: Slot::Gen(3 * n), second: Slot::Gen(3 * n + 1), sign: 1.0 });
        TangentPhaseSpace { space: GradedSpace::new(base.clone(), gens, pairs), n }
    }

    pub fn xi(&self, i: usize) -> usize {
        i
    }
    pub fn eta(&self, i: usize) -> usize {
        self.n + i
    }
    pub fn y(&self, i: usize) -> usize {
        2 * self.n + i
    }
    pub fn s(&self) -> usize {
        3 * self.n
    }
    pub fn t(&self) -> usize {
        3 * self.n + 1
    }

    /// `a_i eta^i + f s`.
    pub fn degree_one(&self, a: &[Expr], f: &Expr) -> GradedPolynomial {
        let sp = &self.space;
        let mut out = sp.generator(self.s()).scale(f);
        for (i, ai) in a.iter().enumerate() {
            out = out.add(&sp.generator(self.eta(i)).scale(ai));
        }
        out
    }

    /// Inverse of [`Self::degree_one`] on polynomials in `eta, s`.
    pub fn split_degree_one(&self, f: &GradedPolynomial) -> (Vec<Expr>, Expr) {
        let sp = &self.space;
        let unit = |k: usize| -> Monomial {
            let mut m = vec![0; sp.gens.len()];
            m[k] = 1;
            Monomial(m)
        };
        let a = (0..self.n).map(|i| f.coefficient(&unit(self.eta(i)))).collect();
        (a, f.coefficient(&unit(self.s())))
    }

    /// `pi^{ij} xi_i y_j - 1/2 d_i pi^{jk} y_j y_k eta^i + 1/2 pi^{jk} y_j y_k s`.
    pub fn theta(&self, p: &PoissonBivector) -> GradedPolynomial {
        self.theta_with_line_sign(p, 1.0)
    }

    /// As [`Self::theta`] with the `s` term multiplied by `sign`.
    pub fn theta_with_line_sign(&self, p: &PoissonBivector, sign: f64) -> GradedPolynomial {
        let sp = &self.space;
        let n = self.n;
        let g = |k: usize| sp.generator(k);
        let mut out = GradedPolynomial::zero();
        for i in 0..n {
            for j in 0..n {
                if p.pi[i][j].is_zero() {
                    continue;
                }
                out = out.add(&sp.product(&[g(self.xi(i)), g(self.y(j))]).scale(&p.pi[i][j]));
                let half = p.pi[i][j].scale(0.5 * sign);
                out = out.add(&sp.product(&[g(self.y(i)), g(self.y(j)), g(self.s())]).scale(&half));
                for l in 0..n {
                    let d = p.pi[i][j].diff(l);
                    if d.is_zero() {
                        continue;
                    }
                    let term = sp.product(&[g(self.y(i)), g(self.y(j)), g(self.eta(l))]);
                    out = out.add(&term.scale(&d.scale(-0.5)));
                }
            }
        }
        out
    }

    /// `{{U, theta}, V}`.
    pub fn derived_bracket(
        &self,
        theta: &GradedPolynomial,
        u: &GradedPolynomial,
        v: &GradedPolynomial,
    ) -> GradedPolynomial {
        let sp = &self.space;
        sp.bracket(&sp.bracket(u, theta), v)
    }
}

/// `(x, xi) : (0, 2)`, `(p, q) : (1, 1)`, `(s, t) : (1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPhaseSpace {
    pub space: GradedSpace,
    n: usize,
    r: usize,
}

impl DualPhaseSpace {
    pub fn new(base: &Chart, rank: usize) -> DualPhaseSpace {
        let (n, r) = (base.dim(), rank);
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(coord(alloc::format!("xi_{}", base_suffix(base, i)), 2));
        }
        for a in 0..r {
            gens.push(coord(alloc::format!("p{}", a + 1), 1));
        }
        for a in 0..r {
            gens.push(coord(alloc::format!("q{}", a + 1), 1));
        }
        gens.push(coord("s".into(), 1));
        gens.push(coord("t".into(), 1));
        let mut pairs = Vec::new();
        for i in 0..n {
            pairs.push(ConjugatePair { first: Slot::Base(i), second: Slot::Gen(i), sign: 1.0 });
        }
        for a in 0..r {
            pairs.push(ConjugatePair { first: Slot::Gen(n + a), second: Slot::Gen(n + r + a), sign: 1.0 });
        }
        pairs.push(ConjugatePair { first: Slot::Gen(n + 2 * r), second: Slot::Gen(n + 2 * r + 1), sign: 1.0 });
        DualPhaseSpace { space: GradedSpace::new(base.clone(), gens, pairs), n, r }
    }

    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn xi(&self, i: usize) -> usize {
        i
    }
    pub fn p(&self, a: usize) -> usize {
        self.n + a
    }
    pub fn q(&self, a: usize) -> usize {
        self.n + self.r + a
    }
    pub fn s(&self) -> usize {
        self.n + 2 * self.r
    }
    pub fn t(&self) -> usize {
        self.n + 2 * self.r + 1
    }

    /// `a^a p_a + f s`.
    pub fn degree_one(&self, a: &[Expr], f: &Expr) -> GradedPolynomial {
        let sp = &self.space;
        let mut out = sp.generator(self.s()).scale(f);
        for (k, ak) in a.iter().enumerate() {
            out = out.add(&sp.generator(self.p(k)).scale(ak));
        }
        out
    }

    pub fn split_degree_one(&self, f: &GradedPolynomial) -> (Vec<Expr>, Expr) {
        let sp = &self.space;
        let unit = |k: usize| -> Monomial {
            let mut m = vec![0; sp.gens.len()];
            m[k] = 1;
            Monomial(m)
        };
        let a = (0..self.r).map(|k| f.coefficient(&unit(self.p(k)))).collect();
        (a, f.coefficient(&unit(self.s())))
    }

    /// `rho^i_a xi_i q^a + 1/2 C^c_{ab} q^a q^b p_c`.
    pub fn theta(&self, alg: &LieAlgebroid) -> GradedPolynomial {
        let sp = &self.space;
        let g = |k: usize| sp.generator(k);
        let mut out = GradedPolynomial::zero();
        for a in 0..self.r {
            for i in 0..self.n {
                let c = &alg.rho()[a][i];
                if !c.is_zero() {
                    out = out.add(&sp.product(&[g(self.xi(i)), g(self.q(a))]).scale(c));
                }
            }
            for b in 0..self.r {
                for c in 0..self.r {
                    let k = &alg.c()[a][b][c];
                    if !k.is_zero() {
                        let term = sp.product(&[g(self.q(a)), g(self.q(b)), g(self.p(c))]);
                        out = out.add(&term.scale(&k.scale(0.5)));
                    }
                }
            }
        }
        out
    }

    /// `-{{F, theta}, G}`.
    pub fn derived_bracket(
        &self,
        theta: &GradedPolynomial,
        f: &GradedPolynomial,
        g: &GradedPolynomial,
    ) -> GradedPolynomial {
        let sp = &self.space;
        sp.bracket(&sp.bracket(f, theta), g).neg()
    }
}

/// Shifted algebroid `A[1]` with odd fibre coordinates `q^a`.
pub fn shifted_algebroid_space(base: &Chart, rank: usize) -> GradedSpace {
    let gens = (0..rank).map(|a| coord(alloc::format!("q{}", a + 1), 1)).collect();
    GradedSpace::new(base.clone(), gens, Vec::new())
}

/// `Q(x^i) = rho^i_a q^a`, `Q(q^c) = -1/2 C^c_{ab} q^a q^b`.
pub fn algebroid_field(alg: &LieAlgebroid) -> (GradedSpace, Vec<GradedPolynomial>) {
    let (n, r) = (alg.dim(), alg.rank());
    let sp = shifted_algebroid_space(alg.chart(), r);
    let mut q = Vec::new();
    for i in 0..n {
        let mut v = GradedPolynomial::zero();
        for a in 0..r {
            v = v.add(&sp.generator(a).scale(&alg.rho()[a][i]));
        }
        q.push(v);
    }
    for c in 0..r {
        let mut v = GradedPolynomial::zero();
        for a in 0..r {
            for b in 0..r {
                let k = &alg.c()[a][b][c];
                if !k.is_zero() {
                    v = v.add(&sp.product(&[sp.generator(a), sp.generator(b)]).scale(&k.scale(-0.5)));
                }
            }
        }
        q.push(v);
    }
    (sp, q)
}

/// `T*[1]M + R[1]` with odd `y_i` and `t`.
pub fn shifted_cotangent_space(base: &Chart) -> GradedSpace {
    let mut gens: Vec<GradedCoordinate> =
        (0..base.dim()).map(|i| coord(alloc::format!("y_{}", base_suffix(base, i)), 1)).collect();
    gens.push(coord("t".into(), 1));
    GradedSpace::new(base.clone(), gens, Vec::new())
}

/// `Q(x^i) = pi^{ij} y_j`, `Q(y_k) = 1/2 d_k pi^{ij} y_i y_j`, `Q(t) = 1/2 pi^{ij} y_i y_j`.
pub fn poisson_field(chart: &Chart, p: &PoissonBivector) -> (GradedSpace, Vec<GradedPolynomial>) {
    let n = chart.dim();
    let sp = shifted_cotangent_space(chart);
    let yy = |i: usize, j: usize| sp.product(&[sp.generator(i), sp.generator(j)]);
    let mut q = Vec::new();
    for i in 0..n {
        let mut v = GradedPolynomial::zero();
        for j in 0..n {
            v = v.add(&sp.generator(j).scale(&p.pi[i][j]));
        }
        q.push(v);
    }
    for k in 0..n {
        let mut v = GradedPolynomial::zero();
        for i in 0..n {
            for j in 0..n {
                v = v.add(&yy(i, j).scale(&p.pi[i][j].diff(k).scale(0.5)));
            }
        }
        q.push(v);
    }
    let mut v = GradedPolynomial::zero();
    for i in 0..n {
        for j in 0..n {
            v = v.add(&yy(i, j).scale(&p.pi[i][j].scale(0.5)));
        }
    }
    q.push(v);
    (sp, q)
}

pub fn check_field_square(
    name: &str,
    sp: &GradedSpace,
    q: &[GradedPolynomial],
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check(name, &sp.square_residuals(q))
}

/// Every coefficient of `{theta, theta}`.
pub fn master_equation_check(
    name: &str,
    sp: &GradedSpace,
    theta: &GradedPolynomial,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    probe.check(name, &sp.bracket(theta, theta).coefficients())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SubstitutionError {
    /// The polynomial contains a generator outside `p` and `s`.
    Generator(String),
}

impl core::fmt::Display for SubstitutionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SubstitutionError::Generator(g) => write!(f, "cannot substitute generator {}", g),
        }
    }
}

/// `p_a -> -nabla_i mu_a eta^i + mu_a s`, `s -> s`.
pub fn momentum_substitution(
    m: &TangentPhaseSpace,
    d: &DualPhaseSpace,
    conn: &Connection,
    mu: &[Expr],
    f: &GradedPolynomial,
) -> Result<GradedPolynomial, SubstitutionError> {
    let n = m.n;
    let nm = dual_covariant_derivative(conn, mu, n);
    let images: Vec<GradedPolynomial> = (0..d.r)
        .map(|a| {
            let col: Vec<Expr> = (0..n).map(|i| -&nm[i][a]).collect();
            m.degree_one(&col, &mu[a])
        })
        .collect();
    let s_img = m.space.generator(m.s());
    let mut out = GradedPolynomial::zero();
    for (mono, c) in f.terms() {
        let mut factors = Vec::new();
        for (k, &pw) in mono.0.iter().enumerate() {
            if pw == 0 {
                continue;
            }
            let img = if k >= d.p(0) && k < d.p(0) + d.r {
                images[k - d.p(0)].clone()
            } else if k == d.s() {
                s_img.clone()
            } else {
                return Err(SubstitutionError::Generator(d.space.gens[k].name.clone()));
            };
            for _ in 0..pw {
                factors.push(img.clone());
            }
        }
        out = out.add(&m.space.product(&factors).scale(c));
    }
    Ok(out)
}

/// Base monomials of total degree `<= 2` times square-free `p` monomials of
/// degree `<= 2`.
pub fn low_degree_family(d: &DualPhaseSpace) -> Vec<GradedPolynomial> {
    let n = d.n;
    let mut xs = vec![Expr::one()];
    for i in 0..n {
        xs.push(Expr::var(i));
        for j in i..n {
            xs.push(Expr::var(i) * Expr::var(j));
        }
    }
    let sp = &d.space;
    let mut ps = vec![sp.constant(Expr::one())];
    for a in 0..d.r {
        ps.push(sp.generator(d.p(a)));
        for b in a + 1..d.r {
            ps.push(sp.multiply(&sp.generator(d.p(a)), &sp.generator(d.p(b))));
        }
    }
    let mut out = Vec::new();
    for x in &xs {
        for p in &ps {
            out.push(p.scale(x));
        }
    }
    out
}

/// Coefficients of `Phi({F, G}_N) - {Phi F, Phi G}_M` over all pairs of the
/// family, where `Phi` is the momentum substitution.
pub fn momentum_poisson_map_check(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    family: Option<&[GradedPolynomial]>,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    let m = TangentPhaseSpace::new(alg.chart());
    let d = DualPhaseSpace::new(alg.chart(), alg.rank());
    let tm = m.theta(p);
    let tn = d.theta(alg);
    let default;
    let fam = match family {
        Some(f) => f,
        None => {
            default = low_degree_family(&d);
            &default
        }
    };
    let phi = |f: &GradedPolynomial| momentum_substitution(&m, &d, conn, mu, f).expect("family lives in x and p");
    let images: Vec<GradedPolynomial> = fam.iter().map(&phi).collect();
    let mut fields = Vec::new();
    for i in 0..fam.len() {
        for j in i..fam.len() {
            let lhs = phi(&d.derived_bracket(&tn, &fam[i], &fam[j]));
            let rhs = m.derived_bracket(&tm, &images[i], &images[j]);
            fields.extend(lhs.sub(&rhs).coefficients());
        }
    }
    probe.check("graded-momentum-map", &fields)
}

/// Random sections `(a, f), (b, g)` with polynomial coefficients of degree <= 2.
fn random_pairs(n: usize, len: usize, count: usize, seed: u64) -> Vec<[(Vec<Expr>, Expr); 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = |rng: &mut ChaCha8Rng| -> (Vec<Expr>, Expr) {
        ((0..len).map(|_| random_polynomial(n, 2, rng)).collect(), random_polynomial(n, 2, rng))
    };
    (0..count).map(|_| [one(&mut rng), one(&mut rng)]).collect()
}

/// The derived bracket built from `theta_with_line_sign(p, sign)` on
/// `a eta + f s` agrees with the `T*M + R` bracket with cocycle `-sign`.
pub fn tangent_reproduction_check(
    p: &PoissonBivector,
    sign: f64,
    count: usize,
    seed: u64,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    let chart = probe_chart(p.dim());
    let m = TangentPhaseSpace::new(&chart);
    let theta = m.theta_with_line_sign(p, sign);
    let line = CotangentLine { p: p.clone(), cocycle: -sign };
    let mut fields = Vec::new();
    for [(a, f), (b, g)] in random_pairs(p.dim(), p.dim(), count, seed) {
        let out = m.derived_bracket(&theta, &m.degree_one(&a, &f), &m.degree_one(&b, &g));
        let (form, scalar) = line.bracket_pair(&a, &f, &b, &g);
        let expected = m.degree_one(&form, &scalar);
        fields.extend(out.sub(&expected).coefficients());
    }
    probe.check("graded-tangent-reproduction", &fields)
}

/// The derived bracket on `a^a p_a + f s` agrees with
/// `[a, b]_A + (rho(a) g - rho(b) f) s`.
pub fn dual_reproduction_check(
    alg: &LieAlgebroid,
    count: usize,
    seed: u64,
    probe: &Probe,
) -> Result<ResidualReport, CheckError> {
    let d = DualPhaseSpace::new(alg.chart(), alg.rank());
    let theta = d.theta(alg);
    let mut fields = Vec::new();
    for [(a, f), (b, g)] in random_pairs(alg.dim(), alg.rank(), count, seed) {
        let out = d.derived_bracket(&theta, &d.degree_one(&a, &f), &d.degree_one(&b, &g));
        let scalar = apply(&alg.anchor(&a), &g) - apply(&alg.anchor(&b), &f);
        let expected = d.degree_one(&alg.bracket(&a, &b), &scalar);
        fields.extend(out.sub(&expected).coefficients());
    }
    probe.check("graded-dual-reproduction", &fields)
}

fn probe_chart(n: usize) -> Chart {
    let names: Vec<String> = (0..n).map(|i| alloc::format!("x{}", i + 1)).collect();
    Chart::cube(&names, 1.0).expect("generated names are distinct")
}

/// Random monomial of degree at most `max_degree` with a random polynomial
/// coefficient of degree <= 2 in the base coordinates.
pub fn random_monomial(sp: &GradedSpace, max_degree: u32, rng: &mut ChaCha8Rng) -> GradedPolynomial {
    let k = sp.gens.len();
    let target = rng.next_u32() % (max_degree + 1);
    let mut powers = vec![0u32; k];
    let mut deg = 0;
    for _ in 0..4 * (target as usize + 1) {
        let j = (rng.next_u32() as usize) % k;
        let g = &sp.gens[j];
        if deg + g.degree > target || (g.odd() && powers[j] > 0) {
            continue;
        }
        powers[j] += 1;
        deg += g.degree;
        if deg == target {
            break;
        }
    }
    let c = random_polynomial(sp.base.dim(), 2, rng);
    let mut p = GradedPolynomial::zero();
    p.push(Monomial(powers), c);
    p
}

fn koszul_sign(a: u32, b: u32) -> f64 {
    if (a * b).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `{F, G} + (-1)^{|F||G|} {G, F}` for homogeneous inputs.
pub fn antisymmetry_residual(sp: &GradedSpace, f: &GradedPolynomial, g: &GradedPolynomial) -> GradedPolynomial {
    let (df, dg) = (sp.degree(f).unwrap_or(0), sp.degree(g).unwrap_or(0));
    sp.bracket(f, g).add(&sp.bracket(g, f).scale(&Expr::num(koszul_sign(df, dg))))
}

/// `{F, {G, H}} - {{F, G}, H} - (-1)^{|F||G|} {G, {F, H}}` for homogeneous inputs.
pub fn jacobi_residual(
    sp: &GradedSpace,
    f: &GradedPolynomial,
    g: &GradedPolynomial,
    h: &GradedPolynomial,
) -> GradedPolynomial {
    let (df, dg) = (sp.degree(f).unwrap_or(0), sp.degree(g).unwrap_or(0));
    let lhs = sp.bracket(f, &sp.bracket(g, h));
    let a = sp.bracket(&sp.bracket(f, g), h);
    let b = sp.bracket(g, &sp.bracket(f, h)).scale(&Expr::num(koszul_sign(df, dg)));
    lhs.sub(&a).sub(&b)
}

/// Graded Jacobi and antisymmetry over `triples` random monomial triples of
/// degree <= 3.
pub fn graded_identity_check(
    sp: &GradedSpace,
    triples: usize,
    seed: u64,
    probe: &Probe,
) -> Result<[ResidualReport; 2], CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jac = Vec::new();
    let mut anti = Vec::new();
    for _ in 0..triples {
        let f = random_monomial(sp, 3, &mut rng);
        let g = random_monomial(sp, 3, &mut rng);
        let h = random_monomial(sp, 3, &mut rng);
        jac.extend(jacobi_residual(sp, &f, &g, &h).coefficients());
        anti.extend(antisymmetry_residual(sp, &f, &g).coefficients());
    }
    Ok([probe.check("graded-jacobi", &jac)?, probe.check("graded-antisymmetry", &anti)?])
}
