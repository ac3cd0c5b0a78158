//! Anchored brackets on section pairs, Lie algebroid morphism checks, the
//! comomentum morphisms, fibrewise-linear Poisson structures and Poisson maps.
//!
//! Pair brackets:
//! - `TM + R` twisted by `w`: `[(u,f),(v,g)] = ([u,v], u(g) - v(f) - w(u,v))`,
//!   anchor `(u, f) -> u`.
//! - `T*M + R` over `pi`: `[(a,f),(b,g)] = ([a,b]_pi, -<pi# a, dg> + <pi# b, df> + c pi(a, b))`,
//!   anchor `(a, f) -> -pi# a`. Any constant `c` gives a Lie algebroid when
//!   `pi` is Poisson; `c = 1` is the one the comomentum morphism needs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebroid::LieAlgebroid;
use crate::connection::{dual_covariant_derivative, Connection};
use crate::courant::{dirac_morphism_check, DiracFrame, DiracMorphismError, DiracMorphismReport, StandardCourant};
use crate::expr::{EvalError, Expr};
use crate::geometry::{self, apply, gradient, lie_bracket, Matrix, PoissonBivector, PreSymplectic};
use crate::manifold::{Chart, ChartError, CheckError, Probe, ResidualReport, SamplePlan};

/// A bracket and anchor on flat component vectors, `C^inf`-linear in the
/// componentwise sense.
pub trait AnchoredBracket {
    fn bracket(&self, s1: &[Expr], s2: &[Expr]) -> Vec<Expr>;
    fn anchor(&self, s: &[Expr]) -> Vec<Expr>;
}

impl AnchoredBracket for LieAlgebroid {
    fn bracket(&self, s1: &[Expr], s2: &[Expr]) -> Vec<Expr> {
        LieAlgebroid::bracket(self, s1, s2)
    }
    fn anchor(&self, s: &[Expr]) -> Vec<Expr> {
        LieAlgebroid::anchor(self, s)
    }
}

/// `TM + R` twisted by a 2-form. Sections are `u ++ [f]`.
#[derive(Clone, Debug)]
pub struct TangentLine {
    pub w: PreSymplectic,
}

impl TangentLine {
    pub fn bracket_pair(&self, u: &[Expr], f: &Expr, v: &[Expr], g: &Expr) -> (Vec<Expr>, Expr) {
        (lie_bracket(u, v), apply(u, g) - apply(v, f) - self.w.eval(u, v))
    }
}

impl AnchoredBracket for TangentLine {
    fn bracket(&self, s1: &[Expr], s2: &[Expr]) -> Vec<Expr> {
        let n = self.w.dim();
        let (mut u, f) = self.bracket_pair(&s1[..n], &s1[n], &s2[..n], &s2[n]);
        u.push(f);
        u
    }
    fn anchor(&self, s: &[Expr]) -> Vec<Expr> {
        s[..self.w.dim()].to_vec()
    }
}

/// `T*M + R` over a bivector. Sections are `a ++ [f]`.
#[derive(Clone, Debug)]
pub struct CotangentLine {
    pub p: PoissonBivector,
    pub cocycle: f64,
}

impl CotangentLine {
    pub fn new(p: PoissonBivector) -> CotangentLine {
        CotangentLine { p, cocycle: 1.0 }
    }

    pub fn bracket_pair(&self, a: &[Expr], f: &Expr, b: &[Expr], g: &Expr) -> (Vec<Expr>, Expr) {
        let n = self.p.dim();
        let form = self.p.koszul(a, b);
        let pa = self.p.sharp(a);
        let pb = self.p.sharp(b);
        let scalar = geometry::pair(&pb, &gradient(f, n)) - geometry::pair(&pa, &gradient(g, n))
            + self.p.eval(a, b).scale(self.cocycle);
        (form, scalar)
    }
}

impl AnchoredBracket for CotangentLine {
    fn bracket(&self, s1: &[Expr], s2: &[Expr]) -> Vec<Expr> {
        let n = self.p.dim();
        let (mut a, f) = self.bracket_pair(&s1[..n], &s1[n], &s2[..n], &s2[n]);
        a.push(f);
        a
    }
    fn anchor(&self, s: &[Expr]) -> Vec<Expr> {
        self.p.sharp(&s[..self.p.dim()]).iter().map(|x| -x).collect()
    }
}

/// Koszul bracket on one-forms with anchor `-pi#`.
#[derive(Clone, Debug)]
pub struct Koszul {
    pub p: PoissonBivector,
}

impl AnchoredBracket for Koszul {
    fn bracket(&self, s1: &[Expr], s2: &[Expr]) -> Vec<Expr> {
        self.p.koszul(s1, s2)
    }
    fn anchor(&self, s: &[Expr]) -> Vec<Expr> {
        self.p.sharp(s).iter().map(|x| -x).collect()
    }
}

/// Dorfman bracket restricted to sections `u ++ a`.
#[derive(Clone, Debug)]
pub struct Dorfman {
    pub e: StandardCourant,
}

impl AnchoredBracket for Dorfman {
    fn bracket(&self, s1: &[Expr], s2: &[Expr]) -> Vec<Expr> {
        let n = self.e.dim();
        let a = crate::courant::GeneralizedSection::new(s1[..n].to_vec(), s1[n..].to_vec());
        let b = crate::courant::GeneralizedSection::new(s2[..n].to_vec(), s2[n..].to_vec());
        self.e.dorfman(&a, &b).components()
    }
    fn anchor(&self, s: &[Expr]) -> Vec<Expr> {
        s[..self.e.dim()].to_vec()
    }
}

/// `[s1,[s2,s3]] + [s2,[s3,s1]] + [s3,[s1,s2]]`.
pub fn jacobiator<T: AnchoredBracket>(t: &T, s1: &[Expr], s2: &[Expr], s3: &[Expr]) -> Vec<Expr> {
    let a = t.bracket(s1, &t.bracket(s2, s3));
    let b = t.bracket(s2, &t.bracket(s3, s1));
    let c = t.bracket(s3, &t.bracket(s1, s2));
    a.iter().zip(&b).zip(&c).map(|((x, y), z)| x + y + z).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphismReport {
    pub bracket: ResidualReport,
    pub anchor: ResidualReport,
    pub membership: Option<ResidualReport>,
    pub pass: bool,
}

impl MorphismReport {
    pub fn reports(&self) -> Vec<&ResidualReport> {
        let mut v = vec![&self.bracket, &self.anchor];
        if let Some(m) = &self.membership {
            v.push(m);
        }
        v
    }
}

/// Bracket and anchor compatibility of `e_a -> images[a]`, extended
/// `C^inf`-linearly; frame sections suffice by the Leibniz rule once anchors agree.
pub fn lie_algebroid_morphism_check<T: AnchoredBracket>(
    source: &LieAlgebroid,
    target: &T,
    images: &[Vec<Expr>],
    probe: &Probe,
    name: &str,
) -> Result<MorphismReport, CheckError> {
    let r = source.rank();
    let mut br = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            let tb = target.bracket(&images[a], &images[b]);
            for (k, t) in tb.iter().enumerate() {
                let lhs: Expr = (0..r).map(|c| &source.c()[a][b][c] * &images[c][k]).sum();
                br.push(lhs - t);
            }
        }
    }
    let mut an = Vec::new();
    for a in 0..r {
        an.extend(geometry::sub(&target.anchor(&images[a]), &source.rho()[a]));
    }
    let bracket = probe.check(&alloc::format!("{}-bracket", name), &br)?;
    let anchor = probe.check(&alloc::format!("{}-anchor", name), &an)?;
    let pass = bracket.pass && anchor.pass;
    Ok(MorphismReport { bracket, anchor, membership: None, pass })
}

fn nabla_columns(alg: &LieAlgebroid, conn: &Connection, mu: &[Expr]) -> Vec<Vec<Expr>> {
    let n = alg.dim();
    let nm = dual_covariant_derivative(conn, mu, n);
    (0..alg.rank()).map(|a| (0..n).map(|j| nm[j][a].clone()).collect()).collect()
}

/// `rho + mu*: A -> TM + R`; agrees with the symplectic bracket
/// compatibility condition whenever the algebroid axioms hold.
pub fn check_anchor_comomentum_morphism(
    alg: &LieAlgebroid,
    w: &PreSymplectic,
    mu: &[Expr],
    probe: &Probe,
) -> Result<MorphismReport, CheckError> {
    let images: Vec<Vec<Expr>> = (0..alg.rank())
        .map(|a| {
            let mut s = alg.rho()[a].clone();
            s.push(mu[a].clone());
            s
        })
        .collect();
    lie_algebroid_morphism_check(alg, &TangentLine { w: w.clone() }, &images, probe, "anchor-comomentum")
}

fn graph_images(alg: &LieAlgebroid, conn: &Connection, mu: &[Expr]) -> Vec<Vec<Expr>> {
    let cols = nabla_columns(alg, conn, mu);
    (0..alg.rank())
        .map(|a| {
            let mut s = alg.rho()[a].clone();
            s.extend(cols[a].iter().map(|x| -x));
            s
        })
        .collect()
}

/// `rho - (nabla mu)*: A -> L_w`, with membership `-nabla mu_a = w_flat(rho_a)`.
pub fn check_presymplectic_graph_morphism(
    alg: &LieAlgebroid,
    conn: &Connection,
    w: &PreSymplectic,
    mu: &[Expr],
    probe: &Probe,
) -> Result<MorphismReport, CheckError> {
    let n = alg.dim();
    let images = graph_images(alg, conn, mu);
    let mut member = Vec::new();
    for img in &images {
        member.extend(geometry::sub(&img[n..], &w.flat(&img[..n])));
    }
    let membership = probe.check("presymplectic-graph-membership", &member)?;
    let mut rep = lie_algebroid_morphism_check(
        alg,
        &Dorfman { e: StandardCourant::new(n) },
        &images,
        probe,
        "presymplectic-graph",
    )?;
    rep.pass = rep.pass && membership.pass;
    rep.membership = Some(membership);
    Ok(rep)
}

/// `rho - (nabla mu)*: A -> L_pi`, with membership `rho_a = pi#(nabla mu_a)`.
pub fn check_poisson_graph_morphism(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<MorphismReport, CheckError> {
    let n = alg.dim();
    let images = graph_images(alg, conn, mu);
    let mut member = Vec::new();
    for img in &images {
        member.extend(geometry::add(&img[..n], &p.sharp(&img[n..])));
    }
    let membership = probe.check("poisson-graph-membership", &member)?;
    let mut rep =
        lie_algebroid_morphism_check(alg, &Dorfman { e: StandardCourant::new(n) }, &images, probe, "poisson-graph")?;
    rep.pass = rep.pass && membership.pass;
    rep.membership = Some(membership);
    Ok(rep)
}

/// `-(nabla mu)* + mu*: A -> T*M + R`.
pub fn check_covector_comomentum_morphism(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<MorphismReport, CheckError> {
    let cols = nabla_columns(alg, conn, mu);
    let images: Vec<Vec<Expr>> = (0..alg.rank())
        .map(|a| {
            let mut s: Vec<Expr> = cols[a].iter().map(|x| -x).collect();
            s.push(mu[a].clone());
            s
        })
        .collect();
    lie_algebroid_morphism_check(alg, &CotangentLine::new(p.clone()), &images, probe, "covector-comomentum")
}

/// `-(nabla mu)*: A -> T*M` with the Koszul bracket.
pub fn check_covector_morphism(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    probe: &Probe,
) -> Result<MorphismReport, CheckError> {
    let cols = nabla_columns(alg, conn, mu);
    let images: Vec<Vec<Expr>> = cols.iter().map(|c| c.iter().map(|x| -x).collect()).collect();
    lie_algebroid_morphism_check(alg, &Koszul { p: p.clone() }, &images, probe, "covector")
}

/// Fibrewise-linear Poisson structure on the dual bundle.
#[derive(Clone, Debug)]
pub struct FiberwiseLinearPoisson {
    /// Base coordinates followed by fibre coordinates.
    pub chart: Chart,
    pub base_dim: usize,
    pub bivector: PoissonBivector,
}

fn fibre_names(base: &Chart, stem: &str, r: usize) -> Vec<String> {
    let mut prefix = String::from(stem);
    loop {
        let names: Vec<String> = (0..r).map(|a| alloc::format!("{}{}", prefix, a + 1)).collect();
        if names.iter().all(|n| !base.names().contains(n)) {
            return names;
        }
        prefix.push('_');
    }
}

/// `{p_a, x^i} = rho^i_a`, `{p_a, p_b} = C^c_{ab} p_c`, `{x^i, x^j} = 0`.
pub fn dual_poisson(
    alg: &LieAlgebroid,
    fibre_box: (f64, f64),
    stem: &str,
) -> Result<FiberwiseLinearPoisson, ChartError> {
    let (r, n) = (alg.rank(), alg.dim());
    let names = fibre_names(alg.chart(), stem, r);
    let fibre = Chart::new(&names, &vec![fibre_box; r])?;
    let chart = alg.chart().product(&fibre)?;
    let mut m = geometry::zeros(n + r);
    for a in 0..r {
        for i in 0..n {
            m[i][n + a] = -&alg.rho()[a][i];
        }
        for b in a + 1..r {
            m[n + a][n + b] = (0..r).map(|c| &alg.c()[a][b][c] * Expr::var(n + c)).sum();
        }
    }
    Ok(FiberwiseLinearPoisson { chart, base_dim: n, bivector: PoissonBivector::new(m) })
}

/// Fibrewise-linear structure on `TM` dual to the cotangent algebroid.
pub fn tangent_lift_poisson(
    chart: &Chart,
    p: &PoissonBivector,
    fibre_box: (f64, f64),
) -> Result<FiberwiseLinearPoisson, ChartError> {
    dual_poisson(&LieAlgebroid::cotangent_unchecked(chart.clone(), p), fibre_box, "v")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    pub target: Chart,
    pub components: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapError {
    Eval(CheckError),
    OutsideTarget { point: Vec<f64>, image: Vec<f64> },
    Shape(String),
}

impl From<CheckError> for MapError {
    fn from(e: CheckError) -> Self {
        MapError::Eval(e)
    }
}

impl From<DiracMorphismError> for MapError {
    fn from(e: DiracMorphismError) -> Self {
        match e {
            DiracMorphismError::Eval(c) => MapError::Eval(c),
            DiracMorphismError::OutsideTarget { point, image } => MapError::OutsideTarget { point, image },
            DiracMorphismError::Shape(s) => MapError::Shape(s),
        }
    }
}

impl core::fmt::Display for MapError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MapError::Eval(e) => write!(f, "{}", e),
            MapError::OutsideTarget { point, image } => {
                write!(f, "sample {:?} maps to {:?}, outside the target box", point, image)
            }
            MapError::Shape(s) => write!(f, "{}", s),
        }
    }
}

fn ensure_inside(phi: &SmoothMap, probe: &Probe) -> Result<(), MapError> {
    for p in &probe.points {
        let mut image = Vec::with_capacity(phi.components.len());
        for c in &phi.components {
            let v = c.eval(p).map_err(|error: EvalError| CheckError {
                check: "map".into(),
                point: p.clone(),
                field: 0,
                error,
            })?;
            image.push(v);
        }
        if !phi.target.contains(&image) {
            return Err(MapError::OutsideTarget { point: p.clone(), image });
        }
    }
    Ok(())
}

/// `pi_2^{kl}(phi(m)) - d_i phi^k pi_1^{ij} d_j phi^l`.
pub fn poisson_map_check(
    phi: &SmoothMap,
    source: &PoissonBivector,
    target: &PoissonBivector,
    probe: &Probe,
) -> Result<ResidualReport, MapError> {
    let n = source.dim();
    let m = phi.components.len();
    if target.dim() != m || phi.target.dim() != m {
        return Err(MapError::Shape("map components must match the target bivector".into()));
    }
    ensure_inside(phi, probe)?;
    let grads: Vec<Vec<Expr>> = phi.components.iter().map(|f| gradient(f, n)).collect();
    let mut fields = Vec::new();
    for k in 0..m {
        for l in k + 1..m {
            let pulled = target.pi[k][l].substitute(&phi.components);
            fields.push(pulled - source.eval(&grads[k], &grads[l]));
        }
    }
    Ok(probe.check("poisson-map", &fields)?)
}

/// Source `TM` with the tangent lift, target `A*` with its linear structure,
/// and the map `(x, v) -> (x, -nabla_i mu_a v^i)`.
pub struct MomentumMapSetting {
    pub source: FiberwiseLinearPoisson,
    pub target: FiberwiseLinearPoisson,
    pub map: SmoothMap,
}

pub fn momentum_poisson_map(
    alg: &LieAlgebroid,
    conn: &Connection,
    p: &PoissonBivector,
    mu: &[Expr],
    v_box: (f64, f64),
    p_box: (f64, f64),
) -> Result<MomentumMapSetting, ChartError> {
    let n = alg.dim();
    let source = tangent_lift_poisson(alg.chart(), p, v_box)?;
    let target = dual_poisson(alg, p_box, "p")?;
    let nm = dual_covariant_derivative(conn, mu, n);
    let mut components: Vec<Expr> = (0..n).map(Expr::var).collect();
    for a in 0..alg.rank() {
        components.push(-(0..n).map(|i| &nm[i][a] * Expr::var(n + i)).sum::<Expr>());
    }
    let map = SmoothMap { target: target.chart.clone(), components };
    Ok(MomentumMapSetting { source, target, map })
}

/// Verdicts of a morphism check and of the corresponding Poisson-map check.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub first: bool,
    pub second: bool,
    pub reports: Vec<ResidualReport>,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.first == self.second
    }
}

/// `phi[a][b]` is the `e'_b` component of `phi(e_a)`. Compares the morphism
/// check against the Poisson-map check for the dual map
/// `(x, q) -> (x, p_a = phi[a][b] q_b)` from `A2*` to `A1*`.
pub fn bundle_map_cross_check(
    phi: &Matrix,
    a1: &LieAlgebroid,
    a2: &LieAlgebroid,
    plan: &SamplePlan,
    tol: f64,
    fibre_box: (f64, f64),
) -> Result<CrossCheck, MapError> {
    let base_probe = Probe::new(a1.chart(), plan, tol);
    let morph = lie_algebroid_morphism_check(a1, a2, phi, &base_probe, "bundle-map")?;
    let (n, r1, r2) = (a1.dim(), a1.rank(), a2.rank());
    let src = dual_poisson(a2, fibre_box, "q").map_err(|e| MapError::Shape(alloc::format!("{}", e)))?;
    let bound = fibre_box.0.abs().max(fibre_box.1.abs());
    let mut scale_bound = 0.0_f64;
    let mut components: Vec<Expr> = (0..n).map(Expr::var).collect();
    for a in 0..r1 {
        components.push((0..r2).map(|b| &phi[a][b] * Expr::var(n + b)).sum());
    }
    let dual_probe = Probe::new(&src.chart, plan, tol);
    for pt in &dual_probe.points {
        for a in 0..r1 {
            let mut s = 0.0;
            for b in 0..r2 {
                s += phi[a][b].eval(&pt[..n]).map(f64::abs).unwrap_or(0.0);
            }
            scale_bound = scale_bound.max(s);
        }
    }
    let half = (bound * scale_bound.max(1.0)).max(1.0) * 1.01;
    let tgt = dual_poisson(a1, (-half, half), "p").map_err(|e| MapError::Shape(alloc::format!("{}", e)))?;
    let map = SmoothMap { target: tgt.chart.clone(), components };
    let pm = poisson_map_check(&map, &src.bivector, &tgt.bivector, &dual_probe)?;
    let mut reports: Vec<ResidualReport> = morph.reports().into_iter().cloned().collect();
    let second = pm.pass;
    reports.push(pm);
    Ok(CrossCheck { first: morph.pass, second, reports })
}

/// The anchor of `A` as a bundle map into the tangent algebroid.
pub fn anchor_cross_check(
    alg: &LieAlgebroid,
    plan: &SamplePlan,
    tol: f64,
    fibre_box: (f64, f64),
) -> Result<CrossCheck, MapError> {
    let tm = LieAlgebroid::tangent(alg.chart().clone());
    bundle_map_cross_check(alg.rho(), alg, &tm, plan, tol, fibre_box)
}

/// Poisson-map check against the Dirac-morphism check between the graphs of
/// the two bivectors.
pub fn poisson_dirac_cross_check(
    phi: &SmoothMap,
    source: &PoissonBivector,
    target: &PoissonBivector,
    probe: &Probe,
) -> Result<(CrossCheck, DiracMorphismReport), MapError> {
    let pm = poisson_map_check(phi, source, target, probe)?;
    let dm = dirac_morphism_check(
        &phi.components,
        &phi.target,
        &DiracFrame::graph_pi(source),
        &DiracFrame::graph_pi(target),
        probe,
    )?;
    let cc = CrossCheck { first: pm.pass, second: dm.pass, reports: vec![pm, dm.existence.clone()] };
    Ok((cc, dm))
}

/// Dual-anchor map `(x, q) -> (x, rho^i_a q_i)` from `T*M` to `A*`.
pub fn dual_anchor_map(
    alg: &LieAlgebroid,
    q_box: (f64, f64),
) -> Result<(FiberwiseLinearPoisson, FiberwiseLinearPoisson, SmoothMap), ChartError> {
    let n = alg.dim();
    let tm = LieAlgebroid::tangent(alg.chart().clone());
    let src = dual_poisson(&tm, q_box, "q")?;
    let bound = q_box.0.abs().max(q_box.1.abs());
    let mut components: Vec<Expr> = (0..n).map(Expr::var).collect();
    for a in 0..alg.rank() {
        components.push((0..n).map(|i| &alg.rho()[a][i] * Expr::var(n + i)).sum());
    }
    let mut row_bound = 0.0_f64;
    let probe = Probe::new(alg.chart(), &SamplePlan::new(0, 256).with_margin(0.0), 0.0);
    for p in &probe.points {
        for a in 0..alg.rank() {
            let s: f64 = (0..n).map(|i| alg.rho()[a][i].eval(p).map(f64::abs).unwrap_or(0.0)).sum();
            row_bound = row_bound.max(s);
        }
    }
    let half = (2.0 * bound * row_bound.max(1.0)).max(1.0);
    let tgt = dual_poisson(alg, (-half, half), "p")?;
    let map = SmoothMap { target: tgt.chart.clone(), components };
    Ok((src, tgt, map))
}
