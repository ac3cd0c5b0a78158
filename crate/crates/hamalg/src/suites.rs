//! Check suites over a parsed problem.

use hamalg_core::connection::{check_basic_curvature_consistency, dual_covariant_derivative};
use hamalg_core::courant::{
    check_courant_axioms, check_dirac, three_form_closed_residuals, DiracFrame, DiracMorphismReport, SectionSamples,
    StandardCourant,
};
use hamalg_core::geometry::{check_closed, check_poisson, PoissonBivector, PreSymplectic};
use hamalg_core::graded::{
    algebroid_field, check_field_square, dual_reproduction_check, graded_identity_check, master_equation_check,
    momentum_poisson_map_check, poisson_field, tangent_reproduction_check, DualPhaseSpace, TangentPhaseSpace,
};
use hamalg_core::momentum::{
    check_basic_curvature_pairing, hamiltonian_poisson, hamiltonian_symplectic, identity_needs_pairing, identity_suite,
    IDENTITY_NAMES,
};
use hamalg_core::morphism::{
    anchor_cross_check, check_anchor_comomentum_morphism, check_covector_comomentum_morphism, check_covector_morphism,
    check_poisson_graph_morphism, check_presymplectic_graph_morphism, dual_anchor_map, momentum_poisson_map,
    poisson_dirac_cross_check, MorphismReport,
};
use hamalg_core::{Expr, Probe, ResidualReport, SamplePlan, DEFAULT_TOL};
use serde::Serialize;

use crate::error::CliError;
use crate::schema::Problem;

pub const SUITES: [&str; 10] = [
    "axioms",
    "geometry",
    "hamiltonian-symplectic",
    "hamiltonian-poisson",
    "identities",
    "courant",
    "dirac",
    "morphisms",
    "graded",
    "all",
];

pub const DEFAULT_POINTS: usize = 64;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Must pass for the suite's conditions to be meaningful; counts toward the verdict.
    Prerequisite,
    Condition,
    /// Reported only.
    Diagnostic,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub role: Role,
    pub pass: bool,
    pub report: ResidualReport,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub points: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { points: DEFAULT_POINTS, tol: DEFAULT_TOL, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub suite: String,
    pub settings: Settings,
    /// Sorted by name.
    pub entries: Vec<Entry>,
}

impl SuiteRun {
    pub fn pass(&self) -> bool {
        self.entries.iter().filter(|e| e.role != Role::Diagnostic).all(|e| e.pass)
    }

    /// Names of failing checks that count toward the verdict.
    pub fn failing(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.role != Role::Diagnostic && !e.pass).map(|e| e.name.as_str()).collect()
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

struct Ctx<'a> {
    pb: &'a Problem,
    plan: SamplePlan,
    probe: Probe,
    settings: Settings,
    fibre: (f64, f64),
    out: Vec<Entry>,
}

fn need<'a, T>(v: &'a Option<T>, key: &str, suite: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Missing(format!("suite {} needs the {} key", suite, key)))
}

impl<'a> Ctx<'a> {
    fn push_entry(&mut self, role: Role, name: &str, report: ResidualReport, pass: bool, note: Option<String>) {
        if self.out.iter().any(|e| e.name == name) {
            return;
        }
        let report = report.renamed(name);
        self.out.push(Entry { name: name.into(), role, pass, report, note });
    }

    fn push(&mut self, role: Role, name: &str, report: ResidualReport) {
        let pass = report.pass;
        self.push_entry(role, name, report, pass, None);
    }

    fn push_morphism(&mut self, role: Role, stem: &str, m: MorphismReport) {
        self.push(role, &format!("{}-bracket", stem), m.bracket);
        self.push(role, &format!("{}-anchor", stem), m.anchor);
        if let Some(r) = m.membership {
            self.push(role, &format!("{}-membership", stem), r);
        }
    }

    fn push_dirac_morphism(&mut self, role: Role, name: &str, dm: DiracMorphismReport) {
        let note = format!("min singular value {:.3e}, solutions {:?}", dm.min_singular_value, dm.uniqueness);
        self.push_entry(role, name, dm.existence, dm.pass, Some(note));
    }

    fn presymplectic(&self, suite: &str) -> Result<&'a PreSymplectic, CliError> {
        need(&self.pb.presymplectic, "presymplectic", suite)
    }

    fn poisson(&self, suite: &str) -> Result<&'a PoissonBivector, CliError> {
        need(&self.pb.poisson, "poisson", suite)
    }

    fn momentum(&self, suite: &str) -> Result<&'a Vec<Expr>, CliError> {
        need(&self.pb.momentum, "momentum", suite)
    }

    fn axioms(&mut self, role: Role) -> Result<(), CliError> {
        let [a, j] = self.pb.algebroid.check_axioms(&self.probe)?;
        self.push(role, "anchor-identity", a);
        self.push(role, "jacobi-identity", j);
        Ok(())
    }

    fn closedness(&mut self, role: Role, w: &PreSymplectic) -> Result<(), CliError> {
        let r = check_closed(w, &self.probe)?;
        self.push(role, "closedness", r);
        Ok(())
    }

    fn poisson_check(&mut self, role: Role, p: &PoissonBivector) -> Result<(), CliError> {
        let r = check_poisson(p, &self.probe)?;
        self.push(role, "poisson", r);
        Ok(())
    }

    fn geometry(&mut self) -> Result<(), CliError> {
        if self.pb.presymplectic.is_none() && self.pb.poisson.is_none() {
            return Err(CliError::Missing("suite geometry needs a presymplectic or poisson key".into()));
        }
        if let Some(w) = &self.pb.presymplectic {
            self.closedness(Role::Condition, w)?;
        }
        if let Some(p) = &self.pb.poisson {
            self.poisson_check(Role::Condition, p)?;
        }
        Ok(())
    }

    fn hamiltonian_symplectic(&mut self) -> Result<(), CliError> {
        let suite = "hamiltonian-symplectic";
        let (w, mu) = (self.presymplectic(suite)?, self.momentum(suite)?);
        self.axioms(Role::Prerequisite)?;
        self.closedness(Role::Prerequisite, w)?;
        let v = hamiltonian_symplectic(&self.pb.algebroid, &self.pb.connection, w, mu, &self.probe)?;
        for r in v.conditions {
            let name = r.name.clone();
            self.push(Role::Condition, &name, r);
        }
        Ok(())
    }

    fn hamiltonian_poisson(&mut self) -> Result<(), CliError> {
        let suite = "hamiltonian-poisson";
        let (p, mu) = (self.poisson(suite)?, self.momentum(suite)?);
        let (alg, conn) = (&self.pb.algebroid, &self.pb.connection);
        self.axioms(Role::Prerequisite)?;
        self.poisson_check(Role::Prerequisite, p)?;
        let v = hamiltonian_poisson(alg, conn, p, mu, &self.probe)?;
        for r in v.conditions.into_iter().chain(v.basic_curvature_sharp) {
            let name = r.name.clone();
            self.push(Role::Condition, &name, r);
        }
        let pairing = check_basic_curvature_pairing(alg, conn, mu, &self.probe)?;
        self.push(Role::Diagnostic, "basic-curvature-pairing", pairing);
        Ok(())
    }

    fn identities(&mut self) -> Result<(), CliError> {
        let suite = "identities";
        let (p, mu) = (self.poisson(suite)?, self.momentum(suite)?);
        let (alg, conn) = (&self.pb.algebroid, &self.pb.connection);
        self.axioms(Role::Prerequisite)?;
        self.poisson_check(Role::Prerequisite, p)?;
        let forms = check_basic_curvature_consistency(alg, conn, &self.probe)?;
        self.push(Role::Condition, "basic-curvature-forms", forms);
        let pairing = check_basic_curvature_pairing(alg, conn, mu, &self.probe)?;
        let pairing_holds = pairing.pass;
        self.push(Role::Diagnostic, "basic-curvature-pairing", pairing);
        let reports = identity_suite(alg, conn, p, mu, &self.probe)?;
        for (name, r) in IDENTITY_NAMES.iter().zip(reports) {
            let role = if identity_needs_pairing(name) && !pairing_holds { Role::Diagnostic } else { Role::Condition };
            self.push(role, name, r);
        }
        Ok(())
    }

    fn courant(&mut self) -> Result<(), CliError> {
        let n = self.pb.chart.dim();
        let e = match &self.pb.hflux {
            Some(h) => {
                let r = self.probe.check("flux-closedness", &three_form_closed_residuals(h))?;
                self.push(Role::Diagnostic, "flux-closedness", r);
                StandardCourant::twisted(h.clone())
            }
            None => StandardCourant::new(n),
        };
        let samples = SectionSamples::random(n, 3, self.settings.seed);
        for r in check_courant_axioms(&e, &samples, &self.probe)? {
            let name = r.name.clone();
            self.push(Role::Condition, &name, r);
        }
        Ok(())
    }

    fn dirac(&mut self) -> Result<(), CliError> {
        if self.pb.presymplectic.is_none() && self.pb.poisson.is_none() {
            return Err(CliError::Missing("suite dirac needs a presymplectic or poisson key".into()));
        }
        let e = StandardCourant::new(self.pb.chart.dim());
        let mut frames = Vec::new();
        if let Some(w) = &self.pb.presymplectic {
            frames.push(("graph-omega", DiracFrame::graph_omega(w)));
        }
        if let Some(p) = &self.pb.poisson {
            frames.push(("graph-pi", DiracFrame::graph_pi(p)));
        }
        for (stem, frame) in frames {
            let [iso, inv] = check_dirac(&e, &frame, &self.probe)?;
            self.push(Role::Condition, &format!("{}-isotropy", stem), iso);
            self.push(Role::Condition, &format!("{}-involutivity", stem), inv);
        }
        Ok(())
    }

    fn morphisms(&mut self) -> Result<(), CliError> {
        let (alg, conn) = (&self.pb.algebroid, &self.pb.connection);
        let role = Role::Condition;
        self.axioms(Role::Prerequisite)?;

        let cc = anchor_cross_check(alg, &self.plan, self.settings.tol, self.fibre)?;
        for (r, name) in
            cc.reports.into_iter().zip(["anchor-map-bracket", "anchor-map-anchor", "anchor-map-dual-poisson"])
        {
            self.push(role, name, r);
        }

        let (src, tgt, map) = dual_anchor_map(alg, self.fibre)?;
        let probe = Probe::new(&src.chart, &self.plan, self.settings.tol);
        let (cc, dm) = poisson_dirac_cross_check(&map, &src.bivector, &tgt.bivector, &probe)?;
        self.push(role, "dual-anchor-poisson-map", cc.reports[0].clone());
        self.push_dirac_morphism(role, "dual-anchor-dirac-morphism", dm);

        if let (Some(w), Some(mu)) = (&self.pb.presymplectic, &self.pb.momentum) {
            let m = check_anchor_comomentum_morphism(alg, w, mu, &self.probe)?;
            self.push_morphism(role, "anchor-comomentum", m);
            let m = check_presymplectic_graph_morphism(alg, conn, w, mu, &self.probe)?;
            self.push_morphism(role, "presymplectic-graph", m);
        }
        if let (Some(p), Some(mu)) = (&self.pb.poisson, &self.pb.momentum) {
            let m = check_poisson_graph_morphism(alg, conn, p, mu, &self.probe)?;
            self.push_morphism(role, "poisson-graph", m);
            let m = check_covector_comomentum_morphism(alg, conn, p, mu, &self.probe)?;
            self.push_morphism(role, "covector-comomentum", m);
            let m = check_covector_morphism(alg, conn, p, mu, &self.probe)?;
            self.push_morphism(role, "covector", m);

            let half = self.momentum_image_bound(mu)?;
            let s = momentum_poisson_map(alg, conn, p, mu, self.fibre, (-half, half))?;
            let probe = Probe::new(&s.source.chart, &self.plan, self.settings.tol);
            let (cc, dm) = poisson_dirac_cross_check(&s.map, &s.source.bivector, &s.target.bivector, &probe)?;
            self.push(role, "momentum-poisson-map", cc.reports[0].clone());
            self.push_dirac_morphism(role, "momentum-dirac-morphism", dm);
        }
        Ok(())
    }

    /// Half-width of a fibre box that contains every image `-nabla mu . v`.
    fn momentum_image_bound(&self, mu: &[Expr]) -> Result<f64, CliError> {
        let n = self.pb.chart.dim();
        let nm = dual_covariant_derivative(&self.pb.connection, mu, n);
        let v = self.fibre.0.abs().max(self.fibre.1.abs());
        let mut bound = 0.0_f64;
        let probe = Probe::new(&self.pb.chart, &SamplePlan::new(self.settings.seed, 256).with_margin(0.0), 0.0);
        for pt in probe.points.iter().chain(&self.probe.points) {
            for a in 0..mu.len() {
                let mut s = 0.0;
                for row in nm.iter().take(n) {
                    s += row[a]
                        .eval(pt)
                        .map_err(|e| CliError::Evaluation(format!("momentum-poisson-map: {}", e)))?
                        .abs();
                }
                bound = bound.max(s);
            }
        }
        Ok((2.0 * v * bound).max(1.0))
    }

    fn graded(&mut self) -> Result<(), CliError> {
        let (alg, conn) = (&self.pb.algebroid, &self.pb.connection);
        let (seed, role) = (self.settings.seed, Role::Condition);
        let d = DualPhaseSpace::new(&self.pb.chart, alg.rank());
        let r = master_equation_check("master-equation-dual", &d.space, &d.theta(alg), &self.probe)?;
        self.push(role, "master-equation-dual", r);
        let (sp, q) = algebroid_field(alg);
        let r = check_field_square("algebroid-field-square", &sp, &q, &self.probe)?;
        self.push(role, "algebroid-field-square", r);
        let r = dual_reproduction_check(alg, 4, seed, &self.probe)?;
        self.push(role, "graded-dual-reproduction", r);
        let [j, a] = graded_identity_check(&d.space, 20, seed, &self.probe)?;
        self.push(role, "graded-jacobi", j);
        self.push(role, "graded-antisymmetry", a);

        if let Some(p) = &self.pb.poisson {
            let m = TangentPhaseSpace::new(&self.pb.chart);
            let r = master_equation_check("master-equation-tangent", &m.space, &m.theta(p), &self.probe)?;
            self.push(role, "master-equation-tangent", r);
            let (sp, q) = poisson_field(&self.pb.chart, p);
            let r = check_field_square("poisson-field-square", &sp, &q, &self.probe)?;
            self.push(role, "poisson-field-square", r);
            let r = tangent_reproduction_check(p, 1.0, 4, seed, &self.probe)?;
            self.push(role, "graded-tangent-reproduction", r);
            if let Some(mu) = &self.pb.momentum {
                let r = momentum_poisson_map_check(alg, conn, p, mu, None, &self.probe)?;
                self.push(role, "graded-momentum-map", r);
            }
        }
        Ok(())
    }

    fn run(&mut self, suite: &str) -> Result<(), CliError> {
        match suite {
            "axioms" => self.axioms(Role::Condition),
            "geometry" => self.geometry(),
            "hamiltonian-symplectic" => self.hamiltonian_symplectic(),
            "hamiltonian-poisson" => self.hamiltonian_poisson(),
            "identities" => self.identities(),
            "courant" => self.courant(),
            "dirac" => self.dirac(),
            "morphisms" => self.morphisms(),
            "graded" => self.graded(),
            "all" => {
                for s in applicable(self.pb) {
                    self.run(s)?;
                }
                Ok(())
            }
            other => Err(CliError::Schema(format!("unknown suite {:?}; expected one of {}", other, SUITES.join(", ")))),
        }
    }
}

/// Suites whose required inputs are present, in run order.
pub fn applicable(pb: &Problem) -> Vec<&'static str> {
    let (w, p, mu) = (pb.presymplectic.is_some(), pb.poisson.is_some(), pb.momentum.is_some());
    let mut out = vec!["axioms"];
    if w || p {
        out.push("geometry");
    }
    if w && mu {
        out.push("hamiltonian-symplectic");
    }
    if p && mu {
        out.extend(["hamiltonian-poisson", "identities"]);
    }
    out.push("courant");
    if w || p {
        out.push("dirac");
    }
    out.extend(["morphisms", "graded"]);
    out
}

/// Settings precedence: explicit flag, then file options, then defaults.
pub fn resolve_settings(pb: &Problem, points: Option<usize>, tol: Option<f64>, seed: Option<u64>) -> Settings {
    let d = Settings::default();
    Settings {
        points: points.or(pb.options.points).unwrap_or(d.points),
        tol: tol.or(pb.options.tol).unwrap_or(d.tol),
        seed: seed.or(pb.options.seed).unwrap_or(d.seed),
    }
}

pub fn run_suite(pb: &Problem, suite: &str, settings: Settings) -> Result<SuiteRun, CliError> {
    if !SUITES.contains(&suite) {
        return Err(CliError::Schema(format!("unknown suite {:?}; expected one of {}", suite, SUITES.join(", "))));
    }
    if settings.points == 0 {
        return Err(CliError::Schema("--points must be positive".into()));
    }
    if !(settings.tol.is_finite() && settings.tol > 0.0) {
        return Err(CliError::Schema("--tol must be positive".into()));
    }
    let plan = SamplePlan::new(settings.seed, settings.points);
    let probe = Probe::new(&pb.chart, &plan, settings.tol);
    let fibre = pb.options.pbox.map(|[a, b]| (a, b)).unwrap_or((-1.0, 1.0));
    let mut ctx = Ctx { pb, plan, probe, settings, fibre, out: Vec::new() };
    ctx.run(suite)?;
    let mut entries = ctx.out;
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteRun { suite: suite.into(), settings, entries })
}
