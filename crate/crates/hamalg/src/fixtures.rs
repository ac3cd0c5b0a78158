//! Built-in problem files and the suites they are meant for.

use crate::schema::{AlgebroidSpec, ChartSpec, ProblemFile, StructureEntry};

pub struct Fixture {
    pub name: &'static str,
    pub suite: &'static str,
    /// The only check a mutation is expected to fail.
    pub failing: Option<&'static str>,
    pub file: ProblemFile,
}

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn plane(description: &str, anchor: &[&[&str]], structure: &[(usize, usize, usize, &str)]) -> ProblemFile {
    ProblemFile {
        description: Some(description.into()),
        chart: ChartSpec { coordinates: s(&["x", "y"]), bounds: vec![[-1.0, 1.0], [-1.0, 1.0]] },
        algebroid: AlgebroidSpec {
            anchor: anchor.iter().map(|r| s(r)).collect(),
            structure: structure.iter().map(|&(a, b, c, v)| StructureEntry { a, b, c, value: v.into() }).collect(),
        },
        connection: None,
        presymplectic: None,
        poisson: None,
        momentum: None,
        hflux: None,
        options: None,
    }
}

fn standard() -> Option<Vec<Vec<String>>> {
    Some(vec![s(&["0", "1"]), s(&["-1", "0"])])
}

fn e1(mu: &str) -> ProblemFile {
    let mut f = plane("rotation of the plane, standard symplectic form", &[&["-y", "x"]], &[]);
    f.presymplectic = standard();
    f.momentum = Some(s(&[mu]));
    f
}

fn e2(mu: &str) -> ProblemFile {
    let mut f = plane("rotation of the plane, standard Poisson bivector", &[&["y", "-x"]], &[]);
    f.poisson = standard();
    f.momentum = Some(s(&[mu]));
    f
}

fn e3(c: &str) -> ProblemFile {
    plane("affine algebra acting on the line", &[&["1", "0"], &["x", "0"]], &[(1, 2, 1, c)])
}

fn e4(c: &str) -> ProblemFile {
    plane("cotangent algebroid of pi^{12} = x", &[&["0", "x"], &["-x", "0"]], &[(1, 2, 1, c)])
}

fn e5(mu: [&str; 2]) -> ProblemFile {
    let mut f =
        plane("nonabelian affine action, standard symplectic form", &[&["0", "1"], &["-x", "y"]], &[(1, 2, 1, "1")]);
    f.presymplectic = standard();
    f.momentum = Some(s(&mu));
    f
}

fn e6(mu: [&str; 2]) -> ProblemFile {
    let mut f = plane("rank-two abelian action, standard Poisson bivector", &[&["0", "-1"], &["0", "-x"]], &[]);
    f.poisson = standard();
    f.momentum = Some(s(&mu));
    f
}

pub fn all() -> Vec<Fixture> {
    let fx = |name, suite, failing, file| Fixture { name, suite, failing, file };
    vec![
        fx("e1", "hamiltonian-symplectic", None, e1("(x^2 + y^2)/2")),
        fx("e1-doubled-mu", "hamiltonian-symplectic", Some("momentum-symplectic"), e1("x^2 + y^2")),
        fx("e2", "hamiltonian-poisson", None, e2("(x^2 + y^2)/2")),
        fx("e2-broken-mu", "hamiltonian-poisson", Some("momentum-poisson"), e2("(x^2 + y^2)/2 + x")),
        fx("e3", "axioms", None, e3("1")),
        fx("e3-broken-structure", "axioms", Some("anchor-identity"), e3("2")),
        fx("e4", "axioms", None, e4("1")),
        fx("e4-broken-structure", "axioms", Some("anchor-identity"), e4("2")),
        fx("e5", "hamiltonian-symplectic", None, e5(["x", "x*y"])),
        fx("e5-shifted-mu", "hamiltonian-symplectic", Some("bracket-compatible-symplectic"), e5(["x + 1", "x*y"])),
        fx("e6", "hamiltonian-poisson", None, e6(["x", "x^2/2"])),
        fx("e6-broken-mu", "identities", Some("bracket-compatible-covariant"), e6(["x", "y"])),
    ]
}

pub fn names() -> Vec<&'static str> {
    all().into_iter().map(|f| f.name).collect()
}

pub fn get(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
