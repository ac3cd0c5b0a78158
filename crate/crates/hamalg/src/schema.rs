//! JSON problem files and their translation into core objects.

use hamalg_core::algebroid::{zero_cube, LieAlgebroid};
use hamalg_core::connection::Connection;
use hamalg_core::courant::{skew3_from_upper, ThreeForm};
use hamalg_core::geometry::{zeros, Matrix, PoissonBivector, PreSymplectic};
use hamalg_core::{Chart, Expr, Probe, SamplePlan};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub chart: ChartSpec,
    pub algebroid: AlgebroidSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<ConnectionEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presymplectic: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hflux: Option<Vec<FluxEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub coordinates: Vec<String>,
    pub bounds: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidSpec {
    /// One row per frame section, one entry per coordinate.
    pub anchor: Vec<Vec<String>>,
    /// Sparse `C^c_{ab}`, 1-based.
    #[serde(default)]
    pub structure: Vec<StructureEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: String,
}

/// `omega^b_{a i}`, 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionEntry {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub value: String,
}

/// `H_{ijk}` with `i < j < k`, 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Fibre box used for dual bundles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pbox: Option<[f64; 2]>,
}

/// Parsed problem data.
#[derive(Clone, Debug)]
pub struct Problem {
    pub chart: Chart,
    pub algebroid: LieAlgebroid,
    pub connection: Connection,
    pub presymplectic: Option<PreSymplectic>,
    pub poisson: Option<PoissonBivector>,
    pub momentum: Option<Vec<Expr>>,
    pub hflux: Option<ThreeForm>,
    pub options: Options,
}

fn parse_at(chart: &Chart, path: &str, src: &str) -> Result<Expr, CliError> {
    chart.parse(src).map_err(|e| CliError::Schema(format!("{}: {}", path, e)))
}

fn index(path: &str, v: usize, max: usize) -> Result<usize, CliError> {
    if v == 0 || v > max {
        return Err(CliError::Schema(format!("{}: index {} outside 1..={}", path, v, max)));
    }
    Ok(v - 1)
}

/// Probe used for structural consistency checks of the input itself.
fn consistency_probe(chart: &Chart) -> Probe {
    Probe::new(chart, &SamplePlan::new(0, 16), 1e-9)
}

fn vanishes(chart: &Chart, e: &Expr) -> bool {
    if e.is_zero() {
        return true;
    }
    consistency_probe(chart).check("input", std::slice::from_ref(e)).map(|r| r.pass).unwrap_or(false)
}

fn skew_matrix(chart: &Chart, path: &str, rows: &[Vec<String>]) -> Result<Matrix, CliError> {
    let n = chart.dim();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Schema(format!("{0}: expected a {1}x{1} matrix", path, n)));
    }
    let mut m = zeros(n);
    let mut parsed = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            parsed[i][j] = parse_at(chart, &format!("{}[{}][{}]", path, i, j), &rows[i][j])?;
        }
    }
    for i in 0..n {
        if !vanishes(chart, &parsed[i][i]) {
            return Err(CliError::Schema(format!("{}[{}][{}]: diagonal entry must vanish", path, i, i)));
        }
        for j in i + 1..n {
            let lower = &parsed[j][i];
            if !lower.is_zero() && !vanishes(chart, &(lower + &parsed[i][j])) {
                return Err(CliError::Schema(format!(
                    "{}[{}][{}]: lower entry must be 0 or the negative of the upper entry",
                    path, j, i
                )));
            }
            m[i][j] = parsed[i][j].clone();
        }
    }
    Ok(m)
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize") + "\n"
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        let c = &self.chart;
        if c.coordinates.len() != c.bounds.len() {
            return Err(CliError::Schema("chart: coordinates and bounds differ in length".into()));
        }
        let bounds: Vec<(f64, f64)> = c.bounds.iter().map(|b| (b[0], b[1])).collect();
        let chart = Chart::new(&c.coordinates, &bounds).map_err(|e| CliError::Schema(format!("chart: {}", e)))?;
        let n = chart.dim();

        let a = &self.algebroid;
        let r = a.anchor.len();
        let mut rho = Vec::with_capacity(r);
        for (ai, row) in a.anchor.iter().enumerate() {
            if row.len() != n {
                return Err(CliError::Schema(format!("algebroid.anchor[{}]: expected {} entries", ai, n)));
            }
            let mut out = Vec::with_capacity(n);
            for (i, s) in row.iter().enumerate() {
                out.push(parse_at(&chart, &format!("algebroid.anchor[{}][{}]", ai, i), s)?);
            }
            rho.push(out);
        }
        let mut given = zero_cube(r, r, r);
        for (k, e) in a.structure.iter().enumerate() {
            let path = format!("algebroid.structure[{}]", k);
            let (ia, ib, ic) = (index(&path, e.a, r)?, index(&path, e.b, r)?, index(&path, e.c, r)?);
            let v = parse_at(&chart, &format!("{}.value", path), &e.value)?;
            if !given[ia][ib][ic].is_zero() {
                return Err(CliError::Schema(format!("{}: duplicate entry", path)));
            }
            given[ia][ib][ic] = v;
        }
        let mut c3 = zero_cube(r, r, r);
        for x in 0..r {
            for k in 0..r {
                if !vanishes(&chart, &given[x][x][k]) {
                    return Err(CliError::Schema(format!(
                        "algebroid.structure: C^{}_{{{}{}}} must vanish",
                        k + 1,
                        x + 1,
                        x + 1
                    )));
                }
            }
            for y in x + 1..r {
                for k in 0..r {
                    let (up, low) = (&given[x][y][k], &given[y][x][k]);
                    c3[x][y][k] = if up.is_zero() {
                        -low
                    } else {
                        if !low.is_zero() && !vanishes(&chart, &(up + low)) {
                            return Err(CliError::Schema(format!(
                                "algebroid.structure: C^{}_{{{}{}}} and C^{}_{{{}{}}} are not antisymmetric",
                                k + 1,
                                x + 1,
                                y + 1,
                                k + 1,
                                y + 1,
                                x + 1
                            )));
                        }
                        up.clone()
                    };
                }
            }
        }
        let algebroid =
            LieAlgebroid::new(chart.clone(), rho, c3).map_err(|e| CliError::Schema(format!("algebroid: {}", e)))?;

        let mut omega = zero_cube(r, r, n);
        for (k, e) in self.connection.iter().flatten().enumerate() {
            let path = format!("connection[{}]", k);
            let (ia, ib, ii) = (index(&path, e.a, r)?, index(&path, e.b, r)?, index(&path, e.i, n)?);
            omega[ia][ib][ii] = parse_at(&chart, &format!("{}.value", path), &e.value)?;
        }
        let connection = Connection { omega };

        let presymplectic = match &self.presymplectic {
            Some(m) => Some(PreSymplectic::new(skew_matrix(&chart, "presymplectic", m)?)),
            None => None,
        };
        let poisson = match &self.poisson {
            Some(m) => Some(PoissonBivector::new(skew_matrix(&chart, "poisson", m)?)),
            None => None,
        };
        let momentum = match &self.momentum {
            Some(v) => {
                if v.len() != r {
                    return Err(CliError::Schema(format!("momentum: expected {} components", r)));
                }
                let mut out = Vec::new();
                for (k, s) in v.iter().enumerate() {
                    out.push(parse_at(&chart, &format!("momentum[{}]", k), s)?);
                }
                Some(out)
            }
            None => None,
        };
        let hflux = match &self.hflux {
            Some(entries) => {
                let mut h = vec![vec![vec![Expr::zero(); n]; n]; n];
                for (k, e) in entries.iter().enumerate() {
                    let path = format!("hflux[{}]", k);
                    let (i, j, l) = (index(&path, e.i, n)?, index(&path, e.j, n)?, index(&path, e.k, n)?);
                    if !(i < j && j < l) {
                        return Err(CliError::Schema(format!("{}: indices must be strictly increasing", path)));
                    }
                    h[i][j][l] = parse_at(&chart, &format!("{}.value", path), &e.value)?;
                }
                Some(skew3_from_upper(&h))
            }
            None => None,
        };
        let options = self.options.clone().unwrap_or_default();
        if let Some(t) = options.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Schema("options.tol: must be positive".into()));
            }
        }
        if let Some([lo, hi]) = options.pbox {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(CliError::Schema("options.pbox: need lo < hi".into()));
            }
        }
        Ok(Problem { chart, algebroid, connection, presymplectic, poisson, momentum, hflux, options })
    }
}
