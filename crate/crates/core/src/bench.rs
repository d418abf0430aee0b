//! The three reference problems: square plate, 60° skew plate and circular
//! quadrant, each built from two elements spliced along a common edge.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::{apply_boundary_conditions, assemble, BoundaryKind, ElementSpec, Model};
use crate::element::PlateMaterial;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::oracle::{build_equivalent_mono, equivalence_check, EQUIVALENCE_TOL};
use crate::solve::{field_eval, moment_eval, solve_system, MomentTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchCase {
    Square,
    Skew60,
    CircularQuadrant,
}

impl BenchCase {
    pub const ALL: [BenchCase; 3] = [BenchCase::Square, BenchCase::Skew60, BenchCase::CircularQuadrant];

    pub fn name(self) -> &'static str {
        match self {
            BenchCase::Square => "square",
            BenchCase::Skew60 => "skew60",
            BenchCase::CircularQuadrant => "circular",
        }
    }

    /// Resolution levels with reference values.
    pub fn reference_levels(self) -> &'static [usize] {
        match self {
            BenchCase::Square => &[2, 4, 8, 16],
            BenchCase::Skew60 => &[8, 12, 16],
            BenchCase::CircularQuadrant => &[3, 6],
        }
    }

    pub fn variants(self) -> Vec<Variant> {
        match self {
            BenchCase::Square => square_variants(),
            BenchCase::Skew60 => skew_variants(),
            BenchCase::CircularQuadrant => circular_variants(),
        }
    }
}

impl fmt::Display for BenchCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(BenchCase::Square),
            "skew60" | "skew" => Ok(BenchCase::Skew60),
            "circular" | "circular_quadrant" => Ok(BenchCase::CircularQuadrant),
            other => Err(Error::InvalidModel(format!("unknown benchmark case '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Deflection,
    MomentX,
    MomentY,
    MomentXY,
}

/// One probed quantity with its reference values per resolution level.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub quantity: &'static str,
    pub point: Point2<f64>,
    pub kind: ProbeKind,
    /// Multiplier from the raw value to the tabulated coefficient.
    pub scale: f64,
    pub expected: Vec<(usize, f64)>,
    pub tolerance: f64,
}

impl Probe {
    pub fn expected_at(&self, m: usize) -> Option<f64> {
        self.expected.iter().find(|&&(k, _)| k == m).map(|&(_, v)| v)
    }
}

/// One support configuration of a case.
#[derive(Debug, Clone)]
pub struct Variant {
    pub label: &'static str,
    /// Builds the model for a given per-element scale.
    pub build: fn(usize, BoundaryKind) -> Model<f64>,
    pub edge_kind: BoundaryKind,
    pub probes: Vec<Probe>,
}

impl Variant {
    pub fn model(&self, m: usize, hard_ss: bool) -> Model<f64> {
        let kind = match (self.edge_kind, hard_ss) {
            (BoundaryKind::SimplySupported, true) => BoundaryKind::HardSimplySupported,
            (k, _) => k,
        };
        (self.build)(m, kind)
    }
}

fn material() -> PlateMaterial<f64> {
    PlateMaterial::unit_rigidity(0.3).expect("valid Poisson ratio")
}

fn p(x: f64, y: f64) -> Point2<f64> {
    Point2::new(x, y)
}

fn square_model(m: usize, kind: BoundaryKind) -> Model<f64> {
    let corners = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
    let mut model = Model::new(
        vec![
            ElementSpec { vertices: [corners[0], corners[1], corners[2]], m },
            ElementSpec { vertices: [corners[0], corners[2], corners[3]], m },
        ],
        material(),
    )
    .with_uniform_load(1.0);
    for i in 0..4 {
        model = model.with_bc(corners[i], corners[(i + 1) % 4], kind);
    }
    model
}

fn square_variants() -> Vec<Variant> {
    let centre = p(0.5, 0.5);
    vec![
        Variant {
            label: "ss",
            build: square_model,
            edge_kind: BoundaryKind::SimplySupported,
            probes: vec![
                Probe {
                    quantity: "deflection",
                    point: centre,
                    kind: ProbeKind::Deflection,
                    scale: 100.0,
                    expected: vec![(2, 0.3950), (4, 0.4039), (8, 0.4058), (16, 0.4062)],
                    tolerance: 5e-4,
                },
                Probe {
                    quantity: "central_moment",
                    point: centre,
                    kind: ProbeKind::MomentX,
                    scale: 10.0,
                    expected: vec![(2, 0.5026), (4, 0.4880), (8, 0.4824), (16, 0.4800)],
                    tolerance: 2e-3,
                },
            ],
        },
        Variant {
            label: "clamped",
            build: square_model,
            edge_kind: BoundaryKind::Clamped,
            probes: vec![
                Probe {
                    quantity: "deflection",
                    point: centre,
                    kind: ProbeKind::Deflection,
                    scale: 100.0,
                    expected: vec![(2, 0.0998), (4, 0.1194), (8, 0.1249), (16, 0.1262)],
                    tolerance: 5e-4,
                },
                Probe {
                    quantity: "side_moment",
                    point: p(0.5, 0.0),
                    kind: ProbeKind::MomentY,
                    scale: 10.0,
                    expected: vec![(2, -0.3551), (4, -0.4761), (8, -0.5028), (16, -0.5104)],
                    tolerance: 2e-3,
                },
            ],
        },
    ]
}

const SIN60: f64 = 0.866_025_403_784_438_6;

/// Rhombus with 60° corners at the origin, split along its short diagonal.
fn skew_model(m: usize, kind: BoundaryKind) -> Model<f64> {
    let (a, b, c, d) = (p(0.0, 0.0), p(1.0, 0.0), p(1.5, SIN60), p(0.5, SIN60));
    Model::new(vec![ElementSpec { vertices: [a, b, d], m }, ElementSpec { vertices: [b, c, d], m }], material())
        .with_uniform_load(1.0)
        .with_bc(d, a, kind)
        .with_bc(b, c, kind)
}

fn skew_variants() -> Vec<Variant> {
    vec![Variant {
        label: "ss_free",
        build: skew_model,
        edge_kind: BoundaryKind::SimplySupported,
        probes: vec![Probe {
            quantity: "deflection",
            point: p(0.75, SIN60 / 2.0),
            kind: ProbeKind::Deflection,
            scale: 100.0,
            expected: vec![(8, 0.7920), (12, 0.7937), (16, 0.7930)],
            tolerance: 1e-3,
        }],
    }]
}

/// Quarter disk of unit radius as two triangles meeting on the 45° radius.
fn circular_model(m: usize, kind: BoundaryKind) -> Model<f64> {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let (o, e, d, n) = (p(0.0, 0.0), p(1.0, 0.0), p(c, c), p(0.0, 1.0));
    Model::new(vec![ElementSpec { vertices: [o, e, d], m }, ElementSpec { vertices: [o, d, n], m }], material())
        .with_uniform_load(1.0)
        .with_bc(o, e, BoundaryKind::Symmetry)
        .with_bc(n, o, BoundaryKind::Symmetry)
        .with_bc(e, d, kind)
        .with_bc(d, n, kind)
}

fn circular_variants() -> Vec<Variant> {
    let centre = p(0.0, 0.0);
    vec![
        Variant {
            label: "clamped",
            build: circular_model,
            edge_kind: BoundaryKind::Clamped,
            probes: vec![Probe {
                quantity: "deflection",
                point: centre,
                kind: ProbeKind::Deflection,
                scale: 1.0,
                expected: vec![(3, 0.0145), (6, 0.0153)],
                tolerance: 1e-3,
            }],
        },
        Variant {
            label: "ss",
            build: circular_model,
            edge_kind: BoundaryKind::SimplySupported,
            probes: vec![
                Probe {
                    quantity: "deflection",
                    point: centre,
                    kind: ProbeKind::Deflection,
                    scale: 1.0,
                    expected: vec![(3, 0.0638), (6, 0.0637)],
                    tolerance: 1e-3,
                },
                Probe {
                    quantity: "central_moment",
                    point: centre,
                    kind: ProbeKind::MomentX,
                    scale: 1.0,
                    expected: vec![(3, 0.2103), (6, 0.2073)],
                    tolerance: 3e-3,
                },
            ],
        },
    ]
}

/// Analytical coefficients the cases converge to.
pub fn analytical(case: BenchCase, variant: &str, quantity: &str) -> Option<f64> {
    match (case, variant, quantity) {
        (BenchCase::Square, "ss", "deflection") => Some(0.4062),
        (BenchCase::Square, "ss", "central_moment") => Some(0.4789),
        (BenchCase::Square, "clamped", "deflection") => Some(0.1265),
        (BenchCase::Square, "clamped", "side_moment") => Some(-0.5133),
        (BenchCase::Skew60, _, "deflection") => Some(0.7945),
        (BenchCase::CircularQuadrant, "clamped", "deflection") => Some(1.0 / 64.0),
        (BenchCase::CircularQuadrant, "ss", "deflection") => Some(5.3 / (64.0 * 1.3)),
        (BenchCase::CircularQuadrant, "ss", "central_moment") => Some(3.3 / 16.0),
        _ => None,
    }
}

/// Node-count label `p×q` with `p·q = (m+1)(m+2)/2`.
pub fn rl_label(m: usize) -> String {
    if m.is_multiple_of(2) {
        format!("{}×{}", (m + 2) / 2, m + 1)
    } else {
        format!("{}×{}", m.div_ceil(2), m + 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// No reference value at this level.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub case: String,
    pub m: usize,
    pub rl_label: String,
    pub quantity: String,
    pub value: f64,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "case,m,rl_label,quantity,value,expected,tolerance,status";

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        format!(
            "{},{},{},{},{:.6e},{},{},{}",
            self.case,
            self.m,
            self.rl_label,
            self.quantity,
            self.value,
            opt(self.expected),
            opt(self.tolerance),
            self.status
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BenchOptions {
    pub hard_ss: bool,
    pub quadrature_degree: Option<usize>,
    /// Also run the conventional-model equivalence check.
    pub check_equivalence: bool,
}

fn probe_value(sol: &crate::solve::Solution<'_, f64>, probe: &Probe) -> Result<f64> {
    let raw = match probe.kind {
        ProbeKind::Deflection => field_eval(sol, probe.point)?.w,
        kind => {
            let MomentTriple { mx, my, mxy } = moment_eval(sol, probe.point)?;
            match kind {
                ProbeKind::MomentX => mx,
                ProbeKind::MomentY => my,
                _ => mxy,
            }
        }
    };
    // unit q, unit length, unit rigidity: the coefficient is the scaled value
    Ok(raw * probe.scale)
}

/// Solves every variant of `case` at each `m` and compares against the
/// tabulated coefficients.
pub fn run_benchmark(case: BenchCase, m_list: &[usize], options: BenchOptions) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for variant in case.variants() {
        let case_label = format!("{}_{}", case.name(), variant.label);
        for &m in m_list {
            if m == 0 {
                return Err(Error::InvalidScale);
            }
            let mut model = variant.model(m, options.hard_ss);
            if let Some(d) = options.quadrature_degree {
                model.quadrature_degree = d;
            }
            let row = |quantity: &str, value: f64, expected: Option<f64>, tolerance: Option<f64>, status| BenchRow {
                case: case_label.clone(),
                m,
                rl_label: rl_label(m),
                quantity: quantity.to_string(),
                value,
                expected,
                tolerance,
                status,
            };
            let system = assemble(&model)?;
            let reduced = apply_boundary_conditions(&system, &model.bcs)?;
            let sol = solve_system(&reduced)?;
            for probe in &variant.probes {
                let value = probe_value(&sol, probe)?;
                let expected = probe.expected_at(m);
                let status = match expected {
                    Some(e) if (value - e).abs() <= probe.tolerance => Status::Pass,
                    Some(_) => Status::Fail,
                    None => Status::Info,
                };
                let tol = expected.map(|_| probe.tolerance);
                rows.push(row(probe.quantity, value, expected, tol, status));
            }
            if options.check_equivalence {
                let report = equivalence_check(&model, &build_equivalent_mono(&model)?)?;
                let worst = report.max_k_diff.max(report.max_solution_diff).max(report.max_rhs_diff);
                let status = if report.pass { Status::Pass } else { Status::Fail };
                rows.push(row("equivalence", worst, Some(0.0), Some(EQUIVALENCE_TOL), status));
                let nodes_ok = report.multi_nodes == report.mono_nodes;
                rows.push(row(
                    "node_count",
                    report.multi_nodes as f64,
                    Some(report.mono_nodes as f64),
                    Some(0.0),
                    if nodes_ok { Status::Pass } else { Status::Fail },
                ));
            }
        }
    }
    Ok(rows)
}
