//! Problem configuration and result reports for the `mrplate` binary.
//!
//! Configs and reports are JSON. Units are whatever the config uses
//! consistently (SI is assumed in the docs); nothing is nondimensionalized
//! except the optional `coefficient` column of a report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use mrplate::assembly::{apply_boundary_conditions, assemble, BoundaryKind, ElementSpec, Model};
use mrplate::bench::rl_label;
use mrplate::oracle::{build_equivalent_mono, equivalence_check_with, EquivalenceReport};
use mrplate::solve::{field_eval, moment_eval, normalize_coefficient, solve_system, Quantity};
use mrplate::{PlateMaterial, Point};

pub type XY = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    #[serde(rename = "E")]
    pub e: f64,
    pub t: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementConfig {
    pub vertices: [XY; 3],
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointLoadConfig {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "P")]
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadConfig {
    #[serde(default)]
    pub uniform_q: f64,
    #[serde(default)]
    pub point_loads: Vec<PointLoadConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcConfig {
    pub edge: [XY; 2],
    pub kind: BoundaryKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeQuantity {
    Deflection,
    MomentX,
    MomentY,
    MomentXy,
}

impl ProbeQuantity {
    pub fn name(self) -> &'static str {
        match self {
            ProbeQuantity::Deflection => "deflection",
            ProbeQuantity::MomentX => "moment_x",
            ProbeQuantity::MomentY => "moment_y",
            ProbeQuantity::MomentXy => "moment_xy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub x: f64,
    pub y: f64,
    pub quantity: ProbeQuantity,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default)]
    pub quadrature_degree: Option<usize>,
    #[serde(default)]
    pub merge_tolerance: Option<f64>,
    /// Length used for normalized coefficients (`w D / (q L⁴)`, `M / (q L²)`).
    #[serde(default)]
    pub reference_length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub material: MaterialConfig,
    pub elements: Vec<ElementConfig>,
    #[serde(default)]
    pub loads: LoadConfig,
    #[serde(default)]
    pub bcs: Vec<BcConfig>,
    #[serde(default)]
    pub probes: Vec<ProbeConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn pt([x, y]: XY) -> Point {
    Point::new(x, y)
}

fn finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ProblemConfig = serde_json::from_str(text).context("config does not match the schema")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Schema-level checks; geometry is checked when the model is assembled.
    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            bail!("config has no elements");
        }
        for (i, e) in self.elements.iter().enumerate() {
            if e.m == 0 {
                bail!("element {i}: m must be a positive integer");
            }
            if !finite(&e.vertices.concat()) {
                bail!("element {i}: non-finite vertex coordinate");
            }
        }
        for (i, b) in self.bcs.iter().enumerate() {
            if !finite(&b.edge.concat()) {
                bail!("bc {i}: non-finite edge coordinate");
            }
        }
        if !self.loads.uniform_q.is_finite() {
            bail!("uniform_q must be finite");
        }
        for (i, l) in self.loads.point_loads.iter().enumerate() {
            if !finite(&[l.x, l.y, l.p]) {
                bail!("point load {i}: non-finite value");
            }
        }
        for (i, p) in self.probes.iter().enumerate() {
            if !finite(&[p.x, p.y]) {
                bail!("probe {i}: non-finite coordinate");
            }
        }
        if self.solver.quadrature_degree == Some(0) {
            bail!("quadrature_degree must be positive");
        }
        if let Some(t) = self.solver.merge_tolerance {
            if !(t > 0.0) {
                bail!("merge_tolerance must be positive");
            }
        }
        if let Some(l) = self.solver.reference_length {
            if !(l > 0.0) {
                bail!("reference_length must be positive");
            }
        }
        Ok(())
    }

    pub fn material(&self) -> Result<PlateMaterial<f64>> {
        Ok(PlateMaterial::new(self.material.e, self.material.t, self.material.nu)?)
    }

    /// Core model; `hard_ss` upgrades every soft simple support.
    pub fn to_model(&self, hard_ss: bool) -> Result<Model<f64>> {
        let elements = self.elements.iter().map(|e| ElementSpec { vertices: e.vertices.map(pt), m: e.m }).collect();
        let mut model = Model::new(elements, self.material()?).with_uniform_load(self.loads.uniform_q);
        for l in &self.loads.point_loads {
            model = model.with_point_load(Point::new(l.x, l.y), l.p);
        }
        for b in &self.bcs {
            let kind = match b.kind {
                BoundaryKind::SimplySupported if hard_ss => BoundaryKind::HardSimplySupported,
                k => k,
            };
            model = model.with_bc(pt(b.edge[0]), pt(b.edge[1]), kind);
        }
        if let Some(d) = self.solver.quadrature_degree {
            model.quadrature_degree = d;
        }
        model.merge_tolerance = self.solver.merge_tolerance;
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub x: f64,
    pub y: f64,
    pub quantity: ProbeQuantity,
    pub value: f64,
    /// Normalized value, present when a reference length and nonzero `q` exist.
    pub coefficient: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementSummary {
    pub m: usize,
    pub rl_label: String,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultReport {
    pub nodes: usize,
    pub dofs: usize,
    pub free_dofs: usize,
    pub elements: Vec<ElementSummary>,
    pub total_load: f64,
    pub vertical_reaction: f64,
    pub max_deflection: f64,
    pub residual: f64,
    pub probes: Vec<ProbeResult>,
    pub equivalence: Option<EquivalenceReport>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub hard_ss: bool,
    pub quadrature_degree: Option<usize>,
    pub check_equivalence: bool,
}

pub fn solve_config(cfg: &ProblemConfig, options: SolveOptions) -> Result<ResultReport> {
    let mut model = cfg.to_model(options.hard_ss)?;
    if let Some(d) = options.quadrature_degree {
        model.quadrature_degree = d;
    }
    let system = assemble(&model)?;
    let reduced = apply_boundary_conditions(&system, &model.bcs)?;
    let sol = solve_system(&reduced)?;
    let rigidity = model.material.flexural_rigidity();
    let q = cfg.loads.uniform_q;

    let mut probes = Vec::with_capacity(cfg.probes.len());
    for pc in &cfg.probes {
        let at = Point::new(pc.x, pc.y);
        let (value, kind) = match pc.quantity {
            ProbeQuantity::Deflection => (field_eval(&sol, at)?.w, Quantity::Deflection),
            other => {
                let mt = moment_eval(&sol, at)?;
                let v = match other {
                    ProbeQuantity::MomentX => mt.mx,
                    ProbeQuantity::MomentY => mt.my,
                    _ => mt.mxy,
                };
                (v, Quantity::Moment)
            }
        };
        let coefficient = match cfg.solver.reference_length {
            Some(l) if q != 0.0 => Some(normalize_coefficient(value, kind, l, q, rigidity)?),
            _ => None,
        };
        probes.push(ProbeResult { x: pc.x, y: pc.y, quantity: pc.quantity, value, coefficient });
    }

    let equivalence = if options.check_equivalence {
        Some(equivalence_check_with(&model, &build_equivalent_mono(&model)?, None)?)
    } else {
        None
    };

    Ok(ResultReport {
        nodes: system.nodes.len(),
        dofs: system.dof_count(),
        free_dofs: reduced.free.len(),
        elements: cfg
            .elements
            .iter()
            .map(|e| ElementSummary { m: e.m, rl_label: rl_label(e.m), nodes: mrplate::geometry::node_count(e.m) })
            .collect(),
        total_load: system.total_load,
        vertical_reaction: sol.vertical_reaction(),
        max_deflection: sol.max_deflection(),
        residual: sol.residual,
        probes,
        equivalence,
    })
}

/// Equivalence check against the conventional twin; `perturb_k` is a test hook.
pub fn verify_config(cfg: &ProblemConfig, perturb_k: Option<f64>) -> Result<EquivalenceReport> {
    let model = cfg.to_model(false)?;
    Ok(equivalence_check_with(&model, &build_equivalent_mono(&model)?, perturb_k)?)
}

/// Six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

impl ResultReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let labels: Vec<String> = self.elements.iter().map(|e| format!("m={} ({})", e.m, e.rl_label)).collect();
        let _ = writeln!(out, "elements: {}", labels.join(", "));
        let _ = writeln!(out, "nodes: {}  dofs: {}  free: {}", self.nodes, self.dofs, self.free_dofs);
        let _ = writeln!(
            out,
            "load: {}  reaction: {}  residual: {}",
            sig6(self.total_load),
            sig6(self.vertical_reaction),
            sig6(self.residual)
        );
        let _ = writeln!(out, "max |w|: {}", sig6(self.max_deflection));
        if !self.probes.is_empty() {
            let _ = writeln!(out, "{:<12} {:>12} {:>12} {:>14} {:>14}", "quantity", "x", "y", "value", "coefficient");
            for p in &self.probes {
                let _ = writeln!(
                    out,
                    "{:<12} {:>12} {:>12} {:>14} {:>14}",
                    p.quantity.name(),
                    sig6(p.x),
                    sig6(p.y),
                    sig6(p.value),
                    p.coefficient.map(sig6).unwrap_or_else(|| "-".into())
                );
            }
        }
        if let Some(eq) = &self.equivalence {
            let _ = writeln!(out, "{}", equivalence_line(eq));
        }
        out
    }
}

pub fn equivalence_line(eq: &EquivalenceReport) -> String {
    format!(
        "equivalence: {}  K diff {}  rhs diff {}  solution diff {}  nodes {}/{}",
        if eq.pass { "PASS" } else { "FAIL" },
        sig6(eq.max_k_diff),
        sig6(eq.max_rhs_diff),
        sig6(eq.max_solution_diff),
        eq.multi_nodes,
        eq.mono_nodes
    )
}
