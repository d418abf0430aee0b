//! Conventional three-node BCIZ model built from the sub-triangle partition
//! of a multiresolution model, and the check that both give the same system.
//!
//! The conventional element here is written directly in global axes with
//! symbolic polynomials in area coordinates, sharing no shape-function code
//! with the multiresolution path.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assembly::{apply_boundary_conditions, assemble, BoundaryCondition, GlobalSystem, Model, PointLoad};
use crate::dense::DenseMatrix;
use crate::element::{bending_rigidity, MRElement, PlateMaterial};
use crate::error::{Error, Result};
use crate::geometry::{barycentric, canonicalize_triangle, signed_area, Point2};
use crate::quadrature::TriangleRule;
use crate::scalar::Scalar;
use crate::solve::solve_system;
use crate::sparse::{SparseSymmetric, TripletBuilder};

#[derive(Debug, Clone, PartialEq)]
pub struct MonoModel<T> {
    /// Conventional elements, counter-clockwise global vertices.
    pub triangles: Vec<[Point2<T>; 3]>,
    pub material: PlateMaterial<T>,
    pub bcs: Vec<BoundaryCondition<T>>,
    pub uniform_q: T,
    pub point_loads: Vec<PointLoad<T>>,
    pub merge_tolerance: T,
    pub quadrature_degree: usize,
}

/// One conventional triangle per sub-triangle of every element.
pub fn build_equivalent_mono<T: Scalar>(model: &Model<T>) -> Result<MonoModel<T>> {
    let elements = model.build_elements()?;
    let mut triangles = Vec::new();
    for elem in &elements {
        for cell in elem.cells() {
            triangles.push(cell.vertices.map(|v| elem.frame.to_global(v)));
        }
    }
    Ok(MonoModel {
        triangles,
        material: model.material,
        bcs: model.bcs.clone(),
        uniform_q: model.uniform_q,
        point_loads: model.point_loads.clone(),
        merge_tolerance: model.tolerance(),
        quadrature_degree: model.quadrature_degree,
    })
}

/// Cubic polynomial in area coordinates: `Σ c · L1^e0 L2^e1 L3^e2`.
#[derive(Debug, Clone, Default)]
struct AreaPoly<T> {
    terms: Vec<(T, [u8; 3])>,
}

impl<T: Scalar> AreaPoly<T> {
    fn term(mut self, c: T, e: [u8; 3]) -> Self {
        self.terms.push((c, e));
        self
    }

    fn add_scaled(mut self, other: &Self, k: T) -> Self {
        self.terms.extend(other.terms.iter().map(|&(c, e)| (c * k, e)));
        self
    }

    fn eval(&self, l: &[T; 3]) -> T {
        self.terms.iter().map(|&(c, e)| c * (0..3).fold(T::one(), |acc, n| acc * l[n].powi(i32::from(e[n])))).sum()
    }

    fn diff(&self, n: usize) -> Self {
        let mut out = Self::default();
        for &(c, e) in &self.terms {
            if e[n] > 0 {
                let mut e2 = e;
                e2[n] -= 1;
                out.terms.push((c * T::count(usize::from(e[n])), e2));
            }
        }
        out
    }
}

fn exps(i: usize, pi: u8, j: usize, pj: u8, k: usize, pk: u8) -> [u8; 3] {
    let mut e = [0u8; 3];
    e[i] += pi;
    e[j] += pj;
    e[k] += pk;
    e
}

/// `(N_i, N_xi, N_yi)` of node `i` as polynomials in area coordinates.
fn bciz_polys<T: Scalar>(i: usize, b: &[T; 3], c: &[T; 3]) -> [AreaPoly<T>; 3] {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let one = T::one();
    let n = AreaPoly::default()
        .term(one, exps(i, 1, j, 0, k, 0))
        .term(one, exps(i, 2, j, 1, k, 0))
        .term(one, exps(i, 2, j, 0, k, 1))
        .term(-one, exps(i, 1, j, 2, k, 0))
        .term(-one, exps(i, 1, j, 0, k, 2));
    let half = T::half();
    let toward_j = AreaPoly::default().term(one, exps(i, 2, j, 1, k, 0)).term(half, [1, 1, 1]);
    let toward_k = AreaPoly::default().term(one, exps(i, 2, j, 0, k, 1)).term(half, [1, 1, 1]);
    let nx = AreaPoly::default().add_scaled(&toward_k, b[j]).add_scaled(&toward_j, -b[k]);
    let ny = AreaPoly::default().add_scaled(&toward_k, c[j]).add_scaled(&toward_j, -c[k]);
    [n, nx, ny]
}

/// Conventional BCIZ triangle in global axes.
struct MonoTriangle<T> {
    vertices: [Point2<T>; 3],
    area: T,
    /// `∂L_n/∂x`, `∂L_n/∂y`.
    dl: [[T; 2]; 3],
    polys: Vec<AreaPoly<T>>,
    /// Second derivatives `∂²N/∂La∂Lb` for each of the nine functions.
    second: Vec<[[AreaPoly<T>; 3]; 3]>,
}

impl<T: Scalar> MonoTriangle<T> {
    fn new(vertices: [Point2<T>; 3]) -> Result<Self> {
        let area = signed_area(vertices[0], vertices[1], vertices[2]);
        if !(area > T::zero()) {
            return Err(Error::QuadratureFailure { area: area.to_f64_lossy() });
        }
        let mut b = [T::zero(); 3];
        let mut c = [T::zero(); 3];
        for n in 0..3 {
            let (pj, pk) = (vertices[(n + 1) % 3], vertices[(n + 2) % 3]);
            b[n] = pj.y - pk.y;
            c[n] = pk.x - pj.x;
        }
        let two_a = T::two() * area;
        let dl = [0, 1, 2].map(|n| [b[n] / two_a, c[n] / two_a]);
        let polys: Vec<AreaPoly<T>> = (0..3).flat_map(|i| bciz_polys(i, &b, &c)).collect();
        let second = polys
            .iter()
            .map(|p| {
                let d = [p.diff(0), p.diff(1), p.diff(2)];
                [0, 1, 2].map(|a| [0, 1, 2].map(|bb| d[a].diff(bb)))
            })
            .collect();
        Ok(Self { vertices, area, dl, polys, second })
    }

    /// Curvature matrix `B` (3×9) at area coordinates `l`.
    fn curvature(&self, l: &[T; 3]) -> [[T; 9]; 3] {
        let mut out = [[T::zero(); 9]; 3];
        for (f, sec) in self.second.iter().enumerate() {
            let (mut hxx, mut hyy, mut hxy) = (T::zero(), T::zero(), T::zero());
            for a in 0..3 {
                for b in 0..3 {
                    let v = sec[a][b].eval(l);
                    hxx += v * self.dl[a][0] * self.dl[b][0];
                    hyy += v * self.dl[a][1] * self.dl[b][1];
                    hxy += v * self.dl[a][0] * self.dl[b][1];
                }
            }
            out[0][f] = -hxx;
            out[1][f] = -hyy;
            out[2][f] = -T::two() * hxy;
        }
        out
    }

    fn stiffness(&self, d: &[[T; 3]; 3], rule: &TriangleRule<T>) -> DenseMatrix<T> {
        let mut k = DenseMatrix::zeros(9, 9);
        for (l, &wt) in rule.points.iter().zip(&rule.weights) {
            let bm = self.curvature(l);
            let scale = wt * self.area;
            let mut db = [[T::zero(); 9]; 3];
            for r in 0..3 {
                for col in 0..9 {
                    db[r][col] = (0..3).map(|s| d[r][s] * bm[s][col]).sum();
                }
            }
            for i in 0..9 {
                for j in 0..9 {
                    let v: T = (0..3).map(|r| bm[r][i] * db[r][j]).sum();
                    k[(i, j)] += scale * v;
                }
            }
        }
        k
    }

    fn load(&self, q: T, rule: &TriangleRule<T>) -> Vec<T> {
        let mut f = vec![T::zero(); 9];
        for (l, &wt) in rule.points.iter().zip(&rule.weights) {
            for (n, p) in self.polys.iter().enumerate() {
                f[n] += wt * self.area * q * p.eval(l);
            }
        }
        f
    }

    fn point_load(&self, magnitude: T, at: Point2<T>) -> Vec<T> {
        let l = barycentric(at, &self.vertices);
        self.polys.iter().map(|p| magnitude * p.eval(&l)).collect()
    }
}

/// Assembles the conventional model into a [`GlobalSystem`] whose elements
/// are the `m = 1` counterparts of its triangles.
pub fn assemble_mono<T: Scalar>(mono: &MonoModel<T>) -> Result<GlobalSystem<T>> {
    mono.material.validate()?;
    let tol = mono.merge_tolerance;
    let rule = TriangleRule::with_degree(mono.quadrature_degree);
    let d = bending_rigidity(&mono.material);

    let mut nodes: Vec<Point2<T>> = Vec::new();
    let mut dof_map = Vec::with_capacity(mono.triangles.len());
    let mut elements = Vec::with_capacity(mono.triangles.len());
    let mut tris = Vec::with_capacity(mono.triangles.len());
    for verts in &mono.triangles {
        let [v0, v1, v2] = *verts;
        let frame = canonicalize_triangle(v0, v1, v2)?;
        elements.push(MRElement::new(frame, 1, mono.material)?);
        // dof_map follows the canonical frame's node order so that
        // field evaluation on the shared GlobalSystem stays consistent.
        let order = frame.global_vertices();
        let map: Vec<usize> = order
            .iter()
            .map(|&p| match nodes.iter().position(|n| n.dist(p) <= tol) {
                Some(g) => g,
                None => {
                    nodes.push(p);
                    nodes.len() - 1
                }
            })
            .collect();
        dof_map.push(map);
        let ccw = if signed_area(v0, v1, v2) > T::zero() { [v0, v1, v2] } else { [v0, v2, v1] };
        tris.push(MonoTriangle::new(ccw)?);
    }

    let node_of = |p: Point2<T>| nodes.iter().position(|n| n.dist(p) <= tol).expect("merged above");
    let ndof = 3 * nodes.len();
    let mut builder = TripletBuilder::new(ndof);
    let mut rhs = vec![T::zero(); ndof];
    let mut total_area = T::zero();
    for tri in &tris {
        total_area += tri.area;
        let k = tri.stiffness(&d, &rule);
        let f = tri.load(mono.uniform_q, &rule);
        let dofs: Vec<usize> = tri
            .vertices
            .iter()
            .flat_map(|&p| {
                let g = node_of(p);
                [3 * g, 3 * g + 1, 3 * g + 2]
            })
            .collect();
        for (i, &gi) in dofs.iter().enumerate() {
            rhs[gi] += f[i];
            for (j, &gj) in dofs.iter().enumerate() {
                if k[(i, j)] != T::zero() {
                    builder.add(gi, gj, k[(i, j)]);
                }
            }
        }
    }
    let mut total_load = mono.uniform_q * total_area;
    let slack = T::lit(1e-10);
    for load in &mono.point_loads {
        let tri = tris
            .iter()
            .find(|t| barycentric(load.at, &t.vertices).iter().all(|&l| l >= -slack))
            .ok_or(Error::OutsideModel { x: load.at.x.to_f64_lossy(), y: load.at.y.to_f64_lossy() })?;
        let f = tri.point_load(load.magnitude, load.at);
        for (n, &p) in tri.vertices.iter().enumerate() {
            let g = node_of(p);
            for c in 0..3 {
                rhs[3 * g + c] += f[3 * n + c];
            }
        }
        total_load += load.magnitude;
    }

    Ok(GlobalSystem { elements, nodes, dof_map, k: builder.build(), rhs, merge_tolerance: tol, total_load })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// `max |K_multi − P K_mono Pᵀ| / max |K_multi|`.
    pub max_k_diff: f64,
    /// Largest DOF difference relative to the largest DOF magnitude.
    pub max_solution_diff: f64,
    pub max_rhs_diff: f64,
    /// `permutation[g]` is the mono node matching multiresolution node `g`.
    pub permutation: Vec<usize>,
    pub multi_nodes: usize,
    pub mono_nodes: usize,
    pub pass: bool,
}

/// Relative tolerance for [`EquivalenceReport::pass`].
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// Node permutation by coordinate matching.
pub fn match_nodes<T: Scalar>(multi: &[Point2<T>], mono: &[Point2<T>], tol: T) -> Result<Vec<usize>> {
    if multi.len() != mono.len() {
        return Err(Error::PermutationNotFound(format!(
            "{} multiresolution nodes vs {} conventional nodes",
            multi.len(),
            mono.len()
        )));
    }
    let mut used = vec![false; mono.len()];
    multi
        .iter()
        .enumerate()
        .map(|(g, &p)| {
            let found = mono.iter().enumerate().find(|&(h, q)| !used[h] && q.dist(p) <= tol).map(|(h, _)| h);
            match found {
                Some(h) => {
                    used[h] = true;
                    Ok(h)
                }
                None => Err(Error::PermutationNotFound(format!(
                    "node {g} at ({}, {}) has no conventional counterpart",
                    p.x.to_f64_lossy(),
                    p.y.to_f64_lossy()
                ))),
            }
        })
        .collect()
}

fn permuted_k_diff<T: Scalar>(a: &SparseSymmetric<T>, b: &SparseSymmetric<T>, perm: &[usize]) -> T {
    let dof = |g: usize| 3 * perm[g / 3] + g % 3;
    let mut inv = vec![0; a.dim()];
    for i in 0..a.dim() {
        inv[dof(i)] = i;
    }
    let mut worst = T::zero();
    for i in 0..a.dim() {
        let mut row: BTreeMap<usize, T> = a.row(i).collect();
        for (bj, v) in b.row(dof(i)) {
            let av = row.remove(&inv[bj]).unwrap_or_else(T::zero);
            worst = worst.max((av - v).abs());
        }
        for av in row.into_values() {
            worst = worst.max(av.abs());
        }
    }
    worst
}

/// Compares assembled stiffness, loads and constrained solutions.
pub fn equivalence_check<T: Scalar>(model: &Model<T>, mono: &MonoModel<T>) -> Result<EquivalenceReport> {
    equivalence_check_with(model, mono, None)
}

/// As [`equivalence_check`], optionally adding `perturbation` to the first
/// diagonal entry of the conventional stiffness (a negative control).
pub fn equivalence_check_with<T: Scalar>(
    model: &Model<T>,
    mono: &MonoModel<T>,
    perturbation: Option<T>,
) -> Result<EquivalenceReport> {
    let multi_sys = assemble(model)?;
    let mut mono_sys = assemble_mono(mono)?;
    if let Some(delta) = perturbation {
        let mut b = TripletBuilder::new(mono_sys.k.dim());
        for i in 0..mono_sys.k.dim() {
            for (j, v) in mono_sys.k.row(i) {
                b.add(i, j, v);
            }
        }
        b.add(0, 0, delta);
        mono_sys.k = b.build();
    }
    let perm = match_nodes(&multi_sys.nodes, &mono_sys.nodes, multi_sys.merge_tolerance)?;

    let k_scale = multi_sys.k.max_abs().max(T::min_positive_value());
    let max_k_diff = (permuted_k_diff(&multi_sys.k, &mono_sys.k, &perm) / k_scale).to_f64_lossy();

    let dof = |g: usize| 3 * perm[g / 3] + g % 3;
    let f_scale = multi_sys.rhs.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
    let rhs_diff =
        (0..multi_sys.rhs.len()).fold(T::zero(), |acc, i| acc.max((multi_sys.rhs[i] - mono_sys.rhs[dof(i)]).abs()));
    let max_rhs_diff = if f_scale > T::zero() { (rhs_diff / f_scale).to_f64_lossy() } else { rhs_diff.to_f64_lossy() };

    let red_multi = apply_boundary_conditions(&multi_sys, &model.bcs)?;
    let red_mono = apply_boundary_conditions(&mono_sys, &mono.bcs)?;
    let sol_multi = solve_system(&red_multi)?;
    let max_solution_diff = match solve_system(&red_mono) {
        Ok(sol_mono) => {
            let scale = sol_multi.dofs.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
            let diff = (0..sol_multi.dofs.len())
                .fold(T::zero(), |acc, i| acc.max((sol_multi.dofs[i] - sol_mono.dofs[dof(i)]).abs()));
            if scale > T::zero() {
                (diff / scale).to_f64_lossy()
            } else {
                diff.to_f64_lossy()
            }
        }
        Err(_) => f64::INFINITY,
    };

    let pass = max_k_diff < EQUIVALENCE_TOL && max_solution_diff < EQUIVALENCE_TOL && max_rhs_diff < EQUIVALENCE_TOL;
    Ok(EquivalenceReport {
        max_k_diff,
        max_solution_diff,
        max_rhs_diff,
        permutation: perm,
        multi_nodes: multi_sys.nodes.len(),
        mono_nodes: mono_sys.nodes.len(),
        pass,
    })
}
