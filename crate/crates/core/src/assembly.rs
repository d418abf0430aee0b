//! Global model assembly: local-to-global transformation, node merging along
//! shared edges, sparse scatter and boundary-condition elimination.
//!
//! Global DOFs are ordered `(w, θX, θY)` per merged node, in order of first
//! appearance (element order, then s-major node order).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::element::{element_load_point, element_load_uniform_with, element_stiffness_with, MRElement, PlateMaterial};
use crate::error::{Error, Result};
use crate::geometry::{canonicalize_triangle, node_position_unchecked, segment_distance, LocalFrame, Point2};
use crate::quadrature::TriangleRule;
use crate::scalar::Scalar;
use crate::sparse::{SparseSymmetric, TripletBuilder};

/// Edge support type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `w = θX = θY = 0`.
    Clamped,
    /// Soft simple support, `w = 0` only.
    SimplySupported,
    /// `w = 0` and zero slope along the edge.
    HardSimplySupported,
    /// Mirror plane through the edge: zero slope normal to it.
    Symmetry,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition<T> {
    pub edge: [Point2<T>; 2],
    pub kind: BoundaryKind,
}

impl<T: Scalar> BoundaryCondition<T> {
    pub fn new(p0: Point2<T>, p1: Point2<T>, kind: BoundaryKind) -> Self {
        Self { edge: [p0, p1], kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointLoad<T> {
    pub at: Point2<T>,
    pub magnitude: T,
}

/// Element placement: three global vertices and a scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementSpec<T> {
    pub vertices: [Point2<T>; 3],
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model<T> {
    pub elements: Vec<ElementSpec<T>>,
    pub material: PlateMaterial<T>,
    pub bcs: Vec<BoundaryCondition<T>>,
    pub uniform_q: T,
    pub point_loads: Vec<PointLoad<T>>,
    /// Defaults to `1e-9 ×` the bounding-box diagonal.
    pub merge_tolerance: Option<T>,
    pub quadrature_degree: usize,
}

impl<T: Scalar> Model<T> {
    pub fn new(elements: Vec<ElementSpec<T>>, material: PlateMaterial<T>) -> Self {
        Self {
            elements,
            material,
            bcs: Vec::new(),
            uniform_q: T::zero(),
            point_loads: Vec::new(),
            merge_tolerance: None,
            quadrature_degree: 5,
        }
    }

    pub fn with_bc(mut self, p0: Point2<T>, p1: Point2<T>, kind: BoundaryKind) -> Self {
        self.bcs.push(BoundaryCondition::new(p0, p1, kind));
        self
    }

    pub fn with_uniform_load(mut self, q: T) -> Self {
        self.uniform_q = q;
        self
    }

    pub fn with_point_load(mut self, at: Point2<T>, magnitude: T) -> Self {
        self.point_loads.push(PointLoad { at, magnitude });
        self
    }

    pub fn bounding_diagonal(&self) -> T {
        let mut lo = Point2::new(T::infinity(), T::infinity());
        let mut hi = Point2::new(T::neg_infinity(), T::neg_infinity());
        for v in self.elements.iter().flat_map(|e| e.vertices) {
            lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (hi - lo).norm()
    }

    pub fn tolerance(&self) -> T {
        self.merge_tolerance.unwrap_or_else(|| T::lit(1e-9) * self.bounding_diagonal())
    }

    /// Canonical elements in model order.
    pub fn build_elements(&self) -> Result<Vec<MRElement<T>>> {
        if self.elements.is_empty() {
            return Err(Error::InvalidModel("model has no elements".into()));
        }
        self.elements
            .iter()
            .map(|spec| {
                let [v1, v2, v3] = spec.vertices;
                MRElement::new(canonicalize_triangle(v1, v2, v3)?, spec.m, self.material)
            })
            .collect()
    }

    pub fn total_area(&self) -> Result<T> {
        Ok(self.build_elements()?.iter().map(|e| e.frame.area()).sum())
    }

    /// `q·A + ΣP`.
    pub fn total_load(&self) -> Result<T> {
        Ok(self.uniform_q * self.total_area()? + self.point_loads.iter().map(|p| p.magnitude).sum::<T>())
    }
}

/// Per-node direction-cosine block `λ` with `a_local = λ · a_global`.
pub fn node_lambda<T: Scalar>(frame: &LocalFrame<T>) -> [[T; 3]; 3] {
    let (c, s) = frame.direction_cosines();
    let z = T::zero();
    [[T::one(), z, z], [z, c, s], [z, -s, c]]
}

/// Block-diagonal transformation `T` with one `λ` per node.
pub fn transformation_matrix<T: Scalar>(frame: &LocalFrame<T>, node_count: usize) -> DenseMatrix<T> {
    let lambda = node_lambda(frame);
    let mut t = DenseMatrix::zeros(3 * node_count, 3 * node_count);
    for n in 0..node_count {
        for i in 0..3 {
            for j in 0..3 {
                t[(3 * n + i, 3 * n + j)] = lambda[i][j];
            }
        }
    }
    t
}

/// `(Tᵀ K T, Tᵀ f, Tᵀ F)`.
pub fn to_global<T: Scalar>(
    k: &DenseMatrix<T>,
    f: &[T],
    f_point: &[T],
    t: &DenseMatrix<T>,
) -> Result<(DenseMatrix<T>, Vec<T>, Vec<T>)> {
    let n = t.rows();
    if k.rows() != n || k.cols() != n || t.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: k.rows() });
    }
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    if f_point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f_point.len() });
    }
    Ok((k.congruence(t)?, t.tr_matvec(f)?, t.tr_matvec(f_point)?))
}

/// `λᵀ K_IJ λ` on every 3×3 block; equivalent to [`to_global`] for a
/// block-diagonal `T` without forming it.
fn blockwise_to_global<T: Scalar>(k: &DenseMatrix<T>, lambda: &[[T; 3]; 3]) -> DenseMatrix<T> {
    let n = k.rows() / 3;
    let mut out = DenseMatrix::zeros(k.rows(), k.cols());
    for bi in 0..n {
        for bj in 0..n {
            let mut kl = [[T::zero(); 3]; 3];
            for a in 0..3 {
                for c in 0..3 {
                    kl[a][c] = (0..3).map(|l| k[(3 * bi + a, 3 * bj + l)] * lambda[l][c]).sum();
                }
            }
            for a in 0..3 {
                for c in 0..3 {
                    out[(3 * bi + a, 3 * bj + c)] = (0..3).map(|l| lambda[l][a] * kl[l][c]).sum();
                }
            }
        }
    }
    out
}

fn vector_to_global<T: Scalar>(f: &[T], lambda: &[[T; 3]; 3]) -> Vec<T> {
    let mut out = vec![T::zero(); f.len()];
    for (node, chunk) in f.chunks(3).enumerate() {
        for c in 0..3 {
            out[3 * node + c] = (0..3).map(|l| lambda[l][c] * chunk[l]).sum();
        }
    }
    out
}

/// Assembled, unconstrained global system.
#[derive(Debug, Clone)]
pub struct GlobalSystem<T> {
    pub elements: Vec<MRElement<T>>,
    /// Merged node positions.
    pub nodes: Vec<Point2<T>>,
    /// `dof_map[e][k]` is the global node of element `e`'s k-th node (s-major).
    pub dof_map: Vec<Vec<usize>>,
    pub k: SparseSymmetric<T>,
    pub rhs: Vec<T>,
    pub merge_tolerance: T,
    pub total_load: T,
}

impl<T: Scalar> GlobalSystem<T> {
    pub fn dof_count(&self) -> usize {
        3 * self.nodes.len()
    }

    /// Element indices whose closed triangle contains global point `p`.
    pub fn owners(&self, p: Point2<T>) -> Vec<usize> {
        let tol = T::lit(1e-10);
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.frame.contains_local(e.frame.to_local(p), tol))
            .map(|(i, _)| i)
            .collect()
    }
}

struct NodeMerger<T> {
    tol: T,
    cell: T,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    nodes: Vec<Point2<T>>,
}

impl<T: Scalar> NodeMerger<T> {
    fn new(tol: T) -> Self {
        Self { tol, cell: tol * T::lit(4.0), buckets: HashMap::new(), nodes: Vec::new() }
    }

    fn key(&self, p: Point2<T>) -> (i64, i64) {
        let k = |v: T| (v / self.cell).floor().to_i64().unwrap_or(i64::MAX);
        (k(p.x), k(p.y))
    }

    fn insert(&mut self, p: Point2<T>) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if let Some(&g) = list.iter().find(|&&g| self.nodes[g].dist(p) <= self.tol) {
                        return g;
                    }
                }
            }
        }
        let g = self.nodes.len();
        self.nodes.push(p);
        self.buckets.entry((kx, ky)).or_default().push(g);
        g
    }
}

/// Assembles stiffness and load of the whole model in the global frame.
pub fn assemble<T: Scalar>(model: &Model<T>) -> Result<GlobalSystem<T>> {
    model.material.validate()?;
    let elements = model.build_elements()?;
    let tol = model.tolerance();
    let rule = TriangleRule::with_degree(model.quadrature_degree);

    let mut merger = NodeMerger::new(tol);
    let mut dof_map = Vec::with_capacity(elements.len());
    for elem in &elements {
        let map: Vec<usize> = elem
            .nodes()
            .into_iter()
            .map(|idx| merger.insert(elem.frame.to_global(node_position_unchecked(&elem.frame, elem.m, idx))))
            .collect();
        dof_map.push(map);
    }
    let nodes = merger.nodes;
    check_interfaces(&elements, &dof_map, &nodes, tol)?;

    let ndof = 3 * nodes.len();
    let mut builder = TripletBuilder::new(ndof);
    let mut rhs = vec![T::zero(); ndof];
    for (e, elem) in elements.iter().enumerate() {
        let lambda = node_lambda(&elem.frame);
        let k = blockwise_to_global(&element_stiffness_with(elem, &rule)?, &lambda);
        let f = vector_to_global(&element_load_uniform_with(elem, model.uniform_q, &rule)?, &lambda);
        let dofs: Vec<usize> = dof_map[e].iter().flat_map(|&g| [3 * g, 3 * g + 1, 3 * g + 2]).collect();
        for (i, &gi) in dofs.iter().enumerate() {
            rhs[gi] += f[i];
            for (j, &gj) in dofs.iter().enumerate() {
                let v = k[(i, j)];
                if v != T::zero() {
                    builder.add(gi, gj, v);
                }
            }
        }
    }

    let mut system = GlobalSystem {
        elements,
        nodes,
        dof_map,
        k: builder.build(),
        rhs,
        merge_tolerance: tol,
        total_load: model.total_load()?,
    };
    for load in &model.point_loads {
        add_point_load(&mut system, load)?;
    }
    Ok(system)
}

/// Point loads go to the lowest-index element containing them.
fn add_point_load<T: Scalar>(system: &mut GlobalSystem<T>, load: &PointLoad<T>) -> Result<()> {
    let owner = *system
        .owners(load.at)
        .first()
        .ok_or(Error::OutsideModel { x: load.at.x.to_f64_lossy(), y: load.at.y.to_f64_lossy() })?;
    let elem = &system.elements[owner];
    let local = elem.frame.to_local(load.at);
    let f = vector_to_global(&element_load_point(elem, load.magnitude, local)?, &node_lambda(&elem.frame));
    for (k, &g) in system.dof_map[owner].iter().enumerate() {
        for c in 0..3 {
            system.rhs[3 * g + c] += f[3 * k + c];
        }
    }
    Ok(())
}

/// Every boundary node of one element that lies on another element's edge
/// must be a node of that element too.
fn check_interfaces<T: Scalar>(
    elements: &[MRElement<T>],
    dof_map: &[Vec<usize>],
    nodes: &[Point2<T>],
    tol: T,
) -> Result<()> {
    let node_sets: Vec<BTreeSet<usize>> = dof_map.iter().map(|m| m.iter().copied().collect()).collect();
    for (e, elem) in elements.iter().enumerate() {
        let m = elem.m;
        for (k, idx) in elem.nodes().into_iter().enumerate() {
            let on_boundary = idx.s == 0 || idx.r == m || idx.r == idx.s;
            if !on_boundary {
                continue;
            }
            let g = dof_map[e][k];
            let p = nodes[g];
            for (f, other) in elements.iter().enumerate() {
                if f == e || node_sets[f].contains(&g) {
                    continue;
                }
                let [a, b, c] = other.frame.global_vertices();
                let on_edge = [(a, b), (b, c), (c, a)].iter().any(|&(p0, p1)| segment_distance(p, p0, p1) <= tol);
                if on_edge {
                    return Err(Error::NodeMismatch { first: e.min(f), second: e.max(f) });
                }
            }
        }
    }
    Ok(())
}

/// Global system after boundary conditions, with constrained DOFs eliminated.
#[derive(Debug, Clone)]
pub struct ReducedSystem<T> {
    /// Global system in the node frames used for constraints.
    pub global: GlobalSystem<T>,
    /// Per-node rotation `Q` of the `(θX, θY)` pair: `θ_global = Q · θ_node`.
    /// Identity for nodes without an oblique constraint.
    pub node_frames: Vec<[[T; 2]; 2]>,
    pub constrained: Vec<usize>,
    pub free: Vec<usize>,
    pub k: SparseSymmetric<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> ReducedSystem<T> {
    /// Maps a full DOF vector in node frames to global axes.
    pub fn to_global_axes(&self, a: &[T]) -> Vec<T> {
        let mut out = a.to_vec();
        for (g, q) in self.node_frames.iter().enumerate() {
            let (t1, t2) = (a[3 * g + 1], a[3 * g + 2]);
            out[3 * g + 1] = q[0][0] * t1 + q[0][1] * t2;
            out[3 * g + 2] = q[1][0] * t1 + q[1][1] * t2;
        }
        out
    }

    /// Scatters a reduced solution into a full vector (node frames).
    pub fn expand(&self, reduced: &[T]) -> Vec<T> {
        let mut full = vec![T::zero(); self.global.dof_count()];
        for (&dof, &v) in self.free.iter().zip(reduced) {
            full[dof] = v;
        }
        full
    }
}

#[derive(Default)]
struct NodeConstraint<T> {
    w: bool,
    /// Unit directions `d` in `(θX, θY)` space with `d · θ = 0` imposed.
    directions: Vec<[T; 2]>,
}

/// Applies edge supports and eliminates the constrained DOFs.
pub fn apply_boundary_conditions<T: Scalar>(
    system: &GlobalSystem<T>,
    bcs: &[BoundaryCondition<T>],
) -> Result<ReducedSystem<T>> {
    let nn = system.nodes.len();
    let tol = system.merge_tolerance;
    let mut cons: Vec<NodeConstraint<T>> =
        (0..nn).map(|_| NodeConstraint { w: false, directions: Vec::new() }).collect();

    for (index, bc) in bcs.iter().enumerate() {
        let [p0, p1] = bc.edge;
        let on_edge: Vec<usize> = (0..nn).filter(|&g| segment_distance(system.nodes[g], p0, p1) <= tol).collect();
        if on_edge.is_empty() {
            return Err(Error::EmptyEdge { index });
        }
        let len = (p1 - p0).norm();
        if !(len > T::zero()) {
            return Err(Error::InvalidModel(format!("boundary condition {index} has a zero-length edge")));
        }
        let t = (p1 - p0) * (T::one() / len);
        // t·∇w = t_Y θX − t_X θY and n·∇w = t_X θX + t_Y θY for n = (−t_Y, t_X)
        let tangential = [t.y, -t.x];
        let normal = [t.x, t.y];
        for g in on_edge {
            let c = &mut cons[g];
            match bc.kind {
                BoundaryKind::Clamped => {
                    c.w = true;
                    c.directions.push([T::one(), T::zero()]);
                    c.directions.push([T::zero(), T::one()]);
                }
                BoundaryKind::SimplySupported => c.w = true,
                BoundaryKind::HardSimplySupported => {
                    c.w = true;
                    c.directions.push(tangential);
                }
                BoundaryKind::Symmetry => c.directions.push(normal),
                BoundaryKind::Free => {}
            }
        }
    }

    let eps = T::lit(1e-9);
    let identity = [[T::one(), T::zero()], [T::zero(), T::one()]];
    let mut node_frames = vec![identity; nn];
    let mut constrained = BTreeSet::new();
    for (g, c) in cons.iter().enumerate() {
        if c.w {
            constrained.insert(3 * g);
        }
        let Some(&d0) = c.directions.first() else { continue };
        let independent = c.directions.iter().any(|d| (d0[0] * d[1] - d0[1] * d[0]).abs() > eps);
        if independent {
            constrained.insert(3 * g + 1);
            constrained.insert(3 * g + 2);
        } else if d0[1].abs() <= eps {
            constrained.insert(3 * g + 1);
        } else if d0[0].abs() <= eps {
            constrained.insert(3 * g + 2);
        } else {
            // first node-frame component along d0, second perpendicular
            node_frames[g] = [[d0[0], -d0[1]], [d0[1], d0[0]]];
            constrained.insert(3 * g + 1);
        }
    }

    let mut global = system.clone();
    if node_frames.iter().any(|q| *q != identity) {
        rotate_node_frames(&mut global, &node_frames);
    }
    let constrained: Vec<usize> = constrained.into_iter().collect();
    let free: Vec<usize> = (0..global.dof_count()).filter(|d| constrained.binary_search(d).is_err()).collect();
    let k = global.k.principal_submatrix(&free);
    let rhs = free.iter().map(|&d| global.rhs[d]).collect();
    Ok(ReducedSystem { global, node_frames, constrained, free, k, rhs })
}

/// `K ← Gᵀ K G`, `f ← Gᵀ f` for the node-wise θ rotations in `frames`.
fn rotate_node_frames<T: Scalar>(system: &mut GlobalSystem<T>, frames: &[[[T; 2]; 2]]) {
    // column j of G: a_global = Σ_j G[i][j] a_node[j]
    let g_col = |j: usize| -> Vec<(usize, T)> {
        let node = j / 3;
        match j % 3 {
            0 => vec![(j, T::one())],
            c => {
                let q = frames[node];
                vec![(3 * node + 1, q[0][c - 1]), (3 * node + 2, q[1][c - 1])]
            }
        }
    };
    let n = system.dof_count();
    let cols: Vec<Vec<(usize, T)>> = (0..n).map(g_col).collect();
    // rows of Gᵀ: G[i][p] for fixed i is nonzero only for p in i's node block
    let mut g_rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (p, col) in cols.iter().enumerate() {
        for &(i, v) in col {
            g_rows[i].push((p, v));
        }
    }
    let mut b = TripletBuilder::new(n);
    for i in 0..n {
        for (j, v) in system.k.row(i) {
            for &(p, gip) in &g_rows[i] {
                for &(q, gjq) in &g_rows[j] {
                    b.add(p, q, gip * v * gjq);
                }
            }
        }
    }
    system.k = b.build();
    let mut rhs = vec![T::zero(); n];
    for i in 0..n {
        for &(p, gip) in &g_rows[i] {
            rhs[p] += gip * system.rhs[i];
        }
    }
    system.rhs = rhs;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square(m: usize) -> Model<f64> {
        let p = Point2::new;
        Model::new(
            vec![
                ElementSpec { vertices: [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)], m },
                ElementSpec { vertices: [p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], m },
            ],
            PlateMaterial::unit_rigidity(0.3).unwrap(),
        )
    }

    #[test]
    fn identity_transform_for_aligned_frame() {
        let f = LocalFrame::<f64>::unit();
        assert_eq!(transformation_matrix(&f, 4), DenseMatrix::identity(12));
    }

    #[test]
    fn lambda_is_orthogonal() {
        let f = LocalFrame::new(1.0, 1.0, 2.0, Point2::origin(), 0.7).unwrap();
        let l = node_lambda(&f);
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| l[k][i] * l[k][j]).sum();
                assert_relative_eq!(v, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn quarter_turn_maps_local_x_rotation_to_global_y() {
        let f = LocalFrame::new(1.0, 1.0, 2.0, Point2::origin(), std::f64::consts::FRAC_PI_2).unwrap();
        let t = transformation_matrix(&f, 1);
        let global = t.tr_matvec(&[0.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(global[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(global[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn to_global_checks_dimensions() {
        let k = DenseMatrix::<f64>::identity(6);
        let t = DenseMatrix::identity(6);
        assert!(to_global(&k, &[0.0; 6], &[0.0; 5], &t).is_err());
        let (k2, f2, _) = to_global(&k, &[1.0; 6], &[0.0; 6], &t).unwrap();
        assert_eq!(k2, k);
        assert_eq!(f2, vec![1.0; 6]);
    }

    #[test]
    fn blockwise_matches_dense_congruence() {
        let f = LocalFrame::new(1.3, 0.8, 2.0, Point2::new(0.2, 0.1), 1.1).unwrap();
        let elem = MRElement::new(f, 2, PlateMaterial::unit_rigidity(0.3).unwrap()).unwrap();
        let k = crate::element::element_stiffness(&elem).unwrap();
        let t = transformation_matrix(&f, elem.node_count());
        let dense = k.congruence(&t).unwrap();
        let block = blockwise_to_global(&k, &node_lambda(&f));
        for i in 0..k.rows() {
            for j in 0..k.cols() {
                assert_relative_eq!(dense[(i, j)], block[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn two_element_square_merges_diagonal() {
        let sys = assemble(&square(2)).unwrap();
        assert_eq!(sys.nodes.len(), 9);
        assert!(sys.k.asymmetry() <= 1e-12 * sys.k.max_abs());
    }

    #[test]
    fn mismatched_scales_rejected() {
        let mut model = square(2);
        model.elements[1].m = 3;
        assert!(matches!(assemble(&model), Err(Error::NodeMismatch { .. })));
    }

    #[test]
    fn clamped_and_ss_edge_dof_counts() {
        let sys = assemble(&square(2)).unwrap();
        let p = Point2::new;
        let clamped =
            apply_boundary_conditions(&sys, &[BoundaryCondition::new(p(0.0, 0.0), p(1.0, 0.0), BoundaryKind::Clamped)])
                .unwrap();
        assert_eq!(clamped.constrained.len(), 9);
        let ss = apply_boundary_conditions(
            &sys,
            &[BoundaryCondition::new(p(0.0, 0.0), p(1.0, 0.0), BoundaryKind::SimplySupported)],
        )
        .unwrap();
        assert_eq!(ss.constrained.len(), 3);
        let err =
            apply_boundary_conditions(&sys, &[BoundaryCondition::new(p(3.0, 3.0), p(4.0, 3.0), BoundaryKind::Clamped)]);
        assert!(matches!(err, Err(Error::EmptyEdge { index: 0 })));
    }

    #[test]
    fn symmetry_on_x_axis_fixes_theta_x() {
        let sys = assemble(&square(2)).unwrap();
        let p = Point2::new;
        let red = apply_boundary_conditions(
            &sys,
            &[BoundaryCondition::new(p(0.0, 0.0), p(1.0, 0.0), BoundaryKind::Symmetry)],
        )
        .unwrap();
        assert_eq!(red.constrained.len(), 3);
        assert!(red.constrained.iter().all(|d| d % 3 == 1));
    }

    #[test]
    fn oblique_constraint_rotates_node_frame() {
        let sys = assemble(&square(2)).unwrap();
        let p = Point2::new;
        let red = apply_boundary_conditions(
            &sys,
            &[BoundaryCondition::new(p(0.0, 0.0), p(1.0, 1.0), BoundaryKind::Symmetry)],
        )
        .unwrap();
        assert_eq!(red.constrained.len(), 3);
        assert!(red.global.k.asymmetry() <= 1e-12 * red.global.k.max_abs());
        let rotated = red.node_frames.iter().filter(|q| q[0][1] != 0.0).count();
        assert_eq!(rotated, 3);
    }
}
