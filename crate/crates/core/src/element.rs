//! Stiffness and equivalent nodal loads of one multiresolution element.
//!
//! Integrals are taken cell by cell over the `m²` sub-triangles; on each
//! cell only its three corner nodes have nonzero basis functions, which makes
//! the node-block sparsity of the stiffness structural.

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::geometry::{grid_nodes, node_count, subtriangle_partition, LocalFrame, NodeIndex, Point2, SubTriangle};
use crate::quadrature::TriangleRule;
use crate::scalar::Scalar;
use crate::shapefn::{basis_eval, basis_eval_in_domain, BasisTriple};

/// Isotropic plate material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateMaterial<T> {
    /// Young's modulus.
    #[serde(rename = "E")]
    pub e: T,
    /// Thickness.
    pub t: T,
    /// Poisson ratio.
    pub nu: T,
}

impl<T: Scalar> PlateMaterial<T> {
    pub fn new(e: T, t: T, nu: T) -> Result<Self> {
        let mat = Self { e, t, nu };
        mat.validate()?;
        Ok(mat)
    }

    /// Material with flexural rigidity `C_b = 1` for the given Poisson ratio.
    pub fn unit_rigidity(nu: T) -> Result<Self> {
        Self::new(T::lit(12.0) * (T::one() - nu * nu), T::one(), nu)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e > T::zero()) {
            return Err(Error::InvalidMaterial(format!("E must be positive, got {}", self.e)));
        }
        if !(self.t > T::zero()) {
            return Err(Error::InvalidMaterial(format!("t must be positive, got {}", self.t)));
        }
        if !(self.nu >= T::zero() && self.nu < T::half()) {
            return Err(Error::InvalidMaterial(format!("nu must lie in [0, 0.5), got {}", self.nu)));
        }
        Ok(())
    }

    /// `C_b = E t³ / (12 (1 − ν²))`.
    pub fn flexural_rigidity(&self) -> T {
        self.e * self.t.powi(3) / (T::lit(12.0) * (T::one() - self.nu * self.nu))
    }
}

/// Bending constitutive matrix `C_b [[1, ν, 0], [ν, 1, 0], [0, 0, (1 − ν)/2]]`.
pub fn bending_rigidity<T: Scalar>(material: &PlateMaterial<T>) -> [[T; 3]; 3] {
    let cb = material.flexural_rigidity();
    let nu = material.nu;
    let z = T::zero();
    [[cb, cb * nu, z], [cb * nu, cb, z], [z, z, cb * (T::one() - nu) * T::half()]]
}

/// A triangular element at scale `m` with `(m+1)(m+2)/2` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MRElement<T> {
    pub frame: LocalFrame<T>,
    pub m: usize,
    pub material: PlateMaterial<T>,
}

impl<T: Scalar> MRElement<T> {
    pub fn new(frame: LocalFrame<T>, m: usize, material: PlateMaterial<T>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidScale);
        }
        material.validate()?;
        Ok(Self { frame, m, material })
    }

    pub fn node_count(&self) -> usize {
        node_count(self.m)
    }

    pub fn dof_count(&self) -> usize {
        3 * self.node_count()
    }

    /// Nodes in DOF order (s-major).
    pub fn nodes(&self) -> Vec<NodeIndex> {
        grid_nodes(self.m)
    }

    pub fn cells(&self) -> Vec<SubTriangle<T>> {
        subtriangle_partition(&self.frame, self.m)
    }

    /// First cell containing the local point `p`, within a barycentric slack.
    pub fn locate_cell(&self, p: Point2<T>, tol: T) -> Option<SubTriangle<T>> {
        self.cells().into_iter().find(|c| c.contains(p, tol))
    }

    /// Basis triples of a cell's three corners at `p`.
    pub fn cell_basis(&self, cell: &SubTriangle<T>, p: Point2<T>) -> [BasisTriple<T>; 3] {
        [0, 1, 2].map(|k| basis_eval_in_domain(&self.frame, self.m, cell.corner_nodes[k], cell.corner_domains[k], p))
    }
}

/// Stiffness plus distributed and concentrated load vectors of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatrices<T> {
    pub k: DenseMatrix<T>,
    pub f: Vec<T>,
    pub f_point: Vec<T>,
}

/// Curvature block `B` from a basis triple: rows `(κxx, κyy, 2κxy)`, columns
/// `(w, θx, θy)`, with `κ = −(w,xx, w,yy, 2w,xy)`.
pub fn curvature_block<T: Scalar>(triple: &BasisTriple<T>) -> [[T; 3]; 3] {
    let mut b = [[T::zero(); 3]; 3];
    for (col, f) in triple.components().iter().enumerate() {
        b[0][col] = -f.hess[0];
        b[1][col] = -f.hess[1];
        b[2][col] = -T::two() * f.hess[2];
    }
    b
}

/// `B_rs` of node `idx` at local point `p`.
pub fn curvature_b<T: Scalar>(elem: &MRElement<T>, idx: NodeIndex, p: Point2<T>) -> Result<[[T; 3]; 3]> {
    Ok(curvature_block(&basis_eval(&elem.frame, elem.m, idx, p)?))
}

fn check_cell<T: Scalar>(cell: &SubTriangle<T>) -> Result<T> {
    let area = cell.area();
    if !(area > T::zero()) {
        return Err(Error::QuadratureFailure { area: area.to_f64_lossy() });
    }
    Ok(area)
}

#[inline]
fn cell_point<T: Scalar>(cell: &SubTriangle<T>, bary: &[T; 3]) -> Point2<T> {
    cell.vertices[0] * bary[0] + cell.vertices[1] * bary[1] + cell.vertices[2] * bary[2]
}

/// Element stiffness with the default degree-5 rule.
pub fn element_stiffness<T: Scalar>(elem: &MRElement<T>) -> Result<DenseMatrix<T>> {
    element_stiffness_with(elem, &TriangleRule::degree5())
}

/// `K = Σ_cells ∫ Bᵀ D_b B`, assembled block by block in a fixed order.
pub fn element_stiffness_with<T: Scalar>(elem: &MRElement<T>, rule: &TriangleRule<T>) -> Result<DenseMatrix<T>> {
    let m = elem.m;
    let d = bending_rigidity(&elem.material);
    let mut k = DenseMatrix::zeros(elem.dof_count(), elem.dof_count());
    for cell in elem.cells() {
        let area = check_cell(&cell)?;
        let offsets = cell.corner_nodes.map(|n| 3 * n.linear(m));
        for (bary, &wt) in rule.points.iter().zip(&rule.weights) {
            let p = cell_point(&cell, bary);
            let jw = wt * area;
            let bs = elem.cell_basis(&cell, p).map(|t| curvature_block(&t));
            // D·B for each corner
            let dbs = bs.map(|b| {
                let mut db = [[T::zero(); 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        db[i][j] = (0..3).map(|l| d[i][l] * b[l][j]).sum();
                    }
                }
                db
            });
            for (ci, bi) in bs.iter().enumerate() {
                for (cj, dbj) in dbs.iter().enumerate() {
                    for a in 0..3 {
                        for c in 0..3 {
                            let v: T = (0..3).map(|l| bi[l][a] * dbj[l][c]).sum();
                            k[(offsets[ci] + a, offsets[cj] + c)] += jw * v;
                        }
                    }
                }
            }
        }
    }
    Ok(k)
}

/// Equivalent nodal loads of a uniform pressure `q`, default rule.
pub fn element_load_uniform<T: Scalar>(elem: &MRElement<T>, q: T) -> Result<Vec<T>> {
    element_load_uniform_with(elem, q, &TriangleRule::degree5())
}

pub fn element_load_uniform_with<T: Scalar>(elem: &MRElement<T>, q: T, rule: &TriangleRule<T>) -> Result<Vec<T>> {
    let mut f = vec![T::zero(); elem.dof_count()];
    if q == T::zero() {
        return Ok(f);
    }
    for cell in elem.cells() {
        let area = check_cell(&cell)?;
        for (bary, &wt) in rule.points.iter().zip(&rule.weights) {
            let p = cell_point(&cell, bary);
            let jw = wt * area * q;
            for (node, triple) in cell.corner_nodes.iter().zip(elem.cell_basis(&cell, p)) {
                let o = 3 * node.linear(elem.m);
                for (k, comp) in triple.components().iter().enumerate() {
                    f[o + k] += jw * comp.value;
                }
            }
        }
    }
    Ok(f)
}

/// Equivalent nodal loads of a point force `magnitude` at local point `loc`.
pub fn element_load_point<T: Scalar>(elem: &MRElement<T>, magnitude: T, loc: Point2<T>) -> Result<Vec<T>> {
    let cell = elem
        .locate_cell(loc, T::lit(1e-10))
        .ok_or(Error::OutsideElement { x: loc.x.to_f64_lossy(), y: loc.y.to_f64_lossy() })?;
    let mut f = vec![T::zero(); elem.dof_count()];
    for (node, triple) in cell.corner_nodes.iter().zip(elem.cell_basis(&cell, loc)) {
        let o = 3 * node.linear(elem.m);
        for (k, comp) in triple.components().iter().enumerate() {
            f[o + k] += magnitude * comp.value;
        }
    }
    Ok(f)
}

/// Stiffness and both load vectors in one call.
pub fn element_matrices<T: Scalar>(
    elem: &MRElement<T>,
    q: T,
    point_loads: &[(Point2<T>, T)],
    rule: &TriangleRule<T>,
) -> Result<ElementMatrices<T>> {
    let k = element_stiffness_with(elem, rule)?;
    let f = element_load_uniform_with(elem, q, rule)?;
    let mut f_point = vec![T::zero(); elem.dof_count()];
    for &(loc, magnitude) in point_loads {
        for (acc, v) in f_point.iter_mut().zip(element_load_point(elem, magnitude, loc)?) {
            *acc += v;
        }
    }
    Ok(ElementMatrices { k, f, f_point })
}
