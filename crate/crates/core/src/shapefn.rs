//! Shape functions: the split-node cubic functions on each hexagon
//! sub-domain, the full-node functions `φ, φ_x, φ_y` around a node, and the
//! scaled and shifted basis of a scale-`m` element.
//!
//! Rotations follow `θx = ∂w/∂y`, `θy = −∂w/∂x`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::geometry::{
    barycentric, hexagon_domain_of, lattice_coords, node_position_unchecked, subtriangle_partition, HexDomain,
    LocalFrame, NodeIndex, Point2,
};
use crate::quadrature::TriangleRule;
use crate::scalar::Scalar;

/// Value, gradient `(∂x, ∂y)` and Hessian `(∂xx, ∂yy, ∂xy)` of a scalar field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShapeEval<T> {
    pub value: T,
    pub grad: [T; 2],
    pub hess: [T; 3],
}

impl<T: Scalar> ShapeEval<T> {
    pub fn zero() -> Self {
        Self { value: T::zero(), grad: [T::zero(); 2], hess: [T::zero(); 3] }
    }

    /// Multiplies value, gradient and Hessian by separate factors.
    pub fn scaled(self, value: T, grad: T, hess: T) -> Self {
        Self { value: self.value * value, grad: self.grad.map(|g| g * grad), hess: self.hess.map(|h| h * hess) }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.grad.iter().all(|g| g.is_finite()) && self.hess.iter().all(|h| h.is_finite())
    }
}

/// Second-order jet of a function of `(x, y)`.
#[derive(Debug, Clone, Copy)]
struct Jet<T> {
    v: T,
    dx: T,
    dy: T,
    dxx: T,
    dyy: T,
    dxy: T,
}

impl<T: Scalar> Jet<T> {
    fn affine(v: T, dx: T, dy: T) -> Self {
        let z = T::zero();
        Self { v, dx, dy, dxx: z, dyy: z, dxy: z }
    }

    fn constant(v: T) -> Self {
        Self::affine(v, T::zero(), T::zero())
    }

    fn scale(self, k: T) -> Self {
        Self {
            v: self.v * k,
            dx: self.dx * k,
            dy: self.dy * k,
            dxx: self.dxx * k,
            dyy: self.dyy * k,
            dxy: self.dxy * k,
        }
    }

    fn eval(self) -> ShapeEval<T> {
        ShapeEval { value: self.v, grad: [self.dx, self.dy], hess: [self.dxx, self.dyy, self.dxy] }
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dyy: self.dyy + o.dyy,
            dxy: self.dxy + o.dxy,
        }
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxx: self.dxx * o.v + T::two() * self.dx * o.dx + self.v * o.dxx,
            dyy: self.dyy * o.v + T::two() * self.dy * o.dy + self.v * o.dyy,
            dxy: self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
        }
    }
}

/// Area coordinates of each hexagon sub-domain as jets of the lattice
/// coordinates `u = x/a + y/b`, `v = (1/h − 1/b)y − x/a`, `w = y/h`.
fn area_coordinates<T: Scalar>(domain: HexDomain, p: Point2<T>, frame: &LocalFrame<T>) -> [Jet<T>; 3] {
    let (u, v, w) = lattice_coords(p, frame);
    let inv_a = T::one() / frame.a();
    let inv_h = T::one() / frame.h();
    let inv_b = frame.inv_b();
    let u = Jet::affine(u, inv_a, inv_b);
    let v = Jet::affine(v, -inv_a, inv_h - inv_b);
    let w = Jet::affine(w, T::zero(), inv_h);
    let one = Jet::constant(T::one());
    match domain {
        HexDomain::D1 => [one - u, -v, w],
        HexDomain::D2 => [u, v, one - w],
        HexDomain::D3 => [-u, one - v, w],
        HexDomain::D4 => [one + u, v, -w],
        HexDomain::D5 => [-u, -v, one + w],
        HexDomain::D6 => [u, one + v, -w],
        HexDomain::Outside => unreachable!("area coordinates requested outside the hexagon"),
    }
}

/// Split-node functions `(N_i, N_xi, N_yi)` of the hexagon centre on one
/// sub-domain, evaluated at `p` (relative to the node). No containment check.
pub(crate) fn split_shape_eval_unchecked<T: Scalar>(
    domain: HexDomain,
    p: Point2<T>,
    frame: &LocalFrame<T>,
) -> [ShapeEval<T>; 3] {
    let (Some(tri), Some(i)) = (domain.triangle(frame), domain.centre_vertex()) else {
        return [ShapeEval::zero(); 3];
    };
    let l = area_coordinates(domain, p, frame);
    let j = (i + 1) % 3;
    let k = (i + 2) % 3;
    // b_i = y_j − y_k, c_i = x_k − x_j on the sub-domain's own triangle
    let bc = |n: usize| {
        let (pj, pk) = (tri[(n + 1) % 3], tri[(n + 2) % 3]);
        (pj.y - pk.y, pk.x - pj.x)
    };
    let (bj, cj) = bc(j);
    let (bk, ck) = bc(k);

    let li2 = l[i] * l[i];
    let half_p = (l[0] * l[1] * l[2]).scale(T::half());
    let n = l[i] + li2 * l[j] + li2 * l[k] - l[i] * l[j] * l[j] - l[i] * l[k] * l[k];
    let toward_j = li2 * l[j] + half_p;
    let toward_k = l[k] * li2 + half_p;
    let nx = toward_k.scale(bj) - toward_j.scale(bk);
    let ny = toward_k.scale(cj) - toward_j.scale(ck);
    [n.eval(), nx.eval(), ny.eval()]
}

/// Split-node shape functions on a named hexagon sub-domain.
pub fn split_shape_eval<T: Scalar>(
    domain: HexDomain,
    p: Point2<T>,
    frame: &LocalFrame<T>,
) -> Result<[ShapeEval<T>; 3]> {
    let outside = || Error::OutsideDomain { x: p.x.to_f64_lossy(), y: p.y.to_f64_lossy() };
    let tri = domain.triangle(frame).ok_or_else(outside)?;
    let tol = T::lit(1e-10);
    if barycentric(p, &tri).iter().any(|&l| l < -tol) {
        return Err(outside());
    }
    Ok(split_shape_eval_unchecked(domain, p, frame))
}

/// Full-node functions `(φ, φ_x, φ_y)` at `p` relative to the node; zero outside
/// the hexagon.
pub fn full_node_eval<T: Scalar>(p: Point2<T>, frame: &LocalFrame<T>) -> [ShapeEval<T>; 3] {
    match hexagon_domain_of(p, frame) {
        HexDomain::Outside => [ShapeEval::zero(); 3],
        d => split_shape_eval_unchecked(d, p, frame),
    }
}

/// The basis triple `[φ, φ_x/m, φ_y/m]` of one grid node, evaluated in element
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BasisTriple<T> {
    pub w_fn: ShapeEval<T>,
    pub thx_fn: ShapeEval<T>,
    pub thy_fn: ShapeEval<T>,
}

impl<T: Scalar> BasisTriple<T> {
    pub fn components(&self) -> [ShapeEval<T>; 3] {
        [self.w_fn, self.thx_fn, self.thy_fn]
    }

    fn from_scaled(raw: [ShapeEval<T>; 3], m: usize) -> Self {
        let mm = T::count(m);
        let rot = T::one() / mm;
        Self {
            w_fn: raw[0].scaled(T::one(), mm, mm * mm),
            thx_fn: raw[1].scaled(rot, T::one(), mm),
            thy_fn: raw[2].scaled(rot, T::one(), mm),
        }
    }
}

/// Scaled argument `m·(p − x_rs)` of node `idx`'s basis function.
#[inline]
fn scaled_argument<T: Scalar>(frame: &LocalFrame<T>, m: usize, idx: NodeIndex, p: Point2<T>) -> Point2<T> {
    (p - node_position_unchecked(frame, m, idx)) * T::count(m)
}

/// Basis triple of node `idx` at scale `m`, at element point `p`.
pub fn basis_eval<T: Scalar>(frame: &LocalFrame<T>, m: usize, idx: NodeIndex, p: Point2<T>) -> Result<BasisTriple<T>> {
    idx.check(m)?;
    let q = scaled_argument(frame, m, idx, p);
    Ok(BasisTriple::from_scaled(full_node_eval(q, frame), m))
}

/// Same as [`basis_eval`], but with the hexagon sub-domain fixed by the caller.
/// Used when the sub-triangle containing `p` is already known, so that points on
/// cell edges take one-sided derivatives from that cell.
pub fn basis_eval_in_domain<T: Scalar>(
    frame: &LocalFrame<T>,
    m: usize,
    idx: NodeIndex,
    domain: HexDomain,
    p: Point2<T>,
) -> BasisTriple<T> {
    let q = scaled_argument(frame, m, idx, p);
    BasisTriple::from_scaled(split_shape_eval_unchecked(domain, q, frame), m)
}

/// Result of projecting one scale-`m` basis function onto the scale-`2m` span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestingReport<T> {
    /// `‖f‖_L2` over the element.
    pub norm: T,
    /// `‖f − Πf‖_L2` of the least-squares projection.
    pub residual: T,
}

impl<T: Scalar> NestingReport<T> {
    pub fn relative(&self) -> T {
        if self.norm == T::zero() {
            T::zero()
        } else {
            self.residual / self.norm
        }
    }
}

/// L2 projection of a scale-`m` basis function (component 0 = w, 1 = θx,
/// 2 = θy) onto the span of the scale-`2m` basis, over the element.
///
/// This is a diagnostic for the nesting of successive scales; a nonzero
/// residual means the coarse function is not in the fine span.
pub fn nesting_residual<T: Scalar>(
    frame: &LocalFrame<T>,
    m: usize,
    idx: NodeIndex,
    component: usize,
) -> Result<NestingReport<T>> {
    idx.check(m)?;
    if component > 2 {
        return Err(Error::DimensionMismatch { expected: 3, found: component });
    }
    let fine = 2 * m;
    let n = 3 * crate::geometry::node_count(fine);
    let rule = TriangleRule::<T>::with_degree(6);
    let mut gram = DenseMatrix::zeros(n, n);
    let mut rhs = vec![T::zero(); n];
    let mut norm2 = T::zero();
    // fine cells are contained in coarse cells, so the coarse function is a
    // single cubic on each fine cell
    for cell in subtriangle_partition(frame, fine) {
        let area = cell.area();
        for (bary, &wt) in rule.points.iter().zip(&rule.weights) {
            let p = cell.vertices[0] * bary[0] + cell.vertices[1] * bary[1] + cell.vertices[2] * bary[2];
            let coarse = basis_eval(frame, m, idx, p)?.components()[component].value;
            let jw = wt * area;
            norm2 += jw * coarse * coarse;
            let mut local = [(0usize, T::zero()); 9];
            for (c, (&node, &dom)) in cell.corner_nodes.iter().zip(&cell.corner_domains).enumerate() {
                let b = basis_eval_in_domain(frame, fine, node, dom, p).components();
                for k in 0..3 {
                    local[3 * c + k] = (3 * node.linear(fine) + k, b[k].value);
                }
            }
            for &(gi, vi) in &local {
                rhs[gi] += jw * vi * coarse;
                for &(gj, vj) in &local {
                    gram[(gi, gj)] += jw * vi * vj;
                }
            }
        }
    }
    let coef = gram.cholesky_solve(&rhs)?;
    let projected: T = coef.iter().zip(&rhs).map(|(&c, &b)| c * b).sum();
    let residual = (norm2 - projected).max(T::zero()).sqrt();
    Ok(NestingReport { norm: norm2.sqrt(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::canonicalize_triangle;
    use approx::assert_relative_eq;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn vertex_one_is_kronecker() {
        let f = LocalFrame::<f64>::unit();
        let [n, nx, ny] = split_shape_eval(HexDomain::D1, p(0.0, 0.0), &f).unwrap();
        assert_relative_eq!(n.value, 1.0);
        assert_relative_eq!(nx.value, 0.0);
        assert_relative_eq!(ny.value, 0.0);
    }

    #[test]
    fn centroid_values_on_unit_frame() {
        // L = (1/3, 1/3, 1/3): N1 = 1/3; Nx1 = -b3(1/27 + 1/54) + b2(1/27 + 1/54) with b3 = 0, b2 = 1
        let f = LocalFrame::<f64>::unit();
        let c = p(1.0 / 3.0, 1.0 / 3.0);
        let [n, nx, _] = split_shape_eval(HexDomain::D1, c, &f).unwrap();
        assert_relative_eq!(n.value, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(nx.value, 1.0 / 18.0, epsilon = 1e-15);
    }

    #[test]
    fn outside_domain_is_an_error() {
        let f = LocalFrame::<f64>::unit();
        assert!(matches!(split_shape_eval(HexDomain::D1, p(-0.5, -0.5), &f), Err(Error::OutsideDomain { .. })));
        assert!(split_shape_eval(HexDomain::Outside, p(0.1, 0.1), &f).is_err());
    }

    #[test]
    fn centre_node_kronecker_in_every_domain() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.2, 0.0), p(0.5, 0.9)).unwrap();
        for d in HexDomain::ALL {
            let [phi, phx, phy] = split_shape_eval(d, p(0.0, 0.0), &f).unwrap();
            assert_relative_eq!(phi.value, 1.0, epsilon = 1e-14);
            assert_relative_eq!(phi.grad[0], 0.0, epsilon = 1e-13);
            assert_relative_eq!(phi.grad[1], 0.0, epsilon = 1e-13);
            assert_relative_eq!(phx.grad[0], 0.0, epsilon = 1e-13);
            assert_relative_eq!(phx.grad[1], 1.0, epsilon = 1e-13);
            assert_relative_eq!(phy.grad[0], -1.0, epsilon = 1e-13);
            assert_relative_eq!(phy.grad[1], 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn far_point_is_zero() {
        let f = LocalFrame::<f64>::unit();
        for e in full_node_eval(p(5.0, -3.0), &f) {
            assert_eq!(e, ShapeEval::zero());
        }
    }

    #[test]
    fn scale_one_basis_reduces_to_conventional_functions() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.0, 0.1), p(0.2, 0.9)).unwrap();
        let q = p(0.31, 0.22);
        let b = basis_eval(&f, 1, NodeIndex::new(0, 0), q).unwrap();
        let conv = split_shape_eval(HexDomain::D1, q, &f).unwrap();
        assert_eq!(b.components(), conv);
    }

    #[test]
    fn nesting_diagnostic_runs() {
        let f = LocalFrame::<f64>::unit();
        let rep = nesting_residual(&f, 1, NodeIndex::new(0, 0), 0).unwrap();
        assert!(rep.norm > 0.0);
        assert!(rep.residual.is_finite() && rep.residual >= 0.0);
        assert!(rep.relative() < 1.0);
    }
}
