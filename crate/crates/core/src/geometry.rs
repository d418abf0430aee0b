//! Element geometry: canonical local frames, the scale-`m` node grid, the
//! uniform sub-triangle partition and classification of points into the six
//! triangles of a node's hexagonal support.
//!
//! Every element is described in a local frame where vertex 1 sits at the
//! origin, vertex 2 at `(a, 0)` and vertex 3 at `(x3, h)`. The far sideline
//! crosses the y-axis at `b = h·a / (a − x3)`, so `b ≥ h` is the same as
//! `0 ≤ x3 ≤ a`. A right angle at vertex 2 (`x3 = a`) gives `b = ∞`; all
//! formulas therefore work with `h/b = (a − x3)/a` instead of `b` itself.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

/// Signed area of the triangle `p0 p1 p2` (positive when counter-clockwise).
pub fn signed_area<T: Scalar>(p0: Point2<T>, p1: Point2<T>, p2: Point2<T>) -> T {
    (p1 - p0).cross(p2 - p0) * T::half()
}

/// Barycentric coordinates of `p` with respect to a non-degenerate triangle.
pub fn barycentric<T: Scalar>(p: Point2<T>, tri: &[Point2<T>; 3]) -> [T; 3] {
    let area = signed_area(tri[0], tri[1], tri[2]);
    let l0 = signed_area(p, tri[1], tri[2]) / area;
    let l1 = signed_area(tri[0], p, tri[2]) / area;
    [l0, l1, T::one() - l0 - l1]
}

/// True when `p` lies in the closed triangle, allowing a barycentric slack of `tol`.
pub fn triangle_contains<T: Scalar>(p: Point2<T>, tri: &[Point2<T>; 3], tol: T) -> bool {
    barycentric(p, tri).iter().all(|&l| l >= -tol)
}

/// Distance from `p` to the closed segment `p0 p1`.
pub fn segment_distance<T: Scalar>(p: Point2<T>, p0: Point2<T>, p1: Point2<T>) -> T {
    let d = p1 - p0;
    let len2 = d.dot(d);
    if len2 == T::zero() {
        return p.dist(p0);
    }
    let t = ((p - p0).dot(d) / len2).max(T::zero()).min(T::one());
    p.dist(p0 + d * t)
}

/// Canonical element geometry and its rigid placement in the global plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame<T> {
    a: T,
    h: T,
    apex_x: T,
    origin: Point2<T>,
    rotation: T,
    cos: T,
    sin: T,
    vertex_order: [usize; 3],
}

impl<T: Scalar> LocalFrame<T> {
    /// Frame from the bottom length `a`, height `h` and far-side intercept `b`
    /// (`b = ∞` allowed), placed at `origin` with the local x-axis at angle `rotation`.
    pub fn new(a: T, h: T, b: T, origin: Point2<T>, rotation: T) -> Result<Self> {
        if !(a > T::zero() && h > T::zero()) {
            return Err(Error::InvalidModel(format!("frame needs a > 0 and h > 0 (a = {a}, h = {h})")));
        }
        if !(b >= h) {
            return Err(Error::NoValidLabeling);
        }
        let h_over_b = if b.is_infinite() { T::zero() } else { h / b };
        Ok(Self::from_apex(a, h, a * (T::one() - h_over_b), origin, rotation, [0, 1, 2]))
    }

    fn from_apex(a: T, h: T, apex_x: T, origin: Point2<T>, rotation: T, vertex_order: [usize; 3]) -> Self {
        Self { a, h, apex_x, origin, rotation, cos: rotation.cos(), sin: rotation.sin(), vertex_order }
    }

    /// Unit frame with `a = h = b = 1` at the global origin.
    pub fn unit() -> Self {
        Self::from_apex(T::one(), T::one(), T::zero(), Point2::origin(), T::zero(), [0, 1, 2])
    }

    #[inline]
    pub fn a(&self) -> T {
        self.a
    }

    #[inline]
    pub fn h(&self) -> T {
        self.h
    }

    /// Vertical intercept of the far sideline; `∞` for a right angle at vertex 2.
    pub fn b(&self) -> T {
        let run = self.a - self.apex_x;
        if run <= T::zero() {
            T::infinity()
        } else {
            self.h * self.a / run
        }
    }

    /// `h / b`, finite for every valid frame.
    #[inline]
    pub fn h_over_b(&self) -> T {
        (self.a - self.apex_x) / self.a
    }

    /// `1 / b`.
    #[inline]
    pub fn inv_b(&self) -> T {
        self.h_over_b() / self.h
    }

    /// Local x-coordinate of vertex 3, `a(1 − h/b)`.
    #[inline]
    pub fn apex_x(&self) -> T {
        self.apex_x
    }

    #[inline]
    pub fn origin(&self) -> Point2<T> {
        self.origin
    }

    #[inline]
    pub fn rotation(&self) -> T {
        self.rotation
    }

    /// `vertex_order()[k]` is the input index of local vertex `k`.
    #[inline]
    pub fn vertex_order(&self) -> [usize; 3] {
        self.vertex_order
    }

    pub fn area(&self) -> T {
        self.a * self.h * T::half()
    }

    pub fn local_vertices(&self) -> [Point2<T>; 3] {
        [Point2::origin(), Point2::new(self.a, T::zero()), Point2::new(self.apex_x, self.h)]
    }

    pub fn global_vertices(&self) -> [Point2<T>; 3] {
        self.local_vertices().map(|p| self.to_global(p))
    }

    /// Rotates a local vector into global axes.
    #[inline]
    pub fn vector_to_global(&self, v: Point2<T>) -> Point2<T> {
        Point2::new(self.cos * v.x - self.sin * v.y, self.sin * v.x + self.cos * v.y)
    }

    #[inline]
    pub fn vector_to_local(&self, v: Point2<T>) -> Point2<T> {
        Point2::new(self.cos * v.x + self.sin * v.y, -self.sin * v.x + self.cos * v.y)
    }

    #[inline]
    pub fn to_global(&self, p: Point2<T>) -> Point2<T> {
        self.origin + self.vector_to_global(p)
    }

    #[inline]
    pub fn to_local(&self, p: Point2<T>) -> Point2<T> {
        self.vector_to_local(p - self.origin)
    }

    /// `(cos θ, sin θ)` of the local x-axis in global coordinates.
    #[inline]
    pub fn direction_cosines(&self) -> (T, T) {
        (self.cos, self.sin)
    }

    /// Barycentric containment test in local coordinates.
    pub fn contains_local(&self, p: Point2<T>, tol: T) -> bool {
        triangle_contains(p, &self.local_vertices(), tol)
    }
}

/// Builds the canonical local frame of an arbitrary triangle.
///
/// Clockwise input is first reordered to counter-clockwise; the vertices are
/// then cycled until the apex projects onto the bottom side (`b ≥ h`).
pub fn canonicalize_triangle<T: Scalar>(v1: Point2<T>, v2: Point2<T>, v3: Point2<T>) -> Result<LocalFrame<T>> {
    let input = [v1, v2, v3];
    let longest = (v2 - v1).norm().max((v3 - v2).norm()).max((v1 - v3).norm());
    let area = signed_area(v1, v2, v3);
    let tolerance = T::lit(1e-12) * longest * longest;
    if !(area.abs() > tolerance) {
        return Err(Error::CollinearVertices { area: area.abs().to_f64_lossy(), tolerance: tolerance.to_f64_lossy() });
    }
    let order: [usize; 3] = if area > T::zero() { [0, 1, 2] } else { [0, 2, 1] };

    let slack = T::lit(1e-12);
    for shift in 0..3 {
        let labels = [order[shift], order[(shift + 1) % 3], order[(shift + 2) % 3]];
        let p1 = input[labels[0]];
        let p2 = input[labels[1]];
        let p3 = input[labels[2]];
        let base = p2 - p1;
        let a = base.norm();
        let ex = base * (T::one() / a);
        let rel = p3 - p1;
        let x3 = rel.dot(ex);
        let h = ex.cross(rel);
        if x3 < -slack * a || x3 > a * (T::one() + slack) {
            continue;
        }
        let x3 = x3.max(T::zero()).min(a);
        let rotation = ex.y.atan2(ex.x);
        return Ok(LocalFrame::from_apex(a, h, x3, p1, rotation, labels));
    }
    Err(Error::NoValidLabeling)
}

/// Grid node `(r, s)` of a scale-`m` element, `m ≥ r ≥ s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeIndex {
    pub r: usize,
    pub s: usize,
}

impl NodeIndex {
    pub const fn new(r: usize, s: usize) -> Self {
        Self { r, s }
    }

    pub fn in_grid(self, m: usize) -> bool {
        m >= self.r && self.r >= self.s
    }

    pub fn check(self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidScale);
        }
        if self.in_grid(m) {
            Ok(())
        } else {
            Err(Error::IndexOutOfGrid { m, r: self.r, s: self.s })
        }
    }

    /// Position in the s-major ordering of the scale-`m` grid.
    pub fn linear(self, m: usize) -> usize {
        let s = self.s;
        s * (m + 1) - s * s.saturating_sub(1) / 2 + (self.r - s)
    }
}

/// Number of grid nodes at scale `m`, `(m + 1)(m + 2) / 2`.
pub const fn node_count(m: usize) -> usize {
    (m + 1) * (m + 2) / 2
}

/// All grid nodes in s-major lexicographic order (s outer, r inner).
pub fn grid_nodes(m: usize) -> Vec<NodeIndex> {
    (0..=m).flat_map(|s| (s..=m).map(move |r| NodeIndex::new(r, s))).collect()
}

/// Local position `((a/m)(r − s·h/b), (s/m)·h)` of a grid node.
pub fn node_position<T: Scalar>(frame: &LocalFrame<T>, m: usize, idx: NodeIndex) -> Result<Point2<T>> {
    idx.check(m)?;
    Ok(node_position_unchecked(frame, m, idx))
}

pub(crate) fn node_position_unchecked<T: Scalar>(frame: &LocalFrame<T>, m: usize, idx: NodeIndex) -> Point2<T> {
    let mm = T::count(m);
    let r = T::count(idx.r);
    let s = T::count(idx.s);
    let x = frame.a() * (r - s * frame.h_over_b()) / mm;
    let y = s * frame.h() / mm;
    Point2::new(x, y)
}

/// One of the six triangles of a node's hexagonal support, or outside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HexDomain {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    Outside,
}

impl HexDomain {
    pub const ALL: [HexDomain; 6] =
        [HexDomain::D1, HexDomain::D2, HexDomain::D3, HexDomain::D4, HexDomain::D5, HexDomain::D6];

    /// Vertices (node 1, node 2, node 3) of the sub-domain triangle around a
    /// node at the origin, for a hexagon built from `frame`.
    pub fn triangle<T: Scalar>(self, frame: &LocalFrame<T>) -> Option<[Point2<T>; 3]> {
        let a = frame.a();
        let h = frame.h();
        let x3 = frame.apex_x();
        let z = T::zero();
        let p = Point2::new;
        Some(match self {
            HexDomain::D1 => [p(z, z), p(a, z), p(x3, h)],
            HexDomain::D2 => [p(x3, h), p(x3 - a, h), p(z, z)],
            HexDomain::D3 => [p(-a, z), p(z, z), p(x3 - a, h)],
            HexDomain::D4 => [p(z, z), p(-a, z), p(-x3, -h)],
            HexDomain::D5 => [p(-x3, -h), p(a - x3, -h), p(z, z)],
            HexDomain::D6 => [p(a, z), p(z, z), p(a - x3, -h)],
            HexDomain::Outside => return None,
        })
    }

    /// Local index (0-based) that the hexagon centre takes in this sub-domain's triangle.
    pub fn centre_vertex(self) -> Option<usize> {
        match self {
            HexDomain::D1 | HexDomain::D4 => Some(0),
            HexDomain::D3 | HexDomain::D6 => Some(1),
            HexDomain::D2 | HexDomain::D5 => Some(2),
            HexDomain::Outside => None,
        }
    }
}

/// Lattice coordinates `(u, v, w)` of a point: `u = x/a + y/b`,
/// `v = (1/h − 1/b)·y − x/a`, `w = y/h = u + v`.
pub(crate) fn lattice_coords<T: Scalar>(p: Point2<T>, frame: &LocalFrame<T>) -> (T, T, T) {
    let inv_a = T::one() / frame.a();
    let inv_h = T::one() / frame.h();
    let inv_b = frame.inv_b();
    let u = p.x * inv_a + p.y * inv_b;
    let v = p.y * (inv_h - inv_b) - p.x * inv_a;
    let w = p.y * inv_h;
    (u, v, w)
}

/// Classifies a point, given relative to a node, into the hexagon sub-domain it
/// lies in. Points on a shared edge go to the lower-numbered domain.
pub fn hexagon_domain_of<T: Scalar>(p: Point2<T>, frame: &LocalFrame<T>) -> HexDomain {
    let (u, v, w) = lattice_coords(p, frame);
    let tol = T::lit(1e-12);
    let one = T::one();
    let ge = |x: T, bound: T| x >= bound - tol;
    let le = |x: T, bound: T| x <= bound + tol;
    let z = T::zero();
    if le(u, one) && le(v, z) && ge(w, z) {
        HexDomain::D1
    } else if ge(u, z) && ge(v, z) && le(w, one) {
        HexDomain::D2
    } else if le(u, z) && le(v, one) && ge(w, z) {
        HexDomain::D3
    } else if ge(u, -one) && ge(v, z) && le(w, z) {
        HexDomain::D4
    } else if le(u, z) && le(v, z) && ge(w, -one) {
        HexDomain::D5
    } else if ge(u, z) && ge(v, -one) && le(w, z) {
        HexDomain::D6
    } else {
        HexDomain::Outside
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Upward,
    Downward,
}

/// A cell of the uniform `m × m` partition of an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubTriangle<T> {
    /// Local vertex positions, counter-clockwise.
    pub vertices: [Point2<T>; 3],
    pub orientation: Orientation,
    pub corner_nodes: [NodeIndex; 3],
    /// Sub-domain of each corner node's hexagon that this cell occupies.
    pub corner_domains: [HexDomain; 3],
}

impl<T: Scalar> SubTriangle<T> {
    pub fn area(&self) -> T {
        signed_area(self.vertices[0], self.vertices[1], self.vertices[2])
    }

    pub fn centroid(&self) -> Point2<T> {
        (self.vertices[0] + self.vertices[1] + self.vertices[2]) * (T::one() / T::lit(3.0))
    }

    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        triangle_contains(p, &self.vertices, tol)
    }
}

/// The `m²` sub-triangles of an element: `m(m+1)/2` upward cells followed by
/// `m(m−1)/2` downward cells.
pub fn subtriangle_partition<T: Scalar>(frame: &LocalFrame<T>, m: usize) -> Vec<SubTriangle<T>> {
    let mut cells = Vec::with_capacity(m * m);
    let pos = |r, s| node_position_unchecked(frame, m, NodeIndex::new(r, s));
    for s in 0..m {
        for r in s..m {
            let corner_nodes = [NodeIndex::new(r, s), NodeIndex::new(r + 1, s), NodeIndex::new(r + 1, s + 1)];
            cells.push(SubTriangle {
                vertices: corner_nodes.map(|n| pos(n.r, n.s)),
                orientation: Orientation::Upward,
                corner_nodes,
                corner_domains: [HexDomain::D1, HexDomain::D3, HexDomain::D5],
            });
        }
    }
    for s in 0..m.saturating_sub(1) {
        for r in (s + 1)..m {
            let corner_nodes = [NodeIndex::new(r, s), NodeIndex::new(r + 1, s + 1), NodeIndex::new(r, s + 1)];
            cells.push(SubTriangle {
                vertices: corner_nodes.map(|n| pos(n.r, n.s)),
                orientation: Orientation::Downward,
                corner_nodes,
                corner_domains: [HexDomain::D2, HexDomain::D4, HexDomain::D6],
            });
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn right_triangle_frame() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert_relative_eq!(f.a(), 1.0);
        assert_relative_eq!(f.h(), 1.0);
        assert_relative_eq!(f.b(), 1.0);
        assert_relative_eq!(f.rotation(), 0.0);
    }

    #[test]
    fn equilateral_frame() {
        let s3 = 3f64.sqrt();
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.0, 0.0), p(0.5, s3 / 2.0)).unwrap();
        assert_relative_eq!(f.a(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(f.h(), s3 / 2.0, epsilon = 1e-15);
        assert_relative_eq!(f.b(), s3, epsilon = 1e-14);
    }

    #[test]
    fn collinear_rejected() {
        let err = canonicalize_triangle(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::CollinearVertices { .. }));
    }

    #[test]
    fn obtuse_triangle_is_relabeled() {
        // apex projects left of vertex 1 in the given labeling
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.0, 0.0), p(-0.5, 0.3)).unwrap();
        assert!(f.b() >= f.h());
        assert!(f.apex_x() >= 0.0 && f.apex_x() <= f.a());
    }

    #[test]
    fn clockwise_input_accepted() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)).unwrap();
        assert!(f.h() > 0.0);
        assert_relative_eq!(f.area(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn right_angle_at_second_vertex_has_infinite_b() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(2.0, 0.0), p(2.0, 2.0)).unwrap();
        assert!(f.b().is_infinite());
        assert_eq!(f.h_over_b(), 0.0);
        let apex = node_position(&f, 3, NodeIndex::new(3, 3)).unwrap();
        assert_relative_eq!(apex.x, 2.0);
        assert_relative_eq!(apex.y, 2.0);
    }

    #[test]
    fn node_position_examples() {
        let f = LocalFrame::new(2.0, 1.5, 3.0, Point2::origin(), 0.0).unwrap();
        assert_eq!(node_position(&f, 3, NodeIndex::new(0, 0)).unwrap(), p(0.0, 0.0));
        let mid = node_position(&f, 2, NodeIndex::new(1, 0)).unwrap();
        assert_relative_eq!(mid.x, 1.0);
        assert_relative_eq!(mid.y, 0.0);
        let apex = node_position(&f, 3, NodeIndex::new(3, 3)).unwrap();
        assert_relative_eq!(apex.x, 2.0 * (1.0 - 1.5 / 3.0), epsilon = 1e-15);
        assert_relative_eq!(apex.y, 1.5, epsilon = 1e-15);
        assert!(matches!(node_position(&f, 2, NodeIndex::new(1, 2)), Err(Error::IndexOutOfGrid { .. })));
    }

    #[test]
    fn linear_index_matches_grid_order() {
        for m in 1..7 {
            let nodes = grid_nodes(m);
            assert_eq!(nodes.len(), node_count(m));
            for (k, n) in nodes.iter().enumerate() {
                assert_eq!(n.linear(m), k);
            }
        }
    }

    #[test]
    fn partition_counts() {
        let f = LocalFrame::<f64>::unit();
        assert_eq!(subtriangle_partition(&f, 1).len(), 1);
        let cells = subtriangle_partition(&f, 2);
        assert_eq!(cells.len(), 4);
        let up = cells.iter().filter(|c| c.orientation == Orientation::Upward).count();
        assert_eq!(up, 3);
        let cells = subtriangle_partition(&f, 3);
        assert_eq!(cells.len(), 9);
    }

    #[test]
    fn partition_tiles_element() {
        let f = canonicalize_triangle(p(0.3, -0.2), p(2.1, 0.4), p(0.9, 1.7)).unwrap();
        for m in [1, 2, 3, 5, 8] {
            let cells = subtriangle_partition(&f, m);
            let total: f64 = cells.iter().map(|c| c.area()).sum();
            assert!(cells.iter().all(|c| c.area() > 0.0));
            assert_relative_eq!(total, f.area(), max_relative = 1e-12);
        }
    }

    #[test]
    fn partition_corner_domains_are_consistent() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.3, 0.2), p(0.4, 1.1)).unwrap();
        let m = 3;
        for cell in subtriangle_partition(&f, m) {
            let c = cell.centroid();
            for k in 0..3 {
                let node = node_position(&f, m, cell.corner_nodes[k]).unwrap();
                let rel = (c - node) * (m as f64);
                assert_eq!(hexagon_domain_of(rel, &f), cell.corner_domains[k]);
            }
        }
    }

    #[test]
    fn hexagon_classification_examples() {
        let f = LocalFrame::<f64>::unit();
        let eps = 1e-3;
        assert_eq!(hexagon_domain_of(p(eps, eps), &f), HexDomain::D1);
        assert_eq!(hexagon_domain_of(p(-eps, -eps), &f), HexDomain::D4);
        assert_eq!(hexagon_domain_of(p(2.0, 0.0), &f), HexDomain::Outside);
    }

    #[test]
    fn hexagon_domains_match_their_triangles() {
        let f = canonicalize_triangle(p(0.0, 0.0), p(1.0, 0.0), p(0.3, 0.8)).unwrap();
        for d in HexDomain::ALL {
            let tri = d.triangle(&f).unwrap();
            assert!(signed_area(tri[0], tri[1], tri[2]) > 0.0);
            let c = (tri[0] + tri[1] + tri[2]) * (1.0 / 3.0);
            assert_eq!(hexagon_domain_of(c, &f), d);
            let centre = tri[d.centre_vertex().unwrap()];
            assert!(centre.norm() < 1e-15);
        }
    }

    #[test]
    fn shared_edge_goes_to_lower_domain() {
        let f = LocalFrame::<f64>::unit();
        // positive x-axis separates D1 and D6
        assert_eq!(hexagon_domain_of(p(0.4, 0.0), &f), HexDomain::D1);
        // negative x-axis separates D3 and D4
        assert_eq!(hexagon_domain_of(p(-0.4, 0.0), &f), HexDomain::D3);
    }

    #[test]
    fn global_round_trip() {
        let v = [p(1.0, 2.0), p(3.5, 2.7), p(1.9, 4.4)];
        let f = canonicalize_triangle(v[0], v[1], v[2]).unwrap();
        let back = f.global_vertices();
        for k in 0..3 {
            let src = v[f.vertex_order()[k]];
            assert_relative_eq!(back[k].x, src.x, max_relative = 1e-12);
            assert_relative_eq!(back[k].y, src.y, max_relative = 1e-12);
        }
    }
}
