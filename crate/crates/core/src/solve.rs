//! Solution of the reduced system and post-processing of deflections,
//! rotations and moments.

use serde::{Deserialize, Serialize};

use crate::assembly::{node_lambda, ReducedSystem};
use crate::element::{bending_rigidity, MRElement};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scalar::Scalar;
use crate::sparse::{conjugate_gradient, SkylineCholesky};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Direct,
    ConjugateGradient,
}

/// Relative residual `‖K a − f‖ / ‖f‖` above which a solve is rejected.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

const REFINEMENT_STEPS: usize = 3;

#[derive(Debug, Clone)]
pub struct Solution<'a, T> {
    pub system: &'a ReducedSystem<T>,
    /// Full DOF vector `(w, θX, θY)` per node, global axes.
    pub dofs: Vec<T>,
    /// Full DOF vector in the node frames used for the constraints.
    pub node_dofs: Vec<T>,
    /// `K a − f` in node frames; nonzero only at constrained DOFs.
    pub reactions: Vec<T>,
    pub residual: T,
}

pub fn solve_system<T: Scalar>(system: &ReducedSystem<T>) -> Result<Solution<'_, T>> {
    solve_system_with(system, SolverKind::Direct)
}

pub fn solve_system_with<T: Scalar>(system: &ReducedSystem<T>, kind: SolverKind) -> Result<Solution<'_, T>> {
    let reduced = match kind {
        SolverKind::Direct => {
            let factor = SkylineCholesky::factor(&system.k)?;
            let mut x = factor.solve(&system.rhs)?;
            for _ in 0..REFINEMENT_STEPS {
                let kx = system.k.matvec(&x);
                if relative_residual(&kx, &system.rhs).to_f64_lossy() <= 0.01 * RESIDUAL_LIMIT {
                    break;
                }
                let r: Vec<T> = system.rhs.iter().zip(&kx).map(|(&b, &k)| b - k).collect();
                for (xi, di) in x.iter_mut().zip(factor.solve(&r)?) {
                    *xi += di;
                }
            }
            x
        }
        SolverKind::ConjugateGradient => {
            let n = system.rhs.len();
            conjugate_gradient(&system.k, &system.rhs, T::lit(1e-13), 20 * n.max(10))?
        }
    };
    let residual = relative_residual(&system.k.matvec(&reduced), &system.rhs);
    if !(residual.to_f64_lossy() <= RESIDUAL_LIMIT) {
        return Err(Error::NotConverged { iterations: 1, residual: residual.to_f64_lossy() });
    }
    let node_dofs = system.expand(&reduced);
    let ka = system.global.k.matvec(&node_dofs);
    let reactions = ka.iter().zip(&system.global.rhs).map(|(&k, &f)| k - f).collect();
    Ok(Solution { system, dofs: system.to_global_axes(&node_dofs), node_dofs, reactions, residual })
}

fn relative_residual<T: Scalar>(ka: &[T], f: &[T]) -> T {
    let num: T = ka.iter().zip(f).map(|(&a, &b)| (a - b) * (a - b)).sum();
    let den: T = f.iter().map(|&b| b * b).sum();
    if den == T::zero() {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Deflection and rotations `θX = ∂w/∂Y`, `θY = −∂w/∂X` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldValue<T> {
    pub w: T,
    pub theta_x: T,
    pub theta_y: T,
}

/// Bending moments per unit length, global axes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MomentTriple<T> {
    pub mx: T,
    pub my: T,
    pub mxy: T,
}

impl<'a, T: Scalar> Solution<'a, T> {
    /// Element DOFs in element axes, ordered like the element nodes.
    pub fn element_dofs(&self, e: usize) -> Vec<T> {
        let elem = &self.system.global.elements[e];
        let lambda = node_lambda(&elem.frame);
        let mut out = Vec::with_capacity(elem.dof_count());
        for &g in &self.system.global.dof_map[e] {
            let a = &self.dofs[3 * g..3 * g + 3];
            for row in &lambda {
                out.push(row[0] * a[0] + row[1] * a[1] + row[2] * a[2]);
            }
        }
        out
    }

    /// Sum of `w` reactions; balances the applied load.
    pub fn vertical_reaction(&self) -> T {
        self.system.constrained.iter().filter(|&&d| d % 3 == 0).map(|&d| self.reactions[d]).sum()
    }

    pub fn max_deflection(&self) -> T {
        self.dofs.iter().step_by(3).fold(T::zero(), |acc, &w| acc.max(w.abs()))
    }
}

const LOCATE_TOL: f64 = 1e-10;

fn owners<T: Scalar>(sol: &Solution<'_, T>, p: Point2<T>) -> Result<Vec<usize>> {
    let found = sol.system.global.owners(p);
    if found.is_empty() {
        return Err(Error::OutsideModel { x: p.x.to_f64_lossy(), y: p.y.to_f64_lossy() });
    }
    Ok(found)
}

/// `(w, ∂w/∂x, ∂w/∂y, ∂²w/∂x², ∂²w/∂y², ∂²w/∂x∂y)` of element `e` at a
/// local point, using the given cell.
fn local_jet<T: Scalar>(elem: &MRElement<T>, a: &[T], cell: &crate::geometry::SubTriangle<T>, p: Point2<T>) -> [T; 6] {
    let mut out = [T::zero(); 6];
    for (k, triple) in elem.cell_basis(cell, p).iter().enumerate() {
        let base = 3 * cell.corner_nodes[k].linear(elem.m);
        for (c, f) in triple.components().iter().enumerate() {
            let coef = a[base + c];
            out[0] += coef * f.value;
            out[1] += coef * f.grad[0];
            out[2] += coef * f.grad[1];
            out[3] += coef * f.hess[0];
            out[4] += coef * f.hess[1];
            out[5] += coef * f.hess[2];
        }
    }
    out
}

/// Deflection and rotations at global point `p`, from the lowest-index
/// element containing it.
pub fn field_eval<T: Scalar>(sol: &Solution<'_, T>, p: Point2<T>) -> Result<FieldValue<T>> {
    let e = owners(sol, p)?[0];
    let elem = &sol.system.global.elements[e];
    let local = elem.frame.to_local(p);
    let cell = elem
        .locate_cell(local, T::lit(LOCATE_TOL))
        .ok_or(Error::OutsideElement { x: local.x.to_f64_lossy(), y: local.y.to_f64_lossy() })?;
    let jet = local_jet(elem, &sol.element_dofs(e), &cell, local);
    let theta = elem.frame.vector_to_global(Point2::new(jet[2], -jet[1]));
    Ok(FieldValue { w: jet[0], theta_x: theta.x, theta_y: theta.y })
}

/// Moments at global point `p`: averaged over the cells containing `p` in
/// each element, then over the elements containing `p`.
pub fn moment_eval<T: Scalar>(sol: &Solution<'_, T>, p: Point2<T>) -> Result<MomentTriple<T>> {
    let owners = owners(sol, p)?;
    let mut acc = MomentTriple::<T>::default();
    for &e in &owners {
        let elem = &sol.system.global.elements[e];
        let local = elem.frame.to_local(p);
        let a = sol.element_dofs(e);
        let d = bending_rigidity(&elem.material);
        let mut kappa = [T::zero(); 3];
        let mut hits = 0usize;
        for cell in elem.cells().iter().filter(|c| c.contains(local, T::lit(LOCATE_TOL))) {
            let jet = local_jet(elem, &a, cell, local);
            kappa[0] -= jet[3];
            kappa[1] -= jet[4];
            kappa[2] -= T::two() * jet[5];
            hits += 1;
        }
        if hits == 0 {
            return Err(Error::OutsideElement { x: local.x.to_f64_lossy(), y: local.y.to_f64_lossy() });
        }
        let inv = T::one() / T::count(hits);
        let kappa = kappa.map(|k| k * inv);
        let m: Vec<T> = d.iter().map(|row| (0..3).map(|j| row[j] * kappa[j]).sum()).collect();
        let g = rotate_moments(MomentTriple { mx: m[0], my: m[1], mxy: m[2] }, elem.frame.direction_cosines());
        acc.mx += g.mx;
        acc.my += g.my;
        acc.mxy += g.mxy;
    }
    let inv = T::one() / T::count(owners.len());
    Ok(MomentTriple { mx: acc.mx * inv, my: acc.my * inv, mxy: acc.mxy * inv })
}

/// `R M Rᵀ` for the element-to-global rotation with cosines `(c, s)`.
pub fn rotate_moments<T: Scalar>(m: MomentTriple<T>, (c, s): (T, T)) -> MomentTriple<T> {
    let (cc, ss, cs) = (c * c, s * s, c * s);
    MomentTriple {
        mx: cc * m.mx + ss * m.my - T::two() * cs * m.mxy,
        my: ss * m.mx + cc * m.my + T::two() * cs * m.mxy,
        mxy: cs * (m.mx - m.my) + (cc - ss) * m.mxy,
    }
}

/// `½ aᵀ K a`.
pub fn strain_energy<T: Scalar>(sol: &Solution<'_, T>) -> T {
    let ka = sol.system.global.k.matvec(&sol.node_dofs);
    T::half() * sol.node_dofs.iter().zip(&ka).map(|(&a, &k)| a * k).sum::<T>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Deflection,
    Moment,
}

/// `w·D/(q·L⁴)` or `M/(q·L²)`.
pub fn normalize_coefficient<T: Scalar>(value: T, quantity: Quantity, length: T, q: T, rigidity: T) -> Result<T> {
    if q == T::zero() {
        return Err(Error::DivisionByZero("load intensity"));
    }
    if length == T::zero() {
        return Err(Error::DivisionByZero("length"));
    }
    if rigidity == T::zero() && quantity == Quantity::Deflection {
        return Err(Error::DivisionByZero("flexural rigidity"));
    }
    let l2 = length * length;
    Ok(match quantity {
        Quantity::Deflection => value * rigidity / (q * l2 * l2),
        Quantity::Moment => value / (q * l2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{apply_boundary_conditions, assemble, BoundaryKind, ElementSpec, Model};
    use crate::element::PlateMaterial;
    use approx::assert_relative_eq;

    fn clamped_square(m: usize) -> Model<f64> {
        let p = Point2::new;
        Model::new(
            vec![
                ElementSpec { vertices: [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)], m },
                ElementSpec { vertices: [p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], m },
            ],
            PlateMaterial::unit_rigidity(0.3).unwrap(),
        )
        .with_uniform_load(1.0)
        .with_bc(p(0.0, 0.0), p(1.0, 0.0), BoundaryKind::Clamped)
        .with_bc(p(1.0, 0.0), p(1.0, 1.0), BoundaryKind::Clamped)
        .with_bc(p(1.0, 1.0), p(0.0, 1.0), BoundaryKind::Clamped)
        .with_bc(p(0.0, 1.0), p(0.0, 0.0), BoundaryKind::Clamped)
    }

    #[test]
    fn reactions_balance_load() {
        let model = clamped_square(3);
        let red = apply_boundary_conditions(&assemble(&model).unwrap(), &model.bcs).unwrap();
        let sol = solve_system(&red).unwrap();
        assert!(sol.residual < 1e-10);
        assert_relative_eq!(sol.vertical_reaction(), -1.0, epsilon = 1e-9);
    }

    #[test]
    fn direct_and_cg_agree() {
        let model = clamped_square(2);
        let red = apply_boundary_conditions(&assemble(&model).unwrap(), &model.bcs).unwrap();
        let a = solve_system(&red).unwrap();
        let b = solve_system_with(&red, SolverKind::ConjugateGradient).unwrap();
        for (x, y) in a.dofs.iter().zip(&b.dofs) {
            assert!((x - y).abs() < 1e-9 * a.max_deflection());
        }
    }

    #[test]
    fn field_matches_nodal_values() {
        let model = clamped_square(4);
        let red = apply_boundary_conditions(&assemble(&model).unwrap(), &model.bcs).unwrap();
        let sol = solve_system(&red).unwrap();
        for (g, &node) in red.global.nodes.iter().enumerate() {
            let f = field_eval(&sol, node).unwrap();
            assert_relative_eq!(f.w, sol.dofs[3 * g], epsilon = 1e-12);
            assert_relative_eq!(f.theta_x, sol.dofs[3 * g + 1], epsilon = 1e-12);
            assert_relative_eq!(f.theta_y, sol.dofs[3 * g + 2], epsilon = 1e-12);
        }
    }

    #[test]
    fn moment_rotation_round_trip() {
        let m = MomentTriple { mx: 1.0, my: -0.4, mxy: 0.3 };
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let back = rotate_moments(rotate_moments(m, (c, s)), (c, -s));
        assert_relative_eq!(back.mx, m.mx, epsilon = 1e-14);
        assert_relative_eq!(back.my, m.my, epsilon = 1e-14);
        assert_relative_eq!(back.mxy, m.mxy, epsilon = 1e-14);
        let q = rotate_moments(m, (0.0, 1.0));
        assert_relative_eq!(q.mx, m.my, epsilon = 1e-14);
        assert_relative_eq!(q.my, m.mx, epsilon = 1e-14);
        assert_relative_eq!(q.mxy, -m.mxy, epsilon = 1e-14);
    }

    #[test]
    fn normalization_rejects_zero_load() {
        assert!(matches!(
            normalize_coefficient(1.0, Quantity::Deflection, 1.0, 0.0, 1.0),
            Err(Error::DivisionByZero(_))
        ));
        assert_relative_eq!(normalize_coefficient(2.0, Quantity::Moment, 2.0, 0.5, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn unloaded_plate_stays_flat() {
        let model = clamped_square(2).with_uniform_load(0.0);
        let red = apply_boundary_conditions(&assemble(&model).unwrap(), &model.bcs).unwrap();
        let sol = solve_system(&red).unwrap();
        assert_eq!(sol.max_deflection(), 0.0);
    }
}
