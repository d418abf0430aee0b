//! Triangle quadrature in barycentric form.
//!
//! The default rule is the 7-point symmetric rule exact for degree 5. Higher
//! degrees use a collapsed (Duffy) Gauss–Legendre product rule.

use crate::scalar::Scalar;

/// Quadrature on the reference simplex; weights sum to 1 so that
/// `∫_T f ≈ area · Σ w_k f(x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule<T> {
    /// Barycentric coordinates of each point.
    pub points: Vec<[T; 3]>,
    pub weights: Vec<T>,
    degree: usize,
}

impl<T: Scalar> TriangleRule<T> {
    /// Symmetric 7-point rule, exact to degree 5.
    pub fn degree5() -> Self {
        let sqrt15 = T::lit(15.0).sqrt();
        let one = T::one();
        let third = one / T::lit(3.0);
        let a1 = (T::lit(6.0) - sqrt15) / T::lit(21.0);
        let b1 = one - T::two() * a1;
        let a2 = (T::lit(6.0) + sqrt15) / T::lit(21.0);
        let b2 = one - T::two() * a2;
        let w0 = T::lit(9.0) / T::lit(40.0);
        let w1 = (T::lit(155.0) - sqrt15) / T::lit(1200.0);
        let w2 = (T::lit(155.0) + sqrt15) / T::lit(1200.0);
        let points = vec![
            [third, third, third],
            [a1, a1, b1],
            [a1, b1, a1],
            [b1, a1, a1],
            [a2, a2, b2],
            [a2, b2, a2],
            [b2, a2, a2],
        ];
        let weights = vec![w0, w1, w1, w1, w2, w2, w2];
        Self { points, weights, degree: 5 }
    }

    /// Rule exact for polynomials up to `degree`. Degree ≤ 5 returns the
    /// 7-point symmetric rule.
    pub fn with_degree(degree: usize) -> Self {
        if degree <= 5 {
            return Self::degree5();
        }
        // the collapsed map adds one to the polynomial degree in the radial direction
        let n = (degree + 3) / 2;
        let (xs, ws) = gauss_legendre::<T>(n);
        let half = T::half();
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (i, &xi) in xs.iter().enumerate() {
            let u = (xi + T::one()) * half;
            for (j, &xj) in xs.iter().enumerate() {
                let v = (xj + T::one()) * half;
                // (u, v) in the unit square -> (s, t) = (u, v(1 - u)) in the unit simplex
                let s = u;
                let t = v * (T::one() - u);
                let w = ws[i] * ws[j] * half * half * (T::one() - u) * T::two();
                points.push([T::one() - s - t, s, t]);
                weights.push(w);
            }
        }
        Self { points, weights, degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut xs = vec![T::zero(); n];
    let mut ws = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = T::lit(-x);
        xs[n - 1 - i] = T::lit(x);
        ws[i] = T::lit(w);
        ws[n - 1 - i] = T::lit(w);
    }
    (xs, ws)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
