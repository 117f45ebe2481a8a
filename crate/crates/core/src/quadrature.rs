//! Product quadrature on `S^{n−1}` against the normalized surface measure.
//!
//! The sphere is sliced along the first coordinate: `x = (t, √(1−t²)·y)` with
//! `y ∈ S^{n−2}`. The slice variable `t` carries the weight `(1−t²)^{(n−3)/2}`
//! and is integrated with the matching Gauss–Gegenbauer rule; the sub-sphere is
//! handled recursively, ending in a uniform rule on the circle.
//!
//! For `n = 3` the slice rule is Gauss–Legendre on `[0, 1]` mirrored onto
//! `[−1, 0]`. It has the same polynomial exactness as a full-interval rule and
//! additionally integrates polynomials in `|x₁|` exactly, which matters for
//! the even kernels `|⟨x, y⟩|^p` used throughout.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SphericalGrid {
    n: usize,
    exactness: u32,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SphericalGrid {
    /// Builds a grid on `S^{n−1}` integrating every polynomial of degree
    /// `≤ exactness` exactly (up to rounding). Odd exactness is rounded up.
    pub fn build(n: usize, exactness: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        let exactness = exactness + exactness % 2;
        let (nodes, mut weights) = product_rule(n, exactness);
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        Ok(Self {
            n,
            exactness,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn exactness(&self) -> u32 {
        self.exactness
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.n)
    }

    /// `Σ wᵢ f(xᵢ)`, summed in node order.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: Fn(&[f64]) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes()
            .zip(&self.weights)
            .map(|(x, w)| f(x) * *w)
            .sum()
    }

    /// The same rule with every node replaced by its antipode.
    pub fn antipodal(&self) -> Self {
        let mut out = self.clone();
        for x in out.nodes.iter_mut() {
            *x = -*x;
        }
        out
    }

    /// The rule with nodes mapped by `x ↦ R x` (weights unchanged).
    pub fn rotated(&self, rotation: &DMatrix<f64>) -> Self {
        assert_eq!(rotation.nrows(), self.n);
        let mut out = self.clone();
        for (src, dst) in self.nodes().zip(out.nodes.chunks_exact_mut(self.n)) {
            for (i, d) in dst.iter_mut().enumerate() {
                *d = (0..self.n).map(|j| rotation[(i, j)] * src[j]).sum();
            }
        }
        out
    }
}

fn product_rule(n: usize, exactness: u32) -> (Vec<f64>, Vec<f64>) {
    if n == 2 {
        let m = exactness as usize + 1;
        let mut nodes = Vec::with_capacity(2 * m);
        for k in 0..m {
            let phi = 2.0 * PI * k as f64 / m as f64;
            nodes.push(phi.cos());
            nodes.push(phi.sin());
        }
        return (nodes, vec![1.0 / m as f64; m]);
    }
    let (sub_nodes, sub_weights) = product_rule(n - 1, exactness);
    let points = exactness as usize / 2 + 1;
    let (ts, tw) = if n == 3 {
        mirrored_gauss_legendre(points)
    } else {
        gauss_gegenbauer(points, (n as f64 - 2.0) / 2.0)
    };
    let mut nodes = Vec::with_capacity(n * ts.len() * sub_weights.len());
    let mut weights = Vec::with_capacity(ts.len() * sub_weights.len());
    for (&t, &wt) in ts.iter().zip(&tw) {
        let r = (1.0 - t * t).max(0.0).sqrt();
        for (y, &wy) in sub_nodes.chunks_exact(n - 1).zip(&sub_weights) {
            nodes.push(t);
            nodes.extend(y.iter().map(|v| r * v));
            weights.push(wt * wy);
        }
    }
    (nodes, weights)
}

/// Gauss rule for the weight `(1−t²)^{λ−1/2}` on `[−1, 1]` via the eigenvalues of
/// the Jacobi matrix. Weights are returned normalized to sum 1.
pub fn gauss_gegenbauer(points: usize, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(points, points);
    for k in 1..points {
        let kf = k as f64;
        let b =
            0.5 * (kf * (kf + 2.0 * lambda - 1.0) / ((kf + lambda - 1.0) * (kf + lambda))).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..points)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Symmetrize: the rule is even, so pair up ±t explicitly.
    for i in 0..points / 2 {
        let j = points - 1 - i;
        let t = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-t, w);
        pairs[j] = (t, w);
    }
    if points % 2 == 1 {
        pairs[points / 2].0 = 0.0;
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(t, w)| (t, w / total)).unzip()
}

/// Gauss–Legendre with `half_points` nodes on `[0, 1]`, reflected to `[−1, 0]`.
fn mirrored_gauss_legendre(half_points: usize) -> (Vec<f64>, Vec<f64>) {
    let (ts, ws) = gauss_gegenbauer(half_points, 0.5);
    let mut nodes = Vec::with_capacity(2 * half_points);
    let mut weights = Vec::with_capacity(2 * half_points);
    for (t, w) in ts.iter().zip(&ws).rev() {
        nodes.push(-(t + 1.0) / 2.0);
        weights.push(w / 2.0);
    }
    for (t, w) in ts.iter().zip(&ws) {
        nodes.push((t + 1.0) / 2.0);
        weights.push(w / 2.0);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exact moment of `x₁^k` under the normalized measure on `S^{n−1}`:
    /// `Π_{j<k/2} (2j+1)/(n+2j)` for even `k`, zero for odd `k`.
    fn moment(n: usize, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        (0..k / 2)
            .map(|j| (2 * j + 1) as f64 / (n as f64 + 2.0 * j as f64))
            .product()
    }

    fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        use rand_distr::{Distribution, StandardNormal};
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        if q.determinant() < 0.0 {
            q.column_mut(0).neg_mut();
        }
        q
    }

    #[test]
    fn nodes_unit_weights_normalized() {
        for (n, p) in [(3, 2), (3, 8), (3, 24), (4, 10), (5, 6)] {
            let g = SphericalGrid::build(n, p).unwrap();
            for x in g.nodes() {
                let r: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!((r - 1.0).abs() <= 1e-14);
            }
            assert!(g.weights().iter().all(|&w| w > 0.0));
            assert!((g.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn low_order_moments() {
        let g = SphericalGrid::build(3, 2).unwrap();
        assert!((g.integrate(|_| 1.0) - 1.0).abs() <= 1e-13);
        assert!((g.integrate(|x| x[0] * x[0]) - 1.0 / 3.0).abs() <= 1e-13);
        let g = SphericalGrid::build(3, 8).unwrap();
        assert!((g.integrate(|x| x[0].powi(4)) - 0.2).abs() <= 1e-12);
        assert!((g.integrate(|x| x[0].powi(6)) - 1.0 / 7.0).abs() <= 1e-12);
        // every axis, not just the slicing one
        assert!((g.integrate(|x| x[2].powi(6)) - 1.0 / 7.0).abs() <= 1e-12);
    }

    #[test]
    fn moments_in_all_dimensions() {
        for n in 3..=5 {
            let g = SphericalGrid::build(n, 12).unwrap();
            for k in (0..=12).step_by(2) {
                for axis in 0..n {
                    let got = g.integrate(|x| x[axis].powi(k as i32));
                    assert!(
                        (got - moment(n, k)).abs() <= 1e-12,
                        "n={n} k={k} axis={axis}"
                    );
                }
            }
        }
    }

    #[test]
    fn random_even_polynomial_degree_20() {
        use rand::Rng;
        // Σ c_{abc} x^a y^b z^c over even exponents with a+b+c = 20; exact value is
        // Γ-moment bookkeeping: ∫ x^a y^b z^c = (a-1)!!(b-1)!!(c-1)!! / (n)(n+2)...(n+18)
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let mut terms = Vec::new();
        for a in (0..=20).step_by(2) {
            for b in (0..=20 - a).step_by(2) {
                terms.push((a, b, 20 - a - b, rng.random_range(-1.0..1.0)));
            }
        }
        let dfact = |k: u32| -> f64 { (1..k).step_by(2).map(|j| j as f64).product() };
        let denom: f64 = (0..10).map(|j| 3.0 + 2.0 * j as f64).product();
        let exact: f64 = terms
            .iter()
            .map(|&(a, b, c, w)| w * dfact(a) * dfact(b) * dfact(c) / denom)
            .sum();
        let g = SphericalGrid::build(3, 20).unwrap();
        let got = g.integrate(|x| {
            terms
                .iter()
                .map(|&(a, b, c, w)| {
                    w * x[0].powi(a as i32) * x[1].powi(b as i32) * x[2].powi(c as i32)
                })
                .sum()
        });
        assert!((got - exact).abs() <= 1e-11, "{got} vs {exact}");
    }

    #[test]
    fn integrate_examples() {
        let g = SphericalGrid::build(3, 24).unwrap();
        assert!((g.integrate(|_| 1.0) - 1.0).abs() <= 1e-13);
        assert!(g.integrate(|x| x[0] * x[1]).abs() <= 1e-13);
        // ∫₀^π |cos θ| sin θ dθ / 2
        assert!((g.integrate(|x| x[0].abs()) - 0.5).abs() <= 1e-6);
        // ∫|x₁|³ = 1/4 is still a polynomial in |x₁|
        assert!((g.integrate(|x| x[0].abs().powi(3)) - 0.25).abs() <= 1e-13);
        let z = g.integrate_complex(|x| Complex64::new(x[0] * x[0], x[1] * x[1]));
        assert!((z - Complex64::new(1.0 / 3.0, 1.0 / 3.0)).norm() <= 1e-13);
    }

    #[test]
    fn antipodal_consistency() {
        let g = SphericalGrid::build(3, 10).unwrap();
        let a = g.antipodal();
        let f = |x: &[f64]| (x[0] * x[1]).cos() + x[2].powi(4) * (1.0 + x[0] * x[0]);
        assert!((g.integrate(f) - a.integrate(f)).abs() <= 1e-13);
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = SphericalGrid::build(3, 16).unwrap();
        let f = |x: &[f64]| {
            x[0].powi(6) - 2.0 * x[1].powi(2) * x[2].powi(4) + x[0] * x[1] * x[2].powi(3) + 0.5
        };
        for _ in 0..5 {
            let r = random_rotation(3, &mut rng);
            let diff = (g.integrate(f) - g.rotated(&r).integrate(f)).abs();
            assert!(diff <= 1e-11);
        }
    }

    #[test]
    fn rejects_low_dimension() {
        assert!(matches!(
            SphericalGrid::build(1, 4),
            Err(Error::UnsupportedDimension(1))
        ));
    }
}
