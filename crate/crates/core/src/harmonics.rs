//! Orthonormal bases of the even-degree harmonic spaces `V_ℓ` on `S²` and their
//! reproducing kernels.
//!
//! Basis convention (`realSH-condon-shortley-sqrt4pi-v1`): for degree `ℓ` the
//! functions are ordered by `m = −ℓ, …, 0, …, ℓ`. With `z = cos θ` and
//! `x + iy = sin θ · e^{iφ}`,
//!
//! ```text
//! m > 0:  √2 · N_{ℓm} · P_ℓ^m(cos θ) · cos(mφ)
//! m = 0:       N_{ℓ0} · P_ℓ(cos θ)
//! m < 0:  √2 · N_{ℓ|m|} · P_ℓ^{|m|}(cos θ) · sin(|m|φ)
//! ```
//!
//! where `P_ℓ^m` includes the Condon–Shortley phase `(−1)^m` and
//! `N_{ℓm} = √((2ℓ+1)(ℓ−m)!/(ℓ+m)!)`, i.e. the usual unit-sphere normalization
//! multiplied by `√(4π)` so that the functions are orthonormal for the
//! normalized measure.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quadrature::SphericalGrid;
use crate::specfun::{gegenbauer, harmonic_dim};

pub const BASIS_TAG: &str = "realSH-condon-shortley-sqrt4pi-v1";

/// Real orthonormal basis of `V_ℓ` on `S²`.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    degree: u32,
    /// Per `m = 0..=ℓ`: `N_{ℓm}`, including the `√2` for `m > 0`.
    norms: Vec<f64>,
}

impl HarmonicBasis {
    pub fn new(n: usize, degree: u32) -> Result<Self> {
        if n != 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        assert!(
            degree.is_multiple_of(2),
            "only even degrees are constructible"
        );
        let l = degree as i64;
        let norms = (0..=l)
            .map(|m| {
                // (ℓ−m)!/(ℓ+m)! as a running product
                let ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| 1.0 / k as f64).product();
                let base = ((2 * l + 1) as f64 * ratio).sqrt();
                if m == 0 {
                    base
                } else {
                    std::f64::consts::SQRT_2 * base
                }
            })
            .collect();
        Ok(Self { degree, norms })
    }

    pub fn dim_ambient(&self) -> usize {
        3
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        2 * self.degree as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values of all basis functions at `x`, in basis order.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let l = self.degree as usize;
        let (cx, sy, z) = (x[0], x[1], x[2]);
        let mut out = vec![0.0; 2 * l + 1];
        // Re/Im of (x + iy)^m carry the sin^m θ factor of P_ℓ^m.
        let (mut re_pow, mut im_pow) = (1.0, 0.0);
        // Q_m^m = (2m−1)!!, the sin-free part of the associated Legendre function.
        let mut diag = 1.0;
        for m in 0..=l {
            if m > 0 {
                let re = re_pow * cx - im_pow * sy;
                let im = re_pow * sy + im_pow * cx;
                re_pow = re;
                im_pow = im;
                diag *= (2 * m - 1) as f64;
            }
            let q = legendre_tail(l, m, z, diag);
            let phase = if m % 2 == 1 { -1.0 } else { 1.0 };
            let scaled = phase * self.norms[m] * q;
            if m == 0 {
                out[l] = scaled;
            } else {
                out[l + m] = scaled * re_pow;
                out[l - m] = scaled * im_pow;
            }
        }
        out
    }

    /// Orthogonal projection of sampled values onto the basis:
    /// `cᵢ = ∫ f · fᵢ ds` computed with `grid`.
    pub fn project(&self, grid: &SphericalGrid, samples: &[f64]) -> DVector<f64> {
        assert_eq!(samples.len(), grid.len());
        let mut coeffs = DVector::zeros(self.len());
        for ((x, &w), &s) in grid.nodes().zip(grid.weights()).zip(samples) {
            for (c, v) in coeffs.iter_mut().zip(self.eval(x)) {
                *c += w * s * v;
            }
        }
        coeffs
    }

    /// Matrix `D` with `(Σ cᵢ fᵢ) ∘ R⁻¹ = Σ (D c)ᵢ fᵢ`, obtained by sampling the
    /// rotated basis functions and projecting back.
    pub fn rotation_matrix(&self, rotation: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(rotation.shape(), (3, 3));
        let grid = self.projection_grid();
        let d = self.len();
        let mut out = DMatrix::zeros(d, d);
        let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len()); d];
        for x in grid.nodes() {
            // R⁻¹ x = Rᵀ x
            let y: Vec<f64> = (0..3)
                .map(|i| (0..3).map(|j| rotation[(j, i)] * x[j]).sum())
                .collect();
            for (col, v) in columns.iter_mut().zip(self.eval(&y)) {
                col.push(v);
            }
        }
        for (i, col) in columns.iter().enumerate() {
            out.set_column(i, &self.project(&grid, col));
        }
        out
    }

    /// Coefficients of `(Σ cᵢ fᵢ) ∘ R⁻¹`.
    pub fn rotate_coeffs(&self, coeffs: &DVector<f64>, rotation: &DMatrix<f64>) -> DVector<f64> {
        self.rotation_matrix(rotation) * coeffs
    }

    fn projection_grid(&self) -> SphericalGrid {
        SphericalGrid::build(3, 2 * self.degree).expect("n = 3 grid")
    }
}

/// `Q_ℓ^m(z)`: associated Legendre function without the `sin^m θ` factor and
/// without the Condon–Shortley sign, by upward recurrence from `Q_m^m = diag`.
fn legendre_tail(l: usize, m: usize, z: f64, diag: f64) -> f64 {
    if l == m {
        return diag;
    }
    let mut prev = diag;
    let mut cur = z * (2 * m + 1) as f64 * diag;
    for k in (m + 2)..=l {
        let next = (z * (2 * k - 1) as f64 * cur - (k + m - 1) as f64 * prev) / (k - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Reproducing kernel `θ_ℓ(u, v)` of `V_ℓ` on `S^{n−1}` by the addition theorem:
/// `dim V_ℓ · C_ℓ^α(⟨u,v⟩) / C_ℓ^α(1)` with `α = (n−2)/2`.
pub fn theta_kernel(n: usize, degree: u32, u: &[f64], v: &[f64]) -> f64 {
    let alpha = (n as f64 - 2.0) / 2.0;
    let t: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let t = t.clamp(-1.0, 1.0);
    harmonic_dim(n, degree) as f64 * gegenbauer(degree, alpha, t) / gegenbauer(degree, alpha, 1.0)
}

/// `θ_ℓ(u, v) = Σᵢ fᵢ(u) fᵢ(v)` through an explicit basis.
pub fn theta_kernel_basis_sum(basis: &HarmonicBasis, u: &[f64], v: &[f64]) -> f64 {
    basis
        .eval(u)
        .iter()
        .zip(basis.eval(v))
        .map(|(a, b)| a * b)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_unit(rng: &mut ChaCha8Rng) -> Vec<f64> {
        let v: Vec<f64> = (0..3).map(|_| StandardNormal.sample(rng)).collect();
        let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.into_iter().map(|a| a / r).collect()
    }

    fn random_rotation(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        // Rodrigues formula from a random axis and angle
        let k = random_unit(rng);
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let kx = DMatrix::from_row_slice(
            3,
            3,
            &[0.0, -k[2], k[1], k[2], 0.0, -k[0], -k[1], k[0], 0.0],
        );
        DMatrix::identity(3, 3) + &kx * angle.sin() + &kx * &kx * (1.0 - angle.cos())
    }

    fn gram(basis: &HarmonicBasis, grid: &SphericalGrid) -> DMatrix<f64> {
        let d = basis.len();
        let mut g = DMatrix::zeros(d, d);
        for (x, &w) in grid.nodes().zip(grid.weights()) {
            let v = basis.eval(x);
            for i in 0..d {
                for j in 0..d {
                    g[(i, j)] += w * v[i] * v[j];
                }
            }
        }
        g
    }

    #[test]
    fn degree_zero_is_constant_one() {
        let b = HarmonicBasis::new(3, 0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.eval(&[0.0, 0.6, 0.8]), vec![1.0]);
    }

    #[test]
    fn gram_is_identity() {
        for l in (0..=8).step_by(2) {
            let b = HarmonicBasis::new(3, l).unwrap();
            assert_eq!(b.len(), harmonic_dim(3, l));
            let grid = SphericalGrid::build(3, 2 * l).unwrap();
            let err = (gram(&b, &grid) - DMatrix::identity(b.len(), b.len()))
                .abs()
                .max();
            assert!(err <= 1e-11, "l={l}: {err}");
        }
    }

    #[test]
    fn zonal_member_at_pole() {
        let b = HarmonicBasis::new(3, 2).unwrap();
        let v = b.eval(&[0.0, 0.0, 1.0]);
        assert!((v[2] - 5f64.sqrt()).abs() <= 1e-14);
        for (i, x) in v.iter().enumerate() {
            if i != 2 {
                assert_eq!(*x, 0.0);
            }
        }
    }

    #[test]
    fn explicit_degree_two_functions() {
        // √(15)·xy, √(15)·yz, √5·(3z²−1)/2, −√(15)·xz... with Condon–Shortley signs
        let b = HarmonicBasis::new(3, 2).unwrap();
        let x = [0.48, -0.6, 0.64];
        let v = b.eval(&x);
        let s15 = 15f64.sqrt();
        let want = [
            s15 * x[0] * x[1],
            -s15 * x[1] * x[2],
            5f64.sqrt() * (3.0 * x[2] * x[2] - 1.0) / 2.0,
            -s15 * x[0] * x[2],
            s15 / 2.0 * (x[0] * x[0] - x[1] * x[1]),
        ];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() <= 1e-14, "{v:?} vs {want:?}");
        }
    }

    #[test]
    fn basis_functions_are_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for l in (0..=8).step_by(2) {
            let b = HarmonicBasis::new(3, l).unwrap();
            for _ in 0..20 {
                let u = random_unit(&mut rng);
                let neg: Vec<f64> = u.iter().map(|a| -a).collect();
                assert_eq!(b.eval(&u), b.eval(&neg));
            }
        }
    }

    #[test]
    fn theta_examples() {
        let u = [0.36, 0.48, 0.8];
        assert_eq!(theta_kernel(3, 0, &u, &[1.0, 0.0, 0.0]), 1.0);
        assert!((theta_kernel(3, 2, &u, &u) - 5.0).abs() <= 1e-12);
        let e1 = [1.0, 0.0, 0.0];
        let p2 = (3.0 * u[0] * u[0] - 1.0) / 2.0;
        assert!((theta_kernel(3, 2, &e1, &u) - 5.0 * p2).abs() <= 1e-13);
    }

    #[test]
    fn addition_theorem_matches_basis_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for l in [0, 2, 4, 6] {
            let b = HarmonicBasis::new(3, l).unwrap();
            let mut worst = 0f64;
            for _ in 0..200 {
                let (u, v) = (random_unit(&mut rng), random_unit(&mut rng));
                worst = worst
                    .max((theta_kernel(3, l, &u, &v) - theta_kernel_basis_sum(&b, &u, &v)).abs());
            }
            assert!(worst <= 1e-10, "l={l}: {worst}");
            let u = random_unit(&mut rng);
            assert!(
                (theta_kernel_basis_sum(&b, &u, &u) - harmonic_dim(3, l) as f64).abs() <= 1e-10
            );
        }
    }

    #[test]
    fn theta_is_rotation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let r = random_rotation(&mut rng);
            let (u, v) = (random_unit(&mut rng), random_unit(&mut rng));
            let ru: Vec<f64> = (0..3)
                .map(|i| (0..3).map(|j| r[(i, j)] * u[j]).sum())
                .collect();
            let rv: Vec<f64> = (0..3)
                .map(|i| (0..3).map(|j| r[(i, j)] * v[j]).sum())
                .collect();
            for l in [2, 4, 6] {
                let diff = theta_kernel(3, l, &ru, &rv) - theta_kernel(3, l, &u, &v);
                assert!(diff.abs() <= 1e-11);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let grid = SphericalGrid::build(3, 8).unwrap();
        let b2 = HarmonicBasis::new(3, 2).unwrap();
        let b4 = HarmonicBasis::new(3, 4).unwrap();
        let f3: Vec<f64> = grid.nodes().map(|x| b2.eval(x)[3]).collect();
        let c = b2.project(&grid, &f3);
        let mut e3 = DVector::zeros(5);
        e3[3] = 1.0;
        assert!((c - e3).amax() <= 1e-11);

        let u0 = [0.0, 0.6, 0.8];
        let theta: Vec<f64> = grid.nodes().map(|x| theta_kernel(3, 2, &u0, x)).collect();
        let c = b2.project(&grid, &theta);
        let want = DVector::from_vec(b2.eval(&u0));
        assert!((c - want).amax() <= 1e-10);

        let h4: Vec<f64> = grid
            .nodes()
            .map(|x| b4.eval(x)[1] - 2.0 * b4.eval(x)[6])
            .collect();
        assert!(b2.project(&grid, &h4).amax() <= 1e-11);
    }

    #[test]
    fn reproducing_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for l in [0, 2, 4, 6] {
            let b = HarmonicBasis::new(3, l).unwrap();
            let grid = SphericalGrid::build(3, 2 * l).unwrap();
            let c: Vec<f64> = (0..b.len())
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let f = |x: &[f64]| b.eval(x).iter().zip(&c).map(|(a, b)| a * b).sum::<f64>();
            for _ in 0..5 {
                let u = random_unit(&mut rng);
                let got = grid.integrate(|x| theta_kernel(3, l, &u, x) * f(x));
                assert!((got - f(&u)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn rotation_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let b0 = HarmonicBasis::new(3, 0).unwrap();
        let b2 = HarmonicBasis::new(3, 2).unwrap();
        let id = DMatrix::identity(3, 3);
        let c = DVector::from_fn(5, |_, _| StandardNormal.sample(&mut rng));
        assert!((b2.rotate_coeffs(&c, &id) - &c).amax() <= 1e-12);
        for _ in 0..10 {
            let r = random_rotation(&mut rng);
            let one = DVector::from_element(1, 0.7);
            assert!((b0.rotate_coeffs(&one, &r)[0] - 0.7).abs() <= 1e-13);
            let out = b2.rotate_coeffs(&c, &r);
            assert!((out.norm() - c.norm()).abs() <= 1e-10);
        }
    }

    #[test]
    fn rotation_moves_function_values() {
        // (Σ cᵢ fᵢ)∘R⁻¹ evaluated at R x equals the original at x
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = HarmonicBasis::new(3, 4).unwrap();
        let c = DVector::from_fn(9, |_, _| StandardNormal.sample(&mut rng));
        let r = random_rotation(&mut rng);
        let rc = b.rotate_coeffs(&c, &r);
        let x = random_unit(&mut rng);
        let rx: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| r[(i, j)] * x[j]).sum())
            .collect();
        let lhs: f64 = b.eval(&rx).iter().zip(rc.iter()).map(|(a, b)| a * b).sum();
        let rhs: f64 = b.eval(&x).iter().zip(c.iter()).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() <= 1e-11);
    }

    #[test]
    fn rejects_other_dimensions() {
        assert!(matches!(
            HarmonicBasis::new(4, 2),
            Err(Error::UnsupportedDimension(4))
        ));
    }
}
