//! Seeded random symbols, vectors and rotations.
//!
//! Generator: `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha`. A complex
//! standard normal draw takes two `StandardNormal` samples, real part first,
//! each scaled by `1/√2` so that `E|z|² = 1`. Symbols are filled block by block
//! in ascending `(row_degree, col_degree)` order, entries in row-major order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::specfun::harmonic_dim;
use crate::star_algebra::{KInvariantSymbol, Symbol};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Dense random symbol with a block for every pair of `row_degrees × col_degrees`.
pub fn random_symbol<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    sigma: f64,
    row_degrees: &[u32],
    col_degrees: &[u32],
) -> Result<Symbol> {
    let mut pairs: Vec<(u32, u32)> = row_degrees
        .iter()
        .flat_map(|&l| col_degrees.iter().map(move |&m| (l, m)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut s = Symbol::zero(n, sigma);
    for (l, m) in pairs {
        let (r, c) = (harmonic_dim(n, l), harmonic_dim(n, m));
        let mut entries = Vec::with_capacity(r * c);
        for _ in 0..r * c {
            entries.push(complex_normal(rng));
        }
        s.set_block(l, m, DMatrix::from_row_slice(r, c, &entries))?;
    }
    Ok(s)
}

/// Random symbol over all degree pairs up to `l_max`, scaled to unit norm.
pub fn random_unit_symbol<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    sigma: f64,
    l_max: u32,
) -> Result<Symbol> {
    let degrees: Vec<u32> = (0..=l_max).step_by(2).collect();
    let s = random_symbol(rng, n, sigma, &degrees, &degrees)?;
    let norm = s.norm();
    Ok(s.scale(Complex64::new(1.0 / norm, 0.0)))
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| complex_normal(rng));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Uniform point on `S^{n−1}`.
pub fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.into_iter().map(|v| v / norm).collect()
}

pub fn random_k_invariant<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    sigma: f64,
    degrees: &[u32],
) -> KInvariantSymbol {
    let mut k = KInvariantSymbol::new(n, sigma);
    for &l in degrees {
        k.values.insert(l, complex_normal(rng));
    }
    k
}

/// Haar-random rotation of `ℝⁿ` (QR of a Gaussian matrix, signs fixed, det = +1).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_symbols_are_reproducible() {
        let a = random_unit_symbol(&mut seeded(7), 3, 1.3, 4).unwrap();
        let b = random_unit_symbol(&mut seeded(7), 3, 1.3, 4).unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() <= 1e-14);
        assert_eq!(a.num_blocks(), 9);
    }

    #[test]
    fn rotations_are_special_orthogonal() {
        let mut rng = seeded(1);
        for _ in 0..10 {
            let r = random_rotation(&mut rng, 3);
            let err = (r.transpose() * &r - DMatrix::identity(3, 3)).amax();
            assert!(err <= 1e-14);
            assert!((r.determinant() - 1.0).abs() <= 1e-13);
        }
    }
}
