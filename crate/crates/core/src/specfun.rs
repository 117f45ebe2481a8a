//! Complex Gamma function, Gegenbauer polynomials and harmonic dimensions.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Distance to a non-positive integer below which an argument counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Returns the non-positive integer `-k` if `z` lies within [`POLE_TOLERANCE`] of it.
pub fn nonpositive_integer(z: Complex64) -> Option<u64> {
    if z.im.abs() > POLE_TOLERANCE || z.re > POLE_TOLERANCE {
        return None;
    }
    let k = (-z.re).round();
    if (z.re + k).abs() <= POLE_TOLERANCE {
        Some(k as u64)
    } else {
        None
    }
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Principal branch of `log Γ(z)`, analytic on ℂ minus the non-positive real axis.
///
/// Arguments with `Re z < 1/2` are shifted upward with the recurrence
/// `log Γ(z) = log Γ(z + N) − Σ log(z + k)`, which keeps the branch cut on the
/// negative real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("log_gamma argument"));
    }
    if let Some(k) = nonpositive_integer(z) {
        return Err(Error::Pole { arg: -(k as f64) });
    }
    if z.re >= 0.5 {
        return Ok(lanczos_ln_gamma(z));
    }
    let shift = (0.5 - z.re).ceil() as usize;
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        correction += (z + k as f64).ln();
    }
    Ok(lanczos_ln_gamma(z + shift as f64) - correction)
}

/// `Γ(z)` for complex `z`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

/// `Π Γ(num_i) / Π Γ(den_j)`.
///
/// A pole in the denominator contributes a zero factor. Poles appearing in both
/// numerator and denominator are paired and replaced by the ratio of their
/// residues, assuming all arguments move at the same rate along the line of
/// approach. An unmatched numerator pole is an error.
pub fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let mut num_poles = Vec::new();
    let mut den_poles = Vec::new();
    let mut log_sum = Complex64::new(0.0, 0.0);
    for &z in num {
        match nonpositive_integer(z) {
            Some(k) => num_poles.push((k, z)),
            None => log_sum += log_gamma(z)?,
        }
    }
    for &z in den {
        match nonpositive_integer(z) {
            Some(k) => den_poles.push(k),
            None => log_sum -= log_gamma(z)?,
        }
    }
    if num_poles.len() > den_poles.len() {
        let (_, z) = num_poles[den_poles.len()];
        return Err(Error::Pole { arg: z.re });
    }
    if num_poles.len() < den_poles.len() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // Residue of Γ at -k is (-1)^k / k!.
    let mut scale = 1.0;
    for ((p, _), q) in num_poles.iter().zip(&den_poles) {
        let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
        scale *= sign * (ln_factorial(*q) - ln_factorial(*p)).exp();
    }
    Ok(scale * log_sum.exp())
}

fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)` with meromorphic continuation.
pub fn beta(a: Complex64, b: Complex64) -> Result<Complex64> {
    gamma_ratio(&[a, b], &[a + b])
}

/// Rising factorial `(x)_k`.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// `C_ℓ^α(x)` by the forward three-term recurrence in the degree.
pub fn gegenbauer(degree: u32, alpha: f64, x: f64) -> f64 {
    if degree == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha * x;
    for k in 1..degree {
        let k = k as f64;
        let next = (2.0 * x * (k + alpha) * cur - (k + 2.0 * alpha - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Real polynomial in monomial form, `coeffs[k]` multiplying `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a polynomial needs at least one coefficient"
        );
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Monomial coefficients of `C_ℓ^α`, built with the same recurrence as [`gegenbauer`].
pub fn gegenbauer_coeffs(degree: u32, alpha: f64) -> PolynomialCoeffs {
    let len = degree as usize + 1;
    let mut prev = vec![0.0; len];
    prev[0] = 1.0;
    if degree == 0 {
        return PolynomialCoeffs::new(prev);
    }
    let mut cur = vec![0.0; len];
    cur[1] = 2.0 * alpha;
    for k in 1..degree as usize {
        let kf = k as f64;
        let mut next = vec![0.0; len];
        for j in 0..=k {
            next[j + 1] += 2.0 * (kf + alpha) * cur[j];
        }
        for j in 0..k {
            next[j] -= (kf + 2.0 * alpha - 1.0) * prev[j];
        }
        for c in next.iter_mut() {
            *c /= kf + 1.0;
        }
        prev = cur;
        cur = next;
    }
    PolynomialCoeffs::new(cur)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of the space of degree-`ℓ` spherical harmonics on `S^{n−1}`.
pub fn harmonic_dim(n: usize, degree: u32) -> usize {
    assert!(n >= 2, "harmonic_dim needs n >= 2");
    let (n, l) = (n as u64, degree as u64);
    let all = binomial(l + n - 1, l);
    let lower = if l >= 2 {
        binomial(l + n - 3, l - 2)
    } else {
        0
    };
    (all - lower) as usize
}
