//! The intertwiner `A_μ φ(s) = ∫ |⟨s,t⟩|^{−μ−n} φ(t) dt` through its eigenvalues on
//! the harmonic spaces `V_ℓ`, together with the constants `e(μ)`, `c(μ)`, `d(σ)`
//! and `e_ℓ(σ)`.
//!
//! All analytic continuation happens in closed Γ/Beta form. The eigenvalue on
//! `V_ℓ` follows from the Funk–Hecke reduction
//!
//! ```text
//! η_ℓ(μ) = a_ℓ ∫_S C_ℓ^α(x₁) |x₁|^p dx,   p = −μ−n,  α = (n−2)/2,  a_ℓ = 1/C_ℓ^α(1)
//!        = a_ℓ · 2Γ(n/2)/(Γ((n−1)/2)√π) · Σ_k c_k ∫₀¹ u^{k+p} (1−u²)^{(n−3)/2} du
//! ```
//!
//! with `∫₀¹ u^a (1−u²)^b du = ½ B((a+1)/2, b+1)`. On the unitary axis
//! `μ = −n/2 + iσ` this gives `e_ℓ(σ)`.

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::harmonics::HarmonicBasis;
use crate::quadrature::SphericalGrid;
use crate::specfun::{beta, gamma_ratio, gegenbauer, gegenbauer_coeffs, log_gamma};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The point `μ = −n/2 + iσ` of the unitary axis.
pub fn unitary_mu(n: usize, sigma: f64) -> Complex64 {
    Complex64::new(-(n as f64) / 2.0, sigma)
}

fn gamma_half_n_over_sqrt_pi(n: usize) -> Result<f64> {
    Ok(log_gamma(real(n as f64 / 2.0))?.exp().re / PI.sqrt())
}

/// `e(μ) = ∫_S |⟨s,t⟩|^{−μ−n} dt = Γ(n/2)/√π · Γ((−μ−n+1)/2)/Γ(−μ/2)`.
pub fn e_mu(n: usize, mu: Complex64) -> Result<Complex64> {
    let nf = n as f64;
    let ratio = gamma_ratio(&[(-mu - nf + 1.0) / 2.0], &[-mu / 2.0])?;
    Ok(gamma_half_n_over_sqrt_pi(n)? * ratio)
}

/// `c(μ) = e(μ) e(−μ−n)`, the scalar of `A_{−μ−n} ∘ A_μ`.
pub fn c_mu(n: usize, mu: Complex64) -> Result<Complex64> {
    Ok(e_mu(n, mu)? * e_mu(n, -mu - n as f64)?)
}

/// `c(σ)` written out as a single Γ-quotient:
/// `Γ(n/2)²/π · Γ((1−n/2−iσ)/2) Γ((1−n/2+iσ)/2) / (Γ((n/2+iσ)/2) Γ((n/2−iσ)/2))`.
pub fn c_sigma_closed_form(n: usize, sigma: f64) -> Result<Complex64> {
    let h = n as f64 / 2.0;
    let is = Complex64::new(0.0, sigma);
    let ratio = gamma_ratio(
        &[(1.0 - h - is) / 2.0, (1.0 - h + is) / 2.0],
        &[(h + is) / 2.0, (h - is) / 2.0],
    )?;
    Ok(gamma_half_n_over_sqrt_pi(n)?.powi(2) * ratio)
}

/// `d(σ) = √π/Γ(n/2) · Γ((n/2+iσ)/2)/Γ((−n/2+iσ+1)/2)`, the factor making
/// `d(σ) A_{−n/2+iσ}` unitary.
pub fn d_sigma(n: usize, sigma: f64) -> Result<Complex64> {
    if sigma == 0.0 {
        return Err(Error::InvalidSigma);
    }
    let h = n as f64 / 2.0;
    let is = Complex64::new(0.0, sigma);
    let ratio = gamma_ratio(&[(h + is) / 2.0], &[(1.0 - h + is) / 2.0])?;
    Ok(ratio / gamma_half_n_over_sqrt_pi(n)?)
}

/// Eigenvalue of the kernel `|⟨x,y⟩|^{−μ−n}` on `V_ℓ` (Beta-series route).
pub fn eta_ell(n: usize, degree: u32, mu: Complex64) -> Result<Complex64> {
    assert!(
        degree.is_multiple_of(2),
        "eigenvalues are defined on even degrees"
    );
    let nf = n as f64;
    let alpha = (nf - 2.0) / 2.0;
    let p = -mu - nf;
    let poly = gegenbauer_coeffs(degree, alpha);
    let slice_exponent = real((nf - 1.0) / 2.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &ck) in poly.coeffs().iter().enumerate() {
        if ck == 0.0 {
            continue;
        }
        sum += ck * 0.5 * beta((p + k as f64 + 1.0) / 2.0, slice_exponent)?;
    }
    let zonal = 2.0 * gamma_half_n_over_sqrt_pi(n)? / log_gamma(slice_exponent)?.exp().re;
    Ok(sum * zonal / gegenbauer(degree, alpha, 1.0))
}

/// Closed Γ-product for the eigenvalue on `V_ℓ` in the form normalized by the
/// leading coefficient of `C_ℓ^α` instead of `C_ℓ^α(1)`:
///
/// ```text
/// 2^{−2ℓ} Γ(n/2)/√π · Γ(n−2+ℓ)/Γ(n−2) · Γ(α)/Γ(α+ℓ) · Γ(p+1)Γ((p−ℓ+1)/2) / (Γ(p−ℓ+1)Γ((p+n+ℓ)/2))
/// ```
///
/// It equals `eta_ell · C_ℓ^α(1)/lead(C_ℓ^α)`; see [`eta_ell_closed_form`].
/// `Γ((p−ℓ+1)/2)/Γ(p−ℓ+1)` is evaluated as `√π 2^{ℓ−p}/Γ((p−ℓ+2)/2)` by the
/// duplication formula, which removes the paired poles at odd integer `p < ℓ`.
pub fn eta_ell_gamma_product(n: usize, degree: u32, mu: Complex64) -> Result<Complex64> {
    assert!(n >= 3);
    let nf = n as f64;
    let l = degree as f64;
    let alpha = (nf - 2.0) / 2.0;
    let p = -mu - nf;
    let structural = (log_gamma(real(nf - 2.0 + l))? - log_gamma(real(nf - 2.0))?
        + log_gamma(real(alpha))?
        - log_gamma(real(alpha + l))?)
    .exp()
    .re;
    let duplication = ((l - p) * LN_2).exp() * PI.sqrt();
    let ratio = duplication * gamma_ratio(&[p + 1.0], &[(p - l + 2.0) / 2.0, (p + nf + l) / 2.0])?;
    Ok(2f64.powi(-2 * degree as i32) * gamma_half_n_over_sqrt_pi(n)? * structural * ratio)
}

/// `C_ℓ^α(1) / lead(C_ℓ^α)`, the factor separating the two normalizations.
pub fn leading_normalization_ratio(n: usize, degree: u32) -> f64 {
    let alpha = (n as f64 - 2.0) / 2.0;
    gegenbauer(degree, alpha, 1.0) / gegenbauer_coeffs(degree, alpha).leading()
}

/// Closed-form eigenvalue on `V_ℓ`: the Γ-product rescaled to `a_ℓ = 1/C_ℓ^α(1)`.
pub fn eta_ell_closed_form(n: usize, degree: u32, mu: Complex64) -> Result<Complex64> {
    Ok(eta_ell_gamma_product(n, degree, mu)? / leading_normalization_ratio(n, degree))
}

/// Result of estimating an eigenvalue of `A_μ` by direct quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureEigenvalue {
    pub eigenvalue: Complex64,
    /// `‖A f − λ f‖ / ‖f‖` over all basis functions and probe points.
    pub residual: f64,
}

const MAX_PROBES: usize = 64;

/// Applies the kernel `|⟨s,t⟩|^{−μ−n}` to every basis function of `V_ℓ` with the
/// quadrature `grid`, at up to 64 probe nodes of the same grid, and fits the
/// common eigenvalue by least squares. Only valid where the kernel is at least
/// Lipschitz, `Re(−μ−n) ≥ 1`.
pub fn apply_a_quadrature(
    basis: &HarmonicBasis,
    mu: Complex64,
    grid: &SphericalGrid,
) -> Result<QuadratureEigenvalue> {
    let n = basis.dim_ambient();
    if grid.dim() != n {
        return Err(Error::UnsupportedDimension(grid.dim()));
    }
    let p = -mu - n as f64;
    if p.re < 1.0 {
        return Err(Error::ConvergenceRegime { exponent: p.re });
    }
    let values: Vec<Vec<f64>> = grid.nodes().map(|x| basis.eval(x)).collect();
    let stride = grid.len().div_ceil(MAX_PROBES);
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    let mut applied = Vec::new();
    for k in (0..grid.len()).step_by(stride) {
        let probe = grid.node(k);
        let mut acc = vec![Complex64::new(0.0, 0.0); basis.len()];
        for ((x, &w), fx) in grid.nodes().zip(grid.weights()).zip(&values) {
            let t: f64 = probe.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs();
            if t == 0.0 {
                continue;
            }
            let kernel = (p * t.ln()).exp() * w;
            for (a, f) in acc.iter_mut().zip(fx) {
                *a += kernel * *f;
            }
        }
        for (a, f) in acc.iter().zip(&values[k]) {
            num += a * f;
            den += f * f;
        }
        applied.push((k, acc));
    }
    if den == 0.0 {
        return Err(Error::NonFinite("probe values of the basis"));
    }
    let eigenvalue = num / den;
    let mut res2 = 0.0;
    for (k, acc) in &applied {
        for (a, f) in acc.iter().zip(&values[*k]) {
            res2 += (a - eigenvalue * f).norm_sqr();
        }
    }
    Ok(QuadratureEigenvalue {
        eigenvalue,
        residual: (res2 / den).sqrt(),
    })
}

/// The constants of the calculus at `(n, σ)`, with `e_ℓ(σ)` tabulated for every
/// even `ℓ ≤ l_max`. Immutable once built.
#[derive(Debug, Clone)]
pub struct CalculusConstants {
    n: usize,
    sigma: f64,
    l_max: u32,
    d: Complex64,
    c: Complex64,
    e_table: Vec<Complex64>,
}

impl CalculusConstants {
    pub fn new(n: usize, sigma: f64, l_max: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedDimension(n));
        }
        if sigma == 0.0 {
            return Err(Error::InvalidSigma);
        }
        if !sigma.is_finite() {
            return Err(Error::NonFinite("sigma"));
        }
        let mu = unitary_mu(n, sigma);
        let d = d_sigma(n, sigma)?;
        let c = c_mu(n, mu)?;
        let e_table = (0..=l_max / 2)
            .map(|j| eta_ell(n, 2 * j, mu))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            sigma,
            l_max: l_max - l_max % 2,
            d,
            c,
            e_table,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> {
        (0..=self.l_max).step_by(2)
    }

    pub fn check_degree(&self, degree: u32) -> Result<()> {
        if degree % 2 == 1 || degree > self.l_max {
            return Err(Error::DegreeOutOfRange {
                degree,
                l_max: self.l_max,
            });
        }
        Ok(())
    }

    /// `e_ℓ(σ)`.
    pub fn e_ell(&self, degree: u32) -> Result<Complex64> {
        self.check_degree(degree)?;
        Ok(self.e_table[degree as usize / 2])
    }

    /// `d(σ) e_ℓ(σ)`, the structure constant of the product on inner degree `ℓ`.
    pub fn de(&self, degree: u32) -> Result<Complex64> {
        Ok(self.d * self.e_ell(degree)?)
    }

    /// Whether `other` describes the same `(n, σ)`.
    pub fn same_context(&self, n: usize, sigma: f64) -> bool {
        self.n == n && self.sigma == sigma
    }
}
