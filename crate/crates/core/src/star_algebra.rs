//! Graded symbols and the H*-algebra structure.
//!
//! A [`Symbol`] stores `φ₀ ∈ ⊕ V_ℓ ⊗ V̄_m` as complex blocks: entry `(i, j)` of
//! block `(ℓ, m)` is the coefficient of `fᵢ(u) f̄ⱼ(v)`. With `K_σ(x,y) =
//! |⟨x,y⟩|^{−n/2−iσ}` acting on `V_m` as `e_m(σ)`, the reduced product
//!
//! ```text
//! (φ₀ # ψ₀)(u,v) = d(σ) ∫∫ φ₀(u,x) ψ₀(y,v) K_σ(x,y) dx dy
//! ```
//!
//! becomes `(F#G)^{(ℓ,m′)} = d(σ) Σ_m e_m(σ) F^{(ℓ,m)} G^{(m,m′)}`.
//!
//! # Involution
//!
//! The reduced involution is
//!
//! ```text
//! φ₀*(u,v) = conj(d)² ∫∫ conj(φ₀(x,y)) (|⟨x,v⟩| |⟨u,y⟩|)^{−n/2+iσ} dx dy.
//! ```
//!
//! Take `φ₀ = F_ij fᵢ(u) f̄ⱼ(v)` with `fᵢ ∈ V_ℓ`, `fⱼ ∈ V_m` real. The kernel
//! `|⟨·,·⟩|^{−n/2+iσ}` is the complex conjugate of `K_σ`, so it acts on `V_ℓ` by
//! `conj(e_ℓ)` (the eigenvalue has real Γ-coefficients, hence `e_ℓ(−σ) =
//! conj(e_ℓ(σ))`). Integrating over `x` turns `fᵢ(x)` into `conj(e_ℓ) fᵢ(v)`;
//! integrating over `y` turns `fⱼ(y)` into `conj(e_m) fⱼ(u)`. The result is
//! `conj(d)² conj(e_ℓ) conj(e_m) conj(F_ij) fⱼ(u) fᵢ(v)`, i.e.
//!
//! ```text
//! (F*)^{(m,ℓ)} = conj(d)² conj(e_ℓ) conj(e_m) (F^{(ℓ,m)})ᴴ.
//! ```
//!
//! Since `|d e_ℓ| = 1`, writing `s_ℓ = √(d e_ℓ)` the map
//! `M(F)^{(ℓ,m)} = s_ℓ F^{(ℓ,m)} s_m` is an isometric *-homomorphism into block
//! Hilbert–Schmidt operators, which is what [`matrix_realization`] returns.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::harmonics::HarmonicBasis;
use crate::intertwining::CalculusConstants;
use crate::specfun::harmonic_dim;

pub type Block = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn frobenius_sqr(m: &Block) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Coordinates of `φ₀` over pairs of even degrees. Absent blocks are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    n: usize,
    sigma: f64,
    blocks: BTreeMap<(u32, u32), Block>,
}

impl Symbol {
    pub fn zero(n: usize, sigma: f64) -> Self {
        Self {
            n,
            sigma,
            blocks: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Inserts (or replaces) block `(ℓ, m)` after checking parity and shape.
    pub fn set_block(&mut self, row_degree: u32, col_degree: u32, block: Block) -> Result<()> {
        for d in [row_degree, col_degree] {
            if d % 2 == 1 {
                return Err(Error::format("degree", format!("{d} is odd")));
            }
        }
        let shape = (
            harmonic_dim(self.n, row_degree),
            harmonic_dim(self.n, col_degree),
        );
        if block.shape() != shape {
            return Err(Error::format(
                format!("block ({row_degree},{col_degree})"),
                format!("shape {:?}, expected {:?}", block.shape(), shape),
            ));
        }
        self.blocks.insert((row_degree, col_degree), block);
        Ok(())
    }

    pub fn with_block(mut self, row_degree: u32, col_degree: u32, block: Block) -> Result<Self> {
        self.set_block(row_degree, col_degree, block)?;
        Ok(self)
    }

    pub fn block(&self, row_degree: u32, col_degree: u32) -> Option<&Block> {
        self.blocks.get(&(row_degree, col_degree))
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((u32, u32), &Block)> {
        self.blocks.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// All degrees appearing as a row or column degree of a present block.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.blocks.keys().flat_map(|&(l, m)| [l, m]).collect()
    }

    /// `f ⊗ ḡ` with `f ∈ V_ℓ`, `g ∈ V_m` given by coefficient vectors.
    pub fn outer(
        n: usize,
        sigma: f64,
        row_degree: u32,
        f: &DVector<Complex64>,
        col_degree: u32,
        g: &DVector<Complex64>,
    ) -> Result<Self> {
        Self::zero(n, sigma).with_block(row_degree, col_degree, f * g.adjoint())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.values().map(frobenius_sqr).sum()
    }

    /// `L²(S̃×S̃)` norm (Parseval over the orthonormal bases).
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.iter().all(|z| *z == ZERO))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n: self.n,
            sigma: self.sigma,
            blocks: self.blocks.iter().map(|(k, b)| (*k, b * factor)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut blocks = self.blocks.clone();
        for (k, b) in &other.blocks {
            match blocks.get_mut(k) {
                Some(acc) => *acc += b * Complex64::new(sign, 0.0),
                None => {
                    blocks.insert(*k, b * Complex64::new(sign, 0.0));
                }
            }
        }
        Self {
            n: self.n,
            sigma: self.sigma,
            blocks,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// The symbol with only the blocks whose column degree lies in `degrees`.
    pub fn restrict_columns(&self, degrees: &BTreeSet<u32>) -> Self {
        Self {
            n: self.n,
            sigma: self.sigma,
            blocks: self
                .blocks
                .iter()
                .filter(|((_, m), _)| degrees.contains(m))
                .map(|(k, b)| (*k, b.clone()))
                .collect(),
        }
    }

    /// Applies a rotation `R` to both tensor legs: `φ₀(R⁻¹u, R⁻¹v)`. Only `n = 3`.
    pub fn rotate(&self, rotation: &DMatrix<f64>) -> Result<Self> {
        let mut mats = BTreeMap::new();
        for d in self.degrees() {
            let basis = HarmonicBasis::new(self.n, d)?;
            let real = basis.rotation_matrix(rotation);
            mats.insert(d, real.map(|x| Complex64::new(x, 0.0)));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(&(l, m), b)| ((l, m), &mats[&l] * b * mats[&m].transpose()))
            .collect();
        Ok(Self {
            n: self.n,
            sigma: self.sigma,
            blocks,
        })
    }
}

fn check_context(ctx: &CalculusConstants, f: &Symbol) -> Result<()> {
    if !ctx.same_context(f.n, f.sigma) {
        return Err(Error::ContextMismatch(format!(
            "symbol has (n, sigma) = ({}, {}), context has ({}, {})",
            f.n,
            f.sigma,
            ctx.n(),
            ctx.sigma()
        )));
    }
    Ok(())
}

fn check_pair(a: &Symbol, b: &Symbol) -> Result<()> {
    if a.n != b.n || a.sigma != b.sigma {
        return Err(Error::ContextMismatch(format!(
            "(n, sigma) = ({}, {}) vs ({}, {})",
            a.n, a.sigma, b.n, b.sigma
        )));
    }
    Ok(())
}

/// `F #_σ G` by the block rule. Output blocks exist only where some inner
/// degree is shared, so the grading never leaves the input degrees.
pub fn star_product(ctx: &CalculusConstants, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    check_pair(f, g)?;
    check_context(ctx, f)?;
    let mut out: BTreeMap<(u32, u32), Block> = BTreeMap::new();
    for (&(l, m), fb) in &f.blocks {
        let mut right = g.blocks.range((m, 0)..=(m, u32::MAX)).peekable();
        if right.peek().is_none() {
            continue;
        }
        let coeff = ctx.de(m)?;
        let left = fb * coeff;
        for (&(_, mp), gb) in right {
            let prod = &left * gb;
            match out.get_mut(&(l, mp)) {
                Some(acc) => *acc += prod,
                None => {
                    out.insert((l, mp), prod);
                }
            }
        }
    }
    Ok(Symbol {
        n: f.n,
        sigma: f.sigma,
        blocks: out,
    })
}

/// `F*`: `(F*)^{(m,ℓ)} = conj(d)² conj(e_ℓ) conj(e_m) (F^{(ℓ,m)})ᴴ`.
pub fn involution(ctx: &CalculusConstants, f: &Symbol) -> Result<Symbol> {
    check_context(ctx, f)?;
    let d2 = ctx.d().conj().powi(2);
    let mut blocks = BTreeMap::new();
    for (&(l, m), b) in &f.blocks {
        let coeff = d2 * ctx.e_ell(l)?.conj() * ctx.e_ell(m)?.conj();
        blocks.insert((m, l), b.adjoint() * coeff);
    }
    Ok(Symbol {
        n: f.n,
        sigma: f.sigma,
        blocks,
    })
}

/// `⟨F, G⟩ = Σ_blocks tr(F Gᴴ)`.
pub fn inner_product(f: &Symbol, g: &Symbol) -> Result<Complex64> {
    check_pair(f, g)?;
    let mut acc = ZERO;
    for (k, fb) in &f.blocks {
        if let Some(gb) = g.blocks.get(k) {
            acc += fb
                .iter()
                .zip(gb.iter())
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>();
        }
    }
    Ok(acc)
}

/// Irreducible self-adjoint idempotent `e^ℓ_f = (d e_ℓ)⁻¹ f ⊗ f̄` for a unit `f ∈ V_ℓ`.
pub fn idempotent_rank_one(
    ctx: &CalculusConstants,
    degree: u32,
    f: &DVector<Complex64>,
) -> Result<Symbol> {
    let dim = harmonic_dim(ctx.n(), degree);
    if f.len() != dim {
        return Err(Error::ContextMismatch(format!(
            "coefficient vector has length {}, dim V_{degree} = {dim}",
            f.len()
        )));
    }
    let norm = f.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm });
    }
    let scale = ctx.de(degree)?.inv();
    Symbol::zero(ctx.n(), ctx.sigma()).with_block(degree, degree, f * f.adjoint() * scale)
}

/// `θ_ℓ`: identity block at `(ℓ, ℓ)`.
pub fn theta_symbol(n: usize, sigma: f64, degree: u32) -> Result<Symbol> {
    let d = harmonic_dim(n, degree);
    Symbol::zero(n, sigma).with_block(degree, degree, DMatrix::identity(d, d))
}

/// Element of the K-invariant subalgebra `Σ a_ℓ θ_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KInvariantSymbol {
    pub n: usize,
    pub sigma: f64,
    pub values: BTreeMap<u32, Complex64>,
}

impl KInvariantSymbol {
    pub fn new(n: usize, sigma: f64) -> Self {
        Self {
            n,
            sigma,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, degree: u32, value: Complex64) -> Self {
        assert!(degree.is_multiple_of(2));
        self.values.insert(degree, value);
        self
    }

    /// Embedding as diagonal blocks `a_ℓ · I`.
    pub fn to_symbol(&self) -> Symbol {
        let mut s = Symbol::zero(self.n, self.sigma);
        for (&l, &a) in &self.values {
            let d = harmonic_dim(self.n, l);
            s.blocks.insert((l, l), DMatrix::identity(d, d) * a);
        }
        s
    }

    /// Product inside the subalgebra: `(a # b)_ℓ = d e_ℓ a_ℓ b_ℓ`.
    pub fn star(&self, ctx: &CalculusConstants, other: &Self) -> Result<Self> {
        let mut out = Self::new(self.n, self.sigma);
        for (&l, &a) in &self.values {
            if let Some(&b) = other.values.get(&l) {
                out.values.insert(l, ctx.de(l)? * (a * b));
            }
        }
        Ok(out)
    }
}

/// `φ_ℓ = (d e_ℓ)⁻¹ θ_ℓ`.
pub fn k_invariant_idempotent(ctx: &CalculusConstants, degree: u32) -> Result<KInvariantSymbol> {
    let v = ctx.de(degree)?.inv();
    Ok(KInvariantSymbol::new(ctx.n(), ctx.sigma()).with(degree, v))
}

/// Orthogonal projection onto `span{θ_ℓ}`: `a_ℓ = tr F^{(ℓ,ℓ)} / dim V_ℓ`.
pub fn k_project(f: &Symbol) -> KInvariantSymbol {
    let mut out = KInvariantSymbol::new(f.n, f.sigma);
    for (&(l, m), b) in &f.blocks {
        if l == m {
            out.values
                .insert(l, b.trace() / harmonic_dim(f.n, l) as f64);
        }
    }
    out
}

/// `Σ_{ℓ ∈ degrees} φ_ℓ`, a two-sided identity on symbols supported in `degrees`.
pub fn truncated_identity(ctx: &CalculusConstants, degrees: &[u32]) -> Result<Symbol> {
    let mut k = KInvariantSymbol::new(ctx.n(), ctx.sigma());
    for &l in degrees {
        k.values.insert(l, ctx.de(l)?.inv());
    }
    Ok(k.to_symbol())
}

/// Hilbert–Schmidt realization of `Op_σ(F)` on the truncated `⊕ V_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    n: usize,
    sigma: f64,
    blocks: BTreeMap<(u32, u32), Block>,
}

impl OperatorMatrix {
    pub fn block(&self, row_degree: u32, col_degree: u32) -> Option<&Block> {
        self.blocks.get(&(row_degree, col_degree))
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((u32, u32), &Block)> {
        self.blocks.iter().map(|(k, v)| (*k, v))
    }

    /// Operator composition.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out: BTreeMap<(u32, u32), Block> = BTreeMap::new();
        for (&(l, m), a) in &self.blocks {
            for (&(_, mp), b) in other.blocks.range((m, 0)..=(m, u32::MAX)) {
                let prod = a * b;
                match out.get_mut(&(l, mp)) {
                    Some(acc) => *acc += prod,
                    None => {
                        out.insert((l, mp), prod);
                    }
                }
            }
        }
        Self {
            n: self.n,
            sigma: self.sigma,
            blocks: out,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            sigma: self.sigma,
            blocks: self
                .blocks
                .iter()
                .map(|(&(l, m), b)| ((m, l), b.adjoint()))
                .collect(),
        }
    }

    pub fn hs_norm(&self) -> f64 {
        self.blocks.values().map(frobenius_sqr).sum::<f64>().sqrt()
    }

    /// Hilbert–Schmidt norm of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        let keys: BTreeSet<_> = self.blocks.keys().chain(other.blocks.keys()).collect();
        keys.into_iter()
            .map(|k| match (self.blocks.get(k), other.blocks.get(k)) {
                (Some(a), Some(b)) => frobenius_sqr(&(a - b)),
                (Some(a), None) | (None, Some(a)) => frobenius_sqr(a),
                (None, None) => 0.0,
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// `M(F)^{(ℓ,m)} = s_ℓ F^{(ℓ,m)} s_m` with `s_ℓ` the principal square root of `d e_ℓ`.
pub fn matrix_realization(ctx: &CalculusConstants, f: &Symbol) -> Result<OperatorMatrix> {
    check_context(ctx, f)?;
    let mut blocks = BTreeMap::new();
    for (&(l, m), b) in &f.blocks {
        let s = ctx.de(l)?.sqrt() * ctx.de(m)?.sqrt();
        blocks.insert((l, m), b * s);
    }
    Ok(OperatorMatrix {
        n: f.n,
        sigma: f.sigma,
        blocks,
    })
}
