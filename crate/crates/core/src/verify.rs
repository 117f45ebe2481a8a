//! Property suites: H*-axioms, minimal ideals, and the full verification run
//! behind `covsym verify`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use std::fmt;

use crate::error::Result;
use crate::harmonics::{theta_kernel, theta_kernel_basis_sum, HarmonicBasis};
use crate::intertwining::{
    apply_a_quadrature, c_mu, eta_ell, eta_ell_closed_form, unitary_mu, CalculusConstants,
};
use crate::quadrature::SphericalGrid;
use crate::random::{
    random_k_invariant, random_rotation, random_sphere_point, random_unit_symbol,
    random_unit_vector, seeded,
};
use crate::specfun::harmonic_dim;
use crate::star_algebra::{
    idempotent_rank_one, inner_product, involution, k_invariant_idempotent, matrix_realization,
    star_product, Symbol,
};

/// Residuals of the H*-algebra axioms on one triple.
#[derive(Debug, Clone, Copy)]
pub struct AxiomReport {
    /// `‖(F#G)#H − F#(G#H)‖`
    pub associativity: f64,
    /// `|⟨F#G, H⟩ − ⟨G, F*#H⟩|`
    pub adjoint_pairing: f64,
    /// `|‖F*‖ − ‖F‖|`
    pub isometry: f64,
    /// `‖F#G‖ − ‖F‖‖G‖`, nonpositive up to rounding.
    pub submultiplicativity: f64,
    /// `‖(F#G)* − G*#F*‖`
    pub anti_homomorphism: f64,
    /// `‖F#F*‖ / ‖F‖²`, positive for `F ≠ 0`.
    pub non_degeneracy: f64,
}

impl AxiomReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.associativity <= tol
            && self.adjoint_pairing <= tol
            && self.isometry <= tol
            && self.submultiplicativity <= tol
            && self.anti_homomorphism <= tol
            && self.non_degeneracy > 0.0
    }
}

pub fn verify_hstar_axioms(
    ctx: &CalculusConstants,
    f: &Symbol,
    g: &Symbol,
    h: &Symbol,
) -> Result<AxiomReport> {
    let fg = star_product(ctx, f, g)?;
    let fs = involution(ctx, f)?;
    let gs = involution(ctx, g)?;
    let left = star_product(ctx, &fg, h)?;
    let right = star_product(ctx, f, &star_product(ctx, g, h)?)?;
    let pairing = inner_product(&fg, h)? - inner_product(g, &star_product(ctx, &fs, h)?)?;
    let anti = involution(ctx, &fg)?.distance(&star_product(ctx, &gs, &fs)?);
    let ffs = star_product(ctx, f, &fs)?.norm();
    let fnorm = f.norm();
    Ok(AxiomReport {
        associativity: left.distance(&right),
        adjoint_pairing: pairing.norm(),
        isometry: (fs.norm() - fnorm).abs(),
        submultiplicativity: fg.norm() - fnorm * g.norm(),
        anti_homomorphism: anti,
        non_degeneracy: if fnorm == 0.0 {
            0.0
        } else {
            ffs / (fnorm * fnorm)
        },
    })
}

/// Outcome of [`minimal_left_ideal_check`].
#[derive(Debug, Clone)]
pub struct IdealReport {
    /// Largest distance of `R # e^ℓ_f` from `{B : B = B f fᴴ}` (off-degree blocks count in full).
    pub containment: f64,
    /// Largest `‖e R e − λ e‖` with `λ = ⟨eRe, e⟩ / ⟨e, e⟩`.
    pub scalar_residual: f64,
    pub scalars: Vec<Complex64>,
}

/// Draws `trials` unit-norm random symbols `R` over all degrees of `ctx` and checks
/// that `R # e` stays in `L² ⊗ f̄` and that `e # R # e ∈ ℂ e`.
pub fn minimal_left_ideal_check<G: Rng + ?Sized>(
    ctx: &CalculusConstants,
    degree: u32,
    f: &DVector<Complex64>,
    trials: usize,
    rng: &mut G,
) -> Result<IdealReport> {
    let e = idempotent_rank_one(ctx, degree, f)?;
    let proj = f * f.adjoint();
    let ee = inner_product(&e, &e)?;
    let mut report = IdealReport {
        containment: 0.0,
        scalar_residual: 0.0,
        scalars: Vec::with_capacity(trials),
    };
    for _ in 0..trials {
        let r = random_unit_symbol(rng, ctx.n(), ctx.sigma(), ctx.l_max())?;
        let re = star_product(ctx, &r, &e)?;
        let mut off2 = 0.0;
        for ((_, m), b) in re.blocks() {
            let miss = if m == degree {
                b - b * &proj
            } else {
                b.clone()
            };
            off2 += miss.norm_squared();
        }
        report.containment = report.containment.max(off2.sqrt());
        let ere = star_product(ctx, &e, &re)?;
        let lambda = inner_product(&ere, &e)? / ee;
        let res = ere.distance(&e.scale(lambda));
        report.scalar_residual = report.scalar_residual.max(res);
        report.scalars.push(lambda);
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub n: usize,
    pub sigma: f64,
    pub l_max: u32,
    pub grid_exactness: u32,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n: 3,
            sigma: 1.3,
            l_max: 8,
            grid_exactness: 24,
            seed: 0,
        }
    }
}

/// How a residual is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// residual ≤ tolerance
    AtMost,
    /// residual > tolerance
    Above,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: u8,
    pub label: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub note: Option<String>,
    pub skipped: bool,
}

impl Check {
    fn new(criterion: u8, label: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            criterion,
            label: label.into(),
            residual,
            tolerance,
            bound: Bound::AtMost,
            note: None,
            skipped: false,
        }
    }

    fn skip(criterion: u8, label: impl Into<String>, why: impl Into<String>) -> Self {
        Self {
            skipped: true,
            note: Some(why.into()),
            ..Self::new(criterion, label, 0.0, 0.0)
        }
    }

    fn above(mut self) -> Self {
        self.bound = Bound::Above;
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        if self.skipped {
            return true;
        }
        match self.bound {
            Bound::AtMost => self.residual <= self.tolerance,
            Bound::Above => self.residual > self.tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.skipped {
            return write!(
                f,
                "[{:>2}] SKIP {}: {}",
                self.criterion,
                self.label,
                self.note.as_deref().unwrap_or("")
            );
        }
        let cmp = match self.bound {
            Bound::AtMost => "<=",
            Bound::Above => ">",
        };
        write!(
            f,
            "[{:>2}] {} {}: residual {:.3e} (need {} {:.1e})",
            self.criterion,
            if self.passed() { "PASS" } else { "FAIL" },
            self.label,
            self.residual + 0.0,
            cmp,
            self.tolerance
        )?;
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

/// Grid exactness at which the kinked-kernel comparison is held to 1e-6.
pub const KINK_REFERENCE_EXACTNESS: u32 = 24;

/// Tolerance for the `|t|³` kernel on a grid of exactness `p`: `1e-6` from
/// [`KINK_REFERENCE_EXACTNESS`] up, `1e-6 (24/p)⁴` below it.
pub fn kink_tolerance(p: u32) -> f64 {
    let ratio = KINK_REFERENCE_EXACTNESS as f64 / p.max(1) as f64;
    1e-6 * ratio.powi(4).max(1.0)
}

const TRIALS: usize = 20;

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

/// Runs every acceptance criterion for one configuration.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ctx = CalculusConstants::new(cfg.n, cfg.sigma, cfg.l_max)?;
    let degrees: Vec<u32> = ctx.degrees().collect();
    let mut rng = seeded(cfg.seed);
    let mut out = Vec::new();
    let n = cfg.n;
    let c = n as f64;

    // 1
    let d = ctx.d();
    out.push(Check::new(
        1,
        "|d|^2 c = 1",
        (d.norm_sqr() * ctx.c() - 1.0).norm(),
        1e-9,
    ));
    let worst = max_of(
        degrees
            .iter()
            .map(|&l| (ctx.e_ell(l).map(|e| (e.norm_sqr() - ctx.c()).norm())).unwrap_or(f64::NAN)),
    );
    out.push(Check::new(
        1,
        format!("|e_l|^2 = c for l <= {}", cfg.l_max),
        worst,
        1e-9,
    ));

    // 2
    if n == 3 {
        let two_fifteenths = eta_ell(3, 2, Complex64::new(-5.0, 0.0))? - 2.0 / 15.0;
        out.push(Check::new(
            2,
            "eta_2(-5) = 2/15",
            two_fifteenths.norm(),
            1e-14,
        ));
        let grid = SphericalGrid::build(3, cfg.grid_exactness)?;
        let mu = Complex64::new(-5.0, 0.0);
        let mut poly = 0.0f64;
        let mut used = Vec::new();
        for &l in degrees.iter().filter(|&&l| l + 2 <= cfg.grid_exactness) {
            let q = apply_a_quadrature(&HarmonicBasis::new(3, l)?, mu, &grid)?;
            poly = poly.max((q.eigenvalue - eta_ell_closed_form(3, l, mu)?).norm());
            used.push(l);
        }
        out.push(
            Check::new(2, "quadrature vs closed form, mu = -5 (|t|^2)", poly, 1e-8).note(format!(
                "l in {used:?}, grid exactness {}",
                cfg.grid_exactness
            )),
        );
        let mu = Complex64::new(-6.0, 0.0);
        let mut kink = 0.0f64;
        for &l in degrees.iter().filter(|&&l| l <= 4) {
            let q = apply_a_quadrature(&HarmonicBasis::new(3, l)?, mu, &grid)?;
            kink = kink.max((q.eigenvalue - eta_ell_closed_form(3, l, mu)?).norm());
        }
        let tol = kink_tolerance(cfg.grid_exactness);
        let mut check = Check::new(2, "quadrature vs closed form, mu = -6 (|t|^3)", kink, tol);
        if tol > 1e-6 {
            check = check.note(format!(
                "degraded tolerance: grid exactness {} < {KINK_REFERENCE_EXACTNESS}",
                cfg.grid_exactness
            ));
        }
        out.push(check);
    } else {
        out.push(Check::skip(
            2,
            "quadrature eigenvalue oracle",
            "basis available for n = 3 only",
        ));
    }

    // 3
    let off_axis = Complex64::new(-c / 2.0 + 0.35, cfg.sigma);
    for (name, mu) in [
        ("unitary mu", unitary_mu(n, cfg.sigma)),
        ("off-axis mu", off_axis),
    ] {
        let cm = c_mu(n, mu)?;
        let mut worst = 0.0f64;
        for l in [0u32, 2, 4, 6] {
            let prod = eta_ell(n, l, mu)? * eta_ell(n, l, -mu - c)?;
            worst = worst.max((prod - cm).norm() / cm.norm());
        }
        out.push(Check::new(
            3,
            format!("eta_l(mu) eta_l(-mu-n) = c(mu), l in 0..6, {name}"),
            worst,
            1e-9,
        ));
    }

    // 4
    let phis: Vec<Symbol> = degrees
        .iter()
        .map(|&l| k_invariant_idempotent(&ctx, l).map(|k| k.to_symbol()))
        .collect::<Result<_>>()?;
    let mut idem = 0.0f64;
    let mut orth = 0.0f64;
    let mut selfadj = 0.0f64;
    for (i, a) in phis.iter().enumerate() {
        idem = idem.max(star_product(&ctx, a, a)?.distance(a));
        selfadj = selfadj.max(involution(&ctx, a)?.distance(a));
        for b in phis.iter().skip(i + 1) {
            orth = orth.max(star_product(&ctx, a, b)?.norm());
            orth = orth.max(star_product(&ctx, b, a)?.norm());
        }
    }
    out.push(Check::new(4, "phi_l # phi_l = phi_l", idem, 1e-11));
    out.push(Check::new(4, "phi_l # phi_l' = 0", orth, 1e-11));
    out.push(Check::new(4, "phi_l* = phi_l", selfadj, 1e-11));
    let mut idem = 0.0f64;
    let mut selfadj = 0.0f64;
    for &l in &degrees {
        let f = random_unit_vector(&mut rng, harmonic_dim(n, l));
        let e = idempotent_rank_one(&ctx, l, &f)?;
        idem = idem.max(star_product(&ctx, &e, &e)?.distance(&e));
        selfadj = selfadj.max(involution(&ctx, &e)?.distance(&e));
    }
    out.push(Check::new(4, "e_f # e_f = e_f", idem, 1e-11));
    out.push(Check::new(4, "e_f* = e_f", selfadj, 1e-11));

    // 5
    let mut reports = Vec::with_capacity(TRIALS);
    for _ in 0..TRIALS {
        let f = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
        let g = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
        let h = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
        reports.push(verify_hstar_axioms(&ctx, &f, &g, &h)?);
    }
    let worst = |pick: fn(&AxiomReport) -> f64| reports.iter().map(pick).fold(f64::MIN, f64::max);
    out.push(Check::new(
        5,
        "associativity",
        worst(|r| r.associativity),
        1e-10,
    ));
    out.push(Check::new(
        5,
        "<F#G,H> = <G,F*#H>",
        worst(|r| r.adjoint_pairing),
        1e-10,
    ));
    out.push(Check::new(5, "|F*| = |F|", worst(|r| r.isometry), 1e-10));
    out.push(Check::new(
        5,
        "|F#G| - |F||G| <= 0",
        worst(|r| r.submultiplicativity),
        1e-10,
    ));
    out.push(Check::new(
        5,
        "(F#G)* = G*#F*",
        worst(|r| r.anti_homomorphism),
        1e-10,
    ));
    let least = reports
        .iter()
        .map(|r| r.non_degeneracy)
        .fold(f64::INFINITY, f64::min);
    out.push(Check::new(5, "|F#F*| > 0 (smallest, |F| = 1)", least, 0.0).above());

    // 6
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let a = random_k_invariant(&mut rng, n, cfg.sigma, &degrees).to_symbol();
        let b = random_k_invariant(&mut rng, n, cfg.sigma, &degrees).to_symbol();
        worst = worst.max(star_product(&ctx, &a, &b)?.distance(&star_product(&ctx, &b, &a)?));
    }
    out.push(Check::new(
        6,
        "a#b = b#a on K-invariant symbols",
        worst,
        1e-14,
    ));

    // 7
    let (mut mult, mut adj, mut iso) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..TRIALS {
        let f = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
        let g = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
        let mf = matrix_realization(&ctx, &f)?;
        let mg = matrix_realization(&ctx, &g)?;
        mult = mult.max(
            matrix_realization(&ctx, &star_product(&ctx, &f, &g)?)?.distance(&mf.compose(&mg)),
        );
        adj = adj.max(matrix_realization(&ctx, &involution(&ctx, &f)?)?.distance(&mf.adjoint()));
        iso = iso.max((mf.hs_norm() - f.norm()).abs());
    }
    out.push(Check::new(7, "M(F#G) = M(F)M(G)", mult, 1e-12));
    out.push(Check::new(7, "M(F*) = M(F)^H", adj, 1e-12));
    out.push(Check::new(7, "|M(F)|_HS = |F|", iso, 1e-12));

    // 8
    let (mut contain, mut scalar) = (0.0f64, 0.0f64);
    for &l in &degrees {
        let f = random_unit_vector(&mut rng, harmonic_dim(n, l));
        let rep = minimal_left_ideal_check(&ctx, l, &f, TRIALS, &mut rng)?;
        contain = contain.max(rep.containment);
        scalar = scalar.max(rep.scalar_residual);
    }
    out.push(Check::new(8, "e R e in C e", scalar, 1e-11));
    out.push(Check::new(8, "R # e in L2 (x) conj(f)", contain, 1e-11));

    // 9
    if n == 3 {
        let grid = SphericalGrid::build(3, 2 * cfg.l_max.max(1))?;
        let (mut addition, mut diag, mut repro) = (0.0f64, 0.0f64, 0.0f64);
        for &l in &degrees {
            let basis = HarmonicBasis::new(3, l)?;
            let dim = harmonic_dim(3, l) as f64;
            for _ in 0..TRIALS {
                let u = random_sphere_point(&mut rng, 3);
                let v = random_sphere_point(&mut rng, 3);
                addition = addition.max(
                    (theta_kernel(3, l, &u, &v) - theta_kernel_basis_sum(&basis, &u, &v)).abs(),
                );
                diag = diag.max((theta_kernel_basis_sum(&basis, &u, &u) - dim).abs());
                diag = diag.max((theta_kernel(3, l, &u, &u) - dim).abs());
            }
            // ∫ θ_ℓ(u, x) f(x) dx = f(u) for a random f ∈ V_ℓ.
            let coeffs = DVector::from_fn(basis.len(), |_, _| rng.random::<f64>() - 0.5);
            let u = random_sphere_point(&mut rng, 3);
            let f = |x: &[f64]| -> f64 {
                basis
                    .eval(x)
                    .iter()
                    .zip(coeffs.iter())
                    .map(|(a, b)| a * b)
                    .sum()
            };
            let lhs = grid.integrate(|x| theta_kernel(3, l, &u, x) * f(x));
            repro = repro.max((lhs - f(&u)).abs());
        }
        out.push(Check::new(
            9,
            "addition theorem vs basis sum",
            addition,
            1e-10,
        ));
        out.push(Check::new(9, "reproducing property", repro, 1e-10));
        out.push(Check::new(9, "theta_l(u,u) = dim V_l", diag, 1e-10));
    } else {
        out.push(Check::skip(
            9,
            "harmonic infrastructure",
            "basis available for n = 3 only",
        ));
    }

    // 10
    if n == 3 {
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let r: DMatrix<f64> = random_rotation(&mut rng, 3);
            let f = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
            let g = random_unit_symbol(&mut rng, n, cfg.sigma, cfg.l_max)?;
            let lhs = star_product(&ctx, &f.rotate(&r)?, &g.rotate(&r)?)?;
            let rhs = star_product(&ctx, &f, &g)?.rotate(&r)?;
            worst = worst.max(lhs.distance(&rhs));
        }
        out.push(Check::new(10, "(R.F)#(R.G) = R.(F#G)", worst, 1e-9));
    } else {
        out.push(Check::skip(
            10,
            "K-equivariance",
            "rotations implemented for n = 3 only",
        ));
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_alone_passes_trivially() {
        let ctx = CalculusConstants::new(3, 1.3, 6).unwrap();
        let phi = k_invariant_idempotent(&ctx, 2).unwrap().to_symbol();
        let r = verify_hstar_axioms(&ctx, &phi, &phi, &phi).unwrap();
        assert!(r.associativity <= 1e-15);
        assert!(r.adjoint_pairing <= 1e-13);
        assert!(r.isometry <= 1e-14, "{r:?}");
        assert!(r.anti_homomorphism <= 1e-14);
        assert!(r.non_degeneracy > 0.0);
        assert!(r.passes(1e-10));
    }

    #[test]
    fn ideal_of_itself_gives_scalar_one() {
        let ctx = CalculusConstants::new(3, 0.7, 4).unwrap();
        let f = random_unit_vector(&mut seeded(3), 5);
        let e = idempotent_rank_one(&ctx, 2, &f).unwrap();
        let eee = star_product(&ctx, &e, &star_product(&ctx, &e, &e).unwrap()).unwrap();
        let lambda = inner_product(&eee, &e).unwrap() / inner_product(&e, &e).unwrap();
        assert!((lambda - 1.0).norm() <= 1e-12);
        let rep = minimal_left_ideal_check(&ctx, 2, &f, 5, &mut seeded(4)).unwrap();
        assert!(rep.containment <= 1e-11 && rep.scalar_residual <= 1e-11);
    }

    #[test]
    fn kink_tolerance_is_strict_from_reference_grid() {
        assert_eq!(kink_tolerance(24), 1e-6);
        assert_eq!(kink_tolerance(48), 1e-6);
        assert!((kink_tolerance(12) - 1.6e-5).abs() < 1e-18);
    }

    #[test]
    fn default_suite_passes() {
        let checks = run_suite(&SuiteConfig::default()).unwrap();
        for c in &checks {
            assert!(c.passed(), "{c}");
        }
        for k in 1..=10u8 {
            assert!(checks.iter().any(|c| c.criterion == k));
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = SuiteConfig {
            seed: 7,
            l_max: 4,
            ..Default::default()
        };
        let a: Vec<String> = run_suite(&cfg)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        let b: Vec<String> = run_suite(&cfg)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn coarse_grid_reports_degraded_tolerance() {
        let cfg = SuiteConfig {
            sigma: 0.7,
            grid_exactness: 12,
            ..Default::default()
        };
        let checks = run_suite(&cfg).unwrap();
        let kink = checks.iter().find(|c| c.label.contains("|t|^3")).unwrap();
        assert!(kink.note.as_deref().unwrap().contains("degraded"));
        assert!(checks.iter().all(Check::passed));
    }
}
