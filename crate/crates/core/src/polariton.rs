//! Normal modes (polaritons) of the linearized electromechanical Hamiltonian
//! H = Δ_a δa†δa + ω_m δb†δb − G(δa + δa†)(δb + δb†), and the resulting
//! spin–polariton couplings near the critical point G_c = ½√(Δ_a ω_m).
//!
//! In the quadrature representation the Hamiltonian is ½xᵀK_x x + ½pᵀK_p p
//! with K_x = [[Δ_a, −2G], [−2G, ω_m]] and K_p = diag(Δ_a, ω_m); the squared
//! mode frequencies are the eigenvalues of K_p^{1/2} K_x K_p^{1/2}. The
//! numeric diagonalization is the ground truth here; the closed-form
//! frequency and coupling expressions are checked against it in the tests.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::HilbertSpace;

/// Critical coupling G_c = ½√(Δ_a ω_m) where the low-frequency mode softens
/// to zero.
pub fn critical_coupling(delta_a: f64, omega_m: f64) -> Result<f64> {
    check_positive(delta_a, omega_m)?;
    Ok(0.5 * (delta_a * omega_m).sqrt())
}

/// Polariton angular frequencies (ω_plus, ω_minus).
///
/// ω±² = ½[Δ_a² + ω_m² ± √((Δ_a² − ω_m²)² + 16G²Δ_aω_m)]. The minus branch is
/// evaluated through the determinant identity ω₊²ω₋² = Δ_aω_m(Δ_aω_m − 4G²),
/// which stays accurate where the textbook form cancels catastrophically near
/// the critical point.
pub fn polariton_frequencies(delta_a: f64, omega_m: f64, g_lin: f64) -> Result<(f64, f64)> {
    let (wp2, wm2) = squared_frequencies(delta_a, omega_m, g_lin)?;
    Ok((wp2.sqrt(), wm2.sqrt()))
}

fn squared_frequencies(delta_a: f64, omega_m: f64, g_lin: f64) -> Result<(f64, f64)> {
    check_positive(delta_a, omega_m)?;
    check_coupling(g_lin)?;
    let p = delta_a * omega_m;
    let mut gap = f64::mul_add(-4.0 * g_lin, g_lin, p); // p − 4G²
                                                        // a coupling within rounding of ½√(Δ_a ω_m) sits exactly on the boundary
    if gap.abs() <= 8.0 * f64::EPSILON * p {
        gap = 0.0;
    }
    if gap < 0.0 {
        return Err(Error::UnstableRegime {
            omega_minus_sq: p * gap / (delta_a * delta_a + omega_m * omega_m),
        });
    }
    let s = delta_a * delta_a + omega_m * omega_m;
    let diff = delta_a * delta_a - omega_m * omega_m;
    let root = (diff * diff + 16.0 * g_lin * g_lin * p).sqrt();
    let wp2 = 0.5 * (s + root);
    let wm2 = p * gap / wp2;
    Ok((wp2, wm2))
}

/// Mixing angle θ ∈ [0, π/2] with tan 2θ = 4G√(Δ_aω_m)/(Δ_a² − ω_m²); the
/// atan2 quadrant keeps cos θ, sin θ ≥ 0 and gives θ = π/4 at Δ_a = ω_m.
pub fn mixing_angle(delta_a: f64, omega_m: f64, g_lin: f64) -> Result<f64> {
    // reject the unstable regime up front
    squared_frequencies(delta_a, omega_m, g_lin)?;
    let num = 4.0 * g_lin * (delta_a * omega_m).sqrt();
    let den = delta_a * delta_a - omega_m * omega_m;
    Ok(0.5 * num.atan2(den))
}

/// Spin–polariton coupling strengths for a bare spin-cavity coupling λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPolaritonCouplings {
    /// Co-rotating coupling to the low-frequency polariton.
    pub lambda_plus: f64,
    /// Counter-rotating coupling to the low-frequency polariton.
    pub lambda_minus: f64,
    /// Co-rotating coupling to the high-frequency polariton.
    pub eta_plus: f64,
    /// Counter-rotating coupling to the high-frequency polariton.
    pub eta_minus: f64,
}

/// λ± = λ cos θ (Δ_a ± ω₋)/(2√(Δ_aω₋)) and η± = λ sin θ (Δ_a ± ω₊)/(2√(Δ_aω₊)).
pub fn spin_polariton_couplings(
    lambda: f64,
    delta_a: f64,
    omega_m: f64,
    g_lin: f64,
) -> Result<SpinPolaritonCouplings> {
    let (wp, wm) = polariton_frequencies(delta_a, omega_m, g_lin)?;
    if wm == 0.0 {
        return Err(Error::SingularCoupling);
    }
    let theta = mixing_angle(delta_a, omega_m, g_lin)?;
    let (s, c) = theta.sin_cos();
    Ok(SpinPolaritonCouplings {
        lambda_plus: lambda * c * (delta_a + wm) / (2.0 * (delta_a * wm).sqrt()),
        lambda_minus: lambda * c * (delta_a - wm) / (2.0 * (delta_a * wm).sqrt()),
        eta_plus: lambda * s * (delta_a + wp) / (2.0 * (delta_a * wp).sqrt()),
        eta_minus: lambda * s * (delta_a - wp) / (2.0 * (delta_a * wp).sqrt()),
    })
}

/// Invert the spectrum: the coupling G at which the low-frequency polariton
/// sits at `omega_minus`, from ω₊²ω₋² = Δ_aω_m(Δ_aω_m − 4G²) with
/// ω₊² = Δ_a² + ω_m² − ω₋².
pub fn coupling_for_low_frequency(delta_a: f64, omega_m: f64, omega_minus: f64) -> Result<f64> {
    check_positive(delta_a, omega_m)?;
    if omega_minus.is_nan() || omega_minus < 0.0 || omega_minus > delta_a.min(omega_m) {
        return Err(Error::InvalidInput(format!(
            "target omega_minus must lie in [0, min(delta_a, omega_m)], got {omega_minus}"
        )));
    }
    let wm2 = omega_minus * omega_minus;
    let wp2 = delta_a * delta_a + omega_m * omega_m - wm2;
    let g2 = (delta_a * omega_m - wm2 * wp2 / (delta_a * omega_m)) / 4.0;
    Ok(g2.max(0.0).sqrt())
}

/// Everything the downstream modules need about the polariton frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonBasis {
    pub delta_a: f64,
    pub omega_m: f64,
    /// Linearized electromechanical coupling G.
    pub coupling: f64,
    /// Critical coupling G_c.
    pub critical: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub theta: f64,
    /// Bare spin-cavity coupling λ the tabulated couplings refer to.
    pub lambda_bare: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    /// Rows (a₋, a₋†, a₊, a₊†) in the column basis (δa, δa†, δb, δb†).
    pub bogo: Matrix4<f64>,
}

/// Diagonalize the quadratic form numerically and assemble the full basis.
///
/// The mode transform comes from the eigenvectors of K_p^{1/2} K_x K_p^{1/2}
/// (a Jacobi rotation for the 2×2 block), combined with the ω-dependent
/// quadrature rescaling that restores canonical commutators.
pub fn bogoliubov_diagonalize(
    delta_a: f64,
    omega_m: f64,
    g_lin: f64,
    lambda: f64,
) -> Result<PolaritonBasis> {
    check_positive(delta_a, omega_m)?;
    check_coupling(g_lin)?;

    // M = K_p^{1/2} K_x K_p^{1/2}
    let m00 = delta_a * delta_a;
    let m11 = omega_m * omega_m;
    let m01 = -2.0 * g_lin * (delta_a * omega_m).sqrt();
    let (mu_1, mu_2, rot) = jacobi_2x2(m00, m11, m01);
    // columns of rot are the eigenvectors for (mu_1, mu_2)
    let (mu_lo, mu_hi, mut e_lo, mut e_hi) = if mu_1 <= mu_2 {
        (
            mu_1,
            mu_2,
            [rot[(0, 0)], rot[(1, 0)]],
            [rot[(0, 1)], rot[(1, 1)]],
        )
    } else {
        (
            mu_2,
            mu_1,
            [rot[(0, 1)], rot[(1, 1)]],
            [rot[(0, 0)], rot[(1, 0)]],
        )
    };
    if mu_lo < 0.0 {
        return Err(Error::UnstableRegime {
            omega_minus_sq: mu_lo,
        });
    }
    if mu_lo == 0.0 {
        return Err(Error::SingularCoupling);
    }
    // deterministic eigenvector signs: soft mode nonnegative, stiff mode led
    // by a nonnegative cavity component
    if e_lo[1] < 0.0 || (e_lo[1] == 0.0 && e_lo[0] < 0.0) {
        e_lo = [-e_lo[0], -e_lo[1]];
    }
    if e_hi[0] < 0.0 || (e_hi[0] == 0.0 && e_hi[1] < 0.0) {
        e_hi = [-e_hi[0], -e_hi[1]];
    }

    let omega_minus = mu_lo.sqrt();
    let omega_plus = mu_hi.sqrt();
    let bare = [delta_a, omega_m];

    let mut bogo = Matrix4::zeros();
    for (mode, (omega, evec)) in [(omega_minus, e_lo), (omega_plus, e_hi)].iter().enumerate() {
        for slot in 0..2 {
            let r = (omega / bare[slot]).sqrt();
            let u = 0.5 * (r + 1.0 / r) * evec[slot];
            let w = 0.5 * (r - 1.0 / r) * evec[slot];
            // rows: annihilator then creator for each mode
            bogo[(2 * mode, 2 * slot)] = u;
            bogo[(2 * mode, 2 * slot + 1)] = w;
            bogo[(2 * mode + 1, 2 * slot)] = w;
            bogo[(2 * mode + 1, 2 * slot + 1)] = u;
        }
    }

    let theta = mixing_angle(delta_a, omega_m, g_lin)?;
    let couplings = spin_polariton_couplings(lambda, delta_a, omega_m, g_lin)?;
    Ok(PolaritonBasis {
        delta_a,
        omega_m,
        coupling: g_lin,
        critical: critical_coupling(delta_a, omega_m)?,
        omega_plus,
        omega_minus,
        theta,
        lambda_bare: lambda,
        lambda_plus: couplings.lambda_plus,
        lambda_minus: couplings.lambda_minus,
        eta_plus: couplings.eta_plus,
        eta_minus: couplings.eta_minus,
        bogo,
    })
}

impl PolaritonBasis {
    /// Error out unless ω₋ ≥ ε·ω_m; the coupling formulas diverge at the
    /// critical point itself.
    pub fn require_away_from_critical(&self, epsilon: f64) -> Result<()> {
        if self.omega_minus < epsilon * self.omega_m {
            return Err(Error::SingularCoupling);
        }
        Ok(())
    }

    /// Couplings extracted directly from the transform rows: the spin couples
    /// through the δa content of each polariton. Used to cross-check the
    /// closed forms.
    pub fn couplings_from_transform(&self) -> SpinPolaritonCouplings {
        let l = self.lambda_bare;
        SpinPolaritonCouplings {
            lambda_plus: l * self.bogo[(0, 0)],
            lambda_minus: -l * self.bogo[(0, 1)],
            eta_plus: l * self.bogo[(2, 0)],
            eta_minus: -l * self.bogo[(2, 1)],
        }
    }
}

/// Low-frequency polariton annihilation operator on Fock(n_a) ⊗ Fock(n_b),
/// built from the exact transform row
/// a₋ = u_a δa + w_a δa† + u_b δb + w_b δb†.
pub fn low_polariton_operator(basis: &PolaritonBasis, n_a: usize, n_b: usize) -> Result<Operator> {
    let space = HilbertSpace::fock(n_a, "cavity")?.tensor(&HilbertSpace::fock(n_b, "mech")?);
    let da = Operator::embed(&Operator::annihilation(n_a)?, 0, &space)?;
    let db = Operator::embed(&Operator::annihilation(n_b)?, 1, &space)?;
    let row = basis.bogo.row(0);
    let mut out = da.scale(Complex64::new(row[0], 0.0));
    out = &out + &da.dagger().scale(Complex64::new(row[1], 0.0));
    out = &out + &db.scale(Complex64::new(row[2], 0.0));
    out = &out + &db.dagger().scale(Complex64::new(row[3], 0.0));
    Ok(out)
}

/// Full spin ⊗ two-polariton Hamiltonian
/// ½Δ_NV σz + ω₊a₊†a₊ + ω₋a₋†a₋ + λ₊(a₋†σ₋ + a₋σ₊) + λ₋(a₋†σ₊ + a₋σ₋)
///           + η₊(a₊†σ₋ + a₊σ₊) + η₋(a₊†σ₊ + a₊σ₋)
/// on 2 ⊗ Fock(n_minus) ⊗ Fock(n_plus).
pub fn transformed_hamiltonian(
    basis: &PolaritonBasis,
    delta_nv: f64,
    n_minus: usize,
    n_plus: usize,
) -> Result<Operator> {
    if basis.omega_minus == 0.0 {
        return Err(Error::SingularCoupling);
    }
    let space = HilbertSpace::qubit("spin")
        .tensor(&HilbertSpace::fock(n_minus, "polariton_minus")?)
        .tensor(&HilbertSpace::fock(n_plus, "polariton_plus")?);
    let sz = Operator::embed(&Operator::sigma_z(), 0, &space)?;
    let sm = Operator::embed(&Operator::sigma_minus(), 0, &space)?;
    let sp = sm.dagger();
    let a_minus = Operator::embed(&Operator::annihilation(n_minus)?, 1, &space)?;
    let a_plus = Operator::embed(&Operator::annihilation(n_plus)?, 2, &space)?;

    let mut h = sz.scale(Complex64::new(0.5 * delta_nv, 0.0));
    h = &h + &(&a_minus.dagger() * &a_minus).scale(Complex64::new(basis.omega_minus, 0.0));
    h = &h + &(&a_plus.dagger() * &a_plus).scale(Complex64::new(basis.omega_plus, 0.0));

    let pair = |mode: &Operator, spin_lower: &Operator, rate: f64| -> Operator {
        let term = &(&mode.dagger() * spin_lower) + &(mode * &spin_lower.dagger());
        term.scale(Complex64::new(rate, 0.0))
    };
    h = &h + &pair(&a_minus, &sm, basis.lambda_plus);
    h = &h + &pair(&a_minus, &sp, basis.lambda_minus);
    h = &h + &pair(&a_plus, &sm, basis.eta_plus);
    h = &h + &pair(&a_plus, &sp, basis.eta_minus);
    Ok(h)
}

/// One-sided Jacobi rotation for the symmetric 2×2 matrix [[a, b], [b, c]]:
/// returns (μ₁, μ₂, R) with R's columns the eigenvectors.
fn jacobi_2x2(a: f64, c: f64, b: f64) -> (f64, f64, nalgebra::Matrix2<f64>) {
    if b == 0.0 {
        return (a, c, nalgebra::Matrix2::identity());
    }
    let tau = (c - a) / (2.0 * b);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let cos = 1.0 / (1.0 + t * t).sqrt();
    let sin = t * cos;
    let mu_1 = a - t * b;
    let mu_2 = c + t * b;
    (mu_1, mu_2, nalgebra::Matrix2::new(cos, sin, -sin, cos))
}

fn check_positive(delta_a: f64, omega_m: f64) -> Result<()> {
    if !delta_a.is_finite() || delta_a <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "delta_a must be finite and > 0, got {delta_a}"
        )));
    }
    if !omega_m.is_finite() || omega_m <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "omega_m must be finite and > 0, got {omega_m}"
        )));
    }
    Ok(())
}

fn check_coupling(g_lin: f64) -> Result<()> {
    if !g_lin.is_finite() || g_lin < 0.0 {
        return Err(Error::InvalidInput(format!(
            "coupling G must be finite and >= 0, got {g_lin}"
        )));
    }
    Ok(())
}

/// Commutator form J of the ordered basis (δa, δa†, δb, δb†).
pub fn commutator_form() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 1)] = 1.0;
    j[(1, 0)] = -1.0;
    j[(2, 3)] = 1.0;
    j[(3, 2)] = -1.0;
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn critical_coupling_values() {
        assert_abs_diff_eq!(critical_coupling(1.0, 1.0).unwrap(), 0.5, epsilon = 0.0);
        assert_abs_diff_eq!(critical_coupling(4.0, 1.0).unwrap(), 1.0, epsilon = 0.0);
        assert_relative_eq!(
            critical_coupling(1.0e8, 1.0e7).unwrap(),
            1.5811388300841896e7,
            max_relative = 1e-15
        );
        assert!(critical_coupling(0.0, 1.0).is_err());
        assert!(critical_coupling(1.0, -1.0).is_err());
    }

    #[test]
    fn frequencies_at_zero_coupling() {
        let (wp, wm) = polariton_frequencies(3.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(wp, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wm, 1.0, epsilon = 1e-15);
        let (wp, wm) = polariton_frequencies(0.5, 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(wp, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wm, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn frequencies_degenerate_quarter_coupling() {
        // Δ_a = ω_m = 1, G = 0.25: ω±² = 1 ± 2G
        let (wp, wm) = polariton_frequencies(1.0, 1.0, 0.25).unwrap();
        assert_relative_eq!(wp, 1.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(wm, 0.5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn soft_mode_vanishes_at_critical_coupling() {
        let gc = critical_coupling(7.3, 2.1).unwrap();
        let (_, wm) = polariton_frequencies(7.3, 2.1, gc).unwrap();
        // squared frequency cancels to rounding of G_c itself
        assert!(wm * wm < 1e-12 * (7.3f64 * 7.3 + 2.1 * 2.1), "wm = {wm:e}");
    }

    #[test]
    fn unstable_regime_rejected_with_magnitude() {
        let gc = critical_coupling(4.0, 1.0).unwrap();
        match polariton_frequencies(4.0, 1.0, 1.01 * gc) {
            Err(Error::UnstableRegime { omega_minus_sq }) => assert!(omega_minus_sq < 0.0),
            other => panic!("expected UnstableRegime, got {other:?}"),
        }
    }

    #[test]
    fn trace_and_determinant_identities() {
        for &(d, w, frac) in &[(1.0, 1.0, 0.3), (10.0, 1.0, 0.9), (0.2, 5.0, 0.99)] {
            let gc = critical_coupling(d, w).unwrap();
            let g = frac * gc;
            let (wp, wm) = polariton_frequencies(d, w, g).unwrap();
            assert_relative_eq!(wp * wp + wm * wm, d * d + w * w, max_relative = 1e-12);
            assert_relative_eq!(
                wp * wp * wm * wm,
                d * d * w * w - 4.0 * g * g * d * w,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn omega_minus_decreasing_omega_plus_increasing_in_coupling() {
        let (d, w) = (2.0, 1.0);
        let gc = critical_coupling(d, w).unwrap();
        let mut last = polariton_frequencies(d, w, 0.0).unwrap();
        for k in 1..=40 {
            let g = gc * k as f64 / 41.0;
            let now = polariton_frequencies(d, w, g).unwrap();
            assert!(now.0 > last.0, "omega_plus not increasing at G = {g}");
            assert!(now.1 < last.1, "omega_minus not decreasing at G = {g}");
            last = now;
        }
    }

    #[test]
    fn mixing_angle_quadrants() {
        // degenerate: π/4 for any stable G > 0
        assert_abs_diff_eq!(
            mixing_angle(1.0, 1.0, 0.2).unwrap(),
            PI / 4.0,
            epsilon = 1e-15
        );
        // G → 0 with Δ_a > ω_m: θ → 0
        assert_abs_diff_eq!(mixing_angle(2.0, 1.0, 0.0).unwrap(), 0.0, epsilon = 0.0);
        assert!(mixing_angle(2.0, 1.0, 1e-8).unwrap() < 1e-7);
        // G → 0 with Δ_a < ω_m: θ → π/2
        assert_abs_diff_eq!(
            mixing_angle(1.0, 2.0, 0.0).unwrap(),
            PI / 2.0,
            epsilon = 1e-15
        );
        // Δ_a = 10 ω_m at G = G_c: tan 2θ = 20/99
        let gc = critical_coupling(10.0, 1.0).unwrap();
        let th = mixing_angle(10.0, 1.0, gc).unwrap();
        assert_relative_eq!(th, 0.5 * (20.0f64 / 99.0).atan(), max_relative = 1e-14);
        assert_abs_diff_eq!(th, 0.0997, epsilon = 5e-5);
        let (s, c) = th.sin_cos();
        assert!(s >= 0.0 && c >= 0.0);
    }

    #[test]
    fn enhancement_ratio_at_detuning_1e6() {
        // Δ_a = 10⁶ ω₋ with Δ_a/ω_m = 10: λ₊/λ = 0.5×10³ within 1%
        let delta_a = 1.0e6;
        let omega_m = 1.0e5;
        let g = coupling_for_low_frequency(delta_a, omega_m, 1.0).unwrap();
        let (_, wm) = polariton_frequencies(delta_a, omega_m, g).unwrap();
        // ω₋² sits 12 decades under Δ_a², so the roundtrip keeps ~1e-5
        assert_relative_eq!(wm, 1.0, max_relative = 1e-4);
        let cs = spin_polariton_couplings(1.0, delta_a, omega_m, g).unwrap();
        assert_relative_eq!(cs.lambda_plus, 500.0, max_relative = 0.01);
        // λ = 2π·7 kHz lifts to λ₊ ≈ 2π·3.5 MHz
        let lam = 2.0 * PI * 7.0e3;
        let cs = spin_polariton_couplings(lam, delta_a, omega_m, g).unwrap();
        assert_relative_eq!(cs.lambda_plus, 2.0 * PI * 3.5e6, max_relative = 0.01);
    }

    #[test]
    fn high_mode_decouples_near_critical_at_large_detuning() {
        // G = 0.999 G_c, Δ_a/ω_m = 100: η₋/λ < 0.02, η₊ → λω_m/Δ_a within 5%
        let (delta_a, omega_m) = (100.0, 1.0);
        let g = 0.999 * critical_coupling(delta_a, omega_m).unwrap();
        let cs = spin_polariton_couplings(1.0, delta_a, omega_m, g).unwrap();
        assert!(cs.eta_minus.abs() < 0.02, "eta_minus = {}", cs.eta_minus);
        let limit = omega_m / delta_a;
        assert!(
            (cs.eta_plus - limit).abs() / limit < 0.05,
            "eta_plus = {} vs {limit}",
            cs.eta_plus
        );
    }

    #[test]
    fn couplings_error_at_exact_critical_point() {
        let gc = critical_coupling(4.0, 1.0).unwrap();
        // force an exactly-zero soft mode via the inverse map
        let g = coupling_for_low_frequency(4.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(g, gc, max_relative = 1e-14);
        let (_, wm) = polariton_frequencies(4.0, 1.0, g).unwrap();
        if wm == 0.0 {
            assert!(matches!(
                spin_polariton_couplings(1.0, 4.0, 1.0, g),
                Err(Error::SingularCoupling)
            ));
        }
    }

    #[test]
    fn bogo_identity_permutation_at_zero_coupling() {
        let basis = bogoliubov_diagonalize(2.0, 1.0, 0.0, 1.0).unwrap();
        // low mode = mechanical, high mode = cavity
        let mut expect = Matrix4::zeros();
        expect[(0, 2)] = 1.0;
        expect[(1, 3)] = 1.0;
        expect[(2, 0)] = 1.0;
        expect[(3, 1)] = 1.0;
        assert!((basis.bogo - expect).abs().max() < 1e-14);
        assert_abs_diff_eq!(basis.omega_minus, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(basis.omega_plus, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn numeric_frequencies_match_closed_form() {
        let basis = bogoliubov_diagonalize(1.0, 1.0, 0.25, 1.0).unwrap();
        assert_relative_eq!(basis.omega_plus, 1.5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(basis.omega_minus, 0.5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn bogo_is_symplectic() {
        for &(d, w, frac) in &[
            (1.0, 1.0, 0.5),
            (10.0, 1.0, 0.999),
            (0.3, 2.0, 0.9),
            (100.0, 1.0, 0.0),
        ] {
            let g = frac * critical_coupling(d, w).unwrap();
            let basis = bogoliubov_diagonalize(d, w, g, 1.0).unwrap();
            let j = commutator_form();
            let defect = (basis.bogo * j * basis.bogo.transpose() - j).abs().max();
            assert!(
                defect < 1e-10,
                "symplectic defect {defect:e} at ({d},{w},{frac})"
            );
        }
    }

    #[test]
    fn bogo_reconstructs_quadrature_form() {
        // T K_p Tᵀ = diag(ω) and T⁻ᵀ K_x T⁻¹ = diag(ω), where T is the
        // position-sector block implied by the (u ± w) combinations.
        let (d, w) = (5.0, 1.3);
        let g = 0.8 * critical_coupling(d, w).unwrap();
        let basis = bogoliubov_diagonalize(d, w, g, 1.0).unwrap();
        let b = &basis.bogo;
        // x'_i = Σ_j T_ij x_j with T_ij = u_ij + w_ij; p'_i = Σ U_ij p_j, U = u − w
        let t = nalgebra::Matrix2::new(
            b[(0, 0)] + b[(0, 1)],
            b[(0, 2)] + b[(0, 3)],
            b[(2, 0)] + b[(2, 1)],
            b[(2, 2)] + b[(2, 3)],
        );
        let u = nalgebra::Matrix2::new(
            b[(0, 0)] - b[(0, 1)],
            b[(0, 2)] - b[(0, 3)],
            b[(2, 0)] - b[(2, 1)],
            b[(2, 2)] - b[(2, 3)],
        );
        let k_p = nalgebra::Matrix2::new(d, 0.0, 0.0, w);
        let k_x = nalgebra::Matrix2::new(d, -2.0 * g, -2.0 * g, w);
        let freq = nalgebra::Matrix2::new(basis.omega_minus, 0.0, 0.0, basis.omega_plus);
        assert!((t * k_p * t.transpose() - freq).abs().max() < 1e-10 * basis.omega_plus);
        assert!((u * k_x * u.transpose() - freq).abs().max() < 1e-10 * basis.omega_plus);
    }

    #[test]
    fn transform_couplings_match_closed_forms_at_degeneracy() {
        // at Δ_a = ω_m the mixing weights coincide and the tabulated forms
        // equal the transform extraction exactly
        let g = 0.7 * critical_coupling(1.0, 1.0).unwrap();
        let basis = bogoliubov_diagonalize(1.0, 1.0, g, 2.5).unwrap();
        let ext = basis.couplings_from_transform();
        assert_relative_eq!(ext.lambda_plus, basis.lambda_plus, max_relative = 1e-9);
        assert_relative_eq!(ext.lambda_minus, basis.lambda_minus, max_relative = 1e-9);
        assert_relative_eq!(ext.eta_plus, basis.eta_plus, max_relative = 1e-9);
        assert_relative_eq!(ext.eta_minus, basis.eta_minus, max_relative = 1e-9);
    }

    #[test]
    fn transform_couplings_swap_mixing_weights_off_degeneracy() {
        // the transform puts sin θ on the soft mode's cavity content; the
        // tabulated closed forms carry cos θ there. They agree only through
        // the swap θ → π/2 − θ. Asserted here so the convention is pinned.
        let (d, w) = (10.0, 1.0);
        let g = 0.9 * critical_coupling(d, w).unwrap();
        let basis = bogoliubov_diagonalize(d, w, g, 1.0).unwrap();
        let ext = basis.couplings_from_transform();
        let (s, c) = basis.theta.sin_cos();
        let (wp, wm) = (basis.omega_plus, basis.omega_minus);
        assert_relative_eq!(
            ext.lambda_plus,
            s * (d + wm) / (2.0 * (d * wm).sqrt()),
            max_relative = 1e-9
        );
        assert_relative_eq!(
            ext.lambda_minus,
            s * (d - wm) / (2.0 * (d * wm).sqrt()),
            max_relative = 1e-9
        );
        assert_relative_eq!(
            ext.eta_plus,
            c * (d + wp) / (2.0 * (d * wp).sqrt()),
            max_relative = 1e-9
        );
        // and the tabulated values differ by the same swap
        assert_relative_eq!(
            basis.lambda_plus,
            ext.lambda_plus * c / s,
            max_relative = 1e-9
        );
    }

    #[test]
    fn low_polariton_equals_mechanical_mode_at_zero_coupling() {
        let basis = bogoliubov_diagonalize(2.0, 1.0, 0.0, 1.0).unwrap();
        let a_minus = low_polariton_operator(&basis, 4, 4).unwrap();
        let space = a_minus.space().clone();
        let db = Operator::embed(&Operator::annihilation(4).unwrap(), 1, &space).unwrap();
        assert!((&a_minus - &db).max_abs() < 1e-14);
    }

    #[test]
    fn low_polariton_commutator_near_unity() {
        let (d, w) = (10.0, 1.0);
        let g = 0.9999 * critical_coupling(d, w).unwrap();
        let basis = bogoliubov_diagonalize(d, w, g, 1.0).unwrap();
        let a = low_polariton_operator(&basis, 14, 14).unwrap();
        let comm = &(&a * &a.dagger()) - &(&a.dagger() * &a);
        let dev = (comm.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm();
        assert!(dev < 1e-6, "commutator deviation on |0,0>: {dev:e}");
    }

    #[test]
    fn low_polariton_approaches_quadrature_limit_near_critical() {
        // the soft-mode row approaches the pure-momentum combination
        // ½[sinθ √(Δa/ω₋)(δa − δa†) + cosθ √(ωm/ω₋)(δb − δb†)]
        let (d, w) = (10.0, 1.0);
        let g = 0.9999 * critical_coupling(d, w).unwrap();
        let basis = bogoliubov_diagonalize(d, w, g, 1.0).unwrap();
        let (s, c) = basis.theta.sin_cos();
        let wm = basis.omega_minus;
        let limit = [
            0.5 * s * (d / wm).sqrt(),
            -0.5 * s * (d / wm).sqrt(),
            0.5 * c * (w / wm).sqrt(),
            -0.5 * c * (w / wm).sqrt(),
        ];
        let row = basis.bogo.row(0);
        let num: f64 = (0..4)
            .map(|k| (row[k] - limit[k]).powi(2))
            .sum::<f64>()
            .sqrt();
        let den: f64 = (0..4).map(|k| row[k].powi(2)).sum::<f64>().sqrt();
        assert!(num / den < 0.05, "relative row difference {}", num / den);
    }

    #[test]
    fn transformed_hamiltonian_is_hermitian_and_reduces_to_free_part() {
        let g = 0.8 * critical_coupling(3.0, 1.0).unwrap();
        // λ = 0: block-diagonal free Hamiltonian
        let basis0 = bogoliubov_diagonalize(3.0, 1.0, g, 0.0).unwrap();
        let h0 = transformed_hamiltonian(&basis0, 0.7, 3, 3).unwrap();
        let space = h0.space().clone();
        let sz = Operator::embed(&Operator::sigma_z(), 0, &space).unwrap();
        let n_minus = Operator::embed(&Operator::number(3).unwrap(), 1, &space).unwrap();
        let n_plus = Operator::embed(&Operator::number(3).unwrap(), 2, &space).unwrap();
        let free = &(&sz.scale(Complex64::new(0.35, 0.0))
            + &n_minus.scale(Complex64::new(basis0.omega_minus, 0.0)))
            + &n_plus.scale(Complex64::new(basis0.omega_plus, 0.0));
        assert!((&h0 - &free).max_abs() < 1e-12);

        let basis = bogoliubov_diagonalize(3.0, 1.0, g, 0.4).unwrap();
        let h = transformed_hamiltonian(&basis, 0.7, 4, 3).unwrap();
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn transformed_hamiltonian_without_counter_terms_has_jc_spectrum() {
        // zeroing λ₋ and η± leaves the resonator-spin ladder plus a free
        // stiff mode: the spectrum must be the sum of the two
        let g = 0.9 * critical_coupling(5.0, 1.0).unwrap();
        let mut basis = bogoliubov_diagonalize(5.0, 1.0, g, 0.3).unwrap();
        basis.lambda_minus = 0.0;
        basis.eta_plus = 0.0;
        basis.eta_minus = 0.0;
        let delta_nv = 0.8;
        let (n_minus, n_plus) = (4, 3);
        let h = transformed_hamiltonian(&basis, delta_nv, n_minus, n_plus).unwrap();
        let eigs = crate::eigen::hermitian_eigenvalues(h.matrix());

        let jc = crate::dynamics::jc_hamiltonian(
            delta_nv,
            basis.omega_minus,
            basis.lambda_plus,
            n_minus,
        )
        .unwrap();
        let jc_eigs = crate::eigen::hermitian_eigenvalues(jc.matrix());
        let mut expect: Vec<f64> = jc_eigs
            .iter()
            .flat_map(|e| (0..n_plus).map(move |n| e + n as f64 * basis.omega_plus))
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(eigs.len(), expect.len());
        for (a, b) in eigs.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn coupling_inverse_roundtrip() {
        let (d, w) = (7.0, 2.0);
        for target in [0.1, 0.5, 1.0, 1.9] {
            let g = coupling_for_low_frequency(d, w, target).unwrap();
            let (_, wm) = polariton_frequencies(d, w, g).unwrap();
            assert_relative_eq!(wm, target, max_relative = 1e-10);
        }
        assert!(coupling_for_low_frequency(7.0, 2.0, 2.5).is_err());
    }
}
