//! Dispersive (Fröhlich-Nakajima) reduction of the spin–polariton coupling:
//! polariton-mediated spin–spin interaction, ac Stark shift of the spin
//! frequency, the iSWAP gate it generates, and a numeric check of the
//! reduction against the full model.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::HilbertSpace;
use crate::state::{self, DensityMatrix, Ket};

/// Two spins dispersively coupled to the low-frequency polariton.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersiveParams {
    /// Spin–polariton couplings λ₊⁽ⁱ⁾.
    pub lambda_plus: [f64; 2],
    /// Detunings δᵢ = Δ_NV⁽ⁱ⁾ − ω₋.
    pub delta: [f64; 2],
    /// Small parameters ζᵢ = λ₊⁽ⁱ⁾/|δᵢ|.
    pub zeta: [f64; 2],
    /// c-number polariton occupation entering the Stark shift.
    pub n_pl: f64,
    /// Stark-shifted frequencies Δ_eff⁽ⁱ⁾ = Δ_NV⁽ⁱ⁾ + λ₊⁽ⁱ⁾ζᵢ(1 + 2N_pl).
    pub delta_eff: [f64; 2],
    /// Mediated coupling g_eff = ½(λ₊⁽¹⁾ζ₂ + λ₊⁽²⁾ζ₁).
    pub g_eff: f64,
}

impl DispersiveParams {
    pub fn new(
        lambda_plus: [f64; 2],
        delta_nv: [f64; 2],
        omega_minus: f64,
        n_pl: f64,
    ) -> Result<Self> {
        if n_pl < 0.0 || !n_pl.is_finite() {
            return Err(Error::InvalidInput(format!(
                "polariton occupation must be finite and >= 0, got {n_pl}"
            )));
        }
        let mut delta = [0.0; 2];
        let mut zeta = [0.0; 2];
        let mut delta_eff = [0.0; 2];
        for i in 0..2 {
            if lambda_plus[i] < 0.0 || !lambda_plus[i].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "lambda_plus[{i}] must be finite and >= 0, got {}",
                    lambda_plus[i]
                )));
            }
            delta[i] = delta_nv[i] - omega_minus;
            if delta[i] == 0.0 && lambda_plus[i] > 0.0 {
                return Err(Error::NonDispersive {
                    zeta: f64::INFINITY,
                });
            }
            zeta[i] = if lambda_plus[i] == 0.0 {
                0.0
            } else {
                lambda_plus[i] / delta[i].abs()
            };
            if zeta[i] >= 1.0 {
                return Err(Error::NonDispersive { zeta: zeta[i] });
            }
            delta_eff[i] = delta_nv[i] + lambda_plus[i] * zeta[i] * (1.0 + 2.0 * n_pl);
        }
        let g_eff = 0.5 * (lambda_plus[0] * zeta[1] + lambda_plus[1] * zeta[0]);
        Ok(Self {
            lambda_plus,
            delta,
            zeta,
            n_pl,
            delta_eff,
            g_eff,
        })
    }

    /// Largest of the two small parameters; above ~0.2 the reduction is
    /// marginal.
    pub fn max_zeta(&self) -> f64 {
        self.zeta[0].max(self.zeta[1])
    }
}

/// Two-spin space used by the gate operators, ordered (spin1, spin2) with the
/// basis (|ee⟩, |eg⟩, |ge⟩, |gg⟩).
pub fn two_spin_space() -> HilbertSpace {
    HilbertSpace::qubit("spin1").tensor(&HilbertSpace::qubit("spin2"))
}

/// H_eff = Σᵢ ½Δ_eff⁽ⁱ⁾σz⁽ⁱ⁾ + g_eff(σ₊⁽¹⁾σ₋⁽²⁾ + σ₋⁽¹⁾σ₊⁽²⁾) on the
/// two-spin space.
pub fn effective_hamiltonian(dp: &DispersiveParams) -> Result<Operator> {
    let space = two_spin_space();
    let sz1 = Operator::embed(&Operator::sigma_z(), 0, &space)?;
    let sz2 = Operator::embed(&Operator::sigma_z(), 1, &space)?;
    let sp1 = Operator::embed(&Operator::sigma_plus(), 0, &space)?;
    let sm1 = Operator::embed(&Operator::sigma_minus(), 0, &space)?;
    let sp2 = Operator::embed(&Operator::sigma_plus(), 1, &space)?;
    let sm2 = Operator::embed(&Operator::sigma_minus(), 1, &space)?;
    let mut h = sz1.scale(Complex64::new(0.5 * dp.delta_eff[0], 0.0));
    h = &h + &sz2.scale(Complex64::new(0.5 * dp.delta_eff[1], 0.0));
    let flip_flop = &(&sp1 * &sm2) + &(&sm1 * &sp2);
    h = &h + &flip_flop.scale(Complex64::new(dp.g_eff, 0.0));
    Ok(h)
}

/// The two additive σz frequency shifts of a dispersively coupled spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarkShift {
    pub zeta: f64,
    /// Occupation-independent zero-point shift λ₊ζ.
    pub zero_point: f64,
    /// Occupation-dependent shift 2λ₊ζ·N_pl.
    pub shift: f64,
}

/// Stark decomposition of the dispersive spin frequency:
/// Δ_NV → Δ_NV + λ₊ζ + 2λ₊ζ·N_pl.
pub fn stark_shift(lambda_plus: f64, delta: f64, n_pl: f64) -> Result<StarkShift> {
    if lambda_plus < 0.0 || !lambda_plus.is_finite() {
        return Err(Error::InvalidInput(format!(
            "lambda_plus must be finite and >= 0, got {lambda_plus}"
        )));
    }
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "detuning must be finite and nonzero, got {delta}"
        )));
    }
    let zeta = lambda_plus / delta.abs();
    if zeta >= 1.0 {
        return Err(Error::NonDispersive { zeta });
    }
    Ok(StarkShift {
        zeta,
        zero_point: lambda_plus * zeta,
        shift: 2.0 * lambda_plus * zeta * n_pl,
    })
}

/// Single-excitation Stark shift from the exact dressed ladder of the
/// resonator–spin model: ½(√(δ² + 8λ₊²) − δ), the difference of the spin
/// transition frequency between the one- and zero-quantum sectors.
pub fn stark_shift_exact_jc(lambda_plus: f64, delta: f64) -> f64 {
    0.5 * ((delta * delta + 8.0 * lambda_plus * lambda_plus).sqrt() - delta)
}

/// The iSWAP gate: |ge⟩ → −i|eg⟩, |eg⟩ → −i|ge⟩, |gg⟩ and |ee⟩ fixed.
pub fn ideal_iswap() -> Operator {
    let mut m = DMatrix::zeros(4, 4);
    let one = Complex64::new(1.0, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    m[(0, 0)] = one; // |ee⟩
    m[(3, 3)] = one; // |gg⟩
    m[(1, 2)] = minus_i; // |ge⟩ → −i|eg⟩
    m[(2, 1)] = minus_i; // |eg⟩ → −i|ge⟩
    Operator::from_matrix_unchecked(two_spin_space(), m)
}

/// exp(−i g_eff t (σ₊⁽¹⁾σ₋⁽²⁾ + σ₋⁽¹⁾σ₊⁽²⁾)); equals the iSWAP at
/// g_eff·t = π/2.
pub fn iswap_evolution(g_eff: f64, t: f64) -> Result<Operator> {
    if g_eff < 0.0 || !g_eff.is_finite() {
        return Err(Error::InvalidInput(format!(
            "g_eff must be finite and >= 0, got {g_eff}"
        )));
    }
    let (s, c) = (g_eff * t).sin_cos();
    let mut m = DMatrix::zeros(4, 4);
    let one = Complex64::new(1.0, 0.0);
    m[(0, 0)] = one;
    m[(3, 3)] = one;
    m[(1, 1)] = Complex64::new(c, 0.0);
    m[(2, 2)] = Complex64::new(c, 0.0);
    m[(1, 2)] = Complex64::new(0.0, -s);
    m[(2, 1)] = Complex64::new(0.0, -s);
    Ok(Operator::from_matrix_unchecked(two_spin_space(), m))
}

/// Average gate fidelity proxy |Tr(U†V)|²/d² for two unitaries.
pub fn gate_fidelity(u: &Operator, v: &Operator) -> Result<f64> {
    if !u.space().compatible(v.space()) {
        return Err(Error::SpaceMismatch(
            "gate fidelity of unitaries on different spaces".into(),
        ));
    }
    let d = u.dim() as f64;
    let tr = (u.matrix().adjoint() * v.matrix()).trace();
    Ok((tr.norm() / d).powi(2))
}

/// Numeric validation of the dispersive reduction: evolve two spins coupled
/// to one shared mode (initially |0⟩) alongside the reduced two-spin model
/// with N_pl = 0, both from |g⟩⊗|e⟩, and return the largest trace distance
/// between the reduced two-spin states over the grid.
///
/// Works in the mode's rotating frame (the metric is invariant to the common
/// frame choice), so `delta` are the spin detunings from the mode.
pub fn dispersive_error_check(
    lambda_plus: [f64; 2],
    delta: [f64; 2],
    n_max: usize,
    t_final: f64,
) -> Result<f64> {
    let dp = DispersiveParams::new(lambda_plus, delta, 0.0, 0.0)?;
    if dp.max_zeta() > 0.2 {
        return Err(Error::NonDispersive {
            zeta: dp.max_zeta(),
        });
    }

    let space = two_spin_space().tensor(&HilbertSpace::fock(n_max, "polariton")?);
    let sz1 = Operator::embed(&Operator::sigma_z(), 0, &space)?;
    let sz2 = Operator::embed(&Operator::sigma_z(), 1, &space)?;
    let sm1 = Operator::embed(&Operator::sigma_minus(), 0, &space)?;
    let sm2 = Operator::embed(&Operator::sigma_minus(), 1, &space)?;
    let a = Operator::embed(&Operator::annihilation(n_max)?, 2, &space)?;

    let mut h_full = sz1.scale(Complex64::new(0.5 * delta[0], 0.0));
    h_full = &h_full + &sz2.scale(Complex64::new(0.5 * delta[1], 0.0));
    let c1 = &(&a.dagger() * &sm1) + &(&a * &sm1.dagger());
    let c2 = &(&a.dagger() * &sm2) + &(&a * &sm2.dagger());
    h_full = &h_full + &c1.scale(Complex64::new(lambda_plus[0], 0.0));
    h_full = &h_full + &c2.scale(Complex64::new(lambda_plus[1], 0.0));

    let psi0 = Ket::ground("spin1")
        .kron(&Ket::excited("spin2"))
        .kron(&Ket::vacuum(n_max, "polariton")?);
    let rho0_full = DensityMatrix::from_pure(&psi0);

    let h_eff = effective_hamiltonian(&dp)?;
    let rho0_eff = DensityMatrix::from_pure(&Ket::ground("spin1").kron(&Ket::excited("spin2")));

    let max_rate = delta[0]
        .abs()
        .max(delta[1].abs())
        .max(lambda_plus[0])
        .max(lambda_plus[1]);
    let dt = dynamics::default_time_step(max_rate);

    let mut reduced_full = Vec::new();
    dynamics::evolve_sampled(&rho0_full, &h_full, &[], t_final, dt, |_, state| {
        reduced_full.push(state.partial_trace(&[0, 1])?);
        Ok(())
    })?;
    let mut eff_states = Vec::new();
    dynamics::evolve_sampled(&rho0_eff, &h_eff, &[], t_final, dt, |_, state| {
        eff_states.push(state.clone());
        Ok(())
    })?;

    let mut worst: f64 = 0.0;
    for (full, eff) in reduced_full.iter().zip(&eff_states) {
        worst = worst.max(state::trace_distance(full, eff)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn effective_coupling_matches_symmetric_closed_form() {
        let lam = 2.0 * PI * 3.5e6;
        let delta = 2.0 * PI * 35.0e6;
        let dp = DispersiveParams::new([lam, lam], [delta, delta], 0.0, 0.0).unwrap();
        assert_relative_eq!(dp.g_eff, 2.0 * PI * 350.0e3, max_relative = 1e-12);
        assert_relative_eq!(dp.g_eff, lam * lam / delta, max_relative = 1e-12);
        assert_abs_diff_eq!(dp.zeta[0], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn g_eff_symmetric_under_label_exchange() {
        let dp_a = DispersiveParams::new([1.0, 0.5], [10.0, 20.0], 0.0, 0.0).unwrap();
        let dp_b = DispersiveParams::new([0.5, 1.0], [20.0, 10.0], 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(dp_a.g_eff, dp_b.g_eff, epsilon = 1e-15);
    }

    #[test]
    fn decoupled_second_spin_leaves_free_hamiltonian() {
        let dp = DispersiveParams::new([1.0, 0.0], [10.0, 10.0], 0.0, 0.0).unwrap();
        assert_eq!(dp.g_eff, 0.0);
        let h = effective_hamiltonian(&dp).unwrap();
        // diagonal only
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(h.matrix()[(i, j)], Complex64::ZERO);
                }
            }
        }
        // spin 1 is Stark shifted, spin 2 is not
        assert!(dp.delta_eff[0] > 10.0);
        assert_eq!(dp.delta_eff[1], 10.0);
    }

    #[test]
    fn symmetric_hamiltonian_invariant_under_spin_swap() {
        let dp = DispersiveParams::new([1.0, 1.0], [12.0, 12.0], 0.0, 0.3).unwrap();
        let h = effective_hamiltonian(&dp).unwrap();
        // swapping the spins permutes the basis (ee, eg, ge, gg) -> (ee, ge, eg, gg)
        let perm = [0usize, 2, 1, 3];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h.matrix()[(i, j)], h.matrix()[(perm[i], perm[j])]);
            }
        }
    }

    #[test]
    fn non_dispersive_inputs_rejected() {
        assert!(matches!(
            DispersiveParams::new([1.0, 1.0], [0.5, 10.0], 0.0, 0.0),
            Err(Error::NonDispersive { .. })
        ));
        assert!(matches!(
            stark_shift(1.0, 0.5, 1.0),
            Err(Error::NonDispersive { .. })
        ));
    }

    #[test]
    fn stark_shift_values() {
        let lam = 2.0 * PI * 3.5e6;
        let delta = 2.0 * PI * 35.0e6;
        let s = stark_shift(lam, delta, 1.0).unwrap();
        assert_relative_eq!(s.shift, 2.0 * PI * 0.7e6, max_relative = 1e-12);
        assert_relative_eq!(s.zero_point, 2.0 * PI * 0.35e6, max_relative = 1e-12);
        let s0 = stark_shift(lam, delta, 0.0).unwrap();
        assert_eq!(s0.shift, 0.0);
        assert_relative_eq!(s0.zero_point, lam * 0.1, max_relative = 1e-12);
    }

    #[test]
    fn stark_shift_linear_in_occupation() {
        let (lam, delta) = (0.3, 3.0);
        let slope = 2.0 * lam * (lam / delta);
        for n in [0.0, 0.5, 1.0, 2.0, 7.5] {
            let s = stark_shift(lam, delta, n).unwrap();
            assert_relative_eq!(s.shift, slope * n, max_relative = 1e-14);
        }
    }

    #[test]
    fn stark_shift_against_exact_dressed_ladder() {
        // ζ = 0.1: the 2λ₊ζ approximation is good to O(ζ²) ≈ 2%
        let delta = 10.0;
        let lam = 1.0;
        let approx_shift = stark_shift(lam, delta, 1.0).unwrap().shift;
        let exact = stark_shift_exact_jc(lam, delta);
        assert_relative_eq!(approx_shift, exact, max_relative = 0.02);

        // and the closed-form ladder agrees with numeric diagonalization
        let omega = 0.7;
        let h = dynamics::jc_hamiltonian(delta + omega, omega, lam, 4).unwrap();
        let eigs = crate::eigen::hermitian_eigenvalues(h.matrix());
        let mut predicted = vec![-(delta + omega) / 2.0];
        for n in 1..=3 {
            let c = (n as f64 - 0.5) * omega;
            let r = (delta * delta / 4.0 + lam * lam * n as f64).sqrt();
            predicted.push(c + r);
            predicted.push(c - r);
        }
        predicted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (p, e) in predicted.iter().zip(eigs.iter()) {
            assert_abs_diff_eq!(p, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn iswap_matrix_action() {
        let u = ideal_iswap();
        let space = two_spin_space();
        // |eg⟩ → −i|ge⟩
        let eg = Ket::basis_state(&space, &[0, 1]).unwrap();
        let out = u.matrix() * eg.amplitudes();
        assert_eq!(out[2], Complex64::new(0.0, -1.0));
        assert_eq!(out[1], Complex64::ZERO);
        // unitarity
        let utu = u.matrix().adjoint() * u.matrix();
        assert!((utu - DMatrix::identity(4, 4))
            .iter()
            .all(|z| z.norm() == 0.0));
        // squared: diag(1, −1, −1, 1)
        let sq = u.matrix() * u.matrix();
        for (k, expect) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            assert_abs_diff_eq!(sq[(k, k)].re, expect, epsilon = 0.0);
        }
    }

    #[test]
    fn iswap_evolution_hits_the_gate() {
        let g = 2.0 * PI * 350.0e3;
        assert_eq!(
            iswap_evolution(g, 0.0).unwrap().matrix(),
            &DMatrix::identity(4, 4)
        );
        let u = iswap_evolution(g, PI / (2.0 * g)).unwrap();
        let diff = (u.matrix() - ideal_iswap().matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12, "gate defect {diff:e}");
        assert!(gate_fidelity(&u, &ideal_iswap()).unwrap() >= 1.0 - 1e-12);

        // half-way point: populations (½, ½)
        let u = iswap_evolution(g, PI / (4.0 * g)).unwrap();
        let space = two_spin_space();
        let ge = Ket::basis_state(&space, &[1, 0]).unwrap();
        let out = u.matrix() * ge.amplitudes();
        assert_abs_diff_eq!(out[2].norm_sqr(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1].norm_sqr(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn iswap_conserves_total_sigma_z() {
        let space = two_spin_space();
        let sz = &Operator::embed(&Operator::sigma_z(), 0, &space).unwrap()
            + &Operator::embed(&Operator::sigma_z(), 1, &space).unwrap();
        let u = iswap_evolution(1.0, 0.37).unwrap();
        let comm = &(&u * &sz) - &(&sz * &u);
        assert!(comm.max_abs() < 1e-14);
    }

    #[test]
    fn dispersive_check_trivial_at_zero_coupling() {
        let err = dispersive_error_check([0.0, 0.0], [10.0, 10.0], 3, 1.0).unwrap();
        assert!(err < 1e-9, "metric = {err:e}");
    }

    #[test]
    fn dispersive_check_small_at_zeta_tenth() {
        // one full swap period at ζ = 0.1
        let zeta = 0.1;
        let delta = 1.0 / zeta;
        let g_eff = zeta; // λ = 1
        let err = dispersive_error_check([1.0, 1.0], [delta, delta], 5, PI / g_eff).unwrap();
        assert!(err <= 0.15, "metric = {err}");
        assert!(err > 1e-4, "suspiciously perfect reduction: {err:e}");
    }

    #[test]
    fn dispersive_check_improves_toward_small_zeta() {
        let mut previous = f64::INFINITY;
        for zeta in [0.2, 0.1, 0.05] {
            let delta = 1.0 / zeta;
            let g_eff = zeta;
            // fixed g_eff · t_final = π
            let err = dispersive_error_check([1.0, 1.0], [delta, delta], 5, PI / g_eff).unwrap();
            assert!(err < previous, "metric did not shrink: {err} vs {previous}");
            previous = err;
        }
    }

    #[test]
    fn dispersive_check_rejects_marginal_zeta() {
        assert!(matches!(
            dispersive_error_check([1.0, 1.0], [2.0, 2.0], 4, 1.0),
            Err(Error::NonDispersive { .. })
        ));
    }
}
