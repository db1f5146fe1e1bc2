//! Classical steady state of the driven cavity electromechanical subsystem:
//! intracavity amplitude ⟨a⟩, mechanical displacement ⟨b⟩, the back-action
//! shifted detuning, and the linearized coupling G = g√N. Also the physical
//! helpers λ(d) and the Bose occupation.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::{self, PhysicalConstants};
use crate::error::{Error, Result};

/// Every physical parameter of the hybrid device, all rates angular [rad/s]
/// unless noted.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Cavity angular frequency.
    pub omega_a: f64,
    /// Mechanical angular frequency.
    pub omega_m: f64,
    /// Drive angular frequency.
    pub omega_d: f64,
    /// Single-photon electromechanical coupling.
    pub g: f64,
    /// Cavity amplitude decay.
    pub kappa: f64,
    /// Mechanical decay.
    pub gamma_m: f64,
    /// Cavity drive amplitude.
    pub drive_amp: f64,
    /// Spin drive amplitude (cancels the drive-induced spin flip).
    pub spin_drive_amp: f64,
    /// Spin transition angular frequency.
    pub omega_nv: f64,
    /// Bare spin-cavity coupling.
    pub lambda: f64,
    /// Spin transversal relaxation rate.
    pub gamma_perp: f64,
    /// Spin longitudinal rate (enters as a D[σz] generator).
    pub gamma_par: f64,
    /// Cavity inductance [H].
    pub inductance: f64,
    /// Spin-conductor distance [m].
    pub distance: f64,
    /// Temperature [K].
    pub temperature: f64,
    /// Cavity quality factor (dimensionless).
    pub quality: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("omega_a", self.omega_a),
            ("omega_d", self.omega_d),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma_m", self.gamma_m),
            ("drive_amp", self.drive_amp),
            ("spin_drive_amp", self.spin_drive_amp),
            ("omega_nv", self.omega_nv),
            ("lambda", self.lambda),
            ("gamma_perp", self.gamma_perp),
            ("gamma_par", self.gamma_par),
            ("temperature", self.temperature),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        let positive = [
            ("omega_m", self.omega_m),
            ("distance", self.distance),
            ("inductance", self.inductance),
            ("quality", self.quality),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for SystemParams {
    /// Coplanar-waveguide cavity near 2 GHz with an NV spin 50 nm from the
    /// center conductor, at dilution-refrigerator temperature.
    fn default() -> Self {
        let omega_a = 2.0 * PI * 2.0e9;
        Self {
            omega_a,
            omega_m: 1.0e7,
            omega_d: omega_a - 1.0e8,
            g: 2.0 * PI * 100.0,
            kappa: 1.0e6,
            gamma_m: 10.0,
            drive_amp: 0.0,
            spin_drive_amp: 0.0,
            omega_nv: 2.0 * PI * 2.87e9,
            lambda: 2.0 * PI * 7.0e3,
            gamma_perp: 1.0e3,
            gamma_par: 0.0,
            inductance: 2.0e-9,
            distance: 50.0e-9,
            temperature: 0.02,
            quality: 3.0e4,
        }
    }
}

/// Self-consistent driven steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFields {
    /// Intracavity amplitude ⟨a⟩ (dimensionless).
    pub a_mean: Complex64,
    /// Mechanical amplitude ⟨b⟩ (dimensionless).
    pub b_mean: Complex64,
    /// Intracavity photon number N = |⟨a⟩|².
    pub photon_number: f64,
    /// Back-action shifted detuning Δ_a [rad/s].
    pub detuning: f64,
    /// Linearized electromechanical coupling G = g√N [rad/s].
    pub coupling: f64,
    /// Largest normalized residual of the three defining relations.
    pub residual: f64,
}

const MAX_FIXED_POINT_ITERS: usize = 20_000;
const RELAXATION: f64 = 0.5;
const HOMOTOPY_STEPS: usize = 64;

/// Solve the coupled steady-state relations
///   ⟨a⟩ = −Ω_d / (Δ_a − iκ),
///   ⟨b⟩ = g|⟨a⟩|² / (ω_m − iγ_m),
///   Δ_a = ω_a − ω_d − g(⟨b⟩ + ⟨b⟩*),
/// returning the root continuously connected to the g = 0 solution.
pub fn solve_mean_fields(p: &SystemParams, tol: f64) -> Result<MeanFields> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    p.validate()?;

    let delta_0 = p.omega_a - p.omega_d;
    let power = p.drive_amp * p.drive_amp;
    // Δ_a = Δ_0 − c·N with c collecting the static mechanical response.
    let c = 2.0 * p.g * p.g * p.omega_m / (p.omega_m * p.omega_m + p.gamma_m * p.gamma_m);

    let detuning = if power == 0.0 || c == 0.0 {
        delta_0
    } else {
        match fixed_point_detuning(delta_0, c, power, p.kappa, tol) {
            Some(d) => d,
            None => homotopy_detuning(delta_0, c, power, p.kappa, tol)?,
        }
    };

    Ok(assemble(p, delta_0, detuning))
}

fn assemble(p: &SystemParams, delta_0: f64, detuning: f64) -> MeanFields {
    let denom = Complex64::new(detuning, -p.kappa);
    let a_mean = if p.drive_amp == 0.0 {
        Complex64::ZERO
    } else {
        -Complex64::new(p.drive_amp, 0.0) / denom
    };
    let photon_number = a_mean.norm_sqr();
    let b_mean = if photon_number == 0.0 || p.g == 0.0 {
        Complex64::ZERO
    } else {
        Complex64::new(p.g * photon_number, 0.0) / Complex64::new(p.omega_m, -p.gamma_m)
    };
    let coupling = p.g * photon_number.sqrt();

    // ⟨a⟩ and ⟨b⟩ are constructed from Δ_a, so only the detuning relation can
    // carry a residual; report all three anyway as the closure contract.
    let r_a = (a_mean * denom + Complex64::new(p.drive_amp, 0.0)).norm()
        / p.drive_amp.max(f64::MIN_POSITIVE);
    let r_b = (b_mean * Complex64::new(p.omega_m, -p.gamma_m)
        - Complex64::new(p.g * photon_number, 0.0))
    .norm()
        / (p.g * photon_number).max(f64::MIN_POSITIVE);
    let scale = delta_0.abs().max(p.omega_m).max(p.kappa).max(1.0);
    let r_d = (detuning - (delta_0 - 2.0 * p.g * b_mean.re)).abs() / scale;

    MeanFields {
        a_mean,
        b_mean,
        photon_number,
        detuning,
        coupling,
        residual: r_a.max(r_b).max(r_d),
    }
}

/// Damped iteration Δ ← Δ + α(F(Δ) − Δ) with F(Δ) = Δ₀ − cP/(Δ² + κ²).
fn fixed_point_detuning(delta_0: f64, c: f64, power: f64, kappa: f64, tol: f64) -> Option<f64> {
    let scale = delta_0.abs().max(kappa).max(1.0);
    let mut delta = delta_0;
    for _ in 0..MAX_FIXED_POINT_ITERS {
        let f = delta_0 - c * power / (delta * delta + kappa * kappa);
        let next = delta + RELAXATION * (f - delta);
        if (next - delta).abs() <= 0.25 * tol * scale {
            // converged: confirm the un-damped relation is closed
            let closure = (next - (delta_0 - c * power / (next * next + kappa * kappa))).abs();
            if closure <= tol * scale {
                return Some(next);
            }
        }
        if !next.is_finite() {
            return None;
        }
        delta = next;
    }
    None
}

/// Track the g = 0 branch of the photon-number cubic while the coupling is
/// ramped up, then polish with Newton on the detuning relation.
fn homotopy_detuning(delta_0: f64, c_target: f64, power: f64, kappa: f64, tol: f64) -> Result<f64> {
    let mut n = power / (delta_0 * delta_0 + kappa * kappa); // g = 0 solution
    for step in 1..=HOMOTOPY_STEPS {
        let c = c_target * step as f64 / HOMOTOPY_STEPS as f64;
        // roots of c²N³ − 2cΔ₀N² + (Δ₀² + κ²)N − P = 0
        let roots = cubic_roots(
            c * c,
            -2.0 * c * delta_0,
            delta_0 * delta_0 + kappa * kappa,
            -power,
        );
        n = roots
            .into_iter()
            .filter(|r| *r >= 0.0)
            .min_by(|a, b| {
                (a - n)
                    .abs()
                    .partial_cmp(&(b - n).abs())
                    .expect("finite roots")
            })
            .ok_or_else(|| {
                Error::NonConvergence(format!(
                    "photon-number cubic has no nonnegative root at homotopy step {step} \
                     (bistable or unstable drive regime)"
                ))
            })?;
    }
    let mut delta = delta_0 - c_target * n;
    // Newton polish on r(Δ) = Δ − Δ₀ + cP/(Δ² + κ²)
    let scale = delta_0.abs().max(kappa).max(1.0);
    for _ in 0..200 {
        let denom = delta * delta + kappa * kappa;
        let r = delta - delta_0 + c_target * power / denom;
        let dr = 1.0 - 2.0 * c_target * power * delta / (denom * denom);
        if dr.abs() < 1e-300 {
            break;
        }
        let next = delta - r / dr;
        if (next - delta).abs() <= 0.25 * tol * scale {
            delta = next;
            break;
        }
        delta = next;
    }
    let closure = (delta - (delta_0 - c_target * power / (delta * delta + kappa * kappa))).abs();
    if closure > tol * scale {
        return Err(Error::NonConvergence(format!(
            "homotopy landed with residual {closure:.3e} > tol*scale \
             (bistable or unstable drive regime)"
        )));
    }
    Ok(delta)
}

/// Real roots of ax³ + bx² + cx + d with a ≥ 0, via Cardano (trigonometric
/// branch for three real roots).
fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            if c == 0.0 {
                return vec![];
            }
            return vec![-d / c];
        }
        let disc = c * c - 4.0 * b * d;
        if disc < 0.0 {
            return vec![];
        }
        let s = disc.sqrt();
        return vec![(-c + s) / (2.0 * b), (-c - s) / (2.0 * b)];
    }
    // depressed cubic t³ + pt + q with x = t − b/(3a)
    let shift = b / (3.0 * a);
    let p = (3.0 * a * c - b * b) / (3.0 * a * a);
    let q = (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a * a * a);
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let mut roots = if disc > 0.0 {
        let s = disc.sqrt();
        let u = cbrt(-q / 2.0 + s);
        let v = cbrt(-q / 2.0 - s);
        vec![u + v - shift]
    } else if disc == 0.0 {
        let u = cbrt(-q / 2.0);
        vec![2.0 * u - shift, -u - shift]
    } else {
        let r = (-p * p * p / 27.0).sqrt();
        let phi = (-q / (2.0 * r)).clamp(-1.0, 1.0).acos();
        let m = 2.0 * (-p / 3.0).sqrt();
        (0..3)
            .map(|k| m * ((phi + 2.0 * PI * k as f64) / 3.0).cos() - shift)
            .collect()
    };
    // one Newton step per root to tighten Cardano roundoff
    for x in roots.iter_mut() {
        let f = ((a * *x + b) * *x + c) * *x + d;
        let df = (3.0 * a * *x + 2.0 * b) * *x + c;
        if df != 0.0 {
            *x -= f / df;
        }
    }
    roots
}

fn cbrt(x: f64) -> f64 {
    x.signum() * x.abs().powf(1.0 / 3.0)
}

/// Spin-cavity coupling from device geometry:
/// λ = 2 g_e μ_B B₀,rms(d) / ħ with B₀,rms = μ₀ I_rms / 2πd and
/// I_rms = √(ħω_a / 2L_a). Returns rad/s.
pub fn coupling_estimate(
    distance: f64,
    omega_a: f64,
    inductance: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    for (name, v) in [
        ("distance", distance),
        ("omega_a", omega_a),
        ("inductance", inductance),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "{name} must be finite and > 0, got {v}"
            )));
        }
    }
    let i_rms = (constants.hbar * omega_a / (2.0 * inductance)).sqrt();
    let b_rms = constants.mu_0 * i_rms / (2.0 * PI * distance);
    Ok(2.0 * constants.g_e * constants.mu_b * b_rms / constants.hbar)
}

/// Bose-Einstein occupation n(ω, T) = [exp(ħω/k_B T) − 1]⁻¹; T = 0 gives 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "omega must be finite and > 0, got {omega}"
        )));
    }
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::InvalidInput(format!(
            "temperature must be finite and >= 0, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = constants::HBAR * omega / (constants::K_B * temperature);
    Ok(1.0 / x.exp_m1())
}
