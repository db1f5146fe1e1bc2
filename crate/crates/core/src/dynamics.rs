//! Lindblad master-equation integration (fixed-step RK4) and the time-domain
//! experiments: vacuum Rabi oscillations of the spin–polariton system and the
//! thermally dissipative two-spin gate study.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dispersive::{self, DispersiveParams};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::HilbertSpace;
use crate::state::{DensityMatrix, Ket};

/// One dissipation channel: D[jump] at `rate`, thermally paired when
/// `n_th > 0` into rate·(n_th + 1)·D[jump] + rate·n_th·D[jump†].
#[derive(Debug, Clone)]
pub struct DissipatorSpec {
    pub jump: Operator,
    pub rate: f64,
    pub n_th: f64,
}

impl DissipatorSpec {
    pub fn new(jump: Operator, rate: f64, n_th: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidInput(format!(
                "dissipator rate must be finite and >= 0, got {rate}"
            )));
        }
        if !n_th.is_finite() || n_th < 0.0 {
            return Err(Error::InvalidInput(format!(
                "thermal occupation must be finite and >= 0, got {n_th}"
            )));
        }
        Ok(Self { jump, rate, n_th })
    }

    /// Zero-temperature channel.
    pub fn cold(jump: Operator, rate: f64) -> Result<Self> {
        Self::new(jump, rate, 0.0)
    }

    /// Expand into plain (jump, rate) channels.
    pub fn channels(&self) -> Vec<(Operator, f64)> {
        let mut out = Vec::with_capacity(2);
        if self.rate > 0.0 {
            out.push((self.jump.clone(), self.rate * (self.n_th + 1.0)));
            if self.n_th > 0.0 {
                out.push((self.jump.dagger(), self.rate * self.n_th));
            }
        }
        out
    }
}

/// Time grid plus named observable series from one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub observables: Vec<(String, Vec<f64>)>,
    pub final_state: DensityMatrix,
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

/// dρ/dt = −i[H, ρ] + Σ rate·(oρo† − ½{o†o, ρ}), dense reference evaluation.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    h: &Operator,
    dissipators: &[DissipatorSpec],
) -> Result<Operator> {
    check_spaces(rho.space(), h, dissipators)?;
    let m = rho.matrix();
    let hm = h.matrix();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = (hm * m - m * hm) * minus_i;
    for d in dissipators {
        for (jump, rate) in d.channels() {
            let o = jump.matrix();
            let od = o.adjoint();
            let oo = &od * o;
            let r = Complex64::new(rate, 0.0);
            let half_r = Complex64::new(0.5 * rate, 0.0);
            out += (o * m * &od) * r - (&oo * m + m * &oo) * half_r;
        }
    }
    Ok(Operator::from_matrix_unchecked(rho.space().clone(), out))
}

/// Convenience default for the fixed-step integrator: resolve the fastest
/// angular frequency with 50 steps per cycle-equivalent.
pub fn default_time_step(max_angular_frequency: f64) -> f64 {
    1.0 / (50.0 * max_angular_frequency)
}

/// Integrate with fixed-step RK4, sampling the named observables on every
/// grid point. `dt` is an upper bound; the actual step is t_final/n so the
/// grid lands on t_final exactly.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &Operator,
    dissipators: &[DissipatorSpec],
    t_final: f64,
    dt: f64,
    observables: &[(String, Operator)],
) -> Result<Trajectory> {
    for (_, op) in observables {
        if !op.space().compatible(rho0.space()) {
            return Err(Error::SpaceMismatch(format!(
                "observable on {} for a state on {}",
                op.space(),
                rho0.space()
            )));
        }
    }
    let mut series: Vec<(String, Vec<f64>)> = observables
        .iter()
        .map(|(name, _)| (name.clone(), Vec::new()))
        .collect();
    let final_state = evolve_sampled(rho0, h, dissipators, t_final, dt, |_t, state| {
        for ((_, values), (_, op)) in series.iter_mut().zip(observables) {
            values.push(state.expectation(op)?.re);
        }
        Ok(())
    })?;
    let n_steps = step_count(t_final, dt)?;
    let dt_actual = if n_steps == 0 {
        0.0
    } else {
        t_final / n_steps as f64
    };
    let times = (0..=n_steps).map(|k| k as f64 * dt_actual).collect();
    Ok(Trajectory {
        times,
        observables: series,
        final_state,
    })
}

/// Integrator core with a caller-supplied sampler invoked at t = 0 and after
/// every step. Trace and Hermiticity are enforced each step; trace drift
/// beyond 1e-6 aborts.
pub fn evolve_sampled(
    rho0: &DensityMatrix,
    h: &Operator,
    dissipators: &[DissipatorSpec],
    t_final: f64,
    dt: f64,
    mut sampler: impl FnMut(f64, &DensityMatrix) -> Result<()>,
) -> Result<DensityMatrix> {
    check_spaces(rho0.space(), h, dissipators)?;
    let n_steps = step_count(t_final, dt)?;
    let space = rho0.space().clone();
    let dim = space.total_dim();
    let dt_actual = if n_steps == 0 {
        0.0
    } else {
        t_final / n_steps as f64
    };

    let mut channels = Vec::new();
    for d in dissipators {
        channels.extend(d.channels());
    }
    let rhs = CompiledRhs::build(h, &channels);

    let mut rho = rho0.matrix().clone();
    let mut k = DMatrix::<Complex64>::zeros(dim, dim);
    let mut stage = DMatrix::<Complex64>::zeros(dim, dim);
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    let mut tmp = DMatrix::<Complex64>::zeros(dim, dim);

    sampler(
        0.0,
        &DensityMatrix::from_matrix_unchecked(space.clone(), rho.clone()),
    )?;

    for step in 1..=n_steps {
        // classic RK4 with the stage buffer reused between evaluations
        rhs.apply(rho.as_slice(), k.as_mut_slice(), tmp.as_mut_slice());
        axpby(&rho, dt_actual / 6.0, &k, &mut acc); // acc = rho + dt/6 k1
        axpby(&rho, dt_actual / 2.0, &k, &mut stage);

        rhs.apply(stage.as_slice(), k.as_mut_slice(), tmp.as_mut_slice());
        axpy(dt_actual / 3.0, &k, &mut acc);
        axpby(&rho, dt_actual / 2.0, &k, &mut stage);

        rhs.apply(stage.as_slice(), k.as_mut_slice(), tmp.as_mut_slice());
        axpy(dt_actual / 3.0, &k, &mut acc);
        axpby(&rho, dt_actual, &k, &mut stage);

        rhs.apply(stage.as_slice(), k.as_mut_slice(), tmp.as_mut_slice());
        axpy(dt_actual / 6.0, &k, &mut acc);

        std::mem::swap(&mut rho, &mut acc);
        hermitize(&mut rho);

        let drift = (rho.trace().re - 1.0).abs();
        if drift > 1.0e-6 {
            return Err(Error::TraceDrift {
                drift,
                step,
                dt: dt_actual,
            });
        }
        sampler(
            step as f64 * dt_actual,
            &DensityMatrix::from_matrix_unchecked(space.clone(), rho.clone()),
        )?;
    }
    Ok(DensityMatrix::from_matrix_unchecked(space, rho))
}

fn step_count(t_final: f64, dt: f64) -> Result<usize> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "time step must be finite and > 0, got {dt}"
        )));
    }
    if !t_final.is_finite() || t_final < 0.0 {
        return Err(Error::InvalidInput(format!(
            "final time must be finite and >= 0, got {t_final}"
        )));
    }
    if t_final == 0.0 {
        return Ok(0);
    }
    Ok(((t_final / dt).ceil() as usize).max(1))
}

fn check_spaces(space: &HilbertSpace, h: &Operator, dissipators: &[DissipatorSpec]) -> Result<()> {
    if !h.space().compatible(space) {
        return Err(Error::SpaceMismatch(format!(
            "Hamiltonian on {} for a state on {}",
            h.space(),
            space
        )));
    }
    for d in dissipators {
        if !d.jump.space().compatible(space) {
            return Err(Error::SpaceMismatch(format!(
                "jump operator on {} for a state on {}",
                d.jump.space(),
                space
            )));
        }
    }
    Ok(())
}

/// out = base + s·k
fn axpby(base: &DMatrix<Complex64>, s: f64, k: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
    let (b, kk, o) = (base.as_slice(), k.as_slice(), out.as_mut_slice());
    for i in 0..b.len() {
        o[i] = b[i] + s * kk[i];
    }
}

/// out += s·k
fn axpy(s: f64, k: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
    let (kk, o) = (k.as_slice(), out.as_mut_slice());
    for i in 0..kk.len() {
        o[i] += s * kk[i];
    }
}

/// ρ ← (ρ + ρ†)/2 in place.
fn hermitize(rho: &mut DMatrix<Complex64>) {
    let n = rho.nrows();
    for j in 0..n {
        for i in 0..j {
            let avg = 0.5 * (rho[(i, j)] + rho[(j, i)].conj());
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
        let d = rho[(j, j)];
        rho[(j, j)] = Complex64::new(d.re, 0.0);
    }
}

/// (row, col, value) triples of the nonzero entries of an operator.
type SparseEntries = Vec<(u32, u32, Complex64)>;

/// Exact sparse action of the Lindblad generator, compiled once per run from
/// the dense operators. Storage stays dense everywhere; this only walks the
/// nonzero patterns, which for embedded ladder and spin operators turns each
/// O(dim³) product into O(dim²).
struct CompiledRhs {
    dim: usize,
    /// Real diagonal of H.
    h_diag: Vec<f64>,
    /// ½ Σ rate·diag(o†o), accumulated over all channels.
    decay_diag: Vec<f64>,
    /// Off-diagonal entries of H.
    h_offdiag: SparseEntries,
    /// (rate, entries of o) for the sandwich terms o ρ o†.
    sandwiches: Vec<(f64, SparseEntries)>,
    /// (rate, off-diagonal entries of o†o) for channels whose o†o is not
    /// diagonal.
    anticomm_offdiag: Vec<(f64, SparseEntries)>,
}

impl CompiledRhs {
    #[allow(clippy::needless_range_loop)]
    fn build(h: &Operator, channels: &[(Operator, f64)]) -> Self {
        let dim = h.dim();
        let mut h_diag = vec![0.0; dim];
        let mut h_offdiag = Vec::new();
        for j in 0..dim {
            for i in 0..dim {
                let v = h.matrix()[(i, j)];
                if v == Complex64::ZERO {
                    continue;
                }
                if i == j {
                    h_diag[i] = v.re;
                } else {
                    h_offdiag.push((i as u32, j as u32, v));
                }
            }
        }

        let mut decay_diag = vec![0.0; dim];
        let mut sandwiches = Vec::new();
        let mut anticomm_offdiag = Vec::new();
        for (jump, rate) in channels {
            let mut entries = Vec::new();
            let mut by_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
            for j in 0..dim {
                for i in 0..dim {
                    let v = jump.matrix()[(i, j)];
                    if v != Complex64::ZERO {
                        entries.push((i as u32, j as u32, v));
                        by_row[i].push((j, v));
                    }
                }
            }
            // o†o accumulated row-wise; entries are few for ladder/spin jumps
            let mut q: std::collections::BTreeMap<(usize, usize), Complex64> =
                std::collections::BTreeMap::new();
            for row in &by_row {
                for &(c1, v1) in row {
                    for &(c2, v2) in row {
                        *q.entry((c1, c2)).or_insert(Complex64::ZERO) += v1.conj() * v2;
                    }
                }
            }
            let mut q_off = Vec::new();
            for (&(i, j), &v) in &q {
                if i == j {
                    decay_diag[i] += 0.5 * rate * v.re;
                } else {
                    q_off.push((i as u32, j as u32, v));
                }
            }
            if !q_off.is_empty() {
                anticomm_offdiag.push((*rate, q_off));
            }
            sandwiches.push((*rate, entries));
        }

        Self {
            dim,
            h_diag,
            decay_diag,
            h_offdiag,
            sandwiches,
            anticomm_offdiag,
        }
    }

    /// out ← L(rho); `tmp` is scratch of the same size. Column-major slices.
    fn apply(&self, rho: &[Complex64], out: &mut [Complex64], tmp: &mut [Complex64]) {
        let n = self.dim;
        // drift: −i(h_i − h_j)ρ_ij − (dec_i + dec_j)ρ_ij
        for j in 0..n {
            let hj = self.h_diag[j];
            let dj = self.decay_diag[j];
            let col = j * n;
            for i in 0..n {
                let w = Complex64::new(-(self.decay_diag[i] + dj), -(self.h_diag[i] - hj));
                out[col + i] = w * rho[col + i];
            }
        }
        // −i(H_od ρ − ρ H_od)
        if !self.h_offdiag.is_empty() {
            let minus_i = Complex64::new(0.0, -1.0);
            let plus_i = Complex64::new(0.0, 1.0);
            for j in 0..n {
                let col = j * n;
                for &(r, c, v) in &self.h_offdiag {
                    out[col + r as usize] += minus_i * v * rho[col + c as usize];
                }
            }
            for &(r, c, v) in &self.h_offdiag {
                // (ρ H_od)[:, c] += v·ρ[:, r]
                let src = r as usize * n;
                let dst = c as usize * n;
                let s = plus_i * v;
                for i in 0..n {
                    out[dst + i] += s * rho[src + i];
                }
            }
        }
        // rate · o ρ o†
        for (rate, entries) in &self.sandwiches {
            tmp.fill(Complex64::ZERO);
            for j in 0..n {
                let col = j * n;
                for &(r, c, v) in entries {
                    tmp[col + r as usize] += v * rho[col + c as usize];
                }
            }
            for &(r, c, v) in entries {
                // (X o†)[:, r] += conj(v)·X[:, c]
                let src = c as usize * n;
                let dst = r as usize * n;
                let s = Complex64::new(*rate, 0.0) * v.conj();
                for i in 0..n {
                    out[dst + i] += s * tmp[src + i];
                }
            }
        }
        // −rate/2 (q ρ + ρ q) for non-diagonal o†o remainders
        for (rate, q_off) in &self.anticomm_offdiag {
            let s = Complex64::new(-0.5 * rate, 0.0);
            for j in 0..n {
                let col = j * n;
                for &(r, c, v) in q_off {
                    out[col + r as usize] += s * v * rho[col + c as usize];
                }
            }
            for &(r, c, v) in q_off {
                let src = r as usize * n;
                let dst = c as usize * n;
                let sv = s * v;
                for i in 0..n {
                    out[dst + i] += sv * rho[src + i];
                }
            }
        }
    }
}

/// Jaynes-Cummings Hamiltonian ½Δ_NV σz + ω₋ a†a + λ₊(a†σ₋ + aσ₊) on
/// 2 ⊗ Fock(n_max).
pub fn jc_hamiltonian(
    delta_nv: f64,
    omega_minus: f64,
    lambda_plus: f64,
    n_max: usize,
) -> Result<Operator> {
    let space = HilbertSpace::qubit("spin").tensor(&HilbertSpace::fock(n_max, "polariton")?);
    let sz = Operator::embed(&Operator::sigma_z(), 0, &space)?;
    let sm = Operator::embed(&Operator::sigma_minus(), 0, &space)?;
    let a = Operator::embed(&Operator::annihilation(n_max)?, 1, &space)?;
    let mut h = sz.scale(Complex64::new(0.5 * delta_nv, 0.0));
    h = &h + &(&a.dagger() * &a).scale(Complex64::new(omega_minus, 0.0));
    let coupling = &(&a.dagger() * &sm) + &(&a * &sm.dagger());
    h = &h + &coupling.scale(Complex64::new(lambda_plus, 0.0));
    Ok(h)
}

/// Inputs for the spin–polariton Rabi experiment; the spin is driven into
/// resonance with the soft mode (Δ_NV = ω₋).
#[derive(Debug, Clone, PartialEq)]
pub struct RabiParams {
    pub lambda_plus: f64,
    pub omega_minus: f64,
    pub kappa: f64,
    pub gamma_perp: f64,
}

/// Spin initially excited, polariton in the ground state; returns series
/// `p_e` (spin excited population) and `n_polariton`. The longitudinal spin
/// channel is omitted.
pub fn rabi_experiment(p: &RabiParams, n_max: usize, t_final: f64, dt: f64) -> Result<Trajectory> {
    let h = jc_hamiltonian(p.omega_minus, p.omega_minus, p.lambda_plus, n_max)?;
    let space = h.space().clone();
    let rho0 =
        DensityMatrix::from_pure(&Ket::excited("spin").kron(&Ket::vacuum(n_max, "polariton")?));

    let a = Operator::embed(&Operator::annihilation(n_max)?, 1, &space)?;
    let sm = Operator::embed(&Operator::sigma_minus(), 0, &space)?;
    let dissipators = vec![
        DissipatorSpec::cold(a.clone(), p.kappa)?,
        DissipatorSpec::cold(sm, p.gamma_perp)?,
    ];
    let observables = vec![
        (
            "p_e".to_string(),
            Operator::embed(&Operator::excited_projector(), 0, &space)?,
        ),
        ("n_polariton".to_string(), &a.dagger() * &a),
    ];
    evolve(&rho0, &h, &dissipators, t_final, dt, &observables)
}

/// Inputs for the dissipative two-spin gate study: both spins share the
/// coupling λ₊ and the detuning δ from the soft mode; the bosonic baths act
/// on the bare cavity and mechanical modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GateStudyParams {
    pub lambda_plus: f64,
    /// Common spin detuning δ = Δ_NV − ω₋.
    pub delta: f64,
    /// Soft-mode frequency (sets Δ_NV = δ + ω₋).
    pub omega_minus: f64,
    /// c-number polariton occupation entering the Stark-shifted frequencies.
    pub n_pl: f64,
    pub kappa: f64,
    pub n_th_cavity: f64,
    pub gamma_m: f64,
    pub n_th_mech: f64,
    pub gamma_perp: f64,
}

impl GateStudyParams {
    pub fn g_eff(&self) -> f64 {
        self.lambda_plus * self.lambda_plus / self.delta.abs()
    }

    /// Gate time π/(2 g_eff).
    pub fn gate_time(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.g_eff()
    }

    fn dispersive(&self) -> Result<DispersiveParams> {
        let delta_nv = self.delta + self.omega_minus;
        DispersiveParams::new(
            [self.lambda_plus, self.lambda_plus],
            [delta_nv, delta_nv],
            self.omega_minus,
            self.n_pl,
        )
    }
}

/// Evolve spin₁ ⊗ spin₂ ⊗ cavity ⊗ mechanics under the effective two-spin
/// Hamiltonian with thermal boson baths and transversal spin decay, starting
/// from |g⟩⊗|e⟩⊗thermal⊗thermal. Series: `fidelity` against the ideal
/// flip-flop trajectory, plus `n_cavity` and `n_mech`.
pub fn full_dissipative_experiment(
    p: &GateStudyParams,
    truncations: (usize, usize),
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    let (n_a, n_b) = truncations;
    check_truncation(n_a, p.n_th_cavity)?;
    check_truncation(n_b, p.n_th_mech)?;

    let dp = p.dispersive()?;
    let h_spins = dispersive::effective_hamiltonian(&dp)?;
    let g_eff = dp.g_eff;

    let rho_spins = DensityMatrix::from_pure(&Ket::ground("spin1").kron(&Ket::excited("spin2")));
    let rho0 = rho_spins
        .product(&DensityMatrix::thermal(n_a, p.n_th_cavity, "cavity")?)
        .product(&DensityMatrix::thermal(n_b, p.n_th_mech, "mech")?);
    let space = rho0.space().clone();

    let boson_ids = Operator::identity(HilbertSpace::fock(n_a, "cavity")?)
        .kron(&Operator::identity(HilbertSpace::fock(n_b, "mech")?));
    let h = h_spins.kron(&boson_ids);

    let da = Operator::embed(&Operator::annihilation(n_a)?, 2, &space)?;
    let db = Operator::embed(&Operator::annihilation(n_b)?, 3, &space)?;
    let sm1 = Operator::embed(&Operator::sigma_minus(), 0, &space)?;
    let sm2 = Operator::embed(&Operator::sigma_minus(), 1, &space)?;
    let dissipators = vec![
        DissipatorSpec::new(da.clone(), p.kappa, p.n_th_cavity)?,
        DissipatorSpec::new(db.clone(), p.gamma_m, p.n_th_mech)?,
        DissipatorSpec::cold(sm1, p.gamma_perp)?,
        DissipatorSpec::cold(sm2, p.gamma_perp)?,
    ];

    let n_cav = &da.dagger() * &da;
    let n_mech = &db.dagger() * &db;
    let spin_space = HilbertSpace::qubit("spin1").tensor(&HilbertSpace::qubit("spin2"));

    let mut times = Vec::new();
    let mut fid = Vec::new();
    let mut ncav = Vec::new();
    let mut nmech = Vec::new();
    let final_state = evolve_sampled(&rho0, &h, &dissipators, t_final, dt, |t, state| {
        let reduced = state.partial_trace(&[0, 1])?;
        let ideal = ideal_flip_flop_state(&spin_space, g_eff, t)?;
        fid.push(reduced.fidelity_pure(&ideal)?);
        ncav.push(state.expectation(&n_cav)?.re);
        nmech.push(state.expectation(&n_mech)?.re);
        times.push(t);
        Ok(())
    })?;

    Ok(Trajectory {
        times,
        observables: vec![
            ("fidelity".to_string(), fid),
            ("n_cavity".to_string(), ncav),
            ("n_mech".to_string(), nmech),
        ],
        final_state,
    })
}

/// cos(g t)|ge⟩ − i sin(g t)|eg⟩, the lossless flip-flop trajectory from
/// |g⟩⊗|e⟩.
pub fn ideal_flip_flop_state(spin_space: &HilbertSpace, g_eff: f64, t: f64) -> Result<Ket> {
    let mut v = nalgebra::DVector::zeros(4);
    let (s, c) = (g_eff * t).sin_cos();
    // basis order (|ee⟩, |eg⟩, |ge⟩, |gg⟩)
    v[2] = Complex64::new(c, 0.0);
    v[1] = Complex64::new(0.0, -s);
    Ket::new(spin_space.clone(), v)
}

fn check_truncation(n_max: usize, n_th: f64) -> Result<()> {
    if (n_max as f64) < 10.0 * n_th {
        return Err(Error::InvalidInput(format!(
            "truncation n_max = {n_max} is below 10·n_th = {}",
            10.0 * n_th
        )));
    }
    // occupancy of the last retained Fock level of the truncated thermal state
    if n_th > 0.0 {
        let ratio = n_th / (1.0 + n_th);
        let norm = (1.0 - ratio.powi(n_max as i32)) / (1.0 - ratio);
        let edge = ratio.powi(n_max as i32 - 1) / norm;
        if edge > 1.0e-6 {
            return Err(Error::TruncationTooSmall {
                occupancy: edge,
                n_max,
            });
        }
    }
    Ok(())
}
