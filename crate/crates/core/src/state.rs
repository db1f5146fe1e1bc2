//! Pure states and density matrices, with the trace/fidelity toolbox used by
//! the experiment modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::space::HilbertSpace;

/// Relative tolerance on ‖ρ − ρ†‖ accepted at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance on |Tr ρ − 1| accepted at construction.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of ρ may undershoot zero by this much (times Tr ρ).
pub const POSITIVITY_TOL: f64 = 1e-8;

/// A normalized pure state on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    space: HilbertSpace,
    amplitudes: DVector<Complex64>,
}

impl Ket {
    /// Build from amplitudes; the norm must be 1 within 1e-10.
    pub fn new(space: HilbertSpace, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "state vector norm is {norm}, expected 1"
            )));
        }
        Ok(Self { space, amplitudes })
    }

    /// Product basis state |i₀ i₁ …⟩.
    pub fn basis_state(space: &HilbertSpace, indices: &[usize]) -> Result<Self> {
        let flat = space.flat_index(indices)?;
        let mut v = DVector::zeros(space.total_dim());
        v[flat] = Complex64::new(1.0, 0.0);
        Ok(Self {
            space: space.clone(),
            amplitudes: v,
        })
    }

    /// Qubit excited state |e⟩.
    pub fn excited(label: &str) -> Self {
        let space = HilbertSpace::qubit(label);
        Self::basis_state(&space, &[0]).expect("index in range")
    }

    /// Qubit ground state |g⟩.
    pub fn ground(label: &str) -> Self {
        let space = HilbertSpace::qubit(label);
        Self::basis_state(&space, &[1]).expect("index in range")
    }

    /// Fock vacuum |0⟩ on an n_max-truncated mode.
    pub fn vacuum(n_max: usize, label: &str) -> Result<Self> {
        let space = HilbertSpace::fock(n_max, label)?;
        Self::basis_state(&space, &[0])
    }

    pub fn kron(&self, other: &Ket) -> Ket {
        Ket {
            space: self.space.tensor(&other.space),
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite within the
/// tolerances above.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validating constructor. The positivity check solves a Hermitian
    /// eigenproblem, O(dim³).
    pub fn new(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dm = Self::new_unchecked_shape(space, matrix)?;
        dm.validate()?;
        Ok(dm)
    }

    fn new_unchecked_shape(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix is {}x{} on a space of dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                space.total_dim()
            )));
        }
        Ok(Self { space, matrix })
    }

    /// Check Hermiticity, trace, and positivity; see the module tolerances.
    pub fn validate(&self) -> Result<()> {
        let scale = self.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let herm = {
            let n = self.matrix.nrows();
            let mut worst: f64 = 0.0;
            for j in 0..n {
                for i in 0..=j {
                    worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
                }
            }
            worst
        };
        if herm > HERMITICITY_TOL * scale {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian: max |rho - rho^dag| = {herm:.3e}"
            )));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}, expected 1")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -POSITIVITY_TOL * tr.re.abs() {
            return Err(Error::InvalidDensity(format!(
                "not positive semidefinite: min eigenvalue = {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// ρ = |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &Ket) -> Self {
        let v = psi.amplitudes();
        let matrix = v * v.adjoint();
        Self {
            space: psi.space().clone(),
            matrix,
        }
    }

    /// Thermal (Bose) state with mean occupation `n_th`, truncated at `n_max`
    /// and renormalized so the trace is exactly 1.
    pub fn thermal(n_max: usize, n_th: f64, label: &str) -> Result<Self> {
        if n_th < 0.0 {
            return Err(Error::InvalidInput(format!(
                "thermal occupation must be >= 0, got {n_th}"
            )));
        }
        let space = HilbertSpace::fock(n_max, label)?;
        let mut weights = vec![0.0; n_max];
        if n_th == 0.0 {
            weights[0] = 1.0;
        } else {
            let ratio = n_th / (1.0 + n_th);
            let mut w = 1.0;
            for entry in weights.iter_mut() {
                *entry = w;
                w *= ratio;
            }
        }
        let total: f64 = weights.iter().sum();
        let mut m = DMatrix::zeros(n_max, n_max);
        for (n, w) in weights.iter().enumerate() {
            m[(n, n)] = Complex64::new(w / total, 0.0);
        }
        Ok(Self { space, matrix: m })
    }

    /// Product state ρ₁ ⊗ ρ₂ (positivity is inherited, no eigensolve).
    pub fn product(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            space: self.space.tensor(&other.space),
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Tr(ρ A). Real within 1e-10 when A is Hermitian.
    pub fn expectation(&self, op: &Operator) -> Result<Complex64> {
        if !self.space.compatible(op.space()) {
            return Err(Error::SpaceMismatch(format!(
                "expectation of {} on a state over {}",
                op.space(),
                self.space
            )));
        }
        let n = self.matrix.nrows();
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * op.matrix()[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Trace out every slot not in `keep` (a set); the kept slots retain the
    /// space's slot order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n_slots = self.space.n_subsystems();
        if keep.is_empty() {
            return Err(Error::InvalidInput(
                "partial trace must keep at least one subsystem".into(),
            ));
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.len() != keep.len() {
            return Err(Error::InvalidInput(format!(
                "kept slots must be unique, got {keep:?}"
            )));
        }
        if *keep_sorted.last().unwrap() >= n_slots {
            return Err(Error::DimensionMismatch(format!(
                "kept slot {} out of range for {} subsystems",
                keep_sorted.last().unwrap(),
                n_slots
            )));
        }

        let dims = self.space.dims();
        // Stride of each slot in the flat index.
        let mut strides = vec![1usize; n_slots];
        for s in (0..n_slots - 1).rev() {
            strides[s] = strides[s + 1] * dims[s + 1];
        }
        let traced: Vec<usize> = (0..n_slots).filter(|s| !keep_sorted.contains(s)).collect();

        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&s| dims[s]).collect();
        let kept_labels: Vec<String> = keep_sorted
            .iter()
            .map(|&s| self.space.labels()[s].clone())
            .collect();
        let out_space = HilbertSpace::new(kept_dims.clone(), kept_labels)?;
        let out_dim = out_space.total_dim();

        // Flat offsets of every kept-index combination and every traced-index
        // combination, enumerated in odometer order.
        let kept_offsets = enumerate_offsets(&keep_sorted, dims, &strides);
        let traced_offsets = enumerate_offsets(&traced, dims, &strides);

        let mut out = DMatrix::zeros(out_dim, out_dim);
        for (col_out, col_base) in kept_offsets.iter().enumerate() {
            for (row_out, row_base) in kept_offsets.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for t in &traced_offsets {
                    acc += self.matrix[(row_base + t, col_base + t)];
                }
                out[(row_out, col_out)] = acc;
            }
        }
        Ok(DensityMatrix {
            space: out_space,
            matrix: out,
        })
    }

    /// ⟨ψ|ρ|ψ⟩ clamped to [0, 1]; small negatives from the positivity
    /// tolerance clamp to 0.
    pub fn fidelity_pure(&self, psi: &Ket) -> Result<f64> {
        if !self.space.compatible(psi.space()) {
            return Err(Error::SpaceMismatch(format!(
                "fidelity of a state over {} against |psi> over {}",
                self.space,
                psi.space()
            )));
        }
        let v = psi.amplitudes();
        let val = (v.adjoint() * &self.matrix * v)[(0, 0)].re;
        Ok(val.clamp(0.0, 1.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix[(i, j)] * self.matrix[(j, i)]).re;
            }
        }
        acc
    }

    /// Smallest eigenvalue (Hermitian solve, O(dim³)).
    pub fn min_eigenvalue(&self) -> f64 {
        eigen::hermitian_eigenvalues(&self.matrix)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub(crate) fn from_matrix_unchecked(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Self {
        Self { space, matrix }
    }
}

fn enumerate_offsets(slots: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let count: usize = slots.iter().map(|&s| dims[s]).product();
    let mut offsets = Vec::with_capacity(count);
    let mut idx = vec![0usize; slots.len()];
    loop {
        let offset: usize = slots.iter().zip(&idx).map(|(&s, &i)| i * strides[s]).sum();
        offsets.push(offset);
        // odometer increment, last slot fastest
        let mut k = slots.len();
        loop {
            if k == 0 {
                return offsets;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[slots[k]] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// ½·Tr|ρ₁ − ρ₂| via the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if !a.space().compatible(b.space()) {
        return Err(Error::SpaceMismatch(
            "trace distance of states on different spaces".into(),
        ));
    }
    let diff = a.matrix() - b.matrix();
    let eigs = eigen::hermitian_eigenvalues(&diff);
    Ok(0.5 * eigs.iter().map(|e| e.abs()).sum::<f64>())
}
