//! Composite Hilbert spaces: an ordered list of subsystem dimensions with
//! human-readable labels.

use crate::error::{Error, Result};

/// Tensor-product structure of a composite Hilbert space.
///
/// Slot 0 is the slowest-varying index in the Kronecker ordering: the basis
/// state with per-slot indices (i₀, i₁, …) sits at flat index
/// i₀·d₁·d₂·… + i₁·d₂·… + ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl HilbertSpace {
    pub fn new(dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpace("subsystem list is empty".into()));
        }
        if dims.iter().any(|&d| d < 1) {
            return Err(Error::InvalidSpace(format!(
                "all subsystem dimensions must be >= 1, got {dims:?}"
            )));
        }
        if labels.len() != dims.len() {
            return Err(Error::InvalidSpace(format!(
                "{} labels for {} subsystems",
                labels.len(),
                dims.len()
            )));
        }
        Ok(Self { dims, labels })
    }

    /// Single subsystem of dimension `dim`.
    pub fn single(dim: usize, label: &str) -> Result<Self> {
        Self::new(vec![dim], vec![label.to_string()])
    }

    /// Two-level system with basis (|e⟩, |g⟩).
    pub fn qubit(label: &str) -> Self {
        Self::single(2, label).expect("2 >= 1")
    }

    /// Bosonic mode truncated to Fock states |0⟩ … |n_max − 1⟩.
    pub fn fock(n_max: usize, label: &str) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::InvalidSpace(format!(
                "Fock truncation must be >= 2, got {n_max}"
            )));
        }
        Self::single(n_max, label)
    }

    /// Tensor product: `self`'s slots first, then `other`'s.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self { dims, labels }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Product of all subsystem dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Same tensor structure (labels are descriptive only).
    pub fn compatible(&self, other: &Self) -> bool {
        self.dims == other.dims
    }

    /// Flat index of the basis state with the given per-slot indices.
    pub fn flat_index(&self, indices: &[usize]) -> Result<usize> {
        if indices.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} indices for {} subsystems",
                indices.len(),
                self.dims.len()
            )));
        }
        let mut flat = 0;
        for (k, (&i, &d)) in indices.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(Error::DimensionMismatch(format!(
                    "index {i} out of range for slot {k} of dimension {d}"
                )));
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }
}

impl std::fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}({d})"))
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}
