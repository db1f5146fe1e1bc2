//! Dense complex operators on a composite Hilbert space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::HilbertSpace;

/// A dense square matrix tagged with the composite space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimension {} does not match space dimension {}",
                matrix.nrows(),
                space.total_dim()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let n = space.total_dim();
        Self {
            space,
            matrix: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let n = space.total_dim();
        Self {
            space,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// Bosonic annihilation operator on Fock(n_max): ⟨n−1|a|n⟩ = √n.
    pub fn annihilation(n_max: usize) -> Result<Self> {
        let space = HilbertSpace::fock(n_max, "mode")?;
        let mut m = DMatrix::zeros(n_max, n_max);
        for n in 1..n_max {
            m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self { space, matrix: m })
    }

    /// Bosonic creation operator on Fock(n_max).
    pub fn creation(n_max: usize) -> Result<Self> {
        Ok(Self::annihilation(n_max)?.dagger())
    }

    /// Number operator a†a on Fock(n_max).
    pub fn number(n_max: usize) -> Result<Self> {
        let a = Self::annihilation(n_max)?;
        Ok(&a.dagger() * &a)
    }

    /// σz = diag(+1, −1) in the (|e⟩, |g⟩) basis.
    pub fn sigma_z() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        Self {
            space: HilbertSpace::qubit("spin"),
            matrix: m,
        }
    }

    /// Lowering operator σ− = |g⟩⟨e|.
    pub fn sigma_minus() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(1, 0)] = Complex64::new(1.0, 0.0);
        Self {
            space: HilbertSpace::qubit("spin"),
            matrix: m,
        }
    }

    /// Raising operator σ+ = |e⟩⟨g|.
    pub fn sigma_plus() -> Self {
        Self::sigma_minus().dagger()
    }

    /// Projector |e⟩⟨e| onto the excited level.
    pub fn excited_projector() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Self {
            space: HilbertSpace::qubit("spin"),
            matrix: m,
        }
    }

    /// Embed a single-subsystem operator into `space` at the given slot,
    /// acting as the identity on every other slot.
    pub fn embed(op: &Operator, slot: usize, space: &HilbertSpace) -> Result<Operator> {
        if slot >= space.n_subsystems() {
            return Err(Error::DimensionMismatch(format!(
                "slot {slot} out of range for a space with {} subsystems",
                space.n_subsystems()
            )));
        }
        let d = space.dims()[slot];
        if op.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator dimension {} does not match slot {slot} dimension {d}",
                op.dim()
            )));
        }
        let pre: usize = space.dims()[..slot].iter().product();
        let post: usize = space.dims()[slot + 1..].iter().product();
        let total = space.total_dim();
        let mut out = DMatrix::zeros(total, total);
        for p in 0..pre {
            for i in 0..d {
                for j in 0..d {
                    let v = op.matrix[(i, j)];
                    if v == Complex64::ZERO {
                        continue;
                    }
                    let row0 = (p * d + i) * post;
                    let col0 = (p * d + j) * post;
                    for q in 0..post {
                        out[(row0 + q, col0 + q)] = v;
                    }
                }
            }
        }
        Ok(Operator {
            space: space.clone(),
            matrix: out,
        })
    }

    /// Kronecker product, `self` on the slower-varying (leading) slots.
    pub fn kron(&self, other: &Operator) -> Operator {
        Operator {
            space: self.space.tensor(&other.space),
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix * factor,
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A − A†| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub(crate) fn from_matrix_unchecked(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Self {
        Self { space, matrix }
    }

    fn assert_compatible(&self, other: &Operator, what: &str) {
        assert!(
            self.space.compatible(other.space()),
            "{what}: operator spaces differ ({} vs {})",
            self.space,
            other.space
        );
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.assert_compatible(rhs, "add");
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.assert_compatible(rhs, "sub");
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.assert_compatible(rhs, "mul");
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl std::ops::Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(Complex64::new(self, 0.0))
    }
}

impl std::ops::Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn annihilation_two_level() {
        let a = Operator::annihilation(2).unwrap();
        assert_eq!(a.matrix()[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(a.matrix()[(0, 0)], Complex64::ZERO);
        assert_eq!(a.matrix()[(1, 0)], Complex64::ZERO);
        assert_eq!(a.matrix()[(1, 1)], Complex64::ZERO);
        assert!(Operator::annihilation(1).is_err());
    }

    #[test]
    fn ladder_commutator_below_truncation_edge() {
        let n = 6;
        let a = Operator::annihilation(n).unwrap();
        let comm = &(&a * &a.dagger()) - &(&a.dagger() * &a);
        // [a, a†] = I on the first n_max − 1 levels; the edge level breaks.
        for k in 0..n - 1 {
            assert_abs_diff_eq!(comm.matrix()[(k, k)].re, 1.0, epsilon = 1e-14);
        }
        for k in 0..n {
            for l in 0..n {
                if k != l {
                    assert_abs_diff_eq!(comm.matrix()[(k, l)].norm(), 0.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn number_operator_diagonal() {
        let n = 5;
        let num = Operator::number(n).unwrap();
        for k in 0..n {
            assert_abs_diff_eq!(num.matrix()[(k, k)].re, k as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn embed_sigma_z_two_qubits() {
        // diag entries (1, 1, −1, −1) with |e⟩ first in each slot
        let space = HilbertSpace::qubit("q0").tensor(&HilbertSpace::qubit("q1"));
        let sz = Operator::embed(&Operator::sigma_z(), 0, &space).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| sz.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn embed_identity_any_slot() {
        let space = HilbertSpace::qubit("q").tensor(&HilbertSpace::fock(3, "m").unwrap());
        let id2 = Operator::identity(HilbertSpace::qubit("q"));
        let e = Operator::embed(&id2, 0, &space).unwrap();
        assert_eq!(e, Operator::identity(space));
    }

    #[test]
    fn embed_annihilation_slot1_of_2x3() {
        // I₂ ⊗ a₃: two diagonal blocks with entries √1, √2, built by hand.
        let space = HilbertSpace::qubit("q").tensor(&HilbertSpace::fock(3, "m").unwrap());
        let a = Operator::annihilation(3).unwrap();
        let e = Operator::embed(&a, 1, &space).unwrap();
        let mut expect = DMatrix::zeros(6, 6);
        expect[(0, 1)] = Complex64::new(1.0, 0.0);
        expect[(1, 2)] = Complex64::new(2f64.sqrt(), 0.0);
        expect[(3, 4)] = Complex64::new(1.0, 0.0);
        expect[(4, 5)] = Complex64::new(2f64.sqrt(), 0.0);
        assert_eq!(e.matrix(), &expect);
    }

    #[test]
    fn embed_rejects_wrong_dimension() {
        let space = HilbertSpace::qubit("q").tensor(&HilbertSpace::fock(3, "m").unwrap());
        let a = Operator::annihilation(4).unwrap();
        assert!(Operator::embed(&a, 1, &space).is_err());
        assert!(Operator::embed(&a, 2, &space).is_err());
    }

    #[test]
    fn embed_distributes_over_products() {
        let space = HilbertSpace::qubit("q").tensor(&HilbertSpace::fock(4, "m").unwrap());
        let a = Operator::annihilation(4).unwrap();
        let n = Operator::number(4).unwrap();
        let lhs = Operator::embed(&(&a * &n), 1, &space).unwrap();
        let rhs =
            &Operator::embed(&a, 1, &space).unwrap() * &Operator::embed(&n, 1, &space).unwrap();
        assert!((&lhs - &rhs).max_abs() < 1e-14);
    }

    #[test]
    fn embed_matches_kron_route() {
        let space = HilbertSpace::qubit("q").tensor(&HilbertSpace::fock(3, "m").unwrap());
        let sm = Operator::sigma_minus();
        let via_embed = Operator::embed(&sm, 0, &space).unwrap();
        let via_kron = sm.kron(&Operator::identity(HilbertSpace::fock(3, "m").unwrap()));
        assert_eq!(via_embed.matrix(), via_kron.matrix());
    }

    #[test]
    fn dagger_of_sigma_minus_is_sigma_plus() {
        assert_eq!(Operator::sigma_minus().dagger(), Operator::sigma_plus());
    }

    #[test]
    fn hermiticity_check() {
        let sz = Operator::sigma_z();
        assert!(sz.is_hermitian(0.0));
        assert!(!Operator::sigma_minus().is_hermitian(0.5));
    }
}
