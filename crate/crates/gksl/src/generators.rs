//! GKSL generators built from Kossakowski matrices and orthonormal traceless
//! operator bases, including tensor-sum generators for factorized bipartite
//! dynamics.

use crate::numerics::{
    self, kron, real, stack_columns, unstack_columns, ComplexMatrix, Tolerances, I,
};
use crate::{Error, Result};

/// Orthonormal basis of the traceless n x n matrices:
/// Tr(F_i) = 0 and Tr(F_i† F_j) = δ_ij.
#[derive(Debug, Clone)]
pub struct TracelessBasis {
    n: usize,
    matrices: Vec<ComplexMatrix>,
}

impl TracelessBasis {
    /// Generalized Gell-Mann construction, normalized to Tr(F_i† F_j) = δ_ij.
    ///
    /// Ordering is fixed so coefficient matrices are portable across runs and
    /// file formats: symmetric off-diagonal pairs (j < k, lexicographic), then
    /// antisymmetric off-diagonal pairs, then the n - 1 diagonal matrices.
    /// For n = 2 this yields {σ1/√2, σ2/√2, σ3/√2}.
    pub fn gell_mann(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "traceless basis needs dimension >= 2, got {n}"
            )));
        }
        let mut matrices = Vec::with_capacity(n * n - 1);
        let s = real(1.0 / 2f64.sqrt());
        for j in 0..n {
            for k in (j + 1)..n {
                let mut m = ComplexMatrix::zeros(n, n);
                m[(j, k)] = s;
                m[(k, j)] = s;
                matrices.push(m);
            }
        }
        for j in 0..n {
            for k in (j + 1)..n {
                let mut m = ComplexMatrix::zeros(n, n);
                m[(j, k)] = -I * s;
                m[(k, j)] = I * s;
                matrices.push(m);
            }
        }
        for l in 1..n {
            let norm = real(1.0 / ((l * (l + 1)) as f64).sqrt());
            let mut m = ComplexMatrix::zeros(n, n);
            for j in 0..l {
                m[(j, j)] = norm;
            }
            m[(l, l)] = -real(l as f64) * norm;
            matrices.push(m);
        }
        Ok(TracelessBasis { n, matrices })
    }

    /// Wraps an explicit basis after validating tracelessness and
    /// orthonormality.
    pub fn new(n: usize, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        if matrices.len() != n * n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n * n - 1,
                actual: matrices.len(),
            });
        }
        let tol = Tolerances::default().hermiticity;
        for (i, f) in matrices.iter().enumerate() {
            if f.nrows() != n || f.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: f.nrows(),
                });
            }
            let trace = f.trace();
            if trace.norm() > tol {
                return Err(Error::InvalidArgument(format!(
                    "basis element {i} has trace residual {:.3e}",
                    trace.norm()
                )));
            }
        }
        for (i, fi) in matrices.iter().enumerate() {
            for (j, fj) in matrices.iter().enumerate() {
                let g = (fi.adjoint() * fj).trace();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - real(want)).norm() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "basis Gram residual {:.3e} at ({i}, {j})",
                        (g - real(want)).norm()
                    )));
                }
            }
        }
        Ok(TracelessBasis { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    /// Σ_i coeffs[i] · F_i.
    pub fn combine(&self, coeffs: &numerics::ComplexVector) -> Result<ComplexMatrix> {
        if coeffs.len() != self.matrices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.matrices.len(),
                actual: coeffs.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for (c, f) in coeffs.iter().zip(&self.matrices) {
            out += f.map(|x| x * c);
        }
        Ok(out)
    }

    /// Rotated basis F'_i = Σ_j u[i, j] F_j for a unitary u.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<TracelessBasis> {
        let d = self.matrices.len();
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: u.nrows(),
            });
        }
        let matrices: Vec<ComplexMatrix> = (0..d)
            .map(|i| {
                let mut m = ComplexMatrix::zeros(self.n, self.n);
                for (j, f) in self.matrices.iter().enumerate() {
                    m += f.map(|x| x * u[(i, j)]);
                }
                m
            })
            .collect();
        TracelessBasis::new(self.n, matrices)
    }
}

/// Hermitian coefficient matrix C = [c_ij] of the dissipative part of a GKSL
/// generator (rates, units 1/time).
#[derive(Debug, Clone, PartialEq)]
pub struct KossakowskiMatrix {
    matrix: ComplexMatrix,
}

impl KossakowskiMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        numerics::require_hermitian(&matrix, Tolerances::default().hermiticity)?;
        Ok(KossakowskiMatrix { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        KossakowskiMatrix {
            matrix: ComplexMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        KossakowskiMatrix {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(entries: &[f64]) -> Self {
        let dim = entries.len();
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for (i, &x) in entries.iter().enumerate() {
            matrix[(i, i)] = real(x);
        }
        KossakowskiMatrix { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        numerics::min_eigenvalue(&self.matrix).expect("Kossakowski matrix is Hermitian")
    }

    pub fn scaled(&self, factor: f64) -> Self {
        KossakowskiMatrix {
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn add(&self, other: &KossakowskiMatrix) -> Result<KossakowskiMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(KossakowskiMatrix {
            matrix: &self.matrix + &other.matrix,
        })
    }
}

/// Coefficient matrix of a tensor-sum generator in the partial operator basis
/// {F_i ⊗ I, I ⊗ F_j}: block diagonal with C1 and C2 on the diagonal.
pub fn block_diag_kossakowski(
    c1: &KossakowskiMatrix,
    c2: &KossakowskiMatrix,
) -> KossakowskiMatrix {
    let (d1, d2) = (c1.dim(), c2.dim());
    let mut matrix = ComplexMatrix::zeros(d1 + d2, d1 + d2);
    matrix.view_mut((0, 0), (d1, d1)).copy_from(c1.matrix());
    matrix.view_mut((d1, d1), (d2, d2)).copy_from(c2.matrix());
    KossakowskiMatrix { matrix }
}

/// Full description of a GKSL generator: effective Hamiltonian, Kossakowski
/// matrix and the traceless basis the coefficients refer to.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    n: usize,
    hamiltonian: ComplexMatrix,
    kossakowski: KossakowskiMatrix,
    basis: TracelessBasis,
}

impl GeneratorSpec {
    pub fn new(
        hamiltonian: ComplexMatrix,
        kossakowski: KossakowskiMatrix,
        basis: TracelessBasis,
    ) -> Result<Self> {
        let n = basis.n();
        numerics::require_hermitian(&hamiltonian, Tolerances::default().hermiticity)?;
        if hamiltonian.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: hamiltonian.nrows(),
            });
        }
        if kossakowski.dim() != n * n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n * n - 1,
                actual: kossakowski.dim(),
            });
        }
        Ok(GeneratorSpec {
            n,
            hamiltonian,
            kossakowski,
            basis,
        })
    }

    /// Purely dissipative generator (H = 0) in the Gell-Mann basis.
    pub fn dissipative(n: usize, kossakowski: KossakowskiMatrix) -> Result<Self> {
        GeneratorSpec::new(
            ComplexMatrix::zeros(n, n),
            kossakowski,
            TracelessBasis::gell_mann(n)?,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn kossakowski(&self) -> &KossakowskiMatrix {
        &self.kossakowski
    }

    pub fn basis(&self) -> &TracelessBasis {
        &self.basis
    }

    /// L[rho] = -i[H, rho] + Σ_ij c_ij (F_i rho F_j† - ½{F_j† F_i, rho}).
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.nrows() != self.n || rho.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: rho.nrows(),
            });
        }
        let mut out = numerics::commutator(&self.hamiltonian, rho).map(|x| x * (-I));
        let c = self.kossakowski.matrix();
        let fs = self.basis.matrices();
        for (i, fi) in fs.iter().enumerate() {
            for (j, fj) in fs.iter().enumerate() {
                let cij = c[(i, j)];
                if cij.norm() == 0.0 {
                    continue;
                }
                let fjd = fj.adjoint();
                let sandwich = fi * rho * &fjd;
                let anti = numerics::anticommutator(&(fjd * fi), rho).scale(0.5);
                out += (sandwich - anti).map(|x| x * cij);
            }
        }
        Ok(out)
    }

    /// Matrix form of `apply` in the column-stacking convention.
    pub fn superoperator(&self) -> SuperoperatorMatrix {
        let mut m = hamiltonian_superoperator(&self.hamiltonian);
        m += dissipator_superoperator(self.kossakowski.matrix(), self.basis.matrices());
        SuperoperatorMatrix { n: self.n, matrix: m }
    }

    /// The same generator expressed in the rotated basis F'_i = Σ_j u[i,j] F_j
    /// with the correspondingly transformed coefficient matrix.
    pub fn with_rotated_basis(&self, u: &ComplexMatrix) -> Result<GeneratorSpec> {
        let basis = self.basis.rotated(u)?;
        let c = u.map(|x| x.conj()) * self.kossakowski.matrix() * u.transpose();
        GeneratorSpec::new(self.hamiltonian.clone(), KossakowskiMatrix::new(c)?, basis)
    }
}

/// -i(I ⊗ H - Hᵀ ⊗ I): the commutator part in column stacking.
pub fn hamiltonian_superoperator(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.nrows();
    let id = ComplexMatrix::identity(n, n);
    (kron(&id, h) - kron(&h.transpose(), &id)).map(|x| x * (-I))
}

/// Dissipator superoperator for an arbitrary family of Lindblad operators with
/// Hermitian coefficient matrix `c`:
/// Σ_ij c_ij [ conj(F_j) ⊗ F_i - ½ (I ⊗ F_j†F_i + (F_j†F_i)ᵀ ⊗ I) ].
fn dissipator_superoperator(c: &ComplexMatrix, ops: &[ComplexMatrix]) -> ComplexMatrix {
    let n = ops[0].nrows();
    let id = ComplexMatrix::identity(n, n);
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for (i, fi) in ops.iter().enumerate() {
        for (j, fj) in ops.iter().enumerate() {
            let cij = c[(i, j)];
            if cij.norm() == 0.0 {
                continue;
            }
            let fjd_fi = fj.adjoint() * fi;
            let term = kron(&fj.map(|x| x.conj()), fi)
                - (kron(&id, &fjd_fi) + kron(&fjd_fi.transpose(), &id)).scale(0.5);
            out += term.map(|x| x * cij);
        }
    }
    out
}

/// n² x n² matrix acting on column-stacked n x n matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperoperatorMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

impl SuperoperatorMatrix {
    pub fn from_matrix(n: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.nrows() != n * n || matrix.ncols() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: matrix.nrows(),
            });
        }
        Ok(SuperoperatorMatrix { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        SuperoperatorMatrix {
            n,
            matrix: ComplexMatrix::identity(n * n, n * n),
        }
    }

    /// Dimension n of the matrices the map acts on.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.nrows(),
            });
        }
        unstack_columns(&(&self.matrix * stack_columns(x)), self.n, self.n)
    }

    pub fn compose(&self, other: &SuperoperatorMatrix) -> Result<SuperoperatorMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(SuperoperatorMatrix {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Max Hermiticity residual of the map's output over seeded random
    /// Hermitian probes.
    pub fn hermiticity_preservation_residual(&self, probes: usize, seed: u64) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..probes {
            let mut rng = numerics::sample_rng(seed, k as u64);
            let h = numerics::random_hermitian(self.n, &mut rng);
            let out = self.apply(&h).expect("probe has matching dimension");
            worst = worst.max(numerics::hermiticity_residual(&out));
        }
        worst
    }
}

/// Generator of γ_t^(1) ⊗ γ_t^(2): the lift L1 ⊗ I + I ⊗ L2 acting on
/// M_n ⊗ M_n, assembled from the lifted Lindblad operators F_i ⊗ I and
/// I ⊗ F_j with the block-diagonal coefficient matrix.
pub fn tensor_sum_generator(g1: &GeneratorSpec, g2: &GeneratorSpec) -> Result<SuperoperatorMatrix> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch {
            expected: g1.n(),
            actual: g2.n(),
        });
    }
    let n = g1.n();
    let id = ComplexMatrix::identity(n, n);
    let h_total = kron(g1.hamiltonian(), &id) + kron(&id, g2.hamiltonian());
    let mut ops: Vec<ComplexMatrix> = Vec::with_capacity(2 * (n * n - 1));
    for f in g1.basis().matrices() {
        ops.push(kron(f, &id));
    }
    for f in g2.basis().matrices() {
        ops.push(kron(&id, f));
    }
    let c = block_diag_kossakowski(g1.kossakowski(), g2.kossakowski());
    let matrix = hamiltonian_superoperator(&h_total) + dissipator_superoperator(c.matrix(), &ops);
    Ok(SuperoperatorMatrix { n: n * n, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermiticity_residual, max_abs, pauli, random_hermitian, sample_rng};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn gell_mann_n2_is_scaled_paulis() {
        let basis = TracelessBasis::gell_mann(2).unwrap();
        assert_eq!(basis.len(), 3);
        let s = 1.0 / 2f64.sqrt();
        for (f, k) in basis.matrices().iter().zip(1..=3) {
            assert!(max_abs(&(f - pauli(k).scale(s))) < 1e-15, "sigma_{k}");
            assert!(f.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn gell_mann_n3_gram_matrix_is_identity() {
        // Oracle: direct Gram-matrix computation.
        let basis = TracelessBasis::gell_mann(3).unwrap();
        assert_eq!(basis.len(), 8);
        for (i, fi) in basis.matrices().iter().enumerate() {
            assert!(fi.trace().norm() < 1e-12);
            for (j, fj) in basis.matrices().iter().enumerate() {
                let g = (fi.adjoint() * fj).trace();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - real(want)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn gell_mann_rejects_dimension_below_two() {
        assert!(TracelessBasis::gell_mann(1).is_err());
        assert!(TracelessBasis::gell_mann(0).is_err());
    }

    #[test]
    fn apply_zero_generator() {
        let g = GeneratorSpec::dissipative(2, KossakowskiMatrix::zeros(3)).unwrap();
        let rho = random_hermitian(2, &mut sample_rng(1, 0));
        assert!(max_abs(&g.apply(&rho).unwrap()) < 1e-15);
    }

    #[test]
    fn apply_isotropic_rates_damps_at_rate_four() {
        // C = 2·I3 with the orthonormal basis: every Pauli component decays
        // at rate 4.
        let g = GeneratorSpec::dissipative(2, KossakowskiMatrix::identity(3).scaled(2.0)).unwrap();
        let rho = pauli(3).scale(0.5);
        let out = g.apply(&rho).unwrap();
        assert!(max_abs(&(out - rho.scale(-4.0))) < 1e-13);
    }

    #[test]
    fn apply_indefinite_rates_freezes_sigma1() {
        let g = GeneratorSpec::dissipative(
            2,
            KossakowskiMatrix::from_real_diagonal(&[1.0, -1.0, 1.0]).scaled(2.0),
        )
        .unwrap();
        let out = g.apply(&pauli(1).scale(0.5)).unwrap();
        assert!(max_abs(&out) < 1e-13);
        // ... while sigma2 decays at rate 4.
        let out2 = g.apply(&pauli(2).scale(0.5)).unwrap();
        assert!(max_abs(&(out2 - pauli(2).scale(-2.0))) < 1e-13);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let g = GeneratorSpec::dissipative(2, KossakowskiMatrix::identity(3)).unwrap();
        assert!(g.apply(&ComplexMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn superoperator_of_zero_spec_is_zero() {
        let g = GeneratorSpec::dissipative(2, KossakowskiMatrix::zeros(3)).unwrap();
        assert!(max_abs(g.superoperator().matrix()) < 1e-15);
    }

    #[test]
    fn superoperator_agrees_with_apply() {
        let mut rng = sample_rng(2, 0);
        let c = KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap();
        let h = random_hermitian(2, &mut rng);
        let g = GeneratorSpec::new(h, c, TracelessBasis::gell_mann(2).unwrap()).unwrap();
        let s = g.superoperator();
        for k in 0..20 {
            let rho = random_hermitian(2, &mut sample_rng(3, k));
            let direct = g.apply(&rho).unwrap();
            let via_matrix = s.apply(&rho).unwrap();
            assert!(max_abs(&(direct - via_matrix)) < 1e-12);
        }
    }

    #[test]
    fn commutator_superoperator_spectrum() {
        // H = sigma3, C = 0: the superoperator is skew-Hermitian with
        // eigenvalues {0, 0, +2i, -2i}. Oracle: Hermitian eigendecomposition
        // of i·S.
        let g = GeneratorSpec::new(
            pauli(3),
            KossakowskiMatrix::zeros(3),
            TracelessBasis::gell_mann(2).unwrap(),
        )
        .unwrap();
        let s = g.superoperator();
        assert!(max_abs(&(s.matrix() + s.matrix().adjoint())) < 1e-14);
        let i_s = s.matrix().map(|x| x * crate::numerics::I);
        let eigs = crate::numerics::hermitian_eigensystem(&i_s).unwrap().eigenvalues;
        let want = [-2.0, 0.0, 0.0, 2.0];
        for (got, want) in eigs.iter().zip(want) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn generator_trace_hermiticity_linearity() {
        let mut rng = sample_rng(4, 0);
        for trial in 0..10 {
            let c = KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap();
            let h = random_hermitian(2, &mut rng);
            let g = GeneratorSpec::new(h, c, TracelessBasis::gell_mann(2).unwrap()).unwrap();
            let rho1 = random_hermitian(2, &mut rng);
            let rho2 = random_hermitian(2, &mut rng);
            let out = g.apply(&rho1).unwrap();
            assert!(out.trace().norm() < 1e-12, "trial {trial}");
            assert!(hermiticity_residual(&out) < 1e-12);
            let combo = g.apply(&(rho1.scale(0.3) + rho2.scale(-1.7))).unwrap();
            let split = out.scale(0.3) + g.apply(&rho2).unwrap().scale(-1.7);
            assert!(max_abs(&(combo - split)) < 1e-12);
        }
    }

    #[test]
    fn superoperator_preserves_hermiticity_of_probes() {
        let mut rng = sample_rng(5, 0);
        let c = KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap();
        let g = GeneratorSpec::new(
            random_hermitian(2, &mut rng),
            c,
            TracelessBasis::gell_mann(2).unwrap(),
        )
        .unwrap();
        assert!(g.superoperator().hermiticity_preservation_residual(10, 99) < 1e-10);
    }

    #[test]
    fn basis_rotation_leaves_generator_invariant() {
        let mut rng = sample_rng(6, 0);
        let c = KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap();
        let g = GeneratorSpec::dissipative(2, c).unwrap();
        let u = crate::numerics::haar_unitary(3, &mut rng);
        let rotated = g.with_rotated_basis(&u).unwrap();
        for k in 0..10 {
            let rho = random_hermitian(2, &mut sample_rng(7, k));
            let a = g.apply(&rho).unwrap();
            let b = rotated.apply(&rho).unwrap();
            assert!(max_abs(&(a - b)) < 1e-10);
        }
    }

    #[test]
    fn block_diag_examples() {
        let c1 = KossakowskiMatrix::identity(3);
        let both = block_diag_kossakowski(&c1, &c1);
        assert!(max_abs(&(both.matrix() - ComplexMatrix::identity(6, 6))) < 1e-15);

        let c2 = KossakowskiMatrix::from_real_diagonal(&[1.0, -1.0, 1.0]);
        let mixed = block_diag_kossakowski(&c1, &c2);
        let want = [1.0, 1.0, 1.0, 1.0, -1.0, 1.0];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(mixed.matrix()[(i, i)].re, *w);
        }
        assert_abs_diff_eq!(
            mixed.min_eigenvalue(),
            c1.min_eigenvalue().min(c2.min_eigenvalue()),
            epsilon = 1e-12
        );
    }

    #[test]
    fn tensor_sum_zero_is_zero() {
        let g = GeneratorSpec::dissipative(2, KossakowskiMatrix::zeros(3)).unwrap();
        let l = tensor_sum_generator(&g, &g).unwrap();
        assert!(max_abs(l.matrix()) < 1e-15);
    }

    #[test]
    fn tensor_sum_satisfies_leibniz_rule() {
        // Oracle: L[rho1 ⊗ rho2] = L1[rho1] ⊗ rho2 + rho1 ⊗ L2[rho2].
        let mut rng = sample_rng(8, 0);
        let g1 = GeneratorSpec::new(
            random_hermitian(2, &mut rng),
            KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap(),
            TracelessBasis::gell_mann(2).unwrap(),
        )
        .unwrap();
        let g2 = GeneratorSpec::new(
            random_hermitian(2, &mut rng),
            KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap(),
            TracelessBasis::gell_mann(2).unwrap(),
        )
        .unwrap();
        let l = tensor_sum_generator(&g1, &g2).unwrap();
        for k in 0..10 {
            let mut prng = sample_rng(9, k);
            let rho1 = random_hermitian(2, &mut prng);
            let rho2 = random_hermitian(2, &mut prng);
            let lhs = l.apply(&kron(&rho1, &rho2)).unwrap();
            let rhs = kron(&g1.apply(&rho1).unwrap(), &rho2)
                + kron(&rho1, &g2.apply(&rho2).unwrap());
            assert!(max_abs(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn tensor_sum_exponential_factorizes_on_products() {
        let mut rng = sample_rng(10, 0);
        let g1 = GeneratorSpec::dissipative(
            2,
            KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap(),
        )
        .unwrap();
        let g2 = GeneratorSpec::dissipative(
            2,
            KossakowskiMatrix::new(random_hermitian(3, &mut rng)).unwrap(),
        )
        .unwrap();
        let l = tensor_sum_generator(&g1, &g2).unwrap();
        let t = 0.7;
        let big = crate::numerics::matrix_exponential(l.matrix(), t).unwrap();
        let e1 = crate::numerics::matrix_exponential(g1.superoperator().matrix(), t).unwrap();
        let e2 = crate::numerics::matrix_exponential(g2.superoperator().matrix(), t).unwrap();
        let rho1 = random_hermitian(2, &mut rng);
        let rho2 = random_hermitian(2, &mut rng);
        let joint = SuperoperatorMatrix::from_matrix(4, big)
            .unwrap()
            .apply(&kron(&rho1, &rho2))
            .unwrap();
        let m1 = SuperoperatorMatrix::from_matrix(2, e1)
            .unwrap()
            .apply(&rho1)
            .unwrap();
        let m2 = SuperoperatorMatrix::from_matrix(2, e2)
            .unwrap()
            .apply(&rho2)
            .unwrap();
        assert!(max_abs(&(joint - kron(&m1, &m2))) < 1e-10);
    }

    #[test]
    fn tensor_sum_rejects_dimension_mismatch() {
        let g2 = GeneratorSpec::dissipative(2, KossakowskiMatrix::zeros(3)).unwrap();
        let g3 = GeneratorSpec::dissipative(3, KossakowskiMatrix::zeros(8)).unwrap();
        assert!(tensor_sum_generator(&g2, &g3).is_err());
    }

    #[test]
    fn kossakowski_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3, 3);
        m[(0, 1)] = Complex64::new(0.0, 1e-6);
        assert!(KossakowskiMatrix::new(m).is_err());
    }

    #[test]
    fn basis_validation_catches_bad_gram() {
        let bad = vec![pauli(1), pauli(2), pauli(3)]; // not normalized
        assert!(TracelessBasis::new(2, bad).is_err());
    }
}
