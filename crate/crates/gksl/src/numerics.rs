//! Dense complex linear algebra primitives shared by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>` throughout; all sizes here are
//! tiny (superoperators up to 16x16), so accuracy wins over speed everywhere.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Central tolerance set. Every precondition check measures its residual
/// against one of these values and reports the number it saw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise |A - A†| accepted as Hermitian.
    pub hermiticity: f64,
    /// Operator-norm residual accepted for eigensystem reconstruction.
    pub reconstruction: f64,
    /// Slack below zero still counted as positive semidefinite.
    pub positivity_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            reconstruction: 1e-10,
            positivity_slack: 1e-10,
        }
    }
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pauli matrix sigma_k for k = 0..=3 (sigma_0 is the identity).
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::identity(2, 2),
        1 => ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Maximum column sum of absolute values (the induced 1-norm).
pub fn one_norm(a: &ComplexMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Max entrywise |A - A†|.
pub fn hermiticity_residual(a: &ComplexMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn require_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub fn require_hermitian(a: &ComplexMatrix, tolerance: f64) -> Result<()> {
    require_square(a)?;
    let residual = hermiticity_residual(a);
    if residual > tolerance {
        return Err(Error::NotHermitian {
            residual,
            tolerance,
        });
    }
    Ok(())
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

/// Column-stacking vectorization: vec(X)[j*n + i] = X[i, j].
///
/// This is the one convention used project-wide; `unstack` is its inverse.
pub fn stack_columns(x: &ComplexMatrix) -> ComplexVector {
    let (n, m) = (x.nrows(), x.ncols());
    ComplexVector::from_fn(n * m, |k, _| x[(k % n, k / n)])
}

pub fn unstack_columns(v: &ComplexVector, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            actual: v.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| v[j * rows + i]))
}

/// Kronecker product with the standard placement
/// (A ⊗ B)[(i·rowsB + k), (j·colsB + l)] = A[i,j]·B[k,l].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in ascending order,
/// eigenvector columns orthonormal.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, ordered like `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    /// V · diag(λ) · V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&x| real(x)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}

/// Diagonalizes `h`, which must be Hermitian within `Tolerances::hermiticity`.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<HermitianEigensystem> {
    require_hermitian(h, Tolerances::default().hermiticity)?;
    // Exact symmetrization so the backend sees a clean input.
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigensystem(h)?.eigenvalues[0])
}

/// Tr(A·rho) for Hermitian A; the imaginary residue must stay below 1e-12.
pub fn expectation(a: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    require_hermitian(a, Tolerances::default().hermiticity)?;
    if a.nrows() != rho.nrows() || a.ncols() != rho.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: rho.nrows(),
        });
    }
    let value = (a * rho).trace();
    if value.im.abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "expectation value has imaginary residue {:.3e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// exp(t·A) for square A. `t = 0` returns the identity exactly.
///
/// Normal matrices (within tolerance) go through an eigendecomposition; the
/// general case uses scaling-and-squaring with a degree-13 Padé approximant.
pub fn matrix_exponential(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = require_square(a)?;
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(n, n));
    }
    let b = a.map(|x| x * t);
    if let Some(exp) = try_normal_exponential(&b) {
        return Ok(exp);
    }
    Ok(expm_pade13(&b))
}

/// Eigendecomposition route for normal matrices. Splits B = H + iK into
/// commuting Hermitian parts, diagonalizes a generic Hermitian combination,
/// and verifies that it actually diagonalizes both parts before trusting it.
fn try_normal_exponential(b: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = b.nrows();
    let scale = one_norm(b).max(1.0);
    let normality = max_abs(&(b * b.adjoint() - b.adjoint() * b));
    if normality > 1e-12 * scale * scale {
        return None;
    }
    let h = (b + b.adjoint()).scale(0.5);
    let k = (b - b.adjoint()).scale(0.5).map(|x| x * (-I));
    // Generic irrational mixing; collisions between distinct (h, k) pairs
    // would break the joint diagonalization and are caught by the check below.
    for c in [0.618_033_988_749_894_9, 1.324_717_957_244_746] {
        let mixed = &h + k.scale(c);
        let eig = mixed.symmetric_eigen();
        let u = &eig.eigenvectors;
        let dh = u.adjoint() * &h * u;
        let dk = u.adjoint() * &k * u;
        let off = |m: &ComplexMatrix| {
            let mut worst: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        worst = worst.max(m[(i, j)].norm());
                    }
                }
            }
            worst
        };
        if off(&dh) <= 1e-11 * scale && off(&dk) <= 1e-11 * scale {
            let phases = DVector::from_fn(n, |i, _| (dh[(i, i)].re + I * dk[(i, i)].re).exp());
            return Some(u * ComplexMatrix::from_diagonal(&phases) * u.adjoint());
        }
    }
    None
}

// Padé coefficients for the degree-13 diagonal approximant.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const PADE13_THETA: f64 = 5.371_920_351_148_152;

fn expm_pade13(b: &ComplexMatrix) -> ComplexMatrix {
    let n = b.nrows();
    let norm = one_norm(b);
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as i32
    } else {
        0
    };
    let a = b.map(|x| x / real(2f64.powi(squarings)));
    let id = ComplexMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u = &a
        * (&a6 * (a6.scale(PADE13[13]) + a4.scale(PADE13[11]) + a2.scale(PADE13[9]))
            + a6.scale(PADE13[7])
            + a4.scale(PADE13[5])
            + a2.scale(PADE13[3])
            + id.scale(PADE13[1]));
    let v = &a6 * (a6.scale(PADE13[12]) + a4.scale(PADE13[10]) + a2.scale(PADE13[8]))
        + a6.scale(PADE13[6])
        + a4.scale(PADE13[4])
        + a2.scale(PADE13[2])
        + id.scale(PADE13[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is singular; input matrix is out of range");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Deterministic per-sample RNG: results depend on (seed, index) only, never
/// on scheduling or call order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn standard_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) / 2f64.sqrt()
}

/// Random matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian_matrix<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| standard_complex(rng))
}

/// Random Hermitian matrix (Gaussian ensemble, entries O(1)).
pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian_matrix(n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// phase convention fixed from the R diagonal.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian_matrix(n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn haar_state<R: Rng>(n: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(n, |_, _| standard_complex(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / real(norm);
        }
    }
}

/// |psi><psi| as a dense matrix.
pub fn projector(psi: &ComplexVector) -> ComplexMatrix {
    psi * psi.adjoint()
}
