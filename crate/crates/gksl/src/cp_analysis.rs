//! Complete-positivity analysis: Choi matrices, Kossakowski criterion, Kraus
//! decompositions, the necessary condition C1 + C2 >= 0 for positivity of
//! factorized semigroups with its constructive witness, and perturbation
//! intervals for completely positive generators.

use num_complex::Complex64;
use rand::Rng;

use crate::generators::{GeneratorSpec, KossakowskiMatrix, SuperoperatorMatrix};
use crate::numerics::{
    self, hermitian_eigensystem, kron, max_abs, min_eigenvalue, one_norm, real, sample_rng,
    unstack_columns, ComplexMatrix, ComplexVector, Tolerances,
};
use crate::{Error, Result};

/// Unnormalized Choi matrix C = Σ_ij γ[E_ij] ⊗ E_ij; its spectrum decides
/// complete positivity. Only the sign of the minimum eigenvalue carries
/// meaning, so the normalization is irrelevant to verdicts.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn hermiticity_residual(&self) -> f64 {
        numerics::hermiticity_residual(&self.matrix)
    }

    /// Spectrum of the Hermitian-symmetrized Choi matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        hermitian_eigensystem(&sym)
            .expect("symmetrized matrix is Hermitian")
            .eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// C[(a·n + i), (b·n + j)] = γ[E_ij][a, b], i.e. (γ ⊗ id) applied to the
/// unnormalized maximally entangled projector.
pub fn choi_matrix(map: &SuperoperatorMatrix) -> ChoiMatrix {
    let n = map.n();
    let mut c = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let mut unit = ComplexMatrix::zeros(n, n);
            unit[(i, j)] = real(1.0);
            let image = map.apply(&unit).expect("matrix unit has the map dimension");
            for a in 0..n {
                for b in 0..n {
                    c[(a * n + i, b * n + j)] = image[(a, b)];
                }
            }
        }
    }
    ChoiMatrix { n, matrix: c }
}

/// Outcome of a complete-positivity test. Depending on the route taken, the
/// Choi minimum, the Kossakowski minimum or both are present.
#[derive(Debug, Clone, PartialEq)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_choi_eigenvalue: Option<f64>,
    pub min_kossakowski_eigenvalue: Option<f64>,
    pub tolerance: f64,
}

/// Choi-spectrum test. The map must be Hermiticity-preserving, which is
/// verified on seeded random Hermitian probes before the spectrum is trusted.
pub fn is_completely_positive(map: &SuperoperatorMatrix, tolerance: f64) -> Result<CpVerdict> {
    let residual = map.hermiticity_preservation_residual(8, 0x48_50);
    if residual > 1e-10 {
        return Err(Error::NotHermiticityPreserving { residual });
    }
    let min = choi_matrix(map).min_eigenvalue();
    Ok(CpVerdict {
        is_cp: min >= -tolerance,
        min_choi_eigenvalue: Some(min),
        min_kossakowski_eigenvalue: None,
        tolerance,
    })
}

/// Kossakowski criterion: the generated semigroup is completely positive iff
/// the coefficient matrix is positive semidefinite.
pub fn kossakowski_cp_test(c: &KossakowskiMatrix, tolerance: f64) -> CpVerdict {
    let min = c.min_eigenvalue();
    CpVerdict {
        is_cp: min >= -tolerance,
        min_choi_eigenvalue: None,
        min_kossakowski_eigenvalue: Some(min),
        tolerance,
    }
}

/// Kraus form γ[rho] = Σ_i K_i rho K_i†. The Choi eigenvalues are absorbed
/// into the operators (K_i = √λ_i · M_i) and also listed as weights.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
    weights: Vec<f64>,
}

impl KrausSet {
    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let n = rho.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.operators {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// Rebuilds the superoperator Σ_i conj(K_i) ⊗ K_i.
    pub fn to_superoperator(&self) -> SuperoperatorMatrix {
        let n = self.operators[0].nrows();
        let mut m = ComplexMatrix::zeros(n * n, n * n);
        for k in &self.operators {
            m += kron(&k.map(|x| x.conj()), k);
        }
        SuperoperatorMatrix::from_matrix(n, m).expect("square Kraus operators")
    }

    /// Max entrywise |Σ K_i† K_i - I|; zero for trace-preserving maps.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.operators[0].nrows();
        let mut sum = ComplexMatrix::zeros(n, n);
        for k in &self.operators {
            sum += k.adjoint() * k;
        }
        max_abs(&(sum - ComplexMatrix::identity(n, n)))
    }
}

/// Kraus operators from the scaled eigenvectors of the Choi matrix.
///
/// Eigenvalues below max(tolerance, 1e-12 · λ_max) are truncated; a Choi
/// matrix with an eigenvalue below -tolerance is rejected as not CP.
pub fn kraus_decomposition(choi: &ChoiMatrix, tolerance: f64) -> Result<KrausSet> {
    let n = choi.n();
    let sym = (choi.matrix() + choi.matrix().adjoint()).scale(0.5);
    let eig = hermitian_eigensystem(&sym)?;
    let min = eig.eigenvalues[0];
    if min < -tolerance {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: min,
        });
    }
    let largest = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = tolerance.max(1e-12 * largest);
    let mut operators = Vec::new();
    let mut weights = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= cutoff {
            continue;
        }
        let column = eig.eigenvectors.column(k);
        // Eigenvector component (a·n + i) becomes operator entry (a, i).
        let op = ComplexMatrix::from_fn(n, n, |a, i| column[a * n + i] * real(lambda.sqrt()));
        operators.push(op);
        weights.push(lambda);
    }
    Ok(KrausSet { operators, weights })
}

/// Verdict of the necessary condition C1 + C2 >= 0 for positivity of the
/// factorized semigroup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumConditionVerdict {
    pub holds: bool,
    pub min_eigenvalue: f64,
}

pub fn kossakowski_sum_condition(
    c1: &KossakowskiMatrix,
    c2: &KossakowskiMatrix,
    tolerance: f64,
) -> Result<SumConditionVerdict> {
    let sum = c1.add(c2)?;
    let min_eigenvalue = sum.min_eigenvalue();
    Ok(SumConditionVerdict {
        holds: min_eigenvalue >= -tolerance,
        min_eigenvalue,
    })
}

/// Constructive witness extracted from a violated C1 + C2 >= 0 condition:
/// orthogonal bipartite vectors |φ>, |ψ> with
/// <φ| (L1 ⊗ I + I ⊗ L2)[|ψ><ψ|] |φ> = <ξ|(C1 + C2)|ξ> < 0,
/// certifying that the factorized semigroup loses positivity at short times.
#[derive(Debug, Clone)]
pub struct BreakdownWitness {
    /// Unit eigenvector of C1 + C2 for its most negative eigenvalue.
    pub xi: ComplexVector,
    /// W = Σ_i ξ_i F_i (traceless).
    pub w: ComplexMatrix,
    /// Coefficient matrix of |φ>: φ_(jk) = Phi[j, k].
    pub phi: ComplexMatrix,
    /// Coefficient matrix of |ψ>, fixed by Ψ† Φ = Wᵀ.
    pub psi: ComplexMatrix,
    /// <φ| L[|ψ><ψ|] |φ> evaluated through the tensor-sum generator.
    pub l_value: f64,
    /// <ξ|(C1 + C2)|ξ>, the value the construction must reproduce.
    pub quadratic_form: f64,
    /// Seed used for the similarity-transform draw.
    pub seed: u64,
}

impl BreakdownWitness {
    /// |φ> flattened over the product basis |j> ⊗ |k>.
    pub fn phi_vector(&self) -> ComplexVector {
        flatten_coefficients(&self.phi)
    }

    pub fn psi_vector(&self) -> ComplexVector {
        flatten_coefficients(&self.psi)
    }

    pub fn normalized_phi(&self) -> ComplexVector {
        let v = self.phi_vector();
        let n = v.norm();
        v / real(n)
    }

    pub fn normalized_psi(&self) -> ComplexVector {
        let v = self.psi_vector();
        let n = v.norm();
        v / real(n)
    }

    /// <φ̂| exp(Lt)[|ψ̂><ψ̂|] |φ̂> for the normalized vectors; negative for
    /// small t > 0 whenever the witness is valid.
    pub fn short_time_check(
        &self,
        g1: &GeneratorSpec,
        g2: &GeneratorSpec,
        t: f64,
    ) -> Result<f64> {
        let l = crate::generators::tensor_sum_generator(g1, g2)?;
        let map = crate::dynamics::evolution_map(&l, t)?;
        let psi = self.normalized_psi();
        let rho_t = map.apply(&numerics::projector(&psi))?;
        let phi = self.normalized_phi();
        Ok((phi.adjoint() * &rho_t * &phi)[(0, 0)].re)
    }
}

fn flatten_coefficients(m: &ComplexMatrix) -> ComplexVector {
    let n = m.nrows();
    ComplexVector::from_fn(n * n, |idx, _| m[(idx / n, idx % n)])
}

/// Builds the breakdown witness for a pair of generators expressed in the same
/// traceless basis. Fails if C1 + C2 >= -1e-10 (no witness exists) or if no
/// well-conditioned similarity transform is found.
pub fn breakdown_witness(g1: &GeneratorSpec, g2: &GeneratorSpec, seed: u64) -> Result<BreakdownWitness> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch {
            expected: g1.n(),
            actual: g2.n(),
        });
    }
    for (a, b) in g1.basis().matrices().iter().zip(g2.basis().matrices()) {
        if max_abs(&(a - b)) > Tolerances::default().hermiticity {
            return Err(Error::InvalidArgument(
                "generators must share the same traceless basis".into(),
            ));
        }
    }
    let threshold = -Tolerances::default().positivity_slack;
    let sum = g1.kossakowski().add(g2.kossakowski())?;
    let eig = hermitian_eigensystem(sum.matrix())?;
    let min = eig.eigenvalues[0];
    if min >= threshold {
        return Err(Error::NoWitness {
            min_eigenvalue: min,
            threshold,
        });
    }
    let xi: ComplexVector = eig.eigenvectors.column(0).into_owned();
    let w = g1.basis().combine(&xi)?;
    let phi = similarity_to_transpose(&w, seed)?;
    // Ψ† Φ = Wᵀ  ⇒  Ψ = (Φ⁻¹)† · conj(W).
    let n = w.nrows();
    let phi_inv = phi
        .clone()
        .lu()
        .solve(&ComplexMatrix::identity(n, n))
        .ok_or_else(|| Error::InvalidArgument("similarity transform is singular".into()))?;
    let psi = phi_inv.adjoint() * w.map(|x| x.conj());

    let quadratic_form = (xi.adjoint() * sum.matrix() * &xi)[(0, 0)].re;
    let l = crate::generators::tensor_sum_generator(g1, g2)?;
    let phi_vec = flatten_coefficients(&phi);
    let psi_vec = flatten_coefficients(&psi);
    let image = l.apply(&numerics::projector(&psi_vec))?;
    let l_complex = (phi_vec.adjoint() * &image * &phi_vec)[(0, 0)];
    let witness = BreakdownWitness {
        xi,
        w,
        phi,
        psi,
        l_value: l_complex.re,
        quadratic_form,
        seed,
    };
    debug_assert!(l_complex.im.abs() < 1e-9);
    Ok(witness)
}

/// Finds an invertible Φ with Φ⁻¹ W Φ = Wᵀ by solving the linear system
/// W Φ - Φ Wᵀ = 0 for its solution space and drawing random combinations of
/// the basis solutions until one has condition number below 1e8.
fn similarity_to_transpose(w: &ComplexMatrix, seed: u64) -> Result<ComplexMatrix> {
    let n = w.nrows();
    let id = ComplexMatrix::identity(n, n);
    // Column stacking: vec(WΦ) = (I ⊗ W) vec(Φ), vec(ΦWᵀ) = (W ⊗ I) vec(Φ).
    let a = kron(&id, w) - kron(w, &id);
    let scale = one_norm(&a).max(1.0);
    // Null space from a rank-revealing QR of A†: the trailing columns of Q
    // are an orthonormal basis of ker(A) at full precision.
    let qr = a.adjoint().col_piv_qr();
    let q = qr.q();
    let r = qr.r();
    let rank = (0..n * n)
        .take_while(|&k| r[(k, k)].norm() > 1e-12 * scale)
        .count();
    let null_basis: Vec<ComplexMatrix> = (rank..n * n)
        .map(|k| {
            unstack_columns(&q.column(k).into_owned(), n, n).expect("column has length n²")
        })
        .collect();
    if null_basis.is_empty() {
        return Err(Error::InvalidArgument(
            "similarity system has empty solution space".into(),
        ));
    }
    for attempt in 0..64 {
        let mut rng = sample_rng(seed, 0xF1 + attempt);
        let mut phi = ComplexMatrix::zeros(n, n);
        for b in &null_basis {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            phi += b.map(|x| x * c);
        }
        let gram_phi = phi.adjoint() * &phi;
        let sv = hermitian_eigensystem(&gram_phi)?.eigenvalues;
        let smallest = sv[0].max(0.0).sqrt();
        let largest = sv[sv.len() - 1].max(0.0).sqrt();
        if smallest > 0.0 && largest / smallest < 1e8 {
            debug_assert!(max_abs(&(w * &phi - &phi * w.transpose())) < 1e-9 * scale);
            return Ok(phi);
        }
    }
    Err(Error::InvalidArgument(
        "no well-conditioned similarity transform found in 64 draws".into(),
    ))
}

/// Largest ε0 in [0, eps_max] with C + εΓ >= -1e-10 for all ε in [0, ε0].
///
/// The minimum eigenvalue is concave in ε, so the feasible set is an interval
/// containing 0 and bisection applies. The unperturbed C must be positive
/// semidefinite.
pub fn perturbation_cp_interval(
    c: &KossakowskiMatrix,
    gamma: &ComplexMatrix,
    eps_max: f64,
) -> Result<f64> {
    numerics::require_hermitian(gamma, Tolerances::default().hermiticity)?;
    if gamma.nrows() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            actual: gamma.nrows(),
        });
    }
    if eps_max <= 0.0 || eps_max.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "eps_max must be positive, got {eps_max}"
        )));
    }
    let slack = Tolerances::default().positivity_slack;
    let base_min = c.min_eigenvalue();
    if base_min < -slack {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: base_min,
        });
    }
    let feasible = |eps: f64| -> f64 {
        min_eigenvalue(&(c.matrix() + gamma.scale(eps))).expect("Hermitian combination")
    };
    if feasible(eps_max) >= -slack {
        return Ok(eps_max);
    }
    let mut lo = 0.0;
    let mut hi = eps_max;
    while hi - lo > 1e-9 * eps_max.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) >= -slack {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
