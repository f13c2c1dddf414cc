use super::linalg::{
    c, eigh, hermitian_part, hermiticity_defect, identity, kron, min_eigenvalue, partial_trace_a,
    partial_trace_b, singular_values, trace, CMatrix, CVector,
};
use super::{Povm, SimError, OPERATOR_TOL, STATE_NORM_TOL};

/// Bipartite pure state `Σ_ij C_ij |i⟩|j⟩` stored as its amplitude matrix `C`
/// (rows index Alice, columns index Bob).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CMatrix,
}

/// Schmidt coefficients in descending order, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
}

/// `|ψ⟩ = Σ_k √λ_k |u_k⟩|w_k⟩` with `u_k` the columns of `alice` and `w_k`
/// the columns of `bob`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub spectrum: SchmidtSpectrum,
    pub alice: CMatrix,
    pub bob: CMatrix,
}

impl PureState {
    pub fn new(amplitudes: CMatrix) -> Result<Self, SimError> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(SimError::NotNormalized(norm));
        }
        if amplitudes.is_empty() {
            return Err(SimError::InvalidState("empty amplitude matrix".into()));
        }
        Ok(Self { amplitudes })
    }

    /// Rescale to unit norm.
    pub fn normalized(amplitudes: CMatrix) -> Result<Self, SimError> {
        let norm = amplitudes.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(SimError::NotNormalized(norm));
        }
        Self::new(amplitudes.unscale(norm))
    }

    /// `Σ_k |kk⟩ / √d`.
    pub fn maximally_entangled(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        Self {
            amplitudes: identity(d).scale(s),
        }
    }

    /// `Σ_k √λ_k |kk⟩` for the given weights (normalized to sum 1).
    pub fn from_schmidt(weights: &[f64]) -> Result<Self, SimError> {
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(SimError::InvalidState(
                "Schmidt weights must be nonnegative".into(),
            ));
        }
        let d = weights.len();
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                c(weights[i].sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        Self::normalized(m)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.amplitudes.shape()
    }

    pub fn amplitudes(&self) -> &CMatrix {
        &self.amplitudes
    }

    /// State vector with joint index `i * d_b + j`.
    pub fn vector(&self) -> CVector {
        let (da, db) = self.dims();
        CVector::from_fn(da * db, |k, _| self.amplitudes[(k / db, k % db)])
    }

    pub fn schmidt(&self) -> SchmidtSpectrum {
        let values = singular_values(&self.amplitudes)
            .into_iter()
            .map(|s| s * s)
            .collect();
        SchmidtSpectrum { values }
    }

    /// Schmidt coefficients and local bases, `r = min(d_a, d_b)` terms.
    pub fn schmidt_decomposition(&self) -> SchmidtDecomposition {
        let svd = self.amplitudes.clone().svd(true, true);
        let u = svd.u.expect("left singular vectors requested");
        let v_t = svd.v_t.expect("right singular vectors requested");
        let r = svd.singular_values.len();
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        let (da, db) = self.dims();
        let values = order
            .iter()
            .map(|&k| svd.singular_values[k].powi(2))
            .collect();
        // C = Σ s_k u_k v_k†, so Bob's partner vector is conj(v_k) = row k of v_t, transposed.
        let alice = CMatrix::from_fn(da, r, |i, k| u[(i, order[k])]);
        let bob = CMatrix::from_fn(db, r, |j, k| v_t[(order[k], j)]);
        SchmidtDecomposition {
            spectrum: SchmidtSpectrum { values },
            alice,
            bob,
        }
    }

    /// `ρ_A = Tr_B |ψ⟩⟨ψ| = C C†`.
    pub fn reduced_a(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// `ρ_B = Tr_A |ψ⟩⟨ψ| = Cᵀ C̄`.
    pub fn reduced_b(&self) -> CMatrix {
        self.amplitudes.transpose() * self.amplitudes.map(|z| z.conj())
    }

    pub fn density(&self) -> MixedState {
        let v = self.vector();
        let (da, db) = self.dims();
        MixedState {
            rho: &v * v.adjoint(),
            d_a: da,
            d_b: db,
        }
    }

    /// `ψ ⊗ φ` with Alice holding both first factors and Bob both second factors.
    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amplitudes: kron(&self.amplitudes, &other.amplitudes),
        }
    }
}

impl SchmidtSpectrum {
    pub fn new(mut values: Vec<f64>) -> Result<Self, SimError> {
        if values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(SimError::InvalidState(
                "Schmidt coefficients must be nonnegative".into(),
            ));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > OPERATOR_TOL {
            return Err(SimError::NotNormalized(total));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ λ_i²`, the purity of either reduced state.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.iter().filter(|v| **v > tol).count()
    }

    /// Least coefficient above `tol`.
    pub fn min_nonzero(&self, tol: f64) -> Option<f64> {
        self.values.iter().copied().rfind(|v| *v > tol)
    }

    /// `D = diag(√λ_1, …, √λ_r)`.
    pub fn d_matrix(&self) -> CMatrix {
        let n = self.values.len();
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(self.values[i].max(0.0).sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }
}

/// Density matrix on `C^{d_a} ⊗ C^{d_b}` (joint index `i * d_b + j`).
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    rho: CMatrix,
    d_a: usize,
    d_b: usize,
}

/// `|Ψ⟩` on `A ⊗ (B ⊗ C)` with `Tr_C |Ψ⟩⟨Ψ| = ρ`.
#[derive(Debug, Clone)]
pub struct Purification {
    pub state: PureState,
    pub ancilla_dim: usize,
}

impl MixedState {
    pub fn new(rho: CMatrix, d_a: usize, d_b: usize) -> Result<Self, SimError> {
        let n = d_a * d_b;
        if rho.shape() != (n, n) || n == 0 {
            return Err(SimError::DimensionMismatch(format!(
                "density matrix is {}x{}, expected {n}x{n} for local dimensions {d_a} and {d_b}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let defect = hermiticity_defect(&rho);
        if defect > OPERATOR_TOL {
            return Err(SimError::InvalidState(format!(
                "density matrix not Hermitian (deviation {defect:e})"
            )));
        }
        let rho = hermitian_part(&rho);
        let tr = trace(&rho).re;
        if (tr - 1.0).abs() > OPERATOR_TOL {
            return Err(SimError::InvalidState(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let min = min_eigenvalue(&rho);
        if min < -OPERATOR_TOL {
            return Err(SimError::InvalidState(format!(
                "density matrix not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { rho, d_a, d_b })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn reduced_a(&self) -> CMatrix {
        partial_trace_b(&self.rho, self.d_a, self.d_b)
    }

    pub fn reduced_b(&self) -> CMatrix {
        partial_trace_a(&self.rho, self.d_a, self.d_b)
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// `|Ψ⟩ = Σ_k √e_k |φ_k⟩_{AB} |k⟩_C` over the nonzero eigenpairs of `ρ`,
    /// grouped as Alice vs. Bob-plus-ancilla.
    pub fn purify(&self) -> Purification {
        let (vals, vecs) = eigh(&self.rho);
        let kept: Vec<usize> = (0..vals.len())
            .filter(|&k| vals[k] > OPERATOR_TOL)
            .collect();
        let r = kept.len().max(1);
        let (da, db) = (self.d_a, self.d_b);
        let mut amp = CMatrix::zeros(da, db * r);
        for (slot, &k) in kept.iter().enumerate() {
            let w = vals[k].sqrt();
            for i in 0..da {
                for j in 0..db {
                    amp[(i, j * r + slot)] = vecs[(i * db + j, k)] * w;
                }
            }
        }
        Purification {
            state: PureState::normalized(amp).expect("purification of a unit-trace state"),
            ancilla_dim: r,
        }
    }
}

/// Map Bob's side onto the span of his Schmidt vectors.
///
/// Returns the compressed state `C V` on `C^{d_a} ⊗ C^r` with
/// `r = min(d_a, d_b)`, together with Bob's POVMs conjugated by the
/// isometry. The correlations are unchanged and Alice's reduced state is
/// untouched.
pub fn compress_bob(state: &PureState, bob: &[Povm]) -> Result<(PureState, Vec<Povm>), SimError> {
    let dec = state.schmidt_decomposition();
    let w = dec.bob;
    let compressed = state.amplitudes() * w.map(|z| z.conj());
    let povms = bob
        .iter()
        .map(|p| p.conjugated_by(&w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((PureState::normalized(compressed)?, povms))
}

/// Entropies in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Entropies {
    pub von_neumann: f64,
    /// `(order, S_order)` pairs in the requested order.
    pub renyi: Vec<(f64, f64)>,
}

/// `S = −Σ λ log2 λ`.
pub fn von_neumann_entropy(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| v * v.log2())
        .sum::<f64>()
}

/// `S_n = log2(Σ λ^n) / (1 − n)`; `n = 1` returns the von Neumann entropy.
pub fn renyi_entropy(spectrum: &[f64], order: f64) -> Result<f64, SimError> {
    if order <= 0.0 || !order.is_finite() {
        return Err(SimError::InvalidOrder(order));
    }
    if order == 1.0 {
        return Ok(von_neumann_entropy(spectrum));
    }
    let moment: f64 = spectrum
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| v.powf(order))
        .sum();
    Ok(moment.log2() / (1.0 - order))
}

pub fn entropies(spectrum: &[f64], orders: &[f64]) -> Result<Entropies, SimError> {
    let renyi = orders
        .iter()
        .map(|&n| renyi_entropy(spectrum, n).map(|s| (n, s)))
        .collect::<Result<_, _>>()?;
    Ok(Entropies {
        von_neumann: von_neumann_entropy(spectrum),
        renyi,
    })
}

/// Eigenvalues of a density matrix with drift below zero clipped.
pub(crate) fn density_spectrum(rho: &CMatrix) -> Vec<f64> {
    super::linalg::eigvalsh(rho)
        .into_iter()
        .map(|v| v.max(0.0))
        .collect()
}

impl MixedState {
    pub fn spectrum(&self) -> Vec<f64> {
        density_spectrum(&self.rho)
    }
}
