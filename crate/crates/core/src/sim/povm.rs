use super::linalg::{
    c, eigh, hermitian_part, hermiticity_defect, identity, kron, max_abs_diff, min_eigenvalue,
    CMatrix,
};
use super::{SimError, OPERATOR_TOL};

/// A finite POVM `{M_0, …, M_{n-1}}` on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<CMatrix>,
}

impl Povm {
    /// Validate and store the effects. Small anti-Hermitian drift is removed.
    pub fn new(effects: Vec<CMatrix>) -> Result<Self, SimError> {
        let first = effects
            .first()
            .ok_or_else(|| SimError::InvalidPovm("no effects".into()))?;
        let d = first.nrows();
        if d == 0 {
            return Err(SimError::InvalidPovm("effects have dimension 0".into()));
        }
        let mut clean = Vec::with_capacity(effects.len());
        for (i, m) in effects.iter().enumerate() {
            if m.shape() != (d, d) {
                return Err(SimError::InvalidPovm(format!(
                    "effect {i} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(SimError::InvalidPovm(format!(
                    "effect {i} has non-finite entries"
                )));
            }
            let defect = hermiticity_defect(m);
            if defect > OPERATOR_TOL {
                return Err(SimError::InvalidPovm(format!(
                    "effect {i} not Hermitian (deviation {defect:e})"
                )));
            }
            let h = hermitian_part(m);
            if min_eigenvalue(&h) < -OPERATOR_TOL {
                return Err(SimError::InvalidPovm(format!(
                    "effect {i} not positive semidefinite"
                )));
            }
            clean.push(h);
        }
        let sum = clean.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
        let dev = max_abs_diff(&sum, &identity(d));
        if dev > OPERATOR_TOL {
            return Err(SimError::InvalidPovm(format!(
                "effects do not sum to the identity (deviation {dev:e})"
            )));
        }
        Ok(Self { effects: clean })
    }

    /// Projectors onto the columns of a unitary, one outcome per column.
    pub fn projective(basis: &CMatrix) -> Result<Self, SimError> {
        let effects = (0..basis.ncols())
            .map(|k| {
                let v = basis.column(k);
                v * v.adjoint()
            })
            .collect();
        Self::new(effects)
    }

    /// Computational-basis measurement on `C^d`.
    pub fn computational(d: usize) -> Self {
        Self::projective(&identity(d)).expect("identity basis")
    }

    /// `{(I + O)/2, (I − O)/2}` for a ±1-valued observable `O`; outcome 0 is `+1`.
    pub fn binary_from_observable(obs: &CMatrix) -> Result<Self, SimError> {
        let d = obs.nrows();
        let id = identity(d);
        Self::new(vec![(&id + obs).scale(0.5), (&id - obs).scale(0.5)])
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(d: usize) -> Self {
        Self {
            effects: vec![identity(d)],
        }
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn effect(&self, k: usize) -> &CMatrix {
        &self.effects[k]
    }

    /// `{M_k ⊗ I_r}`, the same measurement acting on the first factor of `C^d ⊗ C^r`.
    pub fn extended(&self, r: usize) -> Self {
        let id = identity(r);
        Self {
            effects: self.effects.iter().map(|m| kron(m, &id)).collect(),
        }
    }

    /// `{V† M_k V}` for an isometry `V`.
    pub fn conjugated_by(&self, v: &CMatrix) -> Result<Self, SimError> {
        if v.nrows() != self.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "isometry has {} rows, POVM acts on dimension {}",
                v.nrows(),
                self.dim()
            )));
        }
        Self::new(self.effects.iter().map(|m| v.adjoint() * m * v).collect())
    }

    /// Whether every effect is a projector, within `tol`.
    pub fn is_projective(&self, tol: f64) -> bool {
        self.effects
            .iter()
            .all(|m| max_abs_diff(&(m * m), m) <= tol)
    }

    /// Eigenvalues of each effect, descending.
    pub fn spectra(&self) -> Vec<Vec<f64>> {
        self.effects.iter().map(|m| eigh(m).0).collect()
    }
}

/// Pauli matrices, used by the built-in realizations and tests.
pub mod pauli {
    use super::*;

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }
}
