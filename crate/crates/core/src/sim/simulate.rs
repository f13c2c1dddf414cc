use super::linalg::{conj, kron, psd_sqrt, singular_values, trace, CMatrix};
use super::state::{MixedState, PureState, SchmidtSpectrum};
use super::{Povm, SimError, OPERATOR_TOL};
use crate::table::{BehaviorTable, Shape};

/// Probabilities below this are treated as zero when conditioning.
const MARGINAL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SharedState {
    Pure(PureState),
    Mixed(MixedState),
}

impl SharedState {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            SharedState::Pure(s) => s.dims(),
            SharedState::Mixed(s) => s.dims(),
        }
    }
}

/// A state together with one POVM per setting for each party.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    state: SharedState,
    povms_a: Vec<Povm>,
    povms_b: Vec<Povm>,
}

impl ExperimentSpec {
    pub fn new(
        state: SharedState,
        povms_a: Vec<Povm>,
        povms_b: Vec<Povm>,
    ) -> Result<Self, SimError> {
        let (da, db) = state.dims();
        check_family("Alice", &povms_a, da)?;
        check_family("Bob", &povms_b, db)?;
        Ok(Self {
            state,
            povms_a,
            povms_b,
        })
    }

    pub fn pure(
        state: PureState,
        povms_a: Vec<Povm>,
        povms_b: Vec<Povm>,
    ) -> Result<Self, SimError> {
        Self::new(SharedState::Pure(state), povms_a, povms_b)
    }

    pub fn mixed(
        state: MixedState,
        povms_a: Vec<Povm>,
        povms_b: Vec<Povm>,
    ) -> Result<Self, SimError> {
        Self::new(SharedState::Mixed(state), povms_a, povms_b)
    }

    pub fn state(&self) -> &SharedState {
        &self.state
    }

    pub fn povms_a(&self) -> &[Povm] {
        &self.povms_a
    }

    pub fn povms_b(&self) -> &[Povm] {
        &self.povms_b
    }

    pub fn shape(&self) -> Shape {
        Shape::new(
            self.povms_a.len(),
            self.povms_b.len(),
            self.povms_a[0].len(),
            self.povms_b[0].len(),
        )
        .expect("families checked non-empty")
    }

    pub fn into_parts(self) -> (SharedState, Vec<Povm>, Vec<Povm>) {
        (self.state, self.povms_a, self.povms_b)
    }
}

fn check_family(who: &str, povms: &[Povm], dim: usize) -> Result<(), SimError> {
    let first = povms
        .first()
        .ok_or_else(|| SimError::DimensionMismatch(format!("{who} has no measurement settings")))?;
    for (k, p) in povms.iter().enumerate() {
        if p.dim() != dim {
            return Err(SimError::DimensionMismatch(format!(
                "{who}'s setting {k} acts on dimension {}, local dimension is {dim}",
                p.dim()
            )));
        }
        if p.len() != first.len() {
            return Err(SimError::DimensionMismatch(format!(
                "{who}'s setting {k} has {} outcomes, setting 0 has {}",
                p.len(),
                first.len()
            )));
        }
    }
    Ok(())
}

/// Correlation table of an experiment.
///
/// Pure states are evaluated twice, once as a full tensor-product expectation
/// and once with the trace formula in the Schmidt bases; mixed states are
/// evaluated directly and through a purification. The two results must agree
/// within `1e-10`.
pub fn simulate(spec: &ExperimentSpec) -> Result<BehaviorTable, SimError> {
    match &spec.state {
        SharedState::Pure(s) => simulate_pure(s, &spec.povms_a, &spec.povms_b),
        SharedState::Mixed(s) => simulate_mixed(s, &spec.povms_a, &spec.povms_b),
    }
}

pub fn simulate_pure(state: &PureState, a: &[Povm], b: &[Povm]) -> Result<BehaviorTable, SimError> {
    let (da, db) = state.dims();
    check_family("Alice", a, da)?;
    check_family("Bob", b, db)?;
    let direct = tensor_values(state, a, b);
    let frame = SchmidtFrame::new(state);
    let via_trace = frame.values(a, b);
    agree(&direct, &via_trace)?;
    to_table(a, b, &direct)
}

pub fn simulate_mixed(
    state: &MixedState,
    a: &[Povm],
    b: &[Povm],
) -> Result<BehaviorTable, SimError> {
    let (da, db) = state.dims();
    check_family("Alice", a, da)?;
    check_family("Bob", b, db)?;
    let rho = state.matrix();
    let mut direct = Vec::with_capacity(a.len() * b.len() * a[0].len() * b[0].len());
    for pa in a {
        for pb in b {
            for m in pa.effects() {
                for n in pb.effects() {
                    direct.push(trace(&(rho * kron(m, n))).re);
                }
            }
        }
    }
    // Bob also holds the purifying system; his effects become N ⊗ I.
    let purification = state.purify();
    let extended: Vec<Povm> = b
        .iter()
        .map(|p| p.extended(purification.ancilla_dim))
        .collect();
    let via_purification = SchmidtFrame::new(&purification.state).values(a, &extended);
    agree(&direct, &via_purification)?;
    to_table(a, b, &direct)
}

fn agree(first: &[f64], second: &[f64]) -> Result<(), SimError> {
    let dev = first
        .iter()
        .zip(second)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    if dev > OPERATOR_TOL {
        return Err(SimError::PathDisagreement(dev));
    }
    Ok(())
}

// Values are laid out in (x, y, a, b) order.
fn to_table(a: &[Povm], b: &[Povm], values: &[f64]) -> Result<BehaviorTable, SimError> {
    let shape = Shape::new(a.len(), b.len(), a[0].len(), b[0].len())?;
    let mut it = values.iter();
    Ok(BehaviorTable::from_f64_fn(shape, |_| {
        it.next()
            .copied()
            .expect("one value per entry")
            .clamp(0.0, 1.0)
    })?)
}

fn tensor_values(state: &PureState, a: &[Povm], b: &[Povm]) -> Vec<f64> {
    let psi = state.vector();
    let mut out = Vec::new();
    for pa in a {
        for pb in b {
            for m in pa.effects() {
                for n in pb.effects() {
                    let op = kron(m, n);
                    out.push((psi.adjoint() * &op * &psi)[(0, 0)].re);
                }
            }
        }
    }
    out
}

/// `p(ab|xy) = ⟨ψ| M_xa ⊗ N_yb |ψ⟩` with the joint operator built explicitly.
pub fn tensor_expectation_table(
    state: &PureState,
    a: &[Povm],
    b: &[Povm],
) -> Result<BehaviorTable, SimError> {
    let (da, db) = state.dims();
    check_family("Alice", a, da)?;
    check_family("Bob", b, db)?;
    to_table(a, b, &tensor_values(state, a, b))
}

/// `p(ab|xy) = Tr(M'_xa D N'*_yb D)` with the effects rotated into the Schmidt bases.
pub fn schmidt_trace_table(
    state: &PureState,
    a: &[Povm],
    b: &[Povm],
) -> Result<BehaviorTable, SimError> {
    let (da, db) = state.dims();
    check_family("Alice", a, da)?;
    check_family("Bob", b, db)?;
    to_table(a, b, &SchmidtFrame::new(state).values(a, b))
}

/// Largest entrywise difference between the two pure-state evaluation paths.
pub fn dual_path_deviation(state: &PureState, a: &[Povm], b: &[Povm]) -> Result<f64, SimError> {
    let (da, db) = state.dims();
    check_family("Alice", a, da)?;
    check_family("Bob", b, db)?;
    let direct = tensor_values(state, a, b);
    let via_trace = SchmidtFrame::new(state).values(a, b);
    Ok(direct
        .iter()
        .zip(&via_trace)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max))
}

/// A pure state viewed in its Schmidt bases, `|ψ⟩ = Σ_k √λ_k |u_k⟩|w_k⟩`.
#[derive(Debug, Clone)]
pub struct SchmidtFrame {
    pub spectrum: SchmidtSpectrum,
    /// Columns are Alice's Schmidt vectors `u_k`.
    pub alice: CMatrix,
    /// Columns are Bob's Schmidt vectors `w_k`.
    pub bob: CMatrix,
    pub d: CMatrix,
}

impl SchmidtFrame {
    pub fn new(state: &PureState) -> Self {
        let dec = state.schmidt_decomposition();
        let d = dec.spectrum.d_matrix();
        Self {
            spectrum: dec.spectrum,
            alice: dec.alice,
            bob: dec.bob,
            d,
        }
    }

    /// `U† M U`.
    pub fn rotate_a(&self, m: &CMatrix) -> CMatrix {
        self.alice.adjoint() * m * &self.alice
    }

    /// `W† N W`.
    pub fn rotate_b(&self, n: &CMatrix) -> CMatrix {
        self.bob.adjoint() * n * &self.bob
    }

    /// `Tr(M' D N'* D)` for effects given in the computational bases.
    pub fn probability(&self, m: &CMatrix, n: &CMatrix) -> f64 {
        let mr = self.rotate_a(m);
        let nr = conj(&self.rotate_b(n));
        trace(&(mr * &self.d * nr * &self.d)).re
    }

    /// `ρ_yb` for Bob's effect `n` given in his computational basis.
    pub fn rho_yb(&self, n: &CMatrix) -> Result<CMatrix, SimError> {
        let nr = self.rotate_b(n);
        let p_b = trace(&(&self.d * conj(&nr) * &self.d)).re;
        rho_yb(&self.spectrum, &nr, p_b)
    }

    fn values(&self, a: &[Povm], b: &[Povm]) -> Vec<f64> {
        let ra: Vec<Vec<CMatrix>> = a
            .iter()
            .map(|p| p.effects().iter().map(|m| self.rotate_a(m)).collect())
            .collect();
        let rb: Vec<Vec<CMatrix>> = b
            .iter()
            .map(|p| {
                p.effects()
                    .iter()
                    .map(|n| &self.d * conj(&self.rotate_b(n)) * &self.d)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for ma in &ra {
            for nb in &rb {
                for m in ma {
                    for n in nb {
                        out.push(trace(&(m * n)).re);
                    }
                }
            }
        }
        out
    }
}

/// `ρ_yb = D N*_yb D / p(b|y)` for an effect already expressed in the Schmidt basis.
pub fn rho_yb(spectrum: &SchmidtSpectrum, effect: &CMatrix, p_b: f64) -> Result<CMatrix, SimError> {
    let r = spectrum.len();
    if effect.shape() != (r, r) {
        return Err(SimError::DimensionMismatch(format!(
            "effect is {}x{}, Schmidt spectrum has {r} coefficients",
            effect.nrows(),
            effect.ncols()
        )));
    }
    if p_b.is_nan() || p_b <= MARGINAL_FLOOR {
        return Err(SimError::ZeroMarginal(p_b));
    }
    let d = spectrum.d_matrix();
    Ok((&d * conj(effect) * &d).unscale(p_b))
}

fn same_dims(rho: &CMatrix, sigma: &CMatrix) -> Result<(), SimError> {
    if rho.shape() != sigma.shape() || rho.nrows() != rho.ncols() {
        return Err(SimError::DimensionMismatch(format!(
            "states are {}x{} and {}x{}",
            rho.nrows(),
            rho.ncols(),
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    Ok(())
}

/// `F(ρ, σ) = ‖√ρ √σ‖₁`, clamped to `[0, 1]`.
pub fn fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64, SimError> {
    same_dims(rho, sigma)?;
    let prod = psd_sqrt(rho) * psd_sqrt(sigma);
    Ok(singular_values(&prod).iter().sum::<f64>().clamp(0.0, 1.0))
}

/// `Tr(ρσ)`, clamped to `[0, 1]`.
pub fn trace_overlap(rho: &CMatrix, sigma: &CMatrix) -> Result<f64, SimError> {
    same_dims(rho, sigma)?;
    Ok(trace(&(rho * sigma)).re.clamp(0.0, 1.0))
}
