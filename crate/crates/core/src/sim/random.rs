use rand::{Rng as _, SeedableRng};
use rand_distr::StandardNormal;

use super::linalg::{c, identity, psd_inverse_sqrt, CMatrix};
use super::simulate::ExperimentSpec;
use super::state::{MixedState, PureState};
use super::{Povm, OPERATOR_TOL};

/// Generator used for every seeded construction.
pub type Rng = rand_chacha::ChaCha8Rng;

const MAX_ATTEMPTS: usize = 100;

fn ginibre(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Haar-random pure state on `C^{d_a} ⊗ C^{d_b}`.
pub fn random_pure_state(rng: &mut Rng, d_a: usize, d_b: usize) -> PureState {
    loop {
        if let Ok(s) = PureState::normalized(ginibre(rng, d_a, d_b)) {
            return s;
        }
    }
}

/// Random `d × d` state with rank at most `rank` (a normalized Wishart matrix).
pub fn random_density(rng: &mut Rng, d: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, d, rank.max(1));
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    w.unscale(tr)
}

/// Random POVM with `outcomes` effects on `C^d`.
///
/// Each effect starts as `A A†` for a Gaussian `d × k` matrix `A` and the
/// family is then renormalized by `S^{-1/2}` with `S` the sum. Draws whose
/// sum is nearly singular are repeated.
pub fn random_povm(rng: &mut Rng, d: usize, outcomes: usize) -> Povm {
    if outcomes <= 1 {
        return Povm::trivial(d);
    }
    // enough total rank that S is invertible
    let k = d.div_ceil(outcomes).max(1);
    for _ in 0..MAX_ATTEMPTS {
        let g: Vec<CMatrix> = (0..outcomes)
            .map(|_| {
                let a = ginibre(rng, d, k);
                &a * a.adjoint()
            })
            .collect();
        let s = g.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
        let Some(inv) = psd_inverse_sqrt(&s, OPERATOR_TOL) else {
            continue;
        };
        let effects = g.iter().map(|m| &inv * m * &inv).collect();
        if let Ok(p) = Povm::new(effects) {
            return p;
        }
    }
    // Not reached in practice; fall back to a valid completely noisy measurement.
    let share = identity(d).unscale(outcomes as f64);
    Povm::new(vec![share; outcomes]).expect("uniform POVM")
}

/// Random pure-state experiment with generic (full) Schmidt rank.
pub fn random_instance(
    d: usize,
    n_x: usize,
    n_y: usize,
    n_a: usize,
    n_b: usize,
    seed: u64,
) -> ExperimentSpec {
    random_instance_with_rank(d, d, n_x, n_y, n_a, n_b, seed)
}

/// Random pure-state experiment on `C^d ⊗ C^d` whose Schmidt rank is at most `rank`.
pub fn random_instance_with_rank(
    d: usize,
    rank: usize,
    n_x: usize,
    n_y: usize,
    n_a: usize,
    n_b: usize,
    seed: u64,
) -> ExperimentSpec {
    let d = d.max(1);
    let rank = rank.clamp(1, d);
    let mut rng = Rng::seed_from_u64(seed);
    let left = ginibre(&mut rng, d, rank);
    let right = ginibre(&mut rng, rank, d);
    let state =
        PureState::normalized(left * right).unwrap_or_else(|_| PureState::maximally_entangled(d));
    let a = (0..n_x.max(1))
        .map(|_| random_povm(&mut rng, d, n_a.max(1)))
        .collect();
    let b = (0..n_y.max(1))
        .map(|_| random_povm(&mut rng, d, n_b.max(1)))
        .collect();
    ExperimentSpec::pure(state, a, b).expect("dimensions agree by construction")
}

/// Random mixed-state experiment on `C^d ⊗ C^d` with `rank(ρ) ≤ rank`.
pub fn random_mixed_instance(
    d: usize,
    rank: usize,
    n_x: usize,
    n_y: usize,
    n_a: usize,
    n_b: usize,
    seed: u64,
) -> ExperimentSpec {
    let d = d.max(1);
    let mut rng = Rng::seed_from_u64(seed);
    let rho = random_density(&mut rng, d * d, rank.clamp(1, d * d));
    let state = MixedState::new(rho, d, d).expect("Wishart matrix is a valid state");
    let a = (0..n_x.max(1))
        .map(|_| random_povm(&mut rng, d, n_a.max(1)))
        .collect();
    let b = (0..n_y.max(1))
        .map(|_| random_povm(&mut rng, d, n_b.max(1)))
        .collect();
    ExperimentSpec::mixed(state, a, b).expect("dimensions agree by construction")
}
