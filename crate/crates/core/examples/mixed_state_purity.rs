//! For a mixed state the purity bound applies to Alice's reduced state.

use bellcert::certify::purity_bound;
use bellcert::sim::{random_mixed_instance, simulate, SharedState};

fn main() {
    for (seed, rank) in [(1, 1), (2, 2), (3, 4), (4, 9)] {
        let spec = random_mixed_instance(3, rank, 3, 3, 2, 3, seed);
        let SharedState::Mixed(rho) = spec.state() else {
            unreachable!()
        };
        let rho_a = rho.reduced_a();
        let purity_a = (&rho_a * &rho_a).trace().re;
        let pb = purity_bound(&simulate(&spec).unwrap()).unwrap();
        println!("rank {rank}: Tr(rho_A^2) = {purity_a:.6} <= {pb:.6}");
    }
}
