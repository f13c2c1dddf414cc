//! The optimal CHSH correlation pins the state down to a pair of qubits with
//! maximally mixed marginals.

use bellcert::certify::{dim_lower_bound, entropy_lower_bound, purity_bound};
use bellcert::scenarios;

fn main() {
    let chsh = scenarios::chsh();
    let pb = purity_bound(&chsh.table).expect("complete table");
    println!("purity bound:          {pb:.6}");
    println!(
        "dimension lower bound: {:?}",
        dim_lower_bound(&chsh.table).unwrap()
    );
    println!(
        "entropy lower bound:   {:?}",
        entropy_lower_bound(&chsh.table).unwrap()
    );

    // the bundled realization reproduces the table
    let sim = bellcert::sim::simulate(chsh.realization.as_ref().unwrap()).unwrap();
    let worst = chsh
        .table
        .shape()
        .indices()
        .map(|i| (sim.get(i).unwrap().value() - chsh.table.get(i).unwrap().value()).abs())
        .fold(0.0, f64::max);
    println!("realization max deviation: {worst:e}");
}
