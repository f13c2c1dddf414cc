//! Draw a random experiment, simulate it, and compare the true Schmidt
//! spectrum with what the certifier can infer from the table alone.

use bellcert::certify::{lambda_min_bound, purity_bound};
use bellcert::sim::{dual_path_deviation, random_instance, simulate, SharedState};
use bellcert::tol::DEFAULT_EPSILON_P;

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let spec = random_instance(3, 3, 3, 3, 3, seed);
    let table = simulate(&spec).unwrap();
    let SharedState::Pure(psi) = spec.state() else {
        unreachable!()
    };
    let schmidt = psi.schmidt();
    println!("Schmidt coefficients: {:?}", schmidt.values());
    println!(
        "sum of squares {:.6} <= purity bound {:.6}",
        schmidt.purity(),
        purity_bound(&table).unwrap()
    );
    let lm = lambda_min_bound(&table, DEFAULT_EPSILON_P).value().unwrap();
    println!(
        "lambda_min {:.6} <= {lm:.6}",
        schmidt.values().last().unwrap()
    );
    let dev = dual_path_deviation(psi, spec.povms_a(), spec.povms_b()).unwrap();
    println!("tensor vs trace formula: {dev:e}");
}
