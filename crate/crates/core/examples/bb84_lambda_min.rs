//! BB84 correlations bound the smallest Schmidt coefficient by exactly 1/2.

use bellcert::certify::lambda_min_bound;
use bellcert::tol::DEFAULT_EPSILON_P;

fn main() {
    let bb84 = bellcert::scenarios::bb84();
    let bound = lambda_min_bound(&bb84.table, DEFAULT_EPSILON_P);
    println!("lambda_min <= {:?}", bound.value());
    if let Some(exact) = bound.exact() {
        println!("exact: {exact}");
    }
}
