//! Only five entries of a 3x3 table are known, yet they already rule out every
//! maximally entangled state below local dimension 7.

use bellcert::certify::{exclude_maximally_entangled, exclude_two_qubit_range};
use bellcert::table::to_json;
use bellcert::tol::DEFAULT_EPSILON_P;

fn main() {
    let t = bellcert::scenarios::partial_exclusion_example().table;
    print!("{}", to_json(&t));
    for d in 2..=8 {
        let excluded = exclude_maximally_entangled(&t, d, DEFAULT_EPSILON_P);
        println!("d = {d}: {}", if excluded { "excluded" } else { "allowed" });
    }
    if let Some(iv) = exclude_two_qubit_range(&t, DEFAULT_EPSILON_P) {
        println!(
            "sqrt(a)|00> + sqrt(1-a)|11> excluded for a in ({}, {})",
            iv.lower_exact.unwrap(),
            iv.upper_exact.unwrap()
        );
    }
}
