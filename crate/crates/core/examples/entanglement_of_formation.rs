use bellcert::certify::ef_lower_bound;

fn main() {
    let chsh = bellcert::scenarios::chsh().table;
    println!(
        "{:>8}  {:>10}  {:>10}  {:>10}",
        "eta", "pure", "correction", "E_f >="
    );
    for eta in [1e-12, 1e-9, 1e-6, 1e-4, 1e-2, 0.1, 0.3] {
        let ef = ef_lower_bound(&chsh, eta, 2).unwrap();
        println!(
            "{eta:>8.0e}  {:>10.6}  {:>10.6}  {:>10.6}",
            ef.pure_entropy_bound, ef.continuity_correction, ef.value
        );
    }
}
