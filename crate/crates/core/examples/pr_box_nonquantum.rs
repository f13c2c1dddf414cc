use bellcert::certify::DimBound;
use bellcert::table::Level;
use bellcert::Tolerances;
use bellcert::{certify, CertifyOptions};

fn main() {
    let pr = bellcert::scenarios::pr_box().table;
    let clean = pr
        .validate(Level::NoSignaling, &Tolerances::default())
        .is_clean();
    println!("no-signaling: {clean}");
    let report = certify(&pr, &CertifyOptions::default());
    println!(
        "f1 = {:?} at Bob settings {:?}",
        report.f1.unwrap(),
        report.f1_settings.unwrap()
    );
    assert_eq!(report.dim_lower_bound, Some(DimBound::NoFiniteDim));
    println!("no finite-dimensional quantum realization");
}
