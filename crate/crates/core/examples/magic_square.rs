use bellcert::{certify, CertifyOptions};

fn main() {
    let ms = bellcert::scenarios::magic_square();
    let report = certify(&ms.table, &CertifyOptions::default());
    print!("{}", report.to_text());
}
