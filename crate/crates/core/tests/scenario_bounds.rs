use bellcert::certify::{DimBound, LambdaMinBound};
use bellcert::scenarios::{self, Expected, IDS};
use bellcert::{certify, CertifyOptions};

#[test]
fn annotated_bounds_are_reproduced() {
    for id in IDS {
        let s = scenarios::by_id(id).unwrap();
        let report = certify(&s.table, &CertifyOptions::default());
        for e in &s.expected {
            let (float, exact) = match e.quantity {
                "purity_bound" => (report.purity_bound, None),
                "dim_lower_bound" => match report.dim_lower_bound {
                    Some(DimBound::Finite(d)) => (Some(d as f64), None),
                    Some(DimBound::NoFiniteDim) => {
                        assert_eq!(e.value, Expected::NoFiniteDim, "{id}");
                        continue;
                    }
                    None => (None, None),
                },
                "lambda_min_bound" => (
                    report.lambda_min_bound,
                    report.lambda_min_bound_exact.clone(),
                ),
                "two_qubit_lower" => {
                    let iv = report.two_qubit_exclusion.as_ref().unwrap();
                    (Some(iv.lower), iv.lower_exact.clone())
                }
                "two_qubit_upper" => {
                    let iv = report.two_qubit_exclusion.as_ref().unwrap();
                    (Some(iv.upper), iv.upper_exact.clone())
                }
                other => panic!("unknown quantity {other}"),
            };
            match &e.value {
                Expected::Float(v) => {
                    assert!((float.unwrap() - v).abs() <= 1e-9, "{id} {}", e.quantity)
                }
                Expected::Exact(r) => assert_eq!(exact.as_deref(), Some(*r), "{id} {}", e.quantity),
                Expected::NoFiniteDim => panic!("{id}: expected no finite dimension"),
            }
        }
    }
}

#[test]
fn chsh_lambda_min_is_two_minus_root_two() {
    let t = scenarios::chsh().table;
    let LambdaMinBound::Bound(r) = bellcert::certify::lambda_min_bound(&t, 1e-12) else {
        panic!()
    };
    assert!((r.value - 0.5857864376269049).abs() < 1e-15);
}
