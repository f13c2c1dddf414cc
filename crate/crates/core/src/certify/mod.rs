//! Device-independent bounds computed from a correlation table alone.
//!
//! Two families of bounds are provided:
//!
//! * **Overlap bounds** [`f1`] / [`f2`]. For any pure state `Σ_k √λ_k |kk⟩`
//!   that produces the table, `Σ_k λ_k² ≤ min(f1, f2)`, where
//!
//!   ```text
//!   f1 = min_{y1,y2} Σ_{b1,b2} min_x ( Σ_a √(p(a b1|x y1) · p(a b2|x y2)) )²
//!   ```
//!
//!   and `f2` is the same expression with the parties exchanged. The same
//!   number bounds the purity `Tr ρ_A²` of Alice's reduced state when the
//!   shared state is mixed. Dimension and Rényi-2 entropy bounds follow.
//!
//! * **Smallest-coefficient bound** [`lambda_min_bound`]. The least nonzero
//!   Schmidt coefficient satisfies `λ_min ≤ min p(a|x) p(b|y) / p(ab|xy)`,
//!   which also works on partial tables and yields state-exclusion verdicts.

mod lambda_min;
mod report;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::table::{BehaviorTable, Index, Level, Shape};
use crate::Tolerances;

pub use lambda_min::{
    exclude_maximally_entangled, exclude_two_qubit_range, lambda_min_bound, ExcludedInterval,
    LambdaMinBound, RatioBound,
};
pub(crate) use report::format_interval;
pub use report::{certify, sig6, BoundsReport, CertifyOptions, EfQuery, EntropyBound};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertifyError {
    #[error("table is partial (first missing entry at {0}); this bound needs every entry")]
    PartialTable(Index),
    #[error("table fails basic validation ({count} violation(s)); first: {first}")]
    InvalidTable { count: usize, first: String },
    #[error("purity bound is zero: no finite-dimensional quantum state produces this table")]
    InfiniteBound,
    #[error("eta must lie in the open interval (0, 1/2), got {0}")]
    EtaOutOfRange(f64),
    #[error("local dimension must be at least 1")]
    InvalidDimension,
}

/// The overlap bound over Bob's setting pairs, viewing Alice's measurements
/// as tests of Bob-conditioned states.
pub fn f1(table: &BehaviorTable) -> Result<f64, CertifyError> {
    ensure_certifiable(table, &Tolerances::default())?;
    Ok(overlap_f1(table).value)
}

/// [`f1`] with the parties exchanged; equal to `f1(&table.swap_parties())`.
pub fn f2(table: &BehaviorTable) -> Result<f64, CertifyError> {
    ensure_certifiable(table, &Tolerances::default())?;
    Ok(overlap_f2(table).value)
}

/// Upper bound `min(f1, f2)` on `Σ λ_i²`, equivalently on the purity of
/// either party's reduced state.
pub fn purity_bound(table: &BehaviorTable) -> Result<f64, CertifyError> {
    ensure_certifiable(table, &Tolerances::default())?;
    Ok(overlap_f1(table).value.min(overlap_f2(table).value))
}

/// Lower bound on the local Hilbert-space dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimBound {
    Finite(u64),
    /// The purity bound vanishes; no finite-dimensional state can produce the table.
    NoFiniteDim,
}

pub fn dim_lower_bound(table: &BehaviorTable) -> Result<DimBound, CertifyError> {
    let tol = Tolerances::default();
    purity_bound(table).map(|pb| dim_from_purity(pb, &tol))
}

/// `−log2(purity_bound)`: a lower bound in bits on both the Rényi-2 and the
/// von Neumann entropy of Alice's reduced state.
pub fn entropy_lower_bound(table: &BehaviorTable) -> Result<f64, CertifyError> {
    let tol = Tolerances::default();
    let pb = purity_bound(table)?;
    entropy_from_purity(pb, &tol).ok_or(CertifyError::InfiniteBound)
}

pub(crate) fn dim_from_purity(pb: f64, tol: &Tolerances) -> DimBound {
    if pb <= tol.zero {
        return DimBound::NoFiniteDim;
    }
    DimBound::Finite(((1.0 / pb) - tol.ceil).ceil().max(1.0) as u64)
}

pub(crate) fn entropy_from_purity(pb: f64, tol: &Tolerances) -> Option<f64> {
    (pb > tol.zero).then(|| (-pb.log2()).max(0.0))
}

/// Components of the entanglement-of-formation lower bound for a mixed state
/// assumed to satisfy `Tr ρ² > 1 − eta` on local dimension `dim`.
///
/// These hypotheses are supplied by the caller; they are not certified by
/// the correlation data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfBound {
    pub eta: f64,
    pub dim: usize,
    /// Lower bound on the largest eigenvalue of `ρ`.
    pub a1_lower: f64,
    /// Upper bound on the reduced purity of the dominant eigenvector.
    pub purity_transfer: f64,
    /// Entanglement-entropy lower bound for the dominant eigenvector, in bits.
    pub pure_entropy_bound: f64,
    /// Continuity penalty `√(2η) (9 log2 d − log2 2η)`.
    pub continuity_correction: f64,
    /// `max(0, pure_entropy_bound − continuity_correction)`.
    pub value: f64,
}

pub fn ef_lower_bound(
    table: &BehaviorTable,
    eta: f64,
    dim: usize,
) -> Result<EfBound, CertifyError> {
    let pb = purity_bound(table)?;
    ef_from_purity(pb, eta, dim, &Tolerances::default())
}

pub(crate) fn ef_from_purity(
    purity_bound: f64,
    eta: f64,
    dim: usize,
    tol: &Tolerances,
) -> Result<EfBound, CertifyError> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(CertifyError::EtaOutOfRange(eta));
    }
    if dim == 0 {
        return Err(CertifyError::InvalidDimension);
    }
    if purity_bound <= tol.zero {
        return Err(CertifyError::InfiniteBound);
    }
    let a1_lower = 0.5 + (0.5 * (0.5 - eta)).sqrt();
    let purity_transfer = purity_bound / (a1_lower * a1_lower);
    let pure_entropy_bound = -purity_transfer.log2();
    let continuity_correction =
        (2.0 * eta).sqrt() * (9.0 * (dim as f64).log2() - (2.0 * eta).log2());
    let value = (pure_entropy_bound - continuity_correction).max(0.0);
    Ok(EfBound {
        eta,
        dim,
        a1_lower,
        purity_transfer,
        pure_entropy_bound,
        continuity_correction,
        value,
    })
}

/// Value of an overlap bound and the setting pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Overlap {
    pub value: f64,
    pub settings: [usize; 2],
}

pub(crate) fn ensure_certifiable(
    table: &BehaviorTable,
    tol: &Tolerances,
) -> Result<(), CertifyError> {
    if let Some(idx) = table.first_missing() {
        return Err(CertifyError::PartialTable(idx));
    }
    let report = table.validate(Level::Basic, tol);
    if let Some(first) = report.violations.first() {
        return Err(CertifyError::InvalidTable {
            count: report.violations.len(),
            first: format!("{first:?}"),
        });
    }
    Ok(())
}

/// Entrywise square roots of a complete table, in table order.
fn sqrt_entries(table: &BehaviorTable) -> Vec<f64> {
    table
        .dense_values()
        .into_iter()
        .map(|v| v.unwrap_or(0.0).max(0.0).sqrt())
        .collect()
}

pub(crate) fn overlap_f1(table: &BehaviorTable) -> Overlap {
    let shape = table.shape();
    let sq = sqrt_entries(table);
    let at = move |x: usize, y: usize, a: usize, b: usize| {
        sq[((x * shape.n_y + y) * shape.n_a + a) * shape.n_b + b]
    };
    overlap(shape, at)
}

pub(crate) fn overlap_f2(table: &BehaviorTable) -> Overlap {
    let shape = table.shape();
    let sq = sqrt_entries(table);
    // Index the swapped table q(x,y,a,b) = p(y,x,b,a) without materializing it.
    let at = move |x: usize, y: usize, a: usize, b: usize| {
        sq[((y * shape.n_y + x) * shape.n_a + b) * shape.n_b + a]
    };
    overlap(shape.swapped(), at)
}

/// Evaluate the `f1` expression for a table of square roots in the given shape.
/// Loops run in a fixed order so results are bitwise reproducible.
fn overlap(shape: Shape, sqrt_p: impl Fn(usize, usize, usize, usize) -> f64) -> Overlap {
    let mut best = Overlap {
        value: f64::INFINITY,
        settings: [0, 0],
    };
    for y1 in 0..shape.n_y {
        for y2 in 0..shape.n_y {
            let mut total = 0.0;
            for b1 in 0..shape.n_b {
                for b2 in 0..shape.n_b {
                    let mut smallest = f64::INFINITY;
                    for x in 0..shape.n_x {
                        let inner: f64 = (0..shape.n_a)
                            .map(|a| sqrt_p(x, y1, a, b1) * sqrt_p(x, y2, a, b2))
                            .sum();
                        smallest = smallest.min(inner * inner);
                    }
                    total += smallest;
                }
            }
            if total < best.value {
                best = Overlap {
                    value: total,
                    settings: [y1, y2],
                };
            }
        }
    }
    best.value = best.value.min(1.0);
    best
}

impl Serialize for DimBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DimBound::Finite(d) => s.serialize_u64(*d),
            DimBound::NoFiniteDim => s.serialize_str("no_finite_dim"),
        }
    }
}

impl<'de> Deserialize<'de> for DimBound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Flag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(DimBound::Finite(n)),
            Raw::Flag(f) if f == "no_finite_dim" => Ok(DimBound::NoFiniteDim),
            Raw::Flag(f) => Err(serde::de::Error::custom(format!(
                "unknown dimension flag {f:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Prob;

    fn chsh() -> BehaviorTable {
        let s = 2f64.sqrt();
        BehaviorTable::from_f64_fn(Shape::new(2, 2, 2, 2).unwrap(), |i| {
            if (i.a ^ i.b) == i.x * i.y {
                (2.0 + s) / 8.0
            } else {
                (2.0 - s) / 8.0
            }
        })
        .unwrap()
    }

    fn pr_box() -> BehaviorTable {
        BehaviorTable::from_fn(Shape::new(2, 2, 2, 2).unwrap(), |i| {
            if (i.a ^ i.b) == i.x * i.y {
                Prob::frac(1, 2)
            } else {
                Prob::zero()
            }
        })
        .unwrap()
    }

    fn deterministic(n: usize) -> BehaviorTable {
        BehaviorTable::from_f64_fn(Shape::new(n, n, n, n).unwrap(), |i| {
            if i.a == 0 && i.b == 0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap()
    }

    /// Direct transcription of the overlap expression with explicit nested
    /// minima, used as an independent reference for the evaluator.
    fn brute_force_f1(t: &BehaviorTable) -> f64 {
        let s = t.shape();
        let mut per_pair = Vec::new();
        for y1 in 0..s.n_y {
            for y2 in 0..s.n_y {
                let mut sum = 0.0;
                for b1 in 0..s.n_b {
                    for b2 in 0..s.n_b {
                        let terms: Vec<f64> = (0..s.n_x)
                            .map(|x| {
                                let c: f64 = (0..s.n_a)
                                    .map(|a| {
                                        (t.p(x, y1, a, b1).unwrap() * t.p(x, y2, a, b2).unwrap())
                                            .sqrt()
                                    })
                                    .sum();
                                c * c
                            })
                            .collect();
                        sum += terms.iter().cloned().fold(f64::INFINITY, f64::min);
                    }
                }
                per_pair.push(sum);
            }
        }
        per_pair.into_iter().fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn chsh_bounds_are_tight() {
        let t = chsh();
        assert!((f1(&t).unwrap() - 0.5).abs() < 1e-12);
        assert!((f2(&t).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(dim_lower_bound(&t).unwrap(), DimBound::Finite(2));
        assert!((entropy_lower_bound(&t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pr_box_has_vanishing_overlap() {
        let t = pr_box();
        assert_eq!(brute_force_f1(&t), 0.0);
        assert_eq!(f1(&t).unwrap(), 0.0);
        // y1 = 0, y2 = 1 already forces zero
        assert_eq!(overlap_f1(&t).settings, [0, 1]);
        assert_eq!(dim_lower_bound(&t).unwrap(), DimBound::NoFiniteDim);
        assert_eq!(entropy_lower_bound(&t), Err(CertifyError::InfiniteBound));
    }

    #[test]
    fn deterministic_table_certifies_nothing() {
        let t = deterministic(3);
        assert_eq!(f1(&t).unwrap(), 1.0);
        assert_eq!(entropy_lower_bound(&t).unwrap(), 0.0);
        assert_eq!(dim_lower_bound(&t).unwrap(), DimBound::Finite(1));
    }

    #[test]
    fn f2_is_f1_of_swapped_table_bitwise() {
        let shape = Shape::new(2, 3, 3, 2).unwrap();
        // a normalized but otherwise irregular table
        let t = BehaviorTable::from_f64_fn(shape, |i| {
            let w = [1.0, 2.0, 3.0, 5.0, 7.0, 11.0][i.a * 2 + i.b] + (i.x + 2 * i.y) as f64;
            let z: f64 = (0..6)
                .map(|k| [1.0, 2.0, 3.0, 5.0, 7.0, 11.0][k] + (i.x + 2 * i.y) as f64)
                .sum();
            w / z
        })
        .unwrap();
        let via_swap = f1(&t.swap_parties()).unwrap();
        assert_eq!(f2(&t).unwrap().to_bits(), via_swap.to_bits());
        assert!((f1(&t).unwrap() - brute_force_f1(&t)).abs() < 1e-15);
    }

    #[test]
    fn partial_and_invalid_tables_are_rejected() {
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 2, 2).unwrap());
        b.set_f64(Index::new(0, 0, 0, 0), 1.0).unwrap();
        assert!(matches!(f1(&b.build()), Err(CertifyError::PartialTable(_))));

        let t = BehaviorTable::from_f64_fn(Shape::new(1, 1, 2, 1).unwrap(), |_| 0.7).unwrap();
        assert!(matches!(f1(&t), Err(CertifyError::InvalidTable { .. })));
    }

    #[test]
    fn dim_ceiling_slack() {
        let tol = Tolerances::default();
        assert_eq!(
            dim_from_purity(0.25 * (1.0 - 1e-12), &tol),
            DimBound::Finite(4)
        );
        assert_eq!(dim_from_purity(0.3, &tol), DimBound::Finite(4));
        assert_eq!(dim_from_purity(1e-13, &tol), DimBound::NoFiniteDim);
    }

    #[test]
    fn ef_components_match_reference_evaluation() {
        // reference values computed at 40 significant digits
        let tol = Tolerances::default();
        let e = ef_from_purity(0.5, 0.2, 2, &tol).unwrap();
        assert!((e.a1_lower - 0.887_298_334_620_741_7).abs() < 1e-14);
        assert!((e.purity_transfer - 0.635_083_268_962_915_6).abs() < 1e-14);
        assert!((e.pure_entropy_bound - 0.654_982_331_594_721_2).abs() < 1e-13);
        assert!((e.continuity_correction - 6.528_160_524_865_333).abs() < 1e-12);
        assert_eq!(e.value, 0.0);

        let e = ef_from_purity(0.5, 1e-6, 2, &tol).unwrap();
        assert!((e.value - 0.960_497_354_214_784_8).abs() < 1e-9);
        let e = ef_from_purity(0.25, 1e-6, 4, &tol).unwrap();
        assert!((e.value - 1.947_769_432_153_427).abs() < 1e-9);
    }

    #[test]
    fn ef_rejects_bad_hypotheses() {
        let tol = Tolerances::default();
        for eta in [0.0, 0.5, -0.1, 0.7, f64::NAN] {
            assert!(matches!(
                ef_from_purity(0.5, eta, 2, &tol),
                Err(CertifyError::EtaOutOfRange(_))
            ));
        }
        assert_eq!(
            ef_from_purity(0.5, 0.1, 0, &tol),
            Err(CertifyError::InvalidDimension)
        );
        assert_eq!(
            ef_from_purity(0.0, 0.1, 2, &tol),
            Err(CertifyError::InfiniteBound)
        );
    }

    #[test]
    fn dim_bound_json_forms() {
        assert_eq!(serde_json::to_string(&DimBound::Finite(4)).unwrap(), "4");
        assert_eq!(
            serde_json::to_string(&DimBound::NoFiniteDim).unwrap(),
            "\"no_finite_dim\""
        );
        let back: DimBound = serde_json::from_str("\"no_finite_dim\"").unwrap();
        assert_eq!(back, DimBound::NoFiniteDim);
    }
}
