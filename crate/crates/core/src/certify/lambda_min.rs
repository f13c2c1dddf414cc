use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::table::{format_ratio, ratio_to_f64, BehaviorTable, Index, Prob};
use crate::tol::Tolerances;

/// Upper bound on the least nonzero Schmidt coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaMinBound {
    /// No tuple has a positive joint probability with computable marginals.
    Vacuous,
    Bound(RatioBound),
}

/// `p(a|x) p(b|y) / p(ab|xy)` at the minimizing tuple, clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioBound {
    pub value: f64,
    /// Present when every entry of the table is an exact rational.
    pub exact: Option<BigRational>,
    pub at: Index,
}

impl LambdaMinBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            LambdaMinBound::Vacuous => None,
            LambdaMinBound::Bound(r) => Some(r.value),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            LambdaMinBound::Vacuous => None,
            LambdaMinBound::Bound(r) => r.exact.as_ref(),
        }
    }

    /// True when the bound rules out every maximally entangled state of
    /// local dimension up to `d`, i.e. `bound < 1/d − tol_zero`.
    pub fn excludes_maximally_entangled(&self, d: usize, tol_zero: f64) -> bool {
        match self.value() {
            Some(t) if d > 0 => t < 1.0 / d as f64 - tol_zero,
            _ => false,
        }
    }

    /// Open interval of `a` for which `√a|00⟩ + √(1−a)|11⟩` cannot produce the table.
    pub fn two_qubit_exclusion(&self) -> Option<ExcludedInterval> {
        let LambdaMinBound::Bound(r) = self else {
            return None;
        };
        if r.value >= 0.5 {
            return None;
        }
        if let Some(e) = &r.exact {
            if *e >= BigRational::new(1.into(), 2.into()) {
                return None;
            }
        }
        Some(ExcludedInterval {
            lower: r.value,
            upper: 1.0 - r.value,
            lower_exact: r.exact.as_ref().map(format_ratio),
            upper_exact: r
                .exact
                .as_ref()
                .map(|e| format_ratio(&(BigRational::one() - e))),
        })
    }
}

/// An open interval `(lower, upper)` of excluded two-qubit Schmidt weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_exact: Option<String>,
    pub upper_exact: Option<String>,
}

/// Minimize `p(a|x) p(b|y) / p(ab|xy)` over tuples with `p(ab|xy) > epsilon_p`
/// whose marginals are computable. Marginals sum over the tuple's own
/// opposite setting. Works on partial tables.
pub fn lambda_min_bound(table: &BehaviorTable, epsilon_p: f64) -> LambdaMinBound {
    let shape = table.shape();
    let exact_path = table.is_exact();

    // p(a|x) summed at y, and p(b|y) summed at x
    let mut marg_a = vec![None; shape.n_x * shape.n_y * shape.n_a];
    let mut marg_b = vec![None; shape.n_x * shape.n_y * shape.n_b];
    for x in 0..shape.n_x {
        for y in 0..shape.n_y {
            for a in 0..shape.n_a {
                marg_a[(x * shape.n_y + y) * shape.n_a + a] = table.marginal_a_entry(x, a, y).ok();
            }
            for b in 0..shape.n_b {
                marg_b[(x * shape.n_y + y) * shape.n_b + b] = table.marginal_b_entry(y, b, x).ok();
            }
        }
    }

    let mut best: Option<RatioBound> = None;
    for (at, p) in table.present() {
        if p.value() <= epsilon_p {
            continue;
        }
        let (Some(pa), Some(pb)) = (
            &marg_a[(at.x * shape.n_y + at.y) * shape.n_a + at.a],
            &marg_b[(at.x * shape.n_y + at.y) * shape.n_b + at.b],
        ) else {
            continue;
        };
        let candidate = if exact_path {
            exact_ratio(pa, pb, p, at)
        } else {
            None
        }
        .unwrap_or_else(|| RatioBound {
            value: pa.value() * pb.value() / p.value(),
            exact: None,
            at,
        });
        let better = match &best {
            None => true,
            Some(b) => match (&candidate.exact, &b.exact) {
                (Some(c), Some(e)) => c < e,
                _ => candidate.value < b.value,
            },
        };
        if better {
            best = Some(candidate);
        }
    }

    match best {
        None => LambdaMinBound::Vacuous,
        Some(r) => LambdaMinBound::Bound(clamp_unit(r)),
    }
}

fn exact_ratio(pa: &Prob, pb: &Prob, p: &Prob, at: Index) -> Option<RatioBound> {
    let (pa, pb, p) = (pa.exact()?, pb.exact()?, p.exact()?);
    if p.is_zero() {
        return None;
    }
    let r = pa * pb / p;
    Some(RatioBound {
        value: ratio_to_f64(&r),
        exact: Some(r),
        at,
    })
}

fn clamp_unit(mut r: RatioBound) -> RatioBound {
    if let Some(e) = &r.exact {
        let clamped = if *e > BigRational::one() {
            BigRational::one()
        } else if *e < BigRational::zero() {
            BigRational::zero()
        } else {
            e.clone()
        };
        r.value = ratio_to_f64(&clamped);
        r.exact = Some(clamped);
    } else {
        r.value = r.value.clamp(0.0, 1.0);
    }
    r
}

/// Whether no maximally entangled state of local dimension up to `d` can
/// produce the table, using the default zero tolerance.
pub fn exclude_maximally_entangled(table: &BehaviorTable, d: usize, epsilon_p: f64) -> bool {
    lambda_min_bound(table, epsilon_p).excludes_maximally_entangled(d, Tolerances::default().zero)
}

/// Excluded range of `a` for two-qubit states `√a|00⟩ + √(1−a)|11⟩`, or
/// `None` when the bound is at least 1/2 or vacuous.
pub fn exclude_two_qubit_range(table: &BehaviorTable, epsilon_p: f64) -> Option<ExcludedInterval> {
    lambda_min_bound(table, epsilon_p).two_qubit_exclusion()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Shape;
    use crate::tol::DEFAULT_EPSILON_P;

    fn partial_3x3() -> BehaviorTable {
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 3, 3).unwrap());
        b.set(Index::new(0, 0, 0, 0), Prob::frac(1, 10)).unwrap();
        for (a, bb) in [(0, 1), (0, 2), (1, 0), (2, 0)] {
            b.set(Index::new(0, 0, a, bb), Prob::frac(1, 100)).unwrap();
        }
        b.build()
    }

    fn bb84() -> BehaviorTable {
        BehaviorTable::from_fn(Shape::new(2, 2, 2, 2).unwrap(), |i| {
            if i.x != i.y {
                Prob::frac(1, 4)
            } else if i.a == i.b {
                Prob::frac(1, 2)
            } else {
                Prob::zero()
            }
        })
        .unwrap()
    }

    #[test]
    fn partial_example_is_exact() {
        let t = partial_3x3();
        let LambdaMinBound::Bound(r) = lambda_min_bound(&t, DEFAULT_EPSILON_P) else {
            panic!("expected a bound");
        };
        assert_eq!(r.exact, Some(BigRational::new(18.into(), 125.into())));
        assert_eq!(r.at, Index::new(0, 0, 0, 0));
        assert_eq!(r.value, 0.144);
    }

    #[test]
    fn partial_example_exclusions() {
        let t = partial_3x3();
        let eps = DEFAULT_EPSILON_P;
        for d in 2..=6 {
            assert!(exclude_maximally_entangled(&t, d, eps), "d = {d}");
        }
        assert!(!exclude_maximally_entangled(&t, 7, eps));
        let iv = exclude_two_qubit_range(&t, eps).unwrap();
        assert_eq!(iv.lower_exact.as_deref(), Some("18/125"));
        assert_eq!(iv.upper_exact.as_deref(), Some("107/125"));
    }

    #[test]
    fn bb84_is_at_the_boundary() {
        let t = bb84();
        let b = lambda_min_bound(&t, DEFAULT_EPSILON_P);
        assert_eq!(b.exact(), Some(&BigRational::new(1.into(), 2.into())));
        assert!(b.two_qubit_exclusion().is_none());
        assert!(!b.excludes_maximally_entangled(2, 1e-12));
    }

    #[test]
    fn product_of_marginals_gives_one() {
        let pa = [Prob::frac(1, 3), Prob::frac(2, 3)];
        let pb = [Prob::frac(1, 4), Prob::frac(3, 4)];
        let t = BehaviorTable::from_fn(Shape::new(1, 1, 2, 2).unwrap(), |i| {
            Prob::from_ratio(pa[i.a].exact().unwrap() * pb[i.b].exact().unwrap())
        })
        .unwrap();
        let b = lambda_min_bound(&t, DEFAULT_EPSILON_P);
        assert_eq!(b.exact(), Some(&BigRational::one()));
        assert!(b.two_qubit_exclusion().is_none());
        assert!(!b.excludes_maximally_entangled(2, 1e-12));
    }

    #[test]
    fn minimum_ratio_and_clamping() {
        let t = BehaviorTable::from_fn(Shape::new(1, 1, 2, 2).unwrap(), |i| match (i.a, i.b) {
            (0, 0) => Prob::frac(1, 10),
            (1, 1) => Prob::frac(1, 10),
            _ => Prob::frac(4, 10),
        })
        .unwrap();
        // every ratio is 0.25 / 0.1 or 0.25 / 0.4, so the minimum is 5/8
        assert_eq!(
            lambda_min_bound(&t, 0.0).exact(),
            Some(&BigRational::new(5.into(), 8.into()))
        );
        // partial block: only the (0, 0) tuple has both marginals, with ratio 2.5
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 2, 2).unwrap());
        b.set(Index::new(0, 0, 0, 0), Prob::frac(1, 10)).unwrap();
        b.set(Index::new(0, 0, 0, 1), Prob::frac(4, 10)).unwrap();
        b.set(Index::new(0, 0, 1, 0), Prob::frac(4, 10)).unwrap();
        assert_eq!(
            lambda_min_bound(&b.build(), 0.0).exact(),
            Some(&BigRational::one())
        );
    }

    #[test]
    fn empty_or_unsupported_tables_are_vacuous() {
        let b = BehaviorTable::builder(Shape::new(2, 2, 2, 2).unwrap()).build();
        assert_eq!(
            lambda_min_bound(&b, DEFAULT_EPSILON_P),
            LambdaMinBound::Vacuous
        );
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 2, 2).unwrap());
        b.set_f64(Index::new(0, 0, 0, 0), 0.5).unwrap();
        assert_eq!(
            lambda_min_bound(&b.build(), DEFAULT_EPSILON_P),
            LambdaMinBound::Vacuous
        );
    }

    #[test]
    fn float_path_matches_exact_path() {
        let exact = partial_3x3();
        let mut b = BehaviorTable::builder(exact.shape());
        for (idx, p) in exact.present() {
            b.set_f64(idx, p.value()).unwrap();
        }
        let float = b.build();
        let v = lambda_min_bound(&float, DEFAULT_EPSILON_P).value().unwrap();
        assert!((v - 0.144).abs() < 1e-15);
        assert!(lambda_min_bound(&float, DEFAULT_EPSILON_P)
            .exact()
            .is_none());
    }

    #[test]
    fn epsilon_skips_tiny_entries() {
        let t = BehaviorTable::from_f64_fn(Shape::new(1, 1, 2, 2).unwrap(), |i| match (i.a, i.b) {
            (0, 1) => 1e-13,
            (1, 0) => 0.0,
            (0, 0) => 0.5 - 1e-13,
            _ => 0.5,
        })
        .unwrap();
        let skipped = lambda_min_bound(&t, DEFAULT_EPSILON_P);
        assert_eq!(skipped.value(), Some(0.5));
        assert_eq!(
            skipped,
            LambdaMinBound::Bound(RatioBound {
                value: 0.5,
                exact: None,
                at: Index::new(0, 0, 0, 0)
            })
        );
        // zero entries are never divided by, even with no threshold
        assert_eq!(lambda_min_bound(&t, 0.0).value(), Some(0.5));
    }
}
