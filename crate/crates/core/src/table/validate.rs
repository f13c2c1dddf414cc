use serde::{Deserialize, Serialize};

use super::{BehaviorTable, Index, Party};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    /// Range and normalization only.
    #[default]
    Basic,
    /// Also require each marginal to be independent of the other party's setting.
    NoSignaling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Entry outside `[0, 1]`.
    Range { at: Index, value: f64 },
    /// `Σ_{a,b} p(ab|xy)` differs from 1 (complete block) or exceeds 1 (partial block).
    Normalization {
        x: usize,
        y: usize,
        sum: f64,
        complete: bool,
    },
    /// A marginal of `party` for `setting`/`outcome` changes between two of
    /// the other party's settings.
    NoSignaling {
        party: Party,
        setting: usize,
        outcome: usize,
        reference_other: usize,
        other: usize,
        deviation: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub level: Level,
    pub complete: bool,
    pub tolerances: Tolerances,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(super) fn validate(t: &BehaviorTable, level: Level, tol: &Tolerances) -> ValidationReport {
    let shape = t.shape();
    let mut violations = Vec::new();

    for (at, p) in t.present() {
        let value = p.value();
        if !(0.0..=1.0).contains(&value) {
            violations.push(Violation::Range { at, value });
        }
    }

    for x in 0..shape.n_x {
        for y in 0..shape.n_y {
            let mut sum = 0.0;
            let mut complete = true;
            for a in 0..shape.n_a {
                for b in 0..shape.n_b {
                    match t.p(x, y, a, b) {
                        Some(v) => sum += v,
                        None => complete = false,
                    }
                }
            }
            let bad = if complete {
                (sum - 1.0).abs() > tol.norm
            } else {
                sum > 1.0 + tol.norm
            };
            if bad {
                violations.push(Violation::Normalization {
                    x,
                    y,
                    sum,
                    complete,
                });
            }
        }
    }

    if level == Level::NoSignaling {
        for x in 0..shape.n_x {
            for a in 0..shape.n_a {
                let sums = (0..shape.n_y)
                    .filter_map(|y| t.marginal_a_entry(x, a, y).ok().map(|p| (y, p.value())));
                no_signaling_spread(Party::Alice, x, a, sums, tol, &mut violations);
            }
        }
        for y in 0..shape.n_y {
            for b in 0..shape.n_b {
                let sums = (0..shape.n_x)
                    .filter_map(|x| t.marginal_b_entry(y, b, x).ok().map(|p| (x, p.value())));
                no_signaling_spread(Party::Bob, y, b, sums, tol, &mut violations);
            }
        }
    }

    ValidationReport {
        level,
        complete: t.is_complete(),
        tolerances: *tol,
        violations,
    }
}

fn no_signaling_spread(
    party: Party,
    setting: usize,
    outcome: usize,
    mut sums: impl Iterator<Item = (usize, f64)>,
    tol: &Tolerances,
    out: &mut Vec<Violation>,
) {
    let Some((reference_other, reference)) = sums.next() else {
        return;
    };
    for (other, v) in sums {
        let deviation = (v - reference).abs();
        if deviation > tol.no_signaling {
            out.push(Violation::NoSignaling {
                party,
                setting,
                outcome,
                reference_other,
                other,
                deviation,
            });
        }
    }
}
