//! Canonical correlation tables and their quantum realizations.
//!
//! Index conventions:
//!
//! * CHSH and the PR box use bits, `p(ab|xy)` depending on whether `a ⊕ b = xy`.
//! * Magic Square outcomes `0..8` encode the triple `(a_1, a_2, a_3)` with
//!   `a_1` the most significant bit; Alice's triples have even parity, Bob's
//!   odd, and the table is uniform on the pairs with `a_y = b_x`.
//! * BB84's `±1` outcomes are stored as `−1 → 0`, `+1 → 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::sim::{pauli, ExperimentSpec, Povm, PureState};
use crate::table::{BehaviorTable, Index, Prob, Shape};

pub const IDS: [&str; 5] = ["chsh", "magic-square", "bb84", "pr-box", "partial-3x3"];

/// The value a certifier quantity is expected to take on a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Float(f64),
    /// Exact rational, `"num/den"`.
    Exact(&'static str),
    NoFiniteDim,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedBound {
    pub quantity: &'static str,
    pub value: Expected,
    pub provenance: &'static str,
}

#[derive(Debug, Clone)]
pub struct NamedScenario {
    pub id: &'static str,
    pub table: BehaviorTable,
    pub realization: Option<ExperimentSpec>,
    pub expected: Vec<ExpectedBound>,
}

impl NamedScenario {
    pub fn expected(&self, quantity: &str) -> Option<&Expected> {
        self.expected
            .iter()
            .find(|e| e.quantity == quantity)
            .map(|e| &e.value)
    }
}

fn expect(quantity: &'static str, value: Expected, provenance: &'static str) -> ExpectedBound {
    ExpectedBound {
        quantity,
        value,
        provenance,
    }
}

pub fn by_id(id: &str) -> Option<NamedScenario> {
    match id {
        "chsh" => Some(chsh()),
        "magic-square" => Some(magic_square()),
        "bb84" => Some(bb84()),
        "pr-box" => Some(pr_box()),
        "partial-3x3" => Some(partial_exclusion_example()),
        _ => None,
    }
}

fn bits() -> Shape {
    Shape::new(2, 2, 2, 2).expect("nonzero")
}

fn epr_with(a: [&crate::sim::CMatrix; 2], b: [&crate::sim::CMatrix; 2]) -> ExperimentSpec {
    let obs = |o: &crate::sim::CMatrix| Povm::binary_from_observable(o).expect("±1 observable");
    ExperimentSpec::pure(
        PureState::maximally_entangled(2),
        a.iter().map(|o| obs(o)).collect(),
        b.iter().map(|o| obs(o)).collect(),
    )
    .expect("qubit measurements on a qubit pair")
}

/// Optimal CHSH correlation: `(2 ± √2)/8`, the larger value when `a ⊕ b = xy`.
pub fn chsh() -> NamedScenario {
    let hi = (2.0 + 2f64.sqrt()) / 8.0;
    let lo = (2.0 - 2f64.sqrt()) / 8.0;
    let table =
        BehaviorTable::from_f64_fn(bits(), |i| if (i.a ^ i.b) == (i.x & i.y) { hi } else { lo })
            .expect("valid entries");
    let (x, z) = (pauli::x(), pauli::z());
    let plus = (&z + &x).scale(FRAC_1_SQRT_2);
    let minus = (&z - &x).scale(FRAC_1_SQRT_2);
    NamedScenario {
        id: "chsh",
        table,
        realization: Some(epr_with([&z, &x], [&plus, &minus])),
        expected: vec![
            expect(
                "purity_bound",
                Expected::Float(0.5),
                "tight: the EPR pair has purity 1/2",
            ),
            expect(
                "dim_lower_bound",
                Expected::Float(2.0),
                "ceil(1/purity_bound)",
            ),
            expect(
                "lambda_min_bound",
                Expected::Float(2.0 - 2f64.sqrt()),
                "smallest p(a|x)p(b|y)/p(ab|xy) = (1/4)/((2+√2)/8)",
            ),
        ],
    }
}

fn parity(v: usize) -> usize {
    (v.count_ones() % 2) as usize
}

fn bit(v: usize, k: usize) -> usize {
    (v >> (2 - k)) & 1
}

/// Magic Square game correlation, `1/8` on each winning pair.
pub fn magic_square() -> NamedScenario {
    let shape = Shape::new(3, 3, 8, 8).expect("nonzero");
    let table = BehaviorTable::from_fn(shape, |i| {
        if parity(i.a) == 0 && parity(i.b) == 1 && bit(i.a, i.y) == bit(i.b, i.x) {
            Prob::frac(1, 8)
        } else {
            Prob::zero()
        }
    })
    .expect("valid entries");
    NamedScenario {
        id: "magic-square",
        table,
        realization: None,
        expected: vec![
            expect(
                "purity_bound",
                Expected::Float(0.25),
                "tight: two EPR pairs have purity 1/4",
            ),
            expect(
                "dim_lower_bound",
                Expected::Float(4.0),
                "ceil(1/purity_bound)",
            ),
        ],
    }
}

/// `p(ab|xy) = (1 + ab δ_xy)/4` over `±1` labels.
pub fn bb84() -> NamedScenario {
    let table = BehaviorTable::from_fn(bits(), |i| {
        if i.x != i.y {
            Prob::frac(1, 4)
        } else if i.a == i.b {
            Prob::frac(1, 2)
        } else {
            Prob::zero()
        }
    })
    .expect("valid entries");
    let (x, z) = (pauli::x(), pauli::z());
    NamedScenario {
        id: "bb84",
        table,
        realization: Some(epr_with([&z, &x], [&z, &x])),
        expected: vec![expect(
            "lambda_min_bound",
            Expected::Exact("1/2"),
            "tight: the EPR pair has λ_min = 1/2",
        )],
    }
}

/// Popescu–Rohrlich box, `1/2` when `a ⊕ b = xy`. Not quantum.
pub fn pr_box() -> NamedScenario {
    let table = BehaviorTable::from_fn(bits(), |i| {
        if (i.a ^ i.b) == (i.x & i.y) {
            Prob::frac(1, 2)
        } else {
            Prob::zero()
        }
    })
    .expect("valid entries");
    NamedScenario {
        id: "pr-box",
        table,
        realization: None,
        expected: vec![
            expect(
                "purity_bound",
                Expected::Float(0.0),
                "f1 vanishes at settings (0, 1)",
            ),
            expect(
                "dim_lower_bound",
                Expected::NoFiniteDim,
                "purity bound is zero",
            ),
        ],
    }
}

/// Single-setting 3×3 table with only the first row and column specified.
pub fn partial_exclusion_example() -> NamedScenario {
    let shape = Shape::new(1, 1, 3, 3).expect("nonzero");
    let mut builder = BehaviorTable::builder(shape);
    let entries = [
        ((0, 0), Prob::frac(1, 10)),
        ((0, 1), Prob::frac(1, 100)),
        ((0, 2), Prob::frac(1, 100)),
        ((1, 0), Prob::frac(1, 100)),
        ((2, 0), Prob::frac(1, 100)),
    ];
    for ((a, b), p) in entries {
        builder.set(Index::new(0, 0, a, b), p).expect("in range");
    }
    NamedScenario {
        id: "partial-3x3",
        table: builder.build(),
        realization: None,
        expected: vec![
            expect(
                "lambda_min_bound",
                Expected::Exact("18/125"),
                "(12/100)² / (1/10) at a = b = 0",
            ),
            expect("two_qubit_lower", Expected::Exact("18/125"), "λ_min bound"),
            expect(
                "two_qubit_upper",
                Expected::Exact("107/125"),
                "1 − λ_min bound",
            ),
        ],
    }
}
