#![allow(dead_code)]

use bellcert::sim::linalg::{conj, trace};
use bellcert::sim::{fidelity, simulate, ExperimentSpec, Povm, PureState, Rng, SchmidtFrame};
use bellcert::table::{BehaviorTable, Relabeling};
use bellcert::Shape;
use rand::seq::SliceRandom;

pub fn max_table_diff(t1: &BehaviorTable, t2: &BehaviorTable) -> f64 {
    assert_eq!(t1.shape(), t2.shape());
    t1.shape()
        .indices()
        .map(|i| (t1.get(i).unwrap().value() - t2.get(i).unwrap().value()).abs())
        .fold(0.0, f64::max)
}

fn perm(n: usize, rng: &mut Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_relabeling(shape: Shape, rng: &mut Rng) -> Relabeling {
    Relabeling {
        x: perm(shape.n_x, rng),
        y: perm(shape.n_y, rng),
        a: (0..shape.n_x).map(|_| perm(shape.n_a, rng)).collect(),
        b: (0..shape.n_y).map(|_| perm(shape.n_b, rng)).collect(),
    }
}

/// Largest `F(ρ_{y1 b1}, ρ_{y2 b2}) − Σ_a √(q1 q2)` over all tuples with
/// positive marginals, where `q` are the conditional distributions of
/// Alice's measurement `x`. Nonpositive when the fidelity inequality holds.
pub fn fidelity_chain_excess(psi: &PureState, a: &[Povm], b: &[Povm]) -> f64 {
    let frame = SchmidtFrame::new(psi);
    let table =
        simulate(&ExperimentSpec::pure(psi.clone(), a.to_vec(), b.to_vec()).unwrap()).unwrap();
    let mut conditionals = Vec::new();
    for (y, pb) in b.iter().enumerate() {
        for (bo, n) in pb.effects().iter().enumerate() {
            let p_b = table.marginal_b_entry(y, bo, 0).unwrap().value();
            if p_b > 1e-9 {
                conditionals.push((y, bo, p_b, frame.rho_yb(n).unwrap()));
            }
        }
    }
    let n_a = a[0].len();
    let mut worst = f64::NEG_INFINITY;
    for (y1, b1, p1, r1) in &conditionals {
        for (y2, b2, p2, r2) in &conditionals {
            let f = fidelity(r1, r2).unwrap();
            for x in 0..a.len() {
                let classical: f64 = (0..n_a)
                    .map(|ao| {
                        let q1 = table.p(x, *y1, ao, *b1).unwrap() / p1;
                        let q2 = table.p(x, *y2, ao, *b2).unwrap() / p2;
                        (q1 * q2).max(0.0).sqrt()
                    })
                    .sum();
                worst = worst.max(f - classical);
            }
        }
    }
    worst
}

/// Largest `|Σ_{b1,b2} Tr(N*_{y1b1} D² N*_{y2b2} D²) − Σ λ²|` over setting pairs.
pub fn trace_identity_deviation(psi: &PureState, b: &[Povm]) -> f64 {
    let frame = SchmidtFrame::new(psi);
    let d2 = &frame.d * &frame.d;
    let purity = frame.spectrum.purity();
    let rotated: Vec<Vec<_>> = b
        .iter()
        .map(|p| {
            p.effects()
                .iter()
                .map(|n| conj(&frame.rotate_b(n)))
                .collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for n1 in &rotated {
        for n2 in &rotated {
            let mut s = 0.0;
            for e1 in n1 {
                for e2 in n2 {
                    s += trace(&(e1 * &d2 * e2 * &d2)).re;
                }
            }
            worst = worst.max((s - purity).abs());
        }
    }
    worst
}
