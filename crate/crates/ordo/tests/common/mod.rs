//! Helpers shared by the integration tests.
#![allow(dead_code)]

use ordo::card::{build_card, CardOptions, ModelCard};
use ordo::core::generators::{GenSpec, Kind};
use ordo::core::lop::Method;
use ordo::core::rational::Rational;
use ordo::core::{DominanceMatrix, Sense};
use proptest::prelude::*;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v: Vec<usize> = (0..n).collect();
    heap(n, &mut v, &mut out);
    out.sort();
    out
}

fn heap(k: usize, v: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(v.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, v, out);
        if k.is_multiple_of(2) {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
    }
}

/// Objective of `order` evaluated on the reordered integer matrix `d`.
pub fn direct_objective(d: &[Vec<i64>], method: Method, order: &[usize]) -> i64 {
    let n = d.len();
    let m = |a: usize, b: usize| d[order[a]][order[b]];
    let mut total = 0;
    for a in 0..n {
        for b in a + 1..n {
            total += match method {
                Method::Lop => m(a, b),
                // rows should descend and columns ascend past the diagonal
                Method::Hillside => (0..n).map(|c| i64::from(m(a, c) < m(b, c)) + i64::from(m(c, b) < m(c, a))).sum(),
                // cells differing from the perfect upper triangle
                Method::K => i64::from(m(a, b) != 1) + i64::from(m(b, a) != 0),
            };
        }
    }
    total
}

/// Best value and every order achieving it, by exhaustive search.
pub fn brute_force(d: &[Vec<i64>], method: Method) -> (i64, Vec<Vec<usize>>) {
    let sense = if method == Method::Lop { Sense::Maximize } else { Sense::Minimize };
    let mut best: Option<i64> = None;
    let mut argbest = Vec::new();
    for order in permutations(d.len()) {
        let v = direct_objective(d, method, &order);
        let better = match (best, sense) {
            (None, _) => true,
            (Some(b), Sense::Maximize) => v > b,
            (Some(b), Sense::Minimize) => v < b,
        };
        if better {
            best = Some(v);
            argbest.clear();
        }
        if best == Some(v) {
            argbest.push(order);
        }
    }
    (best.expect("n >= 1"), argbest)
}

pub fn integer_rows(d: &DominanceMatrix) -> Vec<Vec<i64>> {
    d.rows().map(|row| row.iter().map(|x| x.to_integer()).collect()).collect()
}

pub fn matrix(n: usize, cells: &[i64]) -> DominanceMatrix {
    let rows: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { cells[i * n + j] }).collect()).collect();
    DominanceMatrix::from_integers(&rows).unwrap()
}

/// Small matrices with entries in `0..=max`.
pub fn arb_matrix(sizes: std::ops::RangeInclusive<usize>, max: i64) -> impl Strategy<Value = DominanceMatrix> {
    sizes.prop_flat_map(move |n| prop::collection::vec(0..=max, n * n).prop_map(move |cells| matrix(n, &cells)))
}

fn arb_genspec() -> impl Strategy<Value = GenSpec> {
    (0..Kind::ALL.len(), 1usize..9, 0i64..=200, any::<u64>())
        .prop_map(|(k, n, half_percent, seed)| {
            GenSpec::new(Kind::ALL[k], n).noise(Rational::new(half_percent, 2), 1, 3).block(1, n).seed(seed)
        })
}

/// Valid cards built through the real pipeline, with arbitrary metadata.
pub fn arb_card() -> impl Strategy<Value = ModelCard> {
    (
        arb_matrix(1..=5, 3),
        prop::sample::select(Method::ALL.to_vec()),
        any::<u64>(),
        "\\PC{0,12}",
        1usize..6,
        prop::option::of(arb_genspec()),
        prop::option::of(prop::collection::vec("[a-z \"\\\\é]{0,6}", 5)),
        any::<bool>(),
    )
        .prop_map(|(d, method, dataset_id, source, max_stored, genspec, names, drop_xstar)| {
            let n = d.n();
            let d = match names {
                Some(mut names) => {
                    names.truncate(n);
                    d.with_item_names(names).unwrap()
                }
                None => d,
            };
            let d = if method == Method::K { ordo::core::generators::unweighted(&d) } else { d };
            let opts = CardOptions { dataset_id, source, max_stored, genspec };
            let mut card = build_card(&d, method, 30, 2, &opts).unwrap();
            if drop_xstar {
                card.xstar = None;
            }
            card
        })
}
