//! Solver parity against exhaustive permutation evaluation.

use num_traits::Zero;
use ordo_core::generators::{generate, GenSpec, Kind};
use ordo_core::lop::{self, hillside_problem, k_problem, lop_problem, solve_enumerate, CostProblem, Method};
use ordo_core::rational::{int, Rational};
use ordo_core::{DominanceMatrix, Ranking, Sense};
use proptest::prelude::*;

fn permutations(n: usize) -> Vec<Vec<usize>> {
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

/// Objective of `order` computed straight from `d`, without cost transforms.
fn direct_objective(d: &DominanceMatrix, method: Method, order: &[usize]) -> Rational {
    let n = d.n();
    let mut total = Rational::zero();
    match method {
        Method::Lop => {
            for a in 0..n {
                for b in a + 1..n {
                    total += d.get(order[a], order[b]);
                }
            }
        }
        Method::Hillside => {
            // reorder, then count rows that fail to descend and columns
            // that fail to ascend
            let m = |a: usize, b: usize| d.get(order[a], order[b]);
            for a in 0..n {
                for b in a + 1..n {
                    for c in 0..n {
                        if m(a, c) < m(b, c) {
                            total += int(1);
                        }
                        if m(c, b) < m(c, a) {
                            total += int(1);
                        }
                    }
                }
            }
        }
        Method::K => {
            // distance to the perfect dominance matrix of this ranking
            let mut pos = vec![0; n];
            for (p, &i) in order.iter().enumerate() {
                pos[i] = p;
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let perfect = int(i64::from(pos[i] < pos[j]));
                        if d.get(i, j) != perfect {
                            total += int(1);
                        }
                    }
                }
            }
        }
    }
    total
}

fn brute_force(d: &DominanceMatrix, method: Method, sense: Sense) -> (Rational, Vec<Vec<usize>>) {
    let scored: Vec<(Rational, Vec<usize>)> = permutations(d.n())
        .into_iter()
        .map(|p| (direct_objective(d, method, &p), p))
        .collect();
    let best = match sense {
        Sense::Maximize => scored.iter().map(|s| s.0).max(),
        Sense::Minimize => scored.iter().map(|s| s.0).min(),
    }
    .unwrap();
    let optima = scored.into_iter().filter(|s| s.0 == best).map(|s| s.1).collect();
    (best, optima)
}

fn orders(rs: &[Ranking]) -> Vec<Vec<usize>> {
    rs.iter().map(|r| r.order().to_vec()).collect()
}

fn matrix(max_entry: i64) -> impl Strategy<Value = DominanceMatrix> {
    (3usize..=7).prop_flat_map(move |n| {
        proptest::collection::vec(0..=max_entry, n * n).prop_map(move |mut v| {
            for i in 0..n {
                v[i * n + i] = 0;
            }
            let rows: Vec<Vec<i64>> = v.chunks(n).map(<[i64]>::to_vec).collect();
            DominanceMatrix::from_integers(&rows).unwrap()
        })
    })
}

fn check_parity(d: &DominanceMatrix, method: Method) -> Result<(), TestCaseError> {
    let problem = lop::problem_for(d, method).unwrap();
    let set = solve_enumerate(&problem, usize::MAX);
    let (best, optima) = brute_force(d, method, problem.sense());
    prop_assert_eq!(set.objective, best);
    prop_assert_eq!(orders(&set.rankings), optima);
    prop_assert!(set.complete);
    for r in &set.rankings {
        prop_assert_eq!(problem.objective(r), set.objective);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lop_matches_brute_force(d in matrix(4)) {
        check_parity(&d, Method::Lop)?;
    }

    #[test]
    fn hillside_matches_brute_force(d in matrix(3)) {
        check_parity(&d, Method::Hillside)?;
    }

    #[test]
    fn k_matches_brute_force(d in matrix(1)) {
        check_parity(&d, Method::K)?;
        let k = solve_enumerate(&k_problem(&d).unwrap(), 1).objective;
        let n = d.n() as i64;
        prop_assert!(k <= int(n * (n - 1) / 2));
    }

    #[test]
    fn minimizing_equals_maximizing_the_complement(d in matrix(5), shift in 0i64..8) {
        let p = lop_problem(&d);
        let n = p.n();
        let m = int(5 + shift);
        let flipped: Vec<Rational> = (0..n * n)
            .map(|k| if k / n == k % n { Rational::zero() } else { m - p.costs()[k] })
            .collect();
        let q = CostProblem::new(n, flipped, Sense::Minimize).unwrap();
        prop_assert_eq!(solve_enumerate(&p, usize::MAX).rankings, solve_enumerate(&q, usize::MAX).rankings);
    }

    #[test]
    fn k_is_zero_exactly_for_permuted_perfect_matrices(n in 2usize..=6, perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(), flip in proptest::option::of((0usize..6, 0usize..6))) {
        let order: Vec<usize> = perm.into_iter().filter(|&x| x < n).collect();
        let mut d = DominanceMatrix::zeros(n);
        for a in 0..n {
            for b in a + 1..n {
                d.set(order[a], order[b], int(1));
            }
        }
        let mut perfect = true;
        if let Some((i, j)) = flip {
            let (i, j) = (i % n, j % n);
            if i != j {
                let v = if d.get(i, j).is_zero() { int(1) } else { Rational::zero() };
                d.set(i, j, v);
                perfect = false;
            }
        }
        let k = solve_enumerate(&k_problem(&d).unwrap(), 1).objective;
        prop_assert_eq!(k.is_zero(), perfect);
    }
}

#[test]
fn random_six_by_six_matches_all_720_permutations() {
    let spec = GenSpec::new(Kind::EmptyPlusNoise, 6).noise(int(60), 1, 3).seed(11);
    let d = generate(&spec).unwrap();
    for method in [Method::Lop, Method::Hillside] {
        let set = solve_enumerate(&lop::problem_for(&d, method).unwrap(), 10_000);
        let (best, optima) = brute_force(&d, method, set.sense);
        assert_eq!(set.objective, best);
        assert_eq!(orders(&set.rankings), optima);
    }
}

#[test]
fn hillside_of_perfect_dominance_is_zero_only_at_identity() {
    let d = generate(&GenSpec::new(Kind::DominancePlusNoise, 3)).unwrap();
    let scores: Vec<Rational> = permutations(3)
        .iter()
        .map(|p| direct_objective(&d, Method::Hillside, p))
        .collect();
    assert_eq!(scores[0], Rational::zero());
    assert!(scores[1..].iter().all(|s| *s > Rational::zero()));
    assert_eq!(solve_enumerate(&hillside_problem(&d), 10).rankings, [Ranking::identity(3)]);
}

#[test]
fn special_blocks_have_factorial_optima() {
    for n in [5usize, 7] {
        for size in 1..=5usize.min(n) {
            for begin in 1..=n - size + 1 {
                let d = generate(&GenSpec::new(Kind::Special, n).block(begin, begin + size - 1)).unwrap();
                let set = solve_enumerate(&lop_problem(&d), 10_000);
                let expected: usize = (1..=size).product();
                assert_eq!(set.len(), expected, "n={n} block {begin}+{size}");
                assert!(set.complete);
            }
        }
    }
}

#[test]
fn empty_matrices_tie_everywhere() {
    for n in 1..=6 {
        let d = DominanceMatrix::zeros(n);
        let set = solve_enumerate(&lop_problem(&d), 10_000);
        assert_eq!(set.len(), (1..=n).product::<usize>());
        let k = solve_enumerate(&k_problem(&d).unwrap(), 10_000);
        assert_eq!(k.objective, int((n * (n - 1) / 2) as i64));
        assert_eq!(k.len(), set.len());
    }
}
