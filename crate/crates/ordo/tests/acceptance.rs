//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ordo::card::{self, build_card, CardOptions, ModelCard};
use ordo::catalog::{load_catalog, store};
use ordo::core::generators::{self, GenSpec, Kind, Perturbation};
use ordo::core::linalg::{self, GameRecord};
use ordo::core::lop::{problem_for, Method};
use ordo::core::rankability::measures;
use ordo::core::rational::{int, Rational};
use ordo::core::{DominanceMatrix, Measures};
use ordo::ingest;
use ordo::parallel::solve_parallel;
use ordo::query::{filter, Query};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy yields values").current()
}

fn special(n: usize, begin: usize, end: usize) -> DominanceMatrix {
    generators::generate(&GenSpec::new(Kind::Special, n).block(begin, end)).unwrap()
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn oracle_equivalence() -> Check {
    let started = Instant::now();
    let mut runner = TestRunner::deterministic();
    let mut solves = 0;
    for index in 0..200 {
        let n = 3 + index % 6;
        let weighted = index % 2 == 1;
        let max: i64 = if weighted { 4 } else { 1 };
        let cells = sample(&mut runner, &proptest::collection::vec(0..=max, n * n));
        let d = common::matrix(n, &cells);
        for method in Method::ALL {
            let d = if method == Method::K { generators::unweighted(&d) } else { d.clone() };
            let (best, mut orders) = common::brute_force(&common::integer_rows(&d), method);
            let set = solve_parallel(&problem_for(&d, method).unwrap(), 50_000, 0);
            let mut found: Vec<Vec<usize>> = set.rankings.iter().map(|r| r.order().to_vec()).collect();
            found.sort();
            orders.sort();
            ensure(set.complete && set.objective == int(best) && found == orders, || {
                format!("instance {index} ({}): solver {} x{}, oracle {best} x{}", method.as_str(), set.objective, found.len(), orders.len())
            })?;
            solves += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{solves} solves on 200 instances (n 3..8, binary and weighted) in {:.1}s", elapsed.as_secs_f64()))
}

fn factorial_counts() -> Check {
    let c = build_card(&special(10, 6, 10), Method::Lop, 10_000, 0, &CardOptions::default()).map_err(|e| e.to_string())?;
    ensure(c.num_optimal_rankings == 120 && c.complete, || format!("special(10,6,10): {} optima", c.num_optimal_rankings))?;
    let n = 10;
    for size in 2..=5 {
        for (place, begin) in [("top", 1), ("middle", (n - size) / 2 + 1), ("bottom", n - size + 1)] {
            let d = special(n, begin, begin + size - 1);
            let set = solve_parallel(&problem_for(&d, Method::Lop).unwrap(), 10_000, 0);
            ensure(set.complete && set.len() == factorial(size), || format!("block {size} at {place}: {} optima", set.len()))?;
        }
    }
    Ok("special(10, 6-10) has 120 optima; blocks 2..5 at top/middle/bottom give size!".into())
}

fn beta_ordering() -> Check {
    let n = 9;
    let mut out = Vec::new();
    for size in 2..=4 {
        let begins = [1, (n - size) / 2 + 1, n - size + 1];
        let m: Vec<Measures> = begins
            .iter()
            .map(|&b| measures(&special(n, b, b + size - 1), Method::Lop, 10_000).unwrap())
            .collect();
        let same = m.iter().all(|x| x.k == m[0].k && x.p == m[0].p && x.tau == m[0].tau);
        ensure(same, || format!("block {size}: k, p, tau differ: {m:?}"))?;
        ensure(m[0].beta > m[1].beta && m[1].beta > m[2].beta, || {
            format!("block {size}: beta not decreasing: {:?}", m.iter().map(|x| x.beta).collect::<Vec<_>>())
        })?;
        out.push(format!("{}>{}>{}", m[0].beta, m[1].beta, m[2].beta));
    }
    Ok(format!("equal k, p, tau; beta top>middle>bottom ({})", out.join(", ")))
}

fn trivial_extremes() -> Check {
    let perfect = measures(&special(6, 1, 1), Method::Lop, 10_000).map_err(|e| e.to_string())?;
    let zero = Rational::from_integer(0);
    ensure(perfect == Measures { k: Some(zero), p: 1, tau: 0, beta: zero }, || format!("perfect: {perfect:?}"))?;
    let empty = measures(&DominanceMatrix::zeros(5), Method::Lop, 10_000).map_err(|e| e.to_string())?;
    ensure(empty.p == 120 && empty.tau == 10, || format!("empty: {empty:?}"))?;
    Ok("perfect n=6 -> (0,1,0,0); empty n=5 -> p=120, tau=10".into())
}

fn rating_identities() -> Check {
    let mut runner = TestRunner::deterministic();
    let mut worst: f64 = 0.0;
    for schedule in 0..100 {
        let n = sample(&mut runner, &(2usize..=20));
        // a path keeps the schedule connected; extra games are random
        let mut games: Vec<GameRecord> = (1..n)
            .map(|i| {
                let (sa, sb) = sample(&mut runner, &(0u64..100, 0u64..100));
                GameRecord::new(i - 1, sa, i, sb)
            })
            .collect();
        let extra = sample(&mut runner, &proptest::collection::vec((0..n, 0..n, 0u64..100, 0u64..100), 0..3 * n));
        games.extend(extra.into_iter().filter(|g| g.0 != g.1).map(|(a, b, sa, sb)| GameRecord::new(a, sa, b, sb)));

        let colley = linalg::colley(&games, n).map_err(|e| format!("schedule {schedule}: {e}"))?;
        let sum: f64 = colley.ratings.iter().sum();
        worst = worst.max((sum - n as f64 / 2.0).abs());
        ensure((sum - n as f64 / 2.0).abs() <= 1e-9, || format!("schedule {schedule}: colley sum {sum}"))?;
        let scaled: Vec<GameRecord> =
            games.iter().map(|g| GameRecord::new(g.team_a, g.score_a * 7, g.team_b, g.score_b * 7)).collect();
        let again = linalg::colley(&scaled, n).map_err(|e| e.to_string())?;
        let drift = colley.ratings.iter().zip(&again.ratings).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(drift <= 1e-9, || format!("schedule {schedule}: scaling moved colley by {drift}"))?;

        let massey = linalg::massey(&games, n).map_err(|e| format!("schedule {schedule}: {e}"))?;
        let sum: f64 = massey.ratings.iter().sum();
        worst = worst.max(sum.abs());
        ensure(sum.abs() <= 1e-9, || format!("schedule {schedule}: massey sum {sum}"))?;
    }
    Ok(format!("100 schedules, n<=20; worst sum error {worst:.1e}"))
}

fn ingestion_fidelity() -> Check {
    let rows = ingest::parse_games_csv("Arizona,71,Maryland,67\n").map_err(|e| e.to_string())?;
    let g = ingest::ingest_games(&rows).map_err(|e| e.to_string())?;
    ensure(g.names == ["Arizona", "Maryland"], || format!("names {:?}", g.names))?;
    ensure(g.matrix.get(0, 1) == int(1) && g.matrix.get(1, 0) == int(0), || "winner cell wrong".into())?;

    let text = "college,f1,f2,f3,f4,f5,f6\nB,1,1,1,1,1,1\nA,2,2,2,2,2,2\nC,3,0,2,1,9,1\nD,2,2,2,2,2,2\n";
    let table = ingest::parse_features_csv(text).map_err(|e| e.to_string())?;
    let d = ingest::ingest_features(&table, &[true; 6]).map_err(|e| e.to_string())?;
    ensure(d.entries().iter().all(|&x| x <= int(6)), || "entry above 6".into())?;
    ensure(d.get(0, 1) == int(6) && d.get(1, 0) == int(0), || "strict dominator A over B must give 6".into())?;
    ensure(d.get(0, 3) == int(0) && d.get(3, 0) == int(0), || "identical rows must give zeros".into())?;
    Ok("single game gives D(winner,loser)=1; six features give entries <= 6 and D(A,B)=6".into())
}

fn card_canonicality() -> Check {
    let mut runner = TestRunner::deterministic();
    let strategy = common::arb_card();
    for k in 0..100 {
        let c: ModelCard = sample(&mut runner, &strategy);
        let text = card::emit(&c);
        let back = card::parse(&text).map_err(|e| format!("card {k}: {e}"))?;
        ensure(back == c && card::emit(&back) == text, || format!("card {k} does not round trip"))?;
    }
    let d = DominanceMatrix::from_integers(&[[0, 1], [0, 0]]).unwrap();
    let minimal = build_card(&d, Method::Lop, 100, 1, &CardOptions::default()).map_err(|e| e.to_string())?;
    ensure(card::emit(&minimal) == include_str!("fixtures/minimal_card.json"), || "golden file differs".into())?;
    Ok("100 generated cards round trip byte-identically; golden file matches".into())
}

fn filter_semantics() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let plant = |id: u64, source: &str, d: DominanceMatrix| -> Result<(), String> {
        let opts = CardOptions { dataset_id: id, source: source.into(), ..CardOptions::default() };
        let c = build_card(&d, Method::Lop, 10_000, 0, &opts).map_err(|e| e.to_string())?;
        store(dir.path(), &c).map_err(|e| e.to_string())?;
        Ok(())
    };
    for (id, n) in [(1, 29), (2, 31), (3, 34), (4, 35), (5, 30), (6, 40)] {
        plant(id, "LOLIB", special(n, 1, 1))?;
    }
    plant(7, "artificial", special(32, 1, 1))?;
    plant(10, "MarchMadness", special(8, 2, 8))?; // 5040 optima
    plant(11, "MarchMadness", special(8, 4, 8))?; // 120
    plant(12, "MarchMadness", DominanceMatrix::zeros(7))?; // 5040
    plant(13, "LOLIB", special(9, 3, 9))?; // 5040
    std::fs::write(dir.path().join("99.json"), "{ not a card").map_err(|e| e.to_string())?;

    let catalog = load_catalog(dir.path()).map_err(|e| e.to_string())?;
    ensure(catalog.cards.len() == 11 && catalog.warnings.len() == 1, || "catalog load".into())?;
    let run = |q: &str| filter(&catalog.cards, &Query::parse(q).unwrap());
    let first = run("source==LOLIB && n>30 && n<35");
    ensure(first == [2, 3], || format!("first query gave {first:?}"))?;
    let second = run("source==MarchMadness && num_optimal_rankings>1000");
    ensure(second == [10, 12], || format!("second query gave {second:?}"))?;
    let third = run("num_optimal_rankings>1000");
    ensure(third == [10, 12, 13], || format!("third query gave {third:?}"))?;
    Ok(format!("LOLIB 30<n<35 -> {first:?}; MarchMadness >1000 optima -> {second:?}; any source -> {third:?}"))
}

fn determinism() -> Check {
    let mut outputs = 0;
    for kind in Kind::ALL {
        for seed in [0, 7, u64::MAX] {
            let spec = GenSpec::new(kind, 7)
                .noise(Rational::new(45, 2), 1, 5)
                .block(2, 5)
                .games(Rational::new(1, 4), 3)
                .seed(seed);
            let a = ingest::write_matrix(&generators::generate(&spec).map_err(|e| e.to_string())?);
            let b = ingest::write_matrix(&generators::generate(&spec).map_err(|e| e.to_string())?);
            ensure(a == b, || format!("{} seed {seed} differs", kind.as_str()))?;
            let p = Perturbation::new(Rational::from_integer(10), Rational::from_integer(20), seed);
            let d = generators::generate(&spec).unwrap();
            ensure(generators::perturb(&d, &p) == generators::perturb(&d, &p), || "perturb differs".into())?;
            outputs += 1;
        }
    }
    for (k, seed) in [3u64, 11, 42].into_iter().enumerate() {
        let spec = GenSpec::new(Kind::EmptyPlusNoise, 8).noise(int(15), 1, 2).seed(seed);
        let d = generators::generate(&spec).unwrap();
        for (method, cap) in [(Method::Lop, 10_000), (Method::Hillside, 10_000), (Method::Lop, 17)] {
            let opts = CardOptions { dataset_id: k as u64, genspec: Some(spec.clone()), ..CardOptions::default() };
            let texts: Vec<String> = [1, 2, 4, 0]
                .iter()
                .map(|&w| build_card(&d, method, cap, w, &opts).map(|c| card::emit(&c)).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            ensure(texts.iter().all(|t| *t == texts[0]), || format!("seed {seed} {} cap {cap}: workers disagree", method.as_str()))?;
            outputs += 1;
        }
    }
    Ok(format!("{outputs} generator and solver outputs byte-identical across runs and worker counts 1/2/4/all"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("special-class factorial counts", factorial_counts),
        ("beta location ordering", beta_ordering),
        ("trivial extremes", trivial_extremes),
        ("rating identities", rating_identities),
        ("ingestion fidelity", ingestion_fidelity),
        ("model-card canonicality", card_canonicality),
        ("filter semantics", filter_semantics),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
