//! Multi-threaded driver for the branch-and-bound enumerator.
//!
//! Workers pull top-level branches from a shared counter and prune against
//! one atomic incumbent. Branch results are merged in first-item order, so
//! the output is byte-identical to [`solve_enumerate`] for any worker count.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicI64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use ordo_core::lop::{solve_enumerate, Branch, CostProblem, Incumbent, Prepared};
use ordo_core::OptimalSet;

struct SharedIncumbent(AtomicI64);

impl Incumbent for SharedIncumbent {
    fn bound(&self) -> i128 {
        i128::from(self.0.load(Ordering::Relaxed))
    }

    fn offer(&self, value: i128) {
        if let Ok(v) = i64::try_from(value) {
            self.0.fetch_min(v, Ordering::Relaxed);
        }
    }
}

/// `workers == 0` uses the available parallelism.
pub fn resolve_workers(workers: usize) -> usize {
    if workers > 0 {
        workers
    } else {
        thread::available_parallelism().map_or(1, NonZeroUsize::get)
    }
}

pub fn solve_parallel(p: &CostProblem, cap: usize, workers: usize) -> OptimalSet {
    let workers = resolve_workers(workers).min(p.n());
    let prep = Prepared::new(p);
    let Ok(start) = i64::try_from(prep.heuristic_value()) else {
        return solve_enumerate(p, cap);
    };
    if workers <= 1 {
        return solve_enumerate(p, cap);
    }
    let inc = SharedIncumbent(AtomicI64::new(start));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Branch)>> = Mutex::new(Vec::with_capacity(prep.n()));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let first = next.fetch_add(1, Ordering::Relaxed);
                if first >= prep.n() {
                    break;
                }
                let branch = prep.search_branch(first, cap, &inc);
                results.lock().expect("worker panicked").push((first, branch));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(first, _)| *first);
    prep.finish(results.into_iter().map(|(_, b)| b).collect(), cap)
}
