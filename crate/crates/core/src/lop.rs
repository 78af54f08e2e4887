//! Exact linear ordering over a cost matrix with enumeration of every
//! alternate optimum.
//!
//! A ranking `r` scores `sum over positions i < j of cost(r[i], r[j])`. The
//! LOP, hillside and `k` objectives are all expressed as a [`CostProblem`] by
//! transforming the dominance matrix, so one solver serves all three.
//!
//! The solver is a depth-first branch and bound over ranking prefixes. Once a
//! prefix is fixed, every pair touching a placed item has a known cost; each
//! pair of still-free items contributes at least the cheaper of its two
//! orientations, which gives an admissible bound. Subtrees whose bound
//! exceeds the incumbent are cut and subtrees whose bound ties it are kept,
//! so every optimum is reached. Children are visited in increasing item
//! order, so optima arrive in lexicographic order and a capped run returns
//! the lexicographically smallest `cap` optima.
//!
//! Top-level branches (one per first item) are independent given a shared
//! monotone [`Incumbent`], which is how the `ordo` crate runs them on several
//! threads while keeping the output identical to [`solve_enumerate`].

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::{DominanceMatrix, Error, OptimalSet, Ranking, Result, Sense};

/// Which dominance-matrix objective to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Lop,
    Hillside,
    K,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Lop, Method::Hillside, Method::K];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Lop => "lop",
            Method::Hillside => "hillside",
            Method::K => "k",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostProblem {
    n: usize,
    cost: Vec<Rational>,
    sense: Sense,
}

impl CostProblem {
    /// `cost` is row-major `n * n` with a zero diagonal.
    pub fn new(n: usize, cost: Vec<Rational>, sense: Sense) -> Result<Self> {
        if n == 0 || cost.len() != n * n {
            return Err(Error::NotSquare { rows: n, row: 0, cols: cost.len() / n.max(1) });
        }
        if let Some(i) = (0..n).find(|&i| !cost[i * n + i].is_zero()) {
            return Err(Error::NonzeroDiagonal(i));
        }
        Ok(Self { n, cost, sense })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn cost(&self, i: usize, j: usize) -> Rational {
        self.cost[i * self.n + j]
    }

    pub fn costs(&self) -> &[Rational] {
        &self.cost
    }

    pub fn objective(&self, r: &Ranking) -> Rational {
        let order = r.order();
        let mut total = Rational::zero();
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[a + 1..] {
                total += self.cost(i, j);
            }
        }
        total
    }
}

/// Classic linear ordering: maximize the dominance mass above the diagonal.
pub fn lop_problem(d: &DominanceMatrix) -> CostProblem {
    CostProblem { n: d.n(), cost: d.entries().to_vec(), sense: Sense::Maximize }
}

/// Hillside violations of placing `i` above `j`: columns where row `i` falls
/// below row `j`, plus rows where column `j` falls below column `i`.
pub fn hillside_problem(d: &DominanceMatrix) -> CostProblem {
    let n = d.n();
    let mut cost = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let count = (0..n)
                .filter(|&k| d.get(i, k) < d.get(j, k))
                .count()
                + (0..n).filter(|&k| d.get(k, j) < d.get(k, i)).count();
            cost[i * n + j] = rational::int(count as i64);
        }
    }
    CostProblem { n, cost, sense: Sense::Minimize }
}

/// Entry flips needed for `i` above `j` in a perfect dominance matrix:
/// `D(i,j)` must become 1 and `D(j,i)` must become 0.
pub fn k_problem(d: &DominanceMatrix) -> Result<CostProblem> {
    if d.is_weighted() {
        return Err(Error::WeightedMatrix);
    }
    let n = d.n();
    let one = rational::int(1);
    let mut cost = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let flips = i64::from(d.get(i, j).is_zero()) + i64::from(d.get(j, i) == one);
                cost[i * n + j] = rational::int(flips);
            }
        }
    }
    Ok(CostProblem { n, cost, sense: Sense::Minimize })
}

pub fn problem_for(d: &DominanceMatrix, method: Method) -> Result<CostProblem> {
    match method {
        Method::Lop => Ok(lop_problem(d)),
        Method::Hillside => Ok(hillside_problem(d)),
        Method::K => k_problem(d),
    }
}

/// Best objective seen so far, in the solver's internal minimization units.
///
/// Implementations must be monotone: `offer` never raises the stored value.
pub trait Incumbent {
    fn bound(&self) -> i128;
    fn offer(&self, value: i128);
}

/// Single-threaded incumbent.
#[derive(Debug)]
pub struct LocalIncumbent(Cell<i128>);

impl LocalIncumbent {
    pub fn new(start: i128) -> Self {
        Self(Cell::new(start))
    }
}

impl Incumbent for LocalIncumbent {
    fn bound(&self) -> i128 {
        self.0.get()
    }

    fn offer(&self, value: i128) {
        if value < self.0.get() {
            self.0.set(value);
        }
    }
}

/// Optima found under one top-level branch.
#[derive(Debug, Clone, Default)]
pub struct Branch {
    best: Option<i128>,
    found: Vec<Vec<usize>>,
}

/// A cost problem scaled to integers in minimization form, ready to search.
#[derive(Debug, Clone)]
pub struct Prepared {
    n: usize,
    cost: Vec<i128>,
    pair_min: Vec<i128>,
    scale: i64,
    sense: Sense,
}

impl Prepared {
    pub fn new(p: &CostProblem) -> Self {
        let scale = rational::common_denominator(p.costs());
        let sign: i128 = match p.sense {
            Sense::Minimize => 1,
            Sense::Maximize => -1,
        };
        let cost: Vec<i128> = p
            .costs()
            .iter()
            .map(|c| sign * i128::from(*c.numer()) * i128::from(scale / c.denom()))
            .collect();
        let n = p.n;
        let mut pair_min = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                pair_min[i * n + j] = cost[i * n + j].min(cost[j * n + i]);
            }
        }
        Self { n, cost, pair_min, scale, sense: p.sense }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn c(&self, i: usize, j: usize) -> i128 {
        self.cost[i * self.n + j]
    }

    fn value(&self, order: &[usize]) -> i128 {
        let mut total = 0;
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[a + 1..] {
                total += self.c(i, j);
            }
        }
        total
    }

    /// Objective of a greedy order refined by single-item moves. Always the
    /// value of a real ranking, so it is a valid starting incumbent.
    pub fn heuristic_value(&self) -> i128 {
        let n = self.n;
        let net = |x: usize| -> i128 { (0..n).map(|u| self.c(x, u) - self.c(u, x)).sum() };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (net(x), x));
        'improve: loop {
            for p in 0..n {
                let x = order[p];
                let mut delta = 0;
                for q in (0..p).rev() {
                    delta += self.c(x, order[q]) - self.c(order[q], x);
                    if delta < 0 {
                        order.remove(p);
                        order.insert(q, x);
                        continue 'improve;
                    }
                }
                let mut delta = 0;
                for q in p + 1..n {
                    delta += self.c(order[q], x) - self.c(x, order[q]);
                    if delta < 0 {
                        order.remove(p);
                        order.insert(q, x);
                        continue 'improve;
                    }
                }
            }
            break;
        }
        self.value(&order)
    }

    /// Explores every ranking whose top item is `first`, keeping up to
    /// `cap + 1` optima so the caller can tell whether the cap was hit.
    pub fn search_branch(&self, first: usize, cap: usize, inc: &dyn Incumbent) -> Branch {
        let mut s = Search {
            prep: self,
            inc,
            limit: cap.saturating_add(1),
            used: vec![false; self.n],
            prefix: Vec::with_capacity(self.n),
            best: i128::MAX,
            found: Vec::new(),
        };
        let mut rest = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                rest += self.pair_min[i * self.n + j];
            }
        }
        s.place(first, 0, rest);
        Branch {
            best: (!s.found.is_empty()).then_some(s.best),
            found: s.found,
        }
    }

    /// Merges per-branch results, given in increasing first-item order.
    pub fn finish(&self, branches: Vec<Branch>, cap: usize) -> OptimalSet {
        let best = branches
            .iter()
            .filter_map(|b| b.best)
            .min()
            .expect("at least one branch reaches a full ranking");
        let mut rankings: Vec<Ranking> = branches
            .into_iter()
            .filter(|b| b.best == Some(best))
            .flat_map(|b| b.found)
            .map(Ranking::from_trusted)
            .take(cap.saturating_add(1))
            .collect();
        let complete = rankings.len() <= cap;
        rankings.truncate(cap);
        let signed = match self.sense {
            Sense::Minimize => best,
            Sense::Maximize => -best,
        };
        let numer = i64::try_from(signed).expect("optimal objective fits in i64");
        OptimalSet {
            objective: Rational::new(numer, self.scale),
            sense: self.sense,
            rankings,
            complete,
            cap,
        }
    }
}

struct Search<'a> {
    prep: &'a Prepared,
    inc: &'a dyn Incumbent,
    limit: usize,
    used: Vec<bool>,
    prefix: Vec<usize>,
    best: i128,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn place(&mut self, x: usize, value: i128, rest: i128) {
        let n = self.prep.n;
        let (mut add, mut relax) = (0, 0);
        for u in 0..n {
            if u != x && !self.used[u] {
                add += self.prep.cost[x * n + u];
                relax += self.prep.pair_min[x * n + u];
            }
        }
        self.used[x] = true;
        self.prefix.push(x);
        self.descend(value + add, rest - relax);
        self.prefix.pop();
        self.used[x] = false;
    }

    fn descend(&mut self, value: i128, rest: i128) {
        let bound = value + rest;
        if bound > self.inc.bound() || (bound == self.best && self.found.len() >= self.limit) {
            return;
        }
        if self.prefix.len() == self.prep.n {
            if value < self.best {
                self.best = value;
                self.found.clear();
            }
            self.found.push(self.prefix.clone());
            self.inc.offer(value);
            return;
        }
        for x in 0..self.prep.n {
            if !self.used[x] {
                self.place(x, value, rest);
            }
        }
    }
}

/// Exact optimum and all (or the first `cap`, lexicographically) optimal
/// rankings of `p`.
pub fn solve_enumerate(p: &CostProblem, cap: usize) -> OptimalSet {
    assert!(cap >= 1, "enumeration cap must be at least 1");
    let prep = Prepared::new(p);
    let inc = LocalIncumbent::new(prep.heuristic_value());
    let branches = (0..prep.n).map(|x| prep.search_branch(x, cap, &inc)).collect();
    prep.finish(branches, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perfect(n: usize) -> DominanceMatrix {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i < j)).collect())
            .collect();
        DominanceMatrix::from_integers(&rows).unwrap()
    }

    fn three_cycle() -> DominanceMatrix {
        DominanceMatrix::from_integers(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap()
    }

    fn orders(set: &OptimalSet) -> Vec<Vec<usize>> {
        set.rankings.iter().map(|r| r.order().to_vec()).collect()
    }

    #[test]
    fn lop_problem_copies_entries() {
        let d = DominanceMatrix::from_integers(&[[0, 2], [1, 0]]).unwrap();
        let p = lop_problem(&d);
        assert_eq!(p.sense(), Sense::Maximize);
        assert_eq!(p.costs(), d.entries());
        assert!(lop_problem(&DominanceMatrix::zeros(3)).costs().iter().all(Zero::is_zero));
        assert_eq!(lop_problem(&perfect(4)).costs(), perfect(4).entries());
    }

    #[test]
    fn hillside_counts_strict_violations() {
        // row 0 = [0,2], row 1 = [1,0]: column 0 has 0 < 1 and row 1 has
        // D(1,1)=0 < D(1,0)=1, so each orientation costs 2.
        let d = DominanceMatrix::from_integers(&[[0, 2], [1, 0]]).unwrap();
        let p = hillside_problem(&d);
        assert_eq!(p.sense(), Sense::Minimize);
        assert_eq!(p.cost(0, 1), rational::int(2));
        assert_eq!(p.cost(1, 0), rational::int(2));

        assert!(hillside_problem(&DominanceMatrix::zeros(4)).costs().iter().all(Zero::is_zero));

        let p = hillside_problem(&perfect(3));
        assert_eq!(p.objective(&Ranking::identity(3)), Rational::zero());
        let set = solve_enumerate(&p, 100);
        assert_eq!(set.objective, Rational::zero());
        assert_eq!(orders(&set), [[0, 1, 2]]);
    }

    #[test]
    fn k_problem_examples() {
        let set = solve_enumerate(&k_problem(&perfect(4)).unwrap(), 100);
        assert_eq!(set.objective, Rational::zero());

        let set = solve_enumerate(&k_problem(&three_cycle()).unwrap(), 100);
        assert_eq!(set.objective, rational::int(2));
        assert_eq!(orders(&set), [[0, 1, 2], [1, 2, 0], [2, 0, 1]]);

        let set = solve_enumerate(&k_problem(&DominanceMatrix::zeros(3)).unwrap(), 100);
        assert_eq!(set.objective, rational::int(3));
        assert_eq!(set.len(), 6);

        let weighted = DominanceMatrix::from_integers(&[[0, 2], [1, 0]]).unwrap();
        assert_eq!(k_problem(&weighted), Err(Error::WeightedMatrix));
    }

    #[test]
    fn solve_enumerate_examples() {
        let set = solve_enumerate(&lop_problem(&DominanceMatrix::zeros(3)), 100);
        assert_eq!(set.objective, Rational::zero());
        assert_eq!(set.len(), 6);
        assert!(set.complete);
        assert!(set.rankings.windows(2).all(|w| w[0] < w[1]));

        let set = solve_enumerate(&lop_problem(&perfect(4)), 100);
        assert_eq!(set.objective, rational::int(6));
        assert_eq!(orders(&set), [[0, 1, 2, 3]]);
        assert!(set.complete);
    }

    #[test]
    fn cap_keeps_lexicographically_first_optima() {
        let set = solve_enumerate(&lop_problem(&DominanceMatrix::zeros(4)), 5);
        assert!(!set.complete);
        assert_eq!(
            orders(&set),
            [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
        );
        // exactly cap optima counts as complete
        let set = solve_enumerate(&lop_problem(&DominanceMatrix::zeros(3)), 6);
        assert!(set.complete);
        assert_eq!(set.len(), 6);
    }

    #[test]
    fn single_item_and_fractional_costs() {
        let set = solve_enumerate(&lop_problem(&DominanceMatrix::zeros(1)), 10);
        assert_eq!(orders(&set), [[0]]);
        let d = DominanceMatrix::new(vec![
            vec![Rational::zero(), Rational::new(1, 3)],
            vec![Rational::new(1, 2), Rational::zero()],
        ])
        .unwrap();
        let set = solve_enumerate(&lop_problem(&d), 10);
        assert_eq!(set.objective, Rational::new(1, 2));
        assert_eq!(orders(&set), [[1, 0]]);
    }

    #[test]
    fn heuristic_is_an_upper_bound() {
        let d = three_cycle();
        let p = Prepared::new(&lop_problem(&d));
        // maximize 2 => internal -2
        assert!(p.heuristic_value() >= -2);
    }
}
