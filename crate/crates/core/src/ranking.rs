use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::{Error, Result};

/// A strict total order of items, best first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &item in &order {
            if item >= n || core::mem::replace(&mut seen[item], true) {
                return Err(Error::NotPermutation(n));
            }
        }
        Ok(Self(order))
    }

    /// Callers guarantee `order` is a permutation.
    pub(crate) fn from_trusted(order: Vec<usize>) -> Self {
        debug_assert!(Self::new(order.clone()).is_ok());
        Self(order)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Inverse of [`rank_vector`]: `positions[item]` is the 1-based rank.
    pub fn from_rank_vector(positions: &[usize]) -> Result<Self> {
        let n = positions.len();
        let mut order = vec![usize::MAX; n];
        for (item, &pos) in positions.iter().enumerate() {
            if pos == 0 || pos > n || order[pos - 1] != usize::MAX {
                return Err(Error::NotPermutation(n));
            }
            order[pos - 1] = item;
        }
        Ok(Self(order))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_order(self) -> Vec<usize> {
        self.0
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// 0-based position of every item.
    pub(crate) fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (p, &item) in self.0.iter().enumerate() {
            pos[item] = p;
        }
        pos
    }
}

/// Number of item pairs that `a` and `b` order oppositely.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let pos = b.positions();
    // relabel a by b's positions; discordant pairs are inversions
    let seq: Vec<usize> = a.order().iter().map(|&item| pos[item]).collect();
    Ok(count_inversions(&seq))
}

fn count_inversions(seq: &[usize]) -> usize {
    let n = seq.len();
    // Fenwick tree over values
    let mut tree = vec![0usize; n + 1];
    let mut inversions = 0;
    for (seen, &v) in seq.iter().enumerate() {
        let mut le = 0;
        let mut i = v + 1;
        while i > 0 {
            le += tree[i];
            i &= i - 1;
        }
        inversions += seen - le;
        let mut i = v + 1;
        while i <= n {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    inversions
}

/// `v[item]` = 1-based rank position of `item`.
pub fn rank_vector(r: &Ranking) -> Vec<usize> {
    r.positions().into_iter().map(|p| p + 1).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        }
    }
}

/// Optimal rankings of one problem, lexicographically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalSet {
    pub objective: Rational,
    pub sense: Sense,
    pub rankings: Vec<Ranking>,
    /// True iff `rankings` holds every optimum.
    pub complete: bool,
    pub cap: usize,
}

impl OptimalSet {
    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    pub fn n(&self) -> usize {
        self.rankings.first().map_or(0, Ranking::len)
    }
}

/// The rankability quadruple. `k` is absent for weighted matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measures {
    pub k: Option<Rational>,
    pub p: usize,
    pub tau: usize,
    pub beta: Rational,
}
