//! Massey and Colley rating systems.
//!
//! Both systems are integral after clearing the Colley halves, so up to
//! [`EXACT_LIMIT`] items they are solved exactly over big rationals. Larger
//! systems use partial-pivot Gaussian elimination in `f64` and must pass a
//! residual check of [`RESIDUAL_TOLERANCE`].

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Ranking, Result, DEFAULT_CAP};

/// Largest system solved in exact arithmetic.
pub const EXACT_LIMIT: usize = 64;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Tie tolerance for pseudo-optimal sets built from floating-point ratings.
pub const FLOAT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameRecord {
    pub team_a: usize,
    pub score_a: u64,
    pub team_b: usize,
    pub score_b: u64,
}

impl GameRecord {
    pub fn new(team_a: usize, score_a: u64, team_b: usize, score_b: u64) -> Self {
        Self { team_a, score_a, team_b, score_b }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatingResult {
    pub ratings: Vec<f64>,
    /// Exact ratings when the system was small enough to solve exactly.
    pub exact: Option<Vec<BigRational>>,
    /// Items by descending rating, ties by index.
    pub ranking: Ranking,
    /// Row-major `n * n` certainty that item `i` ranks above item `j`.
    pub ystar: Vec<f64>,
    pub pseudo_optimal: Vec<Ranking>,
}

fn check_games(games: &[GameRecord], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewItems { min: 2, got: n });
    }
    for (g, game) in games.iter().enumerate() {
        for item in [game.team_a, game.team_b] {
            if item >= n {
                return Err(Error::ItemOutOfRange { game: g, item, n });
            }
        }
        if game.team_a == game.team_b {
            return Err(Error::SelfGame(g));
        }
    }
    Ok(())
}

fn check_connected(games: &[GameRecord], n: usize) -> Result<()> {
    let mut adj = vec![Vec::new(); n];
    for g in games {
        adj[g.team_a].push(g.team_b);
        adj[g.team_b].push(g.team_a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !core::mem::replace(&mut seen[u], true) {
                stack.push(u);
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(item) => Err(Error::Disconnected(item)),
        None => Ok(()),
    }
}

/// Massey least-squares ratings from point differentials. The last normal
/// equation is replaced by `sum(r) = 0`.
pub fn massey(games: &[GameRecord], n: usize) -> Result<RatingResult> {
    check_games(games, n)?;
    check_connected(games, n)?;
    let mut a = vec![0i64; n * n];
    let mut rhs = vec![0i64; n];
    for g in games {
        let (i, j) = (g.team_a, g.team_b);
        a[i * n + i] += 1;
        a[j * n + j] += 1;
        a[i * n + j] -= 1;
        a[j * n + i] -= 1;
        let diff = g.score_a as i64 - g.score_b as i64;
        rhs[i] += diff;
        rhs[j] -= diff;
    }
    a[(n - 1) * n..].fill(1);
    rhs[n - 1] = 0;
    finish(solve(&a, &rhs, n)?, FLOAT_EPSILON)
}

/// Colley ratings. Only wins and losses matter; equal scores count as a
/// game played with no winner.
pub fn colley(games: &[GameRecord], n: usize) -> Result<RatingResult> {
    check_games(games, n)?;
    // doubled system: 2C r = 2 + w - l
    let mut a = vec![0i64; n * n];
    let mut rhs = vec![2i64; n];
    for i in 0..n {
        a[i * n + i] = 4;
    }
    for g in games {
        let (i, j) = (g.team_a, g.team_b);
        a[i * n + i] += 2;
        a[j * n + j] += 2;
        a[i * n + j] -= 2;
        a[j * n + i] -= 2;
        match g.score_a.cmp(&g.score_b) {
            Ordering::Greater => {
                rhs[i] += 1;
                rhs[j] -= 1;
            }
            Ordering::Less => {
                rhs[i] -= 1;
                rhs[j] += 1;
            }
            Ordering::Equal => {}
        }
    }
    finish(solve(&a, &rhs, n)?, FLOAT_EPSILON)
}

enum Solution {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

fn solve(a: &[i64], rhs: &[i64], n: usize) -> Result<Solution> {
    if n <= EXACT_LIMIT {
        solve_exact(a, rhs, n).map(Solution::Exact)
    } else {
        solve_float(a, rhs, n).map(Solution::Float)
    }
}

fn solve_exact(a: &[i64], rhs: &[i64], n: usize) -> Result<Vec<BigRational>> {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a[i * n..(i + 1) * n].iter().map(|&v| q(v)).collect();
            row.push(q(rhs[i]));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col][col..].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            let (src, dst) = if r < col {
                let (lo, hi) = m.split_at_mut(col);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = m.split_at_mut(r);
                (&lo[col], &mut hi[0])
            };
            for c in col..=n {
                let delta = &factor * &src[c];
                dst[c] -= delta;
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

fn solve_float(a: &[i64], rhs: &[i64], n: usize) -> Result<Vec<f64>> {
    let mut m: Vec<f64> = a.iter().map(|&v| v as f64).collect();
    let mut b: Vec<f64> = rhs.iter().map(|&v| v as f64).collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x * n + col].abs().total_cmp(&m[y * n + col].abs()))
            .expect("non-empty range");
        if m[pivot * n + col] == 0.0 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for c in 0..n {
                m.swap(pivot * n + c, col * n + c);
            }
            b.swap(pivot, col);
        }
        for r in col + 1..n {
            let factor = m[r * n + col] / m[col * n + col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                m[r * n + c] -= factor * m[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r * n + c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r * n + r];
    }
    let residual = (0..n)
        .map(|r| {
            let ax: f64 = (0..n).map(|c| a[r * n + c] as f64 * x[c]).sum();
            (ax - rhs[r] as f64).abs()
        })
        .fold(0.0, f64::max);
    if residual > RESIDUAL_TOLERANCE {
        return Err(Error::Residual(residual));
    }
    Ok(x)
}

fn finish(solution: Solution, epsilon: f64) -> Result<RatingResult> {
    let (ratings, exact, ranking, pseudo_optimal) = match solution {
        Solution::Exact(exact) => {
            let ratings: Vec<f64> = exact.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
            let order = descending(&exact, |a, b| a.cmp(b));
            let tied: Vec<bool> = order.windows(2).map(|w| exact[w[0]] == exact[w[1]]).collect();
            let pseudo = block_permutations(&order, &tied, DEFAULT_CAP);
            (ratings, Some(exact), order, pseudo)
        }
        Solution::Float(ratings) => {
            let order = descending(&ratings, |a, b| a.total_cmp(b));
            let pseudo = pseudo_optimal_set(&ratings, epsilon, DEFAULT_CAP);
            (ratings, None, order, pseudo)
        }
    };
    let ystar = ystar_from_ratings(&ratings);
    Ok(RatingResult {
        ratings,
        exact,
        ranking: Ranking::from_trusted(ranking),
        ystar,
        pseudo_optimal,
    })
}

fn descending<T>(values: &[T], cmp: impl Fn(&T, &T) -> Ordering) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| cmp(&values[y], &values[x]).then(x.cmp(&y)));
    order
}

/// Item ranking implied by ratings: descending, ties by index.
pub fn ranking_from_ratings(ratings: &[f64]) -> Ranking {
    Ranking::from_trusted(descending(ratings, |a, b| a.total_cmp(b)))
}

/// `Y*(i,j) = 1/2 + (r_i - r_j) / (2 (max - min))`, clipped to `[0,1]`,
/// with a zero diagonal and all halves when every rating is equal.
pub fn ystar_from_ratings(ratings: &[f64]) -> Vec<f64> {
    let n = ratings.len();
    let max = ratings.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratings.iter().copied().fold(f64::INFINITY, f64::min);
    let span = max - min;
    let mut y = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                y[i * n + j] = if span > 0.0 {
                    (0.5 + (ratings[i] - ratings[j]) / (2.0 * span)).clamp(0.0, 1.0)
                } else {
                    0.5
                };
            }
        }
    }
    y
}

/// All rankings obtained by reordering items whose ratings chain within
/// `epsilon` of each other, lexicographically sorted and capped.
pub fn pseudo_optimal_set(ratings: &[f64], epsilon: f64, cap: usize) -> Vec<Ranking> {
    let order = descending(ratings, |a, b| a.total_cmp(b));
    let tied: Vec<bool> = order
        .windows(2)
        .map(|w| (ratings[w[0]] - ratings[w[1]]).abs() <= epsilon)
        .collect();
    block_permutations(&order, &tied, cap)
}

/// `tied[k]` joins `order[k]` and `order[k + 1]` into one block.
fn block_permutations(order: &[usize], tied: &[bool], cap: usize) -> Vec<Ranking> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (k, &item) in order.iter().enumerate() {
        if k > 0 && tied[k - 1] {
            blocks.last_mut().expect("block started").push(item);
        } else {
            blocks.push(vec![item]);
        }
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    let mut out = Vec::new();
    'outer: while out.len() < cap {
        out.push(Ranking::from_trusted(blocks.concat()));
        for b in blocks.iter_mut().rev() {
            if next_permutation(b) {
                continue 'outer;
            }
        }
        break;
    }
    out
}

/// Advances to the next lexicographic permutation; on the last one, resets
/// to the first and returns false.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        v.reverse();
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
