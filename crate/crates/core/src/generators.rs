//! Seeded generators for structured artificial instances.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Each random decision uses its own
//! stream (`set_stream`), so changing one parameter never shifts another
//! decision's draws:
//!
//! | stream | use                                   |
//! |--------|---------------------------------------|
//! | 1      | which cells receive noise             |
//! | 2      | noise values                          |
//! | 3      | game outcomes in `simulate_games`     |
//! | 4      | cells removed by [`perturb`]          |
//! | 5      | cells added by [`perturb`]            |
//! | 6      | values of cells added by [`perturb`]  |
//!
//! Cells are listed row-major and chosen by a full shuffle of that list;
//! noise counts are `round_half_up(percent / 100 * cells)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{self, Rational};
use crate::{DominanceMatrix, Error, Result};

const STREAM_CELLS: u64 = 1;
const STREAM_VALUES: u64 = 2;
const STREAM_GAMES: u64 = 3;
const STREAM_REMOVE: u64 = 4;
const STREAM_ADD: u64 = 5;
const STREAM_ADD_VALUES: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Empty,
    EmptyPlusNoise,
    Connected,
    ConnectedMinusNoise,
    DominancePlusNoise,
    HillsidePlusNoise,
    Cyclic,
    Special,
    SimulateGames,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Empty,
        Kind::EmptyPlusNoise,
        Kind::Connected,
        Kind::ConnectedMinusNoise,
        Kind::DominancePlusNoise,
        Kind::HillsidePlusNoise,
        Kind::Cyclic,
        Kind::Special,
        Kind::SimulateGames,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Empty => "empty",
            Kind::EmptyPlusNoise => "empty_plus_noise",
            Kind::Connected => "connected",
            Kind::ConnectedMinusNoise => "connected_minus_noise",
            Kind::DominancePlusNoise => "dominance_plus_noise",
            Kind::HillsidePlusNoise => "hillside_plus_noise",
            Kind::Cyclic => "cyclic",
            Kind::Special => "special",
            Kind::SimulateGames => "simulate_games",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Whether the output depends on `seed`.
    pub fn is_stochastic(self) -> bool {
        matches!(
            self,
            Kind::EmptyPlusNoise
                | Kind::ConnectedMinusNoise
                | Kind::DominancePlusNoise
                | Kind::HillsidePlusNoise
                | Kind::SimulateGames
        )
    }
}

/// Full description of a generated instance. Only the fields relevant to
/// `kind` are read.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub kind: Kind,
    pub n: usize,
    /// Share of off-diagonal cells receiving noise, in `[0, 100]`.
    pub percent: Rational,
    pub lo: i64,
    pub hi: i64,
    /// 1-based inclusive block bounds for `special`.
    pub block_begin: usize,
    pub block_end: usize,
    pub p_upset: Rational,
    pub games_per_pair: u32,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: Kind, n: usize) -> Self {
        Self {
            kind,
            n,
            percent: Rational::zero(),
            lo: 1,
            hi: 1,
            block_begin: 1,
            block_end: 1,
            p_upset: Rational::zero(),
            games_per_pair: 1,
            seed: 0,
        }
    }

    pub fn noise(mut self, percent: Rational, lo: i64, hi: i64) -> Self {
        self.percent = percent;
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn block(mut self, begin: usize, end: usize) -> Self {
        self.block_begin = begin;
        self.block_end = end;
        self
    }

    pub fn games(mut self, p_upset: Rational, games_per_pair: u32) -> Self {
        self.p_upset = p_upset;
        self.games_per_pair = games_per_pair;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        check_percent("percent", &self.percent)?;
        match self.kind {
            Kind::EmptyPlusNoise | Kind::HillsidePlusNoise if self.lo < 0 || self.lo > self.hi => {
                bad(format!("noise bounds need 0 <= lo <= hi, got [{}, {}]", self.lo, self.hi))
            }
            Kind::Special if !(1 <= self.block_begin && self.block_begin <= self.block_end && self.block_end <= self.n) => bad(
                format!(
                    "block needs 1 <= begin <= end <= n, got {}..{} with n = {}",
                    self.block_begin, self.block_end, self.n
                ),
            ),
            Kind::SimulateGames if self.p_upset < Rational::zero() || self.p_upset > Rational::one() => {
                bad("p_upset must lie in [0, 1]".into())
            }
            Kind::SimulateGames if self.games_per_pair == 0 => bad("games_per_pair must be at least 1".into()),
            _ => Ok(()),
        }
    }
}

fn check_percent(name: &str, p: &Rational) -> Result<()> {
    if *p < Rational::zero() || *p > rational::int(100) {
        return Err(Error::InvalidSpec(format!("{name} must lie in [0, 100]")));
    }
    Ok(())
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn share(percent: &Rational, cells: usize) -> usize {
    let count = rational::round_half_up(&(*percent * rational::int(cells as i64) / rational::int(100)));
    usize::try_from(count).expect("percent is nonnegative")
}

/// Picks `round(percent% of cells)` of `cells` with the given stream.
fn choose(mut cells: Vec<(usize, usize)>, percent: &Rational, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let count = share(percent, cells.len());
    cells.shuffle(rng);
    cells.truncate(count);
    cells
}

fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

fn filled(n: usize, value: impl Fn(usize, usize) -> i64) -> DominanceMatrix {
    let mut d = DominanceMatrix::zeros(n);
    for (i, j) in off_diagonal(n) {
        let v = value(i, j);
        if v != 0 {
            d.set(i, j, rational::int(v));
        }
    }
    d
}

pub fn generate(spec: &GenSpec) -> Result<DominanceMatrix> {
    spec.validate()?;
    let n = spec.n;
    let noise_cells = || choose(off_diagonal(n), &spec.percent, &mut stream(spec.seed, STREAM_CELLS));
    let mut values = stream(spec.seed, STREAM_VALUES);
    let d = match spec.kind {
        Kind::Empty => DominanceMatrix::zeros(n),
        Kind::Connected => filled(n, |_, _| 1),
        Kind::EmptyPlusNoise => {
            let mut d = DominanceMatrix::zeros(n);
            for (i, j) in noise_cells() {
                d.set(i, j, rational::int(values.random_range(spec.lo..=spec.hi)));
            }
            d
        }
        Kind::ConnectedMinusNoise => {
            let mut d = filled(n, |_, _| 1);
            for (i, j) in noise_cells() {
                d.set(i, j, Rational::zero());
            }
            d
        }
        Kind::DominancePlusNoise => {
            let mut d = filled(n, |i, j| i64::from(i < j));
            for (i, j) in noise_cells() {
                let flipped = if d.get(i, j).is_zero() { Rational::one() } else { Rational::zero() };
                d.set(i, j, flipped);
            }
            d
        }
        Kind::HillsidePlusNoise => {
            let mut d = filled(n, |i, j| if j > i { (j - i) as i64 } else { 0 });
            for (i, j) in noise_cells() {
                d.set(i, j, rational::int(values.random_range(spec.lo..=spec.hi)));
            }
            d
        }
        Kind::Cyclic => {
            let mut d = DominanceMatrix::zeros(n);
            if n > 1 {
                for i in 0..n {
                    d.set(i, (i + 1) % n, Rational::one());
                }
            }
            d
        }
        Kind::Special => {
            let block = spec.block_begin - 1..spec.block_end;
            filled(n, |i, j| i64::from(i < j && !(block.contains(&i) && block.contains(&j))))
        }
        Kind::SimulateGames => simulate_games(n, &spec.p_upset, spec.games_per_pair, spec.seed),
    };
    Ok(d)
}

/// Ground truth `0 > 1 > ... > n-1`; each game is an upset with
/// probability `p_upset`, drawn exactly as `uniform(0..den) < num`.
fn simulate_games(n: usize, p_upset: &Rational, games: u32, seed: u64) -> DominanceMatrix {
    let mut rng = stream(seed, STREAM_GAMES);
    let num = *p_upset.numer() as u64;
    let den = *p_upset.denom() as u64;
    let mut wins = alloc::vec![0i64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..games {
                if rng.random_range(0..den) < num {
                    wins[j * n + i] += 1;
                } else {
                    wins[i * n + j] += 1;
                }
            }
        }
    }
    filled(n, |i, j| wins[i * n + j])
}

/// `D'(i,j) = 1` iff `D(i,j) > D(j,i)`.
pub fn unweighted(d: &DominanceMatrix) -> DominanceMatrix {
    let mut out = DominanceMatrix::zeros(d.n());
    for (i, j) in off_diagonal(d.n()) {
        if d.get(i, j) > d.get(j, i) {
            out.set(i, j, Rational::one());
        }
    }
    match d.item_names() {
        Some(names) => out.with_item_names(names.to_vec()).expect("same size"),
        None => out,
    }
}

/// Edge edits for [`perturb`]. Added cells get uniform integers in
/// `[lo, hi]`, which defaults to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub add_percent: Rational,
    pub remove_percent: Rational,
    pub lo: i64,
    pub hi: i64,
    pub seed: u64,
}

impl Perturbation {
    pub fn new(add_percent: Rational, remove_percent: Rational, seed: u64) -> Self {
        Self { add_percent, remove_percent, lo: 1, hi: 1, seed }
    }
}

/// Removes a share of the nonzero cells and fills a share of the zero
/// off-diagonal cells. Both shares are taken from the input matrix.
pub fn perturb(d: &DominanceMatrix, p: &Perturbation) -> Result<DominanceMatrix> {
    check_percent("add percent", &p.add_percent)?;
    check_percent("remove percent", &p.remove_percent)?;
    if p.lo < 1 || p.lo > p.hi {
        return Err(Error::InvalidSpec(format!(
            "added values need 1 <= lo <= hi, got [{}, {}]",
            p.lo, p.hi
        )));
    }
    let (nonzero, zero): (Vec<_>, Vec<_>) = off_diagonal(d.n())
        .into_iter()
        .partition(|&(i, j)| !d.get(i, j).is_zero());
    let removed = choose(nonzero, &p.remove_percent, &mut stream(p.seed, STREAM_REMOVE));
    let added = choose(zero, &p.add_percent, &mut stream(p.seed, STREAM_ADD));
    let mut values = stream(p.seed, STREAM_ADD_VALUES);
    let mut out = d.clone();
    for (i, j) in removed {
        out.set(i, j, Rational::zero());
    }
    for (i, j) in added {
        out.set(i, j, rational::int(values.random_range(p.lo..=p.hi)));
    }
    Ok(out)
}
