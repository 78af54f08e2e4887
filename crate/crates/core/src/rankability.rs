//! Rankability measures and the geometry of an optimal set.
//!
//! `X*` is built from the enumerated optima: entry `(a, b)`, in the
//! coordinates of a reference ranking, is the share of optima that put the
//! item at reference position `a` above the item at position `b`.
//!
//! `beta` scores where indecision sits. Each pair of positions `a < b`
//! contributes its indecision `2 * min(x, 1 - x)` weighted by
//! `(b - a) * (n - a)`, so disagreement far from the diagonal and near the
//! top of the ranking costs the most. The weighted sum is normalized by the
//! total weight, giving a value in `[0, 1]` where lower is better.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::lop::{self, CostProblem, Method};
use crate::rational::Rational;
use crate::{rank_vector, Error, Measures, OptimalSet, Ranking, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetGeometry {
    /// Largest Kendall tau distance between two optima.
    pub diameter: usize,
    pub farthest_pair: (Ranking, Ranking),
    /// Nearest pair of distinct optima; absent for a singleton set.
    pub closest_pair: Option<(Ranking, Ranking)>,
    /// Mean 1-based rank vector over the set.
    pub centroid: Vec<Rational>,
    pub centroid_closest: Ranking,
    pub centroid_farthest: Ranking,
}

/// One bit per unordered item pair: set iff the lower-numbered item is
/// ranked above the higher one. Kendall tau is the popcount of the xor.
fn pair_signature(r: &Ranking) -> Vec<u64> {
    let n = r.len();
    let pos = rank_vector(r);
    let bits = n * n.saturating_sub(1) / 2;
    let mut sig = vec![0u64; bits.div_ceil(64).max(1)];
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if pos[a] < pos[b] {
                sig[k / 64] |= 1 << (k % 64);
            }
            k += 1;
        }
    }
    sig
}

fn signature_distance(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

/// Diameter, extreme pairs and centroid representatives of `p`. Every tie
/// goes to the lexicographically first candidate.
pub fn set_geometry(p: &OptimalSet) -> Result<SetGeometry> {
    let rankings = &p.rankings;
    let first = rankings.first().ok_or(Error::EmptySet)?;
    let n = first.len();
    if let Some(r) = rankings.iter().find(|r| r.len() != n) {
        return Err(Error::LengthMismatch(n, r.len()));
    }

    let sigs: Vec<Vec<u64>> = rankings.iter().map(pair_signature).collect();
    let mut farthest = (0, 0, 0);
    let mut closest: Option<(usize, usize, usize)> = None;
    for i in 0..sigs.len() {
        for j in i + 1..sigs.len() {
            let d = signature_distance(&sigs[i], &sigs[j]);
            if d > farthest.0 {
                farthest = (d, i, j);
            }
            if closest.is_none_or(|(best, _, _)| d < best) {
                closest = Some((d, i, j));
            }
        }
    }

    // Compare m^2 * squared distance in integers, m = |P|.
    let m = rankings.len() as i128;
    let vectors: Vec<Vec<usize>> = rankings.iter().map(rank_vector).collect();
    let mut sums = vec![0i128; n];
    for v in &vectors {
        for (s, &x) in sums.iter_mut().zip(v) {
            *s += x as i128;
        }
    }
    let spread = |v: &[usize]| -> i128 {
        v.iter()
            .zip(&sums)
            .map(|(&x, &s)| {
                let d = m * x as i128 - s;
                d * d
            })
            .sum()
    };
    let spreads: Vec<i128> = vectors.iter().map(|v| spread(v)).collect();
    let mut near = 0;
    let mut far = 0;
    for (i, &s) in spreads.iter().enumerate() {
        if s < spreads[near] {
            near = i;
        }
        if s > spreads[far] {
            far = i;
        }
    }

    let m64 = i64::try_from(m).expect("optimal set size fits in i64");
    let centroid = sums
        .iter()
        .map(|&s| Rational::new(i64::try_from(s).expect("rank sum fits in i64"), m64))
        .collect();
    let pair = |i: usize, j: usize| (rankings[i].clone(), rankings[j].clone());
    Ok(SetGeometry {
        diameter: farthest.0,
        farthest_pair: pair(farthest.1, farthest.2),
        closest_pair: closest.map(|(_, i, j)| pair(i, j)),
        centroid,
        centroid_closest: rankings[near].clone(),
        centroid_farthest: rankings[far].clone(),
    })
}

/// Pairwise consensus over an optimal set, in the coordinates of `reference`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XStar {
    n: usize,
    values: Vec<Rational>,
    reference: Ranking,
    /// Set when the optimal set behind it was truncated by the cap.
    pub estimated: bool,
}

impl XStar {
    /// `values` is row-major in reference-position coordinates. Checks
    /// `x(a,b) + x(b,a) = 1`, the zero diagonal and the `[0,1]` range.
    pub fn new(reference: Ranking, values: Vec<Rational>, estimated: bool) -> Result<Self> {
        let n = reference.len();
        if values.len() != n * n {
            return Err(Error::LengthMismatch(n * n, values.len()));
        }
        for a in 0..n {
            if !values[a * n + a].is_zero() {
                return Err(Error::NonzeroDiagonal(a));
            }
            for b in 0..n {
                let v = values[a * n + b];
                if v < Rational::zero() || v > Rational::one() {
                    return Err(Error::NegativeEntry(a, b));
                }
                if a != b && v + values[b * n + a] != Rational::one() {
                    return Err(Error::NotSquare { rows: n, row: a, cols: b });
                }
            }
        }
        Ok(Self { n, values, reference, estimated })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reference(&self) -> &Ranking {
        &self.reference
    }

    /// Entry for reference positions `a` and `b`.
    pub fn get(&self, a: usize, b: usize) -> Rational {
        self.values[a * self.n + b]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn fractional_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_integer()).count() / 2
    }
}

pub fn xstar(p: &OptimalSet, reference: &Ranking) -> Result<XStar> {
    if p.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = reference.len();
    let mut above = vec![0i64; n * n];
    for r in &p.rankings {
        if r.len() != n {
            return Err(Error::LengthMismatch(n, r.len()));
        }
        let pos = rank_vector(r);
        let ref_order = reference.order();
        for a in 0..n {
            for b in a + 1..n {
                if pos[ref_order[a]] < pos[ref_order[b]] {
                    above[a * n + b] += 1;
                }
            }
        }
    }
    let m = p.len() as i64;
    let mut values = vec![Rational::zero(); n * n];
    for a in 0..n {
        for b in a + 1..n {
            let x = Rational::new(above[a * n + b], m);
            values[a * n + b] = x;
            values[b * n + a] = Rational::one() - x;
        }
    }
    Ok(XStar { n, values, reference: reference.clone(), estimated: !p.complete })
}

/// Position weight of the pair `a < b` in an `n`-item ranking.
pub fn beta_weight(n: usize, a: usize, b: usize) -> i64 {
    ((b - a) * (n - a)) as i64
}

/// `0` for a certain entry, `1` for an even split.
pub fn indecision(x: &Rational) -> Rational {
    let two = Rational::from_integer(2);
    two * (*x).min(Rational::one() - x)
}

pub fn beta(x: &XStar) -> Rational {
    let n = x.n();
    let mut weighted = Rational::zero();
    let mut total = 0i64;
    for a in 0..n {
        for b in a + 1..n {
            let w = beta_weight(n, a, b);
            weighted += indecision(&x.get(a, b)) * w;
            total += w;
        }
    }
    if total == 0 {
        Rational::zero()
    } else {
        weighted / total
    }
}

/// Everything computed for one instance under one method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub method: Method,
    pub set: OptimalSet,
    pub geometry: SetGeometry,
    pub xstar: XStar,
    /// Optima of the `k` objective; absent for weighted matrices.
    pub k_set: Option<OptimalSet>,
    pub measures: Measures,
}

/// Runs `method` and the `k` objective through `solve`, then derives the
/// geometry, `X*` (referenced to the centroid-closest optimum) and measures.
pub fn analyze_with<F>(d: &crate::DominanceMatrix, method: Method, cap: usize, solve: F) -> Result<Analysis>
where
    F: Fn(&CostProblem, usize) -> OptimalSet,
{
    let set = solve(&lop::problem_for(d, method)?, cap);
    let k_set = match method {
        Method::K => Some(set.clone()),
        _ if d.is_weighted() => None,
        _ => Some(solve(&lop::k_problem(d)?, cap)),
    };
    let geometry = set_geometry(&set)?;
    let xstar = xstar(&set, &geometry.centroid_closest)?;
    let measures = Measures {
        k: k_set.as_ref().map(|s| s.objective),
        p: set.len(),
        tau: geometry.diameter,
        beta: beta(&xstar),
    };
    Ok(Analysis { method, set, geometry, xstar, k_set, measures })
}

pub fn analyze(d: &crate::DominanceMatrix, method: Method, cap: usize) -> Result<Analysis> {
    analyze_with(d, method, cap, lop::solve_enumerate)
}

pub fn measures(d: &crate::DominanceMatrix, method: Method, cap: usize) -> Result<Measures> {
    analyze(d, method, cap).map(|a| a.measures)
}
