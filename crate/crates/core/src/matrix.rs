use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Square nonnegative matrix where entry `(i, j)` is the evidence that item
/// `i` dominates item `j`. The diagonal is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DominanceMatrix {
    n: usize,
    entries: Vec<Rational>,
    item_names: Option<Vec<String>>,
}

impl DominanceMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare { rows: 0, row: 0, cols: 0 });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, row: i, cols: row.len() });
            }
            entries.extend(row);
        }
        Self::from_flat(n, entries)
    }

    /// Builds from a row-major `n * n` buffer.
    pub fn from_flat(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::NotSquare { rows: n, row: 0, cols: entries.len() / n.max(1) });
        }
        for i in 0..n {
            for j in 0..n {
                let v = &entries[i * n + j];
                if !rational::nonnegative(v) {
                    return Err(Error::NegativeEntry(i, j));
                }
                if i == j && !v.is_zero() {
                    return Err(Error::NonzeroDiagonal(i));
                }
            }
        }
        Ok(Self { n, entries, item_names: None })
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| rational::int(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "a dominance matrix needs at least one item");
        Self { n, entries: vec![Rational::zero(); n * n], item_names: None }
    }

    pub fn with_item_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::NameCount { expected: self.n, got: names.len() });
        }
        self.item_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries[i * self.n + j]
    }

    /// Sets an off-diagonal entry. Panics on the diagonal or a negative value.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i != j, "diagonal entries are fixed at zero");
        assert!(rational::nonnegative(&value), "entries are nonnegative");
        self.entries[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn item_names(&self) -> Option<&[String]> {
        self.item_names.as_deref()
    }

    /// False iff every entry is 0 or 1.
    pub fn is_weighted(&self) -> bool {
        !self.entries.iter().all(rational::is_binary)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(
            DominanceMatrix::from_integers(&[vec![0, 1], vec![0]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert_eq!(
            DominanceMatrix::from_integers(&[[1, 0], [0, 0]]),
            Err(Error::NonzeroDiagonal(0))
        );
        assert_eq!(
            DominanceMatrix::from_integers(&[[0, -1], [0, 0]]),
            Err(Error::NegativeEntry(0, 1))
        );
        assert!(DominanceMatrix::new(Vec::new()).is_err());
    }

    #[test]
    fn weighted_flag_tracks_entries() {
        let d = DominanceMatrix::from_integers(&[[0, 1], [0, 0]]).unwrap();
        assert!(!d.is_weighted());
        let d = DominanceMatrix::from_integers(&[[0, 2], [1, 0]]).unwrap();
        assert!(d.is_weighted());
        assert!(!DominanceMatrix::zeros(3).is_weighted());
    }
}
