//! Vectors over ℕ, linear and semilinear sets, and a nonnegative integer
//! feasibility solver.

mod solver;

use std::collections::HashSet;
use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

pub use solver::{solve_nonneg, Equation, LinearSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilinearError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed vector `{0}`")]
    Malformed(String),
}

/// A vector in ℕ^s. Arithmetic is checked: overflowing `u64` panics rather
/// than wrapping.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<u64>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0; dim])
    }

    /// The `i`-th unit vector (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Vector(v)
    }

    pub fn new(entries: Vec<u64>) -> Self {
        Vector(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn max_entry(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Panics on dimension mismatch or overflow.
    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimensions differ");
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("counter overflow"))
                .collect(),
        )
    }

    pub fn add_assign(&mut self, other: &Vector) {
        assert_eq!(self.dim(), other.dim(), "vector dimensions differ");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = a.checked_add(*b).expect("counter overflow");
        }
    }

    pub fn scale(&self, k: u64) -> Vector {
        Vector(
            self.0
                .iter()
                .map(|a| a.checked_mul(k).expect("counter overflow"))
                .collect(),
        )
    }

    /// `self - other` when it stays in ℕ^s.
    pub fn checked_sub(&self, other: &Vector) -> Option<Vector> {
        assert_eq!(self.dim(), other.dim(), "vector dimensions differ");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Vector)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Vector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self` with `x` appended as a new last coordinate.
    pub fn extended(&self, x: u64) -> Vector {
        let mut v = self.0.clone();
        v.push(x);
        Vector(v)
    }
}

impl Index<usize> for Vector {
    type Output = u64;

    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl From<Vec<u64>> for Vector {
    fn from(v: Vec<u64>) -> Self {
        Vector(v)
    }
}

impl<const N: usize> From<[u64; N]> for Vector {
    fn from(v: [u64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl FromIterator<u64> for Vector {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Vector {
    type Err = SemilinearError;

    /// Space-separated decimal entries.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map(Vector)
            .map_err(|_| SemilinearError::Malformed(s.to_string()))
    }
}

/// `{ base + Σ m_i·periods[i] | m_i ∈ ℕ }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSet {
    base: Vector,
    periods: Vec<Vector>,
}

impl LinearSet {
    pub fn new(base: Vector, periods: Vec<Vector>) -> Result<Self, SemilinearError> {
        for p in &periods {
            if p.dim() != base.dim() {
                return Err(SemilinearError::DimensionMismatch {
                    expected: base.dim(),
                    found: p.dim(),
                });
            }
        }
        Ok(LinearSet { base, periods })
    }

    pub fn singleton(base: Vector) -> Self {
        LinearSet {
            base,
            periods: Vec::new(),
        }
    }

    /// ℕ^dim.
    pub fn universe(dim: usize) -> Self {
        LinearSet {
            base: Vector::zeros(dim),
            periods: (0..dim).map(|i| Vector::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &Vector {
        &self.base
    }

    pub fn periods(&self) -> &[Vector] {
        &self.periods
    }

    /// The same set without all-zero periods.
    pub fn normalized(&self) -> LinearSet {
        LinearSet {
            base: self.base.clone(),
            periods: self
                .periods
                .iter()
                .filter(|p| !p.is_zero())
                .cloned()
                .collect(),
        }
    }

    pub fn member(&self, d: &Vector) -> Result<bool, SemilinearError> {
        self.witness(d).map(|w| w.is_some())
    }

    /// Coefficients `m` (aligned with [`periods`](Self::periods)) with
    /// `base + Σ m_i·p_i = d`.
    ///
    /// Depth-first over periods, largest coefficient first, pruning when a
    /// residual coordinate can no longer be covered by the remaining periods.
    /// Failed `(period index, residual)` pairs are memoised.
    pub fn witness(&self, d: &Vector) -> Result<Option<Vec<u64>>, SemilinearError> {
        if d.dim() != self.dim() {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dim(),
                found: d.dim(),
            });
        }
        let Some(residual) = d.checked_sub(&self.base) else {
            return Ok(None);
        };
        let live: Vec<usize> = (0..self.periods.len())
            .filter(|&i| !self.periods[i].is_zero())
            .collect();
        // covers[k][j]: some period in live[k..] is nonzero at coordinate j
        let mut covers = vec![vec![false; self.dim()]; live.len() + 1];
        for k in (0..live.len()).rev() {
            let p = &self.periods[live[k]];
            covers[k] = (0..self.dim())
                .map(|j| covers[k + 1][j] || p[j] > 0)
                .collect();
        }

        struct Search<'a> {
            set: &'a LinearSet,
            live: &'a [usize],
            covers: &'a [Vec<bool>],
            failed: HashSet<(usize, Vector)>,
            coeffs: Vec<u64>,
        }

        impl Search<'_> {
            fn go(&mut self, k: usize, r: &Vector) -> bool {
                if r.is_zero() {
                    return true;
                }
                if k == self.live.len() {
                    return false;
                }
                if (0..r.dim()).any(|j| r[j] > 0 && !self.covers[k][j]) {
                    return false;
                }
                if self.failed.contains(&(k, r.clone())) {
                    return false;
                }
                let p = &self.set.periods[self.live[k]];
                let max = (0..r.dim())
                    .filter(|&j| p[j] > 0)
                    .map(|j| r[j] / p[j])
                    .min()
                    .expect("live periods are nonzero");
                for c in (0..=max).rev() {
                    let rest = r.checked_sub(&p.scale(c)).expect("c bounded by residual");
                    if self.go(k + 1, &rest) {
                        self.coeffs[self.live[k]] = c;
                        return true;
                    }
                }
                self.failed.insert((k, r.clone()));
                false
            }
        }

        let mut search = Search {
            set: self,
            live: &live,
            covers: &covers,
            failed: HashSet::new(),
            coeffs: vec![0; self.periods.len()],
        };
        Ok(search.go(0, &residual).then_some(search.coeffs))
    }

    /// `base + Σ coeffs[i]·periods[i]`.
    pub fn evaluate(&self, coeffs: &[u64]) -> Vector {
        assert_eq!(coeffs.len(), self.periods.len());
        let mut v = self.base.clone();
        for (p, &c) in self.periods.iter().zip(coeffs) {
            v.add_assign(&p.scale(c));
        }
        v
    }
}

impl fmt::Display for LinearSet {
    /// The `linear b.. | p.. | ..` line body, without the keyword.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for p in &self.periods {
            write!(f, " | {p}")?;
        }
        Ok(())
    }
}

/// A finite union of linear sets of one dimension; no components is ∅.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearSet {
    dim: usize,
    components: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn new(dim: usize, components: Vec<LinearSet>) -> Result<Self, SemilinearError> {
        for c in &components {
            if c.dim() != dim {
                return Err(SemilinearError::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
        }
        Ok(SemilinearSet { dim, components })
    }

    pub fn empty(dim: usize) -> Self {
        SemilinearSet {
            dim,
            components: Vec::new(),
        }
    }

    pub fn universe(dim: usize) -> Self {
        SemilinearSet {
            dim,
            components: vec![LinearSet::universe(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    pub fn is_empty_set(&self) -> bool {
        self.components.is_empty()
    }

    pub fn member(&self, d: &Vector) -> Result<bool, SemilinearError> {
        self.membership_witness(d).map(|w| w.is_some())
    }

    /// The first component (in declaration order) containing `d`, with its
    /// coefficients.
    pub fn membership_witness(
        &self,
        d: &Vector,
    ) -> Result<Option<(usize, Vec<u64>)>, SemilinearError> {
        if d.dim() != self.dim {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dim,
                found: d.dim(),
            });
        }
        for (i, c) in self.components.iter().enumerate() {
            if let Some(m) = c.witness(d)? {
                return Ok(Some((i, m)));
            }
        }
        Ok(None)
    }

    /// Panicking shorthand for callers that have already checked dimensions.
    pub fn contains(&self, d: &Vector) -> bool {
        self.member(d).expect("dimension checked by caller")
    }
}
