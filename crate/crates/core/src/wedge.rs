//! Exterior square of the ℚ-vector space underlying K^m.
//!
//! A vector of `m` scalars in K = ℚ(θ) is flattened coordinate by coordinate
//! in the θ-power basis into `m·deg` rationals ([`QVector`]). The class of a
//! model divisor d[λ, μ] is represented by `λ ∧ μ` in Λ²(ℚ^{m·deg})
//! ([`Wedge2`]), which is ℚ-bilinear and alternating.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::divisor::Divisor;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedgeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scalars from different number fields")]
    MixedFields,
}

/// A vector of K^m flattened to ℚ^{m·deg}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QVector {
    coords: Vec<BigRational>,
    m: usize,
    deg: usize,
}

impl QVector {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Flattens `v ∈ K^m`: entry `p` contributes coordinates `p·deg .. (p+1)·deg`.
pub fn embed(v: &[Scalar], field: &Field) -> Result<QVector, WedgeError> {
    let deg = field.degree();
    let mut coords = Vec::with_capacity(v.len() * deg);
    for s in v {
        if s.field() != field {
            return Err(WedgeError::MixedFields);
        }
        coords.extend_from_slice(s.coeffs());
    }
    Ok(QVector {
        coords,
        m: v.len(),
        deg,
    })
}

/// Sparse element of Λ²(ℚⁿ): coefficients of `u_i ∧ u_j` for `i < j`
/// (0-based), zeros never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Wedge2 {
    terms: BTreeMap<(usize, usize), BigRational>,
}

impl Wedge2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis bivector `u_i ∧ u_j` scaled by `c`; indices in either order.
    pub fn basis(i: usize, j: usize, c: BigRational) -> Self {
        let mut w = Self::zero();
        w.add_term(i, j, c);
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: usize, j: usize) -> BigRational {
        if i < j {
            self.terms
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(BigRational::zero)
        } else if i > j {
            -self
                .terms
                .get(&(j, i))
                .cloned()
                .unwrap_or_else(BigRational::zero)
        } else {
            BigRational::zero()
        }
    }

    fn add_term(&mut self, i: usize, j: usize, c: BigRational) {
        let (key, c) = match i.cmp(&j) {
            std::cmp::Ordering::Less => ((i, j), c),
            std::cmp::Ordering::Greater => ((j, i), -c),
            std::cmp::Ordering::Equal => return,
        };
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Wedge2) -> Wedge2 {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Wedge2) {
        for (&(i, j), c) in &other.terms {
            self.add_term(i, j, c.clone());
        }
    }

    pub fn scale(&self, n: i64) -> Wedge2 {
        if n == 0 {
            return Wedge2::zero();
        }
        let k = BigRational::from_integer(BigInt::from(n));
        Wedge2 {
            terms: self.terms.iter().map(|(&key, c)| (key, c * &k)).collect(),
        }
    }

    /// `(i, j, num/den)` triples with 1-based indices, one per line.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Wedge2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), c) in &self.terms {
            writeln!(f, "({}, {}, {}/{})", i + 1, j + 1, c.numer(), c.denom())?;
        }
        Ok(())
    }
}

/// `u ∧ v`: coefficient of `(i, j)`, `i < j`, is `u_i v_j − u_j v_i`.
pub fn wedge(u: &QVector, v: &QVector) -> Result<Wedge2, WedgeError> {
    if u.coords.len() != v.coords.len() {
        return Err(WedgeError::DimensionMismatch {
            expected: u.coords.len(),
            found: v.coords.len(),
        });
    }
    let mut terms = BTreeMap::new();
    let n = u.coords.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let c = &u.coords[i] * &v.coords[j] - &u.coords[j] * &v.coords[i];
            if !c.is_zero() {
                terms.insert((i, j), c);
            }
        }
    }
    Ok(Wedge2 { terms })
}

/// `embed(a) ∧ embed(b)` for scalar vectors over `field`.
pub fn wedge_scalars(a: &[Scalar], b: &[Scalar], field: &Field) -> Result<Wedge2, WedgeError> {
    wedge(&embed(a, field)?, &embed(b, field)?)
}

/// The class `c(d) = Σ mult_j · λʲ ∧ μʲ`.
pub fn class_of(d: &Divisor) -> Result<Wedge2, WedgeError> {
    let mut acc = Wedge2::zero();
    for p in d.pairs() {
        let w = wedge_scalars(p.lambda(), p.mu(), d.field())?;
        acc.add_assign(&w.scale(p.mult()));
    }
    Ok(acc)
}

/// Rank over ℚ of a list of flattened vectors, by fraction-exact Gaussian
/// elimination. Independent of [`wedge`]; used for ℚ-dependence tests.
pub fn rank_q(vectors: &[&QVector]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors.iter().map(|v| v.coords.clone()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &factor * p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
