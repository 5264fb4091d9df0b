//! Formal integer combinations of model divisors d[λ, μ].
//!
//! d[λ, μ] is the zero divisor of `g(⟨z,λ⟩ + i⟨z,μ⟩)` where `g` has simple
//! zeros exactly on ℤ + iℤ. Everything here is exact over a number field:
//! the skew matrix `A(d) = Σ mult·((μ,λ) − (λ,μ))`, the Gram sum
//! `Σ mult·(λ,μ)`, the almost-periodic-modulus criterion `A(d) = 0`, the
//! congruence law `Bᵀ A₀ B`, periods and the ℚ/ℝ dependence classification.

use std::fmt;

use thiserror::Error;

use crate::scalar::{Field, FieldError, Scalar};
use crate::wedge::{embed, rank_q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scalars from different number fields")]
    MixedFields,
    #[error("pair with lambda = mu = 0 is a unit divisor")]
    ZeroPair,
    #[error("multiplicity must be nonzero")]
    ZeroMultiplicity,
    #[error("lambda and mu are linearly dependent over R; the divisor has no period lattice")]
    RDependentPair,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One model divisor `mult · d[λ, μ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    lambda: Vec<Scalar>,
    mu: Vec<Scalar>,
    mult: i64,
}

impl Pair {
    pub fn new(lambda: Vec<Scalar>, mu: Vec<Scalar>, mult: i64) -> Result<Self, DivisorError> {
        if lambda.len() != mu.len() {
            return Err(DivisorError::DimensionMismatch {
                expected: lambda.len(),
                found: mu.len(),
            });
        }
        if mult == 0 {
            return Err(DivisorError::ZeroMultiplicity);
        }
        if lambda.iter().chain(&mu).all(Scalar::is_zero) {
            return Err(DivisorError::ZeroPair);
        }
        if let Some(first) = lambda.first() {
            if lambda.iter().chain(&mu).any(|s| s.field() != first.field()) {
                return Err(DivisorError::MixedFields);
            }
        }
        Ok(Self { lambda, mu, mult })
    }

    pub fn lambda(&self) -> &[Scalar] {
        &self.lambda
    }

    pub fn mu(&self) -> &[Scalar] {
        &self.mu
    }

    pub fn mult(&self) -> i64 {
        self.mult
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }
}

/// A formal sum `Σ mult_j · d[λʲ, μʲ]` over a fixed field and dimension.
/// Negative multiplicities are allowed, so divisors form a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    field: Field,
    m: usize,
    pairs: Vec<Pair>,
}

impl Divisor {
    pub fn new(field: Field, m: usize) -> Self {
        Self {
            field,
            m,
            pairs: Vec::new(),
        }
    }

    pub fn from_pairs(field: Field, m: usize, pairs: Vec<Pair>) -> Result<Self, DivisorError> {
        let mut d = Self::new(field, m);
        for p in pairs {
            d.push(p)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, pair: Pair) -> Result<(), DivisorError> {
        if pair.dim() != self.m {
            return Err(DivisorError::DimensionMismatch {
                expected: self.m,
                found: pair.dim(),
            });
        }
        if pair.lambda.iter().any(|s| s.field() != &self.field) {
            return Err(DivisorError::MixedFields);
        }
        self.pairs.push(pair);
        Ok(())
    }

    /// Shorthand for pushing `mult · d[λ, μ]`.
    pub fn add_pair(
        &mut self,
        lambda: Vec<Scalar>,
        mu: Vec<Scalar>,
        mult: i64,
    ) -> Result<(), DivisorError> {
        self.push(Pair::new(lambda, mu, mult)?)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Formal sum `self + other` (pair lists concatenated).
    pub fn concat(&self, other: &Divisor) -> Result<Divisor, DivisorError> {
        if other.field != self.field {
            return Err(DivisorError::MixedFields);
        }
        let mut d = self.clone();
        for p in &other.pairs {
            d.push(p.clone())?;
        }
        Ok(d)
    }
}

/// Dense square matrix over K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Field, n: usize) -> Self {
        Self {
            field: field.clone(),
            n,
            data: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut out = Self::zeros(field, n);
        for i in 0..n {
            out.data[i * n + i] = field.one();
        }
        out
    }

    /// Square matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Self, DivisorError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(DivisorError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if row.iter().any(|s| s.field() != field) {
                return Err(DivisorError::MixedFields);
            }
            data.extend(row);
        }
        Ok(Self {
            field: field.clone(),
            n,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                *out.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(&self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * other.get(k, j);
                    let cell = out.get_mut(i, j);
                    *cell = &*cell + &prod;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_skew(&self) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    /// Approximate `f64` image, row-major.
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows()
            .map(|r| r.iter().map(Scalar::to_f64).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Skew-symmetric m×m matrix `A(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AMatrix(Matrix);

impl AMatrix {
    /// Wraps `m`, checking exact skew-symmetry.
    pub fn new(m: Matrix) -> Option<Self> {
        m.is_skew().then_some(Self(m))
    }

    /// `A₀ = A(d[e¹, e²])`: −1 at (1,2), +1 at (2,1), zero elsewhere.
    pub fn base(field: &Field, m: usize) -> Self {
        assert!(m >= 2, "A0 needs m >= 2");
        let mut a = Matrix::zeros(field, m);
        *a.get_mut(0, 1) = field.int(-1);
        *a.get_mut(1, 0) = field.one();
        Self(a)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Gram sum `Σ mult·(λ, μ)`; symmetry is a property, not an invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix(Matrix);

impl GramMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.is_symmetric()
    }

    /// Index pairs `(j, k)`, `j < k`, where `G[j][k] ≠ G[k][j]` (0-based).
    pub fn asymmetric_entries(&self) -> Vec<(usize, usize)> {
        let n = self.0.dim();
        (0..n)
            .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
            .filter(|&(j, k)| self.0.get(j, k) != self.0.get(k, j))
            .collect()
    }
}

fn common_field<'a>(a: &'a [Scalar], b: &'a [Scalar]) -> Option<&'a Field> {
    a.first().or(b.first()).map(Scalar::field)
}

/// The outer product `(λ, μ) = (λ_j μ_k)`.
pub fn outer(lambda: &[Scalar], mu: &[Scalar]) -> Result<GramMatrix, DivisorError> {
    if lambda.len() != mu.len() {
        return Err(DivisorError::DimensionMismatch {
            expected: lambda.len(),
            found: mu.len(),
        });
    }
    let field = common_field(lambda, mu)
        .cloned()
        .unwrap_or_else(Field::rationals);
    if lambda.iter().chain(mu).any(|s| s.field() != &field) {
        return Err(DivisorError::MixedFields);
    }
    let n = lambda.len();
    let data = lambda
        .iter()
        .flat_map(|l| mu.iter().map(move |m| l * m))
        .collect();
    Ok(GramMatrix(Matrix { field, n, data }))
}

fn outer_unchecked(field: &Field, lambda: &[Scalar], mu: &[Scalar]) -> Matrix {
    Matrix {
        field: field.clone(),
        n: lambda.len(),
        data: lambda
            .iter()
            .flat_map(|l| mu.iter().map(move |m| l * m))
            .collect(),
    }
}

/// `A(d) = Σ mult·((μ,λ) − (λ,μ))`.
pub fn a_matrix(d: &Divisor) -> AMatrix {
    let m = d.m;
    let mut acc = Matrix::zeros(&d.field, m);
    for p in &d.pairs {
        let k = d.field.int(p.mult);
        for j in 0..m {
            for l in j + 1..m {
                let minor = &(&p.mu[j] * &p.lambda[l]) - &(&p.lambda[j] * &p.mu[l]);
                if minor.is_zero() {
                    continue;
                }
                let v = &minor * &k;
                *acc.get_mut(j, l) = acc.get(j, l) + &v;
                *acc.get_mut(l, j) = acc.get(l, j) - &v;
            }
        }
    }
    AMatrix::new(acc).expect("A(d) is skew-symmetric by construction")
}

/// `Σ mult·(λ, μ)`.
pub fn gram_sum(d: &Divisor) -> GramMatrix {
    let mut acc = Matrix::zeros(&d.field, d.m);
    for p in &d.pairs {
        let k = d.field.int(p.mult);
        acc = acc.add(&outer_unchecked(&d.field, &p.lambda, &p.mu).scale(&k));
    }
    GramMatrix(acc)
}

/// True iff `d` is the divisor of a holomorphic function with
/// almost-periodic modulus, i.e. iff `A(d) = 0`.
pub fn ap_modulus_criterion(d: &Divisor) -> bool {
    a_matrix(d).is_zero()
}

/// `Bᵀ · A₀ · B`.
pub fn congruence(b: &Matrix, a0: &AMatrix) -> Result<AMatrix, DivisorError> {
    if b.dim() != a0.0.dim() {
        return Err(DivisorError::DimensionMismatch {
            expected: a0.0.dim(),
            found: b.dim(),
        });
    }
    if b.field() != a0.0.field() {
        return Err(DivisorError::MixedFields);
    }
    let out = b.transpose().mul(&a0.0).mul(b);
    Ok(AMatrix::new(out).expect("congruence preserves skew-symmetry"))
}

fn dot(a: &[Scalar], b: &[Scalar], field: &Field) -> Scalar {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Periods `P₁, P₂` of d[λ, μ]: `⟨P₁,λ⟩ = 1, ⟨P₁,μ⟩ = 0, ⟨P₂,λ⟩ = 0, ⟨P₂,μ⟩ = 1`,
///
/// `P₁ = (|μ|²λ − ⟨λ,μ⟩μ) / D`, `P₂ = (|λ|²μ − ⟨λ,μ⟩λ) / D`,
/// `D = |λ|²|μ|² − ⟨λ,μ⟩²`.
pub fn periods(
    lambda: &[Scalar],
    mu: &[Scalar],
) -> Result<(Vec<Scalar>, Vec<Scalar>), DivisorError> {
    if lambda.len() != mu.len() {
        return Err(DivisorError::DimensionMismatch {
            expected: lambda.len(),
            found: mu.len(),
        });
    }
    let field = common_field(lambda, mu)
        .ok_or(DivisorError::RDependentPair)?
        .clone();
    if lambda.iter().chain(mu).any(|s| s.field() != &field) {
        return Err(DivisorError::MixedFields);
    }
    let ll = dot(lambda, lambda, &field);
    let mm = dot(mu, mu, &field);
    let lm = dot(lambda, mu, &field);
    let denom = &(&ll * &mm) - &(&lm * &lm);
    if denom.is_zero() {
        return Err(DivisorError::RDependentPair);
    }
    let inv = denom.inv()?;
    let combine = |a: &Scalar, u: &[Scalar], b: &Scalar, v: &[Scalar]| -> Vec<Scalar> {
        u.iter()
            .zip(v)
            .map(|(x, y)| &(&(a * x) - &(b * y)) * &inv)
            .collect()
    };
    Ok((combine(&mm, lambda, &lm, mu), combine(&ll, mu, &lm, lambda)))
}

/// Dependence and periodicity profile of a single d[λ, μ].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    pub q_dependent: bool,
    pub r_dependent: bool,
    pub periodic: bool,
    pub holo_ap_divisor: bool,
    pub ap_modulus: bool,
}

/// ℝ-dependence: every 2×2 minor `λ_i μ_j − λ_j μ_i` vanishes in K.
pub fn r_dependent(lambda: &[Scalar], mu: &[Scalar]) -> bool {
    let n = lambda.len();
    (0..n).all(|i| ((i + 1)..n).all(|j| &lambda[i] * &mu[j] == &lambda[j] * &mu[i]))
}

/// ℚ-dependence: rank over ℚ of the flattened vectors is below 2.
pub fn q_dependent(lambda: &[Scalar], mu: &[Scalar]) -> Result<bool, DivisorError> {
    let field = common_field(lambda, mu)
        .cloned()
        .unwrap_or_else(Field::rationals);
    let a = embed(lambda, &field).map_err(|_| DivisorError::MixedFields)?;
    let b = embed(mu, &field).map_err(|_| DivisorError::MixedFields)?;
    Ok(rank_q(&[&a, &b]) < 2)
}

pub fn classify_pair(lambda: &[Scalar], mu: &[Scalar]) -> Result<PairClass, DivisorError> {
    if lambda.len() != mu.len() {
        return Err(DivisorError::DimensionMismatch {
            expected: lambda.len(),
            found: mu.len(),
        });
    }
    let q_dep = q_dependent(lambda, mu)?;
    let r_dep = r_dependent(lambda, mu);
    Ok(PairClass {
        q_dependent: q_dep,
        r_dependent: r_dep,
        periodic: q_dep || !r_dep,
        holo_ap_divisor: q_dep,
        ap_modulus: r_dep || q_dep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        ratio(n, 1)
    }

    fn sqrt2() -> Field {
        Field::new(vec![q(-2), q(0), q(1)], (q(1), ratio(3, 2))).unwrap()
    }

    fn unit(f: &Field, m: usize, i: usize) -> Vec<Scalar> {
        (0..m)
            .map(|k| if k == i { f.one() } else { f.zero() })
            .collect()
    }

    fn scaled(v: &[Scalar], s: &Scalar) -> Vec<Scalar> {
        v.iter().map(|x| x * s).collect()
    }

    #[test]
    fn outer_examples() {
        let f = sqrt2();
        let g = outer(&unit(&f, 2, 0), &unit(&f, 2, 1)).unwrap();
        assert_eq!(*g.matrix().get(0, 1), f.one());
        assert_eq!(g.matrix().data.iter().filter(|s| !s.is_zero()).count(), 1);
        assert!(outer(&unit(&f, 2, 0), &[f.zero(), f.zero()])
            .unwrap()
            .matrix()
            .is_zero());
        let r = f.theta();
        let g = outer(&[f.one(), r.clone()], &[r.clone(), f.one()]).unwrap();
        let m = g.matrix();
        assert_eq!((m.get(0, 0), m.get(0, 1)), (&r, &f.one()));
        assert_eq!((m.get(1, 0), m.get(1, 1)), (&f.int(2), &r));
        assert!(matches!(
            outer(&[f.one()], &[f.one(), f.one()]),
            Err(DivisorError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn base_a_matrix_in_dimension_four() {
        let f = Field::rationals();
        let mut d = Divisor::new(f.clone(), 4);
        d.add_pair(unit(&f, 4, 0), unit(&f, 4, 1), 1).unwrap();
        let a = a_matrix(&d);
        assert_eq!(a, AMatrix::base(&f, 4));
        assert!(!ap_modulus_criterion(&d));
    }

    #[test]
    fn proportional_and_symmetric_sums_vanish() {
        let f = sqrt2();
        let lambda = vec![f.one(), f.int(3)];
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(lambda.clone(), scaled(&lambda, &f.theta()), 1)
            .unwrap();
        assert!(a_matrix(&d).is_zero());
        assert!(ap_modulus_criterion(&d));

        let mu = vec![f.theta(), f.int(-1)];
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(lambda.clone(), mu.clone(), 1).unwrap();
        d.add_pair(mu, lambda, 1).unwrap();
        assert!(a_matrix(&d).is_zero());
    }

    #[test]
    fn gram_examples() {
        let f = Field::rationals();
        let (e1, e2) = (unit(&f, 2, 0), unit(&f, 2, 1));
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(e1.clone(), e2.clone(), 1).unwrap();
        assert!(!gram_sum(&d).is_symmetric());
        assert_eq!(gram_sum(&d).asymmetric_entries(), vec![(0, 1)]);
        d.add_pair(e2, e1, 1).unwrap();
        let g = gram_sum(&d);
        assert!(g.is_symmetric());
        assert_eq!(g.matrix().to_f64(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(ap_modulus_criterion(&d));
    }

    #[test]
    fn divisor_rejects_bad_pairs() {
        let f = Field::rationals();
        let g = sqrt2();
        assert_eq!(
            Pair::new(vec![f.zero(), f.zero()], vec![f.zero(), f.zero()], 1),
            Err(DivisorError::ZeroPair)
        );
        assert_eq!(
            Pair::new(unit(&f, 2, 0), unit(&f, 2, 1), 0),
            Err(DivisorError::ZeroMultiplicity)
        );
        let mut d = Divisor::new(f.clone(), 2);
        assert!(matches!(
            d.add_pair(unit(&f, 3, 0), unit(&f, 3, 1), 1),
            Err(DivisorError::DimensionMismatch { .. })
        ));
        assert_eq!(
            d.add_pair(unit(&g, 2, 0), unit(&g, 2, 1), 1),
            Err(DivisorError::MixedFields)
        );
    }

    #[test]
    fn congruence_examples() {
        let f = sqrt2();
        let a0 = AMatrix::base(&f, 2);
        let id = Matrix::identity(&f, 2);
        assert_eq!(congruence(&id, &a0).unwrap(), a0);
        let two = id.scale(&f.int(2));
        assert_eq!(
            congruence(&two, &a0).unwrap().matrix(),
            &a0.matrix().scale(&f.int(4))
        );
        let lambda = vec![f.one(), f.theta()];
        let mu = vec![f.int(3), &f.theta() - &f.one()];
        let b = Matrix::from_rows(&f, vec![lambda.clone(), mu.clone()]).unwrap();
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(lambda, mu, 1).unwrap();
        assert_eq!(congruence(&b, &a0).unwrap(), a_matrix(&d));
        assert!(congruence(&Matrix::identity(&f, 3), &a0).is_err());
    }

    #[test]
    fn period_examples() {
        let f = Field::rationals();
        let (e1, e2) = (unit(&f, 2, 0), unit(&f, 2, 1));
        assert_eq!(periods(&e1, &e2).unwrap(), (e1.clone(), e2.clone()));
        assert_eq!(periods(&e1, &e1), Err(DivisorError::RDependentPair));
        let (p1, p2) = periods(&[f.one(), f.one()], &[f.one(), f.int(-1)]).unwrap();
        let half = f.rational(ratio(1, 2));
        assert_eq!(p1, vec![half.clone(), half.clone()]);
        assert_eq!(p2, vec![half.clone(), -&half]);
    }

    #[test]
    fn classification_examples() {
        let f = sqrt2();
        let (e1, e2) = (unit(&f, 2, 0), unit(&f, 2, 1));
        let c = classify_pair(&e1, &e2).unwrap();
        assert_eq!(
            c,
            PairClass {
                q_dependent: false,
                r_dependent: false,
                periodic: true,
                holo_ap_divisor: false,
                ap_modulus: false,
            }
        );
        let c = classify_pair(&e1, &scaled(&e1, &f.theta())).unwrap();
        assert_eq!(
            c,
            PairClass {
                q_dependent: false,
                r_dependent: true,
                periodic: false,
                holo_ap_divisor: false,
                ap_modulus: true,
            }
        );
        let c = classify_pair(&e1, &scaled(&e1, &f.int(2))).unwrap();
        assert!(c.q_dependent && c.periodic && c.holo_ap_divisor && c.ap_modulus);
    }
}
