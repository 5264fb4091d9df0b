//! Constructive decomposition of a symmetric-Gram divisor class into
//! degenerate pairs `W(γν, ν)`, with a replayable certificate.
//!
//! The class `Σ W(λʲ, μʲ)` is first expanded by additivity into coordinate
//! terms `W(α eᵖ, β e^q)` and sorted into buckets `(p, q)`, `p ≤ q`
//! ([`bucketize`]). Diagonal terms are already degenerate. Each
//! off-diagonal bucket satisfies `Σ αβ = 0` and is reduced by repeatedly
//! merging its last two terms ([`lemma_w1_reduce`]):
//!
//! ```text
//! W(a eᵖ, b e^q) + W(c eᵖ, d e^q)
//!     = W(a eᵖ, c eᵖ) + W(d e^q, (dc/a) e^q)
//!     + W(c eᵖ + (cd/a) e^q, a eᵖ + d e^q)
//!     + W(a eᵖ, (b + dc/a) e^q)
//! ```
//!
//! using only additivity and skew-symmetry of `W`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::divisor::{gram_sum, Divisor, DivisorError, Pair};
use crate::scalar::{Field, FieldError, Scalar};
use crate::wedge::{class_of, wedge_scalars, Wedge2, WedgeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("sum of alpha*beta over the term list is {0}, not zero")]
    ConstraintViolated(String),
    #[error("Gram sum is not symmetric at entries {}", fmt_entries(.0))]
    NotSymmetricGram(Vec<(usize, usize)>),
    #[error("bucket ({}, {}) has nonzero alpha*beta sum despite a symmetric Gram sum", .0 + 1, .1 + 1)]
    InternalConstraintViolated(usize, usize),
    #[error("scalars from different number fields or dimensions")]
    MixedFields,
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn fmt_entries(entries: &[(usize, usize)]) -> String {
    entries
        .iter()
        .map(|(j, k)| format!("({},{})", j + 1, k + 1))
        .collect::<Vec<_>>()
        .join(", ")
}

impl From<WedgeError> for DecomposeError {
    fn from(_: WedgeError) -> Self {
        DecomposeError::MixedFields
    }
}

/// `Σ_j W(α_j eᵖ, β_j e^q)` on fixed axes `p < q` (or `p = q` for the
/// diagonal buckets produced by [`bucketize`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermList {
    pub field: Field,
    pub dim: usize,
    pub axis_p: usize,
    pub axis_q: usize,
    pub terms: Vec<(Scalar, Scalar)>,
}

impl TermList {
    pub fn new(field: Field, dim: usize, axis_p: usize, axis_q: usize) -> Self {
        Self {
            field,
            dim,
            axis_p,
            axis_q,
            terms: Vec::new(),
        }
    }

    pub fn with_terms(mut self, terms: Vec<(Scalar, Scalar)>) -> Self {
        self.terms = terms;
        self
    }

    /// `Σ α_j β_j`.
    pub fn pairing_sum(&self) -> Scalar {
        self.terms
            .iter()
            .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// `Σ_j α_j eᵖ ∧ β_j e^q` in the flattened model.
    pub fn class(&self) -> Result<Wedge2, DecomposeError> {
        let mut acc = Wedge2::zero();
        for (a, b) in &self.terms {
            let u = axis_vector(&self.field, self.dim, self.axis_p, a);
            let v = axis_vector(&self.field, self.dim, self.axis_q, b);
            acc.add_assign(&wedge_scalars(&u, &v, &self.field)?);
        }
        Ok(acc)
    }
}

/// A pair `(γ, ν)` standing for `W(γν, ν)`, i.e. the divisor d[γν, ν].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneratePair {
    pub gamma: Scalar,
    pub nu: Vec<Scalar>,
}

impl DegeneratePair {
    pub fn lambda(&self) -> Vec<Scalar> {
        self.nu.iter().map(|x| &self.gamma * x).collect()
    }

    pub fn class(&self, field: &Field) -> Result<Wedge2, WedgeError> {
        wedge_scalars(&self.lambda(), &self.nu, field)
    }
}

impl fmt::Display for DegeneratePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma={} nu={}", self.gamma, fmt_vec(&self.nu))
    }
}

fn fmt_vec(v: &[Scalar]) -> String {
    let cells: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", cells.join(", "))
}

fn fmt_term((a, b): &(Scalar, Scalar)) -> String {
    format!("({a}, {b})")
}

fn axis_vector(field: &Field, dim: usize, axis: usize, value: &Scalar) -> Vec<Scalar> {
    (0..dim)
        .map(|k| {
            if k == axis {
                value.clone()
            } else {
                field.zero()
            }
        })
        .collect()
}

/// One rewrite record. Axes are 0-based internally, 1-based when printed.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Step {
    /// A term with a zero scalar vanishes by additivity.
    DropZero {
        bucket: (usize, usize),
        term: (Scalar, Scalar),
    },
    /// `W(α eᵖ, β e^q)` with `p > q` becomes `W(−β e^q, α eᵖ)` in bucket `(q, p)`.
    FlipSign {
        from: (usize, usize),
        term: (Scalar, Scalar),
    },
    /// `W(α eᵖ, β eᵖ) = W((α/β)·βeᵖ, βeᵖ)`.
    DiagonalDirect {
        axis: usize,
        term: (Scalar, Scalar),
        emitted: DegeneratePair,
    },
    /// Merge of the last two terms of a bucket.
    W1Merge {
        bucket: (usize, usize),
        consumed: [(Scalar, Scalar); 2],
        emitted: [DegeneratePair; 3],
        replacement: (Scalar, Scalar),
    },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::DropZero { bucket, term } => write!(
                f,
                "drop-zero bucket=({},{}) term={}",
                bucket.0 + 1,
                bucket.1 + 1,
                fmt_term(term)
            ),
            Step::FlipSign { from, term } => write!(
                f,
                "flip-sign from=({},{}) term={} to=({},{}) term=({}, {})",
                from.0 + 1,
                from.1 + 1,
                fmt_term(term),
                from.1 + 1,
                from.0 + 1,
                -&term.1,
                term.0
            ),
            Step::DiagonalDirect {
                axis,
                term,
                emitted,
            } => write!(
                f,
                "diagonal-direct bucket=({},{}) term={} emit={{{}}}",
                axis + 1,
                axis + 1,
                fmt_term(term),
                emitted
            ),
            Step::W1Merge {
                bucket,
                consumed,
                emitted,
                replacement,
            } => write!(
                f,
                "w1-merge bucket=({},{}) consumed=[{}, {}] emit=[{{{}}}, {{{}}}, {{{}}}] keep={}",
                bucket.0 + 1,
                bucket.1 + 1,
                fmt_term(&consumed[0]),
                fmt_term(&consumed[1]),
                emitted[0],
                emitted[1],
                emitted[2],
                fmt_term(replacement)
            ),
        }
    }
}

/// Ordered rewrite trace together with the pairs it produces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<Step>,
    pub result: Vec<DegeneratePair>,
}

impl Certificate {
    /// Number of `w1-merge` steps.
    pub fn merges(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::W1Merge { .. }))
            .count()
    }

    /// Re-executes the trace against `d`, recomputing every emitted pair
    /// and checking that each step consumes what the running state holds.
    /// Returns the reproduced pair list.
    pub fn replay(&self, d: &Divisor) -> Result<Vec<DegeneratePair>, ReplayError> {
        let field = d.field();
        let m = d.dim();
        let (mut buckets, expansion) = bucketize_traced(d);
        let n = expansion.len();
        if self.steps.len() < n || self.steps[..n] != expansion[..] {
            return Err(ReplayError::ExpansionMismatch);
        }
        let mut produced = Vec::new();
        for (idx, step) in self.steps.iter().enumerate().skip(n) {
            let bad = || ReplayError::BadStep(idx);
            match step {
                Step::DiagonalDirect {
                    axis,
                    term,
                    emitted,
                } => {
                    let list = buckets.get_mut(&(*axis, *axis)).ok_or_else(bad)?;
                    if list.terms.is_empty() || list.terms[0] != *term {
                        return Err(bad());
                    }
                    list.terms.remove(0);
                    let expect = diagonal_pair(field, m, *axis, term).map_err(|_| bad())?;
                    if expect != *emitted {
                        return Err(bad());
                    }
                    produced.push(expect);
                }
                Step::W1Merge {
                    bucket,
                    consumed,
                    emitted,
                    replacement,
                } => {
                    let list = buckets.get_mut(bucket).ok_or_else(bad)?;
                    let k = list.terms.len();
                    if k < 2 || list.terms[k - 2..] != consumed[..] {
                        return Err(bad());
                    }
                    let (pairs, keep) = merge_terms(field, m, *bucket, &consumed[0], &consumed[1])
                        .map_err(|_| bad())?;
                    if pairs != *emitted || keep != *replacement {
                        return Err(bad());
                    }
                    list.terms.truncate(k - 2);
                    list.terms.push(keep);
                    produced.extend(pairs);
                }
                Step::DropZero { bucket, term } => {
                    let list = buckets.get_mut(bucket).ok_or_else(bad)?;
                    if list.terms.last() != Some(term) || !(term.0.is_zero() || term.1.is_zero()) {
                        return Err(bad());
                    }
                    list.terms.pop();
                }
                Step::FlipSign { .. } => return Err(bad()),
            }
        }
        if buckets.values().any(|l| !l.terms.is_empty()) {
            return Err(ReplayError::Unconsumed);
        }
        if produced != self.result {
            return Err(ReplayError::ResultMismatch);
        }
        Ok(produced)
    }

    /// Text form: a header, one line per step, the result pairs, and both
    /// sides of the class identity as `(i, j, num/den)` triples.
    pub fn serialize(&self, d: &Divisor) -> Result<String, DecomposeError> {
        use std::fmt::Write;
        let mut out = String::new();
        let lhs = class_of(d)?;
        let rhs = pairs_class(d.field(), &self.result)?;
        writeln!(out, "apdiv-certificate 1").unwrap();
        writeln!(out, "{}", d.field()).unwrap();
        writeln!(out, "m = {}", d.dim()).unwrap();
        writeln!(out, "steps {}", self.steps.len()).unwrap();
        for s in &self.steps {
            writeln!(out, "{s}").unwrap();
        }
        writeln!(out, "pairs {}", self.result.len()).unwrap();
        for p in &self.result {
            writeln!(out, "pair {p}").unwrap();
        }
        writeln!(out, "lhs-class {}", lhs.len()).unwrap();
        out.push_str(&lhs.serialize());
        writeln!(out, "rhs-class {}", rhs.len()).unwrap();
        out.push_str(&rhs.serialize());
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("recorded expansion steps do not match the divisor")]
    ExpansionMismatch,
    #[error("step {0} is inconsistent with the replayed state")]
    BadStep(usize),
    #[error("terms left unconsumed after the last step")]
    Unconsumed,
    #[error("replayed pairs differ from the recorded result")]
    ResultMismatch,
}

/// `Σ_k W(γ_k ν^k, ν^k)` in the flattened model.
pub fn pairs_class(field: &Field, pairs: &[DegeneratePair]) -> Result<Wedge2, WedgeError> {
    let mut acc = Wedge2::zero();
    for p in pairs {
        acc.add_assign(&p.class(field)?);
    }
    Ok(acc)
}

/// The divisor `Σ_k d[γ_k ν^k, ν^k]`.
pub fn degenerate_divisor(
    field: &Field,
    m: usize,
    pairs: &[DegeneratePair],
) -> Result<Divisor, DivisorError> {
    let list = pairs
        .iter()
        .map(|p| Pair::new(p.lambda(), p.nu.clone(), 1))
        .collect::<Result<Vec<_>, _>>()?;
    Divisor::from_pairs(field.clone(), m, list)
}

fn diagonal_pair(
    field: &Field,
    m: usize,
    axis: usize,
    (alpha, beta): &(Scalar, Scalar),
) -> Result<DegeneratePair, FieldError> {
    Ok(DegeneratePair {
        gamma: alpha.checked_div(beta)?,
        nu: axis_vector(field, m, axis, beta),
    })
}

/// One merge of `(a, b)` (second to last) and `(c, d)` (last).
fn merge_terms(
    field: &Field,
    m: usize,
    (p, q): (usize, usize),
    (a, b): &(Scalar, Scalar),
    (c, d): &(Scalar, Scalar),
) -> Result<([DegeneratePair; 3], (Scalar, Scalar)), FieldError> {
    let a_over_c = a.checked_div(c)?;
    let c_over_a = c.checked_div(a)?;
    let dc_over_a = &(d * c) * &a.inv()?;
    let d1 = DegeneratePair {
        gamma: a_over_c.clone(),
        nu: axis_vector(field, m, p, c),
    };
    let d2 = DegeneratePair {
        gamma: a_over_c,
        nu: axis_vector(field, m, q, &dc_over_a),
    };
    let mut nu3 = axis_vector(field, m, p, a);
    nu3[q] = d.clone();
    let d3 = DegeneratePair {
        gamma: c_over_a,
        nu: nu3,
    };
    let keep = (a.clone(), b + &dc_over_a);
    Ok(([d1, d2, d3], keep))
}

/// Reduces `Σ W(α_j eᵖ, β_j e^q)` with `Σ α_j β_j = 0` to degenerate pairs.
pub fn lemma_w1_reduce(t: &TermList) -> Result<(Vec<DegeneratePair>, Certificate), DecomposeError> {
    let sum = t.pairing_sum();
    if !sum.is_zero() {
        return Err(DecomposeError::ConstraintViolated(sum.to_string()));
    }
    let mut steps = Vec::new();
    let mut terms = Vec::with_capacity(t.terms.len());
    let bucket = (t.axis_p, t.axis_q);
    for term in &t.terms {
        if term.0.is_zero() || term.1.is_zero() {
            steps.push(Step::DropZero {
                bucket,
                term: term.clone(),
            });
        } else {
            terms.push(term.clone());
        }
    }
    let result = reduce_terms(&t.field, t.dim, bucket, terms, &mut steps)?;
    Ok((result.clone(), Certificate { steps, result }))
}

fn reduce_terms(
    field: &Field,
    m: usize,
    bucket: (usize, usize),
    mut terms: Vec<(Scalar, Scalar)>,
    steps: &mut Vec<Step>,
) -> Result<Vec<DegeneratePair>, DecomposeError> {
    let mut out = Vec::new();
    while terms.len() >= 2 {
        let last = terms.pop().unwrap();
        let prev = terms.pop().unwrap();
        let (emitted, keep) = merge_terms(field, m, bucket, &prev, &last)?;
        // Σαβ is conserved: a·(b + dc/a) = ab + cd
        debug_assert_eq!(
            &keep.0 * &keep.1,
            &(&prev.0 * &prev.1) + &(&last.0 * &last.1)
        );
        out.extend(emitted.iter().cloned());
        steps.push(Step::W1Merge {
            bucket,
            consumed: [prev, last],
            emitted,
            replacement: keep.clone(),
        });
        if keep.1.is_zero() {
            steps.push(Step::DropZero { bucket, term: keep });
        } else {
            terms.push(keep);
        }
    }
    if !terms.is_empty() {
        // a lone term has αβ = Σαβ = 0 with α, β ≠ 0: impossible
        return Err(DecomposeError::InternalConstraintViolated(
            bucket.0, bucket.1,
        ));
    }
    Ok(out)
}

/// Coordinate expansion of `Σ mult·W(λ, μ)` into buckets `(p, q)`, `p ≤ q`.
///
/// Pairs are visited in order, each repeated `|mult|` times with `α`
/// negated for negative multiplicity, then `p` and `q` ascending. Terms with
/// a zero scalar are dropped and terms with `p > q` flipped to
/// `(−β, α)` in bucket `(q, p)`.
pub fn bucketize(d: &Divisor) -> BTreeMap<(usize, usize), TermList> {
    bucketize_traced(d).0
}

fn bucketize_traced(d: &Divisor) -> (BTreeMap<(usize, usize), TermList>, Vec<Step>) {
    let field = d.field();
    let m = d.dim();
    let mut buckets: BTreeMap<(usize, usize), TermList> = BTreeMap::new();
    let mut steps = Vec::new();
    for pair in d.pairs() {
        let negate = pair.mult() < 0;
        for _ in 0..pair.mult().unsigned_abs() {
            for p in 0..m {
                for q in 0..m {
                    let alpha = if negate {
                        -&pair.lambda()[p]
                    } else {
                        pair.lambda()[p].clone()
                    };
                    let beta = pair.mu()[q].clone();
                    if alpha.is_zero() || beta.is_zero() {
                        steps.push(Step::DropZero {
                            bucket: (p, q),
                            term: (alpha, beta),
                        });
                        continue;
                    }
                    let (key, term) = if p > q {
                        steps.push(Step::FlipSign {
                            from: (p, q),
                            term: (alpha.clone(), beta.clone()),
                        });
                        ((q, p), (-&beta, alpha))
                    } else {
                        ((p, q), (alpha, beta))
                    };
                    buckets
                        .entry(key)
                        .or_insert_with(|| TermList::new(field.clone(), m, key.0, key.1))
                        .terms
                        .push(term);
                }
            }
        }
    }
    (buckets, steps)
}

/// Decomposes the class of `d` into degenerate pairs. Requires a
/// symmetric Gram sum.
pub fn decompose(d: &Divisor) -> Result<(Vec<DegeneratePair>, Certificate), DecomposeError> {
    let gram = gram_sum(d);
    if !gram.is_symmetric() {
        return Err(DecomposeError::NotSymmetricGram(gram.asymmetric_entries()));
    }
    let field = d.field();
    let m = d.dim();
    let (buckets, mut steps) = bucketize_traced(d);
    let mut result = Vec::new();
    for (&(p, q), list) in &buckets {
        if p == q {
            for term in &list.terms {
                let emitted = diagonal_pair(field, m, p, term)?;
                result.push(emitted.clone());
                steps.push(Step::DiagonalDirect {
                    axis: p,
                    term: term.clone(),
                    emitted,
                });
            }
        } else {
            if !list.pairing_sum().is_zero() {
                return Err(DecomposeError::InternalConstraintViolated(p, q));
            }
            result.extend(reduce_terms(
                field,
                m,
                (p, q),
                list.terms.clone(),
                &mut steps,
            )?);
        }
    }
    Ok((result.clone(), Certificate { steps, result }))
}

/// True iff `class_of(d) = Σ_k W(γ_k ν^k, ν^k)` exactly.
pub fn verify_certificate(d: &Divisor, pairs: &[DegeneratePair]) -> Result<bool, DecomposeError> {
    if pairs
        .iter()
        .any(|p| p.nu.len() != d.dim() || p.gamma.field() != d.field())
    {
        return Err(DecomposeError::MixedFields);
    }
    Ok(class_of(d)? == pairs_class(d.field(), pairs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::a_matrix;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        ratio(n, 1)
    }

    fn sqrt2() -> Field {
        Field::new(vec![q(-2), q(0), q(1)], (q(1), ratio(3, 2))).unwrap()
    }

    fn unit(f: &Field, m: usize, i: usize) -> Vec<Scalar> {
        axis_vector(f, m, i, &f.one())
    }

    #[test]
    fn merge_identity_holds_for_random_terms() {
        // Independent check of the merge identity in Λ²(ℚ⁴) through wedge
        // expansion of both sides, for several scalar choices.
        let f = sqrt2();
        let r = f.theta();
        let samples = [
            (f.one(), r.clone(), r.clone(), f.int(-1)),
            (f.int(3), &r + &f.one(), f.rational(ratio(-1, 2)), r.clone()),
            (
                &r - &f.int(2),
                f.int(5),
                &r * &f.int(7),
                f.rational(ratio(2, 3)),
            ),
        ];
        for (a, b, c, d) in samples {
            let t = TermList::new(f.clone(), 2, 0, 1)
                .with_terms(vec![(a.clone(), b.clone()), (c.clone(), d.clone())]);
            let lhs = t.class().unwrap();
            let (pairs, keep) = merge_terms(&f, 2, (0, 1), &(a, b), &(c, d)).unwrap();
            let rest = TermList::new(f.clone(), 2, 0, 1)
                .with_terms(vec![keep])
                .class()
                .unwrap();
            let rhs = pairs_class(&f, &pairs).unwrap().add(&rest);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn worked_sqrt2_reduction() {
        let f = sqrt2();
        let r = f.theta();
        let t = TermList::new(f.clone(), 2, 0, 1)
            .with_terms(vec![(f.one(), r.clone()), (r.clone(), f.int(-1))]);
        let (pairs, cert) = lemma_w1_reduce(&t).unwrap();
        let inv_r = r.inv().unwrap();
        assert_eq!(
            pairs,
            vec![
                DegeneratePair {
                    gamma: inv_r.clone(),
                    nu: vec![r.clone(), f.zero()]
                },
                DegeneratePair {
                    gamma: inv_r,
                    nu: vec![f.zero(), -&r]
                },
                DegeneratePair {
                    gamma: r.clone(),
                    nu: vec![f.one(), f.int(-1)]
                },
            ]
        );
        assert_eq!(cert.merges(), 1);
        // u1∧u4 − u2∧u3, indices 0-based
        let expected = Wedge2::basis(0, 3, q(1)).add(&Wedge2::basis(1, 2, q(-1)));
        assert_eq!(t.class().unwrap(), expected);
        assert_eq!(pairs_class(&f, &pairs).unwrap(), expected);
    }

    #[test]
    fn reduction_edge_cases() {
        let f = Field::rationals();
        let empty = TermList::new(f.clone(), 2, 0, 1);
        let (pairs, cert) = lemma_w1_reduce(&empty).unwrap();
        assert!(pairs.is_empty() && cert.steps.is_empty());

        let t = TermList::new(f.clone(), 2, 0, 1)
            .with_terms(vec![(f.one(), f.one()), (f.int(-1), f.one())]);
        let (pairs, _) = lemma_w1_reduce(&t).unwrap();
        assert_eq!(pairs.len(), 3);
        for p in &pairs {
            assert!(p.class(&f).unwrap().is_zero());
        }
        assert!(t.class().unwrap().is_zero());

        let bad = TermList::new(f.clone(), 2, 0, 1).with_terms(vec![(f.one(), f.one())]);
        assert!(matches!(
            lemma_w1_reduce(&bad),
            Err(DecomposeError::ConstraintViolated(_))
        ));
    }

    #[test]
    fn output_size_bound() {
        let f = sqrt2();
        let r = f.theta();
        // five terms with Σαβ = 0 and no intermediate cancellation
        let terms = vec![
            (f.one(), f.int(1)),
            (f.int(2), r.clone()),
            (r.clone(), f.int(3)),
            (f.int(1), f.int(1)),
            (
                f.int(-1),
                &(&f.int(2) + &(&r * &f.int(2))) + &(&r * &f.int(3)),
            ),
        ];
        let t = TermList::new(f.clone(), 3, 0, 2).with_terms(terms);
        assert!(t.pairing_sum().is_zero());
        let (pairs, cert) = lemma_w1_reduce(&t).unwrap();
        assert_eq!(pairs.len(), 3 * 4);
        assert_eq!(cert.merges(), 4);
        assert_eq!(t.class().unwrap(), pairs_class(&f, &pairs).unwrap());
    }

    #[test]
    fn bucketize_examples() {
        let f = Field::rationals();
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(vec![f.one(), f.one()], vec![f.zero(), f.one()], 1)
            .unwrap();
        let b = bucketize(&d);
        assert_eq!(b.len(), 2);
        assert_eq!(b[&(0, 1)].terms, vec![(f.one(), f.one())]);
        assert_eq!(b[&(1, 1)].terms, vec![(f.one(), f.one())]);

        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(unit(&f, 2, 1), unit(&f, 2, 0), 1).unwrap();
        assert_eq!(bucketize(&d)[&(0, 1)].terms, vec![(f.int(-1), f.one())]);

        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(unit(&f, 2, 0), unit(&f, 2, 1), -1).unwrap();
        assert_eq!(bucketize(&d)[&(0, 1)].terms, vec![(f.int(-1), f.one())]);
    }

    #[test]
    fn decompose_examples() {
        let f = sqrt2();
        let r = f.theta();
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(unit(&f, 2, 0), vec![f.zero(), r.clone()], 1)
            .unwrap();
        d.add_pair(vec![r.clone(), f.zero()], vec![f.zero(), f.int(-1)], 1)
            .unwrap();
        let (pairs, cert) = decompose(&d).unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(verify_certificate(&d, &pairs).unwrap());
        assert_eq!(cert.replay(&d).unwrap(), pairs);

        let g = Field::rationals();
        let mut d = Divisor::new(g.clone(), 2);
        d.add_pair(unit(&g, 2, 0), vec![g.int(3), g.zero()], 1)
            .unwrap();
        let (pairs, _) = decompose(&d).unwrap();
        assert_eq!(
            pairs,
            vec![DegeneratePair {
                gamma: g.rational(ratio(1, 3)),
                nu: vec![g.int(3), g.zero()]
            }]
        );

        let mut d = Divisor::new(g.clone(), 2);
        d.add_pair(unit(&g, 2, 0), unit(&g, 2, 1), 1).unwrap();
        assert_eq!(
            decompose(&d),
            Err(DecomposeError::NotSymmetricGram(vec![(0, 1)]))
        );
    }

    #[test]
    fn verify_without_pairs() {
        let f = sqrt2();
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(unit(&f, 2, 0), vec![f.theta(), f.zero()], 1)
            .unwrap();
        assert!(!verify_certificate(&d, &[]).unwrap());
        let g = Field::rationals();
        let mut d = Divisor::new(g.clone(), 2);
        d.add_pair(unit(&g, 2, 0), vec![g.int(2), g.zero()], 1)
            .unwrap();
        assert!(verify_certificate(&d, &[]).unwrap());
        let wrong = DegeneratePair {
            gamma: f.one(),
            nu: unit(&f, 2, 0),
        };
        assert_eq!(
            verify_certificate(&d, &[wrong]),
            Err(DecomposeError::MixedFields)
        );
    }

    #[test]
    fn degenerate_pairs_have_zero_a_matrix() {
        let f = sqrt2();
        let r = f.theta();
        let mut d = Divisor::new(f.clone(), 3);
        d.add_pair(
            vec![f.one(), r.clone(), f.zero()],
            vec![r.clone(), f.int(2), f.int(1)],
            1,
        )
        .unwrap();
        d.add_pair(
            vec![r.clone(), f.int(2), f.int(1)],
            vec![f.one(), r.clone(), f.zero()],
            1,
        )
        .unwrap();
        let (pairs, cert) = decompose(&d).unwrap();
        assert!(verify_certificate(&d, &pairs).unwrap());
        assert!(a_matrix(&degenerate_divisor(&f, 3, &pairs).unwrap()).is_zero());
        assert_eq!(cert.replay(&d).unwrap(), pairs);
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let f = Field::rationals();
        let mut d = Divisor::new(f.clone(), 2);
        d.add_pair(vec![f.one(), f.int(2)], vec![f.int(3), f.one()], 1)
            .unwrap();
        d.add_pair(vec![f.int(3), f.one()], vec![f.one(), f.int(2)], 1)
            .unwrap();
        let (_, mut cert) = decompose(&d).unwrap();
        assert!(cert.replay(&d).is_ok());
        if let Some(Step::W1Merge { emitted, .. }) = cert
            .steps
            .iter_mut()
            .find(|s| matches!(s, Step::W1Merge { .. }))
        {
            emitted[0].gamma = &emitted[0].gamma + &f.one();
        }
        assert!(matches!(cert.replay(&d), Err(ReplayError::BadStep(_))));
    }
}
