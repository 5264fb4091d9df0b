//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use apdiv_core::scalar::ratio;
use apdiv_core::{Divisor, Field, Matrix, Scalar};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> BigRational {
    ratio(n, 1)
}

/// ℚ(√2) with θ = √2.
pub fn sqrt2_field() -> Field {
    Field::new(vec![q(-2), q(0), q(1)], (q(1), ratio(3, 2))).unwrap()
}

/// ℚ(√2 + √3), θ ≈ 3.146.
pub fn sqrt2_sqrt3_field() -> Field {
    Field::with_assumed_irreducible(vec![q(1), q(0), q(-10), q(0), q(1)], (q(3), ratio(7, 2)))
        .unwrap()
}

/// Axis vector `c·e^{axis}`.
pub fn axis(field: &Field, m: usize, k: usize, c: Scalar) -> Vec<Scalar> {
    (0..m)
        .map(|i| if i == k { c.clone() } else { field.zero() })
        .collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let f = a[0].field().clone();
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| &acc + &(x * y))
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// ℚ or ℚ(√2), equally likely.
    pub fn field(&mut self) -> Field {
        if self.coin() {
            Field::rationals()
        } else {
            sqrt2_field()
        }
    }

    /// Small rational, zero with probability about 1/5.
    pub fn rational(&mut self) -> BigRational {
        if self.rng.gen_ratio(1, 5) {
            return q(0);
        }
        ratio(self.rng.gen_range(-6..=6), self.rng.gen_range(1..=4))
    }

    pub fn scalar(&mut self, field: &Field) -> Scalar {
        let coeffs = (0..field.degree()).map(|_| self.rational()).collect();
        field.scalar(coeffs).unwrap()
    }

    pub fn nonzero_scalar(&mut self, field: &Field) -> Scalar {
        loop {
            let s = self.scalar(field);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn vector(&mut self, field: &Field, m: usize) -> Vec<Scalar> {
        (0..m).map(|_| self.scalar(field)).collect()
    }

    /// `(λ, μ)` not both zero.
    pub fn pair(&mut self, field: &Field, m: usize) -> (Vec<Scalar>, Vec<Scalar>) {
        loop {
            let l = self.vector(field, m);
            let u = self.vector(field, m);
            if l.iter().chain(&u).any(|s| !s.is_zero()) {
                return (l, u);
            }
        }
    }

    /// `(λ, μ)` linearly independent over ℝ.
    pub fn independent_pair(&mut self, field: &Field, m: usize) -> (Vec<Scalar>, Vec<Scalar>) {
        loop {
            let (l, u) = self.pair(field, m);
            let minor = (0..m)
                .any(|i| (i + 1..m).any(|j| !(&(&l[i] * &u[j]) - &(&l[j] * &u[i])).is_zero()));
            if minor {
                return (l, u);
            }
        }
    }

    pub fn mult(&mut self) -> i64 {
        let k = self.rng.gen_range(1..=3);
        if self.coin() {
            k
        } else {
            -k
        }
    }

    /// Unconstrained divisor with `n` pairs.
    pub fn divisor(&mut self, field: &Field, m: usize, n: usize) -> Divisor {
        let mut d = Divisor::new(field.clone(), m);
        for _ in 0..n {
            let (l, u) = self.pair(field, m);
            let k = self.mult();
            d.add_pair(l, u, k).unwrap();
        }
        d
    }

    /// Divisor with symmetric Gram sum and at most `max_pairs` pairs: random
    /// pairs are followed by their transposes `(μ, λ)`, and ℝ-proportional
    /// pairs `(γν, ν)` are mixed in.
    pub fn symmetric_divisor(&mut self, field: &Field, m: usize, max_pairs: usize) -> Divisor {
        let mut d = Divisor::new(field.clone(), m);
        let free = self.below(max_pairs / 2 + 1);
        let extra = self.below(max_pairs - 2 * free + 1);
        let mut pending = Vec::new();
        for _ in 0..free {
            let (l, u) = self.pair(field, m);
            let k = self.mult();
            pending.push((l.clone(), u.clone(), k));
            pending.push((u, l, k));
        }
        for _ in 0..extra {
            let nu = loop {
                let v = self.vector(field, m);
                if v.iter().any(|s| !s.is_zero()) {
                    break v;
                }
            };
            let gamma = self.scalar(field);
            let lambda = nu.iter().map(|x| &gamma * x).collect();
            pending.push((lambda, nu, self.mult()));
        }
        // shuffle so transposes are not always adjacent
        for i in (1..pending.len()).rev() {
            let j = self.below(i + 1);
            pending.swap(i, j);
        }
        for (l, u, k) in pending {
            d.add_pair(l, u, k).unwrap();
        }
        d
    }

    /// Symmetric-Gram or unconstrained divisor, equally likely.
    pub fn mixed_divisor(&mut self, field: &Field, m: usize, max_pairs: usize) -> Divisor {
        if self.coin() {
            self.symmetric_divisor(field, m, max_pairs)
        } else {
            let n = self.below(max_pairs + 1);
            self.divisor(field, m, n)
        }
    }

    /// Random invertible 2×2 matrix.
    pub fn invertible_2x2(&mut self, field: &Field) -> Matrix {
        loop {
            let rows: Vec<Vec<Scalar>> = (0..2).map(|_| self.vector(field, 2)).collect();
            let det = &(&rows[0][0] * &rows[1][1]) - &(&rows[0][1] * &rows[1][0]);
            if !det.is_zero() {
                return Matrix::from_rows(field, rows).unwrap();
            }
        }
    }
}
