//! Exact arithmetic in a real number field ℚ(θ).
//!
//! A [`Field`] is a monic minimal polynomial `p` together with a rational
//! interval isolating the real root `θ` that fixes the embedding into ℝ.
//! A [`Scalar`] is an element `c₀ + c₁θ + … + c_{deg−1}θ^{deg−1}` with
//! reduced rational coefficients, so equality is coefficient-wise.
//!
//! Signs and real approximations are decided exactly: the isolating interval
//! is bisected on demand and the scalar's polynomial is evaluated over the
//! refined interval until the enclosure excludes zero (or is narrow enough).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("minimal polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("minimal polynomial is not monic (leading coefficient {0})")]
    NonMonic(BigRational),
    #[error("root interval [{}, {}] is empty", .0.0, .0.1)]
    InvalidInterval(Box<(BigRational, BigRational)>),
    #[error("no root of the minimal polynomial lies strictly inside the interval")]
    NoRootInInterval,
    #[error("{0} roots of the minimal polynomial lie inside the interval")]
    MultipleRootsInInterval(usize),
    #[error("minimal polynomial has the rational root {0}")]
    RationalRootPresent(BigRational),
    #[error("degree {0} minimal polynomials need an explicit irreducibility assertion")]
    IrreducibilityNotAsserted(usize),
    #[error("minimal polynomial has a repeated factor")]
    NotSquarefree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor modulo the asserted minimal polynomial")]
    NotInvertible,
    #[error("scalar literal has {got} coefficients but the field has degree {degree}")]
    TooManyCoefficients { got: usize, degree: usize },
}

/// Validated presentation of ℚ(θ) with its real embedding.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    minpoly: Poly,
    lo: BigRational,
    hi: BigRational,
    assume_irreducible: bool,
}

impl FieldSpec {
    pub fn minpoly(&self) -> &[BigRational] {
        self.minpoly.coeffs()
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn assumes_irreducible(&self) -> bool {
        self.assume_irreducible
    }
}

/// Shared handle to a [`FieldSpec`]. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Field {}

impl std::ops::Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl Field {
    /// Builds ℚ(θ) from `minpoly` (increasing degree, monic) and an interval
    /// `(lo, hi)` containing exactly one real root strictly inside.
    ///
    /// Degrees 1 to 3 are certified irreducible by the rational root test.
    /// Higher degrees are rejected unless built through
    /// [`Field::with_assumed_irreducible`].
    pub fn new(
        minpoly: Vec<BigRational>,
        interval: (BigRational, BigRational),
    ) -> Result<Self, FieldError> {
        Self::build(minpoly, interval, false)
    }

    /// As [`Field::new`], for degree ≥ 4 where the caller vouches that the
    /// polynomial is irreducible. Only the rational-root and squarefree
    /// checks are run.
    pub fn with_assumed_irreducible(
        minpoly: Vec<BigRational>,
        interval: (BigRational, BigRational),
    ) -> Result<Self, FieldError> {
        Self::build(minpoly, interval, true)
    }

    /// ℚ itself, presented as ℚ(θ) with θ = 0.
    pub fn rationals() -> Self {
        Self::new(
            vec![BigRational::zero(), BigRational::one()],
            (-BigRational::one(), BigRational::one()),
        )
        .expect("x has the root 0 in (-1, 1)")
    }

    fn build(
        minpoly: Vec<BigRational>,
        (lo, hi): (BigRational, BigRational),
        assume_irreducible: bool,
    ) -> Result<Self, FieldError> {
        let p = Poly::new(minpoly);
        let degree = p.degree().unwrap_or(0);
        if degree == 0 {
            return Err(FieldError::ConstantPolynomial);
        }
        let lead = p.leading().unwrap();
        if !lead.is_one() {
            return Err(FieldError::NonMonic(lead.clone()));
        }
        if lo >= hi {
            return Err(FieldError::InvalidInterval(Box::new((lo, hi))));
        }
        if degree == 1 {
            let root = -&p.coeffs()[0];
            if root <= lo || root >= hi {
                return Err(FieldError::NoRootInInterval);
            }
        } else {
            if let Some(r) = p.find_rational_root() {
                return Err(FieldError::RationalRootPresent(r));
            }
            if degree >= 4 {
                if !assume_irreducible {
                    return Err(FieldError::IrreducibilityNotAsserted(degree));
                }
                if p.gcd(&p.derivative()).degree() != Some(0) {
                    return Err(FieldError::NotSquarefree);
                }
            }
            // No rational roots, so neither endpoint is a root and the
            // half-open Sturm count equals the open one.
            match p.count_roots(&lo, &hi) {
                0 => return Err(FieldError::NoRootInInterval),
                1 => {}
                n => return Err(FieldError::MultipleRootsInInterval(n)),
            }
        }
        Ok(Field(Arc::new(FieldSpec {
            minpoly: p,
            lo,
            hi,
            assume_irreducible: assume_irreducible && degree >= 4,
        })))
    }

    pub fn zero(&self) -> Scalar {
        Scalar {
            field: self.clone(),
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> Scalar {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, q: BigRational) -> Scalar {
        let mut s = self.zero();
        s.coeffs[0] = q;
        s
    }

    pub fn int(&self, n: i64) -> Scalar {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The generator θ (equal to the rational root for degree-1 fields).
    pub fn theta(&self) -> Scalar {
        self.reduce_poly(&Poly::new(vec![BigRational::zero(), BigRational::one()]))
    }

    /// Scalar from θ-power coefficients; shorter lists are zero-padded.
    pub fn scalar(&self, coeffs: Vec<BigRational>) -> Result<Scalar, FieldError> {
        let degree = self.degree();
        if coeffs.len() > degree {
            return Err(FieldError::TooManyCoefficients {
                got: coeffs.len(),
                degree,
            });
        }
        let mut c = coeffs;
        c.resize(degree, BigRational::zero());
        Ok(Scalar {
            field: self.clone(),
            coeffs: c,
        })
    }

    fn reduce_poly(&self, p: &Poly) -> Scalar {
        let r = p.rem(&self.minpoly);
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(self.degree(), BigRational::zero());
        Scalar {
            field: self.clone(),
            coeffs,
        }
    }

    /// Halves the isolating interval, keeping θ inside.
    fn bisect(&self, lo: &mut BigRational, hi: &mut BigRational) {
        let mid = (&*lo + &*hi) / BigRational::from_integer(BigInt::from(2));
        let at_lo = self.minpoly.eval(lo);
        let at_mid = self.minpoly.eval(&mid);
        if at_mid.is_zero() {
            // Only reachable for a rational θ; collapse onto it.
            *lo = mid.clone();
            *hi = mid;
        } else if at_lo.is_positive() != at_mid.is_positive() {
            *hi = mid;
        } else {
            *lo = mid;
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "field {{ minpoly = [")?;
        for (i, c) in self.minpoly.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "], interval = [{}, {}]", self.lo, self.hi)?;
        if self.assume_irreducible {
            write!(f, ", assume_irreducible = true")?;
        }
        write!(f, " }}")
    }
}

/// Element of ℚ(θ) in the power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    field: Field,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when the scalar lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    fn check_field(&self, other: &Scalar) {
        assert!(
            self.field == other.field,
            "scalar arithmetic across different number fields"
        );
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let (g, s, _) = self.poly().ext_gcd(&self.field.minpoly);
        if g.degree() != Some(0) {
            // Only possible when irreducibility was asserted but is false.
            return Err(if self.sign() == 0 {
                FieldError::DivisionByZero
            } else {
                FieldError::NotInvertible
            });
        }
        Ok(self.field.reduce_poly(&s))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Sign of the scalar under the real embedding: −1, 0 or +1.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let field = &self.field;
        let a = self.poly();
        if field.degree() > 1 {
            // a(θ) = 0 iff θ is a root of gcd(a, p), and θ is the only root of
            // p in (lo, hi].
            let g = a.gcd(&field.minpoly);
            if g.degree().unwrap_or(0) >= 1 && g.count_roots(&field.lo, &field.hi) > 0 {
                return 0;
            }
        }
        let (mut lo, mut hi) = (field.lo.clone(), field.hi.clone());
        loop {
            let (vlo, vhi) = a.eval_interval(&lo, &hi);
            if vlo.is_positive() {
                return 1;
            }
            if vhi.is_negative() {
                return -1;
            }
            if lo == hi {
                return 0;
            }
            field.bisect(&mut lo, &mut hi);
        }
    }

    /// Rational `q` with `|q − a(θ)| ≤ precision`.
    pub fn to_real(&self, precision: &BigRational) -> BigRational {
        assert!(precision.is_positive(), "precision must be positive");
        let field = &self.field;
        let a = self.poly();
        let (mut lo, mut hi) = (field.lo.clone(), field.hi.clone());
        let two = BigRational::from_integer(BigInt::from(2));
        loop {
            let (vlo, vhi) = a.eval_interval(&lo, &hi);
            if &vhi - &vlo <= &two * precision {
                return (vlo + vhi) / two;
            }
            field.bisect(&mut lo, &mut hi);
        }
    }

    /// Nearest-ish `f64` image (absolute error below 2⁻⁶⁰ before rounding).
    pub fn to_f64(&self) -> f64 {
        let precision = BigRational::new(BigInt::one(), BigInt::one() << 60);
        self.to_real(&precision).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Scalar {
    /// Literal syntax: `q` for rationals, `[c0, c1, ...]` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        write!(f, "[")?;
        for (i, c) in self.coeffs[..=last].iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        Scalar {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        Scalar {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        let d = self.coeffs.len();
        if d == 1 {
            return Scalar {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]],
            };
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        // θ^d = −Σ_{i<d} p_i θ^i for the monic minimal polynomial p
        let p = self.field.minpoly.coeffs();
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, pi) in p[..d].iter().enumerate() {
                if !pi.is_zero() {
                    prod[k - d + i] -= &c * pi;
                }
            }
        }
        prod.truncate(d);
        Scalar {
            field: self.field.clone(),
            coeffs: prod,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

/// Shorthand for a rational `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        ratio(n, 1)
    }

    fn sqrt2() -> Field {
        Field::new(vec![q(-2), q(0), q(1)], (q(1), ratio(3, 2))).unwrap()
    }

    fn cbrt2() -> Field {
        Field::new(vec![q(-2), q(0), q(0), q(1)], (q(1), q(2))).unwrap()
    }

    #[test]
    fn field_construction_cases() {
        assert_eq!(sqrt2().degree(), 2);
        assert_eq!(cbrt2().degree(), 3);
        assert!(matches!(
            Field::new(vec![q(-4), q(0), q(1)], (q(1), q(3))),
            Err(FieldError::RationalRootPresent(_))
        ));
        assert!(matches!(
            Field::new(vec![q(-2), q(0), q(2)], (q(0), q(2))),
            Err(FieldError::NonMonic(_))
        ));
        assert_eq!(
            Field::new(vec![q(-2), q(0), q(1)], (q(2), q(3))),
            Err(FieldError::NoRootInInterval)
        );
        assert_eq!(
            Field::new(vec![q(-2), q(0), q(1)], (q(-2), q(2))),
            Err(FieldError::MultipleRootsInInterval(2))
        );
        assert!(matches!(
            Field::new(vec![q(-2), q(0), q(1)], (q(2), q(1))),
            Err(FieldError::InvalidInterval(_))
        ));
    }

    #[test]
    fn degree_one_is_rationals() {
        let f = Field::new(vec![ratio(-3, 2), q(1)], (q(1), q(2))).unwrap();
        assert_eq!(f.theta().as_rational(), Some(&ratio(3, 2)));
        assert_eq!(f.theta().sign(), 1);
        // root on the boundary is not strictly inside
        assert_eq!(
            Field::new(vec![q(-1), q(1)], (q(1), q(2))),
            Err(FieldError::NoRootInInterval)
        );
    }

    #[test]
    fn high_degree_needs_assertion() {
        // x^4 - 2, root 2^(1/4) ≈ 1.189
        let mp = vec![q(-2), q(0), q(0), q(0), q(1)];
        assert_eq!(
            Field::new(mp.clone(), (q(1), q(2))),
            Err(FieldError::IrreducibilityNotAsserted(4))
        );
        let f = Field::with_assumed_irreducible(mp, (q(1), q(2))).unwrap();
        let t = f.theta();
        assert_eq!(&(&t * &t) * &(&t * &t), f.int(2));
        // (x^2 - 2)^2 is rejected as non-squarefree
        assert_eq!(
            Field::with_assumed_irreducible(vec![q(4), q(0), q(-4), q(0), q(1)], (q(1), q(2))),
            Err(FieldError::NotSquarefree)
        );
    }

    #[test]
    fn sqrt2_arithmetic() {
        let f = sqrt2();
        let r = f.theta();
        assert_eq!(&r * &r, f.int(2));
        assert_eq!(r.inv().unwrap(), f.scalar(vec![q(0), ratio(1, 2)]).unwrap());
        let a = &f.one() + &r;
        let b = &f.one() - &r;
        assert_eq!(&a + &b, f.int(2));
        assert_eq!(f.zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn signs_and_approximations() {
        let f = sqrt2();
        let r = f.theta();
        assert_eq!((&r - &f.one()).sign(), 1);
        assert_eq!((&f.one() - &r).sign(), -1);
        assert_eq!(f.zero().sign(), 0);
        // 3 - 2√2 ≈ 0.1716 is small but positive
        assert_eq!((&f.int(3) - &r.scale(&q(2))).sign(), 1);
        let eps = ratio(1, 1_000_000);
        let approx = r.to_real(&eps);
        // bisection oracle on x^2 - 2, independent of the scalar machinery
        let (mut lo, mut hi) = (1.0f64, 1.5f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid * mid < 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((approx.to_f64().unwrap() - lo).abs() <= 1e-6);
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cbrt2_inverse() {
        let f = cbrt2();
        let t = f.theta();
        let a = &(&t * &t) + &f.int(1);
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert!((t.to_f64() - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn sign_zero_for_reducible_assertion() {
        // (x^2 - 2)(x^2 - 3) with θ = √2 claimed irreducible; θ² - 2 is a
        // nonzero representative that vanishes at θ.
        let mp = Poly::new(vec![q(-2), q(0), q(1)]).mul(&Poly::new(vec![q(-3), q(0), q(1)]));
        let f = Field::with_assumed_irreducible(mp.coeffs().to_vec(), (q(1), ratio(3, 2))).unwrap();
        let t = f.theta();
        let z = &(&t * &t) - &f.int(2);
        assert!(!z.is_zero());
        assert_eq!(z.sign(), 0);
        assert_eq!(z.inv(), Err(FieldError::DivisionByZero));
        let w = &(&t * &t) - &f.int(3);
        assert_eq!(w.sign(), -1);
        assert_eq!(w.inv(), Err(FieldError::NotInvertible));
    }

    #[test]
    fn display_literals() {
        let f = sqrt2();
        assert_eq!(f.int(3).to_string(), "3");
        assert_eq!((&f.one() + &f.theta()).to_string(), "[1, 1]");
        assert_eq!(
            f.to_string(),
            "field { minpoly = [-2, 0, 1], interval = [1, 3/2] }"
        );
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
    }

    fn scalar_in(f: Field) -> impl Strategy<Value = Scalar> {
        let deg = f.degree();
        proptest::collection::vec(small_rational(), deg).prop_map(move |c| f.scalar(c).unwrap())
    }

    fn any_field() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Field::rationals()), Just(sqrt2()), Just(cbrt2())]
    }

    fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        any_field().prop_flat_map(|f| (scalar_in(f.clone()), scalar_in(f.clone()), scalar_in(f)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), a.field().one());
            }
        }

        #[test]
        fn squares_nonnegative((a, _, _) in triple()) {
            prop_assert!((&a * &a).sign() >= 0);
        }

        #[test]
        fn sign_matches_float((a, _, _) in triple()) {
            let x = a.to_f64();
            match a.sign() {
                1 => prop_assert!(x > 0.0),
                -1 => prop_assert!(x < 0.0),
                _ => prop_assert!(a.is_zero()),
            }
        }

        #[test]
        fn to_real_refinement_consistent((a, _, _) in triple(), k in 1i64..1000) {
            let eps = ratio(1, k);
            let coarse = a.to_real(&eps);
            let fine = a.to_real(&(&eps / q(10)));
            prop_assert!((coarse - fine).abs() <= &eps + &eps / q(10));
        }
    }
}
