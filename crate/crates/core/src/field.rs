//! Exact scalar fields.
//!
//! All linear algebra in this crate runs over a [`Field`]: either the
//! rationals with arbitrary-precision integers ([`crate::Rational`], an alias
//! for `num_rational::BigRational`) or a prime field [`Fp`] with a runtime
//! modulus below 2^31. There is no floating point anywhere.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not a prime below 2^31")]
    BadModulus(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator {denom} vanishes modulo {modulus}")]
    DenominatorVanishes { denom: i64, modulus: u64 },
    #[error("unknown field spec `{0}` (expected `Q` or `F<p>`)")]
    BadSpec(String),
}

/// Scalar type the library computes with.
///
/// `Params` carries the runtime data needed to build elements from integers:
/// `()` for the rationals, the prime modulus for [`Fp`].
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    type Params: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// The image of `numer/denom` in the field.
    fn from_ratio(params: &Self::Params, numer: i64, denom: i64) -> Result<Self, FieldError>;

    /// The image of an integer in the field.
    fn from_int(params: &Self::Params, n: i64) -> Self {
        Self::from_ratio(params, n, 1).expect("integer embeds in every field")
    }

    /// The image of `n` in the same field instance as `self`.
    ///
    /// For [`Fp`] this lets code derive new coefficients from an existing
    /// element without threading the modulus around.
    fn embed(&self, n: i64) -> Self;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
}

/// Flip the sign of `value` when `sign` is negative. `sign` must be ±1.
pub fn signed<F: Field>(sign: i32, value: F) -> F {
    debug_assert!(sign == 1 || sign == -1);
    if sign < 0 {
        -value
    } else {
        value
    }
}

impl Field for BigRational {
    type Params = ();

    fn from_ratio(_params: &(), numer: i64, denom: i64) -> Result<Self, FieldError> {
        if denom == 0 {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn embed(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }
}

/// Returns `Ok(())` when `p` is a prime below 2^31.
pub fn check_prime(p: u64) -> Result<(), FieldError> {
    if p < 2 || p >= (1 << 31) {
        return Err(FieldError::BadModulus(p));
    }
    if p % 2 == 0 {
        return if p == 2 {
            Ok(())
        } else {
            Err(FieldError::BadModulus(p))
        };
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return Err(FieldError::BadModulus(p));
        }
        d += 2;
    }
    Ok(())
}

/// Element of the prime field `F_p` for a runtime modulus `p < 2^31`.
///
/// `Zero::zero()` and `One::one()` cannot know the modulus, so elements with
/// `modulus == 0` act as integer lifts: they adopt a concrete modulus the
/// first time they meet one in an arithmetic operation. Every value stored in
/// an algebra, tensor, or matrix is created from a concrete modulus, so lifts
/// only ever appear transiently as fold seeds.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: i64,
    modulus: u64,
}

impl Fp {
    /// A reduced element of `F_p`. Errors when `p` is not prime.
    pub fn new(value: i64, modulus: u64) -> Result<Self, FieldError> {
        check_prime(modulus)?;
        Ok(Self::reduced(value, modulus))
    }

    fn reduced(value: i64, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        Fp {
            value: value.rem_euclid(modulus as i64),
            modulus,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    fn merged_modulus(a: &Fp, b: &Fp) -> u64 {
        match (a.modulus, b.modulus) {
            (0, p) | (p, 0) => p,
            (p, q) if p == q => p,
            (p, q) => panic!("mixed moduli {p} and {q}"),
        }
    }

    fn lift(self, modulus: u64) -> Fp {
        if modulus == 0 || self.modulus != 0 {
            self
        } else {
            Fp::reduced(self.value, modulus)
        }
    }

    fn checked_int(v: i128) -> i64 {
        i64::try_from(v).expect("integer-lift arithmetic overflow")
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! fp_binop {
    ($trait:ident, $fn:ident, $op:tt) => {
        impl $trait for Fp {
            type Output = Fp;
            fn $fn(self, rhs: Fp) -> Fp {
                let p = Fp::merged_modulus(&self, &rhs);
                let a = self.lift(p);
                let b = rhs.lift(p);
                if p == 0 {
                    Fp { value: Fp::checked_int((a.value as i128) $op (b.value as i128)), modulus: 0 }
                } else {
                    Fp::reduced(Fp::checked_int((a.value as i128) $op (b.value as i128)), p)
                }
            }
        }
    };
}

fp_binop!(Add, add, +);
fp_binop!(Sub, sub, -);
fp_binop!(Mul, mul, *);

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.modulus == 0 {
            Fp {
                value: -self.value,
                modulus: 0,
            }
        } else {
            Fp::reduced(-self.value, self.modulus)
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv()
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}
impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}
impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Fp) -> bool {
        let p = Fp::merged_modulus(self, other);
        self.lift(p).value == other.lift(p).value
    }
}
impl Eq for Fp {}

impl Zero for Fp {
    fn zero() -> Fp {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Fp {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
}

impl Field for Fp {
    type Params = u64;

    fn from_ratio(params: &u64, numer: i64, denom: i64) -> Result<Self, FieldError> {
        debug_assert!(*params >= 2, "modulus must be validated via check_prime");
        if denom == 0 {
            return Err(FieldError::ZeroDenominator);
        }
        let d = Fp::reduced(denom, *params);
        if d.is_zero() {
            return Err(FieldError::DenominatorVanishes {
                denom,
                modulus: *params,
            });
        }
        Ok(Fp::reduced(numer, *params) * d.inv())
    }

    fn embed(&self, n: i64) -> Self {
        if self.modulus == 0 {
            Fp {
                value: n,
                modulus: 0,
            }
        } else {
            Fp::reduced(n, self.modulus)
        }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.modulus == 0 {
            assert!(
                self.value == 1 || self.value == -1,
                "cannot invert integer lift {}",
                self.value
            );
            return *self;
        }
        // extended Euclid on (value, p)
        let p = self.modulus as i64;
        let (mut r0, mut r1) = (self.value, p);
        let (mut s0, mut s1) = (1i64, 0i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0.abs(), 1);
        Fp::reduced(s0 * r0.signum(), self.modulus)
    }
}

/// Runtime choice of coefficient field, as written in CLI flags and algebra
/// file headers: `Q` or `F <p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Parses `Q`, `F 101`, `F101`, or `F_101` (case-insensitive).
    pub fn parse(text: &str) -> Result<FieldSpec, FieldError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rational);
        }
        let rest = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| FieldError::BadSpec(text.to_string()))?;
        let digits = rest.trim_start_matches(['_', ' ']);
        let p: u64 = digits
            .parse()
            .map_err(|_| FieldError::BadSpec(text.to_string()))?;
        check_prime(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F {p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(check_prime(2).is_ok());
        assert!(check_prime(101).is_ok());
        assert!(check_prime(65537).is_ok());
        assert!(check_prime(1).is_err());
        assert!(check_prime(91).is_err());
        assert!(check_prime(1 << 31).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(7, 101).unwrap();
        let b = Fp::new(-3, 101).unwrap();
        assert_eq!((a + b).value(), 4);
        assert_eq!((a * b).value(), (7 * 98) % 101);
        assert_eq!((a / a).value(), 1);
        assert_eq!((-b).value(), 3);
    }

    #[test]
    fn fp_inverse_roundtrip() {
        for v in 1..101 {
            let x = Fp::new(v, 101).unwrap();
            assert!((x * x.inv()).is_one());
        }
    }

    #[test]
    fn fp_lifts_adopt_modulus() {
        let one: Fp = One::one();
        let x = Fp::new(5, 13).unwrap();
        assert_eq!((one + x).value(), 6);
        assert_eq!((x * One::one()).value(), 5);
        let z: Fp = Zero::zero();
        assert_eq!((z + x), x);
        assert!(Fp::zero().is_zero());
    }

    #[test]
    fn fp_from_ratio() {
        let h = Fp::from_ratio(&101, 1, 2).unwrap();
        assert_eq!((h + h).value(), 1);
        assert!(matches!(
            Fp::from_ratio(&101, 1, 0),
            Err(FieldError::ZeroDenominator)
        ));
        assert!(matches!(
            Fp::from_ratio(&101, 1, 202),
            Err(FieldError::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn rational_field() {
        let half = BigRational::from_ratio(&(), 1, 2).unwrap();
        assert_eq!(half.clone() + half.clone(), BigRational::from_int(&(), 1));
        assert_eq!(half.inv(), BigRational::from_int(&(), 2));
        assert_eq!(half.embed(-3), BigRational::from_int(&(), -3));
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rational);
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rational);
        assert_eq!(FieldSpec::parse("F101").unwrap(), FieldSpec::Prime(101));
        assert_eq!(
            FieldSpec::parse("F 65537").unwrap(),
            FieldSpec::Prime(65537)
        );
        assert_eq!(FieldSpec::parse("f_2").unwrap(), FieldSpec::Prime(2));
        assert!(FieldSpec::parse("F91").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }
}
