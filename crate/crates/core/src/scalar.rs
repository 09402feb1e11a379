//! Scalar abstractions shared by the linear algebra layer.
//!
//! [`Field`] covers everything Gaussian elimination needs: the Mersenne prime
//! field [`Fp`] used for generic rigidity, exact rationals for independent
//! rank checks, and `f32`/`f64` for floating-point sanity runs.
//! [`RingInteger`] covers the Euclidean integer types accepted by the Smith
//! normal form (`i64` with overflow detection, `BigInt` unconditionally).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};
use rand::Rng;

pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic is exact; elimination then takes the first
    /// nonzero pivot instead of searching for the largest one.
    const EXACT: bool;

    fn inverse(&self) -> Option<Self>;

    /// Zero test used by elimination. Exact fields use `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Pivot quality; only consulted when `EXACT` is false.
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

/// Modulus of [`Fp`]: the Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1u64 << 61) - 1;

/// Element of GF(2^61 - 1), always stored reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(value: u64) -> Self {
        Fp(reduce64(value))
    }

    pub fn from_i64(value: i64) -> Self {
        if value >= 0 {
            Fp::new(value as u64)
        } else {
            -Fp::new(value.unsigned_abs())
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..MODULUS))
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }
}

#[inline]
fn reduce64(x: u64) -> u64 {
    let s = (x & MODULUS) + (x >> 61);
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & MODULUS;
    let hi = (x >> 61) as u64;
    // hi < 2^61 and lo <= MODULUS, so the sum fits and one fold suffices.
    reduce64(lo + hi)
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + MODULUS - rhs.0)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        Fp(reduce128(self.0 as u128 * rhs.0 as u128))
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(MODULUS - self.0)
        }
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

impl Zero for Fp {
    fn zero() -> Self {
        Fp::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::ONE
    }
}

impl Field for Fp {
    const EXACT: bool = true;

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(MODULUS - 2))
        }
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

macro_rules! float_field {
    ($t:ty, $eps:expr) => {
        impl Field for $t {
            const EXACT: bool = false;

            fn inverse(&self) -> Option<Self> {
                if self.is_negligible() {
                    None
                } else {
                    Some(1.0 / *self)
                }
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }
        }
    };
}

float_field!(f64, 1e-9);
float_field!(f32, 1e-4);

/// Integer types accepted by the Smith normal form.
///
/// Checked operations let fixed-width types report overflow so callers can
/// retry with `BigInt`.
pub trait RingInteger:
    Clone + fmt::Debug + fmt::Display + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul
{
    fn to_bigint(&self) -> BigInt;
}

impl RingInteger for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl RingInteger for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl RingInteger for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn modulus_is_mersenne_61() {
        assert_eq!(MODULUS, 2_305_843_009_213_693_951);
        assert_eq!(Fp::new(MODULUS), Fp::ZERO);
        assert_eq!(Fp::from_i64(-1) + Fp::ONE, Fp::ZERO);
    }

    #[test]
    fn fermat_inverse() {
        let x = Fp::new(123_456_789);
        assert_eq!(x * x.inverse().unwrap(), Fp::ONE);
        assert!(Fp::ZERO.inverse().is_none());
    }

    proptest! {
        #[test]
        fn mul_matches_bigint(a in 0..MODULUS, b in 0..MODULUS) {
            let expected = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(MODULUS);
            prop_assert_eq!(BigInt::from((Fp::new(a) * Fp::new(b)).value()), expected);
        }

        #[test]
        fn add_sub_inverse(a in 0..MODULUS, b in 0..MODULUS) {
            let (x, y) = (Fp::new(a), Fp::new(b));
            prop_assert_eq!(x + y - y, x);
            prop_assert_eq!(x - y + y, x);
        }
    }
}
