//! Exact coefficient fields and Gaussian (complex) extensions over them.

mod rat;

pub use rat::Rat;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field of characteristic zero that the symbolic engine computes over.
///
/// The engine never compares floating point values; implementors must give
/// exact equality. [`Rat`] is the production choice, `BigRational` the plain
/// arbitrary-precision reference, and `Rational64` is available for small,
/// hand-sized computations where overflow is impossible.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + num_traits::Num
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }

    fn to_f64(&self) -> f64;

    /// Exact square root when `self` is the square of a field element.
    fn sqrt_exact(&self) -> Option<Self>;

    fn is_negative(&self) -> bool;
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Field for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if *self.numer() < 0 {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (n * n == *self.numer() && d * d == *self.denom()).then(|| Ratio::new(n, d))
    }

    fn is_negative(&self) -> bool {
        *self.numer() < 0
    }
}

/// `re + i·im` with both parts in an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: Field> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(T::from_i64(n))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::real(T::from_ratio(numer, denom))
    }

    pub fn i() -> Self {
        Gaussian { re: T::zero(), im: T::one() }
    }

    /// `i^k` for `k` taken mod 4.
    pub fn i_pow(k: u8) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Gaussian { re: self.re.clone() / n.clone(), im: -self.im.clone() / n })
    }

    pub fn scale(&self, k: &T) -> Self {
        Gaussian { re: self.re.clone() * k.clone(), im: self.im.clone() * k.clone() }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<T: Field> Zero for Gaussian<T> {
    fn zero() -> Self {
        Gaussian { re: T::zero(), im: T::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: Field> One for Gaussian<T> {
    fn one() -> Self {
        Gaussian { re: T::one(), im: T::zero() }
    }
}

impl<T: Field> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gaussian { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a, T: Field> Add<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn add(self, rhs: &Gaussian<T>) -> Gaussian<T> {
        Gaussian { re: self.re.clone() + rhs.re.clone(), im: self.im.clone() + rhs.im.clone() }
    }
}

impl<T: Field> AddAssign<&Gaussian<T>> for Gaussian<T> {
    fn add_assign(&mut self, rhs: &Gaussian<T>) {
        self.re = std::mem::replace(&mut self.re, T::zero()) + rhs.re.clone();
        self.im = std::mem::replace(&mut self.im, T::zero()) + rhs.im.clone();
    }
}

impl<T: Field> SubAssign<&Gaussian<T>> for Gaussian<T> {
    fn sub_assign(&mut self, rhs: &Gaussian<T>) {
        self.re = std::mem::replace(&mut self.re, T::zero()) - rhs.re.clone();
        self.im = std::mem::replace(&mut self.im, T::zero()) - rhs.im.clone();
    }
}

impl<T: Field> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gaussian { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<T: Field> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl<T: Field> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a, T: Field> Mul<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn mul(self, rhs: &Gaussian<T>) -> Gaussian<T> {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(self.re.clone() * rhs.re.clone());
        }
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone();
        Gaussian { re, im }
    }
}

fn fmt_real<T: Field>(v: &T, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}", v)
}

impl<T: Field> fmt::Display for Gaussian<T> {
    /// Prints in the expression mini-language: `3/2`, `-i`, `(1/2+3*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = T::one();
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_real(&self.re, f),
            (true, false) => {
                if self.im == one {
                    write!(f, "i")
                } else if self.im == -one {
                    write!(f, "-i")
                } else {
                    fmt_real(&self.im, f)?;
                    write!(f, "*i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_real(&self.re, f)?;
                if self.im.is_negative() {
                    write!(f, "-")?;
                    fmt_real(&-self.im.clone(), f)?;
                } else {
                    write!(f, "+")?;
                    fmt_real(&self.im, f)?;
                }
                write!(f, "*i)")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = Gaussian<BigRational>;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(G::i() * G::i(), -G::one());
        assert_eq!(G::i_pow(7), -G::i());
    }

    #[test]
    fn inverse_of_gaussian() {
        let z = G::new(BigRational::from_i64(3), BigRational::from_i64(4));
        let inv = z.inv().unwrap();
        assert_eq!(&z * &inv, G::one());
        assert!(G::zero().inv().is_none());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(
            BigRational::from_ratio(9, 4).sqrt_exact(),
            Some(BigRational::from_ratio(3, 2))
        );
        assert_eq!(BigRational::from_i64(2).sqrt_exact(), None);
        assert_eq!(Ratio::<i64>::from_i64(25).sqrt_exact(), Some(Ratio::from_integer(5)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(G::ratio(3, 2).to_string(), "3/2");
        assert_eq!((-G::i()).to_string(), "-i");
        assert_eq!(G::new(BigRational::from_ratio(1, 2), BigRational::from_i64(-3)).to_string(), "(1/2-3*i)");
    }
}
