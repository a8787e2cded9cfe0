use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Scalar;

/// An element `re + im·i` of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constant {
    re: BigRational,
    im: BigRational,
}

impl Constant {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Constant { re, im }
    }

    pub fn rational(re: BigRational) -> Self {
        Constant { re, im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Constant { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate `re - im·i`.
    pub fn conj(&self) -> Self {
        Constant { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Field norm down to Q.
    pub fn norm_q(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Scalar for Constant {
    fn zero() -> Self {
        Constant { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        Constant { re: BigRational::one(), im: BigRational::zero() }
    }

    fn from_i64(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Constant { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        Constant { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Self::rational(&self.re * &o.re);
        }
        Constant {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn neg(&self) -> Self {
        Constant { re: -self.re.clone(), im: -self.im.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::rational(self.re.recip()));
        }
        let n = self.norm_q();
        Some(Constant { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Square root in Q(i) when it exists.
    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.im.is_zero() {
            return if self.re.is_negative() {
                rational_sqrt(&-self.re.clone())
                    .map(|v| Constant { re: BigRational::zero(), im: v })
            } else {
                rational_sqrt(&self.re).map(Self::rational)
            };
        }
        // (u + vi)^2 = x + yi  =>  u^2 = (x + |z|)/2, v = y / 2u
        let m = rational_sqrt(&self.norm_q())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let u = rational_sqrt(&((&self.re + &m) / &two))?;
        let v = &self.im / (&two * &u);
        let r = Constant { re: u, im: v };
        debug_assert!(r.mul(&r) == *self);
        Some(r)
    }
}

fn fmt_rat(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rat(&self.re, f);
        }
        let im_part = |f: &mut fmt::Formatter<'_>, v: &BigRational| -> fmt::Result {
            if v.is_one() {
                f.write_str("i")
            } else if (-v.clone()).is_one() {
                f.write_str("-i")
            } else {
                fmt_rat(v, f)?;
                f.write_str("*i")
            }
        };
        if self.re.is_zero() {
            return im_part(f, &self.im);
        }
        f.write_str("(")?;
        fmt_rat(&self.re, f)?;
        if self.im.is_negative() {
            f.write_str(" - ")?;
            im_part(f, &-self.im.clone())?;
        } else {
            f.write_str(" + ")?;
            im_part(f, &self.im)?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_square_roots() {
        let two_i = Constant::new(BigRational::zero(), BigRational::from_integer(2.into()));
        let r = two_i.sqrt().unwrap();
        assert_eq!(r.mul(&r), two_i);
        assert_eq!(Constant::from_i64(-4).sqrt().unwrap(), Constant::i().mul(&Constant::from_i64(2)));
        assert!(Constant::from_i64(2).sqrt().is_none());
        assert!(Constant::i().sqrt().is_none());
    }

    #[test]
    fn inverse_and_display() {
        let z = Constant::new(BigRational::from_integer(1.into()), BigRational::from_integer(1.into()));
        assert!(z.mul(&z.inv().unwrap()).is_one());
        assert_eq!(alloc::format!("{z}"), "(1 + i)");
        assert_eq!(alloc::format!("{}", Constant::from_ratio(-1, 2)), "-1/2");
    }
}
