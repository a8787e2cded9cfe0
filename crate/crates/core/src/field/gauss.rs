use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Constant;

/// A Gaussian integer; carries constant square classes in gaussian mode.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn one() -> Self {
        GaussInt { re: BigInt::one(), im: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn times_i(&self) -> Self {
        GaussInt { re: -self.im.clone(), im: self.re.clone() }
    }

    /// Euclidean division with rounded quotient.
    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        let n = b.norm();
        let num_re = &self.re * &b.re + &self.im * &b.im;
        let num_im = &self.im * &b.re - &self.re * &b.im;
        let round = |x: &BigInt| -> BigInt {
            let two_n: BigInt = &n * 2;
            (x * BigInt::from(2) + &n).div_floor(&two_n)
        };
        let q = GaussInt { re: round(&num_re), im: round(&num_im) };
        let qb = q.mul(b);
        let r = GaussInt { re: &self.re - &qb.re, im: &self.im - &qb.im };
        (q, r)
    }

    pub fn exact_div(&self, b: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(b);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.normalized().0
    }

    /// Returns `(g, k)` with `self = i^k · g` and `g` in the first quadrant
    /// (`re > 0, im >= 0`).
    pub fn normalized(&self) -> (Self, u8) {
        if self.is_zero() {
            return (self.clone(), 0);
        }
        let mut g = self.clone();
        let mut k = 0u8;
        while !(g.re.is_positive() && !g.im.is_negative()) {
            // g = i^-1 · (i·g)
            g = g.times_i();
            k = (k + 3) % 4;
        }
        (g, k)
    }

    /// Integer representative of the square class of a nonzero constant:
    /// `c = γ/n` with `n` a positive integer, and `c ~ γ·n`.
    pub fn class_representative(c: &Constant) -> Self {
        let n = c.re().denom().lcm(c.im().denom());
        let scale = |q: &num_rational::BigRational| -> BigInt { q.numer() * (&n / q.denom()) };
        GaussInt { re: scale(c.re()) * &n, im: scale(c.im()) * &n }
    }

    pub fn to_constant(&self) -> Constant {
        use num_rational::BigRational;
        Constant::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}

impl GaussInt {
    /// Factorization `self = i^k · Π π_j^{e_j}` into first-quadrant Gaussian
    /// primes, by trial division on the norm. Cofactors left after a fixed
    /// trial bound are returned as if prime.
    pub fn factor(&self) -> (u8, Vec<(GaussInt, u32)>) {
        assert!(!self.is_zero(), "factoring zero");
        let mut rest = self.clone();
        let mut out: Vec<(GaussInt, u32)> = Vec::new();
        let mut n = self.norm();
        let mut p = BigInt::from(2);
        let bound = BigInt::from(1_000_000u32);
        while &p * &p <= n && p <= bound {
            if (&n % &p).is_zero() {
                for pi in primes_over(&p) {
                    divide_out(&mut rest, &pi, &mut out);
                }
                while (&n % &p).is_zero() {
                    n /= &p;
                }
            }
            p += 1;
        }
        if n > BigInt::one() {
            for pi in primes_over(&n) {
                divide_out(&mut rest, &pi, &mut out);
            }
            if !rest.is_unit() {
                let (g, _) = rest.normalized();
                rest = rest.exact_div(&g).expect("divides itself");
                out.push((g, 1));
            }
        }
        let (_, k) = rest.normalized();
        debug_assert!(rest.is_unit());
        out.sort();
        (k, out)
    }
}

fn divide_out(rest: &mut GaussInt, pi: &GaussInt, out: &mut Vec<(GaussInt, u32)>) {
    let mut e = 0;
    while let Some(q) = rest.exact_div(pi) {
        *rest = q;
        e += 1;
    }
    if e > 0 {
        out.push((pi.clone(), e));
    }
}

/// First-quadrant Gaussian primes dividing the rational prime `p`.
fn primes_over(p: &BigInt) -> Vec<GaussInt> {
    let two = BigInt::from(2);
    if *p == two {
        return vec![GaussInt::new(BigInt::one(), BigInt::one())];
    }
    let four = BigInt::from(4);
    if (p % &four) == BigInt::from(3) {
        return vec![GaussInt::new(p.clone(), BigInt::zero())];
    }
    let e = (p - BigInt::one()) / &four;
    let minus_one = p - BigInt::one();
    // A cofactor past the trial bound may be composite; give up after a few
    // witnesses and let the caller keep it whole.
    let mut found = None;
    for z in 2..2000u32 {
        let t = BigInt::from(z).modpow(&e, p);
        if (&t * &t) % p == minus_one {
            found = Some(t);
            break;
        }
    }
    let Some(t) = found else { return Vec::new() };
    let pi = GaussInt::new(p.clone(), BigInt::zero()).gcd(&GaussInt::new(t, BigInt::one()));
    let conj = GaussInt::new(pi.re.clone(), -pi.im.clone()).normalized().0;
    vec![pi, conj]
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_constant(), f)
    }
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussInt {
        GaussInt::new(a.into(), b.into())
    }

    #[test]
    fn two_ramifies() {
        // 2 = -i (1+i)^2
        let p = g(1, 1);
        assert_eq!(p.mul(&p), g(0, 2));
        assert_eq!(g(2, 0).gcd(&g(1, 1)), g(1, 1));
    }

    #[test]
    fn normalization_tracks_unit() {
        let (n, k) = g(-3, 0).normalized();
        assert_eq!(n, g(3, 0));
        assert_eq!(k, 2);
        let (n, k) = g(0, 5).normalized();
        assert_eq!(n, g(5, 0));
        assert_eq!(k, 1);
    }

    #[test]
    fn factorization_reconstructs() {
        for (a, b) in [(2, 0), (16, 0), (5, 0), (3, 4), (-7, 0), (0, 6), (12, -30)] {
            let x = g(a, b);
            let (k, parts) = x.factor();
            let mut prod = GaussInt::one();
            for _ in 0..k {
                prod = prod.mul(&g(0, 1));
            }
            for (p, e) in &parts {
                assert!(!p.is_unit());
                for _ in 0..*e {
                    prod = prod.mul(p);
                }
            }
            assert_eq!(prod, x, "{a} + {b}i");
        }
    }
}
