use alloc::format;
use alloc::string::String;
use core::fmt;

use super::poly::{is_sum, Names, Render};
use super::{poly_gcd, Constant, MPoly, Poly, Scalar};

/// An element of `Q(i)(params)`: reduced fraction with monic denominator.
///
/// Constants built through [`Scalar`] carry no variables; operands are padded
/// to a common variable count on the fly.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

fn pad(p: &Poly, n: usize) -> Poly {
    if p.nvars() == n {
        p.clone()
    } else {
        p.with_nvars(n)
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let n = num.nvars().max(den.nvars());
        let (num, den) = (pad(&num, n), pad(&den, n));
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(n) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = poly_gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
            }
        };
        let (lc, den) = den.monic();
        let num = num.scale(&lc.inv().expect("nonzero"));
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatFunc { num: p, den: Poly::one(n) }
    }

    pub fn constant(nvars: usize, c: Constant) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn param(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn with_nvars(&self, n: usize) -> Self {
        RatFunc { num: self.num.with_nvars(n), den: self.den.with_nvars(n) }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Constant> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Substitutes the constant `c` for parameter `v`; `None` when the
    /// denominator vanishes there.
    pub fn substitute(&self, v: usize, c: &Constant) -> Option<RatFunc> {
        let n = self.nvars();
        let sub = |p: &Poly| -> Poly {
            let mut r = Poly::zero(n);
            for (m, coeff) in p.terms() {
                let mut m2 = m.clone();
                let e = m2.0[v];
                m2.0[v] = 0;
                r = r.add(&Poly::monomial(n, m2, coeff.mul(&c.pow(e))));
            }
            r
        };
        let den = sub(&self.den);
        if den.is_zero() {
            return None;
        }
        Some(RatFunc::new(sub(&self.num), den))
    }

    /// Total degree of numerator plus denominator; a rough size measure.
    pub fn height(&self) -> u32 {
        self.num.total_degree().unwrap_or(0) + self.den.total_degree().unwrap_or(0)
    }

    fn aligned(&self, o: &Self) -> (Poly, Poly, Poly, Poly) {
        let n = self.nvars().max(o.nvars());
        (pad(&self.num, n), pad(&self.den, n), pad(&o.num, n), pad(&o.den, n))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        let (a, b, c, d) = self.aligned(o);
        a == c && b == d
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        Self::from_poly(Poly::zero(0))
    }

    fn one() -> Self {
        Self::from_poly(Poly::one(0))
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(0, Constant::from_i64(n))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.constant_value().is_some_and(|c| c.is_one())
    }

    fn add(&self, o: &Self) -> Self {
        let (a, b, c, d) = self.aligned(o);
        if b == d {
            return RatFunc::new(a.add(&c), b);
        }
        if b.is_constant() || d.is_constant() {
            return RatFunc::new(a.mul(&d).add(&c.mul(&b)), b.mul(&d));
        }
        // With b = g b', d = g d' the numerator a d' + c b' is coprime to
        // b' d', so only the common part g needs a gcd.
        let g = poly_gcd(&b, &d);
        let b1 = b.exact_div(&g).expect("gcd divides");
        let d1 = d.exact_div(&g).expect("gcd divides");
        let num = a.mul(&d1).add(&c.mul(&b1));
        if num.is_zero() {
            return RatFunc::new(num, b);
        }
        let (num, g) = if g.is_constant() {
            (num, g)
        } else {
            let h = poly_gcd(&num, &g);
            (num.exact_div(&h).expect("gcd divides"), g.exact_div(&h).expect("gcd divides"))
        };
        let den = b1.mul(&d1).mul(&g);
        let (lc, den) = den.monic();
        RatFunc { num: num.scale(&lc.inv().expect("nonzero")), den }
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = self.aligned(o);
        if b.is_constant() && d.is_constant() {
            return RatFunc::new(a.mul(&c), b.mul(&d));
        }
        let g1 = poly_gcd(&a, &d);
        let g2 = poly_gcd(&c, &b);
        let a = a.exact_div(&g1).expect("gcd divides");
        let d = d.exact_div(&g1).expect("gcd divides");
        let c = c.exact_div(&g2).expect("gcd divides");
        let b = b.exact_div(&g2).expect("gcd divides");
        RatFunc::new(a.mul(&c), b.mul(&d))
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    fn sqrt(&self) -> Option<Self> {
        Some(RatFunc::new(self.num.sqrt()?, self.den.sqrt()?))
    }
}

impl Render for RatFunc {
    fn render(&self, names: &Names<'_>) -> String {
        let local = Names { vars: names.params, ..*names };
        let n = self.num.render(&local);
        if self.den.is_one_poly() {
            return n;
        }
        let d = self.den.render(&local);
        let n = if is_sum(&n) { format!("({n})") } else { n };
        let d = if is_sum(&d) || d.contains('*') { format!("({d})") } else { d };
        format!("{n}/{d}")
    }
}

impl<C: Scalar> MPoly<C> {
    pub(crate) fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: alloc::vec::Vec<String> = (0..self.nvars()).map(|i| format!("p{i}")).collect();
        let n = Names { params: &names, ext: None, vars: &names };
        f.write_str(&self.render(&n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: usize) -> RatFunc {
        RatFunc::param(3, i)
    }

    #[test]
    fn reduces_and_normalizes() {
        let (a, b) = (p(0), p(1));
        let x = a.mul(&a).sub(&b.mul(&b)).div(&b.sub(&a)).unwrap();
        assert_eq!(x, a.add(&b).neg());
        assert!(x.is_polynomial());
    }

    #[test]
    fn mixes_with_bare_constants() {
        let a = p(0);
        let y = a.add(&RatFunc::one()).sub(&RatFunc::one());
        assert_eq!(y, a);
        assert!(a.div(&a).unwrap().is_one());
    }

    #[test]
    fn substitution() {
        let (a, c) = (p(0), p(2));
        let x = a.mul(&c).add(&RatFunc::from_i64(2)).div(&a).unwrap();
        assert_eq!(x.substitute(2, &Constant::zero()).unwrap(), RatFunc::from_i64(2).div(&a).unwrap());
        assert!(RatFunc::one().div(&c).unwrap().substitute(2, &Constant::zero()).is_none());
    }
}
