use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use super::{Constant, Scalar};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Self) -> Self {
        Monomial(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable and generator names used when printing.
#[derive(Clone, Copy, Debug)]
pub struct Names<'a> {
    pub params: &'a [String],
    pub ext: Option<&'a str>,
    pub vars: &'a [String],
}

/// Coefficients that know how to print themselves.
pub trait Render {
    fn render(&self, names: &Names<'_>) -> String;
}

impl Render for Constant {
    fn render(&self, _names: &Names<'_>) -> String {
        self.to_string()
    }
}

/// Sparse multivariate polynomial over a field.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomials in the parameters with Q(i) coefficients.
pub type Poly = MPoly<Constant>;

impl<C: Scalar> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, i), C::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: C) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            return Some(C::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> C {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = self.terms.keys().map(|m| m.degree());
        match d.next() {
            None => true,
            Some(first) => d.all(|x| x == first),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "variable count mismatch");
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c.mul(&lc_inv);
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Scales so that the graded-lex leading coefficient is one; returns the
    /// removed unit alongside.
    pub fn monic(&self) -> (C, Self) {
        let lc = self.lc();
        match lc.inv() {
            Some(inv) => (lc, self.scale(&inv)),
            None => (C::zero(), self.clone()),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[v] -= 1;
                r.add_term(m2, c.mul(&C::from_i64(e as i64)));
            }
        }
        r
    }

    /// Coefficients with respect to variable `v`: `self = Σ_k out[k]·v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out[k].add_term(m2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, v: usize, coeffs: &[Self]) -> Self {
        let mut r = Self::zero(nvars);
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut m2 = m.clone();
                m2.0[v] += k as u32;
                r.add_term(m2, c.clone());
            }
        }
        r
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, images: &[MPoly<C>]) -> MPoly<C> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut r = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            r = r.add(&t);
        }
        r
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact square root `q` with `q^2 = self` and `lc(q)` a chosen root of
    /// `lc(self)`; `None` if not a square over the coefficient field.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = self.leading()?;
        if lm.0.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let root_m = Monomial(lm.0.iter().map(|e| e / 2).collect());
        let root_c = lc.sqrt()?;
        let two_lc_inv = root_c.add(&root_c).inv()?;
        let mut q = Self::monomial(self.nvars, root_m.clone(), root_c);
        let mut rem = self.sub(&q.mul(&q));
        // New terms strictly decrease, so this terminates.
        while let Some((m, c)) = rem.leading() {
            if !root_m.divides(m) {
                return None;
            }
            let nm = root_m.quotient_of(m);
            if nm >= root_m {
                return None;
            }
            let nc = c.mul(&two_lc_inv);
            let t = Self::monomial(self.nvars, nm, nc);
            let next = q.add(&t);
            rem = self.sub(&next.mul(&next));
            q = next;
        }
        Some(q)
    }

    /// Resizes to `n` variables; dropped variables must be absent.
    pub fn with_nvars(&self, n: usize) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            if n < e.len() {
                assert!(e[n..].iter().all(|&x| x == 0), "dropping a variable that occurs");
            }
            e.resize(n, 0);
            (Monomial(e), c.clone())
        });
        MPoly::from_terms(n, terms)
    }
}

impl<C: Scalar + Render> MPoly<C> {
    /// Renders with the given names, highest term first.
    pub fn render(&self, names: &Names<'_>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let var_names = names.vars;
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut cs = c.render(names);
            let is_sum = is_sum(&cs);
            let mut negative = false;
            if !is_sum && cs.starts_with('-') {
                negative = true;
                cs.remove(0);
            }
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = render_monomial(m, var_names);
            if mono.is_empty() {
                out.push_str(&cs);
            } else if cs == "1" {
                out.push_str(&mono);
            } else if is_sum || cs.contains('/') {
                let _ = write!(out, "({cs})*{mono}");
            } else {
                let _ = write!(out, "{cs}*{mono}");
            }
        }
        out
    }
}

pub(crate) fn is_sum(s: &str) -> bool {
    let mut depth = 0i32;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 && bytes[i - 1] == b' ' => return true,
            _ => {}
        }
    }
    false
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(alloc::format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names() -> Vec<String> {
        ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
    }

    fn v(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn grlex_leading_term() {
        let p = v(0).add(&v(1).mul(&v(1)));
        assert_eq!(p.leading().unwrap().0, &Monomial(vec![0, 2, 0]));
    }

    #[test]
    fn exact_division() {
        let a = v(0);
        let b = v(1);
        let p = a.mul(&a).sub(&b.mul(&b));
        assert_eq!(p.exact_div(&a.sub(&b)).unwrap(), a.add(&b));
        assert!(p.exact_div(&a).is_none());
    }

    #[test]
    fn square_roots() {
        let p = v(0).add(&v(1)).add(&Poly::one(3));
        assert_eq!(p.mul(&p).sqrt().unwrap().mul(&p.mul(&p).sqrt().unwrap()), p.mul(&p));
        assert!(p.sqrt().is_none());
        assert!(v(0).mul(&v(1)).sqrt().is_none());
    }

    #[test]
    fn rendering() {
        let n = names();
        let names = Names { params: &n, ext: None, vars: &n };
        let p = v(0).mul(&v(1)).sub(&Poly::constant(3, Constant::from_i64(2)));
        assert_eq!(p.render(&names), "a*b - 2");
    }
}
