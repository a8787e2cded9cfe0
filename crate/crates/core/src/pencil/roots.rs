//! Roots of univariate polynomials over `Q(i)` and over `Q(i)(params)`.
//!
//! Over the parameter field the search is candidate based: a root of a
//! primitive polynomial has the shape `u·p/q` with `p | h_0`, `q | h_n` and
//! `u` a constant. Divisors are drawn from a coprime refinement of the
//! coefficients, so a factor hidden inside an unsplit atom is missed.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{poly_gcd, Constant, ConstantMode, GaussInt, Monomial, Poly, RatFunc, Scalar, UPoly};
use crate::squares::{Atom, AtomBasis};

const MAX_DIVISORS: usize = 4096;
const MAX_CANDIDATES: usize = 4096;

/// All roots in `Q(i)` of a nonzero polynomial, without multiplicity, sorted.
pub fn gaussian_rational_roots(p: &UPoly<Constant>) -> Vec<Constant> {
    let mut p = p.clone();
    let mut roots = Vec::new();
    if p.degree().is_none_or(|d| d == 0) {
        return roots;
    }
    if p.coeff(0).is_zero() {
        roots.push(Constant::zero());
        while p.coeff(0).is_zero() {
            p = UPoly::new(p.coeffs()[1..].to_vec());
        }
    }
    if p.degree() == Some(0) {
        return roots;
    }
    let ints = integral(&p);
    let a0 = ints[0].clone();
    let an = ints.last().expect("nonzero").clone();
    let units = [
        GaussInt::one(),
        GaussInt::new(BigInt::zero(), BigInt::one()),
        GaussInt::new(-BigInt::one(), BigInt::zero()),
        GaussInt::new(BigInt::zero(), -BigInt::one()),
    ];
    let (Some(num_divs), Some(den_divs)) = (divisors(&a0), divisors(&an)) else {
        return roots;
    };
    for q in &den_divs {
        let qc = q.to_constant();
        for d in &num_divs {
            for u in &units {
                let cand = d.mul(u).to_constant().div(&qc).expect("nonzero divisor");
                if !roots.contains(&cand) && p.eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Scales to coefficients in `Z[i]`.
fn integral(p: &UPoly<Constant>) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.re().denom()).lcm(c.im().denom());
    }
    let lr = BigRational::from_integer(l);
    p.coeffs()
        .iter()
        .map(|c| {
            let re = c.re() * &lr;
            let im = c.im() * &lr;
            GaussInt::new(re.to_integer(), im.to_integer())
        })
        .collect()
}

/// First-quadrant divisors of a nonzero Gaussian integer.
fn divisors(g: &GaussInt) -> Option<Vec<GaussInt>> {
    let (_, primes) = g.factor();
    let mut out = vec![GaussInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut x = d.clone();
            for _ in 0..=e {
                next.push(x.clone());
                x = x.mul(&p);
            }
        }
        if next.len() > MAX_DIVISORS {
            return None;
        }
        out = next;
    }
    Some(out)
}

/// Clears denominators and contents: coefficients in `Q(i)[params]` with gcd 1.
pub fn primitive(h: &UPoly<RatFunc>, nvars: usize) -> Vec<Poly> {
    let mut den = Poly::one(nvars);
    for c in h.coeffs() {
        let d = c.den().with_nvars(nvars);
        let g = poly_gcd(&den, &d);
        den = den.mul(&d.exact_div(&g).expect("gcd divides"));
    }
    let scaled: Vec<Poly> = h
        .coeffs()
        .iter()
        .map(|c| {
            let c = c.with_nvars(nvars);
            c.num().mul(&den.exact_div(c.den()).expect("common denominator"))
        })
        .collect();
    let mut content = Poly::zero(nvars);
    for c in &scaled {
        content = poly_gcd(&content, c);
    }
    scaled.iter().map(|c| c.exact_div(&content).expect("content divides")).collect()
}

/// Monic divisors built from atom powers, ascending by degree.
fn atom_divisors(parts: &[(Poly, i64)], n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one(n)];
    for (p, e) in parts {
        let mut next = Vec::new();
        for d in &out {
            let mut x = d.clone();
            for _ in 0..=*e {
                next.push(x.clone());
                x = x.mul(p);
            }
        }
        out = next;
        if out.len() > MAX_DIVISORS {
            break;
        }
    }
    out.sort_by_key(|p| p.total_degree().unwrap_or(0));
    out
}

fn poly_parts(basis: &mut AtomBasis, p: &Poly) -> Vec<(Poly, i64)> {
    let f = basis.factor(&RatFunc::from_poly(p.clone())).expect("nonzero");
    f.exponents
        .into_iter()
        .filter_map(|(a, e)| match basis.atom(a) {
            Atom::Poly(q) if e > 0 => Some((q.clone(), e)),
            _ => None,
        })
        .collect()
}

/// A root in the parameter field of `h` (degree ≥ 1), if the candidate
/// search finds one.
pub fn find_root(h: &UPoly<RatFunc>, nvars: usize) -> Option<RatFunc> {
    let n = h.degree()?;
    if n == 0 {
        return None;
    }
    if n == 1 {
        return h.coeff(0).neg().div(&h.coeff(1));
    }
    let hp = primitive(h, nvars);
    if hp[0].is_zero() {
        return Some(RatFunc::zero());
    }
    let mut basis = AtomBasis::new(ConstantMode::Cyclotomic, nvars);
    for c in hp.iter().filter(|c| !c.is_zero()) {
        basis.factor(&RatFunc::from_poly(c.clone())).expect("nonzero");
    }
    let ps = atom_divisors(&poly_parts(&mut basis, &hp[0]), nvars);
    let qs = atom_divisors(&poly_parts(&mut basis, &hp[n]), nvars);
    let mut pairs: Vec<(&Poly, &Poly)> = Vec::new();
    for p in &ps {
        for q in &qs {
            if poly_gcd(p, q).is_constant() {
                pairs.push((p, q));
            }
        }
    }
    pairs.sort_by_key(|(p, q)| p.total_degree().unwrap_or(0) + q.total_degree().unwrap_or(0));
    pairs.truncate(MAX_CANDIDATES);
    for (p, q) in pairs {
        // Σ_k h_k p^k q^(n-k) u^k, collected per parameter monomial.
        let mut per_mono: BTreeMap<Monomial, Vec<Constant>> = BTreeMap::new();
        let mut pk = Poly::one(nvars);
        let qpows: Vec<Poly> = (0..=n).scan(Poly::one(nvars), |acc, _| {
            let cur = acc.clone();
            *acc = acc.mul(q);
            Some(cur)
        }).collect();
        for k in 0..=n {
            let term = hp[k].mul(&pk).mul(&qpows[n - k]);
            for (m, c) in term.terms() {
                let e = per_mono.entry(m.clone()).or_insert_with(|| vec![Constant::zero(); n + 1]);
                e[k] = c.clone();
            }
            pk = pk.mul(p);
        }
        let mut g = UPoly::<Constant>::zero();
        for coeffs in per_mono.into_values() {
            g = g.gcd(&UPoly::new(coeffs));
            if g.degree() == Some(0) {
                break;
            }
        }
        if g.degree().is_none_or(|d| d == 0) {
            continue;
        }
        let base = RatFunc::new(p.clone(), q.clone());
        for u in gaussian_rational_roots(&g) {
            if u.is_zero() {
                continue;
            }
            let t = base.mul(&RatFunc::constant(nvars, u));
            if h.eval(&t).is_zero() {
                return Some(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Constant {
        Constant::from_i64(n)
    }

    #[test]
    fn rational_roots() {
        // (t - 1/2)(t + 3)(t^2 + 1)
        let p = UPoly::linear_root(Constant::from_ratio(1, 2))
            .mul(&UPoly::linear_root(c(-3)))
            .mul(&UPoly::new(vec![c(1), c(0), c(1)]));
        let r = gaussian_rational_roots(&p);
        assert_eq!(r.len(), 4);
        assert!(r.contains(&Constant::i()));
        assert!(r.contains(&Constant::from_ratio(1, 2)));
    }

    #[test]
    fn parametric_root() {
        let (a, b) = (RatFunc::param(3, 0), RatFunc::param(3, 1));
        // (a t + b c)(t^2 - a)
        let cc = RatFunc::param(3, 2);
        let h = UPoly::new(vec![b.mul(&cc), a.clone()])
            .mul(&UPoly::new(vec![a.neg(), RatFunc::zero(), RatFunc::one()]));
        let t = find_root(&h, 3).unwrap();
        assert_eq!(t, b.mul(&cc).neg().div(&a).unwrap());
    }
}
