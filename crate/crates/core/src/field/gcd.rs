//! Multivariate gcd by recursive primitive pseudo-remainder sequences, and
//! squarefree decomposition built on it.

use alloc::vec::Vec;

use super::{Constant, Poly, Scalar, UPoly};

/// Monic greatest common divisor; `gcd(p, 0)` is `p` made monic.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.monic().1;
    }
    if q.is_zero() {
        return p.monic().1;
    }
    gcd_rec(p, q).monic().1
}

fn gcd_rec(p: &Poly, q: &Poly) -> Poly {
    let n = p.nvars();
    if p.is_zero() {
        return q.monic().1;
    }
    if q.is_zero() {
        return p.monic().1;
    }
    let Some(v) = (0..n).rev().find(|&v| p.contains_var(v) || q.contains_var(v)) else {
        return Poly::one(n);
    };
    match (p.contains_var(v), q.contains_var(v)) {
        (true, false) => gcd_rec(&content_in(p, v), q),
        (false, true) => gcd_rec(p, &content_in(q, v)),
        _ => {
            let cp = content_in(p, v);
            let cq = content_in(q, v);
            let c = gcd_rec(&cp, &cq);
            let mut a = p.exact_div(&cp).expect("content divides");
            let mut b = q.exact_div(&cq).expect("content divides");
            if a.degree_in(v) < b.degree_in(v) {
                core::mem::swap(&mut a, &mut b);
            }
            match gcd_degree_bound(&a, &b, v) {
                Some(0) => return c,
                Some(d) if d == b.degree_in(v) => {
                    if a.exact_div(&b).is_some() {
                        return c.mul(&b).monic().1;
                    }
                }
                _ => {}
            }
            if let Some(h) = interpolated_gcd(&a, &b, v) {
                return c.mul(&h).monic().1;
            }
            loop {
                let r = prem(&a, &b, v);
                if r.is_zero() {
                    break;
                }
                if r.degree_in(v) == 0 {
                    b = Poly::one(n);
                    break;
                }
                // Monic scaling keeps the rational coefficients from growing.
                let pr = r.exact_div(&content_in(&r, v)).expect("content divides").monic().1;
                a = b;
                b = pr;
            }
            c.mul(&b).monic().1
        }
    }
}

/// `p` with variable `w` set to `t`.
fn eval_var(p: &Poly, w: usize, t: &Constant) -> Poly {
    Poly::from_terms(
        p.nvars(),
        p.terms().map(|(m, c)| {
            let mut m2 = m.clone();
            let e = core::mem::replace(&mut m2.0[w], 0);
            (m2, c.mul(&t.pow(e)))
        }),
    )
}

fn lc_in(p: &Poly, v: usize) -> Poly {
    p.coeffs_in(v).pop().expect("nonzero polynomial")
}

/// Evaluation points 1, -1, 2, -2, ...
fn point(i: usize) -> Constant {
    let k = (i / 2 + 1) as i64;
    Constant::from_ratio(if i % 2 == 0 { k } else { -k }, 1)
}

/// Gcd of `a` and `b`, both primitive in `v` and of positive degree there,
/// by evaluating a second variable, recursing and interpolating. `None` when
/// the answer does not verify; the caller then falls back.
fn interpolated_gcd(a: &Poly, b: &Poly, v: usize) -> Option<Poly> {
    let n = a.nvars();
    let Some(w) = (0..n).find(|&w| w != v && (a.contains_var(w) || b.contains_var(w))) else {
        let ua = UPoly::new(a.coeffs_in(v).iter().map(|c| c.constant_value().expect("univariate")).collect());
        let ub = UPoly::new(b.coeffs_in(v).iter().map(|c| c.constant_value().expect("univariate")).collect());
        let g = ua.gcd(&ub);
        let coeffs: Vec<Poly> = g.coeffs().iter().map(|c| Poly::constant(n, c.clone())).collect();
        return Some(Poly::from_coeffs_in(n, v, &coeffs));
    };
    let (la, lb) = (lc_in(a, v), lc_in(b, v));
    let gamma = gcd_rec(&la, &lb);
    // The gcd scaled to leading coefficient gamma has at most this w-degree.
    let bound = a.degree_in(w).min(b.degree_in(w)) + gamma.degree_in(w);
    let needed = bound as usize + 1;
    let mut pts: Vec<(Constant, Poly)> = Vec::new();
    let mut target: Option<u32> = None;
    for i in 0..4 * needed + 8 {
        let t = point(i);
        if eval_var(&la, w, &t).is_zero() || eval_var(&lb, w, &t).is_zero() {
            continue;
        }
        let gt = gcd_rec(&eval_var(a, w, &t), &eval_var(b, w, &t));
        let dv = gt.degree_in(v);
        if dv == 0 {
            // Degrees only rise under a specialization that keeps both
            // leading coefficients.
            return Some(Poly::one(n));
        }
        let scale = eval_var(&gamma, w, &t).exact_div(&lc_in(&gt, v)).and_then(|q| q.constant_value());
        let Some(scale) = scale else { continue };
        match target {
            Some(d) if dv > d => continue,
            Some(d) if dv < d => pts.clear(),
            _ => {}
        }
        target = Some(dv);
        pts.push((t, gt.scale(&scale)));
        if pts.len() == needed {
            let h = interpolate(&pts, w, n);
            if h.is_zero() {
                return None;
            }
            let h = h.exact_div(&content_in(&h, v))?;
            return (a.exact_div(&h).is_some() && b.exact_div(&h).is_some()).then_some(h);
        }
    }
    None
}

/// Lagrange interpolation in `w` through `(t_i, p_i)`.
fn interpolate(pts: &[(Constant, Poly)], w: usize, n: usize) -> Poly {
    let x = Poly::var(n, w);
    let mut out = Poly::zero(n);
    for (i, (ti, pi)) in pts.iter().enumerate() {
        let mut basis = Poly::one(n);
        let mut denom = Constant::one();
        for (j, (tj, _)) in pts.iter().enumerate() {
            if i != j {
                basis = basis.mul(&x.sub(&Poly::constant(n, tj.clone())));
                denom = denom.mul(&ti.sub(tj));
            }
        }
        out = out.add(&pi.mul(&basis).scale(&denom.inv().expect("distinct points")));
    }
    out
}

/// Value of a polynomial free of `v` at the integer point `pt`.
fn eval_at(p: &Poly, pt: &[i64]) -> Constant {
    let mut acc = Constant::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (j, &e) in m.0.iter().enumerate() {
            t = t.mul(&Constant::from_ratio(pt[j], 1).pow(e));
        }
        acc = acc.add(&t);
    }
    acc
}

/// Upper bound on `deg_v gcd(a, b)`: at a point where neither leading
/// coefficient vanishes, the degree of the gcd can only go up under
/// specialization.
fn gcd_degree_bound(a: &Poly, b: &Poly, v: usize) -> Option<u32> {
    let n = a.nvars();
    let (ca, cb) = (a.coeffs_in(v), b.coeffs_in(v));
    const POINTS: [i64; 6] = [3, -5, 7, 11, -13, 17];
    for shift in 0..3 {
        let pt: Vec<i64> = (0..n).map(|j| POINTS[(j + shift) % POINTS.len()] + shift as i64).collect();
        let ua = UPoly::new(ca.iter().map(|c| eval_at(c, &pt)).collect());
        let ub = UPoly::new(cb.iter().map(|c| eval_at(c, &pt)).collect());
        if ua.degree() != Some(ca.len() - 1) || ub.degree() != Some(cb.len() - 1) {
            continue;
        }
        return ua.gcd(&ub).degree().map(|d| d as u32);
    }
    None
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub(crate) fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic().1 } else { gcd_rec(&g, &c) };
        if g.is_constant() {
            return Poly::one(p.nvars());
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` in variable `v` (up to a power of `lc_v(b)`).
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let n = a.nvars();
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let mut shift = Poly::var(n, v).pow(dr - db);
        shift = shift.mul(&lr);
        r = r.mul(&lb).sub(&b.mul(&shift));
    }
    r
}

/// `p / gcd(p, ∂p/∂x_1, …, ∂p/∂x_n)`, made monic.
pub fn squarefree_part(p: &Poly) -> Poly {
    let mut g = p.clone();
    for v in 0..p.nvars() {
        let d = p.derivative(v);
        if !d.is_zero() {
            g = poly_gcd(&g, &d);
        }
    }
    p.exact_div(&g).expect("gcd divides").monic().1
}

/// Squarefree decomposition of a nonzero polynomial:
/// `p = unit · Π s_k^k` with the `s_k` squarefree, monic, pairwise coprime
/// and nonconstant. Returns `(unit, [(s_k, k)])`.
pub fn squarefree_decomposition(p: &Poly) -> (Constant, Vec<(Poly, u32)>) {
    let (unit, mut rest) = p.monic();
    let mut out = Vec::new();
    if rest.is_constant() {
        return (unit, out);
    }
    let mut r = squarefree_part(&rest);
    let mut k = 1u32;
    while !rest.is_constant() {
        rest = rest.exact_div(&r).expect("squarefree part divides");
        let next = if rest.is_constant() { Poly::one(p.nvars()) } else { squarefree_part(&rest) };
        let s = r.exact_div(&next).expect("nested squarefree parts divide");
        if !s.is_constant() {
            out.push((s.monic().1, k));
        }
        r = next;
        k += 1;
    }
    (unit, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;

    fn v(i: usize) -> Poly {
        Poly::var(3, i)
    }

    fn k(n: i64) -> Poly {
        Poly::constant(3, Constant::from_i64(n))
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let (a, b) = (v(0), v(1));
        let p = a.mul(&a).sub(&b.mul(&b));
        assert_eq!(poly_gcd(&p, &a.sub(&b)), a.sub(&b));
    }

    #[test]
    fn gcd_of_monomials() {
        let (a, b, c) = (v(0), v(1), v(2));
        assert_eq!(poly_gcd(&a.mul(&b), &a.mul(&c)), a);
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let p = k(3).mul(&v(0)).add(&k(6));
        assert_eq!(poly_gcd(&p, &Poly::zero(3)), v(0).add(&k(2)));
    }

    #[test]
    fn gcd_sign_normalized() {
        let one_minus_b = k(1).sub(&v(1));
        let b_minus_one = v(1).sub(&k(1));
        assert_eq!(poly_gcd(&one_minus_b, &one_minus_b), b_minus_one);
    }

    #[test]
    fn decomposition_reconstructs() {
        let (a, b) = (v(0), v(1));
        let p = k(5).mul(&a.pow(2)).mul(&b.add(&k(1))).mul(&a.sub(&b).pow(3));
        let (u, parts) = squarefree_decomposition(&p);
        let mut prod = Poly::constant(3, u);
        for (s, e) in &parts {
            prod = prod.mul(&s.pow(*e));
        }
        assert_eq!(prod, p);
        assert_eq!(parts.len(), 3);
    }
}
