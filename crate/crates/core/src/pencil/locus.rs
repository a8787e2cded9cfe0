use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::roots::{find_root, primitive};
use super::QuadricMatrix;
use crate::error::{Error, Result};
use crate::field::{poly_gcd, Constant, FieldDescriptor, FieldElement, Names, Poly, RatFunc, Scalar, UPoly};
use crate::squares::{Atom, AtomBasis};

/// Binary form `Σ c_k λ^k μ^(deg-k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    coeffs: Vec<RatFunc>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<RatFunc>) -> Self {
        BinaryForm { coeffs }
    }

    /// Product of linear forms `(p_i λ + q_i μ)`.
    pub fn from_linear_factors(factors: &[(RatFunc, RatFunc)]) -> Self {
        let mut f = BinaryForm { coeffs: vec![RatFunc::one()] };
        for (p, q) in factors {
            f = f.mul(&BinaryForm { coeffs: vec![q.clone(), p.clone()] });
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `λ^k μ^(deg-k)`.
    pub fn coeff(&self, k: usize) -> &RatFunc {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![RatFunc::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn eval(&self, lambda: &FieldElement, mu: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero();
        let d = self.degree() as u32;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = FieldElement::base(c.clone()).mul(&lambda.pow(k as u32)).mul(&mu.pow(d - k as u32));
            acc = acc.add(&t);
        }
        acc
    }

    /// `f(t, 1)`.
    pub fn dehomogenize(&self) -> UPoly<RatFunc> {
        UPoly::new(self.coeffs.clone())
    }

    /// If `self = c · other` for a nonzero `c`, returns `c`.
    pub fn ratio_to(&self, other: &Self) -> Option<RatFunc> {
        if self.degree() != other.degree() {
            return None;
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero())?;
        let c = self.coeffs[k].div(&other.coeffs[k])?;
        (!c.is_zero() && other.scale(&c) == *self).then_some(c)
    }

    pub fn render(&self, names: &Names<'_>) -> String {
        let vars = [String::from("l"), String::from("m")];
        let n = self.degree() as u32;
        let mut parts = Vec::new();
        for k in (0..=self.degree()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mut mono = Vec::new();
            for (v, e) in [(&vars[0], k as u32), (&vars[1], n - k as u32)] {
                match e {
                    0 => {}
                    1 => mono.push(v.clone()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            let cs = crate::field::Render::render(c, names);
            let cs = if cs.contains(' ') || cs.contains('/') { format!("({cs})") } else { cs };
            let term = match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs.clone(),
                ("1", false) => mono.join("*"),
                ("-1", false) => format!("-{}", mono.join("*")),
                _ => format!("{cs}*{}", mono.join("*")),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for t in &parts[1..] {
            match t.strip_prefix('-') {
                Some(r) => {
                    out.push_str(" - ");
                    out.push_str(r);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        out
    }
}

/// `det(λA + μA')`, computed by interpolation at `μ = 1`, `λ = 0..=n`.
pub fn char_form(a: &QuadricMatrix, a2: &QuadricMatrix) -> Result<BinaryForm> {
    let n = a.dim();
    let mut values = Vec::with_capacity(n + 1);
    for t in 0..=n {
        let m = a.matrix().scale(&FieldElement::from_i64(t as i64)).add(a2.matrix());
        let d = m.det();
        let d = d.as_base().cloned().ok_or(Error::UnsupportedDegree(
            "pencil entries must lie in the base field".into(),
        ))?;
        values.push(d);
    }
    // Lagrange interpolation through (t, values[t]).
    let mut poly = UPoly::<RatFunc>::zero();
    for i in 0..=n {
        let mut basis = UPoly::constant(RatFunc::one());
        let mut denom = Constant::one();
        for j in 0..=n {
            if i == j {
                continue;
            }
            basis = basis.mul(&UPoly::linear_root(RatFunc::from_i64(j as i64)));
            denom = denom.mul(&Constant::from_i64(i as i64 - j as i64));
        }
        let scale = values[i].mul(&RatFunc::constant(0, denom.inv().expect("distinct nodes")));
        poly = poly.add(&basis.scale(&scale));
    }
    Ok(BinaryForm { coeffs: (0..=n).map(|k| poly.coeff(k)).collect() })
}

/// Whether the binary form has no repeated factor.
pub fn is_smooth_pencil(f: &BinaryForm) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    let g = f.dehomogenize();
    let gd = g.degree().unwrap_or(0);
    // μ divides f to the power d - deg g.
    if d - gd > 1 {
        return Ok(false);
    }
    Ok(gd == 0 || squarefree_in_t(&g))
}

/// Squarefree test done in `Q(i)[params, t]`; Euclid over the parameter
/// field blows up coefficient sizes.
fn squarefree_in_t(g: &UPoly<RatFunc>) -> bool {
    let n = g.coeffs().iter().map(|c| c.nvars()).max().unwrap_or(0);
    let coeffs: Vec<Poly> = primitive(g, n).iter().map(|c| c.with_nvars(n + 1)).collect();
    let big = Poly::from_coeffs_in(n + 1, n, &coeffs);
    poly_gcd(&big, &big.derivative(n)).degree_in(n) == 0
}

/// A closed point of the degeneracy locus.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedPoint {
    pub index: usize,
    pub degree: usize,
    /// Coordinates `[λ₀ : μ₀]`, in the residue field.
    pub lambda: FieldElement,
    pub mu: FieldElement,
    pub residue: FieldDescriptor,
    /// Irreducible factor of `f` cutting out the point, as a binary form.
    pub factor: BinaryForm,
}

impl ClosedPoint {
    pub fn render_coords(&self, vars: &[String]) -> String {
        let names = self.residue.names(vars);
        let l = crate::field::Render::render(&self.lambda, &names);
        let m = crate::field::Render::render(&self.mu, &names);
        format!("[{l}:{m}]")
    }
}

fn lowest_terms(t: &RatFunc) -> (RatFunc, RatFunc) {
    // t = p/q with monic p.
    let (lc, p) = t.num().monic();
    let q = t.den().scale(&lc.inv().expect("nonzero"));
    (RatFunc::from_poly(p), RatFunc::from_poly(q))
}

/// Splits `r = s^2 · r'` pulling out the square part found by refinement.
fn square_free_part(r: &RatFunc, field: &FieldDescriptor) -> (RatFunc, RatFunc) {
    let n = field.nvars();
    let mut basis = AtomBasis::new(field.mode, n);
    let f = basis.factor(r).expect("nonzero");
    let mut s = RatFunc::one();
    let mut rest = RatFunc::one();
    for (a, e) in &f.exponents {
        let Atom::Poly(p) = basis.atom(*a) else { continue };
        let p = RatFunc::from_poly(p.clone());
        let half = e.div_euclid(2);
        let s_part = p.pow(half.unsigned_abs() as u32);
        s = if half >= 0 { s.mul(&s_part) } else { s.div(&s_part).expect("nonzero") };
        if e.rem_euclid(2) == 1 {
            rest = rest.mul(&p);
        }
    }
    let unit = f.unit.clone();
    match unit.sqrt() {
        Some(u) => (s.mul(&RatFunc::constant(n, u)), rest),
        None => (s, rest.mul(&RatFunc::constant(n, unit))),
    }
}

fn sort_key(p: &ClosedPoint, vars: &[String]) -> (usize, u32, String) {
    let deg = |x: &FieldElement| x.as_base().map_or(u32::MAX, |r| r.height());
    let special = if p.mu.is_zero() {
        0
    } else if p.lambda.is_zero() {
        1
    } else {
        2 + p.degree
    };
    (special, deg(&p.lambda).saturating_add(deg(&p.mu)), p.render_coords(vars))
}

/// Closed points of `V(f) ⊂ P^1` over the base field of `field`, of degree
/// one or two, ordered `[1:0]`, `[0:1]`, remaining degree-one points by
/// coordinate size, then degree-two points.
pub fn degeneracy_locus(f: &BinaryForm, field: &FieldDescriptor) -> Result<Vec<ClosedPoint>> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !is_smooth_pencil(f)? {
        return Err(Error::NotSquarefree);
    }
    let base = field.base();
    let n = field.nvars();
    let one = RatFunc::one();
    let zero = RatFunc::zero();
    let mut points: Vec<ClosedPoint> = Vec::new();
    let mut coeffs = f.coeffs().to_vec();
    let push_linear = |points: &mut Vec<ClosedPoint>, l: RatFunc, m: RatFunc| {
        // The factor vanishing at [l:m] is (m λ - l μ).
        points.push(ClosedPoint {
            index: 0,
            degree: 1,
            lambda: FieldElement::base(l.clone()),
            mu: FieldElement::base(m.clone()),
            residue: base.clone(),
            factor: BinaryForm::new(vec![l.neg(), m]),
        });
    };
    if coeffs.last().is_some_and(|c| c.is_zero()) {
        push_linear(&mut points, one.clone(), zero.clone());
        coeffs.pop();
    }
    if coeffs[0].is_zero() {
        push_linear(&mut points, zero.clone(), one.clone());
        coeffs.remove(0);
    }
    let mut h = UPoly::new(coeffs);
    while h.degree().is_some_and(|d| d >= 1) {
        let Some(t) = find_root(&h, n) else { break };
        let (p, q) = lowest_terms(&t);
        push_linear(&mut points, p, q);
        h = h.exact_div(&UPoly::linear_root(t)).expect("root divides");
    }
    let mut quadratics: Vec<UPoly<RatFunc>> = Vec::new();
    match h.degree().unwrap_or(0) {
        0 => {}
        2 => quadratics.push(h.clone()),
        4 => match split_quartic(&h, field) {
            Some((q1, q2)) => {
                quadratics.push(q1);
                quadratics.push(q2);
            }
            None => return Err(Error::UnsupportedFactorDegree(4)),
        },
        d => return Err(Error::UnsupportedFactorDegree(d)),
    }
    let vars: Vec<String> = Vec::new();
    points.sort_by_cached_key(|p| sort_key(p, &vars));
    for q in quadratics {
        let (c0, c1, c2) = (q.coeff(0), q.coeff(1), q.coeff(2));
        let disc = c1.mul(&c1).sub(&RatFunc::from_i64(4).mul(&c2).mul(&c0));
        let (s, d) = square_free_part(&disc, field);
        let name = format!("w{}", points.len());
        let residue = base.with_extension(&name, d).map_err(|e| match e {
            Error::SquareGenerator => Error::ConstantExtensionRequired,
            e => e,
        })?;
        let root = residue.generator()?.mul(&FieldElement::base(s)).sub(&FieldElement::base(c1.clone()))
            .mul(&FieldElement::base(c2.mul(&RatFunc::from_i64(2)).inv().expect("nonzero")));
        let root = residue.lift(&root)?;
        points.push(ClosedPoint {
            index: 0,
            degree: 2,
            lambda: root,
            mu: residue.lift(&FieldElement::one())?,
            residue,
            factor: BinaryForm::new(vec![c0, c1, c2]),
        });
    }
    for (i, p) in points.iter_mut().enumerate() {
        p.index = i;
        if p.degree == 2 {
            let name = format!("w{i}");
            if let Some(e) = p.residue.ext.as_mut() {
                e.name = name;
            }
        }
    }
    Ok(points)
}

/// Splits a quartic without roots in the field into two quadratics through a
/// root of its resolvent cubic.
fn split_quartic(h: &UPoly<RatFunc>, field: &FieldDescriptor) -> Option<(UPoly<RatFunc>, UPoly<RatFunc>)> {
    let n = field.nvars();
    let lc = h.lc();
    let m = h.monic();
    let (p, q, r, s) = (m.coeff(3), m.coeff(2), m.coeff(1), m.coeff(0));
    let four = RatFunc::from_i64(4);
    let resolvent = UPoly::new(vec![
        four.mul(&q).mul(&s).sub(&r.mul(&r)).sub(&p.mul(&p).mul(&s)),
        p.mul(&r).sub(&four.mul(&s)),
        q.neg(),
        RatFunc::one(),
    ]);
    let y = find_root(&resolvent, n)?;
    let half = RatFunc::constant(0, Constant::from_ratio(1, 2));
    // β, δ roots of z^2 - y z + s; α, γ from α + γ = p, αδ + βγ = r.
    let disc = y.mul(&y).sub(&four.mul(&s));
    let sq = disc.sqrt()?;
    let beta = y.add(&sq).mul(&half);
    let delta = y.sub(&sq).mul(&half);
    let (alpha, gamma) = if beta != delta {
        let alpha = r.sub(&p.mul(&beta)).div(&delta.sub(&beta))?;
        (alpha.clone(), p.sub(&alpha))
    } else {
        let d2 = p.mul(&p).sub(&four.mul(&q.sub(&y)));
        let sq2 = d2.sqrt()?;
        (p.add(&sq2).mul(&half), p.sub(&sq2).mul(&half))
    };
    let f1 = UPoly::new(vec![beta, alpha, RatFunc::one()]);
    let f2 = UPoly::new(vec![delta, gamma, RatFunc::one()]);
    if f1.mul(&f2) != m {
        return None;
    }
    Some((f1.scale(&lc), f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ConstantMode;
    use alloc::vec;

    fn field() -> FieldDescriptor {
        FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into(), "c".into()])
    }

    #[test]
    fn quadratic_points() {
        let f = field();
        let (a, b) = (RatFunc::param(3, 0), RatFunc::param(3, 1));
        // μ(λ² − aμ²)(λ² − bμ²)
        let q1 = BinaryForm::new(vec![a.neg(), RatFunc::zero(), RatFunc::one()]);
        let q2 = BinaryForm::new(vec![b.neg(), RatFunc::zero(), RatFunc::one()]);
        let mu = BinaryForm::new(vec![RatFunc::one(), RatFunc::zero()]);
        let form = mu.mul(&q1).mul(&q2);
        let pts = degeneracy_locus(&form, &f).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts.iter().map(|p| p.degree).sum::<usize>(), 5);
        for p in &pts {
            assert!(form.eval(&p.lambda, &p.mu).is_zero());
        }
        let radicands: Vec<RatFunc> = pts[1..].iter().map(|p| (**p.residue.radicand().unwrap()).clone()).collect();
        assert!(radicands.contains(&a) && radicands.contains(&b));
    }

    #[test]
    fn smoothness() {
        let one = RatFunc::one();
        let lin = |c: i64| (one.clone(), RatFunc::from_i64(c));
        let sq = BinaryForm::from_linear_factors(&[lin(1), lin(1), lin(1), lin(1), lin(1)]);
        assert!(!is_smooth_pencil(&sq).unwrap());
        let ok = BinaryForm::from_linear_factors(&[
            (one.clone(), RatFunc::zero()),
            (RatFunc::zero(), one.clone()),
            lin(1),
            lin(-1),
            lin(2),
        ]);
        assert!(is_smooth_pencil(&ok).unwrap());
        assert_eq!(degeneracy_locus(&ok, &field()).unwrap().len(), 5);
    }
}
