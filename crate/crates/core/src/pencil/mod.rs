//! Pencils of quadrics `λQ + μQ'` in P^4: characteristic form, degeneracy
//! locus, per-point quadric data and the degree-two subschemes singled out by
//! the discriminant classes.
//!
//! Quadrics are stored by their Gram matrix, so `Q(x) = xᵀ M x`.

mod locus;
mod matrix;
pub mod roots;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use locus::{char_form, degeneracy_locus, is_smooth_pencil, BinaryForm, ClosedPoint};
pub use matrix::{dot, Matrix};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement, Names, Render, Scalar};
use crate::squares::{ClassContext, SquareClass};

/// Symmetric, nonzero square matrix of a quadratic form.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricMatrix {
    m: Matrix,
}

impl QuadricMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::Invalid(format!("quadric matrix is {}x{}", m.rows(), m.cols())));
        }
        if !m.is_symmetric() {
            return Err(Error::Invalid("quadric matrix is not symmetric".into()));
        }
        if m.is_zero() {
            return Err(Error::Invalid("quadric matrix is zero".into()));
        }
        Ok(QuadricMatrix { m })
    }

    pub fn diagonal(d: &[FieldElement]) -> Result<Self> {
        Self::new(Matrix::diagonal(d))
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn rank(&self) -> usize {
        self.m.rank()
    }

    pub fn value(&self, p: &[FieldElement]) -> FieldElement {
        self.m.quadratic_value(p)
    }

    /// Renders `Σ m_ij x_i x_j` with the off-diagonal terms doubled.
    pub fn render(&self, names: &Names<'_>) -> String {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                let c = if i == j { self.m.get(i, i).clone() } else { self.m.get(i, j).mul(&FieldElement::from_i64(2)) };
                if c.is_zero() {
                    continue;
                }
                let mono = if i == j { format!("{}^2", var(names, i)) } else { format!("{}*{}", var(names, i), var(names, j)) };
                terms.push((c, mono));
            }
        }
        join_terms(&terms, names)
    }
}

fn var(names: &Names<'_>, i: usize) -> String {
    names.vars.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
}

fn join_terms(terms: &[(FieldElement, String)], names: &Names<'_>) -> String {
    let mut out = String::new();
    for (k, (c, mono)) in terms.iter().enumerate() {
        let cs = c.render(names);
        let wrapped = cs.contains(" + ") || cs[1..].contains(" - ") || cs.contains('/');
        let (neg, body) = match cs.strip_prefix('-') {
            Some(rest) if !wrapped => (true, String::from(rest)),
            _ => (false, if wrapped { format!("({cs})") } else { cs }),
        };
        let term = if body == "1" { mono.clone() } else { format!("{body}*{mono}") };
        match (k, neg) {
            (0, true) => out.push_str(&format!("-{term}")),
            (0, false) => out.push_str(&term),
            (_, true) => out.push_str(&format!(" - {term}")),
            (_, false) => out.push_str(&format!(" + {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `Σ c_i x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    coeffs: Vec<FieldElement>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Invalid("linear form is zero".into()));
        }
        Ok(LinearForm { coeffs })
    }

    /// The coordinate form `x_i` in `n` variables.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut c = vec![FieldElement::zero(); n];
        c[i] = FieldElement::one();
        LinearForm { coeffs: c }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn eval(&self, p: &[FieldElement]) -> FieldElement {
        dot(&self.coeffs, p)
    }

    /// Index of the last nonzero coefficient.
    pub fn pivot(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero form")
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        LinearForm { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn render(&self, names: &Names<'_>) -> String {
        let terms: Vec<(FieldElement, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.clone(), var(names, i)))
            .collect();
        join_terms(&terms, names)
    }
}

/// `λ₀A + μ₀A'` at a point of the locus, checked to have corank one.
pub fn quadric_at(t: &ClosedPoint, a: &QuadricMatrix, a2: &QuadricMatrix) -> Result<QuadricMatrix> {
    let lift = |x: &FieldElement| t.residue.lift(x);
    let m1 = a.matrix().scale(&lift(&t.lambda)?);
    let m2 = a2.matrix().scale(&lift(&t.mu)?);
    let q = QuadricMatrix::new(m1.add(&m2))?;
    let expected = q.dim() - 1;
    let found = q.rank();
    if found != expected {
        return Err(Error::UnexpectedRank { expected, found });
    }
    Ok(q)
}

/// The kernel direction of a corank-one quadric, scaled so its first nonzero
/// coordinate is 1.
pub fn vertex_of(q: &QuadricMatrix) -> Result<Vec<FieldElement>> {
    let ker = q.matrix().kernel();
    if ker.len() != 1 {
        return Err(Error::WrongRank(q.dim() - ker.len()));
    }
    let v = ker.into_iter().next().expect("one vector");
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero kernel vector").inv().expect("nonzero");
    Ok(v.iter().map(|x| x.mul(&lead)).collect())
}

/// First coordinate hyperplane `V(x_i)` missing the vertex.
pub fn default_hyperplane(q: &QuadricMatrix) -> Result<LinearForm> {
    let v = vertex_of(q)?;
    let i = v.iter().position(|x| !x.is_zero()).expect("nonzero vertex");
    Ok(LinearForm::coordinate(q.dim(), i))
}

/// Substitution matrix for `V(h)`: the pivot variable is solved for, the
/// remaining variables are kept in order.
fn hyperplane_substitution(h: &LinearForm) -> (Matrix, usize) {
    let n = h.coeffs.len();
    let p = h.pivot();
    let inv = h.coeffs[p].inv().expect("pivot is nonzero");
    let mut s = Matrix::zero(n, n - 1);
    for (col, j) in (0..n).filter(|&j| j != p).enumerate() {
        s.set(j, col, FieldElement::one());
        s.set(p, col, h.coeffs[j].mul(&inv).neg());
    }
    (s, p)
}

/// Gram matrix of `Q` restricted to `V(h)`, in the coordinates other than the
/// pivot of `h`.
pub fn restrict(q: &QuadricMatrix, h: &LinearForm) -> Matrix {
    let (s, _) = hyperplane_substitution(h);
    s.transpose().mul(q.matrix()).mul(&s)
}

/// Discriminant of the smooth quadric `Q ∩ H`.
pub fn discriminant_eps(q: &QuadricMatrix, h: &LinearForm) -> Result<FieldElement> {
    let v = vertex_of(q)?;
    if h.eval(&v).is_zero() {
        return Err(Error::VertexOnHyperplane);
    }
    Ok(restrict(q, h).det())
}

/// Square class of the discriminant in the analysis field of `ctx`. Only
/// quadrics over the base layer have classes in the shared atom basis.
pub fn discriminant_class(ctx: &mut ClassContext, q: &QuadricMatrix, h: &LinearForm) -> Result<SquareClass> {
    let d = discriminant_eps(q, h)?;
    ctx.class_of(&d)
}

/// Polar form `2 Pᵀ Q x` at a smooth point of `Q`.
pub fn tangent_form(q: &QuadricMatrix, p: &[FieldElement]) -> Result<LinearForm> {
    if p.len() != q.dim() {
        return Err(Error::Invalid(format!("point has {} coordinates, expected {}", p.len(), q.dim())));
    }
    if !q.value(p).is_zero() {
        return Err(Error::NotOnQuadric);
    }
    let qp = q.matrix().mul_vec(p);
    if qp.iter().all(|x| x.is_zero()) {
        return Err(Error::SingularPoint);
    }
    let two = FieldElement::from_i64(2);
    Ok(LinearForm { coeffs: qp.iter().map(|x| x.mul(&two)).collect() })
}

/// `Q` on a tangent hyperplane written as `scale·(ℓ₁² − ρ ℓ₂²)`, which factors
/// as `scale·(ℓ₁ − √ρ ℓ₂)(ℓ₁ + √ρ ℓ₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitSection {
    pub tangent: LinearForm,
    pub scale: FieldElement,
    pub first: LinearForm,
    pub second: LinearForm,
    pub radicand: FieldElement,
    /// `√ρ` when it lies in the field of the inputs.
    pub root: Option<FieldElement>,
    /// Restricted quadratic form, in the full coordinates with the pivot of
    /// the tangent form set to zero.
    pub restricted: QuadricMatrix,
}

impl SplitSection {
    /// Both linear factors, when `√ρ` is available.
    pub fn factors(&self) -> Option<(LinearForm, LinearForm)> {
        let r = self.root.as_ref()?;
        let comb = |s: &FieldElement| LinearForm {
            coeffs: self.first.coeffs.iter().zip(&self.second.coeffs).map(|(a, b)| a.add(&s.mul(b))).collect(),
        };
        Some((comb(&r.neg()), comb(r)))
    }

    /// Exact check of `restricted = scale·(ℓ₁ℓ₁ᵀ − ρ ℓ₂ℓ₂ᵀ)`.
    pub fn verify(&self) -> bool {
        let n = self.first.coeffs.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (f, s) = (&self.first.coeffs, &self.second.coeffs);
                let v = f[i].mul(&f[j]).sub(&self.radicand.mul(&s[i].mul(&s[j]))).mul(&self.scale);
                v == *self.restricted.matrix().get(i, j)
            })
        })
    }
}

/// Expands a matrix on the non-pivot coordinates back to all `n` coordinates.
fn embed(m: &Matrix, n: usize, pivot: usize) -> Matrix {
    let idx: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
    let mut out = Matrix::zero(n, n);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out.set(i, j, m.get(a, b).clone());
        }
    }
    out
}

/// A vector `w` with `wᵀMw ≠ 0`, among basis vectors and pairwise sums.
fn anisotropic_vector(m: &Matrix) -> Option<Vec<FieldElement>> {
    let n = m.rows();
    let unit = |i: usize| {
        let mut v = vec![FieldElement::zero(); n];
        v[i] = FieldElement::one();
        v
    };
    if let Some(i) = (0..n).find(|&i| !m.get(i, i).is_zero()) {
        return Some(unit(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !m.get(i, j).is_zero() {
                let mut v = unit(i);
                v[j] = FieldElement::one();
                return Some(v);
            }
        }
    }
    None
}

/// Splits off `α ℓ²` with `ℓ(x) = wᵀMx / α`, `α = wᵀMw`.
fn split_square(m: &Matrix) -> Option<(FieldElement, Vec<FieldElement>, Matrix)> {
    let w = anisotropic_vector(m)?;
    let mw = m.mul_vec(&w);
    let alpha = dot(&w, &mw);
    let inv = alpha.inv()?;
    let l: Vec<FieldElement> = mw.iter().map(|x| x.mul(&inv)).collect();
    let n = m.rows();
    let mut rest = m.clone();
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j).sub(&alpha.mul(&l[i]).mul(&l[j]));
            rest.set(i, j, v);
        }
    }
    Some((alpha, l, rest))
}

/// Restricts `Q` to its tangent hyperplane at `P` and factors the rank-two
/// result by diagonalization.
pub fn split_tangent_section(q: &QuadricMatrix, p: &[FieldElement]) -> Result<SplitSection> {
    let tangent = tangent_form(q, p)?;
    let n = q.dim();
    let r = restrict(q, &tangent);
    let pivot = tangent.pivot();
    let full = embed(&r, n, pivot);
    let rank = full.rank();
    if rank != 2 {
        return Err(Error::RankNotTwo(rank));
    }
    let (a1, l1, rest) = split_square(&full).ok_or(Error::RankNotTwo(0))?;
    let (a2, l2, _) = split_square(&rest).ok_or(Error::RankNotTwo(1))?;
    let rho = a2.div(&a1).expect("nonzero").neg();
    let root = rho.sqrt();
    Ok(SplitSection {
        tangent,
        scale: a1,
        first: LinearForm { coeffs: l1 },
        second: LinearForm { coeffs: l2 },
        radicand: rho,
        root,
        restricted: QuadricMatrix { m: full },
    })
}

/// Checks the three clauses of condition (*) on every degree-two subscheme
/// of the locus: a pair of rational points or a single quadratic point.
pub fn star_subschemes(locus: &[ClosedPoint], eps: &[FieldElement], field: &FieldDescriptor) -> Result<Vec<Vec<usize>>> {
    if locus.len() != eps.len() {
        return Err(Error::Invalid("one discriminant per locus point is required".into()));
    }
    let mut out = Vec::new();
    let linear: Vec<usize> = (0..locus.len()).filter(|&i| locus[i].degree == 1).collect();
    let nonsquare: Vec<bool> = linear
        .iter()
        .map(|&i| field.is_square(&eps[i]).map(|s| !s))
        .collect::<Result<_>>()?;
    for (x, &i) in linear.iter().enumerate() {
        for (y, &j) in linear.iter().enumerate().skip(x + 1) {
            if nonsquare[x] && nonsquare[y] && field.is_square(&eps[i].mul(&eps[j]))? {
                out.push(vec![i, j]);
            }
        }
    }
    for (i, t) in locus.iter().enumerate().filter(|(_, t)| t.degree == 2) {
        if field.ext.is_some() {
            return Err(Error::UnsupportedDegree(format!(
                "quadratic point {i} over a field that already carries an extension"
            )));
        }
        let norm = t.residue.norm(&eps[i])?;
        if field.is_square(&norm)? && !t.residue.is_square(&eps[i])? {
            out.push(vec![i]);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ConstantMode, RatFunc};

    fn k(n: i64) -> FieldElement {
        FieldElement::from_i64(n)
    }

    #[test]
    fn diagonal_char_form() {
        let a = QuadricMatrix::diagonal(&[k(1), k(1), k(1), k(1), k(1)]).unwrap();
        let b = QuadricMatrix::diagonal(&[k(1), k(2), k(3), k(4), k(5)]).unwrap();
        let f = char_form(&a, &b).unwrap();
        let one = RatFunc::one();
        let expected = BinaryForm::from_linear_factors(
            &(1..=5).map(|n| (one.clone(), RatFunc::from_i64(n))).collect::<Vec<_>>(),
        );
        assert_eq!(f, expected);
        assert_eq!(char_form(&a, &a).unwrap(), BinaryForm::from_linear_factors(&vec![(one.clone(), one.clone()); 5]));
    }

    #[test]
    fn vertex_and_eps_of_cone() {
        let q = QuadricMatrix::diagonal(&[k(1), k(1), k(1), k(1), k(0)]).unwrap();
        assert_eq!(vertex_of(&q).unwrap(), vec![k(0), k(0), k(0), k(0), k(1)]);
        let h = default_hyperplane(&q).unwrap();
        assert_eq!(discriminant_eps(&q, &h).unwrap(), k(1));
        assert_eq!(discriminant_eps(&q, &LinearForm::coordinate(5, 0)), Err(Error::VertexOnHyperplane));
    }

    #[test]
    fn splitting_sum_of_squares() {
        let f = FieldDescriptor::new(ConstantMode::Cyclotomic, vec![]);
        let _ = f;
        // x0^2 - x1^2 + x2^2 + x3^2 at [1:1:0:0]: tangent section x2^2 + x3^2.
        let q = QuadricMatrix::diagonal(&[k(1), k(-1), k(1), k(1)]).unwrap();
        let s = split_tangent_section(&q, &[k(1), k(1), k(0), k(0)]).unwrap();
        assert!(s.verify());
        assert_eq!(s.radicand, k(-1));
        let (l1, l2) = s.factors().unwrap();
        let i = FieldElement::constant(crate::field::Constant::i());
        assert_eq!(l1.coeffs()[2..], [k(1), i.neg()]);
        assert_eq!(l2.coeffs()[2..], [k(1), i]);
    }

    #[test]
    fn tangent_of_cone() {
        let mut d = vec![k(0); 5];
        d[0] = k(1);
        d[1] = k(-1);
        let q = QuadricMatrix::diagonal(&d).unwrap();
        let t = tangent_form(&q, &[k(1), k(1), k(0), k(0), k(0)]).unwrap();
        assert_eq!(t.coeffs()[..2], [k(2), k(-2)]);
        assert_eq!(tangent_form(&q, &[k(1), k(0), k(0), k(0), k(0)]), Err(Error::NotOnQuadric));
        assert_eq!(tangent_form(&q, &[k(0), k(0), k(1), k(0), k(0)]), Err(Error::SingularPoint));
    }
}
