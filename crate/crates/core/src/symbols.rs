//! Quaternion symbols `(u, f)` with `u` a constant of the analysis field and
//! `f` a rational function on the surface, a checker for certified rewrite
//! chains, and tame residues of constant symbols.
//!
//! Everything is 2-torsion: a symbol is a formal sum of slots modulo 2, so
//! subtraction and addition coincide.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::is_sum;
use crate::field::{Constant, FieldDescriptor, FieldElement, MPoly, Monomial, Names, Render, Scalar, Valuation};
use crate::pencil::{star_subschemes, ClosedPoint, LinearForm, QuadricMatrix};
use crate::squares::{ClassContext, SquareClass};

/// Forms in the homogeneous coordinates with coefficients in the analysis field.
pub type FormPoly = MPoly<FieldElement>;

/// `Σ c_i x_i` as a polynomial.
pub fn linear_poly(l: &LinearForm) -> FormPoly {
    let n = l.coeffs().len();
    let mut p = FormPoly::zero(n);
    for (i, c) in l.coeffs().iter().enumerate() {
        p = p.add(&FormPoly::monomial(n, Monomial::var(n, i), c.clone()));
    }
    p
}

/// The quadratic form `xᵀ Q x`.
pub fn quadric_poly(q: &QuadricMatrix) -> FormPoly {
    let n = q.dim();
    let m = q.matrix();
    let mut p = FormPoly::zero(n);
    for i in 0..n {
        for j in 0..n {
            let e = Monomial::var(n, i).mul(&Monomial::var(n, j));
            p = p.add(&FormPoly::monomial(n, e, m.get(i, j).clone()));
        }
    }
    p
}

fn lift_poly(p: &FormPoly, field: &FieldDescriptor) -> Result<FormPoly> {
    let mut out = FormPoly::zero(p.nvars());
    for (m, c) in p.terms() {
        out = out.add(&FormPoly::monomial(p.nvars(), m.clone(), field.lift(c)?));
    }
    Ok(out)
}

/// Square test for a form: a square constant times the square of a form.
fn is_square_form(p: &FormPoly, field: &FieldDescriptor) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (lc, m) = p.monic();
    if m.sqrt().is_none() {
        return Ok(false);
    }
    field.is_square(&lc)
}

/// A quotient of forms of equal degree, i.e. a rational function on the
/// surface.
#[derive(Clone, Debug)]
pub struct RationalFunctionOnX {
    num: FormPoly,
    den: FormPoly,
}

impl RationalFunctionOnX {
    pub fn new(num: FormPoly, den: FormPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("denominator is zero".into()));
        }
        if num.nvars() != den.nvars() {
            return Err(Error::Invalid("numerator and denominator use different coordinates".into()));
        }
        if !num.is_zero() {
            if !num.is_homogeneous() || !den.is_homogeneous() {
                return Err(Error::Invalid("rational function must be a quotient of forms".into()));
            }
            if num.total_degree() != den.total_degree() {
                return Err(Error::Invalid(format!(
                    "numerator degree {} differs from denominator degree {}",
                    num.total_degree().unwrap_or(0),
                    den.total_degree().unwrap_or(0)
                )));
            }
        }
        Ok(RationalFunctionOnX { num, den })
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        RationalFunctionOnX { num: FormPoly::constant(nvars, c), den: FormPoly::one(nvars) }
    }

    pub fn num(&self) -> &FormPoly {
        &self.num
    }

    pub fn den(&self) -> &FormPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value when both numerator and denominator are constants.
    pub fn constant_value(&self) -> Option<FieldElement> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        n.div(&d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunctionOnX { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(RationalFunctionOnX { num: self.num.mul(&o.den), den: self.den.mul(&o.num) })
    }

    pub fn sub(&self, o: &Self) -> Self {
        RationalFunctionOnX {
            num: self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        RationalFunctionOnX { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Equality as rational functions.
    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// Whether this is a nonzero square in the function field.
    pub fn is_square(&self, field: &FieldDescriptor) -> Result<bool> {
        is_square_form(&self.num.mul(&self.den), field)
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        RationalFunctionOnX { num: self.num.map_coeffs(&f), den: self.den.map_coeffs(&f) }
    }

    pub fn render(&self, names: &Names<'_>) -> String {
        let n = self.num.render(names);
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            return n;
        }
        let d = self.den.render(names);
        let n = if is_sum(&n) { format!("({n})") } else { n };
        let d = if d.contains(' ') || d.contains('*') || d.contains('/') { format!("({d})") } else { d };
        format!("{n}/{d}")
    }
}

/// One term `(u, f)` of a symbol.
#[derive(Clone, Debug)]
pub struct Slot {
    pub u: FieldElement,
    pub f: RationalFunctionOnX,
}

impl Slot {
    pub fn new(u: FieldElement, f: RationalFunctionOnX) -> Result<Self> {
        if u.is_zero() || f.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(Slot { u, f })
    }

    pub fn same_as(&self, o: &Slot) -> bool {
        self.u == o.u && self.f.equals(&o.f)
    }

    pub fn render(&self, names: &Names<'_>) -> String {
        format!("({}, {})", self.u.render(names), self.f.render(names))
    }
}

/// A formal sum of quaternion symbols, read modulo 2.
#[derive(Clone, Debug, Default)]
pub struct QuaternionSymbol {
    slots: Vec<Slot>,
}

impl QuaternionSymbol {
    pub fn trivial() -> Self {
        QuaternionSymbol { slots: Vec::new() }
    }

    pub fn new(slots: Vec<Slot>) -> Self {
        QuaternionSymbol { slots }
    }

    pub fn single(u: FieldElement, f: RationalFunctionOnX) -> Result<Self> {
        Ok(QuaternionSymbol { slots: vec![Slot::new(u, f)?] })
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// True when no slot is left; this is formal, not a Brauer-class test.
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Formal sum.
    pub fn add(&self, o: &Self) -> Self {
        let mut slots = self.slots.clone();
        slots.extend(o.slots.iter().cloned());
        QuaternionSymbol { slots }
    }

    /// Positional slot-by-slot equality.
    pub fn same_as(&self, o: &Self) -> bool {
        self.slots.len() == o.slots.len() && self.slots.iter().zip(&o.slots).all(|(a, b)| a.same_as(b))
    }

    /// Merges slots through bilinearity in either entry and drops slots that
    /// vanish because an entry is a square or `f = -u` up to squares.
    pub fn normalize(&self, field: &FieldDescriptor) -> Result<QuaternionSymbol> {
        let mut slots = self.slots.clone();
        loop {
            let before = slots.len();
            slots = drop_split(slots, field)?;
            slots = merge(slots, field, |a, b, f| f.is_square(&a.u.mul(&b.u)), |a, b| Slot {
                u: a.u.clone(),
                f: a.f.mul(&b.f),
            })?;
            slots = drop_split(slots, field)?;
            slots = merge(slots, field, |a, b, f| a.f.mul(&b.f).is_square(f), |a, b| Slot {
                u: a.u.mul(&b.u),
                f: a.f.clone(),
            })?;
            if slots.len() == before {
                break;
            }
        }
        Ok(QuaternionSymbol { slots })
    }

    pub fn render(&self, names: &Names<'_>) -> String {
        if self.slots.is_empty() {
            return "0".to_string();
        }
        self.slots.iter().map(|s| s.render(names)).collect::<Vec<_>>().join(" + ")
    }
}

fn slot_vanishes(s: &Slot, field: &FieldDescriptor) -> Result<bool> {
    Ok(field.is_square(&s.u)?
        || s.f.is_square(field)?
        || s.f.scale(&s.u.neg()).is_square(field)?)
}

fn drop_split(slots: Vec<Slot>, field: &FieldDescriptor) -> Result<Vec<Slot>> {
    let mut out = Vec::new();
    for s in slots {
        if !slot_vanishes(&s, field)? {
            out.push(s);
        }
    }
    Ok(out)
}

fn merge(
    slots: Vec<Slot>,
    field: &FieldDescriptor,
    related: impl Fn(&Slot, &Slot, &FieldDescriptor) -> Result<bool>,
    combine: impl Fn(&Slot, &Slot) -> Slot,
) -> Result<Vec<Slot>> {
    let mut out: Vec<Slot> = Vec::new();
    'next: for s in slots {
        for g in out.iter_mut() {
            if related(g, &s, field)? {
                *g = combine(g, &s);
                continue 'next;
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// The identities a rewrite step may appeal to.
#[derive(Clone, Debug)]
pub enum Rule {
    /// `(u,f) + (u,g) = (u,fg)` and `(u,f) + (v,f) = (uv,f)`.
    Bilinearity,
    /// Drops a square factor from one entry, or a slot with a square entry.
    KillSquare,
    /// Divides `f` by the norm `s² - u t²`.
    NormOfExtension { s: RationalFunctionOnX, t: RationalFunctionOnX },
    /// Replaces `f` by a function agreeing with it on the given defining quadric.
    SubstituteRelation { relation: usize },
    /// Like `KillSquare`, restricted to constant factors.
    ConstantSquare,
    /// `(u, f) = (u, -uf)`.
    SwapNegation,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Bilinearity => "bilinearity",
            Rule::KillSquare => "killSquare",
            Rule::NormOfExtension { .. } => "normOfExtension",
            Rule::SubstituteRelation { .. } => "substituteRelation",
            Rule::ConstantSquare => "constantSquare",
            Rule::SwapNegation => "swapNegation",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RewriteStep {
    pub rule: Rule,
    pub before: QuaternionSymbol,
    pub after: QuaternionSymbol,
}

/// One accepted step of a checked chain.
#[derive(Clone, Debug)]
pub struct TraceLine {
    pub index: usize,
    pub rule: &'static str,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct VerifiedChain {
    pub result: QuaternionSymbol,
    pub trace: Vec<TraceLine>,
}

enum Change<'a> {
    Changed(&'a Slot, &'a Slot),
    Removed(&'a Slot),
}

fn single_change<'a>(b: &'a QuaternionSymbol, a: &'a QuaternionSymbol) -> core::result::Result<Change<'a>, String> {
    if b.slots.len() == a.slots.len() {
        let diff: Vec<usize> = (0..b.slots.len()).filter(|&i| !b.slots[i].same_as(&a.slots[i])).collect();
        return match diff.as_slice() {
            [j] => Ok(Change::Changed(&b.slots[*j], &a.slots[*j])),
            [] => Err("step changes nothing".into()),
            _ => Err(format!("step changes {} slots, expected one", diff.len())),
        };
    }
    if b.slots.len() == a.slots.len() + 1 {
        for j in 0..b.slots.len() {
            let rest = b.slots.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, s)| s);
            if rest.zip(&a.slots).all(|(x, y)| x.same_as(y)) {
                return Ok(Change::Removed(&b.slots[j]));
            }
        }
    }
    Err("step must rewrite or remove exactly one slot".into())
}

fn ratio_check(
    old: &Slot,
    new: &Slot,
    field: &FieldDescriptor,
    constant_only: bool,
) -> Result<core::result::Result<String, String>> {
    let ok_constant = |x: Option<FieldElement>| -> Result<bool> {
        match x {
            Some(c) if c.constant_value().is_some() => field.is_square(&c),
            _ => Ok(false),
        }
    };
    if old.u == new.u {
        let ratio = old.f.div(&new.f)?;
        let good = if constant_only { ok_constant(ratio.constant_value())? } else { ratio.is_square(field)? };
        return Ok(if good {
            Ok("removed factor is a square".into())
        } else {
            Err("removed factor of f is not a square".into())
        });
    }
    if old.f.equals(&new.f) {
        let ratio = old.u.div(&new.u).ok_or(Error::ZeroElement)?;
        let good = if constant_only { ok_constant(Some(ratio))? } else { field.is_square(&ratio)? };
        return Ok(if good {
            Ok("removed factor of u is a square".into())
        } else {
            Err("removed factor of u is not a square".into())
        });
    }
    Ok(Err("both entries changed".into()))
}

fn check_step(step: &RewriteStep, relations: &[QuadricMatrix], field: &FieldDescriptor) -> Result<core::result::Result<String, String>> {
    if let Rule::Bilinearity = step.rule {
        let sum = step.before.add(&step.after).normalize(field)?;
        return Ok(if sum.is_empty() {
            Ok("before + after normalizes to 0".into())
        } else {
            Err("not a consequence of bilinearity".into())
        });
    }
    let change = match single_change(&step.before, &step.after) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e)),
    };
    match (&step.rule, change) {
        (Rule::KillSquare, Change::Changed(old, new)) => ratio_check(old, new, field, false),
        (Rule::ConstantSquare, Change::Changed(old, new)) => ratio_check(old, new, field, true),
        (Rule::KillSquare, Change::Removed(old)) => Ok(if field.is_square(&old.u)? || old.f.is_square(field)? {
            Ok("slot has a square entry".into())
        } else {
            Err("no entry of the removed slot is a square".into())
        }),
        (Rule::ConstantSquare, Change::Removed(old)) => {
            let fc = old.f.constant_value();
            let is_const_square = |x: &FieldElement| -> Result<bool> {
                Ok(x.constant_value().is_some() && field.is_square(x)?)
            };
            let good = is_const_square(&old.u)? || matches!(fc, Some(ref c) if is_const_square(c)?);
            Ok(if good { Ok("slot has a constant square entry".into()) } else { Err("no constant square entry".into()) })
        }
        (Rule::NormOfExtension { s, t }, change) => {
            let (old, new) = match change {
                Change::Changed(o, n) => (o, Some(n)),
                Change::Removed(o) => (o, None),
            };
            if s.nvars() != old.f.nvars() || t.nvars() != old.f.nvars() {
                return Ok(Err("witnesses use different coordinates".into()));
            }
            let norm = s.square().sub(&t.square().scale(&old.u));
            if norm.is_zero() {
                return Ok(Err("s^2 - u t^2 vanishes".into()));
            }
            let expected = match new {
                Some(n) if n.u != old.u => return Ok(Err("first entry changed".into())),
                Some(n) => n.f.mul(&norm),
                None => norm,
            };
            Ok(if expected.equals(&old.f) {
                Ok("f = (s^2 - u t^2) * f'".into())
            } else {
                Err("f is not the norm s^2 - u t^2 times the new entry".into())
            })
        }
        (Rule::SubstituteRelation { relation }, Change::Changed(old, new)) => {
            let Some(q) = relations.get(*relation) else {
                return Ok(Err(format!("no relation with index {relation}")));
            };
            if old.u != new.u {
                return Ok(Err("first entry changed".into()));
            }
            let q = quadric_poly(q);
            if q.nvars() != old.f.nvars() {
                return Ok(Err("relation uses different coordinates".into()));
            }
            if new.f.den().exact_div(&q).is_some() {
                return Ok(Err("new denominator vanishes on the surface".into()));
            }
            let diff = old.f.num().mul(new.f.den()).sub(&new.f.num().mul(old.f.den()));
            Ok(if diff.exact_div(&q).is_some() {
                Ok("difference is a multiple of the relation".into())
            } else {
                Err("difference is not a multiple of the relation".into())
            })
        }
        (Rule::SwapNegation, Change::Changed(old, new)) => {
            if old.u != new.u {
                return Ok(Err("first entry changed".into()));
            }
            let neg_u = RationalFunctionOnX::constant(old.f.nvars(), old.u.neg());
            let good = new.f.equals(&old.f.mul(&neg_u)) || new.f.mul(&neg_u).equals(&old.f);
            Ok(if good { Ok("used (u, -u) = 0".into()) } else { Err("new entry is not -u f or -f/u".into()) })
        }
        (rule, Change::Removed(..)) => Ok(Err(format!("{} cannot remove a slot", rule.name()))),
        (Rule::Bilinearity, _) => unreachable!(),
    }
}

/// Checks every step in isolation and that consecutive steps connect;
/// returns the final symbol with a trace of the accepted steps.
pub fn verify_simplification(
    steps: &[RewriteStep],
    relations: &[QuadricMatrix],
    field: &FieldDescriptor,
) -> Result<VerifiedChain> {
    if steps.is_empty() {
        return Err(Error::Invalid("empty rewrite chain".into()));
    }
    let mut trace = Vec::new();
    for (index, step) in steps.iter().enumerate() {
        if index > 0 && !steps[index - 1].after.same_as(&step.before) {
            return Err(Error::StepRejected { index, reason: "does not continue the previous step".into() });
        }
        match check_step(step, relations, field)? {
            Ok(note) => trace.push(TraceLine { index, rule: step.rule.name(), note }),
            Err(reason) => return Err(Error::StepRejected { index, reason }),
        }
    }
    Ok(VerifiedChain { result: steps[steps.len() - 1].after.clone(), trace })
}

/// Looks for a norm step on slot `j` when `f = (p x_i² + q x_j²)/w²`:
/// then `f = p (s² - u t²)` with `s = x_i/w`, `t = λ x_j/w`, `λ² = -q/(pu)`.
pub fn suggest_norm_step(symbol: &QuaternionSymbol, j: usize) -> Option<RewriteStep> {
    let slot = symbol.slots.get(j)?;
    let n = slot.f.nvars();
    let w = slot.f.den().sqrt()?;
    let terms: Vec<(&Monomial, &FieldElement)> = slot.f.num().terms().collect();
    let [(m1, c1), (m2, c2)] = terms.as_slice() else { return None };
    let var = |m: &Monomial| -> Option<usize> {
        let nz: Vec<usize> = (0..n).filter(|&i| m.0[i] != 0).collect();
        (nz.len() == 1 && m.0[nz[0]] == 2).then(|| nz[0])
    };
    let (i, k) = (var(m1)?, var(m2)?);
    let (p, q) = ((*c1).clone(), (*c2).clone());
    let lambda = q.neg().div(&p.mul(&slot.u))?.sqrt()?;
    let s = RationalFunctionOnX::new(FormPoly::var(n, i), w.clone()).ok()?;
    let t = RationalFunctionOnX::new(FormPoly::monomial(n, Monomial::var(n, k), lambda), w).ok()?;
    let mut after = symbol.clone();
    after.slots[j] = Slot::new(slot.u.clone(), RationalFunctionOnX::constant(n, p)).ok()?;
    Some(RewriteStep { rule: Rule::NormOfExtension { s, t }, before: symbol.clone(), after })
}

/// `Tr ε + 2√N(ε)`, which agrees with `ε` up to squares in `K(T)` when the
/// norm is a square.
fn descend_quadratic(t: &ClosedPoint, e: &FieldElement) -> Result<FieldElement> {
    let e = t.residue.lift(e)?;
    let n = FieldElement::base(e.norm());
    let root = n.sqrt().ok_or_else(|| Error::UnsupportedDegree(format!("norm of ε at point {} has no root", t.index)))?;
    let tr = FieldElement::base(e.trace());
    let two = FieldElement::from_i64(2);
    for r in [root.clone(), root.neg()] {
        let w = tr.add(&two.mul(&r));
        if !w.is_zero() {
            return Ok(w);
        }
    }
    Err(Error::UnsupportedDegree(format!("degenerate ε at point {}", t.index)))
}

/// `(ε, l^{-deg} Π N(l_T))` for a subscheme satisfying (*). Tangent forms of
/// quadratic points carry coefficients in the residue field.
pub fn build_algebra(
    subscheme: &[usize],
    locus: &[ClosedPoint],
    eps: &[FieldElement],
    tangents: &[(usize, LinearForm)],
    l: &LinearForm,
    ctx: &mut ClassContext,
) -> Result<QuaternionSymbol> {
    let field = ctx.field.clone();
    let mut sorted = subscheme.to_vec();
    sorted.sort_unstable();
    if !star_subschemes(locus, eps, &field)?.contains(&sorted) {
        return Err(Error::StarViolated(format!("subscheme {sorted:?}")));
    }
    let n = l.coeffs().len();
    let mut num = FormPoly::one(n);
    let mut degree = 0u32;
    for &i in &sorted {
        let t = &locus[i];
        let lt = tangents
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, f)| f)
            .ok_or(Error::MissingTangentForm(i))?;
        if lt.coeffs().len() != n {
            return Err(Error::Invalid(format!("tangent form at point {i} has the wrong length")));
        }
        let p = linear_poly(lt);
        let factor = if t.degree == 1 {
            lift_poly(&p, &field)?
        } else {
            let p = lift_poly(&p, &t.residue)?;
            let norm = p.mul(&p.map_coeffs(|c| c.conjugate()));
            lift_poly(&norm.map_coeffs(|c| FieldElement::base(c.lo().clone())), &field)?
        };
        num = num.mul(&factor);
        degree += t.degree as u32;
    }
    let e = match locus[sorted[0]].degree {
        1 => eps[sorted[0]].clone(),
        _ => descend_quadratic(&locus[sorted[0]], &eps[sorted[0]])?,
    };
    let class = ctx.class_of(&e)?;
    if class.is_trivial() {
        return Ok(QuaternionSymbol::trivial());
    }
    let u = field.lift(&FieldElement::base(ctx.basis.representative(&class)))?;
    let den = lift_poly(&linear_poly(l), &field)?.pow(degree);
    QuaternionSymbol::single(u, RationalFunctionOnX::new(num, den)?)
}

/// Applies the nontrivial automorphism of the extension layer to every coefficient.
pub fn conjugate_symbol(field: &FieldDescriptor, a: &QuaternionSymbol) -> Result<QuaternionSymbol> {
    field.ext.as_ref().ok_or(Error::NoExtensionLayer)?;
    let mut slots = Vec::new();
    for s in &a.slots {
        let u = field.conjugate(&s.u)?;
        let f = s.f.map_coeffs(|c| field.lift(c).map(|c| c.conjugate()).unwrap_or_else(|_| c.clone()));
        slots.push(Slot { u, f });
    }
    Ok(QuaternionSymbol { slots })
}

fn signed_pow(x: &FieldElement, e: i64) -> Result<FieldElement> {
    let b = if e < 0 { x.inv().ok_or(Error::ZeroElement)? } else { x.clone() };
    Ok(b.pow(e.unsigned_abs() as u32))
}

/// Residue of a constant symbol: the class of `(-1)^{v(u)v(f)} u^{v(f)} f^{-v(u)}`
/// reduced at `v`, summed over slots. `ctx` must be set up on the residue field.
pub fn tame_residue(a: &QuaternionSymbol, v: &Valuation, ctx: &mut ClassContext) -> Result<SquareClass> {
    if ctx.field != *v.residue_field() {
        return Err(Error::Invalid("class context is not on the residue field".into()));
    }
    let mut total = SquareClass::trivial();
    for s in &a.slots {
        let g = s
            .f
            .constant_value()
            .ok_or_else(|| Error::UnsupportedValuation("second entry is not constant".into()))?;
        let (vu, vg) = (v.order(&s.u)?, v.order(&g)?);
        let sign = if (vu * vg).rem_euclid(2) == 1 { FieldElement::one().neg() } else { FieldElement::one() };
        let x = sign.mul(&signed_pow(&s.u, vg)?).mul(&signed_pow(&g, -vu)?);
        let r = v.reduce(&x)?;
        total = total.mul(&ctx.class_of(&r)?);
    }
    Ok(ctx.reduce(&total))
}

/// A unit constant as a rational function, handy for building symbols.
pub fn constant_function(nvars: usize, c: Constant) -> RationalFunctionOnX {
    RationalFunctionOnX::constant(nvars, FieldElement::constant(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ConstantMode, RatFunc};

    fn k() -> FieldDescriptor {
        FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into(), "c".into()])
    }

    fn x(i: usize) -> FormPoly {
        FormPoly::var(2, i)
    }

    fn cst(f: &FieldDescriptor, e: FieldElement) -> RationalFunctionOnX {
        let _ = f;
        RationalFunctionOnX::constant(2, e)
    }

    #[test]
    fn norm_form_is_split() {
        let f = k();
        let (a, b) = (f.param(0), f.param(1));
        let s = RationalFunctionOnX::new(x(0), x(1)).unwrap();
        let t = cst(&f, b.clone());
        let norm = s.square().sub(&t.square().scale(&a));
        let sym = QuaternionSymbol::single(a.clone(), norm.clone()).unwrap();
        let step = RewriteStep { rule: Rule::NormOfExtension { s, t }, before: sym, after: QuaternionSymbol::trivial() };
        let out = verify_simplification(&[step], &[], &f).unwrap();
        assert!(out.result.is_empty());
    }

    #[test]
    fn kill_square_rejects_non_square() {
        let f = k();
        let (a, b) = (f.param(0), f.param(1));
        let before = QuaternionSymbol::single(a.clone(), cst(&f, b.mul(&a))).unwrap();
        let after = QuaternionSymbol::single(a.clone(), cst(&f, a.clone())).unwrap();
        let step = RewriteStep { rule: Rule::KillSquare, before, after };
        assert!(matches!(verify_simplification(&[step], &[], &f), Err(Error::StepRejected { index: 0, .. })));
    }

    #[test]
    fn normalization_laws() {
        let f = k();
        let (a, b) = (f.param(0), f.param(1));
        let fx = RationalFunctionOnX::new(x(0).add(&x(1)), x(1)).unwrap();
        let g = cst(&f, b.clone());
        let s = QuaternionSymbol::new(vec![
            Slot::new(a.clone(), fx.clone()).unwrap(),
            Slot::new(a.clone(), g.clone()).unwrap(),
            Slot::new(a.clone(), fx.mul(&g)).unwrap(),
        ]);
        assert!(s.normalize(&f).unwrap().is_empty());
        let sq = QuaternionSymbol::single(a.mul(&a), fx.clone()).unwrap();
        assert!(sq.normalize(&f).unwrap().is_empty());
        let neg = QuaternionSymbol::single(a.clone(), cst(&f, a.neg())).unwrap();
        assert!(neg.normalize(&f).unwrap().is_empty());
        let live = QuaternionSymbol::single(a.clone(), g).unwrap();
        assert_eq!(live.normalize(&f).unwrap().slots().len(), 1);
    }

    #[test]
    fn residues() {
        let f = k();
        let (b, c) = (f.param(1), f.param(2));
        let v = Valuation::at_param(&f, 2, Constant::zero()).unwrap();
        let mut ctx = ClassContext::new(v.residue_field()).unwrap();
        let cb = QuaternionSymbol::single(c.clone(), cst(&f, b.clone())).unwrap();
        let r = tame_residue(&cb, &v, &mut ctx).unwrap();
        let expected = ctx.class_of(&b).unwrap();
        assert_eq!(r, expected);
        assert!(!r.is_trivial());
        let cc = QuaternionSymbol::single(c.clone(), cst(&f, c.clone())).unwrap();
        assert!(tame_residue(&cc, &v, &mut ctx).unwrap().is_trivial());
        let l = f.with_extension("r", RatFunc::param(3, 0)).unwrap();
        let w = Valuation::at_generator(&l).unwrap();
        let mut lctx = ClassContext::new(w.residue_field()).unwrap();
        let bc = QuaternionSymbol::single(b.clone(), cst(&l, c.clone())).unwrap();
        assert!(tame_residue(&bc, &w, &mut lctx).unwrap().is_trivial());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let f = k().with_extension("r", RatFunc::param(3, 0)).unwrap();
        let r = f.generator().unwrap();
        let fx = RationalFunctionOnX::new(x(0).scale(&r).add(&x(1)), x(1)).unwrap();
        let s = QuaternionSymbol::single(f.param(1), fx).unwrap();
        let once = conjugate_symbol(&f, &s).unwrap();
        assert!(!once.same_as(&s));
        assert!(conjugate_symbol(&f, &once).unwrap().same_as(&s));
        assert_eq!(conjugate_symbol(&k(), &s).unwrap_err(), Error::NoExtensionLayer);
    }
}
