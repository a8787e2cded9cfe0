use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use super::poly::{is_sum, Names, Render};
use super::{Constant, RatFunc, Scalar};

/// `lo + hi·√d` with `lo, hi` in the parameter field.
///
/// Base-layer elements carry no radicand. Mixing an element with radicand
/// `d` and a base element yields an element over `d`; mixing two different
/// radicands is a logic error and panics.
#[derive(Clone)]
pub struct FieldElement {
    lo: RatFunc,
    hi: RatFunc,
    d: Option<Arc<RatFunc>>,
}

impl FieldElement {
    pub fn base(x: RatFunc) -> Self {
        FieldElement { lo: x, hi: RatFunc::zero(), d: None }
    }

    pub fn new(lo: RatFunc, hi: RatFunc, d: Arc<RatFunc>) -> Self {
        FieldElement { lo, hi, d: Some(d) }
    }

    pub fn constant(c: Constant) -> Self {
        Self::base(RatFunc::constant(0, c))
    }

    pub fn param(nvars: usize, i: usize) -> Self {
        Self::base(RatFunc::param(nvars, i))
    }

    /// The generator `√d` itself.
    pub fn generator(d: Arc<RatFunc>) -> Self {
        FieldElement { lo: RatFunc::zero(), hi: RatFunc::one(), d: Some(d) }
    }

    pub fn lo(&self) -> &RatFunc {
        &self.lo
    }

    pub fn hi(&self) -> &RatFunc {
        &self.hi
    }

    pub fn radicand(&self) -> Option<&Arc<RatFunc>> {
        self.d.as_ref()
    }

    /// True when the element lies in the parameter field.
    pub fn is_base(&self) -> bool {
        self.hi.is_zero()
    }

    /// The element as a base-field value, if it is one.
    pub fn as_base(&self) -> Option<&RatFunc> {
        self.is_base().then_some(&self.lo)
    }

    pub fn constant_value(&self) -> Option<Constant> {
        self.as_base().and_then(|r| r.constant_value())
    }

    /// Attaches the radicand `d` to a base element (no-op if already there).
    pub fn over(&self, d: &Arc<RatFunc>) -> Self {
        FieldElement { lo: self.lo.clone(), hi: self.hi.clone(), d: Some(d.clone()) }
    }

    /// `lo − hi·√d`. Base elements are fixed.
    pub fn conjugate(&self) -> Self {
        FieldElement { lo: self.lo.clone(), hi: self.hi.neg(), d: self.d.clone() }
    }

    /// `x · conj(x)`, which lies in the parameter field.
    pub fn norm(&self) -> RatFunc {
        let l2 = self.lo.mul(&self.lo);
        match &self.d {
            Some(d) if !self.hi.is_zero() => l2.sub(&d.mul(&self.hi.mul(&self.hi))),
            _ => l2,
        }
    }

    pub fn trace(&self) -> RatFunc {
        self.lo.add(&self.lo)
    }

    fn join(&self, o: &Self) -> Option<Arc<RatFunc>> {
        match (&self.d, &o.d) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d.clone()),
            (Some(d1), Some(d2)) => {
                assert!(Arc::ptr_eq(d1, d2) || **d1 == **d2, "elements from different extensions");
                Some(d1.clone())
            }
        }
    }

    /// Shared radicand check for callers that want an error instead of a panic.
    pub fn compatible(&self, o: &Self) -> bool {
        match (&self.d, &o.d) {
            (Some(d1), Some(d2)) => **d1 == **d2,
            _ => true,
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        if self.hi.is_zero() && o.hi.is_zero() {
            return self.lo == o.lo;
        }
        self.compatible(o) && self.lo == o.lo && self.hi == o.hi
    }
}

impl Scalar for FieldElement {
    fn zero() -> Self {
        Self::base(RatFunc::zero())
    }

    fn one() -> Self {
        Self::base(RatFunc::one())
    }

    fn from_i64(n: i64) -> Self {
        Self::base(RatFunc::from_i64(n))
    }

    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    fn is_one(&self) -> bool {
        self.hi.is_zero() && self.lo.is_one()
    }

    fn add(&self, o: &Self) -> Self {
        FieldElement { lo: self.lo.add(&o.lo), hi: self.hi.add(&o.hi), d: self.join(o) }
    }

    fn sub(&self, o: &Self) -> Self {
        FieldElement { lo: self.lo.sub(&o.lo), hi: self.hi.sub(&o.hi), d: self.join(o) }
    }

    fn mul(&self, o: &Self) -> Self {
        let d = self.join(o);
        if self.hi.is_zero() {
            return FieldElement { lo: self.lo.mul(&o.lo), hi: self.lo.mul(&o.hi), d };
        }
        if o.hi.is_zero() {
            return FieldElement { lo: self.lo.mul(&o.lo), hi: self.hi.mul(&o.lo), d };
        }
        let dd = d.as_ref().expect("radicand present when hi != 0");
        let lo = self.lo.mul(&o.lo).add(&dd.mul(&self.hi.mul(&o.hi)));
        let hi = self.lo.mul(&o.hi).add(&self.hi.mul(&o.lo));
        FieldElement { lo, hi, d }
    }

    fn neg(&self) -> Self {
        FieldElement { lo: self.lo.neg(), hi: self.hi.neg(), d: self.d.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.hi.is_zero() {
            return Some(FieldElement { lo: self.lo.inv()?, hi: RatFunc::zero(), d: self.d.clone() });
        }
        let n = self.norm().inv()?;
        Some(FieldElement { lo: self.lo.mul(&n), hi: self.hi.neg().mul(&n), d: self.d.clone() })
    }

    /// Square root with coordinates in the parameter field, found through the
    /// norm: if `x = (p + q√d)²` then `N(x)` is a square and `p² = (lo ± √N)/2`.
    fn sqrt(&self) -> Option<Self> {
        let d = self.d.clone();
        if self.hi.is_zero() {
            if let Some(r) = self.lo.sqrt() {
                return Some(FieldElement { lo: r, hi: RatFunc::zero(), d });
            }
            let dd = d.as_ref()?;
            let q = self.lo.div(dd)?.sqrt()?;
            return Some(FieldElement { lo: RatFunc::zero(), hi: q, d });
        }
        let dd = d.clone()?;
        let n = self.norm().sqrt()?;
        let half = RatFunc::constant(0, Constant::from_ratio(1, 2));
        for s in [n.clone(), n.neg()] {
            let w = self.lo.add(&s).mul(&half);
            if w.is_zero() {
                continue;
            }
            let two = RatFunc::from_i64(2);
            let cand = if let Some(p) = w.sqrt() {
                let q = self.hi.div(&two.mul(&p))?;
                Some((p, q))
            } else if let Some(q) = w.div(&dd).and_then(|x| x.sqrt()) {
                let p = self.hi.div(&two.mul(&q))?;
                Some((p, q))
            } else {
                None
            };
            if let Some((p, q)) = cand {
                let r = FieldElement { lo: p, hi: q, d: d.clone() };
                if r.mul(&r) == *self {
                    return Some(r);
                }
            }
        }
        None
    }
}

impl Render for FieldElement {
    fn render(&self, names: &Names<'_>) -> String {
        let lo = self.lo.render(names);
        if self.hi.is_zero() {
            return lo;
        }
        let g = names.ext.unwrap_or("sqrt(d)");
        let hi_part = if self.hi.is_one() {
            String::from(g)
        } else if self.hi.neg().is_one() {
            format!("-{g}")
        } else {
            let h = self.hi.render(names);
            if is_sum(&h) || h.contains('/') {
                format!("({h})*{g}")
            } else {
                format!("{h}*{g}")
            }
        };
        if self.lo.is_zero() {
            return hi_part;
        }
        match hi_part.strip_prefix('-') {
            Some(rest) => format!("{lo} - {rest}"),
            None => format!("{lo} + {hi_part}"),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_zero() {
            return write!(f, "{:?}", self.lo);
        }
        write!(f, "{:?} + ({:?})*sqrt({:?})", self.lo, self.hi, self.d.as_deref().map(|d| d as &RatFunc))
    }
}
