use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::poly::Names;
use super::{Constant, FieldElement, RatFunc, Scalar};
use crate::error::{Error, Result};

/// How constants of `Q(i)` are treated by square tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantMode {
    /// Constants live in the cyclotomic closure: every nonzero constant is a square.
    Cyclotomic,
    /// Only exact squares of `Q(i)` count.
    Gaussian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    /// Display name of the generator, e.g. `r` for `r^2 = a`.
    pub name: String,
    pub square: Arc<RatFunc>,
}

/// `Q(i)(params)` with at most one quadratic layer on top.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDescriptor {
    pub mode: ConstantMode,
    pub params: Vec<String>,
    pub ext: Option<Extension>,
}

impl FieldDescriptor {
    pub fn new(mode: ConstantMode, params: Vec<String>) -> Self {
        FieldDescriptor { mode, params, ext: None }
    }

    pub fn nvars(&self) -> usize {
        self.params.len()
    }

    pub fn param(&self, i: usize) -> FieldElement {
        FieldElement::param(self.nvars(), i)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    /// The base layer underneath (itself when there is no extension).
    pub fn base(&self) -> FieldDescriptor {
        FieldDescriptor { mode: self.mode, params: self.params.clone(), ext: None }
    }

    /// Adjoins `√d` as `name`. Fails if a layer is already present or `d` is a square.
    pub fn with_extension(&self, name: &str, d: RatFunc) -> Result<FieldDescriptor> {
        if self.ext.is_some() {
            return Err(Error::NestedExtension);
        }
        if d.is_zero() {
            return Err(Error::ZeroElement);
        }
        if is_square_base(&d, self.mode) {
            return Err(Error::SquareGenerator);
        }
        let d = d.with_nvars(self.nvars());
        Ok(FieldDescriptor {
            mode: self.mode,
            params: self.params.clone(),
            ext: Some(Extension { name: String::from(name), square: Arc::new(d) }),
        })
    }

    pub fn radicand(&self) -> Option<&Arc<RatFunc>> {
        self.ext.as_ref().map(|e| &e.square)
    }

    /// `√d` as an element.
    pub fn generator(&self) -> Result<FieldElement> {
        let e = self.ext.as_ref().ok_or(Error::NoExtensionLayer)?;
        Ok(FieldElement::generator(e.square.clone()))
    }

    /// Lifts an element into this field, attaching the radicand when present.
    pub fn lift(&self, x: &FieldElement) -> Result<FieldElement> {
        match (self.radicand(), x.radicand()) {
            (_, None) => Ok(match self.radicand() {
                Some(d) => x.over(d),
                None => x.clone(),
            }),
            (Some(d), Some(e)) if **d == **e => Ok(x.clone()),
            _ if x.is_base() => Ok(FieldElement::base(x.lo().clone())),
            _ => Err(Error::ExtensionMismatch),
        }
    }

    pub fn conjugate(&self, x: &FieldElement) -> Result<FieldElement> {
        self.ext.as_ref().ok_or(Error::NoExtensionLayer)?;
        Ok(self.lift(x)?.conjugate())
    }

    pub fn norm(&self, x: &FieldElement) -> Result<FieldElement> {
        self.ext.as_ref().ok_or(Error::NoExtensionLayer)?;
        Ok(FieldElement::base(self.lift(x)?.norm()))
    }

    /// Square test in this field, honoring the constant mode.
    pub fn is_square(&self, x: &FieldElement) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let x = self.lift(x)?;
        let Some(d) = self.radicand() else {
            return Ok(is_square_base(x.lo(), self.mode));
        };
        if x.is_base() {
            let lo = x.lo();
            return Ok(is_square_base(lo, self.mode) || is_square_base(&lo.mul(d), self.mode));
        }
        let n = x.norm();
        let root = match self.mode {
            ConstantMode::Gaussian => match n.sqrt() {
                Some(r) => r,
                None => return Ok(false),
            },
            ConstantMode::Cyclotomic => {
                let (kappa, core) = monic_parts(&n);
                let Some(core_root) = core.sqrt() else { return Ok(false) };
                let k = kappa.sqrt().ok_or(Error::ConstantExtensionRequired)?;
                core_root.mul(&RatFunc::constant(0, k))
            }
        };
        let half = RatFunc::constant(0, Constant::from_ratio(1, 2));
        for s in [root.clone(), root.neg()] {
            let w = x.lo().add(&s).mul(&half);
            if w.is_zero() {
                continue;
            }
            if is_square_base(&w, self.mode) || is_square_base(&w.mul(d), self.mode) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn names<'a>(&'a self, vars: &'a [String]) -> Names<'a> {
        Names { params: &self.params, ext: self.ext.as_ref().map(|e| e.name.as_str()), vars }
    }
}

/// Splits `x = κ · m` with `κ` constant and `m` having monic numerator and denominator.
pub(crate) fn monic_parts(x: &RatFunc) -> (Constant, RatFunc) {
    let (lc, num) = x.num().monic();
    (lc, RatFunc::new(num, x.den().clone()))
}

/// Square test in the parameter field.
pub(crate) fn is_square_base(x: &RatFunc, mode: ConstantMode) -> bool {
    match mode {
        ConstantMode::Gaussian => x.sqrt().is_some(),
        ConstantMode::Cyclotomic => {
            let (_, m) = monic_parts(x);
            m.sqrt().is_some()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn k(mode: ConstantMode) -> FieldDescriptor {
        FieldDescriptor::new(mode, vec!["a".into(), "b".into(), "c".into()])
    }

    #[test]
    fn rejects_square_and_nested_generators() {
        let f = k(ConstantMode::Gaussian);
        let a = RatFunc::param(3, 0);
        assert_eq!(f.with_extension("r", a.mul(&a)), Err(Error::SquareGenerator));
        let l = f.with_extension("r", a.clone()).unwrap();
        assert_eq!(l.with_extension("s", RatFunc::param(3, 1)), Err(Error::NestedExtension));
        let cyc = k(ConstantMode::Cyclotomic);
        assert!(cyc.with_extension("r", RatFunc::from_i64(2)).is_err());
        assert!(f.with_extension("r", RatFunc::from_i64(2)).is_ok());
        assert!(f.with_extension("r", RatFunc::from_i64(-1)).is_err());
    }

    #[test]
    fn squares_in_extension() {
        let f = k(ConstantMode::Cyclotomic);
        let l = f.with_extension("r", RatFunc::param(3, 0)).unwrap();
        let (a, b, c) = (f.param(0), f.param(1), f.param(2));
        let abc = a.mul(&b).mul(&c);
        assert!(!l.is_square(&abc).unwrap());
        assert!(!l.is_square(&b.mul(&c)).unwrap());
        assert!(l.is_square(&a).unwrap());
        assert!(!f.is_square(&a).unwrap());
        let x = b.add(&l.generator().unwrap());
        assert!(l.is_square(&x.mul(&x).mul(&c.mul(&c))).unwrap());
        assert!(!l.is_square(&x).unwrap());
        assert_eq!(l.conjugate(&b).unwrap(), b);
        assert_eq!(f.conjugate(&b), Err(Error::NoExtensionLayer));
    }
}
