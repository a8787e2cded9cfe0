use alloc::format;

use super::{Constant, FieldDescriptor, FieldElement, Poly, RatFunc, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    /// Uniformizer `x_var - root` in the parameter field.
    Linear { var: usize, root: Constant },
    /// Uniformizer `√x_var` in an extension whose radicand is the parameter `x_var`.
    Radical { var: usize },
}

/// A discrete valuation of the analysis field with uniformizer either a
/// linear parameter atom or the extension generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Valuation {
    kind: Kind,
    field: FieldDescriptor,
    residue: FieldDescriptor,
}

impl Valuation {
    /// The valuation along `param = root`.
    pub fn at_param(field: &FieldDescriptor, var: usize, root: Constant) -> Result<Valuation> {
        if var >= field.nvars() {
            return Err(Error::UnsupportedValuation(format!("no parameter with index {var}")));
        }
        if let Some(d) = field.radicand() {
            // The residue field would need the reduction of √d; keep to the
            // case where d does not involve the variable at all.
            if d.num().contains_var(var) || d.den().contains_var(var) {
                return Err(Error::UnsupportedValuation(format!(
                    "extension radicand involves {}",
                    field.params[var]
                )));
            }
        }
        // √d stays a unit, so the residue field keeps the extension.
        Ok(Valuation { kind: Kind::Linear { var, root }, field: field.clone(), residue: field.clone() })
    }

    /// The valuation along `√d = 0`, where `d` must be a single parameter.
    pub fn at_generator(field: &FieldDescriptor) -> Result<Valuation> {
        let d = field.radicand().ok_or(Error::NoExtensionLayer)?;
        let var = (0..field.nvars())
            .find(|&v| **d == RatFunc::param(field.nvars(), v))
            .ok_or_else(|| Error::UnsupportedValuation("radicand is not a parameter".into()))?;
        Ok(Valuation { kind: Kind::Radical { var }, field: field.clone(), residue: field.base() })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn residue_field(&self) -> &FieldDescriptor {
        &self.residue
    }

    pub fn uniformizer(&self) -> FieldElement {
        let n = self.field.nvars();
        match &self.kind {
            Kind::Linear { var, root } => {
                FieldElement::param(n, *var).sub(&FieldElement::constant(root.clone()))
            }
            Kind::Radical { .. } => self.field.generator().expect("extension present"),
        }
    }

    /// Human-readable uniformizer such as `c` or `b - 1`.
    pub fn label(&self) -> alloc::string::String {
        match &self.kind {
            Kind::Linear { var, root } if root.is_zero() => self.field.params[*var].clone(),
            Kind::Linear { var, root } => {
                let name = &self.field.params[*var];
                let neg = root.neg();
                let s = format!("{neg}");
                match s.strip_prefix('-') {
                    Some(r) => format!("{name} - {r}"),
                    None => format!("{name} + {s}"),
                }
            }
            Kind::Radical { .. } => self.field.ext.as_ref().expect("extension present").name.clone(),
        }
    }

    fn linear_poly(&self, var: usize, root: &Constant) -> Poly {
        let n = self.field.nvars();
        Poly::var(n, var).sub(&Poly::constant(n, root.clone()))
    }

    fn poly_order(&self, p: &Poly) -> i64 {
        let u = match &self.kind {
            Kind::Linear { var, root } => self.linear_poly(*var, root),
            Kind::Radical { var } => self.linear_poly(*var, &Constant::zero()),
        };
        let mut q = p.clone();
        let mut k = 0;
        while let Some(next) = q.exact_div(&u) {
            q = next;
            k += 1;
        }
        k
    }

    fn base_order(&self, x: &RatFunc) -> i64 {
        let x = x.with_nvars(self.field.nvars().max(x.nvars()));
        self.poly_order(x.num()) - self.poly_order(x.den())
    }

    /// Order of vanishing of `x` along the valuation.
    pub fn order(&self, x: &FieldElement) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        match &self.kind {
            Kind::Linear { .. } => {
                let lo = (!x.lo().is_zero()).then(|| self.base_order(x.lo()));
                let hi = (!x.hi().is_zero()).then(|| self.base_order(x.hi()));
                Ok(lo.into_iter().chain(hi).min().expect("nonzero element"))
            }
            Kind::Radical { .. } => {
                let lo = (!x.lo().is_zero()).then(|| 2 * self.base_order(x.lo()));
                let hi = (!x.hi().is_zero()).then(|| 2 * self.base_order(x.hi()) + 1);
                Ok(match (lo, hi) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!(),
                })
            }
        }
    }

    /// Image of a unit (order 0) in the residue field.
    pub fn reduce(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.order(x)? != 0 {
            return Err(Error::IndeterminateReduction);
        }
        let (var, root) = match &self.kind {
            Kind::Linear { var, root } => (*var, root.clone()),
            Kind::Radical { var } => (*var, Constant::zero()),
        };
        let n = self.field.nvars();
        let at = |y: &RatFunc| -> Result<RatFunc> {
            if y.is_zero() {
                return Ok(y.clone());
            }
            y.with_nvars(n.max(y.nvars())).substitute(var, &root).ok_or(Error::IndeterminateReduction)
        };
        let lo = at(x.lo())?;
        let r = match (&self.kind, self.residue.radicand()) {
            (Kind::Linear { .. }, Some(d)) => FieldElement::new(lo, at(x.hi())?, d.clone()),
            _ => FieldElement::base(lo),
        };
        if r.is_zero() {
            return Err(Error::IndeterminateReduction);
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ConstantMode;
    use alloc::vec;

    fn k() -> FieldDescriptor {
        FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into(), "c".into()])
    }

    #[test]
    fn generator_valuation() {
        let l = k().with_extension("r", RatFunc::param(3, 0)).unwrap();
        let v = Valuation::at_generator(&l).unwrap();
        assert_eq!(v.order(&l.param(0)).unwrap(), 2);
        assert_eq!(v.order(&l.param(1)).unwrap(), 0);
        assert_eq!(v.order(&l.param(2)).unwrap(), 0);
        assert_eq!(v.order(&l.generator().unwrap()).unwrap(), 1);
    }

    #[test]
    fn parameter_valuation() {
        let f = k();
        let v = Valuation::at_param(&f, 2, Constant::zero()).unwrap();
        let x = f.param(1).pow(3).mul(&f.param(2).pow(2));
        assert_eq!(v.order(&x).unwrap(), 2);
        let w = Valuation::at_param(&f, 1, Constant::one()).unwrap();
        assert_eq!(w.label(), "b - 1");
        let y = f.param(1).sub(&FieldElement::one()).inv().unwrap();
        assert_eq!(w.order(&y).unwrap(), -1);
    }
}
