//! Exact arithmetic in the tower `Q(i) ⊂ Q(i)(params) ⊂ Q(i)(params)(√d)`.
//!
//! Every type here is an immutable value; arithmetic never mutates its
//! operands and there is no global state.

mod constant;
mod descriptor;
mod element;
mod gauss;
pub(crate) mod gcd;
mod poly;
mod ratfunc;
mod upoly;
mod valuation;

pub use constant::Constant;
pub use descriptor::{ConstantMode, Extension, FieldDescriptor};
pub use element::FieldElement;
pub use gauss::GaussInt;
pub use gcd::{poly_gcd, squarefree_decomposition, squarefree_part};
pub use poly::{Monomial, MPoly, Names, Poly, Render};
pub(crate) use poly::is_sum;
pub use ratfunc::RatFunc;
pub use upoly::UPoly;
pub use valuation::Valuation;

use core::fmt::Debug;

/// Field operations shared by every coefficient type in the crate.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// A square root inside the same representation, if one exists there.
    fn sqrt(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}
