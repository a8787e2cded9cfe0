#![allow(dead_code)]

use dp4_core::field::{ConstantMode, FieldDescriptor, FieldElement, RatFunc, Scalar};
use dp4_core::pencil::QuadricMatrix;

pub fn names() -> Vec<String> {
    ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
}

pub fn k() -> FieldDescriptor {
    FieldDescriptor::new(ConstantMode::Cyclotomic, names())
}

pub fn l() -> FieldDescriptor {
    k().with_extension("r", RatFunc::param(3, 0)).unwrap()
}

pub fn p(i: usize) -> FieldElement {
    FieldElement::param(3, i)
}

pub fn n(x: i64) -> FieldElement {
    FieldElement::from_i64(x)
}

/// The two diagonal quadrics of the counterexample surface.
pub fn example_pencil() -> (QuadricMatrix, QuadricMatrix) {
    let (a, b, c) = (p(0), p(1), p(2));
    let q = QuadricMatrix::diagonal(&[a.clone(), b.clone(), n(1), n(0), c.clone()]).unwrap();
    let q2 = QuadricMatrix::diagonal(&[b.mul(&c), n(1), n(1), a, n(0)]).unwrap();
    (q, q2)
}

use dp4_core::pencil::{char_form, default_hyperplane, degeneracy_locus, discriminant_eps, quadric_at, ClosedPoint};

/// Locus and discriminants of the example pencil over `field`.
pub fn example_locus(field: &FieldDescriptor) -> (Vec<ClosedPoint>, Vec<FieldElement>) {
    let (q, q2) = example_pencil();
    let f = char_form(&q, &q2).unwrap();
    let locus = degeneracy_locus(&f, field).unwrap();
    let eps = locus
        .iter()
        .map(|t| {
            let qt = quadric_at(t, &q, &q2).unwrap();
            discriminant_eps(&qt, &default_hyperplane(&qt).unwrap()).unwrap()
        })
        .collect();
    (locus, eps)
}
