mod common;

use common::*;
use dp4_core::field::{FieldElement, RatFunc, Scalar};
use dp4_core::pencil::*;
use dp4_core::squares::ClassContext;

fn locus() -> Vec<ClosedPoint> {
    let (q, q2) = example_pencil();
    let f = char_form(&q, &q2).unwrap();
    degeneracy_locus(&f, &k()).unwrap()
}

fn eps_values() -> Vec<FieldElement> {
    let (q, q2) = example_pencil();
    locus()
        .iter()
        .map(|t| {
            let qt = quadric_at(t, &q, &q2).unwrap();
            discriminant_eps(&qt, &default_hyperplane(&qt).unwrap()).unwrap()
        })
        .collect()
}

#[test]
fn char_form_matches_up_to_scalar() {
    let (q, q2) = example_pencil();
    let f = char_form(&q, &q2).unwrap();
    let r = |x: &FieldElement| x.as_base().unwrap().clone();
    let (a, b, c) = (r(&p(0)), r(&p(1)), r(&p(2)));
    let one = RatFunc::one();
    let zero = RatFunc::zero();
    let expected = BinaryForm::from_linear_factors(&[
        (zero.clone(), one.clone()),
        (one.clone(), zero.clone()),
        (one.clone(), one.clone()),
        (b.clone(), one.clone()),
        (a.clone(), b.mul(&c)),
    ])
    .scale(&RatFunc::from_i64(32));
    let ratio = f.ratio_to(&expected).unwrap();
    assert_eq!(ratio, a.mul(&c).mul(&RatFunc::constant(0, dp4_core::field::Constant::from_ratio(1, 32))));
    assert!(is_smooth_pencil(&f).unwrap());
}

#[test]
fn locus_points() {
    let pts = locus();
    let vars: Vec<String> = vec![];
    let rendered: Vec<String> = pts.iter().map(|t| t.render_coords(&vars)).collect();
    assert_eq!(rendered, ["[1:0]", "[0:1]", "[1:-1]", "[1:-b]", "[b*c:-a]"]);
}

#[test]
fn eps_table() {
    let (a, b, c) = (p(0), p(1), p(2));
    let one = n(1);
    let expected = [
        a.mul(&b).mul(&c),
        a.mul(&b).mul(&c),
        a.mul(&c).mul(&b.sub(&one)).mul(&a.sub(&b.mul(&c))),
        a.mul(&b).mul(&c).mul(&one.sub(&b)).mul(&a.sub(&b.mul(&b).mul(&c))),
        b.mul(&b.mul(&b).mul(&c).sub(&a)).mul(&b.mul(&c).sub(&a)),
    ];
    let mut ctx = ClassContext::new(&k()).unwrap();
    for (e, x) in eps_values().iter().zip(&expected) {
        let cls = ctx.class_of(&e.mul(x)).unwrap();
        assert!(ctx.is_trivial(&cls), "{e:?} vs {x:?}");
    }
}

#[test]
fn quadric_at_t4_and_vertices() {
    let (q, q2) = example_pencil();
    let pts = locus();
    let q4 = quadric_at(&pts[4], &q, &q2).unwrap();
    let f = k();
    let vars: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
    assert_eq!(q4.render(&f.names(&vars)), "(b^2*c - a)*x1^2 + (b*c - a)*x2^2 - a^2*x3^2 + b*c^2*x4^2");
    let q1 = quadric_at(&pts[1], &q, &q2).unwrap();
    assert_eq!(vertex_of(&q1).unwrap(), vec![n(0), n(0), n(0), n(0), n(1)]);
    let q0 = quadric_at(&pts[0], &q, &q2).unwrap();
    assert_eq!(vertex_of(&q0).unwrap(), vec![n(0), n(0), n(0), n(1), n(0)]);
}

#[test]
fn star_over_both_fields() {
    let pts = locus();
    let eps = eps_values();
    assert_eq!(star_subschemes(&pts, &eps, &k()).unwrap(), vec![vec![0, 1]]);
    assert_eq!(star_subschemes(&pts, &eps, &l()).unwrap(), vec![vec![0, 1]]);
}

#[test]
fn tangent_forms_and_split() {
    let (q, q2) = example_pencil();
    let pts = locus();
    let lf = l();
    let r = lf.generator().unwrap();
    let i = FieldElement::constant(dp4_core::field::Constant::i());
    let z = n(0);
    let lift = |x: &FieldElement| lf.lift(x).unwrap();
    let q0 = quadric_at(&pts[0], &q, &q2).unwrap();
    let p0 = [lift(&i), z.clone(), r.clone(), z.clone(), z.clone()];
    let t0 = tangent_form(&q0, &p0).unwrap();
    let vars: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
    assert_eq!(t0.render(&lf.names(&vars)), "2*i*a*x0 + 2*r*x2");
    let q1 = quadric_at(&pts[1], &q, &q2).unwrap();
    let p1 = [z.clone(), lift(&i), lift(&n(1)), z.clone(), z.clone()];
    let t1 = tangent_form(&q1, &p1).unwrap();
    assert_eq!(t1.render(&lf.names(&vars)), "2*i*x1 + 2*x2");

    let s = split_tangent_section(&q0, &p0).unwrap();
    assert!(s.verify());
    assert_eq!(s.scale, p(1));
    assert_eq!(s.radicand, p(2).neg().div(&p(1)).unwrap());
    assert!(s.root.is_none());
    let _ = s.restricted.render(&lf.names(&vars));
}
