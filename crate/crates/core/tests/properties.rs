//! Property suites; the laws themselves live in `suites`.

mod suites;

use suites::*;

fn assert_ok(r: SuiteResult) {
    if let Err(e) = r.outcome {
        panic!("{}: {e}", r.name);
    }
}

#[test]
fn prop_field_axioms() {
    assert_ok(field_axioms());
}

#[test]
fn prop_gcd_exact_division() {
    assert_ok(gcd_exact_division());
}

#[test]
fn prop_refinement() {
    assert_ok(refinement());
}

#[test]
fn prop_pairing_and_homomorphism() {
    assert_ok(pairing_and_homomorphism());
}

#[test]
fn prop_cocycle_condition() {
    assert_ok(cocycle_condition());
}

#[test]
fn prop_h1_routes() {
    let (r, distinct) = h1_routes();
    assert_ok(r);
    assert!(distinct >= 10, "only {distinct} distinct subgroups");
}

#[test]
fn prop_symbol_laws() {
    assert_ok(symbol_laws());
}

#[test]
fn prop_residue_additivity() {
    assert_ok(residue_additivity());
}
