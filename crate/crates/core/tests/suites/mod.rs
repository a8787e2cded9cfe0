//! Randomized law checks for the arithmetic, Picard and symbol layers.
//!
//! Each suite is a plain function so that the acceptance target can run the
//! same checks and report on them.

#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use proptest::test_runner::{TestCaseError, TestRunner};

use proptest::prelude::*;

use dp4_core::cohomology::{
    connecting_cocycle, h1_cyclic, h1_full_module, h1_two_torsion_module, GroupModule, DEFAULT_GROUP_BOUND,
};
use dp4_core::field::{
    poly_gcd, Constant, ConstantMode, FieldDescriptor, FieldElement, Monomial, Poly, RatFunc, Scalar, Valuation,
};
use dp4_core::picard::{action_matrix, compose, GaloisImage, GammaElement, PAIRING, RANK};
use dp4_core::squares::{refine, Atom, ClassContext};
use dp4_core::symbols::{tame_residue, QuaternionSymbol, RationalFunctionOnX, Slot};

pub const CASES: u32 = 128;

fn config() -> ProptestConfig {
    // Runs are reproducible from the printed seed; no regression files.
    ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() }
}

// ---- generators ----

/// A polynomial in two variables with small coefficients and degree at most two.
fn poly2() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..3, 0u32..3, -3i64..4), 1..4).prop_map(|terms| {
        Poly::from_terms(
            2,
            terms
                .into_iter()
                .filter(|(i, j, _)| i + j <= 2)
                .map(|(i, j, c)| (Monomial(vec![i, j]), Constant::from_ratio(c, 1))),
        )
    })
}

fn nonzero_poly2() -> impl Strategy<Value = Poly> {
    poly2().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc2() -> impl Strategy<Value = RatFunc> {
    (poly2(), nonzero_poly2()).prop_map(|(n, d)| RatFunc::new(n, d))
}

fn ext_field() -> FieldDescriptor {
    FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into()])
        .with_extension("r", RatFunc::param(2, 0))
        .unwrap()
}

fn element() -> impl Strategy<Value = FieldElement> {
    (ratfunc2(), ratfunc2()).prop_map(|(lo, hi)| {
        let d = ext_field().radicand().unwrap().clone();
        FieldElement::new(lo, hi, d)
    })
}

/// `±a^i b^j c^k (b-1)^l` in `Qcyc(a, b, c)`.
fn constant3() -> impl Strategy<Value = FieldElement> {
    (any::<bool>(), 0u32..3, 0u32..3, 0u32..3, 0u32..2).prop_map(|(neg, i, j, k, l)| {
        let p = |v| FieldElement::param(3, v);
        let b1 = p(1).sub(&FieldElement::one());
        let x = p(0).pow(i).mul(&p(1).pow(j)).mul(&p(2).pow(k)).mul(&b1.pow(l));
        if neg {
            x.neg()
        } else {
            x
        }
    })
}

fn k3() -> FieldDescriptor {
    FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into(), "c".into()])
}

fn slot(u: &FieldElement, f: &FieldElement) -> Slot {
    Slot::new(u.clone(), RationalFunctionOnX::constant(5, f.clone())).unwrap()
}

fn sym(slots: Vec<Slot>) -> QuaternionSymbol {
    QuaternionSymbol::new(slots)
}

fn even_exchange(bits: u8) -> u8 {
    let bits = bits & 0b11111;
    if bits.count_ones() % 2 == 1 {
        bits ^ 0b10000
    } else {
        bits
    }
}

fn permutation(keys: &[u32]) -> [u8; 5] {
    let mut idx: Vec<u8> = (0..5).collect();
    idx.sort_by_key(|&i| (keys[i as usize], i));
    let mut p = [0u8; 5];
    p.copy_from_slice(&idx);
    p
}

fn gamma() -> impl Strategy<Value = GammaElement> {
    (any::<u8>(), prop::collection::vec(any::<u32>(), 5))
        .prop_map(|(b, keys)| GammaElement { exchanges: even_exchange(b), perm: permutation(&keys) })
}

/// Permutations of order at most four, so that generated subgroups stay within
/// `16 * 4 = 64` elements.
const SMALL_PERMS: [[u8; 5]; 5] =
    [[0, 1, 2, 3, 4], [1, 0, 2, 3, 4], [1, 0, 3, 2, 4], [1, 2, 0, 3, 4], [1, 2, 3, 0, 4]];

fn pow_perm(p: [u8; 5], e: usize) -> [u8; 5] {
    let mut out = [0, 1, 2, 3, 4];
    for _ in 0..e {
        out = core::array::from_fn(|i| p[out[i] as usize]);
    }
    out
}

/// A random subgroup of the even-exchange group of order at most 64.
fn subgroup() -> impl Strategy<Value = GaloisImage> {
    (0usize..SMALL_PERMS.len(), prop::collection::vec((any::<u8>(), 0usize..4), 1..4)).prop_map(|(pi, gens)| {
        let base = SMALL_PERMS[pi];
        let gens: Vec<GammaElement> = gens
            .into_iter()
            .map(|(b, e)| GammaElement { exchanges: even_exchange(b), perm: pow_perm(base, e) })
            .collect();
        GaloisImage::generate(&gens).unwrap()
    })
}

fn mat(m: &[[i64; RANK]; RANK]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn order_of(g: &GammaElement) -> usize {
    let mut x = *g;
    let mut n = 1;
    while !x.is_identity() {
        x = x.then_after(g);
        n += 1;
    }
    n
}

pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u32,
    pub elapsed: Duration,
    pub outcome: Result<(), String>,
}

fn run<S: Strategy>(
    name: &'static str,
    strat: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> SuiteResult {
    let started = Instant::now();
    let mut runner = TestRunner::new(config());
    let outcome = runner.run(&strat, test).map_err(|e| e.to_string());
    SuiteResult { name, cases: CASES, elapsed: started.elapsed(), outcome }
}

// ---- field axioms, gcd, refinement ----

pub fn field_axioms() -> SuiteResult {
    run("field axioms", (element(), element(), element()), |(x, y, z)| {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert!(x.sub(&x).is_zero());
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
            // The norm is multiplicative and lands in the base layer.
            prop_assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
        }
        Ok(())
    })
}

pub fn gcd_exact_division() -> SuiteResult {
    run("gcd exact division", (nonzero_poly2(), nonzero_poly2(), nonzero_poly2()), |(g, x, y)| {
        let p = g.mul(&x);
        let q = g.mul(&y);
        let d = poly_gcd(&p, &q);
        prop_assert!(p.exact_div(&d).is_some());
        prop_assert!(q.exact_div(&d).is_some());
        prop_assert!(d.exact_div(&g).is_some());
        // What is left after dividing is coprime.
        let (pp, qq) = (p.exact_div(&d).unwrap(), q.exact_div(&d).unwrap());
        prop_assert!(poly_gcd(&pp, &qq).constant_value().is_some());
        Ok(())
    })
}

pub fn refinement() -> SuiteResult {
    let xs = prop::collection::vec(ratfunc2().prop_filter("nonzero", |x| !x.is_zero()), 1..4);
    run("refinement coprimality and reconstruction", xs, |xs| {
        let (mut basis, classes) = refine(ConstantMode::Cyclotomic, 2, &xs).unwrap();
        prop_assert_eq!(classes.len(), xs.len());
        let polys: Vec<Poly> = basis
            .live()
            .into_iter()
            .filter_map(|i| match basis.atom(i) {
                Atom::Poly(p) => Some(p.clone()),
                _ => None,
            })
            .collect();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                prop_assert!(poly_gcd(&polys[i], &polys[j]).constant_value().is_some());
            }
        }
        for x in &xs {
            let f = basis.factor(x).unwrap();
            prop_assert_eq!(basis.reconstruct(&f), x.clone());
        }
        Ok(())
    })
}

// ---- Picard lattice ----

pub fn pairing_and_homomorphism() -> SuiteResult {
    run("pairing preservation and action homomorphism", (gamma(), gamma()), |(g, h)| {
        let m = action_matrix(&g).unwrap();
        for i in 0..RANK {
            for j in 0..RANK {
                let mut s = 0;
                for k in 0..RANK {
                    for l in 0..RANK {
                        s += m[k][i] * PAIRING[k][l] * m[l][j];
                    }
                }
                prop_assert_eq!(s, PAIRING[i][j]);
            }
        }
        let gh = g.then_after(&h);
        prop_assert_eq!(action_matrix(&gh).unwrap(), compose(&m, &action_matrix(&h).unwrap()));
        prop_assert!(g.then_after(&g.inverse()).is_identity());
        Ok(())
    })
}

pub fn cocycle_condition() -> SuiteResult {
    run("cocycle condition", (subgroup(), prop::collection::vec(-3i64..4, RANK)), |(g, m)| {
        let module = GroupModule::from_image(&g).unwrap();
        prop_assert!(module.coboundary(&m).is_cocycle(&module));
        for d in module.fixed_mod2() {
            let c = connecting_cocycle(&module, &d).unwrap();
            prop_assert!(c.is_cocycle(&module));
        }
        Ok(())
    })
}

/// The three H¹ routes, plus the number of distinct subgroups seen.
pub fn h1_routes() -> (SuiteResult, usize) {
    let seen = RefCell::new(BTreeSet::new());
    let r = run("H1 routes agree on random subgroups", subgroup(), |g| {
        seen.borrow_mut().insert(g.elements.clone());
        prop_assert!(g.order() <= DEFAULT_GROUP_BOUND);
        let module = GroupModule::from_image(&g).unwrap();
        let two = h1_two_torsion_module(&module).unwrap();
        let full = h1_full_module(&module, DEFAULT_GROUP_BOUND).unwrap();
        prop_assert_eq!(&two.invariant_factors, &full.invariant_factors);
        prop_assert_eq!(full.free_rank, 0);
        for c in &full.generators {
            prop_assert!(c.is_cocycle(&module));
        }
        if let Some(x) = g.elements.iter().find(|x| order_of(x) == g.order()) {
            let cyc = h1_cyclic(&mat(&action_matrix(x).unwrap()), g.order()).unwrap();
            prop_assert_eq!(&cyc.invariant_factors, &full.invariant_factors);
        }
        // Each generator spans a cyclic subgroup where all three routes apply.
        for x in &g.generators {
            let n = order_of(x);
            let sigma = mat(&action_matrix(x).unwrap());
            let cm = GroupModule::cyclic(&sigma, n).unwrap();
            let a = h1_cyclic(&sigma, n).unwrap();
            let b = h1_full_module(&cm, DEFAULT_GROUP_BOUND).unwrap();
            let c = h1_two_torsion_module(&cm).unwrap();
            prop_assert_eq!(&a.invariant_factors, &b.invariant_factors);
            prop_assert_eq!(&b.invariant_factors, &c.invariant_factors);
        }
        Ok(())
    });
    let n = seen.borrow().len();
    (r, n)
}

// ---- symbols and residues ----

pub fn symbol_laws() -> SuiteResult {
    run("symbol laws", (constant3(), constant3(), constant3(), constant3()), |(u, v, f, g)| {
        let k = k3();
        let zero = |s: QuaternionSymbol| s.normalize(&k).unwrap().is_empty();
        // (u,f) + (u,g) + (u,fg) = 0
        prop_assert!(zero(sym(vec![slot(&u, &f), slot(&u, &g), slot(&u, &f.mul(&g))])));
        // (u,f) + (v,f) + (uv,f) = 0
        prop_assert!(zero(sym(vec![slot(&u, &f), slot(&v, &f), slot(&u.mul(&v), &f)])));
        // (u,f²) = 0, (u,-u) = 0, 2(u,f) = 0
        prop_assert!(zero(sym(vec![slot(&u, &f.mul(&f))])));
        prop_assert!(zero(sym(vec![slot(&u, &u.neg())])));
        prop_assert!(zero(sym(vec![slot(&u, &f), slot(&u, &f)])));
        Ok(())
    })
}

pub fn residue_additivity() -> SuiteResult {
    run("residue additivity", (constant3(), constant3(), constant3(), constant3()), |(u, f, v, g)| {
        let k = k3();
        let val = Valuation::at_param(&k, 2, Constant::zero()).unwrap();
        let mut ctx = ClassContext::new(val.residue_field()).unwrap();
        let a = sym(vec![slot(&u, &f)]);
        let b = sym(vec![slot(&v, &g)]);
        let ra = tame_residue(&a, &val, &mut ctx).unwrap();
        let rb = tame_residue(&b, &val, &mut ctx).unwrap();
        let rab = tame_residue(&a.add(&b), &val, &mut ctx).unwrap();
        prop_assert_eq!(ctx.reduce(&rab), ctx.reduce(&ra.mul(&rb)));
        Ok(())
    })
}

/// Every suite, in a fixed order.
pub fn all_suites() -> (Vec<SuiteResult>, usize) {
    let mut out = vec![
        field_axioms(),
        gcd_exact_division(),
        refinement(),
        pairing_and_homomorphism(),
        cocycle_condition(),
    ];
    let (h1, distinct) = h1_routes();
    out.push(h1);
    out.push(symbol_laws());
    out.push(residue_additivity());
    (out, distinct)
}

