//! One PASS/FAIL line per acceptance criterion.
//!
//! Criterion 1 asks for literal equality with a quintic that is not the
//! determinant of the given Gram matrices; it reports FAIL with the exact
//! ratio, and the test asserts that ratio so any other drift still breaks.

#[path = "../../core/tests/suites/mod.rs"]
mod suites;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use dp4::pipeline::{analyze, FieldChoice, Options};
use dp4::spec::read_pencil;
use dp4_core::cohomology::{h1_full, h1_two_torsion, restriction_map, subscheme_cocycle};
use dp4_core::field::{Constant, ConstantMode, FieldDescriptor, FieldElement, RatFunc, Scalar, Valuation};
use dp4_core::pencil::{
    char_form, default_hyperplane, degeneracy_locus, discriminant_eps, is_smooth_pencil, quadric_at,
    star_subschemes, tangent_form, BinaryForm, ClosedPoint, LinearForm, QuadricMatrix,
};
use dp4_core::picard::galois_image;
use dp4_core::squares::ClassContext;
use dp4_core::symbols::{build_algebra, tame_residue, FormPoly, QuaternionSymbol, RationalFunctionOnX};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn k() -> FieldDescriptor {
    FieldDescriptor::new(ConstantMode::Cyclotomic, vec!["a".into(), "b".into(), "c".into()])
}

fn l() -> FieldDescriptor {
    k().with_extension("r", RatFunc::param(3, 0)).unwrap()
}

fn p(i: usize) -> FieldElement {
    FieldElement::param(3, i)
}

fn n(x: i64) -> FieldElement {
    FieldElement::from_i64(x)
}

fn i_unit() -> FieldElement {
    FieldElement::constant(Constant::i())
}

fn pencil() -> (QuadricMatrix, QuadricMatrix) {
    let (a, b, c) = (p(0), p(1), p(2));
    let q = QuadricMatrix::diagonal(&[a.clone(), b.clone(), n(1), n(0), c.clone()]).unwrap();
    let q2 = QuadricMatrix::diagonal(&[b.mul(&c), n(1), n(1), a, n(0)]).unwrap();
    (q, q2)
}

fn locus(field: &FieldDescriptor) -> (Vec<ClosedPoint>, Vec<FieldElement>) {
    let (q, q2) = pencil();
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

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn base(x: &FieldElement) -> RatFunc {
    x.as_base().unwrap().clone()
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let (q, q2) = pencil();
    let f = char_form(&q, &q2).unwrap();
    let smooth = is_smooth_pencil(&f).unwrap();
    let elapsed = started.elapsed();
    let (a, b, c) = (base(&p(0)), base(&p(1)), base(&p(2)));
    let (one, zero) = (RatFunc::one(), RatFunc::zero());
    let stated = BinaryForm::from_linear_factors(&[
        (zero.clone(), one.clone()),
        (one.clone(), zero.clone()),
        (one.clone(), one.clone()),
        (b.clone(), one.clone()),
        (a.clone(), b.mul(&c)),
    ])
    .scale(&RatFunc::from_i64(32));
    let ratio = f.ratio_to(&stated);
    let expected_ratio = a.mul(&c).mul(&RatFunc::constant(0, Constant::from_ratio(1, 32)));
    assert_eq!(ratio.as_ref(), Some(&expected_ratio), "determinant drifted from ac·λμ(λ+μ)(bλ+μ)(aλ+bcμ)");
    assert!(smooth && elapsed < Duration::from_secs(1));
    outcome(
        f == stated && smooth && elapsed < Duration::from_secs(1),
        format!(
            "det(λQ+μQ2) = (a*c/32) * 32μλ(λ+μ)(bλ+μ)(aλ+bcμ), not equal to the stated form; smooth = {smooth}; {:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let kf = k();
    let (pts, eps) = locus(&kf);
    let vars: Vec<String> = Vec::new();
    let rendered: Vec<String> = pts.iter().map(|t| t.render_coords(&vars)).collect();
    let want_pts = ["[1:0]", "[0:1]", "[1:-1]", "[1:-b]", "[b*c:-a]"];
    let (a, b, c) = (p(0), p(1), p(2));
    let one = n(1);
    let abc = a.mul(&b).mul(&c);
    let want_eps = [
        abc.clone(),
        abc.clone(),
        a.mul(&c).mul(&b.sub(&one)).mul(&a.sub(&b.mul(&c))),
        abc.mul(&one.sub(&b)).mul(&a.sub(&b.mul(&b).mul(&c))),
        b.mul(&b.mul(&b).mul(&c).sub(&a)).mul(&b.mul(&c).sub(&a)),
    ];
    let mut ctx = ClassContext::new(&kf).unwrap();
    let mut eps_ok = eps.len() == 5;
    for (e, w) in eps.iter().zip(&want_eps) {
        let (ce, cw) = (ctx.class_of(e).unwrap(), ctx.class_of(w).unwrap());
        eps_ok &= ctx.reduce(&ce) == ctx.reduce(&cw);
    }
    let pts_ok = rendered == want_pts;
    outcome(pts_ok && eps_ok, format!("locus {rendered:?}; ε classes match = {eps_ok}"))
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, field) in [("k", k()), ("L", l())] {
        let (pts, eps) = locus(&field);
        let star = star_subschemes(&pts, &eps, &field).unwrap();
        let recheck = !field.is_square(&eps[0]).unwrap()
            && !field.is_square(&eps[1]).unwrap()
            && field.is_square(&eps[0].mul(&eps[1])).unwrap();
        ok &= star == vec![vec![0, 1]] && recheck;
        detail.push(format!("{name}: {star:?} recheck={recheck}"));
    }
    outcome(ok, detail.join("; "))
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let mut ok = true;
    let mut images = Vec::new();
    let mut detail = Vec::new();
    for (name, field) in [("k", k()), ("L", l())] {
        let (pts, eps) = locus(&field);
        let mut ctx = ClassContext::new(&field).unwrap();
        let g = galois_image(&pts, &eps, &mut ctx).unwrap();
        let two = h1_two_torsion(&g).unwrap();
        let full = h1_full(&g).unwrap();
        ok &= two.render() == "Z/2" && full.render() == "Z/2";
        detail.push(format!("{name}: {} / {}", two.render(), full.render()));
        images.push((g, two));
    }
    let (gk, two_k) = &images[0];
    let gl = &images[1].0;
    let res = restriction_map(gk, gl, &two_k.generators[0]).unwrap();
    ok &= !res.trivial;
    let elapsed = started.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    outcome(
        ok,
        format!("{}; restriction nontrivial = {}; {:.2}s", detail.join(", "), !res.trivial, elapsed.as_secs_f64()),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, field) in [("k", k()), ("L", l())] {
        let (pts, eps) = locus(&field);
        let mut ctx = ClassContext::new(&field).unwrap();
        let g = galois_image(&pts, &eps, &mut ctx).unwrap();
        let s = subscheme_cocycle(&[0, 1], &pts, &eps, &g, &mut ctx).unwrap();
        let witness = !field.is_square(&eps[2]).unwrap();
        ok &= !s.trivial && !s.trivial_mod2 && !s.trivial_by_eps && witness;
        detail.push(format!("{name}: trivial={} ε_T2 nonsquare={witness}", s.trivial));
    }
    outcome(ok, detail.join("; "))
}

fn x(j: usize) -> FormPoly {
    FormPoly::var(5, j)
}

fn criterion_6() -> Outcome {
    let lf = l();
    let (pts, eps) = locus(&lf);
    let (q, q2) = pencil();
    let r = lf.generator().unwrap();
    let lift = |e: &FieldElement| lf.lift(e).unwrap();
    let z = lift(&n(0));
    let p0 = [lift(&i_unit()), z.clone(), r.clone(), z.clone(), z.clone()];
    let p1 = [z.clone(), lift(&i_unit()), lift(&n(1)), z.clone(), z.clone()];
    let t0 = tangent_form(&quadric_at(&pts[0], &q, &q2).unwrap(), &p0).unwrap();
    let t1 = tangent_form(&quadric_at(&pts[1], &q, &q2).unwrap(), &p1).unwrap();
    let ell = LinearForm::new(vec![n(1), n(1), n(0), n(0), n(0)]).unwrap();
    let mut ctx = ClassContext::new(&lf).unwrap();
    let a = build_algebra(&[0, 1], &pts, &eps, &[(0, t0), (1, t1)], &ell, &mut ctx).unwrap();

    let two = n(2);
    let first = x(0).scale(&two.mul(&p(0)).mul(&i_unit())).add(&x(2).scale(&two.mul(&r)));
    let second = x(1).scale(&two.mul(&i_unit())).add(&x(2).scale(&two));
    let f = RationalFunctionOnX::new(first.mul(&second), x(0).add(&x(1)).pow(2)).unwrap();
    let expected = QuaternionSymbol::single(lift(&p(1).mul(&p(2))), f).unwrap();
    let algebra_ok = a.slots().len() == 1
        && a.slots()[0].u == expected.slots()[0].u
        && a.slots()[0].f.equals(&expected.slots()[0].f);

    let spec = read_pencil(&fixture("paper-L.pencil")).unwrap();
    let started = Instant::now();
    let opts = Options { field: FieldChoice::Extension, threads: 1, h1_only: false };
    let run = analyze(&spec, &opts).unwrap();
    let elapsed = started.elapsed();
    let names: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
    let result = run.simplified.as_ref().map(|s| s.render(&lf.names(&names)));
    let chain_ok = result.as_deref() == Some("(c, b)");
    let built_same = run.algebra.as_ref().is_some_and(|b| b.slots()[0].f.equals(&a.slots()[0].f));
    outcome(
        algebra_ok && chain_ok && built_same && elapsed < Duration::from_secs(5),
        format!(
            "A matches = {algebra_ok}; shipped chain result = {}; {:.2}s",
            result.unwrap_or_else(|| "rejected".into()),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let kf = k();
    let cb = QuaternionSymbol::single(p(2), RationalFunctionOnX::constant(5, p(1))).unwrap();
    let v = Valuation::at_param(&kf, 2, Constant::zero()).unwrap();
    let mut ctx = ClassContext::new(v.residue_field()).unwrap();
    let res = tame_residue(&cb, &v, &mut ctx).unwrap();
    let b_class = ctx.class_of(&p(1)).unwrap();
    let at_c = ctx.reduce(&res) == ctx.reduce(&b_class) && !ctx.is_trivial(&res);

    let lf = l();
    let spec = read_pencil(&fixture("paper-L.pencil")).unwrap();
    let opts = Options { field: FieldChoice::Extension, threads: 1, h1_only: false };
    let run = analyze(&spec, &opts).unwrap();
    let simplified = run.simplified.expect("chain verifies");
    let w = Valuation::at_generator(&lf).unwrap();
    let mut lctx = ClassContext::new(w.residue_field()).unwrap();
    let res_r = tame_residue(&simplified, &w, &mut lctx).unwrap();
    let at_r = lctx.is_trivial(&res_r);
    outcome(at_c && at_r, format!("res_(c=0)(c, b) is the class of b: {at_c}; res_(√a=0) trivial: {at_r}"))
}

fn criterion_8() -> Outcome {
    let started = Instant::now();
    let (results, distinct) = suites::all_suites();
    let elapsed = started.elapsed();
    let mut ok = distinct >= 10 && elapsed < Duration::from_secs(60);
    let mut parts = Vec::new();
    for r in &results {
        ok &= r.outcome.is_ok() && r.cases >= 100;
        parts.push(format!(
            "{} ({} cases, {:.1}s){}",
            r.name,
            r.cases,
            r.elapsed.as_secs_f64(),
            match &r.outcome {
                Ok(()) => String::new(),
                Err(e) => format!(" FAILED: {e}"),
            }
        ));
    }
    outcome(
        ok,
        format!("{}; {distinct} distinct subgroups; total {:.1}s", parts.join(", "), elapsed.as_secs_f64()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("characteristic form and smoothness", criterion_1),
        ("degeneracy locus and discriminant classes", criterion_2),
        ("condition (*) over k and L", criterion_3),
        ("H1 over k and L, restriction", criterion_4),
        ("subscheme cocycle nontrivial", criterion_5),
        ("generating algebra and certificate chain", criterion_6),
        ("residues", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} criterion {}: {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    // Only the literal-equality clause of criterion 1 is allowed to fail;
    // its substance is asserted inside criterion_1.
    assert!(failed.iter().all(|&i| i == 1), "failing criteria: {failed:?}");
}
