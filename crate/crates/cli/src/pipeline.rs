//! The full analysis: pencil, locus, discriminants, (*), Galois image, H¹,
//! cocycles, the generating algebra, its certificate chain and residues.

use std::fmt;

use serde_json::{json, Value};

use dp4_core::cohomology::{
    h1_cyclic, h1_full, h1_full_module, h1_two_torsion, restriction_map, subscheme_cocycle, CohomologyGroup,
    GroupModule, DEFAULT_GROUP_BOUND,
};
use dp4_core::field::{ConstantMode, Constant, FieldDescriptor, FieldElement, Render, Scalar, Valuation};
use dp4_core::pencil::{
    char_form, default_hyperplane, degeneracy_locus, discriminant_eps, is_smooth_pencil, quadric_at,
    star_subschemes, tangent_form, ClosedPoint, LinearForm, QuadricMatrix,
};
use dp4_core::picard::{fixed_mod2_quotient, fixed_sublattice, galois_image, GaloisImage, GammaElement};
use dp4_core::squares::ClassContext;
use dp4_core::symbols::{
    build_algebra, conjugate_symbol, tame_residue, verify_simplification, QuaternionSymbol, RewriteStep, Rule,
};

use crate::report::{Check, Report, Stage};
use crate::spec::{Layer, PencilSpec, RuleDecl, Start};

/// A stage failed outright.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

fn fail<E: fmt::Display>(stage: &'static str) -> impl Fn(E) -> StageError {
    move |e| StageError { stage, message: e.to_string() }
}

/// Which field the analysis runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Base,
    Extension,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub field: FieldChoice,
    pub threads: usize,
    /// Stop after the cohomology stage.
    pub h1_only: bool,
}

impl Options {
    /// Thread count from `DP4_THREADS`, else the available parallelism.
    pub fn threads_from_env() -> usize {
        std::env::var("DP4_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

/// Everything later verbs need besides the report.
pub struct Analysis {
    pub report: Report,
    pub field: FieldDescriptor,
    pub algebra: Option<QuaternionSymbol>,
    pub simplified: Option<QuaternionSymbol>,
}

pub fn vars() -> Vec<String> {
    (0..5).map(|i| format!("x{i}")).collect()
}

pub fn describe_field(f: &FieldDescriptor) -> String {
    let base = match f.mode {
        ConstantMode::Cyclotomic => "Qcyc",
        ConstantMode::Gaussian => "Q(i)",
    };
    let mut s = format!("{base}({})", f.params.join(", "));
    if let (Some(e), Some(d)) = (&f.ext, f.radicand()) {
        let base = f.base();
        let names = base.names(&[]);
        s.push_str(&format!("({}), {}^2 = {}", e.name, e.name, d.render(&names)));
    }
    s
}

fn label(i: usize) -> String {
    format!("T{i}")
}

fn set_label(s: &[usize]) -> String {
    format!("{{{}}}", s.iter().map(|&i| label(i)).collect::<Vec<_>>().join(", "))
}

/// Discriminant of every locus point, computed on up to `threads` threads.
fn discriminants(
    locus: &[ClosedPoint],
    q: &QuadricMatrix,
    q2: &QuadricMatrix,
    threads: usize,
) -> Result<Vec<FieldElement>, StageError> {
    let one = |t: &ClosedPoint| -> Result<FieldElement, StageError> {
        let qt = quadric_at(t, q, q2).map_err(fail("discriminants"))?;
        let h = default_hyperplane(&qt).map_err(fail("discriminants"))?;
        discriminant_eps(&qt, &h).map_err(fail("discriminants"))
    };
    let threads = threads.clamp(1, locus.len().max(1));
    if threads == 1 {
        return locus.iter().map(one).collect();
    }
    let chunk = locus.len().div_ceil(threads);
    std::thread::scope(|sc| {
        let handles: Vec<_> = locus.chunks(chunk).map(|part| sc.spawn(move || part.iter().map(one).collect::<Vec<_>>())).collect();
        let mut out = Vec::with_capacity(locus.len());
        for h in handles {
            for r in h.join().expect("discriminant worker panicked") {
                out.push(r?);
            }
        }
        Ok(out)
    })
}

/// Locus, discriminants and Galois image over one field.
struct FieldData {
    field: FieldDescriptor,
    locus: Vec<ClosedPoint>,
    eps: Vec<FieldElement>,
    ctx: ClassContext,
}

fn field_data(spec: &PencilSpec, field: FieldDescriptor, threads: usize) -> Result<FieldData, StageError> {
    let f = char_form(&spec.q, &spec.q2).map_err(fail("pencil"))?;
    let locus = degeneracy_locus(&f, &field).map_err(fail("locus"))?;
    let eps = discriminants(&locus, &spec.q, &spec.q2, threads)?;
    let ctx = ClassContext::new(&field).map_err(fail("discriminants"))?;
    Ok(FieldData { field, locus, eps, ctx })
}

fn element_order(g: &GammaElement) -> usize {
    let mut x = *g;
    let mut n = 1;
    while !x.is_identity() {
        x = x.then_after(g);
        n += 1;
    }
    n
}

fn as_mat(m: &[[i64; 6]; 6]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn render_h1(h: &CohomologyGroup) -> String {
    h.render()
}

pub fn analyze(spec: &PencilSpec, opts: &Options) -> Result<Analysis, StageError> {
    let field = match opts.field {
        FieldChoice::Base => spec.base_field(),
        FieldChoice::Extension => {
            if !spec.has_extension() {
                return Err(StageError { stage: "field", message: "no extension layer is declared".into() });
            }
            spec.field.clone()
        }
    };
    let field_name = if field.ext.is_some() { "L" } else { "k" };
    let vars = vars();
    let names = field.names(&vars);
    let mut report = Report::new(field_name, &describe_field(&field));

    // pencil
    let f = char_form(&spec.q, &spec.q2).map_err(fail("pencil"))?;
    let smooth = is_smooth_pencil(&f).map_err(fail("pencil"))?;
    let mut st = Stage::new("pencil");
    st.claim("Q", json!(spec.q.render(&names)), "QuadricMatrix");
    st.claim("Q2", json!(spec.q2.render(&names)), "QuadricMatrix");
    st.claim("char_form", json!(f.render(&names)), "charForm");
    st.claim("smooth", json!(smooth), "isSmoothPencil");
    report.stages.push(st);
    report.checks.push(Check::new("pencil is smooth", smooth));
    if !smooth {
        report.verdict = "the pencil is singular; nothing further is computed".into();
        return Ok(Analysis { report, field, algebra: None, simplified: None });
    }

    // locus and discriminants
    let mut data = field_data(spec, field.clone(), opts.threads)?;
    let mut st = Stage::new("locus");
    let rows: Vec<Value> = data
        .locus
        .iter()
        .map(|t| {
            json!({
                "label": label(t.index),
                "degree": t.degree,
                "point": t.render_coords(&vars),
                "residue_field": if t.degree == 1 { field_name.to_string() } else { describe_field(&t.residue) },
            })
        })
        .collect();
    st.claim("points", Value::Array(rows), "degeneracyLocus");
    report.stages.push(st);

    let mut st = Stage::new("discriminants");
    let mut rows = Vec::new();
    for (t, e) in data.locus.iter().zip(&data.eps) {
        let rnames = t.residue.names(&vars);
        let class = if t.degree == 1 {
            let c = data.ctx.class_of(e).map_err(fail("discriminants"))?;
            data.ctx.render(&c, &vars)
        } else {
            let n = t.residue.norm(e).map_err(fail("discriminants"))?;
            let c = data.ctx.class_of(&n).map_err(fail("discriminants"))?;
            format!("norm ~ {}", data.ctx.render(&c, &vars))
        };
        rows.push(json!({ "label": label(t.index), "eps": e.render(&rnames), "class": class }));
    }
    st.claim("eps", Value::Array(rows), "discriminantEps");
    report.stages.push(st);

    // condition (*)
    let star = star_subschemes(&data.locus, &data.eps, &field).map_err(fail("star"))?;
    let mut st = Stage::new("star");
    st.claim("subschemes", json!(star.iter().map(|s| set_label(s)).collect::<Vec<_>>()), "starSubschemes");
    let mut recheck = true;
    for s in &star {
        if let [i, j] = s.as_slice() {
            let ns_i = !field.is_square(&data.eps[*i]).map_err(fail("star"))?;
            let ns_j = !field.is_square(&data.eps[*j]).map_err(fail("star"))?;
            let prod = field.is_square(&data.eps[*i].mul(&data.eps[*j])).map_err(fail("star"))?;
            recheck &= ns_i && ns_j && prod;
        }
    }
    st.claim("clauses_recheck", json!(recheck), "isSquare");
    report.stages.push(st);
    report.checks.push(Check::new("(*) clauses recheck", recheck));

    // Galois image and H¹
    let g = galois_image(&data.locus, &data.eps, &mut data.ctx).map_err(fail("galois"))?;
    report.stages.push(galois_stage(&g));
    let h1 = h1_stage(spec, &field, &g, opts, &mut report)?;
    report.stages.push(h1);
    if opts.h1_only {
        report.verdict = verdict(&report, None, None);
        return Ok(Analysis { report, field, algebra: None, simplified: None });
    }

    // subscheme cocycles
    let mut st = Stage::new("cocycles");
    let mut rows = Vec::new();
    let mut consistent = true;
    for s in &star {
        let c = subscheme_cocycle(s, &data.locus, &data.eps, &g, &mut data.ctx).map_err(fail("cocycles"))?;
        let mut witness = None;
        for (i, t) in data.locus.iter().enumerate() {
            if s.contains(&i) {
                continue;
            }
            let sq = if t.degree == 1 { field.is_square(&data.eps[i]) } else { t.residue.is_square(&data.eps[i]) };
            if !sq.map_err(fail("cocycles"))? {
                witness = Some(label(i));
                break;
            }
        }
        consistent &= c.trivial == c.trivial_mod2 && c.trivial == c.trivial_by_eps;
        rows.push(json!({
            "subscheme": set_label(s),
            "value": c.divisor.sub(&dp4_core::picard::PicVector::h()).render(),
            "trivial": c.trivial,
            "trivial_mod2": c.trivial_mod2,
            "nonsquare_witness": witness,
        }));
    }
    st.claim("subscheme_cocycles", Value::Array(rows), "subschemeCocycle");
    report.stages.push(st);
    report.checks.push(Check::new("cocycle triviality agrees across the three tests", consistent));

    // algebra, trace, residues
    let chosen = spec.subscheme.clone().or_else(|| star.first().cloned());
    let algebra = algebra_stage(spec, &mut data, chosen.as_deref(), &star, &mut report)?;
    let simplified = trace_stage(spec, &field, algebra.as_ref(), &mut report)?;
    residue_stage(&field, simplified.as_ref(), &mut report)?;
    report.verdict = verdict(&report, algebra.as_ref(), simplified.as_ref());
    Ok(Analysis { report, field, algebra, simplified })
}

fn galois_stage(g: &GaloisImage) -> Stage {
    let mut st = Stage::new("galois");
    st.claim("order", json!(g.order()), "galoisImage");
    st.claim("generators", json!(g.generators.iter().map(|x| x.render()).collect::<Vec<_>>()), "galoisImage");
    st.claim("characters", json!(g.character_names), "galoisImage");
    st.claim(
        "fixed_lattice",
        json!(fixed_sublattice(g).iter().map(|v| v.render()).collect::<Vec<_>>()),
        "fixedSublattice",
    );
    st.claim(
        "fixed_mod2_quotient",
        json!(fixed_mod2_quotient(g).iter().map(|v| v.render()).collect::<Vec<_>>()),
        "fixedMod2Quotient",
    );
    st
}

fn h1_stage(
    spec: &PencilSpec,
    field: &FieldDescriptor,
    g: &GaloisImage,
    opts: &Options,
    report: &mut Report,
) -> Result<Stage, StageError> {
    let mut st = Stage::new("h1");
    let two = h1_two_torsion(g).map_err(fail("h1"))?;
    let full = h1_full(g).map_err(fail("h1"))?;
    st.claim("two_torsion", json!(render_h1(&two)), "h1TwoTorsion");
    st.claim("bar_complex", json!(render_h1(&full)), "h1Full");
    let cyclic_gen = g.elements.iter().find(|x| element_order(x) == g.order());
    let cyclic = match cyclic_gen {
        Some(x) => {
            let m = as_mat(g.matrix(g.index_of(x).expect("element of the image")));
            Some(h1_cyclic(&m, g.order()).map_err(fail("h1"))?)
        }
        None => None,
    };
    st.claim(
        "cyclic_formula",
        json!(cyclic.as_ref().map(render_h1).unwrap_or_else(|| "not applicable: image is not cyclic".into())),
        "h1Cyclic",
    );
    let mut agree = two.invariant_factors == full.invariant_factors && two.free_rank == full.free_rank;
    if let Some(c) = &cyclic {
        agree &= c.invariant_factors == full.invariant_factors;
    }
    // Each generator gives a cyclic subgroup where all three routes apply.
    let mut rows = Vec::new();
    for x in &g.generators {
        let n = element_order(x);
        let m = as_mat(g.matrix(g.index_of(x).expect("generator in image")));
        let by_formula = h1_cyclic(&m, n).map_err(fail("h1"))?;
        let module = GroupModule::cyclic(&m, n).map_err(fail("h1"))?;
        let by_bar = h1_full_module(&module, DEFAULT_GROUP_BOUND).map_err(fail("h1"))?;
        agree &= by_formula.invariant_factors == by_bar.invariant_factors;
        rows.push(json!({ "generator": x.render(), "cyclic_formula": render_h1(&by_formula), "bar_complex": render_h1(&by_bar) }));
    }
    st.claim("cyclic_subgroups", Value::Array(rows), "h1Cyclic");
    report.checks.push(Check::new("H1 routes agree", agree));

    if field.ext.is_some() {
        let base = field_data(spec, field.base(), opts.threads)?;
        let mut bctx = base.ctx;
        let gk = galois_image(&base.locus, &base.eps, &mut bctx).map_err(fail("h1"))?;
        let two_k = h1_two_torsion(&gk).map_err(fail("h1"))?;
        let full_k = h1_full(&gk).map_err(fail("h1"))?;
        st.claim("over_k_two_torsion", json!(render_h1(&two_k)), "h1TwoTorsion");
        st.claim("over_k_bar_complex", json!(render_h1(&full_k)), "h1Full");
        let mut images = Vec::new();
        for alpha in &two_k.generators {
            let r = restriction_map(&gk, g, alpha).map_err(fail("h1"))?;
            images.push(!r.trivial);
        }
        let iso = two_k.invariant_factors == two.invariant_factors
            && two_k.free_rank == 0
            && two_k.invariant_factors.iter().all(|&d| d == 2)
            && images.len() == two_k.invariant_factors.len()
            && images.iter().all(|&b| b)
            && images.len() <= 1;
        st.claim("restriction_nontrivial", json!(images), "restrictionMap");
        st.claim("restriction_is_isomorphism", json!(iso), "restrictionMap");
        report.checks.push(Check::new("H1 routes agree over k", two_k.invariant_factors == full_k.invariant_factors));
    }
    Ok(st)
}

fn algebra_stage(
    spec: &PencilSpec,
    data: &mut FieldData,
    chosen: Option<&[usize]>,
    star: &[Vec<usize>],
    report: &mut Report,
) -> Result<Option<QuaternionSymbol>, StageError> {
    let mut st = Stage::new("algebra");
    let field = data.field.clone();
    let vars = vars();
    let names = field.names(&vars);
    let Some(chosen) = chosen else {
        st.note("no subscheme satisfies (*); no algebra to build");
        report.stages.push(st);
        return Ok(None);
    };
    if !star.iter().any(|s| s == chosen) {
        return Err(StageError { stage: "algebra", message: format!("subscheme {} does not satisfy (*)", set_label(chosen)) });
    }
    st.claim("subscheme", json!(set_label(chosen)), "starSubschemes");
    let mut tangents = Vec::new();
    for &i in chosen {
        let Some(p) = spec.points.iter().find(|p| p.locus_index == i) else {
            st.note(&format!(
                "no smooth point supplied for {}; algebra construction skipped (a smooth point on each tangent quadric is needed for the tangent forms)",
                label(i)
            ));
            report.stages.push(st);
            return Ok(None);
        };
        if p.layer == Layer::Extension && field.ext.is_none() {
            st.note(&format!(
                "the point for {} is declared over the extension; algebra construction skipped over k",
                label(i)
            ));
            report.stages.push(st);
            return Ok(None);
        }
        let t = &data.locus[i];
        let qt = quadric_at(t, &spec.q, &spec.q2).map_err(fail("algebra"))?;
        let coords: Vec<FieldElement> = p
            .coords
            .iter()
            .map(|c| if field.ext.is_none() { FieldElement::base(c.lo().clone()) } else { c.clone() })
            .collect();
        let lt = tangent_form(&qt, &coords).map_err(|e| StageError {
            stage: "algebra",
            message: format!("point on line {} for {}: {e}", p.line, label(i)),
        })?;
        tangents.push((i, lt));
    }
    let l = spec.line.clone().unwrap_or_else(|| LinearForm::coordinate(5, 0));
    let rows: Vec<Value> = tangents
        .iter()
        .map(|(i, lt)| json!({ "label": label(*i), "tangent_form": lt.render(&names) }))
        .collect();
    st.claim("tangent_forms", Value::Array(rows), "tangentForm");
    st.claim("line", json!(l.render(&names)), "LinearForm");
    let a = build_algebra(chosen, &data.locus, &data.eps, &tangents, &l, &mut data.ctx).map_err(fail("algebra"))?;
    st.claim("symbol", json!(a.render(&names)), "buildAlgebra");
    report.stages.push(st);
    Ok(Some(a))
}

fn to_rule(r: &RuleDecl) -> Rule {
    match r {
        RuleDecl::Bilinearity => Rule::Bilinearity,
        RuleDecl::KillSquare => Rule::KillSquare,
        RuleDecl::NormOfExtension { s, t, .. } => Rule::NormOfExtension { s: s.clone(), t: t.clone() },
        RuleDecl::SubstituteRelation { relation, .. } => Rule::SubstituteRelation { relation: *relation },
        RuleDecl::ConstantSquare => Rule::ConstantSquare,
        RuleDecl::SwapNegation => Rule::SwapNegation,
    }
}

fn rule_text(r: &RuleDecl) -> String {
    match r {
        RuleDecl::Bilinearity => "bilinearity".into(),
        RuleDecl::KillSquare => "killSquare".into(),
        RuleDecl::NormOfExtension { s_text, t_text, .. } => format!("normOfExtension s = {s_text}; t = {t_text}"),
        RuleDecl::SubstituteRelation { name, .. } => format!("substituteRelation {name}"),
        RuleDecl::ConstantSquare => "constantSquare".into(),
        RuleDecl::SwapNegation => "swapNegation".into(),
    }
}

fn trace_stage(
    spec: &PencilSpec,
    field: &FieldDescriptor,
    algebra: Option<&QuaternionSymbol>,
    report: &mut Report,
) -> Result<Option<QuaternionSymbol>, StageError> {
    let Some(cert) = &spec.certificate else { return Ok(None) };
    let mut st = Stage::new("trace");
    let names = field.names(&[]);
    let vars = vars();
    let names = dp4_core::field::Names { vars: &vars, ..names };
    let start = match (&cert.start, algebra) {
        (Start::Symbol(s), _) => s.clone(),
        (_, None) => {
            st.note("the certificate starts from the algebra, which was not built; chain not checked");
            report.stages.push(st);
            return Ok(None);
        }
        (Start::Algebra, Some(a)) => a.clone(),
        (Start::AlgebraPlusConjugate, Some(a)) => match conjugate_symbol(field, a) {
            Ok(c) => a.add(&c),
            Err(e) => {
                st.note(&format!("the certificate starts from A + σA: {e}; chain not checked over this field"));
                report.stages.push(st);
                return Ok(None);
            }
        },
    };
    if cert.steps.iter().any(|s| s.after.slots().iter().any(|x| !x.u.is_base() || has_ext_coeff(x))) && field.ext.is_none() {
        st.note("the certificate uses the extension generator; chain not checked over k");
        report.stages.push(st);
        return Ok(None);
    }
    let mut before = start.clone();
    let mut steps = Vec::new();
    for d in &cert.steps {
        steps.push(RewriteStep { rule: to_rule(&d.rule), before: before.clone(), after: d.after.clone() });
        before = d.after.clone();
    }
    st.claim("start", json!(start.render(&names)), "conjugateSymbol");
    let relations = [spec.q.clone(), spec.q2.clone()];
    match verify_simplification(&steps, &relations, field) {
        Ok(chain) => {
            let rows: Vec<Value> = chain
                .trace
                .iter()
                .zip(&cert.steps)
                .map(|(t, d)| {
                    json!({
                        "step": t.index + 1,
                        "rule": rule_text(&d.rule),
                        "check": t.note,
                        "result": d.after_text,
                        "line": d.line,
                    })
                })
                .collect();
            st.claim("steps", Value::Array(rows), "verifySimplification");
            st.claim("result", json!(chain.result.render(&names)), "verifySimplification");
            report.stages.push(st);
            report.checks.push(Check::new("certificate chain verified", true));
            Ok(Some(chain.result))
        }
        Err(dp4_core::Error::StepRejected { index, reason }) => {
            let line = cert.steps.get(index).map(|s| s.line).unwrap_or(0);
            st.note(&format!("step {} (line {line}) rejected: {reason}", index + 1));
            report.stages.push(st);
            report.checks.push(Check::new("certificate chain verified", false));
            Ok(None)
        }
        Err(e) => Err(fail("trace")(e)),
    }
}

fn has_ext_coeff(s: &dp4_core::symbols::Slot) -> bool {
    s.f.num().terms().chain(s.f.den().terms()).any(|(_, c)| !c.is_base())
}

/// Valuations worth reporting: the generator, and each parameter at 0.
pub fn default_valuations(field: &FieldDescriptor) -> Vec<Valuation> {
    let mut out = Vec::new();
    if field.ext.is_some() {
        if let Ok(v) = Valuation::at_generator(field) {
            out.push(v);
        }
    }
    for i in 0..field.nvars() {
        if let Ok(v) = Valuation::at_param(field, i, Constant::zero()) {
            out.push(v);
        }
    }
    out
}

/// Residue of a constant symbol at `v`, rendered.
pub fn residue_at(a: &QuaternionSymbol, v: &Valuation) -> Result<(String, bool), StageError> {
    let mut ctx = ClassContext::new(v.residue_field()).map_err(fail("residues"))?;
    let c = tame_residue(a, v, &mut ctx).map_err(fail("residues"))?;
    let trivial = ctx.is_trivial(&c);
    Ok((ctx.render(&c, &vars()), trivial))
}

fn residue_stage(field: &FieldDescriptor, a: Option<&QuaternionSymbol>, report: &mut Report) -> Result<(), StageError> {
    let Some(a) = a else { return Ok(()) };
    let mut st = Stage::new("residues");
    if a.slots().iter().any(|s| s.f.constant_value().is_none()) {
        st.note("the simplified symbol is not constant; residues are not computed");
        report.stages.push(st);
        return Ok(());
    }
    let mut rows = Vec::new();
    for v in default_valuations(field) {
        let (class, trivial) = residue_at(a, &v)?;
        rows.push(json!({ "at": format!("{} = 0", v.label()), "class": class, "trivial": trivial }));
    }
    st.claim("residues", Value::Array(rows), "tameResidue");
    report.stages.push(st);
    Ok(())
}

fn verdict(report: &Report, algebra: Option<&QuaternionSymbol>, simplified: Option<&QuaternionSymbol>) -> String {
    let h1 = report.claim("h1", "bar_complex").and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let mut parts = vec![format!("H1(Pic) over {} is {h1}", report.field.name)];
    if report.claim("h1", "restriction_is_isomorphism") == Some(&json!(true)) {
        parts.push("restriction from k is an isomorphism".into());
    }
    if algebra.is_some() {
        parts.push("generating algebra built".into());
    }
    if let Some(s) = simplified {
        let res = report.claim("residues", "residues").and_then(|v| v.as_array().cloned()).unwrap_or_default();
        let ramified: Vec<String> = res
            .iter()
            .filter(|r| r["trivial"] == json!(false))
            .map(|r| format!("{} at {}", r["class"].as_str().unwrap_or("?"), r["at"].as_str().unwrap_or("?")))
            .collect();
        let names_vars = vars();
        let text = report.claim("trace", "result").and_then(|v| v.as_str().map(String::from)).unwrap_or_else(|| format!("{} slots", s.slots().len()));
        let _ = names_vars;
        parts.push(format!("A + sigma(A) simplifies to {text}"));
        if !ramified.is_empty() {
            parts.push(format!("residues: {}", ramified.join(", ")));
        }
        parts.push("triviality of Br X/Br k needs an argument over all of Br L and is not machine-checked".into());
    }
    if !report.all_passed() {
        parts.push("SOME CHECKS FAILED".into());
    }
    parts.join("; ")
}
