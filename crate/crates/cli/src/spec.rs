//! The `.pencil` input format.
//!
//! ```text
//! [field]
//! params = a, b, c
//! constants = cyclotomic
//! extension = r^2 = a
//!
//! [quadric.Q]
//! diag = a, b, 1, 0, c
//!
//! [quadric.Q2]
//! row = b*c, 0, 0, 0, 0
//! ...
//!
//! [points]
//! T0 = [i : 0 : r : 0 : 0] @ L
//! line = x0 + x1
//!
//! [certificates]
//! start = algebra + conjugate
//! killSquare => (b*c, ...)
//! ```
//!
//! Blank lines and `#` comments are ignored.

use std::fmt;

use dp4_core::field::{ConstantMode, FieldDescriptor, FieldElement, RatFunc, Scalar};
use dp4_core::pencil::{LinearForm, Matrix, QuadricMatrix};
use dp4_core::symbols::{QuaternionSymbol, RationalFunctionOnX, Slot};

use crate::expr::{self, split_top, Scope, COORDS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    /// Syntax problem on a given line.
    Parse { line: usize, msg: String },
    /// Well-formed input that breaks a structural rule.
    Validation { line: usize, msg: String },
    Io(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse { line, msg } => write!(f, "parse error, line {line}: {msg}"),
            InputError::Validation { line, msg } => write!(f, "validation error, line {line}: {msg}"),
            InputError::Io(msg) => write!(f, "cannot read input: {msg}"),
        }
    }
}

impl std::error::Error for InputError {}

fn parse_err(line: usize, msg: impl Into<String>) -> InputError {
    InputError::Parse { line, msg: msg.into() }
}

fn invalid(line: usize, msg: impl Into<String>) -> InputError {
    InputError::Validation { line, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layer {
    Base,
    Extension,
}

#[derive(Clone, Debug)]
pub struct PointDecl {
    pub locus_index: usize,
    pub coords: Vec<FieldElement>,
    pub layer: Layer,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub enum RuleDecl {
    Bilinearity,
    KillSquare,
    NormOfExtension { s: RationalFunctionOnX, t: RationalFunctionOnX, s_text: String, t_text: String },
    SubstituteRelation { relation: usize, name: String },
    ConstantSquare,
    SwapNegation,
}

#[derive(Clone, Debug)]
pub struct StepDecl {
    pub line: usize,
    pub rule: RuleDecl,
    pub after: QuaternionSymbol,
    pub after_text: String,
}

#[derive(Clone, Debug)]
pub enum Start {
    /// `A + σA` for the algebra built from the points.
    AlgebraPlusConjugate,
    Algebra,
    Symbol(QuaternionSymbol),
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub start: Start,
    pub steps: Vec<StepDecl>,
}

/// A validated input file.
#[derive(Clone, Debug)]
pub struct PencilSpec {
    /// The declared field: the base `k`, plus the extension layer if any.
    pub field: FieldDescriptor,
    pub q: QuadricMatrix,
    pub q2: QuadricMatrix,
    pub points: Vec<PointDecl>,
    pub line: Option<LinearForm>,
    pub subscheme: Option<Vec<usize>>,
    pub certificate: Option<Certificate>,
}

impl PencilSpec {
    pub fn base_field(&self) -> FieldDescriptor {
        self.field.base()
    }

    pub fn has_extension(&self) -> bool {
        self.field.ext.is_some()
    }
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<(usize, String)>,
}

fn sections(text: &str) -> Result<Vec<Section>, InputError> {
    let mut out: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| parse_err(line, "unterminated section header"))?;
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "field" | "quadric.Q" | "quadric.Q2" | "points" | "certificates") {
                return Err(parse_err(line, format!("unknown section [{name}]")));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(parse_err(line, format!("section [{name}] appears twice")));
            }
            out.push(Section { name, line, entries: Vec::new() });
            continue;
        }
        let sec = out.last_mut().ok_or_else(|| parse_err(line, "content before the first section"))?;
        sec.entries.push((line, content.to_string()));
    }
    Ok(out)
}

fn key_value(line: usize, s: &str) -> Result<(&str, &str), InputError> {
    let (k, v) = s.split_once('=').ok_or_else(|| parse_err(line, "expected 'key = value'"))?;
    Ok((k.trim(), v.trim()))
}

fn parse_field(sec: &Section) -> Result<FieldDescriptor, InputError> {
    let mut params: Option<Vec<String>> = None;
    let mut mode = ConstantMode::Cyclotomic;
    let mut ext: Option<(usize, String, String)> = None;
    for (line, e) in &sec.entries {
        let (k, v) = key_value(*line, e)?;
        match k {
            "params" => {
                let names: Vec<String> = v.split(',').map(|s| s.trim().to_string()).collect();
                for n in &names {
                    let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok || n == "i" || (n.starts_with('x') && n[1..].parse::<usize>().is_ok()) {
                        return Err(parse_err(*line, format!("bad parameter name '{n}'")));
                    }
                }
                let mut sorted = names.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != names.len() {
                    return Err(invalid(*line, "parameter names repeat"));
                }
                params = Some(names);
            }
            "constants" => {
                mode = match v {
                    "cyclotomic" => ConstantMode::Cyclotomic,
                    "gaussian" => ConstantMode::Gaussian,
                    _ => return Err(parse_err(*line, format!("constants must be cyclotomic or gaussian, not '{v}'"))),
                }
            }
            "extension" => {
                // `r^2 = a`: the key split took the first '=', so re-split the raw entry.
                let rest = e.split_once('=').map(|(_, r)| r).unwrap_or("");
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| parse_err(*line, "expected 'extension = r^2 = d'"))?;
                let name = lhs.trim().strip_suffix("^2").ok_or_else(|| parse_err(*line, "expected 'r^2' on the left"))?;
                ext = Some((*line, name.trim().to_string(), rhs.trim().to_string()));
            }
            _ => return Err(parse_err(*line, format!("unknown key '{k}' in [field]"))),
        }
    }
    let params = params.ok_or_else(|| invalid(sec.line, "[field] needs 'params'"))?;
    let base = FieldDescriptor::new(mode, params);
    let Some((line, name, rhs)) = ext else { return Ok(base) };
    if base.param_index(&name).is_some() || name == "i" {
        return Err(invalid(line, format!("generator name '{name}' clashes")));
    }
    let d = expr::parse_scalar(&rhs, &base).map_err(|m| parse_err(line, m))?;
    let d: RatFunc = d.as_base().cloned().ok_or_else(|| invalid(line, "radicand must lie in the base field"))?;
    base.with_extension(&name, d).map_err(|e| invalid(line, e.to_string()))
}

fn parse_quadric(sec: &Section, base: &FieldDescriptor) -> Result<QuadricMatrix, InputError> {
    let entry_list = |line: usize, v: &str| -> Result<Vec<FieldElement>, InputError> {
        let items: Vec<&str> = split_top(v, ',');
        if items.len() != COORDS {
            return Err(invalid(line, format!("expected {COORDS} entries, found {}", items.len())));
        }
        items
            .iter()
            .map(|s| {
                let x = expr::parse_scalar(s, base).map_err(|m| parse_err(line, m))?;
                Ok(x)
            })
            .collect()
    };
    let mut rows = Vec::new();
    let mut diag = None;
    for (line, e) in &sec.entries {
        let (k, v) = key_value(*line, e)?;
        match k {
            "diag" if diag.is_none() => diag = Some(entry_list(*line, v)?),
            "row" => rows.push(entry_list(*line, v)?),
            _ => return Err(parse_err(*line, format!("unknown or repeated key '{k}' in [{}]", sec.name))),
        }
    }
    let m = match (diag, rows.len()) {
        (Some(d), 0) => Matrix::diagonal(&d),
        (None, COORDS) => Matrix::from_rows(rows),
        (Some(_), _) => return Err(invalid(sec.line, "use either 'diag' or 'row' lines, not both")),
        (None, n) => return Err(invalid(sec.line, format!("expected {COORDS} rows, found {n}"))),
    };
    if !m.is_symmetric() {
        return Err(invalid(sec.line, format!("matrix in [{}] is not symmetric", sec.name)));
    }
    QuadricMatrix::new(m).map_err(|e| invalid(sec.line, e.to_string()))
}

fn locus_label(line: usize, s: &str) -> Result<usize, InputError> {
    s.strip_prefix('T')
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| parse_err(line, format!("expected a locus label like T0, found '{s}'")))
}

fn parse_points(sec: &Section, spec: &mut PencilSpec) -> Result<(), InputError> {
    let field = spec.field.clone();
    for (line, e) in &sec.entries {
        let (k, v) = key_value(*line, e)?;
        match k {
            "line" => {
                let val = expr::parse(v, &Scope { field: &field, coordinates: true }).map_err(|m| parse_err(*line, m))?;
                spec.line = Some(linear_form(*line, &val.num, &val.den)?);
            }
            "subscheme" => {
                let mut idx = v.split(',').map(|s| locus_label(*line, s.trim())).collect::<Result<Vec<_>, _>>()?;
                idx.sort_unstable();
                spec.subscheme = Some(idx);
            }
            _ => {
                let locus_index = locus_label(*line, k)?;
                if spec.points.iter().any(|p| p.locus_index == locus_index) {
                    return Err(invalid(*line, format!("two points for T{locus_index}")));
                }
                let (coords, layer) = match v.rsplit_once('@') {
                    Some((c, l)) => (c.trim(), Some(l.trim())),
                    None => (v, None),
                };
                let inner = coords
                    .strip_prefix('[')
                    .and_then(|c| c.strip_suffix(']'))
                    .ok_or_else(|| parse_err(*line, "point coordinates must be written [x0 : x1 : x2 : x3 : x4]"))?;
                let items = split_top(inner, ':');
                if items.len() != COORDS {
                    return Err(invalid(*line, format!("expected {COORDS} coordinates, found {}", items.len())));
                }
                let coords = items
                    .iter()
                    .map(|s| expr::parse_scalar(s, &field).map_err(|m| parse_err(*line, m)))
                    .collect::<Result<Vec<_>, _>>()?;
                if coords.iter().all(|c| c.is_zero()) {
                    return Err(invalid(*line, "point has all coordinates zero"));
                }
                let uses_ext = coords.iter().any(|c| !c.is_base());
                let layer = match layer {
                    None if uses_ext => Layer::Extension,
                    None => Layer::Base,
                    Some("k") if uses_ext => {
                        return Err(invalid(*line, "point declared over k uses the extension generator"))
                    }
                    Some("k") => Layer::Base,
                    Some("L") if field.ext.is_none() => return Err(invalid(*line, "no extension layer is declared")),
                    Some("L") => Layer::Extension,
                    Some(other) => return Err(parse_err(*line, format!("unknown field layer '{other}'"))),
                };
                spec.points.push(PointDecl { locus_index, coords, layer, line: *line });
            }
        }
    }
    Ok(())
}

fn linear_form(line: usize, num: &dp4_core::symbols::FormPoly, den: &dp4_core::symbols::FormPoly) -> Result<LinearForm, InputError> {
    let bad = || invalid(line, "expected a linear form in x0..x4");
    if den.constant_value().is_none_or(|d| !d.is_one()) || num.total_degree() != Some(1) || !num.is_homogeneous() {
        return Err(bad());
    }
    let coeffs = (0..COORDS)
        .map(|i| num.coeff(&dp4_core::field::Monomial::var(COORDS, i)))
        .collect();
    LinearForm::new(coeffs).map_err(|_| bad())
}

/// Parses `(u, f) + (u, f)` or `0`.
pub fn parse_symbol(s: &str, field: &FieldDescriptor) -> Result<QuaternionSymbol, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(QuaternionSymbol::trivial());
    }
    let mut slots = Vec::new();
    for part in split_top(s, '+') {
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| format!("expected '(u, f)', found '{part}'"))?;
        let items = split_top(inner, ',');
        let [u, f] = items.as_slice() else {
            return Err(format!("a symbol slot needs two entries, found {}", items.len()));
        };
        let u = expr::parse_scalar(u, field)?;
        let f = expr::parse(f, &Scope { field, coordinates: true })?.into_function()?;
        slots.push(Slot::new(u, f).map_err(|e| e.to_string())?);
    }
    Ok(QuaternionSymbol::new(slots))
}

fn parse_certificates(sec: &Section, field: &FieldDescriptor) -> Result<Certificate, InputError> {
    let mut start = None;
    let mut steps = Vec::new();
    for (line, e) in &sec.entries {
        let line = *line;
        if let Some(v) = e.strip_prefix("start").map(str::trim_start).and_then(|r| r.strip_prefix('=')) {
            let v = v.trim();
            start = Some(match v {
                "algebra + conjugate" | "algebra - conjugate" => Start::AlgebraPlusConjugate,
                "algebra" => Start::Algebra,
                _ => Start::Symbol(parse_symbol(v, field).map_err(|m| parse_err(line, m))?),
            });
            continue;
        }
        let (head, after_text) = e.split_once("=>").ok_or_else(|| parse_err(line, "expected '<rule> => <symbol>'"))?;
        let head = head.trim();
        let (name, args) = head.split_once(char::is_whitespace).map(|(n, a)| (n, a.trim())).unwrap_or((head, ""));
        let no_args = |r: RuleDecl| -> Result<RuleDecl, InputError> {
            if args.is_empty() {
                Ok(r)
            } else {
                Err(parse_err(line, format!("rule {name} takes no arguments")))
            }
        };
        let rule = match name {
            "bilinearity" => no_args(RuleDecl::Bilinearity)?,
            "killSquare" => no_args(RuleDecl::KillSquare)?,
            "constantSquare" => no_args(RuleDecl::ConstantSquare)?,
            "swapNegation" => no_args(RuleDecl::SwapNegation)?,
            "substituteRelation" => {
                let relation = match args {
                    "Q" => 0,
                    "Q2" => 1,
                    _ => return Err(parse_err(line, "substituteRelation needs Q or Q2")),
                };
                RuleDecl::SubstituteRelation { relation, name: args.to_string() }
            }
            "normOfExtension" => {
                let mut s = None;
                let mut t = None;
                for part in args.split(';') {
                    let (k, v) = key_value(line, part)?;
                    let f = expr::parse(v, &Scope { field, coordinates: true })
                        .and_then(|x| x.into_function())
                        .map_err(|m| parse_err(line, m))?;
                    match k {
                        "s" => s = Some((f, v.to_string())),
                        "t" => t = Some((f, v.to_string())),
                        _ => return Err(parse_err(line, format!("unknown witness '{k}'"))),
                    }
                }
                let ((s, s_text), (t, t_text)) = s
                    .zip(t)
                    .ok_or_else(|| parse_err(line, "normOfExtension needs witnesses s = ...; t = ..."))?;
                RuleDecl::NormOfExtension { s, t, s_text, t_text }
            }
            _ => return Err(parse_err(line, format!("unknown rule '{name}'"))),
        };
        let after = parse_symbol(after_text, field).map_err(|m| parse_err(line, m))?;
        steps.push(StepDecl { line, rule, after, after_text: after_text.trim().to_string() });
    }
    if steps.is_empty() {
        return Err(invalid(sec.line, "[certificates] has no steps"));
    }
    Ok(Certificate { start: start.unwrap_or(Start::AlgebraPlusConjugate), steps })
}

pub fn parse_pencil(text: &str) -> Result<PencilSpec, InputError> {
    let secs = sections(text)?;
    let get = |name: &str| secs.iter().find(|s| s.name == name);
    let field_sec = get("field").ok_or_else(|| invalid(1, "missing [field] section"))?;
    let field = parse_field(field_sec)?;
    let base = field.base();
    let q = parse_quadric(get("quadric.Q").ok_or_else(|| invalid(1, "missing [quadric.Q] section"))?, &base)?;
    let q2 = parse_quadric(get("quadric.Q2").ok_or_else(|| invalid(1, "missing [quadric.Q2] section"))?, &base)?;
    let mut spec = PencilSpec { field, q, q2, points: Vec::new(), line: None, subscheme: None, certificate: None };
    if let Some(sec) = get("points") {
        parse_points(sec, &mut spec)?;
    }
    if let Some(sec) = get("certificates") {
        spec.certificate = Some(parse_certificates(sec, &spec.field)?);
    }
    Ok(spec)
}

pub fn read_pencil(path: &std::path::Path) -> Result<PencilSpec, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    parse_pencil(&text)
}
