//! Square classes `K^× / K^×2` over a coprime atom basis grown by factor
//! refinement. No irreducible factorization is ever performed: atoms are
//! pairwise coprime squarefree polynomials, split further only when a new
//! element shares a proper factor with one of them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::f2;
use crate::field::{
    poly_gcd, squarefree_decomposition, Constant, ConstantMode, FieldDescriptor, FieldElement, GaussInt, Names,
    Poly, RatFunc, Scalar,
};

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    /// A monic squarefree nonconstant polynomial.
    Poly(Poly),
    /// A first-quadrant Gaussian prime (gaussian mode only).
    Const(GaussInt),
    /// The unit `i`, which is not a square in `Q(i)`.
    ImaginaryUnit,
}

impl Atom {
    pub fn element(&self, nvars: usize) -> RatFunc {
        match self {
            Atom::Poly(p) => RatFunc::from_poly(p.clone()),
            Atom::Const(g) => RatFunc::constant(nvars, g.to_constant()),
            Atom::ImaginaryUnit => RatFunc::constant(nvars, Constant::i()),
        }
    }

    pub fn render(&self, names: &Names<'_>) -> String {
        match self {
            Atom::Poly(p) => p.render(&Names { vars: names.params, ..*names }),
            Atom::Const(g) => alloc::format!("{g}"),
            Atom::ImaginaryUnit => "i".into(),
        }
    }
}

/// A class in `K^× / K^×2`: the set of atoms occurring to an odd power.
///
/// The constant part of the class is carried by `Const` and `ImaginaryUnit`
/// atoms; in cyclotomic mode there are none.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    odd: BTreeSet<usize>,
}

impl SquareClass {
    pub fn trivial() -> Self {
        SquareClass::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = usize>) -> Self {
        let mut c = SquareClass::default();
        for a in atoms {
            c.toggle(a);
        }
        c
    }

    pub fn is_trivial(&self) -> bool {
        self.odd.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.odd.iter().copied()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.odd.contains(&atom)
    }

    fn toggle(&mut self, a: usize) {
        if !self.odd.remove(&a) {
            self.odd.insert(a);
        }
    }

    /// Class of the product.
    pub fn mul(&self, o: &Self) -> Self {
        SquareClass { odd: self.odd.symmetric_difference(&o.odd).copied().collect() }
    }
}

/// Exact factorization of an element over the basis at the time of the call.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: Constant,
    pub exponents: BTreeMap<usize, i64>,
}

/// Pairwise coprime atoms, append-only. An atom that later splits is retired
/// and remembers its children so that older classes stay meaningful.
#[derive(Clone, Debug)]
pub struct AtomBasis {
    mode: ConstantMode,
    nvars: usize,
    atoms: Vec<Atom>,
    retired: Vec<Option<Vec<usize>>>,
}

impl AtomBasis {
    pub fn new(mode: ConstantMode, nvars: usize) -> Self {
        AtomBasis { mode, nvars, atoms: Vec::new(), retired: Vec::new() }
    }

    pub fn mode(&self) -> ConstantMode {
        self.mode
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_live(&self, i: usize) -> bool {
        self.retired[i].is_none()
    }

    /// Indices of atoms that have not been split.
    pub fn live(&self) -> Vec<usize> {
        (0..self.atoms.len()).filter(|&i| self.is_live(i)).collect()
    }

    fn push(&mut self, a: Atom) -> usize {
        self.atoms.push(a);
        self.retired.push(None);
        self.atoms.len() - 1
    }

    /// Live atoms whose product is `i` (itself when live).
    fn expand(&self, i: usize) -> Vec<usize> {
        match &self.retired[i] {
            None => vec![i],
            Some(ch) => ch.iter().flat_map(|&c| self.expand(c)).collect(),
        }
    }

    /// Rewrites a class in terms of live atoms only.
    pub fn canonical(&self, c: &SquareClass) -> SquareClass {
        SquareClass::from_atoms(c.atoms().flat_map(|a| self.expand(a)))
    }

    /// Registers a monic squarefree polynomial; returns the live atoms whose
    /// product it is.
    fn insert_squarefree(&mut self, s: &Poly) -> Vec<usize> {
        let mut rest = s.monic().1;
        let mut out = Vec::new();
        'outer: while !rest.is_constant() {
            for idx in self.live() {
                let Atom::Poly(a) = &self.atoms[idx] else { continue };
                let a = a.clone();
                let g = poly_gcd(&rest, &a);
                if g.is_constant() {
                    continue;
                }
                if g == a {
                    out.push(idx);
                    rest = rest.exact_div(&a).expect("atom divides");
                    continue 'outer;
                }
                let other = a.exact_div(&g).expect("gcd divides atom");
                let c1 = self.push(Atom::Poly(g.clone()));
                let c2 = self.push(Atom::Poly(other));
                self.retired[idx] = Some(vec![c1, c2]);
                out.push(c1);
                rest = rest.exact_div(&g).expect("gcd divides");
                continue 'outer;
            }
            let idx = self.push(Atom::Poly(rest.clone()));
            out.push(idx);
            break;
        }
        out
    }

    fn const_atom(&mut self, a: Atom) -> usize {
        match self.atoms.iter().position(|x| *x == a) {
            Some(i) => i,
            None => self.push(a),
        }
    }

    fn factor_constant(&mut self, c: &Constant, sign: i64, exps: &mut BTreeMap<usize, i64>) {
        if self.mode == ConstantMode::Cyclotomic {
            return;
        }
        let g = GaussInt::class_representative(c);
        let (k, primes) = g.factor();
        if k % 2 == 1 {
            let i = self.const_atom(Atom::ImaginaryUnit);
            *exps.entry(i).or_default() += sign;
        }
        for (p, e) in primes {
            let i = self.const_atom(Atom::Const(p));
            *exps.entry(i).or_default() += sign * e as i64;
        }
    }

    fn factor_poly(&mut self, p: &Poly, sign: i64, exps: &mut BTreeMap<usize, i64>) -> Constant {
        let (unit, parts) = squarefree_decomposition(p);
        for (s, k) in parts {
            for a in self.insert_squarefree(&s) {
                *exps.entry(a).or_default() += sign * k as i64;
            }
        }
        unit
    }

    /// Factors `x` over the basis, growing it as needed. Exponents refer to
    /// live atoms at the end of the call.
    pub fn factor(&mut self, x: &RatFunc) -> Result<Factorization> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let x = x.with_nvars(self.nvars.max(x.nvars()));
        let mut exps = BTreeMap::new();
        let un = self.factor_poly(x.num(), 1, &mut exps);
        let ud = self.factor_poly(x.den(), -1, &mut exps);
        let unit = un.div(&ud).expect("nonzero unit");
        // Earlier entries may have been split by later insertions.
        let mut live: BTreeMap<usize, i64> = BTreeMap::new();
        for (a, e) in exps {
            for l in self.expand(a) {
                *live.entry(l).or_default() += e;
            }
        }
        let mut const_exps = BTreeMap::new();
        self.factor_constant(&unit, 1, &mut const_exps);
        for (a, e) in const_exps {
            *live.entry(a).or_default() += e;
        }
        live.retain(|_, e| *e != 0);
        Ok(Factorization { unit, exponents: live })
    }

    /// Square class of a base-field element.
    pub fn class_of(&mut self, x: &RatFunc) -> Result<SquareClass> {
        let f = self.factor(x)?;
        Ok(SquareClass::from_atoms(
            f.exponents.into_iter().filter(|(_, e)| e.rem_euclid(2) == 1).map(|(a, _)| a),
        ))
    }

    /// Product of the atoms of a class, as a representative element.
    pub fn representative(&self, c: &SquareClass) -> RatFunc {
        let c = self.canonical(c);
        let mut r = RatFunc::one();
        for a in c.atoms() {
            r = r.mul(&self.atoms[a].element(self.nvars));
        }
        r
    }

    /// Product of live atoms with the given exponents, times the unit.
    pub fn reconstruct(&self, f: &Factorization) -> RatFunc {
        let mut r = RatFunc::constant(self.nvars, f.unit.clone());
        for (&a, &e) in &f.exponents {
            let base = match &self.atoms[a] {
                Atom::Poly(p) => RatFunc::from_poly(p.clone()),
                // The unit already carries the constant value.
                _ => continue,
            };
            let p = base.pow(e.unsigned_abs() as u32);
            r = if e > 0 { r.mul(&p) } else { r.div(&p).expect("nonzero") };
        }
        r
    }

    /// Exponent matrix over F_2: rows are live atoms, columns the classes.
    fn matrix(&self, classes: &[SquareClass]) -> Vec<f2::Vector> {
        let cls: Vec<SquareClass> = classes.iter().map(|c| self.canonical(c)).collect();
        self.live()
            .into_iter()
            .map(|a| cls.iter().map(|c| c.contains(a) as u8).collect())
            .collect()
    }

    /// Basis of `{e : Π classes_i^{e_i} is a square}`.
    pub fn relation_lattice(&self, classes: &[SquareClass]) -> Vec<f2::Vector> {
        f2::kernel(&self.matrix(classes), classes.len())
    }

    pub fn render(&self, c: &SquareClass, names: &Names<'_>) -> String {
        let c = self.canonical(c);
        if c.is_trivial() {
            return "1".into();
        }
        let parts: Vec<String> = c
            .atoms()
            .map(|a| {
                let s = self.atoms[a].render(names);
                if s.contains(' ') && !s.starts_with('(') {
                    alloc::format!("({s})")
                } else {
                    s
                }
            })
            .collect();
        parts.join("*")
    }
}

/// Square classes as seen in an analysis field: the base field itself, or
/// `K(√d)` where the class of `d` becomes trivial.
#[derive(Clone, Debug)]
pub struct ClassContext {
    pub field: FieldDescriptor,
    pub basis: AtomBasis,
    radicand_class: Option<SquareClass>,
}

impl ClassContext {
    pub fn new(field: &FieldDescriptor) -> Result<Self> {
        let mut basis = AtomBasis::new(field.mode, field.nvars());
        let radicand_class = match field.radicand() {
            Some(d) => Some(basis.class_of(d)?),
            None => None,
        };
        Ok(ClassContext { field: field.clone(), basis, radicand_class })
    }

    /// Square class of a base element in the analysis field.
    pub fn class_of(&mut self, x: &FieldElement) -> Result<SquareClass> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let base = x.as_base().ok_or(Error::UnsupportedDegree(
            "square class of an element outside the base layer".into(),
        ))?;
        let c = self.basis.class_of(base)?;
        Ok(self.reduce(&c))
    }

    /// Canonical representative modulo the radicand class.
    pub fn reduce(&self, c: &SquareClass) -> SquareClass {
        let c = self.basis.canonical(c);
        let Some(d) = &self.radicand_class else { return c };
        let d = self.basis.canonical(d);
        match d.atoms().max() {
            Some(pivot) if c.contains(pivot) => c.mul(&d),
            _ => c,
        }
    }

    pub fn is_trivial(&self, c: &SquareClass) -> bool {
        self.reduce(c).is_trivial()
    }

    pub fn relation_lattice(&self, classes: &[SquareClass]) -> Vec<f2::Vector> {
        let reduced: Vec<SquareClass> = classes.iter().map(|c| self.reduce(c)).collect();
        self.basis.relation_lattice(&reduced)
    }

    pub fn render(&self, c: &SquareClass, vars: &[String]) -> String {
        let names = self.field.names(vars);
        self.basis.render(&self.reduce(c), &names)
    }
}

/// Refines a list of base elements into a coprime basis and their classes.
pub fn refine(mode: ConstantMode, nvars: usize, elements: &[RatFunc]) -> Result<(AtomBasis, Vec<SquareClass>)> {
    let mut basis = AtomBasis::new(mode, nvars);
    let mut classes = Vec::with_capacity(elements.len());
    for x in elements {
        classes.push(basis.class_of(x)?);
    }
    let classes = classes.iter().map(|c| basis.canonical(c)).collect();
    Ok((basis, classes))
}
