//! The rank-6 Picard lattice of a degree 4 del Pezzo surface in the conic
//! basis `(E, C₀, …, C₄)`, the group `(Z/2)^5 ⋊ S_5` acting on the ten conic
//! classes, and Galois images computed from square-class characters.
//!
//! `H = 2E − ΣCᵢ`; the exchange at `i` sends `Cᵢ` to `Cᵢ' = H − Cᵢ`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::f2;
use crate::field::{ConstantMode, FieldElement, RatFunc, Scalar};
use crate::intmat::{self, IntMatrix};
use crate::pencil::ClosedPoint;
use crate::squares::{ClassContext, SquareClass};

pub const RANK: usize = 6;

/// Coordinates in the basis `(E, C₀, …, C₄)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PicVector(pub [i64; RANK]);

/// Intersection matrix in the conic basis.
pub const PAIRING: [[i64; RANK]; RANK] = [
    [11, 3, 3, 3, 3, 3],
    [3, 0, 1, 1, 1, 1],
    [3, 1, 0, 1, 1, 1],
    [3, 1, 1, 0, 1, 1],
    [3, 1, 1, 1, 0, 1],
    [3, 1, 1, 1, 1, 0],
];

impl PicVector {
    pub const ZERO: PicVector = PicVector([0; RANK]);

    pub fn e() -> Self {
        PicVector([1, 0, 0, 0, 0, 0])
    }

    pub fn c(i: usize) -> Self {
        let mut v = [0; RANK];
        v[i + 1] = 1;
        PicVector(v)
    }

    /// The hyperplane class.
    pub fn h() -> Self {
        PicVector([2, -1, -1, -1, -1, -1])
    }

    pub fn add(&self, o: &Self) -> Self {
        PicVector(core::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        PicVector(core::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    pub fn scale(&self, k: i64) -> Self {
        PicVector(self.0.map(|x| k * x))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn pairing(&self, o: &Self) -> i64 {
        let mut s = 0;
        for i in 0..RANK {
            for j in 0..RANK {
                s += self.0[i] * PAIRING[i][j] * o.0[j];
            }
        }
        s
    }

    pub fn mod2(&self) -> f2::Vector {
        self.0.iter().map(|x| x.rem_euclid(2) as u8).collect()
    }

    pub fn from_mod2(v: &[u8]) -> Self {
        PicVector(core::array::from_fn(|i| v[i] as i64))
    }

    /// Halves every coordinate, if all are even.
    pub fn halve(&self) -> Option<Self> {
        self.0.iter().all(|x| x % 2 == 0).then(|| PicVector(self.0.map(|x| x / 2)))
    }

    /// Writes the vector as `k·H + Σ aᵢCᵢ` when the `E` coefficient is even,
    /// otherwise in the conic basis.
    pub fn render(&self) -> String {
        let mut terms: Vec<(i64, String)> = Vec::new();
        let e = self.0[0];
        let mut c: [i64; 5] = core::array::from_fn(|i| self.0[i + 1]);
        if e % 2 == 0 && e != 0 {
            let k = e / 2;
            terms.push((k, "H".into()));
            for x in c.iter_mut() {
                *x += k;
            }
        } else if e != 0 {
            terms.push((e, "E".into()));
        }
        for (i, &x) in c.iter().enumerate() {
            if x != 0 {
                terms.push((x, format!("C{i}")));
            }
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, name)) in terms.iter().enumerate() {
            let mag = k.unsigned_abs();
            let body = if mag == 1 { name.clone() } else { format!("{mag}{name}") };
            match (n, *k < 0) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

/// Integer 6×6 matrix acting on column vectors of coordinates.
pub type ActionMatrix = [[i64; RANK]; RANK];

pub fn apply(m: &ActionMatrix, v: &PicVector) -> PicVector {
    PicVector(core::array::from_fn(|i| (0..RANK).map(|j| m[i][j] * v.0[j]).sum()))
}

pub fn compose(a: &ActionMatrix, b: &ActionMatrix) -> ActionMatrix {
    core::array::from_fn(|i| core::array::from_fn(|j| (0..RANK).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn identity_matrix() -> ActionMatrix {
    core::array::from_fn(|i| core::array::from_fn(|j| (i == j) as i64))
}

/// `g = π ∘ σ_I`: exchange the classes over `I`, then move `Cⱼ` to `C_π(j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaElement {
    /// Bit `i` set when `i ∈ I`.
    pub exchanges: u8,
    pub perm: [u8; 5],
}

impl GammaElement {
    pub const IDENTITY: GammaElement = GammaElement { exchanges: 0, perm: [0, 1, 2, 3, 4] };

    pub fn exchange(set: &[usize]) -> Self {
        let mut bits = 0u8;
        for &i in set {
            bits ^= 1 << i;
        }
        GammaElement { exchanges: bits, perm: [0, 1, 2, 3, 4] }
    }

    pub fn permutation(perm: [u8; 5]) -> Self {
        GammaElement { exchanges: 0, perm }
    }

    pub fn exchange_set(&self) -> Vec<usize> {
        (0..5).filter(|i| self.exchanges >> i & 1 == 1).collect()
    }

    pub fn exchange_count(&self) -> usize {
        self.exchanges.count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    fn perm_inverse(&self) -> [u8; 5] {
        let mut inv = [0u8; 5];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = j as u8;
        }
        inv
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Self) -> Self {
        // π σ_I ρ σ_J = (πρ) σ_{ρ⁻¹(I) Δ J}
        let rho_inv = other.perm_inverse();
        let mut moved = 0u8;
        for i in 0..5 {
            if self.exchanges >> i & 1 == 1 {
                moved |= 1 << rho_inv[i];
            }
        }
        let perm = core::array::from_fn(|j| self.perm[other.perm[j] as usize]);
        GammaElement { exchanges: moved ^ other.exchanges, perm }
    }

    pub fn inverse(&self) -> Self {
        // (I, π)⁻¹ = (π(I), π⁻¹)
        let mut moved = 0u8;
        for i in 0..5 {
            if self.exchanges >> i & 1 == 1 {
                moved |= 1 << self.perm[i];
            }
        }
        GammaElement { exchanges: moved, perm: self.perm_inverse() }
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.exchanges != 0 {
            let s: Vec<String> = self.exchange_set().iter().map(|i| format!("{i}")).collect();
            parts.push(format!("x{{{}}}", s.join(",")));
        }
        if self.perm != Self::IDENTITY.perm {
            let s: Vec<String> = self.perm.iter().map(|p| format!("{p}")).collect();
            parts.push(format!("p[{}]", s.join("")));
        }
        if parts.is_empty() {
            return "id".into();
        }
        parts.join(" ")
    }
}

/// Matrix of `g` on the conic basis; needs an even exchange set.
pub fn action_matrix(g: &GammaElement) -> Result<ActionMatrix> {
    let k = g.exchange_count() as i64;
    if k % 2 == 1 {
        return Err(Error::OddExchangeSet(k as usize));
    }
    let h = PicVector::h();
    // images under σ_I
    let mut images = [PicVector::ZERO; RANK];
    let mut e = PicVector::e().scale(1 + k);
    for j in 0..5 {
        let delta = if g.exchanges >> j & 1 == 1 { -1 } else { 1 };
        e = e.add(&PicVector::c(j).scale((delta - (1 + k)) / 2));
    }
    images[0] = e;
    for j in 0..5 {
        images[j + 1] = if g.exchanges >> j & 1 == 1 { h.sub(&PicVector::c(j)) } else { PicVector::c(j) };
    }
    // then π on the C coordinates
    let permute = |v: &PicVector| {
        let mut out = [0i64; RANK];
        out[0] = v.0[0];
        for j in 0..5 {
            out[g.perm[j] as usize + 1] += v.0[j + 1];
        }
        PicVector(out)
    };
    let mut m = [[0i64; RANK]; RANK];
    for (col, img) in images.iter().enumerate() {
        let img = permute(img);
        for row in 0..RANK {
            m[row][col] = img.0[row];
        }
    }
    Ok(m)
}

/// A finite subgroup of the even-exchange group, optionally with the
/// character values that produced each element.
#[derive(Clone, Debug, PartialEq)]
pub struct GaloisImage {
    pub elements: Vec<GammaElement>,
    pub generators: Vec<GammaElement>,
    /// For images built from square classes: the character vector of each element.
    pub characters: Vec<f2::Vector>,
    /// Names of the characters, aligned with the character vectors.
    pub character_names: Vec<String>,
    /// Geometric slot of each locus point (two consecutive slots for a
    /// quadratic point).
    pub slots: Vec<Vec<usize>>,
    matrices: Vec<ActionMatrix>,
}

impl GaloisImage {
    /// Closure of the given elements under composition.
    pub fn generate(generators: &[GammaElement]) -> Result<Self> {
        for g in generators {
            action_matrix(g)?;
        }
        let mut seen: BTreeSet<GammaElement> = BTreeSet::new();
        seen.insert(GammaElement::IDENTITY);
        let mut frontier = vec![GammaElement::IDENTITY];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = g.then_after(&x);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let elements: Vec<GammaElement> = seen.into_iter().collect();
        Self::from_parts(elements, generators.to_vec(), Vec::new(), Vec::new(), (0..5).map(|i| vec![i]).collect())
    }

    fn from_parts(
        mut elements: Vec<GammaElement>,
        generators: Vec<GammaElement>,
        characters: Vec<f2::Vector>,
        character_names: Vec<String>,
        slots: Vec<Vec<usize>>,
    ) -> Result<Self> {
        // identity first, then the fixed order of the element type
        let mut characters = characters;
        if characters.is_empty() {
            elements.sort();
        }
        let matrices = elements.iter().map(action_matrix).collect::<Result<Vec<_>>>()?;
        if characters.len() != elements.len() {
            characters = Vec::new();
        }
        Ok(GaloisImage { elements, generators, characters, character_names, slots, matrices })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(&self, i: usize) -> &ActionMatrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[ActionMatrix] {
        &self.matrices
    }

    pub fn index_of(&self, g: &GammaElement) -> Option<usize> {
        self.elements.iter().position(|x| x == g)
    }

    /// Table `mul[i][j] = index(elements[i] ∘ elements[j])`.
    pub fn multiplication_table(&self) -> Result<Vec<Vec<usize>>> {
        self.elements
            .iter()
            .map(|g| {
                self.elements
                    .iter()
                    .map(|h| self.index_of(&g.then_after(h)).ok_or(Error::NotASubgroupImage))
                    .collect()
            })
            .collect()
    }

    pub fn generator_matrices(&self) -> Vec<ActionMatrix> {
        let gens: Vec<ActionMatrix> = self.generators.iter().filter_map(|g| action_matrix(g).ok()).collect();
        if gens.is_empty() {
            self.matrices.clone()
        } else {
            gens
        }
    }

    pub fn is_subgroup_of(&self, o: &GaloisImage) -> bool {
        self.elements.iter().all(|g| o.index_of(g).is_some())
    }
}

fn sqrt_in_base(x: &RatFunc, mode: ConstantMode) -> Result<Option<RatFunc>> {
    match mode {
        ConstantMode::Gaussian => Ok(x.sqrt()),
        ConstantMode::Cyclotomic => {
            let (lc, core) = x.num().monic();
            let core = RatFunc::new(core, x.den().clone());
            let Some(r) = core.sqrt() else { return Ok(None) };
            let k = lc.sqrt().ok_or(Error::ConstantExtensionRequired)?;
            Ok(Some(r.mul(&RatFunc::constant(0, k))))
        }
    }
}

/// Characters attached to the locus: one per rational point (its ε), two per
/// quadratic point (its residue discriminant, and `Tr ε + 2√N(ε)` which
/// generates the rest of the splitting field when `N(ε)` is a square).
fn characters(locus: &[ClosedPoint], eps: &[FieldElement], ctx: &mut ClassContext) -> Result<(Vec<SquareClass>, Vec<String>)> {
    let mut classes = Vec::new();
    let mut names = Vec::new();
    for (i, t) in locus.iter().enumerate() {
        match t.degree {
            1 => {
                classes.push(ctx.class_of(&eps[i])?);
                names.push(format!("eps{i}"));
            }
            2 => {
                if ctx.field.ext.is_some() {
                    return Err(Error::UnsupportedDegree(format!(
                        "quadratic point {i} over a field that already carries an extension"
                    )));
                }
                let d = t.residue.radicand().ok_or(Error::NoExtensionLayer)?;
                classes.push(ctx.class_of(&FieldElement::base((**d).clone()))?);
                names.push(format!("disc{i}"));
                let e = t.residue.lift(&eps[i])?;
                let n = e.norm();
                let s = sqrt_in_base(&n, ctx.field.mode)?.ok_or_else(|| {
                    Error::UnsupportedDegree(format!("quadratic point {i}: norm of eps is not a square"))
                })?;
                let two_s = s.add(&s);
                let w = match e.trace().add(&two_s) {
                    w if !w.is_zero() => w,
                    _ => e.trace().sub(&two_s),
                };
                classes.push(ctx.class_of(&FieldElement::base(w))?);
                names.push(format!("eps{i}"));
            }
            d => return Err(Error::UnsupportedDegree(format!("point {i} of degree {d}"))),
        }
    }
    Ok((classes, names))
}

/// The image of the absolute Galois group in the conic-class symmetries,
/// read off from the square classes of the discriminants.
pub fn galois_image(locus: &[ClosedPoint], eps: &[FieldElement], ctx: &mut ClassContext) -> Result<GaloisImage> {
    if locus.len() != eps.len() {
        return Err(Error::Invalid("one discriminant per locus point is required".into()));
    }
    let total: usize = locus.iter().map(|t| t.degree).sum();
    if total != 5 {
        return Err(Error::Invalid(format!("locus has total degree {total}, expected 5")));
    }
    let (classes, names) = characters(locus, eps, ctx)?;
    let m = classes.len();
    let relations = ctx.relation_lattice(&classes);
    let chars_basis = f2::kernel(&relations, m);
    // slot layout
    let mut slots = Vec::new();
    let mut next = 0;
    for t in locus {
        slots.push((next..next + t.degree).collect::<Vec<usize>>());
        next += t.degree;
    }
    let element_of = |v: &[u8]| -> GammaElement {
        let mut g = GammaElement::IDENTITY;
        let mut c = 0;
        for (t, s) in locus.iter().zip(&slots) {
            if t.degree == 1 {
                if v[c] == 1 {
                    g.exchanges ^= 1 << s[0];
                }
                c += 1;
            } else {
                if v[c] == 1 {
                    g.perm.swap(s[0], s[1]);
                }
                if v[c + 1] == 1 {
                    g.exchanges ^= (1 << s[0]) | (1 << s[1]);
                }
                c += 2;
            }
        }
        g
    };
    let chars = f2::span_elements(&chars_basis, m);
    let mut pairs: Vec<(f2::Vector, GammaElement)> = chars.into_iter().map(|v| (v.clone(), element_of(&v))).collect();
    pairs.sort_by(|a, b| (f2::weight(&a.0), b.0.clone()).cmp(&(f2::weight(&b.0), a.0.clone())));
    if let Some((v, g)) = pairs.iter().find(|(_, g)| g.exchange_count() % 2 == 1) {
        let odd: Vec<&str> = names.iter().zip(v).filter(|(_, &b)| b == 1).map(|(n, _)| n.as_str()).collect();
        return Err(Error::EvenExchangeViolated(format!(
            "the product of all discriminants is not a square; a Galois element acts by the odd exchange {} (characters {})",
            g.render(),
            odd.join(", ")
        )));
    }
    let generators = chars_basis.iter().map(|v| element_of(v)).collect();
    let (characters, elements): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    GaloisImage::from_parts(elements, generators, characters, names, slots)
}

/// Rows of `M_g − 1` stacked over the generators, as an integer matrix.
fn stacked_minus_identity(mats: &[ActionMatrix]) -> IntMatrix {
    let mut data = Vec::with_capacity(mats.len() * RANK * RANK);
    for m in mats {
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                data.push(x - (i == j) as i64);
            }
        }
    }
    IntMatrix::from_i64(mats.len() * RANK, RANK, &data)
}

fn to_i64(x: &num_bigint::BigInt) -> i64 {
    i64::try_from(x).expect("lattice coordinates fit in i64")
}

/// Basis of `Pic^G`, each vector with positive leading coordinate.
pub fn fixed_sublattice(g: &GaloisImage) -> Vec<PicVector> {
    let a = stacked_minus_identity(&g.generator_matrices());
    let k = intmat::kernel(&a);
    (0..k.cols())
        .map(|j| {
            let mut v = PicVector(core::array::from_fn(|i| to_i64(k.get(i, j))));
            if v.0.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                v = v.scale(-1);
            }
            v
        })
        .collect()
}

/// `(Pic/2)^G` as a basis of F₂-vectors.
pub fn fixed_mod2(g: &GaloisImage) -> Vec<f2::Vector> {
    let mut rows = Vec::new();
    for m in g.generator_matrices() {
        for (i, row) in m.iter().enumerate() {
            rows.push(row.iter().enumerate().map(|(j, &x)| (x - (i == j) as i64).rem_euclid(2) as u8).collect());
        }
    }
    f2::kernel(&rows, RANK)
}

/// Generators of `(Pic/2)^G` modulo the reduction of `Pic^G`, chosen greedily
/// by smallest weight.
pub fn fixed_mod2_quotient(g: &GaloisImage) -> Vec<PicVector> {
    let fixed = fixed_mod2(g);
    let mut span: Vec<f2::Vector> = fixed_sublattice(g).iter().map(|v| v.mod2()).collect();
    let mut candidates = f2::span_elements(&fixed, RANK);
    candidates.sort_by(|x, y| f2::weight(x).cmp(&f2::weight(y)).then_with(|| y.cmp(x)));
    let mut out = Vec::new();
    for c in candidates {
        if !f2::in_span(&span, &c) {
            span.push(c.clone());
            out.push(PicVector::from_mod2(&c));
        }
    }
    out
}
