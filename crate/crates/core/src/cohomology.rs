//! `H¹` of a finite group acting on a lattice, by three routes: the
//! connecting map from `(M/2)^G`, the cyclic formula `ker N / im(1 − σ)`,
//! and the inhomogeneous cochain complex reduced by Smith normal form.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::f2;
use crate::field::FieldElement;
use crate::intmat::{self, IntMatrix};
use crate::pencil::ClosedPoint;
use crate::picard::{GaloisImage, PicVector, RANK};
use crate::squares::ClassContext;

/// Default bound on the group order for the cochain computation.
pub const DEFAULT_GROUP_BOUND: usize = 64;
/// Above this order the cocycle condition is imposed for generators only,
/// which cuts out the same subgroup of cochains.
const FULL_ROWS_UP_TO: usize = 16;

pub type Mat = Vec<Vec<i64>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn mat_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("cochain entries fit in i64")
}

/// A finite group given by its multiplication table, acting on `Z^rank`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupModule {
    pub rank: usize,
    pub mats: Vec<Mat>,
    /// `table[i][j]` is the index of `g_i g_j`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    /// Indices generating the group.
    pub generators: Vec<usize>,
}

impl GroupModule {
    pub fn from_image(g: &GaloisImage) -> Result<Self> {
        let mats = g.matrices().iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect();
        let table = g.multiplication_table()?;
        let identity = g.elements.iter().position(|e| e.is_identity()).ok_or(Error::NotASubgroupImage)?;
        let mut generators: Vec<usize> = g.generators.iter().filter_map(|x| g.index_of(x)).collect();
        if generators.is_empty() {
            generators = (0..g.order()).collect();
        }
        Ok(GroupModule { rank: RANK, mats, table, identity, generators })
    }

    /// A group of matrices, closed under multiplication.
    pub fn from_matrices(mats: Vec<Mat>) -> Result<Self> {
        let rank = mats.first().map_or(0, |m| m.len());
        let find = |m: &Mat| mats.iter().position(|x| x == m);
        let id = identity(rank);
        let identity = find(&id).ok_or(Error::NotASubgroupImage)?;
        let table = mats
            .iter()
            .map(|a| mats.iter().map(|b| find(&mat_mul(a, b)).ok_or(Error::NotASubgroupImage)).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let generators = (0..mats.len()).collect();
        Ok(GroupModule { rank, mats, table, identity, generators })
    }

    /// The cyclic group generated by `sigma`, which must have order dividing `n`.
    pub fn cyclic(sigma: &Mat, n: usize) -> Result<Self> {
        let rank = sigma.len();
        let mut powers = vec![identity(rank)];
        for _ in 1..n {
            powers.push(mat_mul(powers.last().expect("nonempty"), sigma));
        }
        if mat_mul(powers.last().expect("nonempty"), sigma) != identity(rank) {
            return Err(Error::NotFiniteOrder);
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let generators = if n > 1 { vec![1] } else { vec![0] };
        Ok(GroupModule { rank, mats: powers, table, identity: 0, generators })
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    /// `δ m : g ↦ g m − m`.
    pub fn coboundary(&self, m: &[i64]) -> Cocycle {
        Cocycle {
            values: self.mats.iter().map(|g| mat_vec(g, m).iter().zip(m).map(|(x, y)| x - y).collect()).collect(),
        }
    }

    /// Integer kernel of the stacked `g − 1`.
    pub fn fixed_lattice(&self) -> Vec<Vec<i64>> {
        let k = intmat::kernel(&self.stacked_minus_identity(&self.generators));
        (0..k.cols()).map(|j| k.column(j).iter().map(to_i64).collect()).collect()
    }

    fn stacked_minus_identity(&self, idx: &[usize]) -> IntMatrix {
        let r = self.rank;
        let mut data = Vec::with_capacity(idx.len() * r * r);
        for &g in idx {
            for i in 0..r {
                for j in 0..r {
                    data.push(self.mats[g][i][j] - (i == j) as i64);
                }
            }
        }
        IntMatrix::from_i64(idx.len() * r, r, &data)
    }

    /// `(M/2)^G`.
    pub fn fixed_mod2(&self) -> Vec<f2::Vector> {
        let mut rows = Vec::new();
        for &g in &self.generators {
            for i in 0..self.rank {
                rows.push((0..self.rank).map(|j| (self.mats[g][i][j] - (i == j) as i64).rem_euclid(2) as u8).collect());
            }
        }
        f2::kernel(&rows, self.rank)
    }
}

/// Values of a 1-cochain, aligned with the group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub values: Vec<Vec<i64>>,
}

impl Cocycle {
    pub fn zero(m: &GroupModule) -> Self {
        Cocycle { values: vec![vec![0; m.rank]; m.order()] }
    }

    pub fn add(&self, o: &Self) -> Self {
        Cocycle {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// `α(gh) = α(g) + g·α(h)` for every pair.
    pub fn is_cocycle(&self, m: &GroupModule) -> bool {
        (0..m.order()).all(|g| {
            (0..m.order()).all(|h| {
                let gh = m.table[g][h];
                let rhs: Vec<i64> = mat_vec(&m.mats[g], &self.values[h]).iter().zip(&self.values[g]).map(|(x, y)| x + y).collect();
                self.values[gh] == rhs
            })
        })
    }

    /// `m` with `α = δm`, if the cocycle is a coboundary.
    pub fn coboundary_witness(&self, m: &GroupModule) -> Option<Vec<i64>> {
        let all: Vec<usize> = (0..m.order()).collect();
        let a = m.stacked_minus_identity(&all);
        let b: Vec<BigInt> = self.values.iter().flatten().map(|&x| BigInt::from(x)).collect();
        intmat::solve(&a, &b).map(|x| x.iter().map(to_i64).collect())
    }

    pub fn is_coboundary(&self, m: &GroupModule) -> bool {
        self.coboundary_witness(m).is_some()
    }

    pub fn value(&self, i: usize) -> PicVector {
        PicVector(core::array::from_fn(|k| self.values[i][k]))
    }
}

/// A finitely generated abelian group `Z^free ⊕ ⊕ Z/dᵢ` with cocycle
/// representatives of its generators.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyGroup {
    pub invariant_factors: Vec<u64>,
    pub free_rank: usize,
    pub generators: Vec<Cocycle>,
}

impl CohomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }

    /// Number of cyclic factors of even order, i.e. the 2-rank of the torsion.
    pub fn two_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| *d % 2 == 0).count()
    }

    pub fn render(&self) -> alloc::string::String {
        let mut parts: Vec<alloc::string::String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }
}

/// `Z^r / im B` as invariant factors and basis columns (in the `P⁻¹` basis).
fn quotient(b: &IntMatrix) -> (Vec<u64>, usize, Vec<Vec<BigInt>>) {
    let r = b.rows();
    let s = intmat::smith(b);
    let mut factors = Vec::new();
    let mut gens = Vec::new();
    let mut free = 0;
    for i in 0..r {
        match s.diag.get(i) {
            Some(d) if d.is_one() => {}
            Some(d) if !d.is_zero() => {
                factors.push(u64::try_from(d).expect("small invariant factor"));
                gens.push(s.p_inv.column(i));
            }
            _ => {
                free += 1;
                gens.push(s.p_inv.column(i));
            }
        }
    }
    (factors, free, gens)
}

/// `ker A / im C` for `A C = 0`: the kernel basis comes from a column echelon
/// of `A`, and `im C` is rewritten in that basis.
fn homology(a: &IntMatrix, c: &IntMatrix) -> (Vec<u64>, usize, Vec<Vec<i64>>) {
    let e = intmat::column_echelon(a);
    let k = e.v.columns_from(e.rank);
    let coords = e.v_inv.mul(c);
    let r = k.cols();
    let mut b = IntMatrix::zero(r, c.cols());
    for i in 0..r {
        for j in 0..c.cols() {
            b.set(i, j, coords.get(e.rank + i, j).clone());
        }
    }
    let (factors, free, gens) = quotient(&b);
    let vecs = gens.iter().map(|g| k.mul_vec(g).iter().map(to_i64).collect()).collect();
    (factors, free, vecs)
}

fn split_cochain(v: &[i64], rank: usize) -> Cocycle {
    Cocycle { values: v.chunks(rank).map(|c| c.to_vec()).collect() }
}

/// `H¹` from the cochain complex `M → M^G → M^(G×G)`.
pub fn h1_full_module(m: &GroupModule, bound: usize) -> Result<CohomologyGroup> {
    let n = m.order();
    if n > bound {
        return Err(Error::GroupTooLarge { order: n, bound });
    }
    let r = m.rank;
    let right: Vec<usize> = if n <= FULL_ROWS_UP_TO { (0..n).collect() } else { m.generators.clone() };
    // d¹α(g, h) = g α(h) − α(gh) + α(g)
    let mut d1 = IntMatrix::zero(n * right.len() * r, n * r);
    let mut row = 0;
    for g in 0..n {
        for &h in &right {
            let gh = m.table[g][h];
            for i in 0..r {
                for j in 0..r {
                    let x = m.mats[g][i][j];
                    if x != 0 {
                        let cur = d1.get(row + i, h * r + j).clone();
                        d1.set(row + i, h * r + j, cur + x);
                    }
                }
                let cur = d1.get(row + i, gh * r + i).clone();
                d1.set(row + i, gh * r + i, cur - 1);
                let cur = d1.get(row + i, g * r + i).clone();
                d1.set(row + i, g * r + i, cur + 1);
            }
            row += r;
        }
    }
    // d⁰m(g) = g m − m
    let mut d0 = IntMatrix::zero(n * r, r);
    for g in 0..n {
        for i in 0..r {
            for j in 0..r {
                d0.set(g * r + i, j, BigInt::from(m.mats[g][i][j] - (i == j) as i64));
            }
        }
    }
    let (factors, free, gens) = homology(&d1, &d0);
    let generators = gens.iter().map(|v| split_cochain(v, r)).collect();
    Ok(CohomologyGroup { invariant_factors: factors, free_rank: free, generators })
}

pub fn h1_full(g: &GaloisImage) -> Result<CohomologyGroup> {
    h1_full_module(&GroupModule::from_image(g)?, DEFAULT_GROUP_BOUND)
}

/// `ker N / im(1 − σ)` for the cyclic group generated by `sigma`.
pub fn h1_cyclic(sigma: &Mat, n: usize) -> Result<CohomologyGroup> {
    let m = GroupModule::cyclic(sigma, n)?;
    let r = m.rank;
    let mut norm = vec![vec![0i64; r]; r];
    for p in &m.mats {
        for i in 0..r {
            for j in 0..r {
                norm[i][j] += p[i][j];
            }
        }
    }
    let flat = |a: &Mat| a.iter().flatten().copied().collect::<Vec<i64>>();
    let nmat = IntMatrix::from_i64(r, r, &flat(&norm));
    let one_minus: Mat = (0..r).map(|i| (0..r).map(|j| (i == j) as i64 - sigma[i][j]).collect()).collect();
    let cmat = IntMatrix::from_i64(r, r, &flat(&one_minus));
    let (factors, free, gens) = homology(&nmat, &cmat);
    // α(σ^k) = (1 + σ + … + σ^(k−1)) x
    let generators = gens
        .iter()
        .map(|x| {
            let mut values = Vec::with_capacity(n);
            let mut acc = vec![0i64; r];
            for p in &m.mats {
                values.push(acc.clone());
                acc = acc.iter().zip(mat_vec(p, x)).map(|(a, b)| a + b).collect();
            }
            Cocycle { values }
        })
        .collect();
    Ok(CohomologyGroup { invariant_factors: factors, free_rank: free, generators })
}

/// `H¹[2]` as the image of `(M/2)^G` under `D ↦ (σ ↦ ½(d − σd))`.
pub fn h1_two_torsion_module(m: &GroupModule) -> Result<CohomologyGroup> {
    let fixed = m.fixed_mod2();
    let mut span: Vec<f2::Vector> = m
        .fixed_lattice()
        .iter()
        .map(|v| v.iter().map(|x| x.rem_euclid(2) as u8).collect())
        .collect();
    let mut candidates = f2::span_elements(&fixed, m.rank);
    candidates.sort_by(|x, y| f2::weight(x).cmp(&f2::weight(y)).then_with(|| y.cmp(x)));
    let mut generators = Vec::new();
    for c in candidates {
        if f2::in_span(&span, &c) {
            continue;
        }
        span.push(c.clone());
        generators.push(connecting_cocycle(m, &c)?);
    }
    Ok(CohomologyGroup { invariant_factors: vec![2; generators.len()], free_rank: 0, generators })
}

/// `σ ↦ ½(d − σd)` for the 0/1 lift `d` of a fixed vector mod 2.
pub fn connecting_cocycle(m: &GroupModule, d: &[u8]) -> Result<Cocycle> {
    let d: Vec<i64> = d.iter().map(|&x| x as i64).collect();
    let mut values = Vec::with_capacity(m.order());
    for g in &m.mats {
        let gd = mat_vec(g, &d);
        let mut v = Vec::with_capacity(m.rank);
        for (x, y) in d.iter().zip(&gd) {
            let diff = x - y;
            if diff % 2 != 0 {
                return Err(Error::NonIntegralLift);
            }
            v.push(diff / 2);
        }
        values.push(v);
    }
    let c = Cocycle { values };
    if !c.is_cocycle(m) {
        return Err(Error::NonIntegralLift);
    }
    Ok(c)
}

pub fn h1_two_torsion(g: &GaloisImage) -> Result<CohomologyGroup> {
    h1_two_torsion_module(&GroupModule::from_image(g)?)
}

/// A cocycle restricted to a subgroup, with its triviality there.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    pub cocycle: Cocycle,
    pub trivial: bool,
}

pub fn restriction_map(g: &GaloisImage, h: &GaloisImage, alpha: &Cocycle) -> Result<Restriction> {
    let idx = h
        .elements
        .iter()
        .map(|x| g.index_of(x).ok_or(Error::NotASubgroupImage))
        .collect::<Result<Vec<usize>>>()?;
    let cocycle = Cocycle { values: idx.iter().map(|&i| alpha.values[i].clone()).collect() };
    let hm = GroupModule::from_image(h)?;
    let trivial = cocycle.is_coboundary(&hm);
    Ok(Restriction { cocycle, trivial })
}

/// The cocycle attached to a degree-two subscheme satisfying (*).
#[derive(Clone, Debug, PartialEq)]
pub struct SubschemeCocycle {
    pub subscheme: Vec<usize>,
    pub cocycle: Cocycle,
    /// `Σ Cᵢ` over the geometric points of the subscheme.
    pub divisor: PicVector,
    /// Triviality in `H¹`, decided by coboundary solvability.
    pub trivial: bool,
    /// Triviality decided mod 2: `Σ Cᵢ ∈ 2 Pic + Pic^G`.
    pub trivial_mod2: bool,
    /// Triviality predicted by the discriminants outside the subscheme.
    pub trivial_by_eps: bool,
}

/// `σ ↦ −H + Σ_{𝒯} Cᵢ` on elements that move `√ε` of the subscheme, `0`
/// elsewhere.
pub fn subscheme_cocycle(
    subscheme: &[usize],
    locus: &[ClosedPoint],
    eps: &[FieldElement],
    g: &GaloisImage,
    ctx: &mut ClassContext,
) -> Result<SubschemeCocycle> {
    let star = crate::pencil::star_subschemes(locus, eps, &ctx.field)?;
    let mut sorted = subscheme.to_vec();
    sorted.sort();
    if !star.contains(&sorted) {
        return Err(Error::StarViolated(format!("subscheme {sorted:?} is not among {star:?}")));
    }
    let slots: Vec<usize> = sorted.iter().flat_map(|&i| g.slots[i].clone()).collect();
    let divisor = slots.iter().fold(PicVector::ZERO, |acc, &s| acc.add(&PicVector::c(s)));
    let value = divisor.sub(&PicVector::h());
    let values = g
        .elements
        .iter()
        .map(|x| if x.exchanges >> slots[0] & 1 == 1 { value.0.to_vec() } else { vec![0; RANK] })
        .collect();
    let cocycle = Cocycle { values };
    let m = GroupModule::from_image(g)?;
    if !cocycle.is_cocycle(&m) {
        return Err(Error::StarViolated("cocycle condition fails".into()));
    }
    let trivial = cocycle.is_coboundary(&m);
    let span: Vec<f2::Vector> = crate::picard::fixed_sublattice(g).iter().map(|v| v.mod2()).collect();
    let trivial_mod2 = f2::in_span(&span, &divisor.mod2());
    let mut trivial_by_eps = true;
    for (i, t) in locus.iter().enumerate() {
        if sorted.contains(&i) {
            continue;
        }
        let square = if t.degree == 1 { ctx.field.is_square(&eps[i])? } else { t.residue.is_square(&eps[i])? };
        if !square {
            trivial_by_eps = false;
        }
    }
    Ok(SubschemeCocycle { subscheme: sorted, cocycle, divisor, trivial, trivial_mod2, trivial_by_eps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::GammaElement;

    #[test]
    fn sign_and_swap() {
        let sign = vec![vec![-1]];
        let h = h1_cyclic(&sign, 2).unwrap();
        assert_eq!(h.invariant_factors, vec![2]);
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert!(h1_cyclic(&swap, 2).unwrap().is_trivial());
        assert_eq!(h1_cyclic(&swap, 3), Err(Error::NotFiniteOrder));
        let m = GroupModule::cyclic(&sign, 2).unwrap();
        assert_eq!(h1_two_torsion_module(&m).unwrap().invariant_factors, vec![2]);
        assert_eq!(h1_full_module(&m, 64).unwrap().invariant_factors, vec![2]);
    }

    #[test]
    fn minus_identity_on_z2() {
        let g = GroupModule::from_matrices(vec![vec![vec![1, 0], vec![0, 1]], vec![vec![-1, 0], vec![0, -1]]]).unwrap();
        let h = h1_full_module(&g, 64).unwrap();
        assert_eq!(h.invariant_factors, vec![2, 2]);
        for c in &h.generators {
            assert!(c.is_cocycle(&g));
            assert!(!c.is_coboundary(&g));
        }
    }

    #[test]
    fn trivial_group() {
        let g = GaloisImage::generate(&[]).unwrap();
        assert!(h1_full(&g).unwrap().is_trivial());
        assert!(h1_two_torsion(&g).unwrap().is_trivial());
    }

    #[test]
    fn exchange_pair_alone_has_trivial_h1() {
        let g = GaloisImage::generate(&[GammaElement::exchange(&[0, 1])]).unwrap();
        let sigma = g.matrix(1).iter().map(|r| r.to_vec()).collect::<Mat>();
        let d = PicVector::c(0).add(&PicVector::c(1)).sub(&PicVector::h());
        let m = GroupModule::from_image(&g).unwrap();
        let nd: Vec<i64> = mat_vec(&sigma, &d.0).iter().zip(&d.0).map(|(a, b)| a + b).collect();
        assert!(nd.iter().all(|&x| x == 0));
        let alpha = Cocycle { values: vec![vec![0; 6], d.0.to_vec()] };
        // On the whole lattice D = (1 − σ)E, so this cocycle is a coboundary.
        assert!(alpha.is_cocycle(&m));
        let w = alpha.coboundary_witness(&m).unwrap();
        assert_eq!(m.coboundary(&w), alpha);
        let h = h1_cyclic(&sigma, 2).unwrap();
        let full = h1_full_module(&m, 64).unwrap();
        assert_eq!(h.invariant_factors, full.invariant_factors);
        assert!(h.is_trivial());
    }
}
