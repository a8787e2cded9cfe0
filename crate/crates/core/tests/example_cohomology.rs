mod common;

use std::time::Instant;

use common::*;
use dp4_core::cohomology::*;
use dp4_core::picard::*;
use dp4_core::squares::ClassContext;

fn image(field: &dp4_core::field::FieldDescriptor) -> (GaloisImage, ClassContext) {
    let (locus, eps) = example_locus(field);
    let mut ctx = ClassContext::new(field).unwrap();
    (galois_image(&locus, &eps, &mut ctx).unwrap(), ctx)
}

#[test]
fn image_over_k() {
    let (g, _) = image(&k());
    assert_eq!(g.order(), 8);
    for x in &g.elements {
        let v: Vec<usize> = (0..5).map(|i| (x.exchanges >> i & 1) as usize).collect();
        assert_eq!(v[0], v[1]);
        assert_eq!((v[2] + v[3] + v[4]) % 2, 0);
        assert_eq!(x.perm, [0, 1, 2, 3, 4]);
    }
}

#[test]
fn lattice_invariants() {
    for field in [k(), l()] {
        let (g, _) = image(&field);
        assert_eq!(fixed_sublattice(&g), vec![PicVector::h()]);
        assert_eq!(fixed_mod2_quotient(&g), vec![PicVector::c(0).add(&PicVector::c(1))]);
        let fixed: Vec<PicVector> = fixed_mod2(&g).iter().map(|v| PicVector::from_mod2(v)).collect();
        assert_eq!(fixed.len(), 2);
    }
}

#[test]
fn h1_routes_agree_and_restrict() {
    let (gk, _) = image(&k());
    let (gl, _) = image(&l());
    assert!(gl.is_subgroup_of(&gk));
    for g in [&gk, &gl] {
        let two = h1_two_torsion(g).unwrap();
        let start = Instant::now();
        let full = h1_full(g).unwrap();
        assert!(start.elapsed().as_secs() < 30);
        assert_eq!(two.invariant_factors, vec![2]);
        assert_eq!(full.invariant_factors, vec![2]);
        assert_eq!(full.free_rank, 0);
    }
    let alpha = &h1_two_torsion(&gk).unwrap().generators[0];
    let res = restriction_map(&gk, &gl, alpha).unwrap();
    assert!(!res.trivial);
}

#[test]
fn subscheme_cocycles() {
    for field in [k(), l()] {
        let (locus, eps) = example_locus(&field);
        let mut ctx = ClassContext::new(&field).unwrap();
        let g = galois_image(&locus, &eps, &mut ctx).unwrap();
        let s = subscheme_cocycle(&[0, 1], &locus, &eps, &g, &mut ctx).unwrap();
        assert!(!s.trivial && !s.trivial_mod2 && !s.trivial_by_eps);
        assert_eq!(s.divisor.sub(&PicVector::h()).render(), "-H + C0 + C1");
        assert!(subscheme_cocycle(&[2, 3], &locus, &eps, &g, &mut ctx).is_err());
    }
}
