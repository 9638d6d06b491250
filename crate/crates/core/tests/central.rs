mod common;

use std::sync::Arc;

use common::{group, z2, zm};
use selfcup_core::central::{BElement, CentralExt};
use selfcup_core::cohomology::{connecting1, CohomologyOptions, ShortExactSequence, H1, H2};
use selfcup_core::linalg::Matrix;
use selfcup_core::{Error, GModule, PermGroup};

/// `C = (Z/m)^2`, with the first generator swapping coordinates if asked.
fn plane(g: &Arc<PermGroup>, m: u32, swapping: bool) -> GModule {
    let ring = zm(m);
    let mats: Vec<Matrix> = (0..g.generators().len())
        .map(|k| if swapping && k == 0 { Matrix::from_row_major(2, 2, &[0, 1, 1, 0], ring) } else { Matrix::identity(2) })
        .collect();
    GModule::new(g.clone(), ring, 2, &mats).unwrap()
}

fn line(g: &Arc<PermGroup>, m: u32, sign: bool) -> GModule {
    let scalars: Vec<i64> = (0..g.generators().len()).map(|k| if sign && k == 0 { -1 } else { 1 }).collect();
    GModule::character(g.clone(), zm(m), &scalars).unwrap()
}

fn dihedral(g: &Arc<PermGroup>) -> CentralExt {
    CentralExt::new(line(g, 2, false), plane(g, 2, false), |c, d| vec![c[0] * d[1]]).unwrap()
}

fn cyclic4(g: &Arc<PermGroup>) -> CentralExt {
    CentralExt::new(line(g, 2, false), line(g, 2, false), |c, d| vec![c[0] * d[0]]).unwrap()
}

/// `f = 2 (c1 d2 - c2 d1)` over F3; equivariant for the swap on `C` when `A`
/// carries the sign.
fn heisenberg(g: &Arc<PermGroup>, swapping: bool) -> CentralExt {
    CentralExt::new(line(g, 3, swapping), plane(g, 3, swapping), |c, d| {
        vec![((2 * (c[0] as i32 * d[1] as i32 - c[1] as i32 * d[0] as i32)).rem_euclid(3)) as u8]
    })
    .unwrap()
}

fn split(g: &Arc<PermGroup>, swapping: bool) -> CentralExt {
    CentralExt::new(line(g, 2, false), plane(g, 2, swapping), |_, _| vec![0]).unwrap()
}

#[test]
fn cyclic_extension_has_an_element_of_order_four() {
    let e = cyclic4(&z2());
    assert_eq!(e.order(), 4);
    assert_eq!(e.element_order(&e.section(&[1])).unwrap(), 4);
    assert!(e.commutator_pairing().unwrap().is_zero());
}

#[test]
fn dihedral_extension() {
    let e = dihedral(&z2());
    assert_eq!(e.order(), 8);
    let pairing = e.commutator_pairing().unwrap();
    assert_eq!(pairing.eval(&[1, 0], &[0, 1]), vec![1]);
    assert_eq!(pairing.eval(&[0, 1], &[1, 0]), vec![1]);
    assert!(pairing.is_alternating());
    // D4 has five involutions and two elements of order four
    let mut orders = vec![0usize; 5];
    for a in 0..2u8 {
        for c0 in 0..2u8 {
            for c1 in 0..2u8 {
                orders[e.element_order(&BElement { a: vec![a], c: vec![c0, c1] }).unwrap()] += 1;
            }
        }
    }
    assert_eq!(orders, vec![0, 1, 5, 0, 2]);
}

#[test]
fn heisenberg_pairing_is_the_standard_symplectic_form() {
    let e = heisenberg(&z2(), false);
    assert_eq!(e.order(), 27);
    let p = e.commutator_pairing().unwrap();
    assert_eq!(p.eval(&[1, 0], &[0, 1]), vec![1]);
    assert_eq!(p.eval(&[0, 1], &[1, 0]), vec![2]);
    for x in 0..9u8 {
        let c = [x % 3, x / 3];
        assert_eq!(e.element_order(&e.section(&c)).unwrap(), if x == 0 { 1 } else { 3 });
    }
}

#[test]
fn invalid_factor_sets_are_rejected() {
    let g = z2();
    let not_cocycle = CentralExt::new(line(&g, 2, false), plane(&g, 2, false), |c, d| vec![c[0] * d[0] * d[1]]);
    assert!(matches!(not_cocycle, Err(Error::Validation(_))));
    let unnormalized = CentralExt::new(line(&g, 2, false), line(&g, 2, false), |_, _| vec![1]);
    assert!(unnormalized.is_err());
    let not_equivariant = CentralExt::new(line(&g, 2, false), plane(&g, 2, true), |c, d| vec![c[0] * d[1]]);
    assert!(not_equivariant.is_err());
    let e = dihedral(&g);
    assert!(e.mul(&BElement { a: vec![2], c: vec![0, 0] }, &e.identity()).is_err());
}

#[test]
fn group_law() {
    let e = heisenberg(&z2(), true);
    let elems: Vec<BElement> = (0..27u8)
        .map(|k| BElement { a: vec![k % 3], c: vec![(k / 3) % 3, k / 9] })
        .collect();
    for x in &elems {
        assert_eq!(e.mul(x, &e.inv(x).unwrap()).unwrap(), e.identity());
        for y in elems.iter().step_by(4) {
            for z in elems.iter().step_by(5) {
                let lhs = e.mul(&e.mul(x, y).unwrap(), z).unwrap();
                let rhs = e.mul(x, &e.mul(y, z).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
            for k in 0..2 {
                assert_eq!(e.act(k, &e.mul(x, y).unwrap()), e.mul(&e.act(k, x), &e.act(k, y)).unwrap());
            }
        }
    }
}

#[test]
fn connecting_map_basic_cases() {
    let g = z2();
    let e = split(&g, true);
    let h1 = H1::new(e.quotient());
    let h2 = H2::new(e.kernel());
    for gamma in h1.space(&CohomologyOptions::default()).classes {
        assert!(h2.is_coboundary(&e.nonabelian_connecting(&gamma).unwrap()));
    }
    let e = cyclic4(&g);
    let zero = selfcup_core::cohomology::Cochain::zero(e.quotient(), 1);
    assert!(e.nonabelian_connecting(&zero).unwrap().is_zero());
    let gamma = H1::new(e.quotient()).expand(&[1]);
    let q = e.nonabelian_connecting(&gamma).unwrap();
    assert!(!h2.is_coboundary(&q));
    // against the abelian connecting map of 0 -> Z/2 -> Z/4 -> Z/2 -> 0
    let ses = ShortExactSequence::new(
        line(&g, 2, false),
        line(&g, 4, false),
        line(&g, 2, false),
        Matrix::from_row_major(1, 1, &[2], zm(4)),
        Matrix::from_row_major(1, 1, &[1], zm(2)),
    )
    .unwrap();
    assert!(h2.cohomologous(&q, &connecting1(&ses, &gamma).unwrap()).is_some());
}

#[test]
fn abelian_extensions_give_additive_connecting_maps() {
    for g in [z2(), group(3, "(1 2 3)"), group(4, "(1 2)(3 4), (1 3)(2 4)")] {
        let e = cyclic4(&g);
        let classes = H1::new(e.quotient()).space(&CohomologyOptions::default()).classes;
        for a in &classes {
            for b in &classes {
                let v = e.commutator_identity_check(a, b).unwrap();
                assert!(v.defect_is_coboundary && v.matches_minus && v.matches_plus);
            }
        }
    }
}

#[test]
fn commutator_identity_on_small_groups() {
    let klein = group(4, "(1 2)(3 4), (1 3)(2 4)");
    let z3 = group(3, "(1 2 3)");
    let mut cases: Vec<(String, CentralExt)> = Vec::new();
    for (name, g) in [("Z2", z2()), ("Z3", z3.clone()), ("Klein", klein.clone())] {
        cases.push((format!("dihedral {name}"), dihedral(&g)));
        cases.push((format!("heisenberg {name}"), heisenberg(&g, false)));
        cases.push((format!("split {name}"), split(&g, false)));
        if name != "Z3" {
            cases.push((format!("heisenberg swap {name}"), heisenberg(&g, true)));
            cases.push((format!("split swap {name}"), split(&g, true)));
        }
    }
    let mut nontrivial = 0;
    for (name, e) in &cases {
        let classes = H1::new(e.quotient()).space(&CohomologyOptions::default()).classes;
        for a in &classes {
            for b in &classes {
                let v = e.commutator_identity_check(a, b).unwrap();
                assert!(v.matches_minus, "{name}");
                nontrivial += usize::from(!v.defect_is_coboundary);
            }
        }
    }
    assert!(nontrivial > 0);
}

/// On `Z/3 x Z/3` acting trivially the cup term of two independent classes
/// has order three, so only one sign can hold.
#[test]
fn heisenberg_sign_over_rank_two_group() {
    let g = group(6, "(1 2 3), (4 5 6)");
    let e = heisenberg(&g, false);
    let h1 = H1::new(e.quotient());
    let classes = h1.space(&CohomologyOptions::default()).classes;
    assert_eq!(classes.len(), 81);
    let mut detectable = 0;
    let mut plus = 0;
    let mut minus = 0;
    for a in &classes {
        for b in &classes {
            let v = e.commutator_identity_check(a, b).unwrap();
            assert!(v.matches_minus || v.matches_plus);
            if v.sign_detectable() {
                detectable += 1;
                plus += usize::from(v.matches_plus);
                minus += usize::from(v.matches_minus);
            }
        }
    }
    assert!(detectable > 0);
    // with q, the cup product and [c, c'] = f(c, c') - f(c', c) as defined
    // here, the defect is +[g1 u g2]
    assert_eq!((plus, minus), (detectable, 0));
}

#[test]
fn both_orderings_pass() {
    let e = dihedral(&group(4, "(1 2)(3 4), (1 3)(2 4)"));
    let classes = H1::new(e.quotient()).space(&CohomologyOptions::default()).classes;
    for a in &classes {
        for b in &classes {
            assert_eq!(
                e.commutator_identity_check(a, b).unwrap().matches_minus,
                e.commutator_identity_check(b, a).unwrap().matches_minus
            );
        }
    }
}
