mod common;

use std::sync::Arc;

use common::group;
use selfcup_core::cohomology::{check_affine_axioms, AffineGSet, CohomologyOptions};
use selfcup_core::linalg::Echelon;
use selfcup_core::perm::PermGroup;
use selfcup_core::theta::{
    build_theta, build_theta_from_generators, jacobian_identity_check, local_report, theta_class, weil_pairing,
    SubsetClass,
};
use selfcup_core::Zm;

const S6: &str = "(1 2 3 4 5 6), (1 2)";
const KLEIN_EXAMPLE: &str = "(1 2)(5 6), (3 4)(5 6)";

#[test]
fn sizes_and_axioms() {
    let data = build_theta_from_generators(2, S6).unwrap();
    assert_eq!(data.w0().dim(), 4);
    assert_eq!(data.torsor().point_count(), 16);
    check_affine_axioms(data.torsor()).unwrap();
    assert!(data.e2().is_alternating());
    let mut ech = Echelon::new(Zm::F2, 4);
    for i in 0..4 {
        ech.insert(data.gram().row(i));
    }
    assert_eq!(ech.len(), 4);
    assert!(build_theta_from_generators(2, "(1 2)").is_ok());
    assert!(build_theta(2, group(5, "(1 2)")).is_err());
    assert!(build_theta(0, group(2, "(1 2)")).is_err());
}

#[test]
fn subset_classes() {
    let s = SubsetClass::from_indices(6, &[0, 5]).unwrap();
    assert_eq!(s.indices(), vec![1, 2, 3, 4]);
    assert_eq!(s, SubsetClass::from_indices(6, &[1, 2, 3, 4]).unwrap());
    assert!(SubsetClass::new(6, 1 << 6).is_err());
    let a = SubsetClass::from_indices(6, &[0, 1]).unwrap();
    let b = SubsetClass::from_indices(6, &[1, 2]).unwrap();
    assert_eq!(a.sum(&b), SubsetClass::from_indices(6, &[0, 2]).unwrap());
}

#[test]
fn weil_pairing_values() {
    let empty = SubsetClass::new(6, 0).unwrap();
    assert_eq!(weil_pairing(&empty, &empty).unwrap(), 0);
    let a = SubsetClass::from_indices(6, &[0, 1]).unwrap();
    let b = SubsetClass::from_indices(6, &[1, 2]).unwrap();
    assert_eq!(weil_pairing(&a, &b).unwrap(), 1);
    let odd = SubsetClass::from_indices(6, &[0]).unwrap();
    assert!(weil_pairing(&a, &odd).is_err());
    // representative independence: pair with raw complements
    for x in 0..32u32 {
        for y in 0..32u32 {
            let (sx, sy) = (SubsetClass::new(6, x).unwrap(), SubsetClass::new(6, y).unwrap());
            if sx.parity() == 0 && sy.parity() == 0 {
                let direct = (x & y).count_ones() % 2;
                let complement = ((x ^ 63) & y).count_ones() % 2;
                assert_eq!(direct, complement);
                assert_eq!(weil_pairing(&sx, &sy).unwrap() as u32, direct);
            }
        }
    }
}

#[test]
fn pairing_is_equivariant_and_matches_coordinates() {
    let data = build_theta_from_generators(2, S6).unwrap();
    let evens: Vec<SubsetClass> =
        (0..32u32).map(|m| SubsetClass::new(6, m).unwrap()).filter(|s| s.parity() == 0).collect();
    for s in &evens {
        for t in &evens {
            let v = weil_pairing(s, t).unwrap();
            let coords = data.e2().eval(&data.w0_coords(s).unwrap(), &data.w0_coords(t).unwrap());
            assert_eq!(coords, vec![v]);
            for p in data.group().generators() {
                assert_eq!(weil_pairing(&s.permute(p), &t.permute(p)).unwrap(), v);
            }
        }
    }
}

#[test]
fn torsor_classes_of_the_examples() {
    let trivial = build_theta(2, Arc::new(PermGroup::trivial(6))).unwrap();
    let c = theta_class(&trivial).unwrap();
    assert!(c.trivial && c.fixed_points.len() == 16);

    let klein = build_theta_from_generators(2, KLEIN_EXAMPLE).unwrap();
    let c = theta_class(&klein).unwrap();
    assert!(!c.trivial && c.fixed_points.is_empty());

    let s6 = build_theta_from_generators(2, S6).unwrap();
    assert!(!theta_class(&s6).unwrap().trivial);

    // a fixed root gives a fixed theta characteristic
    let stabilizer = build_theta_from_generators(2, "(1 2 3 4 5), (1 2)").unwrap();
    let c = theta_class(&stabilizer).unwrap();
    assert!(c.trivial);
    assert!(c.fixed_points.contains(&SubsetClass::from_indices(6, &[5]).unwrap()));
}

#[test]
fn odd_genus_torsor_is_trivial() {
    let data = build_theta_from_generators(1, "(1 2 3 4), (1 2)").unwrap();
    assert!(theta_class(&data).unwrap().trivial);
    // S8 exceeds the default order cap
    assert!(matches!(
        build_theta_from_generators(3, "(1 2 3 4 5 6 7 8), (1 2)"),
        Err(selfcup_core::Error::TooLarge { .. })
    ));
    let data = build_theta_from_generators(3, "(1 2 3 4 5 6 7 8), (1 8)(2 7)(3 6)(4 5)").unwrap();
    assert!(theta_class(&data).unwrap().trivial);
}

#[test]
fn s6_local_report() {
    let data = build_theta_from_generators(2, S6).unwrap();
    let report = local_report(&data).unwrap();
    assert_eq!(report.rows.len(), 11);
    assert!(report.rows.iter().all(|r| r.trivial && r.fixed_points > 0));
    assert!(!report.globally_trivial);
    assert!(report.sha_style);
}

#[test]
fn klein_example_is_not_locally_trivial_everywhere() {
    let data = build_theta_from_generators(2, KLEIN_EXAMPLE).unwrap();
    let report = local_report(&data).unwrap();
    assert!(!report.globally_trivial);
    assert!(report.rows.iter().all(|r| r.trivial));
}

#[test]
fn jacobian_identity_small_cases() {
    let opts = CohomologyOptions::default();
    for gens in ["(1 2)", KLEIN_EXAMPLE, "(1 2 3 4 5 6)", "(1 2 3)(4 5 6), (1 4)(2 5)(3 6)"] {
        let data = build_theta_from_generators(2, gens).unwrap();
        let v = jacobian_identity_check(&data, &opts).unwrap();
        assert!(v.cup_checked && v.exhaustive && v.passed(), "{gens}: {v:?}");
    }
    let data = build_theta_from_generators(2, S6).unwrap();
    let v = jacobian_identity_check(&data, &opts).unwrap();
    assert!(v.cup_checked && v.passed(), "{v:?}");
}

#[test]
fn transposition_has_no_odd_self_cup() {
    // c_T = 0 forces e2(x u x) = 0 for every x
    let data = build_theta_from_generators(2, "(1 2)").unwrap();
    let v = jacobian_identity_check(&data, &CohomologyOptions::default()).unwrap();
    assert!(v.c_t_trivial && v.passed());
}
