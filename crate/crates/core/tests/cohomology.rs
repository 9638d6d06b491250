mod common;

use std::sync::Arc;

use common::{brute_force_dims, group, z2, zm};
use proptest::prelude::*;
use selfcup_core::cohomology::{
    coboundary, cohomology_space, connecting1, connecting1_shifted, cup11, cup11_with, is_cocycle, restrict_class,
    torsor_class, Cochain, CohClass, CohomologyOptions, CupConvention, ShortExactSequence, Translation, H1, H2,
};
use selfcup_core::linalg::Matrix;
use selfcup_core::{GModule, PermGroup, Zm};

fn dims(module: &GModule) -> (u32, u32) {
    let opts = CohomologyOptions::default();
    let h1 = cohomology_space(module, 1, &opts).unwrap();
    let h2 = cohomology_space(module, 2, &opts).unwrap();
    (h1.log_h, h2.log_h)
}

fn sample_modules() -> Vec<(&'static str, GModule)> {
    let s3 = group(3, "(1 2 3), (1 2)");
    let d4 = group(4, "(1 2 3 4), (1 3)");
    let klein = group(4, "(1 2)(3 4), (1 3)(2 4)");
    let z4 = group(4, "(1 2 3 4)");
    vec![
        ("Z2 trivial F2", GModule::trivial(z2(), Zm::F2, 1)),
        ("Z2 swap", GModule::permutation(z2(), Zm::F2, &[0, 1]).unwrap()),
        ("Z2 sign F3", GModule::character(z2(), zm(3), &[-1]).unwrap()),
        ("Z4 trivial Z4", GModule::trivial(z4.clone(), zm(4), 1)),
        ("Z4 sign Z4", GModule::character(z4, zm(4), &[-1]).unwrap()),
        ("S3 perm F2", GModule::permutation(s3.clone(), Zm::F2, &[0, 1, 2]).unwrap()),
        ("S3 trivial F3", GModule::trivial(s3, zm(3), 1)),
        ("Klein trivial F2", GModule::trivial(klein.clone(), Zm::F2, 1)),
        ("Klein perm F2", GModule::permutation(klein, Zm::F2, &[0, 1, 2, 3]).unwrap()),
        ("D4 trivial F2", GModule::trivial(d4, Zm::F2, 1)),
    ]
}

#[test]
fn classical_small_cases() {
    assert_eq!(dims(&GModule::trivial(z2(), Zm::F2, 1)), (1, 1));
    let trivial = Arc::new(PermGroup::trivial(3));
    assert_eq!(dims(&GModule::trivial(trivial, Zm::F2, 2)), (0, 0));
    assert_eq!(dims(&GModule::trivial(group(3, "(1 2 3)"), Zm::F2, 1)), (0, 0));
    // D4 with F2 coefficients: H^1 of dimension 2, H^2 of dimension 3
    assert_eq!(dims(&GModule::trivial(group(4, "(1 2 3 4), (1 3)"), Zm::F2, 1)), (2, 3));
}

#[test]
fn dimensions_agree_with_full_bar_complex() {
    let opts = CohomologyOptions::default();
    for (name, m) in sample_modules() {
        for k in 1..=2 {
            let space = cohomology_space(&m, k, &opts).unwrap();
            let (z, b) = brute_force_dims(&m, k);
            assert_eq!((space.log_z, space.log_b, space.log_h), (z, b, z - b), "{name}, degree {k}");
        }
    }
}

#[test]
fn enumerated_classes_are_cocycles_and_distinct() {
    let opts = CohomologyOptions::default();
    for (name, m) in sample_modules() {
        for k in 1..=2 {
            let space = cohomology_space(&m, k, &opts).unwrap();
            assert!(space.exhaustive);
            let expected = (m.ring().prime() as usize).pow(space.log_h);
            assert_eq!(space.classes.len(), expected, "{name}, degree {k}");
            for c in &space.classes {
                assert!(is_cocycle(&m, c).unwrap(), "{name}");
            }
            for (i, a) in space.classes.iter().enumerate() {
                for b in &space.classes[i + 1..] {
                    let diff = a.sub(b);
                    let distinct = match k {
                        1 => !H1::new(&m).is_coboundary(&diff),
                        _ => !H2::new(&m).is_coboundary(&diff),
                    };
                    assert!(distinct, "{name}: repeated class in degree {k}");
                }
            }
        }
    }
}

#[test]
fn h2_cap_is_enforced() {
    let s4 = group(4, "(1 2 3 4), (1 2)");
    let m = GModule::trivial(s4, Zm::F2, 1);
    let opts = CohomologyOptions {
        h2_cap: 10,
        ..CohomologyOptions::default()
    };
    assert!(cohomology_space(&m, 2, &opts).is_err());
}

#[test]
fn sampling_beyond_threshold_is_seeded() {
    let klein = group(4, "(1 2)(3 4), (1 3)(2 4)");
    let m = GModule::trivial(klein, Zm::F2, 4);
    let opts = CohomologyOptions {
        exhaustive_limit: 16,
        sample_count: 10,
        ..CohomologyOptions::default()
    };
    let a = cohomology_space(&m, 1, &opts).unwrap();
    let b = cohomology_space(&m, 1, &opts).unwrap();
    assert_eq!(a.log_h, 8);
    assert!(!a.exhaustive);
    assert_eq!(a.classes.len(), 10);
    assert_eq!(a.classes, b.classes);
}

#[test]
fn coboundary_examples() {
    let m = GModule::trivial(z2(), Zm::F2, 1);
    let zero = Cochain::zero(&m, 1);
    assert!(coboundary(&m, &zero).unwrap().is_zero());
    let v = Cochain::from_fn(&m, 0, |_| vec![1]);
    assert!(coboundary(&m, &v).unwrap().is_zero());
    let c = Cochain::from_fn(&m, 1, |_| vec![1]);
    // (dc)(s, s) = c(s) - c(e) + c(s) = 0 over F2
    assert_eq!(coboundary(&m, &c).unwrap().get(&[1, 1]), &[0]);
    let c3 = Cochain::zero(&m, 3);
    assert!(coboundary(&m, &c3).is_err());
}

#[test]
fn cup_square_on_z2_is_nonzero() {
    let m = GModule::trivial(z2(), Zm::F2, 1);
    let x = Cochain::from_fn(&m, 1, |_| vec![1]);
    let sq = cup11(&m, &x, &m, &x).unwrap();
    assert_eq!(sq.get(&[1, 1]), &[1]);
    let mm = m.tensor_square();
    assert!(!H2::new(&mm).is_coboundary(&sq));
    // exhaustive check: the only 1-cochains are 0 and x
    for u in [Cochain::zero(&mm, 1), Cochain::from_fn(&mm, 1, |_| vec![1])] {
        assert_ne!(coboundary(&mm, &u).unwrap(), sq);
    }
    let zero = Cochain::zero(&m, 1);
    assert!(cup11(&m, &zero, &m, &x).unwrap().is_zero());
}

#[test]
fn cup_rejects_non_cocycles() {
    let m = GModule::permutation(z2(), Zm::F2, &[0, 1]).unwrap();
    let bad = Cochain::from_fn(&m, 1, |_| vec![1, 0]);
    assert!(cup11(&m, &bad, &m, &bad).is_err());
}

#[test]
fn cup_is_a_cocycle_and_bilinear() {
    let opts = CohomologyOptions::default();
    for (name, m) in sample_modules() {
        let classes = cohomology_space(&m, 1, &opts).unwrap().classes;
        let mm = m.tensor_square();
        for a in &classes {
            for b in &classes {
                let ab = cup11(&m, a, &m, b).unwrap();
                assert!(is_cocycle(&mm, &ab).unwrap(), "{name}");
                for c in &classes {
                    let lhs = cup11(&m, &a.add(c), &m, b).unwrap();
                    let rhs = ab.add(&cup11(&m, c, &m, b).unwrap());
                    assert_eq!(lhs, rhs, "{name}");
                }
            }
        }
    }
}

#[test]
fn ignoring_the_action_changes_the_class() {
    let opts = CohomologyOptions::default();
    let mut report = Vec::new();
    let mut modules = sample_modules();
    modules.push(("S4 perm", GModule::permutation(group(4, "(1 2 3 4), (1 2)"), Zm::F2, &[0, 1, 2, 3]).unwrap()));
    modules.push(("D4 perm", GModule::permutation(group(4, "(1 2 3 4), (1 3)"), Zm::F2, &[0, 1, 2, 3]).unwrap()));
    modules.push(("Z4 perm", GModule::permutation(group(4, "(1 2 3 4)"), Zm::F2, &[0, 1, 2, 3]).unwrap()));
    modules.push(("Z4 swap", GModule::permutation(group(4, "(1 2)(3 4)"), Zm::F2, &[0, 1]).unwrap()));
    modules.push(("Z4 on swap", GModule::new(group(4, "(1 2 3 4)"), Zm::F2, 2, &[Matrix::from_row_major(2, 2, &[0, 1, 1, 0], Zm::F2)]).unwrap()));
    for (name, m) in modules {
        let mm = m.tensor_square();
        for x in cohomology_space(&m, 1, &opts).unwrap().classes {
            let good = cup11(&m, &x, &m, &x).unwrap();
            let bad = cup11_with(CupConvention::IgnoreAction, &m, &x, &m, &x).unwrap();
            if H2::new(&mm).cohomologous(&good, &bad).is_none() {
                report.push((name, is_cocycle(&mm, &bad).unwrap()));
            }
        }
    }
    assert!(!report.is_empty());
}

#[test]
fn coboundary_witnesses() {
    let opts = CohomologyOptions::default();
    for (name, m) in sample_modules() {
        let h2 = H2::new(&m);
        let c = cohomology_space(&m, 2, &opts).unwrap().classes.pop().unwrap();
        let w = h2.cohomologous(&c, &c).unwrap();
        assert!(coboundary(&m, &w).unwrap().is_zero(), "{name}");
        let u0 = Cochain::from_fn(&m, 1, |args| {
            (0..m.dim()).map(|i| ((args[0] * 7 + i * 3) % m.ring().modulus() as usize) as u8).collect()
        });
        let du = coboundary(&m, &u0).unwrap();
        let u = h2.coboundary_witness(&du).unwrap();
        assert_eq!(coboundary(&m, &u).unwrap(), du, "{name}");
    }
}

#[test]
fn bockstein_sequence_detects_the_square() {
    let g = z2();
    let a = GModule::trivial(g.clone(), Zm::F2, 1);
    let b = GModule::trivial(g.clone(), zm(4), 1);
    let ses = ShortExactSequence::new(
        a.clone(),
        b,
        a.clone(),
        Matrix::from_row_major(1, 1, &[2], zm(4)),
        Matrix::from_row_major(1, 1, &[1], Zm::F2),
    )
    .unwrap();
    let x = Cochain::from_fn(&a, 1, |_| vec![1]);
    let delta = connecting1(&ses, &x).unwrap();
    assert!(!H2::new(&a).is_coboundary(&delta));
    let sq = cup11(&a, &x, &a, &x).unwrap();
    assert!(H2::new(&a).cohomologous(&delta, &sq).is_some());
}

#[test]
fn non_exact_data_is_rejected() {
    let g = z2();
    let a = GModule::trivial(g.clone(), Zm::F2, 1);
    let b = GModule::trivial(g.clone(), Zm::F2, 2);
    let inj = Matrix::from_row_major(2, 1, &[1, 0], Zm::F2);
    let surj = Matrix::from_row_major(1, 2, &[1, 0], Zm::F2);
    assert!(ShortExactSequence::new(a.clone(), b.clone(), a.clone(), inj, surj).is_err());
    // a Z/2 -> Z/4 map sending 1 to 1 is not well defined
    let b4 = GModule::trivial(g, zm(4), 1);
    let bad = Matrix::from_row_major(1, 1, &[1], zm(4));
    let surj = Matrix::from_row_major(1, 1, &[1], Zm::F2);
    assert!(ShortExactSequence::new(a.clone(), b4, a, bad, surj).is_err());
}

#[test]
fn connecting_map_is_lift_independent_and_kills_liftable_classes() {
    // 0 -> F2 -> F2[Z2] -> F2 -> 0 for Z/2 acting by swap on the middle
    let g = group(2, "(1 2)");
    let a = GModule::trivial(g.clone(), Zm::F2, 1);
    let b = GModule::permutation(g.clone(), Zm::F2, &[0, 1]).unwrap();
    let ses = ShortExactSequence::new(
        a.clone(),
        b,
        a.clone(),
        Matrix::from_row_major(2, 1, &[1, 1], Zm::F2),
        Matrix::from_row_major(1, 2, &[1, 1], Zm::F2),
    )
    .unwrap();
    let x = Cochain::from_fn(&a, 1, |_| vec![1]);
    let delta = connecting1(&ses, &x).unwrap();
    let shift = Cochain::from_fn(&a, 1, |args| vec![(args[0] % 2) as u8]);
    let other = connecting1_shifted(&ses, &x, Some(&shift)).unwrap();
    assert!(H2::new(&a).cohomologous(&delta, &other).is_some());
    // H^2 of the induced module vanishes, so delta is nonzero by exactness
    assert!(!H2::new(&a).is_coboundary(&delta));
    let zero = Cochain::zero(&a, 1);
    assert!(connecting1(&ses, &zero).unwrap().is_zero());
}

#[test]
fn connecting_map_commutes_with_restriction() {
    let g = group(4, "(1 2)(3 4), (1 3)(2 4)");
    let a = GModule::trivial(g.clone(), Zm::F2, 1);
    let b = GModule::trivial(g.clone(), zm(4), 1);
    let inj = Matrix::from_row_major(1, 1, &[2], zm(4));
    let surj = Matrix::from_row_major(1, 1, &[1], Zm::F2);
    let ses = ShortExactSequence::new(a.clone(), b, a.clone(), inj.clone(), surj.clone()).unwrap();
    let sub = Arc::new(g.subgroup(&[g.generators()[0].clone()]).unwrap());
    let a_h = a.restrict(&sub).unwrap();
    let ses_h = ShortExactSequence::new(
        a_h.clone(),
        GModule::trivial(sub.clone(), zm(4), 1),
        a_h.clone(),
        inj,
        surj,
    )
    .unwrap();
    for x in cohomology_space(&a, 1, &CohomologyOptions::default()).unwrap().classes {
        let (_, lhs) = restrict_class(&a, &connecting1(&ses, &x).unwrap(), &sub).unwrap();
        let (_, xh) = restrict_class(&a, &x, &sub).unwrap();
        let rhs = connecting1(&ses_h, &xh).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn translation_torsor_is_trivial() {
    let s3 = group(3, "(1 2 3), (1 2)");
    let m = GModule::permutation(s3, Zm::F2, &[0, 1, 2]).unwrap();
    let t = Translation::new(m).unwrap();
    selfcup_core::cohomology::check_affine_axioms(&t).unwrap();
    let class = torsor_class(&t).unwrap();
    assert!(class.trivial);
    assert!(class.fixed_points.contains(&0));
}

#[test]
fn classes_restrict_to_zero_on_the_trivial_group() {
    let m = GModule::trivial(z2(), Zm::F2, 1);
    let x = CohClass::new(m.clone(), Cochain::from_fn(&m, 1, |_| vec![1])).unwrap();
    assert!(!x.is_zero());
    let whole = x.restrict(m.group()).unwrap();
    assert!(whole.same_class(&x));
    let triv = Arc::new(PermGroup::trivial(2));
    assert!(x.restrict(&triv).unwrap().is_zero());
    assert!(CohClass::new(m.clone(), Cochain::from_fn(&m, 2, |_| vec![1])).is_ok());
    let perm = GModule::permutation(z2(), Zm::F2, &[0, 1]).unwrap();
    assert!(CohClass::new(perm.clone(), Cochain::from_fn(&perm, 1, |_| vec![1, 0])).is_err());
}

fn module_strategy() -> impl Strategy<Value = (GModule, u64)> {
    (0usize..4, any::<u64>()).prop_map(|(i, seed)| (sample_modules()[i * 2 + 1].1.clone(), seed))
}

fn pseudo_cochain(m: &GModule, degree: usize, seed: u64) -> Cochain {
    let mut state = seed | 1;
    Cochain::from_fn(m, degree, |_| {
        (0..m.dim())
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % m.ring().modulus() as u64) as u8
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes((m, seed) in module_strategy(), degree in 0usize..2) {
        let c = pseudo_cochain(&m, degree, seed);
        let dd = coboundary(&m, &coboundary(&m, &c).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn coboundaries_are_recognized((m, seed) in module_strategy()) {
        let u = pseudo_cochain(&m, 1, seed);
        let du = coboundary(&m, &u).unwrap();
        let w = H2::new(&m).coboundary_witness(&du);
        prop_assert!(w.is_some());
        let v = pseudo_cochain(&m, 0, seed);
        let dv = coboundary(&m, &v).unwrap();
        prop_assert!(H1::new(&m).is_coboundary(&dv));
    }
}
