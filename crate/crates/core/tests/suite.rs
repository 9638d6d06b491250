mod common;

use common::group;
use selfcup_core::perm::PermGroup;
use selfcup_core::suite::{coset_module, criterion, grid_cells, grid_groups, CRITERIA};
use selfcup_core::Zm;

#[test]
fn grid_groups_have_the_expected_orders() {
    let orders: Vec<(&str, usize)> = grid_groups().unwrap().iter().map(|(n, g)| (*n, g.order())).collect();
    assert_eq!(
        orders,
        vec![("Z2", 2), ("Z3", 3), ("Z4", 4), ("Klein", 4), ("S3", 6), ("D4", 8), ("Q8", 8), ("S4", 24)]
    );
    // Q8: a single involution, six elements of order 4
    let q8 = &grid_groups().unwrap()[6].1;
    let orders: Vec<usize> = (0..8).map(|g| q8.element_order(g)).collect();
    assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
    assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
}

#[test]
fn coset_modules_are_permutation_modules() {
    let s3 = group(3, "(1 2 3), (1 2)");
    let stab = PermGroup::closure(3, &[s3.generators()[1].clone()]).unwrap();
    let m = coset_module(&s3, &stab, Zm::F2).unwrap();
    assert_eq!(m.dim(), 3);
    m.verify_homomorphism().unwrap();
    let z3 = group(3, "(1 2 3)");
    assert!(coset_module(&s3, &z3, Zm::F2).is_ok());
    assert!(coset_module(&z3, &stab, Zm::F2).is_err());
}

#[test]
fn grid_covers_every_group_and_module_kind() {
    let cells = grid_cells().unwrap();
    for (name, _) in grid_groups().unwrap() {
        let mods: Vec<&str> = cells.iter().filter(|c| c.group == name).map(|c| c.module.as_str()).collect();
        assert!(mods.contains(&"trivial F2"), "{name}");
        assert!(mods.contains(&"trivial Z/4"), "{name}");
        assert!(mods.iter().any(|m| m.starts_with("W0")), "{name}");
        assert!(mods.iter().any(|m| m.ends_with("F3")), "{name}");
    }
    assert!(cells.iter().all(|c| c.data.dim() <= 4 || c.module.starts_with("W0")));
}

#[test]
fn criteria_are_numbered() {
    for id in CRITERIA {
        let c = criterion(id).unwrap();
        assert_eq!(c.id, id);
        assert!(!c.tasks.is_empty());
    }
    assert!(criterion(11).is_err());
}
