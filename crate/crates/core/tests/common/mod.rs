#![allow(dead_code)]

use std::sync::Arc;

use selfcup_core::cohomology::{coboundary, Cochain};
use selfcup_core::linalg::{kernel, Echelon, Matrix};
use selfcup_core::perm::{group_closure, parse_generators};
use selfcup_core::{GModule, PermGroup, Zm};

pub fn group(n: usize, gens: &str) -> Arc<PermGroup> {
    let gens = parse_generators(gens, Some(n)).unwrap();
    Arc::new(group_closure(n, &gens).unwrap())
}

pub fn z2() -> Arc<PermGroup> {
    group(2, "(1 2)")
}

pub fn zm(m: u32) -> Zm {
    Zm::new(m).unwrap()
}

/// Basis cochain with a single nonzero coordinate.
fn unit_cochain(module: &GModule, degree: usize, slot: usize) -> Cochain {
    let d = module.dim();
    let mut k = 0usize;
    Cochain::from_fn(module, degree, |_| {
        let mut v = vec![0u8; d];
        if k / d == slot / d {
            v[slot % d] = 1;
        }
        k += d;
        v
    })
}

/// `(log |Z^k|, log |B^k|)` from the full bar complex.
pub fn brute_force_dims(module: &GModule, degree: usize) -> (u32, u32) {
    let ring = module.ring();
    let n = module.group().order();
    let d = module.dim();
    let c_len = |k: usize| (n - 1).pow(k as u32) * d;
    let image_cols = |k: usize| -> Vec<Vec<u8>> {
        (0..c_len(k))
            .map(|slot| coboundary(module, &unit_cochain(module, k, slot)).unwrap().values().to_vec())
            .collect()
    };
    // Z^k: kernel of d_k
    let dk = Matrix::from_columns(c_len(degree + 1), &image_cols(degree));
    let rows: Vec<Vec<u8>> = (0..dk.rows()).map(|i| dk.row(i).to_vec()).collect();
    let mut z = Echelon::new(ring, c_len(degree));
    for v in kernel(ring, c_len(degree), &rows) {
        z.insert(&v);
    }
    let mut b = Echelon::new(ring, c_len(degree));
    for col in image_cols(degree - 1) {
        b.insert(&col);
    }
    (z.log_order(), b.log_order())
}
