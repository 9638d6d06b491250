//! Finite group cohomology with explicit cocycles.
//!
//! The crate works with finite permutation groups, modules over `Z/m` for a
//! small prime power `m`, and normalized bar-resolution cochains. On top of
//! that it implements the extension `UM` of a module by its tensor square,
//! central extensions with their commutator pairing, obstruction classes of
//! bilinear forms, and a combinatorial model of the 2-torsion and theta
//! characteristics of hyperelliptic Jacobians.
//!
//! Everything here is `no_std` + `alloc`; file formats, the command line and
//! parallel drivers live in the `selfcup` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod central;
pub mod cohomology;
pub mod error;
pub mod galois;
pub mod gmodule;
pub mod linalg;
pub mod perm;
pub mod ring;
pub mod suite;
pub mod theta;
pub mod ucons;

pub use error::{Error, Result};
pub use gmodule::{GModule, ModVector};
pub use perm::{Perm, PermGroup};
pub use ring::Zm;
