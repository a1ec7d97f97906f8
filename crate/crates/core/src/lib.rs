//! Exact integral-lattice arithmetic for moduli-of-sheaves computations.
//!
//! Everything here runs over arbitrary-precision integers and rationals;
//! there is no floating point anywhere. The crate is `no_std` + `alloc`
//! so the arithmetic core can be embedded wherever it is needed; the
//! companion CLI crate carries the IO.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classify;
pub mod fujiki;
pub mod lattice;
pub mod mat;
pub mod mukai;
pub mod snf;
pub mod walls;

pub use lattice::{
    invariants, is_primitive, primitive_scale, standard_lattice, DiscriminantGroup, Lattice,
    LatticeError, Signature, StandardLattice, Sublattice,
};
pub use mat::IntMat;
pub use snf::{left_kernel, row_hnf, smith_normal_form};
