//! Finite p-groups, F_p-modules and their low-degree cohomology, with a
//! constructive search for non-inner automorphisms of order p.

pub mod cohomology;
pub mod error;
pub mod extensions;
pub mod fp_linalg;
pub mod gmodule;
pub mod group;
pub mod noninner;

pub use error::{Error, Result};
