//! Cayley graphs on the coset spaces of PGL2(F_q) by its three abelian
//! subgroups (unipotent, split torus, nonsplit torus), their adjacency
//! spectra, and independent closed-form eigenvalue predictions built from
//! character sums, Gauss sums, and Kirillov-model representation matrices.
//!
//! The library certifies, at desk scale, that the K- and U-families are
//! Ramanujan and the A-family is almost Ramanujan (every nontrivial
//! eigenvalue bounded by 2*sqrt(q)).

pub mod cayley;
pub mod characters;
pub mod cli;
pub mod error;
pub mod field;
pub mod kirillov;
pub mod pgl2;
pub mod predicted;
pub mod spectra;

pub use error::{Error, Result};
