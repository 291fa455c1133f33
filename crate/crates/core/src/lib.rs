//! Exact computations in the bounded homotopy category of projectives over
//! the Nakayama algebras `A(r,N)`.

pub mod catalog;
pub mod complex;
pub mod error;
pub mod exactlin;
pub mod homotopy;
mod idsyntax;
pub mod json;
pub mod pathalg;
pub mod pseudofunctor;
pub mod spanmorph;
pub mod verify;
