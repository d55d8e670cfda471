//! Exact computation of traces of Hecke operators on Drinfeld cusp forms of
//! level 1 over F_q[T], together with the isogeny-class counts they depend on
//! and tools for analysing the resulting Hecke spectra.

pub mod combinat;
pub mod error;
pub mod gf;
pub mod isogeny;
pub mod polyring;
pub mod spectra;
pub mod traces;
mod text;

pub use error::{Error, Result};
pub use gf::{Elem, FieldDesc};
pub use polyring::{Degree, PolyA, PolyAX, UPoly};
