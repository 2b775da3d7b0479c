//! Quotients of Heisenberg groups over finite fields.
//!
//! The crate builds the central quotients `H(F_q)/N` of codimension two as
//! class-two, exponent-`p` groups presented by pencils of matrices over `Z_p`,
//! computes the adjoint algebras of their commutation maps, classifies them up
//! to isomorphism through the action of the semilinear group on `H'`, and
//! checks subgroup and quotient profiles against brute-force enumeration.
//!
//! Modules are layered bottom-up:
//!
//! - [`ff`]: prime fields, polynomials and extension fields `F_{p^e}`
//! - [`linal`]: exact dense linear algebra over `Z_p`
//! - [`brahana`]: groups `B(L_1, ..., L_g)` and homomorphisms between them
//! - [`tensoradj`]: adjoint algebras, tensor spaces and the genus-two test
//! - [`heisenberg`]: `H(F_q)`, its codimension-two quotients and automorphisms
//! - [`isotest`]: isomorphism tests, canonical labels and classification
//! - [`profile`]: subgroup enumeration, fingerprints and profile formulas

pub mod brahana;
pub mod error;
pub mod ff;
pub mod heisenberg;
pub mod isotest;
pub mod linal;
pub mod profile;
pub mod tensoradj;

pub use error::{Error, Result};
