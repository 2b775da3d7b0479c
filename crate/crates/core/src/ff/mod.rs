//! Finite fields: `Z_p`, polynomials over `Z_p`, and `F_{p^e} = Z_p[t]/(m(t))`.
//!
//! Elements of `Z_p` are plain `u32` values in `[0, p)` interpreted through a
//! [`Zp`] context. Extension field elements are coordinate vectors on the
//! power basis `1, w, ..., w^{e-1}` where `w` is the class of `t`.

mod field;
mod poly;
mod prime;

pub use field::{FqElem, FqField};
pub use poly::{find_irreducible, Poly};
pub use prime::{is_prime, Zp};
