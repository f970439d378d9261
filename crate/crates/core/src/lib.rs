//! Exact presentations of algebraic cobordism and Chow rings of flag bundles.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact graded polynomials over ℚ, truncation, substitution and
//!   degreewise row reduction.
//! * [`fgl`]: the rational Lazard ring in logarithm coordinates, formal group
//!   laws, n-series and first Chern classes of torus characters.
//! * [`weyl`]: classical root data, Weyl group enumeration, parabolic
//!   subgroups and fundamental invariants.
//! * [`coinv`]: the coinvariant algebra `S/I` with normal forms, pairing and
//!   invariant extraction.
//! * [`bundle`]: ring presentations of flag bundles and principal bundles.
//! * [`oracle`]: independent recomputation routes used for verification.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod bundle;
pub mod coinv;
pub mod error;
pub mod fgl;
pub mod oracle;
pub mod poly;
pub mod weyl;

pub use error::{Error, Result};
