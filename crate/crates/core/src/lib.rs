//! Exact invariants of plane algebroid branches over F_p and Q.
//!
//! Characteristic sequences and their semigroups, intersection
//! multiplicities, approximate roots and key polynomials, relative Newton
//! polygons with Abhyankar's irreducibility test, synthesis of branches with
//! a prescribed semigroup, and polar factorizations.

pub mod algebra;
pub mod approot;
pub mod error;
pub mod factor;
pub mod intersection;
pub mod newton;
pub mod semigroup;
pub mod synth;

pub use algebra::{FieldSpec, FieldValue, Order, Parametrization, Series, YPolynomial};
pub use error::{Error, Result};
