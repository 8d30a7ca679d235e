//! Exact coefficient fields, truncated power series and polynomials in y
//! over series, with division, expansion, preparation and evaluation.

mod field;
mod hensel;
mod param;
mod series;
mod upoly;
mod ypoly;

pub use field::{FieldSpec, FieldValue};
pub use hensel::{hensel_split, weierstrass_prepare};
pub use param::{eval_order, eval_param, Parametrization};
pub use series::{Order, Series};
pub use upoly::UPoly;
pub use ypoly::YPolynomial;

/// Default working precision 4·n² + 16 for a polynomial of y-degree n.
pub fn default_precision(n: usize) -> u64 {
    4 * (n as u64) * (n as u64) + 16
}
