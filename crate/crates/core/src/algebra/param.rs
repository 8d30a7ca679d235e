//! Parametrizations (φ(t), ψ(t)) and evaluation of y-polynomials along them.

use super::field::FieldSpec;
use super::series::{Order, Series};
use super::ypoly::YPolynomial;
use crate::error::{Error, Result};

/// A pair of series in t without constant terms, known modulo t^precision.
/// Whether the pair is a good parametrization of a given curve is the
/// caller's responsibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    phi: Series,
    psi: Series,
    precision: u64,
}

impl Parametrization {
    pub fn new(phi: Series, psi: Series, precision: u64) -> Result<Parametrization> {
        phi.field().check(&psi.field())?;
        if phi.is_exact_zero() && psi.is_exact_zero() {
            return Err(Error::Degree("parametrization with both components zero".into()));
        }
        if !phi.constant_term().is_zero() || !psi.constant_term().is_zero() {
            return Err(Error::Degree("parametrization components must vanish at t = 0".into()));
        }
        Ok(Parametrization {
            phi: phi.truncate(precision),
            psi: psi.truncate(precision),
            precision,
        })
    }

    pub fn phi(&self) -> &Series {
        &self.phi
    }

    pub fn psi(&self) -> &Series {
        &self.psi
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn field(&self) -> FieldSpec {
        self.phi.field()
    }
}

/// g(φ(t), ψ(t)) modulo t^B with truncated coefficients of g propagated.
pub fn eval_param(g: &YPolynomial, par: &Parametrization) -> Series {
    let b = par.precision;
    let field = par.field();
    let ord_phi = par.phi.order().lower_bound();
    // powers of φ, computed lazily
    let mut powers: Vec<Series> = vec![Series::one(field).truncate(b)];
    let mut acc = Series::zero_to(field, b);
    for c in g.coeffs().iter().rev() {
        let mut cj = Series::zero_to(field, b);
        for (e, v) in c.terms() {
            if ord_phi.map_or(*e > 0, |o| o.saturating_mul(*e) >= b) {
                continue;
            }
            while powers.len() <= *e as usize {
                let next = powers.last().unwrap().mul_trunc(&par.phi, b);
                powers.push(next);
            }
            cj = cj.add(&powers[*e as usize].scale(v));
        }
        if let Some(pj) = c.precision() {
            if let Some(o) = ord_phi {
                cj = cj.truncate(pj.saturating_mul(o));
            }
        }
        acc = acc.mul_trunc(&par.psi, b).add(&cj);
    }
    acc
}

/// ord_t g(φ,ψ); `AtLeast` when truncation hides the answer.
pub fn eval_order(g: &YPolynomial, par: &Parametrization) -> Order {
    eval_param(g, par).order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tpoly(f: FieldSpec, terms: &[(u64, i64)]) -> Series {
        Series::from_terms(f, terms.iter().map(|(e, c)| (*e, f.from_i64(*c))), None)
    }

    #[test]
    fn substitution_examples() {
        let q = FieldSpec::rationals();
        let par = Parametrization::new(tpoly(q, &[(2, 1)]), tpoly(q, &[(3, 1)]), 40).unwrap();
        assert_eq!(eval_order(&YPolynomial::y(q), &par), Order::Finite(3));
        let cusp = YPolynomial::from_terms(q, &[(1, 0, 2), (-1, 3, 0)]);
        assert_eq!(eval_order(&cusp, &par), Order::AtLeast(40));
    }

    #[test]
    fn example_a_key_value() {
        let f3 = FieldSpec::prime(3).unwrap();
        let par = Parametrization::new(tpoly(f3, &[(3, 1), (8, 1)]), tpoly(f3, &[(9, 1)]), 50).unwrap();
        let g = YPolynomial::from_terms(f3, &[(1, 0, 1), (-1, 3, 0), (1, 8, 0)]);
        assert_eq!(eval_order(&g, &par), Order::Finite(29));
    }

    #[test]
    fn rejects_constant_terms() {
        let q = FieldSpec::rationals();
        assert!(Parametrization::new(tpoly(q, &[(0, 1)]), tpoly(q, &[(1, 1)]), 5).is_err());
        assert!(Parametrization::new(Series::zero(q), Series::zero(q), 5).is_err());
    }
}
