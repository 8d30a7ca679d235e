//! Hensel lifting over K[[x]] and the Weierstrass preparation built on it.

use super::field::FieldValue;
use super::series::Series;
use super::upoly::UPoly;
use super::ypoly::YPolynomial;
use crate::error::{Error, Result};

/// Expansion f = Σ_k x^k F_k(y) for k < b.
fn x_slices(f: &YPolynomial, b: u64) -> Vec<Vec<FieldValue>> {
    let field = f.field();
    let width = f.coeffs().len();
    let mut out = vec![vec![field.zero(); width]; b as usize];
    for (j, c) in f.coeffs().iter().enumerate() {
        for (e, v) in c.terms() {
            if *e < b {
                out[*e as usize][j] = v.clone();
            }
        }
    }
    out
}

fn assemble(field: super::field::FieldSpec, slices: &[UPoly], width: usize, b: u64, monic_top: Option<usize>) -> YPolynomial {
    let mut buckets: Vec<Vec<(u64, FieldValue)>> = vec![Vec::new(); width];
    for (k, s) in slices.iter().enumerate() {
        for (j, v) in s.coeffs.iter().enumerate() {
            if !v.is_zero() {
                buckets[j].push((k as u64, v.clone()));
            }
        }
    }
    let coeffs = buckets
        .into_iter()
        .enumerate()
        .map(|(j, t)| {
            if Some(j) == monic_top {
                Series::one(field)
            } else {
                Series::from_terms(field, t, Some(b))
            }
        })
        .collect();
    YPolynomial::new(field, coeffs)
}

fn to_residues(u: &UPoly) -> Vec<u64> {
    u.coeffs.iter().map(|c| c.residue().unwrap()).collect()
}

/// Σ_{0<i<k} G_i·H_{k−i} over F_p on plain residues.
fn convolve_mod(parts: &[(Vec<u64>, Vec<u64>)], k: usize, p: u64) -> Vec<FieldValue> {
    // below 2^16 every product is < 2^32, so 2^32 of them fit in a slot
    let lazy = p < 1 << 16;
    let mut pending = 0u64;
    let mut acc: Vec<u64> = Vec::new();
    for i in 1..k {
        let (g, h) = (&parts[i].0, &parts[k - i].1);
        if g.is_empty() || h.is_empty() {
            continue;
        }
        pending += g.len().min(h.len()) as u64;
        if lazy && pending >= 1 << 31 {
            acc.iter_mut().for_each(|v| *v %= p);
            pending = g.len().min(h.len()) as u64;
        }
        if acc.len() < g.len() + h.len() - 1 {
            acc.resize(g.len() + h.len() - 1, 0);
        }
        for (a, x) in g.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (b, y) in h.iter().enumerate() {
                let slot = &mut acc[a + b];
                if lazy {
                    *slot += x * y;
                } else {
                    *slot = (*slot + x * y) % p;
                }
            }
        }
    }
    acc.into_iter().map(|v| FieldValue::Mod { v: v % p, p }).collect()
}

/// Lift a coprime factorization f(0,y) = g0·h0 with g0 monic to
/// f ≡ G·H mod x^b, G monic with G(0,y) = g0 and H(0,y) = h0.
///
/// The achieved precision is min(b, precision of f).
pub fn hensel_split(f: &YPolynomial, g0: &UPoly, h0: &UPoly, b: u64) -> Result<(YPolynomial, YPolynomial)> {
    let field = f.field();
    let b = f.precision().map_or(b, |p| p.min(b));
    if b == 0 {
        return Err(Error::Precision("nothing known about f(0,y)".into()));
    }
    let m = g0.degree().ok_or(Error::NonMonicDivisor)?;
    if !g0.lead().is_some_and(|l| l.is_one()) {
        return Err(Error::NonMonicDivisor);
    }
    let slices = x_slices(f, b);
    let f0 = UPoly::new(field, slices[0].clone());
    if f0 != g0.mul(h0) {
        return Err(Error::Degree("residual factorization does not match f(0,y)".into()));
    }
    let (gcd, _, t) = UPoly::ext_gcd(g0, h0);
    if gcd.degree() != Some(0) {
        return Err(Error::Degree("residual factors are not coprime".into()));
    }
    let t = t.divmod(g0).1;
    let width = f.coeffs().len().max(m + 1);
    let mut gs: Vec<UPoly> = vec![g0.clone()];
    let mut hs: Vec<UPoly> = vec![h0.clone()];
    let mut residues: Vec<(Vec<u64>, Vec<u64>)> = vec![(Vec::new(), Vec::new())];
    for k in 1..b as usize {
        let mut e = UPoly::new(field, slices[k].clone());
        if field.is_prime_field() {
            let sum = convolve_mod(&residues, k, field.characteristic());
            e = e.sub(&UPoly::new(field, sum));
        } else {
            for i in 1..k {
                if gs[i].is_zero() || hs[k - i].is_zero() {
                    continue;
                }
                e = e.sub(&gs[i].mul(&hs[k - i]));
            }
        }
        if e.is_zero() {
            gs.push(UPoly::zero(field));
            hs.push(UPoly::zero(field));
            residues.push((Vec::new(), Vec::new()));
            continue;
        }
        let gk = if m == 0 {
            UPoly::zero(field)
        } else {
            t.mul(&e).divmod(g0).1
        };
        let (hk, rem) = e.sub(&gk.mul(h0)).divmod(g0);
        debug_assert!(rem.is_zero());
        if field.is_prime_field() {
            residues.push((to_residues(&gk), to_residues(&hk)));
        }
        gs.push(gk);
        hs.push(hk);
    }
    let g = assemble(field, &gs, m + 1, b, Some(m));
    let h = assemble(field, &hs, width, b, None);
    Ok((g, h))
}

/// Weierstrass preparation: f ≡ D·U mod x^b with D distinguished of degree
/// m = ord_y f(0,y) and U(0,0) ≠ 0.
pub fn weierstrass_prepare(f: &YPolynomial, b: u64) -> Result<(YPolynomial, YPolynomial)> {
    let field = f.field();
    if f.coeffs().iter().any(|c| c.precision() == Some(0)) {
        return Err(Error::Precision("f(0,y) is not determined".into()));
    }
    let f0 = f.at_x0();
    let m = f0.low_order().ok_or(Error::ContainsXAxis)?;
    if f.is_distinguished() {
        return Ok((f.clone(), YPolynomial::one(field)));
    }
    if m == 0 {
        return Ok((YPolynomial::one(field), f.clone()));
    }
    let lead = f.coeffs().last().unwrap();
    if f.deg() == m && lead.is_exact() && lead.terms().len() == 1 && lead.terms()[0].0 == 0 {
        // f = c·(monic distinguished): no lifting needed
        let c = lead.terms()[0].1.clone();
        let inv = c.inv().unwrap();
        return Ok((f.scale(&inv), YPolynomial::from_series(Series::constant(c))));
    }
    let g0 = UPoly::monomial(field, m);
    let h0 = f0.div_pow(m);
    hensel_split(f, &g0, &h0, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldSpec;
    use crate::algebra::series::Order;

    fn check_product(f: &YPolynomial, d: &YPolynomial, u: &YPolynomial, b: u64) {
        let prod = d.mul(u).truncate(b);
        assert_eq!(prod.sub(&f.truncate(b)).coeffs().iter().filter(|c| !c.has_no_terms()).count(), 0);
    }

    #[test]
    fn distinguished_input_is_returned() {
        let q = FieldSpec::rationals();
        let f = YPolynomial::from_terms(q, &[(1, 0, 2), (-1, 3, 0)]);
        let (d, u) = weierstrass_prepare(&f, 10).unwrap();
        assert_eq!(d, f);
        assert_eq!(u, YPolynomial::one(q));
    }

    #[test]
    fn example_a_prepares_to_degree_three() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f = YPolynomial::from_terms(f3, &[(1, 0, 8), (1, 0, 3), (-1, 9, 0)]);
        let (d, u) = weierstrass_prepare(&f, 30).unwrap();
        assert_eq!(d.degree(), Some(3));
        assert!(d.is_distinguished());
        assert!(!u.at_x0().eval(&f3.zero()).is_zero());
        check_product(&f, &d, &u, 30);
    }

    #[test]
    fn cubic_with_unit_factor() {
        // (1+y)·y^2 + x·y: distinguished part y^2 + a(x)·y with
        // a = x + x^2 + 2x^3 + 5x^4 + 14x^5 + … (Catalan numbers)
        let q = FieldSpec::rationals();
        let f = YPolynomial::from_terms(q, &[(1, 0, 3), (1, 0, 2), (1, 1, 1)]);
        let (d, u) = weierstrass_prepare(&f, 8).unwrap();
        assert_eq!(d.degree(), Some(2));
        check_product(&f, &d, &u, 8);
        let a = d.coeff(1);
        let cat: Vec<i64> = (1..6).map(|k| a.coeff(k).to_bigint().unwrap().try_into().unwrap()).collect();
        assert_eq!(cat, vec![1, 1, 2, 5, 14]);
        assert_eq!(d.coeff(0).order(), Order::AtLeast(8));
    }

    #[test]
    fn x_axis_is_rejected() {
        let q = FieldSpec::rationals();
        let f = YPolynomial::from_terms(q, &[(1, 1, 2), (1, 2, 0)]);
        assert_eq!(weierstrass_prepare(&f, 5), Err(Error::ContainsXAxis));
    }

    #[test]
    fn constant_leading_coefficient_stays_exact() {
        let q = FieldSpec::rationals();
        let f = YPolynomial::from_terms(q, &[(-4, 0, 1), (-1, 2, 0)]);
        let (d, _) = weierstrass_prepare(&f, 5).unwrap();
        assert!(d.is_exact());
        assert_eq!(d.to_string(), "y+1/4*x^2");
    }
}
