//! Newton polygons relative to a comparison polynomial φ, staircase
//! shapes, and irreducibility tests built on them.

use std::fmt;

use num_integer::Integer;

use crate::algebra::{Order, Series, YPolynomial};
use crate::approot::{charseq_via_approx_roots, ApproxRootData};
use crate::error::{Error, Result};
use crate::intersection::imult;
use crate::semigroup::CharSequence;

/// A support point (i₀(α_i, φ), N − i).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportPoint {
    pub u: Order,
    pub v: u64,
}

/// Δ_{x,φ}(f): support points and the vertices of the lower-left hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub n: u64,
    pub support: Vec<SupportPoint>,
    /// Strictly increasing u, strictly decreasing v.
    pub vertices: Vec<(u64, u64)>,
}

impl NewtonPolygon {
    /// The point where the hull meets the horizontal axis, if any.
    pub fn horizontal_intercept(&self) -> Option<u64> {
        self.vertices.last().filter(|p| p.1 == 0).map(|p| p.0)
    }

    /// Edges as (u-length, v-height) pairs, top-left first.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        self.vertices.windows(2).map(|w| (w[1].0 - w[0].0, w[0].1 - w[1].1)).collect()
    }
}

/// Teissier's staircase {{k, l}}: the single edge from (0, l) to (k, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Staircase {
    pub k: u64,
    pub l: u64,
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{{{},{}}}}}", self.k, self.l)
    }
}

/// (b - a) × (c - a) for points given as (u, v).
fn cross(a: (u64, u64), b: (u64, u64), c: (u64, u64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    (b.0 as i128 - ax) * (c.1 as i128 - ay) - (b.1 as i128 - ay) * (c.0 as i128 - ax)
}

/// Vertices of the lower-left hull of ⋃ (p + R²_{≥0}).
pub fn lower_hull(points: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut pts = points.to_vec();
    pts.sort();
    let mut stair: Vec<(u64, u64)> = Vec::new();
    for p in pts {
        if stair.last().is_none_or(|q| p.1 < q.1) {
            stair.push(p);
        }
    }
    let mut hull: Vec<(u64, u64)> = Vec::new();
    for p in stair {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Is (u, v) strictly inside the region above the hull?
pub(crate) fn strictly_above(hull: &[(u64, u64)], u: u64, v: u64) -> bool {
    if hull.is_empty() {
        return false;
    }
    if v > hull[0].1 {
        return u >= hull[0].0;
    }
    if v < hull[hull.len() - 1].1 {
        return false;
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        if v <= a.1 && v >= b.1 {
            return cross(a, b, (u, v)) > 0;
        }
    }
    u > hull[hull.len() - 1].0
}

/// Δ_{x,φ}(f) from the φ-adic expansion f = φ^N + α_1 φ^{N−1} + ⋯ + α_N.
pub fn newton_polygon(f: &YPolynomial, phi: &YPolynomial) -> Result<NewtonPolygon> {
    f.field().check(&phi.field())?;
    let dphi = phi.degree().filter(|d| *d > 0).ok_or(Error::NonMonicDivisor)?;
    if !f.deg().is_multiple_of(dphi) || f.deg() == 0 {
        return Err(Error::Degree(format!(
            "deg f = {} is not a positive multiple of deg phi = {dphi}",
            f.deg()
        )));
    }
    let n = (f.deg() / dphi) as u64;
    let parts = f.adic_expansion(phi)?;
    let mut support = Vec::new();
    for (i, a) in parts.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let u = imult(phi, a)?;
        support.push(SupportPoint { u, v: n - i as u64 });
    }
    let finite: Vec<(u64, u64)> = support.iter().filter_map(|p| p.u.finite().map(|u| (u, p.v))).collect();
    let vertices = lower_hull(&finite);
    for p in &support {
        if let Order::AtLeast(b) = p.u {
            if !strictly_above(&vertices, b, p.v) {
                return Err(Error::Precision(format!(
                    "support point at height {} only known to have u >= {b}",
                    p.v
                )));
            }
        }
    }
    Ok(NewtonPolygon { n, support, vertices })
}

/// Is the polygon exactly the staircase {{k, l}}? Compares hull vertices.
pub fn equals_staircase(p: &NewtonPolygon, k: u64, l: u64) -> bool {
    p.vertices == vec![(0, l), (k, 0)]
}

/// Reason an Abhyankar test rejected f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The approximate-root values do not form a characteristic sequence.
    Condition1 { values: Vec<u64>, gcds: Vec<u64> },
    /// Some relative polygon is not the expected staircase.
    Condition2 { k: usize, expected: Staircase, vertices: Vec<(u64, u64)> },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Condition1 { values, gcds } => {
                write!(f, "condition 1 fails: values {values:?}, gcds {gcds:?}")
            }
            Failure::Condition2 { k, expected, vertices } => {
                write!(f, "condition 2 fails at k = {k}: expected {expected}, hull {vertices:?}")
            }
        }
    }
}

/// Certificate of irreducibility from approximate roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbhyankarCertificate {
    pub charseq: CharSequence,
    /// √[e_{k−1}]{f} for k = 1..h, followed by f.
    pub roots: Vec<YPolynomial>,
    pub polygons: Vec<Staircase>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbhyankarVerdict {
    Irreducible(AbhyankarCertificate),
    Reducible(Failure),
    Inapplicable { p: u64, n: u64 },
}

/// Abhyankar's irreducibility criterion for a distinguished f whose degree
/// is not divisible by the characteristic.
pub fn abhyankar_irreducible(f: &YPolynomial) -> Result<AbhyankarVerdict> {
    if !f.is_distinguished() {
        return Err(Error::Hypothesis("f is not distinguished".into()));
    }
    let n = f.deg() as u64;
    let p = f.field().characteristic();
    if n == 0 {
        return Err(Error::Degree("f has degree 0".into()));
    }
    if p != 0 && n.is_multiple_of(p) {
        return Ok(AbhyankarVerdict::Inapplicable { p, n });
    }
    if n == 1 {
        return Ok(AbhyankarVerdict::Irreducible(AbhyankarCertificate {
            charseq: CharSequence::new(vec![1])?,
            roots: vec![f.clone()],
            polygons: Vec::new(),
        }));
    }
    let data: ApproxRootData = charseq_via_approx_roots(f)?;
    let charseq = match data.charseq() {
        Some(cs) => cs,
        None => {
            return Ok(AbhyankarVerdict::Reducible(Failure::Condition1 {
                values: data.values,
                gcds: data.gcds,
            }))
        }
    };
    let mut roots = data.roots;
    roots.push(f.clone());
    let mut polygons = Vec::new();
    for k in 1..=charseq.h() {
        let expected = Staircase {
            k: charseq.b(k) / charseq.e(k),
            l: charseq.e(k - 1) / charseq.e(k),
        };
        let poly = newton_polygon(&roots[k], &roots[k - 1])?;
        if !equals_staircase(&poly, expected.k, expected.l) {
            return Ok(AbhyankarVerdict::Reducible(Failure::Condition2 {
                k,
                expected,
                vertices: poly.vertices,
            }));
        }
        polygons.push(expected);
    }
    Ok(AbhyankarVerdict::Irreducible(AbhyankarCertificate {
        charseq,
        roots,
        polygons,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NewtoncVerdict {
    /// Irreducible with characteristic sequence (n, m).
    Irreducible { n: u64, m: u64 },
    Inconclusive(String),
}

/// Single-pair test: writing f = Σ α_i (y + ψ)^{n−i}, f is irreducible
/// with sequence (n, m) when gcd(n, m) = 1, ord α_i > i·m/n for 0 < i < n
/// and ord α_n = m. Valid in every characteristic.
pub fn newtonc_test(f: &YPolynomial, psi: &Series) -> Result<NewtoncVerdict> {
    let n = f.deg() as u64;
    if n < 2 {
        return Err(Error::Degree("newtonc test needs degree > 1".into()));
    }
    if !f.is_monic() {
        return Err(Error::NonMonicDivisor);
    }
    if !psi.constant_term().is_zero() {
        return Err(Error::Hypothesis("psi(0) must vanish".into()));
    }
    let g = f.shift_y(&psi.neg());
    let inconclusive = |s: String| Ok(NewtoncVerdict::Inconclusive(s));
    let m = match g.coeff(0).order() {
        Order::Finite(m) => m,
        Order::AtLeast(b) => return inconclusive(format!("ord alpha_n only known to be >= {b}")),
        Order::Infinite => return inconclusive("alpha_n = 0".into()),
    };
    if m == 0 || n.gcd(&m) != 1 {
        return inconclusive(format!("gcd({n}, {m}) != 1"));
    }
    for i in 1..n {
        let alpha = g.coeff((n - i) as usize);
        if let Some(o) = alpha.order().lower_bound() {
            if o * n <= i * m {
                return inconclusive(format!("ord alpha_{i} = {} <= {i}*{m}/{n}", alpha.order()));
            }
        }
    }
    Ok(NewtoncVerdict::Irreducible { n, m })
}

/// Does Δ_{x,φ}(f) equal {{b̄_h, e_{h−1}}}? Given that φ is irreducible with
/// the truncated sequence, a positive answer certifies f irreducible.
pub fn step_irreducibility(f: &YPolynomial, phi: &YPolynomial, expected: (u64, u64)) -> Result<bool> {
    let (bh, e) = expected;
    let dphi = phi.deg();
    if dphi == 0 || f.deg() as u64 != e * dphi as u64 {
        return Err(Error::Degree(format!(
            "deg f = {} is not e_(h-1)·deg phi = {}",
            f.deg(),
            e * dphi as u64
        )));
    }
    let poly = newton_polygon(f, phi)?;
    Ok(equals_staircase(&poly, bh, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn poly(f: FieldSpec, t: &[(i64, u64, usize)]) -> YPolynomial {
        YPolynomial::from_terms(f, t)
    }

    fn curve(f: FieldSpec) -> YPolynomial {
        poly(f, &[(1, 0, 4), (-2, 3, 2), (1, 6, 0), (-4, 5, 1), (-1, 7, 0)])
    }

    fn cusp(f: FieldSpec) -> YPolynomial {
        poly(f, &[(1, 0, 2), (-1, 3, 0)])
    }

    #[test]
    fn hull_examples() {
        assert_eq!(lower_hull(&[(0, 2), (3, 0)]), vec![(0, 2), (3, 0)]);
        assert_eq!(lower_hull(&[(0, 2), (2, 1), (4, 0)]), vec![(0, 2), (4, 0)]);
        assert_eq!(lower_hull(&[(0, 3), (3, 1), (5, 0)]), vec![(0, 3), (3, 1), (5, 0)]);
        assert_eq!(lower_hull(&[(0, 2), (5, 2), (1, 1), (9, 0)]), vec![(0, 2), (1, 1), (9, 0)]);
    }

    #[test]
    fn polygon_examples() {
        let y = YPolynomial::y(q());
        let p = newton_polygon(&cusp(q()), &y).unwrap();
        assert!(equals_staircase(&p, 3, 2));
        let p = newton_polygon(&curve(q()), &cusp(q())).unwrap();
        assert!(equals_staircase(&p, 13, 2));
        let p = newton_polygon(&poly(q(), &[(1, 0, 2)]), &y).unwrap();
        assert_eq!(p.vertices, vec![(0, 2)]);
        assert_eq!(p.horizontal_intercept(), None);
        let p = newton_polygon(&poly(q(), &[(1, 0, 2), (-1, 2, 0)]), &y).unwrap();
        assert!(!equals_staircase(&p, 3, 2));
        let p = newton_polygon(&poly(q(), &[(1, 0, 2), (-1, 3, 0), (-1, 1, 1)]), &y).unwrap();
        assert!(!equals_staircase(&p, 3, 2));
        assert!(newton_polygon(&poly(q(), &[(1, 0, 3)]), &cusp(q())).is_err());
    }

    #[test]
    fn abhyankar_on_curve() {
        for field in [q(), FieldSpec::prime(7).unwrap()] {
            match abhyankar_irreducible(&curve(field)).unwrap() {
                AbhyankarVerdict::Irreducible(c) => {
                    assert_eq!(c.charseq.values(), &[4, 6, 13]);
                    assert_eq!(c.polygons, vec![Staircase { k: 3, l: 2 }, Staircase { k: 13, l: 2 }]);
                }
                v => panic!("{v:?}"),
            }
        }
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(
            abhyankar_irreducible(&curve(f2)).unwrap(),
            AbhyankarVerdict::Inapplicable { p: 2, n: 4 }
        );
        let g = poly(q(), &[(1, 0, 4), (1, 6, 0), (-1, 7, 0)]);
        assert!(matches!(abhyankar_irreducible(&g).unwrap(), AbhyankarVerdict::Reducible(_)));
        let f5 = FieldSpec::prime(5).unwrap();
        match abhyankar_irreducible(&cusp(f5)).unwrap() {
            AbhyankarVerdict::Irreducible(c) => assert_eq!(c.charseq.values(), &[2, 3]),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn products_are_reducible() {
        let f = cusp(q()).mul(&poly(q(), &[(1, 0, 1), (1, 1, 0)]));
        assert!(matches!(abhyankar_irreducible(&f).unwrap(), AbhyankarVerdict::Reducible(_)));
        let f = cusp(q()).mul(&cusp(q()));
        assert!(matches!(abhyankar_irreducible(&f).unwrap(), AbhyankarVerdict::Reducible(_)));
        let f = cusp(q()).mul(&poly(q(), &[(1, 0, 2), (-1, 3, 0), (-1, 4, 0)]));
        assert!(matches!(abhyankar_irreducible(&f).unwrap(), AbhyankarVerdict::Reducible(_)));
    }

    #[test]
    fn newtonc_examples() {
        for p in [3u64, 5, 7] {
            let fp = FieldSpec::prime(p).unwrap();
            let f = poly(fp, &[(1, 0, p as usize), (-1, p - 1, 1), (-1, p - 1, 0)]);
            assert_eq!(
                newtonc_test(&f, &Series::zero(fp)).unwrap(),
                NewtoncVerdict::Irreducible { n: p, m: p - 1 }
            );
        }
        assert_eq!(
            newtonc_test(&cusp(q()), &Series::zero(q())).unwrap(),
            NewtoncVerdict::Irreducible { n: 2, m: 3 }
        );
        assert!(matches!(
            newtonc_test(&poly(q(), &[(1, 0, 2), (-1, 2, 0)]), &Series::zero(q())).unwrap(),
            NewtoncVerdict::Inconclusive(_)
        ));
        // (y + x)^2 - x^3 needs the shift psi = x
        let shifted = poly(q(), &[(1, 0, 2), (2, 1, 1), (1, 2, 0), (-1, 3, 0)]);
        assert!(matches!(
            newtonc_test(&shifted, &Series::zero(q())).unwrap(),
            NewtoncVerdict::Inconclusive(_)
        ));
        assert_eq!(
            newtonc_test(&shifted, &Series::var(q())).unwrap(),
            NewtoncVerdict::Irreducible { n: 2, m: 3 }
        );
    }

    #[test]
    fn step_examples() {
        assert!(step_irreducibility(&curve(q()), &cusp(q()), (13, 2)).unwrap());
        assert!(!step_irreducibility(&cusp(q()).pow(2), &cusp(q()), (13, 2)).unwrap());
        assert!(step_irreducibility(&curve(q()), &cusp(q()), (13, 3)).is_err());
    }
}
