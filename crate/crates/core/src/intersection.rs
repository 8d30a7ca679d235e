//! Intersection multiplicity of plane curve germs at the origin.
//!
//! `imult` runs a local Euclidean algorithm: with f distinguished,
//! i(f, g) = i(f, g mod f), the x-content of the remainder contributes
//! content·deg f, and the rest is Weierstrass-prepared and swapped in as
//! the new first argument. Truncation is carried by the series precision
//! and surfaces as `Order::AtLeast`. A Sylvester resultant over K[x] is
//! kept as an independent route for exact distinguished polynomials.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::algebra::{
    default_precision, eval_order, weierstrass_prepare, Order, Parametrization, Series, UPoly,
    YPolynomial,
};
use crate::error::{Error, Result};
use crate::semigroup::CharSequence;

/// i₀ values: exact, bounded below by truncation, or infinite.
pub type MultiplicityValue = Order;

/// Largest working precision tried by the adaptive loop.
const PRECISION_CAP: u64 = 1 << 16;

/// i₀(f, g) with adaptive precision.
///
/// For exact inputs a lower bound above n·deg_x g + deg_y g·deg_x f (the
/// degree bound of the resultant) certifies a common branch through the
/// origin, reported as `Infinite`.
pub fn imult(f: &YPolynomial, g: &YPolynomial) -> Result<MultiplicityValue> {
    f.field().check(&g.field())?;
    if g.is_zero() {
        return Ok(Order::Infinite);
    }
    let exact = f.is_exact() && g.is_exact();
    let bound = f.deg() as u64 * g.deg_x() + g.deg() as u64 * f.deg_x();
    let mut b = default_precision(f.deg());
    let mut last = None;
    loop {
        match imult_at(f, g, b)? {
            Order::AtLeast(l) => {
                if exact && l > bound {
                    return Ok(Order::Infinite);
                }
                if (!exact && last == Some(l)) || b >= PRECISION_CAP {
                    return Ok(Order::AtLeast(l));
                }
                last = Some(l);
                b *= 2;
            }
            v => return Ok(v),
        }
    }
}

/// One pass of the local Euclidean algorithm at working precision `b`.
pub fn imult_at(f: &YPolynomial, g: &YPolynomial, b: u64) -> Result<MultiplicityValue> {
    f.field().check(&g.field())?;
    if f.is_zero() || f.y_order_at_x0().is_none() && f.precision() != Some(0) {
        return Err(Error::ContainsXAxis);
    }
    if g.is_zero() {
        return Ok(Order::Infinite);
    }
    let (mut f, _) = weierstrass_prepare(f, b)?;
    let mut g = g.clone();
    let mut acc = 0u64;
    loop {
        let n = f.deg() as u64;
        if n == 0 {
            return Ok(Order::Finite(acc));
        }
        let r = g.rem_monic(&f)?;
        if r.is_zero() {
            return Ok(Order::Infinite);
        }
        let (c, determined) = r.x_content();
        if !determined {
            return Ok(Order::AtLeast(acc + c * n));
        }
        acc += c * n;
        let (d, _) = weierstrass_prepare(&r.unshift_x(c), b)?;
        if d.deg() == 0 {
            return Ok(Order::Finite(acc));
        }
        g = std::mem::replace(&mut f, d);
    }
}

/// i₀ along a parametrization of f: ord_t g(φ(t), ψ(t)). The caller
/// guarantees that the parametrization is good.
pub fn imult_param(par: &Parametrization, g: &YPolynomial) -> Result<MultiplicityValue> {
    par.field().check(&g.field())?;
    Ok(eval_order(g, par))
}

fn require_finite(v: Order, what: &str) -> Result<u64> {
    match v {
        Order::Finite(k) => Ok(k),
        Order::AtLeast(k) => Err(Error::Precision(format!("{what} only known to be >= {k}"))),
        Order::Infinite => Err(Error::Hypothesis(format!("{what} is infinite"))),
    }
}

/// A rational value that may be +infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(Ratio<u64>),
    Infinite,
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
            (Distance::Infinite, _) => Ordering::Greater,
            (_, Distance::Infinite) => Ordering::Less,
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => write!(f, "{r}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// d_x(f, g) = i₀(f,g) / (i₀(f,x)·i₀(g,x)).
pub fn log_distance(f: &YPolynomial, g: &YPolynomial) -> Result<Distance> {
    let x = YPolynomial::x(f.field());
    let nf = require_finite(imult(f, &x)?, "i0(f,x)")?;
    let ng = require_finite(imult(g, &x)?, "i0(g,x)")?;
    match imult(f, g)? {
        Order::Infinite => Ok(Distance::Infinite),
        v => {
            let i = require_finite(v, "i0(f,g)")?;
            Ok(Distance::Finite(Ratio::new(i, nf * ng)))
        }
    }
}

/// Which part of the intersection formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaCase {
    /// i₀ equals the bound inf{e'_{k−1}b̄_k, e_{k−1}b̄'_k}.
    EqualityBound,
    /// i₀ is below the bound and factors through the (k−1)-th keys.
    StrictWithKeyProduct,
    /// k = h + 1: the ratio exceeds every finite threshold of f.
    KEqualsHPlusOne,
}

/// Contact index k_x(f, g) with the data of the intersection formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactReport {
    pub k: usize,
    pub i0: MultiplicityValue,
    pub n: u64,
    pub n_other: u64,
    /// b̄_i/n for 1 ≤ i < k; equal to b̄'_i/n' whenever g's sequence is known.
    pub shared_ratios: Vec<Ratio<u64>>,
    /// inf{e'_{k−1}b̄_k, e_{k−1}b̄'_k}; needs g's sequence.
    pub bound: Option<MultiplicityValue>,
    pub formula_case: Option<FormulaCase>,
}

/// b̄_k with b̄_{h+1} = +∞.
fn extended(cs: &CharSequence, k: usize) -> Order {
    if k <= cs.h() {
        Order::Finite(cs.b(k))
    } else {
        Order::Infinite
    }
}

/// e_k with e_k = 1 for k ≥ h.
fn extended_e(cs: &CharSequence, k: usize) -> u64 {
    cs.e(k.min(cs.h()))
}

/// Least k ≥ 1 with i₀/n' ≤ e_{k−1}b̄_k/n (h+1 when no such k ≤ h exists).
pub fn contact_k(cs: &CharSequence, i0: Order, n_other: u64) -> usize {
    let n = cs.multiplicity() as u128;
    let i = match i0 {
        Order::Finite(i) => i as u128,
        _ => return cs.h() + 1,
    };
    (1..=cs.h())
        .find(|&k| i * n <= n_other as u128 * cs.e(k - 1) as u128 * cs.b(k) as u128)
        .unwrap_or(cs.h() + 1)
}

/// k_x(f, g) for a branch f with sequence `f_cs`; `g_cs` enables the bound
/// and the formula case.
pub fn contact_index(
    f_cs: &CharSequence,
    f: &YPolynomial,
    g: &YPolynomial,
    g_cs: Option<&CharSequence>,
) -> Result<ContactReport> {
    let x = YPolynomial::x(f.field());
    let n_other = require_finite(imult(g, &x)?, "i0(g,x)")?;
    let i0 = imult(f, g)?;
    if let Order::AtLeast(l) = i0 {
        return Err(Error::Precision(format!("i0(f,g) only known to be >= {l}")));
    }
    let n = f_cs.multiplicity();
    let k = contact_k(f_cs, i0, n_other);
    let shared_ratios = (1..k).map(|i| Ratio::new(f_cs.b(i), n)).collect();
    let bound = g_cs.map(|gc| formula_bound(f_cs, gc, k));
    let formula_case = if k == f_cs.h() + 1 {
        Some(FormulaCase::KEqualsHPlusOne)
    } else {
        bound.map(|b| {
            if b == i0 {
                FormulaCase::EqualityBound
            } else {
                FormulaCase::StrictWithKeyProduct
            }
        })
    };
    Ok(ContactReport {
        k,
        i0,
        n,
        n_other,
        shared_ratios,
        bound,
        formula_case,
    })
}

/// inf{e'_{k−1}b̄_k, e_{k−1}b̄'_k}.
pub fn formula_bound(f_cs: &CharSequence, g_cs: &CharSequence, k: usize) -> Order {
    let left = extended(f_cs, k).times(extended_e(g_cs, k - 1));
    let right = extended(g_cs, k).times(extended_e(f_cs, k - 1));
    match (left, right) {
        (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.min(b)),
        (Order::Finite(a), _) | (_, Order::Finite(a)) => Order::Finite(a),
        _ => Order::Infinite,
    }
}

/// Outcome of one claim, with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    pub(crate) fn new(name: &str, lhs: impl fmt::Display, rhs: impl fmt::Display, pass: bool) -> Check {
        Check {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        }
    }
}

/// Checks of the intersection formula for two branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaReport {
    pub k: usize,
    pub i0: MultiplicityValue,
    pub checks: Vec<Check>,
}

impl FormulaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// One branch with its sequence and keys f_0, …, f_h (the last being f).
#[derive(Debug, Clone, Copy)]
pub struct BranchView<'a> {
    pub f: &'a YPolynomial,
    pub charseq: &'a CharSequence,
    pub keys: &'a [YPolynomial],
}

/// Verify the four claims of the intersection formula; the same branch
/// twice short-circuits to i₀ = ∞ with no checks.
pub fn verify_intersection_formula(a: BranchView<'_>, b: BranchView<'_>) -> Result<FormulaReport> {
    let (cs, cs2) = (a.charseq, b.charseq);
    let i0 = imult(a.f, b.f)?;
    let n = cs.multiplicity();
    let n2 = cs2.multiplicity();
    if i0 == Order::Infinite {
        return Ok(FormulaReport {
            k: cs.h() + 1,
            i0,
            checks: Vec::new(),
        });
    }
    let i = require_finite(i0, "i0(f,g)")?;
    let k = contact_k(cs, i0, n2);
    let mut checks = Vec::new();
    for idx in 1..k {
        let lhs = Ratio::new(cs.b(idx), n);
        let (rhs, pass) = if idx <= cs2.h() {
            let r = Ratio::new(cs2.b(idx), n2);
            (r.to_string(), r == lhs)
        } else {
            ("inf".to_string(), false)
        };
        checks.push(Check::new(&format!("ratio b{idx}/n"), lhs, rhs, pass));
    }
    let bound = formula_bound(cs, cs2, k);
    let le_bound = bound.lower_bound().is_none_or(|bb| i <= bb);
    checks.push(Check::new("i0 <= bound", i, bound, le_bound));
    if bound.lower_bound().is_none_or(|bb| i < bb) {
        let key_a = a.keys.get(k - 1).ok_or_else(|| Error::Degree("missing key of f".into()))?;
        let key_b = b.keys.get(k - 1).ok_or_else(|| Error::Degree("missing key of g".into()))?;
        let inner = imult(key_a, key_b)?;
        let factor = extended_e(cs, k - 1) * extended_e(cs2, k - 1);
        let rhs = inner.times(factor);
        checks.push(Check::new("i0 = e e' i0(keys)", i, rhs, rhs == i0));
    }
    if k > 1 {
        let lhs = extended_e(cs2, k - 2) * cs.b(k - 1);
        let rhs = if k - 1 <= cs2.h() {
            Order::Finite(extended_e(cs, k - 2) * cs2.b(k - 1))
        } else {
            Order::Infinite
        };
        checks.push(Check::new("e'b = eb'", lhs, rhs, rhs == Order::Finite(lhs)));
        checks.push(Check::new("i0 > e'b", i, lhs, i > lhs));
    }
    Ok(FormulaReport { k, i0, checks })
}

/// Which modulus witnessed the congruence of i₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Congruence {
    /// i₀ ≡ 0 mod n/d.
    First(u64),
    /// i₀ ≡ 0 mod n'/d (and not mod n/d).
    Second(u64),
    Fail { n: u64, n_other: u64, i0: u64 },
}

impl Congruence {
    pub fn passed(&self) -> bool {
        !matches!(self, Congruence::Fail { .. })
    }
}

/// i₀(f,g) ≡ 0 mod n/d or mod n'/d, d = gcd(n, n'), for distinct branches.
pub fn congruence_check(f: &YPolynomial, g: &YPolynomial) -> Result<Congruence> {
    let x = YPolynomial::x(f.field());
    let n = require_finite(imult(f, &x)?, "i0(f,x)")?;
    let n2 = require_finite(imult(g, &x)?, "i0(g,x)")?;
    let i = require_finite(imult(f, g)?, "i0(f,g)")?;
    let d = n.gcd(&n2);
    Ok(if i % (n / d) == 0 {
        Congruence::First(n / d)
    } else if i % (n2 / d) == 0 {
        Congruence::Second(n2 / d)
    } else {
        Congruence::Fail { n, n_other: n2, i0: i }
    })
}

fn series_to_upoly(s: &Series) -> Result<UPoly> {
    if !s.is_exact() {
        return Err(Error::Precision("resultant needs exact coefficients".into()));
    }
    let len = s.max_exp().map_or(0, |e| e as usize + 1);
    let mut coeffs = vec![s.field().zero(); len];
    for (e, c) in s.terms() {
        coeffs[*e as usize] = c.clone();
    }
    Ok(UPoly::new(s.field(), coeffs))
}

/// Res_y(f, g) as a polynomial in x (Sylvester matrix, fraction-free
/// Bareiss elimination over K[x]). Coefficients must be exact.
pub fn resultant_y(f: &YPolynomial, g: &YPolynomial) -> Result<UPoly> {
    f.field().check(&g.field())?;
    let field = f.field();
    let (n, m) = match (f.degree(), g.degree()) {
        (Some(n), Some(m)) => (n, m),
        _ => return Ok(UPoly::zero(field)),
    };
    let fc = f.coeffs().iter().map(series_to_upoly).collect::<Result<Vec<_>>>()?;
    let gc = g.coeffs().iter().map(series_to_upoly).collect::<Result<Vec<_>>>()?;
    let size = n + m;
    if size == 0 {
        return Ok(UPoly::constant(field.one()));
    }
    let mut a = vec![vec![UPoly::zero(field); size]; size];
    for r in 0..m {
        for (j, c) in fc.iter().enumerate() {
            a[r][r + n - j] = c.clone();
        }
    }
    for r in 0..n {
        for (j, c) in gc.iter().enumerate() {
            a[m + r][r + m - j] = c.clone();
        }
    }
    let mut sign = false;
    let mut prev = UPoly::constant(field.one());
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(UPoly::zero(field)),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                let (q, r) = num.divmod(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
            a[i][k] = UPoly::zero(field);
        }
        prev = a[k][k].clone();
    }
    let det = a[size - 1][size - 1].clone();
    Ok(if sign { det.scale(&-field.one()) } else { det })
}

/// ord_x Res_y(f, g); equals i₀(f, g) for exact distinguished f.
pub fn resultant_order(f: &YPolynomial, g: &YPolynomial) -> Result<MultiplicityValue> {
    let r = resultant_y(f, g)?;
    Ok(match r.low_order() {
        Some(k) => Order::Finite(k as u64),
        None => Order::Infinite,
    })
}
