//! Truncated power series in one variable with explicit precision.
//!
//! A series is a sparse list of nonzero terms together with a precision
//! `Some(B)` (known modulo x^B) or `None` (exact).

use std::fmt;

use super::field::{FieldSpec, FieldValue};

/// Three-valued order: exact value, lower bound from truncation, or +infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u64),
    AtLeast(u64),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Order::Finite(k) => Some(*k),
            _ => None,
        }
    }

    /// Lower bound; `None` stands for +infinity.
    pub fn lower_bound(&self) -> Option<u64> {
        match self {
            Order::Finite(k) | Order::AtLeast(k) => Some(*k),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// Sum of two orders (order of a product).
    pub fn plus(self, other: Order) -> Order {
        match (self, other) {
            (Order::Infinite, _) | (_, Order::Infinite) => Order::Infinite,
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            (a, b) => Order::AtLeast(a.lower_bound().unwrap() + b.lower_bound().unwrap()),
        }
    }

    /// Multiply by a nonnegative integer.
    pub fn times(self, k: u64) -> Order {
        if k == 0 {
            return Order::Finite(0);
        }
        match self {
            Order::Finite(a) => Order::Finite(a * k),
            Order::AtLeast(a) => Order::AtLeast(a * k),
            Order::Infinite => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::AtLeast(k) => write!(f, ">={k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// Power series in x over a field, known modulo x^precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    field: FieldSpec,
    terms: Vec<(u64, FieldValue)>,
    prec: Option<u64>,
}

fn min_prec(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl Series {
    /// Builds a series from arbitrary terms: sums repeated exponents, drops
    /// zeros and terms at or beyond the precision.
    pub fn from_terms<I>(field: FieldSpec, terms: I, prec: Option<u64>) -> Series
    where
        I: IntoIterator<Item = (u64, FieldValue)>,
    {
        let mut v: Vec<(u64, FieldValue)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, FieldValue)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            debug_assert_eq!(c.spec(), field);
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = &last.1 + &c;
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|(e, c)| !c.is_zero() && prec.is_none_or(|b| *e < b));
        Series { field, terms: out, prec }
    }

    /// Builds from terms already sorted, nonzero and below the precision.
    fn raw(field: FieldSpec, terms: Vec<(u64, FieldValue)>, prec: Option<u64>) -> Series {
        Series { field, terms, prec }
    }

    pub fn zero(field: FieldSpec) -> Series {
        Series::raw(field, Vec::new(), None)
    }

    /// The series O(x^b): nothing known below b except that it vanishes.
    pub fn zero_to(field: FieldSpec, b: u64) -> Series {
        Series::raw(field, Vec::new(), Some(b))
    }

    pub fn one(field: FieldSpec) -> Series {
        Series::constant(field.one())
    }

    pub fn constant(c: FieldValue) -> Series {
        Series::monomial(c, 0)
    }

    /// c·x^e, exact.
    pub fn monomial(c: FieldValue, e: u64) -> Series {
        let field = c.spec();
        if c.is_zero() {
            Series::zero(field)
        } else {
            Series::raw(field, vec![(e, c)], None)
        }
    }

    /// The variable x itself.
    pub fn var(field: FieldSpec) -> Series {
        Series::monomial(field.one(), 1)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &[(u64, FieldValue)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<u64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when no nonzero term is known (exact zero or O(x^B)).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn order(&self) -> Order {
        match (self.terms.first(), self.prec) {
            (Some((e, _)), _) => Order::Finite(*e),
            (None, Some(b)) => Order::AtLeast(b),
            (None, None) => Order::Infinite,
        }
    }

    /// Lower bound on the order usable in precision bookkeeping
    /// (`u64::MAX` for the exact zero).
    fn ord_bound(&self) -> u64 {
        match self.order() {
            Order::Finite(k) | Order::AtLeast(k) => k,
            Order::Infinite => u64::MAX,
        }
    }

    /// Coefficient of x^e (zero when absent).
    pub fn coeff(&self, e: u64) -> FieldValue {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Leading (lowest-order) coefficient, if any term is known.
    pub fn leading(&self) -> Option<(u64, &FieldValue)> {
        self.terms.first().map(|(e, c)| (*e, c))
    }

    /// Largest stored exponent.
    pub fn max_exp(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// Reduce precision to at most b.
    pub fn truncate(&self, b: u64) -> Series {
        let prec = min_prec(self.prec, Some(b));
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e < b)
            .cloned()
            .collect();
        Series::raw(self.field, terms, prec)
    }

    /// Forget the precision bound and treat the known terms as exact.
    pub fn as_exact(&self) -> Series {
        Series::raw(self.field, self.terms.clone(), None)
    }

    pub fn neg(&self) -> Series {
        Series::raw(
            self.field,
            self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            self.prec,
        )
    }

    pub fn add(&self, other: &Series) -> Series {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.combine(other, true)
    }

    fn combine(&self, other: &Series, negate: bool) -> Series {
        assert_eq!(self.field, other.field, "field mismatch");
        let prec = min_prec(self.prec, other.prec);
        let below = |e: u64| prec.is_none_or(|b| e < b);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            let (e, c) = if take_a {
                i += 1;
                (a[i - 1].0, a[i - 1].1.clone())
            } else if take_b {
                j += 1;
                let c = if negate { -&b[j - 1].1 } else { b[j - 1].1.clone() };
                (b[j - 1].0, c)
            } else {
                let c = if negate {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                i += 1;
                j += 1;
                (a[i - 1].0, c)
            };
            if !below(e) {
                break;
            }
            if !c.is_zero() {
                out.push((e, c));
            }
        }
        Series::raw(self.field, out, prec)
    }

    /// Product with precision min(B_f + ord g, B_g + ord f).
    pub fn mul(&self, other: &Series) -> Series {
        self.mul_capped(other, None)
    }

    /// Product additionally truncated at `cap` when given.
    pub fn mul_trunc(&self, other: &Series, cap: u64) -> Series {
        self.mul_capped(other, Some(cap))
    }

    fn mul_capped(&self, other: &Series, cap: Option<u64>) -> Series {
        assert_eq!(self.field, other.field, "field mismatch");
        if self.is_exact_zero() || other.is_exact_zero() {
            return Series::zero(self.field);
        }
        let oa = self.ord_bound();
        let ob = other.ord_bound();
        let pa = self.prec.map(|b| b.saturating_add(ob));
        let pb = other.prec.map(|b| b.saturating_add(oa));
        let natural = min_prec(pa, pb);
        let prec = min_prec(natural, cap);
        let limit = prec.unwrap_or(u64::MAX);
        if self.terms.is_empty() || other.terms.is_empty() {
            return Series::raw(self.field, Vec::new(), prec);
        }
        let lo = oa + ob;
        if lo >= limit {
            return Series::raw(self.field, Vec::new(), prec);
        }
        let hi = (self.max_exp().unwrap() + other.max_exp().unwrap()).min(limit - 1);
        let span = (hi - lo + 1) as usize;
        let sparse = self.terms.len() * other.terms.len() < span / 4 || span > 1 << 22;
        let terms = if sparse {
            let mut acc: std::collections::BTreeMap<u64, FieldValue> = Default::default();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    let e = ea + eb;
                    if e >= limit {
                        break;
                    }
                    let prod = ca * cb;
                    acc.entry(e)
                        .and_modify(|c| *c = &*c + &prod)
                        .or_insert(prod);
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        } else if self.field.is_prime_field() {
            let p = self.field.characteristic();
            let rhs: Vec<(u64, u64)> = other.terms.iter().map(|(e, c)| (*e, c.residue().unwrap())).collect();
            // below 2^16 a product is < 2^32, so sums of up to 2^32 terms fit
            let lazy = p < 1 << 16;
            let mut acc = vec![0u64; span];
            for (ea, ca) in &self.terms {
                let a = ca.residue().unwrap();
                for &(eb, b) in &rhs {
                    let e = ea + eb;
                    if e >= limit {
                        break;
                    }
                    let slot = &mut acc[(e - lo) as usize];
                    if lazy {
                        *slot += a * b;
                    } else {
                        *slot = (*slot + a * b) % p;
                    }
                }
            }
            if lazy {
                acc.iter_mut().for_each(|v| *v %= p);
            }
            acc.into_iter()
                .enumerate()
                .filter(|(_, v)| *v != 0)
                .map(|(i, v)| (lo + i as u64, FieldValue::Mod { v, p }))
                .collect()
        } else {
            let mut acc: Vec<Option<FieldValue>> = vec![None; span];
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    let e = ea + eb;
                    if e >= limit {
                        break;
                    }
                    let prod = ca * cb;
                    let slot = &mut acc[(e - lo) as usize];
                    *slot = Some(match slot.take() {
                        Some(c) => &c + &prod,
                        None => prod,
                    });
                }
            }
            acc.into_iter()
                .enumerate()
                .filter_map(|(i, c)| c.filter(|c| !c.is_zero()).map(|c| (lo + i as u64, c)))
                .collect()
        };
        Series::raw(self.field, terms, prec)
    }

    pub fn scale(&self, c: &FieldValue) -> Series {
        if c.is_zero() {
            return match self.prec {
                None => Series::zero(self.field),
                Some(b) => Series::zero_to(self.field, b),
            };
        }
        Series::raw(
            self.field,
            self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
            self.prec,
        )
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: u64) -> Series {
        Series::raw(
            self.field,
            self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            self.prec.map(|b| b + k),
        )
    }

    /// Divide by x^k; the caller guarantees every term has exponent >= k
    /// and, for truncated series, precision >= k.
    pub fn unshift(&self, k: u64) -> Series {
        debug_assert!(self.terms.first().is_none_or(|t| t.0 >= k));
        Series::raw(
            self.field,
            self.terms.iter().map(|(e, c)| (e - k, c.clone())).collect(),
            self.prec.map(|b| b.saturating_sub(k)),
        )
    }

    /// Substitute x -> x^l.
    pub fn inflate(&self, l: u64) -> Series {
        Series::raw(
            self.field,
            self.terms.iter().map(|(e, c)| (e * l, c.clone())).collect(),
            self.prec.map(|b| b * l),
        )
    }

    /// Substitute x^l -> x; every exponent must be a multiple of l.
    /// Returns `None` otherwise.
    pub fn deflate(&self, l: u64) -> Option<Series> {
        if self.terms.iter().any(|(e, _)| e % l != 0) {
            return None;
        }
        Some(Series::raw(
            self.field,
            self.terms.iter().map(|(e, c)| (e / l, c.clone())).collect(),
            self.prec.map(|b| b.div_ceil(l)),
        ))
    }

    pub fn pow(&self, k: u64) -> Series {
        let mut acc = Series::one(self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a unit series modulo x^b (exact when the input is a nonzero constant).
    pub fn inverse(&self, b: u64) -> Option<Series> {
        let c0 = match self.terms.first() {
            Some((0, c)) => c.inv()?,
            _ => return None,
        };
        if self.terms.len() == 1 && self.prec.is_none() {
            return Some(Series::constant(c0));
        }
        let b = self.prec.map_or(b, |p| p.min(b));
        let mut inv: Vec<FieldValue> = Vec::with_capacity(b as usize);
        for k in 0..b {
            if k == 0 {
                inv.push(c0.clone());
                continue;
            }
            let mut s = self.field.zero();
            for (e, c) in &self.terms {
                if *e == 0 {
                    continue;
                }
                if *e > k {
                    break;
                }
                s = &s + &(c * &inv[(k - e) as usize]);
            }
            inv.push(-&(&s * &c0));
        }
        Some(Series::from_terms(
            self.field,
            inv.into_iter().enumerate().map(|(i, c)| (i as u64, c)),
            Some(b),
        ))
    }

    /// Value at x = 0 (the constant term); meaningful when precision >= 1.
    pub fn constant_term(&self) -> FieldValue {
        self.coeff(0)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (*e, body.as_str()) {
                (0, b) => write!(f, "{b}")?,
                (1, "1") => write!(f, "x")?,
                (e, "1") => write!(f, "x^{e}")?,
                (1, b) => write!(f, "{b}*x")?,
                (e, b) => write!(f, "{b}*x^{e}")?,
            }
        }
        match (first, self.prec) {
            (true, None) => write!(f, "0"),
            (true, Some(b)) => write!(f, "O(x^{b})"),
            (false, Some(b)) => write!(f, "+O(x^{b})"),
            (false, None) => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn s(terms: &[(u64, i64)], prec: Option<u64>) -> Series {
        let f = q();
        Series::from_terms(f, terms.iter().map(|(e, c)| (*e, f.from_i64(*c))), prec)
    }

    #[test]
    fn order_three_valued() {
        assert_eq!(s(&[(3, 1), (5, -1)], None).order(), Order::Finite(3));
        assert_eq!(Series::zero(q()).order(), Order::Infinite);
        assert_eq!(Series::zero_to(q(), 10).order(), Order::AtLeast(10));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = s(&[(1, 2), (1, -2), (4, 1)], Some(4));
        assert!(a.terms().is_empty());
        assert_eq!(a.order(), Order::AtLeast(4));
    }

    #[test]
    fn product_precision_rule() {
        // (x + O(x^5)) * (x^2 exact) = x^3 + O(x^7)
        let a = s(&[(1, 1)], Some(5));
        let b = s(&[(2, 1)], None);
        let p = a.mul(&b);
        assert_eq!(p.precision(), Some(7));
        assert_eq!(p.order(), Order::Finite(3));
        // (x + O(x^5)) * (x^2 + O(x^3)) keeps min(5+2, 3+1) = 4
        let c = s(&[(2, 1)], Some(3));
        assert_eq!(a.mul(&c).precision(), Some(4));
    }

    #[test]
    fn sum_precision_rule() {
        let a = s(&[(1, 1), (6, 1)], Some(8));
        let b = s(&[(1, -1)], Some(5));
        let d = a.add(&b);
        assert_eq!(d.precision(), Some(5));
        assert_eq!(d.order(), Order::AtLeast(5));
    }

    #[test]
    fn inverse_of_unit() {
        let u = s(&[(0, 1), (1, 1)], None);
        let inv = u.inverse(6).unwrap();
        let prod = u.mul(&inv);
        assert_eq!(prod.truncate(6), s(&[(0, 1)], Some(6)));
    }

    #[test]
    fn dense_prime_product() {
        let f = FieldSpec::prime(3).unwrap();
        let a = Series::from_terms(f, (0..5).map(|e| (e, f.one())), None);
        let sq = a.mul(&a);
        // coefficients 1,2,3,4,5,4,3,2,1 mod 3
        let expect: Vec<(u64, u64)> = vec![(0, 1), (1, 2), (3, 1), (4, 2), (5, 1), (7, 2), (8, 1)];
        let got: Vec<(u64, u64)> = sq.terms().iter().map(|(e, c)| (*e, c.residue().unwrap())).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn display_marks_truncation() {
        assert_eq!(s(&[(0, 1), (2, -3)], Some(5)).to_string(), "1-3*x^2+O(x^5)");
        assert_eq!(Series::zero(q()).to_string(), "0");
    }
}
