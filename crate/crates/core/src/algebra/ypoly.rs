//! Polynomials in y whose coefficients are power series in x.

use std::fmt;

use super::field::{FieldSpec, FieldValue};
use super::series::{Order, Series};
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// f = Σ coeffs[j]·y^j with coefficients in K[[x]]. Trailing exact-zero
/// coefficients are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YPolynomial {
    field: FieldSpec,
    coeffs: Vec<Series>,
}

impl YPolynomial {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Series>) -> YPolynomial {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        YPolynomial { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> YPolynomial {
        YPolynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> YPolynomial {
        YPolynomial::from_series(Series::one(field))
    }

    pub fn from_series(s: Series) -> YPolynomial {
        let f = s.field();
        YPolynomial::new(f, vec![s])
    }

    /// c·x^a·y^b
    pub fn monomial(c: FieldValue, a: u64, b: usize) -> YPolynomial {
        let field = c.spec();
        let mut coeffs = vec![Series::zero(field); b];
        coeffs.push(Series::monomial(c, a));
        YPolynomial::new(field, coeffs)
    }

    pub fn y(field: FieldSpec) -> YPolynomial {
        YPolynomial::monomial(field.one(), 0, 1)
    }

    pub fn x(field: FieldSpec) -> YPolynomial {
        YPolynomial::monomial(field.one(), 1, 0)
    }

    /// Exact polynomial from integer terms (coefficient, x-exponent, y-exponent).
    pub fn from_terms(field: FieldSpec, terms: &[(i64, u64, usize)]) -> YPolynomial {
        let deg = terms.iter().map(|t| t.2).max().unwrap_or(0);
        let mut buckets: Vec<Vec<(u64, FieldValue)>> = vec![Vec::new(); deg + 1];
        for (c, a, b) in terms {
            buckets[*b].push((*a, field.from_i64(*c)));
        }
        YPolynomial::new(
            field,
            buckets
                .into_iter()
                .map(|t| Series::from_terms(field, t, None))
                .collect(),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    /// Coefficient of y^j (exact zero beyond the degree).
    pub fn coeff(&self, j: usize) -> Series {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| Series::zero(self.field))
    }

    /// y-degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// y-degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    /// Smallest coefficient precision (`None` when exact).
    pub fn precision(&self) -> Option<u64> {
        self.coeffs.iter().filter_map(|c| c.precision()).min()
    }

    /// Largest x-exponent appearing in any known term.
    pub fn deg_x(&self) -> u64 {
        self.coeffs
            .iter()
            .filter_map(|c| c.max_exp())
            .max()
            .unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        match self.coeffs.last() {
            Some(l) => l.is_exact() && l.terms().len() == 1 && l.terms()[0].0 == 0 && l.terms()[0].1.is_one(),
            None => false,
        }
    }

    /// Monic with f(0,y) = y^deg.
    pub fn is_distinguished(&self) -> bool {
        self.is_monic()
            && self.coeffs[..self.coeffs.len() - 1]
                .iter()
                .all(|c| !matches!(c.order(), Order::Finite(0) | Order::AtLeast(0)))
    }

    /// f(0, y) built from the known constant terms.
    pub fn at_x0(&self) -> UPoly {
        UPoly::new(
            self.field,
            self.coeffs.iter().map(|c| c.constant_term()).collect(),
        )
    }

    /// Order in y of f(0,y), or `None` when f(0,y) = 0.
    pub fn y_order_at_x0(&self) -> Option<usize> {
        self.at_x0().low_order()
    }

    pub fn neg(&self) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn add(&self, o: &YPolynomial) -> YPolynomial {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &YPolynomial) -> YPolynomial {
        self.zip(o, |a, b| a.sub(b))
    }

    fn zip(&self, o: &YPolynomial, op: impl Fn(&Series, &Series) -> Series) -> YPolynomial {
        assert_eq!(self.field, o.field, "field mismatch");
        let n = self.coeffs.len().max(o.coeffs.len());
        YPolynomial::new(
            self.field,
            (0..n).map(|j| op(&self.coeff(j), &o.coeff(j))).collect(),
        )
    }

    pub fn mul(&self, o: &YPolynomial) -> YPolynomial {
        self.mul_impl(o, None)
    }

    /// Product with every coefficient truncated at x^cap.
    pub fn mul_trunc(&self, o: &YPolynomial, cap: u64) -> YPolynomial {
        self.mul_impl(o, Some(cap))
    }

    fn mul_impl(&self, o: &YPolynomial, cap: Option<u64>) -> YPolynomial {
        assert_eq!(self.field, o.field, "field mismatch");
        if self.is_zero() || o.is_zero() {
            return YPolynomial::zero(self.field);
        }
        let mut out = vec![Series::zero(self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                let p = match cap {
                    Some(c) => a.mul_trunc(b, c),
                    None => a.mul(b),
                };
                out[i + j] = out[i + j].add(&p);
            }
        }
        YPolynomial::new(self.field, out)
    }

    pub fn checked_add(&self, o: &YPolynomial) -> Result<YPolynomial> {
        self.field.check(&o.field)?;
        Ok(self.add(o))
    }

    pub fn checked_sub(&self, o: &YPolynomial) -> Result<YPolynomial> {
        self.field.check(&o.field)?;
        Ok(self.sub(o))
    }

    pub fn checked_mul(&self, o: &YPolynomial) -> Result<YPolynomial> {
        self.field.check(&o.field)?;
        Ok(self.mul(o))
    }

    pub fn pow(&self, k: u64) -> YPolynomial {
        let mut acc = YPolynomial::one(self.field);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, c: &FieldValue) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|s| s.scale(c)).collect())
    }

    pub fn mul_series(&self, s: &Series) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Multiply by x^k.
    pub fn shift_x(&self, k: u64) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.shift(k)).collect())
    }

    /// Divide every coefficient by x^k (caller checks divisibility).
    pub fn unshift_x(&self, k: u64) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.unshift(k)).collect())
    }

    /// Multiply by y^k.
    pub fn shift_y_pow(&self, k: usize) -> YPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Series::zero(self.field); k];
        c.extend(self.coeffs.iter().cloned());
        YPolynomial::new(self.field, c)
    }

    pub fn truncate(&self, b: u64) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.truncate(b)).collect())
    }

    /// Treat the known terms as exact.
    pub fn as_exact(&self) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.as_exact()).collect())
    }

    /// Substitute x -> x^l.
    pub fn inflate_x(&self, l: u64) -> YPolynomial {
        YPolynomial::new(self.field, self.coeffs.iter().map(|c| c.inflate(l)).collect())
    }

    /// Euclidean division by a monic g: f = q·g + r with deg r < deg g.
    pub fn divmod_monic(&self, g: &YPolynomial) -> Result<(YPolynomial, YPolynomial)> {
        self.field.check(&g.field)?;
        let m = match g.degree() {
            Some(m) if m >= 1 && g.is_monic() => m,
            _ => return Err(Error::NonMonicDivisor),
        };
        let mut r = self.coeffs.clone();
        if r.len() <= m {
            return Ok((YPolynomial::zero(self.field), self.clone()));
        }
        let mut q = vec![Series::zero(self.field); r.len() - m];
        for i in (m..r.len()).rev() {
            let c = std::mem::replace(&mut r[i], Series::zero(self.field));
            if c.is_exact_zero() {
                continue;
            }
            for j in 0..m {
                if g.coeffs[j].is_exact_zero() {
                    continue;
                }
                let t = c.mul(&g.coeffs[j]);
                r[i - m + j] = r[i - m + j].sub(&t);
            }
            q[i - m] = c;
        }
        r.truncate(m);
        Ok((YPolynomial::new(self.field, q), YPolynomial::new(self.field, r)))
    }

    pub fn rem_monic(&self, g: &YPolynomial) -> Result<YPolynomial> {
        Ok(self.divmod_monic(g)?.1)
    }

    /// g-adic expansion f = Σ ψ_i g^{s−i}, s = floor(deg f / deg g);
    /// returns (ψ_0, …, ψ_s), each of degree < deg g.
    pub fn adic_expansion(&self, g: &YPolynomial) -> Result<Vec<YPolynomial>> {
        let m = match g.degree() {
            Some(m) if m >= 1 && g.is_monic() => m,
            _ => return Err(Error::NonMonicDivisor),
        };
        let s = self.deg() / m;
        let mut out = Vec::with_capacity(s + 1);
        let mut cur = self.clone();
        for _ in 0..s {
            let (q, r) = cur.divmod_monic(g)?;
            out.push(r);
            cur = q;
        }
        out.push(cur);
        out.reverse();
        Ok(out)
    }

    /// Horner recomposition of an adic expansion.
    pub fn from_adic(parts: &[YPolynomial], g: &YPolynomial) -> YPolynomial {
        let mut acc = YPolynomial::zero(g.field);
        for p in parts {
            acc = acc.mul(g).add(p);
        }
        acc
    }

    pub fn derivative_y(&self) -> YPolynomial {
        YPolynomial::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(&self.field.from_i64(j as i64)))
                .collect(),
        )
    }

    /// f(x, y + s(x)).
    pub fn shift_y(&self, s: &Series) -> YPolynomial {
        let mut acc: Vec<Series> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc <- acc·(y + s) + c
            let mut next = vec![Series::zero(self.field); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].add(&a.mul(s));
            }
            next[0] = next[0].add(c);
            acc = next;
        }
        YPolynomial::new(self.field, acc)
    }

    /// Minimum x-order over the coefficients, and whether it is determined
    /// (attained by a known term, with every coefficient known beyond it).
    pub fn x_content(&self) -> (u64, bool) {
        let mut m = u64::MAX;
        let mut attained = false;
        for c in &self.coeffs {
            match c.order() {
                Order::Finite(k) => {
                    if k < m {
                        m = k;
                        attained = true;
                    } else if k == m {
                        attained = true;
                    }
                }
                Order::AtLeast(b) => {
                    if b <= m {
                        m = b;
                        attained = false;
                    }
                }
                Order::Infinite => {}
            }
        }
        if m == u64::MAX {
            return (0, false);
        }
        let determined = attained
            && self
                .coeffs
                .iter()
                .all(|c| c.precision().is_none_or(|b| b > m));
        (m, determined)
    }

    /// Substitute y by a univariate series y(x): Σ c_j(x)·s(x)^j.
    pub fn eval_y(&self, s: &Series) -> Series {
        let mut acc = Series::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(s).add(c);
        }
        acc
    }
}

fn fmt_term(out: &mut String, c: &FieldValue, a: u64, b: usize, first: bool) {
    let s = c.to_string();
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r.to_string()),
        None => (false, s),
    };
    if neg {
        out.push('-');
    } else if !first {
        out.push('+');
    }
    let mut factors: Vec<String> = Vec::new();
    match a {
        0 => {}
        1 => factors.push("x".into()),
        _ => factors.push(format!("x^{a}")),
    }
    match b {
        0 => {}
        1 => factors.push("y".into()),
        _ => factors.push(format!("y^{b}")),
    }
    if factors.is_empty() {
        out.push_str(&body);
    } else {
        if body != "1" {
            out.push_str(&body);
            out.push('*');
        }
        out.push_str(&factors.join("*"));
    }
}

impl fmt::Display for YPolynomial {
    /// Canonical form: terms by ascending total degree, ties by descending
    /// y-degree; truncated coefficients are followed by their O-term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(u64, usize, &FieldValue)> = Vec::new();
        for (b, c) in self.coeffs.iter().enumerate() {
            for (a, v) in c.terms() {
                terms.push((*a, b, v));
            }
        }
        terms.sort_by(|s, t| {
            (s.0 + s.1 as u64)
                .cmp(&(t.0 + t.1 as u64))
                .then(t.1.cmp(&s.1))
        });
        let mut out = String::new();
        for (i, (a, b, v)) in terms.iter().enumerate() {
            fmt_term(&mut out, v, *a, *b, i == 0);
        }
        for (b, c) in self.coeffs.iter().enumerate() {
            if let Some(p) = c.precision() {
                if !out.is_empty() {
                    out.push('+');
                }
                out.push_str(&format!("O(x^{p})"));
                match b {
                    0 => {}
                    1 => out.push_str("*y"),
                    _ => out.push_str(&format!("*y^{b}")),
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}
