//! Dense univariate polynomials over the coefficient field.
//!
//! Used for the residue polynomials f(0,y) in Hensel lifting and for
//! edge polynomials of Newton polygons.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::field::{FieldSpec, FieldValue};

/// Coefficient vector, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    pub field: FieldSpec,
    pub coeffs: Vec<FieldValue>,
}

impl UPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<FieldValue>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> UPoly {
        UPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(c: FieldValue) -> UPoly {
        UPoly::new(c.spec(), vec![c])
    }

    /// y^k
    pub fn monomial(field: FieldSpec, k: usize) -> UPoly {
        let mut c = vec![field.zero(); k + 1];
        c[k] = field.one();
        UPoly { field, coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldValue {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lead(&self) -> Option<&FieldValue> {
        self.coeffs.last()
    }

    /// Multiplicity of 0 as a root.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new(self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(self.field, out)
    }

    pub fn scale(&self, c: &FieldValue) -> UPoly {
        UPoly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Truncate modulo y^k.
    pub fn mod_pow(&self, k: usize) -> UPoly {
        UPoly::new(self.field, self.coeffs.iter().take(k).cloned().collect())
    }

    /// Exact division by y^k; the low coefficients must vanish.
    pub fn div_pow(&self, k: usize) -> UPoly {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        UPoly::new(self.field, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Euclidean division over the field.
    pub fn divmod(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dc);
            }
            q[i] = c;
        }
        r.truncate(dd);
        (UPoly::new(self.field, q), UPoly::new(self.field, r))
    }

    /// (g, s, t) with s·a + t·b = g monic gcd.
    pub fn ext_gcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly, UPoly) {
        let f = a.field;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (UPoly::constant(f.one()), UPoly::zero(f));
        let (mut t0, mut t1) = (UPoly::zero(f), UPoly::constant(f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead().cloned() {
            Some(l) => {
                let inv = l.inv().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        UPoly::ext_gcd(a, b).0
    }

    pub fn eval(&self, z: &FieldValue) -> FieldValue {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.from_i64(i as i64))
                .collect(),
        )
    }

    /// Multiplicity of z as a root.
    pub fn root_multiplicity(&self, z: &FieldValue) -> usize {
        let lin = UPoly::new(self.field, vec![-z, self.field.one()]);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, r) = p.divmod(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// Distinct roots in the base field, when they can be found:
    /// exhaustive scan over F_p for p up to `scan_limit`, rational-root
    /// candidates over Q. Returns `None` when the search is not attempted.
    pub fn base_field_roots(&self, scan_limit: u64) -> Option<Vec<FieldValue>> {
        if self.degree().is_none_or(|d| d == 0) {
            return Some(Vec::new());
        }
        if self.field.is_prime_field() {
            let p = self.field.characteristic();
            if p > scan_limit {
                return None;
            }
            let els = self.field.elements().unwrap();
            return Some(els.into_iter().filter(|z| self.eval(z).is_zero()).collect());
        }
        rational_roots(self)
    }
}

fn divisors(n: &BigInt, cap: u64) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > cap {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn rational_roots(p: &UPoly) -> Option<Vec<FieldValue>> {
    let f = p.field;
    // strip the root 0 first
    let low = p.low_order()?;
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(f.zero());
    }
    let trimmed = p.div_pow(low);
    if trimmed.degree() == Some(0) {
        return Some(roots);
    }
    // clear denominators
    let mut lcm = BigInt::one();
    for c in &trimmed.coeffs {
        if let FieldValue::Rat(r) = c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = trimmed
        .coeffs
        .iter()
        .map(|c| match c {
            FieldValue::Rat(r) => (r * num_rational::BigRational::from_integer(lcm.clone())).to_integer(),
            _ => unreachable!(),
        })
        .collect();
    let nums = divisors(&ints[0], 1_000_000)?;
    let dens = divisors(ints.last().unwrap(), 1_000_000)?;
    for a in &nums {
        for b in &dens {
            for sign in [1i64, -1] {
                let z = f
                    .from_ratio(&(a * BigInt::from(sign)), b)
                    .expect("nonzero denominator");
                if trimmed.eval(&z).is_zero() && !roots.contains(&z) {
                    roots.push(z);
                }
            }
        }
    }
    Some(roots)
}
