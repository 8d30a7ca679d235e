//! Coefficient fields: prime fields F_p and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Prime(u64),
    Rationals,
}

/// A coefficient field, either F_p (p prime, p < 2^32) or Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: Kind,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// The prime field F_p. Fails unless p is a prime below 2^32.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { kind: Kind::Prime(p) })
    }

    pub fn rationals() -> Self {
        FieldSpec { kind: Kind::Rationals }
    }

    /// Characteristic of the field (0 for Q).
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            Kind::Prime(p) => p,
            Kind::Rationals => 0,
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.kind, Kind::Prime(_))
    }

    /// True when `n` is zero in the field.
    pub fn divides(&self, n: u64) -> bool {
        match self.kind {
            Kind::Prime(p) => n.is_multiple_of(p),
            Kind::Rationals => n == 0,
        }
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldValue {
        match self.kind {
            Kind::Prime(p) => FieldValue::Mod {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
            Kind::Rationals => FieldValue::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldValue {
        match self.kind {
            Kind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldValue::Mod {
                    v: r.to_u64().expect("residue fits"),
                    p,
                }
            }
            Kind::Rationals => FieldValue::Rat(BigRational::from_integer(n.clone())),
        }
    }

    /// num/den mapped into the field; fails when den is zero in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldValue> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.from_bigint(num).div(&d))
    }

    /// Every element of a prime field, in increasing residue order.
    pub fn elements(&self) -> Option<Vec<FieldValue>> {
        match self.kind {
            Kind::Prime(p) => Some((0..p).map(|v| FieldValue::Mod { v, p }).collect()),
            Kind::Rationals => None,
        }
    }

    pub fn check(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(*self, *other))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Prime(p) => write!(f, "F{p}"),
            Kind::Rationals => write!(f, "Q"),
        }
    }
}

/// An element of a [`FieldSpec`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    /// Residue `0 <= v < p`.
    Mod { v: u64, p: u64 },
    /// Reduced fraction with positive denominator.
    Rat(BigRational),
}

fn mismatch() -> ! {
    panic!("arithmetic between values of different fields")
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl FieldValue {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldValue::Mod { p, .. } => FieldSpec { kind: Kind::Prime(*p) },
            FieldValue::Rat(_) => FieldSpec::rationals(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Mod { v, .. } => *v == 0,
            FieldValue::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Mod { v, .. } => *v == 1,
            FieldValue::Rat(r) => r.is_one(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<FieldValue> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldValue::Mod { v, p } => FieldValue::Mod {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
            FieldValue::Rat(r) => FieldValue::Rat(r.recip()),
        })
    }

    /// Division; panics on a zero divisor.
    pub fn div(&self, other: &FieldValue) -> FieldValue {
        self * &other.inv().expect("division by zero field element")
    }

    pub fn pow(&self, mut e: u64) -> FieldValue {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer value for rationals with denominator 1 and for residues.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            FieldValue::Mod { v, .. } => Some(BigInt::from(*v)),
            FieldValue::Rat(r) if r.is_integer() => Some(r.to_integer()),
            FieldValue::Rat(_) => None,
        }
    }

    /// Residue value for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldValue::Mod { v, .. } => Some(*v),
            FieldValue::Rat(_) => None,
        }
    }

    /// True for rationals with a negative sign; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldValue::Mod { .. } => false,
            FieldValue::Rat(r) => r.is_negative(),
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Mod { v, .. } => write!(f, "{v}"),
            FieldValue::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Add for &FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Mod { v: a, p }, FieldValue::Mod { v: b, p: q }) if p == q => {
                let s = a + b;
                FieldValue::Mod {
                    v: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a + b),
            _ => mismatch(),
        }
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Mod { v: a, p }, FieldValue::Mod { v: b, p: q }) if p == q => {
                FieldValue::Mod {
                    v: if a >= b { a - b } else { a + p - b },
                    p: *p,
                }
            }
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a - b),
            _ => mismatch(),
        }
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Mod { v: a, p }, FieldValue::Mod { v: b, p: q }) if p == q => {
                FieldValue::Mod { v: a * b % p, p: *p }
            }
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a * b),
            _ => mismatch(),
        }
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Mod { v, p } => FieldValue::Mod {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
            FieldValue::Rat(a) => FieldValue::Rat(-a),
        }
    }
}

impl Add for FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: FieldValue) -> FieldValue {
        &self + &rhs
    }
}

impl Sub for FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: FieldValue) -> FieldValue {
        &self - &rhs
    }
}

impl Mul for FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: FieldValue) -> FieldValue {
        &self * &rhs
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        -&self
    }
}
