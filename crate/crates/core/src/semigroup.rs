//! Characteristic sequences and the numerical semigroups they generate.
//!
//! A sequence (v_0, …, v_h) carries its gcd chain d_i = gcd(v_0, …, v_i)
//! and quotients n_i = d_{i−1}/d_i. It is an n-characteristic sequence
//! (n = v_0) when d_h = 1, every n_i > 1, and n_{i−1}·v_{i−1} < v_i.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// The first axiom a raw sequence violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidReason {
    /// An entry is zero.
    NonPositive { index: usize },
    /// n_index = 1: the gcd does not drop at this step.
    TrivialStep { index: usize, gcd: u64 },
    /// d_h ≠ 1.
    GcdNotOne { last: usize, gcd: u64 },
    /// n_{index−1}·v_{index−1} ≥ v_index.
    NotIncreasing { index: usize, lhs: u64, rhs: u64 },
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::NonPositive { index } => write!(f, "entry {index} is not positive"),
            InvalidReason::TrivialStep { index, gcd } => {
                write!(f, "axiom 1: n_{index} = 1 (d_{} = d_{index} = {gcd})", index - 1)
            }
            InvalidReason::GcdNotOne { last, gcd } => write!(f, "axiom 1: d_{last} = {gcd} != 1"),
            InvalidReason::NotIncreasing { index, lhs, rhs } => write!(
                f,
                "axiom 2: n_{}*v_{} = {lhs} >= v_{index} = {rhs}",
                index - 1,
                index - 1
            ),
        }
    }
}

/// gcd chain d_i = gcd(v_0, …, v_i).
pub fn gcd_chain(v: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(v.len());
    let mut g = 0u64;
    for x in v {
        g = g.gcd(x);
        out.push(g);
    }
    out
}

/// Check the axioms; `Ok(())` when valid.
pub fn validate_charseq(v: &[u64]) -> Result<()> {
    check_axioms(v, true)
}

/// The axioms without the requirement d_h = 1 (prefixes of characteristic
/// sequences, such as (b̄_0, …, b̄_k) with e_k > 1).
pub fn validate_prefix(v: &[u64]) -> Result<()> {
    check_axioms(v, false)
}

fn check_axioms(v: &[u64], full: bool) -> Result<()> {
    if v.is_empty() {
        return Err(Error::EmptySequence);
    }
    let invalid = |r| Err(Error::InvalidSequence(r));
    if let Some(index) = v.iter().position(|x| *x == 0) {
        return invalid(InvalidReason::NonPositive { index });
    }
    let d = gcd_chain(v);
    for i in 1..v.len() {
        if d[i - 1] == d[i] {
            return invalid(InvalidReason::TrivialStep { index: i, gcd: d[i] });
        }
    }
    if full && d[v.len() - 1] != 1 {
        return invalid(InvalidReason::GcdNotOne {
            last: v.len() - 1,
            gcd: d[v.len() - 1],
        });
    }
    for i in 2..v.len() {
        let lhs = (d[i - 2] / d[i - 1]) * v[i - 1];
        if lhs >= v[i] {
            return invalid(InvalidReason::NotIncreasing { index: i, lhs, rhs: v[i] });
        }
    }
    Ok(())
}

/// A validated n-characteristic sequence (b̄_0, …, b̄_h).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharSequence {
    values: Vec<u64>,
    d: Vec<u64>,
}

impl CharSequence {
    pub fn new(values: Vec<u64>) -> Result<CharSequence> {
        validate_charseq(&values)?;
        let d = gcd_chain(&values);
        Ok(CharSequence { values, d })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// b̄_i
    pub fn b(&self, i: usize) -> u64 {
        self.values[i]
    }

    /// n = b̄_0
    pub fn multiplicity(&self) -> u64 {
        self.values[0]
    }

    pub fn h(&self) -> usize {
        self.values.len() - 1
    }

    /// e_i = gcd(b̄_0, …, b̄_i)
    pub fn e(&self, i: usize) -> u64 {
        self.d[i]
    }

    pub fn gcds(&self) -> &[u64] {
        &self.d
    }

    /// n_i = e_{i−1}/e_i for 1 ≤ i ≤ h.
    pub fn n(&self, i: usize) -> u64 {
        self.d[i - 1] / self.d[i]
    }

    pub fn quotients(&self) -> Vec<u64> {
        (1..=self.h()).map(|i| self.n(i)).collect()
    }

    pub fn conductor(&self) -> u64 {
        conductor(self)
    }

    /// (b̄_0/e_k, …, b̄_k/e_k), itself a characteristic sequence.
    pub fn scaled_prefix(&self, k: usize) -> CharSequence {
        let e = self.d[k];
        CharSequence::new(self.values[..=k].iter().map(|v| v / e).collect())
            .expect("scaled prefixes of characteristic sequences are characteristic")
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn inverse_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// The unique a = Σ a_i v_i with a_0 ∈ Z and 0 ≤ a_i < n_i for i ≥ 1.
/// Works on raw sequences (the axioms are not needed).
pub fn bezout(a: i64, v: &[u64]) -> Result<Vec<i64>> {
    if v.is_empty() {
        return Err(Error::EmptySequence);
    }
    if v.contains(&0) {
        return Err(Error::InvalidSequence(InvalidReason::NonPositive {
            index: v.iter().position(|x| *x == 0).unwrap(),
        }));
    }
    let d = gcd_chain(v);
    let k = v.len() - 1;
    if a.rem_euclid(d[k] as i64) != 0 {
        return Err(Error::NotDivisible { a, d: d[k] });
    }
    let mut rest = a as i128;
    let mut coeffs = vec![0i64; v.len()];
    for i in (1..=k).rev() {
        let ni = (d[i - 1] / d[i]) as i128;
        let di = d[i] as i128;
        if ni > 1 {
            let vi = v[i] as i128 / di;
            let ai = ((rest / di).rem_euclid(ni) * inverse_mod(vi, ni)).rem_euclid(ni);
            coeffs[i] = ai as i64;
            rest -= ai * v[i] as i128;
        }
    }
    debug_assert_eq!(rest % v[0] as i128, 0);
    coeffs[0] = (rest / v[0] as i128) as i64;
    Ok(coeffs)
}

/// Representation of a in Nv_0 + ⋯ + Nv_k via the Bézout sign criterion.
///
/// The sequence must satisfy the characteristic axioms except possibly
/// d_k = 1 (so prefixes of characteristic sequences are allowed).
pub fn membership(a: u64, v: &[u64]) -> Option<Vec<u64>> {
    let d = *gcd_chain(v).last()?;
    if !a.is_multiple_of(d) {
        return None;
    }
    let rep = bezout(a as i64, v).ok()?;
    if rep[0] < 0 {
        None
    } else {
        Some(rep.into_iter().map(|x| x as u64).collect())
    }
}

/// Bézout representation of n_k·v_k over the prefix (v_0, …, v_{k−1});
/// its first coefficient is positive for characteristic sequences.
pub fn step_representation(cs: &CharSequence, k: usize) -> Vec<u64> {
    let target = cs.n(k) * cs.b(k);
    membership(target, &cs.values()[..k]).expect("n_k b_k lies in the previous semigroup")
}

/// c = Σ (n_k − 1) v_k − v_0 + 1.
pub fn conductor(cs: &CharSequence) -> u64 {
    let s: u64 = (1..=cs.h()).map(|k| (cs.n(k) - 1) * cs.b(k)).sum();
    s + 1 - cs.b(0)
}

/// Boolean table of semigroup membership for 0..=limit (coin-problem sieve).
pub fn sieve(v: &[u64], limit: u64) -> Vec<bool> {
    let mut inside = vec![false; limit as usize + 1];
    inside[0] = true;
    for g in v {
        let g = *g as usize;
        for a in g..inside.len() {
            if inside[a - g] {
                inside[a] = true;
            }
        }
    }
    inside
}

/// All gaps, found by sieving up to the conductor.
pub fn gaps(cs: &CharSequence) -> Vec<u64> {
    let c = conductor(cs);
    if c == 0 {
        return Vec::new();
    }
    sieve(cs.values(), c)
        .iter()
        .enumerate()
        .filter(|(_, m)| !**m)
        .map(|(a, _)| a as u64)
        .collect()
}

/// How the minimal generating sequence relates to the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorRelation {
    /// v_0 < v_1: the input already is the minimal sequence.
    Unchanged,
    /// v_1 < v_0 and v_1 ∤ v_0: the first two entries swap.
    Swapped,
    /// v_1 | v_0: the first entry is redundant.
    DroppedFirst,
}

/// The min(G∖{0})-characteristic sequence of the semigroup G generated by cs.
pub fn minimal_generators(cs: &CharSequence) -> (Vec<u64>, GeneratorRelation) {
    let v = cs.values();
    if v.len() == 1 || v[0] < v[1] {
        return (v.to_vec(), GeneratorRelation::Unchanged);
    }
    if v[0].is_multiple_of(v[1]) {
        return (v[1..].to_vec(), GeneratorRelation::DroppedFirst);
    }
    let mut out = vec![v[1], v[0]];
    out.extend_from_slice(&v[2..]);
    (out, GeneratorRelation::Swapped)
}

/// Conductor, gaps and minimal generators of a characteristic sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupData {
    pub generators: CharSequence,
    pub conductor: u64,
    pub gaps: Vec<u64>,
    pub minimal_generators: Vec<u64>,
    pub relation: GeneratorRelation,
}

pub fn semigroup_data(cs: &CharSequence) -> SemigroupData {
    let (minimal_generators, relation) = minimal_generators(cs);
    SemigroupData {
        generators: cs.clone(),
        conductor: conductor(cs),
        gaps: gaps(cs),
        minimal_generators,
        relation,
    }
}

/// Every characteristic sequence with b̄_0 ≤ max_b0 and h ≤ max_h inside the
/// window b̄_1 ≤ 2·b̄_0 + 1 and b̄_k ≤ n_{k−1}·b̄_{k−1} + 2·e_{k−1} for k ≥ 2.
pub fn sequences_in_window(max_b0: u64, max_h: usize) -> Vec<CharSequence> {
    fn extend(prefix: &mut Vec<u64>, max_h: usize, out: &mut Vec<CharSequence>) {
        let d = gcd_chain(prefix);
        let e = *d.last().unwrap();
        if e == 1 {
            out.push(CharSequence::new(prefix.clone()).unwrap());
            return;
        }
        if prefix.len() > max_h {
            return;
        }
        let (lo, hi) = if prefix.len() == 1 {
            (1, 2 * prefix[0] + 1)
        } else {
            let k = prefix.len() - 1;
            let nk = d[k - 1] / d[k];
            (nk * prefix[k] + 1, nk * prefix[k] + 2 * e)
        };
        for b in lo..=hi {
            if e.gcd(&b) < e {
                prefix.push(b);
                extend(prefix, max_h, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    for b0 in 1..=max_b0 {
        extend(&mut vec![b0], max_h, &mut out);
    }
    out
}
