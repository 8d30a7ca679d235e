//! Approximate roots, characteristic sequences and key polynomials.
//!
//! Two routes: approximate roots √[e]{f} when the characteristic does not
//! divide n, and a search driven by a good parametrization otherwise.

use num_integer::Integer;

use crate::algebra::{
    default_precision, eval_param, weierstrass_prepare, FieldValue, Order, Parametrization, Series, YPolynomial,
};
use crate::error::{Error, Result};
use crate::intersection::{imult, imult_param};
use crate::newton::{abhyankar_irreducible, AbhyankarVerdict};
use crate::semigroup::{membership, CharSequence};

/// A branch with its characteristic sequence and key polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchData {
    /// Distinguished equation of the branch.
    pub f: YPolynomial,
    pub n: u64,
    pub charseq: CharSequence,
    /// f_0, …, f_{h−1}.
    pub keys: Vec<YPolynomial>,
    /// b̄_1, …, b̄_h.
    pub key_values: Vec<u64>,
    pub param: Option<Parametrization>,
}

impl BranchData {
    /// f_0, …, f_{h−1} followed by f itself.
    pub fn keys_with_f(&self) -> Vec<YPolynomial> {
        let mut k = self.keys.clone();
        k.push(self.f.clone());
        k
    }

    /// i₀(f, g), along the parametrization when one is attached.
    pub fn value(&self, g: &YPolynomial) -> Result<Order> {
        match &self.param {
            Some(par) => imult_param(par, g),
            None => imult(&self.f, g),
        }
    }
}

fn check_invertible(field_char: u64, d: u64) -> Result<()> {
    if field_char != 0 && d.is_multiple_of(field_char) {
        return Err(Error::CharacteristicDivides { p: field_char, n: d });
    }
    Ok(())
}

/// τ(g) = g + a_1/d where target = g^d + a_1·g^{d−1} + ⋯ is the g-adic
/// expansion.
pub fn tschirnhausen(g: &YPolynomial, target: &YPolynomial, d: u64) -> Result<YPolynomial> {
    let field = target.field();
    check_invertible(field.characteristic(), d)?;
    if !g.is_monic() || !target.is_monic() {
        return Err(Error::NonMonicDivisor);
    }
    if g.deg() as u64 * d != target.deg() as u64 {
        return Err(Error::Degree(format!(
            "deg target = {} is not {d}·deg g = {}",
            target.deg(),
            d * g.deg() as u64
        )));
    }
    let parts = target.adic_expansion(g)?;
    let a1 = parts.get(1).cloned().unwrap_or_else(|| YPolynomial::zero(field));
    let inv = field.from_i64(d as i64).inv().expect("d is invertible");
    Ok(g.add(&a1.scale(&inv)))
}

/// The approximate d-th root of a monic f, by iterating the Tschirnhausen
/// operator from the seed y^{deg f/d}.
pub fn approximate_root(f: &YPolynomial, d: u64) -> Result<YPolynomial> {
    let field = f.field();
    if d == 0 || !(f.deg() as u64).is_multiple_of(d) {
        return Err(Error::Degree(format!("{d} does not divide deg f = {}", f.deg())));
    }
    check_invertible(field.characteristic(), d)?;
    if !f.is_monic() {
        return Err(Error::NonMonicDivisor);
    }
    if d == 1 {
        return Ok(f.clone());
    }
    let m = f.deg() / d as usize;
    let mut g = YPolynomial::monomial(field.one(), 0, m);
    let cap = m as u64 + 2;
    for _ in 0..cap {
        let parts = f.adic_expansion(&g)?;
        let done = parts.get(1).is_none_or(|a| a.coeffs().iter().all(|c| c.has_no_terms()));
        if done {
            return Ok(g);
        }
        g = tschirnhausen(&g, f, d)?;
    }
    Err(Error::IterationCap(cap))
}

/// Output of the approximate-root procedure: b̄_k = i₀(f, √[e_{k−1}]{f}),
/// e_k = gcd(e_{k−1}, b̄_k), stopping when e stops decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRootData {
    /// b̄_0, b̄_1, … (the last entry may fail to lower the gcd).
    pub values: Vec<u64>,
    /// e_0, e_1, …
    pub gcds: Vec<u64>,
    /// √[e_{k−1}]{f} for k = 1, 2, …
    pub roots: Vec<YPolynomial>,
    /// e_h = 1 and n_{k−1}·b̄_{k−1} < b̄_k for k ≥ 2.
    pub condition1: bool,
    /// Set when some i₀(f, root) was infinite (a shared factor).
    pub infinite_at: Option<usize>,
}

impl ApproxRootData {
    pub fn charseq(&self) -> Option<CharSequence> {
        if self.condition1 {
            CharSequence::new(self.values.clone()).ok()
        } else {
            None
        }
    }
}

/// Candidate characteristic sequence of a distinguished f via approximate
/// roots; needs the characteristic not to divide n.
pub fn charseq_via_approx_roots(f: &YPolynomial) -> Result<ApproxRootData> {
    let n = f.deg() as u64;
    if n == 0 {
        return Err(Error::Degree("f has degree 0".into()));
    }
    check_invertible(f.field().characteristic(), n)?;
    if !f.is_distinguished() {
        return Err(Error::Hypothesis("f is not distinguished".into()));
    }
    let mut values = vec![n];
    let mut gcds = vec![n];
    let mut roots = Vec::new();
    let mut infinite_at = None;
    let mut condition1 = true;
    while *gcds.last().unwrap() > 1 {
        let e = *gcds.last().unwrap();
        let root = approximate_root(f, e)?;
        let v = imult(f, &root)?;
        roots.push(root);
        let b = match v {
            Order::Finite(b) => b,
            Order::Infinite => {
                infinite_at = Some(values.len());
                condition1 = false;
                break;
            }
            Order::AtLeast(l) => {
                return Err(Error::Precision(format!("i0(f, root) only known to be >= {l}")));
            }
        };
        let k = values.len();
        if k >= 2 {
            let nk = gcds[k - 2] / gcds[k - 1];
            if nk * values[k - 1] >= b {
                condition1 = false;
            }
        }
        values.push(b);
        let next = e.gcd(&b);
        gcds.push(next);
        if next == e {
            condition1 = false;
            break;
        }
    }
    Ok(ApproxRootData {
        values,
        gcds,
        roots,
        condition1,
        infinite_at,
    })
}

/// A key polynomial found by the parametrization-driven search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyStep {
    pub key: YPolynomial,
    pub value: u64,
    /// Number of corrections g ← g − c·m applied.
    pub corrections: usize,
}

fn leading(s: &Series) -> Option<(u64, FieldValue)> {
    s.leading().map(|(e, c)| (e, c.clone()))
}

/// Next key polynomial f_k and b̄_{k+1} from keys f_0..f_{k−1} and values
/// b̄_0..b̄_k, along a good parametrization of f.
pub fn key_search_with_param(par: &Parametrization, keys: &[YPolynomial], values: &[u64]) -> Result<KeyStep> {
    let field = par.field();
    let k = keys.len();
    if values.len() != k + 1 {
        return Err(Error::Degree("need b̄_0..b̄_k for keys f_0..f_{k-1}".into()));
    }
    let gcds = crate::semigroup::gcd_chain(values);
    let ek = gcds[k];
    if ek == 1 {
        return Err(Error::Hypothesis("e_k = 1: the sequence is already complete".into()));
    }
    let b = par.precision();
    let key_evals: Vec<Series> = keys.iter().map(|g| eval_param(g, par)).collect();
    let mut g = if k == 0 {
        YPolynomial::y(field)
    } else {
        keys[k - 1].pow(gcds[k - 1] / ek)
    };
    for corrections in 0..b as usize {
        let eval = eval_param(&g, par);
        let v = match eval.order() {
            Order::Finite(v) => v,
            Order::AtLeast(l) => {
                return Err(Error::Precision(format!(
                    "parametrization known to t^{b}; reached t-order {l}"
                )))
            }
            Order::Infinite => return Err(Error::Hypothesis("g vanishes along the parametrization".into())),
        };
        let rep = match membership(v, values) {
            None => {
                return Ok(KeyStep {
                    key: g,
                    value: v,
                    corrections,
                })
            }
            Some(r) => r,
        };
        // m = x^{a_0}·f_0^{a_1}⋯f_{k−1}^{a_k}
        let mut m = YPolynomial::monomial(field.one(), rep[0], 0);
        let mut m_eval = par.phi().pow(rep[0]).truncate(b);
        for (i, a) in rep.iter().enumerate().skip(1) {
            if *a > 0 {
                m = m.mul(&keys[i - 1].pow(*a));
                m_eval = m_eval.mul_trunc(&key_evals[i - 1].pow(*a), b);
            }
        }
        let (_, cg) = leading(&eval).expect("finite order");
        let (em, cm) = leading(&m_eval)
            .ok_or_else(|| Error::Precision("monomial vanishes to the working precision".into()))?;
        debug_assert_eq!(em, v);
        g = g.sub(&m.scale(&cg.div(&cm)));
    }
    Err(Error::IterationCap(b))
}

/// Complete characteristic data of f from a good parametrization.
pub fn branch_data_with_param(f: &YPolynomial, par: &Parametrization) -> Result<BranchData> {
    f.field().check(&par.field())?;
    let n = match par.phi().order() {
        Order::Finite(n) => n,
        _ => return Err(Error::Hypothesis("x vanishes along the parametrization".into())),
    };
    let mut keys = Vec::new();
    let mut values = vec![n];
    while crate::semigroup::gcd_chain(&values).last() != Some(&1) {
        let step = key_search_with_param(par, &keys, &values)?;
        keys.push(step.key);
        values.push(step.value);
    }
    let charseq = CharSequence::new(values.clone())?;
    let f = if f.is_distinguished() {
        f.clone()
    } else {
        weierstrass_prepare(f, default_precision(n as usize).max(par.precision()))?.0
    };
    Ok(BranchData {
        f,
        n,
        charseq,
        keys,
        key_values: values[1..].to_vec(),
        param: Some(par.clone()),
    })
}

/// Characteristic data of an irreducible distinguished f by approximate
/// roots (characteristic not dividing n).
pub fn branch_data(f: &YPolynomial) -> Result<BranchData> {
    match abhyankar_irreducible(f)? {
        AbhyankarVerdict::Irreducible(cert) => {
            let h = cert.charseq.h();
            Ok(BranchData {
                f: f.clone(),
                n: f.deg() as u64,
                key_values: cert.charseq.values()[1..].to_vec(),
                charseq: cert.charseq,
                keys: cert.roots[..h].to_vec(),
                param: None,
            })
        }
        AbhyankarVerdict::Reducible(reason) => Err(Error::Hypothesis(format!("f is reducible: {reason}"))),
        AbhyankarVerdict::Inapplicable { p, n } => Err(Error::CharacteristicDivides { p, n }),
    }
}

/// Verdict of [`verify_key`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyCheck {
    pub monic: bool,
    pub degree: usize,
    pub expected_degree: u64,
    pub value: Order,
    pub expected_value: Order,
    /// Monic, degree n/e_k and i₀(f,g) = b̄_{k+1}.
    pub is_key: bool,
    /// Monic, degree n/e_k and i₀(f,g) ≢ 0 mod e_k (sufficient for a key).
    pub sufficient: bool,
}

/// Is g a k-th key polynomial of the branch?
pub fn verify_key(data: &BranchData, g: &YPolynomial, k: usize) -> Result<KeyCheck> {
    let cs = &data.charseq;
    if k > cs.h() {
        return Err(Error::Degree(format!("k = {k} exceeds h = {}", cs.h())));
    }
    let ek = cs.e(k);
    let expected_degree = data.n / ek;
    let expected_value = if k < cs.h() {
        Order::Finite(cs.b(k + 1))
    } else {
        Order::Infinite
    };
    let monic = g.is_monic();
    let degree = g.deg();
    let value = data.value(g)?;
    let shape = monic && degree as u64 == expected_degree;
    Ok(KeyCheck {
        monic,
        degree,
        expected_degree,
        value,
        expected_value,
        is_key: shape && value == expected_value,
        sufficient: shape && value.finite().is_some_and(|v| v % ek != 0),
    })
}

/// One term g_α·f_0^{α_1}⋯f_{h−1}^{α_h} of a multi-adic expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdicTerm {
    pub exponents: Vec<usize>,
    pub coeff: Series,
}

/// Expansion g = Σ g_α f_0^{α_1}⋯f_{h−1}^{α_h} with 0 ≤ α_i < n_i, for
/// deg g < n; keys are f_0..f_{h−1} of degrees n/e_0, …, n/e_{h−1}.
pub fn multiadic_expand(keys: &[YPolynomial], n: u64, g: &YPolynomial) -> Result<Vec<AdicTerm>> {
    if g.deg() as u64 >= n && !g.is_zero() {
        return Err(Error::Degree(format!("deg g = {} is not below n = {n}", g.deg())));
    }
    let mut out = Vec::new();
    expand_into(keys, g, &mut vec![0; keys.len()], &mut out)?;
    Ok(out)
}

fn expand_into(keys: &[YPolynomial], g: &YPolynomial, alpha: &mut Vec<usize>, out: &mut Vec<AdicTerm>) -> Result<()> {
    if g.is_zero() {
        return Ok(());
    }
    match keys.split_last() {
        None => {
            let c = g.coeff(0);
            if !c.is_exact_zero() {
                out.push(AdicTerm {
                    exponents: alpha.clone(),
                    coeff: c,
                });
            }
            Ok(())
        }
        Some((last, rest)) => {
            let parts = g.adic_expansion(last)?;
            let s = parts.len() - 1;
            for (i, part) in parts.iter().enumerate() {
                alpha[rest.len()] = s - i;
                expand_into(rest, part, alpha, out)?;
            }
            alpha[rest.len()] = 0;
            Ok(())
        }
    }
}

/// v_f(g) = min over terms of ord(g_α)·n + Σ α_i·b̄_i (the term values
/// are pairwise distinct, so no cancellation occurs).
pub fn multiadic_value(terms: &[AdicTerm], cs: &CharSequence) -> Order {
    let n = cs.multiplicity();
    let mut exact: Option<u64> = None;
    let mut bound: Option<u64> = None;
    for t in terms {
        let shift: u64 = t.exponents.iter().enumerate().map(|(i, a)| *a as u64 * cs.b(i + 1)).sum();
        match t.coeff.order().times(n).plus(Order::Finite(shift)) {
            Order::Finite(a) => exact = Some(exact.map_or(a, |e| e.min(a))),
            Order::AtLeast(a) => bound = Some(bound.map_or(a, |e| e.min(a))),
            Order::Infinite => {}
        }
    }
    match (exact, bound) {
        (Some(a), Some(l)) if a < l => Order::Finite(a),
        (Some(a), None) => Order::Finite(a),
        (a, Some(l)) => Order::AtLeast(a.map_or(l, |a| a.min(l))),
        (None, None) => Order::Infinite,
    }
}
