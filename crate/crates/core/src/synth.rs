//! Branches with a prescribed characteristic sequence.
//!
//! g_0 = y and g_k = g_{k−1}^{n_k} + c_k·x^{a_{k0}}·g_0^{a_{k1}}⋯g_{k−2}^{a_{k,k−1}},
//! where n_k·b̄_k = Σ a_{ki}·b̄_i is the Bézout row of step k.

use crate::algebra::{FieldSpec, FieldValue, Order, YPolynomial};
use crate::approot::BranchData;
use crate::error::{Error, Result};
use crate::intersection::imult;
use crate::semigroup::{step_representation, CharSequence};

/// A characteristic sequence with one nonzero constant per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisPlan {
    pub charseq: CharSequence,
    pub constants: Vec<FieldValue>,
    /// Row k−1 holds (a_{k0}, …, a_{k,k−1}).
    pub bezout_rows: Vec<Vec<u64>>,
}

impl SynthesisPlan {
    pub fn new(charseq: CharSequence, constants: Vec<FieldValue>) -> Result<SynthesisPlan> {
        if constants.len() != charseq.h() {
            return Err(Error::Degree(format!(
                "{} constants given for h = {}",
                constants.len(),
                charseq.h()
            )));
        }
        if constants.iter().any(|c| c.is_zero()) {
            return Err(Error::ZeroConstant);
        }
        if let Some(c) = constants.first() {
            let field = c.spec();
            if constants.iter().any(|d| d.spec() != field) {
                return Err(Error::FieldMismatch(field, constants.iter().find(|d| d.spec() != field).unwrap().spec()));
            }
        }
        let bezout_rows = (1..=charseq.h()).map(|k| step_representation(&charseq, k)).collect();
        Ok(SynthesisPlan {
            charseq,
            constants,
            bezout_rows,
        })
    }

    /// All constants equal to 1.
    pub fn with_unit_constants(charseq: CharSequence, field: FieldSpec) -> SynthesisPlan {
        let h = charseq.h();
        SynthesisPlan::new(charseq, vec![field.one(); h]).expect("unit constants are valid")
    }
}

/// x^{a_0}·g_0^{a_1}⋯g_{k−1}^{a_k}
fn bezout_monomial(field: FieldSpec, row: &[u64], keys: &[YPolynomial]) -> YPolynomial {
    let mut m = YPolynomial::monomial(field.one(), row[0], 0);
    for (i, a) in row.iter().enumerate().skip(1) {
        if *a > 0 {
            m = m.mul(&keys[i - 1].pow(*a));
        }
    }
    m
}

/// The polynomials g_0, …, g_h of the plan over the field of its constants.
pub fn build_branch(plan: &SynthesisPlan, field: FieldSpec) -> Result<Vec<YPolynomial>> {
    if let Some(c) = plan.constants.first() {
        field.check(&c.spec())?;
    }
    let cs = &plan.charseq;
    let mut gs = vec![YPolynomial::y(field)];
    for k in 1..=cs.h() {
        let m = bezout_monomial(field, &plan.bezout_rows[k - 1], &gs);
        let g = gs[k - 1].pow(cs.n(k)).add(&m.scale(&plan.constants[k - 1]));
        gs.push(g);
    }
    Ok(gs)
}

/// f_h = f_prev^{n_h} + c·x^{a_0}·f_0^{a_1}⋯f_{h−2}^{a_{h−1}} for the last
/// step of `charseq`, where f_prev has keys f_0, …, f_{h−2}.
pub fn extend_branch(
    f_prev: &YPolynomial,
    keys: &[YPolynomial],
    charseq: &CharSequence,
    c: &FieldValue,
) -> Result<YPolynomial> {
    let h = charseq.h();
    if h == 0 {
        return Err(Error::Degree("nothing to extend for h = 0".into()));
    }
    if c.is_zero() {
        return Err(Error::ZeroConstant);
    }
    let field = f_prev.field();
    field.check(&c.spec())?;
    if f_prev.deg() as u64 != charseq.multiplicity() / charseq.e(h - 1) {
        return Err(Error::Degree(format!(
            "deg f_prev = {} but n/e_(h-1) = {}",
            f_prev.deg(),
            charseq.multiplicity() / charseq.e(h - 1)
        )));
    }
    if keys.len() + 1 < h {
        return Err(Error::Degree(format!("{} keys given, {} needed", keys.len(), h - 1)));
    }
    let row = step_representation(charseq, h);
    let m = bezout_monomial(field, &row, keys);
    Ok(f_prev.pow(charseq.n(h)).add(&m.scale(c)))
}

/// Checks that i₀(g_h, g_{k−1}) = b̄_k for every k (run after building).
pub fn verify_construction(gs: &[YPolynomial], charseq: &CharSequence) -> Result<Vec<(usize, Order, u64)>> {
    let f = gs.last().ok_or(Error::EmptySequence)?;
    let mut out = Vec::new();
    for k in 1..=charseq.h() {
        let v = imult(f, &gs[k - 1])?;
        out.push((k, v, charseq.b(k)));
    }
    Ok(out)
}

/// A branch realizing the semigroup of `charseq`, with unit constants.
pub fn realize_semigroup(charseq: &CharSequence, field: FieldSpec, verify: bool) -> Result<BranchData> {
    let plan = SynthesisPlan::with_unit_constants(charseq.clone(), field);
    realize_plan(&plan, field, verify)
}

/// BranchData of the branch built from a plan; with `verify`, every key
/// value is recomputed by intersection.
pub fn realize_plan(plan: &SynthesisPlan, field: FieldSpec, verify: bool) -> Result<BranchData> {
    let mut gs = build_branch(plan, field)?;
    let cs = &plan.charseq;
    if verify {
        for (k, got, want) in verify_construction(&gs, cs)? {
            if got != Order::Finite(want) {
                return Err(Error::Hypothesis(format!("i0(g_h, g_{}) = {got}, expected {want}", k - 1)));
            }
        }
    }
    let f = gs.pop().unwrap();
    Ok(BranchData {
        n: cs.multiplicity(),
        charseq: cs.clone(),
        key_values: cs.values()[1..].to_vec(),
        keys: gs,
        f,
        param: None,
    })
}

fn power(base: &str, e: u64, wrap: bool) -> String {
    let b = if wrap { format!("({base})") } else { base.to_string() };
    if e == 1 {
        b
    } else {
        format!("{b}^{e}")
    }
}

/// The nested form of g_h, e.g. "(y^2-x^3)^2-4*x^5*y".
pub fn structural_form(plan: &SynthesisPlan) -> String {
    let cs = &plan.charseq;
    let mut exprs = vec!["y".to_string()];
    for k in 1..=cs.h() {
        let prev = &exprs[k - 1];
        let mut s = power(prev, cs.n(k), k > 1);
        let row = &plan.bezout_rows[k - 1];
        let mut factors = Vec::new();
        if row[0] > 0 {
            factors.push(power("x", row[0], false));
        }
        for (i, a) in row.iter().enumerate().skip(1) {
            if *a > 0 {
                factors.push(power(&exprs[i - 1], *a, i > 1));
            }
        }
        let c = plan.constants[k - 1].to_string();
        let (sign, body) = match c.strip_prefix('-') {
            Some(r) => ('-', r.to_string()),
            None => ('+', c),
        };
        s.push(sign);
        if body != "1" {
            s.push_str(&body);
            s.push('*');
        }
        s.push_str(&factors.join("*"));
        exprs.push(s);
    }
    exprs.pop().unwrap()
}
