//! Newton-polygon factorization over K[[x]] and the polar factorization
//! checks built on it.

use num_integer::Integer;
use num_rational::Ratio;

use crate::algebra::{hensel_split, weierstrass_prepare, FieldSpec, FieldValue, Order, Series, UPoly, YPolynomial};
use crate::approot::BranchData;
use crate::error::{Error, Result};
use crate::intersection::{imult, Check};
use crate::newton::{abhyankar_irreducible, lower_hull, newtonc_test, strictly_above, AbhyankarVerdict, NewtoncVerdict};
use crate::semigroup::{bezout, membership, CharSequence};

/// Largest p for which edge polynomials are scanned for roots in F_p.
pub const ROOT_SCAN_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStatus {
    IrreducibleCertified,
    UnsplitOverBaseField,
}

/// A monic factor, repeated `multiplicity` times.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorCluster {
    pub poly: YPolynomial,
    pub multiplicity: u64,
    pub status: SplitStatus,
    /// i₀(poly, x), i.e. deg_y poly.
    pub i0_x: Order,
    /// i₀(f, poly)/i₀(poly, x) for a reference branch f, once computed.
    pub contact_ratio: Option<Ratio<u64>>,
}

impl FactorCluster {
    fn new(poly: YPolynomial, multiplicity: u64, status: SplitStatus) -> FactorCluster {
        let i0_x = Order::Finite(poly.deg() as u64);
        FactorCluster {
            poly,
            multiplicity,
            status,
            i0_x,
            contact_ratio: None,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == SplitStatus::IrreducibleCertified
    }

    /// deg_y of poly^multiplicity.
    pub fn total_degree(&self) -> u64 {
        self.poly.deg() as u64 * self.multiplicity
    }

    fn map_poly(self, f: impl Fn(&YPolynomial) -> YPolynomial) -> FactorCluster {
        FactorCluster {
            poly: f(&self.poly),
            ..self
        }
    }
}

/// g ≡ x^a · unit · Π poly^multiplicity mod x^precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub x_power: u64,
    pub unit: YPolynomial,
    pub clusters: Vec<FactorCluster>,
    pub precision: u64,
}

impl Factorization {
    pub fn product(&self) -> YPolynomial {
        let mut acc = self.unit.shift_x(self.x_power);
        for c in &self.clusters {
            acc = acc.mul(&c.poly.pow(c.multiplicity));
        }
        acc
    }

    /// Fill in the contact ratio of every cluster against f.
    pub fn attach_reference(&mut self, f: &YPolynomial) -> Result<()> {
        for c in &mut self.clusters {
            let i0 = imult(f, &c.poly)?.finite().ok_or_else(|| {
                Error::Precision(format!("i0(f, {}) not determined", c.poly))
            })?;
            c.contact_ratio = Some(Ratio::new(i0, c.poly.deg() as u64));
        }
        Ok(())
    }
}

/// Truncate every coefficient but the leading one.
fn truncate_below_lead(p: &YPolynomial, b: u64) -> YPolynomial {
    let n = p.coeffs().len();
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| if j + 1 == n { c.clone() } else { c.truncate(b) })
        .collect();
    YPolynomial::new(p.field(), coeffs)
}

fn drop_low(p: &YPolynomial, k: usize) -> YPolynomial {
    YPolynomial::new(p.field(), p.coeffs()[k..].to_vec())
}

fn inflate_upoly(p: &UPoly, l: usize) -> UPoly {
    let field = p.coeffs.first().map_or(FieldSpec::rationals(), |c| c.spec());
    let mut coeffs = vec![field.zero(); (p.coeffs.len() - 1) * l + 1];
    for (i, c) in p.coeffs.iter().enumerate() {
        coeffs[i * l] = c.clone();
    }
    UPoly::new(field, coeffs)
}

/// Factor g modulo x^b. The x-power and exact y-power come off first, the
/// rest is Weierstrass-prepared and split along its Newton polygon.
pub fn np_factorize(g: &YPolynomial, b: u64) -> Result<Factorization> {
    if g.is_zero() {
        return Err(Error::Degree("cannot factor 0".into()));
    }
    let field = g.field();
    let (a, determined) = g.x_content();
    if !determined {
        return Err(Error::Precision(format!("x-content of g not determined (known to x^{a})")));
    }
    let g1 = g.unshift_x(a);
    let low = g1.coeffs().iter().take_while(|c| c.is_exact_zero()).count();
    let g2 = drop_low(&g1, low);
    let target = g1.precision().map_or(b, |p| p.min(b));
    let mut work = target.max(1);
    let mut reached = 0;
    for _ in 0..6 {
        let (d, unit) = weierstrass_prepare(&g2, work)?;
        let mut clusters = Vec::new();
        if low > 0 {
            clusters.push(FactorCluster::new(
                YPolynomial::y(field),
                low as u64,
                SplitStatus::IrreducibleCertified,
            ));
        }
        clusters.extend(factor_distinguished(&d, work)?);
        reached = clusters
            .iter()
            .filter_map(|c| c.poly.precision())
            .chain(unit.precision())
            .min()
            .unwrap_or(u64::MAX);
        if reached >= target {
            let clusters = clusters
                .into_iter()
                .map(|c| c.map_poly(|p| truncate_below_lead(p, target)))
                .collect();
            return Ok(Factorization {
                x_power: a,
                unit: unit.truncate(target),
                clusters,
                precision: target,
            });
        }
        if g2.precision().is_some_and(|p| p <= work) {
            break;
        }
        work *= 2;
    }
    Err(Error::Precision(format!("lifting reached x^{reached}, needed x^{target}")))
}

/// Factor a distinguished polynomial along its Newton polygon.
fn factor_distinguished(d: &YPolynomial, b: u64) -> Result<Vec<FactorCluster>> {
    let field = d.field();
    let deg = d.deg();
    if deg == 0 {
        return Ok(Vec::new());
    }
    let low = d.coeffs()[..deg].iter().take_while(|c| c.has_no_terms()).count();
    if low > 0 {
        let dropped = &d.coeffs()[..low];
        let factor = match dropped.iter().filter_map(|c| c.precision()).min() {
            None => YPolynomial::y(field),
            Some(p) => YPolynomial::new(field, vec![Series::zero_to(field, p), Series::one(field)]),
        };
        let status = if low == 1 || factor.is_exact() {
            SplitStatus::IrreducibleCertified
        } else {
            SplitStatus::UnsplitOverBaseField
        };
        let mut out = vec![FactorCluster::new(factor, low as u64, status)];
        out.extend(factor_distinguished(&drop_low(d, low), b)?);
        return Ok(out);
    }
    if deg == 1 {
        return Ok(vec![FactorCluster::new(d.clone(), 1, SplitStatus::IrreducibleCertified)]);
    }
    let mut finite = Vec::new();
    let mut bounds = Vec::new();
    for (j, c) in d.coeffs().iter().enumerate() {
        match c.order() {
            Order::Finite(u) => finite.push((u, j as u64)),
            Order::AtLeast(u) => bounds.push((u, j as u64)),
            Order::Infinite => {}
        }
    }
    let hull = lower_hull(&finite);
    if let Some((u, j)) = bounds.iter().find(|(u, j)| !strictly_above(&hull, *u, *j)) {
        return Err(Error::Precision(format!(
            "coefficient of y^{j} known only to x^{u}: Newton polygon not determined"
        )));
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        out.extend(split_edge(d, w[0], w[1], b)?);
    }
    Ok(out)
}

/// The part of d whose roots have x-order equal to the slope of one edge,
/// split further by base-field roots of the edge polynomial.
fn split_edge(d: &YPolynomial, (u1, j1): (u64, u64), (u2, j2): (u64, u64), b: u64) -> Result<Vec<FactorCluster>> {
    let field = d.field();
    let (du, dj) = (u2 - u1, j1 - j2);
    let g = du.gcd(&dj);
    let (w, l) = (du / g, dj / g);
    let d0 = l * u1 + w * j1;
    // edge polynomial in Z = z^l
    let edge: Vec<FieldValue> = (0..=dj / l)
        .map(|i| d.coeff((j2 + i * l) as usize).coeff(u2 - i * w))
        .collect();
    let edge = UPoly::new(field, edge);
    let ramified = ramify(d, w, l, d0, l * b)?;
    let roots = if edge.degree() == Some(1) {
        Some(vec![(-&edge.coeffs[0]).div(&edge.coeffs[1])])
    } else {
        edge.base_field_roots(ROOT_SCAN_LIMIT)
    };
    let mut rest = edge.monic();
    let mut out = Vec::new();
    for c in roots.unwrap_or_default() {
        let mu = rest.root_multiplicity(&c);
        let mut lin = UPoly::constant(field.one());
        for _ in 0..mu {
            lin = lin.mul(&UPoly::new(field, vec![-&c, field.one()]));
        }
        rest = rest.divmod(&lin).0;
        let factor = lift_factor(&ramified, &inflate_upoly(&lin, l as usize), w, l)?;
        out.extend(refine(factor, &c, mu as u64, w, l, b)?);
    }
    if rest.degree().is_some_and(|k| k > 0) {
        let factor = lift_factor(&ramified, &inflate_upoly(&rest, l as usize), w, l)?;
        out.push(FactorCluster::new(factor, 1, SplitStatus::UnsplitOverBaseField));
    }
    Ok(out)
}

/// t^{−d0}·d(t^l, t^w z), modulo t^bt.
fn ramify(d: &YPolynomial, w: u64, l: u64, d0: u64, bt: u64) -> Result<YPolynomial> {
    let coeffs = d
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let s = c.inflate(l).shift(w * j as u64);
            if s.precision().is_some_and(|p| p < d0) {
                return Err(Error::Precision(format!("coefficient of y^{j} too coarse to ramify")));
            }
            Ok(s.unshift(d0).truncate(bt))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(YPolynomial::new(d.field(), coeffs))
}

/// Lift the factor of the ramified polynomial reducing to g0 and return to x.
fn lift_factor(ramified: &YPolynomial, g0: &UPoly, w: u64, l: u64) -> Result<YPolynomial> {
    let e = ramified.at_x0();
    let (h0, r) = e.divmod(g0);
    if !r.is_zero() {
        return Err(Error::Degree("edge factor does not divide the edge polynomial".into()));
    }
    let bt = ramified.precision().unwrap_or(u64::MAX);
    let (lifted, _) = hensel_split(ramified, g0, &h0, bt)?;
    let m = lifted.deg() as u64;
    let coeffs = lifted
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            c.shift(w * (m - j as u64))
                .deflate(l)
                .ok_or_else(|| Error::Precision("lifted factor is not defined over K[[x]]".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(YPolynomial::new(ramified.field(), coeffs))
}

/// Certify or further split the factor attached to a root c of multiplicity mu.
fn refine(factor: YPolynomial, c: &FieldValue, mu: u64, w: u64, l: u64, b: u64) -> Result<Vec<FactorCluster>> {
    let field = factor.field();
    let certified = |p: YPolynomial| FactorCluster::new(p, 1, SplitStatus::IrreducibleCertified);
    let unsplit = |p: YPolynomial| FactorCluster::new(p, 1, SplitStatus::UnsplitOverBaseField);
    if mu == 1 {
        if l == 1 {
            return Ok(vec![certified(factor)]);
        }
        return Ok(match newtonc_test(&factor, &Series::zero(field))? {
            NewtoncVerdict::Irreducible { .. } => vec![certified(factor)],
            NewtoncVerdict::Inconclusive(_) => vec![unsplit(factor)],
        });
    }
    if l == 1 {
        // every root is c·x^w + (higher order): move it away and recurse
        let shift = Series::monomial(c.clone(), w);
        let moved = factor.shift_y(&shift);
        let back = shift.neg();
        return Ok(factor_distinguished(&moved, b)?
            .into_iter()
            .map(|cl| cl.map_poly(|p| p.shift_y(&back)))
            .collect());
    }
    if field.divides(factor.deg() as u64) {
        return Ok(vec![unsplit(factor)]);
    }
    Ok(match abhyankar_irreducible(&factor) {
        Ok(AbhyankarVerdict::Irreducible(_)) => vec![certified(factor)],
        _ => vec![unsplit(factor)],
    })
}

/// i₀(f, ∂f/∂y) against c(f) + n − 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DedekindCheck {
    pub lhs: u64,
    pub rhs: u64,
    pub pass: bool,
}

pub fn dedekind_check(f_data: &BranchData) -> Result<DedekindCheck> {
    let n = f_data.n;
    let field = f_data.f.field();
    if field.divides(n) {
        return Err(Error::CharacteristicDivides {
            p: field.characteristic(),
            n,
        });
    }
    let lhs = imult(&f_data.f, &f_data.f.derivative_y())?
        .finite()
        .ok_or_else(|| Error::Precision("i0(f, df/dy) not determined".into()))?;
    let rhs = f_data.charseq.conductor() + n - 1;
    Ok(DedekindCheck {
        lhs,
        rhs,
        pass: lhs == rhs,
    })
}

/// Σ_{i≤k} (n_i − 1)·b̄_i.
pub fn polar_sum(cs: &CharSequence, k: usize) -> u64 {
    (1..=k).map(|i| (cs.n(i) - 1) * cs.b(i)).sum()
}

/// The three arithmetic statements about Σ_{i≤k} (n_i − 1)·b̄_i.
pub fn polar_sum_checks(cs: &CharSequence, k: usize) -> Result<Vec<Check>> {
    if k == 0 || k > cs.h() {
        return Err(Error::Degree(format!("k = {k} outside 1..={}", cs.h())));
    }
    let s = polar_sum(cs, k);
    let e = cs.e(k - 1);
    let mut checks = vec![Check::new(
        "sum mod e_(k-1) != 0",
        s % e,
        format!("0 (mod {e})"),
        !s.is_multiple_of(e),
    )];
    if k < cs.h() {
        checks.push(Check::new("sum < b_(k+1)", s, cs.b(k + 1), s < cs.b(k + 1)));
    } else {
        checks.push(Check::new("sum < b_(k+1)", s, "inf", true));
    }
    let coeffs = bezout(s as i64, &cs.values()[..=k])?;
    let expected: Vec<i64> = std::iter::once(0).chain((1..=k).map(|i| cs.n(i) as i64 - 1)).collect();
    checks.push(Check::new(
        "bezout(sum) = (0, n_1-1, .., n_k-1)",
        format!("{coeffs:?}"),
        format!("{expected:?}"),
        coeffs == expected,
    ));
    Ok(checks)
}

/// Contact data of one cluster against the reference branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterContact {
    pub degree: u64,
    pub multiplicity: u64,
    pub status: SplitStatus,
    pub i0_f: u64,
    pub ratio: Ratio<u64>,
    pub group: Option<usize>,
}

/// Clusters whose ratio is e_{i−1}·b̄_i/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MerleGroup {
    pub index: usize,
    pub ratio: Ratio<u64>,
    pub members: Vec<usize>,
    /// Σ i₀(·, x) over the members.
    pub total: u64,
    /// n/e_i − n/e_{i−1}
    pub predicted: u64,
    pub i0_f_total: u64,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MerleVerdict {
    Pass,
    /// No claim is contradicted, but some could only be checked in aggregate.
    PartialPass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MerleReport {
    pub k: usize,
    pub hypotheses: Vec<Check>,
    pub polar_sum: Vec<Check>,
    pub factorization: Factorization,
    pub clusters: Vec<ClusterContact>,
    pub groups: Vec<MerleGroup>,
    /// Clusters whose ratio is outside the predicted spectrum.
    pub flagged: Vec<usize>,
    pub consistency: Vec<Check>,
    pub dedekind: Option<DedekindCheck>,
    pub verdict: MerleVerdict,
}

/// 2·(c + n²)
pub fn merle_precision(cs: &CharSequence) -> u64 {
    let n = cs.multiplicity();
    2 * (cs.conductor() + n * n)
}

/// Check the factorization theorem for g against the branch f.
pub fn merle_verify(f_data: &BranchData, g: &YPolynomial, k: usize) -> Result<MerleReport> {
    merle_verify_at(f_data, g, k, merle_precision(&f_data.charseq))
}

/// The polar case g = ∂f/∂y, k = h.
pub fn merle_polar(f_data: &BranchData) -> Result<MerleReport> {
    merle_verify(f_data, &f_data.f.derivative_y(), f_data.charseq.h())
}

pub fn merle_verify_at(f_data: &BranchData, g: &YPolynomial, k: usize, b: u64) -> Result<MerleReport> {
    let cs = &f_data.charseq;
    let f = &f_data.f;
    let n = cs.multiplicity();
    let h = cs.h();
    if k == 0 || k > h {
        return Err(Error::Degree(format!("k = {k} outside 1..={h}")));
    }
    let g_x = g.at_x0().low_order().map(|v| v as u64);
    let bound = n / cs.e(k) - 1;
    let s = polar_sum(cs, k);
    let g_f = imult(f, g)?;
    let hypotheses = vec![
        Check::new(
            "i0(g,x) <= n/e_k - 1",
            g_x.map_or("inf".to_string(), |v| v.to_string()),
            bound,
            g_x.is_some_and(|v| v <= bound),
        ),
        Check::new("i0(f,g) = sum (n_i-1) b_i", g_f, s, g_f == Order::Finite(s)),
    ];
    if let Some(c) = hypotheses.iter().find(|c| !c.pass) {
        return Err(Error::Hypothesis(format!("{}: {} vs {}", c.name, c.lhs, c.rhs)));
    }
    let polar = polar_sum_checks(cs, k)?;
    let mut factorization = np_factorize(g, b)?;
    factorization.attach_reference(f)?;
    let spectrum: Vec<Ratio<u64>> = (1..=k).map(|i| Ratio::new(cs.e(i - 1) * cs.b(i), n)).collect();
    let clusters: Vec<ClusterContact> = factorization
        .clusters
        .iter()
        .map(|c| {
            let ratio = c.contact_ratio.expect("attached");
            let degree = c.poly.deg() as u64;
            ClusterContact {
                degree,
                multiplicity: c.multiplicity,
                status: c.status,
                i0_f: (ratio * degree).to_integer(),
                ratio,
                group: spectrum.iter().position(|r| *r == ratio).map(|i| i + 1),
            }
        })
        .collect();
    let mut partial = false;
    let mut groups = Vec::new();
    for i in 1..=k {
        let members: Vec<usize> = (0..clusters.len()).filter(|m| clusters[*m].group == Some(i)).collect();
        let total: u64 = members.iter().map(|m| clusters[*m].degree * clusters[*m].multiplicity).sum();
        let i0_f_total: u64 = members.iter().map(|m| clusters[*m].i0_f * clusters[*m].multiplicity).sum();
        let predicted = n / cs.e(i) - n / cs.e(i - 1);
        let modulus = n / cs.e(i - 1);
        let prefix = &cs.values()[..=i];
        let mut checks = vec![
            Check::new("i0(g_i,x) = n/e_i - n/e_(i-1)", total, predicted, total == predicted),
            Check::new("i0(f,g_i) = (n_i-1) b_i", i0_f_total, (cs.n(i) - 1) * cs.b(i), i0_f_total == (cs.n(i) - 1) * cs.b(i)),
            Check::new("i0(g_i,x) = 0 mod n/e_(i-1)", total % modulus, 0, total.is_multiple_of(modulus)),
        ];
        for m in &members {
            let cl = &clusters[*m];
            if cl.status == SplitStatus::IrreducibleCertified {
                checks.push(Check::new(
                    &format!("cluster {m}: i0(phi,x) = 0 mod n/e_(i-1)"),
                    cl.degree % modulus,
                    0,
                    cl.degree.is_multiple_of(modulus),
                ));
            } else {
                partial = true;
            }
            checks.push(Check::new(
                &format!("cluster {m}: i0(f,phi) in <b_0..b_i>"),
                cl.i0_f,
                format!("{prefix:?}"),
                membership(cl.i0_f, prefix).is_some(),
            ));
            checks.push(Check::new(
                &format!("cluster {m}: i0(f,phi) = 0 mod b_i"),
                cl.i0_f % cs.b(i),
                0,
                cl.i0_f.is_multiple_of(cs.b(i)),
            ));
        }
        groups.push(MerleGroup {
            index: i,
            ratio: spectrum[i - 1],
            members,
            total,
            predicted,
            i0_f_total,
            checks,
        });
    }
    let flagged: Vec<usize> = (0..clusters.len()).filter(|m| clusters[*m].group.is_none()).collect();
    let group_total: u64 = clusters.iter().map(|c| c.degree * c.multiplicity).sum();
    let mut consistency = vec![Check::new(
        "sum of cluster degrees = i0(g,x)",
        group_total,
        g_x.unwrap_or(0),
        Some(group_total) == g_x,
    )];
    let hard_ok = |gr: &MerleGroup| gr.checks.iter().skip(2).all(|c| c.pass);
    let verdict = if flagged.is_empty() {
        let ok = polar.iter().all(|c| c.pass) && groups.iter().all(|gr| gr.checks.iter().all(|c| c.pass));
        match (ok, partial) {
            (false, _) => MerleVerdict::Fail,
            (true, true) => MerleVerdict::PartialPass,
            (true, false) => MerleVerdict::Pass,
        }
    } else {
        let deficit_x: i64 = groups.iter().map(|gr| gr.predicted as i64 - gr.total as i64).sum();
        let deficit_f: i64 = groups
            .iter()
            .map(|gr| ((cs.n(gr.index) - 1) * cs.b(gr.index)) as i64 - gr.i0_f_total as i64)
            .sum();
        let flagged_x: u64 = flagged.iter().map(|m| clusters[*m].degree * clusters[*m].multiplicity).sum();
        let flagged_f: u64 = flagged.iter().map(|m| clusters[*m].i0_f * clusters[*m].multiplicity).sum();
        let within = groups.iter().all(|gr| gr.total <= gr.predicted);
        consistency.push(Check::new("group totals <= predicted", within, true, within));
        consistency.push(Check::new("flagged i0(.,x) = deficit", flagged_x, deficit_x, flagged_x as i64 == deficit_x));
        consistency.push(Check::new("flagged i0(f,.) = deficit", flagged_f, deficit_f, flagged_f as i64 == deficit_f));
        let ok = polar.iter().all(|c| c.pass) && groups.iter().all(hard_ok) && consistency.iter().all(|c| c.pass);
        if ok {
            MerleVerdict::PartialPass
        } else {
            MerleVerdict::Fail
        }
    };
    let verdict = if consistency[0].pass { verdict } else { MerleVerdict::Fail };
    let dedekind = if *g == f.derivative_y() && !f.field().divides(n) {
        Some(dedekind_check(f_data)?)
    } else {
        None
    };
    Ok(MerleReport {
        k,
        hypotheses,
        polar_sum: polar,
        factorization,
        clusters,
        groups,
        flagged,
        consistency,
        dedekind,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approot::branch_data;
    use crate::semigroup::sequences_in_window;
    use crate::synth::realize_semigroup;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn poly(f: FieldSpec, t: &[(i64, u64, usize)]) -> YPolynomial {
        YPolynomial::from_terms(f, t)
    }

    fn curve() -> YPolynomial {
        poly(q(), &[(1, 0, 4), (-2, 3, 2), (1, 6, 0), (-4, 5, 1), (-1, 7, 0)])
    }

    fn congruent(a: &YPolynomial, b: &YPolynomial, prec: u64) -> bool {
        a.truncate(prec).sub(&b.truncate(prec)).coeffs().iter().all(|c| c.has_no_terms())
    }

    fn degrees(fz: &Factorization) -> Vec<(usize, u64, bool)> {
        fz.clusters
            .iter()
            .map(|c| (c.poly.deg(), c.multiplicity, c.is_certified()))
            .collect()
    }

    #[test]
    fn lines_split_over_f7() {
        let f7 = FieldSpec::prime(7).unwrap();
        let g = poly(f7, &[(1, 0, 2), (-1, 2, 0)]);
        let fz = np_factorize(&g, 20).unwrap();
        let mut polys: Vec<String> = fz.clusters.iter().map(|c| c.poly.as_exact().to_string()).collect();
        polys.sort();
        assert_eq!(polys, vec!["y+6*x", "y+x"]);
        assert!(fz.clusters.iter().all(|c| c.is_certified()));
    }

    #[test]
    fn cusp_is_one_certified_cluster() {
        let g = poly(q(), &[(1, 0, 2), (-1, 3, 0)]);
        let fz = np_factorize(&g, 20).unwrap();
        assert_eq!(degrees(&fz), vec![(2, 1, true)]);
        assert_eq!(fz.clusters[0].poly.as_exact(), g);
    }

    #[test]
    fn polar_of_curve_splits_by_slope() {
        let g = poly(q(), &[(1, 0, 3), (-1, 3, 1), (-1, 5, 0)]);
        let fz = np_factorize(&g, 40).unwrap();
        assert_eq!(degrees(&fz), vec![(2, 1, true), (1, 1, true)]);
        assert!(congruent(&fz.product(), &g, 40));
    }

    #[test]
    fn trivial_factors_come_off() {
        let g = poly(q(), &[(3, 2, 3), (3, 5, 1)]);
        let fz = np_factorize(&g, 20).unwrap();
        assert_eq!(fz.x_power, 2);
        assert_eq!(degrees(&fz)[0], (1, 1, true));
        assert!(congruent(&fz.product(), &g, 20));
        // (y - x)^2 (y + x^2)
        let sq = poly(q(), &[(1, 0, 1), (-1, 1, 0)]).pow(2).mul(&poly(q(), &[(1, 0, 1), (1, 2, 0)]));
        let fz = np_factorize(&sq, 20).unwrap();
        assert!(congruent(&fz.product(), &sq, 20));
        assert!(fz.clusters.iter().any(|c| c.multiplicity == 2 && c.poly.deg() == 1));
    }

    #[test]
    fn unsplit_when_roots_leave_the_field() {
        // y^2 + x^2 over Q: the edge polynomial z^2 + 1 has no rational root
        let g = poly(q(), &[(1, 0, 2), (1, 2, 0)]);
        let fz = np_factorize(&g, 20).unwrap();
        assert_eq!(degrees(&fz), vec![(2, 1, false)]);
        // over F5 it splits
        let f5 = FieldSpec::prime(5).unwrap();
        let fz = np_factorize(&poly(f5, &[(1, 0, 2), (1, 2, 0)]), 20).unwrap();
        assert_eq!(degrees(&fz), vec![(1, 1, true), (1, 1, true)]);
    }

    #[test]
    fn shift_refinement() {
        // (y + x)^2 - x^3: the slope-1 edge has a double root, the shifted part is a cusp
        let g = poly(q(), &[(1, 0, 2), (2, 1, 1), (1, 2, 0), (-1, 3, 0)]);
        let fz = np_factorize(&g, 30).unwrap();
        assert_eq!(degrees(&fz), vec![(2, 1, true)]);
        // (y + x)^2 - x^4 = (y + x - x^2)(y + x + x^2)
        let g = poly(q(), &[(1, 0, 2), (2, 1, 1), (1, 2, 0), (-1, 4, 0)]);
        let fz = np_factorize(&g, 30).unwrap();
        assert_eq!(degrees(&fz), vec![(1, 1, true), (1, 1, true)]);
        assert!(congruent(&fz.product(), &g, 30));
    }

    #[test]
    fn curve_stays_whole() {
        let fz = np_factorize(&curve(), 60).unwrap();
        assert_eq!(degrees(&fz), vec![(4, 1, true)]);
    }

    #[test]
    fn dedekind_examples() {
        let d = branch_data(&curve()).unwrap();
        assert_eq!(dedekind_check(&d).unwrap(), DedekindCheck { lhs: 19, rhs: 19, pass: true });
        let f5 = FieldSpec::prime(5).unwrap();
        let d = branch_data(&poly(f5, &[(1, 0, 2), (-1, 3, 0)])).unwrap();
        assert_eq!(dedekind_check(&d).unwrap(), DedekindCheck { lhs: 3, rhs: 3, pass: true });
        let f3 = FieldSpec::prime(3).unwrap();
        let d = realize_semigroup(&CharSequence::new(vec![3, 4]).unwrap(), f3, false).unwrap();
        assert_eq!(dedekind_check(&d), Err(Error::CharacteristicDivides { p: 3, n: 3 }));
    }

    #[test]
    fn merle_on_curve() {
        let d = branch_data(&curve()).unwrap();
        let r = merle_polar(&d).unwrap();
        assert_eq!(r.verdict, MerleVerdict::Pass);
        let summary: Vec<(Ratio<u64>, u64, u64)> = r.groups.iter().map(|g| (g.ratio, g.total, g.predicted)).collect();
        assert_eq!(summary, vec![(Ratio::from_integer(6), 1, 1), (Ratio::new(13, 2), 2, 2)]);
        assert_eq!(r.dedekind, Some(DedekindCheck { lhs: 19, rhs: 19, pass: true }));
    }

    #[test]
    fn merle_on_cusp_and_keys() {
        let f5 = FieldSpec::prime(5).unwrap();
        let d = branch_data(&poly(f5, &[(1, 0, 2), (-1, 3, 0)])).unwrap();
        let r = merle_verify(&d, &poly(f5, &[(2, 0, 1)]), 1).unwrap();
        assert_eq!(r.verdict, MerleVerdict::Pass);
        assert_eq!((r.groups[0].ratio, r.groups[0].total), (Ratio::from_integer(3), 1));
        // g = f_0^{n_1-1} f_1^{n_2-1}
        let d = branch_data(&curve()).unwrap();
        let g = d.keys[0].mul(&d.keys[1]);
        let r = merle_verify(&d, &g, 2).unwrap();
        assert_eq!(r.verdict, MerleVerdict::Pass);
        let r = merle_verify(&d, &d.keys[0], 1).unwrap();
        assert_eq!(r.verdict, MerleVerdict::Pass);
    }

    #[test]
    fn merle_rejects_bad_hypotheses() {
        let d = branch_data(&curve()).unwrap();
        assert!(matches!(merle_verify(&d, &d.keys[1], 2), Err(Error::Hypothesis(_))));
        assert!(matches!(merle_verify(&d, &d.keys[0], 3), Err(Error::Degree(_))));
    }

    #[test]
    fn merle_on_small_corpus() {
        let f7 = FieldSpec::prime(7).unwrap();
        for cs in sequences_in_window(8, 3) {
            if cs.h() == 0 || f7.divides(cs.multiplicity()) {
                continue;
            }
            let d = realize_semigroup(&cs, f7, false).unwrap();
            let r = merle_polar(&d).unwrap();
            assert_ne!(r.verdict, MerleVerdict::Fail, "{cs}: {r:?}");
            assert!(r.dedekind.unwrap().pass, "{cs}");
        }
    }

    #[test]
    fn polar_sum_examples() {
        let cs = CharSequence::new(vec![4, 6, 13]).unwrap();
        assert_eq!(polar_sum(&cs, 2), 19);
        assert!(polar_sum_checks(&cs, 1).unwrap().iter().all(|c| c.pass));
        assert!(polar_sum_checks(&cs, 2).unwrap().iter().all(|c| c.pass));
    }

    proptest! {
        #[test]
        fn polar_sum_arithmetic(idx in 0usize..10_000) {
            let all = sequences_in_window(30, 3);
            let cs = &all[idx % all.len()];
            for k in 1..=cs.h() {
                for c in polar_sum_checks(cs, k).unwrap() {
                    prop_assert!(c.pass, "{} k={} {:?}", cs, k, c);
                }
            }
        }

        #[test]
        fn factorization_is_sound(
            roots in proptest::collection::vec((-3i64..=3, 1u64..4, -2i64..=2), 1..4),
            cusp in proptest::bool::ANY,
        ) {
            let f7 = FieldSpec::prime(7).unwrap();
            let mut g = YPolynomial::one(f7);
            for (c, w, d) in &roots {
                if *c == 0 { continue; }
                g = g.mul(&poly(f7, &[(1, 0, 1), (*c, *w, 0), (*d, w + 1, 0)]));
            }
            if cusp {
                g = g.mul(&poly(f7, &[(1, 0, 2), (1, 3, 0)]));
            }
            prop_assume!(g.deg() > 0);
            let b = 30;
            let fz = np_factorize(&g, b).unwrap();
            prop_assert!(congruent(&fz.product(), &g, b));
            let total: u64 = fz.clusters.iter().map(|c| c.total_degree()).sum();
            prop_assert_eq!(total, g.deg() as u64);
        }
    }
}
