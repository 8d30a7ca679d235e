//! Acceptance criteria. Every test prints one line of the form
//! `criterion NN  PASS|FAIL  detail`; run with `--nocapture` to see them.

use std::collections::BTreeMap;
use std::process::Command;

use branchkit::approot::{approximate_root, key_search_with_param, BranchData};
use branchkit::factor::{dedekind_check, merle_polar, np_factorize, MerleVerdict};
use branchkit::intersection::{
    congruence_check, imult, imult_param, log_distance, resultant_order, verify_intersection_formula, BranchView,
};
use branchkit::newton::{abhyankar_irreducible, newtonc_test, AbhyankarVerdict, NewtoncVerdict};
use branchkit::semigroup::{conductor, gaps, sequences_in_window, CharSequence};
use branchkit::synth::{build_branch, realize_plan, SynthesisPlan};
use branchkit::{FieldSpec, FieldValue, Order, Parametrization, Series, YPolynomial};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const CURVE: &str = "(y^2-x^3)^2-4*x^5*y-x^7";

fn report(n: u32, pass: bool, detail: &str) {
    println!("criterion {n:02}  {}  {detail}", if pass { "PASS" } else { "FAIL" });
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_branchkit"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).expect("valid JSON");
    (out.status.code().unwrap_or(-1), v)
}

fn poly(field: FieldSpec, terms: &[(i64, u64, usize)]) -> YPolynomial {
    YPolynomial::from_terms(field, terms)
}

fn tseries(field: FieldSpec, terms: &[(u64, i64)]) -> Series {
    Series::from_terms(field, terms.iter().map(|&(e, c)| (e, field.from_i64(c))), None)
}

fn prime(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_constants(count: usize, field: FieldSpec, rng: &mut ChaCha8Rng) -> Vec<FieldValue> {
    let p = field.characteristic() as i64;
    (0..count)
        .map(|_| {
            let c = if p == 0 { rng.gen_range(1..=5) } else { rng.gen_range(1..p) };
            field.from_i64(if rng.gen_bool(0.5) { c } else { -c })
        })
        .collect()
}

/// A branch with the given sequence whose first constants are `shared` and
/// the rest random.
fn branch_with(cs: &CharSequence, field: FieldSpec, shared: &[FieldValue], rng: &mut ChaCha8Rng) -> BranchData {
    let mut constants = shared[..shared.len().min(cs.h())].to_vec();
    constants.extend(random_constants(cs.h() - constants.len(), field, rng));
    let plan = SynthesisPlan::new(cs.clone(), constants).unwrap();
    realize_plan(&plan, field, false).unwrap()
}

/// A branch with the given sequence and random nonzero constants.
fn random_branch(cs: &CharSequence, field: FieldSpec, rng: &mut ChaCha8Rng) -> BranchData {
    branch_with(cs, field, &[], rng)
}

fn keys_and_f(d: &BranchData) -> Vec<YPolynomial> {
    d.keys_with_f()
}

#[test]
fn criterion_01_worked_example() {
    let mut ok = true;
    let mut detail = Vec::new();
    for field in ["Q", "F7"] {
        let (code, v) = cli(&["irr", CURVE, "--field", field]);
        let r = &v["result"];
        let good = code == 0
            && r["verdict"] == "irreducible"
            && r["charseq"] == serde_json::json!([4, 6, 13])
            && r["polygons"] == serde_json::json!([[3, 2], [13, 2]]);
        ok &= good;
        detail.push(format!("{field}: charseq {} polygons {}", r["charseq"], r["polygons"]));
    }
    report(1, ok, &detail.join("; "));
    assert!(ok);
}

/// The Abhyankar route must be inapplicable over F2 and the factorization
/// route must exhibit a split. The polynomial y^4+x^6+x^7 is irreducible
/// over F2[[x]], so no split exists and the second half cannot pass.
fn criterion_02_outcome() -> (bool, bool, String) {
    let f2 = prime(2);
    let f = poly(f2, &[(1, 0, 4), (1, 6, 0), (1, 7, 0)]);
    let inapplicable = matches!(abhyankar_irreducible(&f).unwrap(), AbhyankarVerdict::Inapplicable { p: 2, n: 4 });
    let fac = np_factorize(&f, 64).unwrap();
    let parts: u64 = fac.clusters.iter().map(|c| c.multiplicity).sum();
    let split = parts > 1 && fac.clusters.iter().all(|c| c.is_certified());
    let (code, v) = cli(&["irr", CURVE, "--field", "F2"]);
    let detail = format!(
        "abhyankar inapplicable: {inapplicable}; clusters {} (certified: {}); cli exit {code} verdict {}",
        parts,
        fac.clusters.iter().all(|c| c.is_certified()),
        v["result"]["verdict"]
    );
    (inapplicable, split, detail)
}

#[test]
fn criterion_02_characteristic_two() {
    let (inapplicable, split, detail) = criterion_02_outcome();
    report(2, inapplicable && split, &format!("{detail}; no split exists, the polynomial is irreducible"));
    assert!(inapplicable);
    // y^4 + x^6(1+x) is irreducible: the only candidate split is
    // (y^2 + x^3·u)(y^2 + x^3·u) with u^2 = 1+x, and 1+x is not a square
    // in F2[[x]].
    assert!(!split);
    // Positive control: (y^2+x^3)^2 + x^7·y has sequence (4,6,15) and must
    // not be reported reducible either.
    let f2 = prime(2);
    let h = poly(f2, &[(1, 0, 4), (1, 6, 0), (1, 7, 1)]);
    let fac = np_factorize(&h, 64).unwrap();
    assert_eq!(fac.clusters.iter().map(|c| c.multiplicity).sum::<u64>(), 1);
}

#[test]
#[ignore = "unattainable: y^4+x^6+x^7 is irreducible over F2, so no split certificate exists"]
fn criterion_02_split_certificate() {
    let (_, split, detail) = criterion_02_outcome();
    assert!(split, "{detail}");
}

#[test]
fn criterion_03_single_pair_test() {
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [3u64, 5, 7] {
        let field = prime(p);
        let f = poly(field, &[(1, 0, p as usize), (-1, p - 1, 0), (-1, p - 1, 1)]);
        let lib = newtonc_test(&f, &Series::zero(field)).unwrap();
        let want = NewtoncVerdict::Irreducible { n: p, m: p - 1 };
        let text = format!("y^{p}-x^{}*(1+y)", p - 1);
        let (code, v) = cli(&["irr", &text, "--field", &format!("F{p}")]);
        let good = lib == want
            && code == 0
            && v["result"]["verdict"] == "irreducible"
            && v["result"]["charseq"] == serde_json::json!([p, p - 1]);
        ok &= good;
        detail.push(format!("p={p}: {}", v["result"]["charseq"]));
    }
    report(3, ok, &detail.join("; "));
    assert!(ok);
}

#[test]
fn criterion_04_examples_a_and_b() {
    let p = 3u64;
    let f3 = prime(p);
    // A: f = y^8 + y^3 - x^9, (t^3 + t^8, t^9)
    let par_a = Parametrization::new(tseries(f3, &[(3, 1), (8, 1)]), tseries(f3, &[(9, 1)]), 200).unwrap();
    let step = key_search_with_param(&par_a, &[], &[p]).unwrap();
    let key_a = poly(f3, &[(1, 0, 1), (-1, 3, 0), (1, 8, 0)]);
    let a_ok = step.key == key_a && step.value == p * p * p + p * p - 2 * p - 1;
    // B: f = y^8 + y^6 - x^9, (t^6 + t^8, t^9)
    let par_b = Parametrization::new(tseries(f3, &[(6, 1), (8, 1)]), tseries(f3, &[(9, 1)]), 200).unwrap();
    let mut keys = Vec::new();
    let mut values = vec![p * p - p];
    while values.iter().fold(0, |g, &v| gcd(g, v)) != 1 {
        let s = key_search_with_param(&par_b, &keys, &values).unwrap();
        keys.push(s.key);
        values.push(s.value);
    }
    let b_ok = values == vec![p * p - p, p * p, p * p * p - 1];
    let (code, v) = cli(&["charseq", "y^8+y^6-x^9", "--field", "F3", "--param", "t^6+t^8,t^9"]);
    let cli_ok = code == 0 && v["result"]["charseq"] == serde_json::json!([6, 9, 26]);
    let ok = a_ok && b_ok && cli_ok;
    report(
        4,
        ok,
        &format!("A: key {} value {}; B: charseq {values:?}", step.key, step.value),
    );
    assert!(ok);
}

/// Elements of ⟨gens⟩ below `limit`, by dynamic programming.
fn brute_semigroup(gens: &[u64], limit: u64) -> Vec<bool> {
    let mut inside = vec![false; limit as usize + 1];
    inside[0] = true;
    for a in 1..=limit as usize {
        inside[a] = gens.iter().any(|&g| g as usize <= a && inside[a - g as usize]);
    }
    inside
}

#[test]
fn criterion_05_semigroup_suite() {
    let corpus = sequences_in_window(30, 3);
    let mut bad = Vec::new();
    for cs in &corpus {
        let c = conductor(cs);
        let limit = cs.b(0) * cs.values().iter().max().unwrap() + 1;
        let inside = brute_semigroup(cs.values(), limit);
        let brute_c = (0..=limit).rev().find(|&a| !inside[a as usize]).map_or(0, |a| a + 1);
        let gap_count = (0..brute_c).filter(|&a| !inside[a as usize]).count() as u64;
        let symmetric = (0..brute_c).all(|a| inside[a as usize] != inside[(brute_c - 1 - a) as usize]);
        let lib_gaps = gaps(cs).len() as u64;
        if c != brute_c || 2 * gap_count != c || lib_gaps != gap_count || !symmetric {
            bad.push(cs.values().to_vec());
        }
    }
    let ok = bad.is_empty() && corpus.len() > 1000;
    report(5, ok, &format!("{} sequences, {} mismatches", corpus.len(), bad.len()));
    assert!(ok, "{bad:?}");
}

/// Sequences with b̄_0 ≤ `max_b0`, h ≤ 3, each paired with a prime not
/// dividing b̄_0.
fn sampled_corpus(max_b0: u64, count: usize, rng: &mut ChaCha8Rng) -> Vec<(CharSequence, FieldSpec)> {
    let corpus: Vec<CharSequence> = sequences_in_window(max_b0, 3).into_iter().filter(|c| c.h() >= 1).collect();
    let primes = [2u64, 3, 5, 7, 11, 13];
    (0..count)
        .map(|_| {
            let cs = corpus.choose(rng).unwrap().clone();
            let ps: Vec<u64> = primes.iter().copied().filter(|p| !cs.multiplicity().is_multiple_of(*p)).collect();
            (cs, prime(*ps.choose(rng).unwrap()))
        })
        .collect()
}

#[test]
fn criterion_06_synthesis_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sample = sampled_corpus(24, 200, &mut rng);
    let mut bad = Vec::new();
    for (cs, field) in &sample {
        let d = random_branch(cs, *field, &mut rng);
        let plan = SynthesisPlan::with_unit_constants(cs.clone(), *field);
        let unit = build_branch(&plan, *field).unwrap().pop().unwrap();
        for f in [&d.f, &unit] {
            match abhyankar_irreducible(f).unwrap() {
                AbhyankarVerdict::Irreducible(c) if c.charseq == *cs => {}
                v => bad.push(format!("{:?} over {}: {v:?}", cs.values(), field.characteristic())),
            }
        }
    }
    let ok = bad.is_empty();
    report(6, ok, &format!("{} sequences x 2 constant choices, {} failures", sample.len(), bad.len()));
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_07_approximate_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sample = sampled_corpus(24, 120, &mut rng);
    let mut bad = Vec::new();
    let mut checked = 0;
    for (cs, field) in &sample {
        let d = random_branch(cs, *field, &mut rng);
        for k in 1..=cs.h() {
            let root = approximate_root(&d.f, cs.e(k - 1)).unwrap();
            let v = imult(&d.f, &root).unwrap();
            checked += 1;
            if v != Order::Finite(cs.b(k)) {
                bad.push(format!("{:?} k={k}: {v}", cs.values()));
            }
        }
    }
    let ok = bad.is_empty();
    report(7, ok, &format!("{checked} approximate roots on {} branches, {} mismatches", sample.len(), bad.len()));
    assert!(ok, "{bad:?}");
}

/// Pairs of distinct synthesized branches over F_101: unrelated sequences,
/// sequences with a common start, and one sequence with two sets of
/// constants.
fn branch_pairs(count: usize, rng: &mut ChaCha8Rng) -> Vec<(BranchData, BranchData)> {
    let field = prime(101);
    let corpus: Vec<CharSequence> = sequences_in_window(12, 3).into_iter().filter(|c| c.h() >= 1).collect();
    let mut by_start: BTreeMap<(u64, u64), Vec<CharSequence>> = BTreeMap::new();
    for cs in &corpus {
        by_start.entry((cs.b(0), cs.b(1))).or_default().push(cs.clone());
    }
    let mut out = Vec::new();
    while out.len() < count {
        let a = corpus.choose(rng).unwrap().clone();
        let ca = random_constants(a.h(), field, rng);
        let fa = branch_with(&a, field, &ca, rng);
        let fb = match out.len() % 3 {
            0 => random_branch(corpus.choose(rng).unwrap(), field, rng),
            1 => {
                let b = by_start[&(a.b(0), a.b(1))].choose(rng).unwrap();
                branch_with(b, field, &ca[..1], rng)
            }
            _ => branch_with(&a, field, &ca[..a.h() - 1], rng),
        };
        if fa.f != fb.f {
            out.push((fa, fb));
        }
    }
    out
}

#[test]
fn criterion_08_intersection_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pairs = branch_pairs(120, &mut rng);
    let mut bad = Vec::new();
    let mut deep = 0;
    for (a, b) in &pairs {
        let (ka, kb) = (keys_and_f(a), keys_and_f(b));
        let va = BranchView { f: &a.f, charseq: &a.charseq, keys: &ka };
        let vb = BranchView { f: &b.f, charseq: &b.charseq, keys: &kb };
        let rep = verify_intersection_formula(va, vb).unwrap();
        let cong = congruence_check(&a.f, &b.f).unwrap();
        if rep.k > 1 {
            deep += 1;
        }
        if !rep.passed() || !cong.passed() || rep.checks.is_empty() {
            bad.push(format!("{:?} vs {:?}: {rep:?} {cong:?}", a.charseq.values(), b.charseq.values()));
        }
    }
    let ok = bad.is_empty();
    report(
        8,
        ok,
        &format!("{} pairs ({deep} with contact index > 1), {} failures", pairs.len(), bad.len()),
    );
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_09_strong_triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pool: Vec<BranchData> = branch_pairs(60, &mut rng).into_iter().flat_map(|(a, b)| [a, b]).collect();
    let mut bad = Vec::new();
    let mut triples = 0;
    let mut all_equal = 0;
    while triples < 120 {
        let t: Vec<&BranchData> = pool.choose_multiple(&mut rng, 3).collect();
        if t[0].f == t[1].f || t[1].f == t[2].f || t[0].f == t[2].f {
            continue;
        }
        triples += 1;
        let mut d = [
            log_distance(&t[0].f, &t[1].f).unwrap(),
            log_distance(&t[1].f, &t[2].f).unwrap(),
            log_distance(&t[0].f, &t[2].f).unwrap(),
        ];
        d.sort();
        if d[0] == d[2] {
            all_equal += 1;
        }
        if d[0] != d[1] {
            bad.push(format!("{d:?}"));
        }
    }
    let ok = bad.is_empty();
    report(9, ok, &format!("{triples} triples ({all_equal} with three equal distances), {} failures", bad.len()));
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_10_polar_factorization() {
    let q = FieldSpec::rationals();
    let f = poly(q, &[(1, 0, 4), (-2, 3, 2), (1, 6, 0), (-4, 5, 1), (-1, 7, 0)]);
    let data = branchkit::approot::branch_data(&f).unwrap();
    let ded = dedekind_check(&data).unwrap();
    let rep = merle_polar(&data).unwrap();
    let totals: Vec<u64> = rep.groups.iter().map(|g| g.total).collect();
    let predicted: Vec<u64> = rep.groups.iter().map(|g| g.predicted).collect();
    let ratios: Vec<String> = rep.groups.iter().map(|g| g.ratio.to_string()).collect();
    let curve_ok = ded.lhs == 19
        && ded.rhs == 19
        && ded.pass
        && totals == vec![1, 2]
        && totals == predicted
        && ratios == vec!["6", "13/2"]
        && rep.verdict == MerleVerdict::Pass;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut counts = [0usize; 3];
    let mut bad = Vec::new();
    for cs in sequences_in_window(12, 3).into_iter().filter(|c| c.h() >= 1) {
        let ps: Vec<u64> = [3u64, 5, 7, 11].into_iter().filter(|p| cs.multiplicity() % p != 0).collect();
        let field = prime(*ps.choose(&mut rng).unwrap());
        let d = random_branch(&cs, field, &mut rng);
        match merle_polar(&d) {
            Ok(r) => {
                let dedekind_ok = r.dedekind.as_ref().is_some_and(|c| c.pass);
                match r.verdict {
                    MerleVerdict::Pass => counts[0] += 1,
                    MerleVerdict::PartialPass => counts[1] += 1,
                    MerleVerdict::Fail => counts[2] += 1,
                }
                if r.verdict == MerleVerdict::Fail || !dedekind_ok {
                    bad.push(format!("{:?} over F{}", cs.values(), field.characteristic()));
                }
            }
            Err(e) => bad.push(format!("{:?}: {e}", cs.values())),
        }
    }
    let ok = curve_ok && bad.is_empty();
    report(
        10,
        ok,
        &format!(
            "curve: dedekind {}={}, totals {totals:?}, ratios {ratios:?}; corpus: {} pass, {} partial, {} fail",
            ded.lhs, ded.rhs, counts[0], counts[1], counts[2]
        ),
    );
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_11_dual_route_multiplicity() {
    let q = FieldSpec::rationals();
    let mut cases: Vec<(YPolynomial, Parametrization, YPolynomial)> = Vec::new();
    for a in 2u64..=5 {
        for b in a + 1..=9 {
            if gcd(a, b) != 1 {
                continue;
            }
            let f = poly(q, &[(1, 0, a as usize), (-1, b, 0)]);
            let par = Parametrization::new(tseries(q, &[(a, 1)]), tseries(q, &[(b, 1)]), 4 * a * b).unwrap();
            let tests = [
                YPolynomial::y(q),
                poly(q, &[(1, 0, 2), (-1, 3, 0)]),
                poly(q, &[(1, 0, 1), (-1, 2, 0), (1, 5, 0)]),
                poly(q, &[(1, 0, 3), (2, 4, 1), (-1, 5, 0)]),
            ];
            for g in tests.into_iter().filter(|g| *g != f) {
                cases.push((f.clone(), par.clone(), g));
            }
        }
    }
    let f3 = prime(3);
    let fa = poly(f3, &[(1, 0, 8), (1, 0, 3), (-1, 9, 0)]);
    let pa = Parametrization::new(tseries(f3, &[(3, 1), (8, 1)]), tseries(f3, &[(9, 1)]), 200).unwrap();
    let fb = poly(f3, &[(1, 0, 8), (1, 0, 6), (-1, 9, 0)]);
    let pb = Parametrization::new(tseries(f3, &[(6, 1), (8, 1)]), tseries(f3, &[(9, 1)]), 200).unwrap();
    for (f, par) in [(fa, pa), (fb, pb)] {
        for g in [
            YPolynomial::y(f3),
            poly(f3, &[(1, 0, 1), (-1, 3, 0), (1, 8, 0)]),
            poly(f3, &[(1, 0, 2), (-1, 3, 0), (1, 4, 0)]),
            poly(f3, &[(1, 0, 2), (1, 3, 0)]),
        ] {
            cases.push((f.clone(), par.clone(), g));
        }
    }
    let mut bad = Vec::new();
    for (f, par, g) in &cases {
        let euclid = imult(f, g).unwrap();
        let sylvester = resultant_order(f, g).unwrap();
        let along = imult_param(par, g).unwrap();
        if euclid != along || sylvester != along || !along.is_finite() {
            bad.push(format!("f={f} g={g}: {euclid} {sylvester} {along}"));
        }
    }
    let ok = bad.is_empty() && cases.len() >= 50;
    report(11, ok, &format!("{} pairs, {} disagreements", cases.len(), bad.len()));
    assert!(ok, "{bad:?}");
}
