use branchkit::algebra::{hensel_split, weierstrass_prepare, UPoly};
use branchkit::intersection::{imult, resultant_order};
use branchkit::semigroup::{conductor, gaps, sequences_in_window};
use branchkit::{FieldSpec, Series, YPolynomial};
use proptest::prelude::*;

/// Schoolbook product of two coefficient lists mod p, truncated at `limit`.
fn naive_product(a: &[(u64, i64)], b: &[(u64, i64)], p: u64, limit: u64) -> Vec<(u64, u64)> {
    let mut acc = std::collections::BTreeMap::new();
    for &(ea, ca) in a {
        for &(eb, cb) in b {
            if ea + eb < limit {
                let prod = (ca.rem_euclid(p as i64) as u128 * cb.rem_euclid(p as i64) as u128 % p as u128) as u64;
                let slot = acc.entry(ea + eb).or_insert(0u64);
                *slot = ((*slot as u128 + prod as u128) % p as u128) as u64;
            }
        }
    }
    acc.into_iter().filter(|(_, v)| *v != 0).collect()
}

fn series(field: FieldSpec, terms: &[(u64, i64)], prec: Option<u64>) -> Series {
    Series::from_terms(field, terms.iter().map(|&(e, c)| (e, field.from_i64(c))), prec)
}

fn residues(s: &Series) -> Vec<(u64, u64)> {
    s.terms().iter().map(|(e, c)| (*e, c.residue().unwrap())).collect()
}

fn terms_strategy() -> impl Strategy<Value = Vec<(u64, i64)>> {
    proptest::collection::btree_map(0u64..60, -100_000i64..100_000, 0..40).prop_map(|m| m.into_iter().collect())
}

fn distinguished(field: FieldSpec, n: usize, terms: &[(i64, u64, usize)]) -> YPolynomial {
    let mut t: Vec<(i64, u64, usize)> = terms.iter().copied().filter(|t| t.2 < n && t.1 > 0).collect();
    t.push((1, 0, n));
    YPolynomial::from_terms(field, &t)
}

fn same_mod(a: &YPolynomial, b: &YPolynomial, prec: u64) -> bool {
    a.sub(b).truncate(prec).coeffs().iter().all(|c| c.has_no_terms())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn series_product_small_and_large_primes(a in terms_strategy(), b in terms_strategy(), cap in 1u64..140) {
        for p in [7u64, 65_521, 4_294_967_291] {
            let field = FieldSpec::prime(p).unwrap();
            let got = series(field, &a, None).mul_trunc(&series(field, &b, None), cap);
            prop_assert_eq!(residues(&got), naive_product(&a, &b, p, cap));
        }
    }

    #[test]
    fn weierstrass_product_reproduces_input(
        p in prop::sample::select(vec![5u64, 101, 65_537]),
        unit in proptest::collection::vec((-9i64..10, 0u64..6, 0usize..3), 1..6),
        terms in proptest::collection::vec((-9i64..10, 1u64..8, 0usize..3), 0..6),
        n in 1usize..4,
    ) {
        let field = FieldSpec::prime(p).unwrap();
        let d = distinguished(field, n, &terms);
        let mut u_terms = unit;
        u_terms.push((1, 0, 0));
        let u = YPolynomial::from_terms(field, &u_terms);
        prop_assume!(!u.at_x0().coeff(0).is_zero());
        let f = d.mul(&u);
        let (d2, u2) = weierstrass_prepare(&f, 30).unwrap();
        prop_assert!(d2.is_distinguished());
        prop_assert!(same_mod(&d2.mul(&u2), &f, 30));
        prop_assert!(same_mod(&d2, &d, 30));
    }

    #[test]
    fn euclid_matches_resultant_large_prime(
        n in 1usize..4,
        fterms in proptest::collection::vec((-50i64..50, 1u64..7, 0usize..3), 0..5),
        gterms in proptest::collection::vec((-50i64..50, 0u64..6, 0usize..4), 1..6),
    ) {
        let field = FieldSpec::prime(65_537).unwrap();
        let f = distinguished(field, n, &fterms);
        let g = YPolynomial::from_terms(field, &gterms);
        prop_assert_eq!(imult(&f, &g).unwrap(), resultant_order(&f, &g).unwrap());
    }
}

#[test]
fn hensel_split_of_coprime_residues() {
    // f(0,y) = (y-1)(y-2) over F7
    let field = FieldSpec::prime(7).unwrap();
    let f = YPolynomial::from_terms(field, &[(1, 0, 2), (-3, 0, 1), (2, 0, 0), (1, 1, 1), (1, 2, 0), (3, 5, 2)]);
    let g0 = UPoly::new(field, vec![field.from_i64(-1), field.one()]);
    let h0 = f.at_x0().divmod(&g0).0;
    assert!(f.at_x0().divmod(&g0).1.is_zero());
    let (g, h) = hensel_split(&f, &g0, &h0, 25).unwrap();
    assert!(g.is_monic());
    assert_eq!(g.deg(), 1);
    assert!(same_mod(&g.mul(&h), &f, 25));
}

/// ⟨gens⟩ ∩ [0, limit] by dynamic programming.
fn brute_members(gens: &[u64], limit: u64) -> Vec<bool> {
    let mut inside = vec![false; limit as usize + 1];
    inside[0] = true;
    for a in 1..=limit as usize {
        inside[a] = gens.iter().any(|&g| g as usize <= a && inside[a - g as usize]);
    }
    inside
}

#[test]
fn conductor_and_gaps_match_brute_force() {
    for cs in sequences_in_window(16, 3) {
        let limit = cs.b(0) * cs.values().iter().max().unwrap() + 1;
        let inside = brute_members(cs.values(), limit);
        let brute_gaps: Vec<u64> = (0..limit).filter(|&a| !inside[a as usize]).collect();
        let brute_c = brute_gaps.last().map_or(0, |g| g + 1);
        assert_eq!(conductor(&cs), brute_c, "{:?}", cs.values());
        assert_eq!(gaps(&cs), brute_gaps, "{:?}", cs.values());
    }
}
