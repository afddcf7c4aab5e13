use num_bigint::BigInt;
use proptest::prelude::*;
use symrank::ffield::{self, PrimeField, SymMatrix, DEFAULT_BUDGET};
use symrank::laurent::LaurentPolynomial;
use symrank::motivic::{self, tate_decomposition, tate_signed_sum};

fn laurent(min_exp: i64, max_exp: i64) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((min_exp..=max_exp, -50i64..=50), 0..6)
        .prop_map(LaurentPolynomial::from_terms)
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPolynomial> {
    laurent(-3, 4).prop_filter("nonzero divisor", |p| !p.is_zero())
}

fn canonical(p: &LaurentPolynomial) -> bool {
    p.terms().all(|(_, c)| *c != BigInt::from(0))
}

proptest! {
    #[test]
    fn add_mul_ring_laws(a in laurent(-4, 6), b in laurent(-4, 6), c in laurent(-4, 6)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        for p in [&a + &b, &a * &b, &a - &b] {
            prop_assert!(canonical(&p));
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in laurent(-4, 6), b in laurent(-4, 6)) {
        for x in [-3i64, 2, 3, 5, 7] {
            let x = BigInt::from(x);
            let ea = a.eval_int(&x).unwrap();
            let eb = b.eval_int(&x).unwrap();
            prop_assert_eq!((&a * &b).eval_int(&x).unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).eval_int(&x).unwrap(), ea + eb);
        }
    }

    #[test]
    fn div_exact_round_trip(r in laurent(-4, 6), q in nonzero_laurent()) {
        let product = &r * &q;
        prop_assert_eq!(product.div_exact(&q).unwrap(), r);
    }

    #[test]
    fn json_round_trip(a in laurent(-6, 12)) {
        let s = serde_json::to_string(&a).unwrap();
        let back: LaurentPolynomial = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn tate_signed_sum_reconstructs(a in laurent(0, 10)) {
        let summands = tate_decomposition(&a).unwrap();
        prop_assert_eq!(tate_signed_sum(&summands), a);
        prop_assert!(summands.iter().all(|s| s.is_proper() && s.multiplicity >= 1));
    }

    #[test]
    fn rank_is_invariant_under_congruence_by_permutation(
        entries in prop::collection::vec(0i64..5, 10),
        swap in (0usize..4, 0usize..4),
    ) {
        // P^T X P for a transposition P permutes rows and columns alike
        let field = PrimeField::new(5).unwrap();
        let x = SymMatrix::from_packed(4, &entries, &field).unwrap();
        let perm = |i: usize| if i == swap.0 { swap.1 } else if i == swap.1 { swap.0 } else { i };
        let mut permuted = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                permuted.push(i64::from(x.get(perm(i), perm(j))));
            }
        }
        let y = SymMatrix::from_packed(4, &permuted, &field).unwrap();
        prop_assert_eq!(ffield::rank(&x, &field), ffield::rank(&y, &field));
    }
}

#[test]
fn classes_match_closed_form_and_products() {
    for n in 0..=12u32 {
        for k in 0..=i64::from(n) {
            let c = motivic::class_exact(n, k);
            assert_eq!(motivic::closed_form(n, k).unwrap().value, c.value, "n={n} k={k}");
            assert!(c.value.is_polynomial());
            if k >= 1 {
                c.value
                    .div_exact(&LaurentPolynomial::power_minus_one(1))
                    .unwrap_or_else(|e| panic!("n={n} k={k}: {e}"));
            }
        }
        let total: LaurentPolynomial = (0..=i64::from(n)).map(|k| motivic::class_exact(n, k).value).sum();
        assert_eq!(total, LaurentPolynomial::monomial(1, i64::from(n * (n + 1) / 2)));
        if n >= 1 {
            assert_eq!(
                motivic::full_rank_product(n).unwrap().value,
                motivic::class_exact(n, i64::from(n)).value
            );
        }
    }
}

#[test]
fn class_degrees_are_stratum_dimensions() {
    // Sym^{n,k} has dimension k(2n - k + 1)/2 and is irreducible, so the
    // class is monic of that degree.
    for n in 1..=12u32 {
        for k in 1..=i64::from(n) {
            let v = motivic::class_exact(n, k).value;
            let (_, top) = v.degree_range().unwrap();
            assert_eq!(top, k * (2 * i64::from(n) - k + 1) / 2, "n={n} k={k}");
            assert_eq!(v.coeff(top), BigInt::from(1));
        }
    }
}

#[test]
fn brute_force_counts_match_classes() {
    let grid: &[(u64, usize)] = &[(3, 4), (5, 4), (7, 3)];
    for &(p, max_n) in grid {
        let field = PrimeField::new(p).unwrap();
        for n in 0..=max_n {
            let hist = ffield::enumerate_rank_counts(n, &field, DEFAULT_BUDGET).unwrap();
            assert_eq!(hist.total(), p.pow((n * (n + 1) / 2) as u32));
            assert_eq!(hist.counts[0], 1);
            for (k, &count) in hist.counts.iter().enumerate() {
                let expected = motivic::class_exact(n as u32, k as i64)
                    .point_count(&BigInt::from(p))
                    .unwrap();
                assert_eq!(BigInt::from(count), expected, "n={n} p={p} k={k}");
            }
        }
    }
}

#[test]
fn completion_buckets_hold_for_every_minor() {
    for p in [3u64, 5] {
        let field = PrimeField::new(p).unwrap();
        for m in 0..=3usize {
            let n = m + 1;
            let len = m * (m + 1) / 2;
            for index in 0..p.pow(len as u32) {
                let mut digits = vec![0i64; len];
                let mut rest = index;
                for d in digits.iter_mut().rev() {
                    *d = (rest % p) as i64;
                    rest /= p;
                }
                let minor = SymMatrix::from_packed(m, &digits, &field).unwrap();
                let r = ffield::rank(&minor, &field);
                let census = ffield::completions_census(&minor, &field).unwrap();
                assert_eq!(census.values().sum::<u64>(), p.pow(n as u32));
                for s in 0..=n {
                    let got = census.get(&s).copied().unwrap_or(0);
                    assert_eq!(got, ffield::expected_completions(p, n, r, s), "p={p} minor={digits:?} s={s}");
                }
            }
        }
    }
}

#[test]
fn fiber_marginals() {
    for (p, max_n) in [(3u64, 4usize), (5, 3)] {
        let field = PrimeField::new(p).unwrap();
        for n in 1..=max_n {
            let census = ffield::fiber_census(n, &field, DEFAULT_BUDGET).unwrap();
            assert_eq!(census.total(), p.pow((n * (n + 1) / 2) as u32));
            let full = ffield::enumerate_rank_counts(n, &field, DEFAULT_BUDGET).unwrap();
            assert_eq!(census.full_rank_marginal(), full);
            let minors = ffield::enumerate_rank_counts(n - 1, &field, DEFAULT_BUDGET).unwrap();
            let scaled: Vec<u64> = minors.counts.iter().map(|c| c * p.pow(n as u32)).collect();
            let mut by_minor = census.minor_rank_marginal();
            by_minor.resize(scaled.len(), 0);
            assert_eq!(by_minor, scaled);
            for &(r, s) in census.table.keys() {
                assert!((r..=r + 2).contains(&s), "stray bucket ({r}, {s})");
            }
        }
    }
}

#[test]
fn partition_sums_for_many_part_counts() {
    let field = PrimeField::new(3).unwrap();
    let whole = ffield::enumerate_rank_counts(3, &field, DEFAULT_BUDGET).unwrap();
    for parts in [1u64, 2, 3, 7, 9, 81, 100, 729] {
        let hs = ffield::partitioned_enumeration(3, &field, parts, DEFAULT_BUDGET).unwrap();
        let mut sum = symrank::RankHistogram::empty(3, 3);
        hs.iter().for_each(|h| sum.merge(h));
        assert_eq!(sum, whole, "parts = {parts}");
    }
}

#[test]
fn projective_counts_match_quotient() {
    for p in [3u64, 5] {
        let field = PrimeField::new(p).unwrap();
        for n in 1..=3usize {
            let count = ffield::projective_count(n, &field, DEFAULT_BUDGET).unwrap();
            let class = motivic::projective_full_rank(n as u32).unwrap();
            assert_eq!(BigInt::from(count), class.point_count(&BigInt::from(p)).unwrap());
        }
    }
    // n = 3 at p = 3: 468 full-rank matrices, 234 projective classes
    assert_eq!(ffield::projective_count(3, &PrimeField::new(3).unwrap(), DEFAULT_BUDGET).unwrap(), 234);
}
