//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p symrank --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use symrank::ffield::{self, PrimeField, DEFAULT_BUDGET};
use symrank::laurent::LaurentPolynomial;
use symrank::motivic::{self, TateSummand};
use symrank::verify::{Status, Verifier};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lefschetz_power(e: u32) -> LaurentPolynomial {
    LaurentPolynomial::monomial(1, i64::from(e))
}

fn closed_form_matches_recursion() -> Outcome {
    let mut checked = 0;
    for n in 0..=12u32 {
        for k in 0..=i64::from(n) {
            let closed = motivic::closed_form(n, k).map_err(|e| format!("n={n} k={k}: {e}"))?;
            let rec = motivic::class_exact(n, k);
            ensure(closed.value == rec.value, || {
                format!("n={n} k={k}: closed {} vs recursion {}", closed.value, rec.value)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, k) pairs equal"))
}

fn strata_partition_affine_space() -> Outcome {
    for n in 0..=12u32 {
        let sum: LaurentPolynomial = (0..=i64::from(n)).map(|k| motivic::class_exact(n, k).value).sum();
        ensure(sum == lefschetz_power(n * (n + 1) / 2), || format!("n={n}: sum {sum}"))?;
    }
    Ok("sum of strata = L^{n(n+1)/2} for n <= 12".into())
}

fn point_count_oracle() -> Outcome {
    let grid: &[(u64, &[usize])] = &[(3, &[0, 1, 2, 3, 4, 5]), (5, &[0, 1, 2, 3, 4]), (7, &[0, 1, 2, 3])];
    let mut visited = 0u64;
    for &(p, sizes) in grid {
        let field = PrimeField::new(p).unwrap();
        for &n in sizes {
            let hist = ffield::enumerate_rank_counts(n, &field, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            visited += hist.total();
            for (k, &count) in hist.counts.iter().enumerate() {
                let expected = motivic::class_exact(n as u32, k as i64).value.eval_poly(&BigInt::from(p)).unwrap();
                ensure(BigInt::from(count) == expected, || {
                    format!("n={n} p={p} k={k}: counted {count}, formula {expected}")
                })?;
            }
            if (n, p) == (2, 3) {
                ensure(hist.counts == [1, 8, 18], || format!("n=2 p=3: {:?}", hist.counts))?;
            }
            if (n, p) == (5, 3) {
                ensure(hist.total() == 14_348_907, || format!("n=5 p=3 visited {}", hist.total()))?;
            }
        }
    }
    Ok(format!("{visited} matrices enumerated, every rank count equal"))
}

fn fiber_lemma_census() -> Outcome {
    let primes = [PrimeField::new(3).unwrap(), PrimeField::new(5).unwrap()];
    let report = Verifier::new(DEFAULT_BUDGET).fibers(4, &primes);
    if let Some(f) = report.failures().next() {
        return Err(format!("{}: expected {}, got {}", f.label(), f.expected, f.actual));
    }
    let skipped: Vec<_> = report
        .results
        .iter()
        .filter(|r| matches!(r.status, Status::Skipped(_)))
        .map(|r| r.label())
        .collect();
    ensure(skipped.is_empty(), || format!("unexpected skips: {skipped:?}"))?;
    Ok(format!("{} bucket and marginal checks", report.summary.pass))
}

fn full_rank_products() -> Outcome {
    for n in 1..=12u32 {
        let product = motivic::full_rank_product(n).map_err(|e| e.to_string())?;
        let rec = motivic::class_exact(n, i64::from(n));
        ensure(product.value == rec.value, || format!("n={n}: {} vs {}", product.value, rec.value))?;
    }
    Ok("product formula = [Sym^{n,n}] for 1 <= n <= 12".into())
}

fn projectivization() -> Outcome {
    let l_minus_1 = LaurentPolynomial::power_minus_one(1);
    for n in 1..=12u32 {
        let full = motivic::class_exact(n, i64::from(n)).value;
        let q = full.div_exact(&l_minus_1).map_err(|e| format!("n={n}: {e}"))?;
        ensure(&q * &l_minus_1 == full, || format!("n={n}: quotient does not multiply back"))?;
    }
    for p in [3u64, 5] {
        let field = PrimeField::new(p).unwrap();
        for n in 1..=3usize {
            let counted = ffield::projective_count(n, &field, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let formula = motivic::projective_full_rank(n as u32)
                .map_err(|e| e.to_string())?
                .point_count(&BigInt::from(p))
                .map_err(|e| e.to_string())?;
            ensure(BigInt::from(counted) == formula, || {
                format!("n={n} p={p}: counted {counted}, formula {formula}")
            })?;
        }
    }
    Ok("(L - 1) divides [Sym^{n,n}] for n <= 12; projective counts equal for n <= 3".into())
}

fn tate_anchor() -> Outcome {
    let anchor = motivic::class_exact(1, 1).tate_decomposition().map_err(|e| e.to_string())?;
    let mut sorted = anchor.clone();
    sorted.sort_by_key(|s| (s.twist, s.shift));
    let expected = vec![
        TateSummand { twist: 0, shift: 1, multiplicity: 1 },
        TateSummand { twist: 1, shift: 2, multiplicity: 1 },
    ];
    ensure(sorted == expected, || format!("n=1 decomposition {anchor:?}"))?;
    let mut summands = 0;
    for n in 0..=12u32 {
        for k in 0..=i64::from(n) {
            let class = motivic::class_exact(n, k);
            let s = class.tate_decomposition().map_err(|e| e.to_string())?;
            ensure(s.iter().all(TateSummand::is_proper), || format!("n={n} k={k}: improper summand"))?;
            ensure(motivic::tate_signed_sum(&s) == class.value, || format!("n={n} k={k}: signed sum"))?;
            summands += s.len();
        }
    }
    Ok(format!("F(0)[1] + F(1)[2] for n = 1; {summands} proper summands reconstruct all classes"))
}

fn euler_characteristics() -> Outcome {
    for n in 0..=12u32 {
        for k in 0..=i64::from(n) {
            let chi = motivic::class_exact(n, k).euler_characteristic().map_err(|e| e.to_string())?;
            let expected = BigInt::from(i32::from(k == 0));
            ensure(chi == expected, || format!("n={n} k={k}: chi = {chi}"))?;
        }
    }
    Ok("chi = 1 for k = 0, 0 for 1 <= k <= n <= 12".into())
}

fn laurent() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((-4i64..=6, -60i64..=60), 0..6).prop_map(LaurentPolynomial::from_terms)
}

fn ring_layer_properties() -> Outcome {
    const CASES: u32 = 1000;
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config, rng);
    runner
        .run(&(laurent(), laurent(), laurent()), |(a, b, c)| {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a.clone());
            }
            for x in [-3i64, 2, 3, 5, 7] {
                let x = BigInt::from(x);
                let (ea, eb) = (a.eval_int(&x).unwrap(), b.eval_int(&x).unwrap());
                prop_assert_eq!((&a * &b).eval_int(&x).unwrap(), &ea * &eb);
                prop_assert_eq!((&a + &b).eval_int(&x).unwrap(), ea + eb);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{CASES} randomized cases"))
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: "AC1", name: "closed form = recursion", limit: secs(5), run: closed_form_matches_recursion },
        Criterion { id: "AC2", name: "strata partition affine space", limit: secs(1), run: strata_partition_affine_space },
        Criterion { id: "AC3", name: "point-count oracle", limit: secs(300), run: point_count_oracle },
        Criterion { id: "AC4", name: "fiber lemma census", limit: secs(300), run: fiber_lemma_census },
        Criterion { id: "AC5", name: "full-rank products", limit: secs(1), run: full_rank_products },
        Criterion { id: "AC6", name: "projectivization", limit: secs(30), run: projectivization },
        Criterion { id: "AC7", name: "Tate anchor and properness", limit: secs(1), run: tate_anchor },
        Criterion { id: "AC8", name: "Euler characteristics", limit: secs(1), run: euler_characteristics },
        Criterion { id: "AC9", name: "ring-layer properties", limit: secs(5), run: ring_layer_properties },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => {
                Err(format!("{detail}, but took {elapsed:.2?} (limit {:?})", c.limit))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} {:<30} {:>9.2?}  {detail}", c.id, c.name, elapsed),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {:<30} {:>9.2?}  {why}", c.id, c.name, elapsed);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
