//! Cross-checks between the symbolic classes and the point-counting oracle.
//!
//! Every check produces one [`CheckResult`]; a check that cannot run within
//! the enumeration budget is reported as skipped with the required size, so
//! the entries of a report always cover the full parameter grid requested.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::ffield::{self, FieldError, PrimeField, RankHistogram};
use crate::laurent::LaurentPolynomial;
use crate::motivic::{self, ClassCache};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub expected: String,
    pub actual: String,
}

impl CheckResult {
    fn compare(id: &str, params: &[(&str, i64)], expected: impl ToString, actual: impl ToString) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        Self {
            check_id: id.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            status,
            expected,
            actual,
        }
    }

    fn skipped(id: &str, params: &[(&str, i64)], reason: String) -> Self {
        Self {
            check_id: id.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            status: Status::Skipped(reason),
            expected: String::new(),
            actual: String::new(),
        }
    }

    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.check_id, params.join(","))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub results: Vec<CheckResult>,
    pub summary: Summary,
    pub config: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    fn from_results(results: Vec<CheckResult>, config: BTreeMap<String, serde_json::Value>) -> Self {
        let mut report = Self { results, summary: Summary::default(), config };
        report.retally();
        report
    }

    fn retally(&mut self) {
        let mut s = Summary::default();
        for r in &self.results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped(_) => s.skipped += 1,
            }
        }
        self.summary = s;
    }

    /// Appends another report's entries and config, in order.
    pub fn extend(&mut self, other: VerificationReport) {
        self.results.extend(other.results);
        for (k, v) in other.config {
            self.config.entry(k).or_insert(v);
        }
        self.retally();
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    /// Per-check-id tally table followed by every failing entry.
    pub fn render_table(&self) -> String {
        let mut by_id: Vec<(&str, Summary)> = Vec::new();
        for r in &self.results {
            let idx = match by_id.iter().position(|(id, _)| *id == r.check_id) {
                Some(i) => i,
                None => {
                    by_id.push((&r.check_id, Summary::default()));
                    by_id.len() - 1
                }
            };
            let s = &mut by_id[idx].1;
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped(_) => s.skipped += 1,
            }
        }
        let mut out = String::new();
        writeln!(out, "{:<28} {:>6} {:>6} {:>8}", "check", "pass", "fail", "skipped").unwrap();
        for (id, s) in &by_id {
            writeln!(out, "{:<28} {:>6} {:>6} {:>8}", id, s.pass, s.fail, s.skipped).unwrap();
        }
        writeln!(
            out,
            "{:<28} {:>6} {:>6} {:>8}",
            "total", self.summary.pass, self.summary.fail, self.summary.skipped
        )
        .unwrap();
        for r in self.failures() {
            writeln!(out, "FAIL {}: expected {}, got {}", r.label(), r.expected, r.actual).unwrap();
        }
        out
    }
}

fn lefschetz_power(e: u32) -> LaurentPolynomial {
    LaurentPolynomial::monomial(1, i64::from(e))
}

fn dim(n: u32) -> u32 {
    n * (n + 1) / 2
}

fn budget_reason(required: &BigUint, budget: u64) -> String {
    format!("BudgetExceeded: {required} matrices required, budget {budget}")
}

fn point_count(value: &LaurentPolynomial, p: u64) -> BigInt {
    value.eval_poly(&BigInt::from(p)).expect("classes lie in Z[L]")
}

/// Runs the oracle-backed checks, sharing enumerations between them.
#[derive(Debug)]
pub struct Verifier {
    budget: u64,
    classes: ClassCache,
    histograms: HashMap<(usize, u64), Result<RankHistogram, FieldError>>,
}

impl Verifier {
    pub fn new(budget: u64) -> Self {
        Self { budget, classes: ClassCache::new(), histograms: HashMap::new() }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn histogram(&mut self, n: usize, field: &PrimeField) -> Result<RankHistogram, FieldError> {
        let budget = self.budget;
        self.histograms
            .entry((n, field.modulus()))
            .or_insert_with(|| ffield::enumerate_rank_counts(n, field, budget))
            .clone()
    }

    fn config(&self, max_n: u32, primes: &[PrimeField]) -> BTreeMap<String, serde_json::Value> {
        let primes: Vec<u64> = primes.iter().map(PrimeField::modulus).collect();
        BTreeMap::from([
            ("budget".to_string(), self.budget.into()),
            ("max_n".to_string(), max_n.into()),
            ("primes".to_string(), primes.into()),
        ])
    }

    /// Closed form against recursion for every `0 <= k <= n <= max_n`, the
    /// full-rank product for `1 <= n <= max_n`, and the rank partition of
    /// affine space for `0 <= n <= max_n`.
    pub fn formula_vs_recursion(&mut self, max_n: u32) -> VerificationReport {
        let mut results = Vec::new();
        for n in 0..=max_n {
            for k in 0..=i64::from(n) {
                let params = [("n", i64::from(n)), ("k", k)];
                let recursion = self.classes.class_exact(n, k).value;
                let result = match motivic::closed_form(n, k) {
                    Ok(c) => CheckResult::compare("closed_form_vs_recursion", &params, &recursion, &c.value),
                    Err(e) => CheckResult::compare("closed_form_vs_recursion", &params, &recursion, e),
                };
                results.push(result);
            }
        }
        for n in 1..=max_n {
            let params = [("n", i64::from(n))];
            let recursion = self.classes.class_exact(n, i64::from(n)).value;
            let product = motivic::full_rank_product(n).expect("n >= 1").value;
            results.push(CheckResult::compare("full_rank_product", &params, &recursion, &product));
        }
        for n in 0..=max_n {
            let params = [("n", i64::from(n))];
            let sum: LaurentPolynomial = (0..=i64::from(n)).map(|k| self.classes.exact_value(n, k)).sum();
            results.push(CheckResult::compare("rank_partition", &params, lefschetz_power(dim(n)), &sum));
        }
        VerificationReport::from_results(results, self.config(max_n, &[]))
    }

    /// Exhaustive rank histograms against the classes evaluated at `L = p`,
    /// one entry per `(n, p, k)`.
    pub fn point_counts(&mut self, max_n: u32, primes: &[PrimeField]) -> VerificationReport {
        let mut results = Vec::new();
        for field in primes {
            let p = field.modulus();
            for n in 0..=max_n {
                let hist = self.histogram(n as usize, field);
                for k in 0..=i64::from(n) {
                    let params = [("n", i64::from(n)), ("p", p as i64), ("k", k)];
                    results.push(match &hist {
                        Ok(h) => {
                            let expected = point_count(&self.classes.exact_value(n, k), p);
                            CheckResult::compare("point_count", &params, expected, h.counts[k as usize])
                        }
                        Err(FieldError::BudgetExceeded { required, budget }) => {
                            CheckResult::skipped("point_count", &params, budget_reason(required, *budget))
                        }
                        Err(e) => CheckResult::compare("point_count", &params, "histogram", e),
                    });
                }
            }
        }
        VerificationReport::from_results(results, self.config(max_n, primes))
    }

    /// Fiber census bucket checks for `1 <= n <= max_n`.
    ///
    /// For each minor rank `r < n` and full rank `s` in `r..=r+2` (capped at
    /// `n`) the bucket must equal the per-minor completion count times the
    /// number of rank-`r` minors. Marginals are then checked against
    /// independent enumerations: summing over `s` gives `p^n` times the
    /// rank-`r` minors, summing over `r` gives the rank-`s` matrices.
    pub fn fibers(&mut self, max_n: u32, primes: &[PrimeField]) -> VerificationReport {
        let mut results = Vec::new();
        for field in primes {
            let p = field.modulus();
            for n in 1..=max_n as usize {
                let base = [("n", n as i64), ("p", p as i64)];
                let bucket_keys: Vec<(usize, usize)> = (0..n)
                    .flat_map(|r| (r..=(r + 2).min(n)).map(move |s| (r, s)))
                    .collect();
                let census = ffield::fiber_census(n, field, self.budget);
                let census = match census {
                    Ok(c) => c,
                    Err(e) => {
                        let reason = match &e {
                            FieldError::BudgetExceeded { required, budget } => budget_reason(required, *budget),
                            other => other.to_string(),
                        };
                        for &(r, s) in &bucket_keys {
                            let params = [base[0], base[1], ("r", r as i64), ("s", s as i64)];
                            results.push(CheckResult::skipped("fiber_bucket", &params, reason.clone()));
                        }
                        for r in 0..n {
                            let params = [base[0], base[1], ("r", r as i64)];
                            results.push(CheckResult::skipped("fiber_minor_marginal", &params, reason.clone()));
                        }
                        for s in 0..=n {
                            let params = [base[0], base[1], ("s", s as i64)];
                            results.push(CheckResult::skipped("fiber_full_marginal", &params, reason.clone()));
                        }
                        continue;
                    }
                };
                let minors = self.histogram(n - 1, field).expect("smaller than the census");
                let full = self.histogram(n, field).expect("same size as the census");

                for &(r, s) in &bucket_keys {
                    let params = [base[0], base[1], ("r", r as i64), ("s", s as i64)];
                    let expected = ffield::expected_completions(p, n, r, s) * minors.counts[r];
                    results.push(CheckResult::compare("fiber_bucket", &params, expected, census.count(r, s)));
                }
                let stray: u64 = census
                    .table
                    .iter()
                    .filter(|(key, _)| !bucket_keys.contains(key))
                    .map(|(_, c)| c)
                    .sum();
                results.push(CheckResult::compare("fiber_outside_buckets", &base, 0, stray));

                let by_minor = census.minor_rank_marginal();
                let pn = p.pow(n as u32);
                for (r, &got) in by_minor.iter().enumerate().take(n) {
                    let params = [base[0], base[1], ("r", r as i64)];
                    results.push(CheckResult::compare("fiber_minor_marginal", &params, minors.counts[r] * pn, got));
                }
                let by_full = census.full_rank_marginal();
                for s in 0..=n {
                    let params = [base[0], base[1], ("s", s as i64)];
                    results.push(CheckResult::compare("fiber_full_marginal", &params, full.counts[s], by_full.counts[s]));
                }
            }
        }
        VerificationReport::from_results(results, self.config(max_n, primes))
    }

    /// `(L - 1) | [Sym^{n,n}]` symbolically for `1 <= n <= max_n`, and the
    /// quotient at `L = p` against the projective brute-force count.
    pub fn projective(&mut self, max_n: u32, primes: &[PrimeField]) -> VerificationReport {
        let mut results = Vec::new();
        let mut quotients = Vec::new();
        for n in 1..=max_n {
            let params = [("n", i64::from(n))];
            match self.classes.projective_full_rank(n) {
                Ok(c) => {
                    let back = &c.value * &LaurentPolynomial::power_minus_one(1);
                    let full = self.classes.exact_value(n, i64::from(n));
                    results.push(CheckResult::compare("projective_divisibility", &params, &full, &back));
                    quotients.push(Some(c.value));
                }
                Err(e) => {
                    results.push(CheckResult::compare("projective_divisibility", &params, "exact quotient", e));
                    quotients.push(None);
                }
            }
        }
        for field in primes {
            let p = field.modulus();
            for n in 1..=max_n {
                let params = [("n", i64::from(n)), ("p", p as i64)];
                let quotient = &quotients[n as usize - 1];
                let counted = self.histogram(n as usize, field).map(|h| {
                    let full = h.counts[n as usize];
                    (full % (p - 1) == 0).then(|| full / (p - 1)).ok_or(full)
                });
                results.push(match (counted, quotient) {
                    (Err(FieldError::BudgetExceeded { required, budget }), _) => {
                        CheckResult::skipped("projective_count", &params, budget_reason(&required, budget))
                    }
                    (Err(e), _) => CheckResult::compare("projective_count", &params, "count", e),
                    (Ok(Err(full)), _) => CheckResult::compare(
                        "projective_count",
                        &params,
                        "integral quotient",
                        FieldError::NonintegralQuotient { count: full, divisor: p - 1 },
                    ),
                    (Ok(Ok(count)), Some(q)) => {
                        CheckResult::compare("projective_count", &params, point_count(q, p), count)
                    }
                    (Ok(Ok(count)), None) => CheckResult::compare("projective_count", &params, "class", count),
                });
            }
        }
        VerificationReport::from_results(results, self.config(max_n, primes))
    }
}

pub fn verify_formula_vs_recursion(max_n: u32) -> VerificationReport {
    Verifier::new(ffield::DEFAULT_BUDGET).formula_vs_recursion(max_n)
}

pub fn verify_point_counts(max_n: u32, primes: &[PrimeField], budget: u64) -> VerificationReport {
    Verifier::new(budget).point_counts(max_n, primes)
}

pub fn verify_fibers(max_n: u32, primes: &[PrimeField], budget: u64) -> VerificationReport {
    Verifier::new(budget).fibers(max_n, primes)
}

pub fn verify_projective(max_n: u32, primes: &[PrimeField], budget: u64) -> VerificationReport {
    Verifier::new(budget).projective(max_n, primes)
}

/// Limits for [`run_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub symbolic_max_n: u32,
    pub count_max_n: u32,
    pub fiber_max_n: u32,
    pub projective_max_n: u32,
    pub primes: Vec<u64>,
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            symbolic_max_n: 12,
            count_max_n: 5,
            fiber_max_n: 4,
            projective_max_n: 12,
            primes: vec![3, 5, 7],
            budget: ffield::DEFAULT_BUDGET,
        }
    }
}

/// All four check families in a fixed order.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport, FieldError> {
    let fields = config
        .primes
        .iter()
        .map(|&p| PrimeField::new(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut verifier = Verifier::new(config.budget);
    let mut report = verifier.formula_vs_recursion(config.symbolic_max_n);
    report.extend(verifier.point_counts(config.count_max_n, &fields));
    report.extend(verifier.fibers(config.fiber_max_n, &fields));
    report.extend(verifier.projective(config.projective_max_n, &fields));
    report.config = BTreeMap::from([
        ("budget".to_string(), config.budget.into()),
        ("symbolic_max_n".to_string(), config.symbolic_max_n.into()),
        ("count_max_n".to_string(), config.count_max_n.into()),
        ("fiber_max_n".to_string(), config.fiber_max_n.into()),
        ("projective_max_n".to_string(), config.projective_max_n.into()),
        ("primes".to_string(), config.primes.clone().into()),
    ]);
    Ok(report)
}
