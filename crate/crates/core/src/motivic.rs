//! Classes of rank-stratified symmetric matrix varieties in `Z[L]`.
//!
//! Exact-rank classes `[Sym^{n,k}]` are produced by the three-term
//! recursion over the (1,1)-minor projection and memoized on `(n, k)`.
//! Bounded-rank and range classes are sums of exact-rank classes. The
//! product closed form is computed independently, clearing its
//! denominator with a single exact division at the end.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotivicError {
    #[error("invalid rank range [{k}, {l}]: lower end exceeds upper end")]
    InvalidRange { k: i64, l: i64 },
    #[error("matrix size must be at least 1, got {0}")]
    EmptyMatrix(u32),
    #[error("class has a negative exponent: {0}")]
    NegativeExponent(String),
    #[error("point count base must be at least 2, got {0}")]
    InvalidBase(String),
    #[error("bounded-rank identity failed for n = {n}, k = {k}: sum {sum} vs projection {projection}")]
    IdentityMismatch {
        n: u32,
        k: i64,
        sum: String,
        projection: String,
    },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Which rank stratum (or union of strata) a class describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankCondition {
    Exact(i64),
    AtMost(i64),
    Range(i64, i64),
    /// Full-rank matrices up to nonzero scalars.
    ProjectiveFullRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarietyDescriptor {
    pub n: u32,
    pub rank: RankCondition,
}

impl VarietyDescriptor {
    pub fn new(n: u32, rank: RankCondition) -> Result<Self, MotivicError> {
        match rank {
            RankCondition::Range(k, l) if k > l => Err(MotivicError::InvalidRange { k, l }),
            RankCondition::ProjectiveFullRank if n == 0 => Err(MotivicError::EmptyMatrix(n)),
            _ => Ok(Self { n, rank }),
        }
    }
}

impl fmt::Display for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        match self.rank {
            RankCondition::Exact(k) => write!(f, "Sym^{{{n},{k}}}"),
            RankCondition::AtMost(k) => write!(f, "Sym^{{{n},<={k}}}"),
            RankCondition::Range(k, l) => write!(f, "Sym^{{{n},[{k},{l}]}}"),
            RankCondition::ProjectiveFullRank => write!(f, "PSym^{{{n},{n}}}"),
        }
    }
}

/// How a class value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Recursion,
    ClosedForm,
    Quotient,
    Sum,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Recursion => "recursion",
            Route::ClosedForm => "closed-form",
            Route::Quotient => "quotient",
            Route::Sum => "sum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotivicClass {
    pub descriptor: VarietyDescriptor,
    pub value: LaurentPolynomial,
    pub route: Route,
}

impl MotivicClass {
    fn new(n: u32, rank: RankCondition, value: LaurentPolynomial, route: Route) -> Self {
        debug_assert!(value.is_polynomial(), "class {value} left Z[L]");
        Self {
            descriptor: VarietyDescriptor { n, rank },
            value,
            route,
        }
    }

    /// Euler characteristic: the value at `L = 1`.
    pub fn euler_characteristic(&self) -> Result<BigInt, MotivicError> {
        self.value
            .eval_poly(&BigInt::from(1))
            .ok_or_else(|| MotivicError::NegativeExponent(self.value.to_string()))
    }

    /// The number of `F_q`-points, i.e. the value at `L = q`.
    ///
    /// Only odd prime powers `q` are meaningful as point counts; the value is
    /// reported for any `q >= 2`.
    pub fn point_count(&self, q: &BigInt) -> Result<BigInt, MotivicError> {
        if *q < BigInt::from(2) {
            return Err(MotivicError::InvalidBase(q.to_string()));
        }
        self.value
            .eval_poly(q)
            .ok_or_else(|| MotivicError::NegativeExponent(self.value.to_string()))
    }

    /// Candidate Tate decomposition; see [`tate_decomposition`].
    pub fn tate_decomposition(&self) -> Result<Vec<TateSummand>, MotivicError> {
        tate_decomposition(&self.value)
    }
}

/// JSON form: `{"n", "rank": {"kind", "k", "l"?}, "polynomial", "route"}`.
impl Serialize for MotivicClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rank {
            kind: &'static str,
            k: i64,
            #[serde(skip_serializing_if = "Option::is_none")]
            l: Option<i64>,
        }
        let n = self.descriptor.n;
        let rank = match self.descriptor.rank {
            RankCondition::Exact(k) => Rank { kind: "exact", k, l: None },
            RankCondition::AtMost(k) => Rank { kind: "at_most", k, l: None },
            RankCondition::Range(k, l) => Rank { kind: "range", k, l: Some(l) },
            RankCondition::ProjectiveFullRank => Rank {
                kind: "projective_full",
                k: i64::from(n),
                l: None,
            },
        };
        let mut s = serializer.serialize_struct("MotivicClass", 4)?;
        s.serialize_field("n", &n)?;
        s.serialize_field("rank", &rank)?;
        s.serialize_field("polynomial", &self.value)?;
        s.serialize_field("route", self.route.as_str())?;
        s.end()
    }
}

/// One summand `F(twist)[shift]^{multiplicity}` of a split Tate motive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TateSummand {
    pub twist: u32,
    pub shift: i64,
    pub multiplicity: u64,
}

impl TateSummand {
    /// Proper summands satisfy `shift >= 2 * twist`.
    pub fn is_proper(&self) -> bool {
        self.shift >= 2 * i64::from(self.twist)
    }

    /// The summand's class in `K_0`: `(-1)^shift * multiplicity * L^twist`.
    pub fn class(&self) -> LaurentPolynomial {
        let sign: i64 = if self.shift.rem_euclid(2) == 0 { 1 } else { -1 };
        LaurentPolynomial::monomial(BigInt::from(sign) * self.multiplicity, i64::from(self.twist))
    }
}

impl fmt::Display for TateSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({})[{}]", self.twist, self.shift)?;
        if self.multiplicity != 1 {
            write!(f, "^{}", self.multiplicity)?;
        }
        Ok(())
    }
}

/// Signed sum of summand classes.
pub fn tate_signed_sum(summands: &[TateSummand]) -> LaurentPolynomial {
    summands.iter().map(TateSummand::class).sum()
}

/// Minimal-shift candidate decomposition of a class in `Z[L]`.
///
/// A coefficient `c` on `L^a` becomes `F(a)[2a]^c` when positive and
/// `F(a)[2a+1]^{-c}` when negative. For `L - 1` this is the known
/// decomposition `F(1)[2] + F(0)[1]`; for larger classes it is only a
/// candidate. Summands are listed by descending twist.
pub fn tate_decomposition(value: &LaurentPolynomial) -> Result<Vec<TateSummand>, MotivicError> {
    if !value.is_polynomial() {
        return Err(MotivicError::NegativeExponent(value.to_string()));
    }
    let summands: Vec<TateSummand> = value
        .terms()
        .rev()
        .map(|(a, c)| {
            let twist = u32::try_from(a).expect("exponent fits in u32");
            let (shift, mult) = if c.sign() == num_bigint::Sign::Minus {
                (2 * a + 1, -c)
            } else {
                (2 * a, c.clone())
            };
            TateSummand {
                twist,
                shift,
                multiplicity: u64::try_from(mult).expect("multiplicity fits in u64"),
            }
        })
        .collect();
    assert_eq!(&tate_signed_sum(&summands), value, "signed sum must reconstruct the class");
    assert!(summands.iter().all(TateSummand::is_proper));
    Ok(summands)
}

/// Memo table for exact-rank classes.
///
/// The cache is owned by one caller at a time; the free functions in this
/// module use a thread-local instance.
#[derive(Debug, Default, Clone)]
pub struct ClassCache {
    exact: HashMap<(u32, i64), LaurentPolynomial>,
}

impl ClassCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    /// `[Sym^{n,k}]` by the three-term recursion
    /// `(L^n - L^{k-1})[Sym^{n-1,k-2}] + (L^k - L^{k-1})[Sym^{n-1,k-1}] + L^k [Sym^{n-1,k}]`.
    pub fn exact_value(&mut self, n: u32, k: i64) -> LaurentPolynomial {
        if k < 0 || k > i64::from(n) {
            return LaurentPolynomial::zero();
        }
        if k == 0 {
            return LaurentPolynomial::one();
        }
        if (n, k) == (1, 1) {
            return LaurentPolynomial::power_minus_one(1);
        }
        if let Some(v) = self.exact.get(&(n, k)) {
            return v.clone();
        }
        let ln = i64::from(n);
        let l = LaurentPolynomial::lefschetz;
        let a = self.exact_value(n - 1, k - 2);
        let b = self.exact_value(n - 1, k - 1);
        let c = self.exact_value(n - 1, k);
        let coeff_a = l().shift(ln - 1) - l().shift(k - 2);
        let coeff_b = l().shift(k - 1) - l().shift(k - 2);
        let coeff_c = l().shift(k - 1);
        let v = &(&coeff_a * &a) + &(&(&coeff_b * &b) + &(&coeff_c * &c));
        self.exact.insert((n, k), v.clone());
        v
    }

    pub fn class_exact(&mut self, n: u32, k: i64) -> MotivicClass {
        let value = self.exact_value(n, k);
        MotivicClass::new(n, RankCondition::Exact(k), value, Route::Recursion)
    }

    fn at_most_value(&mut self, n: u32, k: i64) -> LaurentPolynomial {
        (0..=k.min(i64::from(n))).map(|m| self.exact_value(n, m)).sum()
    }

    /// `[Sym^{n,<=k}]` as a sum of exact-rank classes.
    ///
    /// For `0 < k < n` the sum is also checked against the projection
    /// decomposition `L^n [Sym^{n-1,<=k-2}] + L^k [Sym^{n-1,k-1}] + L^k [Sym^{n-1,k}]`.
    pub fn class_at_most(&mut self, n: u32, k: i64) -> Result<MotivicClass, MotivicError> {
        let sum = self.at_most_value(n, k);
        if 0 < k && k < i64::from(n) {
            let projection = self.at_most_value(n - 1, k - 2).shift(i64::from(n))
                + (self.exact_value(n - 1, k - 1) + self.exact_value(n - 1, k)).shift(k);
            if projection != sum {
                return Err(MotivicError::IdentityMismatch {
                    n,
                    k,
                    sum: sum.to_string(),
                    projection: projection.to_string(),
                });
            }
        }
        Ok(MotivicClass::new(n, RankCondition::AtMost(k), sum, Route::Sum))
    }

    /// `[Sym^{n,[k,l]}]`, ranks `k..=l`.
    pub fn class_range(&mut self, n: u32, k: i64, l: i64) -> Result<MotivicClass, MotivicError> {
        if k > l {
            return Err(MotivicError::InvalidRange { k, l });
        }
        let lo = k.max(0);
        let hi = l.min(i64::from(n));
        let value = (lo..=hi).map(|m| self.exact_value(n, m)).sum();
        Ok(MotivicClass::new(n, RankCondition::Range(k, l), value, Route::Sum))
    }

    /// `[PSym^{n,n}] = [Sym^{n,n}] / (L - 1)`.
    pub fn projective_full_rank(&mut self, n: u32) -> Result<MotivicClass, MotivicError> {
        if n == 0 {
            return Err(MotivicError::EmptyMatrix(n));
        }
        let full = self.exact_value(n, i64::from(n));
        let value = full.div_exact(&LaurentPolynomial::power_minus_one(1))?;
        Ok(MotivicClass::new(n, RankCondition::ProjectiveFullRank, value, Route::Quotient))
    }

    /// Class of any descriptor; `route` picks recursion or closed form for
    /// the exact-rank pieces.
    pub fn class_for(
        &mut self,
        descriptor: VarietyDescriptor,
        route: Route,
    ) -> Result<MotivicClass, MotivicError> {
        let VarietyDescriptor { n, rank } = VarietyDescriptor::new(descriptor.n, descriptor.rank)?;
        if route != Route::ClosedForm {
            return match rank {
                RankCondition::Exact(k) => Ok(self.class_exact(n, k)),
                RankCondition::AtMost(k) => self.class_at_most(n, k),
                RankCondition::Range(k, l) => self.class_range(n, k, l),
                RankCondition::ProjectiveFullRank => self.projective_full_rank(n),
            };
        }
        let (lo, hi) = match rank {
            RankCondition::Exact(k) => return closed_form(n, k),
            RankCondition::AtMost(k) => (0, k),
            RankCondition::Range(k, l) => (k, l),
            RankCondition::ProjectiveFullRank => {
                let full = closed_form(n, i64::from(n))?.value;
                let value = full.div_exact(&LaurentPolynomial::power_minus_one(1))?;
                return Ok(MotivicClass::new(n, rank, value, Route::Quotient));
            }
        };
        let mut value = LaurentPolynomial::zero();
        for m in lo.max(0)..=hi.min(i64::from(n)) {
            value += &closed_form(n, m)?.value;
        }
        Ok(MotivicClass::new(n, rank, value, Route::Sum))
    }
}

thread_local! {
    static CACHE: RefCell<ClassCache> = RefCell::new(ClassCache::new());
}

fn with_cache<T>(f: impl FnOnce(&mut ClassCache) -> T) -> T {
    CACHE.with(|c| f(&mut c.borrow_mut()))
}

/// `[Sym^{n,k}]` via the memoized recursion. Zero outside `0..=n`.
pub fn class_exact(n: u32, k: i64) -> MotivicClass {
    with_cache(|c| c.class_exact(n, k))
}

pub fn class_at_most(n: u32, k: i64) -> Result<MotivicClass, MotivicError> {
    with_cache(|c| c.class_at_most(n, k))
}

pub fn class_range(n: u32, k: i64, l: i64) -> Result<MotivicClass, MotivicError> {
    with_cache(|c| c.class_range(n, k, l))
}

pub fn projective_full_rank(n: u32) -> Result<MotivicClass, MotivicError> {
    with_cache(|c| c.projective_full_rank(n))
}

pub fn class_for(descriptor: VarietyDescriptor, route: Route) -> Result<MotivicClass, MotivicError> {
    with_cache(|c| c.class_for(descriptor, route))
}

/// `[Sym^{n,k}]` from the product formula
///
/// `prod_{i=1}^{floor(k/2)} L^{2i} / (L^{2i} - 1) * prod_{i=0}^{k-1} (L^{n-i} - 1)`.
///
/// All numerator factors are multiplied out first and the denominator is
/// cleared with one exact division, so a transcription error surfaces as
/// [`LaurentError::NonzeroRemainder`].
pub fn closed_form(n: u32, k: i64) -> Result<MotivicClass, MotivicError> {
    let rank = RankCondition::Exact(k);
    if k < 0 || k > i64::from(n) {
        return Ok(MotivicClass::new(n, rank, LaurentPolynomial::zero(), Route::ClosedForm));
    }
    let ln = i64::from(n);
    let half = k / 2;
    let shift: i64 = (1..=half).map(|i| 2 * i).sum();
    let numerator: LaurentPolynomial = (0..k)
        .map(|i| LaurentPolynomial::power_minus_one(ln - i))
        .product::<LaurentPolynomial>()
        .shift(shift);
    let denominator: LaurentPolynomial = (1..=half)
        .map(|i| LaurentPolynomial::power_minus_one(2 * i))
        .product();
    let value = numerator.div_exact(&denominator)?;
    if !value.is_polynomial() {
        return Err(MotivicError::NegativeExponent(value.to_string()));
    }
    Ok(MotivicClass::new(n, rank, value, Route::ClosedForm))
}

/// `[Sym^{n,n}]` as a product of binomials:
/// `prod_{i=1}^{n/2} (L^{n+1} - L^{2i})` for even `n`,
/// `prod_{i=0}^{(n-1)/2} (L^n - L^{2i})` for odd `n`.
pub fn full_rank_product(n: u32) -> Result<MotivicClass, MotivicError> {
    if n == 0 {
        return Err(MotivicError::EmptyMatrix(n));
    }
    let ln = i64::from(n);
    let l = LaurentPolynomial::lefschetz;
    let value: LaurentPolynomial = if n.is_multiple_of(2) {
        (1..=ln / 2).map(|i| l().shift(ln) - l().shift(2 * i - 1)).product()
    } else {
        (0..=(ln - 1) / 2).map(|i| l().shift(ln - 1) - l().shift(2 * i - 1)).product()
    };
    Ok(MotivicClass::new(n, RankCondition::Exact(ln), value, Route::ClosedForm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(exp: i64) -> LaurentPolynomial {
        LaurentPolynomial::monomial(1, exp)
    }

    fn one() -> LaurentPolynomial {
        LaurentPolynomial::one()
    }

    #[test]
    fn class_exact_examples() {
        assert_eq!(class_exact(1, 1).value, l(1) - one());
        assert!(class_exact(5, 7).value.is_zero());
        assert!(class_exact(5, -1).value.is_zero());
        assert_eq!(class_exact(2, 1).value, l(2) - one());
        assert_eq!(class_exact(2, 2).value, l(3) - l(2));
        assert!(class_exact(0, 0).value.is_one());
        assert_eq!(class_exact(2, 2).route, Route::Recursion);
    }

    #[test]
    fn class_at_most_examples() {
        for n in 0..=8u32 {
            let expected = l(i64::from(n * (n + 1) / 2));
            assert_eq!(class_at_most(n, i64::from(n)).unwrap().value, expected, "n = {n}");
        }
        assert!(class_at_most(3, 0).unwrap().value.is_one());
        assert_eq!(class_at_most(2, 1).unwrap().value, l(2));
        assert!(class_at_most(2, -1).unwrap().value.is_zero());
        // k beyond n saturates at the whole space
        assert_eq!(class_at_most(2, 9).unwrap().value, l(3));
    }

    #[test]
    fn bounded_rank_identity_checked_for_interior_ranks() {
        let mut cache = ClassCache::new();
        for n in 2..=10u32 {
            for k in 1..i64::from(n) {
                cache.class_at_most(n, k).unwrap();
            }
        }
    }

    #[test]
    fn class_range_examples() {
        assert_eq!(class_range(2, 1, 2).unwrap().value, l(3) - one());
        assert_eq!(class_range(3, 0, 3).unwrap().value, l(6));
        assert_eq!(
            class_range(4, 2, 1),
            Err(MotivicError::InvalidRange { k: 2, l: 1 })
        );
        let r = class_range(4, 1, 2).unwrap().value;
        assert_eq!(r, class_exact(4, 1).value + class_exact(4, 2).value);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form(2, 2).unwrap().value, l(3) - l(2));
        assert_eq!(closed_form(3, 1).unwrap().value, l(3) - one());
        for n in 0..6 {
            assert!(closed_form(n, 0).unwrap().value.is_one());
        }
        assert!(closed_form(3, 4).unwrap().value.is_zero());
        assert!(closed_form(3, -2).unwrap().value.is_zero());
    }

    #[test]
    fn full_rank_product_examples() {
        assert_eq!(full_rank_product(2).unwrap().value, l(3) - l(2));
        assert_eq!(
            full_rank_product(3).unwrap().value,
            (l(3) - one()) * (l(3) - l(2))
        );
        assert_eq!(full_rank_product(1).unwrap().value, l(1) - one());
        assert_eq!(full_rank_product(0), Err(MotivicError::EmptyMatrix(0)));
    }

    #[test]
    fn projective_examples() {
        assert!(projective_full_rank(1).unwrap().value.is_one());
        assert_eq!(projective_full_rank(2).unwrap().value, l(2));
        // (L^3 - 1)(L^3 - L^2) / (L - 1) = L^2 (L^3 - 1)
        assert_eq!(projective_full_rank(3).unwrap().value, l(5) - l(2));
        assert_eq!(projective_full_rank(0), Err(MotivicError::EmptyMatrix(0)));
    }

    #[test]
    fn tate_examples() {
        let s = tate_decomposition(&class_exact(1, 1).value).unwrap();
        assert_eq!(
            s,
            vec![
                TateSummand { twist: 1, shift: 2, multiplicity: 1 },
                TateSummand { twist: 0, shift: 1, multiplicity: 1 },
            ]
        );
        let s = tate_decomposition(&one()).unwrap();
        assert_eq!(s, vec![TateSummand { twist: 0, shift: 0, multiplicity: 1 }]);
        let s = class_exact(2, 2).tate_decomposition().unwrap();
        let rendered: Vec<String> = s.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["F(3)[6]", "F(2)[5]"]);
        assert!(matches!(
            tate_decomposition(&l(-1)),
            Err(MotivicError::NegativeExponent(_))
        ));
        let m = TateSummand { twist: 2, shift: 5, multiplicity: 3 };
        assert_eq!(m.to_string(), "F(2)[5]^3");
        assert_eq!(m.class(), LaurentPolynomial::monomial(-3, 2));
    }

    #[test]
    fn euler_and_point_counts() {
        for n in 0..5 {
            assert_eq!(class_exact(n, 0).euler_characteristic().unwrap(), BigInt::from(1));
        }
        assert_eq!(class_exact(3, 2).euler_characteristic().unwrap(), BigInt::from(0));
        assert_eq!(class_at_most(3, 3).unwrap().euler_characteristic().unwrap(), BigInt::from(1));

        let q = |x: i64| BigInt::from(x);
        assert_eq!(class_exact(2, 2).point_count(&q(3)).unwrap(), q(18));
        assert_eq!(class_exact(1, 1).point_count(&q(5)).unwrap(), q(4));
        assert_eq!(class_at_most(2, 2).unwrap().point_count(&q(3)).unwrap(), q(27));
        assert!(matches!(
            class_exact(1, 1).point_count(&q(1)),
            Err(MotivicError::InvalidBase(_))
        ));
    }

    #[test]
    fn cold_cache_matches_warm_cache() {
        let mut warm = ClassCache::new();
        for n in 0..=9 {
            for k in 0..=i64::from(n) {
                warm.exact_value(n, k);
            }
        }
        for n in 0..=9u32 {
            for k in -1..=i64::from(n) + 1 {
                let mut cold = ClassCache::new();
                assert_eq!(cold.exact_value(n, k), warm.exact_value(n, k));
            }
        }
    }

    #[test]
    fn class_for_routes_agree() {
        let mut cache = ClassCache::new();
        let ranks = [
            RankCondition::Exact(3),
            RankCondition::AtMost(2),
            RankCondition::Range(1, 3),
            RankCondition::ProjectiveFullRank,
        ];
        for rank in ranks {
            let d = VarietyDescriptor::new(5, rank).unwrap();
            let a = cache.class_for(d, Route::Recursion).unwrap();
            let b = cache.class_for(d, Route::ClosedForm).unwrap();
            assert_eq!(a.value, b.value, "{d}");
        }
    }

    #[test]
    fn json_schema() {
        let c = class_at_most(3, 3).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "n": 3,
                "rank": {"kind": "at_most", "k": 3},
                "polynomial": {"6": "1"},
                "route": "sum"
            })
        );
        let r = serde_json::to_value(class_range(2, 1, 2).unwrap()).unwrap();
        assert_eq!(r["rank"], serde_json::json!({"kind": "range", "k": 1, "l": 2}));
    }
}
