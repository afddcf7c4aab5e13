//! Grothendieck-ring classes of the varieties of symmetric matrices of
//! fixed or bounded rank, as polynomials in the Lefschetz class `L`, with
//! an exhaustive finite-field point-counting oracle to check them against.
//!
//! - [`laurent`]: exact Laurent polynomials over big integers.
//! - [`motivic`]: the classes, by recursion and by closed form.
//! - [`ffield`]: rank enumeration over `F_p` for small odd primes.
//! - [`verify`]: cross-checks and machine-readable reports.

pub mod ffield;
pub mod laurent;
pub mod motivic;
pub mod verify;

pub use ffield::{FieldError, FiberCensus, PrimeField, RankHistogram, SymMatrix};
pub use laurent::{LaurentError, LaurentPolynomial};
pub use motivic::{
    MotivicClass, MotivicError, RankCondition, Route, TateSummand, VarietyDescriptor,
};
pub use verify::{CheckResult, Status, VerificationReport};
