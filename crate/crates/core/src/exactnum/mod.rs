//! Exact rationals, dyadic numbers and ball arithmetic.

mod complex;
mod dyadic;
mod elementary;
mod real;
mod refine;
mod render;
mod verdict;

pub use complex::CertifiedComplex;
pub use dyadic::{Dyadic, Round};
pub use elementary::{ln2, pi};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use real::CertifiedReal;
pub use refine::{refine, PrecisionPolicy, DEFAULT_MAX_BITS, DEFAULT_START_BITS, MAX_BITS_ENV};
pub use render::{
    dyadic_to_decimal, format_rational, interval_strings, parse_rational, render_center_radius,
    render_interval, REPORT_DIGITS,
};
pub use verdict::{certify, certify_compare, Relation, Verdict};
