//! Exact arithmetic: integers, factorization, cyclotomic rings, finite
//! fields, polynomials and surds.

pub mod arith;
pub mod cyclotomic;
pub mod factor;
pub mod field;
pub mod modp;
pub mod poly;
pub mod surd;

pub use cyclotomic::{cyclotomic_is_rational, CyclotomicElement};
pub use factor::{factorize, mult_parts, FactoredInt};
pub use field::FiniteField;
pub use poly::IntPolynomial;
pub use surd::{HalfPower, Surd};
