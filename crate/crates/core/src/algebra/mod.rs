//! Exact coefficient fields, polynomials, rational functions and coprime bases.

pub mod basis;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use basis::{basis_order, factor_over, CoprimeBasis, Factorization};
pub use poly::{gcd, lcm, Monomial, MultiPoly};
pub use ratfunc::{RationalFunction, Substituted};
pub use scalar::{FieldMode, Scalar};
