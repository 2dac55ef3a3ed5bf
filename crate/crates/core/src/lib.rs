//! Exact verification of functional equations for the Bloch-Wigner, Rogers
//! and Coleman p-adic dilogarithms.

pub mod algebra;
pub mod bloch_fq;
pub mod error;
pub mod formal;
pub mod intlin;
pub mod numerics;
pub mod padic;
pub mod specialize;
pub mod syntax;
pub mod wedge;

pub use algebra::{CoprimeBasis, FieldMode, MultiPoly, RationalFunction, Scalar, Substituted};
pub use error::*;
pub use formal::{
    c_element, coeff, conj_sum, five_term, inversion, CoeffMode, Coefficient, Context, ExtendedFormalSum,
    FormalSum,
};
pub use wedge::{check_constant, check_constant_cc, check_constant_real, del, ConstancyCertificate, Verdict, WedgeElement};
pub use specialize::{evaluate_at_point, iterate, naive_eval, sp, SpecPlan, SpecStep};
pub use numerics::{bloch_wigner, li2, numeric_probe, rl_bar, rogers, ModPiSqHalf, ProbeDomain, ProbeReport};
pub use padic::{branch_diff, check_constant_padic, dp_disc, li2p, plog, Branch, PadicNumber};
pub use bloch_fq::{check_c_facts, modified_bloch, pre_bloch, relations_matrix, AbelianGroupPresentation, CFactsReport};
pub use intlin::InvariantFactors;
pub use syntax::{parse_document, parse_expression, parse_formal_sum, render_document, IdentityDoc};
