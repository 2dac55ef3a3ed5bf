//! Constancy criteria: `D(α)` is constant iff `∂(α)` has no β₁ and no β₂
//! part. The same symbolic test serves the Bloch-Wigner, Rogers and Coleman
//! dilogarithms; only the evaluation of the constant differs.

use super::{del, Generator, WedgeElement};
use crate::error::WedgeError;
use crate::formal::{conj_sum, Coefficient, FormalSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    NotConstant,
}

/// A nonzero pairing in β₁ (two polynomials) or β₂ (a polynomial against a
/// constant prime or the torsion generator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub first: Generator,
    pub second: Generator,
    pub value: Coefficient,
}

/// Value of the constant, attached by the numeric or p-adic evaluators.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstantEstimate {
    Real { value: f64, bound: f64 },
    Padic { value: String, precision: i64 },
}

#[derive(Clone, Debug)]
pub struct ConstancyCertificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// The β₃ part of the boundary, i.e. its component in `A ⊗ ∧̃²k*`.
    pub residual_beta3: WedgeElement,
    pub constant: Option<ConstantEstimate>,
    pub notes: Vec<String>,
}

impl ConstancyCertificate {
    /// Reads the verdict off a boundary.
    pub fn from_boundary(w: &WedgeElement) -> Self {
        let (b1, b2, b3) = w.decompose();
        let witness = b1
            .pairs()
            .iter()
            .chain(b2.pairs().iter())
            .next()
            .map(|((x, y), c)| Witness { first: x.clone(), second: y.clone(), value: c.clone() })
            .or_else(|| {
                b2.torsion().iter().next().map(|(g, k)| Witness {
                    first: g.clone(),
                    second: Generator::Torsion,
                    value: Coefficient::from_integer((*k).into()),
                })
            });
        ConstancyCertificate {
            verdict: if witness.is_some() { Verdict::NotConstant } else { Verdict::Constant },
            witness,
            residual_beta3: b3,
            constant: None,
            notes: Vec::new(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.verdict == Verdict::Constant
    }
}

impl Witness {
    pub fn render(&self, ctx: &crate::formal::Context) -> String {
        format!("({}, {}) -> {}", self.first.render(ctx), self.second.render(ctx), self.value)
    }
}

/// Constancy of `D(α)` (and of the Rogers and p-adic analogues).
pub fn check_constant(alpha: &FormalSum) -> Result<ConstancyCertificate, WedgeError> {
    Ok(ConstancyCertificate::from_boundary(&del(alpha)?))
}

/// Constancy of `D(α)` on the real locus: the test applied to `α − ᾱ`.
pub fn check_constant_real(alpha: &FormalSum) -> Result<ConstancyCertificate, WedgeError> {
    let diff = alpha.minus(&conj_sum(alpha, None)).expect("same context");
    check_constant(&diff)
}

/// Constancy of `D(α)` on the locus where the paired variables are complex
/// conjugates of each other. `pairs` lists `(z, z̄)` index pairs that must
/// cover every variable exactly once.
pub fn check_constant_cc(alpha: &FormalSum, pairs: &[(usize, usize)]) -> Result<ConstancyCertificate, WedgeError> {
    let n = alpha.ctx().nvars();
    let mut perm: Vec<Option<usize>> = vec![None; n];
    for &(a, b) in pairs {
        if a >= n || b >= n || a == b || perm[a].is_some() || perm[b].is_some() {
            return Err(WedgeError::UnpairedVariables(format!("bad pair ({a}, {b})")));
        }
        perm[a] = Some(b);
        perm[b] = Some(a);
    }
    let perm: Vec<usize> = perm
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| WedgeError::UnpairedVariables(alpha.ctx().vars()[i].clone())))
        .collect::<Result<_, _>>()?;
    let diff = alpha.minus(&conj_sum(alpha, Some(&perm))).expect("same context");
    if diff.is_zero() {
        return Ok(ConstancyCertificate::from_boundary(&WedgeElement::zero(alpha.ctx())));
    }
    check_constant(&diff)
}
