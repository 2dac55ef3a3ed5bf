//! The specialization maps `sp_{b,c}`, iterated plans and evaluation at
//! points.

use num_traits::Zero;

use crate::algebra::{RationalFunction, Scalar, Substituted};
use crate::error::SpecializeError;
use crate::formal::{c_element, five_term, Coefficient, Context, ExtendedFormalSum, FormalSum};

/// Specialize variable `var` to `target` using the auxiliary element `aux`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecStep {
    pub var: usize,
    pub target: Substituted,
    pub aux: RationalFunction,
}

/// Auxiliary element used when none is given.
pub const DEFAULT_AUX: i64 = 2;

impl SpecStep {
    pub fn new(
        ctx: &Context,
        var: &str,
        target: Substituted,
        aux: Option<RationalFunction>,
    ) -> Result<Self, SpecializeError> {
        let v = ctx
            .var_index(var)
            .ok_or_else(|| SpecializeError::InvalidStep(format!("unknown variable {var}")))?;
        let aux = aux.unwrap_or_else(|| ctx.int(DEFAULT_AUX));
        let step = SpecStep { var: v, target, aux };
        step.validate(ctx)?;
        Ok(step)
    }

    pub fn validate(&self, ctx: &Context) -> Result<(), SpecializeError> {
        let name = ctx.vars().get(self.var).ok_or_else(|| SpecializeError::InvalidStep("variable index".into()))?;
        if let Substituted::Finite(b) = &self.target {
            if b.involves(self.var) {
                return Err(SpecializeError::InvalidStep(format!("target involves {name}")));
            }
        }
        if self.aux.involves(self.var) {
            return Err(SpecializeError::InvalidStep(format!("auxiliary element involves {name}")));
        }
        if self.aux.is_zero() || self.aux.is_one() {
            return Err(SpecializeError::InvalidStep("auxiliary element must not be 0 or 1".into()));
        }
        Ok(())
    }
}

/// An ordered list of steps eliminating distinct variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecPlan {
    pub steps: Vec<SpecStep>,
}

impl SpecPlan {
    pub fn new(ctx: &Context, steps: Vec<SpecStep>) -> Result<Self, SpecializeError> {
        let mut eliminated = vec![false; ctx.nvars()];
        for s in &steps {
            s.validate(ctx)?;
            if eliminated[s.var] {
                return Err(SpecializeError::InvalidStep(format!("{} specialized twice", ctx.vars()[s.var])));
            }
            let uses_eliminated = |f: &RationalFunction| (0..ctx.nvars()).any(|v| eliminated[v] && f.involves(v));
            if uses_eliminated(&s.aux) || matches!(&s.target, Substituted::Finite(b) if uses_eliminated(b)) {
                return Err(SpecializeError::InvalidStep(format!(
                    "step for {} refers to an eliminated variable",
                    ctx.vars()[s.var]
                )));
            }
            eliminated[s.var] = true;
        }
        Ok(SpecPlan { steps })
    }
}

/// Substitutes `var := b` in every key; keys landing on 0, 1 or ∞ are
/// collected separately.
pub fn naive_eval(alpha: &FormalSum, var: usize, b: &Substituted) -> ExtendedFormalSum {
    let mut out = ExtendedFormalSum::zero(alpha.ctx());
    for (f, a) in alpha.terms() {
        match f.substitute(var, b) {
            Substituted::Infinity => out.c_inf += a,
            Substituted::Finite(g) if g.is_zero() => out.c0 += a,
            Substituted::Finite(g) if g.is_one() => out.c1 += a,
            Substituted::Finite(g) => out.ordinary.add_term(a.clone(), g).expect("g is in F♭"),
        }
    }
    out
}

/// Applies the correction `α ↦ α − c₁[1] + c₀(C_c − [0]) − c_∞(C_c + [∞])`
/// to an extended sum, leaving an ordinary one.
pub fn correct(ext: &ExtendedFormalSum, aux: &RationalFunction) -> Result<FormalSum, SpecializeError> {
    let k: Coefficient = &ext.c0 - &ext.c_inf;
    if k.is_zero() {
        return Ok(ext.ordinary.clone());
    }
    let c = c_element(ext.ordinary.ctx(), aux)?;
    Ok(ext.ordinary.plus(&c.scale(&k))?)
}

/// `sp_{b,c}(α)`.
pub fn sp(alpha: &FormalSum, step: &SpecStep) -> Result<FormalSum, SpecializeError> {
    step.validate(alpha.ctx())?;
    correct(&naive_eval(alpha, step.var, &step.target), &step.aux)
}

/// Iterated specialization, left to right.
pub fn iterate(alpha: &FormalSum, plan: &SpecPlan) -> Result<FormalSum, SpecializeError> {
    let mut cur = alpha.clone();
    for s in &plan.steps {
        cur = sp(&cur, s)?;
    }
    Ok(cur)
}

/// `α(P)`: every key evaluated at a full point, which must be admissible.
pub fn evaluate_at_point(alpha: &FormalSum, point: &[Scalar]) -> Result<FormalSum, SpecializeError> {
    let ctx = alpha.ctx();
    if point.len() != ctx.nvars() {
        return Err(SpecializeError::PointNotAdmissible(format!(
            "expected {} coordinates, got {}",
            ctx.nvars(),
            point.len()
        )));
    }
    let mut out = FormalSum::zero(ctx);
    for (f, a) in alpha.terms() {
        let v = f.eval(point).ok_or_else(|| {
            SpecializeError::PointNotAdmissible(format!("[{}] has a pole", f.render(ctx.vars())))
        })?;
        if v.is_zero() || v == Scalar::from_int(1) {
            return Err(SpecializeError::PointNotAdmissible(format!("[{}] takes the value {v}", f.render(ctx.vars()))));
        }
        out.add_term(a.clone(), RationalFunction::constant(ctx.nvars(), v))?;
    }
    Ok(out)
}

/// Where a function goes under `var := b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    Zero,
    One,
    Infinity,
    Other(RationalFunction),
}

pub fn classify(f: &RationalFunction, var: usize, b: &Substituted) -> Degeneracy {
    match f.substitute(var, b) {
        Substituted::Infinity => Degeneracy::Infinity,
        Substituted::Finite(g) if g.is_zero() => Degeneracy::Zero,
        Substituted::Finite(g) if g.is_one() => Degeneracy::One,
        Substituted::Finite(g) => Degeneracy::Other(g),
    }
}

/// A cell of the specialization table: the five-term relation `R(x, y)`
/// specialized at `var := b`, before and after correction.
pub fn table_row(
    ctx: &Context,
    x: &RationalFunction,
    y: &RationalFunction,
    step: &SpecStep,
) -> Result<(ExtendedFormalSum, FormalSum), SpecializeError> {
    let r = five_term(ctx, x, y)?;
    let naive = naive_eval(&r, step.var, &step.target);
    let corrected = correct(&naive, &step.aux)?;
    Ok((naive, corrected))
}
