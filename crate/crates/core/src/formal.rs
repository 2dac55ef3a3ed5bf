//! Formal sums `Σ aⱼ[fⱼ]` of symbols `[f]` with `f ∉ {0, 1}`, and the relation
//! generators built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{FieldMode, RationalFunction};
use crate::error::SumError;

/// Coefficient group: ℤ or ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CoeffMode {
    #[default]
    Integer,
    Rational,
}

/// Variables, coefficient field and coefficient group shared by a family of
/// formal sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    vars: Arc<[String]>,
    field: FieldMode,
    coeffs: CoeffMode,
}

impl Context {
    pub fn new<S: AsRef<str>>(vars: &[S], field: FieldMode, coeffs: CoeffMode) -> Self {
        Context {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            field,
            coeffs,
        }
    }

    /// ℚ coefficients of functions over ℚ, integer coefficients.
    pub fn rational<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::new(vars, FieldMode::Rational, CoeffMode::Integer)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> FieldMode {
        self.field
    }

    pub fn coeffs(&self) -> CoeffMode {
        self.coeffs
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, name: &str) -> RationalFunction {
        let i = self.var_index(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        RationalFunction::var(self.nvars(), i)
    }

    pub fn int(&self, k: i64) -> RationalFunction {
        RationalFunction::from_int(self.nvars(), k)
    }

    pub fn with_coeffs(&self, coeffs: CoeffMode) -> Self {
        Context { coeffs, ..self.clone() }
    }

    pub fn with_field(&self, field: FieldMode) -> Self {
        Context { field, ..self.clone() }
    }
}

pub type Coefficient = BigRational;

pub fn coeff(n: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of `A[F♭]`: merged terms, no zero coefficients, no key equal to
/// 0 or 1.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSum {
    ctx: Context,
    terms: BTreeMap<RationalFunction, Coefficient>,
}

impl FormalSum {
    pub fn zero(ctx: &Context) -> Self {
        FormalSum { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    /// `[f]` with coefficient one.
    pub fn symbol(ctx: &Context, f: RationalFunction) -> Result<Self, SumError> {
        let mut s = FormalSum::zero(ctx);
        s.add_term(coeff(1), f)?;
        Ok(s)
    }

    pub fn from_terms<I>(ctx: &Context, terms: I) -> Result<Self, SumError>
    where
        I: IntoIterator<Item = (Coefficient, RationalFunction)>,
    {
        let mut s = FormalSum::zero(ctx);
        for (a, f) in terms {
            s.add_term(a, f)?;
        }
        Ok(s)
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    /// Adds `a·[f]`, merging with an existing term.
    pub fn add_term(&mut self, a: Coefficient, f: RationalFunction) -> Result<(), SumError> {
        if self.ctx.coeffs == CoeffMode::Integer && !a.is_integer() {
            return Err(SumError::NonIntegerCoefficient(a.to_string()));
        }
        if f.is_zero() || f.is_one() {
            return Err(SumError::DegenerateArguments(format!(
                "symbol [{}] is not in F♭",
                f.render(self.ctx.vars())
            )));
        }
        if a.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&f) {
            Some(c) => {
                *c += a;
                if c.is_zero() {
                    self.terms.remove(&f);
                }
            }
            None => {
                self.terms.insert(f, a);
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RationalFunction, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, f: &RationalFunction) -> Coefficient {
        self.terms.get(f).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &FormalSum) -> Result<FormalSum, SumError> {
        if self.ctx.nvars() != other.ctx.nvars() || self.ctx.field != other.ctx.field {
            return Err(SumError::IncompatibleSums);
        }
        let mut out = self.clone();
        for (f, a) in &other.terms {
            out.add_term(a.clone(), f.clone())?;
        }
        Ok(out)
    }

    pub fn minus(&self, other: &FormalSum) -> Result<FormalSum, SumError> {
        self.plus(&other.scale(&-coeff(1)))
    }

    pub fn scale(&self, a: &Coefficient) -> FormalSum {
        if a.is_zero() {
            return FormalSum::zero(&self.ctx);
        }
        FormalSum {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(f, c)| (f.clone(), c * a)).collect(),
        }
    }

    /// Reinterprets the sum in another context with the same number of
    /// variables (e.g. after renaming).
    pub fn with_ctx(&self, ctx: &Context) -> FormalSum {
        assert_eq!(ctx.nvars(), self.ctx.nvars());
        FormalSum { ctx: ctx.clone(), terms: self.terms.clone() }
    }

    /// Applies `g` to every key, merging results. Keys mapping to 0 or 1 are
    /// rejected.
    pub fn map_keys(
        &self,
        mut g: impl FnMut(&RationalFunction) -> RationalFunction,
    ) -> Result<FormalSum, SumError> {
        let mut out = FormalSum::zero(&self.ctx);
        for (f, a) in &self.terms {
            out.add_term(a.clone(), g(f))?;
        }
        Ok(out)
    }

    /// Canonical rendering: terms in key order, coefficient before bracket.
    pub fn render(&self) -> String {
        render_terms(self.terms.iter().map(|(f, a)| (a, f.render(self.ctx.vars()))))
    }
}

pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (&'a Coefficient, String)>) -> String {
    render_terms_delimited(terms, "[", "]")
}

pub(crate) fn render_terms_delimited<'a>(
    terms: impl Iterator<Item = (&'a Coefficient, String)>,
    open: &str,
    close: &str,
) -> String {
    let mut out = String::new();
    for (i, (a, body)) in terms.enumerate() {
        let neg = a.is_negative();
        let mag = a.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            if mag.is_integer() {
                out.push_str(&mag.numer().to_string());
            } else {
                out.push_str(&format!("({}/{})", mag.numer(), mag.denom()));
            }
        }
        if !mag.is_one() && open.is_empty() {
            out.push('·');
        }
        out.push_str(open);
        out.push_str(&body);
        out.push_str(close);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A sum in `A[F ∪ {∞}] = A[F♭] ⊕ A[{0, 1, ∞}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedFormalSum {
    pub ordinary: FormalSum,
    pub c0: Coefficient,
    pub c1: Coefficient,
    pub c_inf: Coefficient,
}

impl ExtendedFormalSum {
    pub fn zero(ctx: &Context) -> Self {
        ExtendedFormalSum {
            ordinary: FormalSum::zero(ctx),
            c0: Coefficient::zero(),
            c1: Coefficient::zero(),
            c_inf: Coefficient::zero(),
        }
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<(&Coefficient, String)> = self
            .ordinary
            .terms()
            .map(|(f, a)| (a, f.render(self.ordinary.ctx().vars())))
            .collect();
        for (c, s) in [(&self.c0, "0"), (&self.c1, "1"), (&self.c_inf, "∞")] {
            if !c.is_zero() {
                parts.push((c, s.to_string()));
            }
        }
        render_terms(parts.into_iter())
    }
}

fn check_flat(ctx: &Context, what: &str, f: &RationalFunction) -> Result<(), SumError> {
    if f.is_zero() || f.is_one() {
        return Err(SumError::DegenerateArguments(format!(
            "{what} = {} is not in F♭",
            f.render(ctx.vars())
        )));
    }
    Ok(())
}

/// `[x] − [y] + [y/x] + [(1−x)/(1−y)] − [(1−x⁻¹)/(1−y⁻¹)]`, merged.
pub fn five_term(ctx: &Context, x: &RationalFunction, y: &RationalFunction) -> Result<FormalSum, SumError> {
    check_flat(ctx, "x", x)?;
    check_flat(ctx, "y", y)?;
    if x == y {
        return Err(SumError::DegenerateArguments("x = y".into()));
    }
    let deg = |e| SumError::DegenerateArguments(format!("argument undefined: {e}"));
    let xi = x.inv().map_err(deg)?;
    let yi = y.inv().map_err(deg)?;
    let third = (y / x).map_err(deg)?;
    let fourth = (&x.one_minus() / &y.one_minus()).map_err(deg)?;
    let fifth = (&xi.one_minus() / &yi.one_minus()).map_err(deg)?;
    for (name, f) in [("y/x", &third), ("(1-x)/(1-y)", &fourth), ("(1-1/x)/(1-1/y)", &fifth)] {
        check_flat(ctx, name, f)?;
    }
    FormalSum::from_terms(
        ctx,
        [
            (coeff(1), x.clone()),
            (coeff(-1), y.clone()),
            (coeff(1), third),
            (coeff(1), fourth),
            (coeff(-1), fifth),
        ],
    )
}

/// `[x] + [x⁻¹]`.
pub fn inversion(ctx: &Context, x: &RationalFunction) -> Result<FormalSum, SumError> {
    check_flat(ctx, "x", x)?;
    let xi = x.inv().map_err(|e| SumError::DegenerateArguments(e.to_string()))?;
    FormalSum::from_terms(ctx, [(coeff(1), x.clone()), (coeff(1), xi)])
}

/// `C_c = [c] + [1 − c]`.
pub fn c_element(ctx: &Context, c: &RationalFunction) -> Result<FormalSum, SumError> {
    check_flat(ctx, "c", c)?;
    FormalSum::from_terms(ctx, [(coeff(1), c.clone()), (coeff(1), c.one_minus())])
}

/// Conjugates every key (coefficients of the functions, and variables by
/// `swap`); the coefficients of the sum are left alone.
pub fn conj_sum(alpha: &FormalSum, swap: Option<&[usize]>) -> FormalSum {
    alpha
        .map_keys(|f| f.conjugate(swap))
        .expect("conjugation preserves F♭")
}
