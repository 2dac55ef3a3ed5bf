//! The group `A ⊗ ∧̃²F*`, the boundary map `∂`, and the β₁/β₂/β₃ split.
//!
//! `F*` is generated by the elements of a coprime basis of monic squarefree
//! polynomials, by constant primes and by the torsion generator `ε` (−1 over
//! ℚ, i over ℚ(i)). Writing `m` for the order of `ε`, the normal form of an
//! element of `∧̃²F*` has three kinds of components:
//!
//! * `x ∧ y` for non-torsion generators `x < y`, with coefficients in `A`;
//! * `x ∧ ε`, an element of order `m` (stored mod `m`, ℤ coefficients only);
//! * `ε ∧ ε` over ℚ, of order 2. Over ℚ(i) it vanishes.
//!
//! The defining relation gives `x ∧ x = x ∧ (−1) = (m/2)·(x ∧ ε)` and
//! `y ∧ x = −x ∧ y`. With ℚ coefficients all torsion disappears.

mod constant;
mod criteria;
mod local;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{basis_order, CoprimeBasis, FieldMode, MultiPoly, RationalFunction, Scalar};
use crate::error::WedgeError;
use crate::formal::{render_terms_delimited, CoeffMode, Coefficient, Context, FormalSum};

pub use constant::{factor_constant, factor_integer, prime_order, ConstantFactorization, DEFAULT_TRIAL_BOUND};
pub use criteria::{
    check_constant, check_constant_cc, check_constant_real, ConstancyCertificate, ConstantEstimate, Verdict,
    Witness,
};
pub use local::{t_v, wedge_specialize, ResidueClass};

/// A generator of `F*` in the fixed order: basis polynomials (total degree,
/// then graded lex), constant primes (norm, then components), torsion last.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Poly(MultiPoly),
    Prime(Scalar),
    Torsion,
}

impl Generator {
    fn rank(&self) -> u8 {
        match self {
            Generator::Poly(_) => 0,
            Generator::Prime(_) => 1,
            Generator::Torsion => 2,
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(self, Generator::Poly(_))
    }

    /// The generator as an element of `F*`.
    pub fn to_function(&self, ctx: &Context) -> RationalFunction {
        match self {
            Generator::Poly(p) => RationalFunction::from_poly(p.clone()),
            Generator::Prime(q) => RationalFunction::constant(ctx.nvars(), q.clone()),
            Generator::Torsion => RationalFunction::constant(ctx.nvars(), ctx.field().torsion_generator()),
        }
    }

    pub fn render(&self, ctx: &Context) -> String {
        match self {
            Generator::Poly(p) => p.render(ctx.vars()),
            Generator::Prime(q) => q.to_string(),
            Generator::Torsion => ctx.field().torsion_generator().to_string(),
        }
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Generator::Poly(a), Generator::Poly(b)) => basis_order(a, b),
            (Generator::Prime(a), Generator::Prime(b)) => prime_order(a, b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Poly(p) => write!(f, "{p:?}"),
            Generator::Prime(q) => write!(f, "{q}"),
            Generator::Torsion => write!(f, "ε"),
        }
    }
}

/// An element of `A ⊗ ∧̃²F*` in normal form.
#[derive(Clone)]
pub struct WedgeElement {
    ctx: Context,
    basis: Vec<MultiPoly>,
    pairs: BTreeMap<(Generator, Generator), Coefficient>,
    torsion: BTreeMap<Generator, u32>,
    eps_eps: u32,
}

/// One summand `a · (f ∧ g)`.
pub type WedgeTerm = (Coefficient, RationalFunction, RationalFunction);

/// Exponents of one element of `F*` over the generators, torsion separate.
struct Exponents {
    gens: Vec<(usize, i64)>,
    tau: u32,
}

impl WedgeElement {
    pub fn zero(ctx: &Context) -> Self {
        WedgeElement {
            ctx: ctx.clone(),
            basis: Vec::new(),
            pairs: BTreeMap::new(),
            torsion: BTreeMap::new(),
            eps_eps: 0,
        }
    }

    /// Normal form of `Σ aⱼ · (fⱼ ∧ gⱼ)`.
    pub fn from_pairs<I>(ctx: &Context, terms: I) -> Result<Self, WedgeError>
    where
        I: IntoIterator<Item = WedgeTerm>,
    {
        let terms: Vec<WedgeTerm> = terms.into_iter().filter(|(a, _, _)| !a.is_zero()).collect();
        let mut polys = Vec::with_capacity(terms.len() * 4);
        for (_, f, g) in &terms {
            if f.is_zero() || g.is_zero() {
                return Err(WedgeError::ZeroFactor);
            }
            for h in [f, g] {
                polys.push(h.num().clone());
                polys.push(h.den().clone());
            }
        }
        let basis = CoprimeBasis::new(&polys);
        let nb = basis.elements().len();
        let field = ctx.field();

        // constant part of every function, then a global prime table
        let mut units = Vec::with_capacity(terms.len() * 2);
        for i in 0..terms.len() * 2 {
            let n = basis.factorization(2 * i);
            let d = basis.factorization(2 * i + 1);
            let c = factor_constant(field, &(&n.unit / &d.unit), DEFAULT_TRIAL_BOUND)?;
            units.push(c);
        }
        let mut primes: Vec<Scalar> = units.iter().flat_map(|u| u.primes.iter().map(|(p, _)| p.clone())).collect();
        primes.sort_by(prime_order);
        primes.dedup();

        let exps: Vec<Exponents> = (0..terms.len() * 2)
            .map(|i| {
                let mut e: BTreeMap<usize, i64> = BTreeMap::new();
                for &(b, k) in &basis.factorization(2 * i).exponents {
                    *e.entry(b).or_default() += k as i64;
                }
                for &(b, k) in &basis.factorization(2 * i + 1).exponents {
                    *e.entry(b).or_default() -= k as i64;
                }
                for (p, k) in &units[i].primes {
                    let j = primes.binary_search_by(|q| prime_order(q, p)).unwrap();
                    *e.entry(nb + j).or_default() += k;
                }
                Exponents { gens: e.into_iter().filter(|&(_, k)| k != 0).collect(), tau: units[i].tau }
            })
            .collect();

        let integral = ctx.coeffs() == CoeffMode::Integer;
        let m = field.torsion_order() as i64;
        let mut pairs: BTreeMap<(usize, usize), Coefficient> = BTreeMap::new();
        let mut torsion: BTreeMap<usize, i64> = BTreeMap::new();
        let mut eps_eps = 0i64;
        for (t, (a, _, _)) in terms.iter().enumerate() {
            let (ef, eg) = (&exps[2 * t], &exps[2 * t + 1]);
            for &(x, ex) in &ef.gens {
                for &(y, ey) in &eg.gens {
                    let c = a * Coefficient::from_integer(BigInt::from(ex * ey));
                    match x.cmp(&y) {
                        Ordering::Less => *pairs.entry((x, y)).or_insert_with(Coefficient::zero) += c,
                        Ordering::Greater => *pairs.entry((y, x)).or_insert_with(Coefficient::zero) -= c,
                        Ordering::Equal => {}
                    }
                }
            }
            if !integral {
                continue;
            }
            if !a.is_integer() {
                return Err(WedgeError::NonIntegralCoefficient);
            }
            let ai = a.numer().mod_floor(&BigInt::from(m)).to_i64().unwrap();
            for &(x, ex) in &ef.gens {
                for &(y, ey) in &eg.gens {
                    if x == y {
                        *torsion.entry(x).or_default() += ai * ex * ey * (m / 2);
                    }
                }
                *torsion.entry(x).or_default() += ai * ex * eg.tau as i64;
            }
            for &(y, ey) in &eg.gens {
                *torsion.entry(y).or_default() -= ai * ef.tau as i64 * ey;
            }
            if field == FieldMode::Rational {
                eps_eps += ai * (ef.tau * eg.tau) as i64;
            }
        }

        let gen = |i: usize| {
            if i < nb {
                Generator::Poly(basis.elements()[i].clone())
            } else {
                Generator::Prime(primes[i - nb].clone())
            }
        };
        Ok(WedgeElement {
            ctx: ctx.clone(),
            basis: basis.elements().to_vec(),
            pairs: pairs
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((x, y), c)| ((gen(x), gen(y)), c))
                .collect(),
            torsion: torsion
                .into_iter()
                .map(|(x, k)| (x, k.rem_euclid(m) as u32))
                .filter(|&(_, k)| k != 0)
                .map(|(x, k)| (gen(x), k))
                .collect(),
            eps_eps: eps_eps.rem_euclid(2) as u32,
        })
    }

    /// Summands reproducing this element.
    pub fn to_pairs(&self) -> Vec<WedgeTerm> {
        let eps = Generator::Torsion.to_function(&self.ctx);
        let mut out: Vec<WedgeTerm> = self
            .pairs
            .iter()
            .map(|((x, y), c)| (c.clone(), x.to_function(&self.ctx), y.to_function(&self.ctx)))
            .collect();
        for (x, k) in &self.torsion {
            out.push((Coefficient::from_integer((*k).into()), x.to_function(&self.ctx), eps.clone()));
        }
        if self.eps_eps != 0 {
            out.push((Coefficient::one(), eps.clone(), eps));
        }
        out
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    /// Basis polynomials the element was computed over.
    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    /// Coefficients of `x ∧ y`, `x < y`, both non-torsion.
    pub fn pairs(&self) -> &BTreeMap<(Generator, Generator), Coefficient> {
        &self.pairs
    }

    /// Multiples of `x ∧ ε`, reduced mod the order of `ε`.
    pub fn torsion(&self) -> &BTreeMap<Generator, u32> {
        &self.torsion
    }

    /// Multiple of `ε ∧ ε` (mod 2; always 0 over ℚ(i)).
    pub fn eps_eps(&self) -> u32 {
        self.eps_eps
    }

    pub fn is_zero(&self) -> bool {
        self.pairs.is_empty() && self.torsion.is_empty() && self.eps_eps == 0
    }

    pub fn neg(&self) -> WedgeElement {
        let m = self.ctx.field().torsion_order();
        WedgeElement {
            ctx: self.ctx.clone(),
            basis: self.basis.clone(),
            pairs: self.pairs.iter().map(|(k, c)| (k.clone(), -c)).collect(),
            torsion: self.torsion.iter().map(|(g, k)| (g.clone(), (m - k) % m)).collect(),
            eps_eps: self.eps_eps,
        }
    }

    pub fn add(&self, other: &WedgeElement) -> Result<WedgeElement, WedgeError> {
        let mut terms = self.to_pairs();
        terms.extend(other.to_pairs());
        WedgeElement::from_pairs(&self.ctx, terms)
    }

    pub fn sub(&self, other: &WedgeElement) -> Result<WedgeElement, WedgeError> {
        self.add(&other.neg())
    }

    /// Equality in `A ⊗ ∧̃²F*`, decided over a common basis.
    pub fn equals(&self, other: &WedgeElement) -> Result<bool, WedgeError> {
        Ok(self.sub(other)?.is_zero())
    }

    fn filtered(&self, keep_pair: impl Fn(&Generator, &Generator) -> bool, keep_torsion: impl Fn(&Generator) -> bool, eps: bool) -> WedgeElement {
        WedgeElement {
            ctx: self.ctx.clone(),
            basis: self.basis.clone(),
            pairs: self.pairs.iter().filter(|((x, y), _)| keep_pair(x, y)).map(|(k, c)| (k.clone(), c.clone())).collect(),
            torsion: self.torsion.iter().filter(|(g, _)| keep_torsion(g)).map(|(g, k)| (g.clone(), *k)).collect(),
            eps_eps: if eps { self.eps_eps } else { 0 },
        }
    }

    /// Splits into β₁ (polynomial ∧ polynomial), β₂ (polynomial ∧ constant)
    /// and β₃ (constant ∧ constant).
    pub fn decompose(&self) -> (WedgeElement, WedgeElement, WedgeElement) {
        let b1 = self.filtered(|x, y| x.is_poly() && y.is_poly(), |_| false, false);
        let b2 = self.filtered(|x, y| x.is_poly() != y.is_poly(), |g| g.is_poly(), false);
        let b3 = self.filtered(|x, y| !x.is_poly() && !y.is_poly(), |g| !g.is_poly(), true);
        (b1, b2, b3)
    }

    /// The pairing `T_{b,b'}`: the β₁ coefficient of `b ∧ b'`.
    pub fn t_pair(&self, b: &MultiPoly, b2: &MultiPoly) -> Result<Coefficient, WedgeError> {
        for p in [b, b2] {
            if !self.basis.contains(p) {
                return Err(WedgeError::UnknownBasisElement(p.render(self.ctx.vars())));
            }
        }
        let (x, y) = (Generator::Poly(b.clone()), Generator::Poly(b2.clone()));
        Ok(match x.cmp(&y) {
            Ordering::Less => self.pairs.get(&(x, y)).cloned().unwrap_or_else(Coefficient::zero),
            Ordering::Greater => -self.pairs.get(&(y, x)).cloned().unwrap_or_else(Coefficient::zero),
            Ordering::Equal => Coefficient::zero(),
        })
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<(Coefficient, String)> = self
            .pairs
            .iter()
            .map(|((x, y), c)| (c.clone(), format!("({}) ∧ ({})", x.render(&self.ctx), y.render(&self.ctx))))
            .collect();
        let eps = Generator::Torsion.render(&self.ctx);
        for (g, k) in &self.torsion {
            parts.push((Coefficient::from_integer((*k).into()), format!("({}) ∧ ({eps})", g.render(&self.ctx))));
        }
        if self.eps_eps != 0 {
            parts.push((Coefficient::one(), format!("({eps}) ∧ ({eps})")));
        }
        render_wedge_terms(&parts)
    }
}

fn render_wedge_terms(parts: &[(Coefficient, String)]) -> String {
    render_terms_delimited(parts.iter().map(|(c, b)| (c, b.clone())), "", "")
}

impl fmt::Display for WedgeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for WedgeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `∂(α) = Σ aⱼ · fⱼ ∧ (1 − fⱼ)`.
pub fn del(alpha: &FormalSum) -> Result<WedgeElement, WedgeError> {
    WedgeElement::from_pairs(
        alpha.ctx(),
        alpha.terms().map(|(f, a)| (a.clone(), f.clone(), f.one_minus())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{coeff, five_term, inversion};

    fn ctx() -> Context {
        Context::rational(&["t"])
    }

    #[test]
    fn boundary_of_t() {
        let c = ctx();
        let t = c.var("t");
        let w = del(&FormalSum::symbol(&c, t.clone()).unwrap()).unwrap();
        let (b1, b2, b3) = w.decompose();
        assert_eq!(b1.render(), "(t) ∧ (t - 1)");
        assert_eq!(b2.render(), "(t) ∧ (-1)");
        assert!(b3.is_zero());
        let tm1 = (&t - &c.int(1)).num().clone();
        assert_eq!(w.t_pair(t.num(), &tm1).unwrap(), coeff(1));
        assert_eq!(w.t_pair(&tm1, t.num()).unwrap(), coeff(-1));
        let other = (&t + &c.int(5)).num().clone();
        assert!(matches!(w.t_pair(t.num(), &other), Err(WedgeError::UnknownBasisElement(_))));
    }

    #[test]
    fn relations_have_zero_boundary() {
        let c = Context::rational(&["t"]);
        let t = c.var("t");
        let two_t = &t * &c.int(2);
        assert!(del(&five_term(&c, &t, &two_t).unwrap()).unwrap().is_zero());
        let f = (&(&t * &t) / &(&t + &c.int(7))).unwrap();
        assert!(del(&inversion(&c, &f).unwrap()).unwrap().is_zero());
        assert!(del(&inversion(&c, &c.int(-1)).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn constant_symbol_is_beta3_only() {
        let c = ctx();
        let w = del(&FormalSum::symbol(&c, c.int(2)).unwrap()).unwrap();
        let (b1, b2, b3) = w.decompose();
        assert!(b1.is_zero() && b2.is_zero());
        // 2 ∧ (−1) = 2 ∧ ε
        assert_eq!(b3.render(), "(2) ∧ (-1)");
        assert!(!b3.is_zero());
    }

    #[test]
    fn antisymmetry_and_diagonal() {
        let c = ctx();
        let t = c.var("t");
        let f = (&(&t * &t) - &c.int(3)).clone();
        let g = (&t / &(&t + &c.int(2))).unwrap();
        let fg = WedgeElement::from_pairs(&c, [(coeff(1), f.clone(), g.clone())]).unwrap();
        let gf = WedgeElement::from_pairs(&c, [(coeff(1), g.clone(), f.clone())]).unwrap();
        assert!(fg.add(&gf).unwrap().is_zero());
        let ff = WedgeElement::from_pairs(&c, [(coeff(1), f.clone(), f.clone())]).unwrap();
        let fm = WedgeElement::from_pairs(&c, [(coeff(1), f, c.int(-1))]).unwrap();
        assert!(ff.equals(&fm).unwrap());
    }

    #[test]
    fn torsion_vanishes_with_rational_coefficients() {
        let c = ctx().with_coeffs(CoeffMode::Rational);
        let t = c.var("t");
        let w = WedgeElement::from_pairs(&c, [(coeff(1), t.clone(), c.int(-1))]).unwrap();
        assert!(w.is_zero());
        let half = Coefficient::new(1.into(), 2.into());
        let w = WedgeElement::from_pairs(&c, [(half, t, c.int(3))]).unwrap();
        assert_eq!(w.render(), "(1/2)·(t) ∧ (3)");
    }

    #[test]
    fn gaussian_torsion_has_order_four() {
        let c = Context::new(&["t"], FieldMode::Gaussian, CoeffMode::Integer);
        let t = c.var("t");
        let i = RationalFunction::constant(1, Scalar::i());
        let w = WedgeElement::from_pairs(&c, [(coeff(2), t.clone(), i.clone())]).unwrap();
        assert_eq!(w.torsion().values().copied().collect::<Vec<_>>(), vec![2]);
        let w4 = WedgeElement::from_pairs(&c, [(coeff(4), t.clone(), i.clone())]).unwrap();
        assert!(w4.is_zero());
        // t ∧ t = t ∧ (−1) = 2·(t ∧ i)
        let tt = WedgeElement::from_pairs(&c, [(coeff(1), t.clone(), t)]).unwrap();
        assert!(tt.equals(&w).unwrap());
        let ii = WedgeElement::from_pairs(&c, [(coeff(1), i.clone(), i)]).unwrap();
        assert!(ii.is_zero());
    }

    #[test]
    fn minus_one_wedge_minus_one_is_nonzero_over_q() {
        let c = ctx();
        let m = c.int(-1);
        let w = WedgeElement::from_pairs(&c, [(coeff(1), m.clone(), m.clone())]).unwrap();
        assert_eq!(w.eps_eps(), 1);
        let w2 = WedgeElement::from_pairs(&c, [(coeff(2), m.clone(), m)]).unwrap();
        assert!(w2.is_zero());
    }
}
