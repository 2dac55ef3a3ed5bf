//! Rational functions in lowest terms.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{gcd, MultiPoly};
use super::scalar::Scalar;
use crate::error::AlgebraError;

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Two rational
/// functions are equal iff their normal forms are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

/// Result of substituting a value for one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substituted {
    Finite(RationalFunction),
    Infinity,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MultiPoly, den: MultiPoly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RationalFunction { num, den: MultiPoly::one(n) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inv().unwrap();
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: MultiPoly::one(n) }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, k: i64) -> Self {
        Self::constant(nvars, Scalar::from_int(k))
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::from_poly(MultiPoly::var(nvars, v))
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn involves(&self, v: usize) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// `1 − self`.
    pub fn one_minus(&self) -> Self {
        RationalFunction::normalize(&self.den - &self.num, self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        // powers of coprime polynomials stay coprime
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Substitutes `var := value`. A denominator that vanishes identically
    /// yields [`Substituted::Infinity`].
    pub fn substitute(&self, var: usize, value: &Substituted) -> Substituted {
        match value {
            Substituted::Infinity => self.substitute_infinity(var),
            Substituted::Finite(b) => {
                if !self.involves(var) {
                    return Substituted::Finite(self.clone());
                }
                let dn = self.num.degree_in(var);
                let dd = self.den.degree_in(var);
                let mut num = self.num.homogenized_substitute(var, &b.num, &b.den);
                let mut den = self.den.homogenized_substitute(var, &b.num, &b.den);
                // num/den = (N / bden^dn) / (D / bden^dd)
                if dd > dn {
                    num = &num * &b.den.pow(dd - dn);
                } else if dn > dd {
                    den = &den * &b.den.pow(dn - dd);
                }
                if den.is_zero() {
                    debug_assert!(!num.is_zero(), "lowest terms cannot vanish on both sides");
                    return Substituted::Infinity;
                }
                Substituted::Finite(RationalFunction::normalize(num, den))
            }
        }
    }

    fn substitute_infinity(&self, var: usize) -> Substituted {
        if !self.involves(var) {
            return Substituted::Finite(self.clone());
        }
        let dn = self.num.degree_in(var);
        let dd = self.den.degree_in(var);
        if dn > dd {
            Substituted::Infinity
        } else if dn < dd {
            Substituted::Finite(RationalFunction::zero(self.nvars()))
        } else {
            let ln = self.num.coeff_in(var, dn);
            let ld = self.den.coeff_in(var, dd);
            Substituted::Finite(RationalFunction::normalize(ln, ld))
        }
    }

    /// Exact value at a full point, `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(point) / &d)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval_complex(point) / self.den.eval_complex(point)
    }

    /// Conjugates coefficients and renames variables (`perm[i]` is the new
    /// index of variable `i`).
    pub fn conjugate(&self, perm: Option<&[usize]>) -> Self {
        let (mut num, mut den) = (self.num.conj(), self.den.conj());
        if let Some(p) = perm {
            num = num.permute_vars(p);
            den = den.permute_vars(p);
        }
        RationalFunction::normalize(num, den)
    }

    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        RationalFunction::normalize(self.num.permute_vars(perm), self.den.permute_vars(perm))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.render(names);
        }
        let n = self.num.render(names);
        let n = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d = self.den.render(names);
        let d = if self.den.num_terms() > 1 || d.contains('*') {
            format!("({d})")
        } else {
            d
        };
        format!("{n}/{d}")
    }
}

impl std::fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = Result<RationalFunction, AlgebraError>;
    fn div(self, rhs: &RationalFunction) -> Result<RationalFunction, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(RationalFunction::normalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RationalFunction {
        RationalFunction::var(1, 0)
    }

    fn k(n: i64) -> RationalFunction {
        RationalFunction::from_int(1, n)
    }

    #[test]
    fn cancels_common_factor() {
        let num = &(&t() * &t()) - &k(1);
        let den = &t() - &k(1);
        let f = RationalFunction::new(num.num().clone(), den.num().clone()).unwrap();
        assert_eq!(f, &t() + &k(1));
        assert!(f.den().is_one());
    }

    #[test]
    fn constant_denominator_moves_into_numerator() {
        let f = RationalFunction::new(
            MultiPoly::var(1, 0).scale(&Scalar::from_int(2)),
            MultiPoly::constant(1, Scalar::from_int(4)),
        )
        .unwrap();
        assert!(f.den().is_one());
        assert_eq!(f.num(), &MultiPoly::var(1, 0).scale(&Scalar::from_ratio(1, 2)));
        // cross-multiplication oracle: num*4 == 2t*den'
        assert_eq!(
            f.num().scale(&Scalar::from_int(4)),
            &MultiPoly::var(1, 0).scale(&Scalar::from_int(2)) * f.den()
        );
    }

    #[test]
    fn normalization_is_idempotent() {
        let f = (&(&t() * &t()) - &k(2)).inv().unwrap();
        let g = RationalFunction::new(f.num().clone(), f.den().clone()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(MultiPoly::one(1), MultiPoly::zero(1)),
            Err(AlgebraError::ZeroDenominator)
        );
    }

    #[test]
    fn substitute_finite_and_infinite() {
        let f = &t() * &t();
        assert_eq!(f.substitute(0, &Substituted::Finite(k(1))), Substituted::Finite(k(1)));
        let g = &(&t() * &t()) - &(&k(2) * &t());
        assert_eq!(g.substitute(0, &Substituted::Infinity), Substituted::Infinity);
        let h = (&t() + &k(1)).inv().unwrap();
        assert_eq!(h.substitute(0, &Substituted::Finite(k(-1))), Substituted::Infinity);
        assert_eq!(h.substitute(0, &Substituted::Infinity), Substituted::Finite(k(0)));
        let r = (&(&k(3) * &t()) / &(&t() + &k(5))).unwrap();
        assert_eq!(r.substitute(0, &Substituted::Infinity), Substituted::Finite(k(3)));
    }

    #[test]
    fn substitute_ratio_of_linear_forms() {
        // (t1 + c t2)/(t1 + t2) at t1 = 0 gives c
        let t1 = RationalFunction::var(2, 0);
        let t2 = RationalFunction::var(2, 1);
        let c = RationalFunction::from_int(2, 7);
        let f = (&(&t1 + &(&c * &t2)) / &(&t1 + &t2)).unwrap();
        let z = RationalFunction::zero(2);
        assert_eq!(f.substitute(0, &Substituted::Finite(z)), Substituted::Finite(c));
    }

    #[test]
    fn conjugation_with_swap() {
        let z = RationalFunction::var(2, 0);
        let zb = RationalFunction::var(2, 1);
        let one_plus_i = RationalFunction::constant(2, &Scalar::one() + &Scalar::i());
        let f = &one_plus_i * &z;
        let g = f.conjugate(Some(&[1, 0]));
        let one_minus_i = RationalFunction::constant(2, &Scalar::one() - &Scalar::i());
        assert_eq!(g, &one_minus_i * &zb);
        assert_eq!(g.conjugate(Some(&[1, 0])), f);
    }
}
