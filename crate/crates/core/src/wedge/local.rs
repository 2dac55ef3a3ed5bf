//! Maps attached to a place of `F(t)`: the specialization `sp′_b` on the
//! wedge side and the tame symbol `T_b`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Generator, WedgeElement};
use crate::algebra::{MultiPoly, RationalFunction, Scalar, Substituted};
use crate::error::WedgeError;
use crate::formal::{CoeffMode, Coefficient};

/// Image of a generator under `f ↦ π_b^{−ord_b f} · f|_{t=b}` with
/// `π_b = t − b`, or `π_∞ = 1/t`.
fn leading_value(p: &MultiPoly, var: usize, b: &Substituted) -> RationalFunction {
    if !p.involves(var) {
        return RationalFunction::from_poly(p.clone());
    }
    match b {
        Substituted::Infinity => RationalFunction::from_poly(p.coeff_in(var, p.degree_in(var))),
        Substituted::Finite(_) => {
            // Taylor coefficient p^{(k)}(b)/k! for the first k where it is nonzero
            let mut q = p.clone();
            let mut fact = Scalar::one();
            let mut k = 0i64;
            loop {
                if let Substituted::Finite(v) = RationalFunction::from_poly(q.clone()).substitute(var, b) {
                    if !v.is_zero() {
                        let inv = RationalFunction::constant(p.nvars(), fact.inv().unwrap());
                        return &v * &inv;
                    }
                }
                k += 1;
                fact = &fact * &Scalar::from_int(k);
                q = q.derivative(var);
            }
        }
    }
}

/// `sp′_b`: specializes variable `var` to `b` on the wedge side.
pub fn wedge_specialize(w: &WedgeElement, var: usize, b: &Substituted) -> Result<WedgeElement, WedgeError> {
    let ctx = w.ctx();
    let image = |g: &RationalFunction| -> RationalFunction {
        // generators are polynomials or constants
        debug_assert!(g.den().is_one());
        leading_value(g.num(), var, b)
    };
    let terms: Vec<_> = w.to_pairs().into_iter().map(|(a, f, g)| (a, image(&f), image(&g))).collect();
    WedgeElement::from_pairs(ctx, terms)
}

/// A class in `k[t]/(modulus)`, stored as its reduced representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub modulus: MultiPoly,
    pub value: MultiPoly,
}

impl ResidueClass {
    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}

type Dense = Vec<Scalar>;

fn to_dense(p: &MultiPoly) -> Dense {
    let mut out = vec![Scalar::zero(); p.degree_in(0) as usize + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[0] as usize] = c.clone();
    }
    trim(out)
}

fn from_dense(d: &Dense) -> MultiPoly {
    MultiPoly::from_terms(1, d.iter().enumerate().map(|(i, c)| (c.clone(), vec![i as u32])))
}

fn trim(mut d: Dense) -> Dense {
    while d.len() > 1 && d.last().unwrap().is_zero() {
        d.pop();
    }
    if d.is_empty() {
        d.push(Scalar::zero());
    }
    d
}

fn is_zero(d: &Dense) -> bool {
    d.iter().all(Zero::is_zero)
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(out)
}

fn sub(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![Scalar::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn divmod(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lc = b[db].inv().expect("division by zero polynomial");
    if r.len() <= db {
        return (vec![Scalar::zero()], r);
    }
    let mut q = vec![Scalar::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &lc;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &(&c * y);
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
fn inverse_mod(a: &Dense, m: &Dense) -> Option<Dense> {
    let (mut r0, mut r1) = (m.clone(), divmod(a, m).1);
    let (mut s0, mut s1) = (vec![Scalar::zero()], vec![Scalar::one()]);
    while !is_zero(&r1) {
        let (q, r) = divmod(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].inv()?;
    Some(divmod(&mul(&s0, &vec![c]), m).1)
}

fn pow_mod(a: &Dense, e: &BigInt, m: &Dense) -> Dense {
    let base = if e.is_negative() { inverse_mod(a, m).expect("generator is a unit mod b") } else { divmod(a, m).1 };
    let mut k = e.abs().to_u64().expect("exponent fits in u64");
    let mut acc = vec![Scalar::one()];
    let mut b = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = divmod(&mul(&acc, &b), m).1;
        }
        b = divmod(&mul(&b, &b), m).1;
        k >>= 1;
    }
    acc
}

fn integral(c: &Coefficient) -> Result<BigInt, WedgeError> {
    if c.is_integer() {
        Ok(c.numer().clone())
    } else {
        Err(WedgeError::NonIntegralCoefficient)
    }
}

/// The tame symbol `T_b(f ∧ g) = (−1)^{v(f)v(g)} f^{v(g)} g^{−v(f)} mod b`
/// for a basis polynomial `b` of a univariate wedge, multiplied over all
/// summands of the normal form.
pub fn t_v(w: &WedgeElement, b: &MultiPoly) -> Result<ResidueClass, WedgeError> {
    let ctx = w.ctx();
    if ctx.nvars() != 1 {
        return Err(WedgeError::NotUnivariate);
    }
    if ctx.coeffs() != CoeffMode::Integer {
        return Err(WedgeError::NonIntegralCoefficient);
    }
    if !w.basis().contains(b) {
        return Err(WedgeError::UnknownBasisElement(b.render(ctx.vars())));
    }
    let m = to_dense(b);
    let target = Generator::Poly(b.clone());
    let dense_of = |g: &Generator| to_dense(g.to_function(ctx).num());
    let mut acc = vec![Scalar::one()];
    for ((x, y), a) in w.pairs() {
        let a = integral(a)?;
        if *x == target {
            acc = divmod(&mul(&acc, &pow_mod(&dense_of(y), &-a, &m)), &m).1;
        } else if *y == target {
            acc = divmod(&mul(&acc, &pow_mod(&dense_of(x), &a, &m)), &m).1;
        }
    }
    if let Some(k) = w.torsion().get(&target) {
        let eps = vec![ctx.field().torsion_generator()];
        acc = divmod(&mul(&acc, &pow_mod(&eps, &-BigInt::from(*k), &m)), &m).1;
    }
    Ok(ResidueClass { modulus: b.clone(), value: from_dense(&acc) })
}
