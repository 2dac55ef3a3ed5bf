//! Prime factorization of nonzero constants of ℚ and ℚ(i).
//!
//! A constant is written as `ε^τ · Π πⱼ^eⱼ` with `ε` the torsion generator
//! (−1 or i) and `πⱼ` rational primes or normalized Gaussian primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{FieldMode, Scalar};
use crate::error::WedgeError;

/// Trial division runs over all candidates up to this bound.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// `ε^tau · Π prime^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantFactorization {
    /// Exponent of the torsion generator, reduced mod its order.
    pub tau: u32,
    /// Normalized primes (rational primes, or Gaussian primes with
    /// `re > 0, im ≥ 0`) with nonzero exponents.
    pub primes: Vec<(Scalar, i64)>,
}

/// Factors a positive integer by trial division up to `bound`. A cofactor
/// left over is accepted as prime only when it is below `bound²`.
pub fn factor_integer(n: &BigInt, bound: u64) -> Result<Vec<(BigInt, u32)>, WedgeError> {
    assert!(n.is_positive());
    if let Some(small) = n.to_u64() {
        return factor_u64(small, bound)
            .map(|v| v.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect())
            .ok_or_else(|| WedgeError::OversizedConstant(n.to_string()));
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= bound {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
            if let Some(r) = rest.to_u64() {
                let tail = factor_u64(r, bound).ok_or_else(|| WedgeError::OversizedConstant(n.to_string()))?;
                out.extend(tail.into_iter().map(|(p, e)| (BigInt::from(p), e)));
                return Ok(out);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let b = BigInt::from(bound);
        if rest >= &b * &b {
            return Err(WedgeError::OversizedConstant(n.to_string()));
        }
        out.push((rest, 1));
    }
    Ok(out)
}

fn factor_u64(mut n: u64, bound: u64) -> Option<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= bound && d.saturating_mul(d) <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if (n as u128) >= (bound as u128) * (bound as u128) && d.saturating_mul(d) <= n {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// Factors a nonzero constant of the given field.
pub fn factor_constant(field: FieldMode, c: &Scalar, bound: u64) -> Result<ConstantFactorization, WedgeError> {
    assert!(!c.is_zero(), "factoring zero");
    match field {
        FieldMode::Rational => {
            assert!(c.is_real(), "Gaussian constant in rational mode");
            let r = c.re();
            let tau = u32::from(r.is_negative());
            let mut primes: Vec<(Scalar, i64)> = Vec::new();
            for (p, e) in factor_integer(&r.numer().abs(), bound)? {
                primes.push((Scalar::from_rational(p.into()), e as i64));
            }
            for (p, e) in factor_integer(r.denom(), bound)? {
                primes.push((Scalar::from_rational(p.into()), -(e as i64)));
            }
            primes.sort_by(|a, b| prime_order(&a.0, &b.0));
            Ok(ConstantFactorization { tau, primes })
        }
        FieldMode::Gaussian => {
            let l = c.re().denom().lcm(c.im().denom());
            let a = c.re().numer() * (&l / c.re().denom());
            let b = c.im().numer() * (&l / c.im().denom());
            let (tn, mut num) = factor_gaussian_integer(&GaussInt(a, b), bound)?;
            let (td, den) = factor_gaussian_integer(&GaussInt(l, BigInt::zero()), bound)?;
            for (p, e) in den {
                match num.iter_mut().find(|(q, _)| *q == p) {
                    Some(entry) => entry.1 -= e,
                    None => num.push((p, -e)),
                }
            }
            num.retain(|(_, e)| *e != 0);
            let mut primes: Vec<(Scalar, i64)> = num.into_iter().map(|(p, e)| (p.to_scalar(), e)).collect();
            primes.sort_by(|a, b| prime_order(&a.0, &b.0));
            Ok(ConstantFactorization { tau: (tn + 4 - td) % 4, primes })
        }
    }
}

/// Order on normalized primes: norm, then real part, then imaginary part.
pub fn prime_order(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    a.norm().cmp(&b.norm()).then_with(|| a.re().cmp(b.re())).then_with(|| a.im().cmp(b.im()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt(BigInt, BigInt);

impl GaussInt {
    fn norm(&self) -> BigInt {
        &self.0 * &self.0 + &self.1 * &self.1
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::new(self.0.clone().into(), self.1.clone().into())
    }

    fn div_exact(&self, p: &GaussInt) -> Option<GaussInt> {
        // (a + bi)(c − di) / (c² + d²)
        let n = p.norm();
        let re = &self.0 * &p.0 + &self.1 * &p.1;
        let im = &self.1 * &p.0 - &self.0 * &p.1;
        if (&re % &n).is_zero() && (&im % &n).is_zero() {
            Some(GaussInt(re / &n, im / &n))
        } else {
            None
        }
    }

    /// Exponent `k` with `self = i^k` for a unit.
    fn unit_exponent(&self) -> u32 {
        match (self.0.to_i64(), self.1.to_i64()) {
            (Some(1), Some(0)) => 0,
            (Some(0), Some(1)) => 1,
            (Some(-1), Some(0)) => 2,
            (Some(0), Some(-1)) => 3,
            _ => unreachable!("not a Gaussian unit"),
        }
    }
}

/// Normalized Gaussian primes above a rational prime.
fn gaussian_primes_over(q: &BigInt) -> Vec<GaussInt> {
    let two = BigInt::from(2);
    if q == &two {
        return vec![GaussInt(BigInt::one(), BigInt::one())];
    }
    if (q % 4u32) == BigInt::from(3) {
        return vec![GaussInt(q.clone(), BigInt::zero())];
    }
    let mut a = BigInt::one();
    loop {
        let r = q - &a * &a;
        let s = r.sqrt();
        if &s * &s == r {
            return vec![GaussInt(a.clone(), s.clone()), GaussInt(s, a)];
        }
        a += 1;
    }
}

fn factor_gaussian_integer(z: &GaussInt, bound: u64) -> Result<(u32, Vec<(GaussInt, i64)>), WedgeError> {
    let n = z.norm();
    let mut rest = z.clone();
    let mut out = Vec::new();
    for (q, _) in factor_integer(&n, bound)? {
        for pi in gaussian_primes_over(&q) {
            let mut e = 0;
            while let Some(next) = rest.div_exact(&pi) {
                rest = next;
                e += 1;
            }
            if e > 0 {
                out.push((pi, e));
            }
        }
    }
    Ok((rest.unit_exponent(), out))
}
