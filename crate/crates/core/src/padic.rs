//! Fixed-precision arithmetic in ℚ_p, the p-adic logarithm for a chosen
//! branch, `Li_{p,2}` and `D_p` on the open unit disc, and the
//! branch-difference map on wedge elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::Scalar;
use crate::error::PadicError;
use crate::formal::FormalSum;
use crate::wedge::{check_constant, ConstancyCertificate, WedgeElement};

/// Default number of p-adic digits.
pub const DEFAULT_PRECISION: u32 = 32;
/// Default prime.
pub const DEFAULT_PRIME: u64 = 5;

/// Absolute precision standing in for "exact".
const EXACT: i64 = 1 << 40;

/// `p^val · unit + O(p^{val + prec})`, or `O(p^val)` when `unit = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: i64,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow(p: u64, k: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), k.max(0) as usize)
}

/// Valuation of a nonzero integer and its cofactor.
fn split(n: &BigInt, p: u64) -> (i64, BigInt) {
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &bp).is_zero() {
        n /= &bp;
        v += 1;
    }
    (v, n)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

impl PadicNumber {
    /// The zero `O(p^abs)`.
    pub fn zero(p: u64, abs: i64) -> Self {
        PadicNumber { p, val: abs, unit: BigInt::zero(), prec: 0 }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT)
    }

    /// `p^val · unit` known to `prec` digits; normalizes `unit`.
    fn build(p: u64, val: i64, unit: BigInt, prec: i64) -> Self {
        if prec <= 0 {
            return Self::zero(p, val + prec.max(0));
        }
        let m = pow(p, prec);
        let u = unit.mod_floor(&m);
        if u.is_zero() {
            return Self::zero(p, val + prec);
        }
        let (k, rest) = split(&u, p);
        if k == 0 {
            PadicNumber { p, val, unit: u, prec }
        } else {
            PadicNumber { p, val: val + k, unit: rest, prec: prec - k }.reduce()
        }
    }

    fn reduce(mut self) -> Self {
        self.unit = self.unit.mod_floor(&pow(self.p, self.prec));
        self
    }

    /// A rational number with `prec` digits of relative precision.
    pub fn from_rational(q: &BigRational, p: u64, prec: u32) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let (vn, un) = split(q.numer(), p);
        let (vd, ud) = split(q.denom(), p);
        let m = pow(p, prec as i64);
        let unit = un.mod_floor(&m) * mod_inverse(&ud.mod_floor(&m), &m);
        Self::build(p, vn - vd, unit, prec as i64)
    }

    pub fn from_integer(n: i64, p: u64, prec: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()), p, prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation; for a zero this is its absolute precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec
    }

    /// Known up to `O(p^absolute_precision)`.
    pub fn absolute_precision(&self) -> i64 {
        self.val + self.prec
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::build(self.p, self.val, -&self.unit, self.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "mixing primes");
        let abs = self.absolute_precision().min(o.absolute_precision());
        if self.is_zero() {
            return o.with_absolute_cap(abs);
        }
        if o.is_zero() {
            return self.with_absolute_cap(abs);
        }
        let v = self.val.min(o.val);
        if abs <= v {
            return Self::zero(self.p, abs);
        }
        let s = &self.unit * pow(self.p, self.val - v) + &o.unit * pow(self.p, o.val - v);
        Self::build(self.p, v, s, abs - v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn with_absolute_cap(&self, abs: i64) -> Self {
        if self.is_zero() {
            return Self::zero(self.p, self.val.min(abs));
        }
        Self::build(self.p, self.val, self.unit.clone(), self.prec.min(abs - self.val))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p, "mixing primes");
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Self::zero(self.p, sat_add(self.val, o.val)),
            (true, false) => Self::zero(self.p, sat_add(self.val, o.val)),
            (false, true) => Self::zero(self.p, sat_add(self.val, o.val)),
            (false, false) => Self::build(self.p, self.val + o.val, &self.unit * &o.unit, self.prec.min(o.prec)),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self, PadicError> {
        if o.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val.saturating_sub(o.val).min(EXACT)));
        }
        let prec = self.prec.min(o.prec);
        let m = pow(self.p, prec);
        let inv = mod_inverse(&o.unit.mod_floor(&m), &m);
        Ok(Self::build(self.p, self.val - o.val, &self.unit * inv, prec))
    }

    /// Multiplication by an exact integer.
    pub fn scale(&self, k: i64) -> Self {
        self.scale_rational(&BigRational::from_integer(k.into()))
    }

    /// Multiplication by an exact rational.
    pub fn scale_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::exact_zero(self.p);
        }
        let (vn, un) = split(q.numer(), self.p);
        let (vd, ud) = split(q.denom(), self.p);
        if self.is_zero() {
            return Self::zero(self.p, sat_add(self.val, vn - vd));
        }
        let m = pow(self.p, self.prec);
        let unit = &self.unit * un * mod_inverse(&ud.mod_floor(&m), &m);
        Self::build(self.p, self.val + vn - vd, unit, self.prec)
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        self.scale_rational(&BigRational::new(1.into(), k.into()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::from_integer(1, self.p, self.prec.max(1) as u32);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Whether `self − other` vanishes to absolute precision `digits`.
    pub fn agrees_to(&self, other: &Self, digits: i64) -> bool {
        // for a zero difference `val` is its absolute precision
        self.sub(other).val >= digits
    }

    /// Exact equality of the known digits, including the precision.
    pub fn same_digits(&self, other: &Self) -> bool {
        self == other
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    (a + b).min(EXACT)
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        if self.is_zero() {
            return if self.val >= EXACT { write!(f, "0") } else { write!(f, "O({p}^{})", self.val) };
        }
        if self.val == 0 {
            write!(f, "{} + O({p}^{})", self.unit, self.absolute_precision())
        } else {
            write!(f, "{p}^{} * {} + O({p}^{})", self.val, self.unit, self.absolute_precision())
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A branch of the p-adic logarithm, fixed by the value of `log_p(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub p: u64,
    pub log_of_p: PadicNumber,
}

impl Branch {
    /// The Iwasawa branch, `log_p(p) = 0`.
    pub fn iwasawa(p: u64) -> Self {
        Branch { p, log_of_p: PadicNumber::exact_zero(p) }
    }

    pub fn new(log_of_p: PadicNumber) -> Self {
        Branch { p: log_of_p.prime(), log_of_p }
    }
}

/// `log(1 + y)` for `v(y) ≥ 1` (`≥ 2` if p = 2), by the power series.
fn log_principal(y: &PadicNumber) -> PadicNumber {
    if y.is_zero() {
        return PadicNumber::zero(y.p, y.val);
    }
    let p = y.p;
    let w = y.val;
    let target = y.absolute_precision();
    let mut sum = PadicNumber::exact_zero(p);
    let mut power = y.clone();
    let mut n: i64 = 1;
    loop {
        // the terms y^m/m for m ≥ n have valuation ≥ m·w − log_p m, which
        // increases with m
        if n as f64 * w as f64 - log_p(n, p) >= target as f64 {
            break;
        }
        let term = power.div_int(n);
        sum = if n % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(y);
        n += 1;
    }
    sum.with_absolute_cap(target)
}

fn log_p(n: i64, p: u64) -> f64 {
    (n as f64).ln() / (p as f64).ln()
}

/// `log_p(x)` on the branch: `v(x)·log_p(p) + log(u)` with `u` the unit part;
/// the root-of-unity component of `u` contributes nothing.
pub fn plog(x: &PadicNumber, branch: &Branch) -> Result<PadicNumber, PadicError> {
    if x.is_zero() {
        return Err(PadicError::ZeroArgument);
    }
    let p = x.p;
    let prec = x.prec as u32;
    let u = PadicNumber { p, val: 0, unit: x.unit.clone(), prec: x.prec };
    let one = PadicNumber::from_integer(1, p, prec);
    let (principal, k) = if p == 2 {
        if (&x.unit % 4u32).is_one() {
            (u, 1)
        } else {
            (u.mul(&u), 2)
        }
    } else if (&x.unit % p).is_one() {
        (u, 1)
    } else {
        (u.pow(p - 1), p as i64 - 1)
    };
    let log_u = log_principal(&principal.sub(&one)).div_int(k);
    Ok(branch.log_of_p.scale(x.val).add(&log_u))
}

/// `Li_{p,2}(z) = Σ zⁿ/n²` for `v(z) ≥ 1`.
pub fn li2p(z: &PadicNumber) -> Result<PadicNumber, PadicError> {
    if z.is_zero() {
        return Ok(z.clone());
    }
    if z.val < 1 {
        return Err(PadicError::OutOfDisc(z.val));
    }
    let p = z.p;
    let w = z.val;
    let target = z.absolute_precision();
    let mut sum = PadicNumber::exact_zero(p);
    let mut power = z.clone();
    let mut n: i64 = 1;
    loop {
        // zᵐ/m² has valuation ≥ m·w − 2 log_p m, increasing once m ≥ 3
        if n >= 3 && n as f64 * w as f64 - 2.0 * log_p(n, p) >= target as f64 {
            break;
        }
        let term = power.div_int(n * n);
        sum = sum.add(&term);
        power = power.mul(z);
        n += 1;
    }
    Ok(sum)
}

/// `D_p(z) = Li_{p,2}(z) + ½ log_p(z) log_p(1 − z)` for `v(z) ≥ 1`.
pub fn dp_disc(z: &PadicNumber, branch: &Branch) -> Result<PadicNumber, PadicError> {
    if z.is_zero() {
        return Ok(z.clone());
    }
    if z.val < 1 {
        return Err(PadicError::OutOfDisc(z.val));
    }
    let one = PadicNumber::from_integer(1, z.p, z.absolute_precision() as u32);
    let a = li2p(z)?;
    let b = plog(z, branch)?.mul(&plog(&one.sub(z), branch)?);
    Ok(a.add(&b.div_int(2)))
}

/// `v_p(f)·log_p(g) − v_p(g)·log_p(f)`, independent of the branch.
pub fn bracket(f: &PadicNumber, g: &PadicNumber, branch: &Branch) -> Result<PadicNumber, PadicError> {
    Ok(plog(g, branch)?.scale(f.val).sub(&plog(f, branch)?.scale(g.val)))
}

fn scalar_to_padic(s: &Scalar, p: u64, prec: u32, what: &str) -> Result<PadicNumber, PadicError> {
    if !s.is_real() {
        return Err(PadicError::NonRationalValue(what.to_string()));
    }
    Ok(PadicNumber::from_rational(s.re(), p, prec))
}

/// `Σ a · Δ/2 · (v_p(f(P)) log_p(g(P)) − v_p(g(P)) log_p(f(P)))` over the
/// summands of `w`, with `Δ = log_a(p) − log_b(p)`. The bracket is computed
/// with branch `a`.
pub fn branch_diff(
    w: &WedgeElement,
    point: &[Scalar],
    a: &Branch,
    b: &Branch,
    prec: u32,
) -> Result<PadicNumber, PadicError> {
    let p = a.p;
    let delta = a.log_of_p.sub(&b.log_of_p);
    let mut total = PadicNumber::exact_zero(p);
    let ctx = w.ctx();
    for (c, f, g) in w.to_pairs() {
        let mut vals = Vec::with_capacity(2);
        for h in [&f, &g] {
            let name = h.render(ctx.vars());
            let v = h.eval(point).ok_or_else(|| PadicError::GeneratorVanishesAtPoint(name.clone()))?;
            if v.is_zero() {
                return Err(PadicError::GeneratorVanishesAtPoint(name));
            }
            vals.push(scalar_to_padic(&v, p, prec, &name)?);
        }
        total = total.add(&bracket(&vals[0], &vals[1], a)?.scale_rational(&c));
    }
    Ok(delta.mul(&total).div_int(2))
}

/// The symbolic criterion with the branch metadata attached: if `D_p(α)` is
/// constant for one branch it is constant for every branch.
pub fn check_constant_padic(alpha: &FormalSum, p: u64) -> Result<ConstancyCertificate, PadicError> {
    if !is_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    let mut cert = check_constant(alpha)?;
    cert.notes.push(format!(
        "p = {p}: the verdict holds for every branch of log_p; the constant changes with the branch by the branch_diff formula"
    ));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn construction_and_valuation() {
        let x = PadicNumber::from_rational(&q(50, 3), 5, 10);
        assert_eq!(x.valuation(), 2);
        assert_eq!(x.absolute_precision(), 12);
        let y = PadicNumber::from_rational(&q(3, 50), 5, 10);
        let one = x.mul(&y);
        assert!(one.agrees_to(&PadicNumber::from_integer(1, 5, 10), 10));
    }

    #[test]
    fn addition_tracks_cancellation() {
        let a = PadicNumber::from_integer(1, 5, 8);
        let b = PadicNumber::from_integer(26, 5, 8);
        let d = b.sub(&a);
        assert_eq!(d.valuation(), 2);
        assert_eq!(d.absolute_precision(), 8);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn log_of_p_is_the_branch_value() {
        let delta = PadicNumber::from_integer(7, 5, 32);
        let br = Branch::new(delta.clone());
        let l = plog(&PadicNumber::from_integer(5, 5, 32), &br).unwrap();
        assert!(l.agrees_to(&delta, 31));
    }

    #[test]
    fn log_series_oracle() {
        // log(1 + p) against the rational partial sum of the series
        let p = 5u64;
        let n = 20;
        let x = PadicNumber::from_integer(6, p, n);
        let l = plog(&x, &Branch::iwasawa(p)).unwrap();
        let mut s = BigRational::zero();
        for k in 1..40i64 {
            let term = BigRational::new(num_traits::pow(BigInt::from(5), k as usize), k.into());
            s += if k % 2 == 1 { term } else { -term };
        }
        assert!(l.agrees_to(&PadicNumber::from_rational(&s, p, 40), n as i64));
    }

    #[test]
    fn roots_of_unity_have_zero_log() {
        // 2 is not a root of unity in ℚ_5 but its Teichmüller part is; 2^4 − 1 has valuation 1
        let p = 5;
        let zeta = PadicNumber::from_integer(-1, p, 32);
        assert!(plog(&zeta, &Branch::iwasawa(p)).unwrap().is_zero());
        let two = PadicNumber::from_integer(2, p, 32);
        let l2 = plog(&two, &Branch::iwasawa(p)).unwrap();
        let l16 = plog(&PadicNumber::from_integer(16, p, 32), &Branch::iwasawa(p)).unwrap();
        assert!(l16.agrees_to(&l2.scale(4), 31));
    }

    #[test]
    fn log_is_a_homomorphism() {
        let p = 5;
        let br = Branch::new(PadicNumber::from_rational(&q(3, 7), p, 32));
        let x = PadicNumber::from_rational(&q(35, 11), p, 32);
        let y = PadicNumber::from_rational(&q(-2, 75), p, 32);
        let lhs = plog(&x.mul(&y), &br).unwrap();
        let rhs = plog(&x, &br).unwrap().add(&plog(&y, &br).unwrap());
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn two_adic_logarithm() {
        let p = 2;
        let br = Branch::iwasawa(p);
        let x = PadicNumber::from_integer(3, p, 40);
        let y = PadicNumber::from_integer(7, p, 40);
        let lhs = plog(&x.mul(&y), &br).unwrap();
        let rhs = plog(&x, &br).unwrap().add(&plog(&y, &br).unwrap());
        assert!(lhs.sub(&rhs).is_zero());
        assert!(lhs.absolute_precision() >= 38);
    }

    #[test]
    fn dilog_on_disc() {
        let p = 5;
        assert!(li2p(&PadicNumber::exact_zero(p)).unwrap().is_zero());
        let z = PadicNumber::from_integer(5, p, 20);
        let v = li2p(&z).unwrap();
        let mut s = BigRational::zero();
        for k in 1..60i64 {
            s += BigRational::new(num_traits::pow(BigInt::from(5), k as usize), (k * k).into());
        }
        assert!(v.agrees_to(&PadicNumber::from_rational(&s, p, 60), 19));
        let half = PadicNumber::from_rational(&q(1, 2), p, 20);
        assert!(matches!(li2p(&half), Err(PadicError::OutOfDisc(0))));
        assert!(matches!(dp_disc(&half, &Branch::iwasawa(p)), Err(PadicError::OutOfDisc(0))));
    }

    #[test]
    fn branch_change_on_disc() {
        let p = 5;
        let z = PadicNumber::from_integer(5, p, 32);
        let a = Branch::iwasawa(p);
        let b = Branch::new(PadicNumber::from_integer(1, p, 32));
        let d = dp_disc(&z, &b).unwrap().sub(&dp_disc(&z, &a).unwrap());
        let one_minus = PadicNumber::from_integer(-4, p, 32);
        let expected = plog(&one_minus, &a).unwrap().div(&PadicNumber::from_integer(2, p, 32)).unwrap();
        assert!(d.agrees_to(&expected, 30));
    }

    #[test]
    fn precision_is_a_lower_bound() {
        let p = 5;
        let x = PadicNumber::from_rational(&q(-13, 10), p, 32);
        let lo = plog(&x, &Branch::iwasawa(p)).unwrap();
        let hi = plog(&PadicNumber::from_rational(&q(-13, 10), p, 42), &Branch::iwasawa(p)).unwrap();
        assert!(hi.agrees_to(&lo, lo.absolute_precision()));
        let z = PadicNumber::from_rational(&q(15, 7), p, 32);
        let lo = li2p(&z).unwrap();
        let hi = li2p(&PadicNumber::from_rational(&q(15, 7), p, 42)).unwrap();
        assert!(hi.agrees_to(&lo, lo.absolute_precision()));
    }
}
