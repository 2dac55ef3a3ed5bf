//! Floating-point dilogarithms and sampling probes.
//!
//! `Li₂` is summed directly for `|z| ≤ 1/2`. Elsewhere it is reduced by
//! `z ↦ 1/z` (for `|z| > 1`) and `z ↦ 1 − z` (for `Re z > 1/2`) to the
//! region `|z| ≤ 1, Re z ≤ 1/2`, where the Bernoulli series in
//! `u = −log(1 − z)` converges quickly since `|u| < 2`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::scalar::ratio_to_f64;
use crate::error::NumericError;
use crate::formal::FormalSum;

pub const PI2_6: f64 = PI * PI / 6.0;

/// Default tolerance for numeric identity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Admissible sample points keep `|f(P)|` and `|1 − f(P)|` in this range.
pub const MARGIN_LOW: f64 = 1e-3;
pub const MARGIN_HIGH: f64 = 1e3;

fn bernoulli_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // B_n from Σ_{k≤n} C(n+1, k) B_k = 0, then B_n / (n+1)!
        let n_max = 40usize;
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for n in 1..=n_max {
            let mut s = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                s += bk * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
        }
        let mut fact = BigInt::one();
        b.iter()
            .enumerate()
            .map(|(n, bn)| {
                fact *= BigInt::from(n + 1);
                ratio_to_f64(&(bn / BigRational::from_integer(fact.clone())))
            })
            .collect()
    })
}

fn li2_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::zero();
    let mut p = z;
    for n in 1..200 {
        let term = p / (n * n) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        p *= z;
    }
    sum
}

fn li2_bernoulli(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let mut sum = Complex64::zero();
    let mut p = u;
    for (n, c) in bernoulli_coefficients().iter().enumerate() {
        if n > 1 && n % 2 == 1 {
            p *= u;
            continue;
        }
        sum += p * *c;
        p *= u;
    }
    sum
}

/// The dilogarithm `Li₂(z)` (principal branch).
pub fn li2(z: Complex64) -> Result<Complex64, NumericError> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(NumericError::NonFinite);
    }
    let one = Complex64::new(1.0, 0.0);
    if z == one {
        return Ok(Complex64::new(PI2_6, 0.0));
    }
    if z.norm() > 1.0 {
        // Li₂(z) = −π²/6 − ½ log²(−z) − Li₂(1/z)
        let l = (-z).ln();
        return Ok(-PI2_6 - 0.5 * l * l - li2(one / z)?);
    }
    if z.re > 0.5 {
        // Li₂(z) = π²/6 − log z · log(1 − z) − Li₂(1 − z)
        return Ok(PI2_6 - z.ln() * (one - z).ln() - li2(one - z)?);
    }
    Ok(if z.norm() <= 0.5 { li2_series(z) } else { li2_bernoulli(z) })
}

/// The Bloch-Wigner dilogarithm `D(z) = Im Li₂(z) + arg(1 − z) log|z|`.
pub fn bloch_wigner(z: Complex64) -> Result<f64, NumericError> {
    if z == Complex64::zero() || z == Complex64::new(1.0, 0.0) {
        return Err(NumericError::DegenerateArgument(format!("{z}")));
    }
    if z.im == 0.0 {
        return Ok(0.0);
    }
    Ok(li2(z)?.im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln())
}

/// The Rogers dilogarithm on ℝ, with `L(0) = 0` and `L(1) = π²/6`.
pub fn rogers(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x == 1.0 {
        PI2_6
    } else if x > 1.0 {
        2.0 * PI2_6 - rogers(1.0 / x)
    } else if x < 0.0 {
        -rogers(1.0 - 1.0 / (1.0 - x))
    } else {
        li2(Complex64::new(x, 0.0)).expect("finite").re + 0.5 * x.ln() * (1.0 - x).ln()
    }
}

/// A class in `ℝ / (π²/2)ℤ`, or more generally modulo a given period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModPiSqHalf {
    rep: f64,
    period: f64,
}

impl ModPiSqHalf {
    pub const PERIOD: f64 = PI * PI / 2.0;

    pub fn new(x: f64) -> Self {
        Self::with_period(x, Self::PERIOD)
    }

    pub fn with_period(x: f64, period: f64) -> Self {
        let mut rep = x.rem_euclid(period);
        if rep >= period {
            rep = 0.0;
        }
        ModPiSqHalf { rep, period }
    }

    /// Representative in `[0, period)`.
    pub fn representative(self) -> f64 {
        self.rep
    }

    /// Representative in `(−period/2, period/2]`.
    pub fn centered(self) -> f64 {
        if self.rep > self.period / 2.0 {
            self.rep - self.period
        } else {
            self.rep
        }
    }

    /// Distance to the class of zero.
    pub fn distance_to_zero(self) -> f64 {
        self.centered().abs()
    }
}

impl std::ops::Add for ModPiSqHalf {
    type Output = ModPiSqHalf;
    fn add(self, rhs: ModPiSqHalf) -> ModPiSqHalf {
        ModPiSqHalf::with_period(self.rep + rhs.rep, self.period)
    }
}

impl std::ops::Sub for ModPiSqHalf {
    type Output = ModPiSqHalf;
    fn sub(self, rhs: ModPiSqHalf) -> ModPiSqHalf {
        ModPiSqHalf::with_period(self.rep - rhs.rep, self.period)
    }
}

impl std::ops::Neg for ModPiSqHalf {
    type Output = ModPiSqHalf;
    fn neg(self) -> ModPiSqHalf {
        ModPiSqHalf::with_period(-self.rep, self.period)
    }
}

/// A real argument of `RL̄`, including the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RealPoint {
    Finite(f64),
    Infinity,
}

/// `RL̄(x) = L(x) − π²/6 mod π²/2`, with `RL̄(∞) = −π²/3`.
pub fn rl_bar(x: RealPoint) -> ModPiSqHalf {
    match x {
        RealPoint::Infinity => ModPiSqHalf::new(-2.0 * PI2_6),
        RealPoint::Finite(v) => ModPiSqHalf::new(rogers(v) - PI2_6),
    }
}

/// Where sample points are drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeDomain {
    /// Independent complex coordinates; evaluates `Σ a D(f)`.
    Complex,
    /// Real coordinates; evaluates `Σ a RL̄(f)` modulo `(π²/2)·gcd(a)`.
    Real,
    /// Complex coordinates with the second member of each pair the conjugate
    /// of the first; evaluates `Σ a D(f)`.
    ConjugatePairs(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub max_deviation: f64,
    pub mean_value: f64,
    pub points_used: usize,
    pub attempts: usize,
}

/// Rational gcd of the coefficients (the period multiplier in the real domain).
fn coefficient_gcd(alpha: &FormalSum) -> BigRational {
    use num_integer::Integer;
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, a) in alpha.terms() {
        num = num.gcd(a.numer());
        den = den.lcm(a.denom());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    BigRational::new(num.abs(), den)
}

fn sample_point(domain: &ProbeDomain, nvars: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut coord = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    match domain {
        ProbeDomain::Complex => (0..nvars).map(|_| coord()).collect(),
        ProbeDomain::Real => (0..nvars).map(|_| Complex64::new(coord().re, 0.0)).collect(),
        ProbeDomain::ConjugatePairs(pairs) => {
            let mut p = vec![Complex64::zero(); nvars];
            for &(a, b) in pairs {
                let z = coord();
                p[a] = z;
                p[b] = z.conj();
            }
            p
        }
    }
}

fn admissible(v: Complex64) -> bool {
    let (a, b) = (v.norm(), (Complex64::new(1.0, 0.0) - v).norm());
    v.re.is_finite()
        && v.im.is_finite()
        && (MARGIN_LOW..=MARGIN_HIGH).contains(&a)
        && (MARGIN_LOW..=MARGIN_HIGH).contains(&b)
}

/// Evaluates `Σ a D(f(P))` (or the `RL̄` sum, as an unreduced real) at a
/// point; `None` if the point is not admissible.
fn value_at(alpha: &FormalSum, domain: &ProbeDomain, point: &[Complex64]) -> Option<f64> {
    let mut total = 0.0;
    for (f, a) in alpha.terms() {
        let v = f.eval_complex(point);
        if !admissible(v) {
            return None;
        }
        let a = ratio_to_f64(a);
        total += a * match domain {
            ProbeDomain::Real => rogers(v.re) - PI2_6,
            _ => bloch_wigner(v).ok()?,
        };
    }
    Some(total)
}

/// Samples admissible points and reports how far the dilogarithm sum strays
/// from its mean. In the real domain values are compared modulo the period.
pub fn numeric_probe(
    alpha: &FormalSum,
    domain: &ProbeDomain,
    samples: usize,
    seed: u64,
) -> Result<ProbeReport, NumericError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = alpha.ctx().nvars();
    let max_attempts = samples.max(1) * 1000;
    let mut values = Vec::with_capacity(samples);
    let mut attempts = 0;
    while values.len() < samples {
        if attempts >= max_attempts {
            return Err(NumericError::SamplingExhausted(attempts));
        }
        attempts += 1;
        let p = sample_point(domain, nvars, &mut rng);
        if let Some(v) = value_at(alpha, domain, &p) {
            values.push(v);
        }
    }
    let (mean, dev) = match domain {
        ProbeDomain::Real => {
            let period = ModPiSqHalf::PERIOD * ratio_to_f64(&coefficient_gcd(alpha));
            let v0 = values[0];
            let d: Vec<f64> = values.iter().map(|v| ModPiSqHalf::with_period(v - v0, period).centered()).collect();
            let avg = d.iter().sum::<f64>() / d.len() as f64;
            let mean = ModPiSqHalf::with_period(v0 + avg, period).centered();
            (mean, d.iter().map(|x| (x - avg).abs()).fold(0.0, f64::max))
        }
        _ => {
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            (mean, values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
        }
    };
    Ok(ProbeReport { max_deviation: dev, mean_value: mean, points_used: values.len(), attempts })
}

/// Value of `Σ a D(f)` at one point, used to report the constant once a
/// sum is certified.
pub fn evaluate_bloch_wigner(alpha: &FormalSum, point: &[Complex64]) -> Result<f64, NumericError> {
    let mut total = 0.0;
    for (f, a) in alpha.terms() {
        total += ratio_to_f64(a) * bloch_wigner(f.eval_complex(point))?;
    }
    Ok(total)
}

/// Value of `Σ a RL̄(f)` at a real point, reduced modulo `(π²/2)·gcd(a)`.
pub fn evaluate_rogers(alpha: &FormalSum, point: &[f64]) -> Result<ModPiSqHalf, NumericError> {
    let p: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut total = 0.0;
    for (f, a) in alpha.terms() {
        let v = f.eval_complex(&p).re;
        if !v.is_finite() {
            return Err(NumericError::NonFinite);
        }
        total += ratio_to_f64(a) * (rogers(v) - PI2_6);
    }
    let period = ModPiSqHalf::PERIOD * ratio_to_f64(&coefficient_gcd(alpha));
    Ok(ModPiSqHalf::with_period(total, period))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn special_values() {
        assert_eq!(li2(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let half = li2(c(0.5, 0.0)).unwrap();
        assert!((half.re - (PI2_6 / 2.0 - 0.5 * 2f64.ln().powi(2))).abs() < 1e-14);
        assert!((li2(c(1.0, 0.0)).unwrap().re - PI2_6).abs() < 1e-15);
        assert!((li2(c(-1.0, 0.0)).unwrap().re + PI2_6 / 2.0).abs() < 1e-14);
        assert!(li2(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn catalan_at_i() {
        assert!((bloch_wigner(c(0.0, 1.0)).unwrap() - CATALAN).abs() < 1e-13);
    }

    #[test]
    fn series_and_reductions_agree_on_annulus() {
        for k in 0..64 {
            let theta = k as f64 * PI / 32.0;
            for r in [0.4, 0.5, 0.6] {
                let z = Complex64::from_polar(r, theta);
                let direct = li2_series(z);
                let reduced = if z.re > 0.5 {
                    PI2_6 - z.ln() * (c(1.0, 0.0) - z).ln() - li2(c(1.0, 0.0) - z).unwrap()
                } else {
                    li2_bernoulli(z)
                };
                assert!((direct - reduced).norm() < 1e-11, "z = {z}");
            }
        }
    }

    #[test]
    fn rogers_special_values() {
        assert!((rogers(1.0) - PI2_6).abs() < 1e-12);
        assert_eq!(rogers(0.0), 0.0);
        assert!((rogers(0.5) - PI2_6 / 2.0).abs() < 1e-14);
        assert!(rl_bar(RealPoint::Finite(1.0)).distance_to_zero() < 1e-14);
        assert!((rl_bar(RealPoint::Infinity).representative() - (ModPiSqHalf::PERIOD - 2.0 * PI2_6)).abs() < 1e-14);
    }

    /// `D` as the integral of `log|w| d arg(1−w) − log|1−w| d arg(w)` along
    /// a vertical segment from the real axis.
    fn integrated(z: Complex64) -> f64 {
        let a = c(z.re, 0.0);
        let n = 4000;
        let dz = (z - a) / n as f64;
        let form = |w: Complex64| {
            let one = c(1.0, 0.0);
            w.norm().ln() * (-dz / (one - w)).im - (one - w).norm().ln() * (dz / w).im
        };
        let mut s = form(a) + form(z);
        for k in 1..n {
            s += form(a + dz * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s / 3.0
    }

    #[test]
    fn closed_form_matches_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let z = c(rng.gen_range(-2.0..3.0), rng.gen_range(0.2..2.0));
            if (z.re).abs() < 0.1 || (z.re - 1.0).abs() < 0.1 {
                continue;
            }
            assert!((bloch_wigner(z).unwrap() - integrated(z)).abs() < 1e-6, "z = {z}");
        }
    }

    #[test]
    fn conjugation_flips_sign() {
        let z = c(0.3, -1.7);
        assert!((bloch_wigner(z).unwrap() + bloch_wigner(z.conj()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn mod_arithmetic_wraps() {
        let a = ModPiSqHalf::new(ModPiSqHalf::PERIOD - 0.1);
        let b = ModPiSqHalf::new(0.3);
        assert!(((a + b).representative() - 0.2).abs() < 1e-12);
        assert!(((-b).centered() + 0.3).abs() < 1e-12);
    }

    #[test]
    fn probes_separate_identities_from_non_identities() {
        use crate::formal::{c_element, five_term, Context};
        let ctx = Context::rational(&["t1", "t2"]);
        let r = five_term(&ctx, &ctx.var("t1"), &ctx.var("t2")).unwrap();
        for d in [ProbeDomain::Complex, ProbeDomain::Real] {
            let rep = numeric_probe(&r, &d, 100, 1).unwrap();
            assert!(rep.max_deviation < 1e-9, "{d:?}: {rep:?}");
            assert!(rep.mean_value.abs() < 1e-9);
        }
        let one = Context::rational(&["t"]);
        let refl = c_element(&one, &one.var("t")).unwrap();
        assert!(numeric_probe(&refl, &ProbeDomain::Complex, 100, 2).unwrap().max_deviation < 1e-9);
        let single = FormalSum::symbol(&one, one.var("t")).unwrap();
        assert!(numeric_probe(&single, &ProbeDomain::Complex, 100, 3).unwrap().max_deviation > 1e-3);
    }
}
