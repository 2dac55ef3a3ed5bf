//! Sparse multivariate polynomials over ℚ or ℚ(i) with exact gcd.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::scalar::Scalar;

/// Exponent vector ordered graded-lexicographically: total degree first, then
/// lexicographic with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, v: usize, e: u32) -> Self {
        let mut m = vec![0; nvars];
        m[v] = e;
        Monomial(m.into_boxed_slice())
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(e.to_vec().into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out.into_boxed_slice()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` indexed variables. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        assert!(v < nvars, "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, v, 1), Scalar::one());
        MultiPoly { nvars, terms }
    }

    /// Builds a polynomial from `(coefficient, exponent vector)` pairs, adding
    /// up repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Scalar, Vec<u32>)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e.into_boxed_slice()), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.total_degree())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading_term().map_or_else(Scalar::zero, |(_, c)| c.clone())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    /// Splits off the leading coefficient: returns `(lc, self / lc)`. Zero maps
    /// to `(0, 0)`.
    pub fn monic_parts(&self) -> (Scalar, MultiPoly) {
        if self.is_zero() {
            return (Scalar::zero(), self.clone());
        }
        let lc = self.leading_coeff();
        let inv = lc.inv().unwrap();
        (lc, self.scale(&inv))
    }

    /// Normal form with leading coefficient one (over a field, content removal
    /// and monic normalization coincide).
    pub fn monic(&self) -> MultiPoly {
        self.monic_parts().1
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients with respect to variable `v`: `self = Σ coeffs[k]·v^k`,
    /// every `coeffs[k]` free of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut e = m.0.clone();
            e[v] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    pub fn coeff_in(&self, v: usize, k: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == k {
                let mut e = m.0.clone();
                e[v] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex[v] -= 1;
            out.add_term(Monomial(ex), c * &Scalar::from_int(e as i64));
        }
        out
    }

    /// Exact quotient `self / other`, or `None` if `other` does not divide.
    pub fn div_exact(&self, other: &MultiPoly) -> Option<MultiPoly> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero(self.nvars));
        }
        if let Some(c) = other.constant_value() {
            return Some(self.scale(&c.inv().unwrap()));
        }
        let (lm_b, lc_b) = other.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_b_inv = lc_b.inv().unwrap();
        let mut r = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        while let Some((lm_r, lc_r)) = r.leading_term() {
            let m = lm_r.div(&lm_b)?;
            let c = lc_r * &lc_b_inv;
            r = &r - &other.mul_monomial(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `v`.
    pub fn prem(&self, b: &MultiPoly, v: usize) -> MultiPoly {
        let db = b.degree_in(v);
        let lb = b.coeff_in(v, db);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let shift = Monomial::var(self.nvars, v, dr - db);
            r = &(&r * &lb) - &(&lr * &b.mul_monomial(&shift, &Scalar::one()));
        }
        r
    }

    /// `Σ_k c_k · num^k · den^(d-k)` where `self = Σ_k c_k v^k` and `d` is the
    /// degree in `v`; equals `den^d · self(v = num/den)`.
    pub fn homogenized_substitute(&self, v: usize, num: &MultiPoly, den: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in(v);
        let d = coeffs.len() - 1;
        let mut num_pows = vec![MultiPoly::one(self.nvars)];
        let mut den_pows = vec![MultiPoly::one(self.nvars)];
        for k in 1..=d {
            num_pows.push(&num_pows[k - 1] * num);
            den_pows.push(&den_pows[k - 1] * den);
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = &out + &(&(c * &num_pows[k]) * &den_pows[d - k]);
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(Scalar::conj)
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e.into_boxed_slice()), c.clone());
        }
        out
    }

    /// Exact evaluation at a point (all variables).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Floating-point evaluation at a complex point.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let (re, im) = c.to_f64_pair();
            let mut t = Complex64::new(re, im);
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Renders with the given variable names, highest term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, mag) = split_sign(c);
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = render_monomial(m, names);
            if mono.is_empty() {
                let _ = write!(out, "{mag}");
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{mag}*{mono}");
            }
        }
        out
    }
}

fn split_sign(c: &Scalar) -> (bool, Scalar) {
    use num_traits::Signed;
    if (c.is_real() && c.re().is_negative()) || (c.re().is_zero() && c.im().is_negative()) {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl Ord for MultiPoly {
    /// Compares term by term from the leading term down; a polynomial that is
    /// a strict prefix of the other sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.nvars.cmp(&other.nvars).then_with(|| {
            let mut a = self.terms.iter().rev();
            let mut b = other.terms.iter().rev();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some((ma, ca)), Some((mb, cb))) => {
                        let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Scalar::one())
    }
}

/// Greatest common divisor, normalized monic; `gcd(0, q)` is the monic form of
/// `q` and `gcd(0, 0) = 0`.
///
/// Recursive: content/primitive-part split in one variable, primitive
/// pseudo-remainder sequence on the primitive parts.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    if a == b {
        return a.monic();
    }
    let v = (0..n).find(|&v| a.involves(v) || b.involves(v)).unwrap();
    if !a.involves(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.nvars);
    for c in p.coeffs_in(v).into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one(p.nvars);
        }
    }
    acc
}

fn primitive_part_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn primitive_prs(mut a: MultiPoly, mut b: MultiPoly, v: usize) -> MultiPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = a.prem(&b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        if !r.involves(v) {
            return MultiPoly::one(a.nvars);
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

/// Least common multiple, monic.
pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero(a.nvars);
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).unwrap() * b).monic()
}
