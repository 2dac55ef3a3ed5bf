//! GCD-free (coprime) bases.
//!
//! Instead of factoring into irreducibles, every polynomial is written over a
//! set of pairwise coprime, squarefree, monic polynomials. Squarefreeness
//! matters: it makes the subgroup generated by the basis pure in the
//! multiplicative group, so sign torsion is computed correctly.

use std::collections::BTreeMap;

use super::poly::{gcd, MultiPoly};
use super::scalar::Scalar;

/// Exponent vector of one registered input over a [`CoprimeBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    /// `(basis index, exponent)`, exponents positive.
    pub exponents: Vec<(usize, u32)>,
}

#[derive(Clone, Debug)]
pub struct CoprimeBasis {
    elements: Vec<MultiPoly>,
    factorizations: Vec<Factorization>,
}

impl CoprimeBasis {
    /// Builds a basis for `inputs`; every input must be nonzero.
    pub fn new(inputs: &[MultiPoly]) -> Self {
        let mut elements: Vec<MultiPoly> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for p in inputs {
            assert!(!p.is_zero(), "coprime basis of the zero polynomial");
            if p.is_constant() {
                continue;
            }
            let m = p.monic();
            if seen.insert(m.clone()) {
                insert(&mut elements, m);
            }
        }
        make_squarefree(&mut elements);
        elements.sort_by(basis_order);
        let factorizations = inputs
            .iter()
            .map(|p| factor_over(&elements, p).expect("input factors over its own basis"))
            .collect();
        CoprimeBasis { elements, factorizations }
    }

    pub fn elements(&self) -> &[MultiPoly] {
        &self.elements
    }

    /// Factorization of the `i`-th registered input.
    pub fn factorization(&self, i: usize) -> &Factorization {
        &self.factorizations[i]
    }

    pub fn factorizations(&self) -> &[Factorization] {
        &self.factorizations
    }

    /// Rebuilds `unit · Π bᵢ^eᵢ`.
    pub fn reconstruct(&self, f: &Factorization, nvars: usize) -> MultiPoly {
        let mut acc = MultiPoly::constant(nvars, f.unit.clone());
        for &(i, e) in &f.exponents {
            acc = &acc * &self.elements[i].pow(e);
        }
        acc
    }
}

/// Order on basis polynomials: total degree, then graded lex.
pub fn basis_order(a: &MultiPoly, b: &MultiPoly) -> std::cmp::Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b))
}

/// Writes `p` over `basis` if possible.
pub fn factor_over(basis: &[MultiPoly], p: &MultiPoly) -> Option<Factorization> {
    let mut rest = p.clone();
    let mut exponents = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let mut e = 0;
        while !rest.is_constant() {
            match rest.div_exact(b) {
                Some(q) => {
                    rest = q;
                    e += 1;
                }
                None => break,
            }
        }
        if e > 0 {
            exponents.push((i, e));
        }
    }
    let unit = rest.constant_value()?;
    Some(Factorization { unit, exponents })
}

/// Inserts `f` into a pairwise coprime set, splitting elements as needed.
fn insert(basis: &mut Vec<MultiPoly>, f: MultiPoly) {
    let mut stack = vec![f];
    while let Some(f) = stack.pop() {
        let mut f = f.monic();
        if f.is_constant() {
            continue;
        }
        let mut i = 0;
        while i < basis.len() && !f.is_constant() {
            let g = gcd(&f, &basis[i]);
            if g.is_constant() {
                i += 1;
                continue;
            }
            let b = basis.swap_remove(i);
            stack.push(b.div_exact(&g).unwrap());
            f = f.div_exact(&g).unwrap().monic();
            stack.push(g);
        }
        if !f.is_constant() {
            basis.push(f);
        }
    }
}

/// Refines until every element is squarefree.
fn make_squarefree(basis: &mut Vec<MultiPoly>) {
    loop {
        let mut repeated = None;
        'outer: for b in basis.iter() {
            for v in b.support() {
                let g = gcd(b, &b.derivative(v));
                if !g.is_constant() {
                    repeated = Some(g);
                    break 'outer;
                }
            }
        }
        match repeated {
            Some(g) => insert(basis, g),
            None => return,
        }
    }
}

/// Multiplicity map of a polynomial over basis elements, as a convenience for
/// callers that want exponents keyed by element.
pub fn exponent_map(f: &Factorization) -> BTreeMap<usize, u32> {
    f.exponents.iter().copied().collect()
}
