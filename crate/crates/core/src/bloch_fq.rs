//! Pre-Bloch and modified Bloch groups of prime fields `F_p`, computed by
//! integer linear algebra over the presentation `ℤ[F_p♭] / R_{5,2}`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::BlochError;
use crate::intlin::{cokernel, cokernel_by_minors, left_kernel, to_matrix, InvariantFactors, Lattice, Matrix};
use crate::padic::is_prime;

/// Generators `[x]`, `x ∈ {2, …, p−1}`, and relation rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    pub p: u64,
    pub generators: Vec<u64>,
    pub relations: Vec<Vec<i64>>,
    /// The first `five_term_rows` relations are five-term rows, the rest
    /// inversion rows.
    pub five_term_rows: usize,
}

impl AbelianGroupPresentation {
    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn five_term(&self) -> &[Vec<i64>] {
        &self.relations[..self.five_term_rows]
    }

    pub fn index(&self, x: u64) -> usize {
        (x % self.p) as usize - 2
    }

    /// Unit vector of `[x]`.
    pub fn symbol(&self, x: u64) -> Vec<i64> {
        let mut v = vec![0; self.ngens()];
        v[self.index(x)] = 1;
        v
    }
}

/// Arithmetic in `F_p`.
#[derive(Clone, Copy, Debug)]
struct Fp(u64);

impl Fp {
    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }
    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }
    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }
    fn div(self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }
    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
}

fn validate(p: u64) -> Result<(), BlochError> {
    if !is_prime(p) {
        return Err(BlochError::NotPrime(p));
    }
    if p < 5 {
        return Err(BlochError::PrimeTooSmall(p));
    }
    Ok(())
}

/// All ordered five-term rows `R(x, y)`, `x ≠ y`, followed by the inversion
/// rows `[x] + [x⁻¹]`.
pub fn relations_matrix(p: u64) -> Result<AbelianGroupPresentation, BlochError> {
    validate(p)?;
    let f = Fp(p);
    let generators: Vec<u64> = (2..p).collect();
    let n = generators.len();
    let flat = |z: u64| z >= 2;
    let mut relations = Vec::new();
    for &x in &generators {
        for &y in &generators {
            if x == y {
                continue;
            }
            let args = [
                (x, 1),
                (y, -1),
                (f.div(y, x), 1),
                (f.div(f.sub(1, x), f.sub(1, y)), 1),
                (f.div(f.sub(1, f.inv(x)), f.sub(1, f.inv(y))), -1),
            ];
            if !args.iter().all(|&(z, _)| flat(z)) {
                continue;
            }
            let mut row = vec![0i64; n];
            for (z, s) in args {
                row[z as usize - 2] += s;
            }
            relations.push(row);
        }
    }
    let five_term_rows = relations.len();
    for &x in &generators {
        let mut row = vec![0i64; n];
        row[x as usize - 2] += 1;
        row[f.inv(x) as usize - 2] += 1;
        relations.push(row);
    }
    Ok(AbelianGroupPresentation { p, generators, relations, five_term_rows })
}

/// `𝔭̃(F_p) = ℤ[F_p♭] / R_{5,2}`.
pub fn pre_bloch(p: u64) -> Result<InvariantFactors, BlochError> {
    let pr = relations_matrix(p)?;
    Ok(cokernel(&to_matrix(&pr.relations), pr.ngens()))
}

/// `𝔭(F_p) = ℤ[F_p♭] / R₅`.
pub fn pre_bloch_five_term(p: u64) -> Result<InvariantFactors, BlochError> {
    let pr = relations_matrix(p)?;
    Ok(cokernel(&to_matrix(pr.five_term()), pr.ngens()))
}

/// `∧̃²F_p*` for the cyclic group `F_p* = ⟨g⟩` of order `m = p − 1`: it is
/// cyclic, generated by `g ∧ g`, of order `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeFp {
    pub p: u64,
    pub generator: u64,
    pub modulus: u64,
    log: BTreeMap<u64, u64>,
}

impl WedgeFp {
    pub fn new(p: u64) -> Result<Self, BlochError> {
        validate(p)?;
        let f = Fp(p);
        let m = p - 1;
        let generator = (2..p).find(|&g| (1..m).all(|k| f.pow(g, k) != 1)).expect("F_p* is cyclic");
        let mut log = BTreeMap::new();
        let mut x = 1;
        for k in 0..m {
            log.insert(x, k);
            x = f.mul(x, generator);
        }
        // g⊗g has order m in F*⊗F*; (−x)⊗x = (a + m/2)·a·(g⊗g) for x = gᵃ
        let modulus = (0..m).fold(m, |d, a| d.gcd(&((a + m / 2) * a % m)));
        Ok(WedgeFp { p, generator, modulus, log })
    }

    pub fn log(&self, x: u64) -> u64 {
        self.log[&(x % self.p)]
    }

    /// `x ∧ y` as a multiple of `g ∧ g`.
    pub fn wedge(&self, x: u64, y: u64) -> u64 {
        self.log(x) * self.log(y) % self.modulus
    }

    /// `∂[x] = x ∧ (1 − x)`.
    pub fn del_symbol(&self, x: u64) -> u64 {
        self.wedge(x, Fp(self.p).sub(1, x))
    }

    /// `∂` of an element of `ℤ[F_p♭]` given by coefficients on `{2, …, p−1}`.
    pub fn del(&self, v: &[i64]) -> u64 {
        let d = self.modulus as i64;
        let s: i64 = v.iter().enumerate().map(|(i, &a)| a.rem_euclid(d) * self.del_symbol(i as u64 + 2) as i64).sum();
        s.rem_euclid(d) as u64
    }
}

/// Basis of `ker ∂ ⊆ ℤ[F_p♭]`.
pub fn del_kernel(w: &WedgeFp) -> Matrix {
    let n = (w.p - 2) as usize;
    let mut a: Matrix = (0..n).map(|i| vec![BigInt::from(w.del_symbol(i as u64 + 2))]).collect();
    a.push(vec![BigInt::from(w.modulus)]);
    // (v, k) with Σ vᵢ∂ᵢ + k·d = 0; drop k
    left_kernel(&a, 1).into_iter().map(|mut r| {
        r.pop();
        r
    }).collect()
}

/// `B̃(F_p) = ker ∂ / R_{5,2}`.
pub fn modified_bloch(p: u64) -> Result<InvariantFactors, BlochError> {
    let pr = relations_matrix(p)?;
    let w = WedgeFp::new(p)?;
    let n = pr.ngens();
    let kernel = Lattice::from_rows(&del_kernel(&w), n);
    let coords: Matrix = to_matrix(&pr.relations)
        .iter()
        .map(|r| kernel.coordinates(r).expect("relations lie in ker ∂"))
        .collect();
    Ok(cokernel(&coords, kernel.rank()))
}

/// Result of [`check_c_facts`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFactsReport {
    pub p: u64,
    /// `C_c − C_{c'} ∈ R₅` for all `c, c'`.
    pub independent_of_c: bool,
    /// `3 C_c ∈ R_{5,2}` for all `c`.
    pub three_c_in_relations: bool,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl CFactsReport {
    pub fn passed(&self) -> bool {
        self.independent_of_c && self.three_c_in_relations
    }
}

/// Checks, by exact membership in the relation lattices, that the class of
/// `C_c = [c] + [1 − c]` modulo `R₅` does not depend on `c` and that `3 C_c`
/// lies in `R_{5,2}`.
pub fn check_c_facts(p: u64) -> Result<CFactsReport, BlochError> {
    let pr = relations_matrix(p)?;
    let n = pr.ngens();
    let r5 = Lattice::from_rows(&to_matrix(pr.five_term()), n);
    let r52 = Lattice::from_rows(&to_matrix(&pr.relations), n);
    let f = Fp(p);
    let c_elt = |c: u64| -> Vec<i64> {
        let mut v = pr.symbol(c);
        v[pr.index(f.sub(1, c))] += 1;
        v
    };
    let big = |v: Vec<i64>| -> Vec<BigInt> { v.into_iter().map(BigInt::from).collect() };
    let mut report = CFactsReport { p, independent_of_c: true, three_c_in_relations: true, pairs_checked: 0, failures: vec![] };
    for &c in &pr.generators {
        let cc = c_elt(c);
        if !r52.contains(&big(cc.iter().map(|x| 3 * x).collect())) {
            report.three_c_in_relations = false;
            report.failures.push(format!("3C_{c} not in R_5,2"));
        }
        for &d in &pr.generators {
            if d <= c {
                continue;
            }
            report.pairs_checked += 1;
            let diff: Vec<i64> = cc.iter().zip(c_elt(d)).map(|(a, b)| a - b).collect();
            if !r5.contains(&big(diff)) {
                report.independent_of_c = false;
                report.failures.push(format!("C_{c} - C_{d} not in R_5"));
            }
        }
    }
    Ok(report)
}

/// Independent computations used to cross-check [`pre_bloch`] and
/// [`modified_bloch`].
pub mod oracle {
    use super::*;

    /// `𝔭̃(F_p)` from determinantal divisors of the relation matrix.
    pub fn pre_bloch_by_minors(p: u64) -> Result<InvariantFactors, BlochError> {
        let pr = relations_matrix(p)?;
        Ok(cokernel_by_minors(&to_matrix(&pr.relations), pr.ngens()))
    }

    /// Structure of a finite abelian group from the number of elements
    /// killed by each prime power.
    fn structure(order: u64, killed_by: impl Fn(u64) -> u64) -> InvariantFactors {
        let mut cyclic: Vec<u64> = Vec::new();
        let mut rest = order;
        let mut q = 2;
        while rest > 1 {
            if !rest.is_multiple_of(q) {
                q += 1;
                continue;
            }
            let mut e = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                e += 1;
            }
            // a_j = log_q |G[q^j]|; factors of order ≥ q^j number a_j − a_{j−1}
            let a: Vec<u32> = (0..=e).map(|j| killed_by(q.pow(j)).ilog(q)).collect();
            let at_least: Vec<u32> = (1..a.len()).map(|j| a[j] - a[j - 1]).collect();
            for j in 0..at_least.len() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..at_least[j] - next {
                    cyclic.push(q.pow(j as u32 + 1));
                }
            }
        }
        InvariantFactors::from_diagonal(cyclic.into_iter().map(BigInt::from))
    }

    /// Enumerates `ℤ[F_p♭] / R_{5,2}` element by element, then reads off the
    /// structure of the whole group and of the subgroup `∂ = 0`.
    ///
    /// Returns `(pre_bloch, modified_bloch)`, or `None` when the group is
    /// infinite or larger than `limit`.
    pub fn enumerate(p: u64, limit: usize) -> Result<Option<(InvariantFactors, InvariantFactors)>, BlochError> {
        let pr = relations_matrix(p)?;
        let w = WedgeFp::new(p)?;
        let n = pr.ngens();
        let lattice = Lattice::from_rows(&to_matrix(&pr.relations), n);
        if lattice.rank() != n {
            return Ok(None);
        }
        let canon = |v: &[i64]| -> Vec<i64> {
            let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            lattice.reduce(&b).expect("full rank").iter().map(|x| x.to_i64().expect("small")).collect()
        };
        let zero = vec![0i64; n];
        let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                let mut u = v.clone();
                u[i] += 1;
                let u = canon(&u);
                if seen.insert(u.clone()) {
                    if seen.len() > limit {
                        return Ok(None);
                    }
                    queue.push_back(u);
                }
            }
        }
        let elements: Vec<Vec<i64>> = seen.into_iter().collect();
        let kills = |k: u64, v: &[i64]| canon(&v.iter().map(|x| x * k as i64).collect::<Vec<_>>()).iter().all(|x| *x == 0);
        let whole = structure(elements.len() as u64, |k| elements.iter().filter(|v| kills(k, v)).count() as u64);
        let cycles: Vec<&Vec<i64>> = elements.iter().filter(|v| w.del(v) == 0).collect();
        let sub = structure(cycles.len() as u64, |k| cycles.iter().filter(|v| kills(k, v)).count() as u64);
        Ok(Some((whole, sub)))
    }
}

/// Summary for one prime, as printed by the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlochSummary {
    pub p: u64,
    pub generators: usize,
    pub five_term_rows: usize,
    pub inversion_rows: usize,
    pub wedge_order: u64,
    pub pre_bloch_five_term: InvariantFactors,
    pub pre_bloch: InvariantFactors,
    pub modified_bloch: InvariantFactors,
    pub relations_in_kernel: bool,
    pub c_facts: CFactsReport,
}

pub fn summarize(p: u64) -> Result<BlochSummary, BlochError> {
    let pr = relations_matrix(p)?;
    let w = WedgeFp::new(p)?;
    Ok(BlochSummary {
        p,
        generators: pr.ngens(),
        five_term_rows: pr.five_term_rows,
        inversion_rows: pr.relations.len() - pr.five_term_rows,
        wedge_order: w.modulus,
        pre_bloch_five_term: pre_bloch_five_term(p)?,
        pre_bloch: pre_bloch(p)?,
        modified_bloch: modified_bloch(p)?,
        relations_in_kernel: pr.relations.iter().all(|r| w.del(r) == 0),
        c_facts: check_c_facts(p)?,
    })
}

/// Whether `q` is a quotient of `g` as far as orders allow: every finite
/// order divides, and free ranks do not increase.
pub fn order_divides(quotient: &InvariantFactors, group: &InvariantFactors) -> bool {
    if quotient.free_rank() > group.free_rank() {
        return false;
    }
    match (quotient.order(), group.order()) {
        (Some(a), Some(b)) => b.is_multiple_of(&a),
        (Some(_), None) | (None, None) => true,
        (None, Some(_)) => false,
    }
}
