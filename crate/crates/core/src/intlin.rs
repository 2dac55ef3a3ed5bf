//! Integer linear algebra: Hermite and Smith normal forms, row-span
//! membership, left kernels and determinantal divisors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
pub type Matrix = Vec<Vec<BigInt>>;

pub fn to_matrix(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q·src
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U·A = H`, `U` unimodular, `H` in echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows of `H` come last.
pub fn hnf_with_transform(a: &Matrix, ncols: usize) -> (Matrix, Matrix) {
    let n = a.len();
    let mut h = a.clone();
    let mut u = identity(n);
    let mut r = 0;
    for j in 0..ncols {
        if r == n {
            break;
        }
        loop {
            let piv = (r..n).filter(|&i| !h[i][j].is_zero()).min_by_key(|&i| h[i][j].abs());
            let Some(piv) = piv else { break };
            h.swap(r, piv);
            u.swap(r, piv);
            let mut done = true;
            for i in r + 1..n {
                if h[i][j].is_zero() {
                    continue;
                }
                let q = h[i][j].div_floor(&h[r][j]);
                let (hr, ur) = (h[r].clone(), u[r].clone());
                axpy(&mut h[i], &q, &hr);
                axpy(&mut u[i], &q, &ur);
                if !h[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < n && !h[r][j].is_zero() {
            if h[r][j].is_negative() {
                h[r].iter_mut().for_each(|x| *x = -&*x);
                u[r].iter_mut().for_each(|x| *x = -&*x);
            }
            let (hr, ur) = (h[r].clone(), u[r].clone());
            for i in 0..r {
                let q = h[i][j].div_floor(&hr[j]);
                if !q.is_zero() {
                    axpy(&mut h[i], &q, &hr);
                    axpy(&mut u[i], &q, &ur);
                }
            }
            r += 1;
        }
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row
/// lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ncols: usize,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_rows(a: &Matrix, ncols: usize) -> Self {
        let (h, _) = hnf_with_transform(a, ncols);
        let rows: Matrix = h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        let pivots = rows.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
        Lattice { ncols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn basis(&self) -> &Matrix {
        &self.rows
    }

    /// Coefficients `c` with `v = c·basis`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        let mut c = Vec::with_capacity(self.rows.len());
        for (row, &j) in self.rows.iter().zip(&self.pivots) {
            if v[..j].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, rem) = v[j].div_rem(&row[j]);
            if !rem.is_zero() {
                return None;
            }
            axpy(&mut v, &q, row);
            c.push(q);
        }
        v.iter().all(|x| x.is_zero()).then_some(c)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Canonical representative of `v` modulo a full-rank lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.rank() != self.ncols {
            return None;
        }
        let mut v = v.to_vec();
        for (row, &j) in self.rows.iter().zip(&self.pivots) {
            let q = v[j].div_floor(&row[j]);
            axpy(&mut v, &q, row);
        }
        Some(v)
    }
}

/// Basis of `{v : v·A = 0}` for an `n × k` matrix `A`.
pub fn left_kernel(a: &Matrix, ncols: usize) -> Matrix {
    let (h, u) = hnf_with_transform(a, ncols);
    h.iter().zip(u).filter(|(r, _)| r.iter().all(|x| x.is_zero())).map(|(_, u)| u).collect()
}

/// Invariant factors of an abelian group; `0` stands for a copy of ℤ.
/// Trivial factors are omitted, so the empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantFactors(pub Vec<BigInt>);

impl InvariantFactors {
    /// Normalizes a diagonal: drops units, takes absolute values and
    /// restores the divisibility chain.
    pub fn from_diagonal(diag: impl IntoIterator<Item = BigInt>) -> Self {
        let mut d: Vec<BigInt> = diag.into_iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
        // zero is divisible by everything, so it sorts last
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
                d[i] = g;
                d[j] = l;
            }
        }
        d.retain(|x| !x.is_one());
        InvariantFactors(d)
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.0.iter().filter(|x| x.is_zero()).count()
    }

    /// Group order, or `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.0.iter().product())
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Diagonal of the Smith normal form.
pub fn smith_diagonal(a: &Matrix, ncols: usize) -> Vec<BigInt> {
    let mut m = a.clone();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let pos = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = pos else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if !m[i][t].is_zero() {
                let q = m[i][t].div_floor(&m[t][t]);
                let mt = m[t].clone();
                axpy(&mut m[i], &q, &mt);
                clean &= m[i][t].is_zero();
            }
        }
        for j in t + 1..ncols {
            if !m[t][j].is_zero() {
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let x = &q * &row[t];
                    row[j] -= x;
                }
                clean &= m[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
        if let Some(i) = bad {
            let mi = m[i].clone();
            for (x, y) in m[t].iter_mut().zip(mi) {
                *x += y;
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Invariant factors of `ℤ^ncols / rowspan(A)`.
pub fn cokernel(a: &Matrix, ncols: usize) -> InvariantFactors {
    let d = smith_diagonal(a, ncols);
    let free = ncols - d.len();
    InvariantFactors::from_diagonal(d.into_iter().chain(std::iter::repeat_n(BigInt::zero(), free)))
}

/// Fraction-free determinant.
pub fn bareiss_det(m: &Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Cokernel invariant factors from determinantal divisors, `d_k` being the
/// gcd of all `k × k` minors. Exponential in the matrix size; an oracle for
/// small inputs.
pub fn cokernel_by_minors(a: &Matrix, ncols: usize) -> InvariantFactors {
    let nrows = a.len();
    let mut divisors = vec![BigInt::one()];
    for k in 1..=nrows.min(ncols) {
        let cols = combinations(ncols, k);
        let mut g = BigInt::zero();
        for rs in combinations(nrows, k) {
            for cs in &cols {
                let minor: Matrix = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&bareiss_det(&minor));
                if g.is_one() {
                    break;
                }
            }
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    let rank = divisors.len() - 1;
    let diag = divisors.windows(2).map(|w| &w[1] / &w[0]);
    InvariantFactors::from_diagonal(diag.chain(std::iter::repeat_n(BigInt::zero(), ncols - rank)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(v: &[i64]) -> InvariantFactors {
        InvariantFactors(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let a = to_matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![1, 1, 1]]);
        let (h, u) = hnf_with_transform(&a, 3);
        for i in 0..a.len() {
            for j in 0..3 {
                let s: BigInt = (0..a.len()).map(|k| &u[i][k] * &a[k][j]).sum();
                assert_eq!(s, h[i][j]);
            }
        }
        let l = Lattice::from_rows(&a, 3);
        assert_eq!(l.rank(), 3);
        for row in &a {
            assert!(l.contains(row));
        }
    }

    #[test]
    fn membership() {
        let l = Lattice::from_rows(&to_matrix(&[vec![2, 0], vec![0, 3]]), 2);
        assert!(l.contains(&[BigInt::from(4), BigInt::from(-3)]));
        assert!(!l.contains(&[BigInt::from(1), BigInt::from(0)]));
        assert_eq!(l.reduce(&[BigInt::from(5), BigInt::from(7)]).unwrap(), vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn smith_forms() {
        let a = to_matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(cokernel(&a, 3), inv(&[2, 6, 12]));
        assert_eq!(cokernel_by_minors(&a, 3), inv(&[2, 6, 12]));
        let b = to_matrix(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(cokernel(&b, 2), inv(&[6]));
        let c = to_matrix(&[vec![1, 1, 0]]);
        assert_eq!(cokernel(&c, 3), inv(&[0, 0]));
        assert_eq!(cokernel_by_minors(&c, 3), inv(&[0, 0]));
        assert_eq!(cokernel(&to_matrix(&[vec![4]]), 1).to_string(), "Z/4");
    }

    #[test]
    fn kernel() {
        let a = to_matrix(&[vec![2], vec![3], vec![5]]);
        let k = left_kernel(&a, 1);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().zip(&a).map(|(x, r)| x * &r[0]).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn determinants() {
        let a = to_matrix(&[vec![0, 2, 1], vec![1, 0, 3], vec![4, 1, 0]]);
        assert_eq!(bareiss_det(&a), BigInt::from(25));
    }
}
