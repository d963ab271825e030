//! Dense exact linear algebra: rank, kernels, solving.
//!
//! Elimination is plain Gaussian elimination that pivots on the first
//! nonzero entry of each column. There is no fraction-free variant; over a
//! prime field nothing grows, and the rational path is only used on small
//! matrices.

use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::field::{Field, PrimeField};

/// A dense row-major matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m[(i, i)] = f.one();
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(entry(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn map<T: Clone>(&self, mut op: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut op).collect(),
        }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        self.map(|x| f.mul(c, x))
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        self.map(|x| f.neg(x))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if f.is_zero(a) {
                    continue;
                }
                let neg_a = f.neg(a);
                let (row_start, row_end) = (i * other.cols, (i + 1) * other.cols);
                f.sub_scaled(&mut out.data[row_start..row_end], &neg_a, other.row(l));
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> Echelon<E> {
        let mut m = self.clone();
        let pivots = eliminate(f, &mut m, true);
        Echelon { matrix: m, pivots }
    }

    /// Row rank over the field.
    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            let mut m = self.transpose();
            eliminate(f, &mut m, false).len()
        } else {
            let mut m = self.clone();
            eliminate(f, &mut m, false).len()
        }
    }

    /// A basis of `{v : M v = 0}`. The returned vectors, stacked as rows,
    /// form a matrix in reduced row echelon form.
    pub fn kernel_basis<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let ech = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let raw: Vec<Vec<E>> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(&ech.matrix[(r, free)]);
                }
                v
            })
            .collect();
        if raw.is_empty() {
            return raw;
        }
        let basis = Matrix::from_rows(self.cols, raw).rref(f);
        basis.matrix.to_rows().into_iter().take(basis.pivots.len()).collect()
    }

    /// Dimension of the kernel, `cols - rank`.
    pub fn nullity<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.cols - self.rank(f)
    }

    /// Some solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows);
        let augmented = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let ech = augmented.rref(f);
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ech = self.hstack(&Self::identity(f, n)).rref(f);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| ech.matrix[(i, n + j)].clone()))
    }

    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !f.is_zero(&m[(r, c)])) else {
                return f.zero();
            };
            if p != c {
                swap_rows(&mut m, p, c);
                det = f.neg(&det);
            }
            let pivot = m[(c, c)].clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for r in c + 1..n {
                if f.is_zero(&m[(r, c)]) {
                    continue;
                }
                let factor = f.mul(&m[(r, c)], &inv);
                let (top, bottom) = m.data.split_at_mut(r * n);
                f.sub_scaled(&mut bottom[c..n], &factor, &top[c * n + c..c * n + n]);
            }
        }
        det
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a reduction to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    pub matrix: Matrix<E>,
    pub pivots: Vec<usize>,
}

fn swap_rows<E>(m: &mut Matrix<E>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (top, bottom) = m.data.split_at_mut(hi * cols);
    top[lo * cols..(lo + 1) * cols].swap_with_slice(&mut bottom[..cols]);
}

/// In-place elimination; returns pivot columns. With `reduce` the result is
/// in reduced row echelon form, otherwise only rows below each pivot are
/// cleared.
fn eliminate<F: Field>(f: &F, m: &mut Matrix<F::Elem>, reduce: bool) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
            continue;
        };
        swap_rows(m, p, r);
        let inv = f.inv(&m[(r, c)]).expect("nonzero pivot");
        f.scale_in_place(&mut m.data[r * cols + c..(r + 1) * cols], &inv);
        let targets: Box<dyn Iterator<Item = usize>> = if reduce {
            Box::new((0..rows).filter(move |&i| i != r))
        } else {
            Box::new(r + 1..rows)
        };
        for i in targets {
            let factor = m[(i, c)].clone();
            if f.is_zero(&factor) {
                continue;
            }
            let (pivot_row, target_row) = if i < r {
                let (top, bottom) = m.data.split_at_mut(r * cols);
                (&bottom[c..cols], &mut top[i * cols + c..(i + 1) * cols])
            } else {
                let (top, bottom) = m.data.split_at_mut(i * cols);
                (&top[r * cols + c..(r + 1) * cols], &mut bottom[c..cols])
            };
            f.sub_scaled(target_row, &factor, pivot_row);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Outcome of certifying an integer-valued quantity by recomputing it over
/// several independent primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeConsensus {
    pub value: usize,
    pub per_prime: Vec<(u64, usize)>,
    /// The first two primes agreed.
    pub unanimous: bool,
}

/// Computes `quantity` over the first two primes; if they disagree, a third
/// prime casts the deciding vote. Disagreements are kept in `per_prime` so
/// callers can log them.
pub fn prime_consensus(
    primes: &[u64],
    mut quantity: impl FnMut(&PrimeField) -> usize,
) -> PrimeConsensus {
    assert!(primes.len() >= 2, "consensus needs at least two primes");
    let mut per_prime = Vec::new();
    for &p in &primes[..2] {
        let field = PrimeField::new(p).expect("consensus primes must be prime");
        per_prime.push((p, quantity(&field)));
    }
    if per_prime[0].1 == per_prime[1].1 {
        return PrimeConsensus {
            value: per_prime[0].1,
            per_prime,
            unanimous: true,
        };
    }
    let value = match primes.get(2) {
        Some(&p) => {
            let field = PrimeField::new(p).expect("consensus primes must be prime");
            let third = quantity(&field);
            per_prime.push((p, third));
            if third == per_prime[0].1 || third == per_prime[1].1 {
                third
            } else {
                // no majority: report the larger value, which is the
                // generic (lower-semicontinuous rank) reading of a kernel
                per_prime.iter().map(|&(_, v)| v).min().unwrap_or(third)
            }
        }
        None => per_prime[0].1.min(per_prime[1].1),
    };
    PrimeConsensus {
        value,
        per_prime,
        unanimous: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rationals, DEFAULT_PRIME};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn int_matrix<F: Field>(f: &F, rows: &[&[i64]]) -> Matrix<F::Elem> {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        let f = fp();
        assert_eq!(Matrix::identity(&f, 3).rank(&f), 3);
        assert_eq!(Matrix::zeros(&f, 4, 7).rank(&f), 0);
        assert_eq!(int_matrix(&f, &[&[1, 2, 3], &[2, 4, 6]]).rank(&f), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = fp();
        assert!(Matrix::identity(&f, 3).kernel_basis(&f).is_empty());
        let k = int_matrix(&f, &[&[1, 1]]).kernel_basis(&f);
        assert_eq!(k, vec![vec![1, f.from_i64(-1)]]);
    }

    #[test]
    fn kernel_of_random_full_rank_5x8() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = Matrix::from_fn(5, 8, |_, _| f.random(&mut rng));
        assert_eq!(m.rank(&f), 5);
        let kernel = m.kernel_basis(&f);
        assert_eq!(kernel.len(), 3);
        for v in &kernel {
            assert!(m.mul_vec(&f, v).iter().all(|x| *x == 0));
        }
        // stacked basis is itself in reduced echelon form with leading ones
        let stacked = Matrix::from_rows(8, kernel.clone());
        assert_eq!(stacked.rref(&f).matrix, stacked);
    }

    #[test]
    fn solve_and_inverse() {
        let f = fp();
        let a = int_matrix(&f, &[&[2, 1], &[1, 3]]);
        let x = a.solve(&f, &[f.from_i64(3), f.from_i64(5)]).unwrap();
        assert_eq!(a.mul_vec(&f, &x), vec![3, 5]);
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &inv), Matrix::identity(&f, 2));
        let singular = int_matrix(&f, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse(&f).is_none());
        assert!(singular.solve(&f, &[1, 0]).is_none());
    }

    #[test]
    fn det_matches_rational_computation() {
        let q = Rationals;
        let a = int_matrix(&q, &[&[0, 2, 1], &[3, -1, 4], &[5, 2, 2]]);
        // cofactor expansion by hand: 0*(−2−8) − 2*(6−20) + 1*(6+5) = 39
        assert_eq!(a.det(&q), q.from_i64(39));
        let f = fp();
        let b = int_matrix(&f, &[&[0, 2, 1], &[3, -1, 4], &[5, 2, 2]]);
        assert_eq!(b.det(&f), 39);
    }

    #[test]
    fn rational_kernel() {
        let q = Rationals;
        let m = int_matrix(&q, &[&[1, 2, 3], &[4, 5, 6]]);
        let k = m.kernel_basis(&q);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&q, &k[0]).iter().all(|x| q.is_zero(x)));
    }

    #[test]
    fn consensus_breaks_ties_with_third_prime() {
        let primes = [DEFAULT_PRIME, 2147483629, 2147483587];
        let agreed = prime_consensus(&primes, |_| 4);
        assert!(agreed.unanimous);
        assert_eq!(agreed.value, 4);
        let split = prime_consensus(&primes, |f| if f.modulus() == DEFAULT_PRIME { 5 } else { 4 });
        assert!(!split.unanimous);
        assert_eq!(split.value, 4);
        assert_eq!(split.per_prime.len(), 3);
    }
}
