//! Binary forms: symmetric powers `S^m U` of a two-dimensional space `U`.
//!
//! `S^m U` has basis `u1^(m-i) u2^i`, `i = 0..=m`, so the product of two
//! binary forms is convolution of coefficient vectors. A 2×2 matrix `g`
//! acts by `u1 -> g00 u1 + g10 u2`, `u2 -> g01 u1 + g11 u2` (its columns are
//! the images of the basis vectors).

use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BinaryError {
    #[error("the functional is zero")]
    ZeroFunctional,
}

/// Product of binary forms given by coefficient vectors.
pub fn convolve<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Matrix of `mu: S^p U ⊗ S^q U -> S^{p+q} U`. Column `(i, j)` sits at
/// position `i*(q+1) + j` and has a single 1 in row `i + j`.
pub fn mult_map<F: Field>(f: &F, p: usize, q: usize) -> Matrix<F::Elem> {
    Matrix::from_fn(p + q + 1, (p + 1) * (q + 1), |r, c| {
        if c / (q + 1) + c % (q + 1) == r {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// Action of `g` on `S^m U`: column `i` holds the image of `u1^(m-i) u2^i`.
pub fn sym_power<F: Field>(f: &F, g: &Matrix<F::Elem>, m: usize) -> Matrix<F::Elem> {
    assert_eq!((g.rows(), g.cols()), (2, 2));
    let image_u1 = [g[(0, 0)].clone(), g[(1, 0)].clone()];
    let image_u2 = [g[(0, 1)].clone(), g[(1, 1)].clone()];
    let mut out = Matrix::zeros(f, m + 1, m + 1);
    for i in 0..=m {
        let mut col = vec![f.one()];
        for _ in 0..m - i {
            col = convolve(f, &col, &image_u1);
        }
        for _ in 0..i {
            col = convolve(f, &col, &image_u2);
        }
        for (r, c) in col.into_iter().enumerate() {
            out[(r, i)] = c;
        }
    }
    out
}

/// Derivation action of `xi ∈ gl_2` on `S^m U` (Leibniz rule).
pub fn sym_power_derivative<F: Field>(f: &F, xi: &Matrix<F::Elem>, m: usize) -> Matrix<F::Elem> {
    assert_eq!((xi.rows(), xi.cols()), (2, 2));
    let mut out = Matrix::zeros(f, m + 1, m + 1);
    for i in 0..=m {
        let a = f.from_usize(m - i);
        let b = f.from_usize(i);
        out[(i, i)] = f.add(&f.mul(&a, &xi[(0, 0)]), &f.mul(&b, &xi[(1, 1)]));
        if i < m {
            out[(i + 1, i)] = f.mul(&a, &xi[(1, 0)]);
        }
        if i > 0 {
            out[(i - 1, i)] = f.mul(&b, &xi[(0, 1)]);
        }
    }
    out
}

/// Kronecker product `a ⊗ b`, with row `(i, j)` at `i*b.rows() + j`.
pub fn kronecker<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    Matrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |r, c| {
        f.mul(
            &a[(r / b.rows(), c / b.cols())],
            &b[(r % b.rows(), c % b.cols())],
        )
    })
}

/// The functional on `S^p U` vanishing on `l · S^(p-1) U` for the line
/// `l = a u1 + b u2`: evaluation at the root `(b, -a)`.
pub fn power_functional<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, p: usize) -> Vec<F::Elem> {
    let minus_a = f.neg(a);
    (0..=p)
        .map(|i| f.mul(&f.pow(b, (p - i) as u64), &f.pow(&minus_a, i as u64)))
        .collect()
}

/// Whether `mu` restricted to `ker(lambda) ⊗ S^q U` is onto `S^{p+q} U`.
pub fn hyperplane_mult_surjective<F: Field>(
    f: &F,
    lambda: &[F::Elem],
    q: usize,
) -> Result<bool, BinaryError> {
    if lambda.iter().all(|x| f.is_zero(x)) {
        return Err(BinaryError::ZeroFunctional);
    }
    let p = lambda.len() - 1;
    let hyperplane = Matrix::from_rows(p + 1, vec![lambda.to_vec()]).kernel_basis(f);
    let mut columns = Vec::with_capacity(hyperplane.len() * (q + 1));
    for w in &hyperplane {
        for j in 0..=q {
            let mut col = vec![f.zero(); p + q + 1];
            for (i, wi) in w.iter().enumerate() {
                col[i + j] = wi.clone();
            }
            columns.push(col);
        }
    }
    let restricted = Matrix::from_rows(p + q + 1, columns).transpose();
    Ok(restricted.rank(f) == p + q + 1)
}

/// Univariate polynomials, coefficients in increasing degree.
pub mod univariate {
    use crate::field::Field;

    pub fn trim<F: Field>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
        while p.last().is_some_and(|c| f.is_zero(c)) {
            p.pop();
        }
        p
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let b = trim(f, b.to_vec());
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = trim(f, a.to_vec());
        let lead_inv = f.inv(b.last().expect("nonempty")).expect("nonzero leading coefficient");
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = f.mul(r.last().expect("nonempty"), &lead_inv);
            f.sub_scaled(&mut r[shift..], &factor, &b);
            r = trim(f, r);
        }
        r
    }

    /// Monic greatest common divisor; the zero polynomial for `gcd(0, 0)`.
    pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut x = trim(f, a.to_vec());
        let mut y = trim(f, b.to_vec());
        while !y.is_empty() {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        if let Some(lead) = x.last() {
            let inv = f.inv(lead).expect("nonzero");
            f.scale_in_place(&mut x, &inv);
        }
        x
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate<F: Field>(f: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![f.zero(); xs.len()];
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = vec![f.one()];
            let mut denom = f.one();
            for (j, xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                // multiply basis by (t - xj)
                let mut next = vec![f.zero(); basis.len() + 1];
                for (d, c) in basis.iter().enumerate() {
                    next[d + 1] = f.add(&next[d + 1], c);
                    next[d] = f.sub(&next[d], &f.mul(c, xj));
                }
                basis = next;
                denom = f.mul(&denom, &f.sub(xi, xj));
            }
            let scale = f.mul(yi, &f.inv(&denom).expect("distinct nodes"));
            for (o, c) in out.iter_mut().zip(&basis) {
                *o = f.add(o, &f.mul(&scale, c));
            }
        }
        out
    }
}

/// Whether binary forms of degree `m` (coefficients against
/// `u1^(m-i) u2^i`) have no common zero on the projective line.
pub fn binary_forms_coprime<F: Field>(f: &F, forms: &[Vec<F::Elem>]) -> bool {
    // common zero at (0:1) means every coefficient of u2^m vanishes
    if forms.iter().all(|c| c.last().is_none_or(|x| f.is_zero(x))) {
        return false;
    }
    // affine roots: dehomogenize with u1 = 1, t = u2
    let mut g: Vec<F::Elem> = Vec::new();
    for c in forms {
        g = univariate::gcd(f, &g, c);
        if g.len() == 1 {
            return true;
        }
    }
    g.len() <= 1 && !g.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn mult_map_shapes() {
        let f = fp();
        let m = mult_map(&f, 0, 3);
        assert_eq!(m, Matrix::identity(&f, 4));
        let m = mult_map(&f, 1, 1);
        assert_eq!(m.to_rows(), vec![vec![1, 0, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 0, 1]]);
        for p in 0..=6 {
            for q in 0..=6 {
                assert_eq!(mult_map(&f, p, q).rank(&f), p + q + 1);
            }
        }
    }

    #[test]
    fn sym_power_of_diagonal() {
        let f = fp();
        let g = Matrix::from_rows(2, vec![vec![2, 0], vec![0, 3]]);
        let s = sym_power(&f, &g, 3);
        let expected: Vec<u64> = vec![8, 12, 18, 27];
        for i in 0..4 {
            assert_eq!(s[(i, i)], expected[i]);
        }
        assert_eq!(sym_power(&f, &Matrix::identity(&f, 2), 4), Matrix::identity(&f, 5));
    }

    #[test]
    fn derivative_of_identity_is_euler() {
        let f = fp();
        let d = sym_power_derivative(&f, &Matrix::identity(&f, 2), 5);
        assert_eq!(d, Matrix::identity(&f, 6).scale(&f, &5));
        assert!(sym_power_derivative(&f, &Matrix::zeros(&f, 2, 2), 3).is_zero(&f));
    }

    #[test]
    fn p_equal_one_is_never_surjective() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in 0..4 {
            let lambda = vec![f.random_nonzero(&mut rng), f.random(&mut rng)];
            assert!(!hyperplane_mult_surjective(&f, &lambda, q).unwrap());
        }
        assert_eq!(
            hyperplane_mult_surjective(&f, &[0, 0, 0], 1),
            Err(BinaryError::ZeroFunctional)
        );
    }

    #[test]
    fn gcd_and_interpolation() {
        let f = fp();
        // (t-1)(t-2) and (t-1)(t-3)
        let a = vec![2, f.from_i64(-3), 1];
        let b = vec![3, f.from_i64(-4), 1];
        assert_eq!(univariate::gcd(&f, &a, &b), vec![f.from_i64(-1), 1]);
        let xs = vec![0, 1, 2];
        let ys: Vec<u64> = xs.iter().map(|&x| (x * x + 2 * x + 5) % DEFAULT_PRIME).collect();
        assert_eq!(univariate::interpolate(&f, &xs, &ys), vec![5, 2, 1]);
    }

    #[test]
    fn coprimality_of_binary_forms() {
        let f = fp();
        // u1 and u2 share no zero; u1*u2 and u2^2 share (1:0)
        assert!(binary_forms_coprime(&f, &[vec![1, 0], vec![0, 1]]));
        assert!(!binary_forms_coprime(&f, &[vec![0, 1, 0], vec![0, 0, 1]]));
        // u1^2 and u1*u2 share (0:1)
        assert!(!binary_forms_coprime(&f, &[vec![1, 0, 0], vec![0, 1, 0]]));
    }
}
