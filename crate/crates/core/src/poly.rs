//! Homogeneous forms in a fixed number of variables.
//!
//! Monomials of a given degree are ordered lexicographically with
//! `x0 > x1 > ...`, so `x0^d` has index 0 and `x_{N-1}^d` is last. For the
//! projective space of dimension `2n+1` the variables `x_0..x_n` occupy
//! indices `0..=n` and `y_0..y_n` occupy `n+1..=2n+1`.

use std::collections::HashMap;

use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("linear forms are dependent (rank {rank}, expected {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed form: {0}")]
    Malformed(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn num_monomials(nvars: usize, d: usize) -> usize {
    if nvars == 0 {
        return usize::from(d == 0);
    }
    binomial(nvars - 1 + d, d)
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Exponent vectors of degree `d` in lexicographic order.
pub fn monomial_basis(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    assert!(nvars >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(num_monomials(nvars, d));
    let mut current = vec![0u32; nvars];
    fill(&mut out, &mut current, 0, d as u32);
    out
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// Monomials of one degree with a reverse index and, for each variable, the
/// index of `x_m * mono` in the next degree.
#[derive(Debug, Clone)]
pub struct Monomials {
    pub nvars: usize,
    pub degree: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Monomials {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let exps = monomial_basis(nvars, degree);
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Monomials {
            nvars,
            degree,
            exps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.iter().map(|e| e.as_slice())
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// `table[i][m]` is the index, in degree `degree + 1`, of variable `m`
    /// times monomial `i`.
    pub fn times_variable_table(&self, next: &Monomials) -> Vec<Vec<usize>> {
        assert_eq!(next.degree, self.degree + 1);
        assert_eq!(next.nvars, self.nvars);
        self.exps
            .iter()
            .map(|e| {
                let mut e = e.clone();
                (0..self.nvars)
                    .map(|m| {
                        e[m] += 1;
                        let idx = next.index[&e];
                        e[m] -= 1;
                        idx
                    })
                    .collect()
            })
            .collect()
    }
}

/// A homogeneous form, stored as coefficients against [`monomial_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousForm<E> {
    nvars: usize,
    degree: usize,
    coeffs: Vec<E>,
}

impl<E: Clone> HomogeneousForm<E> {
    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<E>) -> Result<Self, PolyError> {
        let expected = num_monomials(nvars, degree);
        if coeffs.len() != expected {
            return Err(PolyError::Shape(format!(
                "{} coefficients for {expected} monomials",
                coeffs.len()
            )));
        }
        Ok(HomogeneousForm {
            nvars,
            degree,
            coeffs,
        })
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, nvars: usize, degree: usize) -> Self {
        HomogeneousForm {
            nvars,
            degree,
            coeffs: vec![f.zero(); num_monomials(nvars, degree)],
        }
    }

    /// The coordinate function `x_i`.
    pub fn variable<F: Field<Elem = E>>(f: &F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut form = Self::zero(f, nvars, 1);
        form.coeffs[i] = f.one();
        form
    }

    /// A linear form `sum c_i x_i`.
    pub fn linear(coeffs: Vec<E>) -> Self {
        HomogeneousForm {
            nvars: coeffs.len(),
            degree: 1,
            coeffs,
        }
    }

    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(
        f: &F,
        nvars: usize,
        degree: usize,
        rng: &mut R,
    ) -> Self {
        HomogeneousForm {
            nvars,
            degree,
            coeffs: (0..num_monomials(nvars, degree)).map(|_| f.random(rng)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.coeffs.iter().all(|c| f.is_zero(c))
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coefficient<F: Field<Elem = E>>(&self, f: &F, exps: &[u32]) -> E {
        let basis = Monomials::new(self.nvars, self.degree);
        basis
            .index_of(exps)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(|| f.zero())
    }

    fn check_same_space(&self, other: &Self) {
        assert_eq!(
            (self.nvars, self.degree),
            (other.nvars, other.degree),
            "forms live in different spaces"
        );
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.check_same_space(other);
        HomogeneousForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.check_same_space(other);
        HomogeneousForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        HomogeneousForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(c, a)).collect(),
        }
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        self.scale(f, &f.neg(&f.one()))
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "forms in different rings");
        let lhs = monomial_basis(self.nvars, self.degree);
        let rhs = monomial_basis(other.nvars, other.degree);
        let target = Monomials::new(self.nvars, self.degree + other.degree);
        let mut coeffs = vec![f.zero(); target.len()];
        let mut buf = vec![0u32; self.nvars];
        for (a, ea) in self.coeffs.iter().zip(&lhs) {
            if f.is_zero(a) {
                continue;
            }
            for (b, eb) in other.coeffs.iter().zip(&rhs) {
                if f.is_zero(b) {
                    continue;
                }
                for (slot, (x, y)) in buf.iter_mut().zip(ea.iter().zip(eb)) {
                    *slot = x + y;
                }
                let idx = target.index_of(&buf).expect("product monomial in basis");
                coeffs[idx] = f.add(&coeffs[idx], &f.mul(a, b));
            }
        }
        HomogeneousForm {
            nvars: self.nvars,
            degree: target.degree,
            coeffs,
        }
    }

    pub fn evaluate<F: Field<Elem = E>>(&self, f: &F, point: &[E]) -> E {
        assert_eq!(point.len(), self.nvars, "point has the wrong length");
        if self.degree == 1 {
            return self
                .coeffs
                .iter()
                .zip(point)
                .fold(f.zero(), |acc, (c, x)| f.add(&acc, &f.mul(c, x)));
        }
        let mut acc = f.zero();
        for (c, exps) in self.coeffs.iter().zip(monomial_basis(self.nvars, self.degree)) {
            if f.is_zero(c) {
                continue;
            }
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&exps) {
                if e > 0 {
                    term = f.mul(&term, &f.pow(x, e as u64));
                }
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    /// Pulls the form back along `x = P y`.
    pub fn restrict<F: Field<Elem = E>>(&self, f: &F, sub: &SubspaceParam<E>) -> Self {
        assert_eq!(self.nvars, sub.ambient_dim(), "subspace lives elsewhere");
        let m = sub.fiber_dim();
        let images: Vec<HomogeneousForm<E>> = (0..self.nvars)
            .map(|i| HomogeneousForm::linear(sub.matrix().row(i).to_vec()))
            .collect();
        if self.degree == 1 {
            let mut coeffs = vec![f.zero(); m];
            for (c, image) in self.coeffs.iter().zip(&images) {
                f.sub_scaled(&mut coeffs, &f.neg(c), &image.coeffs);
            }
            return HomogeneousForm::linear(coeffs);
        }
        let mut out = HomogeneousForm::zero(f, m, self.degree);
        for (c, exps) in self.coeffs.iter().zip(monomial_basis(self.nvars, self.degree)) {
            if f.is_zero(c) {
                continue;
            }
            let mut term = HomogeneousForm::from_coeffs(m, 0, vec![c.clone()]).expect("constant");
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(f, &images[i]);
                }
            }
            out = out.add(f, &term);
        }
        out
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        json!({
            "nvars": self.nvars,
            "degree": self.degree,
            "coeffs": self.coeffs.iter().map(|c| f.format(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json<F: Field<Elem = E>>(f: &F, value: &Value) -> Result<Self, PolyError> {
        let field = |name: &str| {
            value
                .get(name)
                .ok_or_else(|| PolyError::Malformed(format!("missing `{name}`")))
        };
        let as_usize = |v: &Value, name: &str| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| PolyError::Malformed(format!("`{name}` is not a natural number")))
        };
        let nvars = as_usize(field("nvars")?, "nvars")?;
        let degree = as_usize(field("degree")?, "degree")?;
        let coeffs = field("coeffs")?
            .as_array()
            .ok_or_else(|| PolyError::Malformed("`coeffs` is not an array".into()))?
            .iter()
            .map(|c| f.from_json(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coeffs(nvars, degree, coeffs)
    }
}

/// A linear subspace of the ambient coordinate space given by `x = P y`,
/// with `P` of full column rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceParam<E> {
    p: Matrix<E>,
}

impl<E: Clone> SubspaceParam<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, p: Matrix<E>) -> Result<Self, PolyError> {
        let rank = p.rank(f);
        if rank != p.cols() {
            return Err(PolyError::RankDeficient {
                rank,
                expected: p.cols(),
            });
        }
        Ok(SubspaceParam { p })
    }

    /// Subspace spanned by the given column vectors.
    pub fn from_columns<F: Field<Elem = E>>(f: &F, columns: &[Vec<E>]) -> Result<Self, PolyError> {
        let ambient = columns.first().map(Vec::len).unwrap_or(0);
        Self::new(f, Matrix::from_rows(ambient, columns.to_vec()).transpose())
    }

    /// A uniformly random subspace of the given vector dimension.
    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(
        f: &F,
        ambient: usize,
        fiber: usize,
        rng: &mut R,
    ) -> Self {
        loop {
            let p = Matrix::from_fn(ambient, fiber, |_, _| f.random(rng));
            if let Ok(sub) = Self::new(f, p) {
                return sub;
            }
        }
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.p.rows()
    }

    /// Vector dimension of the subspace (projective dimension plus one).
    pub fn fiber_dim(&self) -> usize {
        self.p.cols()
    }

    /// Image of a fiber coordinate vector in the ambient space.
    pub fn push_forward<F: Field<Elem = E>>(&self, f: &F, y: &[E]) -> Vec<E> {
        self.p.mul_vec(f, y)
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.p.cols()).map(|j| self.p.column(j)).collect()
    }
}

/// The common zero locus of independent linear forms, as a parameterized
/// subspace. Columns of `P` form the reduced echelon kernel basis.
pub fn solve_subspace<F: Field>(
    f: &F,
    forms: &[HomogeneousForm<F::Elem>],
) -> Result<SubspaceParam<F::Elem>, PolyError> {
    let nvars = forms.first().map(|l| l.nvars()).ok_or_else(|| {
        PolyError::Shape("no forms given".into())
    })?;
    if forms.iter().any(|l| l.degree() != 1 || l.nvars() != nvars) {
        return Err(PolyError::Shape("expected linear forms in a common ring".into()));
    }
    let coeffs = Matrix::from_rows(nvars, forms.iter().map(|l| l.coeffs().to_vec()).collect());
    let rank = coeffs.rank(f);
    if rank != forms.len() {
        return Err(PolyError::RankDeficient {
            rank,
            expected: forms.len(),
        });
    }
    SubspaceParam::from_columns(f, &coeffs.kernel_basis(f))
}
