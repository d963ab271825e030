//! Rao–Skiti data `A = (F | H)`: a banded block `F_{ij} = f_{j-i}` built
//! from `f_0..f_n` and a persymmetric block `H_{ij} = h_{i+j}` built from
//! generators `h_0..h_{n+2k-2}` (all indices 0-based).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::binary::{binary_forms_coprime, mult_map, sym_power, sym_power_derivative, univariate};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::monad::{h0_restricted, LinearFormMatrix, MonadError};
use crate::poly::{solve_subspace, HomogeneousForm, PolyError, SubspaceParam};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RsError {
    #[error("the forms f_0..f_n are linearly dependent")]
    DependentF,
    #[error("the minor certificate needs n = 1, got n = {0}")]
    NotALine(usize),
    #[error("field of characteristic {characteristic} cannot supply {needed} distinct nodes")]
    FieldTooSmall { needed: usize, characteristic: u64 },
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error(transparent)]
    Monad(#[from] MonadError),
}

/// Linear forms `f_0..f_n` and generators `h_0..h_{n+2k-2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsDatum<E> {
    pub n: usize,
    pub k: usize,
    pub f: Vec<HomogeneousForm<E>>,
    pub h: Vec<HomogeneousForm<E>>,
}

impl<E: Clone> RsDatum<E> {
    pub fn new(
        n: usize,
        k: usize,
        f: Vec<HomogeneousForm<E>>,
        h: Vec<HomogeneousForm<E>>,
    ) -> Result<Self, RsError> {
        if n == 0 || k == 0 {
            return Err(RsError::Malformed("n and k must be positive".into()));
        }
        if f.len() != n + 1 || h.len() != n + 2 * k - 1 {
            return Err(RsError::Malformed(format!(
                "expected {} forms f and {} generators h",
                n + 1,
                n + 2 * k - 1
            )));
        }
        if f.iter().chain(&h).any(|x| x.degree() != 1 || x.nvars() != 2 * n + 2) {
            return Err(RsError::Malformed(format!(
                "forms must be linear in {} variables",
                2 * n + 2
            )));
        }
        Ok(RsDatum { n, k, f, h })
    }

    pub fn nvars(&self) -> usize {
        2 * self.n + 2
    }

    /// Coordinates: coefficients of `f_0..f_n`, then of `h_0..`.
    pub fn to_vector(&self) -> Vec<E> {
        self.f
            .iter()
            .chain(&self.h)
            .flat_map(|x| x.coeffs().iter().cloned())
            .collect()
    }

    fn coefficient_matrix(forms: &[HomogeneousForm<E>], nvars: usize) -> Matrix<E> {
        Matrix::from_rows(nvars, forms.iter().map(|x| x.coeffs().to_vec()).collect())
    }

    /// Rows are the coefficient vectors of `f_0..f_n`.
    pub fn f_matrix(&self) -> Matrix<E> {
        Self::coefficient_matrix(&self.f, self.nvars())
    }

    /// Rows are the coefficient vectors of the generators `h_m`.
    pub fn h_matrix(&self) -> Matrix<E> {
        Self::coefficient_matrix(&self.h, self.nvars())
    }

    fn from_matrices(n: usize, k: usize, fm: &Matrix<E>, hm: &Matrix<E>) -> Self {
        RsDatum {
            n,
            k,
            f: fm.to_rows().into_iter().map(HomogeneousForm::linear).collect(),
            h: hm.to_rows().into_iter().map(HomogeneousForm::linear).collect(),
        }
    }

    pub fn to_json<F: Field<Elem = E>>(&self, fl: &F) -> Value {
        let forms = |v: &[HomogeneousForm<E>]| -> Vec<Vec<Value>> {
            v.iter().map(|x| x.coeffs().iter().map(|c| fl.to_json(c)).collect()).collect()
        };
        json!({ "n": self.n, "k": self.k, "f": forms(&self.f), "h": forms(&self.h) })
    }

    pub fn from_json<F: Field<Elem = E>>(fl: &F, value: &Value) -> Result<Self, RsError> {
        let bad = |m: String| RsError::Malformed(m);
        let nat = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(format!("missing natural `{name}`")))
        };
        let forms = |name: &str| -> Result<Vec<HomogeneousForm<E>>, RsError> {
            value
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("missing array `{name}`")))?
                .iter()
                .map(|row| {
                    let coeffs = row
                        .as_array()
                        .ok_or_else(|| bad(format!("`{name}` entries must be arrays")))?
                        .iter()
                        .map(|c| fl.from_json(c).map_err(|e| bad(e.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(HomogeneousForm::linear(coeffs))
                })
                .collect()
        };
        Self::new(nat("n")?, nat("k")?, forms("f")?, forms("h")?)
    }
}

/// `(2n+2k)(2n+2)`, the dimension of the space of pairs `(f, h)`.
pub fn parameter_dim(n: usize, k: usize) -> usize {
    (2 * n + 2 * k) * (2 * n + 2)
}

/// `2n+2k+4 = dim GL_2 + 1 + dim S^{2n+2k-2}`.
pub fn group_dim(n: usize, k: usize) -> usize {
    2 * n + 2 * k + 4
}

/// The `k × (len - k + 1)` matrix with entry `(i, j) = h_{i+j}`.
pub fn persymmetric_from_generators<E: Clone>(
    h: &[HomogeneousForm<E>],
    k: usize,
) -> Vec<Vec<HomogeneousForm<E>>> {
    assert!(k >= 1 && h.len() >= k, "need at least k generators");
    let width = h.len() + 1 - k;
    (0..k)
        .map(|i| (0..width).map(|j| h[i + j].clone()).collect())
        .collect()
}

/// `A = (F | H)`.
pub fn build_rs<F: Field>(
    fl: &F,
    d: &RsDatum<F::Elem>,
) -> Result<LinearFormMatrix<F::Elem>, RsError> {
    if d.f_matrix().rank(fl) != d.n + 1 {
        return Err(RsError::DependentF);
    }
    Ok(build_unchecked(fl, d))
}

fn build_unchecked<F: Field>(fl: &F, d: &RsDatum<F::Elem>) -> LinearFormMatrix<F::Elem> {
    let width = d.n + d.k;
    let nvars = d.nvars();
    let zero = HomogeneousForm::zero(fl, nvars, 1);
    let h = persymmetric_from_generators(&d.h, d.k);
    LinearFormMatrix::from_fn(fl, d.k, 2 * width, nvars, |i, c| {
        if c < width {
            match c.checked_sub(i) {
                Some(s) if s <= d.n => d.f[s].clone(),
                _ => zero.clone(),
            }
        } else {
            h[i][c - width].clone()
        }
    })
}

/// The `H` block assembled from `mu_*`: entry `(i, j)` is
/// `sum_m mult_map(k-1, n+k-1)[m, (i, j)] h_m`.
pub fn h_block_from_mult_map<F: Field>(
    fl: &F,
    d: &RsDatum<F::Elem>,
) -> Vec<Vec<HomogeneousForm<F::Elem>>> {
    let (p, q) = (d.k - 1, d.n + d.k - 1);
    let mu = mult_map(fl, p, q);
    (0..=p)
        .map(|i| {
            (0..=q)
                .map(|j| {
                    let col = i * (q + 1) + j;
                    let mut acc = HomogeneousForm::zero(fl, d.nvars(), 1);
                    for (m, hm) in d.h.iter().enumerate() {
                        if !fl.is_zero(&mu[(m, col)]) {
                            acc = acc.add(fl, &hm.scale(fl, &mu[(m, col)]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// The `F` block assembled from `mu^*` on dual bases: entry `(a, c)` is
/// `sum_s mult_map(k-1, n)[c, (a, s)] f_s`.
pub fn f_block_from_mult_map<F: Field>(
    fl: &F,
    d: &RsDatum<F::Elem>,
) -> Vec<Vec<HomogeneousForm<F::Elem>>> {
    let (p, q) = (d.k - 1, d.n);
    let mu = mult_map(fl, p, q);
    (0..=p)
        .map(|a| {
            (0..d.n + d.k)
                .map(|c| {
                    let mut acc = HomogeneousForm::zero(fl, d.nvars(), 1);
                    for (s, fs) in d.f.iter().enumerate() {
                        let entry = &mu[(c, a * (q + 1) + s)];
                        if !fl.is_zero(entry) {
                            acc = acc.add(fl, &fs.scale(fl, entry));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `f_s = x_s` and `H_eps` with generators `eps y_1, 0, ..., 0, y_0, ...,
/// y_n, 0, ..., 0, eps y_1` (`y_m` at index `k-1+m`). The terms are added,
/// so overlapping positions (small `k`) accumulate.
pub fn epsilon_datum<F: Field>(fl: &F, n: usize, k: usize, eps: &F::Elem) -> RsDatum<F::Elem> {
    assert!(n >= 1 && k >= 1);
    let nvars = 2 * n + 2;
    let x = |i: usize| HomogeneousForm::variable(fl, nvars, i);
    let y = |i: usize| HomogeneousForm::variable(fl, nvars, n + 1 + i);
    let mut h = vec![HomogeneousForm::zero(fl, nvars, 1); n + 2 * k - 1];
    for m in 0..=n {
        h[k - 1 + m] = h[k - 1 + m].add(fl, &y(m));
    }
    let eps_y1 = y(1).scale(fl, eps);
    h[0] = h[0].add(fl, &eps_y1);
    let last = n + 2 * k - 2;
    h[last] = h[last].add(fl, &eps_y1);
    RsDatum {
        n,
        k,
        f: (0..=n).map(x).collect(),
        h,
    }
}

/// The vectors `v_1..v_k` spanning the degree-1 syzygies of `A_eps`:
/// `v_i` carries `-y_0..-y_n` from slot `k-i` and `x_0..x_n` from slot
/// `n+k+i-1`, plus `-eps y_1` in slot `0` (for `i = 1`) and in slot
/// `n+k-1` (for `i = k`).
pub fn expected_syzygy_basis<F: Field>(
    fl: &F,
    n: usize,
    k: usize,
    eps: &F::Elem,
) -> Vec<Vec<HomogeneousForm<F::Elem>>> {
    let nvars = 2 * n + 2;
    let width = n + k;
    let x = |i: usize| HomogeneousForm::variable(fl, nvars, i);
    let y = |i: usize| HomogeneousForm::variable(fl, nvars, n + 1 + i);
    let minus_eps_y1 = y(1).scale(fl, &fl.neg(eps));
    (1..=k)
        .map(|i| {
            let mut v = vec![HomogeneousForm::zero(fl, nvars, 1); 2 * width];
            for m in 0..=n {
                v[k - i + m] = y(m).neg(fl);
                v[width + i - 1 + m] = x(m);
            }
            if i == 1 {
                v[0] = v[0].add(fl, &minus_eps_y1);
            }
            if i == k {
                v[width - 1] = v[width - 1].add(fl, &minus_eps_y1);
            }
            v
        })
        .collect()
}

/// `L = {f_0 = ... = f_n = 0}`.
pub fn distinguished_subspace<F: Field>(
    fl: &F,
    d: &RsDatum<F::Elem>,
) -> Result<SubspaceParam<F::Elem>, RsError> {
    solve_subspace(fl, &d.f).map_err(|e| match e {
        PolyError::RankDeficient { .. } => RsError::DependentF,
        other => RsError::Monad(other.into()),
    })
}

/// Uniform random data, redrawn while `f` is dependent.
pub fn random_datum<F: Field>(fl: &F, n: usize, k: usize, seed: u64) -> RsDatum<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = 2 * n + 2;
    loop {
        let f: Vec<_> = (0..=n).map(|_| HomogeneousForm::random(fl, nvars, 1, &mut rng)).collect();
        let h = (0..n + 2 * k - 1)
            .map(|_| HomogeneousForm::random(fl, nvars, 1, &mut rng))
            .collect();
        let d = RsDatum { n, k, f, h };
        if d.f_matrix().rank(fl) == n + 1 {
            return d;
        }
    }
}

/// A restricted section count that could not be computed, kept for the
/// report instead of aborting the survey.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedSubspace {
    pub trial: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstabilityReport {
    pub n: usize,
    pub k: usize,
    /// `h^0(E|_L)` at the distinguished subspace.
    pub distinguished: usize,
    /// Counts on sampled `n`-dimensional subspaces.
    pub sampled: Vec<usize>,
    /// Trials whose count reached `n+k`.
    pub counterexamples: Vec<usize>,
    pub skipped: Vec<SkippedSubspace>,
}

impl InstabilityReport {
    pub fn holds(&self) -> bool {
        self.distinguished == self.n + self.k && self.counterexamples.is_empty()
    }
}

/// Counts of `h^0(E|_L')` on `trials` random subspaces of the given vector
/// dimension. Rank drops on a subspace are recorded, not fatal.
pub fn sample_restricted_counts<F: Field>(
    fl: &F,
    a: &LinearFormMatrix<F::Elem>,
    fiber: usize,
    trials: usize,
    seed: u64,
) -> Vec<Result<usize, MonadError>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let sub = SubspaceParam::random(fl, a.nvars(), fiber, &mut rng);
            h0_restricted(fl, a, &sub, rng.gen())
        })
        .collect()
}

/// `h^0(E|_L) = n+k` at the distinguished `L` and `< n+k` on sampled
/// `n`-planes.
pub fn max_instability_check<F: Field>(
    fl: &F,
    d: &RsDatum<F::Elem>,
    trials: usize,
    seed: u64,
) -> Result<InstabilityReport, RsError> {
    let a = build_rs(fl, d)?;
    let l = distinguished_subspace(fl, d)?;
    let distinguished = h0_restricted(fl, &a, &l, seed)?;
    let mut sampled = Vec::new();
    let mut counterexamples = Vec::new();
    let mut skipped = Vec::new();
    for (trial, count) in sample_restricted_counts(fl, &a, d.n + 1, trials, seed ^ 0x5eed).into_iter().enumerate() {
        match count {
            Ok(c) => {
                if c >= d.n + d.k {
                    counterexamples.push(trial);
                }
                sampled.push(c);
            }
            Err(e) => skipped.push(SkippedSubspace {
                trial,
                reason: e.to_string(),
            }),
        }
    }
    Ok(InstabilityReport {
        n: d.n,
        k: d.k,
        distinguished,
        sampled,
        counterexamples,
        skipped,
    })
}

/// For `n = 1`: whether the maximal minors of `H` restricted to the line
/// `L` have no common zero. Off `L` some `f_s` is nonzero and the banded
/// `F` block alone has rank `k`, so a `true` result proves full rank
/// everywhere.
pub fn line_minor_certificate_n1<F: Field>(fl: &F, d: &RsDatum<F::Elem>) -> Result<bool, RsError> {
    if d.n != 1 {
        return Err(RsError::NotALine(d.n));
    }
    let k = d.k;
    let p = fl.characteristic();
    if p != 0 && (p as u128) <= k as u128 {
        return Err(RsError::FieldTooSmall {
            needed: k + 1,
            characteristic: p,
        });
    }
    let line = distinguished_subspace(fl, d)?;
    let h_rows = persymmetric_from_generators(&d.h, k);
    let h_on_line: Vec<Vec<HomogeneousForm<F::Elem>>> = h_rows
        .iter()
        .map(|row| row.iter().map(|x| x.restrict(fl, &line)).collect())
        .collect();
    // minors are binary forms of degree k; sample them at (1 : t), t = 0..=k
    let nodes: Vec<F::Elem> = (0..=k).map(|t| fl.from_usize(t)).collect();
    let width = k + 1;
    let rows: Vec<usize> = (0..k).collect();
    let mut values = vec![Vec::with_capacity(nodes.len()); width];
    for t in &nodes {
        let point = [fl.one(), t.clone()];
        let m = Matrix::from_fn(k, width, |i, j| h_on_line[i][j].evaluate(fl, &point));
        for (omit, vals) in values.iter_mut().enumerate() {
            let cols: Vec<usize> = (0..width).filter(|&c| c != omit).collect();
            vals.push(m.submatrix(&rows, &cols).det(fl));
        }
    }
    let minors: Vec<Vec<F::Elem>> = values
        .iter()
        .map(|vals| univariate::interpolate(fl, &nodes, vals))
        .collect();
    Ok(binary_forms_coprime(fl, &minors))
}

/// `(g, t, u)` with `g ∈ GL_2`, `t ≠ 0`, `u` a functional on
/// `S^{2n+2k-2} U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsGroupElement<E> {
    pub g: Matrix<E>,
    pub t: E,
    pub u: Vec<E>,
}

impl<E: Clone> RsGroupElement<E> {
    pub fn identity<F: Field<Elem = E>>(fl: &F, n: usize, k: usize) -> Self {
        RsGroupElement {
            g: Matrix::identity(fl, 2),
            t: fl.one(),
            u: vec![fl.zero(); 2 * n + 2 * k - 1],
        }
    }

    /// `(rho · id, rho^{-n}, 0)`.
    pub fn root_of_unity<F: Field<Elem = E>>(fl: &F, rho: &E, n: usize, k: usize) -> Self {
        let inv = fl.inv(rho).expect("rho must be nonzero");
        RsGroupElement {
            g: Matrix::identity(fl, 2).scale(fl, rho),
            t: fl.pow(&inv, n as u64),
            u: vec![fl.zero(); 2 * n + 2 * k - 1],
        }
    }

    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(fl: &F, n: usize, k: usize, rng: &mut R) -> Self {
        let g = loop {
            let m = Matrix::from_fn(2, 2, |_, _| fl.random(rng));
            if !fl.is_zero(&m.det(fl)) {
                break m;
            }
        };
        RsGroupElement {
            g,
            t: fl.random_nonzero(rng),
            u: (0..2 * n + 2 * k - 1).map(|_| fl.random(rng)).collect(),
        }
    }
}

/// `T_{j,i} = u_{i+j}`, the matrix of `(u ⊗ -) ∘ mu_*` on
/// `S^{n+2k-2} U -> (S^n U)^*`, read off the multiplication map.
fn contraction_matrix<F: Field>(fl: &F, u: &[F::Elem], n: usize, k: usize) -> Matrix<F::Elem> {
    let big = n + 2 * k - 2;
    let mu = mult_map(fl, n, big);
    let u_pulled = mu.transpose().mul_vec(fl, u);
    Matrix::from_fn(big + 1, n + 1, |j, i| u_pulled[i * (big + 1) + j].clone())
}

/// `f' = t f ∘ (S^n g)^*`, `h' = t (h - (u ⊗ f) ∘ mu_*) ∘ S^{n+2k-2}(g^{-1})`.
pub fn apply_group<F: Field>(
    fl: &F,
    g: &RsGroupElement<F::Elem>,
    d: &RsDatum<F::Elem>,
) -> RsDatum<F::Elem> {
    let (n, k) = (d.n, d.k);
    let fm = d.f_matrix();
    let hm = d.h_matrix();
    let f_new = sym_power(fl, &g.g, n).mul(fl, &fm).scale(fl, &g.t);
    let shifted = hm.sub(fl, &contraction_matrix(fl, &g.u, n, k).mul(fl, &fm));
    let g_inv = g.g.inverse(fl).expect("g must be invertible");
    let h_new = sym_power(fl, &g_inv, n + 2 * k - 2)
        .transpose()
        .mul(fl, &shifted)
        .scale(fl, &g.t);
    RsDatum::from_matrices(n, k, &f_new, &h_new)
}

/// Matrix of the linearized action at `d`. Lie parameters: `δg` (row-major
/// 2×2), `δt`, then `δu_0..δu_{2n+2k-2}`.
pub fn tangent_map<F: Field>(fl: &F, d: &RsDatum<F::Elem>) -> Matrix<F::Elem> {
    let (n, k) = (d.n, d.k);
    let fm = d.f_matrix();
    let hm = d.h_matrix();
    let flatten = |df: &Matrix<F::Elem>, dh: &Matrix<F::Elem>| -> Vec<F::Elem> {
        df.data().iter().chain(dh.data()).cloned().collect()
    };
    let mut columns = Vec::with_capacity(group_dim(n, k));
    for r in 0..2 {
        for s in 0..2 {
            let mut xi = Matrix::zeros(fl, 2, 2);
            xi[(r, s)] = fl.one();
            let df = sym_power_derivative(fl, &xi, n).mul(fl, &fm);
            let dh = sym_power_derivative(fl, &xi, n + 2 * k - 2)
                .transpose()
                .mul(fl, &hm)
                .neg(fl);
            columns.push(flatten(&df, &dh));
        }
    }
    columns.push(flatten(&fm, &hm));
    for m in 0..2 * n + 2 * k - 1 {
        let mut du = vec![fl.zero(); 2 * n + 2 * k - 1];
        du[m] = fl.one();
        let dh = contraction_matrix(fl, &du, n, k).mul(fl, &fm).neg(fl);
        columns.push(flatten(&Matrix::zeros(fl, n + 1, d.nvars()), &dh));
    }
    Matrix::from_rows(parameter_dim(n, k), columns).transpose()
}

pub fn orbit_rank<F: Field>(fl: &F, d: &RsDatum<F::Elem>) -> usize {
    tangent_map(fl, d).rank(fl)
}

/// The scalar matrices `(Phi_0, Phi_1)` of the monad isomorphism induced by
/// `g`: `Phi_0 = ((D, D tau), (0, S^{n+k-1} g))` with `D = S^{n+k-1}(g^{-1})^t`
/// and `tau_{ac} = u_{a+c}`, and `Phi_1 = t S^{k-1}(g^{-1})^t`.
pub fn monad_isomorphism<F: Field>(
    fl: &F,
    g: &RsGroupElement<F::Elem>,
    n: usize,
    k: usize,
) -> (Matrix<F::Elem>, Matrix<F::Elem>) {
    let width = n + k;
    let g_inv = g.g.inverse(fl).expect("g must be invertible");
    let dual = sym_power(fl, &g_inv, width - 1).transpose();
    let direct = sym_power(fl, &g.g, width - 1);
    let tau = Matrix::from_fn(width, width, |a, c| g.u[a + c].clone());
    let dual_tau = dual.mul(fl, &tau);
    let phi0 = Matrix::from_fn(2 * width, 2 * width, |r, c| match (r < width, c < width) {
        (true, true) => dual[(r, c)].clone(),
        (true, false) => dual_tau[(r, c - width)].clone(),
        (false, true) => fl.zero(),
        (false, false) => direct[(r - width, c - width)].clone(),
    });
    let phi1 = sym_power(fl, &g_inv, k - 1).transpose().scale(fl, &g.t);
    (phi0, phi1)
}
