//! 't Hooft data `A = a · (D | D')` with `D = diag(l_j)`, `D' = diag(l'_j)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::monad::{sample_rank_evidence, syzygy_matrix, times_j, EvidenceMode, LinearFormMatrix};
use crate::poly::{num_monomials, HomogeneousForm, Monomials};

/// Attempts made by [`random_datum`] before giving up.
pub const MAX_DRAWS: usize = 32;

/// Points sampled per draw when screening random data for rank drops.
const SCREEN_TRIALS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThooftError {
    #[error("field of characteristic {characteristic} has fewer than {needed} distinct nonzero elements")]
    FieldTooSmall { needed: usize, characteristic: u64 },
    #[error("no admissible datum after {0} draws")]
    RetryLimit(usize),
    #[error("the repetition pattern needs k >= 3, got k = {0}")]
    WitnessNeedsK3(usize),
    #[error("malformed datum: {0}")]
    Malformed(String),
}

/// Scalar matrix `a` (k × (n+k)) and pairs of linear forms `(l_j, l'_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThooftDatum<E> {
    pub n: usize,
    pub k: usize,
    pub a: Matrix<E>,
    pub l: Vec<HomogeneousForm<E>>,
    pub lprime: Vec<HomogeneousForm<E>>,
}

impl<E: Clone> ThooftDatum<E> {
    pub fn new(
        n: usize,
        k: usize,
        a: Matrix<E>,
        l: Vec<HomogeneousForm<E>>,
        lprime: Vec<HomogeneousForm<E>>,
    ) -> Result<Self, ThooftError> {
        let width = n + k;
        if (a.rows(), a.cols()) != (k, width) {
            return Err(ThooftError::Malformed(format!(
                "a is {}×{}, expected {k}×{width}",
                a.rows(),
                a.cols()
            )));
        }
        if l.len() != width || lprime.len() != width {
            return Err(ThooftError::Malformed(format!("expected {width} pairs of forms")));
        }
        if l.iter().chain(&lprime).any(|x| x.degree() != 1 || x.nvars() != 2 * n + 2) {
            return Err(ThooftError::Malformed(format!(
                "forms must be linear in {} variables",
                2 * n + 2
            )));
        }
        Ok(ThooftDatum { n, k, a, l, lprime })
    }

    pub fn nvars(&self) -> usize {
        2 * self.n + 2
    }

    pub fn width(&self) -> usize {
        self.n + self.k
    }

    /// Dimension of the affine parameter space of data.
    pub fn parameter_dim(&self) -> usize {
        parameter_dim(self.n, self.k)
    }

    /// Coordinates: `a` row-major, then for each `j` the coefficients of
    /// `l_j` followed by those of `l'_j`.
    pub fn to_vector(&self) -> Vec<E> {
        let mut out = self.a.data().to_vec();
        for (l, lp) in self.l.iter().zip(&self.lprime) {
            out.extend_from_slice(l.coeffs());
            out.extend_from_slice(lp.coeffs());
        }
        out
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        let forms = |v: &[HomogeneousForm<E>]| -> Vec<Vec<Value>> {
            v.iter().map(|x| x.coeffs().iter().map(|c| f.to_json(c)).collect()).collect()
        };
        json!({
            "n": self.n,
            "k": self.k,
            "a": self.a.to_rows().iter().map(|r| r.iter().map(|c| f.to_json(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "l": forms(&self.l),
            "lprime": forms(&self.lprime),
        })
    }

    pub fn from_json<F: Field<Elem = E>>(f: &F, value: &Value) -> Result<Self, ThooftError> {
        let bad = |m: String| ThooftError::Malformed(m);
        let nat = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(format!("missing natural `{name}`")))
        };
        let grid = |name: &str| -> Result<Vec<Vec<E>>, ThooftError> {
            value
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("missing array `{name}`")))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad(format!("`{name}` rows must be arrays")))?
                        .iter()
                        .map(|c| f.from_json(c).map_err(|e| bad(e.to_string())))
                        .collect()
                })
                .collect()
        };
        let (n, k) = (nat("n")?, nat("k")?);
        let rows = grid("a")?;
        if rows.iter().any(|r| r.len() != n + k) {
            return Err(bad("rows of `a` must have n+k entries".into()));
        }
        let a = Matrix::from_rows(n + k, rows);
        let l = grid("l")?.into_iter().map(HomogeneousForm::linear).collect();
        let lprime = grid("lprime")?.into_iter().map(HomogeneousForm::linear).collect();
        Self::new(n, k, a, l, lprime)
    }
}

pub fn parameter_dim(n: usize, k: usize) -> usize {
    (n + k) * (k + 4 * n + 4)
}

/// Dimension of `G_{n,k}`: `k^2 + 4(n+k)`.
pub fn group_dim(n: usize, k: usize) -> usize {
    k * k + 4 * (n + k)
}

/// `A = a · (D | D')`.
pub fn build_thooft<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> LinearFormMatrix<F::Elem> {
    let width = d.width();
    LinearFormMatrix::from_fn(f, d.k, 2 * width, d.nvars(), |i, c| {
        let (j, form) = if c < width {
            (c, &d.l[c])
        } else {
            (c - width, &d.lprime[c - width])
        };
        form.scale(f, &d.a[(i, j)])
    })
}

/// The `n+k` columns of `J (D | D')^t`: column `j` has `l'_j` in slot `j`
/// and `-l_j` in slot `n+k+j`.
pub fn canonical_syzygies<F: Field>(
    f: &F,
    d: &ThooftDatum<F::Elem>,
) -> Vec<Vec<HomogeneousForm<F::Elem>>> {
    let width = d.width();
    (0..width)
        .map(|j| {
            let mut v = vec![HomogeneousForm::zero(f, d.nvars(), 1); 2 * width];
            v[j] = d.lprime[j].clone();
            v[width + j] = d.l[j].neg(f);
            v
        })
        .collect()
}

/// Rank of a family of vectors of forms of a common degree, over the field.
pub fn forms_rank<F: Field>(f: &F, vectors: &[Vec<HomogeneousForm<F::Elem>>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<F::Elem>> = vectors
        .iter()
        .map(|v| v.iter().flat_map(|x| x.coeffs().iter().cloned()).collect())
        .collect();
    let width = rows[0].len();
    Matrix::from_rows(width, rows).rank(f)
}

/// Index subsets of size `r` of `0..n`, in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    fn go(start: usize, n: usize, r: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < r - current.len() {
                break;
            }
            current.push(i);
            go(i + 1, n, r, current, out);
            current.pop();
        }
    }
    go(0, n, r, &mut current, &mut out);
    out
}

/// Whether every maximal (`rows × rows`) minor of `m` is nonzero.
pub fn all_maximal_minors_nonzero<F: Field>(f: &F, m: &Matrix<F::Elem>) -> bool {
    let rows: Vec<usize> = (0..m.rows()).collect();
    combinations(m.cols(), m.rows())
        .iter()
        .all(|cols| !f.is_zero(&m.submatrix(&rows, cols).det(f)))
}

fn forms_matrix<F: Field>(forms: &[HomogeneousForm<F::Elem>]) -> Matrix<F::Elem> {
    let nvars = forms[0].nvars();
    Matrix::from_rows(nvars, forms.iter().map(|l| l.coeffs().to_vec()).collect())
}

/// Whether the forms span an `(n+1)`-dimensional space in which every
/// `n+1` of them form a basis.
fn in_general_position<F: Field>(f: &F, forms: &[HomogeneousForm<F::Elem>], n: usize) -> bool {
    let m = forms_matrix::<F>(forms);
    if m.rank(f) != n + 1 {
        return false;
    }
    let all_cols: Vec<usize> = (0..m.cols()).collect();
    combinations(forms.len(), n + 1)
        .iter()
        .all(|rows| m.submatrix(rows, &all_cols).rank(f) == n + 1)
}

/// The structural argument for full rank everywhere: nonzero maximal minors
/// of `a`, the `l_j` in general position in an `(n+1)`-space `V`, the `l'_j`
/// likewise in `W`, and `V ⊕ W` the whole space of linear forms.
pub fn fullrank_certificate<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> bool {
    if !all_maximal_minors_nonzero(f, &d.a) {
        return false;
    }
    if !in_general_position(f, &d.l, d.n) || !in_general_position(f, &d.lprime, d.n) {
        return false;
    }
    let mut both = d.l.clone();
    both.extend(d.lprime.iter().cloned());
    forms_matrix::<F>(&both).rank(f) == d.nvars()
}

fn vandermonde_rows<F: Field>(f: &F, rows: usize, nodes: &[F::Elem]) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, nodes.len(), |i, j| f.pow(&nodes[j], i as u64))
}

fn check_nodes<F: Field>(f: &F, count: usize) -> Result<Vec<F::Elem>, ThooftError> {
    let p = f.characteristic();
    if p != 0 && (p as u128) <= count as u128 {
        return Err(ThooftError::FieldTooSmall {
            needed: count,
            characteristic: p,
        });
    }
    Ok((1..=count).map(|t| f.from_usize(t)).collect())
}

/// Moment-curve form `sum_i t^i z_{offset+i}` over `n+1` consecutive
/// variables.
fn moment_form<F: Field>(f: &F, nvars: usize, offset: usize, n: usize, t: &F::Elem) -> HomogeneousForm<F::Elem> {
    let mut coeffs = vec![f.zero(); nvars];
    for i in 0..=n {
        coeffs[offset + i] = f.pow(t, i as u64);
    }
    HomogeneousForm::linear(coeffs)
}

/// Deterministic datum with Vandermonde `a` (nodes `1..=n+k`) and forms on
/// the moment curves of `V = <x_0..x_n>` and `W = <y_0..y_n>`.
pub fn proof_witness_general<F: Field>(
    f: &F,
    n: usize,
    k: usize,
) -> Result<ThooftDatum<F::Elem>, ThooftError> {
    let nodes = check_nodes(f, n + k)?;
    let nvars = 2 * n + 2;
    let a = vandermonde_rows(f, k, &nodes);
    let l = nodes.iter().map(|t| moment_form(f, nvars, 0, n, t)).collect();
    let lprime = nodes.iter().map(|t| moment_form(f, nvars, n + 1, n, t)).collect();
    ThooftDatum::new(n, k, a, l, lprime)
}

/// The repetition pattern used to count degree-1 syzygies exactly:
/// `l_j = x_{j-1}` for `j <= n`, `x_{n-1}` for `j = n+1`, `x_n` beyond;
/// `l'_j = y_{j-1}` for `j <= n+1`, `y_{n-1}` for `j = n+2`, `y_n` beyond
/// (indices `j` 1-based). The matrix `a` is the Vandermonde one.
pub fn proof_witness_syz<F: Field>(
    f: &F,
    n: usize,
    k: usize,
) -> Result<ThooftDatum<F::Elem>, ThooftError> {
    if k < 3 {
        return Err(ThooftError::WitnessNeedsK3(k));
    }
    let nodes = check_nodes(f, n + k)?;
    let nvars = 2 * n + 2;
    let x = |i: usize| HomogeneousForm::variable(f, nvars, i);
    let y = |i: usize| HomogeneousForm::variable(f, nvars, n + 1 + i);
    let l = (1..=n + k)
        .map(|j| match j {
            j if j <= n => x(j - 1),
            j if j == n + 1 => x(n - 1),
            _ => x(n),
        })
        .collect();
    let lprime = (1..=n + k)
        .map(|j| match j {
            j if j <= n + 1 => y(j - 1),
            j if j == n + 2 => y(n - 1),
            _ => y(n),
        })
        .collect();
    ThooftDatum::new(n, k, vandermonde_rows(f, k, &nodes), l, lprime)
}

/// The pattern that rules out pure syzygies: `l_j = x_{j-1}` for
/// `j <= n+1` and `l_j = x_0 + ... + x_n` beyond, and the same in `y` for
/// `l'_j`. Vandermonde `a`.
pub fn proof_witness_vanishing<F: Field>(
    f: &F,
    n: usize,
    k: usize,
) -> Result<ThooftDatum<F::Elem>, ThooftError> {
    let nodes = check_nodes(f, n + k)?;
    let nvars = 2 * n + 2;
    let pattern = |offset: usize| -> Vec<HomogeneousForm<F::Elem>> {
        (0..n + k)
            .map(|j| {
                let mut coeffs = vec![f.zero(); nvars];
                if j <= n {
                    coeffs[offset + j] = f.one();
                } else {
                    for c in &mut coeffs[offset..=offset + n] {
                        *c = f.one();
                    }
                }
                HomogeneousForm::linear(coeffs)
            })
            .collect()
    };
    ThooftDatum::new(n, k, vandermonde_rows(f, k, &nodes), pattern(0), pattern(n + 1))
}

/// Degree-1 syzygies of a datum with `l_j ∈ V = <x>` and `l'_j ∈ W = <y>`,
/// split by type. A syzygy `(b + c | b' + c')` with `b, b' ∈ V^{n+k}` and
/// `c, c' ∈ W^{n+k}` solves `a D b = 0` (pure `V`), `a D' c' = 0` (pure `W`)
/// and `a (D c + D' b') = 0` (mixed) independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SplitSyzygies {
    pub pure_v: usize,
    pub pure_w: usize,
    pub mixed: usize,
}

impl SplitSyzygies {
    pub fn total(&self) -> usize {
        self.pure_v + self.pure_w + self.mixed
    }
}

/// Whether every `l_j` lies in `<x_0..x_n>` and every `l'_j` in `<y_0..y_n>`.
pub fn is_split<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> bool {
    let n = d.n;
    d.l.iter().all(|l| l.coeffs()[n + 1..].iter().all(|c| f.is_zero(c)))
        && d.lprime.iter().all(|l| l.coeffs()[..=n].iter().all(|c| f.is_zero(c)))
}

pub fn split_syzygies<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> Option<SplitSyzygies> {
    if !is_split(f, d) {
        return None;
    }
    let m = syzygy_matrix(f, &build_thooft(f, d), 1);
    let (n, width, nvars) = (d.n, d.width(), d.nvars());
    let rows: Vec<usize> = (0..m.rows()).collect();
    let count = |keep: &dyn Fn(usize, usize) -> bool| {
        let cols: Vec<usize> = (0..m.cols()).filter(|&c| keep(c / nvars, c % nvars)).collect();
        m.submatrix(&rows, &cols).nullity(f)
    };
    Some(SplitSyzygies {
        pure_v: count(&|slot, var| slot < width && var <= n),
        pure_w: count(&|slot, var| slot >= width && var > n),
        mixed: count(&|slot, var| (slot < width) != (var <= n)),
    })
}

/// The section count assembled from the two proof patterns: pure
/// syzygies of [`proof_witness_vanishing`] plus mixed syzygies of
/// [`proof_witness_syz`]. By semicontinuity of each block this bounds the
/// degree-1 syzygies of general data from above.
pub fn witness_syzygy_count<F: Field>(f: &F, n: usize, k: usize) -> Result<usize, ThooftError> {
    let vanishing = split_syzygies(f, &proof_witness_vanishing(f, n, k)?).expect("split by construction");
    let mixed = split_syzygies(f, &proof_witness_syz(f, n, k)?).expect("split by construction");
    Ok(vanishing.pure_v + vanishing.pure_w + mixed.mixed)
}

fn draw_uniform<F: Field, R: Rng + ?Sized>(f: &F, n: usize, k: usize, rng: &mut R) -> ThooftDatum<F::Elem> {
    let nvars = 2 * n + 2;
    let a = Matrix::from_fn(k, n + k, |_, _| f.random(rng));
    let l = (0..n + k).map(|_| HomogeneousForm::random(f, nvars, 1, rng)).collect();
    let lprime = (0..n + k).map(|_| HomogeneousForm::random(f, nvars, 1, rng)).collect();
    ThooftDatum { n, k, a, l, lprime }
}

/// Screening applied to random draws: nonzero maximal minors of `a`,
/// nonzero forms, and no rank drop at sampled points.
fn admissible<F: Field>(f: &F, d: &ThooftDatum<F::Elem>, seed: u64) -> bool {
    all_maximal_minors_nonzero(f, &d.a)
        && d.l.iter().chain(&d.lprime).all(|x| !x.is_zero(f))
        && sample_rank_evidence(f, &build_thooft(f, d), SCREEN_TRIALS, seed).mode
            != EvidenceMode::Disproved
}

/// A uniformly random datum, redrawn until it passes the admissibility
/// screen. Uniform forms are almost never confined to an `(n+1)`-space, so
/// these data carry sampled rank evidence rather than a certificate.
pub fn random_datum<F: Field>(
    f: &F,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<ThooftDatum<F::Elem>, ThooftError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let d = draw_uniform(f, n, k, &mut rng);
        let screen_seed = rng.gen();
        if admissible(f, &d, screen_seed) {
            return Ok(d);
        }
    }
    Err(ThooftError::RetryLimit(MAX_DRAWS))
}

/// A random datum with `l_j` uniform in `<x_0..x_n>` and `l'_j` uniform in
/// `<y_0..y_n>`, redrawn until [`fullrank_certificate`] holds.
pub fn random_split_datum<F: Field>(
    f: &F,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<ThooftDatum<F::Elem>, ThooftError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nvars = 2 * n + 2;
    let half = |rng: &mut ChaCha8Rng, offset: usize| {
        let mut coeffs = vec![f.zero(); nvars];
        for c in &mut coeffs[offset..offset + n + 1] {
            *c = f.random(rng);
        }
        HomogeneousForm::linear(coeffs)
    };
    for _ in 0..MAX_DRAWS {
        let a = Matrix::from_fn(k, n + k, |_, _| f.random(&mut rng));
        let l = (0..n + k).map(|_| half(&mut rng, 0)).collect();
        let lprime = (0..n + k).map(|_| half(&mut rng, n + 1)).collect();
        let d = ThooftDatum { n, k, a, l, lprime };
        if fullrank_certificate(f, &d) {
            return Ok(d);
        }
    }
    Err(ThooftError::RetryLimit(MAX_DRAWS))
}

/// `(n+k)(6n+3k+1)`, the dimension predicted for the deformation space.
pub fn expected_deformation_dim(n: usize, k: usize) -> usize {
    (n + k) * (6 * n + 3 * k + 1)
}

/// Coefficient matrix of `X -> (A J X^t) - (A J X^t)^t` on
/// `X ∈ Mat_{k×2(n+k)}(S_1)`. Unknown `X_l[b, c]` (coefficient of `x_l` in
/// entry `(b, c)`) sits at column `(b * cols + c) * nvars + l`; equation
/// `(a, b)` with `a < b` at monomial `nu` sits at row `pair * dim S_2 + nu`.
pub fn deformation_matrix<F: Field>(f: &F, a: &LinearFormMatrix<F::Elem>) -> Matrix<F::Elem> {
    let (k, cols, nvars) = (a.rows(), a.cols(), a.nvars());
    let linear = Monomials::new(nvars, 1);
    let quad = Monomials::new(nvars, 2);
    let times = linear.times_variable_table(&quad);
    let s2 = quad.len();
    let mut pair_index = vec![vec![usize::MAX; k]; k];
    let mut npairs = 0;
    for i in 0..k {
        for j in i + 1..k {
            pair_index[i][j] = npairs;
            npairs += 1;
        }
    }
    let aj: Vec<_> = a.tensor().iter().map(|m| times_j(f, m)).collect();
    let mut out = Matrix::zeros(f, npairs * s2, k * cols * nvars);
    for b in 0..k {
        for c in 0..cols {
            for l in 0..nvars {
                let unknown = (b * cols + c) * nvars + l;
                for (m, ajm) in aj.iter().enumerate() {
                    let nu = times[l][m];
                    for row in 0..k {
                        let coeff = &ajm[(row, c)];
                        if row == b || f.is_zero(coeff) {
                            continue;
                        }
                        let (eq, value) = if row < b {
                            (pair_index[row][b], coeff.clone())
                        } else {
                            (pair_index[b][row], f.neg(coeff))
                        };
                        let slot = &mut out[(eq * s2 + nu, unknown)];
                        *slot = f.add(slot, &value);
                    }
                }
            }
        }
    }
    out
}

/// `dim { X : A J X^t symmetric }`.
pub fn deformation_space_dim<F: Field>(f: &F, a: &LinearFormMatrix<F::Elem>) -> usize {
    deformation_matrix(f, a).nullity(f)
}

/// `g = (σ · (β_j, γ_j)_j, α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThooftGroupElement<E> {
    pub alpha: Matrix<E>,
    pub beta: Vec<Matrix<E>>,
    pub gamma: Vec<E>,
    /// 0-based permutation of `0..n+k`.
    pub sigma: Vec<usize>,
}

impl<E: Clone> ThooftGroupElement<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize, k: usize) -> Self {
        ThooftGroupElement {
            alpha: Matrix::identity(f, k),
            beta: vec![Matrix::identity(f, 2); n + k],
            gamma: vec![f.one(); n + k],
            sigma: (0..n + k).collect(),
        }
    }

    /// The diagonal `-1` of `μ_2`.
    pub fn minus_one<F: Field<Elem = E>>(f: &F, n: usize, k: usize) -> Self {
        let id = Self::identity(f, n, k);
        let minus = f.neg(&f.one());
        ThooftGroupElement {
            alpha: id.alpha.neg(f),
            beta: id.beta.iter().map(|b| b.neg(f)).collect(),
            gamma: vec![minus; n + k],
            sigma: id.sigma,
        }
    }

    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(f: &F, n: usize, k: usize, rng: &mut R) -> Self {
        let alpha = loop {
            let m = Matrix::from_fn(k, k, |_, _| f.random(rng));
            if !f.is_zero(&m.det(f)) {
                break m;
            }
        };
        let beta = (0..n + k)
            .map(|_| loop {
                let mut m = Matrix::from_fn(2, 2, |_, _| f.random(rng));
                if let Some(inv) = f.inv(&m.det(f)) {
                    m[(0, 0)] = f.mul(&m[(0, 0)], &inv);
                    m[(0, 1)] = f.mul(&m[(0, 1)], &inv);
                    break m;
                }
            })
            .collect();
        let gamma = (0..n + k).map(|_| f.random_nonzero(rng)).collect();
        let mut sigma: Vec<usize> = (0..n + k).collect();
        sigma.shuffle(rng);
        ThooftGroupElement {
            alpha,
            beta,
            gamma,
            sigma,
        }
    }
}

/// `(g·a)_j = α^{-1}(γ_j a_{σ(j)})`, `(g·L)_j = γ_j^{-1} β_j(L_{σ(j)})`
/// where `β` sends `(l, l')` to `(β00 l + β01 l', β10 l + β11 l')`.
pub fn apply_group<F: Field>(
    f: &F,
    g: &ThooftGroupElement<F::Elem>,
    d: &ThooftDatum<F::Elem>,
) -> ThooftDatum<F::Elem> {
    let alpha_inv = g.alpha.inverse(f).expect("alpha must be invertible");
    let permuted = Matrix::from_fn(d.k, d.width(), |i, j| f.mul(&g.gamma[j], &d.a[(i, g.sigma[j])]));
    let a = alpha_inv.mul(f, &permuted);
    let mut l = Vec::with_capacity(d.width());
    let mut lprime = Vec::with_capacity(d.width());
    for j in 0..d.width() {
        let (src, src_p) = (&d.l[g.sigma[j]], &d.lprime[g.sigma[j]]);
        let b = &g.beta[j];
        let scale = f.inv(&g.gamma[j]).expect("gamma must be nonzero");
        let first = src.scale(f, &b[(0, 0)]).add(f, &src_p.scale(f, &b[(0, 1)]));
        let second = src.scale(f, &b[(1, 0)]).add(f, &src_p.scale(f, &b[(1, 1)]));
        l.push(first.scale(f, &scale));
        lprime.push(second.scale(f, &scale));
    }
    ThooftDatum {
        n: d.n,
        k: d.k,
        a,
        l,
        lprime,
    }
}

/// Rank of the linearized action at `d`. Lie parameters are ordered
/// `δα` (row-major), then for each `j` the `sl_2` coordinates `(E, F, H)` of
/// `δβ_j` and `δγ_j`.
pub fn orbit_rank<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> usize {
    tangent_map(f, d).rank(f)
}

/// Matrix of the linearized action (parameter coordinates × Lie parameters).
pub fn tangent_map<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> Matrix<F::Elem> {
    let (k, width, nvars) = (d.k, d.width(), d.nvars());
    let mut columns: Vec<Vec<F::Elem>> = Vec::with_capacity(group_dim(d.n, k));
    let base_zero = || ThooftDatum {
        n: d.n,
        k,
        a: Matrix::zeros(f, k, width),
        l: vec![HomogeneousForm::zero(f, nvars, 1); width],
        lprime: vec![HomogeneousForm::zero(f, nvars, 1); width],
    };
    // δα = e_{rs}: δa = -e_{rs} a
    for r in 0..k {
        for s in 0..k {
            let mut t = base_zero();
            for j in 0..width {
                t.a[(r, j)] = f.neg(&d.a[(s, j)]);
            }
            columns.push(t.to_vector());
        }
    }
    let one = f.one();
    let zero = f.zero();
    let minus = f.neg(&one);
    let sl2 = [
        [[zero.clone(), one.clone()], [zero.clone(), zero.clone()]],
        [[zero.clone(), zero.clone()], [one.clone(), zero.clone()]],
        [[one.clone(), zero.clone()], [zero.clone(), minus.clone()]],
    ];
    for j in 0..width {
        for xi in &sl2 {
            let mut t = base_zero();
            t.l[j] = d.l[j].scale(f, &xi[0][0]).add(f, &d.lprime[j].scale(f, &xi[0][1]));
            t.lprime[j] = d.l[j].scale(f, &xi[1][0]).add(f, &d.lprime[j].scale(f, &xi[1][1]));
            columns.push(t.to_vector());
        }
        let mut t = base_zero();
        for i in 0..k {
            t.a[(i, j)] = d.a[(i, j)].clone();
        }
        t.l[j] = d.l[j].neg(f);
        t.lprime[j] = d.lprime[j].neg(f);
        columns.push(t.to_vector());
    }
    Matrix::from_rows(parameter_dim(d.n, k), columns).transpose()
}

/// Torus stability: every column of `a` and every pair `(l_j, l'_j)` is
/// nonzero.
pub fn torus_stable<F: Field>(f: &F, d: &ThooftDatum<F::Elem>) -> bool {
    (0..d.width()).all(|j| (0..d.k).any(|i| !f.is_zero(&d.a[(i, j)])))
        && d.l.iter().zip(&d.lprime).all(|(l, lp)| !l.is_zero(f) || !lp.is_zero(f))
}

/// Dimension of `Mat_{k×2(n+k)}(S_1)`, the space the deformation system
/// lives in.
pub fn deformation_unknowns(n: usize, k: usize) -> usize {
    k * (2 * n + 2 * k) * num_monomials(2 * n + 2, 1)
}
