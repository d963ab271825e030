//! Monads `O(-1)^k -> O^{2n+2k} -> O(1)^k` given by a matrix `A` of linear
//! forms with `A J A^t = 0`, and the bundle invariants computable from `A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::{num_monomials, HomogeneousForm, Monomials, PolyError, SubspaceParam};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonadError {
    #[error("A J A^t does not vanish")]
    NotSymplectic,
    #[error("negative section count in degree {degree}: {syzygies} syzygies < {forced} forced")]
    NegativeResult {
        degree: usize,
        syzygies: usize,
        forced: usize,
    },
    #[error("rank drops to {rank} < {expected} at a sampled point of the subspace")]
    RankDropOnSubspace { rank: usize, expected: usize },
    #[error("the two points span no line")]
    DegenerateLine,
    #[error("inconsistent section counts on a line: {0}")]
    InconsistentSplitting(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A `rows × cols` matrix of linear forms in `nvars` variables, stored as
/// `A = sum_m A_m x_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormMatrix<E> {
    rows: usize,
    cols: usize,
    tensor: Vec<Matrix<E>>,
}

impl<E: Clone> LinearFormMatrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize, nvars: usize) -> Self {
        LinearFormMatrix {
            rows,
            cols,
            tensor: vec![Matrix::zeros(f, rows, cols); nvars],
        }
    }

    pub fn from_tensor(tensor: Vec<Matrix<E>>) -> Result<Self, MonadError> {
        let first = tensor
            .first()
            .ok_or_else(|| MonadError::Shape("empty coefficient tensor".into()))?;
        let (rows, cols) = (first.rows(), first.cols());
        if tensor.iter().any(|m| (m.rows(), m.cols()) != (rows, cols)) {
            return Err(MonadError::Shape("coefficient matrices differ in shape".into()));
        }
        Ok(LinearFormMatrix { rows, cols, tensor })
    }

    /// Builds the matrix from its entries; `entry(i, j)` must be linear.
    pub fn from_fn<F: Field<Elem = E>>(
        f: &F,
        rows: usize,
        cols: usize,
        nvars: usize,
        mut entry: impl FnMut(usize, usize) -> HomogeneousForm<E>,
    ) -> Self {
        let mut out = Self::zeros(f, rows, cols, nvars);
        for i in 0..rows {
            for j in 0..cols {
                let form = entry(i, j);
                assert_eq!((form.nvars(), form.degree()), (nvars, 1), "entry must be linear");
                out.set_entry(i, j, &form);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.tensor.len()
    }

    pub fn tensor(&self) -> &[Matrix<E>] {
        &self.tensor
    }

    /// `(n, k)` if the matrix has the monad shape `k × (2n+2k)` over `2n+2`
    /// variables.
    pub fn monad_shape(&self) -> Option<(usize, usize)> {
        let k = self.rows;
        let nvars = self.nvars();
        if k == 0 || nvars < 4 || nvars % 2 == 1 {
            return None;
        }
        let n = nvars / 2 - 1;
        (self.cols == 2 * n + 2 * k).then_some((n, k))
    }

    pub fn entry(&self, i: usize, j: usize) -> HomogeneousForm<E> {
        HomogeneousForm::linear(self.tensor.iter().map(|m| m[(i, j)].clone()).collect())
    }

    pub fn set_entry(&mut self, i: usize, j: usize, form: &HomogeneousForm<E>) {
        for (m, c) in self.tensor.iter_mut().zip(form.coeffs()) {
            m[(i, j)] = c.clone();
        }
    }

    /// Entrywise evaluation at a point.
    pub fn evaluate<F: Field<Elem = E>>(&self, f: &F, point: &[E]) -> Matrix<E> {
        assert_eq!(point.len(), self.nvars());
        let mut out = Matrix::zeros(f, self.rows, self.cols);
        for (m, x) in self.tensor.iter().zip(point) {
            if !f.is_zero(x) {
                out = out.add(f, &m.scale(f, x));
            }
        }
        out
    }

    /// Substitutes `x = P y`.
    pub fn restrict<F: Field<Elem = E>>(&self, f: &F, sub: &SubspaceParam<E>) -> Self {
        assert_eq!(sub.ambient_dim(), self.nvars());
        let p = sub.matrix();
        let tensor = (0..sub.fiber_dim())
            .map(|j| {
                let mut acc = Matrix::zeros(f, self.rows, self.cols);
                for (i, m) in self.tensor.iter().enumerate() {
                    if !f.is_zero(&p[(i, j)]) {
                        acc = acc.add(f, &m.scale(f, &p[(i, j)]));
                    }
                }
                acc
            })
            .collect();
        LinearFormMatrix {
            rows: self.rows,
            cols: self.cols,
            tensor,
        }
    }

    pub fn map_tensor(&self, op: impl Fn(&Matrix<E>) -> Matrix<E>) -> Self {
        let tensor: Vec<_> = self.tensor.iter().map(op).collect();
        let (rows, cols) = tensor.first().map(|m| (m.rows(), m.cols())).unwrap_or((0, 0));
        LinearFormMatrix { rows, cols, tensor }
    }

    /// Column-wise product with a scalar matrix on the right.
    pub fn mul_right<F: Field<Elem = E>>(&self, f: &F, m: &Matrix<E>) -> Self {
        self.map_tensor(|a| a.mul(f, m))
    }

    /// Row-wise product with a scalar matrix on the left.
    pub fn mul_left<F: Field<Elem = E>>(&self, f: &F, m: &Matrix<E>) -> Self {
        self.map_tensor(|a| m.mul(f, a))
    }

    pub fn to_json<F: Field<Elem = E>>(&self, f: &F) -> Value {
        let tensor: Vec<Vec<Vec<Value>>> = self
            .tensor
            .iter()
            .map(|m| m.to_rows().iter().map(|r| r.iter().map(|x| f.to_json(x)).collect()).collect())
            .collect();
        match self.monad_shape() {
            Some((n, k)) => json!({ "n": n, "k": k, "tensor": tensor }),
            None => json!({ "rows": self.rows, "cols": self.cols, "tensor": tensor }),
        }
    }

    pub fn from_json<F: Field<Elem = E>>(f: &F, value: &Value) -> Result<Self, MonadError> {
        let bad = |msg: &str| MonadError::Shape(msg.to_string());
        let tensor = value
            .get("tensor")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `tensor`"))?
            .iter()
            .map(|m| {
                let rows = m.as_array().ok_or_else(|| bad("coefficient matrix is not an array"))?;
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.as_array()
                            .ok_or_else(|| bad("row is not an array"))?
                            .iter()
                            .map(|x| f.from_json(x).map_err(|e| MonadError::Poly(e.into())))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let cols = rows.first().map(Vec::len).unwrap_or(0);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(bad("ragged coefficient matrix"));
                }
                Ok(Matrix::from_rows(cols, rows))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let out = Self::from_tensor(tensor)?;
        if let (Some(n), Some(k)) = (value.get("n"), value.get("k")) {
            let expected = (n.as_u64().map(|x| x as usize), k.as_u64().map(|x| x as usize));
            if out.monad_shape().map(|(a, b)| (Some(a), Some(b))) != Some(expected) {
                return Err(bad("`n`, `k` disagree with the tensor shape"));
            }
        }
        Ok(out)
    }
}

/// The standard symplectic form `((0, I), (-I, 0))` of size `2 * half`.
pub fn symplectic_j<F: Field>(f: &F, half: usize) -> Matrix<F::Elem> {
    let one = f.one();
    let minus = f.neg(&one);
    Matrix::from_fn(2 * half, 2 * half, |i, j| {
        if i < half && j == i + half {
            one.clone()
        } else if i >= half && j + half == i {
            minus.clone()
        } else {
            f.zero()
        }
    })
}

/// `M J` without forming `J`; `M` must have an even number of columns.
pub fn times_j<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let half = m.cols() / 2;
    assert_eq!(m.cols(), 2 * half);
    Matrix::from_fn(m.rows(), m.cols(), |i, c| {
        if c < half {
            f.neg(&m[(i, half + c)])
        } else {
            m[(i, c - half)].clone()
        }
    })
}

/// `P J Q^t` for scalar matrices with matching even column counts.
pub fn j_pairing<F: Field>(f: &F, p: &Matrix<F::Elem>, q: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    times_j(f, p).mul(f, &q.transpose())
}

/// The quadric matrix `A J A^t`, as one `rows × rows` scalar matrix per
/// degree-2 monomial (lexicographic order).
pub fn ajat<F: Field>(f: &F, a: &LinearFormMatrix<F::Elem>) -> Vec<Matrix<F::Elem>> {
    let nvars = a.nvars();
    let quad = Monomials::new(nvars, 2);
    let mut out = vec![Matrix::zeros(f, a.rows(), a.rows()); quad.len()];
    let aj: Vec<_> = a.tensor().iter().map(|m| times_j(f, m)).collect();
    for m in 0..nvars {
        for l in m..nvars {
            let mut exps = vec![0u32; nvars];
            exps[m] += 1;
            exps[l] += 1;
            let idx = quad.index_of(&exps).expect("quadratic monomial");
            let mut term = aj[m].mul(f, &a.tensor()[l].transpose());
            if l != m {
                term = term.add(f, &aj[l].mul(f, &a.tensor()[m].transpose()));
            }
            out[idx] = term;
        }
    }
    out
}

/// Whether `A J A^t = 0` coefficientwise.
pub fn symplectic_check<F: Field>(f: &F, a: &LinearFormMatrix<F::Elem>) -> bool {
    if a.cols() % 2 == 1 {
        return false;
    }
    let q = ajat(f, a);
    // the diagonal vanishes for every A because J is alternating
    for m in &q {
        for i in 0..a.rows() {
            assert!(f.is_zero(&m[(i, i)]), "diagonal of A J A^t must vanish identically");
        }
    }
    q.iter().all(|m| m.is_zero(f))
}

/// The Kronecker module `K_{ml} = A_m J A_l^t` for `m < l`.
pub fn kronecker_coefficients<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
) -> Vec<((usize, usize), Matrix<F::Elem>)> {
    let nvars = a.nvars();
    let mut out = Vec::new();
    for m in 0..nvars {
        let am_j = times_j(f, &a.tensor()[m]);
        for l in m + 1..nvars {
            out.push(((m, l), am_j.mul(f, &a.tensor()[l].transpose())));
        }
    }
    out
}

/// Coefficient matrix of `v -> A v` from `(S_d)^cols` to `(S_{d+1})^rows`.
/// Column `(c, mu)` sits at `c * dim S_d + mu`, row `(a, nu)` at
/// `a * dim S_{d+1} + nu`.
pub fn syzygy_matrix<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    d: usize,
) -> Matrix<F::Elem> {
    let nvars = a.nvars();
    let src = Monomials::new(nvars, d);
    let dst = Monomials::new(nvars, d + 1);
    let times = src.times_variable_table(&dst);
    let (sd, sd1) = (src.len(), dst.len());
    let mut out = Matrix::zeros(f, a.rows() * sd1, a.cols() * sd);
    for (m, am) in a.tensor().iter().enumerate() {
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                let coeff = &am[(r, c)];
                if f.is_zero(coeff) {
                    continue;
                }
                for (mu, row_of) in times.iter().enumerate() {
                    let slot = &mut out[(r * sd1 + row_of[m], c * sd + mu)];
                    *slot = f.add(slot, coeff);
                }
            }
        }
    }
    out
}

/// Dimension of the degree-`d` syzygies `{v in (S_d)^cols : A v = 0}`.
pub fn syzygy_dim<F: Field>(f: &F, a: &LinearFormMatrix<F::Elem>, d: usize) -> usize {
    syzygy_matrix(f, a, d).nullity(f)
}

/// A basis of the degree-`d` syzygies, each as a vector of forms.
pub fn syzygy_basis<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    d: usize,
) -> Vec<Vec<HomogeneousForm<F::Elem>>> {
    let sd = num_monomials(a.nvars(), d);
    syzygy_matrix(f, a, d)
        .kernel_basis(f)
        .into_iter()
        .map(|v| {
            v.chunks(sd)
                .map(|c| HomogeneousForm::from_coeffs(a.nvars(), d, c.to_vec()).expect("chunk size"))
                .collect()
        })
        .collect()
}

/// Whether `A v = 0` for a vector of forms of common degree.
pub fn annihilates<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    v: &[HomogeneousForm<F::Elem>],
) -> bool {
    assert_eq!(v.len(), a.cols());
    (0..a.rows()).all(|r| {
        let mut acc: Option<HomogeneousForm<F::Elem>> = None;
        for (c, vc) in v.iter().enumerate() {
            let term = a.entry(r, c).mul(f, vc);
            acc = Some(match acc {
                Some(s) => s.add(f, &term),
                None => term,
            });
        }
        acc.is_none_or(|s| s.is_zero(f))
    })
}

/// `h^0(E(d))` for the bundle of a monad: degree-`d` syzygies minus the
/// sections forced by `O(-1)^k`.
pub fn h0_twist<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    d: usize,
) -> Result<usize, MonadError> {
    if !symplectic_check(f, a) {
        return Err(MonadError::NotSymplectic);
    }
    let syzygies = syzygy_dim(f, a, d);
    let forced = if d == 0 {
        0
    } else {
        a.rows() * num_monomials(a.nvars(), d - 1)
    };
    syzygies.checked_sub(forced).ok_or(MonadError::NegativeResult {
        degree: d,
        syzygies,
        forced,
    })
}

pub fn rank_at_point<F: Field>(f: &F, a: &LinearFormMatrix<F::Elem>, x: &[F::Elem]) -> usize {
    a.evaluate(f, x).rank(f)
}

/// How much is known about `A` having full rank at every point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceMode {
    Certificate,
    Sampled,
    Disproved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEvidence {
    pub mode: EvidenceMode,
    pub trials: usize,
    pub seed: u64,
    pub min_rank: usize,
    /// Formatted coordinates of the first point where the rank dropped.
    pub failing_point: Option<Vec<String>>,
}

/// Evaluates `A` at `trials` uniform nonzero points.
pub fn sample_rank_evidence<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    trials: usize,
    seed: u64,
) -> RankEvidence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_rank = a.rows();
    let mut failing_point = None;
    for _ in 0..trials {
        let x = random_nonzero_point(f, a.nvars(), &mut rng);
        let rank = rank_at_point(f, a, &x);
        if rank < a.rows() && failing_point.is_none() {
            failing_point = Some(x.iter().map(|c| f.format(c)).collect());
        }
        min_rank = min_rank.min(rank);
    }
    RankEvidence {
        mode: if failing_point.is_some() {
            EvidenceMode::Disproved
        } else {
            EvidenceMode::Sampled
        },
        trials,
        seed,
        min_rank,
        failing_point,
    }
}

pub fn random_nonzero_point<F: Field, R: Rng + ?Sized>(
    f: &F,
    nvars: usize,
    rng: &mut R,
) -> Vec<F::Elem> {
    loop {
        let x: Vec<_> = (0..nvars).map(|_| f.random(rng)).collect();
        if x.iter().any(|c| !f.is_zero(c)) {
            return x;
        }
    }
}

/// A monad matrix together with what has been checked about it.
#[derive(Debug, Clone)]
pub struct MonadPresentation<E> {
    pub a: LinearFormMatrix<E>,
    pub symplectic_verified: bool,
    pub rank_evidence: RankEvidence,
}

impl<E: Clone> MonadPresentation<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, a: LinearFormMatrix<E>, trials: usize, seed: u64) -> Self {
        let symplectic_verified = symplectic_check(f, &a);
        let rank_evidence = sample_rank_evidence(f, &a, trials, seed);
        MonadPresentation {
            a,
            symplectic_verified,
            rank_evidence,
        }
    }

    /// Records that a structural argument proves full rank everywhere.
    pub fn certify(&mut self) {
        if self.rank_evidence.mode == EvidenceMode::Sampled {
            self.rank_evidence.mode = EvidenceMode::Certificate;
        }
    }
}

/// Samples points of the subspace and fails if `A` loses rank there.
fn check_rank_on<F: Field>(
    f: &F,
    restricted: &LinearFormMatrix<F::Elem>,
    samples: usize,
    seed: u64,
) -> Result<(), MonadError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let y = random_nonzero_point(f, restricted.nvars(), &mut rng);
        let rank = rank_at_point(f, restricted, &y);
        if rank < restricted.rows() {
            return Err(MonadError::RankDropOnSubspace {
                rank,
                expected: restricted.rows(),
            });
        }
    }
    Ok(())
}

/// Number of sampled points used to check exactness on a subspace.
pub const SUBSPACE_RANK_SAMPLES: usize = 3;

/// `h^0(E|_L)`: the degree-0 syzygies of `A` restricted to `L`.
pub fn h0_restricted<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    sub: &SubspaceParam<F::Elem>,
    seed: u64,
) -> Result<usize, MonadError> {
    if sub.fiber_dim() < 2 {
        return Err(MonadError::Shape("subspace must have dimension at least one".into()));
    }
    let restricted = a.restrict(f, sub);
    check_rank_on(f, &restricted, SUBSPACE_RANK_SAMPLES, seed)?;
    Ok(syzygy_dim(f, &restricted, 0))
}

fn line_through<F: Field>(
    f: &F,
    p: &[F::Elem],
    q: &[F::Elem],
) -> Result<SubspaceParam<F::Elem>, MonadError> {
    SubspaceParam::from_columns(f, &[p.to_vec(), q.to_vec()]).map_err(|_| MonadError::DegenerateLine)
}

/// The pairing `A(P) J A(Q)^t` attached to the line through `P` and `Q`.
pub fn line_pairing<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    p: &[F::Elem],
    q: &[F::Elem],
) -> Result<Matrix<F::Elem>, MonadError> {
    line_through(f, p, q)?;
    Ok(j_pairing(f, &a.evaluate(f, p), &a.evaluate(f, q)))
}

/// Corank of a square matrix.
pub fn corank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    m.rows() - m.rank(f)
}

/// Splitting type `E|_L = ⊕ O(a_i)` of a bundle on a line, sorted in
/// decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType(pub Vec<i64>);

impl SplittingType {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `sum_{a_i > 0} a_i`.
    pub fn positive_part(&self) -> usize {
        self.0.iter().filter(|&&a| a > 0).map(|&a| a as usize).sum()
    }

    pub fn is_self_dual(&self) -> bool {
        let mut neg: Vec<i64> = self.0.iter().map(|a| -a).collect();
        neg.sort_unstable_by(|a, b| b.cmp(a));
        neg == self.0
    }
}

/// Recovers the splitting type of `E` on the line through `P` and `Q` from
/// section counts of twists of the restricted monad.
///
/// `h^0(E|_L(m))` is `syz_0` for `m = 0` and `syz_m - k m` for `m >= 1`.
/// For `m = -1` it is the kernel of `H^0(E)^2 -> H^0(E(1))`,
/// `(a, b) -> t a - s b`, computed inside `(S_1)^{2n+2k}` modulo the image
/// of `J A^t`. First differences give `#{a_i >= -m}` and self-duality gives
/// the positive half.
pub fn splitting_type_on_line<F: Field>(
    f: &F,
    a: &LinearFormMatrix<F::Elem>,
    p: &[F::Elem],
    q: &[F::Elem],
) -> Result<SplittingType, MonadError> {
    let line = line_through(f, p, q)?;
    let b = a.restrict(f, &line);
    let k = a.rows();
    let rank_e = a
        .cols()
        .checked_sub(2 * k)
        .ok_or_else(|| MonadError::Shape("too few columns for a monad".into()))?;
    // exactness: rank k at P, Q and P + Q
    let one = f.one();
    for y in [vec![one.clone(), f.zero()], vec![f.zero(), one.clone()], vec![one.clone(), one]] {
        let rank = rank_at_point(f, &b, &y);
        if rank < k {
            return Err(MonadError::RankDropOnSubspace { rank, expected: k });
        }
    }

    let top = k as i64 + 1;
    let mut h = Vec::with_capacity(top as usize + 2);
    h.push(h0_minus_one_on_line(f, &b) as i64);
    for m in 0..=top {
        let syz = syzygy_dim(f, &b, m as usize) as i64;
        h.push(if m == 0 { syz } else { syz - k as i64 * m });
    }
    // d[m] = h(m) - h(m-1) = #{a_i >= -m}, m = 0..=top
    let d: Vec<i64> = h.windows(2).map(|w| w[1] - w[0]).collect();
    let total = rank_e as i64;
    let at_least = |j: i64| -> i64 {
        if j <= 0 {
            d[(-j) as usize]
        } else {
            total - d[(j - 1) as usize]
        }
    };
    let mut entries = Vec::with_capacity(rank_e);
    for j in (-top..=top).rev() {
        let count = at_least(j) - at_least(j + 1);
        if count < 0 {
            return Err(MonadError::InconsistentSplitting(format!(
                "negative multiplicity {count} for O({j})"
            )));
        }
        entries.extend(std::iter::repeat_n(j, count as usize));
    }
    if entries.len() != rank_e || at_least(top + 1) != 0 || at_least(-top) != total {
        return Err(MonadError::InconsistentSplitting(format!(
            "section counts {h:?} do not determine a rank-{rank_e} splitting"
        )));
    }
    let split = SplittingType(entries);
    if split.0.iter().sum::<i64>() != 0 || !split.is_self_dual() {
        return Err(MonadError::InconsistentSplitting(format!(
            "recovered {:?} is not self-dual",
            split.0
        )));
    }
    Ok(split)
}

/// `h^0(E|_L(-1))` for a monad restricted to a line (two variables `s, t`).
fn h0_minus_one_on_line<F: Field>(f: &F, b: &LinearFormMatrix<F::Elem>) -> usize {
    assert_eq!(b.nvars(), 2);
    let cols = b.cols();
    // (S_1)^cols with coordinates (c, s-coefficient, t-coefficient)
    let sections = syzygy_matrix(f, b, 0).kernel_basis(f);
    let mut shifted = Vec::with_capacity(2 * sections.len());
    for v in &sections {
        for var in 0..2 {
            let mut w = vec![f.zero(); 2 * cols];
            for (c, x) in v.iter().enumerate() {
                w[2 * c + var] = x.clone();
            }
            shifted.push(w);
        }
    }
    // columns of J B^t: component c of column r is the linear form (B J)_{r c}
    let bj: Vec<_> = b.tensor().iter().map(|m| times_j(f, m)).collect();
    let forced: Vec<Vec<F::Elem>> = (0..b.rows())
        .map(|r| {
            let mut w = vec![f.zero(); 2 * cols];
            for c in 0..cols {
                w[2 * c] = f.neg(&bj[0][(r, c)]);
                w[2 * c + 1] = f.neg(&bj[1][(r, c)]);
            }
            w
        })
        .collect();
    let span = |rows: Vec<Vec<F::Elem>>| -> usize {
        if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(2 * cols, rows).rank(f)
        }
    };
    let image = span(shifted.clone());
    let forced_dim = span(forced.clone());
    let mut all = shifted;
    all.extend(forced);
    let joint = span(all);
    forced_dim - (joint - image)
}
