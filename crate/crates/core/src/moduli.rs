//! Closed-form dimensions, rationality verdicts and the Euclidean reduction
//! of `Mat^sym × Gr / PO`.

use serde::Serialize;

/// `5kn + 4n²`.
pub fn thooft_moduli_dim(n: u64, k: u64) -> u64 {
    5 * k * n + 4 * n * n
}

/// `(4n+2)k + 4n² + 2n − 4`.
pub fn rs_moduli_dim(n: u64, k: u64) -> u64 {
    (4 * n + 2) * k + 4 * n * n + 2 * n - 4
}

/// `dim(RS data) − dim(G) = (2n+2k)(2n+2) − (2n+2k+4)`.
pub fn rs_moduli_dim_from_group(n: u64, k: u64) -> u64 {
    (2 * n + 2 * k) * (2 * n + 2) - (2 * n + 2 * k + 4)
}

/// `(n+k)(6n+3k+1)`, the expected dimension of the 't Hooft deformation space.
pub fn ottaviani_target(n: u64, k: u64) -> u64 {
    (n + k) * (6 * n + 3 * k + 1)
}

/// Largest power of two dividing both arguments.
pub fn two_power_e(n: u64, k: u64) -> u64 {
    let g = gcd(n, k);
    g & g.wrapping_neg()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rationality {
    Rational,
    StablyRational,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RsResidual {
    #[serde(rename = "B_mu2")]
    BMu2,
    #[serde(rename = "End2-mod-SL2")]
    End2ModSl2,
}

/// 't Hooft fields are `None` for `k < 3`, where no statement is made.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliProfile {
    pub n: u64,
    pub k: u64,
    pub thooft_dim: Option<u64>,
    pub rs_dim: u64,
    pub two_power_e: u64,
    pub thooft_affine_exponent: Option<u64>,
    pub thooft_residual_quotient_size: Option<u64>,
    pub rationality: Option<Rationality>,
    pub thooft_poincare: Option<bool>,
    pub rs_stack_exponent: u64,
    pub rs_residual: RsResidual,
    pub rs_poincare: bool,
    pub rs_space_rational: bool,
}

pub fn birational_profile(n: u64, k: u64) -> ModuliProfile {
    assert!(n >= 1 && k >= 1, "n and k must be positive");
    let e2 = two_power_e(n, k);
    let thooft = k >= 3;
    let rationality = match e2 {
        1 | 2 => Rationality::Rational,
        4 | 8 => Rationality::StablyRational,
        _ => Rationality::Unknown,
    };
    let odd = n % 2 == 1 || k % 2 == 1;
    ModuliProfile {
        n,
        k,
        thooft_dim: thooft.then(|| thooft_moduli_dim(n, k)),
        rs_dim: rs_moduli_dim(n, k),
        two_power_e: e2,
        thooft_affine_exponent: thooft.then(|| thooft_moduli_dim(n, k) - e2 * (e2 + 3) / 2),
        thooft_residual_quotient_size: thooft.then_some(e2),
        rationality: thooft.then_some(rationality),
        thooft_poincare: thooft.then_some(e2 == 1),
        rs_stack_exponent: if odd { rs_moduli_dim(n, k) } else { rs_moduli_dim(n, k) - 5 },
        rs_residual: if odd { RsResidual::BMu2 } else { RsResidual::End2ModSl2 },
        rs_poincare: odd,
        rs_space_rational: true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EuclidStep {
    /// `d1 > d2`: peel off `C^{d2(d2+1)}` and continue on `(d1 − d2, d2)`.
    Unequal { d1: u64, d2: u64, added: i64 },
    /// `d1 = d2`: peel off `C^{d1(d1+1)/2}` and stop with `h = d1`.
    Equal { d1: u64, added: i64 },
    /// Trade `C^{2^e(h − 2^e)}` for a `Gr_{2^e}(C^h)` factor.
    Grassmannian { h: u64, two_e: u64, added: i64 },
    /// The second symmetric factor, a vector bundle of rank `h(h+1)/2`.
    SymmetricFactor { h: u64, added: i64 },
}

impl EuclidStep {
    pub fn added(&self) -> i64 {
        match *self {
            EuclidStep::Unequal { added, .. }
            | EuclidStep::Equal { added, .. }
            | EuclidStep::Grassmannian { added, .. }
            | EuclidStep::SymmetricFactor { added, .. } => added,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidTrace {
    pub d1: u64,
    pub d2: u64,
    pub gcd: u64,
    pub two_e: u64,
    pub steps: Vec<EuclidStep>,
    pub total: i64,
}

impl EuclidTrace {
    /// `d + d1 d2 − 2^e(2^e+3)/2` with `d = d1 + d2`.
    pub fn closed_form(&self) -> i64 {
        let (d1, d2, e2) = (self.d1 as i64, self.d2 as i64, self.two_e as i64);
        d1 + d2 + d1 * d2 - e2 * (e2 + 3) / 2
    }
}

fn euclid_steps(mut d1: u64, mut d2: u64, steps: &mut Vec<EuclidStep>) -> u64 {
    loop {
        if d1 < d2 {
            (d1, d2) = (d2, d1);
        }
        if d1 == d2 {
            steps.push(EuclidStep::Equal {
                d1,
                added: (d1 * (d1 + 1) / 2) as i64,
            });
            return d1;
        }
        steps.push(EuclidStep::Unequal {
            d1,
            d2,
            added: (d2 * (d2 + 1)) as i64,
        });
        d1 -= d2;
    }
}

/// Reduces `Mat^sym_d × Gr_{d1}(C^d) / PO_d` (`d = d1 + d2`) to
/// `Mat^sym_{2^e}² / PO_{2^e}` times an affine space, recording each step.
pub fn euclid_trace(d1: u64, d2: u64) -> EuclidTrace {
    assert!(d1 >= 1 && d2 >= 1, "d1 and d2 must be positive");
    let mut steps = Vec::new();
    let h = euclid_steps(d1, d2, &mut steps);
    let e2 = h & h.wrapping_neg();
    if e2 < h {
        steps.push(EuclidStep::Grassmannian {
            h,
            two_e: e2,
            added: -((e2 * (h - e2)) as i64),
        });
        steps.push(EuclidStep::SymmetricFactor {
            h,
            added: (h * (h + 1) / 2) as i64,
        });
        euclid_steps(h - e2, e2, &mut steps);
    }
    let total = steps.iter().map(EuclidStep::added).sum();
    EuclidTrace {
        d1,
        d2,
        gcd: h,
        two_e: e2,
        steps,
        total,
    }
}
