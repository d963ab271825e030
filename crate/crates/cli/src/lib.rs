//! Verification reports for 't Hooft and Rao–Skiti instanton data.
//!
//! Every command builds a [`VerificationReport`] from a fixed `(prime, seed)`
//! pair, so rerunning the same command line reproduces the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use instanton_core::field::{independent_primes, Field, FieldConfig, PrimeField};
use instanton_core::moduli::{
    birational_profile, euclid_trace, ottaviani_target, rs_moduli_dim, rs_moduli_dim_from_group,
    thooft_moduli_dim,
};
use instanton_core::monad::{
    annihilates, corank, h0_restricted, h0_twist, line_pairing, random_nonzero_point,
    sample_rank_evidence, splitting_type_on_line, symplectic_check, syzygy_dim, EvidenceMode,
    LinearFormMatrix,
};
use instanton_core::{rs, thooft};

pub const SCHEMA_VERSION: &str = "v1";
pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_BUDGET_S: u64 = 120;

/// Deformation system size (unknowns) solved over two primes in about one
/// second; elimination cost grows with the cube of this size.
const DEFORMATION_UNKNOWNS_AT_ONE_SECOND: f64 = 1300.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("time budget of {budget_s}s exceeded after {completed} checks ({elapsed_s:.1}s)")]
    TimeBudgetExceeded {
        budget_s: u64,
        elapsed_s: f64,
        completed: usize,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::TimeBudgetExceeded { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Evidence,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub citation: String,
    pub status: Status,
    pub expected: Value,
    pub observed: Value,
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub field: FieldConfig,
    pub instance: Instance,
    pub checks: Vec<CheckRecord>,
    pub verdict: Status,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub attachments: BTreeMap<String, Value>,
}

impl VerificationReport {
    pub fn exit_code(&self) -> u8 {
        match self.verdict {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} (n = {}, k = {})\n", self.command, self.instance.n, self.instance.k);
        let prime = self.field.prime.map_or_else(|| "rationals".to_string(), |p| p.to_string());
        let _ = writeln!(out, "- field: {prime}, seed {}", self.field.seed);
        let _ = writeln!(out, "- verdict: **{}**\n", status_word(self.verdict));
        let _ = writeln!(out, "| id | status | expected | observed | claim |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                c.id,
                status_word(c.status),
                c.expected,
                c.observed,
                c.citation
            );
        }
        for (name, value) in &self.attachments {
            let _ = writeln!(out, "\n## {name}\n\n```json\n{}\n```", serde_json::to_string_pretty(value).unwrap());
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Evidence => "evidence",
        Status::Skipped => "skipped",
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub n: usize,
    pub k: usize,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub budget: Duration,
    pub timings: bool,
    /// A datum in the JSON layout of the matching family.
    pub input: Option<Value>,
}

impl Options {
    pub fn new(n: usize, k: usize) -> Self {
        Options {
            n,
            k,
            prime: instanton_core::field::DEFAULT_PRIME,
            seed: 0,
            trials: DEFAULT_TRIALS,
            budget: Duration::from_secs(DEFAULT_BUDGET_S),
            timings: false,
            input: None,
        }
    }

    fn field(&self) -> Result<PrimeField, CliError> {
        PrimeField::new(self.prime).map_err(|e| CliError::Usage(e.to_string()))
    }

    fn check_instance(&self) -> Result<(), CliError> {
        if self.n == 0 || self.k == 0 {
            return Err(CliError::Usage("n and k must be positive".into()));
        }
        Ok(())
    }
}

struct Outcome {
    status: Status,
    expected: Value,
    observed: Value,
    witness: Option<Value>,
}

fn verdict(ok: bool, expected: impl Serialize, observed: impl Serialize) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        expected: json!(expected),
        observed: json!(observed),
        witness: None,
    }
}

fn equal<T: Serialize + PartialEq>(expected: T, observed: T) -> Outcome {
    let ok = expected == observed;
    verdict(ok, expected, observed)
}

fn skipped(reason: &str) -> Outcome {
    Outcome {
        status: Status::Skipped,
        expected: Value::Null,
        observed: json!(reason),
        witness: None,
    }
}

struct Runner {
    opts: Options,
    command: String,
    start: Instant,
    checks: Vec<CheckRecord>,
    attachments: BTreeMap<String, Value>,
}

impl Runner {
    fn new(command: &str, opts: &Options) -> Self {
        Runner {
            opts: opts.clone(),
            command: command.to_string(),
            start: Instant::now(),
            checks: Vec::new(),
            attachments: BTreeMap::new(),
        }
    }

    fn check(&mut self, id: &str, citation: &str, run: impl FnOnce() -> Outcome) -> Result<(), CliError> {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis() as u64;
        self.checks.push(CheckRecord {
            id: id.to_string(),
            citation: citation.to_string(),
            status: outcome.status,
            expected: outcome.expected,
            observed: outcome.observed,
            runtime_ms: self.opts.timings.then_some(ms),
            witness: outcome.witness,
        });
        let elapsed = self.start.elapsed();
        if elapsed > self.opts.budget {
            return Err(CliError::TimeBudgetExceeded {
                budget_s: self.opts.budget.as_secs(),
                elapsed_s: elapsed.as_secs_f64(),
                completed: self.checks.len(),
            });
        }
        Ok(())
    }

    fn attach(&mut self, name: &str, value: Value) {
        self.attachments.insert(name.to_string(), value);
    }

    fn finish(mut self, n: usize, k: usize) -> VerificationReport {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        let verdict = if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        VerificationReport {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            field: FieldConfig::prime(self.opts.prime, self.opts.seed),
            instance: Instance { n, k },
            checks: self.checks,
            verdict,
            attachments: self.attachments,
        }
    }
}

/// Expected `h^0(E(1))` for general 't Hooft data.
pub fn thooft_expected_h0_twist(n: usize, k: usize) -> usize {
    match k {
        1 => 2 * n * n + 3 * n,
        2 => 2 * n,
        _ => n,
    }
}

fn load_thooft(f: &PrimeField, opts: &Options) -> Result<thooft::ThooftDatum<u64>, CliError> {
    match &opts.input {
        Some(v) => thooft::ThooftDatum::from_json(f, v).map_err(|e| CliError::Usage(format!("input datum: {e}"))),
        None => {
            opts.check_instance()?;
            thooft::random_datum(f, opts.n, opts.k, opts.seed).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn load_rs(f: &PrimeField, opts: &Options) -> Result<rs::RsDatum<u64>, CliError> {
    match &opts.input {
        Some(v) => rs::RsDatum::from_json(f, v).map_err(|e| CliError::Usage(format!("input datum: {e}"))),
        None => {
            opts.check_instance()?;
            Ok(rs::random_datum(f, opts.n, opts.k, opts.seed))
        }
    }
}

fn rank_evidence_outcome(f: &PrimeField, a: &LinearFormMatrix<u64>, trials: usize, seed: u64) -> Outcome {
    let ev = sample_rank_evidence(f, a, trials, seed);
    Outcome {
        status: if ev.mode == EvidenceMode::Disproved { Status::Fail } else { Status::Evidence },
        expected: json!({ "min_rank": a.rows() }),
        observed: json!({ "mode": ev.mode, "trials": ev.trials, "min_rank": ev.min_rank }),
        witness: ev.failing_point.map(|p| json!({ "point": p })),
    }
}

pub fn cmd_thooft_verify(opts: &Options) -> Result<VerificationReport, CliError> {
    let f = opts.field()?;
    let d = load_thooft(&f, opts)?;
    let (n, k) = (d.n, d.k);
    let a = thooft::build_thooft(&f, &d);
    let mut run = Runner::new("thooft verify", opts);
    run.attach("datum", d.to_json(&f));

    run.check("thooft.symplectic", "'t Hooft matrices satisfy A J A^t = 0", || {
        equal(true, symplectic_check(&f, &a))
    })?;
    run.check("thooft.rank", "A(x) has rank k at every point", || {
        if thooft::is_split(&f, &d) && thooft::fullrank_certificate(&f, &d) {
            equal("certificate", "certificate")
        } else {
            rank_evidence_outcome(&f, &a, opts.trials, opts.seed)
        }
    })?;
    run.check(
        "thooft.canonical_syzygies",
        "the columns of J (D | D')^t are n+k independent degree-1 syzygies",
        || {
            let canon = thooft::canonical_syzygies(&f, &d);
            let all = canon.iter().all(|v| annihilates(&f, &a, v));
            verdict(
                all && thooft::forms_rank(&f, &canon) == n + k,
                json!({ "rank": n + k, "annihilated": true }),
                json!({ "rank": thooft::forms_rank(&f, &canon), "annihilated": all }),
            )
        },
    )?;
    run.check("thooft.syz0", "no constant syzygies: h^0(E) = 0", || equal(0, syzygy_dim(&f, &a, 0)))?;
    run.check(
        "thooft.syz1",
        "degree-1 syzygies number h^0(E(1)) + k; exactly n+k global sections for k >= 3",
        || equal(thooft_expected_h0_twist(n, k) + k, syzygy_dim(&f, &a, 1)),
    )?;
    run.check(
        "thooft.h0_twist",
        "h^0(E(1)) is 2n^2+3n for k = 1, 2n for k = 2 and n for general data with k >= 3",
        || match h0_twist(&f, &a, 1) {
            Ok(h) => equal(thooft_expected_h0_twist(n, k), h),
            Err(e) => verdict(false, thooft_expected_h0_twist(n, k), e.to_string()),
        },
    )?;
    run.check(
        "thooft.witness_syzygies",
        "the proof patterns bound the degree-1 syzygies of general data by n+k",
        || {
            if k < 3 {
                return skipped("needs k >= 3");
            }
            match thooft::witness_syzygy_count(&f, n, k) {
                Ok(c) => equal(n + k, c),
                Err(e) => verdict(false, n + k, e.to_string()),
            }
        },
    )?;
    run.check(
        "thooft.orbit_rank",
        "the group acts with finite stabilizers: orbit rank k^2 + 4(n+k)",
        || {
            if k < 3 {
                return skipped("needs k >= 3");
            }
            let rank = thooft::orbit_rank(&f, &d);
            verdict(
                rank == thooft::group_dim(n, k),
                json!({ "rank": thooft::group_dim(n, k), "moduli_dim": thooft_moduli_dim(n as u64, k as u64) }),
                json!({ "rank": rank, "moduli_dim": thooft::parameter_dim(n, k) - rank }),
            )
        },
    )?;
    run.check("thooft.group_invariance", "syzygy counts are invariant under the group", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
        let base = (syzygy_dim(&f, &a, 0), syzygy_dim(&f, &a, 1));
        for i in 0..opts.trials.min(20) {
            let g = thooft::ThooftGroupElement::random(&f, n, k, &mut rng);
            let moved = thooft::apply_group(&f, &g, &d);
            let b = thooft::build_thooft(&f, &moved);
            let got = (syzygy_dim(&f, &b, 0), syzygy_dim(&f, &b, 1));
            if got != base {
                let mut out = equal(base, got);
                out.witness = Some(json!({ "element": i, "datum": moved.to_json(&f) }));
                return out;
            }
        }
        equal(base, base)
    })?;
    Ok(run.finish(n, k))
}

pub fn cmd_ottaviani(opts: &Options) -> Result<VerificationReport, CliError> {
    opts.check_instance()?;
    let (n, k) = (opts.n, opts.k);
    let unknowns = thooft::deformation_unknowns(n, k) as f64;
    let capacity = DEFORMATION_UNKNOWNS_AT_ONE_SECOND * opts.budget.as_secs_f64().cbrt();
    if unknowns > capacity {
        return Err(CliError::TimeBudgetExceeded {
            budget_s: opts.budget.as_secs(),
            elapsed_s: 0.0,
            completed: 0,
        });
    }
    opts.field()?;
    let mut run = Runner::new("thooft ottaviani", opts);
    run.check(
        "thooft.deformation_dim",
        "the deformation space of 't Hooft data has dimension (n+k)(6n+3k+1)",
        || {
            let second = independent_primes(2, 1)
                .ok()
                .and_then(|ps| ps.into_iter().find(|&p| p != opts.prime))
                .expect("a second prime exists");
            let mut observed = BTreeMap::new();
            for p in [opts.prime, second] {
                let g = PrimeField::new(p).expect("prime");
                let dim = thooft::random_datum(&g, n, k, opts.seed)
                    .map(|d| thooft::deformation_space_dim(&g, &thooft::build_thooft(&g, &d)));
                observed.insert(p.to_string(), dim.map_or_else(|e| json!(e.to_string()), |x| json!(x)));
            }
            let target = ottaviani_target(n as u64, k as u64);
            let ok = observed.values().all(|v| v.as_u64() == Some(target));
            verdict(ok, target, observed)
        },
    )?;
    Ok(run.finish(n, k))
}

pub fn cmd_rs_verify(opts: &Options) -> Result<VerificationReport, CliError> {
    let f = opts.field()?;
    let d = load_rs(&f, opts)?;
    let (n, k) = (d.n, d.k);
    let a = rs::build_rs(&f, &d).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut run = Runner::new("rs verify", opts);
    run.attach("datum", d.to_json(&f));

    run.check("rs.symplectic", "(F | H) with persymmetric H satisfies A J A^t = 0", || {
        equal(true, symplectic_check(&f, &a))
    })?;
    run.check(
        "rs.rank",
        "A(x) has rank k everywhere; for n = 1 the minors of H have no common zero on L",
        || {
            if n == 1 {
                match rs::line_minor_certificate_n1(&f, &d) {
                    Ok(true) => equal("certificate", "certificate"),
                    Ok(false) => verdict(false, "certificate", "minors share a root on L"),
                    Err(e) => verdict(false, "certificate", e.to_string()),
                }
            } else {
                rank_evidence_outcome(&f, &a, opts.trials, opts.seed)
            }
        },
    )?;
    run.check("rs.eq_h", "the composed multiplication map is the persymmetric block", || {
        let composed = rs::h_block_from_mult_map(&f, &d);
        let ok = composed
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, e)| *e == a.entry(i, n + k + j)));
        equal(true, ok)
    })?;
    let report = rs::max_instability_check(&f, &d, opts.trials, opts.seed);
    run.check(
        "rs.distinguished_subspace",
        "L = {f_0 = ... = f_n = 0} is maximally unstable: h^0(E|_L) = n+k",
        || match &report {
            Ok(r) => equal(n + k, r.distinguished),
            Err(e) => verdict(false, n + k, e.to_string()),
        },
    )?;
    run.check(
        "rs.uniqueness",
        "for general data every other n-plane carries fewer than n+k sections",
        || match &report {
            Ok(r) => {
                let max = r.sampled.iter().copied().max();
                let mut out = verdict(
                    r.counterexamples.is_empty() && r.skipped.is_empty(),
                    json!({ "max_below": n + k }),
                    json!({ "max": max, "counterexamples": r.counterexamples.len(), "skipped": r.skipped.len() }),
                );
                if !r.counterexamples.is_empty() || !r.skipped.is_empty() {
                    out.witness = Some(json!({ "trials": r.counterexamples, "skipped": r.skipped, "seed": opts.seed }));
                }
                out
            }
            Err(e) => verdict(false, n + k, e.to_string()),
        },
    )?;
    run.check("rs.section_bound", "an r-plane carries at most 2n+k-r sections", || {
        let mut worst = BTreeMap::new();
        let mut violations = Vec::new();
        for r in 1..=2 * n + 1 {
            let counts = rs::sample_restricted_counts(&f, &a, r + 1, opts.trials, opts.seed.wrapping_add(r as u64));
            for (trial, c) in counts.into_iter().enumerate() {
                match c {
                    Ok(c) => {
                        let w = worst.entry(r.to_string()).or_insert(0usize);
                        *w = (*w).max(c);
                        if c > 2 * n + k - r {
                            violations.push(json!({ "r": r, "trial": trial, "h0": c }));
                        }
                    }
                    Err(e) => violations.push(json!({ "r": r, "trial": trial, "error": e.to_string() })),
                }
            }
        }
        let mut out = verdict(violations.is_empty(), "h0 <= 2n+k-r", worst);
        if !violations.is_empty() {
            out.witness = Some(json!(violations));
        }
        out
    })?;
    run.check(
        "rs.orbit_rank",
        "the group acts with finite stabilizers: orbit rank 2n+2k+4",
        || {
            let rank = rs::orbit_rank(&f, &d);
            verdict(
                rank == rs::group_dim(n, k),
                json!({ "rank": rs::group_dim(n, k), "moduli_dim": rs_moduli_dim(n as u64, k as u64) }),
                json!({ "rank": rank, "moduli_dim": rs::parameter_dim(n, k) - rank }),
            )
        },
    )?;
    run.check(
        "rs.group_invariance",
        "syzygy counts and h^0(E|_L) are invariant under the group",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
            let counts = |d: &rs::RsDatum<u64>| {
                let b = rs::build_rs(&f, d).ok()?;
                let l = rs::distinguished_subspace(&f, d).ok()?;
                Some((syzygy_dim(&f, &b, 0), syzygy_dim(&f, &b, 1), h0_restricted(&f, &b, &l, opts.seed).ok()?))
            };
            let base = counts(&d);
            for i in 0..opts.trials.min(20) {
                let g = rs::RsGroupElement::random(&f, n, k, &mut rng);
                let moved = rs::apply_group(&f, &g, &d);
                let got = counts(&moved);
                if got != base {
                    let mut out = equal(base, got);
                    out.witness = Some(json!({ "element": i, "datum": moved.to_json(&f) }));
                    return out;
                }
            }
            equal(base, base)
        },
    )?;
    run.check(
        "rs.kernel",
        "(rho id, rho^-n, 0) with rho^(n+k-1) = 1 fixes every datum",
        || {
            let order = (n + k - 1) as u64;
            let Ok(g) = PrimeField::with_roots_of_unity(order) else {
                return skipped("no prime with the required roots of unity");
            };
            let rho = g.primitive_root_of_unity(order).expect("root exists");
            let datum = rs::random_datum(&g, n, k, opts.seed);
            let moved = rs::apply_group(&g, &rs::RsGroupElement::root_of_unity(&g, &rho, n, k), &datum);
            verdict(moved == datum, "fixed", json!({ "prime": g.modulus(), "fixed": moved == datum }))
        },
    )?;
    Ok(run.finish(n, k))
}

pub fn cmd_epsilon(opts: &Options) -> Result<VerificationReport, CliError> {
    opts.check_instance()?;
    let (n, k) = (opts.n, opts.k);
    if n < 2 {
        return Err(CliError::Usage("the epsilon family needs n >= 2".into()));
    }
    let f = opts.field()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let eps: Vec<u64> = (0..opts.trials.clamp(1, 10)).map(|_| f.random_nonzero(&mut rng)).collect();
    let mut run = Runner::new("rs epsilon", opts);
    run.attach("epsilon", json!(eps));
    let data: Vec<_> = eps
        .iter()
        .map(|e| {
            let a = rs::build_rs(&f, &rs::epsilon_datum(&f, n, k, e)).expect("x_0..x_n are independent");
            (e, a)
        })
        .collect();
    let first_bad = |pred: &dyn Fn(&u64, &LinearFormMatrix<u64>) -> bool| {
        data.iter().find(|(e, a)| !pred(e, a)).map(|(e, _)| **e)
    };
    let report = |bad: Option<u64>, expected: Value| {
        let mut out = verdict(bad.is_none(), expected, json!({ "failing_epsilon": bad }));
        out.witness = bad.map(|e| json!({ "epsilon": e }));
        out
    };
    run.check("epsilon.basis", "A_eps v_i = 0 for the displayed vectors v_1..v_k", || {
        report(
            first_bad(&|e, a| rs::expected_syzygy_basis(&f, n, k, e).iter().all(|v| annihilates(&f, a, v))),
            json!("annihilated"),
        )
    })?;
    run.check("epsilon.independent", "the vectors v_1..v_k are independent", || {
        report(
            first_bad(&|e, _| thooft::forms_rank(&f, &rs::expected_syzygy_basis(&f, n, k, e)) == k),
            json!(k),
        )
    })?;
    run.check("epsilon.syz1", "v_1..v_k span all degree-1 syzygies", || {
        report(first_bad(&|_, a| syzygy_dim(&f, a, 1) == k), json!(k))
    })?;
    run.check("epsilon.h0_twist", "H^0(E_eps(1)) = 0 for nonzero eps", || {
        report(first_bad(&|_, a| h0_twist(&f, a, 1) == Ok(0)), json!(0))
    })?;
    run.check(
        "epsilon.separation",
        "general 't Hooft data have h^0(E(1)) = n > 0, so E_eps is not a limit of them",
        || {
            if k < 3 {
                return skipped("needs k >= 3");
            }
            match thooft::random_datum(&f, n, k, opts.seed) {
                Ok(d) => match h0_twist(&f, &thooft::build_thooft(&f, &d), 1) {
                    Ok(h) => equal(n, h),
                    Err(e) => verdict(false, n, e.to_string()),
                },
                Err(e) => verdict(false, n, e.to_string()),
            }
        },
    )?;
    Ok(run.finish(n, k))
}

pub fn cmd_report(opts: &Options) -> Result<VerificationReport, CliError> {
    opts.check_instance()?;
    let (n, k) = (opts.n as u64, opts.k as u64);
    let profile = birational_profile(n, k);
    let trace = euclid_trace(k, n);
    let mut run = Runner::new("report", opts);
    run.check("moduli.rs_dim", "RS moduli dimension (4n+2)k + 4n^2 + 2n - 4 equals dim RS - dim G", || {
        equal(rs_moduli_dim(n, k), rs_moduli_dim_from_group(n, k))
    })?;
    run.check(
        "moduli.thooft_dim",
        "5kn + 4n^2 plus dim(GL_k x Sp_{2n+2k}) is the deformation dimension (n+k)(6n+3k+1)",
        || {
            let group = k * k + (n + k) * (2 * n + 2 * k + 1);
            equal(ottaviani_target(n, k), thooft_moduli_dim(n, k) + group)
        },
    )?;
    run.check("moduli.euclid", "the Euclidean reduction ends at the closed-form affine dimension", || {
        equal(trace.closed_form(), trace.total)
    })?;
    run.check(
        "moduli.thooft_exponent",
        "reducing Mat^sym_{n+k} x Gr_k / PO with (4n-1)(n+k) extra affine dimensions",
        || match profile.thooft_affine_exponent {
            Some(e) => equal(e as i64, (4 * n as i64 - 1) * (n + k) as i64 + trace.total),
            None => skipped("needs k >= 3"),
        },
    )?;
    run.attach("profile", json!(profile));
    run.attach("euclid_trace", json!(trace));
    Ok(run.finish(opts.n, opts.k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Thooft,
    Rs,
}

pub fn cmd_splitting(opts: &Options, family: Family) -> Result<VerificationReport, CliError> {
    let f = opts.field()?;
    let (a, n, k, distinguished) = match family {
        Family::Thooft => {
            let d = load_thooft(&f, opts)?;
            (thooft::build_thooft(&f, &d), d.n, d.k, None)
        }
        Family::Rs => {
            let d = load_rs(&f, opts)?;
            let a = rs::build_rs(&f, &d).map_err(|e| CliError::Usage(e.to_string()))?;
            let line = (d.n == 1).then(|| rs::distinguished_subspace(&f, &d).map(|l| l.columns()));
            let line = line.transpose().map_err(|e| CliError::Usage(e.to_string()))?;
            (a, d.n, d.k, line)
        }
    };
    let mut run = Runner::new("splitting", opts);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x11e5);
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut disagreements = Vec::new();
    let mut jumping = Vec::new();
    for i in 0..opts.trials {
        let p = random_nonzero_point(&f, a.nvars(), &mut rng);
        let q = random_nonzero_point(&f, a.nvars(), &mut rng);
        let (Ok(pairing), Ok(split)) = (line_pairing(&f, &a, &p, &q), splitting_type_on_line(&f, &a, &p, &q)) else {
            continue;
        };
        *histogram.entry(format!("{:?}", split.0)).or_default() += 1;
        let c = corank(&f, &pairing);
        if c != split.positive_part() {
            disagreements.push(json!({ "line": i, "p": p, "q": q, "corank": c, "splitting": split.0 }));
        }
        if !split.is_trivial() {
            jumping.push(json!({ "line": i, "p": p, "q": q, "splitting": split.0 }));
        }
    }
    run.attach("splitting_types", json!(histogram));
    run.check("splitting.general", "a general line is not a jumping line", || {
        let mut out = verdict(jumping.is_empty(), json!({ "jumping": 0 }), json!({ "jumping": jumping.len() }));
        out.witness = (!jumping.is_empty()).then(|| json!(jumping));
        out
    })?;
    run.check(
        "splitting.pairing",
        "the corank of A(P) J A(Q)^t is the positive part of the splitting type",
        || {
            let mut out = verdict(
                disagreements.is_empty(),
                json!({ "disagreements": 0 }),
                json!({ "disagreements": disagreements.len() }),
            );
            out.witness = (!disagreements.is_empty()).then(|| json!(disagreements));
            out
        },
    )?;
    run.check(
        "splitting.distinguished_line",
        "for n = 1 the line L is a jumping line of maximal order k",
        || match &distinguished {
            Some(cols) => {
                let pairing = line_pairing(&f, &a, &cols[0], &cols[1]);
                let split = splitting_type_on_line(&f, &a, &cols[0], &cols[1]);
                match (pairing, split) {
                    (Ok(m), Ok(s)) => verdict(
                        corank(&f, &m) == k && s.0 == vec![k as i64, -(k as i64)],
                        json!({ "corank": k, "splitting": [k as i64, -(k as i64)] }),
                        json!({ "corank": corank(&f, &m), "splitting": s.0 }),
                    ),
                    (Err(e), _) | (_, Err(e)) => verdict(false, k, e.to_string()),
                }
            }
            None => skipped("only RS data with n = 1"),
        },
    )?;
    Ok(run.finish(n, k))
}
