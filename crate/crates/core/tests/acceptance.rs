//! Acceptance gate: one line per criterion, nonzero exit on any failure
//! that is not an analysed impossibility.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use instanton_core::field::{independent_primes, Field, PrimeField, DEFAULT_PRIME};
use instanton_core::moduli::{
    birational_profile, euclid_trace, rs_moduli_dim, thooft_moduli_dim, Rationality, RsResidual,
};
use instanton_core::monad::{
    annihilates, corank, h0_restricted, h0_twist, line_pairing, random_nonzero_point,
    splitting_type_on_line, symplectic_check, syzygy_dim, LinearFormMatrix,
};
use instanton_core::poly::HomogeneousForm;
use instanton_core::{rs, thooft};

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the only violations are ones shown to be impossible to meet.
    unattainable: Option<String>,
}

impl Outcome {
    fn new(failures: Vec<String>, summary: String) -> Self {
        Outcome {
            pass: failures.is_empty(),
            detail: if failures.is_empty() { summary } else { failures.join("; ") },
            unattainable: None,
        }
    }
}

fn fp() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn within(elapsed: Duration, limit_s: u64, label: &str, failures: &mut Vec<String>) {
    if elapsed > Duration::from_secs(limit_s) {
        failures.push(format!("{label} took {:.1}s > {limit_s}s", elapsed.as_secs_f64()));
    }
}

fn ottaviani() -> Outcome {
    let primes = independent_primes(2, 1).unwrap();
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for (n, k) in [(2, 9), (3, 6), (3, 7), (4, 5), (5, 5)] {
        let target = (n + k) * (6 * n + 3 * k + 1);
        let start = Instant::now();
        for &p in &primes {
            let f = PrimeField::new(p).unwrap();
            let d = thooft::random_datum(&f, n, k, 1).unwrap();
            let dim = thooft::deformation_space_dim(&f, &thooft::build_thooft(&f, &d));
            if dim != target {
                failures.push(format!("({n},{k}) p={p}: {dim} != {target}"));
            }
        }
        within(start.elapsed(), 60, &format!("({n},{k})"), &mut failures);
        seen.push(format!("({n},{k})={target}"));
    }
    Outcome::new(failures, format!("{} over primes {primes:?}", seen.join(" ")))
}

fn section_counts() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    for n in 1..=4usize {
        for k in 1..=5usize {
            let expected = match k {
                1 => 2 * n * n + 3 * n,
                2 => 2 * n,
                _ => n,
            };
            let start = Instant::now();
            let hits = (0..10u64)
                .filter(|&seed| {
                    let d = thooft::random_datum(&f, n, k, seed).unwrap();
                    h0_twist(&f, &thooft::build_thooft(&f, &d), 1) == Ok(expected)
                })
                .count();
            let needed = if k >= 3 { 9 } else { 10 };
            if hits < needed {
                failures.push(format!("({n},{k}): {hits}/10 seeds give {expected}"));
            }
            within(start.elapsed(), 10, &format!("({n},{k})"), &mut failures);
        }
    }
    Outcome::new(failures, "n<=4, k<=5, 10 seeds each".into())
}

fn prop_3_1_syzygies() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    let mut literal = Vec::new();
    for (n, k) in [(1, 3), (2, 3), (2, 4), (3, 3)] {
        let d = thooft::random_datum(&f, n, k, 4).unwrap();
        let a = thooft::build_thooft(&f, &d);
        let canon = thooft::canonical_syzygies(&f, &d);
        if thooft::forms_rank(&f, &canon) != n + k || !canon.iter().all(|v| annihilates(&f, &a, v)) {
            failures.push(format!("({n},{k}): canonical syzygies"));
        }
        let witness = thooft::witness_syzygy_count(&f, n, k).unwrap();
        if witness != n + k {
            failures.push(format!("({n},{k}): witness blocks give {witness}"));
        }
        let split = thooft::random_split_datum(&f, n, k, 2).unwrap();
        let s = syzygy_dim(&f, &thooft::build_thooft(&f, &split), 1);
        if s != n + k {
            failures.push(format!("({n},{k}): certified split datum has syz_1 = {s}"));
        }
        let w = thooft::proof_witness_syz(&f, n, k).unwrap();
        literal.push(format!("({n},{k}):{}", syzygy_dim(&f, &thooft::build_thooft(&f, &w), 1)));
    }
    Outcome::new(
        failures,
        format!("block-wise witness = n+k; repetition pattern alone {}", literal.join(" ")),
    )
}

fn epsilon_family() -> Outcome {
    let f = fp();
    let mut rng = ChaCha8Rng::seed_from_u64(311);
    let mut failures = Vec::new();
    for (n, k) in [(2, 3), (2, 4), (3, 3)] {
        let start = Instant::now();
        for _ in 0..10 {
            let eps = f.random_nonzero(&mut rng);
            let a = rs::build_rs(&f, &rs::epsilon_datum(&f, n, k, &eps)).unwrap();
            let basis = rs::expected_syzygy_basis(&f, n, k, &eps);
            let ok = basis.iter().all(|v| annihilates(&f, &a, v))
                && thooft::forms_rank(&f, &basis) == k
                && syzygy_dim(&f, &a, 1) == k
                && h0_twist(&f, &a, 1) == Ok(0);
            if !ok {
                failures.push(format!("({n},{k}) eps={}", f.format(&eps)));
            }
        }
        within(start.elapsed(), 10, &format!("({n},{k})"), &mut failures);
    }
    Outcome::new(failures, "10 nonzero eps per (n,k)".into())
}

fn max_instability() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    let mut k1_failures = Vec::new();
    for n in 1..=3usize {
        for k in 1..=4usize {
            let d = rs::random_datum(&f, n, k, 40 + (n * 10 + k) as u64);
            let report = rs::max_instability_check(&f, &d, 50, 7).unwrap();
            if report.distinguished != n + k {
                failures.push(format!("({n},{k}): h0 on L = {}", report.distinguished));
            }
            if !report.skipped.is_empty() {
                failures.push(format!("({n},{k}): {} n-planes skipped", report.skipped.len()));
            }
            if !report.counterexamples.is_empty() {
                let note = format!(
                    "({n},{k}): {}/50 n-planes reach n+k (values {:?})",
                    report.counterexamples.len(),
                    report.sampled.iter().collect::<std::collections::BTreeSet<_>>()
                );
                // a 1 × (2n+2) row of linear forms on an n-plane has at least
                // n+1 = n+k constant syzygies
                if k == 1 && report.sampled.iter().all(|&c| c == n + 1) {
                    k1_failures.push(note);
                } else {
                    failures.push(note);
                }
            }
            let a = rs::build_rs(&f, &d).unwrap();
            for (i, count) in (1..=2 * n + 1)
                .flat_map(|r| rs::sample_restricted_counts(&f, &a, r + 1, 50, r as u64).into_iter().map(move |c| (r, c)))
                .enumerate()
            {
                match count {
                    (r, Ok(c)) if c > 2 * n + k - r => failures.push(format!("({n},{k}) r={r}: {c} > {}", 2 * n + k - r)),
                    (r, Err(e)) => failures.push(format!("({n},{k}) r={r} trial {i}: {e}")),
                    _ => {}
                }
            }
        }
    }
    let mut all = failures.clone();
    all.extend(k1_failures.iter().cloned());
    let mut out = Outcome::new(all, "n<=3, k<=4: h0(L)=n+k, 50 n-planes < n+k, 50 r-planes per r within bound".into());
    if failures.is_empty() && !k1_failures.is_empty() {
        out.unattainable = Some(
            "for k = 1 every n-plane has h0 >= n+1 = n+k, so L is never unique".into(),
        );
    }
    out
}

fn orbit_ranks() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    for (n, k) in [(1usize, 3usize), (2, 3)] {
        let d = thooft::random_datum(&f, n, k, 6).unwrap();
        let rank = thooft::orbit_rank(&f, &d);
        let diff = thooft::parameter_dim(n, k) - rank;
        if rank != 4 * (n + k) + k * k || diff as u64 != thooft_moduli_dim(n as u64, k as u64) || diff != 5 * k * n + 4 * n * n {
            failures.push(format!("'t Hooft ({n},{k}): rank {rank}, difference {diff}"));
        }
        let d = rs::random_datum(&f, n, k, 6);
        let rank = rs::orbit_rank(&f, &d);
        let diff = rs::parameter_dim(n, k) - rank;
        if rank != 2 * n + 2 * k + 4 || diff != (4 * n + 2) * k + 4 * n * n + 2 * n - 4 || diff as u64 != rs_moduli_dim(n as u64, k as u64) {
            failures.push(format!("RS ({n},{k}): rank {rank}, difference {diff}"));
        }
    }
    Outcome::new(failures, "'t Hooft and RS at (1,3), (2,3)".into())
}

fn line_checks(
    f: &PrimeField,
    a: &LinearFormMatrix<u64>,
    p: &[u64],
    q: &[u64],
    expect_trivial: bool,
    label: &str,
    failures: &mut Vec<String>,
) {
    let pairing = line_pairing(f, a, p, q).unwrap();
    let split = splitting_type_on_line(f, a, p, q).unwrap();
    let c = corank(f, &pairing);
    if c != split.positive_part() {
        failures.push(format!("{label}: pairing corank {c} vs splitting {:?}", split.0));
    }
    if expect_trivial && (c != 0 || !split.is_trivial()) {
        failures.push(format!("{label}: jumping line {:?}", split.0));
    }
}

fn splitting_types() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (n, k) in [(1usize, 3usize), (2, 3)] {
        let d = thooft::random_datum(&f, n, k, 9).unwrap();
        let a = thooft::build_thooft(&f, &d);
        for i in 0..50 {
            let p = random_nonzero_point(&f, a.nvars(), &mut rng);
            let q = random_nonzero_point(&f, a.nvars(), &mut rng);
            line_checks(&f, &a, &p, &q, true, &format!("'t Hooft ({n},{k}) line {i}"), &mut failures);
        }
    }
    for k in 1..=4usize {
        let d = rs::random_datum(&f, 1, k, 5);
        let a = rs::build_rs(&f, &d).unwrap();
        let cols = rs::distinguished_subspace(&f, &d).unwrap().columns();
        let pairing = line_pairing(&f, &a, &cols[0], &cols[1]).unwrap();
        let split = splitting_type_on_line(&f, &a, &cols[0], &cols[1]).unwrap();
        if corank(&f, &pairing) != k || split.0 != vec![k as i64, -(k as i64)] {
            failures.push(format!("RS (1,{k}) distinguished line: {:?}", split.0));
        }
        for i in 0..10 {
            let p = random_nonzero_point(&f, 4, &mut rng);
            let q = random_nonzero_point(&f, 4, &mut rng);
            line_checks(&f, &a, &p, &q, false, &format!("RS (1,{k}) line {i}"), &mut failures);
        }
    }
    Outcome::new(failures, "100 general lines trivial; RS n=1 jumping lines of corank k".into())
}

fn group_invariance() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (n, k) in [(1usize, 3usize), (2, 3)] {
        let d = thooft::random_datum(&f, n, k, 3).unwrap();
        let a = thooft::build_thooft(&f, &d);
        let base = (syzygy_dim(&f, &a, 0), syzygy_dim(&f, &a, 1));
        for i in 0..20 {
            let g = thooft::ThooftGroupElement::random(&f, n, k, &mut rng);
            let b = thooft::build_thooft(&f, &thooft::apply_group(&f, &g, &d));
            if (syzygy_dim(&f, &b, 0), syzygy_dim(&f, &b, 1)) != base || !symplectic_check(&f, &b) {
                failures.push(format!("'t Hooft ({n},{k}) element {i}"));
            }
        }
        let d = rs::random_datum(&f, n, k, 3);
        let a = rs::build_rs(&f, &d).unwrap();
        let l = rs::distinguished_subspace(&f, &d).unwrap();
        let base = (syzygy_dim(&f, &a, 0), syzygy_dim(&f, &a, 1), h0_restricted(&f, &a, &l, 1).unwrap());
        for i in 0..20 {
            let g = rs::RsGroupElement::random(&f, n, k, &mut rng);
            let moved = rs::apply_group(&f, &g, &d);
            let b = rs::build_rs(&f, &moved).unwrap();
            let l2 = rs::distinguished_subspace(&f, &moved).unwrap();
            let got = (syzygy_dim(&f, &b, 0), syzygy_dim(&f, &b, 1), h0_restricted(&f, &b, &l2, 1).unwrap());
            if got != base {
                failures.push(format!("RS ({n},{k}) element {i}: {got:?} vs {base:?}"));
            }
        }
    }
    for (n, k) in [(1usize, 3usize), (2, 3), (3, 4), (2, 2)] {
        let order = (n + k - 1) as u64;
        let f = PrimeField::with_roots_of_unity(order).unwrap();
        let rho = f.primitive_root_of_unity(order).unwrap();
        let d = rs::random_datum(&f, n, k, 11);
        if rs::apply_group(&f, &rs::RsGroupElement::root_of_unity(&f, &rho, n, k), &d) != d {
            failures.push(format!("mu_{order} kernel moves ({n},{k}) over p={}", f.modulus()));
        }
    }
    Outcome::new(failures, "20 elements per family at (1,3), (2,3); mu kernel fixes data".into())
}

fn arithmetic() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    for n in 1..=32u64 {
        for k in 1..=32u64 {
            let p = birational_profile(n, k);
            let g = gcd(n, k);
            let either_odd = n % 2 == 1 || k % 2 == 1;
            let rs_dim = (4 * n + 2) * k + 4 * n * n + 2 * n;
            let rs_ok = p.rs_poincare == either_odd
                && p.rs_residual == if either_odd { RsResidual::BMu2 } else { RsResidual::End2ModSl2 }
                && p.rs_stack_exponent == if either_odd { rs_dim - 4 } else { rs_dim - 9 }
                && p.rs_space_rational;
            let thooft_ok = if k >= 3 {
                let verdict = if g % 4 != 0 {
                    Rationality::Rational
                } else if g % 16 != 0 {
                    Rationality::StablyRational
                } else {
                    Rationality::Unknown
                };
                p.rationality == Some(verdict) && p.thooft_poincare == Some(g % 2 == 1)
            } else {
                p.rationality.is_none() && p.thooft_poincare.is_none()
            };
            if !rs_ok || !thooft_ok {
                failures.push(format!("profile ({n},{k})"));
            }
        }
    }
    for d1 in 1..=30 {
        for d2 in 1..=30 {
            let t = euclid_trace(d1, d2);
            if t.total != t.closed_form() {
                failures.push(format!("euclid ({d1},{d2}): {} vs {}", t.total, t.closed_form()));
            }
        }
    }
    within(start.elapsed(), 1, "arithmetic layer", &mut failures);
    Outcome::new(failures, "profiles n,k<=32; euclid d1,d2<=30".into())
}

fn structural() -> Outcome {
    let f = fp();
    let mut failures = Vec::new();
    let (n, k) = (2usize, 3usize);
    let eps = 5u64;
    let a = rs::build_rs(&f, &rs::epsilon_datum(&f, n, k, &eps)).unwrap();
    let zero = HomogeneousForm::zero(&f, 6, 1);
    let x = |i: usize| HomogeneousForm::variable(&f, 6, i);
    let y = |i: usize| HomogeneousForm::variable(&f, 6, 3 + i);
    let ey1 = y(1).scale(&f, &eps);
    let f_rows = [
        [x(0), x(1), x(2), zero.clone(), zero.clone()],
        [zero.clone(), x(0), x(1), x(2), zero.clone()],
        [zero.clone(), zero.clone(), x(0), x(1), x(2)],
    ];
    let h_rows = [
        [ey1.clone(), zero.clone(), y(0), y(1), y(2)],
        [zero.clone(), y(0), y(1), y(2), zero.clone()],
        [y(0), y(1), y(2), zero.clone(), ey1.clone()],
    ];
    for i in 0..3 {
        for j in 0..5 {
            if a.entry(i, j) != f_rows[i][j] {
                failures.push(format!("F[{i}][{j}]"));
            }
            if a.entry(i, 5 + j) != h_rows[i][j] {
                failures.push(format!("H_eps[{i}][{j}]"));
            }
        }
    }
    for (n, k) in [(1usize, 1usize), (1, 3), (2, 3), (3, 2)] {
        let d = rs::random_datum(&f, n, k, 13);
        let a = rs::build_rs(&f, &d).unwrap();
        let composed = rs::h_block_from_mult_map(&f, &d);
        for (i, row) in composed.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if *entry != a.entry(i, n + k + j) {
                    failures.push(format!("eq:H ({n},{k}) [{i}][{j}]"));
                }
            }
        }
    }
    Outcome::new(failures, "(2,3) F and H_eps displays; composed H = persymmetric block".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("deformation dimension (n+k)(6n+3k+1)", ottaviani),
        ("'t Hooft section counts h0(E(1))", section_counts),
        ("canonical and witness degree-1 syzygies", prop_3_1_syzygies),
        ("epsilon family syzygy basis and h0(E(1)) = 0", epsilon_family),
        ("maximal instability of RS data", max_instability),
        ("orbit ranks and moduli dimensions", orbit_ranks),
        ("splitting types vs line pairing", splitting_types),
        ("group invariance and mu kernel", group_invariance),
        ("rationality tables and Euclid trace", arithmetic),
        ("structural displays", structural),
    ];
    let mut gate = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2}. {name} ({secs:.2}s): {}", i + 1, outcome.detail);
        match (&outcome.pass, &outcome.unattainable) {
            (true, _) => {}
            (false, Some(why)) => println!("       unattainable as stated: {why}"),
            (false, None) => gate = false,
        }
    }
    if gate {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
