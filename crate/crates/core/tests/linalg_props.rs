use proptest::prelude::*;

use instanton_core::field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
use instanton_core::linalg::{prime_consensus, Matrix};

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

fn over<F: Field>(f: &F, rows: usize, cols: usize, entries: &[i64]) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, cols, |i, j| f.from_i64(entries[i * cols + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_transpose_invariant((r, c, e) in small_matrix()) {
        let f = PrimeField::new(7).unwrap();
        let m = over(&f, r, c, &e);
        prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
    }

    #[test]
    fn kernel_vectors_are_annihilated((r, c, e) in small_matrix(), p in prop::sample::select(vec![2u64, 3, 7, DEFAULT_PRIME])) {
        let f = PrimeField::new(p).unwrap();
        let m = over(&f, r, c, &e);
        let kernel = m.kernel_basis(&f);
        for v in &kernel {
            prop_assert!(m.mul_vec(&f, v).iter().all(|x| f.is_zero(x)));
        }
        prop_assert_eq!(m.rank(&f) + kernel.len(), c);
        prop_assert_eq!(Matrix::from_rows(c, kernel).rank(&f), c - m.rank(&f));
    }

    // entries in [-3, 3] and size <= 6 bound every minor by 6! * 3^6 < 2^31 - 1,
    // so the rank over Q and modulo the default prime coincide
    #[test]
    fn prime_rank_matches_rational_rank((r, c, e) in small_matrix()) {
        let fp = PrimeField::new(DEFAULT_PRIME).unwrap();
        prop_assert_eq!(over(&fp, r, c, &e).rank(&fp), over(&Rationals, r, c, &e).rank(&Rationals));
    }

    #[test]
    fn inverse_is_two_sided(n in 1usize..=5, seed in any::<u64>()) {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let m = Matrix::from_fn(n, n, |_, _| f.random(&mut rng));
        match m.inverse(&f) {
            Some(inv) => {
                prop_assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, n));
                prop_assert_eq!(inv.mul(&f, &m), Matrix::identity(&f, n));
                prop_assert!(!f.is_zero(&m.det(&f)));
            }
            None => prop_assert!(f.is_zero(&m.det(&f))),
        }
    }

    #[test]
    fn determinant_is_multiplicative(n in 1usize..=4, a in prop::collection::vec(-5i64..=5, 16), b in prop::collection::vec(-5i64..=5, 16)) {
        let f = Rationals;
        let (ma, mb) = (over(&f, n, n, &a), over(&f, n, n, &b));
        prop_assert_eq!(ma.mul(&f, &mb).det(&f), f.mul(&ma.det(&f), &mb.det(&f)));
    }

    #[test]
    fn solve_returns_solutions((r, c, e) in small_matrix(), x in prop::collection::vec(-4i64..=4, 6)) {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let m = over(&f, r, c, &e);
        let x: Vec<u64> = x[..c].iter().map(|&v| f.from_i64(v)).collect();
        let b = m.mul_vec(&f, &x);
        let y = m.solve(&f, &b).expect("b lies in the image");
        prop_assert_eq!(m.mul_vec(&f, &y), b);
    }
}

#[test]
fn identical_inputs_give_identical_echelon_forms() {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let m = Matrix::from_fn(5, 7, |i, j| f.from_i64((i * 7 + j * j) as i64 % 5 - 2));
    let a = m.rref(&f);
    let b = m.clone().rref(&f);
    assert_eq!(a.matrix, b.matrix);
    assert_eq!(a.pivots, b.pivots);
}

#[test]
fn consensus_prefers_the_agreeing_pair() {
    let primes = [DEFAULT_PRIME, 2_147_483_629, 2_147_483_587];
    let c = prime_consensus(&primes, |_| 4);
    assert!(c.unanimous);
    assert_eq!(c.value, 4);
    // the 2x2 matrix [[1, 1], [1, 8]] drops rank only modulo 7
    let c = prime_consensus(&[7, 11, 13], |f| {
        Matrix::from_fn(2, 2, |i, j| f.from_i64(if i == 1 && j == 1 { 8 } else { 1 })).rank(f)
    });
    assert!(!c.unanimous);
    assert_eq!(c.value, 2);
}
