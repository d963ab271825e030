use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use instanton_core::field::{Field, PrimeField, DEFAULT_PRIME};
use instanton_core::poly::{monomial_basis, num_monomials, solve_subspace, HomogeneousForm, Monomials, SubspaceParam};

fn fp() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn forms(seed: u64, nvars: usize, degrees: &[usize]) -> Vec<HomogeneousForm<u64>> {
    let f = fp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    degrees.iter().map(|&d| HomogeneousForm::random(&f, nvars, d, &mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_a_commutative_algebra(seed in any::<u64>(), nvars in 1usize..=4, d in prop::array::uniform3(0usize..=3)) {
        let f = fp();
        let g = forms(seed, nvars, &d);
        let (a, b, c) = (&g[0], &g[1], &g[2]);
        prop_assert_eq!(a.mul(&f, b), b.mul(&f, a));
        prop_assert_eq!(a.mul(&f, b).mul(&f, c), a.mul(&f, &b.mul(&f, c)));
        let b2 = forms(seed ^ 1, nvars, &[d[1]]).remove(0);
        prop_assert_eq!(a.mul(&f, &b.add(&f, &b2)), a.mul(&f, b).add(&f, &a.mul(&f, &b2)));
        let s = f.from_i64(-13);
        prop_assert_eq!(a.scale(&f, &s).mul(&f, b), a.mul(&f, b).scale(&f, &s));
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>(), nvars in 1usize..=5, d in prop::array::uniform2(0usize..=3)) {
        let f = fp();
        let g = forms(seed, nvars, &d);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let x: Vec<u64> = (0..nvars).map(|_| f.random(&mut rng)).collect();
        let lhs = g[0].mul(&f, &g[1]).evaluate(&f, &x);
        prop_assert_eq!(lhs, f.mul(&g[0].evaluate(&f, &x), &g[1].evaluate(&f, &x)));
    }

    #[test]
    fn restriction_commutes_with_products(seed in any::<u64>(), nvars in 2usize..=5, d in prop::array::uniform2(0usize..=2)) {
        let f = fp();
        let g = forms(seed, nvars, &d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(7));
        let sub = SubspaceParam::random(&f, nvars, 2, &mut rng);
        let lhs = g[0].mul(&f, &g[1]).restrict(&f, &sub);
        prop_assert_eq!(lhs, g[0].restrict(&f, &sub).mul(&f, &g[1].restrict(&f, &sub)));
        let y: Vec<u64> = (0..2).map(|_| f.random(&mut rng)).collect();
        prop_assert_eq!(g[0].restrict(&f, &sub).evaluate(&f, &y), g[0].evaluate(&f, &sub.push_forward(&f, &y)));
    }

    #[test]
    fn solved_subspace_kills_its_equations(seed in any::<u64>(), n in 1usize..=3) {
        let f = fp();
        let eqs = forms(seed, 2 * n + 2, &vec![1; n + 1]);
        let sub = solve_subspace(&f, &eqs).unwrap();
        prop_assert_eq!(sub.fiber_dim(), n + 1);
        for e in &eqs {
            prop_assert!(e.restrict(&f, &sub).is_zero(&f));
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), nvars in 1usize..=4, d in 0usize..=3) {
        let f = fp();
        let g = forms(seed, nvars, &[d]).remove(0);
        prop_assert_eq!(HomogeneousForm::from_json(&f, &g.to_json(&f)).unwrap(), g);
    }
}

#[test]
fn monomial_counts_and_order() {
    for nvars in 1..=6 {
        for d in 0..=4 {
            let basis = monomial_basis(nvars, d);
            assert_eq!(basis.len(), num_monomials(nvars, d));
            assert!(basis.windows(2).all(|w| w[0] > w[1]), "lex order, x0 first");
            assert!(basis.iter().all(|m| m.iter().sum::<u32>() == d as u32));
        }
    }
    assert_eq!(monomial_basis(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
}

#[test]
fn times_variable_table_is_multiplication() {
    let f = fp();
    let (src, dst) = (Monomials::new(4, 2), Monomials::new(4, 3));
    let table = src.times_variable_table(&dst);
    for (i, row) in table.iter().enumerate() {
        for (v, &j) in row.iter().enumerate() {
            let mut exps = src.exponents(i).to_vec();
            exps[v] += 1;
            assert_eq!(dst.exponents(j), exps.as_slice());
        }
    }
    let x0 = HomogeneousForm::variable(&f, 4, 0);
    assert_eq!(x0.mul(&f, &x0).coefficient(&f, &[2, 0, 0, 0]), 1);
}

#[test]
fn dependent_equations_are_rejected() {
    let f = fp();
    let x = HomogeneousForm::variable(&f, 4, 1);
    assert!(solve_subspace(&f, &[x.clone(), x.scale(&f, &3)]).is_err());
}
