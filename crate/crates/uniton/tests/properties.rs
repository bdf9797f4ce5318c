//! Property tests over randomly generated arrays, chains and adapted pairs.
//! Everything is exact, so each case is a strict equality.

mod common;

use proptest::prelude::*;
use uniton::combinatorics::{matching_check, random_adapted_pair, random_matching_array, rank_formula, realizability_degree, realizability_points};
use uniton::linalg::Matrix;
use uniton::verifier::check_unitary_involution;
use uniton::GaussRat;

use common::*;

fn point() -> impl Strategy<Value = GaussRat> {
    (-9i64..=9, 1i64..=7, -9i64..=9, 1i64..=7).prop_map(|(a, b, c, d)| GaussRat::from_fracs(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transforms_invert(seed in any::<u64>(), n in 1usize..=8, r in 0usize..=5) {
        prop_assert!(transforms_round_trip(&random_grid(seed, n, r)));
    }

    #[test]
    fn elementary_operator_identities(seed in any::<u64>(), z in point()) {
        let c = chain_of(&random_array(seed, 4, 5));
        prop_assume!(!c.has_pole_at(&z));
        let fails = identity_failures(&c, &z);
        prop_assert!(fails.is_empty(), "{:?}", fails);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn partial_maps_are_unitary_involutions(seed in any::<u64>(), z in point()) {
        let c = chain_of(&random_array(seed, 5, 3));
        let rep = check_unitary_involution(&c, None, &[z]).unwrap();
        prop_assert!(rep.pass, "{:?}", rep.detail);
    }

    #[test]
    fn dualizing_twice_is_the_identity(seed in any::<u64>(), z in point()) {
        let c = chain_of(&random_array(seed, 5, 3)).with_points(&[z.clone()]).unwrap();
        let d = c.dualize();
        let phi = c.phi_at(c.r, &z).unwrap();
        prop_assert_eq!(d.phi_at(c.r, &z).unwrap(), phi.neg());
        prop_assert_eq!(d.dualize().phi_at(c.r, &z).unwrap(), phi);
        let (f, g) = (c.generic.unwrap().f_ranks, d.generic.unwrap().f_ranks);
        if let (Some(f), Some(g)) = (f, g) {
            prop_assert!(f.iter().zip(&g).all(|(a, b)| a + b == c.n));
        }
    }

    #[test]
    fn matching_arrays_follow_the_counting_formula(seed in any::<u64>(), n in 3usize..=6, r in 1usize..=3) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..=n);
        let pair = random_adapted_pair(&mut rng, n, k, r);
        let array = match random_matching_array(&pair, seed, realizability_degree(&pair)) {
            Ok(a) => a,
            Err(_) => return Ok(()),
        };
        let pts = realizability_points();
        prop_assume!(matching_check(&array, &pair, &pts).unwrap().passed);
        let c = chain_of(&array);
        let want: Vec<usize> = (0..=r).map(|i| rank_formula(&pair, i).unwrap()).collect();
        for z in &pts {
            prop_assert_eq!(&c.f_chain_at(z).unwrap().ranks, &want);
        }
    }
}

#[test]
fn oracle_sanity_on_the_identity_stack() {
    // With no projectors pushed, C⁰₀ = S⁰₀ = I and the subset sums agree.
    let c = chain_of(&uniton::engine::F0Array::new(3, 1, vec![]).unwrap());
    let st = c.stack_at(&GaussRat::from_ints(1, 1), 0).unwrap();
    assert_eq!(brute_c(&st, 0, 0), Matrix::identity(3));
    assert_eq!(brute_s(&st, 0, 0), Matrix::identity(3));
}
