//! Randomized invariants of tower arithmetic and the structure module.

use proptest::prelude::*;

use hlf_core::coeffbase::FqField;
use hlf_core::sample::{random_nonzero, rng, SampleShape};
use hlf_core::structure::{additive_expand, local_gens, prime_membership, rank_membership, unit_decompose};
use hlf_core::tower::{Element, Precision, TowerDesc};

/// Towers whose products stay exact enough for field axioms, with caps.
fn towers() -> Vec<(TowerDesc, Precision)> {
    let f4t = TowerDesc::fq(FqField::new(2, 2).unwrap()).laurent("t").unwrap();
    let f3tt = TowerDesc::fq(FqField::prime(3).unwrap()).laurent("t1").unwrap().laurent("t2").unwrap();
    let q5t = TowerDesc::padic(5).unwrap().laurent("t").unwrap();
    let q3c = TowerDesc::padic(3).unwrap().curly("t").unwrap();
    vec![
        (f4t.clone(), Precision::uniform(&f4t, 8, (0, 1), 1)),
        (f3tt.clone(), Precision::uniform(&f3tt, 5, (0, 1), 1)),
        (q5t.clone(), Precision::uniform(&q5t, 6, (0, 1), 4)),
        (q3c.clone(), Precision::uniform(&q3c, 1, (-12, 12), 4)),
    ]
}

fn sample(seed: u64, k: usize, count: usize) -> (TowerDesc, Vec<Element>) {
    let (tower, caps) = towers().swap_remove(k);
    // Curly windows only bound products of exact sums faithfully.
    let shape = SampleShape { exact: k == 3, ..SampleShape::default() };
    let mut r = rng(seed);
    let xs = (0..count).map(|_| random_nonzero(&mut r, &tower, &caps, shape).unwrap()).collect();
    (tower, xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_commutes_and_distributes(seed in any::<u64>(), k in 0usize..4) {
        let (_, xs) = sample(seed, k, 3);
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        prop_assert!(a.mul(b).unwrap().agrees_with(&b.mul(a).unwrap()).unwrap());
        let lhs = a.mul(&b.add(c).unwrap()).unwrap();
        let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn inverses_multiply_to_one(seed in any::<u64>(), k in 0usize..3) {
        let (tower, xs) = sample(seed, k, 1);
        let a = &xs[0];
        let one = Element::one(&tower, a.caps()).unwrap();
        prop_assert!(a.mul(&a.inv().unwrap()).unwrap().agrees_with(&one).unwrap());
        prop_assert_eq!(a.inv().unwrap().valuation().unwrap(), -a.valuation().unwrap());
    }

    #[test]
    fn integer_rings_and_primes_nest(seed in any::<u64>(), k in 0usize..4) {
        let (tower, xs) = sample(seed, k, 2);
        let n = tower.cdvdim();
        for a in &xs {
            for r in 1..n {
                if rank_membership(a, r + 1).unwrap() {
                    prop_assert!(rank_membership(a, r).unwrap());
                }
                if prime_membership(a, r).unwrap() {
                    prop_assert!(prime_membership(a, r + 1).unwrap());
                }
            }
            for r in 1..=n {
                if prime_membership(a, r).unwrap() {
                    prop_assert!(rank_membership(a, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn unit_decomposition_recomposes(seed in any::<u64>(), k in 0usize..4) {
        let (tower, xs) = sample(seed, k, 1);
        let a = &xs[0];
        let n = tower.cdvdim();
        let (exps, unit) = unit_decompose(a).unwrap();
        prop_assert_eq!(exps.len(), n);
        prop_assert!(rank_membership(&unit, n).unwrap());
        prop_assert!(!prime_membership(&unit, n).unwrap());
        let mut back = unit.clone();
        for (g, e) in local_gens(&tower).iter().zip(&exps) {
            back = back.mul_gen_pow(*g, *e).unwrap();
        }
        prop_assert!(back.agrees_with(a).unwrap());
    }

    #[test]
    fn additive_expansion_roundtrips(seed in any::<u64>(), k in 0usize..3) {
        let (_, xs) = sample(seed, k, 1);
        let expansion = additive_expand(&xs[0]).unwrap();
        prop_assert!(expansion.evaluate().unwrap().agrees_with(&xs[0]).unwrap());
    }
}
