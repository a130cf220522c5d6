//! Randomized checks of the symbol maps out of `K_2(Q)`.

use proptest::prelude::*;

use hlf_core::coeffbase::RationalNum;
use hlf_core::milnor::{k2q_decompose, tame_at_prime, K2QImage, Symbol, SymbolSum};

fn image(x: i128, y: i128) -> K2QImage {
    let s = Symbol::new(vec![RationalNum::from_int(x), RationalNum::from_int(y)]).unwrap();
    k2q_decompose(&SymbolSum::single(s)).unwrap()
}

fn pow_mod(mut b: i128, mut e: u64, p: i128) -> i128 {
    let mut out = 1;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            out = out * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    out
}

/// `(−1)^{ab} u^b / v^a mod p` for `x = p^a u`, `y = p^b v`, computed with
/// machine integers and Fermat inverses.
fn tame_oracle(x: i128, y: i128, p: i128) -> i128 {
    let split = |mut z: i128| {
        let mut v = 0u64;
        while z % p == 0 {
            z /= p;
            v += 1;
        }
        (v, z.rem_euclid(p))
    };
    let ((a, u), (b, w)) = (split(x), split(y));
    let w_inv = pow_mod(w, (p - 2) as u64, p);
    let mut out = pow_mod(u, b, p) * pow_mod(w_inv, a, p) % p;
    if a * b % 2 == 1 {
        out = (p - out) % p;
    }
    out
}

fn nonzero() -> impl Strategy<Value = i128> {
    prop_oneof![-300i128..-1, 1i128..300]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tame_symbol_matches_integer_oracle(x in nonzero(), y in nonzero(), k in 0usize..4) {
        let p = [2u64, 3, 5, 7][k];
        let got = tame_at_prime(&RationalNum::from_int(x), &RationalNum::from_int(y), p).unwrap();
        prop_assert_eq!(got.index() as i128, tame_oracle(x, y, p as i128));
    }

    #[test]
    fn decomposition_is_bimultiplicative(a in nonzero(), b in nonzero(), c in nonzero()) {
        prop_assert_eq!(image(a * b, c), image(a, c).mul(&image(b, c)));
        prop_assert_eq!(image(c, a * b), image(c, a).mul(&image(c, b)));
    }

    #[test]
    fn decomposition_is_antisymmetric(a in nonzero(), b in nonzero()) {
        prop_assert!(image(a, b).mul(&image(b, a)).is_identity());
        prop_assert!(image(a, -a).is_identity());
    }

    #[test]
    fn steinberg_relation_holds(a in nonzero()) {
        prop_assume!(a != 1);
        prop_assert!(image(a, 1 - a).is_identity());
    }

    #[test]
    fn sums_respect_multiplicity(a in nonzero(), b in nonzero(), n in -3i64..4) {
        let s = Symbol::new(vec![RationalNum::from_int(a), RationalNum::from_int(b)]).unwrap();
        let got = k2q_decompose(&SymbolSum::new(vec![(n, s)]).unwrap()).unwrap();
        let mut expected = K2QImage::identity();
        for _ in 0..n.unsigned_abs() {
            expected = expected.mul(&image(a, b));
        }
        if n < 0 {
            expected = expected.inv();
        }
        prop_assert_eq!(got, expected);
    }
}
