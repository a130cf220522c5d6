//! Randomized checks of the adelic complex on the projective line against
//! the closed forms `h^0(O(d)) = max(d + 1, 0)` and `h^1 = max(−d − 1, 0)`.

use proptest::prelude::*;

use hlf_core::adeles::{
    closed_points, cohomology_p1, global_sections, weak_approx, AdeleVector1, ClosedPointP1, DivisorP1, RatFn,
};
use hlf_core::coeffbase::{FqField, FqPoly};

fn field(k: usize) -> FqField {
    [FqField::prime(2), FqField::prime(3), FqField::new(2, 2)][k].clone().unwrap()
}

/// A divisor with coefficients drawn from `coeffs`, one per point of
/// degree at most two.
fn divisor(f: &FqField, coeffs: &[i64]) -> DivisorP1 {
    let points = closed_points(f, 2).unwrap();
    let terms: Vec<(ClosedPointP1, i64)> = points.into_iter().zip(coeffs.iter().copied()).collect();
    DivisorP1::new(f, &terms).unwrap()
}

fn ratfn(f: &FqField, num: &[i64], den: &[i64]) -> RatFn {
    let den = FqPoly::from_ints(f, den);
    let den = if den.is_zero() { FqPoly::one(f) } else { den };
    RatFn::new(FqPoly::from_ints(f, num), den).unwrap()
}

fn small_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -2i64..3], 0..6)
}

fn poly_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cohomology_matches_the_closed_forms(k in 0usize..3, coeffs in small_coeffs()) {
        let d = divisor(&field(k), &coeffs);
        let deg = d.degree();
        let result = cohomology_p1(&d).unwrap();
        prop_assert!(result.stable);
        prop_assert_eq!(result.h0 as i64, (deg + 1).max(0));
        prop_assert_eq!(result.h1 as i64, (-deg - 1).max(0));
    }

    #[test]
    fn linearly_equivalent_divisors_agree(k in 0usize..3, coeffs in small_coeffs(), num in poly_coeffs(), den in poly_coeffs()) {
        let f = field(k);
        let g = ratfn(&f, &num, &den);
        prop_assume!(!g.is_zero());
        let d = divisor(&f, &coeffs);
        let moved = d.add(&DivisorP1::principal(&g).unwrap()).unwrap();
        let (a, b) = (cohomology_p1(&d).unwrap(), cohomology_p1(&moved).unwrap());
        prop_assert_eq!((a.h0, a.h1), (b.h0, b.h1));
    }

    #[test]
    fn global_sections_lie_in_the_riemann_roch_space(k in 0usize..3, coeffs in small_coeffs()) {
        let f = field(k);
        let d = divisor(&f, &coeffs);
        let sections = global_sections(&d).unwrap();
        prop_assert_eq!(sections.len(), cohomology_p1(&d).unwrap().h0);
        for s in &sections {
            prop_assert!(!s.is_zero());
            let div = DivisorP1::principal(s).unwrap().add(&d).unwrap();
            prop_assert!(div.terms().all(|(_, c)| *c >= 0));
        }
    }

    #[test]
    fn weak_approximation_meets_every_target(k in 0usize..3, picks in prop::collection::vec((0usize..6, poly_coeffs()), 1..4), c in 0i64..3) {
        let f = field(k);
        let points = closed_points(&f, 2).unwrap();
        let mut targets: Vec<(ClosedPointP1, RatFn)> = Vec::new();
        for (i, num) in picks {
            let x = points[i % points.len()].clone();
            if targets.iter().all(|(y, _)| *y != x) {
                targets.push((x, ratfn(&f, &num, &[1])));
            }
        }
        let g = weak_approx(&f, &targets, c).unwrap();
        for (x, a) in &targets {
            let diff = g.sub(a).unwrap();
            prop_assert!(x.valuation(&diff).is_none_or(|v| v >= c), "at {x}: {diff}");
        }
    }

    #[test]
    fn diagonal_adeles_form_a_ring(k in 0usize..3, a in poly_coeffs(), b in poly_coeffs(), den in poly_coeffs()) {
        let f = field(k);
        let (g, h) = (ratfn(&f, &a, &den), ratfn(&f, &b, &[1]));
        let prec = 6;
        let (dg, dh) = (AdeleVector1::diagonal(&g, prec), AdeleVector1::diagonal(&h, prec));
        let sum = AdeleVector1::diagonal(&g.add(&h).unwrap(), prec);
        let prod = AdeleVector1::diagonal(&g.mul(&h).unwrap(), prec);
        let points = closed_points(&f, 2).unwrap();
        prop_assert!(dg.add(&dh).unwrap().agrees_at(&sum, &points).unwrap());
        prop_assert!(dg.mul(&dh).unwrap().agrees_at(&prod, &points).unwrap());
    }
}
