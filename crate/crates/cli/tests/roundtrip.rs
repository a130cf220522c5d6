//! Printing an evaluated element and parsing it back gives the same element.

use proptest::prelude::*;

use hlf::expr::{parse, Expr};
use hlf::input::{self, ElementAlgebra};
use hlf_core::tower::{Precision, TowerDesc};

fn towers() -> Vec<(TowerDesc, Precision)> {
    ["C(Qp 5)", "L(L(Fq 2))", "L(Fq 4)", "L(Qp 3)", "C(L(Fq 3))"]
        .iter()
        .map(|src| {
            let t = input::tower(src).unwrap();
            let caps = Precision::uniform(&t, 6, (-6, 6), 5);
            (t, caps)
        })
        .collect()
}

fn ast(names: Vec<String>) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0i128..20).prop_map(Expr::Int), prop::sample::select(names).prop_map(Expr::Ident)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |e| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Div(b(x), b(y))),
            inner.clone().prop_map(move |x| Expr::Neg(b(x))),
            (inner, -2i64..4).prop_map(move |(x, e)| Expr::Pow(b(x), e)),
        ]
    })
}

fn case() -> impl Strategy<Value = (usize, Expr)> {
    (0usize..5).prop_flat_map(|k| {
        let names = input::tower_names(&towers()[k].0);
        (Just(k), ast(names))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_elements_parse_back((k, e) in case()) {
        let (tower, caps) = &towers()[k];
        let names = input::tower_names(tower);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        prop_assert_eq!(&parse(&e.to_string(), &refs).unwrap(), &e);
        let alg = ElementAlgebra { tower, caps };
        // Division by something that vanishes at precision is a domain error.
        let Ok(a) = e.eval(&alg) else { return Ok(()) };
        let b = input::element(&a.to_expr(), tower, caps).unwrap();
        prop_assert!(a.agrees_with(&b).unwrap(), "{} printed as {}", e, a.to_expr());
    }
}
