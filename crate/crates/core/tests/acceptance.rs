//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::Rng;

use hlf_core::adeles::{
    a12_member, closed_points, cohomology_at_window, cohomology_p1, dim2_boundary_check, global_sections, points_on,
    ClosedPointP1, Curve, DivisorP1, Family, FamilyRule, SurfaceFlag, Dim2Window,
};
use hlf_core::chains::{hl, truncate_chain, RegularChainDesc, RingDesc, RingElem};
use hlf_core::coeffbase::{rank, FqElem, FqField, FqPoly, PadicNum, RationalNum};
use hlf_core::milnor::{border, k2q_decompose, tame_symbol, verify_relations, Homomorphism, Symbol, SymbolSum};
use hlf_core::sample::{random_nonzero, rng, SampleShape};
use hlf_core::structure::{
    additive_expand, check_admissible, local_gens, local_parameters, multiplicative_expand, rank_membership,
    prime_membership,
};
use hlf_core::tower::{reshuffle, uniformiser, unshuffle, BaseCoeff, Element, Gen, LevelPrec, Precision, TowerDesc};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>, ctx: &str) -> Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e:?}"))
}

fn fq(p: u64, k: u32) -> FqField {
    FqField::new(p, k).unwrap()
}

/// The five towers of the arithmetic catalog, each with working caps. The
/// curly windows are parameters: products want them wide, expansions want
/// a low floor but a short upper range to stay small.
fn catalog(window: (i64, i64), double_window: (i64, i64)) -> Vec<(TowerDesc, Precision)> {
    let f4t = TowerDesc::fq(fq(2, 2)).laurent("t").unwrap();
    let f3tt = TowerDesc::fq(fq(3, 1)).laurent("t1").unwrap().laurent("t2").unwrap();
    let qpt = TowerDesc::padic(5).unwrap().laurent("t").unwrap();
    let qpc = TowerDesc::padic(5).unwrap().curly("t").unwrap();
    let qpcc = TowerDesc::padic(3).unwrap().curly("t1").unwrap().curly("t2").unwrap();
    vec![
        (f4t.clone(), Precision::uniform(&f4t, 8, (0, 1), 1)),
        (f3tt.clone(), Precision::uniform(&f3tt, 6, (0, 1), 1)),
        (qpt.clone(), Precision::uniform(&qpt, 6, (0, 1), 4)),
        (qpc.clone(), Precision::uniform(&qpc, 1, window, 4)),
        (qpcc.clone(), Precision::uniform(&qpcc, 1, double_window, 3)),
    ]
}

fn base_mul(a: &BaseCoeff, b: &BaseCoeff) -> BaseCoeff {
    match (a, b) {
        (BaseCoeff::Fq(x), BaseCoeff::Fq(y)) => BaseCoeff::Fq(x.mul(y)),
        (BaseCoeff::Padic(x), BaseCoeff::Padic(y)) => BaseCoeff::Padic(x.mul(y).unwrap()),
        _ => panic!("mixed base coefficients"),
    }
}

fn base_add(a: &BaseCoeff, b: &BaseCoeff) -> BaseCoeff {
    match (a, b) {
        (BaseCoeff::Fq(x), BaseCoeff::Fq(y)) => BaseCoeff::Fq(x.add(y)),
        (BaseCoeff::Padic(x), BaseCoeff::Padic(y)) => BaseCoeff::Padic(x.add(y).unwrap()),
        _ => panic!("mixed base coefficients"),
    }
}

/// Equality of base coefficients; a missing coefficient is zero at the
/// working `p`-adic precision.
fn base_eq(a: Option<&BaseCoeff>, b: Option<&BaseCoeff>, padic: i64) -> bool {
    match (a, b) {
        (Some(BaseCoeff::Fq(x)), Some(BaseCoeff::Fq(y))) => x == y,
        (Some(BaseCoeff::Padic(x)), Some(BaseCoeff::Padic(y))) => x.sub(y).unwrap().is_zero(),
        (Some(BaseCoeff::Fq(x)), None) | (None, Some(BaseCoeff::Fq(x))) => x.is_zero(),
        (Some(BaseCoeff::Padic(x)), None) | (None, Some(BaseCoeff::Padic(x))) => x.truncate(padic).is_zero(),
        (None, None) => true,
        _ => false,
    }
}

/// Schoolbook product of the stored terms of two elements.
fn double_sum(a: &Element, b: &Element) -> BTreeMap<Vec<i64>, BaseCoeff> {
    let mut out: BTreeMap<Vec<i64>, BaseCoeff> = BTreeMap::new();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e: Vec<i64> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            let c = base_mul(&ca, &cb);
            let next = match out.get(&e) {
                Some(prev) => base_add(prev, &c),
                None => c,
            };
            out.insert(e, next);
        }
    }
    out
}

fn criterion_1() -> Check {
    for (k, (tower, caps)) in catalog((-8, 8), (-6, 6)).into_iter().enumerate() {
        // A truncated curly series only knows the valuation of its window,
        // so the axioms are checked on exact sums there.
        let curly = faces(&tower, &caps).iter().any(Option::is_some);
        let shape = SampleShape { exact: curly, ..SampleShape::default() };
        let mut r = rng(100 + k as u64);
        let mut certified = 0usize;
        for trial in 0..500 {
            let a = ok(random_nonzero(&mut r, &tower, &caps, shape), "sample")?;
            let b = ok(random_nonzero(&mut r, &tower, &caps, shape), "sample")?;
            let (va, vb) = (ok(a.valuation(), "val a")?, ok(b.valuation(), "val b")?);
            let ab = ok(a.mul(&b), "mul")?;
            let vab = ok(ab.valuation(), "val ab")?;
            ensure(vab == va + vb, || format!("{tower}: trial {trial}: v(ab) = {vab}, v(a) + v(b) = {}", va + vb))?;
            let s = ok(a.add(&b), "add")?;
            if !s.is_zero() {
                let vs = ok(s.valuation(), "val sum")?;
                ensure(vs >= va.min(vb), || format!("{tower}: trial {trial}: ultrametric inequality"))?;
                if va != vb {
                    ensure(vs == va.min(vb), || format!("{tower}: trial {trial}: strict ultrametric equality"))?;
                }
            }
            let oracle = double_sum(&a, &b);
            let got: BTreeMap<Vec<i64>, BaseCoeff> = ab.terms().into_iter().collect();
            for e in oracle.keys().chain(got.keys()) {
                if ab.knows(e) {
                    certified += 1;
                    ensure(base_eq(oracle.get(e), got.get(e), caps.padic), || format!("{tower}: trial {trial}: coefficient {e:?}"))?;
                }
            }
        }
        ensure(certified > 500, || format!("{tower}: only {certified} certified coefficients compared"))?;
    }
    Ok(())
}

/// Coefficient description of the rings in the rank-2 table of `Q_p{{t}}`:
/// the minimal `p`-adic valuation allowed for `a_i` at negative, zero and
/// positive `i`.
fn table_oracle(a: &Element, bounds: [i64; 3]) -> bool {
    a.terms().iter().all(|(e, c)| {
        let BaseCoeff::Padic(x) = c else { unreachable!() };
        let need = match e[0].signum() {
            -1 => bounds[0],
            0 => bounds[1],
            _ => bounds[2],
        };
        x.valuation().is_none_or(|v| v >= need)
    })
}

fn criterion_2() -> Check {
    let p = 5u64;
    let tower = TowerDesc::padic(p).unwrap().curly("t").unwrap();
    let caps = Precision::uniform(&tower, 1, (-8, 8), 6);
    let elt = |terms: &[(i64, i128, i128)]| -> Element {
        let terms: Vec<(Vec<i64>, BaseCoeff)> = terms
            .iter()
            .map(|&(i, n, d)| {
                let x = PadicNum::from_rational(&RationalNum::new(n, d).unwrap(), p, 6).unwrap();
                (vec![i], BaseCoeff::Padic(x))
            })
            .collect();
        Element::from_terms(&tower, &caps, &terms).unwrap()
    };
    let p_over_t = elt(&[(-1, 5, 1)]);
    ensure(ok(p_over_t.valuation(), "valuation")? == 1, || "v(p/t) != 1".into())?;

    // Each row: (label, membership rank, prime ideal?, coefficient bounds,
    // probes with frozen expected answers).
    type Row<'a> = (&'a str, usize, bool, [i64; 3], Vec<(Element, bool)>);
    let rows: Vec<Row> = vec![
        (
            "O^(1)",
            1,
            false,
            [0, 0, 0],
            vec![(p_over_t.clone(), true), (elt(&[(-1, 1, 1)]), true), (elt(&[(1, 1, 5)]), false)],
        ),
        (
            "O^(2)",
            2,
            false,
            [1, 0, 0],
            vec![(p_over_t.clone(), true), (elt(&[(-1, 1, 1)]), false), (elt(&[(0, 1, 1), (3, 1, 1), (-2, 5, 1)]), true)],
        ),
        (
            "p^(2)",
            2,
            true,
            [1, 1, 0],
            vec![(elt(&[(1, 1, 1)]), true), (elt(&[(0, 1, 1)]), false), (elt(&[(0, 5, 1), (-1, 5, 1)]), true)],
        ),
        (
            "p^(1)",
            1,
            true,
            [1, 1, 1],
            vec![(elt(&[(0, 5, 1)]), true), (elt(&[(1, 1, 1)]), false), (elt(&[(-5, 5, 1), (4, 25, 1)]), true)],
        ),
    ];
    for (label, r, prime, bounds, probes) in rows {
        for (x, expected) in probes {
            let got = if prime { ok(prime_membership(&x, r), label)? } else { ok(rank_membership(&x, r), label)? };
            ensure(got == expected, || format!("{label}: {x} gave {got}"))?;
            ensure(table_oracle(&x, bounds) == expected, || format!("{label}: oracle disagrees on {x}"))?;
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let sources = [TowerDesc::padic(3).unwrap().laurent("u").unwrap().curly("t").unwrap(), {
        let k = TowerDesc::fq(fq(5, 1)).laurent("u").unwrap();
        // F_5((u)){{t}} is a valid curly tower: its base level is valued.
        k.curly("t").unwrap()
    }];
    // The curly window is wide against the sample span, so products in the
    // source never cut off a coefficient the target still knows.
    let caps = Precision { padic: 3, levels: vec![LevelPrec::Laurent { n: 5 }, LevelPrec::Curly { lo: -8, hi: 8 }] };
    let shape = SampleShape::default();
    for (k, tower) in sources.iter().enumerate() {
        let mut r = rng(300 + k as u64);
        for trial in 0..200 {
            let a = ok(random_nonzero(&mut r, tower, &caps, shape), "sample")?;
            let b = ok(random_nonzero(&mut r, tower, &caps, shape), "sample")?;
            let (ra, rb) = (ok(reshuffle(&a), "reshuffle")?, ok(reshuffle(&b), "reshuffle")?);
            let sum = ok(reshuffle(&ok(a.add(&b), "add")?), "reshuffle sum")?;
            ensure(ok(sum.agrees_with(&ok(ra.add(&rb), "add")?), "cmp")?, || format!("{tower}: {trial}: additivity"))?;
            let prod = ok(reshuffle(&ok(a.mul(&b), "mul")?), "reshuffle product")?;
            ensure(ok(prod.agrees_with(&ok(ra.mul(&rb), "mul")?), "cmp")?, || format!("{tower}: {trial}: multiplicativity"))?;
            ensure(ok(ra.valuation(), "val")? == ok(a.valuation(), "val")?, || format!("{tower}: {trial}: valuation"))?;
            let back = ok(unshuffle(&ra), "unshuffle")?;
            ensure(back.terms() == a.terms(), || format!("{tower}: {trial}: roundtrip terms"))?;
            ensure(ok(back.agrees_with(&a), "cmp")?, || format!("{tower}: {trial}: roundtrip"))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    let qpt = TowerDesc::padic(7).unwrap().laurent("t").unwrap();
    let qpc = TowerDesc::padic(7).unwrap().curly("t").unwrap();
    let ff = TowerDesc::fq(fq(3, 2)).laurent("t1").unwrap().laurent("t2").unwrap();
    let table = [(qpt, vec![Gen::P, Gen::Var(0)]), (qpc, vec![Gen::Var(0), Gen::P]), (ff, vec![Gen::Var(0), Gen::Var(1)])];
    for (tower, want) in table {
        let caps = Precision::uniform(&tower, 6, (-6, 6), 4);
        let params = ok(local_parameters(&tower, &caps), "params")?;
        ensure(params.gens == want, || format!("{tower}: {:?}", params.gens))?;
        ensure(ok(params.verify(), "verify")?, || format!("{tower}: parameters fail verification"))?;
    }
    Ok(())
}

/// Lower faces of the window in local-parameter coordinates: a curly
/// variable is floored at its window, everything else is bounded by
/// construction.
fn faces(tower: &TowerDesc, caps: &Precision) -> Vec<Option<i64>> {
    local_gens(tower)
        .iter()
        .map(|g| match g {
            Gen::Var(i) => match caps.levels[*i] {
                LevelPrec::Curly { lo, .. } => Some(lo),
                LevelPrec::Laurent { .. } => None,
            },
            Gen::P => None,
        })
        .collect()
}

fn criterion_5() -> Check {
    let shape = SampleShape::default();
    for (k, (tower, caps)) in catalog((-30, 8), (-30, 4)).into_iter().enumerate() {
        let faces = faces(&tower, &caps);
        let mut r = rng(500 + k as u64);
        for trial in 0..500 {
            let a = ok(random_nonzero(&mut r, &tower, &caps, shape), "sample")?;
            let add = ok(additive_expand(&a), "additive")?;
            ensure(ok(ok(add.evaluate(), "evaluate")?.agrees_with(&a), "cmp")?, || format!("{tower}: {trial}: additive"))?;
            ensure(check_admissible(&add.support(), &faces), || format!("{tower}: {trial}: additive support"))?;
            let m = ok(multiplicative_expand(&a), "multiplicative")?;
            ensure(ok(ok(m.recompose(), "recompose")?.agrees_with(&a), "cmp")?, || format!("{tower}: {trial}: product"))?;
            ensure(check_admissible(&m.support(), &faces), || format!("{tower}: {trial}: product support"))?;
        }
    }
    Ok(())
}

/// The tame symbol at `p` of two nonzero integers, from first principles.
fn tame_mod_p(x: i128, y: i128, p: i128) -> i128 {
    let split = |mut n: i128| {
        let mut v = 0i128;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        (v, n.rem_euclid(p))
    };
    let ((a, u), (b, w)) = (split(x), split(y));
    let pow = |base: i128, e: i128| (0..e).fold(1i128, |acc, _| acc * base % p);
    let inv = |z: i128| pow(z, p - 2);
    let sign = if (a * b) % 2 == 1 { p - 1 } else { 1 };
    sign * pow(u, b) % p * pow(inv(w), a) % p
}

fn criterion_6() -> Check {
    let towers = [
        TowerDesc::fq(fq(5, 1)).laurent("t").unwrap(),
        TowerDesc::padic(3).unwrap().laurent("t").unwrap(),
        TowerDesc::fq(fq(2, 2)).laurent("t1").unwrap().laurent("t2").unwrap(),
    ];
    let shape = SampleShape::default();
    let mut r = rng(600);
    let mut done = 0;
    for (k, tower) in towers.iter().enumerate() {
        let caps = Precision::uniform(tower, 6, (0, 1), 4);
        let top = uniformiser(tower).unwrap();
        let count = if k == 0 { 68 } else { 66 };
        for trial in 0..count {
            let a = ok(random_nonzero(&mut r, tower, &caps, shape), "sample")?;
            let unit = ok(a.mul_gen_pow(top, -ok(a.valuation(), "val")?), "unit")?;
            let b = ok(random_nonzero(&mut r, tower, &caps, shape), "sample")?;
            let b = ok(b.mul_gen_pow(top, 1 - ok(b.valuation(), "val")?), "uniformiser")?;
            let sym = SymbolSum::single(ok(Symbol::new(vec![unit.clone(), b.clone()]), "symbol")?);
            let image = ok(ok(border(&sym), "border")?.product(), "product")?.ok_or("degree")?;
            let want = ok(unit.residue(), "residue")?;
            ensure(ok(image.agrees_with(&want), "cmp")?, || format!("{tower}: {trial}: border"))?;
            ensure(ok(ok(tame_symbol(&unit, &b), "tame")?.agrees_with(&want), "cmp")?, || format!("{tower}: {trial}: tame"))?;
            done += 1;
        }
    }
    ensure(done == 200, || format!("{done} border samples"))?;

    let f5t = TowerDesc::fq(fq(5, 1)).laurent("t").unwrap();
    let q3t = TowerDesc::padic(3).unwrap().laurent("t").unwrap();
    let homs = [
        Homomorphism::K2Q,
        Homomorphism::Sign,
        Homomorphism::Tame(f5t.clone(), Precision::uniform(&f5t, 8, (0, 1), 1)),
        Homomorphism::Border(q3t.clone(), Precision::uniform(&q3t, 6, (0, 1), 5)),
    ];
    for (k, h) in homs.iter().enumerate() {
        let report = ok(verify_relations(h, 200, 610 + k as u64), "harness")?;
        ensure(report.all_pass(), || format!("{h:?}: {report:?}"))?;
        ensure(report.trials == 200 && report.skipped < 20, || format!("{h:?}: {report:?}"))?;
    }

    let q = |n| RationalNum::from_int(n);
    let two_three = k2q_decompose(&SymbolSum::single(Symbol::new(vec![q(2), q(3)]).unwrap())).unwrap();
    ensure(two_three.sign == 1, || "sign of {2,3}".into())?;
    let comps: Vec<(u64, u64)> = two_three.components.iter().map(|(p, c)| (*p, c.index())).collect();
    ensure(comps == [(3, 2)], || format!("{{2,3}} components {comps:?}"))?;
    ensure(tame_mod_p(2, 3, 3) == 2 && tame_mod_p(2, 3, 2) == 1, || "tame oracle for {2,3}".into())?;
    let minus = k2q_decompose(&SymbolSum::single(Symbol::new(vec![q(-1), q(-1)]).unwrap())).unwrap();
    ensure(minus.sign == -1 && minus.components.is_empty(), || format!("{{-1,-1}} gave {minus:?}"))?;

    // Independent check of the prime components on integer pairs.
    for (x, y) in [(6i128, 10i128), (-12, 45), (7, 49), (18, -50)] {
        let img = k2q_decompose(&SymbolSum::single(Symbol::new(vec![q(x), q(y)]).unwrap())).unwrap();
        for p in [3i128, 5, 7] {
            let want = tame_mod_p(x, y, p) as u64;
            let got = img.components.get(&(p as u64)).map_or(1, |c| c.index());
            ensure(got == want, || format!("tame at {p} of {{{x},{y}}}: {got} vs {want}"))?;
        }
    }
    Ok(())
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

fn criterion_7() -> Check {
    let zt = RingDesc::zt(5).unwrap();
    let f3 = fq(3, 1);
    let examples = [
        (RegularChainDesc::new(zt.clone(), &["t", "p"]).unwrap(), TowerDesc::padic(5).unwrap().laurent("t").unwrap()),
        (RegularChainDesc::new(zt, &["p", "t"]).unwrap(), TowerDesc::padic(5).unwrap().curly("t").unwrap()),
        (
            RegularChainDesc::new(RingDesc::poly(f3.clone(), &["t1", "t2"]).unwrap(), &["t2", "t1"]).unwrap(),
            TowerDesc::fq(f3).laurent("t1").unwrap().laurent("t2").unwrap(),
        ),
    ];
    for (chain, want) in &examples {
        let got = ok(hl(chain), "hl")?;
        ensure(&got == want, || format!("hl gave {got}, expected {want}"))?;
    }
    let rings = [
        RingDesc::zt(2).unwrap(),
        RingDesc::zt(3).unwrap(),
        RingDesc::zt(7).unwrap(),
        RingDesc::poly(fq(2, 1), &["x"]).unwrap(),
        RingDesc::poly(fq(3, 1), &["x", "y"]).unwrap(),
        RingDesc::poly(fq(2, 2), &["x", "y", "z"]).unwrap(),
    ];
    let mut checked = 0;
    for ring in rings {
        for flag in permutations(&ring.regular_sequence()) {
            let names: Vec<&str> = flag.iter().map(String::as_str).collect();
            let chain = ok(RegularChainDesc::new(ring.clone(), &names), "chain")?;
            let tower = ok(hl(&chain), "hl")?;
            for i in 0..=chain.dim() {
                let lhs = ok(tower.residue_tower(i), "residue tower")?;
                let rhs = ok(hl(&ok(truncate_chain(&chain, i), "truncate")?), "hl truncated")?;
                ensure(lhs == rhs, || format!("{ring} {flag:?} i={i}: {lhs} vs {rhs}"))?;
                checked += 1;
            }
        }
    }
    ensure(checked == 3 * 2 * 3 + 2 + 2 * 3 + 6 * 4, || format!("{checked} chain checks"))
}

/// `dim L(D)` computed as a polynomial space: `f = g / P` with `P` the
/// positive part of `D` away from infinity, `deg g ≤ deg P + n_∞`, and `g`
/// divisible by `π_x^{-n_x}` wherever `n_x < 0`.
fn h0_oracle(d: &DivisorP1) -> usize {
    let field = d.field();
    let mut pos = 0i64;
    let mut q = FqPoly::one(field);
    for (x, &n) in d.terms() {
        if let ClosedPointP1::Finite(pi) = x {
            if n > 0 {
                pos += n * pi.degree().unwrap() as i64;
            } else {
                q = q.mul(&pi.pow((-n) as u32));
            }
        }
    }
    let top = pos + d.coeff(&ClosedPointP1::Infinity);
    if top < 0 {
        return 0;
    }
    let u = FqPoly::x(field);
    let width = q.degree().unwrap().max(1);
    let rows: Vec<Vec<FqElem>> = (0..=top as u32)
        .map(|i| {
            let r = u.pow(i).rem(&q).unwrap();
            (0..width).map(|j| r.coeff(j)).collect()
        })
        .collect();
    (top as usize + 1) - rank(&rows)
}

fn in_riemann_roch_space(f: &hlf_core::adeles::RatFn, d: &DivisorP1, points: &[ClosedPointP1]) -> bool {
    points.iter().all(|x| x.valuation(f).is_none_or(|v| v >= -d.coeff(x)))
}

fn criterion_8() -> Check {
    let mut r = rng(800);
    let mut count = 0;
    for (p, k) in [(2u64, 1u32), (3, 1), (2, 2)] {
        let field = fq(p, k);
        let points = ok(closed_points(&field, 2), "points")?;
        for _ in 0..14 {
            let support = r.gen_range(1..=3);
            let mut terms = Vec::new();
            for _ in 0..support {
                let x = points[r.gen_range(0..points.len())].clone();
                terms.push((x, r.gen_range(-3..=3)));
            }
            let d = ok(DivisorP1::new(&field, &terms), "divisor")?;
            let res = ok(cohomology_p1(&d), "cohomology")?;
            let (h0, h1) = (res.h0 as i64, res.h1 as i64);
            ensure(h0 - h1 == d.degree() + 1, || format!("{d}: h0 {h0} h1 {h1} deg {}", d.degree()))?;
            ensure(res.h0 == h0_oracle(&d), || format!("{d}: h0 {h0} vs oracle {}", h0_oracle(&d)))?;
            ensure(res.stable, || format!("{d}: unstable"))?;
            let at = ok(cohomology_at_window(&d, res.window), "window")?;
            let next = ok(cohomology_at_window(&d, res.window + 5), "window + 5")?;
            ensure(at == next && at == (res.h0, res.h1), || format!("{d}: {at:?} vs {next:?}"))?;
            let basis = ok(global_sections(&d), "sections")?;
            ensure(basis.len() == res.h0, || format!("{d}: {} sections", basis.len()))?;
            ensure(basis.iter().all(|f| in_riemann_roch_space(f, &d, &points)), || format!("{d}: section outside L(D)"))?;
            count += 1;
        }
    }
    ensure(count >= 40, || format!("{count} divisors"))
}

fn criterion_9() -> Check {
    let f2 = fq(2, 1);
    let cases = [(0i64, (1usize, 0usize)), (3, (4, 0)), (-2, (0, 1))];
    for (n, want) in cases {
        let d = if n == 0 { DivisorP1::zero(&f2) } else { ok(DivisorP1::new(&f2, &[(ClosedPointP1::Infinity, n)]), "divisor")? };
        let res = ok(cohomology_p1(&d), "cohomology")?;
        ensure((res.h0, res.h1) == want && res.stable, || format!("{d}: {res:?}"))?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    let f2 = fq(2, 1);
    let ring = hlf_core::adeles::surface_ring(&f2);
    let s = RingElem::var(&ring, "s").unwrap();
    let u = RingElem::var(&ring, "u").unwrap();
    let one = RingElem::from_int(&ring, 1);
    let functions = [
        one.div(&s.add(&u).unwrap()).unwrap(),
        s.div(&u).unwrap(),
        s.mul(&s).unwrap().add(&u).unwrap().div(&one.add(&s.mul(&u).unwrap()).unwrap()).unwrap(),
        u.mul(&s).unwrap().add(&one).unwrap(),
    ];
    let curves = [Curve::S(f2.zero()), Curve::S(f2.one()), Curve::U(f2.zero()), Curve::U(f2.one())];
    let flags: Vec<SurfaceFlag> = curves.iter().flat_map(|c| points_on(c, 2)).collect();
    let caps = Precision { padic: 1, levels: vec![LevelPrec::Laurent { n: 6 }, LevelPrec::Laurent { n: 5 }] };
    let mut samples = 0;
    for f in &functions {
        let report = ok(dim2_boundary_check(f, &flags, &caps), "boundary")?;
        ensure(report.discrepancies.iter().all(|(_, n)| *n == 0) && report.max_discrepancy == 0, || format!("{report:?}"))?;
        samples += report.samples;
    }
    ensure(samples >= 20, || format!("{samples} boundary samples"))?;

    let window = Dim2Window { degree_bound: 2, r_max: 2 };
    let caps = Precision { padic: 1, levels: vec![LevelPrec::Laurent { n: 6 }, LevelPrec::Laurent { n: 4 }] };
    let curve = Curve::S(f2.zero());
    let good = ok(a12_member(&Family::new(FamilyRule::Global(u.clone())), &curve, &window, &caps), "a12")?;
    ensure(good.consistent, || format!("global family rejected: {good:?}"))?;
    let ring2 = ring.clone();
    let divergent = FamilyRule::PerPoint(Box::new(move |x: &SurfaceFlag| {
        let mut acc = RingElem::from_int(&ring2, 0);
        for (i, c) in x.point.coeffs().iter().enumerate() {
            acc = acc.add(&RingElem::from_fq(&ring2, c)?.mul(&RingElem::var(&ring2, "u")?.pow(i as i64)?)?)?;
        }
        RingElem::from_int(&ring2, 1).div(&acc)
    }));
    let bad = ok(a12_member(&Family::new(divergent), &curve, &window, &caps), "a12")?;
    ensure(!bad.consistent && !bad.witnesses.is_empty(), || format!("divergent family accepted: {bad:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("valuation and arithmetic", criterion_1),
        ("curly structure", criterion_2),
        ("reshuffle isomorphism", criterion_3),
        ("local parameter table", criterion_4),
        ("expansion roundtrips", criterion_5),
        ("Milnor symbols", criterion_6),
        ("HL functor", criterion_7),
        ("adelic Riemann-Roch", criterion_8),
        ("specific cohomology", criterion_9),
        ("dim-2 adeles", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} ({name}): PASS [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} ({name}): FAIL [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
