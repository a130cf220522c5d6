use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ratfn::{Expansion, RatFn};
use crate::coeffbase::{nullspace, rank, solve_affine, FqElem, FqField, FqPoly};
use crate::{Error, Result};

/// A closed point of `P^1` over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosedPointP1 {
    /// The zero set of a monic irreducible `π(u)`.
    Finite(FqPoly),
    /// The point at infinity, with uniformiser `1/u`.
    Infinity,
}

impl ClosedPointP1 {
    pub fn finite(pi: FqPoly) -> Result<Self> {
        if !pi.is_monic() || !pi.is_irreducible() {
            return Err(Error::InvalidArgument(alloc::format!("{} is not monic irreducible", pi.to_expr("u"))));
        }
        Ok(ClosedPointP1::Finite(pi))
    }

    pub fn degree(&self) -> usize {
        match self {
            ClosedPointP1::Finite(pi) => pi.degree().expect("nonzero"),
            ClosedPointP1::Infinity => 1,
        }
    }

    /// The uniformiser as a polynomial in the local coordinate (`u` at a
    /// finite point, `w = 1/u` at infinity).
    pub fn uniformiser(&self, field: &FqField) -> FqPoly {
        match self {
            ClosedPointP1::Finite(pi) => pi.clone(),
            ClosedPointP1::Infinity => FqPoly::x(field),
        }
    }

    pub fn valuation(&self, f: &RatFn) -> Option<i64> {
        match self {
            ClosedPointP1::Finite(pi) => f.valuation_at(pi),
            ClosedPointP1::Infinity => f.valuation_inf(),
        }
    }

    fn check_field(&self, field: &FqField) -> Result<()> {
        match self {
            ClosedPointP1::Finite(pi) if pi.field() != field => Err(Error::FieldMismatch),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ClosedPointP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPointP1::Finite(pi) => write!(f, "({})", pi.to_expr("u")),
            ClosedPointP1::Infinity => f.write_str("inf"),
        }
    }
}

/// All closed points of degree at most `degree_bound`, infinity last.
pub fn closed_points(field: &FqField, degree_bound: usize) -> Result<Vec<ClosedPointP1>> {
    if degree_bound == 0 {
        return Err(Error::InvalidArgument(String::from("degree bound must be positive")));
    }
    let mut out: Vec<ClosedPointP1> = (1..=degree_bound)
        .flat_map(|d| FqPoly::monics(field, d).filter(FqPoly::is_irreducible).collect::<Vec<_>>())
        .map(ClosedPointP1::Finite)
        .collect();
    out.push(ClosedPointP1::Infinity);
    Ok(out)
}

/// Expansion of a rational function at a closed point, digits below `prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub point: ClosedPointP1,
    pub series: Expansion,
}

pub fn complete_at(x: &ClosedPointP1, f: &RatFn, prec: i64) -> Result<LocalExpansion> {
    x.check_field(f.field())?;
    let series = match x {
        ClosedPointP1::Finite(pi) => Expansion::of_fraction(pi, f.num(), f.den(), 0, prec)?,
        ClosedPointP1::Infinity => {
            let w = FqPoly::x(f.field());
            if f.is_zero() {
                Expansion::zero(&w, prec)
            } else {
                let shift = f.den().degree().expect("nonzero") as i64 - f.num().degree().expect("nonzero") as i64;
                Expansion::of_fraction(&w, &f.num().reversed(), &f.den().reversed(), shift, prec)?
            }
        }
    };
    Ok(LocalExpansion { point: x.clone(), series })
}

/// A divisor `Σ n_x x` on `P^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorP1 {
    field: FqField,
    coeffs: BTreeMap<ClosedPointP1, i64>,
}

impl DivisorP1 {
    pub fn zero(field: &FqField) -> Self {
        DivisorP1 { field: field.clone(), coeffs: BTreeMap::new() }
    }

    pub fn new(field: &FqField, terms: &[(ClosedPointP1, i64)]) -> Result<Self> {
        let mut d = Self::zero(field);
        for (x, n) in terms {
            if let ClosedPointP1::Finite(pi) = x {
                ClosedPointP1::finite(pi.clone())?;
            }
            x.check_field(field)?;
            d.add_term(x.clone(), *n);
        }
        Ok(d)
    }

    fn add_term(&mut self, x: ClosedPointP1, n: i64) {
        let v = self.coeffs.get(&x).copied().unwrap_or(0) + n;
        if v == 0 {
            self.coeffs.remove(&x);
        } else {
            self.coeffs.insert(x, v);
        }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn coeff(&self, x: &ClosedPointP1) -> i64 {
        self.coeffs.get(x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<ClosedPointP1> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClosedPointP1, &i64)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|(x, n)| n * x.degree() as i64).sum()
    }

    pub fn add(&self, o: &DivisorP1) -> Result<DivisorP1> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = self.clone();
        for (x, n) in &o.coeffs {
            out.add_term(x.clone(), *n);
        }
        Ok(out)
    }

    /// The divisor `div(f)` of a nonzero rational function.
    pub fn principal(f: &RatFn) -> Result<DivisorP1> {
        if f.is_zero() {
            return Err(Error::InvalidArgument(String::from("the zero function has no divisor")));
        }
        let mut d = Self::zero(f.field());
        for (pi, e) in factor_poly(f.num()) {
            d.add_term(ClosedPointP1::Finite(pi), e);
        }
        for (pi, e) in factor_poly(f.den()) {
            d.add_term(ClosedPointP1::Finite(pi), -e);
        }
        d.add_term(ClosedPointP1::Infinity, f.valuation_inf().expect("nonzero"));
        Ok(d)
    }
}

impl fmt::Display for DivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(x, n)| alloc::format!("{n}*{x}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Monic irreducible factors with multiplicity, by trial division.
fn factor_poly(p: &FqPoly) -> Vec<(FqPoly, i64)> {
    let mut rest = p.make_monic();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().is_some_and(|k| k > 0) {
        if 2 * d > rest.degree().expect("nonzero") {
            out.push((rest.clone(), 1));
            break;
        }
        for pi in FqPoly::monics(p.field(), d).filter(FqPoly::is_irreducible) {
            let mut e = 0;
            while let Ok((q, r)) = rest.divrem(&pi) {
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((pi, e));
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// An adele of `F_q(u)`: the diagonal image of a global function (or zero)
/// with finitely many components replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdeleVector1 {
    field: FqField,
    diagonal: Option<RatFn>,
    explicit: BTreeMap<ClosedPointP1, Expansion>,
    prec: i64,
}

impl AdeleVector1 {
    /// `prec` is the absolute precision at which diagonal parts are expanded
    /// when combined with explicit components.
    pub fn zero(field: &FqField, prec: i64) -> Self {
        AdeleVector1 { field: field.clone(), diagonal: None, explicit: BTreeMap::new(), prec }
    }

    pub fn diagonal(f: &RatFn, prec: i64) -> Self {
        let mut a = Self::zero(f.field(), prec);
        a.diagonal = (!f.is_zero()).then(|| f.clone());
        a
    }

    pub fn one(field: &FqField, prec: i64) -> Self {
        Self::diagonal(&RatFn::one(field), prec)
    }

    /// Replaces the component at `x`.
    pub fn with_component(mut self, x: &LocalExpansion) -> Result<Self> {
        x.point.check_field(&self.field)?;
        if x.series.uniformiser() != &x.point.uniformiser(&self.field) {
            return Err(Error::InvalidArgument(String::from("expansion does not match its point")));
        }
        self.explicit.insert(x.point.clone(), x.series.clone());
        Ok(self)
    }

    pub fn explicit_points(&self) -> Vec<ClosedPointP1> {
        self.explicit.keys().cloned().collect()
    }

    pub fn global_part(&self) -> Option<&RatFn> {
        self.diagonal.as_ref()
    }

    /// The component at `x`.
    pub fn component(&self, x: &ClosedPointP1) -> Result<Expansion> {
        if let Some(e) = self.explicit.get(x) {
            return Ok(e.clone());
        }
        match &self.diagonal {
            Some(f) => Ok(complete_at(x, f, self.prec)?.series),
            None => Ok(Expansion::zero(&x.uniformiser(&self.field), self.prec)),
        }
    }

    /// Points outside this set carry integral components.
    pub fn bad_points(&self) -> Result<Vec<ClosedPointP1>> {
        let mut out: BTreeSet<ClosedPointP1> = self.explicit.keys().cloned().collect();
        if let Some(f) = &self.diagonal {
            for (x, n) in DivisorP1::principal(f)?.terms() {
                if *n < 0 {
                    out.insert(x.clone());
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn combine(
        &self,
        o: &AdeleVector1,
        global: impl Fn(Option<&RatFn>, Option<&RatFn>) -> Result<Option<RatFn>>,
        local: impl Fn(&Expansion, &Expansion) -> Result<Expansion>,
    ) -> Result<AdeleVector1> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let prec = self.prec.min(o.prec);
        let diagonal = global(self.diagonal.as_ref(), o.diagonal.as_ref())?.filter(|f| !f.is_zero());
        let mut explicit = BTreeMap::new();
        let keys: BTreeSet<&ClosedPointP1> = self.explicit.keys().chain(o.explicit.keys()).collect();
        for x in keys {
            explicit.insert(x.clone(), local(&self.component(x)?, &o.component(x)?)?);
        }
        Ok(AdeleVector1 { field: self.field.clone(), diagonal, explicit, prec })
    }

    pub fn add(&self, o: &AdeleVector1) -> Result<AdeleVector1> {
        self.combine(
            o,
            |a, b| match (a, b) {
                (Some(f), Some(g)) => f.add(g).map(Some),
                (f, g) => Ok(f.or(g).cloned()),
            },
            Expansion::add,
        )
    }

    pub fn neg(&self) -> AdeleVector1 {
        AdeleVector1 {
            field: self.field.clone(),
            diagonal: self.diagonal.as_ref().map(RatFn::neg),
            explicit: self.explicit.iter().map(|(x, e)| (x.clone(), e.neg())).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &AdeleVector1) -> Result<AdeleVector1> {
        self.combine(
            o,
            |a, b| match (a, b) {
                (Some(f), Some(g)) => f.mul(g).map(Some),
                _ => Ok(None),
            },
            Expansion::mul,
        )
    }

    /// Keeps the components at `points` and zeroes all others.
    pub fn restrict_to(&self, points: &[ClosedPointP1]) -> Result<AdeleVector1> {
        let mut out = Self::zero(&self.field, self.prec);
        for x in points {
            out.explicit.insert(x.clone(), self.component(x)?);
        }
        Ok(out)
    }

    /// Zeroes the components at `points`.
    pub fn restrict_away(&self, points: &[ClosedPointP1]) -> AdeleVector1 {
        let mut out = self.clone();
        for x in points {
            out.explicit.insert(x.clone(), Expansion::zero(&x.uniformiser(&self.field), self.prec));
        }
        out
    }

    /// Componentwise agreement at `points`, to the precision both carry.
    pub fn agrees_at(&self, o: &AdeleVector1, points: &[ClosedPointP1]) -> Result<bool> {
        for x in points {
            if !self.component(x)?.agrees_with(&o.component(x)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Dimensions of `H^0` and `H^1` of `O(D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub h0: usize,
    pub h1: usize,
    /// Truncation level `T` of the reported computation.
    pub window: i64,
    /// Whether the result was unchanged at `T + 5`.
    pub stable: bool,
}

const MAX_WINDOW: i64 = 64;
const STABILITY_STEP: i64 = 5;

/// The truncated complex `A(0) ⊕ A(1)(D) → A(01)` at level `T`: global
/// functions with poles of order at most `T` on `S = supp D ∪ {∞}`, local
/// integral parts `π^{-n_x} O_x / π^T O_x`, and target digits in `[-T, T)`
/// at each point of `S`.
struct Truncation {
    globals: Vec<RatFn>,
    /// Image of every generator, globals first.
    rows: Vec<Vec<FqElem>>,
    cols: usize,
}

fn truncation(d: &DivisorP1, window: i64) -> Result<Truncation> {
    let field = d.field();
    let mut points: Vec<ClosedPointP1> = d.support();
    if !points.contains(&ClosedPointP1::Infinity) {
        points.push(ClosedPointP1::Infinity);
    }
    let u = FqPoly::x(field);
    let mut globals = alloc::vec![RatFn::one(field)];
    for x in &points {
        match x {
            ClosedPointP1::Finite(pi) => {
                for k in 1..=window as u32 {
                    for i in 0..x.degree() {
                        globals.push(RatFn::new(u.pow(i as u32), pi.pow(k))?);
                    }
                }
            }
            ClosedPointP1::Infinity => {
                for k in 1..=window as u32 {
                    globals.push(RatFn::from_poly(u.pow(k)));
                }
            }
        }
    }
    let offsets: Vec<usize> = points
        .iter()
        .scan(0, |acc, x| {
            let start = *acc;
            *acc += 2 * window as usize * x.degree();
            Some(start)
        })
        .collect();
    let cols = points.iter().map(|x| 2 * window as usize * x.degree()).sum();
    let coord = |p: usize, j: i64, i: usize| offsets[p] + (j + window) as usize * points[p].degree() + i;
    let mut rows = Vec::new();
    for f in &globals {
        let mut row = alloc::vec![field.zero(); cols];
        for (p, x) in points.iter().enumerate() {
            let e = complete_at(x, f, window)?.series;
            for (j, digit) in e.digits() {
                if j < -window {
                    return Err(Error::InvalidArgument(String::from("pole beyond the window")));
                }
                for i in 0..x.degree() {
                    row[coord(p, j, i)] = digit.coeff(i);
                }
            }
        }
        rows.push(row);
    }
    for (p, x) in points.iter().enumerate() {
        let lo = (-d.coeff(x)).max(-window);
        for j in lo..window {
            for i in 0..x.degree() {
                let mut row = alloc::vec![field.zero(); cols];
                row[coord(p, j, i)] = field.one();
                rows.push(row);
            }
        }
    }
    Ok(Truncation { globals, rows, cols })
}

/// `(h0, h1)` of the truncated complex at a fixed level.
pub fn cohomology_at_window(d: &DivisorP1, window: i64) -> Result<(usize, usize)> {
    let t = truncation(d, window)?;
    let r = rank(&t.rows);
    Ok((t.rows.len() - r, t.cols - r))
}

fn base_window(d: &DivisorP1) -> i64 {
    d.terms().map(|(_, n)| n.abs()).max().unwrap_or(0) + 2
}

/// Computes `h^0` and `h^1` of `O(D)`, accepting a truncation level only
/// when the level five steps higher gives the same dimensions.
pub fn cohomology_p1(d: &DivisorP1) -> Result<CohomologyResult> {
    let mut window = base_window(d);
    let mut current = cohomology_at_window(d, window)?;
    while window + STABILITY_STEP <= MAX_WINDOW {
        let next = cohomology_at_window(d, window + STABILITY_STEP)?;
        if next == current {
            return Ok(CohomologyResult { h0: current.0, h1: current.1, window, stable: true });
        }
        window += STABILITY_STEP;
        current = next;
    }
    Err(Error::Unstable(window))
}

/// A basis of `H^0(O(D))`, read off from the kernel of the truncated
/// complex projected to the global component.
pub fn global_sections(d: &DivisorP1) -> Result<Vec<RatFn>> {
    let result = cohomology_p1(d)?;
    let t = truncation(d, result.window)?;
    let field = d.field();
    let transpose: Vec<Vec<FqElem>> = (0..t.cols).map(|c| t.rows.iter().map(|r| r[c].clone()).collect()).collect();
    let mut out = Vec::new();
    for v in nullspace(field, &transpose, t.rows.len()) {
        let mut f = RatFn::zero(field);
        for (c, g) in v.iter().zip(&t.globals) {
            if !c.is_zero() {
                f = f.add(&g.mul(&RatFn::from_poly(FqPoly::constant(c.clone())))?)?;
            }
        }
        out.push(f);
    }
    Ok(out)
}

/// A global function with `v_x(f − a_x) ≥ c` at every listed point, found by
/// solving for `f = g / Q` with a fixed denominator `Q`.
pub fn weak_approx(field: &FqField, targets: &[(ClosedPointP1, RatFn)], c: i64) -> Result<RatFn> {
    if targets.is_empty() {
        return Ok(RatFn::zero(field));
    }
    let mut seen = BTreeSet::new();
    for (x, a) in targets {
        x.check_field(field)?;
        if a.field() != field {
            return Err(Error::FieldMismatch);
        }
        if !seen.insert(x.clone()) {
            return Err(Error::InvalidArgument(String::from("target points must be distinct")));
        }
    }
    let pole = |x: &ClosedPointP1, a: &RatFn| x.valuation(a).map_or(0, |v| (-v).max(0));
    let mut base_den = FqPoly::one(field);
    for (x, a) in targets {
        if let ClosedPointP1::Finite(pi) = x {
            base_den = base_den.mul(&pi.pow(pole(x, a) as u32));
        }
    }
    let at_infinity = targets.iter().find(|(x, _)| *x == ClosedPointP1::Infinity);
    let spare = (1..)
        .flat_map(|d| FqPoly::monics(field, d).filter(FqPoly::is_irreducible).collect::<Vec<_>>())
        .find(|pi| !seen.contains(&ClosedPointP1::Finite(pi.clone())))
        .expect("infinitely many primes");
    let inf_pole = at_infinity.map_or(0, |(x, a)| pole(x, a));
    let conditions: i64 = targets.iter().map(|(x, a)| (c + pole(x, a)).max(0) * x.degree() as i64).sum();
    for extra in 0..=conditions.max(1) + 2 {
        let den = if at_infinity.is_some() { base_den.mul(&spare.pow(extra as u32)) } else { base_den.clone() };
        let dq = den.degree().expect("nonzero") as i64;
        let top = if at_infinity.is_some() { dq + inf_pole } else { dq.max(0) + conditions };
        let basis: Vec<RatFn> = (0..=top.max(0) as u32).map(|i| RatFn::new(FqPoly::x(field).pow(i), den.clone())).collect::<Result<_>>()?;
        let mut matrix: Vec<Vec<FqElem>> = Vec::new();
        let mut rhs = Vec::new();
        for (x, a) in targets {
            let lo = match x {
                ClosedPointP1::Finite(_) => -pole(x, a),
                ClosedPointP1::Infinity => dq - top,
            }
            .min(x.valuation(a).unwrap_or(c));
            let ae = complete_at(x, a, c)?.series;
            let cols: Vec<Expansion> = basis.iter().map(|b| complete_at(x, b, c).map(|e| e.series)).collect::<Result<_>>()?;
            for j in lo..c {
                for i in 0..x.degree() {
                    matrix.push(cols.iter().map(|e| e.digit(j).coeff(i)).collect());
                    rhs.push(ae.digit(j).coeff(i));
                }
            }
        }
        if matrix.is_empty() {
            return Ok(RatFn::zero(field));
        }
        if let Some(sol) = solve_affine(field, &matrix, &rhs) {
            return RatFn::new(FqPoly::new(field, sol), den);
        }
        if at_infinity.is_none() {
            break;
        }
    }
    Err(Error::NoConvergence)
}
