//! Textual formats for towers, rings, divisors and expressions.

use hlf_core::adeles::{ClosedPointP1, Curve, DivisorP1, RatFn};
use hlf_core::chains::{RegularChainDesc, RingDesc, RingElem};
use hlf_core::coeffbase::{factor, FqElem, FqField, FqPoly, RationalNum};
use hlf_core::tower::{gen_by_name, Element, Precision, TowerDesc};

use crate::expr::{parse, Algebra, Expr};
use crate::CliError;

/// Name of the generator of `F_q` over its prime field in expressions.
pub const FIELD_GEN: &str = "g";

pub fn field(q: u64) -> Result<FqField, CliError> {
    match factor(u128::from(q)).as_slice() {
        [(p, k)] => FqField::new(*p, *k).map_err(CliError::input),
        _ => Err(CliError::usage(format!("{q} is not a prime power"))),
    }
}

fn shape(src: &str) -> Result<(String, usize), CliError> {
    let s = src.trim();
    for (tag, ctor) in [("L(", "L"), ("C(", "C")] {
        if let Some(inner) = s.strip_prefix(tag) {
            let Some(inner) = inner.strip_suffix(')') else {
                return Err(CliError::usage(format!("unbalanced parentheses in tower {src:?}")));
            };
            let (rest, depth) = shape(inner)?;
            return Ok((format!("{ctor}{rest}"), depth + 1));
        }
    }
    Ok((String::from(s), 0))
}

/// Parses `Fq q | Qp p | L(<inner>) | C(<inner>)`. A single series
/// variable is named `t`; deeper towers use `t1, …, tn`, innermost first.
pub fn tower(src: &str) -> Result<TowerDesc, CliError> {
    let (spine, depth) = shape(src)?;
    let ctors: Vec<char> = spine.chars().take(depth).collect();
    let base = spine[depth..].trim();
    let words: Vec<&str> = base.split_whitespace().collect();
    let number = |w: &str| w.parse::<u64>().map_err(|_| CliError::usage(format!("bad number {w:?} in tower")));
    let mut t = match words.as_slice() {
        ["Fq", q] => TowerDesc::fq(field(number(q)?)?),
        ["Qp", p] => TowerDesc::padic(number(p)?).map_err(CliError::input)?,
        _ => return Err(CliError::usage(format!("bad tower base {base:?}; expected `Fq q` or `Qp p`"))),
    };
    for (i, c) in ctors.iter().rev().enumerate() {
        let name = if depth == 1 { String::from("t") } else { format!("t{}", i + 1) };
        t = if *c == 'L' { t.laurent(&name) } else { t.curly(&name) }.map_err(CliError::input)?;
    }
    Ok(t)
}

/// `lo:hi`.
pub fn window(src: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::usage(format!("bad window {src:?}; expected lo:hi"));
    let (lo, hi) = src.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Identifiers an element expression may use.
pub fn tower_names(t: &TowerDesc) -> Vec<String> {
    let mut names = t.var_names();
    match t.base() {
        TowerDesc::BasePadic(_) => names.push(String::from("p")),
        TowerDesc::BaseFq(f) if f.k() > 1 => names.push(String::from(FIELD_GEN)),
        _ => {}
    }
    names
}

fn parse_with(src: &str, names: &[String]) -> Result<Expr, CliError> {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(parse(src, &refs)?)
}

/// Evaluates expressions to tower elements at fixed caps.
pub struct ElementAlgebra<'a> {
    pub tower: &'a TowerDesc,
    pub caps: &'a Precision,
}

impl Algebra for ElementAlgebra<'_> {
    type Value = Element;
    type Error = hlf_core::Error;

    fn int(&self, n: i128) -> hlf_core::Result<Element> {
        Element::from_int(self.tower, self.caps, n)
    }
    fn ident(&self, name: &str) -> hlf_core::Result<Element> {
        if name == FIELD_GEN && self.tower.level_of(name).is_none() {
            let TowerDesc::BaseFq(f) = self.tower.base() else { unreachable!("checked by the parser") };
            return Element::from_fq(self.tower, self.caps, &f.generator());
        }
        Element::gen(self.tower, self.caps, gen_by_name(self.tower, name)?)
    }
    fn add(&self, a: &Element, b: &Element) -> hlf_core::Result<Element> {
        a.add(b)
    }
    fn sub(&self, a: &Element, b: &Element) -> hlf_core::Result<Element> {
        a.sub(b)
    }
    fn mul(&self, a: &Element, b: &Element) -> hlf_core::Result<Element> {
        a.mul(b)
    }
    fn div(&self, a: &Element, b: &Element) -> hlf_core::Result<Element> {
        a.div(b)
    }
    fn neg(&self, a: &Element) -> hlf_core::Result<Element> {
        Ok(a.neg())
    }
    fn pow(&self, a: &Element, e: i64) -> hlf_core::Result<Element> {
        a.pow(e)
    }
}

pub fn element_expr(src: &str, tower: &TowerDesc) -> Result<Expr, CliError> {
    parse_with(src, &tower_names(tower))
}

pub fn element(src: &str, tower: &TowerDesc, caps: &Precision) -> Result<Element, CliError> {
    Ok(element_expr(src, tower)?.eval(&ElementAlgebra { tower, caps })?)
}

/// `Zt p`, `Z p` or `Fq q x,y,…`.
pub fn ring(src: &str) -> Result<RingDesc, CliError> {
    let words: Vec<&str> = src.split_whitespace().collect();
    let number = |w: &str| w.parse::<u64>().map_err(|_| CliError::usage(format!("bad number {w:?} in ring")));
    let ring = match words.as_slice() {
        ["Zt", p] => RingDesc::zt(number(p)?),
        ["Z", p] => RingDesc::z(number(p)?),
        ["Fq", q, vars] => {
            let vars: Vec<&str> = vars.split(',').map(str::trim).collect();
            if vars.contains(&FIELD_GEN) {
                return Err(CliError::usage(format!("{FIELD_GEN} names the field generator")));
            }
            RingDesc::poly(field(number(q)?)?, &vars)
        }
        _ => return Err(CliError::usage(format!("bad ring {src:?}; expected `Zt p`, `Z p` or `Fq q x,y`"))),
    };
    ring.map_err(CliError::input)
}

pub fn chain(ring_src: &str, flag_src: &str) -> Result<RegularChainDesc, CliError> {
    let ring = ring(ring_src)?;
    let flag: Vec<&str> = flag_src.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    RegularChainDesc::new(ring, &flag).map_err(CliError::input)
}

struct RingAlgebra<'a>(&'a RingDesc);

impl Algebra for RingAlgebra<'_> {
    type Value = RingElem;
    type Error = hlf_core::Error;

    fn int(&self, n: i128) -> hlf_core::Result<RingElem> {
        Ok(RingElem::from_int(self.0, n))
    }
    fn ident(&self, name: &str) -> hlf_core::Result<RingElem> {
        match (self.0, name) {
            (RingDesc::ZtLocal { p } | RingDesc::ZLocal { p }, "p") => Ok(RingElem::from_int(self.0, i128::from(*p))),
            (RingDesc::PolyLocal { field, .. }, FIELD_GEN) => RingElem::from_fq(self.0, &field.generator()),
            _ => RingElem::var(self.0, name),
        }
    }
    fn add(&self, a: &RingElem, b: &RingElem) -> hlf_core::Result<RingElem> {
        a.add(b)
    }
    fn sub(&self, a: &RingElem, b: &RingElem) -> hlf_core::Result<RingElem> {
        a.sub(b)
    }
    fn mul(&self, a: &RingElem, b: &RingElem) -> hlf_core::Result<RingElem> {
        a.mul(b)
    }
    fn div(&self, a: &RingElem, b: &RingElem) -> hlf_core::Result<RingElem> {
        a.div(b)
    }
    fn neg(&self, a: &RingElem) -> hlf_core::Result<RingElem> {
        Ok(a.neg())
    }
    fn pow(&self, a: &RingElem, e: i64) -> hlf_core::Result<RingElem> {
        a.pow(e)
    }
}

/// An element of the fraction field of a supported local ring.
pub fn ring_element(src: &str, ring: &RingDesc) -> Result<RingElem, CliError> {
    let mut names = ring.vars();
    match ring {
        RingDesc::ZtLocal { .. } | RingDesc::ZLocal { .. } => names.push(String::from("p")),
        RingDesc::PolyLocal { field, .. } if field.k() > 1 => names.push(String::from(FIELD_GEN)),
        _ => {}
    }
    Ok(parse_with(src, &names)?.eval(&RingAlgebra(ring))?)
}

/// Rational functions in `var` over `F_q`.
struct RatFnAlgebra<'a> {
    field: &'a FqField,
    var: &'a str,
}

impl Algebra for RatFnAlgebra<'_> {
    type Value = RatFn;
    type Error = hlf_core::Error;

    fn int(&self, n: i128) -> hlf_core::Result<RatFn> {
        let c = self.field.from_int((n % i128::from(self.field.p())) as i64);
        Ok(RatFn::from_poly(FqPoly::constant(c)))
    }
    fn ident(&self, name: &str) -> hlf_core::Result<RatFn> {
        if name == self.var {
            Ok(RatFn::var(self.field))
        } else {
            Ok(RatFn::from_poly(FqPoly::constant(self.field.generator())))
        }
    }
    fn add(&self, a: &RatFn, b: &RatFn) -> hlf_core::Result<RatFn> {
        a.add(b)
    }
    fn sub(&self, a: &RatFn, b: &RatFn) -> hlf_core::Result<RatFn> {
        a.sub(b)
    }
    fn mul(&self, a: &RatFn, b: &RatFn) -> hlf_core::Result<RatFn> {
        a.mul(b)
    }
    fn div(&self, a: &RatFn, b: &RatFn) -> hlf_core::Result<RatFn> {
        a.div(b)
    }
    fn neg(&self, a: &RatFn) -> hlf_core::Result<RatFn> {
        Ok(a.neg())
    }
    fn pow(&self, a: &RatFn, e: i64) -> hlf_core::Result<RatFn> {
        a.pow(e)
    }
}

/// A rational function of `var` over `F_q`.
pub fn ratfn(src: &str, field: &FqField, var: &str) -> Result<RatFn, CliError> {
    let mut names = vec![String::from(var)];
    if field.k() > 1 {
        names.push(String::from(FIELD_GEN));
    }
    Ok(parse_with(src, &names)?.eval(&RatFnAlgebra { field, var })?)
}

pub fn poly(src: &str, field: &FqField, var: &str) -> Result<FqPoly, CliError> {
    let f = ratfn(src, field, var)?;
    if !f.den().is_one() {
        return Err(CliError::usage(format!("{src:?} is not a polynomial")));
    }
    Ok(f.num().clone())
}

pub fn constant(src: &str, field: &FqField) -> Result<FqElem, CliError> {
    let f = poly(src, field, "_")?;
    if f.degree().unwrap_or(0) > 0 {
        return Err(CliError::usage(format!("{src:?} is not a constant")));
    }
    Ok(f.coeffs().first().cloned().unwrap_or_else(|| field.zero()))
}

/// `inf` or `(π(u))` with `π` monic irreducible.
pub fn point(src: &str, field: &FqField) -> Result<ClosedPointP1, CliError> {
    let s = src.trim();
    if s == "inf" {
        return Ok(ClosedPointP1::Infinity);
    }
    ClosedPointP1::finite(poly(s, field, "u")?).map_err(CliError::input)
}

/// A comma separated list of `n*point` terms, such as `3*inf, -1*(u^2+u+1)`.
pub fn divisor(src: &str, field: &FqField) -> Result<DivisorP1, CliError> {
    let mut terms: Vec<(ClosedPointP1, i64)> = Vec::new();
    for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (n, pt) = match item.split_once('*') {
            Some((n, pt)) if n.trim().parse::<i64>().is_ok() => (n.trim().parse::<i64>().unwrap(), pt),
            _ => (1, item),
        };
        let pt = point(pt, field)?;
        match terms.iter_mut().find(|(x, _)| *x == pt) {
            Some((_, m)) => *m += n,
            None => terms.push((pt, n)),
        }
    }
    DivisorP1::new(field, &terms).map_err(CliError::input)
}

/// `s=a` for the line `V(s − a)`, `u=b` for `V(u − b)`.
pub fn curve(src: &str, field: &FqField) -> Result<Curve, CliError> {
    let bad = || CliError::usage(format!("bad curve {src:?}; expected s=a or u=b"));
    let (axis, c) = src.split_once('=').ok_or_else(bad)?;
    let c = constant(c, field)?;
    match axis.trim() {
        "s" => Ok(Curve::S(c)),
        "u" => Ok(Curve::U(c)),
        _ => Err(bad()),
    }
}

/// `a` or `a/b` with integers `a, b`.
pub fn rational(src: &str) -> Result<RationalNum, CliError> {
    let bad = || CliError::usage(format!("bad rational {src:?}"));
    let int = |s: &str| s.trim().parse::<i128>().map_err(|_| bad());
    Ok(match src.split_once('/') {
        Some((a, b)) => RationalNum::new(int(a)?, int(b)?).map_err(CliError::input)?,
        None => RationalNum::from_int(int(src)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers_name_their_variables() {
        let t = tower("C(Qp 5)").unwrap();
        assert_eq!(t.to_string(), "Curly(BasePadic(5))");
        assert_eq!(t.var_names(), ["t"]);
        let t = tower("L( L(Fq 4))").unwrap();
        assert_eq!(t.pretty(), "F_4((t1))((t2))");
        let t = tower("L(C(Qp 3))").unwrap();
        assert_eq!(t.pretty(), "Q_3{{t1}}((t2))");
        assert!(tower("L(Qp 6)").is_err());
        assert!(tower("Fq 6").is_err());
        assert!(tower("L(Fq 4").is_err());
    }

    #[test]
    fn divisors_collect_terms() {
        let f = field(2).unwrap();
        let d = divisor("3*inf, -1*(u^2+u+1), (u)", &f).unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.coeff(&ClosedPointP1::Infinity), 3);
        assert!(divisor("2*(u^2+1)", &f).is_err());
    }

    #[test]
    fn curves_and_rationals() {
        let f = field(9).unwrap();
        assert_eq!(curve("s = g+1", &f).unwrap(), Curve::S(f.from_coeffs(&[1, 1])));
        assert!(curve("x=1", &f).is_err());
        assert_eq!(rational("-6/4").unwrap(), RationalNum::new(-3, 2).unwrap());
    }
}
