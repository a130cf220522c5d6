use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::desc::{LevelPrec, Precision, TowerDesc};
use super::value::{self, Ctx, Gen, Value};
use crate::coeffbase::{FqElem, PadicNum, RationalNum};
use crate::{Error, Result};

/// A base-level coefficient.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseCoeff {
    Fq(FqElem),
    Padic(PadicNum),
}

impl BaseCoeff {
    fn into_value(self) -> Value {
        match self {
            BaseCoeff::Fq(x) => Value::Fq(x),
            BaseCoeff::Padic(x) => Value::Padic(x),
        }
    }

    fn from_value(v: Value) -> Self {
        match v {
            Value::Fq(x) => BaseCoeff::Fq(x),
            Value::Padic(x) => BaseCoeff::Padic(x),
            _ => unreachable!("base value"),
        }
    }
}

/// An element of a tower, stored as a nested sparse truncated series.
///
/// `caps` are the working precision bounds used whenever a constant or a
/// monomial has to be created; the precision actually known is carried by the
/// data and only ever shrinks under arithmetic.
#[derive(Clone, Debug)]
pub struct Element {
    tower: TowerDesc,
    caps: Precision,
    data: Value,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower && self.data == other.data
    }
}

impl Element {
    pub(crate) fn from_value(tower: &TowerDesc, caps: &Precision, data: Value) -> Element {
        Element { tower: tower.clone(), caps: caps.clone(), data }
    }

    pub(crate) fn value(&self) -> &Value {
        &self.data
    }

    pub(crate) fn ctx(&self) -> Ctx<'_> {
        Ctx::new(&self.tower, &self.caps)
    }

    fn wrap(&self, data: Value) -> Element {
        Element { tower: self.tower.clone(), caps: self.caps.clone(), data }
    }

    fn build(tower: &TowerDesc, caps: &Precision, f: impl FnOnce(Ctx) -> Result<Value>) -> Result<Element> {
        caps.validate(tower)?;
        let data = f(Ctx::new(tower, caps))?;
        Ok(Element::from_value(tower, caps, data))
    }

    pub fn zero(tower: &TowerDesc, caps: &Precision) -> Result<Element> {
        Self::build(tower, caps, |c| Ok(value::zero(c)))
    }

    pub fn one(tower: &TowerDesc, caps: &Precision) -> Result<Element> {
        Self::build(tower, caps, |c| Ok(value::one(c)))
    }

    pub fn from_int(tower: &TowerDesc, caps: &Precision, n: i128) -> Result<Element> {
        Self::from_rational(tower, caps, &RationalNum::from_int(n))
    }

    pub fn from_rational(tower: &TowerDesc, caps: &Precision, x: &RationalNum) -> Result<Element> {
        Self::build(tower, caps, |c| value::from_rational(c, x))
    }

    /// A constant from the base coefficient field.
    pub fn from_base(tower: &TowerDesc, caps: &Precision, x: &BaseCoeff) -> Result<Element> {
        Self::build(tower, caps, |c| value::constant(c, &x.clone().into_value()))
    }

    pub fn from_fq(tower: &TowerDesc, caps: &Precision, x: &FqElem) -> Result<Element> {
        Self::from_base(tower, caps, &BaseCoeff::Fq(x.clone()))
    }

    pub fn from_padic(tower: &TowerDesc, caps: &Precision, x: &PadicNum) -> Result<Element> {
        Self::from_base(tower, caps, &BaseCoeff::Padic(x.clone()))
    }

    /// The exact monomial `gen^r`.
    pub fn monomial(tower: &TowerDesc, caps: &Precision, gen: Gen, r: i64) -> Result<Element> {
        Self::build(tower, caps, |c| value::monomial(c, gen, r))
    }

    pub fn gen(tower: &TowerDesc, caps: &Precision, gen: Gen) -> Result<Element> {
        Self::monomial(tower, caps, gen, 1)
    }

    /// The generator called `name`; `p` denotes the prime of a `Q_p` base.
    pub fn var(tower: &TowerDesc, caps: &Precision, name: &str) -> Result<Element> {
        Self::gen(tower, caps, gen_by_name(tower, name)?)
    }

    /// Sum of `coeff · Π gen_i^{e_i}` over the given terms, exponents
    /// listed innermost level first.
    pub fn from_terms(tower: &TowerDesc, caps: &Precision, terms: &[(Vec<i64>, BaseCoeff)]) -> Result<Element> {
        let mut acc = Element::zero(tower, caps)?;
        for (exps, c) in terms {
            if exps.len() != tower.depth() {
                return Err(Error::ShapeMismatch(String::from("one exponent per level")));
            }
            let mut m = Element::from_base(tower, caps, c)?;
            for (i, e) in exps.iter().enumerate() {
                m = m.mul_gen_pow(Gen::Var(i), *e)?;
            }
            acc = acc.add(&m)?;
        }
        Ok(acc)
    }

    /// Assembles a series from its outermost coefficients. `record` is the
    /// truncation of the outermost level.
    pub fn from_top_coeffs(
        tower: &TowerDesc,
        caps: &Precision,
        record: LevelPrec,
        coeffs: &[(i64, Element)],
    ) -> Result<Element> {
        caps.validate(tower)?;
        let inner = tower.inner().ok_or(Error::TowerMismatch)?;
        let mut map = BTreeMap::new();
        let bound = match (tower, record) {
            (TowerDesc::Laurent(..), LevelPrec::Laurent { n }) => n,
            (TowerDesc::Curly(..), LevelPrec::Curly { hi, .. }) => hi,
            _ => return Err(Error::ShapeMismatch(String::from("record does not match level"))),
        };
        for (i, c) in coeffs {
            if &c.tower != inner {
                return Err(Error::TowerMismatch);
            }
            if *i < bound && !c.is_zero() {
                map.insert(*i, c.data.clone());
            }
        }
        let data = match record {
            LevelPrec::Laurent { n } => Value::Laurent { n, coeffs: map },
            LevelPrec::Curly { lo, hi } => {
                let lo = map.keys().next().map_or(lo, |k| (*k).min(lo));
                Value::Curly { lo, hi, coeffs: map }
            }
        };
        Ok(Element::from_value(tower, caps, data))
    }

    pub fn tower(&self) -> &TowerDesc {
        &self.tower
    }

    pub fn caps(&self) -> &Precision {
        &self.caps
    }

    /// Truncation of the outermost level as currently known.
    pub fn top_precision(&self) -> Option<LevelPrec> {
        match &self.data {
            Value::Laurent { n, .. } => Some(LevelPrec::Laurent { n: *n }),
            Value::Curly { lo, hi, .. } => Some(LevelPrec::Curly { lo: *lo, hi: *hi }),
            _ => None,
        }
    }

    /// Absolute precision of a `Q_p` element.
    pub fn padic_precision(&self) -> Option<i64> {
        match &self.data {
            Value::Padic(x) => Some(x.precision()),
            _ => None,
        }
    }

    /// Same data with different working caps.
    pub fn with_caps(&self, caps: &Precision) -> Result<Element> {
        caps.validate(&self.tower)?;
        Ok(Element { tower: self.tower.clone(), caps: caps.clone(), data: self.data.clone() })
    }

    /// Forgets Laurent digits and `p`-adic digits beyond `bounds`; curly
    /// windows are kept as they are.
    pub fn truncate(&self, bounds: &Precision) -> Result<Element> {
        bounds.validate(&self.tower)?;
        let data = value::truncate(Ctx::new(&self.tower, bounds), &self.data);
        Ok(Element { tower: self.tower.clone(), caps: self.caps.clone(), data })
    }

    /// The same element with every exact curly level bounded by the caps,
    /// for algorithms that would otherwise run along an infinite tail.
    pub fn bounded(&self) -> Element {
        let data = value::bound_curly(Ctx::new(&self.tower, &self.caps), &self.data);
        Element { tower: self.tower.clone(), caps: self.caps.clone(), data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_zero()
    }

    /// Whether the outermost level is a finite sum known exactly. Finite
    /// field elements are exact, `p`-adic ones never are.
    pub fn is_exact(&self) -> bool {
        match &self.data {
            Value::Fq(_) => true,
            Value::Padic(_) => false,
            Value::Laurent { n, .. } => value::is_exact(*n),
            Value::Curly { hi, .. } => value::is_exact(*hi),
        }
    }

    fn check(&self, other: &Element) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.wrap(value::add(self.ctx(), &self.data, &other.data)?))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.wrap(value::sub(self.ctx(), &self.data, &other.data)?))
    }

    pub fn neg(&self) -> Element {
        self.wrap(value::neg(&self.data))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.wrap(value::mul(self.ctx(), &self.data, &other.data)?))
    }

    /// Inverse; fails with [`Error::PrecisionZero`] when the value is zero at
    /// working precision.
    pub fn inv(&self) -> Result<Element> {
        Ok(self.wrap(value::inv(self.ctx(), &self.data)?))
    }

    pub fn div(&self, other: &Element) -> Result<Element> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Element> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.wrap(value::one(self.ctx()));
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact multiplication by `gen^r`.
    pub fn mul_gen_pow(&self, gen: Gen, r: i64) -> Result<Element> {
        Ok(self.wrap(value::shift(self.ctx(), &self.data, gen, r)?))
    }

    /// Whether `self − other` vanishes at the precision both carry.
    pub fn agrees_with(&self, other: &Element) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Valuation of the outermost discrete valuation.
    pub fn valuation(&self) -> Result<i64> {
        if self.tower.cdvdim() == 0 {
            return Err(Error::Unsupported(String::from("a finite field carries no discrete valuation")));
        }
        value::valuation(&self.data)
    }

    /// Image in the first residue field.
    pub fn residue(&self) -> Result<Element> {
        let tower = self.tower.residue_once()?;
        let caps = self.caps.residue(&self.tower);
        let data = value::residue(self.ctx(), &self.data)?;
        Ok(Element::from_value(&tower, &caps, data))
    }

    /// The canonical section of the residue map into `target`.
    pub fn lift(r: &Element, target: &TowerDesc, caps: &Precision) -> Result<Element> {
        caps.validate(target)?;
        if target.residue_once()? != r.tower {
            return Err(Error::TowerMismatch);
        }
        let data = value::lift(Ctx::new(target, caps), &r.data)?;
        Ok(Element::from_value(target, caps, data))
    }

    /// Nonzero base coefficients with exponent vectors, innermost first.
    pub fn terms(&self) -> Vec<(Vec<i64>, BaseCoeff)> {
        self.data.terms().into_iter().map(|(e, v)| (e, BaseCoeff::from_value(v))).collect()
    }

    /// Whether the base coefficient at `exps` is determined by the data.
    pub fn knows(&self, exps: &[i64]) -> bool {
        self.data.knows(exps)
    }

    /// Coefficients of the outermost level.
    pub fn top_coeffs(&self) -> Vec<(i64, Element)> {
        let (Some(inner), Some(coeffs)) = (self.tower.inner(), self.data.coeffs()) else {
            return Vec::new();
        };
        let caps = self.caps.inner();
        coeffs.iter().map(|(i, c)| (*i, Element::from_value(inner, &caps, c.clone()))).collect()
    }

    /// Coefficient of `var^i` at the outermost level (zero if absent).
    pub fn top_coeff(&self, i: i64) -> Result<Element> {
        let inner = self.tower.inner().ok_or(Error::TowerMismatch)?;
        let caps = self.caps.inner();
        let coeffs = self.data.coeffs().expect("series");
        match coeffs.get(&i) {
            Some(c) => Ok(Element::from_value(inner, &caps, c.clone())),
            None => Element::zero(inner, &caps),
        }
    }

    /// Expression text accepted by the command-line parser.
    pub fn to_expr(&self) -> String {
        let names = self.tower.var_names();
        let terms = self.terms();
        if terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, (exps, c)) in terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            match c {
                BaseCoeff::Fq(x) => {
                    if !x.is_one() {
                        factors.push(alloc::format!("({})", x.to_expr("g")));
                    }
                }
                BaseCoeff::Padic(x) => {
                    let (v, u) = (x.valuation().unwrap(), x.unit().unwrap());
                    if u != 1 {
                        factors.push(alloc::format!("{u}"));
                    }
                    if v != 0 {
                        factors.push(alloc::format!("p^{v}"));
                    }
                }
            }
            for (i, e) in exps.iter().enumerate() {
                if *e != 0 {
                    factors.push(alloc::format!("{}^{}", names[i], e));
                }
            }
            if k > 0 {
                out.push_str(" + ");
            }
            if factors.is_empty() {
                out.push('1');
            } else {
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

/// Resolves a generator name: `p` or one of the tower's variables.
pub fn gen_by_name(tower: &TowerDesc, name: &str) -> Result<Gen> {
    if name == "p" {
        return match tower.base() {
            TowerDesc::BasePadic(_) => Ok(Gen::P),
            _ => Err(Error::InvalidArgument(String::from("p is not a generator of this tower"))),
        };
    }
    tower
        .level_of(name)
        .map(Gen::Var)
        .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown identifier {name}")))
}

/// The generator acting as uniformiser of the outermost valuation.
pub fn uniformiser(tower: &TowerDesc) -> Result<Gen> {
    match tower {
        TowerDesc::BaseFq(_) => Err(Error::Unsupported(String::from("no uniformiser"))),
        TowerDesc::BasePadic(_) => Ok(Gen::P),
        TowerDesc::Laurent(..) => Ok(Gen::Var(tower.depth() - 1)),
        TowerDesc::Curly(t, _) => uniformiser(t),
    }
}

/// Display name of a generator.
pub fn gen_name(tower: &TowerDesc, gen: Gen) -> String {
    match gen {
        Gen::P => String::from("p"),
        Gen::Var(i) => tower.var_names()[i].clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffbase::FqField;

    fn f2t() -> (TowerDesc, Precision) {
        let t = TowerDesc::fq(FqField::prime(2).unwrap()).laurent("t").unwrap();
        let pr = Precision::uniform(&t, 4, (0, 1), 1);
        (t, pr)
    }

    fn q5c(window: (i64, i64), m: i64) -> (TowerDesc, Precision) {
        let t = TowerDesc::padic(5).unwrap().curly("t").unwrap();
        let pr = Precision::uniform(&t, 1, window, m);
        (t, pr)
    }

    #[test]
    fn char_two_product() {
        let (t, pr) = f2t();
        let x = Element::var(&t, &pr, "t").unwrap();
        let one = Element::one(&t, &pr).unwrap();
        let a = one.add(&x).unwrap().mul(&one.sub(&x).unwrap()).unwrap();
        let want = one.add(&x.pow(2).unwrap()).unwrap();
        assert!(a.knows(&[3]));
        assert!(a.agrees_with(&want).unwrap());
    }

    #[test]
    fn geometric_inverse() {
        let (t, pr) = f2t();
        let x = Element::var(&t, &pr, "t").unwrap();
        let one = Element::one(&t, &pr).unwrap();
        let inv = one.sub(&x).unwrap().inv().unwrap();
        let exps: Vec<i64> = inv.terms().iter().map(|(e, _)| e[0]).collect();
        assert_eq!(exps, [0, 1, 2, 3]);
    }

    #[test]
    fn curly_window_product() {
        let (t, pr) = q5c((-2, 3), 3);
        let p = Element::var(&t, &pr, "p").unwrap();
        let x = Element::var(&t, &pr, "t").unwrap();
        let a = p.add(&x).unwrap().mul(&p.sub(&x).unwrap()).unwrap();
        let terms = a.terms();
        assert_eq!(terms.len(), 2);
        let c0 = match &terms[0].1 {
            BaseCoeff::Padic(c) => c.to_integer().unwrap(),
            _ => unreachable!(),
        };
        let c2 = match &terms[1].1 {
            BaseCoeff::Padic(c) => c.to_integer().unwrap(),
            _ => unreachable!(),
        };
        assert_eq!((terms[0].0[0], c0), (0, 25));
        assert_eq!(terms[1].0[0], 2);
        assert!(c2 == -1 || c2 == 124);
    }

    #[test]
    fn curly_valuations() {
        let (t, pr) = q5c((-8, 4), 4);
        let p = Element::var(&t, &pr, "p").unwrap();
        let x = Element::var(&t, &pr, "t").unwrap();
        let a = p.mul(&x.pow(-7).unwrap()).unwrap().add(&Element::from_int(&t, &pr, 3).unwrap().mul(&x.pow(2).unwrap()).unwrap()).unwrap();
        assert_eq!(a.valuation().unwrap(), 0);
        assert_eq!(p.mul(&x.inv().unwrap()).unwrap().valuation().unwrap(), 1);
        let r = p.residue().unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn curly_inverse_round_trip() {
        let (t, pr) = q5c((-4, 6), 5);
        let p = Element::var(&t, &pr, "p").unwrap();
        let x = Element::var(&t, &pr, "t").unwrap();
        let one = Element::one(&t, &pr).unwrap();
        let a = one.add(&x).unwrap().add(&p.mul(&x.inv().unwrap()).unwrap()).unwrap();
        let b = a.inv().unwrap();
        let prod = a.mul(&b).unwrap();
        assert!(prod.agrees_with(&one).unwrap());
        assert!(prod.top_precision().is_some());
    }
}
