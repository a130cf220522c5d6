//! Regular chains of the supported local rings and the
//! localization-completion functor on them.
//!
//! A flag is an ordering `(g_1, …, g_n)` of the regular sequence; the
//! chain is `𝔭_i = ⟨g_1, …, g_i⟩`. Completing at `𝔭_n` and localizing away
//! from it repeatedly makes `g_1` the outermost uniformiser, so the
//! resulting tower lists the generators in reverse flag order.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coeffbase::{FieldEmbedding, FqElem, FqField};
use crate::structure::LocalParams;
use crate::tower::{gen_by_name, Element, Precision, TowerDesc};
use crate::{Error, Result};

/// A supported regular local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDesc {
    /// `F_q[x_1, …, x_n]` localized at the origin. With no variables this
    /// is the field `F_q` itself.
    PolyLocal { field: FqField, vars: Vec<String> },
    /// `Z[t]` localized at `⟨p, t⟩`.
    ZtLocal { p: u64 },
    /// `Z` localized at `p`.
    ZLocal { p: u64 },
}

impl RingDesc {
    pub fn poly(field: FqField, vars: &[&str]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| String::from(*v)).collect();
        for (i, v) in vars.iter().enumerate() {
            if v.is_empty() || v == "p" || vars[..i].contains(v) {
                return Err(Error::InvalidArgument(alloc::format!("bad variable name {v:?}")));
            }
        }
        Ok(RingDesc::PolyLocal { field, vars })
    }

    pub fn zt(p: u64) -> Result<Self> {
        TowerDesc::padic(p)?;
        Ok(RingDesc::ZtLocal { p })
    }

    pub fn z(p: u64) -> Result<Self> {
        TowerDesc::padic(p)?;
        Ok(RingDesc::ZLocal { p })
    }

    /// Polynomial variables; for the integral rings `p` is a constant.
    pub fn vars(&self) -> Vec<String> {
        match self {
            RingDesc::PolyLocal { vars, .. } => vars.clone(),
            RingDesc::ZtLocal { .. } => alloc::vec![String::from("t")],
            RingDesc::ZLocal { .. } => Vec::new(),
        }
    }

    /// The regular sequence generating the maximal ideal.
    pub fn regular_sequence(&self) -> Vec<String> {
        match self {
            RingDesc::PolyLocal { vars, .. } => vars.clone(),
            RingDesc::ZtLocal { .. } => alloc::vec![String::from("p"), String::from("t")],
            RingDesc::ZLocal { .. } => alloc::vec![String::from("p")],
        }
    }

    pub fn dim(&self) -> usize {
        self.regular_sequence().len()
    }

    fn is_integral(&self) -> bool {
        !matches!(self, RingDesc::PolyLocal { .. })
    }

    fn prime(&self) -> u64 {
        match self {
            RingDesc::PolyLocal { field, .. } => field.p(),
            RingDesc::ZtLocal { p } | RingDesc::ZLocal { p } => *p,
        }
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDesc::PolyLocal { field, vars } => write!(f, "PolyLocal({}, [{}])", field.q(), vars.join(", ")),
            RingDesc::ZtLocal { p } => write!(f, "ZtLocal({p})"),
            RingDesc::ZLocal { p } => write!(f, "ZLocal({p})"),
        }
    }
}

/// A ring with a monomial flag of regular primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularChainDesc {
    ring: RingDesc,
    flag: Vec<String>,
}

impl RegularChainDesc {
    /// `flag` must be a permutation of the ring's regular sequence.
    pub fn new(ring: RingDesc, flag: &[&str]) -> Result<Self> {
        let mut want = ring.regular_sequence();
        let mut got: Vec<String> = flag.iter().map(|g| String::from(*g)).collect();
        let flag = got.clone();
        want.sort();
        got.sort();
        if want != got {
            return Err(Error::InvalidArgument(String::from("flag must order the regular sequence")));
        }
        Ok(RegularChainDesc { ring, flag })
    }

    /// The flag in its defining order, `𝔭_1 = ⟨g_1⟩` first.
    pub fn flag(&self) -> &[String] {
        &self.flag
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.flag.len()
    }

    /// Generators of `𝔭_i`.
    pub fn prime_generators(&self, i: usize) -> Result<&[String]> {
        if i > self.dim() {
            return Err(Error::OutOfRange(alloc::format!("prime index {i}")));
        }
        Ok(&self.flag[..i])
    }
}

/// The tower `HL(A)` of a regular chain.
pub fn hl(c: &RegularChainDesc) -> Result<TowerDesc> {
    match &c.ring {
        RingDesc::PolyLocal { field, .. } => {
            let mut t = TowerDesc::fq(field.clone());
            for v in c.flag.iter().rev() {
                t = t.laurent(v)?;
            }
            Ok(t)
        }
        RingDesc::ZLocal { p } => TowerDesc::padic(*p),
        RingDesc::ZtLocal { p } => {
            let base = TowerDesc::padic(*p)?;
            if c.flag[0] == "t" {
                base.laurent("t")
            } else {
                base.curly("t")
            }
        }
    }
}

/// `A/𝔭_i` with the inherited flag.
pub fn truncate_chain(c: &RegularChainDesc, i: usize) -> Result<RegularChainDesc> {
    let killed = c.prime_generators(i)?;
    let flag: Vec<String> = c.flag[i..].to_vec();
    let ring = match &c.ring {
        RingDesc::PolyLocal { field, vars } => RingDesc::PolyLocal {
            field: field.clone(),
            vars: vars.iter().filter(|v| !killed.contains(v)).cloned().collect(),
        },
        RingDesc::ZLocal { p } | RingDesc::ZtLocal { p } if killed.iter().any(|g| g == "p") => {
            let field = FqField::prime(*p)?;
            let vars = c.ring.vars().into_iter().filter(|v| !killed.contains(v)).collect();
            RingDesc::PolyLocal { field, vars }
        }
        RingDesc::ZtLocal { p } if killed.iter().any(|g| g == "t") => RingDesc::ZLocal { p: *p },
        other => other.clone(),
    };
    Ok(RegularChainDesc { ring, flag })
}

/// A coefficient of a ring element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingCoeff {
    Int(i128),
    Fq(FqElem),
}

impl RingCoeff {
    fn is_zero(&self) -> bool {
        match self {
            RingCoeff::Int(n) => *n == 0,
            RingCoeff::Fq(x) => x.is_zero(),
        }
    }

    fn add(&self, other: &RingCoeff) -> RingCoeff {
        match (self, other) {
            (RingCoeff::Int(a), RingCoeff::Int(b)) => RingCoeff::Int(a + b),
            (RingCoeff::Fq(a), RingCoeff::Fq(b)) => RingCoeff::Fq(a.add(b)),
            _ => unreachable!("coefficients of one ring"),
        }
    }

    fn mul(&self, other: &RingCoeff) -> RingCoeff {
        match (self, other) {
            (RingCoeff::Int(a), RingCoeff::Int(b)) => RingCoeff::Int(a * b),
            (RingCoeff::Fq(a), RingCoeff::Fq(b)) => RingCoeff::Fq(a.mul(b)),
            _ => unreachable!("coefficients of one ring"),
        }
    }

    fn neg(&self) -> RingCoeff {
        match self {
            RingCoeff::Int(a) => RingCoeff::Int(-a),
            RingCoeff::Fq(a) => RingCoeff::Fq(a.neg()),
        }
    }
}

/// Sparse polynomial in the ring's variables, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, RingCoeff>,
}

impl MPoly {
    fn insert(&mut self, exps: Vec<u32>, c: RingCoeff) {
        let sum = match self.terms.remove(&exps) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exps, sum);
        }
    }

    fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly { terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca.mul(cb));
            }
        }
        out
    }

    fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, RingCoeff> {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }
}

/// An element `num / den` of the ring's fraction field. Whether `den` is a
/// unit is only checked when embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    ring: RingDesc,
    num: MPoly,
    den: MPoly,
}

impl RingElem {
    fn constant(ring: &RingDesc, c: RingCoeff) -> RingElem {
        let mut num = MPoly { terms: BTreeMap::new() };
        num.insert(alloc::vec![0; ring.vars().len()], c);
        let mut den = MPoly { terms: BTreeMap::new() };
        den.insert(alloc::vec![0; ring.vars().len()], Self::unit(ring));
        RingElem { ring: ring.clone(), num, den }
    }

    fn unit(ring: &RingDesc) -> RingCoeff {
        match ring {
            RingDesc::PolyLocal { field, .. } => RingCoeff::Fq(field.one()),
            _ => RingCoeff::Int(1),
        }
    }

    pub fn from_int(ring: &RingDesc, n: i128) -> RingElem {
        match ring {
            RingDesc::PolyLocal { field, .. } => {
                let p = i128::from(field.p());
                Self::constant(ring, RingCoeff::Fq(field.from_int(n.rem_euclid(p) as i64)))
            }
            _ => Self::constant(ring, RingCoeff::Int(n)),
        }
    }

    pub fn from_fq(ring: &RingDesc, x: &FqElem) -> Result<RingElem> {
        match ring {
            RingDesc::PolyLocal { field, .. } if field == x.field() => Ok(Self::constant(ring, RingCoeff::Fq(x.clone()))),
            _ => Err(Error::FieldMismatch),
        }
    }

    /// A variable, or `p` for the integral rings.
    pub fn var(ring: &RingDesc, name: &str) -> Result<RingElem> {
        if name == "p" && ring.is_integral() {
            return Ok(Self::from_int(ring, i128::from(ring.prime())));
        }
        let vars = ring.vars();
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown identifier {name}")))?;
        let mut out = Self::from_int(ring, 1);
        let mut e = alloc::vec![0; vars.len()];
        e[i] = 1;
        let c = out.num.terms.remove(&alloc::vec![0; vars.len()]).expect("one");
        out.num.insert(e, c);
        Ok(out)
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::InvalidArgument(String::from("elements of different rings")));
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let (num, den) = if self.den == other.den {
            (self.num.add(&other.num), self.den.clone())
        } else {
            (self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
        };
        Ok(RingElem { ring: self.ring.clone(), num, den })
    }

    pub fn neg(&self) -> RingElem {
        RingElem { ring: self.ring.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { ring: self.ring.clone(), num: self.num.mul(&other.num), den: self.den.mul(&other.den) })
    }

    pub fn div(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RingElem { ring: self.ring.clone(), num: self.num.mul(&other.den), den: self.den.mul(&other.num) })
    }

    pub fn pow(&self, e: i64) -> Result<RingElem> {
        let base = if e < 0 { Self::from_int(&self.ring, 1).div(self)? } else { self.clone() };
        let mut acc = Self::from_int(&self.ring, 1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Applies a coefficient map `F_q → F_{q'}` into another polynomial ring
    /// with the same variables.
    pub fn map_coefficients(&self, emb: &FieldEmbedding, target: &RingDesc) -> Result<RingElem> {
        let map = |m: &MPoly| MPoly {
            terms: m
                .terms
                .iter()
                .map(|(e, c)| {
                    let RingCoeff::Fq(x) = c else { unreachable!("finite field coefficients") };
                    (e.clone(), RingCoeff::Fq(emb.apply(x)))
                })
                .collect(),
        };
        match (&self.ring, target) {
            (RingDesc::PolyLocal { field: a, vars: va }, RingDesc::PolyLocal { field: b, vars: vb })
                if a == emb.source() && b == emb.target() && va == vb =>
            {
                Ok(RingElem { ring: target.clone(), num: map(&self.num), den: map(&self.den) })
            }
            _ => Err(Error::FieldMismatch),
        }
    }
}

impl RingElem {
    /// Substitutes `x_i ↦ x_i + c_i` in a polynomial ring over `F_q`.
    pub fn translate(&self, shifts: &[FqElem]) -> Result<RingElem> {
        let RingDesc::PolyLocal { field, vars } = &self.ring else {
            return Err(Error::Unsupported(String::from("translation needs a polynomial ring")));
        };
        if shifts.len() != vars.len() || shifts.iter().any(|c| c.field() != field) {
            return Err(Error::ShapeMismatch(String::from("one shift per variable")));
        }
        let moved: Vec<RingElem> = vars
            .iter()
            .zip(shifts)
            .map(|(v, c)| RingElem::var(&self.ring, v)?.add(&RingElem::from_fq(&self.ring, c)?))
            .collect::<Result<_>>()?;
        let image = |m: &MPoly| -> Result<RingElem> {
            let mut acc = RingElem::from_int(&self.ring, 0);
            for (exps, c) in &m.terms {
                let mut term = Self::constant(&self.ring, c.clone());
                for (x, e) in moved.iter().zip(exps) {
                    term = term.mul(&x.pow(i64::from(*e))?)?;
                }
                acc = acc.add(&term)?;
            }
            Ok(acc)
        };
        image(&self.num)?.div(&image(&self.den)?)
    }
}

fn embed_poly(c: &RegularChainDesc, tower: &TowerDesc, caps: &Precision, m: &MPoly) -> Result<Element> {
    let vars: Vec<Element> = c.ring.vars().iter().map(|v| Element::var(tower, caps, v)).collect::<Result<_>>()?;
    let mut acc = Element::zero(tower, caps)?;
    for (exps, coeff) in &m.terms {
        let mut term = match coeff {
            RingCoeff::Int(n) => Element::from_int(tower, caps, *n)?,
            RingCoeff::Fq(x) => Element::from_fq(tower, caps, x)?,
        };
        for (v, e) in vars.iter().zip(exps) {
            term = term.mul(&v.pow(i64::from(*e))?)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The flat embedding `A → HL(A)` extended to fractions whose denominator
/// is a unit of the target at working precision.
pub fn embed(c: &RegularChainDesc, f: &RingElem, caps: &Precision) -> Result<Element> {
    if f.ring != c.ring {
        return Err(Error::InvalidArgument(String::from("element of a different ring")));
    }
    let tower = hl(c)?;
    caps.validate(&tower)?;
    let num = embed_poly(c, &tower, caps, &f.num)?;
    let den = embed_poly(c, &tower, caps, &f.den)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if den.is_exact() && den.terms().len() == 1 && num.is_exact() {
        return num.div(&den);
    }
    num.mul(&den.inv()?)
}

/// Images of the regular sequence, ordered as local parameters
/// `t_1, …, t_n` (the reversed flag).
pub fn chain_local_params(c: &RegularChainDesc, caps: &Precision) -> Result<LocalParams> {
    let tower = hl(c)?;
    let mut gens = Vec::with_capacity(c.dim());
    let mut elements = Vec::with_capacity(c.dim());
    for g in c.flag.iter().rev() {
        gens.push(gen_by_name(&tower, g)?);
        elements.push(embed(c, &RingElem::var(&c.ring, g)?, caps)?);
    }
    let params = LocalParams { gens, elements };
    if !params.verify()? {
        return Err(Error::InvalidArgument(String::from("regular sequence is not a parameter system")));
    }
    Ok(params)
}
