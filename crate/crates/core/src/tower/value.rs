//! Untyped nested series and the arithmetic on them. Every function takes a
//! [`Ctx`] naming the tower level the value lives at together with the caps
//! used when constants have to be created.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::desc::{LevelPrec, Precision, TowerDesc};
use crate::coeffbase::{teichmuller, FqElem, FqField, PadicNum, RationalNum};
use crate::{Error, Result};

/// A uniformiser-like generator: the prime `p` of a `Q_p` base, or the
/// variable of the constructor at a level (0 = innermost).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    P,
    Var(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Value {
    Fq(FqElem),
    Padic(PadicNum),
    Laurent { n: i64, coeffs: BTreeMap<i64, Value> },
    Curly { lo: i64, hi: i64, coeffs: BTreeMap<i64, Value> },
}

#[derive(Clone, Copy)]
pub(crate) struct Ctx<'a> {
    pub tower: &'a TowerDesc,
    pub levels: &'a [LevelPrec],
    pub padic: i64,
}

/// Bound on geometric-series iterations.
const MAX_ITER: usize = 4096;

/// Truncation bound of a series known exactly (a finite sum).
pub(crate) const EXACT: i64 = i64::MAX / 4;

pub(crate) fn is_exact(bound: i64) -> bool {
    bound >= EXACT
}

/// Adds to a truncation bound, keeping exact bounds exact.
fn bound_add(a: i64, b: i64) -> i64 {
    let s = a.saturating_add(b);
    if s >= EXACT / 2 {
        EXACT
    } else {
        s
    }
}

impl<'a> Ctx<'a> {
    pub fn new(tower: &'a TowerDesc, prec: &'a Precision) -> Self {
        Ctx { tower, levels: &prec.levels, padic: prec.padic }
    }

    pub fn inner(&self) -> Ctx<'a> {
        Ctx {
            tower: self.tower.inner().expect("series level"),
            levels: &self.levels[..self.levels.len() - 1],
            padic: self.padic,
        }
    }

    fn level(&self) -> usize {
        self.levels.len() - 1
    }

    fn laurent_cap(&self) -> i64 {
        match self.levels.last() {
            Some(LevelPrec::Laurent { n }) => *n,
            _ => unreachable!("validated precision"),
        }
    }

    fn curly_cap(&self) -> (i64, i64) {
        match self.levels.last() {
            Some(LevelPrec::Curly { lo, hi }) => (*lo, *hi),
            _ => unreachable!("validated precision"),
        }
    }
}

fn mismatch() -> Error {
    Error::TowerMismatch
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Fq(x) => x.is_zero(),
            Value::Padic(x) => x.is_zero(),
            Value::Laurent { coeffs, .. } | Value::Curly { coeffs, .. } => coeffs.is_empty(),
        }
    }

    pub fn coeffs(&self) -> Option<&BTreeMap<i64, Value>> {
        match self {
            Value::Laurent { coeffs, .. } | Value::Curly { coeffs, .. } => Some(coeffs),
            _ => None,
        }
    }

    /// All nonzero base coefficients with their exponents, innermost first.
    pub fn terms(&self) -> Vec<(Vec<i64>, Value)> {
        match self.coeffs() {
            None => {
                if self.is_zero() {
                    Vec::new()
                } else {
                    alloc::vec![(Vec::new(), self.clone())]
                }
            }
            Some(coeffs) => {
                let mut out = Vec::new();
                for (&i, c) in coeffs {
                    for (mut e, b) in c.terms() {
                        e.push(i);
                        out.push((e, b));
                    }
                }
                out
            }
        }
    }

    /// Whether the coefficient at `exps` (innermost first) is determined.
    pub fn knows(&self, exps: &[i64]) -> bool {
        let Some((&e, rest)) = exps.split_last() else {
            return true;
        };
        let (bound, coeffs) = match self {
            Value::Laurent { n, coeffs } => (*n, coeffs),
            Value::Curly { hi, coeffs, .. } => (*hi, coeffs),
            _ => return false,
        };
        if e >= bound {
            return false;
        }
        coeffs.get(&e).is_none_or(|c| c.knows(rest))
    }
}

pub(crate) fn zero(ctx: Ctx) -> Value {
    match ctx.tower {
        TowerDesc::BaseFq(f) => Value::Fq(f.zero()),
        TowerDesc::BasePadic(p) => Value::Padic(PadicNum::zero(*p, ctx.padic)),
        TowerDesc::Laurent(..) => Value::Laurent { n: EXACT, coeffs: BTreeMap::new() },
        TowerDesc::Curly(..) => Value::Curly { lo: ctx.curly_cap().0, hi: EXACT, coeffs: BTreeMap::new() },
    }
}

/// Embeds a base value as a constant of the level described by `ctx`.
pub(crate) fn constant(ctx: Ctx, base: &Value) -> Result<Value> {
    match (ctx.tower, base) {
        (TowerDesc::BaseFq(f), Value::Fq(x)) if x.field() == f => Ok(base.clone()),
        (TowerDesc::BasePadic(p), Value::Padic(x)) if x.prime() == *p => {
            Ok(Value::Padic(x.truncate(ctx.padic)))
        }
        (TowerDesc::Laurent(..), _) => {
            let c = constant(ctx.inner(), base)?;
            Ok(Value::Laurent { n: EXACT, coeffs: single(0, c) })
        }
        (TowerDesc::Curly(..), _) => {
            let c = constant(ctx.inner(), base)?;
            let (lo, _) = ctx.curly_cap();
            Ok(Value::Curly { lo: lo.min(0), hi: EXACT, coeffs: single(0, c) })
        }
        _ => Err(mismatch()),
    }
}

fn single(i: i64, c: Value) -> BTreeMap<i64, Value> {
    let mut m = BTreeMap::new();
    if !c.is_zero() {
        m.insert(i, c);
    }
    m
}

fn base_of_rational(ctx: Ctx, x: &RationalNum) -> Result<Value> {
    match ctx.tower.base() {
        TowerDesc::BaseFq(f) => {
            let p = f.p() as i128;
            let num = f.from_int(x.numer().rem_euclid(p) as i64);
            let den = f.from_int(x.denom().rem_euclid(p) as i64);
            Ok(Value::Fq(num.div(&den)?))
        }
        TowerDesc::BasePadic(p) => Ok(Value::Padic(PadicNum::from_rational(x, *p, ctx.padic)?)),
        _ => unreachable!(),
    }
}

pub(crate) fn from_rational(ctx: Ctx, x: &RationalNum) -> Result<Value> {
    let b = base_of_rational(ctx, x)?;
    constant(ctx, &b)
}

pub(crate) fn one(ctx: Ctx) -> Value {
    from_rational(ctx, &RationalNum::from_int(1)).expect("one exists")
}

pub(crate) fn neg(v: &Value) -> Value {
    match v {
        Value::Fq(x) => Value::Fq(x.neg()),
        Value::Padic(x) => Value::Padic(x.neg()),
        Value::Laurent { n, coeffs } => {
            Value::Laurent { n: *n, coeffs: coeffs.iter().map(|(i, c)| (*i, neg(c))).collect() }
        }
        Value::Curly { lo, hi, coeffs } => Value::Curly {
            lo: *lo,
            hi: *hi,
            coeffs: coeffs.iter().map(|(i, c)| (*i, neg(c))).collect(),
        },
    }
}

fn merge(ctx: Ctx, a: &BTreeMap<i64, Value>, b: &BTreeMap<i64, Value>, limit: i64) -> Result<BTreeMap<i64, Value>> {
    let inner = ctx.inner();
    let mut out = BTreeMap::new();
    for (i, x) in a.range(..limit) {
        match b.get(i) {
            Some(y) => {
                let s = add(inner, x, y)?;
                if !s.is_zero() {
                    out.insert(*i, s);
                }
            }
            None => {
                out.insert(*i, x.clone());
            }
        }
    }
    for (i, y) in b.range(..limit) {
        if !a.contains_key(i) {
            out.insert(*i, y.clone());
        }
    }
    Ok(out)
}

pub(crate) fn add(ctx: Ctx, a: &Value, b: &Value) -> Result<Value> {
    match (a, b) {
        (Value::Fq(x), Value::Fq(y)) => Ok(Value::Fq(x.add(y))),
        (Value::Padic(x), Value::Padic(y)) => Ok(Value::Padic(x.add(y)?.truncate(ctx.padic))),
        (Value::Laurent { n: na, coeffs: ca }, Value::Laurent { n: nb, coeffs: cb }) => {
            let n = (*na).min(*nb);
            Ok(Value::Laurent { n, coeffs: merge(ctx, ca, cb, n)? })
        }
        (
            Value::Curly { lo: la, hi: ha, coeffs: ca },
            Value::Curly { lo: lb, hi: hb, coeffs: cb },
        ) => {
            let hi = (*ha).min(*hb);
            let lo = (*la).min(*lb).min(hi);
            Ok(Value::Curly { lo, hi, coeffs: merge(ctx, ca, cb, hi)? })
        }
        _ => Err(mismatch()),
    }
}

/// Lowers Laurent bounds and `p`-adic precision to the caps in `ctx`.
pub(crate) fn truncate(ctx: Ctx, v: &Value) -> Value {
    let cut = |coeffs: &BTreeMap<i64, Value>, limit: i64| -> BTreeMap<i64, Value> {
        coeffs
            .range(..limit)
            .map(|(i, c)| (*i, truncate(ctx.inner(), c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    };
    match v {
        Value::Fq(_) => v.clone(),
        Value::Padic(x) => Value::Padic(x.truncate(ctx.padic)),
        Value::Laurent { n, coeffs } => {
            let n = (*n).min(ctx.laurent_cap());
            Value::Laurent { n, coeffs: cut(coeffs, n) }
        }
        // Curly bounds are left alone: cutting them would make every later
        // product by a negative power lose the same amount again.
        Value::Curly { lo, hi, coeffs } => Value::Curly { lo: *lo, hi: *hi, coeffs: cut(coeffs, *hi) },
    }
}

/// Gives exact curly levels a finite upper bound: the cap, or just past the
/// last term when that lies beyond it.
pub(crate) fn bound_curly(ctx: Ctx, v: &Value) -> Value {
    let inner = |coeffs: &BTreeMap<i64, Value>| -> BTreeMap<i64, Value> {
        coeffs.iter().map(|(i, c)| (*i, bound_curly(ctx.inner(), c))).collect()
    };
    match v {
        Value::Fq(_) | Value::Padic(_) => v.clone(),
        Value::Laurent { n, coeffs } => Value::Laurent { n: *n, coeffs: inner(coeffs) },
        Value::Curly { lo, hi, coeffs } => {
            let hi = if is_exact(*hi) {
                let last = coeffs.keys().next_back().map_or(i64::MIN, |k| k + 1);
                ctx.curly_cap().1.max(last)
            } else {
                *hi
            };
            Value::Curly { lo: *lo, hi, coeffs: inner(coeffs) }
        }
    }
}

pub(crate) fn sub(ctx: Ctx, a: &Value, b: &Value) -> Result<Value> {
    add(ctx, a, &neg(b))
}

fn first_key(c: &BTreeMap<i64, Value>) -> Option<i64> {
    c.keys().next().copied()
}

/// Sums `x_i · y_j` into position `i + j` for all `i + j < limit`.
fn convolve(
    ctx: Ctx,
    ca: &BTreeMap<i64, Value>,
    cb: &BTreeMap<i64, Value>,
    limit: i64,
) -> Result<BTreeMap<i64, Value>> {
    let inner = ctx.inner();
    let mut acc: BTreeMap<i64, Value> = BTreeMap::new();
    for (i, x) in ca {
        for (j, y) in cb {
            let k = i + j;
            // cb is sorted, so later j only increase k
            if k >= limit {
                break;
            }
            let prod = mul(inner, x, y)?;
            match acc.get_mut(&k) {
                Some(slot) => *slot = add(inner, slot, &prod)?,
                None => {
                    acc.insert(k, prod);
                }
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(acc)
}

pub(crate) fn mul(ctx: Ctx, a: &Value, b: &Value) -> Result<Value> {
    match (a, b) {
        (Value::Fq(x), Value::Fq(y)) => Ok(Value::Fq(x.mul(y))),
        (Value::Padic(x), Value::Padic(y)) => Ok(Value::Padic(x.mul(y)?.truncate(ctx.padic))),
        (Value::Laurent { n: na, coeffs: ca }, Value::Laurent { n: nb, coeffs: cb }) => {
            let va = first_key(ca).unwrap_or(*na);
            let vb = first_key(cb).unwrap_or(*nb);
            let n = bound_add(*na, vb).min(bound_add(*nb, va));
            Ok(Value::Laurent { n, coeffs: convolve(ctx, ca, cb, n)? })
        }
        (Value::Curly { hi: ha, coeffs: ca, .. }, Value::Curly { hi: hb, coeffs: cb, .. }) => {
            let la = first_key(ca).unwrap_or(*ha);
            let lb = first_key(cb).unwrap_or(*hb);
            let hi = bound_add(la, *hb).min(bound_add(lb, *ha));
            let lo = bound_add(la, lb).min(hi);
            Ok(Value::Curly { lo, hi, coeffs: convolve(ctx, ca, cb, hi)? })
        }
        _ => Err(mismatch()),
    }
}

/// Multiplies every coefficient of a series by a constant of the level below.
fn scale(ctx: Ctx, v: &Value, c: &Value) -> Result<Value> {
    let inner = ctx.inner();
    let map = |coeffs: &BTreeMap<i64, Value>| -> Result<BTreeMap<i64, Value>> {
        let mut out = BTreeMap::new();
        for (i, x) in coeffs {
            let y = mul(inner, x, c)?;
            if !y.is_zero() {
                out.insert(*i, y);
            }
        }
        Ok(out)
    };
    match v {
        Value::Laurent { n, coeffs } => Ok(Value::Laurent { n: *n, coeffs: map(coeffs)? }),
        Value::Curly { lo, hi, coeffs } => Ok(Value::Curly { lo: *lo, hi: *hi, coeffs: map(coeffs)? }),
        _ => Err(mismatch()),
    }
}

/// Shifts the exponents of the outermost level by `r`.
fn shift_top(v: &Value, r: i64) -> Value {
    let shifted = |c: &BTreeMap<i64, Value>| c.iter().map(|(i, x)| (i + r, x.clone())).collect();
    match v {
        Value::Laurent { n, coeffs } => Value::Laurent { n: bound_add(*n, r), coeffs: shifted(coeffs) },
        Value::Curly { lo, hi, coeffs } => {
            Value::Curly { lo: lo + r, hi: bound_add(*hi, r), coeffs: shifted(coeffs) }
        }
        _ => v.clone(),
    }
}

pub(crate) fn inv(ctx: Ctx, a: &Value) -> Result<Value> {
    match a {
        Value::Fq(x) => Ok(Value::Fq(x.inv()?)),
        Value::Padic(x) => Ok(Value::Padic(x.inv()?.truncate(ctx.padic))),
        Value::Laurent { n, coeffs } | Value::Curly { hi: n, coeffs, .. }
            if is_exact(*n) && coeffs.len() == 1 =>
        {
            let (&i, c) = coeffs.iter().next().expect("one term");
            let c = inv(ctx.inner(), c)?;
            Ok(match a {
                Value::Laurent { .. } => Value::Laurent { n: EXACT, coeffs: single(-i, c) },
                _ => Value::Curly { lo: -i, hi: EXACT, coeffs: single(-i, c) },
            })
        }
        Value::Laurent { n, coeffs } => {
            let inner = ctx.inner();
            let (&nu, lead) = coeffs.iter().next().ok_or(Error::PrecisionZero)?;
            let lead_inv = inv(inner, lead)?;
            // an exact input is inverted to the working cap
            let n = if is_exact(*n) { ctx.laurent_cap() + 2 * nu } else { *n };
            let rel = (n - nu).max(1);
            let n = nu + rel;
            // a = lead·t^nu·(1 + Σ w_k t^k), k < rel
            let mut w: Vec<Option<Value>> = alloc::vec![None; rel as usize];
            for (i, c) in coeffs.range(nu + 1..) {
                let k = (i - nu) as usize;
                if k < w.len() {
                    let x = mul(inner, c, &lead_inv)?;
                    if !x.is_zero() {
                        w[k] = Some(x);
                    }
                }
            }
            let mut b: Vec<Value> = Vec::with_capacity(rel as usize);
            b.push(one(inner));
            for m in 1..rel as usize {
                let mut s = zero(inner);
                for (k, wk) in w.iter().enumerate().take(m + 1).skip(1) {
                    if let Some(wk) = wk {
                        s = add(inner, &s, &mul(inner, wk, &b[m - k])?)?;
                    }
                }
                b.push(neg(&s));
            }
            let mut out = BTreeMap::new();
            for (m, bm) in b.iter().enumerate() {
                let c = mul(inner, bm, &lead_inv)?;
                if !c.is_zero() {
                    out.insert(m as i64 - nu, c);
                }
            }
            Ok(Value::Laurent { n: n - 2 * nu, coeffs: out })
        }
        Value::Curly { lo, hi, coeffs } => {
            let inner = ctx.inner();
            if coeffs.is_empty() {
                return Err(Error::PrecisionZero);
            }
            if is_exact(*hi) {
                // an infinite geometric series needs a finite window
                let last = *coeffs.keys().next_back().expect("nonempty");
                let cut = ctx.curly_cap().1.max(last + 1);
                let a = Value::Curly { lo: *lo, hi: cut, coeffs: coeffs.clone() };
                return inv(ctx, &a);
            }
            let v = valuation(a)?;
            let mut j = None;
            for (i, c) in coeffs {
                if valuation(c)? == v {
                    j = Some(*i);
                    break;
                }
            }
            let j = j.expect("minimum attained");
            let lead_inv = inv(inner, &coeffs[&j])?;
            // a = a_j·t^j·(1 + w)
            let normalized = shift_top(&scale(ctx, a, &lead_inv)?, -j);
            let w = sub(ctx, &normalized, &unit_like(ctx, &normalized))?;
            let minus_w = neg(&w);
            let mut sum = unit_like(ctx, &normalized);
            let mut term = sum.clone();
            let mut steps = 0;
            loop {
                term = mul(ctx, &term, &minus_w)?;
                // digits beyond the window of the sum are never needed
                if let (Value::Curly { hi: th, coeffs: tc, .. }, Value::Curly { hi: sh, .. }) = (&mut term, &sum) {
                    *th = (*th).min(*sh);
                    tc.retain(|k, _| *k < *sh);
                }
                sum = add(ctx, &sum, &term)?;
                if term.is_zero() {
                    break;
                }
                steps += 1;
                if steps > MAX_ITER {
                    return Err(Error::NoConvergence);
                }
            }
            Ok(shift_top(&scale(ctx, &sum, &lead_inv)?, -j))
        }
    }
}

/// The constant `1` carrying the window of a curly series.
fn unit_like(ctx: Ctx, v: &Value) -> Value {
    match v {
        Value::Curly { lo, hi, .. } => {
            let c = one(ctx.inner());
            Value::Curly { lo: (*lo).min(0), hi: *hi, coeffs: single(0, c) }
        }
        _ => one(ctx),
    }
}

/// Valuation of the outermost discrete valuation.
pub(crate) fn valuation(v: &Value) -> Result<i64> {
    match v {
        Value::Fq(x) => {
            if x.is_zero() {
                Err(Error::PrecisionZero)
            } else {
                Ok(0)
            }
        }
        Value::Padic(x) => x.valuation().ok_or(Error::PrecisionZero),
        Value::Laurent { coeffs, .. } => first_key(coeffs).ok_or(Error::PrecisionZero),
        Value::Curly { coeffs, .. } => {
            let mut best: Option<i64> = None;
            for c in coeffs.values() {
                let vc = valuation(c)?;
                best = Some(best.map_or(vc, |b| b.min(vc)));
            }
            best.ok_or(Error::PrecisionZero)
        }
    }
}

/// Image in the first residue field.
pub(crate) fn residue(ctx: Ctx, v: &Value) -> Result<Value> {
    match v {
        Value::Fq(_) => Err(Error::OutOfRange(String::from("a finite field has no residue map"))),
        Value::Padic(x) => {
            let r = x.residue()?;
            Ok(Value::Fq(FqField::prime(x.prime())?.from_int(r as i64)))
        }
        Value::Laurent { n, coeffs } => {
            let inner = ctx.inner();
            match first_key(coeffs) {
                None if *n >= 1 => Ok(zero(inner)),
                None => Err(Error::PrecisionInsufficient),
                Some(nu) if nu < 0 => Err(Error::NegativeValuation),
                Some(0) => Ok(coeffs[&0].clone()),
                Some(_) => Ok(zero(inner)),
            }
        }
        Value::Curly { hi, coeffs, .. } => {
            let inner = ctx.inner();
            let mut out = BTreeMap::new();
            for (i, c) in coeffs {
                let vc = valuation(c)?;
                if vc < 0 {
                    return Err(Error::NegativeValuation);
                }
                if vc == 0 {
                    out.insert(*i, residue(inner, c)?);
                }
            }
            Ok(Value::Laurent { n: *hi, coeffs: out })
        }
    }
}

/// Section of the residue map: constants at Laurent levels, coefficientwise
/// at curly levels, Teichmüller representatives at the `p`-adic step.
pub(crate) fn lift(ctx: Ctx, r: &Value) -> Result<Value> {
    match (ctx.tower, r) {
        (TowerDesc::BasePadic(p), Value::Fq(x)) if x.field().p() == *p && x.field().k() == 1 => {
            Ok(Value::Padic(teichmuller(x, ctx.padic)?))
        }
        (TowerDesc::Laurent(..), _) => Ok(Value::Laurent { n: EXACT, coeffs: single(0, r.clone()) }),
        (TowerDesc::Curly(..), Value::Laurent { n, coeffs }) => {
            let inner = ctx.inner();
            let (cap_lo, _) = ctx.curly_cap();
            let lo = first_key(coeffs).map_or(cap_lo, |k| k.min(cap_lo)).min(*n);
            let mut out = BTreeMap::new();
            for (i, c) in coeffs {
                let l = lift(inner, c)?;
                if !l.is_zero() {
                    out.insert(*i, l);
                }
            }
            Ok(Value::Curly { lo, hi: *n, coeffs: out })
        }
        _ => Err(mismatch()),
    }
}

/// Exact multiplication by `gen^r`.
pub(crate) fn shift(ctx: Ctx, v: &Value, gen: Gen, r: i64) -> Result<Value> {
    match v {
        Value::Fq(_) => Err(Error::InvalidArgument(String::from("generator not in tower"))),
        Value::Padic(x) => match gen {
            Gen::P => Ok(Value::Padic(x.mul_p_pow(r).truncate(ctx.padic))),
            _ => Err(Error::InvalidArgument(String::from("generator not in tower"))),
        },
        Value::Laurent { .. } | Value::Curly { .. } => {
            if gen == Gen::Var(ctx.level()) {
                return Ok(shift_top(v, r));
            }
            let inner = ctx.inner();
            let map = |coeffs: &BTreeMap<i64, Value>| -> Result<BTreeMap<i64, Value>> {
                let mut out = BTreeMap::new();
                for (i, c) in coeffs {
                    let s = shift(inner, c, gen, r)?;
                    if !s.is_zero() {
                        out.insert(*i, s);
                    }
                }
                Ok(out)
            };
            match v {
                Value::Laurent { n, coeffs } => Ok(Value::Laurent { n: *n, coeffs: map(coeffs)? }),
                Value::Curly { lo, hi, coeffs } => {
                    Ok(Value::Curly { lo: *lo, hi: *hi, coeffs: map(coeffs)? })
                }
                _ => unreachable!(),
            }
        }
    }
}

/// The exact monomial `gen^r`.
pub(crate) fn monomial(ctx: Ctx, gen: Gen, r: i64) -> Result<Value> {
    match ctx.tower {
        TowerDesc::BaseFq(_) => Err(Error::InvalidArgument(String::from("generator not in tower"))),
        TowerDesc::BasePadic(p) => match gen {
            Gen::P => Ok(Value::Padic(PadicNum::from_int(*p, 1, ctx.padic.max(1))?.mul_p_pow(r).truncate(ctx.padic))),
            _ => Err(Error::InvalidArgument(String::from("generator not in tower"))),
        },
        TowerDesc::Laurent(..) | TowerDesc::Curly(..) => {
            let here = gen == Gen::Var(ctx.level());
            let (exp, c) = if here {
                (r, one(ctx.inner()))
            } else {
                (0, monomial(ctx.inner(), gen, r)?)
            };
            match ctx.tower {
                TowerDesc::Laurent(..) => Ok(Value::Laurent { n: EXACT, coeffs: single(exp, c) }),
                _ => {
                    let (lo, _) = ctx.curly_cap();
                    Ok(Value::Curly { lo: lo.min(exp), hi: EXACT, coeffs: single(exp, c) })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffbase::FqField;

    #[test]
    fn laurent_inverse_recurrence() {
        let t = TowerDesc::fq(FqField::prime(2).unwrap()).laurent("t").unwrap();
        let pr = Precision::uniform(&t, 4, (0, 1), 1);
        let ctx = Ctx::new(&t, &pr);
        let x = sub(ctx, &one(ctx), &monomial(ctx, Gen::Var(0), 1).unwrap()).unwrap();
        let y = inv(ctx, &x).unwrap();
        assert_eq!(y.coeffs().unwrap().len(), 4);
        let prod = mul(ctx, &x, &y).unwrap();
        assert!(sub(ctx, &prod, &one(ctx)).unwrap().is_zero());
        assert_eq!(prod.coeffs().unwrap().len(), 1);
    }
}
