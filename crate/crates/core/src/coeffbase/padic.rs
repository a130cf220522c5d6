use core::fmt;

use super::arith::{is_prime, max_rel_precision, mod_inv, mod_pow, pow_u128};
use super::{FqElem, RationalNum};
use crate::{Error, Result};

/// A `p`-adic number known modulo `p^prec`.
///
/// Nonzero values are `p^v · unit` with `unit` a residue modulo `p^(prec − v)`
/// prime to `p`. A value indistinguishable from zero keeps only its precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNum {
    p: u64,
    prec: i64,
    val: Option<(i64, u128)>,
}

fn split_p(mut n: u128, p: u64) -> (i64, u128) {
    let mut v = 0;
    while n.is_multiple_of(p as u128) {
        n /= p as u128;
        v += 1;
    }
    (v, n)
}

impl PadicNum {
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNum { p, prec, val: None }
    }

    fn check_prime(p: u64) -> Result<()> {
        if is_prime(p) {
            Ok(())
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// `p^v · unit`, with `unit` reduced modulo `p^(prec − v)`.
    fn from_parts(p: u64, prec: i64, v: i64, unit: i128) -> Result<Self> {
        if v >= prec {
            return Ok(Self::zero(p, prec));
        }
        let rel = prec - v;
        if rel > max_rel_precision(p) {
            return Err(Error::PrecisionOverflow);
        }
        let m = pow_u128(p, rel);
        let u = unit.rem_euclid(m as i128) as u128;
        debug_assert!(!u.is_multiple_of(p as u128));
        Ok(PadicNum { p, prec, val: Some((v, u)) })
    }

    pub fn from_int(p: u64, n: i128, prec: i64) -> Result<Self> {
        Self::check_prime(p)?;
        if n == 0 {
            return Ok(Self::zero(p, prec));
        }
        let (v, u) = split_p(n.unsigned_abs(), p);
        let u = if n < 0 { -(u as i128) } else { u as i128 };
        Self::from_parts(p, prec, v, u)
    }

    pub fn from_rational(x: &RationalNum, p: u64, prec: i64) -> Result<Self> {
        Self::check_prime(p)?;
        if x.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let (vn, un) = split_p(x.numer().unsigned_abs(), p);
        let (vd, ud) = split_p(x.denom().unsigned_abs(), p);
        let v = vn - vd;
        if v >= prec {
            return Ok(Self::zero(p, prec));
        }
        let rel = prec - v;
        if rel > max_rel_precision(p) {
            return Err(Error::PrecisionOverflow);
        }
        let m = pow_u128(p, rel);
        let inv = mod_inv(ud % m, m).expect("unit denominator");
        let mut u = (un % m) * inv % m;
        if x.numer() < 0 {
            u = (m - u) % m;
        }
        Ok(PadicNum { p, prec, val: Some((v, u)) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo `p^prec`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.val.map(|(v, _)| v)
    }

    pub fn unit(&self) -> Option<u128> {
        self.val.map(|(_, u)| u)
    }

    pub fn rel_precision(&self) -> Option<i64> {
        self.val.map(|(v, _)| self.prec - v)
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Lowers the absolute precision to `prec` if that is smaller.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        match self.val {
            None => Self::zero(self.p, prec),
            Some((v, u)) => {
                if v >= prec {
                    Self::zero(self.p, prec)
                } else {
                    let m = pow_u128(self.p, prec - v);
                    PadicNum { p: self.p, prec, val: Some((v, u % m)) }
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let prec = self.prec.min(other.prec);
        let (a, b) = match (self.val, other.val) {
            (None, _) => return Ok(other.truncate(prec)),
            (_, None) => return Ok(self.truncate(prec)),
            (Some(a), Some(b)) => (a, b),
        };
        let v = a.0.min(b.0);
        if v >= prec {
            return Ok(Self::zero(self.p, prec));
        }
        let m = pow_u128(self.p, prec - v);
        let term = |(vx, ux): (i64, u128)| -> u128 {
            let shift = vx - v;
            if shift >= prec - v {
                0
            } else {
                (ux % m) * pow_u128(self.p, shift) % m
            }
        };
        let s = (term(a) + term(b)) % m;
        if s == 0 {
            return Ok(Self::zero(self.p, prec));
        }
        let (w, u) = split_p(s, self.p);
        Ok(PadicNum { p: self.p, prec, val: Some((v + w, u)) })
    }

    pub fn neg(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some((v, u)) => {
                let m = pow_u128(self.p, self.prec - v);
                PadicNum { p: self.p, prec: self.prec, val: Some((v, (m - u) % m)) }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        match (self.val, other.val) {
            (None, None) => Ok(Self::zero(self.p, self.prec + other.prec)),
            (None, Some((vb, _))) => Ok(Self::zero(self.p, self.prec + vb)),
            (Some((va, _)), None) => Ok(Self::zero(self.p, other.prec + va)),
            (Some((va, ua)), Some((vb, ub))) => {
                let rel = (self.prec - va).min(other.prec - vb);
                let m = pow_u128(self.p, rel);
                let v = va + vb;
                Ok(PadicNum { p: self.p, prec: v + rel, val: Some((v, (ua % m) * (ub % m) % m)) })
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let (v, u) = self.val.ok_or(Error::PrecisionZero)?;
        let rel = self.prec - v;
        let m = pow_u128(self.p, rel);
        let ui = mod_inv(u, m).expect("unit");
        Ok(PadicNum { p: self.p, prec: rel - v, val: Some((-v, ui)) })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::from_int(self.p, 1, base.rel_precision().unwrap_or(self.prec).max(1))?;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Exact multiplication by `p^r`.
    pub fn mul_p_pow(&self, r: i64) -> Self {
        PadicNum { p: self.p, prec: self.prec + r, val: self.val.map(|(v, u)| (v + r, u)) }
    }

    /// Reduction modulo `p` of an integral value.
    pub fn residue(&self) -> Result<u64> {
        match self.val {
            None if self.prec >= 1 => Ok(0),
            None => Err(Error::PrecisionInsufficient),
            Some((v, _)) if v < 0 => Err(Error::NegativeValuation),
            Some((v, _)) if v > 0 => Ok(0),
            Some((_, u)) => Ok((u % self.p as u128) as u64),
        }
    }

    /// The integer `p^v · unit` in `[0, p^prec)` when the value is integral.
    pub fn to_integer(&self) -> Option<i128> {
        match self.val {
            None => Some(0),
            Some((v, _)) if v < 0 => None,
            Some((v, u)) => {
                let mut x = u as i128;
                for _ in 0..v {
                    x = x.checked_mul(self.p as i128)?;
                }
                Some(x)
            }
        }
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None => write!(f, "O({}^{})", self.p, self.prec),
            Some((0, u)) => write!(f, "{u}"),
            Some((v, u)) => write!(f, "{u}*{}^{v}", self.p),
        }
    }
}

/// Teichmüller representative of `r ∈ F_p` to absolute precision `prec`.
pub fn teichmuller(r: &FqElem, prec: i64) -> Result<PadicNum> {
    let field = r.field();
    if field.k() != 1 {
        return Err(Error::InvalidArgument(alloc::string::String::from(
            "Teichmüller lift needs a prime field",
        )));
    }
    let p = field.p();
    if r.is_zero() {
        return Ok(PadicNum::zero(p, prec));
    }
    if prec < 1 {
        return Ok(PadicNum::zero(p, prec));
    }
    if prec > max_rel_precision(p) {
        return Err(Error::PrecisionOverflow);
    }
    let m = pow_u128(p, prec);
    let mut x = r.index() as u128;
    for _ in 1..prec {
        x = mod_pow(x, p as u128, m);
    }
    Ok(PadicNum { p, prec, val: Some((0, x)) })
}
