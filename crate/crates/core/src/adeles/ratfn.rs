use alloc::vec::Vec;
use core::fmt;

use crate::coeffbase::{FieldEmbedding, FqField, FqPoly};
use crate::{Error, Result};

/// A rational function in one variable over a finite field, stored reduced
/// with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: FqPoly,
    den: FqPoly,
}

impl RatFn {
    pub fn new(num: FqPoly, den: FqPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let lead = den.lead().expect("nonzero").inv()?;
        Ok(RatFn { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: FqPoly) -> Self {
        let den = FqPoly::one(p.field());
        RatFn { num: p, den }
    }

    pub fn zero(field: &FqField) -> Self {
        RatFn { num: FqPoly::zero(field), den: FqPoly::one(field) }
    }

    pub fn one(field: &FqField) -> Self {
        Self::from_poly(FqPoly::one(field))
    }

    pub fn var(field: &FqField) -> Self {
        Self::from_poly(FqPoly::x(field))
    }

    pub fn field(&self) -> &FqField {
        self.num.field()
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> Result<RatFn> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<RatFn> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RatFn { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Valuation at the place of a monic irreducible `pi`; `None` for zero.
    pub fn valuation_at(&self, pi: &FqPoly) -> Option<i64> {
        Some(self.num.valuation_at(pi)? - self.den.valuation_at(pi).expect("nonzero"))
    }

    /// Valuation at infinity, `deg den − deg num`.
    pub fn valuation_inf(&self) -> Option<i64> {
        Some(self.den.degree()? as i64 - self.num.degree()? as i64)
    }

    /// `self(x + b)`.
    pub fn translate(&self, b: &crate::coeffbase::FqElem) -> Result<RatFn> {
        let shift = FqPoly::linear(&b.neg());
        RatFn::new(self.num.compose(&shift), self.den.compose(&shift))
    }

    /// Image under a coefficient embedding.
    pub fn map(&self, emb: &FieldEmbedding) -> RatFn {
        let map = |p: &FqPoly| FqPoly::new(emb.target(), p.coeffs().iter().map(|c| emb.apply(c)).collect());
        RatFn { num: map(&self.num), den: map(&self.den) }
    }

    pub fn to_expr(&self, var: &str) -> alloc::string::String {
        if self.den.is_one() {
            return self.num.to_expr(var);
        }
        alloc::format!("({})/({})", self.num.to_expr(var), self.den.to_expr(var))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("u"))
    }
}

/// A truncated expansion `Σ_{v ≤ j < prec} d_j π^j` whose digits are
/// polynomials of degree below `deg π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pi: FqPoly,
    start: i64,
    prec: i64,
    digits: Vec<FqPoly>,
}

impl Expansion {
    pub fn zero(pi: &FqPoly, prec: i64) -> Self {
        Expansion { pi: pi.clone(), start: prec, prec, digits: Vec::new() }
    }

    /// Expands `π^shift · num/den` with `num, den` polynomials in the
    /// coordinate of `π`, keeping digits below `prec`.
    pub fn of_fraction(pi: &FqPoly, num: &FqPoly, den: &FqPoly, shift: i64, prec: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let Some(vn) = num.valuation_at(pi) else {
            return Ok(Self::zero(pi, prec));
        };
        let vd = den.valuation_at(pi).expect("nonzero");
        let start = vn - vd + shift;
        if start >= prec {
            return Ok(Self::zero(pi, prec));
        }
        let rel = (prec - start) as u32;
        let modulus = pi.pow(rel);
        let a = num.exact_div(&pi.pow(vn as u32))?;
        let b = den.exact_div(&pi.pow(vd as u32))?;
        let g = a.mul(&b.inv_mod(&modulus)?).rem(&modulus)?;
        Ok(Self::from_unit_poly(pi, start, prec, &g))
    }

    fn from_unit_poly(pi: &FqPoly, start: i64, prec: i64, g: &FqPoly) -> Self {
        let mut digits = Vec::with_capacity((prec - start).max(0) as usize);
        let mut rest = g.clone();
        for _ in start..prec {
            let (q, r) = rest.divrem(pi).expect("nonzero prime");
            digits.push(r);
            rest = q;
        }
        Self::normalized(pi, start, prec, digits)
    }

    fn normalized(pi: &FqPoly, mut start: i64, prec: i64, mut digits: Vec<FqPoly>) -> Self {
        let lead = digits.iter().take_while(|d| d.is_zero()).count();
        digits.drain(..lead);
        start += lead as i64;
        while digits.last().is_some_and(FqPoly::is_zero) {
            digits.pop();
        }
        if digits.is_empty() {
            start = prec;
        }
        Expansion { pi: pi.clone(), start, prec, digits }
    }

    pub fn uniformiser(&self) -> &FqPoly {
        &self.pi
    }

    /// Valuation, or `None` when zero at precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.digits.is_empty()).then_some(self.start)
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit of `π^j` (zero outside the stored range).
    pub fn digit(&self, j: i64) -> FqPoly {
        if j < self.start || j >= self.start + self.digits.len() as i64 {
            return FqPoly::zero(self.pi.field());
        }
        self.digits[(j - self.start) as usize].clone()
    }

    /// Nonzero digits with their exponents.
    pub fn digits(&self) -> Vec<(i64, FqPoly)> {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| (self.start + i as i64, d.clone()))
            .collect()
    }

    fn check(&self, o: &Expansion) -> Result<()> {
        if self.pi != o.pi {
            return Err(Error::InvalidArgument(alloc::string::String::from("expansions at different points")));
        }
        Ok(())
    }

    pub fn truncate(&self, prec: i64) -> Expansion {
        let prec = prec.min(self.prec);
        let digits = self.digits.iter().enumerate().filter(|(i, _)| self.start + (*i as i64) < prec).map(|(_, d)| d.clone()).collect();
        Self::normalized(&self.pi, self.start.min(prec), prec, digits)
    }

    pub fn add(&self, o: &Expansion) -> Result<Expansion> {
        self.check(o)?;
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let digits = (start..prec).map(|j| self.digit(j).add(&o.digit(j))).collect();
        Ok(Self::normalized(&self.pi, start, prec, digits))
    }

    pub fn neg(&self) -> Expansion {
        Expansion { pi: self.pi.clone(), start: self.start, prec: self.prec, digits: self.digits.iter().map(FqPoly::neg).collect() }
    }

    pub fn sub(&self, o: &Expansion) -> Result<Expansion> {
        self.add(&o.neg())
    }

    /// `Σ_j d_j π^{j − start}` as a polynomial.
    fn unit_poly(&self) -> FqPoly {
        let mut acc = FqPoly::zero(self.pi.field());
        for d in self.digits.iter().rev() {
            acc = acc.mul(&self.pi).add(d);
        }
        acc
    }

    pub fn mul(&self, o: &Expansion) -> Result<Expansion> {
        self.check(o)?;
        match (self.valuation(), o.valuation()) {
            (Some(va), Some(vb)) => {
                let prec = (self.prec + vb).min(o.prec + va);
                let start = va + vb;
                if start >= prec {
                    return Ok(Self::zero(&self.pi, prec));
                }
                let modulus = self.pi.pow((prec - start) as u32);
                let g = self.unit_poly().mul(&o.unit_poly()).rem(&modulus)?;
                Ok(Self::from_unit_poly(&self.pi, start, prec, &g))
            }
            (None, Some(v)) => Ok(Self::zero(&self.pi, self.prec + v)),
            (Some(v), None) => Ok(Self::zero(&self.pi, o.prec + v)),
            (None, None) => Ok(Self::zero(&self.pi, self.prec + o.prec)),
        }
    }

    /// Equality on the digits both operands determine.
    pub fn agrees_with(&self, o: &Expansion) -> Result<bool> {
        Ok(self.sub(o)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_multiplies_back() {
        let f = FqField::prime(2).unwrap();
        let pi = FqPoly::from_ints(&f, &[1, 1, 1]);
        let one = FqPoly::one(&f);
        let e = Expansion::of_fraction(&pi, &one, &pi, 0, 6).unwrap();
        assert_eq!(e.valuation(), Some(-1));
        assert!(e.digit(-1).is_one());
        let x = FqPoly::x(&f);
        let g = Expansion::of_fraction(&pi, &x, &x.add(&one), 0, 6).unwrap();
        let back = g.mul(&Expansion::of_fraction(&pi, &x.add(&one), &one, 0, 6).unwrap()).unwrap();
        assert!(back.agrees_with(&Expansion::of_fraction(&pi, &x, &one, 0, 6).unwrap()).unwrap());
        let r = RatFn::new(x.clone(), x.mul(&x)).unwrap();
        assert_eq!(r.den(), &x);
        assert_eq!(r.valuation_inf(), Some(1));
    }
}
