use core::fmt;

use super::arith::gcd_i128;
use crate::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalNum {
    num: i128,
    den: i128,
}

impl RationalNum {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = gcd_i128(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ok(RationalNum { num: s * num / g, den: s * den / g })
    }

    pub fn from_int(n: i128) -> Self {
        RationalNum { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.num * o.den + o.num * self.den, self.den * o.den).expect("nonzero")
    }

    pub fn neg(&self) -> Self {
        RationalNum { num: -self.num, den: self.den }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num * o.num, self.den * o.den).expect("nonzero")
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den, self.num)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `p`-adic valuation; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        if self.num == 0 {
            return None;
        }
        let count = |mut n: i128| {
            let mut v = 0;
            while n % p as i128 == 0 {
                n /= p as i128;
                v += 1;
            }
            v
        };
        Some(count(self.num) - count(self.den))
    }

    /// Residue modulo `p` of a `p`-adic unit.
    pub fn residue_mod(&self, p: u64) -> Result<u64> {
        if self.valuation(p) != Some(0) {
            return Err(Error::InvalidArgument(alloc::format!("{self} is not a {p}-adic unit")));
        }
        let m = p as i128;
        let n = self.num.rem_euclid(m) as u128;
        let d = self.den.rem_euclid(m) as u128;
        let di = super::arith::mod_inv(d, p as u128).expect("unit");
        Ok((n * di % p as u128) as u64)
    }
}

impl fmt::Display for RationalNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises() {
        let r = RationalNum::new(6, -4).unwrap();
        assert_eq!((r.numer(), r.denom()), (-3, 2));
        assert_eq!(r.valuation(3), Some(1));
        assert_eq!(r.valuation(2), Some(-1));
        assert_eq!(RationalNum::new(2, 3).unwrap().residue_mod(5).unwrap(), 4);
    }
}
