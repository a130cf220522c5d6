use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{FqElem, FqField};
use crate::{Error, Result};

/// Dense univariate polynomial over a finite field, low degree first, with
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqPoly {
    field: FqField,
    coeffs: Vec<FqElem>,
}

impl PartialOrd for FqPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then by coefficients from the top down.
impl Ord for FqPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl FqPoly {
    pub fn new(field: &FqField, mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FqField) -> Self {
        FqPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FqField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FqElem) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// The polynomial `X`.
    pub fn x(field: &FqField) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: FqElem, degree: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); degree];
        coeffs.push(c);
        Self::new(&field, coeffs)
    }

    /// `X - b`.
    pub fn linear(b: &FqElem) -> Self {
        let field = b.field().clone();
        Self::new(&field, vec![b.neg(), field.one()])
    }

    pub fn from_ints(field: &FqField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::new(&self.field, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.field, c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(&self.field, c)
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = r[top].mul(&inv_lead);
            if !c.is_zero() {
                let shift = top - dd;
                q[shift] = c.clone();
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[shift + j] = r[shift + j].sub(&c.mul(dj));
                }
            }
            r.pop();
        }
        Ok((Self::new(&self.field, q), Self::new(&self.field, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible(String::from("polynomial division is not exact")));
        }
        Ok(q)
    }

    pub fn make_monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = l.inv().expect("nonzero lead");
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
        }
    }

    /// Inverse modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Self) -> Result<Self> {
        let (g, s, _) = self.ext_gcd(m);
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        s.rem(m)
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m).expect("nonzero modulus");
        let mut b = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&b, m);
            }
            b = b.mul_mod(&b, m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.mul(&self.field.from_int((i as u64 % self.field.p()) as i64)))
            .collect();
        Self::new(&self.field, c)
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `X^d · self(1/X)` for `d = deg self`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(&self.field, c)
    }

    /// Largest `k` with `pi^k | self`; `None` for zero.
    pub fn valuation_at(&self, pi: &Self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(pi).expect("nonzero prime");
            if !r.is_zero() {
                return Some(k);
            }
            cur = q;
            k += 1;
        }
    }

    /// Irreducibility over the coefficient field by the distinct-degree test.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        if d == 1 {
            return true;
        }
        let q = self.field.q() as u128;
        let x = Self::x(&self.field);
        let mut xp = x.clone();
        for _ in 1..=d / 2 {
            xp = xp.pow_mod(q, self);
            if !self.gcd(&xp.sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// All monic polynomials of exact degree `d`, in increasing order.
    pub fn monics(field: &FqField, d: usize) -> impl Iterator<Item = FqPoly> + '_ {
        let q = field.q();
        let count = q.pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(field.from_index(idx % q).expect("in range"));
                idx /= q;
            }
            c.push(field.one());
            FqPoly::new(field, c)
        })
    }

    /// Renders in the variable `var`, generator of the coefficient field as `g`.
    pub fn to_expr(&self, var: &str) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => String::from(var),
                _ => alloc::format!("{var}^{i}"),
            };
            let coef = c.to_expr("g");
            let coef = if self.field.k() > 1 && coef.contains('+') {
                alloc::format!("({coef})")
            } else {
                coef
            };
            parts.push(match (c.is_one(), i) {
                (_, 0) => coef,
                (true, _) => mono,
                _ => alloc::format!("{coef}*{mono}"),
            });
        }
        parts.join("+")
    }
}
