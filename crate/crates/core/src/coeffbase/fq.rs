use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::arith::is_prime;
use crate::{Error, Result};

const MAX_DEGREE: u32 = 16;

#[derive(Debug)]
struct FieldData {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus over `F_p`, low degree first, length `k + 1`.
    modulus: Vec<u64>,
}

/// The finite field `F_{p^k}` presented as `F_p[X]/(m)`.
#[derive(Clone, Debug)]
pub struct FqField(Arc<FieldData>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FqField {}

impl FqField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::InvalidArgument(alloc::format!("extension degree {k}")));
        }
        let q = p
            .checked_pow(k)
            .filter(|q| *q <= 1 << 32)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("field {p}^{k} too large")))?;
        let modulus = least_irreducible(p, k);
        Ok(FqField(Arc::new(FieldData { p, k, q, modulus })))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem { field: self.clone(), rep: 0 }
    }

    pub fn one(&self) -> FqElem {
        FqElem { field: self.clone(), rep: 1 }
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.0.p as i128;
        FqElem { field: self.clone(), rep: (n as i128).rem_euclid(p) as u64 }
    }

    /// Element with the given base-`p` index (its coefficients as digits).
    pub fn from_index(&self, index: u64) -> Result<FqElem> {
        if index >= self.0.q {
            return Err(Error::OutOfRange(alloc::format!("index {index} in F_{}", self.0.q)));
        }
        Ok(FqElem { field: self.clone(), rep: index })
    }

    /// Reduces a polynomial over `F_p` (low degree first) modulo the modulus.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FqElem {
        let p = self.0.p;
        let mut c: Vec<u64> = coeffs.iter().map(|&x| (x as i128).rem_euclid(p as i128) as u64).collect();
        self.reduce(&mut c);
        FqElem { field: self.clone(), rep: self.encode(&c) }
    }

    /// The class of `X`; for prime fields this is `0` since the modulus is `X`.
    pub fn generator(&self) -> FqElem {
        self.from_coeffs(&[0, 1])
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q).map(move |rep| FqElem { field: self.clone(), rep })
    }

    fn decode(&self, rep: u64) -> [u64; MAX_DEGREE as usize] {
        let mut out = [0u64; MAX_DEGREE as usize];
        let mut r = rep;
        for slot in out.iter_mut().take(self.0.k as usize) {
            *slot = r % self.0.p;
            r /= self.0.p;
        }
        out
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut rep = 0u64;
        for &d in digits.iter().take(self.0.k as usize).rev() {
            rep = rep * self.0.p + d;
        }
        rep
    }

    fn reduce(&self, c: &mut Vec<u64>) {
        let k = self.0.k as usize;
        let p = self.0.p;
        let m = &self.0.modulus;
        for i in (k..c.len()).rev() {
            let lead = c[i] % p;
            if lead == 0 {
                continue;
            }
            for j in 0..=k {
                let idx = i - k + j;
                c[idx] = (c[idx] + (p - lead) * m[j] % p) % p;
            }
        }
        c.truncate(k);
        c.resize(k, 0);
    }
}

/// An element of a finite field, stored as the base-`p` index of its
/// polynomial representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqElem {
    field: FqField,
    rep: u64,
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.p(), self.field.k(), self.rep).cmp(&(other.field.p(), other.field.k(), other.rep))
    }
}

impl FqElem {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn index(&self) -> u64 {
        self.rep
    }

    /// Coefficients over `F_p`, low degree first, length `k`.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.decode(self.rep)[..self.field.k() as usize].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.rep == 0
    }

    pub fn is_one(&self) -> bool {
        self.rep == 1
    }

    fn same(&self, other: &Self) {
        assert!(self.field == other.field, "finite field mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same(other);
        let p = self.field.p();
        if self.field.k() == 1 {
            return FqElem { field: self.field.clone(), rep: (self.rep + other.rep) % p };
        }
        let a = self.field.decode(self.rep);
        let b = self.field.decode(other.rep);
        let mut c = [0u64; MAX_DEGREE as usize];
        for i in 0..self.field.k() as usize {
            c[i] = (a[i] + b[i]) % p;
        }
        FqElem { field: self.field.clone(), rep: self.field.encode(&c) }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p();
        let a = self.field.decode(self.rep);
        let mut c = [0u64; MAX_DEGREE as usize];
        for i in 0..self.field.k() as usize {
            c[i] = (p - a[i]) % p;
        }
        FqElem { field: self.field.clone(), rep: self.field.encode(&c) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same(other);
        let p = self.field.p();
        let k = self.field.k() as usize;
        if k == 1 {
            let r = (self.rep as u128 * other.rep as u128 % p as u128) as u64;
            return FqElem { field: self.field.clone(), rep: r };
        }
        let a = self.field.decode(self.rep);
        let b = self.field.decode(other.rep);
        let mut c = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                c[i + j] = (c[i + j] + a[i] * b[j]) % p;
            }
        }
        self.field.reduce(&mut c);
        FqElem { field: self.field.clone(), rep: self.field.encode(&c) }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            exp >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.pow(self.field.q() as i64 - 2)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Renders the element as an expression in the generator name `g`.
    pub fn to_expr(&self, gen: &str) -> String {
        if self.field.k() == 1 {
            return alloc::format!("{}", self.rep);
        }
        let c = self.coeffs();
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => String::from(gen),
                _ => alloc::format!("{gen}^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => alloc::format!("{ci}"),
                (1, _) => mono,
                _ => alloc::format!("{ci}*{mono}"),
            });
        }
        if parts.is_empty() {
            return String::from("0");
        }
        parts.join("+")
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr("g"))
    }
}

/// An inclusion `F_q -> F_{q^d}` fixed by the image of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldEmbedding {
    from: FqField,
    to: FqField,
    image: FqElem,
}

impl FieldEmbedding {
    /// The embedding sending the generator to the least root of its modulus.
    pub fn new(from: &FqField, to: &FqField) -> Result<Self> {
        if from.p() != to.p() || !to.k().is_multiple_of(from.k()) {
            return Err(Error::FieldMismatch);
        }
        let image = if from.k() == 1 {
            to.zero()
        } else {
            let m = from.modulus();
            to.elements()
                .find(|x| {
                    let mut acc = to.zero();
                    for &c in m.iter().rev() {
                        acc = acc.mul(x).add(&to.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .ok_or(Error::NoRoot)?
        };
        Ok(FieldEmbedding { from: from.clone(), to: to.clone(), image })
    }

    pub fn source(&self) -> &FqField {
        &self.from
    }

    pub fn target(&self) -> &FqField {
        &self.to
    }

    pub fn apply(&self, x: &FqElem) -> FqElem {
        assert!(x.field() == &self.from, "embedding applied to foreign element");
        if self.from.k() == 1 {
            return self.to.from_int(x.index() as i64);
        }
        let mut acc = self.to.zero();
        for &c in x.coeffs().iter().rev() {
            acc = acc.mul(&self.image).add(&self.to.from_int(c as i64));
        }
        acc
    }
}

fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = super::arith::mod_inv(b[db] as u128, p as u128).unwrap() as u64;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            let c = lead * inv_lead % p;
            for (j, &bj) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + (p - c) * bj % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    for deg in 1..=d / 2 {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut r = idx;
            for _ in 0..deg {
                g.push(r % p);
                r /= p;
            }
            g.push(1);
            if poly_rem_mod_p(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible of degree `k`, ordering candidates by the base-`p`
/// number formed from their non-leading coefficients, highest degree first.
fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for idx in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut r = idx;
        for _ in 0..k {
            f.push(r % p);
            r /= p;
        }
        f.push(1);
        if is_irreducible_mod_p(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
