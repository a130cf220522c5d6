use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::params::{last_residue, local_gens, representative, unit_decompose};
use crate::coeffbase::FqElem;
use crate::tower::{Element, Precision, TowerDesc};
use crate::{Error, Result};

/// Exponents of the local parameters `t_1, …, t_n`.
pub type MultiIndex = Vec<i64>;

const MAX_DIGITS: usize = 1 << 16;

/// `a = Σ θ_i t^i` with representatives `θ_i` and the caps it was computed at.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditiveExpansion {
    pub tower: TowerDesc,
    pub window: Precision,
    pub digits: BTreeMap<MultiIndex, FqElem>,
}

/// `a = t^r · θ · Π (1 + θ_i t^i)`, factors listed in the order they were
/// found (increasing leading terms).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicativeExpansion {
    pub tower: TowerDesc,
    pub window: Precision,
    pub exponents: MultiIndex,
    pub leading: FqElem,
    pub factors: Vec<(MultiIndex, FqElem)>,
}

fn monomial(tower: &TowerDesc, caps: &Precision, coeff: &FqElem, exps: &[i64]) -> Result<Element> {
    let mut m = representative(tower, caps, coeff)?;
    for (g, e) in local_gens(tower).iter().zip(exps) {
        m = m.mul_gen_pow(*g, *e)?;
    }
    Ok(m)
}

/// Leading term of a nonzero element: its exponent vector and digit.
fn leading_term(a: &Element) -> Result<(MultiIndex, FqElem)> {
    let (exps, unit) = unit_decompose(a)?;
    Ok((exps, last_residue(&unit)?))
}

/// Greedy expansion in the canonical parameters: repeatedly subtract the
/// leading digit until nothing certified remains.
pub fn additive_expand(a: &Element) -> Result<AdditiveExpansion> {
    let (tower, caps) = (a.tower(), a.caps());
    let mut rest = a.clone();
    let mut digits = BTreeMap::new();
    while !rest.is_zero() {
        if digits.len() >= MAX_DIGITS {
            return Err(Error::NoConvergence);
        }
        let (exps, theta) = leading_term(&rest)?;
        rest = rest.sub(&monomial(tower, caps, &theta, &exps)?)?;
        if digits.insert(exps, theta).is_some() {
            return Err(Error::NoConvergence);
        }
    }
    Ok(AdditiveExpansion { tower: tower.clone(), window: caps.clone(), digits })
}

impl AdditiveExpansion {
    pub fn evaluate(&self) -> Result<Element> {
        let mut acc = Element::zero(&self.tower, &self.window)?;
        for (exps, theta) in &self.digits {
            acc = acc.add(&monomial(&self.tower, &self.window, theta, exps)?)?;
        }
        Ok(acc)
    }

    pub fn support(&self) -> Vec<MultiIndex> {
        self.digits.keys().cloned().collect()
    }
}

/// Truncation applied to partial products. Removing `t^r` moves the known
/// window by at most `max |r_i|`, so caps widened by that much never cut
/// into what the principal unit knows, while keeping products finite.
fn product_bounds(caps: &Precision, exponents: &[i64]) -> Precision {
    caps.widened(exponents.iter().map(|r| r.abs()).max().unwrap_or(0) + 1)
}

/// Greedy product expansion: after removing `t^r · θ`, the remaining
/// principal unit is matched by factors `1 + θ_i t^i` taken in increasing
/// order of their leading terms.
pub fn multiplicative_expand(a: &Element) -> Result<MultiplicativeExpansion> {
    let (tower, caps) = (a.tower(), a.caps());
    if a.is_zero() {
        return Err(Error::PrecisionZero);
    }
    // An exact curly series would be matched by infinitely many factors.
    let a = &a.bounded();
    let (exponents, unit) = unit_decompose(a)?;
    let leading = last_residue(&unit)?;
    let principal = unit.div(&representative(tower, caps, &leading)?)?;
    let bounds = product_bounds(caps, &exponents);
    let mut product = Element::one(tower, caps)?;
    let mut factors: Vec<(MultiIndex, FqElem)> = Vec::new();
    loop {
        let d = principal.sub(&product)?;
        if d.is_zero() {
            break;
        }
        if factors.len() >= MAX_DIGITS {
            return Err(Error::NoConvergence);
        }
        let (exps, theta) = leading_term(&d)?;
        let c = monomial(tower, caps, &theta, &exps)?;
        product = product.add(&product.mul(&c)?)?.truncate(&bounds)?;
        if factors.iter().any(|(e, _)| *e == exps) {
            return Err(Error::NoConvergence);
        }
        factors.push((exps, theta));
    }
    Ok(MultiplicativeExpansion { tower: tower.clone(), window: caps.clone(), exponents, leading, factors })
}

impl MultiplicativeExpansion {
    /// Multiplies the factors back together in the order they were found,
    /// so the result carries the precision the expansion certified.
    pub fn recompose(&self) -> Result<Element> {
        let bounds = product_bounds(&self.window, &self.exponents);
        let mut product = Element::one(&self.tower, &self.window)?;
        for (exps, theta) in &self.factors {
            let c = monomial(&self.tower, &self.window, theta, exps)?;
            product = product.add(&product.mul(&c)?)?.truncate(&bounds)?;
        }
        product.mul(&monomial(&self.tower, &self.window, &self.leading, &self.exponents)?)
    }

    pub fn support(&self) -> Vec<MultiIndex> {
        self.factors.iter().map(|(e, _)| e.clone()).collect()
    }
}

/// Window-relative admissibility: for every coordinate `r` and every fixed
/// tail of later coordinates, the `r`-th coordinates must stay strictly
/// above the window's lower face `faces[r]` (a face of `None` means the
/// window certifies everything below it). A set that reaches a face is
/// reported as not boundable on the window.
pub fn check_admissible(set: &[MultiIndex], faces: &[Option<i64>]) -> bool {
    let n = faces.len();
    for r in 0..n {
        let Some(face) = faces[r] else { continue };
        let mut minima: BTreeMap<&[i64], i64> = BTreeMap::new();
        for idx in set {
            if idx.len() != n {
                return false;
            }
            let entry = minima.entry(&idx[r + 1..]).or_insert(idx[r]);
            *entry = (*entry).min(idx[r]);
        }
        if minima.values().any(|m| *m <= face) {
            return false;
        }
    }
    true
}
