//! Polynomials over a tower, Hensel lifting and `m`-th roots.

use alloc::string::String;
use alloc::vec::Vec;

use super::desc::TowerDesc;
use super::element::{uniformiser, Element};
use crate::{Error, Result};

const MAX_NEWTON: usize = 256;

/// A polynomial with coefficients in a tower, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Element>,
}

impl Poly {
    /// Trailing zero coefficients are dropped; at least one coefficient must
    /// remain nonzero.
    pub fn new(mut coeffs: Vec<Element>) -> Result<Poly> {
        while coeffs.last().is_some_and(Element::is_zero) {
            coeffs.pop();
        }
        let first = coeffs.first().ok_or(Error::PrecisionZero)?;
        if coeffs.iter().any(|c| c.tower() != first.tower()) {
            return Err(Error::TowerMismatch);
        }
        Ok(Poly { coeffs })
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tower(&self) -> &TowerDesc {
        self.coeffs[0].tower()
    }

    pub fn lead(&self) -> &Element {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> Result<bool> {
        let one = Element::one(self.tower(), self.lead().caps())?;
        self.lead().agrees_with(&one)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Element) -> Result<Element> {
        let mut acc = self.lead().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Result<Poly> {
        if self.coeffs.len() == 1 {
            return Ok(Poly { coeffs: alloc::vec![Element::zero(self.tower(), self.lead().caps())?] });
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let k = Element::from_int(c.tower(), c.caps(), i as i128)?;
            out.push(c.mul(&k)?);
        }
        Ok(Poly { coeffs: out })
    }

    /// Coefficientwise residue; every coefficient must be integral.
    pub fn residue(&self) -> Result<Poly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.is_zero() && c.valuation()? < 0 {
                return Err(Error::NotIntegral);
            }
            out.push(c.residue()?);
        }
        Ok(Poly { coeffs: out })
    }
}

/// The root of `f` with residue `r0`, by Newton iteration.
///
/// `f` must be monic with integral coefficients and `r0` a simple root of
/// the reduction of `f`.
pub fn hensel_lift(f: &Poly, r0: &Element) -> Result<Element> {
    if !f.is_monic()? {
        return Err(Error::InvalidArgument(String::from("polynomial must be monic")));
    }
    let fbar = f.residue()?;
    if !fbar.eval(r0)?.is_zero() {
        return Err(Error::NoRoot);
    }
    let df = f.derivative()?;
    if df.residue()?.eval(r0)?.is_zero() {
        return Err(Error::NonSimpleRoot);
    }
    let caps = f.lead().caps().clone();
    let mut a = Element::lift(r0, f.tower(), &caps)?;
    for _ in 0..MAX_NEWTON {
        let value = f.eval(&a)?;
        if value.is_zero() {
            return Ok(a);
        }
        let step = value.div(&df.eval(&a)?)?;
        let next = a.sub(&step)?;
        if next == a || step.is_zero() {
            return Ok(next);
        }
        a = next;
    }
    Err(Error::NoConvergence)
}

/// An `m`-th root of `a`, found by lifting a root of `X^m − ū` from the
/// residue field and restoring the uniformiser power.
pub fn mth_root(a: &Element, m: u64) -> Result<Element> {
    if m == 0 {
        return Err(Error::InvalidArgument(String::from("root degree must be positive")));
    }
    if m == 1 {
        return Ok(a.clone());
    }
    let tower = a.tower();
    let residue_tower = tower.residue_once()?;
    let ch = residue_tower.characteristic();
    if ch != 0 && m.is_multiple_of(ch) {
        return Err(Error::CharDividesDegree);
    }
    let nu = a.valuation()?;
    if nu % m as i64 != 0 {
        return Err(Error::NotDivisible(alloc::format!("valuation {nu} is not divisible by {m}")));
    }
    let pi = uniformiser(tower)?;
    let unit = a.mul_gen_pow(pi, -nu)?;
    let ubar = unit.residue()?;
    let root = residue_root(&ubar, m)?;
    let caps = a.caps();
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    coeffs.push(unit.neg());
    for _ in 1..m {
        coeffs.push(Element::zero(tower, caps)?);
    }
    coeffs.push(Element::one(tower, caps)?);
    let b = hensel_lift(&Poly::new(coeffs)?, &root)?;
    b.mul_gen_pow(pi, nu / m as i64)
}

/// Smallest root by enumeration in a finite field, recursion otherwise.
fn residue_root(u: &Element, m: u64) -> Result<Element> {
    match u.tower() {
        TowerDesc::BaseFq(field) => {
            let target = u.terms().into_iter().next().map(|(_, c)| c);
            let target = match target {
                Some(super::element::BaseCoeff::Fq(x)) => x,
                _ => return Err(Error::NoRoot),
            };
            for x in field.elements() {
                if !x.is_zero() && x.pow(m as i64)? == target {
                    return Element::from_fq(u.tower(), u.caps(), &x);
                }
            }
            Err(Error::NoRoot)
        }
        _ => mth_root(u, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffbase::FqField;
    use crate::tower::Precision;

    #[test]
    fn square_root_of_six() {
        let t = TowerDesc::padic(5).unwrap();
        let pr = Precision::uniform(&t, 1, (0, 1), 6);
        let six = Element::from_int(&t, &pr, 6).unwrap();
        let f = Poly::new(alloc::vec![six.neg(), Element::zero(&t, &pr).unwrap(), Element::one(&t, &pr).unwrap()]).unwrap();
        let r0 = Element::from_int(&TowerDesc::fq(FqField::prime(5).unwrap()), &Precision { padic: 6, levels: Vec::new() }, 1).unwrap();
        let a = hensel_lift(&f, &r0).unwrap();
        assert!(a.mul(&a).unwrap().agrees_with(&six).unwrap());
        assert_eq!(a.residue().unwrap(), r0);
        assert_eq!(hensel_lift(&f, &r0).unwrap(), a);
    }

    #[test]
    fn cube_root_char_two() {
        let t = TowerDesc::fq(FqField::prime(2).unwrap()).laurent("t").unwrap();
        let pr = Precision::uniform(&t, 8, (0, 1), 1);
        let x = Element::var(&t, &pr, "t").unwrap();
        let a = Element::one(&t, &pr).unwrap().add(&x).unwrap();
        let b = mth_root(&a, 3).unwrap();
        let cube = b.pow(3).unwrap();
        assert!(cube.agrees_with(&a).unwrap());
        assert!(cube.knows(&[7]));
    }

    #[test]
    fn root_rejections() {
        let t = TowerDesc::fq(FqField::prime(3).unwrap()).laurent("t").unwrap();
        let pr = Precision::uniform(&t, 8, (0, 1), 1);
        let x = Element::var(&t, &pr, "t").unwrap();
        assert!(matches!(mth_root(&x, 2), Err(Error::NotDivisible(_))));
        assert_eq!(mth_root(&x, 3), Err(Error::CharDividesDegree));
        let one = Element::one(&t, &pr).unwrap();
        assert_eq!(mth_root(&one, 2).unwrap().pow(2).unwrap(), one);
    }
}
