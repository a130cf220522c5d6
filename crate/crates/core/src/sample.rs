//! Seeded random elements for property tests and verification harnesses.

use alloc::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeffbase::PadicNum;
use crate::tower::value::{Value, EXACT};
use crate::tower::{Element, LevelPrec, Precision, TowerDesc};
use crate::Result;

/// Deterministic generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random series.
#[derive(Clone, Copy, Debug)]
pub struct SampleShape {
    /// Maximum number of terms per series level.
    pub terms: usize,
    /// Exponents are drawn from `[-span, span]`.
    pub span: i64,
    /// `p`-adic coefficient valuations are drawn from `[0, max_val]`.
    pub max_val: i64,
    /// Produce finite exact sums instead of series truncated at the caps.
    pub exact: bool,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape { terms: 3, span: 2, max_val: 1, exact: false }
    }
}

/// A random element; it may be zero.
pub fn random_element<R: Rng>(rng: &mut R, tower: &TowerDesc, caps: &Precision, shape: SampleShape) -> Result<Element> {
    caps.validate(tower)?;
    let v = random_value(rng, tower, &caps.levels, caps.padic, shape, false)?;
    Ok(Element::from_value(tower, caps, v))
}

/// A random element that is nonzero at working precision.
pub fn random_nonzero<R: Rng>(rng: &mut R, tower: &TowerDesc, caps: &Precision, shape: SampleShape) -> Result<Element> {
    caps.validate(tower)?;
    let v = random_value(rng, tower, &caps.levels, caps.padic, shape, true)?;
    Ok(Element::from_value(tower, caps, v))
}

fn random_value<R: Rng>(
    rng: &mut R,
    tower: &TowerDesc,
    levels: &[LevelPrec],
    padic: i64,
    shape: SampleShape,
    nonzero: bool,
) -> Result<Value> {
    match tower {
        TowerDesc::BaseFq(f) => {
            let lo = u64::from(nonzero);
            Ok(Value::Fq(f.from_index(rng.gen_range(lo..f.q()))?))
        }
        TowerDesc::BasePadic(p) => {
            if !nonzero && rng.gen_ratio(1, 8) {
                return Ok(Value::Padic(PadicNum::zero(*p, padic)));
            }
            let v = rng.gen_range(0..=shape.max_val.min(padic - 1).max(0));
            let modulus = (*p as i128).pow((padic - v) as u32);
            let mut u: i128 = rng.gen_range(1..modulus);
            while u % *p as i128 == 0 {
                u = rng.gen_range(1..modulus);
            }
            let n = u * (*p as i128).pow(v as u32);
            Ok(Value::Padic(PadicNum::from_int(*p, n, padic)?))
        }
        TowerDesc::Laurent(inner, _) | TowerDesc::Curly(inner, _) => {
            let (rest, last) = levels.split_at(levels.len() - 1);
            let (lo, hi) = match last[0] {
                LevelPrec::Laurent { n } => (-shape.span, n),
                LevelPrec::Curly { lo, hi } => (lo.max(-shape.span), hi),
            };
            let top = shape.span.min(hi - 1);
            let count = if nonzero { rng.gen_range(1..=shape.terms.max(1)) } else { rng.gen_range(0..=shape.terms) };
            let mut coeffs = BTreeMap::new();
            if top >= lo {
                for _ in 0..count {
                    let e = rng.gen_range(lo..=top);
                    let c = random_value(rng, inner, rest, padic, shape, true)?;
                    coeffs.insert(e, c);
                }
            }
            let bound = if shape.exact { EXACT } else { hi };
            Ok(match last[0] {
                LevelPrec::Laurent { .. } => Value::Laurent { n: bound, coeffs },
                LevelPrec::Curly { lo: cap_lo, .. } => Value::Curly { lo: cap_lo, hi: bound, coeffs },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_nonzero() {
        let t = TowerDesc::padic(5).unwrap().curly("t").unwrap();
        let caps = Precision::uniform(&t, 4, (-6, 8), 4);
        let mut a = rng(3);
        let mut b = rng(3);
        for _ in 0..50 {
            let x = random_nonzero(&mut a, &t, &caps, SampleShape::default()).unwrap();
            let y = random_nonzero(&mut b, &t, &caps, SampleShape::default()).unwrap();
            assert_eq!(x, y);
            assert!(!x.is_zero());
        }
    }
}
