//! The isomorphism `k((u)){{t}} ≅ k((t))((u))` by transposing coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;

use super::desc::{LevelPrec, Precision, TowerDesc};
use super::element::Element;
use super::value::{Value, EXACT};
use crate::{Error, Result};

fn shape_error() -> Error {
    Error::ShapeMismatch(String::from("expected a curly level over a Laurent level"))
}

/// Maps `Σ_i (Σ_j a_ij u^j) t^i` in `k((u)){{t}}` to `Σ_j (Σ_i a_ij t^i) u^j`
/// in `k((t))((u))`.
pub fn reshuffle(a: &Element) -> Result<Element> {
    let TowerDesc::Curly(inner, t) = a.tower() else {
        return Err(shape_error());
    };
    let TowerDesc::Laurent(base, u) = &**inner else {
        return Err(shape_error());
    };
    let target = TowerDesc::Laurent(Arc::new(TowerDesc::Laurent(base.clone(), t.clone())), u.clone());

    let caps = a.caps();
    let depth = caps.levels.len();
    let (u_cap, t_hi) = match (caps.levels[depth - 2], caps.levels[depth - 1]) {
        (LevelPrec::Laurent { n }, LevelPrec::Curly { hi, .. }) => (n, hi),
        _ => return Err(shape_error()),
    };
    let mut levels = caps.levels[..depth - 2].to_vec();
    levels.push(LevelPrec::Laurent { n: t_hi });
    levels.push(LevelPrec::Laurent { n: u_cap });
    let target_caps = Precision { padic: caps.padic, levels };

    let Value::Curly { hi, coeffs, .. } = a.value() else {
        return Err(shape_error());
    };
    let mut n_out = EXACT;
    let mut grid: BTreeMap<i64, BTreeMap<i64, Value>> = BTreeMap::new();
    for (i, c) in coeffs {
        let Value::Laurent { n, coeffs: inner_coeffs } = c else {
            return Err(shape_error());
        };
        n_out = n_out.min(*n);
        for (j, x) in inner_coeffs {
            grid.entry(*j).or_default().insert(*i, x.clone());
        }
    }
    let out = grid
        .into_iter()
        .filter(|(j, _)| *j < n_out)
        .map(|(j, row)| (j, Value::Laurent { n: *hi, coeffs: row }))
        .collect();
    Ok(Element::from_value(&target, &target_caps, Value::Laurent { n: n_out, coeffs: out }))
}

/// Inverse of [`reshuffle`].
pub fn unshuffle(b: &Element) -> Result<Element> {
    let err = || Error::ShapeMismatch(String::from("expected two Laurent levels"));
    let TowerDesc::Laurent(inner, u) = b.tower() else {
        return Err(err());
    };
    let TowerDesc::Laurent(base, t) = &**inner else {
        return Err(err());
    };
    let target = TowerDesc::Curly(Arc::new(TowerDesc::Laurent(base.clone(), u.clone())), t.clone());

    let caps = b.caps();
    let depth = caps.levels.len();
    let (t_cap, u_cap) = match (caps.levels[depth - 2], caps.levels[depth - 1]) {
        (LevelPrec::Laurent { n: x }, LevelPrec::Laurent { n: y }) => (x, y),
        _ => return Err(err()),
    };
    let mut levels = caps.levels[..depth - 2].to_vec();
    levels.push(LevelPrec::Laurent { n: u_cap });
    levels.push(LevelPrec::Curly { lo: -t_cap.abs(), hi: t_cap });
    let target_caps = Precision { padic: caps.padic, levels };

    let Value::Laurent { n, coeffs } = b.value() else {
        return Err(err());
    };
    let mut hi = EXACT;
    let mut grid: BTreeMap<i64, BTreeMap<i64, Value>> = BTreeMap::new();
    for (j, c) in coeffs {
        let Value::Laurent { n: nj, coeffs: row } = c else {
            return Err(err());
        };
        hi = hi.min(*nj);
        for (i, x) in row {
            grid.entry(*i).or_default().insert(*j, x.clone());
        }
    }
    let out: BTreeMap<i64, Value> = grid
        .into_iter()
        .filter(|(i, _)| *i < hi)
        .map(|(i, col)| (i, Value::Laurent { n: *n, coeffs: col }))
        .collect();
    let lo = out.keys().next().copied().unwrap_or(target_caps_lo(&target_caps)).min(hi);
    Ok(Element::from_value(&target, &target_caps, Value::Curly { lo, hi, coeffs: out }))
}

fn target_caps_lo(caps: &Precision) -> i64 {
    match caps.levels.last() {
        Some(LevelPrec::Curly { lo, .. }) => *lo,
        _ => 0,
    }
}
