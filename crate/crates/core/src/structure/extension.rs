use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::coeffbase::{FieldEmbedding, FqField};
use crate::tower::value::{is_exact, Value};
use crate::tower::{Element, LevelPrec, Precision, TowerDesc};
use crate::{Error, Result};

/// A simple finite extension of a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    /// Replace the finite base `F_q` by `F_{q^k}`.
    ResidueExt(u32),
    /// Adjoin an `e`-th root `s` of the outermost Laurent variable.
    RamifiedBase(u64),
}

/// Invariants of `L/F` together with the embedding `F → L`.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub base: TowerDesc,
    pub target: TowerDesc,
    pub kind: ExtensionKind,
    pub degree: u64,
    /// Ramification index of each valuation step, innermost first.
    pub ramification: Vec<u64>,
    /// Degree of the last residue field extension.
    pub inertia: u64,
    embedding: Option<FieldEmbedding>,
}

fn rebase(tower: &TowerDesc, field: &FqField) -> TowerDesc {
    match tower {
        TowerDesc::BaseFq(_) => TowerDesc::BaseFq(field.clone()),
        TowerDesc::BasePadic(p) => TowerDesc::BasePadic(*p),
        TowerDesc::Laurent(t, v) => TowerDesc::Laurent(Arc::new(rebase(t, field)), v.clone()),
        TowerDesc::Curly(t, v) => TowerDesc::Curly(Arc::new(rebase(t, field)), v.clone()),
    }
}

fn fresh_name(tower: &TowerDesc) -> String {
    let names = tower.var_names();
    let mut candidate = String::from("s");
    let mut k = 1;
    while names.contains(&candidate) {
        candidate = alloc::format!("s{k}");
        k += 1;
    }
    candidate
}

pub fn extension_invariants(base: &TowerDesc, kind: ExtensionKind) -> Result<ExtensionData> {
    let n = base.cdvdim();
    match kind {
        ExtensionKind::ResidueExt(k) => {
            let TowerDesc::BaseFq(field) = base.base() else {
                return Err(Error::Unsupported(String::from("unramified extensions of Q_p")));
            };
            if k == 0 {
                return Err(Error::InvalidArgument(String::from("degree must be positive")));
            }
            let big = FqField::new(field.p(), field.k() * k)?;
            let embedding = FieldEmbedding::new(field, &big)?;
            Ok(ExtensionData {
                base: base.clone(),
                target: rebase(base, &big),
                kind,
                degree: u64::from(k),
                ramification: alloc::vec![1; n],
                inertia: u64::from(k),
                embedding: Some(embedding),
            })
        }
        ExtensionKind::RamifiedBase(e) => {
            let TowerDesc::Laurent(inner, _) = base else {
                return Err(Error::Unsupported(String::from("the outermost level must be Laurent")));
            };
            if e == 0 {
                return Err(Error::InvalidArgument(String::from("index must be positive")));
            }
            let ch = inner.characteristic();
            if ch != 0 && e % ch == 0 {
                return Err(Error::CharDividesDegree);
            }
            let mut ramification = alloc::vec![1; n];
            ramification[n - 1] = e;
            Ok(ExtensionData {
                base: base.clone(),
                target: TowerDesc::Laurent(inner.clone(), fresh_name(base)),
                kind,
                degree: e,
                ramification,
                inertia: 1,
                embedding: None,
            })
        }
    }
}

fn map_base(v: &Value, emb: &FieldEmbedding) -> Value {
    let map = |c: &BTreeMap<i64, Value>| c.iter().map(|(i, x)| (*i, map_base(x, emb))).collect();
    match v {
        Value::Fq(x) => Value::Fq(emb.apply(x)),
        Value::Padic(_) => v.clone(),
        Value::Laurent { n, coeffs } => Value::Laurent { n: *n, coeffs: map(coeffs) },
        Value::Curly { lo, hi, coeffs } => Value::Curly { lo: *lo, hi: *hi, coeffs: map(coeffs) },
    }
}

impl ExtensionData {
    /// Caps on the target matching `caps` on the base.
    pub fn target_caps(&self, caps: &Precision) -> Precision {
        match self.kind {
            ExtensionKind::ResidueExt(_) => caps.clone(),
            ExtensionKind::RamifiedBase(e) => {
                let mut out = caps.clone();
                if let Some(LevelPrec::Laurent { n }) = out.levels.last_mut() {
                    *n *= e as i64;
                }
                out
            }
        }
    }

    /// The embedding `F → L`.
    pub fn transport(&self, a: &Element) -> Result<Element> {
        if a.tower() != &self.base {
            return Err(Error::TowerMismatch);
        }
        let caps = self.target_caps(a.caps());
        let data = match self.kind {
            ExtensionKind::ResidueExt(_) => map_base(a.value(), self.embedding.as_ref().expect("residue extension")),
            ExtensionKind::RamifiedBase(e) => {
                let e = e as i64;
                let Value::Laurent { n, coeffs } = a.value() else { unreachable!("Laurent top") };
                let n = if is_exact(*n) { *n } else { n * e };
                Value::Laurent { n, coeffs: coeffs.iter().map(|(i, c)| (i * e, c.clone())).collect() }
            }
        };
        Ok(Element::from_value(&self.target, &caps, data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let f2 = FqField::prime(2).unwrap();
        let one = TowerDesc::fq(f2.clone()).laurent("t").unwrap();
        let two = one.clone().laurent("u").unwrap();
        let r = extension_invariants(&one, ExtensionKind::ResidueExt(2)).unwrap();
        assert_eq!((r.degree, r.ramification.clone(), r.inertia), (2, alloc::vec![1], 2));
        let r = extension_invariants(&one, ExtensionKind::RamifiedBase(3)).unwrap();
        assert_eq!((r.degree, r.ramification.clone(), r.inertia), (3, alloc::vec![3], 1));
        assert_eq!(r.target.var_names(), ["s"]);
        let caps = Precision::uniform(&one, 4, (0, 1), 1);
        let t = Element::var(&one, &caps, "t").unwrap();
        let image = r.transport(&t).unwrap();
        assert_eq!(image.valuation().unwrap(), 3);
        let r = extension_invariants(&two, ExtensionKind::ResidueExt(2)).unwrap();
        assert_eq!((r.degree, r.ramification.clone(), r.inertia), (2, alloc::vec![1, 1], 2));
        assert_eq!(extension_invariants(&one, ExtensionKind::RamifiedBase(2)).unwrap_err(), Error::CharDividesDegree);
    }
}
