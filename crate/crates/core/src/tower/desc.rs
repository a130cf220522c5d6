use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::coeffbase::{is_prime, FqField};
use crate::{Error, Result};

/// Recursive description of a field: a base together with a stack of
/// Laurent (`K((t))`) and curly (`K{{t}}`) constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerDesc {
    BaseFq(FqField),
    BasePadic(u64),
    Laurent(Arc<TowerDesc>, String),
    Curly(Arc<TowerDesc>, String),
}

impl TowerDesc {
    pub fn fq(field: FqField) -> Self {
        TowerDesc::BaseFq(field)
    }

    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(TowerDesc::BasePadic(p))
    }

    fn check_name(&self, var: &str) -> Result<()> {
        if var.is_empty() || var == "p" || self.var_names().iter().any(|v| v == var) {
            return Err(Error::InvalidTower(alloc::format!("variable name {var:?} unusable")));
        }
        Ok(())
    }

    /// `self((var))`.
    pub fn laurent(self, var: &str) -> Result<Self> {
        self.check_name(var)?;
        Ok(TowerDesc::Laurent(Arc::new(self), String::from(var)))
    }

    /// `self{{var}}`; `self` must be a complete discretely valued field.
    pub fn curly(self, var: &str) -> Result<Self> {
        self.check_name(var)?;
        if self.cdvdim() == 0 {
            return Err(Error::InvalidTower(String::from("curly constructor over a finite field")));
        }
        Ok(TowerDesc::Curly(Arc::new(self), String::from(var)))
    }

    /// Number of Laurent and curly constructors.
    pub fn depth(&self) -> usize {
        match self {
            TowerDesc::BaseFq(_) | TowerDesc::BasePadic(_) => 0,
            TowerDesc::Laurent(t, _) | TowerDesc::Curly(t, _) => 1 + t.depth(),
        }
    }

    pub fn cdvdim(&self) -> usize {
        match self {
            TowerDesc::BaseFq(_) => 0,
            TowerDesc::BasePadic(_) => 1,
            TowerDesc::Laurent(t, _) | TowerDesc::Curly(t, _) => 1 + t.cdvdim(),
        }
    }

    pub fn inner(&self) -> Option<&TowerDesc> {
        match self {
            TowerDesc::Laurent(t, _) | TowerDesc::Curly(t, _) => Some(t),
            _ => None,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match self {
            TowerDesc::Laurent(_, v) | TowerDesc::Curly(_, v) => Some(v),
            _ => None,
        }
    }

    pub fn base(&self) -> &TowerDesc {
        match self.inner() {
            Some(t) => t.base(),
            None => self,
        }
    }

    /// Variable names, innermost level first.
    pub fn var_names(&self) -> Vec<String> {
        let mut out = match self.inner() {
            Some(t) => t.var_names(),
            None => Vec::new(),
        };
        if let Some(v) = self.var() {
            out.push(String::from(v));
        }
        out
    }

    /// Level index of a variable, counted from the innermost constructor.
    pub fn level_of(&self, var: &str) -> Option<usize> {
        self.var_names().iter().position(|v| v == var)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            TowerDesc::BaseFq(f) => f.p(),
            TowerDesc::BasePadic(_) => 0,
            TowerDesc::Laurent(t, _) | TowerDesc::Curly(t, _) => t.characteristic(),
        }
    }

    /// Characteristic of the last residue field.
    pub fn residue_prime(&self) -> u64 {
        match self.base() {
            TowerDesc::BaseFq(f) => f.p(),
            TowerDesc::BasePadic(p) => *p,
            _ => unreachable!(),
        }
    }

    /// The last residue field `F^(n)`.
    pub fn last_residue_field(&self) -> FqField {
        match self.base() {
            TowerDesc::BaseFq(f) => f.clone(),
            TowerDesc::BasePadic(p) => FqField::prime(*p).expect("prime"),
            _ => unreachable!(),
        }
    }

    /// The first residue field.
    pub fn residue_once(&self) -> Result<TowerDesc> {
        match self {
            TowerDesc::BaseFq(_) => {
                Err(Error::OutOfRange(String::from("a finite field has no residue field")))
            }
            TowerDesc::BasePadic(p) => Ok(TowerDesc::BaseFq(FqField::prime(*p)?)),
            TowerDesc::Laurent(t, _) => Ok((**t).clone()),
            TowerDesc::Curly(t, v) => Ok(TowerDesc::Laurent(Arc::new(t.residue_once()?), v.clone())),
        }
    }

    /// `F^(i)`, for `0 <= i <= cdvdim`.
    pub fn residue_tower(&self, i: usize) -> Result<TowerDesc> {
        if i > self.cdvdim() {
            return Err(Error::OutOfRange(alloc::format!("residue index {i}")));
        }
        let mut t = self.clone();
        for _ in 0..i {
            t = t.residue_once()?;
        }
        Ok(t)
    }

    /// Conventional notation such as `Q_5{{t}}` or `F_4((t1))((t2))`.
    pub fn pretty(&self) -> String {
        match self {
            TowerDesc::BaseFq(f) => alloc::format!("F_{}", f.q()),
            TowerDesc::BasePadic(p) => alloc::format!("Q_{p}"),
            TowerDesc::Laurent(t, v) => alloc::format!("{}(({v}))", t.pretty()),
            TowerDesc::Curly(t, v) => alloc::format!("{}{{{{{v}}}}}", t.pretty()),
        }
    }
}

impl fmt::Display for TowerDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerDesc::BaseFq(field) => write!(f, "BaseFq(F_{})", field.q()),
            TowerDesc::BasePadic(p) => write!(f, "BasePadic({p})"),
            TowerDesc::Laurent(t, _) => write!(f, "Laurent({t})"),
            TowerDesc::Curly(t, _) => write!(f, "Curly({t})"),
        }
    }
}

/// Truncation data for one constructor level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelPrec {
    /// Known modulo `t^n`.
    Laurent { n: i64 },
    /// Exponents in `[lo, hi)` tracked; those below `lo` vanish.
    Curly { lo: i64, hi: i64 },
}

/// Working precision caps for a tower: one record per constructor,
/// innermost first, plus the `p`-adic precision of a `Q_p` base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precision {
    pub padic: i64,
    pub levels: Vec<LevelPrec>,
}

impl Precision {
    /// The same Laurent bound and curly window at every level.
    pub fn uniform(tower: &TowerDesc, n: i64, window: (i64, i64), padic: i64) -> Self {
        let mut levels = Vec::new();
        fn walk(t: &TowerDesc, n: i64, w: (i64, i64), out: &mut Vec<LevelPrec>) {
            if let Some(inner) = t.inner() {
                walk(inner, n, w, out);
            }
            match t {
                TowerDesc::Laurent(..) => out.push(LevelPrec::Laurent { n }),
                TowerDesc::Curly(..) => out.push(LevelPrec::Curly { lo: w.0, hi: w.1 }),
                _ => {}
            }
        }
        walk(tower, n, window, &mut levels);
        Precision { padic, levels }
    }

    pub fn validate(&self, tower: &TowerDesc) -> Result<()> {
        if self.levels.len() != tower.depth() {
            return Err(Error::InvalidPrecision(String::from("one record per level required")));
        }
        if matches!(tower.base(), TowerDesc::BasePadic(_)) && self.padic < 1 {
            return Err(Error::InvalidPrecision(String::from("p-adic precision must be at least 1")));
        }
        let mut t = tower;
        for lp in self.levels.iter().rev() {
            match (t, lp) {
                (TowerDesc::Laurent(..), LevelPrec::Laurent { n }) if *n >= 1 => {}
                (TowerDesc::Curly(..), LevelPrec::Curly { lo, hi }) if lo < hi => {}
                _ => return Err(Error::InvalidPrecision(alloc::format!("bad record {lp:?}"))),
            }
            t = t.inner().expect("depth checked");
        }
        Ok(())
    }

    /// Caps for the first residue field of `tower`.
    pub fn residue(&self, tower: &TowerDesc) -> Precision {
        match tower {
            TowerDesc::BaseFq(_) | TowerDesc::BasePadic(_) => {
                Precision { padic: self.padic, levels: Vec::new() }
            }
            TowerDesc::Laurent(..) => self.inner(),
            TowerDesc::Curly(t, _) => {
                let hi = match self.levels.last() {
                    Some(LevelPrec::Curly { hi, .. }) => *hi,
                    _ => unreachable!("validated"),
                };
                let mut r = self.inner().residue(t);
                r.levels.push(LevelPrec::Laurent { n: hi.max(1) });
                r
            }
        }
    }

    /// Caps with the outermost record removed.
    pub fn inner(&self) -> Precision {
        let mut levels = self.levels.clone();
        levels.pop();
        Precision { padic: self.padic, levels }
    }

    /// Entrywise minimum of two compatible precisions.
    pub fn meet(&self, other: &Precision) -> Precision {
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| match (a, b) {
                (LevelPrec::Laurent { n: x }, LevelPrec::Laurent { n: y }) => {
                    LevelPrec::Laurent { n: (*x).min(*y) }
                }
                (LevelPrec::Curly { lo: l1, hi: h1 }, LevelPrec::Curly { lo: l2, hi: h2 }) => {
                    LevelPrec::Curly { lo: (*l1).min(*l2), hi: (*h1).min(*h2) }
                }
                _ => *a,
            })
            .collect();
        Precision { padic: self.padic.min(other.padic), levels }
    }

    /// Raises every cap by `slack`.
    pub fn widened(&self, slack: i64) -> Precision {
        let levels = self
            .levels
            .iter()
            .map(|l| match l {
                LevelPrec::Laurent { n } => LevelPrec::Laurent { n: n + slack },
                LevelPrec::Curly { lo, hi } => LevelPrec::Curly { lo: lo - slack, hi: hi + slack },
            })
            .collect();
        Precision { padic: self.padic + slack, levels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(p: u64) -> TowerDesc {
        TowerDesc::padic(p).unwrap()
    }

    #[test]
    fn cdvdim_and_residues() {
        let f2 = TowerDesc::fq(FqField::prime(2).unwrap());
        assert_eq!(f2.cdvdim(), 0);
        let ll = f2.clone().laurent("t1").unwrap().laurent("t2").unwrap();
        assert_eq!(ll.cdvdim(), 2);
        let c = qp(5).curly("t").unwrap();
        assert_eq!(c.cdvdim(), 2);
        assert_eq!(c.residue_tower(1).unwrap(), TowerDesc::fq(FqField::prime(5).unwrap()).laurent("t").unwrap());
        assert_eq!(c.residue_tower(0).unwrap(), c);
        assert!(c.residue_tower(3).is_err());
        assert_eq!(c.to_string(), "Curly(BasePadic(5))");
        assert_eq!(c.pretty(), "Q_5{{t}}");
        assert!(f2.curly("t").is_err());
        assert!(ll.laurent("t1").is_err());
    }

    #[test]
    fn residue_precision() {
        let c = qp(5).curly("t1").unwrap().curly("t2").unwrap();
        let pr = Precision::uniform(&c, 4, (-3, 5), 6);
        pr.validate(&c).unwrap();
        let r = pr.residue(&c);
        r.validate(&c.residue_once().unwrap()).unwrap();
        assert_eq!(r.levels, alloc::vec![LevelPrec::Laurent { n: 5 }, LevelPrec::Laurent { n: 5 }]);
    }
}
