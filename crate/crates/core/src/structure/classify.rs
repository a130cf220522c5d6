use crate::tower::TowerDesc;
use crate::Result;

/// The three shapes of higher local fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    /// Positive characteristic: `F_q((t_1))⋯((t_n))`.
    EqualCharFq { q: u64, n: usize },
    /// `char F^(n-1) = 0`: Laurent levels over the one-dimensional field
    /// `local_field = F^(n-1)`.
    EqualCharZero { local_field: TowerDesc, levels: usize },
    /// Mixed characteristic, with `char F^(n-r) = 0` and `char F^(n-r+1) = p`;
    /// `q` is the size of the last residue field.
    MixedChar { q: u64, r: usize, n: usize },
}

pub fn classify(tower: &TowerDesc) -> Result<CanonicalForm> {
    let n = tower.cdvdim();
    let q = tower.last_residue_field().q();
    if tower.characteristic() != 0 {
        return Ok(CanonicalForm::EqualCharFq { q, n });
    }
    let penultimate = tower.residue_tower(n - 1)?;
    if penultimate.characteristic() == 0 {
        return Ok(CanonicalForm::EqualCharZero { local_field: penultimate, levels: n - 1 });
    }
    let zero_char_steps = (0..=n)
        .take_while(|i| tower.residue_tower(*i).map(|t| t.characteristic() == 0).unwrap_or(false))
        .count();
    Ok(CanonicalForm::MixedChar { q, r: n + 1 - zero_char_steps, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffbase::FqField;

    #[test]
    fn three_cases() {
        let ff = TowerDesc::fq(FqField::new(2, 2).unwrap()).laurent("t1").unwrap().laurent("t2").unwrap();
        assert_eq!(classify(&ff).unwrap(), CanonicalForm::EqualCharFq { q: 4, n: 2 });
        let qp = TowerDesc::padic(3).unwrap();
        let lt = qp.clone().laurent("t").unwrap();
        assert_eq!(classify(&lt).unwrap(), CanonicalForm::EqualCharZero { local_field: qp.clone(), levels: 1 });
        let ct = qp.clone().curly("t").unwrap();
        assert_eq!(classify(&ct).unwrap(), CanonicalForm::MixedChar { q: 3, r: 2, n: 2 });
        let cc = ct.curly("u").unwrap();
        assert_eq!(classify(&cc).unwrap(), CanonicalForm::MixedChar { q: 3, r: 3, n: 3 });
        let lc = qp.curly("t").unwrap().laurent("u").unwrap();
        assert_eq!(classify(&lc).unwrap(), CanonicalForm::MixedChar { q: 3, r: 2, n: 3 });
    }
}
