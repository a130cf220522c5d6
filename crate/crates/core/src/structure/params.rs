use alloc::vec::Vec;

use crate::coeffbase::{teichmuller, FqElem};
use crate::tower::{uniformiser, BaseCoeff, Element, Gen, LevelPrec, Precision, TowerDesc};
use crate::{Error, Result};

/// A sequence of local parameters `t_1, …, t_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalParams {
    pub gens: Vec<Gen>,
    pub elements: Vec<Element>,
}

impl LocalParams {
    /// Checks the defining property: `t_n` is a uniformiser and the residues
    /// of `t_1, …, t_{n-1}` are local parameters of the residue field.
    pub fn verify(&self) -> Result<bool> {
        verify_params(&self.elements)
    }
}

fn verify_params(elements: &[Element]) -> Result<bool> {
    let Some((last, rest)) = elements.split_last() else {
        return Ok(true);
    };
    if last.tower().cdvdim() != elements.len() || last.valuation()? != 1 {
        return Ok(false);
    }
    let mut residues = Vec::with_capacity(rest.len());
    for t in rest {
        if t.valuation()? < 0 {
            return Ok(false);
        }
        residues.push(t.residue()?);
    }
    if residues.is_empty() {
        return Ok(last.tower().residue_once()?.cdvdim() == 0);
    }
    verify_params(&residues)
}

/// Canonical parameters as generators: the variable of every Laurent level,
/// `p` for a `Q_p` base, and for a curly level its variable followed by the
/// uniformiser of the level below.
pub fn local_gens(tower: &TowerDesc) -> Vec<Gen> {
    match tower {
        TowerDesc::BaseFq(_) => Vec::new(),
        TowerDesc::BasePadic(_) => alloc::vec![Gen::P],
        TowerDesc::Laurent(inner, _) => {
            let mut g = local_gens(inner);
            g.push(Gen::Var(tower.depth() - 1));
            g
        }
        TowerDesc::Curly(inner, _) => {
            let mut g = local_gens(inner);
            let last = g.pop().expect("curly over a valued field");
            g.push(Gen::Var(tower.depth() - 1));
            g.push(last);
            g
        }
    }
}

pub fn local_parameters(tower: &TowerDesc, caps: &Precision) -> Result<LocalParams> {
    let gens = local_gens(tower);
    let elements = gens.iter().map(|g| Element::gen(tower, caps, *g)).collect::<Result<Vec<_>>>()?;
    Ok(LocalParams { gens, elements })
}

/// Whether a value that vanishes at working precision certainly lies in
/// the maximal ideal.
fn zero_in_ideal(a: &Element) -> Result<bool> {
    let certain = match a.top_precision() {
        Some(LevelPrec::Laurent { n }) => n >= 1,
        Some(LevelPrec::Curly { .. }) => true,
        None => a.padic_precision().is_some_and(|m| m >= 1),
    };
    if certain {
        Ok(true)
    } else {
        Err(Error::PrecisionInsufficient)
    }
}

fn check_rank(a: &Element, r: usize) -> Result<()> {
    if r > a.tower().cdvdim() {
        return Err(Error::OutOfRange(alloc::format!("rank {r} exceeds the dimension")));
    }
    Ok(())
}

/// Membership in the rank-`r` ring of integers `O^(r)`, defined by
/// `O^(0) = F` and `O^(r) = {x ∈ O_F : x̄ ∈ O^(r-1)(F̄)}`.
pub fn rank_membership(a: &Element, r: usize) -> Result<bool> {
    check_rank(a, r)?;
    if r == 0 {
        return Ok(true);
    }
    if a.is_zero() {
        return zero_in_ideal(a);
    }
    match a.valuation()? {
        v if v < 0 => Ok(false),
        v if v > 0 => Ok(true),
        _ => rank_membership(&a.residue()?, r - 1),
    }
}

/// Membership in the maximal ideal `𝔭^(r)` of `O^(r)`, with `𝔭^(0) = 0`
/// and `𝔭^(r) = {x ∈ O_F : x̄ ∈ 𝔭^(r-1)(F̄)}`.
pub fn prime_membership(a: &Element, r: usize) -> Result<bool> {
    check_rank(a, r)?;
    if a.is_zero() {
        if r == 0 {
            return if a.is_exact() { Ok(true) } else { Err(Error::PrecisionInsufficient) };
        }
        return zero_in_ideal(a);
    }
    if r == 0 {
        return Ok(false);
    }
    match a.valuation()? {
        v if v < 0 => Ok(false),
        v if v > 0 => Ok(true),
        _ => prime_membership(&a.residue()?, r - 1),
    }
}

fn exponents(a: &Element) -> Result<Vec<i64>> {
    if a.tower().cdvdim() == 0 {
        return Ok(Vec::new());
    }
    let nu = a.valuation()?;
    let shifted = a.mul_gen_pow(uniformiser(a.tower())?, -nu)?;
    let mut e = exponents(&shifted.residue()?)?;
    e.push(nu);
    Ok(e)
}

/// Writes `a = unit · t_1^{r_1} ⋯ t_n^{r_n}` for the canonical parameters,
/// with `unit ∈ O_F^(n)×`.
pub fn unit_decompose(a: &Element) -> Result<(Vec<i64>, Element)> {
    let exps = exponents(a)?;
    let mut unit = a.clone();
    for (g, e) in local_gens(a.tower()).iter().zip(&exps) {
        unit = unit.mul_gen_pow(*g, -e)?;
    }
    Ok((exps, unit))
}

/// Image of `a` in the last residue field.
pub fn last_residue(a: &Element) -> Result<FqElem> {
    let mut r = a.clone();
    while r.tower().cdvdim() > 0 {
        r = r.residue()?;
    }
    let TowerDesc::BaseFq(field) = r.tower() else {
        unreachable!("towers end in a finite field")
    };
    Ok(match r.terms().into_iter().next() {
        Some((_, BaseCoeff::Fq(x))) => x,
        _ => field.zero(),
    })
}

/// The representative of `θ` in `F`: Teichmüller at a `p`-adic base, the
/// constant itself over a finite field.
pub fn representative(tower: &TowerDesc, caps: &Precision, theta: &FqElem) -> Result<Element> {
    match tower.base() {
        TowerDesc::BaseFq(_) => Element::from_fq(tower, caps, theta),
        TowerDesc::BasePadic(_) => Element::from_padic(tower, caps, &teichmuller(theta, caps.padic)?),
        _ => unreachable!(),
    }
}
