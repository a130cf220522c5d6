use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ratfn::{Expansion, RatFn};
use crate::chains::{embed, RegularChainDesc, RingCoeff, RingDesc, RingElem, MPoly};
use crate::coeffbase::{FieldEmbedding, FqElem, FqField, FqPoly};
use crate::tower::{uniformiser, Element, LevelPrec, Precision, TowerDesc};
use crate::{Error, Result};

/// A coordinate line of the affine plane with coordinates `s, u`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Curve {
    /// `y = V(s − a)`; points on it are closed points of the `u`-line.
    S(FqElem),
    /// `y = V(u − b)`; points on it are closed points of the `s`-line.
    U(FqElem),
}

impl Curve {
    pub fn field(&self) -> &FqField {
        match self {
            Curve::S(a) | Curve::U(a) => a.field(),
        }
    }

    /// Positions of the curve coordinate and the free coordinate in `(s, u)`.
    fn axes(&self) -> (usize, usize) {
        match self {
            Curve::S(_) => (0, 1),
            Curve::U(_) => (1, 0),
        }
    }

    fn constant(&self) -> &FqElem {
        match self {
            Curve::S(a) | Curve::U(a) => a,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::S(a) => write!(f, "V(s - {})", a.to_expr("g")),
            Curve::U(b) => write!(f, "V(u - {})", b.to_expr("g")),
        }
    }
}

/// A complete flag `(η, y, x)`: a coordinate line and a closed point on it,
/// given by a monic irreducible polynomial in the free coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SurfaceFlag {
    pub curve: Curve,
    pub point: FqPoly,
}

impl SurfaceFlag {
    pub fn new(curve: Curve, point: FqPoly) -> Result<Self> {
        if point.field() != curve.field() {
            return Err(Error::FieldMismatch);
        }
        if !point.is_monic() || !point.is_irreducible() {
            return Err(Error::InvalidArgument(String::from("the point must be monic irreducible")));
        }
        Ok(SurfaceFlag { curve, point })
    }

    /// The rational flag at `(s, u) = (a, b)` on the given line.
    pub fn rational(curve: Curve, c: &FqElem) -> Result<Self> {
        Self::new(curve, FqPoly::linear(c))
    }

    pub fn degree(&self) -> usize {
        self.point.degree().expect("nonzero")
    }
}

impl fmt::Display for SurfaceFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free = match self.curve {
            Curve::S(_) => "u",
            Curve::U(_) => "s",
        };
        write!(f, "{} at {}", self.curve, self.point.to_expr(free))
    }
}

/// The ring `F_q[s, u]` localized at the origin.
pub fn surface_ring(field: &FqField) -> RingDesc {
    RingDesc::PolyLocal { field: field.clone(), vars: alloc::vec![String::from("s"), String::from("u")] }
}

/// Closed points of degree at most `degree_bound` on a line, by degree.
pub fn points_on(curve: &Curve, degree_bound: usize) -> Vec<SurfaceFlag> {
    let field = curve.field();
    (1..=degree_bound)
        .flat_map(|d| FqPoly::monics(field, d).filter(FqPoly::is_irreducible).collect::<Vec<_>>())
        .map(|pi| SurfaceFlag { curve: curve.clone(), point: pi })
        .collect()
}

/// The local field `F_{x,y} = k(x)((w − β))((c − a))`, with `c` the curve
/// coordinate, `w` the free one and `β` a root of the point in `k(x)`.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub flag: SurfaceFlag,
    pub tower: TowerDesc,
    chain: RegularChainDesc,
    embedding: FieldEmbedding,
    root: FqElem,
}

pub fn local_factor_dim2(flag: &SurfaceFlag) -> Result<LocalFactor> {
    let base = flag.curve.field();
    let big = FqField::new(base.p(), base.k() * flag.degree() as u32)?;
    let embedding = FieldEmbedding::new(base, &big)?;
    let image = FqPoly::new(&big, flag.point.coeffs().iter().map(|c| embedding.apply(c)).collect());
    let root = big.elements().find(|z| image.eval(z).is_zero()).ok_or(Error::NoRoot)?;
    let ring = surface_ring(&big);
    let chain = match flag.curve {
        Curve::S(_) => RegularChainDesc::new(ring, &["s", "u"])?,
        Curve::U(_) => RegularChainDesc::new(ring, &["u", "s"])?,
    };
    let tower = crate::chains::hl(&chain)?;
    Ok(LocalFactor { flag: flag.clone(), tower, chain, embedding, root })
}

impl LocalFactor {
    pub fn residue_field(&self) -> &FqField {
        self.embedding.target()
    }

    /// The chosen root `β` of the point.
    pub fn root(&self) -> &FqElem {
        &self.root
    }

    /// Embeds `f ∈ F_q(s, u)` by translating to the flag's coordinates and
    /// expanding in the tower.
    pub fn embed(&self, f: &RingElem, caps: &Precision) -> Result<Element> {
        let base = surface_ring(self.flag.curve.field());
        if f.ring() != &base {
            return Err(Error::InvalidArgument(String::from("expected a function of s and u")));
        }
        let lifted = f.map_coefficients(&self.embedding, self.chain.ring())?;
        let a = self.embedding.apply(self.flag.curve.constant());
        let shifts = match self.flag.curve {
            Curve::S(_) => [a, self.root.clone()],
            Curve::U(_) => [self.root.clone(), a],
        };
        embed(&self.chain, &lifted.translate(&shifts)?, caps)
    }

    /// The second path `F → F_y → F_{x,y}`: expand `f` in the curve
    /// coordinate with coefficients in `F_q(w)` exactly, then expand each
    /// coefficient at the point.
    pub fn embed_via_curve(&self, f: &RingElem, caps: &Precision) -> Result<Element> {
        caps.validate(&self.tower)?;
        let (n_free, n_curve) = match caps.levels.as_slice() {
            [LevelPrec::Laurent { n: a }, LevelPrec::Laurent { n: b }] => (*a, *b),
            _ => return Err(Error::InvalidPrecision(String::from("two Laurent levels expected"))),
        };
        let (ci, fi) = self.flag.curve.axes();
        let a = self.flag.curve.constant();
        let num = curve_series(f.numerator(), ci, fi, a)?;
        let den = curve_series(f.denominator(), ci, fi, a)?;
        let k = self.residue_field().clone();
        let inner = self.tower.inner().expect("two levels");
        let inner_caps = caps.inner();
        let base = TowerDesc::fq(k.clone());
        let base_caps = inner_caps.inner();
        let Some(kn) = num.iter().position(|c| !c.is_zero()) else {
            return Element::from_top_coeffs(&self.tower, caps, LevelPrec::Laurent { n: n_curve }, &[]);
        };
        let kd = den.iter().position(|c| !c.is_zero()).ok_or(Error::DivisionByZero)?;
        let shift = kn as i64 - kd as i64;
        let field = self.flag.curve.field();
        let slot = |v: &[FqPoly], i: usize| RatFn::from_poly(v.get(i).cloned().unwrap_or_else(|| FqPoly::zero(field)));
        let lead = slot(&den, kd);
        let mut series: Vec<RatFn> = Vec::new();
        let count = (n_curve - shift).max(0) as usize;
        for i in 0..count {
            let mut c = slot(&num, kn + i);
            for l in 1..=i {
                c = c.sub(&slot(&den, kd + l).mul(&series[i - l])?)?;
            }
            series.push(c.div(&lead)?);
        }
        let mu = FqPoly::x(&k);
        let mut top = Vec::with_capacity(series.len());
        for (i, c) in series.iter().enumerate() {
            let local = c.map(&self.embedding).translate(&self.root)?;
            let e = Expansion::of_fraction(&mu, local.num(), local.den(), 0, n_free)?;
            let digits: Vec<(i64, Element)> = e
                .digits()
                .into_iter()
                .map(|(j, d)| Ok((j, Element::from_fq(&base, &base_caps, &d.coeff(0))?)))
                .collect::<Result<_>>()?;
            top.push((shift + i as i64, Element::from_top_coeffs(inner, &inner_caps, LevelPrec::Laurent { n: n_free }, &digits)?));
        }
        Element::from_top_coeffs(&self.tower, caps, LevelPrec::Laurent { n: n_curve }, &top)
    }
}

/// Writes a polynomial in `s, u` as `Σ_k P_k(w) σ^k` with `σ = c − a` for
/// the curve coordinate `c` and free coordinate `w`.
fn curve_series(m: &MPoly, ci: usize, fi: usize, a: &FqElem) -> Result<Vec<FqPoly>> {
    let field = a.field();
    let sigma_shift = FqPoly::linear(&a.neg());
    let mut out: Vec<FqPoly> = Vec::new();
    for (exps, c) in m.terms() {
        let RingCoeff::Fq(c) = c else { return Err(Error::FieldMismatch) };
        let expanded = sigma_shift.pow(exps[ci]);
        for (k, b) in expanded.coeffs().iter().enumerate() {
            if out.len() <= k {
                out.resize(k + 1, FqPoly::zero(field));
            }
            out[k] = out[k].add(&FqPoly::monomial(b.mul(c), exps[fi] as usize));
        }
    }
    Ok(out)
}

/// Chooses a function for each flag.
pub type PointRule = Box<dyn Fn(&SurfaceFlag) -> Result<RingElem>>;

/// How the components of a family are produced away from its explicit ones.
pub enum FamilyRule {
    Zero,
    /// The diagonal image of a global function of `s, u`.
    Global(RingElem),
    /// A function chosen per flag, expanded in that flag's local field.
    PerPoint(PointRule),
}

/// A family `(f_{x,y})` over flags: finitely many explicit components and
/// a rule elsewhere.
pub struct Family {
    pub explicit: BTreeMap<SurfaceFlag, RingElem>,
    pub rule: FamilyRule,
}

impl Family {
    pub fn new(rule: FamilyRule) -> Self {
        Family { explicit: BTreeMap::new(), rule }
    }

    pub fn with(mut self, flag: SurfaceFlag, f: RingElem) -> Self {
        self.explicit.insert(flag, f);
        self
    }

    fn function_at(&self, flag: &SurfaceFlag) -> Result<Option<RingElem>> {
        if let Some(f) = self.explicit.get(flag) {
            return Ok(Some(f.clone()));
        }
        match &self.rule {
            FamilyRule::Zero => Ok(None),
            FamilyRule::Global(f) => Ok(Some(f.clone())),
            FamilyRule::PerPoint(rule) => rule(flag).map(Some),
        }
    }

    /// The component at `flag` in its local field.
    pub fn component(&self, flag: &SurfaceFlag, caps: &Precision) -> Result<Element> {
        let local = local_factor_dim2(flag)?;
        match self.function_at(flag)? {
            Some(f) => local.embed(&f, caps),
            None => Element::zero(&local.tower, caps),
        }
    }
}

/// Bounds of a window-relative test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dim2Window {
    /// Points of degree up to this bound are examined. The points of the
    /// top degree form the outer shell of the window.
    pub degree_bound: usize,
    pub r_max: usize,
}

/// A verdict relative to a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dim2Verdict {
    pub consistent: bool,
    /// The first `r` at which the condition fails, when it does.
    pub r: Option<usize>,
    /// Flags that violate the condition in the outer shell.
    pub witnesses: Vec<SurfaceFlag>,
    /// Failures inside the window's interior, accepted as the finite
    /// exceptional set.
    pub exceptional: Vec<SurfaceFlag>,
    /// For the three-step condition: the divisor `Σ n_y y` bounding poles.
    pub divisor: Vec<(Curve, i64)>,
}

/// Whether `c ∈ O_x + 𝔭_{x,y}^r`, that is, the coefficients of `σ^j` for
/// `j < r` carry no negative powers of the free coordinate.
fn in_local_ring_mod(c: &Element, r: usize) -> Result<bool> {
    if let Some(LevelPrec::Laurent { n }) = c.top_precision() {
        if n < r as i64 {
            return Err(Error::PrecisionInsufficient);
        }
    }
    for j in 0..r as i64 {
        let coeff = c.top_coeff(j)?;
        if !coeff.is_zero() && coeff.valuation()? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_window(window: &Dim2Window) -> Result<()> {
    if window.degree_bound == 0 || window.r_max == 0 {
        return Err(Error::InvalidArgument(String::from("window bounds must be positive")));
    }
    Ok(())
}

/// Condition on one curve: for each `r ≤ r_max`, the components lie in
/// `O_x + 𝔭_{x,y}^r` away from the explicit components and a failure set
/// confined to the window's interior. `scale` multiplies each component by
/// a power of the curve uniformiser first.
fn curve_condition(family: &Family, curve: &Curve, window: &Dim2Window, caps: &Precision, scale: i64) -> Result<Dim2Verdict> {
    let points = points_on(curve, window.degree_bound);
    let mut comps = Vec::new();
    for x in &points {
        if family.explicit.contains_key(x) {
            continue;
        }
        let mut c = family.component(x, caps)?;
        if scale != 0 {
            c = c.mul_gen_pow(uniformiser(c.tower())?, scale)?;
        }
        if !c.is_zero() && c.valuation()? < 0 {
            return Err(Error::NotIntegral);
        }
        comps.push((x, c));
    }
    let mut exceptional = Vec::new();
    for r in 1..=window.r_max {
        let mut failed = Vec::new();
        for (x, c) in &comps {
            if !in_local_ring_mod(c, r)? {
                failed.push((*x).clone());
            }
        }
        let (outer, inner): (Vec<_>, Vec<_>) = failed.into_iter().partition(|x| x.degree() == window.degree_bound);
        if !outer.is_empty() {
            return Ok(Dim2Verdict { consistent: false, r: Some(r), witnesses: outer, exceptional: inner, divisor: Vec::new() });
        }
        for x in inner {
            if !exceptional.contains(&x) {
                exceptional.push(x);
            }
        }
    }
    Ok(Dim2Verdict { consistent: true, r: None, witnesses: Vec::new(), exceptional, divisor: Vec::new() })
}

/// Window-relative test of the two-step restricted-product condition on the
/// line `curve`. Explicit components are the declared finite exceptions.
/// Failures at points of lower degree are accepted as exceptional; any
/// failure in the outer shell is reported as a violation, since a finite
/// exceptional set cannot keep reappearing as the window grows.
pub fn a12_member(family: &Family, curve: &Curve, window: &Dim2Window, caps: &Precision) -> Result<Dim2Verdict> {
    check_window(window)?;
    curve_condition(family, curve, window, caps, 0)
}

/// Window-relative test of the three-step condition over the lines
/// `V(s − a)`, `a ∈ F_q`: a pole bound `n_y` must exist on each line
/// without growing into the outer shell, and the components scaled by
/// `(s − a)^{n_y}` must pass the two-step test.
pub fn a012_member(family: &Family, field: &FqField, window: &Dim2Window, caps: &Precision) -> Result<Dim2Verdict> {
    check_window(window)?;
    let mut divisor = Vec::new();
    let mut exceptional = Vec::new();
    for a in field.elements() {
        let curve = Curve::S(a);
        let mut inner_max = 0;
        let mut outer: Vec<(SurfaceFlag, i64)> = Vec::new();
        for x in points_on(&curve, window.degree_bound) {
            let c = family.component(&x, caps)?;
            let order = if c.is_zero() { 0 } else { (-c.valuation()?).max(0) };
            if window.degree_bound > 1 && x.degree() == window.degree_bound {
                outer.push((x, order));
            } else {
                inner_max = inner_max.max(order);
            }
        }
        let outer_max = outer.iter().map(|(_, o)| *o).max().unwrap_or(0);
        if outer_max > inner_max {
            let witnesses = outer.into_iter().filter(|(_, o)| *o == outer_max).map(|(x, _)| x).collect();
            return Ok(Dim2Verdict { consistent: false, r: None, witnesses, exceptional, divisor });
        }
        let n = inner_max.max(outer_max);
        let v = curve_condition(family, &curve, window, caps, n)?;
        if !v.consistent {
            return Ok(Dim2Verdict { divisor, ..v });
        }
        exceptional.extend(v.exceptional);
        if n > 0 {
            divisor.push((curve, n));
        }
    }
    Ok(Dim2Verdict { consistent: true, r: None, witnesses: Vec::new(), exceptional, divisor })
}

/// Result of comparing the two paths into each local factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub samples: usize,
    /// Number of certified coefficients where the two paths differ, per flag.
    pub discrepancies: Vec<(SurfaceFlag, usize)>,
    pub max_discrepancy: usize,
}

/// Checks that `F → F_x → F_{x,y}` and `F → F_y → F_{x,y}` agree on each
/// sampled flag.
pub fn dim2_boundary_check(f: &RingElem, flags: &[SurfaceFlag], caps: &Precision) -> Result<BoundaryReport> {
    let mut discrepancies = Vec::with_capacity(flags.len());
    for flag in flags {
        let local = local_factor_dim2(flag)?;
        let via_point = local.embed(f, caps)?;
        let via_curve = local.embed_via_curve(f, caps)?;
        discrepancies.push((flag.clone(), via_point.sub(&via_curve)?.terms().len()));
    }
    let max_discrepancy = discrepancies.iter().map(|(_, d)| *d).max().unwrap_or(0);
    Ok(BoundaryReport { samples: flags.len(), discrepancies, max_discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::BaseCoeff;

    fn setup() -> (FqField, RingDesc, RingElem, RingElem) {
        let f = FqField::prime(2).unwrap();
        let ring = surface_ring(&f);
        let s = RingElem::var(&ring, "s").unwrap();
        let u = RingElem::var(&ring, "u").unwrap();
        (f, ring, s, u)
    }

    #[test]
    fn local_factor_examples() {
        let (f, ring, s, u) = setup();
        let flag = SurfaceFlag::rational(Curve::S(f.zero()), &f.zero()).unwrap();
        let local = local_factor_dim2(&flag).unwrap();
        assert_eq!(local.tower.var_names(), ["u", "s"]);
        let caps = Precision::uniform(&local.tower, 6, (0, 1), 1);
        let su = local.embed(&s.mul(&u).unwrap(), &caps).unwrap();
        assert_eq!(su.terms(), [(alloc::vec![1, 1], BaseCoeff::Fq(f.one()))]);
        let g = RingElem::from_int(&ring, 1).div(&s.add(&u).unwrap()).unwrap();
        let e = local.embed(&g, &caps).unwrap();
        for k in 0..3i64 {
            assert!(e.knows(&[-k - 1, k]));
            let top = e.top_coeff(k).unwrap();
            assert_eq!(top.terms(), [(alloc::vec![-k - 1], BaseCoeff::Fq(f.one()))]);
        }
        let flag = SurfaceFlag::rational(Curve::U(f.zero()), &f.zero()).unwrap();
        let local = local_factor_dim2(&flag).unwrap();
        assert_eq!(local.tower.var_names(), ["s", "u"]);
        let e = local.embed(&u.div(&s).unwrap(), &caps).unwrap();
        assert_eq!(e.terms(), [(alloc::vec![-1, 1], BaseCoeff::Fq(f.one()))]);
    }

    #[test]
    fn boundary_paths_agree() {
        let (f, ring, s, u) = setup();
        let caps = Precision { padic: 1, levels: alloc::vec![LevelPrec::Laurent { n: 6 }, LevelPrec::Laurent { n: 5 }] };
        let g = RingElem::from_int(&ring, 1).div(&s.add(&u).unwrap()).unwrap();
        let flags: Vec<SurfaceFlag> = points_on(&Curve::S(f.zero()), 2);
        let r = dim2_boundary_check(&g, &flags, &caps).unwrap();
        assert_eq!((r.samples, r.max_discrepancy), (3, 0));
        let h = s.div(&u).unwrap();
        let r = dim2_boundary_check(&h, &points_on(&Curve::U(f.zero()), 2), &caps).unwrap();
        assert_eq!(r.max_discrepancy, 0);
    }

    #[test]
    fn membership_verdicts() {
        let (f, ring, _s, u) = setup();
        let curve = Curve::S(f.zero());
        let window = Dim2Window { degree_bound: 2, r_max: 2 };
        let caps = Precision { padic: 1, levels: alloc::vec![LevelPrec::Laurent { n: 6 }, LevelPrec::Laurent { n: 4 }] };
        let v = a12_member(&Family::new(FamilyRule::Global(u.clone())), &curve, &window, &caps).unwrap();
        assert!(v.consistent);
        let ring2 = ring.clone();
        let rule = FamilyRule::PerPoint(Box::new(move |x: &SurfaceFlag| {
            let mut acc = RingElem::from_int(&ring2, 0);
            for (i, c) in x.point.coeffs().iter().enumerate() {
                let term = RingElem::from_fq(&ring2, c)?.mul(&RingElem::var(&ring2, "u")?.pow(i as i64)?)?;
                acc = acc.add(&term)?;
            }
            RingElem::from_int(&ring2, 1).div(&acc)
        }));
        let v = a12_member(&Family::new(rule), &curve, &window, &caps).unwrap();
        assert!(!v.consistent);
        assert_eq!(v.r, Some(1));
        assert!(!v.witnesses.is_empty());
        let zero = a012_member(&Family::new(FamilyRule::Zero), &f, &window, &caps).unwrap();
        assert!(zero.consistent && zero.divisor.is_empty());
    }
}
