//! Milnor K-symbols, evaluated only through computable homomorphisms: the
//! valuation and tame symbol of a discretely valued tower, the sign map of
//! `Q`, and the decomposition of `K_2(Q)` into `{±1} ⊕ ⊕_p F_p^×`.
//!
//! The tame symbol is `{x, y} ↦ (−1)^{ν(x)ν(y)} · (x^{ν(y)} / y^{ν(x)})‾`,
//! which is forced by bilinearity together with `∂{u, π} = ū`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::coeffbase::{factor, FqElem, FqField, RationalNum};
use crate::sample::{random_nonzero, rng, SampleShape};
use crate::tower::{uniformiser, Element, Precision, TowerDesc};
use crate::{Error, Result};

/// Something that can stand in a symbol.
pub trait SymbolEntry: Clone {
    fn is_zero(&self) -> bool;
}

impl SymbolEntry for Element {
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
}

impl SymbolEntry for RationalNum {
    fn is_zero(&self) -> bool {
        RationalNum::is_zero(self)
    }
}

/// `{a_1, …, a_m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol<T> {
    entries: Vec<T>,
}

impl<T: SymbolEntry> Symbol<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.iter().any(SymbolEntry::is_zero) {
            return Err(Error::InvalidArgument(String::from("symbol entries must be nonzero")));
        }
        Ok(Symbol { entries })
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }
}

/// A `Z`-linear combination of symbols of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolSum<T> {
    terms: Vec<(i64, Symbol<T>)>,
}

impl<T: SymbolEntry> SymbolSum<T> {
    pub fn new(terms: Vec<(i64, Symbol<T>)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().filter(|(c, _)| *c != 0).collect();
        if let Some((_, first)) = terms.first() {
            if terms.iter().any(|(_, s)| s.degree() != first.degree()) {
                return Err(Error::ShapeMismatch(String::from("symbols of different degrees")));
            }
        }
        Ok(SymbolSum { terms })
    }

    pub fn single(s: Symbol<T>) -> Self {
        SymbolSum { terms: alloc::vec![(1, s)] }
    }

    pub fn terms(&self) -> &[(i64, Symbol<T>)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.first().map(|(_, s)| s.degree())
    }
}

fn unit_part(x: &Element, nu: i64) -> Result<Element> {
    x.mul_gen_pow(uniformiser(x.tower())?, -nu)?.residue()
}

/// The tame symbol of two nonzero elements of a discretely valued tower,
/// as a unit of the residue field.
pub fn tame_symbol(x: &Element, y: &Element) -> Result<Element> {
    let a = x.valuation()?;
    let b = y.valuation()?;
    let u = unit_part(x, a)?;
    let v = unit_part(y, b)?;
    let mut out = u.pow(b)?.mul(&v.pow(-a)?)?;
    if (a * b) % 2 != 0 {
        out = out.neg();
    }
    Ok(out)
}

/// Image of the border map.
#[derive(Clone, Debug, PartialEq)]
pub enum BorderImage {
    /// `K_1 → K_0 = Z`: the valuation.
    Degree0(i64),
    /// `K_2 → K_1`: one residue unit per term.
    Degree1(SymbolSum<Element>),
}

impl BorderImage {
    /// For degree one, the product `Π u_i^{c_i}` in the residue field.
    pub fn product(&self) -> Result<Option<Element>> {
        let BorderImage::Degree1(sum) = self else {
            return Ok(None);
        };
        let mut acc: Option<Element> = None;
        for (c, s) in sum.terms() {
            let term = s.entries()[0].pow(*c)?;
            acc = Some(match acc {
                Some(a) => a.mul(&term)?,
                None => term,
            });
        }
        Ok(acc)
    }
}

pub fn border(s: &SymbolSum<Element>) -> Result<BorderImage> {
    match s.degree() {
        None => Ok(BorderImage::Degree0(0)),
        Some(1) => {
            let mut total = 0;
            for (c, sym) in s.terms() {
                total += c * sym.entries()[0].valuation()?;
            }
            Ok(BorderImage::Degree0(total))
        }
        Some(2) => {
            let mut terms = Vec::with_capacity(s.terms().len());
            for (c, sym) in s.terms() {
                let e = sym.entries();
                let image = tame_symbol(&e[0], &e[1])?;
                if image.is_zero() {
                    // The residue lost all its digits to division by small units.
                    return Err(Error::PrecisionZero);
                }
                terms.push((*c, Symbol::new(alloc::vec![image])?));
            }
            Ok(BorderImage::Degree1(SymbolSum::new(terms)?))
        }
        Some(m) => Err(Error::Unsupported(alloc::format!("border map in degree {m}"))),
    }
}

/// `−1` exactly when every entry is negative.
pub fn sign_symbol(s: &Symbol<RationalNum>) -> i8 {
    if s.entries().iter().all(RationalNum::is_negative) {
        -1
    } else {
        1
    }
}

pub fn sign_sum(s: &SymbolSum<RationalNum>) -> i8 {
    let mut out = 1i8;
    for (c, sym) in s.terms() {
        if c.rem_euclid(2) == 1 {
            out *= sign_symbol(sym);
        }
    }
    out
}

/// Image of a `K_2(Q)` element in `{±1} ⊕ ⊕_p F_p^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K2QImage {
    pub sign: i8,
    /// Nontrivial components only.
    pub components: BTreeMap<u64, FqElem>,
}

impl K2QImage {
    pub fn identity() -> Self {
        K2QImage { sign: 1, components: BTreeMap::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.sign == 1 && self.components.is_empty()
    }

    pub fn mul(&self, other: &K2QImage) -> K2QImage {
        let mut components = self.components.clone();
        for (p, x) in &other.components {
            let y = match components.get(p) {
                Some(a) => a.mul(x),
                None => x.clone(),
            };
            if y.is_one() {
                components.remove(p);
            } else {
                components.insert(*p, y);
            }
        }
        K2QImage { sign: self.sign * other.sign, components }
    }

    pub fn inv(&self) -> K2QImage {
        let components = self.components.iter().map(|(p, x)| (*p, x.inv().expect("unit"))).collect();
        K2QImage { sign: self.sign, components }
    }
}

fn prime_support(x: &RationalNum, out: &mut BTreeSet<u64>) {
    for n in [x.numer().unsigned_abs(), x.denom().unsigned_abs()] {
        for (p, _) in factor(n) {
            out.insert(p);
        }
    }
}

/// The tame symbol at `p` of two nonzero rationals.
pub fn tame_at_prime(x: &RationalNum, y: &RationalNum, p: u64) -> Result<FqElem> {
    let field = FqField::prime(p)?;
    let a = x.valuation(p).ok_or(Error::InvalidArgument(String::from("zero entry")))?;
    let b = y.valuation(p).ok_or(Error::InvalidArgument(String::from("zero entry")))?;
    let strip = |z: &RationalNum, v: i64| -> Result<FqElem> {
        let pk = RationalNum::from_int((p as i128).pow(v.unsigned_abs() as u32));
        let unit = if v >= 0 { z.div(&pk)? } else { z.mul(&pk) };
        Ok(field.from_int(unit.residue_mod(p)? as i64))
    };
    let u = strip(x, a)?;
    let v = strip(y, b)?;
    let mut out = u.pow(b)?.mul(&v.pow(-a)?);
    if (a * b) % 2 != 0 {
        out = out.neg();
    }
    Ok(out)
}

pub fn k2q_decompose(s: &SymbolSum<RationalNum>) -> Result<K2QImage> {
    if s.degree().is_some_and(|d| d != 2) {
        return Err(Error::ShapeMismatch(String::from("K_2 needs symbols of degree 2")));
    }
    let mut out = K2QImage::identity();
    out.sign = sign_sum(s);
    for (c, sym) in s.terms() {
        let (x, y) = (&sym.entries()[0], &sym.entries()[1]);
        let mut primes = BTreeSet::new();
        prime_support(x, &mut primes);
        prime_support(y, &mut primes);
        for p in primes {
            let value = tame_at_prime(x, y, p)?.pow(*c)?;
            let mut comp = BTreeMap::new();
            if !value.is_one() {
                comp.insert(p, value);
            }
            out = out.mul(&K2QImage { sign: 1, components: comp });
        }
    }
    Ok(out)
}

/// Which homomorphism the relation harness exercises.
#[derive(Clone, Debug)]
pub enum Homomorphism {
    K2Q,
    Sign,
    Tame(TowerDesc, Precision),
    Border(TowerDesc, Precision),
}

/// Failure counts for each relation over a run of random trials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub trials: usize,
    pub multilinear_failures: usize,
    pub steinberg_failures: usize,
    pub minus_failures: usize,
    pub antisymmetry_failures: usize,
    /// Trials skipped because a sampled value was unusable (for instance
    /// `1 − x` vanishing at working precision).
    pub skipped: usize,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.multilinear_failures == 0
            && self.steinberg_failures == 0
            && self.minus_failures == 0
            && self.antisymmetry_failures == 0
    }
}

fn random_rational<R: Rng>(rng: &mut R) -> RationalNum {
    loop {
        let n: i128 = rng.gen_range(-40..=40);
        let d: i128 = rng.gen_range(1..=40);
        if n != 0 {
            return RationalNum::new(n, d).expect("nonzero denominator");
        }
    }
}

fn sym2<T: SymbolEntry>(a: &T, b: &T) -> Result<Symbol<T>> {
    Symbol::new(alloc::vec![a.clone(), b.clone()])
}

/// A homomorphism out of `K_2` on one concrete field, with equality on its
/// target.
trait K2Hom {
    type Entry: SymbolEntry;
    type Image;
    fn sample<R: Rng>(&self, rng: &mut R) -> Result<Self::Entry>;
    fn one_minus(&self, x: &Self::Entry) -> Result<Option<Self::Entry>>;
    fn negate(&self, x: &Self::Entry) -> Self::Entry;
    fn mul_entries(&self, a: &Self::Entry, b: &Self::Entry) -> Result<Self::Entry>;
    fn eval(&self, a: &Self::Entry, b: &Self::Entry) -> Result<Self::Image>;
    fn combine(&self, a: &Self::Image, b: &Self::Image) -> Result<Self::Image>;
    fn is_identity(&self, a: &Self::Image) -> Result<bool>;
    fn equal(&self, a: &Self::Image, b: &Self::Image) -> Result<bool>;
}

struct RationalHom {
    sign_only: bool,
}

impl K2Hom for RationalHom {
    type Entry = RationalNum;
    type Image = K2QImage;

    fn sample<R: Rng>(&self, rng: &mut R) -> Result<RationalNum> {
        Ok(random_rational(rng))
    }

    fn one_minus(&self, x: &RationalNum) -> Result<Option<RationalNum>> {
        let y = RationalNum::from_int(1).sub(x);
        Ok(if y.is_zero() { None } else { Some(y) })
    }

    fn negate(&self, x: &RationalNum) -> RationalNum {
        x.neg()
    }

    fn mul_entries(&self, a: &RationalNum, b: &RationalNum) -> Result<RationalNum> {
        Ok(a.mul(b))
    }

    fn eval(&self, a: &RationalNum, b: &RationalNum) -> Result<K2QImage> {
        let s = SymbolSum::single(sym2(a, b)?);
        if self.sign_only {
            Ok(K2QImage { sign: sign_sum(&s), components: BTreeMap::new() })
        } else {
            k2q_decompose(&s)
        }
    }

    fn combine(&self, a: &K2QImage, b: &K2QImage) -> Result<K2QImage> {
        Ok(a.mul(b))
    }

    fn is_identity(&self, a: &K2QImage) -> Result<bool> {
        Ok(a.is_identity())
    }

    fn equal(&self, a: &K2QImage, b: &K2QImage) -> Result<bool> {
        Ok(a == b)
    }
}

struct TowerHom {
    tower: TowerDesc,
    caps: Precision,
    via_border: bool,
}

impl K2Hom for TowerHom {
    type Entry = Element;
    type Image = Element;

    fn sample<R: Rng>(&self, rng: &mut R) -> Result<Element> {
        let shape = SampleShape { terms: 3, span: 2, max_val: 1, exact: false };
        random_nonzero(rng, &self.tower, &self.caps, shape)
    }

    fn one_minus(&self, x: &Element) -> Result<Option<Element>> {
        let y = Element::one(&self.tower, &self.caps)?.sub(x)?;
        Ok(if y.is_zero() { None } else { Some(y) })
    }

    fn negate(&self, x: &Element) -> Element {
        x.neg()
    }

    fn mul_entries(&self, a: &Element, b: &Element) -> Result<Element> {
        a.mul(b)
    }

    fn eval(&self, a: &Element, b: &Element) -> Result<Element> {
        if self.via_border {
            let image = border(&SymbolSum::single(sym2(a, b)?))?;
            Ok(image.product()?.expect("degree two"))
        } else {
            tame_symbol(a, b)
        }
    }

    fn combine(&self, a: &Element, b: &Element) -> Result<Element> {
        a.mul(b)
    }

    fn is_identity(&self, a: &Element) -> Result<bool> {
        a.agrees_with(&Element::one(a.tower(), a.caps())?)
    }

    fn equal(&self, a: &Element, b: &Element) -> Result<bool> {
        a.agrees_with(b)
    }
}

fn trial<H: K2Hom, R: Rng>(h: &H, rng: &mut R, report: &mut RelationReport) -> Result<()> {
    let a = h.sample(rng)?;
    let b = h.sample(rng)?;
    let c = h.sample(rng)?;
    let bc = h.mul_entries(&b, &c)?;
    if bc.is_zero() {
        report.skipped += 1;
        return Ok(());
    }
    let lhs = h.eval(&a, &bc)?;
    let rhs = h.combine(&h.eval(&a, &b)?, &h.eval(&a, &c)?)?;
    if !h.equal(&lhs, &rhs)? {
        report.multilinear_failures += 1;
    }
    match h.one_minus(&a)? {
        Some(y) => {
            if !h.is_identity(&h.eval(&a, &y)?)? {
                report.steinberg_failures += 1;
            }
        }
        None => report.skipped += 1,
    }
    if !h.is_identity(&h.eval(&a, &h.negate(&a))?)? {
        report.minus_failures += 1;
    }
    let both = h.combine(&h.eval(&a, &b)?, &h.eval(&b, &a)?)?;
    if !h.is_identity(&both)? {
        report.antisymmetry_failures += 1;
    }
    Ok(())
}

fn run_harness<H: K2Hom>(h: &H, trials: usize, seed: u64) -> Result<RelationReport> {
    let mut rng = rng(seed);
    let mut report = RelationReport { trials, ..Default::default() };
    for _ in 0..trials {
        match trial(h, &mut rng, &mut report) {
            Ok(()) => {}
            // Inputs whose images run out of precision say nothing either way.
            Err(Error::PrecisionZero | Error::PrecisionInsufficient) => report.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Checks multilinearity, `{x, 1 − x} ↦ 1`, `{x, −x} ↦ 1` and antisymmetry
/// on `trials` random inputs drawn from a generator seeded with `seed`.
pub fn verify_relations(hom: &Homomorphism, trials: usize, seed: u64) -> Result<RelationReport> {
    match hom {
        Homomorphism::K2Q => run_harness(&RationalHom { sign_only: false }, trials, seed),
        Homomorphism::Sign => run_harness(&RationalHom { sign_only: true }, trials, seed),
        Homomorphism::Tame(t, c) | Homomorphism::Border(t, c) => {
            if t.cdvdim() == 0 {
                return Err(Error::Unsupported(String::from("tame symbol needs a valued field")));
            }
            let via_border = matches!(hom, Homomorphism::Border(..));
            run_harness(&TowerHom { tower: t.clone(), caps: c.clone(), via_border }, trials, seed)
        }
    }
}
