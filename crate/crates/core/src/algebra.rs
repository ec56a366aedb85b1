//! Basis keys, sparse elements and windows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::config::{HomomorphismFamily, IndexKind, Profile};
use crate::rational::Rational;

pub type Alpha = SmallVec<[i64; 4]>;
pub type Multi = SmallVec<[u32; 4]>;

/// Names the basis vector `x^(alpha, idx)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub alpha: Alpha,
    pub idx: Multi,
}

impl BasisKey {
    pub fn new(alpha: &[i64], idx: &[u32]) -> Self {
        BasisKey { alpha: Alpha::from_slice(alpha), idx: Multi::from_slice(idx) }
    }

    /// The key of the identity element `1 = x^(0, 0)`.
    pub fn unit(rank: usize, n: usize) -> Self {
        BasisKey { alpha: smallvec::smallvec![0; rank], idx: smallvec::smallvec![0; n] }
    }

    /// `x^(alpha, 0)`.
    pub fn pure(alpha: &[i64], n: usize) -> Self {
        BasisKey { alpha: Alpha::from_slice(alpha), idx: smallvec::smallvec![0; n] }
    }

    /// Total degree `|idx|`.
    pub fn degree(&self) -> u32 {
        self.idx.iter().sum()
    }

    /// Sup norm of `alpha`.
    pub fn radius(&self) -> u64 {
        self.alpha.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0)
    }

    /// Componentwise sum of both indices, as in the commutative product.
    pub fn add(&self, other: &BasisKey) -> BasisKey {
        BasisKey {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            idx: self.idx.iter().zip(&other.idx).map(|(a, b)| a + b).collect(),
        }
    }

    /// Shifts `alpha` by `delta`.
    pub fn shifted(&self, delta: &[i64]) -> BasisKey {
        BasisKey { alpha: self.alpha.iter().zip(delta).map(|(a, b)| a + b).collect(), idx: self.idx.clone() }
    }

    /// Lowers `idx[p]` by one, or `None` if it is already zero.
    pub fn lowered(&self, p: usize) -> Option<BasisKey> {
        if self.idx[p] == 0 {
            return None;
        }
        let mut k = self.clone();
        k.idx[p] -= 1;
        Some(k)
    }

    pub fn is_pure(&self) -> bool {
        self.idx.iter().all(|&i| i == 0)
    }
}

fn fmt_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^(")?;
        fmt_tuple(f, &self.alpha)?;
        write!(f, ",")?;
        fmt_tuple(f, &self.idx)?;
        write!(f, ")")
    }
}

impl fmt::Debug for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Z/2 grading of a superalgebra. Lie algebras only use `Even`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of a product or bracket of homogeneous elements.
    pub fn sum(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A basis key together with its parity; the coordinate type for spans.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedKey {
    pub parity: Parity,
    pub key: BasisKey,
}

impl GradedKey {
    pub fn even(key: BasisKey) -> Self {
        GradedKey { parity: Parity::Even, key }
    }

    pub fn odd(key: BasisKey) -> Self {
        GradedKey { parity: Parity::Odd, key }
    }
}

impl fmt::Display for GradedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Parity::Even => write!(f, "{}", self.key),
            Parity::Odd => write!(f, "{}_odd", self.key),
        }
    }
}

impl Serialize for GradedKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Serialize for BasisKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Debug for GradedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite rational combination of basis keys, stored without zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<BasisKey, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn unit(rank: usize, n: usize) -> Self {
        Element::basis(BasisKey::unit(rank, n))
    }

    pub fn basis(key: BasisKey) -> Self {
        Element::term(key, Rational::one())
    }

    pub fn term(key: BasisKey, coeff: Rational) -> Self {
        let mut e = Element::zero();
        e.add_term(key, coeff);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisKey, Rational)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<BasisKey, Rational> {
        self.terms
    }

    pub fn keys(&self) -> impl Iterator<Item = &BasisKey> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &BasisKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Adds `coeff * key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: BasisKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Element, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, factor: &Rational) -> Element {
        if factor.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * factor)).collect() }
    }

    /// The commutative, associative product `x^(a,i) x^(b,j) = x^(a+b, i+j)`.
    pub fn multiply(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(k1.add(k2), c1 * c2);
            }
        }
        out
    }

    /// The derivation `∂_p x^(a,i) = φ_p(a) x^(a,i) + i_p x^(a, i - e_p)`, with
    /// `p` zero-based.
    pub fn derivation(&self, phi: &HomomorphismFamily, p: usize) -> Element {
        let mut out = Element::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * &phi.eval(p, &k.alpha));
            if let Some(lower) = k.lowered(p) {
                out.add_term(lower, c * &Rational::from(k.idx[p]));
            }
        }
        out
    }

    /// Splits the element by the value of `φ_p` on each key's `alpha`.
    /// The components sum back to `self`.
    pub fn eigendecompose(&self, phi: &HomomorphismFamily, p: usize) -> BTreeMap<Rational, Element> {
        let mut out: BTreeMap<Rational, Element> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(phi.eval(p, &k.alpha)).or_default().add_term(k.clone(), c.clone());
        }
        out
    }

    /// Drops every term whose key is in `keys`.
    pub fn without_keys(&self, keys: &BTreeSet<BasisKey>) -> Element {
        Element {
            terms: self.terms.iter().filter(|(k, _)| !keys.contains(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Splits into the part inside `window` and the part outside it.
    pub fn split_by_window(&self, window: &Window) -> (Element, Element) {
        let mut inside = Element::zero();
        let mut outside = Element::zero();
        for (k, c) in &self.terms {
            let target = if window.contains(k) { &mut inside } else { &mut outside };
            target.terms.insert(k.clone(), c.clone());
        }
        (inside, outside)
    }

    pub fn support_diagnostics(&self) -> SupportDiagnostics {
        let max_i2 = self.keys().map(|k| k.idx.get(1).copied().unwrap_or(0)).max().unwrap_or(0);
        let max_total_degree = self.keys().map(BasisKey::degree).max().unwrap_or(0);
        let top: BTreeSet<&Alpha> = self.keys().filter(|k| k.degree() == max_total_degree).map(|k| &k.alpha).collect();
        SupportDiagnostics { max_i2, max_total_degree, distinct_alpha_at_top: top.len() }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "({c})·{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Filtration measures of an element's support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportDiagnostics {
    pub max_i2: u32,
    pub max_total_degree: u32,
    pub distinct_alpha_at_top: usize,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    alpha: Vec<i64>,
    idx: Vec<u32>,
    coeff: Rational,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(k, c)| TermRecord { alpha: k.alpha.to_vec(), idx: k.idx.to_vec(), coeff: c.clone() })
            .collect();
        records.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        Ok(Element::from_terms(records.into_iter().map(|r| (BasisKey::new(&r.alpha, &r.idx), r.coeff))))
    }
}

/// An element of a superalgebra, split by parity. Lie algebras leave
/// `odd` at zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug, Serialize, Deserialize)]
pub struct SuperElement {
    pub even: Element,
    pub odd: Element,
}

impl SuperElement {
    pub fn zero() -> Self {
        SuperElement::default()
    }

    pub fn even(e: Element) -> Self {
        SuperElement { even: e, odd: Element::zero() }
    }

    pub fn odd(e: Element) -> Self {
        SuperElement { even: Element::zero(), odd: e }
    }

    pub fn homogeneous(parity: Parity, e: Element) -> Self {
        match parity {
            Parity::Even => SuperElement::even(e),
            Parity::Odd => SuperElement::odd(e),
        }
    }

    pub fn basis(g: &GradedKey) -> Self {
        SuperElement::homogeneous(g.parity, Element::basis(g.key.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn part(&self, parity: Parity) -> &Element {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn part_mut(&mut self, parity: Parity) -> &mut Element {
        match parity {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        }
    }

    /// The parity of a nonzero homogeneous element.
    pub fn parity(&self) -> Option<Parity> {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (false, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn add(&self, other: &SuperElement) -> SuperElement {
        SuperElement { even: self.even.add(&other.even), odd: self.odd.add(&other.odd) }
    }

    pub fn sub(&self, other: &SuperElement) -> SuperElement {
        SuperElement { even: self.even.sub(&other.even), odd: self.odd.sub(&other.odd) }
    }

    pub fn neg(&self) -> SuperElement {
        SuperElement { even: self.even.neg(), odd: self.odd.neg() }
    }

    pub fn scale(&self, c: &Rational) -> SuperElement {
        SuperElement { even: self.even.scale(c), odd: self.odd.scale(c) }
    }

    pub fn add_scaled(&mut self, other: &SuperElement, c: &Rational) {
        self.even.add_scaled(&other.even, c);
        self.odd.add_scaled(&other.odd, c);
    }

    pub fn add_term(&mut self, g: GradedKey, c: Rational) {
        self.part_mut(g.parity).add_term(g.key, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (GradedKey, &Rational)> {
        let even = self.even.terms().map(|(k, c)| (GradedKey::even(k.clone()), c));
        let odd = self.odd.terms().map(|(k, c)| (GradedKey::odd(k.clone()), c));
        even.chain(odd)
    }

    pub fn len(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, g: &GradedKey) -> Rational {
        self.part(g.parity).coeff(&g.key)
    }
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[even: {} | odd: {}]", self.even, self.odd)
    }
}

/// A finite truncation of the basis: `|alpha_k| <= radius` for every
/// coordinate and `|idx| <= degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub radius: u32,
    pub degree: u32,
}

impl Window {
    pub fn new(radius: u32, degree: u32) -> Self {
        Window { radius, degree }
    }

    pub fn contains(&self, key: &BasisKey) -> bool {
        key.radius() <= self.radius as u64 && key.degree() <= self.degree
    }

    pub fn expanded(&self, radius: u32, degree: u32) -> Window {
        Window { radius: self.radius + radius, degree: self.degree + degree }
    }

    /// All basis keys in the window, in ascending key order.
    pub fn keys(&self, rank: usize, profile: &Profile) -> Vec<BasisKey> {
        let alphas = box_points(rank, self.radius as i64);
        let multis = multi_indices(profile, self.degree);
        let mut out = Vec::with_capacity(alphas.len() * multis.len());
        for a in &alphas {
            for i in &multis {
                out.push(BasisKey { alpha: a.clone(), idx: i.clone() });
            }
        }
        out
    }

    /// Graded keys of the window; odd keys only when `with_odd` is set.
    pub fn graded_keys(&self, rank: usize, profile: &Profile, with_odd: bool) -> Vec<GradedKey> {
        let keys = self.keys(rank, profile);
        let mut out: Vec<GradedKey> = keys.iter().cloned().map(GradedKey::even).collect();
        if with_odd {
            out.extend(keys.into_iter().map(GradedKey::odd));
        }
        out
    }
}

/// Lattice points of the box `[-radius, radius]^rank`, lexicographically.
pub fn box_points(rank: usize, radius: i64) -> Vec<Alpha> {
    let mut out: Vec<Alpha> = vec![Alpha::new()];
    for _ in 0..rank {
        let mut next = Vec::with_capacity(out.len() * (2 * radius as usize + 1));
        for prefix in &out {
            for v in -radius..=radius {
                let mut a = prefix.clone();
                a.push(v);
                next.push(a);
            }
        }
        out = next;
    }
    out
}

/// Multi-indices allowed by `profile` with total degree at most `degree`,
/// lexicographically.
pub fn multi_indices(profile: &Profile, degree: u32) -> Vec<Multi> {
    let mut out: Vec<Multi> = vec![Multi::new()];
    for kind in profile.kinds() {
        let mut next = Vec::new();
        for prefix in &out {
            let used: u32 = prefix.iter().sum();
            let top = match kind {
                IndexKind::Zero => 0,
                IndexKind::Full => degree - used,
            };
            for v in 0..=top {
                let mut m = prefix.clone();
                m.push(v);
                next.push(m);
            }
        }
        out = next;
    }
    out
}
