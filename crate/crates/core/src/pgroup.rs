//! Explicit finite abelian p-groups.
//!
//! A [`GroupSpec`] is `Z_{p^e1} ⊕ … ⊕ Z_{p^er}` with `e1 ≥ … ≥ er ≥ 1` and an
//! [`Element`] is a residue vector. Heights are computed from p-adic
//! valuations of the coordinates; [`HeightTable`] recomputes them from the
//! chain `G_{k+1} = p·G_k` by enumeration and is what the tests compare
//! against.
//!
//! Everything that enumerates elements (subgroups, proper elements, the
//! u-map) is meant for desk-scale groups, a few thousand elements at most.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::ExtendedOrdinal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclic exponents must be positive")]
    ZeroExponent,
    #[error("element has {got} coordinates, group has {expected} cyclic factors")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("groups over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("invariant at index {0} is infinite")]
    InfiniteInvariant(u32),
    #[error("profile has unbounded support")]
    UnboundedSupport,
    #[error("group of order {0}^{1} is too large to enumerate")]
    TooLarge(u64, u32),
    #[error("invalid element literal `{0}`")]
    ElementSyntax(String),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Largest group order the enumerating routines accept.
pub const MAX_ENUMERATED_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct GroupSpec {
    p: u64,
    exponents: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    p: u64,
    exponents: Vec<u32>,
}

impl TryFrom<RawGroup> for GroupSpec {
    type Error = GroupError;
    fn try_from(r: RawGroup) -> Result<Self, GroupError> {
        GroupSpec::new(r.p, r.exponents)
    }
}

impl From<GroupSpec> for RawGroup {
    fn from(g: GroupSpec) -> Self {
        RawGroup { p: g.p, exponents: g.exponents }
    }
}

impl GroupSpec {
    pub fn new(p: u64, mut exponents: Vec<u32>) -> Result<Self, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        if exponents.contains(&0) {
            return Err(GroupError::ZeroExponent);
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(GroupSpec { p, exponents })
    }

    pub fn trivial(p: u64) -> Result<Self, GroupError> {
        Self::new(p, Vec::new())
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.log_order())
    }

    fn modulus(&self, i: usize) -> u64 {
        self.p.pow(self.exponents[i])
    }

    /// Least `L` with `G_L = {0}`.
    pub fn length(&self) -> u32 {
        self.exponents.first().copied().unwrap_or(0)
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> Element {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Element(v)
    }

    pub fn element(&self, residues: Vec<u64>) -> Result<Element, GroupError> {
        if residues.len() != self.rank() {
            return Err(GroupError::DimensionMismatch { expected: self.rank(), got: residues.len() });
        }
        let v = residues.iter().enumerate().map(|(i, &r)| r % self.modulus(i)).collect();
        Ok(Element(v))
    }

    pub fn check(&self, x: &Element) -> Result<(), GroupError> {
        if x.0.len() != self.rank() {
            return Err(GroupError::DimensionMismatch { expected: self.rank(), got: x.0.len() });
        }
        Ok(())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(x.0.iter().zip(&y.0).enumerate().map(|(i, (a, b))| (a + b) % self.modulus(i)).collect())
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element(x.0.iter().enumerate().map(|(i, &a)| (self.modulus(i) - a) % self.modulus(i)).collect())
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    /// `k·x`, i.e. `x + ⋯ + x` (k times).
    pub fn scale(&self, k: u64, x: &Element) -> Element {
        Element(
            x.0.iter()
                .enumerate()
                .map(|(i, &a)| {
                    let m = self.modulus(i);
                    ((a as u128 * (k % m) as u128) % m as u128) as u64
                })
                .collect(),
        )
    }

    /// Height from coordinate valuations: `h(x) = min v_p(x_i)` over the
    /// nonzero coordinates, `∞` for zero.
    pub fn height(&self, x: &Element) -> Result<ExtendedOrdinal, GroupError> {
        self.check(x)?;
        Ok(match self.height_nat(x) {
            Some(h) => ExtendedOrdinal::nat(h as u64),
            None => ExtendedOrdinal::Infinity,
        })
    }

    /// Height as a natural number, `None` for the zero element.
    pub fn height_nat(&self, x: &Element) -> Option<u32> {
        x.0.iter().filter(|&&a| a != 0).map(|&a| valuation(a, self.p)).min()
    }

    /// Order of `x` as `log_p`.
    pub fn log_order_of(&self, x: &Element) -> u32 {
        x.0.iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| self.exponents[i] - valuation(a, self.p))
            .max()
            .unwrap_or(0)
    }

    /// `f_G(k)`: the number of cyclic factors of order `p^{k+1}`.
    pub fn ulm_invariants(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for &e in &self.exponents {
            *out.entry(e - 1).or_insert(0) += 1;
        }
        out
    }

    pub fn is_isomorphic(&self, other: &GroupSpec) -> bool {
        self == other
    }

    fn ensure_enumerable(&self) -> Result<u64, GroupError> {
        match self.order() {
            Some(n) if n <= MAX_ENUMERATED_ORDER => Ok(n),
            _ => Err(GroupError::TooLarge(self.p, self.log_order())),
        }
    }

    /// Mixed-radix index of an element; the first coordinate varies slowest.
    pub fn index_of(&self, x: &Element) -> usize {
        x.0.iter().enumerate().fold(0usize, |acc, (i, &a)| acc * self.modulus(i) as usize + a as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.modulus(i) as usize;
            v[i] = (idx % m) as u64;
            idx /= m;
        }
        Element(v)
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = Element> + '_, GroupError> {
        let n = self.ensure_enumerable()?;
        Ok((0..n as usize).map(move |i| self.element_at(i)))
    }

    pub fn whole(&self) -> Result<Subgroup, GroupError> {
        let gens = (0..self.rank()).map(|i| self.generator(i)).collect();
        Subgroup::generated(self, gens)
    }

    pub fn trivial_subgroup(&self) -> Result<Subgroup, GroupError> {
        Subgroup::generated(self, Vec::new())
    }

    /// Direct sum with another group over the same prime.
    pub fn direct_sum(&self, other: &GroupSpec) -> Result<GroupSpec, GroupError> {
        if self.p != other.p {
            return Err(GroupError::PrimeMismatch(self.p, other.p));
        }
        let mut e = self.exponents.clone();
        e.extend_from_slice(&other.exponents);
        GroupSpec::new(self.p, e)
    }

    /// All groups of order `p^k` for `k ≤ max_log`, as partitions of `k`.
    pub fn all_up_to(p: u64, max_log: u32) -> Result<Vec<GroupSpec>, GroupError> {
        let mut out = Vec::new();
        for k in 0..=max_log {
            for part in partitions(k, k) {
                out.push(GroupSpec::new(p, part)?);
            }
        }
        Ok(out)
    }
}

fn partitions(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn valuation(mut a: u64, p: u64) -> u32 {
    let mut v = 0;
    while a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| if e == 1 { format!("Z{}", self.p) } else { format!("Z{}^{}", self.p, e) })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub Vec<u64>);

impl Element {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Element {
    type Err = GroupError;

    /// Parses `[a1,...,ar]`; residues are reduced by [`GroupSpec::element`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GroupError::ElementSyntax(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
        if inner.trim().is_empty() {
            return Ok(Element(Vec::new()));
        }
        inner.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| err())).collect::<Result<Vec<_>, _>>().map(Element)
    }
}

/// A subgroup with its full element enumeration.
#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<Element>,
    members: Vec<bool>,
    elements: Vec<Element>,
}

impl Subgroup {
    /// Closure of `generators` under addition (negation comes for free in a
    /// finite group).
    pub fn generated(g: &GroupSpec, generators: Vec<Element>) -> Result<Subgroup, GroupError> {
        let n = g.ensure_enumerable()? as usize;
        for x in &generators {
            g.check(x)?;
        }
        let zero = g.zero();
        let mut members = vec![false; n];
        members[g.index_of(&zero)] = true;
        let mut elements = vec![zero];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i].clone();
            for gen in &generators {
                let y = g.add(&x, gen);
                let idx = g.index_of(&y);
                if !members[idx] {
                    members[idx] = true;
                    elements.push(y);
                }
            }
            i += 1;
        }
        elements.sort();
        Ok(Subgroup { generators, members, elements })
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupSpec, x: &Element) -> bool {
        self.members.get(g.index_of(x)).copied().unwrap_or(false)
    }
}

/// The chain `G_0 ⊇ G_1 ⊇ … ⊇ G_L = {0}` computed by enumeration, with the
/// resulting height of every element.
#[derive(Clone, Debug)]
pub struct HeightTable {
    chain: Vec<Vec<bool>>,
    heights: Vec<Option<u32>>,
}

impl HeightTable {
    pub fn compute(g: &GroupSpec) -> Result<HeightTable, GroupError> {
        let n = g.ensure_enumerable()? as usize;
        let mut chain = vec![vec![true; n]];
        loop {
            let prev = chain.last().unwrap();
            if prev.iter().filter(|&&b| b).count() == 1 {
                break;
            }
            let mut next = vec![false; n];
            for (i, &inside) in prev.iter().enumerate() {
                if inside {
                    next[g.index_of(&g.scale(g.p, &g.element_at(i)))] = true;
                }
            }
            chain.push(next);
        }
        let zero = g.index_of(&g.zero());
        let heights = (0..n)
            .map(|i| if i == zero { None } else { Some(chain.iter().rposition(|level| level[i]).unwrap() as u32) })
            .collect();
        Ok(HeightTable { chain, heights })
    }

    /// Length of the chain: least `L` with `G_L = {0}`.
    pub fn length(&self) -> u32 {
        (self.chain.len() - 1) as u32
    }

    pub fn contains(&self, level: u32, idx: usize) -> bool {
        self.chain.get(level as usize).map_or(idx == self.zero_index(), |l| l[idx])
    }

    fn zero_index(&self) -> usize {
        self.heights.iter().position(Option::is_none).unwrap()
    }

    pub fn height(&self, idx: usize) -> Option<u32> {
        self.heights[idx]
    }

    pub fn level_size(&self, level: u32) -> usize {
        self.chain.get(level as usize).map_or(1, |l| l.iter().filter(|&&b| b).count())
    }
}

fn height_ge(g: &GroupSpec, x: &Element, level: u32) -> bool {
    g.height_nat(x).is_none_or(|h| h >= level)
}

/// `x` is proper with respect to `S` when `h(x) ≥ h(x + s)` for all `s ∈ S`.
pub fn is_proper_wrt(g: &GroupSpec, x: &Element, s: &Subgroup) -> Result<bool, GroupError> {
    g.check(x)?;
    let hx = g.height(x)?;
    for y in s.elements() {
        if g.height(&g.add(x, y))? > hx {
            return Ok(false);
        }
    }
    Ok(true)
}

fn log_p(mut n: usize, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n as u64 % p, 0);
        n /= p as usize;
        k += 1;
    }
    k
}

/// Elements of `P_α = {x : px = 0} ∩ G_α`.
fn socle_at(g: &GroupSpec, alpha: u32) -> Result<Vec<Element>, GroupError> {
    Ok(g.elements()?.filter(|x| g.scale(g.p, x).is_zero() && height_ge(g, x, alpha)).collect())
}

/// `dim P_α / P_{α+1}` by counting both subgroups.
pub fn ulm_invariant_by_enumeration(g: &GroupSpec, alpha: u32) -> Result<u64, GroupError> {
    let a = socle_at(g, alpha)?.len();
    let b = socle_at(g, alpha + 1)?.len();
    Ok(log_p(a / b, g.p) as u64)
}

/// Canonical coset key of `x + P_{α+1}` inside `P_α`.
fn coset_key(g: &GroupSpec, x: &Element, p_next: &[Element]) -> usize {
    p_next.iter().map(|z| g.index_of(&g.add(x, z))).min().unwrap()
}

/// Dimension of the image of the u-map `S*_α → P_α / P_{α+1}`, where
/// `S*_α = S ∩ G_α ∩ p^{-1} G_{α+2}` and `u(x) = x - y` for any
/// `y ∈ G_{α+1}` with `py = px`.
pub fn u_map_range_dim(g: &GroupSpec, s: &Subgroup, alpha: u32) -> Result<u32, GroupError> {
    let p_next = socle_at(g, alpha + 1)?;
    let upper: Vec<Element> = g.elements()?.filter(|y| height_ge(g, y, alpha + 1)).collect();
    let mut image = HashSet::new();
    for x in s.elements() {
        let px = g.scale(g.p, x);
        if !height_ge(g, x, alpha) || !height_ge(g, &px, alpha + 2) {
            continue;
        }
        let y = upper.iter().find(|y| g.scale(g.p, y) == px).expect("px ∈ G_{α+2} = p·G_{α+1}");
        image.insert(coset_key(g, &g.sub(x, y), &p_next));
    }
    Ok(log_p(image.len(), g.p))
}

/// `dim S*_α / S_{α+1}` by counting.
pub fn s_star_quotient_dim(g: &GroupSpec, s: &Subgroup, alpha: u32) -> u32 {
    let star =
        s.elements().iter().filter(|x| height_ge(g, x, alpha) && height_ge(g, &g.scale(g.p, x), alpha + 2)).count();
    let next = s.elements().iter().filter(|x| height_ge(g, x, alpha + 1)).count();
    log_p(star / next, g.p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lemma2Outcome {
    pub range_full: bool,
    pub exists_proper: bool,
}

/// Evaluates both sides of the u-map / proper-element equivalence by
/// enumeration.
///
/// The proper element is searched among `x ∈ P_α` with `h(x) = α` exactly
/// and `x ∉ S`; `0` and elements of `S` are vacuous witnesses otherwise.
pub fn lemma2_check(g: &GroupSpec, s: &Subgroup, alpha: u32) -> Result<Lemma2Outcome, GroupError> {
    let range = u_map_range_dim(g, s, alpha)?;
    let full = ulm_invariant_by_enumeration(g, alpha)? as u32;
    let mut exists_proper = false;
    for x in socle_at(g, alpha)? {
        if g.height_nat(&x) == Some(alpha) && !s.contains(g, &x) && is_proper_wrt(g, &x, s)? {
            exists_proper = true;
            break;
        }
    }
    Ok(Lemma2Outcome { range_full: range == full, exists_proper })
}

/// Whether some injective homomorphism `B → A` exists.
///
/// Backtracks over images of the standard generators of `B`: generator `i`
/// must go to an element of order exactly `p^{e_i}`, and the socle images
/// `p^{e_i - 1}·w_i` must stay linearly independent (which is equivalent to
/// injectivity). Failed states are memoized on the span of the socle images.
pub fn embeds_into(b: &GroupSpec, a: &GroupSpec) -> Result<bool, GroupError> {
    if b.p != a.p {
        return Err(GroupError::PrimeMismatch(b.p, a.p));
    }
    if b.log_order() > a.log_order() || b.rank() > a.rank() || b.length() > a.length() {
        return Ok(false);
    }
    if b.rank() == 0 {
        return Ok(true);
    }
    let candidates: Vec<Vec<Element>> = b
        .exponents
        .iter()
        .map(|&e| Ok(a.elements()?.filter(|w| a.log_order_of(w) == e).collect()))
        .collect::<Result<_, GroupError>>()?;
    let mut failed = HashSet::new();
    let span = a.trivial_subgroup()?;
    embed_search(a, b, &candidates, 0, span, &mut failed)
}

fn embed_search(
    a: &GroupSpec,
    b: &GroupSpec,
    candidates: &[Vec<Element>],
    i: usize,
    span: Subgroup,
    failed: &mut HashSet<(usize, Vec<Element>)>,
) -> Result<bool, GroupError> {
    if i == candidates.len() {
        return Ok(true);
    }
    let key = (i, span.elements().to_vec());
    if failed.contains(&key) {
        return Ok(false);
    }
    let mut tried = HashSet::new();
    for w in &candidates[i] {
        let socle = a.scale(a.p.pow(b.exponents[i] - 1), w);
        if span.contains(a, &socle) || !tried.insert(socle.clone()) {
            continue;
        }
        let mut gens = span.generators().to_vec();
        gens.push(socle);
        let next = Subgroup::generated(a, gens)?;
        if embed_search(a, b, candidates, i + 1, next, failed)? {
            return Ok(true);
        }
    }
    failed.insert(key);
    Ok(false)
}

/// `S ∩ p^k G = p^k S` for every `k ≤ length(G)`.
pub fn is_pure_subgroup(g: &GroupSpec, s: &Subgroup) -> Result<bool, GroupError> {
    for k in 1..=g.length() {
        let pk = g.p.pow(k);
        let lhs: HashSet<&Element> = s.elements().iter().filter(|x| height_ge(g, x, k)).collect();
        let rhs: HashSet<Element> = s.elements().iter().map(|x| g.scale(pk, x)).collect();
        if lhs.len() != rhs.len() || !rhs.iter().all(|x| lhs.contains(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⊕_k (Z_{p^{k+1}})^{f(k)}`.
pub fn realize_finite_profile(p: u64, f: &BTreeMap<u32, u64>) -> Result<GroupSpec, GroupError> {
    let mut exps = Vec::new();
    for (&k, &m) in f {
        exps.extend(std::iter::repeat_n(k + 1, m as usize));
    }
    GroupSpec::new(p, exps)
}

/// Subgroups of `g` containing `base`, reachable by adjoining at most `cap`
/// further elements. Keys are sorted element-index lists.
pub fn overgroups(g: &GroupSpec, base: &Subgroup, cap: usize) -> Result<Vec<Subgroup>, GroupError> {
    let n = g.ensure_enumerable()? as usize;
    let key = |s: &Subgroup| -> Vec<usize> { s.elements().iter().map(|x| g.index_of(x)).collect() };
    let mut seen: HashMap<Vec<usize>, Subgroup> = HashMap::new();
    seen.insert(key(base), base.clone());
    let mut frontier = vec![base.clone()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for s in &frontier {
            for idx in 0..n {
                if s.members[idx] {
                    continue;
                }
                let mut gens = s.generators().to_vec();
                gens.push(g.element_at(idx));
                let t = Subgroup::generated(g, gens)?;
                let k = key(&t);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(k) {
                    e.insert(t.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Subgroup> = seen.into_values().collect();
    out.sort_by_key(|s| (s.len(), s.elements().to_vec()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(p: u64, e: &[u32]) -> GroupSpec {
        GroupSpec::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(GroupSpec::new(4, vec![1]), Err(GroupError::NotPrime(4)));
        assert_eq!(GroupSpec::new(2, vec![0]), Err(GroupError::ZeroExponent));
        let g = grp(2, &[3, 1]);
        assert!(matches!(g.height(&Element(vec![1])), Err(GroupError::DimensionMismatch { .. })));
        assert_eq!(g.exponents(), &[3, 1]);
        assert_eq!(grp(2, &[1, 3]), g);
    }

    #[test]
    fn height_examples() {
        let g = grp(5, &[3]);
        let x = g.scale(25, &g.generator(0));
        assert_eq!(g.height(&x).unwrap(), ExtendedOrdinal::nat(2));
        assert_eq!(g.height(&g.zero()).unwrap(), ExtendedOrdinal::Infinity);
        // Z_2 ⊕ Z_8 with exponents stored descending: (1,4) is [4,1]
        let h = grp(2, &[1, 3]);
        let y = h.element(vec![4, 1]).unwrap();
        assert_eq!(h.height(&y).unwrap(), ExtendedOrdinal::nat(0));
    }

    #[test]
    fn heights_agree_with_chain() {
        for g in GroupSpec::all_up_to(2, 5).unwrap().into_iter().chain(GroupSpec::all_up_to(3, 3).unwrap()) {
            let table = HeightTable::compute(&g).unwrap();
            assert_eq!(table.length(), g.length(), "{g}");
            for (i, x) in g.elements().unwrap().enumerate() {
                assert_eq!(table.height(i), g.height_nat(&x), "{g} {x}");
            }
        }
    }

    #[test]
    fn ulm_invariant_examples() {
        assert_eq!(grp(2, &[3]).ulm_invariants(), BTreeMap::from([(2, 1)]));
        assert_eq!(grp(3, &[1, 3]).ulm_invariants(), BTreeMap::from([(0, 1), (2, 1)]));
        assert_eq!(grp(2, &[2, 2, 2]).ulm_invariants(), BTreeMap::from([(1, 3)]));
        for g in GroupSpec::all_up_to(2, 5).unwrap() {
            let f = g.ulm_invariants();
            for k in 0..6 {
                assert_eq!(ulm_invariant_by_enumeration(&g, k).unwrap(), f.get(&k).copied().unwrap_or(0), "{g} at {k}");
            }
            assert_eq!(f.values().sum::<u64>() as usize, g.rank());
        }
    }

    #[test]
    fn length_examples() {
        assert_eq!(grp(2, &[]).length(), 0);
        assert_eq!(grp(3, &[3]).length(), 3);
        assert_eq!(HeightTable::compute(&grp(2, &[2, 5])).unwrap().length(), 5);
    }

    #[test]
    fn proper_examples() {
        let g = grp(3, &[2]);
        let gen = g.generator(0);
        let pg = g.scale(3, &gen);
        let s = Subgroup::generated(&g, vec![pg.clone()]).unwrap();
        assert!(is_proper_wrt(&g, &g.zero(), &g.trivial_subgroup().unwrap()).unwrap());
        assert!(is_proper_wrt(&g, &gen, &s).unwrap());
        assert!(!is_proper_wrt(&g, &pg, &s).unwrap());
    }

    #[test]
    fn u_map_examples() {
        let g = grp(2, &[2, 1]);
        let trivial = g.trivial_subgroup().unwrap();
        let whole = g.whole().unwrap();
        for a in 0..3 {
            assert_eq!(u_map_range_dim(&g, &trivial, a).unwrap(), 0);
            assert_eq!(u_map_range_dim(&g, &whole, a).unwrap() as u64, ulm_invariant_by_enumeration(&g, a).unwrap());
        }
        // Coordinates are (Z_4, Z_2). S = <(1,1)> = {0,(1,1),(2,0),(3,1)}.
        // S*_0 = {0,(2,0)} = S_1, and u((2,0)) lands in P_1.
        let x = g.element(vec![1, 1]).unwrap();
        let s = Subgroup::generated(&g, vec![x]).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(u_map_range_dim(&g, &s, 0).unwrap(), 0);
        assert_eq!(s_star_quotient_dim(&g, &s, 0), 0);
        assert_eq!(u_map_range_dim(&g, &s, 1).unwrap(), 1);
    }

    #[test]
    fn lemma2_examples() {
        let g = grp(2, &[2, 1]);
        let whole = g.whole().unwrap();
        assert_eq!(lemma2_check(&g, &whole, 0).unwrap(), Lemma2Outcome { range_full: true, exists_proper: false });
        let zp = grp(3, &[1]);
        assert_eq!(
            lemma2_check(&zp, &zp.trivial_subgroup().unwrap(), 0).unwrap(),
            Lemma2Outcome { range_full: false, exists_proper: true }
        );
        // S = the Z_4 summand: at α = 0 the Z_2 summand supplies a proper
        // element and u misses it.
        let s = Subgroup::generated(&g, vec![g.generator(0)]).unwrap();
        let out = lemma2_check(&g, &s, 0).unwrap();
        assert_eq!(out, Lemma2Outcome { range_full: false, exists_proper: true });
    }

    #[test]
    fn embedding_examples() {
        let any = grp(2, &[2, 1]);
        assert!(embeds_into(&grp(2, &[]), &any).unwrap());
        assert!(!embeds_into(&grp(3, &[1, 1]), &grp(3, &[2])).unwrap());
        assert!(embeds_into(&grp(3, &[2]), &grp(3, &[2, 1])).unwrap());
        assert!(embeds_into(&grp(2, &[1, 1]), &grp(2, &[3, 1])).unwrap());
        assert!(!embeds_into(&grp(2, &[2, 2]), &grp(2, &[3, 1])).unwrap());
        assert_eq!(embeds_into(&grp(2, &[1]), &grp(3, &[1])), Err(GroupError::PrimeMismatch(2, 3)));
    }

    #[test]
    fn purity_examples() {
        let g = grp(3, &[2]);
        assert!(is_pure_subgroup(&g, &g.whole().unwrap()).unwrap());
        let s = Subgroup::generated(&g, vec![g.scale(3, &g.generator(0))]).unwrap();
        assert!(!is_pure_subgroup(&g, &s).unwrap());
        let h = grp(2, &[2, 1]);
        let summand = Subgroup::generated(&h, vec![h.generator(1)]).unwrap();
        assert!(is_pure_subgroup(&h, &summand).unwrap());
    }

    #[test]
    fn realize_examples() {
        assert_eq!(realize_finite_profile(2, &BTreeMap::new()).unwrap(), grp(2, &[]));
        assert_eq!(realize_finite_profile(3, &BTreeMap::from([(0, 1), (2, 1)])).unwrap(), grp(3, &[1, 3]));
        assert_eq!(realize_finite_profile(2, &BTreeMap::from([(1, 2)])).unwrap(), grp(2, &[2, 2]));
    }

    #[test]
    fn group_census() {
        assert_eq!(GroupSpec::all_up_to(2, 4).unwrap().len(), 12);
        assert_eq!(GroupSpec::all_up_to(3, 4).unwrap().len(), 12);
    }

    #[test]
    fn element_literals() {
        let e: Element = "[1, 4]".parse().unwrap();
        assert_eq!(e, Element(vec![1, 4]));
        assert_eq!(e.to_string(), "[1,4]");
        assert!("1,4".parse::<Element>().is_err());
        let g: GroupSpec = serde_json::from_str(r#"{"p": 2, "exponents": [1,3]}"#).unwrap();
        assert_eq!(g.exponents(), &[3, 1]);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"p": 6, "exponents": [1]}"#).is_err());
    }

    #[test]
    fn overgroup_enumeration() {
        let g = grp(2, &[1, 1]);
        let all = overgroups(&g, &g.trivial_subgroup().unwrap(), 2).unwrap();
        // {0}, three lines, whole plane
        assert_eq!(all.len(), 5);
        assert_eq!(overgroups(&g, &g.trivial_subgroup().unwrap(), 1).unwrap().len(), 4);
    }
}
