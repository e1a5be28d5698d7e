//! Symbolic Ulm sequences.
//!
//! An [`UlmProfile`] lists the Ulm invariants `f(β)` of a reduced p-group
//! block by block: writing `β = ω·γ + k`, a [`Band`] fixes the block content
//! for every `γ` in a half-open interval `[gamma_lo, gamma_hi)` as a finite
//! head (offsets `0..m`) followed by a constant tail. Profiles are normalized
//! on construction, so two profiles describe the same sequence exactly when
//! they compare equal.
//!
//! Comparisons below transfinite cutoffs are decided on the common
//! refinement of the band intervals, never by sampling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::pgroup::{is_prime, GroupError, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("band [{0}, {1}) is empty")]
    EmptyBand(Ordinal, Ordinal),
    #[error("bands must be contiguous from 0; expected a band starting at {expected}, found {found}")]
    NotContiguous { expected: Ordinal, found: Ordinal },
    #[error("profiles over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("invalid Ulm value `{0}`")]
    ValueSyntax(String),
    #[error("length must be w*a with a a limit ordinal, got {0}")]
    NotLimitLength(Ordinal),
    #[error("profile is not realizable: its support is not cofinal in every limit ordinal up to the length")]
    Unrealizable,
    #[error("profile is not finite: {0}")]
    NotFinite(&'static str),
}

/// A value of the Ulm sequence: a natural number or `∞` (countably infinite).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UlmValue {
    Finite(u64),
    Infinite,
}

impl UlmValue {
    pub const ZERO: UlmValue = UlmValue::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl fmt::Display for UlmValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UlmValue::Finite(n) => write!(f, "{n}"),
            UlmValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for UlmValue {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" => Ok(UlmValue::Infinite),
            t => t.parse().map(UlmValue::Finite).map_err(|_| ProfileError::ValueSyntax(s.to_string())),
        }
    }
}

impl From<u64> for UlmValue {
    fn from(n: u64) -> Self {
        UlmValue::Finite(n)
    }
}

impl Serialize for UlmValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UlmValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Band {
    pub gamma_lo: Ordinal,
    pub gamma_hi: Ordinal,
    #[serde(default)]
    pub head: Vec<UlmValue>,
    pub tail: UlmValue,
}

impl Band {
    pub fn new(gamma_lo: Ordinal, gamma_hi: Ordinal, head: Vec<UlmValue>, tail: UlmValue) -> Band {
        Band { gamma_lo, gamma_hi, head, tail }
    }

    /// Value at offset `k` of every block in the band.
    pub fn at(&self, k: u64) -> UlmValue {
        usize::try_from(k).ok().and_then(|i| self.head.get(i)).copied().unwrap_or(self.tail)
    }

    fn is_zero(&self) -> bool {
        self.tail.is_zero() && self.head.iter().all(|v| v.is_zero())
    }

    fn same_content(&self, other: &Band) -> bool {
        self.head == other.head && self.tail == other.tail
    }

    fn trim(&mut self) {
        while self.head.last() == Some(&self.tail) {
            self.head.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct UlmProfile {
    p: u64,
    bands: Vec<Band>,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    p: u64,
    bands: Vec<Band>,
}

impl TryFrom<RawProfile> for UlmProfile {
    type Error = ProfileError;
    fn try_from(r: RawProfile) -> Result<Self, ProfileError> {
        UlmProfile::new(r.p, r.bands)
    }
}

impl From<UlmProfile> for RawProfile {
    fn from(p: UlmProfile) -> Self {
        RawProfile { p: p.p, bands: p.bands }
    }
}

/// Half-open ranges of offsets `k`, with `None` as an unbounded end.
type OffsetRange = (u64, Option<u64>);

impl UlmProfile {
    /// Validates and normalizes: trailing head entries equal to the tail are
    /// dropped, adjacent bands with equal content are merged and trailing
    /// all-zero bands removed.
    pub fn new(p: u64, bands: Vec<Band>) -> Result<UlmProfile, ProfileError> {
        if !is_prime(p) {
            return Err(ProfileError::NotPrime(p));
        }
        let mut expected = Ordinal::zero();
        let mut out: Vec<Band> = Vec::new();
        for mut band in bands {
            if band.gamma_lo != expected {
                return Err(ProfileError::NotContiguous { expected, found: band.gamma_lo });
            }
            if band.gamma_lo >= band.gamma_hi {
                return Err(ProfileError::EmptyBand(band.gamma_lo, band.gamma_hi));
            }
            expected = band.gamma_hi.clone();
            band.trim();
            match out.last_mut() {
                Some(prev) if prev.same_content(&band) => prev.gamma_hi = band.gamma_hi,
                _ => out.push(band),
            }
        }
        while out.last().is_some_and(Band::is_zero) {
            out.pop();
        }
        Ok(UlmProfile { p, bands: out })
    }

    pub fn zero(p: u64) -> Result<UlmProfile, ProfileError> {
        Self::new(p, Vec::new())
    }

    /// Profile of a finite sequence `k ↦ f(k)`.
    pub fn from_finite(p: u64, f: &BTreeMap<u32, u64>) -> Result<UlmProfile, ProfileError> {
        let len = f.keys().next_back().map_or(0, |&k| k as usize + 1);
        let mut head = vec![UlmValue::ZERO; len];
        for (&k, &v) in f {
            head[k as usize] = UlmValue::Finite(v);
        }
        Self::new(p, vec![Band::new(Ordinal::zero(), Ordinal::nat(1), head, UlmValue::ZERO)])
    }

    /// Finite head values, including `Infinite`, in a single block.
    pub fn from_head(p: u64, head: Vec<UlmValue>) -> Result<UlmProfile, ProfileError> {
        Self::new(p, vec![Band::new(Ordinal::zero(), Ordinal::nat(1), head, UlmValue::ZERO)])
    }

    /// The Ulm sequence of an explicit finite group.
    pub fn of_group(g: &GroupSpec) -> UlmProfile {
        Self::from_finite(g.prime(), &g.ulm_invariants()).expect("group prime is prime")
    }

    /// Constant value `v` on every `β < ω·gamma_hi`.
    pub fn constant(p: u64, gamma_hi: Ordinal, v: UlmValue) -> Result<UlmProfile, ProfileError> {
        if gamma_hi.is_zero() {
            return Self::zero(p);
        }
        Self::new(p, vec![Band::new(Ordinal::zero(), gamma_hi, Vec::new(), v)])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// End of the covered γ-region; every value at `β ≥ ω·gamma_max` is 0.
    pub fn gamma_max(&self) -> Ordinal {
        self.bands.last().map_or(Ordinal::zero(), |b| b.gamma_hi.clone())
    }

    fn band_of(&self, gamma: &Ordinal) -> Option<&Band> {
        self.bands.iter().find(|b| &b.gamma_lo <= gamma && gamma < &b.gamma_hi)
    }

    pub fn lookup(&self, beta: &Ordinal) -> UlmValue {
        let (gamma, k) = beta.omega_decompose();
        self.band_of(&gamma).map_or(UlmValue::ZERO, |b| b.at(k))
    }

    /// Least ordinal above the support.
    pub fn length(&self) -> Ordinal {
        let Some(last) = self.bands.last() else {
            return Ordinal::zero();
        };
        if !last.tail.is_zero() {
            return Ordinal::omega().mul(&last.gamma_hi);
        }
        let top = last.head.len() as u64;
        match last.gamma_hi.pred() {
            Some(g) => Ordinal::omega_compose(&g, top),
            None => Ordinal::omega().mul(&last.gamma_hi),
        }
    }

    /// The explicit values when the length is finite and no value is
    /// infinite.
    pub fn finite_values(&self) -> Option<BTreeMap<u32, u64>> {
        self.length().as_nat()?;
        let mut out = BTreeMap::new();
        if let Some(b) = self.bands.first() {
            for (k, v) in b.head.iter().enumerate() {
                match v {
                    UlmValue::Finite(0) => {}
                    UlmValue::Finite(n) => {
                        out.insert(k as u32, *n);
                    }
                    UlmValue::Infinite => return None,
                }
            }
        }
        Some(out)
    }

    /// The explicit finite group with this profile, when there is one.
    pub fn realize(&self) -> Result<GroupSpec, ProfileError> {
        if self.length().as_nat().is_none() {
            return Err(ProfileError::NotFinite("length is infinite"));
        }
        let f = self.finite_values().ok_or(ProfileError::NotFinite("an invariant is infinite"))?;
        crate::pgroup::realize_finite_profile(self.p, &f).map_err(|e| match e {
            GroupError::NotPrime(p) => ProfileError::NotPrime(p),
            _ => ProfileError::NotFinite("cannot realize"),
        })
    }

    fn same_prime(&self, other: &UlmProfile) -> Result<(), ProfileError> {
        if self.p != other.p {
            return Err(ProfileError::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Checks `rel(f_self(β), f_other(β))` for all `lo ≤ β < hi`.
    fn holds_on_range(
        &self,
        other: &UlmProfile,
        lo: &Ordinal,
        hi: &Ordinal,
        rel: impl Fn(UlmValue, UlmValue) -> bool,
    ) -> Result<bool, ProfileError> {
        self.same_prime(other)?;
        if lo >= hi {
            return Ok(true);
        }
        let (gl, kl) = lo.omega_decompose();
        let (gh, kh) = hi.omega_decompose();
        let mut cuts: Vec<Ordinal> = vec![Ordinal::zero()];
        for b in self.bands.iter().chain(&other.bands) {
            cuts.push(b.gamma_hi.clone());
        }
        cuts.sort();
        cuts.dedup();
        let zero_band = Band::new(Ordinal::zero(), Ordinal::zero(), Vec::new(), UlmValue::ZERO);
        for w in cuts.windows(2) {
            let (g0, g1) = (&w[0], &w[1]);
            let ranges = offsets_in(g0, g1, &gl, kl, &gh, kh);
            if ranges.is_empty() {
                continue;
            }
            let a = self.band_of(g0).unwrap_or(&zero_band);
            let b = other.band_of(g0).unwrap_or(&zero_band);
            let head_len = a.head.len().max(b.head.len()) as u64;
            for (start, end) in ranges {
                let stop = end.map_or(head_len, |e| e.min(head_len));
                for k in start..stop {
                    if !rel(a.at(k), b.at(k)) {
                        return Ok(false);
                    }
                }
                if end.is_none_or(|e| e > head_len) && !rel(a.tail, b.tail) {
                    return Ok(false);
                }
            }
        }
        // beyond the last cut both sequences are 0
        Ok(true)
    }

    /// `f_self(β) = f_other(β)` for every `β < cutoff`.
    pub fn equal_below(&self, other: &UlmProfile, cutoff: &Ordinal) -> Result<bool, ProfileError> {
        self.holds_on_range(other, &Ordinal::zero(), cutoff, |a, b| a == b)
    }

    /// `f_self(β) ≤ f_other(β)` for every `lo ≤ β < hi`.
    pub fn leq_on_range(&self, other: &UlmProfile, lo: &Ordinal, hi: &Ordinal) -> Result<bool, ProfileError> {
        self.holds_on_range(other, lo, hi, |a, b| a <= b)
    }

    /// Whether `Σ_{γ ≥ β} f(γ)` is infinite: some value at or beyond `β` is
    /// infinite or infinitely many are nonzero.
    pub fn tail_infinite(&self, beta: &Ordinal) -> bool {
        let (gb, kb) = beta.omega_decompose();
        let next = gb.succ();
        for band in &self.bands {
            if band.gamma_lo <= gb && gb < band.gamma_hi {
                let from = kb as usize;
                if !band.tail.is_zero() || band.head.iter().skip(from).any(|&v| v == UlmValue::Infinite) {
                    return true;
                }
            }
            // blocks γ > γ_b of this band
            let start = if band.gamma_lo > next { band.gamma_lo.clone() } else { next.clone() };
            if start >= band.gamma_hi || band.is_zero() {
                continue;
            }
            if !band.tail.is_zero() || band.head.contains(&UlmValue::Infinite) {
                return true;
            }
            let span = band.gamma_hi.checked_sub(&start).expect("start < gamma_hi");
            if !span.is_finite() {
                return true;
            }
        }
        false
    }

    /// Support cofinal in the limit ordinal `ω·δ`.
    pub fn cofinal_in(&self, delta: &Ordinal) -> bool {
        if delta.is_zero() {
            return false;
        }
        match delta.pred() {
            Some(eps) => self.band_of(&eps).is_some_and(|b| !b.tail.is_zero()),
            None => {
                self.bands.iter().find(|b| &b.gamma_lo < delta && delta <= &b.gamma_hi).is_some_and(|b| !b.is_zero())
            }
        }
    }

    /// `Σ_{γ ≥ β} f(γ)` is infinite for every `β < min(length, cutoff)`.
    pub fn p_infinite_below(&self, cutoff: &Ordinal) -> bool {
        let m = std::cmp::min(self.length(), cutoff.clone());
        if m.is_zero() {
            return true;
        }
        match m.pred() {
            Some(prev) => self.tail_infinite(&prev),
            None => {
                let (delta, _) = m.omega_decompose();
                self.tail_infinite(&m) || self.cofinal_in(&delta)
            }
        }
    }

    /// The profile `β ↦ f(ω·α + β)`.
    pub fn tail_profile(&self, alpha: &Ordinal) -> UlmProfile {
        let mut bands = Vec::new();
        for b in &self.bands {
            if b.gamma_hi <= *alpha {
                continue;
            }
            let lo = if &b.gamma_lo > alpha { b.gamma_lo.clone() } else { alpha.clone() };
            let new_lo = lo.checked_sub(alpha).expect("alpha ≤ lo");
            let new_hi = b.gamma_hi.checked_sub(alpha).expect("alpha < hi");
            bands.push(Band::new(new_lo, new_hi, b.head.clone(), b.tail));
        }
        UlmProfile::new(self.p, bands).expect("shifted bands stay contiguous")
    }

    /// Values at `β < ω·alpha` only.
    pub fn restrict_blocks(&self, alpha: &Ordinal) -> UlmProfile {
        let mut bands = Vec::new();
        for b in &self.bands {
            if &b.gamma_lo >= alpha {
                break;
            }
            let hi = std::cmp::min(b.gamma_hi.clone(), alpha.clone());
            bands.push(Band::new(b.gamma_lo.clone(), hi, b.head.clone(), b.tail));
        }
        UlmProfile::new(self.p, bands).expect("restricted bands stay contiguous")
    }

    /// Whether the support is cofinal in every limit ordinal `μ ≤ length`,
    /// the condition for the profile to be the Ulm sequence of a countable
    /// reduced p-group.
    pub fn is_realizable(&self) -> bool {
        let len = self.length();
        for b in &self.bands {
            // μ = ω·(ε+1) with ε in the band
            if b.tail.is_zero() && Ordinal::omega().mul(&b.gamma_lo.succ()) <= len {
                return false;
            }
            // μ = ω·δ with δ a limit in (lo, hi]
            let next_limit = b.gamma_lo.limit_part().add(&Ordinal::omega());
            if b.is_zero() && next_limit <= b.gamma_hi && Ordinal::omega().mul(&next_limit) <= len {
                return false;
            }
        }
        true
    }

    /// For a realizable profile of length `ω·α` with `α` a limit, the
    /// profile agreeing with it below `ω·α` plus one invariant `f(ω·α) = 1`.
    pub fn witness_longer_profile(&self) -> Result<UlmProfile, ProfileError> {
        let len = self.length();
        let (alpha, n) = len.omega_decompose();
        if n != 0 || !alpha.is_limit() {
            return Err(ProfileError::NotLimitLength(len));
        }
        if !self.is_realizable() {
            return Err(ProfileError::Unrealizable);
        }
        let mut bands = self.restrict_blocks(&alpha).bands;
        let hi = bands.last().map_or(Ordinal::zero(), |b| b.gamma_hi.clone());
        if hi < alpha {
            bands.push(Band::new(hi, alpha.clone(), Vec::new(), UlmValue::ZERO));
        }
        bands.push(Band::new(alpha.clone(), alpha.succ(), vec![UlmValue::Finite(1)], UlmValue::ZERO));
        UlmProfile::new(self.p, bands)
    }
}

/// Offsets `k` such that `ω·γ + k ∈ [ω·γl + kl, ω·γh + kh)` for some
/// `γ ∈ [g0, g1)`.
fn offsets_in(g0: &Ordinal, g1: &Ordinal, gl: &Ordinal, kl: u64, gh: &Ordinal, kh: u64) -> Vec<OffsetRange> {
    let inside = |g: &Ordinal| g0 <= g && g < g1;
    let mut out = Vec::new();
    if gl == gh {
        if inside(gl) && kl < kh {
            out.push((kl, Some(kh)));
        }
        return out;
    }
    if inside(gl) {
        out.push((kl, None));
    }
    let first_interior = std::cmp::max(g0.clone(), gl.succ());
    if first_interior < std::cmp::min(g1.clone(), gh.clone()) {
        out.push((0, None));
    }
    if inside(gh) && kh > 0 {
        out.push((0, Some(kh)));
    }
    out
}

impl fmt::Display for UlmProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        if self.bands.is_empty() {
            return f.write_str(" zero");
        }
        for b in &self.bands {
            let head: Vec<String> = b.head.iter().map(UlmValue::to_string).collect();
            write!(f, " [{}, {}): [{}] then {}", b.gamma_lo, b.gamma_hi, head.join(","), b.tail)?;
        }
        Ok(())
    }
}
