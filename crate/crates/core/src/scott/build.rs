//! Scott sentences of Ulm profiles and their classification.

use std::fmt;

use serde::Serialize;

use super::complexity::Complexity;
use super::formula::{complexity_of, theta, FamilyRule, Formula, IndexSet, LinearTerm, Named, Var};
use super::ScottError;
use crate::backforth::{symbolic_leq, BfVerdict};
use crate::ordinal::{scott_index, Ordinal};
use crate::profile::{ProfileError, UlmProfile, UlmValue};

/// `φ_β(x)`: `x` lies in `p^β·G`.
pub fn subgroup_formula(p: u64, level: &Ordinal, x: Var) -> Formula {
    Formula::named(Named::Member { p, level: level.clone(), term: LinearTerm::var(x) })
}

/// `θ^value_level`: the Ulm invariant at `level` equals `value`.
pub fn build_theta(p: u64, level: &Ordinal, value: UlmValue) -> Result<Formula, ScottError> {
    theta(p, level.clone(), value)
}

/// `L_λ`: the group has length exactly `λ`.
pub fn build_length_sentence(p: u64, lambda: &Ordinal) -> Formula {
    let mut parts = vec![Formula::named(Named::Vanishes { p, level: lambda.clone() })];
    let (gamma, n) = lambda.omega_decompose();
    if !gamma.is_zero() {
        parts.push(Formula::big_and(
            IndexSet::Blocks { gamma_lo: Ordinal::zero(), gamma_hi: gamma.clone(), k_from: 0, k_to: None },
            FamilyRule::Nonzero { p },
        ));
    }
    for k in 0..n {
        parts.push(Formula::named(Named::NonzeroAt { p, level: Ordinal::omega_compose(&gamma, k) }));
    }
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        Formula::and(parts)
    }
}

/// The Scott sentence `Φ_G` of the countable reduced p-group with profile
/// `profile`: its length, its Ulm invariants below the length, and
/// torsion.
pub fn build_phi_g(profile: &UlmProfile) -> Result<Formula, ScottError> {
    if !profile.is_realizable() {
        return Err(ProfileError::Unrealizable.into());
    }
    let p = profile.prime();
    let lambda = profile.length();
    if lambda.is_zero() {
        return Ok(build_length_sentence(p, &lambda));
    }
    let (gamma, n) = lambda.omega_decompose();
    let mut parts = vec![build_length_sentence(p, &lambda)];
    for band in profile.bands() {
        let hi = std::cmp::min(&band.gamma_hi, &gamma).clone();
        if band.gamma_lo >= hi {
            continue;
        }
        let blocks = |k_from: u64, k_to: Option<u64>| IndexSet::Blocks {
            gamma_lo: band.gamma_lo.clone(),
            gamma_hi: hi.clone(),
            k_from,
            k_to,
        };
        for (k, v) in band.head.iter().enumerate() {
            let k = k as u64;
            parts.push(Formula::big_and(blocks(k, Some(k + 1)), FamilyRule::Theta { p, value: *v }));
        }
        parts.push(Formula::big_and(blocks(band.head.len() as u64, None), FamilyRule::Theta { p, value: band.tail }));
    }
    for k in 0..n {
        let level = Ordinal::omega_compose(&gamma, k);
        parts.push(theta(p, level.clone(), profile.lookup(&level))?);
    }
    parts.push(Formula::named(Named::Torsion { p }));
    Ok(Formula::and(parts))
}

/// Scott sentence of `(Z_{p^n})^ω`, a direct sum of countably many copies
/// of `Z_{p^n}`, written with two alternations.
pub fn omega_power_sentence(p: u64, n: u64) -> Result<Formula, ScottError> {
    let pn = |k: u64| -> Result<i64, ScottError> {
        u32::try_from(k)
            .ok()
            .and_then(|k| p.checked_pow(k))
            .and_then(|v| i64::try_from(v).ok())
            .ok_or_else(|| ScottError::Overflow(format!("{p}^{k}")))
    };
    let x = LinearTerm::var(0);
    let exponent = Formula::forall(vec![0], Formula::eq_zero(LinearTerm::scaled(pn(n)?, 0)));
    let exact_orders = Formula::forall(
        vec![0],
        Formula::big_or(IndexSet::Naturals { from: 0, to: None }, FamilyRule::ExactOrder { p, var: 0 }),
    );
    let many = Formula::big_and(IndexSet::Naturals { from: 1, to: None }, FamilyRule::ManyOfOrder { p, n });
    let lift = n.checked_sub(1).ok_or_else(|| ScottError::Overflow("exponent 0".into()))?;
    let divisible = Formula::forall(
        vec![0],
        Formula::or(vec![
            Formula::eq_zero(x.clone()),
            Formula::neq_zero(LinearTerm::scaled(pn(1)?, 0)),
            Formula::exists(vec![1], Formula::eq_zero(x.plus(&LinearTerm::scaled(-pn(lift)?, 1))?)),
        ]),
    );
    Ok(Formula::and(vec![exponent, exact_orders, many, divisible]))
}

/// Upper bound on the Scott complexity of a profile, with the exact value
/// where it is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub upper: Complexity,
    pub upper_reason: String,
    pub exact: Option<Complexity>,
    pub exact_reason: Option<String>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "upper: {} ({})", self.upper, self.upper_reason)?;
        match (&self.exact, &self.exact_reason) {
            (Some(c), Some(r)) => write!(f, "; exact: {c} ({r})"),
            (Some(c), None) => write!(f, "; exact: {c}"),
            _ => f.write_str("; exact: open"),
        }
    }
}

pub fn classify(profile: &UlmProfile) -> Result<Classification, ScottError> {
    if !profile.is_realizable() {
        return Err(ProfileError::Unrealizable.into());
    }
    let lambda = profile.length();
    if lambda.is_zero() {
        return Ok(Classification {
            upper: Complexity::pi(1),
            upper_reason: "trivial group, described by A x0 (x0 = 0)".into(),
            exact: Some(Complexity::pi(1)),
            exact_reason: Some("trivial group".into()),
        });
    }
    let (gamma, n) = lambda.omega_decompose();
    let (upper, upper_reason) = if n == 0 {
        (Complexity::Pi(scott_index(&gamma, 1)), format!("length {lambda} is a limit ordinal"))
    } else {
        let infinite_top = (0..n).any(|k| profile.lookup(&Ordinal::omega_compose(&gamma, k)) == UlmValue::Infinite);
        if infinite_top {
            (
                Complexity::Pi(scott_index(&gamma, 3)),
                format!("length {lambda} with an infinite invariant in the last block"),
            )
        } else {
            (
                Complexity::DSigma(scott_index(&gamma, 2)),
                format!("length {lambda} with finite invariants in the last block"),
            )
        }
    };
    let (exact, exact_reason) = if n == 0 && gamma.is_limit() {
        (Some(upper.clone()), Some(format!("a longer group agrees with it up to level {gamma}, limit length")))
    } else if let Some(len) = lambda.as_nat() {
        let values: Vec<UlmValue> = (0..len).map(|k| profile.lookup(&Ordinal::nat(k))).collect();
        let infinite = values.iter().filter(|v| **v == UlmValue::Infinite).count();
        let nonzero = values.iter().filter(|v| !v.is_zero()).count();
        if infinite >= 2 {
            (Some(Complexity::pi(3)), Some("two infinite invariants at finite levels".to_string()))
        } else if nonzero == 1 && values[len as usize - 1] == UlmValue::Infinite {
            (Some(Complexity::pi(2)), Some(format!("direct sum of infinitely many copies of Z_{{p^{len}}}")))
        } else {
            (None, None)
        }
    } else {
        (None, None)
    };
    Ok(Classification { upper, upper_reason, exact, exact_reason })
}

/// Evidence that the Scott complexity of a profile of limit length `ω·α`,
/// `α` a limit, is exactly `Π_{2α+1}`: a non-isomorphic profile that the
/// back-and-forth relations cannot separate up to level `α`, together with
/// the complexity of the constructed sentence.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub profile: UlmProfile,
    pub witness: UlmProfile,
    pub alpha: Ordinal,
    pub forward: BfVerdict,
    pub backward: BfVerdict,
    /// Sampled even levels `2·α[n] + 2` below `α` and whether both
    /// directions hold there.
    pub sampled: Vec<(Ordinal, bool)>,
    pub complexity: Complexity,
    pub expected: Complexity,
}

impl Certificate {
    pub fn lengths_differ(&self) -> bool {
        self.profile.length() != self.witness.length()
    }

    pub fn is_valid(&self) -> bool {
        self.lengths_differ()
            && self.forward.holds()
            && self.backward.holds()
            && self.sampled.iter().all(|(_, ok)| *ok)
            && self.complexity == self.expected
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "profile:   {} (length {})", self.profile, self.profile.length())?;
        writeln!(f, "witness:   {} (length {})", self.witness, self.witness.length())?;
        writeln!(f, "level {}:  forward {}, backward {}", self.alpha, self.forward, self.backward)?;
        for (level, ok) in &self.sampled {
            writeln!(f, "level {level}: {}", if *ok { "both hold" } else { "separated" })?;
        }
        write!(f, "sentence:  {} (expected {})", self.complexity, self.expected)
    }
}

pub fn certify_exactness(profile: &UlmProfile) -> Result<Certificate, ScottError> {
    let lambda = profile.length();
    let (alpha, n) = lambda.omega_decompose();
    if n != 0 || !alpha.is_limit() {
        return Err(ProfileError::NotLimitLength(lambda).into());
    }
    let witness = profile.witness_longer_profile()?;
    let forward = symbolic_leq(profile, &witness, &alpha)?;
    let backward = symbolic_leq(&witness, profile, &alpha)?;
    let mut sampled = Vec::new();
    for k in 1..=3 {
        let below = alpha.fundamental(k).expect("limit");
        let level = scott_index(&below, 2);
        let ok = symbolic_leq(profile, &witness, &level)?.holds() && symbolic_leq(&witness, profile, &level)?.holds();
        sampled.push((level, ok));
    }
    let complexity = complexity_of(&build_phi_g(profile)?)?;
    Ok(Certificate {
        profile: profile.clone(),
        witness,
        alpha: alpha.clone(),
        forward,
        backward,
        sampled,
        complexity,
        expected: Complexity::Pi(scott_index(&alpha, 1)),
    })
}
