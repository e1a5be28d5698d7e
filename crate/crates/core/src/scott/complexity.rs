//! Complexity classes `Σ_α`, `Π_α`, `d-Σ_α` of infinitary formulas and the
//! rules for combining them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ordinal::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Complexity {
    QuantifierFree,
    Sigma(Ordinal),
    Pi(Ordinal),
    /// A conjunction of a `Σ_α` and a `Π_α` formula.
    DSigma(Ordinal),
}

use Complexity::*;

impl Complexity {
    pub fn sigma(n: u64) -> Self {
        Sigma(Ordinal::nat(n))
    }

    pub fn pi(n: u64) -> Self {
        Pi(Ordinal::nat(n))
    }

    pub fn d_sigma(n: u64) -> Self {
        DSigma(Ordinal::nat(n))
    }

    /// The rank, 0 for quantifier-free formulas.
    pub fn rank(&self) -> Ordinal {
        match self {
            QuantifierFree => Ordinal::zero(),
            Sigma(a) | Pi(a) | DSigma(a) => a.clone(),
        }
    }

    /// Inclusion of classes: `Σ_a, Π_a ≤ d-Σ_a ≤ Σ_{a+1}, Π_{a+1}`.
    pub fn leq(&self, other: &Complexity) -> bool {
        match (self, other) {
            (QuantifierFree, _) => true,
            (_, QuantifierFree) => false,
            (Sigma(a), Sigma(b)) | (Pi(a), Pi(b)) | (DSigma(a), DSigma(b)) => a <= b,
            (Sigma(a), Pi(b)) | (Pi(a), Sigma(b)) => a < b,
            (Sigma(a), DSigma(b)) | (Pi(a), DSigma(b)) => a <= b,
            (DSigma(a), Sigma(b)) | (DSigma(a), Pi(b)) => a < b,
        }
    }

    pub fn negate(&self) -> Complexity {
        match self {
            QuantifierFree => QuantifierFree,
            Sigma(a) => Pi(a.clone()),
            Pi(a) => Sigma(a.clone()),
            DSigma(a) => Sigma(a.succ()),
        }
    }

    /// Class of `φ ∧ ψ`.
    pub fn and(&self, other: &Complexity) -> Complexity {
        match (self, other) {
            (QuantifierFree, x) | (x, QuantifierFree) => x.clone(),
            (Sigma(a), Sigma(b)) => Sigma(max(a, b)),
            (Pi(a), Pi(b)) => Pi(max(a, b)),
            (Sigma(a), Pi(b)) | (Pi(b), Sigma(a)) => match a.cmp(b) {
                Ordering::Greater => Sigma(a.clone()),
                Ordering::Less => Pi(b.clone()),
                Ordering::Equal => DSigma(a.clone()),
            },
            (DSigma(a), DSigma(b)) => DSigma(max(a, b)),
            (DSigma(a), x) | (x, DSigma(a)) => {
                if x.rank() > *a {
                    x.clone()
                } else {
                    DSigma(a.clone())
                }
            }
        }
    }

    /// Class of `φ ∨ ψ`.
    pub fn or(&self, other: &Complexity) -> Complexity {
        match (self, other) {
            (QuantifierFree, x) | (x, QuantifierFree) => x.clone(),
            (Sigma(a), Sigma(b)) => Sigma(max(a, b)),
            (Pi(a), Pi(b)) => Pi(max(a, b)),
            (Sigma(a), Pi(b)) | (Pi(b), Sigma(a)) => match a.cmp(b) {
                Ordering::Greater => Sigma(a.clone()),
                Ordering::Less => Pi(b.clone()),
                Ordering::Equal => Sigma(a.succ()),
            },
            (DSigma(a), DSigma(b)) => Sigma(max(a, b).succ()),
            (DSigma(a), x) | (x, DSigma(a)) => {
                if x.rank() > *a {
                    x.clone()
                } else {
                    Sigma(a.succ())
                }
            }
        }
    }

    /// Class of `∃x̄ φ`.
    pub fn exists(&self) -> Complexity {
        match self {
            QuantifierFree => Complexity::sigma(1),
            Sigma(a) => Sigma(a.clone()),
            Pi(a) | DSigma(a) => Sigma(a.succ()),
        }
    }

    /// Class of `∀x̄ φ`.
    pub fn forall(&self) -> Complexity {
        match self {
            QuantifierFree => Complexity::pi(1),
            Pi(a) => Pi(a.clone()),
            Sigma(a) | DSigma(a) => Pi(a.succ()),
        }
    }

    /// Least `δ` such that a countable conjunction of formulas of this class
    /// is `Π_δ`.
    pub fn conjunct_weight(&self) -> Ordinal {
        match self {
            QuantifierFree => Ordinal::nat(1),
            Pi(a) => a.clone(),
            Sigma(a) | DSigma(a) => a.succ(),
        }
    }

    /// Least `δ` such that a countable disjunction of formulas of this class
    /// is `Σ_δ`.
    pub fn disjunct_weight(&self) -> Ordinal {
        match self {
            QuantifierFree => Ordinal::nat(1),
            Sigma(a) => a.clone(),
            Pi(a) | DSigma(a) => a.succ(),
        }
    }
}

fn max(a: &Ordinal, b: &Ordinal) -> Ordinal {
    std::cmp::max(a, b).clone()
}

/// Supremum of an increasing sequence that grows like its samples `c2 < c3`:
/// the samples agree on a common prefix and first differ at a term
/// `ω^e`, so the sequence climbs through `prefix + ω^e·n` towards
/// `prefix + ω^{e+1}`.
pub fn sup_of_sequence(c2: &Ordinal, c3: &Ordinal) -> Ordinal {
    debug_assert!(c2 < c3);
    let t2 = c2.terms();
    let t3 = c3.terms();
    let i = t2.iter().zip(t3).take_while(|(a, b)| a == b).count();
    let e = t3[i].0;
    Ordinal::from_terms(t3[..i].iter().copied()).add(&Ordinal::monomial(e + 1, 1))
}

fn rank_text(a: &Ordinal) -> String {
    let s = a.to_string();
    if s.len() > 1 {
        format!("{{{s}}}")
    } else {
        s
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantifierFree => f.write_str("QF"),
            Sigma(a) => write!(f, "Sigma_{}", rank_text(a)),
            Pi(a) => write!(f, "Pi_{}", rank_text(a)),
            DSigma(a) => write!(f, "d-Sigma_{}", rank_text(a)),
        }
    }
}

impl FromStr for Complexity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "QF" {
            return Ok(QuantifierFree);
        }
        let (shape, rank) = s.split_once('_').ok_or_else(|| format!("invalid complexity `{s}`"))?;
        let rank = rank.trim_start_matches('{').trim_end_matches('}');
        let rank: Ordinal = rank.parse().map_err(|_| format!("invalid complexity `{s}`"))?;
        match shape {
            "Sigma" => Ok(Sigma(rank)),
            "Pi" => Ok(Pi(rank)),
            "d-Sigma" => Ok(DSigma(rank)),
            _ => Err(format!("invalid complexity `{s}`")),
        }
    }
}

impl Serialize for Complexity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Complexity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn order() {
        let s2 = Complexity::sigma(2);
        let p2 = Complexity::pi(2);
        let d2 = Complexity::d_sigma(2);
        let s3 = Complexity::sigma(3);
        assert!(s2.leq(&d2) && p2.leq(&d2));
        assert!(d2.leq(&s3) && d2.leq(&Complexity::pi(3)));
        assert!(!s2.leq(&p2) && !p2.leq(&s2));
        assert!(!d2.leq(&s2));
        assert!(QuantifierFree.leq(&Complexity::pi(1)));
        assert!(Pi(o("w")).leq(&Pi(o("w+1"))));
    }

    #[test]
    fn connectives() {
        let s1 = Complexity::sigma(1);
        let p1 = Complexity::pi(1);
        assert_eq!(s1.and(&p1), Complexity::d_sigma(1));
        assert_eq!(s1.or(&p1), Complexity::sigma(2));
        assert_eq!(Complexity::sigma(2).and(&p1), Complexity::sigma(2));
        assert_eq!(Complexity::d_sigma(2).and(&Complexity::pi(2)), Complexity::d_sigma(2));
        assert_eq!(Complexity::d_sigma(2).and(&Complexity::pi(3)), Complexity::pi(3));
        assert_eq!(Complexity::d_sigma(2).negate(), Complexity::sigma(3));
        assert_eq!(QuantifierFree.exists(), s1);
        assert_eq!(p1.exists(), Complexity::sigma(2));
        assert_eq!(Complexity::d_sigma(1).exists(), Complexity::sigma(2));
        assert_eq!(s1.forall(), Complexity::pi(2));
        assert_eq!(Complexity::sigma(2).conjunct_weight(), o("3"));
        assert_eq!(Complexity::pi(2).conjunct_weight(), o("2"));
    }

    #[test]
    fn sup_examples() {
        assert_eq!(sup_of_sequence(&o("5"), &o("7")), o("w"));
        assert_eq!(sup_of_sequence(&o("w*2"), &o("w*3")), o("w^2"));
        assert_eq!(sup_of_sequence(&o("w^2+w*2+1"), &o("w^2+w*3+1")), o("w^2*2"));
    }

    #[test]
    fn text() {
        assert_eq!(Complexity::pi(3).to_string(), "Pi_3");
        assert_eq!(Pi(o("w+1")).to_string(), "Pi_{w+1}");
        assert_eq!(Complexity::d_sigma(2).to_string(), "d-Sigma_2");
        for c in [QuantifierFree, Pi(o("w^2+1")), Complexity::d_sigma(4), Complexity::sigma(1)] {
            assert_eq!(c.to_string().parse::<Complexity>().unwrap(), c);
        }
    }
}
