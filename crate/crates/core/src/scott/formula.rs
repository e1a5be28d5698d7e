//! Syntax of `L_{ω1,ω}` formulas over abelian groups, with lazily expanded
//! abbreviations and countable families.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::complexity::{sup_of_sequence, Complexity};
use super::ScottError;
use crate::ordinal::Ordinal;
use crate::profile::UlmValue;

pub type Var = u32;

/// An integer combination `Σ c_i·x_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(Var, i64)>", into = "Vec<(Var, i64)>")]
pub struct LinearTerm(BTreeMap<Var, i64>);

impl From<Vec<(Var, i64)>> for LinearTerm {
    fn from(v: Vec<(Var, i64)>) -> Self {
        LinearTerm(v.into_iter().filter(|&(_, c)| c != 0).collect())
    }
}

impl From<LinearTerm> for Vec<(Var, i64)> {
    fn from(t: LinearTerm) -> Self {
        t.0.into_iter().collect()
    }
}

impl LinearTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(x: Var) -> Self {
        Self::scaled(1, x)
    }

    pub fn scaled(c: i64, x: Var) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(x, c);
        }
        LinearTerm(m)
    }

    pub fn plus(&self, other: &LinearTerm) -> Result<LinearTerm, ScottError> {
        let mut m = self.0.clone();
        for (&x, &c) in &other.0 {
            let e = m.entry(x).or_insert(0);
            *e = e.checked_add(c).ok_or_else(|| ScottError::Overflow(format!("{self} + {other}")))?;
            if *e == 0 {
                m.remove(&x);
            }
        }
        Ok(LinearTerm(m))
    }

    pub fn times(&self, k: i64) -> Result<LinearTerm, ScottError> {
        let mut m = BTreeMap::new();
        for (&x, &c) in &self.0 {
            let v = c.checked_mul(k).ok_or_else(|| ScottError::Overflow(format!("{k}*({self})")))?;
            if v != 0 {
                m.insert(x, v);
            }
        }
        Ok(LinearTerm(m))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.0.iter().map(|(&x, &c)| (x, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Least variable index not occurring in the term.
    pub fn fresh(&self) -> Var {
        self.0.keys().next_back().map_or(0, |x| x + 1)
    }
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (x, c)) in self.0.iter().enumerate() {
            let (sign, a) = if *c < 0 { ("-", c.unsigned_abs()) } else { ("+", *c as u64) };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if a != 1 {
                write!(f, "{a}*")?;
            }
            write!(f, "x{x}")?;
        }
        Ok(())
    }
}

fn power(p: u64, m: u64) -> Result<i64, ScottError> {
    u32::try_from(m)
        .ok()
        .and_then(|m| p.checked_pow(m))
        .and_then(|v| i64::try_from(v).ok())
        .ok_or_else(|| ScottError::Overflow(format!("{p}^{m}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Formula {
    /// `term = 0`.
    Atom {
        term: LinearTerm,
    },
    Not {
        arg: Box<Formula>,
    },
    And {
        args: Vec<Formula>,
    },
    Or {
        args: Vec<Formula>,
    },
    BigAnd {
        family: Family,
    },
    BigOr {
        family: Family,
    },
    Exists {
        vars: Vec<Var>,
        body: Box<Formula>,
    },
    Forall {
        vars: Vec<Var>,
        body: Box<Formula>,
    },
    /// `∃x (φ_level(x) ∧ body)`.
    ExistsIn {
        p: u64,
        var: Var,
        level: Ordinal,
        body: Box<Formula>,
    },
    /// `∀x (φ_level(x) → body)`.
    ForallIn {
        p: u64,
        var: Var,
        level: Ordinal,
        body: Box<Formula>,
    },
    Named {
        def: Named,
    },
}

impl Formula {
    pub fn eq_zero(term: LinearTerm) -> Formula {
        Formula::Atom { term }
    }

    pub fn neq_zero(term: LinearTerm) -> Formula {
        Formula::not(Formula::eq_zero(term))
    }

    pub fn truth() -> Formula {
        Formula::eq_zero(LinearTerm::zero())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not { arg: Box::new(f) }
    }

    pub fn and(args: Vec<Formula>) -> Formula {
        Formula::And { args }
    }

    pub fn or(args: Vec<Formula>) -> Formula {
        Formula::Or { args }
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Formula {
        Formula::Exists { vars, body: Box::new(body) }
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        Formula::Forall { vars, body: Box::new(body) }
    }

    pub fn named(def: Named) -> Formula {
        Formula::Named { def }
    }

    pub fn big_and(index: IndexSet, rule: FamilyRule) -> Formula {
        Formula::BigAnd { family: Family { index, rule } }
    }

    pub fn big_or(index: IndexSet, rule: FamilyRule) -> Formula {
        Formula::BigOr { family: Family { index, rule } }
    }

    /// `ψ_level(t) ≡ φ_level(t) ∧ p·t = 0`.
    pub fn socle_member(p: u64, level: Ordinal, term: LinearTerm) -> Result<Formula, ScottError> {
        let pt = term.times(power(p, 1)?)?;
        Ok(Formula::and(vec![Formula::named(Named::Member { p, level, term }), Formula::eq_zero(pt)]))
    }

    /// Unfolds a relativized quantifier into a plain one.
    pub fn unguard(&self) -> Option<Formula> {
        match self {
            Formula::ExistsIn { p, var, level, body } => {
                Some(Formula::exists(vec![*var], Formula::and(vec![member(*p, level.clone(), *var), (**body).clone()])))
            }
            Formula::ForallIn { p, var, level, body } => Some(Formula::forall(
                vec![*var],
                Formula::or(vec![Formula::not(member(*p, level.clone(), *var)), (**body).clone()]),
            )),
            _ => None,
        }
    }
}

fn member(p: u64, level: Ordinal, x: Var) -> Formula {
    Formula::named(Named::Member { p, level, term: LinearTerm::var(x) })
}

/// Abbreviations, expanded on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Named {
    /// `φ_level(term)`: the term lies in `p^level·G`.
    Member { p: u64, level: Ordinal, term: LinearTerm },
    /// `θ̂^count_level`: `P_level / P_{level+1}` has dimension at least `count`.
    DimAtLeast { p: u64, level: Ordinal, count: u64 },
    /// `∀x (φ_level(x) → x = 0)`.
    Vanishes { p: u64, level: Ordinal },
    /// `∃x (φ_level(x) ∧ x ≠ 0)`.
    NonzeroAt { p: u64, level: Ordinal },
    /// `∀x ⋁_m p^m·x = 0`.
    Torsion { p: u64 },
}

impl Named {
    pub fn prime(&self) -> u64 {
        match self {
            Named::Member { p, .. }
            | Named::DimAtLeast { p, .. }
            | Named::Vanishes { p, .. }
            | Named::NonzeroAt { p, .. }
            | Named::Torsion { p } => *p,
        }
    }

    /// The defining formula, one layer deep.
    pub fn expand(&self) -> Result<Formula, ScottError> {
        Ok(match self {
            Named::Member { p, level, term } => {
                if level.is_zero() {
                    Formula::truth()
                } else if let Some(prev) = level.pred() {
                    let y = term.fresh();
                    let py = LinearTerm::scaled(power(*p, 1)?, y);
                    Formula::exists(
                        vec![y],
                        Formula::and(vec![
                            Formula::eq_zero(py.plus(&term.times(-1)?)?),
                            Formula::named(Named::Member { p: *p, level: prev, term: LinearTerm::var(y) }),
                        ]),
                    )
                } else {
                    Formula::big_and(
                        IndexSet::Naturals { from: 0, to: None },
                        FamilyRule::Fundamental { p: *p, level: level.clone(), term: term.clone() },
                    )
                }
            }
            Named::DimAtLeast { p, level, count } => {
                let vars: Vec<Var> = (0..*count)
                    .map(|i| Var::try_from(i).map_err(|_| ScottError::Overflow(format!("{count} variables"))))
                    .collect::<Result<_, _>>()?;
                let mut conj = vars
                    .iter()
                    .map(|&x| Formula::socle_member(*p, level.clone(), LinearTerm::var(x)))
                    .collect::<Result<Vec<_>, _>>()?;
                if *count > 0 {
                    conj.push(Formula::big_and(
                        IndexSet::Vectors { p: *p, dim: *count },
                        FamilyRule::Independent { p: *p, level: level.succ(), vars: vars.clone() },
                    ));
                }
                Formula::exists(vars, Formula::and(conj))
            }
            Named::Vanishes { p, level } => Formula::ForallIn {
                p: *p,
                var: 0,
                level: level.clone(),
                body: Box::new(Formula::eq_zero(LinearTerm::var(0))),
            },
            Named::NonzeroAt { p, level } => Formula::ExistsIn {
                p: *p,
                var: 0,
                level: level.clone(),
                body: Box::new(Formula::neq_zero(LinearTerm::var(0))),
            },
            Named::Torsion { p } => Formula::forall(
                vec![0],
                Formula::big_or(IndexSet::Naturals { from: 0, to: None }, FamilyRule::TorsionOrder { p: *p, var: 0 }),
            ),
        })
    }

    fn key(&self) -> NamedKey {
        match self {
            Named::Member { level, .. } => NamedKey::Member(level.clone()),
            Named::DimAtLeast { level, count, .. } => NamedKey::Dim(level.clone(), *count),
            Named::Vanishes { level, .. } => NamedKey::Vanishes(level.clone()),
            Named::NonzeroAt { level, .. } => NamedKey::Nonzero(level.clone()),
            Named::Torsion { .. } => NamedKey::Torsion,
        }
    }
}

/// Shape of a [`Named`] abbreviation, which alone determines its complexity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum NamedKey {
    Member(Ordinal),
    Dim(Ordinal, u64),
    Vanishes(Ordinal),
    Nonzero(Ordinal),
    Torsion,
}

/// A countable conjunction or disjunction: one member per index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    pub index: IndexSet,
    pub rule: FamilyRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum IndexSet {
    /// `n` with `from ≤ n < to`.
    Naturals { from: u64, to: Option<u64> },
    /// Ordinals `ω·γ + k` with `gamma_lo ≤ γ < gamma_hi` and `k_from ≤ k < k_to`.
    Blocks { gamma_lo: Ordinal, gamma_hi: Ordinal, k_from: u64, k_to: Option<u64> },
    /// Nonzero vectors of `Z_p^dim`.
    Vectors { p: u64, dim: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Nat(u64),
    Ord(Ordinal),
    Vector(Vec<u64>),
}

/// Which members of a family decide its complexity, for families whose
/// members grow with the index.
enum Probe {
    Empty,
    /// Least and greatest members of a finite family.
    Finite(Index, Index),
    /// A countable family whose members stop growing at this index.
    Attained(Index),
    /// Two consecutive samples of an unbounded climb.
    Sampled(Index, Index),
}

impl IndexSet {
    fn probe(&self) -> Probe {
        match self {
            IndexSet::Naturals { from, to: Some(to) } => {
                if from >= to {
                    Probe::Empty
                } else {
                    Probe::Finite(Index::Nat(*from), Index::Nat(to - 1))
                }
            }
            IndexSet::Naturals { from, to: None } => Probe::Sampled(Index::Nat(from + 2), Index::Nat(from + 3)),
            IndexSet::Vectors { p, dim } => {
                if *dim == 0 {
                    return Probe::Empty;
                }
                let mut first = vec![0; *dim as usize];
                first[0] = 1;
                Probe::Finite(Index::Vector(first), Index::Vector(vec![p - 1; *dim as usize]))
            }
            IndexSet::Blocks { gamma_lo, gamma_hi, k_from, k_to } => {
                if gamma_lo >= gamma_hi || k_to.is_some_and(|t| t <= *k_from) {
                    return Probe::Empty;
                }
                let at = |g: &Ordinal, k: u64| Index::Ord(Ordinal::omega_compose(g, k));
                match (gamma_hi.pred(), k_to) {
                    (Some(top), Some(t)) => {
                        if gamma_hi.is_finite() {
                            Probe::Finite(at(gamma_lo, *k_from), at(&top, t - 1))
                        } else {
                            Probe::Attained(at(&top, t - 1))
                        }
                    }
                    (Some(top), None) => Probe::Sampled(at(&top, k_from + 2), at(&top, k_from + 3)),
                    (None, _) => {
                        let n0 = (0..).find(|&n| gamma_hi.fundamental(n).is_some_and(|g| &g >= gamma_lo)).unwrap_or(0);
                        let g = |n| gamma_hi.fundamental(n).expect("limit ordinal");
                        Probe::Sampled(at(&g(n0 + 2), *k_from), at(&g(n0 + 3), *k_from))
                    }
                }
            }
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Naturals { from: 0, to: None } => f.write_str("n in w"),
            IndexSet::Naturals { from, to: None } => write!(f, "n >= {from}"),
            IndexSet::Naturals { from, to: Some(to) } => write!(f, "{from} <= n < {to}"),
            IndexSet::Blocks { gamma_lo, gamma_hi, k_from, k_to } => {
                write!(f, "a = w*g+k, {gamma_lo} <= g < {gamma_hi}, ")?;
                match k_to {
                    Some(t) => write!(f, "{k_from} <= k < {t}"),
                    None => write!(f, "k >= {k_from}"),
                }
            }
            IndexSet::Vectors { p, dim } => write!(f, "v in Z{p}^{dim} \\ 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum FamilyRule {
    /// `n ↦ φ_{level[n]}(term)` along the fundamental sequence of a limit.
    Fundamental { p: u64, level: Ordinal, term: LinearTerm },
    /// `m ↦ θ̂^m_level`.
    DimensionAll { p: u64, level: Ordinal },
    /// `α ↦ θ^value_α`.
    Theta { p: u64, value: UlmValue },
    /// `α ↦ ∃x (φ_α(x) ∧ x ≠ 0)`.
    Nonzero { p: u64 },
    /// `v ↦ ¬ψ_level(Σ v_i·x_i)`.
    Independent { p: u64, level: Ordinal, vars: Vec<Var> },
    /// `m ↦ p^m·x = 0`.
    TorsionOrder { p: u64, var: Var },
    /// `m ↦ x` has order exactly `p^m`.
    ExactOrder { p: u64, var: Var },
    /// `m ↦` there are `m` distinct elements of order at least `p^n`.
    ManyOfOrder { p: u64, n: u64 },
}

impl FamilyRule {
    pub fn prime(&self) -> u64 {
        match self {
            FamilyRule::Fundamental { p, .. }
            | FamilyRule::DimensionAll { p, .. }
            | FamilyRule::Theta { p, .. }
            | FamilyRule::Nonzero { p }
            | FamilyRule::Independent { p, .. }
            | FamilyRule::TorsionOrder { p, .. }
            | FamilyRule::ExactOrder { p, .. }
            | FamilyRule::ManyOfOrder { p, .. } => *p,
        }
    }

    pub fn member(&self, idx: &Index) -> Result<Formula, ScottError> {
        let bad = || ScottError::Overflow(format!("index {idx:?} for {self:?}"));
        Ok(match (self, idx) {
            (FamilyRule::Fundamental { p, level, term }, Index::Nat(n)) => Formula::named(Named::Member {
                p: *p,
                level: level.fundamental(*n).ok_or_else(bad)?,
                term: term.clone(),
            }),
            (FamilyRule::DimensionAll { p, level }, Index::Nat(m)) => {
                Formula::named(Named::DimAtLeast { p: *p, level: level.clone(), count: *m })
            }
            (FamilyRule::Theta { p, value }, Index::Ord(a)) => theta(*p, a.clone(), *value)?,
            (FamilyRule::Nonzero { p }, Index::Ord(a)) => Formula::named(Named::NonzeroAt { p: *p, level: a.clone() }),
            (FamilyRule::Independent { p, level, vars }, Index::Vector(v)) => {
                let mut t = LinearTerm::zero();
                for (&x, &c) in vars.iter().zip(v) {
                    t = t.plus(&LinearTerm::scaled(i64::try_from(c).map_err(|_| bad())?, x))?;
                }
                Formula::not(Formula::socle_member(*p, level.clone(), t)?)
            }
            (FamilyRule::TorsionOrder { p, var }, Index::Nat(m)) => {
                Formula::eq_zero(LinearTerm::scaled(power(*p, *m)?, *var))
            }
            (FamilyRule::ExactOrder { p, var }, Index::Nat(m)) => {
                let q = power(*p, *m)?;
                let mut conj = vec![Formula::eq_zero(LinearTerm::scaled(q, *var))];
                conj.extend((1..q).map(|k| Formula::neq_zero(LinearTerm::scaled(k, *var))));
                Formula::and(conj)
            }
            (FamilyRule::ManyOfOrder { p, n }, Index::Nat(m)) => {
                let q = power(*p, *n)?;
                let m = Var::try_from(*m).map_err(|_| bad())?;
                let mut conj = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        conj.push(Formula::neq_zero(LinearTerm::var(i).plus(&LinearTerm::scaled(-1, j))?));
                    }
                }
                for i in 0..m {
                    conj.extend((1..q).map(|k| Formula::neq_zero(LinearTerm::scaled(k, i))));
                }
                Formula::exists((0..m).collect(), Formula::and(conj))
            }
            _ => return Err(bad()),
        })
    }

    fn schema(&self) -> String {
        match self {
            FamilyRule::Fundamental { level, term, .. } => format!("phi_{{{level}[n]}}({term})"),
            FamilyRule::DimensionAll { level, .. } => format!("dim_{{{level}}} >= n"),
            FamilyRule::Theta { value: UlmValue::Infinite, .. } => "AND[n in w]{dim_{a} >= n}".to_string(),
            FamilyRule::Theta { value: UlmValue::Finite(m), .. } => {
                format!("dim_{{a}} >= {m} /\\ ~dim_{{a}} >= {}", m + 1)
            }
            FamilyRule::Nonzero { .. } => "G_{a} != 0".to_string(),
            FamilyRule::Independent { p, level, vars } => {
                let xs: Vec<String> = vars.iter().map(|x| format!("x{x}")).collect();
                let t = format!("v.({})", xs.join(","));
                format!("~(phi_{{{level}}}({t}) /\\ {p}*{t} = 0)")
            }
            FamilyRule::TorsionOrder { p, var } => format!("{p}^n*x{var} = 0"),
            FamilyRule::ExactOrder { p, var } => {
                format!("({p}^n*x{var} = 0 /\\ AND[0 < k < {p}^n]{{k*x{var} != 0}})")
            }
            FamilyRule::ManyOfOrder { p, n } => {
                format!("E x0..x(n-1) (AND[i < j < n]{{xi != xj}} /\\ AND[i < n, 0 < k < {p}^{n}]{{k*xi != 0}})")
            }
        }
    }
}

/// `θ^v_α`: the Ulm invariant at `α` equals `v`.
pub(crate) fn theta(p: u64, level: Ordinal, value: UlmValue) -> Result<Formula, ScottError> {
    Ok(match value {
        UlmValue::Finite(m) => {
            let next = m.checked_add(1).ok_or_else(|| ScottError::Overflow(format!("{m}+1")))?;
            Formula::and(vec![
                Formula::named(Named::DimAtLeast { p, level: level.clone(), count: m }),
                Formula::not(Formula::named(Named::DimAtLeast { p, level, count: next })),
            ])
        }
        UlmValue::Infinite => {
            Formula::big_and(IndexSet::Naturals { from: 0, to: None }, FamilyRule::DimensionAll { p, level })
        }
    })
}

fn write_vars(f: &mut fmt::Formatter<'_>, q: &str, vars: &[Var]) -> fmt::Result {
    f.write_str(q)?;
    for x in vars {
        write!(f, " x{x}")?;
    }
    Ok(())
}

fn write_scope(f: &mut fmt::Formatter<'_>, body: &Formula) -> fmt::Result {
    match body {
        Formula::And { args } | Formula::Or { args } if args.len() > 1 => write!(f, " {body}"),
        _ => write!(f, " ({body})"),
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, args: &[Formula], sep: &str, empty: &str) -> fmt::Result {
    match args {
        [] => f.write_str(empty),
        [one] => write!(f, "{one}"),
        _ => {
            f.write_str("(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { term } => write!(f, "{term} = 0"),
            Formula::Not { arg } => match &**arg {
                Formula::Atom { term } => write!(f, "{term} != 0"),
                other => write!(f, "~{other}"),
            },
            Formula::And { args } => write_joined(f, args, " /\\ ", "T"),
            Formula::Or { args } => write_joined(f, args, " \\/ ", "F"),
            Formula::BigAnd { family } => write!(f, "AND[{}]{{{}}}", family.index, family.rule.schema()),
            Formula::BigOr { family } => write!(f, "OR[{}]{{{}}}", family.index, family.rule.schema()),
            Formula::Exists { vars, body } if vars.is_empty() => write!(f, "{body}"),
            Formula::Forall { vars, body } if vars.is_empty() => write!(f, "{body}"),
            Formula::Exists { vars, body } => {
                write_vars(f, "E", vars)?;
                write_scope(f, body)
            }
            Formula::Forall { vars, body } => {
                write_vars(f, "A", vars)?;
                write_scope(f, body)
            }
            Formula::ExistsIn { var, level, body, .. } => {
                write!(f, "E x{var} in G_{{{level}}}")?;
                write_scope(f, body)
            }
            Formula::ForallIn { var, level, body, .. } => {
                write!(f, "A x{var} in G_{{{level}}}")?;
                write_scope(f, body)
            }
            Formula::Named { def } => match def {
                Named::Member { level, term, .. } => write!(f, "phi_{{{level}}}({term})"),
                Named::DimAtLeast { level, count, .. } => write!(f, "dim_{{{level}}} >= {count}"),
                Named::Vanishes { level, .. } => write!(f, "G_{{{level}}} = 0"),
                Named::NonzeroAt { level, .. } => write!(f, "G_{{{level}}} != 0"),
                Named::Torsion { p } => write!(f, "torsion_{p}"),
            },
        }
    }
}

/// Computes complexities, remembering the class of each abbreviation shape.
#[derive(Default)]
pub struct ComplexityCalc {
    cache: HashMap<NamedKey, Complexity>,
}

impl ComplexityCalc {
    pub fn of(&mut self, f: &Formula) -> Result<Complexity, ScottError> {
        Ok(match f {
            Formula::Atom { .. } => Complexity::QuantifierFree,
            Formula::Not { arg } => self.of(arg)?.negate(),
            Formula::And { args } => {
                let mut c = Complexity::QuantifierFree;
                for a in args {
                    c = c.and(&self.of(a)?);
                }
                c
            }
            Formula::Or { args } => {
                let mut c = Complexity::QuantifierFree;
                for a in args {
                    c = c.or(&self.of(a)?);
                }
                c
            }
            Formula::BigAnd { family } => self.family(family, true)?,
            Formula::BigOr { family } => self.family(family, false)?,
            Formula::Exists { vars, body } => {
                let c = self.of(body)?;
                if vars.is_empty() {
                    c
                } else {
                    c.exists()
                }
            }
            Formula::Forall { vars, body } => {
                let c = self.of(body)?;
                if vars.is_empty() {
                    c
                } else {
                    c.forall()
                }
            }
            Formula::ExistsIn { .. } | Formula::ForallIn { .. } => self.of(&f.unguard().expect("guarded"))?,
            Formula::Named { def } => {
                let key = def.key();
                if let Some(c) = self.cache.get(&key) {
                    return Ok(c.clone());
                }
                let c = self.of(&def.expand()?)?;
                self.cache.insert(key, c.clone());
                c
            }
        })
    }

    fn family(&mut self, fam: &Family, conj: bool) -> Result<Complexity, ScottError> {
        let weight = |c: Complexity| if conj { c.conjunct_weight() } else { c.disjunct_weight() };
        let class = |w: Ordinal| if conj { Complexity::Pi(w) } else { Complexity::Sigma(w) };
        Ok(match fam.index.probe() {
            Probe::Empty => Complexity::QuantifierFree,
            Probe::Finite(lo, hi) => {
                let a = self.of(&fam.rule.member(&lo)?)?;
                let b = self.of(&fam.rule.member(&hi)?)?;
                if conj {
                    a.and(&b)
                } else {
                    a.or(&b)
                }
            }
            Probe::Attained(i) => class(weight(self.of(&fam.rule.member(&i)?)?)),
            Probe::Sampled(i, j) => {
                let a = weight(self.of(&fam.rule.member(&i)?)?);
                let b = weight(self.of(&fam.rule.member(&j)?)?);
                match a.cmp(&b) {
                    std::cmp::Ordering::Equal => class(a),
                    std::cmp::Ordering::Less => class(sup_of_sequence(&a, &b)),
                    std::cmp::Ordering::Greater => {
                        return Err(ScottError::NotMonotone(Formula::BigAnd { family: fam.clone() }.to_string()))
                    }
                }
            }
        })
    }

    fn annotate(&mut self, f: &Formula) -> Result<Value, ScottError> {
        let mut v = serde_json::to_value(f).expect("formula serializes");
        match f {
            Formula::Not { arg } => v["arg"] = self.annotate(arg)?,
            Formula::And { args } | Formula::Or { args } => {
                v["args"] = Value::Array(args.iter().map(|a| self.annotate(a)).collect::<Result<_, _>>()?);
            }
            Formula::Exists { body, .. }
            | Formula::Forall { body, .. }
            | Formula::ExistsIn { body, .. }
            | Formula::ForallIn { body, .. } => v["body"] = self.annotate(body)?,
            _ => {}
        }
        v["complexity"] = Value::String(self.of(f)?.to_string());
        Ok(v)
    }
}

/// The class `Σ_α`, `Π_α` or `d-Σ_α` of a formula, read off from its
/// syntax.
pub fn complexity_of(f: &Formula) -> Result<Complexity, ScottError> {
    ComplexityCalc::default().of(f)
}

/// JSON form of the formula with a `complexity` field on every node.
/// Deserializing the result as a [`Formula`] ignores the annotations.
pub fn annotate(f: &Formula) -> Result<Value, ScottError> {
    ComplexityCalc::default().annotate(f)
}
