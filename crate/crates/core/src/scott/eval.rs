//! Truth of formulas in explicit finite p-groups.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::formula::{FamilyRule, Formula, Index, IndexSet, LinearTerm, Named, Var};
use super::ScottError;
use crate::ordinal::Ordinal;
use crate::pgroup::{Element, GroupSpec, HeightTable};

/// How abbreviations are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    /// Unfold every abbreviation and search the group by brute force.
    Expand,
    /// Decide abbreviations from heights, Ulm invariants and the length of
    /// the group; plain quantifiers are still searched.
    Algebraic,
}

const MAX_FAMILY: u64 = 1 << 20;

pub struct Evaluator<'g> {
    group: &'g GroupSpec,
    mode: EvalMode,
    elements: Option<Rc<[Element]>>,
    length: u32,
    rank: u64,
    members: HashMap<(Ordinal, Element), bool>,
    closed: HashMap<Named, bool>,
}

impl<'g> Evaluator<'g> {
    pub fn new(group: &'g GroupSpec, mode: EvalMode) -> Result<Self, ScottError> {
        let (length, rank) = match mode {
            EvalMode::Algebraic => (group.length(), group.rank() as u64),
            EvalMode::Expand => {
                let length = HeightTable::compute(group)?.length();
                let socle = group.elements()?.filter(|x| group.scale(group.prime(), x).is_zero()).count();
                (length, socle.ilog(group.prime() as usize) as u64)
            }
        };
        Ok(Evaluator { group, mode, elements: None, length, rank, members: HashMap::new(), closed: HashMap::new() })
    }

    /// Truth of `f` with the free variables assigned as given.
    pub fn eval_with(&mut self, f: &Formula, assignment: &[(Var, Element)]) -> Result<bool, ScottError> {
        let mut env = Env::default();
        for (x, e) in assignment {
            self.group.check(e)?;
            env.set(*x, Some(e.clone()));
        }
        self.eval(f, &mut env)
    }

    fn elements(&mut self) -> Result<Rc<[Element]>, ScottError> {
        if self.elements.is_none() {
            self.elements = Some(self.group.elements()?.collect());
        }
        Ok(self.elements.clone().expect("just filled"))
    }

    fn check_prime(&self, p: u64) -> Result<(), ScottError> {
        if p == self.group.prime() {
            Ok(())
        } else {
            Err(ScottError::PrimeMismatch { sentence: p, group: self.group.prime() })
        }
    }

    fn term(&self, t: &LinearTerm, env: &Env) -> Result<Element, ScottError> {
        let g = self.group;
        let mut acc = g.zero();
        for (x, c) in t.coefficients() {
            let v = env.get(x).ok_or(ScottError::Unbound(x))?;
            let s = g.scale(c.unsigned_abs(), v);
            acc = if c < 0 { g.sub(&acc, &s) } else { g.add(&acc, &s) };
        }
        Ok(acc)
    }

    fn eval(&mut self, f: &Formula, env: &mut Env) -> Result<bool, ScottError> {
        match f {
            Formula::Atom { term } => Ok(self.term(term, env)?.is_zero()),
            Formula::Not { arg } => Ok(!self.eval(arg, env)?),
            Formula::And { args } => {
                for a in args {
                    if !self.eval(a, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or { args } => {
                for a in args {
                    if self.eval(a, env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::BigAnd { family } | Formula::BigOr { family } => {
                self.check_prime(family.rule.prime())?;
                let conj = matches!(f, Formula::BigAnd { .. });
                for i in self.support(&family.index, &family.rule)? {
                    if self.eval(&family.rule.member(&i)?, env)? != conj {
                        return Ok(!conj);
                    }
                }
                Ok(conj)
            }
            Formula::Exists { vars, body } => {
                let conjuncts: Vec<(&Formula, bool)> = match &**body {
                    Formula::And { args } => args.iter().map(|a| (a, false)).collect(),
                    b => vec![(b, false)],
                };
                self.search(vars, &conjuncts, env)
            }
            Formula::Forall { vars, body } => {
                let conjuncts: Vec<(&Formula, bool)> = match &**body {
                    Formula::Or { args } => args.iter().map(|a| (a, true)).collect(),
                    b => vec![(b, true)],
                };
                Ok(!self.search(vars, &conjuncts, env)?)
            }
            Formula::ExistsIn { p, .. } | Formula::ForallIn { p, .. } => {
                self.check_prime(*p)?;
                self.eval(&f.unguard().expect("guarded"), env)
            }
            Formula::Named { def } => self.named(def, env),
        }
    }

    /// Is there an assignment of `vars` making every conjunct true (false
    /// when flagged)? Each conjunct is checked as soon as its variables
    /// from the block are assigned.
    fn search(&mut self, vars: &[Var], conjuncts: &[(&Formula, bool)], env: &mut Env) -> Result<bool, ScottError> {
        let mut stages: Vec<Vec<(&Formula, bool)>> = vec![Vec::new(); vars.len() + 1];
        for &(c, neg) in conjuncts {
            let free = free_vars(c);
            let stage = vars.iter().rposition(|x| free.contains(x)).map_or(0, |i| i + 1);
            stages[stage].push((c, neg));
        }
        let saved: Vec<Option<Element>> = vars.iter().map(|&x| env.get(x).cloned()).collect();
        for &x in vars {
            env.set(x, None);
        }
        let found = self.holds_all(&stages[0], env)? && self.dfs(0, vars, &stages, env)?;
        for (&x, old) in vars.iter().zip(saved) {
            env.set(x, old);
        }
        Ok(found)
    }

    fn holds_all(&mut self, conjuncts: &[(&Formula, bool)], env: &mut Env) -> Result<bool, ScottError> {
        for &(c, neg) in conjuncts {
            if self.eval(c, env)? == neg {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dfs(
        &mut self,
        depth: usize,
        vars: &[Var],
        stages: &[Vec<(&Formula, bool)>],
        env: &mut Env,
    ) -> Result<bool, ScottError> {
        if depth == vars.len() {
            return Ok(true);
        }
        let elements = self.elements()?;
        for e in elements.iter() {
            env.set(vars[depth], Some(e.clone()));
            if self.holds_all(&stages[depth + 1], env)? && self.dfs(depth + 1, vars, stages, env)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn named(&mut self, def: &Named, env: &mut Env) -> Result<bool, ScottError> {
        self.check_prime(def.prime())?;
        if let Named::Member { p, level, term } = def {
            let value = self.term(term, env)?;
            let key = (level.clone(), value);
            if let Some(&b) = self.members.get(&key) {
                return Ok(b);
            }
            let b = match self.mode {
                EvalMode::Algebraic => self.group.height(&key.1)?.cmp_ordinal(level).is_ge(),
                EvalMode::Expand => {
                    let canonical = Named::Member { p: *p, level: level.clone(), term: LinearTerm::var(0) };
                    let mut local = Env::default();
                    local.set(0, Some(key.1.clone()));
                    self.eval(&canonical.expand()?, &mut local)?
                }
            };
            self.members.insert(key, b);
            return Ok(b);
        }
        if let Some(&b) = self.closed.get(def) {
            return Ok(b);
        }
        let b = match self.mode {
            EvalMode::Expand => self.eval(&def.expand()?, &mut Env::default())?,
            EvalMode::Algebraic => {
                let len = Ordinal::nat(self.length as u64);
                match def {
                    Named::DimAtLeast { level, count, .. } => {
                        let f = match level.as_nat().and_then(|k| u32::try_from(k).ok()) {
                            Some(k) => self.group.ulm_invariants().get(&k).copied().unwrap_or(0),
                            None => 0,
                        };
                        f >= *count
                    }
                    Named::Vanishes { level, .. } => &len <= level,
                    Named::NonzeroAt { level, .. } => level < &len,
                    Named::Torsion { .. } => true,
                    Named::Member { .. } => unreachable!(),
                }
            }
        };
        self.closed.insert(def.clone(), b);
        Ok(b)
    }

    /// Indices of a family that decide it in this group: members beyond them
    /// repeat the truth value of the last one listed.
    fn support(&mut self, index: &IndexSet, rule: &FamilyRule) -> Result<Vec<Index>, ScottError> {
        let len = self.length as u64;
        let too_big = || ScottError::NoFiniteSupport(format!("{index}"));
        Ok(match index {
            IndexSet::Naturals { from, to } => {
                let last = match (to, rule) {
                    (Some(t), _) => {
                        if t.saturating_sub(*from) > MAX_FAMILY {
                            return Err(too_big());
                        }
                        t.checked_sub(1)
                    }
                    (None, FamilyRule::Fundamental { level, .. }) => {
                        let l = Ordinal::nat(len);
                        (*from..).find(|&n| level.fundamental(n).is_some_and(|b| b >= l))
                    }
                    (None, FamilyRule::DimensionAll { .. }) => Some(self.rank + 1),
                    (None, FamilyRule::TorsionOrder { .. } | FamilyRule::ExactOrder { .. }) => Some(len + 1),
                    (None, FamilyRule::ManyOfOrder { .. }) => {
                        Some(self.group.order().filter(|&n| n < MAX_FAMILY).ok_or_else(too_big)? + 1)
                    }
                    (None, _) => return Err(too_big()),
                };
                match last {
                    Some(l) if l >= *from => (*from..=l).map(Index::Nat).collect(),
                    Some(_) if to.is_none() => vec![Index::Nat(*from)],
                    _ => Vec::new(),
                }
            }
            IndexSet::Blocks { gamma_lo, gamma_hi, k_from, k_to } => {
                let mut out = Vec::new();
                if gamma_lo >= gamma_hi {
                    return Ok(out);
                }
                let k_end = k_to.unwrap_or(u64::MAX);
                if gamma_lo.is_zero() {
                    out.extend((*k_from..k_end.min(len)).map(|k| Index::Ord(Ordinal::nat(k))));
                    let k = (*k_from).max(len);
                    if k < k_end {
                        out.push(Index::Ord(Ordinal::nat(k)));
                        return Ok(out);
                    }
                }
                let g = std::cmp::max(gamma_lo.clone(), Ordinal::nat(1));
                if &g < gamma_hi && *k_from < k_end {
                    out.push(Index::Ord(Ordinal::omega_compose(&g, *k_from)));
                }
                out
            }
            IndexSet::Vectors { p, dim } => {
                let count = u32::try_from(*dim)
                    .ok()
                    .and_then(|d| p.checked_pow(d))
                    .filter(|&c| c <= MAX_FAMILY)
                    .ok_or_else(too_big)?;
                (1..count)
                    .map(|mut i| {
                        let mut v = vec![0; *dim as usize];
                        for c in v.iter_mut() {
                            *c = i % p;
                            i /= p;
                        }
                        Index::Vector(v)
                    })
                    .collect()
            }
        })
    }
}

/// Truth of a sentence in `g`.
pub fn eval(f: &Formula, g: &GroupSpec, mode: EvalMode) -> Result<bool, ScottError> {
    Evaluator::new(g, mode)?.eval_with(f, &[])
}

#[derive(Default)]
struct Env(Vec<Option<Element>>);

impl Env {
    fn get(&self, x: Var) -> Option<&Element> {
        self.0.get(x as usize).and_then(Option::as_ref)
    }

    fn set(&mut self, x: Var, v: Option<Element>) {
        let i = x as usize;
        if self.0.len() <= i {
            self.0.resize(i + 1, None);
        }
        self.0[i] = v;
    }
}

fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let term_vars = |t: &LinearTerm| t.coefficients().map(|(x, _)| x).collect::<BTreeSet<_>>();
    match f {
        Formula::Atom { term } => term_vars(term),
        Formula::Not { arg } => free_vars(arg),
        Formula::And { args } | Formula::Or { args } => args.iter().flat_map(free_vars).collect(),
        Formula::BigAnd { family } | Formula::BigOr { family } => match &family.rule {
            FamilyRule::Fundamental { term, .. } => term_vars(term),
            FamilyRule::Independent { vars, .. } => vars.iter().copied().collect(),
            FamilyRule::TorsionOrder { var, .. } | FamilyRule::ExactOrder { var, .. } => BTreeSet::from([*var]),
            FamilyRule::DimensionAll { .. }
            | FamilyRule::Theta { .. }
            | FamilyRule::Nonzero { .. }
            | FamilyRule::ManyOfOrder { .. } => BTreeSet::new(),
        },
        Formula::Exists { vars, body } | Formula::Forall { vars, body } => {
            let mut s = free_vars(body);
            for x in vars {
                s.remove(x);
            }
            s
        }
        Formula::ExistsIn { var, body, .. } | Formula::ForallIn { var, body, .. } => {
            let mut s = free_vars(body);
            s.remove(var);
            s
        }
        Formula::Named { def } => match def {
            Named::Member { term, .. } => term_vars(term),
            _ => BTreeSet::new(),
        },
    }
}
