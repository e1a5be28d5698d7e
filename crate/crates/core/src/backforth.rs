//! Back-and-forth relations between reduced abelian p-groups.
//!
//! Three deciders live here:
//!
//! * [`oracle_leq`] plays the back-and-forth game on explicit finite groups by
//!   exhaustive search. Positions are partial isomorphisms between generated
//!   subgroups, so two tuples generating the same graph share one memo entry.
//! * [`barker_leq`] evaluates the height conditions for two tuples inside one
//!   finite group.
//! * [`symbolic_leq`] decides `A ≤_level B` for whole groups given only their
//!   Ulm profiles, including transfinite levels.
//!
//! `(A, ā) ≤_n (B, b̄)` means: for every `β < n` and every tuple `d̄` in `B`
//! there is `c̄` in `A` with `(B, b̄d̄) ≤_β (A, āc̄)`; `≤_0` means the tuples
//! have the same atomic type.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::pgroup::{embeds_into, Element, GroupError, GroupSpec, MAX_ENUMERATED_ORDER};
use crate::profile::{ProfileError, UlmProfile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BackForthError {
    #[error("tuples have different lengths ({0} and {1})")]
    TupleLength(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("level {0} is not a natural number")]
    LevelNotFinite(Ordinal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "lowercase")]
pub enum BfVerdict {
    Holds,
    Fails(String),
    Unknown(String),
}

impl BfVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, BfVerdict::Holds)
    }

    /// `Some(true)` for `Holds`, `Some(false)` for `Fails`, `None` otherwise.
    pub fn decided(&self) -> Option<bool> {
        match self {
            BfVerdict::Holds => Some(true),
            BfVerdict::Fails(_) => Some(false),
            BfVerdict::Unknown(_) => None,
        }
    }

    pub fn clause(&self) -> Option<&str> {
        match self {
            BfVerdict::Fails(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for BfVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BfVerdict::Holds => f.write_str("Holds"),
            BfVerdict::Fails(c) => write!(f, "Fails({c})"),
            BfVerdict::Unknown(r) => write!(f, "Unknown({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClauseStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub clause: String,
    pub status: ClauseStatus,
    pub detail: String,
}

/// Every clause checked for one comparison, in evaluation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub level: Ordinal,
    /// `odd`, `even` or `limit`.
    pub case: String,
    /// The `α` of the level decomposition (`2α+1`, `2α+2` or `α`).
    pub alpha: Ordinal,
    pub clauses: Vec<ClauseResult>,
}

impl ConditionReport {
    /// The first failing clause wins, then any unknown clause.
    pub fn verdict(&self) -> BfVerdict {
        if let Some(c) = self.clauses.iter().find(|c| c.status == ClauseStatus::Fail) {
            return BfVerdict::Fails(c.clause.clone());
        }
        if let Some(c) = self.clauses.iter().find(|c| c.status == ClauseStatus::Unknown) {
            return BfVerdict::Unknown(c.detail.clone());
        }
        BfVerdict::Holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LevelCase {
    Odd,
    Even,
    Limit,
}

/// Splits a level into `2α+1`, `2α+2`, or a limit-or-zero `α`.
fn split_level(level: &Ordinal) -> (LevelCase, Ordinal) {
    let (gamma, n) = level.omega_decompose();
    let omega_gamma = Ordinal::omega().mul(&gamma);
    match n {
        0 => (LevelCase::Limit, level.clone()),
        n if n % 2 == 1 => (LevelCase::Odd, omega_gamma.add(&Ordinal::nat(n / 2))),
        n => (LevelCase::Even, omega_gamma.add(&Ordinal::nat(n / 2 - 1))),
    }
}

fn clause(name: &str, ok: bool, detail: String) -> ClauseResult {
    let status = if ok { ClauseStatus::Pass } else { ClauseStatus::Fail };
    ClauseResult { clause: name.to_string(), status, detail }
}

/// A finite tail profile as an explicit group.
fn finite_tail(p: &UlmProfile) -> Option<GroupSpec> {
    p.realize().ok()
}

/// Lists every clause of the empty-tuple comparison `A ≤_level B`.
pub fn condition_report(pa: &UlmProfile, pb: &UlmProfile, level: &Ordinal) -> Result<ConditionReport, BackForthError> {
    if pa.prime() != pb.prime() {
        return Err(ProfileError::PrimeMismatch(pa.prime(), pb.prime()).into());
    }
    let (case, alpha) = split_level(level);
    let la = pa.length();
    let lb = pb.length();
    let c = Ordinal::omega().mul(&alpha);
    let c_next = c.add(&Ordinal::omega());
    let mut clauses = Vec::new();
    let case_name = match case {
        LevelCase::Odd => "odd",
        LevelCase::Even => "even",
        LevelCase::Limit => "limit",
    };
    match case {
        LevelCase::Limit => {
            let eq = pa.equal_below(pb, &c)?;
            clauses.push(clause("limit/invariants", eq, format!("f_A = f_B below {c}")));
            let ok = (la == lb && la < c) || (c <= la && c <= lb);
            clauses.push(clause(
                "limit/length",
                ok,
                format!("lengths {la}, {lb}: equal below {c} or both at least {c}"),
            ));
        }
        LevelCase::Odd => {
            let eq = pa.equal_below(pb, &c)?;
            clauses.push(clause("odd/invariants", eq, format!("f_A = f_B below {c}")));
            let bound = std::cmp::min(lb.clone(), c_next.clone());
            let ok = (la == lb && la < c) || (lb >= c && la >= bound);
            clauses.push(clause(
                "odd/length",
                ok,
                format!(
                    "lengths {la}, {lb}: equal below {c}, or length of B at least {c} and length of A at least {bound}"
                ),
            ));
            clauses.push(odd_tail_clause(pa, pb, &alpha, &c_next)?);
        }
        LevelCase::Even => {
            let eq = pa.equal_below(pb, &c)?;
            let dominated = pb.leq_on_range(pa, &c, &c_next)?;
            clauses.push(clause(
                "even/invariants",
                eq && dominated,
                format!("f_A = f_B below {c} and f_B <= f_A on [{c}, {c_next})"),
            ));
            let ok = (la == lb && la < c_next) || (c_next <= la && c_next <= lb);
            clauses.push(clause(
                "even/length",
                ok,
                format!("lengths {la}, {lb}: equal below {c_next} or both at least {c_next}"),
            ));
            clauses.push(even_tail_clause(pa, pb, &alpha, &c_next)?);
        }
    }
    Ok(ConditionReport { level: level.clone(), case: case_name.to_string(), alpha, clauses })
}

/// Existential sentences about `G_{ω·α}`: either the socle layers of `A` are
/// infinite up to the cutoff, or the finite tails are compared directly.
fn odd_tail_clause(
    pa: &UlmProfile,
    pb: &UlmProfile,
    alpha: &Ordinal,
    c_next: &Ordinal,
) -> Result<ClauseResult, BackForthError> {
    const NAME: &str = "odd/tail";
    if pa.p_infinite_below(c_next) {
        return Ok(clause(NAME, true, format!("P_beta of A is infinite for every beta below min(length, {c_next})")));
    }
    let ta = pa.tail_profile(alpha);
    let tb = pb.tail_profile(alpha);
    let detail = |s: &str| format!("tail at w*{alpha}: {s}");
    if ta == tb {
        return Ok(clause(NAME, true, detail("both tails have the same Ulm sequence")));
    }
    Ok(match (finite_tail(&ta), finite_tail(&tb)) {
        (Some(ga), Some(gb)) => {
            let ok = embeds_into(&gb, &ga)?;
            clause(NAME, ok, detail(&format!("{gb} embeds in {ga}: {ok}")))
        }
        (Some(ga), None) => clause(NAME, false, detail(&format!("B's tail is infinite, A's tail {ga} is finite"))),
        _ => ClauseResult {
            clause: NAME.to_string(),
            status: ClauseStatus::Unknown,
            detail: detail("A's tail is infinite with a finite socle layer; no algebraic criterion"),
        },
    })
}

/// Universal-existential sentences about `G_{ω·α}`.
fn even_tail_clause(
    pa: &UlmProfile,
    pb: &UlmProfile,
    alpha: &Ordinal,
    c_next: &Ordinal,
) -> Result<ClauseResult, BackForthError> {
    const NAME: &str = "even/tail";
    if pb.p_infinite_below(c_next) {
        return Ok(clause(NAME, true, format!("P_beta of B is infinite for every beta below min(length, {c_next})")));
    }
    let ta = pa.tail_profile(alpha);
    let tb = pb.tail_profile(alpha);
    let detail = |s: &str| format!("tail at w*{alpha}: {s}");
    if ta == tb {
        return Ok(clause(NAME, true, detail("both tails have the same Ulm sequence")));
    }
    Ok(match (finite_tail(&ta), finite_tail(&tb)) {
        (Some(ga), Some(gb)) => {
            let ok = ga.is_isomorphic(&gb);
            clause(NAME, ok, detail(&format!("{gb} isomorphic to {ga}: {ok}")))
        }
        (Some(ga), None) => clause(NAME, false, detail(&format!("B's tail is infinite, A's tail {ga} is finite"))),
        (None, Some(gb)) => clause(NAME, false, detail(&format!("B's tail {gb} is finite, A's tail is infinite"))),
        (None, None) => ClauseResult {
            clause: NAME.to_string(),
            status: ClauseStatus::Unknown,
            detail: detail("both tails are infinite with a finite socle layer; no algebraic criterion"),
        },
    })
}

/// Decides `A ≤_level B` for whole groups from their Ulm profiles.
pub fn symbolic_leq(pa: &UlmProfile, pb: &UlmProfile, level: &Ordinal) -> Result<BfVerdict, BackForthError> {
    Ok(condition_report(pa, pb, level)?.verdict())
}

/// Multiplication tables of an explicit finite group, indexed like
/// [`GroupSpec::element_at`].
#[derive(Clone, Debug)]
struct Tables {
    spec: GroupSpec,
    n: usize,
    add: Vec<u16>,
    times_p: Vec<u16>,
}

impl Tables {
    fn new(spec: &GroupSpec) -> Result<Tables, GroupError> {
        let n = spec
            .order()
            .filter(|&n| n <= MAX_ENUMERATED_ORDER)
            .ok_or(GroupError::TooLarge(spec.prime(), spec.log_order()))? as usize;
        let elems: Vec<Element> = spec.elements()?.collect();
        let mut add = vec![0u16; n * n];
        for i in 0..n {
            for j in i..n {
                let s = spec.index_of(&spec.add(&elems[i], &elems[j])) as u16;
                add[i * n + j] = s;
                add[j * n + i] = s;
            }
        }
        let times_p = elems.iter().map(|x| spec.index_of(&spec.scale(spec.prime(), x)) as u16).collect();
        Ok(Tables { spec: spec.clone(), n, add, times_p })
    }

    fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.n + b as usize]
    }

    fn p(&self) -> u64 {
        self.spec.prime()
    }

    /// Subgroup generated by `gens`, as a membership vector and element list.
    fn closure(&self, gens: &[u16]) -> (Vec<bool>, Vec<u16>) {
        let mut member = vec![false; self.n];
        member[0] = true;
        let mut list = vec![0u16];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.add(x, g);
                if !member[y as usize] {
                    member[y as usize] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        (member, list)
    }
}

fn log_p(mut n: usize, p: u64) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

/// Search parameters for [`oracle_leq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub max_level: u32,
    /// Largest number of new elements one move may add. `None` picks
    /// `max(⌈log_p |A|⌉, ⌈log_p |B|⌉)`, enough to reach any subgroup.
    pub extension_cap: Option<usize>,
    /// Check every subgroup reachable by a move instead of only the maximal
    /// ones. Moves to smaller subgroups are implied by restriction, so this
    /// only serves as a cross-check.
    pub exhaustive: bool,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { max_level: 8, extension_cap: None, exhaustive: false }
    }
}

/// Sorted `(domain, image)` pairs of a partial isomorphism.
type Graph = Vec<(u16, u16)>;

/// Subgroups reachable in one move, as sorted element indices.
type Overgroups = Arc<Vec<Vec<u16>>>;

/// Memoized game search on a fixed pair of finite groups. Side 0 is the
/// first group passed to [`GameSession::new`], side 1 the second.
pub struct GameSession {
    groups: Arc<[Tables; 2]>,
    cap: usize,
    exhaustive: bool,
    memo: HashMap<(usize, Graph, u32), bool>,
    overgroup_cache: HashMap<(usize, Vec<u16>), Overgroups>,
}

impl GameSession {
    pub fn new(a: &GroupSpec, b: &GroupSpec, cfg: &GameConfig) -> Result<GameSession, BackForthError> {
        if a.prime() != b.prime() {
            return Err(GroupError::PrimeMismatch(a.prime(), b.prime()).into());
        }
        let ta = Tables::new(a)?;
        let tb = Tables::new(b)?;
        let cap = cfg.extension_cap.unwrap_or_else(|| log_p(ta.n, a.prime()).max(log_p(tb.n, b.prime())));
        Ok(GameSession {
            groups: Arc::new([ta, tb]),
            cap,
            exhaustive: cfg.exhaustive,
            memo: HashMap::new(),
            overgroup_cache: HashMap::new(),
        })
    }

    pub fn extension_cap(&self) -> usize {
        self.cap
    }

    /// Number of memoized positions.
    pub fn positions(&self) -> usize {
        self.memo.len()
    }

    /// `(G_left, ā) ≤_n (G_other, b̄)` for tuples given as elements.
    pub fn leq(&mut self, left: usize, abar: &[Element], bbar: &[Element], n: u32) -> Result<bool, BackForthError> {
        if abar.len() != bbar.len() {
            return Err(BackForthError::TupleLength(abar.len(), bbar.len()));
        }
        let gs = self.groups.clone();
        let (x, y) = (&gs[left], &gs[1 - left]);
        let mut pairs = Vec::with_capacity(abar.len());
        for (a, b) in abar.iter().zip(bbar) {
            x.spec.check(a)?;
            y.spec.check(b)?;
            pairs.push((y.spec.index_of(b) as u16, x.spec.index_of(a) as u16));
        }
        match generated_graph(y, x, &pairs) {
            Some(graph) => Ok(self.position_leq(left, graph, n)),
            None => Ok(false),
        }
    }

    /// Whole-group comparison `G_left ≤_n G_other`.
    pub fn leq_groups(&mut self, left: usize, n: u32) -> bool {
        self.position_leq(left, vec![(0, 0)], n)
    }

    /// `(X, image) ≤_n (Y, domain)` where `X = side left`, `Y` the other side
    /// and `graph` maps domain elements of `Y` to `X`.
    fn position_leq(&mut self, left: usize, graph: Graph, n: u32) -> bool {
        if n == 0 {
            return true;
        }
        let key = (left, graph, n);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let graph = key.1.clone();
        let domain: Vec<u16> = graph.iter().map(|&(d, _)| d).collect();
        let targets = self.moves(1 - left, &domain);
        let mut result = true;
        'levels: for beta in (0..n).rev() {
            for t in targets.iter() {
                if !self.answer_exists(left, &graph, t, beta) {
                    result = false;
                    break 'levels;
                }
            }
        }
        self.memo.insert(key, result);
        result
    }

    /// Subgroups of side `side` containing `base` that one move can reach.
    fn moves(&mut self, side: usize, base: &[u16]) -> Overgroups {
        let key = (side, base.to_vec());
        if let Some(v) = self.overgroup_cache.get(&key) {
            return v.clone();
        }
        let g = &self.groups[side];
        let whole: Vec<u16> = (0..g.n as u16).collect();
        let out = if !self.exhaustive && self.cap >= log_p(g.n / base.len(), g.p()) {
            vec![whole]
        } else {
            reachable_subgroups(g, base, self.cap, !self.exhaustive)
        };
        let out = Arc::new(out);
        self.overgroup_cache.insert(key, out.clone());
        out
    }

    /// Whether some injective homomorphism `φ: T → X` extending `graph` has
    /// `(Y, T) ≤_β (X, φ(T))`.
    fn answer_exists(&mut self, left: usize, graph: &Graph, target: &[u16], beta: u32) -> bool {
        let gs = self.groups.clone();
        let (x, y) = (&gs[left], &gs[1 - left]);
        let mut map = vec![u16::MAX; y.n];
        let mut image = vec![false; x.n];
        let mut dom: Vec<u16> = Vec::with_capacity(target.len());
        for &(d, i) in graph {
            map[d as usize] = i;
            image[i as usize] = true;
            dom.push(d);
        }
        let chain = extension_chain(y, &dom, target);
        let mut search = Extension { x, y, map, image, dom, chain: &chain };
        search.run(0, &mut |m: &[u16], dom: &[u16]| {
            let mut child: Graph = dom.iter().map(|&d| (m[d as usize], d)).collect();
            child.sort_unstable();
            self.position_leq(1 - left, child, beta)
        })
    }
}

/// The graph generated by `pairs` inside `Y × X`, if it is the graph of an
/// isomorphism between subgroups.
fn generated_graph(y: &Tables, x: &Tables, pairs: &[(u16, u16)]) -> Option<Graph> {
    let mut map = vec![u16::MAX; y.n];
    let mut used = vec![false; x.n];
    map[0] = 0;
    used[0] = true;
    let mut list = vec![(0u16, 0u16)];
    let mut i = 0;
    while i < list.len() {
        let (d, v) = list[i];
        for &(pd, pv) in pairs {
            let nd = y.add(d, pd);
            let nv = x.add(v, pv);
            match map[nd as usize] {
                u16::MAX => {
                    if used[nv as usize] {
                        return None;
                    }
                    map[nd as usize] = nv;
                    used[nv as usize] = true;
                    list.push((nd, nv));
                }
                w if w != nv => return None,
                _ => {}
            }
        }
        i += 1;
    }
    list.sort_unstable();
    Some(list)
}

/// Elements `t_1, …, t_k` with `⟨S, t_1, …, t_i⟩` of index `p` in the next
/// term, ending at `target`.
fn extension_chain(y: &Tables, dom: &[u16], target: &[u16]) -> Vec<u16> {
    let mut member = vec![false; y.n];
    let mut list: Vec<u16> = dom.to_vec();
    for &d in dom {
        member[d as usize] = true;
    }
    let mut chain = Vec::new();
    while list.len() < target.len() {
        let t = *target
            .iter()
            .find(|&&t| !member[t as usize] && member[y.times_p[t as usize] as usize])
            .expect("a p-group has an element of order p modulo any proper subgroup");
        chain.push(t);
        let base = list.clone();
        let mut step = t;
        for _ in 1..y.p() {
            for &s in &base {
                let e = y.add(s, step);
                member[e as usize] = true;
                list.push(e);
            }
            step = y.add(step, t);
        }
    }
    chain
}

struct Extension<'a> {
    x: &'a Tables,
    y: &'a Tables,
    map: Vec<u16>,
    image: Vec<bool>,
    dom: Vec<u16>,
    chain: &'a [u16],
}

impl Extension<'_> {
    /// Depth-first over images of the chain elements; `leaf` decides each
    /// complete extension.
    fn run(&mut self, i: usize, leaf: &mut dyn FnMut(&[u16], &[u16]) -> bool) -> bool {
        if i == self.chain.len() {
            return leaf(&self.map, &self.dom);
        }
        let t = self.chain[i];
        let need = self.map[self.y.times_p[t as usize] as usize];
        let base_len = self.dom.len();
        for w in 0..self.x.n as u16 {
            if self.image[w as usize] || self.x.times_p[w as usize] != need {
                continue;
            }
            let (mut yt, mut xw) = (t, w);
            for _ in 1..self.y.p() {
                for k in 0..base_len {
                    let s = self.dom[k];
                    let ny = self.y.add(s, yt);
                    let nx = self.x.add(self.map[s as usize], xw);
                    self.map[ny as usize] = nx;
                    self.image[nx as usize] = true;
                    self.dom.push(ny);
                }
                yt = self.y.add(yt, t);
                xw = self.x.add(xw, w);
            }
            if self.run(i + 1, leaf) {
                return true;
            }
            for k in base_len..self.dom.len() {
                let d = self.dom[k];
                self.image[self.map[d as usize] as usize] = false;
                self.map[d as usize] = u16::MAX;
            }
            self.dom.truncate(base_len);
        }
        false
    }
}

/// Subgroups containing `base` generated by at most `cap` extra elements;
/// with `maximal_only`, those not strictly inside another such subgroup.
fn reachable_subgroups(g: &Tables, base: &[u16], cap: usize, maximal_only: bool) -> Vec<Vec<u16>> {
    let mut seen: HashMap<Vec<u16>, ()> = HashMap::new();
    let mut frontier = vec![base.to_vec()];
    seen.insert(base.to_vec(), ());
    for _ in 0..cap {
        let mut next = Vec::new();
        for s in &frontier {
            let mut member = vec![false; g.n];
            for &e in s {
                member[e as usize] = true;
            }
            for e in 0..g.n as u16 {
                if member[e as usize] {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(e);
                let (_, t) = g.closure(&gens);
                if seen.insert(t.clone(), ()).is_none() {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut all: Vec<Vec<u16>> = seen.into_keys().collect();
    all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    if !maximal_only {
        return all;
    }
    let mut out: Vec<Vec<u16>> = Vec::new();
    for s in all {
        if !out.iter().any(|t| t.len() > s.len() && s.iter().all(|e| t.binary_search(e).is_ok())) {
            out.push(s);
        }
    }
    out
}

/// `(A, ā) ≤_n (B, b̄)` by exhaustive game search.
pub fn oracle_leq(
    a: &GroupSpec,
    abar: &[Element],
    b: &GroupSpec,
    bbar: &[Element],
    n: u32,
    cfg: &GameConfig,
) -> Result<bool, BackForthError> {
    let mut session = GameSession::new(a, b, cfg)?;
    session.leq(0, abar, bbar, n)
}

/// The height conditions for `(G, ā) ≤_level (G, b̄)` inside one finite
/// group: the correspondence `b̄ ↦ ā` must extend to an isomorphism of the
/// generated subgroups, and heights of corresponding elements must match as
/// far as the level can see.
pub fn barker_leq(g: &GroupSpec, abar: &[Element], bbar: &[Element], level: &Ordinal) -> Result<bool, BackForthError> {
    Barker::new(g)?.leq(abar, bbar, level)
}

/// [`barker_leq`] with the group tables and heights computed once.
pub struct Barker {
    tables: Tables,
    /// Height of each element, `None` for 0.
    heights: Vec<Option<Ordinal>>,
}

impl Barker {
    pub fn new(g: &GroupSpec) -> Result<Barker, BackForthError> {
        let tables = Tables::new(g)?;
        let heights = (0..tables.n).map(|i| g.height_nat(&g.element_at(i)).map(|h| Ordinal::nat(h as u64))).collect();
        Ok(Barker { tables, heights })
    }

    pub fn leq(&self, abar: &[Element], bbar: &[Element], level: &Ordinal) -> Result<bool, BackForthError> {
        if abar.len() != bbar.len() {
            return Err(BackForthError::TupleLength(abar.len(), bbar.len()));
        }
        let g = &self.tables.spec;
        let mut pairs = Vec::new();
        for (a, b) in abar.iter().zip(bbar) {
            g.check(a)?;
            g.check(b)?;
            pairs.push((g.index_of(b) as u16, g.index_of(a) as u16));
        }
        let Some(graph) = generated_graph(&self.tables, &self.tables, &pairs) else {
            return Ok(false);
        };
        let height = |i: u16| &self.heights[i as usize];
        let (gamma, n) = level.omega_decompose();
        let alpha = Ordinal::omega().mul(&gamma).add(&Ordinal::nat(n / 2));
        let cut = Ordinal::omega().mul(&alpha);
        let below = |h: &Option<Ordinal>| h.as_ref().is_some_and(|h| h < &cut);
        if n % 2 == 0 {
            return Ok(graph.iter().all(|&(bi, ai)| {
                let (hb, ha) = (height(bi), height(ai));
                (hb == ha && below(hb)) || (!below(hb) && !below(ha))
            }));
        }
        // odd level 2α+1: which clause applies depends on whether the socle
        // layers P_{ω·α+k} are infinite; in a finite group none is, and
        // heights must agree exactly
        Ok(graph.iter().all(|&(bi, ai)| height(bi) == height(ai)))
    }
}

/// One line of the oracle/symbolic cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub a: String,
    pub b: String,
    pub level: u32,
    pub oracle: bool,
    pub symbolic: String,
    pub clause: Option<String>,
}

impl SweepRecord {
    pub fn agrees(&self) -> bool {
        match self.symbolic.as_str() {
            "holds" => self.oracle,
            "fails" => !self.oracle,
            _ => true,
        }
    }

    pub fn is_unknown(&self) -> bool {
        self.symbolic == "unknown"
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    pub fn disagreements(&self) -> Vec<&SweepRecord> {
        self.records.iter().filter(|r| !r.agrees()).collect()
    }

    pub fn unknowns(&self) -> Vec<&SweepRecord> {
        self.records.iter().filter(|r| r.is_unknown()).collect()
    }

    /// JSON lines, one record per line.
    pub fn to_jsonl(&self) -> String {
        self.records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
    }
}

/// Compares the oracle with the symbolic decider on every ordered pair of
/// the corpus and every level `0..=max_level`. Pairs run in parallel.
pub fn oracle_vs_symbolic_sweep(
    corpus: &[GroupSpec],
    max_level: u32,
    cfg: &GameConfig,
) -> Result<SweepReport, BackForthError> {
    let mut pairs = Vec::new();
    for (i, a) in corpus.iter().enumerate() {
        for b in &corpus[i..] {
            if a.prime() != b.prime() {
                return Err(GroupError::PrimeMismatch(a.prime(), b.prime()).into());
            }
            pairs.push((a, b));
        }
    }
    let chunks: Vec<Result<Vec<SweepRecord>, BackForthError>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut session = GameSession::new(a, b, cfg)?;
            let pa = UlmProfile::of_group(a);
            let pb = UlmProfile::of_group(b);
            let mut out = Vec::new();
            let directions: &[(usize, &GroupSpec, &GroupSpec, &UlmProfile, &UlmProfile)] =
                if a == b { &[(0, a, b, &pa, &pb)] } else { &[(0, a, b, &pa, &pb), (1, b, a, &pb, &pa)] };
            for &(left, x, y, px, py) in directions {
                for level in 0..=max_level {
                    let oracle = session.leq_groups(left, level);
                    let verdict = symbolic_leq(px, py, &Ordinal::nat(level as u64))?;
                    let (symbolic, clause) = match &verdict {
                        BfVerdict::Holds => ("holds", None),
                        BfVerdict::Fails(c) => ("fails", Some(c.clone())),
                        BfVerdict::Unknown(r) => ("unknown", Some(r.clone())),
                    };
                    out.push(SweepRecord {
                        a: x.to_string(),
                        b: y.to_string(),
                        level,
                        oracle,
                        symbolic: symbolic.to_string(),
                        clause,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for c in chunks {
        records.extend(c?);
    }
    Ok(SweepReport { records })
}
