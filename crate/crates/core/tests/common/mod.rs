//! Shared test helpers: an ordinal oracle computed straight from the
//! recursive definitions of `+` and `·`, and small fixtures.

#![allow(dead_code)]

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use pgroup_scott::ordinal::Ordinal;
use pgroup_scott::profile::{Band, UlmProfile, UlmValue};

/// Cantor normal form as `(exponent, coefficient)` pairs, exponents
/// strictly decreasing, coefficients positive.
pub type Cnf = Vec<(u32, u64)>;

pub fn cnf(o: &Ordinal) -> Cnf {
    o.terms().to_vec()
}

pub fn ord(c: &Cnf) -> Ordinal {
    Ordinal::from_terms(c.iter().copied())
}

pub fn cmp(a: &Cnf, b: &Cnf) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn succ(a: &Cnf) -> Cnf {
    let mut t = a.clone();
    match t.last_mut() {
        Some((0, c)) => *c += 1,
        _ => t.push((0, 1)),
    }
    t
}

fn pred(a: &Cnf) -> Option<Cnf> {
    let mut t = a.clone();
    match t.last_mut() {
        Some((0, c)) => {
            *c -= 1;
            if *c == 0 {
                t.pop();
            }
            Some(t)
        }
        _ => None,
    }
}

/// `b[n]` for a limit `b`.
fn fundamental(b: &Cnf, n: u64) -> Cnf {
    let mut t = b.clone();
    let (e, c) = t.pop().expect("limit is nonzero");
    if c > 1 {
        t.push((e, c - 1));
    }
    if n > 0 {
        t.push((e - 1, n));
    }
    t
}

/// Supremum of a strictly increasing sequence from two consecutive
/// samples: the first differing term `ω^e` climbs to `ω^{e+1}`.
fn sup(x2: &Cnf, x3: &Cnf) -> Cnf {
    if x2 == x3 {
        return x2.clone();
    }
    let i = x2.iter().zip(x3).take_while(|(a, b)| a == b).count();
    let mut t: Cnf = x3[..i].to_vec();
    let e = x3[i].0 + 1;
    match t.last_mut() {
        Some((last, c)) if *last == e => *c += 1,
        _ => t.push((e, 1)),
    }
    t
}

/// `a + b` by recursion on `b`: `a + 0 = a`, `a + (b+1) = (a+b)+1`,
/// `a + λ = sup a + λ[n]`.
pub fn add(a: &Cnf, b: &Cnf) -> Cnf {
    if b.is_empty() {
        return a.clone();
    }
    memo(&ADD, a, b, || match pred(b) {
        Some(p) => succ(&add(a, &p)),
        None => sup(&add(a, &fundamental(b, 2)), &add(a, &fundamental(b, 3))),
    })
}

/// `a · b` by recursion on `b`: `a·0 = 0`, `a·(b+1) = a·b + a`,
/// `a·λ = sup a·λ[n]`.
pub fn mul(a: &Cnf, b: &Cnf) -> Cnf {
    if b.is_empty() {
        return Vec::new();
    }
    memo(&MUL, a, b, || match pred(b) {
        Some(p) => add(&mul(a, &p), a),
        None => sup(&mul(a, &fundamental(b, 2)), &mul(a, &fundamental(b, 3))),
    })
}

type Memo = RefCell<HashMap<(Cnf, Cnf), Cnf>>;

thread_local! {
    static ADD: Memo = RefCell::new(HashMap::new());
    static MUL: Memo = RefCell::new(HashMap::new());
}

fn memo(table: &'static std::thread::LocalKey<Memo>, a: &Cnf, b: &Cnf, f: impl FnOnce() -> Cnf) -> Cnf {
    let key = (a.clone(), b.clone());
    if let Some(v) = table.with(|m| m.borrow().get(&key).cloned()) {
        return v;
    }
    let v = f();
    table.with(|m| m.borrow_mut().insert(key, v.clone()));
    v
}

/// `2·γ + k` computed by the oracle.
pub fn two_gamma_plus(gamma: &Ordinal, k: u64) -> Ordinal {
    let two = vec![(0, 2)];
    let k: Cnf = if k == 0 { Vec::new() } else { vec![(0, k)] };
    ord(&add(&mul(&two, &cnf(gamma)), &k))
}

pub fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

pub fn v(s: &str) -> UlmValue {
    s.parse().unwrap()
}

pub fn head_profile(p: u64, head: &[&str]) -> UlmProfile {
    UlmProfile::from_head(p, head.iter().map(|s| v(s)).collect()).unwrap()
}

/// Every block below `ω·gamma` carries the same value at every offset.
pub fn tail_profile(p: u64, gamma: &str, value: &str) -> UlmProfile {
    UlmProfile::new(p, vec![Band::new(o("0"), o(gamma), vec![], v(value))]).unwrap()
}

pub fn bands(p: u64, spec: &[(&str, &str, &[&str], &str)]) -> UlmProfile {
    let bands = spec
        .iter()
        .map(|(lo, hi, head, tail)| Band::new(o(lo), o(hi), head.iter().map(|s| v(s)).collect(), v(tail)))
        .collect();
    UlmProfile::new(p, bands).unwrap()
}
