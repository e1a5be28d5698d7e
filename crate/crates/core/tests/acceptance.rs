//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bands, cnf, head_profile, o, ord, tail_profile, two_gamma_plus};
use pgroup_scott::backforth::{oracle_vs_symbolic_sweep, Barker, GameConfig, GameSession};
use pgroup_scott::cli::lemma2_fuzz;
use pgroup_scott::ordinal::Ordinal;
use pgroup_scott::pgroup::{realize_finite_profile, ulm_invariant_by_enumeration, Element, GroupSpec};
use pgroup_scott::profile::UlmProfile;
use pgroup_scott::scott::{
    build_phi_g, certify_exactness, classify, complexity_of, eval, Complexity, EvalMode, Evaluator,
};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Tuples of length at most 2 over the elements of `g`.
fn short_tuples(g: &GroupSpec) -> Result<Vec<Vec<Element>>, String> {
    let el: Vec<Element> = g.elements().map_err(err)?.collect();
    let mut out = vec![Vec::new()];
    out.extend(el.iter().map(|a| vec![a.clone()]));
    for a in &el {
        for b in &el {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    Ok(out)
}

fn oracle_agrees_with_symbolic() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for p in [2, 3] {
        let corpus = GroupSpec::all_up_to(p, 4).map_err(err)?;
        ensure(corpus.len() == 12, || format!("p={p}: {} groups, expected 12", corpus.len()))?;
        let report = oracle_vs_symbolic_sweep(&corpus, 4, &GameConfig::default()).map_err(err)?;
        let bad = report.disagreements();
        let unknown = report.unknowns();
        ensure(report.records.len() == 12 * 12 * 5, || format!("p={p}: {} records", report.records.len()))?;
        ensure(bad.is_empty() && unknown.is_empty(), || {
            format!("p={p}: {} disagreements, {} unknown, first {:?}", bad.len(), unknown.len(), bad.first())
        })?;
        summary.push(format!("p={p}: {} instances agree", report.records.len()));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{}, 0 unknown", summary.join("; ")))
}

fn barker_agrees_with_oracle() -> Outcome {
    let mut summary = Vec::new();
    for p in [2, 3] {
        let (mut total, mut bad) = (0u64, 0u64);
        for g in GroupSpec::all_up_to(p, 3).map_err(err)? {
            let tuples = short_tuples(&g)?;
            let barker = Barker::new(&g).map_err(err)?;
            let mut session = GameSession::new(&g, &g, &GameConfig::default()).map_err(err)?;
            for x in &tuples {
                for y in tuples.iter().filter(|y| y.len() == x.len()) {
                    for n in 0..=3u32 {
                        total += 1;
                        let game = session.leq(0, x, y, n).map_err(err)?;
                        let heights = barker.leq(x, y, &Ordinal::nat(n as u64)).map_err(err)?;
                        if game != heights {
                            bad += 1;
                        }
                    }
                }
            }
        }
        ensure(bad == 0, || format!("p={p}: {bad} of {total} comparisons differ"))?;
        summary.push(format!("p={p}: {total} comparisons"));
    }
    Ok(format!("{}, 0 exceptions", summary.join("; ")))
}

fn extension_cap_is_sound() -> Outcome {
    let mut total = 0u64;
    for p in [2, 3] {
        let corpus = GroupSpec::all_up_to(p, 3).map_err(err)?;
        for a in &corpus {
            for b in &corpus {
                let mut base = GameSession::new(a, b, &GameConfig::default()).map_err(err)?;
                let raised_cfg = GameConfig { extension_cap: Some(base.extension_cap() + 2), ..GameConfig::default() };
                let mut raised = GameSession::new(a, b, &raised_cfg).map_err(err)?;
                let exhaustive_cfg = GameConfig { exhaustive: true, ..GameConfig::default() };
                let mut exhaustive = GameSession::new(a, b, &exhaustive_cfg).map_err(err)?;
                for n in 0..=4 {
                    total += 1;
                    let v = base.leq_groups(0, n);
                    ensure(v == raised.leq_groups(0, n) && v == exhaustive.leq_groups(0, n), || {
                        format!("{a} vs {b} at level {n}")
                    })?;
                }
                for x in a.elements().map_err(err)? {
                    for y in b.elements().map_err(err)? {
                        for n in 0..=3 {
                            total += 1;
                            let args = (&[x.clone()][..], &[y.clone()][..]);
                            let v = base.leq(0, args.0, args.1, n).map_err(err)?;
                            let w = raised.leq(0, args.0, args.1, n).map_err(err)?;
                            ensure(v == w, || format!("({a}, {x}) vs ({b}, {y}) at level {n}"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{total} verdicts unchanged by cap + 2 (whole-group verdicts also match exhaustive moves)"))
}

/// All maps `[0,5) → {0..3}`.
fn small_profiles() -> Vec<BTreeMap<u32, u64>> {
    (0..4u64.pow(5))
        .map(|mut code| {
            let mut f = BTreeMap::new();
            for k in 0..5 {
                if code % 4 != 0 {
                    f.insert(k, code % 4);
                }
                code /= 4;
            }
            f
        })
        .collect()
}

fn ulm_round_trip() -> Outcome {
    let profiles = small_profiles();
    let mut enumerated = 0;
    for p in [2, 3] {
        let groups: Vec<GroupSpec> =
            profiles.iter().map(|f| realize_finite_profile(p, f)).collect::<Result<_, _>>().map_err(err)?;
        for (f, g) in profiles.iter().zip(&groups) {
            ensure(&g.ulm_invariants() == f, || format!("p={p}: {f:?} realized as {g}"))?;
            if g.order().is_some_and(|n| n <= 1 << 10) {
                enumerated += 1;
                for k in 0..6 {
                    let by_count = ulm_invariant_by_enumeration(g, k).map_err(err)?;
                    ensure(by_count == f.get(&k).copied().unwrap_or(0), || format!("{g}: f({k}) = {by_count}"))?;
                }
            }
        }
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                ensure(!groups[i].is_isomorphic(&groups[j]), || format!("{} ≅ {}", groups[i], groups[j]))?;
            }
        }
    }
    Ok(format!(
        "{} profiles per prime round-trip, pairwise non-isomorphic; {enumerated} small groups recounted by enumeration",
        profiles.len()
    ))
}

fn scott_sentences_are_sound() -> Outcome {
    let maps = small_profiles();
    let mut checked = 0u64;
    for p in [2, 3] {
        let profiles: Vec<UlmProfile> =
            maps.iter().map(|f| UlmProfile::from_finite(p, f)).collect::<Result<_, _>>().map_err(err)?;
        let sentences: Vec<_> = profiles.iter().map(build_phi_g).collect::<Result<_, _>>().map_err(err)?;
        for (q, profile_q) in profiles.iter().enumerate() {
            let group = profile_q.realize().map_err(err)?;
            let mut ev = Evaluator::new(&group, EvalMode::Algebraic).map_err(err)?;
            for (pi, phi) in sentences.iter().enumerate() {
                checked += 1;
                let truth = ev.eval_with(phi, &[]).map_err(err)?;
                ensure(truth == (pi == q), || format!("Phi of {} in {group}: {truth}", profiles[pi]))?;
            }
        }
    }
    // Brute-force expansion on the groups small enough to search.
    let mut expanded = 0;
    for (p, support, max) in [(2u64, 3u32, 1u64), (3, 2, 1)] {
        let small: Vec<UlmProfile> = maps
            .iter()
            .filter(|f| f.iter().all(|(&k, &v)| k < support && v <= max))
            .map(|f| UlmProfile::from_finite(p, f))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        for a in &small {
            let phi = build_phi_g(a).map_err(err)?;
            for b in &small {
                let g = b.realize().map_err(err)?;
                expanded += 1;
                let truth = eval(&phi, &g, EvalMode::Expand).map_err(err)?;
                ensure(truth == (a == b), || format!("expanded Phi of {a} in {g}: {truth}"))?;
            }
        }
    }
    Ok(format!("{checked} evaluations by invariants, {expanded} by brute-force expansion, 0 failures"))
}

fn classification_table() -> Outcome {
    struct Row {
        name: &'static str,
        profile: UlmProfile,
        gamma: &'static str,
        shape: fn(Ordinal) -> Complexity,
        k: u64,
        exact: Option<Complexity>,
    }
    let row = |name, profile, gamma, shape: fn(Ordinal) -> Complexity, k, exact| Row {
        name,
        profile,
        gamma,
        shape,
        k,
        exact,
    };
    let d = Complexity::DSigma;
    let pi = Complexity::Pi;
    let rows = vec![
        row("length 1, Z_p", head_profile(2, &["1"]), "0", d, 2, None),
        row("length 3, finite top", head_profile(3, &["1", "0", "2"]), "0", d, 2, None),
        row("length 3, infinite top", head_profile(2, &["1", "0", "inf"]), "0", pi, 3, None),
        row("(Z_8)^w", head_profile(2, &["0", "0", "inf"]), "0", pi, 3, Some(Complexity::pi(2))),
        row("two infinite invariants", head_profile(3, &["inf", "inf"]), "0", pi, 3, Some(Complexity::pi(3))),
        row("length w", tail_profile(2, "1", "1"), "1", pi, 1, None),
        row("length w+2, finite top", bands(2, &[("0", "1", &[], "1"), ("1", "2", &["1", "2"], "0")]), "1", d, 2, None),
        row(
            "length w+2, infinite top",
            bands(2, &[("0", "1", &[], "1"), ("1", "2", &["inf", "1"], "0")]),
            "1",
            pi,
            3,
            None,
        ),
        row("length w*2", tail_profile(2, "2", "inf"), "2", pi, 1, None),
        row("length w^2", tail_profile(2, "w", "1"), "w", pi, 1, Some(Complexity::Pi(o("w+1")))),
    ];
    for r in &rows {
        let gamma = o(r.gamma);
        ensure(r.profile.length() == Ordinal::omega_compose(&gamma, r.profile.length().finite_part()), || {
            format!("{}: length {}", r.name, r.profile.length())
        })?;
        let expected = (r.shape)(two_gamma_plus(&gamma, r.k));
        let c = classify(&r.profile).map_err(err)?;
        ensure(c.upper == expected, || format!("{}: upper {} expected {expected}", r.name, c.upper))?;
        ensure(c.exact == r.exact, || format!("{}: exact {:?} expected {:?}", r.name, c.exact, r.exact))?;
        let phi = complexity_of(&build_phi_g(&r.profile).map_err(err)?).map_err(err)?;
        ensure(phi == c.upper, || format!("{}: sentence is {phi}, bound {}", r.name, c.upper))?;
    }
    ensure(two_gamma_plus(&o("w"), 1) == o("w+1"), || "2*w+1 != w+1".into())?;
    Ok(format!("{} fixtures match bounds, exact values and sentence complexity", rows.len()))
}

fn limit_length_certificates() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    for gamma in ["w", "w*2", "w^2"] {
        let cert = certify_exactness(&tail_profile(2, gamma, "1")).map_err(err)?;
        ensure(cert.is_valid(), || format!("certificate for length w*({gamma}) invalid:\n{cert}"))?;
        out.push(format!("{}: {}", cert.profile.length(), cert.complexity));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(out.join(", "))
}

fn lemma2_equivalence() -> Outcome {
    let mut parts = Vec::new();
    for (p, k) in [(2, 4), (3, 3)] {
        let failures = lemma2_fuzz(p, k, 1000, 1, false)?;
        ensure(failures.is_empty(), || failures[..failures.len().min(3)].join("\n"))?;
        parts.push(format!("p={p}, |G| <= {p}^{k}: 1000 trials"));
    }
    let inverted = lemma2_fuzz(2, 4, 50, 1, true)?;
    ensure(inverted.len() == 50, || "inverted predicate not caught".into())?;
    Ok(format!("{}, 0 counterexamples; inverted predicate caught", parts.join("; ")))
}

fn random_cnf(rng: &mut ChaCha8Rng, max_exp: u32, max_coeff: u64) -> Ordinal {
    let mut terms = Vec::new();
    for e in (0..=max_exp).rev() {
        if rng.gen_bool(0.5) {
            terms.push((e, rng.gen_range(1..=max_coeff)));
        }
    }
    Ordinal::from_terms(terms)
}

fn ordinal_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10_000 {
        let [a, b, c] = [0; 3].map(|_| random_cnf(&mut rng, 4, 9));
        let ctx = || format!("triple {i}: {a}, {b}, {c}");
        ensure(a.add(&b).add(&c) == a.add(&b.add(&c)), || format!("add not associative, {}", ctx()))?;
        ensure(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), || format!("mul not associative, {}", ctx()))?;
        ensure(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), || format!("not left distributive, {}", ctx()))?;
        let (lt, eq, gt) = (a < b, a == b, a > b);
        ensure([lt, eq, gt].iter().filter(|&&x| x).count() == 1, || format!("compare not total, {}", ctx()))?;
        ensure(!(a <= b && b <= a) || a == b, || format!("compare not antisymmetric, {}", ctx()))?;
        ensure(a.cmp(&b) == common::cmp(&cnf(&a), &cnf(&b)), || format!("compare differs from oracle, {}", ctx()))?;
        let (g, n) = a.omega_decompose();
        ensure(Ordinal::omega_compose(&g, n) == a, || format!("decompose round trip, {}", ctx()))?;
        let text = a.to_string();
        let back: Ordinal = text.parse().map_err(err)?;
        ensure(back == a && back.to_string() == text, || format!("parse/print round trip, {}", ctx()))?;
    }
    // The recursive definitions on small operands.
    for i in 0..2_000 {
        let [a, b] = [0; 2].map(|_| random_cnf(&mut rng, 2, 2));
        let ctx = || format!("pair {i}: {a}, {b}");
        ensure(a.add(&b) == ord(&common::add(&cnf(&a), &cnf(&b))), || format!("add differs from oracle, {}", ctx()))?;
        ensure(a.mul(&b) == ord(&common::mul(&cnf(&a), &cnf(&b))), || format!("mul differs from oracle, {}", ctx()))?;
    }
    Ok("10000 triples below w^5 satisfy the laws; 2000 small pairs match the recursive definitions".into())
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("game oracle agrees with the symbolic decision", oracle_agrees_with_symbolic),
        ("height conditions agree with the game oracle", barker_agrees_with_oracle),
        ("raising the extension cap changes no verdict", extension_cap_is_sound),
        ("Ulm invariants round-trip through realization", ulm_round_trip),
        ("Scott sentences hold exactly in their own group", scott_sentences_are_sound),
        ("classification table", classification_table),
        ("exactness certificates for limit lengths", limit_length_certificates),
        ("u-map / proper element equivalence", lemma2_equivalence),
        ("ordinal arithmetic laws", ordinal_laws),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{t:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{t:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
