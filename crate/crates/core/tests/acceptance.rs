//! The ten acceptance criteria, one test each. Every test prints a single
//! `criterion N ... pass|fail` line; run with `--nocapture` to see them.

use std::path::Path;
use std::sync::Arc;

use finclass::classes::StructureClass;
use finclass::cli::{invoke, Trailer};
use finclass::dsl::{parse_workspace, Workspace};
use finclass::expansions::{
    check_pullback_full, emb_to_mod_translation, functorial_expansion_universal, k_double_prime,
    pad_nonempty, shelah_expansion, PointedIsoClass, ReductFunctor,
};
use finclass::limits::{check_wide_pullbacks_exist, equalizer, LimitResult};
use finclass::structures::{
    enumerate_structures, homomorphism_maps, subset, Elem, Morphism, MorphismKind, Structure,
    Tuples,
};
use finclass::tarski::{minimal_forbidden, omits};
use finclass::Outcome;

fn corpus_path() -> String {
    format!("{}/corpus/corpus.ws", env!("CARGO_MANIFEST_DIR"))
}

fn corpus() -> Workspace {
    parse_workspace(&std::fs::read_to_string(corpus_path()).unwrap()).unwrap()
}

fn class(ws: &Workspace, name: &str) -> StructureClass {
    ws.class(name).unwrap_or_else(|| panic!("corpus class `{name}`")).clone()
}

fn all_classes(ws: &Workspace) -> Vec<StructureClass> {
    ws.class_names().into_iter().map(|n| class(ws, n)).collect()
}

fn at_most_four(c: &StructureClass) -> StructureClass {
    c.with_scale(c.scale().min(4))
}

fn report(n: usize, what: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "pass" } else { "fail" };
    println!("criterion {n} {what}: {verdict}");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn criterion_01_tarski_round_trip() {
    let ws = corpus();
    let mut failures = Vec::new();
    for name in ["trianglefree", "sets-le2", "allgraphs"] {
        let c = class(&ws, name).with_scale(4);
        let basis = minimal_forbidden(&c).unwrap();
        for m in enumerate_structures(c.vocab(), 4).unwrap() {
            if c.member(&m).unwrap() != omits(&m, &basis).unwrap() {
                failures.push(format!("{name}: {m}"));
            }
        }
    }
    report(1, "tarski round trip", &failures);
}

#[test]
fn criterion_02_closure_laws() {
    let ws = corpus();
    let mut failures = Vec::new();
    for name in ["initseg", "initseg0", "groups"] {
        let c = class(&ws, name);
        let cl = |m: &Structure, a| c.cl(m, a).unwrap().mask;
        for n in c.members() {
            let subsets = subset::subsets(n.size());
            for &a in &subsets {
                let ca = cl(n, a);
                if !subset::is_subset(a, ca) || cl(n, ca) != ca {
                    failures.push(format!("{name}: {n} {}", subset::render(a)));
                }
                for &b in &subsets {
                    if subset::is_subset(a, b) && !subset::is_subset(ca, cl(n, b)) {
                        failures.push(format!("{name}: not monotone on {n}"));
                    }
                }
            }
            for m in c.members() {
                for f in c.k_embeddings(m, n).unwrap() {
                    for a in subset::subsets(m.size()) {
                        let inside = subset::image(cl(m, a), &f);
                        if inside != cl(n, subset::image(a, &f)) {
                            failures.push(format!("{name}: cl depends on ambient {m} -> {n}"));
                        }
                    }
                }
            }
        }
    }
    report(2, "closure laws", &failures);
}

#[test]
fn criterion_03_implication_chain() {
    let ws = corpus();
    let mut failures = Vec::new();
    let mut universal_seen = 0;
    for c in all_classes(&ws) {
        let ai = c.check_admits_intersections().is_pass();
        let pu = ai && c.check_pseudo_universal().unwrap().is_pass();
        let u = c.check_universal().outcome.is_pass();
        universal_seen += usize::from(u);
        if (u && !pu) || (pu && !ai) {
            failures.push(format!("{}: universal {u} pseudo {pu} intersections {ai}", c.name()));
        }
    }
    assert!(universal_seen > 0);
    report(3, "implication chain", &failures);
}

#[test]
fn criterion_04_intersections_iff_wide_pullbacks() {
    let ws = corpus();
    let mut failures = Vec::new();
    let mut negative = false;
    for c in all_classes(&ws).iter().map(at_most_four) {
        if !c.check_coherence().is_pass() {
            continue;
        }
        let ai = c.check_admits_intersections().is_pass();
        let wp = check_wide_pullbacks_exist(&c).unwrap();
        if ai != wp.is_pass() {
            failures.push(format!("{}: intersections {ai} pullbacks {}", c.name(), wp.is_pass()));
        }
        if c.name() == "nonempty-sets" {
            negative = !ai && wp.witness().is_some();
        }
    }
    if !negative {
        failures.push("nonempty-sets should fail both checks".into());
    }
    report(4, "intersections iff wide pullbacks", &failures);
}

#[test]
fn criterion_05_equalizers() {
    let ws = corpus();
    let mut failures = Vec::new();
    let mut checked = 0;
    for c in all_classes(&ws).iter().map(at_most_four) {
        if !c.check_admits_intersections().is_pass() || !c.check_pseudo_universal().unwrap().is_pass() {
            continue;
        }
        for m in c.members() {
            for n in c.members() {
                let embs = c.k_embeddings(m, n).unwrap();
                for f in &embs {
                    for g in &embs {
                        let mk = |map: &Vec<Elem>| {
                            Morphism::new(m.clone(), n.clone(), map.clone(), MorphismKind::Embedding)
                                .unwrap()
                        };
                        let agree = (0..m.size())
                            .filter(|&x| f[x] == g[x])
                            .fold(0, |acc, x| acc | (1u64 << x));
                        match equalizer(&c, &mk(f), &mk(g)).unwrap() {
                            LimitResult::Limit(cert) => {
                                let got = subset::mask_of(&cert.cone.legs[0].map);
                                if got != agree || c.cl(m, agree).unwrap().mask != agree {
                                    failures.push(format!("{}: {m} -> {n}", c.name()));
                                }
                            }
                            LimitResult::None(w) => failures.push(format!("{}: {w}", c.name())),
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 0);
    report(5, "equalizers", &failures);
}

#[test]
fn criterion_06_functorial_expansion_of_groups() {
    let ws = corpus();
    let groups = class(&ws, "groups");
    let e = functorial_expansion_universal(&groups).unwrap();
    let mut failures = Vec::new();
    if let Outcome::Fail(w) = e.check_substructure_closed().unwrap() {
        failures.push(format!("not substructure-closed: {w}"));
    }
    if let Outcome::Fail(w) = e.check_reduct_bijection().unwrap() {
        failures.push(format!("no hom-set bijection: {w}"));
    }
    let mul = 0;
    let unit = 1;
    let base_funs = groups.vocab().functions.len();
    let inverse_like = |p: &PointedIsoClass| {
        let s = &p.shape;
        p.args.len() == 1 && s.apply(mul, &[p.value, p.args[0]]) == s.apply(unit, &[])
    };
    for (m, x) in e.entries() {
        let e_m = m.apply(unit, &[]);
        for a in m.universe() {
            // Brute-force inverse from the table.
            let inv = (0..m.size()).find(|&y| m.apply(mul, &[y, a]) == e_m).unwrap();
            let mut realized = false;
            for (i, p) in e.coding_classes().unwrap().iter().enumerate() {
                if !inverse_like(p) {
                    continue;
                }
                let v = x.apply(base_funs + i, &[a]);
                if PointedIsoClass::of(&groups, m, &[a], v).unwrap() != *p {
                    continue;
                }
                realized = true;
                if m.apply(mul, &[v, a]) != e_m || v != inv {
                    failures.push(format!("{m}: fc{i}({a}) = {v}"));
                }
            }
            if !realized {
                failures.push(format!("{m}: no inverse symbol realized at {a}"));
            }
        }
    }
    report(6, "functorial expansion of groups", &failures);
}

#[test]
fn criterion_07_presentation_expansion_of_initial_segments() {
    let ws = corpus();
    let c = class(&ws, "initseg");
    let e = shelah_expansion(&c, &c.estimate_ls()).unwrap();
    let mut failures = Vec::new();
    for (m, x) in e.entries() {
        for a in subset::subsets(x.size()) {
            let g = x.generated_mask(a);
            if !c.is_strong(m, g).unwrap() {
                failures.push(format!("{m}: generated {} is not strong", subset::render(g)));
            }
        }
    }
    let f = ReductFunctor::new(e);
    if let Outcome::Fail(m) = f.check_object_surjective().unwrap() {
        failures.push(format!("not surjective at {m}"));
    }
    report(7, "presentation expansion of initial segments", &failures);
}

#[test]
fn criterion_08_pullback_fullness_both_directions() {
    let ws = corpus();
    let mut failures = Vec::new();
    let mut negative = None;
    for c in all_classes(&ws).iter().map(at_most_four) {
        if !c.check_coherence().is_pass() {
            continue;
        }
        let c = if c.members().iter().any(|m| m.is_empty()) {
            pad_nonempty(&c).unwrap()
        } else {
            c
        };
        let ai = c.check_admits_intersections().is_pass();
        let e = shelah_expansion(&c, &c.estimate_ls()).unwrap();
        let e = if ai { k_double_prime(&e).unwrap() } else { e };
        let full = check_pullback_full(&ReductFunctor::new(e), 2).unwrap();
        if full.is_pass() != ai {
            failures.push(format!("{}: intersections {ai} pullback-full {}", c.name(), full.is_pass()));
        }
        if c.name() == "nonempty-sets" {
            negative = full.witness().map(|w| w.to_string());
        }
    }
    match negative {
        Some(w) => println!("nonempty-sets witness: {w}"),
        None => failures.push("nonempty-sets reported no witness".into()),
    }
    report(8, "pullback-fullness both directions", &failures);
}

/// Embeddings by trying every injective map.
fn brute_embeddings(a: &Structure, b: &Structure) -> usize {
    let n = a.size();
    Tuples::new(b.size(), n)
        .filter(|t| (0..n).all(|i| (0..i).all(|j| t[i] != t[j])))
        .filter(|t| {
            Tuples::new(n, 2).all(|p| a.holds(0, &p) == b.holds(0, &[t[p[0]], t[p[1]]]))
        })
        .count()
}

#[test]
fn criterion_09_embeddings_as_homomorphisms() {
    let ws = corpus();
    let graph = ws.vocab("graph").unwrap().clone();
    let t = emb_to_mod_translation(&graph).unwrap();
    let all: Vec<Arc<Structure>> = enumerate_structures(&graph, 3)
        .unwrap()
        .into_iter()
        .map(Arc::new)
        .collect();
    let mut failures = Vec::new();
    for a in &all {
        for b in &all {
            let emb = brute_embeddings(a, b);
            let hom = homomorphism_maps(&t.structure(a).unwrap(), &t.structure(b).unwrap())
                .unwrap()
                .len();
            if emb != hom {
                failures.push(format!("{a} -> {b}: emb {emb} hom {hom}"));
            }
        }
    }
    let k2 = ws.structure("K2").unwrap();
    let k3 = ws.structure("K3").unwrap();
    let hom = homomorphism_maps(&t.structure(k2).unwrap(), &t.structure(k3).unwrap()).unwrap();
    if hom.len() != 6 || brute_embeddings(k2, k3) != 6 {
        failures.push(format!("|emb(K2,K3)| = {}", hom.len()));
    }
    report(9, "embeddings as homomorphisms", &failures);
}

#[test]
fn criterion_10_determinism() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = std::fs::read_to_string(dir.join("cases.txt")).unwrap();
    let mut failures = Vec::new();
    let mut count = 0;
    for line in cases.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let mut parts = line.split_whitespace();
        let name = parts.next().unwrap();
        let code: i32 = parts.next().unwrap().parse().unwrap();
        let mut argv = vec!["finclass".to_string()];
        argv.extend(parts.map(str::to_string));
        argv.push("--workspace".into());
        argv.push(corpus_path());
        let first = invoke(argv.clone());
        let second = invoke(argv);
        let text = first.report.clone().unwrap_or_else(|| first.stderr.clone());
        if first != second {
            failures.push(format!("{name}: runs differ"));
        }
        if first.code != code {
            failures.push(format!("{name}: exit {} expected {code}", first.code));
        }
        if let Some(r) = &first.report {
            if Trailer::parse(r).map(|t| t.pass) != Ok(code == 0) {
                failures.push(format!("{name}: trailer does not match the exit code"));
            }
        }
        match std::fs::read_to_string(dir.join(format!("{name}.txt"))) {
            Ok(golden) if golden == text => {}
            _ => failures.push(format!("{name}: golden file mismatch")),
        }
        count += 1;
    }
    assert!(count >= 12);
    report(10, "determinism", &failures);
}
