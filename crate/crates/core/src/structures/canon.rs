//! Canonical forms by colour refinement and individualisation.
//!
//! The code of a structure is the lexicographically least encoding over the
//! leaves of an isomorphism-invariant search tree. Each leaf is a discrete
//! colouring reached by repeatedly individualising an element of the first
//! non-singleton cell and refining. Pointed structures individualise the
//! point elements up front, in point order.

use std::collections::BTreeMap;
use std::fmt;

use super::structure::{tuple_index, Structure, Tuples};
use super::Elem;

/// Total-order key of an isomorphism class (of pointed structures when a
/// point is given).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code(Vec<u8>);

impl Code {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Hex rendering for reports.
    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({})", self.hex())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub code: Code,
    /// Relabelling from the input to the canonical representative:
    /// element `x` becomes `relabel[x]`.
    pub relabel: Vec<Elem>,
}

impl CanonicalForm {
    pub fn representative(&self, m: &Structure) -> Structure {
        m.relabel(&self.relabel)
    }
}

pub fn canonical_form(m: &Structure) -> CanonicalForm {
    canonical_form_pointed(m, &[])
}

/// Canonical form of `(m, point)`; two pointed structures get equal codes iff
/// some isomorphism maps one point tuple onto the other.
pub fn canonical_form_pointed(m: &Structure, point: &[Elem]) -> CanonicalForm {
    let n = m.size();
    let mut colours = vec![0u32; n];
    let mut next = 0u32;
    let mut pointed = vec![false; n];
    for &p in point {
        if !pointed[p] {
            pointed[p] = true;
            colours[p] = next;
            next += 1;
        }
    }
    for (x, c) in colours.iter_mut().enumerate() {
        if !pointed[x] {
            *c = next;
        }
    }
    let mut search = Search {
        m,
        point,
        best: None,
    };
    let start = refine(m, colours);
    search.descend(start);
    let (code, relabel) = search.best.expect("search visits at least one leaf");
    CanonicalForm {
        code: Code(code),
        relabel,
    }
}

pub fn canonical_code(m: &Structure) -> Code {
    canonical_form(m).code
}

/// Canonical representative together with the relabelling.
pub fn canonicalize(m: &Structure) -> (Structure, CanonicalForm) {
    let form = canonical_form(m);
    (form.representative(m), form)
}

struct Search<'a> {
    m: &'a Structure,
    point: &'a [Elem],
    best: Option<(Vec<u8>, Vec<Elem>)>,
}

impl Search<'_> {
    fn descend(&mut self, colours: Vec<u32>) {
        let n = colours.len();
        let mut cells: BTreeMap<u32, Vec<Elem>> = BTreeMap::new();
        for (x, &c) in colours.iter().enumerate() {
            cells.entry(c).or_default().push(x);
        }
        let target = cells.iter().find(|(_, members)| members.len() > 1);
        match target {
            None => {
                let perm: Vec<Elem> = colours.iter().map(|&c| c as Elem).collect();
                debug_assert!(n == 0 || perm.iter().max() == Some(&(n - 1)));
                let code = encode(self.m, self.point, &perm);
                let better = match &self.best {
                    None => true,
                    Some((best, _)) => code < *best,
                };
                if better {
                    self.best = Some((code, perm));
                }
            }
            Some((&cell, members)) => {
                let members = members.clone();
                for v in members {
                    let mut c: Vec<u32> = colours.iter().map(|&c| c * 2 + 1).collect();
                    c[v] = cell * 2;
                    self.descend(refine(self.m, c));
                }
            }
        }
    }
}

/// Ranks colours densely, preserving their order.
fn normalise(colours: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = colours.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    colours
        .iter()
        .map(|c| distinct.binary_search(c).expect("present") as u32)
        .collect()
}

/// Equitable-style refinement: splits cells by the multiset of coloured
/// tuples each element takes part in, until the partition is stable.
fn refine(m: &Structure, colours: Vec<u32>) -> Vec<u32> {
    let n = m.size();
    let vocab = m.vocab();
    let mut colours = normalise(&colours);
    loop {
        let mut sigs: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
        for (ri, r) in vocab.relations.iter().enumerate() {
            if r.arity == 0 {
                continue;
            }
            for t in Tuples::new(n, r.arity) {
                if !m.holds(ri, &t) {
                    continue;
                }
                let pattern: Vec<u32> = t.iter().map(|&x| colours[x]).collect();
                for (pos, &x) in t.iter().enumerate() {
                    let mut entry = vec![0, ri as u32, pos as u32];
                    entry.extend_from_slice(&pattern);
                    sigs[x].push(entry);
                }
            }
        }
        for (fi, f) in vocab.functions.iter().enumerate() {
            for t in Tuples::new(n, f.arity) {
                let out = m.apply(fi, &t);
                let mut pattern: Vec<u32> = t.iter().map(|&x| colours[x]).collect();
                pattern.push(colours[out]);
                for (pos, &x) in t.iter().enumerate() {
                    let mut entry = vec![1, fi as u32, pos as u32];
                    entry.extend_from_slice(&pattern);
                    sigs[x].push(entry);
                }
                let mut entry = vec![2, fi as u32];
                entry.extend_from_slice(&pattern);
                sigs[out].push(entry);
            }
        }
        for s in sigs.iter_mut() {
            s.sort_unstable();
        }
        let mut keyed: Vec<(u32, &Vec<Vec<u32>>)> =
            colours.iter().copied().zip(sigs.iter()).collect();
        keyed.sort();
        keyed.dedup();
        let refined: Vec<u32> = (0..n)
            .map(|x| {
                keyed
                    .binary_search(&(colours[x], &sigs[x]))
                    .expect("present") as u32
            })
            .collect();
        let before = colours.iter().max().map_or(0, |&c| c + 1);
        let after = refined.iter().max().map_or(0, |&c| c + 1);
        colours = refined;
        if after == before {
            return colours;
        }
    }
}

fn push_u16(out: &mut Vec<u8>, v: usize) {
    let v = u16::try_from(v).expect("desk-scale universes fit in u16");
    out.extend_from_slice(&v.to_be_bytes());
}

/// Encoding of `m` relabelled by `perm` (old to new). Starts with the size,
/// so codes of smaller structures sort first.
fn encode(m: &Structure, point: &[Elem], perm: &[Elem]) -> Vec<u8> {
    let n = m.size();
    let mut inverse = vec![0; n];
    for (old, &new) in perm.iter().enumerate() {
        inverse[new] = old;
    }
    let mut out = Vec::new();
    push_u16(&mut out, n);
    push_u16(&mut out, point.len());
    for &p in point {
        push_u16(&mut out, perm[p]);
    }
    let vocab = m.vocab();
    let mut old = Vec::new();
    for (ri, r) in vocab.relations.iter().enumerate() {
        for t in Tuples::new(n, r.arity) {
            old.clear();
            old.extend(t.iter().map(|&x| inverse[x]));
            out.push(m.rel_table(ri)[tuple_index(n, &old)] as u8);
        }
    }
    for (fi, f) in vocab.functions.iter().enumerate() {
        for t in Tuples::new(n, f.arity) {
            old.clear();
            old.extend(t.iter().map(|&x| inverse[x]));
            push_u16(&mut out, perm[m.fun_table(fi)[tuple_index(n, &old)]]);
        }
    }
    out
}
