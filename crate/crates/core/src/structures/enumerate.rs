use std::collections::BTreeMap;
use std::sync::Arc;

use super::canon::{canonicalize, Code};
use super::structure::{tuple_count, tuple_index, Structure, Tuples};
use super::vocab::Vocabulary;
use super::Elem;
use crate::error::{Error, Result};

/// Default ceiling on the number of labelled structures generated by one
/// enumeration.
pub const DEFAULT_CEILING: u128 = 4_000_000;

/// One canonical representative per isomorphism class of structures of size
/// at most `max_size`, ordered by canonical code (hence by size first).
pub fn enumerate_structures(vocab: &Arc<Vocabulary>, max_size: usize) -> Result<Vec<Structure>> {
    enumerate_structures_with_ceiling(vocab, max_size, DEFAULT_CEILING)
}

pub fn enumerate_structures_with_ceiling(
    vocab: &Arc<Vocabulary>,
    max_size: usize,
    ceiling: u128,
) -> Result<Vec<Structure>> {
    let mut total: u128 = 0;
    for n in 0..=max_size {
        total = total.saturating_add(labelled_count(vocab, n));
    }
    if total > ceiling {
        return Err(Error::ResourceLimit(format!(
            "{total} labelled {} structures up to size {max_size} exceed the ceiling {ceiling}",
            vocab.name
        )));
    }
    let mut classes: BTreeMap<Code, Structure> = BTreeMap::new();
    for n in 0..=max_size {
        for_each_labelled(vocab, n, &mut |s| {
            let (rep, form) = canonicalize(&s);
            classes.entry(form.code).or_insert(rep);
        });
    }
    Ok(classes.into_values().collect())
}

/// Free slots of relation `rel` at size `n`: one per orbit of tuples under the
/// relation's symmetry, skipping the diagonal of irreflexive relations.
fn relation_slots(vocab: &Vocabulary, rel: usize, n: usize) -> Vec<Vec<usize>> {
    let r = &vocab.relations[rel];
    let mut slots = Vec::new();
    for t in Tuples::new(n, r.arity) {
        if r.irreflexive && t[0] == t[1] {
            continue;
        }
        if r.symmetric {
            if t[0] > t[1] {
                continue;
            }
            let mut orbit = vec![tuple_index(n, &t)];
            if t[0] != t[1] {
                orbit.push(tuple_index(n, &[t[1], t[0]]));
            }
            slots.push(orbit);
        } else {
            slots.push(vec![tuple_index(n, &t)]);
        }
    }
    slots
}

fn labelled_count(vocab: &Vocabulary, n: usize) -> u128 {
    if n == 0 && vocab.has_constants() {
        return 0;
    }
    let mut count: u128 = 1;
    for ri in 0..vocab.relations.len() {
        let slots = relation_slots(vocab, ri, n).len() as u32;
        count = count.saturating_mul(2u128.saturating_pow(slots));
    }
    for f in &vocab.functions {
        let entries = tuple_count(n, f.arity) as u32;
        count = count.saturating_mul((n as u128).saturating_pow(entries));
    }
    count
}

/// Visits every labelled structure of size exactly `n`.
pub(crate) fn for_each_labelled(vocab: &Arc<Vocabulary>, n: usize, visit: &mut impl FnMut(Structure)) {
    if n == 0 && vocab.has_constants() {
        return;
    }
    let rel_slots: Vec<Vec<Vec<usize>>> = (0..vocab.relations.len())
        .map(|ri| relation_slots(vocab, ri, n))
        .collect();
    let fun_sizes: Vec<usize> = vocab
        .functions
        .iter()
        .map(|f| tuple_count(n, f.arity))
        .collect();

    // Odometer over relation bits then function values.
    let mut rel_bits: Vec<Vec<bool>> = rel_slots.iter().map(|s| vec![false; s.len()]).collect();
    let mut fun_vals: Vec<Vec<Elem>> = fun_sizes.iter().map(|&k| vec![0; k]).collect();
    loop {
        let rels: Vec<Vec<bool>> = vocab
            .relations
            .iter()
            .enumerate()
            .map(|(ri, r)| {
                let mut table = vec![false; tuple_count(n, r.arity)];
                for (slot, &on) in rel_slots[ri].iter().zip(&rel_bits[ri]) {
                    if on {
                        for &i in slot {
                            table[i] = true;
                        }
                    }
                }
                table
            })
            .collect();
        visit(Structure::from_tables(
            vocab.clone(),
            n,
            rels,
            fun_vals.clone(),
        ));
        if !advance(&mut rel_bits, &mut fun_vals, n) {
            break;
        }
    }
}

fn advance(rel_bits: &mut [Vec<bool>], fun_vals: &mut [Vec<Elem>], n: usize) -> bool {
    for table in fun_vals.iter_mut().rev() {
        for v in table.iter_mut().rev() {
            if *v + 1 < n {
                *v += 1;
                return true;
            }
            *v = 0;
        }
    }
    for bits in rel_bits.iter_mut().rev() {
        for b in bits.iter_mut().rev() {
            if !*b {
                *b = true;
                return true;
            }
            *b = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn pure_sets_one_class_per_size() {
        let v = fixtures::set_vocab();
        assert_eq!(enumerate_structures(&v, 3).unwrap().len(), 4);
    }

    #[test]
    fn simple_graphs_up_to_three() {
        let v = fixtures::graph_vocab();
        let all = enumerate_structures(&v, 3).unwrap();
        assert_eq!(all.len(), 8);
        assert!(all[0].is_empty());
    }

    #[test]
    fn constants_exclude_empty() {
        let v = fixtures::constant_vocab(&["c"]);
        let all = enumerate_structures(&v, 2).unwrap();
        assert!(all.iter().all(|s| !s.is_empty()));
        // size 1 and size 2 (the other element is indistinguishable)
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn ceiling_is_enforced() {
        let v = fixtures::digraph_vocab();
        assert!(matches!(
            enumerate_structures_with_ceiling(&v, 4, 1000),
            Err(Error::ResourceLimit(_))
        ));
    }
}
