use std::sync::Arc;

use crate::classes::{Order, OrderPair, StructureClass};
use crate::error::{Error, Result};
use crate::structures::{
    Elem, FunctionSymbol, Morphism, MorphismKind, RelationSymbol, Structure, Tuples, Vocabulary,
};

/// Name of the constant added by [`pad_nonempty`].
pub const PAD_CONSTANT: &str = "c";

/// The vocabulary with the constant added; irreflexive flags are dropped.
pub fn pad_vocab(v: &Vocabulary) -> Result<Arc<Vocabulary>> {
    if v.has_symbol(PAD_CONSTANT) {
        return Err(Error::InvalidVocabulary(format!(
            "`{PAD_CONSTANT}` already occurs in `{}`",
            v.name
        )));
    }
    let relations = v
        .relations
        .iter()
        .map(|r| RelationSymbol {
            irreflexive: false,
            ..r.clone()
        })
        .collect();
    let mut functions = v.functions.clone();
    functions.push(FunctionSymbol::new(PAD_CONSTANT, 0));
    Ok(Arc::new(Vocabulary::new(
        format!("{}+{PAD_CONSTANT}", v.name),
        relations,
        functions,
    )?))
}

/// Adds the element `0` named by the constant; old elements shift up by one.
/// Tuples touching the new element hold and are sent to it.
pub fn pad_structure(m: &Structure, vocab: &Arc<Vocabulary>) -> Structure {
    let n = m.size() + 1;
    let old = |t: &[Elem]| -> Option<Vec<Elem>> {
        t.iter().map(|&x| x.checked_sub(1)).collect()
    };
    let rels = (0..m.vocab().relations.len())
        .map(|ri| {
            Tuples::new(n, m.vocab().relations[ri].arity)
                .map(|t| old(&t).map_or(true, |o| m.holds(ri, &o)))
                .collect()
        })
        .collect();
    let mut funs: Vec<Vec<Elem>> = (0..m.vocab().functions.len())
        .map(|fi| {
            Tuples::new(n, m.vocab().functions[fi].arity)
                .map(|t| old(&t).map_or(0, |o| m.apply(fi, &o) + 1))
                .collect()
        })
        .collect();
    funs.push(vec![0]);
    Structure::from_tables(vocab.clone(), n, rels, funs)
}

fn pad_map(map: &[Elem]) -> Vec<Elem> {
    std::iter::once(0).chain(map.iter().map(|&x| x + 1)).collect()
}

/// The class of padded members, with inclusions fixing the new element. The
/// scale grows by one so that every member at the old scale survives.
pub fn pad_nonempty(class: &StructureClass) -> Result<StructureClass> {
    let vocab = pad_vocab(class.vocab())?;
    let members: Vec<Structure> = class
        .members()
        .iter()
        .map(|m| pad_structure(m, &vocab))
        .collect();
    let order = match class.order() {
        Order::Substructure => Order::Substructure,
        Order::Pairs(pairs) => Order::Pairs(
            pairs
                .iter()
                .map(|p| OrderPair {
                    sub: Arc::new(pad_structure(&p.sub, &vocab)),
                    sup: Arc::new(pad_structure(&p.sup, &vocab)),
                    map: pad_map(&p.map),
                })
                .collect(),
        ),
    };
    StructureClass::explicit(
        format!("{}+{PAD_CONSTANT}", class.name()),
        &vocab,
        &members,
        order,
        class.scale() + 1,
    )
}

/// Complement relations `not_R` and a binary `neq`, under which
/// homomorphisms between translates are the embeddings between originals.
#[derive(Debug, Clone)]
pub struct Translation {
    pub source: Arc<Vocabulary>,
    pub target: Arc<Vocabulary>,
}

pub fn emb_to_mod_translation(v: &Arc<Vocabulary>) -> Result<Translation> {
    let mut relations = v.relations.clone();
    for r in &v.relations {
        relations.push(RelationSymbol {
            name: format!("not_{}", r.name),
            arity: r.arity,
            symmetric: r.symmetric,
            irreflexive: false,
        });
    }
    relations.push(RelationSymbol::graph_edge("neq"));
    for r in &relations[v.relations.len()..] {
        if v.has_symbol(&r.name) {
            return Err(Error::InvalidVocabulary(format!(
                "`{}` already occurs in `{}`",
                r.name, v.name
            )));
        }
    }
    let target = Arc::new(Vocabulary::new(
        format!("{}-mod", v.name),
        relations,
        v.functions.clone(),
    )?);
    Ok(Translation {
        source: v.clone(),
        target,
    })
}

impl Translation {
    pub fn structure(&self, m: &Structure) -> Result<Structure> {
        if **m.vocab() != *self.source {
            return Err(Error::VocabularyMismatch {
                expected: self.source.name.clone(),
                found: m.vocab().name.clone(),
            });
        }
        let k = self.source.relations.len();
        let n = m.size();
        let mut rels: Vec<Vec<bool>> = (0..k).map(|ri| m.rel_table(ri).to_vec()).collect();
        for ri in 0..k {
            rels.push(m.rel_table(ri).iter().map(|b| !b).collect());
        }
        rels.push(Tuples::new(n, 2).map(|t| t[0] != t[1]).collect());
        let funs = (0..self.source.functions.len())
            .map(|fi| m.fun_table(fi).to_vec())
            .collect();
        Ok(Structure::from_tables(self.target.clone(), n, rels, funs))
    }

    pub fn morphism(&self, f: &Morphism) -> Result<Morphism> {
        Morphism::new(
            Arc::new(self.structure(&f.source)?),
            Arc::new(self.structure(&f.target)?),
            f.map.clone(),
            MorphismKind::Homomorphism,
        )
    }
}
