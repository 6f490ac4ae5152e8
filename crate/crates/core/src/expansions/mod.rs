//! Vocabulary expansions of classes.
//!
//! A pseudo-universal class becomes universal after adding Skolem-style
//! functions that pick out closure elements. Any coherent class is the image
//! of a universal class under a reduct functor once every member is expanded
//! by functions enumerating a directed system of small strong substructures;
//! choosing closures for that system makes the functor pullback-full.
//! Padding by a fresh constant removes the empty structure, and adding
//! complement relations turns embeddings into homomorphisms.

mod functorial;
mod pad;
mod pullback;
mod shelah;
#[cfg(test)]
mod tests;

use std::fmt;
use std::sync::Arc;

use crate::classes::{Order, StructureClass};
use crate::error::{Error, Result};
use crate::limits::{directed_colimit, Diagram};
use crate::outcome::Outcome;
use crate::structures::{
    canonical_form, embedding_maps, subset, FunctionSymbol, Mask, Morphism, MorphismKind,
    Structure, Vocabulary,
};

pub use functorial::{closure_arity, functorial_expansion_universal, PointedIsoClass};
pub use pad::{emb_to_mod_translation, pad_nonempty, pad_structure, pad_vocab, Translation, PAD_CONSTANT};
pub use pullback::{check_pullback_full, FamilyLeg, PullbackFullWitness, DEFAULT_MAX_FAMILY};
pub use shelah::{
    check_k_double_prime, k_double_prime, shelah_expansion, shelah_expansion_with, SystemChoice,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// One function per closure-coding pointed class.
    Functorial,
    /// Functions enumerating a directed system of strong substructures.
    Shelah(SystemChoice),
    /// The closure system, so that strong substructures are closed.
    KDoublePrime,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Functorial => write!(f, "functorial"),
            Provenance::Shelah(c) => write!(f, "shelah/{c}"),
            Provenance::KDoublePrime => write!(f, "shelah/closure+closed-strong"),
        }
    }
}

#[derive(Debug, Clone)]
enum Interpretation {
    Functorial(Vec<PointedIsoClass>),
    Shelah {
        choice: SystemChoice,
        width: usize,
        arity: usize,
    },
}

/// A class together with an expansion of each of its members at scale.
#[derive(Debug, Clone)]
pub struct ExpandedClass {
    base: StructureClass,
    vocab: Arc<Vocabulary>,
    table: Vec<(Arc<Structure>, Arc<Structure>)>,
    provenance: Provenance,
    interpretation: Interpretation,
}

/// An expanded member and a subset on which an expansion property breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionWitness {
    pub member: Arc<Structure>,
    pub set: Mask,
    pub reason: String,
}

impl fmt::Display for ExpansionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "member {} set {} : {}",
            self.member.size(),
            subset::render(self.set),
            self.reason
        )
    }
}

impl ExpandedClass {
    fn build(
        base: &StructureClass,
        new_symbols: Vec<FunctionSymbol>,
        provenance: Provenance,
        interpretation: Interpretation,
    ) -> Result<Self> {
        let bv = base.vocab();
        for s in &new_symbols {
            if bv.has_symbol(&s.name) {
                return Err(Error::InvalidVocabulary(format!(
                    "generated symbol `{}` already occurs in `{}`",
                    s.name, bv.name
                )));
            }
        }
        let mut functions = bv.functions.clone();
        functions.extend(new_symbols);
        let vocab = Arc::new(Vocabulary::new(
            format!("{}+", bv.name),
            bv.relations.clone(),
            functions,
        )?);
        let mut e = ExpandedClass {
            base: base.clone(),
            vocab,
            table: Vec::new(),
            provenance,
            interpretation,
        };
        let table = base
            .members()
            .iter()
            .map(|m| Ok((m.clone(), Arc::new(e.expand(m)?))))
            .collect::<Result<Vec<_>>>()?;
        e.table = table;
        Ok(e)
    }

    pub fn base(&self) -> &StructureClass {
        &self.base
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Base members at scale paired with their expansions.
    pub fn entries(&self) -> &[(Arc<Structure>, Arc<Structure>)] {
        &self.table
    }

    pub fn expanded(&self) -> Vec<Arc<Structure>> {
        self.table.iter().map(|(_, x)| x.clone()).collect()
    }

    /// The symbols added to the base vocabulary.
    pub fn new_symbols(&self) -> &[FunctionSymbol] {
        &self.vocab.functions[self.base.vocab().functions.len()..]
    }

    /// Pointed classes indexing the added symbols of a functorial expansion.
    pub fn coding_classes(&self) -> Option<&[PointedIsoClass]> {
        match &self.interpretation {
            Interpretation::Functorial(c) => Some(c),
            Interpretation::Shelah { .. } => None,
        }
    }

    /// Number of elements listed by the enumeration functions, and the
    /// largest arity, for presentation expansions.
    pub fn shelah_shape(&self) -> Option<(usize, usize)> {
        match &self.interpretation {
            Interpretation::Shelah { width, arity, .. } => Some((*width, *arity)),
            Interpretation::Functorial(_) => None,
        }
    }

    /// The system `s ↦ M_s` of a presentation expansion on a base member,
    /// indexed by subset mask.
    pub fn system(&self, m: &Structure) -> Result<Option<Vec<Mask>>> {
        match &self.interpretation {
            Interpretation::Shelah { choice, .. } => {
                Ok(Some(shelah::system(&self.base, *choice, m)?))
            }
            Interpretation::Functorial(_) => Ok(None),
        }
    }

    /// Expansion of an arbitrary member of the base class.
    pub fn expand(&self, m: &Structure) -> Result<Structure> {
        match &self.interpretation {
            Interpretation::Functorial(classes) => {
                functorial::expand(&self.base, classes, &self.vocab, m)
            }
            Interpretation::Shelah {
                choice,
                width,
                arity,
            } => shelah::expand(&self.base, *choice, *width, *arity, &self.vocab, m),
        }
    }

    pub fn reduct(&self, m: &Structure) -> Result<Structure> {
        m.reduct(self.base.vocab())
    }

    /// Membership in the expanded class: the functorial image, the universal
    /// class of expansions whose generated substructures reduce to strong
    /// ones, or its refinement where strong substructures stay closed.
    pub fn contains(&self, m: &Structure) -> Result<bool> {
        let r = self.reduct(m)?;
        if !self.base.member(&r)? {
            return Ok(false);
        }
        match self.provenance {
            Provenance::Functorial => Ok(*m == self.expand(&r)?),
            Provenance::Shelah(_) => Ok(shelah::k_prime_violation(&self.base, m)?.is_none()),
            Provenance::KDoublePrime => Ok(shelah::k_prime_violation(&self.base, m)?.is_none()
                && shelah::k_double_prime_violation(&self.base, m)?.is_none()),
        }
    }

    /// Every closed subset of every expanded member reduces to a strong
    /// substructure and carries the expansion of its reduct.
    pub fn check_substructure_closed(&self) -> Result<Outcome<ExpansionWitness>> {
        for (_, x) in &self.table {
            let r = self.reduct(x)?;
            for mask in subset::subsets(x.size()) {
                if !x.is_closed(mask) {
                    continue;
                }
                let fail = |reason: &str| {
                    Ok(Outcome::Fail(ExpansionWitness {
                        member: x.clone(),
                        set: mask,
                        reason: reason.to_string(),
                    }))
                };
                let sub = r.induced(mask)?;
                if !self.base.member(&sub)? {
                    return fail("the reduct is not a member");
                }
                if !self.base.is_strong(&r, mask)? {
                    return fail("the reduct is not a strong substructure");
                }
                if x.induced(mask)? != self.expand(&sub)? {
                    return fail("the induced expansion differs from the expansion of the reduct");
                }
            }
        }
        Ok(Outcome::Pass)
    }

    /// Reduct is a bijection on hom-sets: the embeddings between expanded
    /// members are exactly the strong embeddings between the reducts.
    pub fn check_reduct_bijection(&self) -> Result<Outcome<ExpansionWitness>> {
        for (m, mx) in &self.table {
            for (n, nx) in &self.table {
                let lifted = embedding_maps(mx, nx)?;
                let base = self.base.k_embeddings(m, n)?;
                if lifted != base {
                    let extra = base
                        .iter()
                        .find(|f| !lifted.contains(f))
                        .or_else(|| lifted.iter().find(|f| !base.contains(f)))
                        .expect("the lists differ");
                    return Ok(Outcome::Fail(ExpansionWitness {
                        member: nx.clone(),
                        set: subset::mask_of(extra),
                        reason: format!(
                            "{} strong embeddings from {} but {} lifted ones",
                            base.len(),
                            m.compact(),
                            lifted.len()
                        ),
                    }));
                }
            }
        }
        Ok(Outcome::Pass)
    }

    /// The expanded members as an explicit class ordered by substructure.
    pub fn as_class(&self) -> Result<StructureClass> {
        let members: Vec<Structure> = self.table.iter().map(|(_, x)| (**x).clone()).collect();
        StructureClass::explicit(
            format!("{}+", self.base.name()),
            &self.vocab,
            &members,
            Order::Substructure,
            self.base.scale(),
        )
    }
}

/// The reduct from an expanded class back to its base.
#[derive(Debug, Clone)]
pub struct ReductFunctor {
    domain: ExpandedClass,
}

impl ReductFunctor {
    pub fn new(domain: ExpandedClass) -> Self {
        ReductFunctor { domain }
    }

    pub fn domain(&self) -> &ExpandedClass {
        &self.domain
    }

    pub fn codomain(&self) -> &StructureClass {
        &self.domain.base
    }

    pub fn object(&self, m: &Structure) -> Result<Structure> {
        self.domain.reduct(m)
    }

    /// Same underlying map between the reducts, so the functor is faithful.
    pub fn morphism(&self, f: &Morphism) -> Result<Morphism> {
        Morphism::new(
            Arc::new(self.object(&f.source)?),
            Arc::new(self.object(&f.target)?),
            f.map.clone(),
            MorphismKind::Embedding,
        )
    }

    /// Every codomain member at scale is the reduct of a domain object.
    pub fn check_object_surjective(&self) -> Result<Outcome<Arc<Structure>>> {
        let codes: Vec<_> = self
            .domain
            .table
            .iter()
            .map(|(_, x)| Ok(canonical_form(&self.object(x)?).code))
            .collect::<Result<_>>()?;
        for m in self.codomain().members() {
            if !codes.contains(&canonical_form(m).code) {
                return Ok(Outcome::Fail(m.clone()));
            }
        }
        Ok(Outcome::Pass)
    }

    /// Two-object systems along every domain embedding: the reduct system is
    /// a system of strong embeddings whose colimit is the reduct of the
    /// domain colimit.
    pub fn check_preserves_directed_colimits(&self) -> Result<Outcome<String>> {
        for (_, bx) in &self.domain.table {
            for (_, cx) in &self.domain.table {
                for e in embedding_maps(bx, cx)? {
                    let d = Diagram {
                        objects: vec![Arc::new(self.object(bx)?), Arc::new(self.object(cx)?)],
                        arrows: vec![(0, 1, e.clone())],
                    };
                    let what = format!(
                        "{} -> {} along {}",
                        d.objects[0].compact(),
                        d.objects[1].compact(),
                        crate::structures::render_map(&e)
                    );
                    match directed_colimit(self.codomain(), &d) {
                        Ok(c) if *c.cocone.apex == *d.objects[1] => {}
                        Ok(_) => return Ok(Outcome::Fail(format!("{what}: apex moved"))),
                        Err(err) => return Ok(Outcome::Fail(format!("{what}: {err}"))),
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    }
}

fn precondition_no_empty(class: &StructureClass) -> Result<()> {
    if class.members().iter().any(|m| m.is_empty()) {
        return Err(Error::precondition(
            format!("`{}` contains the empty structure; pad it first", class.name()),
            None,
        ));
    }
    Ok(())
}
