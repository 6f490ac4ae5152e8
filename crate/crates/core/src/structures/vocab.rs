use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A relation symbol. Binary symbols may carry the background constraints
/// `symmetric` and `irreflexive`; every structure over the vocabulary must
/// satisfy them, so "all structures" over `{E/2 sym irrefl}` means all simple
/// graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
    pub symmetric: bool,
    pub irreflexive: bool,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        RelationSymbol {
            name: name.into(),
            arity,
            symmetric: false,
            irreflexive: false,
        }
    }

    /// Symmetric irreflexive binary relation (simple-graph edges).
    pub fn graph_edge(name: impl Into<String>) -> Self {
        RelationSymbol {
            name: name.into(),
            arity: 2,
            symmetric: true,
            irreflexive: true,
        }
    }
}

/// A function symbol; arity 0 is a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        FunctionSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// A finitary vocabulary. Symbol names are unique across relations and
/// functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    pub name: String,
    pub relations: Vec<RelationSymbol>,
    pub functions: Vec<FunctionSymbol>,
}

impl Vocabulary {
    pub fn new(
        name: impl Into<String>,
        relations: Vec<RelationSymbol>,
        functions: Vec<FunctionSymbol>,
    ) -> Result<Self> {
        let vocab = Vocabulary {
            name: name.into(),
            relations,
            functions,
        };
        vocab.validate()?;
        Ok(vocab)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for name in self.symbol_names() {
            if !seen.insert(name) {
                return Err(Error::InvalidVocabulary(format!(
                    "duplicate symbol `{name}` in vocabulary `{}`",
                    self.name
                )));
            }
        }
        for r in &self.relations {
            if (r.symmetric || r.irreflexive) && r.arity != 2 {
                return Err(Error::InvalidVocabulary(format!(
                    "relation `{}` has arity {} but sym/irrefl need arity 2",
                    r.name, r.arity
                )));
            }
        }
        Ok(())
    }

    pub fn symbol_names(&self) -> impl Iterator<Item = &str> {
        self.relations
            .iter()
            .map(|r| r.name.as_str())
            .chain(self.functions.iter().map(|f| f.name.as_str()))
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.symbol_names().any(|s| s == name)
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn has_constants(&self) -> bool {
        self.functions.iter().any(|f| f.arity == 0)
    }

    pub fn is_relational(&self) -> bool {
        self.functions.is_empty()
    }

    /// Same symbols with the same arities and flags; the vocabulary name is
    /// ignored.
    pub fn same_signature(&self, other: &Vocabulary) -> bool {
        self.relations == other.relations && self.functions == other.functions
    }

    /// Checks that every symbol of `self` occurs in `sup` with equal arity.
    pub fn check_sub_vocabulary(&self, sup: &Vocabulary) -> Result<()> {
        for r in &self.relations {
            match sup.relations.iter().find(|s| s.name == r.name) {
                Some(s) if s.arity == r.arity => {}
                Some(s) => {
                    return Err(Error::SymbolMismatch(format!(
                        "relation `{}` has arity {} but {} in `{}`",
                        r.name, r.arity, s.arity, sup.name
                    )))
                }
                None => {
                    return Err(Error::SymbolMismatch(format!(
                        "relation `{}` not in `{}`",
                        r.name, sup.name
                    )))
                }
            }
        }
        for f in &self.functions {
            match sup.functions.iter().find(|s| s.name == f.name) {
                Some(s) if s.arity == f.arity => {}
                Some(s) => {
                    return Err(Error::SymbolMismatch(format!(
                        "function `{}` has arity {} but {} in `{}`",
                        f.name, f.arity, s.arity, sup.name
                    )))
                }
                None => {
                    return Err(Error::SymbolMismatch(format!(
                        "function `{}` not in `{}`",
                        f.name, sup.name
                    )))
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.name)?;
        for r in &self.relations {
            write!(f, " rel {}/{}", r.name, r.arity)?;
            if r.symmetric {
                write!(f, " sym")?;
            }
            if r.irreflexive {
                write!(f, " irrefl")?;
            }
        }
        for s in &self.functions {
            write!(f, " fun {}/{}", s.name, s.arity)?;
        }
        write!(f, " }}")
    }
}
