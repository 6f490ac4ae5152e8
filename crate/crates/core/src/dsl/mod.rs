//! The workspace language: vocabularies, structures and classes in a
//! line-oriented text format with `#` comments.
//!
//! ```text
//! vocab graph { rel E/2 sym irrefl }
//! structure K3 : graph { universe 3; rel E: (0,1) (0,2) (1,2); }
//! class trianglefree : graph { kind forbid; forbidden K3; scale 4; }
//! ```
//!
//! Symmetric relations may list one direction of each pair. Every error
//! carries a `line:col` position and no partial workspace is returned.

mod lexer;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::classes::{Order, OrderPair, StructureClass, DEFAULT_SCALE};
use crate::error::Result;
use crate::structures::{
    render_tuple, Elem, FunctionSymbol, RelationSymbol, Structure, Tuples, Vocabulary,
};
use crate::tarski::DiagramType;

pub use lexer::Pos;
use lexer::{diagnostic, lex, Tok};

#[derive(Debug, Clone)]
pub struct StructureDecl {
    pub name: String,
    pub structure: Arc<Structure>,
    pub pos: Pos,
}

impl PartialEq for StructureDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.structure == other.structure
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Explicit,
    Forbid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderDecl {
    Substructure,
    /// `(sub, sup, map)` by structure name.
    Pairs(Vec<(String, String, Vec<Elem>)>),
}

#[derive(Debug, Clone)]
pub struct ClassDecl {
    pub name: String,
    pub vocab: String,
    pub kind: ClassKind,
    pub members: Vec<String>,
    pub forbidden: Vec<String>,
    pub order: OrderDecl,
    pub scale: Option<usize>,
    pub pos: Pos,
}

impl PartialEq for ClassDecl {
    fn eq(&self, o: &Self) -> bool {
        (&self.name, &self.vocab, self.kind, &self.members, &self.forbidden, &self.order, self.scale)
            == (&o.name, &o.vocab, o.kind, &o.members, &o.forbidden, &o.order, o.scale)
    }
}

/// A parsed and resolved workspace. Equality ignores source positions.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub vocabs: Vec<Arc<Vocabulary>>,
    pub structures: Vec<StructureDecl>,
    pub classes: Vec<ClassDecl>,
    built: Vec<StructureClass>,
}

impl PartialEq for Workspace {
    fn eq(&self, o: &Self) -> bool {
        self.vocabs == o.vocabs && self.structures == o.structures && self.classes == o.classes
    }
}

impl Workspace {
    pub fn vocab(&self, name: &str) -> Option<&Arc<Vocabulary>> {
        self.vocabs.iter().find(|v| v.name == name)
    }

    pub fn structure(&self, name: &str) -> Option<&Arc<Structure>> {
        self.structures
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.structure)
    }

    pub fn class(&self, name: &str) -> Option<&StructureClass> {
        self.built.iter().find(|c| c.name() == name)
    }

    pub fn class_names(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.name.as_str()).collect()
    }

    /// Workspace name of a structure equal to `m`, if any.
    pub fn name_of(&self, m: &Structure) -> Option<&str> {
        self.structures
            .iter()
            .find(|s| *s.structure == *m)
            .map(|s| s.name.as_str())
    }
}

pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        ws: Workspace {
            vocabs: Vec::new(),
            structures: Vec::new(),
            classes: Vec::new(),
            built: Vec::new(),
        },
    };
    p.workspace()?;
    Ok(p.ws)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    ws: Workspace,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl fmt::Display) -> Result<T> {
        Err(diagnostic(self.pos(), msg))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn punct(&mut self, p: &str) -> Result<()> {
        if self.is_punct(p) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{p}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.bump() {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (t, pos) => Err(diagnostic(pos, format!("expected {what}, found {t}"))),
        }
    }

    fn keyword(&mut self, w: &str) -> Result<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{w}`, found {}", self.peek()))
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        match self.bump() {
            (Tok::Num(n), _) => Ok(n),
            (t, pos) => Err(diagnostic(pos, format!("expected {what}, found {t}"))),
        }
    }

    fn workspace(&mut self) -> Result<()> {
        loop {
            match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Ident(w) if w == "vocab" => self.vocab_decl()?,
                Tok::Ident(w) if w == "structure" => self.structure_decl()?,
                Tok::Ident(w) if w == "class" => self.class_decl()?,
                t => {
                    return self.error(format!(
                        "expected `vocab`, `structure` or `class`, found {t}"
                    ))
                }
            }
        }
    }

    fn vocab_decl(&mut self) -> Result<()> {
        self.keyword("vocab")?;
        let (name, pos) = self.ident("a vocabulary name")?;
        if self.ws.vocab(&name).is_some() {
            return Err(diagnostic(pos, format!("vocabulary `{name}` is already defined")));
        }
        self.punct("{")?;
        let mut rels = Vec::new();
        let mut funs = Vec::new();
        while !self.is_punct("}") {
            if self.is_punct(";") {
                self.bump();
                continue;
            }
            let (kind, kpos) = self.ident("`rel` or `fun`")?;
            let (sym, _) = self.ident("a symbol name")?;
            self.punct("/")?;
            let arity = self.number("an arity")?;
            match kind.as_str() {
                "rel" => {
                    let mut r = RelationSymbol::new(sym, arity);
                    loop {
                        if self.is_word("sym") {
                            r.symmetric = true;
                        } else if self.is_word("irrefl") {
                            r.irreflexive = true;
                        } else {
                            break;
                        }
                        self.bump();
                    }
                    rels.push(r);
                }
                "fun" => funs.push(FunctionSymbol::new(sym, arity)),
                other => {
                    return Err(diagnostic(kpos, format!("expected `rel` or `fun`, found `{other}`")))
                }
            }
        }
        self.punct("}")?;
        let v = Vocabulary::new(name, rels, funs).map_err(|e| diagnostic(pos, e))?;
        self.ws.vocabs.push(Arc::new(v));
        Ok(())
    }

    fn tuple(&mut self) -> Result<Vec<Elem>> {
        self.punct("(")?;
        let mut t = Vec::new();
        while !self.is_punct(")") {
            if !t.is_empty() {
                self.punct(",")?;
            }
            t.push(self.number("an element")?);
        }
        self.punct(")")?;
        Ok(t)
    }

    fn structure_decl(&mut self) -> Result<()> {
        self.keyword("structure")?;
        let (name, pos) = self.ident("a structure name")?;
        if self.ws.structure(&name).is_some() {
            return Err(diagnostic(pos, format!("structure `{name}` is already defined")));
        }
        self.punct(":")?;
        let (vname, vpos) = self.ident("a vocabulary name")?;
        let vocab = self
            .ws
            .vocab(&vname)
            .cloned()
            .ok_or_else(|| diagnostic(vpos, format!("unknown vocabulary `{vname}`")))?;
        self.punct("{")?;
        self.keyword("universe")?;
        let size = self.number("a universe size")?;
        self.punct(";")?;
        let mut b = Structure::builder(&vocab, size);
        while !self.is_punct("}") {
            let spos = self.pos();
            let (kind, kpos) = self.ident("`rel` or `fun`")?;
            let (sym, _) = self.ident("a symbol name")?;
            self.punct(":")?;
            let here = |e| diagnostic(spos, format!("in structure `{name}`: {e}"));
            match kind.as_str() {
                "rel" => {
                    let ri = vocab.relation_index(&sym).ok_or_else(|| {
                        diagnostic(spos, format!("`{sym}` is not a relation of `{vname}`"))
                    })?;
                    let symmetric = vocab.relations[ri].symmetric;
                    while self.is_punct("(") {
                        let t = self.tuple()?;
                        if symmetric && t.len() == 2 {
                            b.relate_sym(&sym, t[0], t[1]).map_err(here)?;
                        } else {
                            b.relate(&sym, &t).map_err(here)?;
                        }
                    }
                }
                "fun" => {
                    if vocab.function_index(&sym).is_none() {
                        return Err(diagnostic(
                            spos,
                            format!("`{sym}` is not a function of `{vname}`"),
                        ));
                    }
                    while self.is_punct("(") {
                        let t = self.tuple()?;
                        self.punct("->")?;
                        let v = self.number("a value")?;
                        b.set(&sym, &t, v).map_err(here)?;
                    }
                }
                other => {
                    return Err(diagnostic(kpos, format!("expected `rel` or `fun`, found `{other}`")))
                }
            }
            self.punct(";")?;
        }
        self.punct("}")?;
        let s = b
            .build()
            .map_err(|e| diagnostic(pos, format!("in structure `{name}`: {e}")))?;
        self.ws.structures.push(StructureDecl {
            name,
            structure: Arc::new(s),
            pos,
        });
        Ok(())
    }

    fn structure_ref(&mut self, vocab: &Arc<Vocabulary>) -> Result<(String, Arc<Structure>)> {
        let (name, pos) = self.ident("a structure name")?;
        let s = self
            .ws
            .structure(&name)
            .cloned()
            .ok_or_else(|| diagnostic(pos, format!("unknown structure `{name}`")))?;
        if **s.vocab() != **vocab {
            return Err(diagnostic(
                pos,
                format!(
                    "structure `{name}` is over `{}`, not `{}`",
                    s.vocab().name,
                    vocab.name
                ),
            ));
        }
        Ok((name, s))
    }

    fn class_decl(&mut self) -> Result<()> {
        self.keyword("class")?;
        let (name, pos) = self.ident("a class name")?;
        if self.ws.class(&name).is_some() {
            return Err(diagnostic(pos, format!("class `{name}` is already defined")));
        }
        self.punct(":")?;
        let (vname, vpos) = self.ident("a vocabulary name")?;
        let vocab = self
            .ws
            .vocab(&vname)
            .cloned()
            .ok_or_else(|| diagnostic(vpos, format!("unknown vocabulary `{vname}`")))?;
        self.punct("{")?;
        let mut kind = None;
        let mut members = Vec::new();
        let mut forbidden = Vec::new();
        let mut order = OrderDecl::Substructure;
        let mut pairs = Vec::new();
        let mut scale = None;
        let mut member_structs = Vec::new();
        let mut forbidden_structs = Vec::new();
        while !self.is_punct("}") {
            let (stmt, spos) = self.ident("a class statement")?;
            match stmt.as_str() {
                "kind" => {
                    let (k, kpos) = self.ident("`explicit` or `forbid`")?;
                    kind = Some(match k.as_str() {
                        "explicit" => ClassKind::Explicit,
                        "forbid" => ClassKind::Forbid,
                        _ => {
                            return Err(diagnostic(
                                kpos,
                                format!("expected `explicit` or `forbid`, found `{k}`"),
                            ))
                        }
                    });
                }
                "members" => {
                    while let Tok::Ident(_) = self.peek() {
                        let (n, s) = self.structure_ref(&vocab)?;
                        members.push(n);
                        member_structs.push((*s).clone());
                    }
                }
                "forbidden" => {
                    while let Tok::Ident(_) = self.peek() {
                        let (n, s) = self.structure_ref(&vocab)?;
                        forbidden.push(n);
                        forbidden_structs.push(DiagramType::of_structure(&s));
                    }
                }
                "order" => {
                    if self.is_word("substructure") {
                        self.bump();
                        order = OrderDecl::Substructure;
                    } else {
                        self.keyword("pairs")?;
                        let mut list = Vec::new();
                        while self.is_punct("(") {
                            self.bump();
                            let (a, sa) = self.structure_ref(&vocab)?;
                            self.punct(",")?;
                            let (b, sb) = self.structure_ref(&vocab)?;
                            self.punct(",")?;
                            let mpos = self.pos();
                            let map = self.map(sa.size())?;
                            self.punct(")")?;
                            pairs.push((sa, sb, map.clone(), mpos));
                            list.push((a, b, map));
                        }
                        order = OrderDecl::Pairs(list);
                    }
                }
                "scale" => scale = Some(self.number("a scale")?),
                other => {
                    return Err(diagnostic(
                        spos,
                        format!("unknown class statement `{other}`"),
                    ))
                }
            }
            self.punct(";")?;
        }
        self.punct("}")?;
        let kind = kind.ok_or_else(|| diagnostic(pos, format!("class `{name}` has no `kind`")))?;
        let s = scale.unwrap_or(DEFAULT_SCALE);
        let class = match kind {
            ClassKind::Explicit => {
                if !forbidden.is_empty() {
                    return Err(diagnostic(pos, "explicit classes take `members`, not `forbidden`"));
                }
                let ord = match &order {
                    OrderDecl::Substructure => Order::Substructure,
                    OrderDecl::Pairs(_) => Order::Pairs(
                        pairs
                            .iter()
                            .map(|(a, b, m, _)| OrderPair {
                                sub: a.clone(),
                                sup: b.clone(),
                                map: m.clone(),
                            })
                            .collect(),
                    ),
                };
                StructureClass::explicit(name.clone(), &vocab, &member_structs, ord, s)
            }
            ClassKind::Forbid => {
                if !members.is_empty() || matches!(order, OrderDecl::Pairs(_)) {
                    return Err(diagnostic(
                        pos,
                        "forbid classes take `forbidden` and the substructure order",
                    ));
                }
                StructureClass::forbid(name.clone(), &vocab, &forbidden_structs, s)
            }
        };
        let mut class = class.map_err(|e| diagnostic(pos, format!("in class `{name}`: {e}")))?;
        for d in &self.ws.structures {
            if **d.structure.vocab() == *vocab {
                class.name_member(&d.structure, d.name.clone());
            }
        }
        self.ws.built.push(class);
        self.ws.classes.push(ClassDecl {
            name,
            vocab: vname,
            kind,
            members,
            forbidden,
            order,
            scale,
            pos,
        });
        Ok(())
    }

    /// `[i->j, ...]` listing every element of a universe of size `n` once.
    fn map(&mut self, n: usize) -> Result<Vec<Elem>> {
        let pos = self.pos();
        let mut entries: BTreeMap<Elem, Elem> = BTreeMap::new();
        self.punct("[")?;
        while !self.is_punct("]") {
            if !entries.is_empty() {
                self.punct(",")?;
            }
            let epos = self.pos();
            let i = self.number("an element")?;
            self.punct("->")?;
            let j = self.number("an element")?;
            if entries.insert(i, j).is_some() {
                return Err(diagnostic(epos, format!("element {i} is mapped twice")));
            }
        }
        self.punct("]")?;
        parse_map_entries(entries, n).map_err(|m| diagnostic(pos, m))
    }
}

fn parse_map_entries(entries: BTreeMap<Elem, Elem>, n: usize) -> std::result::Result<Vec<Elem>, String> {
    if entries.len() != n || entries.keys().enumerate().any(|(k, &i)| k != i) {
        return Err(format!("map must list each of the {n} source elements once"));
    }
    Ok(entries.into_values().collect())
}

/// Parses `0->1,1->2` (brackets optional).
pub fn parse_map(text: &str) -> std::result::Result<Vec<Elem>, String> {
    let body = text.trim().trim_start_matches('[').trim_end_matches(']').trim();
    let mut entries = BTreeMap::new();
    if !body.is_empty() {
        for item in body.split(',') {
            let (a, b) = item
                .split_once("->")
                .ok_or_else(|| format!("`{item}` is not of the form i->j"))?;
            let a: Elem = a.trim().parse().map_err(|_| format!("bad element `{a}`"))?;
            let b: Elem = b.trim().parse().map_err(|_| format!("bad element `{b}`"))?;
            if entries.insert(a, b).is_some() {
                return Err(format!("element {a} is mapped twice"));
            }
        }
    }
    let n = entries.len();
    parse_map_entries(entries, n)
}

pub fn render_map_dsl(map: &[Elem]) -> String {
    crate::structures::render_map(map)
}

fn write_structure(f: &mut fmt::Formatter<'_>, name: &str, s: &Structure) -> fmt::Result {
    let v = s.vocab();
    writeln!(f, "structure {name} : {} {{", v.name)?;
    writeln!(f, "  universe {};", s.size())?;
    for (ri, r) in v.relations.iter().enumerate() {
        write!(f, "  rel {}:", r.name)?;
        for t in s.rel_tuples(ri) {
            if r.symmetric && t[0] > t[1] {
                continue;
            }
            write!(f, " {}", render_tuple(&t))?;
        }
        writeln!(f, ";")?;
    }
    for (fi, fs) in v.functions.iter().enumerate() {
        write!(f, "  fun {}:", fs.name)?;
        for t in Tuples::new(s.size(), fs.arity) {
            write!(f, " {}->{}", render_tuple(&t), s.apply(fi, &t))?;
        }
        writeln!(f, ";")?;
    }
    writeln!(f, "}}")
}

/// Renders `s` as a standalone structure declaration.
pub fn structure_text(name: &str, s: &Structure) -> String {
    struct Show<'a>(&'a str, &'a Structure);
    impl fmt::Display for Show<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_structure(f, self.0, self.1)
        }
    }
    Show(name, s).to_string()
}

impl fmt::Display for Workspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vocabs {
            writeln!(f, "vocab {v}")?;
        }
        for d in &self.structures {
            writeln!(f)?;
            write_structure(f, &d.name, &d.structure)?;
        }
        for c in &self.classes {
            writeln!(f)?;
            writeln!(f, "class {} : {} {{", c.name, c.vocab)?;
            match c.kind {
                ClassKind::Explicit => {
                    writeln!(f, "  kind explicit;")?;
                    writeln!(f, "  members {};", c.members.join(" "))?;
                }
                ClassKind::Forbid => {
                    writeln!(f, "  kind forbid;")?;
                    if !c.forbidden.is_empty() {
                        writeln!(f, "  forbidden {};", c.forbidden.join(" "))?;
                    }
                }
            }
            match &c.order {
                OrderDecl::Substructure => {}
                OrderDecl::Pairs(pairs) => {
                    write!(f, "  order pairs")?;
                    for (a, b, m) in pairs {
                        write!(f, " ({a}, {b}, {})", render_map_dsl(m))?;
                    }
                    writeln!(f, ";")?;
                }
            }
            if let Some(s) = c.scale {
                writeln!(f, "  scale {s};")?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}
