//! The `finclass` command line: argument parsing, command dispatch and
//! deterministic reports.
//!
//! Exit codes: 0 when the checked property holds, 1 when it fails (the
//! witness is in the report), 2 for usage, parse and precondition errors.

mod report;
#[cfg(test)]
mod tests;

use std::path::PathBuf;
use std::sync::Arc;

use clap::builder::PossibleValuesParser;
use clap::Parser;

use crate::classes::StructureClass;
use crate::dsl::{parse_map, parse_workspace, Workspace};
use crate::error::{Error, Result};
use crate::expansions::{
    check_k_double_prime, check_pullback_full, emb_to_mod_translation,
    functorial_expansion_universal, k_double_prime, pad_nonempty, pad_structure, pad_vocab,
    shelah_expansion, ExpandedClass, ReductFunctor, DEFAULT_MAX_FAMILY,
};
use crate::limits::{directed_colimit, equalizer, wide_pullback, Diagram, LimitResult};
use crate::multi::{is_generated, multicolimit, multiinitial_family, polyinitial_family, FamilyResult};
use crate::outcome::Outcome;
use crate::structures::{
    embedding_maps, homomorphism_maps, render_map, render_tuple, subset, Morphism, MorphismKind,
    Structure, Tuples,
};
use crate::tarski::{emit_universal_theory, minimal_forbidden};

pub use report::{Report, Trailer};

pub const COMMANDS: [&str; 18] = [
    "check-aec",
    "check-intersections",
    "check-pseudo-universal",
    "check-universal",
    "tarski",
    "equalizer",
    "pullback",
    "colimit",
    "multiinitial",
    "polyinitial",
    "multicolimit",
    "generated",
    "expand-universal",
    "expand-shelah",
    "kpp",
    "check-pullback-full",
    "translate-emb-mod",
    "pad",
];

#[derive(Debug, Clone, Parser)]
#[command(name = "finclass", version, about = "Exhaustive checks on finite abstract classes")]
pub struct Args {
    #[arg(value_parser = PossibleValuesParser::new(COMMANDS))]
    pub command: String,
    /// Workspace file.
    #[arg(long, default_value = "corpus.ws")]
    pub workspace: PathBuf,
    #[arg(long)]
    pub class: Option<String>,
    /// Structure by workspace name; repeatable.
    #[arg(long)]
    pub structure: Vec<String>,
    /// `SRC:TGT:0->1,1->2`; SRC and TGT are names or indices into the
    /// `--structure` list. Repeatable.
    #[arg(long)]
    pub map: Vec<String>,
    #[arg(long)]
    pub scale: Option<usize>,
    #[arg(long)]
    pub max_family: Option<usize>,
    /// Size bound for `generated`.
    #[arg(long)]
    pub bound: Option<usize>,
    /// Report destination, a path or `-`.
    #[arg(long, default_value = "-")]
    pub out: String,
}

impl Args {
    /// The invocation without the workspace path and output destination.
    pub fn echo(&self) -> String {
        let mut parts = vec!["$ finclass".to_string(), self.command.clone()];
        if let Some(c) = &self.class {
            parts.push(format!("--class {c}"));
        }
        for s in &self.structure {
            parts.push(format!("--structure {s}"));
        }
        for m in &self.map {
            parts.push(format!("--map {m}"));
        }
        if let Some(s) = self.scale {
            parts.push(format!("--scale {s}"));
        }
        if let Some(k) = self.max_family {
            parts.push(format!("--max-family {k}"));
        }
        if let Some(b) = self.bound {
            parts.push(format!("--bound {b}"));
        }
        parts.join(" ")
    }
}

/// Outcome of a full invocation, before anything is written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub report: Option<String>,
    pub stderr: String,
    pub code: i32,
}

/// Parses `argv` (program name first), reads the workspace and runs the
/// command.
pub fn invoke<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            return Invocation {
                report: None,
                stderr: e.render().to_string(),
                code: e.exit_code(),
            }
        }
    };
    let result = std::fs::read_to_string(&args.workspace)
        .map_err(|e| {
            Error::Diagnostic(format!("cannot read `{}`: {e}", args.workspace.display()))
        })
        .and_then(|text| parse_workspace(&text))
        .and_then(|ws| run(&args, &ws));
    match result {
        Ok(r) => Invocation {
            report: Some(r.to_string()),
            stderr: String::new(),
            code: r.exit_code(),
        },
        Err(e) => Invocation {
            report: None,
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}

/// Runs `argv` and writes the report to `--out`.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<T> = argv.into_iter().collect();
    let out = Args::try_parse_from(argv.clone()).map(|a| a.out).unwrap_or_default();
    let inv = invoke(argv);
    eprint!("{}", inv.stderr);
    if let Some(text) = inv.report {
        if out == "-" || out.is_empty() {
            print!("{text}");
        } else if let Err(e) = std::fs::write(&out, text) {
            eprintln!("error: cannot write `{out}`: {e}");
            return 2;
        }
    }
    inv.code
}

/// Runs a parsed command against a workspace.
pub fn run(args: &Args, ws: &Workspace) -> Result<Report> {
    let ctx = Ctx { args, ws };
    let scale = match &args.class {
        Some(_) => ctx.class()?.scale(),
        None => args.scale.unwrap_or(crate::classes::DEFAULT_SCALE),
    };
    let mut r = Report::new(args.echo(), scale);
    match args.command.as_str() {
        "check-aec" => ctx.check_aec(&mut r)?,
        "check-intersections" => ctx.check_intersections(&mut r)?,
        "check-pseudo-universal" => ctx.check_pseudo_universal(&mut r)?,
        "check-universal" => ctx.check_universal(&mut r)?,
        "tarski" => ctx.tarski(&mut r)?,
        "equalizer" => ctx.equalizer(&mut r)?,
        "pullback" => ctx.pullback(&mut r)?,
        "colimit" => ctx.colimit(&mut r)?,
        "multiinitial" => ctx.family(&mut r, false)?,
        "polyinitial" => ctx.family(&mut r, true)?,
        "multicolimit" => ctx.multicolimit(&mut r)?,
        "generated" => ctx.generated(&mut r)?,
        "expand-universal" => ctx.expand_universal(&mut r)?,
        "expand-shelah" => ctx.expand_shelah(&mut r)?,
        "kpp" => ctx.kpp(&mut r)?,
        "check-pullback-full" => ctx.pullback_full(&mut r)?,
        "translate-emb-mod" => ctx.translate(&mut r)?,
        "pad" => ctx.pad(&mut r)?,
        other => return Err(usage(format!("unknown command `{other}`"))),
    }
    Ok(r)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Diagnostic(msg.into())
}

fn verdict<W: std::fmt::Display>(r: &mut Report, label: &str, o: &Outcome<W>) {
    match o {
        Outcome::Pass => r.line(format!("{label}: pass")),
        Outcome::Fail(w) => {
            r.line(format!("{label}: fail"));
            r.fail(format!("{label}: {w}"));
        }
    }
}

struct Ctx<'a> {
    args: &'a Args,
    ws: &'a Workspace,
}

impl Ctx<'_> {
    fn class(&self) -> Result<StructureClass> {
        let name = self
            .args
            .class
            .as_deref()
            .ok_or_else(|| usage(format!("`{}` needs --class", self.args.command)))?;
        let c = self
            .ws
            .class(name)
            .ok_or_else(|| usage(format!("unknown class `{name}`")))?;
        Ok(match self.args.scale {
            Some(s) => c.with_scale(s),
            None => c.clone(),
        })
    }

    /// The class, padded with a constant when it contains the empty
    /// structure.
    fn nonempty_class(&self, r: &mut Report) -> Result<StructureClass> {
        let class = self.class()?;
        if !class.members().iter().any(|m| m.is_empty()) {
            return Ok(class);
        }
        let mut padded = pad_nonempty(&class)?;
        for m in class.members() {
            let p = pad_structure(m, padded.vocab());
            padded.name_member(&p, format!("{}+c", class.describe(m)));
        }
        r.line(format!(
            "class `{}` contains the empty structure; using `{}`",
            class.name(),
            padded.name()
        ));
        r.scale = padded.scale();
        Ok(padded)
    }

    fn structure(&self, name: &str) -> Result<Arc<Structure>> {
        self.ws
            .structure(name)
            .cloned()
            .ok_or_else(|| usage(format!("unknown structure `{name}`")))
    }

    fn structures(&self) -> Result<Vec<Arc<Structure>>> {
        self.args.structure.iter().map(|s| self.structure(s)).collect()
    }

    /// Resolves a map endpoint to an index into the `--structure` list when
    /// possible, else to a workspace structure.
    fn endpoint(&self, key: &str) -> Result<(Option<usize>, Arc<Structure>)> {
        if let Ok(i) = key.parse::<usize>() {
            let name = self
                .args
                .structure
                .get(i)
                .ok_or_else(|| usage(format!("no --structure at index {i}")))?;
            return Ok((Some(i), self.structure(name)?));
        }
        let idx = self.args.structure.iter().position(|s| s == key);
        Ok((idx, self.structure(key)?))
    }

    fn maps(&self) -> Result<Vec<(Option<usize>, Option<usize>, Morphism)>> {
        self.args
            .map
            .iter()
            .map(|spec| {
                let mut parts = spec.splitn(3, ':');
                let (Some(a), Some(b), Some(m)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(usage(format!("--map `{spec}` is not SRC:TGT:MAP")));
                };
                let (ia, sa) = self.endpoint(a)?;
                let (ib, sb) = self.endpoint(b)?;
                let map = parse_map(m).map_err(|e| usage(format!("--map `{spec}`: {e}")))?;
                let f = Morphism::new(sa, sb, map, MorphismKind::Embedding)?;
                Ok((ia, ib, f))
            })
            .collect()
    }

    fn diagram(&self) -> Result<Diagram> {
        let objects = self.structures()?;
        if objects.is_empty() {
            return Err(usage(format!("`{}` needs --structure", self.args.command)));
        }
        let mut arrows = Vec::new();
        for (spec, (a, b, f)) in self.args.map.iter().zip(self.maps()?) {
            let (Some(a), Some(b)) = (a, b) else {
                return Err(usage(format!("--map `{spec}` must join --structure entries")));
            };
            arrows.push((a, b, f.map));
        }
        Ok(Diagram { objects, arrows })
    }

    fn name(&self, class: &StructureClass, m: &Structure) -> String {
        match self.ws.name_of(m) {
            Some(n) => n.to_string(),
            None => class.describe(m),
        }
    }

    fn members_line(&self, r: &mut Report, class: &StructureClass) {
        let names: Vec<String> = class.members().iter().map(|m| self.name(class, m)).collect();
        r.line(format!(
            "class {} : {} members at scale {}: {}",
            class.name(),
            names.len(),
            class.scale(),
            names.join(" ")
        ));
    }

    fn check_aec(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        self.members_line(r, &class);
        verdict(r, "coherence", &class.check_coherence());
        let chain = class.check_chain_axioms();
        verdict(r, "chain axioms", &chain.outcome);
        r.line(format!(
            "chains checked: {}{}{}",
            chain.chains,
            if chain.structural { ", structural" } else { "" },
            if chain.vacuous_smoothness { ", smoothness vacuous" } else { "" }
        ));
        r.line(format!("ls bound: {}", class.estimate_ls()));
        Ok(())
    }

    fn check_intersections(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        self.members_line(r, &class);
        let o = class.check_admits_intersections();
        if let Outcome::Fail(w) = &o {
            r.line(format!("witness member: {}", self.name(&class, &w.member)));
        }
        verdict(r, "admits intersections", &o);
        Ok(())
    }

    /// Records the intersection check; `false` when it fails.
    fn require_intersections(&self, r: &mut Report, class: &StructureClass) -> bool {
        let o = class.check_admits_intersections();
        verdict(r, "admits intersections", &o);
        o.is_pass()
    }

    fn check_pseudo_universal(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        self.members_line(r, &class);
        if self.require_intersections(r, &class) {
            verdict(r, "pseudo-universal", &class.check_pseudo_universal()?);
        }
        Ok(())
    }

    fn check_universal(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        self.members_line(r, &class);
        let u = class.check_universal();
        verdict(r, "universal", &u.outcome);
        r.line(format!(
            "union closure: {}",
            if u.structural { "from the presentation" } else { "bounded check" }
        ));
        Ok(())
    }

    fn tarski(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        let u = class.check_universal();
        if let Outcome::Fail(w) = &u.outcome {
            verdict(r, "universal", &Outcome::Fail(w));
            return Ok(());
        }
        let basis = minimal_forbidden(&class)?;
        r.line(format!("gamma: {} configurations, complete to scale {}", basis.gamma.len(), basis.scale));
        for d in &basis.gamma {
            r.line(format!("  {} = {d}", self.name(&class, d.shape())));
        }
        r.line("theory:");
        for l in emit_universal_theory(&basis).lines() {
            r.line(format!("  {l}"));
        }
        Ok(())
    }

    fn limit(&self, r: &mut Report, res: LimitResult) {
        match res {
            LimitResult::Limit(c) => r.line(format!("limit: {c}")),
            LimitResult::None(w) => {
                r.line("limit: none");
                r.fail(w);
            }
        }
    }

    fn equalizer(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        let maps = self.maps()?;
        let [(_, _, f), (_, _, g)] = maps.as_slice() else {
            return Err(usage("`equalizer` needs exactly two --map"));
        };
        r.line(format!("f = {}  g = {}", render_map(&f.map), render_map(&g.map)));
        let res = equalizer(&class, f, g)?;
        if let LimitResult::Limit(c) = &res {
            let agree = subset::mask_of(&c.cone.legs[0].map);
            let closed = class.cl(&f.source, agree)?.mask == agree;
            r.line(format!(
                "agreement set {} is {}",
                subset::render(agree),
                if closed { "cl-closed" } else { "not cl-closed" }
            ));
            if !closed {
                r.fail(format!("agreement set {} is not cl-closed", subset::render(agree)));
            }
        }
        self.limit(r, res);
        Ok(())
    }

    fn pullback(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        let legs: Vec<Morphism> = self.maps()?.into_iter().map(|(_, _, f)| f).collect();
        if legs.is_empty() {
            return Err(usage("`pullback` needs --map"));
        }
        for l in &legs {
            r.line(format!("leg {}", render_map(&l.map)));
        }
        let res = wide_pullback(&class, &legs)?;
        self.limit(r, res);
        Ok(())
    }

    fn colimit(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        let d = self.diagram()?;
        let c = directed_colimit(&class, &d)?;
        r.line(format!(
            "colimit: object {} ({}) apex {}",
            c.top,
            self.args.structure[c.top],
            c.cocone.apex.compact()
        ));
        for (i, l) in c.cocone.legs.iter().enumerate() {
            r.line(format!("  leg {i}: {}", render_map(&l.map)));
        }
        r.line(format!(
            "smoothness checked against {} strong embeddings of the apex{}",
            c.upper_bounds,
            if c.degenerate { "; the system has a top element" } else { "" }
        ));
        Ok(())
    }

    fn family_result(&self, r: &mut Report, class: &StructureClass, res: FamilyResult) {
        match res {
            FamilyResult::Family(f) => {
                r.line(format!(
                    "{} family of {} objects, certified against {} objects at scale {}",
                    f.kind,
                    f.objects.len(),
                    f.checked,
                    f.scale
                ));
                for o in &f.objects {
                    let name = self.name(class, &o.apex);
                    if name == o.apex.compact() {
                        r.line(format!("  {o}"));
                    } else {
                        r.line(format!("  {name} = {o}"));
                    }
                }
            }
            FamilyResult::None(w) => {
                r.line("family: none");
                r.fail(w);
            }
        }
    }

    fn family(&self, r: &mut Report, poly: bool) -> Result<()> {
        let class = self.class()?;
        self.members_line(r, &class);
        let res = if poly {
            polyinitial_family(&class)?
        } else {
            multiinitial_family(&class)?
        };
        self.family_result(r, &class, res);
        Ok(())
    }

    fn multicolimit(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        let d = self.diagram()?;
        r.line(format!(
            "diagram: {} objects, {} arrows",
            d.objects.len(),
            d.arrows.len()
        ));
        let res = multicolimit(&class, &d)?;
        self.family_result(r, &class, res);
        Ok(())
    }

    fn generated(&self, r: &mut Report) -> Result<()> {
        let class = self.class()?;
        let [name] = self.args.structure.as_slice() else {
            return Err(usage("`generated` needs exactly one --structure"));
        };
        let m = self.structure(name)?;
        let bound = self.args.bound.unwrap_or(m.size() + 1);
        match is_generated(&class, &m, bound)? {
            Some(a) => r.line(format!("{name} = cl({})", subset::render(a))),
            None => {
                r.line(format!("{name}: no generating set of size below {bound}"));
                r.fail(format!("{name} is not the closure of fewer than {bound} elements"));
            }
        }
        Ok(())
    }

    fn expanded_members(&self, r: &mut Report, e: &ExpandedClass, from: usize) {
        let base = e.base();
        for (m, x) in e.entries() {
            r.line(format!("member {}:", self.name(base, m)));
            for (fi, f) in e.vocab().functions.iter().enumerate().skip(from) {
                let entries: Vec<String> = Tuples::new(x.size(), f.arity)
                    .map(|t| format!("{}->{}", render_tuple(&t), x.apply(fi, &t)))
                    .collect();
                r.line(format!("  {}: {}", f.name, entries.join(" ")));
            }
        }
    }

    fn symbols_line(&self, r: &mut Report, e: &ExpandedClass) {
        let syms: Vec<String> = e
            .new_symbols()
            .iter()
            .map(|f| format!("{}/{}", f.name, f.arity))
            .collect();
        r.line(format!(
            "vocabulary {} ({}) adds {} symbols: {}",
            e.vocab().name,
            e.provenance(),
            syms.len(),
            syms.join(" ")
        ));
    }

    fn expand_universal(&self, r: &mut Report) -> Result<()> {
        let class = self.nonempty_class(r)?;
        if !self.require_intersections(r, &class) {
            return Ok(());
        }
        let pu = class.check_pseudo_universal()?;
        verdict(r, "pseudo-universal", &pu);
        if !pu.is_pass() {
            return Ok(());
        }
        let e = functorial_expansion_universal(&class)?;
        self.symbols_line(r, &e);
        for (f, p) in e.new_symbols().iter().zip(e.coding_classes().unwrap_or_default()) {
            let point: Vec<String> = p.args.iter().map(|a| a.to_string()).collect();
            r.line(format!(
                "  {} <- ({}; {}) in {}",
                f.name,
                point.join(","),
                p.value,
                p.shape.compact()
            ));
        }
        let from = class.vocab().functions.len();
        self.expanded_members(r, &e, from);
        verdict(r, "substructure-closed", &e.check_substructure_closed()?);
        verdict(r, "reduct bijection on morphisms", &e.check_reduct_bijection()?);
        Ok(())
    }

    fn systems(&self, r: &mut Report, e: &ExpandedClass) -> Result<()> {
        let (width, arity) = e.shelah_shape().expect("presentation expansion");
        r.line(format!(
            "f{{i}}_{{a}}(x) is element i mod |M_s| of M_s for s the range of x; width {width}, arities 0..={arity}"
        ));
        for (m, _) in e.entries() {
            r.line(format!("member {}:", self.name(e.base(), m)));
            let sys = e.system(m)?.expect("presentation expansion");
            for s in subset::subsets(m.size()) {
                let ms = subset::elements(sys[s as usize]);
                let cs: Vec<String> = (0..width)
                    .map(|i| ms[i % ms.len()].to_string())
                    .collect();
                r.line(format!(
                    "  {} -> {} : {}",
                    subset::render(s),
                    subset::render(sys[s as usize]),
                    cs.join(" ")
                ));
            }
        }
        Ok(())
    }

    fn functor_checks(&self, r: &mut Report, f: &ReductFunctor) -> Result<()> {
        let mut closure = Outcome::Pass;
        for x in f.domain().expanded() {
            if !f.domain().contains(&x)? {
                closure = Outcome::Fail(format!("expanded member {} is outside the class", x.compact()));
                break;
            }
        }
        verdict(r, "expanded members in the class", &closure);
        let surj = f.check_object_surjective()?.map(|m| format!("{} has no preimage", m.compact()));
        verdict(r, "reduct object-surjective", &surj);
        verdict(r, "reduct preserves directed colimits", &f.check_preserves_directed_colimits()?);
        Ok(())
    }

    fn expand_shelah(&self, r: &mut Report) -> Result<()> {
        let class = self.nonempty_class(r)?;
        let co = class.check_coherence();
        verdict(r, "coherence", &co);
        if !co.is_pass() {
            return Ok(());
        }
        let ls = class.estimate_ls();
        r.line(format!("ls bound: {ls}"));
        let e = shelah_expansion(&class, &ls)?;
        self.symbols_line(r, &e);
        self.systems(r, &e)?;
        self.functor_checks(r, &ReductFunctor::new(e))
    }

    fn kpp(&self, r: &mut Report) -> Result<()> {
        let class = self.nonempty_class(r)?;
        if !self.require_intersections(r, &class) {
            return Ok(());
        }
        let co = class.check_coherence();
        verdict(r, "coherence", &co);
        if !co.is_pass() {
            return Ok(());
        }
        let e = k_double_prime(&shelah_expansion(&class, &class.estimate_ls())?)?;
        self.symbols_line(r, &e);
        self.systems(r, &e)?;
        verdict(r, "strong substructures closed", &check_k_double_prime(&e)?);
        self.functor_checks(r, &ReductFunctor::new(e))
    }

    fn pullback_full(&self, r: &mut Report) -> Result<()> {
        let class = self.nonempty_class(r)?;
        let co = class.check_coherence();
        verdict(r, "coherence", &co);
        if !co.is_pass() {
            return Ok(());
        }
        let ai = class.check_admits_intersections().is_pass();
        let e = shelah_expansion(&class, &class.estimate_ls())?;
        let e = if ai { k_double_prime(&e)? } else { e };
        let max = self.args.max_family.unwrap_or(DEFAULT_MAX_FAMILY);
        r.line(format!(
            "functor: reduct from {} ({}), {} domain objects, families of at most {max} legs",
            e.vocab().name,
            e.provenance(),
            e.entries().len()
        ));
        let f = ReductFunctor::new(e);
        verdict(r, "pullback-full", &check_pullback_full(&f, max)?);
        Ok(())
    }

    fn translate(&self, r: &mut Report) -> Result<()> {
        let mut pairs = Vec::new();
        let vocab = if self.args.class.is_some() {
            let class = self.class()?;
            for a in class.members() {
                for b in class.members() {
                    pairs.push((self.name(&class, a), a.clone(), self.name(&class, b), b.clone()));
                }
            }
            class.vocab().clone()
        } else {
            let ss = self.structures()?;
            let [a, b] = ss.as_slice() else {
                return Err(usage("`translate-emb-mod` needs --class or two --structure"));
            };
            let names = &self.args.structure;
            pairs.push((names[0].clone(), a.clone(), names[1].clone(), b.clone()));
            a.vocab().clone()
        };
        let t = emb_to_mod_translation(&vocab)?;
        let syms: Vec<String> = t
            .target
            .relations
            .iter()
            .map(|x| format!("{}/{}", x.name, x.arity))
            .collect();
        r.line(format!("translation {} -> {}: {}", t.source.name, t.target.name, syms.join(" ")));
        for (na, a, nb, b) in &pairs {
            let emb = embedding_maps(a, b)?.len();
            let hom = homomorphism_maps(&t.structure(a)?, &t.structure(b)?)?.len();
            r.line(format!("{na} -> {nb} : emb {emb} hom {hom}"));
            if emb != hom {
                r.fail(format!("{na} -> {nb}: emb {emb} but hom {hom}"));
            }
        }
        Ok(())
    }

    fn pad(&self, r: &mut Report) -> Result<()> {
        if self.args.class.is_none() {
            let ss = self.structures()?;
            if ss.is_empty() {
                return Err(usage("`pad` needs --class or --structure"));
            }
            for (name, s) in self.args.structure.iter().zip(&ss) {
                let v = pad_vocab(s.vocab())?;
                r.line(format!("{name}+c = {}", pad_structure(s, &v).compact()));
            }
            return Ok(());
        }
        let class = self.class()?;
        let padded = pad_nonempty(&class)?;
        r.line(format!("padded class {} over {}", padded.name(), padded.vocab().name));
        let v = padded.vocab().clone();
        let pads: Vec<Structure> = class.members().iter().map(|m| pad_structure(m, &v)).collect();
        for (m, p) in class.members().iter().zip(&pads) {
            r.line(format!("  {}+c = {}", self.name(&class, m), p.compact()));
        }
        for (i, m) in class.members().iter().enumerate() {
            for (j, n) in class.members().iter().enumerate() {
                let base = class.k_embeddings(m, n)?.len();
                let lifted = padded.k_embeddings(&pads[i], &pads[j])?.len();
                if base != lifted {
                    r.fail(format!(
                        "{} -> {}: {base} strong embeddings but {lifted} after padding",
                        self.name(&class, m),
                        self.name(&class, n)
                    ));
                }
            }
        }
        r.line(format!(
            "strong embedding counts preserved on {} pairs: {}",
            pads.len() * pads.len(),
            if r.pass { "yes" } else { "no" }
        ));
        Ok(())
    }
}
