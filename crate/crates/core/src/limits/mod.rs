//! Limits and directed colimits in the category of strong embeddings of a
//! class, with universal properties verified against every competing cone
//! whose apex is a member at scale.

use std::fmt;
use std::sync::Arc;

use crate::classes::StructureClass;
use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::structures::{
    compose_maps, render_map, subset, Elem, Mask, Morphism, MorphismKind, Structure,
};

#[cfg(test)]
mod tests;

/// An apex with one leg per diagram object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: Arc<Structure>,
    pub legs: Vec<Morphism>,
}

/// A competing cone and its unique factorisation through the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mediation {
    pub apex: Arc<Structure>,
    pub legs: Vec<Vec<Elem>>,
    pub mediator: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitCertificate {
    pub cone: Cone,
    pub log: Vec<Mediation>,
    pub scale: usize,
}

impl fmt::Display for LimitCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let legs: Vec<String> = self.cone.legs.iter().map(|l| render_map(&l.map)).collect();
        write!(
            f,
            "apex {} legs {} ; {} competing cones factor uniquely at scale {}",
            self.cone.apex.compact(),
            legs.join(" "),
            self.log.len(),
            self.scale
        )
    }
}

/// Why no limit was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoLimit {
    pub ambient: Arc<Structure>,
    pub set: Mask,
    pub reason: String,
}

impl fmt::Display for NoLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} in {}: {}",
            subset::render(self.set),
            self.ambient.compact(),
            self.reason
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitResult {
    Limit(LimitCertificate),
    None(NoLimit),
}

impl LimitResult {
    pub fn certificate(&self) -> Option<&LimitCertificate> {
        match self {
            LimitResult::Limit(c) => Some(c),
            LimitResult::None(_) => None,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, LimitResult::Limit(_))
    }
}

fn require_k_embedding(class: &StructureClass, f: &Morphism) -> Result<()> {
    if !class.member(&f.source)? || !class.member(&f.target)? {
        return Err(Error::precondition(
            format!("morphism between non-members of `{}`", class.name()),
            Some(render_map(&f.map)),
        ));
    }
    if !class.is_k_embedding(&f.source, &f.target, &f.map)? {
        return Err(Error::precondition(
            format!("not a strong embedding of `{}`", class.name()),
            Some(render_map(&f.map)),
        ));
    }
    Ok(())
}

fn inverse_on_image(map: &[Elem], target_size: usize) -> Vec<Option<Elem>> {
    let mut inv = vec![None; target_size];
    for (x, &y) in map.iter().enumerate() {
        inv[y] = Some(x);
    }
    inv
}

/// Equalizer of `f, g: M -> N` as the inclusion of the agreement set, when
/// that set is a closed strong substructure.
pub fn equalizer(class: &StructureClass, f: &Morphism, g: &Morphism) -> Result<LimitResult> {
    require_k_embedding(class, f)?;
    require_k_embedding(class, g)?;
    if *f.source != *g.source || *f.target != *g.target {
        return Err(Error::BoundaryMismatch(
            "equalizer needs parallel morphisms".into(),
        ));
    }
    let m = f.source.clone();
    let agree: Mask = (0..m.size())
        .filter(|&x| f.map[x] == g.map[x])
        .fold(0, |acc, x| acc | (1u64 << x));
    let cl = class.cl(&m, agree)?;
    if cl.mask != agree || !cl.strong {
        let reason = if cl.mask != agree {
            format!("closure {} leaves the agreement set", subset::render(cl.mask))
        } else {
            "agreement set is not a strong substructure".to_string()
        };
        return Ok(LimitResult::None(NoLimit {
            ambient: m,
            set: agree,
            reason,
        }));
    }
    let apex = Arc::new(m.induced(agree)?);
    let inc = subset::elements(agree);
    let cone = Cone {
        apex: apex.clone(),
        legs: vec![
            Morphism::new(apex.clone(), m.clone(), inc.clone(), MorphismKind::Embedding)?,
            Morphism::new(
                apex.clone(),
                f.target.clone(),
                compose_maps(&f.map, &inc),
                MorphismKind::Embedding,
            )?,
        ],
    };
    let mut log = Vec::new();
    for e in class.members() {
        for h in class.k_embeddings(e, &m)? {
            if compose_maps(&f.map, &h) != compose_maps(&g.map, &h) {
                continue;
            }
            let mediators: Vec<Vec<Elem>> = class
                .k_embeddings(e, &apex)?
                .into_iter()
                .filter(|u| compose_maps(&inc, u) == h)
                .collect();
            if mediators.len() != 1 {
                return Ok(LimitResult::None(NoLimit {
                    ambient: m,
                    set: agree,
                    reason: format!(
                        "competing cone {} from {} has {} mediators",
                        render_map(&h),
                        e.compact(),
                        mediators.len()
                    ),
                }));
            }
            let fh = compose_maps(&f.map, &h);
            log.push(Mediation {
                apex: e.clone(),
                legs: vec![h, fh],
                mediator: mediators.into_iter().next().expect("one"),
            });
        }
    }
    Ok(LimitResult::Limit(LimitCertificate {
        cone,
        log,
        scale: class.scale(),
    }))
}

/// Wide pullback of strong embeddings `B_i -> N` as the intersection of
/// their images.
pub fn wide_pullback(class: &StructureClass, legs: &[Morphism]) -> Result<LimitResult> {
    let Some(first) = legs.first() else {
        return Err(Error::precondition("wide pullback of an empty family", None));
    };
    for l in legs {
        require_k_embedding(class, l)?;
        if *l.target != *first.target {
            return Err(Error::BoundaryMismatch(
                "wide pullback legs need a common target".into(),
            ));
        }
    }
    let n = first.target.clone();
    let meet = legs.iter().fold(subset::full(n.size()), |m, l| m & l.image());
    if !class.member(&n.induced(meet)?)? || !class.is_strong(&n, meet)? {
        return Ok(LimitResult::None(NoLimit {
            ambient: n,
            set: meet,
            reason: "intersection of the images is not a strong substructure".into(),
        }));
    }
    let apex = Arc::new(n.induced(meet)?);
    let inc = subset::elements(meet);
    let inverses: Vec<Vec<Option<Elem>>> =
        legs.iter().map(|l| inverse_on_image(&l.map, n.size())).collect();
    let mut projections = Vec::new();
    for (l, inv) in legs.iter().zip(&inverses) {
        let p: Vec<Elem> = inc.iter().map(|&y| inv[y].expect("inside image")).collect();
        if !class.is_k_embedding(&apex, &l.source, &p)? {
            return Ok(LimitResult::None(NoLimit {
                ambient: n,
                set: meet,
                reason: format!(
                    "projection {} into {} is not a strong embedding",
                    render_map(&p),
                    l.source.compact()
                ),
            }));
        }
        projections.push(Morphism::new(
            apex.clone(),
            l.source.clone(),
            p,
            MorphismKind::Embedding,
        )?);
    }
    let cone = Cone {
        apex: apex.clone(),
        legs: projections.clone(),
    };
    let mut log = Vec::new();
    for e in class.members() {
        for q0 in class.k_embeddings(e, &first.source)? {
            let h = compose_maps(&first.map, &q0);
            // The remaining legs are forced by injectivity of each `f_i`.
            let mut qs = vec![q0.clone()];
            let mut ok = true;
            for (l, inv) in legs.iter().zip(&inverses).skip(1) {
                let Some(q) = h.iter().map(|&y| inv[y]).collect::<Option<Vec<Elem>>>() else {
                    ok = false;
                    break;
                };
                if !class.is_k_embedding(e, &l.source, &q)? {
                    ok = false;
                    break;
                }
                qs.push(q);
            }
            if !ok {
                continue;
            }
            let mediators: Vec<Vec<Elem>> = class
                .k_embeddings(e, &apex)?
                .into_iter()
                .filter(|u| compose_maps(&projections[0].map, u) == q0)
                .collect();
            if mediators.len() != 1 {
                return Ok(LimitResult::None(NoLimit {
                    ambient: n,
                    set: meet,
                    reason: format!(
                        "competing cone from {} has {} mediators",
                        e.compact(),
                        mediators.len()
                    ),
                }));
            }
            log.push(Mediation {
                apex: e.clone(),
                legs: qs,
                mediator: mediators.into_iter().next().expect("one"),
            });
        }
    }
    Ok(LimitResult::Limit(LimitCertificate {
        cone,
        log,
        scale: class.scale(),
    }))
}

/// A finite diagram: objects and arrows `from -> to` given by element maps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub objects: Vec<Arc<Structure>>,
    pub arrows: Vec<(usize, usize, Vec<Elem>)>,
}

impl Diagram {
    pub fn single(m: Arc<Structure>) -> Self {
        Diagram {
            objects: vec![m],
            arrows: vec![],
        }
    }

    /// Composite maps from every object along arrow paths, keyed by
    /// (source, target); `Err` when two paths disagree.
    pub(crate) fn path_maps(&self) -> Result<Vec<Vec<Option<Vec<Elem>>>>> {
        let k = self.objects.len();
        let mut paths: Vec<Vec<Option<Vec<Elem>>>> = vec![vec![None; k]; k];
        for (i, row) in paths.iter_mut().enumerate() {
            row[i] = Some(self.objects[i].universe().collect());
        }
        loop {
            let mut changed = false;
            for (a, b, map) in &self.arrows {
                for i in 0..k {
                    let Some(to_a) = paths[i][*a].clone() else {
                        continue;
                    };
                    let composite = compose_maps(map, &to_a);
                    match &paths[i][*b] {
                        None => {
                            paths[i][*b] = Some(composite);
                            changed = true;
                        }
                        Some(existing) if *existing != composite => {
                            return Err(Error::precondition(
                                "diagram does not commute",
                                Some(format!(
                                    "paths {i}->{b} give {} and {}",
                                    render_map(existing),
                                    render_map(&composite)
                                )),
                            ));
                        }
                        Some(_) => {}
                    }
                }
            }
            if !changed {
                return Ok(paths);
            }
        }
    }

    pub(crate) fn check_arrows(&self, class: &StructureClass) -> Result<()> {
        for m in &self.objects {
            if !class.member(m)? {
                return Err(Error::precondition(
                    format!("diagram object is not a member of `{}`", class.name()),
                    Some(m.compact()),
                ));
            }
        }
        for (a, b, map) in &self.arrows {
            let (Some(src), Some(tgt)) = (self.objects.get(*a), self.objects.get(*b)) else {
                return Err(Error::precondition("arrow endpoint out of range", None));
            };
            if !class.is_k_embedding(src, tgt, map)? {
                return Err(Error::precondition(
                    format!("arrow {a}->{b} is not a strong embedding"),
                    Some(render_map(map)),
                ));
            }
        }
        Ok(())
    }
}

/// Colimit of a finite directed system: the value at its greatest index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedColimit {
    pub top: usize,
    pub cocone: Cone,
    /// Upper bounds at scale against which smoothness was checked.
    pub upper_bounds: usize,
    /// Finite directed systems always have a greatest element, so the union
    /// is that element.
    pub degenerate: bool,
}

pub fn directed_colimit(class: &StructureClass, system: &Diagram) -> Result<DirectedColimit> {
    system.check_arrows(class)?;
    let paths = system.path_maps()?;
    let k = system.objects.len();
    let top = (0..k)
        .find(|&t| (0..k).all(|i| paths[i][t].is_some()))
        .ok_or_else(|| Error::precondition("index is not directed", None))?;
    let apex = system.objects[top].clone();
    let legs = (0..k)
        .map(|i| {
            Morphism::new(
                system.objects[i].clone(),
                apex.clone(),
                paths[i][top].clone().expect("reaches top"),
                MorphismKind::Embedding,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    // Smoothness: whenever the top strongly embeds into N, so do all stages
    // through it; the union is the top itself.
    let mut upper_bounds = 0;
    for n in class.members() {
        for h in class.k_embeddings(&apex, n)? {
            for l in &legs {
                let through = compose_maps(&h, &l.map);
                if !class.is_k_embedding(&l.source, n, &through)? {
                    return Err(Error::precondition(
                        "composite of strong embeddings is not strong",
                        Some(render_map(&through)),
                    ));
                }
            }
            upper_bounds += 1;
        }
    }
    Ok(DirectedColimit {
        top,
        cocone: Cone { apex, legs },
        upper_bounds,
        degenerate: true,
    })
}

/// A family of strong substructures of a member with no wide pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackWitness {
    pub member: Arc<Structure>,
    pub family: Vec<Mask>,
    pub reason: NoLimit,
}

impl fmt::Display for PullbackWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam: Vec<String> = self.family.iter().map(|&m| subset::render(m)).collect();
        write!(
            f,
            "N={} family {} : {}",
            self.member.compact(),
            fam.join(" "),
            self.reason.reason
        )
    }
}

/// Wide pullbacks of every family of one or two strong inclusions into each
/// member at scale. Larger finite families reduce to these by iterating.
pub fn check_wide_pullbacks_exist(class: &StructureClass) -> Result<Outcome<PullbackWitness>> {
    for n in class.members() {
        let strong = class.strong_masks(n)?;
        let inclusion = |x: Mask| -> Result<Morphism> {
            Morphism::new(
                Arc::new(n.induced(x)?),
                n.clone(),
                subset::elements(x),
                MorphismKind::Embedding,
            )
        };
        for (i, &x) in strong.iter().enumerate() {
            for &y in &strong[i..] {
                let family = if x == y { vec![x] } else { vec![x, y] };
                let legs = family
                    .iter()
                    .map(|&m| inclusion(m))
                    .collect::<Result<Vec<_>>>()?;
                if let LimitResult::None(reason) = wide_pullback(class, &legs)? {
                    return Ok(Outcome::Fail(PullbackWitness {
                        member: n.clone(),
                        family,
                        reason,
                    }));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}
