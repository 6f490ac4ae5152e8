use std::sync::Arc;

use super::*;
use crate::classes::{Order, StructureClass};
use crate::fixtures;
use crate::structures::{Morphism, MorphismKind, Structure};

fn emb(src: &Arc<Structure>, tgt: &Arc<Structure>, map: &[usize]) -> Morphism {
    Morphism::new(src.clone(), tgt.clone(), map.to_vec(), MorphismKind::Embedding).unwrap()
}

#[test]
fn equalizer_of_equal_maps_is_identity() {
    let class = fixtures::all_graphs(3);
    let p3 = Arc::new(fixtures::path(3));
    let id = Morphism::identity(&p3);
    let r = equalizer(&class, &id, &id).unwrap();
    let cert = r.certificate().unwrap();
    assert_eq!(*cert.cone.apex, *p3);
    assert_eq!(cert.cone.legs[0].map, vec![0, 1, 2]);
    // One competitor per strong embedding into P3.
    let competitors: usize = class
        .members()
        .iter()
        .map(|e| class.k_embeddings(e, &p3).unwrap().len())
        .sum();
    assert_eq!(cert.log.len(), competitors);
}

#[test]
fn equalizer_with_a_constant() {
    let v = fixtures::constant_vocab(&["c"]);
    let class = StructureClass::all("const1", &v, 3);
    let mk = |n: usize| {
        let mut b = Structure::builder(&v, n);
        b.set("c", &[], 0).unwrap();
        Arc::new(b.build().unwrap())
    };
    let (m, n) = (mk(2), mk(3));
    let f = emb(&m, &n, &[0, 1]);
    let g = emb(&m, &n, &[0, 2]);
    let r = equalizer(&class, &f, &g).unwrap();
    let cert = r.certificate().unwrap();
    assert_eq!(cert.cone.apex.size(), 1);
    assert_eq!(cert.cone.legs[0].map, vec![0]);
}

#[test]
fn equalizer_of_coordinate_embeddings() {
    let z1 = fixtures::cyclic_group(1, false);
    let z3 = Arc::new(fixtures::cyclic_group(3, false));
    let z33 = Arc::new(fixtures::z3_squared(false));
    let class = StructureClass::explicit(
        "groups9",
        z3.vocab(),
        &[z1, (*z3).clone(), (*z33).clone()],
        Order::Substructure,
        9,
    )
    .unwrap();
    let f = emb(&z3, &z33, &[0, 3, 6]);
    let g = emb(&z3, &z33, &[0, 1, 2]);
    // Oracle: agreement set read off the maps.
    let agree: Vec<usize> = (0..3).filter(|&x| f.map[x] == g.map[x]).collect();
    assert_eq!(agree, vec![0]);
    let r = equalizer(&class, &f, &g).unwrap();
    let cert = r.certificate().unwrap();
    assert_eq!(cert.cone.legs[0].map, agree);
    assert_eq!(cert.log.len(), 1);
}

#[test]
fn equalizer_rejects_non_strong_maps() {
    let class = fixtures::initial_segments(1, 3);
    let c1 = Arc::new(fixtures::chain(1));
    let c2 = Arc::new(fixtures::chain(2));
    let end = emb(&c1, &c2, &[1]);
    assert!(equalizer(&class, &end, &end).is_err());
}

#[test]
fn single_leg_pullback_is_the_domain() {
    let class = fixtures::initial_segments(1, 4);
    let c2 = Arc::new(fixtures::chain(2));
    let c4 = Arc::new(fixtures::chain(4));
    let r = wide_pullback(&class, &[emb(&c2, &c4, &[0, 1])]).unwrap();
    let cert = r.certificate().unwrap();
    assert_eq!(*cert.cone.apex, *c2);
    assert_eq!(cert.cone.legs[0].map, vec![0, 1]);
}

#[test]
fn pullback_of_two_paths_in_a_pentagon() {
    let class = fixtures::all_graphs(4);
    let c5 = Arc::new(fixtures::cycle(5));
    let left = Arc::new(fixtures::path(3));
    let a = emb(&left, &c5, &[0, 1, 2]);
    let b = emb(&left, &c5, &[2, 3, 4]);
    let r = wide_pullback(&class, &[a, b]).unwrap();
    let cert = r.certificate().unwrap();
    assert_eq!(cert.cone.apex.size(), 1);
    assert_eq!(cert.cone.legs[0].map, vec![2]);
    assert_eq!(cert.cone.legs[1].map, vec![0]);
    // Competitors: the empty graph, and the single vertex sent to the shared
    // vertex.
    assert_eq!(cert.log.len(), 2);
}

#[test]
fn disjoint_singletons_have_no_pullback_in_nonempty_sets() {
    let class = fixtures::sets_of_sizes("nonempty-sets", &[1, 2, 3, 4], 4);
    let one = Arc::new(fixtures::pure_set(1));
    let two = Arc::new(fixtures::pure_set(2));
    let r = wide_pullback(&class, &[emb(&one, &two, &[0]), emb(&one, &two, &[1])]).unwrap();
    match r {
        LimitResult::None(w) => assert_eq!(w.set, 0),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn directed_colimits_are_top_elements() {
    let class = fixtures::initial_segments(1, 4);
    let c: Vec<Arc<Structure>> = (1..=4).map(|n| Arc::new(fixtures::chain(n))).collect();

    let single = directed_colimit(&class, &Diagram::single(c[1].clone())).unwrap();
    assert_eq!((single.top, single.degenerate), (0, true));

    let chain = Diagram {
        objects: vec![c[0].clone(), c[1].clone(), c[2].clone()],
        arrows: vec![(0, 1, vec![0]), (1, 2, vec![0, 1])],
    };
    let r = directed_colimit(&class, &chain).unwrap();
    assert_eq!(r.top, 2);
    assert_eq!(r.cocone.legs[0].map, vec![0]);

    let diamond = Diagram {
        objects: vec![c[0].clone(), c[1].clone(), c[1].clone(), c[3].clone()],
        arrows: vec![
            (0, 1, vec![0]),
            (0, 2, vec![0]),
            (1, 3, vec![0, 1]),
            (2, 3, vec![0, 1]),
        ],
    };
    assert_eq!(directed_colimit(&class, &diamond).unwrap().top, 3);

    let split = Diagram {
        objects: vec![c[0].clone(), c[1].clone(), c[1].clone()],
        arrows: vec![(0, 1, vec![0]), (0, 2, vec![0])],
    };
    assert!(directed_colimit(&class, &split).is_err());
}

#[test]
fn wide_pullbacks_track_intersections() {
    for class in [
        fixtures::initial_segments(0, 4),
        fixtures::triangle_free(4),
        fixtures::sets_of_sizes("nonempty-sets", &[1, 2, 3, 4], 4),
    ] {
        let pb = check_wide_pullbacks_exist(&class).unwrap();
        let ai = class.check_admits_intersections();
        assert_eq!(pb.is_pass(), ai.is_pass(), "{}", class.name());
        if let (Outcome::Fail(p), Outcome::Fail(a)) = (&pb, &ai) {
            assert_eq!(p.member, a.member);
            assert_eq!(p.family.iter().fold(u64::MAX, |m, &x| m & x), a.closure);
        }
    }
}
