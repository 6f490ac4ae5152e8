//! Small named structures used throughout the tests and the sample corpus.

use std::sync::Arc;

use crate::classes::{Order, OrderPair, StructureClass};
use crate::structures::{Elem, FunctionSymbol, RelationSymbol, Structure, Vocabulary};
use crate::tarski::DiagramType;

pub fn graph_vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new("graph", vec![RelationSymbol::graph_edge("E")], vec![]).expect("valid"))
}

pub fn digraph_vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new("digraph", vec![RelationSymbol::new("E", 2)], vec![]).expect("valid"))
}

pub fn set_vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new("set", vec![], vec![]).expect("valid"))
}

pub fn unary_vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new("unary", vec![RelationSymbol::new("P", 1)], vec![]).expect("valid"))
}

pub fn order_vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new("order", vec![RelationSymbol::new("lt", 2)], vec![]).expect("valid"))
}

pub fn successor_vocab() -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new("succ", vec![], vec![FunctionSymbol::new("s", 1)]).expect("valid"))
}

pub fn constant_vocab(names: &[&str]) -> Arc<Vocabulary> {
    let name = format!("const{}", names.len());
    Arc::new(
        Vocabulary::new(
            name,
            vec![],
            names.iter().map(|n| FunctionSymbol::new(*n, 0)).collect(),
        )
        .expect("valid"),
    )
}

pub fn constant_unary_vocab() -> Arc<Vocabulary> {
    Arc::new(
        Vocabulary::new(
            "pointed",
            vec![RelationSymbol::new("P", 1)],
            vec![FunctionSymbol::new("c", 0)],
        )
        .expect("valid"),
    )
}

/// `{mul/2, e/0}`, plus `inv/1` when `with_inverse`.
pub fn group_vocab(with_inverse: bool) -> Arc<Vocabulary> {
    let mut funs = vec![FunctionSymbol::new("mul", 2), FunctionSymbol::new("e", 0)];
    let name = if with_inverse {
        funs.push(FunctionSymbol::new("inv", 1));
        "group"
    } else {
        "monoid"
    };
    Arc::new(Vocabulary::new(name, vec![], funs).expect("valid"))
}

pub fn graph(n: usize, edges: &[(Elem, Elem)]) -> Structure {
    let v = graph_vocab();
    let mut b = Structure::builder(&v, n);
    for &(a, c) in edges {
        b.relate_sym("E", a, c).expect("in range");
    }
    b.build().expect("valid graph")
}

pub fn path(n: usize) -> Structure {
    let edges: Vec<(Elem, Elem)> = (1..n).map(|i| (i - 1, i)).collect();
    graph(n, &edges)
}

pub fn cycle(n: usize) -> Structure {
    let edges: Vec<(Elem, Elem)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph(n, &edges)
}

pub fn complete(n: usize) -> Structure {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    graph(n, &edges)
}

pub fn pure_set(n: usize) -> Structure {
    Structure::builder(&set_vocab(), n).build().expect("valid")
}

/// Strict linear order `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> Structure {
    let v = order_vocab();
    let mut b = Structure::builder(&v, n);
    for a in 0..n {
        for c in a + 1..n {
            b.relate("lt", &[a, c]).expect("in range");
        }
    }
    b.build().expect("valid")
}

pub fn successor_cycle(n: usize) -> Structure {
    let v = successor_vocab();
    let mut b = Structure::builder(&v, n);
    b.set_all("s", |t| (t[0] + 1) % n).expect("valid");
    b.build().expect("valid")
}

/// Group from a multiplication table with identity `0`.
pub fn group_from_table(order: usize, mul: impl Fn(Elem, Elem) -> Elem, with_inverse: bool) -> Structure {
    let v = group_vocab(with_inverse);
    let mut b = Structure::builder(&v, order);
    b.set_all("mul", |t| mul(t[0], t[1])).expect("valid");
    b.set("e", &[], 0).expect("valid");
    if with_inverse {
        b.set_all("inv", |t| {
            (0..order)
                .find(|&y| mul(t[0], y) == 0)
                .expect("group table")
        })
        .expect("valid");
    }
    b.build().expect("valid")
}

/// `Z_n` in additive notation: element `k` is `k mod n`.
pub fn cyclic_group(n: usize, with_inverse: bool) -> Structure {
    group_from_table(n, |a, b| (a + b) % n, with_inverse)
}

/// `Z_2 × Z_2` with `(a,b) ↦ 2a+b`.
pub fn klein_four(with_inverse: bool) -> Structure {
    group_from_table(4, |x, y| x ^ y, with_inverse)
}

/// `Z_3 × Z_3` with `(a,b) ↦ 3a+b`.
pub fn z3_squared(with_inverse: bool) -> Structure {
    group_from_table(
        9,
        |x, y| {
            let (a, b) = (x / 3, x % 3);
            let (c, d) = (y / 3, y % 3);
            3 * ((a + c) % 3) + (b + d) % 3
        },
        with_inverse,
    )
}

/// The six permutations of `{0,1,2}`, identity first.
pub fn symmetric_group_s3(with_inverse: bool) -> Structure {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
    group_from_table(
        6,
        |x, y| {
            let (p, q) = (perms[x], perms[y]);
            index([p[q[0]], p[q[1]], p[q[2]]])
        },
        with_inverse,
    )
}

/// All groups of order at most six, up to isomorphism.
pub fn small_groups(with_inverse: bool) -> Vec<Structure> {
    vec![
        cyclic_group(1, with_inverse),
        cyclic_group(2, with_inverse),
        cyclic_group(3, with_inverse),
        cyclic_group(4, with_inverse),
        klein_four(with_inverse),
        cyclic_group(5, with_inverse),
        cyclic_group(6, with_inverse),
        symmetric_group_s3(with_inverse),
    ]
}

/// Linear orders of lengths `lo..=hi` ordered by initial segment.
pub fn initial_segments(lo: usize, hi: usize) -> StructureClass {
    initial_segments_except(lo, hi, None)
}

/// As [`initial_segments`], with the listed pair `(i, j)` left out. Pairs
/// are listed for every `i < j`, so a missing pair is not recovered by
/// composition when `j = i + 1`.
pub fn initial_segments_except(lo: usize, hi: usize, skip: Option<(usize, usize)>) -> StructureClass {
    let chains: Vec<Structure> = (lo..=hi).map(chain).collect();
    let mut pairs = Vec::new();
    for i in lo..=hi {
        for j in i + 1..=hi {
            if skip == Some((i, j)) {
                continue;
            }
            pairs.push(OrderPair {
                sub: Arc::new(chain(i)),
                sup: Arc::new(chain(j)),
                map: (0..i).collect(),
            });
        }
    }
    let name = if skip.is_some() { "initseg-broken" } else { "initseg" };
    StructureClass::explicit(name, &order_vocab(), &chains, Order::Pairs(pairs), hi).expect("valid class")
}

/// Pure sets of the given sizes ordered by inclusion.
pub fn sets_of_sizes(name: &str, sizes: &[usize], scale: usize) -> StructureClass {
    let members: Vec<Structure> = sizes.iter().map(|&n| pure_set(n)).collect();
    StructureClass::explicit(name, &set_vocab(), &members, Order::Substructure, scale).expect("valid class")
}

pub fn triangle_free(scale: usize) -> StructureClass {
    StructureClass::forbid("trianglefree", &graph_vocab(), &[DiagramType::of_structure(&complete(3))], scale)
        .expect("valid class")
}

pub fn all_graphs(scale: usize) -> StructureClass {
    StructureClass::all("allgraphs", &graph_vocab(), scale)
}

/// Groups of order at most six ordered by substructure.
pub fn small_group_class(with_inverse: bool) -> StructureClass {
    let name = if with_inverse { "groups-inv" } else { "groups" };
    StructureClass::explicit(name, &group_vocab(with_inverse), &small_groups(with_inverse), Order::Substructure, 6)
        .expect("valid class")
}
