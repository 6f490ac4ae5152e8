//! The sample corpus parses, round-trips through the printer, and agrees
//! with the library fixtures it was written from.

use finclass::classes::StructureClass;
use finclass::dsl::{parse_workspace, Workspace};
use finclass::fixtures;
use finclass::structures::{canonical_code, Code};

fn corpus() -> Workspace {
    let path = format!("{}/corpus/corpus.ws", env!("CARGO_MANIFEST_DIR"));
    parse_workspace(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn codes(c: &StructureClass) -> Vec<Code> {
    let mut v: Vec<_> = c.members().iter().map(|m| canonical_code(m)).collect();
    v.sort();
    v
}

#[test]
fn corpus_round_trips() {
    let ws = corpus();
    let printed = ws.to_string();
    let again = parse_workspace(&printed).unwrap();
    assert_eq!(ws, again);
    assert_eq!(printed, again.to_string());
}

#[test]
fn corpus_matches_fixtures() {
    let ws = corpus();
    let pairs = [
        ("trianglefree", fixtures::triangle_free(4)),
        ("allgraphs", fixtures::all_graphs(4)),
        ("nonempty-sets", fixtures::sets_of_sizes("nonempty-sets", &[1, 2, 3, 4], 4)),
        ("sets-le2", fixtures::sets_of_sizes("sets-le2", &[0, 1, 2], 4)),
        ("pair", fixtures::sets_of_sizes("pair", &[2], 3)),
        ("initseg", fixtures::initial_segments(1, 4)),
        ("initseg0", fixtures::initial_segments(0, 4)),
        ("initseg-broken", fixtures::initial_segments_except(0, 4, Some((1, 2)))),
        ("groups", fixtures::small_group_class(false)),
    ];
    for (name, fixture) in pairs {
        let c = ws.class(name).unwrap();
        assert_eq!(c.scale(), fixture.scale(), "{name}");
        assert_eq!(codes(c), codes(&fixture), "{name}");
        for m in c.members() {
            let mut a = c.strong_masks(m).unwrap();
            let mut b = fixture.strong_masks(m).unwrap();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{name}: {m}");
        }
    }
    let z33 = ws.structure("Z3xZ3").unwrap();
    assert_eq!(**z33, fixtures::z3_squared(false));
    let sym3 = ws.structure("Sym3").unwrap();
    assert_eq!(**sym3, fixtures::symmetric_group_s3(false));
}
