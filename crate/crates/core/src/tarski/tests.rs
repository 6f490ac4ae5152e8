use super::*;
use crate::fixtures;
use crate::structures::{enumerate_structures, Structure};

/// Brute-force embedding existence over all maps.
fn brute_embeds(a: &Structure, b: &Structure) -> bool {
    crate::structures::Tuples::new(b.size(), a.size())
        .any(|map| crate::structures::is_embedding(a, b, &map).unwrap())
}

#[test]
fn pointed_embedding_examples() {
    let k3 = DiagramType::of_structure(&fixtures::complete(3));
    assert!(pointed_embeds(&k3, &fixtures::complete(4)).unwrap());
    let c4 = fixtures::cycle(4);
    assert!(!pointed_embeds(&k3, &c4).unwrap());
    assert!(!brute_embeds(&fixtures::complete(3), &c4));
    let empty = DiagramType::of_structure(&fixtures::graph(0, &[]));
    for g in enumerate_structures(&fixtures::graph_vocab(), 3).unwrap() {
        assert!(pointed_embeds(&empty, &g).unwrap());
    }
}

#[test]
fn minimal_forbidden_examples() {
    let basis = minimal_forbidden(&fixtures::triangle_free(4)).unwrap();
    assert_eq!(basis.gamma, vec![DiagramType::of_structure(&fixtures::complete(3))]);
    assert_eq!(basis.scale, 4);

    assert!(minimal_forbidden(&fixtures::all_graphs(4)).unwrap().gamma.is_empty());

    let small = fixtures::sets_of_sizes("sets-le2", &[0, 1, 2], 4);
    let basis = minimal_forbidden(&small).unwrap();
    assert_eq!(basis.gamma, vec![DiagramType::of_structure(&fixtures::pure_set(3))]);
}

#[test]
fn minimal_forbidden_requires_universality() {
    let nonempty = fixtures::sets_of_sizes("nonempty-sets", &[1, 2, 3, 4], 4);
    assert!(minimal_forbidden(&nonempty).is_err());
}

#[test]
fn omission_examples() {
    let none = ForbiddenBasis { gamma: vec![], scale: 4 };
    assert!(omits(&fixtures::complete(4), &none).unwrap());
    let k3 = minimal_forbidden(&fixtures::triangle_free(4)).unwrap();
    assert!(omits(&fixtures::cycle(5), &k3).unwrap());
    assert!(!brute_embeds(&fixtures::complete(3), &fixtures::cycle(5)));
    assert!(!omits(&fixtures::complete(3), &k3).unwrap());
}

#[test]
fn triangle_sentence_text() {
    let basis = minimal_forbidden(&fixtures::triangle_free(4)).unwrap();
    assert_eq!(
        emit_universal_theory(&basis),
        "# certified-scale: 4\n\
         ∀x0 ∀x1 ∀x2 ¬(E(x0,x1) ∧ E(x0,x2) ∧ E(x1,x0) ∧ E(x1,x2) ∧ E(x2,x0) ∧ E(x2,x1) ∧ x0≠x1 ∧ x0≠x2 ∧ x1≠x2)\n"
    );
}

#[test]
fn empty_basis_gives_header_only() {
    let basis = minimal_forbidden(&fixtures::all_graphs(3)).unwrap();
    assert_eq!(emit_universal_theory(&basis), "# certified-scale: 3\n");
}

#[test]
fn three_set_sentence_model_checks() {
    let small = fixtures::sets_of_sizes("sets-le2", &[0, 1, 2], 4);
    let basis = minimal_forbidden(&small).unwrap();
    let text = emit_universal_theory(&basis);
    assert_eq!(text, "# certified-scale: 4\n∀x0 ∀x1 ∀x2 ¬(x0≠x1 ∧ x0≠x2 ∧ x1≠x2)\n");
    let theory = parse_theory(&text).unwrap();
    for n in 0..=4 {
        assert_eq!(theory.satisfied_by(&fixtures::pure_set(n)).unwrap(), n <= 2);
    }
}

#[test]
fn round_trips_on_universal_classes() {
    let classes = [
        fixtures::triangle_free(4),
        fixtures::all_graphs(4),
        fixtures::sets_of_sizes("sets-le2", &[0, 1, 2], 4),
    ];
    for class in &classes {
        let basis = minimal_forbidden(class).unwrap();
        let theory = parse_theory(&emit_universal_theory(&basis)).unwrap();
        assert_eq!(theory, universal_theory(&basis));
        for m in enumerate_structures(class.vocab(), 4).unwrap() {
            let member = class.member(&m).unwrap();
            assert_eq!(member, omits(&m, &basis).unwrap(), "{m}");
            assert_eq!(member, theory.satisfied_by(&m).unwrap(), "{m}");
        }
        for a in &basis.gamma {
            for b in &basis.gamma {
                if a != b {
                    assert!(!pointed_embeds(a, b.shape()).unwrap());
                }
            }
        }
    }
}

#[test]
fn generated_elements_become_terms() {
    // Cyclic successor classes forbidding the 2-cycle: the basis element is
    // generated by one point and the other element is s(x0).
    let v = fixtures::successor_vocab();
    let class = crate::classes::StructureClass::forbid(
        "no2cycle",
        &v,
        &[DiagramType::of_structure(&fixtures::successor_cycle(2))],
        3,
    )
    .unwrap();
    let basis = minimal_forbidden(&class).unwrap();
    assert_eq!(basis.gamma.len(), 1);
    let text = emit_universal_theory(&basis);
    assert_eq!(text, "# certified-scale: 3\n∀x0 ¬(s(s(x0))=x0 ∧ x0≠s(x0))\n");
    let theory = parse_theory(&text).unwrap();
    for m in enumerate_structures(&v, 3).unwrap() {
        assert_eq!(theory.satisfied_by(&m).unwrap(), class.member(&m).unwrap());
    }
}

#[test]
fn larger_scale_keeps_smaller_basis_members() {
    let at3 = minimal_forbidden(&fixtures::triangle_free(3)).unwrap();
    let at4 = minimal_forbidden(&fixtures::triangle_free(4)).unwrap();
    assert!(at3.gamma.iter().all(|d| at4.gamma.contains(d)));
}

#[test]
fn parser_reports_positions() {
    let err = parse_theory("# certified-scale: 2\n∀x0 ¬(E(x0,x0) ∧ $)\n").unwrap_err();
    assert!(err.to_string().starts_with("2:"), "{err}");
    assert!(parse_theory("∀x0 ¬(⊤)\n").is_err());
}
