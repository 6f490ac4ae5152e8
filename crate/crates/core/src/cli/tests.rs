use super::*;

const WS: &str = "\
vocab graph { rel E/2 sym irrefl }
vocab set { }
structure K2 : graph { universe 2; rel E: (0,1); }
structure K3 : graph { universe 3; rel E: (0,1) (1,2) (0,2); }
structure S1 : set { universe 1; }
structure S2 : set { universe 2; }
class trianglefree : graph { kind forbid; forbidden K3; scale 3; }
class nonempty : set { kind explicit; members S1 S2; scale 2; }
";

fn args(argv: &[&str]) -> Args {
    Args::try_parse_from(std::iter::once("finclass").chain(argv.iter().copied())).unwrap()
}

fn report(argv: &[&str]) -> Report {
    run(&args(argv), &parse_workspace(WS).unwrap()).unwrap()
}

#[test]
fn trailer_round_trips() {
    let mut r = Report::new("$ finclass x".into(), 3);
    r.line("body");
    assert_eq!(Trailer::parse(&r.to_string()).unwrap(), r.trailer());
    r.fail("first\nsecond");
    r.fail("other");
    let t = Trailer::parse(&r.to_string()).unwrap();
    assert_eq!(t, r.trailer());
    assert_eq!(t.witnesses, ["first second", "other"]);
    assert!(!t.pass);
}

#[test]
fn malformed_trailers_are_rejected() {
    assert!(Trailer::parse("no trailer\n").is_err());
    assert!(Trailer::parse("@@verdict maybe\n@@scale 3\n").is_err());
    assert!(Trailer::parse("@@verdict pass\n").is_err());
    assert!(Trailer::parse("@@verdict pass\n@@note x\n@@scale 3\n").is_err());
}

#[test]
fn echo_omits_workspace_and_output() {
    let a = args(&["pullback", "--workspace", "w.ws", "--out", "-", "--class", "c", "--map", "A:B:0->1"]);
    assert_eq!(a.echo(), "$ finclass pullback --class c --map A:B:0->1");
}

#[test]
fn tarski_lists_the_triangle() {
    let r = report(&["tarski", "--class", "trianglefree"]);
    assert!(r.pass);
    assert!(r.body.iter().any(|l| l.starts_with("  K3 = ")), "{r}");
    assert_eq!(r.scale, 3);
}

#[test]
fn intersections_fail_on_nonempty_sets() {
    let r = report(&["check-intersections", "--class", "nonempty"]);
    assert_eq!(r.exit_code(), 1);
    assert_eq!(
        r.witnesses,
        ["admits intersections: N=[n=2] A={} cl(A)={} is not a strong substructure"]
    );
}

#[test]
fn scale_flag_overrides_the_class() {
    let r = report(&["check-universal", "--class", "trianglefree", "--scale", "2"]);
    assert_eq!(r.scale, 2);
}

#[test]
fn maps_resolve_names_and_indices() {
    let by_name = report(&["translate-emb-mod", "--structure", "K2", "--structure", "K3"]);
    assert!(by_name.body.contains(&"K2 -> K3 : emb 6 hom 6".to_string()), "{by_name}");
    let ws = parse_workspace(WS).unwrap();
    let bad = run(&args(&["equalizer", "--class", "trianglefree", "--map", "K2:K3:0->1"]), &ws);
    assert!(bad.is_err());
    let idx = run(
        &args(&["colimit", "--class", "trianglefree", "--structure", "K2", "--map", "0:1:0->0,1->1"]),
        &ws,
    );
    assert!(idx.unwrap_err().to_string().contains("no --structure at index 1"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(invoke(["finclass", "frobnicate"]).code, 2);
    assert_eq!(invoke(["finclass"]).code, 2);
    let missing = invoke(["finclass", "tarski", "--workspace", "/nonexistent/w.ws"]);
    assert_eq!(missing.code, 2);
    assert!(missing.report.is_none());
    assert!(missing.stderr.starts_with("error: cannot read"));
}

#[test]
fn commands_need_a_class() {
    let ws = parse_workspace(WS).unwrap();
    let e = run(&args(&["tarski"]), &ws).unwrap_err();
    assert!(e.to_string().contains("needs --class"));
}
