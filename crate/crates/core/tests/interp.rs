use concepts::corpus;
use concepts::interp::{
    check_certificate, erase_and_match, erased_inconsistency_demo, first_difference, parse_certificate, EntryVerdict,
};
use concepts::kernel::check_proof;
use concepts::syntax::{box_delete, contains_box, parse_formula};
use concepts::theories::{arithmetic_targets, theory_axioms, TheoryId};

fn p(s: &str) -> concepts::syntax::Formula {
    parse_formula(s).unwrap()
}

#[test]
fn kernel_check_and_erasure_are_independent_conditions() {
    let script = corpus::script("cc2/succ_nonzero.proof");
    let target = p("forall x. (S(x) = 0 -> bot)");
    assert!(check_proof(&script).is_accepted());
    assert_eq!(box_delete(&script.goal).to_string(), target.to_string());
    assert_eq!(erase_and_match(&script, &target), EntryVerdict::Accepted);

    let mut broken = script.clone();
    broken.lines[9].premises = vec![1, 8];
    assert!(matches!(
        erase_and_match(&broken, &target),
        EntryVerdict::KernelRejected { line: 10, .. }
    ));
    assert!(matches!(
        erase_and_match(&script, &p("forall x. (S(x) = omega -> bot)")),
        EntryVerdict::ErasureMismatch { .. }
    ));
}

#[test]
fn diff_points_at_the_first_difference() {
    let (l, r) = first_difference(&p("a in b & (c in d | e = f)"), &p("a in b & (c in d | e in f)")).unwrap();
    assert_eq!(
        (l.to_string(), r.to_string()),
        ("e = f".to_string(), "e in f".to_string())
    );
    assert!(first_difference(&p("forall x. (x in y)"), &p("forall z. (z in y)")).is_none());
}

#[test]
fn pa2_axioms_are_the_erased_targets() {
    let axioms = theory_axioms(TheoryId::Pa2Minus);
    let json = serde_json::to_value(&axioms).unwrap();
    let listed = json["closed_axioms"].as_array().unwrap();
    assert_eq!(listed.len(), 4);
    for (t, a) in arithmetic_targets().iter().zip(listed) {
        assert_eq!(box_delete(t.formula()).to_string(), a[1].as_str().unwrap());
    }
}

#[test]
fn shipped_certificates_report() {
    for f in corpus::CERTIFICATES {
        let cert = parse_certificate(f.text).unwrap();
        let report = check_certificate(&cert, &corpus::loader);
        assert!(report.passed(), "{}", report.render_text());
        let json = serde_json::to_value(&report).unwrap();
        assert!(json["entries"]
            .as_array()
            .unwrap()
            .iter()
            .all(|e| e["verdict"] == "accepted"));
    }
}

#[test]
fn certificate_rejects_foreign_theories_and_missing_files() {
    let cert = parse_certificate(
        "source CC\ntarget PA2-\ntarget: 0 in omega\nproof: cc2/zero_in_omega.proof\ntarget: 0 in omega\nproof: nowhere.proof\n",
    )
    .unwrap();
    let report = check_certificate(&cert, &corpus::loader);
    assert!(matches!(report.entries[0].verdict, EntryVerdict::WrongTheory { .. }));
    assert!(matches!(report.entries[1].verdict, EntryVerdict::LoadFailed { .. }));
    assert_eq!(report.rejected, 2);
    assert_eq!(report.uncovered.len(), 4);
}

#[test]
fn erased_pair() {
    let demo = erased_inconsistency_demo();
    assert!(!contains_box(&demo.pair[0]));
    assert!(!contains_box(&demo.comprehension));
    assert_eq!(
        demo.pair[0],
        p("forall x. ((forall r. (r in x <-> r notin r)) -> ~(x notin x))")
    );
    assert!(matches!(demo.pair[1], concepts::syntax::Formula::Forall(..)));
    assert_eq!(demo.script.theory, TheoryId::Il);
    assert!(check_proof(&demo.script).is_accepted());
}
