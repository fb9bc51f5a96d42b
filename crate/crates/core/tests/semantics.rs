use concepts::semantics::{
    audited_fragment, constant_term, run, saturate, saturate_in_order, Fragment, FragmentSpec, Node,
};
use concepts::syntax::{level, parse_formula, Formula};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded(depth: usize, size: usize, seeds: &[&str]) -> FragmentSpec {
    let mut spec = FragmentSpec::new(depth, size);
    spec.seed_formulas = seeds.iter().map(|s| s.to_string()).collect();
    spec
}

fn first_stage(fragment: &Fragment, stages: &[Vec<bool>], f: &Formula) -> Option<usize> {
    let id = fragment.lookup(f).unwrap_or_else(|| panic!("{f} not in fragment"));
    stages.iter().position(|s| s[id])
}

#[test]
fn hand_evaluated_memberships() {
    let spec = seeded(1, 5, &["[]bot", "bot -> bot", "bot -> []bot"]);
    let fragment = audited_fragment(&spec).unwrap();
    let family = saturate(&fragment).unwrap();
    let c = constant_term(&Formula::Bot);
    let p = |s: &str| parse_formula(s).unwrap();
    assert_eq!(first_stage(&fragment, &family.stages, &Formula::Bot), Some(0));
    assert_eq!(first_stage(&fragment, &family.stages, &p("[]bot")), Some(1));
    assert_eq!(first_stage(&fragment, &family.stages, &p("bot -> bot")), None);
    assert_eq!(first_stage(&fragment, &family.stages, &p("bot -> []bot")), None);
    assert_eq!(
        first_stage(&fragment, &family.stages, &Formula::mem(c.clone(), c.clone())),
        Some(1)
    );
    assert_eq!(first_stage(&fragment, &family.stages, &Formula::eq(c.clone(), c)), None);
}

#[test]
fn shuffled_evaluation_gives_identical_stages() {
    for depth in 0..=1 {
        let fragment = audited_fragment(&FragmentSpec::new(depth, 9)).unwrap();
        let reference = saturate(&fragment).unwrap();
        for seed in 0..3 {
            let mut order: Vec<usize> = (0..fragment.len()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(saturate_in_order(&fragment, &order).unwrap(), reference);
        }
    }
}

#[test]
fn generation_is_deterministic() {
    let spec = FragmentSpec::new(1, 7);
    let a = audited_fragment(&spec).unwrap();
    let b = audited_fragment(&spec).unwrap();
    assert_eq!(a.sentences, b.sentences);
    assert_eq!(saturate(&a).unwrap(), saturate(&b).unwrap());
}

#[test]
fn children_sit_at_lower_levels() {
    let fragment = audited_fragment(&FragmentSpec::new(1, 9)).unwrap();
    for (id, node) in fragment.nodes.iter().enumerate() {
        let children: Vec<usize> = match node {
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => vec![*a, *b],
            Node::Forall(xs) | Node::Exists(xs) => xs.clone(),
            _ => vec![],
        };
        for c in children {
            assert!(fragment.levels[c] < fragment.levels[id]);
        }
        assert_eq!(fragment.levels[id], level(&fragment.sentences[id]));
    }
}

#[test]
fn stabilization_bound_and_final_equality() {
    for depth in 0..=2 {
        let (fragment, family, report) = run(&FragmentSpec::new(depth, 5)).unwrap();
        assert!(family.stabilized_at <= fragment.len() + 1);
        let n = family.stages.len();
        assert_eq!(family.stages[n - 1], family.stages[n - 2]);
        assert_eq!(n, family.stabilized_at + 2);
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.scope, "fragment-relative");
    }
}

#[test]
fn audit_report_serializes() {
    let (_, _, report) = run(&FragmentSpec::new(0, 5)).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["scope"], "fragment-relative");
    assert_eq!(json["axioms"].as_array().unwrap().len(), 8);
    assert_eq!(json["bot_rejected"], true);
}
