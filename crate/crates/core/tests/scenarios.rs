mod common;

use common::*;
use newcomb::decision::{decide, Theory};
use newcomb::scenarios::{
    calculator_scenario, load, parse, prisoners_dilemma, serialize, tdt_prisoners_dilemma, toxoplasmosis,
    CalculatorParams, CalculatorVariant, PdParams, ScenarioDoc, TdtPdParams, ToxoplasmosisParams,
};
use newcomb::{Scenario, ScenarioError};
use proptest::prelude::*;
use rand::Rng;

fn builtins() -> Vec<Scenario> {
    let mut all = vec![
        Scenario::from_problem("toxoplasmosis", &toxoplasmosis(&ToxoplasmosisParams::default()).unwrap()),
        Scenario::from_problem("prisoners-dilemma", &prisoners_dilemma(&PdParams::default()).unwrap()),
        Scenario::from_problem("tdt-prisoners-dilemma", &tdt_prisoners_dilemma(&TdtPdParams::default()).unwrap()),
    ];
    for variant in [CalculatorVariant::Naive, CalculatorVariant::Physical, CalculatorVariant::Logical] {
        all.push(calculator_scenario(variant, &CalculatorParams::default()).unwrap());
    }
    all
}

fn round_trip(scenario: &Scenario) {
    let doc = ScenarioDoc::from(scenario);
    let text = serialize(&doc);
    let back = parse(&text).unwrap();
    assert_eq!(back, doc, "{}", scenario.name);
    assert_eq!(serialize(&back), text);
    assert_eq!(&load(&text).unwrap(), scenario);
}

#[test]
fn builtins_round_trip() {
    for scenario in builtins() {
        round_trip(&scenario);
        if scenario.has_decision() {
            let loaded = load(&serialize(&ScenarioDoc::from(&scenario))).unwrap();
            for theory in Theory::ALL {
                let a = decide(&scenario.problem().unwrap(), theory).unwrap();
                let b = decide(&loaded.problem().unwrap(), theory).unwrap();
                assert_eq!(a.eus, b.eus);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_documents_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let with_decision = r.gen_bool(0.6);
        let scenario = if with_decision {
            let n = r.gen_range(1..=6);
            let problem = random_problem(&mut r, n);
            Scenario::from_problem(format!("random-{seed}"), &problem)
        } else {
            let n = r.gen_range(1..=6);
            Scenario::from_network(format!("random-{seed}"), random_network(&mut r, n, 3, 0.3))
        };
        round_trip(&scenario);
    }
}

const MINIMAL: &str = r#"{
  "name": "coin",
  "nodes": [
    {"id": "coin", "states": ["heads", "tails"], "parents": [], "cpt": [[0.5, 0.5]]}
  ]
}"#;

#[test]
fn minimal_document() {
    let scenario = load(MINIMAL).unwrap();
    assert_eq!(scenario.network.len(), 1);
    assert!(!scenario.has_decision());
}

#[test]
fn missing_cpt_row_names_the_node() {
    let text = r#"{
  "name": "short",
  "nodes": [
    {"id": "A", "states": ["0", "1"], "parents": [], "cpt": [[0.5, 0.5]]},
    {"id": "B", "states": ["0", "1"], "parents": ["A"], "cpt": [[0.5, 0.5]]}
  ]
}"#;
    match parse(text) {
        Err(ScenarioError::Schema { context, .. }) => assert!(context.contains('B'), "{context}"),
        other => panic!("expected a schema error, got {other:?}"),
    }
}

#[test]
fn unknown_field_is_rejected() {
    let text = MINIMAL.replace("\"name\"", "\"nmae\": 1, \"name\"");
    assert!(matches!(parse(&text), Err(ScenarioError::Schema { .. })));
}

#[test]
fn syntax_errors_carry_a_position() {
    let text = "{\n  \"name\": \"x\",\n  \"nodes\": [,]\n}";
    match parse(text) {
        Err(ScenarioError::Syntax { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn decision_needs_a_utility() {
    let text = MINIMAL.replace("\"nodes\"", "\"decision\": \"coin\", \"nodes\"");
    assert!(matches!(parse(&text), Err(ScenarioError::Schema { .. })));
}

#[test]
fn invalid_network_is_reported() {
    let text = MINIMAL.replace("[[0.5, 0.5]]", "[[0.5, 0.6]]");
    assert!(matches!(parse(&text), Err(ScenarioError::Network { .. })));
}

#[test]
fn builtin_parameter_errors() {
    let bad = ToxoplasmosisParams {
        p_t: 1.5,
        ..ToxoplasmosisParams::default()
    };
    assert!(matches!(toxoplasmosis(&bad), Err(ScenarioError::InvalidProbability { .. })));
    let unordered = PdParams {
        u: [1.0, 3.0, 2.0, 4.0],
        ..PdParams::default()
    };
    assert!(matches!(prisoners_dilemma(&unordered), Err(ScenarioError::OrderingViolated { .. })));
}

#[test]
fn toxoplasmosis_utility_table() {
    let problem = toxoplasmosis(&ToxoplasmosisParams::default()).unwrap();
    let u = problem.utility();
    let net = problem.network();
    assert_eq!(u.scope(), ["N", "C"]);
    assert_eq!(u.get(net, &["N", "C"]), Some(-99.0));
    assert_eq!(u.get(net, &["not_N", "C"]), Some(1.0));
    assert_eq!(u.get(net, &["N", "not_C"]), Some(-100.0));
    assert_eq!(u.get(net, &["not_N", "not_C"]), Some(0.0));
}

#[test]
fn pd_utility_table() {
    let problem = prisoners_dilemma(&PdParams::default()).unwrap();
    let (u, net) = (problem.utility(), problem.network());
    assert_eq!(u.get(net, &["C", "C"]), Some(3.0));
    assert_eq!(u.get(net, &["C", "D"]), Some(1.0));
    assert_eq!(u.get(net, &["D", "C"]), Some(4.0));
    assert_eq!(u.get(net, &["D", "D"]), Some(2.0));
}
