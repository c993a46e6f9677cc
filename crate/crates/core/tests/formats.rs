mod common;

use proptest::prelude::*;
use serde_json::Value;

use sparse_cce::constructions::{build_augmented_game, GzParams};
use sparse_cce::eval::cce_gap;
use sparse_cce::formats::*;
use sparse_cce::game::{MixedStrategy, SparseMixture};
use sparse_cce::graph::{four_node_example, Graph};
use sparse_cce::planted::gen_planted_graph;
use sparse_cce::rational::{format_q, parse_q, q};
use sparse_cce::reduction::{run_reduction, PlantedOracle};
use sparse_cce::report::{emit_gap_report, emit_reduction_report, ReportFormat, RunMeta};
use sparse_cce::Error;

#[test]
fn graph_text_examples() {
    let g = parse_graph_str("c four nodes\np 4 5\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 3 4\n").unwrap();
    assert_eq!(g, four_node_example());
    assert_eq!(parse_graph_str(&emit_graph(&g)).unwrap(), g);
    assert_eq!(parse_graph_str("p edge 2 1\ne 2 1\n").unwrap(), Graph::complete(2));
}

#[test]
fn graph_errors_carry_line_numbers() {
    let cases = [
        ("p 3 1\ne 1 4\n", 2),
        ("e 1 2\n", 1),
        ("p 3 1\nx 1 2\n", 2),
        ("p 3 1\ne 1 1\n", 2),
        ("p 3 2\ne 1 2\n", 2),
        ("p 3\n", 1),
    ];
    for (text, line) in cases {
        match parse_graph_str(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn rationals_in_json() {
    assert_eq!(q_from_value(&Value::from("3/4")).unwrap(), q(3, 4));
    assert_eq!(q_from_value(&Value::from(2)).unwrap(), q(2, 1));
    assert_eq!(q_from_value(&Value::from(0.5)).unwrap(), q(1, 2));
    assert!(q_from_value(&Value::Bool(true)).is_err());
    assert_eq!(format_q(&q(-6, 4)), "-3/2");
    assert_eq!(parse_q("-3/2").unwrap(), q(-3, 2));
    assert!(parse_q("1/0").is_err());
}

#[test]
fn game_round_trip_keeps_labels() {
    let g = build_augmented_game(&four_node_example(), &GzParams::for_reduction(3, 1).unwrap());
    let text = emit_game_str(&g);
    let back = parse_game_str(&text).unwrap();
    assert_eq!(back, g);
    assert_eq!(emit_game_str(&back), text);
}

#[test]
fn game_shape_errors() {
    assert!(parse_game_str(r#"{"m": 2, "R": [["1","0"]], "C": [["0","0"],["0","0"]]}"#).is_err());
    assert!(parse_game_str("not json").is_err());
    let ok = parse_game_str(r#"{"m": 1, "R": [["1/2"]], "C": [[0]]}"#).unwrap();
    assert_eq!(ok.r()[0][0], q(1, 2));
}

#[test]
fn mixture_checks() {
    let bad = r#"{"weights": ["1/2", "1/3"], "rows": [["1"], ["1"]], "cols": [["1"], ["1"]]}"#;
    assert!(parse_mixture_str(bad).is_err());
    let neg = r#"{"weights": ["1"], "rows": [["3/2", "-1/2"]], "cols": [["1", "0"]]}"#;
    assert!(parse_mixture_str(neg).is_err());
    let mix = SparseMixture::uniform(
        vec![MixedStrategy::pure(3, 0), MixedStrategy::uniform(3)],
        vec![MixedStrategy::pure(3, 2), MixedStrategy::pure(3, 1)],
    )
    .unwrap();
    assert_eq!(parse_mixture_str(&emit_mixture_str(&mix)).unwrap(), mix);
}

#[test]
fn node_sets() {
    assert_eq!(parse_node_set_str("[3, 1, 2]").unwrap(), [1, 2, 3].into_iter().collect());
    assert!(parse_node_set_str("[0]").is_err());
}

#[test]
fn gap_report_text_and_json_agree() {
    let g = build_augmented_game(&four_node_example(), &GzParams::for_reduction(3, 1).unwrap());
    let mix = SparseMixture::product(MixedStrategy::uniform(9), MixedStrategy::pure(9, 8)).unwrap();
    let rep = cce_gap(&g, &mix).unwrap();
    let meta = RunMeta {
        command: "verify".into(),
        arithmetic: "exact".into(),
        seed: None,
    };
    let json: Value = serde_json::from_str(&emit_gap_report(&rep, &meta, ReportFormat::Json)).unwrap();
    let text = emit_gap_report(&rep, &meta, ReportFormat::Text);
    assert_eq!(json["meta"]["arithmetic"], "exact");
    for key in ["cce_gap", "ce_gap", "welfare", "egalitarian", "utility_x", "utility_y"] {
        let v = json["gap_report"][key].as_str().unwrap();
        assert!(text.contains(&format!("gap_report.{key} = {v}\n")), "{key}");
        assert_eq!(parse_q(v).unwrap(), match key {
            "cce_gap" => rep.cce_gap.clone(),
            "ce_gap" => rep.ce_gap.clone(),
            "welfare" => rep.welfare.clone(),
            "egalitarian" => rep.egalitarian.clone(),
            "utility_x" => rep.utility_x.clone(),
            _ => rep.utility_y.clone(),
        });
    }
    assert!(text.contains("meta.seed = -\n"));
}

#[test]
fn reduction_report_is_reproducible() {
    let inst = gen_planted_graph(12, 4, 7).unwrap();
    let meta = RunMeta {
        command: "reduce".into(),
        arithmetic: "exact".into(),
        seed: Some(7),
    };
    let run = || {
        let rep = run_reduction(&inst.graph, 2, &PlantedOracle::new(inst.planted.clone())).unwrap();
        emit_reduction_report(&rep, &meta, ReportFormat::Json)
    };
    let a = run();
    assert_eq!(a, run());
    let doc: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["reduction"]["clique_size"], 2);
    assert_eq!(doc["meta"]["seed"], 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn games_round_trip(seed in any::<u64>(), m in 1usize..=8) {
        let mut r = common::rng(seed);
        let g = common::rand_game(&mut r, m);
        prop_assert_eq!(parse_game_str(&emit_game_str(&g)).unwrap(), g);
    }

    #[test]
    fn mixtures_round_trip(seed in any::<u64>(), m in 1usize..=6, t in 1usize..=5) {
        let mut r = common::rng(seed);
        let mix = common::rand_mixture(&mut r, m, t);
        prop_assert_eq!(parse_mixture_str(&emit_mixture_str(&mix)).unwrap(), mix);
    }

    #[test]
    fn joints_round_trip(seed in any::<u64>(), m in 1usize..=6) {
        let mut r = common::rng(seed);
        let j = common::rand_joint(&mut r, m);
        prop_assert_eq!(parse_joint_str(&emit_joint_str(&j)).unwrap(), j);
    }

    #[test]
    fn graphs_round_trip(n in 1usize..=30, seed in any::<u64>()) {
        let g = gen_planted_graph(n, 1, seed).unwrap().graph;
        prop_assert_eq!(parse_graph_str(&emit_graph(&g)).unwrap(), g);
    }
}
