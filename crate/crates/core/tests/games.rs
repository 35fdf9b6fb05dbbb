use std::sync::Arc;

use nulearn::hypothesis::io::{ClassDef, ClassSource, ExplicitDef};
use nulearn::hypothesis::{ClassFamily, ConceptClass, FiniteClass, Hypothesis, Point};
use nulearn::learners::{Aggregator, LearnerSpec};
use nulearn::nature::{Labels, NatureSpec, NatureStrategy, Scripted};
use nulearn::runner::{monte_carlo, regret, run_game, ExperimentConfig, GameTrace, Rivals};

fn play(learner: &LearnerSpec, nature: &NatureSpec, horizon: u64, seed: u64, compare: Option<&ConceptClass>) -> GameTrace {
    let mut l = learner.build(seed).unwrap();
    let mut n = nature.build(learner, seed ^ 1).unwrap();
    let mut rivals = compare.map(Rivals::class);
    run_game(l.as_mut(), &mut n, horizon, rivals.as_mut()).unwrap()
}

fn csv_bytes(trace: &GameTrace) -> Vec<u8> {
    let mut out = Vec::new();
    trace.write_csv(&mut out).unwrap();
    out
}

#[test]
fn same_seed_gives_identical_csv() {
    let learner: LearnerSpec = serde_json::from_str(
        r#"{"learner":"agnostic-fpl","family":{"family":"finite-support","params":{"domain_size":4}},"components":2}"#,
    )
    .unwrap();
    let nature: NatureSpec = serde_json::from_str(r#"{"nature":"coin-flip","point":3}"#).unwrap();
    let class = ConceptClass::FiniteSupport {
        max_ones: 2,
        domain_size: Some(4),
    };
    let a = play(&learner, &nature, 80, 9, Some(&class));
    let b = play(&learner, &nature, 80, 9, Some(&class));
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
    let c = play(&learner, &nature, 80, 10, Some(&class));
    assert_ne!(csv_bytes(&a), csv_bytes(&c));
}

#[test]
fn regret_recomputed_from_columns() {
    let learner: LearnerSpec =
        serde_json::from_str(r#"{"learner":"fpl","experts":[{"constant":0},{"constant":1},{"threshold":"2"}]}"#).unwrap();
    let nature: NatureSpec = serde_json::from_str(r#"{"nature":"scripted","x":[1,2,3,1,2,3,2],"y":[0,1,1,1,0,1,1]}"#).unwrap();
    let class = ConceptClass::Finite(Arc::new(
        FiniteClass::integer_thresholds(&[1, 2, 3], &[1, 2, 3, 4]).unwrap(),
    ));
    let trace = play(&learner, &nature, 7, 3, Some(&class));
    let mistakes = trace.rounds.iter().filter(|r| r.yhat != r.y).count() as i64;
    // best threshold by hand: cut 2 errs on (1,1) and (2,0)
    assert_eq!(trace.best_rival(), Some(2));
    assert_eq!(regret(&trace, &class).unwrap(), mistakes - 2);
}

#[test]
fn realizable_aggregator_regret_below_mistakes() {
    let family = ClassFamily::FiniteSupport { domain_size: Some(12) };
    let target = Hypothesis::Indicator([Point::int(3), Point::int(8)].into_iter().collect());
    let xs: Vec<Point> = (0..120).map(|t| Point::int((t * 7) % 12 + 1)).collect();
    let mut nature = NatureStrategy::Scripted(Scripted::new(xs, Labels::Target(target), false));
    let class = ConceptClass::FiniteSupport {
        max_ones: 2,
        domain_size: Some(12),
    };
    let mut rivals = Rivals::class(&class);
    let trace = run_game(&mut Aggregator::new(family).unwrap(), &mut nature, 120, Some(&mut rivals)).unwrap();
    assert_eq!(trace.best_rival(), Some(0));
    assert!(trace.regret_at(120).unwrap() <= trace.mistakes() as i64);
    assert!(trace.mistakes() <= 16);
}

#[test]
fn committed_tree_forces_two_mistakes_on_full_pair() {
    let full = FiniteClass::full(vec![Point::named("a"), Point::named("b")]);
    let source = ClassSource::Inline(ClassDef::Explicit(ExplicitDef::from_class(&full)));
    let learner = LearnerSpec::Soa {
        class: source.clone(),
        update: Default::default(),
        empty: Default::default(),
    };
    let nature = NatureSpec::TreeAdversary {
        class: source,
        mode: Default::default(),
    };
    let trace = play(&learner, &nature, 4, 0, None);
    assert_eq!(trace.mistakes(), 2);
    assert!(trace.rounds[..2].iter().all(|r| r.mistake));
}

#[test]
fn fpl_two_experts_within_bound() {
    let cfg: ExperimentConfig = serde_json::from_str(
        r#"{
            "learner": {"learner":"fpl","experts":[{"constant":0},{"constant":1}],"complexities":[1,1]},
            "nature": {"nature":"coin-flip"},
            "horizons": [100, 400],
            "trials": 300,
            "seed": 11,
            "comparator": {"class": {"domain":[0],"hypotheses":[[0],[1]]}},
            "bound": {"bound":"fpl","k":1}
        }"#,
    )
    .unwrap();
    let curve = monte_carlo(&cfg).unwrap();
    assert!(curve.all_hold());
    assert_eq!(curve.points[1].bound, Some(60.0));
}

#[test]
fn empty_script_gives_empty_trace() {
    let learner: LearnerSpec = serde_json::from_str(r#"{"learner":"constant","label":1}"#).unwrap();
    let nature: NatureSpec = serde_json::from_str(r#"{"nature":"scripted","x":[],"y":[]}"#).unwrap();
    let trace = play(&learner, &nature, 0, 0, None);
    assert!(trace.is_empty());
    assert_eq!(trace.mistakes(), 0);
}
