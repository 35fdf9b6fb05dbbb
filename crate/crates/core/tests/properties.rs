use std::sync::Arc;

use proptest::prelude::*;

use nulearn::fpl::{inner_complexity, pool_mass, ExpertPool, MassTracker};
use nulearn::hypothesis::{ConceptClass, FiniteClass, Point};
use nulearn::learners::{EmptyPolicy, Learner, Soa, UpdateRule};
use nulearn::littlestone::{ldim, minimax_mistakes, shattered_tree_witness, verify_witness, VersionSpace};
use nulearn::nature::{Labels, NatureStrategy, Scripted};
use nulearn::runner::{regret, run_game, Rivals};

fn class_from(n: usize, mask: u64) -> Option<FiniteClass> {
    let rows: Vec<Vec<u8>> = (0..1usize << n)
        .filter(|r| mask >> (r % 64) & 1 == 1)
        .map(|r| (0..n).map(|i| (r >> i & 1) as u8).collect())
        .collect();
    if rows.is_empty() {
        return None;
    }
    let domain = (0..n).map(|i| Point::named(format!("x{i}"))).collect();
    Some(FiniteClass::from_bits(domain, rows).unwrap())
}

fn small_class() -> impl Strategy<Value = FiniteClass> {
    (1usize..=4, any::<u64>()).prop_filter_map("non-empty", |(n, mask)| class_from(n, mask))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ldim_at_most_log2_size(c in small_class()) {
        let d = ldim(&c).unwrap();
        prop_assert!(1usize << d <= c.len());
    }

    #[test]
    fn minimax_equals_ldim(c in small_class()) {
        prop_assert_eq!(minimax_mistakes(&c).unwrap(), ldim(&c).unwrap());
    }

    #[test]
    fn witness_exists_exactly_up_to_ldim(c in small_class()) {
        let d = ldim(&c).unwrap();
        if d > 0 {
            let w = shattered_tree_witness(&c, d).unwrap().expect("a tree of depth Ldim");
            prop_assert!(verify_witness(&w, &c).unwrap());
        }
        prop_assert!(shattered_tree_witness(&c, d + 1).unwrap().is_none());
    }

    #[test]
    fn restrictions_partition_and_commute(c in small_class(), a in 0usize..4, b in 0usize..4, ya: bool, yb: bool) {
        let n = c.domain().len();
        let (xa, xb) = (c.domain()[a % n].clone(), c.domain()[b % n].clone());
        let all = c.all();
        let zero = c.split(&all, a % n, false);
        let one = c.split(&all, a % n, true);
        prop_assert_eq!(zero.len() + one.len(), all.len());
        prop_assert!(zero.intersection(&one).is_empty());

        let space = VersionSpace::new(&ConceptClass::Finite(Arc::new(c.clone())));
        let ab = space.restrict(&xa, ya).unwrap().restrict(&xb, yb).unwrap();
        let ba = space.restrict(&xb, yb).unwrap().restrict(&xa, ya).unwrap();
        prop_assert_eq!(ab.key(), ba.key());
    }

    #[test]
    fn ldim_monotone_under_restriction(c in small_class(), a in 0usize..4) {
        let n = c.domain().len();
        let d = ldim(&c).unwrap();
        let x = c.domain()[a % n].clone();
        let mut children = Vec::new();
        for y in [false, true] {
            let r = c.restrict(&x, y).unwrap();
            if !r.is_empty() {
                let dr = ldim(&r).unwrap();
                prop_assert!(dr <= d);
                children.push(dr);
            }
        }
        // when both labels survive, at least one side loses a dimension
        if children.len() == 2 && d > 0 {
            prop_assert!(children.iter().any(|&dr| dr < d));
        }
    }

    #[test]
    fn soa_mistakes_bounded_on_realizable_streams(
        c in small_class(),
        target in any::<usize>(),
        xs in prop::collection::vec(0usize..4, 0..30),
        always: bool,
    ) {
        let n = c.domain().len();
        let h = target % c.len();
        let class = Arc::new(c.clone());
        let rule = if always { UpdateRule::Always } else { UpdateRule::OnMistake };
        let mut soa = Soa::with_options(&ConceptClass::Finite(class.clone()), rule, EmptyPolicy::Error);
        for xi in xs {
            let x = &c.domain()[xi % n];
            soa.absorb(x, c.row(h)[xi % n]).unwrap();
        }
        prop_assert!(soa.mistakes() <= u64::from(ldim(&c).unwrap()));
    }

    #[test]
    fn trace_is_self_consistent(
        c in small_class(),
        script in prop::collection::vec((0usize..4, any::<bool>()), 1..40),
    ) {
        let n = c.domain().len();
        let concept = ConceptClass::Finite(Arc::new(c.clone()));
        let xs: Vec<Point> = script.iter().map(|(x, _)| c.domain()[x % n].clone()).collect();
        let ys: Vec<bool> = script.iter().map(|(_, y)| *y).collect();
        let mut nature = NatureStrategy::Scripted(Scripted::new(xs, Labels::Fixed(ys), false));
        let mut soa = Soa::with_options(&concept, UpdateRule::OnMistake, EmptyPolicy::Reset);
        let mut rivals = Rivals::class(&concept);
        let trace = run_game(&mut soa, &mut nature, script.len() as u64, Some(&mut rivals)).unwrap();
        let mut cum = 0;
        for (i, r) in trace.rounds.iter().enumerate() {
            prop_assert_eq!(r.t, i as u64 + 1);
            prop_assert_eq!(r.mistake, r.y != r.yhat);
            cum += u64::from(r.mistake);
            prop_assert_eq!(r.cum_mistakes, cum);
            let best = concept.best_mistakes(&trace.data()[..=i]).unwrap();
            prop_assert_eq!(r.cum_best_rival, Some(best));
        }
        prop_assert_eq!(regret(&trace, &concept).unwrap(), trace.regret_at(trace.len()).unwrap());
    }

    #[test]
    fn pool_mass_never_exceeds_one(d in 0u32..4, t in 1u64..60) {
        let mut tracker = MassTracker::new();
        let class = ConceptClass::FiniteSupport { max_ones: u64::from(d), domain_size: Some(3) };
        let mut pool = ExpertPool::new(&class, d);
        for round in 1..=t {
            pool.extend(round);
            pool.absorb(&Point::int(1 + (round % 3) as i64), round % 2 == 0).unwrap();
        }
        for e in pool.experts() {
            tracker.register(inner_complexity(d, e.last)).unwrap();
        }
        prop_assert!((tracker.mass() - pool_mass(d, t)).abs() < 1e-9);
        prop_assert!(tracker.mass() <= 0.83);
    }
}
