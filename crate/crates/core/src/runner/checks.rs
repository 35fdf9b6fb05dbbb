use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::experiment::{agnostic_bound, coin_flip_lower_bound, fpl_bound, lower_holds, run_trials, summarize, upper_holds};
use super::{run_game, RunError, Rivals};
use crate::fpl::{
    analytic_inner_mass, derive_seed, meta_complexity, meta_prefix_mass, pool_mass, AgnosticFpl, AgnosticOptions,
    ComplexityAssignment, FplLearner, Redraw, SpaceTable,
};
use crate::hypothesis::io::ExplicitDef;
use crate::hypothesis::{ClassFamily, ConceptClass, DiscreteMeasure, FiniteClass, HypSet, Hypothesis, Point, Rational};
use crate::learners::{
    Aggregator, ConstantLearner, CoverLearner, CoverSpec, EmptyPolicy, Learner, Soa, UpdateRule,
};
use crate::littlestone::{ldim, ldim_of, minimax_mistakes, LdimMemo};
use crate::nature::{commit_against, mistake_seeking_script, soa_worst_case, Labels, NatureStrategy, Scripted, TreeAdversary, WindowHalving};

const CORPUS_SEED: u64 = 0x6c64_696d;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[default]
    Default,
    /// Larger corpora and more trials.
    Full,
}

/// Deliberate defects for exercising the harness itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Every singleton sub-class is recorded with Ldim 1 instead of 0.
    CorruptLdimMemo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    LdimMinimax,
    SoaBound,
    AggregatorBound,
    CoverBound,
    ExpertOracle,
    FplRegret,
    AgnosticRegret,
    CoinFlipLower,
    ComplexityMass,
    WindowHalving,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::LdimMinimax,
        Check::SoaBound,
        Check::AggregatorBound,
        Check::CoverBound,
        Check::ExpertOracle,
        Check::FplRegret,
        Check::AgnosticRegret,
        Check::CoinFlipLower,
        Check::ComplexityMass,
        Check::WindowHalving,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::LdimMinimax => "ldim-minimax",
            Check::SoaBound => "soa-bound",
            Check::AggregatorBound => "aggregator-bound",
            Check::CoverBound => "cover-bound",
            Check::ExpertOracle => "expert-oracle",
            Check::FplRegret => "fpl-regret",
            Check::AgnosticRegret => "agnostic-regret",
            Check::CoinFlipLower => "coin-flip-lower",
            Check::ComplexityMass => "complexity-mass",
            Check::WindowHalving => "window-halving",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Check::LdimMinimax => "minimax mistakes equal Ldim on every corpus class",
            Check::SoaBound => "SOA makes at most Ldim mistakes against committed and exhaustive adversaries",
            Check::AggregatorBound => "aggregator makes at most (d_k + k)^2 mistakes for targets in H_k",
            Check::CoverBound => "cover learner makes at most m mistakes with the target covered at index m",
            Check::ExpertOracle => "some keyed expert makes at most L + best-hypothesis mistakes",
            Check::FplRegret => "FPL expected regret to expert i is at most (k_i + 2) sqrt T",
            Check::AgnosticRegret => "agnostic FPL expected regret to H_n meets the explicit bound",
            Check::CoinFlipLower => "coin-flip expected regret is at least 3 sqrt T / 64",
            Check::ComplexityMass => "complexity partial sums stay below 0.83 (inner) and 1/e (meta)",
            Check::WindowHalving => "window halving forces a mistake every round on a realizable prefix",
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub seed: u64,
    #[serde(default)]
    pub fault: Option<Fault>,
    /// Run only these checks; all when `None`.
    #[serde(default)]
    pub checks: Option<Vec<Check>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            suite: Suite::Default,
            seed: 17,
            fault: None,
            checks: None,
        }
    }
}

/// One case of a check: an observed value against its bound.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRow {
    pub case: String,
    pub value: f64,
    /// Standard error and trial count, for Monte-Carlo cases.
    pub se: Option<f64>,
    pub trials: Option<usize>,
    pub bound: f64,
    /// Distance to the bound on the passing side, after the 3-SE margin.
    pub margin: f64,
    pub passed: bool,
}

impl CaseRow {
    fn exact_upper(case: String, value: f64, bound: f64) -> Self {
        Self {
            case,
            value,
            se: None,
            trials: None,
            bound,
            margin: bound - value,
            passed: value <= bound,
        }
    }

    fn exact_eq(case: String, value: f64, expected: f64) -> Self {
        Self {
            case,
            value,
            se: None,
            trials: None,
            bound: expected,
            margin: -(value - expected).abs(),
            passed: value == expected,
        }
    }

    fn upper(case: String, values: &[f64], bound: f64) -> Self {
        let s = summarize(values);
        Self {
            case,
            value: s.mean,
            se: Some(s.se),
            trials: Some(s.trials),
            bound,
            margin: bound - (s.mean + super::SE_MARGIN * s.se),
            passed: upper_holds(&s, bound),
        }
    }

    fn lower(case: String, values: &[f64], bound: f64) -> Self {
        let s = summarize(values);
        Self {
            case,
            value: s.mean,
            se: Some(s.se),
            trials: Some(s.trials),
            bound,
            margin: s.mean - super::SE_MARGIN * s.se - bound,
            passed: lower_holds(&s, bound),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub cases: Vec<CaseRow>,
}

impl Verdict {
    fn from_cases(check: Check, cases: Vec<CaseRow>, extra: Option<String>) -> Self {
        let failed: Vec<&CaseRow> = cases.iter().filter(|c| !c.passed).collect();
        let worst = cases
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
            .map(|c| format!("; tightest {} ({} vs {:.4})", c.case, fmt_value(c), c.bound))
            .unwrap_or_default();
        let mut detail = if failed.is_empty() {
            format!("{} cases pass{worst}", cases.len())
        } else {
            format!(
                "{} of {} cases fail, first {} ({} vs {:.4})",
                failed.len(),
                cases.len(),
                failed[0].case,
                fmt_value(failed[0]),
                failed[0].bound
            )
        };
        if let Some(e) = extra {
            detail.push_str("; ");
            detail.push_str(&e);
        }
        Self {
            check,
            passed: failed.is_empty() && !cases.is_empty(),
            detail,
            seconds: 0.0,
            cases,
        }
    }

    fn error(check: Check, err: RunError) -> Self {
        let mut detail = format!("error: {err}");
        let mut source = std::error::Error::source(&err);
        while let Some(s) = source {
            detail.push_str(&format!(": {s}"));
            source = s.source();
        }
        Self {
            check,
            passed: false,
            detail,
            seconds: 0.0,
            cases: Vec::new(),
        }
    }
}

fn fmt_value(c: &CaseRow) -> String {
    match c.se {
        Some(se) => format!("{:.4} ± {:.4}", c.value, se),
        None => format!("{}", c.value),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub options: VerifyOptions,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Runs the selected checks. Failures, including internal errors, become
/// failing verdicts.
pub fn verify_bounds(options: &VerifyOptions) -> ExperimentReport {
    let checks = options.checks.clone().unwrap_or_else(|| Check::ALL.to_vec());
    let verdicts = checks.iter().map(|&c| run_check(c, options)).collect();
    ExperimentReport {
        options: options.clone(),
        verdicts,
    }
}

fn run_check(check: Check, o: &VerifyOptions) -> Verdict {
    let start = Instant::now();
    let seed = derive_seed(o.seed, check as u64 + 1);
    let result = match check {
        Check::LdimMinimax => ldim_minimax(o),
        Check::SoaBound => soa_bound(o),
        Check::AggregatorBound => aggregator_bound(o, seed),
        Check::CoverBound => cover_bound(o, seed),
        Check::ExpertOracle => expert_oracle(o),
        Check::FplRegret => fpl_regret(o, seed),
        Check::AgnosticRegret => agnostic_regret(o, seed),
        Check::CoinFlipLower => coin_flip_lower(o, seed),
        Check::ComplexityMass => complexity_mass(),
        Check::WindowHalving => window_halving(o),
    };
    let mut v = result.unwrap_or_else(|e| Verdict::error(check, e));
    v.seconds = start.elapsed().as_secs_f64();
    v
}

fn names(n: usize) -> Vec<Point> {
    (0..n).map(|i| Point::named(((b'a' + i as u8) as char).to_string())).collect()
}

/// Every non-empty class over 1, 2 and 3 points, then random classes over
/// 4 and 5 points drawn from a fixed seed.
pub(crate) fn class_corpus(random: usize) -> Vec<FiniteClass> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.extend(all_classes(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    while out.len() < 273 + random {
        let n = rng.gen_range(4..=5);
        let p = rng.gen_range(0.1..0.6);
        let rows: Vec<Vec<u8>> = (0..1u32 << n)
            .filter(|_| rng.gen_bool(p))
            .map(|r| (0..n).map(|i| ((r >> (n - 1 - i)) & 1) as u8).collect())
            .collect();
        if !rows.is_empty() {
            out.push(FiniteClass::from_bits(names(n), rows).expect("distinct rows"));
        }
    }
    out
}

fn all_classes(n: usize) -> Vec<FiniteClass> {
    let patterns = 1usize << n;
    (1..1u64 << patterns)
        .map(|mask| {
            let rows = (0..patterns)
                .filter(|r| mask >> r & 1 == 1)
                .map(|r| (0..n).map(|i| ((r >> (n - 1 - i)) & 1) as u8).collect())
                .collect();
            FiniteClass::from_bits(names(n), rows).expect("distinct rows")
        })
        .collect()
}

fn describe(class: &FiniteClass) -> String {
    serde_json::to_string(&ExplicitDef::from_class(class)).expect("class serializes")
}

fn ldim_minimax(o: &VerifyOptions) -> Result<Verdict, RunError> {
    let random = if o.suite == Suite::Full { 200 } else { 60 };
    let mut cases = Vec::new();
    let mut counterexample = None;
    for (i, class) in class_corpus(random).iter().enumerate() {
        let mut memo = LdimMemo::new();
        if o.fault == Some(Fault::CorruptLdimMemo) {
            for h in 0..class.len() {
                memo.inject(HypSet::from_indices(class.len(), [h]), 1);
            }
        }
        let d = ldim_of(class, &class.all(), &mut memo).map_err(setup)?;
        let m = minimax_mistakes(class).map_err(setup)?;
        let row = CaseRow::exact_eq(format!("class #{i}"), f64::from(d), f64::from(m));
        if !row.passed && counterexample.is_none() {
            counterexample = Some(format!("counterexample {} (ldim {d}, minimax {m})", describe(class)));
        }
        cases.push(row);
    }
    Ok(Verdict::from_cases(Check::LdimMinimax, cases, counterexample))
}

fn setup(e: impl Into<crate::learners::LearnerError>) -> RunError {
    RunError::Setup(e.into())
}

fn soa_bound(o: &VerifyOptions) -> Result<Verdict, RunError> {
    let random = if o.suite == Suite::Full { 200 } else { 60 };
    let mut cases = Vec::new();
    for (i, class) in class_corpus(random).into_iter().enumerate() {
        let class = Arc::new(class);
        let concept = ConceptClass::Finite(class.clone());
        let d = ldim(&class).map_err(setup)?;
        let bound = f64::from(d);
        let n = class.domain().len() as u64;
        if d >= 1 {
            let script = commit_against(&class, Box::new(Soa::new(&concept)))?;
            let len = script.points().len() as u64;
            let mut nature = NatureStrategy::Scripted(script);
            let trace = run_game(&mut Soa::new(&concept), &mut nature, 2 * len, None)?;
            let forced = trace.rounds[..d as usize].iter().all(|r| r.mistake);
            let mut row = CaseRow::exact_upper(format!("class #{i} committed"), trace.mistakes() as f64, bound);
            row.passed &= forced;
            cases.push(row);
        }
        let mut nature = NatureStrategy::Tree(TreeAdversary::new(class.clone())?);
        let trace = run_game(&mut Soa::new(&concept), &mut nature, u64::from(d) + 2 * n, None)?;
        cases.push(CaseRow::exact_upper(format!("class #{i} online"), trace.mistakes() as f64, bound));
        for rule in [UpdateRule::OnMistake, UpdateRule::Always] {
            let (worst, seq) = soa_worst_case(&class, rule)?;
            let mut soa = Soa::with_options(&concept, rule, EmptyPolicy::Error);
            let mut nature = NatureStrategy::Scripted(Scripted::new(
                seq.iter().map(|(x, _)| x.clone()).collect(),
                Labels::Fixed(seq.iter().map(|(_, y)| *y).collect()),
                false,
            ));
            let replay = run_game(&mut soa, &mut nature, seq.len() as u64, None)?;
            let mut row = CaseRow::exact_upper(format!("class #{i} exhaustive {rule:?}"), f64::from(worst), bound);
            row.passed &= replay.mistakes() == u64::from(worst);
            cases.push(row);
        }
    }
    Ok(Verdict::from_cases(Check::SoaBound, cases, None))
}

fn indicator(points: &[i64]) -> Hypothesis {
    Hypothesis::Indicator(points.iter().map(|&p| Point::int(p)).collect::<BTreeSet<_>>())
}

fn aggregator_bound(o: &VerifyOptions, seed: u64) -> Result<Verdict, RunError> {
    const DOMAIN: i64 = 12;
    const LENGTH: usize = 200;
    let family = ClassFamily::FiniteSupport {
        domain_size: Some(DOMAIN as u64),
    };
    let domain: Vec<Point> = (1..=DOMAIN).map(Point::int).collect();
    let targets: [&[i64]; 9] = [
        &[1],
        &[7],
        &[12],
        &[1, 2],
        &[5, 11],
        &[3, 12],
        &[1, 2, 3],
        &[2, 6, 10],
        &[10, 11, 12],
    ];
    let random_scripts = if o.suite == Suite::Full { 50 } else { 10 };
    let mut cases = Vec::new();
    for (ti, ones) in targets.iter().enumerate() {
        let k = ones.len() as u32;
        let bound = f64::from((2 * k).pow(2));
        let target = indicator(ones);
        let mut scripts = vec![(
            "mistake-seeking".to_string(),
            mistake_seeking_script(&target, &domain, Box::new(Aggregator::new(family.clone())?), LENGTH)?,
        )];
        for s in 0..random_scripts {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, (ti * 1000 + s) as u64));
            let xs = (0..LENGTH).map(|_| domain[rng.gen_range(0..domain.len())].clone()).collect();
            scripts.push((format!("random #{s}"), xs));
        }
        for (name, xs) in scripts {
            let mut nature = NatureStrategy::Scripted(Scripted::new(xs, Labels::Target(target.clone()), false));
            let mut learner = Aggregator::new(family.clone())?;
            let trace = run_game(&mut learner, &mut nature, LENGTH as u64, None)?;
            cases.push(CaseRow::exact_upper(
                format!("k={k} target {ones:?} {name}"),
                trace.mistakes() as f64,
                bound,
            ));
        }
    }
    Ok(Verdict::from_cases(Check::AggregatorBound, cases, None))
}

fn cover_bound(o: &VerifyOptions, seed: u64) -> Result<Verdict, RunError> {
    const HORIZON: u64 = 300;
    let trials = if o.suite == Suite::Full { 500 } else { 100 };
    let measure = DiscreteMeasure::geometric((1..=20).map(Point::int).collect()).map_err(|e| RunError::Config(e.to_string()))?;
    let threshold = |n: i64, d: i64| Hypothesis::Threshold(Rational::new(n.into(), d.into()));
    let target = threshold(7, 1);
    // Cuts that each disagree with the target on some support point.
    let decoys: Vec<Hypothesis> = [3, 12, 1, 9, 5, 15, 2, 8, 20, 4]
        .iter()
        .map(|&c| threshold(c, 1))
        .chain([Hypothesis::Constant(false), Hypothesis::Constant(true)])
        .collect();
    let mut cases = Vec::new();
    for (mi, m) in [1usize, 5, 10].into_iter().enumerate() {
        // Index m holds a cut that differs from the target only off the support.
        let mut list: Vec<Hypothesis> = decoys[..m - 1].to_vec();
        list.push(threshold(13, 2));
        list.extend(decoys[m - 1..].iter().cloned());
        let covers = [
            ("list", CoverSpec::List(list), target.clone()),
            ("natural", CoverSpec::NaturalThresholds, threshold(m as i64, 1)),
        ];
        for (ci, (name, spec, target)) in covers.into_iter().enumerate() {
            let seeds = derive_seed(seed, (mi * 2 + ci) as u64);
            let worst = run_trials(trials, seeds, |s| {
                let mut learner = CoverLearner::new(spec.clone())?;
                let mut nature = NatureStrategy::Iid {
                    sampler: measure.sampler(s),
                    target: target.clone(),
                };
                Ok(run_game(&mut learner, &mut nature, HORIZON, None)?.mistakes())
            })?
            .into_iter()
            .max()
            .unwrap_or(0);
            cases.push(CaseRow::exact_upper(
                format!("m={m} {name} cover, max over {trials} streams"),
                worst as f64,
                m as f64,
            ));
        }
    }
    Ok(Verdict::from_cases(Check::CoverBound, cases, None))
}

/// All 3-point classes with Ldim at most 2; the default suite keeps one
/// class per orbit under relabelling of the points.
fn oracle_corpus(suite: Suite) -> Vec<FiniteClass> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut seen = BTreeSet::new();
    all_classes(3)
        .into_iter()
        .filter(|c| ldim(c).is_ok_and(|d| d <= 2))
        .filter(|c| {
            if suite == Suite::Full {
                return true;
            }
            let rows: Vec<Vec<bool>> = (0..c.len()).map(|h| c.row(h).to_vec()).collect();
            let canon = perms
                .iter()
                .map(|p| {
                    let mut r: Vec<Vec<bool>> = rows.iter().map(|row| p.iter().map(|&i| row[i]).collect()).collect();
                    r.sort();
                    r
                })
                .min()
                .expect("non-empty");
            seen.insert(canon)
        })
        .collect()
}

#[derive(Clone, Copy)]
struct KeyedState {
    space: u32,
    loss: u32,
    len: u32,
    last: u32,
}

/// Depth-first enumeration of every labelled sequence up to a horizon,
/// carrying all keyed experts with `L <= dim` and each row's mistakes.
struct OracleSearch<'a> {
    class: &'a FiniteClass,
    dim: u32,
    horizon: u32,
    table: SpaceTable,
    /// Per space: (SOA label, successor on 0, successor on 1) per point.
    steps: Vec<Vec<Option<(bool, u32, u32)>>>,
    checked: u64,
    /// Largest `min_key(loss - L) - min_h loss` seen; the claim is `<= 0`.
    worst_gap: i64,
    example: Option<Vec<(usize, bool)>>,
}

impl OracleSearch<'_> {
    fn step(&mut self, space: u32, xi: usize) -> Result<(bool, u32, u32), RunError> {
        if self.steps.len() <= space as usize {
            self.steps.resize(space as usize + 1, vec![None; self.class.domain().len()]);
        }
        if let Some(s) = self.steps[space as usize][xi] {
            return Ok(s);
        }
        let x = &self.class.domain()[xi];
        let label = self.table.label(space, x)?;
        let zero = self.table.restrict_or_keep(space, x, false)?;
        let one = self.table.restrict_or_keep(space, x, true)?;
        self.steps[space as usize][xi] = Some((label, zero, one));
        Ok((label, zero, one))
    }

    fn search(&mut self, t: u32, experts: &[KeyedState], rows: &[u32], path: &mut Vec<(usize, bool)>) -> Result<(), RunError> {
        if t > 0 {
            self.checked += 1;
            let best_key = experts.iter().map(|e| i64::from(e.loss) - i64::from(e.len)).min().expect("empty key");
            let best_row = i64::from(*rows.iter().min().expect("non-empty class"));
            let gap = best_key - best_row;
            if gap > self.worst_gap {
                self.worst_gap = gap;
                self.example = Some(path.clone());
            }
        }
        if t == self.horizon {
            return Ok(());
        }
        let round = t + 1;
        let mut next: Vec<KeyedState> = experts.to_vec();
        for e in experts {
            if e.len < self.dim {
                next.push(KeyedState {
                    len: e.len + 1,
                    last: round,
                    ..*e
                });
            }
        }
        for xi in 0..self.class.domain().len() {
            for y in [false, true] {
                let mut child = next.clone();
                for e in child.iter_mut() {
                    let (label, zero, one) = self.step(e.space, xi)?;
                    if label != y {
                        e.loss += 1;
                        if e.last == round {
                            e.space = if y { one } else { zero };
                        }
                    }
                }
                let child_rows: Vec<u32> = rows
                    .iter()
                    .enumerate()
                    .map(|(h, &c)| c + u32::from(self.class.row(h)[xi] != y))
                    .collect();
                path.push((xi, y));
                self.search(round, &child, &child_rows, path)?;
                path.pop();
            }
        }
        Ok(())
    }
}

fn expert_oracle(o: &VerifyOptions) -> Result<Verdict, RunError> {
    const HORIZON: u32 = 8;
    let mut cases = Vec::new();
    for (i, class) in oracle_corpus(o.suite).iter().enumerate() {
        let concept = ConceptClass::Finite(Arc::new(class.clone()));
        let mut search = OracleSearch {
            class,
            dim: ldim(class).map_err(setup)?,
            horizon: HORIZON,
            table: SpaceTable::new(&concept),
            steps: Vec::new(),
            checked: 0,
            worst_gap: i64::MIN,
            example: None,
        };
        let root = KeyedState {
            space: search.table.root(),
            loss: 0,
            len: 0,
            last: 0,
        };
        search.search(0, &[root], &vec![0; class.len()], &mut Vec::new())?;
        let mut row = CaseRow::exact_upper(
            format!("class #{i} (ldim {}, {} sequences)", search.dim, search.checked),
            search.worst_gap as f64,
            0.0,
        );
        if !row.passed {
            let seq: Vec<String> = search
                .example
                .iter()
                .flatten()
                .map(|(xi, y)| format!("{}:{}", class.domain()[*xi], u8::from(*y)))
                .collect();
            row.case = format!("{} {} on {}", row.case, describe(class), seq.join(","));
        }
        cases.push(row);
    }
    Ok(Verdict::from_cases(Check::ExpertOracle, cases, None))
}

/// Label streams for the fixed-expert experiments, drawn per trial.
#[derive(Clone, Copy, Debug)]
enum LabelScript {
    Alternating,
    /// Blocks of 1s and 0s of doubling length.
    DoublingBlocks,
    Coin,
    /// The threshold at 3 with 20% of labels flipped.
    NoisyThreshold,
}

impl LabelScript {
    const ALL: [LabelScript; 4] = [
        LabelScript::Alternating,
        LabelScript::DoublingBlocks,
        LabelScript::Coin,
        LabelScript::NoisyThreshold,
    ];

    fn draw(self, horizon: usize, seed: u64) -> (Vec<Point>, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<Point> = (0..horizon).map(|_| Point::int(rng.gen_range(1..=4))).collect();
        let ys = match self {
            LabelScript::Alternating => (0..horizon).map(|t| t % 2 == 0).collect(),
            LabelScript::DoublingBlocks => (0..horizon).map(|t| (usize::BITS - (t + 1).leading_zeros()) % 2 == 1).collect(),
            LabelScript::Coin => (0..horizon).map(|_| rng.gen_bool(0.5)).collect(),
            LabelScript::NoisyThreshold => xs
                .iter()
                .map(|x| {
                    let clean = x.positive_integer().expect("integer point") >= 3;
                    clean ^ rng.gen_bool(0.2)
                })
                .collect(),
        };
        (xs, ys)
    }
}

fn scripted(xs: Vec<Point>, ys: Vec<bool>) -> NatureStrategy {
    NatureStrategy::Scripted(Scripted::new(xs, Labels::Fixed(ys), false))
}

fn fpl_regret(o: &VerifyOptions, seed: u64) -> Result<Verdict, RunError> {
    const HORIZON: u64 = 400;
    let trials = if o.suite == Suite::Full { 5000 } else { 2000 };
    let thr = |c: i64| Hypothesis::Threshold(Rational::from_integer(c.into()));
    let pools: Vec<(&str, Vec<Hypothesis>, ComplexityAssignment)> = vec![
        (
            "constants k=1",
            vec![Hypothesis::Constant(false), Hypothesis::Constant(true)],
            ComplexityAssignment::Explicit(vec![1.0, 1.0]),
        ),
        (
            "3 thresholds",
            vec![thr(2), thr(3), thr(4)],
            ComplexityAssignment::Explicit(vec![(3f64).ln(); 3]),
        ),
        (
            "4 mixed meta",
            vec![Hypothesis::Constant(false), thr(3), indicator(&[2, 4]), Hypothesis::Constant(true)],
            ComplexityAssignment::Meta,
        ),
        (
            "5 mixed meta",
            vec![thr(2), Hypothesis::Constant(true), thr(3), indicator(&[1]), thr(4)],
            ComplexityAssignment::Meta,
        ),
    ];
    let mut cases = Vec::new();
    let mut case_id = 0u64;
    for (name, experts, k) in &pools {
        let ks = k.prefix(experts.len()).map_err(setup)?;
        for script in LabelScript::ALL {
            case_id += 1;
            let regrets = run_trials(trials, derive_seed(seed, case_id), |s| {
                let (xs, ys) = script.draw(HORIZON as usize, derive_seed(s, 2));
                let mut learner = FplLearner::new(experts.clone(), k, Redraw::PerRound, derive_seed(s, 1)).map_err(setup)?;
                let mut nature = scripted(xs.clone(), ys.clone());
                let m = run_game(&mut learner, &mut nature, HORIZON, None)?.mistakes() as f64;
                experts
                    .iter()
                    .map(|h| {
                        let mut loss = 0u64;
                        for (x, y) in xs.iter().zip(&ys) {
                            loss += u64::from(h.eval(x).map_err(|e| RunError::Config(e.to_string()))? != *y);
                        }
                        Ok(m - loss as f64)
                    })
                    .collect::<Result<Vec<f64>, RunError>>()
            })?;
            for (i, ki) in ks.iter().enumerate() {
                let values: Vec<f64> = regrets.iter().map(|r| r[i]).collect();
                cases.push(CaseRow::upper(
                    format!("{name} {script:?} vs expert {}", i + 1),
                    &values,
                    fpl_bound(*ki, HORIZON),
                ));
            }
        }
    }
    Ok(Verdict::from_cases(Check::FplRegret, cases, None))
}

fn agnostic_regret(o: &VerifyOptions, seed: u64) -> Result<Verdict, RunError> {
    let horizons = [100u64, 200];
    let trials = if o.suite == Suite::Full { 1000 } else { 500 };
    let family = ClassFamily::FiniteSupport { domain_size: Some(4) };
    let components = 2usize;
    let options = AgnosticOptions {
        components: Some(components),
        ..AgnosticOptions::default()
    };
    let parts = (1..=components)
        .map(|n| family.component(n))
        .collect::<Result<Vec<_>, _>>()?;
    let natures: [(&str, Option<Hypothesis>, f64); 3] = [
        ("noisy H_1 target", Some(indicator(&[2])), 0.2),
        ("noisy H_2 target", Some(indicator(&[1, 3])), 0.2),
        ("coin labels", None, 0.5),
    ];
    let max_t = *horizons.iter().max().expect("non-empty");
    let mut cases = Vec::new();
    for (ni, (name, target, noise)) in natures.iter().enumerate() {
        let regrets = run_trials(trials, derive_seed(seed, ni as u64), |s| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(s, 2));
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for _ in 0..max_t {
                let x = Point::int(rng.gen_range(1..=4));
                let clean = match target {
                    Some(h) => h.eval(&x).map_err(|e| RunError::Config(e.to_string()))?,
                    None => false,
                };
                ys.push(clean ^ rng.gen_bool(*noise));
                xs.push(x);
            }
            let mut learner = AgnosticFpl::new(&family, &options, derive_seed(s, 1))?;
            let trace = run_game(&mut learner, &mut scripted(xs, ys), max_t, None)?;
            let data = trace.data();
            let mut out = Vec::new();
            for &h in &horizons {
                let m = trace.rounds[h as usize - 1].cum_mistakes as f64;
                for c in &parts {
                    let best = c
                        .class
                        .best_mistakes(&data[..h as usize])
                        .map_err(|e| RunError::Config(e.to_string()))?;
                    out.push(m - best as f64);
                }
            }
            Ok(out)
        })?;
        for (hi, &h) in horizons.iter().enumerate() {
            for (ci, c) in parts.iter().enumerate() {
                let values: Vec<f64> = regrets.iter().map(|r| r[hi * parts.len() + ci]).collect();
                cases.push(CaseRow::upper(
                    format!("{name} T={h} vs H_{} (d={})", c.index, c.dim),
                    &values,
                    agnostic_bound(c.dim, c.index as u64, h),
                ));
            }
        }
    }
    Ok(Verdict::from_cases(Check::AgnosticRegret, cases, None))
}

fn coin_flip_lower(o: &VerifyOptions, seed: u64) -> Result<Verdict, RunError> {
    let horizons = [100u64, 400];
    let trials = if o.suite == Suite::Full { 5000 } else { 2000 };
    let coin = Arc::new(FiniteClass::from_bits(vec![Point::int(0)], vec![vec![0], vec![1]]).map_err(|e| RunError::Config(e.to_string()))?);
    let concept = ConceptClass::Finite(coin.clone());
    let family = ClassFamily::explicit(vec![(*coin).clone()], None)?;
    let max_t = *horizons.iter().max().expect("non-empty");
    let learners: [&str; 4] = ["agnostic FPL", "SOA (reset)", "SOA always (reset)", "constant 0"];
    let mut cases = Vec::new();
    for (li, name) in learners.iter().enumerate() {
        let regrets = run_trials(trials, derive_seed(seed, li as u64), |s| {
            let mut learner: Box<dyn Learner> = match li {
                0 => Box::new(AgnosticFpl::new(&family, &AgnosticOptions::default(), derive_seed(s, 1))?),
                1 => Box::new(Soa::with_options(&concept, UpdateRule::OnMistake, EmptyPolicy::Reset)),
                2 => Box::new(Soa::with_options(&concept, UpdateRule::Always, EmptyPolicy::Reset)),
                _ => Box::new(ConstantLearner::new(false)),
            };
            let mut nature = NatureStrategy::coin_flip(Point::int(0), derive_seed(s, 2));
            let mut rivals = Rivals::class(&concept);
            let trace = run_game(learner.as_mut(), &mut nature, max_t, Some(&mut rivals))?;
            Ok(horizons
                .iter()
                .map(|&h| trace.regret_at(h as usize).expect("rivals tracked") as f64)
                .collect::<Vec<_>>())
        })?;
        for (hi, &h) in horizons.iter().enumerate() {
            let values: Vec<f64> = regrets.iter().map(|r| r[hi]).collect();
            cases.push(CaseRow::lower(format!("{name} T={h}"), &values, coin_flip_lower_bound(h)));
        }
    }
    Ok(Verdict::from_cases(Check::CoinFlipLower, cases, None))
}

fn complexity_mass() -> Result<Verdict, RunError> {
    const TERMS: u64 = 10_000;
    let mut cases = Vec::new();
    let meta = meta_prefix_mass(TERMS);
    let mut running = 0.0;
    let mut monotone = true;
    for n in 1..=TERMS {
        let next = running + (-meta_complexity(n)).exp();
        monotone &= next >= running && next <= 1.0;
        running = next;
    }
    let mut row = CaseRow::exact_upper(format!("meta prefix mass, {TERMS} terms"), meta, (-1f64).exp());
    row.passed &= monotone;
    cases.push(row);
    for d in 0..=4 {
        cases.push(CaseRow::exact_upper(
            format!("inner analytic mass d={d}, {TERMS} terms"),
            analytic_inner_mass(d, TERMS),
            0.83,
        ));
        cases.push(CaseRow::exact_upper(
            format!("materialized pool mass d={d}, T={TERMS}"),
            pool_mass(d, TERMS),
            0.83,
        ));
    }
    Ok(Verdict::from_cases(Check::ComplexityMass, cases, None))
}

fn window_halving(o: &VerifyOptions) -> Result<Verdict, RunError> {
    let depth = if o.suite == Suite::Full { 128u64 } else { 40 };
    let bits = u32::try_from(2 * depth + 8).expect("small depth");
    let dyadic = ConceptClass::DyadicThresholds { bits };
    let learners: [&str; 4] = ["SOA on-mistake", "SOA always", "constant 0", "constant 1"];
    let build = |li: usize| -> Box<dyn Learner> {
        match li {
            0 => Box::new(Soa::with_options(&dyadic, UpdateRule::OnMistake, EmptyPolicy::Error)),
            1 => Box::new(Soa::with_options(&dyadic, UpdateRule::Always, EmptyPolicy::Error)),
            2 => Box::new(ConstantLearner::new(false)),
            _ => Box::new(ConstantLearner::new(true)),
        }
    };
    let mut cases = Vec::new();
    for (li, name) in learners.iter().enumerate() {
        let mut learner = build(li);
        let mut halving = WindowHalving::new(depth);
        let mut realizable = true;
        let mut errs = 0u64;
        let mut data = Vec::new();
        for t in 1..=depth {
            let x = halving.next_point().expect("within depth");
            let yhat = learner.predict(&x).map_err(|source| RunError::Learner { round: t, source })?;
            let y = halving.reveal(yhat);
            learner.absorb(&x, y).map_err(|source| RunError::Learner { round: t, source })?;
            errs += u64::from(y != yhat);
            data.push((x, y));
            realizable &= halving.window().is_realizable();
        }
        let consistent = halving.window().realizing_cut().is_some_and(|cut| {
            let h = Hypothesis::Threshold(cut);
            data.iter().all(|(x, y)| h.eval(x).is_ok_and(|v| v == *y))
        });
        // the same game through the generic loop
        let mut nature = NatureStrategy::WindowHalving(WindowHalving::new(depth));
        let trace = run_game(build(li).as_mut(), &mut nature, depth, None)?;
        let replayed = trace.data() == data;
        let mut row = CaseRow::exact_eq(format!("{name}, {depth} rounds"), errs as f64, depth as f64);
        row.passed &= realizable && consistent && replayed;
        cases.push(row);
    }
    Ok(Verdict::from_cases(Check::WindowHalving, cases, None))
}
