//! Evaluation protocols: monolingual k-fold cross-validation, pairwise
//! crosslingual transfer and bagged crosslingual training.
//!
//! Work units (folds, bags, targets) run in parallel, but results are always
//! assembled in a fixed order so reports are byte-identical across schedules.

pub(crate) mod render;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::FormatDescriptor;
use crate::knn::{KnnError, KnnModel};
use crate::lexicon::{Direction, Lexicon, MergedLexicon};
use crate::stats::{
    self, pearson, reference, t_test_one_sample_one_tailed, z_test_against_fixed, z_test_correlations_one_tailed,
    Floor, IsrFloor, StatsError,
};

pub use render::{render_bagged, render_table};

/// Folds smaller than this are flagged as high-variance.
pub const SMALL_FOLD_ROWS: usize = 50;
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("gold set `{name}` has {rows} rows, need at least {needed}")]
    TooFewRows { name: String, rows: usize, needed: usize },
    #[error("gold sets `{0}` and `{1}` use different formats")]
    FormatMismatch(String, String),
    #[error("unknown gold set `{0}`")]
    UnknownSet(String),
    #[error("bag size {size} outside [2, {max}]")]
    BagSize { size: usize, max: usize },
    #[error("bag {bag:?} is empty once target `{target}` is excluded")]
    EmptyBag { bag: Vec<String>, target: String },
    #[error(transparent)]
    Knn(#[from] KnnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionChoice {
    Both,
    FirstToSecond,
    SecondToFirst,
}

impl DirectionChoice {
    /// Directions in report order: the one predicting the first format comes first.
    pub fn directions(self) -> Vec<Direction> {
        match self {
            DirectionChoice::Both => vec![Direction::SecondToFirst, Direction::FirstToSecond],
            DirectionChoice::FirstToSecond => vec![Direction::FirstToSecond],
            DirectionChoice::SecondToFirst => vec![Direction::SecondToFirst],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub k: usize,
    pub folds: usize,
    pub seed: u64,
    pub direction: DirectionChoice,
    /// Comparison values for significance tests, matched by dimension name.
    pub floors: IsrFloor,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { k: 20, folds: 10, seed: 42, direction: DirectionChoice::Both, floors: reference::reported_floors() }
    }
}

impl EvalConfig {
    fn validate(&self) -> Result<(), EvalError> {
        if self.k == 0 {
            return Err(EvalError::Config("k must be at least 1".into()));
        }
        if self.folds < 2 {
            return Err(EvalError::Config("folds must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Monolingual,
    CrosslingualPairwise,
    CrosslingualBagged,
}

/// Name, size and content fingerprint of one gold set fed to an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub name: String,
    pub role: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionScore {
    pub dimension: String,
    /// Headline r: mean of per-fold r under cross-validation, plain r otherwise.
    pub r: Option<f64>,
    /// r over all concatenated out-of-fold predictions (cross-validation only).
    pub pooled_r: Option<f64>,
    /// One entry per fold, `None` where r is undefined (cross-validation only).
    pub fold_r: Vec<Option<f64>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub source: String,
    pub target: String,
    pub dimensions: Vec<DimensionScore>,
    /// Mean of the dimension r values; `None` if any is undefined.
    pub average: Option<f64>,
    pub pooled_average: Option<f64>,
}

impl DirectionReport {
    fn new(source: &str, target: &str, dimensions: Vec<DimensionScore>) -> Self {
        let average = mean_all(dimensions.iter().map(|d| d.r));
        let pooled_average = if dimensions.iter().any(|d| d.pooled_r.is_some()) {
            mean_all(dimensions.iter().map(|d| d.pooled_r))
        } else {
            None
        };
        Self { source: source.into(), target: target.into(), dimensions, average, pooled_average }
    }
}

fn mean_all(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = values.collect();
    v.filter(|v| !v.is_empty()).map(|v| stats::mean(&v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub dimension: String,
    pub test: String,
    pub floor: f64,
    pub floor_source: String,
    pub statistic: f64,
    pub p: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub experiment: Experiment,
    pub label: String,
    pub config: EvalConfig,
    pub inputs: Vec<InputRecord>,
    pub directions: Vec<DirectionReport>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn direction(&self, target: &str) -> Option<&DirectionReport> {
        self.directions.iter().find(|d| d.target.eq_ignore_ascii_case(target))
    }

    pub fn score(&self, dimension: &str) -> Option<&DimensionScore> {
        self.directions.iter().flat_map(|d| &d.dimensions).find(|s| s.dimension.eq_ignore_ascii_case(dimension))
    }

    pub fn verdict(&self, dimension: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.dimension.eq_ignore_ascii_case(dimension))
    }

    /// Mean r over every dimension of every direction, `None` if any is undefined.
    pub fn mean_r(&self) -> Option<f64> {
        mean_all(self.directions.iter().flat_map(|d| d.dimensions.iter().map(|s| s.r)))
    }

    pub fn has_degenerate(&self) -> bool {
        self.directions
            .iter()
            .flat_map(|d| &d.dimensions)
            .any(|s| s.r.is_none() || s.fold_r.iter().any(Option::is_none))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// SHA-256 over a canonical rendering (shortest round-trip decimals) of a gold set.
pub fn fingerprint(gold: &MergedLexicon) -> String {
    let mut h = Sha256::new();
    let (a, b) = (gold.first(), gold.second());
    for fmt in [a.format(), b.format()] {
        h.update(fmt.to_string().as_bytes());
        h.update(b"\n");
    }
    for (ea, eb) in a.entries().iter().zip(b.entries()) {
        h.update(ea.word.as_bytes());
        for v in ea.ratings.iter().chain(&eb.ratings) {
            h.update(format!("\t{v}").as_bytes());
        }
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn input(name: &str, role: &str, gold: &MergedLexicon) -> InputRecord {
    InputRecord { name: name.into(), role: role.into(), rows: gold.len(), sha256: fingerprint(gold) }
}

/// Seeded Fisher-Yates permutation of `0..n`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx
}

/// Splits a permutation into `folds` contiguous blocks whose sizes differ by at most one.
pub fn fold_blocks(perm: &[usize], folds: usize) -> Vec<Vec<usize>> {
    let (base, extra) = (perm.len() / folds, perm.len() % folds);
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let size = base + usize::from(f < extra);
        out.push(perm[start..start + size].to_vec());
        start += size;
    }
    out
}

/// Predictions for every row of `test`'s source slice.
fn predict_slice(model: &KnnModel, source: &Lexicon) -> Result<Vec<Vec<f64>>, KnnError> {
    let rows: Vec<&[f64]> = source.entries().iter().map(|e| e.ratings.as_slice()).collect();
    model.predict_many(&rows)
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

fn degenerate_note(err: &StatsError) -> String {
    match err {
        StatsError::ZeroVariance { which: "first" } => "constant predictions".into(),
        StatsError::ZeroVariance { .. } => "constant gold column".into(),
        other => other.to_string(),
    }
}

fn correlate(pred: &[f64], gold: &[f64]) -> Result<f64, String> {
    pearson(pred, gold).map(|c| c.r).map_err(|e| degenerate_note(&e))
}

fn target_format(gold: &MergedLexicon, dir: Direction) -> &FormatDescriptor {
    gold.slices(dir).1.format()
}

fn floor_for<'a>(cfg: &'a EvalConfig, dimension: &str) -> Option<&'a Floor> {
    cfg.floors.get(dimension)
}

/// Monolingual k-fold cross-validation.
pub fn eval_mono(gold: &MergedLexicon, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    eval_mono_named(gold, "gold", cfg)
}

pub fn eval_mono_named(gold: &MergedLexicon, name: &str, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    cfg.validate()?;
    if gold.len() < cfg.folds {
        return Err(EvalError::TooFewRows { name: name.into(), rows: gold.len(), needed: cfg.folds });
    }
    let blocks = fold_blocks(&permutation(gold.len(), cfg.seed), cfg.folds);
    let directions = cfg.direction.directions();

    // fold -> direction -> predictions for the fold's rows
    let per_fold: Vec<Vec<Vec<Vec<f64>>>> = blocks
        .par_iter()
        .enumerate()
        .map(|(f, test_idx)| {
            let train_idx: Vec<usize> =
                blocks.iter().enumerate().filter(|&(g, _)| g != f).flat_map(|(_, b)| b.iter().copied()).collect();
            let train = gold.select(&train_idx);
            let test = gold.select(test_idx);
            directions
                .iter()
                .map(|&dir| {
                    let model = KnnModel::fit(&train, dir, cfg.k)?;
                    Ok(predict_slice(&model, test.slices(dir).0)?)
                })
                .collect::<Result<Vec<_>, EvalError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut warnings = Vec::new();
    for (f, b) in blocks.iter().enumerate() {
        if b.len() < SMALL_FOLD_ROWS {
            warnings.push(format!("fold {} has {} rows (< {SMALL_FOLD_ROWS}): high variance", f + 1, b.len()));
        }
    }

    let mut reports = Vec::new();
    let mut verdicts = Vec::new();
    for (di, &dir) in directions.iter().enumerate() {
        let tgt_fmt = target_format(gold, dir);
        let gold_tgt = gold.slices(dir).1;
        let mut dims = Vec::new();
        for (j, name) in tgt_fmt.dimensions().iter().enumerate() {
            let mut fold_r = Vec::with_capacity(cfg.folds);
            let mut notes = Vec::new();
            let (mut pooled_pred, mut pooled_gold) = (Vec::new(), Vec::new());
            for (f, block) in blocks.iter().enumerate() {
                let pred = column(&per_fold[f][di], j);
                let truth: Vec<f64> = block.iter().map(|&i| gold_tgt.entries()[i].ratings[j]).collect();
                match correlate(&pred, &truth) {
                    Ok(r) => fold_r.push(Some(r)),
                    Err(note) => {
                        notes.push(format!("fold {}: {note}", f + 1));
                        fold_r.push(None);
                    }
                }
                pooled_pred.extend(pred);
                pooled_gold.extend(truth);
            }
            let valid: Vec<f64> = fold_r.iter().flatten().copied().collect();
            let r = (!valid.is_empty()).then(|| stats::mean(&valid));
            let pooled_r = match correlate(&pooled_pred, &pooled_gold) {
                Ok(r) => Some(r),
                Err(note) => {
                    notes.push(format!("pooled: {note}"));
                    None
                }
            };
            if let Some(floor) = floor_for(cfg, name) {
                match t_test_one_sample_one_tailed(&valid, floor.r) {
                    Ok(t) => verdicts.push(Verdict {
                        dimension: name.clone(),
                        test: "one-sample t-test over fold r (one-tailed)".into(),
                        floor: floor.r,
                        floor_source: floor.source.clone(),
                        statistic: t.statistic,
                        p: t.p,
                        significant: t.significant(ALPHA),
                    }),
                    Err(e) => warnings.push(format!("{name}: no t-test ({e})")),
                }
            }
            let note = (!notes.is_empty()).then(|| notes.join("; "));
            dims.push(DimensionScore { dimension: name.clone(), r, pooled_r, fold_r, note });
        }
        let src = gold.slices(dir).0.format().name().to_string();
        reports.push(DirectionReport::new(&src, tgt_fmt.name(), dims));
    }

    Ok(EvalReport {
        experiment: Experiment::Monolingual,
        label: name.into(),
        config: cfg.clone(),
        inputs: vec![input(name, "gold", gold)],
        directions: reports,
        verdicts,
        warnings,
    })
}

/// Fit on every training set's rows, test on all of `test`.
fn fixed_split(
    train: &[(&str, &MergedLexicon)],
    test_name: &str,
    test: &MergedLexicon,
    cfg: &EvalConfig,
    experiment: Experiment,
    label: String,
) -> Result<EvalReport, EvalError> {
    cfg.validate()?;
    for (name, t) in train {
        if !t.same_formats(test) {
            return Err(EvalError::FormatMismatch(name.to_string(), test_name.into()));
        }
        if t.is_empty() {
            return Err(EvalError::TooFewRows { name: name.to_string(), rows: 0, needed: 1 });
        }
    }
    if test.is_empty() {
        return Err(EvalError::TooFewRows { name: test_name.into(), rows: 0, needed: 1 });
    }
    let sets: Vec<&MergedLexicon> = train.iter().map(|(_, t)| *t).collect();
    let mut warnings = Vec::new();
    let mut verdicts = Vec::new();
    let mut reports = Vec::new();
    for dir in cfg.direction.directions() {
        let model = KnnModel::fit_many(&sets, dir, cfg.k)?;
        let (src, tgt) = test.slices(dir);
        let pred = predict_slice(&model, src)?;
        let mut dims = Vec::new();
        for (j, name) in tgt.format().dimensions().iter().enumerate() {
            let (r, note) = match correlate(&column(&pred, j), &tgt.column(j)) {
                Ok(r) => (Some(r), None),
                Err(note) => (None, Some(note)),
            };
            if let (Some(r), Some(floor)) = (r, floor_for(cfg, name)) {
                let outcome = match floor.n {
                    Some(n_floor) => z_test_correlations_one_tailed(r, test.len(), floor.r, n_floor),
                    None => z_test_against_fixed(r, test.len(), floor.r),
                };
                match outcome {
                    Ok(z) => verdicts.push(Verdict {
                        dimension: name.clone(),
                        test: match floor.n {
                            Some(_) => "Fisher z-test, two independent correlations (one-tailed)".into(),
                            None => "Fisher z-test against fixed r (one-tailed)".into(),
                        },
                        floor: floor.r,
                        floor_source: floor.source.clone(),
                        statistic: z.statistic,
                        p: z.p,
                        significant: z.significant(ALPHA),
                    }),
                    Err(e) => warnings.push(format!("{name}: no z-test ({e})")),
                }
            }
            dims.push(DimensionScore { dimension: name.clone(), r, pooled_r: None, fold_r: Vec::new(), note });
        }
        reports.push(DirectionReport::new(src.format().name(), tgt.format().name(), dims));
    }
    let mut inputs: Vec<InputRecord> = train.iter().map(|(n, t)| input(n, "train", t)).collect();
    inputs.push(input(test_name, "test", test));
    Ok(EvalReport { experiment, label, config: cfg.clone(), inputs, directions: reports, verdicts, warnings })
}

/// Pairwise crosslingual transfer: train on all of one set, test on all of another.
pub fn eval_cross_pair(train: &MergedLexicon, test: &MergedLexicon, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    eval_cross_pair_named(("train", train), ("test", test), cfg)
}

pub fn eval_cross_pair_named(
    train: (&str, &MergedLexicon),
    test: (&str, &MergedLexicon),
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    let label = format!("{}2{}", train.0, test.0);
    fixed_split(&[train], test.0, test.1, cfg, Experiment::CrosslingualPairwise, label)
}

/// One training bag evaluated against every target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BagResult {
    pub bag: Vec<String>,
    /// One report per target, in target order.
    pub reports: Vec<EvalReport>,
    /// Unweighted mean r over all dimensions of all targets.
    pub mean_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggedOutcome {
    pub bags: Vec<BagResult>,
    pub best_bag: Vec<String>,
}

impl BaggedOutcome {
    pub fn best(&self) -> &BagResult {
        self.bags.iter().find(|b| b.bag == self.best_bag).expect("best bag is one of the bags")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes") + "\n"
    }
}

fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Bagged crosslingual evaluation over every bag of the given sizes.
///
/// Each bag is scored against every target, excluding the target's own gold
/// set from training when it is a bag member. The best bag maximizes the mean
/// r over all dimensions and targets; ties go to the smaller bag, then to the
/// lexicographically smaller sorted name list.
pub fn eval_cross_bagged(
    gold_sets: &[(&str, &MergedLexicon)],
    targets: &[&str],
    bag_sizes: std::ops::RangeInclusive<usize>,
    cfg: &EvalConfig,
) -> Result<BaggedOutcome, EvalError> {
    cfg.validate()?;
    if gold_sets.len() < 2 {
        return Err(EvalError::Config("need at least two gold sets".into()));
    }
    for (name, g) in gold_sets {
        if !g.same_formats(gold_sets[0].1) {
            return Err(EvalError::FormatMismatch(gold_sets[0].0.into(), name.to_string()));
        }
    }
    let max = gold_sets.len();
    for size in [*bag_sizes.start(), *bag_sizes.end()] {
        if size < 2 || size > max {
            return Err(EvalError::BagSize { size, max });
        }
    }
    if bag_sizes.is_empty() {
        return Err(EvalError::Config("empty bag size range".into()));
    }
    let target_idx: Vec<usize> = targets
        .iter()
        .map(|t| gold_sets.iter().position(|(n, _)| n == t).ok_or_else(|| EvalError::UnknownSet(t.to_string())))
        .collect::<Result<_, _>>()?;

    let bags: Vec<Vec<usize>> = bag_sizes.flat_map(|s| combinations(max, s)).collect();
    let jobs: Vec<(usize, usize)> = (0..bags.len()).flat_map(|b| target_idx.iter().map(move |&t| (b, t))).collect();
    let results: Vec<EvalReport> = jobs
        .par_iter()
        .map(|&(b, t)| {
            let members: Vec<(&str, &MergedLexicon)> =
                bags[b].iter().filter(|&&i| i != t).map(|&i| gold_sets[i]).collect();
            if members.is_empty() {
                return Err(EvalError::EmptyBag {
                    bag: bags[b].iter().map(|&i| gold_sets[i].0.to_string()).collect(),
                    target: gold_sets[t].0.into(),
                });
            }
            let label = format!("{}2{}", members.iter().map(|(n, _)| *n).collect::<Vec<_>>().join("+"), gold_sets[t].0);
            fixed_split(&members, gold_sets[t].0, gold_sets[t].1, cfg, Experiment::CrosslingualBagged, label)
        })
        .collect::<Result<_, _>>()?;

    let mut results = results.into_iter();
    let mut out = Vec::with_capacity(bags.len());
    for bag in &bags {
        let reports: Vec<EvalReport> = results.by_ref().take(target_idx.len()).collect();
        let mean_r =
            mean_all(reports.iter().flat_map(|r| r.directions.iter().flat_map(|d| d.dimensions.iter().map(|s| s.r))));
        out.push(BagResult { bag: bag.iter().map(|&i| gold_sets[i].0.to_string()).collect(), reports, mean_r });
    }
    let best_bag = out
        .iter()
        .min_by(|a, b| {
            let score = |x: &BagResult| x.mean_r.unwrap_or(f64::NEG_INFINITY);
            let sorted = |x: &BagResult| {
                let mut v = x.bag.clone();
                v.sort();
                v
            };
            score(b).total_cmp(&score(a)).then(a.bag.len().cmp(&b.bag.len())).then_with(|| sorted(a).cmp(&sorted(b)))
        })
        .map(|b| b.bag.clone())
        .expect("at least one bag");
    Ok(BaggedOutcome { bags: out, best_bag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synthetic_gold, SyntheticSpec};

    fn small(seed: u64, words: usize) -> MergedLexicon {
        synthetic_gold(&SyntheticSpec { words, seed, ..Default::default() })
    }

    #[test]
    fn permutation_is_seeded() {
        let p = permutation(100, 42);
        let mut sorted = p.clone();
        sorted.sort();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
        assert_eq!(p, permutation(100, 42));
        assert_ne!(p, permutation(100, 43));
        assert!(permutation(0, 1).is_empty());
    }

    #[test]
    fn fold_blocks_partition() {
        let blocks = fold_blocks(&(0..23).collect::<Vec<_>>(), 5);
        assert_eq!(blocks.iter().map(Vec::len).collect::<Vec<_>>(), vec![5, 5, 5, 4, 4]);
        assert_eq!(blocks.concat(), (0..23).collect::<Vec<_>>());
    }

    #[test]
    fn combinations_enumerate_in_order() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn mono_rejects_bad_config() {
        let g = small(1, 30);
        let cfg = EvalConfig { folds: 1, ..Default::default() };
        assert!(matches!(eval_mono(&g, &cfg), Err(EvalError::Config(_))));
        let cfg = EvalConfig { folds: 31, ..Default::default() };
        assert!(matches!(eval_mono(&g, &cfg), Err(EvalError::TooFewRows { .. })));
    }

    #[test]
    fn mono_report_shape() {
        let g = small(3, 120);
        let cfg = EvalConfig::default();
        let rep = eval_mono(&g, &cfg).unwrap();
        assert_eq!(rep.directions.len(), 2);
        assert_eq!(rep.directions[0].target, "vad");
        assert_eq!(rep.directions[1].target, "be5");
        for d in &rep.directions {
            for s in &d.dimensions {
                assert_eq!(s.fold_r.len(), 10);
            }
            let avg = stats::mean(&d.dimensions.iter().map(|s| s.r.unwrap()).collect::<Vec<_>>());
            assert!((d.average.unwrap() - avg).abs() <= 1e-12);
        }
        // t-tests only against VAD floors
        assert_eq!(rep.verdicts.len(), 3);
        assert!(rep.warnings.iter().any(|w| w.contains("high variance")));
        assert_eq!(rep.inputs[0].rows, 120);
    }

    #[test]
    fn single_row_training_is_degenerate_but_completes() {
        let g = small(5, 40);
        let rep = eval_cross_pair(&g.select(&[0]), &g, &EvalConfig::default()).unwrap();
        assert!(rep.has_degenerate());
        assert!(rep
            .directions
            .iter()
            .flat_map(|d| &d.dimensions)
            .all(|s| s.r.is_none() && s.note.as_deref() == Some("constant predictions")));
        assert!(rep.verdicts.is_empty());
        assert_eq!(rep.directions[0].average, None);
    }

    #[test]
    fn cross_pair_rejects_mismatch() {
        let g = small(5, 10);
        let swapped = MergedLexicon::new(g.second().clone(), g.first().clone()).unwrap();
        assert!(matches!(eval_cross_pair(&g, &swapped, &EvalConfig::default()), Err(EvalError::FormatMismatch(..))));
        assert!(matches!(
            eval_cross_pair(&g.select(&[]), &g, &EvalConfig::default()),
            Err(EvalError::TooFewRows { .. })
        ));
    }

    #[test]
    fn bagged_validates_arguments() {
        let (a, b) = (small(1, 30), small(2, 30));
        let sets = [("a", &a), ("b", &b)];
        let cfg = EvalConfig::default();
        assert!(matches!(eval_cross_bagged(&sets[..1], &["a"], 2..=2, &cfg), Err(EvalError::Config(_))));
        assert!(matches!(eval_cross_bagged(&sets, &["a"], 1..=2, &cfg), Err(EvalError::BagSize { size: 1, .. })));
        assert!(matches!(eval_cross_bagged(&sets, &["a"], 2..=3, &cfg), Err(EvalError::BagSize { size: 3, .. })));
        assert!(matches!(eval_cross_bagged(&sets, &["zz"], 2..=2, &cfg), Err(EvalError::UnknownSet(_))));
    }
}
