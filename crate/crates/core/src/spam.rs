//! SMS spam filtering on top of the HD encoder and associative memory.
//!
//! Input is the tab-separated SMS Spam Collection format, one message per
//! line: `ham` or `spam`, a TAB, then the message text.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assoc::AssociativeMemory;
use crate::encoder::{train_class, EncoderConfig, Scheme, SequenceEncoder};
use crate::error::{Error, Result};
use crate::hv::Hypervector;
use crate::rng::{derive_seed, HvRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Ham,
    Spam,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Ham, Label::Spam];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Ham => "ham",
            Label::Spam => "spam",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ham" => Ok(Label::Ham),
            "spam" => Ok(Label::Spam),
            other => Err(Error::Format(format!("unknown label {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    /// Position in the source file's accepted records; stable across splits.
    pub index: usize,
    pub label: Label,
    pub text: String,
}

/// A line that was not turned into a record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedLine {
    /// 1-based.
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<Record>,
    pub source: Option<PathBuf>,
    pub skipped: Vec<SkippedLine>,
}

impl Dataset {
    pub fn from_records<S: Into<String>>(records: impl IntoIterator<Item = (Label, S)>) -> Self {
        Self {
            records: records
                .into_iter()
                .enumerate()
                .map(|(index, (label, text))| Record {
                    index,
                    label,
                    text: text.into(),
                })
                .collect(),
            source: None,
            skipped: Vec::new(),
        }
    }

    /// Parse TSV content. Lines without a TAB, with an unknown label or with
    /// empty text are recorded in [`Dataset::skipped`]; blank lines are ignored.
    pub fn parse(content: &str) -> Self {
        let mut ds = Self::default();
        for (i, raw) in content.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() {
                continue;
            }
            let skip = |reason: String| SkippedLine { line: i + 1, reason };
            let Some((label, text)) = line.split_once('\t') else {
                ds.skipped.push(skip("no TAB separator".into()));
                continue;
            };
            let label = match label.parse::<Label>() {
                Ok(l) => l,
                Err(e) => {
                    ds.skipped.push(skip(e.to_string()));
                    continue;
                }
            };
            if text.trim().is_empty() {
                ds.skipped.push(skip("empty message".into()));
                continue;
            }
            ds.records.push(Record {
                index: ds.records.len(),
                label,
                text: text.to_string(),
            });
        }
        ds
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    pub fn mean_length(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        let total: usize = self.records.iter().map(|r| r.text.chars().count()).sum();
        total as f64 / self.records.len() as f64
    }
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let content = String::from_utf8(bytes)
        .map_err(|e| Error::Format(format!("{} is not UTF-8: {e}", path.display())))?;
    let mut ds = Dataset::parse(&content);
    ds.source = Some(path.to_path_buf());
    Ok(ds)
}

/// Stratified shuffled split. Each label contributes its share of
/// `round(ratio · n)` training records (largest remainder), so class
/// prevalence in both partitions stays within one record of the overall
/// rate. Both partitions keep the original record order.
pub fn split(ds: &Dataset, ratio: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidSplit(format!("ratio must be in (0, 1), got {ratio}")));
    }
    let n = ds.len();
    if n < 2 {
        return Err(Error::InvalidSplit(format!("cannot split {n} records into two partitions")));
    }
    let target = ((ratio * n as f64).round() as usize).clamp(1, n - 1);

    let groups: Vec<Vec<usize>> = Label::ALL
        .iter()
        .map(|&l| (0..n).filter(|&i| ds.records[i].label == l).collect())
        .collect();
    let quotas: Vec<f64> = groups
        .iter()
        .map(|g| target as f64 * g.len() as f64 / n as f64)
        .collect();
    let mut take: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut remaining = target - take.iter().sum::<usize>();
    for &g in order.iter().cycle().take(order.len() * 2) {
        if remaining == 0 {
            break;
        }
        if take[g] < groups[g].len() {
            take[g] += 1;
            remaining -= 1;
        }
    }

    let mut in_train = vec![false; n];
    for (g, (members, &k)) in groups.iter().zip(&take).enumerate() {
        let mut shuffled = members.clone();
        shuffled.shuffle(&mut HvRng::new(derive_seed(seed, g as u64)));
        for &i in &shuffled[..k] {
            in_train[i] = true;
        }
    }
    let part = |want: bool| Dataset {
        records: ds
            .records
            .iter()
            .zip(&in_train)
            .filter(|(_, &t)| t == want)
            .map(|(r, _)| r.clone())
            .collect(),
        source: ds.source.clone(),
        skipped: Vec::new(),
    };
    let (train, test) = (part(true), part(false));
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidSplit("a partition would be empty".into()));
    }
    Ok((train, test))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dataset: PathBuf,
    /// Fraction of records used for training.
    pub ratio: f64,
    pub ngram: usize,
    pub dim: usize,
    pub scheme: Scheme,
    pub case_fold: bool,
    pub split_seed: u64,
    pub item_seed: u64,
    pub tiebreak_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: PathBuf::from("data/SMSSpamCollection"),
            ratio: 0.8,
            ngram: 4,
            dim: 10_000,
            scheme: Scheme::NGram,
            case_fold: true,
            split_seed: 0,
            item_seed: 0,
            tiebreak_seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidSplit(format!("ratio must be in (0, 1), got {}", self.ratio)));
        }
        self.encoder().validate()
    }

    pub fn encoder(&self) -> EncoderConfig {
        EncoderConfig {
            dim: self.dim,
            ngram: self.ngram,
            scheme: self.scheme,
            seed: self.item_seed,
            case_fold: self.case_fold,
        }
    }

    /// Derive the split, item-memory and tiebreak seeds from one run seed.
    pub fn with_run_seed(&self, seed: u64) -> Self {
        Self {
            split_seed: derive_seed(seed, 1),
            item_seed: derive_seed(seed, 2),
            tiebreak_seed: derive_seed(seed, 3),
            ..self.clone()
        }
    }
}

/// Class memory plus the item-memory fingerprint it was trained with.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub memory: AssociativeMemory,
    pub item_fingerprint: u64,
    pub ham_count: usize,
    pub spam_count: usize,
}

fn encode_records(ds: &Dataset, enc: &SequenceEncoder, tiebreak_seed: u64) -> Result<Vec<Hypervector>> {
    ds.records
        .par_iter()
        .map(|r| {
            let mut rng = HvRng::new(derive_seed(tiebreak_seed, r.index as u64));
            enc.encode(&r.text, &mut rng).map(|(hv, _)| hv)
        })
        .collect()
}

/// Encoder built once and shared by training and evaluation.
#[derive(Clone, Debug)]
pub struct Pipeline {
    cfg: RunConfig,
    encoder: SequenceEncoder,
}

impl Pipeline {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg: cfg.clone(),
            encoder: SequenceEncoder::from_config(&cfg.encoder())?,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn encoder(&self) -> &SequenceEncoder {
        &self.encoder
    }

    /// Bundle each class's message vectors; ham is stored first.
    pub fn train(&self, ds: &Dataset) -> Result<TrainedModel> {
        let hvs = encode_records(ds, &self.encoder, self.cfg.tiebreak_seed)?;
        let mut memory = AssociativeMemory::new(self.cfg.dim)?;
        let mut counts = [0usize; 2];
        for (k, label) in Label::ALL.into_iter().enumerate() {
            let members: Vec<Hypervector> = ds
                .records
                .iter()
                .zip(&hvs)
                .filter(|(r, _)| r.label == label)
                .map(|(_, hv)| hv.clone())
                .collect();
            if members.is_empty() {
                return Err(Error::MissingClass(label.as_str()));
            }
            counts[k] = members.len();
            // class streams live far from per-record streams
            let mut rng = HvRng::new(derive_seed(self.cfg.tiebreak_seed, u64::MAX - k as u64));
            memory.insert(label.as_str(), train_class(&members, &mut rng)?)?;
        }
        Ok(TrainedModel {
            memory,
            item_fingerprint: self.encoder.item_memory().fingerprint(),
            ham_count: counts[0],
            spam_count: counts[1],
        })
    }

    pub fn evaluate(&self, ds: &Dataset, model: &TrainedModel) -> Result<EvalReport> {
        let fingerprint = self.encoder.item_memory().fingerprint();
        if fingerprint != model.item_fingerprint {
            return Err(Error::Config(
                "item memory differs between training and evaluation".into(),
            ));
        }
        if model.memory.dim() != self.cfg.dim {
            return Err(Error::DimensionMismatch {
                left: model.memory.dim(),
                right: self.cfg.dim,
            });
        }
        let hvs = encode_records(ds, &self.encoder, self.cfg.tiebreak_seed)?;
        let predictions = hvs
            .par_iter()
            .map(|hv| {
                let q = model.memory.query(hv)?;
                q.label.parse::<Label>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut confusion = Confusion::default();
        for (r, &p) in ds.records.iter().zip(&predictions) {
            confusion.record(r.label, p);
        }
        Ok(EvalReport {
            accuracy: confusion.accuracy(),
            confusion,
            n_test: ds.len(),
            ngram: self.cfg.ngram,
            dim: self.cfg.dim,
            scheme: self.cfg.scheme,
            split_seed: self.cfg.split_seed,
            item_seed: self.cfg.item_seed,
            tiebreak_seed: self.cfg.tiebreak_seed,
            item_fingerprint: fingerprint,
        })
    }
}

/// Spam is the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub true_spam: usize,
    pub true_ham: usize,
    pub false_spam: usize,
    pub false_ham: usize,
}

impl Confusion {
    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Spam, Label::Spam) => self.true_spam += 1,
            (Label::Ham, Label::Ham) => self.true_ham += 1,
            (Label::Ham, Label::Spam) => self.false_spam += 1,
            (Label::Spam, Label::Ham) => self.false_ham += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.true_spam + self.true_ham + self.false_spam + self.false_ham
    }

    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => (self.true_spam + self.true_ham) as f64 / t as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub confusion: Confusion,
    pub n_test: usize,
    pub ngram: usize,
    pub dim: usize,
    pub scheme: Scheme,
    pub split_seed: u64,
    pub item_seed: u64,
    pub tiebreak_seed: u64,
    pub item_fingerprint: u64,
}

pub fn train(ds: &Dataset, cfg: &RunConfig) -> Result<TrainedModel> {
    Pipeline::new(cfg)?.train(ds)
}

pub fn evaluate(ds: &Dataset, model: &TrainedModel, cfg: &RunConfig) -> Result<EvalReport> {
    Pipeline::new(cfg)?.evaluate(ds, model)
}

/// Split under `cfg.split_seed`, train, and evaluate on the held-out part.
pub fn run(ds: &Dataset, cfg: &RunConfig) -> Result<EvalReport> {
    let (train_ds, test_ds) = split(ds, cfg.ratio, cfg.split_seed)?;
    let p = Pipeline::new(cfg)?;
    let model = p.train(&train_ds)?;
    p.evaluate(&test_ds, &model)
}

/// One sweep point averaged over run seeds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single seed.
    pub std: f64,
    pub per_seed: Vec<f64>,
}

fn sweep(
    ds: &Dataset,
    cfg: &RunConfig,
    xs: &[usize],
    run_seeds: &[u64],
    set: impl Fn(&mut RunConfig, usize),
) -> Result<Vec<SweepRow>> {
    if run_seeds.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one seed".into()));
    }
    xs.iter()
        .map(|&x| {
            let per_seed = run_seeds
                .iter()
                .map(|&s| {
                    let mut c = cfg.with_run_seed(s);
                    set(&mut c, x);
                    run(ds, &c).map(|r| r.accuracy)
                })
                .collect::<Result<Vec<_>>>()?;
            let k = per_seed.len() as f64;
            let mean = per_seed.iter().sum::<f64>() / k;
            let std = if per_seed.len() > 1 {
                (per_seed.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            Ok(SweepRow { x, mean, std, per_seed })
        })
        .collect()
}

/// Accuracy per N-gram width at `cfg.dim`.
pub fn sweep_n(ds: &Dataset, cfg: &RunConfig, n_values: &[usize], run_seeds: &[u64]) -> Result<Vec<SweepRow>> {
    if n_values.contains(&0) {
        return Err(Error::InvalidConfig("ngram values must be >= 1".into()));
    }
    sweep(ds, cfg, n_values, run_seeds, |c, n| c.ngram = n)
}

/// Accuracy per dimensionality at `cfg.ngram`.
pub fn sweep_d(ds: &Dataset, cfg: &RunConfig, d_values: &[usize], run_seeds: &[u64]) -> Result<Vec<SweepRow>> {
    if d_values.contains(&0) {
        return Err(Error::InvalidConfig("dimensions must be >= 1".into()));
    }
    sweep(ds, cfg, d_values, run_seeds, |c, d| c.dim = d)
}
