//! Response data, inclusion screening, item analysis, reliability, and
//! correlation tables for a administered item bank.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::item_model::{score_choice, Facet, ItemBank, ItemError};
use crate::report::{Cell, Table};
use crate::stats::{mean, pearson, sample_sd, sample_variance, StatsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PsychError {
    #[error("participant {0} has responses but no metadata")]
    MetaMissing(String),
    #[error("join: {0}")]
    Join(String),
    #[error("duplicate response: participant {participant_id}, item {item_id}, {session}")]
    Duplicate {
        participant_id: String,
        item_id: String,
        session: Session,
    },
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("invalid value: {0}")]
    Value(String),
    #[error(transparent)]
    Item(#[from] ItemError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl From<csv::Error> for PsychError {
    fn from(e: csv::Error) -> Self {
        PsychError::Csv(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Session {
    Test,
    Retest,
}

impl std::fmt::Display for Session {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Session::Test => "test",
            Session::Retest => "retest",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub participant_id: String,
    pub item_id: String,
    pub choice: String,
    pub response_time_ms: u64,
    pub session: Session,
}

pub fn read_responses_csv<R: Read>(reader: R) -> Result<Vec<ResponseRecord>, PsychError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    rdr.deserialize()
        .map(|r| r.map_err(PsychError::from))
        .collect()
}

pub fn write_responses_csv<W: Write>(
    writer: W,
    records: &[ResponseRecord],
) -> Result<(), PsychError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| PsychError::Csv(e.to_string()))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantMeta {
    pub participant_id: String,
    pub age: u32,
    pub attention_passed: bool,
    /// Keyed `<facet>.<n>`, values 1–5.
    pub likert: BTreeMap<String, u8>,
    /// Keyed `<criterion>.<n>`, values 1–5.
    pub criterion: BTreeMap<String, u8>,
}

const LIKERT_PREFIX: &str = "likert.";
const CRITERION_PREFIX: &str = "criterion.";

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" | "pass" | "passed" => Some(true),
        "false" | "0" | "no" | "n" | "fail" | "failed" => Some(false),
        _ => None,
    }
}

fn parse_likert(id: &str, col: &str, v: &str) -> Result<u8, PsychError> {
    let x: u8 = v
        .parse()
        .map_err(|_| PsychError::Value(format!("{id} {col}: {v:?} is not an integer")))?;
    if !(1..=5).contains(&x) {
        return Err(PsychError::Value(format!("{id} {col}: {x} outside 1..5")));
    }
    Ok(x)
}

/// Reads the meta CSV: `participant_id,age,attention_passed` followed by any
/// number of `likert.<facet>.<n>` and `criterion.<name>.<n>` columns. Blank
/// cells are missing responses.
pub fn read_meta_csv<R: Read>(reader: R) -> Result<Vec<ParticipantMeta>, PsychError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| PsychError::Csv(format!("meta CSV lacks column {name}")))
    };
    let (c_id, c_age, c_att) = (
        col("participant_id")?,
        col("age")?,
        col("attention_passed")?,
    );
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for rec in rdr.records() {
        let rec = rec?;
        let id = rec.get(c_id).unwrap_or("").to_string();
        if !seen.insert(id.clone()) {
            return Err(PsychError::Value(format!(
                "participant {id} listed twice in meta"
            )));
        }
        let age_s = rec.get(c_age).unwrap_or("");
        let age = age_s
            .parse()
            .map_err(|_| PsychError::Value(format!("{id}: age {age_s:?}")))?;
        let att_s = rec.get(c_att).unwrap_or("");
        let attention_passed = parse_bool(att_s)
            .ok_or_else(|| PsychError::Value(format!("{id}: attention_passed {att_s:?}")))?;
        let mut meta = ParticipantMeta {
            participant_id: id.clone(),
            age,
            attention_passed,
            ..Default::default()
        };
        for (h, v) in headers.iter().zip(rec.iter()) {
            if v.is_empty() {
                continue;
            }
            if let Some(k) = h.strip_prefix(LIKERT_PREFIX) {
                meta.likert.insert(k.to_string(), parse_likert(&id, h, v)?);
            } else if let Some(k) = h.strip_prefix(CRITERION_PREFIX) {
                meta.criterion
                    .insert(k.to_string(), parse_likert(&id, h, v)?);
            }
        }
        out.push(meta);
    }
    Ok(out)
}

/// Writes the meta CSV with the union of Likert and criterion columns, sorted
/// by name within each block (numeric suffixes compare numerically).
pub fn write_meta_csv<W: Write>(writer: W, meta: &[ParticipantMeta]) -> Result<(), PsychError> {
    fn key_order(k: &str) -> (String, u64) {
        match k.rsplit_once('.') {
            Some((a, b)) => (a.to_string(), b.parse().unwrap_or(u64::MAX)),
            None => (k.to_string(), 0),
        }
    }
    let mut likert: Vec<String> = meta
        .iter()
        .flat_map(|m| m.likert.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    likert.sort_by_key(|k| key_order(k));
    let mut criterion: Vec<String> = meta
        .iter()
        .flat_map(|m| m.criterion.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    criterion.sort_by_key(|k| key_order(k));
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec![
        "participant_id".to_string(),
        "age".to_string(),
        "attention_passed".to_string(),
    ];
    header.extend(likert.iter().map(|k| format!("{LIKERT_PREFIX}{k}")));
    header.extend(criterion.iter().map(|k| format!("{CRITERION_PREFIX}{k}")));
    w.write_record(&header)?;
    for m in meta {
        let mut rec = vec![
            m.participant_id.clone(),
            m.age.to_string(),
            m.attention_passed.to_string(),
        ];
        let cell = |map: &BTreeMap<String, u8>, k: &str| {
            map.get(k).map(|v| v.to_string()).unwrap_or_default()
        };
        rec.extend(likert.iter().map(|k| cell(&m.likert, k)));
        rec.extend(criterion.iter().map(|k| cell(&m.criterion, k)));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| PsychError::Csv(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionCriteria {
    pub age_min: u32,
    pub age_max: u32,
    pub require_attention: bool,
    /// Mean response time must be strictly greater than this.
    pub min_mean_rt_ms: f64,
}

impl Default for InclusionCriteria {
    fn default() -> Self {
        InclusionCriteria {
            age_min: 18,
            age_max: 60,
            require_attention: true,
            min_mean_rt_ms: 2000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExclusionReason {
    Age,
    Attention,
    Rt,
}

impl ExclusionReason {
    pub fn code(self) -> &'static str {
        match self {
            ExclusionReason::Age => "AGE",
            ExclusionReason::Attention => "ATTENTION",
            ExclusionReason::Rt => "RT",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterOutcome {
    pub retained: Vec<String>,
    pub excluded: Vec<(String, Vec<ExclusionReason>)>,
}

impl FilterOutcome {
    pub fn reasons(&self, id: &str) -> Option<&[ExclusionReason]> {
        self.excluded
            .iter()
            .find(|(p, _)| p == id)
            .map(|(_, r)| r.as_slice())
    }
}

/// Screens participants in meta order. Response time is the mean over each
/// participant's test-session records; no test records at all counts as RT.
pub fn apply_inclusion_filters(
    records: &[ResponseRecord],
    meta: &[ParticipantMeta],
    criteria: &InclusionCriteria,
) -> Result<FilterOutcome, PsychError> {
    let known: HashSet<&str> = meta.iter().map(|m| m.participant_id.as_str()).collect();
    if let Some(r) = records
        .iter()
        .find(|r| !known.contains(r.participant_id.as_str()))
    {
        return Err(PsychError::MetaMissing(r.participant_id.clone()));
    }
    let mut rt: HashMap<&str, (f64, usize)> = HashMap::new();
    for r in records.iter().filter(|r| r.session == Session::Test) {
        let e = rt.entry(r.participant_id.as_str()).or_insert((0.0, 0));
        e.0 += r.response_time_ms as f64;
        e.1 += 1;
    }
    let mut out = FilterOutcome::default();
    for m in meta {
        let mut reasons = Vec::new();
        if m.age < criteria.age_min || m.age > criteria.age_max {
            reasons.push(ExclusionReason::Age);
        }
        if criteria.require_attention && !m.attention_passed {
            reasons.push(ExclusionReason::Attention);
        }
        let mean_rt = rt
            .get(m.participant_id.as_str())
            .map(|(s, n)| s / *n as f64);
        if !mean_rt.is_some_and(|v| v > criteria.min_mean_rt_ms) {
            reasons.push(ExclusionReason::Rt);
        }
        if reasons.is_empty() {
            out.retained.push(m.participant_id.clone());
        } else {
            out.excluded.push((m.participant_id.clone(), reasons));
        }
    }
    Ok(out)
}

/// Binary item scores for one facet, persons × items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    pub facet: Facet,
    pub persons: Vec<String>,
    pub items: Vec<String>,
    pub cells: Vec<Vec<u8>>,
}

impl ScoreMatrix {
    pub fn new(
        facet: Facet,
        persons: Vec<String>,
        items: Vec<String>,
        cells: Vec<Vec<u8>>,
    ) -> Result<Self, PsychError> {
        if cells.len() != persons.len() || cells.iter().any(|r| r.len() != items.len()) {
            return Err(PsychError::Value("score matrix dimensions disagree".into()));
        }
        if cells.iter().flatten().any(|c| *c > 1) {
            return Err(PsychError::Value(
                "score matrix cells must be 0 or 1".into(),
            ));
        }
        Ok(ScoreMatrix {
            facet,
            persons,
            items,
            cells,
        })
    }

    pub fn n_persons(&self) -> usize {
        self.persons.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.cells.iter().map(|r| f64::from(r[j])).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.n_items()).map(|j| self.column(j)).collect()
    }

    pub fn totals(&self) -> Vec<f64> {
        self.cells
            .iter()
            .map(|r| r.iter().map(|c| f64::from(*c)).sum())
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatrixBuild {
    pub matrices: BTreeMap<Facet, ScoreMatrix>,
    pub warnings: Vec<String>,
}

/// One matrix per bank facet for `session`. Persons appear in first-response
/// order; items follow the bank layout.
pub fn build_score_matrix(
    records: &[ResponseRecord],
    bank: &ItemBank,
    session: Session,
) -> Result<MatrixBuild, PsychError> {
    let mut persons: Vec<&str> = Vec::new();
    let mut seen_person = HashSet::new();
    let mut scores: HashMap<(&str, &str), u8> = HashMap::new();
    for r in records.iter().filter(|r| r.session == session) {
        let item = bank
            .item(&r.item_id)
            .ok_or_else(|| PsychError::Join(format!("unknown item {}", r.item_id)))?;
        let s = score_choice(item, &r.choice)?;
        if scores
            .insert((r.participant_id.as_str(), r.item_id.as_str()), s)
            .is_some()
        {
            return Err(PsychError::Duplicate {
                participant_id: r.participant_id.clone(),
                item_id: r.item_id.clone(),
                session,
            });
        }
        if seen_person.insert(r.participant_id.as_str()) {
            persons.push(r.participant_id.as_str());
        }
    }
    let mut out = MatrixBuild::default();
    if persons.is_empty() {
        out.warnings.push(format!("no {session} responses"));
    }
    for facet in bank.facets() {
        let items: Vec<String> = bank.facet_items(facet).map(|i| i.item_id.clone()).collect();
        let mut kept = Vec::new();
        let mut cells = Vec::new();
        let mut dropped = 0;
        for p in &persons {
            let row: Option<Vec<u8>> = items
                .iter()
                .map(|i| scores.get(&(*p, i.as_str())).copied())
                .collect();
            match row {
                Some(row) => {
                    kept.push(p.to_string());
                    cells.push(row);
                }
                None => dropped += 1,
            }
        }
        if dropped > 0 {
            out.warnings.push(format!(
                "{facet}: {dropped} participant(s) with incomplete {session} responses dropped"
            ));
        }
        out.matrices
            .insert(facet, ScoreMatrix::new(facet, kept, items, cells)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemTotal {
    pub item_id: String,
    /// Item against the total of the remaining items.
    pub corrected: Option<f64>,
    /// Item against the full total.
    pub uncorrected: Option<f64>,
    /// Set when either correlation has a zero-variance side.
    pub undefined: bool,
}

pub fn item_total_correlations(m: &ScoreMatrix) -> Vec<ItemTotal> {
    let totals = m.totals();
    (0..m.n_items())
        .map(|j| {
            let col = m.column(j);
            let rest: Vec<f64> = totals.iter().zip(&col).map(|(t, c)| t - c).collect();
            let r = |y: &[f64]| {
                if m.n_persons() < 3 {
                    None
                } else {
                    pearson(&col, y).ok().map(|c| c.r)
                }
            };
            let corrected = r(&rest);
            let uncorrected = r(&totals);
            ItemTotal {
                item_id: m.items[j].clone(),
                undefined: corrected.is_none() || uncorrected.is_none(),
                corrected,
                uncorrected,
            }
        })
        .collect()
}

/// Cronbach's alpha over item columns.
pub fn alpha_from_columns(columns: &[Vec<f64>]) -> Result<f64, PsychError> {
    let k = columns.len();
    if k < 2 {
        return Err(PsychError::Insufficient(
            "alpha needs at least two items".into(),
        ));
    }
    let n = columns[0].len();
    if n < 2 || columns.iter().any(|c| c.len() != n) {
        return Err(PsychError::Insufficient(
            "alpha needs at least two persons and equal-length columns".into(),
        ));
    }
    let totals: Vec<f64> = (0..n).map(|i| columns.iter().map(|c| c[i]).sum()).collect();
    let var_total = sample_variance(&totals).expect("n >= 2");
    if var_total <= 0.0 {
        return Err(PsychError::Degenerate(
            "total score has zero variance".into(),
        ));
    }
    let sum_item: f64 = columns
        .iter()
        .map(|c| sample_variance(c).expect("n >= 2"))
        .sum();
    let kf = k as f64;
    Ok(kf / (kf - 1.0) * (1.0 - sum_item / var_total))
}

pub fn cronbach_alpha(m: &ScoreMatrix) -> Result<f64, PsychError> {
    alpha_from_columns(&m.columns())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    /// First half: items at odd 1-based positions.
    OddEven,
    /// Zero-based item positions for each half.
    Explicit { a: Vec<usize>, b: Vec<usize> },
}

/// Guttman's split-half coefficient.
pub fn guttman_split_half(m: &ScoreMatrix, split: &Split) -> Result<f64, PsychError> {
    let k = m.n_items();
    if k < 2 {
        return Err(PsychError::Insufficient(
            "split-half needs at least two items".into(),
        ));
    }
    let (a, b): (Vec<usize>, Vec<usize>) = match split {
        Split::OddEven => (0..k).partition(|j| j % 2 == 0),
        Split::Explicit { a, b } => {
            if a.is_empty() || b.is_empty() || a.iter().chain(b).any(|&j| j >= k) {
                return Err(PsychError::Value("explicit split out of range".into()));
            }
            (a.clone(), b.clone())
        }
    };
    let half = |idx: &[usize]| -> Vec<f64> {
        m.cells
            .iter()
            .map(|r| idx.iter().map(|&j| f64::from(r[j])).sum())
            .collect()
    };
    guttman_from_halves(&half(&a), &half(&b))
}

pub fn guttman_from_halves(a: &[f64], b: &[f64]) -> Result<f64, PsychError> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(PsychError::Insufficient(
            "halves need two or more persons".into(),
        ));
    }
    let t: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let vt = sample_variance(&t).expect("n >= 2");
    if vt <= 0.0 {
        return Err(PsychError::Degenerate(
            "total score has zero variance".into(),
        ));
    }
    let va = sample_variance(a).expect("n >= 2");
    let vb = sample_variance(b).expect("n >= 2");
    Ok(2.0 * (1.0 - (va + vb) / vt))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IccModel {
    /// ICC(2,1): absolute agreement.
    TwoWayRandomAgreement,
    /// ICC(3,1): consistency.
    TwoWayMixedConsistency,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSquares {
    pub rows: f64,
    pub cols: f64,
    pub error: f64,
    pub n: usize,
    pub k: usize,
}

/// Two-way ANOVA without replication over an n × k table.
pub fn two_way_mean_squares(data: &[Vec<f64>]) -> Result<MeanSquares, PsychError> {
    let n = data.len();
    if n < 2 {
        return Err(PsychError::Insufficient("need at least two rows".into()));
    }
    let k = data[0].len();
    if k < 2 || data.iter().any(|r| r.len() != k) {
        return Err(PsychError::Insufficient(
            "need a rectangular table with k >= 2".into(),
        ));
    }
    let grand = data.iter().flatten().sum::<f64>() / (n * k) as f64;
    let row_means: Vec<f64> = data
        .iter()
        .map(|r| r.iter().sum::<f64>() / k as f64)
        .collect();
    let col_means: Vec<f64> = (0..k)
        .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let ss_rows = k as f64 * row_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ss_cols = n as f64 * col_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ss_total: f64 = data.iter().flatten().map(|v| (v - grand).powi(2)).sum();
    let ss_error = (ss_total - ss_rows - ss_cols).max(0.0);
    Ok(MeanSquares {
        rows: ss_rows / (n - 1) as f64,
        cols: ss_cols / (k - 1) as f64,
        error: ss_error / ((n - 1) * (k - 1)) as f64,
        n,
        k,
    })
}

/// Test-retest ICC on paired person totals.
pub fn icc(test: &[f64], retest: &[f64], model: IccModel) -> Result<f64, PsychError> {
    if test.len() != retest.len() {
        return Err(PsychError::Value(format!(
            "{} test totals vs {} retest totals",
            test.len(),
            retest.len()
        )));
    }
    if test.len() < 3 {
        return Err(PsychError::Insufficient(
            "ICC needs at least 3 persons".into(),
        ));
    }
    let data: Vec<Vec<f64>> = test.iter().zip(retest).map(|(a, b)| vec![*a, *b]).collect();
    let ms = two_way_mean_squares(&data)?;
    if ms.rows <= 0.0 {
        return Err(PsychError::Degenerate("no between-person variance".into()));
    }
    let k = ms.k as f64;
    let n = ms.n as f64;
    let v = match model {
        IccModel::TwoWayRandomAgreement => {
            (ms.rows - ms.error) / (ms.rows + (k - 1.0) * ms.error + k * (ms.cols - ms.error) / n)
        }
        IccModel::TwoWayMixedConsistency => (ms.rows - ms.error) / (ms.rows + (k - 1.0) * ms.error),
    };
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetReliability {
    pub facet: Facet,
    pub n_persons: usize,
    pub n_items: usize,
    pub alpha: Option<f64>,
    pub split_half: Option<f64>,
    pub n_retest: usize,
    pub icc_2_1: Option<f64>,
    pub icc_3_1: Option<f64>,
    pub item_total: Vec<ItemTotal>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityReport {
    pub facets: Vec<FacetReliability>,
    pub warnings: Vec<String>,
}

fn keep<T>(
    r: Result<T, PsychError>,
    what: &str,
    facet: Facet,
    warnings: &mut Vec<String>,
) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            warnings.push(format!("{facet}: {what} undefined ({e})"));
            None
        }
    }
}

/// Alpha, odd-even split-half, and (with retest matrices) ICCs on facet totals
/// of persons present in both sessions.
pub fn reliability_report(
    test: &BTreeMap<Facet, ScoreMatrix>,
    retest: Option<&BTreeMap<Facet, ScoreMatrix>>,
) -> ReliabilityReport {
    let mut out = ReliabilityReport::default();
    for (facet, m) in test {
        let w = &mut out.warnings;
        let alpha = keep(cronbach_alpha(m), "alpha", *facet, w);
        let split_half = keep(
            guttman_split_half(m, &Split::OddEven),
            "split-half",
            *facet,
            w,
        );
        let (mut n_retest, mut icc_2_1, mut icc_3_1) = (0, None, None);
        if let Some(rm) = retest.and_then(|r| r.get(facet)) {
            let later: HashMap<&str, f64> = rm
                .persons
                .iter()
                .map(String::as_str)
                .zip(rm.totals())
                .collect();
            let (a, b): (Vec<f64>, Vec<f64>) = m
                .persons
                .iter()
                .zip(m.totals())
                .filter_map(|(p, t)| later.get(p.as_str()).map(|r| (t, *r)))
                .unzip();
            n_retest = a.len();
            icc_2_1 = keep(
                icc(&a, &b, IccModel::TwoWayRandomAgreement),
                "ICC(2,1)",
                *facet,
                w,
            );
            icc_3_1 = keep(
                icc(&a, &b, IccModel::TwoWayMixedConsistency),
                "ICC(3,1)",
                *facet,
                w,
            );
        }
        out.facets.push(FacetReliability {
            facet: *facet,
            n_persons: m.n_persons(),
            n_items: m.n_items(),
            alpha,
            split_half,
            n_retest,
            icc_2_1,
            icc_3_1,
            item_total: item_total_correlations(m),
        });
    }
    out
}

fn facet_row_label(f: Facet) -> String {
    let name = f.name();
    let mut c = name.chars();
    let cap = c
        .next()
        .map(|h| h.to_uppercase().collect::<String>() + c.as_str());
    format!("{} ({})", cap.unwrap_or_default(), f.parent_factor().code())
}

fn opt_stat(v: Option<f64>) -> Cell {
    v.map(Cell::Stat).unwrap_or(Cell::Text("NA".into()))
}

impl ReliabilityReport {
    pub fn table(&self, title: &str) -> Table {
        let mut t = Table::new(
            title,
            vec![
                "Cronbach's α coefficient".into(),
                "Guttman's coefficient".into(),
                "ICC(2,1)".into(),
                "ICC(3,1)".into(),
            ],
        );
        for f in &self.facets {
            t.row(
                facet_row_label(f.facet),
                vec![
                    opt_stat(f.alpha),
                    opt_stat(f.split_half),
                    opt_stat(f.icc_2_1),
                    opt_stat(f.icc_3_1),
                ],
            );
        }
        t
    }

    /// Corrected item-total correlations first, uncorrected second.
    pub fn item_total_table(&self) -> Table {
        let mut t = Table::new(
            "Item-total correlations",
            vec!["facet".into(), "corrected r".into(), "uncorrected r".into()],
        );
        for f in &self.facets {
            for it in &f.item_total {
                t.row(
                    it.item_id.clone(),
                    vec![
                        Cell::Text(f.facet.id().into()),
                        opt_stat(it.corrected),
                        opt_stat(it.uncorrected),
                    ],
                );
            }
        }
        t
    }
}

pub const STAR_LEGEND: &str = "* p < .05, ** p < .01, *** p < .001.";

/// `*`, `**`, `***` at .05, .01, .001.
pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Correlations between row and column variables. For square MTMM tables only
/// the lower triangle is meaningful.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub r: Vec<Vec<f64>>,
    /// Absent for tables built from correlation values alone.
    #[serde(default)]
    pub p: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub lower_triangular: bool,
    /// Highlighted (row, col) cells, e.g. same-facet cross-method pairs.
    #[serde(default)]
    pub marked: Vec<(usize, usize)>,
}

impl CorrelationTable {
    /// Square lower-triangular table from given values; convergent cells are
    /// `(k + f, f)` for `k = size / 2`.
    pub fn mtmm_from_values(labels: Vec<String>, r: Vec<Vec<f64>>) -> Result<Self, PsychError> {
        let size = labels.len();
        if size % 2 != 0 || r.len() != size || r.iter().any(|row| row.len() != size) {
            return Err(PsychError::Value(
                "MTMM table must be square with an even size".into(),
            ));
        }
        let k = size / 2;
        Ok(CorrelationTable {
            rows: labels.clone(),
            cols: labels,
            r,
            p: None,
            n: 0,
            lower_triangular: true,
            marked: (0..k).map(|f| (k + f, f)).collect(),
        })
    }

    /// Builds the symmetric table from strict lower-triangle rows
    /// (`lower[i]` holds row `i + 1`, columns `0..=i`).
    pub fn mtmm_from_lower(labels: Vec<String>, lower: &[Vec<f64>]) -> Result<Self, PsychError> {
        let size = labels.len();
        if lower.len() + 1 != size || lower.iter().enumerate().any(|(i, row)| row.len() != i + 1) {
            return Err(PsychError::Value(
                "lower triangle does not match labels".into(),
            ));
        }
        let mut r = vec![vec![0.0; size]; size];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for (i, row) in lower.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                r[i + 1][j] = *v;
                r[j][i + 1] = *v;
            }
        }
        Self::mtmm_from_values(labels, r)
    }

    pub fn to_table(&self, title: &str) -> Table {
        let numbered = self.lower_triangular;
        let cols: Vec<String> = if numbered {
            (1..self.cols.len()).map(|i| i.to_string()).collect()
        } else {
            self.cols.clone()
        };
        let mut t = Table::new(title, cols);
        for (i, label) in self.rows.iter().enumerate() {
            let width = if numbered {
                self.cols.len() - 1
            } else {
                self.cols.len()
            };
            let cells = (0..width)
                .map(|j| {
                    if numbered && j >= i {
                        return Cell::Empty;
                    }
                    Cell::CorrMark {
                        r: self.r[i][j],
                        stars: self.p.as_ref().map(|p| stars(p[i][j])).unwrap_or("").into(),
                        marked: self.marked.contains(&(i, j)),
                    }
                })
                .collect();
            let label = if numbered {
                format!("{} {label}", i + 1)
            } else {
                label.clone()
            };
            t.row(label, cells);
        }
        if !self.marked.is_empty() {
            t.notes
                .push("Bracketed cells: same facet measured by different methods.".into());
        }
        if self.p.is_some() {
            t.notes.push(format!("n = {}.", self.n));
            t.notes.push(STAR_LEGEND.into());
        }
        t
    }
}

fn correlate(
    rows: &[(String, Vec<f64>)],
    cols: &[(String, Vec<f64>)],
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>, usize), PsychError> {
    let n = rows.first().map(|(_, v)| v.len()).unwrap_or(0);
    if rows.iter().chain(cols).any(|(_, v)| v.len() != n) {
        return Err(PsychError::Value("variables are not aligned".into()));
    }
    let mut r = vec![vec![0.0; cols.len()]; rows.len()];
    let mut p = vec![vec![1.0; cols.len()]; rows.len()];
    for (i, (_, x)) in rows.iter().enumerate() {
        for (j, (_, y)) in cols.iter().enumerate() {
            let c = pearson(x, y)?;
            r[i][j] = c.r;
            p[i][j] = c.p_value;
        }
    }
    Ok((r, p, n))
}

/// Ten-variable MTMM table: the five facets by the first method, then by the second.
pub fn mtmm_matrix(
    sjt: &BTreeMap<Facet, Vec<f64>>,
    likert: &BTreeMap<Facet, Vec<f64>>,
) -> Result<CorrelationTable, PsychError> {
    let mut vars = Vec::with_capacity(10);
    for (method, scores) in [("SJT", sjt), ("Likert", likert)] {
        for f in Facet::ALL {
            let v = scores
                .get(&f)
                .ok_or_else(|| PsychError::Insufficient(format!("{method} {f} scores missing")))?;
            vars.push((format!("{method} {}", f.name()), v.clone()));
        }
    }
    let (r, p, n) = correlate(&vars, &vars)?;
    let mut t = CorrelationTable::mtmm_from_values(vars.into_iter().map(|(l, _)| l).collect(), r)?;
    t.p = Some(p);
    t.n = n;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MtmmSummary {
    pub convergent: Vec<f64>,
    pub convergent_mean: f64,
    pub convergent_sd: f64,
    /// Mean |r| over within-method pairs of different facets, per method.
    pub discriminant_mean_abs: Vec<f64>,
}

pub fn mtmm_summary(table: &CorrelationTable) -> MtmmSummary {
    let k = table.rows.len() / 2;
    let at = |i: usize, j: usize| {
        let (a, b) = if i >= j { (i, j) } else { (j, i) };
        table.r[a][b]
    };
    let convergent: Vec<f64> = (0..k).map(|f| at(k + f, f)).collect();
    let discriminant_mean_abs = (0..2)
        .map(|m| {
            let base = m * k;
            let vals: Vec<f64> = (0..k)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| at(base + i, base + j).abs())
                .collect();
            mean(&vals).unwrap_or(f64::NAN)
        })
        .collect();
    MtmmSummary {
        convergent_mean: mean(&convergent).unwrap_or(f64::NAN),
        convergent_sd: sample_sd(&convergent).unwrap_or(f64::NAN),
        convergent,
        discriminant_mean_abs,
    }
}

impl MtmmSummary {
    pub fn table(&self, methods: [&str; 2]) -> Table {
        let mut t = Table::new("Convergent and discriminant summary", vec!["value".into()]);
        t.row("Convergent r, mean", vec![Cell::Stat(self.convergent_mean)]);
        t.row("Convergent r, SD", vec![Cell::Stat(self.convergent_sd)]);
        for (m, v) in methods.iter().zip(&self.discriminant_mean_abs) {
            t.row(
                format!("{m}: mean |r| between different facets"),
                vec![Cell::Stat(*v)],
            );
        }
        t
    }
}

/// Facets × criteria correlation table.
pub fn criterion_correlations(
    facet_scores: &[(String, Vec<f64>)],
    criteria: &[(String, Vec<f64>)],
) -> Result<CorrelationTable, PsychError> {
    if facet_scores.is_empty() || criteria.is_empty() {
        return Err(PsychError::Insufficient("no variables to correlate".into()));
    }
    let (r, p, n) = correlate(facet_scores, criteria)?;
    Ok(CorrelationTable {
        rows: facet_scores.iter().map(|(l, _)| l.clone()).collect(),
        cols: criteria.iter().map(|(l, _)| l.clone()).collect(),
        r,
        p: Some(p),
        n,
        lower_triangular: false,
        marked: Vec::new(),
    })
}

/// Persons present in every matrix, in the first matrix's order, with their
/// facet totals.
pub fn aligned_totals(
    matrices: &BTreeMap<Facet, ScoreMatrix>,
) -> (Vec<String>, BTreeMap<Facet, Vec<f64>>) {
    let Some(first) = matrices.values().next() else {
        return (Vec::new(), BTreeMap::new());
    };
    let lookups: BTreeMap<Facet, HashMap<&str, f64>> = matrices
        .iter()
        .map(|(f, m)| {
            (
                *f,
                m.persons
                    .iter()
                    .map(String::as_str)
                    .zip(m.totals())
                    .collect(),
            )
        })
        .collect();
    let persons: Vec<String> = first
        .persons
        .iter()
        .filter(|p| lookups.values().all(|l| l.contains_key(p.as_str())))
        .cloned()
        .collect();
    let totals = lookups
        .iter()
        .map(|(f, l)| (*f, persons.iter().map(|p| l[p.as_str()]).collect()))
        .collect();
    (persons, totals)
}

/// Sum and answered-item count of each facet's Likert items (keys `<facet>.<n>`).
pub fn likert_totals(meta: &ParticipantMeta) -> BTreeMap<Facet, (f64, usize)> {
    let mut out: BTreeMap<Facet, (f64, usize)> = BTreeMap::new();
    for (k, v) in &meta.likert {
        let Some((facet, _)) = k.rsplit_once('.') else {
            continue;
        };
        if let Ok(f) = Facet::from_str(facet) {
            let e = out.entry(f).or_insert((0.0, 0));
            e.0 += f64::from(*v);
            e.1 += 1;
        }
    }
    out
}

/// Sum and answered-item count per criterion (keys `<name>.<n>`).
pub fn criterion_totals(meta: &ParticipantMeta) -> BTreeMap<String, (f64, usize)> {
    let mut out: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for (k, v) in &meta.criterion {
        let name = k.rsplit_once('.').map(|(n, _)| n).unwrap_or(k);
        let e = out.entry(name.to_string()).or_insert((0.0, 0));
        e.0 += f64::from(*v);
        e.1 += 1;
    }
    out
}
