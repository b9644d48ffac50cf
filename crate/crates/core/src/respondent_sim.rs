//! Synthetic respondents and expert raters drawn from a known latent model.
//!
//! Item scores follow a two-parameter logistic model on multivariate normal
//! facet traits. Every participant draws from its own ChaCha stream, so output
//! does not depend on thread count.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::content_validity::{ExpertRating, GroupMap};
use crate::item_model::{Facet, ItemBank};
use crate::psychometrics::{ParticipantMeta, ResponseRecord, Session};

/// Persons used by [`expected_alpha`].
pub const ORACLE_PERSONS: usize = 100_000;
const ORACLE_BATCHES: usize = 20;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("facet covariance: {0}")]
    Covariance(String),
    #[error("thresholds must be strictly increasing: {0}")]
    Thresholds(String),
    #[error("invalid setting: {0}")]
    Param(String),
    #[error("bank lacks items for {0}")]
    MissingFacet(Facet),
    #[error("config format: {0}")]
    Format(String),
}

/// 2PL parameters cycled over a facet's item positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemParams {
    /// Discrimination; values above 1e6 behave as a step at `b`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ItemParams {
    pub fn at(&self, position: usize) -> (f64, f64) {
        (
            self.a[position % self.a.len()],
            self.b[position % self.b.len()],
        )
    }

    fn check(&self) -> Result<(), ConfigError> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(ConfigError::Param("item params need a and b values".into()));
        }
        if self.a.iter().any(|a| !(*a >= 0.0)) || self.b.iter().any(|b| !b.is_finite()) {
            return Err(ConfigError::Param("a must be >= 0 and b finite".into()));
        }
        Ok(())
    }
}

/// Probability of an item score of 1.
pub fn p_correct(theta: f64, a: f64, b: f64) -> f64 {
    if a > 1e6 {
        return if theta > b {
            1.0
        } else if theta < b {
            0.0
        } else {
            0.5
        };
    }
    1.0 / (1.0 + (-a * (theta - b)).exp())
}

fn thresholds_ok(t: &[f64; 4]) -> bool {
    t.windows(2).all(|w| w[0] < w[1]) && t.iter().all(|v| v.is_finite())
}

/// Category 1–5 of `x` against four cut points.
pub fn categorize(x: f64, thresholds: &[f64; 4]) -> u8 {
    1 + thresholds.iter().filter(|t| x > **t).count() as u8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikertConfig {
    pub items_per_facet: usize,
    pub loading: f64,
    pub noise_sd: f64,
    pub thresholds: [f64; 4],
}

impl Default for LikertConfig {
    fn default() -> Self {
        LikertConfig {
            items_per_facet: 8,
            loading: 0.7,
            noise_sd: 0.71,
            thresholds: [-1.5, -0.5, 0.5, 1.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionConfig {
    pub name: String,
    /// Weights on the five facet traits in canonical order.
    pub weights: [f64; 5],
    pub noise_sd: f64,
    #[serde(default = "default_criterion_items")]
    pub n_items: usize,
    #[serde(default = "default_criterion_thresholds")]
    pub thresholds: [f64; 4],
}

fn default_criterion_items() -> usize {
    4
}

fn default_criterion_thresholds() -> [f64; 4] {
    [-1.5, -0.5, 0.5, 1.5]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetestConfig {
    pub n_participants: usize,
    /// Latent test-retest correlation per facet, canonical order.
    pub stability: [f64; 5],
}

impl Default for RetestConfig {
    fn default() -> Self {
        RetestConfig {
            n_participants: 80,
            stability: [0.8; 5],
        }
    }
}

/// Per-participant injection rates for screening failures.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FailureRates {
    #[serde(default)]
    pub attention: f64,
    #[serde(default)]
    pub underage: f64,
    #[serde(default)]
    pub overage: f64,
    #[serde(default)]
    pub fast_rt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtConfig {
    pub mean_ms: f64,
    pub sd_ms: f64,
    /// Compliant response times never fall below this.
    pub floor_ms: f64,
}

impl Default for RtConfig {
    fn default() -> Self {
        RtConfig {
            mean_ms: 6000.0,
            sd_ms: 2500.0,
            floor_ms: 2100.0,
        }
    }
}

fn default_n() -> usize {
    443
}

fn default_respond_fraction() -> f64 {
    130.0 / 443.0
}

fn identity5() -> [[f64; 5]; 5] {
    let mut m = [[0.0; 5]; 5];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default = "default_n")]
    pub n_participants: usize,
    /// Latent facet correlations, canonical facet order.
    #[serde(default = "identity5")]
    pub facet_covariance: [[f64; 5]; 5],
    pub items: ItemParams,
    #[serde(default)]
    pub item_overrides: BTreeMap<Facet, ItemParams>,
    #[serde(default)]
    pub likert: LikertConfig,
    #[serde(default)]
    pub criteria: Vec<CriterionConfig>,
    /// Share of participants who complete the criterion measures.
    #[serde(default = "default_respond_fraction")]
    pub criterion_respond_fraction: f64,
    #[serde(default)]
    pub retest: RetestConfig,
    #[serde(default)]
    pub rt: RtConfig,
    #[serde(default)]
    pub failures: FailureRates,
    #[serde(default)]
    pub seed: u64,
}

impl SimConfig {
    /// Compliant defaults with the given item parameters.
    pub fn with_items(items: ItemParams) -> Self {
        serde_json::from_value(serde_json::json!({ "items": items })).expect("defaults deserialize")
    }

    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let c: SimConfig =
            serde_json::from_str(s).map_err(|e| ConfigError::Format(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    pub fn params_for(&self, facet: Facet) -> &ItemParams {
        self.item_overrides.get(&facet).unwrap_or(&self.items)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        cholesky(&self.facet_covariance)?;
        self.items.check()?;
        for p in self.item_overrides.values() {
            p.check()?;
        }
        if !thresholds_ok(&self.likert.thresholds) {
            return Err(ConfigError::Thresholds(format!(
                "{:?}",
                self.likert.thresholds
            )));
        }
        for c in &self.criteria {
            if !thresholds_ok(&c.thresholds) {
                return Err(ConfigError::Thresholds(format!(
                    "{}: {:?}",
                    c.name, c.thresholds
                )));
            }
            if c.noise_sd < 0.0 || c.n_items == 0 || c.name.is_empty() || c.name.contains('.') {
                return Err(ConfigError::Param(format!("criterion {:?}", c.name)));
            }
        }
        if self
            .retest
            .stability
            .iter()
            .any(|s| !(0.0..=1.0).contains(s))
        {
            return Err(ConfigError::Param("retest stability outside [0, 1]".into()));
        }
        let f = &self.failures;
        let rates = [
            self.criterion_respond_fraction,
            f.attention,
            f.underage,
            f.overage,
            f.fast_rt,
        ];
        if rates.iter().any(|r| !(0.0..=1.0).contains(r)) || f.underage + f.overage > 1.0 {
            return Err(ConfigError::Param("rates must lie in [0, 1]".into()));
        }
        if self.likert.noise_sd < 0.0 || self.rt.sd_ms < 0.0 {
            return Err(ConfigError::Param(
                "standard deviations must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Lower Cholesky factor of a symmetric PSD matrix with unit diagonal.
/// Zero pivots are allowed when the remaining column vanishes.
pub fn cholesky(m: &[[f64; 5]; 5]) -> Result<[[f64; 5]; 5], ConfigError> {
    for i in 0..5 {
        if (m[i][i] - 1.0).abs() > 1e-9 {
            return Err(ConfigError::Covariance(format!(
                "diagonal entry {i} is not 1"
            )));
        }
        for j in 0..i {
            if (m[i][j] - m[j][i]).abs() > 1e-9 || !m[i][j].is_finite() {
                return Err(ConfigError::Covariance("matrix is not symmetric".into()));
            }
        }
    }
    let mut l = [[0.0; 5]; 5];
    for j in 0..5 {
        let d = m[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if d < -PSD_TOL {
            return Err(ConfigError::Covariance(
                "matrix is not positive semidefinite".into(),
            ));
        }
        let d = d.max(0.0).sqrt();
        l[j][j] = d;
        for i in j + 1..5 {
            let s = m[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if d <= PSD_TOL.sqrt() {
                if s.abs() > 1e-6 {
                    return Err(ConfigError::Covariance(
                        "matrix is not positive semidefinite".into(),
                    ));
                }
                l[i][j] = 0.0;
            } else {
                l[i][j] = s / d;
            }
        }
    }
    Ok(l)
}

fn draw_theta<R: Rng>(l: &[[f64; 5]; 5], rng: &mut R) -> [f64; 5] {
    let z: [f64; 5] = std::array::from_fn(|_| rng.sample(StandardNormal));
    std::array::from_fn(|i| (0..=i).map(|k| l[i][k] * z[k]).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutput {
    pub records: Vec<ResponseRecord>,
    pub meta: Vec<ParticipantMeta>,
    /// Test-session traits, canonical facet order.
    pub latent: Vec<[f64; 5]>,
    /// Retest traits for participants in the retest subsample.
    pub retest_latent: Vec<Option<[f64; 5]>>,
}

pub fn participant_id(index: usize) -> String {
    format!("P{:04}", index + 1)
}

struct Participant {
    records: Vec<ResponseRecord>,
    retest: Vec<ResponseRecord>,
    meta: ParticipantMeta,
    theta: [f64; 5],
    theta_retest: Option<[f64; 5]>,
}

struct Layout<'a> {
    /// (facet index, a, b, item) per bank position.
    items: Vec<(usize, f64, f64, &'a crate::item_model::SjtItem)>,
}

fn layout<'a>(config: &SimConfig, bank: &'a ItemBank) -> Result<Layout<'a>, ConfigError> {
    let mut items = Vec::new();
    for f in Facet::ALL {
        let params = config.params_for(f);
        let mut any = false;
        for (pos, item) in bank.facet_items(f).enumerate() {
            let (a, b) = params.at(pos);
            items.push((f.index(), a, b, item));
            any = true;
        }
        if !any {
            return Err(ConfigError::MissingFacet(f));
        }
    }
    Ok(Layout { items })
}

#[allow(clippy::too_many_arguments)]
fn answer<R: Rng>(
    rng: &mut R,
    id: &str,
    theta: &[f64; 5],
    layout: &Layout<'_>,
    session: Session,
    rt: &RtConfig,
    fast: bool,
    out: &mut Vec<ResponseRecord>,
) {
    for (f, a, b, item) in &layout.items {
        let score = u8::from(rng.random::<f64>() < p_correct(theta[*f], *a, *b));
        let labels = item.labels_keyed(score);
        let label = labels[rng.random_range(0..labels.len())];
        let ms = if fast {
            rng.random_range(400.0..1800.0)
        } else {
            let x: f64 = rng.sample(StandardNormal);
            (rt.mean_ms + rt.sd_ms * x).max(rt.floor_ms)
        };
        out.push(ResponseRecord {
            participant_id: id.to_string(),
            item_id: item.item_id.clone(),
            choice: label.to_string(),
            response_time_ms: ms.round() as u64,
            session,
        });
    }
}

fn simulate_one(
    config: &SimConfig,
    chol: &[[f64; 5]; 5],
    layout: &Layout<'_>,
    index: usize,
) -> Participant {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let id = participant_id(index);
    let theta = draw_theta(chol, &mut rng);

    let f = &config.failures;
    let u: f64 = rng.random();
    let age = if u < f.underage {
        rng.random_range(15..=17)
    } else if u < f.underage + f.overage {
        rng.random_range(61..=70)
    } else {
        rng.random_range(18..=60)
    };
    let attention_passed = rng.random::<f64>() >= f.attention;
    let fast = rng.random::<f64>() < f.fast_rt;

    let mut records = Vec::with_capacity(layout.items.len());
    answer(
        &mut rng,
        &id,
        &theta,
        layout,
        Session::Test,
        &config.rt,
        fast,
        &mut records,
    );

    let mut meta = ParticipantMeta {
        participant_id: id.clone(),
        age,
        attention_passed,
        ..Default::default()
    };
    let lk = &config.likert;
    for facet in Facet::ALL {
        for n in 1..=lk.items_per_facet {
            let e: f64 = rng.sample(StandardNormal);
            let x = lk.loading * theta[facet.index()] + lk.noise_sd * e;
            meta.likert
                .insert(format!("{}.{n}", facet.id()), categorize(x, &lk.thresholds));
        }
    }
    let responds = rng.random::<f64>() < config.criterion_respond_fraction;
    for c in &config.criteria {
        let e: f64 = rng.sample(StandardNormal);
        let latent: f64 = c
            .weights
            .iter()
            .zip(&theta)
            .map(|(w, t)| w * t)
            .sum::<f64>()
            + c.noise_sd * e;
        for n in 1..=c.n_items {
            let e: f64 = rng.sample(StandardNormal);
            let v = categorize(latent + 0.5 * e, &c.thresholds);
            if responds {
                meta.criterion.insert(format!("{}.{n}", c.name), v);
            }
        }
    }

    let mut retest = Vec::new();
    let theta_retest = (index < config.retest.n_participants).then(|| {
        let t: [f64; 5] = std::array::from_fn(|i| {
            let s = config.retest.stability[i];
            let e: f64 = rng.sample(StandardNormal);
            s * theta[i] + (1.0 - s * s).sqrt() * e
        });
        answer(
            &mut rng,
            &id,
            &t,
            layout,
            Session::Retest,
            &config.rt,
            fast,
            &mut retest,
        );
        t
    });

    Participant {
        records,
        retest,
        meta,
        theta,
        theta_retest,
    }
}

/// Simulates test and retest responses plus participant metadata.
pub fn simulate(config: &SimConfig, bank: &ItemBank) -> Result<SimOutput, ConfigError> {
    config.validate()?;
    let chol = cholesky(&config.facet_covariance)?;
    let layout = layout(config, bank)?;
    let people: Vec<Participant> = (0..config.n_participants)
        .into_par_iter()
        .map(|i| simulate_one(config, &chol, &layout, i))
        .collect();
    let mut out = SimOutput {
        records: Vec::new(),
        meta: Vec::with_capacity(people.len()),
        latent: Vec::with_capacity(people.len()),
        retest_latent: Vec::with_capacity(people.len()),
    };
    let mut retest = Vec::new();
    for p in people {
        out.records.extend(p.records);
        retest.extend(p.retest);
        out.meta.push(p.meta);
        out.latent.push(p.theta);
        out.retest_latent.push(p.theta_retest);
    }
    out.records.extend(retest);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub alpha: f64,
    /// Standard error from batch means.
    pub se: f64,
    pub n_persons: usize,
}

/// Monte-Carlo alpha for a facet with `k` items under the config.
pub fn expected_alpha_with(
    config: &SimConfig,
    facet: Facet,
    k: usize,
    n_persons: usize,
) -> Result<AlphaEstimate, ConfigError> {
    config.validate()?;
    if k < 2 || n_persons < 2 * ORACLE_BATCHES {
        return Err(ConfigError::Param("need k >= 2 and enough persons".into()));
    }
    let params = config.params_for(facet);
    let items: Vec<(f64, f64)> = (0..k).map(|j| params.at(j)).collect();
    let per_batch = n_persons / ORACLE_BATCHES;
    let batch_stats: Vec<(usize, Vec<f64>, Vec<f64>, f64, f64)> = (0..ORACLE_BATCHES)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xA1FA);
            rng.set_stream(batch as u64);
            let mut s1 = vec![0.0; k];
            let mut s2 = vec![0.0; k];
            let (mut t1, mut t2) = (0.0, 0.0);
            for _ in 0..per_batch {
                let theta: f64 = rng.sample(StandardNormal);
                let mut total = 0.0;
                for (j, (a, b)) in items.iter().enumerate() {
                    let x = f64::from(u8::from(rng.random::<f64>() < p_correct(theta, *a, *b)));
                    s1[j] += x;
                    s2[j] += x * x;
                    total += x;
                }
                t1 += total;
                t2 += total * total;
            }
            (per_batch, s1, s2, t1, t2)
        })
        .collect();
    let alpha_of = |n: usize, s1: &[f64], s2: &[f64], t1: f64, t2: f64| {
        let nf = n as f64;
        let var = |a: f64, b: f64| (b - a * a / nf) / (nf - 1.0);
        let item_var: f64 = s1.iter().zip(s2).map(|(a, b)| var(*a, *b)).sum();
        let tv = var(t1, t2);
        if tv <= 0.0 {
            0.0
        } else {
            k as f64 / (k as f64 - 1.0) * (1.0 - item_var / tv)
        }
    };
    let batch_alphas: Vec<f64> = batch_stats
        .iter()
        .map(|(n, s1, s2, t1, t2)| alpha_of(*n, s1, s2, *t1, *t2))
        .collect();
    let (mut s1, mut s2, mut t1, mut t2, mut n) = (vec![0.0; k], vec![0.0; k], 0.0, 0.0, 0);
    for (bn, b1, b2, bt1, bt2) in &batch_stats {
        n += bn;
        for j in 0..k {
            s1[j] += b1[j];
            s2[j] += b2[j];
        }
        t1 += bt1;
        t2 += bt2;
    }
    let sd = crate::stats::sample_sd(&batch_alphas).unwrap_or(0.0);
    Ok(AlphaEstimate {
        alpha: alpha_of(n, &s1, &s2, t1, t2),
        se: sd / (ORACLE_BATCHES as f64).sqrt(),
        n_persons: n,
    })
}

/// [`expected_alpha_with`] at eight items and [`ORACLE_PERSONS`] persons.
pub fn expected_alpha(config: &SimConfig, facet: Facet) -> Result<AlphaEstimate, ConfigError> {
    expected_alpha_with(config, facet, 8, ORACLE_PERSONS)
}

/// Categorical rating distributions for one item group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingProfile {
    /// Weights for necessity codes 1, 2, 3.
    pub necessity: [f64; 3],
    /// Weights for 0..=4 reasonable options.
    pub options_rationality: [f64; 5],
    /// Weights for 0..=4 correctly scored options.
    pub scoring_rationality: [f64; 5],
    /// Weights for overall 0, 1.
    pub overall: [f64; 2],
}

impl RatingProfile {
    pub fn named(name: &str) -> Option<RatingProfile> {
        let p = |n: [f64; 3], o: [f64; 5], s: [f64; 5], v: [f64; 2]| RatingProfile {
            necessity: n,
            options_rationality: o,
            scoring_rationality: s,
            overall: v,
        };
        Some(match name {
            "ceiling" => p(
                [1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 0.0, 0.0, 1.0],
                [0.0, 1.0],
            ),
            "high" => p(
                [0.85, 0.12, 0.03],
                [0.0, 0.02, 0.05, 0.23, 0.7],
                [0.0, 0.02, 0.08, 0.2, 0.7],
                [0.2, 0.8],
            ),
            "mid" => p(
                [0.6, 0.3, 0.1],
                [0.02, 0.05, 0.18, 0.35, 0.4],
                [0.02, 0.05, 0.2, 0.33, 0.4],
                [0.45, 0.55],
            ),
            "low" => p(
                [0.35, 0.4, 0.25],
                [0.05, 0.15, 0.3, 0.3, 0.2],
                [0.05, 0.15, 0.3, 0.3, 0.2],
                [0.7, 0.3],
            ),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Named(String),
    Explicit(RatingProfile),
}

impl ProfileSpec {
    pub fn resolve(&self) -> Result<RatingProfile, ConfigError> {
        match self {
            ProfileSpec::Named(n) => RatingProfile::named(n)
                .ok_or_else(|| ConfigError::Param(format!("unknown rating profile {n:?}"))),
            ProfileSpec::Explicit(p) => Ok(p.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingGroup {
    pub label: String,
    pub profile: ProfileSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertSimConfig {
    pub groups: Vec<RatingGroup>,
    #[serde(default = "default_raters")]
    pub n_raters: usize,
    #[serde(default = "default_items")]
    pub n_items: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_raters() -> usize {
    8
}

fn default_items() -> usize {
    7
}

fn weighted<R: Rng>(w: &[f64], rng: &mut R) -> Result<usize, ConfigError> {
    let d =
        WeightedIndex::new(w).map_err(|e| ConfigError::Param(format!("profile weights: {e}")))?;
    Ok(d.sample(rng))
}

/// Ratings from raters `R1..` on items `<group>-<n>`, plus the group map.
pub fn simulate_expert_ratings(
    config: &ExpertSimConfig,
) -> Result<(Vec<ExpertRating>, GroupMap), ConfigError> {
    if config.groups.is_empty() || config.n_raters == 0 || config.n_items == 0 {
        return Err(ConfigError::Param("need groups, raters and items".into()));
    }
    let mut ratings = Vec::new();
    let mut groups = GroupMap::default();
    for (g, group) in config.groups.iter().enumerate() {
        let profile = group.profile.resolve()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(g as u64);
        for n in 1..=config.n_items {
            let item_id = format!("{}-{n}", group.label);
            groups.insert(item_id.clone(), group.label.clone());
            for r in 1..=config.n_raters {
                ratings.push(ExpertRating {
                    rater_id: format!("R{r}"),
                    item_id: item_id.clone(),
                    necessity: weighted(&profile.necessity, &mut rng)? as u8 + 1,
                    options_rationality: weighted(&profile.options_rationality, &mut rng)? as u8,
                    scoring_rationality: weighted(&profile.scoring_rationality, &mut rng)? as u8,
                    overall: weighted(&profile.overall, &mut rng)? as u8,
                });
            }
        }
    }
    Ok((ratings, groups))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content_validity::{aggregate_ratings, compare_groups, Indicator};
    use crate::item_model::SjtItem;
    use crate::psychometrics::{apply_inclusion_filters, build_score_matrix, InclusionCriteria};
    use crate::stats::pearson;

    pub(crate) fn bank(k: usize) -> ItemBank {
        let items = Facet::ALL.iter().flat_map(|f| {
            (1..=k).map(move |i| {
                SjtItem::new(
                    format!("{}-{i}", f.id()),
                    *f,
                    "s? What would you do?",
                    ["a", "b", "c", "d"],
                    [1, 0, 1, 0],
                )
            })
        });
        ItemBank::from_items("sim", items).unwrap()
    }

    fn step_config() -> SimConfig {
        let mut c = SimConfig::with_items(ItemParams {
            a: vec![1e9],
            b: vec![0.0],
        });
        c.n_participants = 200;
        c
    }

    #[test]
    fn step_items_give_extreme_totals() {
        let b = bank(8);
        let out = simulate(&step_config(), &b).unwrap();
        let m = build_score_matrix(&out.records, &b, Session::Test).unwrap();
        for sm in m.matrices.values() {
            assert!(sm.totals().iter().all(|t| *t == 0.0 || *t == 8.0));
        }
    }

    #[test]
    fn deterministic_by_seed() {
        let b = bank(3);
        let mut c = step_config();
        c.items.a = vec![1.2];
        let x = simulate(&c, &b).unwrap();
        let y = simulate(&c, &b).unwrap();
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            serde_json::to_string(&y).unwrap()
        );
        c.seed = 1;
        assert_ne!(simulate(&c, &b).unwrap().records, x.records);
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = step_config();
        c.facet_covariance[0][1] = 0.99;
        c.facet_covariance[1][0] = 0.99;
        c.facet_covariance[0][2] = -0.99;
        c.facet_covariance[2][0] = -0.99;
        c.facet_covariance[1][2] = 0.99;
        c.facet_covariance[2][1] = 0.99;
        assert!(matches!(
            simulate(&c, &bank(2)),
            Err(ConfigError::Covariance(_))
        ));
        let mut c = step_config();
        c.likert.thresholds = [0.0, 0.0, 1.0, 2.0];
        assert!(matches!(c.validate(), Err(ConfigError::Thresholds(_))));
        let partial = ItemBank::from_items(
            "p",
            [SjtItem::new(
                "x",
                Facet::Compliance,
                "s? What would you do?",
                ["a", "b", "c", "d"],
                [1, 1, 0, 0],
            )],
        )
        .unwrap();
        assert!(matches!(
            simulate(&step_config(), &partial),
            Err(ConfigError::MissingFacet(_))
        ));
    }

    #[test]
    fn singular_psd_is_accepted() {
        let mut m = identity5();
        m[0][1] = 1.0;
        m[1][0] = 1.0;
        let l = cholesky(&m).unwrap();
        assert_eq!(l[1][1], 0.0);
        assert!((l[1][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cholesky_reconstructs() {
        let mut m = identity5();
        for (i, j, v) in [(0, 1, -0.5), (1, 2, 0.4), (0, 4, -0.3), (3, 4, 0.3)] {
            m[i][j] = v;
            m[j][i] = v;
        }
        let l = cholesky(&m).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let v: f64 = (0..5).map(|k| l[i][k] * l[j][k]).sum();
                assert!((v - m[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chosen_label_matches_score_and_compliance() {
        let b = bank(4);
        let mut c = SimConfig::with_items(ItemParams {
            a: vec![1.5],
            b: vec![0.0],
        });
        c.n_participants = 60;
        let out = simulate(&c, &b).unwrap();
        let n_test = 60 * 20;
        assert_eq!(
            out.records.len(),
            n_test + c.retest.n_participants.min(60) * 20
        );
        let f = apply_inclusion_filters(&out.records, &out.meta, &InclusionCriteria::default())
            .unwrap();
        assert_eq!(f.retained.len(), 60);
        assert!(out.records.iter().all(|r| r.response_time_ms >= 2100));

        c.failures = FailureRates {
            attention: 0.2,
            underage: 0.1,
            overage: 0.1,
            fast_rt: 0.2,
        };
        let out = simulate(&c, &b).unwrap();
        let f = apply_inclusion_filters(&out.records, &out.meta, &InclusionCriteria::default())
            .unwrap();
        assert!(!f.excluded.is_empty());
    }

    #[test]
    fn retest_stability_one_reproduces_totals() {
        let b = bank(8);
        let mut c = step_config();
        c.retest.stability = [1.0; 5];
        let out = simulate(&c, &b).unwrap();
        let t = build_score_matrix(&out.records, &b, Session::Test).unwrap();
        let r = build_score_matrix(&out.records, &b, Session::Retest).unwrap();
        let f = Facet::Gregariousness;
        let tt = t.matrices[&f].totals();
        let rt = r.matrices[&f].totals();
        assert_eq!(&tt[..rt.len()], &rt[..]);
    }

    #[test]
    fn correlated_latents_show_in_totals() {
        let b = bank(8);
        let mut c = SimConfig::with_items(ItemParams {
            a: vec![2.5],
            b: vec![-0.5, 0.0, 0.5],
        });
        c.n_participants = 2000;
        c.facet_covariance[0][1] = -0.5;
        c.facet_covariance[1][0] = -0.5;
        let out = simulate(&c, &b).unwrap();
        let m = build_score_matrix(&out.records, &b, Session::Test).unwrap();
        let r = |a: Facet, b: Facet| {
            pearson(&m.matrices[&a].totals(), &m.matrices[&b].totals())
                .unwrap()
                .r
        };
        assert!(r(Facet::SelfConsciousness, Facet::Gregariousness) < -0.3);
        assert!(r(Facet::Compliance, Facet::SelfDiscipline).abs() < 0.1);
    }

    #[test]
    fn alpha_oracle_extremes() {
        let flat = SimConfig::with_items(ItemParams {
            a: vec![0.0],
            b: vec![0.0],
        });
        let e = expected_alpha_with(&flat, Facet::Compliance, 8, 40_000).unwrap();
        assert!(e.alpha.abs() < 0.05, "{e:?}");
        let sharp = SimConfig::with_items(ItemParams {
            a: vec![1e9],
            b: vec![-0.6, -0.4, -0.2, 0.0, 0.1, 0.3, 0.5, 0.7],
        });
        let e = expected_alpha_with(&sharp, Facet::Compliance, 8, 40_000).unwrap();
        assert!(e.alpha > 0.9, "{e:?}");
        assert!(e.se > 0.0 && e.se < 0.01);
    }

    #[test]
    fn ceiling_profile_gives_unit_cvr() {
        let cfg = ExpertSimConfig {
            groups: vec![
                RatingGroup {
                    label: "A".into(),
                    profile: ProfileSpec::Named("ceiling".into()),
                },
                RatingGroup {
                    label: "B".into(),
                    profile: ProfileSpec::Named("ceiling".into()),
                },
            ],
            n_raters: 8,
            n_items: 7,
            seed: 3,
        };
        let (ratings, groups) = simulate_expert_ratings(&cfg).unwrap();
        assert_eq!(ratings.len(), 2 * 7 * 8);
        let agg = aggregate_ratings(&ratings, &groups).unwrap();
        assert!(agg.summaries.iter().all(|s| s.cvr == 1.0));
    }

    #[test]
    fn ordered_profiles_order_mean_ranks() {
        let cfg = ExpertSimConfig {
            groups: ["low", "mid", "high"]
                .iter()
                .map(|p| RatingGroup {
                    label: p.to_string(),
                    profile: ProfileSpec::Named(p.to_string()),
                })
                .collect(),
            n_raters: 8,
            n_items: 20,
            seed: 11,
        };
        let (ratings, groups) = simulate_expert_ratings(&cfg).unwrap();
        let agg = aggregate_ratings(&ratings, &groups).unwrap();
        let report = compare_groups(&agg.summaries).unwrap();
        let cmp = report
            .indicators
            .iter()
            .find(|c| c.indicator == Indicator::OptionsRationality)
            .unwrap();
        let ranks: Vec<f64> = cmp.test.mean_ranks.iter().map(|g| g.mean_rank).collect();
        assert!(ranks[0] < ranks[1] && ranks[1] < ranks[2], "{ranks:?}");
    }
}
