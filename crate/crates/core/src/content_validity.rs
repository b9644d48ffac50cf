//! Expert content-validity ratings: per-item CVR and rationality summaries,
//! then group comparisons on those summaries.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{Cell, Table};
use crate::stats::{
    dunn_posthoc, five_number, kruskal_wallis, mann_whitney, Adjustment, FiveNumber, GroupedSample,
    Method, MwMode, PairwiseComparison, StatsError, TestResult,
};

/// Minimum CVR for eight raters.
pub const LAWSHE_MIN_CVR: f64 = 0.75;
pub const POSTHOC_ALPHA: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CvError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("rating out of range: {0}")]
    Range(String),
    #[error("duplicate rating for rater {rater_id}, item {item_id}")]
    Duplicate { rater_id: String, item_id: String },
    #[error("join: {0}")]
    Join(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl From<csv::Error> for CvError {
    fn from(e: csv::Error) -> Self {
        CvError::Csv(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpertRating {
    pub rater_id: String,
    pub item_id: String,
    /// 1 = necessary and useful, 2 = useful but not necessary, 3 = neither.
    pub necessity: u8,
    /// Number of reasonable options, 0–4.
    pub options_rationality: u8,
    /// Number of correctly scored options, 0–4.
    pub scoring_rationality: u8,
    /// 1 = usable as is.
    pub overall: u8,
}

impl ExpertRating {
    pub fn check(&self) -> Result<(), CvError> {
        let ctx = || format!("rater {} item {}", self.rater_id, self.item_id);
        if !(1..=3).contains(&self.necessity) {
            return Err(CvError::Range(format!(
                "{}: necessity {}",
                ctx(),
                self.necessity
            )));
        }
        if self.options_rationality > 4 {
            return Err(CvError::Range(format!(
                "{}: options_rationality {}",
                ctx(),
                self.options_rationality
            )));
        }
        if self.scoring_rationality > 4 {
            return Err(CvError::Range(format!(
                "{}: scoring_rationality {}",
                ctx(),
                self.scoring_rationality
            )));
        }
        if self.overall > 1 {
            return Err(CvError::Range(format!(
                "{}: overall {}",
                ctx(),
                self.overall
            )));
        }
        Ok(())
    }
}

pub fn read_ratings_csv<R: Read>(reader: R) -> Result<Vec<ExpertRating>, CvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        let r: ExpertRating = rec?;
        r.check()?;
        out.push(r);
    }
    Ok(out)
}

pub fn write_ratings_csv<W: Write>(writer: W, ratings: &[ExpertRating]) -> Result<(), CvError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in ratings {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CvError::Csv(e.to_string()))?;
    Ok(())
}

/// Item-to-group assignment in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMap {
    pub entries: Vec<(String, String)>,
}

impl GroupMap {
    pub fn insert(&mut self, item_id: impl Into<String>, group: impl Into<String>) {
        self.entries.push((item_id.into(), group.into()));
    }

    pub fn groups(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        self.entries
            .iter()
            .filter(|(_, g)| seen.insert(g.clone()))
            .map(|(_, g)| g.clone())
            .collect()
    }
}

#[derive(Deserialize, Serialize)]
struct GroupRow {
    item_id: String,
    group_label: String,
}

pub fn read_group_map_csv<R: Read>(reader: R) -> Result<GroupMap, CvError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut map = GroupMap::default();
    let mut seen = HashSet::new();
    for rec in rdr.deserialize() {
        let row: GroupRow = rec?;
        if !seen.insert(row.item_id.clone()) {
            return Err(CvError::Join(format!("item {} listed twice", row.item_id)));
        }
        map.insert(row.item_id, row.group_label);
    }
    Ok(map)
}

pub fn write_group_map_csv<W: Write>(writer: W, map: &GroupMap) -> Result<(), CvError> {
    let mut w = csv::Writer::from_writer(writer);
    for (item_id, group_label) in &map.entries {
        w.serialize(GroupRow {
            item_id: item_id.clone(),
            group_label: group_label.clone(),
        })?;
    }
    w.flush().map_err(|e| CvError::Csv(e.to_string()))?;
    Ok(())
}

/// Content validity ratio for `n_essential` of `n_experts` raters.
pub fn cvr(n_essential: usize, n_experts: usize) -> Result<f64, CvError> {
    if n_experts == 0 {
        return Err(CvError::Param("CVR needs at least one expert".into()));
    }
    if n_essential > n_experts {
        return Err(CvError::Param(format!(
            "{n_essential} essential ratings exceed {n_experts} experts"
        )));
    }
    let half = n_experts as f64 / 2.0;
    Ok((n_essential as f64 - half) / half)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Necessity,
    OptionsRationality,
    ScoringRationality,
    Overall,
}

impl Indicator {
    pub const ALL: [Indicator; 4] = [
        Indicator::Necessity,
        Indicator::OptionsRationality,
        Indicator::ScoringRationality,
        Indicator::Overall,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Indicator::Necessity => "Necessity of the situation",
            Indicator::OptionsRationality => "Rationality of options",
            Indicator::ScoringRationality => "Rationality of scoring",
            Indicator::Overall => "Overall item quality",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Indicator::Necessity => "necessity",
            Indicator::OptionsRationality => "options_rationality",
            Indicator::ScoringRationality => "scoring_rationality",
            Indicator::Overall => "overall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemCvSummary {
    pub item_id: String,
    pub group_label: String,
    pub n_raters: usize,
    pub cvr: f64,
    pub mean_options_rationality: f64,
    pub mean_scoring_rationality: f64,
    pub overall_sum: u32,
}

impl ItemCvSummary {
    /// The per-item score used for `indicator` in group comparisons.
    pub fn value(&self, indicator: Indicator) -> f64 {
        match indicator {
            Indicator::Necessity => self.cvr,
            Indicator::OptionsRationality => self.mean_options_rationality,
            Indicator::ScoringRationality => self.mean_scoring_rationality,
            Indicator::Overall => f64::from(self.overall_sum),
        }
    }
}

/// True when the item meets the minimum CVR.
pub fn flag_item(summary: &ItemCvSummary) -> bool {
    summary.cvr >= LAWSHE_MIN_CVR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregation {
    /// In group-map order.
    pub summaries: Vec<ItemCvSummary>,
    pub warnings: Vec<String>,
}

pub fn aggregate_ratings(
    ratings: &[ExpertRating],
    group_map: &GroupMap,
) -> Result<Aggregation, CvError> {
    let mapped: HashMap<&str, &str> = group_map
        .entries
        .iter()
        .map(|(i, g)| (i.as_str(), g.as_str()))
        .collect();
    let mut by_item: HashMap<&str, Vec<&ExpertRating>> = HashMap::new();
    let mut pairs = HashSet::new();
    let mut raters = HashSet::new();
    for r in ratings {
        r.check()?;
        if !mapped.contains_key(r.item_id.as_str()) {
            return Err(CvError::Join(format!(
                "item {} is rated but has no group",
                r.item_id
            )));
        }
        if !pairs.insert((r.rater_id.as_str(), r.item_id.as_str())) {
            return Err(CvError::Duplicate {
                rater_id: r.rater_id.clone(),
                item_id: r.item_id.clone(),
            });
        }
        raters.insert(r.rater_id.as_str());
        by_item.entry(r.item_id.as_str()).or_default().push(r);
    }
    let mut warnings = Vec::new();
    let mut summaries = Vec::with_capacity(group_map.entries.len());
    for (item_id, group) in &group_map.entries {
        let rs = by_item
            .get(item_id.as_str())
            .ok_or_else(|| CvError::Join(format!("item {item_id} has no ratings")))?;
        let n = rs.len();
        if n < raters.len() {
            warnings.push(format!(
                "item {item_id}: {n} of {} raters; indicators use available ratings",
                raters.len()
            ));
        }
        let essential = rs.iter().filter(|r| r.necessity == 1).count();
        let mean =
            |f: fn(&ExpertRating) -> u8| rs.iter().map(|r| f64::from(f(r))).sum::<f64>() / n as f64;
        summaries.push(ItemCvSummary {
            item_id: item_id.clone(),
            group_label: group.clone(),
            n_raters: n,
            cvr: cvr(essential, n)?,
            mean_options_rationality: mean(|r| r.options_rationality),
            mean_scoring_rationality: mean(|r| r.scoring_rationality),
            overall_sum: rs.iter().map(|r| u32::from(r.overall)).sum(),
        });
    }
    Ok(Aggregation {
        summaries,
        warnings,
    })
}

fn group_order(summaries: &[ItemCvSummary]) -> Vec<String> {
    let mut seen = HashSet::new();
    summaries
        .iter()
        .filter(|s| seen.insert(s.group_label.clone()))
        .map(|s| s.group_label.clone())
        .collect()
}

fn grouped(
    summaries: &[ItemCvSummary],
    groups: &[String],
    ind: Indicator,
) -> Vec<(String, Vec<f64>)> {
    groups
        .iter()
        .map(|g| {
            (
                g.clone(),
                summaries
                    .iter()
                    .filter(|s| &s.group_label == g)
                    .map(|s| s.value(ind))
                    .collect(),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorComparison {
    pub indicator: Indicator,
    pub test: TestResult,
    /// Present only when the omnibus p is below 0.05.
    pub posthoc: Option<Vec<PairwiseComparison>>,
    pub boxplots: Vec<(String, FiveNumber)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparisonReport {
    pub groups: Vec<String>,
    pub group_sizes: Vec<usize>,
    pub indicators: Vec<IndicatorComparison>,
}

/// Kruskal-Wallis on each indicator across groups, with Dunn follow-ups.
pub fn compare_groups(summaries: &[ItemCvSummary]) -> Result<GroupComparisonReport, CvError> {
    let groups = group_order(summaries);
    if groups.len() < 2 {
        return Err(CvError::Insufficient("need at least two groups".into()));
    }
    let group_sizes: Vec<usize> = groups
        .iter()
        .map(|g| summaries.iter().filter(|s| &s.group_label == g).count())
        .collect();
    if let Some((g, _)) = groups.iter().zip(&group_sizes).find(|(_, n)| **n < 2) {
        return Err(CvError::Insufficient(format!(
            "group {g} has fewer than two items"
        )));
    }
    let mut indicators = Vec::with_capacity(4);
    for ind in Indicator::ALL {
        let data = grouped(summaries, &groups, ind);
        let boxplots = data
            .iter()
            .map(|(g, v)| (g.clone(), five_number(v).expect("non-empty finite group")))
            .collect();
        let sample = GroupedSample::new(data)?;
        let test = kruskal_wallis(&sample)?;
        let posthoc = if !test.degenerate && test.p_value < POSTHOC_ALPHA {
            Some(dunn_posthoc(&sample, Adjustment::Bonferroni)?)
        } else {
            None
        };
        indicators.push(IndicatorComparison {
            indicator: ind,
            test,
            posthoc,
            boxplots,
        });
    }
    Ok(GroupComparisonReport {
        groups,
        group_sizes,
        indicators,
    })
}

fn indicator_columns() -> Vec<String> {
    Indicator::ALL
        .iter()
        .map(|i| i.title().to_string())
        .collect()
}

impl GroupComparisonReport {
    /// Mean ranks and omnibus statistics, one column per indicator.
    pub fn table(&self, title: &str) -> Table {
        let mut t = Table::new(title, indicator_columns());
        t.section("Mean ranks");
        for (gi, g) in self.groups.iter().enumerate() {
            t.row(
                g.clone(),
                self.indicators
                    .iter()
                    .map(|c| Cell::Stat(c.test.mean_ranks[gi].mean_rank))
                    .collect(),
            );
        }
        t.section("Kruskal-Wallis test statistics");
        t.row(
            "Chi-Square",
            self.indicators
                .iter()
                .map(|c| Cell::Stat(c.test.statistic))
                .collect(),
        );
        t.row(
            "df",
            self.indicators
                .iter()
                .map(|c| Cell::Int(i64::from(c.test.df.unwrap_or(0))))
                .collect(),
        );
        t.row(
            "Asymptotic significance value p",
            self.indicators
                .iter()
                .map(|c| Cell::P(c.test.p_value))
                .collect(),
        );
        t
    }

    /// Pairwise Dunn results for indicators with a significant omnibus test.
    pub fn posthoc_tables(&self) -> Vec<Table> {
        self.indicators
            .iter()
            .filter_map(|c| {
                let pairs = c.posthoc.as_ref()?;
                let mut t = Table::new(
                    format!("Dunn post hoc (Bonferroni): {}", c.indicator.title()),
                    vec!["z".into(), "p".into(), "adjusted p".into()],
                );
                for p in pairs {
                    t.row(
                        format!("{} vs {}", p.group_a, p.group_b),
                        vec![Cell::Stat(p.z), Cell::P(p.p_raw), Cell::P(p.p_adjusted)],
                    );
                }
                Some(t)
            })
            .collect()
    }

    /// Five-number summaries, one row per group and indicator.
    pub fn boxplot_table(&self) -> Table {
        boxplot_table(
            self.indicators
                .iter()
                .map(|c| (c.indicator, &c.boxplots[..])),
        )
    }
}

fn boxplot_table<'a>(rows: impl Iterator<Item = (Indicator, &'a [(String, FiveNumber)])>) -> Table {
    let mut t = Table::new(
        "Boxplot data",
        ["group", "min", "q1", "median", "q3", "max"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    for (ind, boxes) in rows {
        for (g, f) in boxes {
            t.row(
                ind.key(),
                vec![
                    Cell::Text(g.clone()),
                    Cell::Stat(f.min),
                    Cell::Stat(f.q1),
                    Cell::Stat(f.median),
                    Cell::Stat(f.q3),
                    Cell::Stat(f.max),
                ],
            );
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleComparison {
    pub indicator: Indicator,
    pub test: TestResult,
    pub boxplots: Vec<(String, FiveNumber)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub labels: (String, String),
    pub indicators: Vec<TwoSampleComparison>,
}

/// Mann-Whitney on each indicator between two item sets. U and z refer to `b`.
pub fn compare_two(a: &[ItemCvSummary], b: &[ItemCvSummary]) -> Result<StabilityReport, CvError> {
    if a.is_empty() || b.is_empty() {
        return Err(CvError::Insufficient(
            "both item sets must be non-empty".into(),
        ));
    }
    let label = |s: &[ItemCvSummary], fallback: &str| {
        let l = &s[0].group_label;
        if l.is_empty() {
            fallback.to_string()
        } else {
            l.clone()
        }
    };
    let mut labels = (label(a, "a"), label(b, "b"));
    if labels.0 == labels.1 {
        labels = (format!("{} (a)", labels.0), format!("{} (b)", labels.1));
    }
    let mut indicators = Vec::with_capacity(4);
    for ind in Indicator::ALL {
        let va: Vec<f64> = a.iter().map(|s| s.value(ind)).collect();
        let vb: Vec<f64> = b.iter().map(|s| s.value(ind)).collect();
        let mut test = mann_whitney(&va, &vb, MwMode::Auto)?;
        test.mean_ranks[0].label = labels.0.clone();
        test.mean_ranks[1].label = labels.1.clone();
        indicators.push(TwoSampleComparison {
            indicator: ind,
            test,
            boxplots: vec![
                (labels.0.clone(), five_number(&va).expect("finite")),
                (labels.1.clone(), five_number(&vb).expect("finite")),
            ],
        });
    }
    Ok(StabilityReport { labels, indicators })
}

impl StabilityReport {
    pub fn table(&self, title: &str) -> Table {
        let mut t = Table::new(title, indicator_columns());
        t.section("Mean ranks");
        for gi in 0..2 {
            let label = if gi == 0 {
                &self.labels.0
            } else {
                &self.labels.1
            };
            t.row(
                label.clone(),
                self.indicators
                    .iter()
                    .map(|c| Cell::Stat(c.test.mean_ranks[gi].mean_rank))
                    .collect(),
            );
        }
        t.section("Mann-Whitney test statistics");
        t.row(
            "Mann-Whitney U",
            self.indicators
                .iter()
                .map(|c| Cell::Stat(c.test.statistic))
                .collect(),
        );
        t.row(
            "Standardized test statistic z",
            self.indicators
                .iter()
                .map(|c| Cell::Stat(c.test.z.unwrap_or(0.0)))
                .collect(),
        );
        let all_exact = self
            .indicators
            .iter()
            .all(|c| c.test.method == Method::MannWhitneyExact);
        t.row(
            if all_exact {
                "Exact significance value p"
            } else {
                "Asymptotic significance value p"
            },
            self.indicators
                .iter()
                .map(|c| Cell::P(c.test.p_value))
                .collect(),
        );
        t
    }

    pub fn boxplot_table(&self) -> Table {
        boxplot_table(
            self.indicators
                .iter()
                .map(|c| (c.indicator, &c.boxplots[..])),
        )
    }
}

/// Summaries grouped by label, keeping first-appearance order.
pub fn split_by_group(summaries: &[ItemCvSummary]) -> BTreeMap<String, Vec<ItemCvSummary>> {
    let mut out: BTreeMap<String, Vec<ItemCvSummary>> = BTreeMap::new();
    for s in summaries {
        out.entry(s.group_label.clone())
            .or_default()
            .push(s.clone());
    }
    out
}
