//! Rank tests, correlation, and the distribution tails they need.
//!
//! Everything here is self-contained: midranks, Kruskal-Wallis H with tie
//! correction, Dunn's pairwise z with Bonferroni adjustment, Mann-Whitney U
//! (exact by enumerating the null distribution of pooled midranks, or
//! tie-corrected normal approximation), Pearson's r with its t test, and
//! descriptive helpers. Tail probabilities come from regularized incomplete
//! gamma and beta functions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("non-finite value in data")]
    NonFinite,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

/// Regularized upper incomplete gamma Q(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_fraction(a, x)
    }
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_fraction(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum.ln() - x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_fraction(a: f64, x: f64) -> f64 {
    // Modified Lentz.
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized incomplete beta I_x(a, b).
pub fn beta_inc(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x >= 0.0 {
        gamma_q(0.5, x * x)
    } else {
        2.0 - gamma_q(0.5, x * x)
    }
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(x: f64, df: u32) -> Result<f64, StatsError> {
    if df < 1 {
        return Err(StatsError::Param("chi-square df must be >= 1".into()));
    }
    if x.is_nan() {
        return Err(StatsError::NonFinite);
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    Ok(gamma_q(f64::from(df) / 2.0, x / 2.0).clamp(0.0, 1.0))
}

/// Upper tail of the standard normal distribution.
pub fn normal_sf(z: f64) -> f64 {
    (0.5 * erfc(z / std::f64::consts::SQRT_2)).clamp(0.0, 1.0)
}

/// Upper tail of Student's t distribution.
pub fn t_sf(t: f64, df: f64) -> Result<f64, StatsError> {
    if !(df > 0.0) || !df.is_finite() {
        return Err(StatsError::Param("t df must be positive".into()));
    }
    if t.is_nan() {
        return Err(StatsError::NonFinite);
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 0.0 } else { 1.0 });
    }
    let tail = 0.5 * beta_inc(df / 2.0, 0.5, df / (df + t * t));
    Ok(if t >= 0.0 { tail } else { 1.0 - tail }.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Descriptives
// ---------------------------------------------------------------------------

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Sample variance with an n-1 denominator.
pub fn sample_variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some(ss / (values.len() - 1) as f64)
}

pub fn sample_sd(values: &[f64]) -> Option<f64> {
    sample_variance(values).map(f64::sqrt)
}

/// Linearly interpolated quantile between order statistics (the `type 7` rule).
pub fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Minimum, quartiles and maximum of one group, as drawn in a boxplot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn five_number(values: &[f64]) -> Option<FiveNumber> {
    let mut sorted = values.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return None;
    }
    sorted.sort_by(f64::total_cmp);
    Some(FiveNumber {
        min: *sorted.first()?,
        q1: quantile(&sorted, 0.25)?,
        median: quantile(&sorted, 0.5)?,
        q3: quantile(&sorted, 0.75)?,
        max: *sorted.last()?,
    })
}

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

/// Ranks starting at 1; tied values share the mean of the ranks they span.
pub fn rank_with_ties(values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if values.is_empty() {
        return Err(StatsError::InsufficientData("nothing to rank".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = midrank;
        }
        i = j + 1;
    }
    Ok(ranks)
}

/// Sum of t³ − t over groups of tied values.
pub fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        total += t * t * t - t;
        i = j + 1;
    }
    total
}

// ---------------------------------------------------------------------------
// Rank tests
// ---------------------------------------------------------------------------

/// Labelled independent samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedSample {
    groups: Vec<(String, Vec<f64>)>,
}

impl GroupedSample {
    pub fn new(groups: Vec<(String, Vec<f64>)>) -> Result<Self, StatsError> {
        if groups.len() < 2 {
            return Err(StatsError::InsufficientData(
                "need at least two groups".into(),
            ));
        }
        if let Some((label, _)) = groups.iter().find(|(_, v)| v.is_empty()) {
            return Err(StatsError::InsufficientData(format!(
                "group {label} is empty"
            )));
        }
        if groups.iter().flat_map(|(_, v)| v).any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        Ok(GroupedSample { groups })
    }

    pub fn groups(&self) -> &[(String, Vec<f64>)] {
        &self.groups
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(|(_, v)| v.len()).sum()
    }

    fn pooled(&self) -> Vec<f64> {
        self.groups
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }

    /// Pooled midranks split back into groups.
    fn group_ranks(&self) -> Result<Vec<Vec<f64>>, StatsError> {
        let ranks = rank_with_ties(&self.pooled())?;
        let mut out = Vec::with_capacity(self.groups.len());
        let mut offset = 0;
        for (_, v) in &self.groups {
            out.push(ranks[offset..offset + v.len()].to_vec());
            offset += v.len();
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    KruskalWallis,
    MannWhitneyExact,
    MannWhitneyAsymptotic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRank {
    pub label: String,
    pub n: usize,
    pub mean_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub statistic: f64,
    pub df: Option<u32>,
    /// Standardized statistic, where one applies.
    pub z: Option<f64>,
    pub p_value: f64,
    pub mean_ranks: Vec<GroupRank>,
    /// No rank variation at all; the statistic is 0 and p is 1 by convention.
    pub degenerate: bool,
}

fn group_rank_summary(sample: &GroupedSample, ranks: &[Vec<f64>]) -> Vec<GroupRank> {
    sample
        .groups
        .iter()
        .zip(ranks)
        .map(|((label, v), r)| GroupRank {
            label: label.clone(),
            n: v.len(),
            mean_rank: r.iter().sum::<f64>() / r.len() as f64,
        })
        .collect()
}

/// Kruskal-Wallis H on pooled midranks, tie corrected, with a chi-square p.
pub fn kruskal_wallis(sample: &GroupedSample) -> Result<TestResult, StatsError> {
    let n = sample.total();
    if n < 3 {
        return Err(StatsError::InsufficientData(
            "Kruskal-Wallis needs at least 3 observations".into(),
        ));
    }
    let ranks = sample.group_ranks()?;
    let nf = n as f64;
    let sum_sq: f64 = ranks
        .iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            s * s / r.len() as f64
        })
        .sum();
    let h_raw = 12.0 / (nf * (nf + 1.0)) * sum_sq - 3.0 * (nf + 1.0);
    let correction = 1.0 - tie_term(&sample.pooled()) / (nf * nf * nf - nf);
    let df = (sample.groups.len() - 1) as u32;
    let mean_ranks = group_rank_summary(sample, &ranks);
    if correction <= 1e-12 {
        return Ok(TestResult {
            method: Method::KruskalWallis,
            statistic: 0.0,
            df: Some(df),
            z: None,
            p_value: 1.0,
            mean_ranks,
            degenerate: true,
        });
    }
    let h = (h_raw / correction).max(0.0);
    Ok(TestResult {
        method: Method::KruskalWallis,
        statistic: h,
        df: Some(df),
        z: None,
        p_value: chi_square_sf(h, df)?,
        mean_ranks,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjustment {
    Bonferroni,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub group_a: String,
    pub group_b: String,
    pub z: f64,
    pub p_raw: f64,
    pub p_adjusted: f64,
}

/// Dunn's pairwise comparisons of mean ranks, every pair `i < j` in group order.
pub fn dunn_posthoc(
    sample: &GroupedSample,
    adjust: Adjustment,
) -> Result<Vec<PairwiseComparison>, StatsError> {
    let n = sample.total();
    if n < 3 {
        return Err(StatsError::InsufficientData(
            "Dunn's test needs at least 3 observations".into(),
        ));
    }
    let ranks = sample.group_ranks()?;
    let summary = group_rank_summary(sample, &ranks);
    let nf = n as f64;
    let base = nf * (nf + 1.0) / 12.0 - tie_term(&sample.pooled()) / (12.0 * (nf - 1.0));
    let k = summary.len();
    let m = (k * (k - 1) / 2) as f64;
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, b) = (&summary[i], &summary[j]);
            let var = base * (1.0 / a.n as f64 + 1.0 / b.n as f64);
            let (z, p_raw) = if var > 1e-12 {
                let z = (a.mean_rank - b.mean_rank) / var.sqrt();
                (z, (2.0 * normal_sf(z.abs())).min(1.0))
            } else {
                (0.0, 1.0)
            };
            let p_adjusted = match adjust {
                Adjustment::Bonferroni => (m * p_raw).min(1.0),
                Adjustment::None => p_raw,
            };
            out.push(PairwiseComparison {
                group_a: a.label.clone(),
                group_b: b.label.clone(),
                z,
                p_raw,
                p_adjusted,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MwMode {
    Exact,
    Asymptotic,
    /// Exact when the pooled size is at most [`MW_EXACT_MAX_N`].
    Auto,
}

pub const MW_EXACT_MAX_N: usize = 20;

struct MwParts {
    n_a: usize,
    n_b: usize,
    /// Pooled ranks, `a` first.
    ranks: Vec<f64>,
    u_b: f64,
    z: f64,
    mean_rank_a: f64,
    mean_rank_b: f64,
    degenerate: bool,
}

fn mw_parts(a: &[f64], b: &[f64]) -> Result<MwParts, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::InsufficientData(
            "Mann-Whitney needs two non-empty samples".into(),
        ));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = rank_with_ties(&pooled)?;
    let (n_a, n_b) = (a.len(), b.len());
    let n = (n_a + n_b) as f64;
    let r_a: f64 = ranks[..n_a].iter().sum();
    let r_b: f64 = ranks[n_a..].iter().sum();
    let u_b = r_b - (n_b * (n_b + 1)) as f64 / 2.0;
    let mean_u = (n_a * n_b) as f64 / 2.0;
    let var_u = if n > 1.0 {
        (n_a * n_b) as f64 / 12.0 * ((n + 1.0) - tie_term(&pooled) / (n * (n - 1.0)))
    } else {
        0.0
    };
    let degenerate = var_u <= 1e-12;
    let z = if degenerate {
        0.0
    } else {
        (u_b - mean_u) / var_u.sqrt()
    };
    Ok(MwParts {
        n_a,
        n_b,
        ranks,
        u_b,
        z,
        mean_rank_a: r_a / n_a as f64,
        mean_rank_b: r_b / n_b as f64,
        degenerate,
    })
}

/// Null distribution of U (for sample `b`) given the pooled midranks:
/// `(u, probability)` pairs sorted by `u`.
pub fn exact_u_distribution(a: &[f64], b: &[f64]) -> Result<Vec<(f64, f64)>, StatsError> {
    let parts = mw_parts(a, b)?;
    Ok(u_distribution(&parts.ranks, parts.n_b))
}

fn u_distribution(ranks: &[f64], n_b: usize) -> Vec<(f64, f64)> {
    let (counts, total) = u_counts(ranks, n_b);
    counts.into_iter().map(|(u, c)| (u, c / total)).collect()
}

/// Subset counts per U value and their total; counts are exact integers.
fn u_counts(ranks: &[f64], n_b: usize) -> (Vec<(f64, f64)>, f64) {
    // Doubled midranks are integers, so subset sums index a table.
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = {
        let mut d = doubled.clone();
        d.sort_unstable_by(|x, y| y.cmp(x));
        d.iter().take(n_b).sum()
    };
    // counts[j][s]: number of size-j subsets with doubled rank sum s.
    let mut counts = vec![vec![0.0f64; max_sum + 1]; n_b + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for j in (1..=n_b).rev() {
            let (lower, upper) = counts.split_at_mut(j);
            let prev = &lower[j - 1];
            let cur = &mut upper[0];
            for s in (r..=max_sum).rev() {
                let add = prev[s - r];
                if add != 0.0 {
                    cur[s] += add;
                }
            }
        }
    }
    let total: f64 = counts[n_b].iter().sum();
    let offset = (n_b * (n_b + 1)) as f64 / 2.0;
    let support = counts[n_b]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0.0)
        .map(|(s, c)| (s as f64 / 2.0 - offset, *c))
        .collect();
    (support, total)
}

/// Mann-Whitney U. The statistic is U of sample `b`, and `z` is positive when
/// `b` tends to rank higher than `a`.
pub fn mann_whitney(a: &[f64], b: &[f64], mode: MwMode) -> Result<TestResult, StatsError> {
    let parts = mw_parts(a, b)?;
    let exact = match mode {
        MwMode::Exact => true,
        MwMode::Asymptotic => false,
        MwMode::Auto => parts.n_a + parts.n_b <= MW_EXACT_MAX_N,
    };
    let mean_u = (parts.n_a * parts.n_b) as f64 / 2.0;
    let p_value = if exact {
        let observed = (parts.u_b - mean_u).abs();
        let (counts, total) = u_counts(&parts.ranks, parts.n_b);
        let tail: f64 = counts
            .iter()
            .filter(|(u, _)| (u - mean_u).abs() >= observed - 1e-9)
            .map(|(_, c)| c)
            .sum();
        (tail / total).min(1.0)
    } else if parts.degenerate {
        1.0
    } else {
        (2.0 * normal_sf(parts.z.abs())).min(1.0)
    };
    Ok(TestResult {
        method: if exact {
            Method::MannWhitneyExact
        } else {
            Method::MannWhitneyAsymptotic
        },
        statistic: parts.u_b,
        df: None,
        z: Some(parts.z),
        p_value,
        mean_ranks: vec![
            GroupRank {
                label: "a".into(),
                n: parts.n_a,
                mean_rank: parts.mean_rank_a,
            },
            GroupRank {
                label: "b".into(),
                n: parts.n_b,
                mean_rank: parts.mean_rank_b,
            },
        ],
        degenerate: parts.degenerate,
    })
}

// ---------------------------------------------------------------------------
// Correlation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub t: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Pearson's r with a two-sided t test on n − 2 degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::InsufficientData(
            "correlation needs at least 3 pairs".into(),
        ));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mx = mean(x).unwrap();
    let my = mean(y).unwrap();
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(StatsError::DegenerateData("zero variance".into()));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let one_minus = 1.0 - r * r;
    let (t, p_value) = if one_minus <= 1e-15 {
        (f64::INFINITY.copysign(r), 0.0)
    } else {
        let t = r * (df / one_minus).sqrt();
        (t, (2.0 * t_sf(t.abs(), df)?).min(1.0))
    };
    Ok(Correlation { r, t, p_value, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample(groups: &[&[f64]]) -> GroupedSample {
        GroupedSample::new(
            groups
                .iter()
                .enumerate()
                .map(|(i, g)| (format!("g{i}"), g.to_vec()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn midranks() {
        assert_eq!(
            rank_with_ties(&[3.0, 1.0, 2.0]).unwrap(),
            vec![3.0, 1.0, 2.0]
        );
        assert_eq!(rank_with_ties(&[5.0, 5.0]).unwrap(), vec![1.5, 1.5]);
        assert_eq!(
            rank_with_ties(&[2.0, 2.0, 2.0, 7.0]).unwrap(),
            vec![2.0, 2.0, 2.0, 4.0]
        );
        assert_eq!(rank_with_ties(&[1.0, f64::NAN]), Err(StatsError::NonFinite));
        assert!(rank_with_ties(&[]).is_err());
    }

    #[test]
    fn tie_term_counts_runs() {
        // runs of 3 and 2: (27-3) + (8-2)
        assert_eq!(tie_term(&[1.0, 1.0, 1.0, 2.0, 2.0, 3.0]), 30.0);
    }

    #[test]
    fn kruskal_two_pairs() {
        let r = kruskal_wallis(&sample(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap();
        assert_abs_diff_eq!(r.statistic, 2.4, epsilon = 1e-12);
        assert_eq!(r.df, Some(1));
        assert_abs_diff_eq!(r.mean_ranks[0].mean_rank, 1.5);
        assert_abs_diff_eq!(r.mean_ranks[1].mean_rank, 3.5);
    }

    #[test]
    fn kruskal_identical_constants_is_degenerate() {
        let c = [2.0; 5];
        let r = kruskal_wallis(&sample(&[&c, &c, &c, &c])).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(r.degenerate);
    }

    #[test]
    fn kruskal_six_groups_has_five_df() {
        let groups: Vec<Vec<f64>> = (0..6)
            .map(|g| (0..7).map(|i| (g * 7 + i) as f64 % 11.0).collect())
            .collect();
        let refs: Vec<&[f64]> = groups.iter().map(|g| g.as_slice()).collect();
        assert_eq!(kruskal_wallis(&sample(&refs)).unwrap().df, Some(5));
        assert!(kruskal_wallis(&sample(&[&[1.0], &[2.0]])).is_err());
    }

    #[test]
    fn grouped_sample_preconditions() {
        assert!(GroupedSample::new(vec![("a".into(), vec![1.0])]).is_err());
        assert!(GroupedSample::new(vec![("a".into(), vec![1.0]), ("b".into(), vec![])]).is_err());
    }

    #[test]
    fn dunn_symmetry_and_count() {
        let r = dunn_posthoc(&sample(&[&[1.0, 4.0], &[2.0, 3.0]]), Adjustment::Bonferroni).unwrap();
        assert_eq!(r.len(), 1);
        assert_abs_diff_eq!(r[0].z, 0.0);
        assert_abs_diff_eq!(r[0].p_raw, 1.0, epsilon = 1e-15);

        let groups: Vec<Vec<f64>> = (0..6).map(|g| vec![g as f64, g as f64 + 0.5]).collect();
        let refs: Vec<&[f64]> = groups.iter().map(|g| g.as_slice()).collect();
        let r = dunn_posthoc(&sample(&refs), Adjustment::Bonferroni).unwrap();
        assert_eq!(r.len(), 15);
        for c in &r {
            assert_abs_diff_eq!(c.p_adjusted, (15.0 * c.p_raw).min(1.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn dunn_matches_formula_from_pooled_ranks() {
        // Pooled ranks of {1,2} vs {3,4} are 1..4; no ties.
        let r = dunn_posthoc(&sample(&[&[1.0, 2.0], &[3.0, 4.0]]), Adjustment::None).unwrap();
        let ranks = [1.0, 2.0, 3.0, 4.0];
        let n: f64 = 4.0;
        let mean_a = (ranks[0] + ranks[1]) / 2.0;
        let mean_b = (ranks[2] + ranks[3]) / 2.0;
        let se = (n * (n + 1.0) / 12.0 * (0.5 + 0.5f64)).sqrt();
        assert_abs_diff_eq!(r[0].z, (mean_a - mean_b) / se, epsilon = 1e-9);
    }

    #[test]
    fn mann_whitney_small_exact() {
        let r = mann_whitney(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], MwMode::Exact).unwrap();
        // U of the second sample is maximal: 9.
        assert_abs_diff_eq!(r.statistic, 9.0);
        assert_abs_diff_eq!(r.p_value, 0.1, epsilon = 1e-12);
        let r = mann_whitney(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0], MwMode::Auto).unwrap();
        assert_abs_diff_eq!(r.statistic, 0.0);
        assert_eq!(r.method, Method::MannWhitneyExact);
        assert_abs_diff_eq!(r.p_value, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn mann_whitney_identical_samples() {
        let a = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 5.0];
        let r = mann_whitney(&a, &a, MwMode::Auto).unwrap();
        assert_abs_diff_eq!(r.statistic, 24.5);
        assert_abs_diff_eq!(r.p_value, 1.0, epsilon = 1e-12);
        let dist = exact_u_distribution(&a, &a).unwrap();
        let total: f64 = dist.iter().map(|(_, p)| p).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mann_whitney_direction() {
        let a: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = a.iter().map(|v| v + 0.8).collect();
        let r = mann_whitney(&a, &b, MwMode::Asymptotic).unwrap();
        assert!(r.z.unwrap() > 0.0);
        assert!(r.p_value < 0.05);
        let r = mann_whitney(&b, &a, MwMode::Auto).unwrap();
        assert_eq!(r.method, Method::MannWhitneyAsymptotic);
        assert!(r.z.unwrap() < 0.0);
    }

    #[test]
    fn mann_whitney_all_equal_is_degenerate() {
        let r = mann_whitney(&[1.0, 1.0], &[1.0, 1.0, 1.0], MwMode::Asymptotic).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
        let r = mann_whitney(&[1.0, 1.0], &[1.0, 1.0, 1.0], MwMode::Exact).unwrap();
        assert_abs_diff_eq!(r.p_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pearson_lines() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_abs_diff_eq!(pearson(&x, &y).unwrap().r, 1.0, epsilon = 1e-15);
        assert_eq!(pearson(&x, &y).unwrap().p_value, 0.0);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_abs_diff_eq!(pearson(&x, &y).unwrap().r, -1.0, epsilon = 1e-15);
        assert!(matches!(
            pearson(&x, &[1.0; 5]),
            Err(StatsError::DegenerateData(_))
        ));
        assert!(pearson(&x[..2], &x[..2]).is_err());
        assert!(pearson(&x, &x[..4]).is_err());
    }

    #[test]
    fn pearson_toy_matches_direct_formula() {
        let x = [1.0, 3.0, 2.0, 5.0, 4.0];
        let y = [2.0, 2.5, 1.0, 4.0, 5.0];
        let c = pearson(&x, &y).unwrap();
        // means 3 and 2.9
        let dx: Vec<f64> = x.iter().map(|v| v - 3.0).collect();
        let dy: Vec<f64> = y.iter().map(|v| v - 2.9).collect();
        let cov: f64 = dx.iter().zip(&dy).map(|(a, b)| a * b).sum::<f64>() / 4.0;
        let sx = (dx.iter().map(|v| v * v).sum::<f64>() / 4.0).sqrt();
        let sy = (dy.iter().map(|v| v * v).sum::<f64>() / 4.0).sqrt();
        assert_abs_diff_eq!(c.r, cov / (sx * sy), epsilon = 1e-12);
    }

    #[test]
    fn tails_basic_values() {
        assert_eq!(chi_square_sf(0.0, 3).unwrap(), 1.0);
        assert_abs_diff_eq!(normal_sf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(t_sf(0.0, 7.0).unwrap(), 0.5, epsilon = 1e-15);
        let p = chi_square_sf(12.43, 5).unwrap();
        assert!((0.028..=0.030).contains(&p), "{p}");
        assert!(chi_square_sf(1.0, 0).is_err());
        assert!(t_sf(1.0, 0.0).is_err());
        // chi-square with 2 df has closed form exp(-x/2)
        assert_abs_diff_eq!(
            chi_square_sf(3.0, 2).unwrap(),
            (-1.5f64).exp(),
            epsilon = 1e-14
        );
        // normal tail at 1.96
        assert_abs_diff_eq!(normal_sf(1.959_963_984_540_054), 0.025, epsilon = 1e-12);
        // t with 1 df is Cauchy: sf(1) = 0.25
        assert_abs_diff_eq!(t_sf(1.0, 1.0).unwrap(), 0.25, epsilon = 1e-13);
    }

    #[test]
    fn descriptives() {
        assert_eq!(sample_variance(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 5.0 / 3.0);
        let f = five_number(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!(
            (f.min, f.q1, f.median, f.q3, f.max),
            (1.0, 2.0, 3.0, 4.0, 5.0)
        );
        let f = five_number(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(f.q1, 1.75);
        assert!(five_number(&[]).is_none());
    }
}
