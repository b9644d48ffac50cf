//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sjt_forge::content_validity::{
    aggregate_ratings, cvr, flag_item, ExpertRating, GroupMap, LAWSHE_MIN_CVR,
};
use sjt_forge::item_model::{IssueCode, ItemRules, Label};
use sjt_forge::item_parser::{
    parse_items, parse_items_with, parse_scoring_line, render_items, ParserConfig,
};
use sjt_forge::pipeline::{run_cv, run_generate, RunConfig};
use sjt_forge::psychometrics::{
    alpha_from_columns, apply_inclusion_filters, build_score_matrix, cronbach_alpha,
    guttman_split_half, icc, mtmm_summary, CorrelationTable, ExclusionReason, IccModel,
    InclusionCriteria, ParticipantMeta, ResponseRecord, ScoreMatrix, Session, Split,
};
use sjt_forge::report::{Cell, Table};
use sjt_forge::respondent_sim::{expected_alpha, simulate, SimConfig};
use sjt_forge::stats::{
    chi_square_sf, dunn_posthoc, exact_u_distribution, kruskal_wallis, mann_whitney, Adjustment,
    GroupedSample, MwMode,
};
use sjt_forge::Facet;

use common::{fixture, random_item, read_fixture, synthetic_bank};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn c1_cvr() -> Outcome {
    ensure!(
        cvr(7, 8).unwrap() == 0.75,
        "cvr(7,8) = {}",
        cvr(7, 8).unwrap()
    );
    ensure!(
        cvr(4, 8).unwrap() == 0.0,
        "cvr(4,8) = {}",
        cvr(4, 8).unwrap()
    );
    ensure!(LAWSHE_MIN_CVR == 0.75, "gate at {LAWSHE_MIN_CVR}");

    let mut ratings = Vec::new();
    let mut groups = GroupMap::default();
    for (item, essential) in [("i7", 7), ("i6", 6), ("i8", 8)] {
        groups.insert(item, "g");
        for r in 0..8 {
            ratings.push(ExpertRating {
                rater_id: format!("R{r}"),
                item_id: item.into(),
                necessity: if r < essential { 1 } else { 2 },
                options_rationality: 4,
                scoring_rationality: 4,
                overall: 1,
            });
        }
    }
    let agg = aggregate_ratings(&ratings, &groups).map_err(|e| e.to_string())?;
    let flags: Vec<(f64, bool)> = agg
        .summaries
        .iter()
        .map(|s| (s.cvr, flag_item(s)))
        .collect();
    ensure!(
        flags == vec![(0.75, true), (0.5, false), (1.0, true)],
        "gate outcomes {flags:?}"
    );
    Ok("cvr(7,8)=0.75, cvr(4,8)=0, gate at >= 0.75".into())
}

fn c2_mtmm() -> Outcome {
    let v: serde_json::Value = serde_json::from_str(&read_fixture("mtmm_reference.json")).unwrap();
    let labels: Vec<String> = serde_json::from_value(v["labels"].clone()).unwrap();
    let lower: Vec<Vec<f64>> = serde_json::from_value(v["lower"].clone()).unwrap();
    let table = CorrelationTable::mtmm_from_lower(labels, &lower).map_err(|e| e.to_string())?;
    let s = mtmm_summary(&table);

    // Direct recomputation from the lower triangle (row i is lower[i - 1]).
    let at = |i: usize, j: usize| lower[i - 1][j];
    let conv: Vec<f64> = (0..5).map(|f| at(5 + f, f)).collect();
    let mean = conv.iter().sum::<f64>() / 5.0;
    let sd = (conv.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / 4.0).sqrt();
    let block = |off: usize| {
        let mut v = Vec::new();
        for i in 1..5 {
            for j in 0..i {
                v.push(at(off + i, off + j).abs());
            }
        }
        v.iter().sum::<f64>() / v.len() as f64
    };
    let (d_sjt, d_lik) = (block(0), block(5));

    ensure!(
        close(s.convergent_mean, mean, 1e-12),
        "convergent mean {} vs {mean}",
        s.convergent_mean
    );
    ensure!(
        close(s.convergent_sd, sd, 1e-12),
        "convergent sd {} vs {sd}",
        s.convergent_sd
    );
    ensure!(
        close(s.discriminant_mean_abs[0], d_sjt, 1e-12),
        "SJT discriminant {:?}",
        s.discriminant_mean_abs
    );
    ensure!(
        close(s.discriminant_mean_abs[1], d_lik, 1e-12),
        "Likert discriminant {:?}",
        s.discriminant_mean_abs
    );

    ensure!(
        close(s.convergent_mean, 0.526, 0.0005),
        "convergent mean {}",
        s.convergent_mean
    );
    ensure!(
        close(s.convergent_mean, 0.53, 0.005),
        "convergent mean {} vs 0.53",
        s.convergent_mean
    );
    ensure!(
        close(s.convergent_sd, 0.143, 0.0005),
        "convergent sd {}",
        s.convergent_sd
    );
    ensure!(
        format!("{:.2}", s.convergent_sd) == "0.14",
        "sd rounds to {:.2}",
        s.convergent_sd
    );
    ensure!(
        close(s.discriminant_mean_abs[0], 0.384, 0.0005),
        "SJT {}",
        s.discriminant_mean_abs[0]
    );
    ensure!(
        format!("{:.2}", s.discriminant_mean_abs[0]) == "0.38",
        "SJT rounds wrong"
    );
    ensure!(
        close(s.discriminant_mean_abs[1], 0.496, 0.0005),
        "Likert {}",
        s.discriminant_mean_abs[1]
    );
    ensure!(
        format!("{:.2}", s.discriminant_mean_abs[1]) == "0.50",
        "Likert rounds wrong"
    );
    Ok(format!(
        "convergent {:.3} (sd {:.3}), discriminant SJT {:.3}, Likert {:.3}",
        s.convergent_mean, s.convergent_sd, s.discriminant_mean_abs[0], s.discriminant_mean_abs[1]
    ))
}

fn c3_tails() -> Outcome {
    let p1 = chi_square_sf(12.43, 5).map_err(|e| e.to_string())?;
    let p2 = chi_square_sf(16.47, 5).map_err(|e| e.to_string())?;
    ensure!((0.028..=0.030).contains(&p1), "chi2(12.43, 5) p = {p1}");
    ensure!((0.005..=0.007).contains(&p2), "chi2(16.47, 5) p = {p2}");
    Ok(format!("p(12.43) = {p1:.4}, p(16.47) = {p2:.4}"))
}

/// Brute-force null distribution of U for `b`: every assignment of the pooled
/// midranks to `b` is equally likely.
fn brute_u(a: &[f64], b: &[f64]) -> BTreeMap<i64, f64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|x| {
            let below = pooled.iter().filter(|y| *y < x).count() as f64;
            let equal = pooled.iter().filter(|y| *y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let nb = b.len();
    let mut counts: BTreeMap<i64, f64> = BTreeMap::new();
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != nb {
            continue;
        }
        let r: f64 = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ranks[i])
            .sum();
        let u2 = (2.0 * (r - (nb * (nb + 1)) as f64 / 2.0)).round() as i64;
        *counts.entry(u2).or_default() += 1.0;
        total += 1.0;
    }
    counts.values_mut().for_each(|c| *c /= total);
    counts
}

fn brute_p(a: &[f64], b: &[f64], observed_u: f64) -> f64 {
    let mean2 = (a.len() * b.len()) as i64;
    let obs = (2.0 * observed_u).round() as i64 - mean2;
    brute_u(a, b)
        .iter()
        .filter(|(u2, _)| (**u2 - mean2).abs() >= obs.abs())
        .map(|(_, p)| p)
        .sum()
}

fn c4_exact_mw() -> Outcome {
    let s = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0];
    let r = mann_whitney(&s, &s, MwMode::Exact).map_err(|e| e.to_string())?;
    ensure!(r.p_value == 1.0, "identical 7 v 7 p = {}", r.p_value);
    let dist = exact_u_distribution(&s, &s).map_err(|e| e.to_string())?;
    let sum: f64 = dist.iter().map(|(_, p)| p).sum();
    ensure!(close(sum, 1.0, 1e-12), "distribution sums to {sum}");
    let brute = brute_u(&s, &s);
    ensure!(
        brute.len() == dist.len(),
        "support sizes {} vs {}",
        dist.len(),
        brute.len()
    );
    for (u, p) in &dist {
        let q = brute
            .get(&((2.0 * u).round() as i64))
            .copied()
            .unwrap_or(0.0);
        ensure!(close(*p, q, 1e-12), "P(U = {u}) = {p} vs brute {q}");
    }

    let constant = [2.0; 7];
    let r = mann_whitney(&constant, &constant, MwMode::Exact).map_err(|e| e.to_string())?;
    ensure!(r.p_value == 1.0, "all-tied 7 v 7 p = {}", r.p_value);

    let (a, b) = ([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
    let r = mann_whitney(&a, &b, MwMode::Exact).map_err(|e| e.to_string())?;
    let oracle = brute_p(&a, &b, r.statistic);
    ensure!(close(oracle, 0.1, 1e-12), "brute-force oracle {oracle}");
    ensure!(
        close(r.p_value, oracle, 1e-12),
        "exact p {} vs oracle {oracle}",
        r.p_value
    );
    Ok(format!(
        "identical p = 1.000, sum = {sum:.15}, {{1,2,3}} v {{4,5,6}} p = {:.3}",
        r.p_value
    ))
}

fn tie_free<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| i as f64 + rng.random::<f64>() * 0.5)
        .collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

fn c5_rank_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (na, nb) = (rng.random_range(2..25), rng.random_range(2..25));
        let pooled = tie_free(&mut rng, na + nb);
        let (a, b) = pooled.split_at(na);
        let sample = GroupedSample::new(vec![("a".into(), a.to_vec()), ("b".into(), b.to_vec())])
            .map_err(|e| e.to_string())?;
        let h = kruskal_wallis(&sample)
            .map_err(|e| e.to_string())?
            .statistic;
        let mw = mann_whitney(a, b, MwMode::Asymptotic).map_err(|e| e.to_string())?;
        let z = mw.z.ok_or("no z")?;
        let dunn = dunn_posthoc(&sample, Adjustment::None).map_err(|e| e.to_string())?;
        ensure!(dunn.len() == 1, "{} Dunn pairs", dunn.len());
        let dh = (h - z * z).abs();
        let dp = (dunn[0].p_raw - mw.p_value).abs();
        ensure!(dh <= 1e-9, "H = {h} vs z^2 = {} (n = {na}, {nb})", z * z);
        ensure!(
            dp <= 1e-9,
            "Dunn p {} vs MW p {}",
            dunn[0].p_raw,
            mw.p_value
        );
        worst = (worst.0.max(dh), worst.1.max(dp));
    }
    Ok(format!(
        "200 instances, max |H - z^2| = {:.1e}, max |dp| = {:.1e}",
        worst.0, worst.1
    ))
}

fn random_matrix<R: Rng>(rng: &mut R) -> ScoreMatrix {
    let n = rng.random_range(10..80);
    let k = rng.random_range(2..12);
    let cells: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let theta: f64 = rng.random_range(-2.0..2.0);
            (0..k)
                .map(|_| u8::from(rng.random::<f64>() < 1.0 / (1.0 + (-theta).exp())))
                .collect()
        })
        .collect();
    ScoreMatrix::new(
        Facet::Compliance,
        (0..n).map(|i| format!("p{i}")).collect(),
        (0..k).map(|j| format!("i{j}")).collect(),
        cells,
    )
    .unwrap()
}

fn c6_reliability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    let mut worst = 0.0f64;
    while checked < 100 {
        let m = random_matrix(&mut rng);
        let half = |odd: bool| -> Vec<f64> {
            m.cells
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| (j % 2 == 0) == odd)
                        .map(|(_, c)| f64::from(*c))
                        .sum()
                })
                .collect()
        };
        let (Ok(g), Ok(a)) = (
            guttman_split_half(&m, &Split::OddEven),
            alpha_from_columns(&[half(true), half(false)]),
        ) else {
            continue;
        };
        worst = worst.max((g - a).abs());
        ensure!(close(g, a, 1e-12), "guttman {g} vs alpha on halves {a}");
        checked += 1;
    }

    for _ in 0..100 {
        let n = rng.random_range(3..60);
        let test: Vec<f64> = (0..n).map(|_| rng.random_range(0..9) as f64).collect();
        let retest: Vec<f64> = test
            .iter()
            .map(|t| t + rng.random_range(-2..=2) as f64)
            .collect();
        if test.iter().all(|t| *t == test[0]) {
            continue;
        }
        for model in [
            IccModel::TwoWayRandomAgreement,
            IccModel::TwoWayMixedConsistency,
        ] {
            let v = icc(&test, &test, model).map_err(|e| e.to_string())?;
            ensure!(close(v, 1.0, 1e-9), "{model:?} on identical sessions = {v}");
        }
        let Ok(base) = icc(&test, &retest, IccModel::TwoWayMixedConsistency) else {
            continue;
        };
        let shift = rng.random_range(-5.0..5.0);
        let moved: Vec<f64> = retest.iter().map(|r| r + shift).collect();
        let v = icc(&test, &moved, IccModel::TwoWayMixedConsistency).map_err(|e| e.to_string())?;
        ensure!(close(v, base, 1e-9), "ICC(3,1) {base} shifts to {v}");
    }
    Ok(format!(
        "100 matrices, max |guttman - alpha| = {worst:.1e}; ICC identities hold"
    ))
}

fn c7_alpha_recovery() -> Outcome {
    let config = SimConfig::from_json(&read_fixture("alpha075.json")).map_err(|e| e.to_string())?;
    let bank = synthetic_bank(8);
    let mut oracle = BTreeMap::new();
    for f in Facet::ALL {
        let e = expected_alpha(&config, f).map_err(|e| e.to_string())?;
        ensure!(
            (0.72..=0.78).contains(&e.alpha),
            "{f} oracle alpha {}",
            e.alpha
        );
        oracle.insert(f, e.alpha);
    }
    let mut sums: BTreeMap<Facet, f64> = BTreeMap::new();
    const RUNS: u64 = 100;
    for r in 0..RUNS {
        let mut c = config.clone();
        c.seed = config.seed.wrapping_add(r);
        c.n_participants = 443;
        let out = simulate(&c, &bank).map_err(|e| e.to_string())?;
        let build =
            build_score_matrix(&out.records, &bank, Session::Test).map_err(|e| e.to_string())?;
        for (f, m) in &build.matrices {
            ensure!(
                m.n_persons() == 443 && m.n_items() == 8,
                "{f}: {} x {}",
                m.n_persons(),
                m.n_items()
            );
            *sums.entry(*f).or_default() += cronbach_alpha(m).map_err(|e| e.to_string())?;
        }
    }
    let mut worst = 0.0f64;
    for f in Facet::ALL {
        let mean = sums[&f] / RUNS as f64;
        let d = (mean - oracle[&f]).abs();
        ensure!(
            d <= 0.03,
            "{f}: mean alpha {mean:.4} vs oracle {:.4}",
            oracle[&f]
        );
        worst = worst.max(d);
    }
    let o = oracle[&Facet::SelfConsciousness];
    Ok(format!(
        "oracle {o:.4}, 100 runs x 5 facets, max |mean - oracle| = {worst:.4}"
    ))
}

fn c8_parser() -> Outcome {
    let expected: BTreeMap<Label, u8> = Label::ALL.into_iter().zip([1, 1, 0, 0]).collect();
    let en = parse_items(&read_fixture("movie_en.txt"), Facet::SelfConsciousness);
    ensure!(
        en.issues.is_empty() && en.items.len() == 1,
        "English: {:?}",
        en.issues
    );
    ensure!(
        en.items[0].scoring_key == expected,
        "English key {:?}",
        en.items[0].scoring_key
    );

    let zh_config = ParserConfig {
        rules: ItemRules::with_sentinel("你会怎么做？"),
        ..ParserConfig::default()
    };
    let zh = parse_items_with(
        &read_fixture("movie_zh.txt"),
        Facet::SelfConsciousness,
        &zh_config,
    );
    ensure!(
        zh.issues.is_empty() && zh.items.len() == 1,
        "Chinese: {:?}",
        zh.issues
    );
    ensure!(
        zh.items[0].scoring_key == expected,
        "Chinese key {:?}",
        zh.items[0].scoring_key
    );
    for line in [
        "Scoring: A: 1 point; B: 1 point; C: 0 points; D: 0 points.",
        "计分：A: 1 分； B: 1 分； C: 0 分； D: 0 分。",
        "计分: A: 1分; B: 1分; C: 0分; D: 0分。",
    ] {
        let key = parse_scoring_line(line).map_err(|e| format!("{line}: {e:?}"))?;
        ensure!(key == expected, "{line} -> {key:?}");
    }

    let three = read_fixture("movie_en.txt").replace("C: 0 points;", "C: 1 point;");
    let out = parse_items(&three, Facet::SelfConsciousness);
    ensure!(out.items.is_empty(), "3x1 block accepted");
    ensure!(
        out.issues.iter().any(|i| i.code == IssueCode::ScoringNot22),
        "3x1 issues {:?}",
        out.issues
    );

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut total = 0;
    for f in Facet::ALL {
        let items: Vec<_> = (1..=200).map(|n| random_item(&mut rng, f, n)).collect();
        let parsed = parse_items(&render_items(&items), f);
        ensure!(parsed.issues.is_empty(), "{f}: {:?}", parsed.issues.first());
        ensure!(parsed.items == items, "{f}: round trip differs");
        total += items.len();
    }
    Ok(format!(
        "movie-theater item (English and Chinese) keyed {{A:1,B:1,C:0,D:0}}, 3x1 rejected, {total} items round-trip"
    ))
}

fn row_ints(t: &Table, label: &str) -> Vec<i64> {
    t.find_row(label)
        .map(|r| {
            r.cells
                .iter()
                .filter_map(|c| match c {
                    Cell::Int(v) => Some(*v),
                    _ => None,
                })
                .collect()
        })
        .unwrap_or_default()
}

fn c9_end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut cfg = RunConfig::default();
    cfg.gateway.mock = Some(fixture("mock.json"));
    let gen = run_generate(&cfg, &dir.path().join("gen")).map_err(|e| e.to_string())?;
    ensure!(gen.bank.items.len() == 40, "{} items", gen.bank.items.len());
    for f in Facet::ALL {
        let n = gen.bank.facet_items(f).count();
        ensure!(n == 8, "{f}: {n} items");
    }

    let mut dfs = Vec::new();
    for design in ["temperature", "prompt"] {
        let mut cfg = RunConfig::default();
        cfg.files.ratings = Some(fixture(&format!("expert_designs/{design}.ratings.csv")));
        cfg.files.groups = Some(fixture(&format!("expert_designs/{design}.groups.csv")));
        let report = run_cv(&cfg, &dir.path().join(design)).map_err(|e| e.to_string())?;
        let t = report
            .group_comparison
            .first()
            .ok_or("no comparison table")?;
        ensure!(
            t.columns.len() == 4,
            "{design}: {} indicator columns",
            t.columns.len()
        );
        ensure!(
            t.find_row("Chi-Square").is_some(),
            "{design}: no Chi-Square row"
        );
        ensure!(
            t.find_row("Asymptotic significance value p").is_some(),
            "{design}: no p row"
        );
        dfs.push(row_ints(t, "df"));
    }
    ensure!(dfs[0] == vec![5; 4], "six-group df {:?}", dfs[0]);
    ensure!(dfs[1] == vec![4; 4], "five-group df {:?}", dfs[1]);

    let mut cfg = RunConfig::default();
    cfg.files.ratings = Some(fixture("expert_designs/stability.ratings.csv"));
    cfg.files.groups = Some(fixture("expert_designs/stability.groups.csv"));
    let report = run_cv(&cfg, &dir.path().join("stability")).map_err(|e| e.to_string())?;
    let t = report.stability.first().ok_or("no stability table")?;
    for row in [
        "Time1",
        "Time2",
        "Mann-Whitney U",
        "Standardized test statistic z",
        "Exact significance value p",
    ] {
        ensure!(t.find_row(row).is_some(), "stability table lacks {row}");
    }
    Ok("40-item bank, df 5 and df 4 comparisons, Time1 vs Time2 exact report".into())
}

fn c10_inclusion() -> Outcome {
    let cases: [(&str, u32, bool, [u64; 2]); 8] = [
        ("age17", 17, true, [3000, 3000]),
        ("age18", 18, true, [3000, 3000]),
        ("age60", 60, true, [3000, 3000]),
        ("age61", 61, true, [3000, 3000]),
        ("rt1999", 30, true, [1998, 2000]),
        ("rt2001", 30, true, [2000, 2002]),
        ("attn", 30, false, [3000, 3000]),
        ("all3", 16, false, [500, 700]),
    ];
    let mut meta = Vec::new();
    let mut records = Vec::new();
    for (id, age, attention, rts) in cases {
        meta.push(ParticipantMeta {
            participant_id: id.into(),
            age,
            attention_passed: attention,
            likert: BTreeMap::new(),
            criterion: BTreeMap::new(),
        });
        for (j, rt) in rts.into_iter().enumerate() {
            records.push(ResponseRecord {
                participant_id: id.into(),
                item_id: format!("compliance-{}", j + 1),
                choice: "A".into(),
                response_time_ms: rt,
                session: Session::Test,
            });
        }
        records.push(ResponseRecord {
            participant_id: id.into(),
            item_id: "compliance-1".into(),
            choice: "A".into(),
            response_time_ms: 100,
            session: Session::Retest,
        });
    }
    let out = apply_inclusion_filters(&records, &meta, &InclusionCriteria::default())
        .map_err(|e| e.to_string())?;
    use ExclusionReason::*;
    let expected: Vec<(&str, Vec<ExclusionReason>)> = vec![
        ("age17", vec![Age]),
        ("age61", vec![Age]),
        ("rt1999", vec![Rt]),
        ("attn", vec![Attention]),
        ("all3", vec![Age, Attention, Rt]),
    ];
    ensure!(
        out.retained == ["age18", "age60", "rt2001"],
        "retained {:?}",
        out.retained
    );
    let got: Vec<(&str, Vec<ExclusionReason>)> = out
        .excluded
        .iter()
        .map(|(id, r)| (id.as_str(), r.clone()))
        .collect();
    ensure!(got == expected, "excluded {got:?}");
    Ok(
        "ages 17/61 and RT 1999 ms excluded, 18/60 and RT 2001 ms retained, attention enforced"
            .into(),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("CVR exactness", c1_cvr, Duration::from_secs(1)),
        ("MTMM summary", c2_mtmm, Duration::from_secs(1)),
        ("Chi-square tail values", c3_tails, Duration::from_secs(1)),
        ("Exact Mann-Whitney", c4_exact_mw, Duration::from_secs(1)),
        (
            "Rank-test cross-identities",
            c5_rank_identities,
            Duration::from_secs(5),
        ),
        (
            "Reliability identities",
            c6_reliability,
            Duration::from_secs(5),
        ),
        ("Alpha recovery", c7_alpha_recovery, Duration::from_secs(60)),
        ("Parser fidelity", c8_parser, Duration::from_secs(5)),
        ("Study-design shape", c9_end_to_end, Duration::from_secs(30)),
        ("Inclusion filters", c10_inclusion, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > *budget {
            outcome = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
