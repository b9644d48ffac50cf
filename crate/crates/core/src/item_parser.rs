//! Parses raw completion text into [`SjtItem`]s.
//!
//! Completions are split into scenario blocks, either at `Scenario N:` /
//! `情境N：` headers or, when no header is present, at delimiter fences
//! (`###`). Each block yields one valid item or at least one [`ParseIssue`].
//! Matching runs on a width-folded copy of each line; stored text and issue
//! excerpts are always slices of the original input.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::item_model::{
    validate_item_with, Facet, IssueCode, ItemOption, ItemRules, Label, Provenance, SjtItem,
};
use crate::text::{fold_width, original_offset};

static HEADER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^[#*>\s]*(?:scenario|situation|情境|情景)\s*(?:[0-9]+|[一二三四五六七八九十百]+)\s*(?:\*\*)?\s*[:.)]?\s*(?:\*\*)?\s*",
    )
    .unwrap()
});
static TRAIT_LINE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^[#*\s]*(?:trait|特质)\s*:").unwrap());
static HEADER_KEYWORD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)scenario|situation|情境|情景").unwrap());
static OPTION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*(?:\*\*)?\(?([A-Ha-h])\s*(?:\*\*)?\s*[.):、]\s*(?:\*\*)?\s*").unwrap()
});
static SCORING: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^\s*(?:\*\*)?(?:scoring|scores?|key|计分|评分|評分)\s*(?:\*\*)?\s*:\s*(?:\*\*)?",
    )
    .unwrap()
});
static SCORE_TOKEN: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)([A-Za-z])\s*[:=]?\s*(-?[0-9]+(?:\.[0-9]+)?)\s*(?:points?|pts?|分)?").unwrap()
});

/// One parser finding, tied to the 1-based block it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseIssue {
    pub scenario_index: usize,
    pub code: IssueCode,
    /// Offending slice of the input text.
    pub excerpt: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseOutput {
    pub items: Vec<SjtItem>,
    pub issues: Vec<ParseIssue>,
    /// Number of scenario blocks detected.
    pub block_count: usize,
    /// Prose after each block's scoring line (e.g. requested rationales).
    pub trailing: Vec<(usize, String)>,
}

impl ParseOutput {
    /// Number of blocks that produced at least one issue.
    pub fn rejected_blocks(&self) -> usize {
        let mut idx: Vec<usize> = self.issues.iter().map(|i| i.scenario_index).collect();
        idx.dedup();
        idx.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParserConfig {
    pub rules: ItemRules,
    pub delimiter: String,
    /// Provenance stamped on every accepted item.
    pub provenance: Provenance,
}

impl Default for ParserConfig {
    fn default() -> Self {
        ParserConfig {
            rules: ItemRules::default(),
            delimiter: "###".to_string(),
            provenance: Provenance::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringLineError {
    /// The token that could not be read.
    pub token: String,
    pub reason: String,
}

/// Reads a scoring line such as `Scoring: A: 1 point; B: 1 point; C: 0 points; D: 0 points.`
///
/// Accepts `;`/`,`/whitespace separators, `point(s)` and `分` suffixes and
/// full-width punctuation. Labels outside A–D, scores outside {0,1},
/// duplicates and stray tokens are errors.
pub fn parse_scoring_line(line: &str) -> Result<BTreeMap<Label, u8>, ScoringLineError> {
    let folded = fold_width(line);
    let body_start = SCORING.find(&folded).map(|m| m.end()).unwrap_or(0);
    let body = &folded[body_start..];
    let token_of = |start: usize, end: usize| -> String {
        let s = original_offset(line, &folded, body_start + start);
        let e = original_offset(line, &folded, body_start + end);
        line[s..e].trim().to_string()
    };

    let mut map = BTreeMap::new();
    let mut cursor = 0;
    for caps in SCORE_TOKEN.captures_iter(body) {
        let whole = caps.get(0).unwrap();
        check_gap(&body[cursor..whole.start()]).map_err(|()| ScoringLineError {
            token: token_of(cursor, whole.start()),
            reason: "unrecognized text".into(),
        })?;
        cursor = whole.end();

        let err = |reason: &str| ScoringLineError {
            token: token_of(whole.start(), whole.end()),
            reason: reason.to_string(),
        };
        let letter = caps[1].chars().next().unwrap();
        let label = Label::from_char(letter).ok_or_else(|| err("label outside A-D"))?;
        let value = match &caps[2] {
            "0" => 0u8,
            "1" => 1u8,
            _ => return Err(err("score outside {0,1}")),
        };
        if map.insert(label, value).is_some() {
            return Err(err("label scored twice"));
        }
    }
    check_gap(&body[cursor..]).map_err(|()| ScoringLineError {
        token: token_of(cursor, body.len()),
        reason: "unrecognized text".into(),
    })?;
    if map.is_empty() {
        return Err(ScoringLineError {
            token: line.trim().to_string(),
            reason: "no label scores found".into(),
        });
    }
    Ok(map)
}

fn check_gap(gap: &str) -> Result<(), ()> {
    let rest: String = gap
        .chars()
        .filter(|c| !matches!(c, ';' | ',' | '.' | '*' | '|') && !c.is_whitespace())
        .collect();
    let lower = rest.to_lowercase();
    let lower = lower.trim_start_matches("and");
    if lower.is_empty() {
        Ok(())
    } else {
        Err(())
    }
}

/// Parses with the default configuration.
pub fn parse_items(raw: &str, facet: Facet) -> ParseOutput {
    parse_items_with(raw, facet, &ParserConfig::default())
}

#[derive(Default)]
struct Block<'a> {
    header: Option<&'a str>,
    lines: Vec<&'a str>,
}

pub fn parse_items_with(raw: &str, facet: Facet, config: &ParserConfig) -> ParseOutput {
    let blocks = split_blocks(raw, &config.delimiter);
    let mut out = ParseOutput {
        items: Vec::new(),
        issues: Vec::new(),
        block_count: blocks.len(),
        trailing: Vec::new(),
    };
    for (i, block) in blocks.iter().enumerate() {
        let index = i + 1;
        let parsed = parse_block(block, index, facet, config);
        if let Some(trailing) = parsed.trailing {
            out.trailing.push((index, trailing));
        }
        if parsed.issues.is_empty() {
            out.items.extend(parsed.item);
        } else {
            out.issues.extend(parsed.issues);
        }
    }
    out
}

fn is_delimiter(line: &str, delimiter: &str) -> bool {
    !delimiter.is_empty() && line.trim() == delimiter
}

/// Strips a leading `Trait: ...` prefix. Returns `None` when the whole line
/// is a trait label.
fn strip_trait_prefix(line: &str) -> Option<&str> {
    let folded = fold_width(line);
    if !TRAIT_LINE.is_match(&folded) {
        return Some(line);
    }
    HEADER_KEYWORD.find(&folded).map(|m| {
        let start = original_offset(line, &folded, m.start());
        &line[start..]
    })
}

fn looks_like_item_content(lines: &[&str]) -> bool {
    lines.iter().any(|l| {
        let f = fold_width(l);
        OPTION.is_match(&f) || SCORING.is_match(&f)
    })
}

fn split_blocks<'a>(raw: &'a str, delimiter: &str) -> Vec<Block<'a>> {
    let lines: Vec<&str> = raw
        .lines()
        .filter(|l| !is_delimiter(l, delimiter))
        .filter_map(strip_trait_prefix)
        .collect();
    let has_header = lines.iter().any(|l| HEADER.is_match(&fold_width(l)));

    if has_header {
        let mut blocks = Vec::new();
        let mut preamble = Vec::new();
        let mut current: Option<Block> = None;
        for line in lines {
            if HEADER.is_match(&fold_width(line)) {
                if let Some(b) = current.take() {
                    blocks.push(b);
                }
                current = Some(Block {
                    header: Some(line),
                    lines: Vec::new(),
                });
            } else if let Some(b) = current.as_mut() {
                b.lines.push(line);
            } else {
                preamble.push(line);
            }
        }
        blocks.extend(current);
        if looks_like_item_content(&preamble) {
            blocks.insert(
                0,
                Block {
                    header: None,
                    lines: preamble,
                },
            );
        }
        return blocks;
    }

    let has_fences = raw.lines().any(|l| is_delimiter(l, delimiter));
    let mut segments: Vec<Vec<&str>> = vec![Vec::new()];
    for line in raw.lines() {
        if is_delimiter(line, delimiter) {
            segments.push(Vec::new());
        } else if let Some(l) = strip_trait_prefix(line) {
            segments.last_mut().unwrap().push(l);
        }
    }
    segments
        .into_iter()
        .filter(|seg| looks_like_item_content(seg))
        .map(|lines| Block {
            // A fenced segment does not need a header; an unfenced one does.
            header: if has_fences { Some("") } else { None },
            lines,
        })
        .collect()
}

struct ParsedBlock {
    item: Option<SjtItem>,
    issues: Vec<ParseIssue>,
    trailing: Option<String>,
}

#[derive(PartialEq)]
enum Stage {
    Scenario,
    Options,
    Trailing,
}

fn parse_block(block: &Block, index: usize, facet: Facet, config: &ParserConfig) -> ParsedBlock {
    let mut issues = Vec::new();
    let first_line = block
        .header
        .filter(|h| !h.trim().is_empty())
        .or_else(|| block.lines.iter().copied().find(|l| !l.trim().is_empty()))
        .unwrap_or("")
        .trim();
    let mut issue = |code: IssueCode, excerpt: &str, message: String| {
        if !issues.iter().any(|i: &ParseIssue| i.code == code) {
            issues.push(ParseIssue {
                scenario_index: index,
                code,
                excerpt: excerpt.trim().to_string(),
                message,
            });
        }
    };

    if block.header.is_none() {
        issue(
            IssueCode::NoScenarioHeader,
            first_line,
            "block has no `Scenario N:` header".into(),
        );
    }

    let mut scenario_lines: Vec<&str> = Vec::new();
    if let Some(header) = block.header {
        let folded = fold_width(header);
        if let Some(m) = HEADER.find(&folded) {
            let start = original_offset(header, &folded, m.end());
            let rest = header[start..].trim().trim_end_matches("**").trim();
            if !rest.is_empty() {
                scenario_lines.push(rest);
            }
        }
    }

    let mut options: Vec<(char, String, &str)> = Vec::new();
    let mut scoring: Option<(&str, Result<BTreeMap<Label, u8>, ScoringLineError>)> = None;
    let mut scoring_before_options: Option<&str> = None;
    let mut trailing: Vec<&str> = Vec::new();
    let mut stage = Stage::Scenario;

    for &line in &block.lines {
        if line.trim().is_empty() {
            continue;
        }
        if stage == Stage::Trailing {
            trailing.push(line.trim());
            continue;
        }
        let folded = fold_width(line);
        if SCORING.is_match(&folded) {
            if options.is_empty() {
                scoring_before_options.get_or_insert(line);
                continue;
            }
            scoring = Some((line, parse_scoring_line(line)));
            stage = Stage::Trailing;
            continue;
        }
        if let Some(caps) = OPTION.captures(&folded) {
            let letter = caps[1].chars().next().unwrap().to_ascii_uppercase();
            let start = original_offset(line, &folded, caps.get(0).unwrap().end());
            let text = line[start..].trim();
            options.push((letter, text.to_string(), line));
            stage = Stage::Options;
            continue;
        }
        match stage {
            Stage::Scenario => scenario_lines.push(line.trim()),
            Stage::Options => {
                let last = options.last_mut().unwrap();
                if !last.1.is_empty() {
                    last.1.push(' ');
                }
                last.1.push_str(line.trim());
            }
            Stage::Trailing => unreachable!(),
        }
    }

    let scenario = scenario_lines.join("\n");

    let mut bad_option_label = false;
    let mut item_options = Vec::new();
    for (letter, text, line) in &options {
        match Label::from_char(*letter) {
            Some(label) => item_options.push(ItemOption {
                label,
                text: text.clone(),
            }),
            None => {
                bad_option_label = true;
                issue(
                    IssueCode::BadLabel,
                    line,
                    format!("option label {letter} is outside A-D"),
                );
            }
        }
    }
    if bad_option_label || options.len() != item_options.len() {
        issue(
            IssueCode::OptionCount,
            first_line,
            format!("expected 4 options A-D, found {}", options.len()),
        );
    }

    let mut key_ok = false;
    let mut scoring_key = BTreeMap::new();
    match &scoring {
        None => {
            let excerpt = scoring_before_options.unwrap_or(first_line);
            let message = if scoring_before_options.is_some() {
                "scoring line precedes the options".to_string()
            } else {
                "no scoring line".to_string()
            };
            issue(IssueCode::MissingScoring, excerpt, message);
        }
        Some((line, Err(e))) => issue(
            IssueCode::BadLabel,
            line,
            format!("cannot read `{}`: {}", e.token, e.reason),
        ),
        Some((_, Ok(map))) => {
            scoring_key = map.clone();
            key_ok = true;
        }
    }

    let candidate = SjtItem {
        item_id: format!("{}-{}", facet.id(), index),
        facet,
        scenario,
        options: item_options,
        scoring_key,
        provenance: config.provenance.clone(),
    };
    let validation = validate_item_with(&candidate, &config.rules);
    let scoring_line = scoring.as_ref().map(|(l, _)| *l).unwrap_or(first_line);
    for v in &validation.violations {
        match v.code {
            IssueCode::OptionCount => issue(IssueCode::OptionCount, first_line, v.detail.clone()),
            IssueCode::DuplicateLabel => issue(IssueCode::BadLabel, first_line, v.detail.clone()),
            IssueCode::EmptyOption => {
                let excerpt = options
                    .iter()
                    .find(|(_, t, _)| t.trim().is_empty())
                    .map(|(_, _, l)| *l)
                    .unwrap_or(first_line);
                issue(IssueCode::EmptyOption, excerpt, v.detail.clone())
            }
            IssueCode::ScoringKeyMismatch if key_ok => {
                issue(IssueCode::MissingScoring, scoring_line, v.detail.clone())
            }
            IssueCode::ScoringNot22 | IssueCode::BadLabel if key_ok => {
                issue(v.code, scoring_line, v.detail.clone())
            }
            IssueCode::EmptyScenario | IssueCode::NoQuestionSentinel => {
                let excerpt = scenario_lines.last().copied().unwrap_or(first_line);
                issue(IssueCode::NoQuestionSentinel, excerpt, v.detail.clone())
            }
            _ => {}
        }
    }

    let ok = issues.is_empty();
    ParsedBlock {
        item: ok.then_some(candidate),
        issues,
        trailing: (!trailing.is_empty()).then(|| trailing.join("\n")),
    }
}

/// Renders an item in the worked-example layout the parser reads back.
pub fn render_item(item: &SjtItem, number: usize) -> String {
    let mut out = format!("Scenario {number}: {}\n", item.scenario);
    for option in &item.options {
        out.push_str(&format!("{}. {}\n", option.label, option.text));
    }
    out.push_str(&render_scoring(item));
    out.push('\n');
    out
}

/// `Scoring: A: 1 point; B: 1 point; C: 0 points; D: 0 points.`
pub fn render_scoring(item: &SjtItem) -> String {
    let parts: Vec<String> = item
        .scoring_key
        .iter()
        .map(|(label, v)| {
            let unit = if *v == 1 { "point" } else { "points" };
            format!("{label}: {v} {unit}")
        })
        .collect();
    format!("Scoring: {}.", parts.join("; "))
}

/// Renders items as consecutive numbered scenarios starting at 1.
pub fn render_items(items: &[SjtItem]) -> String {
    items
        .iter()
        .enumerate()
        .map(|(i, item)| render_item(item, i + 1))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item_model::movie_theater_item;

    const MOVIE: &str = "Scenario 1: You are seated in the middle of one of the rows of a nearly full movie theater. Shortly after the movie starts, you realize you've entered the wrong screening room and are sitting in the wrong one. What would you do?
A. I wouldn't switch screening rooms because asking half the row to stand up during the movie would make me feel uncomfortable.
B. I would stay until the movie ends because I'd feel embarrassed if others saw me leaving during the screening.
C. I would get up and go to the correct screening room.
D. I would watch the beginning of the movie and then decide whether to switch to the correct screening room.
Scoring: A: 1 point; B: 1 point; C: 0 points; D: 0 points.
";

    fn key(values: [u8; 4]) -> BTreeMap<Label, u8> {
        Label::ALL.into_iter().zip(values).collect()
    }

    #[test]
    fn scoring_line_english_and_chinese() {
        assert_eq!(
            parse_scoring_line("Scoring: A: 1 point; B: 1 point; C: 0 points; D: 0 points.")
                .unwrap(),
            key([1, 1, 0, 0])
        );
        assert_eq!(
            parse_scoring_line("计分：A: 1 分；B: 1 分；C: 0 分；D: 0 分。").unwrap(),
            key([1, 1, 0, 0])
        );
        assert_eq!(
            parse_scoring_line("计分：Ａ：１分，Ｂ：０分，Ｃ：１分，Ｄ：０分").unwrap(),
            key([1, 0, 1, 0])
        );
        assert_eq!(
            parse_scoring_line("A:1 B:1 C:1 D:0").unwrap(),
            key([1, 1, 1, 0])
        );
    }

    #[test]
    fn scoring_line_rejects_out_of_domain() {
        let err = parse_scoring_line("A:2").unwrap_err();
        assert_eq!(err.token, "A:2");
        assert!(parse_scoring_line("Scoring: A: 1; E: 0").is_err());
        assert!(parse_scoring_line("Scoring: A: 1; A: 0").is_err());
        assert!(parse_scoring_line("Scoring: A: 1 point; whatever B: 0").is_err());
        assert!(parse_scoring_line("Scoring: none").is_err());
    }

    #[test]
    fn movie_theater_block_parses() {
        let out = parse_items(MOVIE, Facet::SelfConsciousness);
        assert!(out.issues.is_empty(), "{:?}", out.issues);
        assert_eq!(out.items.len(), 1);
        let item = &out.items[0];
        assert_eq!(item.scoring_key, key([1, 1, 0, 0]));
        assert_eq!(item.scenario, movie_theater_item().scenario);
        assert_eq!(item.item_id, "self_consciousness-1");
    }

    #[test]
    fn chinese_block_parses_with_chinese_sentinel() {
        let raw = "情境一：你坐在一个几乎满员的电影院中间。电影开始后不久，你发现你弄错了影厅。你会怎么做？\n\
                   A.我不会换影厅\nB.我会坐到电影结束\nC.我会站起来，去另一个影厅\nD.我会观看电影的开头\n\
                   计分：A: 1 分；B: 1 分；C: 0 分；D: 0 分。\n";
        let config = ParserConfig {
            rules: ItemRules::with_sentinel("你会怎么做？"),
            ..ParserConfig::default()
        };
        let out = parse_items_with(raw, Facet::SelfConsciousness, &config);
        assert!(out.issues.is_empty(), "{:?}", out.issues);
        assert_eq!(out.items[0].options[0].text, "我不会换影厅");
        assert_eq!(out.items[0].scoring_key, key([1, 1, 0, 0]));
    }

    #[test]
    fn three_options_is_option_count() {
        let raw = "Scenario 1: Something. What would you do?\nA. a\nB. b\nC. c\nScoring: A: 1; B: 1; C: 0\n";
        let out = parse_items(raw, Facet::Compliance);
        assert!(out.items.is_empty());
        assert!(out.issues.iter().any(|i| i.code == IssueCode::OptionCount));
    }

    #[test]
    fn two_blocks_one_rejected() {
        let bad = "Scenario 2: At work a colleague criticizes you. What would you do?\nA. a\nB. b\nC. c\nD. d\nScoring: A:1 B:1 C:1 D:0\n";
        let raw = format!("{MOVIE}\n{bad}");
        let out = parse_items(&raw, Facet::SelfConsciousness);
        assert_eq!(out.block_count, 2);
        assert_eq!(out.items.len(), 1);
        assert_eq!(out.issues.len(), 1);
        assert_eq!(out.issues[0].code, IssueCode::ScoringNot22);
        assert_eq!(out.issues[0].scenario_index, 2);
        assert!(raw.contains(&out.issues[0].excerpt));
    }

    #[test]
    fn missing_and_misplaced_scoring() {
        let raw = "Scenario 1: S. What would you do?\nA. a\nB. b\nC. c\nD. d\n";
        let out = parse_items(raw, Facet::Compliance);
        assert_eq!(out.issues[0].code, IssueCode::MissingScoring);

        let raw = "Scenario 1: S. What would you do?\nScoring: A: 1; B: 1; C: 0; D: 0\nA. a\nB. b\nC. c\nD. d\n";
        let out = parse_items(raw, Facet::Compliance);
        assert_eq!(out.issues.len(), 1);
        assert_eq!(out.issues[0].code, IssueCode::MissingScoring);
        assert!(out.issues[0].excerpt.starts_with("Scoring"));
    }

    #[test]
    fn sentinel_empty_option_and_bad_label() {
        let raw = "Scenario 1: You are on a bus.\nA. a\nB.\nC. c\nD. d\nScoring: A: 1; B: 1; C: 0; D: 0\n";
        let codes: Vec<IssueCode> = parse_items(raw, Facet::Compliance)
            .issues
            .iter()
            .map(|i| i.code)
            .collect();
        assert!(codes.contains(&IssueCode::NoQuestionSentinel));
        assert!(codes.contains(&IssueCode::EmptyOption));

        let raw = "Scenario 1: S. What would you do?\nA. a\nB. b\nC. c\nE. e\nScoring: A: 1; B: 1; C: 0; D: 0\n";
        let codes: Vec<IssueCode> = parse_items(raw, Facet::Compliance)
            .issues
            .iter()
            .map(|i| i.code)
            .collect();
        assert!(codes.contains(&IssueCode::BadLabel));
    }

    #[test]
    fn fenced_blocks_without_headers() {
        let body = "You are late. What would you do?\nA. a\nB. b\nC. c\nD. d\nScoring: A: 0; B: 1; C: 0; D: 1\n";
        let raw = format!("###\n{body}###\n{body}###\nThanks!\n");
        let out = parse_items(&raw, Facet::SelfDiscipline);
        assert_eq!(out.block_count, 2);
        assert_eq!(out.items.len(), 2);
        assert_eq!(out.items[1].scoring_key, key([0, 1, 0, 1]));
    }

    #[test]
    fn unfenced_headerless_text_needs_header() {
        let raw = "You are late. What would you do?\nA. a\nB. b\nC. c\nD. d\nScoring: A: 0; B: 1; C: 0; D: 1\n";
        let out = parse_items(raw, Facet::SelfDiscipline);
        assert_eq!(out.issues[0].code, IssueCode::NoScenarioHeader);
    }

    #[test]
    fn trailing_rationale_is_captured_not_an_issue() {
        let raw = format!(
            "Here are the items.\n\n{MOVIE}Rationale: options A and B show high self-consciousness.\n(2) Ideal score ...\n"
        );
        let out = parse_items(&raw, Facet::SelfConsciousness);
        assert!(out.issues.is_empty(), "{:?}", out.issues);
        assert_eq!(out.trailing.len(), 1);
        assert!(out.trailing[0].1.starts_with("Rationale"));
    }

    #[test]
    fn trait_prefix_and_markdown_headers() {
        let raw = format!(
            "Trait: self-consciousness (from neuroticism)\n**{}",
            MOVIE.replacen("Scenario 1:", "Scenario 1:**", 1)
        );
        let out = parse_items(&raw, Facet::SelfConsciousness);
        assert!(out.issues.is_empty(), "{:?}", out.issues);
        assert_eq!(out.items[0].scenario, movie_theater_item().scenario);

        let raw = format!("Trait: self-consciousness (from neuroticism) {MOVIE}");
        let out = parse_items(&raw, Facet::SelfConsciousness);
        assert_eq!(out.items.len(), 1);
    }

    #[test]
    fn wrapped_option_lines_are_joined() {
        let raw = "Scenario 1: S. What would you do?\nA. first half\nsecond half\nB. b\nC. c\nD. d\nScoring: A: 1; B: 1; C: 0; D: 0\n";
        let out = parse_items(raw, Facet::Compliance);
        assert_eq!(out.items[0].options[0].text, "first half second half");
    }

    #[test]
    fn empty_input() {
        let out = parse_items("", Facet::Compliance);
        assert!(out.items.is_empty() && out.issues.is_empty());
        assert_eq!(out.block_count, 0);
    }

    #[test]
    fn render_then_parse_is_identity() {
        let mut item = movie_theater_item();
        item.item_id = "self_consciousness-1".into();
        item.provenance = Provenance::default();
        let out = parse_items(&render_item(&item, 1), Facet::SelfConsciousness);
        assert_eq!(out.items, vec![item]);
    }
}
