//! Prompt assembly from a fixed strategy catalogue.
//!
//! A prompt is an ordered list of named sections. Which sections appear, and
//! in what order, is a static table per [`PromptVersion`]; the trait
//! definition, behavior lines and worked examples are injected from the
//! [`PromptSpec`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::item_model::{
    movie_theater_item, presentation_item, tram_item, Facet, Provenance, ProvenanceKind, SjtItem,
};
use crate::item_parser::render_items;

/// One of the nine prompt-writing strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct StrategyId(u8);

impl StrategyId {
    pub const COUNT: u8 = 9;

    pub fn new(id: u8) -> Option<Self> {
        (1..=Self::COUNT).contains(&id).then_some(StrategyId(id))
    }

    pub fn all() -> impl Iterator<Item = StrategyId> {
        (1..=Self::COUNT).map(StrategyId)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn description(self) -> &'static str {
        match self.0 {
            1 => "State the task first and restate it at the end.",
            2 => "Spell out context, desired outcome, format and style in detail.",
            3 => "Split the task into smaller numbered subtasks.",
            4 => "Ask for step-by-step reasoning (chain of thought).",
            5 => "Include worked examples.",
            6 => "Phrase instructions as what to do, not what to avoid.",
            7 => "Have the model take on an expert persona.",
            8 => "Use clean formatting with headings and separators such as ###.",
            _ => "Add an emotional appeal about the importance of the work.",
        }
    }
}

impl TryFrom<u8> for StrategyId {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        StrategyId::new(v).ok_or_else(|| format!("strategy id {v} outside 1..=9"))
    }
}

impl From<StrategyId> for u8 {
    fn from(s: StrategyId) -> u8 {
        s.0
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn strategy_set(ids: &[u8]) -> BTreeSet<StrategyId> {
    ids.iter().map(|&i| StrategyId(i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptVersion {
    V0,
    V1,
    V2,
}

impl PromptVersion {
    pub const ALL: [PromptVersion; 3] = [PromptVersion::V0, PromptVersion::V1, PromptVersion::V2];

    /// Strategies each version is declared to use.
    pub fn strategies(self) -> BTreeSet<StrategyId> {
        match self {
            PromptVersion::V0 => strategy_set(&[1, 5, 8]),
            PromptVersion::V1 => strategy_set(&[1, 2, 4, 5, 7, 8, 9]),
            PromptVersion::V2 => strategy_set(&[1, 2, 3, 4, 5, 6, 7, 8, 9]),
        }
    }

    pub fn sections(self) -> &'static [Section] {
        use Section::*;
        match self {
            PromptVersion::V0 => &[Task, Examples, Continuation],
            PromptVersion::V1 => &[
                Task,
                Persona,
                Definition,
                Behaviors,
                Constraints,
                Examples,
                Cot,
                Emotion,
                TaskRepeat,
            ],
            PromptVersion::V2 => &[
                Task,
                Definition,
                Persona,
                Constraints,
                Examples,
                Cot,
                Emotion,
                TaskRepeat,
            ],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PromptVersion::V0 => "v0",
            PromptVersion::V1 => "v1",
            PromptVersion::V2 => "v2",
        }
    }
}

impl fmt::Display for PromptVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptVersion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "v0" | "0" => Ok(PromptVersion::V0),
            "v1" | "1" => Ok(PromptVersion::V1),
            "v2" | "2" => Ok(PromptVersion::V2),
            other => Err(format!("unknown prompt version {other:?}")),
        }
    }
}

/// Named prompt sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Task,
    Persona,
    Definition,
    Behaviors,
    Constraints,
    Examples,
    Cot,
    Emotion,
    TaskRepeat,
    /// Empty scenario headers to be filled in (v0 only).
    Continuation,
}

pub const DEFAULT_DELIMITER: &str = "###";
pub const DEFAULT_EMOTIONAL_STIMULUS: &str = "Your work is very important to my research!";
pub const COT_CUE: &str = "Let's think";
const V1_COT: &str = "Let's think through this step by step. After generating the questions, \
    please explain: (1) Why you constructed them this way; (2) What the ideal score for each \
    option should be; (3) Why you believe this option should receive this score.";
const V2_COT: &str = "Let's think through this step by step. After generating the questions, \
    please explain the basic principles behind the scenario design and scoring for each option, \
    and relate them to the characteristics of {trait}.";

fn default_delimiter() -> String {
    DEFAULT_DELIMITER.into()
}
fn default_emotional_stimulus() -> String {
    DEFAULT_EMOTIONAL_STIMULUS.into()
}
fn default_language() -> String {
    "English".into()
}
fn default_sentinel() -> String {
    crate::item_model::DEFAULT_QUESTION_SENTINEL.into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub version: PromptVersion,
    #[serde(rename = "trait")]
    pub facet: Facet,
    pub trait_definition: String,
    #[serde(default)]
    pub behavior_descriptions: Vec<String>,
    pub examples: Vec<SjtItem>,
    pub target_scenario_count: usize,
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
    #[serde(default = "default_emotional_stimulus")]
    pub emotional_stimulus: String,
    /// `None` selects the version's built-in request; `{trait}` is substituted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cot_instruction: Option<String>,
    #[serde(default = "default_language")]
    pub language: String,
    #[serde(default = "default_sentinel")]
    pub question_sentinel: String,
    /// Optional explicit strategy set; must equal the version's set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategies: Option<BTreeSet<StrategyId>>,
}

impl PromptSpec {
    /// The built-in spec for a facet: its definition, behavior lines and
    /// worked examples, asking for seven new scenarios.
    pub fn default_for(version: PromptVersion, facet: Facet) -> Self {
        let mut examples = default_examples(facet);
        match version {
            PromptVersion::V0 => examples.truncate(1),
            PromptVersion::V1 => {}
            // v2 swaps the first example for a sharper one where available.
            PromptVersion::V2 => {
                if facet == Facet::SelfConsciousness {
                    examples[0] = tram_item();
                }
            }
        }
        PromptSpec {
            version,
            facet,
            trait_definition: facet.definition().into(),
            behavior_descriptions: match version {
                PromptVersion::V1 => default_behaviors(facet)
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                _ => Vec::new(),
            },
            examples,
            target_scenario_count: 7,
            delimiter: default_delimiter(),
            emotional_stimulus: default_emotional_stimulus(),
            cot_instruction: None,
            language: default_language(),
            question_sentinel: default_sentinel(),
            strategies: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, SpecError> {
        serde_json::from_str(s).map_err(|e| SpecError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes") + "\n"
    }

    /// Number of the last scenario the model is asked to reach.
    pub fn final_scenario(&self) -> usize {
        self.examples.len() + self.target_scenario_count
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let expected = self.version.strategies();
        if let Some(declared) = &self.strategies {
            if *declared != expected {
                return Err(SpecError::StrategyMismatch {
                    version: self.version,
                    declared: declared.iter().map(|s| s.get()).collect(),
                    expected: expected.iter().map(|s| s.get()).collect(),
                });
            }
        }
        if self.examples.is_empty() {
            return Err(SpecError::NoExamples);
        }
        if self.target_scenario_count < 1 {
            return Err(SpecError::BadTarget);
        }
        if self.version == PromptVersion::V1 && self.behavior_descriptions.is_empty() {
            return Err(SpecError::MissingBehaviors);
        }
        if self.version != PromptVersion::V1 && !self.behavior_descriptions.is_empty() {
            return Err(SpecError::UnexpectedBehaviors(self.version));
        }
        if self.trait_definition.trim().is_empty() && self.version != PromptVersion::V0 {
            return Err(SpecError::EmptyDefinition);
        }
        let d = self.delimiter.trim();
        if d.is_empty() || d.contains('\n') || d != self.delimiter {
            return Err(SpecError::BadDelimiter(self.delimiter.clone()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("{version} declares strategies {declared:?} but uses {expected:?}")]
    StrategyMismatch {
        version: PromptVersion,
        declared: Vec<u8>,
        expected: Vec<u8>,
    },
    #[error("at least one worked example is required")]
    NoExamples,
    #[error("target_scenario_count must be at least 1")]
    BadTarget,
    #[error("v1 needs behavior descriptions")]
    MissingBehaviors,
    #[error("{0} has no behavior-descriptions section")]
    UnexpectedBehaviors(PromptVersion),
    #[error("trait definition is empty")]
    EmptyDefinition,
    #[error("delimiter must be a single non-blank token, got {0:?}")]
    BadDelimiter(String),
    #[error("prompt spec: {0}")]
    Format(String),
}

/// Strings the audit looks for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptMarkers {
    pub task_phrase: String,
    pub delimiter: String,
    pub emotional_stimulus: String,
    pub cot_cue: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptText {
    pub version: PromptVersion,
    pub facet: Facet,
    pub text: String,
    pub markers: PromptMarkers,
}

impl PromptText {
    /// Wraps free text, using default markers.
    pub fn raw(text: impl Into<String>) -> Self {
        PromptText {
            version: PromptVersion::V1,
            facet: Facet::SelfConsciousness,
            text: text.into(),
            markers: PromptMarkers {
                task_phrase: "continue generating".into(),
                delimiter: DEFAULT_DELIMITER.into(),
                emotional_stimulus: DEFAULT_EMOTIONAL_STIMULUS.into(),
                cot_cue: COT_CUE.into(),
            },
        }
    }

    /// Lowercase hex SHA-256 of the text.
    pub fn hash(&self) -> String {
        sha256_hex(self.text.as_bytes())
    }
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

pub fn build_prompt(spec: &PromptSpec) -> Result<PromptText, SpecError> {
    spec.validate()?;
    let n = spec.final_scenario();
    let name = spec.facet.name();
    let label = spec.facet.label();
    let d = &spec.delimiter;
    let task_phrase = match spec.version {
        PromptVersion::V0 => "generate a personality situational judgment test".to_string(),
        _ => format!("continue generating up to Scenario {n}"),
    };

    let mut lines: Vec<String> = Vec::new();
    let mut number = 0usize;
    let mut numbered = |lines: &mut Vec<String>, heading: &str| {
        if number == 0 {
            lines.push(
                match spec.version {
                    PromptVersion::V2 => "The specific requirements are as follows:",
                    _ => "Specifically:",
                }
                .into(),
            );
        }
        number += 1;
        format!("{number}. {heading}")
    };

    for section in spec.version.sections() {
        match section {
            Section::Task => lines.push(match spec.version {
                PromptVersion::V0 => {
                    let tail = if spec.examples.len() == 1 {
                        "Here is the example:"
                    } else {
                        "Here are the examples:"
                    };
                    format!("I need to {task_phrase} based on a given trait. {tail}")
                }
                PromptVersion::V1 => {
                    format!("Please {task_phrase} to measure the level of the following trait.")
                }
                PromptVersion::V2 => {
                    format!("Please {task_phrase} to measure the level of {name}.")
                }
            }),
            Section::Persona => {
                let h = numbered(&mut lines, "");
                lines.push(match spec.version {
                    PromptVersion::V2 => format!(
                        "{h}Role and Task Objective: Please act as a psychometrics expert, \
                         focusing on designing scenarios that reflect the level of {name}, \
                         making them applicable to everyday life or common workplace \
                         environments."
                    ),
                    _ => format!("{h}Role Positioning: Please act as a psychometrics expert."),
                });
            }
            Section::Definition => match spec.version {
                PromptVersion::V2 => lines.push(format!(
                    "{} is a facet of {}. {}",
                    capitalize(name),
                    spec.facet.parent_factor().name(),
                    spec.trait_definition.trim()
                )),
                _ => {
                    let h = numbered(&mut lines, "");
                    lines.push(format!(
                        "{h}Measurement Dimension: {}\u{2014}{}",
                        capitalize(&label),
                        spec.trait_definition.trim()
                    ));
                }
            },
            Section::Behaviors => {
                let h = numbered(&mut lines, "Behavior Descriptions:");
                lines.push(h);
                lines.extend(
                    spec.behavior_descriptions
                        .iter()
                        .map(|b| b.trim().to_string()),
                );
            }
            Section::Constraints => match spec.version {
                PromptVersion::V2 => {
                    let h = numbered(&mut lines, "Constraints:");
                    lines.push(h);
                    lines.push(format!(
                        "(1) The scenario descriptions must be detailed, diverse, and closely \
                         related to {name}."
                    ));
                    lines.push(format!(
                        "(2) The scenarios should end with the question \u{201c}{}\u{201d}",
                        spec.question_sentinel
                    ));
                    lines.push(format!(
                        "(3) Each scenario should provide four options, which should be \
                         realistic and contextually relevant. Two options should reflect a \
                         high level of {name} (scoring 1), and two should reflect a low level \
                         of {name} (scoring 0)."
                    ));
                    lines.push(format!(
                        "(4) The language should be fluent, conform to the linguistic norms and \
                         grammar rules of {}, and align with psychological paradigms.",
                        spec.language
                    ));
                }
                _ => {
                    let h = numbered(&mut lines, "Output Requirements:");
                    lines.push(h);
                    lines.push(format!(
                        "(1) Context Setting: The description should be specific, involving \
                         both life and work scenarios, and combined with behavior descriptions. \
                         The situational description should be rich and diverse, ending with \
                         \u{201c}{}\u{201d}",
                        spec.question_sentinel
                    ));
                    lines.push(
                        "(2) Options: option A and B represent high levels of this trait, \
                         scoring 1 point; option C and D represent low levels of this trait, \
                         scoring 0 points."
                            .into(),
                    );
                    lines.push(format!(
                        "(3) Style: The language should be fluent, conform to the linguistic \
                         norms and grammar rules of {}, and align with psychological paradigms.",
                        spec.language
                    ));
                }
            },
            Section::Examples => {
                if spec.version != PromptVersion::V0 {
                    let h = numbered(&mut lines, "Examples:");
                    lines.push(h);
                }
                lines.push(d.clone());
                if spec.version == PromptVersion::V0 {
                    lines.push(format!("Trait: {label}"));
                }
                lines.extend(
                    render_items(&spec.examples)
                        .lines()
                        .filter(|l| !l.trim().is_empty())
                        .map(str::to_string),
                );
                lines.push(d.clone());
            }
            Section::Cot => {
                let body = spec.cot_instruction.clone().unwrap_or_else(|| {
                    match spec.version {
                        PromptVersion::V2 => V2_COT,
                        _ => V1_COT,
                    }
                    .to_string()
                });
                let body = body.replace("{trait}", name);
                let h = numbered(&mut lines, "");
                lines.push(format!("{h}{body}"));
            }
            Section::Emotion => lines.push(spec.emotional_stimulus.trim().to_string()),
            Section::TaskRepeat => lines.push(match spec.version {
                PromptVersion::V2 => {
                    format!("Based on the above requirements and examples, please {task_phrase}.")
                }
                _ => format!(
                    "Based on the above, please {task_phrase} to measure the level of the above \
                     trait."
                ),
            }),
            Section::Continuation => {
                lines.push(format!("Trait: {label}"));
                for k in spec.examples.len() + 1..=n {
                    lines.push(format!("Scenario {k}:"));
                }
            }
        }
    }

    let mut text = lines.join("\n");
    text.push('\n');
    Ok(PromptText {
        version: spec.version,
        facet: spec.facet,
        text,
        markers: PromptMarkers {
            task_phrase,
            delimiter: spec.delimiter.clone(),
            emotional_stimulus: spec.emotional_stimulus.trim().to_string(),
            cot_cue: COT_CUE.into(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub detected: BTreeMap<StrategyId, bool>,
    pub expected: BTreeSet<StrategyId>,
    pub missing: Vec<StrategyId>,
    /// The task phrase also appears on the last non-empty line.
    pub task_repeated: bool,
    pub pass: bool,
}

impl AuditReport {
    pub fn detected_set(&self) -> BTreeSet<StrategyId> {
        self.detected
            .iter()
            .filter(|(_, v)| **v)
            .map(|(k, _)| *k)
            .collect()
    }
}

static NUMBERED_SECTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d+\.\s").unwrap());
static NUMBERED_ITEM: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\(\d+\)").unwrap());
static NEGATIVE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(do not|don't|never|avoid|should not|must not)\b").unwrap()
});
static REQUIREMENTS_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(\d+\.\s*)?(Output Requirements|Constraints):\s*$").unwrap());
static CONSTRAINTS_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(\d+\.\s*)?Constraints:\s*$").unwrap());
static PERSONA: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bplease act as\b").unwrap());
static SCENARIO_LINE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^scenario\s+\d+\s*:\s*\S").unwrap());
static SCORING_LINE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^scoring\s*:").unwrap());

/// Detects each strategy from structural markers in the text.
pub fn strategy_audit(prompt: &PromptText, expected: &BTreeSet<StrategyId>) -> AuditReport {
    let lines: Vec<&str> = prompt
        .text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let m = &prompt.markers;
    let first = lines.first().copied().unwrap_or("");
    let last = lines.last().copied().unwrap_or("");

    let delimiter_lines: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == m.delimiter)
        .map(|(i, _)| i)
        .collect();

    let has_intro = |intro: &str| lines.iter().position(|l| *l == intro);
    let subtasks = ["Specifically:", "The specific requirements are as follows:"]
        .iter()
        .filter_map(|i| has_intro(i))
        .any(|pos| {
            lines[pos + 1..]
                .iter()
                .filter(|l| NUMBERED_SECTION.is_match(l))
                .count()
                >= 2
        });

    let example_block = delimiter_lines.windows(2).any(|w| {
        let inner = &lines[w[0] + 1..w[1]];
        inner.iter().any(|l| SCENARIO_LINE.is_match(l))
            && inner.iter().any(|l| SCORING_LINE.is_match(l))
    });

    let positive_constraints = lines
        .iter()
        .position(|l| CONSTRAINTS_HEADING.is_match(l))
        .map(|pos| {
            let block: Vec<&&str> = lines[pos + 1..]
                .iter()
                .take_while(|l| NUMBERED_ITEM.is_match(l))
                .collect();
            !block.is_empty() && !block.iter().any(|l| NEGATIVE.is_match(l))
        })
        .unwrap_or(false);

    let flags = [
        !m.task_phrase.is_empty() && first.contains(&m.task_phrase),
        lines.iter().any(|l| REQUIREMENTS_HEADING.is_match(l)),
        subtasks,
        prompt.text.contains(&m.cot_cue),
        example_block,
        positive_constraints,
        lines.iter().any(|l| PERSONA.is_match(l)),
        delimiter_lines.len() >= 2,
        !m.emotional_stimulus.is_empty() && prompt.text.contains(&m.emotional_stimulus),
    ];
    let detected: BTreeMap<StrategyId, bool> =
        StrategyId::all().zip(flags.iter().copied()).collect();
    let missing: Vec<StrategyId> = expected
        .iter()
        .filter(|s| !detected.get(s).copied().unwrap_or(false))
        .copied()
        .collect();
    AuditReport {
        pass: missing.is_empty(),
        detected,
        expected: expected.clone(),
        missing,
        task_repeated: !m.task_phrase.is_empty() && last.contains(&m.task_phrase),
    }
}

/// Built-in behavior lines for a facet.
pub fn default_behaviors(facet: Facet) -> &'static [&'static str] {
    match facet {
        Facet::SelfConsciousness => &[
            "When interacting with others, I often worry about making mistakes.",
            "When I am with a group, I am always aware of my presence.",
            "Sometimes, I feel extremely ashamed, to the point where I want to hide.",
            "When people make fun of me or joke about me, I feel embarrassed.",
            "I often feel inferior to others.",
            "When my boss or other leaders are around, I feel very uncomfortable.",
            "If I've done something wrong to someone, I can hardly face them again.",
            "When someone I know does something foolish, I feel embarrassed for them.",
        ],
        Facet::Gregariousness => &[
            "I like to have a lot of people around me.",
            "I prefer jobs that let me work with others.",
            "I enjoy large parties and crowded places.",
            "I would rather spend a free evening with friends than alone.",
            "I start conversations with strangers easily.",
        ],
        Facet::OpennessToIdeas => &[
            "I enjoy working on puzzles and abstract problems.",
            "I like to discuss theories and philosophical questions.",
            "I am curious about how things work.",
            "I change my mind when I meet a better argument.",
            "I seek out books and talks on unfamiliar subjects.",
        ],
        Facet::Compliance => &[
            "I would rather cooperate with others than compete with them.",
            "I hesitate to express anger even when it is justified.",
            "I tend to forgive and forget.",
            "When someone starts a fight, I try to calm things down.",
            "I give in rather than argue over small matters.",
        ],
        Facet::SelfDiscipline => &[
            "Once I start a project, I almost always finish it.",
            "I get chores done right away instead of putting them off.",
            "I can keep working on a dull task until it is done.",
            "I set goals and work toward them steadily.",
            "I rarely let distractions pull me away from my work.",
        ],
    }
}

fn example(facet: Facet, id: &str, scenario: &str, options: [&str; 4]) -> SjtItem {
    SjtItem::new(id, facet, scenario, options, [1, 1, 0, 0]).with_provenance(Provenance {
        kind: ProvenanceKind::Fixture,
        ..Provenance::default()
    })
}

/// Built-in worked examples for a facet (two per facet).
pub fn default_examples(facet: Facet) -> Vec<SjtItem> {
    match facet {
        Facet::SelfConsciousness => vec![movie_theater_item(), presentation_item()],
        Facet::Gregariousness => vec![
            example(
                facet,
                "fixture-weekend",
                "Your neighbors invite you to a street party with dozens of people you have \
                 never met. You had planned a quiet evening at home. What would you do?",
                [
                    "I would go to the party and try to meet as many neighbors as possible.",
                    "I would go and ask my neighbors to introduce me to others.",
                    "I would thank them and stay home as planned.",
                    "I would drop by briefly and then go back home.",
                ],
            ),
            example(
                facet,
                "fixture-office",
                "Your company lets you choose between a private office and a desk in a busy \
                 shared space with your team. What would you do?",
                [
                    "I would take the shared space so I can be around my colleagues.",
                    "I would take the shared space and suggest lunch together every day.",
                    "I would take the private office so I can work undisturbed.",
                    "I would take the private office and keep the door closed most of the day.",
                ],
            ),
        ],
        Facet::OpennessToIdeas => vec![
            example(
                facet,
                "fixture-lecture",
                "A friend invites you to a public lecture on a theory of consciousness that \
                 challenges common views. You know little about the topic. What would you do?",
                [
                    "I would go and prepare a few questions for the speaker.",
                    "I would go and read about the theory beforehand.",
                    "I would decline because the topic seems too abstract.",
                    "I would suggest we see a film instead.",
                ],
            ),
            example(
                facet,
                "fixture-method",
                "At work, a new colleague proposes an unconventional method that contradicts \
                 the way your team has always solved a problem. What would you do?",
                [
                    "I would ask the colleague to explain the reasoning behind the method.",
                    "I would suggest trying the method on a small test case.",
                    "I would point out that the current way works well enough.",
                    "I would keep using the usual method without discussing it.",
                ],
            ),
        ],
        Facet::Compliance => vec![
            example(
                facet,
                "fixture-parking",
                "A neighbor keeps parking in front of your driveway. When you mention it, the \
                 neighbor gets irritated and raises their voice. What would you do?",
                [
                    "I would apologize for the tone and suggest we find a solution together.",
                    "I would let it go to keep the peace.",
                    "I would firmly insist that the neighbor move the car.",
                    "I would report the neighbor to the authorities.",
                ],
            ),
            example(
                facet,
                "fixture-credit",
                "In a meeting, a colleague presents an idea you came up with as their own. \
                 What would you do?",
                [
                    "I would say nothing in the meeting and forgive the colleague.",
                    "I would talk to the colleague privately and calmly.",
                    "I would correct the record in front of everyone right away.",
                    "I would take the next chance to criticize the colleague's work.",
                ],
            ),
        ],
        Facet::SelfDiscipline => vec![
            example(
                facet,
                "fixture-report",
                "You have a long report due in two weeks. Friends invite you on a weekend trip \
                 and you have not started writing yet. What would you do?",
                [
                    "I would finish a planned share of the report before leaving.",
                    "I would decline and use the weekend to work on the report.",
                    "I would go on the trip and start the report later.",
                    "I would go and hope to write the report in the last few days.",
                ],
            ),
            example(
                facet,
                "fixture-course",
                "You signed up for an online course. After the first weeks, the lessons become \
                 repetitive and dull. What would you do?",
                [
                    "I would keep to my study schedule until I complete the course.",
                    "I would set small goals for each lesson to stay on track.",
                    "I would stop taking the course.",
                    "I would skip lessons whenever I do not feel like studying.",
                ],
            ),
        ],
    }
}
