//! SJT items, facets, scoring, and the canonical item-bank file.
//!
//! An [`SjtItem`] is one scenario with four labelled options and an explicit
//! binary scoring key: two options keyed 1 (high trait), two keyed 0. Banks
//! are exchanged between every stage of the pipeline as a versioned JSON
//! document (see [`ItemBank::to_json`]).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::fold_width;

/// Question every scenario must end with, unless configured otherwise.
pub const DEFAULT_QUESTION_SENTINEL: &str = "What would you do?";

/// Version stamped into every bank file.
pub const BANK_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ItemError {
    #[error("invalid choice `{choice}` for item {item_id}")]
    InvalidChoice { item_id: String, choice: String },
    #[error("no response for item {item_id}")]
    IncompleteResponse { item_id: String },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown facet `{0}`")]
    UnknownFacet(String),
    #[error("duplicate item id {0}")]
    DuplicateId(String),
    #[error("facet layout references unknown item {0}")]
    DanglingLayout(String),
    #[error("item {item_id} is listed under {listed} but belongs to {actual}")]
    LayoutFacetMismatch {
        item_id: String,
        listed: Facet,
        actual: Facet,
    },
    #[error("unsupported bank schema version {0}")]
    SchemaVersion(u32),
    #[error("malformed bank file: {0}")]
    Format(String),
}

/// Big Five factor a facet belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BigFive {
    Neuroticism,
    Extraversion,
    Openness,
    Agreeableness,
    Conscientiousness,
}

impl BigFive {
    pub fn name(self) -> &'static str {
        match self {
            BigFive::Neuroticism => "neuroticism",
            BigFive::Extraversion => "extraversion",
            BigFive::Openness => "openness to experience",
            BigFive::Agreeableness => "agreeableness",
            BigFive::Conscientiousness => "conscientiousness",
        }
    }

    /// Single-letter code used in table labels.
    pub fn code(self) -> char {
        match self {
            BigFive::Neuroticism => 'N',
            BigFive::Extraversion => 'E',
            BigFive::Openness => 'O',
            BigFive::Agreeableness => 'A',
            BigFive::Conscientiousness => 'C',
        }
    }
}

/// The five measured facets, one per Big Five factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Facet {
    SelfConsciousness,
    Gregariousness,
    OpennessToIdeas,
    Compliance,
    SelfDiscipline,
}

impl Facet {
    pub const ALL: [Facet; 5] = [
        Facet::SelfConsciousness,
        Facet::Gregariousness,
        Facet::OpennessToIdeas,
        Facet::Compliance,
        Facet::SelfDiscipline,
    ];

    /// Stable identifier used in files and item ids.
    pub fn id(self) -> &'static str {
        match self {
            Facet::SelfConsciousness => "self_consciousness",
            Facet::Gregariousness => "gregariousness",
            Facet::OpennessToIdeas => "openness_to_ideas",
            Facet::Compliance => "compliance",
            Facet::SelfDiscipline => "self_discipline",
        }
    }

    /// Position in [`Facet::ALL`].
    pub fn index(self) -> usize {
        Facet::ALL.iter().position(|f| *f == self).unwrap_or(0)
    }

    pub fn parent_factor(self) -> BigFive {
        match self {
            Facet::SelfConsciousness => BigFive::Neuroticism,
            Facet::Gregariousness => BigFive::Extraversion,
            Facet::OpennessToIdeas => BigFive::Openness,
            Facet::Compliance => BigFive::Agreeableness,
            Facet::SelfDiscipline => BigFive::Conscientiousness,
        }
    }

    /// Human-readable name, e.g. `self-consciousness`.
    pub fn name(self) -> &'static str {
        match self {
            Facet::SelfConsciousness => "self-consciousness",
            Facet::Gregariousness => "gregariousness",
            Facet::OpennessToIdeas => "openness to ideas",
            Facet::Compliance => "compliance",
            Facet::SelfDiscipline => "self-discipline",
        }
    }

    /// Name with its parent factor, e.g. `self-consciousness (from neuroticism)`.
    pub fn label(self) -> String {
        format!("{} (from {})", self.name(), self.parent_factor().name())
    }

    /// Default prose definition injected into prompts.
    pub fn definition(self) -> &'static str {
        match self {
            Facet::SelfConsciousness => {
                "This facet measures an individual's tendency to feel shy, embarrassed, and \
                 sensitive to others' viewpoints. Higher scores in this facet typically indicate \
                 greater self-awareness and potential sensitivity to negative emotions based on \
                 self-perception and how they believe others perceive them."
            }
            Facet::Gregariousness => {
                "This facet measures an individual's preference for the company of others. \
                 Higher scores in this facet typically indicate enjoying crowds and social \
                 gatherings, seeking out group activities, and feeling energized by being \
                 around people."
            }
            Facet::OpennessToIdeas => {
                "This facet measures intellectual curiosity and a willingness to consider new \
                 or unconventional ideas. Higher scores in this facet typically indicate \
                 enjoyment of abstract problems, philosophical discussion, and debates that \
                 challenge one's own views."
            }
            Facet::Compliance => {
                "This facet measures how an individual reacts to interpersonal conflict. Higher \
                 scores in this facet typically indicate a tendency to defer to others, hold \
                 back aggression, and forgive rather than compete or retaliate."
            }
            Facet::SelfDiscipline => {
                "This facet measures the capacity to begin tasks and carry them through to \
                 completion despite boredom or distractions. Higher scores in this facet \
                 typically indicate persistence and the ability to motivate oneself to get \
                 things done."
            }
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Facet {
    type Err = ItemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == '-' || c == ' ' { '_' } else { c })
            .collect();
        Facet::ALL
            .into_iter()
            .find(|f| f.id() == key)
            .ok_or_else(|| ItemError::UnknownFacet(s.to_string()))
    }
}

/// Option label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::A, Label::B, Label::C, Label::D];

    pub fn as_char(self) -> char {
        match self {
            Label::A => 'A',
            Label::B => 'B',
            Label::C => 'C',
            Label::D => 'D',
        }
    }

    pub fn from_char(c: char) -> Option<Label> {
        match c.to_ascii_uppercase() {
            'A' => Some(Label::A),
            'B' => Some(Label::B),
            'C' => Some(Label::C),
            'D' => Some(Label::D),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Label {
    type Err = ItemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded = fold_width(s.trim());
        let mut chars = folded.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Label::from_char(c).ok_or_else(|| ItemError::UnknownLabel(s.into())),
            _ => Err(ItemError::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceKind {
    #[default]
    LlmGenerated,
    Manual,
    Fixture,
}

/// Where an item came from and, for generated items, how.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: ProvenanceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemOption {
    pub label: Label,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SjtItem {
    pub item_id: String,
    pub facet: Facet,
    pub scenario: String,
    pub options: Vec<ItemOption>,
    pub scoring_key: BTreeMap<Label, u8>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl SjtItem {
    /// Builds an item with options labelled A–D in order.
    pub fn new(
        item_id: impl Into<String>,
        facet: Facet,
        scenario: impl Into<String>,
        options: [&str; 4],
        key: [u8; 4],
    ) -> Self {
        SjtItem {
            item_id: item_id.into(),
            facet,
            scenario: scenario.into(),
            options: Label::ALL
                .iter()
                .zip(options)
                .map(|(label, text)| ItemOption {
                    label: *label,
                    text: text.to_string(),
                })
                .collect(),
            scoring_key: Label::ALL.into_iter().zip(key).collect(),
            provenance: Provenance::default(),
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Score earned by choosing `label`.
    pub fn score(&self, label: Label) -> Result<u8, ItemError> {
        let offered = self.options.iter().any(|o| o.label == label);
        match self.scoring_key.get(&label) {
            Some(v) if offered => Ok(*v),
            _ => Err(ItemError::InvalidChoice {
                item_id: self.item_id.clone(),
                choice: label.to_string(),
            }),
        }
    }

    /// Labels whose key equals `value`, in label order.
    pub fn labels_keyed(&self, value: u8) -> Vec<Label> {
        self.scoring_key
            .iter()
            .filter(|(_, v)| **v == value)
            .map(|(l, _)| *l)
            .collect()
    }
}

/// Machine-readable defect codes shared by validation and parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IssueCode {
    #[serde(rename = "NO_SCENARIO_HEADER")]
    NoScenarioHeader,
    #[serde(rename = "OPTION_COUNT")]
    OptionCount,
    #[serde(rename = "DUPLICATE_LABEL")]
    DuplicateLabel,
    #[serde(rename = "MISSING_SCORING")]
    MissingScoring,
    #[serde(rename = "SCORING_KEY_MISMATCH")]
    ScoringKeyMismatch,
    #[serde(rename = "SCORING_NOT_2_2")]
    ScoringNot22,
    #[serde(rename = "BAD_LABEL")]
    BadLabel,
    #[serde(rename = "EMPTY_SCENARIO")]
    EmptyScenario,
    #[serde(rename = "NO_QUESTION_SENTINEL")]
    NoQuestionSentinel,
    #[serde(rename = "EMPTY_OPTION")]
    EmptyOption,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::NoScenarioHeader => "NO_SCENARIO_HEADER",
            IssueCode::OptionCount => "OPTION_COUNT",
            IssueCode::DuplicateLabel => "DUPLICATE_LABEL",
            IssueCode::MissingScoring => "MISSING_SCORING",
            IssueCode::ScoringKeyMismatch => "SCORING_KEY_MISMATCH",
            IssueCode::ScoringNot22 => "SCORING_NOT_2_2",
            IssueCode::BadLabel => "BAD_LABEL",
            IssueCode::EmptyScenario => "EMPTY_SCENARIO",
            IssueCode::NoQuestionSentinel => "NO_QUESTION_SENTINEL",
            IssueCode::EmptyOption => "EMPTY_OPTION",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub code: IssueCode,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationResult {
    pub violations: Vec<Violation>,
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: IssueCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn codes(&self) -> Vec<IssueCode> {
        self.violations.iter().map(|v| v.code).collect()
    }
}

/// Structural rules an item is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemRules {
    pub question_sentinel: String,
}

impl Default for ItemRules {
    fn default() -> Self {
        ItemRules {
            question_sentinel: DEFAULT_QUESTION_SENTINEL.to_string(),
        }
    }
}

impl ItemRules {
    pub fn with_sentinel(sentinel: impl Into<String>) -> Self {
        ItemRules {
            question_sentinel: sentinel.into(),
        }
    }

    pub(crate) fn ends_with_sentinel(&self, scenario: &str) -> bool {
        let scenario = fold_width(scenario.trim_end());
        let sentinel = fold_width(self.question_sentinel.trim());
        scenario.ends_with(&sentinel)
    }
}

/// Checks `item` against the default rules.
pub fn validate_item(item: &SjtItem) -> ValidationResult {
    validate_item_with(item, &ItemRules::default())
}

/// Reports every violated item invariant. Never fails.
pub fn validate_item_with(item: &SjtItem, rules: &ItemRules) -> ValidationResult {
    let mut violations = Vec::new();
    let mut push = |code, detail: String| violations.push(Violation { code, detail });

    if item.options.len() != 4 {
        push(
            IssueCode::OptionCount,
            format!("expected 4 options, found {}", item.options.len()),
        );
    }
    let mut seen = BTreeSet::new();
    for option in &item.options {
        if !seen.insert(option.label) {
            push(
                IssueCode::DuplicateLabel,
                format!("label {} appears more than once", option.label),
            );
        }
        if option.text.trim().is_empty() {
            push(
                IssueCode::EmptyOption,
                format!("option {} is empty", option.label),
            );
        }
    }

    let key_labels: BTreeSet<Label> = item.scoring_key.keys().copied().collect();
    let all_labels: BTreeSet<Label> = Label::ALL.into_iter().collect();
    if key_labels != all_labels {
        let missing: Vec<String> = all_labels
            .difference(&key_labels)
            .map(|l| l.to_string())
            .collect();
        push(
            IssueCode::ScoringKeyMismatch,
            format!("scoring key does not cover labels [{}]", missing.join(",")),
        );
    }
    let out_of_domain: Vec<String> = item
        .scoring_key
        .iter()
        .filter(|(_, v)| **v > 1)
        .map(|(l, v)| format!("{l}:{v}"))
        .collect();
    if !out_of_domain.is_empty() {
        push(
            IssueCode::BadLabel,
            format!("scores outside {{0,1}}: {}", out_of_domain.join(", ")),
        );
    } else {
        let ones = item.scoring_key.values().filter(|v| **v == 1).count();
        let zeros = item.scoring_key.values().filter(|v| **v == 0).count();
        if ones != 2 || zeros != 2 {
            push(
                IssueCode::ScoringNot22,
                format!("expected two options keyed 1 and two keyed 0, found {ones} and {zeros}"),
            );
        }
    }

    if item.scenario.trim().is_empty() {
        push(
            IssueCode::EmptyScenario,
            "scenario text is empty".to_string(),
        );
    } else if !rules.ends_with_sentinel(&item.scenario) {
        push(
            IssueCode::NoQuestionSentinel,
            format!("scenario does not end with \"{}\"", rules.question_sentinel),
        );
    }

    ValidationResult { violations }
}

/// Score for choosing the option labelled `choice` (e.g. `"A"`).
pub fn score_choice(item: &SjtItem, choice: &str) -> Result<u8, ItemError> {
    let label: Label = choice.parse().map_err(|_| ItemError::InvalidChoice {
        item_id: item.item_id.clone(),
        choice: choice.to_string(),
    })?;
    item.score(label)
}

/// Sum of item scores over a facet's items.
pub fn facet_score(
    bank: &ItemBank,
    facet: Facet,
    choices: &HashMap<String, Label>,
) -> Result<u32, ItemError> {
    let mut total = 0u32;
    for item in bank.facet_items(facet) {
        let label = choices
            .get(&item.item_id)
            .ok_or_else(|| ItemError::IncompleteResponse {
                item_id: item.item_id.clone(),
            })?;
        total += u32::from(item.score(*label)?);
    }
    Ok(total)
}

/// Returns a copy of `item` with option texts permuted; labels stay A–D in
/// order and the scoring key follows the text it belongs to.
pub fn shuffle_options<R: Rng + ?Sized>(item: &SjtItem, rng: &mut R) -> SjtItem {
    let mut pairs: Vec<(String, Option<u8>)> = item
        .options
        .iter()
        .map(|o| (o.text.clone(), item.scoring_key.get(&o.label).copied()))
        .collect();
    pairs.shuffle(rng);
    let mut out = item.clone();
    out.options.clear();
    out.scoring_key.clear();
    for (label, (text, key)) in item.options.iter().map(|o| o.label).zip(pairs) {
        out.options.push(ItemOption { label, text });
        if let Some(k) = key {
            out.scoring_key.insert(label, k);
        }
    }
    out
}

/// A set of items plus the ordered item list of each facet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemBank {
    pub bank_id: String,
    pub items: Vec<SjtItem>,
    pub facet_layout: BTreeMap<Facet, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct BankFile {
    schema_version: u32,
    bank_id: String,
    items: Vec<SjtItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    facet_layout: Option<BTreeMap<Facet, Vec<String>>>,
}

impl ItemBank {
    pub fn new(bank_id: impl Into<String>) -> Self {
        ItemBank {
            bank_id: bank_id.into(),
            items: Vec::new(),
            facet_layout: BTreeMap::new(),
        }
    }

    /// Builds a bank whose facet layout follows item order.
    pub fn from_items(
        bank_id: impl Into<String>,
        items: impl IntoIterator<Item = SjtItem>,
    ) -> Result<Self, ItemError> {
        let mut bank = ItemBank::new(bank_id);
        for item in items {
            bank.push(item)?;
        }
        Ok(bank)
    }

    /// Appends an item to the end of its facet's layout.
    pub fn push(&mut self, item: SjtItem) -> Result<(), ItemError> {
        if self.item(&item.item_id).is_some() {
            return Err(ItemError::DuplicateId(item.item_id));
        }
        self.facet_layout
            .entry(item.facet)
            .or_default()
            .push(item.item_id.clone());
        self.items.push(item);
        Ok(())
    }

    pub fn item(&self, item_id: &str) -> Option<&SjtItem> {
        self.items.iter().find(|i| i.item_id == item_id)
    }

    /// Items of `facet` in layout order.
    pub fn facet_items(&self, facet: Facet) -> impl Iterator<Item = &SjtItem> + '_ {
        let index: HashMap<&str, &SjtItem> =
            self.items.iter().map(|i| (i.item_id.as_str(), i)).collect();
        self.facet_layout
            .get(&facet)
            .into_iter()
            .flatten()
            .filter_map(move |id| index.get(id.as_str()).copied())
    }

    /// Facets that have at least one item, in canonical order.
    pub fn facets(&self) -> Vec<Facet> {
        Facet::ALL
            .into_iter()
            .filter(|f| self.facet_layout.get(f).is_some_and(|ids| !ids.is_empty()))
            .collect()
    }

    /// Checks id uniqueness and that the layout resolves.
    pub fn check(&self) -> Result<(), ItemError> {
        let mut ids = HashSet::new();
        for item in &self.items {
            if !ids.insert(item.item_id.as_str()) {
                return Err(ItemError::DuplicateId(item.item_id.clone()));
            }
        }
        for (facet, layout) in &self.facet_layout {
            for id in layout {
                let item = self
                    .item(id)
                    .ok_or_else(|| ItemError::DanglingLayout(id.clone()))?;
                if item.facet != *facet {
                    return Err(ItemError::LayoutFacetMismatch {
                        item_id: id.clone(),
                        listed: *facet,
                        actual: item.facet,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = BankFile {
            schema_version: BANK_SCHEMA_VERSION,
            bank_id: self.bank_id.clone(),
            items: self.items.clone(),
            facet_layout: Some(self.facet_layout.clone()),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("bank serializes");
        s.push('\n');
        s
    }

    /// Parses a bank file; a missing `facet_layout` is derived from item order.
    pub fn from_json(s: &str) -> Result<Self, ItemError> {
        let file: BankFile =
            serde_json::from_str(s).map_err(|e| ItemError::Format(e.to_string()))?;
        if file.schema_version != BANK_SCHEMA_VERSION {
            return Err(ItemError::SchemaVersion(file.schema_version));
        }
        let bank = match file.facet_layout {
            Some(layout) => ItemBank {
                bank_id: file.bank_id,
                items: file.items,
                facet_layout: layout,
            },
            None => ItemBank::from_items(file.bank_id, file.items)?,
        };
        bank.check()?;
        Ok(bank)
    }
}

/// The worked example used throughout the prompts: the movie-theater scenario.
pub fn movie_theater_item() -> SjtItem {
    SjtItem::new(
        "fixture-movie-theater",
        Facet::SelfConsciousness,
        "You are seated in the middle of one of the rows of a nearly full movie theater. \
         Shortly after the movie starts, you realize you've entered the wrong screening room \
         and are sitting in the wrong one. What would you do?",
        [
            "I wouldn't switch screening rooms because asking half the row to stand up during \
             the movie would make me feel uncomfortable.",
            "I would stay until the movie ends because I'd feel embarrassed if others saw me \
             leaving during the screening.",
            "I would get up and go to the correct screening room.",
            "I would watch the beginning of the movie and then decide whether to switch to the \
             correct screening room.",
        ],
        [1, 1, 0, 0],
    )
    .with_provenance(Provenance {
        kind: ProvenanceKind::Fixture,
        ..Provenance::default()
    })
}

/// Second worked example: the presentation scenario.
pub fn presentation_item() -> SjtItem {
    SjtItem::new(
        "fixture-presentation",
        Facet::SelfConsciousness,
        "You are giving a presentation in front of your department colleagues. While you are \
         speaking, you notice two colleagues suddenly start laughing and whispering to each \
         other. What would you do?",
        [
            "I would wonder if I said something funny and look down to check if my clothes are \
             impeccable.",
            "I would lose my train of thought and have to check my notes.",
            "I would continue with my presentation.",
            "I would pause briefly and ask the two colleagues if anything was unclear or hard to \
             understand in my presentation.",
        ],
        [1, 1, 0, 0],
    )
    .with_provenance(Provenance {
        kind: ProvenanceKind::Fixture,
        ..Provenance::default()
    })
}

/// Third worked example: the tram scenario.
pub fn tram_item() -> SjtItem {
    SjtItem::new(
        "fixture-tram",
        Facet::SelfConsciousness,
        "You are sitting on a tram with a friend. At a stop, a passenger boards and walks past \
         you. At that moment, your friend whistles at her. She turns around in annoyance and \
         looks at you. What would you do?",
        [
            "I would look away awkwardly to avoid eye contact.",
            "I would look away in embarrassment and tell my friend afterwards that I thought \
             his behavior was rather stupid.",
            "I would compliment her.",
            "I would laugh and point at my friend.",
        ],
        [1, 1, 0, 0],
    )
    .with_provenance(Provenance {
        kind: ProvenanceKind::Fixture,
        ..Provenance::default()
    })
}
