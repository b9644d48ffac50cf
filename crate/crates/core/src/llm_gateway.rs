//! Chat-completion calls, retries, and the generate-then-parse loop.
//!
//! [`Gateway`] wraps a [`Transport`]: either [`HttpTransport`] for an
//! OpenAI-compatible endpoint or [`MockTransport`] driven by a script file.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::item_model::{IssueCode, ItemRules, Provenance, ProvenanceKind, SjtItem};
use crate::item_parser::{parse_items_with, ParseIssue, ParserConfig};
use crate::prompt_forge::{build_prompt, sha256_hex, PromptSpec, PromptText, SpecError};

pub const API_KEY_VAR: &str = "SJT_FORGE_API_KEY";
pub const DEFAULT_MODEL: &str = "gpt-4-1106-preview";
pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";
/// Temperatures at or above this tend to produce incoherent items.
pub const HIGH_TEMPERATURE: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub base_ms: u64,
    pub factor: f64,
    /// Relative jitter; 0.2 spreads each delay over ±20%.
    pub jitter: f64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            base_ms: 1000,
            factor: 2.0,
            jitter: 0.2,
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (1 for the first retry).
    pub fn delay<R: Rng + ?Sized>(&self, retry: u32, rng: &mut R) -> Duration {
        let nominal = self.base_ms as f64 * self.factor.powi(retry.saturating_sub(1) as i32);
        let spread = if self.jitter > 0.0 {
            rng.random_range(-self.jitter..=self.jitter)
        } else {
            0.0
        };
        Duration::from_secs_f64((nominal * (1.0 + spread)).max(0.0) / 1000.0)
    }
}

fn default_model() -> String {
    DEFAULT_MODEL.into()
}
fn default_temperature() -> f64 {
    1.0
}
fn default_attempts() -> u32 {
    3
}
fn default_timeout() -> u64 {
    120_000
}
fn default_endpoint() -> String {
    DEFAULT_ENDPOINT.into()
}
fn default_budget() -> u32 {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    #[serde(default = "default_model")]
    pub model_id: String,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    /// Attempts per completion, including the first.
    #[serde(default = "default_attempts")]
    pub max_attempts: u32,
    #[serde(default = "default_timeout")]
    pub request_timeout_ms: u64,
    #[serde(default = "default_endpoint")]
    pub endpoint_url: String,
    /// Completions `generate_items` may request before giving up.
    #[serde(default = "default_budget")]
    pub completion_budget: u32,
    #[serde(default)]
    pub retry: RetryPolicy,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            model_id: default_model(),
            temperature: default_temperature(),
            max_attempts: default_attempts(),
            request_timeout_ms: default_timeout(),
            endpoint_url: default_endpoint(),
            completion_budget: default_budget(),
            retry: RetryPolicy::default(),
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GatewayError> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(GatewayError::Param(format!(
                "temperature {} outside [0, 2]",
                self.temperature
            )));
        }
        if self.max_attempts < 1 {
            return Err(GatewayError::Param("max_attempts must be >= 1".into()));
        }
        if self.completion_budget < 1 {
            return Err(GatewayError::Param("completion_budget must be >= 1".into()));
        }
        if self.model_id.trim().is_empty() {
            return Err(GatewayError::Param("model_id is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error("http status {code}: {body}")]
    Status { code: u16, body: String },
    #[error("network: {0}")]
    Network(String),
    #[error("malformed response: {0}")]
    Malformed(String),
}

impl TransportError {
    fn is_auth(&self) -> bool {
        matches!(
            self,
            TransportError::Status {
                code: 401 | 403,
                ..
            }
        )
    }

    fn is_transient(&self) -> bool {
        match self {
            TransportError::Status { code, .. } => *code == 408 || *code == 429 || *code >= 500,
            TransportError::Network(_) => true,
            TransportError::Malformed(_) => false,
        }
    }
}

/// Sends one prompt and returns the completion text.
pub trait Transport: Send + Sync {
    fn send(&self, prompt: &str, params: &GenParams) -> Result<String, TransportError>;
    fn name(&self) -> &str;
}

pub struct HttpTransport {
    agent: ureq::Agent,
    api_key: String,
}

impl HttpTransport {
    /// Reads the credential from `SJT_FORGE_API_KEY`.
    pub fn from_env(params: &GenParams) -> Result<Self, GatewayError> {
        let key = std::env::var(API_KEY_VAR)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| GatewayError::Auth(format!("{API_KEY_VAR} is not set")))?;
        Ok(Self::new(key, params))
    }

    pub fn new(api_key: String, params: &GenParams) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(params.request_timeout_ms)))
            .http_status_as_error(false)
            .build()
            .into();
        HttpTransport { agent, api_key }
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    messages: [ChatMessage<'a>; 1],
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

/// Pulls `choices[0].message.content` out of a chat-completion response.
pub fn extract_content(body: &str) -> Result<String, TransportError> {
    let v: serde_json::Value =
        serde_json::from_str(body).map_err(|e| TransportError::Malformed(e.to_string()))?;
    v.pointer("/choices/0/message/content")
        .and_then(|c| c.as_str())
        .map(str::to_string)
        .ok_or_else(|| TransportError::Malformed("no choices[0].message.content".into()))
}

impl Transport for HttpTransport {
    fn send(&self, prompt: &str, params: &GenParams) -> Result<String, TransportError> {
        let body = serde_json::to_string(&ChatRequest {
            model: &params.model_id,
            temperature: params.temperature,
            messages: [ChatMessage {
                role: "user",
                content: prompt,
            }],
        })
        .expect("request serializes");
        let mut resp = self
            .agent
            .post(&params.endpoint_url)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .content_type("application/json")
            .send(&body)
            .map_err(|e| TransportError::Network(e.to_string()))?;
        let code = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportError::Network(e.to_string()))?;
        if !(200..300).contains(&code) {
            return Err(TransportError::Status { code, body: text });
        }
        extract_content(&text)
    }

    fn name(&self) -> &str {
        "http"
    }
}

/// One scripted reply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MockStep {
    Text {
        text: String,
    },
    File {
        file: PathBuf,
    },
    Status {
        status: u16,
        #[serde(default)]
        body: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MockReply {
    Plain(String),
    /// Consumed in order; the last step repeats.
    Sequence {
        sequence: Vec<MockStep>,
    },
    Step(MockStep),
}

impl MockReply {
    fn steps(&self) -> Vec<MockStep> {
        match self {
            MockReply::Plain(s) => vec![MockStep::Text { text: s.clone() }],
            MockReply::Sequence { sequence } => sequence.clone(),
            MockReply::Step(s) => vec![s.clone()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockRule {
    /// Case-insensitive substring of the prompt.
    pub contains: String,
    pub reply: MockReply,
}

/// Mock script: exact prompt hashes first, then substring rules, then the default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MockScript {
    #[serde(default)]
    pub by_hash: BTreeMap<String, MockReply>,
    #[serde(default)]
    pub rules: Vec<MockRule>,
    #[serde(default)]
    pub default: Option<MockReply>,
}

impl MockScript {
    pub fn reply(text: impl Into<String>) -> Self {
        MockScript {
            default: Some(MockReply::Plain(text.into())),
            ..Default::default()
        }
    }
}

pub struct MockTransport {
    script: MockScript,
    base_dir: PathBuf,
    cursors: Mutex<HashMap<String, usize>>,
}

impl MockTransport {
    pub fn new(script: MockScript) -> Self {
        MockTransport {
            script,
            base_dir: PathBuf::from("."),
            cursors: Mutex::new(HashMap::new()),
        }
    }

    /// Loads a JSON script; `file` steps resolve relative to its directory.
    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GatewayError::Mock(format!("{}: {e}", path.display())))?;
        let script: MockScript = serde_json::from_str(&text)
            .map_err(|e| GatewayError::Mock(format!("{}: {e}", path.display())))?;
        let mut t = MockTransport::new(script);
        t.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(t)
    }

    fn lookup(&self, prompt: &str) -> Option<(String, &MockReply)> {
        let hash = sha256_hex(prompt.as_bytes());
        if let Some(r) = self.script.by_hash.get(&hash) {
            return Some((format!("hash:{hash}"), r));
        }
        let lower = prompt.to_lowercase();
        for (i, rule) in self.script.rules.iter().enumerate() {
            if lower.contains(&rule.contains.to_lowercase()) {
                return Some((format!("rule:{i}"), &rule.reply));
            }
        }
        self.script
            .default
            .as_ref()
            .map(|r| ("default".to_string(), r))
    }
}

impl Transport for MockTransport {
    fn send(&self, prompt: &str, _params: &GenParams) -> Result<String, TransportError> {
        let (key, reply) = self.lookup(prompt).ok_or_else(|| TransportError::Status {
            code: 404,
            body: "no mock reply for prompt".into(),
        })?;
        let steps = reply.steps();
        if steps.is_empty() {
            return Err(TransportError::Malformed("empty mock sequence".into()));
        }
        let idx = {
            let mut cursors = self.cursors.lock().expect("mock cursor lock");
            let c = cursors.entry(key).or_insert(0);
            let idx = (*c).min(steps.len() - 1);
            *c += 1;
            idx
        };
        match &steps[idx] {
            MockStep::Text { text } => Ok(text.clone()),
            MockStep::File { file } => std::fs::read_to_string(self.base_dir.join(file))
                .map_err(|e| TransportError::Malformed(format!("{}: {e}", file.display()))),
            MockStep::Status { status, body } => Err(TransportError::Status {
                code: *status,
                body: body.clone(),
            }),
        }
    }

    fn name(&self) -> &str {
        "mock"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Clock {
    System,
    /// Always reports this RFC 3339 timestamp.
    Fixed(String),
}

impl Clock {
    pub fn now(&self) -> String {
        match self {
            Clock::System => chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            Clock::Fixed(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRecord {
    pub prompt_hash: String,
    pub raw_text: String,
    pub params: GenParams,
    pub timestamp: String,
    pub attempts: u32,
    pub transport: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenerationDiagnostics {
    pub prompt_hash: String,
    pub completions: u32,
    /// Scenario blocks seen across all completions.
    pub blocks: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// Accepted blocks whose scenario text was already collected.
    pub duplicates: usize,
    pub issue_counts: BTreeMap<IssueCode, usize>,
    /// Issues with the 1-based completion they came from.
    pub rejected_scenarios: Vec<(u32, ParseIssue)>,
    pub warnings: Vec<String>,
    pub records: Vec<CompletionRecord>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GatewayError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("gave up after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: TransportError },
    #[error("request rejected: {0}")]
    Rejected(TransportError),
    #[error("mock script: {0}")]
    Mock(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("wanted {want} items, got {}", items.len())]
    PartialGeneration {
        want: usize,
        items: Vec<SjtItem>,
        diagnostics: Box<GenerationDiagnostics>,
    },
}

pub struct Gateway {
    transport: Box<dyn Transport>,
    clock: Clock,
}

impl Gateway {
    pub fn new(transport: Box<dyn Transport>, clock: Clock) -> Self {
        Gateway { transport, clock }
    }

    pub fn mock(script: MockScript) -> Self {
        Gateway::new(
            Box::new(MockTransport::new(script)),
            Clock::Fixed(MOCK_TIMESTAMP.into()),
        )
    }

    pub fn transport_name(&self) -> &str {
        self.transport.name()
    }

    /// Sends `prompt`, retrying transient failures with exponential backoff.
    pub fn complete(
        &self,
        prompt: &PromptText,
        params: &GenParams,
    ) -> Result<CompletionRecord, GatewayError> {
        params.validate()?;
        let prompt_hash = prompt.hash();
        let seed = u64::from_str_radix(&prompt_hash[..16], 16).unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut last = None;
        for attempt in 1..=params.max_attempts {
            let result = match self.transport.send(&prompt.text, params) {
                Ok(text) if text.trim().is_empty() => {
                    Err(TransportError::Malformed("empty completion".into()))
                }
                other => other,
            };
            match result {
                Ok(raw_text) => {
                    return Ok(CompletionRecord {
                        prompt_hash,
                        raw_text,
                        params: params.clone(),
                        timestamp: self.clock.now(),
                        attempts: attempt,
                        transport: self.transport.name().to_string(),
                    })
                }
                Err(e) if e.is_auth() => return Err(GatewayError::Auth(e.to_string())),
                Err(e) if e.is_transient() || matches!(e, TransportError::Malformed(_)) => {
                    log::debug!("attempt {attempt} failed: {e}");
                    if attempt < params.max_attempts {
                        std::thread::sleep(params.retry.delay(attempt, &mut rng));
                    }
                    last = Some(e);
                }
                Err(e) => return Err(GatewayError::Rejected(e)),
            }
        }
        Err(GatewayError::Exhausted {
            attempts: params.max_attempts,
            last: last.expect("at least one attempt"),
        })
    }

    /// Requests completions and parses them until `want` distinct valid items
    /// are collected or the completion budget runs out.
    pub fn generate_items(
        &self,
        spec: &PromptSpec,
        params: &GenParams,
        want: usize,
    ) -> Result<(Vec<SjtItem>, GenerationDiagnostics), GatewayError> {
        if want < 1 {
            return Err(GatewayError::Param("want must be >= 1".into()));
        }
        params.validate()?;
        let prompt = build_prompt(spec)?;
        let mut diag = GenerationDiagnostics {
            prompt_hash: prompt.hash(),
            ..Default::default()
        };
        if params.temperature >= HIGH_TEMPERATURE {
            let msg = format!(
                "temperature {} is at or above {HIGH_TEMPERATURE}; completions tend to lose \
                 coherence and fail to parse",
                params.temperature
            );
            log::warn!("{msg}");
            diag.warnings.push(msg);
        }
        let mut items: Vec<SjtItem> = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        for call in 1..=params.completion_budget {
            let record = self.complete(&prompt, params)?;
            diag.completions = call;
            let config = ParserConfig {
                rules: ItemRules::with_sentinel(spec.question_sentinel.clone()),
                delimiter: spec.delimiter.clone(),
                provenance: Provenance {
                    kind: ProvenanceKind::LlmGenerated,
                    prompt_version: Some(spec.version.to_string()),
                    model_id: Some(params.model_id.clone()),
                    temperature: Some(params.temperature),
                    timestamp: Some(record.timestamp.clone()),
                },
            };
            let parsed = parse_items_with(&record.raw_text, spec.facet, &config);
            diag.blocks += parsed.block_count;
            diag.rejected += parsed.rejected_blocks();
            diag.accepted += parsed.items.len();
            for issue in parsed.issues {
                *diag.issue_counts.entry(issue.code).or_insert(0) += 1;
                diag.rejected_scenarios.push((call, issue));
            }
            diag.records.push(record);
            for item in parsed.items {
                if !seen.insert(item.scenario.trim().to_string()) {
                    diag.duplicates += 1;
                    continue;
                }
                if items.len() < want {
                    items.push(item);
                }
            }
            if items.len() >= want {
                break;
            }
        }
        for (i, item) in items.iter_mut().enumerate() {
            item.item_id = format!("{}-{}", spec.facet.id(), i + 1);
        }
        if items.len() < want {
            return Err(GatewayError::PartialGeneration {
                want,
                items,
                diagnostics: Box::new(diag),
            });
        }
        Ok((items, diag))
    }

    /// Runs several generation jobs with at most `max_in_flight` concurrent
    /// calls. Results keep job order.
    pub fn generate_batch(
        &self,
        jobs: &[(PromptSpec, usize)],
        params: &GenParams,
        max_in_flight: usize,
    ) -> Vec<Result<(Vec<SjtItem>, GenerationDiagnostics), GatewayError>> {
        let workers = max_in_flight.clamp(1, jobs.len().max(1));
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<_>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some((spec, want)) = jobs.get(i) else {
                        break;
                    };
                    let r = self.generate_items(spec, params, *want);
                    *slots[i].lock().expect("slot lock") = Some(r);
                });
            }
        });
        slots
            .into_iter()
            .map(|m| m.into_inner().expect("slot lock").expect("job ran"))
            .collect()
    }
}

/// Timestamp reported in mock mode so runs are reproducible.
pub const MOCK_TIMESTAMP: &str = "2024-01-01T00:00:00Z";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item_model::{validate_item, Facet};
    use crate::item_parser::render_items;
    use crate::prompt_forge::{default_examples, PromptVersion};

    fn fast() -> GenParams {
        GenParams {
            retry: RetryPolicy {
                base_ms: 1,
                ..RetryPolicy::default()
            },
            ..GenParams::default()
        }
    }

    fn seven_items_text() -> String {
        let base = default_examples(Facet::SelfConsciousness);
        let items: Vec<SjtItem> = (0..7)
            .map(|i| {
                let mut it = base[i % 2].clone();
                it.scenario = format!("Variant {i}. {}", it.scenario);
                it
            })
            .collect();
        render_items(&items)
    }

    #[test]
    fn mock_echo() {
        let g = Gateway::mock(MockScript::reply("hello"));
        let r = g.complete(&PromptText::raw("x"), &fast()).unwrap();
        assert_eq!(r.raw_text, "hello");
        assert_eq!(r.attempts, 1);
        assert_eq!(r.timestamp, MOCK_TIMESTAMP);
        assert_eq!(r.prompt_hash, PromptText::raw("x").hash());
    }

    #[test]
    fn temperature_out_of_range() {
        let g = Gateway::mock(MockScript::reply("hello"));
        let p = GenParams {
            temperature: 2.5,
            ..fast()
        };
        assert!(matches!(
            g.complete(&PromptText::raw("x"), &p),
            Err(GatewayError::Param(_))
        ));
        let p = GenParams {
            temperature: -0.1,
            ..fast()
        };
        assert!(p.validate().is_err());
        let p = GenParams {
            temperature: 2.0,
            ..fast()
        };
        assert!(p.validate().is_ok());
    }

    fn sequence(steps: Vec<MockStep>) -> MockScript {
        MockScript {
            default: Some(MockReply::Sequence { sequence: steps }),
            ..Default::default()
        }
    }

    #[test]
    fn retries_429_then_succeeds() {
        let s = sequence(vec![
            MockStep::Status {
                status: 429,
                body: String::new(),
            },
            MockStep::Status {
                status: 429,
                body: String::new(),
            },
            MockStep::Text { text: "ok".into() },
        ]);
        let r = Gateway::mock(s)
            .complete(&PromptText::raw("x"), &fast())
            .unwrap();
        assert_eq!(r.attempts, 3);
        assert_eq!(r.raw_text, "ok");
    }

    #[test]
    fn exhausted_and_auth() {
        let s = sequence(vec![MockStep::Status {
            status: 503,
            body: "down".into(),
        }]);
        match Gateway::mock(s).complete(&PromptText::raw("x"), &fast()) {
            Err(GatewayError::Exhausted { attempts, last }) => {
                assert_eq!(attempts, 3);
                assert!(matches!(last, TransportError::Status { code: 503, .. }));
            }
            other => panic!("{other:?}"),
        }
        let s = sequence(vec![MockStep::Status {
            status: 401,
            body: String::new(),
        }]);
        assert!(matches!(
            Gateway::mock(s).complete(&PromptText::raw("x"), &fast()),
            Err(GatewayError::Auth(_))
        ));
        let s = sequence(vec![MockStep::Status {
            status: 400,
            body: String::new(),
        }]);
        assert!(matches!(
            Gateway::mock(s).complete(&PromptText::raw("x"), &fast()),
            Err(GatewayError::Rejected(_))
        ));
    }

    #[test]
    fn backoff_schedule() {
        let p = RetryPolicy::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for retry in 1..=4 {
            let nominal = 1000.0 * 2f64.powi(retry as i32 - 1);
            let d = p.delay(retry, &mut rng).as_secs_f64() * 1000.0;
            assert!(
                d >= nominal * 0.8 - 1e-9 && d <= nominal * 1.2 + 1e-9,
                "{d}"
            );
        }
    }

    #[test]
    fn script_lookup_order() {
        let prompt = PromptText::raw("Trait: gregariousness");
        let mut by_hash = BTreeMap::new();
        by_hash.insert(prompt.hash(), MockReply::Plain("by hash".into()));
        let script = MockScript {
            by_hash,
            rules: vec![MockRule {
                contains: "GREGARIOUS".into(),
                reply: MockReply::Plain("by rule".into()),
            }],
            default: Some(MockReply::Plain("fallback".into())),
        };
        let g = Gateway::mock(script);
        assert_eq!(g.complete(&prompt, &fast()).unwrap().raw_text, "by hash");
        let other = PromptText::raw("some gregariousness prompt");
        assert_eq!(g.complete(&other, &fast()).unwrap().raw_text, "by rule");
        let none = PromptText::raw("unrelated");
        assert_eq!(g.complete(&none, &fast()).unwrap().raw_text, "fallback");
    }

    #[test]
    fn script_json_forms() {
        let json = r#"{
            "rules": [{"contains": "a", "reply": {"sequence": [{"status": 429}, {"text": "t"}]}}],
            "default": "plain"
        }"#;
        let s: MockScript = serde_json::from_str(json).unwrap();
        assert_eq!(s.default, Some(MockReply::Plain("plain".into())));
        assert!(matches!(s.rules[0].reply, MockReply::Sequence { .. }));
    }

    #[test]
    fn seven_scenario_completion_yields_seven() {
        let g = Gateway::mock(MockScript::reply(seven_items_text()));
        let spec = PromptSpec::default_for(PromptVersion::V1, Facet::SelfConsciousness);
        let (items, diag) = g.generate_items(&spec, &fast(), 7).unwrap();
        assert_eq!(items.len(), 7);
        assert_eq!(diag.accepted + diag.rejected, diag.blocks);
        assert_eq!(items[0].item_id, "self_consciousness-1");
        assert_eq!(items[6].item_id, "self_consciousness-7");
        for it in &items {
            assert!(validate_item(it).is_ok());
            assert_eq!(it.provenance.prompt_version.as_deref(), Some("v1"));
            assert_eq!(it.provenance.model_id.as_deref(), Some(DEFAULT_MODEL));
        }
        assert!(diag.warnings.is_empty());
    }

    #[test]
    fn three_keyed_scenario_is_rejected() {
        let text = seven_items_text().replacen(
            "Scoring: A: 1 point; B: 1 point; C: 0 points;",
            "Scoring: A: 1 point; B: 1 point; C: 1 point;",
            1,
        );
        let g = Gateway::mock(MockScript::reply(text));
        let spec = PromptSpec::default_for(PromptVersion::V1, Facet::SelfConsciousness);
        let err = g.generate_items(&spec, &fast(), 7).unwrap_err();
        let GatewayError::PartialGeneration {
            items, diagnostics, ..
        } = err
        else {
            panic!("expected partial generation");
        };
        assert_eq!(items.len(), 6);
        assert_eq!(
            diagnostics.issue_counts[&IssueCode::ScoringNot22],
            diagnostics.completions as usize
        );
        assert_eq!(
            diagnostics.accepted + diagnostics.rejected,
            diagnostics.blocks
        );
        assert_eq!(diagnostics.completions, fast().completion_budget);
        // Later completions repeat the same scenarios.
        assert_eq!(diagnostics.duplicates, 6 * 3);
    }

    #[test]
    fn high_temperature_warns() {
        let g = Gateway::mock(MockScript::reply(seven_items_text()));
        let spec = PromptSpec::default_for(PromptVersion::V1, Facet::SelfConsciousness);
        let p = GenParams {
            temperature: 1.5,
            ..fast()
        };
        let (_, diag) = g.generate_items(&spec, &p, 3).unwrap();
        assert_eq!(diag.warnings.len(), 1);
        assert!(diag.warnings[0].contains("coherence"));
    }

    #[test]
    fn deterministic_with_mock() {
        let spec = PromptSpec::default_for(PromptVersion::V2, Facet::SelfConsciousness);
        let run = || {
            Gateway::mock(MockScript::reply(seven_items_text()))
                .generate_items(&spec, &fast(), 7)
                .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn batch_keeps_order() {
        let g = Gateway::mock(MockScript::reply(seven_items_text()));
        let jobs: Vec<(PromptSpec, usize)> =
            [PromptVersion::V0, PromptVersion::V1, PromptVersion::V2]
                .iter()
                .map(|v| (PromptSpec::default_for(*v, Facet::SelfConsciousness), 7))
                .collect();
        let out = g.generate_batch(&jobs, &fast(), 2);
        assert_eq!(out.len(), 3);
        for (r, (spec, _)) in out.iter().zip(&jobs) {
            let (items, _) = r.as_ref().unwrap();
            assert_eq!(
                items[0].provenance.prompt_version.as_deref(),
                Some(spec.version.as_str())
            );
        }
    }

    #[test]
    fn extract_chat_content() {
        let body = r#"{"choices":[{"message":{"role":"assistant","content":"hi"}}]}"#;
        assert_eq!(extract_content(body).unwrap(), "hi");
        assert!(extract_content("{}").is_err());
    }

    #[test]
    fn missing_key_is_auth_error() {
        if std::env::var(API_KEY_VAR).is_err() {
            assert!(matches!(
                HttpTransport::from_env(&GenParams::default()),
                Err(GatewayError::Auth(_))
            ));
        }
    }
}
