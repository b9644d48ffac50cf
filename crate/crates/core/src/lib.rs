//! Generation and validation toolkit for personality situational judgment tests.
//!
//! The crate covers the full loop: prompt assembly for an LLM, the chat
//! completion gateway, parsing of completions into scored items, expert
//! content-validity analysis, classical psychometrics on respondent data,
//! and a latent-trait simulator that stands in for human data.

pub mod content_validity;
pub mod item_model;
pub mod item_parser;
pub mod llm_gateway;
pub mod pipeline;
pub mod prompt_forge;
pub mod psychometrics;
pub mod report;
pub mod respondent_sim;
pub mod stats;
mod text;

pub use item_model::{Facet, ItemBank, Label, SjtItem};
