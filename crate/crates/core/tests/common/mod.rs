#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use sjt_forge::{Facet, ItemBank, SjtItem};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

const WORDS: &[&str] = &[
    "you",
    "colleague",
    "meeting",
    "friend",
    "late",
    "party",
    "the",
    "a",
    "quietly",
    "loud",
    "project",
    "deadline",
    "neighbour",
    "asks",
    "forgot",
    "train",
    "rules",
    "manager",
    "idea",
    "unusual",
    "museum",
    "book",
    "discuss",
    "ignore",
    "politely",
    "decline",
    "join",
    "plan",
    "café",
    "会议",
    "朋友",
    "准时",
    "2024",
    "x-ray",
    "well-known",
    "don't",
    "(maybe)",
    "100%",
];

fn phrase<R: Rng>(rng: &mut R, min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    let mut s: Vec<&str> = (0..n)
        .map(|_| WORDS[rng.random_range(0..WORDS.len())])
        .collect();
    if rng.random_bool(0.3) && n > 2 {
        let i = rng.random_range(1..n - 1);
        s[i] = "and,";
    }
    let text = s.join(" ");
    let mut c = text.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => text,
    }
}

/// A valid item as the parser would number it: id `<facet>-<n>`, default provenance.
pub fn random_item<R: Rng>(rng: &mut R, facet: Facet, n: usize) -> SjtItem {
    let scenario = format!("{}. What would you do?", phrase(rng, 4, 30));
    let opts: Vec<String> = (0..4)
        .map(|_| format!("I would {}.", phrase(rng, 1, 15).to_lowercase()))
        .collect();
    let mut key = [1u8, 1, 0, 0];
    key.shuffle(rng);
    SjtItem::new(
        format!("{}-{n}", facet.id()),
        facet,
        scenario,
        [&opts[0], &opts[1], &opts[2], &opts[3]],
        key,
    )
}

/// `k` placeholder items per facet with alternating keys.
pub fn synthetic_bank(k: usize) -> ItemBank {
    let items = Facet::ALL.iter().flat_map(|f| {
        (1..=k).map(move |i| {
            SjtItem::new(
                format!("{}-{i}", f.id()),
                *f,
                "Placeholder. What would you do?",
                ["a", "b", "c", "d"],
                [1, 0, 1, 0],
            )
        })
    });
    ItemBank::from_items("synthetic", items).unwrap()
}
