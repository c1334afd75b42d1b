//! Templated SMS-like corpus for exercising the pipeline without the real
//! dataset. Spam and ham draw from disjoint phrase pools with some shared
//! filler, so a working pipeline separates them well but not trivially.

use fehd_core::spam::{Dataset, Label};
use fehd_core::HvRng;
use rand::seq::IndexedRandom;
use rand::Rng;

const HAM_HEADS: &[&str] = &[
    "hey are we still on for",
    "sorry i cant make it to",
    "ok see you at",
    "dont forget to pick up",
    "im running late for",
    "did you finish",
    "can you call me after",
    "lol that was funny at",
    "mum says come home before",
    "what time is",
];
const HAM_TAILS: &[&str] = &[
    "lunch today", "the meeting", "dinner tonight", "the station", "class tomorrow", "the gym",
    "work", "the party", "our game", "the shops",
];
const SPAM_HEADS: &[&str] = &[
    "URGENT! you have won a",
    "FREE entry to win a",
    "Congratulations ur awarded a",
    "Claim your guaranteed",
    "WINNER!! txt CLAIM to receive a",
    "Call now to collect your",
    "You are selected for a",
    "Reply YES for a free",
];
const SPAM_TAILS: &[&str] = &[
    "1000 cash prize", "brand new mobile", "holiday voucher", "ringtone club membership",
    "150p/msg reward", "gift card worth 500", "camera phone upgrade",
];
const FILLER: &[&str] = &["now", "today", "ok", "pls", "x", "thanks", "asap", "soon"];

pub fn message(rng: &mut HvRng, label: Label) -> String {
    let (heads, tails) = match label {
        Label::Ham => (HAM_HEADS, HAM_TAILS),
        Label::Spam => (SPAM_HEADS, SPAM_TAILS),
    };
    let mut s = format!("{} {}", heads.choose(rng).unwrap(), tails.choose(rng).unwrap());
    if rng.random_bool(0.5) {
        s.push(' ');
        s.push_str(FILLER.choose(rng).unwrap());
    }
    if label == Label::Spam && rng.random_bool(0.6) {
        s.push_str(&format!(" call 0{}", rng.random_range(8_000_000_000u64..9_000_000_000)));
    }
    s
}

pub fn corpus(n: usize, spam_fraction: f64, seed: u64) -> Dataset {
    let mut rng = HvRng::new(seed);
    let records: Vec<(Label, String)> = (0..n)
        .map(|_| {
            let label = if rng.random_bool(spam_fraction) { Label::Spam } else { Label::Ham };
            (label, message(&mut rng, label))
        })
        .collect();
    Dataset::from_records(records)
}

pub fn to_tsv(ds: &Dataset) -> String {
    ds.records
        .iter()
        .map(|r| format!("{}\t{}\n", r.label, r.text))
        .collect()
}
