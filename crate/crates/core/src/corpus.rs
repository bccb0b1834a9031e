//! The shipped example files.

use crate::dsl::{load_str, Environment};
use crate::logic::Logic;

pub const CLASSICAL: &str = include_str!("../corpus/classical.logic");
pub const FRAGMENTS: &str = include_str!("../corpus/fragments.logic");
pub const LUKASIEWICZ: &str = include_str!("../corpus/lukasiewicz.logic");
pub const EXTREMES: &str = include_str!("../corpus/extremes.logic");
pub const NONCONGRUENTIAL: &str = include_str!("../corpus/noncongruential.logic");

/// File name and contents of every corpus file.
pub const FILES: &[(&str, &str)] = &[
    ("classical.logic", CLASSICAL),
    ("fragments.logic", FRAGMENTS),
    ("lukasiewicz.logic", LUKASIEWICZ),
    ("extremes.logic", EXTREMES),
    ("noncongruential.logic", NONCONGRUENTIAL),
];

fn env(text: &str) -> Environment {
    load_str(text).expect("corpus files are valid")
}

pub fn classical() -> Environment {
    env(CLASSICAL)
}

pub fn fragments() -> Environment {
    env(FRAGMENTS)
}

pub fn lukasiewicz() -> Environment {
    env(LUKASIEWICZ)
}

pub fn extremes() -> Environment {
    env(EXTREMES)
}

pub fn noncongruential() -> Environment {
    env(NONCONGRUENTIAL)
}

/// Looks a logic up by name in the classical environment.
pub fn classical_logic(name: &str) -> Logic {
    classical().logic(name).cloned().expect("corpus logic")
}

/// Every logic of every corpus file, with the file it comes from.
pub fn all_logics() -> Vec<(&'static str, Logic)> {
    FILES
        .iter()
        .flat_map(|(file, text)| env(text).logics.into_values().map(move |l| (*file, l)))
        .collect()
}
