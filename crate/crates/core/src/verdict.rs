//! Conjugacy verdicts and the witnesses that back a negative answer.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    None,
    InvalidCode,
    NotInjective,
    NotSurjective,
}

/// Evidence for a failure. Cycles and words are arrays of vertex symbols
/// (edge labels for edge shifts); traces are decimal strings because they
/// outgrow every fixed-width integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two distinct cycles with the same image.
    CyclePair {
        first: Vec<String>,
        second: Vec<String>,
        image: Vec<String>,
    },
    /// The least power whose cycle counts differ.
    TraceMismatch {
        power: usize,
        source_trace: String,
        target_trace: String,
    },
    /// Words `prefix left suffix` and `prefix right suffix` with the same image.
    Diamond {
        prefix: Vec<String>,
        left: Vec<String>,
        right: Vec<String>,
        suffix: Vec<String>,
    },
    /// A word of the target shift that is not the image of any source word.
    UnreachedWord { word: Vec<String> },
    /// A table entry (or missing entry) that makes the code ill-defined.
    BadBlock { word: Vec<String>, problem: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub is_conjugacy: bool,
    pub failure: Failure,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn conjugacy() -> Self {
        Self { is_conjugacy: true, failure: Failure::None, witness: None }
    }

    pub fn failed(failure: Failure, witness: Option<Witness>) -> Self {
        debug_assert_ne!(failure, Failure::None);
        Self { is_conjugacy: false, failure, witness }
    }

    pub fn invalid(word: Vec<String>, problem: impl Into<String>) -> Self {
        Self::failed(
            Failure::InvalidCode,
            Some(Witness::BadBlock { word, problem: problem.into() }),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdicts serialize")
    }
}
