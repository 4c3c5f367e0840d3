use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::PaqResponses;

pub const ANXIOUS_THRESHOLD: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Anxious,
    NonAnxious,
}

impl Label {
    pub fn from_bool(anxious: bool) -> Self {
        if anxious {
            Self::Anxious
        } else {
            Self::NonAnxious
        }
    }

    pub fn is_anxious(self) -> bool {
        self == Self::Anxious
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Anxious => "Anxious",
            Self::NonAnxious => "NonAnxious",
        })
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Anxious" | "1" => Ok(Self::Anxious),
            "NonAnxious" | "0" => Ok(Self::NonAnxious),
            other => Err(Error::Data(format!("unknown label {other:?}"))),
        }
    }
}

/// Questionnaire total with Q2 reverse-scored.
pub fn paq_score(r: &PaqResponses) -> u32 {
    let [q1, q2, q3, q4, q5] = r.scores.map(u32::from);
    q1 + (6 - q2) + q3 + q4 + q5
}

pub fn label_from_paq(r: &PaqResponses) -> Label {
    Label::from_bool(paq_score(r) >= ANXIOUS_THRESHOLD)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paq(s: [u8; 5]) -> PaqResponses {
        PaqResponses::new("p", "a", s).unwrap()
    }

    #[test]
    fn scoring() {
        assert_eq!(paq_score(&paq([3, 3, 3, 3, 3])), 15);
        assert_eq!(label_from_paq(&paq([3, 3, 3, 3, 3])), Label::Anxious);
        assert_eq!(paq_score(&paq([1, 5, 1, 1, 1])), 5);
        assert_eq!(label_from_paq(&paq([1, 5, 1, 1, 1])), Label::NonAnxious);
        assert_eq!(paq_score(&paq([5, 1, 5, 5, 5])), 25);
    }
}
