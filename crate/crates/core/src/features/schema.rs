use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ecg::{F1_NAMES, F2_NAMES, F3_NAMES, F4_NAMES};
use crate::eda::F5_NAMES;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureSet {
    F1,
    F2,
    F3,
    F4,
    F5,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 5] = [Self::F1, Self::F2, Self::F3, Self::F4, Self::F5];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn names(self) -> &'static [&'static str] {
        match self {
            Self::F1 => &F1_NAMES,
            Self::F2 => &F2_NAMES,
            Self::F3 => &F3_NAMES,
            Self::F4 => &F4_NAMES,
            Self::F5 => &F5_NAMES,
        }
    }

    /// F1–F4 come from the ECG, F5 from the EDA.
    pub fn is_cardiac(self) -> bool {
        self != Self::F5
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.index() + 1)
    }
}

impl FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|set| set.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown feature set {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Column {
    pub set: FeatureSet,
    pub name: String,
}

impl Column {
    pub fn new(set: FeatureSet, name: impl Into<String>) -> Self {
        Self { set, name: name.into() }
    }

    /// CSV header form, `feature:<set>:<name>`.
    pub fn header(&self) -> String {
        format!("feature:{}:{}", self.set, self.name)
    }

    pub fn parse_header(h: &str) -> Option<Self> {
        let rest = h.strip_prefix("feature:")?;
        let (set, name) = rest.split_once(':')?;
        Some(Self::new(set.parse().ok()?, name))
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// All 52 columns in extraction order.
pub fn full_schema() -> Vec<Column> {
    FeatureSet::ALL
        .into_iter()
        .flat_map(|set| set.names().iter().map(move |n| Column::new(set, *n)))
        .collect()
}

/// A non-empty subset of the five feature sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureCombo(u8);

impl FeatureCombo {
    pub const ALL: FeatureCombo = FeatureCombo(0b11111);

    pub fn new(sets: &[FeatureSet]) -> Result<Self> {
        let mask = sets.iter().fold(0u8, |m, s| m | 1 << s.index());
        if mask == 0 {
            return Err(Error::Config("feature combination must not be empty".into()));
        }
        Ok(Self(mask))
    }

    pub fn single(set: FeatureSet) -> Self {
        Self(1 << set.index())
    }

    pub fn contains(self, set: FeatureSet) -> bool {
        self.0 & (1 << set.index()) != 0
    }

    pub fn sets(self) -> Vec<FeatureSet> {
        FeatureSet::ALL.into_iter().filter(|s| self.contains(*s)).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FeatureCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sets().iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for FeatureCombo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::ALL);
        }
        let sets = s.split('+').map(str::parse).collect::<Result<Vec<FeatureSet>>>()?;
        Self::new(&sets)
    }
}

impl Serialize for FeatureCombo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureCombo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 31 combinations ordered by size, then lexicographically by set.
pub fn enumerate_combos() -> Vec<FeatureCombo> {
    let mut all: Vec<FeatureCombo> = (1u8..32).map(FeatureCombo).collect();
    all.sort_by_key(|c| (c.len(), c.sets()));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_sizes() {
        let s = full_schema();
        assert_eq!(s.len(), 52);
        let count = |set| s.iter().filter(|c| c.set == set).count();
        assert_eq!(
            FeatureSet::ALL.map(count),
            [5, 4, 21, 6, 16]
        );
    }

    #[test]
    fn combo_order() {
        let c = enumerate_combos();
        assert_eq!(c.len(), 31);
        assert_eq!(c[0], FeatureCombo::single(FeatureSet::F1));
        assert_eq!(c.iter().filter(|x| x.len() == 2).count(), 10);
        assert_eq!(c[5].to_string(), "F1+F2");
        assert_eq!(c[14].to_string(), "F4+F5");
        assert_eq!(c[30], FeatureCombo::ALL);
    }

    #[test]
    fn parse_round_trip() {
        for c in enumerate_combos() {
            assert_eq!(c.to_string().parse::<FeatureCombo>().unwrap(), c);
        }
        assert!("".parse::<FeatureCombo>().is_err());
        assert!("F6".parse::<FeatureCombo>().is_err());
        let col = Column::new(FeatureSet::F3, "SD1");
        assert_eq!(Column::parse_header(&col.header()), Some(col));
    }
}
