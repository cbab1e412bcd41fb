//! Finite stage tables: "n enters the set at stage s".
//!
//! A genuinely incomputable enumerated set cannot be materialized, so the
//! whole pipeline is parametric in a finite stage table; everything
//! downstream depends only on the relation "n has entered by stage s".

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StagedError {
    #[error("index {0} out of range (n_max = {1})")]
    OutOfRange(u32, u32),
    #[error("duplicate entry for n = {0}")]
    Duplicate(u32),
    #[error("stage {1} for n = {0} exceeds s_max = {2}")]
    StageOutOfRange(u32, u32, u32),
    #[error("malformed stage table: {0}")]
    Malformed(String),
}

/// Finite model of an enumerated set with stage annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedSet {
    pub n_max: u32,
    pub s_max: u32,
    entries: BTreeMap<u32, u32>,
}

/// On-disk form: order-insensitive list of `[n, s]` pairs.
#[derive(Serialize, Deserialize)]
struct StageTableDoc {
    n_max: u32,
    s_max: u32,
    entries: Vec<(u32, u32)>,
}

impl StagedSet {
    pub fn new(n_max: u32, s_max: u32, entries: &[(u32, u32)]) -> Result<Self, StagedError> {
        let mut map = BTreeMap::new();
        for &(n, s) in entries {
            if n > n_max {
                return Err(StagedError::OutOfRange(n, n_max));
            }
            if s > s_max {
                return Err(StagedError::StageOutOfRange(n, s, s_max));
            }
            if map.insert(n, s).is_some() {
                return Err(StagedError::Duplicate(n));
            }
        }
        Ok(StagedSet {
            n_max,
            s_max,
            entries: map,
        })
    }

    pub fn empty(n_max: u32, s_max: u32) -> Self {
        StagedSet {
            n_max,
            s_max,
            entries: BTreeMap::new(),
        }
    }

    /// Stage at which `n` enters, if it ever does.
    pub fn stage_of(&self, n: u32) -> Option<u32> {
        self.entries.get(&n).copied()
    }

    /// True iff `n` has entered by stage `s`.
    pub fn member_at(&self, n: u32, s: u32) -> Result<bool, StagedError> {
        if n > self.n_max {
            return Err(StagedError::OutOfRange(n, self.n_max));
        }
        Ok(self.entries.get(&n).is_some_and(|&s0| s0 <= s))
    }

    pub fn members(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().map(|(&n, &s)| (n, s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_json(source: &str) -> Result<Self, StagedError> {
        let doc: StageTableDoc =
            serde_json::from_str(source).map_err(|e| StagedError::Malformed(e.to_string()))?;
        StagedSet::new(doc.n_max, doc.s_max, &doc.entries)
    }

    pub fn to_json(&self) -> String {
        let doc = StageTableDoc {
            n_max: self.n_max,
            s_max: self.s_max,
            entries: self.entries.iter().map(|(&n, &s)| (n, s)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("stage table serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_at_examples() {
        let s = StagedSet::new(4, 9, &[(0, 2)]).unwrap();
        assert!(!s.member_at(0, 1).unwrap());
        assert!(s.member_at(0, 2).unwrap());
        let empty = StagedSet::empty(10, 100);
        assert!(!empty.member_at(5, 100).unwrap());
    }

    #[test]
    fn member_at_out_of_range() {
        let s = StagedSet::new(4, 9, &[]).unwrap();
        assert_eq!(s.member_at(5, 0), Err(StagedError::OutOfRange(5, 4)));
    }

    #[test]
    fn load_examples() {
        let s = StagedSet::from_json(r#"{"n_max":4,"s_max":9,"entries":[[0,2],[2,5]]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.stage_of(2), Some(5));

        let err = StagedSet::from_json(r#"{"n_max":4,"s_max":9,"entries":[[0,2],[0,3]]}"#);
        assert_eq!(err, Err(StagedError::Duplicate(0)));

        let err = StagedSet::from_json(r#"{"n_max":4,"s_max":9,"entries":[[1,99]]}"#);
        assert_eq!(err, Err(StagedError::StageOutOfRange(1, 99, 9)));
    }

    #[test]
    fn roundtrip_is_order_insensitive() {
        let a = StagedSet::from_json(r#"{"n_max":4,"s_max":9,"entries":[[2,5],[0,2]]}"#).unwrap();
        let b = StagedSet::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn monotonicity() {
        let set = StagedSet::new(8, 12, &[(1, 3), (4, 0), (7, 12)]).unwrap();
        for n in 0..=8 {
            for s in 0..12 {
                if set.member_at(n, s).unwrap() {
                    assert!(set.member_at(n, s + 1).unwrap());
                }
            }
            assert_eq!(set.member_at(n, 12).unwrap(), set.stage_of(n).is_some());
        }
    }
}
