use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of externally computed rank-zero parameter values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankFixtureEntry {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[i64; 2]>,
    pub rank0_values: Vec<i64>,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum FixtureFile {
    Many(Vec<RankFixtureEntry>),
    One(RankFixtureEntry),
}

/// Rank-zero assertions, never computed here; each row keeps its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankFixture {
    entries: Vec<RankFixtureEntry>,
}

const TABLE1: &str = include_str!("../../fixtures/table1.json");
const DD_P7: &str = include_str!("../../fixtures/dd_p7.json");
const XPX: &str = include_str!("../../fixtures/xpx.json");

impl RankFixture {
    pub fn from_json(src: &str) -> Result<Self> {
        let file: FixtureFile = serde_json::from_str(src).map_err(|e| Error::InvalidDocument(e.to_string()))?;
        let entries = match file {
            FixtureFile::Many(v) => v,
            FixtureFile::One(e) => vec![e],
        };
        for e in &entries {
            validate(e)?;
        }
        Ok(Self { entries })
    }

    /// Values of d with |d| ≤ 200 and rank J(ℚ) = 0 for y² = x⁵ + d.
    pub fn table1() -> Self {
        Self::from_json(TABLE1).expect("embedded fixture is valid")
    }

    /// Values 0 ≤ d ≤ 100 with rank zero for the p = 7 even-degree family.
    pub fn dd_p7() -> Self {
        Self::from_json(DD_P7).expect("embedded fixture is valid")
    }

    /// Primes p with rank zero for y² = x^p − x.
    pub fn xpx() -> Self {
        Self::from_json(XPX).expect("embedded fixture is valid")
    }

    pub fn merge(mut self, other: RankFixture) -> Self {
        self.entries.extend(other.entries);
        self
    }

    pub fn entries(&self) -> &[RankFixtureEntry] {
        &self.entries
    }

    /// The fixture row asserting rank zero for `value`, if any.
    pub fn lookup(&self, family: &str, p: Option<u64>, value: i64) -> Option<&RankFixtureEntry> {
        self.entries
            .iter()
            .find(|e| e.family == family && (p.is_none() || e.p == p) && e.rank0_values.binary_search(&value).is_ok())
    }

    pub fn contains(&self, family: &str, value: i64) -> bool {
        self.lookup(family, None, value).is_some()
    }

    /// All values for a family, ascending.
    pub fn values(&self, family: &str) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .entries
            .iter()
            .filter(|e| e.family == family)
            .flat_map(|e| e.rank0_values.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn validate(e: &RankFixtureEntry) -> Result<()> {
    let bad = |why: String| Err(Error::InvalidDocument(format!("rank fixture ({}): {why}", e.family)));
    if !e.rank0_values.windows(2).all(|w| w[0] < w[1]) {
        return bad("values must be strictly increasing".into());
    }
    if let Some([lo, hi]) = e.range {
        if let Some(v) = e.rank0_values.iter().find(|v| **v < lo || **v > hi) {
            return bad(format!("value {v} outside the declared range {lo}..{hi}"));
        }
    }
    if e.family == "cd" {
        let Some(label) = &e.residue_class else {
            return bad("missing residue_class".into());
        };
        let r: i64 = match label.as_str() {
            "1" => 1,
            "7" => 7,
            "9" => 9,
            other => return bad(format!("residue class `{other}` is not one of 1, 7, 9")),
        };
        if let Some(v) = e.rank0_values.iter().find(|v| v.rem_euclid(11) != r) {
            return bad(format!("value {v} is not congruent to {r} mod 11"));
        }
    }
    Ok(())
}
