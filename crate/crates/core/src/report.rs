//! Machine-readable verification records.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One checked claim: what was expected, what was computed, and whether they
/// agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub params: Value,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl ClaimReport {
    /// Passes exactly when `expected` and `actual` serialize identically.
    pub fn compare<E: Serialize, A: Serialize>(claim: &str, params: Value, expected: E, actual: A) -> Self {
        let expected = serde_json::to_value(expected).expect("serializable");
        let actual = serde_json::to_value(actual).expect("serializable");
        let pass = expected == actual;
        ClaimReport {
            claim: claim.to_string(),
            params,
            expected,
            actual,
            pass,
        }
    }

    /// A claim whose pass/fail is decided by the caller.
    pub fn judged<E: Serialize, A: Serialize>(
        claim: &str,
        params: Value,
        expected: E,
        actual: A,
        pass: bool,
    ) -> Self {
        ClaimReport {
            claim: claim.to_string(),
            params,
            expected: serde_json::to_value(expected).expect("serializable"),
            actual: serde_json::to_value(actual).expect("serializable"),
            pass,
        }
    }
}

/// A named batch of claims.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub claims: Vec<ClaimReport>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            claims: Vec::new(),
        }
    }

    pub fn push(&mut self, claim: ClaimReport) {
        self.claims.push(claim);
    }

    pub fn extend<I: IntoIterator<Item = ClaimReport>>(&mut self, claims: I) {
        self.claims.extend(claims);
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimReport> {
        self.claims.iter().filter(|c| !c.pass)
    }

    pub fn pass_count(&self) -> usize {
        self.claims.iter().filter(|c| c.pass).count()
    }
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
