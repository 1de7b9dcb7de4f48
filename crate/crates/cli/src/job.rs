//! A job is the fully parsed description of one invocation, whether it came
//! from flags or from a JSON job file.

use std::path::PathBuf;

use rsweight_core::tuples::TupleCollection;
use rsweight_core::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Weights,
    Verify,
    Report,
}

/// Tuples either in CLI syntax (`"0,1;0,2"`) or as nested lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TuplesSpec {
    Text(String),
    Lists(Vec<Vec<usize>>),
}

impl TuplesSpec {
    pub fn collection(&self) -> Result<TupleCollection, Error> {
        match self {
            TuplesSpec::Text(s) => TupleCollection::parse(s),
            TuplesSpec::Lists(lists) => {
                let refs: Vec<&[usize]> = lists.iter().map(Vec::as_slice).collect();
                TupleCollection::from_full(&refs)
            }
        }
    }
}

/// `"1..16"`, `"1..=16"`, `"3,5,8"`, `"10000"`, or a bare number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RangeSpec {
    Single(usize),
    Text(String),
}

impl RangeSpec {
    pub fn values(&self) -> Result<Vec<usize>, Error> {
        match self {
            RangeSpec::Single(n) => Ok(vec![*n]),
            RangeSpec::Text(s) => parse_n(s),
        }
    }
}

pub fn parse_n(text: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::Parse(format!("bad n specification {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (lo, hi) = (num(a)?, num(b)?);
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub tuples: Option<TuplesSpec>,
    #[serde(default)]
    pub n: Option<RangeSpec>,
    /// `rs`, `trace` or `both`.
    #[serde(default)]
    pub context: Option<String>,
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub t: Option<usize>,
    #[serde(default)]
    pub t_max: Option<usize>,
    #[serde(default)]
    pub e_max: Option<u128>,
    #[serde(default)]
    pub cap_n: Option<usize>,
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub json: bool,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            tuples: None,
            n: None,
            context: None,
            method: None,
            suite: None,
            t: None,
            t_max: None,
            e_max: None,
            cap_n: None,
            input: None,
            out: None,
            cache_dir: None,
            json: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_specs() {
        assert_eq!(parse_n("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_n("1..=3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_n("10000").unwrap(), vec![10000]);
        assert_eq!(parse_n("5,3,5").unwrap(), vec![3, 5]);
        assert!(parse_n("0..3").is_err());
        assert!(parse_n("4..2").is_err());
        assert!(parse_n("x").is_err());
    }

    #[test]
    fn job_file_forms() {
        let j: JobSpec = serde_json::from_str(r#"{"command":"weights","tuples":[[0,1],[0,2]],"n":"1..3"}"#).unwrap();
        assert_eq!(j.tuples.unwrap().collection().unwrap().to_string(), "{(0,1), (0,2)}");
        let j: JobSpec = serde_json::from_str(r#"{"command":"weights","tuples":"0,1","n":7}"#).unwrap();
        assert_eq!(j.n.unwrap().values().unwrap(), vec![7]);
        assert!(serde_json::from_str::<JobSpec>(r#"{"command":"weights","bogus":1}"#).is_err());
    }
}
