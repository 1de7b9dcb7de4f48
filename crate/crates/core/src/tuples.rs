//! Offset tuples `(0, a_1, ..., a_{d-1})` and collections of them.
//!
//! A collection defines one function family in both contexts: the
//! rotation-symmetric sum of monomials `x_i x_{i+a_1} ... x_{i+a_{d-1}}` and
//! the trace of `x^{1 + 2^{a_1} + ... + 2^{a_{d-1}}}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single offset tuple. Only the positive offsets are stored; the leading
/// zero is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    offsets: Vec<usize>,
}

impl Tuple {
    /// Builds a tuple from its positive offsets `a_1 < ... < a_{d-1}`.
    pub fn new(offsets: Vec<usize>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidTuples(
                "a tuple needs at least one positive offset".into(),
            ));
        }
        if offsets[0] == 0 {
            return Err(Error::InvalidTuples("offsets must be positive".into()));
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTuples(format!(
                "offsets must be strictly increasing: {offsets:?}"
            )));
        }
        Ok(Tuple { offsets })
    }

    /// Builds a tuple from its full form, leading zero included.
    pub fn from_full(entries: &[usize]) -> Result<Self> {
        match entries.split_first() {
            Some((0, rest)) => Tuple::new(rest.to_vec()),
            Some(_) => Err(Error::InvalidTuples(format!(
                "tuple must start with 0: {entries:?}"
            ))),
            None => Err(Error::InvalidTuples("empty tuple".into())),
        }
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Number of variables in each monomial (`d`).
    pub fn degree(&self) -> usize {
        self.offsets.len() + 1
    }

    pub fn max_offset(&self) -> usize {
        *self.offsets.last().expect("tuples are nonempty")
    }

    /// All positions `0, a_1, ..., a_{d-1}`.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(0).chain(self.offsets.iter().copied())
    }

    /// For a quadratic tuple `(0, t)` returns `t`.
    pub fn quadratic_offset(&self) -> Option<usize> {
        match self.offsets.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    /// The exponent `1 + 2^{a_1} + ... + 2^{a_{d-1}}` of the trace monomial.
    pub fn trace_exponent(&self) -> u128 {
        self.positions().map(|a| 1u128 << a).sum()
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(0")?;
        for a in &self.offsets {
            write!(f, ",{a}")?;
        }
        write!(f, ")")
    }
}

/// A finite set of tuples, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleCollection {
    tuples: Vec<Tuple>,
}

impl TupleCollection {
    pub fn new(tuples: Vec<Tuple>) -> Result<Self> {
        let set: BTreeSet<Tuple> = tuples.iter().cloned().collect();
        if set.len() != tuples.len() {
            return Err(Error::InvalidTuples("duplicate tuples".into()));
        }
        Ok(TupleCollection {
            tuples: set.into_iter().collect(),
        })
    }

    pub fn empty() -> Self {
        TupleCollection::default()
    }

    /// Convenience constructor from full tuples, e.g. `&[&[0, 1], &[0, 2]]`.
    pub fn from_full(tuples: &[&[usize]]) -> Result<Self> {
        TupleCollection::new(
            tuples
                .iter()
                .map(|t| Tuple::from_full(t))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// The single monomial `(0, t)`.
    pub fn monomial_quadratic(t: usize) -> Self {
        TupleCollection {
            tuples: vec![Tuple::new(vec![t]).expect("t must be positive")],
        }
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    /// Largest offset over all tuples; zero for the empty collection.
    pub fn max_offset(&self) -> usize {
        self.tuples.iter().map(Tuple::max_offset).max().unwrap_or(0)
    }

    pub fn is_quadratic(&self) -> bool {
        self.tuples.iter().all(|t| t.degree() == 2)
    }

    /// The offsets `t` of a quadratic collection.
    pub fn quadratic_offsets(&self) -> Result<Vec<usize>> {
        self.tuples
            .iter()
            .map(|t| t.quadratic_offset().ok_or(Error::NonQuadratic(t.degree())))
            .collect()
    }

    /// Parses the command-line syntax: semicolon-separated tuples with
    /// comma-separated entries and a mandatory leading zero.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(TupleCollection::empty());
        }
        let mut tuples = Vec::new();
        for part in text.split(';') {
            let entries = part
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad tuple entry {e:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            tuples.push(Tuple::from_full(&entries)?);
        }
        TupleCollection::new(tuples)
    }

    /// Inverse of [`TupleCollection::parse`].
    pub fn to_spec_string(&self) -> String {
        self.tuples
            .iter()
            .map(|t| {
                t.positions()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn as_lists(&self) -> Vec<Vec<usize>> {
        self.tuples.iter().map(|t| t.positions().collect()).collect()
    }
}

impl FromStr for TupleCollection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TupleCollection::parse(s)
    }
}

impl fmt::Display for TupleCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tuples.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for TupleCollection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_lists().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TupleCollection {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let lists = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let tuples = lists
            .iter()
            .map(|l| Tuple::from_full(l))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        TupleCollection::new(tuples).map_err(serde::de::Error::custom)
    }
}

/// The test inventory: every single tuple with maximal offset at most
/// `max_offset` and at most `max_degree` entries, plus every pair of
/// quadratic tuples `(0,s), (0,t)` with `s < t <= pair_max`.
pub fn inventory(max_offset: usize, max_degree: usize, pair_max: usize) -> Vec<TupleCollection> {
    let mut out = Vec::new();
    for d in 2..=max_degree {
        for last in 1..=max_offset {
            // choose d-2 middle offsets from 1..last
            let middles: Vec<usize> = (1..last).collect();
            for combo in combinations(&middles, d - 2) {
                let mut offsets = combo;
                offsets.push(last);
                out.push(TupleCollection {
                    tuples: vec![Tuple::new(offsets).expect("valid by construction")],
                });
            }
        }
    }
    for s in 1..=pair_max {
        for t in (s + 1)..=pair_max {
            out.push(
                TupleCollection::new(vec![
                    Tuple::new(vec![s]).expect("positive"),
                    Tuple::new(vec![t]).expect("positive"),
                ])
                .expect("distinct"),
            );
        }
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let c = TupleCollection::parse("0,1; 0,1,2").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.to_spec_string(), "0,1;0,1,2");
        assert_eq!(c.max_offset(), 2);
        assert!(!c.is_quadratic());
        assert_eq!(c.to_string(), "{(0,1), (0,1,2)}");
    }

    #[test]
    fn rejects_bad_tuples() {
        assert!(TupleCollection::parse("1,2").is_err());
        assert!(TupleCollection::parse("0").is_err());
        assert!(TupleCollection::parse("0,2,1").is_err());
        assert!(TupleCollection::parse("0,1;0,1").is_err());
        assert!(TupleCollection::parse("0,x").is_err());
        assert!(TupleCollection::parse("0,0").is_err());
    }

    #[test]
    fn trace_exponents() {
        assert_eq!(Tuple::from_full(&[0, 1]).unwrap().trace_exponent(), 3);
        assert_eq!(Tuple::from_full(&[0, 1, 2]).unwrap().trace_exponent(), 7);
    }

    #[test]
    fn inventory_size() {
        // 6 quadratic + C(6,2) cubic singles + C(4,2) pairs
        let inv = inventory(6, 3, 4);
        assert_eq!(inv.len(), 6 + 15 + 6);
        let set: BTreeSet<_> = inv.iter().cloned().collect();
        assert_eq!(set.len(), inv.len());
    }

    #[test]
    fn serde_round_trip() {
        let c = TupleCollection::parse("0,1;0,2,5").unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "[[0,1],[0,2,5]]");
        let back: TupleCollection = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
