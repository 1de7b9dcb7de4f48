//! Weight sequences with per-entry provenance, and the dispatcher choosing
//! between the counting routes.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{berlekamp_massey_int, power_sums_of_poly};
use crate::error::{Error, Result};
use crate::quadratic::quad_weight_formula_range;
use crate::rs::{rs_weight_oracle, trace_weight_oracle, Caps};
use crate::sft::{weight_from_count, TransferSystem};
use crate::tuples::TupleCollection;
use crate::weil::{curve_degree, recover_weil_poly, weil_predicted_weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Context {
    Rs,
    Trace,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::Rs => "rs",
            Context::Trace => "trace",
        })
    }
}

impl FromStr for Context {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rs" => Ok(Context::Rs),
            "trace" => Ok(Context::Trace),
            other => Err(Error::Parse(format!("unknown context {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Shift model for the RS context; oracle within the cap, Weil values
    /// beyond it, for the trace context.
    Auto,
    Oracle,
    Sft,
    Formula,
    Recurrence,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "oracle" => Ok(Method::Oracle),
            "sft" => Ok(Method::Sft),
            "formula" => Ok(Method::Formula),
            "recurrence" => Ok(Method::Recurrence),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Oracle,
    Sft,
    Formula,
    Recurrence,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Oracle => "oracle",
            Provenance::Sft => "sft",
            Provenance::Formula => "formula",
            Provenance::Recurrence => "recurrence",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub n: usize,
    #[serde(with = "crate::report::decimal")]
    pub weight: BigInt,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSequence {
    pub collection: TupleCollection,
    pub context: Context,
    pub entries: Vec<WeightEntry>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    weight: String,
    provenance: &'a str,
}

impl WeightSequence {
    pub fn new(collection: TupleCollection, context: Context) -> Self {
        WeightSequence {
            collection,
            context,
            entries: Vec::new(),
        }
    }

    /// Adds an entry, rejecting weights outside `[0, 2^n]`.
    pub fn push(&mut self, n: usize, weight: BigInt, provenance: Provenance) -> Result<()> {
        if weight.sign() == Sign::Minus || weight > (BigInt::one() << n) {
            return Err(Error::IdentityMismatch(format!(
                "{provenance} weight {weight} at n={n} is outside [0, 2^n]"
            )));
        }
        self.entries.retain(|e| e.n != n);
        self.entries.push(WeightEntry { n, weight, provenance });
        self.entries.sort_by_key(|e| e.n);
        Ok(())
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.entries.iter().find(|e| e.n == n).map(|e| &e.weight)
    }

    /// Weights for `n = 1..=len` if all are present.
    pub fn prefix(&self, len: usize) -> Option<Vec<BigInt>> {
        (1..=len).map(|n| self.get(n).cloned()).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for e in &self.entries {
            w.serialize(CsvRow {
                n: e.n,
                weight: e.weight.to_string(),
                provenance: &e.provenance.to_string(),
            })
            .map_err(|err| Error::Parse(err.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|err| Error::Parse(err.to_string()))?;
        String::from_utf8(bytes).map_err(|err| Error::Parse(err.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weight sequences serialize")
    }
}

fn oracle(collection: &TupleCollection, context: Context, n: usize, caps: &Caps) -> Result<BigInt> {
    Ok(BigInt::from(match context {
        Context::Rs => rs_weight_oracle(collection, n, caps)?,
        Context::Trace => trace_weight_oracle(collection, n, caps)?,
    }))
}

fn sft_weights(collection: &TupleCollection, n_max: usize) -> Result<Vec<BigInt>> {
    let sys = TransferSystem::for_collection(collection)?;
    Ok(sys
        .periodic_counts(n_max)
        .iter()
        .enumerate()
        .map(|(i, count)| weight_from_count(i + 1, count))
        .collect())
}

/// `2^n - ½ p_n` over the nonzero characteristic values of the shift.
fn char_value_weights(collection: &TupleCollection, n_max: usize) -> Result<Vec<BigInt>> {
    let sys = TransferSystem::for_collection(collection)?;
    let (_, body) = sys.char_poly().strip_x_power();
    let sums = power_sums_of_poly(&body, n_max);
    Ok((1..=n_max)
        .map(|n| (BigInt::one() << n) - (sums.get(n) >> 1))
        .collect())
}

fn extend_by_recurrence(seed: &[BigInt], n_max: usize) -> Result<Vec<BigInt>> {
    let rec = berlekamp_massey_int(seed);
    let poly = rec
        .int_char_poly()
        .ok_or_else(|| Error::NonIntegral("weight recurrence".into()))?;
    let l = rec.order();
    if 2 * l > seed.len() {
        return Err(Error::InsufficientData {
            needed: 2 * l,
            available: seed.len(),
        });
    }
    // s_n = -Σ_{i<L} c_i s_{n-L+i}, c_L = 1
    let c = poly.coeffs();
    let mut out: Vec<BigInt> = seed.to_vec();
    while out.len() < n_max {
        let base = out.len() - l;
        let mut acc = BigInt::zero();
        for i in 0..l {
            acc -= &c[i] * &out[base + i];
        }
        out.push(acc);
    }
    out.truncate(n_max);
    Ok(out)
}

fn recurrence_weights(
    collection: &TupleCollection,
    context: Context,
    n_max: usize,
    caps: &Caps,
) -> Result<Vec<BigInt>> {
    let seed = match context {
        Context::Rs => {
            let sys = TransferSystem::for_collection(collection)?;
            let (_, body) = sys.char_poly().strip_x_power();
            sft_weights(collection, 2 * (body.degree().unwrap_or(0) + 1))?
        }
        Context::Trace => {
            let e = curve_degree(collection)? as usize;
            let len = 2 * e;
            if len > caps.trace_oracle {
                return Err(Error::InsufficientData {
                    needed: len,
                    available: caps.trace_oracle,
                });
            }
            (1..=len)
                .map(|n| oracle(collection, context, n, caps))
                .collect::<Result<_>>()?
        }
    };
    extend_by_recurrence(&seed, n_max)
}

fn formula_weights(collection: &TupleCollection, context: Context, n_max: usize, caps: &Caps) -> Result<Vec<BigInt>> {
    match context {
        Context::Rs => match collection.tuples() {
            [single] if single.quadratic_offset().is_some() => {
                quad_weight_formula_range(single.quadratic_offset().expect("quadratic"), n_max)
            }
            _ => char_value_weights(collection, n_max),
        },
        Context::Trace => {
            let e = curve_degree(collection)? as usize;
            let mut seq = WeightSequence::new(collection.clone(), Context::Trace);
            for n in 1..e {
                seq.push(n, oracle(collection, context, n, caps)?, Provenance::Oracle)?;
            }
            let report = recover_weil_poly(collection, &seq)?;
            Ok(weil_predicted_weights(&report.coefficients, n_max))
        }
    }
}

/// Weights of the family at the requested `n` (each at least 1).
pub fn compute_weights(
    collection: &TupleCollection,
    context: Context,
    method: Method,
    ns: &[usize],
    caps: &Caps,
) -> Result<WeightSequence> {
    if ns.contains(&0) {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let mut seq = WeightSequence::new(collection.clone(), context);
    if n_max == 0 {
        return Ok(seq);
    }
    let method = match (method, context) {
        (Method::Auto, Context::Rs) => Method::Sft,
        (Method::Auto, Context::Trace) if n_max <= caps.trace_oracle => Method::Oracle,
        (Method::Auto, Context::Trace) => Method::Formula,
        (m, _) => m,
    };
    if collection.is_empty() && method != Method::Oracle {
        for &n in ns {
            seq.push(n, BigInt::zero(), Provenance::Formula)?;
        }
        return Ok(seq);
    }
    let (values, provenance): (Vec<Option<BigInt>>, Provenance) = match method {
        Method::Oracle => {
            let mut v = vec![None; n_max];
            for &n in ns {
                v[n - 1] = Some(oracle(collection, context, n, caps)?);
            }
            (v, Provenance::Oracle)
        }
        Method::Sft => {
            if context == Context::Trace {
                return Err(Error::Precondition("the shift model covers the rs context only".into()));
            }
            (sft_weights(collection, n_max)?.into_iter().map(Some).collect(), Provenance::Sft)
        }
        Method::Formula => (
            formula_weights(collection, context, n_max, caps)?.into_iter().map(Some).collect(),
            Provenance::Formula,
        ),
        Method::Recurrence => (
            recurrence_weights(collection, context, n_max, caps)?.into_iter().map(Some).collect(),
            Provenance::Recurrence,
        ),
        Method::Auto => unreachable!("resolved above"),
    };
    for &n in ns {
        let w = values[n - 1].clone().expect("computed for every requested n");
        seq.push(n, w, provenance)?;
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(text: &str) -> TupleCollection {
        TupleCollection::parse(text).unwrap()
    }

    #[test]
    fn methods_agree_on_rs_side() {
        let caps = Caps::default();
        let ns: Vec<usize> = (1..=14).collect();
        for text in ["0,1", "0,2", "0,1,2", "0,1;0,2", "0,3"] {
            let coll = c(text);
            let oracle = compute_weights(&coll, Context::Rs, Method::Oracle, &ns, &caps).unwrap();
            for m in [Method::Sft, Method::Formula, Method::Recurrence, Method::Auto] {
                let other = compute_weights(&coll, Context::Rs, m, &ns, &caps).unwrap();
                for n in 1..=14 {
                    assert_eq!(oracle.get(n), other.get(n), "{text} {m:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn methods_agree_on_trace_side() {
        let caps = Caps::default();
        let ns: Vec<usize> = (1..=14).collect();
        for text in ["0,1", "0,2", "0,1;0,2"] {
            let coll = c(text);
            let oracle = compute_weights(&coll, Context::Trace, Method::Oracle, &ns, &caps).unwrap();
            for m in [Method::Formula, Method::Recurrence] {
                let other = compute_weights(&coll, Context::Trace, m, &ns, &caps).unwrap();
                assert_eq!(oracle.entries.iter().map(|e| &e.weight).collect::<Vec<_>>(),
                    other.entries.iter().map(|e| &e.weight).collect::<Vec<_>>(), "{text} {m:?}");
            }
        }
        assert!(compute_weights(&c("0,1"), Context::Trace, Method::Sft, &[3], &caps).is_err());
    }

    #[test]
    fn csv_and_json() {
        let caps = Caps::default();
        let seq = compute_weights(&c("0,1"), Context::Rs, Method::Oracle, &[3, 4], &caps).unwrap();
        assert_eq!(seq.to_csv().unwrap(), "n,weight,provenance\n3,4,oracle\n4,4,oracle\n");
        let back: WeightSequence = serde_json::from_str(&seq.to_json()).unwrap();
        assert_eq!(back, seq);
        assert!(seq.to_json().contains("\"weight\": \"4\""));
    }

    #[test]
    fn large_n_by_recurrence() {
        let caps = Caps::default();
        let seq = compute_weights(&c("0,3"), Context::Rs, Method::Recurrence, &[2000], &caps).unwrap();
        let f = compute_weights(&c("0,3"), Context::Rs, Method::Formula, &[2000], &caps).unwrap();
        assert_eq!(seq.get(2000), f.get(2000));
    }

    #[test]
    fn guards() {
        let caps = Caps::default();
        assert!(compute_weights(&c("0,1"), Context::Rs, Method::Oracle, &[0], &caps).is_err());
        assert!(matches!(
            compute_weights(&c("0,1"), Context::Rs, Method::Oracle, &[40], &caps),
            Err(Error::CapExceeded { .. })
        ));
        let mut s = WeightSequence::new(c("0,1"), Context::Rs);
        assert!(s.push(2, BigInt::from(5), Provenance::Oracle).is_err());
        assert_eq!("trace".parse::<Context>().unwrap(), Context::Trace);
        assert!("both".parse::<Context>().is_err());
    }
}
