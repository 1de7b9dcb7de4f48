//! Verification suites: every structural claim checked against independent
//! computations, collected as [`ClaimReport`]s.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::algebra::{divisors, theta, theta_factors, IntPoly};
use crate::error::{Error, Result};
use crate::gf2poly::{period_n, plateau_v};
use crate::matrix::char_poly;
use crate::quadratic::{
    all_ones_check, centr_symmetry_check, char_poly_rt, easy_coefficients_agree, min_poly_rt, quad_weight_formula_range,
    recurrence_order_check, rt_power_traces, trace_closed_form, trace_via_hadamard, unscaled_power_sum_closed_form,
    verify_desc_rt, x2t_minus_2t, DeltaMultiset, RtMatrix,
};
use crate::report::{ClaimReport, SuiteReport};
use crate::rs::{curve_point_count, rs_pair_count, rs_weight_oracle, trace_weight_oracle, Caps};
use crate::sft::{weight_from_count, TransferSystem};
use crate::tuples::{inventory, TupleCollection};
use crate::weights::{Context, Provenance, WeightSequence};
use crate::weil::{curve_degree, group_order_report, recover_weil_poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sft,
    Quadratic,
    Weil,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sft" => Ok(Suite::Sft),
            "quadratic" => Ok(Suite::Quadratic),
            "weil" => Ok(Suite::Weil),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Sft => "sft",
            Suite::Quadratic => "quadratic",
            Suite::Weil => "weil",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Largest `t` for the `R(t)` checks.
    pub t_max: usize,
    /// Largest curve degree for the trace-side checks.
    pub e_max: u128,
    /// Upper end of the RS and plateau sweeps.
    pub n_max: usize,
    /// Upper end of the trace-side sweeps.
    pub trace_n_max: usize,
    #[serde(skip)]
    pub caps: Caps,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            t_max: 6,
            e_max: 9,
            n_max: 18,
            trace_n_max: 14,
            caps: Caps::default(),
        }
    }
}

/// The families every sweep runs over.
pub fn test_inventory() -> Vec<TupleCollection> {
    inventory(6, 3, 4)
}

fn strings(values: &[BigInt]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn rs_oracle_weights(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<Vec<BigInt>> {
    (1..=n_max)
        .map(|n| rs_weight_oracle(c, n, caps).map(BigInt::from))
        .collect()
}

fn trace_oracle_weights(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<Vec<BigInt>> {
    (1..=n_max)
        .map(|n| trace_weight_oracle(c, n, caps).map(BigInt::from))
        .collect()
}

fn sft_weights(c: &TupleCollection, n_max: usize) -> Result<Vec<BigInt>> {
    let sys = TransferSystem::for_collection(c)?;
    Ok(sys
        .periodic_counts(n_max)
        .iter()
        .enumerate()
        .map(|(i, count)| weight_from_count(i + 1, count))
        .collect())
}

/// RS oracle weights equal the shift-model prediction for `n = 1..n_max`.
pub fn rs_triple_agreement(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<ClaimReport> {
    let oracle = rs_oracle_weights(c, n_max, caps)?;
    let sft = sft_weights(c, n_max)?;
    Ok(ClaimReport::compare(
        "rs_oracle_matches_shift_model",
        json!({"tuples": c.to_string(), "n": [1, n_max]}),
        strings(&oracle),
        strings(&sft),
    ))
}

/// Pair count `2^{n+1} - 2 wt` for `n = 1..n_max`.
pub fn pair_count_identity(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<ClaimReport> {
    let mut expected = Vec::new();
    let mut actual = Vec::new();
    for n in 1..=n_max {
        let w = rs_weight_oracle(c, n, caps)?;
        expected.push((BigInt::one() << (n + 1)) - BigInt::from(w) * 2);
        actual.push(BigInt::from(rs_pair_count(c, n, caps)?));
    }
    Ok(ClaimReport::compare(
        "pair_count_identity",
        json!({"tuples": c.to_string(), "n": [1, n_max]}),
        strings(&expected),
        strings(&actual),
    ))
}

/// Affine curve points `2^{n+1} - 2 wt_trace` for `n = 1..n_max`.
pub fn curve_identity(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<ClaimReport> {
    let mut expected = Vec::new();
    let mut actual = Vec::new();
    for n in 1..=n_max {
        let w = trace_weight_oracle(c, n, caps)?;
        expected.push((BigInt::one() << (n + 1)) - BigInt::from(w) * 2);
        actual.push(BigInt::from(curve_point_count(c, n, caps)?));
    }
    Ok(ClaimReport::compare(
        "curve_point_identity",
        json!({"tuples": c.to_string(), "n": [1, n_max]}),
        strings(&expected),
        strings(&actual),
    ))
}

pub fn sft_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("sft");
    let inv = test_inventory();
    let claims: Vec<Result<Vec<ClaimReport>>> = inv
        .par_iter()
        .map(|c| {
            Ok(vec![
                rs_triple_agreement(c, opts.n_max, &opts.caps)?,
                pair_count_identity(c, opts.n_max.min(12), &opts.caps)?,
            ])
        })
        .collect();
    for c in claims {
        suite.extend(c?);
    }
    Ok(suite)
}

pub fn rt_minimal_polynomial(t: usize) -> ClaimReport {
    let actual = match min_poly_rt(t) {
        Ok(p) => p.to_string(),
        Err(e) => e.to_string(),
    };
    ClaimReport::compare(
        "rt_minimal_polynomial",
        json!({"t": t}),
        x2t_minus_2t(t).to_string(),
        actual,
    )
}

pub fn rt_trace_closed_form(t: usize) -> Result<ClaimReport> {
    let exact = rt_power_traces(t, 4 * t)?;
    let closed: Vec<BigInt> = (1..=4 * t).map(|n| trace_closed_form(t, n)).collect();
    Ok(ClaimReport::compare(
        "rt_trace_closed_form",
        json!({"t": t, "n": [1, 4 * t]}),
        strings(&closed),
        strings(&exact),
    ))
}

pub fn rt_trace_via_hadamard(t: usize) -> Result<ClaimReport> {
    let exact = rt_power_traces(t, t)?;
    let via: Vec<BigInt> = (1..t).map(|n| trace_via_hadamard(t, n)).collect::<Result<_>>()?;
    Ok(ClaimReport::compare(
        "rt_trace_via_hadamard",
        json!({"t": t, "n": [1, t.saturating_sub(1)]}),
        strings(&exact[..t - 1]),
        strings(&via),
    ))
}

/// Factored characteristic polynomial of `R(t)` against the multiplicities
/// from the delta multiset.
pub fn rt_char_poly_factorization(t: usize) -> Result<ClaimReport> {
    let delta = DeltaMultiset::new(t)?;
    let expected: Vec<(usize, String)> = delta
        .theta_multiplicities()
        .into_iter()
        .filter(|(_, m)| *m > BigInt::from(0))
        .map(|(d, m)| (d, m.to_string()))
        .collect();
    let factored = char_poly_rt(t)?;
    let actual: Vec<(usize, String)> = divisors(t)
        .into_iter()
        .filter_map(|d| {
            let fs = theta_factors(d).ok()?;
            let ms: Vec<usize> = fs.iter().map(|f| factored.multiplicity(f)).collect();
            // both halves of a split Θ_d carry the same multiplicity
            (ms[0] > 0 && ms.iter().all(|&m| m == ms[0])).then(|| (d, ms[0].to_string()))
        })
        .collect();
    let pass = expected == actual && factored.total_degree() == 1 << t;
    Ok(ClaimReport::judged(
        "rt_char_poly_theta_factorization",
        json!({"t": t}),
        json!({"theta_multiplicities": expected, "total_degree": 1 << t}),
        json!({"theta_multiplicities": actual, "total_degree": factored.total_degree(), "factored": factored.render()}),
        pass,
    ))
}

pub fn delta_power_sums(t: usize) -> Result<ClaimReport> {
    let delta = DeltaMultiset::new(t)?;
    let expected: Vec<BigInt> = (1..=4 * t).map(|n| unscaled_power_sum_closed_form(t, n)).collect();
    let actual: Vec<BigInt> = (1..=4 * t).map(|n| delta.unscaled_power_sum(n)).collect();
    Ok(ClaimReport::compare(
        "delta_power_sum_closed_form",
        json!({"t": t, "n": [1, 4 * t], "total_count": delta.total_count().to_string()}),
        strings(&expected),
        strings(&actual),
    ))
}

pub fn rt_conjugate_to_negative(t: usize) -> Result<ClaimReport> {
    let r = RtMatrix::build(t)?.dense();
    let neg: Vec<Vec<i64>> = r.iter().map(|row| row.iter().map(|v| -v).collect()).collect();
    Ok(ClaimReport::compare(
        "rt_char_poly_even",
        json!({"t": t}),
        char_poly(&r).to_string(),
        char_poly(&neg).to_string(),
    ))
}

/// `Θ_d` has two factors exactly when `d ≡ 4 (mod 8)`, and they multiply
/// back to `Θ_d`.
pub fn theta_split_pattern(d_max: usize) -> ClaimReport {
    let mut expected = Vec::new();
    let mut actual = Vec::new();
    for d in 1..=d_max {
        expected.push(json!({"d": d, "factors": if d % 8 == 4 { 2 } else { 1 }, "reassembles": true}));
        let entry = match theta_factors(d) {
            Ok(fs) => {
                let prod = fs.iter().fold(IntPoly::one(), |acc, f| &acc * f);
                json!({"d": d, "factors": fs.len(), "reassembles": prod == theta(d)})
            }
            Err(e) => json!({"d": d, "error": e.to_string()}),
        };
        actual.push(entry);
    }
    ClaimReport::compare("theta_split_pattern", json!({"d": [1, d_max]}), expected, actual)
}

/// Monomial weight formula against the oracle for `2t+1 <= n <= n_max`, plus
/// a record of the smaller `n` where it also holds.
pub fn quadratic_weight_formula(t: usize, n_max: usize, caps: &Caps) -> Result<Vec<ClaimReport>> {
    let c = TupleCollection::monomial_quadratic(t);
    let formula = quad_weight_formula_range(t, n_max)?;
    let oracle = rs_oracle_weights(&c, n_max, caps)?;
    let lo = (2 * t + 1).min(n_max + 1);
    let main = ClaimReport::compare(
        "quadratic_weight_formula",
        json!({"t": t, "n": [lo, n_max]}),
        strings(&oracle[lo - 1..]),
        strings(&formula[lo - 1..]),
    );
    let agree: Vec<usize> = (1..lo).filter(|&n| formula[n - 1] == oracle[n - 1]).collect();
    let small = ClaimReport::judged(
        "quadratic_weight_formula_small_n",
        json!({"t": t, "n": [1, lo - 1]}),
        "recorded only",
        json!({"agreeing_n": agree, "checked": lo - 1}),
        true,
    );
    Ok(vec![main, small])
}

/// Weights for `n = 1..len`: oracle within the cap, shift model beyond.
pub fn quadratic_window_weights(c: &TupleCollection, len: usize, caps: &Caps) -> Result<WeightSequence> {
    let mut seq = WeightSequence::new(c.clone(), Context::Rs);
    let oracle_len = len.min(caps.rs_oracle);
    for (i, w) in rs_oracle_weights(c, oracle_len, caps)?.into_iter().enumerate() {
        seq.push(i + 1, w, Provenance::Oracle)?;
    }
    if len > oracle_len {
        for (i, w) in sft_weights(c, len)?.into_iter().enumerate().skip(oracle_len) {
            seq.push(i + 1, w, Provenance::Sft)?;
        }
    }
    Ok(seq)
}

pub fn recurrence_order(c: &TupleCollection, caps: &Caps) -> Result<ClaimReport> {
    let len = 2 * (2 * period_n(c)? + 1);
    let seq = quadratic_window_weights(c, len, caps)?;
    let weights = seq.prefix(len).expect("contiguous");
    let check = recurrence_order_check(c, &weights)?;
    let oracle_terms = seq.entries.iter().filter(|e| e.provenance == Provenance::Oracle).count();
    Ok(ClaimReport::judged(
        "recurrence_order",
        json!({"tuples": c.to_string(), "window": len, "oracle_terms": oracle_terms}),
        json!({"order_at_most": check.bound, "divides": ["(x-2)(x^2N-2^N)", "(x-2)(x^2N+2^N)"]}),
        json!({
            "order": check.order,
            "minimal_poly": check.minimal_poly.as_ref().map(|p| p.to_string()),
            "divides_minus": check.divides_minus,
            "divides_plus": check.divides_plus,
        }),
        check.pass(),
    ))
}

/// Whether `w` is balanced or off balance by exactly `2^{(n+v)/2 - 1}`.
pub fn plateau_value(n: usize, v: usize, w: &BigInt) -> bool {
    let half = BigInt::one() << (n - 1);
    if *w == half {
        return true;
    }
    if (n + v) % 2 == 1 || n + v < 2 {
        return false;
    }
    let step = BigInt::one() << ((n + v) / 2 - 1);
    *w == &half + &step || *w == &half - &step
}

/// Both contexts take only the plateau values for the shared `v(n)`.
pub fn plateau_check(c: &TupleCollection, n_max: usize, trace_cap: usize, caps: &Caps) -> Result<ClaimReport> {
    let mut bad = Vec::new();
    let mut zero_outside = Vec::new();
    let rs = rs_oracle_weights(c, n_max, caps)?;
    let tr = trace_oracle_weights(c, n_max.min(trace_cap), caps)?;
    for n in 1..=n_max {
        let v = plateau_v(c, n)?;
        for (ctx, seq) in [("rs", &rs), ("trace", &tr)] {
            let Some(w) = seq.get(n - 1) else { continue };
            if !plateau_value(n, v, w) {
                bad.push(json!({"context": ctx, "n": n, "v": v, "weight": w.to_string()}));
            }
            // a literal reading that also admits weight 0 would accept these
            if w == &BigInt::from(0) && !plateau_value(n, v, w) {
                zero_outside.push(n);
            }
        }
    }
    let pass = bad.is_empty();
    Ok(ClaimReport::judged(
        "plateau_values",
        json!({"tuples": c.to_string(), "n": [1, n_max]}),
        "weight = 2^(n-1) or 2^(n-1) ± 2^((n+v)/2-1)",
        json!({"violations": bad, "zero_weights_outside_plateau": zero_outside}),
        pass,
    ))
}

pub fn easy_coefficients(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<ClaimReport> {
    let sys = TransferSystem::for_collection(c)?;
    let oracle = rs_oracle_weights(c, n_max, caps)?;
    let pairs: Vec<(usize, BigInt)> = oracle.into_iter().enumerate().map(|(i, w)| (i + 1, w)).collect();
    let results = easy_coefficients_agree(sys.char_poly(), &pairs);
    let failing: Vec<usize> = results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Ok(ClaimReport::judged(
        "easy_coefficients",
        json!({"tuples": c.to_string(), "n": [1, n_max]}),
        json!({"failing_n": Vec::<usize>::new()}),
        json!({"failing_n": failing, "char_values": sys.char_values().render()}),
        failing.is_empty(),
    ))
}

/// Quadratic families in the inventory.
pub fn quadratic_inventory() -> Vec<TupleCollection> {
    test_inventory().into_iter().filter(|c| c.is_quadratic()).collect()
}

pub fn quadratic_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("quadratic");
    let ts: Vec<usize> = (1..=opts.t_max).collect();
    let per_t: Vec<Result<Vec<ClaimReport>>> = ts
        .par_iter()
        .map(|&t| {
            let mut out = vec![
                rt_minimal_polynomial(t),
                rt_trace_closed_form(t)?,
                rt_char_poly_factorization(t)?,
                delta_power_sums(t)?,
                rt_conjugate_to_negative(t)?,
            ];
            if t >= 2 {
                out.push(rt_trace_via_hadamard(t)?);
            }
            out.extend(verify_desc_rt(t)?);
            let ones: Vec<usize> = (1..=t).filter(|&n| all_ones_check(t, n) == Some(false)).collect();
            out.push(ClaimReport::compare(
                "all_ones_entries",
                json!({"t": t}),
                Vec::<usize>::new(),
                ones,
            ));
            Ok(out)
        })
        .collect();
    for c in per_t {
        suite.extend(c?);
    }
    for n in 1..=opts.t_max.max(1).min(10) {
        let cs = centr_symmetry_check(n)?;
        suite.push(ClaimReport::judged(
            "central_symmetry",
            json!({"n": n}),
            json!({"balanced_failures": 0, "general_failures": 0}),
            &cs,
            cs.pass(),
        ));
    }
    suite.push(theta_split_pattern(48));
    for t in 1..=opts.t_max.min(5) {
        suite.extend(quadratic_weight_formula(t, opts.n_max, &opts.caps)?);
    }
    let fams = quadratic_inventory();
    let fam_claims: Vec<Result<Vec<ClaimReport>>> = fams
        .par_iter()
        .map(|c| {
            Ok(vec![
                recurrence_order(c, &opts.caps)?,
                plateau_check(c, opts.n_max, opts.caps.trace_oracle, &opts.caps)?,
                easy_coefficients(c, opts.n_max.min(14), &opts.caps)?,
            ])
        })
        .collect();
    for c in fam_claims {
        suite.extend(c?);
    }
    Ok(suite)
}

/// Trace families of the inventory with curve degree at most `e_max`.
pub fn trace_inventory(e_max: u128) -> Vec<TupleCollection> {
    test_inventory()
        .into_iter()
        .filter(|c| curve_degree(c).map(|e| e <= e_max).unwrap_or(false))
        .collect()
}

pub fn weil_recovery(c: &TupleCollection, n_max: usize, caps: &Caps) -> Result<ClaimReport> {
    let mut seq = WeightSequence::new(c.clone(), Context::Trace);
    for (i, w) in trace_oracle_weights(c, n_max, caps)?.into_iter().enumerate() {
        seq.push(i + 1, w, Provenance::Oracle)?;
    }
    let report = recover_weil_poly(c, &seq)?;
    let degree_ok = report.coefficients.degree() == Some((report.e - 1) as usize) && report.coefficients.is_monic();
    let pass = degree_ok && report.moduli_ok && report.delta_count == 0;
    Ok(ClaimReport::judged(
        "weil_recovery",
        json!({"tuples": c.to_string(), "n": [1, n_max]}),
        json!({"degree": report.e - 1, "moduli_ok": true, "delta_count": 0}),
        &report,
        pass,
    ))
}

pub fn weil_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("weil");
    let fams = trace_inventory(opts.e_max);
    let claims: Vec<Result<Vec<ClaimReport>>> = fams
        .par_iter()
        .map(|c| {
            let mut out = vec![
                curve_identity(c, opts.trace_n_max, &opts.caps)?,
                weil_recovery(c, opts.trace_n_max, &opts.caps)?,
            ];
            if c.is_quadratic() {
                let m = (curve_degree(c)? - 1) as usize;
                let mut seq = WeightSequence::new(c.clone(), Context::Trace);
                for (i, w) in trace_oracle_weights(c, m, &opts.caps)?.into_iter().enumerate() {
                    seq.push(i + 1, w, Provenance::Oracle)?;
                }
                let recovered = recover_weil_poly(c, &seq)?.coefficients;
                let g = group_order_report(c, &recovered)?;
                let pass = g.trace.in_expected_cases() && g.rs.in_expected_cases();
                out.push(ClaimReport::judged(
                    "phase_group_order",
                    json!({"tuples": c.to_string()}),
                    "order in {N, 2N, 4N}",
                    &g,
                    pass,
                ));
            }
            Ok(out)
        })
        .collect();
    for c in claims {
        suite.extend(c?);
    }
    Ok(suite)
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    Ok(match suite {
        Suite::Sft => vec![sft_suite(opts)?],
        Suite::Quadratic => vec![quadratic_suite(opts)?],
        Suite::Weil => vec![weil_suite(opts)?],
        Suite::All => vec![sft_suite(opts)?, quadratic_suite(opts)?, weil_suite(opts)?],
    })
}
