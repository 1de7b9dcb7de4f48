//! Curve-side analysis of trace families: degree, genus, and the Weil
//! polynomial recovered from weights.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::roots::complex_roots;
use crate::algebra::{factor_monic, poly_from_power_sums, power_sums_of_poly, IntPoly};
use crate::error::{Error, Result};
use crate::gf2poly::{period_n, plateau_v};
use crate::quadratic::{phase_group_order, PhaseGroup};
use crate::sft::TransferSystem;
use crate::tuples::TupleCollection;
use crate::weights::{Context, WeightSequence};

/// Relative tolerance on `|α| = √2`.
pub const MODULUS_TOLERANCE: f64 = 1e-9;

/// Degree `e = max (1 + 2^{a_1} + ... + 2^{a_{d-1}})` of `P_f`.
pub fn curve_degree(collection: &TupleCollection) -> Result<u128> {
    collection
        .tuples()
        .iter()
        .map(|t| t.trace_exponent())
        .max()
        .ok_or(Error::EmptyCollection)
}

/// `(e - 1) / 2`.
pub fn genus(collection: &TupleCollection) -> Result<u128> {
    Ok((curve_degree(collection)? - 1) / 2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilModulus {
    pub moduli_ok: bool,
    pub max_relative_error: f64,
    /// `x^m p(2/x) = ±2^{m/2} p(x)`; `None` for odd degree.
    pub functional_equation: Option<bool>,
}

/// Root moduli of `p` against `√2`, numerically per irreducible factor, and
/// the exact functional equation.
pub fn weil_modulus_check(p: &IntPoly) -> WeilModulus {
    let sqrt2 = std::f64::consts::SQRT_2;
    let max_relative_error = factor_monic(p)
        .factors()
        .iter()
        .flat_map(|(f, _)| complex_roots(f))
        .map(|z| (z.norm() - sqrt2).abs() / sqrt2)
        .fold(0.0f64, f64::max);
    WeilModulus {
        moduli_ok: max_relative_error <= MODULUS_TOLERANCE,
        max_relative_error,
        functional_equation: functional_equation(p),
    }
}

fn functional_equation(p: &IntPoly) -> Option<bool> {
    let m = p.degree()?;
    if m % 2 == 1 {
        return None;
    }
    // coefficient of x^{m-i} in x^m p(2/x) is c_i 2^i
    let lhs: Vec<BigInt> = (0..=m).map(|j| p.coeff(m - j) << (m - j)).collect();
    let scale = BigInt::one() << (m / 2);
    let rhs: Vec<BigInt> = (0..=m).map(|j| p.coeff(j) * &scale).collect();
    let neg: Vec<BigInt> = rhs.iter().map(|v| -v).collect();
    Some(lhs == rhs || lhs == neg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilReport {
    pub e: u128,
    pub g: u128,
    /// Monic polynomial whose roots are the characteristic values.
    pub coefficients: IntPoly,
    /// Number of available weights beyond `n = e-1` that the recovered values
    /// fail to reproduce; zero witnesses that no further terms are present.
    pub delta_count: usize,
    pub mismatched: Vec<usize>,
    /// Largest `n` compared.
    pub checked_up_to: usize,
    pub moduli_ok: bool,
    pub max_relative_error: f64,
    pub functional_equation: Option<bool>,
    /// `"elliptic"` when `e = 3`, otherwise `"singular"` (the projective
    /// closure needs resolving at infinity).
    pub case: String,
}

/// Weights `(2^n + Σ α^n) / 2` predicted by a recovered polynomial.
pub fn weil_predicted_weights(p: &IntPoly, n_max: usize) -> Vec<BigInt> {
    let sums = power_sums_of_poly(p, n_max);
    (1..=n_max)
        .map(|n| ((BigInt::one() << n) + sums.get(n)) >> 1)
        .collect()
}

/// Recovers the `e-1` characteristic values from the trace weights at
/// `n = 1..e-1` (power sums `2 wt - 2^n`, inverse Newton), then checks every
/// further available weight.
pub fn recover_weil_poly(collection: &TupleCollection, weights: &WeightSequence) -> Result<WeilReport> {
    if weights.context != Context::Trace {
        return Err(Error::Precondition("Weil recovery needs trace-context weights".into()));
    }
    let e = curve_degree(collection)?;
    let m = usize::try_from(e - 1).map_err(|_| Error::CapExceeded {
        requested: usize::MAX,
        cap: 64,
    })?;
    let prefix = weights.prefix(m).ok_or(Error::InsufficientData {
        needed: m,
        available: weights.entries.len(),
    })?;
    let sums: Vec<BigInt> = prefix
        .iter()
        .enumerate()
        .map(|(i, w)| w * 2 - (BigInt::one() << (i + 1)))
        .collect();
    let coefficients = poly_from_power_sums(&sums, m)?;
    let checked_up_to = weights.entries.iter().map(|e| e.n).max().unwrap_or(0);
    let predicted = weil_predicted_weights(&coefficients, checked_up_to.max(1));
    let mismatched: Vec<usize> = weights
        .entries
        .iter()
        .filter(|en| en.n > m && predicted[en.n - 1] != en.weight)
        .map(|en| en.n)
        .collect();
    let modulus = weil_modulus_check(&coefficients);
    Ok(WeilReport {
        e,
        g: (e - 1) / 2,
        coefficients,
        delta_count: mismatched.len(),
        mismatched,
        checked_up_to,
        moduli_ok: modulus.moduli_ok,
        max_relative_error: modulus.max_relative_error,
        functional_equation: modulus.functional_equation,
        case: if e == 3 { "elliptic" } else { "singular" }.to_string(),
    })
}

/// Group-order comparison for a quadratic family on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupOrderReport {
    pub period: usize,
    pub trace: PhaseGroup,
    pub rs: PhaseGroup,
    /// Number of characteristic values fixed by the curve degree, `e - 1`.
    pub alpha_count: usize,
    /// Distinct recovered values.
    pub distinct_alphas: usize,
    /// Largest plateau parameter over `n = 1..4N`.
    pub max_plateau_v: usize,
    /// `2^{v/2}` for that largest `v`, when `v` is even.
    pub plateau_count: Option<u64>,
}

pub fn group_order_report(collection: &TupleCollection, recovered: &IntPoly) -> Result<GroupOrderReport> {
    collection.quadratic_offsets()?;
    let period = period_n(collection)?;
    let trace_values = factor_monic(recovered);
    let trace_order = phase_group_order(&trace_values, false)?;
    let sys = TransferSystem::for_collection(collection)?;
    let rs_order = phase_group_order(&sys.char_values(), true)?;
    let max_plateau_v = (1..=4 * period)
        .map(|n| plateau_v(collection, n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(GroupOrderReport {
        period,
        trace: PhaseGroup::new(trace_order, period),
        rs: PhaseGroup::new(rs_order, period),
        alpha_count: recovered.degree().unwrap_or(0),
        distinct_alphas: trace_values.factors().iter().map(|(f, _)| f.degree().unwrap_or(0)).sum(),
        max_plateau_v,
        plateau_count: (max_plateau_v % 2 == 0 && max_plateau_v < 128).then(|| 1u64 << (max_plateau_v / 2)),
    })
}
