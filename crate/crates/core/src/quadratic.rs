//! Quadratic families `(0, t)`: the recurrence matrix `R(t)`, Hadamard tensor
//! powers, the scaled roots of unity that drive the weights, and the checks
//! tying them together.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::charvalues::power_sums_of_poly;
use crate::algebra::{
    berlekamp_massey_int, divisors, factor_x2t_minus_2t, mobius, theta, theta_factors, CharValueSet, IntPoly,
};
use crate::error::{Error, Result};
use crate::gf2poly::period_n;
use crate::matrix::{char_poly, minimal_poly, IntMatrix};
use crate::report::ClaimReport;
use crate::tuples::TupleCollection;

/// Largest `t` for which `R(t)` is materialized.
pub const RT_CAP: usize = 8;

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::Precondition("t must be positive".into()));
    }
    if t > RT_CAP {
        return Err(Error::CapExceeded {
            requested: t,
            cap: RT_CAP,
        });
    }
    Ok(())
}

/// Rotates `v` right `k` times (the last entry moves to the front).
pub fn mu_rotate<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    let mut out = v.to_vec();
    if !out.is_empty() {
        let len = out.len();
        out.rotate_right(k % len);
    }
    out
}

/// `R(t)`, stored sparsely: every row has a `+1` and one further `±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtMatrix {
    t: usize,
    /// `(first column, second column, sign of second entry)` per row.
    rows: Vec<(usize, usize, i64)>,
}

impl RtMatrix {
    /// Rows `2i` and `2i+1` are `μ^i(1,0..,1,0..)` and `μ^i(1,0..,-1,0..)`.
    pub fn build(t: usize) -> Result<Self> {
        check_t(t)?;
        let half = 1usize << (t - 1);
        let rows = (0..half)
            .flat_map(|i| [(i, i + half, 1), (i, i + half, -1)])
            .collect();
        Ok(RtMatrix { t, rows })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn dense(&self) -> IntMatrix {
        let n = self.size();
        self.rows
            .iter()
            .map(|&(a, b, s)| {
                let mut row = vec![0; n];
                row[a] = 1;
                row[b] = s;
                row
            })
            .collect()
    }

    /// `R · P` for a dense `P` with as many rows as `R` has columns.
    pub fn mul_left<T>(&self, p: &[Vec<T>]) -> Vec<Vec<T>>
    where
        T: Clone + for<'a> std::ops::Add<&'a T, Output = T> + for<'a> std::ops::Sub<&'a T, Output = T>,
    {
        self.rows
            .iter()
            .map(|&(a, b, s)| {
                p[a].iter()
                    .zip(&p[b])
                    .map(|(x, y)| if s > 0 { x.clone() + y } else { x.clone() - y })
                    .collect()
            })
            .collect()
    }

    /// `R(t)^n` with machine integers; entries stay below `2^t` for `n < 2t`.
    pub fn power(&self, n: usize) -> IntMatrix {
        let size = self.size();
        let mut p: IntMatrix = (0..size)
            .map(|i| (0..size).map(|j| (i == j) as i64).collect())
            .collect();
        for _ in 0..n {
            p = self.mul_left(&p);
        }
        p
    }
}

/// The `2^n × 2^n` tensor power of `[[1,1],[1,-1]]`, entry `(k,l)` being
/// `(-1)^{popcount(k & l)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardMatrix {
    pub n: usize,
}

impl HadamardMatrix {
    pub fn new(n: usize) -> Self {
        HadamardMatrix { n }
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, k: usize, l: usize) -> i64 {
        if (k & l).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn dense(&self) -> IntMatrix {
        let s = self.size();
        (0..s).map(|k| (0..s).map(|l| self.entry(k, l)).collect()).collect()
    }
}

/// `M(n)` widened to `2^t` columns: column `j` moves to `j·2^{t-n}`, the rest
/// are zero.
pub fn m_n_t(n: usize, t: usize) -> IntMatrix {
    assert!(n <= t, "M(n,t) needs n <= t");
    let h = HadamardMatrix::new(n);
    let spread = 1usize << (t - n);
    (0..h.size())
        .map(|k| {
            let mut row = vec![0; 1 << t];
            for j in 0..h.size() {
                row[j * spread] = h.entry(k, j);
            }
            row
        })
        .collect()
}

/// `x^{2t} - 2^t`.
pub fn x2t_minus_2t(t: usize) -> IntPoly {
    &IntPoly::monomial(2 * t, BigInt::one()) - &IntPoly::monomial(0, BigInt::one() << t)
}

/// Exact minimal polynomial of `R(t)`; anything other than `x^{2t} - 2^t` is
/// reported as a mismatch.
pub fn min_poly_rt(t: usize) -> Result<IntPoly> {
    let r = RtMatrix::build(t)?;
    let mp = minimal_poly(&r.dense());
    let expected = x2t_minus_2t(t);
    if mp != expected {
        return Err(Error::IdentityMismatch(format!(
            "minimal polynomial of R({t}) is {mp}, expected {expected}"
        )));
    }
    Ok(mp)
}

/// Exact characteristic polynomial of `R(t)`, factored over the `Θ_d` with
/// `d | t`.
pub fn char_poly_rt(t: usize) -> Result<CharValueSet> {
    let r = RtMatrix::build(t)?;
    let mut rest = char_poly(&r.dense());
    let mut factors = Vec::new();
    for d in divisors(t) {
        for f in theta_factors(d)? {
            let mut mult = 0;
            while let Some(q) = rest.checked_div(&f) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((f, mult));
            }
        }
    }
    if rest.degree() != Some(0) {
        return Err(Error::IdentityMismatch(format!(
            "char poly of R({t}) leaves the cofactor {rest} outside the Θ_d, d | t"
        )));
    }
    Ok(CharValueSet::new(factors))
}

/// All `M`-th roots of unity scaled by `√2`, each with one multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaGroup {
    /// Odd divisor of `t` indexing the group.
    pub d: usize,
    /// Order of the roots of unity, `2^{ν+1} d`.
    pub order: usize,
    #[serde(with = "crate::report::decimal")]
    pub multiplicity: BigInt,
}

/// The eigenvalues of `R(t)` as exact groups of scaled roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaMultiset {
    pub t: usize,
    pub nu: u32,
    pub odd_part: usize,
    pub groups: Vec<DeltaGroup>,
}

impl DeltaMultiset {
    /// For `t = 2^ν m`, each `d | m` contributes the `2^{ν+1}d`-th roots with
    /// multiplicity `Σ_{d'|d} μ(d/d') 2^{2^ν d'} / (2^{ν+1} d)`.
    pub fn new(t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Precondition("t must be positive".into()));
        }
        let nu = t.trailing_zeros();
        let m = t >> nu;
        let two_nu = 1usize << nu;
        let mut groups = Vec::new();
        for d in divisors(m) {
            let order = 2 * two_nu * d;
            let mut num = BigInt::zero();
            for dp in divisors(d) {
                let term = BigInt::one() << (two_nu * dp);
                match mobius(d / dp) {
                    1 => num += term,
                    -1 => num -= term,
                    _ => {}
                }
            }
            let (q, r) = num.div_rem(&BigInt::from(order));
            if !r.is_zero() {
                return Err(Error::NonIntegralMultiplicity(d));
            }
            groups.push(DeltaGroup {
                d,
                order,
                multiplicity: q,
            });
        }
        Ok(DeltaMultiset {
            t,
            nu,
            odd_part: m,
            groups,
        })
    }

    /// `(order, residue, multiplicity)` for every root `√2·e^{2πik/M}`.
    pub fn entries(&self) -> Vec<(usize, usize, BigInt)> {
        self.groups
            .iter()
            .flat_map(|g| (0..g.order).map(move |k| (g.order, k, g.multiplicity.clone())))
            .collect()
    }

    /// Multiplicity-weighted number of roots.
    pub fn total_count(&self) -> BigInt {
        self.groups.iter().map(|g| &g.multiplicity * g.order).sum()
    }

    /// Whether `k ↦ -k` permutes the entries with their multiplicities.
    pub fn is_conjugation_closed(&self) -> bool {
        let map: BTreeMap<(usize, usize), BigInt> = self
            .entries()
            .into_iter()
            .fold(BTreeMap::new(), |mut acc, (m, k, mult)| {
                *acc.entry((m, k)).or_insert_with(BigInt::zero) += mult;
                acc
            });
        map.iter()
            .all(|(&(m, k), v)| map.get(&(m, (m - k) % m)) == Some(v))
    }

    /// `Σ (δ/√2)^n`: a full group of `M`-th roots sums to `M` when `M | n`
    /// and to zero otherwise.
    pub fn unscaled_power_sum(&self, n: usize) -> BigInt {
        self.groups
            .iter()
            .filter(|g| n % g.order == 0)
            .map(|g| &g.multiplicity * g.order)
            .sum()
    }

    /// `Σ δ^n`.
    pub fn power_sum(&self, n: usize) -> BigInt {
        if n % 2 == 1 {
            // every group has even order, so the unscaled sum already vanishes
            return BigInt::zero();
        }
        self.unscaled_power_sum(n) << (n / 2)
    }

    /// Multiplicity of each `Θ_{d''}`, `d'' | t`, in the characteristic
    /// polynomial: `Σ_{d | m, d'' | 2^ν d} mult(d)`.
    pub fn theta_multiplicities(&self) -> BTreeMap<usize, BigInt> {
        let two_nu = 1usize << self.nu;
        divisors(self.t)
            .into_iter()
            .map(|dd| {
                let m: BigInt = self
                    .groups
                    .iter()
                    .filter(|g| (two_nu * g.d) % dd == 0)
                    .map(|g| g.multiplicity.clone())
                    .sum();
                (dd, m)
            })
            .collect()
    }

    /// The multiset as Θ factors: each group is `(x^{M} - 2^{M/2})^{mult}`.
    pub fn char_values(&self) -> Result<CharValueSet> {
        let two_nu = 1usize << self.nu;
        let mut factors = Vec::new();
        for g in &self.groups {
            let mult = g
                .multiplicity
                .to_usize()
                .ok_or_else(|| Error::Precondition(format!("multiplicity of d={} too large", g.d)))?;
            for (f, k) in factor_x2t_minus_2t(two_nu * g.d)?.factors() {
                factors.push((f.clone(), k * mult));
            }
        }
        Ok(CharValueSet::new(factors))
    }
}

/// Closed form of `Σ (δ/√2)^n`: `2^{gcd(n,t)}` when `n/gcd(n,t)` is even.
pub fn unscaled_power_sum_closed_form(t: usize, n: usize) -> BigInt {
    let g = n.gcd(&t);
    if (n / g) % 2 == 0 {
        BigInt::one() << g
    } else {
        BigInt::zero()
    }
}

/// Closed form of `tr R(t)^n`: `2^{n/2 + gcd(n,t)}` when `n/gcd(n,t)` is even.
pub fn trace_closed_form(t: usize, n: usize) -> BigInt {
    let g = n.gcd(&t);
    if (n / g) % 2 == 0 {
        BigInt::one() << (n / 2 + g)
    } else {
        BigInt::zero()
    }
}

/// `tr R(t)^n` for `n = 1..=n_max`, by exact powering.
pub fn rt_power_traces(t: usize, n_max: usize) -> Result<Vec<BigInt>> {
    let r = RtMatrix::build(t)?;
    let size = r.size();
    let mut p: Vec<Vec<BigInt>> = (0..size)
        .map(|i| (0..size).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        p = r.mul_left(&p);
        out.push((0..size).map(|i| p[i][i].clone()).sum());
    }
    Ok(out)
}

/// Exact `tr R(t)^n`.
pub fn trace_rt_power(t: usize, n: usize) -> Result<BigInt> {
    if n == 0 {
        return Ok(BigInt::from(1usize << t.min(RT_CAP)));
    }
    Ok(rt_power_traces(t, n)?.pop().expect("n >= 1"))
}

/// Checks the block description of `R(t)^n`: for `n <= t` it is the stack of
/// `μ^i M(n,t)`, `i < 2^{t-n}`; for `t <= n < 2t` it equals
/// `2^{n-t} (R(t)^{2t-n})^T`.
pub fn verify_desc_rt(t: usize) -> Result<Vec<ClaimReport>> {
    let r = RtMatrix::build(t)?;
    let mut out = Vec::new();
    for n in 1..=t {
        let block = m_n_t(n, t);
        let stacked: IntMatrix = (0..1usize << (t - n))
            .flat_map(|i| block.iter().map(move |row| mu_rotate(row, i)))
            .collect();
        let pass = r.power(n) == stacked;
        out.push(ClaimReport::judged(
            "rt_power_block_stack",
            json!({"t": t, "n": n}),
            "R(t)^n equals the stacked rotations of M(n,t)",
            if pass { "equal" } else { "different" },
            pass,
        ));
    }
    for n in t..2 * t {
        let lhs = r.power(n);
        let low = r.power(2 * t - n);
        let scale = 1i64 << (n - t);
        let size = r.size();
        let pass = (0..size).all(|i| (0..size).all(|j| lhs[i][j] == scale * low[j][i]));
        out.push(ClaimReport::judged(
            "rt_power_transpose_scaling",
            json!({"t": t, "n": n}),
            "R(t)^n = 2^(n-t) (R(t)^(2t-n))^T",
            if pass { "equal" } else { "different" },
            pass,
        ));
    }
    Ok(out)
}

fn hadamard_range_check(t: usize, n: usize) -> Result<()> {
    if n == 0 || n > t {
        return Err(Error::Precondition(format!("need 1 <= n <= t, got n={n}, t={t}")));
    }
    if n > 24 {
        return Err(Error::CapExceeded { requested: n, cap: 24 });
    }
    Ok(())
}

/// `tr R(t)^n` for `1 <= n <= t` as the sum of `M(n)` over the entries
/// `(q + r 2^a, q 2^b + r)`, `q < 2^a`, `r < 2^b`, with `a = t mod n` and
/// `b = n - a`. The lower right corner is the term `q = 2^a-1, r = 2^b-1`.
pub fn trace_via_hadamard(t: usize, n: usize) -> Result<BigInt> {
    hadamard_range_check(t, n)?;
    Ok(BigInt::from(
        hadamard_trace_coordinates(t, n)
            .into_iter()
            .map(|(k, l)| HadamardMatrix::new(n).entry(k, l))
            .sum::<i64>(),
    ))
}

/// Coordinates summed by [`trace_via_hadamard`].
pub fn hadamard_trace_coordinates(t: usize, n: usize) -> Vec<(usize, usize)> {
    let a = t % n;
    let b = n - a;
    let mut out = Vec::with_capacity(1 << n);
    for q in 0..1usize << a {
        for r in 0..1usize << b {
            out.push((q + (r << a), (q << b) + r));
        }
    }
    out
}

/// The same trace as the lower right corner of `M(n)` plus
/// `Σ_{k=0}^{2^n-2} M(n)[2^{t-n} k mod (2^n-1)][k]`.
pub fn trace_via_hadamard_corner(t: usize, n: usize) -> Result<BigInt> {
    hadamard_range_check(t, n)?;
    Ok(BigInt::from(
        corner_trace_entries(t, n).into_iter().sum::<i64>(),
    ))
}

fn corner_trace_entries(t: usize, n: usize) -> Vec<i64> {
    let h = HadamardMatrix::new(n);
    let modulus = (1u128 << n) - 1;
    let shift = ((1u128 << (t - n)) % modulus.max(1)) as u128;
    let mut out = vec![h.entry(h.size() - 1, h.size() - 1)];
    for k in 0..h.size() - 1 {
        let row = if modulus == 1 { 0 } else { (shift * k as u128 % modulus) as usize };
        out.push(h.entry(row, k));
    }
    out
}

/// When `n | 2t`, `n ∤ t` and `n <= t`, every entry in the corner-form trace
/// sum is `1`. Returns `None` if the hypothesis does not hold.
pub fn all_ones_check(t: usize, n: usize) -> Option<bool> {
    if n == 0 || n > t || (2 * t) % n != 0 || t % n == 0 || n > 24 {
        return None;
    }
    Some(corner_trace_entries(t, n).iter().all(|&v| v == 1))
}

/// Central reflection `(k, l) ↦ (2^n-1-k, 2^n-1-l)` of `M(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralSymmetry {
    pub n: usize,
    /// Pairs with `popcount(k) = popcount(l)`, where the reflection scales
    /// the entry by `(-1)^n`.
    pub balanced_pairs: u64,
    pub balanced_failures: u64,
    /// Failures of the scaling by `(-1)^n` over all pairs.
    pub unrestricted_failures: u64,
    /// Failures of the general rule `(-1)^{n + popcount(k) + popcount(l)}`.
    pub general_failures: u64,
}

impl CentralSymmetry {
    pub fn pass(&self) -> bool {
        self.balanced_failures == 0 && self.general_failures == 0
    }
}

pub fn centr_symmetry_check(n: usize) -> Result<CentralSymmetry> {
    if n > 12 {
        return Err(Error::CapExceeded { requested: n, cap: 12 });
    }
    let h = HadamardMatrix::new(n);
    let top = h.size() - 1;
    let sign_n = if n % 2 == 0 { 1 } else { -1 };
    let mut report = CentralSymmetry {
        n,
        balanced_pairs: 0,
        balanced_failures: 0,
        unrestricted_failures: 0,
        general_failures: 0,
    };
    for k in 0..h.size() {
        for l in 0..h.size() {
            let reflected = h.entry(top - k, top - l);
            let plain = sign_n * h.entry(k, l);
            let (pk, pl) = (k.count_ones(), l.count_ones());
            if reflected != plain {
                report.unrestricted_failures += 1;
            }
            if pk == pl {
                report.balanced_pairs += 1;
                if reflected != plain {
                    report.balanced_failures += 1;
                }
            }
            let general = if (pk + pl) % 2 == 0 { plain } else { -plain };
            if reflected != general {
                report.general_failures += 1;
            }
        }
    }
    Ok(report)
}

/// `wt((0,t)_n) = 2^{n-1} - ½ Σ δ^n`, with the power sum taken from the
/// expanded Θ product by Newton's identities.
pub fn quad_weight_formula(t: usize, n: usize) -> Result<BigInt> {
    Ok(quad_weight_formula_range(t, n)?.pop().expect("n >= 1"))
}

/// [`quad_weight_formula`] for `n = 1..=n_max`.
pub fn quad_weight_formula_range(t: usize, n_max: usize) -> Result<Vec<BigInt>> {
    if n_max == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let values = DeltaMultiset::new(t)?.char_values()?;
    let sums = power_sums_of_poly(&values.expanded(), n_max);
    Ok((1..=n_max)
        .map(|n| {
            let s = sums.get(n);
            debug_assert!(s.is_even());
            (BigInt::one() << (n - 1)) - (s >> 1)
        })
        .collect())
}

/// Outcome of the recurrence-order test on a weight sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceCheck {
    pub period: usize,
    pub order: usize,
    pub bound: usize,
    pub window: usize,
    pub minimal_poly: Option<IntPoly>,
    pub divides_minus: bool,
    pub divides_plus: bool,
}

impl RecurrenceCheck {
    pub fn pass(&self) -> bool {
        self.order <= self.bound && (self.divides_minus || self.divides_plus)
    }
}

/// Weight window needed by [`recurrence_order_check`].
pub fn recurrence_window(collection: &TupleCollection) -> Result<usize> {
    Ok(2 * (2 * period_n(collection)? + 1))
}

/// Finds the shortest recurrence of `weights` (indexed from `n = 1`) and tests
/// order `<= 2N+1` and division of `(x-2)(x^{2N} ∓ 2^N)`.
pub fn recurrence_order_check(collection: &TupleCollection, weights: &[BigInt]) -> Result<RecurrenceCheck> {
    collection.quadratic_offsets()?;
    let period = period_n(collection)?;
    let window = 2 * (2 * period + 1);
    if weights.len() < window {
        return Err(Error::InsufficientData {
            needed: window,
            available: weights.len(),
        });
    }
    let rec = berlekamp_massey_int(weights);
    let minimal_poly = rec.int_char_poly();
    let x_minus_2 = IntPoly::linear(2);
    let minus = &x_minus_2 * &x2t_minus_2t(period);
    let plus = &x_minus_2 * &(&IntPoly::monomial(2 * period, BigInt::one()) + &IntPoly::monomial(0, BigInt::one() << period));
    let divides = |target: &IntPoly| minimal_poly.as_ref().is_some_and(|p| target.checked_div(p).is_some());
    Ok(RecurrenceCheck {
        period,
        order: rec.order(),
        bound: 2 * period + 1,
        window: weights.len(),
        divides_minus: divides(&minus),
        divides_plus: divides(&plus),
        minimal_poly,
    })
}

/// Least `s` with `f | x^{2s} - 2^s`, searched up to `limit`.
pub fn theta_level(f: &IntPoly, limit: usize) -> Option<usize> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return None;
    }
    let x2 = IntPoly::monomial(2, BigInt::one());
    let mut power = IntPoly::one();
    let mut two_pow = BigInt::one();
    for s in 1..=limit {
        power = reduce_monic(&(&power * &x2), f);
        two_pow <<= 1;
        if reduce_monic(&(&power - &IntPoly::monomial(0, two_pow.clone())), f).is_zero() {
            return Some(s);
        }
    }
    None
}

fn reduce_monic(p: &IntPoly, f: &IntPoly) -> IntPoly {
    let df = f.degree().expect("nonzero modulus");
    let mut c: Vec<BigInt> = p.coeffs().to_vec();
    while c.len() > df {
        let lead = c.pop().expect("nonempty");
        if lead.is_zero() {
            continue;
        }
        let shift = c.len() - df;
        for (i, fc) in f.coeffs()[..df].iter().enumerate() {
            c[shift + i] -= &lead * fc;
        }
    }
    IntPoly::new(c)
}

/// How the order of the phase group compares with the period `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseGroup {
    pub order: usize,
    pub period: usize,
    /// `"N"`, `"2N"`, `"4N"`, or `"other"`.
    pub case: String,
}

impl PhaseGroup {
    pub fn new(order: usize, period: usize) -> Self {
        let case = match order {
            o if o == period => "N",
            o if o == 2 * period => "2N",
            o if o == 4 * period => "4N",
            _ => "other",
        };
        PhaseGroup {
            order,
            period,
            case: case.to_string(),
        }
    }

    pub fn in_expected_cases(&self) -> bool {
        self.case != "other"
    }
}

/// Order of the group generated by `δ/√2` over all characteristic values `δ`.
/// A factor `f` with least `s` such that `f | x^{2s} - 2^s` contributes roots
/// of unity generating a group of order `2s`. With `drop_one_x_minus_2`, one
/// copy of `x - 2` is ignored (the trivial value of the shift side).
pub fn phase_group_order(values: &CharValueSet, drop_one_x_minus_2: bool) -> Result<usize> {
    let x_minus_2 = IntPoly::linear(2);
    let mut order = 1usize;
    for (f, mult) in values.factors() {
        if drop_one_x_minus_2 && *f == x_minus_2 && *mult == 1 {
            continue;
        }
        let limit = 64 * f.degree().unwrap_or(1) + 64;
        let s = theta_level(f, limit).ok_or_else(|| {
            Error::IdentityMismatch(format!("{f} has roots that are not √2 times roots of unity"))
        })?;
        order = order.lcm(&(2 * s));
    }
    Ok(order)
}

/// Easy-coefficient test: `wt(f_n) = 2^n - ½ p_n` where `p_n` are the power
/// sums of the shift's characteristic values (the nonzero roots of `charpoly`).
pub fn easy_coefficients_agree(charpoly: &IntPoly, weights: &[(usize, BigInt)]) -> Vec<(usize, bool)> {
    let (_, body) = charpoly.strip_x_power();
    let n_max = weights.iter().map(|(n, _)| *n).max().unwrap_or(0);
    let sums = power_sums_of_poly(&body, n_max.max(1));
    weights
        .iter()
        .map(|(n, w)| {
            let predicted = (BigInt::one() << *n) - (sums.get(*n) >> 1);
            (*n, sums.get(*n).is_even() && &predicted == w)
        })
        .collect()
}

/// Θ factor multiplicities of a multiset in which only `Θ_d` factors occur;
/// used for readable reports.
pub fn theta_breakdown(values: &CharValueSet, t: usize) -> BTreeMap<usize, usize> {
    divisors(t)
        .into_iter()
        .filter_map(|d| {
            let th = theta(d);
            let m = values.multiplicity(&th).max(
                theta_factors(d)
                    .ok()
                    .and_then(|fs| fs.first().map(|f| values.multiplicity(f)))
                    .unwrap_or(0),
            );
            (m > 0).then_some((d, m))
        })
        .collect()
}

/// `|2^{n-1} - w|`, the distance of a weight from balance.
pub fn imbalance(n: usize, weight: &BigInt) -> BigInt {
    ((BigInt::one() << (n - 1)) - weight).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs::{rs_weight_oracle, Caps};

    #[test]
    fn rotation_examples() {
        assert_eq!(mu_rotate(&[0, 1, 0, 1, 0, 0], 2), vec![0, 0, 0, 1, 0, 1]);
        assert_eq!(mu_rotate(&[1, 0, 1, 0], 1), vec![0, 1, 0, 1]);
        assert_eq!(mu_rotate(&[3, 1, 4, 1, 5], 5), vec![3, 1, 4, 1, 5]);
    }

    #[test]
    fn small_rt_matrices() {
        assert_eq!(RtMatrix::build(1).unwrap().dense(), vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(
            RtMatrix::build(2).unwrap().dense(),
            vec![vec![1, 0, 1, 0], vec![1, 0, -1, 0], vec![0, 1, 0, 1], vec![0, 1, 0, -1]]
        );
        for t in 1..=6 {
            let r = RtMatrix::build(t).unwrap().dense();
            assert!(r.iter().all(|row| row.iter().filter(|&&v| v != 0).count() == 2));
            assert!(r.iter().all(|row| row.iter().find(|&&v| v != 0) == Some(&1)));
        }
        assert!(matches!(RtMatrix::build(9), Err(Error::CapExceeded { .. })));
        assert!(RtMatrix::build(0).is_err());
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(min_poly_rt(1).unwrap(), IntPoly::from_i64s(&[-2, 0, 1]));
        assert_eq!(min_poly_rt(2).unwrap(), IntPoly::from_i64s(&[-4, 0, 0, 0, 1]));
        assert_eq!(min_poly_rt(3).unwrap(), IntPoly::from_i64s(&[-8, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn factored_char_polys() {
        let x2m2 = IntPoly::from_i64s(&[-2, 0, 1]);
        let x2p2 = IntPoly::from_i64s(&[2, 0, 1]);
        assert_eq!(char_poly_rt(1).unwrap(), CharValueSet::new(vec![(x2m2.clone(), 1)]));
        let c2 = char_poly_rt(2).unwrap();
        assert_eq!(c2.multiplicity(&x2m2), 1);
        assert_eq!(c2.multiplicity(&x2p2), 1);
        assert_eq!(c2.total_degree(), 4);
        let c3 = char_poly_rt(3).unwrap();
        assert_eq!(c3.multiplicity(&x2m2), 2);
        assert_eq!(c3.multiplicity(&theta(3)), 1);
        assert_eq!(c3.total_degree(), 8);
    }

    #[test]
    fn delta_examples() {
        let d1 = DeltaMultiset::new(1).unwrap();
        assert_eq!(d1.groups, vec![DeltaGroup { d: 1, order: 2, multiplicity: 1.into() }]);
        let d2 = DeltaMultiset::new(2).unwrap();
        assert_eq!(d2.groups, vec![DeltaGroup { d: 1, order: 4, multiplicity: 1.into() }]);
        let d3 = DeltaMultiset::new(3).unwrap();
        assert_eq!(d3.groups.len(), 2);
        assert_eq!(d3.groups[1], DeltaGroup { d: 3, order: 6, multiplicity: 1.into() });
        assert_eq!(d3.total_count(), BigInt::from(8));
        let m = d3.theta_multiplicities();
        assert_eq!(m[&1], BigInt::from(2));
        assert_eq!(m[&3], BigInt::from(1));
        for t in 1..=10 {
            let d = DeltaMultiset::new(t).unwrap();
            assert_eq!(d.total_count(), BigInt::one() << t);
            assert!(d.is_conjugation_closed());
            assert_eq!(d.char_values().unwrap().total_degree(), 1 << t);
        }
    }

    #[test]
    fn delta_power_sums_match_closed_form() {
        for t in 1..=8 {
            let d = DeltaMultiset::new(t).unwrap();
            for n in 1..=4 * t {
                assert_eq!(d.unscaled_power_sum(n), unscaled_power_sum_closed_form(t, n), "t={t} n={n}");
            }
        }
    }

    #[test]
    fn traces() {
        assert_eq!(trace_rt_power(2, 4).unwrap(), BigInt::from(16));
        assert_eq!(trace_rt_power(1, 2).unwrap(), BigInt::from(4));
        for t in 1..=5 {
            let tr = rt_power_traces(t, 4 * t).unwrap();
            for (i, v) in tr.iter().enumerate() {
                let n = i + 1;
                assert_eq!(v, &trace_closed_form(t, n));
                if n % 2 == 1 {
                    assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn block_descriptions() {
        for t in 1..=5 {
            for c in verify_desc_rt(t).unwrap() {
                assert!(c.pass, "{c:?}");
            }
        }
        let r = RtMatrix::build(2).unwrap();
        assert_eq!(r.power(2), m_n_t(2, 2));
        let r3 = r.power(3);
        let rt = r.dense();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(r3[i][j], 2 * rt[j][i]);
            }
        }
    }

    #[test]
    fn hadamard_traces() {
        assert_eq!(trace_via_hadamard(3, 2).unwrap(), BigInt::from(4));
        assert_eq!(trace_via_hadamard(3, 1).unwrap(), BigInt::zero());
        assert_eq!(trace_via_hadamard(5, 2).unwrap(), BigInt::from(4));
        for t in 1..=7 {
            let tr = rt_power_traces(t, t).unwrap();
            for n in 1..=t {
                assert_eq!(trace_via_hadamard(t, n).unwrap(), tr[n - 1], "t={t} n={n}");
                assert_eq!(trace_via_hadamard_corner(t, n).unwrap(), tr[n - 1], "t={t} n={n}");
            }
        }
        assert!(trace_via_hadamard(3, 4).is_err());
    }

    #[test]
    fn hadamard_matrix_is_orthogonal() {
        for n in 0..=6 {
            let h = HadamardMatrix::new(n);
            let d = h.dense();
            for i in 0..h.size() {
                assert_eq!(d[i][i], h.entry(i, i));
                for j in 0..h.size() {
                    assert_eq!(d[i][j], d[j][i]);
                    let dot: i64 = (0..h.size()).map(|k| d[i][k] * d[j][k]).sum();
                    assert_eq!(dot, if i == j { h.size() as i64 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn central_symmetry() {
        let h1 = HadamardMatrix::new(1);
        assert_eq!(h1.entry(1, 1), -h1.entry(0, 0));
        for n in 1..=6 {
            let c = centr_symmetry_check(n).unwrap();
            assert!(c.pass(), "{c:?}");
        }
        assert_eq!(centr_symmetry_check(2).unwrap().unrestricted_failures, 8);
        for t in 1..=8 {
            for n in 1..=t {
                for (k, l) in hadamard_trace_coordinates(t, n) {
                    assert_eq!(k.count_ones(), l.count_ones());
                }
            }
        }
    }

    #[test]
    fn all_ones_lemma() {
        assert_eq!(all_ones_check(3, 2), Some(true));
        assert_eq!(all_ones_check(3, 1), None);
        for t in 1..=12 {
            for n in 1..=t {
                if let Some(ok) = all_ones_check(t, n) {
                    assert!(ok, "t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn weight_formula_examples() {
        assert_eq!(quad_weight_formula(1, 3).unwrap(), BigInt::from(4));
        assert_eq!(quad_weight_formula(2, 4).unwrap(), BigInt::zero());
        assert_eq!(quad_weight_formula(2, 2).unwrap(), BigInt::from(2));
        for t in 1..=8 {
            let d = DeltaMultiset::new(t).unwrap();
            let f = quad_weight_formula_range(t, 40).unwrap();
            for n in 1..=40 {
                let direct = (BigInt::one() << (n - 1)) - (d.power_sum(n) >> 1);
                assert_eq!(f[n - 1], direct);
            }
        }
    }

    #[test]
    fn weight_formula_matches_oracle() {
        let caps = Caps::default();
        for t in 1..=3 {
            let c = TupleCollection::monomial_quadratic(t);
            let f = quad_weight_formula_range(t, 14).unwrap();
            for n in 2 * t + 1..=14 {
                assert_eq!(f[n - 1], BigInt::from(rs_weight_oracle(&c, n, &caps).unwrap()));
            }
        }
    }

    #[test]
    fn recurrence_orders() {
        let caps = Caps::default();
        let c = TupleCollection::parse("0,1").unwrap();
        let w: Vec<BigInt> = (1..=12).map(|n| rs_weight_oracle(&c, n, &caps).unwrap().into()).collect();
        let r = recurrence_order_check(&c, &w).unwrap();
        assert_eq!(r.period, 2);
        assert_eq!(r.order, 3);
        assert_eq!(r.minimal_poly, Some(IntPoly::from_i64s(&[4, -2, -2, 1])));
        assert!(r.pass());
        assert!(matches!(recurrence_order_check(&c, &w[..5]), Err(Error::InsufficientData { .. })));
        let c2 = TupleCollection::parse("0,2").unwrap();
        let w2: Vec<BigInt> = (1..=18).map(|n| rs_weight_oracle(&c2, n, &caps).unwrap().into()).collect();
        assert!(recurrence_order_check(&c2, &w2).unwrap().pass());
    }

    #[test]
    fn phase_group_of_delta_sets() {
        for t in 1..=6 {
            let values = DeltaMultiset::new(t).unwrap().char_values().unwrap();
            assert_eq!(phase_group_order(&values, false).unwrap(), 2 * t);
        }
        assert_eq!(theta_level(&IntPoly::from_i64s(&[2, 0, 1]), 10), Some(2));
        assert_eq!(theta_level(&IntPoly::from_i64s(&[-3, 0, 1]), 10), None);
        assert_eq!(PhaseGroup::new(8, 2).case, "4N");
    }

    #[test]
    fn conjugate_to_negative() {
        for t in 1..=6 {
            let r = RtMatrix::build(t).unwrap().dense();
            let neg: IntMatrix = r.iter().map(|row| row.iter().map(|v| -v).collect()).collect();
            assert_eq!(char_poly(&r), char_poly(&neg));
        }
    }
}
