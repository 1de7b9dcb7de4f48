//! Brute-force weight oracles in both contexts and the solution counts that
//! link them to shifts and curves.
//!
//! Inputs of an `n`-variable function are integers whose bit `i` holds
//! `x_i`. The truth-table oracle evaluates the algebraic normal form on 64
//! inputs per machine word: variables `x_0..x_5` vary inside a word and the
//! remaining variables are constant across it.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, PfPlan};
use crate::tuples::TupleCollection;

/// Enumeration limits. These are configuration, not constants: raise them on
/// hardware that can afford it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub rs_oracle: usize,
    pub trace_oracle: usize,
    /// Shared by the pair and curve counts, which hold a `2^n` histogram.
    pub solution_count: usize,
    pub parallel: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            rs_oracle: 28,
            trace_oracle: 24,
            solution_count: 24,
            parallel: true,
        }
    }
}

impl Caps {
    pub fn sequential(self) -> Self {
        Caps {
            parallel: false,
            ..self
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n > 62 {
        return Err(Error::CapExceeded {
            requested: n,
            cap: cap.min(62),
        });
    }
    Ok(())
}

/// Value of the rotation-symmetric function `f_{C,n}` at `x`.
pub fn rs_eval(collection: &TupleCollection, x: &[bool]) -> bool {
    let n = x.len();
    if n == 0 {
        return false;
    }
    let mut acc = false;
    for i in 0..n {
        for t in collection.tuples() {
            acc ^= t.positions().all(|a| x[(i + a) % n]);
        }
    }
    acc
}

/// `x` rotated so that bit `i` of the result is `x_{(i+k) mod n}`.
pub fn rotate_bits(x: u64, k: usize, n: usize) -> u64 {
    let k = k % n;
    if k == 0 {
        return x;
    }
    let mask = (1u64 << n) - 1;
    ((x >> k) | (x << (n - k))) & mask
}

/// The vector map `P_{f,n}`: component `i` is the sum over tuples of
/// `x_i x_{i+a_1} ... x_{i+a_{d-1}}`.
pub fn pf_vector(collection: &TupleCollection, n: usize, x: u64) -> u64 {
    let mut out = 0;
    for t in collection.tuples() {
        out ^= t
            .positions()
            .fold(u64::MAX, |acc, a| acc & rotate_bits(x, a, n));
    }
    out & ((1u64 << n) - 1)
}

/// The algebraic normal form of `f_{C,n}`: monomials as variable masks,
/// after collapsing repeated variables and cancelling repeated monomials.
pub fn anf_monomials(collection: &TupleCollection, n: usize) -> Vec<u64> {
    let mut parity: HashMap<u64, bool> = HashMap::new();
    for i in 0..n {
        for t in collection.tuples() {
            let mask = t.positions().fold(0u64, |m, a| m | 1 << ((i + a) % n));
            *parity.entry(mask).or_insert(false) ^= true;
        }
    }
    let mut out: Vec<u64> = parity.into_iter().filter(|&(_, p)| p).map(|(m, _)| m).collect();
    out.sort_unstable();
    out
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Weight of `f_{C,n}` by bit-parallel truth-table enumeration.
pub fn rs_weight_oracle(collection: &TupleCollection, n: usize, caps: &Caps) -> Result<u64> {
    check_cap(n, caps.rs_oracle)?;
    if n == 0 {
        return Ok(0);
    }
    // (high-variable mask, in-word value) per monomial
    let monomials: Vec<(u64, u64)> = anf_monomials(collection, n)
        .into_iter()
        .map(|m| {
            let low = (0..6)
                .filter(|j| m >> j & 1 == 1)
                .fold(u64::MAX, |acc, j| acc & LOW_PATTERNS[j]);
            (m >> 6, low)
        })
        .collect();
    if n < 6 {
        let valid = (1u64 << (1 << n)) - 1;
        let word = monomials.iter().fold(0u64, |acc, &(_, low)| acc ^ low);
        return Ok((word & valid).count_ones() as u64);
    }
    let words = 1u64 << (n - 6);
    let count_word = |w: u64| -> u64 {
        let mut acc = 0u64;
        for &(high, low) in &monomials {
            if w & high == high {
                acc ^= low;
            }
        }
        acc.count_ones() as u64
    };
    if caps.parallel && words >= 1 << 12 {
        Ok((0..words).into_par_iter().map(count_word).sum())
    } else {
        Ok((0..words).map(count_word).sum())
    }
}

/// Weight of `x -> Tr(P_f(x))` on GF(2^n) by enumerating the field.
pub fn trace_weight_oracle(collection: &TupleCollection, n: usize, caps: &Caps) -> Result<u64> {
    check_cap(n, caps.trace_oracle)?;
    let ctx = FieldCtx::new(n);
    let plan = PfPlan::new(collection);
    let one = |x: u64| ctx.trace_raw(plan.eval(&ctx, x)) as u64;
    if caps.parallel && n >= 12 {
        Ok((0..ctx.size()).into_par_iter().map(one).sum())
    } else {
        Ok((0..ctx.size()).map(one).sum())
    }
}

/// Number of affine points `(x, y)` over GF(2^n) with `P_f(x) = y + y^2`.
///
/// Counted through the image histogram of `y -> y + y^2`, without using the
/// trace.
pub fn curve_point_count(collection: &TupleCollection, n: usize, caps: &Caps) -> Result<u64> {
    check_cap(n, caps.solution_count)?;
    let ctx = FieldCtx::new(n);
    let plan = PfPlan::new(collection);
    let mut hist = vec![0u32; ctx.size() as usize];
    for y in 0..ctx.size() {
        hist[(y ^ ctx.square_raw(y)) as usize] += 1;
    }
    let count = |x: u64| hist[plan.eval(&ctx, x) as usize] as u64;
    if caps.parallel && n >= 12 {
        Ok((0..ctx.size()).into_par_iter().map(count).sum())
    } else {
        Ok((0..ctx.size()).map(count).sum())
    }
}

/// Number of pairs `(x, y)` in `V_n^2` with `P_{f,n}(x) = y + σy`, where
/// `σ` rotates coordinates left by one.
pub fn rs_pair_count(collection: &TupleCollection, n: usize, caps: &Caps) -> Result<u64> {
    check_cap(n, caps.solution_count)?;
    if n == 0 {
        return Ok(1);
    }
    let size = 1u64 << n;
    let mut hist = vec![0u32; size as usize];
    for y in 0..size {
        hist[(y ^ rotate_bits(y, 1, n)) as usize] += 1;
    }
    let count = |x: u64| hist[pf_vector(collection, n, x) as usize] as u64;
    if caps.parallel && n >= 12 {
        Ok((0..size).into_par_iter().map(count).sum())
    } else {
        Ok((0..size).map(count).sum())
    }
}

/// `W_f(0) = 2^n - 2 wt(f_n)`.
pub fn walsh_zero(n: usize, weight: &BigInt) -> BigInt {
    (BigInt::from(1) << n) - weight * 2
}
