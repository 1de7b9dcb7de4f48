//! Multisets of algebraic integers held as irreducible factors with
//! multiplicities, and their power sums via Newton's identities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::intpoly::IntPoly;
use crate::error::{Error, Result};

/// A multiset of algebraic integers: the roots of each factor, repeated by
/// its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CharValueSet {
    factors: Vec<(IntPoly, usize)>,
}

impl CharValueSet {
    /// Merges equal factors and drops zero multiplicities; order of first
    /// appearance is kept.
    pub fn new(factors: Vec<(IntPoly, usize)>) -> Self {
        let mut merged: Vec<(IntPoly, usize)> = Vec::new();
        for (f, m) in factors {
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(g, _)| *g == f) {
                Some((_, k)) => *k += m,
                None => merged.push((f, m)),
            }
        }
        CharValueSet { factors: merged }
    }

    pub fn factors(&self) -> &[(IntPoly, usize)] {
        &self.factors
    }

    pub fn multiplicity(&self, f: &IntPoly) -> usize {
        self.factors
            .iter()
            .find(|(g, _)| g == f)
            .map_or(0, |(_, m)| *m)
    }

    /// Number of roots counted with multiplicity.
    pub fn total_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, m)| f.degree().unwrap_or(0) * m)
            .sum()
    }

    /// The product of all factors with multiplicity.
    pub fn expanded(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::one(), |acc, (f, m)| &acc * &f.pow(*m))
    }

    /// Compact rendering such as `(x-2)(x^2-2)^2`.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(f, m)| {
                let body = format!("({})", f.render("x", false, false));
                if *m == 1 {
                    body
                } else {
                    format!("{body}^{m}")
                }
            })
            .collect()
    }
}

impl fmt::Display for CharValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Power sums `p_1, p_2, ...` of a root multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSumSeq {
    values: Vec<BigInt>,
}

impl PowerSumSeq {
    /// `p_n` for `1 <= n <= len`.
    pub fn get(&self, n: usize) -> &BigInt {
        assert!(n >= 1, "power sums are indexed from 1");
        &self.values[n - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// Power sums of the roots of a monic polynomial, by Newton's recursion on its
/// coefficients.
pub fn power_sums_of_poly(f: &IntPoly, n_max: usize) -> PowerSumSeq {
    assert!(f.is_monic(), "power sums need a monic polynomial");
    let m = f.degree().unwrap_or(0);
    // e_i = (-1)^i c_{m-i}
    let e: Vec<BigInt> = (0..=m)
        .map(|i| {
            let c = f.coeff(m - i);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(n_max);
    for k in 1..=n_max {
        let mut acc = BigInt::zero();
        for i in 1..k.min(m + 1) {
            let term = &e[i] * &p[k - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= m {
            let term = &e[k] * BigInt::from(k);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    PowerSumSeq { values: p }
}

/// Exact power sums of a characteristic-value multiset.
pub fn newton_power_sums(set: &CharValueSet, n_max: usize) -> PowerSumSeq {
    power_sums_of_poly(&set.expanded(), n_max)
}

/// Elementary symmetric functions `e_0 = 1, e_1, ..., e_m` from power sums,
/// as exact rationals.
pub fn elementary_from_power_sums(p: &[BigInt], m: usize) -> Result<Vec<BigRational>> {
    if p.len() < m {
        return Err(Error::InsufficientData {
            needed: m,
            available: p.len(),
        });
    }
    let mut e = vec![BigRational::one()];
    for k in 1..=m {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * BigRational::from_integer(p[i - 1].clone());
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    Ok(e)
}

/// The monic degree-`m` integer polynomial whose roots have power sums
/// `p_1..p_m`.
pub fn poly_from_power_sums(p: &[BigInt], m: usize) -> Result<IntPoly> {
    let e = elementary_from_power_sums(p, m)?;
    let mut coeffs = vec![BigInt::zero(); m + 1];
    for (i, ei) in e.iter().enumerate() {
        if !ei.is_integer() {
            return Err(Error::NonIntegral(format!("e_{i} = {ei}")));
        }
        let v = ei.to_integer();
        coeffs[m - i] = if i % 2 == 0 { v } else { -v };
    }
    Ok(IntPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cyclotomic::{factor_x2t_minus_2t, theta_factors};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn power_sum_examples() {
        let s = CharValueSet::new(vec![(p(&[-2, 0, 1]), 1)]);
        assert_eq!(newton_power_sums(&s, 6).values(), ints(&[0, 4, 0, 8, 0, 16]));
        let s = CharValueSet::new(vec![(p(&[-2, 1]), 1)]);
        assert_eq!(newton_power_sums(&s, 5).values(), ints(&[2, 4, 8, 16, 32]));
        let s = CharValueSet::new(vec![(p(&[2, 0, 1]), 1)]);
        assert_eq!(newton_power_sums(&s, 6).values(), ints(&[0, -4, 0, 8, 0, -16]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(poly_from_power_sums(&ints(&[0, -4]), 2).unwrap(), p(&[2, 0, 1]));
        assert_eq!(poly_from_power_sums(&ints(&[2]), 1).unwrap(), p(&[-2, 1]));
        assert_eq!(poly_from_power_sums(&ints(&[0, 4]), 2).unwrap(), p(&[-2, 0, 1]));
        assert!(matches!(
            poly_from_power_sums(&ints(&[1, 0]), 2),
            Err(Error::NonIntegral(_))
        ));
        assert!(matches!(
            poly_from_power_sums(&ints(&[1]), 2),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn multiplicities_add_power_sums() {
        let f = p(&[2, -2, 1]);
        let once = newton_power_sums(&CharValueSet::new(vec![(f.clone(), 1)]), 10);
        let thrice = newton_power_sums(&CharValueSet::new(vec![(f, 3)]), 10);
        for n in 1..=10 {
            assert_eq!(thrice.get(n), &(once.get(n) * 3));
        }
    }

    #[test]
    fn round_trip_on_theta_factors() {
        let mut sets = Vec::new();
        for d in 1..=24 {
            for f in theta_factors(d).unwrap() {
                sets.push(CharValueSet::new(vec![(f, 1)]));
            }
        }
        for t in 1..=8 {
            sets.push(factor_x2t_minus_2t(t).unwrap());
        }
        sets.push(CharValueSet::new(vec![(p(&[-2, 1]), 1), (p(&[2, 2, 1]), 2)]));
        for s in sets {
            let m = s.total_degree();
            let sums = newton_power_sums(&s, m);
            assert_eq!(poly_from_power_sums(sums.values(), m).unwrap(), s.expanded());
        }
    }

    #[test]
    fn rendering() {
        let s = CharValueSet::new(vec![(p(&[-2, 1]), 1), (p(&[-2, 0, 1]), 2)]);
        assert_eq!(s.to_string(), "(x-2)(x^2-2)^2");
    }
}
