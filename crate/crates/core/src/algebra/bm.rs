//! Berlekamp–Massey over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::intpoly::IntPoly;

/// A shortest linear recurrence `s_n + c_1 s_{n-1} + ... + c_L s_{n-L} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalRecurrence {
    /// `1, c_1, ..., c_L`.
    connection: Vec<BigRational>,
}

impl MinimalRecurrence {
    pub fn order(&self) -> usize {
        self.connection.len() - 1
    }

    /// Monic characteristic polynomial `x^L + c_1 x^{L-1} + ... + c_L`,
    /// constant term first.
    pub fn char_poly(&self) -> Vec<BigRational> {
        self.connection.iter().rev().cloned().collect()
    }

    /// The characteristic polynomial, if all its coefficients are integers.
    pub fn int_char_poly(&self) -> Option<IntPoly> {
        self.char_poly()
            .into_iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    /// Whether the recurrence holds at every index of `seq` where it applies.
    pub fn annihilates(&self, seq: &[BigRational]) -> bool {
        let l = self.order();
        (l..seq.len()).all(|n| {
            let mut acc = BigRational::zero();
            for (i, c) in self.connection.iter().enumerate() {
                acc += c * &seq[n - i];
            }
            acc.is_zero()
        })
    }

    /// Extends `seq` to `len` terms using the recurrence.
    pub fn extend(&self, seq: &[BigRational], len: usize) -> Vec<BigRational> {
        let l = self.order();
        assert!(seq.len() >= l, "need at least L initial terms");
        let mut out = seq.to_vec();
        while out.len() < len {
            let n = out.len();
            let mut acc = BigRational::zero();
            for (i, c) in self.connection.iter().enumerate().skip(1) {
                acc -= c * &out[n - i];
            }
            out.push(acc);
        }
        out
    }
}

impl Serialize for MinimalRecurrence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.char_poly().iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

pub fn berlekamp_massey(seq: &[BigRational]) -> MinimalRecurrence {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = BigRational::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=l {
            if let Some(ci) = c.get(i) {
                d += ci * &seq[n - i];
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            last = d;
            m = 1;
        } else {
            c = next;
            m += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    MinimalRecurrence { connection: c }
}

/// Convenience wrapper for integer sequences.
pub fn berlekamp_massey_int(seq: &[BigInt]) -> MinimalRecurrence {
    let rats: Vec<BigRational> = seq
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    berlekamp_massey(&rats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn powers_of_two() {
        let seq: Vec<i64> = (1..=10).map(|n| 1 << n).collect();
        let r = berlekamp_massey(&rats(&seq));
        assert_eq!(r.int_char_poly(), Some(IntPoly::from_i64s(&[-2, 1])));
    }

    #[test]
    fn constant_sequence() {
        let r = berlekamp_massey(&rats(&[7; 8]));
        assert_eq!(r.int_char_poly(), Some(IntPoly::from_i64s(&[-1, 1])));
    }

    #[test]
    fn weight_like_sequence() {
        // 2^{n-1} - (√2^n + (-√2)^n)/2 for n = 1..12
        let seq: Vec<i64> = (1..=12)
            .map(|n: u32| {
                let half = if n % 2 == 0 { 1i64 << (n / 2) } else { 0 };
                (1i64 << (n - 1)) - half
            })
            .collect();
        let r = berlekamp_massey(&rats(&seq));
        assert_eq!(r.int_char_poly(), Some(IntPoly::from_i64s(&[4, -2, -2, 1])));
        assert!(r.annihilates(&rats(&seq)));
    }

    #[test]
    fn zero_roots_raise_the_order() {
        // 5, 0, 0, ... satisfies s_n = 0 for n >= 1 only: polynomial x
        let r = berlekamp_massey(&rats(&[5, 0, 0, 0, 0, 0]));
        assert_eq!(r.int_char_poly(), Some(IntPoly::from_i64s(&[0, 1])));
        let r = berlekamp_massey(&rats(&[0, 0, 0, 3, 6, 12, 24, 48, 96, 192]));
        assert!(r.annihilates(&rats(&[0, 0, 0, 3, 6, 12, 24, 48, 96, 192])));
        assert_eq!(r.order(), 4);
    }

    #[test]
    fn rational_coefficients() {
        let seq: Vec<BigRational> = (0..8)
            .map(|n| BigRational::new(1.into(), BigInt::from(2).pow(n)))
            .collect();
        let r = berlekamp_massey(&seq);
        assert_eq!(r.order(), 1);
        assert_eq!(r.int_char_poly(), None);
    }

    proptest! {
        #[test]
        fn recovers_random_recurrences(
            coeffs in proptest::collection::vec(-3i64..=3, 1..5),
            init in proptest::collection::vec(-5i64..=5, 5),
        ) {
            let l = coeffs.len();
            let mut seq: Vec<i64> = init[..l].to_vec();
            for n in l..(4 * l + 4) {
                let v: i64 = (1..=l).map(|i| coeffs[i - 1] * seq[n - i]).sum();
                seq.push(v);
            }
            let r = berlekamp_massey(&rats(&seq));
            prop_assert!(r.order() <= l);
            prop_assert!(r.annihilates(&rats(&seq)));
            let ext = r.extend(&rats(&seq[..2 * l]), seq.len());
            prop_assert_eq!(ext, rats(&seq));
        }
    }
}
