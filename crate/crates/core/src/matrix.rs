//! Exact characteristic polynomials of integer matrices.
//!
//! The polynomial is computed modulo enough word-size primes to exceed a
//! coefficient bound, by Hessenberg reduction, and reassembled with the
//! Chinese remainder theorem.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::IntPoly;

/// Dense square integer matrix.
pub type IntMatrix = Vec<Vec<i64>>;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The largest primes below `2^31`, descending.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (1u64 << 30..1u64 << 31)
            .rev()
            .filter(|&p| is_prime(p))
            .take(512)
            .collect()
    })
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut e, mut base, mut acc) = (p - 2, a % p, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Characteristic polynomial `det(xI - A)` modulo `p`, constant term first.
fn charpoly_mod(a: &IntMatrix, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a
        .iter()
        .map(|row| row.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
        .collect();
    // Similarity reduction to upper Hessenberg form.
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&r| h[r][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = inv_mod(h[col + 1][col], p);
        for r in col + 2..n {
            if h[r][col] == 0 {
                continue;
            }
            let f = h[r][col] * inv % p;
            // row_r -= f row_{col+1}
            for k in 0..n {
                let sub = f * h[col + 1][k] % p;
                h[r][k] = (h[r][k] + p - sub) % p;
            }
            // col_{col+1} += f col_r
            for row in h.iter_mut() {
                row[col + 1] = (row[col + 1] + f * row[r]) % p;
            }
        }
    }
    // p_m(x) = (x - h_mm) p_{m-1} - Σ_{i<m} h_im (Π_{j=i+1..m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - c * h[m][m] % p) % p;
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = prod * h[i + 1][i] % p;
            if prod == 0 {
                break;
            }
            let coef = h[i][m] * prod % p;
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = (next[k] + p - coef * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("at least the empty product")
}

/// Bound on the absolute values of all coefficients of the characteristic
/// polynomial: every coefficient is a sum of principal minors, each bounded
/// by Hadamard's inequality on its rows.
fn coefficient_bound(a: &IntMatrix) -> BigInt {
    a.iter().fold(BigInt::one(), |acc, row| {
        let sq: BigInt = row.iter().map(|&v| BigInt::from(v) * v).sum();
        acc * (sq.sqrt() + 2)
    })
}

/// Exact `det(xI - A)`.
pub fn char_poly(a: &IntMatrix) -> IntPoly {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return IntPoly::one();
    }
    let bound = coefficient_bound(a) * 2 + 1;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for &p in primes() {
        let res = charpoly_mod(a, p);
        let pb = BigInt::from(p);
        // Combine acc (mod modulus) with res (mod p).
        let m_inv = BigInt::from(inv_mod((&modulus % &pb).try_into().expect("fits"), p));
        for (c, r) in acc.iter_mut().zip(res) {
            let diff = (BigInt::from(r) - &*c).mod_floor(&pb);
            let t = (diff * &m_inv).mod_floor(&pb);
            *c += &modulus * t;
        }
        modulus *= pb;
        if modulus > bound {
            break;
        }
    }
    assert!(modulus > bound, "coefficient bound exceeds the prime supply");
    let half = &modulus >> 1;
    IntPoly::new(
        acc.into_iter()
            .map(|c| if c > half { c - &modulus } else { c })
            .collect(),
    )
}

/// Trace of `A^k` for `k = 1..=k_max`, by repeated dense multiplication.
pub fn power_traces(a: &IntMatrix, k_max: usize) -> Vec<BigInt> {
    let n = a.len();
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut cur = big.clone();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        out.push((0..n).map(|i| cur[i][i].clone()).sum());
        if k < k_max {
            cur = mat_mul(&cur, &big);
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += aik * &b[k][j];
                }
            }
        }
    }
    out
}

/// Minimal polynomial, found as the first linear dependence among the
/// flattened powers `I, A, A^2, ...` (fraction-free elimination).
pub fn minimal_poly(a: &IntMatrix) -> IntPoly {
    let n = a.len();
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut power: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    // (pivot, reduced vector, combination of powers)
    let mut basis: Vec<(usize, Vec<BigInt>, Vec<BigInt>)> = Vec::new();
    for k in 0..=n {
        let mut v: Vec<BigInt> = power.iter().flatten().cloned().collect();
        let mut comb = vec![BigInt::zero(); k + 1];
        comb[k] = BigInt::one();
        for (p, b, c) in &basis {
            if v[*p].is_zero() {
                continue;
            }
            let (f, g) = (v[*p].clone(), b[*p].clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x = &*x * &g - &f * y;
            }
            for (i, x) in comb.iter_mut().enumerate() {
                *x = &*x * &g - &f * c.get(i).cloned().unwrap_or_default();
            }
            let content = v
                .iter()
                .chain(comb.iter())
                .fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !content.is_zero() && !content.is_one() {
                v.iter_mut().for_each(|x| *x /= &content);
                comb.iter_mut().for_each(|x| *x /= &content);
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                let lead = comb[k].clone();
                return IntPoly::new(comb.into_iter().map(|c| c / &lead).collect());
            }
            Some(p) => basis.push((p, v, comb)),
        }
        power = mat_mul(&power, &big);
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
}

/// Whether every entry is zero.
pub fn is_zero_matrix(a: &[Vec<BigInt>]) -> bool {
    a.iter().all(|r| r.iter().all(Zero::is_zero))
}

/// Evaluates an integer polynomial at a square matrix.
pub fn poly_at_matrix(p: &IntPoly, a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut acc = vec![vec![BigInt::zero(); n]; n];
    for c in p.coeffs().iter().rev() {
        acc = mat_mul(&acc, &big);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::charvalues::poly_from_power_sums;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert_eq!(char_poly(&vec![]), IntPoly::one());
        assert_eq!(char_poly(&vec![vec![3]]), IntPoly::from_i64s(&[-3, 1]));
        assert_eq!(
            char_poly(&vec![vec![1, 1], vec![1, -1]]),
            IntPoly::from_i64s(&[-2, 0, 1])
        );
        assert_eq!(char_poly(&vec![vec![0; 3]; 3]), IntPoly::from_i64s(&[0, 0, 0, 1]));
    }

    #[test]
    fn minimal_polynomials() {
        assert_eq!(minimal_poly(&vec![vec![2, 0], vec![0, 2]]), IntPoly::from_i64s(&[-2, 1]));
        assert_eq!(minimal_poly(&vec![vec![0, 1], vec![0, 0]]), IntPoly::from_i64s(&[0, 0, 1]));
        let a = vec![vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 3]];
        assert_eq!(
            minimal_poly(&a),
            &IntPoly::from_i64s(&[-2, 0, 1]) * &IntPoly::from_i64s(&[-3, 1])
        );
    }

    #[test]
    fn large_coefficients_need_several_primes() {
        let n = 12;
        let a: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| ((i * 7 + j * 13) % 19) as i64 * 1000 - 9000).collect())
            .collect();
        let cp = char_poly(&a);
        assert!(matrix_is_annihilated(&cp, &a));
        assert!(cp.coeffs().iter().any(|c| c.abs() > BigInt::from(1u64 << 62)));
    }

    fn matrix_is_annihilated(p: &IntPoly, a: &IntMatrix) -> bool {
        is_zero_matrix(&poly_at_matrix(p, a))
    }

    proptest! {
        #[test]
        fn agrees_with_trace_newton(entries in proptest::collection::vec(-4i64..=4, 36)) {
            let a: IntMatrix = entries.chunks(6).map(|r| r.to_vec()).collect();
            let cp = char_poly(&a);
            // independent route: power sums from traces, then inverse Newton
            let traces = power_traces(&a, 6);
            prop_assert_eq!(poly_from_power_sums(&traces, 6).unwrap(), cp.clone());
            prop_assert!(matrix_is_annihilated(&cp, &a));
        }
    }
}
