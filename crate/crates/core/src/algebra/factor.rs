//! Exact factorization of monic integer polynomials.
//!
//! Known factors (powers of `x`, `x - 2`, and the Θ family) are split off by
//! trial division; whatever remains goes through a squarefree decomposition
//! and the Berlekamp–Hensel–Zassenhaus method.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::charvalues::CharValueSet;
use super::cyclotomic::{euler_phi, theta_factors};
use super::intpoly::IntPoly;

/// Irreducible factorization over the rationals of a monic polynomial, with
/// multiplicities. Factors are sorted by degree, then coefficients.
pub fn factor_monic(f: &IntPoly) -> CharValueSet {
    assert!(f.is_monic(), "factor_monic needs a monic polynomial");
    let mut out: Vec<(IntPoly, usize)> = Vec::new();
    let (k, mut rest) = f.strip_x_power();
    if k > 0 {
        out.push((IntPoly::from_i64s(&[0, 1]), k));
    }
    let deg = rest.degree().unwrap_or(0);
    let mut candidates = vec![IntPoly::linear(2), IntPoly::linear(-2)];
    for d in 1..=(6 * deg + 6) {
        let factor_degree = if d % 8 == 4 { euler_phi(d) } else { 2 * euler_phi(d) };
        if factor_degree <= deg {
            if let Ok(factors) = theta_factors(d) {
                candidates.extend(factors);
            }
        }
    }
    for c in candidates {
        let mut mult = 0;
        while rest.degree().unwrap_or(0) >= c.degree().unwrap_or(0) {
            match rest.checked_div(&c) {
                Some(q) => {
                    rest = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            out.push((c, mult));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        for (part, mult) in squarefree_decomposition(&rest) {
            for g in zassenhaus(&part) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    CharValueSet::new(out)
}

/// Yun's algorithm: `f = Π g_i^i` with squarefree, pairwise coprime `g_i`.
/// Only nonconstant parts are returned.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, usize)> {
    assert!(f.is_monic(), "squarefree decomposition needs a monic polynomial");
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.checked_div(&a0).expect("gcd divides f");
    let mut c = df.checked_div(&a0).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.checked_div(&a).expect("gcd divides b");
        c = d.checked_div(&a).expect("gcd divides d");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Polynomials over `Z/p` with `p < 2^31`, constant term first, normalized.
mod fp {
    pub type Poly = Vec<u64>;

    pub fn norm(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &Poly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_scalar(a, p - 2, p)
    }

    fn pow_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        norm(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn add(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        norm(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        norm(out)
    }

    pub fn scale(a: &Poly, c: u64, p: u64) -> Poly {
        norm(a.iter().map(|&x| x * c % p).collect())
    }

    pub fn monic(a: &Poly, p: u64) -> Poly {
        match a.last() {
            Some(&lc) => scale(a, inv(lc, p), p),
            None => Vec::new(),
        }
    }

    pub fn div_rem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
        let db = deg(b).expect("division by zero polynomial");
        let inv_lc = inv(b[db], p);
        let mut r = a.clone();
        if r.len() <= db {
            return (Vec::new(), norm(r));
        }
        let mut q = vec![0u64; r.len() - db];
        for shift in (0..q.len()).rev() {
            let top = r[shift + db];
            if top == 0 {
                continue;
            }
            let c = top * inv_lc % p;
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
            }
        }
        r.truncate(db);
        (norm(q), norm(r))
    }

    pub fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
        div_rem(a, b, p).1
    }

    pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = div_rem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let lc_inv = inv(*r0.last().expect("nonzero gcd"), p);
        (scale(&r0, lc_inv, p), scale(&s0, lc_inv, p), scale(&t0, lc_inv, p))
    }

    pub fn pow_mod(base: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(a: &Poly, p: u64) -> Poly {
        norm(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % p) * c % p)
                .collect(),
        )
    }

    /// Berlekamp's algorithm for a monic squarefree polynomial.
    pub fn berlekamp(f: &Poly, p: u64) -> Vec<Poly> {
        let n = deg(f).expect("nonzero");
        if n <= 1 {
            return vec![f.clone()];
        }
        // rows[i] = x^{ip} mod f
        let xp = pow_mod(&vec![0, 1], p, f, p);
        let mut rows = Vec::with_capacity(n);
        let mut cur = vec![1u64];
        for _ in 0..n {
            let mut row = cur.clone();
            row.resize(n, 0);
            rows.push(row);
            cur = rem(&mul(&cur, &xp, p), f, p);
        }
        // Null space of (Q - I)^T: column vectors g with Σ_i g_i Q[i][j] = g_j.
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        let v = rows[i][j];
                        if i == j {
                            (v + p - 1) % p
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let basis = null_space(&mut m, p);
        let r = basis.len();
        let mut factors = vec![f.clone()];
        for v in &basis {
            if factors.len() == r {
                break;
            }
            let v = norm(v.clone());
            if deg(&v).unwrap_or(0) == 0 {
                continue;
            }
            for s in 0..p {
                if factors.len() == r {
                    break;
                }
                let shifted = sub(&v, &vec![s], p);
                let mut next = Vec::new();
                for g in factors {
                    if deg(&g).unwrap_or(0) <= 1 {
                        next.push(g);
                        continue;
                    }
                    let h = gcd(&g, &shifted, p);
                    let dh = deg(&h).unwrap_or(0);
                    if dh > 0 && dh < deg(&g).unwrap_or(0) {
                        let (q, _) = div_rem(&g, &h, p);
                        next.push(h);
                        next.push(q);
                    } else {
                        next.push(g);
                    }
                }
                factors = next;
            }
        }
        factors
    }

    /// Basis of the null space of a square matrix, by Gauss–Jordan
    /// elimination.
    fn null_space(m: &mut [Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let n = m.len();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(pr) = (row..n).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, pr);
            let inv_p = inv(m[row][col], p);
            for x in m[row].iter_mut() {
                *x = *x * inv_p % p;
            }
            for r in 0..n {
                if r != row && m[r][col] != 0 {
                    let c = m[r][col];
                    for k in 0..n {
                        m[r][k] = (m[r][k] + p - c * m[row][k] % p) % p;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - m[r][free]) % p;
            }
            basis.push(v);
        }
        basis
    }
}

const PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn reduce(f: &IntPoly, p: u64) -> fp::Poly {
    let pb = BigInt::from(p);
    fp::norm(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect(),
    )
}

fn lift_to_int(a: &fp::Poly) -> IntPoly {
    IntPoly::new(a.iter().map(|&c| BigInt::from(c)).collect())
}

/// Lifts `f ≡ g h (mod p)` (all monic) to `f ≡ G H (mod p^k)`.
fn hensel_pair(f: &IntPoly, g: &fp::Poly, h: &fp::Poly, p: u64, k: u32) -> (IntPoly, IntPoly) {
    let (_, s, t) = fp::ext_gcd(g, h, p);
    let mut gl = lift_to_int(g);
    let mut hl = lift_to_int(h);
    let pb = BigInt::from(p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = f - &(&gl * &hl);
        let e_int = IntPoly::new(diff.coeffs().iter().map(|c| c / &pj).collect());
        let e = reduce(&e_int, p);
        let te = fp::mul(&t, &e, p);
        let (q, dg) = fp::div_rem(&te, g, p);
        let dh = fp::add(&fp::mul(&s, &e, p), &fp::mul(&q, h, p), p);
        gl = &gl + &lift_to_int(&dg).scale(&pj);
        hl = &hl + &lift_to_int(&dh).scale(&pj);
        pj *= &pb;
        let reduce_big = |a: &IntPoly| IntPoly::new(a.coeffs().iter().map(|c| c.mod_floor(&pj)).collect());
        gl = reduce_big(&gl);
        hl = reduce_big(&hl);
    }
    (gl, hl)
}

fn hensel_tree(f: &IntPoly, factors: &[fp::Poly], p: u64, k: u32) -> Vec<IntPoly> {
    if factors.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        return vec![IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(&pk)).collect())];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let prod = |fs: &[fp::Poly]| fs.iter().fold(vec![1u64], |acc, g| fp::mul(&acc, g, p));
    let (g, h) = hensel_pair(f, &prod(left), &prod(right), p, k);
    let mut out = hensel_tree(&g, left, p, k);
    out.extend(hensel_tree(&h, right, p, k));
    out
}

fn symmetric_mod(a: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m >> 1;
    IntPoly::new(
        a.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of a monic squarefree polynomial.
pub fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    assert!(f.is_monic(), "zassenhaus needs a monic polynomial");
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut best: Option<(u64, Vec<fp::Poly>)> = None;
    let mut tried = 0;
    for &p in &PRIMES {
        let fp_ = reduce(f, p);
        if fp::deg(&fp_) != Some(n) {
            continue;
        }
        if fp::deg(&fp::gcd(&fp_, &fp::derivative(&fp_, p), p)) != Some(0) {
            continue;
        }
        let factors: Vec<fp::Poly> = fp::berlekamp(&fp_, p)
            .into_iter()
            .map(|g| fp::monic(&g, p))
            .collect();
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 6 {
            break;
        }
    }
    let (p, modular) = best.expect("some small prime keeps f squarefree");
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Factor coefficient bound: 2^n ||f||_2.
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let bound = (norm_sq.sqrt() + BigInt::one()) << n;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = hensel_tree(f, &modular, p, k);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in subsets(lifted.len(), size) {
            let prod = subset
                .iter()
                .fold(IntPoly::one(), |acc, &i| symmetric_mod(&(&acc * &lifted[i]), &pk));
            let cand = symmetric_mod(&prod, &pk);
            if cand.leading().is_positive() && rest.checked_div(&cand).is_some() {
                hit = Some((subset, cand));
                break;
            }
        }
        match hit {
            Some((subset, cand)) => {
                rest = rest.checked_div(&cand).expect("checked above");
                found.push(cand);
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        found.push(rest);
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::intpoly::product;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn check(f: &IntPoly, expected: &[(IntPoly, usize)]) {
        let got = factor_monic(f);
        assert_eq!(got.expanded(), *f);
        let mut a: Vec<_> = got.factors().to_vec();
        let mut b: Vec<_> = expected.to_vec();
        a.sort_by(|x, y| x.0.coeffs().cmp(y.0.coeffs()));
        b.sort_by(|x, y| x.0.coeffs().cmp(y.0.coeffs()));
        assert_eq!(a, b);
    }

    #[test]
    fn theta_family_products() {
        let f = &(&p(&[-2, 1]) * &p(&[-2, 0, 1])) * &p(&[0, 1]);
        check(&f, &[(p(&[-2, 1]), 1), (p(&[-2, 0, 1]), 1), (p(&[0, 1]), 1)]);
        let f = &p(&[-2, 1]) * &(&p(&[2, -2, 1]) * &p(&[2, 2, 1])).pow(2);
        check(&f, &[(p(&[-2, 1]), 1), (p(&[2, -2, 1]), 2), (p(&[2, 2, 1]), 2)]);
    }

    #[test]
    fn non_theta_factors() {
        // x^3 - 2x - 2 and x^5 - 2x^3 - 4 are Eisenstein at 2
        let a = p(&[-2, -2, 0, 1]);
        let b = p(&[-4, 0, 0, -2, 0, 1]);
        let f = &(&p(&[-2, 1]) * &a) * &b.pow(2);
        check(&f, &[(p(&[-2, 1]), 1), (a, 1), (b, 2)]);
    }

    #[test]
    fn zassenhaus_recombines() {
        // x^4 + 1 is irreducible over Q yet splits modulo every prime
        assert_eq!(zassenhaus(&p(&[1, 0, 0, 0, 1])), vec![p(&[1, 0, 0, 0, 1])]);
        let parts = [p(&[1, 1, 1]), p(&[-3, 0, 1]), p(&[5, 1]), p(&[1, 0, 0, 0, 1])];
        let f = product(&parts);
        let mut got = zassenhaus(&f);
        got.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
        let mut want = parts.to_vec();
        want.sort_by(|x, y| x.coeffs().cmp(y.coeffs()));
        assert_eq!(got, want);
    }

    #[test]
    fn squarefree_parts() {
        let f = &p(&[1, 1]).pow(3) * &p(&[-2, 0, 1]);
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq, vec![(p(&[-2, 0, 1]), 1), (p(&[1, 1]), 3)]);
    }

    #[test]
    fn cyclotomic_products_factor_completely() {
        use crate::algebra::cyclotomic::{cyclotomic, divisors};
        for n in [12usize, 15, 20, 24] {
            let f = &IntPoly::monomial(n, BigInt::one()) - &IntPoly::one();
            let got = factor_monic(&f);
            assert_eq!(got.factors().len(), divisors(n).len());
            for d in divisors(n) {
                assert_eq!(got.multiplicity(&cyclotomic(d)), 1);
            }
        }
    }
}
