//! Cyclotomic polynomials, the α-transform and the Θ family.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::charvalues::CharValueSet;
use super::intpoly::{product, IntPoly};
use crate::error::{Error, Result};

pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The Möbius function.
pub fn mobius(mut n: usize) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// `Φ_d`, as the Möbius product of the binomials `x^e - 1` over `e | d`.
pub fn cyclotomic(d: usize) -> IntPoly {
    assert!(d >= 1, "cyclotomic polynomials are indexed from 1");
    let binomial = |e: usize| &IntPoly::monomial(e, BigInt::one()) - &IntPoly::one();
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for e in divisors(d) {
        match mobius(d / e) {
            1 => num = &num * &binomial(e),
            -1 => den = &den * &binomial(e),
            _ => {}
        }
    }
    num.checked_div(&den)
        .expect("the Möbius product of binomials is a polynomial")
}

/// `2^{deg P} P(x^2 / 2)`.
pub fn alpha_transform(p: &IntPoly) -> IntPoly {
    let deg = p.degree().expect("alpha transform of the zero polynomial");
    let mut coeffs = vec![BigInt::zero(); 2 * deg + 1];
    for (i, c) in p.coeffs().iter().enumerate() {
        coeffs[2 * i] = c << (deg - i);
    }
    IntPoly::new(coeffs)
}

pub fn theta(d: usize) -> IntPoly {
    alpha_transform(&cyclotomic(d))
}

/// Galois orbits on the roots `√2 ζ_{2d}^k` of `Θ_d`, each orbit given by its
/// sorted exponents `k`. The orbit of `k = 1` comes first.
pub fn theta_root_orbits(d: usize) -> Vec<Vec<usize>> {
    let m = 2 * d;
    let big = m.lcm(&8);
    let ks: Vec<usize> = (0..m).filter(|k| k.gcd(&d) == 1).collect();
    let mut orbit_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for &k in &ks {
        if orbit_of.contains_key(&k) {
            continue;
        }
        let idx = orbits.len();
        let mut orbit = Vec::new();
        for b in (1..big).filter(|b| b.gcd(&big) == 1) {
            // σ_b fixes √2 exactly when b ≡ ±1 (mod 8), otherwise negates it;
            // -1 = ζ_{2d}^d.
            let flip = if b % 8 == 1 || b % 8 == 7 { 0 } else { d };
            let image = (k * b + flip) % m;
            if let std::collections::btree_map::Entry::Vacant(e) = orbit_of.entry(image) {
                e.insert(idx);
                orbit.push(image);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Integer polynomial with roots `√2 e^{2πik/(2d)}`, expanded numerically and
/// rounded. `None` if the expansion is not within rounding distance of
/// integers.
fn orbit_polynomial(d: usize, orbit: &[usize]) -> Option<IntPoly> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &k in orbit {
        let root = Complex64::from_polar(2f64.sqrt(), PI * k as f64 / d as f64);
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * root;
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let r = c.re.round();
        if (c.re - r).abs() > 0.25 || c.im.abs() > 0.25 || !r.is_finite() {
            return None;
        }
        ints.push(BigInt::from(r as i64));
    }
    Some(IntPoly::new(ints))
}

/// Irreducible factors of `Θ_d` over the rationals. The split is certified by
/// exact multiplication.
pub fn theta_factors(d: usize) -> Result<Vec<IntPoly>> {
    let th = theta(d);
    let orbits = theta_root_orbits(d);
    if orbits.len() == 1 {
        return Ok(vec![th]);
    }
    let factors = orbits
        .iter()
        .map(|o| orbit_polynomial(d, o))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::SplitNotFound(d))?;
    if product(&factors) != th {
        return Err(Error::SplitNotFound(d));
    }
    Ok(factors)
}

/// The irreducible factorization of `x^{2t} - 2^t` as a union of Θ factors.
pub fn factor_x2t_minus_2t(t: usize) -> Result<CharValueSet> {
    let mut factors = Vec::new();
    for d in divisors(t) {
        for f in theta_factors(d)? {
            factors.push((f, 1));
        }
    }
    let set = CharValueSet::new(factors);
    let target = &IntPoly::monomial(2 * t, BigInt::one()) - &IntPoly::monomial(0, BigInt::one() << t);
    if set.expanded() != target {
        return Err(Error::IdentityMismatch(format!(
            "Θ factors do not reassemble x^{} - 2^{t}",
            2 * t
        )));
    }
    Ok(set)
}
