//! Polynomials over GF(2), bit-packed into 64-bit words, and the quantities
//! of the quadratic plateau theory that live in `GF(2)[x]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::tuples::TupleCollection;

/// A polynomial over GF(2). Bit `i` of the packed words is the coefficient
/// of `x^i`; trailing zero words are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly::from_u64(1)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Gf2Poly::zero();
        p.flip(k);
        p
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Gf2Poly { words: vec![bits] };
        p.normalize();
        p
    }

    pub fn from_u128(bits: u128) -> Self {
        let mut p = Gf2Poly {
            words: vec![bits as u64, (bits >> 64) as u64],
        };
        p.normalize();
        p
    }

    /// Sum of `x^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exponents: I) -> Self {
        let mut p = Gf2Poly::zero();
        for e in exponents {
            p.flip(e);
        }
        p.normalize();
        p
    }

    /// `x^n + 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        Gf2Poly::from_exponents([0, n])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Low 64 coefficient bits. Only meaningful for degree < 64.
    pub fn to_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    fn flip(&mut self, i: usize) {
        let w = i / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    fn xor_assign_shifted(&mut self, other: &Gf2Poly, k: usize) {
        let (ws, bs) = (k / 64, k % 64);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            rem.xor_assign_shifted(divisor, shift);
            quot.flip(shift);
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.div_rem(divisor).1
    }

    /// Exact divisibility `self | other`. The zero polynomial divides only zero.
    pub fn divides(&self, other: &Gf2Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    pub fn mul_mod(&self, other: &Gf2Poly, modulus: &Gf2Poly) -> Gf2Poly {
        (self * other).rem(modulus)
    }

    /// `x^(2^k) mod modulus` by repeated squaring.
    pub fn x_pow_two_pow_mod(k: usize, modulus: &Gf2Poly) -> Gf2Poly {
        let mut r = Gf2Poly::monomial(1).rem(modulus);
        for _ in 0..k {
            r = r.mul_mod(&r, modulus);
        }
        r
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        let x = Gf2Poly::monomial(1).rem(self);
        if Gf2Poly::x_pow_two_pow_mod(n, self) != x {
            return false;
        }
        prime_divisors(n).into_iter().all(|q| {
            let h = &Gf2Poly::x_pow_two_pow_mod(n / q, self) + &x;
            gf2_gcd(&h, self).is_one()
        })
    }

    /// Hex of the coefficient bits, least significant bit = constant term.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = format!("{:x}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches("0x");
        if text.is_empty() || !text.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Parse(format!("bad hex polynomial {text:?}")));
        }
        let mut words = Vec::new();
        let bytes = text.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).expect("ascii");
            words.push(u64::from_str_radix(chunk, 16).map_err(|e| Error::Parse(e.to_string()))?);
            end = start;
        }
        let mut p = Gf2Poly { words };
        p.normalize();
        Ok(p)
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps = self.exponents();
        if exps.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = exps
            .iter()
            .rev()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut out = self.clone();
        out.xor_assign_shifted(rhs, 0);
        out
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for e in self.exponents() {
            out.xor_assign_shifted(rhs, e);
        }
        out
    }
}

/// Greatest common divisor in `GF(2)[x]` (automatically monic).
/// `gcd(p, 0) = p` and `gcd(0, 0) = 0`.
pub fn gf2_gcd(a: &Gf2Poly, b: &Gf2Poly) -> Gf2Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a
}

/// A Laurent polynomial `x^shift * body` with `body(0) = 1` unless zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Laurent {
    body: Gf2Poly,
    shift: i64,
}

impl Gf2Laurent {
    /// Sum of `x^e` over signed exponents; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exponents: I) -> Self {
        let exps: Vec<i64> = exponents.into_iter().collect();
        let lo = exps.iter().copied().min().unwrap_or(0);
        let body = Gf2Poly::from_exponents(exps.iter().map(|&e| (e - lo) as usize));
        Gf2Laurent::normalized(body, lo)
    }

    fn normalized(body: Gf2Poly, shift: i64) -> Self {
        if body.is_zero() {
            return Gf2Laurent { body, shift: 0 };
        }
        let low = body.exponents()[0];
        let body = Gf2Poly::from_exponents(body.exponents().into_iter().map(|e| e - low));
        Gf2Laurent {
            body,
            shift: shift + low as i64,
        }
    }

    pub fn body(&self) -> &Gf2Poly {
        &self.body
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

/// `A_n(x) = sum over (0,t) of x^t + x^{n-t}`, exponents reduced mod `n`.
pub fn a_n_poly(collection: &TupleCollection, n: usize) -> Result<Gf2Poly> {
    assert!(n >= 1, "n must be positive");
    let ts = collection.quadratic_offsets()?;
    Ok(Gf2Poly::from_exponents(
        ts.iter().flat_map(|&t| [t % n, (n - t % n) % n]),
    ))
}

/// The plateau parameter `v(n) = deg gcd(x^n - 1, A_n(x))`; equals `n` when
/// `A_n` vanishes.
pub fn plateau_v(collection: &TupleCollection, n: usize) -> Result<usize> {
    let a = a_n_poly(collection, n)?;
    let g = gf2_gcd(&Gf2Poly::x_pow_minus_one(n), &a);
    Ok(g.degree().expect("x^n - 1 is nonzero"))
}

/// `A(x) = sum over (0,t) of x^t + x^{-t}` in the Laurent ring.
pub fn a_laurent(collection: &TupleCollection) -> Result<Gf2Laurent> {
    let ts = collection.quadratic_offsets()?;
    Ok(Gf2Laurent::from_exponents(
        ts.iter().flat_map(|&t| [t as i64, -(t as i64)]),
    ))
}

const PERIOD_SCAN_LIMIT: usize = 1 << 22;

/// The least `n >= 1` with `A(x) | x^n - 1` in `GF(2)[x^{±1}]`.
pub fn period_n(collection: &TupleCollection) -> Result<usize> {
    let a = a_laurent(collection)?;
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    let body = a.body();
    if !body.coeff(0) {
        return Err(Error::NoPeriod(0));
    }
    if body.is_one() {
        return Ok(1);
    }
    // walk x^n mod body until it returns to 1
    let x = Gf2Poly::monomial(1);
    let mut power = x.rem(body);
    for n in 1..=PERIOD_SCAN_LIMIT {
        if power.is_one() {
            return Ok(n);
        }
        power = power.mul_mod(&x, body);
    }
    Err(Error::NoPeriod(PERIOD_SCAN_LIMIT))
}

/// Lexicographically least irreducible polynomial of degree `n`, ordering
/// polynomials by their coefficient bits read as a binary integer.
pub fn min_irreducible(n: usize) -> Gf2Poly {
    assert!(n >= 1, "degree must be positive");
    assert!(n < 128, "degree too large for the candidate scan");
    let start: u128 = 1 << n;
    (start..start << 1)
        .map(Gf2Poly::from_u128)
        .find(Gf2Poly::is_irreducible)
        .expect("irreducible polynomials exist in every degree")
}

/// Parses an irreducible-polynomial cache: one `n:<hex>` line per degree.
pub fn parse_modulus_cache(text: &str) -> Result<BTreeMap<usize, Gf2Poly>> {
    let mut out = BTreeMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (n, hex) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad cache line {line:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree in {line:?}")))?;
        let p = Gf2Poly::from_hex(hex)?;
        if p.degree() != Some(n) {
            return Err(Error::Parse(format!("degree mismatch in {line:?}")));
        }
        out.insert(n, p);
    }
    Ok(out)
}

pub fn format_modulus_cache(entries: &BTreeMap<usize, Gf2Poly>) -> String {
    entries
        .iter()
        .map(|(n, p)| format!("{n}:{}\n", p.to_hex()))
        .collect()
}

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
