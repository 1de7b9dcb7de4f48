//! Arithmetic in GF(2^n), n <= 63, in the polynomial basis of the least
//! irreducible modulus of degree n.
//!
//! Elements are packed into a `u64`. Squaring and reduction are linear maps
//! over GF(2) and run through byte-indexed tables built once per context;
//! products use a 4-bit windowed carry-less multiply.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2poly::{min_irreducible, Gf2Poly};
use crate::tuples::TupleCollection;

pub const MAX_FIELD_DEGREE: usize = 63;

#[derive(Debug)]
struct Tables {
    square: Vec<[u64; 256]>,
    reduce: Vec<[u64; 256]>,
    trace_mask: u64,
}

/// A field GF(2^n) with a fixed modulus. Cheap to clone.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    n: usize,
    modulus: Gf2Poly,
    tables: Arc<Tables>,
}

/// An element of some [`FieldCtx`], tagged with its context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    bits: u64,
    n: u8,
    modulus: u64,
}

impl FieldElem {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

impl FieldCtx {
    /// The field of degree `n` with the least irreducible modulus.
    pub fn new(n: usize) -> Self {
        FieldCtx::with_modulus(min_irreducible(n)).expect("least irreducible is valid")
    }

    /// Uses a modulus from a cache when one is present for `n`.
    pub fn from_cache(n: usize, cache: &BTreeMap<usize, Gf2Poly>) -> Result<Self> {
        match cache.get(&n) {
            Some(m) => FieldCtx::with_modulus(m.clone()),
            None => Ok(FieldCtx::new(n)),
        }
    }

    pub fn with_modulus(modulus: Gf2Poly) -> Result<Self> {
        let n = modulus
            .degree()
            .ok_or_else(|| Error::Parse("zero modulus".into()))?;
        if n == 0 || n > MAX_FIELD_DEGREE {
            return Err(Error::Parse(format!("unsupported field degree {n}")));
        }
        if !modulus.is_irreducible() {
            return Err(Error::Parse(format!("modulus {modulus} is reducible")));
        }
        let low = modulus.to_u64() & mask(n);
        let tables = build_tables(n, low);
        Ok(FieldCtx {
            n,
            modulus,
            tables: Arc::new(tables),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn elem(&self, bits: u64) -> FieldElem {
        assert!(bits <= mask(self.n), "element out of range");
        FieldElem {
            bits,
            n: self.n as u8,
            modulus: self.modulus.to_u64(),
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// The class of `x`, i.e. the generator of the polynomial basis.
    pub fn generator(&self) -> FieldElem {
        self.elem(self.reduce_wide(2))
    }

    /// All elements in lexicographic order of their coordinate bits.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size()).map(|b| self.elem(b))
    }

    fn check(&self, a: &FieldElem) -> Result<u64> {
        if a.n as usize == self.n && a.modulus == self.modulus.to_u64() {
            Ok(a.bits)
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.check(a)? ^ self.check(b)?))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.mul_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn square(&self, a: &FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.square_raw(self.check(a)?)))
    }

    /// Frobenius `x -> x^2`.
    pub fn frobenius(&self, a: &FieldElem) -> Result<FieldElem> {
        self.square(a)
    }

    pub fn pow(&self, a: &FieldElem, exponent: u128) -> Result<FieldElem> {
        Ok(self.elem(self.pow_raw(self.check(a)?, exponent)))
    }

    /// `Tr(x) = x + x^2 + ... + x^(2^(n-1))`, returned as 0 or 1.
    pub fn trace(&self, a: &FieldElem) -> Result<u8> {
        let mut acc = 0u64;
        let mut y = self.check(a)?;
        for _ in 0..self.n {
            acc ^= y;
            y = self.square_raw(y);
        }
        debug_assert!(acc <= 1, "trace must land in GF(2)");
        Ok(acc as u8)
    }

    /// Trace via the precomputed linear functional; agrees with [`FieldCtx::trace`].
    pub fn trace_raw(&self, bits: u64) -> u8 {
        ((bits & self.tables.trace_mask).count_ones() & 1) as u8
    }

    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.reduce_wide(clmul(a, b))
    }

    pub fn square_raw(&self, a: u64) -> u64 {
        let mut out = 0;
        let mut rest = a;
        let mut i = 0;
        while rest != 0 {
            out ^= self.tables.square[i][(rest & 0xff) as usize];
            rest >>= 8;
            i += 1;
        }
        out
    }

    pub fn pow_raw(&self, a: u64, mut exponent: u128) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while exponent != 0 {
            if exponent & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.square_raw(base);
            exponent >>= 1;
        }
        acc
    }

    fn reduce_wide(&self, wide: u128) -> u64 {
        let low = (wide as u64) & mask(self.n);
        let mut high = wide >> self.n;
        let mut out = low;
        let mut i = 0;
        while high != 0 {
            out ^= self.tables.reduce[i][(high & 0xff) as usize];
            high >>= 8;
            i += 1;
        }
        out
    }

    /// `P_f(x) = sum over tuples of x^(1 + 2^a_1 + ... + 2^a_{d-1})`.
    pub fn eval_pf(&self, collection: &TupleCollection, x: &FieldElem) -> Result<FieldElem> {
        let plan = PfPlan::new(collection);
        Ok(self.elem(plan.eval(self, self.check(x)?)))
    }
}

/// Precomputed tuple positions for repeated `P_f` evaluation.
#[derive(Debug, Clone)]
pub struct PfPlan {
    tuples: Vec<Vec<usize>>,
    max_offset: usize,
}

impl PfPlan {
    pub fn new(collection: &TupleCollection) -> Self {
        PfPlan {
            tuples: collection
                .tuples()
                .iter()
                .map(|t| t.positions().collect())
                .collect(),
            max_offset: collection.max_offset(),
        }
    }

    /// Frobenius iterates `x^(2^a)` for `a = 0..=max_offset`, then one
    /// product per tuple.
    pub fn eval(&self, ctx: &FieldCtx, x: u64) -> u64 {
        let mut frob = [0u64; 64];
        let mut cur = x;
        for slot in frob.iter_mut().take(self.max_offset + 1) {
            *slot = cur;
            cur = ctx.square_raw(cur);
        }
        let mut sum = 0;
        for positions in &self.tuples {
            let mut prod = frob[positions[0]];
            for &a in &positions[1..] {
                prod = ctx.mul_raw(prod, frob[a]);
            }
            sum ^= prod;
        }
        sum
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Carry-less product of two 64-bit operands (4-bit windows).
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut table = [0u128; 16];
    let a = a as u128;
    for k in 1..16usize {
        table[k] = if k & 1 == 1 {
            table[k - 1] ^ a
        } else {
            table[k >> 1] << 1
        };
    }
    let mut acc = 0u128;
    for nib in (0..16).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * nib)) & 0xf) as usize];
    }
    acc
}

fn build_tables(n: usize, low: u64) -> Tables {
    // naive reduction used only to fill the tables
    let reduce_slow = |mut v: u128| -> u64 {
        for bit in (n..128).rev() {
            if (v >> bit) & 1 == 1 {
                v ^= 1u128 << bit;
                v ^= (low as u128) << (bit - n);
            }
        }
        v as u64
    };
    let high_bits = n; // the product of two elements has at most 2n-1 bits
    let reduce: Vec<[u64; 256]> = (0..high_bits.div_ceil(8))
        .map(|i| {
            let mut t = [0u64; 256];
            for (b, slot) in t.iter_mut().enumerate() {
                *slot = reduce_slow((b as u128) << (8 * i + n));
            }
            t
        })
        .collect();
    let square: Vec<[u64; 256]> = (0..n.div_ceil(8))
        .map(|i| {
            let mut t = [0u64; 256];
            for (b, slot) in t.iter_mut().enumerate() {
                let v = ((b as u64) << (8 * i)) & mask(n);
                *slot = reduce_slow(clmul(v, v));
            }
            t
        })
        .collect();
    let mut trace_mask = 0u64;
    for i in 0..n {
        let mut acc = 0u64;
        let mut y = 1u64 << i;
        for _ in 0..n {
            acc ^= y;
            y = reduce_slow(clmul(y, y));
        }
        if acc & 1 == 1 {
            trace_mask |= 1 << i;
        }
    }
    Tables {
        square,
        reduce,
        trace_mask,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook reference: multiply as GF(2) polynomials and reduce.
    fn mul_ref(ctx: &FieldCtx, a: u64, b: u64) -> u64 {
        let prod = &Gf2Poly::from_u64(a) * &Gf2Poly::from_u64(b);
        prod.rem(ctx.modulus()).to_u64()
    }

    #[test]
    fn arithmetic_examples() {
        let ctx = FieldCtx::new(2);
        let g = ctx.generator();
        assert_eq!(ctx.add(&g, &g).unwrap(), ctx.zero());
        assert_eq!(ctx.mul(&ctx.one(), &g).unwrap(), g);
        let gg = ctx.mul(&g, &g).unwrap();
        assert_eq!(gg, ctx.add(&g, &ctx.one()).unwrap());
        assert_eq!(ctx.square(&g).unwrap(), gg);
    }

    #[test]
    fn context_mismatch() {
        let a = FieldCtx::new(3);
        let b = FieldCtx::new(4);
        assert_eq!(a.add(&a.one(), &b.one()), Err(Error::CtxMismatch));
        assert_eq!(a.trace(&b.one()), Err(Error::CtxMismatch));
    }

    #[test]
    fn trace_examples() {
        let f1 = FieldCtx::new(1);
        assert_eq!(f1.trace(&f1.one()).unwrap(), 1);
        let f2 = FieldCtx::new(2);
        assert_eq!(f2.trace(&f2.one()).unwrap(), 0);
        assert_eq!(f2.trace(&f2.generator()).unwrap(), 1);
    }

    #[test]
    fn pf_examples() {
        let ctx = FieldCtx::new(7);
        let c01 = TupleCollection::monomial_quadratic(1);
        let c012 = TupleCollection::parse("0,1;0,2").unwrap();
        for x in ctx.elements().step_by(5) {
            assert_eq!(ctx.eval_pf(&c01, &x).unwrap(), ctx.pow(&x, 3).unwrap());
            let expect = ctx
                .add(&ctx.pow(&x, 3).unwrap(), &ctx.pow(&x, 5).unwrap())
                .unwrap();
            assert_eq!(ctx.eval_pf(&c012, &x).unwrap(), expect);
        }
        let cubic = TupleCollection::parse("0,1,3").unwrap();
        assert_eq!(ctx.eval_pf(&cubic, &ctx.zero()).unwrap(), ctx.zero());
    }

    #[test]
    fn multiplication_matches_reference() {
        for n in [1, 2, 5, 8, 13, 31, 47, 63] {
            let ctx = FieldCtx::new(n);
            let m = mask(n);
            let mut s = 0x9e3779b97f4a7c15u64;
            for _ in 0..500 {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = s & m;
                let b = s.rotate_left(29) & m;
                assert_eq!(ctx.mul_raw(a, b), mul_ref(&ctx, a, b), "n={n}");
                assert_eq!(ctx.square_raw(a), mul_ref(&ctx, a, a), "n={n}");
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        let ctx = FieldCtx::new(4);
        for a in ctx.elements() {
            for b in ctx.elements() {
                let ab = ctx.mul(&a, &b).unwrap();
                assert_eq!(ab, ctx.mul(&b, &a).unwrap());
                for c in ctx.elements() {
                    let lhs = ctx.mul(&a, &ctx.add(&b, &c).unwrap()).unwrap();
                    let rhs = ctx.add(&ab, &ctx.mul(&a, &c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            if !a.is_zero() {
                // a^(2^n - 1) = 1
                assert_eq!(ctx.pow(&a, 15).unwrap(), ctx.one());
            }
        }
    }

    #[test]
    fn trace_linear_and_frobenius_invariant() {
        for n in 1..=10 {
            let ctx = FieldCtx::new(n);
            for x in ctx.elements() {
                let tx = ctx.trace(&x).unwrap();
                assert_eq!(tx, ctx.trace_raw(x.bits()));
                assert_eq!(ctx.trace(&ctx.square(&x).unwrap()).unwrap(), tx);
                for y in ctx.elements().step_by(if n > 6 { 37 } else { 1 }) {
                    let s = ctx.add(&x, &y).unwrap();
                    assert_eq!(ctx.trace(&s).unwrap(), tx ^ ctx.trace(&y).unwrap());
                }
            }
        }
    }

    #[test]
    fn trace_is_balanced() {
        for n in 1..=14 {
            let ctx = FieldCtx::new(n);
            let zeros = (0..ctx.size()).filter(|&b| ctx.trace_raw(b) == 0).count();
            assert_eq!(zeros as u64, ctx.size() / 2, "n={n}");
        }
    }

    #[test]
    fn additive_hilbert_90() {
        for n in 1..=10 {
            let ctx = FieldCtx::new(n);
            let mut image = vec![false; ctx.size() as usize];
            for y in 0..ctx.size() {
                image[(y ^ ctx.square_raw(y)) as usize] = true;
            }
            for x in 0..ctx.size() {
                assert_eq!(image[x as usize], ctx.trace_raw(x) == 0, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn cache_modulus_is_used() {
        let mut cache = BTreeMap::new();
        cache.insert(3, Gf2Poly::from_u64(0b1101));
        let ctx = FieldCtx::from_cache(3, &cache).unwrap();
        assert_eq!(ctx.modulus().to_u64(), 0b1101);
        assert_eq!(FieldCtx::from_cache(4, &cache).unwrap().modulus().to_u64(), 0b10011);
        assert!(FieldCtx::with_modulus(Gf2Poly::from_u64(0b101)).is_err());
    }
}
