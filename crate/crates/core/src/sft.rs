//! The shift of finite type attached to a tuple collection.
//!
//! A point of the shift is a bi-infinite sequence of letters `(x_i, y_i)` with
//! `P(x_i, ..., x_{i+L-1}) + y_i + y_{i+1} = 0` everywhere, where `P` is the
//! sum of the tuple monomials. Its `n`-periodic points are in two-to-one
//! correspondence with pairs `(x, y)` in `GF(2)^n` solving `f(x) = y + σy`,
//! so `N_n = 2^{n+1} - 2 wt(f_n)`.
//!
//! The shift is presented as a vertex shift on `(L-1)`-blocks. The number of
//! `n`-periodic points is the trace of `A^n`, and the zeta function is
//! `1 / det(1 - sA)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{factor_monic, power_sums_of_poly, CharValueSet, IntPoly};
use crate::error::{Error, Result};
use crate::matrix::{char_poly, IntMatrix};
use crate::tuples::TupleCollection;

/// Closed-walk counting uses `u128` and is exact up to this length (walk
/// counts are at most `4^n`).
const WALK_LIMIT: usize = 63;

/// The forbidden-word rule over the alphabet `GF(2) x GF(2)`.
///
/// A word of length `L` is packed into an integer with letter `i` in bits
/// `2i` (the `x` component) and `2i + 1` (the `y` component).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    collection: TupleCollection,
    window: usize,
    masks: Vec<u64>,
}

impl LocalRule {
    pub fn new(collection: &TupleCollection) -> Result<Self> {
        if collection.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let window = (collection.max_offset() + 1).max(2);
        if window > 16 {
            return Err(Error::CapExceeded {
                requested: window,
                cap: 16,
            });
        }
        let masks = collection
            .tuples()
            .iter()
            .map(|t| t.positions().map(|a| 1u64 << (2 * a)).sum())
            .collect();
        Ok(LocalRule {
            collection: collection.clone(),
            window,
            masks,
        })
    }

    pub fn collection(&self) -> &TupleCollection {
        &self.collection
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn allowed(&self, word: u64) -> bool {
        let p = self
            .masks
            .iter()
            .filter(|&&m| word & m == m)
            .count()
            & 1;
        let y = ((word >> 1) ^ (word >> 3)) & 1;
        p as u64 == y
    }

    /// Number of allowed words of length `L`.
    pub fn allowed_count(&self) -> usize {
        (0..1u64 << (2 * self.window))
            .filter(|&w| self.allowed(w))
            .count()
    }
}

/// Renders a packed word as dot-separated `xy` letters.
pub fn word_label(word: u64, len: usize) -> String {
    (0..len)
        .map(|i| {
            let l = (word >> (2 * i)) & 3;
            format!("{}{}", l & 1, l >> 1)
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// De Bruijn presentation of the shift.
#[derive(Debug)]
pub struct TransferSystem {
    rule: LocalRule,
    vertices: Vec<u64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    char_poly: OnceLock<IntPoly>,
}

impl TransferSystem {
    pub fn for_collection(collection: &TupleCollection) -> Result<Self> {
        Ok(TransferSystem::build(LocalRule::new(collection)?))
    }

    /// The trimmed system: vertices without incoming or outgoing edges are
    /// removed until none remain.
    pub fn build(rule: LocalRule) -> Self {
        TransferSystem::build_with(rule, true)
    }

    pub fn build_untrimmed(rule: LocalRule) -> Self {
        TransferSystem::build_with(rule, false)
    }

    fn build_with(rule: LocalRule, trim: bool) -> Self {
        let k = rule.window - 1;
        let count = 1usize << (2 * k);
        let mut succ: Vec<Vec<usize>> = (0..count)
            .map(|u| {
                (0..4u64)
                    .filter(|&letter| rule.allowed(u as u64 | (letter << (2 * k))))
                    .map(|letter| ((u as u64 >> 2) | (letter << (2 * (k - 1)))) as usize)
                    .collect()
            })
            .collect();
        let mut alive = vec![true; count];
        if trim {
            loop {
                let mut indeg = vec![0usize; count];
                for (u, s) in succ.iter().enumerate() {
                    if alive[u] {
                        for &v in s {
                            indeg[v] += 1;
                        }
                    }
                }
                let mut changed = false;
                for u in 0..count {
                    if alive[u] && (indeg[u] == 0 || succ[u].is_empty()) {
                        alive[u] = false;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
                for s in succ.iter_mut() {
                    s.retain(|&v| alive[v]);
                }
            }
        }
        let mut index = vec![u32::MAX; count];
        let mut vertices = Vec::new();
        for u in 0..count {
            if alive[u] {
                index[u] = vertices.len() as u32;
                vertices.push(u as u64);
            }
        }
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        for &u in &vertices {
            targets.extend(succ[u as usize].iter().map(|&v| index[v]));
            offsets.push(targets.len());
        }
        TransferSystem {
            rule,
            vertices,
            offsets,
            targets,
            char_poly: OnceLock::new(),
        }
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn successors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// The 0/1 adjacency matrix. Quadratic in the vertex count.
    pub fn adjacency(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for &j in self.successors(i) {
                row[j as usize] += 1;
            }
        }
        a
    }

    /// Closed walks of each length `1..=n_max` from one start vertex.
    fn closed_walks_from(&self, start: usize, n_max: usize) -> Vec<u128> {
        let n = self.vertex_count();
        let mut cur = vec![0u128; n];
        let mut next = vec![0u128; n];
        cur[start] = 1;
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            next.iter_mut().for_each(|v| *v = 0);
            for (u, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &v in self.successors(u) {
                    next[v as usize] += c;
                }
            }
            out.push(next[start]);
            std::mem::swap(&mut cur, &mut next);
        }
        out
    }

    /// `tr(A^n)` for `n = 1..=n_max`: closed walks counted directly up to
    /// length 63, power sums of the characteristic polynomial beyond.
    pub fn periodic_counts(&self, n_max: usize) -> Vec<BigInt> {
        let direct = n_max.min(WALK_LIMIT);
        let totals = (0..self.vertex_count())
            .into_par_iter()
            .map(|s| self.closed_walks_from(s, direct))
            .reduce(
                || vec![0u128; direct],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let mut out: Vec<BigInt> = totals.into_iter().map(BigInt::from).collect();
        if n_max > direct {
            let sums = power_sums_of_poly(self.char_poly(), n_max);
            out.extend(sums.values()[direct..].iter().cloned());
        }
        out
    }

    pub fn periodic_count(&self, n: usize) -> BigInt {
        assert!(n >= 1, "periodic points are counted for n >= 1");
        if n <= WALK_LIMIT {
            self.periodic_counts(n).pop().expect("n >= 1")
        } else {
            power_sums_of_poly(self.char_poly(), n).get(n).clone()
        }
    }

    /// An integer matrix with the same nonzero spectrum (and hence the same
    /// `det(1 - sA)`), obtained by repeatedly amalgamating vertices with
    /// identical successor or predecessor multisets.
    pub fn reduced_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut rows: Vec<Option<Vec<(usize, u64)>>> = (0..n)
            .map(|i| {
                let mut r: Vec<(usize, u64)> = Vec::new();
                for &j in self.successors(i) {
                    r.push((j as usize, 1));
                }
                Some(normalize_row(r))
            })
            .collect();
        loop {
            let a = merge_identical_rows(&mut rows);
            let mut cols = transpose(&rows);
            let b = merge_identical_rows(&mut cols);
            rows = transpose(&cols);
            if !a && !b {
                break;
            }
        }
        let alive: Vec<usize> = (0..n).filter(|&i| rows[i].is_some()).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &i) in alive.iter().enumerate() {
            pos[i] = k;
        }
        let mut m = vec![vec![0i64; alive.len()]; alive.len()];
        for (k, &i) in alive.iter().enumerate() {
            for &(j, v) in rows[i].as_ref().expect("alive") {
                m[k][pos[j]] = v as i64;
            }
        }
        m
    }

    /// `det(xI - A)`, computed exactly on the reduced matrix and padded with
    /// the zero eigenvalues it drops.
    pub fn char_poly(&self) -> &IntPoly {
        self.char_poly.get_or_init(|| {
            let reduced = self.reduced_matrix();
            let cp = char_poly(&reduced);
            let pad = self.vertex_count() - reduced.len();
            &cp * &IntPoly::monomial(pad, BigInt::one())
        })
    }

    /// `det(1 - sA)`, coefficients in `s`.
    pub fn zeta_denominator(&self) -> IntPoly {
        self.char_poly().reverse()
    }

    /// The nonzero spectrum of `A` as a factored multiset.
    pub fn char_values(&self) -> CharValueSet {
        let (_, body) = self.char_poly().strip_x_power();
        factor_monic(&body)
    }

    pub fn graph_dump(&self) -> GraphDump {
        let k = self.rule.window - 1;
        let mut edges = Vec::with_capacity(self.edge_count());
        for i in 0..self.vertex_count() {
            for &j in self.successors(i) {
                edges.push((i, j as usize));
            }
        }
        GraphDump {
            tuples: self.rule.collection.clone(),
            window: self.rule.window,
            vertices: self.vertices.iter().map(|&w| word_label(w, k)).collect(),
            edges,
            zeta_denominator: self.zeta_denominator(),
        }
    }
}

/// Weight recovered from a periodic-point count: `2^n - N_n / 2`.
pub fn weight_from_count(n: usize, count: &BigInt) -> BigInt {
    (BigInt::one() << n) - (count >> 1)
}

fn normalize_row(mut r: Vec<(usize, u64)>) -> Vec<(usize, u64)> {
    r.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, u64)> = Vec::with_capacity(r.len());
    for (j, v) in r {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out
}

fn transpose(rows: &[Option<Vec<(usize, u64)>>]) -> Vec<Option<Vec<(usize, u64)>>> {
    let mut t: Vec<Option<Vec<(usize, u64)>>> = rows
        .iter()
        .map(|r| r.as_ref().map(|_| Vec::new()))
        .collect();
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for &(j, v) in r {
                t[j].as_mut().expect("columns index live vertices").push((i, v));
            }
        }
    }
    t
}

/// Merges every group of identical rows into its first member: the other
/// rows are deleted and their columns added into the survivor's column.
fn merge_identical_rows(rows: &mut [Option<Vec<(usize, u64)>>]) -> bool {
    let mut seen: HashMap<Vec<(usize, u64)>, usize> = HashMap::new();
    let mut redirect: Vec<usize> = (0..rows.len()).collect();
    let mut changed = false;
    for i in 0..rows.len() {
        let Some(r) = &rows[i] else { continue };
        match seen.get(r) {
            Some(&j) => {
                redirect[i] = j;
                rows[i] = None;
                changed = true;
            }
            None => {
                seen.insert(r.clone(), i);
            }
        }
    }
    if changed {
        for r in rows.iter_mut().flatten() {
            let moved: Vec<(usize, u64)> = r.iter().map(|&(j, v)| (redirect[j], v)).collect();
            *r = normalize_row(moved);
        }
    }
    changed
}

/// Serializable graph description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDump {
    pub tuples: TupleCollection,
    pub window: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub zeta_denominator: IntPoly,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::power_traces;
    use crate::rs::{rs_weight_oracle, Caps};
    use num_rational::BigRational;
    use num_traits::Zero;

    fn coll(s: &str) -> TupleCollection {
        TupleCollection::parse(s).unwrap()
    }

    fn system(s: &str) -> TransferSystem {
        TransferSystem::for_collection(&coll(s)).unwrap()
    }

    #[test]
    fn local_rule_examples() {
        let r = LocalRule::new(&coll("0,1")).unwrap();
        assert_eq!(r.window(), 2);
        assert_eq!(r.allowed_count(), 8);
        // ((x0,y0),(x1,y1)) = ((1,0),(1,1)): y1 = x0 x1 + y0
        assert!(r.allowed(0b11_01));
        assert!(!r.allowed(0b01_01));
        let r = LocalRule::new(&coll("0,2")).unwrap();
        assert_eq!(r.window(), 3);
        for w in 0..64u64 {
            let bit = |i: u32| (w >> i) & 1;
            assert_eq!(r.allowed(w), bit(3) == (bit(0) & bit(4)) ^ bit(1));
        }
        for s in ["0,1,2", "0,3", "0,1;0,2"] {
            let r = LocalRule::new(&coll(s)).unwrap();
            assert_eq!(r.allowed_count(), 1 << (2 * r.window() - 1));
        }
        assert_eq!(LocalRule::new(&TupleCollection::empty()), Err(Error::EmptyCollection));
    }

    #[test]
    fn transfer_examples() {
        let t = system("0,1");
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.edge_count(), 8);
        assert!((0..4).all(|i| t.successors(i).len() == 2));
        let a = t.adjacency();
        assert_eq!((0..4).map(|i| a[i][i]).sum::<i64>(), 2);
        let counts = t.periodic_counts(3);
        assert_eq!(counts, vec![BigInt::from(2), BigInt::from(8), BigInt::from(8)]);
    }

    #[test]
    fn zeta_examples() {
        let t = system("0,1");
        assert_eq!(t.zeta_denominator(), IntPoly::from_i64s(&[1, -2, -2, 4]));
        let cv = t.char_values();
        assert_eq!(cv.factors().len(), 2);
        assert_eq!(cv.multiplicity(&IntPoly::from_i64s(&[-2, 1])), 1);
        assert_eq!(cv.multiplicity(&IntPoly::from_i64s(&[-2, 0, 1])), 1);
        let p4 = power_sums_of_poly(&cv.expanded(), 4).get(4).clone();
        assert_eq!(p4, BigInt::from(24));
        assert_eq!(weight_from_count(4, &p4), BigInt::from(4));
        let empty = TransferSystem {
            rule: LocalRule::new(&coll("0,1")).unwrap(),
            vertices: Vec::new(),
            offsets: vec![0],
            targets: Vec::new(),
            char_poly: OnceLock::new(),
        };
        assert_eq!(empty.zeta_denominator(), IntPoly::one());
        for s in ["0,2", "0,1,2", "0,1;0,3"] {
            let t = system(s);
            assert!(t.zeta_denominator().degree().unwrap() <= t.vertex_count());
        }
    }

    #[test]
    fn counts_match_the_oracle() {
        let caps = Caps::default();
        for s in ["0,1", "0,2", "0,3", "0,1,2", "0,1,3", "0,2,3", "0,1;0,2", "0,2;0,3"] {
            let c = coll(s);
            let t = system(s);
            let counts = t.periodic_counts(14);
            for n in 1..=14 {
                let w = rs_weight_oracle(&c, n, &caps).unwrap();
                assert_eq!(weight_from_count(n, &counts[n - 1]), BigInt::from(w), "{s} n={n}");
            }
        }
    }

    #[test]
    fn reduction_keeps_traces_and_spectrum() {
        for s in ["0,1", "0,2", "0,1,2", "0,3", "0,1;0,2", "0,1,3"] {
            let t = system(s);
            let full = t.adjacency();
            let reduced = t.reduced_matrix();
            assert!(reduced.len() <= full.len());
            let direct = power_traces(&full, 12);
            assert_eq!(power_traces(&reduced, 12), direct, "{s}");
            assert_eq!(t.char_poly(), &char_poly(&full), "{s}");
        }
    }

    #[test]
    fn trimming_is_invisible_to_counts() {
        for s in ["0,1", "0,2", "0,1,2", "0,1;0,2", "0,3"] {
            let rule = LocalRule::new(&coll(s)).unwrap();
            let a = TransferSystem::build(rule.clone());
            let b = TransferSystem::build_untrimmed(rule);
            assert!(a.vertex_count() <= b.vertex_count());
            assert_eq!(a.periodic_counts(10), b.periodic_counts(10), "{s}");
        }
    }

    #[test]
    fn two_is_always_a_char_value() {
        for s in ["0,1", "0,2", "0,3", "0,1,2", "0,1,3", "0,1;0,2"] {
            let cv = system(s).char_values();
            assert!(cv.multiplicity(&IntPoly::from_i64s(&[-2, 1])) >= 1, "{s}");
        }
    }

    #[test]
    fn zeta_series_matches_counts() {
        // exp(Σ N_n s^n / n) = 1 / det(1 - sA) up to order m
        for s in ["0,1", "0,2", "0,1,2", "0,1;0,2"] {
            let t = system(s);
            let m = 12;
            let counts = t.periodic_counts(m);
            // exp of a series with zero constant term: e' = e · g'
            let g: Vec<BigRational> = std::iter::once(BigRational::zero())
                .chain((1..=m).map(|n| {
                    BigRational::new(counts[n - 1].clone(), BigInt::from(n))
                }))
                .collect();
            let mut e = vec![BigRational::one()];
            for k in 1..=m {
                let mut acc = BigRational::zero();
                for j in 1..=k {
                    acc += BigRational::from_integer(BigInt::from(j)) * &g[j] * &e[k - j];
                }
                e.push(acc / BigRational::from_integer(BigInt::from(k)));
            }
            let den = t.zeta_denominator();
            for k in 0..=m {
                let mut conv = BigRational::zero();
                for i in 0..=k {
                    conv += BigRational::from_integer(den.coeff(i)) * &e[k - i];
                }
                let expected = if k == 0 { BigRational::one() } else { BigRational::zero() };
                assert_eq!(conv, expected, "{s} order {k}");
            }
        }
    }

    #[test]
    fn graph_dump_shape() {
        let d = system("0,1").graph_dump();
        assert_eq!(d.vertices.len(), 4);
        assert_eq!(d.edges.len(), 8);
        assert_eq!(d.vertices[0], "00");
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"zeta_denominator\":[\"1\",\"-2\",\"-2\",\"4\"]"));
    }
}
