use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A polynomial with arbitrary-precision integer coefficients; `coeffs[i]`
/// is the coefficient of `x^i`. The leading coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// From small coefficients, constant term first.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::from_i64s(&[1])
    }

    /// `c x^k`.
    pub fn monomial(k: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly::new(coeffs)
    }

    /// `x - root`.
    pub fn linear(root: i64) -> Self {
        IntPoly::from_i64s(&[-root, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, mut k: usize) -> IntPoly {
        let mut base = self.clone();
        let mut acc = IntPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// `P(-x)`.
    pub fn negate_x(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `P(x^k)`.
    pub fn compose_power(&self, k: usize) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.degree().map_or(0, |d| d * k + 1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly::new(coeffs)
    }

    /// `x^deg P(1/x)`.
    pub fn reverse(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Splits off the largest power of `x`: returns `(k, Q)` with `P = x^k Q`.
    pub fn strip_x_power(&self) -> (usize, IntPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, IntPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact quotient over the integers, if `divisor` divides `self` with an
    /// integral quotient.
    pub fn checked_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let sd = self.degree()?;
        if sd < dd {
            return None;
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for shift in (0..=sd - dd).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            quot[shift] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) a mod d`.
    pub fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let top = rem.leading();
            let shifted = IntPoly::monomial(rd - dd, top);
            rem = &rem.scale(&lead) - &(&shifted * divisor);
        }
        rem
    }

    /// Greatest common divisor in `Z[x]`, primitive with positive leading
    /// coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        let content = self.content().gcd(&other.content());
        a.primitive_part().scale(&content)
    }

    /// Renders with the given variable, e.g. `x^2 - 2` or `1 - 2s + 4s^3`.
    pub fn render(&self, var: &str, ascending: bool, spaced: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if !ascending {
            terms.reverse();
        }
        let mut out = String::new();
        for (idx, (i, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            let sep = match (idx == 0, negative, spaced) {
                (true, true, _) => "-",
                (true, false, _) => "",
                (false, true, true) => " - ",
                (false, false, true) => " + ",
                (false, true, false) => "-",
                (false, false, false) => "+",
            };
            out.push_str(sep);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        out
    }

    /// Coefficients as `f64`, constant first. Loses precision for huge values.
    pub fn to_f64s(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.render("x", false, true))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x", false, true))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let coeffs = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

/// Product of a list of polynomials.
pub fn product<'a, I: IntoIterator<Item = &'a IntPoly>>(polys: I) -> IntPoly {
    polys.into_iter().fold(IntPoly::one(), |acc, p| &acc * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[-2, 0, 1]).to_string(), "x^2 - 2");
        assert_eq!(p(&[1, -2, -2, 4]).render("s", true, true), "1 - 2s - 2s^2 + 4s^3");
        assert_eq!(p(&[-2, 0, 1]).render("x", false, false), "x^2-2");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = p(&[-4, 0, 0, 0, 1]);
        assert_eq!(a.checked_div(&p(&[-2, 0, 1])), Some(p(&[2, 0, 1])));
        assert_eq!(a.checked_div(&p(&[-1, 1])), None);
        assert_eq!(p(&[1, 2]).checked_div(&p(&[0, 2])), None);
        assert_eq!(p(&[2, 4]).checked_div(&p(&[1, 2])), Some(p(&[2])));
    }

    #[test]
    fn gcd_and_parts() {
        let a = &p(&[-2, 0, 1]) * &p(&[1, 1]);
        let b = &p(&[-2, 0, 1]) * &p(&[3, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[-2, 0, 1]));
        assert_eq!(p(&[4, 6]).primitive_part(), p(&[2, 3]));
        assert_eq!(p(&[0, 0, 3, 1]).strip_x_power(), (2, p(&[3, 1])));
        assert_eq!(p(&[1, 2, 3]).reverse(), p(&[3, 2, 1]));
        assert_eq!(p(&[1, 2, 3]).negate_x(), p(&[1, -2, 3]));
        assert_eq!(p(&[1, 1]).compose_power(2), p(&[1, 0, 1]));
    }

    #[test]
    fn json_is_decimal_strings() {
        let q = p(&[-2, 0, 1]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["-2","0","1"]"#);
        assert_eq!(serde_json::from_str::<IntPoly>(&s).unwrap(), q);
    }

    proptest! {
        #[test]
        fn product_divides_back(a in proptest::collection::vec(-20i64..20, 1..6),
                                b in proptest::collection::vec(-20i64..20, 1..6)) {
            let (pa, pb) = (p(&a), p(&b));
            prop_assume!(!pb.is_zero());
            let prod = &pa * &pb;
            prop_assert_eq!(prod.checked_div(&pb), Some(pa));
        }
    }
}
