use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use smallvec::SmallVec;

/// A polynomial in τ with coefficients in F₂.
///
/// Bit `i` of the packed words is the coefficient of τⁱ. The word vector never
/// carries a trailing zero word, so the zero polynomial has no words at all and
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TauScalar {
    words: SmallVec<[u64; 2]>,
}

impl TauScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::tau_pow(0)
    }

    /// The monomial τᵏ.
    pub fn tau_pow(k: u32) -> Self {
        let mut s = Self::zero();
        s.set_bit(k);
        s
    }

    /// Builds a scalar from its coefficient list, lowest exponent first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zero();
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set_bit(i as u32);
            }
        }
        s
    }

    /// Low 64 coefficients packed into one word.
    pub fn from_word(w: u64) -> Self {
        let mut s = Self {
            words: SmallVec::from_slice(&[w]),
        };
        s.normalize();
        s
    }

    fn set_bit(&mut self, k: u32) {
        let (wi, bi) = ((k / 64) as usize, k % 64);
        if self.words.len() <= wi {
            self.words.resize(wi + 1, 0);
        }
        self.words[wi] ^= 1u64 << bi;
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn coefficient(&self, k: u32) -> bool {
        let (wi, bi) = ((k / 64) as usize, k % 64);
        self.words.get(wi).is_some_and(|w| (w >> bi) & 1 == 1)
    }

    /// τ-degree of the leading term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        let last = *self.words.last()?;
        Some((self.words.len() as u32 - 1) * 64 + 63 - last.leading_zeros())
    }

    /// Lowest exponent with a nonzero coefficient (the τ-adic valuation).
    pub fn valuation(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i as u32 * 64 + w.trailing_zeros())
    }

    /// `Some(k)` when the scalar is exactly τᵏ.
    pub fn as_tau_power(&self) -> Option<u32> {
        let d = self.degree()?;
        (self.valuation() == Some(d)).then_some(d)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64u32)
                .filter(move |b| (w >> b) & 1 == 1)
                .map(move |b| i as u32 * 64 + b)
        })
    }

    /// Multiplies by τᵏ.
    pub fn shl(&self, k: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = ((k / 64) as usize, k % 64);
        let mut out: SmallVec<[u64; 2]> = SmallVec::from_elem(0, self.words.len() + ws + 1);
        for (i, &w) in self.words.iter().enumerate() {
            out[i + ws] ^= w << bs;
            if bs != 0 {
                out[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut s = Self { words: out };
        s.normalize();
        s
    }

    /// The homogeneous part of degree `k`: either τᵏ or zero.
    pub fn component(&self, k: u32) -> Self {
        if self.coefficient(k) {
            Self::tau_pow(k)
        } else {
            Self::zero()
        }
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let db = divisor
            .degree()
            .expect("division of a tau-scalar by zero");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            quot.set_bit(shift);
            rem += &divisor.shl(shift);
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x
    }
}

impl AddAssign<&TauScalar> for TauScalar {
    fn add_assign(&mut self, rhs: &TauScalar) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a ^= b;
        }
        self.normalize();
    }
}

impl Add for &TauScalar {
    type Output = TauScalar;
    fn add(self, rhs: &TauScalar) -> TauScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Mul for &TauScalar {
    type Output = TauScalar;
    fn mul(self, rhs: &TauScalar) -> TauScalar {
        if self.is_zero() || rhs.is_zero() {
            return TauScalar::zero();
        }
        // carry-less product, one shifted copy per set bit of the shorter factor
        let (short, long) = if self.words.len() <= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc = TauScalar::zero();
        for k in short.exponents() {
            acc += &long.shl(k);
        }
        acc
    }
}

impl fmt::Debug for TauScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TauScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut exps: Vec<u32> = self.exponents().collect();
        exps.reverse();
        let parts: Vec<String> = exps
            .into_iter()
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "tau".to_string(),
                _ => format!("tau^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(bits: u64) -> TauScalar {
        TauScalar::from_word(bits)
    }

    #[test]
    fn exact_division() {
        // (τ³+τ) ÷ τ
        let (q, r) = t(0b1010).div_rem(&t(0b10));
        assert_eq!(q, t(0b101));
        assert!(r.is_zero());
    }

    #[test]
    fn square_of_tau_plus_one() {
        let (q, r) = t(0b101).div_rem(&t(0b11));
        assert_eq!(q, t(0b11));
        assert!(r.is_zero());
        assert_eq!(&t(0b11) * &t(0b11), t(0b101));
    }

    #[test]
    fn division_with_remainder() {
        // τ³ ÷ (τ²+τ) = (τ+1, τ)
        let (q, r) = t(0b1000).div_rem(&t(0b110));
        assert_eq!(q, t(0b11));
        assert_eq!(r, t(0b10));
        assert_eq!(&(&q * &t(0b110)) + &r, t(0b1000));
    }

    #[test]
    #[should_panic(expected = "by zero")]
    fn division_by_zero_panics() {
        let _ = t(1).div_rem(&TauScalar::zero());
    }

    #[test]
    fn wide_shift_crosses_words() {
        let x = TauScalar::tau_pow(63);
        assert_eq!(x.shl(2), TauScalar::tau_pow(65));
        assert_eq!(x.shl(2).degree(), Some(65));
        let y = &TauScalar::tau_pow(70) * &TauScalar::tau_pow(70);
        assert_eq!(y.as_tau_power(), Some(140));
    }

    #[test]
    fn exhaustive_divmod_round_trip() {
        // all a, b of τ-degree ≤ 4
        for a in 0u64..32 {
            for b in 1u64..32 {
                let (a, b) = (t(a), t(b));
                let (q, r) = a.div_rem(&b);
                assert_eq!(&(&q * &b) + &r, a);
                assert!(r.is_zero() || r.degree() < b.degree());
            }
        }
    }

    #[test]
    fn characteristic_two() {
        for a in 0u64..64 {
            assert!((&t(a) + &t(a)).is_zero());
        }
    }

    #[test]
    fn display() {
        assert_eq!(t(0b1011).to_string(), "tau^3 + tau + 1");
        assert_eq!(TauScalar::zero().to_string(), "0");
    }
}
