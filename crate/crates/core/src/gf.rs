//! Prime fields, vectors over them, and the canonical rank order.
//!
//! A vector `(x_1, ..., x_n)` has rank `sum x_i q^(n-i)`: the first coordinate
//! is the most significant digit. Every table, matrix and file in this crate
//! is indexed by that rank.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Size limits applied before anything is enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub enumerate: u64,
    pub graph_vertices: u64,
    pub drm_rows: u64,
    pub exact_alpha_vertices: u64,
    pub spectrum_vertices: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumerate: 1 << 24,
            graph_vertices: 1 << 14,
            drm_rows: 1 << 12,
            exact_alpha_vertices: 1 << 11,
            spectrum_vertices: 1 << 20,
        }
    }
}

/// `q^n`, or an error once it passes `limit`.
pub fn checked_space(q: u32, n: usize, limit: u64, what: &'static str) -> Result<u64> {
    let mut size: u128 = 1;
    for _ in 0..n {
        size *= q as u128;
        if size > limit as u128 {
            return Err(Error::TooLarge {
                what,
                count: big_pow(q, n).to_u128().unwrap_or(u128::MAX),
                limit: limit as u128,
            });
        }
    }
    Ok(size as u64)
}

pub fn big_pow(q: u32, n: usize) -> BigUint {
    BigUint::from(q).pow(n as u32)
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) || q > u16::MAX as u64 {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q: q as u32 })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.q - a % self.q) % self.q
    }

    pub fn inv(self, a: u32) -> Option<u32> {
        if a % self.q == 0 {
            return None;
        }
        // Fermat: a^(q-2)
        let mut base = a as u64 % self.q as u64;
        let mut e = self.q - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.q as u64;
            }
            base = base * base % self.q as u64;
            e >>= 1;
        }
        Some(acc as u32)
    }

    pub fn check(self, symbol: u64) -> Result<u32> {
        if symbol >= self.q as u64 {
            Err(Error::SymbolOutOfRange { symbol, q: self.q })
        } else {
            Ok(symbol as u32)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVec {
    field: PrimeField,
    symbols: Vec<u32>,
}

impl FieldVec {
    pub fn new(field: PrimeField, symbols: Vec<u32>) -> Result<Self> {
        for &s in &symbols {
            field.check(s as u64)?;
        }
        Ok(FieldVec { field, symbols })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        FieldVec {
            field,
            symbols: vec![0; n],
        }
    }

    /// Parses a digit string such as `0121`. Whitespace and commas are ignored;
    /// symbols above 9 need a comma separated list.
    pub fn parse(field: PrimeField, s: &str) -> Result<Self> {
        let s = s.trim();
        let symbols: Vec<u64> = if s.contains(',') || s.contains(' ') {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<u64>().map_err(|e| Error::invalid(format!("{p:?}: {e}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(u64::from)
                        .ok_or_else(|| Error::invalid(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        let symbols = symbols
            .into_iter()
            .map(|x| field.check(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldVec { field, symbols })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    pub fn rank(&self) -> u64 {
        digits_rank(self.field.q, &self.symbols)
    }

    pub fn from_rank(field: PrimeField, n: usize, rank: u64) -> Result<Self> {
        let size = checked_space(field.q, n, u64::MAX, "vector space")?;
        if rank >= size {
            return Err(Error::RankOutOfRange {
                rank,
                q: field.q,
                n,
            });
        }
        Ok(FieldVec {
            field,
            symbols: rank_digits(field.q, n, rank),
        })
    }

    pub fn concat(&self, other: &FieldVec) -> Result<FieldVec> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q, other.field.q));
        }
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(FieldVec {
            field: self.field,
            symbols,
        })
    }

    pub fn split_at(&self, at: usize) -> (FieldVec, FieldVec) {
        let (a, b) = self.symbols.split_at(at);
        (
            FieldVec {
                field: self.field,
                symbols: a.to_vec(),
            },
            FieldVec {
                field: self.field,
                symbols: b.to_vec(),
            },
        )
    }

    pub fn add(&self, other: &FieldVec) -> Result<FieldVec> {
        self.compatible(other)?;
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(FieldVec {
            field: self.field,
            symbols,
        })
    }

    pub fn sub(&self, other: &FieldVec) -> Result<FieldVec> {
        self.compatible(other)?;
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(FieldVec {
            field: self.field,
            symbols,
        })
    }

    pub fn scale(&self, c: u32) -> FieldVec {
        FieldVec {
            field: self.field,
            symbols: self.symbols.iter().map(|&a| self.field.mul(a, c)).collect(),
        }
    }

    fn compatible(&self, other: &FieldVec) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q, other.field.q));
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(())
    }
}

impl fmt::Display for FieldVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// A rank together with the space it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VectorIndex {
    pub rank: u64,
    pub q: u32,
    pub n: usize,
}

impl VectorIndex {
    pub fn of(v: &FieldVec) -> Self {
        VectorIndex {
            rank: v.rank(),
            q: v.field().q(),
            n: v.len(),
        }
    }

    pub fn to_vec(self) -> Result<FieldVec> {
        FieldVec::from_rank(PrimeField::new(self.q as u64)?, self.n, self.rank)
    }
}

pub fn rank_digits(q: u32, n: usize, mut rank: u64) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (rank % q as u64) as u32;
        rank /= q as u64;
    }
    out
}

pub fn digits_rank(q: u32, digits: &[u32]) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * q as u64 + d as u64)
}

/// All of F_q^n in rank order.
pub fn enumerate_vectors(field: PrimeField, n: usize, limit: u64) -> Result<Vec<FieldVec>> {
    let size = checked_space(field.q, n, limit, "vector enumeration")?;
    Ok((0..size)
        .map(|r| FieldVec {
            field,
            symbols: rank_digits(field.q, n, r),
        })
        .collect())
}

pub fn hamming_weight(v: &FieldVec) -> usize {
    v.weight()
}

pub fn hamming_distance(a: &FieldVec, b: &FieldVec) -> Result<usize> {
    a.compatible(b)?;
    Ok(symbol_distance(&a.symbols, &b.symbols))
}

pub(crate) fn symbol_distance(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `sum_{i<=m} C(n,i) (q-1)^i`.
pub fn hamming_ball_size(q: u32, n: usize, m: usize) -> Result<BigUint> {
    if m > n {
        return Err(Error::invalid(format!("ball radius {m} exceeds length {n}")));
    }
    Ok(ball_clamped(q, n, m))
}

/// Ball volume with the radius clamped to `n`.
pub(crate) fn ball_clamped(q: u32, n: usize, m: usize) -> BigUint {
    let m = m.min(n);
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    for i in 0..=m {
        if i > 0 {
            binom = binom * BigUint::from(n - i + 1) / BigUint::from(i);
            power *= BigUint::from(q - 1);
        }
        total += &binom * &power;
    }
    total
}

/// Precomputed digit table for a whole space, for hot loops.
#[derive(Debug, Clone)]
pub(crate) struct DigitTable {
    pub q: u32,
    pub n: usize,
    pub digits: Vec<u32>,
}

impl DigitTable {
    pub fn new(q: u32, n: usize, size: u64) -> Self {
        let mut digits = Vec::with_capacity(size as usize * n);
        for r in 0..size {
            digits.extend(rank_digits(q, n, r));
        }
        DigitTable { q, n, digits }
    }

    pub fn row(&self, rank: u64) -> &[u32] {
        let i = rank as usize * self.n;
        &self.digits[i..i + self.n]
    }

    pub fn distance(&self, a: u64, b: u64) -> usize {
        if self.q == 2 {
            return (a ^ b).count_ones() as usize;
        }
        symbol_distance(self.row(a), self.row(b))
    }

    pub fn weight(&self, a: u64) -> usize {
        if self.q == 2 {
            return a.count_ones() as usize;
        }
        self.row(a).iter().filter(|&&d| d != 0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn rejects_composites() {
        for q in [0, 1, 4, 6, 9, 15] {
            assert!(PrimeField::new(q).is_err(), "{q}");
        }
        for q in [2, 3, 5, 7, 11, 13] {
            assert!(PrimeField::new(q).is_ok());
        }
    }

    #[test]
    fn inverses() {
        for q in [2u64, 3, 5, 7, 13] {
            let k = f(q);
            for a in 1..q as u32 {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            }
            assert_eq!(k.inv(0), None);
        }
    }

    #[test]
    fn rank_is_msb_first() {
        let v = FieldVec::parse(f(2), "0110").unwrap();
        assert_eq!(v.rank(), 6);
        let v = FieldVec::parse(f(3), "21").unwrap();
        assert_eq!(v.rank(), 7);
        assert_eq!(FieldVec::from_rank(f(3), 2, 7).unwrap().to_string(), "21");
        assert!(FieldVec::from_rank(f(3), 2, 9).is_err());
    }

    #[test]
    fn enumeration_order() {
        let all = enumerate_vectors(f(2), 3, 1 << 10).unwrap();
        let s: Vec<String> = all.iter().map(|v| v.to_string()).collect();
        assert_eq!(s, ["000", "001", "010", "011", "100", "101", "110", "111"]);
        assert!(enumerate_vectors(f(2), 30, 1 << 10).is_err());
    }

    #[test]
    fn distances() {
        let a = FieldVec::parse(f(3), "0120").unwrap();
        let b = FieldVec::parse(f(3), "0221").unwrap();
        assert_eq!(hamming_distance(&a, &b).unwrap(), 2);
        assert_eq!(hamming_weight(&b), 3);
        let c = FieldVec::parse(f(3), "01").unwrap();
        assert!(matches!(hamming_distance(&a, &c), Err(Error::LengthMismatch(4, 2))));
        let d = FieldVec::parse(f(2), "0110").unwrap();
        assert!(matches!(hamming_distance(&a, &d), Err(Error::FieldMismatch(3, 2))));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(hamming_ball_size(2, 7, 1).unwrap(), BigUint::from(8u32));
        assert_eq!(hamming_ball_size(3, 4, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(hamming_ball_size(2, 5, 5).unwrap(), BigUint::from(32u32));
        assert!(hamming_ball_size(2, 3, 4).is_err());
        assert_eq!(ball_clamped(2, 3, 9), BigUint::from(8u32));
    }

    #[test]
    fn digit_table_matches_vectors() {
        let t = DigitTable::new(3, 3, 27);
        for a in 0..27 {
            for b in 0..27 {
                let va = FieldVec::from_rank(f(3), 3, a).unwrap();
                let vb = FieldVec::from_rank(f(3), 3, b).unwrap();
                assert_eq!(t.distance(a, b), hamming_distance(&va, &vb).unwrap());
            }
        }
    }
}
