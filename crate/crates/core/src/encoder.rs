//! Systematic encoders `u -> (u, p(u))` and their verification and decoding.

use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, Label};
use crate::gf::{checked_space, symbol_distance, DigitTable, FieldVec, Limits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FccEncoder {
    f: FunctionSpec,
    t: usize,
    r: usize,
    /// Parity of every message, indexed by rank.
    parities: Vec<FieldVec>,
}

/// Two messages with different `f` whose codewords are too close.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub a: u64,
    pub b: u64,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    /// `f` of the transmitted message, and the nearest codeword's message rank.
    Value { label: Label, message: u64, distance: usize },
    /// No codeword within distance `t`.
    Failure { nearest: usize },
}

impl FccEncoder {
    pub fn new(f: FunctionSpec, t: usize, r: usize, parities: Vec<FieldVec>) -> Result<Self> {
        let size = checked_space(f.q(), f.k(), Limits::default().enumerate, "encoder table")?;
        if parities.len() as u64 != size {
            return Err(Error::LengthMismatch(parities.len(), size as usize));
        }
        for p in &parities {
            if p.len() != r {
                return Err(Error::LengthMismatch(p.len(), r));
            }
            if p.field() != f.field() {
                return Err(Error::FieldMismatch(p.field().q(), f.q()));
            }
        }
        Ok(FccEncoder { f, t, r, parities })
    }

    pub fn function(&self) -> &FunctionSpec {
        &self.f
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn parities(&self) -> &[FieldVec] {
        &self.parities
    }

    pub fn parity(&self, u: &FieldVec) -> Result<&FieldVec> {
        if u.len() != self.f.k() {
            return Err(Error::LengthMismatch(u.len(), self.f.k()));
        }
        if u.field() != self.f.field() {
            return Err(Error::FieldMismatch(u.field().q(), self.f.q()));
        }
        Ok(&self.parities[u.rank() as usize])
    }

    pub fn encode(&self, u: &FieldVec) -> Result<FieldVec> {
        u.concat(self.parity(u)?)
    }

    /// `q k r t` header, then `rank parity` per message.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.f.q(), self.f.k(), self.r, self.t);
        for (i, p) in self.parities.iter().enumerate() {
            out.push_str(&format!("{i} {p}\n"));
        }
        out
    }

    pub fn parse(text: &str, f: FunctionSpec) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty encoder file"))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|e| Error::parse(hl, format!("{s:?}: {e}"))))
            .collect::<Result<_>>()?;
        if h.len() != 4 {
            return Err(Error::parse(hl, "header must be `q k r t`"));
        }
        let (q, k, r, t) = (h[0], h[1], h[2], h[3]);
        if q as u32 != f.q() || k != f.k() {
            return Err(Error::parse(hl, format!("encoder is for q={q} k={k}, function has q={} k={}", f.q(), f.k())));
        }
        let size = checked_space(f.q(), k, Limits::default().enumerate, "encoder table")? as usize;
        let mut parities: Vec<Option<FieldVec>> = vec![None; size];
        for (ln, line) in lines {
            let (rank, digits) = match line.split_once(char::is_whitespace) {
                Some((a, b)) => (a, b.trim()),
                None if r == 0 => (line, ""),
                None => return Err(Error::parse(ln, "expected `rank parity`")),
            };
            let rank: usize = rank.parse().map_err(|e| Error::parse(ln, format!("{e}")))?;
            let p = FieldVec::parse(f.field(), digits).map_err(|e| Error::parse(ln, e.to_string()))?;
            if p.len() != r {
                return Err(Error::parse(ln, format!("parity has length {}, expected {r}", p.len())));
            }
            let slot = parities
                .get_mut(rank)
                .ok_or_else(|| Error::parse(ln, format!("rank {rank} out of range")))?;
            if slot.replace(p).is_some() {
                return Err(Error::parse(ln, format!("rank {rank} given twice")));
            }
        }
        let parities = parities
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::parse(0, format!("parity for rank {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        FccEncoder::new(f, t, r, parities)
    }
}

/// First pair of messages with `f(a) != f(b)` and codeword distance below `2t+1`.
pub fn find_violation(e: &FccEncoder) -> Result<Option<Violation>> {
    let size = checked_space(e.f.q(), e.f.k(), Limits::default().drm_rows, "encoder verification")?;
    let keys: Vec<u64> = (0..size).map(|r| e.f.key_of_rank(r)).collect();
    let digits = DigitTable::new(e.f.q(), e.f.k(), size);
    let need = 2 * e.t + 1;
    for a in 0..size {
        for b in (a + 1)..size {
            if keys[a as usize] == keys[b as usize] {
                continue;
            }
            let d = digits.distance(a, b)
                + symbol_distance(e.parities[a as usize].symbols(), e.parities[b as usize].symbols());
            if d < need {
                return Ok(Some(Violation { a, b, distance: d }));
            }
        }
    }
    Ok(None)
}

pub fn verify_fcc(e: &FccEncoder) -> Result<bool> {
    Ok(find_violation(e)?.is_none())
}

/// Nearest-codeword decoding of `f(u)` from a received word of length `k + r`.
///
/// Every codeword within distance `t` of `y` carries the same `f`-value when
/// the encoder is an FCC, so the first nearest codeword decides.
pub fn decode(e: &FccEncoder, y: &FieldVec) -> Result<Decoded> {
    let (k, r) = (e.f.k(), e.r);
    if y.len() != k + r {
        return Err(Error::LengthMismatch(y.len(), k + r));
    }
    if y.field() != e.f.field() {
        return Err(Error::FieldMismatch(y.field().q(), e.f.q()));
    }
    let (ym, yp) = y.symbols().split_at(k);
    let size = checked_space(e.f.q(), k, Limits::default().enumerate, "decoder scan")?;
    let mut best = (usize::MAX, 0u64);
    for m in 0..size {
        let u = crate::gf::rank_digits(e.f.q(), k, m);
        let d = symbol_distance(ym, &u) + symbol_distance(yp, e.parities[m as usize].symbols());
        if d < best.0 {
            best = (d, m);
        }
    }
    Ok(if best.0 <= e.t {
        Decoded::Value {
            label: e.f.label_of_key(e.f.key_of_rank(best.1)),
            message: best.1,
            distance: best.0,
        }
    } else {
        Decoded::Failure { nearest: best.0 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimeField;

    fn majority_encoder() -> FccEncoder {
        // f = u1 + u2 over F_2 with a repeated parity bit: distance 3 across classes.
        let k = PrimeField::new(2).unwrap();
        let f = FunctionSpec::linear(k, vec![vec![1, 1]]).unwrap();
        let p = |s: &str| FieldVec::parse(k, s).unwrap();
        FccEncoder::new(f, 1, 2, vec![p("00"), p("11"), p("11"), p("00")]).unwrap()
    }

    #[test]
    fn verify_and_round_trip() {
        let e = majority_encoder();
        assert!(verify_fcc(&e).unwrap());
        let text = e.to_text();
        assert_eq!(FccEncoder::parse(&text, e.function().clone()).unwrap(), e);
        assert!(FccEncoder::parse("2 2 2 1\n0 00\n", e.function().clone()).is_err());
    }

    #[test]
    fn violation_reported() {
        let k = PrimeField::new(2).unwrap();
        let f = FunctionSpec::linear(k, vec![vec![1, 1]]).unwrap();
        let p = |s: &str| FieldVec::parse(k, s).unwrap();
        let e = FccEncoder::new(f, 1, 2, vec![p("00"), p("10"), p("11"), p("00")]).unwrap();
        assert_eq!(find_violation(&e).unwrap(), Some(Violation { a: 0, b: 1, distance: 2 }));
    }

    #[test]
    fn decodes_single_errors() {
        let e = majority_encoder();
        let k = PrimeField::new(2).unwrap();
        for m in 0..4u64 {
            let u = FieldVec::from_rank(k, 2, m).unwrap();
            let c = e.encode(&u).unwrap();
            let want = e.function().eval(&u).unwrap();
            for pos in 0..4 {
                let mut s = c.symbols().to_vec();
                s[pos] ^= 1;
                let y = FieldVec::new(k, s).unwrap();
                match decode(&e, &y).unwrap() {
                    Decoded::Value { label, .. } => assert_eq!(label, want),
                    other => panic!("{other:?}"),
                }
            }
        }
    }
}
