use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A freely reduced word in the free group on generators `1..=r`; letter `i`
/// is the generator `i`, letter `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i32>);

impl Ord for Word {
    /// Shortlex: shorter words first, then letter by letter with
    /// `a < A < b < B < ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            let key = |l: &i32| (l.unsigned_abs(), *l < 0);
            self.0.iter().map(key).cmp(other.0.iter().map(key))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Free reduction with a single stack pass.
pub fn reduce_word(letters: &[i64], rank: usize) -> Result<Word> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l == 0 || l.unsigned_abs() as usize > rank {
            return Err(Error::IndexOutOfAlphabet { index: l, rank });
        }
        let l = l as i32;
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Ok(Word(out))
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![i as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut s = vec![0i64; rank];
        for &l in &self.0 {
            let i = l.unsigned_abs() as usize - 1;
            if i < rank {
                s[i] += l.signum() as i64;
            }
        }
        s
    }

    /// Parses `"aB"` style text: `a..z` are generators, `A..Z` inverses,
    /// `^k` (possibly negative) raises the preceding letter. `"1"` is the
    /// identity, and so is `"e"` when the alphabet has fewer than 5 letters.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let t = text.trim();
        if t == "1" || (t == "e" && rank < 5) || t.is_empty() {
            return Ok(Word::identity());
        }
        let bytes = t.as_bytes();
        let offset = text.find(t).unwrap_or(0);
        let mut letters: Vec<i64> = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let at = i;
            let letter: i64 = if c.is_ascii_lowercase() {
                (c - b'a' + 1) as i64
            } else if c.is_ascii_uppercase() {
                -((c - b'A' + 1) as i64)
            } else if c == b'*' || c.is_ascii_whitespace() {
                i += 1;
                continue;
            } else {
                return Err(Error::parse(offset + at, format!("unexpected '{}' in word", c as char)));
            };
            if letter.unsigned_abs() as usize > rank {
                return Err(Error::parse(offset + at, format!("letter '{}' outside alphabet of rank {rank}", c as char)));
            }
            i += 1;
            let mut power = 1i64;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let neg = i < bytes.len() && bytes[i] == b'-';
                if neg {
                    i += 1;
                }
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::parse(offset + i, "expected exponent"));
                }
                power = t[start..i].parse().map_err(|_| Error::parse(offset + start, "exponent too large"))?;
                if neg {
                    power = -power;
                }
            }
            let l = if power < 0 { -letter } else { letter };
            for _ in 0..power.unsigned_abs() {
                letters.push(l);
            }
        }
        reduce_word(&letters, rank)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            let i = l.unsigned_abs();
            if i <= 26 {
                let base = if l > 0 { b'a' } else { b'A' };
                write!(f, "{}", (base + (i - 1) as u8) as char)?;
            } else {
                write!(f, "x{}{}", i, if l < 0 { "'" } else { "" })?;
            }
        }
        Ok(())
    }
}

/// `1 + Σ_{j=1..k} 2r(2r-1)^{j-1}`
pub fn ball_size(k: usize, r: usize) -> u128 {
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * r as u128;
    for _ in 0..k {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * r as u128 - 1);
    }
    total
}

pub const DEFAULT_BALL_CAP: u128 = 1_000_000;

/// All reduced words of length at most `k`, in shortlex order.
pub fn ball(k: usize, r: usize, cap: u128) -> Result<Vec<Word>> {
    if r == 0 {
        return Ok(vec![Word::identity()]);
    }
    let size = ball_size(k, r);
    if size > cap {
        return Err(Error::BallTooLarge { radius: k, rank: r, size, cap });
    }
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    let alphabet: Vec<i32> = (1..=r as i32).flat_map(|i| [i, -i]).collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &alphabet {
                if w.0.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}
