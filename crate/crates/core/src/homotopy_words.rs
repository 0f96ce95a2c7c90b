//! Homotopy classes of triangles as words in the free group on `α, β`.
//!
//! A triangle with inputs `q_{a,i}`, `q_{b,j}` and output `q_{a+b,h}`
//! crossing `k` critical values has boundary word
//! `α^{i+j-h+k} ∏_{r=0}^{k} (α^r β)^{δ_r}`, and the class is realised
//! exactly when that word is trivial.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Alpha,
    Beta,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Alpha => "a",
            Generator::Beta => "b",
        })
    }
}

/// Run-length encoded word. Runs never carry a zero exponent; adjacent runs
/// may share a generator until [`free_reduce`] is applied.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FreeWord {
    pub runs: Vec<(Generator, i64)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn power(g: Generator, e: i64) -> Self {
        let mut w = Self::identity();
        w.push(g, e);
        w
    }

    /// Appends `g^e` without reducing.
    pub fn push(&mut self, g: Generator, e: i64) {
        if e != 0 {
            self.runs.push((g, e));
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut runs = self.runs.clone();
        runs.extend_from_slice(&other.runs);
        FreeWord { runs }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..k.unsigned_abs() {
            out.runs.extend_from_slice(&base.runs);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        free_reduce(self).is_empty()
    }

    /// Total exponent of `g`.
    pub fn exponent_sum(&self, g: Generator) -> i64 {
        self.runs.iter().filter(|r| r.0 == g).map(|r| r.1).sum()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Free reduction in one pass using the output as a stack.
pub fn free_reduce(w: &FreeWord) -> FreeWord {
    let mut out: Vec<(Generator, i64)> = Vec::with_capacity(w.runs.len());
    for &(g, e) in &w.runs {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(top) if top.0 == g => {
                top.1 += e;
                if top.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    FreeWord { runs: out }
}

/// `(δ_0, …, δ_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaSequence {
    pub deltas: Vec<i64>,
}

impl DeltaSequence {
    pub fn new(deltas: Vec<i64>) -> Self {
        Self { deltas }
    }

    pub fn k(&self) -> usize {
        self.deltas.len().saturating_sub(1)
    }

    /// Entries in `{-1, 0, 1}`, nonzero entries alternating and starting
    /// with `+1`, ending with `-1`.
    pub fn is_admissible(&self) -> bool {
        let mut expect = 1;
        for &d in &self.deltas {
            match d {
                0 => {}
                1 | -1 if d == expect => expect = -expect,
                _ => return false,
            }
        }
        expect == 1
    }

    /// `δ_r = s_r - s_{r-1}` with `s_{-1} = s_k = 0`; `s` has length `k`.
    pub fn from_binary(s: &[bool]) -> Self {
        let k = s.len();
        let at = |r: isize| -> i64 {
            if r < 0 || r as usize >= k {
                0
            } else {
                i64::from(s[r as usize])
            }
        };
        Self {
            deltas: (0..=k as isize).map(|r| at(r) - at(r - 1)).collect(),
        }
    }

    /// Partial sums `s_r = δ_0 + … + δ_r` for `r < k`.
    pub fn to_binary(&self) -> Vec<i64> {
        let mut acc = 0;
        self.deltas[..self.k()]
            .iter()
            .map(|d| {
                acc += d;
                acc
            })
            .collect()
    }

    /// `Σ r δ_r`.
    pub fn weighted_sum(&self) -> i64 {
        self.deltas
            .iter()
            .enumerate()
            .map(|(r, d)| r as i64 * d)
            .sum()
    }

    /// The output depth `h` forced by word triviality:
    /// `i + j - h + k + Σ r δ_r = 0`.
    pub fn output_depth(&self, i: i64, j: i64) -> i64 {
        i + j + self.k() as i64 + self.weighted_sum()
    }
}

impl fmt::Display for DeltaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.deltas.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `α^{i+j-h+k} ∏_{r=0}^{k} (α^r β)^{δ_r}`, unreduced, factors appended on
/// the right.
pub fn triangle_word(i: i64, j: i64, h: i64, k: usize, delta: &DeltaSequence) -> Result<FreeWord> {
    if delta.deltas.len() != k + 1 {
        return Err(Error::LengthMismatch {
            expected: k + 1,
            got: delta.deltas.len(),
        });
    }
    let mut w = FreeWord::power(Generator::Alpha, i + j - h + k as i64);
    for (r, &d) in delta.deltas.iter().enumerate() {
        let mut factor = FreeWord::power(Generator::Alpha, r as i64);
        factor.push(Generator::Beta, 1);
        w = w.concat(&factor.pow(d));
    }
    Ok(w)
}

/// The `2^k` admissible sequences, in binary counting order of
/// `(s_0, …, s_{k-1})` with `s_0` the least significant bit.
pub fn enumerate_admissible(k: usize) -> Vec<DeltaSequence> {
    assert!(k < 63, "k = {k} is too large to enumerate");
    (0u64..1 << k)
        .map(|mask| {
            let s: Vec<bool> = (0..k).map(|r| mask >> r & 1 == 1).collect();
            DeltaSequence::from_binary(&s)
        })
        .collect()
}

/// Number of homotopy classes with trivial boundary word and output depth
/// `h`, counted over [`enumerate_admissible`] by `h - (i+j) = k - Σ s_r`.
pub fn homotopy_count(k: usize, i: i64, j: i64, h: i64) -> u64 {
    let target = h - (i + j);
    enumerate_admissible(k)
        .iter()
        .filter(|d| k as i64 - d.to_binary().iter().sum::<i64>() == target)
        .count() as u64
}

/// `binom(k, h - (i+j))`, or 0 out of range.
pub fn expected_homotopy_count(k: usize, i: i64, j: i64, h: i64) -> BigInt {
    let s = h - (i + j);
    if s < 0 || s > k as i64 {
        BigInt::from(0)
    } else {
        binomial(BigInt::from(k), BigInt::from(s))
    }
}

fn decode(mut index: u64, k: usize, bound: i64) -> DeltaSequence {
    let base = (2 * bound + 1) as u64;
    let mut deltas = vec![0; k + 1];
    for slot in deltas.iter_mut().rev() {
        *slot = (index % base) as i64 - bound;
        index /= base;
    }
    DeltaSequence { deltas }
}

/// Every `δ ∈ [-bound, bound]^{k+1}` whose triangle word, with `h` taken
/// from the depth relation, free-reduces to the identity. Sorted.
pub fn brute_force_admissible(k: usize, bound: i64, exec: Execution) -> Vec<DeltaSequence> {
    brute_force_classify(k, bound, exec)
        .into_iter()
        .filter_map(|(d, trivial)| trivial.then_some(d))
        .collect()
}

/// Every candidate in `[-bound, bound]^{k+1}` with a flag saying whether its
/// word is trivial. Sorted lexicographically.
pub fn brute_force_classify(k: usize, bound: i64, exec: Execution) -> Vec<(DeltaSequence, bool)> {
    assert!(bound >= 1, "bound must be positive");
    let base = (2 * bound + 1) as u64;
    let total = base
        .checked_pow(k as u32 + 1)
        .expect("brute-force search space overflows");
    const CHUNK: u64 = 4096;
    let starts: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
    exec.map(&starts, |&start| {
        (start..(start + CHUNK).min(total))
            .map(|idx| {
                let d = decode(idx, k, bound);
                let h = d.output_depth(0, 0);
                let trivial = triangle_word(0, 0, h, k, &d)
                    .expect("length matches")
                    .is_trivial();
                (d, trivial)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::{Alpha, Beta};

    fn word(runs: &[(Generator, i64)]) -> FreeWord {
        FreeWord {
            runs: runs.to_vec(),
        }
    }

    fn delta(d: &[i64]) -> DeltaSequence {
        DeltaSequence::new(d.to_vec())
    }

    #[test]
    fn reduction() {
        assert!(free_reduce(&word(&[(Alpha, 1), (Beta, 1), (Beta, -1), (Alpha, -1)])).is_empty());
        let w = word(&[(Alpha, 2), (Beta, 1), (Alpha, -1)]);
        assert_eq!(free_reduce(&w), w);
        let ab = word(&[(Alpha, 1), (Beta, 1)]);
        assert!(ab.concat(&ab.inverse()).is_trivial());
        assert_eq!(
            free_reduce(&word(&[(Alpha, 2), (Alpha, -3)])),
            word(&[(Alpha, -1)])
        );
        assert_eq!(w.to_string(), "a^2 b a^-1");
    }

    #[test]
    fn triangle_words() {
        assert!(triangle_word(0, 0, 0, 0, &delta(&[0])).unwrap().is_empty());
        assert!(!triangle_word(0, 0, 1, 1, &delta(&[1, -1]))
            .unwrap()
            .is_trivial());
        assert!(triangle_word(0, 0, 0, 1, &delta(&[1, -1]))
            .unwrap()
            .is_trivial());
        assert!(matches!(
            triangle_word(0, 0, 0, 2, &delta(&[1, -1])),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn admissible_enumeration() {
        assert_eq!(enumerate_admissible(0), vec![delta(&[0])]);
        let mut two = enumerate_admissible(2);
        two.sort();
        let mut expected = vec![
            delta(&[0, 0, 0]),
            delta(&[1, -1, 0]),
            delta(&[0, 1, -1]),
            delta(&[1, 0, -1]),
        ];
        expected.sort();
        assert_eq!(two, expected);
        assert_eq!(enumerate_admissible(5).len(), 32);
        for d in enumerate_admissible(6) {
            assert!(d.is_admissible());
            assert_eq!(
                DeltaSequence::from_binary(
                    &d.to_binary().iter().map(|&s| s == 1).collect::<Vec<_>>()
                ),
                d
            );
        }
        assert!(!delta(&[1, 1, -1]).is_admissible());
        assert!(!delta(&[-1, 1]).is_admissible());
        assert!(!delta(&[1, 0]).is_admissible());
    }

    #[test]
    fn counts() {
        assert_eq!(homotopy_count(2, 0, 0, 1), 2);
        for k in 0..=8 {
            assert_eq!(homotopy_count(k, 1, 2, 3), 1);
        }
        assert_eq!(homotopy_count(3, 0, 0, 5), 0);
    }

    #[test]
    fn brute_force_small() {
        let mut e = enumerate_admissible(2);
        e.sort();
        assert_eq!(brute_force_admissible(2, 2, Execution::Sequential), e);
        assert_eq!(
            brute_force_admissible(0, 3, Execution::Parallel),
            vec![delta(&[0])]
        );
        let mut e4 = enumerate_admissible(4);
        e4.sort();
        assert_eq!(brute_force_admissible(4, 1, Execution::Parallel), e4);
    }
}
