//! Classical bit strings used for keys, pads and shares.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A string of classical bits. Serialized as a compact `"0110..."` string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        BitString(Vec::with_capacity(n))
    }

    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    /// Uniformly random bits drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        BitString((0..len).map(|_| rng.random::<bool>()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Bitwise XOR of two equal-length strings.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.iter().zip(other.iter()).map(|(a, b)| a ^ b).collect())
    }

    /// XOR of all strings in `parts`; errors unless they share one length.
    pub fn xor_all<'a, I>(parts: I) -> Result<BitString>
    where
        I: IntoIterator<Item = &'a BitString>,
    {
        let mut it = parts.into_iter();
        let Some(first) = it.next() else {
            return Ok(BitString::new());
        };
        it.try_fold(first.clone(), |acc, s| acc.xor(s))
    }

    /// Number of positions where the two strings differ.
    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        Ok(self.xor(other)?.count_ones())
    }
}

impl From<Vec<bool>> for BitString {
    fn from(v: Vec<bool>) -> Self {
        BitString(v)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::config(
                    "bits",
                    format!("unexpected character {other:?}, expected 0 or 1"),
                )),
            })
            .collect()
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
