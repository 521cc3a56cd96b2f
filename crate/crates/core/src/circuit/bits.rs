use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A fixed-width string of bits. Wire 0 is the first (leftmost) character of
/// the textual form and the most significant bit of the integer index, so
/// `"10"` has index 2, matching the `|10⟩` ket convention.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(width: usize) -> Self {
        BitString(vec![false; width])
    }

    /// Bits of `index` over `width` wires, wire 0 most significant.
    pub fn from_index(index: usize, width: usize) -> Self {
        BitString(
            (0..width)
                .map(|w| (index >> (width - 1 - w)) & 1 == 1)
                .collect(),
        )
    }

    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn get(&self, wire: usize) -> Option<bool> {
        self.0.get(wire).copied()
    }

    /// `self` followed by `extra` zero bits.
    pub fn padded(&self, width: usize) -> Result<Self> {
        if width < self.width() {
            return Err(Error::invalid(format!(
                "cannot pad a {}-bit string to {} bits",
                self.width(),
                width
            )));
        }
        let mut bits = self.0.clone();
        bits.resize(width, false);
        Ok(BitString(bits))
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!("'{other}' is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
