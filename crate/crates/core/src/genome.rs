//! Binary candidate designs.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Number of free cells in the full 11x16 IDC grid.
pub const IDC_BITS: usize = 96;

/// A candidate design: one bit per free grid cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genome {
    bits: Vec<bool>,
}

impl Genome {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    /// Independent fair coin per bit.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random_bool(0.5)).collect(),
        }
    }

    /// Bits `i` of `index` for `i in 0..len` (little-endian enumeration order).
    pub fn from_index(index: u64, len: usize) -> Self {
        Self {
            bits: (0..len).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    /// Threshold a continuous position at 0.5 (values `>= 0.5` become 1).
    pub fn binarize(position: &[f64]) -> Self {
        Self {
            bits: position.iter().map(|&x| x >= 0.5).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn hamming(&self, other: &Genome) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Bits as 0.0 / 1.0.
    pub fn to_f64(&self) -> Vec<f64> {
        self.bits
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect()
    }

    /// Wire/text form: the bits as '0'/'1' followed by a newline.
    pub fn to_line(&self) -> String {
        let mut s = self.to_string();
        s.push('\n');
        s
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for Genome {
    type Err = Error;

    /// Accepts the text form with or without its trailing newline.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_suffix('\n').unwrap_or(s);
        let body = body.strip_suffix('\r').unwrap_or(body);
        body.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::GenomeText(format!(
                    "character {other:?} at position {i} is not '0' or '1'"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Genome::from_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_form_is_newline_terminated() {
        let g: Genome = "0110".parse().unwrap();
        assert_eq!(g.to_line(), "0110\n");
        assert_eq!(g.count_ones(), 2);
    }

    #[test]
    fn rejects_foreign_characters() {
        assert!(matches!("01x".parse::<Genome>(), Err(Error::GenomeText(_))));
    }

    #[test]
    fn from_index_enumerates_little_endian() {
        assert_eq!(Genome::from_index(1, 4).to_string(), "1000");
        assert_eq!(Genome::from_index(0b1010, 4).to_string(), "0101");
    }

    #[test]
    fn binarize_threshold() {
        let g = Genome::binarize(&[0.0, 0.49, 0.5, 1.0]);
        assert_eq!(g.to_string(), "0011");
    }

    proptest! {
        #[test]
        fn text_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let g = Genome::from_bits(bits);
            let back: Genome = g.to_line().parse().unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
