//! Fixed-length bit vectors backed by `u64` words.
//!
//! Bits past `len` in the last word are always zero, so word-level
//! equality, hashing and popcounts need no masking.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = BitVector::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse01(s: &str) -> Option<Self> {
        let mut v = BitVector::zeros(0);
        for c in s.chars() {
            match c {
                '0' => v.push(false),
                '1' => v.push(true),
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.set(self.len - 1, true);
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// Number of indices `i` with `self[i] != self[i + 1]`.
    pub fn alternations(&self) -> usize {
        if self.len < 2 {
            return 0;
        }
        // Compare each bit with its successor: (v ^ (v >> 1)) over len-1 positions.
        let mut total = 0usize;
        let n = self.words.len();
        for i in 0..n {
            let cur = self.words[i];
            let next_low = if i + 1 < n { self.words[i + 1] & 1 } else { 0 };
            let shifted = (cur >> 1) | (next_low << 63);
            let mut diff = cur ^ shifted;
            // positions i*64 + j with j such that the pair (j, j+1) lies inside len
            let base = i * WORD;
            let valid = (self.len - 1).saturating_sub(base);
            if valid < WORD {
                diff &= (1u64 << valid) - 1;
            }
            total += diff.count_ones() as usize;
        }
        total
    }

    pub fn intersect_with(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Hamming distance restricted to `mask`.
    #[inline]
    pub fn xor_masked_count(&self, other: &BitVector, mask: &BitVector) -> usize {
        xor_and_popcount(&self.words, &other.words, &mask.words)
    }

    pub fn hamming(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Bits selected by `coords`, packed in order.
    pub fn project(&self, coords: &[usize]) -> BitVector {
        BitVector::from_bools(coords.iter().map(|&c| self.get(c)))
    }

    /// Bits selected by `coords` packed into an integer, bit `j` = `self[coords[j]]`.
    #[inline]
    pub fn project_u64(&self, coords: &[usize]) -> u64 {
        debug_assert!(coords.len() <= 64);
        coords
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &c)| acc | ((self.get(c) as u64) << j))
    }

    /// The vector with coordinates rearranged so position `i` holds `self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> BitVector {
        BitVector::from_bools(perm.iter().map(|&c| self.get(c)))
    }

    pub fn to_string01(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

/// `popcount((a ^ b) & mask)` over equal-length word slices.
#[inline]
pub fn xor_and_popcount(a: &[u64], b: &[u64], mask: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .zip(mask)
        .map(|((x, y), m)| ((x ^ y) & m).count_ones() as usize)
        .sum()
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_string01())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string01())
    }
}
