//! Packed binary hypervectors.
//!
//! Component `i` lives in word `i / 64` at bit position `i % 64`
//! (little-endian bit order within little-endian words). Bits past `dim` in
//! the last word are always zero; every constructor and operation keeps that
//! invariant so equality, hashing and popcounts can work on whole words.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::rng::HvRng;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    dim: usize,
    words: Vec<u64>,
}

#[inline]
fn word_count(dim: usize) -> usize {
    dim.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(dim: usize) -> u64 {
    match dim % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl Hypervector {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            words: vec![0; word_count(dim)],
        })
    }

    /// Each component is an independent fair coin drawn from `rng`.
    pub fn random(dim: usize, rng: &mut HvRng) -> Result<Self> {
        let mut hv = Self::zeros(dim)?;
        for w in hv.words.iter_mut() {
            *w = rng.next_u64();
        }
        hv.canonicalize();
        Ok(hv)
    }

    /// Build from packed words; padding bits must already be zero.
    pub fn from_words(dim: usize, words: Vec<u64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if words.len() != word_count(dim) {
            return Err(Error::Format(format!(
                "expected {} words for dim {dim}, got {}",
                word_count(dim),
                words.len()
            )));
        }
        let hv = Self { dim, words };
        if !hv.is_canonical() {
            return Err(Error::Format("non-zero padding bits".into()));
        }
        Ok(hv)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut hv = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                hv.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        Ok(hv)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.dim, "component {i} out of range for dim {}", self.dim);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim, "component {i} out of range for dim {}", self.dim);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when every padding bit past `dim` is zero.
    pub fn is_canonical(&self) -> bool {
        self.words.len() == word_count(self.dim)
            && self.words.last().is_none_or(|w| w & !tail_mask(self.dim) == 0)
    }

    fn canonicalize(&mut self) {
        let mask = tail_mask(self.dim);
        if let Some(last) = self.words.last_mut() {
            *last &= mask;
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Binding: component-wise XOR.
    pub fn bind(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self {
            dim: self.dim,
            words,
        })
    }

    /// In-place XOR, used by the encoders' inner loops.
    pub fn bind_assign(&mut self, other: &Self) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn complement(&self) -> Self {
        let mut out = Self {
            dim: self.dim,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.canonicalize();
        out
    }

    /// Circular rotation to the right: component `i` moves to `(i + k) mod dim`.
    pub fn permute(&self, k: usize) -> Self {
        let k = k % self.dim;
        if k == 0 {
            return self.clone();
        }
        let up = shift_up(&self.words, k, self.dim);
        let down = shift_down(&self.words, self.dim - k);
        let mut out = Self {
            dim: self.dim,
            words: up.iter().zip(&down).map(|(a, b)| a | b).collect(),
        };
        out.canonicalize();
        out
    }

    pub fn hamming(&self, other: &Self) -> Result<usize> {
        self.check_dim(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn normalized_hamming(&self, other: &Self) -> Result<f64> {
        Ok(self.hamming(other)? as f64 / self.dim as f64)
    }

    /// Binary form: `dim` as u64 little-endian, then the packed words.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        self.write_words(&mut w)
    }

    pub(crate) fn write_words<W: Write>(&self, w: &mut W) -> Result<()> {
        for word in &self.words {
            w.write_all(&word.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        let dim = usize::try_from(u64::from_le_bytes(buf))
            .map_err(|_| Error::Format("dimension does not fit in usize".into()))?;
        Self::read_words(&mut r, dim)
    }

    pub(crate) fn read_words<R: Read>(r: &mut R, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut words = Vec::with_capacity(word_count(dim));
        let mut buf = [0u8; 8];
        for _ in 0..word_count(dim) {
            r.read_exact(&mut buf)?;
            words.push(u64::from_le_bytes(buf));
        }
        Self::from_words(dim, words)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.words.len());
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cursor = bytes;
        let hv = Self::read_from(&mut cursor)?;
        if !cursor.is_empty() {
            return Err(Error::Format(format!("{} trailing bytes", cursor.len())));
        }
        Ok(hv)
    }
}

/// Move bit `i` to `i + k`, dropping anything at or beyond `dim`.
fn shift_up(words: &[u64], k: usize, dim: usize) -> Vec<u64> {
    let n = words.len();
    let (ws, bs) = (k / WORD_BITS, k % WORD_BITS);
    let mut out = vec![0u64; n];
    for j in ws..n {
        let src = j - ws;
        let mut v = words[src] << bs;
        if bs > 0 && src > 0 {
            v |= words[src - 1] >> (WORD_BITS - bs);
        }
        out[j] = v;
    }
    if let Some(last) = out.last_mut() {
        *last &= tail_mask(dim);
    }
    out
}

/// Move bit `i` to `i - s`, dropping anything below zero.
fn shift_down(words: &[u64], s: usize) -> Vec<u64> {
    let n = words.len();
    let (ws, bs) = (s / WORD_BITS, s % WORD_BITS);
    let mut out = vec![0u64; n];
    for j in 0..n.saturating_sub(ws) {
        let src = j + ws;
        let mut v = words[src] >> bs;
        if bs > 0 && src + 1 < n {
            v |= words[src + 1] << (WORD_BITS - bs);
        }
        out[j] = v;
    }
    out
}

impl fmt::Display for Hypervector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Hypervector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim <= 64 {
            write!(f, "Hypervector({self})")
        } else {
            write!(f, "Hypervector(dim={}, ones={})", self.dim, self.count_ones())
        }
    }
}

/// Textual form: one `'0'`/`'1'` per component, component 0 first.
impl FromStr for Hypervector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::ParseHypervector(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::ParseHypervector("empty string".into()));
        }
        Self::from_bits(&bits)
    }
}

/// Streaming majority vote with bit-sliced counters.
///
/// Counter plane `p` holds bit `p` of every component's running count, so one
/// addition costs a ripple-carry over a handful of words instead of `dim`
/// scalar increments.
#[derive(Clone, Debug)]
pub struct BundleAccumulator {
    dim: usize,
    count: usize,
    planes: Vec<Vec<u64>>,
}

impl BundleAccumulator {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            count: 0,
            planes: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn add(&mut self, hv: &Hypervector) -> Result<()> {
        if hv.dim != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: hv.dim,
            });
        }
        let n = hv.words.len();
        let mut carry: Vec<u64> = hv.words.clone();
        for plane in self.planes.iter_mut() {
            let mut any = 0u64;
            for (p, c) in plane.iter_mut().zip(carry.iter_mut()) {
                let next = *p & *c;
                *p ^= *c;
                *c = next;
                any |= next;
            }
            if any == 0 {
                self.count += 1;
                return Ok(());
            }
        }
        if carry.iter().any(|&c| c != 0) {
            self.planes.push(carry);
        } else if self.planes.is_empty() {
            self.planes.push(vec![0; n]);
        }
        self.count += 1;
        Ok(())
    }

    /// Per-component count, mostly for diagnostics and tests.
    pub fn count_at(&self, i: usize) -> usize {
        assert!(i < self.dim);
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        self.planes
            .iter()
            .enumerate()
            .map(|(p, plane)| (((plane[w] >> b) & 1) as usize) << p)
            .sum()
    }

    /// Threshold the counters into a hypervector.
    ///
    /// An even number of inputs first receives one extra random vector drawn
    /// from `tiebreak`, so every component is decided by a strict majority.
    /// Odd counts never touch `tiebreak`.
    pub fn finish(mut self, tiebreak: &mut HvRng) -> Result<Hypervector> {
        if self.count == 0 {
            return Err(Error::EmptyBundle);
        }
        if self.count.is_multiple_of(2) {
            let extra = Hypervector::random(self.dim, tiebreak)?;
            self.add(&extra)?;
        }
        // strict majority of an odd count: count > (n - 1) / 2
        let threshold = (self.count - 1) / 2;
        let n_words = word_count(self.dim);
        let mut out = Hypervector::zeros(self.dim)?;
        if self.planes.len() < usize::BITS as usize && threshold >> self.planes.len() != 0 {
            return Ok(out);
        }
        for w in 0..n_words {
            let mut gt = 0u64;
            let mut eq = u64::MAX;
            for (p, plane) in self.planes.iter().enumerate().rev() {
                let bit = plane[w];
                if (threshold >> p) & 1 == 0 {
                    gt |= eq & bit;
                    eq &= !bit;
                } else {
                    eq &= bit;
                }
            }
            out.words[w] = gt;
        }
        out.canonicalize();
        Ok(out)
    }
}

/// Majority-vote bundle of `inputs`; see [`BundleAccumulator::finish`] for ties.
pub fn bundle<'a, I>(inputs: I, tiebreak: &mut HvRng) -> Result<Hypervector>
where
    I: IntoIterator<Item = &'a Hypervector>,
{
    let mut iter = inputs.into_iter();
    let first = iter.next().ok_or(Error::EmptyBundle)?;
    let mut acc = BundleAccumulator::new(first.dim)?;
    acc.add(first)?;
    for hv in iter {
        acc.add(hv)?;
    }
    acc.finish(tiebreak)
}
