//! Item memory and sequence encoders.
//!
//! Two encoders turn a symbol sequence `L_1 .. L_m` into one hypervector:
//!
//! * N-gram: every window of `N` consecutive symbols becomes
//!   `L_1 ⊕ ρ(L_2) ⊕ ρ²(L_3) ⊕ … ⊕ ρ^(N-1)(L_N)` and the `m - N + 1` window
//!   vectors are bundled by majority;
//! * record-based: each symbol is bound to a position vector `ID_i` and the
//!   `m` products are bundled in one step.
//!
//! The free functions [`encode_window`], [`encode_sequence_ngram`] and
//! [`encode_sequence_record`] compose the algebra directly. [`NGramEncoder`]
//! and [`RecordEncoder`] produce identical vectors through precomputed
//! rotation tables and are what the pipeline uses.

use std::borrow::Cow;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hv::{bundle, BundleAccumulator, Hypervector};
use crate::rng::{derive_seed, HvRng};

/// Symbol every out-of-alphabet character maps to, and the right-pad symbol
/// for messages shorter than one window.
pub const OOV: char = '\u{FFFD}';

const ITEM_MAGIC: &[u8; 8] = b"FEHDITEM";
const ITEM_VERSION: u32 = 1;

/// Printable ASCII, codepoints 32..=126.
pub fn default_alphabet() -> Vec<char> {
    (32u8..=126).map(char::from).collect()
}

/// Split text into encoder symbols, optionally lower-casing ASCII letters.
pub fn symbols(text: &str, case_fold: bool) -> Vec<char> {
    text.chars()
        .map(|c| if case_fold { c.to_ascii_lowercase() } else { c })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ItemMemory {
    dim: usize,
    seed: u64,
    alphabet: Vec<char>,
    index: HashMap<char, usize>,
    // alphabet order, then the OOV vector last
    vectors: Vec<Hypervector>,
}

impl ItemMemory {
    /// One random vector per symbol, drawn in alphabet order from a generator
    /// seeded with `seed`; the OOV vector is drawn after the last symbol.
    pub fn build(alphabet: &[char], dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(alphabet.len());
        for (i, &c) in alphabet.iter().enumerate() {
            if index.insert(c, i).is_some() {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        let mut rng = HvRng::new(seed);
        let vectors = (0..=alphabet.len())
            .map(|_| Hypervector::random(dim, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim,
            seed,
            alphabet: alphabet.to_vec(),
            index,
            vectors,
        })
    }

    pub fn with_default_alphabet(dim: usize, seed: u64) -> Result<Self> {
        Self::build(&default_alphabet(), dim, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Number of stored symbols (the OOV vector is not counted).
    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// Table lookup without the OOV fallback.
    pub fn get(&self, symbol: char) -> Option<&Hypervector> {
        self.index.get(&symbol).map(|&i| &self.vectors[i])
    }

    pub fn oov(&self) -> &Hypervector {
        &self.vectors[self.alphabet.len()]
    }

    /// Slot of `symbol` in [`Self::vector_at`] order; unknown symbols resolve
    /// to the OOV slot.
    pub fn slot(&self, symbol: char) -> usize {
        self.index
            .get(&symbol)
            .copied()
            .unwrap_or(self.alphabet.len())
    }

    pub fn vector_at(&self, slot: usize) -> &Hypervector {
        &self.vectors[slot]
    }

    pub fn slots(&self) -> usize {
        self.vectors.len()
    }

    pub fn lookup(&self, symbol: char) -> &Hypervector {
        &self.vectors[self.slot(symbol)]
    }

    /// Stable content hash of every stored vector (within one build).
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dim.hash(&mut h);
        self.alphabet.hash(&mut h);
        for v in &self.vectors {
            v.words().hash(&mut h);
        }
        h.finish()
    }

    /// Dump `(seed, dim, alphabet)`; vectors are re-derived on load.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(ITEM_MAGIC)?;
        w.write_all(&ITEM_VERSION.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        w.write_all(&(self.alphabet.len() as u64).to_le_bytes())?;
        for &c in &self.alphabet {
            w.write_all(&u32::from(c).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != ITEM_MAGIC {
            return Err(Error::Format("not an item-memory file".into()));
        }
        let version = read_u32(&mut r)?;
        if version != ITEM_VERSION {
            return Err(Error::Format(format!("unsupported item-memory version {version}")));
        }
        let seed = read_u64(&mut r)?;
        let dim = read_u64(&mut r)? as usize;
        let n = read_u64(&mut r)? as usize;
        let alphabet = (0..n)
            .map(|_| {
                let cp = read_u32(&mut r)?;
                char::from_u32(cp).ok_or_else(|| Error::Format(format!("bad codepoint {cp:#x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(&alphabet, dim, seed)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(f))
    }
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Position vectors `ID_1, ID_2, …`.
///
/// Position `i` (zero-based) is drawn from its own stream derived from
/// `(seed, i)`, so positions past the precomputed prefix are produced on
/// demand and agree with what an eagerly extended memory would hold.
#[derive(Clone, Debug)]
pub struct IdMemory {
    dim: usize,
    seed: u64,
    cache: Vec<Hypervector>,
}

impl IdMemory {
    pub fn new(dim: usize, seed: u64, capacity: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        let mut ids = Self {
            dim,
            seed,
            cache: Vec::new(),
        };
        ids.extend_to(capacity)?;
        Ok(ids)
    }

    fn generate(&self, position: usize) -> Hypervector {
        let mut rng = HvRng::new(derive_seed(self.seed, position as u64));
        Hypervector::random(self.dim, &mut rng).expect("dim validated at construction")
    }

    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        while self.cache.len() < len {
            let v = self.generate(self.cache.len());
            self.cache.push(v);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of precomputed positions.
    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }

    pub fn position(&self, i: usize) -> Cow<'_, Hypervector> {
        match self.cache.get(i) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(self.generate(i)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    NGram,
    RecordBased,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ngram" | "n-gram" => Ok(Scheme::NGram),
            "record" | "record-based" => Ok(Scheme::RecordBased),
            other => Err(Error::InvalidConfig(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncoderConfig {
    pub dim: usize,
    pub ngram: usize,
    pub scheme: Scheme,
    pub seed: u64,
    pub case_fold: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            dim: 10_000,
            ngram: 4,
            scheme: Scheme::NGram,
            seed: 0,
            case_fold: true,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if self.ngram == 0 {
            return Err(Error::InvalidConfig("ngram must be >= 1".into()));
        }
        Ok(())
    }
}

/// Bookkeeping for one encoded sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeMeta {
    /// Length of the symbol sequence before padding.
    pub length: usize,
    /// OOV symbols appended so the sequence fills one window.
    pub padded: usize,
    /// Number of vectors bundled (`m - N + 1` windows, or `m` positions).
    pub bundled: usize,
}

/// `L_1 ⊕ ρ(L_2) ⊕ … ⊕ ρ^(N-1)(L_N)` for one window.
pub fn encode_window(window: &[char], im: &ItemMemory) -> Result<Hypervector> {
    let (first, rest) = window.split_first().ok_or(Error::EmptySequence)?;
    let mut out = im.lookup(*first).clone();
    for (i, &c) in rest.iter().enumerate() {
        out.bind_assign(&im.lookup(c).permute(i + 1))?;
    }
    Ok(out)
}

fn pad_to_window(mut seq: Vec<char>, n: usize) -> (Vec<char>, usize) {
    let padded = n.saturating_sub(seq.len());
    seq.extend(std::iter::repeat_n(OOV, padded));
    (seq, padded)
}

/// Bundle of every N-gram window of `text`, by direct composition.
pub fn encode_sequence_ngram(
    text: &str,
    cfg: &EncoderConfig,
    im: &ItemMemory,
    tiebreak: &mut HvRng,
) -> Result<(Hypervector, EncodeMeta)> {
    cfg.validate()?;
    if im.dim() != cfg.dim {
        return Err(Error::DimensionMismatch {
            left: cfg.dim,
            right: im.dim(),
        });
    }
    let seq = symbols(text, cfg.case_fold);
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let length = seq.len();
    let (seq, padded) = pad_to_window(seq, cfg.ngram);
    let windows = seq
        .windows(cfg.ngram)
        .map(|w| encode_window(w, im))
        .collect::<Result<Vec<_>>>()?;
    let hv = bundle(&windows, tiebreak)?;
    Ok((
        hv,
        EncodeMeta {
            length,
            padded,
            bundled: windows.len(),
        },
    ))
}

/// `[ID_1 ⊕ L_1 + … + ID_m ⊕ L_m]`, by direct composition.
pub fn encode_sequence_record(
    text: &str,
    im: &ItemMemory,
    ids: &IdMemory,
    case_fold: bool,
    tiebreak: &mut HvRng,
) -> Result<(Hypervector, EncodeMeta)> {
    if ids.dim() != im.dim() {
        return Err(Error::DimensionMismatch {
            left: im.dim(),
            right: ids.dim(),
        });
    }
    let seq = symbols(text, case_fold);
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let bound = seq
        .iter()
        .enumerate()
        .map(|(i, &c)| ids.position(i).bind(im.lookup(c)))
        .collect::<Result<Vec<_>>>()?;
    let hv = bundle(&bound, tiebreak)?;
    Ok((
        hv,
        EncodeMeta {
            length: seq.len(),
            padded: 0,
            bundled: bound.len(),
        },
    ))
}

/// Bundle of one class's message vectors.
pub fn train_class(message_hvs: &[Hypervector], tiebreak: &mut HvRng) -> Result<Hypervector> {
    bundle(message_hvs, tiebreak)
}

/// N-gram encoder with every `ρ^j(L)` precomputed for `j < N`.
#[derive(Clone, Debug)]
pub struct NGramEncoder {
    im: ItemMemory,
    n: usize,
    case_fold: bool,
    // rotated[j][slot] = permute(im.vector_at(slot), j)
    rotated: Vec<Vec<Hypervector>>,
}

impl NGramEncoder {
    pub fn new(im: ItemMemory, n: usize, case_fold: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("ngram must be >= 1".into()));
        }
        let rotated = (0..n)
            .map(|j| (0..im.slots()).map(|s| im.vector_at(s).permute(j)).collect())
            .collect();
        Ok(Self {
            im,
            n,
            case_fold,
            rotated,
        })
    }

    pub fn item_memory(&self) -> &ItemMemory {
        &self.im
    }

    pub fn ngram(&self) -> usize {
        self.n
    }

    pub fn encode(&self, text: &str, tiebreak: &mut HvRng) -> Result<(Hypervector, EncodeMeta)> {
        let seq: Vec<usize> = text
            .chars()
            .map(|c| self.im.slot(if self.case_fold { c.to_ascii_lowercase() } else { c }))
            .collect();
        if seq.is_empty() {
            return Err(Error::EmptySequence);
        }
        let length = seq.len();
        let padded = self.n.saturating_sub(length);
        let oov = self.im.slot(OOV);
        let seq: Vec<usize> = seq
            .into_iter()
            .chain(std::iter::repeat_n(oov, padded))
            .collect();

        let mut acc = BundleAccumulator::new(self.im.dim())?;
        let mut window = self.rotated[0][seq[0]].clone();
        for w in seq.windows(self.n) {
            window.clone_from(&self.rotated[0][w[0]]);
            for (j, &slot) in w.iter().enumerate().skip(1) {
                window.bind_assign(&self.rotated[j][slot])?;
            }
            acc.add(&window)?;
        }
        let bundled = acc.len();
        Ok((
            acc.finish(tiebreak)?,
            EncodeMeta {
                length,
                padded,
                bundled,
            },
        ))
    }
}

#[derive(Clone, Debug)]
pub struct RecordEncoder {
    im: ItemMemory,
    ids: IdMemory,
    case_fold: bool,
}

impl RecordEncoder {
    pub fn new(im: ItemMemory, ids: IdMemory, case_fold: bool) -> Result<Self> {
        if im.dim() != ids.dim() {
            return Err(Error::DimensionMismatch {
                left: im.dim(),
                right: ids.dim(),
            });
        }
        Ok(Self { im, ids, case_fold })
    }

    pub fn item_memory(&self) -> &ItemMemory {
        &self.im
    }

    pub fn encode(&self, text: &str, tiebreak: &mut HvRng) -> Result<(Hypervector, EncodeMeta)> {
        let mut acc = BundleAccumulator::new(self.im.dim())?;
        let mut bound = Hypervector::zeros(self.im.dim())?;
        let mut length = 0;
        for (i, c) in text.chars().enumerate() {
            let c = if self.case_fold { c.to_ascii_lowercase() } else { c };
            bound.clone_from(self.im.lookup(c));
            bound.bind_assign(&self.ids.position(i))?;
            acc.add(&bound)?;
            length += 1;
        }
        if length == 0 {
            return Err(Error::EmptySequence);
        }
        Ok((
            acc.finish(tiebreak)?,
            EncodeMeta {
                length,
                padded: 0,
                bundled: length,
            },
        ))
    }
}

/// Either encoder, chosen by [`EncoderConfig::scheme`].
#[derive(Clone, Debug)]
pub enum SequenceEncoder {
    NGram(NGramEncoder),
    Record(RecordEncoder),
}

/// Position vectors precomputed for record-based encoding; longer messages
/// extend on demand.
const ID_PREFIX: usize = 256;

impl SequenceEncoder {
    pub fn from_config(cfg: &EncoderConfig) -> Result<Self> {
        cfg.validate()?;
        let im = ItemMemory::with_default_alphabet(cfg.dim, cfg.seed)?;
        Ok(match cfg.scheme {
            Scheme::NGram => Self::NGram(NGramEncoder::new(im, cfg.ngram, cfg.case_fold)?),
            Scheme::RecordBased => {
                let ids = IdMemory::new(cfg.dim, derive_seed(cfg.seed, 0x1D), ID_PREFIX)?;
                Self::Record(RecordEncoder::new(im, ids, cfg.case_fold)?)
            }
        })
    }

    pub fn item_memory(&self) -> &ItemMemory {
        match self {
            Self::NGram(e) => e.item_memory(),
            Self::Record(e) => e.item_memory(),
        }
    }

    pub fn dim(&self) -> usize {
        self.item_memory().dim()
    }

    pub fn encode(&self, text: &str, tiebreak: &mut HvRng) -> Result<(Hypervector, EncodeMeta)> {
        match self {
            Self::NGram(e) => e.encode(text, tiebreak),
            Self::Record(e) => e.encode(text, tiebreak),
        }
    }
}
