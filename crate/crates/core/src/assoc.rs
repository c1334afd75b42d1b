//! Associative memory: labeled class hypervectors with nearest-class search.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::encoder::{read_u32, read_u64};
use crate::error::{Error, Result};
use crate::hv::Hypervector;

const MODEL_MAGIC: &[u8; 8] = b"FEHDAMEM";
const MODEL_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub label: String,
    pub distance: usize,
    /// Distance to every stored class, in insertion order.
    pub all_distances: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativeMemory {
    dim: usize,
    entries: Vec<(String, Hypervector)>,
}

impl AssociativeMemory {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            entries: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, Hypervector)] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Option<&Hypervector> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, hv)| hv)
    }

    pub fn insert(&mut self, label: impl Into<String>, class_hv: Hypervector) -> Result<()> {
        let label = label.into();
        if class_hv.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: class_hv.dim(),
            });
        }
        if self.get(&label).is_some() {
            return Err(Error::DuplicateLabel(label));
        }
        self.entries.push((label, class_hv));
        Ok(())
    }

    /// Nearest class by exact Hamming distance; ties go to the earliest insert.
    pub fn query(&self, q: &Hypervector) -> Result<QueryResult> {
        if self.entries.is_empty() {
            return Err(Error::EmptyMemory);
        }
        let all_distances = self
            .entries
            .iter()
            .map(|(l, hv)| Ok((l.clone(), hv.hamming(q)?)))
            .collect::<Result<Vec<_>>>()?;
        let (label, distance) = all_distances
            .iter()
            .fold(None::<&(String, usize)>, |best, cur| match best {
                Some(b) if b.1 <= cur.1 => Some(b),
                _ => Some(cur),
            })
            .cloned()
            .expect("non-empty");
        Ok(QueryResult {
            label,
            distance,
            all_distances,
        })
    }

    /// Model file: magic, version, `dim`, entry count, then per entry the
    /// label length (u32), label bytes (UTF-8) and packed words. All
    /// integers little-endian.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MODEL_MAGIC)?;
        w.write_all(&MODEL_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        w.write_all(&(self.entries.len() as u64).to_le_bytes())?;
        for (label, hv) in &self.entries {
            let bytes = label.as_bytes();
            let len = u32::try_from(bytes.len())
                .map_err(|_| Error::Format("label longer than u32::MAX bytes".into()))?;
            w.write_all(&len.to_le_bytes())?;
            w.write_all(bytes)?;
            hv.write_words(&mut w)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MODEL_MAGIC {
            return Err(Error::Format("not an associative-memory model file".into()));
        }
        let version = read_u32(&mut r)?;
        if version != MODEL_VERSION {
            return Err(Error::Format(format!("unsupported model version {version}")));
        }
        let dim = read_u64(&mut r)? as usize;
        let count = read_u64(&mut r)?;
        let mut am = Self::new(dim)?;
        for _ in 0..count {
            let len = read_u32(&mut r)? as usize;
            let mut buf = vec![0u8; len];
            r.read_exact(&mut buf)?;
            let label = String::from_utf8(buf)
                .map_err(|e| Error::Format(format!("label is not UTF-8: {e}")))?;
            let hv = Hypervector::read_words(&mut r, dim)?;
            am.insert(label, hv)?;
        }
        Ok(am)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::HvRng;

    fn random(dim: usize, seed: u64) -> Hypervector {
        Hypervector::random(dim, &mut HvRng::new(seed)).unwrap()
    }

    #[test]
    fn insert_and_size() {
        let mut am = AssociativeMemory::new(64).unwrap();
        am.insert("ham", random(64, 1)).unwrap();
        assert_eq!(am.len(), 1);
        assert!(matches!(
            am.insert("ham", random(64, 2)),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            am.insert("spam", random(65, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn query_empty_memory() {
        let am = AssociativeMemory::new(8).unwrap();
        assert!(matches!(am.query(&random(8, 0)), Err(Error::EmptyMemory)));
    }

    #[test]
    fn exact_match_wins() {
        let mut am = AssociativeMemory::new(500).unwrap();
        let (a, b) = (random(500, 1), random(500, 2));
        am.insert("a", a.clone()).unwrap();
        am.insert("b", b.clone()).unwrap();
        let r = am.query(&b).unwrap();
        assert_eq!((r.label.as_str(), r.distance), ("b", 0));
        assert_eq!(r.all_distances.len(), 2);
        assert_eq!(r.all_distances[0].1, a.hamming(&b).unwrap());
    }

    #[test]
    fn complement_of_single_entry() {
        let mut am = AssociativeMemory::new(100).unwrap();
        let a = random(100, 4);
        am.insert("only", a.clone()).unwrap();
        let r = am.query(&a.complement()).unwrap();
        assert_eq!((r.label.as_str(), r.distance), ("only", 100));
    }

    #[test]
    fn ties_go_to_first_inserted() {
        let mut am = AssociativeMemory::new(4).unwrap();
        am.insert("first", "1100".parse().unwrap()).unwrap();
        am.insert("second", "0011".parse().unwrap()).unwrap();
        let r = am.query(&"1010".parse().unwrap()).unwrap();
        assert_eq!(r.label, "first");
        assert_eq!(r.distance, 2);
    }

    #[test]
    fn model_file_layout() {
        let mut am = AssociativeMemory::new(70).unwrap();
        am.insert("ham", random(70, 1)).unwrap();
        am.insert("spam", random(70, 2)).unwrap();
        let mut buf = Vec::new();
        am.write_to(&mut buf).unwrap();
        // header 8+4+8+8, entries (4+3+16) and (4+4+16)
        assert_eq!(buf.len(), 28 + 23 + 24);
        assert_eq!(&buf[12..20], &70u64.to_le_bytes());
        let back = AssociativeMemory::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, am);
        assert!(AssociativeMemory::read_from(&buf[..buf.len() - 1]).is_err());
    }
}
