//! Append-only result cache.
//!
//! One line per entry: `key<TAB>value<TAB>checksum`, where the checksum is
//! the first 16 hex digits of SHA-256 over `key<TAB>value`. Lines that fail
//! the checksum or do not parse are dropped on load and recomputed by the
//! caller. Later lines win over earlier ones for the same key.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use sha2::{Digest, Sha256};
use su3count_core::ModuleCounts;

use crate::formats::parse_count;

fn checksum(key: &str, value: &str) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    h.update(b"\t");
    h.update(value.as_bytes());
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<String, String>,
    discarded: usize,
}

impl Cache {
    /// Loads `path`, creating nothing until the first write.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        let mut discarded = 0;
        match File::open(&path) {
            Ok(f) => {
                for line in BufReader::new(f).split(b'\n') {
                    let line = line?;
                    let parsed = std::str::from_utf8(&line).ok().and_then(|l| {
                        let mut it = l.split('\t');
                        let (k, v, c) = (it.next()?, it.next()?, it.next()?);
                        (it.next().is_none() && checksum(k, v) == c).then(|| (k.to_string(), v.to_string()))
                    });
                    match parsed {
                        Some((k, v)) => {
                            entries.insert(k, v);
                        }
                        None if line.is_empty() => {}
                        None => discarded += 1,
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(Self { path, entries, discarded })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Appends one entry and flushes it.
    pub fn put(&mut self, key: &str, value: &str) -> io::Result<()> {
        assert!(!key.contains(['\t', '\n']) && !value.contains(['\t', '\n']));
        let mut f = OpenOptions::new().create(true).read(true).append(true).open(&self.path)?;
        // a torn previous write leaves a partial line; start on a fresh one
        if f.metadata()?.len() > 0 {
            let mut last = [0u8];
            f.seek(SeekFrom::End(-1))?;
            f.read_exact(&mut last)?;
            if last[0] != b'\n' {
                f.write_all(b"\n")?;
            }
        }
        writeln!(f, "{key}\t{value}\t{}", checksum(key, value))?;
        f.flush()?;
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Number of lines dropped as corrupt when loading.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn module_counts_key(d: u32) -> String {
    format!("module_counts/D={d}")
}

/// `total|singlet|shapes|c0,c1,...,cD`.
pub fn encode_module_counts(m: &ModuleCounts) -> String {
    let comps: Vec<String> = m.by_components.iter().map(|c| c.to_string()).collect();
    format!("{}|{}|{}|{}", m.total, m.singlet, m.shapes, comps.join(","))
}

/// Parses and validates an encoded entry; anything inconsistent is `None`.
pub fn decode_module_counts(d: u32, s: &str) -> Option<ModuleCounts> {
    let mut it = s.split('|');
    let total = parse_count(it.next()?)?;
    let singlet = parse_count(it.next()?)?;
    let shapes = it.next()?.parse().ok()?;
    let by_components = it.next()?.split(',').map(parse_count).collect::<Option<Vec<_>>>()?;
    if it.next().is_some() || by_components.len() != d as usize + 1 {
        return None;
    }
    if by_components.iter().sum::<BigUint>() != total || singlet > total {
        return None;
    }
    Some(ModuleCounts { dimension: d, total, singlet, by_components, shapes })
}
