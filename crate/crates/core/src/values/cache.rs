//! Append-only text cache of evaluated values.
//!
//! One record per line: `family|index|signs|P|N|decimal|crc32`, where the
//! checksum covers everything before the last separator. Records that fail to
//! parse or whose checksum does not match are skipped with a warning.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use rug::Float;

use super::key::{Family, ValueKey};
use crate::error::{Error, Result};
use crate::indices::{Index, Sign, SignedIndex};
use crate::series_eval::{BigReal, Precision};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "MTV_CACHE_DIR";
const FILE_NAME: &str = "values.txt";

type Slot = (Family, Index, Vec<Sign>);

#[derive(Debug)]
pub struct ValueCache {
    path: PathBuf,
    entries: RwLock<HashMap<Slot, Vec<(Precision, Float)>>>,
    writer: Mutex<File>,
}

/// The directory named by `MTV_CACHE_DIR`, if set and non-empty.
pub fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Decimal digits that make a `bits`-bit float survive a text round trip.
fn roundtrip_digits(bits: u32) -> usize {
    (bits as f64 / 3.32).ceil() as usize + 2
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::CacheIo {
        path: path.to_path_buf(),
        source,
    }
}

impl ValueCache {
    /// Open (creating if needed) the cache file inside `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join(FILE_NAME);
        let mut entries: HashMap<Slot, Vec<(Precision, Float)>> = HashMap::new();
        if path.exists() {
            let file = File::open(&path).map_err(io_err(&path))?;
            for (n, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(io_err(&path))?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_record(&line) {
                    Ok((slot, prec, value)) => entries.entry(slot).or_default().push((prec, value)),
                    Err(reason) => {
                        log::warn!("{}:{}: skipping cache record ({reason})", path.display(), n + 1)
                    }
                }
            }
        }
        let writer = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        Ok(ValueCache {
            path,
            entries: RwLock::new(entries),
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Number of stored records.
    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exact `(P, N)` match, or else the cheapest entry with `P' >= P` and
    /// `N' >= N`, rounded to `P`.
    pub fn get(&self, key: &ValueKey) -> Option<BigReal> {
        let want = key.precision;
        let entries = self.entries.read().expect("cache lock");
        let list = entries.get(&slot_of(key))?;
        let best = list
            .iter()
            .filter(|(p, _)| p.bits >= want.bits && p.terms >= want.terms)
            .min_by_key(|(p, _)| (*p != want, p.bits, p.terms))?;
        let value = Float::with_val(want.bits, &best.1);
        Some(BigReal::new(value, a_priori_error(want)))
    }

    pub fn put(&self, key: &ValueKey, value: &BigReal) -> Result<()> {
        let prec = key.precision;
        let stored = Float::with_val(prec.bits, value.value());
        {
            let entries = self.entries.read().expect("cache lock");
            if let Some(list) = entries.get(&slot_of(key)) {
                if list.iter().any(|(p, _)| *p == prec) {
                    return Ok(());
                }
            }
        }
        let line = format_record(key, &stored);
        {
            let mut w = self.writer.lock().expect("cache writer lock");
            w.write_all(line.as_bytes()).map_err(io_err(&self.path))?;
            w.flush().map_err(io_err(&self.path))?;
        }
        self.entries
            .write()
            .expect("cache lock")
            .entry(slot_of(key))
            .or_default()
            .push((prec, stored));
        Ok(())
    }
}

/// Error attached to values served from the cache: the evaluator's budget of
/// guard bits and guard terms, halved.
pub(crate) fn a_priori_error(p: Precision) -> Float {
    let bits = p.bits.saturating_sub(crate::series_eval::GUARD_BITS / 2);
    let terms = p.terms.saturating_sub(crate::series_eval::GUARD_TERMS / 2) as u32;
    Float::with_val(53, 1) >> bits.min(terms) as i32
}

fn slot_of(key: &ValueKey) -> Slot {
    (key.family, key.index.clone(), key.signs.clone())
}

fn signs_field(signs: &[Sign]) -> String {
    signs
        .iter()
        .map(|s| match s {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn format_record(key: &ValueKey, value: &Float) -> String {
    let p = key.precision;
    let body = format!(
        "{}|{}|{}|{}|{}|{}",
        key.family,
        key.index,
        signs_field(&key.signs),
        p.bits,
        p.terms,
        value.to_string_radix(10, Some(roundtrip_digits(p.bits)))
    );
    let crc = crc32fast::hash(body.as_bytes());
    format!("{body}|{crc:08x}\n")
}

fn parse_record(line: &str) -> std::result::Result<(Slot, Precision, Float), String> {
    let (body, crc) = line.rsplit_once('|').ok_or("no checksum field")?;
    let crc = u32::from_str_radix(crc.trim(), 16).map_err(|_| "bad checksum field")?;
    if crc32fast::hash(body.as_bytes()) != crc {
        return Err("checksum mismatch".into());
    }
    let fields: Vec<&str> = body.split('|').collect();
    let [family, index, signs, bits, terms, decimal] = fields[..] else {
        return Err(format!("expected 7 fields, found {}", fields.len() + 1));
    };
    let family: Family = family.parse().map_err(|e: Error| e.to_string())?;
    let index: Index = index.parse().map_err(|e: Error| e.to_string())?;
    let signs: Vec<Sign> = if signs.is_empty() {
        Vec::new()
    } else {
        let s: SignedIndex = format!("{index};{signs}")
            .parse()
            .map_err(|e: Error| e.to_string())?;
        s.signs().to_vec()
    };
    let bits: u32 = bits.parse().map_err(|_| "bad precision field")?;
    let terms: usize = terms.parse().map_err(|_| "bad terms field")?;
    if bits < 2 {
        return Err("precision too small".into());
    }
    let parsed = Float::parse(decimal).map_err(|e| e.to_string())?;
    let value = Float::with_val(bits, parsed);
    Ok(((family, index, signs), Precision { bits, terms }, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn tempdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("mtv-cache-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    fn key(prec: Precision) -> ValueKey {
        ValueKey::new(Family::T, "1,2".parse().unwrap(), prec)
    }

    #[test]
    fn put_then_get_is_bit_exact() {
        let dir = tempdir("exact");
        let prec = Precision::for_digits(60);
        let v = Float::with_val(prec.bits, Constant::Pi) / 7u32;
        {
            let cache = ValueCache::open(&dir).unwrap();
            cache.put(&key(prec), &BigReal::exact(v.clone())).unwrap();
            assert_eq!(*cache.get(&key(prec)).unwrap().value(), v);
        }
        let reopened = ValueCache::open(&dir).unwrap();
        assert_eq!(reopened.len(), 1);
        assert_eq!(*reopened.get(&key(prec)).unwrap().value(), v);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn higher_precision_entry_serves_lower_request() {
        let dir = tempdir("higher");
        let hi = Precision::for_digits(100);
        let lo = Precision::for_digits(40);
        let v = Float::with_val(hi.bits, Constant::Log2);
        let cache = ValueCache::open(&dir).unwrap();
        cache.put(&key(hi), &BigReal::exact(v.clone())).unwrap();
        let got = cache.get(&key(lo)).unwrap();
        assert_eq!(got.prec(), lo.bits);
        assert_eq!(*got.value(), Float::with_val(lo.bits, &v));
        assert!(cache.get(&key(Precision::for_digits(200))).is_none());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn corrupted_records_are_skipped() {
        let dir = tempdir("corrupt");
        let prec = Precision::for_digits(30);
        {
            let cache = ValueCache::open(&dir).unwrap();
            cache.put(&key(prec), &BigReal::exact(Float::with_val(prec.bits, 3))).unwrap();
        }
        let path = dir.join(FILE_NAME);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("|3", "|4", 1) + "garbage line\n").unwrap();
        let cache = ValueCache::open(&dir).unwrap();
        assert!(cache.get(&key(prec)).is_none());
        assert!(cache.is_empty());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn signed_keys_round_trip() {
        let dir = tempdir("signed");
        let prec = Precision::for_digits(20);
        let z: SignedIndex = "1,2;-,+".parse().unwrap();
        let k = ValueKey::alternating(&z, prec);
        {
            let cache = ValueCache::open(&dir).unwrap();
            cache.put(&k, &BigReal::exact(Float::with_val(prec.bits, -0.5))).unwrap();
        }
        let cache = ValueCache::open(&dir).unwrap();
        assert_eq!(*cache.get(&k).unwrap().value(), -0.5);
        let other = ValueKey::alternating(&"1,2;+,-".parse().unwrap(), prec);
        assert!(cache.get(&other).is_none());
        fs::remove_dir_all(dir).unwrap();
    }
}
