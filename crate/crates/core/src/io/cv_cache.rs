//! On-disk cache of simulated critical values.
//!
//! Tab-separated text, one record per line:
//!
//! ```text
//! # unifit critical values v1
//! method  n  alpha  reps  seed  tail  lower  value
//! ks      100  0.05  100000  1  upper  -  0.13403
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so a
//! render/parse cycle reproduces every value bit for bit.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::classical::{critical_value_from, CriticalValueTable, NullDistribution, Tail};
use crate::error::{Error, Result};
use crate::method::Method;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "UNIFIT_CACHE_DIR";
pub const CACHE_FILE: &str = "critical_values.tsv";

const MAGIC: &str = "# unifit critical values v1";
const HEADER: &str = "method\tn\talpha\treps\tseed\ttail\tlower\tvalue";

type Key = (Method, usize, u64, usize, u64);
type NullKey = (Method, usize, usize, u64);

fn key_of(t: &CriticalValueTable) -> Key {
    (t.method, t.n, t.alpha.to_bits(), t.reps, t.seed)
}

pub fn render_cache(tables: &[CriticalValueTable]) -> String {
    let mut out = format!("{MAGIC}\n{HEADER}\n");
    for t in tables {
        let lower = t.lower.map_or_else(|| "-".to_string(), |v| v.to_string());
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            t.method, t.n, t.alpha, t.reps, t.seed, t.tail, lower, t.value
        ));
    }
    out
}

pub fn parse_cache(text: &str) -> Result<Vec<CriticalValueTable>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i as u64 + 1, l));
    let err = |line: u64, message: String| Error::Parse { line, message };
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(err(1, format!("expected {MAGIC:?}"))),
    }
    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        _ => return Err(err(2, "missing column header".into())),
    }
    let mut tables = Vec::new();
    for (line, l) in lines {
        if l.is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split('\t').collect();
        if f.len() != 8 {
            return Err(err(line, format!("expected 8 fields, got {}", f.len())));
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(err(line, format!("{what}: {s:?} is not a finite number"))),
            }
        };
        let int = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| err(line, format!("{what}: {s:?} is not an unsigned integer")))
        };
        let method: Method = f[0]
            .parse()
            .map_err(|_| err(line, format!("unknown method {:?}", f[0])))?;
        if !method.is_classical() {
            return Err(err(
                line,
                format!("{method} has no simulated critical values"),
            ));
        }
        let n = usize::try_from(int(f[1], "n")?).map_err(|_| err(line, "n too large".into()))?;
        let alpha = num(f[2], "alpha")?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(err(line, format!("alpha {alpha} outside (0, 1)")));
        }
        let reps =
            usize::try_from(int(f[3], "reps")?).map_err(|_| err(line, "reps too large".into()))?;
        let seed = int(f[4], "seed")?;
        let tail: Tail = f[5]
            .parse()
            .map_err(|_| err(line, format!("unknown tail {:?}", f[5])))?;
        let lower = match f[6] {
            "-" => None,
            s => Some(num(s, "lower")?),
        };
        if lower.is_some() != (tail == Tail::TwoSided) {
            return Err(err(
                line,
                "lower value must be present exactly for two-sided rows".into(),
            ));
        }
        let value = num(f[7], "value")?;
        tables.push(CriticalValueTable {
            method,
            n,
            alpha,
            reps,
            seed,
            tail,
            lower,
            value,
        });
    }
    Ok(tables)
}

/// Memoizes critical values in memory and, when a directory is configured,
/// in [`CACHE_FILE`] inside it.
#[derive(Debug, Default)]
pub struct CriticalValueCache {
    dir: Option<PathBuf>,
    tables: Mutex<Option<HashMap<Key, CriticalValueTable>>>,
    nulls: Mutex<HashMap<NullKey, Arc<NullDistribution>>>,
}

impl CriticalValueCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        CriticalValueCache {
            dir: Some(dir.into()),
            ..Self::default()
        }
    }

    /// Disk-backed when [`CACHE_ENV`] is set, in-memory otherwise.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::at(d),
            _ => Self::in_memory(),
        }
    }

    pub fn path(&self) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(CACHE_FILE))
    }

    fn load(path: &Path) -> Result<HashMap<Key, CriticalValueTable>> {
        match fs::read_to_string(path) {
            Ok(text) => Ok(parse_cache(&text)?
                .into_iter()
                .map(|t| (key_of(&t), t))
                .collect()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(HashMap::new()),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, tables: &HashMap<Key, CriticalValueTable>) -> Result<()> {
        let (Some(dir), Some(path)) = (&self.dir, self.path()) else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let mut rows: Vec<CriticalValueTable> = tables.values().cloned().collect();
        rows.sort_by_key(key_of);
        let tmp = path.with_extension("tsv.tmp");
        fs::write(&tmp, render_cache(&rows))?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Looks up, or simulates and records, a critical value.
    pub fn get(
        &self,
        method: Method,
        n: usize,
        alpha: f64,
        reps: usize,
        seed: u64,
    ) -> Result<CriticalValueTable> {
        let key = (method, n, alpha.to_bits(), reps, seed);
        {
            let mut guard = self.tables.lock().expect("cache lock");
            if guard.is_none() {
                *guard = Some(match self.path() {
                    Some(p) => Self::load(&p)?,
                    None => HashMap::new(),
                });
            }
            if let Some(t) = guard.as_ref().and_then(|m| m.get(&key)) {
                return Ok(t.clone());
            }
        }
        let null = self.null_distribution(method, n, reps, seed)?;
        let table = critical_value_from(&null, alpha);
        let mut guard = self.tables.lock().expect("cache lock");
        let map = guard.get_or_insert_with(HashMap::new);
        map.insert(key, table.clone());
        self.store(map)?;
        Ok(table)
    }

    /// Simulated null distribution, memoized for the life of the cache.
    pub fn null_distribution(
        &self,
        method: Method,
        n: usize,
        reps: usize,
        seed: u64,
    ) -> Result<Arc<NullDistribution>> {
        let key = (method, n, reps, seed);
        if let Some(d) = self.nulls.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(d));
        }
        let d = Arc::new(NullDistribution::simulate(method, n, reps, seed)?);
        self.nulls
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&d));
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::mc_critical_value;

    #[test]
    fn render_parse_is_bit_exact() {
        let tables = vec![
            mc_critical_value(Method::Ks, 30, 0.05, 3_000, 1).unwrap(),
            mc_critical_value(Method::Q, 30, 0.01, 3_000, 2).unwrap(),
            CriticalValueTable {
                method: Method::Frozini,
                n: 7,
                alpha: 0.1 + 0.2,
                reps: 10,
                seed: u64::MAX,
                tail: Tail::Upper,
                lower: None,
                value: 1.0 / 3.0,
            },
        ];
        let text = render_cache(&tables);
        let back = parse_cache(&text).unwrap();
        assert_eq!(back, tables);
        for (a, b) in back.iter().zip(&tables) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse_cache(""), Err(Error::Parse { line: 1, .. })));
        let head = format!("{MAGIC}\n{HEADER}\n");
        let bad = format!("{head}ks\t10\t0.05\t100\t1\tupper\t-\n");
        assert!(matches!(
            parse_cache(&bad),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad = format!("{head}delta\t10\t0.05\t100\t1\tupper\t-\t0.3\n");
        assert!(parse_cache(&bad).is_err());
        let bad = format!("{head}q\t10\t0.05\t100\t1\ttwo-sided\t-\t0.3\n");
        assert!(parse_cache(&bad).is_err());
        let bad = format!("{head}ks\t10\t1.5\t100\t1\tupper\t-\t0.3\n");
        assert!(parse_cache(&bad).is_err());
        let bad = format!("{head}ks\t10\t0.05\t100\t1\tupper\t-\tNaN\n");
        assert!(parse_cache(&bad).is_err());
    }

    #[test]
    fn disk_cache_persists() {
        let dir = std::env::temp_dir().join(format!("unifit-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let first = CriticalValueCache::at(&dir)
            .get(Method::Sherman, 12, 0.05, 2_000, 4)
            .unwrap();
        let text = fs::read_to_string(dir.join(CACHE_FILE)).unwrap();
        assert!(text.contains("sherman\t12\t0.05\t2000\t4"));
        let second = CriticalValueCache::at(&dir)
            .get(Method::Sherman, 12, 0.05, 2_000, 4)
            .unwrap();
        assert_eq!(first, second);
        fs::remove_dir_all(&dir).unwrap();
    }
}
