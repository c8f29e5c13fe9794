//! On-disk cache for coset tables and discriminant expansions.
//!
//! Entries carry a format version, a content checksum, and the table
//! fingerprint. A mismatch in any of them means the entry is ignored and
//! rewritten; cached data is verified against a fresh computation before
//! it is ever reported, so corruption can delay but never corrupt output.

use modcurve::cosets::CosetTable;
use modcurve::exact::{parse_rat, rat_to_string, Rat};
use modcurve::sl2::GroupSpec;
use modcurve::weight1::delta_expansion;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::PathBuf;

/// Cache format version; bump on layout changes.
const VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "MODCURVE_CACHE_DIR";

/// A cached coset table: permutation data plus integrity metadata.
#[derive(Serialize, Deserialize)]
struct TableEntry {
    version: u32,
    created_by: String,
    n1: u64,
    n2: u64,
    /// Table fingerprint, hex.
    fingerprint: String,
    perm_t: Vec<usize>,
    perm_s: Vec<usize>,
    /// SHA-256 over the payload fields, hex.
    checksum: String,
}

/// A cached discriminant expansion keyed by precision.
#[derive(Serialize, Deserialize)]
struct DeltaEntry {
    version: u32,
    created_by: String,
    prec: i64,
    /// τ(1), τ(2), … as decimal strings.
    tau: Vec<String>,
    checksum: String,
}

fn creator() -> String {
    format!("modcurve-cli {}", env!("CARGO_PKG_VERSION"))
}

fn checksum_of(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

/// Handle on the cache directory.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Open (creating if needed) the directory from the environment, or a
    /// per-user temp default.
    pub fn open() -> Cache {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("modcurve-cache"));
        let _ = fs::create_dir_all(&dir);
        Cache { dir }
    }

    fn table_path(&self, spec: &GroupSpec) -> PathBuf {
        self.dir.join(format!("coset-{}-{}.json", spec.n1(), spec.n2()))
    }

    /// Build the coset table, reconciling with the cache: a valid entry
    /// with matching fingerprint is confirmed; anything else (missing,
    /// truncated, checksum or fingerprint mismatch) is ignored and
    /// rewritten from the fresh computation.
    pub fn table(&self, spec: &GroupSpec) -> CosetTable {
        let table = CosetTable::build(spec);
        let perm_t: Vec<usize> = (0..table.size()).map(|i| table.act_t(i)).collect();
        let perm_s: Vec<usize> = (0..table.size()).map(|i| table.act_s(i)).collect();
        let fingerprint = format!("{:016x}", table.fingerprint());
        let payload = vec![
            spec.n1().to_string(),
            spec.n2().to_string(),
            fingerprint.clone(),
            format!("{perm_t:?}"),
            format!("{perm_s:?}"),
        ];
        let checksum = checksum_of(&payload);
        let fresh = TableEntry {
            version: VERSION,
            created_by: creator(),
            n1: spec.n1(),
            n2: spec.n2(),
            fingerprint: fingerprint.clone(),
            perm_t,
            perm_s,
            checksum: checksum.clone(),
        };
        let path = self.table_path(spec);
        let confirmed = fs::read_to_string(&path)
            .ok()
            .and_then(|s| serde_json::from_str::<TableEntry>(&s).ok())
            .map(|e| {
                e.version == VERSION
                    && e.fingerprint == fingerprint
                    && e.checksum == checksum
                    && e.checksum
                        == checksum_of(&[
                            e.n1.to_string(),
                            e.n2.to_string(),
                            e.fingerprint.clone(),
                            format!("{:?}", e.perm_t),
                            format!("{:?}", e.perm_s),
                        ])
            })
            .unwrap_or(false);
        if !confirmed {
            if let Ok(body) = serde_json::to_string_pretty(&fresh) {
                let _ = fs::write(&path, body);
            }
        }
        table
    }

    fn delta_path(&self, prec: i64) -> PathBuf {
        self.dir.join(format!("delta-{prec}.json"))
    }

    /// The discriminant expansion to the given precision, reusing a
    /// cached entry only when its checksum and spot values verify.
    pub fn delta(&self, prec: i64) -> modcurve::exact::qseries::QSeries<Rat> {
        let path = self.delta_path(prec);
        if let Some(series) = fs::read_to_string(&path)
            .ok()
            .and_then(|s| serde_json::from_str::<DeltaEntry>(&s).ok())
            .and_then(|e| self.validate_delta(e, prec))
        {
            return series;
        }
        let series = delta_expansion(prec);
        let tau: Vec<String> = (1..prec).map(|n| rat_to_string(&series.coeff(n))).collect();
        let checksum = checksum_of(&tau);
        let entry = DeltaEntry {
            version: VERSION,
            created_by: creator(),
            prec,
            tau,
            checksum,
        };
        if let Ok(body) = serde_json::to_string_pretty(&entry) {
            let _ = fs::write(&path, body);
        }
        series
    }

    fn validate_delta(
        &self,
        e: DeltaEntry,
        prec: i64,
    ) -> Option<modcurve::exact::qseries::QSeries<Rat>> {
        use modcurve::exact::rat;
        if e.version != VERSION
            || e.prec != prec
            || e.tau.len() as i64 != prec - 1
            || e.checksum != checksum_of(&e.tau)
        {
            return None;
        }
        let mut s = modcurve::exact::qseries::QSeries::new(1, prec, rat(0));
        for (i, t) in e.tau.iter().enumerate() {
            let v = parse_rat(t)?;
            if !v.is_integer() {
                return None;
            }
            s.set_coeff(i as i64 + 1, v);
        }
        // Normalization spot check.
        if s.coeff(1) != rat(1) {
            return None;
        }
        Some(s)
    }

    /// Delete all cache entries; returns the number removed.
    pub fn purge(&self) -> usize {
        let mut n = 0;
        if let Ok(entries) = fs::read_dir(&self.dir) {
            for entry in entries.flatten() {
                let p = entry.path();
                if p.extension().is_some_and(|e| e == "json") && fs::remove_file(&p).is_ok() {
                    n += 1;
                }
            }
        }
        n
    }
}
