//! Advisory report cache: one file per (target hash, command tag).
//!
//! Entries are versioned and self-describing; anything unreadable or
//! mismatched is ignored with a warning and recomputed. Writes go
//! through a temporary file plus rename, guarded by a best-effort lock
//! file, so readers never observe a partial entry. The cache is purely
//! an accelerator: behavior with a cold or absent cache is identical.

use crate::report::Report;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    cache_version: u32,
    tag: String,
    report: Report,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Option<Cache> {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("warning: cache directory {} unusable: {e}", dir.display());
            return None;
        }
        Some(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn path(&self, target_hash: &str, tag: &str) -> PathBuf {
        self.dir.join(format!("{target_hash}-{tag}.json"))
    }

    pub fn get(&self, target_hash: &str, tag: &str) -> Option<Report> {
        let path = self.path(target_hash, tag);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(_) => return None,
        };
        match serde_json::from_slice::<Entry>(&bytes) {
            Ok(entry) if entry.cache_version == CACHE_VERSION && entry.tag == tag => {
                Some(entry.report)
            }
            Ok(_) => {
                eprintln!(
                    "warning: stale cache entry {} (version or tag mismatch), recomputing",
                    path.display()
                );
                None
            }
            Err(e) => {
                eprintln!(
                    "warning: corrupted cache entry {} ({e}), recomputing",
                    path.display()
                );
                None
            }
        }
    }

    pub fn put(&self, target_hash: &str, tag: &str, report: &Report) {
        let path = self.path(target_hash, tag);
        let entry = Entry {
            cache_version: CACHE_VERSION,
            tag: tag.to_string(),
            report: report.clone(),
        };
        let bytes = match serde_json::to_vec_pretty(&entry) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("warning: cache serialization failed: {e}");
                return;
            }
        };
        let lock = self.acquire_lock(&path);
        let tmp = path.with_extension("json.tmp");
        let write = fs::write(&tmp, &bytes).and_then(|()| fs::rename(&tmp, &path));
        if let Err(e) = write {
            eprintln!("warning: cache write to {} failed: {e}", path.display());
            let _ = fs::remove_file(&tmp);
        }
        if let Some(lock) = lock {
            let _ = fs::remove_file(lock);
        }
    }

    /// Advisory file lock: create-new semantics with a bounded wait, then
    /// proceed regardless (a stale lock must not wedge the cache).
    fn acquire_lock(&self, path: &Path) -> Option<PathBuf> {
        let lock = path.with_extension("json.lock");
        for _ in 0..20 {
            match fs::OpenOptions::new()
                .write(true)
                .create_new(true)
                .open(&lock)
            {
                Ok(_) => return Some(lock),
                Err(_) => std::thread::sleep(std::time::Duration::from_millis(25)),
            }
        }
        None
    }
}

/// The computation tag: a stable digest of everything that determines
/// the report besides the target itself.
pub fn tag_for(command: &str, args: &std::collections::BTreeMap<String, String>, guards: &crate::report::Guards) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    for (k, v) in args {
        h.update([0u8]);
        h.update(k.as_bytes());
        h.update([1u8]);
        h.update(v.as_bytes());
    }
    h.update(guards.max_ring_order.to_le_bytes());
    h.update(guards.max_module_order.to_le_bytes());
    let digest = h.finalize();
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}
