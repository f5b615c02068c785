//! On-disk result cache: one JSON table per (canonical hash, theory, ring),
//! written with atomic replacement so concurrent readers never see partial
//! files.

use std::path::{Path, PathBuf};

use crate::table::BigradedTable;

pub const CACHE_ENV: &str = "TORKH_CACHE";

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    /// Explicit directory wins over the TORKH_CACHE environment variable.
    pub fn resolve(explicit: Option<&Path>) -> Self {
        let dir = explicit
            .map(|p| p.to_path_buf())
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        Cache { dir }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<BigradedTable> {
        let path = self.path_for(key)?;
        let data = std::fs::read_to_string(path).ok()?;
        BigradedTable::from_json(&data).ok()
    }

    pub fn put(&self, key: &str, table: &BigradedTable) {
        let Some(path) = self.path_for(key) else {
            return;
        };
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if std::fs::write(&tmp, table.to_json()).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use crate::table::Group;

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("torkh-cache-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = Cache::resolve(Some(&dir));
        let mut t = BigradedTable::new(RingSpec::Z);
        t.insert(3, 9, Group { free: 1, torsion: vec![] });
        assert!(cache.get("k1").is_none());
        cache.put("k1", &t);
        assert_eq!(cache.get("k1"), Some(t));
        let _ = std::fs::remove_dir_all(&dir);
    }
}
