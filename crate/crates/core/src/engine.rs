//! High-level entry points tying diagrams, the scanning engine, homology and
//! the cache together.

use crate::cache::Cache;
use crate::complex::{homology_field, homology_z};
use crate::cube::{khovanov_cube, EngineError, NAIVE_LIMIT};
use crate::links::LinkDiagram;
use crate::ring::RingSpec;
use crate::scan::{scan_complex, ScanOptions, Theory};
use crate::table::BigradedTable;
use crate::with_ring;

/// Khovanov homology of a diagram over the chosen ring, through the scanning
/// engine, consulting and filling the cache.
pub fn kh_table(
    diag: &LinkDiagram,
    ring: RingSpec,
    opts: &ScanOptions,
    cache: &Cache,
) -> Result<BigradedTable, EngineError> {
    let key = format!("{}-kh-{}", diag.canonical_hash(), ring.name());
    if let Some(t) = cache.get(&key) {
        return Ok(t);
    }
    let table = match ring {
        RingSpec::Z => {
            let res = scan_complex::<crate::ring::ZZ>(diag, Theory::Khovanov, &[], opts)?;
            homology_z(&res.complex)
        }
        _ => with_ring!(ring, R, {
            let res = scan_complex::<R>(diag, Theory::Khovanov, &[], opts)?;
            homology_field(&res.complex, ring)
        }),
    };
    cache.put(&key, &table);
    Ok(table)
}

/// Same bigraded table through the naive cube; the oracle route.
pub fn kh_table_cube(
    diag: &LinkDiagram,
    ring: RingSpec,
    limit: usize,
) -> Result<BigradedTable, EngineError> {
    match ring {
        RingSpec::Z => {
            let cx = khovanov_cube::<crate::ring::ZZ>(diag, limit)?;
            Ok(homology_z(&cx))
        }
        RingSpec::Q => {
            // integer entries; fraction-free ranks give the Q-dimensions
            let cx = khovanov_cube::<crate::ring::ZZ>(diag, limit)?;
            Ok(crate::complex::homology_q_ranks(&cx))
        }
        _ => with_ring!(ring, R, {
            let cx = khovanov_cube::<R>(diag, limit)?;
            Ok(homology_field(&cx, ring))
        }),
    }
}

pub fn default_naive_limit() -> usize {
    NAIVE_LIMIT
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::links::{braid_closure, torus_braid};

    #[test]
    fn cache_hits_are_identical(){
        let dir = std::env::temp_dir().join(format!("torkh-engine-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let cache = Cache::resolve(Some(&dir));
        let d = braid_closure(&torus_braid(3, 2).unwrap());
        let t1 = kh_table(&d, RingSpec::Z, &ScanOptions::default(), &cache).unwrap();
        let t2 = kh_table(&d, RingSpec::Z, &ScanOptions::default(), &cache).unwrap();
        assert_eq!(t1.to_json(), t2.to_json());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn scan_and_cube_agree_through_facade() {
        let d = braid_closure(&torus_braid(3, 3).unwrap());
        for ring in [RingSpec::Z, RingSpec::Q, RingSpec::Fp(2), RingSpec::Fp(3)] {
            let a = kh_table(&d, ring, &ScanOptions::default(), &Cache::disabled()).unwrap();
            let b = kh_table_cube(&d, ring, 14).unwrap();
            assert_eq!(a, b, "{ring}");
        }
    }
}
