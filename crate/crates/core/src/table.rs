//! Bigraded homology tables and their JSON form.
//!
//! The JSON schema is shared between computed homology and predicted tables
//! so the two can be diffed byte-for-byte:
//! `{"ring":"Z","groups":[{"h":0,"q":24,"free":1,"torsion":[]},...]}`
//! with groups sorted by (h, q).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::ring::RingSpec;

/// One bigraded group: free rank plus elementary divisors (> 1).
/// Over a field the `free` entry is the dimension and `torsion` is empty.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Group {
    pub free: usize,
    pub torsion: Vec<BigUint>,
}

/// Finitely supported map (h, q) → homology group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradedTable {
    pub ring: RingSpec,
    pub groups: BTreeMap<(i64, i64), Group>,
}

#[derive(Serialize, Deserialize)]
struct GroupRow {
    h: i64,
    q: i64,
    free: usize,
    torsion: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    ring: String,
    groups: Vec<GroupRow>,
}

impl BigradedTable {
    pub fn new(ring: RingSpec) -> Self {
        BigradedTable { ring, groups: BTreeMap::new() }
    }

    pub fn insert(&mut self, h: i64, q: i64, g: Group) {
        if g.free == 0 && g.torsion.is_empty() {
            return;
        }
        self.groups.insert((h, q), g);
    }

    pub fn add_free(&mut self, h: i64, q: i64, rank: usize) {
        if rank == 0 {
            return;
        }
        self.groups.entry((h, q)).or_default().free += rank;
    }

    pub fn group(&self, h: i64, q: i64) -> Group {
        self.groups.get(&(h, q)).cloned().unwrap_or_default()
    }

    /// Free rank (dimension, over a field) at (h, q).
    pub fn dim(&self, h: i64, q: i64) -> usize {
        self.groups.get(&(h, q)).map_or(0, |g| g.free)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn total_free(&self) -> usize {
        self.groups.values().map(|g| g.free).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }

    pub fn shift(&self, dh: i64, dq: i64) -> Self {
        let groups = self
            .groups
            .iter()
            .map(|(&(h, q), g)| ((h + dh, q + dq), g.clone()))
            .collect();
        BigradedTable { ring: self.ring, groups }
    }

    /// Σ free·t^h·q^q; meaningful for field coefficients.
    pub fn poincare(&self) -> Result<crate::poly::LaurentPoly2, String> {
        if self.ring == RingSpec::Z {
            return Err("poincare polynomial requires field coefficients".into());
        }
        let mut p = crate::poly::LaurentPoly2::zero();
        for (&(h, q), g) in &self.groups {
            p.add_term(h, q, &num_bigint::BigInt::from(g.free));
        }
        Ok(p)
    }

    /// Graded Euler characteristic Σ (−1)^h free·q^q as a pure q-polynomial.
    pub fn euler_characteristic(&self) -> crate::poly::LaurentPoly2 {
        let mut p = crate::poly::LaurentPoly2::zero();
        for (&(h, q), g) in &self.groups {
            let c = num_bigint::BigInt::from(g.free);
            let c = if h.rem_euclid(2) == 1 { -c } else { c };
            p.add_term(0, q, &c);
        }
        p
    }

    /// Per homological degree, the least q with a nonzero group.
    /// Absent keys mean +∞ (empty column).
    pub fn min_q_profile(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for &(h, q) in self.groups.keys() {
            out.entry(h).and_modify(|m: &mut i64| *m = (*m).min(q)).or_insert(q);
        }
        out
    }

    pub fn h_range(&self) -> Option<(i64, i64)> {
        let min = self.groups.keys().map(|k| k.0).min()?;
        let max = self.groups.keys().map(|k| k.0).max()?;
        Some((min, max))
    }

    pub fn to_json(&self) -> String {
        let repr = TableRepr {
            ring: self.ring.name(),
            groups: self
                .groups
                .iter()
                .map(|(&(h, q), g)| GroupRow {
                    h,
                    q,
                    free: g.free,
                    torsion: g.torsion.iter().map(|t| t.to_string()).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&repr).expect("table serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let repr: TableRepr = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let ring: RingSpec = repr.ring.parse()?;
        let mut groups = BTreeMap::new();
        for row in repr.groups {
            let torsion = row
                .torsion
                .iter()
                .map(|t| t.parse::<BigUint>().map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            groups.insert((row.h, row.q), Group { free: row.free, torsion });
        }
        Ok(BigradedTable { ring, groups })
    }

    /// Human-readable grid mirroring the paper-style layout: h across,
    /// q down (descending).
    pub fn render_grid(&self) -> String {
        if self.groups.is_empty() {
            return "(empty)\n".into();
        }
        let hs: Vec<i64> = {
            let (lo, hi) = self.h_range().unwrap();
            (lo..=hi).collect()
        };
        let mut qs: Vec<i64> = self.groups.keys().map(|k| k.1).collect();
        qs.sort_unstable();
        qs.dedup();
        qs.reverse();

        let cell = |h: i64, q: i64| -> String {
            match self.groups.get(&(h, q)) {
                None => String::new(),
                Some(g) => {
                    let mut parts = Vec::new();
                    if g.free > 0 {
                        parts.push(if g.free == 1 {
                            "Z".to_string()
                        } else {
                            format!("Z^{}", g.free)
                        });
                    }
                    for t in &g.torsion {
                        parts.push(format!("Z/{t}"));
                    }
                    let s = parts.join("+");
                    if self.ring == RingSpec::Z {
                        s
                    } else {
                        format!("{}", g.free)
                    }
                }
            }
        };

        let mut widths: Vec<usize> = hs
            .iter()
            .map(|&h| {
                qs.iter()
                    .map(|&q| cell(h, q).len())
                    .chain([format!("{h}").len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        for w in widths.iter_mut() {
            *w = (*w).max(1);
        }

        let qw = qs.iter().map(|q| format!("{q}").len()).max().unwrap_or(1).max(3);
        let mut out = String::new();
        out.push_str(&format!("{:>qw$} |", "q\\h"));
        for (i, &h) in hs.iter().enumerate() {
            out.push_str(&format!(" {:>w$}", h, w = widths[i]));
        }
        out.push('\n');
        for &q in &qs {
            out.push_str(&format!("{:>qw$} |", q));
            for (i, &h) in hs.iter().enumerate() {
                out.push_str(&format!(" {:>w$}", cell(h, q), w = widths[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("h,q,free,torsion\n");
        for (&(h, q), g) in &self.groups {
            let tor = g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";");
            out.push_str(&format!("{h},{q},{},{tor}\n", g.free));
        }
        out
    }
}

/// Quantum filtration data of a filtered homology: per homological degree,
/// the function j ↦ dim F_j together with its jumps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiltrationTable {
    /// Per h: pairs (q-level, dim F_q), q strictly increasing, dims weakly
    /// decreasing; levels are exactly the q-degrees where jumps can occur.
    pub rows: BTreeMap<i64, Vec<(i64, usize)>>,
}

impl FiltrationTable {
    /// Dimensions of the associated graded pieces, as a field-style table.
    pub fn gr_dimensions(&self) -> BigradedTable {
        let mut t = BigradedTable::new(RingSpec::Q);
        for (&h, levels) in &self.rows {
            for (i, &(q, dim_f)) in levels.iter().enumerate() {
                let next = if i + 1 < levels.len() { levels[i + 1].1 } else { 0 };
                if dim_f > next {
                    t.add_free(h, q, dim_f - next);
                }
            }
        }
        t
    }

    pub fn total_dim(&self, h: i64) -> usize {
        self.rows.get(&h).and_then(|l| l.first()).map_or(0, |&(_, d)| d)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|(&h, levels)| {
                serde_json::json!({
                    "h": h,
                    "levels": levels.iter().map(|&(q, d)| serde_json::json!({"q": q, "dim_F": d})).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::to_string(&rows).expect("filtration serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| e.to_string())?;
        let arr = v.as_array().ok_or("expected array")?;
        let mut rows = BTreeMap::new();
        for row in arr {
            let h = row["h"].as_i64().ok_or("missing h")?;
            let levels = row["levels"]
                .as_array()
                .ok_or("missing levels")?
                .iter()
                .map(|l| {
                    let q = l["q"].as_i64().ok_or("missing q")?;
                    let d = l["dim_F"].as_u64().ok_or("missing dim_F")? as usize;
                    Ok::<(i64, usize), String>((q, d))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.insert(h, levels);
        }
        Ok(FiltrationTable { rows })
    }
}
