//! Naive cube of resolutions over the Frobenius algebra R[X]/(X² − hX − t):
//! Khovanov (h = t = 0), Lee (t = 1), Bar-Natan (h = 1). Materializes all
//! 2^c vertices, so it is gated by a crossing limit; it serves as the oracle
//! for the scanning engine.

use std::collections::BTreeMap;

use crate::complex::BigradedComplex;
use crate::links::{EdgeId, LinkDiagram};
use crate::ring::Coeff;

/// Default crossing cap for the naive cube.
pub const NAIVE_LIMIT: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    TooManyCrossings { count: usize, limit: usize },
    ResourceLimit { max_generators: usize, reached: usize },
    InvalidInput(String),
}

impl std::fmt::Display for EngineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EngineError::TooManyCrossings { count, limit } => write!(
                f,
                "diagram has {count} crossings, naive cube limit is {limit}; use the scanning engine"
            ),
            EngineError::ResourceLimit { max_generators, reached } => write!(
                f,
                "scan exceeded the generator budget ({reached} > {max_generators})"
            ),
            EngineError::InvalidInput(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for EngineError {}

/// Circles of one full resolution, as a map edge → circle index plus the
/// number of circles. Crossing-free loops occupy the trailing indices.
pub fn resolution_circles(diag: &LinkDiagram, vertex: &[u8]) -> (BTreeMap<EdgeId, usize>, usize) {
    let edges = diag.edges();
    let index: BTreeMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (ci, c) in diag.crossings.iter().enumerate() {
        for (a, b) in c.smoothing(vertex[ci]) {
            let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut map = BTreeMap::new();
    for (i, &e) in edges.iter().enumerate() {
        let r = find(&mut parent, i);
        let id = match roots.iter().position(|&x| x == r) {
            Some(p) => p,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        map.insert(e, id);
    }
    (map, roots.len() + diag.free_loops)
}

/// Full cube of resolutions. Generators are labelings of the circles of each
/// vertex by {1, X}; gradings follow h = |v| − n₋, q = deg + |v| + n₊ − 2n₋.
pub fn khovanov_cube_ht<R: Coeff>(
    diag: &LinkDiagram,
    h_def: i64,
    t_def: i64,
    limit: usize,
) -> Result<CubeComplex<R>, EngineError> {
    let c = diag.crossing_count();
    if c > limit {
        return Err(EngineError::TooManyCrossings { count: c, limit });
    }
    if diag.free_loops > 0 {
        return Err(EngineError::InvalidInput(
            "strip free loops before building the raw cube; see cube_ht".into(),
        ));
    }
    let (n_pos, n_neg) = diag.signed_crossing_counts();
    let (n_pos, n_neg) = (n_pos as i64, n_neg as i64);

    let nv = 1usize << c;
    let mut circle_maps = Vec::with_capacity(nv);
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut total = 0usize;
    for v in 0..nv {
        let vertex: Vec<u8> = (0..c).map(|j| ((v >> j) & 1) as u8).collect();
        let (map, k) = resolution_circles(diag, &vertex);
        offsets.push(total);
        total += 1usize << k;
        circle_maps.push((map, k));
    }
    offsets.push(total);

    let mut gens = Vec::with_capacity(total);
    for v in 0..nv {
        let w = (v as u32).count_ones() as i64;
        let k = circle_maps[v].1;
        let h = w - n_neg;
        for label in 0..(1usize << k) {
            // label bit 1 = X (degree −1), bit 0 = 1 (degree +1)
            let xs = (label as u32).count_ones() as i64;
            let deg = (k as i64 - xs) - xs;
            let q = deg + w + n_pos - 2 * n_neg;
            gens.push((h, q));
        }
    }

    let hh = R::from_i64(h_def);
    let tt = R::from_i64(t_def);
    let mut d: Vec<Vec<(usize, R)>> = vec![Vec::new(); total];

    for v in 0..nv {
        let (ref cmap, k) = circle_maps[v];
        for j in 0..c {
            if (v >> j) & 1 == 1 {
                continue;
            }
            let v2 = v | (1 << j);
            let (ref cmap2, k2) = circle_maps[v2];
            let sign_pos = ((v as u32) & ((1u32 << j) - 1)).count_ones();
            let sgn = if sign_pos % 2 == 0 { R::one() } else { R::one().neg() };

            // correspondence of unaffected circles: match via any shared edge
            let slots = diag.crossings[j].slots;
            let aff_v: Vec<usize> = {
                let mut x: Vec<usize> = slots.iter().map(|e| cmap[e]).collect();
                x.sort_unstable();
                x.dedup();
                x
            };
            let aff_v2: Vec<usize> = {
                let mut x: Vec<usize> = slots.iter().map(|e| cmap2[e]).collect();
                x.sort_unstable();
                x.dedup();
                x
            };
            // map circle of v2 -> circle of v for unaffected ones
            let mut back = vec![usize::MAX; k2];
            for (&e, &c2) in cmap2.iter() {
                if back[c2] == usize::MAX && !aff_v2.contains(&c2) {
                    back[c2] = cmap[&e];
                }
            }
            let merge = aff_v.len() == 2;
            if merge {
                debug_assert_eq!(aff_v2.len(), 1);
            } else {
                debug_assert_eq!(aff_v.len(), 1);
                debug_assert_eq!(aff_v2.len(), 2, "saddle must merge or split");
            }

            for label in 0..(1usize << k) {
                let src = offsets[v] + label;
                let lab_of = |ci: usize| (label >> ci) & 1;
                // build target labels
                let mut base2 = 0usize;
                for c2 in 0..k2 {
                    if back[c2] != usize::MAX && lab_of(back[c2]) == 1 {
                        base2 |= 1 << c2;
                    }
                }
                // free loops keep their labels: they sit past the edge-borne
                // circles in both vertices and are never affected
                if merge {
                    let (a, b) = (lab_of(aff_v[0]), lab_of(aff_v[1]));
                    let tc = aff_v2[0];
                    // m(1,1)=1; m(1,X)=m(X,1)=X; m(X,X)=t·1+h·X
                    let mut push = |xbit: usize, coeff: R| {
                        if coeff.is_zero() {
                            return;
                        }
                        let tgt = offsets[v2] + (base2 | (xbit << tc));
                        d[src].push((tgt, sgn.mul(&coeff)));
                    };
                    match (a, b) {
                        (0, 0) => push(0, R::one()),
                        (0, 1) | (1, 0) => push(1, R::one()),
                        (1, 1) => {
                            push(0, tt.clone());
                            push(1, hh.clone());
                        }
                        _ => unreachable!(),
                    }
                } else {
                    let a = lab_of(aff_v[0]);
                    let (t1, t2) = (aff_v2[0], aff_v2[1]);
                    let mut push = |x1: usize, x2: usize, coeff: R| {
                        if coeff.is_zero() {
                            return;
                        }
                        let tgt = offsets[v2] + (base2 | (x1 << t1) | (x2 << t2));
                        d[src].push((tgt, sgn.mul(&coeff)));
                    };
                    if a == 0 {
                        // Δ(1) = 1⊗X + X⊗1 − h·1⊗1
                        push(0, 1, R::one());
                        push(1, 0, R::one());
                        push(0, 0, hh.neg());
                    } else {
                        // Δ(X) = X⊗X + t·1⊗1
                        push(1, 1, R::one());
                        push(0, 0, tt.clone());
                    }
                }
            }
        }
    }

    Ok(CubeComplex { complex: BigradedComplex { gens, d } })
}

/// A materialized cube complex.
pub struct CubeComplex<R: Coeff> {
    pub complex: BigradedComplex<R>,
}

/// Standard Khovanov cube (h = t = 0). Diagrams with free loops are handled
/// by tensoring each loop as two shifted copies.
pub fn khovanov_cube<R: Coeff>(
    diag: &LinkDiagram,
    limit: usize,
) -> Result<BigradedComplex<R>, EngineError> {
    cube_ht(diag, 0, 0, limit)
}

/// Cube for the deformed theories; free loops are folded in by the
/// (q ± 1) tensor splitting.
pub fn cube_ht<R: Coeff>(
    diag: &LinkDiagram,
    h_def: i64,
    t_def: i64,
    limit: usize,
) -> Result<BigradedComplex<R>, EngineError> {
    let mut stripped = diag.clone();
    let loops = stripped.free_loops;
    stripped.free_loops = 0;
    let base = khovanov_cube_ht::<R>(&stripped, h_def, t_def, limit)?.complex;
    Ok(tensor_unknots(base, loops))
}

/// Tensor with (q{+1} ⊕ q{−1})^{⊗loops}: every free loop doubles the complex.
fn tensor_unknots<R: Coeff>(cx: BigradedComplex<R>, loops: usize) -> BigradedComplex<R> {
    let mut cx = cx;
    for _ in 0..loops {
        let n = cx.len();
        let mut gens = Vec::with_capacity(2 * n);
        let mut d = Vec::with_capacity(2 * n);
        for &(h, q) in &cx.gens {
            gens.push((h, q + 1));
        }
        for &(h, q) in &cx.gens {
            gens.push((h, q - 1));
        }
        for outs in &cx.d {
            d.push(outs.clone());
        }
        for outs in &cx.d {
            d.push(outs.iter().map(|(j, v)| (j + n, v.clone())).collect::<Vec<_>>());
        }
        cx = BigradedComplex { gens, d };
    }
    cx
}
