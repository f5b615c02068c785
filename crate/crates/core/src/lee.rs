//! Filtered Lee / Bar-Natan theory: canonical cycles, the quantum filtration
//! of homology, associated graded dimensions, and s-invariants of oriented
//! links.

use std::collections::BTreeMap;

use crate::complex::BigradedComplex;
use crate::cube::{resolution_circles, EngineError};
use crate::links::LinkDiagram;
use crate::ring::{Coeff, RingSpec};
use crate::scan::{scan_complex, Label, ScanOptions, ScanResult, Theory, TrackedSpec};
use crate::snf::rank_dense;
use crate::table::FiltrationTable;
use crate::with_ring;

/// Scan-reduced filtered Lee complex; requires characteristic ≠ 2.
pub fn lee_complex<R: Coeff>(
    diag: &LinkDiagram,
    opts: &ScanOptions,
) -> Result<BigradedComplex<R>, EngineError> {
    if R::characteristic() == 2 {
        return Err(EngineError::InvalidInput(
            "the Lee deformation degenerates in characteristic 2; use barnatan_complex".into(),
        ));
    }
    Ok(scan_complex::<R>(diag, Theory::Lee, &[], opts)?.complex)
}

/// Scan-reduced filtered Bar-Natan complex; the characteristic-2 replacement
/// for the Lee theory.
pub fn barnatan_complex<R: Coeff>(
    diag: &LinkDiagram,
    opts: &ScanOptions,
) -> Result<BigradedComplex<R>, EngineError> {
    if R::characteristic() != 2 {
        return Err(EngineError::InvalidInput(
            "barnatan_complex expects characteristic 2".into(),
        ));
    }
    Ok(scan_complex::<R>(diag, Theory::BarNatan, &[], opts)?.complex)
}

/// The canonical-cycle data for the orientation that reverses the given
/// components: the oriented-resolution vertex and a consistent idempotent
/// label per resolution circle.
///
/// Labels are a proper two-coloring of the circle adjacency graph (adjacent
/// circles must carry opposite idempotents for the cycle condition); each
/// coloring component is seeded from the circle containing its least edge id,
/// which receives A when that edge's link component keeps its orientation.
pub fn canonical_cycle_spec(
    diag: &LinkDiagram,
    reversed: &[usize],
) -> Result<TrackedSpec, String> {
    let vertex = diag.oriented_vertex(reversed);
    let (edge_circle, _) = resolution_circles(diag, &vertex);
    let n_circles = edge_circle.values().copied().max().map_or(0, |m| m + 1);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n_circles];
    for (ci, c) in diag.crossings.iter().enumerate() {
        let pairs = c.smoothing(vertex[ci]);
        let c1 = edge_circle[&pairs[0].0];
        let c2 = edge_circle[&pairs[1].0];
        if c1 == c2 {
            return Err(format!(
                "crossing {ci} touches one resolution circle twice; diagram is not planar-consistent"
            ));
        }
        adj[c1].push(c2);
        adj[c2].push(c1);
    }
    // circle -> least edge on it
    let mut least_edge = vec![u32::MAX; n_circles];
    for (&e, &c) in &edge_circle {
        least_edge[c] = least_edge[c].min(e);
    }
    let link_comp = diag.edge_component();

    let mut color: Vec<Option<Label>> = vec![None; n_circles];
    // coloring components, seeded in order of least edge id
    let mut order: Vec<usize> = (0..n_circles).collect();
    order.sort_by_key(|&c| least_edge[c]);
    for &seed in &order {
        if color[seed].is_some() {
            continue;
        }
        let e = least_edge[seed];
        let seed_label = if reversed.contains(&link_comp[&e]) { Label::B } else { Label::A };
        color[seed] = Some(seed_label);
        let mut queue = std::collections::VecDeque::from([seed]);
        while let Some(c) = queue.pop_front() {
            let cl = color[c].unwrap();
            let opposite = match cl {
                Label::A => Label::B,
                Label::B => Label::A,
            };
            for &n in &adj[c] {
                match color[n] {
                    None => {
                        color[n] = Some(opposite);
                        queue.push_back(n);
                    }
                    Some(l) if l == cl => {
                        return Err("resolution adjacency graph is not bipartite".into());
                    }
                    _ => {}
                }
            }
        }
    }
    let edge_labels: BTreeMap<u32, Label> =
        edge_circle.iter().map(|(&e, &c)| (e, color[c].unwrap())).collect();

    let n_edge_comps = diag.components().iter().filter(|c| !c.is_empty()).count();
    let loop_labels: Vec<Label> = (0..diag.free_loops)
        .map(|i| {
            if reversed.contains(&(n_edge_comps + i)) {
                Label::B
            } else {
                Label::A
            }
        })
        .collect();

    Ok(TrackedSpec { choices: vertex, edge_labels, loop_labels })
}

/// Quantum filtration of the homology of a filtered complex over a field:
/// dim F_j H^h = dim(Z^h ∩ F_j) − dim(B^h ∩ F_j), by exact rank computations.
pub fn filtration_table<R: Coeff>(cx: &BigradedComplex<R>) -> FiltrationTable {
    assert!(R::is_field());
    let mut rows = BTreeMap::new();
    let Some((lo, hi)) = cx.h_range() else {
        return FiltrationTable { rows };
    };
    for h in lo..=hi {
        let (src, _, d_out) = cx.block(h);
        let (prev, cur, d_in) = cx.block(h - 1);
        debug_assert_eq!(cur, src);
        let mut levels: Vec<i64> = src.iter().map(|&i| cx.gens[i].1).collect();
        levels.sort_unstable();
        levels.dedup();
        if levels.is_empty() {
            continue;
        }
        // columns of d_in as vectors over the h-level basis
        let b_cols: Vec<Vec<R>> = (0..prev.len())
            .map(|j| (0..src.len()).map(|i| d_in[i][j].clone()).collect())
            .collect();
        let rank_b = rank_dense(transpose_cols(&b_cols, src.len()));

        let mut out_levels = Vec::new();
        for &j in &levels {
            let sel: Vec<usize> =
                (0..src.len()).filter(|&i| cx.gens[src[i]].1 >= j).collect();
            let dim_fj = sel.len();
            // rank of d_out restricted to the selected columns
            let sub: Vec<Vec<R>> = d_out
                .iter()
                .map(|row| sel.iter().map(|&i| row[i].clone()).collect())
                .collect();
            let rank_out = rank_dense(sub);
            let z_dim = dim_fj - rank_out;
            // dim(B ∩ F_j) = rank(B) + dim F_j − dim(B + F_j)
            let fj_cols: Vec<Vec<R>> = sel
                .iter()
                .map(|&i| {
                    let mut v = vec![R::zero(); src.len()];
                    v[i] = R::one();
                    v
                })
                .collect();
            let mut joint = b_cols.clone();
            joint.extend(fj_cols);
            let rank_joint = rank_dense(transpose_cols(&joint, src.len()));
            let b_cap = rank_b + dim_fj - rank_joint;
            out_levels.push((j, z_dim - b_cap));
        }
        // drop trailing zero levels but keep the weakly-decreasing profile
        while out_levels.last().is_some_and(|&(_, d)| d == 0) {
            out_levels.pop();
        }
        if !out_levels.is_empty() {
            rows.insert(h, out_levels);
        }
    }
    FiltrationTable { rows }
}

fn transpose_cols<R: Coeff>(cols: &[Vec<R>], height: usize) -> Vec<Vec<R>> {
    let mut m = vec![vec![R::zero(); cols.len()]; height];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m[i][j] = v.clone();
        }
    }
    m
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FiltDegree {
    Finite(i64),
    /// The class is a boundary.
    Infinity,
}

/// Largest j with `chain` ∈ F_j C + im(d), found by rank tests from the top
/// level down. The chain must be a cycle concentrated in one homological
/// degree; boundaries yield the +∞ sentinel.
pub fn class_filtration_degree<R: Coeff>(
    cx: &BigradedComplex<R>,
    chain: &[(usize, R)],
) -> Result<FiltDegree, String> {
    assert!(R::is_field());
    if chain.is_empty() {
        return Err("zero chain has no filtration degree".into());
    }
    let h = cx.gens[chain[0].0].0;
    if chain.iter().any(|&(i, _)| cx.gens[i].0 != h) {
        return Err("chain is not homologically homogeneous".into());
    }
    // cycle check
    let mut image: BTreeMap<usize, R> = BTreeMap::new();
    for (i, v) in chain {
        for (j, w) in &cx.d[*i] {
            let e = image.entry(*j).or_insert_with(R::zero);
            *e = e.add(&v.mul(w));
        }
    }
    if image.values().any(|v| !v.is_zero()) {
        return Err("chain is not a cycle".into());
    }

    let (prev, cur, d_in) = cx.block(h - 1);
    let pos: BTreeMap<usize, usize> = cur.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let b_cols: Vec<Vec<R>> = (0..prev.len())
        .map(|j| (0..cur.len()).map(|i| d_in[i][j].clone()).collect())
        .collect();
    let chain_col: Vec<R> = {
        let mut v = vec![R::zero(); cur.len()];
        for (i, c) in chain {
            v[pos[i]] = c.clone();
        }
        v
    };
    let rank_b = rank_dense(transpose_cols(&b_cols, cur.len()));
    {
        let mut with_chain = b_cols.clone();
        with_chain.push(chain_col.clone());
        if rank_dense(transpose_cols(&with_chain, cur.len())) == rank_b {
            return Ok(FiltDegree::Infinity);
        }
    }
    let mut levels: Vec<i64> = cur.iter().map(|&i| cx.gens[i].1).collect();
    levels.sort_unstable();
    levels.dedup();
    for &j in levels.iter().rev() {
        let sel: Vec<usize> = (0..cur.len()).filter(|&i| cx.gens[cur[i]].1 >= j).collect();
        let mut base = b_cols.clone();
        for &i in &sel {
            let mut v = vec![R::zero(); cur.len()];
            v[i] = R::one();
            base.push(v);
        }
        let r0 = rank_dense(transpose_cols(&base, cur.len()));
        base.push(chain_col.clone());
        let r1 = rank_dense(transpose_cols(&base, cur.len()));
        if r0 == r1 {
            return Ok(FiltDegree::Finite(j));
        }
    }
    Err("cycle not representable at any level".into())
}

/// Scan the appropriate deformed theory with canonical cycles tracked.
pub fn deformed_scan_with_cycles<R: Coeff>(
    diag: &LinkDiagram,
    reversals: &[Vec<usize>],
    opts: &ScanOptions,
) -> Result<ScanResult<R>, EngineError> {
    let theory = if R::characteristic() == 2 { Theory::BarNatan } else { Theory::Lee };
    let specs: Vec<TrackedSpec> = reversals
        .iter()
        .map(|rev| canonical_cycle_spec(diag, rev).map_err(EngineError::InvalidInput))
        .collect::<Result<_, _>>()?;
    scan_complex::<R>(diag, theory, &specs, opts)
}

/// s-invariant of the oriented link `diag` with the components in `reversed`
/// reversed: the filtration degree of the canonical class in the reoriented
/// filtered complex, plus one. Over characteristic 2 the Bar-Natan theory is
/// used (reported as-is; the char-2 normalization is conjectural).
pub fn s_invariant(
    diag: &LinkDiagram,
    reversed: &[usize],
    ring: RingSpec,
    opts: &ScanOptions,
) -> Result<i64, String> {
    if !ring.is_field() {
        return Err("s-invariant needs field coefficients".into());
    }
    let (_, lk) = diag.components_and_linking();
    let (dh, dq) = crate::links::orientation_shift(&lk, reversed);
    with_ring!(ring, R, {
        let res = deformed_scan_with_cycles::<R>(diag, &[reversed.to_vec()], opts)
            .map_err(|e| e.to_string())?;
        let chain = &res.chains[0];
        if chain.is_empty() {
            return Err("canonical cycle vanished in the reduced complex".into());
        }
        let hdeg = res.complex.gens[chain[0].0].0;
        if hdeg != dh {
            return Err(format!(
                "canonical class landed at h = {hdeg}, expected {dh}"
            ));
        }
        match class_filtration_degree(&res.complex, chain).map_err(|e| e.to_string())? {
            FiltDegree::Infinity => Err("canonical class is a boundary".into()),
            FiltDegree::Finite(j) => Ok(j - dq + 1),
        }
    })
}

/// Canonical Lee/Bar-Natan cycle inside the naive cube, as a sparse vector
/// over the cube generators. Independent of the scanning route; used as an
/// oracle for the tracked-cycle machinery.
pub fn canonical_cycle_cube<R: Coeff>(
    diag: &LinkDiagram,
    reversed: &[usize],
) -> Result<(Vec<u8>, Vec<(usize, R)>), String> {
    if diag.free_loops > 0 {
        return Err("cube cycle oracle does not support free loops".into());
    }
    let spec = canonical_cycle_spec(diag, reversed)?;
    let vertex = spec.choices.clone();
    // generator offsets mirror cube_ht's layout
    let c = diag.crossing_count();
    let mut offset = 0usize;
    let mut target_offset = None;
    let mut target_k = 0usize;
    let mut vid = 0usize;
    for v in 0..(1usize << c) {
        let vv: Vec<u8> = (0..c).map(|j| ((v >> j) & 1) as u8).collect();
        let (_, k) = resolution_circles(diag, &vv);
        if vv == vertex {
            target_offset = Some(offset);
            target_k = k;
            vid = v;
        }
        offset += 1usize << k;
    }
    let _ = vid;
    let base = target_offset.expect("vertex enumerated");
    let (edge_circle, k) = resolution_circles(diag, &vertex);
    assert_eq!(k, target_k);
    // circle labels
    let mut labels = vec![Label::A; k];
    for (&e, &ci) in &edge_circle {
        labels[ci] = spec.edge_labels[&e];
    }
    // a = (X + 1)/2, b = (X − 1)/2 over char ≠ 2; X, 1 + X over char 2.
    // Expand the tensor product into {1, X} labelings (bit = X).
    let char2 = R::characteristic() == 2;
    let half = if char2 { R::one() } else { R::half().expect("invertible 2") };
    let mut chain: Vec<(usize, R)> = Vec::new();
    for mask in 0..(1usize << k) {
        let mut coeff = R::one();
        for (ci, &lab) in labels.iter().enumerate() {
            let is_x = (mask >> ci) & 1 == 1;
            let f = if char2 {
                // A = X, B = 1 + X
                match (lab, is_x) {
                    (Label::A, true) => R::one(),
                    (Label::A, false) => R::zero(),
                    (Label::B, _) => R::one(),
                }
            } else {
                match (lab, is_x) {
                    (Label::A, _) => half.clone(),
                    (Label::B, true) => half.clone(),
                    (Label::B, false) => half.neg(),
                }
            };
            coeff = coeff.mul(&f);
            if coeff.is_zero() {
                break;
            }
        }
        if !coeff.is_zero() {
            chain.push((base + mask, coeff));
        }
    }
    Ok((vertex, chain))
}
