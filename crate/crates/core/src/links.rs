//! Combinatorial link presentations: braid words, their closures, PD-style
//! diagrams, resolutions and the torus/D/E families.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::formulas::gcd;

pub type EdgeId = u32;

/// A braid word on `strands` strands; letter ±i is the Artin generator
/// σ_i^{±1}, 1 ≤ i < strands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, String> {
        if strands < 1 {
            return Err("braid needs at least one strand".into());
        }
        for &w in &letters {
            let a = w.unsigned_abs() as usize;
            if a < 1 || a >= strands {
                return Err(format!("letter {w} out of range for {strands} strands"));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Permutation of strand positions induced by the word (top to bottom).
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.strands).collect();
        for &w in &self.letters {
            let i = w.unsigned_abs() as usize - 1;
            pos.swap(i, i + 1);
        }
        // pos[j] = strand that ends at position j; invert to map start -> end
        let mut perm = vec![0; self.strands];
        for (end, &start) in pos.iter().enumerate() {
            perm[start] = end;
        }
        perm
    }

    pub fn mirror(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|w| -w).collect(),
        }
    }
}

/// (σ_1 ⋯ σ_{n−1})^m on n strands; the closure is the torus link T(n, m).
/// Negative m yields the mirror word, giving T(n, −|m|).
pub fn torus_braid(n: i64, m: i64) -> Result<BraidWord, String> {
    if n < 1 {
        return Err(format!("torus_braid: need n >= 1, got {n}"));
    }
    let mut letters = Vec::with_capacity((m.unsigned_abs() as usize) * (n as usize - 1).max(0));
    for _ in 0..m.abs() {
        for i in 1..n {
            letters.push(if m >= 0 { i as i32 } else { -(i as i32) });
        }
    }
    BraidWord::new(n as usize, letters)
}

/// (σ_1 ⋯ σ_{n−1})^m σ_1 ⋯ σ_i; closure is the link D^i_{n,m}.
pub fn dlink_braid(n: i64, m: i64, i: i64) -> Result<BraidWord, String> {
    if !(0..n).contains(&i) {
        return Err(format!("dlink_braid: need 0 <= i <= n-1, got i={i}, n={n}"));
    }
    if m < 0 {
        return Err("dlink_braid: need m >= 0".into());
    }
    let mut b = torus_braid(n, m)?;
    for k in 1..=i {
        b.letters.push(k as i32);
    }
    Ok(b)
}

/// One crossing of an oriented diagram.
///
/// `slots` lists the four incident edge ids in counterclockwise order with
/// slot 0 the incoming under-strand and slot 2 the outgoing under-strand.
/// The over-strand runs slot 1 → slot 3 on positive crossings and
/// slot 3 → slot 1 on negative ones. The 0-smoothing joins slot pairs
/// (0,3) and (1,2); the 1-smoothing joins (0,1) and (2,3).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Crossing {
    pub slots: [EdgeId; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> EdgeId {
        self.slots[0]
    }
    pub fn under_out(&self) -> EdgeId {
        self.slots[2]
    }
    pub fn over_in(&self) -> EdgeId {
        if self.sign > 0 {
            self.slots[1]
        } else {
            self.slots[3]
        }
    }
    pub fn over_out(&self) -> EdgeId {
        if self.sign > 0 {
            self.slots[3]
        } else {
            self.slots[1]
        }
    }

    /// Edge pairs joined by the given smoothing.
    pub fn smoothing(&self, choice: u8) -> [(EdgeId, EdgeId); 2] {
        let s = &self.slots;
        if choice == 0 {
            [(s[0], s[3]), (s[1], s[2])]
        } else {
            [(s[0], s[1]), (s[2], s[3])]
        }
    }

    /// The cube coordinate of the smoothing that respects orientations.
    pub fn oriented_choice(&self) -> u8 {
        if self.sign > 0 {
            0
        } else {
            1
        }
    }

    fn mirrored(&self) -> Crossing {
        let s = &self.slots;
        if self.sign > 0 {
            Crossing { slots: [s[1], s[2], s[3], s[0]], sign: -1 }
        } else {
            Crossing { slots: [s[3], s[0], s[1], s[2]], sign: 1 }
        }
    }
}

/// An oriented link diagram: crossings plus crossing-free loops.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
}

impl LinkDiagram {
    pub fn empty() -> Self {
        LinkDiagram { crossings: vec![], free_loops: 0 }
    }

    pub fn unknot() -> Self {
        LinkDiagram { crossings: vec![], free_loops: 1 }
    }

    pub fn unlink(k: usize) -> Self {
        LinkDiagram { crossings: vec![], free_loops: k }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn signed_crossing_counts(&self) -> (usize, usize) {
        let pos = self.crossings.iter().filter(|c| c.sign > 0).count();
        (pos, self.crossings.len() - pos)
    }

    /// Each edge id must appear exactly once as an incoming slot and once as
    /// an outgoing slot across all crossings.
    pub fn validate(&self) -> Result<(), String> {
        let mut inc: BTreeMap<EdgeId, usize> = BTreeMap::new();
        let mut out: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for c in &self.crossings {
            *inc.entry(c.under_in()).or_default() += 1;
            *inc.entry(c.over_in()).or_default() += 1;
            *out.entry(c.under_out()).or_default() += 1;
            *out.entry(c.over_out()).or_default() += 1;
        }
        if inc.len() != out.len() || inc.keys().ne(out.keys()) {
            return Err("edge sets of incoming and outgoing slots differ".into());
        }
        for (e, k) in &inc {
            if *k != 1 || out[e] != 1 {
                return Err(format!("edge {e} appears {k} times incoming, {} outgoing", out[e]));
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let mut es: Vec<EdgeId> = self.crossings.iter().flat_map(|c| c.slots).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    /// Components as sorted edge sets, ordered by least edge id; crossing-free
    /// loops come last. Labels are the indices into the returned list.
    pub fn components(&self) -> Vec<Vec<EdgeId>> {
        let mut next_out: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
        for c in &self.crossings {
            next_out.insert(c.under_in(), c.under_out());
            next_out.insert(c.over_in(), c.over_out());
        }
        let mut seen: BTreeMap<EdgeId, bool> = BTreeMap::new();
        let mut comps = Vec::new();
        for &start in next_out.keys() {
            if seen.get(&start).copied().unwrap_or(false) {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = start;
            loop {
                seen.insert(e, true);
                comp.push(e);
                e = next_out[&e];
                if e == start {
                    break;
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by_key(|c| c[0]);
        for _ in 0..self.free_loops {
            comps.push(Vec::new());
        }
        comps
    }

    /// Component label of each edge.
    pub fn edge_component(&self) -> BTreeMap<EdgeId, usize> {
        let mut map = BTreeMap::new();
        for (i, comp) in self.components().iter().enumerate() {
            for &e in comp {
                map.insert(e, i);
            }
        }
        map
    }

    /// Component count and the symmetric linking matrix
    /// lk(i,j) = half the signed crossing count between components i and j.
    pub fn components_and_linking(&self) -> (usize, Vec<Vec<i64>>) {
        let comps = self.components();
        let label = self.edge_component();
        let k = comps.len();
        let mut lk = vec![vec![0i64; k]; k];
        for c in &self.crossings {
            let a = label[&c.under_in()];
            let b = label[&c.over_in()];
            if a != b {
                lk[a][b] += c.sign as i64;
                lk[b][a] += c.sign as i64;
            }
        }
        for row in lk.iter_mut() {
            for v in row.iter_mut() {
                debug_assert!(*v % 2 == 0);
                *v /= 2;
            }
        }
        (k, lk)
    }

    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram {
            crossings: self.crossings.iter().map(|c| c.mirrored()).collect(),
            free_loops: self.free_loops,
        }
    }

    /// Reverse the orientation of the given components (by label).
    pub fn reverse_components(&self, reversed: &[usize]) -> LinkDiagram {
        let label = self.edge_component();
        let rev = |e: EdgeId| reversed.contains(&label[&e]);
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let ur = rev(c.under_in());
                let or = rev(c.over_in());
                let mut slots = c.slots;
                if ur {
                    slots.rotate_left(2);
                }
                let sign = if ur != or { -c.sign } else { c.sign };
                Crossing { slots, sign }
            })
            .collect();
        LinkDiagram { crossings, free_loops: self.free_loops }
    }

    /// Cube vertex of the resolution that respects the orientation obtained
    /// by reversing the given components, in this diagram's own coordinates.
    pub fn oriented_vertex(&self, reversed: &[usize]) -> Vec<u8> {
        let label = self.edge_component();
        self.crossings
            .iter()
            .map(|c| {
                let ur = reversed.contains(&label[&c.under_in()]);
                let or = reversed.contains(&label[&c.over_in()]);
                let sign = if ur != or { -c.sign } else { c.sign };
                if sign > 0 {
                    0
                } else {
                    1
                }
            })
            .collect()
    }

    /// Replace crossing `idx` by its `choice`-smoothing; components are
    /// recomputed and re-oriented (lowest edge id of each component keeps the
    /// direction it had before).
    pub fn resolve_crossing(&self, idx: usize, choice: u8) -> Result<LinkDiagram, String> {
        if idx >= self.crossings.len() {
            return Err(format!("resolve_crossing: no crossing {idx}"));
        }
        let mut crossings = self.crossings.clone();
        let removed = crossings.remove(idx);
        let mut free_loops = self.free_loops;

        let mut pairs = removed.smoothing(choice);
        for pi in 0..2 {
            let (a, b) = pairs[pi];
            if a == b {
                free_loops += 1;
                continue;
            }
            // merge b into a
            let keep = a.min(b);
            let drop = a.max(b);
            for c in crossings.iter_mut() {
                for s in c.slots.iter_mut() {
                    if *s == drop {
                        *s = keep;
                    }
                }
            }
            if pi == 0 {
                let (c, d) = pairs[1];
                pairs[1] = (
                    if c == drop { keep } else { c },
                    if d == drop { keep } else { d },
                );
            }
        }

        let mut out = LinkDiagram { crossings, free_loops };
        out.fix_orientations();
        out.validate()?;
        Ok(out)
    }

    /// Re-orient every component consistently. Needed after smoothings that
    /// join strands head-to-head, which leave edge-level directions
    /// incoherent. Each component is seeded from its lowest edge id,
    /// keeping that edge's stored direction when it still has one.
    fn fix_orientations(&mut self) {
        #[derive(Clone, Copy, PartialEq, Eq, Debug)]
        struct End {
            cr: usize,
            slot: usize,
        }
        let mut ends: BTreeMap<EdgeId, Vec<End>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for (si, &e) in c.slots.iter().enumerate() {
                ends.entry(e).or_default().push(End { cr: ci, slot: si });
            }
        }
        for (e, v) in &ends {
            debug_assert!(v.len() == 2, "edge {e} has {} ends", v.len());
        }

        let is_incoming = |c: &Crossing, slot: usize| -> bool {
            match slot {
                0 => true,
                2 => false,
                1 => c.sign > 0,
                3 => c.sign < 0,
                _ => unreachable!(),
            }
        };

        // Per crossing: does the traversal reverse the under / over strand?
        let mut under_flip = vec![false; self.crossings.len()];
        let mut over_flip = vec![false; self.crossings.len()];
        let mut visited: BTreeMap<EdgeId, bool> = BTreeMap::new();

        let edge_list: Vec<EdgeId> = ends.keys().copied().collect();
        for &start in &edge_list {
            if visited.get(&start).copied().unwrap_or(false) {
                continue;
            }
            // Arrival end of the seed edge: its incoming end if the stored
            // direction is coherent, else the lexicographically first end.
            let seed_ends = &ends[&start];
            let arrive0 = seed_ends
                .iter()
                .copied()
                .find(|&en| is_incoming(&self.crossings[en.cr], en.slot))
                .unwrap_or_else(|| {
                    let mut v = seed_ends.clone();
                    v.sort_by_key(|en| (en.cr, en.slot));
                    v[0]
                });
            let mut edge = start;
            let mut arrive = arrive0;
            loop {
                visited.insert(edge, true);
                // Pass through the crossing along this strand.
                let c = &self.crossings[arrive.cr];
                let exit_slot = match arrive.slot {
                    0 => 2,
                    2 => 0,
                    1 => 3,
                    3 => 1,
                    _ => unreachable!(),
                };
                if arrive.slot == 0 || arrive.slot == 2 {
                    // strand reversed iff we arrive at the out-slot
                    under_flip[arrive.cr] = arrive.slot == 2;
                } else {
                    let old_in = if c.sign > 0 { 1 } else { 3 };
                    over_flip[arrive.cr] = arrive.slot != old_in;
                }
                let next_edge = c.slots[exit_slot];
                let exit_end = End { cr: arrive.cr, slot: exit_slot };
                let far = ends[&next_edge]
                    .iter()
                    .copied()
                    .find(|&en| en != exit_end)
                    .expect("two distinct ends");
                edge = next_edge;
                arrive = far;
                if edge == start && arrive == arrive0 {
                    break;
                }
            }
        }

        for (ci, c) in self.crossings.iter_mut().enumerate() {
            if under_flip[ci] {
                c.slots.rotate_left(2);
            }
            if under_flip[ci] != over_flip[ci] {
                c.sign = -c.sign;
            }
        }
    }

    /// Deterministic hash, invariant under edge relabeling that preserves
    /// the combinatorial structure.
    pub fn canonical_hash(&self) -> String {
        let ser = self.canonical_serialization();
        // FNV-1a, 128-bit
        let mut h: u128 = 0x6c62272e07bb014262b821756295c58d;
        const PRIME: u128 = 0x0000000001000000000000000000013b;
        for b in ser.as_bytes() {
            h ^= *b as u128;
            h = h.wrapping_mul(PRIME);
        }
        format!("{h:032x}")
    }

    /// Lexicographically minimal serialization over all BFS relabelings.
    fn canonical_serialization(&self) -> String {
        if self.crossings.is_empty() {
            return format!("L{};", self.free_loops);
        }
        let mut best: Option<String> = None;
        // edge -> (crossing, slot) incidence
        let mut incidence: BTreeMap<EdgeId, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for (si, &e) in c.slots.iter().enumerate() {
                incidence.entry(e).or_default().push((ci, si));
            }
        }
        for seed in 0..self.crossings.len() {
            let mut cross_order: Vec<usize> = Vec::new();
            let mut cross_rank = vec![usize::MAX; self.crossings.len()];
            let mut edge_rank: BTreeMap<EdgeId, usize> = BTreeMap::new();
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(seed);
            cross_rank[seed] = 0;
            cross_order.push(seed);
            while let Some(ci) = queue.pop_front() {
                for &e in &self.crossings[ci].slots {
                    let n = edge_rank.len();
                    edge_rank.entry(e).or_insert(n);
                    for &(cj, _) in &incidence[&e] {
                        if cross_rank[cj] == usize::MAX {
                            cross_rank[cj] = cross_order.len();
                            cross_order.push(cj);
                            queue.push_back(cj);
                        }
                    }
                }
            }
            // disconnected diagrams: append remaining crossings in index order
            for ci in 0..self.crossings.len() {
                if cross_rank[ci] == usize::MAX {
                    cross_rank[ci] = cross_order.len();
                    cross_order.push(ci);
                    for &e in &self.crossings[ci].slots {
                        let n = edge_rank.len();
                        edge_rank.entry(e).or_insert(n);
                    }
                }
            }
            let mut s = format!("L{};", self.free_loops);
            for &ci in &cross_order {
                let c = &self.crossings[ci];
                let _ = write!(
                    s,
                    "[{},{},{},{};{}]",
                    edge_rank[&c.slots[0]],
                    edge_rank[&c.slots[1]],
                    edge_rank[&c.slots[2]],
                    edge_rank[&c.slots[3]],
                    if c.sign > 0 { '+' } else { '-' }
                );
            }
            if best.as_ref().map_or(true, |b| s < *b) {
                best = Some(s);
            }
        }
        best.unwrap()
    }
}

/// Trace closure of a braid word, producing a PD-style diagram. Top edges of
/// strand j get edge id j, so component labels follow least strand index.
pub fn braid_closure(b: &BraidWord) -> LinkDiagram {
    let n = b.strands;
    let mut cur: Vec<EdgeId> = (0..n as EdgeId).collect();
    let mut next_edge = n as EdgeId;
    let mut crossings = Vec::with_capacity(b.letters.len());
    for &w in &b.letters {
        let i = w.unsigned_abs() as usize - 1;
        let a = cur[i];
        let bb = cur[i + 1];
        let l = next_edge;
        let r = next_edge + 1;
        next_edge += 2;
        if w > 0 {
            crossings.push(Crossing { slots: [bb, a, l, r], sign: 1 });
        } else {
            crossings.push(Crossing { slots: [a, l, r, bb], sign: -1 });
        }
        cur[i] = l;
        cur[i + 1] = r;
    }
    let mut free_loops = 0;
    for j in 0..n {
        let top = j as EdgeId;
        let bot = cur[j];
        if top == bot {
            free_loops += 1;
            continue;
        }
        for c in crossings.iter_mut() {
            for s in c.slots.iter_mut() {
                if *s == bot {
                    *s = top;
                }
            }
        }
    }
    LinkDiagram { crossings, free_loops }
}

/// The diagram of E^i_{n,m}: 1-resolution of the last crossing of the closure
/// of dlink_braid(n, m, i+1). Not isotopy-simplified.
pub fn e_link_diagram(n: i64, m: i64, i: i64) -> Result<LinkDiagram, String> {
    if !(m == n || m == n - 1) {
        return Err(format!("e_link_diagram: need m in {{n-1, n}}, got n={n}, m={m}"));
    }
    if !(0..=n - 2).contains(&i) {
        return Err(format!("e_link_diagram: need 0 <= i <= n-2, got i={i}"));
    }
    let b = dlink_braid(n, m, i + 1)?;
    let diag = braid_closure(&b);
    diag.resolve_crossing(diag.crossings.len() - 1, 1)
}

/// Bidegree shift (Δh, Δq) = (2λ, 6λ) relating the Lee/Khovanov data of the
/// reoriented link to the original, λ = Σ_{i∈rev, j∉rev} lk(i, j).
pub fn orientation_shift(linking: &[Vec<i64>], reversed: &[usize]) -> (i64, i64) {
    let k = linking.len();
    let mut lambda = 0;
    for i in 0..k {
        if !reversed.contains(&i) {
            continue;
        }
        for j in 0..k {
            if !reversed.contains(&j) {
                lambda += linking[i][j];
            }
        }
    }
    (2 * lambda, 6 * lambda)
}

/// Parsed link specification grammar:
/// `braid:<n>:<w1>,<w2>,...`, `torus:<n>,<m>`, `dlink:<n>,<m>,<i>`,
/// `elink:<n>,<m>,<i>`, `pd:[[a,b,c,d;s],...]`, `unknot`, `unlink:<k>`.
pub fn parse_link(spec: &str) -> Result<LinkDiagram, String> {
    let spec = spec.trim();
    if spec == "unknot" {
        return Ok(LinkDiagram::unknot());
    }
    if let Some(rest) = spec.strip_prefix("unlink:") {
        let k: usize = rest.parse().map_err(|_| format!("bad unlink count: {rest}"))?;
        return Ok(LinkDiagram::unlink(k));
    }
    if let Some(rest) = spec.strip_prefix("braid:") {
        let (ns, ws) = rest
            .split_once(':')
            .ok_or_else(|| format!("braid spec needs braid:<n>:<letters>, got {spec}"))?;
        let n: usize = ns.parse().map_err(|_| format!("bad strand count: {ns}"))?;
        let letters = if ws.is_empty() {
            vec![]
        } else {
            ws.split(',')
                .map(|t| t.trim().parse::<i32>().map_err(|_| format!("bad letter: {t}")))
                .collect::<Result<Vec<_>, _>>()?
        };
        return Ok(braid_closure(&BraidWord::new(n, letters)?));
    }
    if let Some(rest) = spec.strip_prefix("torus:") {
        let v = parse_ints(rest, 2)?;
        return Ok(braid_closure(&torus_braid(v[0], v[1])?));
    }
    if let Some(rest) = spec.strip_prefix("dlink:") {
        let v = parse_ints(rest, 3)?;
        return Ok(braid_closure(&dlink_braid(v[0], v[1], v[2])?));
    }
    if let Some(rest) = spec.strip_prefix("elink:") {
        let v = parse_ints(rest, 3)?;
        return e_link_diagram(v[0], v[1], v[2]);
    }
    if let Some(rest) = spec.strip_prefix("pd:") {
        return parse_pd(rest);
    }
    Err(format!("unrecognized link spec: {spec}"))
}

fn parse_ints(s: &str, k: usize) -> Result<Vec<i64>, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad integer: {t}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != k {
        return Err(format!("expected {k} integers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_pd(s: &str) -> Result<LinkDiagram, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("pd spec must be bracketed: {s}"))?;
    let mut crossings = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let start = rest.find('[').ok_or("expected [a,b,c,d;s]")?;
        let end = rest[start..].find(']').ok_or("unclosed crossing")? + start;
        let body = &rest[start + 1..end];
        let (nums, sign) = body
            .split_once(';')
            .ok_or_else(|| format!("crossing needs sign: {body}"))?;
        let v = parse_ints(nums, 4)?;
        let sign = match sign.trim() {
            "+" => 1,
            "-" => -1,
            other => return Err(format!("bad sign: {other}")),
        };
        let slots = [v[0], v[1], v[2], v[3]].map(|x| {
            u32::try_from(x).map_err(|_| format!("negative edge id: {x}"))
        });
        let mut arr = [0u32; 4];
        for (i, s) in slots.into_iter().enumerate() {
            arr[i] = s?;
        }
        crossings.push(Crossing { slots: arr, sign });
        rest = rest[end + 1..].trim_start_matches([',', ' ']);
    }
    let d = LinkDiagram { crossings, free_loops: 0 };
    d.validate()?;
    Ok(d)
}

/// Parse an orientation subset `rev=1,3` (1-based component labels) into
/// 0-based labels.
pub fn parse_orientation(s: &str) -> Result<Vec<usize>, String> {
    let rest = s.strip_prefix("rev=").ok_or_else(|| format!("expected rev=..., got {s}"))?;
    if rest.is_empty() {
        return Ok(vec![]);
    }
    rest.split(',')
        .map(|t| {
            let v: usize = t.trim().parse().map_err(|_| format!("bad component label: {t}"))?;
            if v == 0 {
                return Err("component labels are 1-based".into());
            }
            Ok(v - 1)
        })
        .collect()
}

/// Torus link parameters with orientation type: d = gcd(n, |m|),
/// n = d·n1, |m| = d·m1, p + q = d.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TorusLinkParams {
    pub n: i64,
    pub m: i64,
    pub d: i64,
    pub n1: i64,
    pub m1: i64,
    pub p: i64,
    pub q: i64,
}

impl TorusLinkParams {
    pub fn new(n: i64, m: i64, p: i64, q: i64) -> Result<Self, String> {
        if n < 1 {
            return Err(format!("need n >= 1, got {n}"));
        }
        let d = gcd(n, m);
        if p < 0 || q < 0 || p + q != d {
            return Err(format!("need p + q = gcd(n,|m|) = {d}, got p={p}, q={q}"));
        }
        Ok(TorusLinkParams { n, m, d, n1: n / d, m1: m.abs() / d, p, q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_words() {
        let b = torus_braid(3, 2).unwrap();
        assert_eq!(b.strands, 3);
        assert_eq!(b.letters, vec![1, 2, 1, 2]);

        let b = torus_braid(1, 5).unwrap();
        assert_eq!(b.strands, 1);
        assert!(b.letters.is_empty());

        let b = torus_braid(2, 2).unwrap();
        assert_eq!(b.letters, vec![1, 1]);
        assert_eq!(braid_closure(&b).components().len(), 2);

        assert!(torus_braid(0, 2).is_err());
    }

    #[test]
    fn dlink_words() {
        assert_eq!(dlink_braid(3, 2, 0).unwrap(), torus_braid(3, 2).unwrap());
        let b = dlink_braid(6, 5, 4).unwrap();
        assert_eq!(b.letters.len(), 29);
        assert!(dlink_braid(3, 2, 3).is_err());
    }

    #[test]
    fn closures() {
        let d = braid_closure(&torus_braid(2, 2).unwrap());
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.components().len(), 2);
        d.validate().unwrap();

        let d = braid_closure(&torus_braid(3, 2).unwrap());
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.components().len(), 1);
        d.validate().unwrap();

        let d = braid_closure(&BraidWord::new(3, vec![]).unwrap());
        assert_eq!(d.components().len(), 3);
        assert_eq!(d.free_loops, 3);
    }

    #[test]
    fn closure_component_count_is_gcd() {
        for n in 1..=12i64 {
            for m in 1..=12i64 {
                let d = braid_closure(&torus_braid(n, m).unwrap());
                assert_eq!(d.components().len() as i64, gcd(n, m), "T({n},{m})");
            }
        }
    }

    #[test]
    fn linking_matrices() {
        let d = braid_closure(&torus_braid(4, 2).unwrap());
        let (k, lk) = d.components_and_linking();
        assert_eq!(k, 2);
        assert_eq!(lk, vec![vec![0, 2], vec![2, 0]]);

        let d = braid_closure(&torus_braid(6, 4).unwrap());
        let (k, lk) = d.components_and_linking();
        assert_eq!(k, 2);
        assert_eq!(lk[0][1], 6);

        let (k, lk) = LinkDiagram::unlink(2).components_and_linking();
        assert_eq!(k, 2);
        assert_eq!(lk, vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn linking_off_diagonal_n1m1() {
        for n in 1..=12i64 {
            for m in 1..=12i64 {
                let d = gcd(n, m);
                if d < 2 {
                    continue;
                }
                let diag = braid_closure(&torus_braid(n, m).unwrap());
                let (k, lk) = diag.components_and_linking();
                assert_eq!(k as i64, d);
                for i in 0..k {
                    for j in 0..k {
                        let expect = if i == j { 0 } else { (n / d) * (m / d) };
                        assert_eq!(lk[i][j], expect, "T({n},{m}) lk({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn orientation_shifts() {
        let d = braid_closure(&torus_braid(6, 4).unwrap());
        let (_, lk) = d.components_and_linking();
        assert_eq!(orientation_shift(&lk, &[0]), (12, 36));
        assert_eq!(orientation_shift(&lk, &[]), (0, 0));
        // complement symmetry
        assert_eq!(orientation_shift(&lk, &[1]), (12, 36));

        for n in [4i64, 6] {
            let d = braid_closure(&torus_braid(n, n).unwrap());
            let (k, lk) = d.components_and_linking();
            assert_eq!(k as i64, n);
            for q in 0..=n {
                let rev: Vec<usize> = (0..q as usize).collect();
                let p = n - q;
                assert_eq!(orientation_shift(&lk, &rev), (2 * p * q, 6 * p * q));
            }
        }
    }

    #[test]
    fn orientation_shift_block_additive() {
        // block-diagonal join of two linking matrices
        let a = vec![vec![0, 2], vec![2, 0]];
        let b = vec![vec![0, 3], vec![3, 0]];
        let mut j = vec![vec![0; 4]; 4];
        for i in 0..2 {
            for k in 0..2 {
                j[i][k] = a[i][k];
                j[i + 2][k + 2] = b[i][k];
            }
        }
        let s1 = orientation_shift(&a, &[0]);
        let s2 = orientation_shift(&b, &[1]);
        let s = orientation_shift(&j, &[0, 3]);
        assert_eq!(s, (s1.0 + s2.0, s1.1 + s2.1));
    }

    #[test]
    fn mirror_involution() {
        let d = braid_closure(&torus_braid(3, 2).unwrap());
        let m = d.mirror();
        assert!(m.crossings.iter().all(|c| c.sign == -1));
        assert_eq!(m.mirror(), d);

        let t22m = braid_closure(&torus_braid(2, 2).unwrap()).mirror();
        let t2m2 = braid_closure(&torus_braid(2, -2).unwrap());
        assert_eq!(t22m.crossing_count(), 2);
        assert!(t2m2.crossings.iter().all(|c| c.sign == -1));
    }

    #[test]
    fn resolve_kink() {
        // 1-crossing unknot diagram: closure of sigma_1 on 2 strands
        let d = braid_closure(&BraidWord::new(2, vec![1]).unwrap());
        assert_eq!(d.components().len(), 1);
        let r0 = d.resolve_crossing(0, 0).unwrap();
        let r1 = d.resolve_crossing(0, 1).unwrap();
        let counts: Vec<usize> = vec![r0.components().len(), r1.components().len()];
        assert!(counts.contains(&1) && counts.contains(&2), "{counts:?}");
    }

    #[test]
    fn resolve_last_crossing_of_dlink() {
        // 0-resolving the last crossing of D^i gives D^{i-1}
        let d = braid_closure(&dlink_braid(4, 3, 2).unwrap());
        let r = d.resolve_crossing(d.crossing_count() - 1, 0).unwrap();
        let expect = braid_closure(&dlink_braid(4, 3, 1).unwrap());
        assert_eq!(r.components().len(), expect.components().len());
        assert_eq!(r.canonical_hash(), expect.canonical_hash());
    }

    #[test]
    fn e_link_components() {
        // E^0_{n,n} has one more component than T(n-2,n-2)
        for n in 3..=5i64 {
            let e = e_link_diagram(n, n, 0).unwrap();
            let t = braid_closure(&torus_braid(n - 2, n - 2).unwrap());
            assert_eq!(e.components().len(), t.components().len() + 1, "n={n}");
        }
        // E^2_{6,5} has the component count of D^2_{4,3}
        let e = e_link_diagram(6, 5, 2).unwrap();
        let d = braid_closure(&dlink_braid(4, 3, 2).unwrap());
        assert_eq!(e.components().len(), d.components().len());
    }

    #[test]
    fn hash_stability() {
        let d1 = braid_closure(&torus_braid(3, 2).unwrap());
        // same diagram with all edge ids shifted
        let shifted = LinkDiagram {
            crossings: d1
                .crossings
                .iter()
                .map(|c| Crossing { slots: c.slots.map(|e| e + 17), sign: c.sign })
                .collect(),
            free_loops: 0,
        };
        assert_eq!(d1.canonical_hash(), shifted.canonical_hash());

        let mut flipped = d1.clone();
        flipped.crossings[1] = flipped.crossings[1].mirrored();
        assert_ne!(d1.canonical_hash(), flipped.canonical_hash());

        // stable across runs: frozen value
        assert_eq!(d1.canonical_hash().len(), 32);
    }

    #[test]
    fn pd_round_trip() {
        let d = braid_closure(&torus_braid(2, 2).unwrap());
        let spec = format!(
            "pd:[{}]",
            d.crossings
                .iter()
                .map(|c| format!(
                    "[{},{},{},{};{}]",
                    c.slots[0],
                    c.slots[1],
                    c.slots[2],
                    c.slots[3],
                    if c.sign > 0 { '+' } else { '-' }
                ))
                .collect::<Vec<_>>()
                .join(",")
        );
        let parsed = parse_link(&spec).unwrap();
        assert_eq!(parsed, d);

        let t = parse_link("torus:3,2").unwrap();
        assert_eq!(t.crossing_count(), 4);
        assert_eq!(parse_orientation("rev=1,3").unwrap(), vec![0, 2]);
    }

    #[test]
    fn reverse_components_signs() {
        let d = braid_closure(&torus_braid(2, 2).unwrap());
        let r = d.reverse_components(&[0]);
        assert!(r.crossings.iter().all(|c| c.sign == -1));
        let rr = r.reverse_components(&[0]);
        assert_eq!(rr, d);
        // reversing both components keeps signs
        let r2 = d.reverse_components(&[0, 1]);
        assert!(r2.crossings.iter().all(|c| c.sign == 1));
    }
}
