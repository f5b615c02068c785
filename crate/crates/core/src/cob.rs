//! Flat tangles and dotted cobordisms between them, the local algebra that
//! drives the scanning engine. Tangles are matchings on open ports (ports are
//! edge ids with one unprocessed endpoint) plus transient closed circles.
//! A cobordism is stored by its connected components, each carrying genus and
//! dots; `part_eval` normalizes via X² = hX + t, handle = (2X − h), and
//! closed-surface evaluation.

use std::collections::{BTreeMap, BTreeSet};

use crate::ring::Coeff;

pub type Port = u32;
pub type CircleId = u32;

/// Crossingless tangle: a perfect matching on its open ports plus circles.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Tangle {
    pub arcs: BTreeMap<Port, Port>,
    pub circles: BTreeSet<CircleId>,
}

impl Tangle {
    pub fn empty() -> Self {
        Tangle::default()
    }

    pub fn ports(&self) -> impl Iterator<Item = Port> + '_ {
        self.arcs.keys().copied()
    }

    pub fn arc_pairs(&self) -> Vec<(Port, Port)> {
        self.arcs.iter().filter(|(a, b)| a < b).map(|(&a, &b)| (a, b)).collect()
    }

    pub fn insert_arc(&mut self, a: Port, b: Port) {
        assert!(a != b && !self.arcs.contains_key(&a) && !self.arcs.contains_key(&b));
        self.arcs.insert(a, b);
        self.arcs.insert(b, a);
    }

    pub fn without_circle(&self, c: CircleId) -> Tangle {
        let mut t = self.clone();
        t.circles.remove(&c);
        t
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty() && self.circles.is_empty()
    }
}

/// Result of gluing new arcs/circles into a tangle: the new tangle plus the
/// identities of every circle formed, keyed by the sorted port set of the
/// cycle that closed up.
#[derive(Clone, Debug, Default)]
pub struct ConnectInfo {
    pub tangle: Tangle,
    /// cycles that closed: sorted ports -> assigned circle id
    pub formed: BTreeMap<Vec<Port>, CircleId>,
    /// ids given to the appended standalone circles, in order
    pub appended: Vec<CircleId>,
}

/// Glue `new_arcs` (and `new_circles` standalone circles) into `t`.
/// Arc endpoints that are ports of `t` connect; others become open ports.
pub fn connect_tangle(
    t: &Tangle,
    new_arcs: &[(Port, Port)],
    new_circles: usize,
    next_circle: &mut CircleId,
) -> ConnectInfo {
    // adjacency: each port has at most one old arc and at most one new arc
    let mut new_adj: BTreeMap<Port, Port> = BTreeMap::new();
    for &(a, b) in new_arcs {
        assert!(a != b);
        assert!(!new_adj.contains_key(&a) && !new_adj.contains_key(&b), "port reused in new arcs");
        new_adj.insert(a, b);
        new_adj.insert(b, a);
    }
    let mut out = Tangle::default();
    out.circles = t.circles.clone();
    let mut formed = BTreeMap::new();
    let mut visited: BTreeSet<Port> = BTreeSet::new();

    // ports involved anywhere
    let involved: BTreeSet<Port> =
        t.arcs.keys().copied().chain(new_adj.keys().copied()).collect();

    for &start in &involved {
        if visited.contains(&start) {
            continue;
        }
        // Walk the chain/cycle through alternating old arcs and new arcs.
        // `start` qualifies as an endpoint only if it misses one kind of link;
        // otherwise it is interior and we skip it (handled when reached from
        // an endpoint) unless the whole thing is a cycle.
        let deg_old = t.arcs.contains_key(&start);
        let deg_new = new_adj.contains_key(&start);
        if deg_old && deg_new {
            continue; // interior; cycles handled below
        }
        // walk from this endpoint
        let mut path = vec![start];
        let mut cur = start;
        let mut use_old = deg_old;
        loop {
            let next = if use_old { t.arcs.get(&cur) } else { new_adj.get(&cur) };
            match next {
                None => break,
                Some(&n) => {
                    path.push(n);
                    visited.insert(cur);
                    visited.insert(n);
                    cur = n;
                    use_old = !use_old;
                }
            }
        }
        let end = *path.last().unwrap();
        if start != end {
            out.insert_arc(start, end);
        } else {
            // a single port can't be both endpoints of a path
            unreachable!("degenerate path");
        }
    }
    // remaining unvisited involved ports lie on cycles
    for &start in &involved {
        if visited.contains(&start) {
            continue;
        }
        let mut cyc = vec![];
        let mut cur = start;
        let mut use_old = true; // cycles alternate; starting kind is arbitrary
        loop {
            cyc.push(cur);
            visited.insert(cur);
            let n = if use_old { t.arcs[&cur] } else { new_adj[&cur] };
            use_old = !use_old;
            if n == start {
                break;
            }
            cur = n;
        }
        cyc.sort_unstable();
        cyc.dedup();
        let id = *next_circle;
        *next_circle += 1;
        formed.insert(cyc, id);
        out.circles.insert(id);
    }
    let mut appended = Vec::new();
    for _ in 0..new_circles {
        let id = *next_circle;
        *next_circle += 1;
        out.circles.insert(id);
        appended.push(id);
    }
    ConnectInfo { tangle: out, formed, appended }
}

/// One connected component of a dotted cobordism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CobComp {
    pub src_arcs: BTreeSet<(Port, Port)>,
    pub tgt_arcs: BTreeSet<(Port, Port)>,
    pub src_circles: BTreeSet<CircleId>,
    pub tgt_circles: BTreeSet<CircleId>,
    pub genus: u32,
    pub dots: u32,
}

impl CobComp {
    fn ports(&self) -> BTreeSet<Port> {
        self.src_arcs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Boundary circle count: cycles of the union of the two arc matchings
    /// plus the free circles on both sides.
    pub(crate) fn boundary_circles(&self) -> usize {
        let mut cycles = 0usize;
        let src: BTreeMap<Port, Port> =
            self.src_arcs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        let tgt: BTreeMap<Port, Port> =
            self.tgt_arcs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        let mut seen: BTreeSet<Port> = BTreeSet::new();
        for &start in src.keys() {
            if seen.contains(&start) {
                continue;
            }
            seen.insert(start);
            let mut cur = start;
            let mut on_src = true;
            loop {
                cur = if on_src { src[&cur] } else { tgt[&cur] };
                on_src = !on_src;
                seen.insert(cur);
                if cur == start && on_src {
                    break;
                }
            }
            cycles += 1;
        }
        cycles + self.src_circles.len() + self.tgt_circles.len()
    }

    fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_circles() as i64
    }

    fn is_closed(&self) -> bool {
        self.src_arcs.is_empty()
            && self.tgt_arcs.is_empty()
            && self.src_circles.is_empty()
            && self.tgt_circles.is_empty()
    }

    fn is_identity_square(&self) -> bool {
        self.genus == 0
            && self.dots == 0
            && self.src_circles.is_empty()
            && self.tgt_circles.is_empty()
            && self.src_arcs.len() == 1
            && self.src_arcs == self.tgt_arcs
    }

    fn is_identity_cylinder(&self) -> bool {
        self.genus == 0
            && self.dots == 0
            && self.src_arcs.is_empty()
            && self.tgt_arcs.is_empty()
            && self.src_circles.len() == 1
            && self.src_circles == self.tgt_circles
    }
}

/// A (possibly disconnected) dotted cobordism in canonical component order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Cob {
    pub comps: Vec<CobComp>,
}

impl Cob {
    pub fn normalize_order(mut self) -> Self {
        self.comps.sort();
        self
    }

    pub fn identity(t: &Tangle) -> Cob {
        let mut comps: Vec<CobComp> = t
            .arc_pairs()
            .into_iter()
            .map(|p| CobComp {
                src_arcs: BTreeSet::from([p]),
                tgt_arcs: BTreeSet::from([p]),
                ..Default::default()
            })
            .collect();
        for &c in &t.circles {
            comps.push(CobComp {
                src_circles: BTreeSet::from([c]),
                tgt_circles: BTreeSet::from([c]),
                ..Default::default()
            });
        }
        Cob { comps }.normalize_order()
    }

    pub fn is_identity(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.is_identity_square() || c.is_identity_cylinder())
    }
}

/// R-linear combination of cobordisms between two fixed tangles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism<R: Coeff> {
    pub terms: BTreeMap<Cob, R>,
}

impl<R: Coeff> Default for Morphism<R> {
    fn default() -> Self {
        Morphism { terms: BTreeMap::new() }
    }
}

impl<R: Coeff> Morphism<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_cob(c: Cob) -> Self {
        Morphism { terms: BTreeMap::from([(c.normalize_order(), R::one())]) }
    }

    pub fn identity(t: &Tangle) -> Self {
        Self::from_cob(Cob::identity(t))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: Cob, v: R) {
        if v.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&v);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.add_term(c.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, v: &R) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(c, w)| (c.clone(), w.mul(v))).collect();
        Morphism { terms }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(c, w)| (c.clone(), w.neg())).collect();
        Morphism { terms }
    }

    /// Unit multiple of the identity cobordism?
    pub fn as_unit_identity(&self) -> Option<R> {
        if self.terms.len() != 1 {
            return None;
        }
        let (c, v) = self.terms.iter().next().unwrap();
        (c.is_identity() && v.is_unit()).then(|| v.clone())
    }

    /// Scalar value of a morphism between empty tangles.
    pub fn scalar(&self) -> R {
        match self.terms.len() {
            0 => R::zero(),
            1 => {
                let (c, v) = self.terms.iter().next().unwrap();
                assert!(c.comps.is_empty(), "morphism not fully evaluated: {c:?}");
                v.clone()
            }
            _ => panic!("morphism between empty tangles must have one term"),
        }
    }
}

/// Normalize one component: kill genus via handle = (2X − h)·, reduce dot
/// powers via X² = hX + t, evaluate closed pieces. Emits (comp?, coeff)
/// pairs; `None` comp means the piece evaluated to a scalar.
fn eval_comp<R: Coeff>(comp: &CobComp, h: &R, t: &R) -> Vec<(Option<CobComp>, R)> {
    let mut pending = vec![(comp.clone(), R::one())];
    let mut done: Vec<(Option<CobComp>, R)> = Vec::new();
    while let Some((mut c, v)) = pending.pop() {
        if c.genus > 0 {
            c.genus -= 1;
            let mut dotted = c.clone();
            dotted.dots += 1;
            pending.push((dotted, v.mul(&R::from_i64(2))));
            if !h.is_zero() {
                pending.push((c, v.mul(h).neg()));
            }
            continue;
        }
        if c.dots >= 2 {
            c.dots -= 2;
            let mut dotted = c.clone();
            dotted.dots += 1;
            if !h.is_zero() {
                pending.push((dotted, v.mul(h)));
            }
            if !t.is_zero() {
                pending.push((c, v.mul(t)));
            }
            continue;
        }
        if c.is_closed() {
            // sphere: 0, dotted sphere: 1
            if c.dots == 1 {
                done.push((None, v));
            }
            continue;
        }
        done.push((Some(c), v));
    }
    done
}

/// Normalize a whole cobordism term into the morphism accumulator.
fn push_evaluated<R: Coeff>(out: &mut Morphism<R>, cob: Cob, coeff: R, h: &R, t: &R) {
    // cartesian product over per-component normal forms
    let mut acc: Vec<(Vec<CobComp>, R)> = vec![(Vec::new(), coeff)];
    for comp in &cob.comps {
        let opts = eval_comp(comp, h, t);
        if opts.is_empty() {
            return; // a factor evaluated to zero
        }
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for (comps, v) in &acc {
            for (oc, w) in &opts {
                let mut cs = comps.clone();
                if let Some(c) = oc {
                    cs.push(c.clone());
                }
                next.push((cs, v.mul(w)));
            }
        }
        acc = next;
    }
    for (comps, v) in acc {
        out.add_term(Cob { comps }.normalize_order(), v);
    }
}

pub fn part_eval<R: Coeff>(m: Morphism<R>, h: &R, t: &R) -> Morphism<R> {
    let mut out = Morphism::zero();
    for (c, v) in m.terms {
        push_evaluated(&mut out, c, v, h, t);
    }
    out
}

fn merge_arc_sets(
    groups: Vec<&BTreeSet<(Port, Port)>>,
    shared: &BTreeSet<Port>,
    reg: &BTreeMap<Vec<Port>, CircleId>,
) -> (BTreeSet<(Port, Port)>, BTreeSet<CircleId>) {
    // Concatenate arcs along shared ports; closed cycles become circles
    // looked up in the registry of the corresponding tangle connect.
    // Shared ports have degree 2 (one arc from each glued side), others 1.
    let edges: Vec<(Port, Port)> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let mut adj: BTreeMap<Port, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj.entry(a).or_default().push(i);
        adj.entry(b).or_default().push(i);
    }
    for (p, es) in &adj {
        let expect = if shared.contains(p) { 2 } else { 1 };
        debug_assert_eq!(es.len(), expect, "port {p} has degree {}", es.len());
    }
    let other = |i: usize, p: Port| {
        let (a, b) = edges[i];
        if a == p {
            b
        } else {
            a
        }
    };
    let mut used = vec![false; edges.len()];
    let mut arcs = BTreeSet::new();
    let mut circles = BTreeSet::new();

    // paths, walked from unshared endpoints
    for (&start, es) in adj.iter() {
        if shared.contains(&start) || used[es[0]] {
            continue;
        }
        let mut cur = start;
        let mut e = es[0];
        loop {
            used[e] = true;
            let nxt = other(e, cur);
            if !shared.contains(&nxt) {
                arcs.insert((start.min(nxt), start.max(nxt)));
                break;
            }
            let es2 = &adj[&nxt];
            e = if es2[0] == e { es2[1] } else { es2[0] };
            cur = nxt;
        }
    }
    // remaining edges close up into cycles over shared ports
    for i in 0..edges.len() {
        if used[i] {
            continue;
        }
        let mut cyc: Vec<Port> = Vec::new();
        let mut e = i;
        let mut cur = edges[i].0;
        while !used[e] {
            used[e] = true;
            cyc.push(cur);
            let nxt = other(e, cur);
            cyc.push(nxt);
            let es2 = &adj[&nxt];
            e = if es2[0] == e { es2[1] } else { es2[0] };
            cur = nxt;
        }
        cyc.sort_unstable();
        cyc.dedup();
        let id = reg
            .get(&cyc)
            .copied()
            .unwrap_or_else(|| panic!("cycle {cyc:?} missing from registry"));
        circles.insert(id);
    }
    (arcs, circles)
}

/// Horizontal gluing of two cobordisms along shared ports. `src_reg` and
/// `tgt_reg` name circles formed on each side (from the tangle connects).
pub fn cob_connect<R: Coeff>(
    a: &Morphism<R>,
    b: &Morphism<R>,
    shared: &BTreeSet<Port>,
    src_reg: &BTreeMap<Vec<Port>, CircleId>,
    tgt_reg: &BTreeMap<Vec<Port>, CircleId>,
    h: &R,
    t: &R,
) -> Morphism<R> {
    let mut out = Morphism::zero();
    for (ca, va) in &a.terms {
        for (cb, vb) in &b.terms {
            let glued = glue_components(&ca.comps, &cb.comps, shared, src_reg, tgt_reg);
            push_evaluated(&mut out, glued, va.mul(vb), h, t);
        }
    }
    out
}

fn glue_components(
    ca: &[CobComp],
    cb: &[CobComp],
    shared: &BTreeSet<Port>,
    src_reg: &BTreeMap<Vec<Port>, CircleId>,
    tgt_reg: &BTreeMap<Vec<Port>, CircleId>,
) -> Cob {
    let all: Vec<&CobComp> = ca.iter().chain(cb.iter()).collect();
    let n = all.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // glue along shared ports; count gluings per merged group
    let mut port_owner: BTreeMap<Port, Vec<usize>> = BTreeMap::new();
    for (i, c) in all.iter().enumerate() {
        for p in c.ports() {
            port_owner.entry(p).or_default().push(i);
        }
    }
    let mut glue_count: BTreeMap<usize, i64> = BTreeMap::new();
    for (&p, owners) in &port_owner {
        if !shared.contains(&p) {
            continue;
        }
        assert!(owners.len() == 2, "shared port {p} has {} owners", owners.len());
        let (x, y) = (find(&mut parent, owners[0]), find(&mut parent, owners[1]));
        if x != y {
            parent[x] = y;
        }
        let r = find(&mut parent, owners[0]);
        *glue_count.entry(r).or_default() += 1;
    }
    // re-root glue counts (roots may have moved)
    let mut glue_total: BTreeMap<usize, i64> = BTreeMap::new();
    for (r, k) in glue_count {
        let rr = find(&mut parent, r);
        *glue_total.entry(rr).or_default() += k;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps = Vec::new();
    for (root, members) in groups {
        let glued = glue_total.get(&root).copied().unwrap_or(0);
        let chi: i64 = members.iter().map(|&i| all[i].euler()).sum::<i64>() - glued;
        let dots: u32 = members.iter().map(|&i| all[i].dots).sum();
        let (src_arcs, mut src_circles) = merge_arc_sets(
            members.iter().map(|&i| &all[i].src_arcs).collect(),
            shared,
            src_reg,
        );
        let (tgt_arcs, mut tgt_circles) = merge_arc_sets(
            members.iter().map(|&i| &all[i].tgt_arcs).collect(),
            shared,
            tgt_reg,
        );
        for &i in &members {
            src_circles.extend(all[i].src_circles.iter().copied());
            tgt_circles.extend(all[i].tgt_circles.iter().copied());
        }
        let mut comp = CobComp { src_arcs, tgt_arcs, src_circles, tgt_circles, genus: 0, dots };
        let beta = comp.boundary_circles() as i64;
        let two_g = 2 - beta - chi;
        assert!(two_g >= 0 && two_g % 2 == 0, "bad genus: chi={chi}, beta={beta}");
        comp.genus = (two_g / 2) as u32;
        comps.push(comp);
    }
    Cob { comps }.normalize_order()
}

/// Vertical composition g ∘ f of f: A→B and g: B→C, glued along B.
pub fn compose<R: Coeff>(f: &Morphism<R>, g: &Morphism<R>, middle: &Tangle, h: &R, t: &R) -> Morphism<R> {
    let mut out = Morphism::zero();
    for (cf, vf) in &f.terms {
        for (cg, vg) in &g.terms {
            let glued = compose_cobs(cf, cg, middle);
            push_evaluated(&mut out, glued, vf.mul(vg), h, t);
        }
    }
    out
}

fn compose_cobs(f: &Cob, g: &Cob, middle: &Tangle) -> Cob {
    let nf = f.comps.len();
    let all: Vec<&CobComp> = f.comps.iter().chain(g.comps.iter()).collect();
    let n = all.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut glue_units: BTreeMap<usize, i64> = BTreeMap::new();
    // middle arcs glue (χ -= 1 each), middle circles glue (χ -= 0)
    let mut arc_owner_f: BTreeMap<(Port, Port), usize> = BTreeMap::new();
    let mut circ_owner_f: BTreeMap<CircleId, usize> = BTreeMap::new();
    for (i, c) in f.comps.iter().enumerate() {
        for &a in &c.tgt_arcs {
            arc_owner_f.insert(a, i);
        }
        for &cc in &c.tgt_circles {
            circ_owner_f.insert(cc, i);
        }
    }
    for (j, c) in g.comps.iter().enumerate() {
        for &a in &c.src_arcs {
            let i = *arc_owner_f
                .get(&a)
                .unwrap_or_else(|| panic!("middle arc {a:?} missing in f"));
            let (x, y) = (find(&mut parent, i), find(&mut parent, nf + j));
            if x != y {
                parent[x] = y;
            }
            let r = find(&mut parent, i);
            *glue_units.entry(r).or_default() += 1;
        }
        for &cc in &c.src_circles {
            let i = *circ_owner_f
                .get(&cc)
                .unwrap_or_else(|| panic!("middle circle {cc} missing in f"));
            let (x, y) = (find(&mut parent, i), find(&mut parent, nf + j));
            if x != y {
                parent[x] = y;
            }
            // circles glue along χ = 0
        }
    }
    let _ = middle;
    let mut glue_total: BTreeMap<usize, i64> = BTreeMap::new();
    for (r, k) in glue_units {
        let rr = find(&mut parent, r);
        *glue_total.entry(rr).or_default() += k;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps = Vec::new();
    for (root, members) in groups {
        let glued = glue_total.get(&root).copied().unwrap_or(0);
        let chi: i64 = members.iter().map(|&i| all[i].euler()).sum::<i64>() - glued;
        let dots: u32 = members.iter().map(|&i| all[i].dots).sum();
        let mut comp = CobComp { genus: 0, dots, ..Default::default() };
        for &i in &members {
            if i < nf {
                comp.src_arcs.extend(all[i].src_arcs.iter().copied());
                comp.src_circles.extend(all[i].src_circles.iter().copied());
            } else {
                comp.tgt_arcs.extend(all[i].tgt_arcs.iter().copied());
                comp.tgt_circles.extend(all[i].tgt_circles.iter().copied());
            }
        }
        let beta = comp.boundary_circles() as i64;
        let two_g = 2 - beta - chi;
        assert!(two_g >= 0 && two_g % 2 == 0, "bad genus in compose: chi={chi}, beta={beta}");
        comp.genus = (two_g / 2) as u32;
        comps.push(comp);
    }
    Cob { comps }.normalize_order()
}

pub enum Side {
    Src,
    Tgt,
}

/// Remove a boundary circle by capping it with a disk carrying `dots` dots.
pub fn cap_off<R: Coeff>(m: &Morphism<R>, side: Side, c: CircleId, dots: u32, h: &R, t: &R) -> Morphism<R> {
    let mut out = Morphism::zero();
    for (cob, v) in &m.terms {
        let mut comps = cob.comps.clone();
        let pos = comps
            .iter()
            .position(|cc| match side {
                Side::Src => cc.src_circles.contains(&c),
                Side::Tgt => cc.tgt_circles.contains(&c),
            })
            .unwrap_or_else(|| panic!("no component carries circle {c}"));
        {
            let cc = &mut comps[pos];
            match side {
                Side::Src => cc.src_circles.remove(&c),
                Side::Tgt => cc.tgt_circles.remove(&c),
            };
            cc.dots += dots;
        }
        push_evaluated(&mut out, Cob { comps }.normalize_order(), v.clone(), h, t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ZZ;

    fn ht() -> (ZZ, ZZ) {
        (ZZ::from_i64(0), ZZ::from_i64(0))
    }

    #[test]
    fn tangle_connect_forms_circle() {
        let mut t = Tangle::empty();
        t.insert_arc(1, 2);
        let mut next = 100;
        let info = connect_tangle(&t, &[(1, 2)], 0, &mut next);
        assert!(info.tangle.arcs.is_empty());
        assert_eq!(info.tangle.circles.len(), 1);
        assert_eq!(info.formed.len(), 1);
        assert!(info.formed.contains_key(&vec![1, 2]));
    }

    #[test]
    fn tangle_connect_chains() {
        let mut t = Tangle::empty();
        t.insert_arc(1, 2);
        t.insert_arc(3, 4);
        let mut next = 0;
        let info = connect_tangle(&t, &[(2, 3)], 0, &mut next);
        assert_eq!(info.tangle.arcs.get(&1), Some(&4));
        assert!(info.formed.is_empty());
    }

    #[test]
    fn identity_detection() {
        let mut t = Tangle::empty();
        t.insert_arc(1, 2);
        t.insert_arc(3, 4);
        let id = Morphism::<ZZ>::identity(&t);
        assert!(id.as_unit_identity().is_some());
    }

    #[test]
    fn sphere_vanishes_dotted_sphere_is_one() {
        let (h, t) = ht();
        let sphere = CobComp::default(); // closed, genus 0, no dots
        let m = part_eval(Morphism::<ZZ>::from_cob(Cob { comps: vec![sphere.clone()] }), &h, &t);
        assert!(m.is_zero());
        let mut dotted = sphere;
        dotted.dots = 1;
        let m = part_eval(Morphism::<ZZ>::from_cob(Cob { comps: vec![dotted] }), &h, &t);
        assert_eq!(m.scalar(), ZZ::from_i64(1));
    }

    #[test]
    fn torus_evaluates_to_two() {
        let (h, t) = ht();
        let torus = CobComp { genus: 1, ..Default::default() };
        let m = part_eval(Morphism::<ZZ>::from_cob(Cob { comps: vec![torus] }), &h, &t);
        assert_eq!(m.scalar(), ZZ::from_i64(2));
    }

    #[test]
    fn two_dots_vanish_for_khovanov() {
        let (h, t) = ht();
        let cc = CobComp { dots: 2, ..Default::default() };
        let m = part_eval(Morphism::<ZZ>::from_cob(Cob { comps: vec![cc] }), &h, &t);
        assert!(m.is_zero());
    }

    #[test]
    fn lee_two_dots_give_one() {
        let h = ZZ::from_i64(0);
        let t = ZZ::from_i64(1);
        let cc = CobComp { dots: 2, ..Default::default() };
        // closed double-dotted sphere: X² = 1 → ε(1) = 0; with 3 dots → ε(X) = 1
        let m = part_eval(Morphism::<ZZ>::from_cob(Cob { comps: vec![cc] }), &h, &t);
        assert!(m.is_zero());
        let cc3 = CobComp { dots: 3, ..Default::default() };
        let m = part_eval(Morphism::<ZZ>::from_cob(Cob { comps: vec![cc3] }), &h, &t);
        assert_eq!(m.scalar(), ZZ::from_i64(1));
    }

    #[test]
    fn neck_cut_composition() {
        // cylinder over a circle composed with itself stays the identity
        let (h, t) = ht();
        let mut tangle = Tangle::empty();
        tangle.circles.insert(7);
        let id = Morphism::<ZZ>::identity(&tangle);
        let m = compose(&id, &id, &tangle, &h, &t);
        assert!(m.as_unit_identity().is_some());
    }

    #[test]
    fn cap_pairing() {
        // birth then dotted death = ε(X·1) = 1
        let (h, t) = ht();
        let mut tangle = Tangle::empty();
        tangle.circles.insert(3);
        let id = Morphism::<ZZ>::identity(&tangle);
        let birth = cap_off(&id, Side::Src, 3, 0, &h, &t); // morphism ∅ -> circle
        let val = cap_off(&birth, Side::Tgt, 3, 1, &h, &t); // dotted death after
        assert_eq!(val.scalar(), ZZ::from_i64(1));
        let zero = cap_off(&birth, Side::Tgt, 3, 0, &h, &t);
        assert!(zero.is_zero());
    }
}
