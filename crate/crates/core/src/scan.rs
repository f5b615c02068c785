//! Scanning construction of Khovanov/Lee/Bar-Natan complexes: crossings are
//! appended one at a time in word order, every closed loop is immediately
//! delooped, and unit differential entries of filtration degree zero are
//! Gaussian-eliminated. Intermediate objects live on at most the open ports
//! of the partial diagram. Tracked cycles are pushed through every local
//! equivalence.

use std::collections::{BTreeMap, BTreeSet};

use crate::cob::{
    cap_off, cob_connect, compose, connect_tangle, Cob, CobComp, ConnectInfo, Morphism, Port,
    Side, Tangle,
};
use crate::complex::BigradedComplex;
use crate::cube::EngineError;
use crate::links::{Crossing, EdgeId, LinkDiagram};
use crate::ring::Coeff;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Theory {
    Khovanov,
    Lee,
    BarNatan,
}

impl Theory {
    pub fn ht(&self) -> (i64, i64) {
        match self {
            Theory::Khovanov => (0, 0),
            Theory::Lee => (0, 1),
            Theory::BarNatan => (1, 0),
        }
    }

    /// Positive filtration jump of the deformation part.
    pub fn filtration_step(&self) -> i64 {
        match self {
            Theory::Khovanov => 0,
            Theory::Lee => 4,
            Theory::BarNatan => 2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Label {
    A,
    B,
}

/// A cycle to track through the reduction: the canonical Lee/Bar-Natan cycle
/// sitting at one cube vertex, given by its per-crossing smoothing choices
/// and the idempotent label of every circle of that resolution.
#[derive(Clone, Debug)]
pub struct TrackedSpec {
    pub choices: Vec<u8>,
    /// label of the resolution circle through each edge
    pub edge_labels: BTreeMap<EdgeId, Label>,
    /// labels of the crossing-free loops, in diagram order
    pub loop_labels: Vec<Label>,
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub max_objects: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { max_objects: 200_000 }
    }
}

pub struct ScanResult<R: Coeff> {
    pub complex: BigradedComplex<R>,
    /// tracked chains as sparse vectors over the final generators
    pub chains: Vec<Vec<(usize, R)>>,
}

struct Obj<R: Coeff> {
    tangle: Tangle,
    h: i64,
    q: i64,
    w: u32,
    out: BTreeMap<usize, Morphism<R>>,
    inn: BTreeSet<usize>,
    alive: bool,
}

struct Chain<R: Coeff> {
    spec: TrackedSpec,
    src: Tangle,
    comps: BTreeMap<usize, Morphism<R>>,
}

pub struct Scanner<R: Coeff> {
    h: R,
    t: R,
    objs: Vec<Obj<R>>,
    chains: Vec<Chain<R>>,
    next_circle: u32,
    open_ports: BTreeSet<Port>,
    max_objects: usize,
}

/// Local data of one crossing: the port arcs and closed circles of each
/// smoothing, where slot ends are resolved through any self-incident edges.
struct Mini {
    arcs: [Vec<(Port, Port)>; 2],
    /// edge content of each closed mini circle, per smoothing
    circles: [Vec<Vec<EdgeId>>; 2],
    n_self: usize,
    ports: BTreeSet<Port>,
}

fn mini_for(c: &Crossing) -> Mini {
    let slots = c.slots;
    let mut by_edge: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (i, &e) in slots.iter().enumerate() {
        by_edge.entry(e).or_default().push(i);
    }
    let self_edges: BTreeSet<EdgeId> =
        by_edge.iter().filter(|(_, v)| v.len() == 2).map(|(&e, _)| e).collect();
    // self link partner per slot
    let mut self_link = [usize::MAX; 4];
    for (_, v) in by_edge.iter().filter(|(_, v)| v.len() == 2) {
        self_link[v[0]] = v[1];
        self_link[v[1]] = v[0];
    }
    let mut arcs: [Vec<(Port, Port)>; 2] = [Vec::new(), Vec::new()];
    let mut circles: [Vec<Vec<EdgeId>>; 2] = [Vec::new(), Vec::new()];
    for choice in 0..2u8 {
        let pairs = if choice == 0 { [(0, 3), (1, 2)] } else { [(0, 1), (2, 3)] };
        let mut smooth_link = [usize::MAX; 4];
        for (a, b) in pairs {
            smooth_link[a] = b;
            smooth_link[b] = a;
        }
        let mut visited = [false; 4];
        // paths start at slots of non-self edges
        for s in 0..4 {
            if visited[s] || self_link[s] != usize::MAX {
                continue;
            }
            // walk: smoothing link, then self link, alternating
            visited[s] = true;
            let mut cur = smooth_link[s];
            loop {
                visited[cur] = true;
                if self_link[cur] == usize::MAX {
                    break;
                }
                let nxt = self_link[cur];
                visited[nxt] = true;
                cur = smooth_link[nxt];
            }
            arcs[choice as usize].push((slots[s], slots[cur]));
        }
        // the rest are cycles (all self slots)
        for s in 0..4 {
            if visited[s] {
                continue;
            }
            let mut content = Vec::new();
            let mut cur = s;
            loop {
                visited[cur] = true;
                content.push(slots[cur]);
                let a = smooth_link[cur];
                visited[a] = true;
                content.push(slots[a]);
                cur = self_link[a];
                if cur == s {
                    break;
                }
            }
            content.sort_unstable();
            content.dedup();
            circles[choice as usize].push(content);
        }
    }
    let ports: BTreeSet<Port> =
        slots.iter().copied().filter(|e| !self_edges.contains(e)).collect();
    Mini { arcs, circles, n_self: self_edges.len(), ports }
}

/// (Δh, Δq) of the two smoothings of a crossing, folding in the global
/// [−n₋]{n₊ − 2n₋} shift.
fn local_shifts(sign: i8) -> [(i64, i64); 2] {
    if sign > 0 {
        [(0, 1), (1, 2)]
    } else {
        [(-1, -2), (0, -1)]
    }
}

impl<R: Coeff> Scanner<R> {
    pub fn new(theory: Theory, opts: &ScanOptions) -> Self {
        let (hh, tt) = theory.ht();
        let obj0 = Obj {
            tangle: Tangle::empty(),
            h: 0,
            q: 0,
            w: 0,
            out: BTreeMap::new(),
            inn: BTreeSet::new(),
            alive: true,
        };
        Scanner {
            h: R::from_i64(hh),
            t: R::from_i64(tt),
            objs: vec![obj0],
            chains: Vec::new(),
            next_circle: 0,
            open_ports: BTreeSet::new(),
            max_objects: opts.max_objects,
        }
    }

    pub fn track(&mut self, spec: TrackedSpec) {
        let comps = BTreeMap::from([(0usize, Morphism::identity(&Tangle::empty()))]);
        self.chains.push(Chain { spec, src: Tangle::empty(), comps });
    }

    fn live_ids(&self) -> Vec<usize> {
        (0..self.objs.len()).filter(|&i| self.objs[i].alive).collect()
    }

    fn live_count(&self) -> usize {
        self.objs.iter().filter(|o| o.alive).count()
    }

    fn add_entry(&mut self, from: usize, to: usize, m: Morphism<R>) {
        if m.is_zero() {
            return;
        }
        debug_assert_eq!(self.objs[from].h + 1, self.objs[to].h);
        let prev = self.objs[from].out.insert(to, m);
        debug_assert!(prev.is_none());
        self.objs[to].inn.insert(from);
    }

    fn remove_entry(&mut self, from: usize, to: usize) -> Option<Morphism<R>> {
        let m = self.objs[from].out.remove(&to);
        if m.is_some() {
            self.objs[to].inn.remove(&from);
        }
        m
    }

    fn cap_label(&self, m: &Morphism<R>, c: u32, label: Label) -> Morphism<R> {
        let dotted = cap_off(m, Side::Src, c, 1, &self.h, &self.t);
        let plain = cap_off(m, Side::Src, c, 0, &self.h, &self.t);
        if R::characteristic() == 2 {
            // Bar-Natan idempotents X and 1 + X
            match label {
                Label::A => dotted,
                Label::B => dotted.add(&plain),
            }
        } else {
            let half = R::half().expect("characteristic 2 requires the Bar-Natan theory");
            match label {
                Label::A => dotted.add(&plain).scale(&half),
                Label::B => dotted.add(&plain.neg()).scale(&half),
            }
        }
    }

    /// Insert a crossing-free loop of the diagram (index `loop_idx`).
    pub fn append_free_loop(&mut self, loop_idx: usize) -> Result<(), EngineError> {
        let ids = self.live_ids();
        let mut obj_circle: BTreeMap<usize, u32> = BTreeMap::new();
        for &i in &ids {
            let c = self.next_circle;
            self.next_circle += 1;
            self.objs[i].tangle.circles.insert(c);
            obj_circle.insert(i, c);
        }
        for &i in &ids {
            let outs: Vec<usize> = self.objs[i].out.keys().copied().collect();
            for j in outs {
                let m = self.objs[i].out.remove(&j).unwrap();
                let cyl = CobComp {
                    src_circles: BTreeSet::from([obj_circle[&i]]),
                    tgt_circles: BTreeSet::from([obj_circle[&j]]),
                    ..Default::default()
                };
                let m2 = Morphism {
                    terms: m
                        .terms
                        .into_iter()
                        .map(|(mut cob, v)| {
                            cob.comps.push(cyl.clone());
                            (cob.normalize_order(), v)
                        })
                        .collect(),
                };
                self.objs[i].out.insert(j, m2);
            }
        }
        // chains: add the cylinder from the chain's own source circle, then
        // cap it with the loop's idempotent label
        for ci in 0..self.chains.len() {
            let c_src = self.next_circle;
            self.next_circle += 1;
            self.chains[ci].src.circles.insert(c_src);
            let label = self.chains[ci].spec.loop_labels[loop_idx];
            let keys: Vec<usize> = self.chains[ci].comps.keys().copied().collect();
            for v in keys {
                let m = self.chains[ci].comps.remove(&v).unwrap();
                let cyl = CobComp {
                    src_circles: BTreeSet::from([c_src]),
                    tgt_circles: BTreeSet::from([obj_circle[&v]]),
                    ..Default::default()
                };
                let m2 = Morphism {
                    terms: m
                        .terms
                        .into_iter()
                        .map(|(mut cob, vv)| {
                            cob.comps.push(cyl.clone());
                            (cob.normalize_order(), vv)
                        })
                        .collect(),
                };
                let capped = self.cap_label(&m2, c_src, label);
                if !capped.is_zero() {
                    self.chains[ci].comps.insert(v, capped);
                }
            }
            self.chains[ci].src.circles.remove(&c_src);
        }
        self.reduce()
    }

    pub fn append_crossing(&mut self, c: &Crossing, index: usize) -> Result<(), EngineError> {
        let mini = mini_for(c);
        let shared: BTreeSet<Port> =
            mini.ports.iter().copied().filter(|p| self.open_ports.contains(p)).collect();
        let shifts = local_shifts(c.sign);

        let ids = self.live_ids();
        // build the two smoothing copies of each object
        let mut copy: BTreeMap<(usize, u8), usize> = BTreeMap::new();
        let mut info: BTreeMap<(usize, u8), ConnectInfo> = BTreeMap::new();
        for &i in &ids {
            for s in 0..2u8 {
                let inf = connect_tangle(
                    &self.objs[i].tangle,
                    &mini.arcs[s as usize],
                    mini.circles[s as usize].len(),
                    &mut self.next_circle,
                );
                let (dh, dq) = shifts[s as usize];
                let idx = self.objs.len();
                self.objs.push(Obj {
                    tangle: inf.tangle.clone(),
                    h: self.objs[i].h + dh,
                    q: self.objs[i].q + dq,
                    w: self.objs[i].w + s as u32,
                    out: BTreeMap::new(),
                    inn: BTreeSet::new(),
                    alive: true,
                });
                copy.insert((i, s), idx);
                info.insert((i, s), inf);
            }
        }

        // transferred entries: f ⊗ id(smoothing)
        for &i in &ids {
            let outs: Vec<(usize, Morphism<R>)> =
                self.objs[i].out.iter().map(|(&j, m)| (j, m.clone())).collect();
            for (j, f) in outs {
                for s in 0..2u8 {
                    let id_mini = self.mini_identity(&mini, s, &info[&(i, s)], &info[&(j, s)]);
                    let nf = cob_connect(
                        &f,
                        &id_mini,
                        &shared,
                        &info[&(i, s)].formed,
                        &info[&(j, s)].formed,
                        &self.h,
                        &self.t,
                    );
                    if !nf.is_zero() {
                        self.add_entry(copy[&(i, s)], copy[&(j, s)], nf);
                    }
                }
            }
        }

        // saddle entries: (−1)^w id(V) ⊗ saddle
        for &i in &ids {
            let saddle = self.saddle_morphism(&mini, &info[&(i, 0)], &info[&(i, 1)]);
            let idv = Morphism::identity(&self.objs[i].tangle);
            let mut m = cob_connect(
                &idv,
                &saddle,
                &shared,
                &info[&(i, 0)].formed,
                &info[&(i, 1)].formed,
                &self.h,
                &self.t,
            );
            if self.objs[i].w % 2 == 1 {
                m = m.neg();
            }
            if !m.is_zero() {
                self.add_entry(copy[&(i, 0)], copy[&(i, 1)], m);
            }
        }

        // tracked chains follow their own smoothing choice
        for ci in 0..self.chains.len() {
            let s = self.chains[ci].spec.choices[index];
            let src_inf = connect_tangle(
                &self.chains[ci].src,
                &mini.arcs[s as usize],
                mini.circles[s as usize].len(),
                &mut self.next_circle,
            );
            let old: Vec<(usize, Morphism<R>)> =
                self.chains[ci].comps.iter().map(|(&v, m)| (v, m.clone())).collect();
            let mut comps = BTreeMap::new();
            for (v, z) in old {
                let id_mini = self.mini_identity(&mini, s, &src_inf, &info[&(v, s)]);
                let mut nz = cob_connect(
                    &z,
                    &id_mini,
                    &shared,
                    &src_inf.formed,
                    &info[&(v, s)].formed,
                    &self.h,
                    &self.t,
                );
                // cap the resolution circles that closed on the source side
                for (ports, &cid) in &src_inf.formed {
                    let label = self.chains[ci].spec.edge_labels[&ports[0]];
                    nz = self.cap_label(&nz, cid, label);
                }
                for (k, &cid) in src_inf.appended.iter().enumerate() {
                    let e = mini.circles[s as usize][k][0];
                    let label = self.chains[ci].spec.edge_labels[&e];
                    nz = self.cap_label(&nz, cid, label);
                }
                if !nz.is_zero() {
                    comps.insert(copy[&(v, s)], nz);
                }
            }
            let mut new_src = src_inf.tangle.clone();
            for (_, &cid) in &src_inf.formed {
                new_src.circles.remove(&cid);
            }
            for &cid in &src_inf.appended {
                new_src.circles.remove(&cid);
            }
            self.chains[ci].src = new_src;
            self.chains[ci].comps = comps;
        }

        // retire the old objects
        for &i in &ids {
            self.objs[i].alive = false;
            let outs: Vec<usize> = self.objs[i].out.keys().copied().collect();
            for j in outs {
                self.remove_entry(i, j);
            }
            let inns: Vec<usize> = self.objs[i].inn.iter().copied().collect();
            for j in inns {
                self.remove_entry(j, i);
            }
        }

        // bookkeeping of open ports
        for p in &mini.ports {
            if self.open_ports.contains(p) {
                self.open_ports.remove(p);
            } else {
                self.open_ports.insert(*p);
            }
        }

        self.reduce()
    }

    /// Identity cobordism of one smoothing of the mini tangle, with circle
    /// ids drawn from the source/target connect registries.
    fn mini_identity(
        &self,
        mini: &Mini,
        s: u8,
        src_inf: &ConnectInfo,
        tgt_inf: &ConnectInfo,
    ) -> Morphism<R> {
        let mut comps: Vec<CobComp> = mini.arcs[s as usize]
            .iter()
            .map(|&(a, b)| {
                let arc = (a.min(b), a.max(b));
                CobComp {
                    src_arcs: BTreeSet::from([arc]),
                    tgt_arcs: BTreeSet::from([arc]),
                    ..Default::default()
                }
            })
            .collect();
        for k in 0..mini.circles[s as usize].len() {
            comps.push(CobComp {
                src_circles: BTreeSet::from([src_inf.appended[k]]),
                tgt_circles: BTreeSet::from([tgt_inf.appended[k]]),
                ..Default::default()
            });
        }
        Morphism::from_cob(Cob { comps })
    }

    /// The saddle cobordism between the two smoothings of a crossing,
    /// including cylinders over self-incident edges.
    fn saddle_morphism(
        &self,
        mini: &Mini,
        inf0: &ConnectInfo,
        inf1: &ConnectInfo,
    ) -> Morphism<R> {
        let mut comp = CobComp {
            src_arcs: mini.arcs[0].iter().map(|&(a, b)| (a.min(b), a.max(b))).collect(),
            tgt_arcs: mini.arcs[1].iter().map(|&(a, b)| (a.min(b), a.max(b))).collect(),
            src_circles: inf0.appended.iter().copied().collect(),
            tgt_circles: inf1.appended.iter().copied().collect(),
            genus: 0,
            dots: 0,
        };
        let chi = 1 - mini.n_self as i64;
        let beta = comp.boundary_circles() as i64;
        let two_g = 2 - beta - chi;
        assert!(two_g >= 0 && two_g % 2 == 0, "saddle genus: chi={chi} beta={beta}");
        comp.genus = (two_g / 2) as u32;
        Morphism::from_cob(Cob { comps: vec![comp] })
    }

    /// Deloop every closed circle, then exhaust filtered Gaussian elimination.
    fn reduce(&mut self) -> Result<(), EngineError> {
        loop {
            let Some((i, c)) = self.find_circle() else {
                break;
            };
            self.deloop(i, c);
            if self.objs.len() > 4 * self.max_objects {
                return Err(EngineError::ResourceLimit {
                    max_generators: self.max_objects,
                    reached: self.live_count(),
                });
            }
            if self.live_count() > self.max_objects {
                return Err(EngineError::ResourceLimit {
                    max_generators: self.max_objects,
                    reached: self.live_count(),
                });
            }
        }
        while let Some((i, j)) = self.find_pivot() {
            self.eliminate(i, j);
        }
        self.compact();
        Ok(())
    }

    fn find_circle(&self) -> Option<(usize, u32)> {
        for (i, o) in self.objs.iter().enumerate() {
            if o.alive {
                if let Some(&c) = o.tangle.circles.iter().next() {
                    return Some((i, c));
                }
            }
        }
        None
    }

    fn deloop(&mut self, i: usize, c: u32) {
        let tangle = self.objs[i].tangle.without_circle(c);
        let (h, q, w) = (self.objs[i].h, self.objs[i].q, self.objs[i].w);
        let plus = self.objs.len();
        let minus = plus + 1;
        for dq in [1i64, -1] {
            self.objs.push(Obj {
                tangle: tangle.clone(),
                h,
                q: q + dq,
                w,
                out: BTreeMap::new(),
                inn: BTreeSet::new(),
                alive: true,
            });
        }
        let inns: Vec<usize> = self.objs[i].inn.iter().copied().collect();
        for j in inns {
            let f = self.remove_entry(j, i).unwrap();
            // "1"-component: dotted death − h·death; "X"-component: death
            let dotted = cap_off(&f, Side::Tgt, c, 1, &self.h, &self.t);
            let plain = cap_off(&f, Side::Tgt, c, 0, &self.h, &self.t);
            let fp = dotted.add(&plain.scale(&self.h).neg());
            if !fp.is_zero() {
                self.add_entry(j, plus, fp);
            }
            if !plain.is_zero() {
                self.add_entry(j, minus, plain);
            }
        }
        let outs: Vec<usize> = self.objs[i].out.keys().copied().collect();
        for j in outs {
            let f = self.remove_entry(i, j).unwrap();
            let birth = cap_off(&f, Side::Src, c, 0, &self.h, &self.t);
            let dotted = cap_off(&f, Side::Src, c, 1, &self.h, &self.t);
            if !birth.is_zero() {
                self.add_entry(plus, j, birth);
            }
            if !dotted.is_zero() {
                self.add_entry(minus, j, dotted);
            }
        }
        for ch in self.chains.iter_mut() {
            if let Some(z) = ch.comps.remove(&i) {
                let dotted = cap_off(&z, Side::Tgt, c, 1, &self.h, &self.t);
                let plain = cap_off(&z, Side::Tgt, c, 0, &self.h, &self.t);
                let zp = dotted.add(&plain.scale(&self.h).neg());
                if !zp.is_zero() {
                    ch.comps.insert(plus, zp);
                }
                if !plain.is_zero() {
                    ch.comps.insert(minus, plain);
                }
            }
        }
        self.objs[i].alive = false;
    }

    /// Invertible entry with least fill-in, ties by lowest (src, tgt).
    fn find_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, o) in self.objs.iter().enumerate() {
            if !o.alive {
                continue;
            }
            for (&j, f) in &o.out {
                if self.objs[j].q != o.q || o.tangle != self.objs[j].tangle {
                    continue;
                }
                if f.as_unit_identity().is_none() {
                    continue;
                }
                let score = (o.out.len() - 1) * (self.objs[j].inn.len() - 1);
                if best.map_or(true, |(s, bi, bj)| (score, i, j) < (s, bi, bj)) {
                    best = Some((score, i, j));
                    if score == 0 {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn eliminate(&mut self, k0: usize, k1: usize) {
        let alpha = self.remove_entry(k0, k1).expect("pivot entry");
        let cinv = alpha
            .as_unit_identity()
            .expect("pivot must be a unit multiple of the identity")
            .inv()
            .expect("unit");
        let middle = self.objs[k0].tangle.clone();
        let into_k1: Vec<usize> = self.objs[k1].inn.iter().copied().filter(|&x| x != k0).collect();
        let from_k0: Vec<usize> = self.objs[k0].out.keys().copied().filter(|&x| x != k1).collect();

        for &l0 in &into_k1 {
            let psi = self.objs[l0].out[&k1].clone();
            for &l1 in &from_k0 {
                let phi = self.objs[k0].out[&l1].clone();
                let corr = compose(&psi, &phi, &middle, &self.h, &self.t)
                    .scale(&cinv)
                    .neg();
                if corr.is_zero() {
                    continue;
                }
                let merged = match self.remove_entry(l0, l1) {
                    Some(old) => old.add(&corr),
                    None => corr,
                };
                if !merged.is_zero() {
                    self.add_entry(l0, l1, merged);
                }
            }
        }

        // chains: z_{l1} -= φ ∘ α⁻¹ ∘ z_{k1}
        for ci in 0..self.chains.len() {
            let Some(zk1) = self.chains[ci].comps.get(&k1).cloned() else {
                continue;
            };
            for &l1 in &from_k0 {
                let phi = self.objs[k0].out[&l1].clone();
                let corr = compose(&zk1, &phi, &middle, &self.h, &self.t)
                    .scale(&cinv)
                    .neg();
                if corr.is_zero() {
                    continue;
                }
                let entry = self.chains[ci].comps.remove(&l1);
                let merged = match entry {
                    Some(old) => old.add(&corr),
                    None => corr,
                };
                if !merged.is_zero() {
                    self.chains[ci].comps.insert(l1, merged);
                }
            }
        }
        for ch in self.chains.iter_mut() {
            ch.comps.remove(&k0);
            ch.comps.remove(&k1);
        }

        for obj in [k0, k1] {
            let outs: Vec<usize> = self.objs[obj].out.keys().copied().collect();
            for j in outs {
                self.remove_entry(obj, j);
            }
            let inns: Vec<usize> = self.objs[obj].inn.iter().copied().collect();
            for j in inns {
                self.remove_entry(j, obj);
            }
            self.objs[obj].alive = false;
        }
    }

    /// Drop dead arena slots, remapping indices.
    fn compact(&mut self) {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut objs: Vec<Obj<R>> = Vec::new();
        for (i, o) in self.objs.iter().enumerate() {
            if o.alive {
                remap.insert(i, objs.len());
                objs.push(Obj {
                    tangle: o.tangle.clone(),
                    h: o.h,
                    q: o.q,
                    w: o.w,
                    out: BTreeMap::new(),
                    inn: BTreeSet::new(),
                    alive: true,
                });
            }
        }
        for (i, o) in self.objs.iter().enumerate() {
            if !o.alive {
                continue;
            }
            for (&j, m) in &o.out {
                let (ni, nj) = (remap[&i], remap[&j]);
                objs[ni].out.insert(nj, m.clone());
                objs[nj].inn.insert(ni);
            }
        }
        for ch in self.chains.iter_mut() {
            let comps = std::mem::take(&mut ch.comps);
            ch.comps = comps.into_iter().map(|(v, m)| (remap[&v], m)).collect();
        }
        self.objs = objs;
    }

    pub fn finalize(mut self) -> Result<ScanResult<R>, EngineError> {
        self.compact();
        for o in &self.objs {
            if !o.tangle.is_empty() {
                return Err(EngineError::InvalidInput(
                    "scan finished with open tangles; diagram is inconsistent".into(),
                ));
            }
        }
        let gens: Vec<(i64, i64)> = self.objs.iter().map(|o| (o.h, o.q)).collect();
        let mut d: Vec<Vec<(usize, R)>> = vec![Vec::new(); gens.len()];
        for (i, o) in self.objs.iter().enumerate() {
            for (&j, m) in &o.out {
                let v = m.scalar();
                if !v.is_zero() {
                    d[i].push((j, v));
                }
            }
        }
        let chains = self
            .chains
            .iter()
            .map(|ch| {
                ch.comps
                    .iter()
                    .map(|(&v, m)| (v, m.scalar()))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Ok(ScanResult { complex: BigradedComplex { gens, d }, chains })
    }
}

/// Build the scan-reduced complex of a diagram, tracking the given cycles.
pub fn scan_complex<R: Coeff>(
    diag: &LinkDiagram,
    theory: Theory,
    tracked: &[TrackedSpec],
    opts: &ScanOptions,
) -> Result<ScanResult<R>, EngineError> {
    diag.validate().map_err(EngineError::InvalidInput)?;
    let mut sc = Scanner::<R>::new(theory, opts);
    for spec in tracked {
        if spec.choices.len() != diag.crossing_count() {
            return Err(EngineError::InvalidInput("tracked spec length mismatch".into()));
        }
        sc.track(spec.clone());
    }
    for li in 0..diag.free_loops {
        sc.append_free_loop(li)?;
    }
    let verbose = std::env::var("TORKH_SCAN_VERBOSE").is_ok();
    for (ci, c) in diag.crossings.iter().enumerate() {
        let t0 = std::time::Instant::now();
        sc.append_crossing(c, ci)?;
        if verbose {
            let entries: usize = sc.objs.iter().map(|o| o.out.len()).sum();
            eprintln!(
                "crossing {ci}: {} objects, {} entries, {:?}",
                sc.live_count(),
                entries,
                t0.elapsed()
            );
        }
    }
    sc.finalize()
}
