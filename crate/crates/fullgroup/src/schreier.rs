//! Finite partial Schreier graphs of free-group actions.
//!
//! A `PartialAction` records, for each free generator, a partial injection
//! of a finite vertex set; the mixed-direction graph is expected to be
//! connected.  The module enumerates all such graphs up to labeled
//! isomorphism (streamed smallest first), completes a graph into a genuine
//! permutation action with a distinguished fixed point of the second
//! generator, extracts radius balls, and searches for labeled copies of one
//! graph inside another.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A partial action of the free group on `r` generators on a finite vertex
/// set: one partial injective map per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAction {
    maps: Vec<Vec<Option<usize>>>,
}

/// A generator image would break functionality, injectivity, or the vertex
/// range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidAction;

impl fmt::Display for InvalidAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generator maps must be partial injections on the vertex set")
    }
}

impl PartialAction {
    /// The edgeless graph on `size` vertices.
    pub fn empty(rank: usize, size: usize) -> PartialAction {
        assert!(rank >= 1);
        PartialAction {
            maps: alloc::vec![alloc::vec![None; size]; rank],
        }
    }

    pub fn from_maps(maps: Vec<Vec<Option<usize>>>) -> Result<PartialAction, InvalidAction> {
        let size = match maps.first() {
            Some(m) => m.len(),
            None => return Err(InvalidAction),
        };
        for map in &maps {
            if map.len() != size {
                return Err(InvalidAction);
            }
            let mut seen = alloc::vec![false; size];
            for &img in map.iter().flatten() {
                if img >= size || seen[img] {
                    return Err(InvalidAction);
                }
                seen[img] = true;
            }
        }
        Ok(PartialAction { maps })
    }

    pub fn size(&self) -> usize {
        self.maps[0].len()
    }

    pub fn rank(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<Option<usize>>] {
        &self.maps
    }

    /// Image of `v` under generator `gen` (zero-based), if defined.
    pub fn image(&self, gen: usize, v: usize) -> Option<usize> {
        self.maps[gen][v]
    }

    /// Adds the edge `src → dst` with label `gen`, refusing conflicts.
    pub fn add_edge(&mut self, gen: usize, src: usize, dst: usize) -> Result<(), InvalidAction> {
        if dst >= self.size() || self.maps[gen][src].is_some() {
            return Err(InvalidAction);
        }
        if self.maps[gen].iter().any(|&img| img == Some(dst)) {
            return Err(InvalidAction);
        }
        self.maps[gen][src] = Some(dst);
        Ok(())
    }

    fn inverses(&self) -> Vec<Vec<Option<usize>>> {
        let mut inv = alloc::vec![alloc::vec![None; self.size()]; self.rank()];
        for (i, map) in self.maps.iter().enumerate() {
            for (v, &img) in map.iter().enumerate() {
                if let Some(w) = img {
                    inv[i][w] = Some(v);
                }
            }
        }
        inv
    }

    /// Whether the mixed-direction graph is connected.
    pub fn is_connected(&self) -> bool {
        bfs_order(self, &self.inverses(), 0, None).len() == self.size()
    }

    /// Whether every generator acts as a full permutation.
    pub fn is_total(&self) -> bool {
        self.maps
            .iter()
            .all(|map| map.iter().all(Option::is_some))
    }

    /// Relabels vertices by `pos` (old index to new index).
    #[cfg(test)]
    fn relabel(&self, pos: &[usize]) -> PartialAction {
        let mut maps = alloc::vec![alloc::vec![None; self.size()]; self.rank()];
        for (i, map) in self.maps.iter().enumerate() {
            for (v, &img) in map.iter().enumerate() {
                if let Some(w) = img {
                    maps[i][pos[v]] = Some(pos[w]);
                }
            }
        }
        PartialAction { maps }
    }
}

/// A permutation action with a marked vertex fixed by the second generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedAction {
    action: PartialAction,
    marked: usize,
}

impl MarkedAction {
    pub fn new(action: PartialAction, marked: usize) -> MarkedAction {
        assert!(action.rank() >= 2);
        assert!(action.is_total());
        assert_eq!(action.image(1, marked), Some(marked));
        MarkedAction { action, marked }
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn marked(&self) -> usize {
        self.marked
    }
}

/// A complete labeled-isomorphism invariant of a connected partial action.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalCode {
    code: Vec<u8>,
}

impl CanonicalCode {
    pub fn bytes(&self) -> &[u8] {
        &self.code
    }
}

/// The graph has unreachable vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disconnected;

impl fmt::Display for Disconnected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the mixed-direction graph is not connected")
    }
}

/// Breadth-first discovery order from `root`, scanning each vertex's edges
/// by generator and, within a generator, forward then backward.  An
/// optional radius truncates the search.
fn bfs_order(
    g: &PartialAction,
    inv: &[Vec<Option<usize>>],
    root: usize,
    radius: Option<usize>,
) -> Vec<usize> {
    let mut order = alloc::vec![root];
    let mut depth = alloc::vec![0usize];
    let mut seen = alloc::vec![false; g.size()];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        let d = depth[head];
        head += 1;
        if radius.is_some_and(|r| d == r) {
            continue;
        }
        for i in 0..g.rank() {
            for w in [g.maps[i][u], inv[i][u]].into_iter().flatten() {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    depth.push(d + 1);
                }
            }
        }
    }
    order
}

fn rooted_code(g: &PartialAction, inv: &[Vec<Option<usize>>], root: usize) -> Option<(Vec<u8>, Vec<usize>)> {
    let order = bfs_order(g, inv, root, None);
    if order.len() < g.size() {
        return None;
    }
    let mut pos = alloc::vec![usize::MAX; g.size()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let mut code = Vec::with_capacity(g.size() * g.rank() * 4);
    for &old in &order {
        for i in 0..g.rank() {
            for slot in [g.maps[i][old], inv[i][old]] {
                let entry = match slot {
                    Some(w) => pos[w] as u16 + 1,
                    None => 0,
                };
                code.extend_from_slice(&entry.to_be_bytes());
            }
        }
    }
    Some((code, pos))
}

/// The minimum over all roots of the rooted BFS relabeling code.  Equal
/// codes characterize labeled-isomorphic connected graphs: generator maps
/// are partial injections, so a rooted labeled isomorphism is unique when
/// it exists.
pub fn canonical_code(g: &PartialAction) -> Result<CanonicalCode, Disconnected> {
    Ok(CanonicalCode {
        code: canonical_data(g).ok_or(Disconnected)?.0,
    })
}

/// Minimal rooted code together with its relabeling (old index to new).
fn canonical_data(g: &PartialAction) -> Option<(Vec<u8>, Vec<usize>)> {
    let inv = g.inverses();
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    for root in 0..g.size() {
        let (code, pos) = rooted_code(g, &inv, root)?;
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, pos));
        }
    }
    best
}

/// Streams every connected partial action with a missing half-edge and
/// vertex count in `[min_verts, max_verts]`, one representative per labeled
/// isomorphism class, ordered by vertex count and then canonical code.
pub fn enumerate_partial_actions(
    rank: usize,
    min_verts: usize,
    max_verts: usize,
) -> Enumeration {
    assert!(rank >= 2);
    assert!(min_verts >= 1 && min_verts <= max_verts);
    Enumeration {
        rank,
        size: min_verts,
        max_verts,
        batch: Vec::new().into_iter(),
        started: false,
    }
}

pub struct Enumeration {
    rank: usize,
    size: usize,
    max_verts: usize,
    batch: alloc::vec::IntoIter<PartialAction>,
    started: bool,
}

impl Iterator for Enumeration {
    type Item = PartialAction;

    fn next(&mut self) -> Option<PartialAction> {
        loop {
            if let Some(g) = self.batch.next() {
                return Some(g);
            }
            if self.started {
                self.size += 1;
            }
            self.started = true;
            if self.size > self.max_verts {
                return None;
            }
            self.batch = classes_of_size(self.rank, self.size).into_iter();
        }
    }
}

/// All classes with exactly `size` vertices, sorted by canonical code.
fn classes_of_size(rank: usize, size: usize) -> Vec<PartialAction> {
    let mut state = Search {
        rank,
        size,
        maps: alloc::vec![alloc::vec![None; size]; rank],
        taken: alloc::vec![alloc::vec![false; size]; rank],
        out: Vec::new(),
    };
    state.descend(0);
    state.out.sort_by(|a, b| a.0.cmp(&b.0));
    state.out.into_iter().map(|(_, g)| g).collect()
}

struct Search {
    rank: usize,
    size: usize,
    maps: Vec<Vec<Option<usize>>>,
    taken: Vec<Vec<bool>>,
    out: Vec<(Vec<u8>, PartialAction)>,
}

impl Search {
    /// Assigns slot `s` (vertex-major over generators) and recurses.
    /// Vertices are forced into BFS-compatible labelings: each vertex past
    /// the first must touch a smaller one once its own slots are filled,
    /// which also guarantees connectivity at the leaves.
    fn descend(&mut self, s: usize) {
        if s == self.size * self.rank {
            self.harvest();
            return;
        }
        let (v, i) = (s / self.rank, s % self.rank);
        let last_of_vertex = i == self.rank - 1;
        for choice in core::iter::once(None).chain((0..self.size).map(Some)) {
            if let Some(t) = choice {
                if self.taken[i][t] {
                    continue;
                }
                self.taken[i][t] = true;
            }
            self.maps[i][v] = choice;
            if !(last_of_vertex && v > 0 && !self.touches_smaller(v)) {
                self.descend(s + 1);
            }
            self.maps[i][v] = None;
            if let Some(t) = choice {
                self.taken[i][t] = false;
            }
        }
    }

    fn touches_smaller(&self, v: usize) -> bool {
        for i in 0..self.rank {
            if self.maps[i][v].is_some_and(|w| w < v) {
                return true;
            }
            for u in 0..v {
                if self.maps[i][u] == Some(v) {
                    return true;
                }
            }
        }
        false
    }

    fn harvest(&mut self) {
        if self
            .taken
            .iter()
            .all(|gen| gen.iter().all(|&t| t))
        {
            return;
        }
        let g = PartialAction {
            maps: self.maps.clone(),
        };
        let inv = g.inverses();
        let Some((own, pos)) = rooted_code(&g, &inv, 0) else {
            return;
        };
        if pos.iter().enumerate().any(|(v, &p)| v != p) {
            return;
        }
        for root in 1..self.size {
            let (code, _) = rooted_code(&g, &inv, root).expect("connected by construction");
            if code < own {
                return;
            }
        }
        self.out.push((own, g));
    }
}

/// Nothing left to complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoMissingEdge;

impl fmt::Display for NoMissingEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "every generator already acts by a permutation")
    }
}

/// Completes a partial action into a permutation action with a marked
/// point.  Two fresh vertices are added: the canonically least vertex
/// missing an outgoing edge for the least such generator gets an edge to
/// the first, the first maps to the second under the first generator, the
/// second carries a loop of the second generator; every remaining maximal
/// segment is then closed into a cycle.
pub fn extend_marked(g: &PartialAction) -> Result<MarkedAction, NoMissingEdge> {
    assert!(g.rank() >= 2);
    let code_pos = canonical_data(g)
        .expect("completion expects a connected graph")
        .1;
    let mut choice: Option<(usize, usize)> = None;
    for i in 0..g.rank() {
        for v in 0..g.size() {
            if g.maps[i][v].is_none()
                && choice.is_none_or(|(_, best)| code_pos[v] < code_pos[best])
            {
                choice = Some((i, v));
            }
        }
        if choice.is_some() {
            break;
        }
    }
    let (l, zeta) = choice.ok_or(NoMissingEdge)?;
    let m = g.size();
    let (delta, xi) = (m, m + 1);
    let mut maps: Vec<Vec<Option<usize>>> = g
        .maps
        .iter()
        .map(|map| {
            let mut map = map.clone();
            map.extend([None, None]);
            map
        })
        .collect();
    maps[l][zeta] = Some(delta);
    maps[0][delta] = Some(xi);
    maps[1][xi] = Some(xi);
    for map in maps.iter_mut() {
        close_segments(map);
    }
    let action = PartialAction::from_maps(maps).expect("closure keeps maps injective");
    Ok(MarkedAction::new(action, xi))
}

/// Adds an edge from the end of every maximal oriented segment back to its
/// beginning, turning a partial injection into a permutation.
fn close_segments(map: &mut [Option<usize>]) {
    let size = map.len();
    let mut has_preimage = alloc::vec![false; size];
    for &img in map.iter().flatten() {
        has_preimage[img] = true;
    }
    for start in 0..size {
        if has_preimage[start] {
            continue;
        }
        let mut end = start;
        while let Some(next) = map[end] {
            end = next;
        }
        map[end] = Some(start);
    }
}

/// The induced labeled subgraph on vertices within `radius` of `root`,
/// relabeled so the root is vertex 0 and the rest follow in BFS order.
pub fn ball_of(g: &PartialAction, root: usize, radius: usize) -> PartialAction {
    let inv = g.inverses();
    let order = bfs_order(g, &inv, root, Some(radius));
    let mut pos = alloc::vec![usize::MAX; g.size()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let mut maps = alloc::vec![alloc::vec![None; order.len()]; g.rank()];
    for (i, map) in g.maps.iter().enumerate() {
        for &old in &order {
            if let Some(w) = map[old] {
                if pos[w] != usize::MAX {
                    maps[i][pos[old]] = Some(pos[w]);
                }
            }
        }
    }
    PartialAction { maps }
}

/// Searches for an injective, label- and orientation-preserving
/// homomorphism of `pattern` into `host`, realized on every pattern edge.
/// Returns the vertex images indexed by pattern vertex.  `anchor` pins a
/// prescribed pattern-to-host correspondence; otherwise each host vertex is
/// tried in turn as the image of the pattern's canonical root.
pub fn contains_labeled_copy(
    host: &PartialAction,
    pattern: &PartialAction,
    anchor: Option<(usize, usize)>,
) -> Option<Vec<usize>> {
    assert_eq!(host.rank(), pattern.rank());
    let host_inv = host.inverses();
    let pat_inv = pattern.inverses();
    let (seed_p, candidates): (usize, Vec<usize>) = match anchor {
        Some((p, h)) => (p, alloc::vec![h]),
        None => {
            let root = canonical_root(pattern).expect("pattern must be connected");
            (root, (0..host.size()).collect())
        }
    };
    'seed: for &seed_h in &candidates {
        let mut image = alloc::vec![usize::MAX; pattern.size()];
        let mut used = alloc::vec![false; host.size()];
        image[seed_p] = seed_h;
        used[seed_h] = true;
        let mut queue = alloc::vec![seed_p];
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for i in 0..pattern.rank() {
                let steps = [
                    (pattern.maps[i][u], host.maps[i][image[u]]),
                    (pat_inv[i][u], host_inv[i][image[u]]),
                ];
                for (pat_next, host_next) in steps {
                    let Some(w) = pat_next else { continue };
                    let Some(x) = host_next else { continue 'seed };
                    if image[w] == usize::MAX {
                        if used[x] {
                            continue 'seed;
                        }
                        image[w] = x;
                        used[x] = true;
                        queue.push(w);
                    } else if image[w] != x {
                        continue 'seed;
                    }
                }
            }
        }
        if queue.len() == pattern.size() {
            return Some(image);
        }
    }
    None
}

/// The first vertex whose rooted code attains the canonical minimum.
fn canonical_root(g: &PartialAction) -> Option<usize> {
    let inv = g.inverses();
    let mut best: Option<(Vec<u8>, usize)> = None;
    for root in 0..g.size() {
        let (code, _) = rooted_code(g, &inv, root)?;
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, root));
        }
    }
    best.map(|(_, root)| root)
}

/// Deterministic DOT rendering; the marked vertex is double-circled.
pub fn to_dot(g: &PartialAction, marked: Option<usize>) -> String {
    let mut out = String::from("digraph schreier {\n  rankdir=LR;\n");
    for v in 0..g.size() {
        let shape = if marked == Some(v) {
            "doublecircle"
        } else {
            "circle"
        };
        out.push_str(&alloc::format!("  {} [shape={}];\n", v, shape));
    }
    for v in 0..g.size() {
        for i in 0..g.rank() {
            if let Some(w) = g.maps[i][v] {
                out.push_str(&alloc::format!(
                    "  {} -> {} [label=\"a{}\"];\n",
                    v,
                    w,
                    i + 1
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}
