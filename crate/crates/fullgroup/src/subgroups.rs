//! Finitely generated subgroups of a free group as folded core automata.
//!
//! A subgroup is stored as its Stallings automaton: a connected labeled
//! graph with a base vertex, one partial injection per generator, folded so
//! words trace unique paths.  Membership, index, perfect-kernel membership,
//! Hall completions, and the isolation witnesses built from them are all
//! decided exactly on this structure.  Vertices are normalized to BFS order
//! from the base, so structural equality is equality of subgroups as
//! marked automata.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::schreier::PartialAction;
use crate::uf::UnionFind;

/// One free generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn positive(gen: usize) -> Letter {
        Letter { gen, inv: false }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.inv { 'A' } else { 'a' };
        write!(f, "{}{}", tag, self.gen + 1)
    }
}

/// A freely reduced word over the generators and their inverses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    /// Builds a word, freely reducing adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut out = Word::identity();
        for _ in 0..n {
            out = out.concat(self);
        }
        out
    }

    /// The largest generator index used, plus one.
    pub fn rank_hint(&self) -> usize {
        self.letters.iter().map(|l| l.gen + 1).max().unwrap_or(0)
    }

    /// Shortlex: length first, then letterwise.
    pub fn shlex_cmp(&self, other: &Word) -> core::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// The string is not a word: expected tokens like `a1`, `A2`, whitespace
/// allowed, or `e` for the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordParseError;

impl fmt::Display for WordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected letters like a1 or A2 (or e for the identity)")
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Word, WordParseError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "e" || compact.is_empty() {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        let mut chars = compact.chars().peekable();
        while let Some(c) = chars.next() {
            let inv = match c {
                'a' => false,
                'A' => true,
                _ => return Err(WordParseError),
            };
            let mut digits = String::new();
            while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                digits.push(chars.next().unwrap());
            }
            let n: usize = digits.parse().map_err(|_| WordParseError)?;
            if n == 0 {
                return Err(WordParseError);
            }
            letters.push(Letter { gen: n - 1, inv });
        }
        Ok(Word::from_letters(letters))
    }
}

/// A folded core Stallings automaton; the base vertex is always 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsAutomaton {
    maps: Vec<Vec<Option<usize>>>,
}

/// The subgroup's index in the ambient free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{}", n),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

impl StallingsAutomaton {
    pub fn rank(&self) -> usize {
        self.maps.len()
    }

    pub fn size(&self) -> usize {
        self.maps[0].len()
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn maps(&self) -> &[Vec<Option<usize>>] {
        &self.maps
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

    /// One step along `letter` from `v`, if the edge exists.
    fn step(&self, inv: &[Vec<Option<usize>>], v: usize, letter: Letter) -> Option<usize> {
        if letter.inv {
            inv[letter.gen][v]
        } else {
            self.maps[letter.gen][v]
        }
    }

    /// The same labeled graph as a partial action, for export.
    pub fn as_graph(&self) -> PartialAction {
        PartialAction::from_maps(self.maps.clone()).expect("automaton maps are partial injections")
    }
}

/// The Stallings automaton of `⟨gens⟩ ≤ F_rank`: wedge of loops, folded,
/// hair pruned, vertices normalized to BFS order from the base.
pub fn subgroup_from_generators(rank: usize, gens: &[Word]) -> StallingsAutomaton {
    assert!(rank >= 1);
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut fresh = 1;
    for w in gens {
        assert!(w.rank_hint() <= rank, "letter outside the ambient group");
        let mut at = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            let next = if i + 1 == w.len() { 0 } else { fresh };
            if i + 1 != w.len() {
                fresh += 1;
            }
            if l.inv {
                edges.push((l.gen, next, at));
            } else {
                edges.push((l.gen, at, next));
            }
            at = next;
        }
    }
    fold_and_normalize(rank, fresh, edges)
}

fn fold_and_normalize(
    rank: usize,
    vertices: usize,
    edges: Vec<(usize, usize, usize)>,
) -> StallingsAutomaton {
    let mut uf = UnionFind::new(vertices);
    loop {
        let canon: BTreeSet<(usize, usize, usize)> = edges
            .iter()
            .map(|&(g, s, d)| (g, uf.find(s), uf.find(d)))
            .collect();
        let mut changed = false;
        let mut by_src: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut by_dst: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(g, s, d) in &canon {
            if let Some(&other) = by_src.get(&(g, s)) {
                if other != d {
                    uf.union(other, d);
                    changed = true;
                }
            } else {
                by_src.insert((g, s), d);
            }
            if let Some(&other) = by_dst.get(&(g, d)) {
                if other != s {
                    uf.union(other, s);
                    changed = true;
                }
            } else {
                by_dst.insert((g, d), s);
            }
        }
        if !changed {
            break;
        }
    }
    let folded: BTreeSet<(usize, usize, usize)> = edges
        .iter()
        .map(|&(g, s, d)| (g, uf.find(s), uf.find(d)))
        .collect();
    let base = uf.find(0);

    let mut alive: BTreeSet<usize> = (0..vertices).map(|v| uf.find(v)).collect();
    let mut kept: BTreeSet<(usize, usize, usize)> = folded;
    loop {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(_, s, d) in &kept {
            *degree.entry(s).or_insert(0) += 1;
            *degree.entry(d).or_insert(0) += 1;
        }
        let hair: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&v| v != base && degree.get(&v).copied().unwrap_or(0) <= 1)
            .collect();
        if hair.is_empty() {
            break;
        }
        for v in hair {
            alive.remove(&v);
            kept.retain(|&(_, s, d)| s != v && d != v);
        }
    }

    let mut order = alloc::vec![base];
    let mut pos: BTreeMap<usize, usize> = BTreeMap::new();
    pos.insert(base, 0);
    let mut fwd: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut bwd: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(g, s, d) in &kept {
        fwd.insert((g, s), d);
        bwd.insert((g, d), s);
    }
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for g in 0..rank {
            for w in [fwd.get(&(g, u)), bwd.get(&(g, u))].into_iter().flatten() {
                if !pos.contains_key(w) {
                    pos.insert(*w, order.len());
                    order.push(*w);
                }
            }
        }
    }
    let mut maps = alloc::vec![alloc::vec![None; order.len()]; rank];
    for &(g, s, d) in &kept {
        maps[g][pos[&s]] = Some(pos[&d]);
    }
    StallingsAutomaton { maps }
}

/// True iff `w` traces a loop at the base vertex.
pub fn contains_word(subgroup: &StallingsAutomaton, w: &Word) -> bool {
    let inv = subgroup.inverses();
    let mut at = subgroup.base();
    for &l in w.letters() {
        if l.gen >= subgroup.rank() {
            return false;
        }
        match subgroup.step(&inv, at, l) {
            Some(next) => at = next,
            None => return false,
        }
    }
    at == subgroup.base()
}

/// Finite iff the automaton is complete; then the vertex count is the
/// index.
pub fn index(subgroup: &StallingsAutomaton) -> Index {
    let complete = subgroup
        .maps
        .iter()
        .all(|map| map.iter().all(Option::is_some));
    if complete {
        Index::Finite(subgroup.size())
    } else {
        Index::Infinite
    }
}

/// Membership in the perfect kernel of the subgroup space: for a free
/// group on at least two generators this is exactly having infinite index.
pub fn in_perfect_kernel(subgroup: &StallingsAutomaton) -> bool {
    assert!(subgroup.rank() >= 2);
    index(subgroup) == Index::Infinite
}

/// The automaton is already complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlreadyComplete;

impl fmt::Display for AlreadyComplete {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the subgroup already has finite index")
    }
}

fn completion_with_added(
    subgroup: &StallingsAutomaton,
) -> (StallingsAutomaton, Vec<(usize, usize, usize)>) {
    let mut maps = subgroup.maps.clone();
    let mut added = Vec::new();
    for g in 0..subgroup.rank() {
        let mut has_in = alloc::vec![false; subgroup.size()];
        for &img in maps[g].iter().flatten() {
            has_in[img] = true;
        }
        let free_src: Vec<usize> = (0..subgroup.size())
            .filter(|&v| maps[g][v].is_none())
            .collect();
        let free_dst: Vec<usize> = (0..subgroup.size()).filter(|&v| !has_in[v]).collect();
        for (&s, &d) in free_src.iter().zip(&free_dst) {
            maps[g][s] = Some(d);
            added.push((g, s, d));
        }
    }
    (StallingsAutomaton { maps }, added)
}

/// Completes each generator's partial injection to a permutation, matching
/// unmatched sources to unmatched targets in vertex order.  The result is a
/// finite-index subgroup with the original as a free factor, on the same
/// vertex labeling.
pub fn hall_completion(
    subgroup: &StallingsAutomaton,
) -> Result<StallingsAutomaton, AlreadyComplete> {
    if index(subgroup) != Index::Infinite {
        return Err(AlreadyComplete);
    }
    Ok(completion_with_added(subgroup).0)
}

/// A free basis of the subgroup: BFS spanning tree from the base, one word
/// per non-tree edge.
pub fn generators(subgroup: &StallingsAutomaton) -> Vec<Word> {
    let inv = subgroup.inverses();
    let mut path: Vec<Option<Word>> = alloc::vec![None; subgroup.size()];
    path[0] = Some(Word::identity());
    let mut order = alloc::vec![0usize];
    let mut tree: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for g in 0..subgroup.rank() {
            let steps = [
                (subgroup.maps[g][u], false),
                (inv[g][u], true),
            ];
            for (next, back) in steps {
                let Some(w) = next else { continue };
                if path[w].is_none() {
                    let letter = Letter { gen: g, inv: back };
                    path[w] = Some(Word::from_letters(
                        path[u]
                            .as_ref()
                            .unwrap()
                            .letters()
                            .iter()
                            .copied()
                            .chain([letter]),
                    ));
                    tree.insert(if back { (g, w, u) } else { (g, u, w) });
                    order.push(w);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for g in 0..subgroup.rank() {
        for v in 0..subgroup.size() {
            if let Some(w) = subgroup.maps[g][v] {
                if !tree.contains(&(g, v, w)) {
                    let word = path[v]
                        .as_ref()
                        .unwrap()
                        .concat(&Word::from_letters([Letter::positive(g)]))
                        .concat(&path[w].as_ref().unwrap().inverse());
                    basis.push(word);
                }
            }
        }
    }
    basis
}

/// The largest `k ≤ radius` such that both subgroups accept exactly the
/// same reduced words of length at most `k`.
pub fn ball_agreement(
    left: &StallingsAutomaton,
    right: &StallingsAutomaton,
    radius: usize,
) -> usize {
    assert_eq!(left.rank(), right.rank());
    let linv = left.inverses();
    let rinv = right.inverses();
    let letters: Vec<Letter> = (0..left.rank())
        .flat_map(|g| [Letter::positive(g), Letter::positive(g).inverse()])
        .collect();
    type State = (Option<usize>, Option<usize>, Option<Letter>);
    let mut layer: Vec<State> = alloc::vec![(Some(0), Some(0), None)];
    let mut seen: BTreeSet<State> = layer.iter().copied().collect();
    for depth in 1..=radius {
        let mut next_layer: Vec<State> = Vec::new();
        for &(s1, s2, last) in &layer {
            for &l in &letters {
                if last == Some(l.inverse()) {
                    continue;
                }
                let t1 = s1.and_then(|v| left.step(&linv, v, l));
                let t2 = s2.and_then(|v| right.step(&rinv, v, l));
                if (t1 == Some(0)) != (t2 == Some(0)) {
                    return depth - 1;
                }
                if t1.is_none() && t2.is_none() {
                    continue;
                }
                let state = (t1, t2, Some(l));
                if seen.insert(state) {
                    next_layer.push(state);
                }
            }
        }
        if next_layer.is_empty() {
            return radius;
        }
        layer = next_layer;
    }
    radius
}

/// One step of an isolation witness sequence.
#[derive(Clone, Debug)]
pub struct IsolationStep {
    pub n: usize,
    pub generators: Vec<Word>,
    pub infinite_index: bool,
    pub agreement_radius: usize,
}

/// A sequence of subgroups converging to the witnessed one from within the
/// infinite-index part of the subgroup space.
#[derive(Clone, Debug)]
pub struct IsolationWitness {
    pub g: Word,
    pub steps: Vec<IsolationStep>,
}

/// Searches reduced loops at the base of `completion` in shortlex order,
/// returning the first that uses at least one added edge.
fn shortest_new_loop(
    completion: &StallingsAutomaton,
    added: &BTreeSet<(usize, usize, usize)>,
) -> Word {
    let inv = completion.inverses();
    let letters: Vec<Letter> = (0..completion.rank())
        .flat_map(|g| [Letter::positive(g), Letter::positive(g).inverse()])
        .collect();
    let cap = 2 * completion.size() + 1;
    for len in 1..=cap {
        let mut stack: Vec<Letter> = Vec::new();
        if let Some(w) = loop_search(completion, &inv, added, &letters, 0, false, len, &mut stack)
        {
            return w;
        }
    }
    unreachable!("an added edge always closes into a loop through the base")
}

#[allow(clippy::too_many_arguments)]
fn loop_search(
    aut: &StallingsAutomaton,
    inv: &[Vec<Option<usize>>],
    added: &BTreeSet<(usize, usize, usize)>,
    letters: &[Letter],
    at: usize,
    used_added: bool,
    remaining: usize,
    stack: &mut Vec<Letter>,
) -> Option<Word> {
    if remaining == 0 {
        if at == 0 && used_added {
            return Some(Word::from_letters(stack.iter().copied()));
        }
        return None;
    }
    for &l in letters {
        if stack.last() == Some(&l.inverse()) {
            continue;
        }
        let Some(next) = aut.step(inv, at, l) else {
            continue;
        };
        let crossing = if l.inv {
            (l.gen, next, at)
        } else {
            (l.gen, at, next)
        };
        let now_used = used_added || added.contains(&crossing);
        stack.push(l);
        let hit = loop_search(aut, inv, added, letters, next, now_used, remaining - 1, stack);
        stack.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// For an infinite-index subgroup, produces the canonical convergence
/// witness: the shortlex-least new loop `g` of its Hall completion and the
/// subgroups `⟨subgroup, gⁿ⟩` for `n = 2..=n_max`, each with its verified
/// index status and the radius up to which it agrees with the original.
pub fn isolation_witness(subgroup: &StallingsAutomaton, n_max: usize) -> IsolationWitness {
    assert!(index(subgroup) == Index::Infinite);
    assert!(n_max >= 2);
    let (completion, added_list) = completion_with_added(subgroup);
    let added: BTreeSet<(usize, usize, usize)> = added_list.into_iter().collect();
    let g = shortest_new_loop(&completion, &added);
    debug_assert!(!contains_word(subgroup, &g));
    let basis = generators(subgroup);
    let cap = (n_max + 1) * g.len() + 2;
    let mut steps = Vec::new();
    for n in 2..=n_max {
        let mut gens = basis.clone();
        gens.push(g.pow(n));
        let bigger = subgroup_from_generators(subgroup.rank(), &gens);
        steps.push(IsolationStep {
            n,
            generators: gens,
            infinite_index: index(&bigger) == Index::Infinite,
            agreement_radius: ball_agreement(subgroup, &bigger, cap),
        });
    }
    IsolationWitness { g, steps }
}

/// A basic open set of the subgroup space: subgroups containing all of `ins`
/// and none of `outs`.
#[derive(Clone, Debug, Default)]
pub struct NeighborhoodSpec {
    pub ins: Vec<Word>,
    pub outs: Vec<Word>,
}

/// Whether the subgroup lies in the neighborhood.
pub fn neighborhood_member(subgroup: &StallingsAutomaton, spec: &NeighborhoodSpec) -> bool {
    spec.ins.iter().all(|w| contains_word(subgroup, w))
        && spec.outs.iter().all(|w| !contains_word(subgroup, w))
}
