//! Finite permutations, brute-force group closure, and a deterministic
//! stabilizer chain for membership tests at degrees where closure is
//! hopeless.  No randomization anywhere: base points are chosen as the
//! least moved point, orbits are explored breadth-first in insertion order,
//! so identical inputs always produce identical chains.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

/// A permutation of `{0, 1, ..., n-1}`, stored by images.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    img: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        assert!(degree <= 1 << 16);
        Perm {
            img: (0..degree).map(|i| i as u16).collect(),
        }
    }

    /// Builds from an image table, validating bijectivity.
    pub fn from_images(images: &[usize]) -> Perm {
        let n = images.len();
        assert!(n <= 1 << 16);
        let mut seen = alloc::vec![false; n];
        for &v in images {
            assert!(v < n && !seen[v], "not a permutation");
            seen[v] = true;
        }
        Perm {
            img: images.iter().map(|&v| v as u16).collect(),
        }
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(degree);
        p.img.swap(a, b);
        p
    }

    /// The cycle `points[0] -> points[1] -> ... -> points[0]`.
    pub fn cycle(degree: usize, points: &[usize]) -> Perm {
        let mut p = Perm::identity(degree);
        if points.len() > 1 {
            for w in points.windows(2) {
                p.img[w[0]] = w[1] as u16;
            }
            p.img[*points.last().unwrap()] = points[0] as u16;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            img: other.img.iter().map(|&v| self.img[v as usize]).collect(),
        }
    }

    pub fn invert(&self) -> Perm {
        let mut img = alloc::vec![0u16; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u16;
        }
        Perm { img }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn least_moved_point(&self) -> Option<usize> {
        self.img
            .iter()
            .enumerate()
            .find(|(i, &v)| *i != v as usize)
            .map(|(i, _)| i)
    }

    /// Cycle decomposition; fixed points appear as singletons.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = alloc::vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = alloc::vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Multiplicative order: least common multiple of the cycle lengths.
    pub fn order(&self) -> u128 {
        self.cycles()
            .iter()
            .map(|c| c.len() as u128)
            .fold(1, |a, b| a.lcm(&b))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm{:?}", self.img)
    }
}

/// The closure exceeded its element cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapExceeded {
    pub cap: usize,
}

impl fmt::Display for CapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group closure exceeded cap of {} elements", self.cap)
    }
}

/// Enumerates the full subgroup generated by `gens` as an ordered set,
/// giving up once more than `cap` elements appear.
pub fn closure(
    degree: usize,
    gens: &[Perm],
    cap: usize,
) -> Result<BTreeSet<Perm>, CapExceeded> {
    let mut set = BTreeSet::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(degree);
    set.insert(id.clone());
    queue.push_back(id);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.compose(&p);
            if set.insert(q.clone()) {
                if set.len() > cap {
                    return Err(CapExceeded { cap });
                }
                queue.push_back(q);
            }
        }
    }
    Ok(set)
}

struct Level {
    point: usize,
    /// Strong generators assigned to this level; they fix every base point
    /// of the shallower levels.
    gens: Vec<Perm>,
    transversal: BTreeMap<usize, Perm>,
}

/// A stabilizer chain with deterministic base: each base point is the least
/// point moved by the generator that forced the level into existence.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            chain.insert(g.clone());
        }
        chain.verify_from(0);
        chain
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.transversal.len() as u128)
            .product()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        assert_eq!(p.degree(), self.degree);
        match self.strip(0, p.clone()) {
            Ok(residue) => residue.is_identity(),
            Err(_) => false,
        }
    }

    /// Sifts through levels `from..`; `Err(level)` when the image of a base
    /// point falls outside that level's orbit.
    fn strip(&self, from: usize, mut p: Perm) -> Result<Perm, (usize, Perm)> {
        for (i, lvl) in self.levels.iter().enumerate().skip(from) {
            let img = p.apply(lvl.point);
            match lvl.transversal.get(&img) {
                Some(u) => p = u.invert().compose(&p),
                None => return Err((i, p)),
            }
        }
        Ok(p)
    }

    fn insert(&mut self, g: Perm) {
        if g.is_identity() {
            return;
        }
        let level = match self.strip(0, g) {
            Ok(residue) => {
                if residue.is_identity() {
                    return;
                }
                let pt = residue.least_moved_point().unwrap();
                self.levels.push(Level {
                    point: pt,
                    gens: alloc::vec![residue],
                    transversal: BTreeMap::new(),
                });
                self.levels.len() - 1
            }
            Err((i, residue)) => {
                self.levels[i].gens.push(residue);
                i
            }
        };
        self.recompute_orbit(level);
    }

    fn gens_at(&self, level: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        for l in &self.levels[level..] {
            out.extend(l.gens.iter().cloned());
        }
        out
    }

    fn recompute_orbit(&mut self, level: usize) {
        let gens = self.gens_at(level);
        let pt = self.levels[level].point;
        let mut transversal = BTreeMap::new();
        transversal.insert(pt, Perm::identity(self.degree));
        let mut queue = VecDeque::new();
        queue.push_back(pt);
        while let Some(x) = queue.pop_front() {
            let u = transversal[&x].clone();
            for g in &gens {
                let y = g.apply(x);
                if !transversal.contains_key(&y) {
                    transversal.insert(y, g.compose(&u));
                    queue.push_back(y);
                }
            }
        }
        self.levels[level].transversal = transversal;
    }

    /// Verifies the chain condition at every level at or below `level`,
    /// inserting Schreier generators that fail to sift until the whole
    /// structure is stable.
    fn verify_from(&mut self, level: usize) {
        let mut i = level;
        while i < self.levels.len() {
            self.recompute_orbit(i);
            let gens = self.gens_at(i);
            let orbit: Vec<usize> = self.levels[i].transversal.keys().copied().collect();
            let mut dirty = false;
            for x in orbit {
                let u = self.levels[i].transversal[&x].clone();
                for g in &gens {
                    let y = g.apply(x);
                    let rep = self.levels[i].transversal[&y].clone();
                    let schreier = rep.invert().compose(&g.compose(&u));
                    match self.strip(i + 1, schreier) {
                        Ok(residue) if residue.is_identity() => {}
                        Ok(residue) => {
                            let pt = residue.least_moved_point().unwrap();
                            self.levels.push(Level {
                                point: pt,
                                gens: alloc::vec![residue],
                                transversal: BTreeMap::new(),
                            });
                            let new = self.levels.len() - 1;
                            self.recompute_orbit(new);
                            dirty = true;
                        }
                        Err((j, residue)) => {
                            self.levels[j].gens.push(residue);
                            self.recompute_orbit(j);
                            dirty = true;
                        }
                    }
                }
            }
            if dirty {
                // A deeper level changed; re-verify from the current level
                // so its orbit sees any generators that floated up.
                continue;
            }
            i += 1;
        }
    }
}
