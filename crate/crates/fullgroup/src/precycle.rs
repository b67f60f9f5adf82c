//! Pre-cycles, closing cycles, periods, and k-th roots.
//!
//! A pre-cycle of length `n` is a partial piecewise translation φ whose
//! basis `B = dom φ ∖ rng φ` generates a clean chain: the translates
//! `B, φ(B), ..., φ^{n-2}(B)` partition the domain and
//! `φ(B), ..., φ^{n-1}(B)` partition the range.  Closing the chain back up
//! yields a total transformation of period `n` supported exactly on
//! `supp φ`.  The same atom machinery gives exact periods and k-th roots
//! for every transform in our class.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::interval::{Interval, IntervalSet};
use crate::perm::{closure, Perm, StabChain};
use crate::ptrans::{atom_permutation, transport, Piece, PiecewiseTranslation, Transform};
use crate::rat::Rat;
use crate::uf::UnionFind;

/// A verified pre-cycle: the map, its declared length, and its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreCycle {
    map: PiecewiseTranslation,
    length: u64,
    basis: IntervalSet,
}

/// The map failed the pre-cycle partition conditions for the given length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotPreCycle {
    pub length: u64,
}

impl fmt::Display for NotPreCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "map is not a pre-cycle of length {}", self.length)
    }
}

impl PreCycle {
    /// Verifies the partition conditions and wraps the map.
    pub fn new(map: PiecewiseTranslation, length: u64) -> Result<PreCycle, NotPreCycle> {
        match is_precycle(&map, length) {
            Some(basis) => {
                debug_assert_eq!(
                    map.support().measure(),
                    basis.measure().mul_int(length)
                );
                Ok(PreCycle { map, length, basis })
            }
            None => Err(NotPreCycle { length }),
        }
    }

    pub fn map(&self) -> &PiecewiseTranslation {
        &self.map
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn basis(&self) -> &IntervalSet {
        &self.basis
    }
}

/// Checks the two partition conditions for length `n` and returns the basis
/// `dom ∖ rng` when they hold.
pub fn is_precycle(map: &PiecewiseTranslation, n: u64) -> Option<IntervalSet> {
    assert!(n >= 2);
    let dom = map.domain();
    let rng = map.range();
    let basis = dom.difference(&rng);
    let mut translate = basis.clone();
    let mut dom_union = IntervalSet::empty();
    let mut rng_union = IntervalSet::empty();
    for i in 0..n {
        if i < n - 1 {
            if !translate.is_disjoint(&dom_union) {
                return None;
            }
            dom_union = dom_union.union(&translate);
        }
        if i > 0 {
            if !translate.is_disjoint(&rng_union) {
                return None;
            }
            rng_union = rng_union.union(&translate);
        }
        if i < n - 1 {
            translate = map.image_of(&translate);
        }
    }
    if dom_union == dom && rng_union == rng {
        Some(basis)
    } else {
        None
    }
}

/// The slots cannot hold the requested chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsufficientRoom {
    pub needed: Rat,
    pub available: Rat,
}

impl fmt::Display for InsufficientRoom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chain needs measure {} but slots hold only {}",
            self.needed, self.available
        )
    }
}

/// Builds a pre-cycle of length `n` with basis measure `basis_measure`,
/// carving its `n` basis translates left to right out of `slots`.
pub fn make_precycle(
    n: u64,
    basis_measure: &Rat,
    slots: &IntervalSet,
) -> Result<PreCycle, InsufficientRoom> {
    assert!(n >= 2);
    assert!(!basis_measure.is_negative());
    let needed = basis_measure.mul_int(n);
    let available = slots.measure();
    if available < needed {
        return Err(InsufficientRoom { needed, available });
    }
    let mut blocks = Vec::new();
    let mut rest = slots.clone();
    for _ in 0..n {
        let (taken, remaining) = rest
            .take_leftmost(basis_measure)
            .expect("slots were measured large enough");
        blocks.push(taken);
        rest = remaining;
    }
    let mut map = PiecewiseTranslation::empty();
    for pair in blocks.windows(2) {
        let leg = transport(&pair[0], &pair[1]).expect("blocks share one measure");
        map = map.disjoint_union(&leg).expect("blocks are pairwise disjoint");
    }
    Ok(PreCycle::new(map, n).expect("carved chain satisfies the partition conditions"))
}

/// Closes a pre-cycle into a total transformation: the map itself on its
/// domain, the `(n-1)`-fold pullback on `rng ∖ dom`, and the identity
/// elsewhere.  Has period `n` on `supp map` and equal support.
pub fn closing_cycle(p: &PreCycle) -> Transform {
    let map = p.map();
    let inv = map.invert();
    let mut back = inv.clone();
    for _ in 1..p.length() - 1 {
        back = inv.compose(&back);
    }
    let back = back.restrict(&map.range().difference(&map.domain()));
    let cycle = map
        .disjoint_union(&back)
        .expect("pullback lands in the basis, off the range");
    let off = cycle.domain().complement();
    let total = cycle
        .disjoint_union(&PiecewiseTranslation::identity_on(&off))
        .expect("identity part is disjoint by construction");
    Transform::new(total).expect("domain and identity part cover [0,1)")
}

/// Outcome of a period search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Period {
    Exact(u64),
    ExceedsBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodReport {
    pub period: Period,
    pub bound: u64,
}

/// The finest `t`-invariant partition of `[0,1)` into intervals whose
/// endpoints are the breakpoints of `t` closed under `t` and `t⁻¹`.  `t`
/// maps each atom rigidly onto an atom.  `None` when the closure outgrows
/// `cap` points.
fn invariant_atoms(t: &Transform, cap: usize) -> Option<Vec<Interval>> {
    let mut cuts: BTreeSet<Rat> = BTreeSet::new();
    for piece in t.as_map().pieces() {
        for r in [
            piece.src().start().clone(),
            piece.src().end().clone(),
            piece.dst().start().clone(),
            piece.dst().end().clone(),
        ] {
            if r.is_positive() && r < Rat::one() {
                cuts.insert(r);
            }
        }
    }
    loop {
        let mut fresh = Vec::new();
        for c in &cuts {
            for image in [t.apply(c), t.apply_inv(c)] {
                if image.is_positive() && !cuts.contains(&image) {
                    fresh.push(image);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        cuts.extend(fresh);
        if cuts.len() > cap {
            return None;
        }
    }
    let mut atoms = Vec::with_capacity(cuts.len() + 1);
    let mut prev = Rat::zero();
    for c in cuts {
        atoms.push(Interval::new(prev.clone(), c.clone()));
        prev = c;
    }
    atoms.push(Interval::new(prev, Rat::one()));
    Some(atoms)
}

/// Atoms plus the cycles of the permutation `t` induces on them.  Each
/// cycle is listed starting from its atom with the least left endpoint.
fn atom_cycles(t: &Transform, cap: usize) -> Option<(Vec<Interval>, Vec<Vec<usize>>)> {
    let atoms = invariant_atoms(t, cap)?;
    let succ: Vec<usize> = atoms
        .iter()
        .map(|a| {
            let image = t.apply(a.start());
            atoms
                .binary_search_by(|probe| probe.start().cmp(&image))
                .expect("atom images start at atom boundaries")
        })
        .collect();
    let mut seen = alloc::vec![false; atoms.len()];
    let mut cycles = Vec::new();
    for start in 0..atoms.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = alloc::vec![start];
        seen[start] = true;
        let mut x = succ[start];
        while x != start {
            debug_assert_eq!(atoms[x].len(), atoms[start].len());
            seen[x] = true;
            cyc.push(x);
            x = succ[x];
        }
        cycles.push(cyc);
    }
    Some((atoms, cycles))
}

fn closure_cap(t: &Transform, bound: u64) -> usize {
    let breakpoints = 4 * t.as_map().pieces().len() + 4;
    breakpoints.saturating_mul(usize::try_from(bound).unwrap_or(usize::MAX))
}

/// The least `k ≤ bound` with `t^k` the identity, found through the order
/// of the induced atom permutation.
pub fn period(t: &Transform, bound: u64) -> PeriodReport {
    assert!(bound >= 1);
    let Some((_, cycles)) = atom_cycles(t, closure_cap(t, bound)) else {
        return PeriodReport {
            period: Period::ExceedsBound,
            bound,
        };
    };
    let mut k: u128 = 1;
    for cyc in &cycles {
        k = k.lcm(&(cyc.len() as u128));
        if k > bound as u128 {
            return PeriodReport {
                period: Period::ExceedsBound,
                bound,
            };
        }
    }
    debug_assert!(t.pow(k as u64).is_identity());
    PeriodReport {
        period: Period::Exact(k as u64),
        bound,
    }
}

/// Periodicity could not be certified within the caller's bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotPeriodic {
    pub bound: u64,
}

impl fmt::Display for NotPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no period up to {} found", self.bound)
    }
}

/// A `w` with `w^k = u` exactly and `supp w = supp u`.  `u` must be
/// certified periodic within `period_bound` first.
///
/// Per cycle of atoms, the fundamental atom `A` is the one with the least
/// left endpoint; `A` is cut into `k` equal blocks cycled left to right by
/// a map `V`, and `w` follows `u` around the cycle while advancing one
/// block per step: `w = u ∘ uⁱVu⁻ⁱ` on `uⁱ(first block)` and `w = uⁱVu⁻ⁱ`
/// on the other blocks of `uⁱ(A)`.
pub fn kth_root(u: &Transform, k: u64, period_bound: u64) -> Result<Transform, NotPeriodic> {
    assert!(k >= 1);
    let (atoms, cycles) = match atom_cycles(u, closure_cap(u, period_bound)) {
        Some(pair) => pair,
        None => return Err(NotPeriodic { bound: period_bound }),
    };
    let mut order: u128 = 1;
    for cyc in &cycles {
        order = order.lcm(&(cyc.len() as u128));
        if order > period_bound as u128 {
            return Err(NotPeriodic { bound: period_bound });
        }
    }
    if k == 1 || u.is_identity() {
        return Ok(u.clone());
    }
    let mut pieces = Vec::new();
    for cyc in &cycles {
        if cyc.len() == 1 {
            continue;
        }
        let base = &atoms[cyc[0]];
        let block = base.len().div_int(k);
        for (i, &a) in cyc.iter().enumerate() {
            let here = atoms[a].start();
            let next = atoms[cyc[(i + 1) % cyc.len()]].start();
            for j in 0..k {
                let lo = here + &block.mul_int(j);
                let hi = here + &block.mul_int(j + 1);
                let offset = if j == 0 {
                    &block + &(next - here)
                } else if j == k - 1 {
                    -&block.mul_int(k - 1)
                } else {
                    block.clone()
                };
                pieces.push(Piece::new(Interval::new(lo, hi), offset));
            }
        }
    }
    let moved = PiecewiseTranslation::from_pieces(pieces)
        .expect("blocks of distinct atoms are pairwise disjoint");
    let off = moved.domain().complement();
    let total = moved
        .disjoint_union(&PiecewiseTranslation::identity_on(&off))
        .expect("identity fills exactly the fixed atoms");
    Ok(Transform::new(total).expect("blocks and fixed atoms cover [0,1)"))
}

/// Whether the total transformation `t` agrees with `map` on all of
/// `dom map`.
pub fn extends(t: &Transform, map: &PiecewiseTranslation) -> bool {
    t.as_map().restrict(&map.domain()) == *map
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjTrickError {
    /// Some breakpoint of the pre-cycle or the closing transform is off the
    /// `1/grid` lattice.
    GridMismatch,
    /// `u` does not extend the pre-cycle's map.
    NotExtending,
}

impl fmt::Display for ConjTrickError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjTrickError::GridMismatch => write!(f, "breakpoints are off the grid"),
            ConjTrickError::NotExtending => write!(f, "transform does not extend the pre-cycle"),
        }
    }
}

/// Classes of grid atoms linked by the partial map, as a union-find over
/// atom indices.  `None` when a breakpoint is off the grid.
fn atom_classes(map: &PiecewiseTranslation, grid: u64) -> Option<UnionFind> {
    let mut uf = UnionFind::new(grid as usize);
    for piece in map.pieces() {
        let a = piece.src().start().mul_int(grid).to_u64()?;
        let b = piece.src().end().mul_int(grid).to_u64()?;
        let d = piece.dst().start().mul_int(grid).to_u64()?;
        for j in a..b {
            uf.union(j as usize, (d + (j - a)) as usize);
        }
    }
    Some(uf)
}

/// Transpositions of consecutive members within each class of size ≥ 2;
/// together they generate every permutation preserving the classes.
fn class_transpositions(uf: &mut UnionFind, degree: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    for class in uf.classes() {
        for pair in class.windows(2) {
            out.push(Perm::transposition(degree, pair[0], pair[1]));
        }
    }
    out
}

const CLOSURE_CAP: usize = 100_000;

/// Finite-level conjugation certificate on `grid` equal atoms: the group
/// generated by `u`'s atom permutation together with every permutation
/// preserving the classes of `ψ = map` restricted to the basis must contain
/// every permutation preserving the classes of the full map.  Group
/// membership is decided by brute-force closure when the group is small and
/// by a stabilizer chain otherwise.
pub fn conj_trick_certificate(
    p: &PreCycle,
    u: &Transform,
    grid: u64,
) -> Result<bool, ConjTrickError> {
    if !extends(u, p.map()) {
        return Err(ConjTrickError::NotExtending);
    }
    let sigma = atom_permutation(u, grid).ok_or(ConjTrickError::GridMismatch)?;
    let psi = p.map().restrict(p.basis());
    let mut psi_classes = atom_classes(&psi, grid).ok_or(ConjTrickError::GridMismatch)?;
    let mut phi_classes = atom_classes(p.map(), grid).ok_or(ConjTrickError::GridMismatch)?;
    let degree = grid as usize;
    let mut gens = alloc::vec![sigma];
    gens.extend(class_transpositions(&mut psi_classes, degree));
    let targets = class_transpositions(&mut phi_classes, degree);
    match closure(degree, &gens, CLOSURE_CAP) {
        Ok(set) => Ok(targets.iter().all(|t| set.contains(t))),
        Err(_) => {
            let chain = StabChain::new(degree, &gens);
            Ok(targets.iter().all(|t| chain.contains(t)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn iv(a: &str, b: &str) -> Interval {
        Interval::new(r(a), r(b))
    }

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_intervals(pairs.iter().map(|(a, b)| iv(a, b)))
    }

    fn pt(pieces: &[(&str, &str, &str)]) -> PiecewiseTranslation {
        PiecewiseTranslation::from_pieces(
            pieces
                .iter()
                .map(|(a, b, off)| Piece::new(iv(a, b), r(off))),
        )
        .unwrap()
    }

    fn rotation(m: u64) -> Transform {
        let step = Rat::one().div_int(m);
        let last = Rat::one() - step.clone();
        let head = Piece::new(Interval::new(Rat::zero(), last.clone()), step);
        let tail = Piece::new(Interval::new(last.clone(), Rat::one()), -last);
        Transform::new(PiecewiseTranslation::from_pieces([head, tail]).unwrap()).unwrap()
    }

    #[test]
    fn disjoint_domain_and_range_is_a_two_precycle() {
        let map = pt(&[("0/1", "1/4", "1/2")]);
        assert_eq!(is_precycle(&map, 2), Some(set(&[("0/1", "1/4")])));
        let two_piece = pt(&[("0/1", "1/8", "1/2"), ("1/4", "3/8", "1/2")]);
        assert_eq!(
            is_precycle(&two_piece, 2),
            Some(set(&[("0/1", "1/8"), ("1/4", "3/8")]))
        );
    }

    #[test]
    fn identity_piece_is_no_precycle() {
        let map = pt(&[("0/1", "1/2", "0/1")]);
        for n in 2..6 {
            assert_eq!(is_precycle(&map, n), None);
        }
    }

    #[test]
    fn three_chain_is_a_three_precycle() {
        let map = pt(&[("0/1", "1/4", "1/8")]);
        assert_eq!(is_precycle(&map, 3), Some(set(&[("0/1", "1/8")])));
        assert_eq!(is_precycle(&map, 2), None);
        assert_eq!(is_precycle(&map, 4), None);
    }

    #[test]
    fn empty_map_is_a_degenerate_precycle() {
        assert_eq!(
            is_precycle(&PiecewiseTranslation::empty(), 2),
            Some(IntervalSet::empty())
        );
    }

    #[test]
    fn make_precycle_carves_left_to_right() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        assert_eq!(p.map(), &pt(&[("0/1", "1/4", "1/4")]));
        assert_eq!(p.basis(), &set(&[("0/1", "1/4")]));

        let p3 = make_precycle(3, &r("1/8"), &set(&[("0/1", "1/2")])).unwrap();
        assert_eq!(p3.map(), &pt(&[("0/1", "1/4", "1/8")]));
        assert_eq!(p3.basis(), &set(&[("0/1", "1/8")]));
    }

    #[test]
    fn make_precycle_reports_insufficient_room() {
        let err = make_precycle(2, &r("3/4"), &IntervalSet::full()).unwrap_err();
        assert_eq!(err.needed, r("3/2"));
        assert_eq!(err.available, r("1/1"));
    }

    #[test]
    fn make_precycle_spans_fragmented_slots() {
        let slots = set(&[("0/1", "1/8"), ("1/4", "1/2")]);
        let p = make_precycle(3, &r("1/8"), &slots).unwrap();
        assert_eq!(is_precycle(p.map(), 3), Some(p.basis().clone()));
        assert_eq!(p.map().support().measure(), r("3/8"));
    }

    #[test]
    fn closing_a_two_chain_gives_the_swap() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        let u = closing_cycle(&p);
        assert_eq!(
            u.as_map(),
            &pt(&[
                ("0/1", "1/4", "1/4"),
                ("1/4", "1/2", "-1/4"),
                ("1/2", "1/1", "0/1"),
            ])
        );
        assert!(u.compose(&u).is_identity());
    }

    #[test]
    fn closing_cycles_have_period_equal_to_length() {
        for n in 2..=6u64 {
            let p = make_precycle(n, &Rat::one().div_int(2 * n), &IntervalSet::full()).unwrap();
            let u = closing_cycle(&p);
            assert!(extends(&u, p.map()));
            assert_eq!(u.support(), p.map().support());
            assert!(u.pow(n).is_identity());
            for j in 1..n {
                assert!(!u.pow(j).is_identity());
            }
            assert_eq!(period(&u, 10).period, Period::Exact(n));
        }
    }

    #[test]
    fn closing_an_empty_precycle_is_the_identity() {
        let p = PreCycle::new(PiecewiseTranslation::empty(), 2).unwrap();
        assert!(closing_cycle(&p).is_identity());
    }

    #[test]
    fn period_of_simple_transforms() {
        assert_eq!(period(&Transform::identity(), 5).period, Period::Exact(1));
        assert_eq!(period(&rotation(3), 10).period, Period::Exact(3));
        assert_eq!(period(&rotation(5), 3).period, Period::ExceedsBound);
        assert_eq!(period(&rotation(5), 3).bound, 3);
        assert_eq!(period(&rotation(5), 5).period, Period::Exact(5));
    }

    #[test]
    fn period_of_mixed_cycle_lengths() {
        // Swap on [0,1/2) next to a 3-chain closed on [1/2, 7/8).
        let swap = make_precycle(2, &r("1/4"), &set(&[("0/1", "1/2")])).unwrap();
        let chain = make_precycle(3, &r("1/8"), &set(&[("1/2", "1/1")])).unwrap();
        let u = closing_cycle(&swap).compose(&closing_cycle(&chain));
        assert_eq!(period(&u, 10).period, Period::Exact(6));
    }

    #[test]
    fn root_of_identity_is_identity() {
        for k in 1..4 {
            assert!(kth_root(&Transform::identity(), k, 5)
                .unwrap()
                .is_identity());
        }
    }

    #[test]
    fn square_root_of_a_swap() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        let u = closing_cycle(&p);
        let w = kth_root(&u, 2, 10).unwrap();
        assert_eq!(w.pow(2), u);
        assert_eq!(w.support(), u.support());
        assert_eq!(w.compose(&u), u.compose(&w));
        assert_eq!(period(&w, 10).period, Period::Exact(4));
    }

    #[test]
    fn roots_of_rotations() {
        for m in 2..=5u64 {
            let u = rotation(m);
            for k in 1..=4u64 {
                let w = kth_root(&u, k, 10).unwrap();
                assert_eq!(w.pow(k), u);
                assert_eq!(w.support(), u.support());
                assert_eq!(period(&w, 100).period, Period::Exact(m * k));
            }
        }
    }

    #[test]
    fn cube_root_of_a_three_cycle() {
        let p = make_precycle(3, &r("1/8"), &IntervalSet::full()).unwrap();
        let u = closing_cycle(&p);
        let w = kth_root(&u, 3, 10).unwrap();
        assert_eq!(w.pow(3), u);
        assert_eq!(w.support(), u.support());
    }

    #[test]
    fn root_requires_certified_period() {
        assert_eq!(
            kth_root(&rotation(7), 2, 3),
            Err(NotPeriodic { bound: 3 })
        );
    }

    #[test]
    fn extends_checks_agreement_on_domain() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        assert!(extends(&closing_cycle(&p), p.map()));
        assert!(extends(&Transform::identity(), &PiecewiseTranslation::empty()));
        assert!(!extends(&Transform::identity(), p.map()));
    }

    #[test]
    fn conj_trick_on_a_two_chain() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        let u = closing_cycle(&p);
        assert_eq!(conj_trick_certificate(&p, &u, 4), Ok(true));
    }

    #[test]
    fn conj_trick_on_a_three_chain_in_sym8() {
        let p = make_precycle(3, &r("1/8"), &IntervalSet::full()).unwrap();
        let u = closing_cycle(&p);
        assert_eq!(conj_trick_certificate(&p, &u, 8), Ok(true));
    }

    #[test]
    fn conj_trick_demands_an_extension() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        assert_eq!(
            conj_trick_certificate(&p, &Transform::identity(), 4),
            Err(ConjTrickError::NotExtending)
        );
    }

    #[test]
    fn conj_trick_demands_grid_alignment() {
        let p = make_precycle(2, &r("1/4"), &IntervalSet::full()).unwrap();
        let u = closing_cycle(&p);
        assert_eq!(
            conj_trick_certificate(&p, &u, 3),
            Err(ConjTrickError::GridMismatch)
        );
    }

    #[test]
    fn precycle_measure_identities() {
        for n in 2..=5u64 {
            let p = make_precycle(n, &r("1/20"), &IntervalSet::full()).unwrap();
            assert_eq!(
                p.map().support().measure(),
                p.basis().measure().mul_int(n)
            );
            assert_eq!(
                p.map().domain().measure(),
                p.basis().measure().mul_int(n - 1)
            );
        }
    }
}
