//! The binary odometer at finite levels and its dyadic machinery.
//!
//! Under the binary identification of `{0,1}^ℕ` with `[0,1)`, a finite word
//! names a dyadic cylinder interval.  The odometer adds `(1,0,0,...)` with
//! carry to the right; its level-`L` approximation is a transform that
//! cycles the `2^L` dyadic atoms through one full binary count.  On top of
//! that sit the involutions `u_n`, exact group certificates for what the
//! conjugates of `u_n` under odometer powers generate, and the evanescent
//! construction that bends a finite-order transform into one whose power
//! recovers `u_p` on the nose.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::interval::Interval;
use crate::perm::{closure, Perm, StabChain};
use crate::precycle::{closing_cycle, kth_root, InsufficientRoom, PreCycle};
use crate::ptrans::{atom_permutation, transport, PiecewiseTranslation, Transform};
use crate::rat::Rat;

/// The dyadic interval of the finite binary word `bits` (entries 0 or 1):
/// all points whose first `bits.len()` binary digits match.
pub fn cylinder(bits: &[u8]) -> Interval {
    let mut start = Rat::zero();
    for (i, &b) in bits.iter().enumerate() {
        assert!(b <= 1, "binary words only");
        if b == 1 {
            start = &start + &Rat::dyadic(1, (i + 1) as u32);
        }
    }
    let end = &start + &Rat::dyadic(1, bits.len() as u32);
    Interval::new(start, end)
}

fn ones_then(level: u32, tail: u8) -> Vec<u8> {
    let mut w = alloc::vec![1u8; level as usize];
    if let Some(last) = w.last_mut() {
        *last = tail;
    }
    w
}

/// The level-`L` odometer: binary increment with carry to the right,
/// truncated to the first `L` digits.  On the cylinder `1^{k-1}0` it
/// translates by `3·2^{-k} - 1`, and the all-ones cylinder wraps to
/// `[0, 2^{-L})`.  A single `2^L`-cycle of the level-`L` atoms.
pub fn odometer_at_level(level: u32) -> Transform {
    assert!((1..=60).contains(&level));
    let mut pieces = Vec::new();
    for k in 1..=level {
        let src = cylinder(&ones_then(k, 0));
        let offset = &Rat::dyadic(3, k) - &Rat::one();
        pieces.push(crate::ptrans::Piece::new(src, offset));
    }
    let wrap = cylinder(&ones_then(level, 1));
    let offset = &Rat::dyadic(1, level) - &Rat::one();
    pieces.push(crate::ptrans::Piece::new(wrap, offset));
    Transform::new(PiecewiseTranslation::from_pieces(pieces).unwrap()).unwrap()
}

/// The involution exchanging the cylinders `1^{n-1}0` and `0^{n-1}1`,
/// identity elsewhere.  Agrees with the odometer on `1^{n-1}0` and with its
/// inverse on `0^{n-1}1`; support has measure `2^{-n+1}`.
pub fn u_n(n: u32) -> Transform {
    assert!((1..=60).contains(&n));
    let hi = cylinder(&ones_then(n, 0));
    let lo = {
        let mut w = alloc::vec![0u8; n as usize];
        w[n as usize - 1] = 1;
        cylinder(&w)
    };
    let offset = lo.start() - hi.start();
    let swap = PiecewiseTranslation::from_pieces([
        crate::ptrans::Piece::new(hi.clone(), offset.clone()),
        crate::ptrans::Piece::new(lo.clone(), -offset),
    ])
    .unwrap();
    let rest = swap.domain().complement();
    let total = swap
        .disjoint_union(&PiecewiseTranslation::identity_on(&rest))
        .unwrap();
    Transform::new(total).unwrap()
}

/// A permutation of the `2^level` dyadic atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomPermutation {
    level: u32,
    perm: Perm,
}

impl AtomPermutation {
    pub fn new(level: u32, perm: Perm) -> AtomPermutation {
        assert!(level <= 16);
        assert_eq!(perm.degree(), 1usize << level);
        AtomPermutation { level, perm }
    }

    pub fn identity(level: u32) -> AtomPermutation {
        AtomPermutation::new(level, Perm::identity(1 << level))
    }

    pub fn transposition(level: u32, a: usize, b: usize) -> AtomPermutation {
        AtomPermutation::new(level, Perm::transposition(1 << level, a, b))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn compose(&self, other: &AtomPermutation) -> AtomPermutation {
        assert_eq!(self.level, other.level);
        AtomPermutation::new(self.level, self.perm.compose(&other.perm))
    }

    pub fn invert(&self) -> AtomPermutation {
        AtomPermutation::new(self.level, self.perm.invert())
    }

    /// Reads the atom permutation off a transform whose breakpoints and
    /// offsets sit on the level grid.
    pub fn from_transform(t: &Transform, level: u32) -> Option<AtomPermutation> {
        assert!(level <= 16);
        atom_permutation(t, 1 << level).map(|perm| AtomPermutation { level, perm })
    }
}

/// The piecewise translation permuting level atoms rigidly per `sigma`:
/// the action on the first `level` binary digits, leaving the tail alone.
pub fn dyadic_permutation(sigma: &AtomPermutation) -> Transform {
    let level = sigma.level;
    let width = Rat::dyadic(1, level);
    let pieces = (0..1u64 << level).map(|j| {
        let src = Interval::new(width.mul_int(j), width.mul_int(j + 1));
        let image = sigma.perm.apply(j as usize) as u64;
        let offset = if image >= j {
            width.mul_int(image - j)
        } else {
            -width.mul_int(j - image)
        };
        crate::ptrans::Piece::new(src, offset)
    });
    Transform::new(PiecewiseTranslation::from_pieces(pieces).unwrap()).unwrap()
}

/// How a group certificate decided membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    BruteClosure,
    StabilizerChain,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::BruteClosure => write!(f, "brute-closure"),
            Engine::StabilizerChain => write!(f, "stabilizer-chain"),
        }
    }
}

/// An exact answer to "does the group generated by these atom permutations
/// contain all the targets", with enough context to audit it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCertificate {
    pub level: u32,
    pub generator_count: usize,
    pub targets: String,
    pub verdict: bool,
    pub method: Engine,
    /// Order of the generated group when the engine computed it.
    pub order: Option<u128>,
}

/// Generators and targets live at different levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMismatch {
    pub left: u32,
    pub right: u32,
}

impl fmt::Display for LevelMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "atom permutations at levels {} and {}", self.left, self.right)
    }
}

const CLOSURE_CAP: usize = 100_000;

fn decide_containment(
    level: u32,
    gens: &[Perm],
    targets: &[Perm],
    description: String,
) -> GroupCertificate {
    let degree = 1usize << level;
    match closure(degree, gens, CLOSURE_CAP) {
        Ok(set) => GroupCertificate {
            level,
            generator_count: gens.len(),
            targets: description,
            verdict: targets.iter().all(|t| set.contains(t)),
            method: Engine::BruteClosure,
            order: Some(set.len() as u128),
        },
        Err(_) => {
            let chain = StabChain::new(degree, gens);
            GroupCertificate {
                level,
                generator_count: gens.len(),
                targets: description,
                verdict: targets.iter().all(|t| chain.contains(t)),
                method: Engine::StabilizerChain,
                order: Some(chain.order()),
            }
        }
    }
}

/// Whether `⟨gens⟩` contains every target, decided exactly: brute-force
/// closure while the group stays under 10⁵ elements, a deterministic
/// stabilizer chain beyond that.
pub fn group_contains(
    gens: &[AtomPermutation],
    targets: &[AtomPermutation],
) -> Result<GroupCertificate, LevelMismatch> {
    let level = match gens.first().or_else(|| targets.first()) {
        Some(p) => p.level,
        None => {
            return Ok(GroupCertificate {
                level: 0,
                generator_count: 0,
                targets: String::from("nothing"),
                verdict: true,
                method: Engine::BruteClosure,
                order: Some(1),
            })
        }
    };
    for p in gens.iter().chain(targets) {
        if p.level != level {
            return Err(LevelMismatch {
                left: level,
                right: p.level,
            });
        }
    }
    let gen_perms: Vec<Perm> = gens.iter().map(|p| p.perm.clone()).collect();
    let target_perms: Vec<Perm> = targets.iter().map(|p| p.perm.clone()).collect();
    let description = alloc::format!("{} explicit atom permutations", targets.len());
    Ok(decide_containment(level, &gen_perms, &target_perms, description))
}

fn conjugates_by_odometer(level: u32, seed: &Perm) -> Vec<Perm> {
    let t = AtomPermutation::from_transform(&odometer_at_level(level), level)
        .expect("odometer breakpoints sit on its own grid")
        .perm;
    let mut out = Vec::with_capacity(1 << level);
    let mut power = Perm::identity(1 << level);
    for _ in 0..1u64 << level {
        out.push(power.compose(&seed.compose(&power.invert())));
        power = t.compose(&power);
    }
    out
}

fn adjacent_transpositions(degree: usize) -> Vec<Perm> {
    (0..degree.saturating_sub(1))
        .map(|i| Perm::transposition(degree, i, i + 1))
        .collect()
}

/// Certifies at level `n` that the conjugates of `u_n` by the powers of the
/// level-`n` odometer generate the whole symmetric group on the `2^n`
/// atoms.
pub fn lemma_conjugates_certificate(n: u32) -> GroupCertificate {
    assert!((2..=16).contains(&n));
    let degree = 1usize << n;
    let seed = Perm::transposition(degree, 1, degree - 2);
    let gens = conjugates_by_odometer(n, &seed);
    let targets = adjacent_transpositions(degree);
    let description = alloc::format!("the full symmetric group on {} atoms", degree);
    decide_containment(n, &gens, &targets, description)
}

/// Some breakpoint or offset has a non-dyadic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotDyadic;

impl fmt::Display for NotDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "transform has non-dyadic breakpoints")
    }
}

/// The least `L` such that every breakpoint and offset of `t` is a multiple
/// of `2^{-L}`.
pub fn dyadic_level_of(t: &Transform) -> Result<u32, NotDyadic> {
    let mut level = 0;
    for piece in t.as_map().pieces() {
        for r in [piece.src().start(), piece.src().end(), piece.offset()] {
            match r.dyadic_level() {
                Some(l) => level = level.max(l),
                None => return Err(NotDyadic),
            }
        }
    }
    Ok(level)
}

/// The permutation of `2^p` atoms that applies `tau` to the first `n`
/// binary digits and keeps the remaining `p - n` digits.
fn lift_to_level(tau: &Perm, n: u32, p: u32) -> Perm {
    assert!(n <= p);
    assert_eq!(tau.degree(), 1usize << n);
    let tail = 1usize << (p - n);
    let images: Vec<usize> = (0..1usize << p)
        .map(|j| tau.apply(j / tail) * tail + j % tail)
        .collect();
    Perm::from_images(&images)
}

/// Finite-level evanescence check: at the dyadic level `p` of `v` (at least
/// `n`), the conjugates of `v^m`'s atom permutation by all `2^p` powers of
/// the level-`p` odometer must generate a group containing the lift of the
/// full symmetric group on the first `n` digits.
pub fn evanescent_certificate(
    v: &Transform,
    m: u64,
    n: u32,
) -> Result<GroupCertificate, NotDyadic> {
    assert!(m >= 1);
    assert!((1..=16).contains(&n));
    let p = dyadic_level_of(v)?.max(n);
    assert!(p <= 16, "atom degree beyond permutation range");
    let sigma = AtomPermutation::from_transform(&v.pow(m), p)
        .expect("a power of a level-p transform stays on the level-p grid")
        .perm;
    let gens = conjugates_by_odometer(p, &sigma);
    let targets: Vec<Perm> = adjacent_transpositions(1 << n)
        .iter()
        .map(|t| lift_to_level(t, n, p))
        .collect();
    let description = alloc::format!(
        "the lift of the symmetric group on {} level-{} atoms",
        1u64 << n,
        n
    );
    Ok(decide_containment(p, &gens, &targets, description))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvanescentError {
    NotDyadic,
    NotPeriodic,
}

impl fmt::Display for EvanescentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvanescentError::NotDyadic => write!(f, "base transform has non-dyadic breakpoints"),
            EvanescentError::NotPeriodic => write!(f, "order is out of tractable range"),
        }
    }
}

/// Bends the finite-order `u` into a transform `w` with `d_u(u, w) < eps`
/// whose `(K·m)`-th power is exactly `u_n(p)`, where `K` is the order of
/// `u` and `p` is the least level `≥ n` with `2^{-p}·K < eps/2`.
///
/// `w` equals `u` off the `u`-saturation `A` of `supp u_n(p)`, equals the
/// `(K·m)`-th root of `u_n(p)` on that support, and is the identity on the
/// rest of `A`.
pub fn build_evanescent_v(
    u: &Transform,
    m: u64,
    n: u32,
    eps: &Rat,
) -> Result<Transform, EvanescentError> {
    assert!(m >= 1);
    assert!((1..=16).contains(&n));
    assert!(eps.is_positive());
    let d = dyadic_level_of(u).map_err(|_| EvanescentError::NotDyadic)?;
    let order = match AtomPermutation::from_transform(u, d.max(1)) {
        Some(p) => p.perm().order(),
        None => return Err(EvanescentError::NotDyadic),
    };
    let k_order = u64::try_from(order).map_err(|_| EvanescentError::NotPeriodic)?;
    let km = k_order
        .checked_mul(m)
        .ok_or(EvanescentError::NotPeriodic)?;
    let half_eps = eps.div_int(2);
    let mut p = n;
    while Rat::dyadic(1, p).mul_int(k_order) >= half_eps {
        p += 1;
    }
    let target = u_n(p);
    let supp = target.support();
    let mut saturation = supp.clone();
    loop {
        let next = saturation.union(&u.image_of(&saturation));
        if next == saturation {
            break;
        }
        saturation = next;
    }
    let root = kth_root(&target, km, 2).expect("u_n is an involution");
    let core = root.as_map().restrict(&supp);
    let idle = PiecewiseTranslation::identity_on(&saturation.difference(&supp));
    let outside = u.as_map().restrict(&saturation.complement());
    let map = core
        .disjoint_union(&idle)
        .and_then(|m| m.disjoint_union(&outside))
        .expect("saturation is u-invariant, so the three parts tile [0,1)");
    Ok(Transform::new(map).expect("parts cover the whole interval"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleRootError {
    /// The seed pre-cycle's support meets the support of `v`.
    Overlapping,
    /// No room outside both supports for the third block.
    NoRoom(InsufficientRoom),
}

impl fmt::Display for CycleRootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleRootError::Overlapping => {
                write!(f, "pre-cycle support meets the transform's support")
            }
            CycleRootError::NoRoom(e) => write!(f, "{}", e),
        }
    }
}

/// Extends the length-2 pre-cycle `phi` to a length-3 one disjoint from
/// `supp v` (third block carved leftmost from the free space), closes it to
/// a 3-cycle, and returns `v` composed with the `n`-th root of that cycle.
///
/// The result `w` satisfies `(w^n)^3 = v^{3n}` exactly, has support
/// `supp v ⊔ supp u1` for the 3-cycle `u1`, and `d_u(w, v)` is three times
/// the basis measure.
pub fn extend_by_cycle_root(
    v: &Transform,
    phi: &PreCycle,
    n: u64,
) -> Result<Transform, CycleRootError> {
    assert_eq!(phi.length(), 2);
    assert!(n >= 1);
    let supp_v = v.support();
    let supp_phi = phi.map().support();
    if !supp_v.is_disjoint(&supp_phi) {
        return Err(CycleRootError::Overlapping);
    }
    let free = supp_v.union(&supp_phi).complement();
    let want = phi.basis().measure();
    let (third, _) = free.take_leftmost(&want).ok_or(CycleRootError::NoRoom(
        InsufficientRoom {
            needed: want.clone(),
            available: free.measure(),
        },
    ))?;
    let leg = transport(&phi.map().range(), &third).expect("third block has basis measure");
    let chain = phi
        .map()
        .disjoint_union(&leg)
        .expect("the third block avoids the pre-cycle");
    let three = PreCycle::new(chain, 3).expect("two disjoint legs chain into a 3-pre-cycle");
    let u1 = closing_cycle(&three);
    let u2 = kth_root(&u1, n, 3).expect("closing cycle of length 3 has period 3");
    Ok(v.compose(&u2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::IntervalSet;
    use crate::precycle::{make_precycle, period, Period};
    use crate::ptrans::uniform_distance;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_intervals(pairs.iter().map(|(a, b)| Interval::new(r(a), r(b))))
    }

    #[test]
    fn cylinder_geometry() {
        assert_eq!(cylinder(&[]), Interval::new(r("0/1"), r("1/1")));
        assert_eq!(cylinder(&[1, 0]), Interval::new(r("1/2"), r("3/4")));
        for n in 1..8u32 {
            let lo = cylinder(&{
                let mut w = alloc::vec![0u8; n as usize];
                w[n as usize - 1] = 1;
                w
            });
            let hi = cylinder(&ones_then(n, 0));
            assert!(lo.intersect(&hi).is_none());
            assert_eq!(&lo.len() + &hi.len(), Rat::dyadic(1, n - 1));
        }
    }

    #[test]
    fn level_one_odometer_swaps_halves() {
        let t = odometer_at_level(1);
        assert_eq!(t.apply(&r("0/1")), r("1/2"));
        assert_eq!(t.apply(&r("3/4")), r("1/4"));
        assert!(t.compose(&t).is_identity());
    }

    #[test]
    fn level_two_odometer_cycles_four_atoms() {
        let t = odometer_at_level(2);
        assert_eq!(t.apply(&r("0/1")), r("1/2"));
        assert_eq!(t.apply(&r("1/2")), r("1/4"));
        assert_eq!(t.apply(&r("1/4")), r("3/4"));
        assert_eq!(t.apply(&r("3/4")), r("0/1"));
    }

    #[test]
    fn odometer_period_is_two_to_the_level() {
        for level in 1..=6u32 {
            let t = odometer_at_level(level);
            assert_eq!(period(&t, 1 << level).period, Period::Exact(1 << level));
        }
    }

    #[test]
    fn odometer_levels_agree_off_the_ones_cylinder() {
        for level in 1..=5u32 {
            for finer in level + 1..=6 {
                let d = uniform_distance(&odometer_at_level(level), &odometer_at_level(finer));
                assert_eq!(d, Rat::dyadic(1, level));
            }
        }
    }

    #[test]
    fn dyadic_permutation_of_identity() {
        assert!(dyadic_permutation(&AtomPermutation::identity(3)).is_identity());
    }

    #[test]
    fn dyadic_permutation_matches_u2() {
        let swap = AtomPermutation::transposition(2, 1, 2);
        assert_eq!(dyadic_permutation(&swap), u_n(2));
    }

    #[test]
    fn dyadic_permutation_respects_composition() {
        let a = AtomPermutation::new(3, Perm::cycle(8, &[0, 3, 5]));
        let b = AtomPermutation::new(3, Perm::transposition(8, 2, 6));
        assert_eq!(
            dyadic_permutation(&a.compose(&b)),
            dyadic_permutation(&a).compose(&dyadic_permutation(&b))
        );
        let roundtrip = AtomPermutation::from_transform(&dyadic_permutation(&a), 3).unwrap();
        assert_eq!(roundtrip, a);
    }

    #[test]
    fn u_n_is_an_involution_of_small_support() {
        for n in 1..=5u32 {
            let u = u_n(n);
            assert!(u.compose(&u).is_identity());
            assert!(!u.is_identity());
            assert_eq!(u.support().measure(), Rat::dyadic(1, n - 1));
        }
    }

    #[test]
    fn u_n_supports_are_pairwise_disjoint_past_level_one() {
        assert_eq!(u_n(1).support(), IntervalSet::full());
        for n in 2..=5u32 {
            for m in n + 1..=5 {
                assert!(u_n(n).support().is_disjoint(&u_n(m).support()));
            }
        }
    }

    #[test]
    fn u_2_matches_the_odometer_on_its_upper_cylinder() {
        let here = set(&[("1/2", "3/4")]);
        assert_eq!(
            u_n(2).as_map().restrict(&here),
            odometer_at_level(2).as_map().restrict(&here)
        );
    }

    #[test]
    fn group_contains_full_symmetric_group() {
        let gens = [
            AtomPermutation::new(2, Perm::cycle(4, &[0, 1, 2, 3])),
            AtomPermutation::new(2, Perm::transposition(4, 0, 1)),
        ];
        let targets: Vec<AtomPermutation> = adjacent_transpositions(4)
            .into_iter()
            .map(|p| AtomPermutation::new(2, p))
            .collect();
        let cert = group_contains(&gens, &targets).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.method, Engine::BruteClosure);
        assert_eq!(cert.order, Some(24));
    }

    #[test]
    fn group_contains_sees_proper_subgroups() {
        let gens = [AtomPermutation::new(2, Perm::cycle(4, &[0, 1, 2, 3]))];
        let target = [AtomPermutation::new(2, Perm::transposition(4, 0, 1))];
        let cert = group_contains(&gens, &target).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.order, Some(4));
    }

    #[test]
    fn group_contains_trivial_cases() {
        let cert = group_contains(&[], &[AtomPermutation::identity(2)]).unwrap();
        assert!(cert.verdict);
        assert!(group_contains(&[], &[]).unwrap().verdict);
        let mismatch = group_contains(
            &[AtomPermutation::identity(2)],
            &[AtomPermutation::identity(3)],
        );
        assert!(mismatch.is_err());
    }

    #[test]
    fn conjugate_lemma_certificates_small_levels() {
        let two = lemma_conjugates_certificate(2);
        assert!(two.verdict);
        assert_eq!(two.method, Engine::BruteClosure);
        assert_eq!(two.order, Some(24));

        let three = lemma_conjugates_certificate(3);
        assert!(three.verdict);
        assert_eq!(three.method, Engine::BruteClosure);
        assert_eq!(three.order, Some(40_320));
    }

    #[test]
    fn conjugate_lemma_certificate_level_four_uses_the_chain() {
        let four = lemma_conjugates_certificate(4);
        assert!(four.verdict);
        assert_eq!(four.method, Engine::StabilizerChain);
        assert_eq!(four.order, Some(20_922_789_888_000));
    }

    #[test]
    fn evanescent_certificate_for_u_n_itself() {
        let cert = evanescent_certificate(&u_n(3), 1, 3).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.level, 3);
    }

    #[test]
    fn evanescent_certificate_rejects_the_identity() {
        let cert = evanescent_certificate(&Transform::identity(), 1, 2).unwrap();
        assert!(!cert.verdict);
    }

    #[test]
    fn evanescent_certificate_demands_dyadic_data() {
        let p = make_precycle(2, &r("1/3"), &IntervalSet::full()).unwrap();
        let v = closing_cycle(&p);
        assert_eq!(evanescent_certificate(&v, 1, 2), Err(NotDyadic));
    }

    #[test]
    fn build_evanescent_from_identity() {
        let w = build_evanescent_v(&Transform::identity(), 2, 2, &r("1/4")).unwrap();
        assert_eq!(w.pow(2), u_n(4));
        let d = uniform_distance(&w, &Transform::identity());
        assert_eq!(d, Rat::dyadic(1, 3));
        assert!(d < r("1/4"));
        let cert = evanescent_certificate(&w, 2, 2).unwrap();
        assert!(cert.verdict);
    }

    #[test]
    fn build_evanescent_from_an_involution() {
        let u = u_n(2);
        let w = build_evanescent_v(&u, 1, 2, &r("1/8")).unwrap();
        assert_eq!(w.pow(2), u_n(6));
        let d = uniform_distance(&u, &w);
        assert!(d < r("1/8"));
        assert!(!d.is_zero());
    }

    #[test]
    fn build_evanescent_rejects_off_grid_input() {
        let p = make_precycle(2, &r("1/3"), &IntervalSet::full()).unwrap();
        let v = closing_cycle(&p);
        assert_eq!(
            build_evanescent_v(&v, 1, 2, &r("1/4")),
            Err(EvanescentError::NotDyadic)
        );
    }

    #[test]
    fn cycle_root_extension_powers() {
        let v = u_n(3);
        let phi = make_precycle(2, &r("1/32"), &set(&[("1/2", "3/4")])).unwrap();
        for n in 1..=4u64 {
            let w = extend_by_cycle_root(&v, &phi, n).unwrap();
            assert_eq!(w.pow(n).pow(3), v.pow(3 * n));
            assert_eq!(
                uniform_distance(&w, &v),
                phi.basis().measure().mul_int(3)
            );
        }
    }

    #[test]
    fn cycle_root_extension_support() {
        let v = u_n(3);
        let phi = make_precycle(2, &r("1/32"), &set(&[("1/2", "3/4")])).unwrap();
        let w = extend_by_cycle_root(&v, &phi, 2).unwrap();
        assert_eq!(
            w.support().measure(),
            &v.support().measure() + &phi.basis().measure().mul_int(3)
        );
        assert!(v.support().is_subset(&w.support()));
    }

    #[test]
    fn cycle_root_extension_demands_disjointness() {
        let v = u_n(2);
        let phi = make_precycle(2, &r("1/16"), &set(&[("1/4", "1/2")])).unwrap();
        assert_eq!(
            extend_by_cycle_root(&v, &phi, 2),
            Err(CycleRootError::Overlapping)
        );
    }
}
