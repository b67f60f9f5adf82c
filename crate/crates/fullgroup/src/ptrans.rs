//! Piecewise translations of the unit interval.
//!
//! A [`PiecewiseTranslation`] is a measure-preserving partial injection of
//! `[0,1)` given by finitely many pieces, each a half-open interval moved
//! rigidly by a rational offset.  Pieces are kept in canonical form: sorted
//! by source left endpoint, sources pairwise disjoint, images pairwise
//! disjoint, and adjacent pieces with equal offsets merged.  Canonical form
//! is a normal form, so two maps agree as functions exactly when their
//! representations are equal.
//!
//! A map whose domain is all of `[0,1)` is a [`Transform`]; transforms are
//! the bijections the uniform metric, periods, and roots speak about.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::interval::{Interval, IntervalSet};
use crate::perm::Perm;
use crate::rat::Rat;

/// One translated interval: `x -> x + offset` on `src`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    src: Interval,
    offset: Rat,
}

impl Piece {
    /// The image `src + offset` must stay inside `[0,1)`.
    pub fn new(src: Interval, offset: Rat) -> Piece {
        let lo = src.start() + &offset;
        let hi = src.end() + &offset;
        assert!(
            !lo.is_negative() && hi <= Rat::one(),
            "piece image [{}, {}) leaves the unit interval",
            lo,
            hi
        );
        Piece { src, offset }
    }

    pub fn src(&self) -> &Interval {
        &self.src
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn dst(&self) -> Interval {
        self.src.translate(&self.offset)
    }
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}", self.src, self.offset)
    }
}

/// Rejected constructions: two sources or two images meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OverlapError {
    Sources(Interval, Interval),
    Images(Interval, Interval),
}

impl fmt::Display for OverlapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OverlapError::Sources(a, b) => write!(f, "sources overlap: {} and {}", a, b),
            OverlapError::Images(a, b) => write!(f, "images overlap: {} and {}", a, b),
        }
    }
}

/// A measure-preserving partial injection of `[0,1)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiecewiseTranslation {
    pieces: Vec<Piece>,
}

impl PiecewiseTranslation {
    /// Canonicalizes and validates: sources disjoint, images disjoint,
    /// adjacent equal-offset pieces merged.
    pub fn from_pieces<I: IntoIterator<Item = Piece>>(
        pieces: I,
    ) -> Result<PiecewiseTranslation, OverlapError> {
        let mut pieces: Vec<Piece> = pieces.into_iter().collect();
        pieces.sort_by(|a, b| a.src.start().cmp(b.src.start()));
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = out.last_mut() {
                if p.src.start() < last.src.end() {
                    return Err(OverlapError::Sources(last.src.clone(), p.src.clone()));
                }
                if p.src.start() == last.src.end() && p.offset == last.offset {
                    *last = Piece {
                        src: Interval::new(last.src.start().clone(), p.src.end().clone()),
                        offset: p.offset,
                    };
                    continue;
                }
            }
            out.push(p);
        }
        let mut images: Vec<Interval> = out.iter().map(|p| p.dst()).collect();
        images.sort();
        for w in images.windows(2) {
            if w[1].start() < w[0].end() {
                return Err(OverlapError::Images(w[0].clone(), w[1].clone()));
            }
        }
        Ok(PiecewiseTranslation { pieces: out })
    }

    /// The empty map (domain and range empty).
    pub fn empty() -> PiecewiseTranslation {
        PiecewiseTranslation { pieces: Vec::new() }
    }

    /// The identity restricted to `set`.
    pub fn identity_on(set: &IntervalSet) -> PiecewiseTranslation {
        PiecewiseTranslation {
            pieces: set
                .iter()
                .map(|iv| Piece {
                    src: iv.clone(),
                    offset: Rat::zero(),
                })
                .collect(),
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn domain(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().map(|p| p.src.clone()))
    }

    pub fn range(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().map(|p| p.dst()))
    }

    /// Applies the map; `None` outside the domain.
    pub fn apply(&self, x: &Rat) -> Option<Rat> {
        let i = self.pieces.partition_point(|p| p.src.end() <= x);
        let p = self.pieces.get(i)?;
        if p.src.contains_point(x) {
            Some(x + &p.offset)
        } else {
            None
        }
    }

    /// `self` after `other`: `x -> self(other(x))`, defined where the
    /// composite is.
    pub fn compose(&self, other: &PiecewiseTranslation) -> PiecewiseTranslation {
        let mut out = Vec::new();
        for q in &other.pieces {
            let img = q.dst();
            let mut i = self
                .pieces
                .partition_point(|p| p.src.end() <= img.start());
            while i < self.pieces.len() && self.pieces[i].src.start() < img.end() {
                if let Some(ov) = self.pieces[i].src.intersect(&img) {
                    out.push(Piece {
                        src: ov.translate(&-&q.offset),
                        offset: &q.offset + &self.pieces[i].offset,
                    });
                }
                i += 1;
            }
        }
        PiecewiseTranslation::from_pieces(out).expect("composition preserves disjointness")
    }

    pub fn invert(&self) -> PiecewiseTranslation {
        PiecewiseTranslation::from_pieces(self.pieces.iter().map(|p| Piece {
            src: p.dst(),
            offset: -&p.offset,
        }))
        .expect("inversion preserves disjointness")
    }

    /// Union of two maps with disjoint domains and disjoint ranges.
    pub fn disjoint_union(
        &self,
        other: &PiecewiseTranslation,
    ) -> Result<PiecewiseTranslation, OverlapError> {
        PiecewiseTranslation::from_pieces(
            self.pieces.iter().chain(other.pieces.iter()).cloned(),
        )
    }

    /// Points moved by the map, on either side: the non-fixed part of the
    /// domain together with the non-fixed part of the range.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::from_intervals(
            self.pieces
                .iter()
                .filter(|p| !p.offset.is_zero())
                .flat_map(|p| [p.src.clone(), p.dst()]),
        )
    }

    /// Restriction to `dom(self) ∩ set`.
    pub fn restrict(&self, set: &IntervalSet) -> PiecewiseTranslation {
        let mut out = Vec::new();
        for p in &self.pieces {
            let src = IntervalSet::interval(p.src.start().clone(), p.src.end().clone());
            for iv in src.intersection(set).iter() {
                out.push(Piece {
                    src: iv.clone(),
                    offset: p.offset.clone(),
                });
            }
        }
        PiecewiseTranslation::from_pieces(out).expect("restriction preserves disjointness")
    }

    /// Image of `set ∩ dom(self)`.
    pub fn image_of(&self, set: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for p in &self.pieces {
            let src = IntervalSet::interval(p.src.start().clone(), p.src.end().clone());
            for iv in src.intersection(set).iter() {
                parts.push(iv.translate(&p.offset));
            }
        }
        IntervalSet::from_intervals(parts)
    }

    /// Preimage of `set ∩ rng(self)`.
    pub fn preimage_of(&self, set: &IntervalSet) -> IntervalSet {
        self.invert().image_of(set)
    }
}

impl fmt::Debug for PiecewiseTranslation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", p)?;
        }
        write!(f, "}}")
    }
}

/// Error for maps used where a bijection of all of `[0,1)` is required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotTotal {
    pub missing: IntervalSet,
}

impl fmt::Display for NotTotal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "map is not total: domain misses {}", self.missing)
    }
}

/// A piecewise translation defined on all of `[0,1)`.  Total plus injective
/// plus measure-preserving makes it a bijection of the unit interval.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Transform(PiecewiseTranslation);

impl Transform {
    pub fn new(map: PiecewiseTranslation) -> Result<Transform, NotTotal> {
        let missing = map.domain().complement();
        if missing.is_empty() {
            Ok(Transform(map))
        } else {
            Err(NotTotal { missing })
        }
    }

    pub fn identity() -> Transform {
        Transform(PiecewiseTranslation::identity_on(&IntervalSet::full()))
    }

    pub fn as_map(&self) -> &PiecewiseTranslation {
        &self.0
    }

    pub fn into_map(self) -> PiecewiseTranslation {
        self.0
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        self.0.apply(x).expect("transform is total")
    }

    pub fn apply_inv(&self, x: &Rat) -> Rat {
        self.invert().apply(x)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Transform) -> Transform {
        Transform(self.0.compose(&other.0))
    }

    pub fn invert(&self) -> Transform {
        Transform(self.0.invert())
    }

    pub fn pow(&self, mut k: u64) -> Transform {
        let mut base = self.clone();
        let mut acc = Transform::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    pub fn pow_signed(&self, k: i64) -> Transform {
        if k >= 0 {
            self.pow(k as u64)
        } else {
            self.invert().pow(k.unsigned_abs())
        }
    }

    pub fn support(&self) -> IntervalSet {
        self.0.support()
    }

    /// Points fixed by the transform; complement of the support.
    pub fn fix_set(&self) -> IntervalSet {
        self.support().complement()
    }

    pub fn is_identity(&self) -> bool {
        self.0.pieces.iter().all(|p| p.offset.is_zero())
    }

    pub fn image_of(&self, set: &IntervalSet) -> IntervalSet {
        self.0.image_of(set)
    }

    pub fn preimage_of(&self, set: &IntervalSet) -> IntervalSet {
        self.0.preimage_of(set)
    }
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// The uniform metric: the measure of the set where the two transforms
/// disagree, computed on the common refinement of their pieces.
pub fn uniform_distance(s: &Transform, t: &Transform) -> Rat {
    let sp = &s.0.pieces;
    let tp = &t.0.pieces;
    let mut d = Rat::zero();
    let (mut i, mut j) = (0, 0);
    let mut x = Rat::zero();
    while i < sp.len() && j < tp.len() {
        let next = sp[i].src.end().clone().min(tp[j].src.end().clone());
        if sp[i].offset != tp[j].offset {
            d += &(&next - &x);
        }
        if sp[i].src.end() == &next {
            i += 1;
        }
        if tp[j].src.end() == &next {
            j += 1;
        }
        x = next;
    }
    d
}

/// A finite family of partial maps, viewed as a graphing.
#[derive(Clone, Debug, Default)]
pub struct Graphing {
    pub maps: Vec<PiecewiseTranslation>,
}

impl Graphing {
    pub fn new(maps: Vec<PiecewiseTranslation>) -> Graphing {
        Graphing { maps }
    }

    /// Sum of the domain measures of the members.
    pub fn cost(&self) -> Rat {
        let mut c = Rat::zero();
        for m in &self.maps {
            c += &m.domain().measure();
        }
        c
    }
}

/// Mismatch between the measures of a transport's source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureMismatch {
    pub from: Rat,
    pub to: Rat,
}

impl fmt::Display for MeasureMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "transport needs equal measures, got {} and {}",
            self.from, self.to
        )
    }
}

/// The greedy left-to-right transport of `a` onto `b`: both sets are walked
/// in increasing order and split into chunks of matching lengths, and each
/// chunk of `a` is translated onto its partner in `b`.  Deterministic, and
/// symmetric in the sense that `transport(b, a)` is the inverse.
pub fn transport(
    a: &IntervalSet,
    b: &IntervalSet,
) -> Result<PiecewiseTranslation, MeasureMismatch> {
    let (ma, mb) = (a.measure(), b.measure());
    if ma != mb {
        return Err(MeasureMismatch { from: ma, to: mb });
    }
    let mut out = Vec::new();
    let mut ai = a.iter();
    let mut bi = b.iter();
    let mut cur_a = ai.next().cloned();
    let mut cur_b = bi.next().cloned();
    while let (Some(ia), Some(ib)) = (&cur_a, &cur_b) {
        let len = ia.len().min(ib.len());
        let a_cut = ia.start() + &len;
        let b_cut = ib.start() + &len;
        out.push(Piece {
            src: Interval::new(ia.start().clone(), a_cut.clone()),
            offset: ib.start() - ia.start(),
        });
        cur_a = if &a_cut < ia.end() {
            Some(Interval::new(a_cut, ia.end().clone()))
        } else {
            ai.next().cloned()
        };
        cur_b = if &b_cut < ib.end() {
            Some(Interval::new(b_cut, ib.end().clone()))
        } else {
            bi.next().cloned()
        };
    }
    Ok(PiecewiseTranslation::from_pieces(out).expect("transport chunks are disjoint"))
}

/// The least `q` such that every breakpoint and offset of `map` is a
/// multiple of `1/q`, when it fits in `u64`.
pub fn common_grid(map: &PiecewiseTranslation) -> Option<u64> {
    let mut q: u64 = 1;
    for piece in map.pieces() {
        for r in [
            piece.src().start().denom_u64(),
            piece.src().end().denom_u64(),
            piece.offset().denom_u64(),
        ] {
            let d = r?;
            q = (q / q.gcd(&d)).checked_mul(d)?;
        }
    }
    Some(q)
}

/// The permutation `t` induces on the `q` equal atoms of `[0,1)`, or `None`
/// when some breakpoint or offset is off the `1/q` grid or `q` is out of
/// range for a permutation table.
pub fn atom_permutation(t: &Transform, q: u64) -> Option<Perm> {
    if q == 0 || q > 1 << 16 {
        return None;
    }
    let mut img = alloc::vec![usize::MAX; q as usize];
    for piece in t.as_map().pieces() {
        let a = piece.src().start().mul_int(q).to_u64()?;
        let b = piece.src().end().mul_int(q).to_u64()?;
        let d = piece.dst().start().mul_int(q).to_u64()?;
        for j in a..b {
            img[j as usize] = (d + (j - a)) as usize;
        }
    }
    Some(Perm::from_images(&img))
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
                .map(|(a, b, o)| Piece::new(iv(a, b), r(o))),
        )
        .unwrap()
    }

    fn half_swap() -> Transform {
        Transform::new(pt(&[("0", "1/2", "1/2"), ("1/2", "1", "-1/2")])).unwrap()
    }

    #[test]
    fn canonical_form_merges_equal_offsets() {
        let m = pt(&[("0", "1/4", "1/2"), ("1/4", "1/2", "1/2")]);
        assert_eq!(m.pieces().len(), 1);
        assert_eq!(m, pt(&[("0", "1/2", "1/2")]));
    }

    #[test]
    fn canonical_form_is_a_normal_form_under_rechopping() {
        let m = pt(&[("0", "1/2", "1/2"), ("1/2", "3/4", "-1/2"), ("3/4", "1", "-1/2")]);
        let chopped = pt(&[
            ("0", "1/8", "1/2"),
            ("1/8", "1/2", "1/2"),
            ("1/2", "2/3", "-1/2"),
            ("2/3", "1", "-1/2"),
        ]);
        assert_eq!(m, chopped);
        assert_eq!(m.pieces().len(), 2);
    }

    #[test]
    fn from_pieces_rejects_source_overlap() {
        let bad = PiecewiseTranslation::from_pieces([
            Piece::new(iv("0", "1/2"), r("1/2")),
            Piece::new(iv("1/4", "3/4"), r("1/4")),
        ]);
        assert!(matches!(bad, Err(OverlapError::Sources(_, _))));
    }

    #[test]
    fn from_pieces_rejects_image_overlap() {
        let bad = PiecewiseTranslation::from_pieces([
            Piece::new(iv("0", "1/4"), r("1/2")),
            Piece::new(iv("1/4", "1/2"), r("3/8")),
        ]);
        assert!(matches!(bad, Err(OverlapError::Images(_, _))));
    }

    #[test]
    fn apply_respects_domain() {
        let m = pt(&[("0", "1/4", "1/2")]);
        assert_eq!(m.apply(&r("1/8")), Some(r("5/8")));
        assert_eq!(m.apply(&r("1/2")), None);
        assert_eq!(half_swap().apply(&r("1/4")), r("3/4"));
    }

    #[test]
    fn compose_of_half_shift_with_itself_is_empty() {
        let m = pt(&[("0", "1/2", "1/2")]);
        assert!(m.compose(&m).is_empty());
    }

    #[test]
    fn compose_inverse_gives_identity_on_domain() {
        let m = pt(&[("0", "1/8", "1/2"), ("1/4", "3/8", "3/8")]);
        let id_dom = m.invert().compose(&m);
        assert_eq!(id_dom, PiecewiseTranslation::identity_on(&m.domain()));
        let id_rng = m.compose(&m.invert());
        assert_eq!(id_rng, PiecewiseTranslation::identity_on(&m.range()));
    }

    #[test]
    fn invert_swaps_source_and_image() {
        let m = pt(&[("0", "1/4", "1/2")]);
        assert_eq!(m.invert(), pt(&[("1/2", "3/4", "-1/2")]));
        assert_eq!(m.invert().invert(), m);
    }

    #[test]
    fn disjoint_union_requires_disjoint_ranges() {
        let a = pt(&[("0", "1/4", "1/2")]);
        let b = pt(&[("1/4", "1/2", "1/4")]);
        assert!(matches!(
            a.disjoint_union(&b),
            Err(OverlapError::Images(_, _))
        ));
        let c = pt(&[("1/4", "1/2", "-1/4")]);
        let u = a.disjoint_union(&c).unwrap();
        assert_eq!(u.domain(), set(&[("0", "1/2")]));
        assert_eq!(u.range(), set(&[("0", "1/4"), ("1/2", "3/4")]));
    }

    #[test]
    fn support_ignores_identity_pieces() {
        assert!(Transform::identity().support().is_empty());
        let m = pt(&[("0", "1/2", "1/2")]);
        assert_eq!(m.support(), IntervalSet::full());
        let mixed = pt(&[("0", "1/4", "0"), ("1/4", "1/2", "1/4")]);
        assert_eq!(mixed.support(), set(&[("1/4", "3/4")]));
    }

    #[test]
    fn fix_set_is_support_complement() {
        assert!(half_swap().fix_set().is_empty());
        assert_eq!(Transform::identity().fix_set(), IntervalSet::full());
    }

    #[test]
    fn uniform_distance_examples() {
        let t = half_swap();
        assert_eq!(uniform_distance(&t, &t), Rat::zero());
        assert_eq!(uniform_distance(&t, &Transform::identity()), Rat::one());
        assert_eq!(
            uniform_distance(&t, &Transform::identity()),
            t.support().measure()
        );
    }

    #[test]
    fn uniform_distance_agrees_with_support_of_quotient() {
        let s = half_swap();
        let t = Transform::new(pt(&[
            ("0", "1/4", "1/4"),
            ("1/4", "1/2", "-1/4"),
            ("1/2", "1", "0"),
        ]))
        .unwrap();
        let d = uniform_distance(&s, &t);
        assert_eq!(d, s.compose(&t.invert()).support().measure());
        assert_eq!(d, uniform_distance(&t, &s));
    }

    #[test]
    fn cost_sums_domain_measures() {
        assert_eq!(Graphing::new(Vec::new()).cost(), Rat::zero());
        let id = PiecewiseTranslation::identity_on(&IntervalSet::full());
        assert_eq!(Graphing::new(alloc::vec![id]).cost(), Rat::one());
        let g = Graphing::new(alloc::vec![
            pt(&[("0", "1/4", "1/2")]),
            pt(&[("0", "1/8", "1/8"), ("1/2", "5/8", "1/4")]),
        ]);
        assert_eq!(g.cost(), r("1/2"));
    }

    #[test]
    fn transport_single_blocks() {
        let m = transport(&set(&[("0", "1/4")]), &set(&[("1/2", "3/4")])).unwrap();
        assert_eq!(m, pt(&[("0", "1/4", "1/2")]));
    }

    #[test]
    fn transport_is_greedy_left_to_right() {
        let a = set(&[("0", "1/8"), ("1/4", "3/8")]);
        let b = set(&[("1/2", "3/4")]);
        let m = transport(&a, &b).unwrap();
        assert_eq!(m, pt(&[("0", "1/8", "1/2"), ("1/4", "3/8", "3/8")]));
    }

    #[test]
    fn transport_to_itself_is_identity() {
        let a = set(&[("0", "1/8"), ("1/4", "3/8")]);
        assert_eq!(transport(&a, &a).unwrap(), PiecewiseTranslation::identity_on(&a));
    }

    #[test]
    fn transport_is_inverse_symmetric() {
        let a = set(&[("0", "1/8"), ("1/4", "1/2")]);
        let b = set(&[("1/2", "5/8"), ("3/4", "1")]);
        let f = transport(&a, &b).unwrap();
        let g = transport(&b, &a).unwrap();
        assert_eq!(g, f.invert());
    }

    #[test]
    fn transport_checks_measures() {
        let e = transport(&set(&[("0", "1/4")]), &set(&[("1/2", "5/8")]));
        assert_eq!(
            e,
            Err(MeasureMismatch {
                from: r("1/4"),
                to: r("1/8")
            })
        );
    }

    #[test]
    fn transform_requires_totality() {
        let partial = pt(&[("0", "1/2", "1/2")]);
        let e = Transform::new(partial).unwrap_err();
        assert_eq!(e.missing, set(&[("1/2", "1")]));
    }

    #[test]
    fn transform_powers() {
        let t = half_swap();
        assert!(t.pow(2).is_identity());
        assert_eq!(t.pow(3), t);
        assert_eq!(t.pow_signed(-1), t.invert());
        assert!(t.compose(&t.invert()).is_identity());
    }

    #[test]
    fn image_and_preimage() {
        let t = half_swap();
        assert_eq!(t.image_of(&set(&[("0", "1/4")])), set(&[("1/2", "3/4")]));
        assert_eq!(t.preimage_of(&set(&[("0", "1/4")])), set(&[("1/2", "3/4")]));
        let m = pt(&[("0", "1/4", "1/2")]);
        assert_eq!(m.image_of(&IntervalSet::full()), set(&[("1/2", "3/4")]));
    }
}
