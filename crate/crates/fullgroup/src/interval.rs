//! Finite unions of half-open rational subintervals of `[0,1)`.
//!
//! An [`IntervalSet`] is kept normalized: intervals are nonempty, sorted by
//! left endpoint, pairwise disjoint, and never adjacent (touching intervals
//! are merged).  Normalization makes set equality structural equality and
//! makes Lebesgue measure a plain sum of lengths.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rat::Rat;

/// Half-open interval `[start, end)` with `start < end`, inside `[0,1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    start: Rat,
    end: Rat,
}

impl Interval {
    /// Requires `0 <= start < end <= 1`.
    pub fn new(start: Rat, end: Rat) -> Interval {
        assert!(
            !start.is_negative() && start < end && end <= Rat::one(),
            "invalid interval [{}, {})",
            start,
            end
        );
        Interval { start, end }
    }

    pub fn start(&self) -> &Rat {
        &self.start
    }

    pub fn end(&self) -> &Rat {
        &self.end
    }

    pub fn len(&self) -> Rat {
        &self.end - &self.start
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        &self.start <= x && x < &self.end
    }

    pub fn translate(&self, offset: &Rat) -> Interval {
        Interval::new(&self.start + offset, &self.end + offset)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let a = self.start.clone().max(other.start.clone());
        let b = self.end.clone().min(other.end.clone());
        if a < b {
            Some(Interval { start: a, end: b })
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Normalized finite union of half-open intervals in `[0,1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet { parts: Vec::new() }
    }

    /// The whole space `[0,1)`.
    pub fn full() -> IntervalSet {
        IntervalSet {
            parts: vec![Interval::new(Rat::zero(), Rat::one())],
        }
    }

    pub fn interval(start: Rat, end: Rat) -> IntervalSet {
        IntervalSet {
            parts: vec![Interval::new(start, end)],
        }
    }

    /// Union of arbitrary intervals; overlaps and adjacencies are merged.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(iter: I) -> IntervalSet {
        let mut parts: Vec<Interval> = iter.into_iter().collect();
        parts.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match out.last_mut() {
                Some(last) if iv.start <= last.end => {
                    if iv.end > last.end {
                        last.end = iv.end;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { parts: out }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Interval> {
        self.parts.iter()
    }

    pub fn count(&self) -> usize {
        self.parts.len()
    }

    pub fn measure(&self) -> Rat {
        let mut m = Rat::zero();
        for iv in &self.parts {
            m += &iv.len();
        }
        m
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        self.parts.iter().any(|iv| iv.contains_point(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.parts.iter().chain(other.parts.iter()).cloned())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if let Some(iv) = self.parts[i].intersect(&other.parts[j]) {
                out.push(iv);
            }
            if self.parts[i].end <= other.parts[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { parts: out }
    }

    /// Set difference `self \ other`.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for iv in &self.parts {
            let mut lo = iv.start.clone();
            for cut in &other.parts {
                if cut.end <= lo {
                    continue;
                }
                if cut.start >= iv.end {
                    break;
                }
                if cut.start > lo {
                    out.push(Interval {
                        start: lo.clone(),
                        end: cut.start.clone(),
                    });
                }
                lo = lo.max(cut.end.clone());
                if lo >= iv.end {
                    break;
                }
            }
            if lo < iv.end {
                out.push(Interval {
                    start: lo,
                    end: iv.end.clone(),
                });
            }
        }
        IntervalSet { parts: out }
    }

    /// Complement inside `[0,1)`.
    pub fn complement(&self) -> IntervalSet {
        IntervalSet::full().difference(self)
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Translate the whole set; the image must stay inside `[0,1)`.
    pub fn translate(&self, offset: &Rat) -> IntervalSet {
        IntervalSet {
            parts: self.parts.iter().map(|iv| iv.translate(offset)).collect(),
        }
    }

    /// Splits off the leftmost subset of measure exactly `m`, returning it
    /// together with the rest.  `None` if the set is too small.
    pub fn take_leftmost(&self, m: &Rat) -> Option<(IntervalSet, IntervalSet)> {
        assert!(!m.is_negative());
        if m.is_zero() {
            return Some((IntervalSet::empty(), self.clone()));
        }
        let mut need = m.clone();
        let mut taken = Vec::new();
        let mut rest = Vec::new();
        let mut iter = self.parts.iter();
        for iv in iter.by_ref() {
            let len = iv.len();
            if len < need {
                need -= &len;
                taken.push(iv.clone());
            } else {
                let cut = &iv.start + &need;
                taken.push(Interval {
                    start: iv.start.clone(),
                    end: cut.clone(),
                });
                if cut < iv.end {
                    rest.push(Interval {
                        start: cut,
                        end: iv.end.clone(),
                    });
                }
                need = Rat::zero();
                break;
            }
        }
        if !need.is_zero() {
            return None;
        }
        rest.extend(iter.cloned());
        Some((IntervalSet { parts: taken }, IntervalSet { parts: rest }))
    }

    /// Mirror image of [`IntervalSet::take_leftmost`].
    pub fn take_rightmost(&self, m: &Rat) -> Option<(IntervalSet, IntervalSet)> {
        assert!(!m.is_negative());
        if m.is_zero() {
            return Some((IntervalSet::empty(), self.clone()));
        }
        let mut need = m.clone();
        let mut taken = Vec::new();
        let mut rest = Vec::new();
        let mut iter = self.parts.iter().rev();
        for iv in iter.by_ref() {
            let len = iv.len();
            if len < need {
                need -= &len;
                taken.push(iv.clone());
            } else {
                let cut = &iv.end - &need;
                taken.push(Interval {
                    start: cut.clone(),
                    end: iv.end.clone(),
                });
                if iv.start < cut {
                    rest.push(Interval {
                        start: iv.start.clone(),
                        end: cut,
                    });
                }
                need = Rat::zero();
                break;
            }
        }
        if !need.is_zero() {
            return None;
        }
        rest.extend(iter.cloned());
        taken.reverse();
        rest.reverse();
        Some((IntervalSet { parts: taken }, IntervalSet { parts: rest }))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, iv) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", iv)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_intervals(
            pairs
                .iter()
                .map(|(a, b)| Interval::new(r(a), r(b))),
        )
    }

    #[test]
    fn measure_of_empty_is_zero() {
        assert_eq!(IntervalSet::empty().measure(), Rat::zero());
    }

    #[test]
    fn measure_of_full_is_one() {
        assert_eq!(IntervalSet::full().measure(), Rat::one());
    }

    #[test]
    fn measure_adds_disjoint_parts() {
        let s = set(&[("1/4", "1/2"), ("3/4", "1")]);
        assert_eq!(s.measure(), r("1/2"));
        assert_eq!(s.count(), 2);
    }

    #[test]
    fn normalization_merges_overlap_and_adjacency() {
        let s = set(&[("0", "1/2"), ("1/2", "3/4"), ("1/4", "2/3")]);
        assert_eq!(s, set(&[("0", "3/4")]));
        assert_eq!(s.count(), 1);
    }

    #[test]
    fn difference_and_complement() {
        let s = set(&[("0", "1/2")]);
        assert_eq!(s.complement(), set(&[("1/2", "1")]));
        let t = set(&[("1/4", "3/4")]);
        assert_eq!(s.difference(&t), set(&[("0", "1/4")]));
        assert_eq!(t.difference(&s), set(&[("1/2", "3/4")]));
        assert_eq!(s.union(&t), set(&[("0", "3/4")]));
        assert_eq!(s.intersection(&t), set(&[("1/4", "1/2")]));
    }

    #[test]
    fn subset_and_disjoint() {
        let s = set(&[("0", "1/4"), ("1/2", "3/4")]);
        assert!(s.is_subset(&set(&[("0", "3/4")])));
        assert!(!set(&[("0", "3/4")]).is_subset(&s));
        assert!(s.is_disjoint(&set(&[("1/4", "1/2")])));
        assert!(!s.is_disjoint(&set(&[("0", "1/8")])));
    }

    #[test]
    fn take_leftmost_splits_exactly() {
        let s = set(&[("0", "1/4"), ("1/2", "3/4")]);
        let (a, b) = s.take_leftmost(&r("3/8")).unwrap();
        assert_eq!(a, set(&[("0", "1/4"), ("1/2", "5/8")]));
        assert_eq!(b, set(&[("5/8", "3/4")]));
        assert_eq!(a.measure(), r("3/8"));
        assert!(s.take_leftmost(&r("2/3")).is_none());
        let (a, b) = s.take_leftmost(&r("1/2")).unwrap();
        assert_eq!(a, s);
        assert!(b.is_empty());
    }

    #[test]
    fn take_rightmost_splits_exactly() {
        let s = set(&[("0", "1/4"), ("1/2", "3/4")]);
        let (a, b) = s.take_rightmost(&r("3/8")).unwrap();
        assert_eq!(a, set(&[("1/8", "1/4"), ("1/2", "3/4")]));
        assert_eq!(b, set(&[("0", "1/8")]));
    }

    #[test]
    fn point_membership_respects_half_open_ends() {
        let s = set(&[("1/4", "1/2")]);
        assert!(s.contains_point(&r("1/4")));
        assert!(s.contains_point(&r("1/3")));
        assert!(!s.contains_point(&r("1/2")));
    }
}
