//! Finite-support integer sets backed by bit vectors.
//!
//! A [`WindowSet`] is a set of integers truncated to a bounded support
//! interval. Bit `i` of the membership vector stands for the integer
//! `support.lo + i`. All algebra is exact for the truncations involved:
//! `difference_set(A, B)` is `{a - b}` over the stored elements only, never
//! an approximation of the underlying infinite sets.

use crate::error::{Error, Result};
use std::fmt;

const WORD: usize = 64;

/// Largest support length (in bits) a [`WindowSet`] may carry.
pub const MAX_SUPPORT_LEN: u64 = 1 << 32;

/// Inclusive integer interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: i64,
    hi: i64,
}

// an interval always has at least one point
#[allow(clippy::len_without_is_empty)]
impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// `[start, start + len - 1]`.
    pub fn with_len(start: i64, len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("interval length must be >= 1".into()));
        }
        let hi = i64::try_from(start as i128 + len as i128 - 1)
            .map_err(|_| Error::Overflow("interval end"))?;
        Interval::new(start, hi)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        (self.hi as i128 - self.lo as i128 + 1) as u64
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn shift(&self, z: i64) -> Result<Interval> {
        let lo = self.lo.checked_add(z).ok_or(Error::Overflow("interval shift"))?;
        let hi = self.hi.checked_add(z).ok_or(Error::Overflow("interval shift"))?;
        Ok(Interval { lo, hi })
    }

    pub fn negate(&self) -> Result<Interval> {
        let lo = self.hi.checked_neg().ok_or(Error::Overflow("interval negate"))?;
        let hi = self.lo.checked_neg().ok_or(Error::Overflow("interval negate"))?;
        Ok(Interval { lo, hi })
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An integer set restricted to a bounded support interval.
///
/// Values are immutable once built; every operation returns a new set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WindowSet {
    support: Interval,
    words: Vec<u64>,
    /// Set by the algebra when an operand was empty and the natural hull
    /// support does not exist. Such a set is empty on `[0, 0]`.
    degenerate: bool,
}

impl fmt::Debug for WindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("WindowSet");
        d.field("support", &self.support);
        if self.degenerate {
            d.field("degenerate", &true);
        }
        if self.cardinality() <= 32 {
            d.field("elements", &self.to_vec());
        } else {
            d.field("cardinality", &self.cardinality());
        }
        d.finish()
    }
}

fn word_count(len: u64) -> usize {
    (len as usize).div_ceil(WORD)
}

fn check_len(support: &Interval) -> Result<usize> {
    let len = support.len();
    if len > MAX_SUPPORT_LEN {
        return Err(Error::SupportTooLarge(len));
    }
    Ok(len as usize)
}

impl WindowSet {
    pub fn empty(support: Interval) -> Result<Self> {
        let len = check_len(&support)?;
        Ok(WindowSet {
            support,
            words: vec![0; word_count(len as u64)],
            degenerate: false,
        })
    }

    /// The flagged empty set returned when an operand of a binary operation is empty.
    pub fn degenerate() -> Self {
        WindowSet {
            support: Interval { lo: 0, hi: 0 },
            words: vec![0],
            degenerate: true,
        }
    }

    pub fn full(support: Interval) -> Result<Self> {
        let mut s = WindowSet::empty(support)?;
        s.words.iter_mut().for_each(|w| *w = !0);
        s.clear_tail();
        Ok(s)
    }

    /// Elements outside `support` are dropped, duplicates collapse.
    pub fn from_elements<I>(elems: I, support: Interval) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut s = WindowSet::empty(support)?;
        for x in elems {
            if support.contains(x) {
                s.set_index(s.index_of(x));
            }
        }
        Ok(s)
    }

    pub fn from_predicate(support: Interval, mut pred: impl FnMut(i64) -> bool) -> Result<Self> {
        let mut s = WindowSet::empty(support)?;
        for (i, x) in support.iter().enumerate() {
            if pred(x) {
                s.set_index(i);
            }
        }
        Ok(s)
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn support_len(&self) -> usize {
        self.support.len() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.support.contains(x) && self.get_index(self.index_of(x))
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = self.support.lo;
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(lo + (wi * WORD + b) as i64)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<i64> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<i64> {
        let (wi, w) = self.words.iter().enumerate().rev().find(|(_, &w)| w != 0)?;
        let b = WORD - 1 - w.leading_zeros() as usize;
        Some(self.support.lo + (wi * WORD + b) as i64)
    }

    /// Same members, regardless of support or flag.
    pub fn same_elements(&self, other: &WindowSet) -> bool {
        self.cardinality() == other.cardinality() && self.iter().all(|x| other.contains(x))
    }

    /// `|A ∩ I|`, counting only inside the support.
    pub fn count_in(&self, interval: &Interval) -> usize {
        match interval.intersect(&self.support) {
            None => 0,
            Some(i) => {
                let start = self.index_of(i.lo);
                self.count_index_range(start, start + i.len() as usize)
            }
        }
    }

    pub fn shift(&self, z: i64) -> Result<WindowSet> {
        Ok(WindowSet {
            support: self.support.shift(z)?,
            words: self.words.clone(),
            degenerate: self.degenerate,
        })
    }

    /// `A ∩ I` on the support `I ∩ support`.
    pub fn restrict(&self, interval: &Interval) -> Result<WindowSet> {
        let support = interval
            .intersect(&self.support)
            .ok_or(Error::EmptyWindow {
                interval: *interval,
                support: self.support,
            })?;
        self.resupport(support)
    }

    /// The same members re-expressed on `support`; members outside it are dropped.
    pub fn resupport(&self, support: Interval) -> Result<WindowSet> {
        let mut out = WindowSet::empty(support)?;
        let offset = support.lo as i128 - self.support.lo as i128;
        let far = self.support_len() as i128 + out.support_len() as i128;
        if offset.abs() <= far {
            let offset = offset as i64;
            for (j, w) in out.words.iter_mut().enumerate() {
                *w = self.word_at(offset + (j * WORD) as i64);
            }
            out.clear_tail();
        }
        Ok(out)
    }

    /// `-A = {-a}` on `[-hi, -lo]`.
    pub fn negate(&self) -> Result<WindowSet> {
        let support = self.support.negate()?;
        let len = self.support_len() as i64;
        let mut out = WindowSet::empty(support)?;
        for (j, w) in out.words.iter_mut().enumerate() {
            *w = self.word_at(len - WORD as i64 * (j as i64 + 1)).reverse_bits();
        }
        out.clear_tail();
        out.degenerate = self.degenerate;
        Ok(out)
    }

    /// Complement within the support.
    pub fn complement(&self) -> WindowSet {
        let mut out = self.clone();
        out.words.iter_mut().for_each(|w| *w = !*w);
        out.clear_tail();
        out.degenerate = false;
        out
    }

    /// `A ∪ B` on the hull of both supports.
    pub fn union(&self, other: &WindowSet) -> Result<WindowSet> {
        let support = self.support.hull(&other.support);
        let mut out = WindowSet::empty(support)?;
        out.or_at(self, (self.support.lo - support.lo) as usize);
        out.or_at(other, (other.support.lo - support.lo) as usize);
        Ok(out)
    }

    /// `A ∩ B` on the intersection of the supports. Disjoint supports give
    /// the flagged degenerate empty set.
    pub fn intersection(&self, other: &WindowSet) -> WindowSet {
        let Some(support) = self.support.intersect(&other.support) else {
            return WindowSet::degenerate();
        };
        let a = self.restrict(&support).expect("overlapping supports");
        let b = other.restrict(&support).expect("overlapping supports");
        let words = a.words.iter().zip(&b.words).map(|(x, y)| x & y).collect();
        WindowSet {
            support,
            words,
            degenerate: false,
        }
    }

    /// `|A ∩ (B + z)|`, computed word by word without materializing `B + z`.
    pub fn overlap_with_shift(&self, other: &WindowSet, z: i64) -> usize {
        // bit j of `other` is the integer other.lo + j + z, which is bit
        // (other.lo + z - self.lo) + j of self.
        let base = other.support.lo as i128 + z as i128 - self.support.lo as i128;
        let len = self.support_len() as i128;
        if base >= len || base + other.support_len() as i128 <= 0 {
            return 0;
        }
        let base = base as i64;
        other
            .words
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(j, &w)| (w & self.word_at(base + (j * WORD) as i64)).count_ones() as usize)
            .sum()
    }

    /// Is `x` in `A - B`? Direct membership test, no difference set built.
    pub fn difference_contains(&self, other: &WindowSet, x: i64) -> bool {
        // x ∈ A - B  ⟺  (B + x) ∩ A ≠ ∅
        self.overlap_with_shift(other, x) > 0
    }

    /// `A - B = {a - b}` on `[A.lo - B.hi, A.hi - B.lo]`.
    ///
    /// One shifted OR per element of the smaller operand.
    pub fn difference_set(&self, other: &WindowSet) -> Result<WindowSet> {
        if self.is_empty() || other.is_empty() {
            return Ok(WindowSet::degenerate());
        }
        let lo = self
            .support
            .lo
            .checked_sub(other.support.hi)
            .ok_or(Error::Overflow("difference set support"))?;
        let hi = self
            .support
            .hi
            .checked_sub(other.support.lo)
            .ok_or(Error::Overflow("difference set support"))?;
        let mut out = WindowSet::empty(Interval::new(lo, hi)?)?;
        if other.cardinality() <= self.cardinality() {
            // A - b sits at offset B.hi - b
            for b in other.iter() {
                out.or_at(self, (other.support.hi - b) as usize);
            }
        } else {
            // a - B = (-B) + a sits at offset a - A.lo
            let neg = other.negate()?;
            for a in self.iter() {
                out.or_at(&neg, (a - self.support.lo) as usize);
            }
        }
        Ok(out)
    }

    /// `A + B = {a + b}` on `[A.lo + B.lo, A.hi + B.hi]`.
    pub fn sumset(&self, other: &WindowSet) -> Result<WindowSet> {
        if self.is_empty() || other.is_empty() {
            return Ok(WindowSet::degenerate());
        }
        let lo = self
            .support
            .lo
            .checked_add(other.support.lo)
            .ok_or(Error::Overflow("sumset support"))?;
        let hi = self
            .support
            .hi
            .checked_add(other.support.hi)
            .ok_or(Error::Overflow("sumset support"))?;
        let mut out = WindowSet::empty(Interval::new(lo, hi)?)?;
        let (small, large) = if other.cardinality() <= self.cardinality() {
            (other, self)
        } else {
            (self, other)
        };
        for s in small.iter() {
            out.or_at(large, (s - small.support.lo) as usize);
        }
        Ok(out)
    }

    /// `A + F = ⋃_{f ∈ F} (A + f)` on the hull `[A.lo + min F, A.hi + max F]`.
    pub fn add_finite(&self, shifts: &[i64]) -> Result<WindowSet> {
        let (Some(&min), Some(&max)) = (shifts.iter().min(), shifts.iter().max()) else {
            return Err(Error::InvalidArgument("shift set F must be nonempty".into()));
        };
        let lo = self
            .support
            .lo
            .checked_add(min)
            .ok_or(Error::Overflow("finite shift union"))?;
        let hi = self
            .support
            .hi
            .checked_add(max)
            .ok_or(Error::Overflow("finite shift union"))?;
        let mut out = WindowSet::empty(Interval::new(lo, hi)?)?;
        let mut fs = shifts.to_vec();
        fs.sort_unstable();
        fs.dedup();
        for f in fs {
            out.or_at(self, (f - min) as usize);
        }
        out.degenerate = self.degenerate;
        Ok(out)
    }

    /// Longest run of consecutive non-members in `interval`, counting the
    /// runs that touch either end. `None` when `A ∩ interval` is empty.
    pub fn max_gap(&self, interval: &Interval) -> Result<Option<u64>> {
        if !self.support.contains_interval(interval) {
            return Err(Error::range(
                "gap interval",
                format!("{interval} not inside support {}", self.support),
            ));
        }
        let mut prev = interval.lo as i128 - 1;
        let mut best = 0i128;
        let mut any = false;
        for x in self.iter_in(interval) {
            best = best.max(x as i128 - prev - 1);
            prev = x as i128;
            any = true;
        }
        if !any {
            return Ok(None);
        }
        best = best.max(interval.hi as i128 - prev);
        Ok(Some(best as u64))
    }

    /// Members inside `interval`, increasing.
    pub fn iter_in(&self, interval: &Interval) -> impl Iterator<Item = i64> + '_ {
        let range = interval.intersect(&self.support);
        let (lo, hi) = range.map_or((1, 0), |r| (r.lo, r.hi));
        let first_word = if lo <= hi { self.index_of(lo) / WORD } else { 0 };
        let skip = if lo <= hi { first_word } else { self.words.len() };
        let base = self.support.lo;
        self.words
            .iter()
            .enumerate()
            .skip(skip)
            .flat_map(move |(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(base + (wi * WORD + b) as i64)
                })
            })
            .skip_while(move |&x| x < lo)
            .take_while(move |&x| x <= hi)
    }

    /// Maximal runs of consecutive members, in increasing order.
    pub fn runs(&self) -> Vec<Interval> {
        let mut out: Vec<Interval> = Vec::new();
        for x in self.iter() {
            match out.last_mut() {
                Some(r) if r.hi + 1 == x => r.hi = x,
                _ => out.push(Interval { lo: x, hi: x }),
            }
        }
        out
    }

    /// `counts[i]` = members among the first `i` support positions.
    pub fn prefix_counts(&self) -> Vec<u32> {
        let len = self.support_len();
        let mut out = Vec::with_capacity(len + 1);
        let mut acc = 0u32;
        out.push(0);
        for i in 0..len {
            acc += self.get_index(i) as u32;
            out.push(acc);
        }
        out
    }

    fn index_of(&self, x: i64) -> usize {
        (x as i128 - self.support.lo as i128) as usize
    }

    fn get_index(&self, i: usize) -> bool {
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    fn set_index(&mut self, i: usize) {
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    fn clear_tail(&mut self) {
        let len = self.support_len();
        let rem = len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// 64 membership bits starting at bit index `offset`; positions outside
    /// `[0, len)` read as zero. Relies on the tail bits being clear.
    fn word_at(&self, offset: i64) -> u64 {
        let len = self.support_len() as i64;
        if offset >= len || offset <= -(WORD as i64) {
            return 0;
        }
        let q = offset.div_euclid(WORD as i64);
        let r = offset.rem_euclid(WORD as i64) as u32;
        let get = |i: i64| -> u64 {
            if i < 0 {
                0
            } else {
                self.words.get(i as usize).copied().unwrap_or(0)
            }
        };
        if r == 0 {
            get(q)
        } else {
            (get(q) >> r) | (get(q + 1) << (WORD as u32 - r))
        }
    }

    /// ORs `src` into `self` with src bit 0 landing on bit `offset`.
    /// `offset + src.len` must not exceed `self.len`.
    fn or_at(&mut self, src: &WindowSet, offset: usize) {
        let src_len = src.support_len();
        debug_assert!(offset + src_len <= self.support_len());
        let first = offset / WORD;
        let last = (offset + src_len - 1) / WORD;
        for j in first..=last {
            self.words[j] |= src.word_at((j * WORD) as i64 - offset as i64);
        }
    }

    fn count_index_range(&self, start: usize, end: usize) -> usize {
        if start >= end {
            return 0;
        }
        let (sw, sb) = (start / WORD, start % WORD);
        let (ew, eb) = (end / WORD, end % WORD);
        let mask_from = |b: usize| !0u64 << b;
        if sw == ew {
            let mask = mask_from(sb) & !mask_from(eb);
            return (self.words[sw] & mask).count_ones() as usize;
        }
        let mut total = (self.words[sw] & mask_from(sb)).count_ones() as usize;
        total += self.words[sw + 1..ew]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>();
        if eb != 0 {
            total += (self.words[ew] & !mask_from(eb)).count_ones() as usize;
        }
        total
    }
}
