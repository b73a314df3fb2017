use super::shift::{find_shift, ShiftResult};
use crate::analysis::best_window;
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::set::{Interval, WindowSet};

/// One index `n` of the construction: the densest windows of `A` (length
/// `n²`) and `B` (length `n`), the aligning shift, and
/// `E_n = (A_n - x_n - z_n) ∩ (B_n - y_n) ⊆ [1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineStage {
    pub n: u64,
    /// `A_n = A ∩ [x_n + 1, x_n + n²]`.
    pub x: i64,
    /// `B_n = B ∩ [y_n + 1, y_n + n]`.
    pub y: i64,
    pub shift: ShiftResult,
    /// `|A_n|`, `|B_n|`.
    pub count_a: u64,
    pub count_b: u64,
    /// Support `[1, n]`.
    pub e: WindowSet,
}

impl PipelineStage {
    pub fn z(&self) -> i64 {
        self.shift.z
    }

    /// `t_n = x_n - y_n + z_n`, so `E_n - E_n ⊆ A - B - t_n`.
    pub fn t(&self) -> i64 {
        self.x - self.y + self.shift.z
    }

    pub fn e_density(&self) -> Rational {
        ratio(self.e.cardinality() as i64, self.n as i64)
    }

    /// `(|A_n|/n²)(|B_n|/n) - |B_n|/n²`.
    pub fn lower_bound(&self) -> Rational {
        let (n, nn) = (self.n as i64, (self.n * self.n) as i64);
        ratio(self.count_a as i64, nn) * ratio(self.count_b as i64, n) - ratio(self.count_b as i64, nn)
    }

    /// Recomputes `E_n` from `A` and `B` by direct membership.
    pub fn recompute_e(&self, a: &WindowSet, b: &WindowSet) -> Result<WindowSet> {
        let nn = self.n * self.n;
        let a_win = Interval::with_len(self.x + 1, nn)?;
        let b_win = Interval::with_len(self.y + 1, self.n)?;
        WindowSet::from_predicate(Interval::with_len(1, self.n)?, |e| {
            let in_a = e + self.x + self.shift.z;
            let in_b = e + self.y;
            a_win.contains(in_a) && a.contains(in_a) && b_win.contains(in_b) && b.contains(in_b)
        })
    }
}

/// Builds stage `n`. Needs `n² <= |support(A)|` and `n <= |support(B)|`.
pub fn build_stage(a: &WindowSet, b: &WindowSet, n: u64) -> Result<PipelineStage> {
    let pa = a.prefix_counts();
    let pb = b.prefix_counts();
    build_stage_with(a, &pa, b, &pb, n)
}

pub(crate) fn build_stage_with(
    a: &WindowSet,
    prefix_a: &[u32],
    b: &WindowSet,
    prefix_b: &[u32],
    n: u64,
) -> Result<PipelineStage> {
    let skip = |reason: String| Error::StageSkipped { n, reason };
    if n == 0 {
        return Err(skip("n must be >= 1".into()));
    }
    let nn = n
        .checked_mul(n)
        .ok_or_else(|| skip("n² overflows".into()))?;
    if nn > a.support().len() {
        return Err(skip(format!("n² = {nn} exceeds |support(A)| = {}", a.support().len())));
    }
    if n > b.support().len() {
        return Err(skip(format!("n exceeds |support(B)| = {}", b.support().len())));
    }
    let (count_a, at_a) = best_window(prefix_a, nn as usize);
    let (count_b, at_b) = best_window(prefix_b, n as usize);
    let x = a.support().lo() + at_a as i64 - 1;
    let y = b.support().lo() + at_b as i64 - 1;

    // C = A_n - x_n ⊆ [1, n²],  D = B_n - y_n ⊆ [1, n]
    let c = a.restrict(&Interval::with_len(x + 1, nn)?)?.shift(-x)?;
    let d = b.restrict(&Interval::with_len(y + 1, n)?)?.shift(-y)?;
    let shift = find_shift(&c, nn, &d, n)?;
    let e = d.intersection(&c.shift(-shift.z)?).resupport(d.support())?;
    debug_assert_eq!(e.support(), Interval::with_len(1, n)?);
    debug_assert_eq!(e.cardinality(), shift.overlap);
    Ok(PipelineStage {
        n,
        x,
        y,
        shift,
        count_a,
        count_b,
        e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn periodic_stage_meets_shift_bound() {
        let four = WindowSet::from_predicate(iv(-10_000, 10_000), |x| x % 4 == 0).unwrap();
        let s = build_stage(&four, &four, 20).unwrap();
        // (100/400)(5/20) - 5/400
        assert_eq!(s.lower_bound(), ratio(1, 20));
        assert!(s.e_density() >= s.lower_bound());
        assert_eq!(s.e_density(), ratio(1, 4));
        assert_eq!(s.recompute_e(&four, &four).unwrap(), s.e);
        assert_eq!(s.x, -10_001);
        assert_eq!(s.y, -10_001);
    }

    #[test]
    fn full_sets_give_full_e() {
        let full = WindowSet::full(iv(0, 999)).unwrap();
        // z >= 1, so n = 1 (N = 1) has no room for an overlap
        assert_eq!(build_stage(&full, &full, 1).unwrap().e.cardinality(), 0);
        for n in [2, 7, 31] {
            let s = build_stage(&full, &full, n).unwrap();
            assert_eq!(s.e.cardinality() as u64, n);
            assert_eq!(s.e_density(), ratio(1, 1));
        }
    }

    #[test]
    fn empty_b_gives_empty_e() {
        let full = WindowSet::full(iv(0, 999)).unwrap();
        let none = WindowSet::empty(iv(0, 99)).unwrap();
        let s = build_stage(&full, &none, 10).unwrap();
        assert!(s.e.is_empty());
        assert_eq!(s.e.support(), iv(1, 10));
        assert_eq!(s.e_density(), ratio(0, 1));
    }

    #[test]
    fn oversized_stage_is_skipped() {
        let full = WindowSet::full(iv(0, 99)).unwrap();
        assert!(matches!(build_stage(&full, &full, 11), Err(Error::StageSkipped { n: 11, .. })));
        assert!(build_stage(&full, &full, 10).is_ok());
        let short = WindowSet::full(iv(0, 4)).unwrap();
        assert!(matches!(build_stage(&full, &short, 6), Err(Error::StageSkipped { .. })));
    }
}
