use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::set::{Interval, WindowSet};

/// Outcome of the pigeonhole shift search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftResult {
    pub z: i64,
    /// `|(C - z) ∩ D|`.
    pub overlap: usize,
    /// `(|C|/N)(|D|/n) - |D|/N`; `overlap / n` is never below it.
    pub guarantee: Rational,
}

impl ShiftResult {
    pub fn meets_guarantee(&self, n: u64) -> bool {
        ratio(self.overlap as i64, n as i64) >= self.guarantee
    }
}

fn check_inside(set: &WindowSet, range: Interval, name: &str) -> Result<()> {
    match (set.min(), set.max()) {
        (Some(lo), Some(hi)) if !range.contains(lo) || !range.contains(hi) => Err(
            Error::InvalidArgument(format!("{name} has elements outside {range}")),
        ),
        _ => Ok(()),
    }
}

/// For `C ⊆ [1, big_n]` and `D ⊆ [1, n]`, the shift `z ∈ [1, big_n]`
/// maximizing `|(C - z) ∩ D|`, smallest `z` on ties.
///
/// Averaging `Σ_{d∈D} 1_C(x + d)` over `x ∈ [1, N]` shows the maximum is at
/// least `|D|(|C| - n) / N`.
pub fn find_shift(c: &WindowSet, big_n: u64, d: &WindowSet, n: u64) -> Result<ShiftResult> {
    if n == 0 || n > big_n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n <= N, got n = {n}, N = {big_n}"
        )));
    }
    check_inside(c, Interval::with_len(1, big_n)?, "C")?;
    check_inside(d, Interval::with_len(1, n)?, "D")?;
    let (cc, dc) = (c.cardinality() as i64, d.cardinality() as i64);
    let (big, small) = (big_n as i64, n as i64);
    let guarantee = ratio(cc, big) * ratio(dc, small) - ratio(dc, big);

    let mut best = ShiftResult {
        z: 1,
        overlap: 0,
        guarantee,
    };
    if !d.is_empty() && !c.is_empty() {
        for z in 1..=big {
            // (C - z) ∩ D has the size of C ∩ (D + z)
            let overlap = c.overlap_with_shift(d, z);
            if overlap > best.overlap {
                best.z = z;
                best.overlap = overlap;
            }
        }
    }
    debug_assert!(best.meets_guarantee(n));
    Ok(best)
}
