use crate::analysis::best_window;
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::set::{Interval, WindowSet};
use num_traits::{One, Zero};

/// A certified interval `[t+1, t+k] ⊆ A - B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseWitness {
    pub t: i64,
    pub k: u64,
    /// Window length with `a_N - αN > k`.
    pub n: u64,
    /// Densest window of `A` at length `N` (realizes `a_N`).
    pub window_a: Interval,
    /// Window of `B` at length `N` with at least `(1-α)N` members.
    pub window_b: Interval,
    pub count_a: u64,
    pub count_b: u64,
}

/// Thickness witness for `A - B` when `A` beats density `alpha` by more than
/// `k` on some window and `B` has density at least `1 - alpha` there.
///
/// Scans every length `N` from 1 up to the shorter support.
pub fn prop2_witness(a: &WindowSet, b: &WindowSet, k: u64, alpha: Rational) -> Result<Option<DenseWitness>> {
    let max = a.support().len().min(b.support().len());
    prop2_witness_over(a, b, k, alpha, 1..=max)
}

/// As [`prop2_witness`], scanning only the given lengths (in order).
pub fn prop2_witness_over(
    a: &WindowSet,
    b: &WindowSet,
    k: u64,
    alpha: Rational,
    lengths: impl IntoIterator<Item = u64>,
) -> Result<Option<DenseWitness>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if alpha < Rational::zero() || alpha > Rational::one() {
        return Err(Error::InvalidArgument("alpha must lie in [0, 1]".into()));
    }
    let (pa, pb) = (a.prefix_counts(), b.prefix_counts());
    let limit = a.support().len().min(b.support().len());
    let need_b = Rational::one() - alpha;
    for n in lengths {
        if n == 0 || n > limit {
            return Err(Error::range("window length", format!("{n} not in [1, {limit}]")));
        }
        let (count_a, at_a) = best_window(&pa, n as usize);
        // a_N - αN > k
        if ratio(count_a as i64, 1) - alpha * ratio(n as i64, 1) <= ratio(k as i64, 1) {
            continue;
        }
        let (count_b, at_b) = best_window(&pb, n as usize);
        if ratio(count_b as i64, 1) < need_b * ratio(n as i64, 1) {
            continue;
        }
        let window_a = Interval::with_len(a.support().lo() + at_a as i64, n)?;
        let window_b = Interval::with_len(b.support().lo() + at_b as i64, n)?;
        let t = window_a.lo() - window_b.lo();
        let witness = DenseWitness {
            t,
            k,
            n,
            window_a,
            window_b,
            count_a,
            count_b,
        };
        if !witness.verify(a, b) {
            return Err(Error::InvariantViolated(format!(
                "[{}, {}] not inside A - B at N = {n}",
                t + 1,
                t + k as i64
            )));
        }
        return Ok(Some(witness));
    }
    Ok(None)
}

impl DenseWitness {
    /// Direct membership check of `[t+1, t+k] ⊆ A - B`.
    pub fn verify(&self, a: &WindowSet, b: &WindowSet) -> bool {
        (1..=self.k as i64).all(|i| a.difference_contains(b, self.t + i))
    }
}
