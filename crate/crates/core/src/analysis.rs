//! Window density profiles and the thick / syndetic / piecewise-syndetic
//! predicates, each with an explicit witness.

use crate::error::{Error, Result};
use crate::rational::{ceil_times, ratio, Rational};
use crate::set::{Interval, WindowSet};
use rayon::prelude::*;

/// Best window count `a_n` for one length, with the least start achieving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileEntry {
    pub n: u64,
    pub best: u64,
    /// The window is `[offset + 1, offset + n]`.
    pub offset: i64,
}

impl ProfileEntry {
    pub fn window(&self) -> Interval {
        Interval::with_len(self.offset + 1, self.n).expect("profile windows lie in the support")
    }

    pub fn density(&self) -> Rational {
        ratio(self.best as i64, self.n as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityProfile {
    pub support: Interval,
    /// Sorted by `n`, no duplicates.
    pub entries: Vec<ProfileEntry>,
}

impl DensityProfile {
    pub fn get(&self, n: u64) -> Option<&ProfileEntry> {
        self.entries
            .binary_search_by_key(&n, |e| e.n)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Listed pairs `(m, n)` with `m + n` listed and `a_{m+n} > a_m + a_n`.
    pub fn subadditivity_violations(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i..] {
                if let Some(c) = self.get(a.n + b.n) {
                    if c.best > a.best + b.best {
                        out.push((a.n, b.n));
                    }
                }
            }
        }
        out
    }

    /// Lengths `n` with `a_n < ceil(alpha·n)`. A set with Banach density at
    /// least `alpha` has none.
    pub fn density_floor_violations(&self, alpha: &Rational) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|e| (e.best as i64) < ceil_times(alpha, e.n))
            .map(|e| e.n)
            .collect()
    }
}

/// Maximum count over windows of length `n` inside the support, with the
/// least start index. `prefix` comes from [`WindowSet::prefix_counts`].
pub(crate) fn best_window(prefix: &[u32], n: usize) -> (u64, usize) {
    let len = prefix.len() - 1;
    let mut best = 0u32;
    let mut at = 0usize;
    for s in 0..=len - n {
        let c = prefix[s + n] - prefix[s];
        if c > best {
            best = c;
            at = s;
        }
    }
    (best as u64, at)
}

fn check_length(a: &WindowSet, n: u64) -> Result<()> {
    if n == 0 || n > a.support().len() {
        return Err(Error::range(
            "window length",
            format!("{n} not in [1, {}]", a.support().len()),
        ));
    }
    Ok(())
}

/// `a_n = max_x |A ∩ [x+1, x+n]|` over windows inside the support, for each
/// requested length. Linear scan per length.
pub fn window_profile(a: &WindowSet, lengths: &[u64]) -> Result<DensityProfile> {
    let mut ns = lengths.to_vec();
    ns.sort_unstable();
    ns.dedup();
    for &n in &ns {
        check_length(a, n)?;
    }
    let prefix = a.prefix_counts();
    let lo = a.support().lo();
    let entries = ns
        .par_iter()
        .map(|&n| {
            let (best, at) = best_window(&prefix, n as usize);
            ProfileEntry {
                n,
                best,
                offset: lo + at as i64 - 1,
            }
        })
        .collect();
    Ok(DensityProfile {
        support: a.support(),
        entries,
    })
}

/// `min_n a_n / n` over the profiled lengths.
///
/// For the set the truncation came from this is an upper bound on the
/// Banach density; it is exact for periodic sets whose period divides a
/// listed length.
pub fn banach_estimate(profile: &DensityProfile) -> Result<Rational> {
    profile
        .entries
        .iter()
        .map(ProfileEntry::density)
        .min()
        .ok_or_else(|| Error::InvalidArgument("empty density profile".into()))
}

/// `max |A ∩ [1, n]| / n` for `n ∈ [max(1, N/2), N]`.
pub fn upper_density_estimate(a: &WindowSet, big_n: u64) -> Result<Rational> {
    upper_density_over(a, (big_n / 2).max(1), big_n)
}

/// `max |A ∩ [1, n]| / n` for `n ∈ [from, to]`; the support must start at 1.
pub fn upper_density_over(a: &WindowSet, from: u64, to: u64) -> Result<Rational> {
    let support = a.support();
    if support.lo() != 1 {
        return Err(Error::range(
            "initial-segment support",
            format!("support {support} must start at 1"),
        ));
    }
    if from == 0 || from > to || to > support.hi() as u64 {
        return Err(Error::range(
            "initial-segment length",
            format!("[{from}, {to}] not inside [1, {}]", support.hi()),
        ));
    }
    let mut count = match Interval::new(1, from as i64 - 1) {
        Ok(head) => a.count_in(&head) as i64,
        Err(_) => 0,
    };
    let mut best = ratio(0, 1);
    for n in from..=to {
        count += a.contains(n as i64) as i64;
        best = best.max(ratio(count, n as i64));
    }
    Ok(best)
}

/// The first interval of length `k` contained in `A`, if any.
pub fn thick_up_to(a: &WindowSet, k: u64) -> Result<Option<Interval>> {
    check_length(a, k)?;
    Ok(a.runs()
        .into_iter()
        .find(|r| r.len() >= k)
        .map(|r| Interval::with_len(r.lo(), k).expect("inside run")))
}

/// The least `k` such that every length-`k` subinterval of `interval` meets `A`.
pub fn syndetic_bound(a: &WindowSet, interval: &Interval) -> Result<Option<u64>> {
    Ok(a.max_gap(interval)?.map(|g| g + 1))
}

/// First (leftmost) window `J` of length `m` with `syndetic_bound(A, J) <= k`.
pub fn pws_witness(a: &WindowSet, k: u64, m: u64) -> Result<Option<Interval>> {
    check_length(a, m)?;
    if k == 0 {
        return Ok(None);
    }
    let prefix = a.prefix_counts();
    let len = a.support_len();
    let (m, k) = (m as usize, k as usize);
    let lo = a.support().lo();
    let found = if m < k {
        // bound <= m < k as soon as the window is nonempty
        (0..=len - m).find(|&s| prefix[s + m] > prefix[s])
    } else {
        // J is good iff none of its length-k subwindows is empty
        let empty_k: Vec<u32> = std::iter::once(0)
            .chain((0..=len - k).scan(0u32, |acc, u| {
                *acc += (prefix[u + k] == prefix[u]) as u32;
                Some(*acc)
            }))
            .collect();
        (0..=len - m).find(|&s| empty_k[s + m - k + 1] == empty_k[s])
    };
    Ok(found.map(|s| Interval::with_len(lo + s as i64, m as u64).expect("inside support")))
}

/// Structural summary of a set over a probed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// Longest run of members (the largest `k` with a full length-`k` interval).
    pub thick_up_to: Option<Interval>,
    pub syndetic_gap: Option<u64>,
    pub pws_witness: Option<(u64, Interval)>,
}

pub fn structure_report(a: &WindowSet, probe: &Interval, k: u64, m: u64) -> Result<StructureReport> {
    let longest = a.restrict(probe)?.runs().into_iter().max_by(|x, y| {
        x.len().cmp(&y.len()).then(y.lo().cmp(&x.lo()))
    });
    let syndetic_gap = a.max_gap(probe)?;
    let pws = pws_witness(&a.restrict(probe)?, k, m)?.map(|j| (k, j));
    let report = StructureReport {
        thick_up_to: longest,
        syndetic_gap,
        pws_witness: pws,
    };
    debug_assert!(report.verify(a));
    Ok(report)
}

impl StructureReport {
    /// Re-checks every witness by direct membership.
    pub fn verify(&self, a: &WindowSet) -> bool {
        let run_ok = self
            .thick_up_to
            .is_none_or(|r| r.iter().all(|x| a.contains(x)));
        let pws_ok = self.pws_witness.is_none_or(|(k, j)| {
            a.max_gap(&j).ok().flatten().is_some_and(|g| g < k)
        });
        run_ok && pws_ok
    }
}
