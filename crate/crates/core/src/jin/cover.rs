use super::stage::PipelineStage;
use crate::error::{Error, Result};
use crate::rational::{floor_reciprocal, ratio, Rational};
use crate::set::{Interval, WindowSet};
use num_traits::{One, Zero};
use rayon::prelude::*;

/// One round of the greedy construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStep {
    /// Least `m'` whose prefix `[1, m']` is covered by fewer than `tau` of the survivors.
    pub counterexample: i64,
    /// Fraction of survivors with `[1, m']` covered.
    pub covered_fraction: Rational,
    /// Survivors with `[1, m' - 1]` covered.
    pub retained: Vec<u64>,
    /// Retained indices that also cover `m'`; dropped.
    pub discarded: Vec<u64>,
}

/// Everything the greedy recorded, also carried by failures.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverTrace {
    pub shifts: Vec<i64>,
    pub steps: Vec<CoverStep>,
    pub survivors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyState {
    /// `m_1 = 0 < m_2 < … < m_k`.
    pub shifts: Vec<i64>,
    /// Least `|E_n| / n` over the final survivors.
    pub gamma: Rational,
    pub survivors: Vec<u64>,
    /// Survivors with `[1, m] ⊆ (E_n - E_n) + F`; at least `tau` of them.
    pub satisfied: Vec<u64>,
    pub steps: Vec<CoverStep>,
    pub m: u64,
    pub tau: Rational,
    /// Pairwise-disjointness checks of `{E_n + m_j}` that were run.
    pub disjointness_checks: usize,
    /// `|F| <= floor(1/gamma) + 1`.
    pub within_bound: bool,
}

impl GreedyState {
    pub fn trace(&self) -> CoverTrace {
        CoverTrace {
            shifts: self.shifts.clone(),
            steps: self.steps.clone(),
            survivors: self.survivors.clone(),
        }
    }
}

/// [`greedy_cover_sets`] over the `E_n` of pipeline stages.
pub fn greedy_cover(stages: &[PipelineStage], m: u64, tau: Rational) -> Result<GreedyState> {
    let family: Vec<(u64, &WindowSet)> = stages.iter().map(|s| (s.n, &s.e)).collect();
    greedy_cover_sets(&family, m, tau)
}

struct Member<'a> {
    n: u64,
    e: &'a WindowSet,
    diff: WindowSet,
}

/// Greedy shift set for a family `E_n ⊆ [1, n]`.
///
/// Starting from `F = {0}`, repeatedly takes the least `m' <= m` such that
/// fewer than `tau` of the surviving indices have `[1, m'] ⊆ (E_n - E_n) + F`,
/// appends it to `F`, and keeps only the indices that cover `[1, m' - 1]` but
/// miss `m'`. For those the copies `E_n + m_j` are pairwise disjoint, which
/// is what bounds `|F|` by roughly `n / |E_n|`; both facts are checked on
/// every round.
pub fn greedy_cover_sets(family: &[(u64, &WindowSet)], m: u64, tau: Rational) -> Result<GreedyState> {
    if tau <= Rational::zero() || tau > Rational::one() {
        return Err(Error::InvalidArgument("tau must lie in (0, 1]".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut members = Vec::with_capacity(family.len());
    for &(n, e) in family {
        if n <= m {
            return Err(Error::InvalidArgument(format!("stage n = {n} must exceed m = {m}")));
        }
        if !seen.insert(n) {
            return Err(Error::InvalidArgument(format!("duplicate stage n = {n}")));
        }
        let range = Interval::with_len(1, n)?;
        if e.iter().any(|x| !range.contains(x)) {
            return Err(Error::InvalidArgument(format!("E_{n} is not inside [1, {n}]")));
        }
        members.push(Member { n, e, diff: e.difference_set(e)? });
    }
    if members.is_empty() {
        return Err(Error::InvalidArgument("no stages".into()));
    }

    let mut shifts = vec![0i64];
    let mut survivors: Vec<usize> = (0..members.len()).collect();
    let mut steps = Vec::new();
    let mut checks = 0usize;
    let ns = |idx: &[usize]| idx.iter().map(|&i| members[i].n).collect::<Vec<_>>();

    loop {
        checks += check_disjoint(&members, &survivors, &shifts)?;
        let covers: Vec<u64> = survivors
            .par_iter()
            .map(|&i| covered_prefix(&members[i].diff, &shifts, m))
            .collect::<Result<_>>()?;
        let total = survivors.len() as i64;
        let fraction = |len: u64| ratio(covers.iter().filter(|&&c| c >= len).count() as i64, total);
        let Some(next) = (1..=m).find(|&len| fraction(len) < tau) else {
            let satisfied = survivors
                .iter()
                .zip(&covers)
                .filter(|(_, &c)| c >= m)
                .map(|(&i, _)| members[i].n)
                .collect();
            return finish(&members, survivors, satisfied, shifts, steps, m, tau, checks);
        };
        let fail = |reason: String, shifts: &[i64], steps: &[CoverStep], survivors: &[usize]| {
            Error::CoverFailed {
                reason,
                trace: Box::new(CoverTrace {
                    shifts: shifts.to_vec(),
                    steps: steps.to_vec(),
                    survivors: ns(survivors),
                }),
            }
        };
        let next_shift = next as i64;
        if shifts.contains(&next_shift) {
            return Err(fail(
                format!("prefix [1, {next}] stays uncovered; empty E_n leave no progress"),
                &shifts,
                &steps,
                &survivors,
            ));
        }
        let mut retained = Vec::new();
        let mut discarded = Vec::new();
        let mut kept = Vec::new();
        for (&i, &c) in survivors.iter().zip(&covers) {
            if c + 1 >= next {
                retained.push(members[i].n);
                if c >= next {
                    discarded.push(members[i].n);
                } else {
                    kept.push(i);
                }
            }
        }
        steps.push(CoverStep {
            counterexample: next_shift,
            covered_fraction: fraction(next),
            retained,
            discarded,
        });
        shifts.push(next_shift);
        if kept.is_empty() {
            return Err(fail(
                format!("no stage survives the counterexample {next}; inputs too small for m = {m}"),
                &shifts,
                &steps,
                &survivors,
            ));
        }
        survivors = kept;
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    members: &[Member<'_>],
    survivors: Vec<usize>,
    satisfied: Vec<u64>,
    shifts: Vec<i64>,
    steps: Vec<CoverStep>,
    m: u64,
    tau: Rational,
    checks: usize,
) -> Result<GreedyState> {
    let k = shifts.len() as i64;
    let m_k = *shifts.last().expect("F starts with 0");
    for &i in &survivors {
        let Member { n, e, .. } = &members[i];
        // |E_N|/N <= 1/k + m_k/N
        let lhs = ratio(e.cardinality() as i64, *n as i64);
        let rhs = ratio(1, k) + ratio(m_k, *n as i64);
        if lhs > rhs {
            return Err(Error::InvariantViolated(format!(
                "counting bound fails at N = {n}: {lhs} > {rhs}"
            )));
        }
    }
    let gamma = survivors
        .iter()
        .map(|&i| ratio(members[i].e.cardinality() as i64, members[i].n as i64))
        .min()
        .unwrap_or_else(Rational::zero);
    let within_bound = floor_reciprocal(&gamma).is_some_and(|b| shifts.len() as u64 <= b + 1);
    Ok(GreedyState {
        shifts,
        gamma,
        survivors: survivors.iter().map(|&i| members[i].n).collect(),
        satisfied,
        steps,
        m,
        tau,
        disjointness_checks: checks,
        within_bound,
    })
}

/// Largest `L <= m` with `[1, L] ⊆ diff + shifts`.
fn covered_prefix(diff: &WindowSet, shifts: &[i64], m: u64) -> Result<u64> {
    let cover = diff.add_finite(shifts)?;
    Ok((1..=m as i64).take_while(|&x| cover.contains(x)).count() as u64)
}

fn check_disjoint(members: &[Member<'_>], survivors: &[usize], shifts: &[i64]) -> Result<usize> {
    let mut checks = 0;
    for &i in survivors {
        let e = members[i].e;
        for (a, &fa) in shifts.iter().enumerate() {
            for &fb in &shifts[a + 1..] {
                checks += 1;
                // (E + fa) ∩ (E + fb) has the size of E ∩ (E + fb - fa)
                if e.overlap_with_shift(e, fb - fa) != 0 {
                    return Err(Error::InvariantViolated(format!(
                        "E_{} + {fa} and E_{} + {fb} intersect",
                        members[i].n, members[i].n
                    )));
                }
            }
        }
    }
    Ok(checks)
}
