use super::cover::{greedy_cover, GreedyState};
use super::stage::{build_stage_with, PipelineStage};
use crate::error::{Error, Result};
use crate::rational::{floor_reciprocal, Rational};
use crate::set::{Interval, WindowSet};
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Stage cap for the automatic index list.
pub const MAX_AUTO_STAGES: usize = 64;

/// `[t+1, t+m] ⊆ (A - B) + F` together with the densities behind the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JinWitness {
    pub shifts: Vec<i64>,
    pub t: i64,
    pub m: u64,
    /// Stage index the witness came from.
    pub n: u64,
    pub alpha: Rational,
    pub beta: Rational,
    /// `floor(1 / (alpha·beta))`.
    pub bound: u64,
    /// `|F| > bound`; possible at finite scale when the observed stage
    /// densities fall short of `alpha·beta`.
    pub bound_exceeded: bool,
    pub verified: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub witness: JinWitness,
    pub n_list: Vec<u64>,
    pub stages: Vec<PipelineStage>,
    /// Requested indices whose windows did not fit the supports.
    pub skipped: Vec<u64>,
    pub cover: GreedyState,
}

/// All `n` with `n > 2m`, `n² <= |support(A)|` and `n <= |support(B)|`,
/// thinned to at most [`MAX_AUTO_STAGES`] evenly spaced values.
pub fn default_n_list(a: &WindowSet, b: &WindowSet, m: u64) -> Vec<u64> {
    let a_len = a.support().len();
    let b_len = b.support().len();
    let all: Vec<u64> = (2 * m + 1..)
        .take_while(|&n| n.checked_mul(n).is_some_and(|nn| nn <= a_len))
        .filter(|&n| n <= b_len)
        .collect();
    if all.len() <= MAX_AUTO_STAGES {
        return all;
    }
    let last = all.len() - 1;
    let picks = MAX_AUTO_STAGES - 1;
    (0..=picks)
        .map(|i| all[(i * last + picks / 2) / picks])
        .collect()
}

/// `[t+1, t+m] ⊆ (A - B) + F`, rechecked from scratch with the set algebra.
pub fn verify_witness(a: &WindowSet, b: &WindowSet, shifts: &[i64], t: i64, m: u64) -> Result<bool> {
    if shifts.is_empty() {
        return Ok(false);
    }
    let cover = a.difference_set(b)?.add_finite(shifts)?;
    Ok(covers(&cover, t, m))
}

fn covers(cover: &WindowSet, t: i64, m: u64) -> bool {
    if m == 0 {
        return true;
    }
    match Interval::with_len(t.saturating_add(1), m) {
        Ok(window) => cover.count_in(&window) as u64 == m,
        Err(_) => false,
    }
}

/// Runs the full construction: stages over `n_list`, the greedy shift set,
/// and a direct check of `[t_n+1, t_n+m] ⊆ (A - B) + F` on the survivors in
/// increasing `n`. The first verified survivor is returned.
pub fn jin_pipeline(
    a: &WindowSet,
    b: &WindowSet,
    m: u64,
    n_list: &[u64],
    tau: Rational,
    alpha: Rational,
    beta: Rational,
) -> Result<PipelineRun> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if v <= Rational::zero() || v > Rational::one() {
            return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1]")));
        }
    }
    if let Some(&n) = n_list.iter().find(|&&n| n <= m) {
        return Err(Error::InvalidArgument(format!("stage n = {n} must exceed m = {m}")));
    }
    let mut n_list = n_list.to_vec();
    n_list.sort_unstable();
    n_list.dedup();

    let (pa, pb) = (a.prefix_counts(), b.prefix_counts());
    let built: Vec<(u64, Result<PipelineStage>)> = n_list
        .par_iter()
        .map(|&n| (n, build_stage_with(a, &pa, b, &pb, n)))
        .collect();
    let mut stages = Vec::new();
    let mut skipped = Vec::new();
    for (n, r) in built {
        match r {
            Ok(s) => stages.push(s),
            Err(Error::StageSkipped { .. }) => skipped.push(n),
            Err(e) => return Err(e),
        }
    }
    if stages.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no usable stage among {} requested",
            n_list.len()
        )));
    }
    for s in &stages {
        if !s.shift.meets_guarantee(s.n) || s.e_density() < s.lower_bound() {
            return Err(Error::InvariantViolated(format!("shift guarantee fails at n = {}", s.n)));
        }
    }

    let cover = greedy_cover(&stages, m, tau)?;
    let bound = floor_reciprocal(&(alpha * beta)).expect("alpha, beta > 0");
    let union = a.difference_set(b)?.add_finite(&cover.shifts)?;
    let mut tried = 0;
    for &n in &cover.survivors {
        let stage = stages.iter().find(|s| s.n == n).expect("survivor is a stage");
        tried += 1;
        if covers(&union, stage.t(), m) {
            let witness = JinWitness {
                shifts: cover.shifts.clone(),
                t: stage.t(),
                m,
                n,
                alpha,
                beta,
                bound,
                bound_exceeded: cover.shifts.len() as u64 > bound,
                verified: true,
            };
            return Ok(PipelineRun {
                witness,
                n_list,
                stages,
                skipped,
                cover,
            });
        }
    }
    Err(Error::NoWitness {
        tried,
        trace: Box::new(cover.trace()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn auto_list_is_capped_and_spread() {
        let a = WindowSet::full(iv(-10_000, 10_000)).unwrap();
        let l = default_n_list(&a, &a, 50);
        assert_eq!(l, (101..=141).collect::<Vec<_>>());
        let l = default_n_list(&a, &a, 10);
        assert_eq!(l.len(), MAX_AUTO_STAGES);
        assert_eq!((l[0], *l.last().unwrap()), (21, 141));
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert!(default_n_list(&a, &a, 80).is_empty());
    }

    #[test]
    fn full_sets_need_one_shift() {
        let a = WindowSet::full(iv(0, 2_000)).unwrap();
        let run = jin_pipeline(&a, &a, 10, &[21, 30, 44], ratio(1, 4), ratio(1, 1), ratio(1, 1)).unwrap();
        assert_eq!(run.witness.shifts, vec![0]);
        assert_eq!(run.witness.bound, 1);
        assert!(run.witness.verified);
        assert!(verify_witness(&a, &a, &run.witness.shifts, run.witness.t, 10).unwrap());
    }

    #[test]
    fn multiples_of_four() {
        let a = WindowSet::from_predicate(iv(-3_000, 3_000), |x| x % 4 == 0).unwrap();
        let run = jin_pipeline(&a, &a, 20, &[41, 50, 60, 77], ratio(1, 4), ratio(1, 4), ratio(1, 4)).unwrap();
        let w = &run.witness;
        assert_eq!(w.shifts, vec![0, 1, 2, 3]);
        assert_eq!(w.bound, 16);
        assert!(!w.bound_exceeded);
        assert!(verify_witness(&a, &a, &w.shifts, w.t, w.m).unwrap());
        assert!(!verify_witness(&a, &a, &[0], w.t, w.m).unwrap());
        // supersets of F keep verifying
        assert!(verify_witness(&a, &a, &[0, 1, 2, 3, 9], w.t, w.m).unwrap());
    }

    #[test]
    fn verify_examples() {
        let a = WindowSet::from_predicate(iv(-500, 500), |x| x % 4 == 0).unwrap();
        assert!(!verify_witness(&a, &a, &[0], 0, 5).unwrap());
        assert!(verify_witness(&a, &a, &[0, 1, 2, 3], 0, 50).unwrap());
        assert!(!verify_witness(&a, &a, &[], 0, 5).unwrap());
        let none = WindowSet::empty(iv(0, 3)).unwrap();
        assert!(!verify_witness(&a, &none, &[0], 0, 5).unwrap());
    }

    #[test]
    fn oversized_stages_are_skipped() {
        let a = WindowSet::full(iv(0, 999)).unwrap();
        let run = jin_pipeline(&a, &a, 5, &[10, 31, 32, 40], ratio(1, 4), ratio(1, 1), ratio(1, 1)).unwrap();
        assert_eq!(run.skipped, vec![32, 40]);
        assert_eq!(run.stages.len(), 2);
        assert!(jin_pipeline(&a, &a, 5, &[40], ratio(1, 4), ratio(1, 1), ratio(1, 1)).is_err());
        assert!(jin_pipeline(&a, &a, 5, &[5], ratio(1, 4), ratio(1, 1), ratio(1, 1)).is_err());
        assert!(jin_pipeline(&a, &a, 5, &[10], ratio(1, 4), ratio(0, 1), ratio(1, 1)).is_err());
    }
}
