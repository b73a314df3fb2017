use syndet::analysis::{banach_estimate, syndetic_bound, window_profile};
use syndet::jin::{
    build_stage, default_n_list, find_shift, jin_pipeline, prop2_witness, verify_witness,
};
use syndet::rational::ratio;
use syndet::{parse_spec, Interval, WindowSet};

fn support() -> Interval {
    Interval::new(-10_000, 10_000).unwrap()
}

fn make(spec: &str, support: Interval) -> WindowSet {
    parse_spec(spec).unwrap().materialize(support).unwrap()
}

#[test]
fn bernoulli_seed_42_vectors() {
    // reference values from an independent implementation of the hash
    let half = make("bernoulli:1/2:42", Interval::new(-20, 40).unwrap());
    assert_eq!(
        half.to_vec(),
        vec![
            -20, -19, -18, -17, -16, -14, -13, -6, -4, -2, 1, 2, 7, 11, 12, 13, 16, 17, 20, 25,
            27, 29, 30, 31, 32, 34, 35, 36, 40
        ]
    );
    let third = make("bernoulli:1/3:42", Interval::new(-20, 40).unwrap());
    assert_eq!(
        third.to_vec(),
        vec![-10, -9, -6, -3, 3, 4, 5, 6, 9, 11, 12, 17, 20, 22, 24, 27, 28, 29, 33, 38]
    );
    assert_eq!(make("bernoulli:1/3:42", Interval::new(1, 10_000).unwrap()).cardinality(), 3315);
}

#[test]
fn periodic_pipeline_needs_four_shifts() {
    let a = make("ap:4:0", support());
    let n_list = default_n_list(&a, &a, 50);
    let run = jin_pipeline(&a, &a, 50, &n_list, ratio(1, 4), ratio(1, 4), ratio(1, 4)).unwrap();
    let w = &run.witness;
    assert!(w.verified);
    assert_eq!(w.bound, 16);
    assert_eq!(w.shifts, vec![0, 1, 2, 3]);
    assert!(verify_witness(&a, &a, &w.shifts, w.t, w.m).unwrap());
    // no proper subset of the residues mod 4 covers 50 consecutive integers
    for drop in 0..4 {
        let fewer: Vec<i64> = (0..4).filter(|&f| f != drop).collect();
        assert!(!verify_witness(&a, &a, &fewer, w.t, 50).unwrap());
    }
}

#[test]
fn mixed_moduli_difference_set_is_everything() {
    let a = make("ap:2:0", support());
    let b = make("ap:3:0", support());
    let d = a.difference_set(&b).unwrap();
    assert!((-15_000..=15_000).all(|x| d.contains(x)));
    let n_list = default_n_list(&a, &b, 30);
    let run = jin_pipeline(&a, &b, 30, &n_list, ratio(1, 4), ratio(1, 2), ratio(1, 3)).unwrap();
    assert!(run.witness.verified);
    assert_eq!(run.witness.bound, 6);
    assert!(run.witness.shifts.len() <= 6);
    assert!(verify_witness(&a, &b, &[0], run.witness.t, 30).unwrap());
}

#[test]
fn stages_recompute_and_meet_shift_bound() {
    let a = make("ap:4:0", support());
    for n in [20, 57, 101, 141] {
        let s = build_stage(&a, &a, n).unwrap();
        assert_eq!(s.recompute_e(&a, &a).unwrap(), s.e);
        assert!(s.e_density() >= s.lower_bound());
        assert!(s.shift.meets_guarantee(n));
    }
    let s = build_stage(&a, &a, 20).unwrap();
    assert!(s.e_density() >= ratio(1, 20));
}

#[test]
fn shift_finder_on_generated_sets() {
    let c = make("beatty:7/3", Interval::new(1, 900).unwrap());
    let d = make("ap:5:1", Interval::new(1, 60).unwrap());
    let r = find_shift(&c, 900, &d, 60).unwrap();
    let brute = (1..=900)
        .map(|z| (d.iter().filter(|&x| c.contains(x + z)).count(), -z))
        .max()
        .unwrap();
    assert_eq!((r.overlap, -r.z), brute);
    assert!(r.meets_guarantee(60));
}

#[test]
fn dense_pair_witness_on_powers_of_two_complement() {
    let s = Interval::new(1, 200_000).unwrap();
    let powers: Vec<String> = (0..18).map(|i| (1i64 << i).to_string()).collect();
    let a = make(&format!("compl:list:{}", powers.join(",")), s);
    let b = make("ap:2:0", s);
    let w = prop2_witness(&a, &b, 10, ratio(1, 2)).unwrap().unwrap();
    assert!((1..=10).all(|i| a.difference_contains(&b, w.t + i)));
    assert!(w.count_a as i64 * 2 - w.n as i64 > 20);
    assert!(w.count_b * 2 >= w.n);

    let evens = make("ap:2:0", Interval::new(1, 3_000).unwrap());
    assert!(prop2_witness(&evens, &evens, 2, ratio(1, 2)).unwrap().is_none());
}

#[test]
fn difference_sets_of_progressions_are_syndetic() {
    for (spec, expected) in [("ap:3:0", 3), ("ap:5:2", 5), ("beatty:5/2", 2)] {
        let a = make(spec, Interval::new(-3_000, 3_000).unwrap());
        let d = a.difference_set(&a).unwrap();
        let central = Interval::new(-3_000, 3_000).unwrap();
        assert_eq!(syndetic_bound(&d, &central).unwrap(), Some(expected), "{spec}");
        let p = window_profile(&a, &(1..=60).collect::<Vec<_>>()).unwrap();
        let bd = banach_estimate(&p).unwrap();
        assert!(expected as i64 <= (bd.recip()).floor().to_integer(), "{spec}");
    }
}
