//! Property tests for the sequence, hull, convolution and knapsack
//! invariants.

use nearconvex::convex::convex_minplus;
use nearconvex::generate::{near_convex_seq, random_instance};
use nearconvex::hull::{eval_hull, lower_hull, sandwiches, slopes_strictly_increase, upper_hull_gap};
use nearconvex::knapsack::{solve_fast_with, solve_symmetric_with, SolveOptions};
use nearconvex::nearconvex::{maxplus_nearconcave, minplus_nearconvex, Convolver};
use nearconvex::oracles::brute_knapsack;
use nearconvex::rational::Rational;
use nearconvex::seq::{naive_maxplus, naive_minplus, negate, pad_to_common_pow2, IntSeq};
use nearconvex::sumset::{banded_sumset_min, SumsetKernel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seq(max_len: usize, range: i64) -> impl Strategy<Value = IntSeq> {
    (0usize..20, prop::collection::vec(-range..=range, 1..=max_len))
        .prop_map(|(offset, v)| IntSeq::new(offset, v))
}

fn monotone(max_len: usize) -> impl Strategy<Value = IntSeq> {
    prop::collection::vec(0i64..50, 1..=max_len).prop_map(|steps| {
        let mut acc = 0;
        IntSeq::from_values(steps.into_iter().map(|d| { acc += d; acc }).collect())
    })
}

/// Generated near-convex sequence parameters: (seed, len, delta, max slope).
fn near_convex_params() -> impl Strategy<Value = (u64, usize, i64, i64)> {
    (any::<u64>(), 1usize..300, 0i64..80, 0i64..3000)
}

fn gen_near_convex((seed, len, delta, slope): (u64, usize, i64, i64)) -> IntSeq {
    near_convex_seq(&mut ChaCha8Rng::seed_from_u64(seed), len, delta, slope).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn negation_is_an_involution(s in seq(64, 1 << 30)) {
        prop_assert_eq!(negate(&negate(&s)), s);
    }

    #[test]
    fn maxplus_is_negated_minplus(f in seq(40, 1000), g in seq(40, 1000)) {
        prop_assert_eq!(naive_maxplus(&f, &g), negate(&naive_minplus(&negate(&f), &negate(&g))));
    }

    #[test]
    fn maxplus_of_monotone_is_monotone(f in monotone(40), g in monotone(40)) {
        let h = naive_maxplus(&f, &g);
        prop_assert!(h.values().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(maxplus_nearconcave(&f, &g).unwrap(), h);
    }

    #[test]
    fn padding_preserves_convolution_and_delta(f in seq(50, 10_000), g in seq(50, 10_000)) {
        let (f0, g0) = (f.rebased(), g.rebased());
        let (pf, pg, info) = pad_to_common_pow2(&f0, &g0).unwrap();
        prop_assert!(pf.len().is_power_of_two() && pf.len() == pg.len());
        let padded = naive_minplus(&pf, &pg);
        let direct = naive_minplus(&f0, &g0);
        prop_assert_eq!(padded.slice(info.result_range()), direct);
        prop_assert_eq!(lower_hull(&pf).delta(), lower_hull(&f0).delta());
        prop_assert_eq!(lower_hull(&pg).delta(), lower_hull(&g0).delta());
    }

    #[test]
    fn hull_is_convex_sandwich_and_maximal(f in seq(80, 100_000)) {
        let h = lower_hull(&f);
        prop_assert!(slopes_strictly_increase(&h));
        prop_assert!(sandwiches(&h, &f));
        for &(i, v) in h.breakpoints() {
            prop_assert_eq!(f.at(i), v);
        }
        // Dropping an interior breakpoint leaves a chord strictly above it.
        for w in h.breakpoints().windows(3) {
            let ((x0, y0), (x1, y1), (x2, y2)) = (w[0], w[1], w[2]);
            let chord = Rational::new(
                y0 as i128 * (x2 - x1) as i128 + y2 as i128 * (x1 - x0) as i128,
                (x2 - x0) as i128,
            );
            prop_assert!(chord > Rational::from_int(y1));
        }
        for i in f.domain().lo..=f.domain().hi {
            prop_assert!(eval_hull(&h, i).unwrap() <= Rational::from_int(f.at(i)));
        }
    }

    #[test]
    fn convex_convolution_is_exact_and_monotone(
        a in (any::<u64>(), 1usize..200, 0i64..5000),
        b in (any::<u64>(), 1usize..200, 0i64..5000),
    ) {
        let f = gen_near_convex((a.0, a.1, 0, a.2));
        let g = gen_near_convex((b.0, b.1, 0, b.2));
        let c = convex_minplus(&lower_hull(&f), &lower_hull(&g));
        let naive = naive_minplus(&f, &g);
        for (r, &v) in c.values().iter().zip(naive.values()) {
            prop_assert_eq!(*r, Rational::from_int(v));
        }
        let w = c.path().witnesses();
        prop_assert!(w.windows(2).all(|p| p[1] == p[0] || p[1] == p[0] + 1));
        let vals = c.values();
        for k in 1..vals.len().saturating_sub(1) {
            let second = vals[k + 1].checked_add(&vals[k - 1]).unwrap().checked_add(&vals[k].scale(-2)).unwrap();
            prop_assert!(second >= Rational::ZERO);
        }
    }

    #[test]
    fn nearconvex_convolution_is_exact(a in near_convex_params(), b in near_convex_params()) {
        let f = gen_near_convex(a);
        let g = gen_near_convex(b);
        prop_assert_eq!(minplus_nearconvex(&f, &g).unwrap(), naive_minplus(&f, &g));
    }

    #[test]
    fn arbitrary_convolution_is_exact(f in seq(60, 1 << 20), g in seq(60, 1 << 20)) {
        prop_assert_eq!(minplus_nearconvex(&f, &g).unwrap(), naive_minplus(&f, &g));
        prop_assert_eq!(maxplus_nearconcave(&f, &g).unwrap(), naive_maxplus(&f, &g));
    }

    #[test]
    fn maxplus_keeps_concavity_gap(a in near_convex_params(), b in near_convex_params()) {
        let f = negate(&gen_near_convex(a));
        let g = negate(&gen_near_convex(b));
        let h = maxplus_nearconcave(&f, &g).unwrap();
        prop_assert!(upper_hull_gap(&h) <= upper_hull_gap(&f).max(upper_hull_gap(&g)));
    }

    #[test]
    fn sumset_boxes_are_exact_and_narrow(a in near_convex_params(), b in near_convex_params()) {
        let f = gen_near_convex(a);
        let g = gen_near_convex(b);
        let (_, trace) = Convolver::default().traced(200).minplus_traced(&f, &g).unwrap();
        for hb in trace.unwrap().harvested {
            let d = hb.delta.ceil() as i64;
            for kernel in [SumsetKernel::Transform, SumsetKernel::Direct] {
                let out = banded_sumset_min(&hb.f, &hb.g, &hb.band_f, &hb.band_g, kernel).unwrap();
                prop_assert_eq!(&out.seq, &naive_minplus(&hb.f, &hb.g));
                prop_assert!(out.window <= 4 * d + 9, "window {} for delta {}", out.window, d);
                prop_assert!(out.stride > out.window && out.stride <= 2 * out.window + 1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn per_diagonal_counts_and_work_bound(a in near_convex_params(), b in near_convex_params()) {
        let f = gen_near_convex(a);
        let g = gen_near_convex(b);
        let (_, trace) = Convolver::default().traced(0).minplus_traced(&f, &g).unwrap();
        let t = trace.unwrap();
        for counts in t.per_diagonal.values() {
            prop_assert!(counts[2] <= 2 && counts[3] <= 2);
        }
        let n = t.padded_len as f64;
        let delta = t.delta.unwrap().to_f64();
        let bound = 40.0 * delta * n * (n.log2() + 1.0);
        prop_assert!((t.sumset_bound_work as f64) <= bound, "work {} > {}", t.sumset_bound_work, bound);
    }

    #[test]
    fn knapsack_solvers_are_sound(seed in any::<u64>(), n in 1usize..20, pmax in 1u64..30, wmax in 1u64..30) {
        let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), n, pmax, wmax, None).unwrap();
        let opt = brute_knapsack(&inst).unwrap().value;
        let opts = SolveOptions { threads: None, instrument: true };
        for report in [solve_fast_with(&inst, seed, &opts).unwrap(), solve_symmetric_with(&inst, seed, &opts).unwrap()] {
            prop_assert!(report.solution.is_feasible_for(&inst));
            prop_assert!(report.solution.value <= opt);
        }
        let fast = solve_fast_with(&inst, seed, &opts).unwrap();
        for s in &fast.slices {
            prop_assert!(s.seq.values().windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
