use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crdu::capacity::{construct_counterexample, product_space, Capacity};
use crdu::choquet::{choquet, choquet_riemann_oracle, comonotone_additivity_check};
use crdu::cli::file::{parse_model, to_json, LoadedModel};
use crdu::core_polytope::{
    core_contains, core_vertices, is_balanced, is_exact, marginal_vector, robust_value,
};
use crdu::distortion::{DistortionFunction, UtilityFunction};
use crdu::models::{family_representation_value, subjective_mixture, ModelSpec};
use crdu::sampling::*;
use crdu::space::{
    as_dominates, comonotonic, fsd_geq, ssd_geq, Act, Event, RiskPartition, StateSpace,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn space(seed: u64, lo: usize, hi: usize) -> StateSpace {
    StateSpace::indexed(rng(seed ^ 0x5eed).gen_range(lo..=hi)).unwrap()
}

fn payoffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dominance_chain(seed: u64, x in payoffs(5), bump in prop::collection::vec(0.0..2.0f64, 5)) {
        let s = StateSpace::indexed(5).unwrap();
        let mu = random_measure_with_nulls(&mut rng(seed), &s, 0.3).unwrap();
        let y = Act::new(&s, x.clone()).unwrap();
        let x = Act::new(&s, x.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
        prop_assert!(as_dominates(&x, &y, &mu, false).unwrap());
        prop_assert!(fsd_geq(&x, &y, &mu).unwrap());
        prop_assert!(ssd_geq(&x, &y, &mu).unwrap());
    }

    #[test]
    fn fsd_both_ways_means_equal_distribution(seed: u64) {
        let mut r = rng(seed);
        let s = StateSpace::indexed(4).unwrap();
        let mu = random_measure(&mut r, &s).unwrap();
        let x = random_act_in(&mut r, &s, -2.0, 2.0).unwrap();
        let y = random_act_in(&mut r, &s, -2.0, 2.0).unwrap();
        prop_assert!(fsd_geq(&x, &x, &mu).unwrap());
        let both = fsd_geq(&x, &y, &mu).unwrap() && fsd_geq(&y, &x, &mu).unwrap();
        // continuous draws: distinct payoffs, so equal distributions only for X = Y
        prop_assert_eq!(both, x.payoffs() == y.payoffs());
        if fsd_geq(&x, &y, &mu).unwrap() {
            prop_assert!(ssd_geq(&x, &y, &mu).unwrap());
        }
    }

    #[test]
    fn comonotonic_relation(x in payoffs(4), y in payoffs(4), c in -3.0..3.0f64) {
        let s = StateSpace::indexed(4).unwrap();
        let (x, y) = (Act::new(&s, x).unwrap(), Act::new(&s, y).unwrap());
        prop_assert!(comonotonic(&x, &x).unwrap());
        prop_assert_eq!(comonotonic(&x, &y).unwrap(), comonotonic(&y, &x).unwrap());
        prop_assert_eq!(comonotonic(&x, &y).unwrap(), comonotonic(&x.shift(c).unwrap(), &y).unwrap());
    }

    #[test]
    fn choquet_monotone_and_normalized(seed: u64, x in payoffs(6), bump in prop::collection::vec(0.0..1.0f64, 6)) {
        let mut r = rng(seed);
        let s = StateSpace::indexed(6).unwrap();
        let nu = random_capacity(&mut r, &s).unwrap();
        let y = Act::new(&s, x.clone()).unwrap();
        let x = Act::new(&s, x.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
        prop_assert!(choquet(&x, &nu).unwrap() >= choquet(&y, &nu).unwrap() - 1e-12);
        prop_assert!((choquet(&Act::constant(&s, 1.0).unwrap(), &nu).unwrap() - 1.0).abs() < 1e-15);
        for e in s.events() {
            prop_assert!((choquet(&Act::indicator(&s, e).unwrap(), &nu).unwrap() - nu.value(e)).abs() < 1e-12);
        }
    }

    #[test]
    fn choquet_translation_and_scaling(seed: u64, c in -4.0..4.0f64, k in 0.0..4.0f64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 6);
        let nu = random_capacity(&mut r, &s).unwrap();
        let x = random_act_in(&mut r, &s, -3.0, 3.0).unwrap();
        let v = choquet(&x, &nu).unwrap();
        prop_assert!((choquet(&x.shift(c).unwrap(), &nu).unwrap() - (v + c)).abs() < 1e-12);
        prop_assert!((choquet(&x.scale(k).unwrap(), &nu).unwrap() - k * v).abs() < 1e-11);
    }

    #[test]
    fn choquet_ties_are_irrelevant(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 2, 6);
        let nu = random_capacity(&mut r, &s).unwrap();
        let levels = [r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)];
        let x: Vec<f64> = (0..s.len()).map(|_| levels[r.gen_range(0..2)]).collect();
        let v = choquet(&Act::new(&s, x.clone()).unwrap(), &nu).unwrap();
        // relabel states by reversing their order
        let n = s.len();
        let rev = |e: Event| Event::from_indices(e.members().map(|i| n - 1 - i));
        let nu_rev = Capacity::from_fn(&s, |e| nu.value(rev(e))).unwrap();
        let x_rev: Vec<f64> = x.iter().rev().copied().collect();
        prop_assert!((choquet(&Act::new(&s, x_rev).unwrap(), &nu_rev).unwrap() - v).abs() < 1e-12);
    }

    #[test]
    fn choquet_matches_riemann_oracle(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 5);
        let nu = random_capacity(&mut r, &s).unwrap();
        let x = random_act_in(&mut r, &s, -3.0, 3.0).unwrap();
        let fast = choquet(&x, &nu).unwrap();
        let slow = choquet_riemann_oracle(&x, &nu, 100_000).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-4, "{} vs {}", fast, slow);
    }

    #[test]
    fn choquet_of_measure_is_expectation(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 6);
        let mu = random_measure_with_nulls(&mut r, &s, 0.2).unwrap();
        let x = random_act_in(&mut r, &s, -3.0, 3.0).unwrap();
        let e: f64 = x.payoffs().iter().zip(mu.weights()).map(|(a, w)| a * w).sum();
        prop_assert!((choquet(&x, &Capacity::from_measure(&mu)).unwrap() - e).abs() < 1e-12);
    }

    #[test]
    fn comonotone_additivity_and_superadditivity(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 2, 6);
        let nu = random_capacity(&mut r, &s).unwrap();
        let acts = random_comonotone_acts(&mut r, &s, 2, -3.0, 3.0).unwrap();
        prop_assert!(comonotone_additivity_check(&acts[0], &acts[1], &nu).unwrap());
        let sup = random_supermodular_capacity(&mut r, &s).unwrap();
        let x = random_act_in(&mut r, &s, -3.0, 3.0).unwrap();
        let y = random_act_in(&mut r, &s, -3.0, 3.0).unwrap();
        let lhs = choquet(&x.add(&y).unwrap(), &sup).unwrap();
        prop_assert!(lhs >= choquet(&x, &sup).unwrap() + choquet(&y, &sup).unwrap() - 1e-12);
    }

    #[test]
    fn composition_is_associative(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 5);
        let nu = random_capacity(&mut r, &s).unwrap();
        let (g1, g2) = (random_distortion(&mut r).unwrap(), random_distortion(&mut r).unwrap());
        let nested = nu.compose(&g2).compose(&g1);
        for e in s.events() {
            let direct = g1.eval(g2.eval(nu.value(e)).unwrap()).unwrap();
            prop_assert!((nested.value(e) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn convex_distortion_keeps_supermodularity(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 2, 6);
        let phi = random_supermodular_capacity(&mut r, &s).unwrap();
        prop_assert!(phi.compose(&random_convex_distortion(&mut r).unwrap()).is_supermodular().unwrap().holds());
        let psi = random_submodular_capacity(&mut r, &s).unwrap();
        prop_assert!(psi.compose(&random_concave_distortion(&mut r).unwrap()).is_submodular().unwrap().holds());
    }

    #[test]
    fn supermodular_capacities_are_exact(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 5);
        let nu = random_supermodular_capacity(&mut r, &s).unwrap();
        prop_assert!(is_balanced(&nu).unwrap());
        prop_assert!(is_exact(&nu).unwrap());
        let mut perm: Vec<usize> = (0..s.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, r.gen_range(0..=i));
        }
        prop_assert!(core_contains(&nu, &marginal_vector(&nu, &perm).unwrap()).unwrap());
    }

    #[test]
    fn core_vertices_lie_in_core(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 5);
        let nu = if r.gen_bool(0.5) {
            random_capacity(&mut r, &s).unwrap()
        } else {
            random_submodular_capacity(&mut r, &s).unwrap().dual()
        };
        for v in core_vertices(&nu).unwrap() {
            prop_assert!(core_contains(&nu, &v).unwrap());
        }
    }

    #[test]
    fn robust_value_equals_choquet_when_supermodular(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 1, 5);
        let nu = random_supermodular_capacity(&mut r, &s).unwrap();
        let u = random_utility(&mut r).unwrap();
        let g = random_distortion(&mut r).unwrap();
        let (lo, hi) = payoff_range(&u);
        let x = random_act_in(&mut r, &s, lo, hi).unwrap();
        let rv = robust_value(&u, &g, &nu, &x).unwrap();
        let c = choquet(&x.try_map(|v| u.eval(v)).unwrap(), &nu.compose(&g)).unwrap();
        prop_assert!(rv.exact);
        prop_assert!((rv.value - c).abs() <= 1e-7);
    }

    #[test]
    fn meu_over_core_matches_ceu(seed: u64) {
        let mut r = rng(seed);
        let s = space(seed, 2, 5);
        let nu = random_supermodular_capacity(&mut r, &s).unwrap();
        let u = random_utility(&mut r).unwrap();
        let p = random_measure(&mut r, &s).unwrap();
        let ceu = ModelSpec::ceu(u.clone(), nu.clone(), RiskPartition::trivial(&s), p).unwrap();
        let meu = ModelSpec::meu(u.clone(), core_vertices(&nu).unwrap(), None).unwrap();
        let (lo, hi) = payoff_range(&u);
        let x = random_act_in(&mut r, &s, lo, hi).unwrap();
        prop_assert!((meu.value(&x).unwrap() - ceu.value(&x).unwrap()).abs() <= 1e-7);
    }

    #[test]
    fn matching_probability_round_trip(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let m = random_crdu_model(&mut r, n, ModelOptions::default()).unwrap();
        let cm = m.choquet_model().unwrap();
        for e in m.space().events() {
            prop_assert!((m.matching_probability(e).unwrap() - cm.capacity().value(e)).abs() <= 1e-9);
        }
    }

    #[test]
    fn risky_acts_reduce_to_rdu(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let m = random_crdu_model(&mut r, n, ModelOptions::default()).unwrap();
        let cm = m.choquet_model().unwrap();
        let rdu = ModelSpec::rdu(cm.utility().clone(), cm.distortion().clone(), cm.reference().clone()).unwrap();
        let (lo, hi) = payoff_range(cm.utility());
        let x = random_measurable_act(&mut r, cm.partition(), lo, hi).unwrap();
        let (a, b) = (m.value(&x).unwrap(), rdu.value(&x).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn certainty_equivalent_is_indifferent(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let m = random_crdu_model(&mut r, n, ModelOptions::default()).unwrap();
        let (lo, hi) = payoff_range(m.utility().unwrap());
        let x = random_act_in(&mut r, m.space(), lo, hi).unwrap();
        let ce = m.certainty_equivalent(&x).unwrap();
        let c = Act::constant(m.space(), ce).unwrap();
        prop_assert!((m.value(&c).unwrap() - m.value(&x).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn family_value_matches(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=5);
        let opts = ModelOptions { p_consistent: true, ..Default::default() };
        let m = random_crdu_model(&mut r, n, opts).unwrap();
        let (lo, hi) = payoff_range(m.utility().unwrap());
        let x = random_act_in(&mut r, m.space(), lo, hi).unwrap();
        prop_assert!((family_representation_value(&m, &x).unwrap() - m.value(&x).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn linear_utility_mixture_is_the_mean(seed: u64, a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=5);
        let opts = ModelOptions { with_half: true, ..Default::default() };
        let m = random_crdu_model(&mut r, n, opts).unwrap();
        let cm = m.choquet_model().unwrap();
        let lin = ModelSpec::crdu(
            UtilityFunction::identity(),
            cm.distortion().clone(),
            cm.capacity().clone(),
            cm.partition().clone(),
            cm.reference().clone(),
        ).unwrap();
        let (x, y) = (a.max(b), a.min(b));
        prop_assert_eq!(subjective_mixture(&lin, x, y).unwrap(), 0.5 * (x + y));
    }

    #[test]
    fn distortion_inverse_round_trip(seed: u64, x in 0.0..=1.0f64) {
        let g = random_distortion(&mut rng(seed)).unwrap();
        prop_assert!((g.inverse(g.eval(x).unwrap()).unwrap() - x).abs() <= 1e-10);
    }

    #[test]
    fn power_distortions_invert(gamma in 0.1..5.0f64, x in 0.0..=1.0f64) {
        let g = DistortionFunction::power(gamma).unwrap();
        let h = DistortionFunction::power(1.0 / gamma).unwrap();
        prop_assert!((h.eval(g.eval(x).unwrap()).unwrap() - x).abs() <= 1e-12);
    }

    #[test]
    fn utility_inverse_round_trip(seed: u64, t in 0.0..=1.0f64) {
        let u = random_utility(&mut rng(seed)).unwrap();
        let (lo, hi) = payoff_range(&u);
        let x = lo + t * (hi - lo);
        let back = u.inverse(u.eval(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * (1.0 + x.abs()), "{} vs {}", back, x);
    }

    #[test]
    fn counterexample_guarantees(seed: u64) {
        let mut r = rng(seed);
        let (gb, hb) = [(2, 2), (2, 3), (3, 2), (3, 3)][r.gen_range(0..4)];
        let s = product_space(gb, hb).unwrap();
        let pg = random_measure(&mut r, &StateSpace::indexed(gb).unwrap()).unwrap();
        let ph = random_measure(&mut r, &StateSpace::indexed(hb).unwrap()).unwrap();
        let w = (0..gb).flat_map(|i| (0..hb).map(move |j| (i, j))).map(|(i, j)| pg.weight(i) * ph.weight(j)).collect();
        let p = crdu::space::ProbabilityMeasure::new(&s, w).unwrap();
        let h = random_strictly_concave_distortion(&mut r).unwrap();
        let cx = construct_counterexample(gb, hb, &p, &h).unwrap();
        prop_assert!(cx.capacity.is_risk_conforming(&cx.g_partition, &p).unwrap().holds());
        prop_assert!(cx.capacity.compose(&cx.g).is_supermodular().unwrap().holds());
        for e in s.events() {
            let (v, pa) = (cx.capacity.value(e), p.prob(e));
            prop_assert!(h.eval(pa).unwrap() + 1e-12 >= v && v + 1e-12 >= pa);
        }
        for e in cx.h_partition.algebra() {
            prop_assert!((cx.capacity.value(e) - h.eval(p.prob(e)).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn model_file_round_trip_is_exact(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let m = random_crdu_model(&mut r, n, ModelOptions::default()).unwrap();
        let (lo, hi) = payoff_range(m.utility().unwrap());
        let x = random_act_in(&mut r, m.space(), lo, hi).unwrap();
        let mut acts = indexmap::IndexMap::new();
        acts.insert("x".to_string(), x.clone());
        let loaded = LoadedModel { model: m, acts, partitions: Default::default() };
        let text = to_json(&loaded);
        let back = parse_model(&text, "rt.json").unwrap();
        prop_assert_eq!(to_json(&back), text);
        prop_assert_eq!(back.model.value(&x).unwrap(), loaded.model.value(&x).unwrap());
        let (c0, c1) = (loaded.model.choquet_model().unwrap(), back.model.choquet_model().unwrap());
        prop_assert_eq!(c0.capacity().table(), c1.capacity().table());
    }

    #[test]
    fn event_labels_parse_back(seed: u64) {
        let s = space(seed, 1, 8);
        let mask = rng(seed).gen_range(0..(1u32 << s.len()));
        let e = Event(mask);
        prop_assert_eq!(s.parse_event(&s.event_label(e)).unwrap(), e);
    }
}
