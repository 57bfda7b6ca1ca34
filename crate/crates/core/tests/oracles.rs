//! Independent oracles: brute-force vertex enumeration and hand-derived values.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crdu::capacity::{construct_counterexample, product_space, Capacity};
use crdu::choquet::{choquet, choquet_riemann_oracle};
use crdu::core_polytope::{
    core_vertices, exactness_witness, is_balanced, marginal_vector, robust_value,
};
use crdu::distortion::{DistortionFunction, UtilityFunction};
use crdu::models::{donsker_varadhan_grid, ModelSpec};
use crdu::sampling::{random_capacity, random_supermodular_capacity};
use crdu::space::{Act, Event, ProbabilityMeasure, StateSpace};

/// All vertices of `{μ ≥ 0 : Σμ = 1, μ(A) ≥ ν(A)}` by solving every square
/// system of tight constraints.
fn brute_force_vertices(nu: &Capacity) -> Vec<Vec<f64>> {
    let n = nu.space().len();
    let full = Event::full(n);
    let events: Vec<Event> = nu
        .space()
        .events()
        .filter(|e| !e.is_empty() && *e != full)
        .collect();
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut pick = vec![0usize; n - 1];
    fn rec(
        k: usize,
        start: usize,
        pick: &mut Vec<usize>,
        events: &[Event],
        nu: &Capacity,
        n: usize,
        out: &mut Vec<Vec<f64>>,
    ) {
        if k == pick.len() {
            let mut a = DMatrix::<f64>::zeros(n, n);
            let mut b = DVector::<f64>::zeros(n);
            for (row, &i) in pick.iter().enumerate() {
                for s in events[i].members() {
                    a[(row, s)] = 1.0;
                }
                b[row] = nu.value(events[i]);
            }
            for s in 0..n {
                a[(n - 1, s)] = 1.0;
            }
            b[n - 1] = 1.0;
            let lu = a.lu();
            if lu.determinant().abs() < 1e-12 {
                return;
            }
            let Some(x) = lu.solve(&b) else { return };
            let feasible = nu
                .space()
                .events()
                .all(|e| e.members().map(|s| x[s]).sum::<f64>() >= nu.value(e) - 1e-9);
            let x: Vec<f64> = x.iter().copied().collect();
            if feasible
                && !out
                    .iter()
                    .any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-9))
            {
                out.push(x);
            }
            return;
        }
        for i in start..events.len() {
            pick[k] = i;
            rec(k + 1, i + 1, pick, events, nu, n, out);
        }
    }
    if n == 1 {
        return vec![vec![1.0]];
    }
    rec(0, 0, &mut pick, &events, nu, n, &mut out);
    out
}

fn same_vertex_sets(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|v| {
            b.iter()
                .any(|w| v.iter().zip(w).all(|(p, q)| (p - q).abs() < 1e-8))
        })
}

fn three_state() -> Capacity {
    let s = StateSpace::new(["1", "2", "3"]).unwrap();
    Capacity::from_table(&s, vec![0.0, 0.0, 0.0, 0.8, 0.0, 0.8, 0.0, 1.0]).unwrap()
}

#[test]
fn vertices_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for trial in 0..120 {
        let n = rng.gen_range(1..=4);
        let s = StateSpace::indexed(n).unwrap();
        let nu = if trial % 2 == 0 {
            random_supermodular_capacity(&mut rng, &s).unwrap()
        } else {
            // shrink a random capacity so the core is usually nonempty
            let raw = random_capacity(&mut rng, &s).unwrap();
            let k = rng.gen_range(0.3..1.0);
            Capacity::from_fn(&s, |e| if e == s.full() { 1.0 } else { k * raw.value(e) }).unwrap()
        };
        let fast: Vec<Vec<f64>> = core_vertices(&nu)
            .unwrap()
            .iter()
            .map(|m| m.weights().to_vec())
            .collect();
        let slow = brute_force_vertices(&nu);
        assert!(
            same_vertex_sets(&fast, &slow),
            "trial {trial}: {fast:?} vs {slow:?}"
        );
        assert_eq!(is_balanced(&nu).unwrap(), !slow.is_empty());
    }
}

#[test]
fn supermodular_core_is_spanned_by_marginal_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(2..=4);
        let s = StateSpace::indexed(n).unwrap();
        let nu = random_supermodular_capacity(&mut rng, &s).unwrap();
        let mut marginals: Vec<Vec<f64>> = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let m = marginal_vector(&nu, &perm).unwrap().weights().to_vec();
            if !marginals
                .iter()
                .any(|v| v.iter().zip(&m).all(|(p, q)| (p - q).abs() < 1e-9))
            {
                marginals.push(m);
            }
            // next lexicographic permutation
            let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        let verts: Vec<Vec<f64>> = core_vertices(&nu)
            .unwrap()
            .iter()
            .map(|m| m.weights().to_vec())
            .collect();
        assert!(same_vertex_sets(&verts, &marginals));
    }
}

#[test]
fn choquet_hand_values() {
    let s = StateSpace::new(["a", "b", "c"]).unwrap();
    // {a}, {b}, {a,b}, {c}, {a,c}, {b,c}
    let nu = Capacity::from_table(&s, vec![0.0, 0.2, 0.3, 0.6, 0.1, 0.4, 0.5, 1.0]).unwrap();
    let x = Act::new(&s, vec![3.0, 1.0, 2.0]).unwrap();
    // 3·0.2 + 2·(0.4 − 0.2) + 1·(1 − 0.4)
    assert!((choquet(&x, &nu).unwrap() - 1.6).abs() < 1e-15);
    assert!((choquet_riemann_oracle(&x, &nu, 1_000_000).unwrap() - 1.6).abs() < 1e-5);

    let s2 = StateSpace::indexed(2).unwrap();
    let uniform = Capacity::from_measure(&ProbabilityMeasure::uniform(&s2));
    let sym = Act::new(&s2, vec![-1.0, 1.0]).unwrap();
    assert!(
        choquet_riemann_oracle(&sym, &uniform, 1_000_000)
            .unwrap()
            .abs()
            < 1e-5
    );

    let neg = Act::new(&s, vec![-3.0, -1.0, -2.5]).unwrap();
    // −1·0.3 − 2.5·(0.5 − 0.3) − 3·(1 − 0.5)
    assert!((choquet(&neg, &nu).unwrap() + 2.3).abs() < 1e-15);
    assert!((choquet_riemann_oracle(&neg, &nu, 1_000_000).unwrap() + 2.3).abs() < 1e-5);
}

#[test]
fn robust_value_hand_values() {
    let (u, g) = (UtilityFunction::identity(), DistortionFunction::identity());
    let s = StateSpace::indexed(2).unwrap();
    let nu = Capacity::from_table(&s, vec![0.0, 0.3, 0.4, 1.0]).unwrap();
    let x = Act::new(&s, vec![1.0, 0.0]).unwrap();
    assert!((robust_value(&u, &g, &nu, &x).unwrap().value - 0.3).abs() < 1e-15);

    let nu = three_state();
    // objective 2μ1 + μ2 at each vertex
    let verts = brute_force_vertices(&nu);
    let x = Act::new(nu.space(), vec![2.0, 1.0, 0.0]).unwrap();
    let by_hand = verts
        .iter()
        .map(|v| 2.0 * v[0] + v[1])
        .fold(f64::INFINITY, f64::min);
    assert!((by_hand - 1.4).abs() < 1e-12);
    let r = robust_value(&u, &g, &nu, &x).unwrap();
    assert!((r.value - by_hand).abs() < 1e-12);
    assert!((choquet(&x, &nu).unwrap() - 0.8).abs() < 1e-15);
    // min over the core of μ({1}) is 0.6 while ν({1}) = 0
    let min_first = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
    assert!((min_first - 0.6).abs() < 1e-12);
    assert!(!exactness_witness(&nu).unwrap().holds());
}

#[test]
fn counterexample_hand_values() {
    let s = product_space(2, 2).unwrap();
    let p = ProbabilityMeasure::uniform(&s);
    let h = DistortionFunction::power(0.5).unwrap();
    let cx = construct_counterexample(2, 2, &p, &h).unwrap();
    let a0 = cx.h_partition.blocks()[0];
    let half = 0.5f64.sqrt();
    assert!((cx.capacity.value(a0) - half).abs() < 1e-15);
    assert!((cx.capacity.value(a0.complement(4)) - half).abs() < 1e-15);
    let sum = cx.capacity.value(a0) + cx.capacity.value(a0.complement(4));
    assert_eq!(format!("{sum:.6}"), "1.414214");
    assert!(!is_balanced(&cx.capacity).unwrap());
    for b in cx.g_partition.blocks() {
        assert_eq!(cx.capacity.value(*b), 0.5);
    }
    assert!(construct_counterexample(2, 2, &p, &DistortionFunction::identity()).is_err());
}

#[test]
fn entropic_hand_values() {
    let s = StateSpace::indexed(2).unwrap();
    let p = ProbabilityMeasure::uniform(&s);
    let x = Act::new(&s, vec![0.0, 2f64.ln()]).unwrap();
    // −ln(½ + ½·½) = ln(4/3)
    let want = (4.0f64 / 3.0).ln();
    let m = ModelSpec::entropic(1.0, p.clone()).unwrap();
    assert!((m.certainty_equivalent(&x).unwrap() - want).abs() < 1e-15);
    assert!((donsker_varadhan_grid(&x, 1.0, &p).unwrap().value - want).abs() < 1e-8);
}

#[test]
fn matching_probability_inverts_the_distortion() {
    let s = StateSpace::indexed(2).unwrap();
    let nu = Capacity::from_table(&s, vec![0.0, 0.36, 0.49, 1.0]).unwrap();
    let p = ProbabilityMeasure::uniform(&s);
    let m = ModelSpec::crdu(
        UtilityFunction::identity(),
        DistortionFunction::power(0.5).unwrap(),
        nu,
        crdu::space::RiskPartition::trivial(&s),
        p,
    )
    .unwrap();
    // a bet on {0} is worth √0.36 = 0.6, matched by ν = 0.36
    let bet = Act::indicator(&s, Event::singleton(0)).unwrap();
    assert!((m.value(&bet).unwrap() - 0.6).abs() < 1e-15);
    assert!((m.matching_probability(Event::singleton(0)).unwrap() - 0.36).abs() < 1e-12);
}
