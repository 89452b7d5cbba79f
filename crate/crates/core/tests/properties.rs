use arrhenius_core::dynamics::{build_rates, stationary_dense, stationary_reversible};
use arrhenius_core::graph::{circulant, circulant_of_degree, complete_graph, cycle, hypercube, random_regular_by_swaps, Graph};
use arrhenius_core::landscape::{sample_iid, sample_rem};
use arrhenius_core::seed::derive_seed;
use arrhenius_core::stats::{covariance, lse, pearson, population_variance, rho_report};
use arrhenius_core::StateProfile;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vec_pair(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_len).prop_flat_map(|d| {
        (prop::collection::vec(-50.0..50.0f64, d), prop::collection::vec(-50.0..50.0f64, d))
    })
}

fn naive_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n
}

proptest! {
    #[test]
    fn lse_is_one_lipschitz((x, y) in vec_pair(64)) {
        let d2 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let slack = 1e-12 * (1.0 + d2);
        prop_assert!((lse(&x).unwrap() - lse(&y).unwrap()).abs() <= d2 + slack);
    }

    #[test]
    fn lse_sandwich_and_shift(x in prop::collection::vec(-700.0..700.0f64, 1..64), c in -100.0..100.0f64) {
        let l = lse(&x).unwrap();
        let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(max <= l && l <= max + (x.len() as f64).ln());
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        prop_assert!((lse(&shifted).unwrap() - (l + c)).abs() <= 1e-10 * (1.0 + l.abs()));
    }

    #[test]
    fn variance_matches_naive(x in prop::collection::vec(-1e3..1e3f64, 1..100)) {
        let v = population_variance(&x);
        prop_assert!(v >= 0.0);
        prop_assert!((v - naive_variance(&x)).abs() <= 1e-9 * (1.0 + v));
        prop_assert!((covariance(&x, &x) - v).abs() <= 1e-9 * (1.0 + v));
    }

    #[test]
    fn pearson_affine_invariance((x, y) in vec_pair(40), a in 0.1..10.0f64, b in -10.0..10.0f64) {
        prop_assume!(x.len() >= 3);
        if let (Ok(r), Ok(s)) = (pearson(&x, &y), pearson(&x.iter().map(|v| a * v + b).collect::<Vec<_>>(), &y)) {
            prop_assert!((r - s).abs() < 1e-9);
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn rho_invariant_under_well_shift(seed in any::<u64>(), c in -20.0..20.0f64) {
        let g = hypercube(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = sample_iid(&g, 1.0, 0.7, 0.0, &mut rng).unwrap();
        let st = stationary_reversible(&l).unwrap();
        let p = StateProfile::new(&l, &build_rates(&l), &st);
        let base = p.rho_report().rho.unwrap();
        let w: Vec<f64> = p.wells.iter().map(|v| v + c).collect();
        let lq: Vec<f64> = p.log_q.iter().map(|v| v + c).collect();
        let shifted = rho_report(&p.neg_log_pi, &lq, &w, &p.barrier_fn, true, Some(5)).rho.unwrap();
        prop_assert!((base - shifted).abs() < 1e-10);
    }

    #[test]
    fn swaps_preserve_degree_simplicity_connectivity(seed in any::<u64>(), degree in 1usize..4, swaps in 0usize..60) {
        let base = circulant_of_degree(24, 2 * degree).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_regular_by_swaps(&base, swaps, &mut rng).unwrap();
        let d = g.validate();
        prop_assert!(d.is_valid());
        prop_assert_eq!(d.degree, Some(2 * degree));
        prop_assert_eq!(g.num_edges(), base.num_edges());
        let again = random_regular_by_swaps(&base, swaps, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(g, again);
    }

    #[test]
    fn dense_solver_matches_boltzmann(seed in any::<u64>(), lambda in 0.0..1.0f64) {
        let g = cycle(17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = sample_rem(&g, lambda, 1.5, &mut rng).unwrap();
        let exact = stationary_reversible(&l).unwrap();
        let num = stationary_dense(&build_rates(&l)).unwrap();
        let total: f64 = num.pi().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for (a, b) in exact.neg_log_pi.iter().zip(&num.neg_log_pi) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn forced_dense_solution_is_stationary(seed in any::<u64>()) {
        let g = hypercube(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = sample_iid(&g, 1.0, 1.0, 2.0, &mut rng).unwrap();
        let st = stationary_dense(&build_rates(&l)).unwrap();
        prop_assert!(st.residual < 1e-12);
    }
}

#[test]
fn constructor_edge_counts() {
    for d in 1..=10u32 {
        let g = hypercube(d).unwrap();
        assert_eq!(g.num_edges(), (d as usize) << (d - 1));
        assert!(g.validate().is_valid());
    }
    for n in 2..40 {
        let g = complete_graph(n).unwrap();
        assert_eq!(g.num_edges(), n * (n - 1) / 2);
        assert!(g.validate().is_valid());
    }
    for n in 3..40 {
        let g = cycle(n).unwrap();
        assert_eq!(g.num_edges(), n);
        assert_eq!(g.validate().degree, Some(2));
    }
    assert_eq!(circulant(8, &[1, 2]).unwrap().regular_degree(), Some(4));
    assert_eq!(circulant(8, &[1, 4]).unwrap().regular_degree(), Some(3));
    assert!(circulant(8, &[2]).is_err());
    assert!(circulant(8, &[1, 1]).is_err());
}

#[test]
fn validate_flags_irregular_graph() {
    let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let d = g.validate();
    assert!(d.simple && d.connected && !d.regular);
    assert_eq!(d.degree, None);
}

#[test]
fn derived_seeds_do_not_collide() {
    let mut seen = std::collections::HashSet::new();
    for point in 0..50u64 {
        for trial in 0..2000u64 {
            assert!(seen.insert(derive_seed(42, point, trial)));
        }
    }
}
