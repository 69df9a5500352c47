//! Randomized invariants across modules.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{
    l1_rate, outcome_rate, theorem1_audit, time_resolution, AuditOptions, OutcomeTrajectory, Verdict,
};
use crate::dynamics::{energy_bandwidth, propagate, uniform_grid, Evolution, Generator, SemigroupGenerator, SemigroupPropagator};
use crate::gallery::{make_circle_clock, ClockInstance, ProbePath};
use crate::measurement::{disturbance, entropy_increase, lueders_update, outcome_distribution, ProjectiveMeasurement};
use crate::quantum::{matrix_function, relative_entropy, trace_distance, von_neumann_entropy, Operator};
use crate::random;
use crate::tol;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn states_are_valid(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let rho = random::density_matrix(&mut r, dim, None);
        let m = random::projective_measurement(&mut r, dim, None);
        for s in [rho.clone(), lueders_update(&m, &rho).unwrap()] {
            prop_assert!((s.operator().trace().re - 1.0).abs() <= tol::TRACE);
            prop_assert!(s.operator().is_hermitian());
            prop_assert!(s.eigenvalues().iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let rho = random::density_matrix(&mut r, dim, None);
        let u = random::unitary(&mut r, dim);
        let rotated = rho.conjugate_by(&u).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() <= 1e-10);
    }

    #[test]
    fn pinsker_for_relative_entropy(seed in any::<u64>(), dim in 2usize..=6) {
        let mut r = rng(seed);
        let rho = random::density_matrix(&mut r, dim, None);
        let sigma = random::density_matrix(&mut r, dim, Some(dim));
        let k = relative_entropy(&rho, &sigma).unwrap();
        let d = 2.0 * trace_distance(&rho, &sigma).unwrap();
        prop_assert!(k.is_finite());
        prop_assert!(k >= 0.5 * d * d - 1e-10, "K = {k}, ||.||_1 = {d}");
    }

    #[test]
    fn exp_and_its_inverse(seed in any::<u64>(), dim in 2usize..=6) {
        let a = random::hermitian(&mut rng(seed), dim, 1.0);
        let e = matrix_function(&a, f64::exp).unwrap();
        let inv = matrix_function(&a, |x| (-x).exp()).unwrap();
        prop_assert!((&e * &inv).max_abs_diff(&Operator::identity(dim)) <= 1e-9);
    }

    #[test]
    fn measurement_chain(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let rho = random::density_matrix(&mut r, dim, None);
        let m = random::projective_measurement(&mut r, dim, None);
        let post = lueders_update(&m, &rho).unwrap();
        let ds = entropy_increase(&m, &rho).unwrap();
        let k = relative_entropy(&rho, &post).unwrap();
        prop_assert!((ds - k).abs() <= 1e-8);
        prop_assert!(ds >= -1e-9);
        let d = disturbance(&m, &rho).unwrap();
        prop_assert!(ds >= 0.5 * d * d - 1e-8);
        let twice = lueders_update(&m, &post).unwrap();
        prop_assert!(twice.operator().max_abs_diff(post.operator()) <= 1e-10);
    }

    #[test]
    fn commuting_states_are_undisturbed(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let m = random::projective_measurement(&mut r, dim, None);
        let sigma = random::density_matrix(&mut r, dim, None);
        // Block-diagonal in the measurement: commutes with every projection.
        let rho = lueders_update(&m, &sigma).unwrap();
        prop_assert!(m.max_commutator(rho.operator()) <= 1e-12);
        prop_assert!(disturbance(&m, &rho).unwrap() <= 1e-9);
    }

    #[test]
    fn unitary_group_law_and_bandwidth(seed in any::<u64>(), dim in 2usize..=6, s in 0.0f64..5.0, t in 0.0f64..5.0) {
        let mut r = rng(seed);
        let h = random::hermitian(&mut r, dim, 1.0);
        let rho = random::density_matrix(&mut r, dim, None);
        let direct = propagate(&h, &rho, s + t).unwrap();
        let composed = propagate(&h, &propagate(&h, &rho, s).unwrap(), t).unwrap();
        prop_assert!(direct.operator().max_abs_diff(composed.operator()) <= 1e-9);
        let de0 = energy_bandwidth(&h, &rho, tol::OCCUPATION).unwrap();
        let de1 = energy_bandwidth(&h, &direct, tol::OCCUPATION).unwrap();
        prop_assert!((de0 - de1).abs() <= 1e-9);
    }

    #[test]
    fn semigroup_law(seed in any::<u64>(), dim in 2usize..=4, rate in 0.0f64..3.0, s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let mut r = rng(seed);
        let h = random::hermitian(&mut r, dim, 1.0);
        let m = random::projective_measurement(&mut r, dim, None);
        let rho = random::density_matrix(&mut r, dim, None);
        let p = SemigroupPropagator::new(&SemigroupGenerator::new(h, m, rate).unwrap());
        let direct = p.propagate(&rho, s + t).unwrap();
        let composed = p.propagate(&p.propagate(&rho, s).unwrap(), t).unwrap();
        prop_assert!(direct.operator().max_abs_diff(composed.operator()) <= 1e-8);
    }

    #[test]
    fn pointwise_chain_and_rate_cap(seed in any::<u64>(), dim in 2usize..=8, t in 0.0f64..10.0) {
        let mut r = rng(seed);
        let h = random::hermitian(&mut r, dim, 1.0);
        let rho = random::density_matrix(&mut r, dim, None);
        let m = random::projective_measurement(&mut r, dim, None);
        let de = energy_bandwidth(&h, &rho, tol::OCCUPATION).unwrap();
        let rt = propagate(&h, &rho, t).unwrap();
        let l1 = l1_rate(&h, &m, &rt).unwrap();
        prop_assert!(l1 <= de + 1e-8);
        let d = disturbance(&m, &rt).unwrap();
        let ds = entropy_increase(&m, &rt).unwrap();
        prop_assert!(ds >= 0.5 * d * d - 1e-8);
        prop_assert!(0.5 * d * d >= 0.5 * (l1 / de).powi(2) - 1e-8);
    }

    #[test]
    fn dephasing_in_the_readout_basis_leaves_rates_hamiltonian(
        seed in any::<u64>(), dim in 2usize..=4, rate in 0.0f64..3.0, t in 0.0f64..3.0,
    ) {
        let mut r = rng(seed);
        let h = random::hermitian(&mut r, dim, 1.0);
        let m = random::projective_measurement(&mut r, dim, None);
        let rho = random::density_matrix(&mut r, dim, None);
        let g = SemigroupGenerator::new(h.clone(), m.clone(), rate).unwrap();
        let p = SemigroupPropagator::new(&g);
        let eps = 1e-5;
        let at = |s: f64| outcome_distribution(&m, &p.propagate(&rho, s).unwrap()).unwrap().probabilities;
        let (a, b) = (at(t + eps), at(t + 2.0 * eps));
        let (c, d) = (at(t + 3.0 * eps), at(t + 4.0 * eps));
        let rt = p.propagate(&rho, t + 2.5 * eps).unwrap();
        let hamiltonian_part = outcome_rate(&h, &m, &rt).unwrap();
        for j in 0..m.len() {
            // centred four-point difference at t + 2.5 eps
            let fd = (-d[j] + 27.0 * c[j] - 27.0 * b[j] + a[j]) / (24.0 * eps);
            prop_assert!((fd - hamiltonian_part[j]).abs() <= 1e-6, "{fd} vs {}", hamiltonian_part[j]);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn two_outcome_resolution_is_best_decision_rule(seed in any::<u64>(), shift in 1usize..40) {
        let mut r = rng(seed);
        let h = random::hermitian(&mut r, 3, 1.0);
        let rho = random::pure_state(&mut r, 3);
        let m = random::projective_measurement(&mut r, 3, Some(2));
        let times = uniform_grid(4.0, 129);
        let probs: Vec<Vec<f64>> = times
            .iter()
            .map(|&t| outcome_distribution(&m, &propagate(&h, &rho, t).unwrap()).unwrap().probabilities)
            .collect();
        let traj = OutcomeTrajectory::new(times.clone(), probs.clone(), m.labels().to_vec()).unwrap();
        let dt = traj.step() * shift as f64;
        let cert = time_resolution(&traj, dt).unwrap();
        // Subsets {}, {0}, {1}, {0, 1} as the event "guess the earlier time".
        let mut brute = f64::INFINITY;
        for i in 0..times.len() - shift {
            let (p, q) = (&probs[i], &probs[i + shift]);
            let best = [0.0, p[0] - q[0], p[1] - q[1], (p[0] + p[1]) - (q[0] + q[1])]
                .iter()
                .map(|x: &f64| x.abs())
                .fold(0.0, f64::max);
            brute = brute.min(best);
        }
        prop_assert!((cert.min_total_variation - brute).abs() <= 1e-12);
    }

    #[test]
    fn averaged_bound_on_random_clocks(seed in any::<u64>(), dim in 2usize..=4) {
        let mut r = rng(seed);
        let h = random::hermitian(&mut r, dim, 1.0);
        let initial = random::pure_state(&mut r, dim);
        let measurement = random::projective_measurement(&mut r, dim, None);
        let instance = ClockInstance {
            name: "random".into(),
            generator: Generator::Hamiltonian { hamiltonian: h },
            initial,
            measurement,
            horizon: 6.0,
            parameter_name: "time t".into(),
            bandwidth: None,
            target_resolution: None,
            fast_path: None,
        };
        let options = AuditOptions { grid_points: 513, quadrature_points: 33, ..Default::default() };
        let audit = theorem1_audit(&instance, &options).unwrap();
        prop_assert!(audit.report.verdict != Verdict::Violated, "{}", audit.report);
        if audit.certificate.is_some() {
            prop_assert_eq!(audit.report.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn circle_clock_is_periodic(k in 2usize..=24, t in 0.0f64..6.3) {
        let clock = make_circle_clock(k, 4).unwrap();
        let probe = clock.probe(ProbePath::Fast).unwrap();
        let a = probe.probabilities(t).unwrap();
        let b = probe.probabilities(t + 2.0 * std::f64::consts::PI).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
        let evo = Evolution::new(&clock.generator, &clock.initial).unwrap();
        let dense = outcome_distribution(&clock.measurement, &evo.state_at(t).unwrap()).unwrap().probabilities;
        for (x, y) in a.iter().zip(&dense) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn measurement_from_random_basis_is_complete() {
    let mut r = rng(3);
    let m: ProjectiveMeasurement = random::projective_measurement(&mut r, 5, Some(3));
    let sum = m.projections().iter().fold(Operator::zeros(5), |a, p| &a + p);
    assert!(sum.max_abs_diff(&Operator::identity(5)) < 1e-10);
}
