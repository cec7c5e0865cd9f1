//! End-to-end checks of the shared numerical substrate: integrators against
//! closed-form solutions, jump unraveling against the master equation, and the
//! dense linear-algebra kernels against reconstruction identities.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{PI, TAU};

use aqg_sim::linalg::{self, kron, max_abs_diff};
use aqg_sim::sim::{
    gaussian_envelope, integrate_lindblad, integrate_lindblad_strided, integrate_schrodinger,
    jump_events, matrices, quantum_jump_trajectory, square_envelope, steady_state,
    DensityOperator, LindbladModel, Operator, StateVector, TimeGrid,
};
use aqg_sim::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_matrix(rng: &mut ChaCha12Rng, n: usize) -> Array2<C64> {
    Array2::from_shape_fn((n, n), |_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
}

fn random_hermitian(rng: &mut ChaCha12Rng, n: usize) -> Array2<C64> {
    let a = random_matrix(rng, n);
    let ad = linalg::dagger(&a);
    (&a + &ad).mapv(|z| z * 0.5)
}

fn random_state(rng: &mut ChaCha12Rng, n: usize) -> StateVector {
    let amps: Vec<C64> =
        (0..n).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    StateVector::normalized(amps).unwrap()
}

/// Mixture of a few random pure states: a generic full-rank density operator.
fn random_density(rng: &mut ChaCha12Rng, n: usize) -> DensityOperator {
    let mut mat = Array2::<C64>::zeros((n, n));
    let mut weights = Vec::new();
    for _ in 0..n + 1 {
        weights.push(rng.gen::<f64>() + 0.05);
    }
    let total: f64 = weights.iter().sum();
    for w in &weights {
        let psi = random_state(rng, n);
        let a = psi.amplitudes();
        for i in 0..n {
            for j in 0..n {
                mat[[i, j]] += a[i] * a[j].conj() * (w / total);
            }
        }
    }
    DensityOperator::new(mat).unwrap()
}

// ---------------------------------------------------------------------------
// Pulse envelopes
// ---------------------------------------------------------------------------

#[test]
fn gaussian_envelope_matches_printed_values() {
    let u = gaussian_envelope(1.0, 0.0).unwrap();
    let expect = (1.0 / TAU).powf(0.25);
    assert!((u.eval(0.0).re - expect).abs() < 1e-12);
    assert!((u.eval(0.0).re - 0.6316).abs() < 5e-5);
    assert!(u.eval(0.0).im.abs() < 1e-15);

    // Even around the center, for an off-center pulse too.
    let v = gaussian_envelope(2.3, 1.7).unwrap();
    for k in 0..40 {
        let s = 0.09 * k as f64;
        let diff = (v.eval(1.7 + s) - v.eval(1.7 - s)).norm();
        assert!(diff < 1e-12, "asymmetry {diff:.2e} at s={s}");
    }

    // Identically zero outside the declared support.
    let (lo, hi) = v.support();
    assert!(v.eval(lo - 1e-9).norm() == 0.0);
    assert!(v.eval(hi + 1e-9).norm() == 0.0);

    assert!(gaussian_envelope(0.0, 0.0).is_err());
    assert!(gaussian_envelope(-1.0, 0.0).is_err());
}

#[test]
fn gaussian_envelope_has_unit_energy() {
    for &(bw, center) in &[(1.0, 0.0), (3.7, 2.0), (0.2, -5.0)] {
        let u = gaussian_envelope(bw, center).unwrap();
        let (lo, hi) = u.support();
        // Simpson's rule on |u|^2 over the support window.
        let n = 4000; // even
        let h = (hi - lo) / n as f64;
        let f = |k: usize| u.eval(lo + h * k as f64).norm_sqr();
        let mut acc = f(0) + f(n);
        for k in 1..n {
            acc += f(k) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let energy = acc * h / 3.0;
        assert!((energy - 1.0).abs() < 1e-6, "energy {energy:.8} at bandwidth {bw}");
    }
}

#[test]
fn square_envelope_is_flat_inside_and_zero_outside() {
    let amp = c(0.3, -0.4);
    let u = square_envelope(amp, 1.0, 2.5).unwrap();
    assert!((u.eval(1.2) - amp).norm() < 1e-15);
    assert!((u.eval(2.49) - amp).norm() < 1e-15);
    assert!(u.eval(0.99).norm() == 0.0);
    assert!(u.eval(2.51).norm() == 0.0);
    assert!(square_envelope(amp, 2.0, 2.0).is_err());
}

// ---------------------------------------------------------------------------
// Schrödinger integration
// ---------------------------------------------------------------------------

#[test]
fn zero_hamiltonian_keeps_the_state() {
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let psi0 = random_state(&mut rng, 5);
    let grid = TimeGrid::with_steps(0.0, 4.0, 160).unwrap();
    let traj = integrate_schrodinger(|_| Array2::<C64>::zeros((5, 5)), &psi0, &grid).unwrap();
    for psi in &traj.states {
        let diff: f64 = psi
            .amplitudes()
            .iter()
            .zip(psi0.amplitudes().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }
}

#[test]
fn resonant_rabi_pi_pulse_inverts_the_population() {
    let omega = 1.3;
    let h = matrices::pauli_x().mapv(|z| z * (omega / 2.0));
    let grid = TimeGrid::with_steps(0.0, PI / omega, 400).unwrap();
    let traj =
        integrate_schrodinger(move |_| h.clone(), &StateVector::basis(2, 0).unwrap(), &grid)
            .unwrap();
    assert!((traj.final_state().probability(1) - 1.0).abs() < 1e-6);
    // Norm stays put along the whole trajectory, not just at the end.
    for psi in &traj.states {
        assert!((psi.norm() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn detuned_rabi_peak_matches_the_lorentzian_formula() {
    let omega = 1.0f64;
    let delta = 0.7f64;
    let w = (omega * omega + delta * delta).sqrt();
    let h = matrices::pauli_x().mapv(|z| z * (omega / 2.0))
        + matrices::pauli_z().mapv(|z| z * (delta / 2.0));
    // End the grid exactly at the first population maximum t = pi/W.
    let grid = TimeGrid::with_steps(0.0, PI / w, 600).unwrap();
    let traj =
        integrate_schrodinger(move |_| h.clone(), &StateVector::basis(2, 0).unwrap(), &grid)
            .unwrap();
    let peak = traj.final_state().probability(1);
    let expect = omega * omega / (w * w);
    assert!((peak - expect).abs() < 1e-5, "peak {peak:.8} vs {expect:.8}");
}

#[test]
fn non_hermitian_hamiltonian_is_rejected() {
    let mut bad = Array2::<C64>::zeros((2, 2));
    bad[[0, 1]] = c(1.0, 0.0);
    let grid = TimeGrid::with_steps(0.0, 1.0, 10).unwrap();
    let res = integrate_schrodinger(move |_| bad.clone(), &StateVector::basis(2, 0).unwrap(), &grid);
    assert!(res.is_err());
}

#[test]
fn integrator_converges_at_fourth_order() {
    // Global error of the Rabi problem against the analytic solution, at three
    // step sizes; each halving should shrink the error ~16x.
    let omega = 2.0;
    let t_end = 1.7;
    let h = matrices::pauli_x().mapv(|z| z * (omega / 2.0));
    let error_at = |steps: usize| -> f64 {
        let grid = TimeGrid::with_steps(0.0, t_end, steps).unwrap();
        let traj =
            integrate_schrodinger(|_| h.clone(), &StateVector::basis(2, 0).unwrap(), &grid)
                .unwrap();
        let a = traj.final_state().amplitude(0);
        let b = traj.final_state().amplitude(1);
        let exact0 = c((omega * t_end / 2.0).cos(), 0.0);
        let exact1 = c(0.0, -(omega * t_end / 2.0).sin());
        ((a - exact0).norm_sqr() + (b - exact1).norm_sqr()).sqrt()
    };
    let e1 = error_at(40);
    let e2 = error_at(80);
    let e3 = error_at(160);
    let order12 = (e1 / e2).log2();
    let order23 = (e2 / e3).log2();
    assert!(order12 > 3.8, "observed order {order12:.2} ({e1:.3e} -> {e2:.3e})");
    assert!(order23 > 3.8, "observed order {order23:.2} ({e2:.3e} -> {e3:.3e})");
}

// ---------------------------------------------------------------------------
// Lindblad integration
// ---------------------------------------------------------------------------

fn driven_damped_qubit(omega: f64, gamma: f64) -> LindbladModel {
    let h = Operator::hermitian(matrices::pauli_x().mapv(|z| z * (omega / 2.0))).unwrap();
    let lower = Operator::general(matrices::ketbra(2, 0, 1)).unwrap();
    LindbladModel::new(h, vec![(lower, gamma)]).unwrap()
}

#[test]
fn amplitude_damping_follows_the_exponential() {
    let gamma = 0.8;
    let model = driven_damped_qubit(0.0, gamma);
    let rho0 = DensityOperator::from_pure(&StateVector::basis(2, 1).unwrap());
    let grid = TimeGrid::with_steps(0.0, 6.0 / gamma, 1200).unwrap();
    let traj = integrate_lindblad(&model, &rho0, &grid).unwrap();
    for (t, rho) in traj.times.iter().zip(traj.states.iter()) {
        let expect = (-gamma * t).exp();
        assert!(
            (rho.population(1) - expect).abs() < 1e-6,
            "population {:.8} vs {expect:.8} at t={t}",
            rho.population(1)
        );
        assert!((rho.trace().re - 1.0).abs() < 1e-8);
    }
    assert!(traj.warnings.is_empty(), "{:?}", traj.warnings);
}

#[test]
fn empty_model_keeps_rho_constant() {
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    let h = Operator::hermitian(Array2::<C64>::zeros((4, 4))).unwrap();
    let model = LindbladModel::new(h, Vec::new()).unwrap();
    let rho0 = random_density(&mut rng, 4);
    let grid = TimeGrid::with_steps(0.0, 3.0, 300).unwrap();
    let traj = integrate_lindblad(&model, &rho0, &grid).unwrap();
    assert!(max_abs_diff(traj.final_state().matrix(), rho0.matrix()) < 1e-12);
}

#[test]
fn damped_coherent_state_amplitude_decays_at_half_gamma() {
    // A coherent state under pure cavity decay keeps its shape while the
    // amplitude shrinks: <a>(t) = alpha0 * exp(-gamma t / 2).
    let n_max = 18;
    let dim = n_max + 1;
    let alpha0 = 1.1;
    let gamma = 0.45;

    let mut amps = vec![c(0.0, 0.0); dim];
    let mut term = (-alpha0 * alpha0 / 2.0f64).exp();
    for (n, a) in amps.iter_mut().enumerate() {
        *a = c(term, 0.0);
        term *= alpha0 / ((n + 1) as f64).sqrt();
    }
    let psi0 = StateVector::normalized(amps).unwrap();

    let h = Operator::hermitian(Array2::<C64>::zeros((dim, dim))).unwrap();
    let a_mat = matrices::annihilation(n_max);
    let model =
        LindbladModel::new(h, vec![(Operator::general(a_mat.clone()).unwrap(), gamma)]).unwrap();
    let grid = TimeGrid::with_steps(0.0, 4.0 / gamma, 2400).unwrap();
    let traj =
        integrate_lindblad_strided(&model, &DensityOperator::from_pure(&psi0), &grid, 300)
            .unwrap();

    let n_mat = matrices::number(n_max);
    for (t, rho) in traj.times.iter().zip(traj.states.iter()) {
        let mean_a = rho.expectation(&a_mat);
        let expect = alpha0 * (-gamma * t / 2.0).exp();
        assert!(
            (mean_a - c(expect, 0.0)).norm() < 1e-5,
            "<a> = {mean_a} vs {expect:.8} at t={t}"
        );
        let mean_n = rho.expectation(&n_mat).re;
        assert!((mean_n - expect * expect).abs() < 1e-5);
    }
}

#[test]
fn negative_rates_are_rejected() {
    let h = Operator::hermitian(Array2::<C64>::zeros((2, 2))).unwrap();
    let lower = Operator::general(matrices::ketbra(2, 0, 1)).unwrap();
    assert!(LindbladModel::new(h, vec![(lower, -0.1)]).is_err());
}

#[test]
fn halving_the_step_leaves_observables_unchanged() {
    let model = driven_damped_qubit(1.0, 1.0);
    let rho0 = DensityOperator::from_pure(&StateVector::basis(2, 0).unwrap());
    let grid = TimeGrid::with_steps(0.0, 5.0, 250).unwrap();
    let coarse = integrate_lindblad(&model, &rho0, &grid).unwrap();
    let fine = integrate_lindblad_strided(&model, &rho0, &grid.halved(), 2).unwrap();
    let p_coarse = coarse.final_state().population(1);
    let p_fine = fine.final_state().population(1);
    assert!(
        (p_coarse - p_fine).abs() < 1e-6,
        "step halving moved the population by {:.2e}",
        (p_coarse - p_fine).abs()
    );
}

#[test]
fn steady_state_agrees_with_long_time_integration() {
    let model = driven_damped_qubit(1.2, 0.9);
    let fixed = steady_state(&model).unwrap();
    assert!((fixed.trace().re - 1.0).abs() < 1e-10);

    let rho0 = DensityOperator::from_pure(&StateVector::basis(2, 0).unwrap());
    let grid = TimeGrid::with_steps(0.0, 50.0, 5000).unwrap();
    let traj = integrate_lindblad_strided(&model, &rho0, &grid, 5000).unwrap();
    let gap = max_abs_diff(traj.final_state().matrix(), fixed.matrix());
    assert!(gap < 1e-6, "steady state differs from t=50 snapshot by {gap:.2e}");
}

// ---------------------------------------------------------------------------
// Quantum-jump unraveling
// ---------------------------------------------------------------------------

#[test]
fn zero_rate_channels_never_fire() {
    let omega = 1.1;
    let h = Operator::hermitian(matrices::pauli_x().mapv(|z| z * (omega / 2.0))).unwrap();
    let lower = Operator::general(matrices::ketbra(2, 0, 1)).unwrap();
    let model = LindbladModel::new(h, vec![(lower, 0.0)]).unwrap();
    let psi0 = StateVector::basis(2, 0).unwrap();
    let grid = TimeGrid::with_steps(0.0, 3.0, 300).unwrap();

    let traj = quantum_jump_trajectory(&model, &psi0, &grid, 7).unwrap();
    assert!(traj.jumps.is_empty());

    // Without jumps the unraveling is plain Schrödinger evolution.
    let hmat = model.hamiltonian().matrix().clone();
    let wave = integrate_schrodinger(move |_| hmat.clone(), &psi0, &grid).unwrap();
    let overlap = traj.states.last().unwrap().overlap(wave.final_state());
    assert!((overlap - 1.0).abs() < 1e-9, "overlap {overlap:.10}");
}

#[test]
fn jump_waiting_times_are_exponential() {
    let gamma = 1.0;
    let model = driven_damped_qubit(0.0, gamma);
    let psi0 = StateVector::basis(2, 1).unwrap();
    let grid = TimeGrid::with_steps(0.0, 14.0 / gamma, 560).unwrap();

    let n_seeds = 10_000u64;
    let mut sum = 0.0;
    let mut count = 0usize;
    for seed in 0..n_seeds {
        let events = jump_events(&model, &psi0, &grid, seed).unwrap();
        if let Some(first) = events.first() {
            sum += first.time;
            count += 1;
        }
    }
    // Essentially every trajectory decays within 14 lifetimes.
    assert!(count as u64 >= n_seeds - 5, "{count} of {n_seeds} trajectories jumped");
    let mean = sum / count as f64;
    assert!(
        (mean - 1.0 / gamma).abs() < 0.03 / gamma,
        "mean waiting time {mean:.4} vs {:.4}",
        1.0 / gamma
    );
}

#[test]
fn branching_ratios_follow_the_rates() {
    // Lambda decay with a 1:2 rate split between the two ground states.
    let h = Operator::hermitian(Array2::<C64>::zeros((3, 3))).unwrap();
    let to_first = Operator::general(matrices::ketbra(3, 1, 0)).unwrap();
    let to_second = Operator::general(matrices::ketbra(3, 2, 0)).unwrap();
    let model = LindbladModel::new(h, vec![(to_first, 1.0), (to_second, 2.0)]).unwrap();
    let psi0 = StateVector::basis(3, 0).unwrap();
    let grid = TimeGrid::with_steps(0.0, 4.0, 160).unwrap();

    let n_seeds = 20_000u64;
    let mut counts = [0usize; 2];
    for seed in 0..n_seeds {
        let events = jump_events(&model, &psi0, &grid, 1000 + seed).unwrap();
        if let Some(first) = events.first() {
            counts[first.channel] += 1;
        }
    }
    let total = (counts[0] + counts[1]) as f64;
    let p0 = counts[0] as f64 / total;
    assert!(
        (p0 - 1.0 / 3.0).abs() < 0.03 * (1.0 / 3.0),
        "channel split {p0:.4} vs 1/3"
    );
}

#[test]
fn jump_ensemble_average_matches_the_master_equation() {
    let model = driven_damped_qubit(1.0, 1.0);
    let psi0 = StateVector::basis(2, 0).unwrap();
    let grid = TimeGrid::with_steps(0.0, 8.0, 400).unwrap();

    let master = integrate_lindblad(&model, &psi0.clone().into_density(), &grid).unwrap();

    let n_seeds = 10_000u64;
    let sample_every = 50usize;
    let n_samples = grid.n_steps() / sample_every + 1;
    let mut acc = vec![0.0f64; n_samples];
    for seed in 0..n_seeds {
        let traj = quantum_jump_trajectory(&model, &psi0, &grid, 31 * seed + 5).unwrap();
        for (slot, idx) in (0..grid.n_steps() + 1).step_by(sample_every).enumerate() {
            acc[slot] += traj.states[idx].probability(1);
        }
    }
    for (slot, idx) in (0..grid.n_steps() + 1).step_by(sample_every).enumerate() {
        let ensemble = acc[slot] / n_seeds as f64;
        let exact = master.states[idx].population(1);
        assert!(
            (ensemble - exact).abs() < 0.02,
            "t={}: ensemble {ensemble:.4} vs master {exact:.4}",
            master.times[idx]
        );
    }
}

#[test]
fn fixed_seed_reproduces_the_jump_record() {
    let model = driven_damped_qubit(0.9, 0.7);
    let psi0 = StateVector::basis(2, 1).unwrap();
    let grid = TimeGrid::with_steps(0.0, 20.0, 800).unwrap();
    let a = jump_events(&model, &psi0, &grid, 424242).unwrap();
    let b = jump_events(&model, &psi0, &grid, 424242).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b.iter()) {
        assert_eq!(x.time.to_bits(), y.time.to_bits());
        assert_eq!(x.channel, y.channel);
    }
}

// ---------------------------------------------------------------------------
// States, operators, tensor structure
// ---------------------------------------------------------------------------

#[test]
fn tensor_product_factorizes_on_product_states() {
    let mut rng = ChaCha12Rng::seed_from_u64(33);
    for _ in 0..10 {
        let (na, nb) = (2 + rng.gen_range(0..3), 2 + rng.gen_range(0..3));
        let a = random_matrix(&mut rng, na);
        let b = random_matrix(&mut rng, nb);
        let psi_a = random_state(&mut rng, na);
        let psi_b = random_state(&mut rng, nb);

        let joint = kron(&a, &b).dot(psi_a.tensor(&psi_b).amplitudes());
        let left = a.dot(psi_a.amplitudes());
        let right = b.dot(psi_b.amplitudes());
        let mut expect = Array1::<C64>::zeros(na * nb);
        for i in 0..na {
            for j in 0..nb {
                expect[i * nb + j] = left[i] * right[j];
            }
        }
        let diff = joint.iter().zip(expect.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12, "factorization broke by {diff:.2e} at dims {na}x{nb}");
    }
}

#[test]
fn partial_trace_recovers_the_factors() {
    let mut rng = ChaCha12Rng::seed_from_u64(44);
    let rho_a = random_density(&mut rng, 2);
    let rho_b = random_density(&mut rng, 3);
    let joint = DensityOperator::new(kron(rho_a.matrix(), rho_b.matrix())).unwrap();
    let back_a = joint.partial_trace(&[2, 3], &[0]).unwrap();
    let back_b = joint.partial_trace(&[2, 3], &[1]).unwrap();
    assert!(max_abs_diff(back_a.matrix(), rho_a.matrix()) < 1e-12);
    assert!(max_abs_diff(back_b.matrix(), rho_b.matrix()) < 1e-12);
}

#[test]
fn partial_trace_of_a_bell_pair_is_maximally_mixed() {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let bell =
        StateVector::new(vec![c(half, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(half, 0.0)]).unwrap();
    let reduced = DensityOperator::from_pure(&bell).partial_trace(&[2, 2], &[0]).unwrap();
    let expect = Array2::<C64>::eye(2).mapv(|z| z * 0.5);
    assert!(max_abs_diff(reduced.matrix(), &expect) < 1e-12);
    assert!((reduced.purity() - 0.5).abs() < 1e-12);
}

#[test]
fn constructors_enforce_the_physical_invariants() {
    // Unnormalized kets are rejected by the strict constructor.
    assert!(StateVector::new(vec![c(1.0, 0.0), c(0.4, 0.0)]).is_err());
    // Hermitian operators must actually be Hermitian.
    let mut skew = Array2::<C64>::zeros((2, 2));
    skew[[0, 1]] = c(0.0, 1.0);
    skew[[1, 0]] = c(0.0, 1.0);
    assert!(Operator::hermitian(skew).is_err());
    // Density operators: trace one, Hermitian, positive.
    let mut bad_trace = Array2::<C64>::eye(2);
    bad_trace[[1, 1]] = c(0.7, 0.0);
    assert!(DensityOperator::new(bad_trace).is_err());
    let mut negative = Array2::<C64>::zeros((2, 2));
    negative[[0, 0]] = c(1.5, 0.0);
    negative[[1, 1]] = c(-0.5, 0.0);
    assert!(DensityOperator::new(negative).is_err());
}

// ---------------------------------------------------------------------------
// Dense linear algebra kernels
// ---------------------------------------------------------------------------

#[test]
fn hermitian_eigendecomposition_reconstructs_the_matrix() {
    let mut rng = ChaCha12Rng::seed_from_u64(55);
    for n in [2usize, 5, 9] {
        let h = random_hermitian(&mut rng, n);
        let (vals, vecs) = linalg::hermitian_eigen(&h).unwrap();
        // V diag(vals) V^dagger == H
        let mut lambda = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            lambda[[i, i]] = c(vals[i], 0.0);
        }
        let rebuilt = vecs.dot(&lambda).dot(&linalg::dagger(&vecs));
        assert!(max_abs_diff(&rebuilt, &h) < 1e-10, "reconstruction failed at n={n}");
        // Columns are orthonormal.
        let gram = linalg::dagger(&vecs).dot(&vecs);
        assert!(max_abs_diff(&gram, &Array2::<C64>::eye(n)) < 1e-10);
        // Eigenvalues ascend.
        for i in 1..n {
            assert!(vals[i] >= vals[i - 1]);
        }
    }
}

#[test]
fn matrix_exponentials_agree_across_kernels() {
    let mut rng = ChaCha12Rng::seed_from_u64(66);
    let h = random_hermitian(&mut rng, 6);
    let minus_i = c(0.0, -1.0);
    let via_eigen = linalg::expm_hermitian(&h, minus_i).unwrap();
    let via_series = linalg::expm(&h.mapv(|z| z * minus_i));
    assert!(max_abs_diff(&via_eigen, &via_series) < 1e-10);
    // Unitarity of exp(-iH).
    let gram = linalg::dagger(&via_eigen).dot(&via_eigen);
    assert!(max_abs_diff(&gram, &Array2::<C64>::eye(6)) < 1e-12);
}

#[test]
fn linear_solve_residual_is_tiny() {
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    let n = 8;
    let mut a = random_matrix(&mut rng, n);
    for i in 0..n {
        a[[i, i]] += c(4.0, 0.0); // keep it comfortably well-conditioned
    }
    let b = Array1::from_shape_fn(n, |_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let x = linalg::solve(&a, &b).unwrap();
    let residual = &a.dot(&x) - &b;
    let worst = residual.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "residual {worst:.2e}");
}

// Small helper so the ensemble test reads naturally.
trait IntoDensity {
    fn into_density(self) -> DensityOperator;
}

impl IntoDensity for StateVector {
    fn into_density(self) -> DensityOperator {
        DensityOperator::from_pure(&self)
    }
}
