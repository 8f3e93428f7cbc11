use std::f64::consts::{FRAC_1_SQRT_2, PI};

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use ns_forge::calibration::{
    coincidence_probability, hom_state, ideal_chain, ns_in_arm, phase_in_arm, BeamSplitter, TwoModeState,
};
use ns_forge::fock::FockVector;
use ns_forge::jc::{jc_evolve, kraus, AtomPrep, DiagonalKraus, JointState};
use ns_forge::metrics::{coeffs, ns_fidelity, objective, success_probability, Step, Triple};
use ns_forge::units::{interaction_time, kappa, PhysicalParams};

const PREPS: [AtomPrep; 2] = [AtomPrep::Ground, AtomPrep::Excited];

fn prep() -> impl Strategy<Value = AtomPrep> {
    prop::sample::select(PREPS.to_vec())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn fock_vector(max_len: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec(complex(), 1..=max_len)
        .prop_filter("non-zero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
        .prop_map(|v| FockVector::new(v).unwrap())
}

fn triple() -> impl Strategy<Value = Triple> {
    [complex(), complex(), complex()]
        .prop_filter("non-zero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6)
}

fn two_mode(cutoff: usize) -> impl Strategy<Value = TwoModeState> {
    prop::collection::vec(complex(), (cutoff + 1) * (cutoff + 1)).prop_map(move |v| {
        let mut s = TwoModeState::zeros(cutoff);
        for na in 0..=cutoff {
            for nb in 0..=cutoff - na {
                s.set(na, nb, v[na * (cutoff + 1) + nb]);
            }
        }
        s
    })
}

fn perm2(m: [[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] + m[0][1] * m[1][0]
}

/// Two-photon output amplitudes of `|1,1⟩` through a splitter with matrix `u`,
/// computed independently with permanents: `⟨m|U|1,1⟩ = per(U_sub)/√(m_a! m_b!)`.
fn two_photon_permanent(u: [[Complex64; 2]; 2]) -> [Complex64; 3] {
    // rows: input modes (a, b); columns: output modes
    let sub = |cols: [usize; 2]| [[u[0][cols[0]], u[0][cols[1]]], [u[1][cols[0]], u[1][cols[1]]]];
    [
        perm2(sub([0, 0])) / 2f64.sqrt(),
        perm2(sub([0, 1])),
        perm2(sub([1, 1])) / 2f64.sqrt(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalize_is_idempotent(v in fock_vector(8)) {
        let once = v.normalize().unwrap();
        let twice = once.normalize().unwrap();
        prop_assert!(once.is_normalized());
        for (x, y) in once.amps().iter().zip(twice.amps()) {
            prop_assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn branch_probability_is_squared_norm(v in fock_vector(6), tau in 0.0..100.0f64, p in prep(), d in prep()) {
        let psi = v.normalize().unwrap();
        let n_max = psi.n_max();
        let k = kraus(p, d, tau, n_max).unwrap();
        let mut raw = vec![Complex64::new(0.0, 0.0); n_max + 1];
        for (n, amp) in psi.amps().iter().enumerate() {
            let target = n as i64 + k.shift() as i64;
            if (0..=n_max as i64).contains(&target) {
                raw[target as usize] += k.coeffs()[n] * amp;
            }
        }
        let expected: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        match psi.apply_diagonal(&k) {
            Ok((out, prob)) => {
                prop_assert!((prob - expected).abs() < 1e-12);
                prop_assert!((out.norm().powi(2) - prob).abs() < 1e-15);
            }
            Err(_) => prop_assert!(expected < 1e-300 || k.shift() == 1),
        }
    }

    #[test]
    fn identity_map_is_a_no_op(v in fock_vector(8)) {
        let psi = v.normalize().unwrap();
        let (out, prob) = psi.apply_diagonal(&DiagonalKraus::identity(psi.n_max())).unwrap();
        prop_assert!((prob - 1.0).abs() < 1e-14);
        for (x, y) in out.amps().iter().zip(psi.amps()) {
            prop_assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn kraus_maps_are_complete(tau in 0.0..500.0f64, p in prep(), n_max in 1usize..12) {
        let kept = kraus(p, p, tau, n_max).unwrap().effect_diagonal();
        let flipped_prep = if p == AtomPrep::Ground { AtomPrep::Excited } else { AtomPrep::Ground };
        let lost = kraus(p, flipped_prep, tau, n_max).unwrap().effect_diagonal();
        for n in 0..=n_max {
            prop_assert!((kept[n] + lost[n] - 1.0).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn branch_probabilities_sum_to_one(v in fock_vector(6), tau in 0.0..100.0f64, p in prep()) {
        // leave the top level empty so the excitation-adding branch is never truncated
        let mut amps = v.amps().to_vec();
        amps.push(Complex64::new(0.0, 0.0));
        let psi = FockVector::new(amps).unwrap().normalize().unwrap();
        let total: f64 = PREPS
            .iter()
            .map(|&d| {
                let k = kraus(p, d, tau, psi.n_max()).unwrap();
                psi.apply_diagonal(&k).map(|(_, prob)| prob).unwrap_or(0.0)
            })
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn magnitudes_are_even_in_tau(tau in 0.0..300.0f64, p in prep()) {
        let a = coeffs(&[Step::heralded(tau, p)]).unwrap();
        let b = coeffs(&[Step::heralded(-tau, p)]).unwrap();
        for i in 0..3 {
            prop_assert!((a[i].norm() - b[i].norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_preserves_norm_and_excitations(
        raw in prop::collection::vec(complex(), 2 * 8),
        tau in 0.0..200.0f64,
        m in 0usize..8,
    ) {
        let mut amps = raw;
        amps.push(Complex64::new(0.0, 0.0));
        amps.push(Complex64::new(0.0, 0.0)); // |n_max, e⟩ stays empty
        let s = JointState::from_amps(amps).unwrap();
        let out = jc_evolve(&s, tau).unwrap();
        prop_assert!((out.norm() - s.norm()).abs() < 1e-12 * s.norm().max(1.0));

        let a = jc_evolve(&s.project_excitations(m), tau).unwrap();
        let b = out.project_excitations(m);
        for (x, y) in a.amps().iter().zip(b.amps()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn fidelity_ignores_scale(a in triple(), c in complex().prop_filter("non-zero", |c| c.norm() > 1e-3)) {
        let scaled = [a[0] * c, a[1] * c, a[2] * c];
        prop_assert!((ns_fidelity(&a).unwrap() - ns_fidelity(&scaled).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn objective_ignores_global_phase(a in triple(), phi in 0.0..(2.0 * PI), w in 0.0..5.0f64) {
        prop_assume!(a[0].norm() > 1e-2);
        let c = Complex64::from_polar(1.0, phi);
        let rotated = [a[0] * c, a[1] * c, a[2] * c];
        let (x, y) = (objective(&a, w).unwrap(), objective(&rotated, w).unwrap());
        prop_assert!((x - y).abs() <= 1e-10 * x.max(1.0));
    }

    #[test]
    fn objective_vanishes_exactly_on_the_target(phi in 0.0..(2.0 * PI), w in 0.1..5.0f64, eps in 1e-4..0.5f64, which in 0usize..3) {
        let c = Complex64::from_polar(1.0, phi);
        let target = [c, c, -c];
        prop_assert!(objective(&target, w).unwrap() < 1e-28);
        prop_assert!((ns_fidelity(&target).unwrap() - 1.0).abs() < 1e-15);
        let mut off = target;
        off[which] *= 1.0 - eps;
        prop_assert!(objective(&off, w).unwrap() > 0.0);
    }

    #[test]
    fn sequence_coefficients_multiply(t1 in 0.0..300.0f64, t2 in 0.0..300.0f64, p1 in prep(), p2 in prep()) {
        let a = coeffs(&[Step::heralded(t1, p1)]).unwrap();
        let b = coeffs(&[Step::heralded(t2, p2)]).unwrap();
        let ab = coeffs(&[Step::heralded(t1, p1), Step::heralded(t2, p2)]).unwrap();
        for i in 0..3 {
            prop_assert!((ab[i] - a[i] * b[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn success_probability_is_monotone(a in triple(), s in 0.0..1.0f64) {
        let max = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let a = [a[0] / max, a[1] / max, a[2] / max];
        let smaller = [a[0] * s, a[1] * s, a[2] * s];
        let psi = FockVector::uniform(2);
        prop_assert!(success_probability(&smaller, &psi).unwrap() <= success_probability(&a, &psi).unwrap() + 1e-15);
    }

    #[test]
    fn beam_splitter_is_unitary(s in two_mode(4)) {
        prop_assume!(s.norm() > 1e-3);
        let out = BeamSplitter::balanced().apply(&s).unwrap();
        prop_assert!((out.norm() - s.norm()).abs() < 1e-12);
    }

    #[test]
    fn ideal_chain_matches_cosine(theta in -10.0..10.0f64) {
        prop_assert!((ideal_chain(theta) - (theta / 2.0).cos().powi(2)).abs() < 1e-12);
        let direct = coincidence_probability(&phase_in_arm(&hom_state(), theta)).unwrap();
        prop_assert_eq!(direct, ideal_chain(theta));
    }

    #[test]
    fn coincidence_does_not_depend_on_splitter_phases(theta in 0.0..(2.0 * PI)) {
        // a† → (a† + i b†)/√2, b† → (i a† + b†)/√2
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
        let u = [[h, ih], [ih, h]];
        let first = two_photon_permanent(u);
        // the conditional phase acts on the doubly occupied b output
        let mid = [first[0], first[1], first[2] * Complex64::from_polar(1.0, theta)];
        // second splitter on the two-photon sector: |2,0⟩, |1,1⟩, |0,2⟩ columns
        let from20 = two_photon_via(u, 2, 0);
        let from11 = two_photon_via(u, 1, 1);
        let from02 = two_photon_via(u, 0, 2);
        let c11 = mid[0] * from20[1] + mid[1] * from11[1] + mid[2] * from02[1];
        prop_assert!((c11.norm_sqr() - ideal_chain(theta)).abs() < 1e-12);
    }

    #[test]
    fn balanced_gate_with_sign_flip_never_coincides(mag in 0.05..1.0f64, a1 in -1.0..1.0f64) {
        let k = DiagonalKraus::from_real(&[mag, a1, -mag], 0).unwrap();
        let (s, _) = ns_in_arm(&hom_state(), &k).unwrap();
        prop_assert!(coincidence_probability(&s).unwrap() < 1e-24);
    }

    #[test]
    fn gate_in_arm_matches_phase_formula(a0 in 0.05..1.0f64, a2 in -1.0..1.0f64) {
        prop_assume!(a2.abs() > 1e-3);
        let k = DiagonalKraus::from_real(&[a0, 0.5, a2], 0).unwrap();
        let (s, branch) = ns_in_arm(&hom_state(), &k).unwrap();
        let expected = (a0 + a2).powi(2) / (2.0 * (a0 * a0 + a2 * a2));
        prop_assert!((coincidence_probability(&s).unwrap() - expected).abs() < 1e-12);
        prop_assert!((branch - (a0 * a0 + a2 * a2) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn interaction_time_inverts_kappa(g in 1e3..1e9f64, omega in 1e3..1e9f64, ratio in 2.0..1e3f64, tau in 0.0..1e3f64) {
        let p = PhysicalParams::new(g, omega, ratio * g.max(omega)).unwrap();
        let t = interaction_time(tau, &p).unwrap();
        prop_assert!((t * kappa(&p).unwrap() - tau).abs() <= 1e-12 * tau.max(1.0));
    }

    #[test]
    fn interaction_time_scales_inversely_with_rates(g in 1e3..1e9f64, omega in 1e3..1e9f64, delta in 1e3..1e12f64, lambda in 0.1..10.0f64) {
        let p = PhysicalParams::new(g, omega, delta).unwrap();
        let q = PhysicalParams::new(lambda * g, lambda * omega, lambda * delta).unwrap();
        let (t, u) = (interaction_time(10.0, &p).unwrap(), interaction_time(10.0, &q).unwrap());
        prop_assert!((u * lambda - t).abs() <= 1e-12 * t);
    }
}

/// Output amplitudes `(|2,0⟩, |1,1⟩, |0,2⟩)` for a two-photon Fock input `|na, nb⟩`.
fn two_photon_via(u: [[Complex64; 2]; 2], na: usize, nb: usize) -> [Complex64; 3] {
    let rows: Vec<usize> = std::iter::repeat_n(0, na).chain(std::iter::repeat_n(1, nb)).collect();
    let norm_in = if na == 1 { 1.0 } else { 2f64.sqrt() };
    let sub = |cols: [usize; 2]| {
        [[u[rows[0]][cols[0]], u[rows[0]][cols[1]]], [u[rows[1]][cols[0]], u[rows[1]][cols[1]]]]
    };
    [
        perm2(sub([0, 0])) / (2f64.sqrt() * norm_in),
        perm2(sub([0, 1])) / norm_in,
        perm2(sub([1, 1])) / (2f64.sqrt() * norm_in),
    ]
}

#[test]
fn permanent_helper_reproduces_the_balanced_splitter() {
    let b = BeamSplitter::balanced();
    let out = b.apply(&TwoModeState::fock(1, 1, 2).unwrap()).unwrap();
    let p = two_photon_permanent(b.matrix);
    assert_abs_diff_eq!((out.get(2, 0) - p[0]).norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!((out.get(1, 1) - p[1]).norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!((out.get(0, 2) - p[2]).norm(), 0.0, epsilon = 1e-15);
    for (na, nb) in [(2, 0), (1, 1), (0, 2)] {
        let direct = b.apply(&TwoModeState::fock(na, nb, 2).unwrap()).unwrap();
        let via = two_photon_via(b.matrix, na, nb);
        assert_abs_diff_eq!((direct.get(2, 0) - via[0]).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((direct.get(1, 1) - via[1]).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((direct.get(0, 2) - via[2]).norm(), 0.0, epsilon = 1e-15);
    }
}
