mod common;

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use common::{random_hermitian, random_rotation_circuit, z_on};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spd::circuits::{observable_preset, LatticeSpec};
use spd::oracle;
use spd::{fold, run, run_sum, PauliString, RotationGate, SparseObservable, SpdConfig};

fn spd_value(circuit: &[RotationGate], obs: &[(f64, PauliString)], cfg: &SpdConfig) -> f64 {
    let f = fold(circuit, obs).unwrap();
    run_sum(&f.split_terms(), cfg).unwrap().0
}

fn kicked_ising(lattice: &LatticeSpec, t: usize, theta_h: f64) -> Vec<RotationGate> {
    common::kicked_ising(lattice, t, theta_h, false)
}

fn random_lattice(rng: &mut impl Rng, n: usize) -> LatticeSpec {
    match rng.gen_range(0..3) {
        0 => LatticeSpec::chain(n).unwrap(),
        1 if n >= 3 => LatticeSpec::ring(n).unwrap(),
        _ => common::random_sparse_lattice(rng, n),
    }
}

#[test]
fn unbounded_spd_matches_oracle_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..24 {
        let n = rng.gen_range(1..=8);
        let gates = rng.gen_range(1..=3) * n;
        let circuit = random_rotation_circuit(&mut rng, n, gates);
        let obs = vec![(1.0, random_hermitian(&mut rng, n, 3)), (0.5, z_on(n, 0))];
        let want = oracle::expectation(&circuit, &obs).unwrap();
        let got = spd_value(&circuit, &obs, &SpdConfig::unbounded());
        assert!((got - want).abs() < 1e-10, "case {case}: {got} vs {want}");
    }
}

#[test]
fn unbounded_spd_matches_oracle_on_kicked_ising() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for case in 0..24 {
        let n = rng.gen_range(2..=10);
        let t = rng.gen_range(1..=4);
        let lattice = random_lattice(&mut rng, n);
        let theta_h = rng.gen_range(0.0..FRAC_PI_2);
        let circuit = kicked_ising(&lattice, t, theta_h);
        let obs = if case % 2 == 0 {
            observable_preset("Mz", &lattice).unwrap()
        } else {
            vec![(1.0, random_hermitian(&mut rng, n, 3))]
        };
        let want = oracle::expectation(&circuit, &obs).unwrap();
        let got = spd_value(&circuit, &obs, &SpdConfig::unbounded());
        assert!((got - want).abs() < 1e-10, "case {case} n={n} t={t}: {got} vs {want}");
    }
}

#[test]
fn pinned_small_instances() {
    let chain6 = LatticeSpec::chain(6).unwrap();
    let c = kicked_ising(&chain6, 3, 0.7);
    let obs = vec![(1.0, z_on(6, 2))];
    let want = oracle::expectation(&c, &obs).unwrap();
    assert!((spd_value(&c, &obs, &SpdConfig::unbounded()) - want).abs() < 1e-10);

    let chain4 = LatticeSpec::chain(4).unwrap();
    let c = kicked_ising(&chain4, 2, 0.5);
    let mz = observable_preset("Mz", &chain4).unwrap();
    let want = oracle::expectation(&c, &mz).unwrap();
    assert!((spd_value(&c, &mz, &SpdConfig::unbounded()) - want).abs() < 1e-10);

    // A single qubit with no couplings sees five X rotations: cos(5θ).
    let one = LatticeSpec::new(1, []).unwrap();
    let c = kicked_ising(&one, 5, 0.3);
    let got = spd_value(&c, &[(1.0, z_on(1, 0))], &SpdConfig::unbounded());
    assert!((got - 1.5f64.cos()).abs() < 1e-12);
    assert!((got - 0.070737).abs() < 1e-6);

    let c = kicked_ising(&chain6, 4, 0.0);
    let mz = observable_preset("Mz", &chain6).unwrap();
    assert_eq!(spd_value(&c, &mz, &SpdConfig::truncated(2)), 1.0);
}

#[test]
fn order_stays_within_cutoff_after_every_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..10 {
        let n = rng.gen_range(4..=10);
        let k = rng.gen_range(0..=4);
        let cfg = SpdConfig::truncated(k);
        let lattice = random_lattice(&mut rng, n);
        let circuit = kicked_ising(&lattice, 3, rng.gen_range(0.1..1.4));
        let f = fold(&circuit, &[(1.0, z_on(n, rng.gen_range(0..n)))]).unwrap();
        let mut obs = SparseObservable::from_terms(&f.observable_terms).unwrap();
        for g in &f.rotations {
            let stats = obs.apply_rotation(g, &cfg).unwrap();
            obs.check_invariants(Some(k)).unwrap();
            assert!(obs.max_order().unwrap_or(0) <= k);
            assert_eq!(stats.terms_after, obs.len());
        }
    }
}

#[test]
fn coefficients_stay_bounded_by_norm() {
    // For a single Pauli observable the squared coefficients sum to one
    // without truncation (orthogonality of the Pauli basis).
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..10 {
        let n = rng.gen_range(2..=8);
        let circuit = random_rotation_circuit(&mut rng, n, 2 * n);
        let f = fold(&circuit, &[(1.0, random_hermitian(&mut rng, n, 3))]).unwrap();
        let mut obs = SparseObservable::from_terms(&f.observable_terms).unwrap();
        for g in &f.rotations {
            obs.apply_rotation(g, &SpdConfig::unbounded()).unwrap();
        }
        let norm: f64 = obs.iter().map(|(_, c, _)| c * c).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn runs_are_deterministic() {
    let lattice = LatticeSpec::heavy_hex(1).unwrap();
    let circuit = kicked_ising(&lattice, 3, 0.4);
    let obs = observable_preset("Mz", &lattice).unwrap();
    let f = fold(&circuit, &obs).unwrap();
    let cfg = SpdConfig::truncated(4);
    let (a, sa) = run_sum(&f.split_terms(), &cfg).unwrap();
    let (b, sb) = run_sum(&f.split_terms(), &cfg).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
    assert_eq!((sa.peak_terms, sa.final_terms), (sb.peak_terms, sb.final_terms));
}

#[test]
fn clifford_points_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for n in [3, 6, 9, 12] {
        let lattice = random_lattice(&mut rng, n);
        for theta_h in [0.0, FRAC_PI_2] {
            let circuit = kicked_ising(&lattice, 4, theta_h);
            let mut observables = vec![observable_preset("Mz", &lattice).unwrap()];
            for _ in 0..5 {
                observables.push(vec![(1.0, random_hermitian(&mut rng, n, 4))]);
            }
            for obs in observables {
                let f = fold(&circuit, &obs).unwrap();
                assert!(f.rotations.is_empty());
                let want = oracle::expectation(&circuit, &obs).unwrap();
                let got = run_sum(&f.split_terms(), &SpdConfig::truncated(0)).unwrap().0;
                assert!((got - want).abs() < 1e-12, "n={n} θ={theta_h}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn stats_reconcile_on_truncated_runs() {
    let lattice = LatticeSpec::chain(10).unwrap();
    let circuit = kicked_ising(&lattice, 4, 0.9);
    let f = fold(&circuit, &[(1.0, z_on(10, 5))]).unwrap();
    for k in [0, 2, 5] {
        let (_, stats) = run(&f, &SpdConfig::truncated(k)).unwrap();
        assert!(stats.reconciles());
        assert_eq!(stats.gate_count, f.rotations.len());
        assert!(stats.peak_terms >= stats.final_terms);
    }
}

/// Straightforward staged update keyed by the dense text of each string.
fn naive_run(f: &spd::FoldedCircuit, k_max: Option<u32>) -> HashMap<String, (f64, u32)> {
    let mut terms: HashMap<String, (PauliString, f64, u32)> = HashMap::new();
    for (c, p) in &f.observable_terms {
        let c = if p.phase_exp() == 2 { -c } else { *c };
        let p = p.clone().with_phase(0);
        terms.entry(p.to_string()).or_insert((p, 0.0, 0)).1 += c;
    }
    for gate in &f.rotations {
        let g = gate.generator();
        let theta = if g.phase_exp() == 2 { -gate.angle() } else { gate.angle() };
        let g = g.clone().with_phase(0);
        let (sin, cos) = theta.sin_cos();
        let mut next: HashMap<String, (PauliString, f64, u32)> = HashMap::new();
        let mut add = |p: PauliString, c: f64, k: u32| {
            let e = next.entry(p.to_string()).or_insert((p, 0.0, k));
            e.1 += c;
            e.2 = e.2.min(k);
        };
        for (p, a, k) in terms.values() {
            if !p.anticommutes(&g).unwrap() {
                add(p.clone(), *a, *k);
                continue;
            }
            add(p.clone(), cos * a, *k);
            let prod = g.multiply(p).unwrap();
            let partner = prod.clone().with_phase(0);
            let c = if prod.phase_exp() == 1 { -sin * a } else { sin * a };
            let exists = terms.contains_key(&partner.to_string());
            if exists || k_max.is_none_or(|m| k + 1 <= m) {
                add(partner, c, k + 1);
            }
        }
        next.retain(|_, (_, c, _)| *c != 0.0);
        terms = next;
    }
    terms.into_iter().map(|(s, (_, c, k))| (s, (c, k))).collect()
}

#[test]
fn truncated_engine_matches_naive_staged_update() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for case in 0..40 {
        let n = rng.gen_range(2..=8);
        let gates = rng.gen_range(n..=4 * n);
        let circuit = random_rotation_circuit(&mut rng, n, gates);
        let f = fold(&circuit, &[(1.0, random_hermitian(&mut rng, n, 3))]).unwrap();
        let k = if case % 5 == 0 { None } else { Some(rng.gen_range(0..=4)) };
        let cfg = SpdConfig {
            max_order: k,
            ..SpdConfig::unbounded()
        };
        let mut obs = SparseObservable::from_terms(&f.observable_terms).unwrap();
        for g in &f.rotations {
            obs.apply_rotation(g, &cfg).unwrap();
        }
        let want = naive_run(&f, k);
        assert_eq!(obs.len(), want.len(), "case {case}");
        for (p, c, order) in obs.iter() {
            let (wc, wk) = want[&p.to_string()];
            assert!((c - wc).abs() < 1e-12, "case {case} {p}: {c} vs {wc}");
            assert_eq!(order, wk, "case {case} {p}");
        }
    }
}
