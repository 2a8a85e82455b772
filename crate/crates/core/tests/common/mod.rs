#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use spd::circuits::{build_circuit, KickedIsingSpec, LatticeSpec};
use spd::{Pauli, PauliString, RotationGate};

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(l: Pauli) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match l {
        Pauli::I => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Dense `2^n × 2^n` matrix; qubit 0 is the least significant index bit, so
/// the Kronecker product runs from qubit `n-1` down to qubit 0.
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    let mut m = letter_matrix(p.letter(p.n() - 1));
    for q in (0..p.n() - 1).rev() {
        m = m.kronecker(&letter_matrix(p.letter(q)));
    }
    let phase = match p.phase_exp() {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    m * phase
}

/// `exp(-iθP/2)` by general matrix exponentiation.
pub fn rotation_matrix(g: &RotationGate) -> CMatrix {
    (pauli_matrix(g.generator()) * c(0.0, -g.angle() / 2.0)).exp()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn random_letter(rng: &mut impl Rng) -> Pauli {
    [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)]
}

/// Uniform over letters, with a random phase.
pub fn random_pauli(rng: &mut impl Rng, n: usize) -> PauliString {
    let letters: Vec<Pauli> = (0..n).map(|_| random_letter(rng)).collect();
    PauliString::from_letters(&letters).with_phase(rng.gen_range(0..4))
}

/// Non-identity Hermitian string of weight at most `max_weight`, sign random.
pub fn random_hermitian(rng: &mut impl Rng, n: usize, max_weight: usize) -> PauliString {
    let w = rng.gen_range(1..=max_weight.min(n));
    let mut p = PauliString::identity(n);
    let mut placed = 0;
    while placed < w {
        let q = rng.gen_range(0..n);
        if p.letter(q) == Pauli::I {
            p.set(q, [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)]).unwrap();
            placed += 1;
        }
    }
    if rng.gen_bool(0.5) {
        p.negate();
    }
    p
}

/// Mixture of generic, exactly Clifford and near-Clifford angles.
pub fn random_angle(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.gen();
    if u < 0.2 {
        rng.gen_range(-4i32..=4) as f64 * FRAC_PI_2
    } else if u < 0.3 {
        rng.gen_range(-4i32..=4) as f64 * FRAC_PI_2 + rng.gen_range(-1e-3..1e-3)
    } else {
        rng.gen_range(-PI..PI)
    }
}

pub fn random_rotation_circuit(rng: &mut impl Rng, n: usize, gates: usize) -> Vec<RotationGate> {
    (0..gates)
        .map(|_| RotationGate::new(random_hermitian(rng, n, 3), random_angle(rng)).unwrap())
        .collect()
}

pub fn z_on(n: usize, q: usize) -> PauliString {
    PauliString::single(n, q, Pauli::Z).unwrap()
}

/// Connected graph with maximum degree 3, like a heavy-hex fragment: a
/// random spanning tree plus up to `n / 3` extra edges.
pub fn random_sparse_lattice(rng: &mut impl Rng, n: usize) -> LatticeSpec {
    let mut deg = vec![0usize; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for q in 1..n {
        let open: Vec<usize> = (0..q).filter(|&p| deg[p] < 3).collect();
        let p = open[rng.gen_range(0..open.len())];
        edges.push((p, q));
        deg[p] += 1;
        deg[q] += 1;
    }
    for _ in 0..n / 3 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let fresh = !edges.contains(&(a.min(b), a.max(b)));
        if a != b && fresh && deg[a] < 3 && deg[b] < 3 {
            edges.push((a.min(b), a.max(b)));
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    LatticeSpec::new(n, edges).unwrap()
}

pub fn kicked_ising(lattice: &LatticeSpec, t: usize, theta_h: f64, extra_rx_layer: bool) -> Vec<RotationGate> {
    build_circuit(&KickedIsingSpec {
        lattice: lattice.clone(),
        t,
        theta_h,
        extra_rx_layer,
    })
    .unwrap()
}
