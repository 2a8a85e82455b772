//! Brute-force statevector simulation, used as ground truth for the sparse
//! propagator on small instances.
//!
//! Basis index bit `q` is the computational-basis value of qubit `q`.

use num_complex::Complex64;

use crate::clifford::RotationGate;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Action of a Pauli string on basis states: `P|b⟩ = f(b)·|b ⊕ x⟩` with
/// `f(b) = i^c · (-1)^{|z ∧ b|}`.
struct BasisAction {
    x: u64,
    z: u64,
    base: Complex64,
}

impl BasisAction {
    fn new(p: &PauliString) -> Self {
        let x = p.x_words()[0];
        let z = p.z_words()[0];
        // Y = iXZ: each Y letter adds a factor i on top of X^x Z^z.
        let c = (p.phase_exp() as u32 + (x & z).count_ones()) & 3;
        let base = match c {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        BasisAction { x, z, base }
    }

    #[inline]
    fn factor(&self, b: u64) -> Complex64 {
        if (self.z & b).count_ones() & 1 == 1 {
            -self.base
        } else {
            self.base
        }
    }
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() || n == 0 || n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: n,
            });
        }
        Ok(())
    }

    /// `|ψ⟩ ← exp(-iθP/2)|ψ⟩ = cos(θ/2)|ψ⟩ - i sin(θ/2) P|ψ⟩`.
    pub fn apply_rotation(&mut self, gate: &RotationGate) -> Result<()> {
        self.check(gate.n())?;
        let act = BasisAction::new(gate.generator());
        let (s, c) = (gate.angle() / 2.0).sin_cos();
        let mis = Complex64::new(0.0, -s);
        if act.x == 0 {
            for (b, a) in self.amps.iter_mut().enumerate() {
                *a *= c + mis * act.factor(b as u64);
            }
            return Ok(());
        }
        // Pairs (b, b ⊕ x) visited once, from the member with the top bit of
        // x clear.
        let top = 1u64 << (63 - act.x.leading_zeros());
        for b in 0..self.amps.len() as u64 {
            if b & top != 0 {
                continue;
            }
            let b2 = b ^ act.x;
            let (a0, a1) = (self.amps[b as usize], self.amps[b2 as usize]);
            // (P ψ)[b2] = f(b) ψ[b], (P ψ)[b] = f(b2) ψ[b2].
            self.amps[b as usize] = c * a0 + mis * act.factor(b2) * a1;
            self.amps[b2 as usize] = c * a1 + mis * act.factor(b) * a0;
        }
        Ok(())
    }

    /// Applies gates in physical order.
    pub fn apply_circuit(&mut self, circuit: &[RotationGate]) -> Result<()> {
        circuit.iter().try_for_each(|g| self.apply_rotation(g))
    }

    /// `⟨ψ|P|ψ⟩`, complex in general.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64> {
        self.check(p.n())?;
        let act = BasisAction::new(p);
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in self.amps.iter().enumerate() {
            let b = b as u64;
            acc += self.amps[(b ^ act.x) as usize].conj() * act.factor(b) * a;
        }
        Ok(acc)
    }

    /// `Σ c·⟨ψ|σ|ψ⟩` over Hermitian terms.
    pub fn expectation(&self, terms: &[(f64, PauliString)]) -> Result<f64> {
        let mut total = 0.0;
        for (c, p) in terms {
            if !p.is_hermitian() {
                return Err(Error::NotHermitian(p.to_string()));
            }
            total += c * self.pauli_expectation(p)?.re;
        }
        Ok(total)
    }
}

/// `⟨0|U† O U|0⟩` for a circuit in physical order.
pub fn expectation(circuit: &[RotationGate], observable: &[(f64, PauliString)]) -> Result<f64> {
    let n = observable
        .first()
        .map(|(_, p)| p.n())
        .or_else(|| circuit.first().map(RotationGate::n))
        .ok_or_else(|| Error::Observable("empty observable and empty circuit".into()))?;
    let mut psi = StateVector::zero(n)?;
    psi.apply_circuit(circuit)?;
    psi.expectation(observable)
}
