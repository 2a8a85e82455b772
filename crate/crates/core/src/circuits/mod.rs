//! Kicked-Ising circuits and the observables measured on them.

mod lattice;

use std::f64::consts::FRAC_PI_2;

pub use lattice::LatticeSpec;

use crate::clifford::RotationGate;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Angle of every `Z_i Z_j` rotation in the entangling layer, so each factor
/// is `exp(+iπ/4 Z_i Z_j)`.
pub const ZZ_ANGLE: f64 = -FRAC_PI_2;

#[derive(Debug, Clone)]
pub struct KickedIsingSpec {
    pub lattice: LatticeSpec,
    /// Trotter steps.
    pub t: usize,
    pub theta_h: f64,
    /// Append one more `R_X(θ_h)` layer after the last `R_ZZ` layer.
    pub extra_rx_layer: bool,
}

/// `t` repetitions of an `R_X(θ_h)` layer followed by an `R_ZZ` layer, in
/// physical order. Within a layer gates are ordered by qubit / edge index.
pub fn build_circuit(spec: &KickedIsingSpec) -> Result<Vec<RotationGate>> {
    if !spec.theta_h.is_finite() {
        return Err(Error::NonFiniteAngle(spec.theta_h));
    }
    let n = spec.lattice.n();
    let rx: Vec<RotationGate> = (0..n)
        .map(|q| RotationGate::new(PauliString::single(n, q, Pauli::X)?, spec.theta_h))
        .collect::<Result<_>>()?;
    let rzz: Vec<RotationGate> = spec
        .lattice
        .edges()
        .iter()
        .map(|&(a, b)| {
            let mut p = PauliString::single(n, a, Pauli::Z)?;
            p.set(b, Pauli::Z)?;
            RotationGate::new(p, ZZ_ANGLE)
        })
        .collect::<Result<_>>()?;

    let mut circuit = Vec::with_capacity(spec.t * (rx.len() + rzz.len()) + rx.len());
    for _ in 0..spec.t {
        circuit.extend_from_slice(&rx);
        circuit.extend_from_slice(&rzz);
    }
    if spec.extra_rx_layer {
        circuit.extend_from_slice(&rx);
    }
    Ok(circuit)
}

/// `Mz`, `Z_q:<index>` or `custom:<pauli text>`.
pub fn observable_preset(name: &str, lattice: &LatticeSpec) -> Result<Vec<(f64, PauliString)>> {
    let n = lattice.n();
    if name == "Mz" {
        let w = 1.0 / n as f64;
        return (0..n)
            .map(|q| Ok((w, PauliString::single(n, q, Pauli::Z)?)))
            .collect();
    }
    if let Some(idx) = name.strip_prefix("Z_q:") {
        let q: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::Observable(format!("bad qubit index in {name:?}")))?;
        if q >= n {
            return Err(Error::Observable(format!("qubit {q} out of range for n = {n}")));
        }
        return Ok(vec![(1.0, PauliString::single(n, q, Pauli::Z)?)]);
    }
    if let Some(text) = name.strip_prefix("custom:") {
        let p = PauliString::parse(text, n)?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        return Ok(vec![(1.0, p)]);
    }
    Err(Error::Observable(format!(
        "unknown observable preset {name:?} (expected Mz, Z_q:<index> or custom:<pauli>)"
    )))
}

/// One `coefficient <TAB> pauli-text` per line; `#` comments and blank lines
/// are skipped. Without a tab the first whitespace separates the fields.
pub fn parse_observable(text: &str, n: usize) -> Result<Vec<(f64, PauliString)>> {
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (coeff, pauli) = line
            .split_once('\t')
            .or_else(|| line.split_once(char::is_whitespace))
            .ok_or_else(|| Error::Observable(format!("line {}: expected coefficient and Pauli", i + 1)))?;
        let coeff: f64 = coeff
            .trim()
            .parse()
            .map_err(|_| Error::Observable(format!("line {}: bad coefficient {coeff:?}", i + 1)))?;
        let p = PauliString::parse(pauli, n)?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        terms.push((coeff, p));
    }
    if terms.is_empty() {
        return Err(Error::Observable("observable file has no terms".into()));
    }
    Ok(terms)
}
