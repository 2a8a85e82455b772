//! Folding Clifford content out of Pauli-rotation circuits.
//!
//! Every rotation `exp(-iθP/2)` is split into a quarter-turn part
//! `exp(-ikπP/4)` (Clifford) and a remainder. The quarter turns are pushed
//! towards the measurement: each remaining rotation has its generator
//! conjugated by the Clifford parts that precede it physically, and the
//! observable is conjugated by all of them. What is left is a list of
//! non-Clifford rotations acting on the conjugated observable.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Angles this close to a multiple of π/2 are treated as exactly Clifford.
pub const CLIFFORD_TOL: f64 = 1e-12;

/// `exp(-i·angle·generator/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationGate {
    generator: PauliString,
    angle: f64,
}

impl RotationGate {
    pub fn new(generator: PauliString, angle: f64) -> Result<Self> {
        if !generator.is_hermitian() {
            return Err(Error::NotHermitian(generator.to_string()));
        }
        if !angle.is_finite() {
            return Err(Error::NonFiniteAngle(angle));
        }
        Ok(RotationGate { generator, angle })
    }

    pub fn generator(&self) -> &PauliString {
        &self.generator
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn n(&self) -> usize {
        self.generator.n()
    }

    /// Number of quarter turns mod 4 if the angle is a multiple of π/2.
    pub fn quarter_turns(&self) -> Option<u8> {
        quarter_turns(self.angle)
    }

    pub fn is_clifford(&self) -> bool {
        self.quarter_turns().is_some()
    }

    /// Same rotation with the sign of the generator moved into the angle.
    pub(crate) fn normalized(mut self) -> Self {
        if self.generator.phase_exp() == 2 {
            self.generator = self.generator.with_phase(0);
            self.angle = -self.angle;
        }
        self
    }
}

fn quarter_turns(angle: f64) -> Option<u8> {
    let k = (angle / FRAC_PI_2).round();
    if (angle - k * FRAC_PI_2).abs() <= CLIFFORD_TOL {
        Some(k.rem_euclid(4.0) as u8)
    } else {
        None
    }
}

/// `σ ← U†σU` for `U = exp(-ikπP/4)`.
pub(crate) fn conjugate_quarter_in_place(sigma: &mut PauliString, generator: &PauliString, k: u8) {
    let k = k & 3;
    if k == 0 || !sigma.anticommutes(generator).expect("matching qubit counts") {
        return;
    }
    if k == 2 {
        sigma.negate();
        return;
    }
    // cos(kπ/2)σ + i·sin(kπ/2)·Pσ with sin = +1 for k = 1 and -1 for k = 3.
    let prod = generator.multiply(sigma).expect("matching qubit counts");
    let extra = if k == 1 { 1 } else { 3 };
    let phase = prod.phase_exp() + extra;
    *sigma = prod.with_phase(phase);
}

/// Heisenberg conjugation `U†σU` by a Clifford rotation.
pub fn conjugate_pauli(sigma: &PauliString, gate: &RotationGate) -> Result<PauliString> {
    if sigma.n() != gate.n() {
        return Err(Error::Dimension {
            left: sigma.n(),
            right: gate.n(),
        });
    }
    let k = gate.quarter_turns().ok_or_else(|| {
        Error::Contract(format!(
            "conjugate_pauli needs a Clifford angle, got {}",
            gate.angle()
        ))
    })?;
    let mut out = sigma.clone();
    conjugate_quarter_in_place(&mut out, gate.generator(), k);
    Ok(out)
}

/// Splits `theta` into `theta_tilde + k·π/2` with `theta_tilde ∈ [-π/4, π/4]`.
/// On the boundary the positive remainder wins. Clifford angles return an
/// exact zero remainder.
pub fn split_angle(theta: f64) -> Result<(f64, i64)> {
    if !theta.is_finite() {
        return Err(Error::NonFiniteAngle(theta));
    }
    let k = (theta / FRAC_PI_2).round();
    if (theta - k * FRAC_PI_2).abs() <= CLIFFORD_TOL {
        return Ok((0.0, k as i64));
    }
    let k = (theta / FRAC_PI_2 - 0.5).ceil();
    let mut tilde = theta - k * FRAC_PI_2;
    // Rounding can land a hair outside the interval.
    tilde = tilde.clamp(-FRAC_PI_4, FRAC_PI_4);
    Ok((tilde, k as i64))
}

/// Only half turns are folded out, leaving `theta_tilde ∈ (-π/2, π/2]`.
fn split_angle_half_turns(theta: f64) -> Result<(f64, i64)> {
    let (tilde, k) = split_angle(theta)?;
    if tilde == 0.0 || k % 2 == 0 {
        return Ok((tilde, k));
    }
    // Undo the odd quarter turn, moving towards zero.
    let (tilde, k) = if tilde > 0.0 {
        (tilde - FRAC_PI_2, k + 1)
    } else {
        (tilde + FRAC_PI_2, k - 1)
    };
    Ok((tilde, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldOptions {
    /// Move the nearest quarter-turn multiple of every angle into the Clifford
    /// part, so remainders lie in `[-π/4, π/4]`. When off, only half turns
    /// are folded and remainders lie in `(-π/2, π/2)`.
    pub angle_transform: bool,
}

impl Default for FoldOptions {
    fn default() -> Self {
        FoldOptions {
            angle_transform: true,
        }
    }
}

/// A circuit with all Clifford content absorbed.
///
/// `rotations` is in Heisenberg consumption order: the first entry is the one
/// applied to the observable first, i.e. the physically last non-Clifford
/// gate.
#[derive(Debug, Clone)]
pub struct FoldedCircuit {
    pub n: usize,
    pub rotations: Vec<RotationGate>,
    pub observable_terms: Vec<(f64, PauliString)>,
    /// Number of gates that carried a nonzero quarter-turn part.
    pub clifford_count: usize,
}

impl FoldedCircuit {
    /// One circuit per observable term, all sharing the rotation list.
    pub fn split_terms(&self) -> Vec<FoldedCircuit> {
        self.observable_terms
            .iter()
            .map(|term| FoldedCircuit {
                n: self.n,
                rotations: self.rotations.clone(),
                observable_terms: vec![term.clone()],
                clifford_count: self.clifford_count,
            })
            .collect()
    }
}

pub fn fold(circuit: &[RotationGate], observable: &[(f64, PauliString)]) -> Result<FoldedCircuit> {
    fold_with(circuit, observable, FoldOptions::default())
}

/// `circuit` is in physical order: the first gate acts on the state first.
pub fn fold_with(
    circuit: &[RotationGate],
    observable: &[(f64, PauliString)],
    opts: FoldOptions,
) -> Result<FoldedCircuit> {
    let n = observable
        .first()
        .map(|(_, p)| p.n())
        .or_else(|| circuit.first().map(RotationGate::n))
        .ok_or_else(|| Error::Observable("empty observable and empty circuit".into()))?;
    for (_, p) in observable {
        check_n(n, p.n())?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
    }

    let mut cliffords: Vec<(&PauliString, u8)> = Vec::new();
    let mut rotations = Vec::new();
    for gate in circuit {
        check_n(n, gate.n())?;
        let (tilde, k) = if opts.angle_transform {
            split_angle(gate.angle())?
        } else {
            split_angle_half_turns(gate.angle())?
        };
        if tilde != 0.0 {
            let mut generator = gate.generator().clone();
            for &(g, q) in cliffords.iter().rev() {
                conjugate_quarter_in_place(&mut generator, g, q);
            }
            rotations.push(RotationGate::new(generator, tilde)?.normalized());
        }
        let q = k.rem_euclid(4) as u8;
        if q != 0 {
            cliffords.push((gate.generator(), q));
        }
    }

    let observable_terms = observable
        .iter()
        .map(|(c, p)| {
            let mut p = p.clone();
            for &(g, q) in cliffords.iter().rev() {
                conjugate_quarter_in_place(&mut p, g, q);
            }
            (*c, p)
        })
        .collect();

    rotations.reverse();
    Ok(FoldedCircuit {
        n,
        rotations,
        observable_terms,
        clifford_count: cliffords.len(),
    })
}

fn check_n(n: usize, other: usize) -> Result<()> {
    if n != other {
        return Err(Error::Dimension {
            left: n,
            right: other,
        });
    }
    Ok(())
}
