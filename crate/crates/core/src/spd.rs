//! Sparse Pauli dynamics.
//!
//! The Heisenberg-evolved observable is kept as a set of Pauli letter
//! strings, each with a real coefficient and a creation order `k`. A rotation
//! `exp(-iθP/2)` leaves terms commuting with `P` alone and mixes each
//! anticommuting term `σ` with its partner `Pσ`:
//!
//! ```text
//! a'(σ)  = cos θ · a(σ) + i sin θ · a(Pσ)      (phases of Pσ folded in)
//! ```
//!
//! A partner that does not exist yet is created with order `k(σ) + 1`, and
//! dropped on the spot if that exceeds the truncation order `K`.
//!
//! Stored strings always carry phase 0 (they are Hermitian letter strings),
//! so every sign lives in the coefficient. Products of anticommuting
//! Hermitian strings are `±i` times a Hermitian string, which makes the
//! factor `i · i^m` in the update real; coefficients therefore stay exactly
//! real and are stored as `f64`.
//!
//! Storage is column-wise: packed keys (`x` words then `z` words) in one
//! flat vector, coefficients and orders alongside, and a hash table of row
//! indices on top.

use std::hash::Hasher;
use std::time::Instant;

use hashbrown::HashTable;
use rustc_hash::FxHasher;
use serde::{Deserialize, Serialize};

use crate::clifford::{FoldedCircuit, RotationGate};
use crate::error::{Error, Result};
use crate::pauli::{anticommute_words, product_phase_words, word_count, PauliString};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdConfig {
    /// Maximum truncation order `K`; `None` keeps every term.
    pub max_order: Option<u32>,
    /// Terms whose magnitude drops below this are removed at gate end.
    /// Zero disables pruning.
    pub prune_threshold: f64,
    /// Abort with [`Error::TermBudget`] instead of growing past this many
    /// terms. `None` means no limit.
    pub max_terms: Option<usize>,
}

impl Default for SpdConfig {
    fn default() -> Self {
        SpdConfig {
            max_order: None,
            prune_threshold: 0.0,
            max_terms: None,
        }
    }
}

impl SpdConfig {
    pub fn truncated(k: u32) -> Self {
        SpdConfig {
            max_order: Some(k),
            ..Default::default()
        }
    }

    pub fn unbounded() -> Self {
        Self::default()
    }

    #[inline]
    fn keeps(&self, order: u32) -> bool {
        self.max_order.is_none_or(|k| order <= k)
    }
}

/// Bookkeeping for one gate application.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GateStats {
    pub terms_before: usize,
    /// New basis elements inserted.
    pub created: usize,
    /// New basis elements rejected by the order cutoff.
    pub discarded: usize,
    /// Terms removed at gate end (exact zeros, or below the prune threshold).
    pub purged: usize,
    pub terms_after: usize,
    pub seconds: f64,
}

impl GateStats {
    /// Largest size reached while the gate was being applied.
    pub fn transient_peak(&self) -> usize {
        self.terms_before + self.created
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub peak_terms: usize,
    pub final_terms: usize,
    pub gate_count: usize,
    pub wall_time_seconds: f64,
    #[serde(skip)]
    pub initial_terms: usize,
    #[serde(skip)]
    pub gates: Vec<GateStats>,
}

impl RunStats {
    /// True when the per-gate records account for every change in size.
    pub fn reconciles(&self) -> bool {
        let mut size = self.initial_terms;
        for g in &self.gates {
            if g.terms_before != size || g.terms_after != size + g.created - g.purged {
                return false;
            }
            size = g.terms_after;
        }
        size == self.final_terms
    }
}

#[inline]
fn hash_key(key: &[u64]) -> u64 {
    let mut h = FxHasher::default();
    for &w in key {
        h.write_u64(w);
    }
    h.finish()
}

#[derive(Debug, Clone)]
pub struct SparseObservable {
    n: usize,
    words: usize,
    /// `2 * words` entries per term.
    keys: Vec<u64>,
    coeffs: Vec<f64>,
    orders: Vec<u32>,
    index: HashTable<u32>,
    /// Union of the supports of all terms ever stored; a superset is enough
    /// to skip gates that cannot touch anything.
    support: Vec<u64>,
}

impl SparseObservable {
    pub fn new(n: usize) -> Self {
        let words = word_count(n);
        SparseObservable {
            n,
            words,
            keys: Vec::new(),
            coeffs: Vec::new(),
            orders: Vec::new(),
            index: HashTable::new(),
            support: vec![0; words],
        }
    }

    /// Every term starts at order 0. Repeated strings are merged.
    pub fn from_terms(terms: &[(f64, PauliString)]) -> Result<Self> {
        let n = terms
            .first()
            .map(|(_, p)| p.n())
            .ok_or_else(|| Error::Observable("no terms".into()))?;
        let mut obs = Self::new(n);
        for (c, p) in terms {
            obs.add_term(*c, p, 0)?;
        }
        obs.retain(|c| c != 0.0);
        Ok(obs)
    }

    /// Adds `coeff · p` with the given order; merging keeps the smaller order.
    pub fn add_term(&mut self, coeff: f64, p: &PauliString, order: u32) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: p.n(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        if !coeff.is_finite() {
            return Err(Error::Observable(format!("non-finite coefficient {coeff}")));
        }
        let coeff = if p.phase_exp() == 2 { -coeff } else { coeff };
        let key = Self::key_of(p);
        for (s, (x, z)) in self.support.iter_mut().zip(p.x_words().iter().zip(p.z_words())) {
            *s |= x | z;
        }
        match self.find(&key) {
            Some(i) => {
                self.coeffs[i] += coeff;
                self.orders[i] = self.orders[i].min(order);
            }
            None => self.push(&key, coeff, order),
        }
        Ok(())
    }

    #[inline]
    fn stride(&self) -> usize {
        2 * self.words
    }

    #[inline]
    fn key(&self, i: usize) -> &[u64] {
        let s = self.stride();
        &self.keys[i * s..(i + 1) * s]
    }

    fn key_of(p: &PauliString) -> Vec<u64> {
        p.x_words().iter().chain(p.z_words()).copied().collect()
    }

    fn string_of(&self, key: &[u64]) -> PauliString {
        let (x, z) = key.split_at(self.words);
        PauliString::from_words(self.n, x, z, 0).expect("keys are built from valid strings")
    }

    #[inline]
    fn find(&self, key: &[u64]) -> Option<usize> {
        let s = self.stride();
        let keys = &self.keys;
        self.index
            .find(hash_key(key), |&i| &keys[i as usize * s..(i as usize + 1) * s] == key)
            .map(|&i| i as usize)
    }

    /// Appends a key known to be absent.
    #[inline]
    fn push(&mut self, key: &[u64], coeff: f64, order: u32) {
        let s = self.stride();
        let i = u32::try_from(self.coeffs.len()).expect("more than 2^32 terms");
        self.keys.extend_from_slice(key);
        self.coeffs.push(coeff);
        self.orders.push(order);
        let keys = &self.keys;
        self.index.insert_unique(hash_key(key), i, |&j| {
            hash_key(&keys[j as usize * s..(j as usize + 1) * s])
        });
    }

    /// Keeps the terms whose coefficient passes `keep`, preserving order, and
    /// rebuilds the index if anything was removed. Returns the number removed.
    fn retain(&mut self, keep: impl Fn(f64) -> bool) -> usize {
        let s = self.stride();
        let len = self.coeffs.len();
        let mut w = 0;
        for r in 0..len {
            if !keep(self.coeffs[r]) {
                continue;
            }
            if w != r {
                self.keys.copy_within(r * s..(r + 1) * s, w * s);
                self.coeffs[w] = self.coeffs[r];
                self.orders[w] = self.orders[r];
            }
            w += 1;
        }
        if w == len {
            return 0;
        }
        self.keys.truncate(w * s);
        self.coeffs.truncate(w);
        self.orders.truncate(w);
        self.index.clear();
        let keys = &self.keys;
        for i in 0..w {
            let h = hash_key(&keys[i * s..(i + 1) * s]);
            self.index.insert_unique(h, i as u32, |&j| {
                hash_key(&keys[j as usize * s..(j as usize + 1) * s])
            });
        }
        len - w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of the letter string of `p`, ignoring its phase.
    pub fn coefficient(&self, p: &PauliString) -> Option<f64> {
        self.find(&Self::key_of(p)).map(|i| self.coeffs[i])
    }

    pub fn order(&self, p: &PauliString) -> Option<u32> {
        self.find(&Self::key_of(p)).map(|i| self.orders[i])
    }

    pub fn max_order(&self) -> Option<u32> {
        self.orders.iter().copied().max()
    }

    /// `(string, coefficient, order)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliString, f64, u32)> + '_ {
        (0..self.len()).map(|i| (self.string_of(self.key(i)), self.coeffs[i], self.orders[i]))
    }

    /// Heisenberg update by a non-Clifford rotation. All pairs are rotated
    /// from their pre-gate coefficients.
    pub fn apply_rotation(&mut self, gate: &RotationGate, cfg: &SpdConfig) -> Result<GateStats> {
        if gate.n() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: gate.n(),
            });
        }
        if gate.is_clifford() {
            return Err(Error::Contract(format!(
                "Clifford rotation (angle {}) reached the sparse propagator; fold it first",
                gate.angle()
            )));
        }
        let start = Instant::now();
        let g = gate.generator();
        let theta = if g.phase_exp() == 2 {
            -gate.angle()
        } else {
            gate.angle()
        };
        let (sin, cos) = theta.sin_cos();
        let (gx, gz) = (g.x_words(), g.z_words());
        let w = self.words;
        let s = self.stride();

        let mut stats = GateStats {
            terms_before: self.len(),
            ..Default::default()
        };
        let touches = self
            .support
            .iter()
            .zip(gx.iter().zip(gz))
            .any(|(s, (x, z))| s & (x | z) != 0);
        if !touches {
            stats.terms_after = stats.terms_before;
            stats.seconds = start.elapsed().as_secs_f64();
            return Ok(stats);
        }

        let len_before = self.len();
        let budget = cfg.max_terms.unwrap_or(usize::MAX);
        let mut partner = vec![0u64; s];
        let mut saw_zero = false;
        for i in 0..len_before {
            let key = &self.keys[i * s..(i + 1) * s];
            let (sx, sz) = key.split_at(w);
            if !anticommute_words(gx, gz, sx, sz) {
                continue;
            }
            for q in 0..w {
                partner[q] = gx[q] ^ sx[q];
                partner[w + q] = gz[q] ^ sz[q];
            }
            // P·σ = i^m σ' with m odd; σ' receives i·i^m·sinθ·a(σ).
            let to_partner = match product_phase_words(gx, gz, sx, sz) {
                1 => -sin,
                3 => sin,
                m => {
                    return Err(Error::Contract(format!(
                        "anticommuting product with even phase exponent {m}"
                    )))
                }
            };
            let (a_i, k_i) = (self.coeffs[i], self.orders[i]);

            match self.find(&partner) {
                Some(j) => {
                    debug_assert!(j < len_before, "partners of old terms are old terms");
                    if j < i {
                        // Pair already rotated when j was visited.
                        continue;
                    }
                    let (a_j, k_j) = (self.coeffs[j], self.orders[j]);
                    // P·σ' = i^{-m} σ, so the reverse contribution flips sign.
                    let new_i = cos * a_i - to_partner * a_j;
                    let new_j = cos * a_j + to_partner * a_i;
                    saw_zero |= new_i == 0.0 || new_j == 0.0;
                    self.coeffs[i] = new_i;
                    self.coeffs[j] = new_j;
                    self.orders[i] = k_i.min(k_j.saturating_add(1));
                    self.orders[j] = k_j.min(k_i.saturating_add(1));
                }
                None => {
                    let new_i = cos * a_i;
                    saw_zero |= new_i == 0.0;
                    self.coeffs[i] = new_i;
                    let order = k_i.saturating_add(1);
                    if cfg.keeps(order) {
                        if self.len() >= budget {
                            return Err(Error::TermBudget(budget));
                        }
                        let coeff = to_partner * a_i;
                        saw_zero |= coeff == 0.0;
                        self.push(&partner, coeff, order);
                        stats.created += 1;
                    } else {
                        stats.discarded += 1;
                    }
                }
            }
        }

        if stats.created > 0 {
            for (s, (x, z)) in self.support.iter_mut().zip(gx.iter().zip(gz)) {
                *s |= x | z;
            }
        }
        let threshold = cfg.prune_threshold;
        if saw_zero || threshold > 0.0 {
            stats.purged = self.retain(|c| c != 0.0 && c.abs() >= threshold);
        }
        stats.terms_after = self.len();
        stats.seconds = start.elapsed().as_secs_f64();
        Ok(stats)
    }

    /// `⟨0…0|O|0…0⟩`: the sum of coefficients of strings with no X or Y.
    pub fn expectation(&self) -> f64 {
        let w = self.words;
        (0..self.len())
            .filter(|&i| self.key(i)[..w].iter().all(|&x| x == 0))
            .map(|i| self.coeffs[i])
            .sum()
    }

    /// Checks the storage invariants: no zero coefficients, every order
    /// within `max_order`, index consistent with the rows.
    pub fn check_invariants(&self, max_order: Option<u32>) -> Result<()> {
        if self.index.len() != self.len() || self.keys.len() != self.len() * self.stride() {
            return Err(Error::Contract("index out of sync with stored terms".into()));
        }
        for i in 0..self.len() {
            let key = self.key(i);
            if self.find(key) != Some(i) {
                return Err(Error::Contract(format!(
                    "duplicate or unindexed term {}",
                    self.string_of(key)
                )));
            }
            if self.coeffs[i] == 0.0 {
                return Err(Error::Contract(format!(
                    "zero coefficient stored for {}",
                    self.string_of(key)
                )));
            }
            if max_order.is_some_and(|m| self.orders[i] > m) {
                return Err(Error::Contract(format!(
                    "order {} exceeds K for {}",
                    self.orders[i],
                    self.string_of(key)
                )));
            }
        }
        Ok(())
    }
}

/// Evolves the folded observable through its rotations and returns the
/// vacuum expectation.
pub fn run(folded: &FoldedCircuit, cfg: &SpdConfig) -> Result<(f64, RunStats)> {
    run_terms(folded, &folded.observable_terms, cfg)
}

fn run_terms(folded: &FoldedCircuit, terms: &[(f64, PauliString)], cfg: &SpdConfig) -> Result<(f64, RunStats)> {
    let start = Instant::now();
    let mut obs = if terms.is_empty() {
        SparseObservable::new(folded.n)
    } else {
        SparseObservable::from_terms(terms)?
    };
    let mut stats = RunStats {
        initial_terms: obs.len(),
        peak_terms: obs.len(),
        gates: Vec::with_capacity(folded.rotations.len()),
        ..Default::default()
    };
    for gate in &folded.rotations {
        let g = obs.apply_rotation(gate, cfg)?;
        stats.peak_terms = stats.peak_terms.max(g.transient_peak());
        stats.gates.push(g);
    }
    stats.final_terms = obs.len();
    stats.gate_count = folded.rotations.len();
    let value = obs.expectation();
    stats.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok((value, stats))
}

/// Runs each circuit separately (each term starting from order 0) and adds
/// the results in the given order. Stats report the largest peak, the summed
/// final sizes and the total wall time.
///
/// When every term carries the same coefficient `c`, the unit-weight values
/// are summed first and scaled once (divided by `m` when `c` is `1/m`), so
/// `M_z = Σ_q ⟨Z_q⟩ / n` is exactly 1 on the vacuum.
pub fn run_sum(folded_per_term: &[FoldedCircuit], cfg: &SpdConfig) -> Result<(f64, RunStats)> {
    let Some(first) = folded_per_term.first() else {
        return Ok((0.0, RunStats::default()));
    };
    let start = Instant::now();
    let common = match first.observable_terms.as_slice() {
        [(c, _)] => Some(*c).filter(|c| {
            folded_per_term
                .iter()
                .all(|f| matches!(f.observable_terms.as_slice(), [(d, _)] if d == c))
        }),
        _ => None,
    };
    let mut total = 0.0;
    let mut agg = RunStats::default();
    for f in folded_per_term {
        if f.n != first.n {
            return Err(Error::Dimension {
                left: first.n,
                right: f.n,
            });
        }
        let (v, s) = match common {
            Some(_) => run_terms(f, &[(1.0, f.observable_terms[0].1.clone())], cfg)?,
            None => run(f, cfg)?,
        };
        total += v;
        agg.peak_terms = agg.peak_terms.max(s.peak_terms);
        agg.final_terms += s.final_terms;
        agg.initial_terms += s.initial_terms;
        agg.gate_count = agg.gate_count.max(s.gate_count);
    }
    if let Some(c) = common {
        let m = c.recip().round();
        total = if m != 0.0 && 1.0 / m == c { total / m } else { total * c };
    }
    agg.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok((total, agg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn gate(s: &str, theta: f64) -> RotationGate {
        RotationGate::new(p(s), theta).unwrap()
    }

    fn obs(terms: &[(f64, &str)]) -> SparseObservable {
        let terms: Vec<_> = terms.iter().map(|(c, s)| (*c, p(s))).collect();
        SparseObservable::from_terms(&terms).unwrap()
    }

    #[test]
    fn z_under_x_rotation() {
        let theta = 0.4;
        let mut o = obs(&[(1.0, "Z")]);
        let st = o.apply_rotation(&gate("X", theta), &SpdConfig::unbounded()).unwrap();
        assert_eq!(o.coefficient(&p("Z")), Some(theta.cos()));
        assert_eq!(o.coefficient(&p("Y")), Some(theta.sin()));
        assert_eq!(o.order(&p("Z")), Some(0));
        assert_eq!(o.order(&p("Y")), Some(1));
        assert_eq!(st.created, 1);
        assert!((o.expectation() - 0.921061).abs() < 1e-6);
    }

    #[test]
    fn commuting_term_untouched() {
        let mut o = obs(&[(1.0, "X")]);
        o.apply_rotation(&gate("X", 0.3), &SpdConfig::unbounded()).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o.coefficient(&p("X")), Some(1.0));
    }

    #[test]
    fn existing_pair_rotates_simultaneously() {
        let (a, b, theta) = (0.7, -0.2, 0.3);
        let mut o = obs(&[(a, "Z"), (b, "Y")]);
        o.apply_rotation(&gate("X", theta), &SpdConfig::unbounded()).unwrap();
        let (s, c) = f64::sin_cos(theta);
        assert!((o.coefficient(&p("Z")).unwrap() - (a * c - b * s)).abs() < 1e-15);
        assert!((o.coefficient(&p("Y")).unwrap() - (a * s + b * c)).abs() < 1e-15);
    }

    #[test]
    fn order_zero_truncation_drops_partner() {
        let (t1, t2) = (0.3, 0.5);
        let mut o = obs(&[(1.0, "Z")]);
        let cfg = SpdConfig::truncated(0);
        let st = o.apply_rotation(&gate("X", t1), &cfg).unwrap();
        assert_eq!(st.discarded, 1);
        o.apply_rotation(&gate("X", t2), &cfg).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o.expectation(), t1.cos() * t2.cos());
        assert!((o.expectation() - (t1 + t2).cos()).abs() > 1e-3);
    }

    #[test]
    fn merge_lowers_order() {
        let mut o = SparseObservable::new(1);
        o.add_term(1.0, &p("Z"), 3).unwrap();
        o.add_term(0.5, &p("Y"), 0).unwrap();
        o.apply_rotation(&gate("X", 0.2), &SpdConfig::unbounded()).unwrap();
        assert_eq!(o.order(&p("Z")), Some(1));
        assert_eq!(o.order(&p("Y")), Some(0));
    }

    #[test]
    fn signed_generator_is_a_negated_angle() {
        let mut a = obs(&[(1.0, "ZI"), (0.5, "YX")]);
        let mut b = a.clone();
        a.apply_rotation(&gate("-XI", 0.3), &SpdConfig::unbounded()).unwrap();
        b.apply_rotation(&gate("XI", -0.3), &SpdConfig::unbounded()).unwrap();
        let av: Vec<_> = a.iter().collect();
        let bv: Vec<_> = b.iter().collect();
        assert_eq!(av, bv);
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(obs(&[(0.7, "ZI"), (0.3, "XI")]).expectation(), 0.7);
        assert_eq!(SparseObservable::new(3).expectation(), 0.0);
        assert_eq!(obs(&[(0.5, "-ZZ")]).expectation(), -0.5);
    }

    #[test]
    fn clifford_gate_is_rejected() {
        let mut o = obs(&[(1.0, "Z")]);
        let r = o.apply_rotation(&gate("X", std::f64::consts::FRAC_PI_2), &SpdConfig::unbounded());
        assert!(matches!(r, Err(Error::Contract(_))));
        let r = o.apply_rotation(&gate("XX", 0.1), &SpdConfig::unbounded());
        assert!(matches!(r, Err(Error::Dimension { .. })));
    }

    #[test]
    fn cancellation_purges_zero() {
        // a = sin θ, b = cos θ makes a cos θ - b sin θ exactly zero.
        let theta = 0.25f64;
        let mut o = obs(&[(theta.sin(), "Z"), (theta.cos(), "Y")]);
        let st = o.apply_rotation(&gate("X", theta), &SpdConfig::unbounded()).unwrap();
        assert_eq!(o.coefficient(&p("Z")), None);
        assert_eq!((st.purged, st.terms_after), (1, 1));
        o.check_invariants(None).unwrap();
    }

    #[test]
    fn prune_threshold_removes_small_terms() {
        let mut o = obs(&[(1.0, "Z")]);
        let cfg = SpdConfig {
            prune_threshold: 0.1,
            ..SpdConfig::unbounded()
        };
        let st = o.apply_rotation(&gate("X", 0.01), &cfg).unwrap();
        assert_eq!((st.created, st.purged, o.len()), (1, 1, 1));
    }

    #[test]
    fn term_budget_is_enforced() {
        let mut o = obs(&[(1.0, "ZZ")]);
        let cfg = SpdConfig {
            max_terms: Some(1),
            ..SpdConfig::unbounded()
        };
        let err = o.apply_rotation(&gate("XI", 0.3), &cfg).unwrap_err();
        assert!(matches!(err, Error::TermBudget(1)));
    }

    #[test]
    fn vacuum_magnetization_is_exactly_one() {
        for n in [3, 6, 7, 49, 127] {
            let w = 1.0 / n as f64;
            let folded: Vec<FoldedCircuit> = (0..n)
                .map(|q| FoldedCircuit {
                    n,
                    rotations: vec![],
                    observable_terms: vec![(w, PauliString::single(n, q, crate::Pauli::Z).unwrap())],
                    clifford_count: 0,
                })
                .collect();
            assert_eq!(run_sum(&folded, &SpdConfig::unbounded()).unwrap().0, 1.0, "n = {n}");
        }
    }

    #[test]
    fn disjoint_gate_is_skipped() {
        let mut o = obs(&[(1.0, "ZII")]);
        let st = o.apply_rotation(&gate("IXX", 0.3), &SpdConfig::unbounded()).unwrap();
        assert_eq!(st.terms_after, 1);
        assert_eq!(st.created, 0);
    }

    #[test]
    fn run_stats_reconcile() {
        let rots = vec![gate("XI", 0.3), gate("ZX", 0.2), gate("YY", -0.4), gate("XZ", 0.1)];
        let f = FoldedCircuit {
            n: 2,
            rotations: rots,
            observable_terms: vec![(1.0, p("ZI")), (0.5, p("IZ"))],
            clifford_count: 0,
        };
        let (_, st) = run(&f, &SpdConfig::unbounded()).unwrap();
        assert!(st.reconciles());
        assert_eq!(st.gate_count, 4);
        let json = serde_json::to_value(&st).unwrap();
        let obj = json.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["final_terms", "gate_count", "peak_terms", "wall_time_seconds"]
        );
    }
}
