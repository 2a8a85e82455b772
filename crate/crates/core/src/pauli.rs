//! Signed n-qubit Pauli strings in symplectic (x, z) bit-pair form.
//!
//! A string is stored as two packed bit vectors plus a global phase
//! exponent `p`, and represents `i^p · σ_0 ⊗ σ_1 ⊗ … ⊗ σ_{n-1}` where the
//! letter on qubit `q` is read off `(x_q, z_q)`: `(0,0)=I`, `(1,0)=X`,
//! `(0,1)=Z`, `(1,1)=Y`. The phase is relative to the letters themselves, so
//! `Y` is stored with `p = 0` and `-Y` with `p = 2`. A string is Hermitian
//! exactly when `p` is even.
//!
//! Qubit `q` lives in bit `q % 64` of word `q / 64`; in dense text form the
//! leftmost letter is qubit 0.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Inline storage covers up to 128 qubits without touching the heap.
pub type Words = SmallVec<[u64; 2]>;

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

// Word-parallel kernels shared with the sparse propagator, which works on
// raw key slices instead of full `PauliString`s.

/// Parity of the symplectic inner product: true iff the two strings
/// anticommute.
#[inline]
pub(crate) fn anticommute_words(ax: &[u64], az: &[u64], bx: &[u64], bz: &[u64]) -> bool {
    let mut acc = 0u64;
    for i in 0..ax.len() {
        acc ^= (ax[i] & bz[i]) ^ (az[i] & bx[i]);
    }
    acc.count_ones() & 1 == 1
}

/// Phase exponent picked up when multiplying the letter strings `a · b`
/// (both taken with phase 0), i.e. `σ_a σ_b = i^m σ_{a⊕b}`.
#[inline]
pub(crate) fn product_phase_words(ax: &[u64], az: &[u64], bx: &[u64], bz: &[u64]) -> u8 {
    let mut acc = 0u32;
    for i in 0..ax.len() {
        let cx = ax[i] ^ bx[i];
        let cz = az[i] ^ bz[i];
        acc = acc
            .wrapping_add((ax[i] & az[i]).count_ones())
            .wrapping_add((bx[i] & bz[i]).count_ones())
            .wrapping_add(2 * (az[i] & bx[i]).count_ones())
            .wrapping_add(3 * (cx & cz).count_ones());
    }
    (acc & 3) as u8
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Words,
    z: Words,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "a Pauli string needs at least one qubit");
        let w = word_count(n);
        PauliString {
            n,
            x: SmallVec::from_elem(0, w),
            z: SmallVec::from_elem(0, w),
            phase: 0,
        }
    }

    /// `letter` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: Pauli) -> Result<Self> {
        let mut p = Self::identity(n);
        p.set(q, letter)?;
        Ok(p)
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_unchecked(q, l);
        }
        p
    }

    /// Builds a string from packed words. Bits at positions `>= n` must be
    /// clear.
    pub fn from_words(n: usize, x: &[u64], z: &[u64], phase: u8) -> Result<Self> {
        let w = word_count(n);
        if n == 0 || x.len() != w || z.len() != w {
            return Err(Error::Dimension {
                left: n,
                right: x.len().max(z.len()) * WORD_BITS,
            });
        }
        let tail = n % WORD_BITS;
        if tail != 0 {
            let mask = !((1u64 << tail) - 1);
            if (x[w - 1] | z[w - 1]) & mask != 0 {
                return Err(Error::Contract(format!(
                    "bits set beyond qubit count {n}"
                )));
            }
        }
        Ok(PauliString {
            n,
            x: SmallVec::from_slice(x),
            z: SmallVec::from_slice(z),
            phase: phase & 3,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn negated(mut self) -> Self {
        self.negate();
        self
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub fn letter(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD_BITS, q % WORD_BITS);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, letter: Pauli) -> Result<()> {
        if q >= self.n {
            return Err(Error::PauliParse {
                text: format!("{}{q}", letter.letter()),
                reason: format!("qubit index {q} >= n = {}", self.n),
            });
        }
        self.set_unchecked(q, letter);
        Ok(())
    }

    fn set_unchecked(&mut self, q: usize, letter: Pauli) {
        let (w, b) = (q / WORD_BITS, q % WORD_BITS);
        let (xb, zb) = letter.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// Identity letters on every qubit (the phase may be anything).
    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&w| w == 0)
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&q| self.letter(q) != Pauli::I)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Exact operator product `self · other`, phase included.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let m = product_phase_words(&self.x, &self.z, &other.x, &other.z);
        Ok(PauliString {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            phase: (self.phase + other.phase + m) & 3,
        })
    }

    pub fn anticommutes(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(anticommute_words(&self.x, &self.z, &other.x, &other.z))
    }

    /// `⟨0…0| self |0…0⟩`: `i^p` for strings made of `I` and `Z` only, zero
    /// otherwise.
    pub fn vacuum_expectation(&self) -> Complex64 {
        if popcount(&self.x) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        phase_to_complex(self.phase)
    }

    /// Parses either the dense letter form (`"XIZ"`, length `n`) or the
    /// sparse form (`"X0 Z2"`, 0-based indices below `n`). Either may carry
    /// a leading `+`, `-`, `+i` or `-i`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let err = |reason: String| Error::PauliParse {
            text: text.to_string(),
            reason,
        };
        if n == 0 {
            return Err(err("qubit count must be positive".into()));
        }
        let (phase, body) = split_phase_prefix(text.trim());
        let body = body.trim();
        if body.is_empty() {
            return Err(err("empty operator".into()));
        }
        let mut p = Self::identity(n);
        if body.chars().any(|c| c.is_ascii_digit()) {
            let mut seen = vec![false; n];
            for tok in body.split_whitespace() {
                let mut chars = tok.chars();
                let head = chars.next().unwrap();
                let letter = Pauli::from_letter(head)
                    .ok_or_else(|| err(format!("invalid character {head:?}")))?;
                let idx: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| err(format!("bad qubit index in {tok:?}")))?;
                if idx >= n {
                    return Err(err(format!("qubit index {idx} >= n = {n}")));
                }
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(err(format!("duplicate qubit index {idx}")));
                }
                p.set_unchecked(idx, letter);
            }
        } else {
            let letters: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
            if letters.len() != n {
                return Err(err(format!(
                    "dense form has {} letters, expected {n}",
                    letters.len()
                )));
            }
            for (q, c) in letters.into_iter().enumerate() {
                let letter =
                    Pauli::from_letter(c).ok_or_else(|| err(format!("invalid character {c:?}")))?;
                p.set_unchecked(q, letter);
            }
        }
        p.phase = phase;
        Ok(p)
    }

    /// Sparse text form, e.g. `-X3 Y7`. The identity prints as `I0`.
    pub fn to_sparse_string(&self) -> String {
        let mut out = phase_prefix(self.phase).to_string();
        let body: Vec<String> = self
            .support()
            .map(|q| format!("{}{q}", self.letter(q).letter()))
            .collect();
        if body.is_empty() {
            out.push_str("I0");
        } else {
            out.push_str(&body.join(" "));
        }
        out
    }
}

fn phase_to_complex(p: u8) -> Complex64 {
    match p & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn split_phase_prefix(text: &str) -> (u8, &str) {
    // U+2212 is accepted alongside ASCII '-'.
    for (prefix, phase) in [
        ("+i", 1),
        ("-i", 3),
        ("\u{2212}i", 3),
        ("+", 0),
        ("-", 2),
        ("\u{2212}", 2),
    ] {
        if let Some(rest) = text.strip_prefix(prefix) {
            return (phase, rest);
        }
    }
    (0, text)
}

fn phase_prefix(p: u8) -> &'static str {
    match p & 3 {
        0 => "",
        1 => "+i",
        2 => "-",
        _ => "-i",
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(phase_prefix(self.phase))?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// Dense form only; the qubit count is the number of letters.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (_, body) = split_phase_prefix(s.trim());
        let n = body.chars().filter(|c| !c.is_whitespace()).count();
        Self::parse(s, n)
    }
}
