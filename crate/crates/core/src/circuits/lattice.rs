use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use crate::error::{Error, Result};

const EAGLE_127: &str = include_str!("../../data/eagle127.txt");

/// Qubit count plus an undirected coupling map. Edges are stored as
/// `(low, high)` pairs in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl LatticeSpec {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Lattice("no qubits".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Lattice(format!("self-loop on qubit {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Lattice(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::Lattice(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(LatticeSpec {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Open chain `0 - 1 - … - (n-1)`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|q| (q - 1, q)))
    }

    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Lattice(format!("a ring needs at least 3 qubits, got {n}")));
        }
        Self::new(n, (0..n).map(|q| (q, (q + 1) % n)))
    }

    /// Heavy-hex patch with `d` rows of `d` hexagons.
    ///
    /// Built like the IBM layouts: `d + 1` horizontal chains of `4d + 3`
    /// qubits, with bridge qubits joining neighbouring chains every fourth
    /// column (columns `0, 4, 8, …` below even chains and `2, 6, 10, …` below
    /// odd ones). Qubits are numbered row by row, each chain followed by the
    /// bridges beneath it. The result has `(d + 1)(5d + 3)` qubits.
    pub fn heavy_hex(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Lattice("heavy-hex distance parameter must be >= 1".into()));
        }
        let width = 4 * d + 3;
        let mut edges = Vec::new();
        let mut next = 0;
        let mut prev_bridges: Vec<(usize, usize)> = Vec::new();
        for row in 0..=d {
            let chain_start = next;
            next += width;
            for c in 1..width {
                edges.push((chain_start + c - 1, chain_start + c));
            }
            for &(bridge, col) in &prev_bridges {
                edges.push((bridge, chain_start + col));
            }
            prev_bridges.clear();
            if row < d {
                let offset = if row % 2 == 0 { 0 } else { 2 };
                for m in 0..=d {
                    let col = offset + 4 * m;
                    edges.push((chain_start + col, next));
                    prev_bridges.push((next, col));
                    next += 1;
                }
            }
        }
        let lat = Self::new(next, edges)?;
        lat.check_heavy_hex()?;
        Ok(lat)
    }

    /// The 127-qubit Eagle coupling map shipped with the crate.
    pub fn eagle127() -> Self {
        let lat = Self::parse(EAGLE_127).expect("bundled lattice file is valid");
        debug_assert!(lat.check_heavy_hex().is_ok());
        lat
    }

    /// Plain-text format: first non-comment line `n`, then one `i j` pair per
    /// line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::Lattice("empty lattice file".into()))?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::Lattice(format!("expected qubit count, got {first:?}")))?;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                [a, b] => a.parse::<usize>().ok().zip(b.parse::<usize>().ok()),
                _ => None,
            };
            let edge = parsed
                .ok_or_else(|| Error::Lattice(format!("line {lineno}: expected \"i j\", got {line:?}")))?;
            edges.push(edge);
        }
        Self::new(n, edges)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Text form accepted by [`LatticeSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(q) = queue.pop_front() {
            for &r in &adj[q] {
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    queue.push_back(r);
                }
            }
        }
        count == self.n
    }

    /// Heavy-hex graphs have maximum degree 3.
    pub fn check_heavy_hex(&self) -> Result<()> {
        if let Some((q, d)) = self.degrees().into_iter().enumerate().find(|&(_, d)| d > 3) {
            return Err(Error::Lattice(format!(
                "qubit {q} has degree {d}; heavy-hex allows at most 3"
            )));
        }
        Ok(())
    }
}
