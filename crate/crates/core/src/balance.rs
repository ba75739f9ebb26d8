//! Two-partitions and their neighborhood balances.
//!
//! Balances are sums of the `±1` recoding of labels over a neighborhood, so a
//! vertex whose open neighborhood holds two 1s and one 0 has open balance
//! `+1`. This is the negation of "zeros minus ones"; only absolute values
//! matter for validity.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;

/// Which neighborhood a balance constraint ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// `N(v)`
    Open,
    /// `N[v] = N(v) + v`
    Closed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Open => "open",
            Mode::Closed => "closed",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(Mode::Open),
            "closed" => Ok(Mode::Closed),
            other => Err(format!("unknown mode {other:?} (expected open or closed)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("partition has {got} labels but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("partition line {line}: {reason}")]
    Format { line: usize, reason: String },
}

/// A labeling of vertices with 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoPartition {
    labels: Vec<u8>,
}

impl TwoPartition {
    /// Panics if a label is not 0 or 1.
    pub fn new(labels: Vec<u8>) -> Self {
        assert!(labels.iter().all(|&l| l <= 1), "labels must be 0 or 1");
        TwoPartition { labels }
    }

    /// Labels read from the bits of `mask`, vertex 0 in the most significant
    /// of the `n` low bits.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        TwoPartition {
            labels: (0..n).map(|v| ((mask >> (n - 1 - v)) & 1) as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> u8 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<u8> {
        self.labels
    }

    /// The partition with every label swapped.
    pub fn complement(&self) -> Self {
        TwoPartition {
            labels: self.labels.iter().map(|&l| 1 - l).collect(),
        }
    }

    /// Parses the one-line text form, e.g. `"0110\n"`.
    pub fn parse(text: &str) -> Result<Self, BalanceError> {
        let mut lines = text.lines();
        let line = lines.next().unwrap_or("").trim_end_matches('\r');
        let mut labels = Vec::with_capacity(line.len());
        for (i, c) in line.chars().enumerate() {
            match c {
                '0' => labels.push(0),
                '1' => labels.push(1),
                other => {
                    return Err(BalanceError::Format {
                        line: 1,
                        reason: format!("character {} is {other:?}, expected 0 or 1", i + 1),
                    })
                }
            }
        }
        if let Some((i, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(BalanceError::Format {
                line: i + 2,
                reason: "unexpected content after the label line".into(),
            });
        }
        Ok(TwoPartition { labels })
    }
}

impl fmt::Display for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.labels {
            f.write_str(if l == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `0 -> -1`, `1 -> +1`.
pub fn phi_star(label: u8) -> i32 {
    debug_assert!(label <= 1);
    2 * i32::from(label) - 1
}

/// Per-vertex open and closed balances of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub open: Vec<i32>,
    pub closed: Vec<i32>,
}

impl BalanceReport {
    pub fn balances(&self, mode: Mode) -> &[i32] {
        match mode {
            Mode::Open => &self.open,
            Mode::Closed => &self.closed,
        }
    }

    pub fn violations(&self, mode: Mode) -> Vec<usize> {
        self.balances(mode)
            .iter()
            .enumerate()
            .filter(|(_, b)| b.abs() > 1)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn is_valid(&self, mode: Mode) -> bool {
        self.balances(mode).iter().all(|b| b.abs() <= 1)
    }

    pub fn open_valid(&self) -> bool {
        self.is_valid(Mode::Open)
    }

    pub fn closed_valid(&self) -> bool {
        self.is_valid(Mode::Closed)
    }
}

pub fn balance_report(g: &Graph, p: &TwoPartition) -> Result<BalanceReport, BalanceError> {
    if p.len() != g.n() {
        return Err(BalanceError::LengthMismatch {
            expected: g.n(),
            got: p.len(),
        });
    }
    let open: Vec<i32> = (0..g.n())
        .map(|v| g.neighbors(v).iter().map(|&u| phi_star(p.label(u))).sum())
        .collect();
    let closed = open
        .iter()
        .enumerate()
        .map(|(v, b)| b + phi_star(p.label(v)))
        .collect();
    Ok(BalanceReport { open, closed })
}

/// Vertices whose balance in `mode` exceeds 1 in absolute value. Empty means
/// the partition is locally balanced.
pub fn check(g: &Graph, p: &TwoPartition, mode: Mode) -> Result<Vec<usize>, BalanceError> {
    Ok(balance_report(g, p)?.violations(mode))
}
