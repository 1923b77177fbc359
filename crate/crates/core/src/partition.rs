//! Party labels and bipartite cuts.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'A' => Some(Party::A),
            'B' => Some(Party::B),
            'C' => Some(Party::C),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Party::A => 'A',
            Party::B => 'B',
            Party::C => 'C',
        }
    }
}

pub fn parse_labels(s: &str) -> Result<Vec<Party>> {
    s.chars()
        .map(|c| Party::from_char(c).ok_or_else(|| Error::Parse { line: 0, msg: format!("bad party label '{c}'") }))
        .collect()
}

pub fn format_labels(labels: &[Party]) -> String {
    labels.iter().map(|p| p.as_char()).collect()
}

/// A bipartition of the sites: `true` marks the first side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    first: Vec<bool>,
}

impl Cut {
    pub fn new(first: Vec<bool>) -> Self {
        Self { first }
    }

    /// First side = sites whose label is in `side`.
    pub fn from_parties(labels: &[Party], side: &[Party]) -> Self {
        Self { first: labels.iter().map(|l| side.contains(l)).collect() }
    }

    /// Parses `"A|BC"`-style groupings (against `labels`) or a per-site label
    /// string, where `A` marks the first side.
    pub fn parse(spec: &str, labels: Option<&[Party]>, sites: usize) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        if let Some((left, right)) = spec.split_once('|') {
            let labels = labels.ok_or(Error::MissingParties)?;
            let left = parse_labels(left)?;
            let right = parse_labels(right)?;
            if left.iter().any(|p| right.contains(p)) {
                return Err(bad(format!("party appears on both sides of '{spec}'")));
            }
            if let Some(l) = labels.iter().find(|l| !left.contains(l) && !right.contains(l)) {
                return Err(bad(format!("'{spec}' does not cover party {}", l.as_char())));
            }
            Ok(Self::from_parties(labels, &left))
        } else {
            let per_site = parse_labels(spec)?;
            if per_site.len() != sites {
                return Err(bad(format!("partition '{spec}' has {} labels for {sites} sites", per_site.len())));
            }
            Ok(Self { first: per_site.iter().map(|&p| p == Party::A).collect() })
        }
    }

    pub fn sites(&self) -> usize {
        self.first.len()
    }

    pub fn in_first(&self, site: usize) -> bool {
        self.first[site]
    }

    pub fn mask(&self) -> &[bool] {
        &self.first
    }

    pub fn complement(&self) -> Self {
        Self { first: self.first.iter().map(|b| !b).collect() }
    }

    pub fn first_count(&self) -> usize {
        self.first.iter().filter(|&&b| b).count()
    }

    pub fn second_count(&self) -> usize {
        self.sites() - self.first_count()
    }

    /// Symplectic-vector columns belonging to the first (`true`) or second side.
    pub fn columns(&self, first: bool) -> Vec<usize> {
        (0..self.sites()).filter(|&i| self.first[i] == first).flat_map(|i| [2 * i, 2 * i + 1]).collect()
    }

    /// Every nontrivial cut of `n` sites, in both orientations.
    pub fn all(n: usize) -> impl Iterator<Item = Cut> {
        (1u64..(1u64 << n) - 1).map(move |m| Cut { first: (0..n).map(|i| m >> i & 1 == 1).collect() })
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.first {
            f.write_str(if b { "A" } else { "B" })?;
        }
        Ok(())
    }
}
