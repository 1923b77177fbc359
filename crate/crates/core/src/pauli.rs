//! Generalized Pauli operators `ω^{λ/2} X^{x_1} Z^{z_1} ⊗ … ⊗ X^{x_n} Z^{z_n}`
//! on `n` sites of common dimension `D`.
//!
//! Exponents live in `Z_D` and are stored interleaved as `(x_1, z_1, …, x_n, z_n)`.
//! The phase exponent `λ` lives in `Z_{2D}`, i.e. in units of `ω^{1/2}`, which
//! makes every phase produced by multiplication or Clifford conjugation exact.
//! Each site is written X-before-Z; products pay the reordering phase
//! `Z^b X^c = ω^{-bc} X^c Z^b`.
//!
//! # Text format
//!
//! Two spellings are accepted:
//!
//! * compact: one letter per site from `I X Z` (any `D`) or `Y` (`D = 2` only,
//!   `Y = ω^{1/2} XZ` so that `Y² = +I`), with an optional prefix `+`, `-`,
//!   `i` or `-i` multiplying the product by `1`, `ω^{D/2}`, `ω^{1/2}` or
//!   `ω^{(D+1)/2}`;
//! * dotted: per-site tokens `x<a>z<b>` joined by `.`, optionally led by a
//!   phase token `w<λ>`, e.g. `w3.x1z0.x0z2`.
//!
//! [`PauliOperator::to_string`] uses the compact form for `D = 2` whenever the
//! phase is expressible and the dotted form otherwise.

use std::fmt;

use crate::error::{Error, Result};
use crate::modular::reduce;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    dim: u32,
    phase: u32,
    vector: Vec<u32>,
}

impl PauliOperator {
    pub fn identity(dim: u32, sites: usize) -> Self {
        Self { dim, phase: 0, vector: vec![0; 2 * sites] }
    }

    /// Builds an operator from raw exponents; entries are reduced into range.
    pub fn new(dim: u32, phase: u32, vector: Vec<u32>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        if vector.len() % 2 != 0 || vector.is_empty() {
            return Err(Error::Shape(format!("vector length {} is not 2n with n >= 1", vector.len())));
        }
        let vector = vector.into_iter().map(|v| v % dim).collect();
        Ok(Self { dim, phase: phase % (2 * dim), vector })
    }

    /// `X^x Z^z` on one site, identity elsewhere.
    pub fn single(dim: u32, sites: usize, site: usize, x: u32, z: u32) -> Self {
        let mut p = Self::identity(dim, sites);
        p.vector[2 * site] = x % dim;
        p.vector[2 * site + 1] = z % dim;
        p
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn sites(&self) -> usize {
        self.vector.len() / 2
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn vector(&self) -> &[u32] {
        &self.vector
    }

    /// `(x, z)` exponents on one site.
    pub fn site(&self, i: usize) -> (u32, u32) {
        (self.vector[2 * i], self.vector[2 * i + 1])
    }

    pub fn set_site(&mut self, i: usize, x: u32, z: u32) {
        self.vector[2 * i] = x % self.dim;
        self.vector[2 * i + 1] = z % self.dim;
    }

    pub fn with_phase(mut self, phase: u32) -> Self {
        self.phase = phase % (2 * self.dim);
        self
    }

    /// Multiplies by `ω^{k/2}`.
    pub fn add_phase(mut self, k: i64) -> Self {
        self.phase = reduce(i64::from(self.phase) + k, 2 * self.dim);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.vector.iter().all(|&v| v == 0)
    }

    pub fn has_zero_vector(&self) -> bool {
        self.vector.iter().all(|&v| v == 0)
    }

    /// Sites where the operator acts nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.sites()).filter(|&i| self.site(i) != (0, 0)).collect()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.vector.len() != other.vector.len() {
            return Err(Error::Shape(format!(
                "operators on {} sites of dim {} and {} sites of dim {}",
                self.sites(),
                self.dim,
                other.sites(),
                other.dim
            )));
        }
        Ok(())
    }

    /// `λ` with `uv = vu ω^λ`; zero means the operators commute.
    pub fn symplectic_product(&self, other: &Self) -> Result<u32> {
        self.check_shape(other)?;
        Ok(self.symplectic_unchecked(other))
    }

    pub(crate) fn symplectic_unchecked(&self, other: &Self) -> u32 {
        let d = i64::from(self.dim);
        let mut acc = 0i64;
        for i in 0..self.sites() {
            let (x1, z1) = self.site(i);
            let (x2, z2) = other.site(i);
            acc += i64::from(x1) * i64::from(z2) - i64::from(x2) * i64::from(z1);
        }
        acc.rem_euclid(d) as u32
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.symplectic_unchecked(other) == 0
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut reorder = 0i64;
        let mut vector = Vec::with_capacity(self.vector.len());
        for i in 0..self.sites() {
            let (a, b) = self.site(i);
            let (c, e) = other.site(i);
            reorder += i64::from(b) * i64::from(c);
            vector.push((a + c) % d);
            vector.push((b + e) % d);
        }
        let phase = reduce(i64::from(self.phase) + i64::from(other.phase) - 2 * reorder, 2 * d);
        Self { dim: d, phase, vector }
    }

    pub fn power(&self, m: u64) -> Self {
        // square-and-multiply keeps this O(log m) multiplications
        let mut result = Self::identity(self.dim, self.sites());
        let mut base = self.clone();
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            m >>= 1;
        }
        result
    }

    /// `p^D = +I`, the requirement for a stabilizer generator.
    pub fn is_admissible(&self) -> bool {
        self.power(u64::from(self.dim)).is_identity()
    }

    /// The same vector with the smallest phase making it admissible.
    pub fn admissible_form(&self) -> Option<Self> {
        (0..2 * self.dim).map(|l| self.clone().with_phase(l)).find(|p| p.is_admissible())
    }

    /// Restriction to a site subset (identity elsewhere) with the canonical
    /// admissible phase.
    pub fn restricted(&self, keep: &[bool]) -> Self {
        let mut p = Self::identity(self.dim, self.sites());
        for (i, &k) in keep.iter().enumerate() {
            if k {
                let (x, z) = self.site(i);
                p.set_site(i, x, z);
            }
        }
        p.admissible_form().expect("every Pauli vector has an admissible phase")
    }

    /// Parses either spelling (see the module docs).
    pub fn parse(text: &str, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        let text = text.trim();
        let err = |msg: String| Error::Parse { line: 0, msg };
        if text.is_empty() {
            return Err(err("empty operator".into()));
        }
        if text.starts_with('x') || text.starts_with('w') {
            return Self::parse_dotted(text, dim).map_err(err);
        }
        let (prefix, body) = if let Some(rest) = text.strip_prefix("-i") {
            (i64::from(dim) + 1, rest)
        } else if let Some(rest) = text.strip_prefix('-') {
            (i64::from(dim), rest)
        } else if let Some(rest) = text.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = text.strip_prefix('i') {
            (1, rest)
        } else {
            (0, text)
        };
        if body.is_empty() {
            return Err(err(format!("no sites in '{text}'")));
        }
        let mut vector = Vec::with_capacity(2 * body.len());
        let mut phase = prefix;
        for ch in body.chars() {
            let (x, z) = match ch {
                'I' => (0, 0),
                'X' => (1, 0),
                'Z' => (0, 1),
                'Y' if dim == 2 => {
                    phase += 1;
                    (1, 1)
                }
                _ => return Err(err(format!("unexpected character '{ch}' in '{text}'"))),
            };
            vector.push(x);
            vector.push(z);
        }
        Ok(Self { dim, phase: reduce(phase, 2 * dim), vector })
    }

    fn parse_dotted(text: &str, dim: u32) -> std::result::Result<Self, String> {
        let mut tokens = text.split('.').peekable();
        let mut phase = 0u32;
        if let Some(t) = tokens.peek() {
            if let Some(l) = t.strip_prefix('w') {
                phase = l.parse::<u32>().map_err(|_| format!("bad phase token '{t}'"))?;
                if phase >= 2 * dim {
                    return Err(format!("phase {phase} out of range for D = {dim}"));
                }
                tokens.next();
            }
        }
        let mut vector = Vec::new();
        for t in tokens {
            let rest = t.strip_prefix('x').ok_or_else(|| format!("bad site token '{t}'"))?;
            let (a, b) = rest.split_once('z').ok_or_else(|| format!("bad site token '{t}'"))?;
            let a: u32 = a.parse().map_err(|_| format!("bad exponent in '{t}'"))?;
            let b: u32 = b.parse().map_err(|_| format!("bad exponent in '{t}'"))?;
            if a >= dim || b >= dim {
                return Err(format!("exponent in '{t}' not below D = {dim}"));
            }
            vector.push(a);
            vector.push(b);
        }
        if vector.is_empty() {
            return Err(format!("no sites in '{text}'"));
        }
        Ok(Self { dim, phase, vector })
    }

    fn compact(&self) -> Option<String> {
        if self.dim != 2 {
            return None;
        }
        let mut letters = String::with_capacity(self.sites());
        let mut ys = 0u32;
        for i in 0..self.sites() {
            letters.push(match self.site(i) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => {
                    ys += 1;
                    'Y'
                }
            });
        }
        let prefix = match (self.phase + 4 - ys % 4) % 4 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        Some(format!("{prefix}{letters}"))
    }

    fn dotted(&self) -> String {
        let mut parts = Vec::with_capacity(self.sites() + 1);
        if self.phase != 0 {
            parts.push(format!("w{}", self.phase));
        }
        for i in 0..self.sites() {
            let (x, z) = self.site(i);
            parts.push(format!("x{x}z{z}"));
        }
        parts.join(".")
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compact() {
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.dotted()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: u32) -> PauliOperator {
        PauliOperator::parse(s, d).unwrap()
    }

    #[test]
    fn x_and_z_anticommute_on_a_qubit() {
        assert_eq!(p("X", 2).symplectic_product(&p("Z", 2)).unwrap(), 1);
    }

    #[test]
    fn qutrit_pair_commutes() {
        // X^2 Z and X Z^2: 2*2 - 1*1 = 3 = 0 mod 3
        let u = p("x2z1", 3);
        let v = p("x1z2", 3);
        assert_eq!(u.symplectic_product(&v).unwrap(), 0);
    }

    #[test]
    fn zx_reorders_with_phase() {
        let w = p("Z", 2).multiply(&p("X", 2)).unwrap();
        assert_eq!(w.vector(), &[1, 1]);
        assert_eq!(w.phase(), 2);
    }

    #[test]
    fn x_cubed_is_identity_for_qutrits() {
        let x = p("X", 3);
        assert!(x.multiply(&x).unwrap().multiply(&x).unwrap().is_identity());
        assert!(x.power(3).is_identity());
        assert!(p("x1z1", 3).power(3).is_identity());
        assert!(p("XZ", 2).power(0).is_identity());
    }

    #[test]
    fn qubit_xz_product_needs_half_phase() {
        assert!(!p("x1z1", 2).is_admissible());
        assert!(p("Y", 2).is_admissible());
        assert_eq!(p("x1z1", 2).admissible_form().unwrap(), p("Y", 2));
    }

    #[test]
    fn parse_examples() {
        let a = p("XZI", 2);
        assert_eq!(a.vector(), &[1, 0, 0, 1, 0, 0]);
        assert_eq!(a.phase(), 0);
        let b = p("x1z0.x0z2.x3z2", 6);
        assert_eq!(b.vector(), &[1, 0, 0, 2, 3, 2]);
        assert_eq!(p("w3.x1z0", 3).phase(), 3);
        assert_eq!(p("-iY", 2).phase(), 0);
    }

    #[test]
    fn canonical_spellings_round_trip() {
        for (s, d) in [("XZI", 2), ("-YYX", 2), ("iZ", 2), ("-iXY", 2), ("x1z0.x0z2.x3z2", 6), ("w3.x1z2.x0z0", 5)] {
            assert_eq!(p(s, d).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(PauliOperator::parse("XQ", 2).is_err());
        assert!(PauliOperator::parse("Y", 3).is_err());
        assert!(PauliOperator::parse("x3z0", 3).is_err());
        assert!(PauliOperator::parse("x1", 3).is_err());
        assert!(PauliOperator::parse("w7.x1z0", 3).is_err());
        assert!(PauliOperator::parse("", 3).is_err());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        assert!(p("XX", 2).symplectic_product(&p("X", 2)).is_err());
        assert!(p("X", 2).multiply(&p("X", 3)).is_err());
    }
}
