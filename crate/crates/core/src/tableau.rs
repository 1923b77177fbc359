//! Stabilizer groups as generator lists, with exact elimination over `Z_p`.
//!
//! # File format
//!
//! ```text
//! dim=2 sites=3 parties=ABC
//! ZZI
//! IZZ
//! XXX
//! ```
//!
//! The header holds `key=value` pairs: `dim` and `sites` are required,
//! `parties` (one `A`/`B`/`C` per site) and `version` (currently `1`) are
//! optional. Each further line is one generator in the Pauli text format.
//! Blank lines and lines starting with `#` are skipped.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, PrimeField};
use crate::modular::{factorize, is_prime};
use crate::partition::{format_labels, parse_labels, Cut, Party};
use crate::pauli::PauliOperator;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    dim: u32,
    sites: usize,
    generators: Vec<PauliOperator>,
    parties: Option<Vec<Party>>,
}

/// Result of [`StabilizerTableau::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Generator index pairs with nonzero symplectic product.
    pub noncommuting: Vec<(usize, usize)>,
    /// Generators violating `g^D = +I`.
    pub inadmissible: Vec<usize>,
    /// Rank of the exponent matrix modulo each prime factor of `D`.
    pub ranks: Vec<(u32, usize)>,
    /// `log2 ‖S‖` when the group order is computable (square-free `D`).
    pub order_log2: Option<f64>,
    pub generators: usize,
    pub sites: usize,
    pub dim: u32,
}

impl ValidationReport {
    /// Prime `D`: the generators are linearly independent.
    pub fn independent(&self) -> bool {
        match self.ranks.as_slice() {
            [(_, r)] if is_prime(self.dim) => *r == self.generators,
            _ => self.ranks.iter().all(|&(_, r)| r == self.generators),
        }
    }

    /// `tr ρ² = ‖S‖ / Dⁿ`, when the order is known.
    pub fn purity(&self) -> Option<f64> {
        let n = self.sites as f64;
        self.order_log2.map(|o| (o - n * f64::from(self.dim).log2()).exp2())
    }

    /// Commuting, admissible and independent.
    pub fn is_valid(&self) -> bool {
        self.noncommuting.is_empty() && self.inadmissible.is_empty() && self.independent()
    }

    /// Valid with `‖S‖ = Dⁿ`.
    pub fn is_pure(&self) -> bool {
        self.is_valid() && self.order_log2.is_some() && self.ranks.iter().all(|&(_, r)| r == self.sites)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// The vector is outside the group's span.
    Absent,
    /// `Π g_i^{m_i}` has the same vector; `phase_offset` is the extra
    /// `ω^{·/2}` exponent separating the query from that product (0 = member).
    Present { exponents: Vec<u32>, phase_offset: u32 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Present { phase_offset: 0, .. })
    }
}

/// Local and correlated subgroups across a bipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSplit {
    /// Generators acting trivially on the second side.
    pub local_first: Vec<PauliOperator>,
    /// Generators acting trivially on the first side.
    pub local_second: Vec<PauliOperator>,
    /// Complement generators completing a basis of the group.
    pub correlated: Vec<PauliOperator>,
}

impl SubgroupSplit {
    pub fn rank_first(&self) -> usize {
        self.local_first.len()
    }
    pub fn rank_second(&self) -> usize {
        self.local_second.len()
    }
    pub fn rank_correlated(&self) -> usize {
        self.correlated.len()
    }
}

impl StabilizerTableau {
    /// Checks shapes and `g^D = +I`. Commutation and independence are left to
    /// [`validate`](Self::validate) so that invalid inputs can be reported.
    pub fn new(dim: u32, generators: Vec<PauliOperator>, parties: Option<Vec<Party>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        let sites = match (generators.first(), &parties) {
            (Some(g), _) => g.sites(),
            (None, Some(p)) => p.len(),
            (None, None) => return Err(Error::Shape("empty tableau without party labels".into())),
        };
        Self::with_sites(dim, sites, generators, parties)
    }

    pub fn with_sites(dim: u32, sites: usize, generators: Vec<PauliOperator>, parties: Option<Vec<Party>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension(dim));
        }
        for g in &generators {
            if g.dim() != dim || g.sites() != sites {
                return Err(Error::Shape(format!(
                    "generator {g} has {} sites of dim {}, tableau has {sites} of dim {dim}",
                    g.sites(),
                    g.dim()
                )));
            }
        }
        if let Some(p) = &parties {
            if p.len() != sites {
                return Err(Error::Shape(format!("{} party labels for {sites} sites", p.len())));
            }
        }
        if let Some(index) = generators.iter().position(|g| !g.is_admissible()) {
            return Err(Error::Inadmissible { index });
        }
        Ok(Self { dim, sites, generators, parties })
    }

    /// Parses generators from text, e.g. `["ZZI", "IZZ", "XXX"]`.
    pub fn from_strs(dim: u32, gens: &[&str], parties: Option<&str>) -> Result<Self> {
        let generators = gens.iter().map(|s| PauliOperator::parse(s, dim)).collect::<Result<Vec<_>>>()?;
        let parties = parties.map(parse_labels).transpose()?;
        Self::new(dim, generators, parties)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<PauliOperator> {
        self.generators
    }

    pub fn parties(&self) -> Option<&[Party]> {
        self.parties.as_deref()
    }

    pub fn require_parties(&self) -> Result<&[Party]> {
        self.parties.as_deref().ok_or(Error::MissingParties)
    }

    pub fn with_parties(mut self, parties: Vec<Party>) -> Result<Self> {
        if parties.len() != self.sites {
            return Err(Error::Shape(format!("{} party labels for {} sites", parties.len(), self.sites)));
        }
        self.parties = Some(parties);
        Ok(self)
    }

    /// Same group data with generators replaced; shape is re-checked.
    pub fn with_generators(&self, generators: Vec<PauliOperator>) -> Result<Self> {
        Self::with_sites(self.dim, self.sites, generators, self.parties.clone())
    }

    pub(crate) fn replace_generators_unchecked(&self, generators: Vec<PauliOperator>) -> Self {
        Self { dim: self.dim, sites: self.sites, generators, parties: self.parties.clone() }
    }

    /// The prime field of the dimension, or a directed error for composite `D`.
    pub fn field(&self) -> Result<PrimeField> {
        if is_prime(self.dim) {
            Ok(PrimeField::new(self.dim))
        } else {
            Err(Error::CompositeDimension(self.dim))
        }
    }

    pub fn vectors(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(|g| g.vector().to_vec()).collect()
    }

    /// Sites with the given label.
    pub fn sites_of(&self, party: Party) -> Result<Vec<usize>> {
        let labels = self.require_parties()?;
        Ok((0..self.sites).filter(|&i| labels[i] == party).collect())
    }

    pub fn validate(&self) -> ValidationReport {
        let k = self.generators.len();
        let mut noncommuting = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if !self.generators[i].commutes_with(&self.generators[j]) {
                    noncommuting.push((i, j));
                }
            }
        }
        let inadmissible = (0..k).filter(|&i| !self.generators[i].is_admissible()).collect();
        let factors = factorize(self.dim);
        let square_free = factors.iter().all(|&(_, m)| m == 1);
        let vectors = self.vectors();
        let ranks: Vec<(u32, usize)> = factors
            .iter()
            .map(|&(p, _)| {
                let f = PrimeField::new(p);
                let reduced: Vec<Vec<u32>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
                (p, linalg::rank(&f, &reduced))
            })
            .collect();
        let order_log2 = square_free.then(|| ranks.iter().map(|&(p, r)| r as f64 * f64::from(p).log2()).sum());
        ValidationReport { noncommuting, inadmissible, ranks, order_log2, generators: k, sites: self.sites, dim: self.dim }
    }

    /// Errors unless the tableau is a pure state over a prime dimension.
    pub fn require_pure(&self) -> Result<PrimeField> {
        let field = self.field()?;
        let report = self.validate();
        if !report.noncommuting.is_empty() {
            let (i, j) = report.noncommuting[0];
            return Err(Error::NotPure(format!("generators {i} and {j} do not commute")));
        }
        if !report.independent() {
            return Err(Error::NotPure("generators are dependent".into()));
        }
        if self.generators.len() != self.sites {
            return Err(Error::NotPure(format!("{} generators for {} sites", self.generators.len(), self.sites)));
        }
        Ok(field)
    }

    /// `Π g_i^{m_i}`.
    pub fn product(&self, exponents: &[u32]) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.dim, self.sites);
        for (g, &m) in self.generators.iter().zip(exponents) {
            if m != 0 {
                acc = acc.mul_unchecked(&g.power(u64::from(m)));
            }
        }
        acc
    }

    pub fn membership(&self, p: &PauliOperator) -> Result<Membership> {
        let field = self.field()?;
        if p.dim() != self.dim || p.sites() != self.sites {
            return Err(Error::Shape(format!("operator {p} does not match the tableau shape")));
        }
        let k = self.generators.len();
        let mut ech = Echelon::new(&field);
        for (i, g) in self.generators.iter().enumerate() {
            ech.insert(g.vector().to_vec(), linalg::unit(&field, k, i));
        }
        Ok(match ech.solve(p.vector(), k) {
            None => Membership::Absent,
            Some(exponents) => {
                let prod = self.product(&exponents);
                let offset = (p.phase() + 2 * self.dim - prod.phase()) % (2 * self.dim);
                Membership::Present { exponents, phase_offset: offset }
            }
        })
    }

    pub fn is_member(&self, p: &PauliOperator) -> Result<bool> {
        Ok(self.membership(p)?.is_member())
    }

    /// Mutual membership of generators.
    pub fn same_group(&self, other: &StabilizerTableau) -> Result<bool> {
        for g in other.generators() {
            if !self.is_member(g)? {
                return Ok(false);
            }
        }
        for g in self.generators() {
            if !other.is_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators `Π g_i^{c_i}` for each coefficient row.
    pub(crate) fn realize(&self, coeffs: &[Vec<u32>]) -> Vec<PauliOperator> {
        coeffs.iter().map(|c| self.product(c)).collect()
    }

    /// Reduced row-echelon generators of the same group, with exact phases.
    /// Equal groups give equal outputs.
    pub fn normalized(&self) -> Result<Self> {
        let field = self.field()?;
        let k = self.generators.len();
        let items: Vec<_> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.vector().to_vec(), linalg::unit(&field, k, i)))
            .collect();
        let basis = linalg::reduced_basis_tagged(&field, &items);
        let coeffs: Vec<Vec<u32>> = basis.into_iter().map(|(_, c)| c).collect();
        Ok(self.replace_generators_unchecked(self.realize(&coeffs)))
    }

    /// Coefficient rows spanning the subgroup that acts trivially on `cols`.
    pub(crate) fn local_coefficients(&self, field: &PrimeField, cols: &[usize]) -> Vec<Vec<u32>> {
        let vectors = self.vectors();
        let raw = linalg::left_kernel(field, &vectors, cols);
        // re-express in row-echelon order of the images so the output is canonical
        let items: Vec<_> = raw
            .into_iter()
            .map(|c| {
                let img = linalg::combine(field, &c, &vectors, 2 * self.sites);
                (img, c)
            })
            .collect();
        linalg::reduced_basis_tagged(field, &items).into_iter().map(|(_, c)| c).collect()
    }

    /// Maximal local subgroups on both sides of `cut` plus a correlated complement.
    pub fn subgroup_split(&self, cut: &Cut) -> Result<SubgroupSplit> {
        let field = self.require_pure()?;
        if cut.sites() != self.sites {
            return Err(Error::Shape(format!("cut over {} sites, tableau has {}", cut.sites(), self.sites)));
        }
        let first = self.local_coefficients(&field, &cut.columns(false));
        let second = self.local_coefficients(&field, &cut.columns(true));
        let k = self.generators.len();
        let known: Vec<Vec<u32>> = first.iter().chain(&second).cloned().collect();
        let units = (0..k).map(|i| linalg::unit(&field, k, i));
        let complement = linalg::extend_basis(&field, &known, units);
        Ok(SubgroupSplit {
            local_first: self.realize(&first),
            local_second: self.realize(&second),
            correlated: self.realize(&complement),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let herr = |msg: String| Error::Parse { line: hline, msg };
        let (mut dim, mut sites, mut parties) = (None, None, None);
        for tok in header.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| herr(format!("bad header token '{tok}'")))?;
            match k {
                "dim" => dim = Some(v.parse::<u32>().map_err(|_| herr(format!("bad dim '{v}'")))?),
                "sites" => sites = Some(v.parse::<usize>().map_err(|_| herr(format!("bad sites '{v}'")))?),
                "parties" => parties = Some(parse_labels(v).map_err(|e| herr(e.to_string()))?),
                "version" => {
                    if v != FORMAT_VERSION.to_string() {
                        return Err(herr(format!("unsupported version '{v}'")));
                    }
                }
                _ => return Err(herr(format!("unknown header key '{k}'"))),
            }
        }
        let dim = dim.ok_or_else(|| herr("header lacks dim".into()))?;
        let sites = sites.ok_or_else(|| herr("header lacks sites".into()))?;
        if dim < 2 {
            return Err(herr(format!("dimension must be at least 2, got {dim}")));
        }
        if sites == 0 {
            return Err(herr("sites must be positive".into()));
        }
        let mut generators = Vec::new();
        for (line, l) in lines {
            let g = PauliOperator::parse(l, dim).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line, msg },
                other => Error::Parse { line, msg: other.to_string() },
            })?;
            if g.sites() != sites {
                return Err(Error::Parse { line, msg: format!("generator has {} sites, header says {sites}", g.sites()) });
            }
            generators.push(g);
        }
        Self::with_sites(dim, sites, generators, parties).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { line: hline, msg: other.to_string() },
        })
    }

    pub fn header(&self) -> String {
        match &self.parties {
            Some(p) => format!("dim={} sites={} parties={}", self.dim, self.sites, format_labels(p)),
            None => format!("dim={} sites={}", self.dim, self.sites),
        }
    }
}

impl fmt::Display for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A seeded random pure stabilizer state on `n` sites of prime dimension `dim`.
///
/// Each new generator is drawn from the commutant of the previous ones,
/// outside their span, then given a random admissible phase. The result is
/// deterministic in `seed`; the distribution is not uniform over states.
pub fn random_pure_tableau(n: usize, dim: u32, seed: u64) -> Result<StabilizerTableau> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_pure_with(n, dim, &mut rng)
}

pub fn random_pure_with<R: Rng>(n: usize, dim: u32, rng: &mut R) -> Result<StabilizerTableau> {
    if !is_prime(dim) {
        return Err(Error::CompositeDimension(dim));
    }
    if n == 0 {
        return Err(Error::Shape("need at least one site".into()));
    }
    let field = PrimeField::new(dim);
    let len = 2 * n;
    let mut vectors: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut generators = Vec::with_capacity(n);
    for _ in 0..n {
        // rows w_g with w_g . v = symplectic(g, v)
        let constraints: Vec<Vec<u32>> = vectors
            .iter()
            .map(|g| {
                let mut w = vec![0u32; len];
                for i in 0..n {
                    w[2 * i] = (dim - g[2 * i + 1]) % dim;
                    w[2 * i + 1] = g[2 * i];
                }
                w
            })
            .collect();
        let commutant = linalg::right_kernel(&field, &constraints, len);
        let fresh = linalg::extend_basis(&field, &vectors, commutant);
        let mut coeffs: Vec<u32> = (0..fresh.len()).map(|_| rng.random_range(0..dim)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            let i = rng.random_range(0..coeffs.len());
            coeffs[i] = rng.random_range(1..dim);
        }
        let mut v = linalg::combine(&field, &coeffs, &fresh, len);
        for g in &vectors {
            let c = rng.random_range(0..dim);
            linalg::axpy(&field, &mut v, c, g);
        }
        let p = PauliOperator::new(dim, 0, v.clone())?.admissible_form().expect("admissible phase exists");
        let shift = 2 * rng.random_range(0..dim);
        generators.push(p.add_phase(i64::from(shift)));
        vectors.push(v);
    }
    StabilizerTableau::new(dim, generators, None)
}

/// Random labels with every party present (requires `n >= 3`), or `None`.
pub fn random_tripartition<R: Rng>(n: usize, rng: &mut R) -> Option<Vec<Party>> {
    if n < 3 {
        return None;
    }
    loop {
        let labels: Vec<Party> = (0..n)
            .map(|_| match rng.random_range(0..3) {
                0 => Party::A,
                1 => Party::B,
                _ => Party::C,
            })
            .collect();
        if [Party::A, Party::B, Party::C].iter().all(|p| labels.contains(p)) {
            return Some(labels);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz() -> StabilizerTableau {
        StabilizerTableau::from_strs(2, &["ZZI", "IZZ", "XXX"], Some("ABC")).unwrap()
    }

    fn op(s: &str, d: u32) -> PauliOperator {
        PauliOperator::parse(s, d).unwrap()
    }

    #[test]
    fn ghz_is_valid_and_pure() {
        let r = ghz().validate();
        assert!(r.is_valid());
        assert!(r.is_pure());
        assert!((r.purity().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_and_anticommuting_rows_are_invalid() {
        let dup = StabilizerTableau::from_strs(2, &["XI", "XI"], None).unwrap().validate();
        assert!(!dup.independent());
        assert!(!dup.is_valid());
        let anti = StabilizerTableau::from_strs(2, &["XI", "ZI"], None).unwrap().validate();
        assert_eq!(anti.noncommuting, vec![(0, 1)]);
        assert!(!anti.is_valid());
    }

    #[test]
    fn inadmissible_generator_is_rejected() {
        let g = PauliOperator::new(2, 0, vec![1, 1]).unwrap();
        assert_eq!(StabilizerTableau::new(2, vec![g], None), Err(Error::Inadmissible { index: 0 }));
    }

    #[test]
    fn ghz_membership() {
        let t = ghz();
        assert_eq!(
            t.membership(&op("ZZI", 2)).unwrap(),
            Membership::Present { exponents: vec![1, 0, 0], phase_offset: 0 }
        );
        assert!(t.is_member(&op("ZIZ", 2)).unwrap());
        assert_eq!(t.membership(&op("XII", 2)).unwrap(), Membership::Absent);
        assert!(!t.is_member(&op("-XXX", 2)).unwrap());
        assert!(t.is_member(&op("-YYX", 2)).unwrap());
    }

    #[test]
    fn composite_membership_is_refused() {
        let t = StabilizerTableau::from_strs(6, &["x1z0"], None).unwrap();
        assert_eq!(t.membership(&op("x1z0", 6)), Err(Error::CompositeDimension(6)));
    }

    #[test]
    fn ghz_split_a_bc() {
        let t = ghz();
        let cut = Cut::parse("A|BC", t.parties(), 3).unwrap();
        let s = t.subgroup_split(&cut).unwrap();
        assert_eq!((s.rank_first(), s.rank_second(), s.rank_correlated()), (0, 1, 2));
        assert_eq!(s.local_second, vec![op("IZZ", 2)]);
    }

    #[test]
    fn product_split() {
        let t = StabilizerTableau::from_strs(2, &["XI", "IX"], None).unwrap();
        let s = t.subgroup_split(&Cut::new(vec![true, false])).unwrap();
        assert_eq!((s.rank_first(), s.rank_second(), s.rank_correlated()), (1, 1, 0));
    }

    #[test]
    fn four_qubit_ab_c_split_is_fully_correlated() {
        let t = StabilizerTableau::from_strs(2, &["XIXI", "ZIZI", "IXIX", "IZIZ"], Some("ABCC")).unwrap();
        let s = t.subgroup_split(&Cut::parse("AB|C", t.parties(), 4).unwrap()).unwrap();
        assert_eq!(s.rank_correlated(), 4);
    }

    #[test]
    fn random_tableaux_are_deterministic_and_pure() {
        assert_eq!(random_pure_tableau(5, 3, 9).unwrap(), random_pure_tableau(5, 3, 9).unwrap());
        for seed in 0..100 {
            let t = random_pure_tableau(6, 2, seed).unwrap();
            assert!(t.validate().is_pure(), "seed {seed}");
        }
        for seed in 0..20 {
            assert!(random_pure_tableau(4, 5, seed).unwrap().validate().is_pure());
        }
    }

    #[test]
    fn normalized_is_a_group_invariant() {
        let t = ghz();
        let shuffled = StabilizerTableau::from_strs(2, &["XXX", "ZIZ", "ZZI"], Some("ABC")).unwrap();
        assert_eq!(t.normalized().unwrap(), shuffled.normalized().unwrap());
        assert!(t.same_group(&shuffled).unwrap());
    }

    #[test]
    fn file_round_trip() {
        let t = ghz();
        let text = t.to_string();
        assert_eq!(text, "dim=2 sites=3 parties=ABC\nZZI\nIZZ\nXXX\n");
        assert_eq!(StabilizerTableau::parse(&text).unwrap(), t);
        let v = StabilizerTableau::parse("version=1 dim=3 sites=2\n# comment\nx1z0.x0z0\n\nx0z0.x0z1\n").unwrap();
        assert_eq!(v.generators().len(), 2);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let e = StabilizerTableau::parse("dim=2 sites=2\nXX\nXQ\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        assert!(StabilizerTableau::parse("dim=2\nXX\n").is_err());
        assert!(StabilizerTableau::parse("dim=2 sites=3\nXX\n").is_err());
        assert!(StabilizerTableau::parse("dim=2 sites=2 parties=AQ\nXX\n").is_err());
    }
}
