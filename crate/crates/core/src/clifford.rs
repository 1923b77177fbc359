//! Clifford conjugation, Pauli measurement updates, and the local reduction
//! that peels unentangled sites off a party.
//!
//! Conjugation images, with `ω^{1/2}` tracked in the phase exponent:
//!
//! | gate | `X ↦` | `Z ↦` |
//! |------|-------|-------|
//! | `F` | `Z^{-1}` | `X` |
//! | `Q^α` | `X^{α^{-1}}` | `Z^α` |
//! | `W` | `XZ` (odd `D`), `ω^{1/2} XZ` (even `D`) | `Z` |
//! | `Z` | `ω^{-1} X` | `Z` |
//! | `X` | `X` | `ω Z` |
//!
//! `CX@c,t` maps `X_c ↦ X_c X_t^{-1}`, `Z_t ↦ Z_c Z_t` and fixes `X_t`, `Z_c`.
//! `CZ@a,b` maps `X_a ↦ X_a Z_b^{-1}`, `X_b ↦ Z_a^{-1} X_b` and fixes both `Z`.
//!
//! # Gate log
//!
//! One gate per line with 0-based sites: `F@3`, `Q^2@1`, `W@2`, `Z@0`, `X@0`,
//! `CX@1,4`, `CZ@2,3`. Blank lines and `#` comments are skipped.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modular::inverse;
use crate::partition::Party;
use crate::pauli::PauliOperator;
use crate::tableau::{Membership, StabilizerTableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    Fourier(usize),
    Multiplier { site: usize, alpha: u32 },
    Phase(usize),
    ZShift(usize),
    XShift(usize),
    Cx { control: usize, target: usize },
    Cz(usize, usize),
}

impl CliffordGate {
    pub fn sites(&self) -> Vec<usize> {
        match *self {
            CliffordGate::Fourier(s)
            | CliffordGate::Multiplier { site: s, .. }
            | CliffordGate::Phase(s)
            | CliffordGate::ZShift(s)
            | CliffordGate::XShift(s) => vec![s],
            CliffordGate::Cx { control, target } => vec![control, target],
            CliffordGate::Cz(a, b) => vec![a, b],
        }
    }

    fn check(&self, dim: u32, sites: usize) -> Result<()> {
        let s = self.sites();
        if let Some(&site) = s.iter().find(|&&x| x >= sites) {
            return Err(Error::SiteOutOfRange { site, sites });
        }
        if s.len() == 2 && s[0] == s[1] {
            return Err(Error::RepeatedSite(s[0]));
        }
        if let CliffordGate::Multiplier { alpha, .. } = *self {
            if inverse(alpha, dim).is_none() {
                return Err(Error::NotInvertible { alpha, dim });
            }
        }
        Ok(())
    }

    /// Images of `X_s` and `Z_s` for each site `s` the gate touches.
    fn images(&self, dim: u32, n: usize) -> Vec<(usize, PauliOperator, PauliOperator)> {
        let d = dim;
        let single = |s: usize, x: u32, z: u32, phase: u32| PauliOperator::single(d, n, s, x, z).with_phase(phase);
        match *self {
            CliffordGate::Fourier(s) => vec![(s, single(s, 0, d - 1, 0), single(s, 1, 0, 0))],
            CliffordGate::Multiplier { site, alpha } => {
                let inv = inverse(alpha, d).expect("checked");
                vec![(site, single(site, inv, 0, 0), single(site, 0, alpha, 0))]
            }
            CliffordGate::Phase(s) => {
                let half = if d % 2 == 0 { 1 } else { 0 };
                vec![(s, single(s, 1, 1, half), single(s, 0, 1, 0))]
            }
            CliffordGate::ZShift(s) => vec![(s, single(s, 1, 0, 2 * d - 2), single(s, 0, 1, 0))],
            CliffordGate::XShift(s) => vec![(s, single(s, 1, 0, 0), single(s, 0, 1, 2))],
            CliffordGate::Cx { control, target } => {
                let mut xc = single(control, 1, 0, 0);
                xc.set_site(target, d - 1, 0);
                let mut zt = single(target, 0, 1, 0);
                zt.set_site(control, 0, 1);
                vec![(control, xc, single(control, 0, 1, 0)), (target, single(target, 1, 0, 0), zt)]
            }
            CliffordGate::Cz(a, b) => {
                let mut xa = single(a, 1, 0, 0);
                xa.set_site(b, 0, d - 1);
                let mut xb = single(b, 1, 0, 0);
                xb.set_site(a, 0, d - 1);
                vec![(a, xa, single(a, 0, 1, 0)), (b, xb, single(b, 0, 1, 0))]
            }
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CliffordGate::Fourier(s) => write!(f, "F@{s}"),
            CliffordGate::Multiplier { site, alpha } => write!(f, "Q^{alpha}@{site}"),
            CliffordGate::Phase(s) => write!(f, "W@{s}"),
            CliffordGate::ZShift(s) => write!(f, "Z@{s}"),
            CliffordGate::XShift(s) => write!(f, "X@{s}"),
            CliffordGate::Cx { control, target } => write!(f, "CX@{control},{target}"),
            CliffordGate::Cz(a, b) => write!(f, "CZ@{a},{b}"),
        }
    }
}

impl FromStr for CliffordGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { line: 0, msg: format!("bad gate '{s}'") };
        let (name, args) = s.trim().split_once('@').ok_or_else(err)?;
        let nums: Vec<usize> = args.split(',').map(|a| a.trim().parse::<usize>()).collect::<std::result::Result<_, _>>().map_err(|_| err())?;
        let one = || if nums.len() == 1 { Ok(nums[0]) } else { Err(err()) };
        let two = || if nums.len() == 2 { Ok((nums[0], nums[1])) } else { Err(err()) };
        Ok(match name {
            "F" => CliffordGate::Fourier(one()?),
            "W" => CliffordGate::Phase(one()?),
            "Z" => CliffordGate::ZShift(one()?),
            "X" => CliffordGate::XShift(one()?),
            "CX" => {
                let (control, target) = two()?;
                CliffordGate::Cx { control, target }
            }
            "CZ" => {
                let (a, b) = two()?;
                CliffordGate::Cz(a, b)
            }
            _ => {
                let alpha = name.strip_prefix("Q^").ok_or_else(err)?.parse::<u32>().map_err(|_| err())?;
                CliffordGate::Multiplier { site: one()?, alpha }
            }
        })
    }
}

pub fn parse_gate_log(text: &str) -> Result<Vec<CliffordGate>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'))
        .map(|(i, l)| {
            l.parse::<CliffordGate>().map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                other => other,
            })
        })
        .collect()
}

pub fn format_gate_log(gates: &[CliffordGate]) -> String {
    gates.iter().map(|g| format!("{g}\n")).collect()
}

/// `U p U†`.
pub fn conjugate(p: &PauliOperator, gate: &CliffordGate) -> Result<PauliOperator> {
    gate.check(p.dim(), p.sites())?;
    let mut rest = p.clone();
    let images = gate.images(p.dim(), p.sites());
    for (s, _, _) in &images {
        rest.set_site(*s, 0, 0);
    }
    let mut out = rest;
    for (s, ix, iz) in &images {
        let (x, z) = p.site(*s);
        out = out.mul_unchecked(&ix.power(u64::from(x))).mul_unchecked(&iz.power(u64::from(z)));
    }
    Ok(out)
}

pub fn apply_clifford(t: &StabilizerTableau, gate: &CliffordGate) -> Result<StabilizerTableau> {
    gate.check(t.dim(), t.sites())?;
    let gens = t.generators().iter().map(|g| conjugate(g, gate)).collect::<Result<Vec<_>>>()?;
    Ok(t.replace_generators_unchecked(gens))
}

pub fn apply_all(t: &StabilizerTableau, gates: &[CliffordGate]) -> Result<StabilizerTableau> {
    gates.iter().try_fold(t.clone(), |acc, g| apply_clifford(&acc, g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub operator: PauliOperator,
    /// The eigenvalue obtained is `ω^outcome`.
    pub outcome: u32,
    /// Generator replaced by the measured operator; `None` when deterministic.
    pub replaced: Option<usize>,
}

impl MeasurementRecord {
    pub fn deterministic(&self) -> bool {
        self.replaced.is_none()
    }
}

/// How the outcome of a random measurement is chosen.
pub enum Outcome<'r, R: Rng> {
    Fixed(u32),
    Random(&'r mut R),
}

fn prepare(t: &StabilizerTableau, p: &PauliOperator) -> Result<()> {
    t.field()?;
    if p.dim() != t.dim() || p.sites() != t.sites() {
        return Err(Error::Shape(format!("operator {p} does not match the tableau shape")));
    }
    if p.has_zero_vector() {
        return Err(Error::IdentityOperator);
    }
    if !p.is_admissible() {
        return Err(Error::Inadmissible { index: 0 });
    }
    Ok(())
}

/// Measures `p`, keeping the `ω^outcome` branch.
///
/// If `p` commutes with every generator the outcome is forced; asking for a
/// different one is an error. Otherwise the lowest-index anticommuting
/// generator is multiplied into every other anticommuting one so that it
/// alone anticommutes, and is then replaced by `ω^{-outcome} p`.
pub fn measure(t: &StabilizerTableau, p: &PauliOperator, outcome: u32) -> Result<(StabilizerTableau, MeasurementRecord)> {
    measure_with::<rand_chacha::ChaCha8Rng>(t, p, Outcome::Fixed(outcome))
}

/// Measurement with the outcome of a non-deterministic branch drawn from a
/// ChaCha8 stream seeded with `seed`.
pub fn measure_seeded(t: &StabilizerTableau, p: &PauliOperator, seed: u64) -> Result<(StabilizerTableau, MeasurementRecord)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    measure_with(t, p, Outcome::Random(&mut rng))
}

pub fn measure_with<R: Rng>(t: &StabilizerTableau, p: &PauliOperator, outcome: Outcome<'_, R>) -> Result<(StabilizerTableau, MeasurementRecord)> {
    prepare(t, p)?;
    let d = t.dim();
    let products: Vec<u32> = t.generators().iter().map(|g| g.symplectic_unchecked(p)).collect();
    let Some(r) = products.iter().position(|&s| s != 0) else {
        let forced = match t.membership(p)? {
            Membership::Present { phase_offset, .. } => phase_offset / 2,
            Membership::Absent => {
                return Err(Error::NotPure(format!("{p} commutes with the group but is not in it")));
            }
        };
        if let Outcome::Fixed(requested) = outcome {
            if requested % d != forced {
                return Err(Error::OutcomeContradiction { forced, requested });
            }
        }
        return Ok((t.clone(), MeasurementRecord { operator: p.clone(), outcome: forced, replaced: None }));
    };
    let mu = match outcome {
        Outcome::Fixed(o) => o % d,
        Outcome::Random(rng) => rng.random_range(0..d),
    };
    let sr_inv = inverse(products[r], d).expect("prime dimension");
    let pivot = t.generators()[r].clone();
    let mut gens = t.generators().to_vec();
    for (j, g) in gens.iter_mut().enumerate() {
        if j != r && products[j] != 0 {
            let m = (d - products[j]) * sr_inv % d;
            *g = g.mul_unchecked(&pivot.power(u64::from(m)));
        }
    }
    gens[r] = p.clone().add_phase(-2 * i64::from(mu));
    Ok((t.replace_generators_unchecked(gens), MeasurementRecord { operator: p.clone(), outcome: mu, replaced: Some(r) }))
}

/// Gates mapping `p` to `+X` on one site of its support (returned) and the
/// identity elsewhere.
pub fn reduce_to_x1(p: &PauliOperator) -> Result<(Vec<CliffordGate>, usize)> {
    let d = p.dim();
    if !crate::modular::is_prime(d) {
        return Err(Error::CompositeDimension(d));
    }
    if p.has_zero_vector() {
        return Err(Error::IdentityOperator);
    }
    if !p.is_admissible() {
        return Err(Error::Inadmissible { index: 0 });
    }
    let support = p.support();
    let target = support[0];
    let mut gates = Vec::new();
    let mut cur = p.clone();
    let mut push = |g: CliffordGate, cur: &mut PauliOperator| -> Result<()> {
        *cur = conjugate(cur, &g)?;
        gates.push(g);
        Ok(())
    };
    for &s in &support {
        if cur.site(s).0 == 0 {
            push(CliffordGate::Fourier(s), &mut cur)?;
        }
        let (x, z) = cur.site(s);
        let m = (d - z) * inverse(x, d).expect("nonzero") % d;
        for _ in 0..m {
            push(CliffordGate::Phase(s), &mut cur)?;
        }
        if x != 1 {
            push(CliffordGate::Multiplier { site: s, alpha: x }, &mut cur)?;
        }
    }
    for &s in &support[1..] {
        push(CliffordGate::Cx { control: target, target: s }, &mut cur)?;
    }
    debug_assert_eq!(cur.support(), vec![target]);
    debug_assert_eq!(cur.phase() % 2, 0);
    for _ in 0..cur.phase() / 2 {
        push(CliffordGate::ZShift(target), &mut cur)?;
    }
    debug_assert_eq!(cur, PauliOperator::single(d, p.sites(), target, 1, 0));
    Ok((gates, target))
}

/// Output of [`strip_separable_sites`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    /// The tableau after the gates, on all sites; each stripped site `s` has a
    /// generator `X_s` and no other generator touches it.
    pub full: StabilizerTableau,
    /// `full` without the stripped sites and their `X_s` generators.
    pub reduced: StabilizerTableau,
    pub gates: Vec<CliffordGate>,
    pub stripped: Vec<usize>,
}

/// Uses gates on `party` alone to turn every generator local to that party
/// into a single-site `X` and peels those sites off.
pub fn strip_separable_sites(t: &StabilizerTableau, party: Party) -> Result<Stripped> {
    let field = t.require_pure()?;
    let labels = t.require_parties()?.to_vec();
    let d = t.dim();
    let n = t.sites();
    let mut cur = t.clone();
    let mut gates = Vec::new();
    let mut stripped: Vec<usize> = Vec::new();
    loop {
        let frozen: Vec<usize> = (0..n)
            .filter(|&i| labels[i] != party || stripped.contains(&i))
            .flat_map(|i| [2 * i, 2 * i + 1])
            .collect();
        let locals = cur.local_coefficients(&field, &frozen);
        let Some(coeffs) = locals.first() else { break };
        let local = cur.product(coeffs);
        let (seq, site) = reduce_to_x1(&local)?;
        cur = apply_all(&cur, &seq)?;
        gates.extend(seq);
        let x = PauliOperator::single(d, n, site, 1, 0);
        let exps = match cur.membership(&x)? {
            Membership::Present { exponents, phase_offset: 0 } => exponents,
            _ => unreachable!("reduced local generator must be in the group"),
        };
        let j = exps.iter().position(|&e| e != 0).expect("nonzero combination");
        let mut gens = cur.generators().to_vec();
        gens[j] = x.clone();
        for (i, g) in gens.iter_mut().enumerate() {
            let (gx, gz) = g.site(site);
            debug_assert!(i == j || gz == 0);
            if i != j && gx != 0 {
                *g = g.mul_unchecked(&x.power(u64::from(d - gx)));
            }
        }
        cur = cur.replace_generators_unchecked(gens);
        stripped.push(site);
    }
    let keep: Vec<usize> = (0..n).filter(|i| !stripped.contains(i)).collect();
    let reduced_gens = cur
        .generators()
        .iter()
        .filter(|g| !(g.support().len() == 1 && stripped.contains(&g.support()[0])))
        .map(|g| {
            let mut v = Vec::with_capacity(2 * keep.len());
            for &i in &keep {
                let (x, z) = g.site(i);
                v.push(x);
                v.push(z);
            }
            PauliOperator::new(d, g.phase(), v)
        })
        .collect::<Result<Vec<_>>>();
    let parties = keep.iter().map(|&i| labels[i]).collect();
    let reduced = StabilizerTableau::with_sites(d, keep.len(), reduced_gens?, Some(parties))?;
    Ok(Stripped { full: cur, reduced, gates, stripped })
}
