//! Chinese-remainder splitting of square-free qudit stabilizer states into
//! prime-dimension components.
//!
//! Under `|k⟩ ↦ ⊗_i |k mod d_i⟩`, `X_D ↦ ⊗ X_{d_i}` and
//! `Z_D ↦ ⊗ Z_{d_i}^{r_i}` with `r_i = (D/d_i)^{-1} mod d_i`, because
//! `Σ r_i/d_i ≡ 1/D (mod 1)`. Each component phase is chosen admissible and
//! the leftover root of unity is absorbed so recomposition is exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::modular::{factorize, inverse, reduce};
use crate::par::Execution;
use crate::pauli::PauliOperator;
use crate::tableau::StabilizerTableau;
use crate::trimming::{check_trim, TrimVerdict};

/// Distinct prime factors of a square-free `dim`.
pub fn factor_square_free(dim: u32) -> Result<Vec<u32>> {
    if dim < 2 {
        return Err(Error::BadDimension(dim));
    }
    let f = factorize(dim);
    if let Some(&(p, _)) = f.iter().find(|&&(_, k)| k > 1) {
        return Err(Error::NotSquareFree { dim, prime: p });
    }
    Ok(f.into_iter().map(|(p, _)| p).collect())
}

/// `(D/d)^{-1} mod d` for each factor.
pub fn residue_exponents(dim: u32, factors: &[u32]) -> Vec<u32> {
    factors.iter().map(|&d| inverse((dim / d) % d, d).expect("coprime factors")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtDecomposition {
    pub dim: u32,
    pub factors: Vec<u32>,
    pub residues: Vec<u32>,
    pub components: Vec<StabilizerTableau>,
}

fn split_operator(p: &PauliOperator, factors: &[u32], residues: &[u32]) -> Vec<PauliOperator> {
    let dim = p.dim();
    let mut parts: Vec<PauliOperator> = factors
        .iter()
        .zip(residues)
        .map(|(&d, &r)| {
            let v: Vec<u32> = p
                .vector()
                .chunks(2)
                .flat_map(|xz| [xz[0] % d, (xz[1] % d) * r % d])
                .collect();
            PauliOperator::new(d, 0, v).expect("shape").admissible_form().expect("admissible phase exists")
        })
        .collect();
    // e^{iπλ/D} = c · Π e^{iπλ_i/d_i}, c = ω_D^k
    let sum: i64 = parts.iter().zip(factors).map(|(q, &d)| i64::from(q.phase()) * i64::from(dim / d)).sum();
    let diff = i64::from(p.phase()) - sum;
    debug_assert_eq!(diff.rem_euclid(2), 0, "admissible operators differ by a root of unity");
    let k = reduce(diff.div_euclid(2), dim);
    for ((q, &d), &r) in parts.iter_mut().zip(factors).zip(residues) {
        let shift = 2 * i64::from(k % d) * i64::from(r);
        *q = q.clone().add_phase(shift);
    }
    parts
}

fn crt_combine(values: &[u32], factors: &[u32]) -> u32 {
    let dim: u32 = factors.iter().product();
    let mut acc = 0u64;
    for (&v, &d) in values.iter().zip(factors) {
        let m = dim / d;
        let inv = inverse(m % d, d).expect("coprime factors");
        acc += u64::from(v) * u64::from(m) * u64::from(inv);
    }
    (acc % u64::from(dim)) as u32
}

fn join_operator(parts: &[PauliOperator], factors: &[u32]) -> PauliOperator {
    let dim: u32 = factors.iter().product();
    let len = parts[0].vector().len();
    let mut v = vec![0u32; len];
    for j in 0..len {
        let comps: Vec<u32> = parts
            .iter()
            .zip(factors)
            .map(|(q, &d)| if j % 2 == 0 { q.vector()[j] } else { q.vector()[j] * ((dim / d) % d) % d })
            .collect();
        v[j] = crt_combine(&comps, factors);
    }
    let phase: u64 = parts.iter().zip(factors).map(|(q, &d)| u64::from(q.phase()) * u64::from(dim / d)).sum();
    PauliOperator::new(dim, (phase % u64::from(2 * dim)) as u32, v).expect("shape")
}

/// Splits a square-free tableau into one pure tableau per prime factor.
pub fn crt_decompose(t: &StabilizerTableau) -> Result<CrtDecomposition> {
    let dim = t.dim();
    let factors = factor_square_free(dim)?;
    let residues = residue_exponents(dim, &factors);
    let split: Vec<Vec<PauliOperator>> =
        t.generators().iter().map(|g| split_operator(g, &factors, &residues)).collect();
    for (g, parts) in t.generators().iter().zip(&split) {
        assert_eq!(&join_operator(parts, &factors), g, "recomposition must reproduce {g}");
    }
    let mut components = Vec::with_capacity(factors.len());
    for (i, &d) in factors.iter().enumerate() {
        let gens = split.iter().map(|parts| parts[i].clone()).collect();
        let c = StabilizerTableau::with_sites(d, t.sites(), gens, t.parties().map(<[_]>::to_vec))?;
        c.require_pure().map_err(|e| match e {
            Error::NotPure(msg) => Error::NotPure(format!("component of dimension {d}: {msg}")),
            other => other,
        })?;
        components.push(c);
    }
    Ok(CrtDecomposition { dim, factors, residues, components })
}

impl CrtDecomposition {
    /// Inverse mapping back to dimension `D`, generator by generator.
    pub fn recompose(&self) -> Result<StabilizerTableau> {
        let n = self.components[0].generators().len();
        if self.components.iter().any(|c| c.generators().len() != n) {
            return Err(Error::Shape("components have different generator counts".into()));
        }
        let gens = (0..n)
            .map(|j| {
                let parts: Vec<PauliOperator> = self.components.iter().map(|c| c.generators()[j].clone()).collect();
                join_operator(&parts, &self.factors)
            })
            .collect();
        StabilizerTableau::with_sites(
            self.dim,
            self.components[0].sites(),
            gens,
            self.components[0].parties().map(<[_]>::to_vec),
        )
    }

    /// Builds the composite state `⊗ components` (all on the same sites).
    pub fn from_components(components: Vec<StabilizerTableau>) -> Result<Self> {
        let factors: Vec<u32> = components.iter().map(StabilizerTableau::dim).collect();
        let dim: u32 = factors.iter().product();
        if factor_square_free(dim)? != factors {
            return Err(Error::Shape("components must have distinct ascending prime dimensions".into()));
        }
        let residues = residue_exponents(dim, &factors);
        Ok(Self { dim, factors, residues, components })
    }
}

impl fmt::Display for CrtDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        writeln!(f, "crt dim={} factors={} residues={}", self.dim, list(&self.factors), list(&self.residues))?;
        for ((d, r), c) in self.factors.iter().zip(&self.residues).zip(&self.components) {
            writeln!(f, "[component dim={d} residue={r}]")?;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareFreeVerdict {
    pub factors: Vec<u32>,
    pub components: Vec<TrimVerdict>,
    /// All components trimmable within the stabilizer formalism.
    pub feasible: bool,
}

impl SquareFreeVerdict {
    pub fn failing_factors(&self) -> Vec<u32> {
        self.factors.iter().zip(&self.components).filter(|(_, v)| !v.feasible).map(|(&d, _)| d).collect()
    }
}

impl fmt::Display for SquareFreeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, v) in self.factors.iter().zip(&self.components) {
            writeln!(
                f,
                "component dim={d}: {} (E(A|BC) = {} bits, pairs = {}, B-free rank = {})",
                if v.feasible { "trimmable" } else { "not trimmable" },
                v.initial_bits,
                v.pair_count,
                v.b_free_rank
            )?;
        }
        if self.feasible {
            writeln!(f, "overall: stabilizer-trimmable")
        } else {
            let bad = self.failing_factors().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            writeln!(f, "overall: not stabilizer-trimmable (failing components: {bad})")?;
            writeln!(f, "note: trimming may still be possible with non-Clifford operations such as cross-component teleportation; not attempted")
        }
    }
}

pub fn trim_square_free(t: &StabilizerTableau) -> Result<SquareFreeVerdict> {
    trim_square_free_with(t, Execution::default())
}

pub fn trim_square_free_with(t: &StabilizerTableau, exec: Execution) -> Result<SquareFreeVerdict> {
    t.require_parties()?;
    let dec = crt_decompose(t)?;
    let components =
        exec.map(dec.components.len(), |i| check_trim(&dec.components[i])).into_iter().collect::<Result<Vec<_>>>()?;
    let feasible = components.iter().all(|v| v.feasible);
    Ok(SquareFreeVerdict { factors: dec.factors, components, feasible })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> StabilizerTableau {
        StabilizerTableau::from_strs(6, &["x1z0.x0z0.x0z3", "x0z0.x1z0.x0z2", "x0z3.x0z2.x1z0"], Some("ABC")).unwrap()
    }

    fn tab(d: u32, gens: &[&str]) -> StabilizerTableau {
        StabilizerTableau::from_strs(d, gens, Some("ABC")).unwrap()
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_square_free(6).unwrap(), vec![2, 3]);
        assert_eq!(factor_square_free(2).unwrap(), vec![2]);
        assert_eq!(factor_square_free(30).unwrap(), vec![2, 3, 5]);
        assert_eq!(factor_square_free(12), Err(Error::NotSquareFree { dim: 12, prime: 2 }));
        assert_eq!(factor_square_free(4), Err(Error::NotSquareFree { dim: 4, prime: 2 }));
        assert_eq!(factor_square_free(1), Err(Error::BadDimension(1)));
    }

    #[test]
    fn residues_for_six_and_ten() {
        assert_eq!(residue_exponents(6, &[2, 3]), vec![1, 2]);
        assert_eq!(residue_exponents(10, &[2, 5]), vec![1, 3]);
    }

    #[test]
    fn six_dimensional_example() {
        let dec = crt_decompose(&example()).unwrap();
        assert_eq!(dec.residues, vec![1, 2]);
        let qubit = tab(2, &["XIZ", "IXI", "ZIX"]);
        let qutrit = tab(3, &["x1z0.x0z0.x0z0", "x0z0.x1z0.x0z1", "x0z0.x0z1.x1z0"]);
        assert!(dec.components[0].same_group(&qubit).unwrap());
        assert!(dec.components[1].same_group(&qutrit).unwrap());
        assert_eq!(dec.recompose().unwrap(), example());
    }

    #[test]
    fn example_is_not_stabilizer_trimmable() {
        let v = trim_square_free(&example()).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.failing_factors(), vec![2]);
        assert!(v.components[1].feasible);
        assert!(v.to_string().contains("not stabilizer-trimmable"));
    }

    #[test]
    fn two_feasible_components_give_a_feasible_state() {
        let ghz2 = tab(2, &["ZZI", "IZZ", "XXX"]);
        let ghz3 = tab(3, &["x0z1.x0z2.x0z0", "x0z0.x0z1.x0z2", "x1z0.x1z0.x1z0"]);
        let t = CrtDecomposition::from_components(vec![ghz2.clone(), ghz3.clone()]).unwrap().recompose().unwrap();
        assert_eq!(t.dim(), 6);
        let dec = crt_decompose(&t).unwrap();
        assert!(dec.components[0].same_group(&ghz2).unwrap());
        assert!(dec.components[1].same_group(&ghz3).unwrap());
        let v = trim_square_free(&t).unwrap();
        assert!(v.feasible && v.components.iter().all(|c| c.feasible));
    }

    #[test]
    fn prime_dimension_is_a_single_component() {
        let t = tab(2, &["ZZI", "IZZ", "XXX"]);
        let dec = crt_decompose(&t).unwrap();
        assert_eq!(dec.components, vec![t.clone()]);
        assert_eq!(trim_square_free(&t).unwrap().components[0], check_trim(&t).unwrap());
    }

    #[test]
    fn dependent_components_are_rejected() {
        // X^2 vanishes in the qubit component
        let t = StabilizerTableau::from_strs(6, &["x2z0.x0z0", "x0z0.x1z0"], None).unwrap();
        assert!(matches!(crt_decompose(&t), Err(Error::NotPure(_))));
    }
}
