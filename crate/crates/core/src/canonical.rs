//! Canonical bipartite form of a pure stabilizer state and the entanglement
//! it certifies.
//!
//! A generating set is split into generators acting only on A, generators
//! acting only on B, and correlated pairs `(g_k, ḡ_k)` whose A-parts
//! anticommute with exactly their partner. Each pair carries `log2 D` bits of
//! entanglement.
//!
//! The serialized form is a tableau file whose generator lines are grouped
//! under `#local_A`, `#local_B` and `#pairs` (partners on consecutive lines),
//! so it still parses as an ordinary tableau.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Cut;
use crate::pauli::PauliOperator;
use crate::symplectic::{decompose, restricted_form};
use crate::tableau::StabilizerTableau;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    dim: u32,
    cut: Cut,
    pub local_a: Vec<PauliOperator>,
    pub local_b: Vec<PauliOperator>,
    pub pairs: Vec<(PauliOperator, PauliOperator)>,
    header: String,
}

/// Brings a pure prime-dimension tableau into canonical form across `cut`
/// (first side = A).
pub fn canonicalize(t: &StabilizerTableau, cut: &Cut) -> Result<CanonicalForm> {
    let field = t.require_pure()?;
    if cut.sites() != t.sites() {
        return Err(Error::Shape(format!("cut over {} sites, tableau has {}", cut.sites(), t.sites())));
    }
    let dec = decompose(&field, &t.vectors(), cut.mask(), true)?;
    let local_a = dec.local_first.iter().map(|x| t.product(&x.tag)).collect();
    let local_b = dec.local_second.iter().map(|x| t.product(&x.tag)).collect();
    let pairs = dec.pairs.iter().map(|(e, f)| (t.product(&e.tag), t.product(&f.tag))).collect();
    Ok(CanonicalForm { dim: t.dim(), cut: cut.clone(), local_a, local_b, pairs, header: t.header() })
}

impl CanonicalForm {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn cut(&self) -> &Cut {
        &self.cut
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// `pair_count · log2 D`.
    pub fn entanglement_bits(&self) -> f64 {
        self.pairs.len() as f64 * f64::from(self.dim).log2()
    }

    /// All generators: local A, local B, then pair members in order.
    pub fn generators(&self) -> Vec<PauliOperator> {
        let mut out = self.local_a.clone();
        out.extend(self.local_b.iter().cloned());
        for (g, h) in &self.pairs {
            out.push(g.clone());
            out.push(h.clone());
        }
        out
    }

    pub fn to_tableau(&self) -> Result<StabilizerTableau> {
        StabilizerTableau::new(self.dim, self.generators(), None)
    }

    /// Matrix of restricted symplectic products between all pair members on
    /// one side (`first = true` for A), ordered `g_1, ḡ_1, g_2, ḡ_2, …`.
    pub fn pair_products(&self, first: bool) -> Vec<Vec<u32>> {
        let mask: Vec<bool> = self.cut.mask().iter().map(|&b| b == first).collect();
        let field = crate::linalg::PrimeField::new(self.dim);
        let members: Vec<&PauliOperator> = self.pairs.iter().flat_map(|(g, h)| [g, h]).collect();
        members
            .iter()
            .map(|x| members.iter().map(|y| restricted_form(&field, &mask, x.vector(), y.vector())).collect())
            .collect()
    }

    /// Checks the exclusive commutation relation on both sides and the
    /// locality of the local generators.
    pub fn verify(&self) -> Result<()> {
        let d = self.dim;
        let bad = |msg: String| Error::NotPure(msg);
        let a_cols = self.cut.columns(true);
        let b_cols = self.cut.columns(false);
        for g in &self.local_a {
            if b_cols.iter().any(|&c| g.vector()[c] != 0) {
                return Err(bad(format!("A-local generator {g} acts on B")));
            }
        }
        for g in &self.local_b {
            if a_cols.iter().any(|&c| g.vector()[c] != 0) {
                return Err(bad(format!("B-local generator {g} acts on A")));
            }
        }
        let pa = self.pair_products(true);
        let pb = self.pair_products(false);
        for i in 0..pa.len() {
            for j in 0..pa.len() {
                let partner = i / 2 == j / 2 && i != j;
                if partner == (pa[i][j] == 0) {
                    return Err(bad(format!("A-side product ({i}, {j}) is {}", pa[i][j])));
                }
                if (pa[i][j] + pb[i][j]) % d != 0 {
                    return Err(bad(format!("B-side product ({i}, {j}) does not mirror the A side")));
                }
            }
        }
        if self.local_a.len() + self.local_b.len() + 2 * self.pairs.len() != self.cut.sites() {
            return Err(bad("generator count does not match the site count".into()));
        }
        Ok(())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header)?;
        writeln!(f, "#local_A")?;
        for g in &self.local_a {
            writeln!(f, "{g}")?;
        }
        writeln!(f, "#local_B")?;
        for g in &self.local_b {
            writeln!(f, "{g}")?;
        }
        writeln!(f, "#pairs")?;
        for (g, h) in &self.pairs {
            writeln!(f, "{g}")?;
            writeln!(f, "{h}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str, d: u32) -> PauliOperator {
        PauliOperator::parse(s, d).unwrap()
    }

    #[test]
    fn ghz_a_bc() {
        let t = StabilizerTableau::from_strs(2, &["ZZI", "IZZ", "XXX"], Some("ABC")).unwrap();
        let cut = Cut::parse("A|BC", t.parties(), 3).unwrap();
        let cf = canonicalize(&t, &cut).unwrap();
        assert!(cf.local_a.is_empty());
        assert_eq!(cf.local_b, vec![op("IZZ", 2)]);
        assert_eq!(cf.pair_count(), 1);
        assert_eq!(cf.entanglement_bits(), 1.0);
        cf.verify().unwrap();
        assert!(t.same_group(&cf.to_tableau().unwrap()).unwrap());
    }

    #[test]
    fn product_state_has_no_pairs() {
        let t = StabilizerTableau::from_strs(2, &["XI", "IX"], None).unwrap();
        let cf = canonicalize(&t, &Cut::new(vec![true, false])).unwrap();
        assert_eq!((cf.local_a.len(), cf.local_b.len(), cf.pair_count()), (1, 1, 0));
        assert_eq!(cf.entanglement_bits(), 0.0);
    }

    #[test]
    fn four_qubit_ab_c_has_two_pairs() {
        let t = StabilizerTableau::from_strs(2, &["XIXI", "ZIZI", "IXIX", "IZIZ"], Some("ABCC")).unwrap();
        let cf = canonicalize(&t, &Cut::parse("AB|C", t.parties(), 4).unwrap()).unwrap();
        assert_eq!(cf.pair_count(), 2);
        assert!(cf.local_a.is_empty() && cf.local_b.is_empty());
        cf.verify().unwrap();
    }

    #[test]
    fn qutrit_bell_pair() {
        // X⊗X and Z⊗Z^{-1}
        let t = StabilizerTableau::from_strs(3, &["x1z0.x1z0", "x0z1.x0z2"], None).unwrap();
        let cf = canonicalize(&t, &Cut::new(vec![true, false])).unwrap();
        assert_eq!(cf.pair_count(), 1);
        assert!((cf.entanglement_bits() - 3f64.log2()).abs() < 1e-15);
        cf.verify().unwrap();
    }

    #[test]
    fn one_sided_cut_is_all_local() {
        let t = StabilizerTableau::from_strs(2, &["ZZI", "IZZ", "XXX"], None).unwrap();
        let cf = canonicalize(&t, &Cut::new(vec![true; 3])).unwrap();
        assert_eq!((cf.local_a.len(), cf.pair_count()), (3, 0));
    }

    #[test]
    fn serialization_has_sections_and_reparses() {
        let t = StabilizerTableau::from_strs(2, &["ZZI", "IZZ", "XXX"], Some("ABC")).unwrap();
        let cf = canonicalize(&t, &Cut::parse("A|BC", t.parties(), 3).unwrap()).unwrap();
        let text = cf.to_string();
        assert!(text.contains("#local_A\n#local_B\nIZZ\n#pairs\n"));
        let back = StabilizerTableau::parse(&text).unwrap();
        assert!(back.same_group(&t).unwrap());
    }
}
