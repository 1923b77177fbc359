//! Tripartite entanglement trimming: moving all A|BC entanglement onto A|B
//! using operations on C alone.
//!
//! The verdict works on the AB|C canonical form. Its `m` correlated pairs span
//! a symplectic space `R` (AB-parts modulo AB-local elements). Elements that
//! act as identity on B have image `U ⊆ R`; elements that act as identity on A
//! have image `U^⊥`. Trimming succeeds iff `dim U ≤ m`, and the proof is
//! constructive:
//!
//! * condition (1): a pair with a member acting as identity on A (the
//!   witness); the partner's C-part is measured.
//! * condition (2): two pairs rewritten as `(t, s·t̄)` and `(t̄, s̄·t)` where
//!   `s, s̄` act as identity on B and `t, t̄` as identity on A; the C-parts of
//!   `s·t̄` and `s̄·t` are measured.
//!
//! Measuring these C-parts leaves C disentangled, after which
//! [`strip_separable_sites`] peels it off.

use std::collections::HashSet;

use crate::canonical::canonicalize;
use crate::clifford::{apply_clifford, measure, strip_separable_sites, CliffordGate, MeasurementRecord};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::partition::{Cut, Party};
use crate::pauli::PauliOperator;
use crate::symplectic::{trim_adapted, Tagged};
use crate::tableau::StabilizerTableau;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition1Pair {
    /// Member acting as identity on A.
    pub witness: PauliOperator,
    /// Partner whose C-part is measured.
    pub partner: PauliOperator,
    /// The witness is also equivalent to an element acting as identity on B.
    pub radical: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition2Group {
    /// `(t, s·t̄)` and `(t̄, s̄·t)`; the first member of each acts as identity on A.
    pub pairs: [(PauliOperator, PauliOperator); 2],
    /// `s`, `s̄` (identity on B) before rewriting.
    pub b_free: [PauliOperator; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimVerdict {
    pub feasible: bool,
    /// AB|C correlated pair count.
    pub pair_count: usize,
    /// `dim U`; feasible iff at most `pair_count`.
    pub b_free_rank: usize,
    pub condition1: Vec<Condition1Pair>,
    pub condition2: Vec<Condition2Group>,
    /// Pairs `(s, s̄)` of B-free elements with no A-free partner (infeasible only).
    pub uncovered: Vec<(PauliOperator, PauliOperator)>,
    pub local_ab: Vec<PauliOperator>,
    pub local_c: Vec<PauliOperator>,
    /// `E(A|BC)` in bits.
    pub initial_bits: f64,
    dim: u32,
    sites: usize,
    parties: Vec<Party>,
}

impl TrimVerdict {
    /// Rewritten pairs: condition (1) pairs first, then two per condition (2) group.
    pub fn pairs(&self) -> Vec<(PauliOperator, PauliOperator)> {
        let mut out: Vec<_> = self.condition1.iter().map(|c| (c.witness.clone(), c.partner.clone())).collect();
        for g in &self.condition2 {
            out.extend(g.pairs.iter().cloned());
        }
        out
    }

    /// Indices into [`pairs`](Self::pairs) covered by condition (1).
    pub fn condition1_pairs(&self) -> Vec<usize> {
        (0..self.condition1.len()).collect()
    }

    /// Index pairs into [`pairs`](Self::pairs) covered by condition (2).
    pub fn condition2_groups(&self) -> Vec<(usize, usize)> {
        let base = self.condition1.len();
        (0..self.condition2.len()).map(|g| (base + 2 * g, base + 2 * g + 1)).collect()
    }

    /// Generators of the same group in rewritten form: AB-local, C-local, then
    /// the rewritten pairs. Empty when infeasible.
    pub fn rewritten_form(&self) -> Option<StabilizerTableau> {
        if !self.feasible {
            return None;
        }
        let mut gens = self.local_ab.clone();
        gens.extend(self.local_c.iter().cloned());
        for (g, h) in self.pairs() {
            gens.push(g);
            gens.push(h);
        }
        StabilizerTableau::with_sites(self.dim, self.sites, gens, Some(self.parties.clone())).ok()
    }

    /// Group elements whose C-parts the plan measures.
    pub fn kept(&self) -> Vec<PauliOperator> {
        let mut out: Vec<_> = self.condition1.iter().map(|c| c.partner.clone()).collect();
        for g in &self.condition2 {
            out.push(g.pairs[0].1.clone());
            out.push(g.pairs[1].1.clone());
        }
        out
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimPlan {
    /// C-supported operators, measured in order with outcome 0.
    pub measurements: Vec<PauliOperator>,
    pub expected_bits: u64,
    dim: u32,
}

impl TrimPlan {
    pub fn expected_entanglement(&self) -> f64 {
        self.expected_bits as f64 * f64::from(self.dim).log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimResult {
    /// State after measurements and gates, on all sites.
    pub final_tableau: StabilizerTableau,
    /// The AB state once C is peeled off; `None` if C is not fully separable.
    pub ab_tableau: Option<StabilizerTableau>,
    pub initial_bits: f64,
    /// `E(A|B)` when C separated, otherwise the remaining `E(A|BC)`.
    pub achieved_bits: f64,
    pub success: bool,
    pub records: Vec<MeasurementRecord>,
    pub gates: Vec<CliffordGate>,
    pub stripped: Vec<usize>,
}

fn masks(labels: &[Party]) -> (Vec<bool>, Vec<bool>, Vec<bool>) {
    let m = |p: Party| labels.iter().map(|&l| l == p).collect::<Vec<_>>();
    (m(Party::A), m(Party::B), m(Party::C))
}

fn a_vs_rest(labels: &[Party]) -> Cut {
    Cut::from_parties(labels, &[Party::A])
}

pub fn check_trim(t: &StabilizerTableau) -> Result<TrimVerdict> {
    let labels = t.require_parties()?.to_vec();
    let field = t.require_pure()?;
    let (a, b, _) = masks(&labels);
    let initial_bits = canonicalize(t, &a_vs_rest(&labels))?.entanglement_bits();
    let adapted = trim_adapted(&field, &t.vectors(), &a, &b, true)?;
    let op = |x: &Tagged<u32>| t.product(&x.tag);
    let condition1 = adapted
        .condition1
        .iter()
        .map(|w| Condition1Pair { witness: op(&w.witness), partner: op(&w.kept), radical: w.radical })
        .collect();
    let condition2 = adapted
        .condition2
        .iter()
        .map(|g| Condition2Group {
            pairs: [(op(&g.t), op(&g.kept[0])), (op(&g.t_bar), op(&g.kept[1]))],
            b_free: [op(&g.s), op(&g.s_bar)],
        })
        .collect();
    Ok(TrimVerdict {
        feasible: adapted.feasible(),
        pair_count: adapted.pair_count,
        b_free_rank: adapted.a_image_dim,
        condition1,
        condition2,
        uncovered: adapted.unmatched_a.iter().map(|(s, sb)| (op(s), op(sb))).collect(),
        local_ab: adapted.local_ab.iter().map(op).collect(),
        local_c: adapted.local_c.iter().map(op).collect(),
        initial_bits,
        dim: t.dim(),
        sites: t.sites(),
        parties: labels,
    })
}

pub fn plan_trim(t: &StabilizerTableau, v: &TrimVerdict) -> Result<TrimPlan> {
    if !v.feasible {
        return Err(Error::Infeasible);
    }
    let labels = t.require_parties()?;
    let (_, _, c) = masks(labels);
    let measurements = v.kept().iter().map(|k| k.restricted(&c)).collect();
    let a_pairs = canonicalize(t, &a_vs_rest(labels))?.pair_count();
    Ok(TrimPlan { measurements, expected_bits: a_pairs as u64, dim: t.dim() })
}

/// Measures the plan with outcome 0, then strips C.
pub fn execute_trim(t: &StabilizerTableau, plan: &TrimPlan) -> Result<TrimResult> {
    let labels = t.require_parties()?.to_vec();
    let cut = a_vs_rest(&labels);
    let initial = canonicalize(t, &cut)?;
    let mut cur = t.clone();
    let mut records = Vec::with_capacity(plan.measurements.len());
    for p in &plan.measurements {
        if let Some(&s) = p.support().iter().find(|&&s| labels[s] != Party::C) {
            return Err(Error::Shape(format!("measurement {p} acts on site {s} outside C")));
        }
        let (next, rec) = measure(&cur, p, 0)?;
        cur = next;
        records.push(rec);
    }
    let stripped = strip_separable_sites(&cur, Party::C)?;
    let n_c = labels.iter().filter(|&&l| l == Party::C).count();
    let separated = stripped.stripped.len() == n_c;
    let (ab_tableau, achieved) = if separated {
        let ab = stripped.reduced.clone();
        let ab_labels = ab.require_parties()?.to_vec();
        let bits = if ab.sites() == 0 { 0 } else { canonicalize(&ab, &a_vs_rest(&ab_labels))?.pair_count() };
        (Some(ab), bits)
    } else {
        (None, canonicalize(&stripped.full, &cut)?.pair_count())
    };
    let bits = |pairs: usize| pairs as f64 * f64::from(t.dim()).log2();
    Ok(TrimResult {
        final_tableau: stripped.full,
        ab_tableau,
        initial_bits: initial.entanglement_bits(),
        achieved_bits: bits(achieved),
        success: separated && achieved == initial.pair_count(),
        records,
        gates: stripped.gates,
        stripped: stripped.stripped,
    })
}

/// Largest instance the exhaustive oracle accepts.
pub const ORACLE_MAX_SITES: usize = 5;
pub const ORACLE_MAX_C: usize = 2;

/// Breadth-first search over every state reachable by C-local Clifford gates
/// (`F`, `W`, `CX` both ways) and C-local Pauli measurements, deduplicated by
/// normalized tableau. True iff some reachable state has C separable and
/// `E(A|B)` equal to the initial `E(A|BC)`.
///
/// Only outcome 0 is explored: other outcomes differ by a C-local Pauli
/// correction, which the gate moves reach anyway.
pub fn exhaustive_trim_oracle(t: &StabilizerTableau) -> Result<bool> {
    exhaustive_trim_oracle_with(t, Execution::default())
}

pub fn exhaustive_trim_oracle_with(t: &StabilizerTableau, exec: Execution) -> Result<bool> {
    let labels = t.require_parties()?.to_vec();
    t.require_pure()?;
    let n = t.sites();
    let c_sites: Vec<usize> = (0..n).filter(|&i| labels[i] == Party::C).collect();
    if t.dim() != 2 || n > ORACLE_MAX_SITES || c_sites.len() > ORACLE_MAX_C {
        return Err(Error::TooLarge(format!(
            "oracle handles D = 2, n <= {ORACLE_MAX_SITES}, |C| <= {ORACLE_MAX_C}; got D = {}, n = {n}, |C| = {}",
            t.dim(),
            c_sites.len()
        )));
    }
    let field = t.field()?;
    let a_cols = Cut::from_parties(&labels, &[Party::A]).columns(false);
    let non_c_cols = Cut::from_parties(&labels, &[Party::C]).columns(false);
    let n_a = labels.iter().filter(|&&l| l == Party::A).count();
    // pure state: E(A|rest) = n_A − |S_A| in units of log2 D
    let e_a = |s: &StabilizerTableau| n_a - s.local_coefficients(&field, &a_cols).len();
    let c_separable = |s: &StabilizerTableau| s.local_coefficients(&field, &non_c_cols).len() == c_sites.len();
    let target = e_a(t);

    let mut moves: Vec<CliffordGate> = Vec::new();
    for &s in &c_sites {
        moves.push(CliffordGate::Fourier(s));
        moves.push(CliffordGate::Phase(s));
        for &u in &c_sites {
            if u != s {
                moves.push(CliffordGate::Cx { control: s, target: u });
            }
        }
    }
    let mut probes = Vec::new();
    let combos = 1usize << (2 * c_sites.len());
    for code in 1..combos {
        let mut p = PauliOperator::identity(2, n);
        for (j, &s) in c_sites.iter().enumerate() {
            p.set_site(s, (code >> (2 * j) & 1) as u32, (code >> (2 * j + 1) & 1) as u32);
        }
        probes.push(p.admissible_form().expect("admissible phase exists"));
    }

    let start = t.normalized()?;
    let mut seen: HashSet<Vec<PauliOperator>> = HashSet::new();
    seen.insert(start.generators().to_vec());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        if frontier.iter().any(|s| c_separable(s) && e_a(s) == target) {
            return Ok(true);
        }
        let expanded = exec.map(frontier.len(), |i| {
            let s = &frontier[i];
            let mut next = Vec::new();
            for g in &moves {
                next.push(apply_clifford(s, g));
            }
            for p in &probes {
                if let Ok((after, rec)) = measure(s, p, 0) {
                    if !rec.deterministic() {
                        next.push(Ok(after));
                    }
                }
            }
            next.into_iter().map(|r| r.and_then(|x| x.normalized())).collect::<Result<Vec<_>>>()
        });
        let mut nf = Vec::new();
        for batch in expanded {
            for s in batch? {
                if seen.insert(s.generators().to_vec()) {
                    nf.push(s);
                }
            }
        }
        frontier = nf;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(gens: &[&str], parties: &str) -> StabilizerTableau {
        StabilizerTableau::from_strs(2, gens, Some(parties)).unwrap()
    }

    fn op(s: &str) -> PauliOperator {
        PauliOperator::parse(s, 2).unwrap()
    }

    #[test]
    fn ghz_walkthrough() {
        let t = tab(&["ZZI", "IZZ", "XXX"], "ABC");
        let v = check_trim(&t).unwrap();
        assert!(v.feasible);
        assert_eq!(v.condition1.len(), 1);
        assert_eq!(v.condition1[0].witness, op("IZZ"));
        let plan = plan_trim(&t, &v).unwrap();
        assert_eq!(plan.measurements, vec![op("IIX")]);
        let r = execute_trim(&t, &plan).unwrap();
        assert!(r.success);
        assert_eq!((r.initial_bits, r.achieved_bits), (1.0, 1.0));
        let ab = r.ab_tableau.unwrap();
        assert!(ab.same_group(&tab(&["ZZ", "XX"], "AB")).unwrap());
        let expected = tab(&["ZZI", "XXI", "IIX"], "ABC");
        assert!(r.final_tableau.same_group(&expected).unwrap());
    }

    #[test]
    fn four_qubit_condition_two() {
        let t = tab(&["XIXI", "ZIZI", "IXIX", "IZIZ"], "ABCC");
        let v = check_trim(&t).unwrap();
        assert!(v.feasible);
        assert!(v.condition1.is_empty());
        assert_eq!(v.condition2.len(), 1);
        assert_eq!(v.condition2_groups(), vec![(0, 1)]);
        let paper = tab(&["XZXZ", "IXIX", "ZXZX", "IZIZ"], "ABCC");
        assert!(v.rewritten_form().unwrap().same_group(&paper).unwrap());
        let r = execute_trim(&t, &plan_trim(&t, &v).unwrap()).unwrap();
        assert!(r.success);
        assert_eq!(r.achieved_bits, 1.0);
        assert!(r.ab_tableau.unwrap().same_group(&tab(&["XZ", "ZX"], "AB")).unwrap());
    }

    #[test]
    fn bell_pair_a_c_is_infeasible() {
        let t = tab(&["XIX", "ZIZ", "IZI"], "ABC");
        let v = check_trim(&t).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.uncovered.len(), 1);
        assert_eq!(plan_trim(&t, &v), Err(Error::Infeasible));
        assert!(!exhaustive_trim_oracle(&t).unwrap());
    }

    #[test]
    fn oracle_agrees_on_worked_examples() {
        assert!(exhaustive_trim_oracle(&tab(&["ZZI", "IZZ", "XXX"], "ABC")).unwrap());
        assert!(exhaustive_trim_oracle(&tab(&["XIXI", "ZIZI", "IXIX", "IZIZ"], "ABCC")).unwrap());
        assert!(exhaustive_trim_oracle(&tab(&["XXI", "ZZI", "IIZ"], "ABC")).unwrap());
    }

    #[test]
    fn separable_c_gives_an_empty_plan() {
        let t = tab(&["XXI", "ZZI", "IIZ"], "ABC");
        let v = check_trim(&t).unwrap();
        assert!(v.feasible);
        assert_eq!(v.pair_count, 0);
        let plan = plan_trim(&t, &v).unwrap();
        assert!(plan.measurements.is_empty());
        let r = execute_trim(&t, &plan).unwrap();
        assert!(r.success);
    }

    #[test]
    fn product_state_trivially_succeeds() {
        let t = tab(&["ZII", "IZI", "IIZ"], "ABC");
        let v = check_trim(&t).unwrap();
        let r = execute_trim(&t, &plan_trim(&t, &v).unwrap()).unwrap();
        assert!(r.success);
        assert_eq!(r.achieved_bits, 0.0);
    }

    #[test]
    fn missing_labels_are_an_error() {
        let t = StabilizerTableau::from_strs(2, &["ZZ", "XX"], None).unwrap();
        assert_eq!(check_trim(&t), Err(Error::MissingParties));
    }
}
