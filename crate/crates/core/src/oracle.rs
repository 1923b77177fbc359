//! Dense density-matrix ground truth for small instances.
//!
//! `ρ = D^{-n} Σ_{g∈S} g` is built from the monomial matrices of the group
//! elements. The basis index puts site 0 in the most significant digit, and
//! `X^x Z^z |k⟩ = ω^{zk} |k − x⟩`.

use std::collections::HashSet;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::partition::Cut;
use crate::par::Execution;
use crate::pauli::PauliOperator;
use crate::tableau::StabilizerTableau;

/// Largest Hilbert-space dimension the oracle accepts.
pub const MAX_DENSE_DIM: usize = 1024;

const MAX_CHUNKS: usize = 32;
const CHUNK_BYTES: usize = 64 << 20;

type Complex64 = Complex<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    dim: u32,
    sites: usize,
    rho: DMatrix<Complex64>,
}

fn hilbert_dim(dim: u32, sites: usize) -> Result<usize> {
    let mut total = 1usize;
    for _ in 0..sites {
        total = total.saturating_mul(dim as usize);
        if total > MAX_DENSE_DIM {
            return Err(Error::TooLarge(format!("{dim}^{sites} exceeds the dense bound {MAX_DENSE_DIM}")));
        }
    }
    Ok(total)
}

fn digits(mut k: usize, dim: u32, sites: usize) -> Vec<u32> {
    let mut out = vec![0u32; sites];
    for i in (0..sites).rev() {
        out[i] = (k % dim as usize) as u32;
        k /= dim as usize;
    }
    out
}

fn index(digits: &[u32], dim: u32) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * dim as usize + d as usize)
}

fn root_of_unity(dim: u32, half_steps: i64) -> Complex64 {
    let theta = std::f64::consts::PI * half_steps as f64 / f64::from(dim);
    Complex64::from_polar(1.0, theta)
}

/// Adds `scale · p` to `m`.
fn add_pauli(m: &mut DMatrix<Complex64>, p: &PauliOperator, scale: f64) {
    let d = p.dim();
    let n = p.sites();
    let total = m.nrows();
    for col in 0..total {
        let ks = digits(col, d, n);
        let mut half = i64::from(p.phase());
        let mut target = Vec::with_capacity(n);
        for (i, &k) in ks.iter().enumerate() {
            let (x, z) = p.site(i);
            half += 2 * i64::from(z) * i64::from(k);
            target.push((k + d - x) % d);
        }
        let row = index(&target, d);
        m[(row, col)] += root_of_unity(d, half) * scale;
    }
}

pub fn pauli_matrix(p: &PauliOperator) -> Result<DMatrix<Complex64>> {
    let total = hilbert_dim(p.dim(), p.sites())?;
    let mut m = DMatrix::zeros(total, total);
    add_pauli(&mut m, p, 1.0);
    Ok(m)
}

/// Distinct elements of the group generated by `t` (any `D`).
pub fn group_elements(t: &StabilizerTableau) -> Result<Vec<PauliOperator>> {
    let k = t.generators().len();
    let d = t.dim();
    let count = (d as usize).checked_pow(k as u32).filter(|&c| c <= MAX_DENSE_DIM * MAX_DENSE_DIM);
    let count = count.ok_or_else(|| Error::TooLarge(format!("{d}^{k} group elements")))?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in 0..count {
        let exps = digits(c, d, k);
        let g = t.product(&exps);
        if g.has_zero_vector() && g.phase() != 0 {
            return Err(Error::NotPure(format!("group contains the scalar {g}")));
        }
        if seen.insert(g.clone()) {
            out.push(g);
        }
    }
    Ok(out)
}

impl DenseState {
    pub fn from_matrix(dim: u32, sites: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        let total = hilbert_dim(dim, sites)?;
        if rho.nrows() != total || rho.ncols() != total {
            return Err(Error::Shape(format!("matrix is {}x{}, expected {total}", rho.nrows(), rho.ncols())));
        }
        Ok(Self { dim, sites, rho })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        // tr(ρ ρ) = Σ_ij ρ_ij ρ_ji = Σ |ρ_ij|² for Hermitian ρ
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.rho)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    /// Reduced state on the sites where `keep` is true.
    pub fn partial_trace(&self, keep: &[bool]) -> Result<DenseState> {
        if keep.len() != self.sites {
            return Err(Error::Shape(format!("mask of {} sites for {}", keep.len(), self.sites)));
        }
        let d = self.dim;
        let kept: Vec<usize> = (0..self.sites).filter(|&i| keep[i]).collect();
        let traced: Vec<usize> = (0..self.sites).filter(|&i| !keep[i]).collect();
        let dk = (d as usize).pow(kept.len() as u32);
        let dt = (d as usize).pow(traced.len() as u32);
        let mut out = DMatrix::zeros(dk, dk);
        let mut full = vec![0u32; self.sites];
        let compose = |full: &mut Vec<u32>, a: usize, e: usize| {
            for (pos, &s) in kept.iter().enumerate() {
                full[s] = digits(a, d, kept.len())[pos];
            }
            for (pos, &s) in traced.iter().enumerate() {
                full[s] = digits(e, d, traced.len())[pos];
            }
            index(full, d)
        };
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..dt {
                    let r = compose(&mut full, a, e);
                    let c = compose(&mut full, b, e);
                    acc += self.rho[(r, c)];
                }
                out[(a, b)] = acc;
            }
        }
        DenseState::from_matrix(d, kept.len(), out)
    }

    /// Von Neumann entropy in bits, `0 log 0 = 0`.
    pub fn von_neumann(&self) -> Result<f64> {
        let mut s = 0.0;
        for l in self.eigenvalues() {
            if l < -1e-10 {
                return Err(Error::NotPsd(l));
            }
            if l > 1e-14 {
                s -= l * l.log2();
            }
        }
        Ok(s)
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &DenseState) -> f64 {
        (&self.rho - &other.rho).norm()
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

/// `ρ = D^{-n} Σ_{g∈S} g`, summed in fixed chunks so the result is identical
/// under either execution mode.
pub fn dense_state_with(t: &StabilizerTableau, exec: Execution) -> Result<DenseState> {
    let total = hilbert_dim(t.dim(), t.sites())?;
    let elements = group_elements(t)?;
    let scale = 1.0 / total as f64;
    // chunk count depends only on the size, never on the execution mode
    let chunks = (CHUNK_BYTES / (total * total * 16)).clamp(1, MAX_CHUNKS);
    let per = elements.len().div_ceil(chunks).max(1);
    let partials = exec.map(chunks, |c| {
        let mut m = DMatrix::<Complex64>::zeros(total, total);
        for g in elements.iter().skip(c * per).take(per) {
            add_pauli(&mut m, g, scale);
        }
        m
    });
    let mut rho = DMatrix::zeros(total, total);
    for m in partials {
        rho += m;
    }
    let state = DenseState::from_matrix(t.dim(), t.sites(), rho)?;
    let tr = state.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotPure(format!("trace {tr} differs from 1")));
    }
    Ok(state)
}

pub fn dense_state(t: &StabilizerTableau) -> Result<DenseState> {
    dense_state_with(t, Execution::default())
}

/// Entropy of the first side of `cut`. Pure states use the smaller side.
pub fn entropy(rho: &DenseState, cut: &Cut) -> Result<f64> {
    if cut.sites() != rho.sites {
        return Err(Error::Shape(format!("cut over {} sites, state has {}", cut.sites(), rho.sites)));
    }
    let pure = (rho.purity() - 1.0).abs() < 1e-9;
    let keep = if pure && cut.first_count() > cut.second_count() { cut.complement() } else { cut.clone() };
    rho.partial_trace(keep.mask())?.von_neumann()
}

/// Projector onto the `ω^outcome` eigenspace of `p`: `D^{-1} Σ_m ω^{−outcome·m} p^m`.
pub fn eigenprojector(p: &PauliOperator, outcome: u32) -> Result<DMatrix<Complex64>> {
    let d = p.dim();
    let total = hilbert_dim(d, p.sites())?;
    let mut proj = DMatrix::zeros(total, total);
    for m in 0..d {
        let mut term = DMatrix::zeros(total, total);
        add_pauli(&mut term, &p.power(u64::from(m)), 1.0 / f64::from(d));
        proj += term * root_of_unity(d, -2 * i64::from(outcome) * i64::from(m));
    }
    Ok(proj)
}

/// Probability of the `ω^outcome` branch.
pub fn probability(rho: &DenseState, p: &PauliOperator, outcome: u32) -> Result<f64> {
    let proj = eigenprojector(p, outcome)?;
    Ok((&proj * &rho.rho).trace().re)
}

/// Post-measurement state on the `ω^outcome` branch.
pub fn dense_measure(rho: &DenseState, p: &PauliOperator, outcome: u32) -> Result<DenseState> {
    if !p.is_admissible() {
        return Err(Error::Inadmissible { index: 0 });
    }
    let proj = eigenprojector(p, outcome)?;
    let unnorm = &proj * &rho.rho * &proj;
    let prob = unnorm.trace().re;
    if prob < 1e-12 {
        return Err(Error::ZeroProbability);
    }
    DenseState::from_matrix(rho.dim, rho.sites, unnorm / Complex64::new(prob, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(d: u32, gens: &[&str]) -> StabilizerTableau {
        StabilizerTableau::from_strs(d, gens, None).unwrap()
    }

    #[test]
    fn single_qubit_zero_state() {
        let rho = dense_state(&tab(2, &["Z"])).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(m[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn x_shifts_down_and_z_is_diagonal() {
        let x = pauli_matrix(&PauliOperator::parse("X", 3).unwrap()).unwrap();
        // X|1> = |0>
        assert!((x[(0, 1)].re - 1.0).abs() < 1e-15);
        let z = pauli_matrix(&PauliOperator::parse("Z", 3).unwrap()).unwrap();
        let w = root_of_unity(3, 2);
        assert!((z[(1, 1)] - w).norm() < 1e-15);
        // XZ = ω ZX
        let lhs = &x * &z;
        let rhs = &z * &x * w;
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn ghz_is_a_rank_one_projector() {
        let rho = dense_state(&tab(2, &["ZZI", "IZZ", "XXX"])).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert_eq!(rho.rank(1e-9), 1);
        let m = rho.matrix();
        for (r, c) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
            assert!((m[(r, c)].re - 0.5).abs() < 1e-12);
        }
        let cut = Cut::new(vec![true, false, false]);
        assert!((entropy(&rho, &cut).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qutrit_bell_entropy_is_log3() {
        let rho = dense_state(&tab(3, &["x1z0.x1z0", "x0z1.x0z2"])).unwrap();
        let e = entropy(&rho, &Cut::new(vec![true, false])).unwrap();
        assert!((e - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn under_generated_group_follows_the_purity_law() {
        let rho = dense_state(&tab(3, &["x1z0.x0z0.x0z0"])).unwrap();
        assert!((rho.purity() - 3.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn measuring_a_stabilizer_changes_nothing() {
        let t = tab(2, &["ZZI", "IZZ", "XXX"]);
        let rho = dense_state(&t).unwrap();
        let after = dense_measure(&rho, &PauliOperator::parse("ZIZ", 2).unwrap(), 0).unwrap();
        assert!(rho.distance(&after) < 1e-12);
        assert_eq!(dense_measure(&rho, &PauliOperator::parse("ZIZ", 2).unwrap(), 1), Err(Error::ZeroProbability));
    }

    #[test]
    fn execution_modes_agree_bitwise() {
        let t = crate::tableau::random_pure_tableau(6, 2, 4).unwrap();
        let a = dense_state_with(&t, Execution::Sequential).unwrap();
        let b = dense_state_with(&t, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn size_bound_is_enforced() {
        let gens: Vec<String> = (0..11).map(|i| (0..11).map(|j| if i == j { 'Z' } else { 'I' }).collect()).collect();
        let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
        assert!(matches!(dense_state(&tab(2, &refs)), Err(Error::TooLarge(_))));
    }
}
