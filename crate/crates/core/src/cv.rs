//! Continuous-variable stabilizer states as Lagrangian planes in `R^{2n}`.
//!
//! Vectors are interleaved `(s_1, t_1, …, s_n, t_n)` with form
//! `σ(v, v') = Σ s_i t'_i − s'_i t_i`. All zero tests use a tolerance relative
//! to the largest input vector norm.
//!
//! File format: a header `modes=<n> [parties=<labels>] [tolerance=<eps>]`
//! followed by one whitespace-separated vector per line; `#` lines and blank
//! lines are skipped.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Reals;
use crate::partition::{format_labels, parse_labels, Cut, Party};
use crate::symplectic::{decompose, restricted_form, trim_adapted, vanishing_subspace, Tagged};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn cv_symplectic_product(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() || u.len() % 2 != 0 {
        return Err(Error::Shape(format!("vectors of length {} and {}", u.len(), v.len())));
    }
    let all = vec![true; u.len() / 2];
    Ok(restricted_form(&Reals { eps: 0.0 }, &all, u, v))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let cols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Singular values of the matrix with `rows` as rows, descending.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_matrix(rows).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Distance from `w` to the span of `rows`, divided by `|w|` (0 for `w = 0`).
pub fn span_residual(rows: &[Vec<f64>], w: &[f64], tol: f64) -> f64 {
    let wn = norm(w);
    if wn == 0.0 {
        return 0.0;
    }
    if rows.is_empty() {
        return 1.0;
    }
    let svd = to_matrix(rows).svd(false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let mut r = w.to_vec();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol * smax {
            continue;
        }
        let dir: Vec<f64> = vt.row(k).iter().copied().collect();
        let c: f64 = dir.iter().zip(w).map(|(a, b)| a * b).sum();
        for (ri, di) in r.iter_mut().zip(&dir) {
            *ri -= c * di;
        }
    }
    norm(&r) / wn
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvStabilizer {
    modes: usize,
    vectors: Vec<Vec<f64>>,
    parties: Option<Vec<Party>>,
    tolerance: f64,
}

impl CvStabilizer {
    /// Checks shape, finiteness, isotropy and independence.
    pub fn new(vectors: Vec<Vec<f64>>, parties: Option<Vec<Party>>, tolerance: f64) -> Result<Self> {
        let modes = vectors.len();
        if modes == 0 {
            return Err(Error::Shape("a plane needs at least one mode".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != 2 * modes) {
            return Err(Error::Shape(format!("{modes} modes need vectors of length {}, got {}", 2 * modes, v.len())));
        }
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Shape("non-finite entry".into()));
        }
        if let Some(p) = &parties {
            if p.len() != modes {
                return Err(Error::Shape(format!("{} party labels for {modes} modes", p.len())));
            }
        }
        let s = Self { modes, vectors, parties, tolerance };
        let m = s.max_norm();
        for i in 0..modes {
            for j in i + 1..modes {
                let w = cv_symplectic_product(&s.vectors[i], &s.vectors[j])?;
                if w.abs() > tolerance * m * m {
                    return Err(Error::Degenerate(format!("σ(v{i}, v{j}) = {w:e}: not isotropic")));
                }
            }
        }
        let smin = *singular_values(&s.vectors).last().expect("nonempty");
        if smin <= tolerance * m {
            return Err(Error::Degenerate(format!("vectors are dependent (smallest singular value {smin:e})")));
        }
        Ok(s)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn parties(&self) -> Option<&[Party]> {
        self.parties.as_deref()
    }

    pub fn require_parties(&self) -> Result<&[Party]> {
        self.parties.as_deref().ok_or(Error::MissingParties)
    }

    pub fn with_parties(mut self, parties: Vec<Party>) -> Result<Self> {
        if parties.len() != self.modes {
            return Err(Error::Shape(format!("{} party labels for {} modes", parties.len(), self.modes)));
        }
        self.parties = Some(parties);
        Ok(self)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_norm(&self) -> f64 {
        self.vectors.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    /// Vectors scaled to unit maximum norm, where the tolerance is absolute.
    fn scaled(&self) -> Vec<Vec<f64>> {
        let m = self.max_norm();
        self.vectors.iter().map(|v| v.iter().map(|x| x / m).collect()).collect()
    }

    fn field(&self) -> Reals {
        Reals { eps: self.tolerance }
    }

    /// Image under the linear map `s` (must be symplectic for the result to
    /// stay Lagrangian).
    pub fn transformed(&self, s: &DMatrix<f64>) -> Result<Self> {
        let n = 2 * self.modes;
        if s.shape() != (n, n) {
            return Err(Error::Shape(format!("expected a {n}x{n} map, got {:?}", s.shape())));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| (s * nalgebra::DVector::from_column_slice(v)).iter().copied().collect())
            .collect();
        Self::new(vectors, self.parties.clone(), self.tolerance)
    }

    /// Every vector of `other` lies in this plane and vice versa.
    pub fn same_plane(&self, other: &[Vec<f64>]) -> bool {
        let tol = self.tolerance * 1e3;
        other.len() == self.modes
            && other.iter().all(|w| span_residual(&self.vectors, w, self.tolerance) < tol)
            && self.vectors.iter().all(|w| span_residual(other, w, self.tolerance) < tol)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        let perr = |line, msg: String| Error::Parse { line, msg };
        let (mut modes, mut parties, mut tolerance) = (None, None, DEFAULT_TOLERANCE);
        for field in header.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| perr(hl, format!("expected key=value, got {field:?}")))?;
            match k {
                "modes" => modes = Some(v.parse::<usize>().map_err(|e| perr(hl, format!("modes: {e}")))?),
                "parties" => parties = Some(parse_labels(v).map_err(|e| perr(hl, e.to_string()))?),
                "tolerance" => tolerance = v.parse::<f64>().map_err(|e| perr(hl, format!("tolerance: {e}")))?,
                "version" => {}
                _ => return Err(perr(hl, format!("unknown header key {k:?}"))),
            }
        }
        let modes = modes.ok_or_else(|| perr(hl, "missing modes=".into()))?;
        let mut vectors = Vec::new();
        for (ln, l) in lines {
            let v = l
                .split_whitespace()
                .map(|x| x.parse::<f64>().map_err(|e| perr(ln, format!("{x:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != 2 * modes {
                return Err(perr(ln, format!("expected {} entries, got {}", 2 * modes, v.len())));
            }
            vectors.push(v);
        }
        if vectors.len() != modes {
            return Err(perr(hl, format!("expected {modes} vectors, got {}", vectors.len())));
        }
        Self::new(vectors, parties, tolerance)
    }

    pub fn header(&self) -> String {
        let mut h = format!("modes={}", self.modes);
        if let Some(p) = &self.parties {
            h += &format!(" parties={}", format_labels(p));
        }
        if self.tolerance != DEFAULT_TOLERANCE {
            h += &format!(" tolerance={:e}", self.tolerance);
        }
        h
    }
}

fn write_vector(f: &mut fmt::Formatter<'_>, v: &[f64]) -> fmt::Result {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    writeln!(f, "{}", parts.join(" "))
}

impl fmt::Display for CvStabilizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        for v in &self.vectors {
            write_vector(f, v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvCanonicalForm {
    pub local_a: Vec<Vec<f64>>,
    pub local_b: Vec<Vec<f64>>,
    /// `(u_k, ū_k)` with `σ_A(u_k, ū_k) = 1`.
    pub pairs: Vec<(Vec<f64>, Vec<f64>)>,
    cut: Cut,
    tolerance: f64,
}

pub fn cv_canonicalize(s: &CvStabilizer, cut: &Cut) -> Result<CvCanonicalForm> {
    if cut.sites() != s.modes() {
        return Err(Error::Shape(format!("cut over {} modes, plane has {}", cut.sites(), s.modes())));
    }
    let dec = decompose(&s.field(), &s.scaled(), cut.mask(), true)?;
    let v = |x: &Tagged<f64>| x.v.clone();
    Ok(CvCanonicalForm {
        local_a: dec.local_first.iter().map(v).collect(),
        local_b: dec.local_second.iter().map(v).collect(),
        pairs: dec.pairs.iter().map(|(e, f)| balanced(v(e), v(f))).collect(),
        cut: cut.clone(),
        tolerance: s.tolerance(),
    })
}

/// Rescales `(u, ū)` to equal norms; `σ(u, ū)` is unchanged.
fn balanced(mut u: Vec<f64>, mut w: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let c = (norm(&w) / norm(&u)).sqrt();
    u.iter_mut().for_each(|x| *x *= c);
    w.iter_mut().for_each(|x| *x /= c);
    (u, w)
}

impl CvCanonicalForm {
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn cut(&self) -> &Cut {
        &self.cut
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        let mut out = self.local_a.clone();
        out.extend(self.local_b.iter().cloned());
        for (u, w) in &self.pairs {
            out.push(u.clone());
            out.push(w.clone());
        }
        out
    }

    /// Restricted products between pair members on one side, ordered
    /// `u_1, ū_1, u_2, ū_2, …`.
    pub fn pair_products(&self, first: bool) -> DMatrix<f64> {
        let mask: Vec<bool> = self.cut.mask().iter().map(|&b| b == first).collect();
        let members: Vec<&Vec<f64>> = self.pairs.iter().flat_map(|(u, w)| [u, w]).collect();
        let f = Reals { eps: 0.0 };
        DMatrix::from_fn(members.len(), members.len(), |i, j| restricted_form(&f, &mask, members[i], members[j]))
    }

    /// Largest deviation from the canonical relations, scale-free: local
    /// vectors' off-side blocks relative to their norm, partner products
    /// against `±1`, every other restricted product relative to `|x| |y|`.
    pub fn max_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let a_cols = self.cut.columns(true);
        let b_cols = self.cut.columns(false);
        for (vs, cols) in [(&self.local_a, &b_cols), (&self.local_b, &a_cols)] {
            for v in vs {
                let n = norm(v);
                worst = cols.iter().fold(worst, |w, &c| w.max(v[c].abs() / n));
            }
        }
        let all = self.vectors();
        let norms: Vec<f64> = all.iter().map(|v| norm(v)).collect();
        let f = Reals { eps: 0.0 };
        let a_mask = self.cut.mask().to_vec();
        let b_mask: Vec<bool> = a_mask.iter().map(|&b| !b).collect();
        let offset = self.local_a.len() + self.local_b.len();
        for i in 0..all.len() {
            for j in 0..all.len() {
                let partner = i >= offset && j >= offset && (i - offset) / 2 == (j - offset) / 2 && i != j;
                let sa = restricted_form(&f, &a_mask, &all[i], &all[j]);
                let sb = restricted_form(&f, &b_mask, &all[i], &all[j]);
                let dev = if partner {
                    let sign = if (i - offset) % 2 == 0 { 1.0 } else { -1.0 };
                    (sa - sign).abs().max((sb + sign).abs())
                } else {
                    sa.abs().max(sb.abs()) / (norms[i] * norms[j])
                };
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn verify(&self) -> Result<()> {
        let w = self.max_violation();
        if w > self.tolerance * 1e3 {
            return Err(Error::Degenerate(format!("canonical relations violated by {w:e}")));
        }
        Ok(())
    }
}

impl fmt::Display for CvCanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "modes={} cut={}", self.cut.sites(), self.cut)?;
        writeln!(f, "#local_A")?;
        for v in &self.local_a {
            write_vector(f, v)?;
        }
        writeln!(f, "#local_B")?;
        for v in &self.local_b {
            write_vector(f, v)?;
        }
        writeln!(f, "#pairs")?;
        for (u, w) in &self.pairs {
            write_vector(f, u)?;
            write_vector(f, w)?;
        }
        Ok(())
    }
}

/// Rank of the restricted form on one side, halved: the pair count seen from
/// that side.
pub fn cv_pair_count_from_side(s: &CvStabilizer, cut: &Cut, first: bool) -> usize {
    let mask: Vec<bool> = cut.mask().iter().map(|&b| b == first).collect();
    let rows = s.scaled();
    let f = Reals { eps: 0.0 };
    let g = DMatrix::from_fn(rows.len(), rows.len(), |i, j| restricted_form(&f, &mask, &rows[i], &rows[j]));
    let sv = g.singular_values();
    sv.iter().filter(|&&x| x > s.tolerance() * 1e2).count() / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvTrimVerdict {
    pub feasible: bool,
    pub pair_count: usize,
    pub b_free_rank: usize,
    /// `(witness, partner)`: the witness has a zero A block.
    pub condition1: Vec<(Vec<f64>, Vec<f64>)>,
    /// `[(t, s+t̄), (t̄, s̄+t)]`.
    pub condition2: Vec<[(Vec<f64>, Vec<f64>); 2]>,
    pub uncovered: Vec<(Vec<f64>, Vec<f64>)>,
    pub local_ab: Vec<Vec<f64>>,
    pub local_c: Vec<Vec<f64>>,
    /// A|BC pair count of the input.
    pub initial_pairs: usize,
    parties: Vec<Party>,
}

impl CvTrimVerdict {
    /// Vectors whose C-parts get measured.
    pub fn kept(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<_> = self.condition1.iter().map(|(_, k)| k.clone()).collect();
        for g in &self.condition2 {
            out.push(g[0].1.clone());
            out.push(g[1].1.clone());
        }
        out
    }

    /// C-blocks of the kept vectors (zero elsewhere).
    pub fn plan(&self) -> Vec<Vec<f64>> {
        self.kept()
            .into_iter()
            .map(|mut v| {
                for (i, p) in self.parties.iter().enumerate() {
                    if *p != Party::C {
                        v[2 * i] = 0.0;
                        v[2 * i + 1] = 0.0;
                    }
                }
                v
            })
            .collect()
    }
}

fn masks(labels: &[Party]) -> (Vec<bool>, Vec<bool>) {
    (labels.iter().map(|&l| l == Party::A).collect(), labels.iter().map(|&l| l == Party::B).collect())
}

pub fn cv_check_trim(s: &CvStabilizer) -> Result<CvTrimVerdict> {
    let labels = s.require_parties()?.to_vec();
    let (a, b) = masks(&labels);
    let initial_pairs = cv_canonicalize(s, &Cut::from_parties(&labels, &[Party::A]))?.pair_count();
    let t = trim_adapted(&s.field(), &s.scaled(), &a, &b, true)?;
    let v = |x: &Tagged<f64>| x.v.clone();
    Ok(CvTrimVerdict {
        feasible: t.feasible(),
        pair_count: t.pair_count,
        b_free_rank: t.a_image_dim,
        condition1: t.condition1.iter().map(|w| (v(&w.witness), v(&w.kept))).collect(),
        condition2: t
            .condition2
            .iter()
            .map(|g| [(v(&g.t), v(&g.kept[0])), (v(&g.t_bar), v(&g.kept[1]))])
            .collect(),
        uncovered: t.unmatched_a.iter().map(|(x, y)| (v(x), v(y))).collect(),
        local_ab: t.local_ab.iter().map(v).collect(),
        local_c: t.local_c.iter().map(v).collect(),
        initial_pairs,
        parties: labels,
    })
}

/// Plane after measuring the quadrature combination `c`: the vector with the
/// largest `|σ(v, c)|` is replaced by `c`, the others are made to commute with
/// it. A `c` already orthogonal to the plane leaves it unchanged.
pub fn cv_measure(s: &CvStabilizer, c: &[f64]) -> Result<CvStabilizer> {
    let scale = s.max_norm() * norm(c);
    let products = s.vectors.iter().map(|v| cv_symplectic_product(v, c)).collect::<Result<Vec<_>>>()?;
    let Some((r, &sr)) = products.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) else {
        return Ok(s.clone());
    };
    if sr.abs() <= s.tolerance * scale {
        return Ok(s.clone());
    }
    let pivot = s.vectors[r].clone();
    let mut vectors = s.vectors.clone();
    for (j, v) in vectors.iter_mut().enumerate() {
        if j != r {
            let m = products[j] / sr;
            for (x, p) in v.iter_mut().zip(&pivot) {
                *x -= m * p;
            }
        }
    }
    vectors[r] = c.to_vec();
    CvStabilizer::new(vectors, s.parties.clone(), s.tolerance)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvTrimOutcome {
    pub plane: CvStabilizer,
    /// Dimension of the part of the plane supported on C alone.
    pub c_local_rank: usize,
    pub achieved_pairs: usize,
    pub success: bool,
}

/// Applies the verdict's plan at the vector level and checks that C
/// separates with the A|BC pair count intact.
pub fn cv_execute_trim(s: &CvStabilizer, v: &CvTrimVerdict) -> Result<CvTrimOutcome> {
    if !v.feasible {
        return Err(Error::Infeasible);
    }
    let labels = s.require_parties()?.to_vec();
    let mut plane = s.clone();
    for c in v.plan() {
        plane = cv_measure(&plane, &c)?;
    }
    let non_c = Cut::from_parties(&labels, &[Party::C]).columns(false);
    let c_local_rank = vanishing_subspace(&plane.field(), &plane.scaled(), &non_c).len();
    let n_c = labels.iter().filter(|&&l| l == Party::C).count();
    let achieved_pairs = cv_canonicalize(&plane, &Cut::from_parties(&labels, &[Party::A]))?.pair_count();
    Ok(CvTrimOutcome {
        success: c_local_rank == n_c && achieved_pairs == v.initial_pairs,
        plane,
        c_local_rank,
        achieved_pairs,
    })
}

/// A random symplectic map on the modes selected by `mask` (identity on the
/// rest): layers of symmetric shears and single-mode rotations.
pub fn random_local_symplectic<R: Rng>(mask: &[bool], rng: &mut R) -> DMatrix<f64> {
    let n = mask.len();
    let active: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
    let mut s = DMatrix::<f64>::identity(2 * n, 2 * n);
    for _ in 0..2 {
        for (from, to) in [(0usize, 1usize), (1, 0)] {
            let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
            for (a, &i) in active.iter().enumerate() {
                for &j in &active[a..] {
                    let x = rng.random_range(-1.0..1.0);
                    m[(2 * i + to, 2 * j + from)] += x;
                    if i != j {
                        m[(2 * j + to, 2 * i + from)] += x;
                    }
                }
            }
            s = m * s;
        }
        let mut r = DMatrix::<f64>::identity(2 * n, 2 * n);
        for &i in &active {
            let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (sn, cs) = th.sin_cos();
            r[(2 * i, 2 * i)] = cs;
            r[(2 * i, 2 * i + 1)] = -sn;
            r[(2 * i + 1, 2 * i)] = sn;
            r[(2 * i + 1, 2 * i + 1)] = cs;
        }
        s = r * s;
    }
    s
}

pub fn random_symplectic<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    random_local_symplectic(&vec![true; n], rng)
}

/// A random symplectic image of the position plane, with its basis mixed by
/// a random well-conditioned invertible matrix.
pub fn random_lagrangian<R: Rng>(n: usize, rng: &mut R) -> Result<CvStabilizer> {
    random_lagrangian_on(&vec![true; n], rng)
}

/// Like [`random_lagrangian`] but entangling only the modes in `mask`; the
/// others stay in the position plane.
pub fn random_lagrangian_on<R: Rng>(mask: &[bool], rng: &mut R) -> Result<CvStabilizer> {
    let n = mask.len();
    let s = random_local_symplectic(mask, rng);
    let mix = loop {
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let sv = g.singular_values();
        if sv.min() > 0.2 * sv.max() {
            break g;
        }
    };
    let images: Vec<Vec<f64>> = (0..n).map(|i| s.column(2 * i).iter().copied().collect()).collect();
    let vectors = (0..n)
        .map(|i| (0..2 * n).map(|k| (0..n).map(|j| mix[(i, j)] * images[j][k]).sum()).collect())
        .collect();
    CvStabilizer::new(vectors, None, DEFAULT_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(v: Vec<Vec<f64>>, p: &str) -> CvStabilizer {
        CvStabilizer::new(v, Some(parse_labels(p).unwrap()), DEFAULT_TOLERANCE).unwrap()
    }

    fn epr() -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0, -1.0, 0.0], vec![0.0, 1.0, 0.0, 1.0]]
    }

    #[test]
    fn product_examples() {
        assert_eq!(cv_symplectic_product(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(cv_symplectic_product(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        let e = epr();
        assert_eq!(cv_symplectic_product(&e[0], &e[1]).unwrap(), 0.0);
        assert!(cv_symplectic_product(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn epr_has_one_pair() {
        let s = plane(epr(), "AB");
        let cf = cv_canonicalize(&s, &Cut::new(vec![true, false])).unwrap();
        assert_eq!(cf.pair_count(), 1);
        assert!(cf.local_a.is_empty() && cf.local_b.is_empty());
        let pa = cf.pair_products(true);
        let pb = cf.pair_products(false);
        assert!((pa[(0, 1)] - 1.0).abs() < 1e-12 && (pb[(0, 1)] + 1.0).abs() < 1e-12);
        cf.verify().unwrap();
        assert!(s.same_plane(&cf.vectors()));
    }

    #[test]
    fn local_vector_is_classified_local() {
        let s = plane(vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]], "AB");
        let cf = cv_canonicalize(&s, &Cut::new(vec![true, false])).unwrap();
        assert_eq!((cf.local_a.len(), cf.local_b.len(), cf.pair_count()), (1, 1, 0));
    }

    #[test]
    fn non_lagrangian_is_rejected() {
        let v = vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]];
        assert!(matches!(CvStabilizer::new(v, None, DEFAULT_TOLERANCE), Err(Error::Degenerate(_))));
        let v = vec![vec![1.0, 0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0, 0.0]];
        assert!(matches!(CvStabilizer::new(v, None, DEFAULT_TOLERANCE), Err(Error::Degenerate(_))));
    }

    #[test]
    fn ghz_analogue_trims_by_witness() {
        let s = plane(
            vec![
                vec![1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0, -1.0, 0.0],
                vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
            ],
            "ABC",
        );
        let v = cv_check_trim(&s).unwrap();
        assert!(v.feasible);
        assert_eq!(v.condition1.len(), 1);
        let w = &v.condition1[0].0;
        assert!(w[0].abs() < 1e-12 && w[1].abs() < 1e-12);
        let out = cv_execute_trim(&s, &v).unwrap();
        assert!(out.success);
        assert_eq!(out.achieved_pairs, 1);
    }

    #[test]
    fn a_c_epr_is_infeasible() {
        let s = plane(vec![vec![1.0, 0.0, 0.0, 0.0, -1.0, 0.0], vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0], vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]], "ABC");
        let v = cv_check_trim(&s).unwrap();
        assert!(!v.feasible);
        assert_eq!((v.pair_count, v.b_free_rank), (1, 2));
        assert_eq!(cv_execute_trim(&s, &v), Err(Error::Infeasible));
    }

    #[test]
    fn unentangled_c_has_an_empty_plan() {
        let s = plane(vec![vec![1.0, 0.0, -1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0]], "ABC");
        let v = cv_check_trim(&s).unwrap();
        assert!(v.feasible && v.plan().is_empty());
        assert!(cv_execute_trim(&s, &v).unwrap().success);
    }

    #[test]
    fn file_round_trip() {
        let s = plane(epr(), "AB");
        let back = CvStabilizer::parse(&s.to_string()).unwrap();
        assert_eq!(back, s);
        let err = CvStabilizer::parse("modes=2\n1 0 -1 0\n0 1 0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "expected 4 entries, got 3".into() });
    }

    #[test]
    fn random_maps_are_symplectic() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let s = random_symplectic(3, &mut rng);
        let mut j = DMatrix::<f64>::zeros(6, 6);
        for i in 0..3 {
            j[(2 * i, 2 * i + 1)] = 1.0;
            j[(2 * i + 1, 2 * i)] = -1.0;
        }
        let d = s.transpose() * &j * &s - j;
        assert!(d.abs().max() < 1e-10);
    }
}
