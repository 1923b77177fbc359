//! Field-generic symplectic decompositions of isotropic subspaces.
//!
//! Vectors are interleaved `(x_1, z_1, …, x_n, z_n)`; the restricted form over
//! a site mask is `ω_M(u, v) = Σ_{i∈M} (x_i(u) z_i(v) − x_i(v) z_i(u))`.
//! Every vector travels with a payload (its coefficients over the input rows,
//! usually) that undergoes the same row operations, so callers can rebuild
//! exact group elements afterwards.

use crate::error::{Error, Result};
use crate::linalg::{self, axpy, scaled, Echelon, Field};

/// A vector with a payload carried through linear operations.
#[derive(Debug, Clone, PartialEq)]
pub struct Tagged<E> {
    pub v: Vec<E>,
    pub tag: Vec<E>,
}

impl<E: Copy> Tagged<E> {
    pub fn new(v: Vec<E>, tag: Vec<E>) -> Self {
        Self { v, tag }
    }

    fn axpy<F: Field<Elem = E>>(&mut self, field: &F, a: E, x: &Self) {
        axpy(field, &mut self.v, a, &x.v);
        axpy(field, &mut self.tag, a, &x.tag);
    }

    fn scale<F: Field<Elem = E>>(&mut self, field: &F, a: E) {
        self.v = scaled(field, a, &self.v);
        self.tag = scaled(field, a, &self.tag);
    }

    fn plus<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(field, field.one(), other);
        out
    }
}

/// Symplectic form restricted to the sites where `mask` is true.
pub fn restricted_form<F: Field>(field: &F, mask: &[bool], x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (i, &m) in mask.iter().enumerate() {
        if m {
            let t = field.sub(field.mul(x[2 * i], y[2 * i + 1]), field.mul(y[2 * i], x[2 * i + 1]));
            acc = field.add(acc, t);
        }
    }
    acc
}

/// Standard form on coordinates `(α_1, β_1, …)`: `Σ α_k β'_k − β_k α'_k`.
fn standard_form<F: Field>(field: &F, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let all = vec![true; x.len() / 2];
    restricted_form(field, &all, x, y)
}

/// Result of [`symplectic_gram_schmidt`].
#[derive(Debug, Clone)]
pub struct SymplecticBasis<E> {
    /// Pairs `(e, f)` with `form(e, f) = 1`, mutually orthogonal.
    pub pairs: Vec<(Tagged<E>, Tagged<E>)>,
    /// Vectors orthogonal to everything (the radical of the span).
    pub radical: Vec<Tagged<E>>,
}

/// Symplectic Gram–Schmidt on linearly independent `items`.
///
/// The first remaining vector `e` is paired with the remaining vector of
/// largest `|form(e, f)|` (first on ties), `f` is scaled to `form(e, f) = 1`, and
/// every other vector is projected off the pair by
/// `x ← x − form(x, f) e + form(x, e) f`. A vector with no partner lands in the
/// radical. With `normalize`, `e` is first scaled so its leading entry is one.
/// Over approximate fields `e` is instead the member of the best-conditioned
/// pair and is left unscaled.
pub fn symplectic_gram_schmidt<F: Field>(
    field: &F,
    items: Vec<Tagged<F::Elem>>,
    form: impl Fn(&[F::Elem], &[F::Elem]) -> F::Elem,
    normalize: bool,
) -> SymplecticBasis<F::Elem> {
    let mut rest = items;
    let mut pairs = Vec::new();
    let mut radical = Vec::new();
    while !rest.is_empty() {
        if F::APPROXIMATE {
            if let Some(i) = best_conditioned(field, &rest, &form) {
                rest.swap(0, i);
            }
        }
        let mut e = rest.remove(0);
        if normalize && !F::APPROXIMATE {
            if let Some(&lead) = e.v.iter().find(|&&x| !field.is_zero(x)) {
                e.scale(field, field.inv(lead));
            }
        }
        let mut best: Option<(usize, f64, F::Elem)> = None;
        for (j, x) in rest.iter().enumerate() {
            let w = form(&e.v, &x.v);
            if field.is_zero(w) {
                continue;
            }
            let m = field.magnitude(w);
            if best.is_none_or(|(_, bm, _)| m > bm) {
                best = Some((j, m, w));
            }
        }
        let Some((j, _, w)) = best else {
            radical.push(e);
            continue;
        };
        let mut f = rest.remove(j);
        f.scale(field, field.inv(w));
        for x in rest.iter_mut() {
            let xf = form(&x.v, &f.v);
            let xe = form(&x.v, &e.v);
            x.axpy(field, field.neg(xf), &e);
            x.axpy(field, xe, &f);
        }
        pairs.push((e, f));
    }
    SymplecticBasis { pairs, radical }
}

/// Index of the vector in the pair with the largest `|form(x, y)| / (|x| |y|)`.
fn best_conditioned<F: Field>(
    field: &F,
    items: &[Tagged<F::Elem>],
    form: &impl Fn(&[F::Elem], &[F::Elem]) -> F::Elem,
) -> Option<usize> {
    let norm = |v: &[F::Elem]| v.iter().map(|&x| field.magnitude(x).powi(2)).sum::<f64>().sqrt();
    let norms: Vec<f64> = items.iter().map(|x| norm(&x.v)).collect();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            let w = form(&items[i].v, &items[j].v);
            if field.is_zero(w) {
                continue;
            }
            let score = field.magnitude(w) / (norms[i] * norms[j]);
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
    }
    best.map(|(i, _)| i)
}

fn dot<F: Field>(field: &F, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    x.iter().zip(y).fold(field.zero(), |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// `need` vectors from the span of `rows`, Euclidean-orthogonal to `basis`
/// and to each other, largest residual first. Keeps the complement of the
/// local part well conditioned over floating-point fields.
fn orthogonal_residuals<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
    basis: &[Tagged<F::Elem>],
    need: usize,
) -> Vec<Tagged<F::Elem>> {
    let k = rows.len();
    let sq = |v: &[F::Elem]| v.iter().map(|&x| field.magnitude(x).powi(2)).sum::<f64>();
    let mut q: Vec<Tagged<F::Elem>> = Vec::new();
    let reduce = |x: &mut Tagged<F::Elem>, q: &[Tagged<F::Elem>]| {
        for _ in 0..2 {
            for b in q {
                let c = field.div(dot(field, &x.v, &b.v), dot(field, &b.v, &b.v));
                x.axpy(field, field.neg(c), b);
            }
        }
    };
    for b in basis {
        let mut b = b.clone();
        reduce(&mut b, &q);
        q.push(b);
    }
    let mut cands: Vec<Tagged<F::Elem>> =
        rows.iter().enumerate().map(|(i, r)| Tagged::new(r.clone(), linalg::unit(field, k, i))).collect();
    let mut out = Vec::with_capacity(need);
    for _ in 0..need {
        for c in cands.iter_mut() {
            reduce(c, &q);
        }
        let Some(i) = (0..cands.len()).max_by(|&a, &b| sq(&cands[a].v).total_cmp(&sq(&cands[b].v))) else {
            break;
        };
        let pick = cands.swap_remove(i);
        q.push(pick.clone());
        out.push(pick);
    }
    out
}

/// Bipartite decomposition of an isotropic subspace.
#[derive(Debug, Clone)]
pub struct Decomposition<E> {
    /// Elements vanishing on the second side.
    pub local_first: Vec<Tagged<E>>,
    /// Elements vanishing on the first side.
    pub local_second: Vec<Tagged<E>>,
    /// Correlated pairs with `ω_first(e, f) = 1` and `ω_second(e, f) = −1`.
    pub pairs: Vec<(Tagged<E>, Tagged<E>)>,
}

fn columns(mask: &[bool], side: bool) -> Vec<usize> {
    (0..mask.len()).filter(|&i| mask[i] == side).flat_map(|i| [2 * i, 2 * i + 1]).collect()
}

fn project<E: Copy>(v: &[E], cols: &[usize]) -> Vec<E> {
    cols.iter().map(|&c| v[c]).collect()
}

/// Tagged elements spanning `{ Σ c_i rows_i : vanishing on cols }`, in
/// reduced row-echelon order of their vectors.
pub fn vanishing_subspace<F: Field>(field: &F, rows: &[Vec<F::Elem>], cols: &[usize]) -> Vec<Tagged<F::Elem>> {
    let len = rows.first().map_or(0, |r| r.len());
    let items: Vec<_> = linalg::left_kernel(field, rows, cols)
        .into_iter()
        .map(|c| (linalg::combine(field, &c, rows, len), c))
        .collect();
    linalg::reduced_basis_tagged(field, &items).into_iter().map(|(v, tag)| Tagged::new(v, tag)).collect()
}

/// Splits the span of the isotropic `rows` across the bipartition `first`.
///
/// Payloads are coefficient vectors over `rows`. The correlated complement is
/// ordered by the pivots of its first-side projection before pairing, so the
/// output is reproducible. Fails when the first-side form is degenerate on
/// the complement, which happens only for non-isotropic input.
pub fn decompose<F: Field>(field: &F, rows: &[Vec<F::Elem>], first: &[bool], normalize: bool) -> Result<Decomposition<F::Elem>> {
    let k = rows.len();
    let len = 2 * first.len();
    let first_cols = columns(first, true);
    let local_first = vanishing_subspace(field, rows, &columns(first, false));
    let local_second = vanishing_subspace(field, rows, &first_cols);

    if F::APPROXIMATE {
        let need = linalg::rank(field, rows) - local_first.len() - local_second.len();
        let locals: Vec<_> = local_first.iter().chain(&local_second).cloned().collect();
        let ordered = orthogonal_residuals(field, rows, &locals, need);
        let basis = symplectic_gram_schmidt(field, ordered, |x, y| restricted_form(field, first, x, y), normalize);
        if !basis.radical.is_empty() {
            return Err(Error::Degenerate(format!("{} correlated vectors have no partner", basis.radical.len())));
        }
        return Ok(Decomposition { local_first, local_second, pairs: basis.pairs });
    }
    let mut ech = Echelon::new(field);
    for t in local_first.iter().chain(&local_second) {
        ech.insert(t.v.clone(), Vec::new());
    }
    let mut complement = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if ech.insert(r.clone(), Vec::new()).is_none() {
            complement.push(Tagged::new(r.clone(), linalg::unit(field, k, i)));
        }
    }
    // order by the first-side projection; payload = full vector ++ coefficients
    let items: Vec<_> = complement
        .into_iter()
        .map(|t| {
            let mut payload = t.v.clone();
            payload.extend(t.tag);
            (project(&t.v, &first_cols), payload)
        })
        .collect();
    let ordered: Vec<Tagged<F::Elem>> = linalg::reduced_basis_tagged(field, &items)
        .into_iter()
        .map(|(_, payload)| Tagged::new(payload[..len].to_vec(), payload[len..].to_vec()))
        .collect();
    if ordered.len() + local_first.len() + local_second.len() != linalg::rank(field, rows) {
        return Err(Error::Degenerate("first-side projection of the correlated part is not injective".into()));
    }
    let basis = symplectic_gram_schmidt(field, ordered, |x, y| restricted_form(field, first, x, y), normalize);
    if !basis.radical.is_empty() {
        return Err(Error::Degenerate(format!("{} correlated vectors have no partner", basis.radical.len())));
    }
    Ok(Decomposition { local_first, local_second, pairs: basis.pairs })
}

/// One condition-(1) pair: `witness` is the member acting as identity on A,
/// `kept` is the partner whose C-part gets measured.
#[derive(Debug, Clone)]
pub struct WitnessPair<E> {
    pub witness: Tagged<E>,
    pub kept: Tagged<E>,
    /// True when the witness lies in both local images (a radical pair).
    pub radical: bool,
}

/// A condition-(2) group of two rewritten pairs
/// `(t, s + t̄)` and `(t̄, s̄ + t)`, where `s, s̄` act as identity on B and
/// `t, t̄` act as identity on A.
#[derive(Debug, Clone)]
pub struct MatchedGroup<E> {
    pub s: Tagged<E>,
    pub s_bar: Tagged<E>,
    pub t: Tagged<E>,
    pub t_bar: Tagged<E>,
    /// `s + t̄` and `s̄ + t`.
    pub kept: [Tagged<E>; 2],
}

/// The AB|C decomposition adapted to trimming.
#[derive(Debug, Clone)]
pub struct TrimAdapted<E> {
    /// AB|C correlated pair count `m`.
    pub pair_count: usize,
    /// Dimension of the image of the B-free elements in the correlated quotient.
    pub a_image_dim: usize,
    pub local_ab: Vec<Tagged<E>>,
    pub local_c: Vec<Tagged<E>>,
    pub condition1: Vec<WitnessPair<E>>,
    pub condition2: Vec<MatchedGroup<E>>,
    /// Pairs `(s, s̄)` left without a partner when infeasible.
    pub unmatched_a: Vec<(Tagged<E>, Tagged<E>)>,
}

impl<E> TrimAdapted<E> {
    /// Trimmable iff the B-free image is at most half the quotient.
    pub fn feasible(&self) -> bool {
        self.a_image_dim <= self.pair_count
    }
}

/// Builds the trimming-adapted form of the isotropic span of `rows` for site
/// masks `a`, `b`, `c` (a partition of the sites).
///
/// Let `R` be the AB-projection of the span modulo its AB-local elements,
/// with the AB form. `U` is the image of elements vanishing on B, and the image
/// of elements vanishing on A is `U^⊥`. The pieces are the radical
/// `N = U ∩ U^⊥` with a dual `N*`, a symplectic complement `S` of `N` in `U`,
/// and one `T` of `N` in `U^⊥`. Each `S` pair is matched with a `T` pair;
/// leftover `T` pairs and the radical pairs are condition-(1) pairs.
pub fn trim_adapted<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
    a: &[bool],
    b: &[bool],
    normalize: bool,
) -> Result<TrimAdapted<F::Elem>> {
    let n = a.len();
    let len = 2 * n;
    let ab: Vec<bool> = (0..n).map(|i| a[i] || b[i]).collect();
    let dec = decompose(field, rows, &ab, normalize)?;
    let m = dec.pairs.len();
    let form_ab = |x: &[F::Elem], y: &[F::Elem]| restricted_form(field, &ab, x, y);
    let coords = |x: &[F::Elem]| -> Vec<F::Elem> {
        let mut c = Vec::with_capacity(2 * m);
        for (e, f) in &dec.pairs {
            c.push(form_ab(x, &f.v));
            c.push(field.neg(form_ab(x, &e.v)));
        }
        c
    };
    // items in R: v = coordinates, tag = full vector ++ coefficients
    let to_r = |t: &Tagged<F::Elem>| {
        let mut payload = t.v.clone();
        payload.extend(t.tag.iter().copied());
        Tagged::new(coords(&t.v), payload)
    };
    let quotient_basis = |items: Vec<Tagged<F::Elem>>| -> Vec<Tagged<F::Elem>> {
        let pairs: Vec<_> = items.into_iter().map(|t| (t.v, t.tag)).collect();
        linalg::reduced_basis_tagged(field, &pairs).into_iter().map(|(v, tag)| Tagged::new(v, tag)).collect()
    };
    let b_free: Vec<_> = vanishing_subspace(field, rows, &columns(b, true)).iter().map(to_r).collect();
    let a_free: Vec<_> = vanishing_subspace(field, rows, &columns(a, true)).iter().map(to_r).collect();
    let u = quotient_basis(b_free);
    let u_perp = quotient_basis(a_free);
    if u.len() + u_perp.len() != 2 * m {
        return Err(Error::Degenerate("local images are not mutually orthogonal complements".into()));
    }

    let std = |x: &[F::Elem], y: &[F::Elem]| standard_form(field, x, y);
    let ub = symplectic_gram_schmidt(field, u.clone(), std, normalize);
    let radical = ub.radical;
    let s_pairs = ub.pairs;

    // T: complement of N inside U^⊥
    let mut ech = Echelon::new(field);
    for r in &radical {
        ech.insert(r.v.clone(), Vec::new());
    }
    let t_items: Vec<_> = u_perp.iter().filter(|x| ech.insert(x.v.clone(), Vec::new()).is_none()).cloned().collect();
    let tb = symplectic_gram_schmidt(field, t_items, std, normalize);
    if !tb.radical.is_empty() {
        return Err(Error::Degenerate("complement of the radical is degenerate".into()));
    }
    let t_pairs = tb.pairs;

    // witnesses for the radical need an A-free lift: solve within U^⊥
    let mut perp_ech = Echelon::new(field);
    for (i, x) in u_perp.iter().enumerate() {
        perp_ech.insert(x.v.clone(), linalg::unit(field, u_perp.len(), i));
    }
    let a_free_lift = |x: &Tagged<F::Elem>| -> Result<Tagged<F::Elem>> {
        let c = perp_ech
            .solve(&x.v, u_perp.len())
            .ok_or_else(|| Error::Degenerate("radical vector outside the A-free image".into()))?;
        let mut out = Tagged::new(linalg::zeros(field, x.v.len()), linalg::zeros(field, x.tag.len()));
        for (ci, item) in c.iter().zip(&u_perp) {
            out.axpy(field, *ci, item);
        }
        Ok(out)
    };

    // N*: inside (S ⊕ T)^⊥, dual to N and isotropic
    let lift_coords = |c: &[F::Elem]| -> Tagged<F::Elem> {
        let plen = len + rows.len();
        let mut out = Tagged::new(c.to_vec(), linalg::zeros(field, plen));
        for (k, (e, f)) in dec.pairs.iter().enumerate() {
            let mut pe = e.v.clone();
            pe.extend(e.tag.iter().copied());
            let mut pf = f.v.clone();
            pf.extend(f.tag.iter().copied());
            axpy(field, &mut out.tag, c[2 * k], &pe);
            axpy(field, &mut out.tag, c[2 * k + 1], &pf);
        }
        out
    };
    let mut duals = Vec::new();
    if !radical.is_empty() {
        let rows_j: Vec<Vec<F::Elem>> = s_pairs
            .iter()
            .chain(&t_pairs)
            .flat_map(|(e, f)| [e, f])
            .map(|x| {
                // w . y = std(x, y)
                let mut w = Vec::with_capacity(2 * m);
                for k in 0..m {
                    w.push(field.neg(x.v[2 * k + 1]));
                    w.push(x.v[2 * k]);
                }
                w
            })
            .collect();
        let w_space = if rows_j.is_empty() {
            (0..2 * m).map(|i| linalg::unit(field, 2 * m, i)).collect()
        } else {
            linalg::right_kernel(field, &rows_j, 2 * m)
        };
        let mut ech = Echelon::new(field);
        for r in &radical {
            ech.insert(r.v.clone(), Vec::new());
        }
        let comp: Vec<Vec<F::Elem>> = w_space.into_iter().filter(|w| ech.insert(w.clone(), Vec::new()).is_none()).collect();
        if comp.len() != radical.len() {
            return Err(Error::Degenerate("radical has no dual of matching dimension".into()));
        }
        // columns of M_{lj} = std(n_l, c_j); solve M y = e_i
        let r = radical.len();
        let mut mech = Echelon::new(field);
        for (j, cj) in comp.iter().enumerate() {
            let col: Vec<F::Elem> = radical.iter().map(|nl| std(&nl.v, cj)).collect();
            mech.insert(col, linalg::unit(field, r, j));
        }
        let mut built: Vec<Tagged<F::Elem>> = Vec::new();
        for i in 0..r {
            let y = mech
                .solve(&linalg::unit(field, r, i), r)
                .ok_or_else(|| Error::Degenerate("radical pairing matrix is singular".into()))?;
            let fi = linalg::combine(field, &y, &comp, 2 * m);
            let mut fi = lift_coords(&fi);
            for (l, fl) in built.iter().enumerate() {
                let w = std(&fi.v, &fl.v);
                fi.axpy(field, field.neg(w), &radical[l]);
            }
            built.push(fi);
        }
        duals = built;
    }

    let split = |t: &Tagged<F::Elem>| Tagged::new(t.tag[..len].to_vec(), t.tag[len..].to_vec());
    let mut condition1 = Vec::new();
    for (nv, dual) in radical.iter().zip(&duals) {
        condition1.push(WitnessPair { witness: split(&a_free_lift(nv)?), kept: split(dual), radical: true });
    }
    let matched = s_pairs.len().min(t_pairs.len());
    for (t, t_bar) in &t_pairs[matched..] {
        condition1.push(WitnessPair { witness: split(t), kept: split(t_bar), radical: false });
    }
    let mut condition2 = Vec::new();
    for ((s, s_bar), (t, t_bar)) in s_pairs.iter().zip(&t_pairs) {
        let (s, s_bar, t, t_bar) = (split(s), split(s_bar), split(t), split(t_bar));
        let kept = [s.plus(field, &t_bar), s_bar.plus(field, &t)];
        condition2.push(MatchedGroup { s, s_bar, t, t_bar, kept });
    }
    let unmatched_a = s_pairs[matched..].iter().map(|(s, sb)| (split(s), split(sb))).collect();
    Ok(TrimAdapted {
        pair_count: m,
        a_image_dim: u.len(),
        local_ab: dec.local_first,
        local_c: dec.local_second,
        condition1,
        condition2,
        unmatched_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Reals};

    fn v(s: &[u32]) -> Vec<u32> {
        s.to_vec()
    }

    #[test]
    fn gram_schmidt_builds_a_symplectic_basis() {
        let f = PrimeField::new(3);
        let items = vec![
            Tagged::new(v(&[1, 2, 0, 1]), vec![]),
            Tagged::new(v(&[0, 1, 1, 1]), vec![]),
            Tagged::new(v(&[0, 0, 2, 1]), vec![]),
            Tagged::new(v(&[0, 0, 0, 1]), vec![]),
        ];
        let std = |x: &[u32], y: &[u32]| standard_form(&f, x, y);
        let b = symplectic_gram_schmidt(&f, items, std, true);
        assert_eq!(b.pairs.len(), 2);
        assert!(b.radical.is_empty());
        for (i, (e, g)) in b.pairs.iter().enumerate() {
            assert_eq!(std(&e.v, &g.v), 1);
            for (e2, g2) in &b.pairs[i + 1..] {
                for x in [e, g] {
                    for y in [e2, g2] {
                        assert_eq!(std(&x.v, &y.v), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn ghz_decomposition_across_a_bc() {
        // ZZI, IZZ, XXX
        let rows = vec![v(&[0, 1, 0, 1, 0, 0]), v(&[0, 0, 0, 1, 0, 1]), v(&[1, 0, 1, 0, 1, 0])];
        let f = PrimeField::new(2);
        let d = decompose(&f, &rows, &[true, false, false], true).unwrap();
        assert!(d.local_first.is_empty());
        assert_eq!(d.local_second.len(), 1);
        assert_eq!(d.local_second[0].v, v(&[0, 0, 0, 1, 0, 1]));
        assert_eq!(d.pairs.len(), 1);
    }

    #[test]
    fn epr_plane_over_the_reals() {
        let rows = vec![vec![1.0, 0.0, -1.0, 0.0], vec![0.0, 1.0, 0.0, 1.0]];
        let f = Reals { eps: 1e-12 };
        let d = decompose(&f, &rows, &[true, false], false).unwrap();
        assert_eq!(d.pairs.len(), 1);
        let (e, g) = &d.pairs[0];
        assert!((restricted_form(&f, &[true, false], &e.v, &g.v) - 1.0).abs() < 1e-12);
        assert!((restricted_form(&f, &[false, true], &e.v, &g.v) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_trim_has_one_radical_pair() {
        let rows = vec![v(&[0, 1, 0, 1, 0, 0]), v(&[0, 0, 0, 1, 0, 1]), v(&[1, 0, 1, 0, 1, 0])];
        let f = PrimeField::new(2);
        let t = trim_adapted(&f, &rows, &[true, false, false], &[false, true, false], true).unwrap();
        assert!(t.feasible());
        assert_eq!(t.pair_count, 1);
        assert_eq!(t.condition1.len(), 1);
        assert!(t.condition1[0].radical);
        // I_A Z_B Z_C
        assert_eq!(t.condition1[0].witness.v, v(&[0, 0, 0, 1, 0, 1]));
        // C part of the kept element is X
        assert_eq!(&t.condition1[0].kept.v[4..], &[1, 0]);
    }

    #[test]
    fn bell_pair_between_a_and_c_is_not_trimmable() {
        // XIX, ZIZ, IZI on sites A, B, C
        let rows = vec![v(&[1, 0, 0, 0, 1, 0]), v(&[0, 1, 0, 0, 0, 1]), v(&[0, 0, 0, 1, 0, 0])];
        let f = PrimeField::new(2);
        let t = trim_adapted(&f, &rows, &[true, false, false], &[false, true, false], true).unwrap();
        assert_eq!((t.pair_count, t.a_image_dim), (1, 2));
        assert!(!t.feasible());
        assert_eq!(t.unmatched_a.len(), 1);
    }
}
