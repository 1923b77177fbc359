//! Field-generic Gaussian elimination.
//!
//! The same elimination code serves the exact prime-field path (`Z_p`) and the
//! floating-point path used for continuous-variable planes. A [`Field`] decides
//! what counts as zero and which pivot to prefer: prime fields take the lowest
//! nonzero column, the reals take the largest magnitude (partial pivoting).

use std::fmt::Debug;

pub trait Field: Sync {
    type Elem: Copy + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; callers never pass a zero.
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: Self::Elem) -> bool;
    /// Pivot preference, larger wins; ties go to the lowest index.
    fn magnitude(&self, a: Self::Elem) -> f64;
    /// Floating-point fields prefer well-conditioned pivots over index order.
    const APPROXIMATE: bool = false;

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.mul(a, self.inv(b))
    }
}

/// The prime field `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        debug_assert!(crate::modular::is_prime(p));
        Self { p }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.p)) as u32
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(self.p) - u64::from(b % self.p)) % u64::from(self.p)) as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: u32) -> u32 {
        crate::modular::inverse(a, self.p).expect("inverse of zero in prime field")
    }
    fn is_zero(&self, a: u32) -> bool {
        a % self.p == 0
    }
    fn magnitude(&self, a: u32) -> f64 {
        if a % self.p == 0 {
            0.0
        } else {
            1.0
        }
    }
}

/// Real numbers with an absolute zero threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reals {
    pub eps: f64,
}

impl Field for Reals {
    type Elem = f64;
    const APPROXIMATE: bool = true;

    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn add(&self, a: f64, b: f64) -> f64 {
        a + b
    }
    fn sub(&self, a: f64, b: f64) -> f64 {
        a - b
    }
    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }
    fn neg(&self, a: f64) -> f64 {
        -a
    }
    fn inv(&self, a: f64) -> f64 {
        1.0 / a
    }
    fn is_zero(&self, a: f64) -> bool {
        a.abs() <= self.eps
    }
    fn magnitude(&self, a: f64) -> f64 {
        a.abs()
    }
}

pub fn zeros<F: Field>(field: &F, len: usize) -> Vec<F::Elem> {
    vec![field.zero(); len]
}

pub fn unit<F: Field>(field: &F, len: usize, i: usize) -> Vec<F::Elem> {
    let mut v = zeros(field, len);
    v[i] = field.one();
    v
}

/// `y += a * x`
pub fn axpy<F: Field>(field: &F, y: &mut [F::Elem], a: F::Elem, x: &[F::Elem]) {
    if field.is_zero(a) {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.add(*yi, field.mul(a, xi));
    }
}

pub fn scaled<F: Field>(field: &F, a: F::Elem, x: &[F::Elem]) -> Vec<F::Elem> {
    x.iter().map(|&xi| field.mul(a, xi)).collect()
}

pub fn is_zero_vec<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|&x| field.is_zero(x))
}

/// Linear combination `sum_i coeffs[i] * vectors[i]`.
pub fn combine<F: Field>(field: &F, coeffs: &[F::Elem], vectors: &[Vec<F::Elem>], len: usize) -> Vec<F::Elem> {
    let mut out = zeros(field, len);
    for (c, v) in coeffs.iter().zip(vectors) {
        axpy(field, &mut out, *c, v);
    }
    out
}

/// Bilinear form `x^T G y`.
pub fn form<F: Field>(field: &F, gram: &[Vec<F::Elem>], x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (i, &xi) in x.iter().enumerate() {
        if field.is_zero(xi) {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            acc = field.add(acc, field.mul(xi, field.mul(gram[i][j], yj)));
        }
    }
    acc
}

fn pick_pivot<F: Field>(field: &F, v: &[F::Elem]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, &x) in v.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        let m = field.magnitude(x);
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((j, m));
        }
    }
    best.map(|(j, _)| j)
}

#[derive(Debug, Clone)]
struct EchelonRow<E> {
    v: Vec<E>,
    aux: Vec<E>,
    pivot: usize,
}

/// Incrementally built echelon basis with an auxiliary "tag" vector carried
/// through every row operation.
///
/// Tags record which combination of inserted vectors a row represents, so a
/// dependent insertion reveals an explicit linear relation.
#[derive(Debug, Clone)]
pub struct Echelon<'f, F: Field> {
    field: &'f F,
    rows: Vec<EchelonRow<F::Elem>>,
}

impl<'f, F: Field> Echelon<'f, F> {
    pub fn new(field: &'f F) -> Self {
        Self { field, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    /// Reduces `(v, aux)` against the stored rows, returning the residuals.
    pub fn reduce(&self, mut v: Vec<F::Elem>, mut aux: Vec<F::Elem>) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let f = self.field;
        for row in &self.rows {
            let c = v[row.pivot];
            if f.is_zero(c) {
                continue;
            }
            let m = f.neg(c);
            axpy(f, &mut v, m, &row.v);
            axpy(f, &mut aux, m, &row.aux);
            v[row.pivot] = f.zero();
        }
        (v, aux)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let (r, _) = self.reduce(v.to_vec(), Vec::new());
        is_zero_vec(self.field, &r)
    }

    /// Inserts a vector. Returns `None` when it was independent, or the
    /// residual tag (a relation among inserted tags) when it was dependent.
    pub fn insert(&mut self, v: Vec<F::Elem>, aux: Vec<F::Elem>) -> Option<Vec<F::Elem>> {
        let f = self.field;
        let (mut r, mut a) = self.reduce(v, aux);
        match pick_pivot(f, &r) {
            None => Some(a),
            Some(p) => {
                let s = f.inv(r[p]);
                r = scaled(f, s, &r);
                a = scaled(f, s, &a);
                r[p] = f.one();
                self.rows.push(EchelonRow { v: r, aux: a, pivot: p });
                None
            }
        }
    }

    /// Expresses `v` as a combination of the inserted vectors, returned in
    /// tag space (requires every inserted tag to be a unit vector of that space).
    pub fn solve(&self, v: &[F::Elem], tag_len: usize) -> Option<Vec<F::Elem>> {
        let (r, a) = self.reduce(v.to_vec(), zeros(self.field, tag_len));
        if is_zero_vec(self.field, &r) {
            Some(a.into_iter().map(|x| self.field.neg(x)).collect())
        } else {
            None
        }
    }
}

fn project<F: Field>(v: &[F::Elem], cols: &[usize]) -> Vec<F::Elem> {
    cols.iter().map(|&c| v[c]).collect()
}

/// Basis of `{c : sum_i c_i rows[i][cols] = 0}`.
pub fn left_kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], cols: &[usize]) -> Vec<Vec<F::Elem>> {
    let n = rows.len();
    let mut ech = Echelon::new(field);
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if let Some(rel) = ech.insert(project::<F>(row, cols), unit(field, n, i)) {
            out.push(rel);
        }
    }
    out
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `ncols`.
pub fn right_kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let transposed: Vec<Vec<F::Elem>> = (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let all: Vec<usize> = (0..rows.len()).collect();
    left_kernel(field, &transposed, &all)
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut ech = Echelon::new(field);
    for r in rows {
        ech.insert(r.clone(), Vec::new());
    }
    ech.rank()
}

/// Reduced row-echelon basis of the span of `rows`, sorted by pivot column.
pub fn span_basis<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let tagged: Vec<_> = rows.iter().map(|r| (r.clone(), Vec::new())).collect();
    reduced_basis_tagged(field, &tagged).into_iter().map(|(v, _)| v).collect()
}

/// Like [`span_basis`], carrying each row's tag through the row operations.
pub fn reduced_basis_tagged<F: Field>(
    field: &F,
    items: &[(Vec<F::Elem>, Vec<F::Elem>)],
) -> Vec<(Vec<F::Elem>, Vec<F::Elem>)> {
    let mut ech = Echelon::new(field);
    for (v, t) in items {
        ech.insert(v.clone(), t.clone());
    }
    let mut out: Vec<EchelonRow<F::Elem>> = ech.rows;
    // back-substitute so every pivot column is clean in every other row
    for i in 0..out.len() {
        let (pi, vi, ti) = (out[i].pivot, out[i].v.clone(), out[i].aux.clone());
        for (j, row) in out.iter_mut().enumerate() {
            if j != i {
                let c = field.neg(row.v[pi]);
                axpy(field, &mut row.v, c, &vi);
                axpy(field, &mut row.aux, c, &ti);
                row.v[pi] = field.zero();
            }
        }
    }
    out.sort_by_key(|r| r.pivot);
    out.into_iter().map(|r| (r.v, r.aux)).collect()
}

/// Greedily extends `basis` with candidates that are independent of it;
/// returns only the added candidates, in order.
pub fn extend_basis<F: Field>(
    field: &F,
    basis: &[Vec<F::Elem>],
    candidates: impl IntoIterator<Item = Vec<F::Elem>>,
) -> Vec<Vec<F::Elem>> {
    let mut ech = Echelon::new(field);
    for b in basis {
        ech.insert(b.clone(), Vec::new());
    }
    let mut added = Vec::new();
    for c in candidates {
        if ech.insert(c.clone(), Vec::new()).is_none() {
            added.push(c);
        }
    }
    added
}

/// Basis of the intersection of two subspaces given by spanning rows.
pub fn intersect<F: Field>(field: &F, u: &[Vec<F::Elem>], w: &[Vec<F::Elem>], len: usize) -> Vec<Vec<F::Elem>> {
    let u = span_basis(field, u);
    let mut stacked = u.clone();
    stacked.extend(w.iter().cloned());
    let cols: Vec<usize> = (0..len).collect();
    let rels = left_kernel(field, &stacked, &cols);
    let pieces: Vec<Vec<F::Elem>> = rels.iter().map(|rel| combine(field, &rel[..u.len()], &u, len)).collect();
    span_basis(field, &pieces)
}
