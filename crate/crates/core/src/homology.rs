//! Exact linear algebra over the coefficient field: sparse matrices, row
//! echelon spans, ranks, Betti numbers, and Euler characteristics.

use std::collections::BTreeMap;
use std::fmt;

use crate::chromatic::IntPolynomial;
use crate::complexes::{CbsComplex, ChainComplex, GradingKind};
use crate::field::Field;

/// Sparse column vector: `(row, coefficient)` pairs sorted by row, no zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `target += scale * source`, keeping the sorted/no-zero invariant.
pub fn svec_add_scaled<F: Field>(
    target: &SparseVec<F>,
    scale: &F,
    source: &SparseVec<F>,
) -> SparseVec<F> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some((ri, _)), Some((rj, _))) if ri == rj => {
                let v = target[i].1.clone() + scale.clone() * source[j].1.clone();
                if !v.is_zero() {
                    out.push((*ri, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ri, _)), Some((rj, _))) if ri < rj => {
                out.push(target[i].clone());
                i += 1;
            }
            (Some(_), Some(_)) => {
                out.push((source[j].0, scale.clone() * source[j].1.clone()));
                j += 1;
            }
            (Some(_), None) => {
                out.push(target[i].clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push((source[j].0, scale.clone() * source[j].1.clone()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Sparse matrix over an exact field, column-major: column `j` is the image
/// of source basis element `j`. No zero entries are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<F: Field> {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity_like(n: usize, one: &F) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for j in 0..n {
            m.cols[j].push((j, one.clone()));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn column(&self, j: usize) -> &SparseVec<F> {
        &self.cols[j]
    }

    /// Adds `value` to the entry at `(row, col)`.
    pub fn add_entry(&mut self, row: usize, col: usize, value: F) {
        assert!(row < self.nrows && col < self.ncols, "entry out of shape");
        if value.is_zero() {
            return;
        }
        let column = &mut self.cols[col];
        match column.binary_search_by_key(&row, |e| e.0) {
            Ok(k) => {
                let v = column[k].1.clone() + value;
                if v.is_zero() {
                    column.remove(k);
                } else {
                    column[k].1 = v;
                }
            }
            Err(k) => column.insert(k, (row, value)),
        }
    }

    pub fn set_column(&mut self, col: usize, v: SparseVec<F>) {
        debug_assert!(v.iter().all(|(r, c)| *r < self.nrows && !c.is_zero()));
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        self.cols[col] = v;
    }

    /// Matrix-vector product with a sparse column vector.
    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (j, c) in v {
            for (r, a) in &self.cols[*j] {
                let term = a.clone() * c.clone();
                match acc.get_mut(r) {
                    Some(slot) => *slot += term,
                    None => {
                        acc.insert(*r, term);
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Composition `self ∘ first` (apply `first`, then `self`).
    pub fn compose(&self, first: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!(self.ncols, first.nrows, "composition shape mismatch");
        let mut out = SparseMatrix::zero(self.nrows, first.ncols);
        for j in 0..first.ncols {
            out.cols[j] = self.apply(&first.cols[j]);
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = SparseMatrix::zero(self.nrows, self.ncols);
        for j in 0..self.ncols {
            let one_scale = match self.cols[j].first().or(other.cols[j].first()) {
                Some((_, w)) => w.embed(1),
                None => {
                    continue;
                }
            };
            out.cols[j] = svec_add_scaled(&self.cols[j], &one_scale, &other.cols[j]);
        }
        out
    }

    /// Rank over the field, by Gaussian elimination with first-nonzero
    /// pivoting in column order. Deterministic; arithmetic is exact.
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for j in 0..self.ncols {
            ech.insert(self.cols[j].clone());
        }
        ech.rank()
    }
}

/// Incrementally maintained reduced row echelon span of sparse vectors.
///
/// Rows are normalized to leading coefficient 1, kept fully reduced, and
/// sorted by pivot position, so reduction against the span is deterministic.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    rows: Vec<(usize, SparseVec<F>)>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F>> {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Reduces `v` against the span without inserting it.
    pub fn reduce(&self, mut v: SparseVec<F>) -> SparseVec<F> {
        for (pivot, row) in &self.rows {
            if let Ok(k) = v.binary_search_by_key(pivot, |e| e.0) {
                let scale = -v[k].1.clone();
                v = svec_add_scaled(&v, &scale, row);
            }
        }
        v
    }

    /// True iff `v` lies in the span.
    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns `true` when the rank grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let lead = v[0].1.clone().inv();
        for entry in v.iter_mut() {
            entry.1 = entry.1.clone() * lead.clone();
        }
        let pivot = v[0].0;
        // keep existing rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&pivot, |e| e.0) {
                let scale = -row[k].1.clone();
                *row = svec_add_scaled(row, &scale, &v);
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, v));
        true
    }
}

/// Basis of the kernel of a sparse matrix, for debugging chain maps. Betti
/// numbers only need ranks; this augments the elimination with combination
/// tags and reads off the columns that reduce to zero.
pub fn kernel_basis<F: Field>(m: &SparseMatrix<F>) -> Vec<SparseVec<F>> {
    let n = m.nrows();
    let mut ech: Echelon<F> = Echelon::new();
    let mut kernel = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).clone();
        v.push((n + j, F::one()));
        let reduced = ech.reduce(v);
        if reduced.first().is_none_or(|(i, _)| *i >= n) {
            kernel.push(
                reduced
                    .into_iter()
                    .map(|(i, c)| (i - n, c))
                    .collect::<SparseVec<F>>(),
            );
        } else {
            ech.insert(reduced);
        }
    }
    kernel
}

/// Solves the dense square system `a · x = b` by Gauss-Jordan elimination.
/// Returns `None` when `a` is singular.
pub fn solve_dense<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone().inv();
        for x in a[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        b[col] = b[col].clone() * inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] -= sub;
            }
            let sub = factor * b[col].clone();
            b[r] -= sub;
        }
    }
    Some(b)
}

/// Betti numbers of a chain complex, keyed by the complex's own grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub grading: GradingKind,
    pub dims: BTreeMap<i64, usize>,
}

impl BettiTable {
    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Vec<i64> {
        self.dims
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(g, _)| *g)
            .collect()
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, d) in &self.dims {
            if *d == 0 {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "b_{g} = {d}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `dim H_g = dim C_g - rank(d_g) - rank(d into C_g)` in the complex's own
/// grading and direction.
pub fn betti<F: Field>(c: &ChainComplex<F>) -> BettiTable {
    let mut dims = BTreeMap::new();
    for g in c.degrees() {
        let rank_out = c.differential(g).map_or(0, SparseMatrix::rank);
        let rank_in = c
            .differential(g - c.direction())
            .map_or(0, SparseMatrix::rank);
        dims.insert(g, c.dim(g) - rank_out - rank_in);
    }
    BettiTable {
        grading: c.grading(),
        dims,
    }
}

/// Alternating sum of chain group dimensions over the complex's grading.
pub fn euler_characteristic<F: Field>(c: &ChainComplex<F>) -> i64 {
    c.degrees()
        .into_iter()
        .map(|g| {
            let d = c.dim(g) as i64;
            if g.rem_euclid(2) == 0 {
                d
            } else {
                -d
            }
        })
        .sum()
}

/// Graded Euler characteristic of an edge-adding complex as a polynomial in
/// `q`: the alternating sum, over the homological grading, of the graded
/// dimensions of the actual chain groups. Equals
/// `Σ_S (-1)^{|S|} (qdim A)^{l(S)}`, i.e. the chromatic polynomial at the
/// graded dimension of the algebra.
pub fn graded_euler<F: Field>(c: &CbsComplex<F>) -> IntPolynomial {
    let a = c.algebra();
    let mut acc = IntPolynomial::zero();
    for deg in c.complex().degrees() {
        let sign = if deg.rem_euclid(2) == 0 { 1 } else { -1 };
        for label in c.complex().basis_at(deg) {
            acc = acc.add(&IntPolynomial::monomial(
                sign,
                a.tuple_degree(&label.factors),
            ));
        }
    }
    acc
}

/// Per-degree Betti comparison of two complexes with the same grading.
#[derive(Debug, Clone)]
pub struct QuasiIsoReport {
    /// `(degree, left Betti, right Betti)` over the union of supports.
    pub rows: Vec<(i64, usize, usize)>,
    pub matches: bool,
}

impl fmt::Display for QuasiIsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, a, b) in &self.rows {
            let mark = if a == b { "ok" } else { "MISMATCH" };
            writeln!(f, "degree {g}: {a} vs {b} [{mark}]")?;
        }
        write!(
            f,
            "result: {}",
            if self.matches {
                "quasi-equivalent"
            } else {
                "betti tables differ"
            }
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HomologyError {
    #[error("complexes carry different gradings ({0:?} vs {1:?})")]
    GradingMismatch(GradingKind, GradingKind),
}

/// Compares Betti tables of two complexes degree by degree.
pub fn quasi_iso_check<F: Field>(
    a: &ChainComplex<F>,
    b: &ChainComplex<F>,
) -> Result<QuasiIsoReport, HomologyError> {
    if a.grading() != b.grading() {
        return Err(HomologyError::GradingMismatch(a.grading(), b.grading()));
    }
    let ba = betti(a);
    let bb = betti(b);
    let mut degrees: Vec<i64> = ba.dims.keys().chain(bb.dims.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    let rows: Vec<(i64, usize, usize)> = degrees
        .into_iter()
        .map(|g| (g, ba.dim(g), bb.dim(g)))
        .collect();
    let matches = rows.iter().all(|(_, x, y)| x == y);
    Ok(QuasiIsoReport { rows, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::One;

    fn q(n: i64) -> Rational {
        Rational::from_int(&(), n)
    }

    #[test]
    fn rank_examples() {
        let z: SparseMatrix<Rational> = SparseMatrix::zero(4, 3);
        assert_eq!(z.rank(), 0);

        let id: SparseMatrix<Rational> = SparseMatrix::identity_like(5, &Rational::one());
        assert_eq!(id.rank(), 5);

        // the 1×3 boundary of the connected-subgraph complex of K3 in top degree
        let mut m: SparseMatrix<Rational> = SparseMatrix::zero(3, 1);
        m.add_entry(0, 0, q(1));
        m.add_entry(1, 0, q(-1));
        m.add_entry(2, 0, q(1));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_product_bound() {
        let mut a: SparseMatrix<Rational> = SparseMatrix::zero(3, 3);
        a.add_entry(0, 0, q(1));
        a.add_entry(1, 1, q(2));
        let mut b: SparseMatrix<Rational> = SparseMatrix::zero(3, 3);
        b.add_entry(1, 0, q(3));
        b.add_entry(2, 2, q(5));
        let ab = a.compose(&b);
        assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn echelon_membership() {
        let mut e: Echelon<Rational> = Echelon::new();
        assert!(e.insert(vec![(0, q(1)), (1, q(1))]));
        assert!(e.insert(vec![(1, q(1)), (2, q(1))]));
        assert!(!e.insert(vec![(0, q(2)), (1, q(4)), (2, q(2))]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(vec![(0, q(1)), (2, q(-1))]));
        assert!(!e.contains(vec![(0, q(1))]));
    }

    #[test]
    fn echelon_reduction_is_canonical() {
        let mut e: Echelon<Rational> = Echelon::new();
        e.insert(vec![(0, q(2)), (2, q(2))]);
        e.insert(vec![(1, q(1)), (2, q(3))]);
        let r = e.reduce(vec![(0, q(1)), (1, q(1)), (2, q(1))]);
        assert_eq!(r, vec![(2, q(-3))]);
    }

    #[test]
    fn dense_solve_roundtrip() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let b = vec![q(5), q(10)];
        let x = solve_dense(a, b).unwrap();
        assert_eq!(x, vec![q(1), q(3)]);

        let singular = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(solve_dense(singular, vec![q(0), q(0)]).is_none());
    }

    #[test]
    fn kernel_basis_spans_the_kernel() {
        let mut m: SparseMatrix<Rational> = SparseMatrix::zero(2, 4);
        m.add_entry(0, 0, q(1));
        m.add_entry(0, 1, q(2));
        m.add_entry(1, 2, q(1));
        // columns 0,1 dependent; column 3 zero
        let kernel = kernel_basis(&m);
        assert_eq!(kernel.len(), m.ncols() - m.rank());
        for v in &kernel {
            assert!(m.apply(v).is_empty(), "kernel vector not annihilated");
        }
    }

    #[test]
    fn euler_is_alternating_sum_of_betti() {
        use crate::complexes::{build_cbs, build_cbs_dual, build_conn};
        use crate::frobenius::FrobeniusAlgebra;
        use crate::graph::Graph;
        let g = Graph::complete(3);
        let a: FrobeniusAlgebra<Rational> = FrobeniusAlgebra::torus(&());
        let complexes = vec![
            build_cbs(&g, &a).unwrap().complex().clone(),
            build_cbs_dual(&g, &a).unwrap().complex().clone(),
            build_conn::<Rational>(&g, &()).unwrap(),
        ];
        for c in complexes {
            let b = betti(&c);
            let alternating: i64 = b
                .dims
                .iter()
                .map(|(&deg, &d)| {
                    if deg.rem_euclid(2) == 0 {
                        d as i64
                    } else {
                        -(d as i64)
                    }
                })
                .sum();
            assert_eq!(euler_characteristic(&c), alternating);
        }
    }

    #[test]
    fn fp_rank_matches_rational_on_small_matrix() {
        use crate::field::Fp;
        let mut mq: SparseMatrix<Rational> = SparseMatrix::zero(3, 3);
        let mut mp: SparseMatrix<Fp> = SparseMatrix::zero(3, 3);
        let data = [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4), (2, 2, 7)];
        for (r, c, v) in data {
            mq.add_entry(r, c, q(v));
            mp.add_entry(r, c, Fp::new(v, 101).unwrap());
        }
        assert_eq!(mq.rank(), 2);
        assert_eq!(mp.rank(), 2);
    }
}
