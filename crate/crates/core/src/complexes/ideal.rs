//! The ideal of cycle relations inside the dual complex: the span, per total
//! degree, of the exterior ideal generated by the boundaries of cycle
//! monomials, tensored with all algebra factors. Dividing the dual complex by
//! it yields the quotient model.

use std::collections::BTreeMap;

use crate::exterior::{removal_sign, wedge, ExteriorMonomial};
use crate::field::{signed, Field};
use crate::frobenius::FrobeniusAlgebra;
use crate::graph::{EdgeSubset, Graph};
use crate::homology::{Echelon, SparseVec};

use super::{build_cbs_dual, BuildError, DualComplex};

/// Which cycles generate the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    /// All simple cycles. Correct for every graph.
    AllCycles,
    /// Only 3-cycles. On complete graphs this generates the same ideal; on
    /// graphs with chordless longer cycles it is strictly smaller.
    TrianglesOnly,
}

/// Echelon span over a permuted coordinate order, so pivots prefer
/// cycle-supported basis positions and quotient representatives come out as
/// forest-supported labels.
#[derive(Debug, Clone)]
pub(crate) struct PrioritizedSpan<F: Field> {
    /// ambient index -> rank
    fwd: Vec<usize>,
    /// rank -> ambient index
    bwd: Vec<usize>,
    ech: Echelon<F>,
}

impl<F: Field> PrioritizedSpan<F> {
    fn new(priority: Vec<usize>) -> Self {
        let mut fwd = vec![0usize; priority.len()];
        for (rank, &ambient) in priority.iter().enumerate() {
            fwd[ambient] = rank;
        }
        PrioritizedSpan {
            fwd,
            bwd: priority,
            ech: Echelon::new(),
        }
    }

    fn to_rank(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out: SparseVec<F> = v.iter().map(|(i, c)| (self.fwd[*i], c.clone())).collect();
        out.sort_by_key(|(r, _)| *r);
        out
    }

    fn to_ambient(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out: SparseVec<F> = v.iter().map(|(r, c)| (self.bwd[*r], c.clone())).collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn insert(&mut self, v_ambient: SparseVec<F>) -> bool {
        let v = self.to_rank(&v_ambient);
        self.ech.insert(v)
    }

    pub fn contains(&self, v_ambient: SparseVec<F>) -> bool {
        self.ech.contains(self.to_rank(&v_ambient))
    }

    /// Residual of `v` after reduction, in rank coordinates.
    pub fn reduce_rank(&self, v_ambient: &SparseVec<F>) -> SparseVec<F> {
        self.ech.reduce(self.to_rank(v_ambient))
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn pivot_ranks(&self) -> Vec<usize> {
        self.ech.pivots()
    }

    pub fn rank_to_ambient(&self, rank: usize) -> usize {
        self.bwd[rank]
    }

    pub fn span_vectors_ambient(&self) -> Vec<SparseVec<F>> {
        self.ech.rows().map(|r| self.to_ambient(r)).collect()
    }
}

/// Per-degree span of the ideal inside the dual complex's coordinates.
/// Closed under the differential (checked at construction).
#[derive(Debug, Clone)]
pub struct IdealSubspace<F: Field> {
    mode: GeneratorMode,
    pub(crate) spans: BTreeMap<i64, PrioritizedSpan<F>>,
}

impl<F: Field> IdealSubspace<F> {
    pub fn mode(&self) -> GeneratorMode {
        self.mode
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.spans.get(&degree).map_or(0, PrioritizedSpan::rank)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.spans.iter().map(|(&g, s)| (g, s.rank())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spans.values().map(PrioritizedSpan::rank).sum()
    }

    /// Spanning vectors at a degree, in ambient coordinates.
    pub fn span_vectors(&self, degree: i64) -> Vec<SparseVec<F>> {
        self.spans
            .get(&degree)
            .map_or_else(Vec::new, PrioritizedSpan::span_vectors_ambient)
    }

    pub fn contains(&self, degree: i64, v: SparseVec<F>) -> bool {
        match self.spans.get(&degree) {
            Some(s) => s.contains(v),
            None => v.is_empty(),
        }
    }
}

/// Cycles generating the ideal under `mode`.
fn generating_cycles(g: &Graph, mode: GeneratorMode) -> Vec<Vec<usize>> {
    g.enumerate_cycles()
        .into_iter()
        .filter(|c| mode == GeneratorMode::AllCycles || c.len() == 3)
        .collect()
}

/// Builds the ideal subspace of the dual complex of `(g, a)`.
pub fn ideal_subspace<F: Field>(
    g: &Graph,
    a: &FrobeniusAlgebra<F>,
    mode: GeneratorMode,
) -> Result<IdealSubspace<F>, BuildError> {
    let dual = build_cbs_dual(g, a)?;
    ideal_subspace_of(&dual, mode)
}

/// Builds the ideal subspace inside an already-built dual complex.
pub fn ideal_subspace_of<F: Field>(
    dual: &DualComplex<F>,
    mode: GeneratorMode,
) -> Result<IdealSubspace<F>, BuildError> {
    let g = dual.graph();
    let a = dual.algebra();
    let mut spans: BTreeMap<i64, PrioritizedSpan<F>> = dual
        .complex()
        .degrees()
        .into_iter()
        .map(|deg| {
            let bucket = dual.complex().basis_at(deg);
            let mut priority: Vec<usize> = (0..bucket.len()).collect();
            priority.sort_by_key(|&i| (g.is_forest(bucket[i].edges), i));
            (deg, PrioritizedSpan::new(priority))
        })
        .collect();

    for cycle in generating_cycles(g, mode) {
        let c_set = g.cycle_edge_set(&cycle);
        for m in EdgeSubset::all_subsets(g.edge_count()) {
            if m.intersection(c_set).len() >= 2 {
                continue;
            }
            // the signed exterior pattern m ∧ δ(cycle monomial)
            let mut pattern: Vec<(EdgeSubset, i32)> = Vec::new();
            for alpha in c_set.iter() {
                let rest = ExteriorMonomial(c_set.without(alpha));
                if let Some(term) = wedge(ExteriorMonomial(m), rest) {
                    let sign = removal_sign(ExteriorMonomial(c_set), alpha) * term.sign;
                    pattern.push((term.monomial.edges(), sign));
                }
            }
            if pattern.is_empty() {
                continue;
            }
            // every surviving subset induces the same vertex partition
            let slots = g.component_count(m.union(c_set));
            debug_assert!(pattern.iter().all(|(s, _)| g.component_count(*s) == slots));
            let dim = a.dim();
            let mut tuple = vec![0usize; slots];
            loop {
                let mut degree: Option<i64> = None;
                let mut vector: SparseVec<F> = Vec::new();
                for (s, sign) in &pattern {
                    let (deg, pos) = dual.position(*s, &tuple).expect("pattern label enumerated");
                    match degree {
                        None => degree = Some(deg),
                        Some(d) => debug_assert_eq!(d, deg),
                    }
                    vector.push((pos, signed(*sign, a.one().clone())));
                }
                vector.sort_by_key(|(i, _)| *i);
                let degree = degree.expect("pattern nonempty");
                spans.get_mut(&degree).unwrap().insert(vector);
                // lexicographic successor
                let mut k = slots;
                loop {
                    if k == 0 {
                        tuple.clear();
                        break;
                    }
                    k -= 1;
                    tuple[k] += 1;
                    if tuple[k] < dim {
                        break;
                    }
                    tuple[k] = 0;
                }
                if tuple.is_empty() {
                    break;
                }
            }
        }
    }

    if mode == GeneratorMode::AllCycles {
        // every basis vector supported on a cycle-containing subset belongs
        // to the ideal; confirm membership as a self-check
        for deg in dual.complex().degrees() {
            let bucket = dual.complex().basis_at(deg);
            for (pos, label) in bucket.iter().enumerate() {
                if g.is_forest(label.edges) {
                    continue;
                }
                let v: SparseVec<F> = vec![(pos, a.one().clone())];
                if !spans[&deg].contains(v) {
                    return Err(BuildError::IdealSelfCheck(label.format(g, Some(a))));
                }
            }
        }
    }

    // closure under the differential
    for deg in dual.complex().degrees() {
        let span = &spans[&deg];
        if span.rank() == 0 {
            continue;
        }
        let diff = dual.complex().differential(deg).expect("matrix per degree");
        for row in span.span_vectors_ambient() {
            let image = diff.apply(&row);
            let closed = match spans.get(&(deg + 1)) {
                Some(next) => next.contains(image),
                None => image.is_empty(),
            };
            if !closed {
                return Err(BuildError::IdealNotClosed(deg));
            }
        }
    }

    Ok(IdealSubspace { mode, spans })
}
