//! Builders for the four chain complexes: the edge-adding complex over edge
//! subsets, its edge-removing dual, the quotient of the dual by the ideal of
//! cycle relations, and the connected-subgraph complex; plus the quotient
//! chain map, the deletion-contraction sequence, and partition filtrations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::field::Field;
use crate::frobenius::{AlgebraError, FrobeniusAlgebra};
use crate::graph::{EdgeSubset, Graph, GraphError};
use crate::homology::SparseMatrix;

mod cbs;
mod conn;
mod dual;
mod filtration;
mod ideal;
mod rn;

pub use cbs::{build_cbs, CbsComplex};
pub use conn::{build_conn, delcon_sequence, DelconSequence};
pub use dual::{build_cbs_dual, DualComplex};
pub use filtration::{filtration_quotient_dual, filtration_quotient_rn};
pub use ideal::{ideal_subspace, ideal_subspace_of, GeneratorMode, IdealSubspace};
pub use rn::{build_rn, build_rn_from, map_f, RnComplex};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("builder requires a simple graph (no loops or parallel edges)")]
    Multigraph,
    #[error("edge-removing complexes require an even pairing degree, got {0}")]
    OddPairingDegree(usize),
    #[error("connected-subgraph complex requires a connected graph")]
    Disconnected,
    #[error("edge {edge} must be last in the canonical order ({count} edges)")]
    EdgeNotLast { edge: usize, count: usize },
    #[error("complexes were built from different graph/algebra inputs")]
    MismatchedInputs,
    #[error("stratum block count {k} out of range for {n} vertices")]
    BadStratum { k: usize, n: usize },
    #[error("differential does not square to zero at degree {0}")]
    NotAComplex(i64),
    #[error("matrix shape mismatch at degree {0}")]
    Shape(i64),
    #[error("ideal is not closed under the differential at degree {0}")]
    IdealNotClosed(i64),
    #[error("cycle-supported basis vector missing from the generated ideal span: {0}")]
    IdealSelfCheck(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// How a complex is graded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradingKind {
    /// Homological grading by `|S|`; the algebra degree is label metadata.
    EdgeCount,
    /// Total degree combining edge ranks and algebra degrees.
    TotalDegree,
}

/// Basis label: an edge subset together with one algebra factor per connected
/// component of `[Γ:S]` (empty for the connected-subgraph complex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub edges: EdgeSubset,
    pub factors: Vec<usize>,
}

impl BasisLabel {
    pub fn new(edges: EdgeSubset, factors: Vec<usize>) -> Self {
        BasisLabel { edges, factors }
    }

    /// `S={0.1 1.2} ⊗ (x,1)` rendered through the graph and algebra.
    pub fn format<F: Field>(&self, g: &Graph, a: Option<&FrobeniusAlgebra<F>>) -> String {
        let edges = g.subset_name(self.edges);
        match a {
            Some(a) if !self.factors.is_empty() => {
                let names: Vec<&str> = self.factors.iter().map(|&i| a.label(i)).collect();
                format!("{edges} ({})", names.join(","))
            }
            _ => edges,
        }
    }
}

/// Chain complex with labeled bases and one boundary matrix per degree.
///
/// The differential at degree `g` maps `C_g` to `C_{g+direction}`; matrices
/// are column-major over the source basis. Consecutive matrices compose to
/// zero (checked at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex<F: Field> {
    grading: GradingKind,
    direction: i64,
    basis: BTreeMap<i64, Vec<BasisLabel>>,
    diffs: BTreeMap<i64, SparseMatrix<F>>,
}

impl<F: Field> ChainComplex<F> {
    pub fn from_parts(
        grading: GradingKind,
        direction: i64,
        basis: BTreeMap<i64, Vec<BasisLabel>>,
        diffs: BTreeMap<i64, SparseMatrix<F>>,
    ) -> Result<Self, BuildError> {
        assert!(direction == 1 || direction == -1);
        let dim = |g: i64| basis.get(&g).map_or(0, Vec::len);
        for (&g, m) in &diffs {
            if m.ncols() != dim(g) || m.nrows() != dim(g + direction) {
                return Err(BuildError::Shape(g));
            }
        }
        for &g in basis.keys() {
            if !diffs.contains_key(&g) {
                return Err(BuildError::Shape(g));
            }
        }
        let complex = ChainComplex {
            grading,
            direction,
            basis,
            diffs,
        };
        match complex.first_nonzero_square() {
            None => Ok(complex),
            Some(g) => Err(BuildError::NotAComplex(g)),
        }
    }

    fn first_nonzero_square(&self) -> Option<i64> {
        for (&g, m) in &self.diffs {
            if let Some(next) = self.diffs.get(&(g + self.direction)) {
                if !next.compose(m).is_zero() {
                    return Some(g);
                }
            }
        }
        None
    }

    /// Recomputes the defining invariant `d ∘ d = 0`.
    pub fn d_squared_is_zero(&self) -> bool {
        self.first_nonzero_square().is_none()
    }

    pub fn grading(&self) -> GradingKind {
        self.grading
    }

    pub fn direction(&self) -> i64 {
        self.direction
    }

    /// Support degrees, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.basis.keys().copied().collect()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }

    pub fn basis_at(&self, degree: i64) -> &[BasisLabel] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self, degree: i64) -> Option<&SparseMatrix<F>> {
        self.diffs.get(&degree)
    }

    /// The differential at `degree`, materializing the zero matrix of the
    /// right shape when absent.
    pub fn differential_or_zero(&self, degree: i64) -> SparseMatrix<F> {
        match self.diffs.get(&degree) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(self.dim(degree + self.direction), self.dim(degree)),
        }
    }
}

impl<F: Field> fmt::Display for ChainComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self
            .basis
            .iter()
            .map(|(g, b)| format!("{}:{}", g, b.len()))
            .collect();
        write!(f, "complex[{}]", dims.join(" "))
    }
}

/// Checks `map ∘ d_src = d_dst ∘ map` degree by degree, where `map` sends
/// source degree `g` to destination degree `g + shift`.
pub fn chain_map_commutes<F: Field>(
    src: &ChainComplex<F>,
    dst: &ChainComplex<F>,
    map: &BTreeMap<i64, SparseMatrix<F>>,
    shift: i64,
) -> bool {
    for &g in src.degrees().iter() {
        let map_g = match map.get(&g) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(dst.dim(g + shift), src.dim(g)),
        };
        let map_next = match map.get(&(g + src.direction())) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(
                dst.dim(g + src.direction() + shift),
                src.dim(g + src.direction()),
            ),
        };
        let lhs = map_next.compose(&src.differential_or_zero(g));
        let rhs = dst.differential_or_zero(g + shift).compose(&map_g);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Shared enumeration for the edge-subset complexes: every `(S, factor
/// tuple)` label, grouped by a caller-chosen degree, with a reverse index.
/// Order within a degree: edge-subset bitmask ascending, then lexicographic
/// factor tuples.
pub(crate) struct BsLabels {
    pub by_degree: BTreeMap<i64, Vec<BasisLabel>>,
    pub index: HashMap<(u64, Vec<usize>), (i64, usize)>,
}

pub(crate) fn enumerate_bs_labels<F: Field>(
    g: &Graph,
    a: &FrobeniusAlgebra<F>,
    degree_of: impl Fn(EdgeSubset, &[usize]) -> i64,
) -> BsLabels {
    let mut by_degree: BTreeMap<i64, Vec<BasisLabel>> = BTreeMap::new();
    let mut index = HashMap::new();
    let dim = a.dim();
    for s in EdgeSubset::all_subsets(g.edge_count()) {
        let slots = g.component_count(s);
        let mut tuple = vec![0usize; slots];
        loop {
            let degree = degree_of(s, &tuple);
            let bucket = by_degree.entry(degree).or_default();
            index.insert((s.bits(), tuple.clone()), (degree, bucket.len()));
            bucket.push(BasisLabel::new(s, tuple.clone()));
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
    BsLabels { by_degree, index }
}

/// Total degree of a dual-complex label: with `m` the pairing degree,
/// `(m-1)·(n-l(S)) - (|S|-n+l(S)) + Σ deg a_i`, i.e. forest rank counts
/// splitting removals and cycle rank counts non-splitting ones.
pub(crate) fn dual_total_degree<F: Field>(
    g: &Graph,
    a: &FrobeniusAlgebra<F>,
    s: EdgeSubset,
    factors: &[usize],
) -> i64 {
    let l = g.component_count(s) as i64;
    let n = g.n_vertices() as i64;
    let forest_rank = n - l;
    let cycle_rank = s.len() as i64 - forest_rank;
    let m = a.pairing_degree() as i64;
    (m - 1) * forest_rank - cycle_rank + a.tuple_degree(factors) as i64
}
