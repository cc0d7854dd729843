//! The quotient model: the dual complex divided by the ideal of cycle
//! relations. Representatives are the forest-supported labels surviving row
//! reduction, and the quotient projection is the chain map onto the model.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::frobenius::FrobeniusAlgebra;
use crate::graph::Graph;
use crate::homology::{SparseMatrix, SparseVec};

use super::{
    build_cbs_dual, chain_map_commutes, ideal_subspace_of, BuildError, ChainComplex, DualComplex,
    GeneratorMode, GradingKind,
};

/// Quotient of the dual complex by the all-cycles ideal, with the projection
/// matrices from ambient coordinates onto the chosen representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct RnComplex<F: Field> {
    graph: Graph,
    algebra: FrobeniusAlgebra<F>,
    complex: ChainComplex<F>,
    projection: BTreeMap<i64, SparseMatrix<F>>,
    ideal_dims: BTreeMap<i64, usize>,
}

impl<F: Field> RnComplex<F> {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra<F> {
        &self.algebra
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }

    /// Dimension of the ideal at a total degree.
    pub fn ideal_dim(&self, degree: i64) -> usize {
        self.ideal_dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn ideal_dims(&self) -> &BTreeMap<i64, usize> {
        &self.ideal_dims
    }

    /// Projection of an ambient coordinate vector at `degree` onto the
    /// quotient basis.
    pub fn project(&self, degree: i64, v: &SparseVec<F>) -> SparseVec<F> {
        match self.projection.get(&degree) {
            Some(p) => p.apply(v),
            None => Vec::new(),
        }
    }

    /// The quotient chain map, degree by degree.
    pub fn projection(&self) -> &BTreeMap<i64, SparseMatrix<F>> {
        &self.projection
    }
}

/// Builds the quotient model for a simple graph over an algebra with even
/// pairing degree.
pub fn build_rn<F: Field>(g: &Graph, a: &FrobeniusAlgebra<F>) -> Result<RnComplex<F>, BuildError> {
    if !g.is_simple() {
        return Err(BuildError::Multigraph);
    }
    if a.pairing_degree() % 2 != 0 {
        return Err(BuildError::OddPairingDegree(a.pairing_degree()));
    }
    let dual = build_cbs_dual(g, a)?;
    build_rn_from(&dual)
}

/// Builds the quotient model from an existing dual complex.
pub fn build_rn_from<F: Field>(dual: &DualComplex<F>) -> Result<RnComplex<F>, BuildError> {
    let a = dual.algebra();
    if a.pairing_degree() % 2 != 0 {
        return Err(BuildError::OddPairingDegree(a.pairing_degree()));
    }
    let g = dual.graph();
    let ideal = ideal_subspace_of(dual, GeneratorMode::AllCycles)?;

    // representatives: non-pivot coordinates, in ambient order
    let mut reps: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for deg in dual.complex().degrees() {
        let dim = dual.complex().dim(deg);
        let span = &ideal.spans[&deg];
        let mut pivot = vec![false; dim];
        for r in span.pivot_ranks() {
            pivot[span.rank_to_ambient(r)] = true;
        }
        let mut chosen: Vec<usize> = (0..dim).filter(|&i| !pivot[i]).collect();
        chosen.sort_unstable();
        reps.insert(deg, chosen);
    }

    // quotient coordinates of a reduced vector: residual entries land on
    // representative positions only
    let quotient_coords = |deg: i64, v: &SparseVec<F>| -> SparseVec<F> {
        if v.is_empty() {
            return Vec::new();
        }
        let span = &ideal.spans[&deg];
        let chosen = &reps[&deg];
        let residual = span.reduce_rank(v);
        let mut out: SparseVec<F> = residual
            .into_iter()
            .map(|(rank, c)| {
                let ambient = span.rank_to_ambient(rank);
                let q = chosen
                    .binary_search(&ambient)
                    .expect("residual supported on representatives");
                (q, c)
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    };

    let mut basis = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut projection = BTreeMap::new();
    for deg in dual.complex().degrees() {
        let chosen = &reps[&deg];
        let labels: Vec<_> = chosen
            .iter()
            .map(|&i| dual.complex().basis_at(deg)[i].clone())
            .collect();
        debug_assert!(labels.iter().all(|l| g.is_forest(l.edges)));
        let next_count = reps.get(&(deg + 1)).map_or(0, Vec::len);
        let diff_ambient = dual.complex().differential(deg).expect("matrix per degree");
        let mut dq = SparseMatrix::zero(next_count, chosen.len());
        for (col, &ambient_j) in chosen.iter().enumerate() {
            let image = diff_ambient.column(ambient_j);
            dq.set_column(col, quotient_coords(deg + 1, image));
        }
        // well-definedness: the ideal maps into the ideal
        for row in ideal.span_vectors(deg) {
            let image = diff_ambient.apply(&row);
            if !quotient_coords(deg + 1, &image).is_empty() {
                return Err(BuildError::IdealNotClosed(deg));
            }
        }
        let mut proj = SparseMatrix::zero(chosen.len(), dual.complex().dim(deg));
        for j in 0..dual.complex().dim(deg) {
            let e_j: SparseVec<F> = vec![(j, a.one().clone())];
            proj.set_column(j, quotient_coords(deg, &e_j));
        }
        basis.insert(deg, labels);
        diffs.insert(deg, dq);
        projection.insert(deg, proj);
    }

    let complex = ChainComplex::from_parts(GradingKind::TotalDegree, 1, basis, diffs)?;
    Ok(RnComplex {
        graph: g.clone(),
        algebra: a.clone(),
        complex,
        projection,
        ideal_dims: ideal.dims(),
    })
}

/// The quotient chain map from the dual complex onto the model, verified to
/// commute with the differentials.
pub fn map_f<F: Field>(
    dual: &DualComplex<F>,
    rn: &RnComplex<F>,
) -> Result<BTreeMap<i64, SparseMatrix<F>>, BuildError> {
    if dual.graph() != rn.graph() || dual.algebra() != rn.algebra() {
        return Err(BuildError::MismatchedInputs);
    }
    let map = rn.projection().clone();
    if !chain_map_commutes(dual.complex(), rn.complex(), &map, 0) {
        return Err(BuildError::NotAComplex(0));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSubset;
    use crate::Rational;

    fn s2() -> FrobeniusAlgebra<Rational> {
        FrobeniusAlgebra::sphere(2, &())
    }

    #[test]
    fn tree_graph_quotient_is_identity() {
        let g = Graph::path(3);
        let a = s2();
        let dual = build_cbs_dual(&g, &a).unwrap();
        let rn = build_rn(&g, &a).unwrap();
        assert_eq!(dual.complex(), rn.complex());
    }

    #[test]
    fn k3_cycle_monomials_vanish() {
        let g = Graph::complete(3);
        let a = s2();
        let dual = build_cbs_dual(&g, &a).unwrap();
        let rn = build_rn(&g, &a).unwrap();
        for factor in 0..a.dim() {
            let (deg, pos) = dual.position(g.full_subset(), &[factor]).unwrap();
            let image = rn.project(deg, &vec![(pos, a.scalar(1))]);
            assert!(image.is_empty(), "cycle monomial survives the quotient");
        }
        // while forest monomials survive
        let (deg, pos) = dual
            .position(EdgeSubset::from_indices([0, 1]), &[0])
            .unwrap();
        assert!(!rn.project(deg, &vec![(pos, a.scalar(1))]).is_empty());
    }

    #[test]
    fn k3_edge_count_two_stratum_dimension() {
        // three spanning trees ⊗ A modulo one relation per factor: 3·2 - 2
        let g = Graph::complete(3);
        let rn = build_rn(&g, &s2()).unwrap();
        let count: usize = rn
            .complex()
            .degrees()
            .iter()
            .flat_map(|&deg| rn.complex().basis_at(deg))
            .filter(|l| l.edges.len() == 2)
            .count();
        assert_eq!(count, 4);
    }

    #[test]
    fn k3_matches_direct_small_case_construction() {
        // by hand: the quotient of the triangle is spanned by forests with
        // one algebra factor per component, modulo one relation per factor
        // among the three spanning trees, and the full cycle dies:
        // dims by edge count (8, 12, 6-2, 1-1) = (8, 12, 4, 0)
        let g = Graph::complete(3);
        let a = s2();
        let rn = build_rn(&g, &a).unwrap();
        let mut by_edges = vec![0usize; 4];
        for deg in rn.complex().degrees() {
            for label in rn.complex().basis_at(deg) {
                by_edges[label.edges.len()] += 1;
            }
        }
        assert_eq!(by_edges, vec![8, 12, 4, 0]);
        assert_eq!(rn.complex().total_dim(), 24);
    }

    #[test]
    fn representatives_are_forests() {
        let g = Graph::complete(4);
        let rn = build_rn(&g, &s2()).unwrap();
        for deg in rn.complex().degrees() {
            for label in rn.complex().basis_at(deg) {
                assert!(g.is_forest(label.edges));
            }
        }
    }

    #[test]
    fn empty_subset_stratum_unreduced() {
        // no relation touches the empty monomial: the S = ∅ labels all survive
        let g = Graph::complete(3);
        let a = s2();
        let rn = build_rn(&g, &a).unwrap();
        let empties: usize = rn
            .complex()
            .degrees()
            .iter()
            .flat_map(|&deg| rn.complex().basis_at(deg))
            .filter(|l| l.edges.is_empty())
            .count();
        assert_eq!(empties, a.dim().pow(g.n_vertices() as u32));
    }

    #[test]
    fn odd_pairing_degree_rejected() {
        let g = Graph::complete(3);
        let s3: FrobeniusAlgebra<Rational> = FrobeniusAlgebra::sphere(3, &());
        assert!(matches!(
            build_rn(&g, &s3),
            Err(BuildError::OddPairingDegree(3))
        ));
    }

    #[test]
    fn projection_is_a_chain_map() {
        for g in [Graph::complete(3), Graph::complete(4)] {
            for a in [s2(), FrobeniusAlgebra::torus(&())] {
                let dual = build_cbs_dual(&g, &a).unwrap();
                let rn = build_rn_from(&dual).unwrap();
                let map = map_f(&dual, &rn).unwrap();
                assert!(chain_map_commutes(dual.complex(), rn.complex(), &map, 0));
            }
        }
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let a = s2();
        let dual = build_cbs_dual(&Graph::complete(3), &a).unwrap();
        let rn = build_rn(&Graph::path(3), &a).unwrap();
        assert!(matches!(
            map_f(&dual, &rn),
            Err(BuildError::MismatchedInputs)
        ));
    }
}
