//! The edge-adding complex: chain groups `e_S ⊗ A^{⊗l(S)}` over edge subsets,
//! graded by `|S|`, with the differential that adjoins one edge at a time and
//! multiplies the merged components' factors.

use std::collections::BTreeMap;

use crate::exterior::{koszul_move_sign, removal_sign, ExteriorMonomial};
use crate::field::{signed, Field};
use crate::frobenius::FrobeniusAlgebra;
use crate::graph::Graph;
use crate::homology::SparseMatrix;

use super::{enumerate_bs_labels, BasisLabel, BuildError, ChainComplex, GradingKind};

/// Edge-adding complex together with the inputs it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct CbsComplex<F: Field> {
    graph: Graph,
    algebra: FrobeniusAlgebra<F>,
    complex: ChainComplex<F>,
}

impl<F: Field> CbsComplex<F> {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra<F> {
        &self.algebra
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }

    /// `(Σ deg a_i, |S|)` of a label: the algebra degree is metadata on top
    /// of the homological edge-count grading.
    pub fn bidegree(&self, label: &BasisLabel) -> (usize, usize) {
        (self.algebra.tuple_degree(&label.factors), label.edges.len())
    }
}

/// Builds the edge-adding complex of a simple graph over a validated algebra.
pub fn build_cbs<F: Field>(
    g: &Graph,
    a: &FrobeniusAlgebra<F>,
) -> Result<CbsComplex<F>, BuildError> {
    if !g.is_simple() {
        return Err(BuildError::Multigraph);
    }
    let labels = enumerate_bs_labels(g, a, |s, _| s.len() as i64);
    let mut diffs: BTreeMap<i64, SparseMatrix<F>> = BTreeMap::new();
    for (&deg, bucket) in &labels.by_degree {
        diffs.insert(
            deg,
            SparseMatrix::zero(
                labels.by_degree.get(&(deg + 1)).map_or(0, Vec::len),
                bucket.len(),
            ),
        );
    }
    for (&deg, bucket) in &labels.by_degree {
        for (col, label) in bucket.iter().enumerate() {
            let s = label.edges;
            let part = g.components(s);
            for alpha in 0..g.edge_count() {
                if s.contains(alpha) {
                    continue;
                }
                let t = s.with(alpha);
                let wedge_sign = removal_sign(ExteriorMonomial(t), alpha);
                let (vi, vj) = g.edge(alpha).expect("edge index in range");
                let (bi, bj) = (part.block_of(vi), part.block_of(vj));
                if bi == bj {
                    // the edge closes up inside one component
                    let (tdeg, row) = labels.index[&(t.bits(), label.factors.clone())];
                    debug_assert_eq!(tdeg, deg + 1);
                    diffs.get_mut(&deg).unwrap().add_entry(
                        row,
                        col,
                        signed(wedge_sign, a.one().clone()),
                    );
                } else {
                    // two components merge: multiply their factors after
                    // moving the later one next to the earlier one
                    let (bi, bj) = (bi.min(bj), bi.max(bj));
                    let degrees: Vec<usize> = label.factors.iter().map(|&f| a.degree(f)).collect();
                    let move_sign = koszul_move_sign(&degrees, bj, bi + 1);
                    for (prod, c) in a.product(label.factors[bi], label.factors[bj]) {
                        let mut factors = label.factors.clone();
                        factors[bi] = *prod;
                        factors.remove(bj);
                        let (tdeg, row) = labels.index[&(t.bits(), factors)];
                        debug_assert_eq!(tdeg, deg + 1);
                        diffs.get_mut(&deg).unwrap().add_entry(
                            row,
                            col,
                            signed(wedge_sign * move_sign, c.clone()),
                        );
                    }
                }
            }
        }
    }
    let complex = ChainComplex::from_parts(GradingKind::EdgeCount, 1, labels.by_degree, diffs)?;
    Ok(CbsComplex {
        graph: g.clone(),
        algebra: a.clone(),
        complex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::TensorElement;
    use crate::graph::EdgeSubset;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(&(), n)
    }

    fn s2() -> FrobeniusAlgebra<Rational> {
        FrobeniusAlgebra::sphere(2, &())
    }

    #[test]
    fn k3_chain_dimensions() {
        let c = build_cbs(&Graph::complete(3), &s2()).unwrap();
        let dims: Vec<usize> = c
            .complex()
            .degrees()
            .iter()
            .map(|&g| c.complex().dim(g))
            .collect();
        assert_eq!(dims, vec![8, 12, 6, 2]);
    }

    #[test]
    fn multigraph_rejected() {
        let g = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert!(matches!(build_cbs(&g, &s2()), Err(BuildError::Multigraph)));
    }

    #[test]
    fn k2_differential_kills_x_tensor_x() {
        let a = s2();
        let c = build_cbs(&Graph::complete(2), &a).unwrap();
        let d0 = c.complex().differential(0).unwrap();
        // label (∅, (x,x)) sits at tuple position 3 of degree 0
        let pos = c
            .complex()
            .basis_at(0)
            .iter()
            .position(|l| l.factors == vec![1, 1])
            .unwrap();
        assert!(d0.column(pos).is_empty());
        // while (∅, (1,x)) maps to e_{01} ⊗ x
        let pos = c
            .complex()
            .basis_at(0)
            .iter()
            .position(|l| l.factors == vec![0, 1])
            .unwrap();
        let col = d0.column(pos);
        assert_eq!(col.len(), 1);
        let target = &c.complex().basis_at(1)[col[0].0];
        assert_eq!(target.factors, vec![1]);
        assert_eq!(col[0].1, q(1));
    }

    #[test]
    fn k3_differential_from_empty_subset() {
        // ∂(e_∅ ⊗ 1⊗x⊗1) = e01 ⊗ (x⊗1) + e02 ⊗ (1⊗x) + e12 ⊗ (1⊗x)
        let a = s2();
        let g = Graph::complete(3);
        let c = build_cbs(&g, &a).unwrap();
        let col_idx = c
            .complex()
            .basis_at(0)
            .iter()
            .position(|l| l.factors == vec![0, 1, 0])
            .unwrap();
        let col = c.complex().differential(0).unwrap().column(col_idx);
        assert_eq!(col.len(), 3);
        let expect = [
            (EdgeSubset::from_indices([0]), vec![1, 0]),
            (EdgeSubset::from_indices([1]), vec![0, 1]),
            (EdgeSubset::from_indices([2]), vec![0, 1]),
        ];
        for ((row, coeff), (edges, factors)) in col.iter().zip(expect) {
            let label = &c.complex().basis_at(1)[*row];
            assert_eq!(label.edges, edges);
            assert_eq!(label.factors, factors);
            assert_eq!(*coeff, q(1));
        }
    }

    #[test]
    fn torus_koszul_sign_in_differential() {
        // ∂(e_∅ ⊗ 1⊗a⊗b) picks up a sign when b crosses a
        let t2: FrobeniusAlgebra<Rational> = FrobeniusAlgebra::torus(&());
        let g = Graph::complete(3);
        let c = build_cbs(&g, &t2).unwrap();
        let (ia, ib, iab) = (1usize, 2usize, 3usize);
        let col_idx = c
            .complex()
            .basis_at(0)
            .iter()
            .position(|l| l.factors == vec![0, ia, ib])
            .unwrap();
        let col = c.complex().differential(0).unwrap().column(col_idx);
        // e01 ⊗ (a ⊗ b): +1 ; e02: 1·b placed, a crosses b: -(b ⊗ a) ; e12: +(1 ⊗ ab)
        let mut seen = 0;
        for (row, coeff) in col {
            let label = &c.complex().basis_at(1)[*row];
            if label.edges == EdgeSubset::from_indices([0]) {
                assert_eq!((label.factors.clone(), coeff.clone()), (vec![ia, ib], q(1)));
                seen += 1;
            } else if label.edges == EdgeSubset::from_indices([1]) {
                assert_eq!(
                    (label.factors.clone(), coeff.clone()),
                    (vec![ib, ia], q(-1))
                );
                seen += 1;
            } else {
                assert_eq!((label.factors.clone(), coeff.clone()), (vec![0, iab], q(1)));
                seen += 1;
            }
        }
        assert_eq!(seen, 3);
    }

    #[test]
    fn edgeless_graph_is_concentrated() {
        let a = s2();
        let c = build_cbs(&Graph::edgeless(3), &a).unwrap();
        assert_eq!(c.complex().degrees(), vec![0]);
        assert_eq!(c.complex().dim(0), 8);
        assert!(c.complex().differential(0).unwrap().is_zero());
    }

    #[test]
    fn d_squared_zero_small_graphs() {
        for g in [
            Graph::complete(2),
            Graph::path(3),
            Graph::complete(3),
            Graph::cycle(4),
            Graph::complete(4),
        ] {
            let algebras: [FrobeniusAlgebra<Rational>; 3] = [
                FrobeniusAlgebra::sphere(2, &()),
                FrobeniusAlgebra::torus(&()),
                FrobeniusAlgebra::complex_projective_plane(&()),
            ];
            for a in algebras {
                let c = build_cbs(&g, &a).unwrap();
                assert!(c.complex().d_squared_is_zero());
            }
        }
    }

    #[test]
    fn bidegree_metadata() {
        let a = s2();
        let c = build_cbs(&Graph::complete(3), &a).unwrap();
        let label = &c.complex().basis_at(1)[1];
        assert_eq!(c.bidegree(label), (2, 1));
        let _ = TensorElement::<Rational>::zero(1);
    }
}
