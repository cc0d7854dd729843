//! The edge-removing dual complex: same labels as the edge-adding complex,
//! graded by total degree, with the differential that removes edges. A
//! removal that splits a component feeds the factor through the
//! comultiplication; one that stays inside a component keeps the factors.

use std::collections::{BTreeMap, HashMap};

use crate::exterior::{koszul_move_sign, removal_sign, ExteriorMonomial};
use crate::field::{signed, Field};
use crate::frobenius::FrobeniusAlgebra;
use crate::graph::{EdgeSubset, Graph};
use crate::homology::SparseMatrix;

use super::{dual_total_degree, enumerate_bs_labels, BuildError, ChainComplex, GradingKind};

/// Edge-removing dual complex, with its differential split into the
/// component-preserving and component-splitting parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DualComplex<F: Field> {
    graph: Graph,
    algebra: FrobeniusAlgebra<F>,
    complex: ChainComplex<F>,
    delta_int: BTreeMap<i64, SparseMatrix<F>>,
    delta_ext: BTreeMap<i64, SparseMatrix<F>>,
    pub(crate) index: HashMap<(u64, Vec<usize>), (i64, usize)>,
}

impl<F: Field> DualComplex<F> {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn algebra(&self) -> &FrobeniusAlgebra<F> {
        &self.algebra
    }

    pub fn complex(&self) -> &ChainComplex<F> {
        &self.complex
    }

    /// Total degree of a label in this complex.
    pub fn total_degree(&self, s: EdgeSubset, factors: &[usize]) -> i64 {
        dual_total_degree(&self.graph, &self.algebra, s, factors)
    }

    /// Position of a label within its degree.
    pub fn position(&self, s: EdgeSubset, factors: &[usize]) -> Option<(i64, usize)> {
        self.index.get(&(s.bits(), factors.to_vec())).copied()
    }

    /// The two summands of the differential: the part removing internal
    /// (component-preserving) edges and the part removing external
    /// (component-splitting) edges. They sum to the full differential.
    pub fn differential_split(
        &self,
    ) -> (
        &BTreeMap<i64, SparseMatrix<F>>,
        &BTreeMap<i64, SparseMatrix<F>>,
    ) {
        (&self.delta_int, &self.delta_ext)
    }
}

/// Builds the edge-removing dual complex of a simple graph. The pairing
/// degree must be even: for odd degree the diagonal class is antisymmetric
/// and the edge-removal formula does not square to zero.
pub fn build_cbs_dual<F: Field>(
    g: &Graph,
    a: &FrobeniusAlgebra<F>,
) -> Result<DualComplex<F>, BuildError> {
    if !g.is_simple() {
        return Err(BuildError::Multigraph);
    }
    if a.pairing_degree() % 2 != 0 {
        return Err(BuildError::OddPairingDegree(a.pairing_degree()));
    }
    let labels = enumerate_bs_labels(g, a, |s, factors| dual_total_degree(g, a, s, factors));
    let zero_matrices = || -> BTreeMap<i64, SparseMatrix<F>> {
        labels
            .by_degree
            .iter()
            .map(|(&deg, bucket)| {
                (
                    deg,
                    SparseMatrix::zero(
                        labels.by_degree.get(&(deg + 1)).map_or(0, Vec::len),
                        bucket.len(),
                    ),
                )
            })
            .collect()
    };
    let mut delta_int = zero_matrices();
    let mut delta_ext = zero_matrices();

    for (&deg, bucket) in &labels.by_degree {
        for (col, label) in bucket.iter().enumerate() {
            let s = label.edges;
            let part = g.components(s);
            for alpha in s.iter() {
                let rsign = removal_sign(ExteriorMonomial(s), alpha);
                let t = s.without(alpha);
                let new_part = g.components(t);
                if new_part.len() == part.len() {
                    // internal removal: the components are unchanged
                    let (tdeg, row) = labels.index[&(t.bits(), label.factors.clone())];
                    debug_assert_eq!(tdeg, deg + 1);
                    delta_int.get_mut(&deg).unwrap().add_entry(
                        row,
                        col,
                        signed(rsign, a.one().clone()),
                    );
                } else {
                    // external removal: one block splits in two; its factor
                    // goes through the comultiplication, the first leg stays
                    // at the block's position and the second moves to the
                    // new child's canonical position
                    let (vi, vj) = g.edge(alpha).expect("edge index in range");
                    let b = part.block_of(vi);
                    debug_assert_eq!(b, part.block_of(vj));
                    let (c1, c2) = (new_part.block_of(vi), new_part.block_of(vj));
                    let (p1, p2) = (c1.min(c2), c1.max(c2));
                    debug_assert_eq!(p1, b);
                    for (legs, c) in a.comultiply_basis(label.factors[b]).terms() {
                        let mut word = label.factors.clone();
                        word[b] = legs[0];
                        word.insert(b + 1, legs[1]);
                        let degrees: Vec<usize> = word.iter().map(|&f| a.degree(f)).collect();
                        let move_sign = koszul_move_sign(&degrees, b + 1, p2);
                        let leg = word.remove(b + 1);
                        word.insert(p2, leg);
                        let (tdeg, row) = labels.index[&(t.bits(), word)];
                        debug_assert_eq!(tdeg, deg + 1);
                        delta_ext.get_mut(&deg).unwrap().add_entry(
                            row,
                            col,
                            signed(rsign * move_sign, c.clone()),
                        );
                    }
                }
            }
        }
    }

    let mut diffs = BTreeMap::new();
    for (&deg, m_int) in &delta_int {
        diffs.insert(deg, m_int.add(&delta_ext[&deg]));
    }
    let complex =
        ChainComplex::from_parts(GradingKind::TotalDegree, 1, labels.by_degree.clone(), diffs)?;
    Ok(DualComplex {
        graph: g.clone(),
        algebra: a.clone(),
        complex,
        delta_int,
        delta_ext,
        index: labels.index,
    })
}

#[cfg(test)]
mod tests {
    use super::super::BasisLabel;
    use super::*;
    use crate::frobenius::TensorElement;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(&(), n)
    }

    fn s2() -> FrobeniusAlgebra<Rational> {
        FrobeniusAlgebra::sphere(2, &())
    }

    fn t2() -> FrobeniusAlgebra<Rational> {
        FrobeniusAlgebra::torus(&())
    }

    fn column_terms<'c, F: Field>(
        c: &'c DualComplex<F>,
        s: EdgeSubset,
        factors: &[usize],
    ) -> Vec<(&'c BasisLabel, F)> {
        let (deg, col) = c.position(s, factors).unwrap();
        c.complex()
            .differential(deg)
            .unwrap()
            .column(col)
            .iter()
            .map(|(row, v)| (&c.complex().basis_at(deg + 1)[*row], v.clone()))
            .collect()
    }

    #[test]
    fn k2_external_removal_inserts_diagonal() {
        // δ(G_{01} ⊗ 1) = G_∅ ⊗ (1⊗x + x⊗1)
        let g = Graph::complete(2);
        let c = build_cbs_dual(&g, &s2()).unwrap();
        let terms = column_terms(&c, g.full_subset(), &[0]);
        assert_eq!(terms.len(), 2);
        for (label, coeff) in terms {
            assert!(label.edges.is_empty());
            assert!(label.factors == vec![0, 1] || label.factors == vec![1, 0]);
            assert_eq!(coeff, q(1));
        }
    }

    #[test]
    fn odd_pairing_degree_rejected() {
        let s3: FrobeniusAlgebra<Rational> = FrobeniusAlgebra::sphere(3, &());
        assert!(matches!(
            build_cbs_dual(&Graph::complete(3), &s3),
            Err(BuildError::OddPairingDegree(3))
        ));
    }

    #[test]
    fn k3_top_removals_are_internal() {
        // δ(G_{all} ⊗ a) has exactly the three signed tree monomials, and
        // the component-splitting part vanishes on the full subset
        let g = Graph::complete(3);
        let c = build_cbs_dual(&g, &s2()).unwrap();
        for factor in 0..2usize {
            let (deg, col) = c.position(g.full_subset(), &[factor]).unwrap();
            let (_, delta_ext) = c.differential_split();
            assert!(delta_ext[&deg].column(col).is_empty());
            let terms = column_terms(&c, g.full_subset(), &[factor]);
            assert_eq!(terms.len(), 3);
            let mut expected: Vec<(EdgeSubset, i64)> = vec![
                (EdgeSubset::from_indices([1, 2]), 1),
                (EdgeSubset::from_indices([0, 2]), -1),
                (EdgeSubset::from_indices([0, 1]), 1),
            ];
            expected.sort_by_key(|(s, _)| *s);
            let mut got: Vec<(EdgeSubset, Rational)> =
                terms.into_iter().map(|(l, v)| (l.edges, v)).collect();
            got.sort_by_key(|(s, _)| *s);
            for ((s, v), (es, ev)) in got.into_iter().zip(expected) {
                assert_eq!(s, es);
                assert_eq!(v, q(ev));
            }
        }
    }

    #[test]
    fn split_block_comultiplication_with_koszul_move() {
        // vertices {0,1,2}, single edge (0,2): removing it sends the block
        // factor through μ* and the second leg crosses the factor at {1}
        let g = Graph::simple(3, vec![(0, 2)]).unwrap();
        let a = t2();
        let c = build_cbs_dual(&g, &a).unwrap();
        // label: S = {e0}, factors (1 at {0,2}, a at {1})
        let terms = column_terms(&c, EdgeSubset::from_indices([0]), &[0, 1]);
        // μ*(1) = Δ = 1⊗ab + ab⊗1 - a⊗b + b⊗a; second leg crosses `a` (odd)
        let mut expected: Vec<(Vec<usize>, i64)> = vec![
            (vec![0, 1, 3], 1),  // 1 ⊗ a ⊗ ab
            (vec![3, 1, 0], 1),  // ab ⊗ a ⊗ 1
            (vec![1, 1, 2], 1),  // -a⊗b with odd leg crossing a: +a ⊗ a ⊗ b
            (vec![2, 1, 1], -1), // +b⊗a crossing: -b ⊗ a ⊗ a
        ];
        expected.sort();
        let mut got: Vec<(Vec<usize>, Rational)> = terms
            .into_iter()
            .map(|(l, v)| {
                assert!(l.edges.is_empty());
                (l.factors.clone(), v)
            })
            .collect();
        got.sort();
        assert_eq!(got.len(), expected.len());
        for ((f, v), (ef, ev)) in got.into_iter().zip(expected) {
            assert_eq!(f, ef);
            assert_eq!(v, q(ev));
        }
    }

    #[test]
    fn d_squared_zero_exhaustive_small() {
        for g in [
            Graph::complete(2),
            Graph::path(3),
            Graph::complete(3),
            Graph::cycle(4),
            Graph::complete(4),
            Graph::cycle(5),
            Graph::path(6),
        ] {
            for name in FrobeniusAlgebra::<Rational>::BUILTIN_NAMES {
                let a: FrobeniusAlgebra<Rational> = FrobeniusAlgebra::builtin(name, &()).unwrap();
                let c = build_cbs_dual(&g, &a).unwrap();
                assert!(c.complex().d_squared_is_zero(), "δ² != 0 on {g} x {name}");
            }
        }
    }

    #[test]
    fn forest_labels_carry_the_model_grading() {
        // on forest-supported labels the total degree is
        // (m-1)|S| + Σ deg a_i, the grading of the quotient model
        for (g, a) in [(Graph::complete(4), s2()), (Graph::cycle(4), t2())] {
            let m = a.pairing_degree() as i64;
            let dual = build_cbs_dual(&g, &a).unwrap();
            for deg in dual.complex().degrees() {
                for label in dual.complex().basis_at(deg) {
                    if g.is_forest(label.edges) {
                        let expected = (m - 1) * label.edges.len() as i64
                            + a.tuple_degree(&label.factors) as i64;
                        assert_eq!(deg, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn split_sums_to_differential() {
        let g = Graph::complete(4);
        let c = build_cbs_dual(&g, &t2()).unwrap();
        let (delta_int, delta_ext) = c.differential_split();
        for g in c.complex().degrees() {
            let sum = delta_int[&g].add(&delta_ext[&g]);
            assert_eq!(&sum, c.complex().differential(g).unwrap());
        }
    }

    #[test]
    fn split_parts_anticommute() {
        // δ_int² = 0, δ_ext² = 0, and the cross terms cancel
        for g in [Graph::complete(3), Graph::cycle(4), Graph::complete(4)] {
            let c = build_cbs_dual(&g, &t2()).unwrap();
            let (delta_int, delta_ext) = c.differential_split();
            for deg in c.complex().degrees() {
                let next = deg + 1;
                let (i1, e1) = (&delta_int[&deg], &delta_ext[&deg]);
                if let (Some(i2), Some(e2)) = (delta_int.get(&next), delta_ext.get(&next)) {
                    assert!(i2.compose(i1).is_zero());
                    assert!(e2.compose(e1).is_zero());
                    let cross = i2.compose(e1).add(&e2.compose(i1));
                    assert!(cross.is_zero());
                }
            }
        }
    }

    #[test]
    fn edgeless_graph_is_the_full_tensor_power() {
        let a = s2();
        let c = build_cbs_dual(&Graph::edgeless(3), &a).unwrap();
        assert_eq!(c.complex().total_dim(), a.dim().pow(3));
        for deg in c.complex().degrees() {
            assert!(c.complex().differential(deg).unwrap().is_zero());
        }
    }

    #[test]
    fn tree_graph_has_no_internal_part() {
        let g = Graph::path(4);
        let c = build_cbs_dual(&g, &s2()).unwrap();
        let (delta_int, _) = c.differential_split();
        assert!(delta_int.values().all(SparseMatrix::is_zero));
    }

    #[test]
    fn dual_is_adjoint_to_edge_adding_differential() {
        // <δ(G_S ⊗ u), e_T ⊗ v> = <G_S ⊗ u, ∂(e_T ⊗ v)> with the pairing
        // that matches monomials and pairs the factor tuples
        for (g, a) in [
            (Graph::complete(3), s2()),
            (Graph::complete(3), t2()),
            (Graph::simple(3, vec![(0, 2)]).unwrap(), t2()),
            (Graph::cycle(4), t2()),
        ] {
            let dual = build_cbs_dual(&g, &a).unwrap();
            let cbs = super::super::build_cbs(&g, &a).unwrap();
            for s in EdgeSubset::all_subsets(g.edge_count()) {
                let ls = g.component_count(s);
                for t in EdgeSubset::all_subsets(g.edge_count()) {
                    if t.len() + 1 != s.len() || !t.is_subset_of(&s) {
                        continue;
                    }
                    let lt = g.component_count(t);
                    let tuples = |slots: usize| -> Vec<Vec<usize>> {
                        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
                        for _ in 0..slots {
                            out = out
                                .into_iter()
                                .flat_map(|w| {
                                    (0..a.dim()).map(move |i| {
                                        let mut w = w.clone();
                                        w.push(i);
                                        w
                                    })
                                })
                                .collect();
                        }
                        out
                    };
                    for u in tuples(ls) {
                        let (sdeg, scol) = dual.position(s, &u).unwrap();
                        let dual_col = dual.complex().differential(sdeg).unwrap().column(scol);
                        for v in tuples(lt) {
                            // left side: coefficient of (t, w) in δ(s, u),
                            // paired against v
                            let mut lhs = Rational::from_int(&(), 0);
                            for (row, coeff) in dual_col {
                                let label = &dual.complex().basis_at(sdeg + 1)[*row];
                                if label.edges != t {
                                    continue;
                                }
                                let p = a
                                    .tensor_pairing(
                                        &TensorElement::pure(label.factors.clone(), coeff.clone()),
                                        &TensorElement::pure(v.clone(), q(1)),
                                    )
                                    .unwrap();
                                lhs += p;
                            }
                            // right side: coefficient of (s, w) in ∂(t, v),
                            // paired against u
                            let mut rhs = Rational::from_int(&(), 0);
                            let tdeg = t.len() as i64;
                            let tcol = cbs
                                .complex()
                                .basis_at(tdeg)
                                .iter()
                                .position(|l| l.edges == t && l.factors == v)
                                .unwrap();
                            for (row, coeff) in
                                cbs.complex().differential(tdeg).unwrap().column(tcol)
                            {
                                let label = &cbs.complex().basis_at(tdeg + 1)[*row];
                                if label.edges != s {
                                    continue;
                                }
                                let p = a
                                    .tensor_pairing(
                                        &TensorElement::pure(u.clone(), q(1)),
                                        &TensorElement::pure(label.factors.clone(), coeff.clone()),
                                    )
                                    .unwrap();
                                rhs += p;
                            }
                            assert_eq!(lhs, rhs, "adjointness fails at S={s} T={t}");
                        }
                    }
                }
            }
        }
    }
}
