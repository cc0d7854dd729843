//! The connected-subgraph complex: degree `i` is spanned by the spanning
//! connected edge subsets with `i` edges, and the differential removes one
//! edge at a time, dropping removals that disconnect. Loops and parallel
//! edges are allowed.

use std::collections::{BTreeMap, HashMap};

use crate::exterior::{removal_sign, ExteriorMonomial};
use crate::field::{signed, Field};
use crate::graph::{EdgeSubset, Graph};
use crate::homology::SparseMatrix;

use super::{chain_map_commutes, BasisLabel, BuildError, ChainComplex, GradingKind};

/// Builds the connected-subgraph complex of a connected graph. An edgeless
/// one-vertex graph gives the complex concentrated in degree 0; an edgeless
/// graph on more vertices gives the empty complex.
pub fn build_conn<F: Field>(g: &Graph, params: &F::Params) -> Result<ChainComplex<F>, BuildError> {
    if g.edge_count() > 0 && g.component_count(g.full_subset()) != 1 {
        return Err(BuildError::Disconnected);
    }
    conn_unchecked(g, params)
}

/// As [`build_conn`] without the connectivity precondition: a disconnected
/// graph simply has no spanning connected subsets, hence the empty complex.
pub(crate) fn conn_unchecked<F: Field>(
    g: &Graph,
    params: &F::Params,
) -> Result<ChainComplex<F>, BuildError> {
    let one = F::from_int(params, 1);
    let mut basis: BTreeMap<i64, Vec<BasisLabel>> = BTreeMap::new();
    let mut index: HashMap<u64, (i64, usize)> = HashMap::new();
    for s in EdgeSubset::all_subsets(g.edge_count()) {
        if g.component_count(s) != 1 {
            continue;
        }
        let deg = s.len() as i64;
        let bucket = basis.entry(deg).or_default();
        index.insert(s.bits(), (deg, bucket.len()));
        bucket.push(BasisLabel::new(s, Vec::new()));
    }
    let mut diffs: BTreeMap<i64, SparseMatrix<F>> = BTreeMap::new();
    for (&deg, bucket) in &basis {
        let mut m = SparseMatrix::zero(basis.get(&(deg - 1)).map_or(0, Vec::len), bucket.len());
        for (col, label) in bucket.iter().enumerate() {
            for alpha in label.edges.iter() {
                let t = label.edges.without(alpha);
                if let Some(&(tdeg, row)) = index.get(&t.bits()) {
                    debug_assert_eq!(tdeg, deg - 1);
                    m.add_entry(
                        row,
                        col,
                        signed(
                            removal_sign(ExteriorMonomial(label.edges), alpha),
                            one.clone(),
                        ),
                    );
                }
            }
        }
        diffs.insert(deg, m);
    }
    ChainComplex::from_parts(GradingKind::EdgeCount, -1, basis, diffs)
}

/// The deletion-contraction sequence at the last-ordered edge `e`:
/// the inclusion of subgraphs missing `e` and the contraction map on
/// subgraphs containing it, with the contracted complex one degree lower.
#[derive(Debug, Clone)]
pub struct DelconSequence<F: Field> {
    pub full: ChainComplex<F>,
    pub deleted: ChainComplex<F>,
    pub contracted: ChainComplex<F>,
    /// Degree-preserving inclusion `C(Γ∖e) → C(Γ)`.
    pub inclusion: BTreeMap<i64, SparseMatrix<F>>,
    /// Contraction `C(Γ) → C(Γ/e)`, dropping subgraphs without `e` and
    /// shifting degree by -1.
    pub contraction: BTreeMap<i64, SparseMatrix<F>>,
}

/// Builds the sequence for a connected graph and its lexicographically last
/// edge. The edge must not be a loop.
pub fn delcon_sequence<F: Field>(
    g: &Graph,
    e: usize,
    params: &F::Params,
) -> Result<DelconSequence<F>, BuildError> {
    g.edge(e)?;
    if e + 1 != g.edge_count() {
        return Err(BuildError::EdgeNotLast {
            edge: e,
            count: g.edge_count(),
        });
    }
    let one = F::from_int(params, 1);
    let full = build_conn::<F>(g, params)?;
    let deleted_graph = g.delete_edge(e)?;
    let deleted = conn_unchecked::<F>(&deleted_graph, params)?;
    let (contracted_graph, edge_map) = g.contract_edge_mapped(e)?;
    let contracted = conn_unchecked::<F>(&contracted_graph, params)?;

    // indices of the full complex's basis, per degree
    let full_index: HashMap<u64, (i64, usize)> = full
        .degrees()
        .into_iter()
        .flat_map(|deg| {
            full.basis_at(deg)
                .iter()
                .enumerate()
                .map(move |(pos, l)| (l.edges.bits(), (deg, pos)))
        })
        .collect();
    let contracted_index: HashMap<u64, (i64, usize)> = contracted
        .degrees()
        .into_iter()
        .flat_map(|deg| {
            contracted
                .basis_at(deg)
                .iter()
                .enumerate()
                .map(move |(pos, l)| (l.edges.bits(), (deg, pos)))
        })
        .collect();

    // inclusion: edge indices of Γ∖e coincide with those of Γ since e is last
    let mut inclusion = BTreeMap::new();
    for deg in deleted.degrees() {
        let mut m = SparseMatrix::zero(full.dim(deg), deleted.dim(deg));
        for (col, label) in deleted.basis_at(deg).iter().enumerate() {
            let (fdeg, row) = full_index[&label.edges.bits()];
            debug_assert_eq!(fdeg, deg);
            m.add_entry(row, col, one.clone());
        }
        inclusion.insert(deg, m);
    }

    // contraction: map surviving edges through the relabeling; the sign is
    // the inversion parity of the induced index sequence
    let mut contraction = BTreeMap::new();
    for deg in full.degrees() {
        let mut m = SparseMatrix::zero(contracted.dim(deg - 1), full.dim(deg));
        for (col, label) in full.basis_at(deg).iter().enumerate() {
            if !label.edges.contains(e) {
                continue;
            }
            let images: Vec<usize> = label
                .edges
                .without(e)
                .iter()
                .map(|alpha| edge_map[alpha].expect("non-contracted edge survives"))
                .collect();
            let mut inversions = 0usize;
            for x in 0..images.len() {
                for y in x + 1..images.len() {
                    if images[x] > images[y] {
                        inversions += 1;
                    }
                }
            }
            let image_set = EdgeSubset::from_indices(images.iter().copied());
            let (cdeg, row) = contracted_index[&image_set.bits()];
            debug_assert_eq!(cdeg, deg - 1);
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            m.add_entry(row, col, signed(sign, one.clone()));
        }
        contraction.insert(deg, m);
    }

    Ok(DelconSequence {
        full,
        deleted,
        contracted,
        inclusion,
        contraction,
    })
}

impl<F: Field> DelconSequence<F> {
    /// Rank certificates for exactness: the inclusion is injective, the
    /// contraction surjective, the ranks add up, the composite vanishes, and
    /// both maps commute with the differentials.
    pub fn verify_exact(&self) -> bool {
        let mut degrees: Vec<i64> = self.full.degrees();
        degrees.extend(self.deleted.degrees());
        degrees.extend(self.contracted.degrees().iter().map(|d| d + 1));
        degrees.sort_unstable();
        degrees.dedup();
        for &deg in &degrees {
            let alpha = match self.inclusion.get(&deg) {
                Some(m) => m.clone(),
                None => SparseMatrix::zero(self.full.dim(deg), self.deleted.dim(deg)),
            };
            let beta = match self.contraction.get(&deg) {
                Some(m) => m.clone(),
                None => SparseMatrix::zero(self.contracted.dim(deg - 1), self.full.dim(deg)),
            };
            let (ra, rb) = (alpha.rank(), beta.rank());
            if ra != self.deleted.dim(deg) || rb != self.contracted.dim(deg - 1) {
                return false;
            }
            if ra + rb != self.full.dim(deg) {
                return false;
            }
            if !beta.compose(&alpha).is_zero() {
                return false;
            }
        }
        chain_map_commutes(&self.deleted, &self.full, &self.inclusion, 0)
            && chain_map_commutes(&self.full, &self.contracted, &self.contraction, -1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti;
    use crate::Rational;

    #[test]
    fn k3_dimensions() {
        let c = build_conn::<Rational>(&Graph::complete(3), &()).unwrap();
        assert_eq!(c.degrees(), vec![2, 3]);
        assert_eq!(c.dim(2), 3);
        assert_eq!(c.dim(3), 1);
    }

    #[test]
    fn k2_single_generator() {
        let c = build_conn::<Rational>(&Graph::complete(2), &()).unwrap();
        assert_eq!(c.degrees(), vec![1]);
        assert_eq!(c.dim(1), 1);
    }

    #[test]
    fn loop_removal_keeps_connectivity() {
        // K2 plus a loop: removing the loop is the only surviving term of
        // the top differential
        let g = Graph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        let c = build_conn::<Rational>(&g, &()).unwrap();
        let top = c.differential(2).unwrap();
        assert_eq!(top.nnz(), 1);
        let col = top.column(0);
        let target = &c.basis_at(1)[col[0].0];
        assert_eq!(target.edges.len(), 1);
        let (i, j) = g.edge(target.edges.iter().next().unwrap()).unwrap();
        assert_ne!(i, j);
    }

    #[test]
    fn degenerate_graphs() {
        let c = build_conn::<Rational>(&Graph::edgeless(1), &()).unwrap();
        assert_eq!(c.degrees(), vec![0]);
        assert_eq!(c.dim(0), 1);

        let c = build_conn::<Rational>(&Graph::edgeless(3), &()).unwrap();
        assert!(c.degrees().is_empty());

        let disconnected = Graph::simple(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            build_conn::<Rational>(&disconnected, &()),
            Err(BuildError::Disconnected)
        ));
    }

    #[test]
    fn homology_concentrated_with_factorial_rank() {
        for (n, expected) in [(3usize, 2usize), (4, 6)] {
            let c = build_conn::<Rational>(&Graph::complete(n), &()).unwrap();
            let b = betti(&c);
            assert_eq!(b.dim((n - 1) as i64), expected);
            for g in c.degrees() {
                if g != (n - 1) as i64 {
                    assert_eq!(b.dim(g), 0, "stray homology at {g}");
                }
            }
        }
    }

    #[test]
    fn delcon_requires_last_edge() {
        let g = Graph::complete(3);
        assert!(matches!(
            delcon_sequence::<Rational>(&g, 0, &()),
            Err(BuildError::EdgeNotLast { .. })
        ));
        assert!(delcon_sequence::<Rational>(&g, 2, &()).is_ok());
    }

    #[test]
    fn delcon_exactness() {
        for g in [
            Graph::complete(3),
            Graph::complete(4),
            Graph::cycle(4),
            Graph::cycle(5),
        ] {
            let e = g.edge_count() - 1;
            let seq = delcon_sequence::<Rational>(&g, e, &()).unwrap();
            assert!(seq.verify_exact(), "exactness fails on {g}");
        }
    }

    #[test]
    fn contraction_vanishes_without_the_edge() {
        let g = Graph::complete(3);
        let seq = delcon_sequence::<Rational>(&g, 2, &()).unwrap();
        for deg in seq.full.degrees() {
            let beta = &seq.contraction[&deg];
            for (col, label) in seq.full.basis_at(deg).iter().enumerate() {
                if !label.edges.contains(2) {
                    assert!(beta.column(col).is_empty());
                }
            }
        }
    }
}
