//! Partition filtration strata. The filtration by component count is
//! decreasing in the block count `k`; the subquotient at `k` keeps the labels
//! with exactly `k - 1` components and the part of the differential that
//! preserves the component count.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::graph::Graph;
use crate::homology::SparseMatrix;

use super::{BuildError, ChainComplex, DualComplex, GradingKind, RnComplex};

fn stratum<F: Field>(
    g: &Graph,
    complex: &ChainComplex<F>,
    k: usize,
) -> Result<ChainComplex<F>, BuildError> {
    let n = g.n_vertices();
    if k < 2 || k > n + 1 {
        return Err(BuildError::BadStratum { k, n });
    }
    let l_target = k - 1;
    let mut basis = BTreeMap::new();
    let mut kept: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for deg in complex.degrees() {
        let mut keep = Vec::new();
        let mut labels = Vec::new();
        for (pos, label) in complex.basis_at(deg).iter().enumerate() {
            if g.component_count(label.edges) == l_target {
                keep.push(pos);
                labels.push(label.clone());
            }
        }
        if !labels.is_empty() {
            basis.insert(deg, labels);
        }
        kept.insert(deg, keep);
    }
    let mut diffs = BTreeMap::new();
    for (&deg, labels) in &basis {
        let next_keep = kept.get(&(deg + 1)).cloned().unwrap_or_default();
        let next_dim = basis.get(&(deg + 1)).map_or(0, Vec::len);
        let mut m = SparseMatrix::zero(next_dim, labels.len());
        if let Some(ambient) = complex.differential(deg) {
            let row_of: BTreeMap<usize, usize> = next_keep
                .iter()
                .enumerate()
                .map(|(q, &pos)| (pos, q))
                .collect();
            for (col, &ambient_col) in kept[&deg].iter().enumerate() {
                for (row, coeff) in ambient.column(ambient_col) {
                    if let Some(&q) = row_of.get(row) {
                        m.add_entry(q, col, coeff.clone());
                    }
                }
            }
        }
        diffs.insert(deg, m);
    }
    ChainComplex::from_parts(GradingKind::TotalDegree, 1, basis, diffs)
}

/// Stratum of the dual complex at block count `k`: labels with `l(S) = k-1`,
/// with the component-preserving part of the differential.
pub fn filtration_quotient_dual<F: Field>(
    dual: &DualComplex<F>,
    k: usize,
) -> Result<ChainComplex<F>, BuildError> {
    stratum(dual.graph(), dual.complex(), k)
}

/// Stratum of the quotient model at block count `k`.
pub fn filtration_quotient_rn<F: Field>(
    rn: &RnComplex<F>,
    k: usize,
) -> Result<ChainComplex<F>, BuildError> {
    stratum(rn.graph(), rn.complex(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_cbs_dual, build_conn, build_rn};
    use crate::frobenius::FrobeniusAlgebra;
    use crate::homology::betti;
    use crate::Rational;

    fn s2() -> FrobeniusAlgebra<Rational> {
        FrobeniusAlgebra::sphere(2, &())
    }

    #[test]
    fn singleton_stratum_is_empty_subset_only() {
        let g = Graph::complete(3);
        let dual = build_cbs_dual(&g, &s2()).unwrap();
        let c = stratum(&g, dual.complex(), g.n_vertices() + 1).unwrap();
        assert_eq!(c.total_dim(), s2().dim().pow(3));
        for deg in c.degrees() {
            assert!(c.basis_at(deg).iter().all(|l| l.edges.is_empty()));
            assert!(c.differential(deg).unwrap().is_zero());
        }
    }

    #[test]
    fn connected_stratum_matches_conn_dimensions() {
        // the l = 1 stratum's labels are the connected spanning subsets,
        // tensored with single algebra factors
        let g = Graph::complete(3);
        let a = s2();
        let dual = build_cbs_dual(&g, &a).unwrap();
        let c = filtration_quotient_dual(&dual, 2).unwrap();
        let conn = build_conn::<Rational>(&g, &()).unwrap();
        for i in conn.degrees() {
            let count = c
                .degrees()
                .iter()
                .flat_map(|&deg| c.basis_at(deg))
                .filter(|l| l.edges.len() as i64 == i)
                .count();
            assert_eq!(count, conn.dim(i) * a.dim());
        }
    }

    #[test]
    fn stratum_bounds_checked() {
        let g = Graph::complete(3);
        let dual = build_cbs_dual(&g, &s2()).unwrap();
        assert!(matches!(
            filtration_quotient_dual(&dual, 1),
            Err(BuildError::BadStratum { .. })
        ));
        assert!(matches!(
            filtration_quotient_dual(&dual, 5),
            Err(BuildError::BadStratum { .. })
        ));
    }

    #[test]
    fn dual_and_rn_strata_share_betti_tables() {
        let g = Graph::complete(4);
        let a = s2();
        let dual = build_cbs_dual(&g, &a).unwrap();
        let rn = build_rn(&g, &a).unwrap();
        for k in 2..=g.n_vertices() + 1 {
            let left = betti(&filtration_quotient_dual(&dual, k).unwrap());
            let right = betti(&filtration_quotient_rn(&rn, k).unwrap());
            for (&deg, &dim) in &left.dims {
                assert_eq!(dim, right.dim(deg), "stratum {k} degree {deg}");
            }
            for (&deg, &dim) in &right.dims {
                assert_eq!(dim, left.dim(deg), "stratum {k} degree {deg}");
            }
        }
    }
}
