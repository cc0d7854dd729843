//! Chromatic polynomial by two independent routes: the edge-subset expansion
//! and the deletion-contraction recursion. The subset route doubles as the
//! graded dimension count of the edge-adding complex.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graph::{EdgeSubset, Graph};

/// Polynomial with exact integer coefficients, ascending degree, trailing
/// zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::from(c)],
        }
        .trimmed()
    }

    /// `c * x^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        IntPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        IntPolynomial {
            coeffs: coeffs.into_iter().map(BigInt::from).collect(),
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        IntPolynomial { coeffs }.trimmed()
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        IntPolynomial { coeffs }.trimmed()
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial { coeffs }.trimmed()
    }

    pub fn pow(&self, k: usize) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `inner` for the variable.
    pub fn compose(&self, inner: &IntPolynomial) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner);
            acc = acc.add(
                &IntPolynomial {
                    coeffs: vec![c.clone()],
                }
                .trimmed(),
            );
        }
        acc
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.sign() == num_bigint::Sign::Minus {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.sign() == num_bigint::Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Chromatic polynomial by the edge-subset expansion
/// `Σ_{S ⊆ E} (-1)^{|S|} λ^{l(S)}`. Loops make the whole sum cancel to zero.
pub fn chromatic_subset(g: &Graph) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for s in EdgeSubset::all_subsets(g.edge_count()) {
        let sign = if s.len() % 2 == 0 { 1 } else { -1 };
        let term = IntPolynomial::monomial(sign, g.component_count(s));
        acc = acc.add(&term);
    }
    acc
}

/// Chromatic polynomial by deletion-contraction:
/// `P(g) = P(g∖e) - P(g/e)` with edgeless base case `λ^n`, memoized on the
/// canonical graph encoding. Results never depend on cache state.
pub fn chromatic_delcon(g: &Graph) -> IntPolynomial {
    let mut memo: HashMap<(usize, Vec<(usize, usize)>), IntPolynomial> = HashMap::new();
    delcon_rec(g, &mut memo)
}

fn delcon_rec(
    g: &Graph,
    memo: &mut HashMap<(usize, Vec<(usize, usize)>), IntPolynomial>,
) -> IntPolynomial {
    if g.edges().iter().any(|&(i, j)| i == j) {
        return IntPolynomial::zero();
    }
    if g.edge_count() == 0 {
        return IntPolynomial::monomial(1, g.n_vertices());
    }
    let key = g.canonical_key();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let e = g.edge_count() - 1;
    let deleted = delcon_rec(&g.delete_edge(e).expect("valid index"), memo);
    let contracted = delcon_rec(&g.contract_edge(e).expect("not a loop"), memo);
    let result = deleted.sub(&contracted);
    memo.insert(key, result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_arithmetic() {
        let p = IntPolynomial::from_coeffs(vec![0, 2, -3, 1]); // x^3 - 3x^2 + 2x
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.evaluate(&BigInt::from(3)), BigInt::from(6));
        let q = IntPolynomial::from_coeffs(vec![1, 1]);
        assert_eq!(q.pow(2), IntPolynomial::from_coeffs(vec![1, 2, 1]));
        // composition: (x^2)(x+1) = (x+1)^2
        let sq = IntPolynomial::monomial(1, 2);
        assert_eq!(sq.compose(&q), q.mul(&q));
        assert_eq!(format!("{p}"), "x^3 - 3*x^2 + 2*x");
    }

    #[test]
    fn subset_route_examples() {
        assert_eq!(
            chromatic_subset(&Graph::complete(3)),
            IntPolynomial::from_coeffs(vec![0, 2, -3, 1])
        );
        assert_eq!(
            chromatic_subset(&Graph::edgeless(4)),
            IntPolynomial::monomial(1, 4)
        );
        let loop_graph = Graph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        assert!(chromatic_subset(&loop_graph).is_zero());
    }

    #[test]
    fn delcon_route_examples() {
        assert_eq!(
            chromatic_delcon(&Graph::complete(2)),
            IntPolynomial::from_coeffs(vec![0, -1, 1])
        );
        // K4: λ^4 - 6λ^3 + 11λ^2 - 6λ
        let k4 = chromatic_delcon(&Graph::complete(4));
        assert_eq!(k4, IntPolynomial::from_coeffs(vec![0, -6, 11, -6, 1]));
        assert_eq!(k4, chromatic_subset(&Graph::complete(4)));
    }

    #[test]
    fn doubled_edge_collapses() {
        let single = Graph::simple(3, vec![(0, 1), (1, 2)]).unwrap();
        let doubled = Graph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(chromatic_delcon(&single), chromatic_delcon(&doubled));
        assert_eq!(chromatic_subset(&doubled), chromatic_delcon(&doubled));
    }

    #[test]
    fn routes_agree_on_all_small_simple_graphs() {
        // exhaustive over labeled simple graphs with ≤ 5 vertices
        for n in 0..=5usize {
            let all_pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .collect();
            let m = all_pairs.len();
            for mask in 0u64..(1 << m) {
                let edges: Vec<(usize, usize)> = (0..m)
                    .filter(|k| mask & (1 << k) != 0)
                    .map(|k| all_pairs[k])
                    .collect();
                let g = Graph::simple(n, edges).unwrap();
                assert_eq!(chromatic_subset(&g), chromatic_delcon(&g), "graph {g}");
            }
        }
    }
}
